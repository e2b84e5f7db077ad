//! Sparse multivariate Laurent polynomials over `BigInt`.
//!
//! One fixed variable universe serves the whole crate (see [`vars`]): the
//! monomial generators `q^{1/2}`, `q^{k/2}`, `q^{alpha/2}` and their
//! mode-graded companions `q^{m/2}`, `q^{km/2}`, `q^{alpha m/2}`, the plain
//! commuting symbols `k`, `alpha`, `p_a^1..p_a^5`, a `z^{m/2}` tracker and
//! the eigenvalue monomials `q^{p_a^i}`.  Exponents may be negative
//! (Laurent); all arithmetic is exact.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Number of variables in the fixed universe.
pub const NVARS: usize = 24;

/// Indices into the monomial exponent array.
pub mod vars {
    /// `q^{1/2}` (all `Q*` exponents are counted in half steps).
    pub const Q: usize = 0;
    /// `q^{k/2}`.
    pub const QK: usize = 1;
    /// `q^{alpha/2}`.
    pub const QA: usize = 2;
    /// `q^{m/2}` — mode-graded copy of `Q`.
    pub const QM: usize = 3;
    /// `q^{km/2}`.
    pub const QKM: usize = 4;
    /// `q^{alpha m/2}`.
    pub const QAM: usize = 5;
    /// the symbol `k` as a polynomial variable.
    pub const SK: usize = 6;
    /// the symbol `alpha` as a polynomial variable.
    pub const SA: usize = 7;
    /// symbols `p_a^1 .. p_a^5`.
    pub const SP: usize = 8; // 8..=12
    /// `z^{m/2}` — spectral-parameter power linear in the mode number.
    pub const ZM: usize = 13;
    /// `q^{p_a^1} .. q^{p_a^5}`.
    pub const QP: usize = 14; // 14..=18
}

/// Exponent vector of one monomial.
pub type Mono = [i16; NVARS];

/// The all-zero monomial.
pub const MONO_ONE: Mono = [0; NVARS];

pub fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut r = [0i16; NVARS];
    for i in 0..NVARS {
        r[i] = a[i] + b[i];
    }
    r
}

pub fn mono_div(a: &Mono, b: &Mono) -> Mono {
    let mut r = [0i16; NVARS];
    for i in 0..NVARS {
        r[i] = a[i] - b[i];
    }
    r
}

/// Sparse Laurent polynomial; invariant: no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    pub terms: BTreeMap<Mono, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(MONO_ONE, c);
        }
        Poly { terms: t }
    }

    pub fn from_i64(c: i64) -> Self {
        Poly::constant(BigInt::from(c))
    }

    pub fn monomial(m: Mono, c: BigInt) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(m, c);
        }
        Poly { terms: t }
    }

    /// Single variable to a (possibly negative) power.
    pub fn var_pow(v: usize, e: i16) -> Self {
        let mut m = MONO_ONE;
        m[v] = e;
        Poly::monomial(m, BigInt::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&MONO_ONE)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// True if the polynomial is a single term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// True if no variable outside `allowed` appears.
    pub fn uses_only(&self, allowed: &[usize]) -> bool {
        self.terms.keys().all(|m| {
            (0..NVARS).all(|v| m[v] == 0 || allowed.contains(&v))
        })
    }

    /// Indices of variables that actually occur.
    pub fn active_vars(&self) -> Vec<usize> {
        let mut act = [false; NVARS];
        for m in self.terms.keys() {
            for v in 0..NVARS {
                if m[v] != 0 {
                    act[v] = true;
                }
            }
        }
        (0..NVARS).filter(|&v| act[v]).collect()
    }

    pub fn add_term(&mut self, m: Mono, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                *old += c;
                if old.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(*m, c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                r.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        r
    }

    pub fn mul_mono(&self, m: &Mono, c: &BigInt) -> Poly {
        let mut r = Poly::zero();
        for (ma, ca) in &self.terms {
            r.add_term(mono_mul(ma, m), ca * c);
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// gcd of all coefficients (positive), 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Componentwise minimum of all exponent vectors (the monomial content).
    pub fn mono_content(&self) -> Mono {
        let mut min = match self.terms.keys().next() {
            Some(m) => *m,
            None => return MONO_ONE,
        };
        for m in self.terms.keys() {
            for v in 0..NVARS {
                if m[v] < min[v] {
                    min[v] = m[v];
                }
            }
        }
        min
    }

    /// Divide out an exact monomial factor.
    pub fn div_mono(&self, m: &Mono) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mono_div(mm, m), c.clone()))
                .collect(),
        }
    }

    /// Divide all coefficients by an exact common factor.
    pub fn div_content(&self, c: &BigInt) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, co)| (*m, co / c)).collect(),
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Exact division in the Laurent ring: `Some(q)` with `self == q * d`,
    /// `None` if `d` does not divide `self`.  Coefficient arithmetic stays
    /// integral; callers that need rational quotients should primitivize
    /// first (see `Coeff::reduce`).
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        // Normalize the Laurent freedom away, then run lex division.
        let amc = self.mono_content();
        let dmc = d.mono_content();
        let a = self.div_mono(&amc);
        let dd = d.div_mono(&dmc);
        let (dl_mono, dl_coef) = dd.leading().map(|(m, c)| (*m, c.clone()))?;
        let mut rem = a;
        let mut quo = Poly::zero();
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.leading().unwrap();
                (*m, c.clone())
            };
            let qm = mono_div(&rm, &dl_mono);
            if qm.iter().any(|&e| e < 0) {
                return None;
            }
            let (qc, r) = rc.div_rem(&dl_coef);
            if !r.is_zero() {
                return None;
            }
            quo.add_term(qm, qc.clone());
            rem = rem.sub(&dd.mul_mono(&qm, &qc));
        }
        Some(quo.mul_mono(&mono_div(&amc, &dmc), &BigInt::one()))
    }

    /// Substitute, for every monomial, the exponent of variable `from` into
    /// variable `to` scaled by `scale` (used for `m -> integer` folding and
    /// for the `k = alpha` identification).
    pub fn fold_var(&self, from: usize, to: usize, scale: i16) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let mut mm = *m;
            let e = mm[from];
            mm[from] = 0;
            mm[to] += e * scale;
            r.add_term(mm, c.clone());
        }
        r
    }

    /// Negate the exponent of one variable in every monomial.
    pub fn negate_var(&self, v: usize) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let mut mm = *m;
            mm[v] = -mm[v];
            r.add_term(mm, c.clone());
        }
        r
    }

    /// Substitute the *symbol* variable `v` (a true polynomial variable,
    /// not a monomial generator) by the rational `num/den`.  Returns the
    /// numerator polynomial and the power of `den` cleared.
    pub fn subst_symbol_rational(&self, v: usize, num: i64, den: i64) -> (Poly, u32) {
        let maxe = self
            .terms
            .keys()
            .map(|m| m[v])
            .max()
            .unwrap_or(0)
            .max(0) as u32;
        let nb = BigInt::from(num);
        let db = BigInt::from(den);
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let e = m[v];
            assert!(e >= 0, "negative symbol exponent");
            let mut mm = *m;
            mm[v] = 0;
            let coef = c * nb.pow(e as u32) * db.pow(maxe - e as u32);
            r.add_term(mm, coef);
        }
        (r, maxe)
    }
}

/// Compare by leading monomial then recursively — a total order used only
/// to keep operator sums canonical.
impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        let a: Vec<_> = self.terms.iter().collect();
        let b: Vec<_> = other.terms.iter().collect();
        a.cmp(&b)
    }
}

/// Univariate-in-`v` view used by the gcd routine.
fn to_univariate(p: &Poly, v: usize) -> BTreeMap<i16, Poly> {
    let mut out: BTreeMap<i16, Poly> = BTreeMap::new();
    for (m, c) in &p.terms {
        let mut mm = *m;
        let e = mm[v];
        mm[v] = 0;
        out.entry(e)
            .or_insert_with(Poly::zero)
            .add_term(mm, c.clone());
    }
    out
}

/// gcd for polynomials that are univariate in a common variable after
/// content extraction; multivariate inputs fall back to `1` (fractions
/// then stay unreduced, which is still exact).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let a0 = a.div_mono(&a.mono_content());
    let b0 = b.div_mono(&b.mono_content());
    let ca = a0.content();
    let cb = b0.content();
    let cg = ca.gcd(&cb);
    let ap = a0.div_content(&ca);
    let bp = b0.div_content(&cb);
    let va = ap.active_vars();
    let vb = bp.active_vars();
    if va.len() <= 1 && vb.len() <= 1 && (va.is_empty() || vb.is_empty() || va == vb) {
        let v = va.first().or(vb.first()).copied();
        let g = match v {
            None => Poly::one(),
            Some(v) => univariate_gcd(&ap, &bp, v),
        };
        return g.mul(&Poly::constant(cg));
    }
    // Multivariate: only try the cheap exact-division cases.
    if let Some(_q) = ap.div_exact(&bp) {
        return bp.mul(&Poly::constant(cg));
    }
    if let Some(_q) = bp.div_exact(&ap) {
        return ap.mul(&Poly::constant(cg));
    }
    Poly::constant(cg)
}

/// Primitive-PRS Euclid in one variable with `Poly` kept single-variable.
fn univariate_gcd(a: &Poly, b: &Poly, v: usize) -> Poly {
    let mut f = a.clone();
    let mut g = b.clone();
    loop {
        if g.is_zero() {
            let c = f.content();
            let mut r = f.div_content(&c);
            // normalize sign on the leading coefficient
            if let Some((_, lc)) = r.leading() {
                if lc.is_negative() {
                    r = r.neg();
                }
            }
            return r;
        }
        let r = pseudo_rem(&f, &g, v);
        f = g;
        let c = r.content();
        g = if c.is_zero() { r } else { r.div_content(&c) };
        g = g.div_mono(&g.mono_content());
    }
}

/// Pseudo-remainder of univariate (in `v`) polynomials.
fn pseudo_rem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let bu = to_univariate(b, v);
    let (&bd, blc) = bu.iter().next_back().unwrap();
    let mut r = a.clone();
    loop {
        let ru = to_univariate(&r, v);
        let (&rd, rlc) = match ru.iter().next_back() {
            Some(x) => x,
            None => return r,
        };
        if rd < bd {
            return r;
        }
        // r <- blc * r - rlc * x^{rd-bd} * b
        let shift = Poly::var_pow(v, rd - bd);
        r = r.mul(blc).sub(&rlc.mul(&shift).mul(b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(e: i16) -> Poly {
        Poly::var_pow(vars::Q, e)
    }

    #[test]
    fn mul_and_div_exact_roundtrip() {
        // (q - q^{-1})(q + q^{-1}) = q^2 - q^{-2}
        let a = qp(2).sub(&qp(-2));
        let b = qp(2).add(&qp(-2));
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(p.div_exact(&b), Some(a.clone()));
        // non-divisor
        let c = qp(2).add(&Poly::from_i64(2));
        assert!(p.div_exact(&c).is_none());
    }

    #[test]
    fn laurent_monomial_content() {
        let p = qp(-4).add(&qp(2));
        let mc = p.mono_content();
        assert_eq!(mc[vars::Q], -4);
        let q = p.div_mono(&mc);
        assert!(q.terms.keys().all(|m| m[vars::Q] >= 0));
    }

    #[test]
    fn univariate_gcd_cancels() {
        // gcd(q^2 - q^{-2}, q - q^{-1}) should be q - q^{-1} up to monomial
        let a = qp(4).sub(&Poly::one()); // q^2 - 1 in half steps... (Q^4 - 1)
        let b = qp(2).sub(&Poly::one());
        let g = gcd(&a, &b);
        assert_eq!(a.div_exact(&g).is_some(), true);
        assert_eq!(b.div_exact(&g).is_some(), true);
        assert!(g.terms.len() == 2);
    }
}
