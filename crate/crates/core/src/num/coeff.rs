//! Exact scalar coefficients: fractions of the Laurent polynomials in
//! [`super::poly`].
//!
//! Canonical form strips integer and monomial content, keeps the
//! denominator sign-normalized and attempts exact-division and
//! single-variable gcd reduction.  Fully multivariate fractions may stay
//! unreduced; equality is then decided by cross multiplication, which is
//! still exact.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{gcd, vars, Mono, Poly, MONO_ONE, NVARS};

/// An exact scalar of the engine.
#[derive(Clone)]
pub struct Coeff {
    pub num: Poly,
    pub den: Poly,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Coeff { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Coeff { num: Poly::from_i64(n), den: Poly::one() }
    }

    pub fn rational(n: i64, d: i64) -> Self {
        assert!(d != 0);
        Coeff { num: Poly::from_i64(n), den: Poly::from_i64(d) }.reduced()
    }

    pub fn from_poly(p: Poly) -> Self {
        Coeff { num: p, den: Poly::one() }
    }

    pub fn frac(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Coeff { num, den }.reduced()
    }

    /// The symbol `k` (as a polynomial, not a q-power).
    pub fn sym_k() -> Self {
        Coeff::from_poly(Poly::var_pow(vars::SK, 1))
    }

    /// The symbol `alpha`.
    pub fn sym_alpha() -> Self {
        Coeff::from_poly(Poly::var_pow(vars::SA, 1))
    }

    /// The symbol `p_a^i` (1-based, i <= 5).
    pub fn sym_p(i: usize) -> Self {
        assert!((1..=5).contains(&i));
        Coeff::from_poly(Poly::var_pow(vars::SP + i - 1, 1))
    }

    /// The monomial `q^{p_a^i}` raised to integer power `e`.
    pub fn qp_pow(i: usize, e: i16) -> Self {
        assert!((1..=5).contains(&i));
        Coeff::from_poly(Poly::var_pow(vars::QP + i - 1, e))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn reduced(mut self) -> Self {
        self.reduce();
        self
    }

    pub fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        // monomial content
        let mn = self.num.mono_content();
        let md = self.den.mono_content();
        let common = {
            let mut c = [0i16; NVARS];
            for v in 0..NVARS {
                c[v] = mn[v].min(md[v]);
            }
            c
        };
        if common != MONO_ONE {
            self.num = self.num.div_mono(&common);
            self.den = self.den.div_mono(&common);
        }
        // a pure monomial denominator divides exactly
        if self.den.is_monomial() {
            let (m, c) = {
                let (m, c) = self.den.leading().unwrap();
                (*m, c.clone())
            };
            self.num = self.num.div_mono(&m);
            self.den = Poly::constant(c);
        }
        // integer content
        let cn = self.num.content();
        let cd = self.den.content();
        let g = {
            use num_integer::Integer;
            cn.gcd(&cd)
        };
        if !g.is_one() && !g.is_zero() {
            self.num = self.num.div_content(&g);
            self.den = self.den.div_content(&g);
        }
        if !self.den.is_monomial() || !self.num.is_zero() {
            // try exact divisions / single-variable gcd
            if self.den.is_one() {
                // done below
            } else if let Some(q) = self.num.div_exact(&self.den) {
                self.num = q;
                self.den = Poly::one();
            } else {
                let g = gcd(&self.num, &self.den);
                if !g.is_one() {
                    if let (Some(qn), Some(qd)) =
                        (self.num.div_exact(&g), self.den.div_exact(&g))
                    {
                        self.num = qn;
                        self.den = qd;
                    }
                }
            }
        }
        // sign-normalize the denominator
        if let Some((_, lc)) = self.den.leading() {
            if lc.is_negative() {
                self.num = self.num.neg();
                self.den = self.den.neg();
            }
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Coeff { num: self.num.add(&other.num), den: self.den.clone() }
                .reduced();
        }
        Coeff {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
        .reduced()
    }

    pub fn neg(&self) -> Coeff {
        Coeff { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        if self.is_zero() || other.is_zero() {
            return Coeff::zero();
        }
        Coeff { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
            .reduced()
    }

    pub fn div(&self, other: &Coeff) -> Coeff {
        assert!(!other.is_zero(), "division by zero coefficient");
        Coeff { num: self.num.mul(&other.den), den: self.den.mul(&other.num) }
            .reduced()
    }

    pub fn inv(&self) -> Coeff {
        assert!(!self.is_zero());
        Coeff { num: self.den.clone(), den: self.num.clone() }.reduced()
    }

    pub fn scale_int(&self, c: i64) -> Coeff {
        self.mul(&Coeff::from_int(c))
    }

    pub fn pow_int(&self, e: i32) -> Coeff {
        let b = if e < 0 { self.inv() } else { self.clone() };
        let mut r = Coeff::one();
        for _ in 0..e.unsigned_abs() {
            r = r.mul(&b);
        }
        r
    }

    /// Exact equality by cross multiplication.
    pub fn eq(&self, other: &Coeff) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Negate the mode grading (substitute `m -> -m`): flips the exponents
    /// of `q^{m/2}`, `q^{km/2}`, `q^{alpha m/2}` and `z^{m/2}`.
    pub fn flip_m(&self) -> Coeff {
        let f = |p: &Poly| {
            p.negate_var(vars::QM)
                .negate_var(vars::QKM)
                .negate_var(vars::QAM)
                .negate_var(vars::ZM)
        };
        Coeff { num: f(&self.num), den: f(&self.den) }.reduced()
    }

    /// Specialize the mode number to a concrete integer `m`, folding the
    /// mode-graded monomials into their base companions.  `z^{m/2}` is not
    /// allowed here.
    pub fn subst_m(&self, m: i64) -> Coeff {
        let f = |p: &Poly| {
            assert!(p.uses_only(&[
                vars::Q, vars::QK, vars::QA, vars::QM, vars::QKM, vars::QAM,
                vars::SK, vars::SA,
            ]) || p.active_vars().iter().all(|&v| v != vars::ZM),
                "z^m tracker cannot be specialized here");
            let m16 = i16::try_from(m).expect("mode number out of range");
            p.fold_var(vars::QM, vars::Q, m16)
                .fold_var(vars::QKM, vars::QK, m16)
                .fold_var(vars::QAM, vars::QA, m16)
        };
        Coeff { num: f(&self.num), den: f(&self.den) }.reduced()
    }

    /// Identify `k = alpha`: folds `q^{k/2}` into `q^{alpha/2}`, `q^{km/2}`
    /// into `q^{alpha m/2}` and the symbol `k` into the symbol `alpha`.
    pub fn subst_k_eq_alpha(&self) -> Coeff {
        let f = |p: &Poly| {
            p.fold_var(vars::QK, vars::QA, 1)
                .fold_var(vars::QKM, vars::QAM, 1)
                .fold_var(vars::SK, vars::SA, 1)
        };
        Coeff { num: f(&self.num), den: f(&self.den) }.reduced()
    }

    /// Substitute a rational value for the symbol `alpha`.  Panics if any
    /// `q^{alpha}`-graded monomial is present (those cannot take rational
    /// exponents in this ring).
    pub fn subst_alpha_rational(&self, num: i64, den: i64) -> Coeff {
        assert!(den != 0);
        for p in [&self.num, &self.den] {
            assert!(
                p.active_vars().iter().all(|&v| v != vars::QA && v != vars::QAM),
                "q^alpha monomials cannot be specialized to rational alpha"
            );
        }
        let (n, en) = self.num.subst_symbol_rational(vars::SA, num, den);
        let (d, ed) = self.den.subst_symbol_rational(vars::SA, num, den);
        // clear the mismatched powers of den
        let scale = |p: Poly, extra: u32| {
            if extra == 0 {
                p
            } else {
                p.mul(&Poly::constant(BigInt::from(den).pow(extra)))
            }
        };
        let (n, d) = if en >= ed {
            (n, scale(d, en - ed))
        } else {
            (scale(n, ed - en), d)
        };
        Coeff { num: n, den: d }.reduced()
    }

    /// If the coefficient is an integer, return it.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if !self.den.is_one() {
            return None;
        }
        if self.num.is_monomial() {
            let (m, c) = self.num.leading().unwrap();
            if *m == MONO_ONE {
                return Some(c.clone());
            }
        }
        None
    }

    /// If the coefficient is `c * q^{e}` with `e` in the `{1,k,alpha}`
    /// lattice, return `(c, e)` as (integer numerator, integer denominator,
    /// half-lattice exponent).
    pub fn as_q_monomial(&self) -> Option<(BigInt, BigInt, super::super::exponent::ExponentVec)> {
        if !self.num.is_monomial() || !self.den.is_monomial() {
            return None;
        }
        let (mn, cn) = self.num.leading().unwrap();
        let (md, cd) = self.den.leading().unwrap();
        let m = super::poly::mono_div(mn, md);
        for v in 0..NVARS {
            if m[v] != 0 && v != vars::Q && v != vars::QK && v != vars::QA {
                return None;
            }
        }
        Some((
            cn.clone(),
            cd.clone(),
            super::super::exponent::ExponentVec {
                c2: m[vars::Q] as i64,
                k2: m[vars::QK] as i64,
                a2: m[vars::QA] as i64,
            },
        ))
    }
}

impl PartialEq for Coeff {
    fn eq(&self, other: &Self) -> bool {
        Coeff::eq(self, other)
    }
}
impl Eq for Coeff {}

impl PartialOrd for Coeff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Coeff {
    fn cmp(&self, other: &Self) -> Ordering {
        if Coeff::eq(self, other) {
            return Ordering::Equal;
        }
        (&self.num, &self.den).cmp(&(&other.num, &other.den))
    }
}

fn fmt_mono(m: &Mono) -> String {
    let names: [(usize, &str, bool); 14] = [
        (vars::Q, "q", true),
        (vars::QK, "q^k", true),
        (vars::QA, "q^a", true),
        (vars::QM, "q^m", true),
        (vars::QKM, "q^km", true),
        (vars::QAM, "q^am", true),
        (vars::SK, "k", false),
        (vars::SA, "a", false),
        (vars::SP, "p1", false),
        (vars::SP + 1, "p2", false),
        (vars::SP + 2, "p3", false),
        (vars::SP + 3, "p4", false),
        (vars::SP + 4, "p5", false),
        (vars::ZM, "z^m", true),
    ];
    let mut parts: Vec<String> = Vec::new();
    for (v, name, half) in names {
        let e = m[v];
        if e == 0 {
            continue;
        }
        if half {
            if e % 2 == 0 {
                parts.push(format!("{}^{}", name, e / 2));
            } else {
                parts.push(format!("{}^({}/2)", name, e));
            }
        } else {
            parts.push(format!("{}^{}", name, e));
        }
    }
    for i in 0..5 {
        let e = m[vars::QP + i];
        if e != 0 {
            parts.push(format!("q^(p{}*{})", i + 1, e));
        }
    }
    if parts.is_empty() {
        String::from("1")
    } else {
        parts.join("*")
    }
}

fn fmt_poly(p: &Poly) -> String {
    if p.is_zero() {
        return String::from("0");
    }
    let mut s = String::new();
    for (i, (m, c)) in p.terms.iter().rev().enumerate() {
        let cs = format!("{}", c);
        if i > 0 {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        } else if c.is_negative() {
            s.push('-');
        }
        let abs = cs.trim_start_matches('-');
        if *m == MONO_ONE {
            s.push_str(abs);
        } else if abs == "1" {
            s.push_str(&fmt_mono(m));
        } else {
            s.push_str(abs);
            s.push('*');
            s.push_str(&fmt_mono(m));
        }
    }
    s
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", fmt_poly(&self.num))
        } else {
            write!(f, "({})/({})", fmt_poly(&self.num), fmt_poly(&self.den))
        }
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e: i16) -> Coeff {
        Coeff::from_poly(Poly::var_pow(vars::Q, e))
    }

    #[test]
    fn field_ops() {
        // (q + q^{-1})^2 - (q - q^{-1})^2 = 4
        let a = q(2).add(&q(-2));
        let b = q(2).sub(&q(-2));
        let d = a.mul(&a).sub(&b.mul(&b));
        assert!(d.eq(&Coeff::from_int(4)));
        // inverse
        let ai = a.inv();
        assert!(a.mul(&ai).is_one());
    }

    #[test]
    fn rational_reduction() {
        let c = Coeff::rational(6, -4);
        assert!(c.eq(&Coeff::rational(-3, 2)));
    }

    #[test]
    fn cross_mult_equality_unreduced() {
        // (q^2-1)/(q-1) == q+1 even if the gcd path were skipped
        let n = q(4).sub(&Coeff::one());
        let d = q(2).sub(&Coeff::one());
        let lhs = n.div(&d);
        let rhs = q(2).add(&Coeff::one());
        assert!(lhs.eq(&rhs));
    }

    #[test]
    fn flip_and_subst_m() {
        // q^{2m} at m=3 is q^6
        let c = Coeff::from_poly(Poly::var_pow(vars::QM, 4));
        assert!(c.subst_m(3).eq(&q(12)));
        assert!(c.flip_m().eq(&Coeff::from_poly(Poly::var_pow(vars::QM, -4))));
    }

    #[test]
    fn alpha_substitution() {
        // (alpha + 1)/(alpha + 2) at alpha = -1/2 -> (1/2)/(3/2) = 1/3
        let a = Coeff::sym_alpha();
        let c = a.add(&Coeff::one()).div(&a.add(&Coeff::from_int(2)));
        let v = c.subst_alpha_rational(-1, 2);
        assert!(v.eq(&Coeff::rational(1, 3)));
    }
}
