//! q-integers, exponential-sum decomposition of mode kernels, and the
//! square-root extension used by the level-zero matrices.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::exponent::ExponentVec;
use crate::num::coeff::Coeff;
use crate::num::poly::{vars, Poly};

/// `[a] = (q^a - q^{-a})/(q - q^{-1})` for a lattice exponent `a`.
pub fn qint(a: ExponentVec) -> Coeff {
    let num = a.q_power().sub(&a.neg().q_power());
    num.div(&q_minus_qinv())
}

/// `[a m] = (q^{am} - q^{-am})/(q - q^{-1})` as a function of the mode
/// number `m`.
pub fn qint_m(a: ExponentVec) -> Coeff {
    let num = a.qm_power().sub(&a.neg().qm_power());
    num.div(&q_minus_qinv())
}

/// `q - q^{-1}`.
pub fn q_minus_qinv() -> Coeff {
    ExponentVec::int(1, 0, 0)
        .q_power()
        .sub(&ExponentVec::int(-1, 0, 0).q_power())
}

/// Error from [`exp_sum_decompose`]: the kernel is not a finite Laurent
/// sum in `q^m` (a level-type denominator `[r m]` survives).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotFiniteSum;

/// Decompose a mode-graded scalar `f(m)` into a finite exponential sum
/// `sum_j c_j q^{e_j m}` with constant coefficients `c_j`.
///
/// The input must be built from products and ratios of `qint_m` values
/// whose ratio clears to a Laurent polynomial in the mode-graded
/// monomials; otherwise `NotFiniteSum` is returned.
pub fn exp_sum_decompose(f: &Coeff) -> Result<Vec<(Coeff, ExponentVec)>, NotFiniteSum> {
    if f.is_zero() {
        return Ok(Vec::new());
    }
    // The denominator must be freed of mode-graded variables, dividing it
    // into the numerator exactly (primitive parts keep coefficients
    // integral; contents are reattached afterwards).
    let m_graded = |p: &Poly| {
        p.active_vars()
            .iter()
            .any(|&v| v == vars::QM || v == vars::QKM || v == vars::QAM)
    };
    let (num, den): (Poly, Poly) = if !m_graded(&f.den) {
        (f.num.clone(), f.den.clone())
    } else {
        let cn = f.num.content();
        let cd = f.den.content();
        let pn = f.num.div_content(&cn);
        let pd = f.den.div_content(&cd);
        match pn.div_exact(&pd) {
            Some(q) => (
                q.mul(&Poly::constant(cn)),
                Poly::constant(cd),
            ),
            None => return Err(NotFiniteSum),
        }
    };
    let (num, den) = (&num, &den);
    // group numerator terms by their mode-graded exponents
    let mut groups: BTreeMap<(i16, i16, i16), Poly> = BTreeMap::new();
    for (m, c) in &num.terms {
        if m[vars::ZM] != 0 {
            return Err(NotFiniteSum);
        }
        let key = (m[vars::QM], m[vars::QKM], m[vars::QAM]);
        let mut mm = *m;
        mm[vars::QM] = 0;
        mm[vars::QKM] = 0;
        mm[vars::QAM] = 0;
        groups.entry(key).or_insert_with(Poly::zero).add_term(mm, c.clone());
    }
    let mut out = Vec::new();
    for ((em, ekm, eam), p) in groups {
        let c = Coeff::frac(p, den.clone());
        let e = ExponentVec { c2: em as i64, k2: ekm as i64, a2: eam as i64 };
        if !c.is_zero() {
            out.push((c, e));
        }
    }
    Ok(out)
}

/// Recombine a decomposition at a concrete mode number (test oracle).
pub fn exp_sum_eval(terms: &[(Coeff, ExponentVec)], m: i64) -> Coeff {
    let mut acc = Coeff::zero();
    for (c, e) in terms {
        acc = acc.add(&c.mul(&e.qm_power().subst_m(m)));
    }
    acc
}

/// Element of the extension ring `QRat[s_0..s_{N-1}]` with
/// `s_j^2 = [alpha + j]`, indexed by subsets of `{0..N-1}` as bitmasks.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RootExt {
    pub parts: BTreeMap<u8, Coeff>,
}

impl RootExt {
    pub fn zero() -> Self {
        RootExt { parts: BTreeMap::new() }
    }

    pub fn one() -> Self {
        RootExt::scalar(Coeff::one())
    }

    pub fn scalar(c: Coeff) -> Self {
        let mut parts = BTreeMap::new();
        if !c.is_zero() {
            parts.insert(0u8, c);
        }
        RootExt { parts }
    }

    /// The generator `s_j = sqrt([alpha + j])`.
    pub fn root(j: u8) -> Self {
        assert!(j < 8);
        let mut parts = BTreeMap::new();
        parts.insert(1u8 << j, Coeff::one());
        RootExt { parts }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    fn push(&mut self, mask: u8, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.parts.get_mut(&mask) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.parts.remove(&mask);
                } else {
                    *old = s;
                }
            }
            None => {
                self.parts.insert(mask, c);
            }
        }
    }

    pub fn add(&self, o: &RootExt) -> RootExt {
        let mut r = self.clone();
        for (m, c) in &o.parts {
            r.push(*m, c.clone());
        }
        r
    }

    pub fn neg(&self) -> RootExt {
        RootExt { parts: self.parts.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn sub(&self, o: &RootExt) -> RootExt {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RootExt) -> RootExt {
        let mut r = RootExt::zero();
        for (ma, ca) in &self.parts {
            for (mb, cb) in &o.parts {
                // s_j^2 reduces to [alpha + j] for every j in the overlap
                let overlap = ma & mb;
                let mut c = ca.mul(cb);
                for j in 0..8 {
                    if overlap & (1 << j) != 0 {
                        c = c.mul(&qint(ExponentVec::int(j as i64, 0, 1)));
                    }
                }
                r.push(ma ^ mb, c);
            }
        }
        r
    }

    pub fn scale(&self, c: &Coeff) -> RootExt {
        let mut r = RootExt::zero();
        for (m, v) in &self.parts {
            r.push(*m, v.mul(c));
        }
        r
    }

    /// Multiplicative inverse of a single-term element `c * prod_{j in S} s_j`:
    /// `1/(c s_S) = s_S / (c * prod_{j in S} [alpha+j])`.
    pub fn mono_inv(&self) -> RootExt {
        assert_eq!(self.parts.len(), 1, "only monomial inverses are needed");
        let (mask, c) = self.parts.iter().next().unwrap();
        let mut denom = c.clone();
        for j in 0..8 {
            if mask & (1 << j) != 0 {
                denom = denom.mul(&qint(ExponentVec::int(j as i64, 0, 1)));
            }
        }
        let mut parts = BTreeMap::new();
        parts.insert(*mask, denom.inv());
        RootExt { parts }
    }
}

impl fmt::Display for RootExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.parts {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *m == 0 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "({})", c)?;
                for j in 0..8 {
                    if m & (1 << j) != 0 {
                        write!(f, "*s{}", j)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RootExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qint_basics() {
        // [0] = 0, [1] = 1, [2] = q + q^{-1}
        assert!(qint(ExponentVec::ZERO).is_zero());
        assert!(qint(ExponentVec::int(1, 0, 0)).is_one());
        let two = qint(ExponentVec::int(2, 0, 0));
        let expect = ExponentVec::int(1, 0, 0)
            .q_power()
            .add(&ExponentVec::int(-1, 0, 0).q_power());
        assert!(two.eq(&expect));
        // [-a] = -[a] on a symbolic argument
        let a = ExponentVec::int(1, 1, 0);
        assert!(qint(a.neg()).eq(&qint(a).neg()));
    }

    #[test]
    fn qint_product_oracle() {
        // qint(a) * (q - q^{-1}) == q^a - q^{-a} for a = k + 1
        let a = ExponentVec::int(1, 1, 0);
        let lhs = qint(a).mul(&q_minus_qinv());
        let rhs = a.q_power().sub(&a.neg().q_power());
        assert!(lhs.eq(&rhs));
    }

    #[test]
    fn qint_m_examples() {
        // [1*m] at m=3 equals [3] = q^2 + 1 + q^{-2}
        let m3 = qint_m(ExponentVec::int(1, 0, 0)).subst_m(3);
        let expect = ExponentVec::int(2, 0, 0)
            .q_power()
            .add(&Coeff::one())
            .add(&ExponentVec::int(-2, 0, 0).q_power());
        assert!(m3.eq(&expect));
        // [2m] at m=2 equals [4] = q^3+q+q^{-1}+q^{-3}
        let v = qint_m(ExponentVec::int(2, 0, 0)).subst_m(2);
        let expect4 = qint(ExponentVec::int(4, 0, 0));
        assert!(v.eq(&expect4));
        // m = 1 reduces qint_m to qint
        let a = ExponentVec::int(2, 1, 0); // k + N - 1 at N = 3
        assert!(qint_m(a).subst_m(1).eq(&qint(a)));
    }

    #[test]
    fn decompose_ratio() {
        // [2m]/[m] = q^m + q^{-m}
        let f = qint_m(ExponentVec::int(2, 0, 0)).div(&qint_m(ExponentVec::int(1, 0, 0)));
        let d = exp_sum_decompose(&f).unwrap();
        assert_eq!(d.len(), 2);
        for m in 1..=5 {
            assert!(exp_sum_eval(&d, m).eq(&f.subst_m(m)));
        }
    }

    #[test]
    fn decompose_qint_via_clearing() {
        // [m] itself is not an exponential sum, but [m]*(q - q^{-1}) is.
        let f = qint_m(ExponentVec::int(1, 0, 0));
        assert_eq!(exp_sum_decompose(&f), Err(NotFiniteSum));
        let cleared = f.mul(&q_minus_qinv());
        let d = exp_sum_decompose(&cleared).unwrap();
        assert_eq!(d.len(), 2);
        for m in 1..=5 {
            assert!(exp_sum_eval(&d, m).eq(&cleared.subst_m(m)));
        }
    }

    #[test]
    fn decompose_level_denominator_fails() {
        // [Am]/[(k+N-1)m] cannot clear the symbolic level denominator
        let f = qint_m(ExponentVec::int(2, 0, 0))
            .div(&qint_m(ExponentVec::int(2, 1, 0)));
        assert_eq!(exp_sum_decompose(&f), Err(NotFiniteSum));
    }

    #[test]
    fn root_ext_reduction() {
        // s_0^2 = [alpha]
        let s0 = RootExt::root(0);
        let sq = s0.mul(&s0);
        let expect = RootExt::scalar(qint(ExponentVec::int(0, 0, 1)));
        assert_eq!(sq, expect);
        // associativity on mixed products at N=4
        let x = RootExt::root(0).add(&RootExt::root(1).scale(&Coeff::from_int(2)));
        let y = RootExt::root(1).add(&RootExt::scalar(Coeff::from_int(3)));
        let z = RootExt::root(2).add(&RootExt::root(3));
        let lhs = x.mul(&y).mul(&z);
        let rhs = x.mul(&y.mul(&z));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn root_ext_mono_inv() {
        let s2 = RootExt::root(2).scale(&Coeff::from_int(-3));
        let inv = s2.mono_inv();
        assert_eq!(s2.mul(&inv), RootExt::one());
    }
}
