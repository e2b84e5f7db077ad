//! Exponents of `q` valued in the half-integer lattice spanned by
//! `{1, k, alpha}`.
//!
//! Every exponent appearing in the currents and their contractions is of
//! the form `(c + k_coef*k + alpha_coef*alpha)` with coefficients in
//! `(1/2)Z`; internally we store doubled components so all arithmetic is
//! integral.

use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::num::coeff::Coeff;
use crate::num::poly::{vars, Poly};

/// `(c2 + k2*k + a2*alpha)/2` as an exponent of `q`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ExponentVec {
    pub c2: i64,
    pub k2: i64,
    pub a2: i64,
}

impl ExponentVec {
    pub const ZERO: ExponentVec = ExponentVec { c2: 0, k2: 0, a2: 0 };

    /// Integer lattice point `c + k_coef*k + alpha_coef*alpha`.
    pub const fn int(c: i64, k_coef: i64, alpha_coef: i64) -> Self {
        ExponentVec { c2: 2 * c, k2: 2 * k_coef, a2: 2 * alpha_coef }
    }

    /// Half-lattice point `(c2 + k2*k + a2*alpha)/2`.
    pub const fn half(c2: i64, k2: i64, a2: i64) -> Self {
        ExponentVec { c2, k2, a2 }
    }

    /// The level combination `k + N - 1`.
    pub const fn level_shift(n: i64) -> Self {
        ExponentVec::int(n - 1, 1, 0)
    }

    pub fn add(self, o: ExponentVec) -> Self {
        ExponentVec { c2: self.c2 + o.c2, k2: self.k2 + o.k2, a2: self.a2 + o.a2 }
    }

    pub fn sub(self, o: ExponentVec) -> Self {
        self.add(o.neg())
    }

    pub fn neg(self) -> Self {
        ExponentVec { c2: -self.c2, k2: -self.k2, a2: -self.a2 }
    }

    pub fn scale(self, s: i64) -> Self {
        ExponentVec { c2: self.c2 * s, k2: self.k2 * s, a2: self.a2 * s }
    }

    pub fn half_of(self) -> Self {
        assert!(self.c2 % 2 == 0 && self.k2 % 2 == 0 && self.a2 % 2 == 0,
            "exponent not halvable inside the half lattice");
        ExponentVec { c2: self.c2 / 2, k2: self.k2 / 2, a2: self.a2 / 2 }
    }

    pub fn is_zero(self) -> bool {
        self == ExponentVec::ZERO
    }

    /// `q^{self}` as a scalar.
    pub fn q_power(self) -> Coeff {
        let mut m = crate::num::poly::MONO_ONE;
        m[vars::Q] = i16::try_from(self.c2).unwrap();
        m[vars::QK] = i16::try_from(self.k2).unwrap();
        m[vars::QA] = i16::try_from(self.a2).unwrap();
        Coeff::from_poly(Poly::monomial(m, num_bigint::BigInt::from(1)))
    }

    /// `q^{self * m}` as a scalar of the mode-graded ring.
    pub fn qm_power(self) -> Coeff {
        let mut m = crate::num::poly::MONO_ONE;
        m[vars::QM] = i16::try_from(self.c2).unwrap();
        m[vars::QKM] = i16::try_from(self.k2).unwrap();
        m[vars::QAM] = i16::try_from(self.a2).unwrap();
        Coeff::from_poly(Poly::monomial(m, num_bigint::BigInt::from(1)))
    }

    /// The exponent as a symbol-valued scalar `(c2 + k2*k + a2*alpha)/2`.
    pub fn to_symbol(self) -> Coeff {
        let p = Poly::from_i64(self.c2)
            .add(&Poly::var_pow(vars::SK, 1).mul(&Poly::from_i64(self.k2)))
            .add(&Poly::var_pow(vars::SA, 1).mul(&Poly::from_i64(self.a2)));
        Coeff::frac(p, Poly::from_i64(2))
    }

    /// Inverse of `to_symbol` for linear symbol-valued scalars.
    pub fn from_symbol(c: &Coeff) -> Option<ExponentVec> {
        // write c = num/den with den a positive integer constant
        let den = c.den.leading().and_then(|(m, v)| {
            if *m == crate::num::poly::MONO_ONE { Some(v.clone()) } else { None }
        })?;
        if !c.den.is_monomial() && !c.den.is_one() {
            return None;
        }
        let mut c2 = 0i64;
        let mut k2 = 0i64;
        let mut a2 = 0i64;
        for (m, v) in &c.num.terms {
            let vi = i64::try_from(v.clone()).ok()?;
            let mut mm = *m;
            let (slot, e) = if mm[vars::SK] == 1 {
                mm[vars::SK] = 0;
                (&mut k2, vi)
            } else if mm[vars::SA] == 1 {
                mm[vars::SA] = 0;
                (&mut a2, vi)
            } else {
                (&mut c2, vi)
            };
            if mm != crate::num::poly::MONO_ONE {
                return None;
            }
            *slot += e;
        }
        let d = i64::try_from(den).ok()?;
        let scale = |x: i64| -> Option<i64> {
            let t = x.checked_mul(2)?;
            if t % d != 0 { None } else { Some(t / d) }
        };
        Some(ExponentVec { c2: scale(c2)?, k2: scale(k2)?, a2: scale(a2)? })
    }
}

impl fmt::Display for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |num: i64, sym: &str| -> Option<String> {
            if num == 0 {
                return None;
            }
            Some(if num % 2 == 0 {
                if sym.is_empty() {
                    format!("{}", num / 2)
                } else if num == 2 {
                    String::from(sym)
                } else if num == -2 {
                    format!("-{}", sym)
                } else {
                    format!("{}{}", num / 2, sym)
                }
            } else if sym.is_empty() {
                format!("{}/2", num)
            } else {
                format!("({}/2){}", num, sym)
            })
        };
        let parts: alloc::vec::Vec<String> = [
            term(self.c2, ""),
            term(self.k2, "k"),
            term(self.a2, "a"),
        ]
        .into_iter()
        .flatten()
        .collect();
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i > 0 && !p.starts_with('-') {
                s.push('+');
            }
            s.push_str(p);
        }
        write!(f, "{}", s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_roundtrip() {
        let e = ExponentVec::int(3, -1, 2);
        assert_eq!(ExponentVec::from_symbol(&e.to_symbol()), Some(e));
        let h = ExponentVec::half(-1, 1, 0);
        assert_eq!(ExponentVec::from_symbol(&h.to_symbol()), Some(h));
    }

    #[test]
    fn q_power_arithmetic() {
        let e = ExponentVec::int(1, 1, 0);
        let f = ExponentVec::int(-1, -1, 0);
        assert!(e.q_power().mul(&f.q_power()).is_one());
    }

    #[test]
    fn nonlinear_symbol_rejected() {
        let k = Coeff::sym_k();
        let quad = k.mul(&k);
        assert_eq!(ExponentVec::from_symbol(&quad), None);
    }
}
