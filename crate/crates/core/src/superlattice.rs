//! Root and weight data of the affine superalgebra behind the currents:
//! the distinguished Cartan matrix, the signed orthonormal basis, classical
//! weights, the bilinear form and the q-inversion identity used by the
//! vertex layer.

use alloc::vec;
use alloc::vec::Vec;

use crate::exponent::ExponentVec;
use crate::num::coeff::Coeff;
use crate::qcoeff::qint_m;

/// Cartan data of rank parameter `N >= 2`: an `(N+1) x (N+1)` integer
/// matrix indexed `0..=N` together with the signature of the orthonormal
/// basis (`nu_j = +1` for `j <= N`, `nu_{N+1} = -1`).
#[derive(Clone, Debug)]
pub struct CartanData {
    pub n: usize,
    a: Vec<Vec<i64>>,
}

/// Error for rank parameters below 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTooSmall;

impl CartanData {
    pub fn new(n: usize) -> Result<CartanData, RankTooSmall> {
        if n < 2 {
            return Err(RankTooSmall);
        }
        let mut a = vec![vec![0i64; n + 1]; n + 1];
        for i in 1..n {
            a[i][i] = 2;
        }
        for i in 1..n {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
        a[0][1] = -1;
        a[1][0] = -1;
        a[0][n] = 1;
        a[n][0] = 1;
        // a[0][0] and a[n][n] stay 0
        Ok(CartanData { n, a })
    }

    /// Entry `A_{i,j}` with affine indices `0..=N`.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    /// Classical entry with indices `1..=N`.
    pub fn classical(&self, i: usize, j: usize) -> i64 {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        self.a[i][j]
    }

    pub fn nu(&self, j: usize) -> i64 {
        assert!((1..=self.n + 1).contains(&j));
        if j == self.n + 1 {
            -1
        } else {
            1
        }
    }
}

/// A classical weight in the shifted orthonormal coordinates; entries are
/// exact scalars (rationals, possibly carrying charge symbols).
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalWeight {
    pub n: usize,
    pub coords: Vec<Coeff>,
}

/// Error for bilinear forms on mismatched ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionMismatch;

impl ClassicalWeight {
    /// The basis vector `eps_bar_i = eps_i - nu_i/(N-1) * sum_j eps_j`
    /// (indices `1..=N+1`).
    pub fn eps_bar(cartan: &CartanData, i: usize) -> ClassicalWeight {
        let n = cartan.n;
        assert!((1..=n + 1).contains(&i));
        let mut coords = vec![Coeff::zero(); n + 1];
        for (j, c) in coords.iter_mut().enumerate() {
            let mut v = Coeff::rational(-cartan.nu(i), (n - 1) as i64);
            if j + 1 == i {
                v = v.add(&Coeff::one());
            }
            *c = v;
        }
        ClassicalWeight { n, coords }
    }

    /// Classical simple root `alpha_bar_i = nu_i eps_i - nu_{i+1} eps_{i+1}`.
    pub fn simple_root(cartan: &CartanData, i: usize) -> ClassicalWeight {
        let n = cartan.n;
        assert!((1..=n).contains(&i));
        let mut coords = vec![Coeff::zero(); n + 1];
        coords[i - 1] = Coeff::from_int(cartan.nu(i));
        coords[i] = Coeff::from_int(-cartan.nu(i + 1));
        ClassicalWeight { n, coords }
    }

    /// Classical fundamental weight `Lambda_bar_i = sum_{j<=i} eps_bar_j`.
    pub fn fundamental(cartan: &CartanData, i: usize) -> ClassicalWeight {
        let n = cartan.n;
        assert!((1..=n).contains(&i));
        let mut w = ClassicalWeight { n, coords: vec![Coeff::zero(); n + 1] };
        for j in 1..=i {
            w = w.add(&ClassicalWeight::eps_bar(cartan, j));
        }
        w
    }

    /// Weight `sum_i l_i Lambda_bar_i` with scalar coefficients.
    pub fn from_fundamental_coords(cartan: &CartanData, l: &[Coeff]) -> ClassicalWeight {
        let n = cartan.n;
        assert_eq!(l.len(), n);
        let mut w = ClassicalWeight { n, coords: vec![Coeff::zero(); n + 1] };
        for (i, li) in l.iter().enumerate() {
            let f = ClassicalWeight::fundamental(cartan, i + 1).scale(li);
            w = w.add(&f);
        }
        w
    }

    pub fn add(&self, o: &ClassicalWeight) -> ClassicalWeight {
        assert_eq!(self.n, o.n);
        ClassicalWeight {
            n: self.n,
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> ClassicalWeight {
        ClassicalWeight {
            n: self.n,
            coords: self.coords.iter().map(|a| a.mul(c)).collect(),
        }
    }
}

/// Signature-weighted bilinear form `(u|v) = sum_j nu_j u_j v_j` in the
/// orthonormal coordinates.
pub fn bilinear(
    cartan: &CartanData,
    u: &ClassicalWeight,
    v: &ClassicalWeight,
) -> Result<Coeff, DimensionMismatch> {
    if u.n != v.n || u.n != cartan.n {
        return Err(DimensionMismatch);
    }
    let mut acc = Coeff::zero();
    for j in 1..=cartan.n + 1 {
        let t = u.coords[j - 1]
            .mul(&v.coords[j - 1])
            .scale_int(cartan.nu(j));
        acc = acc.add(&t);
    }
    Ok(acc)
}

/// Gram entry `(Lambda_bar_i | Lambda_bar_j) = Min(i,j)(N-1-Max(i,j))/(N-1)`
/// as an exact rational.
pub fn gram(n: usize, i: usize, j: usize) -> Coeff {
    let (mn, mx) = (i.min(j) as i64, i.max(j) as i64);
    Coeff::rational(mn * (n as i64 - 1 - mx), n as i64 - 1)
}

/// `(lambda | lambda + 2 rho)` with `rho = sum_i Lambda_bar_i`, for
/// `lambda = sum_i l_i Lambda_bar_i`.
pub fn weight_norm(cartan: &CartanData, l: &[Coeff]) -> Coeff {
    let n = cartan.n;
    let lam = ClassicalWeight::from_fundamental_coords(cartan, l);
    let rho = ClassicalWeight::from_fundamental_coords(
        cartan,
        &vec![Coeff::one(); n],
    );
    let shifted = lam.add(&rho.scale(&Coeff::from_int(2)));
    bilinear(cartan, &lam, &shifted).unwrap()
}

/// The q-inversion identity
/// `sum_r ([A_{i,r} m]/[m]) * [Min(r,j)m][(N-1-Max(r,j))m] / ([(N-1)m][m])
///  = delta_{i,j}`,
/// verified exactly in the mode-graded rational field.
pub fn inversion_identity_check(n: usize, i: usize, j: usize) -> bool {
    let cartan = CartanData::new(n).unwrap();
    let mut acc = Coeff::zero();
    let unit = qint_m(ExponentVec::int(1, 0, 0));
    let nm1 = qint_m(ExponentVec::int(n as i64 - 1, 0, 0));
    for r in 1..=n {
        let a = cartan.classical(i, r);
        if a == 0 {
            continue;
        }
        let mn = r.min(j) as i64;
        let mx = r.max(j) as i64;
        let num = qint_m(ExponentVec::int(a, 0, 0))
            .mul(&qint_m(ExponentVec::int(mn, 0, 0)))
            .mul(&qint_m(ExponentVec::int(n as i64 - 1 - mx, 0, 0)));
        acc = acc.add(&num.div(&unit).div(&nm1).div(&unit));
    }
    let target = if i == j { Coeff::one() } else { Coeff::zero() };
    acc.eq(&target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_entries() {
        let c2 = CartanData::new(2).unwrap();
        assert_eq!(c2.entry(1, 1), 2);
        assert_eq!(c2.entry(1, 2), -1);
        assert_eq!(c2.entry(2, 2), 0);
        assert_eq!(c2.entry(0, 2), 1);
        let c3 = CartanData::new(3).unwrap();
        assert_eq!(c3.entry(3, 3), 0);
        assert_eq!(c3.entry(2, 3), -1);
        assert!(CartanData::new(1).is_err());
        // symmetry and row structure for a few ranks
        for n in 2..=6 {
            let c = CartanData::new(n).unwrap();
            for i in 0..=n {
                for j in 0..=n {
                    assert_eq!(c.entry(i, j), c.entry(j, i));
                }
            }
            for i in [0, n] {
                let row: i64 = (0..=n).map(|j| c.entry(i, j)).sum();
                assert_eq!(row, 0);
            }
        }
    }

    #[test]
    fn eps_bar_sum_vanishes() {
        // The signed construction makes the full sum collapse:
        // sum_{j=1}^{N+1} eps_bar_j = 0 (the signature weights contribute
        // sum nu_j = N - 1, cancelling the 1/(N-1) normalization).
        for n in 2..=5 {
            let c = CartanData::new(n).unwrap();
            let mut s = ClassicalWeight {
                n,
                coords: vec![Coeff::zero(); n + 1],
            };
            for j in 1..=n + 1 {
                s = s.add(&ClassicalWeight::eps_bar(&c, j));
            }
            assert!(s.coords.iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn bilinear_reproduces_cartan() {
        for n in 2..=5 {
            let c = CartanData::new(n).unwrap();
            for i in 1..=n {
                for j in 1..=n {
                    let ai = ClassicalWeight::simple_root(&c, i);
                    let aj = ClassicalWeight::simple_root(&c, j);
                    let v = bilinear(&c, &ai, &aj).unwrap();
                    assert!(v.eq(&Coeff::from_int(c.classical(i, j))),
                        "n={} i={} j={}", n, i, j);
                }
            }
        }
    }

    #[test]
    fn fundamental_dual_to_roots() {
        // (Lambda_bar_i | alpha_bar_j) = delta_{i,j} for 1 <= i,j <= N-1 at N=3
        let c = CartanData::new(3).unwrap();
        for i in 1..=2 {
            for j in 1..=2 {
                let li = ClassicalWeight::fundamental(&c, i);
                let aj = ClassicalWeight::simple_root(&c, j);
                let v = bilinear(&c, &li, &aj).unwrap();
                let expect = if i == j { Coeff::one() } else { Coeff::zero() };
                assert!(v.eq(&expect));
            }
        }
    }

    #[test]
    fn gram_matches_bilinear() {
        for n in 2..=5 {
            let c = CartanData::new(n).unwrap();
            for i in 1..=n {
                for j in 1..=n {
                    let li = ClassicalWeight::fundamental(&c, i);
                    let lj = ClassicalWeight::fundamental(&c, j);
                    assert!(bilinear(&c, &li, &lj).unwrap().eq(&gram(n, i, j)));
                }
            }
        }
    }

    #[test]
    fn weight_norm_cases() {
        let c = CartanData::new(2).unwrap();
        // zero weight
        assert!(weight_norm(&c, &[Coeff::zero(), Coeff::zero()]).is_zero());
        // n=2, l=(1,0): (L1|L1+2rho) via direct coordinates
        let l1 = ClassicalWeight::fundamental(&c, 1);
        let rho = l1.add(&ClassicalWeight::fundamental(&c, 2));
        let direct = bilinear(&c, &l1, &l1.add(&rho.scale(&Coeff::from_int(2)))).unwrap();
        let v = weight_norm(&c, &[Coeff::one(), Coeff::zero()]);
        assert!(v.eq(&direct));
        // bilinearity: norm(2l) - 2 norm(l) = 2 (l|l)
        let c3 = CartanData::new(3).unwrap();
        let l = [Coeff::from_int(1), Coeff::from_int(2), Coeff::from_int(-1)];
        let l2: alloc::vec::Vec<Coeff> = l.iter().map(|x| x.scale_int(2)).collect();
        let lw = ClassicalWeight::from_fundamental_coords(&c3, &l);
        let ll = bilinear(&c3, &lw, &lw).unwrap();
        let lhs = weight_norm(&c3, &l2).sub(&weight_norm(&c3, &l).scale_int(2));
        assert!(lhs.eq(&ll.scale_int(2)));
    }

    #[test]
    fn inversion_identity_all_ranks() {
        for n in [2usize, 3, 4, 5] {
            for i in 1..=n {
                for j in 1..=n {
                    assert!(inversion_identity_check(n, i, j), "n={} i={} j={}", n, i, j);
                }
            }
        }
    }

    #[test]
    fn inversion_identity_concrete_modes() {
        // spot-check the identity after specializing m = 1..4 at n = 3
        let n = 3;
        let cartan = CartanData::new(n).unwrap();
        for m in 1..=4 {
            for i in 1..=n {
                for j in 1..=n {
                    let mut acc = Coeff::zero();
                    for r in 1..=n {
                        let a = cartan.classical(i, r);
                        let mn = r.min(j) as i64;
                        let mx = r.max(j) as i64;
                        let t = qint_m(ExponentVec::int(a, 0, 0))
                            .mul(&qint_m(ExponentVec::int(mn, 0, 0)))
                            .mul(&qint_m(ExponentVec::int(n as i64 - 1 - mx, 0, 0)))
                            .div(&qint_m(ExponentVec::int(1, 0, 0)))
                            .div(&qint_m(ExponentVec::int(n as i64 - 1, 0, 0)))
                            .div(&qint_m(ExponentVec::int(1, 0, 0)));
                        acc = acc.add(&t.subst_m(m));
                    }
                    let target = if i == j { Coeff::one() } else { Coeff::zero() };
                    assert!(acc.eq(&target));
                }
            }
        }
    }
}
