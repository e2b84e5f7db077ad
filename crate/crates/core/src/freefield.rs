//! The deformed Heisenberg algebra of the three boson families `a^i`,
//! `b^{i,j}`, `c^{i,j}` with zero modes and cocycle signs, and the catalog
//! of normal-ordered exponential atoms from which every current is
//! assembled.
//!
//! An [`ExpOperator`] is `prefactor * z^{zpow} * :exp(F):` where `F` is a
//! linear combination of boson modes plus a zero-mode part.  Mode content
//! is stored as a [`Profile`] per boson key: the exact coefficient of the
//! mode `x_m` as a rational function of `m`, split into the annihilation
//! branch (`m > 0`) and the creation branch (`m < 0`) so that `|m|`
//! dependence is resolved at construction time.  Odd zero-mode
//! exponentials `exp(c Q_b^{i,N+1})` anticommute pairwise and are kept as
//! an ordered list with deterministic (ascending-index) canonical order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::exponent::ExponentVec;
use crate::num::coeff::Coeff;
use crate::qcoeff::{q_minus_qinv, qint_m};
use crate::superlattice::CartanData;

/// One oscillator family member.
///
/// `A(i)` with `1 <= i <= N`; `B(i,j)` with `1 <= i < j <= N+1`;
/// `C(i,j)` with `1 <= i < j <= N`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum BosonKey {
    A(u8),
    B(u8, u8),
    C(u8, u8),
}

impl BosonKey {
    /// Validate the index ranges at rank `n`.  Degenerate `B(i,i)`/`C(i,i)`
    /// keys are the only tolerated out-of-range form (several displayed
    /// sums produce them at their boundary index; the corresponding field
    /// is zero) — they are rejected here and must be dropped by callers.
    pub fn is_valid(&self, n: usize) -> bool {
        let n = n as u8;
        match *self {
            BosonKey::A(i) => (1..=n).contains(&i),
            BosonKey::B(i, j) => i >= 1 && i < j && j <= n + 1,
            BosonKey::C(i, j) => i >= 1 && i < j && j <= n,
        }
    }

    /// Degenerate boundary key that stands for the zero field.
    pub fn is_null(&self) -> bool {
        match *self {
            BosonKey::A(_) => false,
            BosonKey::B(i, j) | BosonKey::C(i, j) => i == j,
        }
    }

    /// The key of an anticommuting zero-mode exponential.
    pub fn is_odd_zero_mode(&self, n: usize) -> bool {
        matches!(*self, BosonKey::B(_, j) if j as usize == n + 1)
    }
}

fn nu(n: usize, j: u8) -> i64 {
    if j as usize == n + 1 {
        -1
    } else {
        1
    }
}

/// Kernel `m * [x_m, y_{-m}]` of a mode pairing, as an exact function of
/// the mode number; zero for non-pairing keys.
pub fn pairing_kernel(n: usize, cartan: &CartanData, x: BosonKey, y: BosonKey) -> Coeff {
    match (x, y) {
        (BosonKey::A(i), BosonKey::A(j)) => {
            let a = cartan.classical(i as usize, j as usize);
            if a == 0 {
                return Coeff::zero();
            }
            qint_m(ExponentVec::level_shift(n as i64))
                .mul(&qint_m(ExponentVec::int(a, 0, 0)))
        }
        (BosonKey::B(i, j), BosonKey::B(i2, j2)) if (i, j) == (i2, j2) => {
            let sq = qint_m(ExponentVec::int(1, 0, 0));
            sq.mul(&sq).scale_int(-nu(n, i) * nu(n, j))
        }
        (BosonKey::C(i, j), BosonKey::C(i2, j2)) if (i, j) == (i2, j2) => {
            let sq = qint_m(ExponentVec::int(1, 0, 0));
            sq.mul(&sq).scale_int(nu(n, i) * nu(n, j))
        }
        _ => Coeff::zero(),
    }
}

/// Zero-mode pairing `[p_0^x, Q^y]` as a symbol-valued scalar.
pub fn zero_mode_pairing(n: usize, cartan: &CartanData, x: BosonKey, y: BosonKey) -> Coeff {
    match (x, y) {
        (BosonKey::A(i), BosonKey::A(j)) => {
            let a = cartan.classical(i as usize, j as usize);
            ExponentVec::level_shift(n as i64).to_symbol().scale_int(a)
        }
        (BosonKey::B(i, j), BosonKey::B(i2, j2)) if (i, j) == (i2, j2) => {
            Coeff::from_int(-nu(n, i) * nu(n, j))
        }
        (BosonKey::C(i, j), BosonKey::C(i2, j2)) if (i, j) == (i2, j2) => {
            Coeff::from_int(nu(n, i) * nu(n, j))
        }
        _ => Coeff::zero(),
    }
}

/// Sign for exchanging `exp(ca Q_b^{ia,N+1})` with `exp(cb Q_b^{ib,N+1})`.
pub fn cocycle_sign(ia: u8, ca: i64, ib: u8, cb: i64) -> i64 {
    if ia == ib {
        1
    } else if (ca * cb) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Mode coefficient of one boson key as a function of the mode number,
/// split by branch: `plus` is valid for `m > 0` (annihilation side),
/// `minus` for `m < 0` (creation side).
#[derive(Clone, PartialEq)]
pub struct Profile {
    pub plus: Coeff,
    pub minus: Coeff,
}

impl Profile {
    pub fn zero() -> Self {
        Profile { plus: Coeff::zero(), minus: Coeff::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.plus.is_zero() && self.minus.is_zero()
    }

    pub fn add(&self, o: &Profile) -> Profile {
        Profile { plus: self.plus.add(&o.plus), minus: self.minus.add(&o.minus) }
    }

    pub fn scale(&self, c: &Coeff) -> Profile {
        Profile { plus: self.plus.mul(c), minus: self.minus.mul(c) }
    }

    /// Multiply both branches by `q^{e m}` (argument shift `z -> q^{-e} z`).
    pub fn mul_qm(&self, e: ExponentVec) -> Profile {
        let f = e.qm_power();
        Profile { plus: self.plus.mul(&f), minus: self.minus.mul(&f) }
    }

    /// Exact value at a concrete nonzero mode number.
    pub fn at(&self, m: i64) -> Coeff {
        assert!(m != 0);
        if m > 0 {
            self.plus.subst_m(m)
        } else {
            self.minus.subst_m(m)
        }
    }
}

/// Zero-mode content attached to one boson key.
#[derive(Clone, PartialEq)]
pub struct ZeroPart {
    /// coefficient of `p_0 log q`
    pub q_log: Coeff,
    /// coefficient of `p_0 log z`
    pub z_log: Coeff,
    /// coefficient of `Q` (commuting keys only)
    pub big_q: Coeff,
}

impl ZeroPart {
    pub fn zero() -> Self {
        ZeroPart { q_log: Coeff::zero(), z_log: Coeff::zero(), big_q: Coeff::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.q_log.is_zero() && self.z_log.is_zero() && self.big_q.is_zero()
    }

    pub fn add(&self, o: &ZeroPart) -> ZeroPart {
        ZeroPart {
            q_log: self.q_log.add(&o.q_log),
            z_log: self.z_log.add(&o.z_log),
            big_q: self.big_q.add(&o.big_q),
        }
    }
}

/// A normal-ordered exponential operator at one spectral argument.
#[derive(Clone)]
pub struct ExpOperator {
    pub pre: Coeff,
    /// extra power of the argument (symbol-valued; integer in all
    /// delta-extraction paths)
    pub zpow: Coeff,
    pub modes: BTreeMap<BosonKey, Profile>,
    pub zero: BTreeMap<BosonKey, ZeroPart>,
    /// ordered odd zero-mode exponentials `exp(c Q_b^{i,N+1})`, kept
    /// sorted ascending in `i` (the deterministic canonical order)
    pub odd_q: Vec<(u8, i64)>,
}

impl ExpOperator {
    pub fn identity() -> Self {
        ExpOperator {
            pre: Coeff::one(),
            zpow: Coeff::zero(),
            modes: BTreeMap::new(),
            zero: BTreeMap::new(),
            odd_q: Vec::new(),
        }
    }

    pub fn is_identity_exponent(&self) -> bool {
        self.modes.is_empty() && self.zero.is_empty() && self.odd_q.is_empty()
    }

    /// Z2 grading: parity of the total odd zero-mode charge.
    pub fn grading(&self) -> u8 {
        let s: i64 = self.odd_q.iter().map(|(_, c)| c.abs()).sum();
        (s % 2) as u8
    }

    pub fn scale(mut self, c: &Coeff) -> Self {
        self.pre = self.pre.mul(c);
        self
    }

    pub fn add_mode(&mut self, key: BosonKey, p: Profile) {
        if key.is_null() || p.is_zero() {
            return;
        }
        let e = self.modes.entry(key).or_insert_with(Profile::zero);
        *e = e.add(&p);
        if e.is_zero() {
            self.modes.remove(&key);
        }
    }

    pub fn add_zero(&mut self, key: BosonKey, z: ZeroPart) {
        if key.is_null() || z.is_zero() {
            return;
        }
        let e = self.zero.entry(key).or_insert_with(ZeroPart::zero);
        *e = e.add(&z);
        if e.is_zero() {
            self.zero.remove(&key);
        }
    }

    /// Append `exp(c Q_b^{i,N+1})` on the right and restore canonical order.
    pub fn push_odd_q(&mut self, i: u8, c: i64) {
        if c == 0 {
            return;
        }
        self.odd_q.push((i, c));
        let (list, sign) = canonical_odd(&self.odd_q);
        self.odd_q = list;
        if sign < 0 {
            self.pre = self.pre.neg();
        }
    }

    /// Total `Q`-coefficient of a key (merging odd and even bookkeeping).
    pub fn q_charge(&self, key: BosonKey, n: usize) -> Coeff {
        if key.is_odd_zero_mode(n) {
            if let BosonKey::B(i, _) = key {
                let c: i64 = self
                    .odd_q
                    .iter()
                    .filter(|(ii, _)| *ii == i)
                    .map(|(_, c)| *c)
                    .sum();
                return Coeff::from_int(c);
            }
        }
        self.zero
            .get(&key)
            .map(|z| z.big_q.clone())
            .unwrap_or_else(Coeff::zero)
    }

    /// Shift the argument `z -> q^{e} z`.
    pub fn shift_arg(&self, e: ExponentVec) -> ExpOperator {
        let mut r = self.clone();
        let f = e.neg();
        for p in r.modes.values_mut() {
            *p = p.mul_qm(f);
        }
        let es = e.to_symbol();
        for z in r.zero.values_mut() {
            // p0 log(q^e z) = p0 log z + e p0 log q
            z.q_log = z.q_log.add(&z.z_log.mul(&es));
        }
        r
    }

    /// Merge with another operator whose argument has been rewritten to
    /// this operator's argument (used by specialization and by the
    /// normal-ordered-symbol comparisons).  No contraction factors arise;
    /// odd zero modes are interleaved with their cocycle signs.
    pub fn mul_merge(&self, other: &ExpOperator) -> ExpOperator {
        let mut r = self.clone();
        r.pre = r.pre.mul(&other.pre);
        r.zpow = r.zpow.add(&other.zpow);
        for (k, p) in &other.modes {
            r.add_mode(*k, p.clone());
        }
        for (k, z) in &other.zero {
            r.add_zero(*k, z.clone());
        }
        for (i, c) in &other.odd_q {
            r.push_odd_q(*i, *c);
        }
        r
    }

    /// Multiply one key's mode profile by `q^{delta m}` — the mutation
    /// hook used by the negative-control suite (simulates a transcription
    /// error in one argument shift).
    pub fn mutate_shift(&mut self, key: BosonKey, delta: i64) {
        if let Some(p) = self.modes.get_mut(&key) {
            *p = p.mul_qm(ExponentVec::int(delta, 0, 0));
        }
    }

    pub fn eq_op(&self, other: &ExpOperator) -> bool {
        if !self.pre.eq(&other.pre) || !self.zpow.eq(&other.zpow) {
            return false;
        }
        if self.odd_q != other.odd_q {
            return false;
        }
        if self.modes.len() != other.modes.len() || self.zero.len() != other.zero.len() {
            return false;
        }
        for (k, p) in &self.modes {
            match other.modes.get(k) {
                Some(p2) if p.plus.eq(&p2.plus) && p.minus.eq(&p2.minus) => {}
                _ => return false,
            }
        }
        for (k, z) in &self.zero {
            match other.zero.get(k) {
                Some(z2)
                    if z.q_log.eq(&z2.q_log)
                        && z.z_log.eq(&z2.z_log)
                        && z.big_q.eq(&z2.big_q) => {}
                _ => return false,
            }
        }
        true
    }

    /// Equality of exponent content ignoring the scalar prefactor.
    pub fn same_exponent(&self, other: &ExpOperator) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.pre = Coeff::one();
        b.pre = Coeff::one();
        a.eq_op(&b)
    }
}

/// Sort an odd zero-mode list ascending, counting crossings of distinct
/// keys; returns the canonical list (same-key factors merged) and the
/// accumulated sign.
pub fn canonical_odd(list: &[(u8, i64)]) -> (Vec<(u8, i64)>, i64) {
    let mut v: Vec<(u8, i64)> = list.to_vec();
    let mut sign = 1i64;
    // bubble sort to count signed crossings
    let len = v.len();
    for i in 0..len {
        for j in 0..len.saturating_sub(1 + i) {
            if v[j].0 > v[j + 1].0 {
                sign *= cocycle_sign(v[j].0, v[j].1, v[j + 1].0, v[j + 1].1);
                v.swap(j, j + 1);
            }
        }
    }
    // merge same keys
    let mut out: Vec<(u8, i64)> = Vec::new();
    for (i, c) in v {
        match out.last_mut() {
            Some((li, lc)) if *li == i => {
                *lc += c;
            }
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| *c != 0);
    (out, sign)
}

/// Sign picked up when the concatenated odd zero-mode lists of `a` and
/// `b` are sorted into canonical order — the conversion factor between
/// the engine's ordered-product normal symbol (`mul_merge`) and the
/// plain merged-exponential symbol used in displayed identities.
pub fn merge_sign(a: &ExpOperator, b: &ExpOperator) -> i64 {
    let mut ab: Vec<(u8, i64)> = a.odd_q.clone();
    ab.extend_from_slice(&b.odd_q);
    canonical_odd(&ab).1
}

/// Relative sign between `:AB:` and `:BA:` coming from the odd zero modes.
pub fn swap_sign(a: &ExpOperator, b: &ExpOperator) -> i64 {
    let mut ab: Vec<(u8, i64)> = a.odd_q.clone();
    ab.extend_from_slice(&b.odd_q);
    let mut ba: Vec<(u8, i64)> = b.odd_q.clone();
    ba.extend_from_slice(&a.odd_q);
    let (_, sa) = canonical_odd(&ab);
    let (_, sb) = canonical_odd(&ba);
    sa * sb
}

// ---------------------------------------------------------------------
// primitive fields
// ---------------------------------------------------------------------

/// Builder for exponential atoms; every method adds one primitive field
/// (with all shifts folded into the stored profiles) scaled by an integer
/// coefficient.
pub struct OpBuilder {
    pub n: usize,
    pub op: ExpOperator,
}

impl OpBuilder {
    pub fn new(n: usize) -> Self {
        OpBuilder { n, op: ExpOperator::identity() }
    }

    fn check(&self, key: BosonKey) {
        assert!(
            key.is_valid(self.n) || key.is_null(),
            "boson key {:?} out of range at n={}",
            key,
            self.n
        );
    }

    /// `a_+^i(q^s z)`: annihilation half plus `a_0 log q`.
    pub fn a_plus(&mut self, i: u8, s: ExponentVec, coef: i64) -> &mut Self {
        let key = BosonKey::A(i);
        self.check(key);
        let prof = Profile {
            plus: q_minus_qinv().mul(&s.neg().qm_power()).scale_int(coef),
            minus: Coeff::zero(),
        };
        self.op.add_mode(key, prof);
        self.op.add_zero(key, ZeroPart {
            q_log: Coeff::from_int(coef),
            z_log: Coeff::zero(),
            big_q: Coeff::zero(),
        });
        self
    }

    /// `a_-^i(q^s z)`: creation half minus `a_0 log q`.
    pub fn a_minus(&mut self, i: u8, s: ExponentVec, coef: i64) -> &mut Self {
        let key = BosonKey::A(i);
        self.check(key);
        let prof = Profile {
            plus: Coeff::zero(),
            minus: q_minus_qinv().neg().mul(&s.neg().qm_power()).scale_int(coef),
        };
        self.op.add_mode(key, prof);
        self.op.add_zero(key, ZeroPart {
            q_log: Coeff::from_int(-coef),
            z_log: Coeff::zero(),
            big_q: Coeff::zero(),
        });
        self
    }

    fn full_field(&mut self, key: BosonKey, s: ExponentVec, coef: i64) {
        self.check(key);
        if key.is_null() {
            return;
        }
        // -sum_{m != 0} (x_m/[m]) u^{-m} + Q + x_0 log u
        let c = Coeff::from_int(coef);
        let base = s
            .neg()
            .qm_power()
            .div(&qint_m(ExponentVec::int(1, 0, 0)))
            .neg()
            .mul(&c);
        self.op.add_mode(key, Profile { plus: base.clone(), minus: base });
        if key.is_odd_zero_mode(self.n) {
            if let BosonKey::B(i, _) = key {
                self.op.push_odd_q(i, coef);
            }
            self.op.add_zero(key, ZeroPart {
                q_log: c.mul(&s.to_symbol()),
                z_log: c,
                big_q: Coeff::zero(),
            });
        } else {
            self.op.add_zero(key, ZeroPart {
                q_log: c.mul(&s.to_symbol()),
                z_log: c.clone(),
                big_q: c,
            });
        }
    }

    /// `b^{i,j}(q^s z)` (full field with zero modes).
    pub fn b_field(&mut self, i: u8, j: u8, s: ExponentVec, coef: i64) -> &mut Self {
        self.full_field(BosonKey::B(i, j), s, coef);
        self
    }

    /// `c^{i,j}(q^s z)`.
    pub fn c_field(&mut self, i: u8, j: u8, s: ExponentVec, coef: i64) -> &mut Self {
        self.full_field(BosonKey::C(i, j), s, coef);
        self
    }

    /// `(b+c)^{i,j}(q^s z)`.
    pub fn bc_field(&mut self, i: u8, j: u8, s: ExponentVec, coef: i64) -> &mut Self {
        self.b_field(i, j, s, coef);
        if (j as usize) <= self.n {
            self.c_field(i, j, s, coef);
        } else {
            panic!("(b+c) field requires j <= N");
        }
        self
    }

    fn half_field(&mut self, key: BosonKey, s: ExponentVec, coef: i64, plus: bool) {
        self.check(key);
        if key.is_null() {
            return;
        }
        let base = q_minus_qinv().mul(&s.neg().qm_power()).scale_int(coef);
        let prof = if plus {
            Profile { plus: base, minus: Coeff::zero() }
        } else {
            Profile { plus: Coeff::zero(), minus: base.neg() }
        };
        self.op.add_mode(key, prof);
        self.op.add_zero(key, ZeroPart {
            q_log: Coeff::from_int(if plus { coef } else { -coef }),
            z_log: Coeff::zero(),
            big_q: Coeff::zero(),
        });
    }

    /// `b_+^{i,j}(q^s z)`.
    pub fn b_plus(&mut self, i: u8, j: u8, s: ExponentVec, coef: i64) -> &mut Self {
        self.half_field(BosonKey::B(i, j), s, coef, true);
        self
    }

    /// `b_-^{i,j}(q^s z)`.
    pub fn b_minus(&mut self, i: u8, j: u8, s: ExponentVec, coef: i64) -> &mut Self {
        self.half_field(BosonKey::B(i, j), s, coef, false);
        self
    }

    /// The level-smeared field `(1/(k+N-1) a^i)(q^s z | alpha)` scaled by
    /// `coef`: mode coefficient `-coef q^{-alpha |m|} q^{-s m} / [(k+N-1)m]`,
    /// zero-mode part `(coef/(k+N-1)) (Q + a_0 log(q^s z))`.
    pub fn smeared_a(&mut self, i: u8, s: ExponentVec, alpha: ExponentVec, coef: i64) -> &mut Self {
        let key = BosonKey::A(i);
        self.check(key);
        let r = ExponentVec::level_shift(self.n as i64);
        let denom = qint_m(r);
        let c = Coeff::from_int(coef);
        let plus = alpha
            .neg()
            .qm_power()
            .mul(&s.neg().qm_power())
            .div(&denom)
            .neg()
            .mul(&c);
        let minus = alpha
            .qm_power()
            .mul(&s.neg().qm_power())
            .div(&denom)
            .neg()
            .mul(&c);
        self.op.add_mode(key, Profile { plus, minus });
        let rinv = r.to_symbol().inv();
        self.op.add_zero(key, ZeroPart {
            q_log: c.mul(&rinv).mul(&s.to_symbol()),
            z_log: c.mul(&rinv),
            big_q: c.mul(&rinv),
        });
        self
    }

    pub fn build(self) -> ExpOperator {
        self.op
    }
}

// ---------------------------------------------------------------------
// atom catalog
// ---------------------------------------------------------------------

/// Identifier of one exponential atom of the catalog.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum AtomId {
    /// `X_i^{+(j,s)}`: `s = 0` only for `i = N`.
    XPlus { i: u8, j: u8, s: u8 },
    /// `X_i^{-(j,s)}`: `s = 0` only for `j = N` with `i < N`.
    XMinus { i: u8, j: u8, s: u8 },
    /// screening atom `S_i^{(j,s)}`; `j = N+1, s = 0` is the top one.
    Screen { i: u8, j: u8, s: u8 },
    /// `Psi_i^+` at displayed argument `q^{k/2} z`.
    PsiPlus { i: u8 },
    /// `Psi_i^-` at displayed argument `q^{-k/2} z`.
    PsiMinus { i: u8 },
}

/// Error from the atom factory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomError {
    UnknownAtom,
    IndexOutOfRange,
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AtomId::XPlus { i, j, s } => write!(f, "X{}+({},{})", i, j, s),
            AtomId::XMinus { i, j, s } => write!(f, "X{}-({},{})", i, j, s),
            AtomId::Screen { i, j, s } => write!(f, "S{}({},{})", i, j, s),
            AtomId::PsiPlus { i } => write!(f, "Psi{}+", i),
            AtomId::PsiMinus { i } => write!(f, "Psi{}-", i),
        }
    }
}

const E0: ExponentVec = ExponentVec::ZERO;

fn e_int(c: i64, k: i64) -> ExponentVec {
    ExponentVec::int(c, k, 0)
}

/// Build one catalog atom at rank `n`.  The transcription follows the
/// defining displays term by term; degenerate boundary keys are dropped.
pub fn build_atom(n: usize, id: AtomId) -> Result<ExpOperator, AtomError> {
    let nn = n as u8;
    assert!(n >= 2);
    let r_half = ExponentVec::half(n as i64 - 1, 1, 0); // (k+N-1)/2
    let mut b = OpBuilder::new(n);
    match id {
        AtomId::XPlus { i, j, s } => {
            if i == nn {
                // X_N^{+(j,0)}, 1 <= j <= N
                if s != 0 || !(1..=nn).contains(&j) {
                    return Err(AtomError::IndexOutOfRange);
                }
                b.bc_field(j, nn, e_int(j as i64 - 1, 0), 1);
                b.b_field(j, nn + 1, e_int(j as i64 - 1, 0), 1);
                for l in 1..j {
                    b.b_plus(l, nn + 1, e_int(l as i64, 0), -1);
                    b.b_plus(l, nn, e_int(l as i64, 0), -1);
                }
            } else {
                // X_i^{+(j,s)}, 1 <= j <= i <= N-1, s in {1,2}
                if !(1..=nn - 1).contains(&i) || !(1..=i).contains(&j) || !(s == 1 || s == 2) {
                    return Err(AtomError::IndexOutOfRange);
                }
                let ji = j as i64;
                if j < i {
                    b.bc_field(j, i, e_int(ji - 1, 0), 1);
                }
                if s == 1 {
                    b.b_plus(j, i + 1, e_int(ji - 1, 0), 1);
                    b.bc_field(j, i + 1, e_int(ji, 0), -1);
                } else {
                    b.b_minus(j, i + 1, e_int(ji - 1, 0), 1);
                    b.bc_field(j, i + 1, e_int(ji - 2, 0), -1);
                }
                for l in 1..j {
                    let li = l as i64;
                    b.b_plus(l, i + 1, e_int(li - 1, 0), 1);
                    b.b_plus(l, i, e_int(li, 0), -1);
                }
            }
        }
        AtomId::XMinus { i, j, s } => {
            if i == nn {
                // X_N^{-(j,s)}
                if j == nn {
                    match s {
                        1 => {
                            b.a_minus(nn, r_half.neg(), 1);
                            b.b_field(nn, nn + 1, e_int(-(n as i64) + 1, -1), -1);
                        }
                        2 => {
                            b.a_plus(nn, r_half, 1);
                            b.b_field(nn, nn + 1, e_int(n as i64 - 1, 1), -1);
                        }
                        _ => return Err(AtomError::IndexOutOfRange),
                    }
                } else if (1..nn).contains(&j) && (s == 1 || s == 2) {
                    let ji = j as i64;
                    b.a_minus(nn, r_half.neg(), 1);
                    if s == 1 {
                        b.b_minus(j, nn, e_int(-ji, -1), -1);
                        b.bc_field(j, nn, e_int(-ji + 1, -1), -1);
                        b.b_minus(j, nn + 1, e_int(-ji, -1), -1);
                        b.b_field(j, nn + 1, e_int(-ji + 1, -1), -1);
                    } else {
                        b.b_plus(j, nn, e_int(-ji, -1), -1);
                        b.bc_field(j, nn, e_int(-ji - 1, -1), -1);
                        b.b_plus(j, nn + 1, e_int(-ji, -1), -1);
                        b.b_field(j, nn + 1, e_int(-ji - 1, -1), -1);
                    }
                    for l in j + 1..nn {
                        let li = l as i64;
                        b.b_minus(l, nn, e_int(-li, -1), -1);
                        b.b_minus(l, nn + 1, e_int(-li, -1), -1);
                    }
                } else {
                    return Err(AtomError::IndexOutOfRange);
                }
            } else if !(1..nn).contains(&i) {
                return Err(AtomError::IndexOutOfRange);
            } else if j == nn && s == 0 {
                // X_i^{-(N,0)}, i <= N-1
                b.a_plus(i, r_half, 1);
                b.b_field(i, nn + 1, e_int(n as i64 - 1, 1), -1);
                b.b_plus(i + 1, nn + 1, e_int(n as i64 - 1, 1), -1);
                b.b_field(i + 1, nn + 1, e_int(n as i64, 1), 1);
            } else if j == i && (s == 1 || s == 2) {
                let ii = i as i64;
                if s == 1 {
                    b.a_minus(i, r_half.neg(), 1);
                    b.bc_field(i, i + 1, e_int(-ii, -1), 1);
                    for l in i + 1..=nn {
                        let li = l as i64;
                        b.b_minus(i, l, e_int(-li, -1), 1);
                        b.b_minus(i + 1, l, e_int(-li + 1, -1), -1);
                    }
                    b.b_minus(i, nn + 1, e_int(-(n as i64), -1), 1);
                    b.b_minus(i + 1, nn + 1, e_int(-(n as i64) + 1, -1), -1);
                } else {
                    b.a_plus(i, r_half, 1);
                    b.bc_field(i, i + 1, e_int(ii, 1), 1);
                    for l in i + 1..=nn {
                        let li = l as i64;
                        b.b_plus(i, l, e_int(li, 1), 1);
                        b.b_plus(i + 1, l, e_int(li - 1, 1), -1);
                    }
                    b.b_plus(i, nn + 1, e_int(n as i64, 1), 1);
                    b.b_plus(i + 1, nn + 1, e_int(n as i64 - 1, 1), -1);
                }
            } else if (1..i).contains(&j) && (s == 1 || s == 2) {
                let ji = j as i64;
                b.a_minus(i, r_half.neg(), 1);
                b.bc_field(j, i + 1, e_int(-ji, -1), 1);
                if s == 1 {
                    b.b_minus(j, i, e_int(-ji, -1), -1);
                    b.bc_field(j, i, e_int(-ji + 1, -1), -1);
                } else {
                    b.b_plus(j, i, e_int(-ji, -1), -1);
                    b.bc_field(j, i, e_int(-ji - 1, -1), -1);
                }
                for l in j + 1..=i {
                    let li = l as i64;
                    b.b_minus(l, i + 1, e_int(-li + 1, -1), 1);
                    b.b_minus(l, i, e_int(-li, -1), -1);
                }
                for l in i + 1..=nn {
                    let li = l as i64;
                    b.b_minus(i, l, e_int(-li, -1), 1);
                    b.b_minus(i + 1, l, e_int(-li + 1, -1), -1);
                }
                b.b_minus(i, nn + 1, e_int(-(n as i64), -1), 1);
                b.b_minus(i + 1, nn + 1, e_int(-(n as i64) + 1, -1), -1);
            } else if (i + 1..nn).contains(&j) && (s == 1 || s == 2) {
                let ji = j as i64;
                b.a_plus(i, r_half, 1);
                b.bc_field(i, j + 1, e_int(ji, 1), 1);
                if s == 1 {
                    b.b_plus(i + 1, j + 1, e_int(ji, 1), 1);
                    b.bc_field(i + 1, j + 1, e_int(ji + 1, 1), -1);
                } else {
                    b.b_minus(i + 1, j + 1, e_int(ji, 1), 1);
                    b.bc_field(i + 1, j + 1, e_int(ji - 1, 1), -1);
                }
                for l in j + 1..=nn {
                    let li = l as i64;
                    b.b_plus(i, l, e_int(li, 1), 1);
                    b.b_plus(i + 1, l, e_int(li - 1, 1), -1);
                }
                b.b_plus(i, nn + 1, e_int(n as i64, 1), 1);
                b.b_plus(i + 1, nn + 1, e_int(n as i64 - 1, 1), -1);
            } else {
                return Err(AtomError::IndexOutOfRange);
            }
        }
        AtomId::Screen { i, j, s } => {
            if !(1..=nn).contains(&i) {
                return Err(AtomError::IndexOutOfRange);
            }
            // common smeared prefactor: -(1/(k+N-1) a^i)(z | (k+N-1)/2)
            b.smeared_a(i, E0, r_half, -1);
            if j == nn + 1 && s == 0 {
                if i == nn {
                    b.b_field(nn, nn + 1, E0, 1);
                } else {
                    b.b_field(i, nn + 1, E0, 1);
                    b.b_plus(i + 1, nn + 1, E0, 1);
                    b.b_field(i + 1, nn + 1, e_int(1, 0), -1);
                }
            } else if i < nn && (i + 1..=nn).contains(&j) && (s == 1 || s == 2) {
                let ji = j as i64;
                let ni = n as i64;
                if s == 1 {
                    b.b_minus(i, j, e_int(ni - 1 - ji, 0), -1);
                    b.bc_field(i, j, e_int(ni - ji, 0), -1);
                    b.bc_field(i + 1, j, e_int(ni - 1 - ji, 0), 1);
                } else {
                    b.b_plus(i, j, e_int(ni - 1 - ji, 0), -1);
                    b.bc_field(i, j, e_int(ni - ji - 2, 0), -1);
                    b.bc_field(i + 1, j, e_int(ni - 1 - ji, 0), 1);
                }
                for l in j + 1..=nn {
                    let li = l as i64;
                    b.b_minus(i + 1, l, e_int(ni - li, 0), 1);
                    b.b_minus(i, l, e_int(ni - li - 1, 0), -1);
                }
                b.b_minus(i + 1, nn + 1, E0, 1);
                b.b_minus(i, nn + 1, e_int(-1, 0), -1);
            } else {
                return Err(AtomError::IndexOutOfRange);
            }
        }
        AtomId::PsiPlus { i } | AtomId::PsiMinus { i } => {
            if !(1..=nn).contains(&i) {
                return Err(AtomError::IndexOutOfRange);
            }
            let plus = matches!(id, AtomId::PsiPlus { .. });
            let sg = if plus { 1i64 } else { -1 };
            let half = |c: i64, k: i64| ExponentVec::half(sg * c, sg * k, 0);
            if plus {
                b.a_plus(i, r_half, 1);
            } else {
                b.a_minus(i, r_half.neg(), 1);
            }
            let mut bpm = |bb: &mut OpBuilder, x: u8, y: u8, c2: i64, k2: i64, coef: i64| {
                if plus {
                    bb.b_plus(x, y, half(c2, k2), coef);
                } else {
                    bb.b_minus(x, y, half(c2, k2), coef);
                }
            };
            if i < nn {
                for l in 1..=i {
                    let li = l as i64;
                    bpm(&mut b, l, i + 1, 2 * (li - 1), 2, 1);
                    bpm(&mut b, l, i, 2 * li, 2, -1);
                }
                for l in i + 1..=nn {
                    let li = l as i64;
                    bpm(&mut b, i, l, 2 * li, 2, 1);
                    bpm(&mut b, i + 1, l, 2 * (li - 1), 2, -1);
                }
                bpm(&mut b, i, nn + 1, 2 * (n as i64), 2, 1);
                bpm(&mut b, i + 1, nn + 1, 2 * (n as i64 - 1), 2, -1);
            } else {
                for l in 1..nn {
                    let li = l as i64;
                    bpm(&mut b, l, nn, 2 * li, 2, -1);
                    bpm(&mut b, l, nn + 1, 2 * li, 2, -1);
                }
            }
            // no explicit zero-mode factor: the +-p0 log q parts carried
            // by the half fields already compose q^{+-h_i}
        }
    }
    Ok(b.build())
}

/// `h_i = h_{i,0}` as zero-mode charges (coefficients of `p_0` per key).
pub fn h_zero_charges(n: usize, i: usize) -> Vec<(BosonKey, Coeff)> {
    let nn = n as u8;
    let i8u = i as u8;
    let mut out: Vec<(BosonKey, Coeff)> = Vec::new();
    let mut push = |k: BosonKey, c: i64| {
        if !k.is_null() {
            out.push((k, Coeff::from_int(c)));
        }
    };
    push(BosonKey::A(i8u), 1);
    if i < n {
        for l in 1..=i8u {
            push(BosonKey::B(l, i8u + 1), 1);
            if l < i8u {
                push(BosonKey::B(l, i8u), -1);
            }
        }
        for l in i8u + 1..=nn {
            push(BosonKey::B(i8u, l), 1);
            push(BosonKey::B(i8u + 1, l), -1);
        }
        push(BosonKey::B(i8u, nn + 1), 1);
        push(BosonKey::B(i8u + 1, nn + 1), -1);
    } else {
        for l in 1..nn {
            push(BosonKey::B(l, nn), -1);
            push(BosonKey::B(l, nn + 1), -1);
        }
    }
    out
}

/// The modes `h_{i,m}` of the Cartan currents, stored as per-key branch
/// profiles (the coefficient of the oscillator `x_m`, for `m > 0` and
/// `m < 0`), plus the `m = 0` charge content.
#[derive(Clone)]
pub struct HOperator {
    pub i: usize,
    pub prof: BTreeMap<BosonKey, Profile>,
    pub zero: Vec<(BosonKey, Coeff)>,
}

/// Build `h_{i,m}` from its explicit oscillator expansion.
pub fn h_operator(n: usize, i: usize) -> HOperator {
    let nn = n as u8;
    let iu = i as u8;
    assert!((1..=n).contains(&i));
    let mut prof: BTreeMap<BosonKey, Profile> = BTreeMap::new();
    // q^{-e|m|} branches: plus gets q^{-e m}, minus gets q^{+e m}
    let mut add = |key: BosonKey, e: ExponentVec, coef: i64| {
        if key.is_null() {
            return;
        }
        let p = Profile {
            plus: e.neg().qm_power().scale_int(coef),
            minus: e.qm_power().scale_int(coef),
        };
        let ent = prof.entry(key).or_insert_with(Profile::zero);
        *ent = ent.add(&p);
    };
    let half = |c2: i64, k2: i64| ExponentVec::half(c2, k2, 0);
    add(BosonKey::A(iu), half(n as i64 - 1, 0), 1);
    if i < n {
        for l in 1..=iu {
            let li = l as i64;
            add(BosonKey::B(l, iu + 1), half(2 * (li - 1), 1), 1);
            add(BosonKey::B(l, iu), half(2 * li, 1), -1);
        }
        for l in iu + 1..=nn {
            let li = l as i64;
            add(BosonKey::B(iu, l), half(2 * li, 1), 1);
            add(BosonKey::B(iu + 1, l), half(2 * (li - 1), 1), -1);
        }
        add(BosonKey::B(iu, nn + 1), half(2 * n as i64, 1), 1);
        add(BosonKey::B(iu + 1, nn + 1), half(2 * (n as i64 - 1), 1), -1);
    } else {
        for l in 1..nn {
            let li = l as i64;
            add(BosonKey::B(l, nn), half(2 * li, 1), -1);
            add(BosonKey::B(l, nn + 1), half(2 * li, 1), -1);
        }
    }
    HOperator { i, prof, zero: h_zero_charges(n, i) }
}

impl fmt::Display for ExpOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "  prefactor: {}", self.pre)?;
        if !self.zpow.is_zero() {
            writeln!(f, "  z-power:   {}", self.zpow)?;
        }
        for (k, p) in &self.modes {
            writeln!(f, "  mode {:?}: m>0: {} | m<0: {}", k, p.plus, p.minus)?;
        }
        for (k, z) in &self.zero {
            writeln!(
                f,
                "  zero {:?}: Q: {} | p0 log z: {} | p0 log q: {}",
                k, z.big_q, z.z_log, z.q_log
            )?;
        }
        if !self.odd_q.is_empty() {
            let s: Vec<String> = self
                .odd_q
                .iter()
                .map(|(i, c)| format!("exp({} Qb[{},N+1])", c, i))
                .collect();
            writeln!(f, "  odd zero modes: {}", s.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_validation() {
        assert!(BosonKey::A(3).is_valid(3));
        assert!(!BosonKey::A(4).is_valid(3));
        assert!(BosonKey::B(1, 4).is_valid(3));
        assert!(!BosonKey::B(2, 1).is_valid(3));
        assert!(!BosonKey::C(1, 4).is_valid(3));
        assert!(BosonKey::B(2, 2).is_null());
    }

    #[test]
    fn pairing_kernel_antisymmetry_support() {
        // the kernel is m * [x_m, y_{-m}]; antisymmetry appears as
        // kernel(x,y)(m) = -kernel(y,x)(-m) after the m -> -m flip
        let n = 4;
        let cartan = CartanData::new(n).unwrap();
        let keys = [
            BosonKey::A(1),
            BosonKey::A(2),
            BosonKey::B(1, 2),
            BosonKey::B(1, 5),
            BosonKey::C(1, 2),
        ];
        for x in keys {
            for y in keys {
                let k1 = pairing_kernel(n, &cartan, x, y);
                let k2 = pairing_kernel(n, &cartan, y, x).flip_m();
                // m*[x_m,y_{-m}] = -(-m)[y_{-m},x_m] = (-m)[y_{-m},x_{m}]*(-1)
                assert!(k1.eq(&k2), "{:?} {:?}", x, y);
            }
        }
        // cross-family pairings vanish
        let z = pairing_kernel(n, &cartan, BosonKey::B(1, 2), BosonKey::C(1, 2));
        assert!(z.is_zero());
    }

    #[test]
    fn pairing_signs_exhaustive_n4() {
        let n = 4;
        let cartan = CartanData::new(n).unwrap();
        let one = qint_m(ExponentVec::int(1, 0, 0));
        let sq = one.mul(&one);
        for i in 1..=4u8 {
            for j in (i + 1)..=5u8 {
                let k = pairing_kernel(n, &cartan, BosonKey::B(i, j), BosonKey::B(i, j));
                let expect = if j == 5 { sq.clone() } else { sq.neg() };
                assert!(k.eq(&expect), "b({},{})", i, j);
                if j <= 4 {
                    let kc = pairing_kernel(n, &cartan, BosonKey::C(i, j), BosonKey::C(i, j));
                    assert!(kc.eq(&sq), "c({},{})", i, j);
                }
            }
        }
        // zero-mode pairings
        let zb = zero_mode_pairing(n, &cartan, BosonKey::B(1, 5), BosonKey::B(1, 5));
        assert!(zb.eq(&Coeff::one()));
        let zc = zero_mode_pairing(n, &cartan, BosonKey::C(1, 2), BosonKey::C(1, 3));
        assert!(zc.is_zero());
        let za = zero_mode_pairing(n, &cartan, BosonKey::A(1), BosonKey::A(2));
        let expect = Coeff::sym_k().add(&Coeff::from_int(3)).neg();
        assert!(za.eq(&expect));
    }

    #[test]
    fn cocycle_signs() {
        assert_eq!(cocycle_sign(1, 1, 2, 1), -1);
        assert_eq!(cocycle_sign(1, 1, 1, -1), 1);
        assert_eq!(cocycle_sign(1, 2, 2, 1), 1);
        let (list, sign) = canonical_odd(&[(2, 1), (1, 1)]);
        assert_eq!(sign, -1);
        assert_eq!(list, alloc::vec![(1, 1), (2, 1)]);
        let (list2, sign2) = canonical_odd(&[(2, 1), (2, -1), (1, 1)]);
        assert_eq!(sign2, 1); // the two (2,.) factors merge to zero first or cross evenly
        assert_eq!(list2, alloc::vec![(1, 1)]);
    }

    #[test]
    fn atom_gradings_match_table() {
        // |X_N^{+-(j,s)}| = 1 and |S_N^{(N+1,0)}| = 1, all others even
        for n in [2usize, 3, 4] {
            let nn = n as u8;
            for i in 1..=nn {
                // screening atoms
                if i < nn {
                    for j in i + 1..=nn {
                        for s in [1u8, 2] {
                            let a = build_atom(n, AtomId::Screen { i, j, s }).unwrap();
                            assert_eq!(a.grading(), 0);
                        }
                    }
                }
                let top = build_atom(n, AtomId::Screen { i, j: nn + 1, s: 0 }).unwrap();
                assert_eq!(top.grading(), if i == nn { 1 } else { 0 });
            }
            // X atoms
            for j in 1..=nn {
                let a = build_atom(n, AtomId::XPlus { i: nn, j, s: 0 }).unwrap();
                assert_eq!(a.grading(), 1, "X_N^+({},0) n={}", j, n);
            }
            for i in 1..nn {
                for j in 1..=i {
                    for s in [1, 2] {
                        let a = build_atom(n, AtomId::XPlus { i, j, s }).unwrap();
                        assert_eq!(a.grading(), 0);
                    }
                }
            }
            for j in 1..=nn {
                for s in [1, 2] {
                    let a = build_atom(n, AtomId::XMinus { i: nn, j, s }).unwrap();
                    assert_eq!(a.grading(), 1);
                }
            }
            for i in 1..nn {
                let a = build_atom(n, AtomId::XMinus { i, j: nn, s: 0 }).unwrap();
                assert_eq!(a.grading(), 0);
                for s in [1, 2] {
                    let a = build_atom(n, AtomId::XMinus { i, j: i, s }).unwrap();
                    assert_eq!(a.grading(), 0);
                }
            }
        }
    }

    #[test]
    fn atoms_reference_valid_keys_only() {
        for n in [2usize, 3, 4, 5] {
            let nn = n as u8;
            let mut ids: Vec<AtomId> = Vec::new();
            for j in 1..=nn {
                ids.push(AtomId::XPlus { i: nn, j, s: 0 });
                for s in [1, 2] {
                    ids.push(AtomId::XMinus { i: nn, j, s });
                }
            }
            for i in 1..nn {
                ids.push(AtomId::XMinus { i, j: nn, s: 0 });
                ids.push(AtomId::PsiPlus { i });
                ids.push(AtomId::PsiMinus { i });
                ids.push(AtomId::Screen { i, j: nn + 1, s: 0 });
                for j in 1..=i {
                    for s in [1, 2] {
                        ids.push(AtomId::XPlus { i, j, s });
                    }
                }
                for j in 1..nn {
                    if j != i {
                        for s in [1, 2] {
                            ids.push(AtomId::XMinus { i, j, s });
                        }
                    } else {
                        for s in [1, 2] {
                            ids.push(AtomId::XMinus { i, j: i, s });
                        }
                    }
                }
                for j in i + 1..=nn {
                    for s in [1, 2] {
                        ids.push(AtomId::Screen { i, j, s });
                    }
                }
            }
            ids.push(AtomId::PsiPlus { i: nn });
            ids.push(AtomId::PsiMinus { i: nn });
            ids.push(AtomId::Screen { i: nn, j: nn + 1, s: 0 });
            for id in ids {
                let a = build_atom(n, id).unwrap();
                for k in a.modes.keys().chain(a.zero.keys()) {
                    assert!(k.is_valid(n), "{:?} in {} at n={}", k, id, n);
                }
            }
        }
    }

    #[test]
    fn psi_exponent_reproduces_h_profiles() {
        // the exponent of Psi_i^{+-} must equal (q - q^{-1}) h_{i,m} with
        // the argument q^{-+k/2} folded in, branch by branch
        for n in [2usize, 3, 4] {
            for i in 1..=n {
                let h = h_operator(n, i);
                let psi_p = build_atom(n, AtomId::PsiPlus { i: i as u8 }).unwrap();
                let psi_m = build_atom(n, AtomId::PsiMinus { i: i as u8 }).unwrap();
                let shift_p = ExponentVec::half(0, 1, 0); // q^{k/2}
                for (key, hp) in &h.prof {
                    // Psi^+ at displayed arg q^{k/2} z: coefficient of x_m (m>0)
                    // is (q-q^{-1}) h-profile * q^{-(k/2)m}
                    let want_p = hp
                        .scale(&q_minus_qinv())
                        .mul_qm(shift_p.neg())
                        .plus;
                    let got_p = psi_p
                        .modes
                        .get(key)
                        .map(|p| p.plus.clone())
                        .unwrap_or_else(Coeff::zero);
                    assert!(got_p.eq(&want_p), "n={} i={} key={:?}", n, i, key);
                    // Psi^- at arg q^{-k/2} z: creation branch
                    let want_m = hp
                        .scale(&q_minus_qinv().neg())
                        .mul_qm(shift_p)
                        .minus;
                    let got_m = psi_m
                        .modes
                        .get(key)
                        .map(|p| p.minus.clone())
                        .unwrap_or_else(Coeff::zero);
                    assert!(got_m.eq(&want_m), "n={} i={} key={:?} minus", n, i, key);
                }
                // annihilation branch of Psi^- and creation of Psi^+ are empty
                for p in psi_m.modes.values() {
                    assert!(p.plus.is_zero());
                }
                for p in psi_p.modes.values() {
                    assert!(p.minus.is_zero());
                }
            }
        }
    }

    #[test]
    fn shift_arg_composes() {
        let a = build_atom(3, AtomId::Screen { i: 2, j: 3, s: 1 }).unwrap();
        let e1 = ExponentVec::int(1, 1, 0);
        let e2 = ExponentVec::int(-2, 0, 0);
        let lhs = a.shift_arg(e1).shift_arg(e2);
        let rhs = a.shift_arg(e1.add(e2));
        assert!(lhs.eq_op(&rhs));
    }
}
