//! The two identity suites over the atom catalog: the delta-function
//! commutators `A1-1 .. A1-28` and the specialization identities
//! `A2-1 .. A2-16`, iterated over every in-range index tuple at a given
//! rank.
//!
//! Every instance is recomputed from the atoms through the contraction
//! engine and compared against the displayed right-hand side.  Displayed
//! normal-ordered symbols are plain merged exponentials; the engine's
//! ordered-product symbols differ by the cocycle sort sign, which is
//! folded in via [`merge_sign`].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::exponent::ExponentVec;
use crate::freefield::{build_atom, merge_sign, AtomId, BosonKey, ExpOperator};
use crate::num::coeff::Coeff;
use crate::ope::{graded_commutator, specialize, DistResult};
use crate::qcoeff::q_minus_qinv;
use crate::report::{Record, Status};
use crate::superlattice::CartanData;

/// Shift one atom's mode profile by `q^{delta m}` after construction —
/// the negative control of the verification suites (simulates a
/// transcription error in a single argument shift).
#[derive(Clone, Debug)]
pub struct Mutation {
    pub target: AtomId,
    pub key: BosonKey,
    pub delta: i64,
}

pub fn build_atom_mutated(
    n: usize,
    id: AtomId,
    mutation: Option<&Mutation>,
) -> Result<ExpOperator, crate::freefield::AtomError> {
    let mut a = build_atom(n, id)?;
    if let Some(m) = mutation {
        if m.target == id {
            a.mutate_shift(m.key, m.delta);
        }
    }
    Ok(a)
}

/// One displayed right-hand-side term: `coef * z1^{zpow} *
/// delta(q^{support} z2/z1) * :a(z1) b(z2):` specialized at the support.
struct RhsTerm {
    support: ExponentVec,
    coef: Coeff,
    zpow: i64,
}

fn expected_dist(a: &ExpOperator, b: &ExpOperator, terms: &[RhsTerm]) -> DistResult {
    let sigma = merge_sign(a, b);
    let mut out = DistResult::empty();
    for t in terms {
        let mut op = specialize(a, b, t.support);
        op.pre = op.pre.mul(&t.coef).scale_int(sigma);
        op.zpow = op.zpow.add(&Coeff::from_int(t.zpow));
        out.add_term(t.support, op);
    }
    out.canonicalize();
    out
}

fn check_a1_instance(
    n: usize,
    cartan: &CartanData,
    id: &str,
    indices: &[i64],
    lhs: (AtomId, AtomId),
    rhs: Vec<RhsTerm>,
    mutation: Option<&Mutation>,
) -> Record {
    let a = match build_atom_mutated(n, lhs.0, mutation) {
        Ok(a) => a,
        Err(_) => {
            return Record::new("appendix-a1", id, indices, Status::Skipped,
                String::from("atom out of catalog at this rank"));
        }
    };
    let b = match build_atom_mutated(n, lhs.1, mutation) {
        Ok(b) => b,
        Err(_) => {
            return Record::new("appendix-a1", id, indices, Status::Skipped,
                String::from("atom out of catalog at this rank"));
        }
    };
    let got = match graded_commutator(n, cartan, &a, &b) {
        Ok(d) => d,
        Err(e) => {
            return Record::new("appendix-a1", id, indices, Status::Fail,
                format!("commutator not delta-supported: {:?}", e));
        }
    };
    let want = expected_dist(&a, &b, &rhs);
    if got.eq_dist(&want) {
        Record::new("appendix-a1", id, indices, Status::Pass, String::new())
    } else {
        Record::new("appendix-a1", id, indices, Status::Fail,
            format!("recomputed\n{}\nexpected\n{}", got, want))
    }
}

/// Run the delta-function suite at rank `n`.
pub fn run_a1_suite(n: usize, mutation: Option<&Mutation>) -> Vec<Record> {
    let cartan = CartanData::new(n).expect("rank too small");
    let nn = n as i64;
    let nu8 = n as u8;
    let qq = q_minus_qinv();
    let r = ExponentVec::level_shift(nn);
    let mut recs: Vec<Record> = Vec::new();
    let mut ran: [bool; 29] = [false; 29];

    // A1-1 .. A1-8: the diagonal family [X_i^-, S_i]
    for i in 1..nu8 {
        let ii = i as i64;
        ran[1] = true;
        recs.push(check_a1_instance(n, &cartan, "A1-1", &[ii],
            (AtomId::XMinus { i, j: nu8, s: 0 }, AtomId::Screen { i, j: nu8 + 1, s: 0 }),
            vec![
                RhsTerm {
                    support: r.neg(),
                    coef: r.q_power().inv().div(&qq)
                        .mul(&ExponentVec::int(-nn, -1, 0).q_power()).neg(),
                    zpow: -2,
                },
                RhsTerm {
                    support: ExponentVec::int(-nn - 1, -1, 0),
                    coef: ExponentVec::int(-nn - 1, -1, 0).q_power().div(&qq)
                        .mul(&ExponentVec::int(-nn, -1, 0).q_power()),
                    zpow: -2,
                },
            ],
            mutation));
        ran[2] = true;
        recs.push(check_a1_instance(n, &cartan, "A1-2", &[ii],
            (AtomId::XMinus { i, j: i, s: 1 }, AtomId::Screen { i, j: i + 1, s: 1 }),
            vec![RhsTerm { support: r, coef: qq.clone(), zpow: 0 }],
            mutation));
        ran[3] = true;
        if ii <= nn - 2 {
            recs.push(check_a1_instance(n, &cartan, "A1-3", &[ii],
                (AtomId::XMinus { i, j: nu8 - 1, s: 1 }, AtomId::Screen { i, j: nu8, s: 2 }),
                vec![RhsTerm {
                    support: ExponentVec::int(-nn - 1, -1, 0),
                    coef: qq.neg(),
                    zpow: 0,
                }],
                mutation));
        } else {
            // at the boundary i = N-1 the displayed pair degenerates to
            // [(i,1),(i+1,2)], whose bracket vanishes identically; the
            // cancellation of the second A1-1 delta runs through the
            // [(i,2),(i+1,2)] pair there instead
            recs.push(Record::new("appendix-a1", "A1-3", &[ii], Status::Flagged,
                String::from(
                    "displayed range includes i = N-1 where the bracket vanishes; \
                     identity holds (and is used) for i <= N-2")));
        }
        if i as i64 <= nn - 2 {
            ran[6] = true;
            recs.push(check_a1_instance(n, &cartan, "A1-6", &[ii],
                (AtomId::XMinus { i, j: i, s: 2 }, AtomId::Screen { i, j: i + 1, s: 2 }),
                vec![RhsTerm {
                    support: ExponentVec::int(nn - 3 - 2 * ii, -1, 0),
                    coef: qq.neg(),
                    zpow: 0,
                }],
                mutation));
        }
        for l in i..=(nu8.saturating_sub(2)) {
            let li = l as i64;
            ran[4] = true;
            recs.push(check_a1_instance(n, &cartan, "A1-4", &[ii, li],
                (AtomId::XMinus { i, j: l + 1, s: 2 }, AtomId::Screen { i, j: l + 2, s: 1 }),
                vec![RhsTerm {
                    support: ExponentVec::int(nn - 3 - 2 * li, -1, 0),
                    coef: qq.clone(),
                    zpow: 0,
                }],
                mutation));
        }
        // The displayed A1-5 carries a one-unit index shift: the bracket
        // pairing (l,1) with (l+1,2) is delta-supported at q^{N-3-k-2l}
        // for i+1 <= l <= N-1 (the l = N-1 instance is exactly A1-3).
        // Verified instances are flagged with the corrected labels.
        for l in i + 1..=(nu8.saturating_sub(2)) {
            let li = l as i64;
            ran[5] = true;
            let mut rec = check_a1_instance(n, &cartan, "A1-5", &[ii, li],
                (AtomId::XMinus { i, j: l, s: 1 }, AtomId::Screen { i, j: l + 1, s: 2 }),
                vec![RhsTerm {
                    support: ExponentVec::int(nn - 3 - 2 * li, -1, 0),
                    coef: qq.neg(),
                    zpow: 0,
                }],
                mutation);
            if rec.status == Status::Pass {
                rec.status = Status::Flagged;
                rec.detail = String::from(
                    "pair labels corrected by one unit relative to the display");
            }
            recs.push(rec);
        }
    }
    ran[7] = true;
    recs.push(check_a1_instance(n, &cartan, "A1-7", &[],
        (AtomId::XMinus { i: nu8, j: nu8, s: 1 }, AtomId::Screen { i: nu8, j: nu8 + 1, s: 0 }),
        vec![RhsTerm { support: r, coef: r.q_power(), zpow: -1 }],
        mutation));
    ran[8] = true;
    recs.push(check_a1_instance(n, &cartan, "A1-8", &[],
        (AtomId::XMinus { i: nu8, j: nu8, s: 2 }, AtomId::Screen { i: nu8, j: nu8 + 1, s: 0 }),
        vec![RhsTerm { support: r.neg(), coef: r.neg().q_power(), zpow: -1 }],
        mutation));

    // A1-9, A1-10: [X_i^-, S_{i+1}]
    for i in 1..=(nu8.saturating_sub(2)) {
        for l in i + 1..nu8 {
            let (ii, li) = (i as i64, l as i64);
            let supp = ExponentVec::int(nn - 2 * li - 2, -1, 0);
            ran[9] = true;
            recs.push(check_a1_instance(n, &cartan, "A1-9", &[ii, li],
                (AtomId::XMinus { i, j: l, s: 1 }, AtomId::Screen { i: i + 1, j: l + 1, s: 2 }),
                vec![RhsTerm { support: supp, coef: qq.clone(), zpow: 0 }],
                mutation));
            ran[10] = true;
            recs.push(check_a1_instance(n, &cartan, "A1-10", &[ii, li],
                (AtomId::XMinus { i, j: l, s: 2 }, AtomId::Screen { i: i + 1, j: l + 1, s: 1 }),
                vec![RhsTerm { support: supp, coef: qq.neg(), zpow: 0 }],
                mutation));
        }
    }

    // A1-11 .. A1-16: [X_i^-, S_j], j < i
    for i in 2..=nu8 {
        for j in 1..i {
            let (ii, ji) = (i as i64, j as i64);
            let supp = ExponentVec::int(nn - ii + ji - 1, 1, 0);
            if i < nu8 {
                ran[11] = true;
                recs.push(check_a1_instance(n, &cartan, "A1-11", &[ii, ji],
                    (AtomId::XMinus { i, j, s: 1 }, AtomId::Screen { i: j, j: i + 1, s: 1 }),
                    vec![RhsTerm { support: supp, coef: qq.clone(), zpow: 0 }],
                    mutation));
                ran[13] = true;
                recs.push(check_a1_instance(n, &cartan, "A1-13", &[ii, ji],
                    (AtomId::XMinus { i, j, s: 2 }, AtomId::Screen { i: j, j: i + 1, s: 1 }),
                    vec![RhsTerm { support: supp, coef: qq.clone(), zpow: 0 }],
                    mutation));
            }
            ran[12] = true;
            recs.push(check_a1_instance(n, &cartan, "A1-12", &[ii, ji],
                (AtomId::XMinus { i, j: j + 1, s: 1 }, AtomId::Screen { i: j, j: i, s: 1 }),
                vec![RhsTerm { support: supp, coef: qq.neg(), zpow: 0 }],
                mutation));
            ran[14] = true;
            recs.push(check_a1_instance(n, &cartan, "A1-14", &[ii, ji],
                (AtomId::XMinus { i, j: j + 1, s: 1 }, AtomId::Screen { i: j, j: i, s: 2 }),
                vec![RhsTerm { support: supp, coef: qq.neg(), zpow: 0 }],
                mutation));
            ran[15] = true;
            recs.push(check_a1_instance(n, &cartan, "A1-15", &[ii, ji],
                (AtomId::XMinus { i, j, s: 1 }, AtomId::Screen { i: j, j: i, s: 2 }),
                vec![RhsTerm {
                    support: supp,
                    coef: Coeff::one().sub(&ExponentVec::int(-2, 0, 0).q_power()),
                    zpow: 0,
                }],
                mutation));
            ran[16] = true;
            recs.push(check_a1_instance(n, &cartan, "A1-16", &[ii, ji],
                (AtomId::XMinus { i, j, s: 2 }, AtomId::Screen { i: j, j: i, s: 1 }),
                vec![RhsTerm {
                    support: supp,
                    coef: ExponentVec::int(-2, 0, 0).q_power().sub(&Coeff::one()),
                    zpow: 0,
                }],
                mutation));
        }
    }

    // A1-17, A1-18: [X_N^-, S_j], j < N (identical right-hand sides)
    for j in 1..nu8 {
        let ji = j as i64;
        let supp = ExponentVec::int(ji - 1, 1, 0);
        for (idn, s) in [("A1-17", 1u8), ("A1-18", 2u8)] {
            ran[if s == 1 { 17 } else { 18 }] = true;
            recs.push(check_a1_instance(n, &cartan, idn, &[ji],
                (AtomId::XMinus { i: nu8, j, s }, AtomId::Screen { i: j, j: nu8 + 1, s: 0 }),
                vec![RhsTerm { support: supp, coef: supp.q_power(), zpow: -1 }],
                mutation));
        }
    }

    // A1-19, A1-20: [X_i^+, S_i]
    for i in 1..nu8 {
        let ii = i as i64;
        let supp = ExponentVec::int(nn - 2 * ii - 1, 0, 0);
        ran[19] = true;
        recs.push(check_a1_instance(n, &cartan, "A1-19", &[ii],
            (AtomId::XPlus { i, j: i, s: 1 }, AtomId::Screen { i, j: i + 1, s: 2 }),
            vec![RhsTerm { support: supp, coef: qq.clone(), zpow: 0 }],
            mutation));
        ran[20] = true;
        recs.push(check_a1_instance(n, &cartan, "A1-20", &[ii],
            (AtomId::XPlus { i, j: i, s: 2 }, AtomId::Screen { i, j: i + 1, s: 1 }),
            vec![RhsTerm { support: supp, coef: qq.neg(), zpow: 0 }],
            mutation));
    }

    // A1-21 .. A1-28 except 23/24: [X_i^+, S_j], j < i <= N-1
    let two = ExponentVec::int(2, 0, 0).q_power();
    for i in 2..nu8 {
        for j in 1..i {
            let (ii, ji) = (i as i64, j as i64);
            let supp = ExponentVec::int(nn - ii - ji - 1, 0, 0);
            let entries: [(&str, AtomId, AtomId, Coeff); 6] = [
                ("A1-21",
                    AtomId::XPlus { i, j, s: 1 }, AtomId::Screen { i: j, j: i, s: 2 },
                    Coeff::one().sub(&two)),
                ("A1-22",
                    AtomId::XPlus { i, j: j + 1, s: 2 }, AtomId::Screen { i: j, j: i + 1, s: 1 },
                    two.sub(&Coeff::one())),
                ("A1-25",
                    AtomId::XPlus { i, j, s: 1 }, AtomId::Screen { i: j, j: i + 1, s: 2 },
                    qq.clone()),
                ("A1-26",
                    AtomId::XPlus { i, j, s: 2 }, AtomId::Screen { i: j, j: i + 1, s: 1 },
                    qq.neg()),
                ("A1-27",
                    AtomId::XPlus { i, j, s: 2 }, AtomId::Screen { i: j, j: i, s: 2 },
                    Coeff::one().sub(&two)),
                ("A1-28",
                    AtomId::XPlus { i, j: j + 1, s: 2 }, AtomId::Screen { i: j, j: i + 1, s: 2 },
                    two.sub(&Coeff::one())),
            ];
            for (idn, a, b, coef) in entries {
                let idx: usize = idn[3..].parse().unwrap();
                ran[idx] = true;
                recs.push(check_a1_instance(n, &cartan, idn, &[ii, ji],
                    (a, b), vec![RhsTerm { support: supp, coef, zpow: 0 }], mutation));
            }
        }
    }

    // A1-23, A1-24: [X_N^+, S_j]
    for j in 1..nu8 {
        let ji = j as i64;
        let supp = ExponentVec::int(-ji - 1, 0, 0);
        ran[23] = true;
        recs.push(check_a1_instance(n, &cartan, "A1-23", &[ji],
            (AtomId::XPlus { i: nu8, j, s: 0 }, AtomId::Screen { i: j, j: nu8, s: 2 }),
            vec![RhsTerm { support: supp, coef: Coeff::one().sub(&two), zpow: 0 }],
            mutation));
        ran[24] = true;
        recs.push(check_a1_instance(n, &cartan, "A1-24", &[ji],
            (AtomId::XPlus { i: nu8, j: j + 1, s: 0 }, AtomId::Screen { i: j, j: nu8 + 1, s: 0 }),
            vec![RhsTerm { support: supp, coef: supp.q_power().neg(), zpow: -1 }],
            mutation));
    }

    for idx in 1..=28 {
        if !ran[idx] {
            recs.push(Record::new("appendix-a1", &format!("A1-{}", idx), &[],
                Status::Skipped, String::from("empty index range at this rank")));
        }
    }
    recs
}

/// One side of a specialization identity: `:a(z) b(q^{shift} z):`.
struct SpecSide {
    a: AtomId,
    b: AtomId,
    shift: ExponentVec,
}

fn paper_symbol(n: usize, side: &SpecSide, mutation: Option<&Mutation>)
    -> Result<ExpOperator, ()>
{
    let a = build_atom_mutated(n, side.a, mutation).map_err(|_| ())?;
    let b = build_atom_mutated(n, side.b, mutation).map_err(|_| ())?;
    let sigma = merge_sign(&a, &b);
    // specialize takes the support exponent e with z2 = q^{-e} z1
    Ok(specialize(&a, &b, side.shift.neg()).scale(&Coeff::from_int(sigma)))
}

fn check_a2_instance(
    n: usize,
    id: &str,
    indices: &[i64],
    lhs: SpecSide,
    rhs: SpecSide,
    target: Option<ExpOperator>,
    mutation: Option<&Mutation>,
) -> Record {
    let l = match paper_symbol(n, &lhs, mutation) {
        Ok(x) => x,
        Err(_) => {
            return Record::new("appendix-a2", id, indices, Status::Skipped,
                String::from("atom out of catalog at this rank"));
        }
    };
    let r = match paper_symbol(n, &rhs, mutation) {
        Ok(x) => x,
        Err(_) => {
            return Record::new("appendix-a2", id, indices, Status::Skipped,
                String::from("atom out of catalog at this rank"));
        }
    };
    if !l.eq_op(&r) {
        return Record::new("appendix-a2", id, indices, Status::Fail,
            format!("sides differ:\n{}\nvs\n{}", l, r));
    }
    if let Some(t) = target {
        if !l.eq_op(&t) {
            return Record::new("appendix-a2", id, indices, Status::Fail,
                format!("merged side differs from displayed exponential:\n{}\nvs\n{}", l, t));
        }
    }
    Record::new("appendix-a2", id, indices, Status::Pass, String::new())
}

/// Run the specialization suite at rank `n`.
pub fn run_a2_suite(n: usize, mutation: Option<&Mutation>) -> Vec<Record> {
    let nn = n as i64;
    let nu8 = n as u8;
    let r = ExponentVec::level_shift(nn);
    let mut recs: Vec<Record> = Vec::new();
    let mut ran: [bool; 17] = [false; 17];

    // the common displayed target: :exp(-(1/(k+N-1) a^i)(z|-(k+N-1)/2)):
    let smeared_target = |i: u8| {
        let mut b = crate::freefield::OpBuilder::new(n);
        b.smeared_a(i, ExponentVec::ZERO, ExponentVec::half(1 - nn, -1, 0), -1);
        b.build()
    };

    for i in 1..nu8 {
        let ii = i as i64;
        ran[1] = true;
        recs.push(check_a2_instance(n, "A2-1", &[ii],
            SpecSide { a: AtomId::XMinus { i, j: nu8, s: 0 },
                       b: AtomId::Screen { i, j: nu8 + 1, s: 0 }, shift: r },
            SpecSide { a: AtomId::XMinus { i, j: i, s: 1 },
                       b: AtomId::Screen { i, j: i + 1, s: 1 }, shift: r.neg() },
            Some(smeared_target(i)),
            mutation));
        ran[3] = true;
        let up = ExponentVec::int(nn + 1, 1, 0);
        if ii <= nn - 2 {
            recs.push(check_a2_instance(n, "A2-3", &[ii],
                SpecSide { a: AtomId::XMinus { i, j: nu8, s: 0 },
                           b: AtomId::Screen { i, j: nu8 + 1, s: 0 }, shift: up },
                SpecSide { a: AtomId::XMinus { i, j: nu8 - 1, s: 1 },
                           b: AtomId::Screen { i, j: nu8, s: 2 }, shift: up },
                None,
                mutation));
        } else {
            // at i = N-1 the second delta of the top pair is matched by
            // :X^{-(i,2)} S^{(i+1,2)}: instead (the boundary of the
            // displayed range degenerates, cf. A1-3)
            recs.push(check_a2_instance(n, "A2-3", &[ii],
                SpecSide { a: AtomId::XMinus { i, j: nu8, s: 0 },
                           b: AtomId::Screen { i, j: nu8 + 1, s: 0 }, shift: up },
                SpecSide { a: AtomId::XMinus { i, j: i, s: 2 },
                           b: AtomId::Screen { i, j: i + 1, s: 2 }, shift: up },
                None,
                mutation));
            let last = recs.len() - 1;
            if recs[last].status == Status::Pass {
                recs[last].status = Status::Flagged;
                recs[last].detail = String::from(
                    "boundary i = N-1: displayed partner degenerates; verified \
                     against :X^{-(i,2)} S^{(i+1,2)}: as the proof requires");
            }
        }
        ran[4] = true;
        let s4 = ExponentVec::int(-nn + 3 + 2 * ii, 1, 0);
        recs.push(check_a2_instance(n, "A2-4", &[ii],
            SpecSide { a: AtomId::XMinus { i, j: i + 1, s: 2 },
                       b: AtomId::Screen { i, j: i + 2, s: 1 }, shift: s4 },
            SpecSide { a: AtomId::XMinus { i, j: i, s: 2 },
                       b: AtomId::Screen { i, j: i + 1, s: 2 }, shift: s4 },
            None,
            mutation));
        // Displayed A2-5 inherits the A1-5 index shift: the specialization
        // at q^{-N+3+k+2l} pairs (l,1)(l+1,2) against (l+1,2)(l+2,1).
        for l in i + 1..=(nu8.saturating_sub(2)) {
            let li = l as i64;
            ran[5] = true;
            let s5 = ExponentVec::int(-nn + 3 + 2 * li, 1, 0);
            let mut rec = check_a2_instance(n, "A2-5", &[ii, li],
                SpecSide { a: AtomId::XMinus { i, j: l, s: 1 },
                           b: AtomId::Screen { i, j: l + 1, s: 2 }, shift: s5 },
                SpecSide { a: AtomId::XMinus { i, j: l + 1, s: 2 },
                           b: AtomId::Screen { i, j: l + 2, s: 1 }, shift: s5 },
                None,
                mutation);
            if rec.status == Status::Pass {
                rec.status = Status::Flagged;
                rec.detail = String::from(
                    "pair labels corrected by one unit relative to the display");
            }
            recs.push(rec);
        }
    }
    ran[2] = true;
    recs.push(check_a2_instance(n, "A2-2", &[],
        SpecSide { a: AtomId::XMinus { i: nu8, j: nu8, s: 1 },
                   b: AtomId::Screen { i: nu8, j: nu8 + 1, s: 0 }, shift: r.neg() },
        SpecSide { a: AtomId::XMinus { i: nu8, j: nu8, s: 2 },
                   b: AtomId::Screen { i: nu8, j: nu8 + 1, s: 0 }, shift: r },
        Some({
            let mut b = crate::freefield::OpBuilder::new(n);
            b.smeared_a(nu8, ExponentVec::ZERO, ExponentVec::half(1 - nn, -1, 0), -1);
            b.build()
        }),
        mutation));

    // A2-6: mixed neighbours
    for i in 1..=(nu8.saturating_sub(2)) {
        for l in i + 1..nu8 {
            let (ii, li) = (i as i64, l as i64);
            ran[6] = true;
            let s6 = ExponentVec::int(-nn + 2 * li + 2, 1, 0);
            recs.push(check_a2_instance(n, "A2-6", &[ii, li],
                SpecSide { a: AtomId::XMinus { i, j: l, s: 1 },
                           b: AtomId::Screen { i: i + 1, j: l + 1, s: 2 }, shift: s6 },
                SpecSide { a: AtomId::XMinus { i, j: l, s: 2 },
                           b: AtomId::Screen { i: i + 1, j: l + 1, s: 1 }, shift: s6 },
                None,
                mutation));
        }
    }

    // A2-7 .. A2-9: j < i
    for i in 2..=nu8 {
        for j in 1..i {
            let (ii, ji) = (i as i64, j as i64);
            let s = ExponentVec::int(-nn + ii - ji + 1, -1, 0);
            if i < nu8 {
                ran[7] = true;
                recs.push(check_a2_instance(n, "A2-7", &[ii, ji],
                    SpecSide { a: AtomId::XMinus { i, j, s: 1 },
                               b: AtomId::Screen { i: j, j: i + 1, s: 1 }, shift: s },
                    SpecSide { a: AtomId::XMinus { i, j: j + 1, s: 1 },
                               b: AtomId::Screen { i: j, j: i, s: 1 }, shift: s },
                    None,
                    mutation));
                ran[8] = true;
                recs.push(check_a2_instance(n, "A2-8", &[ii, ji],
                    SpecSide { a: AtomId::XMinus { i, j, s: 2 },
                               b: AtomId::Screen { i: j, j: i + 1, s: 1 }, shift: s },
                    SpecSide { a: AtomId::XMinus { i, j: j + 1, s: 1 },
                               b: AtomId::Screen { i: j, j: i, s: 2 }, shift: s },
                    None,
                    mutation));
            }
            ran[9] = true;
            recs.push(check_a2_instance(n, "A2-9", &[ii, ji],
                SpecSide { a: AtomId::XMinus { i, j, s: 2 },
                           b: AtomId::Screen { i: j, j: i, s: 1 }, shift: s },
                SpecSide { a: AtomId::XMinus { i, j, s: 1 },
                           b: AtomId::Screen { i: j, j: i, s: 2 }, shift: s },
                None,
                mutation));
        }
    }

    // A2-10, A2-11: X_N^- against S_j
    for j in 1..nu8 {
        let ji = j as i64;
        let s = ExponentVec::int(-ji + 1, -1, 0);
        ran[10] = true;
        recs.push(check_a2_instance(n, "A2-10", &[ji],
            SpecSide { a: AtomId::XMinus { i: nu8, j, s: 1 },
                       b: AtomId::Screen { i: j, j: nu8 + 1, s: 0 }, shift: s },
            SpecSide { a: AtomId::XMinus { i: nu8, j: j + 1, s: 1 },
                       b: AtomId::Screen { i: j, j: nu8, s: 1 }, shift: s },
            None,
            mutation));
        ran[11] = true;
        recs.push(check_a2_instance(n, "A2-11", &[ji],
            SpecSide { a: AtomId::XMinus { i: nu8, j, s: 2 },
                       b: AtomId::Screen { i: j, j: nu8 + 1, s: 0 }, shift: s },
            SpecSide { a: AtomId::XMinus { i: nu8, j: j + 1, s: 1 },
                       b: AtomId::Screen { i: j, j: nu8, s: 2 }, shift: s },
            None,
            mutation));
    }

    // A2-12: diagonal X^+
    for i in 1..nu8 {
        let ii = i as i64;
        ran[12] = true;
        let s = ExponentVec::int(-nn + 2 * ii + 1, 0, 0);
        recs.push(check_a2_instance(n, "A2-12", &[ii],
            SpecSide { a: AtomId::XPlus { i, j: i, s: 1 },
                       b: AtomId::Screen { i, j: i + 1, s: 2 }, shift: s },
            SpecSide { a: AtomId::XPlus { i, j: i, s: 2 },
                       b: AtomId::Screen { i, j: i + 1, s: 1 }, shift: s },
            None,
            mutation));
    }

    // A2-13, A2-15, A2-16: X_i^+ against S_j, j < i <= N-1
    for i in 2..nu8 {
        for j in 1..i {
            let (ii, ji) = (i as i64, j as i64);
            let s = ExponentVec::int(-nn + ii + ji + 1, 0, 0);
            ran[13] = true;
            recs.push(check_a2_instance(n, "A2-13", &[ii, ji],
                SpecSide { a: AtomId::XPlus { i, j, s: 1 },
                           b: AtomId::Screen { i: j, j: i, s: 2 }, shift: s },
                SpecSide { a: AtomId::XPlus { i, j: j + 1, s: 2 },
                           b: AtomId::Screen { i: j, j: i + 1, s: 1 }, shift: s },
                None,
                mutation));
            ran[15] = true;
            recs.push(check_a2_instance(n, "A2-15", &[ii, ji],
                SpecSide { a: AtomId::XPlus { i, j, s: 1 },
                           b: AtomId::Screen { i: j, j: i + 1, s: 2 }, shift: s },
                SpecSide { a: AtomId::XPlus { i, j, s: 2 },
                           b: AtomId::Screen { i: j, j: i + 1, s: 1 }, shift: s },
                None,
                mutation));
            ran[16] = true;
            recs.push(check_a2_instance(n, "A2-16", &[ii, ji],
                SpecSide { a: AtomId::XPlus { i, j, s: 2 },
                           b: AtomId::Screen { i: j, j: i, s: 2 }, shift: s },
                SpecSide { a: AtomId::XPlus { i, j: j + 1, s: 2 },
                           b: AtomId::Screen { i: j, j: i + 1, s: 2 }, shift: s },
                None,
                mutation));
        }
    }

    // A2-14: top current against S_j
    for j in 1..nu8 {
        let ji = j as i64;
        ran[14] = true;
        let s = ExponentVec::int(ji + 1, 0, 0);
        recs.push(check_a2_instance(n, "A2-14", &[ji],
            SpecSide { a: AtomId::XPlus { i: nu8, j, s: 0 },
                       b: AtomId::Screen { i: j, j: nu8, s: 2 }, shift: s },
            SpecSide { a: AtomId::XPlus { i: nu8, j: j + 1, s: 0 },
                       b: AtomId::Screen { i: j, j: nu8 + 1, s: 0 }, shift: s },
            None,
            mutation));
    }

    for idx in 1..=16 {
        if !ran[idx] {
            recs.push(Record::new("appendix-a2", &format!("A2-{}", idx), &[],
                Status::Skipped, String::from("empty index range at this rank")));
        }
    }
    recs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{all_green, summarize};

    #[test]
    fn a1_suite_small_ranks() {
        for n in [2usize, 3] {
            let recs = run_a1_suite(n, None);
            let (pass, _fail, skip, _) = summarize(&recs);
            assert!(all_green(&recs), "n={} failures:\n{}", n, dump_failures(&recs));
            assert!(pass > 0);
            if n == 2 {
                assert!(skip > 0); // several ranges are empty at rank 2
            }
        }
    }

    #[test]
    fn a2_suite_small_ranks() {
        for n in [2usize, 3] {
            let recs = run_a2_suite(n, None);
            assert!(all_green(&recs), "n={} failures:\n{}", n, dump_failures(&recs));
        }
    }

    fn dump_failures(recs: &[Record]) -> String {
        let mut s = String::new();
        for r in recs {
            if r.status == Status::Fail {
                s.push_str(&format!("{} {:?}: {}\n", r.id, r.indices, r.detail));
            }
        }
        s
    }
}
