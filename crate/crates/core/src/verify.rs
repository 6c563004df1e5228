//! The executable property suite: every structural claim about the
//! operators, bases, and factorizations of an M-dimensional space as a
//! deterministic, machine-checkable list of results.
//!
//! Checks are identified by stable string ids (see [`all_check_ids`]) and
//! always run in id order, so two runs over the same M produce identical
//! results. Exact checks run at any supported M; work that scales like a
//! dense table is budgeted by [`SuiteConfig::max_dense`] and either sampled
//! deterministically or skipped with a reason.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::basis::{
    complete_overlap_exponent, kq_ladder_orbit, kq_overlap_exponent, localization_report,
    split_overlap_exponent, CrtLabelMap, LabeledBasis,
};
use crate::numtheory::{gcd, mul_mod, BiFactorization, Factorization};
use crate::operator::MonomialOperator;
use crate::Result;

/// Outcome of a single check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    /// Failed; the witness pins down a concrete counterexample.
    Fail { witness: String },
    /// Not run, with the reason (always a budget decision).
    Skipped { reason: String },
}

impl CheckStatus {
    pub fn is_pass(&self) -> bool {
        matches!(self, CheckStatus::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, CheckStatus::Fail { .. })
    }
}

/// Result of one check of the suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    /// Stable identifier, part of the CLI contract.
    pub id: &'static str,
    /// The dimension the suite ran at.
    pub dimension: u64,
    /// Structured notes: split lists, label counts, sampling, caveats.
    pub parameters: BTreeMap<String, String>,
    pub status: CheckStatus,
}

/// Budgets for the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Cap on M for dense-vector oracle work (O(M^2) float arithmetic).
    pub max_dense: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { max_dense: 4096 }
    }
}

impl SuiteConfig {
    /// Cap on M for full M x M tables (Gram matrices, all-pairs overlaps).
    fn full_table_budget(&self) -> u64 {
        self.max_dense.min(256)
    }
}

/// Number of label pairs examined when a table is too large to enumerate.
const SAMPLE_PAIRS: u64 = 1000;

/// Cap on M for brute-force residue scans.
const BRUTE_SCAN_BUDGET: u64 = 1 << 20;

struct Ctx {
    m: u64,
    factors: Factorization,
    splits: Vec<BiFactorization>,
    cfg: SuiteConfig,
}

type CheckFn = fn(&Ctx) -> CheckResult;

/// The suite in execution (= id) order.
const CHECKS: &[(&str, CheckFn)] = &[
    ("bifactorization-count", check_bifactorization_count),
    ("commutator-basic", check_commutator_basic),
    ("commutator-constituents", check_commutator_constituents),
    ("commutator-splits", check_commutator_splits),
    ("complete-eigenrelations", check_complete_eigenrelations),
    ("conjugacy-pairs", check_conjugacy_pairs),
    ("crt-bijection", check_crt_bijection),
    ("dense-overlap-oracle", check_dense_overlap_oracle),
    ("gram-orthonormality", check_gram_orthonormality),
    ("kq-eigenrelations", check_kq_eigenrelations),
    ("kq-generation", check_kq_generation),
    ("kq-shift-relations", check_kq_shift_relations),
    ("localization", check_localization),
    ("overlap-complete", check_overlap_complete),
    ("overlap-consistency", check_overlap_consistency),
    ("overlap-kq-conjugate", check_overlap_kq_conjugate),
    ("overlap-split", check_overlap_split),
    ("period-minimality", check_period_minimality),
    ("relative-primality", check_relative_primality),
    ("root-bifactorization", check_root_bifactorization),
    ("root-products", check_root_products),
    ("root-set", check_root_set),
];

/// All check ids, in the order the suite reports them.
pub fn all_check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|&(id, _)| id).collect()
}

/// Runs the selected checks (all of them when `selection` is empty) at
/// dimension M and returns the results in id order. Ids not in the suite
/// are ignored; use [`all_check_ids`] to validate a selection up front.
pub fn run_suite(m: u64, selection: &[&str], cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let factors = Factorization::new(m)?;
    let ctx = Ctx { m, splits: factors.bifactorizations(), factors, cfg: *cfg };
    Ok(CHECKS
        .iter()
        .filter(|(id, _)| selection.is_empty() || selection.contains(id))
        .map(|&(_, run)| run(&ctx))
        .collect())
}

fn pass(id: &'static str, m: u64, parameters: BTreeMap<String, String>) -> CheckResult {
    CheckResult { id, dimension: m, parameters, status: CheckStatus::Pass }
}

fn fail(
    id: &'static str,
    m: u64,
    parameters: BTreeMap<String, String>,
    witness: String,
) -> CheckResult {
    CheckResult { id, dimension: m, parameters, status: CheckStatus::Fail { witness } }
}

fn skip(id: &'static str, m: u64, reason: String) -> CheckResult {
    CheckResult {
        id,
        dimension: m,
        parameters: BTreeMap::new(),
        status: CheckStatus::Skipped { reason },
    }
}

fn note(params: &mut BTreeMap<String, String>, key: &str, value: impl core::fmt::Display) {
    params.insert(key.to_string(), format!("{value}"));
}

/// Deterministic sample of index pairs from a `rows x cols` table: the full
/// table when it fits the cap, otherwise an evenly strided subset.
fn sample_pairs(rows: u64, cols: u64, cap: u64) -> Vec<(u64, u64)> {
    let total = rows as u128 * cols as u128;
    if total <= cap as u128 {
        return (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).collect();
    }
    let stride = total / cap as u128;
    (0..cap)
        .map(|i| {
            let flat = i as u128 * stride;
            ((flat / cols as u128) as u64, (flat % cols as u128) as u64)
        })
        .collect()
}

fn split_label(split: &BiFactorization) -> String {
    format!("({},{})", split.m1(), split.m2())
}

// --- individual checks ----------------------------------------------------

fn check_bifactorization_count(ctx: &Ctx) -> CheckResult {
    const ID: &str = "bifactorization-count";
    let mut params = BTreeMap::new();
    let expected = ctx.factors.bifactorization_count();
    note(&mut params, "expected", expected);
    note(&mut params, "enumerated", ctx.splits.len());
    if ctx.splits.len() as u64 != expected {
        return fail(
            ID,
            ctx.m,
            params,
            format!("enumerated {} splits, counting law gives {}", ctx.splits.len(), expected),
        );
    }
    pass(ID, ctx.m, params)
}

fn check_commutator_basic(ctx: &Ctx) -> CheckResult {
    const ID: &str = "commutator-basic";
    let m = ctx.m;
    let clock = MonomialOperator::clock(m, m).expect("M divides M");
    let shift = MonomialOperator::shift(m, 1);
    let mut params = BTreeMap::new();
    note(&mut params, "expected_exponent", (m - 1) % m);
    match clock.commutation_exponent(&shift) {
        Ok(c) if c.exponent() == (m - 1) % m => pass(ID, m, params),
        Ok(c) => fail(ID, m, params, format!("clock-shift commutator exponent {}", c.exponent())),
        Err(e) => fail(ID, m, params, format!("commutator not scalar: {e}")),
    }
}

fn check_commutator_constituents(ctx: &Ctx) -> CheckResult {
    const ID: &str = "commutator-constituents";
    let m = ctx.m;
    let mut params = BTreeMap::new();
    note(&mut params, "constituents", ctx.factors.len());
    let clocks: Vec<MonomialOperator> = ctx
        .factors
        .constituents()
        .iter()
        .map(|c| MonomialOperator::clock(m, c.modulus).expect("constituent divides M"))
        .collect();
    let shifts: Vec<MonomialOperator> = (0..ctx.factors.len())
        .map(|j| MonomialOperator::shift(m, ctx.factors.idempotent(j) as i64))
        .collect();
    for (j, c) in ctx.factors.constituents().iter().enumerate() {
        if clocks[j].period() != c.modulus {
            return fail(
                ID,
                m,
                params,
                format!("clock period {} for constituent {}", clocks[j].period(), c.modulus),
            );
        }
        if shifts[j].period() != c.modulus {
            return fail(
                ID,
                m,
                params,
                format!("shift period {} for constituent {}", shifts[j].period(), c.modulus),
            );
        }
        // V_j U_j = U_j V_j omega_{m_j}, i.e. exponent L_j in the global ring.
        match shifts[j].commutation_exponent(&clocks[j]) {
            Ok(e) if e.exponent() == c.cofactor % m => {}
            Ok(e) => {
                return fail(
                    ID,
                    m,
                    params,
                    format!(
                        "same-index commutator exponent {} for constituent {}, want {}",
                        e.exponent(),
                        c.modulus,
                        c.cofactor % m
                    ),
                );
            }
            Err(e) => return fail(ID, m, params, format!("commutator not scalar: {e}")),
        }
    }
    for i in 0..ctx.factors.len() {
        for j in 0..ctx.factors.len() {
            if i == j {
                continue;
            }
            for (a, b, what) in [
                (&clocks[i], &clocks[j], "clock-clock"),
                (&shifts[i], &shifts[j], "shift-shift"),
                (&shifts[i], &clocks[j], "shift-clock"),
            ] {
                match a.commutation_exponent(b) {
                    Ok(e) if e.is_zero() => {}
                    other => {
                        return fail(
                            ID,
                            m,
                            params,
                            format!("cross {what} pair ({i},{j}) does not commute: {other:?}"),
                        );
                    }
                }
            }
        }
    }
    pass(ID, m, params)
}

fn check_commutator_splits(ctx: &Ctx) -> CheckResult {
    const ID: &str = "commutator-splits";
    let m = ctx.m;
    let mut params = BTreeMap::new();
    note(&mut params, "splits", ctx.splits.len());
    for split in &ctx.splits {
        let clock1 = MonomialOperator::clock(m, split.m1()).expect("factor divides M");
        let clock2 = MonomialOperator::clock(m, split.m2()).expect("factor divides M");
        let shift1 = MonomialOperator::shift(m, split.idempotent1() as i64);
        let shift2 = MonomialOperator::shift(m, split.idempotent2() as i64);
        let cases: [(&MonomialOperator, &MonomialOperator, u64, &str); 6] = [
            (&shift1, &clock1, split.cofactor1() % m, "same-index first"),
            (&shift2, &clock2, split.cofactor2() % m, "same-index second"),
            (&clock2, &shift1, 0, "kq pair"),
            (&clock1, &shift2, 0, "conjugate pair"),
            (&clock1, &clock2, 0, "clock-clock"),
            (&shift1, &shift2, 0, "shift-shift"),
        ];
        for (a, b, want, what) in cases {
            match a.commutation_exponent(b) {
                Ok(e) if e.exponent() == want => {}
                other => {
                    return fail(
                        ID,
                        m,
                        params,
                        format!(
                            "split {} {what}: expected exponent {want}, got {other:?}",
                            split_label(split)
                        ),
                    );
                }
            }
        }
    }
    pass(ID, m, params)
}

fn check_complete_eigenrelations(ctx: &Ctx) -> CheckResult {
    const ID: &str = "complete-eigenrelations";
    let m = ctx.m;
    if m > ctx.cfg.max_dense {
        return skip(ID, m, format!("state tables need M <= {}", ctx.cfg.max_dense));
    }
    let mut params = BTreeMap::new();
    let positions = LabeledBasis::complete_position(&ctx.factors);
    let momenta = LabeledBasis::complete_momentum(&ctx.factors);
    let mut checked = 0u64;
    for label in positions.labels() {
        let state = positions.state(&label).expect("valid label");
        for (j, c) in ctx.factors.constituents().iter().enumerate() {
            let clock = MonomialOperator::clock(m, c.modulus).expect("constituent divides M");
            let want = mul_mod(label[j], c.cofactor, m);
            match clock.eigenphase(&state) {
                Some(e) if e.exponent() == want => checked += 1,
                other => {
                    return fail(
                        ID,
                        m,
                        params,
                        format!("position label {label:?} constituent {j}: {other:?}, want {want}"),
                    );
                }
            }
        }
    }
    for label in momenta.labels() {
        let state = momenta.state(&label).expect("valid label");
        for (j, c) in ctx.factors.constituents().iter().enumerate() {
            let shift = MonomialOperator::shift(m, ctx.factors.idempotent(j) as i64);
            let want = mul_mod(label[j], c.cofactor, m);
            match shift.eigenphase(&state) {
                Some(e) if e.exponent() == want => checked += 1,
                other => {
                    return fail(
                        ID,
                        m,
                        params,
                        format!("momentum label {label:?} constituent {j}: {other:?}, want {want}"),
                    );
                }
            }
        }
    }
    note(&mut params, "eigen_equations", checked);
    pass(ID, m, params)
}

fn check_conjugacy_pairs(ctx: &Ctx) -> CheckResult {
    const ID: &str = "conjugacy-pairs";
    let m = ctx.m;
    let mut params = BTreeMap::new();
    let full = m <= ctx.cfg.full_table_budget();
    note(&mut params, "mode", if full { "all-pairs" } else { "sampled" });
    let cap = if full { m * m } else { SAMPLE_PAIRS };
    let mut checked = 0u64;

    let mut run_pair = |bra: &LabeledBasis, ket: &LabeledBasis, what: &str| -> Option<String> {
        let bra_labels: Vec<Vec<u64>> = bra.labels().collect();
        let ket_labels: Vec<Vec<u64>> = ket.labels().collect();
        for (r, c) in sample_pairs(bra_labels.len() as u64, ket_labels.len() as u64, cap) {
            let a = bra.state(&bra_labels[r as usize]).expect("valid label");
            let b = ket.state(&ket_labels[c as usize]).expect("valid label");
            let ov = a.overlap(&b).expect("equal dimensions");
            match ov.magnitude_squared_ratio() {
                Some((num, den)) if num * m as u128 == den => checked += 1,
                other => {
                    return Some(format!(
                        "{what}: |<{:?}|{:?}>|^2 = {other:?}, want 1/{m}",
                        bra_labels[r as usize], ket_labels[c as usize]
                    ));
                }
            }
        }
        None
    };

    for split in &ctx.splits {
        let kq = LabeledBasis::kq(split);
        let conj = LabeledBasis::kq_conjugate(split);
        if let Some(w) = run_pair(&kq, &conj, &format!("kq/KQ split {}", split_label(split))) {
            return fail(ID, m, params, w);
        }
        let pos = LabeledBasis::split_position(split);
        let mom = LabeledBasis::split_momentum(split);
        if let Some(w) = run_pair(&pos, &mom, &format!("q1q2/k1k2 split {}", split_label(split)))
        {
            return fail(ID, m, params, w);
        }
    }
    let pos = LabeledBasis::complete_position(&ctx.factors);
    let mom = LabeledBasis::complete_momentum(&ctx.factors);
    if let Some(w) = run_pair(&pos, &mom, "complete") {
        return fail(ID, m, params, w);
    }
    note(&mut params, "overlaps_checked", checked);
    pass(ID, m, params)
}

fn check_crt_bijection(ctx: &Ctx) -> CheckResult {
    const ID: &str = "crt-bijection";
    let m = ctx.m;
    let mut params = BTreeMap::new();
    if m > BRUTE_SCAN_BUDGET {
        return skip(ID, m, format!("full residue scan needs M <= {BRUTE_SCAN_BUDGET}"));
    }
    let map = CrtLabelMap::from_factorization(&ctx.factors);
    for x in 0..m {
        let tuple = map.forward(x);
        let back = map.backward(&tuple);
        if back != x {
            return fail(ID, m, params, format!("x = {x} -> {tuple:?} -> {back}"));
        }
    }
    if !ctx.factors.is_empty() {
        let ones: Vec<u64> = ctx.factors.constituents().iter().map(|_| 1).collect();
        let x = map.backward(&ones);
        if x != 1 {
            return fail(ID, m, params, format!("all-ones tuple maps to {x}, want 1"));
        }
    }
    note(&mut params, "residues", m);
    pass(ID, m, params)
}

fn check_dense_overlap_oracle(ctx: &Ctx) -> CheckResult {
    const ID: &str = "dense-overlap-oracle";
    let m = ctx.m;
    if m > ctx.cfg.max_dense {
        return skip(ID, m, format!("dense vectors need M <= {}", ctx.cfg.max_dense));
    }
    let mut params = BTreeMap::new();
    let mut checked = 0u64;
    let mut worst: f64 = 0.0;
    let mut run_pair = |bra: &LabeledBasis, ket: &LabeledBasis, what: &str| -> Option<String> {
        let bra_labels: Vec<Vec<u64>> = bra.labels().collect();
        let ket_labels: Vec<Vec<u64>> = ket.labels().collect();
        for (r, c) in sample_pairs(bra_labels.len() as u64, ket_labels.len() as u64, SAMPLE_PAIRS)
        {
            let a = bra.state(&bra_labels[r as usize]).expect("valid label");
            let b = ket.state(&ket_labels[c as usize]).expect("valid label");
            let exact = a.overlap(&b).expect("equal dimensions").to_complex();
            let (da, db) = (a.to_dense(), b.to_dense());
            let dense: num_complex::Complex64 =
                da.iter().zip(&db).map(|(x, y)| x.conj() * y).sum();
            let err = (exact - dense).norm();
            if err > worst {
                worst = err;
            }
            if err > 1e-12 {
                return Some(format!(
                    "{what}: exact {exact} vs dense {dense} (err {err:e}) at ({r},{c})"
                ));
            }
            checked += 1;
        }
        None
    };
    for split in &ctx.splits {
        let kq = LabeledBasis::kq(split);
        let conj = LabeledBasis::kq_conjugate(split);
        if let Some(w) = run_pair(&kq, &conj, &format!("kq/KQ split {}", split_label(split))) {
            return fail(ID, m, params, w);
        }
    }
    let pos = LabeledBasis::complete_position(&ctx.factors);
    let mom = LabeledBasis::complete_momentum(&ctx.factors);
    if let Some(w) = run_pair(&pos, &mom, "complete") {
        return fail(ID, m, params, w);
    }
    note(&mut params, "overlaps_checked", checked);
    note(&mut params, "max_error", format!("{worst:.3e}"));
    pass(ID, m, params)
}

fn check_gram_orthonormality(ctx: &Ctx) -> CheckResult {
    const ID: &str = "gram-orthonormality";
    let m = ctx.m;
    if m > ctx.cfg.full_table_budget() {
        return skip(
            ID,
            m,
            format!("full Gram matrices need M <= {}", ctx.cfg.full_table_budget()),
        );
    }
    let mut params = BTreeMap::new();
    let mut bases: Vec<(String, LabeledBasis)> = Vec::new();
    for split in &ctx.splits {
        let tag = split_label(split);
        bases.push((format!("kq {tag}"), LabeledBasis::kq(split)));
        bases.push((format!("KQ {tag}"), LabeledBasis::kq_conjugate(split)));
        bases.push((format!("q1q2 {tag}"), LabeledBasis::split_position(split)));
        bases.push((format!("k1k2 {tag}"), LabeledBasis::split_momentum(split)));
    }
    bases.push(("complete-position".to_string(), LabeledBasis::complete_position(&ctx.factors)));
    bases.push(("complete-momentum".to_string(), LabeledBasis::complete_momentum(&ctx.factors)));
    for (what, basis) in &bases {
        let labels: Vec<Vec<u64>> = basis.labels().collect();
        if labels.len() as u64 != m {
            return fail(ID, m, params, format!("{what}: {} labels, want {m}", labels.len()));
        }
        for (i, a) in labels.iter().enumerate() {
            let sa = basis.state(a).expect("valid label");
            for (j, b) in labels.iter().enumerate() {
                let sb = basis.state(b).expect("valid label");
                let ov = sa.overlap(&sb).expect("equal dimensions");
                let want_unit = i == j;
                match ov.magnitude_squared_ratio() {
                    Some((num, den)) if want_unit && num == den => {}
                    Some((0, _)) if !want_unit => {}
                    other => {
                        return fail(ID, m, params, format!("{what}: <{a:?}|{b:?}> = {other:?}"));
                    }
                }
            }
        }
    }
    note(&mut params, "bases", bases.len());
    pass(ID, m, params)
}

fn check_kq_eigenrelations(ctx: &Ctx) -> CheckResult {
    const ID: &str = "kq-eigenrelations";
    let m = ctx.m;
    if m > ctx.cfg.max_dense {
        return skip(ID, m, format!("state tables need M <= {}", ctx.cfg.max_dense));
    }
    let mut params = BTreeMap::new();
    let mut checked = 0u64;
    for split in &ctx.splits {
        let clock1 = MonomialOperator::clock(m, split.m1()).expect("factor divides M");
        let clock2 = MonomialOperator::clock(m, split.m2()).expect("factor divides M");
        let shift1 = MonomialOperator::shift(m, split.idempotent1() as i64);
        let shift2 = MonomialOperator::shift(m, split.idempotent2() as i64);
        let kq = LabeledBasis::kq(split);
        for label in kq.labels() {
            let state = kq.state(&label).expect("valid label");
            let (k, q) = (label[0], label[1]);
            let want_q = mul_mod(q, split.cofactor2(), m);
            let want_k = mul_mod(k, split.cofactor1(), m);
            let got_q = clock2.eigenphase(&state).map(|e| e.exponent());
            let got_k = shift1.eigenphase(&state).map(|e| e.exponent());
            if got_q != Some(want_q) || got_k != Some(want_k) {
                return fail(
                    ID,
                    m,
                    params,
                    format!(
                        "split {} |k={k},q={q}>: clock {got_q:?} (want {want_q}), shift {got_k:?} (want {want_k})",
                        split_label(split)
                    ),
                );
            }
            checked += 1;
        }
        let conj = LabeledBasis::kq_conjugate(split);
        for label in conj.labels() {
            let state = conj.state(&label).expect("valid label");
            let (kk, qq) = (label[0], label[1]);
            let want_q = mul_mod(qq, split.cofactor1(), m);
            let want_k = mul_mod(kk, split.cofactor2(), m);
            let got_q = clock1.eigenphase(&state).map(|e| e.exponent());
            let got_k = shift2.eigenphase(&state).map(|e| e.exponent());
            if got_q != Some(want_q) || got_k != Some(want_k) {
                return fail(
                    ID,
                    m,
                    params,
                    format!(
                        "split {} |K={kk},Q={qq}>: clock {got_q:?} (want {want_q}), shift {got_k:?} (want {want_k})",
                        split_label(split)
                    ),
                );
            }
            checked += 1;
        }
    }
    note(&mut params, "states_checked", checked);
    pass(ID, m, params)
}

fn check_kq_generation(ctx: &Ctx) -> CheckResult {
    const ID: &str = "kq-generation";
    let m = ctx.m;
    if m > ctx.cfg.max_dense {
        return skip(ID, m, format!("state tables need M <= {}", ctx.cfg.max_dense));
    }
    let mut params = BTreeMap::new();
    for split in &ctx.splits {
        let basis = LabeledBasis::kq(split);
        let orbit = match kq_ladder_orbit(split) {
            Ok(orbit) => orbit,
            Err(e) => return fail(ID, m, params, format!("orbit failed: {e}")),
        };
        if orbit.len() as u64 != m {
            return fail(
                ID,
                m,
                params,
                format!(
                    "split {}: orbit has {} states, want {m}",
                    split_label(split),
                    orbit.len()
                ),
            );
        }
        for ((k, q), state) in &orbit {
            let direct = basis.state(&[*k, *q]).expect("valid label");
            if state != &direct {
                return fail(
                    ID,
                    m,
                    params,
                    format!(
                        "split {}: generated |k={k},q={q}> differs from direct construction",
                        split_label(split)
                    ),
                );
            }
        }
    }
    note(&mut params, "splits", ctx.splits.len());
    pass(ID, m, params)
}

fn check_kq_shift_relations(ctx: &Ctx) -> CheckResult {
    const ID: &str = "kq-shift-relations";
    let m = ctx.m;
    if m > ctx.cfg.max_dense {
        return skip(ID, m, format!("state tables need M <= {}", ctx.cfg.max_dense));
    }
    let mut params = BTreeMap::new();
    let mut checked = 0u64;
    for split in &ctx.splits {
        let raise_k = MonomialOperator::clock(m, split.m1()).expect("factor divides M");
        let lower_q = MonomialOperator::shift(m, split.idempotent2() as i64);
        let kq = LabeledBasis::kq(split);
        for label in kq.labels() {
            let (k, q) = (label[0], label[1]);
            let state = kq.state(&label).expect("valid label");
            let up = raise_k.apply(&state).expect("equal dimensions");
            let want_up = kq.state(&[(k + 1) % split.m1(), q]).expect("valid label");
            if up != want_up {
                return fail(
                    ID,
                    m,
                    params,
                    format!(
                        "split {}: clock ladder leaves residual phase at |k={k},q={q}>",
                        split_label(split)
                    ),
                );
            }
            let down = lower_q.apply(&state).expect("equal dimensions");
            let want_down =
                kq.state(&[k, (q + split.m2() - 1) % split.m2()]).expect("valid label");
            if down != want_down {
                return fail(
                    ID,
                    m,
                    params,
                    format!(
                        "split {}: shift ladder leaves residual phase at |k={k},q={q}>",
                        split_label(split)
                    ),
                );
            }
            checked += 1;
        }
        // Conjugate-side ladders: the other clock raises K, the other shift
        // lowers Q.
        let raise_kk = MonomialOperator::clock(m, split.m2()).expect("factor divides M");
        let lower_qq = MonomialOperator::shift(m, split.idempotent1() as i64);
        let conj = LabeledBasis::kq_conjugate(split);
        for label in conj.labels() {
            let (kk, qq) = (label[0], label[1]);
            let state = conj.state(&label).expect("valid label");
            let up = raise_kk.apply(&state).expect("equal dimensions");
            let want_up = conj.state(&[(kk + 1) % split.m2(), qq]).expect("valid label");
            let down = lower_qq.apply(&state).expect("equal dimensions");
            let want_down =
                conj.state(&[kk, (qq + split.m1() - 1) % split.m1()]).expect("valid label");
            if up != want_up || down != want_down {
                return fail(
                    ID,
                    m,
                    params,
                    format!(
                        "split {}: conjugate ladder leaves residual phase at |K={kk},Q={qq}>",
                        split_label(split)
                    ),
                );
            }
            checked += 1;
        }
    }
    note(&mut params, "states_checked", checked);
    pass(ID, m, params)
}

fn check_localization(ctx: &Ctx) -> CheckResult {
    const ID: &str = "localization";
    let m = ctx.m;
    if m > ctx.cfg.max_dense {
        return skip(ID, m, format!("state tables need M <= {}", ctx.cfg.max_dense));
    }
    let mut params = BTreeMap::new();
    for split in &ctx.splits {
        let report = localization_report(split);
        if !report.exact_delta {
            return fail(
                ID,
                m,
                params,
                format!("split {}: expansion is not an exact delta", split_label(split)),
            );
        }
    }
    note(&mut params, "splits", ctx.splits.len());
    pass(ID, m, params)
}

fn check_overlap_complete(ctx: &Ctx) -> CheckResult {
    const ID: &str = "overlap-complete";
    let m = ctx.m;
    if m > ctx.cfg.max_dense {
        return skip(ID, m, format!("state tables need M <= {}", ctx.cfg.max_dense));
    }
    let mut params = BTreeMap::new();
    let full = m <= ctx.cfg.full_table_budget();
    note(&mut params, "mode", if full { "all-pairs" } else { "sampled" });
    let cap = if full { m * m } else { SAMPLE_PAIRS };
    let pos = LabeledBasis::complete_position(&ctx.factors);
    let mom = LabeledBasis::complete_momentum(&ctx.factors);
    let qs: Vec<Vec<u64>> = pos.labels().collect();
    let ks: Vec<Vec<u64>> = mom.labels().collect();
    let mut checked = 0u64;
    for (r, c) in sample_pairs(qs.len() as u64, ks.len() as u64, cap) {
        let q = &qs[r as usize];
        let k = &ks[c as usize];
        // <q|k> carries the positive closed-form exponent; <k|q> its
        // conjugate.
        let ov = pos
            .state(q)
            .expect("valid label")
            .overlap(&mom.state(k).expect("valid label"))
            .expect("equal dimensions");
        let want = complete_overlap_exponent(&ctx.factors, q, k);
        match ov.single_phase() {
            Some(got) if got == want => checked += 1,
            other => {
                return fail(
                    ID,
                    m,
                    params,
                    format!("<{q:?}|{k:?}>: got {other:?}, want exponent {}", want.exponent()),
                );
            }
        }
    }
    note(&mut params, "pairs_checked", checked);
    pass(ID, m, params)
}

fn check_overlap_consistency(ctx: &Ctx) -> CheckResult {
    const ID: &str = "overlap-consistency";
    let m = ctx.m;
    if m > ctx.cfg.full_table_budget() {
        return skip(
            ID,
            m,
            format!("full overlap tables need M <= {}", ctx.cfg.full_table_budget()),
        );
    }
    let mut params = BTreeMap::new();
    let mut checked = 0u64;
    for split in &ctx.splits {
        let (m1, m2) = (split.m1(), split.m2());
        let kq = LabeledBasis::kq(split);
        let conj = LabeledBasis::kq_conjugate(split);
        let overlap = |k: u64, q: u64, kk: u64, qq: u64| {
            kq.state(&[k, q])
                .expect("valid label")
                .overlap(&conj.state(&[kk, qq]).expect("valid label"))
                .expect("equal dimensions")
                .single_phase()
                .expect("single CRT intersection")
                .exponent()
        };
        for k in 0..m1 {
            for q in 0..m2 {
                for kk in 0..m2 {
                    for qq in 0..m1 {
                        let base = overlap(k, q, kk, qq);
                        // Four ladder recurrences on the overlap table, all
                        // in the global exponent ring.
                        let cases = [
                            // clock(M2) on the ket raises K and multiplies
                            // the overlap by omega_{M2}^q.
                            (overlap(k, q, (kk + 1) % m2, qq), mul_mod(q, split.cofactor2(), m)),
                            // clock(M1) on the bra lowers k and multiplies
                            // by omega_{M1}^Q.
                            (
                                overlap((k + m1 - 1) % m1, q, kk, qq),
                                mul_mod(qq, split.cofactor1(), m),
                            ),
                            // shift(N1 L1) on the ket lowers Q and
                            // multiplies by omega_{M1}^k.
                            (
                                overlap(k, q, kk, (qq + m1 - 1) % m1),
                                mul_mod(k, split.cofactor1(), m),
                            ),
                            // shift(N2 L2) on the bra raises q and
                            // multiplies by omega_{M2}^K.
                            (
                                overlap(k, (q + 1) % m2, kk, qq),
                                mul_mod(kk, split.cofactor2(), m),
                            ),
                        ];
                        for (i, (got, step)) in cases.iter().enumerate() {
                            let want = (base + step) % m;
                            if *got != want {
                                return fail(
                                    ID,
                                    m,
                                    params,
                                    format!(
                                        "split {} relation {i} at (k={k},q={q},K={kk},Q={qq}): got {got}, want {want}",
                                        split_label(split)
                                    ),
                                );
                            }
                        }
                        checked += 4;
                    }
                }
            }
        }
    }
    note(&mut params, "relations_checked", checked);
    pass(ID, m, params)
}

fn check_overlap_kq_conjugate(ctx: &Ctx) -> CheckResult {
    const ID: &str = "overlap-kq-conjugate";
    let m = ctx.m;
    if m > ctx.cfg.max_dense {
        return skip(ID, m, format!("state tables need M <= {}", ctx.cfg.max_dense));
    }
    let mut params = BTreeMap::new();
    let full = m <= ctx.cfg.full_table_budget();
    note(&mut params, "mode", if full { "all-pairs" } else { "sampled" });
    let cap = if full { m * m } else { SAMPLE_PAIRS };
    let mut checked = 0u64;
    for split in &ctx.splits {
        let kq = LabeledBasis::kq(split);
        let conj = LabeledBasis::kq_conjugate(split);
        let bra_labels: Vec<Vec<u64>> = kq.labels().collect();
        let ket_labels: Vec<Vec<u64>> = conj.labels().collect();
        for (r, c) in sample_pairs(bra_labels.len() as u64, ket_labels.len() as u64, cap) {
            let bra = &bra_labels[r as usize];
            let ket = &ket_labels[c as usize];
            let ov = kq
                .state(bra)
                .expect("valid label")
                .overlap(&conj.state(ket).expect("valid label"))
                .expect("equal dimensions");
            let want = kq_overlap_exponent(split, bra[0], bra[1], ket[0], ket[1]);
            match ov.single_phase() {
                Some(got) if got == want => checked += 1,
                other => {
                    return fail(
                        ID,
                        m,
                        params,
                        format!(
                            "split {} <k={},q={}|K={},Q={}>: got {other:?}, want exponent {}",
                            split_label(split),
                            bra[0],
                            bra[1],
                            ket[0],
                            ket[1],
                            want.exponent()
                        ),
                    );
                }
            }
        }
    }
    note(&mut params, "pairs_checked", checked);
    pass(ID, m, params)
}

fn check_overlap_split(ctx: &Ctx) -> CheckResult {
    const ID: &str = "overlap-split";
    let m = ctx.m;
    if m > ctx.cfg.max_dense {
        return skip(ID, m, format!("state tables need M <= {}", ctx.cfg.max_dense));
    }
    let mut params = BTreeMap::new();
    let full = m <= ctx.cfg.full_table_budget();
    note(&mut params, "mode", if full { "all-pairs" } else { "sampled" });
    let cap = if full { m * m } else { SAMPLE_PAIRS };
    let mut checked = 0u64;
    for split in &ctx.splits {
        let pos = LabeledBasis::split_position(split);
        let mom = LabeledBasis::split_momentum(split);
        let bra_labels: Vec<Vec<u64>> = pos.labels().collect();
        let ket_labels: Vec<Vec<u64>> = mom.labels().collect();
        for (r, c) in sample_pairs(bra_labels.len() as u64, ket_labels.len() as u64, cap) {
            let bra = &bra_labels[r as usize];
            let ket = &ket_labels[c as usize];
            let ov = pos
                .state(bra)
                .expect("valid label")
                .overlap(&mom.state(ket).expect("valid label"))
                .expect("equal dimensions");
            let want = split_overlap_exponent(split, bra[0], bra[1], ket[0], ket[1]);
            match ov.single_phase() {
                Some(got) if got == want => checked += 1,
                other => {
                    return fail(
                        ID,
                        m,
                        params,
                        format!(
                            "split {} <q1={},q2={}|k1={},k2={}>: got {other:?}, want exponent {}",
                            split_label(split),
                            bra[0],
                            bra[1],
                            ket[0],
                            ket[1],
                            want.exponent()
                        ),
                    );
                }
            }
        }
    }
    note(&mut params, "pairs_checked", checked);
    pass(ID, m, params)
}

fn check_period_minimality(ctx: &Ctx) -> CheckResult {
    const ID: &str = "period-minimality";
    let m = ctx.m;
    let mut params = BTreeMap::new();
    let clock = MonomialOperator::clock(m, m).expect("M divides M");
    let shift = MonomialOperator::shift(m, 1);
    let (pu, pv) = (clock.period(), shift.period());
    note(&mut params, "clock_period", pu);
    note(&mut params, "shift_period", pv);
    if pu != m || pv != m {
        return fail(ID, m, params, format!("periods ({pu}, {pv}), want ({m}, {m})"));
    }
    pass(ID, m, params)
}

fn check_relative_primality(ctx: &Ctx) -> CheckResult {
    const ID: &str = "relative-primality";
    let m = ctx.m;
    if m > BRUTE_SCAN_BUDGET {
        return skip(ID, m, format!("brute-force scan needs M <= {BRUTE_SCAN_BUDGET}"));
    }
    let mut params = BTreeMap::new();
    for split in &ctx.splits {
        let (l1, l2) = (split.cofactor1(), split.cofactor2());
        for s in 1..=split.m1() {
            for t in 1..=split.m2() {
                let v = (mul_mod(s, l1, m) + mul_mod(t, l2, m)) % m;
                let trivial = s == split.m1() && t == split.m2();
                if (v == 0) != trivial {
                    return fail(
                        ID,
                        m,
                        params,
                        format!(
                            "split {}: s L1 + t L2 = {v} at (s,t) = ({s},{t})",
                            split_label(split)
                        ),
                    );
                }
            }
        }
    }
    note(&mut params, "splits", ctx.splits.len());
    pass(ID, m, params)
}

fn check_root_bifactorization(ctx: &Ctx) -> CheckResult {
    const ID: &str = "root-bifactorization";
    let m = ctx.m;
    let mut params = BTreeMap::new();
    let roots = ctx.factors.unit_square_roots();
    let sign_roots: Vec<_> = roots.iter().filter(|r| r.is_sign_root(&ctx.factors)).collect();
    let exotic = roots.len() - sign_roots.len();
    note(&mut params, "roots", roots.len());
    note(&mut params, "sign_roots", sign_roots.len());
    if exotic > 0 {
        // Extra roots modulo 2^n (n >= 3); the sign-root correspondence
        // below still holds, restricted to sign roots.
        note(&mut params, "exotic_roots", exotic);
        let values: Vec<String> = roots
            .iter()
            .filter(|r| !r.is_sign_root(&ctx.factors))
            .map(|r| r.value().to_string())
            .collect();
        note(&mut params, "exotic_root_values", values.join(","));
    }
    // Every sign root maps to a coprime split; canonical splits from the
    // pairs {a, M-a} must exhaust the bi-factorization list exactly.
    let mut mapped = alloc::collections::BTreeSet::new();
    for root in &sign_roots {
        match ctx.factors.sign_root_split(root) {
            Ok(split) => {
                let canon = split.canonicalize();
                mapped.insert((canon.m1(), canon.m2()));
            }
            Err(e) => {
                return fail(ID, m, params, format!("sign root {} rejected: {e}", root.value()));
            }
        }
    }
    let expected: alloc::collections::BTreeSet<(u64, u64)> =
        ctx.splits.iter().map(|s| (s.m1(), s.m2())).collect();
    if mapped != expected {
        return fail(
            ID,
            m,
            params,
            format!("sign-root splits {mapped:?} do not match bi-factorizations {expected:?}"),
        );
    }
    // For odd M the roots pair off with the splits two-to-one; M = 1 is
    // degenerate (the single root 0 is its own negative).
    if m % 2 == 1 && m > 1 {
        if sign_roots.len() != roots.len() {
            return fail(ID, m, params, "odd M produced a non-sign root".to_string());
        }
        if roots.len() != 2 * ctx.splits.len() {
            return fail(
                ID,
                m,
                params,
                format!(
                    "{} roots vs {} splits, want exactly 2 per split",
                    roots.len(),
                    ctx.splits.len()
                ),
            );
        }
        for root in &roots {
            let neg = (m - root.value()) % m;
            let partner =
                roots.iter().find(|r| r.value() == neg).expect("closed under negation");
            let a = ctx.factors.sign_root_split(root).expect("sign root").canonicalize();
            let b = ctx.factors.sign_root_split(partner).expect("sign root").canonicalize();
            if a != b {
                return fail(
                    ID,
                    m,
                    params,
                    format!("roots {} and {neg} map to different splits", root.value()),
                );
            }
        }
    }
    pass(ID, m, params)
}

fn check_root_products(ctx: &Ctx) -> CheckResult {
    const ID: &str = "root-products";
    let m = ctx.m;
    let mut params = BTreeMap::new();
    if m < 2 {
        note(&mut params, "entries", 0);
        return pass(ID, m, params);
    }
    let report = root_products_report(&ctx.factors);
    for entry in &report {
        if !entry.product_is_zero {
            return fail(
                ID,
                m,
                params,
                format!("(a-1)(a+1) != 0 mod {m} for root a = {}", entry.root),
            );
        }
        let reconstructed_minus = entry.minus_gcd as u128 * entry.minus_cofactor as u128;
        let reconstructed_plus = entry.plus_gcd as u128 * entry.plus_cofactor as u128;
        if reconstructed_minus != (entry.root - 1) as u128
            || reconstructed_plus != (entry.root + 1) as u128
        {
            return fail(
                ID,
                m,
                params,
                format!("gcd decomposition does not reconstruct a -/+ 1 for root {}", entry.root),
            );
        }
    }
    note(&mut params, "entries", report.len());
    pass(ID, m, params)
}

fn check_root_set(ctx: &Ctx) -> CheckResult {
    const ID: &str = "root-set";
    let m = ctx.m;
    let mut params = BTreeMap::new();
    let roots = ctx.factors.unit_square_roots();
    note(&mut params, "roots", roots.len());
    for root in &roots {
        let a = root.value();
        if m > 1 && mul_mod(a, a, m) != 1 {
            return fail(ID, m, params, format!("{a}^2 != 1 mod {m}"));
        }
        let neg = (m - a) % m;
        if !roots.iter().any(|r| r.value() == neg) {
            return fail(ID, m, params, format!("set not closed under negation at {a}"));
        }
        // The sign pattern must CRT-reconstruct the root itself.
        let congruences: Vec<(u64, u64)> = root
            .sign_pattern()
            .iter()
            .zip(ctx.factors.constituents())
            .map(|(&r, c)| (r, c.modulus))
            .collect();
        let rebuilt = crate::numtheory::crt_solve(&congruences).expect("coprime constituents");
        if rebuilt != a {
            return fail(ID, m, params, format!("sign pattern of {a} reconstructs {rebuilt}"));
        }
    }
    if m <= BRUTE_SCAN_BUDGET {
        note(&mut params, "brute_scan", "full");
        let mut brute = Vec::new();
        for x in 0..m {
            if mul_mod(x, x, m) == 1 % m {
                brute.push(x);
            }
        }
        let values: Vec<u64> = roots.iter().map(|r| r.value()).collect();
        if brute != values {
            return fail(
                ID,
                m,
                params,
                format!("brute-force roots {brute:?} differ from CRT roots {values:?}"),
            );
        }
    } else {
        note(&mut params, "brute_scan", "structural-only");
    }
    pass(ID, m, params)
}

/// One row of the root-products table: the decomposition of `a - 1` and
/// `a + 1` against M for a sign root `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootProductEntry {
    /// The sign root `a`.
    pub root: u64,
    /// `gcd(a - 1, M)`.
    pub minus_gcd: u64,
    /// `(a - 1) / gcd(a - 1, M)`.
    pub minus_cofactor: u64,
    /// `gcd(a + 1, M)`.
    pub plus_gcd: u64,
    /// `(a + 1) / gcd(a + 1, M)`.
    pub plus_cofactor: u64,
    /// Whether `(a - 1)(a + 1) = 0 [mod M]` (it always is for a root).
    pub product_is_zero: bool,
}

/// For each sign root `a` of `x^2 = 1 [mod M]`, decomposes `a - 1` and
/// `a + 1` as `cofactor * gcd(.., M)` and confirms their product vanishes
/// modulo M. Exotic (non-sign) roots are omitted.
pub fn root_products_report(factors: &Factorization) -> Vec<RootProductEntry> {
    let m = factors.modulus();
    factors
        .unit_square_roots()
        .iter()
        .filter(|r| r.is_sign_root(factors))
        .map(|r| {
            let a = r.value();
            let minus = a.saturating_sub(1); // a >= 1 for M >= 2
            let plus = a + 1;
            let minus_gcd = gcd(minus, m);
            let plus_gcd = gcd(plus, m);
            RootProductEntry {
                root: a,
                minus_gcd,
                minus_cofactor: if minus == 0 { 0 } else { minus / minus_gcd },
                plus_gcd,
                plus_cofactor: plus / plus_gcd,
                product_is_zero: mul_mod(minus % m, plus % m, m) == 0,
            }
        })
        .collect()
}
