//! The verification suite: every check the toolkit can run against a
//! certified instance, assembled into a deterministic RunReport.
//!
//! Independent checks (fibers, pairs, Schubert cycles) are evaluated
//! concurrently over the shared immutable instance; records are sorted by
//! name afterwards, so the report does not depend on scheduling.

use crate::config::Budget;
use crate::construction::{self, PfaffianInstance, X_SMOOTHNESS_PANEL};
use crate::correspondence::{
    self, distinctness_checks, fiber_over_x, fiber_over_y, radical_not_on_x, schubert_cycle,
    schubert_hilbert,
};
use crate::exactmath::fp::Fp;
use crate::exactmath::rng::{derive_seed, SplitMix64};
use crate::exactmath::skew::SkewForm;
use crate::ktheory;
use crate::parallel::par_map;
use crate::report::{CheckRecord, RunReport};
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Fast,
    Full,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Fast => "fast",
            Suite::Full => "full",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub suite: Suite,
    /// Number of fiber-over-Y records; defaults by suite when None.
    pub fibers: Option<usize>,
    /// Number of fiber-pair records; defaults by suite when None.
    pub pairs: Option<usize>,
    /// Record wall times (makes reports non-reproducible byte-for-byte).
    pub timings: bool,
}

impl SuiteOptions {
    pub fn fast() -> Self {
        SuiteOptions {
            suite: Suite::Fast,
            fibers: None,
            pairs: None,
            timings: false,
        }
    }

    pub fn full() -> Self {
        SuiteOptions {
            suite: Suite::Full,
            ..SuiteOptions::fast()
        }
    }

    fn fiber_count(&self) -> usize {
        self.fibers.unwrap_or(match self.suite {
            Suite::Fast => 5,
            Suite::Full => 20,
        })
    }

    fn pair_count(&self) -> usize {
        self.pairs.unwrap_or(match self.suite {
            Suite::Fast => 3,
            Suite::Full => 10,
        })
    }

    fn cubic_count(&self) -> usize {
        match self.suite {
            Suite::Fast => 1,
            Suite::Full => 3,
        }
    }

    fn schubert_count(&self) -> usize {
        match self.suite {
            Suite::Fast => 2,
            Suite::Full => 5,
        }
    }
}

fn timed(timings: bool, f: impl FnOnce() -> CheckRecord) -> CheckRecord {
    let start = Instant::now();
    let mut rec = f();
    if timings {
        rec.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    rec
}

/// pf(m)^2 = det(m) on `n` random forms, and pf of the standard
/// symplectic form is 1.
pub fn pfaffian_check(p: u64, n: usize, seed: u64) -> CheckRecord {
    let anchor = format!("pf(m)^2 = det(m) on {n} random 6x6 skew forms; pf(J) = 1");
    let mut rng = SplitMix64::new(derive_seed(seed, 20, 0));
    for i in 0..n {
        let f = SkewForm::random(6, p, &mut rng);
        if f.pfaffian() * f.pfaffian() != f.matrix().det() {
            return CheckRecord::fail("pfaffian", anchor, format!("form {i}: pf^2 != det"));
        }
        if f.pfaffian() != f.pfaffian_expansion() {
            return CheckRecord::fail(
                "pfaffian",
                anchor,
                format!("form {i}: elimination and expansion Pfaffians differ"),
            );
        }
    }
    let mut upper = vec![Fp::zero(p); 15];
    for (t, &(a, b)) in crate::exactmath::plucker::PAIRS.iter().enumerate() {
        if (a, b) == (0, 1) || (a, b) == (2, 3) || (a, b) == (4, 5) {
            upper[t] = Fp::one(p);
        }
    }
    let j = SkewForm::from_upper(6, &upper, p);
    if j.pfaffian() != Fp::one(p) {
        return CheckRecord::fail("pfaffian", anchor, "pf(J) != 1".to_string());
    }
    CheckRecord::pass("pfaffian", anchor).with("forms", n as u64)
}

fn ktheory_check() -> CheckRecord {
    let inv = ktheory::compute_invariants();
    let anchor = "projector kills O(-1), O, O(1) and Koszul combinations; \
                  chi oracle; Mukai pairing (1,0,-3)^2 = 6, ext1 = 8";
    if !inv.all_hold() {
        let failed: Vec<&str> = inv
            .identities
            .iter()
            .filter(|(_, &ok)| !ok)
            .map(|(k, _)| k.as_str())
            .collect();
        return CheckRecord::fail("ktheory", anchor, format!("failed: {failed:?}"));
    }
    CheckRecord::pass("ktheory", anchor)
        .with("chi_pr_point", inv.chi_pr_point)
        .with("mukai_ideal_self", inv.mukai_ideal_self)
        .with("mukai_ideal_ext1", inv.mukai_ideal_ext1)
        .with("identities", inv.identities.len() as u64)
}

fn en_values_check() -> CheckRecord {
    let anchor = "Eagon-Northcott alternating binomial sum equals 2n^2 + 3n + 1; \
                  values 1, 6, 15, 28 at n = 0..3";
    if ktheory::en_binomial_sum() != ktheory::expected_fiber_hp() {
        return CheckRecord::fail("en_values", anchor, "polynomial identity fails".to_string());
    }
    let hp = ktheory::expected_fiber_hp();
    let expected = [1i64, 6, 15, 28];
    for (n, &v) in expected.iter().enumerate() {
        if hp.eval_i(n as i64) != crate::polyalg::qpoly::big(v) {
            return CheckRecord::fail("en_values", anchor, format!("value at {n} differs"));
        }
    }
    CheckRecord::pass("en_values", anchor).with("values", serde_json::json!(expected))
}

fn y_smooth_check(inst: &PfaffianInstance, budget: &Budget) -> CheckRecord {
    let anchor = "Jacobian ideal of the cubic saturates to (1): Y is smooth";
    match construction::verify_y_smooth(inst, budget) {
        Ok(true) => CheckRecord::pass("y_smooth", anchor),
        Ok(false) => CheckRecord::fail("y_smooth", anchor, "saturation is not the unit ideal"),
        Err(e) => CheckRecord::fail("y_smooth", anchor, e.to_string()),
    }
}

fn x_hilbert_check(inst: &PfaffianInstance, budget: &Budget) -> CheckRecord {
    let anchor = "X has dimension 2, degree 14, Hilbert polynomial 7n^2 + 2";
    match construction::verify_x_hilbert(inst, budget) {
        Ok(hd) => CheckRecord::pass("x_hilbert", anchor)
            .with("dimension", hd.projective_dim())
            .with("degree", hd.degree)
            .with("hp", serde_json::json!([2, 0, 7])),
        Err(e) => CheckRecord::fail("x_hilbert", anchor, e.to_string()),
    }
}

fn x_panel_check(inst: &PfaffianInstance, budget: &Budget) -> CheckRecord {
    let anchor = format!(
        "Jacobian of the X ideal has rank exactly 12 at {X_SMOOTHNESS_PANEL} sampled points"
    );
    match construction::verify_x_panel(inst, X_SMOOTHNESS_PANEL, budget) {
        Ok(ranks) => CheckRecord::pass("x_smooth_panel", anchor)
            .with("points", ranks.len() as u64)
            .with("rank", 12),
        Err(e) => CheckRecord::fail("x_smooth_panel", anchor, e.to_string()),
    }
}

fn cubic_check(p: u64, index: usize, seed: u64, budget: &Budget) -> CheckRecord {
    let name = format!("detcubics/{index:04}");
    let anchor = "twisted cubic: HP 3n + 1; resolution 0 -> O(-3)^2 -> O(-2)^3; \
                  adjugate identities; Hom(I_C/S, O_S)_0 = 3";
    match crate::detcubics::certify_random_configuration(p, seed, budget) {
        Ok((_, shape, periodic, hom_dim)) => {
            if shape.generator_degrees != vec![2, 2, 2]
                || shape.syzygy_degrees != vec![3, 3]
                || shape.second_syzygies != 0
            {
                return CheckRecord::fail(name, anchor, format!("resolution shape {shape:?}"));
            }
            if !periodic.all_hold() {
                return CheckRecord::fail(name, anchor, format!("adjugate checks {periodic:?}"));
            }
            if hom_dim != 3 {
                return CheckRecord::fail(name, anchor, format!("Hom dimension {hom_dim}"));
            }
            CheckRecord::pass(name, anchor)
                .with("generators", serde_json::json!([2, 2, 2]))
                .with("syzygies", serde_json::json!([3, 3]))
                .with("hom_dimension", 3)
        }
        Err(e) => CheckRecord::fail(name, anchor, e.to_string()),
    }
}

fn schubert_check(inst: &PfaffianInstance, index: usize, budget: &Budget) -> CheckRecord {
    let name = format!("schubert/{index:04}");
    let anchor = "Schubert cycle of planes meeting rad(phi): rank-6 linear system, \
                  dimension 5, degree 4";
    let seed = derive_seed(inst.seed, 9, index as u64);
    let run = || -> Result<CheckRecord, crate::construction::ConstructError> {
        let y = construction::point_on_y(inst, seed)?;
        let cycle = schubert_cycle(inst, &y)?;
        if cycle.linear_rank != 6 {
            return Ok(CheckRecord::fail(
                name.clone(),
                anchor,
                format!("linear rank {}", cycle.linear_rank),
            ));
        }
        let hd = schubert_hilbert(inst, &cycle, budget)?;
        if hd.projective_dim() != 5 || hd.degree != 4 {
            return Ok(CheckRecord::fail(
                name.clone(),
                anchor,
                format!("dim {} degree {}", hd.projective_dim(), hd.degree),
            ));
        }
        Ok(CheckRecord::pass(name.clone(), anchor)
            .with("dimension", 5)
            .with("degree", 4)
            .with("linear_rank", 6))
    };
    match run() {
        Ok(rec) => rec,
        Err(e) => CheckRecord::fail(name, anchor, e.to_string()),
    }
}

fn fiber_check(inst: &PfaffianInstance, index: usize, budget: &Budget) -> CheckRecord {
    let name = format!("gamma_fiber/{index:04}");
    let anchor = "fiber over y has length 4; residue degrees sum to 4; \
                  rank(phi_y) = 4 with a radical witness";
    let seed = derive_seed(inst.seed, 8, index as u64);
    let run = || -> Result<CheckRecord, crate::construction::ConstructError> {
        let y = construction::point_on_y(inst, seed)?;
        let witness = radical_not_on_x(inst, &y)?;
        let fiber = fiber_over_y(inst, &y, budget)?;
        if fiber.length != Some(4) {
            return Ok(CheckRecord::fail(
                name.clone(),
                anchor,
                format!(
                    "length {:?}, dimension {}",
                    fiber.length, fiber.dimension
                ),
            ));
        }
        let total: usize = fiber
            .eliminant_factor_degrees
            .iter()
            .map(|&(d, m)| d * m)
            .sum();
        if total != 4 {
            return Ok(CheckRecord::fail(
                name.clone(),
                anchor,
                format!("residue degrees sum to {total}"),
            ));
        }
        Ok(CheckRecord::pass(name.clone(), anchor)
            .with("length", 4)
            .with(
                "factor_degrees",
                serde_json::json!(fiber.eliminant_factor_degrees),
            )
            .with("squarefree", fiber.eliminant_squarefree)
            .with("split_points", fiber.split_points.len() as u64)
            .with("radical_witness", witness as u64))
    };
    match run() {
        Ok(rec) => rec,
        Err(e) => CheckRecord::fail(name, anchor, e.to_string()),
    }
}

fn pool_size_for(pairs: usize) -> usize {
    let mut k = 2;
    while k * (k - 1) / 2 < pairs {
        k += 1;
    }
    k.max(2)
}

/// Flatness plus pairwise distinctness over a pool of sampled X points.
fn pair_checks(
    inst: &PfaffianInstance,
    pairs: usize,
    budget: &Budget,
) -> Vec<CheckRecord> {
    let pair_anchor = "planes of distinct X points meet in 0 (rank 4) and their \
                       fibers in Y are distinct";
    let flat_anchor = "Hilbert polynomial of the fiber over X is constantly 2n^2 + 3n + 1";
    let mut records = Vec::new();
    if pairs == 0 {
        return records;
    }
    // Enough points for the requested pairs; at least five when several
    // pairs are requested, so flatness sees a real sample.
    let pool = pool_size_for(pairs).max((2 * pairs).min(5));
    let points = match construction::points_on_x(inst, derive_seed(inst.seed, 10, 0), pool, budget)
    {
        Ok(pts) => pts,
        Err(e) => {
            records.push(CheckRecord::fail("flatness", flat_anchor, e.to_string()));
            return records;
        }
    };
    // One fiber per pool point, computed concurrently.
    let fibers = par_map(&points, |pt| fiber_over_x(inst, pt, budget));
    let mut hps = Vec::new();
    let mut ok = true;
    for (i, fib) in fibers.iter().enumerate() {
        match fib {
            Ok(f) => hps.push((i, f.hilbert.hp.clone())),
            Err(e) => {
                ok = false;
                records.push(CheckRecord::fail(
                    "flatness",
                    flat_anchor,
                    format!("fiber over point {i}: {e}"),
                ));
            }
        }
    }
    if ok {
        let expected = correspondence::expected_hp();
        let mismatch = hps.iter().find(|(_, hp)| hp != &expected);
        records.push(match mismatch {
            None => CheckRecord::pass("flatness", flat_anchor)
                .with("points", points.len() as u64)
                .with("hp", serde_json::json!([1, 3, 2])),
            Some((i, hp)) => CheckRecord::fail(
                "flatness",
                flat_anchor,
                format!("point {i} has Hilbert polynomial {hp}"),
            ),
        });
    }
    let all_pairs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|a| ((a + 1)..points.len()).map(move |b| (a, b)))
        .take(pairs)
        .collect();
    for (idx, (a, b)) in all_pairs.iter().enumerate() {
        let name = format!("fiber_pair/{idx:04}");
        let pair = vec![(points[*a].clone(), points[*b].clone())];
        match distinctness_checks(inst, &pair, budget) {
            Ok(rep) if rep.checked == 1 => {
                records.push(
                    CheckRecord::pass(name, pair_anchor)
                        .with("rank", 4)
                        .with("points", serde_json::json!([a, b])),
                );
            }
            Ok(_) => {
                records.push(CheckRecord::fail(
                    name,
                    pair_anchor,
                    "pair was skipped as identical".to_string(),
                ));
            }
            Err(e) => records.push(CheckRecord::fail(name, pair_anchor, e.to_string())),
        }
    }
    records
}

/// Runs the suite against a certified instance and returns the report.
pub fn run_suite(inst: &PfaffianInstance, opts: &SuiteOptions, budget: &Budget) -> RunReport {
    let mut config = BTreeMap::new();
    config.insert("suite".into(), opts.suite.name().to_string());
    config.insert("fibers".into(), opts.fiber_count().to_string());
    config.insert("pairs".into(), opts.pair_count().to_string());
    config.insert(
        "budget_ms".into(),
        budget
            .wall
            .map(|d| d.as_millis().to_string())
            .unwrap_or_else(|| "unlimited".into()),
    );
    let mut report = RunReport::new(inst.seed, inst.p, config);

    report.push(timed(opts.timings, || pfaffian_check(inst.p, 1000, inst.seed)));
    report.push(timed(opts.timings, ktheory_check));
    report.push(timed(opts.timings, en_values_check));
    report.push(timed(opts.timings, || y_smooth_check(inst, budget)));
    report.push(timed(opts.timings, || x_hilbert_check(inst, budget)));
    if opts.suite == Suite::Full {
        report.push(timed(opts.timings, || x_panel_check(inst, budget)));
    }

    for i in 0..opts.cubic_count() {
        let seed = derive_seed(inst.seed, 11, i as u64);
        report.push(timed(opts.timings, || cubic_check(inst.p, i, seed, budget)));
    }

    let schubert_records = par_map(
        &(0..opts.schubert_count()).collect::<Vec<_>>(),
        |&i| schubert_check(inst, i, budget),
    );
    for rec in schubert_records {
        report.push(rec);
    }

    let fiber_records = par_map(&(0..opts.fiber_count()).collect::<Vec<_>>(), |&i| {
        fiber_check(inst, i, budget)
    });
    for rec in fiber_records {
        report.push(rec);
    }

    for rec in pair_checks(inst, opts.pair_count(), budget) {
        report.push(rec);
    }

    report.finalize();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::sample_instance;
    use std::sync::OnceLock;

    const P: u64 = 32003;

    fn inst() -> &'static PfaffianInstance {
        static INST: OnceLock<PfaffianInstance> = OnceLock::new();
        INST.get_or_init(|| sample_instance(1, P, &Budget::default()).expect("seed 1 certifies"))
    }

    #[test]
    fn pfaffian_check_passes() {
        let rec = pfaffian_check(P, 1000, 1);
        assert!(rec.passed(), "{:?}", rec.witness);
    }

    #[test]
    fn fast_suite_passes_and_counts_records() {
        let budget = Budget::default();
        let opts = SuiteOptions {
            fibers: Some(2),
            pairs: Some(1),
            ..SuiteOptions::fast()
        };
        let report = run_suite(inst(), &opts, &budget);
        assert!(report.passed(), "{:?}", report.first_failure());
        let fibers = report
            .checks
            .iter()
            .filter(|c| c.name.starts_with("gamma_fiber/"))
            .count();
        let pairs = report
            .checks
            .iter()
            .filter(|c| c.name.starts_with("fiber_pair/"))
            .count();
        assert_eq!(fibers, 2);
        assert_eq!(pairs, 1);
        // Canonical bytes are reproducible.
        let again = run_suite(inst(), &opts, &budget);
        let a = crate::report::canonical_json(&report).unwrap();
        let b = crate::report::canonical_json(&again).unwrap();
        assert_eq!(a, b);
        // Sorted by name.
        let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }
}
