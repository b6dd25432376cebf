//! End-to-end checks on Schubert cells: scheme axioms, symmetry, equality
//! with the generalized wreath product over D(α), counting identities and
//! randomized action trials.

use std::collections::HashSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::matrix::{pivot_set_of_difference, Matrix, PivotSet, Position};
use crate::par::{self, Parallelism};
use crate::poset::{phi, phi_inverse, subpartitions, Partition, Poset};
use crate::scheme::{is_symmetric, valencies, verify_scheme, CheckMode, VerifyOptions};
use crate::schubert::{
    all_cells, cell_scheme, pair_witness_trial, matrix_to_point, orbital_invariance_trial, pivot_invariance_trial,
    point_at, point_to_matrix, transitivity_trial, CellDescriptor, CellScheme, TrialReport,
};
use crate::wreath::{gwp_label_of_pair, gwp_labels, GwpSpec};

/// Full relation comparison up to this many points.
pub const FULL_COMPARISON_LIMIT: u128 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Check {
    fn new(name: &str, status: Status, detail: impl Into<String>) -> Self {
        Check { name: name.into(), status, detail: detail.into(), elapsed_ms: None }
    }

    fn pass(name: &str, detail: impl Into<String>) -> Self {
        Check::new(name, Status::Pass, detail)
    }

    fn fail(name: &str, detail: impl Into<String>) -> Self {
        Check::new(name, Status::Fail, detail)
    }

    fn from_bool(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check::new(name, if ok { Status::Pass } else { Status::Fail }, detail)
    }

    fn from_trials(name: &str, r: &TrialReport) -> Self {
        let detail = match &r.first_failure {
            None => format!("{} trials, 0 failures", r.trials),
            Some(f) => format!("{} trials, {} failures; first: {f}", r.trials, r.failures),
        };
        Check::from_bool(name, r.passed(), detail)
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub n: usize,
    pub m: usize,
    pub q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<PivotSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Partition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: ReportConfig,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Knobs for [`verify_cell`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Cells above this size are skipped unless `allow_large`.
    pub max_cell_size: u128,
    pub allow_large: bool,
    /// Exhaustive axiom check up to this many points, sampled above.
    pub axioms_exhaustive_limit: usize,
    pub samples: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: Parallelism,
    /// Also run the pair-witness identity trial.
    pub pair_witness: bool,
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_cell_size: FULL_COMPARISON_LIMIT,
            allow_large: false,
            axioms_exhaustive_limit: 512,
            samples: 100_000,
            trials: 1000,
            seed: 0,
            mode: Parallelism::default(),
            pair_witness: false,
            timings: false,
        }
    }
}

/// Options for [`verify_main_theorem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MainTheoremOptions {
    pub full_limit: u128,
    pub samples: usize,
    pub seed: u64,
    /// Present D(α) to the product construction in a seeded random element order.
    pub shuffle: bool,
    pub mode: Parallelism,
}

impl Default for MainTheoremOptions {
    fn default() -> Self {
        MainTheoremOptions {
            full_limit: FULL_COMPARISON_LIMIT,
            samples: 100_000,
            seed: 0,
            shuffle: false,
            mode: Parallelism::default(),
        }
    }
}

/// Outcome of comparing X_α with the product scheme over D(α).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainTheoremOutcome {
    pub mode: CheckMode,
    pub pairs: u64,
    pub cell_labels_seen: usize,
    pub gwp_labels: usize,
    pub mismatch: Option<String>,
}

impl MainTheoremOutcome {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none() && (self.mode == CheckMode::Sampled || self.cell_labels_seen == self.gwp_labels)
    }
}

/// Compares `Piv(M − N)` with the product-scheme label of the same pair,
/// under β ↔ (Y = β, every class index 1). Points are matched through
/// [`matrix_to_point`].
pub fn verify_main_theorem(cell: &CellDescriptor, field: &FiniteField, opts: &MainTheoremOptions) -> Result<MainTheoremOutcome> {
    let q = field.order();
    let size = cell.size(q).ok_or(Error::SizeBoundExceeded { size: u128::MAX, bound: opts.full_limit })?;
    let mut elements: Vec<Position> = cell.free().to_vec();
    if opts.shuffle {
        elements.shuffle(&mut ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed));
    }
    let poset = Poset::product_order(elements)?;
    let components = (0..poset.len())
        .map(|_| crate::scheme::one_class_scheme(q as usize))
        .collect::<Result<Vec<_>>>()?;
    let spec = GwpSpec::new(poset, components)?;
    let gwp_label_total = gwp_labels(&spec)?.len();
    // coordinate t of a cell point sits at poset element slot[t]
    let slot: Vec<usize> = cell
        .free()
        .iter()
        .map(|p| spec.poset.index_of(p).expect("same element set"))
        .collect();

    let digits_of = |m: &Matrix| -> Result<Vec<u32>> {
        let point = matrix_to_point(cell, m)?;
        let mut d = vec![0u32; slot.len()];
        for (t, c) in point.coords.iter().enumerate() {
            d[slot[t]] = c.index();
        }
        Ok(d)
    };
    let compare = |mx: &Matrix, my: &Matrix, dx: &[u32], dy: &[u32]| -> Option<PivotSet> {
        let beta = pivot_set_of_difference(mx, my);
        let l = gwp_label_of_pair(&spec, dx, dy);
        let y = PivotSet::new(l.y.members().iter().map(|&e| *spec.poset.element(e)).collect()).ok()?;
        (l.indices.iter().all(|&i| i == 1) && y == beta).then_some(beta)
    };
    let describe = |x: u128, y: u128, mx: &Matrix, my: &Matrix, dx: &[u32], dy: &[u32]| {
        let l = gwp_label_of_pair(&spec, dx, dy);
        format!(
            "points {x},{y}: Piv(M−N) = {} but product label {}",
            pivot_set_of_difference(mx, my),
            l.to_json(&spec.poset)
        )
    };

    if size <= opts.full_limit {
        let n = size as usize;
        let mats: Vec<Matrix> = par::map_range(opts.mode, n, |i| {
            point_to_matrix(cell, &point_at(cell, field, i as u128)).expect("cell point")
        });
        let digits: Vec<Vec<u32>> = mats.iter().map(&digits_of).collect::<Result<_>>()?;
        let rows: Vec<std::result::Result<HashSet<PivotSet>, String>> = par::map_range(opts.mode, n, |x| {
            let mut seen = HashSet::new();
            for y in 0..n {
                match compare(&mats[x], &mats[y], &digits[x], &digits[y]) {
                    Some(b) => {
                        seen.insert(b);
                    }
                    None => return Err(describe(x as u128, y as u128, &mats[x], &mats[y], &digits[x], &digits[y])),
                }
            }
            Ok(seen)
        });
        let mut seen = HashSet::new();
        let mut mismatch = None;
        for r in rows {
            match r {
                Ok(s) => seen.extend(s),
                Err(e) => {
                    mismatch = Some(e);
                    break;
                }
            }
        }
        return Ok(MainTheoremOutcome {
            mode: CheckMode::Exhaustive,
            pairs: (n * n) as u64,
            cell_labels_seen: seen.len(),
            gwp_labels: gwp_label_total,
            mismatch,
        });
    }

    let results: Vec<std::result::Result<PivotSet, String>> = par::map_range(opts.mode, opts.samples, |t| {
        let mut rng = crate::schubert::trial_rng(opts.seed, t);
        let x = rng.random_range(0..size);
        let y = rng.random_range(0..size);
        let mx = point_to_matrix(cell, &point_at(cell, field, x)).expect("cell point");
        let my = point_to_matrix(cell, &point_at(cell, field, y)).expect("cell point");
        let dx = digits_of(&mx).expect("cell point");
        let dy = digits_of(&my).expect("cell point");
        compare(&mx, &my, &dx, &dy).ok_or_else(|| describe(x, y, &mx, &my, &dx, &dy))
    });
    let mut seen = HashSet::new();
    let mut mismatch = None;
    for r in results {
        match r {
            Ok(b) => {
                seen.insert(b);
            }
            Err(e) => {
                mismatch.get_or_insert(e);
            }
        }
    }
    Ok(MainTheoremOutcome {
        mode: CheckMode::Sampled,
        pairs: opts.samples as u64,
        cell_labels_seen: seen.len(),
        gwp_labels: gwp_label_total,
        mismatch,
    })
}

/// Every relation of X_α equals its transpose.
pub fn verify_symmetry(cs: &CellScheme, mode: Parallelism) -> Check {
    let ok = is_symmetric(&cs.scheme, mode);
    Check::from_bool("symmetry", ok, format!("{} points, {} relations", cs.scheme.size(), cs.labels.len()))
}

/// Gaussian binomial by the product formula, exact.
pub fn gaussian_binomial(n: u32, m: u32, q: u32) -> Option<u128> {
    if m > n {
        return Some(0);
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..m {
        num = num.checked_mul(q.checked_pow(n - i)? - 1)?;
        den = den.checked_mul(q.checked_pow(m - i)? - 1)?;
    }
    Some(num / den)
}

pub fn binomial(n: u64, m: u64) -> u128 {
    (0..m).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Σ_α q^{|φ_m(α)|} against the product formula, the cell count against
/// C(n, m) and against a direct count of size-m anti-chains of [n]×[m],
/// and the φ_m round trip on every cell.
pub fn verify_gaussian_binomial(n: usize, m: usize, q: u32) -> Result<Check> {
    let name = "gaussian_binomial";
    let cells = all_cells(n, m)?;
    let mut total = 0u128;
    let mut lambdas = HashSet::new();
    for c in &cells {
        let l = phi(c.alpha(), n, m)?;
        if &phi_inverse(&l, n, m)? != c.alpha() {
            return Ok(Check::fail(name, format!("φ round trip fails at α = {}", c.alpha())));
        }
        total += c.size(q).ok_or(Error::SizeBoundExceeded { size: u128::MAX, bound: u128::MAX })?;
        lambdas.insert(l);
    }
    let want = gaussian_binomial(n as u32, m as u32, q)
        .ok_or(Error::SizeBoundExceeded { size: u128::MAX, bound: u128::MAX })?;
    let c = binomial(n as u64, m as u64);
    let mut detail = format!("Σ q^|λ| = {total}, product formula = {want}, cells = {}, C({n},{m}) = {c}", cells.len());
    let mut ok = total == want && cells.len() as u128 == c && lambdas.len() == cells.len();
    if n * m <= 64 {
        let mut grid = Vec::with_capacity(n * m);
        for i in 1..=n {
            for j in 1..=m {
                grid.push(Position::new(i, j));
            }
        }
        let g = Poset::product_order(grid)?;
        let count = g.antichains_bounded(64)?.iter().filter(|a| a.len() == m).count();
        ok &= count as u128 == c;
        detail.push_str(&format!(", size-{m} anti-chains of the grid = {count}"));
    }
    Ok(Check::from_bool(name, ok, detail))
}

/// Anti-chains of D(α), subpartitions of λ and relations of X_α.
pub fn verify_label_counts(cs: &CellScheme) -> Check {
    let antichains = cs.labels.len();
    let subparts = subpartitions(cs.cell.lambda()).len();
    let mut seen = vec![false; cs.scheme.label_count()];
    for y in 0..cs.scheme.size() {
        seen[cs.scheme.relation(0, y) as usize] = true;
    }
    let relations = seen.iter().filter(|&&s| s).count();
    Check::from_bool(
        "label_counts",
        antichains == subparts && subparts == relations,
        format!("anti-chains {antichains}, subpartitions {subparts}, relations from point 0 {relations}"),
    )
}

/// Enumerated out-degrees against `(q−1)^{|β|} q^{|Down(β)|}`.
pub fn verify_valencies(cs: &CellScheme, q: u32) -> Result<Check> {
    let v = valencies(&cs.scheme);
    for (beta, &got) in cs.labels.iter().zip(&v) {
        let want = cs.cell.valency_formula(beta, q)?;
        if got as u128 != want {
            return Ok(Check::fail("valencies", format!("β = {beta}: enumerated {got}, formula {want}")));
        }
    }
    Ok(Check::pass("valencies", format!("{} labels match", v.len())))
}

fn timed(timings: bool, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let mut c = f();
    if timings {
        c.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    c
}

fn error_check(name: &str, e: Error) -> Check {
    Check::fail(name, e.to_string())
}

/// Names of the per-cell checks, in report order.
pub const CELL_CHECKS: [&str; 9] = [
    "scheme_axioms",
    "symmetry",
    "main_theorem",
    "main_theorem_shuffled",
    "label_counts",
    "valencies",
    "pivot_invariance",
    "orbital_invariance",
    "orbit_transitivity",
];

/// Runs every per-cell check. Cells above `max_cell_size` are reported as
/// skipped unless `allow_large`, in which case comparisons are sampled.
pub fn verify_cell(cell: &CellDescriptor, field: &FiniteField, cfg: &SuiteConfig) -> VerificationReport {
    let q = field.order();
    let size = cell.size(q);
    let config = ReportConfig {
        n: cell.n(),
        m: cell.m(),
        q,
        alpha: Some(cell.alpha().clone()),
        lambda: Some(cell.lambda().clone()),
        size,
    };
    let size = size.unwrap_or(u128::MAX);
    let mut names: Vec<&str> = CELL_CHECKS.to_vec();
    if cfg.pair_witness {
        names.push("pair_witness");
    }
    if size > cfg.max_cell_size && !cfg.allow_large {
        let detail = format!("cell has {size} points, above --max-cell-size {}", cfg.max_cell_size);
        return VerificationReport {
            config,
            checks: names.iter().map(|n| Check::new(n, Status::Skipped, detail.clone())).collect(),
        };
    }

    let mut checks = Vec::new();
    let t = cfg.timings;
    let enumerable = size <= crate::schubert::ENUMERATION_BOUND;
    let cs = if enumerable { Some(cell_scheme(cell, field, crate::schubert::ENUMERATION_BOUND, cfg.mode)) } else { None };
    let too_large = |name: &str| Check::new(name, Status::Skipped, format!("cell has {size} points, above the enumeration bound"));

    checks.push(timed(t, || match &cs {
        None => too_large("scheme_axioms"),
        Some(Err(e)) => error_check("scheme_axioms", e.clone()),
        Some(Ok(cs)) => {
            let o = VerifyOptions {
                exhaustive_limit: cfg.axioms_exhaustive_limit,
                samples: cfg.samples,
                seed: cfg.seed,
                mode: cfg.mode,
            };
            let v = verify_scheme(&cs.scheme, &o);
            let mode = match v.mode {
                CheckMode::Exhaustive => "exhaustive",
                CheckMode::Sampled => "sampled",
            };
            let detail = match &v.counterexample {
                None => format!("{mode}, {} pairs, {} relations", v.pairs_checked, cs.labels.len()),
                Some(c) => format!("{mode}: {}", serde_json::to_string(c).unwrap_or_default()),
            };
            Check::from_bool("scheme_axioms", v.is_valid(), detail)
        }
    }));
    checks.push(timed(t, || match &cs {
        None => too_large("symmetry"),
        Some(Err(e)) => error_check("symmetry", e.clone()),
        Some(Ok(cs)) => verify_symmetry(cs, cfg.mode),
    }));
    for (name, shuffle) in [("main_theorem", false), ("main_theorem_shuffled", true)] {
        checks.push(timed(t, || {
            let o = MainTheoremOptions {
                full_limit: cfg.max_cell_size.min(FULL_COMPARISON_LIMIT),
                samples: cfg.samples,
                seed: cfg.seed,
                shuffle,
                mode: cfg.mode,
            };
            match verify_main_theorem(cell, field, &o) {
                Err(e) => error_check(name, e),
                Ok(out) => {
                    let mode = match out.mode {
                        CheckMode::Exhaustive => "full",
                        CheckMode::Sampled => "sampled",
                    };
                    let detail = match &out.mismatch {
                        Some(m) => m.clone(),
                        None => format!(
                            "{mode}, {} pairs, {} relations, {} product labels",
                            out.pairs, out.cell_labels_seen, out.gwp_labels
                        ),
                    };
                    Check::from_bool(name, out.passed(), detail)
                }
            }
        }));
    }
    checks.push(timed(t, || match &cs {
        None => too_large("label_counts"),
        Some(Err(e)) => error_check("label_counts", e.clone()),
        Some(Ok(cs)) => verify_label_counts(cs),
    }));
    checks.push(timed(t, || match &cs {
        None => too_large("valencies"),
        Some(Err(e)) => error_check("valencies", e.clone()),
        Some(Ok(cs)) => verify_valencies(cs, q).unwrap_or_else(|e| error_check("valencies", e)),
    }));
    let seed = cfg.seed;
    checks.push(timed(t, || {
        Check::from_trials("pivot_invariance", &pivot_invariance_trial(cell, field, cfg.trials, seed, cfg.mode))
    }));
    checks.push(timed(t, || {
        Check::from_trials(
            "orbital_invariance",
            &orbital_invariance_trial(cell, field, cfg.trials, seed.wrapping_add(1), cfg.mode),
        )
    }));
    checks.push(timed(t, || {
        Check::from_trials(
            "orbit_transitivity",
            &transitivity_trial(cell, field, cfg.trials, seed.wrapping_add(2), cfg.mode),
        )
    }));
    if cfg.pair_witness {
        checks.push(timed(t, || {
            Check::from_trials(
                "pair_witness",
                &pair_witness_trial(cell, field, cfg.trials, seed.wrapping_add(3), cfg.mode),
            )
        }));
    }
    VerificationReport { config, checks }
}

/// [`verify_gaussian_binomial`] wrapped as a report.
pub fn verify_counting(n: usize, m: usize, q: u32, timings: bool) -> VerificationReport {
    let config = ReportConfig { n, m, q, alpha: None, lambda: None, size: gaussian_binomial(n as u32, m as u32, q) };
    let check = timed(timings, || {
        verify_gaussian_binomial(n, m, q).unwrap_or_else(|e| error_check("gaussian_binomial", e))
    });
    VerificationReport { config, checks: vec![check] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schubert::{transport, CellPoint, ENUMERATION_BOUND};

    fn gf(p: u32) -> FiniteField {
        FiniteField::prime(p).unwrap()
    }

    fn example_cell() -> CellDescriptor {
        CellDescriptor::from_lambda(7, 4, Partition::new(vec![4, 3, 1]).unwrap()).unwrap()
    }

    #[test]
    fn gaussian_values() {
        assert_eq!(gaussian_binomial(2, 1, 2), Some(3));
        assert_eq!(gaussian_binomial(4, 2, 3), Some(130));
        assert_eq!(gaussian_binomial(4, 0, 3), Some(1));
        assert_eq!(gaussian_binomial(3, 4, 3), Some(0));
        // q-Pascal recurrence as an oracle
        for q in [2u32, 3, 4] {
            for n in 1..=8u32 {
                for m in 1..n {
                    let lhs = gaussian_binomial(n, m, q).unwrap();
                    let rhs = gaussian_binomial(n - 1, m - 1, q).unwrap()
                        + (q as u128).pow(m) * gaussian_binomial(n - 1, m, q).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
        assert_eq!(binomial(8, 3), 56);
    }

    #[test]
    fn counting_identity_small() {
        assert_eq!(verify_gaussian_binomial(2, 1, 2).unwrap().status, Status::Pass);
        let c = verify_gaussian_binomial(4, 2, 3).unwrap();
        assert_eq!(c.status, Status::Pass, "{}", c.detail);
        assert!(c.detail.contains("= 130"));
    }

    #[test]
    fn main_theorem_tiny_and_example() {
        let c = CellDescriptor::from_lambda(2, 1, Partition::new(vec![1]).unwrap()).unwrap();
        let out = verify_main_theorem(&c, &gf(2), &MainTheoremOptions::default()).unwrap();
        assert!(out.passed());
        assert_eq!((out.pairs, out.gwp_labels), (4, 2));
        let out = verify_main_theorem(&example_cell(), &gf(2), &MainTheoremOptions::default()).unwrap();
        assert!(out.passed(), "{out:?}");
        assert_eq!(out.cell_labels_seen, 23);
        let shuffled = MainTheoremOptions { shuffle: true, seed: 11, ..Default::default() };
        assert!(verify_main_theorem(&example_cell(), &gf(2), &shuffled).unwrap().passed());
    }

    #[test]
    fn main_theorem_sampled_mode() {
        let o = MainTheoremOptions { full_limit: 10, samples: 500, ..Default::default() };
        let out = verify_main_theorem(&example_cell(), &gf(2), &o).unwrap();
        assert_eq!(out.mode, CheckMode::Sampled);
        assert!(out.passed());
    }

    #[test]
    fn full_suite_on_small_cells() {
        let cfg = SuiteConfig { trials: 100, ..Default::default() };
        for q in [2, 3] {
            for c in all_cells(4, 2).unwrap() {
                let r = verify_cell(&c, &gf(q), &cfg);
                assert_eq!(r.checks.len(), CELL_CHECKS.len());
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn over_cap_cells_are_skipped() {
        let cfg = SuiteConfig { max_cell_size: 100, ..Default::default() };
        let r = verify_cell(&example_cell(), &gf(2), &cfg);
        assert!(r.checks.iter().all(|c| c.status == Status::Skipped));
        assert!(r.passed());
    }

    #[test]
    fn pair_witness_check_reports_failures() {
        // two columns differ but the difference has a single maximal position
        let cfg = SuiteConfig { trials: 200, pair_witness: true, ..Default::default() };
        let c = CellDescriptor::from_lambda(3, 1, Partition::new(vec![1, 1]).unwrap()).unwrap();
        let r = verify_cell(&c, &gf(2), &cfg);
        let pw = r.checks.iter().find(|c| c.name == "pair_witness").unwrap();
        assert_eq!(pw.status, Status::Pass, "single-column cells always satisfy the identity");
        let c = CellDescriptor::from_lambda(4, 2, Partition::new(vec![2, 1]).unwrap()).unwrap();
        let r = verify_cell(&c, &gf(2), &cfg);
        let pw = r.checks.iter().find(|c| c.name == "pair_witness").unwrap();
        assert_eq!(pw.status, Status::Fail);
        assert!(pw.detail.contains("M = G·X"));
    }

    #[test]
    fn symmetry_and_valencies_on_example() {
        let f = gf(2);
        let cs = cell_scheme(&example_cell(), &f, ENUMERATION_BOUND, Parallelism::Parallel).unwrap();
        assert_eq!(verify_symmetry(&cs, Parallelism::Sequential).status, Status::Pass);
        assert_eq!(verify_valencies(&cs, 2).unwrap().status, Status::Pass);
        let lc = verify_label_counts(&cs);
        assert_eq!(lc.status, Status::Pass);
        assert!(lc.detail.contains("anti-chains 23"));
        let single = CellDescriptor::from_lambda(3, 1, Partition::zeros(2)).unwrap();
        let cs = cell_scheme(&single, &f, ENUMERATION_BOUND, Parallelism::Sequential).unwrap();
        assert_eq!(verify_symmetry(&cs, Parallelism::Sequential).status, Status::Pass);
    }

    #[test]
    fn transport_is_identity_on_equal_points() {
        let f = gf(3);
        let c = example_cell();
        let p = CellPoint::random(&c, &f, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(transport(&c, &f, &p, &p).unwrap(), Matrix::identity(7));
    }

    #[test]
    fn report_json_shape() {
        let r = verify_counting(2, 1, 2, false);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["checks"][0]["status"], "PASS");
        assert!(v["checks"][0].get("elapsed_ms").is_none());
        assert_eq!(v["config"]["q"], 2);
    }
}
