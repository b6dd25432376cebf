//! Finite association schemes given as labeled partitions of Ω×Ω, with an
//! exhaustive (or seeded, sampled) axiom checker and intersection numbers.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Parallelism};

/// Schemes up to this many points keep a dense label table.
pub const DENSE_LIMIT: usize = 1 << 10;

/// Default bound for the full cubic axiom check.
pub const EXHAUSTIVE_LIMIT: usize = 1 << 10;

/// Default budget of sampled `(x, y, z)` triples above the exhaustive bound.
pub const DEFAULT_SAMPLES: usize = 100_000;

type LabelFn = dyn Fn(usize, usize) -> u32 + Send + Sync;

#[derive(Clone)]
enum Store {
    Dense(Arc<Vec<u32>>),
    Computed(Arc<LabelFn>),
}

/// A total labeling of Ω×Ω by `0..labels.len()`; label 0 is meant to be the diagonal.
#[derive(Clone)]
pub struct SchemeInstance {
    size: usize,
    labels: Vec<String>,
    store: Store,
}

impl fmt::Debug for SchemeInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SchemeInstance")
            .field("size", &self.size)
            .field("labels", &self.labels)
            .field("dense", &self.is_dense())
            .finish()
    }
}

impl SchemeInstance {
    /// Builds from a label function; tabulated when `size ≤ DENSE_LIMIT`.
    pub fn from_fn<F>(size: usize, labels: Vec<String>, mode: Parallelism, f: F) -> Self
    where
        F: Fn(usize, usize) -> u32 + Send + Sync + 'static,
    {
        if size <= DENSE_LIMIT {
            let mut table = vec![0u32; size * size];
            par::fill_rows(mode, &mut table, size, |x, row| {
                for (y, slot) in row.iter_mut().enumerate() {
                    *slot = f(x, y);
                }
            });
            SchemeInstance { size, labels, store: Store::Dense(Arc::new(table)) }
        } else {
            SchemeInstance { size, labels, store: Store::Computed(Arc::new(f)) }
        }
    }

    /// Builds from a row-major `size × size` label table.
    pub fn from_table(size: usize, labels: Vec<String>, table: Vec<u32>) -> Result<Self> {
        if table.len() != size * size {
            return Err(Error::InvalidScheme(format!(
                "table has {} entries, expected {}",
                table.len(),
                size * size
            )));
        }
        Ok(SchemeInstance { size, labels, store: Store::Dense(Arc::new(table)) })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.store, Store::Dense(_))
    }

    /// Label of the pair `(x, y)`.
    pub fn relation(&self, x: usize, y: usize) -> u32 {
        match &self.store {
            Store::Dense(t) => t[x * self.size + y],
            Store::Computed(f) => f(x, y),
        }
    }

    /// Dense copy with one pair relabeled. Used to inject faults.
    pub fn with_relabeled(&self, x: usize, y: usize, label: u32) -> Self {
        let mut table = self.to_table();
        table[x * self.size + y] = label;
        SchemeInstance { size: self.size, labels: self.labels.clone(), store: Store::Dense(Arc::new(table)) }
    }

    /// Row-major label table (materialized if the store is computed).
    pub fn to_table(&self) -> Vec<u32> {
        match &self.store {
            Store::Dense(t) => t.as_ref().clone(),
            Store::Computed(f) => {
                let n = self.size;
                (0..n * n).map(|i| f(i / n, i % n)).collect()
            }
        }
    }
}

/// Options for [`verify_scheme`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub exhaustive_limit: usize,
    pub samples: usize,
    pub seed: u64,
    pub mode: Parallelism,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            exhaustive_limit: EXHAUSTIVE_LIMIT,
            samples: DEFAULT_SAMPLES,
            seed: 0,
            mode: Parallelism::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStatus {
    Valid,
    Invalid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Exhaustive,
    Sampled,
}

/// The first violated axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Counterexample {
    /// A label outside `0..labels.len()`.
    UnknownLabel { x: usize, y: usize, label: u32 },
    /// A declared label with no pair.
    EmptyRelation { label: u32 },
    /// Label 0 is not exactly the diagonal.
    Diagonal { x: usize, y: usize, label: u32 },
    /// The transpose of relation `label` is not a single relation.
    Transpose { label: u32, x: usize, y: usize, expected: u32, found: u32 },
    /// `p^k_{ij}` at `(x, y)` differs from its value at the reference pair of `k`.
    Constancy {
        k: u32,
        i: u32,
        j: u32,
        x: usize,
        y: usize,
        reference: (usize, usize),
        expected: u64,
        found: u64,
    },
}

/// Standard parameters of a verified scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub labels: Vec<String>,
    /// `transpose[i] = i*`.
    pub transpose: Vec<u32>,
    pub valencies: Vec<u64>,
    pub symmetric: bool,
    pub intersection_numbers: IntersectionNumbers,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeVerdict {
    pub status: VerdictStatus,
    pub mode: CheckMode,
    /// Pairs `(x, y)` whose full `z`-count was compared against the reference.
    pub pairs_checked: u64,
    pub counterexample: Option<Counterexample>,
    pub parameters: Option<Parameters>,
}

impl SchemeVerdict {
    pub fn is_valid(&self) -> bool {
        self.status == VerdictStatus::Valid
    }

    fn invalid(mode: CheckMode, pairs_checked: u64, c: Counterexample) -> Self {
        SchemeVerdict {
            status: VerdictStatus::Invalid,
            mode,
            pairs_checked,
            counterexample: Some(c),
            parameters: None,
        }
    }
}

/// `p[k][i][j]` stored flat, `r` labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionNumbers {
    pub r: usize,
    pub table: Vec<u64>,
}

impl IntersectionNumbers {
    pub fn get(&self, k: u32, i: u32, j: u32) -> u64 {
        let r = self.r;
        self.table[(k as usize * r + i as usize) * r + j as usize]
    }

    /// CSV with header `k,i,j,p`, all `r³` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,i,j,p\n");
        for k in 0..self.r as u32 {
            for i in 0..self.r as u32 {
                for j in 0..self.r as u32 {
                    s.push_str(&format!("{k},{i},{j},{}\n", self.get(k, i, j)));
                }
            }
        }
        s
    }

    /// Nonzero entries as `[k, i, j, p]` quadruples.
    pub fn nonzero(&self) -> Vec<[u64; 4]> {
        let r = self.r as u32;
        let mut out = Vec::new();
        for k in 0..r {
            for i in 0..r {
                for j in 0..r {
                    let p = self.get(k, i, j);
                    if p != 0 {
                        out.push([k as u64, i as u64, j as u64, p]);
                    }
                }
            }
        }
        out
    }
}

fn count_table(s: &SchemeInstance, x: usize, y: usize, buf: &mut [u64]) {
    let r = s.label_count();
    buf.fill(0);
    for z in 0..s.size {
        let i = s.relation(x, z) as usize;
        let j = s.relation(z, y) as usize;
        buf[i * r + j] += 1;
    }
}

/// Checks the association-scheme axioms.
///
/// Up to `exhaustive_limit` points every pair is checked (cubic work).
/// Above it, `samples` is a budget of `(x, y, z)` triples: `⌈samples / |Ω|⌉`
/// seeded random pairs each get a full z-count compared against the
/// reference pair of their label. References come from row 0, which is also
/// checked for the partition, diagonal and transpose conditions.
pub fn verify_scheme(s: &SchemeInstance, opts: &VerifyOptions) -> SchemeVerdict {
    let n = s.size;
    let r = s.label_count();
    let exhaustive = n <= opts.exhaustive_limit;
    let mode = if exhaustive { CheckMode::Exhaustive } else { CheckMode::Sampled };

    // sampled pairs first, then the rest of row 0
    let (pairs, sampled) = if exhaustive {
        (Vec::new(), 0)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut v: Vec<(usize, usize)> = (0..opts.samples.div_ceil(n).max(1))
            .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
            .collect();
        v.sort_unstable();
        v.dedup();
        let sampled = v.len();
        let row0: Vec<(usize, usize)> = (0..n).map(|y| (0, y)).filter(|p| v.binary_search(p).is_err()).collect();
        v.extend(row0);
        (v, sampled)
    };
    let pair_count = if exhaustive { n * n } else { pairs.len() };
    let constancy_count = if exhaustive { n * n } else { sampled };
    let pair_at = |t: usize| if exhaustive { (t / n.max(1), t % n.max(1)) } else { pairs[t] };

    // partition, diagonal
    let bad = par::find_map_first(opts.mode, pair_count, |t| {
        let (x, y) = pair_at(t);
        let l = s.relation(x, y);
        if l as usize >= r {
            return Some(Counterexample::UnknownLabel { x, y, label: l });
        }
        if (l == 0) != (x == y) {
            return Some(Counterexample::Diagonal { x, y, label: l });
        }
        None
    });
    if let Some(c) = bad {
        return SchemeVerdict::invalid(mode, 0, c);
    }
    if n > 0 && r == 0 {
        return SchemeVerdict::invalid(mode, 0, Counterexample::EmptyRelation { label: 0 });
    }

    // reference pair per label: lowest in scan order
    let mut reference: Vec<Option<(usize, usize)>> = vec![None; r];
    let mut seen = 0;
    for t in 0..pair_count {
        let (x, y) = pair_at(t);
        let l = s.relation(x, y) as usize;
        if reference[l].is_none() {
            reference[l] = Some((x, y));
            seen += 1;
            if seen == r {
                break;
            }
        }
    }
    if let Some(l) = reference.iter().position(Option::is_none) {
        return SchemeVerdict::invalid(mode, 0, Counterexample::EmptyRelation { label: l as u32 });
    }
    let reference: Vec<(usize, usize)> = reference.into_iter().map(Option::unwrap).collect();

    // transpose closure
    let transpose: Vec<u32> = reference.iter().map(|&(x, y)| s.relation(y, x)).collect();
    let bad = par::find_map_first(opts.mode, pair_count, |t| {
        let (x, y) = pair_at(t);
        let l = s.relation(x, y);
        let found = s.relation(y, x);
        let expected = transpose[l as usize];
        (found != expected).then_some(Counterexample::Transpose { label: l, x, y, expected, found })
    });
    if let Some(c) = bad {
        return SchemeVerdict::invalid(mode, 0, c);
    }

    // constancy of the z-count tables
    let reference_tables: Vec<Vec<u64>> = par::map_range(opts.mode, r, |k| {
        let mut buf = vec![0u64; r * r];
        let (x, y) = reference[k];
        count_table(s, x, y, &mut buf);
        buf
    });
    let bad = par::find_map_first(opts.mode, constancy_count, |t| {
        let (x, y) = pair_at(t);
        let k = s.relation(x, y) as usize;
        if reference[k] == (x, y) {
            return None;
        }
        let mut buf = vec![0u64; r * r];
        count_table(s, x, y, &mut buf);
        let want = &reference_tables[k];
        (0..r * r).find(|&c| buf[c] != want[c]).map(|c| Counterexample::Constancy {
            k: k as u32,
            i: (c / r) as u32,
            j: (c % r) as u32,
            x,
            y,
            reference: reference[k],
            expected: want[c],
            found: buf[c],
        })
    });
    if let Some(c) = bad {
        return SchemeVerdict::invalid(mode, constancy_count as u64, c);
    }

    let table: Vec<u64> = reference_tables.into_iter().flatten().collect();
    let numbers = IntersectionNumbers { r, table };
    let valencies = (0..r as u32).map(|i| numbers.get(0, i, transpose[i as usize])).collect();
    let symmetric = transpose.iter().enumerate().all(|(i, &t)| t as usize == i);
    SchemeVerdict {
        status: VerdictStatus::Valid,
        mode,
        pairs_checked: constancy_count as u64,
        counterexample: None,
        parameters: Some(Parameters {
            labels: s.labels.clone(),
            transpose,
            valencies,
            symmetric,
            intersection_numbers: numbers,
        }),
    }
}

/// Every relation equals its transpose (direct pair scan).
pub fn is_symmetric(s: &SchemeInstance, mode: Parallelism) -> bool {
    let n = s.size;
    par::find_map_first(mode, n, |x| (x + 1..n).find(|&y| s.relation(x, y) != s.relation(y, x)))
        .is_none()
}

/// Out-degree of point 0 in each relation.
pub fn valencies(s: &SchemeInstance) -> Vec<u64> {
    let mut v = vec![0u64; s.label_count()];
    if s.size > 0 {
        for y in 0..s.size {
            v[s.relation(0, y) as usize] += 1;
        }
    }
    v
}

/// Equality and inequality on `q` points.
pub fn one_class_scheme(q: usize) -> Result<SchemeInstance> {
    if q < 2 {
        return Err(Error::InvalidScheme(format!("a one-class scheme needs at least 2 points, got {q}")));
    }
    let table = (0..q * q).map(|t| u32::from(t / q != t % q)).collect();
    SchemeInstance::from_table(q, vec!["=".into(), "≠".into()], table)
}

/// Scheme on Z/k with `(x, y)` labeled by `y − x mod k`.
pub fn cyclic_difference_scheme(k: usize) -> Result<SchemeInstance> {
    if k < 2 {
        return Err(Error::InvalidScheme(format!("Z/{k} has no nonidentity class")));
    }
    let table = (0..k * k).map(|t| ((t % k + k - t / k) % k) as u32).collect();
    SchemeInstance::from_table(k, (0..k).map(|d| format!("+{d}")).collect(), table)
}

/// Whether `b` is `a` with labels renamed by `map` (`map[0] = 0`, injective).
pub fn equal_under_relabeling(a: &SchemeInstance, b: &SchemeInstance, map: &[u32], mode: Parallelism) -> bool {
    if a.size != b.size || map.len() != a.label_count() || map.first().is_some_and(|&z| z != 0) {
        return false;
    }
    let mut seen = vec![false; b.label_count()];
    for &t in map {
        match seen.get_mut(t as usize) {
            Some(s) if !*s => *s = true,
            _ => return false,
        }
    }
    let n = a.size;
    par::find_map_first(mode, n, |x| {
        (0..n).find(|&y| map[a.relation(x, y) as usize] != b.relation(x, y))
    })
    .is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> VerifyOptions {
        VerifyOptions::default()
    }

    #[test]
    fn one_class_on_three_points() {
        let s = one_class_scheme(3).unwrap();
        let v = verify_scheme(&s, &opts());
        assert!(v.is_valid());
        let p = v.parameters.unwrap();
        // for x ≠ y, z must differ from both: 3 − 2 = 1
        assert_eq!(p.intersection_numbers.get(1, 1, 1), 1);
        assert_eq!(p.valencies, vec![1, 2]);
        assert!(p.symmetric);
        assert!(is_symmetric(&s, Parallelism::Sequential));
        assert!(one_class_scheme(1).is_err());
        assert_eq!(one_class_scheme(2).unwrap().size(), 2);
    }

    #[test]
    fn one_point_scheme() {
        let s = SchemeInstance::from_table(1, vec!["=".into()], vec![0]).unwrap();
        let v = verify_scheme(&s, &opts());
        assert!(v.is_valid());
        assert_eq!(v.parameters.unwrap().labels.len(), 1);
        assert!(is_symmetric(&s, Parallelism::Parallel));
    }

    #[test]
    fn cyclic_scheme_is_valid_but_not_symmetric() {
        let s = cyclic_difference_scheme(3).unwrap();
        let v = verify_scheme(&s, &opts());
        assert!(v.is_valid());
        let p = v.parameters.unwrap();
        assert_eq!(p.transpose, vec![0, 2, 1]);
        assert!(!p.symmetric);
        assert!(!is_symmetric(&s, Parallelism::Sequential));
        // p^1_{2,2}: z − x = 2, y − z = 2 gives y − x = 4 ≡ 1
        assert_eq!(p.intersection_numbers.get(1, 2, 2), 1);
        assert_eq!(p.intersection_numbers.get(1, 1, 1), 0);
    }

    #[test]
    fn corrupted_pair_is_caught() {
        let s = one_class_scheme(4).unwrap();
        let bad = s.with_relabeled(1, 2, 0);
        let v = verify_scheme(&bad, &opts());
        assert_eq!(v.status, VerdictStatus::Invalid);
        assert!(matches!(v.counterexample, Some(Counterexample::Diagonal { x: 1, y: 2, .. })));
        let off = s.with_relabeled(0, 0, 1);
        assert!(matches!(
            verify_scheme(&off, &opts()).counterexample,
            Some(Counterexample::Diagonal { x: 0, y: 0, .. })
        ));
        let unknown = s.with_relabeled(0, 1, 7);
        assert!(matches!(
            verify_scheme(&unknown, &opts()).counterexample,
            Some(Counterexample::UnknownLabel { .. })
        ));
    }

    #[test]
    fn transpose_and_constancy_faults() {
        // a third label on a single ordered pair breaks transpose closure
        let mut labels: Vec<String> = one_class_scheme(4).unwrap().labels().to_vec();
        labels.push("x".into());
        let table = one_class_scheme(4).unwrap().to_table();
        let s = SchemeInstance::from_table(4, labels.clone(), table.clone()).unwrap();
        assert!(matches!(
            verify_scheme(&s, &opts()).counterexample,
            Some(Counterexample::EmptyRelation { label: 2 })
        ));
        let s = s.with_relabeled(0, 1, 2);
        assert!(matches!(
            verify_scheme(&s, &opts()).counterexample,
            Some(Counterexample::Transpose { .. })
        ));
        // symmetric relabeling keeps transpose closure but breaks constancy
        let s = s.with_relabeled(1, 0, 2);
        assert!(matches!(
            verify_scheme(&s, &opts()).counterexample,
            Some(Counterexample::Constancy { .. })
        ));
    }

    #[test]
    fn sampled_mode_agrees_on_valid_input() {
        let s = cyclic_difference_scheme(7).unwrap();
        let o = VerifyOptions { exhaustive_limit: 3, samples: 200, seed: 5, ..opts() };
        let v = verify_scheme(&s, &o);
        assert_eq!(v.mode, CheckMode::Sampled);
        assert!(v.is_valid());
        let full = verify_scheme(&s, &opts()).parameters.unwrap();
        assert_eq!(v.parameters.unwrap().intersection_numbers, full.intersection_numbers);
    }

    #[test]
    fn sample_budget_counts_triples() {
        let s = cyclic_difference_scheme(10).unwrap();
        let o = VerifyOptions { exhaustive_limit: 3, samples: 50, seed: 1, ..opts() };
        let v = verify_scheme(&s, &o);
        assert!(v.is_valid());
        assert!(v.pairs_checked <= 5);
        // a budget covering every pair many times over finds a planted fault
        let bad = s.with_relabeled(4, 7, 1).with_relabeled(7, 4, 9);
        let o = VerifyOptions { samples: 10 * 2000, ..o };
        assert!(!verify_scheme(&bad, &o).is_valid());
    }

    #[test]
    fn standard_identities() {
        for s in [one_class_scheme(5).unwrap(), cyclic_difference_scheme(5).unwrap()] {
            let p = verify_scheme(&s, &opts()).parameters.unwrap();
            let r = p.labels.len() as u32;
            for i in 0..r {
                for j in 0..r {
                    let want = if j == p.transpose[i as usize] { p.valencies[i as usize] } else { 0 };
                    assert_eq!(p.intersection_numbers.get(0, i, j), want);
                }
            }
            assert_eq!(p.valencies.iter().sum::<u64>(), s.size() as u64);
            assert_eq!(valencies(&s), p.valencies);
        }
    }

    #[test]
    fn computed_store_above_dense_limit() {
        let n = DENSE_LIMIT + 1;
        let s = SchemeInstance::from_fn(n, vec!["=".into(), "≠".into()], Parallelism::Parallel, |x, y| {
            u32::from(x != y)
        });
        assert!(!s.is_dense());
        assert_eq!(s.relation(3, 3), 0);
        let o = VerifyOptions { samples: 50, ..opts() };
        let v = verify_scheme(&s, &o);
        assert_eq!(v.mode, CheckMode::Sampled);
        assert!(v.is_valid());
    }

    #[test]
    fn relabeling_equivalence() {
        let a = cyclic_difference_scheme(3).unwrap();
        let t: Vec<u32> = a.to_table().iter().map(|&l| [0, 2, 1][l as usize]).collect();
        let b = SchemeInstance::from_table(3, a.labels().to_vec(), t).unwrap();
        assert!(equal_under_relabeling(&a, &b, &[0, 2, 1], Parallelism::Sequential));
        assert!(!equal_under_relabeling(&a, &b, &[0, 1, 2], Parallelism::Sequential));
        assert!(!equal_under_relabeling(&a, &b, &[1, 0, 2], Parallelism::Sequential));
    }

    #[test]
    fn csv_export() {
        let p = verify_scheme(&one_class_scheme(2).unwrap(), &opts()).parameters.unwrap();
        let csv = p.intersection_numbers.to_csv();
        assert!(csv.starts_with("k,i,j,p\n0,0,0,1\n"));
        assert_eq!(csv.lines().count(), 1 + 8);
        assert_eq!(p.intersection_numbers.nonzero().len(), 4);
    }

    #[test]
    fn modes_agree() {
        let s = cyclic_difference_scheme(6).unwrap();
        let a = verify_scheme(&s, &VerifyOptions { mode: Parallelism::Sequential, ..opts() });
        let b = verify_scheme(&s, &VerifyOptions { mode: Parallelism::Parallel, ..opts() });
        assert_eq!(a, b);
    }
}
