//! Schubert cells O_α of Gr(m, n): descriptors, points as free coordinates,
//! the relation label Piv(M − N), randomized action trials, and the scheme X_α.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::matrix::{
    borel_act, invert_borel, base_point_witness, pair_witness, pivot_set_of_difference, random_borel, Matrix,
    PivotSet, Position,
};
use crate::par::{self, Parallelism};
use crate::poset::{d1_of_alpha, d_of_alpha, free_positions, phi, phi_inverse, Partition, Poset};
use crate::scheme::SchemeInstance;

/// Default cap on the number of points materialized by [`enumerate_cell`].
pub const ENUMERATION_BOUND: u128 = 1 << 16;

/// A cell of Gr(m, n) with all derived indexing data.
#[derive(Debug, Clone)]
pub struct CellDescriptor {
    n: usize,
    m: usize,
    alpha: PivotSet,
    free: Vec<Position>,
    free_poset: Poset<Position>,
    lambda: Partition,
    free_rows: Vec<usize>,
}

/// How a cell is selected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellSelector {
    Alpha(PivotSet),
    Lambda(Partition),
}

impl CellDescriptor {
    pub fn new(n: usize, m: usize, selector: &CellSelector) -> Result<Self> {
        let alpha = match selector {
            CellSelector::Alpha(a) => a.clone(),
            CellSelector::Lambda(l) => phi_inverse(l, n, m)?,
        };
        let free = free_positions(&alpha, n, m)?;
        let free_poset = d_of_alpha(&alpha, n, m)?;
        let lambda = phi(&alpha, n, m)?;
        let free_rows = d1_of_alpha(&alpha, n, m)?;
        Ok(CellDescriptor { n, m, alpha, free, free_poset, lambda, free_rows })
    }

    pub fn from_alpha(n: usize, m: usize, alpha: PivotSet) -> Result<Self> {
        CellDescriptor::new(n, m, &CellSelector::Alpha(alpha))
    }

    pub fn from_lambda(n: usize, m: usize, lambda: Partition) -> Result<Self> {
        CellDescriptor::new(n, m, &CellSelector::Lambda(lambda))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn alpha(&self) -> &PivotSet {
        &self.alpha
    }

    /// D(α) in row-major order; coordinate t of a point lives at `free()[t]`.
    pub fn free(&self) -> &[Position] {
        &self.free
    }

    pub fn free_poset(&self) -> &Poset<Position> {
        &self.free_poset
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn free_rows(&self) -> &[usize] {
        &self.free_rows
    }

    /// `|D(α)| = |λ|`.
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// `q^{|λ|}`, or `None` on overflow.
    pub fn size(&self, q: u32) -> Option<u128> {
        (q as u128).checked_pow(self.dimension() as u32)
    }

    fn free_index(&self, p: Position) -> Option<usize> {
        self.free.binary_search(&p).ok()
    }

    /// Bitmask over free coordinates of an anti-chain of D(α).
    pub fn mask_of(&self, beta: &PivotSet) -> Result<u64> {
        if self.dimension() > 64 {
            return Err(Error::PosetTooLarge { size: self.dimension(), bound: 64 });
        }
        beta.iter().try_fold(0u64, |acc, p| {
            self.free_index(p)
                .map(|t| acc | 1 << t)
                .ok_or_else(|| Error::InvalidCell(format!("{p} is not a free position")))
        })
    }

    /// All anti-chains β of D(α) in the poset's enumeration order (∅ first).
    pub fn relation_labels(&self) -> Result<Vec<PivotSet>> {
        let p = &self.free_poset;
        p.antichains()?
            .iter()
            .map(|y| PivotSet::new(y.members().iter().map(|&i| *p.element(i)).collect()))
            .collect()
    }

    /// `(q − 1)^{|β|} · q^{|Down(β)|}` with Down taken inside D(α).
    pub fn valency_formula(&self, beta: &PivotSet, q: u32) -> Result<u128> {
        let down = self.free.iter().filter(|p| beta.iter().any(|b| p.strictly_below(b))).count();
        let q = q as u128;
        (q - 1)
            .checked_pow(beta.len() as u32)
            .and_then(|a| q.checked_pow(down as u32).and_then(|b| a.checked_mul(b)))
            .ok_or(Error::SizeBoundExceeded { size: u128::MAX, bound: u128::MAX })
    }
}

/// Every cell of Gr(m, n), one per m-subset of pivot rows (listed in
/// lexicographic order of the subset). The pivot in column j is in the
/// j-th largest chosen row.
pub fn all_cells(n: usize, m: usize) -> Result<Vec<CellDescriptor>> {
    if m == 0 || m >= n {
        return Err(Error::InvalidCell(format!("need 1 ≤ m ≤ n−1, got n={n}, m={m}")));
    }
    let mut out = Vec::new();
    let mut rows: Vec<usize> = (1..=m).collect();
    loop {
        let alpha = PivotSet::new(
            rows.iter().rev().enumerate().map(|(j, &r)| Position::new(r, j + 1)).collect(),
        )?;
        out.push(CellDescriptor::from_alpha(n, m, alpha)?);
        // next combination
        let Some(i) = (0..m).rev().find(|&i| rows[i] < n - (m - 1 - i)) else {
            break;
        };
        rows[i] += 1;
        for t in i + 1..m {
            rows[t] = rows[t - 1] + 1;
        }
    }
    Ok(out)
}

/// Free coordinates of a point, aligned with [`CellDescriptor::free`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellPoint {
    pub coords: Vec<FieldElement>,
}

impl CellPoint {
    pub fn zero(cell: &CellDescriptor) -> Self {
        CellPoint { coords: vec![FieldElement::ZERO; cell.dimension()] }
    }

    pub fn random<R: Rng + ?Sized>(cell: &CellDescriptor, field: &FiniteField, rng: &mut R) -> Self {
        CellPoint { coords: (0..cell.dimension()).map(|_| field.random_element(rng)).collect() }
    }
}

/// RRCEF matrix with ones on α, the coordinates on D(α) and zeros elsewhere.
pub fn point_to_matrix(cell: &CellDescriptor, point: &CellPoint) -> Result<Matrix> {
    if point.coords.len() != cell.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, cell has {}",
            point.coords.len(),
            cell.dimension()
        )));
    }
    let mut m = Matrix::indicator(cell.n, cell.alpha.iter());
    for (p, &v) in cell.free.iter().zip(&point.coords) {
        m.set(*p, v);
    }
    Ok(m)
}

/// Inverse of [`point_to_matrix`]; errors unless M is RRCEF with pivot set α.
pub fn matrix_to_point(cell: &CellDescriptor, m: &Matrix) -> Result<CellPoint> {
    if m.rows() != cell.n || !m.is_square() {
        return Err(Error::DimensionMismatch(format!("expected {0}x{0}", cell.n)));
    }
    if !m.is_rrcef() {
        return Err(Error::NotEchelon);
    }
    let piv = m.pivot_set();
    if piv != cell.alpha {
        return Err(Error::PivotSetsDiffer(piv.to_string(), cell.alpha.to_string()));
    }
    Ok(CellPoint { coords: cell.free.iter().map(|&p| m.get(p)).collect() })
}

/// Point with mixed-radix index `t` (base q, last coordinate fastest).
pub fn point_at(cell: &CellDescriptor, field: &FiniteField, mut t: u128) -> CellPoint {
    let q = field.order() as u128;
    let mut coords = vec![FieldElement::ZERO; cell.dimension()];
    for c in coords.iter_mut().rev() {
        *c = field.element((t % q) as u32).expect("digit below q");
        t /= q;
    }
    CellPoint { coords }
}

/// Mixed-radix index of a point (inverse of [`point_at`]).
pub fn point_index(field: &FiniteField, point: &CellPoint) -> u128 {
    let q = field.order() as u128;
    point.coords.iter().fold(0u128, |acc, c| acc * q + c.index() as u128)
}

/// All `q^{|D(α)|}` points in mixed-radix order.
pub fn enumerate_cell(cell: &CellDescriptor, field: &FiniteField, bound: u128) -> Result<Vec<CellPoint>> {
    let size = cell.size(field.order()).unwrap_or(u128::MAX);
    if size > bound {
        return Err(Error::SizeBoundExceeded { size, bound });
    }
    Ok((0..size).map(|t| point_at(cell, field, t)).collect())
}

/// `Piv(M − N)` computed on the full RRCEF representatives.
pub fn relation_label_matrices(cell: &CellDescriptor, m: &Matrix, n_mat: &Matrix) -> Result<PivotSet> {
    if m.pivot_set() != cell.alpha || n_mat.pivot_set() != cell.alpha {
        return Err(Error::CellMismatch);
    }
    Ok(pivot_set_of_difference(m, n_mat))
}

/// `Piv(M − N)` for two points of the cell.
pub fn relation_label(cell: &CellDescriptor, a: &CellPoint, b: &CellPoint) -> Result<PivotSet> {
    if a.coords.len() != cell.dimension() || b.coords.len() != cell.dimension() {
        return Err(Error::CellMismatch);
    }
    Ok(pivot_set_of_difference(&point_to_matrix(cell, a)?, &point_to_matrix(cell, b)?))
}

/// Outcome of a batch of randomized trials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn collect(results: Vec<std::result::Result<(), String>>) -> Self {
        let trials = results.len();
        let failures = results.iter().filter(|r| r.is_err()).count();
        let first_failure = results.into_iter().find_map(|r| r.err());
        TrialReport { trials, failures, first_failure }
    }
}

/// Independent per-trial generator: same seed, stream `t`.
pub(crate) fn trial_rng(seed: u64, t: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t as u64);
    rng
}

fn run_trials<F>(trials: usize, mode: Parallelism, seed: u64, f: F) -> TrialReport
where
    F: Fn(&mut ChaCha8Rng) -> std::result::Result<(), String> + Sync + Send,
{
    TrialReport::collect(par::map_range(mode, trials, |t| f(&mut trial_rng(seed, t))))
}

/// `Piv(borel_act(G, M)) = α` for random M in the cell and random G ∈ B.
pub fn pivot_invariance_trial(
    cell: &CellDescriptor,
    field: &FiniteField,
    trials: usize,
    seed: u64,
    mode: Parallelism,
) -> TrialReport {
    run_trials(trials, mode, seed, |rng| {
        let m = point_to_matrix(cell, &CellPoint::random(cell, field, rng)).map_err(|e| e.to_string())?;
        let g = random_borel(cell.n, field, rng);
        let moved = borel_act(&g, &m, field).map_err(|e| e.to_string())?;
        let piv = moved.pivot_set();
        (piv == cell.alpha).then_some(()).ok_or_else(|| format!("pivot set moved to {piv}"))
    })
}

/// `Piv(M′ − N′) = Piv(M − N)` where `(M′, N′)` is the diagonal image of a
/// random pair under a random `G ∈ B`.
pub fn orbital_invariance_trial(
    cell: &CellDescriptor,
    field: &FiniteField,
    trials: usize,
    seed: u64,
    mode: Parallelism,
) -> TrialReport {
    run_trials(trials, mode, seed, |rng| {
        let a = CellPoint::random(cell, field, rng);
        let b = CellPoint::random(cell, field, rng);
        let g = random_borel(cell.n, field, rng);
        label_preserved(cell, field, &g, &a, &b)
    })
}

fn label_preserved(
    cell: &CellDescriptor,
    field: &FiniteField,
    g: &Matrix,
    a: &CellPoint,
    b: &CellPoint,
) -> std::result::Result<(), String> {
    let err = |e: Error| e.to_string();
    let m = point_to_matrix(cell, a).map_err(err)?;
    let n = point_to_matrix(cell, b).map_err(err)?;
    let m2 = borel_act(g, &m, field).map_err(err)?;
    let n2 = borel_act(g, &n, field).map_err(err)?;
    let before = relation_label_matrices(cell, &m, &n).map_err(err)?;
    let after = relation_label_matrices(cell, &m2, &n2).map_err(err)?;
    (before == after).then_some(()).ok_or_else(|| format!("label {before} became {after}"))
}

/// `borel_act(G_M · G_N⁻¹, N) = M` with `G_M`, `G_N` the pivot-matrix witnesses.
pub fn transitivity_trial(
    cell: &CellDescriptor,
    field: &FiniteField,
    trials: usize,
    seed: u64,
    mode: Parallelism,
) -> TrialReport {
    run_trials(trials, mode, seed, |rng| {
        let a = CellPoint::random(cell, field, rng);
        let b = CellPoint::random(cell, field, rng);
        transport(cell, field, &a, &b).map(|_| ())
    })
}

/// Explicit `G ∈ B` with `borel_act(G, N) = M` for points M = `a`, N = `b`.
pub fn transport(cell: &CellDescriptor, field: &FiniteField, a: &CellPoint, b: &CellPoint) -> std::result::Result<Matrix, String> {
    let err = |e: Error| e.to_string();
    let m = point_to_matrix(cell, a).map_err(err)?;
    let n = point_to_matrix(cell, b).map_err(err)?;
    let wm = base_point_witness(&m, field).map_err(err)?;
    let wn = base_point_witness(&n, field).map_err(err)?;
    let g = wm.g.mul(&invert_borel(&wn.g, field).map_err(err)?, field).map_err(err)?;
    let image = borel_act(&g, &n, field).map_err(err)?;
    if image != m {
        return Err("borel_act(G_M·G_N⁻¹, N) ≠ M".into());
    }
    Ok(g)
}

/// Runs the pair witness construction on random pairs and checks both
/// identities `N = G·Y` and `M = G·X`.
pub fn pair_witness_trial(
    cell: &CellDescriptor,
    field: &FiniteField,
    trials: usize,
    seed: u64,
    mode: Parallelism,
) -> TrialReport {
    run_trials(trials, mode, seed, |rng| {
        let a = CellPoint::random(cell, field, rng);
        let b = CellPoint::random(cell, field, rng);
        let err = |e: Error| e.to_string();
        let m = point_to_matrix(cell, &a).map_err(err)?;
        let n = point_to_matrix(cell, &b).map_err(err)?;
        pair_witness(&m, &n, field)
            .map(|_| ())
            .map_err(|e| format!("M={:?} N={:?}: {e}", m.to_index_rows(), n.to_index_rows()))
    })
}

/// The scheme X_α = (O_α, {R_β}) together with its label list.
#[derive(Debug, Clone)]
pub struct CellScheme {
    pub cell: CellDescriptor,
    /// `labels[i]` is the anti-chain β of relation i; `labels[0] = ∅`.
    pub labels: Vec<PivotSet>,
    pub scheme: SchemeInstance,
}

/// Builds X_α on the mixed-radix enumeration of the cell. The label of a
/// pair is `Piv(M − N)` computed on the two RRCEF matrices.
pub fn cell_scheme(cell: &CellDescriptor, field: &FiniteField, bound: u128, mode: Parallelism) -> Result<CellScheme> {
    let points = enumerate_cell(cell, field, bound)?;
    let matrices: Vec<Matrix> = points.iter().map(|p| point_to_matrix(cell, p)).collect::<Result<_>>()?;
    let labels = cell.relation_labels()?;
    let mut id_of_mask = HashMap::with_capacity(labels.len());
    for (i, b) in labels.iter().enumerate() {
        id_of_mask.insert(cell.mask_of(b)?, i as u32);
    }
    let names = labels.iter().map(ToString::to_string).collect();
    let matrices = Arc::new(matrices);
    let lookup_cell = cell.clone();
    let f = move |x: usize, y: usize| {
        let beta = pivot_set_of_difference(&matrices[x], &matrices[y]);
        let mask = lookup_cell.mask_of(&beta).expect("Piv(M − N) lies in D(α)");
        *id_of_mask.get(&mask).expect("Piv(M − N) is an anti-chain of D(α)")
    };
    let scheme = SchemeInstance::from_fn(points.len(), names, mode, f);
    Ok(CellScheme { cell: cell.clone(), labels, scheme })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{valencies, verify_scheme, VerifyOptions};

    fn gf(p: u32) -> FiniteField {
        FiniteField::prime(p).unwrap()
    }

    fn example_cell() -> CellDescriptor {
        CellDescriptor::from_alpha(7, 4, PivotSet::from_pairs(&[(2, 4), (4, 3), (5, 2), (7, 1)]).unwrap()).unwrap()
    }

    fn example_matrix(f: &FiniteField) -> Matrix {
        Matrix::from_rows(
            f,
            &[
                vec![4, 7, 1, 3, 0, 0, 0],
                vec![0, 0, 0, 1, 0, 0, 0],
                vec![3, 4, 5, 0, 0, 0, 0],
                vec![0, 0, 1, 0, 0, 0, 0],
                vec![0, 1, 0, 0, 0, 0, 0],
                vec![2, 0, 0, 0, 0, 0, 0],
                vec![1, 0, 0, 0, 0, 0, 0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn descriptor_sizes() {
        let c = example_cell();
        assert_eq!(c.size(2), Some(256));
        assert_eq!(enumerate_cell(&c, &gf(2), ENUMERATION_BOUND).unwrap().len(), 256);
        let small = CellDescriptor::from_alpha(2, 1, PivotSet::from_pairs(&[(2, 1)]).unwrap()).unwrap();
        assert_eq!(small.size(3), Some(3));
        let top = CellDescriptor::from_lambda(4, 2, Partition::zeros(2)).unwrap();
        assert_eq!(top.size(5), Some(1));
        assert_eq!(enumerate_cell(&top, &gf(5), 10).unwrap(), vec![CellPoint { coords: vec![] }]);
        assert!(CellDescriptor::from_alpha(2, 2, PivotSet::from_pairs(&[(2, 1), (1, 2)]).unwrap()).is_err());
        assert!(CellDescriptor::from_alpha(4, 2, PivotSet::from_pairs(&[(3, 1)]).unwrap()).is_err());
        assert_eq!(
            CellDescriptor::from_lambda(7, 4, Partition::new(vec![4, 3, 1]).unwrap()).unwrap().alpha(),
            c.alpha()
        );
    }

    #[test]
    fn enumeration_order_and_bound() {
        let c = CellDescriptor::from_alpha(3, 1, PivotSet::from_pairs(&[(3, 1)]).unwrap()).unwrap();
        let f = gf(2);
        let pts = enumerate_cell(&c, &f, ENUMERATION_BOUND).unwrap();
        let idx: Vec<Vec<u32>> = pts.iter().map(|p| p.coords.iter().map(|e| e.index()).collect()).collect();
        assert_eq!(idx, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        for (t, p) in pts.iter().enumerate() {
            assert_eq!(point_index(&f, p), t as u128);
        }
        assert!(matches!(
            enumerate_cell(&c, &f, 3),
            Err(Error::SizeBoundExceeded { size: 4, bound: 3 })
        ));
    }

    #[test]
    fn example_point_round_trip() {
        let f = gf(11);
        let c = example_cell();
        let m = example_matrix(&f);
        let p = matrix_to_point(&c, &m).unwrap();
        let coords: Vec<u32> = p.coords.iter().map(|e| e.index()).collect();
        assert_eq!(coords, vec![4, 7, 1, 3, 3, 4, 5, 2]);
        assert_eq!(point_to_matrix(&c, &p).unwrap(), m);
        let x = point_to_matrix(&c, &CellPoint::zero(&c)).unwrap();
        assert_eq!(x, Matrix::indicator(7, c.alpha().iter()));
        assert_eq!(matrix_to_point(&c, &x).unwrap(), CellPoint::zero(&c));
        assert!(matches!(matrix_to_point(&c, &Matrix::identity(7)), Err(Error::NotEchelon)));
    }

    #[test]
    fn random_points_are_cell_members() {
        let f = gf(3);
        let c = CellDescriptor::from_lambda(6, 3, Partition::new(vec![3, 2, 2]).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let p = CellPoint::random(&c, &f, &mut rng);
            let m = point_to_matrix(&c, &p).unwrap();
            assert!(m.is_rrcef());
            assert_eq!(&m.pivot_set(), c.alpha());
            assert_eq!(matrix_to_point(&c, &m).unwrap(), p);
        }
    }

    #[test]
    fn relation_label_examples() {
        let f = gf(2);
        let c = example_cell();
        let z = CellPoint::zero(&c);
        assert!(relation_label(&c, &z, &z).unwrap().is_empty());
        let mut one = z.clone();
        one.coords[7] = f.one();
        assert_eq!(relation_label(&c, &one, &z).unwrap(), PivotSet::from_pairs(&[(6, 1)]).unwrap());
        // paired construction: ones on α ∪ β against ones on α gives label β
        for beta in c.relation_labels().unwrap() {
            let m = Matrix::indicator(7, c.alpha().iter().chain(beta.iter()));
            let n = Matrix::indicator(7, c.alpha().iter());
            assert_eq!(relation_label_matrices(&c, &m, &n).unwrap(), beta);
        }
        let other = CellDescriptor::from_lambda(7, 4, Partition::zeros(3)).unwrap();
        let x = point_to_matrix(&other, &CellPoint::zero(&other)).unwrap();
        assert_eq!(
            relation_label_matrices(&c, &point_to_matrix(&c, &z).unwrap(), &x),
            Err(Error::CellMismatch)
        );
    }

    #[test]
    fn labels_are_symmetric_and_separate_points() {
        let f = gf(3);
        let c = CellDescriptor::from_lambda(5, 2, Partition::new(vec![2, 1, 1]).unwrap()).unwrap();
        let pts = enumerate_cell(&c, &f, ENUMERATION_BOUND).unwrap();
        for a in &pts {
            for b in &pts {
                let l = relation_label(&c, a, b).unwrap();
                assert_eq!(l, relation_label(&c, b, a).unwrap());
                assert_eq!(l.is_empty(), a == b);
                let members: Vec<usize> =
                    l.iter().map(|p| c.free_poset().index_of(&p).expect("label inside D(α)")).collect();
                assert!(c.free_poset().is_antichain(&members));
            }
        }
    }

    #[test]
    fn all_cells_cover_the_grassmannian() {
        // oracle: Gaussian binomial product formula
        let cells = all_cells(4, 2).unwrap();
        assert_eq!(cells.len(), 6);
        let total: u128 = cells.iter().map(|c| c.size(3).unwrap()).sum();
        assert_eq!(total, 80 * 26 / (8 * 2));
        let pts: usize = cells.iter().map(|c| enumerate_cell(c, &gf(3), ENUMERATION_BOUND).unwrap().len()).sum();
        assert_eq!(pts, 130);
        assert!(all_cells(3, 3).is_err());
        assert_eq!(all_cells(2, 1).unwrap().len(), 2);
    }

    #[test]
    fn trials_pass_on_small_cells() {
        let f = gf(3);
        let mode = Parallelism::Parallel;
        for c in all_cells(4, 2).unwrap() {
            assert!(pivot_invariance_trial(&c, &f, 200, 1, mode).passed());
            assert!(orbital_invariance_trial(&c, &f, 200, 2, mode).passed());
            assert!(transitivity_trial(&c, &f, 200, 3, mode).passed());
        }
        let g = gf(2);
        let c = example_cell();
        assert_eq!(orbital_invariance_trial(&c, &g, 100, 4, mode).failures, 0);
        assert_eq!(transitivity_trial(&c, &g, 100, 5, mode).failures, 0);
    }

    #[test]
    fn identity_action_preserves_labels() {
        let f = gf(3);
        let c = CellDescriptor::from_lambda(4, 2, Partition::new(vec![2, 1]).unwrap()).unwrap();
        let id = Matrix::identity(4);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let a = CellPoint::random(&c, &f, &mut rng);
            let b = CellPoint::random(&c, &f, &mut rng);
            assert!(label_preserved(&c, &f, &id, &a, &b).is_ok());
        }
        let a = CellPoint::random(&c, &f, &mut rng);
        assert_eq!(transport(&c, &f, &a, &a).unwrap(), Matrix::identity(4));
    }

    #[test]
    fn trial_reports_are_mode_independent() {
        let f = gf(2);
        let c = CellDescriptor::from_lambda(4, 2, Partition::new(vec![2, 0]).unwrap()).unwrap();
        let a = pair_witness_trial(&c, &f, 300, 9, Parallelism::Sequential);
        let b = pair_witness_trial(&c, &f, 300, 9, Parallelism::Parallel);
        assert_eq!(a, b);
        assert_eq!(a.trials, 300);
    }

    #[test]
    fn example_cell_scheme_valencies_match_formula() {
        let f = gf(2);
        let c = example_cell();
        let cs = cell_scheme(&c, &f, ENUMERATION_BOUND, Parallelism::Parallel).unwrap();
        assert_eq!(cs.labels.len(), 23);
        assert!(cs.labels[0].is_empty());
        let v = valencies(&cs.scheme);
        for (beta, &n) in cs.labels.iter().zip(&v) {
            assert_eq!(n as u128, c.valency_formula(beta, 2).unwrap(), "β = {beta}");
        }
        assert_eq!(v.iter().sum::<u64>(), 256);
    }

    #[test]
    fn small_cell_scheme_is_one_class() {
        let f = gf(3);
        let c = CellDescriptor::from_alpha(2, 1, PivotSet::from_pairs(&[(2, 1)]).unwrap()).unwrap();
        let cs = cell_scheme(&c, &f, ENUMERATION_BOUND, Parallelism::Sequential).unwrap();
        let v = verify_scheme(&cs.scheme, &VerifyOptions::default());
        let p = v.parameters.unwrap();
        assert_eq!(p.labels, vec!["{}".to_string(), "{(1,1)}".to_string()]);
        assert_eq!(p.intersection_numbers.get(1, 1, 1), 1);
    }
}
