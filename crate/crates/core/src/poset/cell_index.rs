//! Indexing of Schubert cells of Gr(m, n) by anti-chains α ⊂ [n]×[m] of size
//! m, and of their relations by anti-chains of the free-coordinate poset D(α).
//!
//! D(α) is the part of the strict down-set of α lying in pivot-free rows. Its
//! row lengths, read top to bottom, form the partition λ = φ_m(α), and the
//! map `(i, j) ↦ (d_i, j)` identifies the Ferrers board of λ with D(α).

use super::{maximal_cells, FerrersPoset, Partition, Poset};
use crate::error::{Error, Result};
use crate::matrix::{PivotSet, Position};

/// Checks `1 ≤ m ≤ n−1`, `|α| = m` and `α ⊂ [n]×[m]`.
pub fn validate_alpha(alpha: &PivotSet, n: usize, m: usize) -> Result<()> {
    if m == 0 || m >= n {
        return Err(Error::InvalidCell(format!("need 1 ≤ m ≤ n−1, got n={n}, m={m}")));
    }
    if alpha.len() != m {
        return Err(Error::InvalidCell(format!("α has {} elements, expected {m}", alpha.len())));
    }
    if let Some(p) = alpha.iter().find(|p| p.row > n || p.col > m) {
        return Err(Error::InvalidCell(format!("{p} lies outside [{n}]×[{m}]")));
    }
    Ok(())
}

/// Rows of `[n]` holding no element of α, ascending.
pub fn d1_of_alpha(alpha: &PivotSet, n: usize, m: usize) -> Result<Vec<usize>> {
    validate_alpha(alpha, n, m)?;
    Ok((1..=n).filter(|&i| alpha.iter().all(|p| p.row != i)).collect())
}

/// D(α) as a row-major position list.
pub fn free_positions(alpha: &PivotSet, n: usize, m: usize) -> Result<Vec<Position>> {
    let rows = d1_of_alpha(alpha, n, m)?;
    let mut out = Vec::new();
    for &i in &rows {
        for j in 1..=n {
            let p = Position::new(i, j);
            if alpha.iter().any(|a| p.strictly_below(a)) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// D(α) with the product order.
pub fn d_of_alpha(alpha: &PivotSet, n: usize, m: usize) -> Result<Poset<Position>> {
    Poset::product_order(free_positions(alpha, n, m)?)
}

/// λ_i = number of free positions in the i-th pivot-free row.
pub fn phi(alpha: &PivotSet, n: usize, m: usize) -> Result<Partition> {
    let rows = d1_of_alpha(alpha, n, m)?;
    let free = free_positions(alpha, n, m)?;
    let parts = rows
        .iter()
        .map(|&r| free.iter().filter(|p| p.row == r).count() as u32)
        .collect();
    Partition::new(parts)
}

/// Inverse of [`phi`]: the maximal cells of the Ferrers board of
/// λ ∪ (m, m−1, …, 1). Shorter λ are padded with zeros.
pub fn phi_inverse(lambda: &Partition, n: usize, m: usize) -> Result<PivotSet> {
    if m == 0 || m >= n {
        return Err(Error::InvalidCell(format!("need 1 ≤ m ≤ n−1, got n={n}, m={m}")));
    }
    let lambda = lambda.with_len(n - m)?;
    if lambda.largest() > m as u32 {
        return Err(Error::InvalidPartition(format!("{lambda} has a part larger than {m}")));
    }
    let mut merged: Vec<u32> = lambda.parts().iter().copied().chain((1..=m as u32).rev()).collect();
    merged.sort_unstable_by(|a, b| b.cmp(a));
    let mu = Partition::new(merged)?;
    PivotSet::new(maximal_cells(&mu))
}

/// Order isomorphism ψ from the Ferrers board of φ_m(α) onto D(α).
#[derive(Debug, Clone)]
pub struct FerrersIso {
    board: FerrersPoset,
    free_rows: Vec<usize>,
    image: Poset<Position>,
}

impl FerrersIso {
    /// Builds ψ and verifies it is a bijection preserving and reflecting order.
    pub fn new(alpha: &PivotSet, n: usize, m: usize) -> Result<Self> {
        let board = FerrersPoset::new(phi(alpha, n, m)?);
        let free_rows = d1_of_alpha(alpha, n, m)?;
        let image = d_of_alpha(alpha, n, m)?;
        let iso = FerrersIso { board, free_rows, image };
        let mapped: Vec<Position> = iso.board.cells().iter().map(|&c| iso.apply(c)).collect();
        let fault = |what: &str| Error::InvalidCell(format!("ψ is not {what}"));
        if mapped.len() != iso.image.len() {
            return Err(fault("a bijection"));
        }
        let idx: Vec<usize> = mapped
            .iter()
            .map(|p| iso.image.index_of(p).ok_or_else(|| fault("onto D(α)")))
            .collect::<Result<_>>()?;
        let bp = iso.board.poset();
        for a in 0..bp.len() {
            for b in 0..bp.len() {
                if bp.le(a, b) != iso.image.le(idx[a], idx[b]) {
                    return Err(fault("an order isomorphism"));
                }
            }
        }
        Ok(iso)
    }

    /// ψ(i, j) = (d_i, j).
    pub fn apply(&self, cell: Position) -> Position {
        Position::new(self.free_rows[cell.row - 1], cell.col)
    }

    pub fn board(&self) -> &FerrersPoset {
        &self.board
    }

    pub fn image(&self) -> &Poset<Position> {
        &self.image
    }

    pub fn free_rows(&self) -> &[usize] {
        &self.free_rows
    }
}

/// ρ(μ) = ψ(max(μ)): the anti-chain of D(α) attached to a subpartition μ of φ_m(α).
pub fn rho(mu: &Partition, alpha: &PivotSet, n: usize, m: usize) -> Result<PivotSet> {
    let iso = FerrersIso::new(alpha, n, m)?;
    let lambda = iso.board().shape();
    if !mu.is_subpartition_of(lambda) {
        return Err(Error::InvalidPartition(format!("{mu} is not a subpartition of {lambda}")));
    }
    PivotSet::new(maximal_cells(mu).into_iter().map(|c| iso.apply(c)).collect())
}
