//! Dense matrices over GF(q) and the reduced reverse column echelon form.
//!
//! A subspace of F^n is represented by the unique n×n matrix in reduced
//! reverse column echelon form (RRCEF) whose column space it is: nonzero
//! columns first, the bottom-most nonzero entry of each column ("pivot")
//! strictly below the pivot of the next column, every pivot equal to 1 and
//! alone in its row. Positions are 1-based `(row, column)` pairs ordered by the
//! product order.

use std::fmt;

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};

/// A 1-based matrix position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub const fn new(row: usize, col: usize) -> Self {
        Position { row, col }
    }

    /// Product order: `self ≤ other`.
    pub fn dominated_by(self, other: Position) -> bool {
        self.row <= other.row && self.col <= other.col
    }

    /// Strict product order: `self < other`.
    pub fn strictly_below(self, other: Position) -> bool {
        self != other && self.dominated_by(other)
    }

    pub fn comparable(self, other: Position) -> bool {
        self.dominated_by(other) || other.dominated_by(self)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl Serialize for Position {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.row, self.col].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Position {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [row, col] = <[usize; 2]>::deserialize(d)?;
        if row == 0 || col == 0 {
            return Err(D::Error::custom("positions are 1-based"));
        }
        Ok(Position { row, col })
    }
}

/// A set of pairwise incomparable positions, kept sorted by (row, column).
///
/// Used for pivot sets, for the cell index α and for relation labels β.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct PivotSet(Vec<Position>);

impl PivotSet {
    pub fn empty() -> Self {
        PivotSet(Vec::new())
    }

    /// Checks the anti-chain property; duplicates are rejected too.
    pub fn new(mut positions: Vec<Position>) -> Result<Self> {
        positions.sort();
        for (i, a) in positions.iter().enumerate() {
            if a.row == 0 || a.col == 0 {
                return Err(Error::InvalidCell(format!("position {a} is not 1-based")));
            }
            if positions[i + 1..].iter().any(|b| a.comparable(*b)) {
                return Err(Error::NotAntiChain);
            }
        }
        Ok(PivotSet(positions))
    }

    pub(crate) fn from_sorted_unchecked(positions: Vec<Position>) -> Self {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        PivotSet(positions)
    }

    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        PivotSet::new(pairs.iter().map(|&(r, c)| Position::new(r, c)).collect())
    }

    pub fn positions(&self) -> &[Position] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: Position) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Position> + '_ {
        self.0.iter().copied()
    }
}

impl<'de> Deserialize<'de> for PivotSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let positions = Vec::<Position>::deserialize(d)?;
        PivotSet::new(positions).map_err(D::Error::custom)
    }
}

impl fmt::Display for PivotSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// Dense row-major matrix of field-element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = FieldElement::ONE;
        }
        m
    }

    /// Matrix with entry 1 on each given position and 0 elsewhere.
    pub fn indicator(n: usize, ones: impl IntoIterator<Item = Position>) -> Self {
        let mut m = Matrix::zeros(n, n);
        for p in ones {
            m.set(p, FieldElement::ONE);
        }
        m
    }

    /// Build from rows of element indices.
    pub fn from_rows(field: &FiniteField, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("rows must be nonempty and of equal length".into()));
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|&i| field.element(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows: rows.len(), cols, entries })
    }

    /// Build from columns of element indices.
    pub fn from_columns(field: &FiniteField, columns: &[Vec<u32>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) || rows == 0 {
            return Err(Error::DimensionMismatch("columns must be nonempty and of equal length".into()));
        }
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.entries[i * m.cols + j] = field.element(v)?;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at a 1-based position.
    pub fn get(&self, p: Position) -> FieldElement {
        self.entries[(p.row - 1) * self.cols + (p.col - 1)]
    }

    pub fn set(&mut self, p: Position, v: FieldElement) {
        self.entries[(p.row - 1) * self.cols + (p.col - 1)] = v;
    }

    #[inline]
    pub(crate) fn at(&self, r: usize, c: usize) -> FieldElement {
        self.entries[r * self.cols + c]
    }

    /// Entries as rows of indices.
    pub fn to_index_rows(&self) -> Vec<Vec<u32>> {
        self.entries
            .chunks(self.cols)
            .map(|r| r.iter().map(|e| e.index()).collect())
            .collect()
    }

    pub fn mul(&self, other: &Matrix, field: &FiniteField) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for s in 0..self.cols {
                let a = self.at(i, s);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(s, j);
                    if !b.is_zero() {
                        let cell = &mut out.entries[i * other.cols + j];
                        *cell = field.add(*cell, field.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix, field: &FiniteField) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("subtraction of differently shaped matrices".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| field.sub(a, b))
            .collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, entries })
    }

    /// Positions of nonzero entries, in row-major order.
    pub fn support(&self) -> Vec<Position> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                if !self.at(r, c).is_zero() {
                    out.push(Position::new(r + 1, c + 1));
                }
            }
        }
        out
    }

    /// Maximal elements of the support under the product order.
    pub fn pivot_set(&self) -> PivotSet {
        maximal_rows(self.rows, |r| {
            (0..self.cols).rev().find(|&c| !self.at(r, c).is_zero())
        })
    }

    /// Rank of the column space.
    pub fn rank(&self, field: &FiniteField) -> usize {
        self.column_reduce(field).1.len()
    }

    /// `Supp(self) ⊆` the upper triangle and every diagonal entry nonzero.
    pub fn is_upper_triangular_invertible(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                !self.at(i, i).is_zero() && (0..i).all(|j| self.at(i, j).is_zero())
            })
    }

    /// Conditions (zero columns last), (pivots strictly descending), (pivots
    /// equal one and alone in their rows).
    pub fn is_rrcef(&self) -> bool {
        let mut seen_zero_col = false;
        let mut prev_pivot_row: Option<usize> = None;
        for c in 0..self.cols {
            let last = (0..self.rows).rev().find(|&r| !self.at(r, c).is_zero());
            let Some(r) = last else {
                seen_zero_col = true;
                continue;
            };
            if seen_zero_col {
                return false;
            }
            if prev_pivot_row.is_some_and(|pr| r >= pr) {
                return false;
            }
            if self.at(r, c) != FieldElement::ONE {
                return false;
            }
            if (0..self.cols).any(|c2| c2 != c && !self.at(r, c2).is_zero()) {
                return false;
            }
            prev_pivot_row = Some(r);
        }
        true
    }

    /// The unique RRCEF matrix (n×n, zero-padded) with the same column space.
    ///
    /// Bottom-up column reduction: for each row from the bottom, pick the
    /// first remaining column that is nonzero there, scale it so the entry is
    /// 1, and clear that row in every other column.
    pub fn rrcef(&self, field: &FiniteField) -> Matrix {
        let (columns, _) = self.column_reduce(field);
        let n = self.rows;
        let mut out = Matrix::zeros(n, n);
        for (j, col) in columns.iter().enumerate().take(n) {
            for (i, &v) in col.iter().enumerate() {
                out.entries[i * n + j] = v;
            }
        }
        out
    }

    /// Reduced pivot columns in output order, plus their pivot rows (0-based).
    fn column_reduce(&self, field: &FiniteField) -> (Vec<Vec<FieldElement>>, Vec<usize>) {
        let mut cols: Vec<Vec<FieldElement>> = (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.at(r, c)).collect())
            .collect();
        let mut remaining: Vec<usize> = (0..self.cols).collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (column index, row)
        for r in (0..self.rows).rev() {
            let Some(pos) = remaining.iter().position(|&c| !cols[c][r].is_zero()) else {
                continue;
            };
            let c = remaining.remove(pos);
            let inv = field.inv(cols[c][r]).expect("nonzero pivot");
            for v in cols[c].iter_mut() {
                *v = field.mul(*v, inv);
            }
            let pivot_col = cols[c].clone();
            for (o, col) in cols.iter_mut().enumerate() {
                let f = col[r];
                if o == c || f.is_zero() {
                    continue;
                }
                for (v, &pv) in col.iter_mut().zip(&pivot_col) {
                    *v = field.sub(*v, field.mul(f, pv));
                }
            }
            pivots.push((c, r));
        }
        let rows = pivots.iter().map(|&(_, r)| r).collect();
        let columns = pivots.into_iter().map(|(c, _)| cols[c].clone()).collect();
        (columns, rows)
    }
}

/// Pivot set from a per-row "rightmost marked column" oracle (0-based).
///
/// `(i, j)` is maximal iff j is the rightmost marked column in row i and no
/// lower row has a marked column at or right of j.
fn maximal_rows(rows: usize, rightmost: impl Fn(usize) -> Option<usize>) -> PivotSet {
    let mut out = Vec::new();
    let mut max_below: Option<usize> = None;
    for r in (0..rows).rev() {
        if let Some(c) = rightmost(r) {
            if max_below.is_none_or(|b| c > b) {
                out.push(Position::new(r + 1, c + 1));
                max_below = Some(c);
            }
        }
    }
    out.reverse();
    PivotSet::from_sorted_unchecked(out)
}

/// `Piv(a − b)`: maximal positions where the two matrices differ.
pub fn pivot_set_of_difference(a: &Matrix, b: &Matrix) -> PivotSet {
    debug_assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    maximal_rows(a.rows, |r| (0..a.cols).rev().find(|&c| a.at(r, c) != b.at(r, c)))
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            n: usize,
            entries: Vec<Vec<u32>>,
        }
        if !self.is_square() {
            return Err(serde::ser::Error::custom("only square matrices have a wire form"));
        }
        Wire { n: self.rows, entries: self.to_index_rows() }.serialize(s)
    }
}

/// Wire form `{"n": int, "entries": [[int,...],...]}`; entries are field-element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub entries: Vec<Vec<u32>>,
}

impl MatrixJson {
    pub fn into_matrix(self, field: &FiniteField) -> Result<Matrix> {
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(Error::DimensionMismatch(format!("expected {0}x{0} entries", self.n)));
        }
        Matrix::from_rows(field, &self.entries)
    }
}

/// Random upper triangular invertible matrix.
pub fn random_borel<R: Rng + ?Sized>(n: usize, field: &FiniteField, rng: &mut R) -> Matrix {
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        g.entries[i * n + i] = field.random_nonzero(rng);
        for j in i + 1..n {
            g.entries[i * n + j] = field.random_element(rng);
        }
    }
    g
}

/// RRCEF representative of the image subspace `G · colspace(M)`.
pub fn borel_act(g: &Matrix, m: &Matrix, field: &FiniteField) -> Result<Matrix> {
    if !g.is_upper_triangular_invertible() {
        return Err(Error::NotBorel);
    }
    Ok(g.mul(m, field)?.rrcef(field))
}

/// Inverse of an upper triangular invertible matrix by back substitution.
pub fn invert_borel(g: &Matrix, field: &FiniteField) -> Result<Matrix> {
    if !g.is_upper_triangular_invertible() {
        return Err(Error::NotBorel);
    }
    let n = g.rows;
    let mut inv = Matrix::zeros(n, n);
    for j in 0..n {
        // solve G x = e_j from the bottom
        for i in (0..=j).rev() {
            let mut acc = if i == j { FieldElement::ONE } else { FieldElement::ZERO };
            for s in i + 1..=j {
                acc = field.sub(acc, field.mul(g.at(i, s), inv.at(s, j)));
            }
            inv.entries[i * n + j] = field.div(acc, g.at(i, i))?;
        }
    }
    Ok(inv)
}

/// `G ∈ B` with `M = G·X`, where X is the indicator matrix of `Piv(M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorelWitness {
    pub g: Matrix,
    pub x: Matrix,
}

/// Witness that an RRCEF matrix lies in the orbit of its 0/1 pivot matrix.
///
/// Column j of G is column k of M when `(j, k)` is a pivot, and `e_j`
/// otherwise. The identity `M = G·X` is checked by multiplication.
pub fn base_point_witness(m: &Matrix, field: &FiniteField) -> Result<BorelWitness> {
    if !m.is_square() || !m.is_rrcef() {
        return Err(Error::NotEchelon);
    }
    let n = m.rows;
    let piv = m.pivot_set();
    let mut g = Matrix::identity(n);
    for p in piv.iter() {
        for i in 0..n {
            g.entries[i * n + (p.row - 1)] = m.at(i, p.col - 1);
        }
    }
    let x = Matrix::indicator(n, piv.iter());
    check_identity("M = G·X", m, &g.mul(&x, field)?)?;
    debug_assert!(g.is_upper_triangular_invertible());
    Ok(BorelWitness { g, x })
}

/// Candidate `G` for a pair `(M, N)` in one cell together with the 0/1
/// matrices `X` (ones on `α ∪ Piv(M−N)`) and `Y` (ones on `α`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub g: Matrix,
    pub x: Matrix,
    pub y: Matrix,
}

/// Builds the column-wise construction for a pair of same-cell matrices
/// without checking the identities: column j of G is column k of N when
/// `(j, k) ∈ α`, column k of `M − N` when `(j, k) ∈ Piv(M − N)`, and `e_j`
/// otherwise.
pub fn pair_witness_candidate(m: &Matrix, n_mat: &Matrix, field: &FiniteField) -> Result<PairWitness> {
    if !m.is_square() || !m.is_rrcef() || !n_mat.is_rrcef() || m.rows != n_mat.rows {
        return Err(Error::NotEchelon);
    }
    let alpha = m.pivot_set();
    let alpha_n = n_mat.pivot_set();
    if alpha != alpha_n {
        return Err(Error::PivotSetsDiffer(alpha.to_string(), alpha_n.to_string()));
    }
    let n = m.rows;
    let beta = pivot_set_of_difference(m, n_mat);
    let mut g = Matrix::identity(n);
    for p in alpha.iter() {
        for i in 0..n {
            g.entries[i * n + (p.row - 1)] = n_mat.at(i, p.col - 1);
        }
    }
    for p in beta.iter() {
        for i in 0..n {
            g.entries[i * n + (p.row - 1)] = field.sub(m.at(i, p.col - 1), n_mat.at(i, p.col - 1));
        }
    }
    let x = Matrix::indicator(n, alpha.iter().chain(beta.iter()));
    let y = Matrix::indicator(n, alpha.iter());
    Ok(PairWitness { g, x, y })
}

/// [`pair_witness_candidate`] followed by exact verification of `M = G·X` and
/// `N = G·Y`.
///
/// The second identity always holds. The first holds exactly when every
/// column in which M and N differ contains a position of `Piv(M − N)`;
/// otherwise the first mismatching entry is reported.
pub fn pair_witness(m: &Matrix, n_mat: &Matrix, field: &FiniteField) -> Result<PairWitness> {
    let w = pair_witness_candidate(m, n_mat, field)?;
    check_identity("N = G·Y", n_mat, &w.g.mul(&w.y, field)?)?;
    check_identity("M = G·X", m, &w.g.mul(&w.x, field)?)?;
    Ok(w)
}

fn check_identity(identity: &'static str, expected: &Matrix, got: &Matrix) -> Result<()> {
    match expected.support_diff(got) {
        None => Ok(()),
        Some(at) => Err(Error::WitnessIdentityFailed { identity, at }),
    }
}

impl Matrix {
    /// First row-major position where the two matrices differ.
    fn support_diff(&self, other: &Matrix) -> Option<Position> {
        self.entries
            .iter()
            .zip(&other.entries)
            .position(|(a, b)| a != b)
            .map(|i| Position::new(i / self.cols + 1, i % self.cols + 1))
    }
}
