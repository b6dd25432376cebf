use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use super::Poset;
use crate::error::{Error, Result};
use crate::matrix::Position;

/// A non-increasing sequence of non-negative parts.
///
/// Length is significant: `(1, 0)` and `(1)` are different values, since the
/// cell index of Gr(m, n) lives in N^{n−m}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not non-increasing")));
        }
        Ok(Partition(parts))
    }

    pub fn zeros(len: usize) -> Self {
        Partition(vec![0; len])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of parts.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn largest(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    /// Pads with zeros (or checks trailing zeros) to the requested length.
    pub fn with_len(&self, len: usize) -> Result<Self> {
        if self.0.len() > len {
            if self.0[len..].iter().any(|&p| p != 0) {
                return Err(Error::InvalidPartition(format!("{self} has more than {len} nonzero parts")));
            }
            return Ok(Partition(self.0[..len].to_vec()));
        }
        let mut parts = self.0.clone();
        parts.resize(len, 0);
        Ok(Partition(parts))
    }

    /// `μ_i ≤ λ_i` for every i (missing parts count as zero).
    pub fn is_subpartition_of(&self, lambda: &Partition) -> bool {
        let get = |p: &Partition, i: usize| p.0.get(i).copied().unwrap_or(0);
        (0..self.len().max(lambda.len())).all(|i| get(self, i) <= get(lambda, i))
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Partition::new(Vec::<u32>::deserialize(d)?).map_err(D::Error::custom)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All subpartitions of λ with λ's length, ordered by size and then
/// reverse-lexicographically.
pub fn subpartitions(lambda: &Partition) -> Vec<Partition> {
    fn rec(lambda: &[u32], i: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == lambda.len() {
            out.push(Partition(cur.clone()));
            return;
        }
        for v in 0..=cap.min(lambda[i]) {
            cur.push(v);
            rec(lambda, i + 1, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(lambda.parts(), 0, u32::MAX, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| b.0.cmp(&a.0)));
    out
}

/// Maximal cells of the Ferrers board of μ: `(i, μ_i)` where the row is
/// strictly longer than the next one.
pub fn maximal_cells(mu: &Partition) -> Vec<Position> {
    let p = mu.parts();
    (0..p.len())
        .filter(|&i| p[i] > 0 && p.get(i + 1).is_none_or(|&next| next < p[i]))
        .map(|i| Position::new(i + 1, p[i] as usize))
        .collect()
}

/// The Ferrers board `{(i, j) : 1 ≤ i ≤ l, 1 ≤ j ≤ λ_i}` under the product order.
#[derive(Debug, Clone)]
pub struct FerrersPoset {
    shape: Partition,
    poset: Poset<Position>,
}

impl FerrersPoset {
    pub fn new(shape: Partition) -> Self {
        let cells = shape
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len as usize).map(move |j| Position::new(i + 1, j)))
            .collect();
        let poset = Poset::product_order(cells).expect("product order is a partial order");
        FerrersPoset { shape, poset }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> &[Position] {
        self.poset.elements()
    }

    pub fn poset(&self) -> &Poset<Position> {
        &self.poset
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(part(&[4, 3, 1]).size(), 8);
        assert_ne!(part(&[1, 0]), part(&[1]));
        assert_eq!(part(&[1]).with_len(3).unwrap(), part(&[1, 0, 0]));
        assert!(part(&[2, 1]).with_len(1).is_err());
        assert!(part(&[1, 1]).is_subpartition_of(&part(&[2, 1])));
        assert!(!part(&[1, 1, 1]).is_subpartition_of(&part(&[2, 1])));
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
        assert_eq!(serde_json::to_string(&part(&[4, 3, 1])).unwrap(), "[4,3,1]");
    }

    #[test]
    fn subpartition_lists() {
        assert_eq!(subpartitions(&part(&[1])), vec![part(&[0]), part(&[1])]);
        assert_eq!(
            subpartitions(&part(&[2, 1])),
            vec![part(&[0, 0]), part(&[1, 0]), part(&[2, 0]), part(&[1, 1]), part(&[2, 1])]
        );
        assert_eq!(subpartitions(&part(&[4, 3, 1])).len(), 23);
        assert_eq!(subpartitions(&Partition::zeros(0)), vec![Partition::zeros(0)]);
    }

    #[test]
    fn subpartition_count_matches_brute_force_box_enumeration() {
        // oracle: every vector in the box Π[0, λ_i] kept if non-increasing
        for lambda in [vec![3, 3, 2], vec![4, 2, 2, 1], vec![2, 2, 2]] {
            let l = part(&lambda);
            let mut count = 0;
            let total: u32 = lambda.iter().map(|&p| p + 1).product();
            for code in 0..total {
                let mut c = code;
                let v: Vec<u32> = lambda
                    .iter()
                    .map(|&p| {
                        let d = c % (p + 1);
                        c /= p + 1;
                        d
                    })
                    .collect();
                if v.windows(2).all(|w| w[0] >= w[1]) {
                    count += 1;
                }
            }
            assert_eq!(subpartitions(&l).len(), count);
        }
    }

    #[test]
    fn maximal_cells_of_staircase_merge() {
        let mu = part(&[4, 4, 3, 3, 2, 1, 1]);
        let cells: Vec<(usize, usize)> = maximal_cells(&mu).iter().map(|p| (p.row, p.col)).collect();
        assert_eq!(cells, vec![(2, 4), (4, 3), (5, 2), (7, 1)]);
        assert!(maximal_cells(&part(&[0, 0])).is_empty());
    }

    #[test]
    fn ferrers_board_cells() {
        let b = FerrersPoset::new(part(&[4, 3, 1]));
        assert_eq!(b.cells().len(), 8);
        assert_eq!(b.cells()[4], Position::new(2, 1));
        assert_eq!(b.shape(), &part(&[4, 3, 1]));
    }
}
