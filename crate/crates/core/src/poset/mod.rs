//! Finite posets, anti-chains and strict down-sets.
//!
//! `Down(Y)` here is the set of elements strictly below some member of `Y`;
//! `Y` itself is not included.

mod cell_index;
mod partition;

pub use cell_index::{
    d1_of_alpha, d_of_alpha, free_positions, phi, phi_inverse, rho, validate_alpha, FerrersIso,
};
pub use partition::{maximal_cells, subpartitions, FerrersPoset, Partition};

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Position;

/// Order axioms are verified at construction up to this many elements.
pub const CHECK_BOUND: usize = 1000;

/// Default bound on host size for anti-chain enumeration.
pub const ANTICHAIN_BOUND: usize = 64;

/// A finite poset with a precomputed comparability table.
#[derive(Debug, Clone)]
pub struct Poset<T> {
    elements: Vec<T>,
    index: HashMap<T, usize>,
    // up[a] has bit b set iff a ≤ b
    up: Vec<Vec<u64>>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

fn bit(set: &[u64], b: usize) -> bool {
    set[b / 64] >> (b % 64) & 1 == 1
}

impl<T: Clone + Eq + Hash> Poset<T> {
    /// Poset from elements and a `≤` predicate.
    pub fn new(elements: Vec<T>, le: impl Fn(&T, &T) -> bool) -> Result<Self> {
        let n = elements.len();
        let mut up = vec![vec![0u64; words(n)]; n];
        for (a, row) in up.iter_mut().enumerate() {
            for b in 0..n {
                if le(&elements[a], &elements[b]) {
                    row[b / 64] |= 1 << (b % 64);
                }
            }
        }
        let poset = Poset::from_parts(elements, up)?;
        if n <= CHECK_BOUND {
            poset.check_order()?;
        }
        Ok(poset)
    }

    /// Poset generated by cover (or any generating) pairs `(lower, upper)`,
    /// given as element indices.
    pub fn from_covers(elements: Vec<T>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = elements.len();
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::NotPartialOrder(format!("cover ({a},{b}) out of range")));
            }
            succ[a].push(b);
        }
        let mut up = vec![vec![0u64; words(n)]; n];
        for (a, row) in up.iter_mut().enumerate() {
            let mut stack = vec![a];
            while let Some(x) = stack.pop() {
                if bit(row, x) {
                    continue;
                }
                row[x / 64] |= 1 << (x % 64);
                stack.extend(succ[x].iter().copied());
            }
        }
        let poset = Poset::from_parts(elements, up)?;
        poset.check_order()?;
        Ok(poset)
    }

    fn from_parts(elements: Vec<T>, up: Vec<Vec<u64>>) -> Result<Self> {
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::NotPartialOrder("duplicate element".into()));
            }
        }
        Ok(Poset { elements, index, up })
    }

    fn check_order(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            if !self.le(a, a) {
                return Err(Error::NotPartialOrder(format!("element {a} is not reflexive")));
            }
            for b in 0..n {
                if a != b && self.le(a, b) && self.le(b, a) {
                    return Err(Error::NotPartialOrder(format!("elements {a} and {b} form a cycle")));
                }
                if self.le(a, b) {
                    let ok = self.up[b].iter().zip(&self.up[a]).all(|(&ub, &ua)| ub & !ua == 0);
                    if !ok {
                        return Err(Error::NotPartialOrder(format!("not transitive through {a} ≤ {b}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn index_of(&self, e: &T) -> Option<usize> {
        self.index.get(e).copied()
    }
}

impl<T> Poset<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &T {
        &self.elements[i]
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        bit(&self.up[a], b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    pub fn is_antichain(&self, subset: &[usize]) -> bool {
        subset.iter().enumerate().all(|(i, &a)| {
            a < self.len() && subset[i + 1..].iter().all(|&b| a != b && !self.comparable(a, b))
        })
    }

    /// Elements strictly below some member of the anti-chain, ascending.
    pub fn down_set(&self, y: &AntiChain) -> Result<Vec<usize>> {
        if !self.is_antichain(y.members()) {
            return Err(Error::NotAntiChain);
        }
        Ok((0..self.len())
            .filter(|&x| y.members().iter().any(|&m| self.lt(x, m)))
            .collect())
    }

    /// Maximal elements of a subset, ascending.
    pub fn maximal(&self, subset: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = subset
            .iter()
            .copied()
            .filter(|&a| !subset.iter().any(|&b| self.lt(a, b)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Cover pairs `(a, b)` with `a ⋖ b`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// A linear extension: repeatedly take the smallest index whose strict
    /// predecessors are all placed. Equals `0..n` when index order already
    /// extends the partial order.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut placed = vec![false; n];
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let next = (0..n)
                .find(|&x| !placed[x] && (0..n).all(|y| placed[y] || !self.lt(y, x)))
                .expect("a partial order always has a minimal unplaced element");
            placed[next] = true;
            out.push(next);
        }
        out
    }

    /// Every anti-chain, including the empty one, ordered by size and then
    /// lexicographically by member indices.
    pub fn antichains(&self) -> Result<Vec<AntiChain>> {
        self.antichains_bounded(ANTICHAIN_BOUND)
    }

    pub fn antichains_bounded(&self, bound: usize) -> Result<Vec<AntiChain>> {
        let n = self.len();
        if n > bound || n > 128 {
            return Err(Error::PosetTooLarge { size: n, bound: bound.min(128) });
        }
        // incomparable[a]: elements incomparable with a and of larger index
        let incomparable: Vec<u128> = (0..n)
            .map(|a| {
                (a + 1..n)
                    .filter(|&b| !self.comparable(a, b))
                    .fold(0u128, |m, b| m | 1 << b)
            })
            .collect();
        let mut out = Vec::new();
        let mut current = Vec::new();
        let all = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        enumerate_antichains(&incomparable, all, &mut current, &mut out);
        out.sort_by(|a: &AntiChain, b: &AntiChain| {
            a.members.len().cmp(&b.members.len()).then_with(|| a.members.cmp(&b.members))
        });
        Ok(out)
    }
}

fn enumerate_antichains(
    incomparable: &[u128],
    allowed: u128,
    current: &mut Vec<usize>,
    out: &mut Vec<AntiChain>,
) {
    out.push(AntiChain { members: current.clone() });
    let mut rest = allowed;
    while rest != 0 {
        let a = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        current.push(a);
        enumerate_antichains(incomparable, allowed & incomparable[a], current, out);
        current.pop();
    }
}

impl Poset<Position> {
    /// Positions under the product order.
    pub fn product_order(positions: Vec<Position>) -> Result<Self> {
        Poset::new(positions, |a, b| a.dominated_by(*b))
    }
}

impl Poset<usize> {
    /// `0 < 1 < … < k−1`.
    pub fn chain(k: usize) -> Self {
        Poset::from_covers((0..k).collect(), &(1..k).map(|i| (i - 1, i)).collect::<Vec<_>>())
            .expect("a chain is a partial order")
    }

    /// `k` pairwise incomparable elements.
    pub fn discrete(k: usize) -> Self {
        Poset::from_covers((0..k).collect(), &[]).expect("an antichain is a partial order")
    }
}

/// A set of pairwise incomparable element indices of some host poset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AntiChain {
    members: Vec<usize>,
}

impl AntiChain {
    pub fn empty() -> Self {
        AntiChain::default()
    }

    pub fn new<T>(host: &Poset<T>, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if let Some(&bad) = members.iter().find(|&&m| m >= host.len()) {
            return Err(Error::UnknownElement(bad.to_string()));
        }
        if !host.is_antichain(&members) {
            return Err(Error::NotAntiChain);
        }
        Ok(AntiChain { members })
    }

    pub(crate) fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        AntiChain { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

/// Poset description used on the command line: element names plus cover pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
}

impl PosetJson {
    pub fn into_poset(self) -> Result<Poset<String>> {
        let pos = |name: &String| {
            self.elements
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| Error::UnknownElement(name.clone()))
        };
        let covers = self
            .covers
            .iter()
            .map(|(a, b)| Ok((pos(a)?, pos(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Poset::from_covers(self.elements.clone(), &covers)
    }

    pub fn from_poset(poset: &Poset<String>) -> Self {
        PosetJson {
            elements: poset.elements().to_vec(),
            covers: poset
                .covers()
                .into_iter()
                .map(|(a, b)| (poset.element(a).clone(), poset.element(b).clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(rows: usize, cols: usize) -> Poset<Position> {
        let mut ps = Vec::new();
        for i in 1..=rows {
            for j in 1..=cols {
                ps.push(Position::new(i, j));
            }
        }
        Poset::product_order(ps).unwrap()
    }

    #[test]
    fn down_set_basics() {
        let chain = Poset::chain(3);
        assert!(chain.down_set(&AntiChain::empty()).unwrap().is_empty());
        let y = AntiChain::new(&chain, vec![1]).unwrap();
        assert_eq!(chain.down_set(&y).unwrap(), vec![0]);
        let bogus = AntiChain { members: vec![0, 2] };
        assert_eq!(chain.down_set(&bogus), Err(Error::NotAntiChain));
    }

    #[test]
    fn down_set_of_example_pivots_in_7_by_4_grid() {
        let g = grid(7, 4);
        let ys: Vec<usize> = [(2, 4), (4, 3), (5, 2), (7, 1)]
            .iter()
            .map(|&(r, c)| g.index_of(&Position::new(r, c)).unwrap())
            .collect();
        let y = AntiChain::new(&g, ys.clone()).unwrap();
        let down = g.down_set(&y).unwrap();
        // oracle: direct scan of the 28 positions (4+3+3+2+1+1+0 by row)
        let pivots = [(2, 4), (4, 3), (5, 2), (7, 1)].map(|(r, c)| Position::new(r, c));
        let brute: Vec<usize> = (0..g.len())
            .filter(|&i| pivots.iter().any(|p| g.element(i).strictly_below(*p)))
            .collect();
        assert_eq!(down, brute);
        assert_eq!(down.len(), 14);
        for p in [(1, 4), (3, 3), (6, 1)] {
            assert!(down.contains(&g.index_of(&Position::new(p.0, p.1)).unwrap()));
        }
        assert!(down.iter().all(|d| !ys.contains(d)));
    }

    #[test]
    fn antichain_predicate() {
        let g = grid(7, 4);
        let idx = |r, c| g.index_of(&Position::new(r, c)).unwrap();
        assert!(g.is_antichain(&[idx(3, 3)]));
        assert!(!g.is_antichain(&[idx(1, 1), idx(2, 2)]));
        assert!(g.is_antichain(&[idx(2, 4), idx(4, 3), idx(5, 2), idx(7, 1)]));
    }

    #[test]
    fn antichain_enumeration_small() {
        let empty: Poset<usize> = Poset::chain(0);
        assert_eq!(empty.antichains().unwrap(), vec![AntiChain::empty()]);
        let two = Poset::chain(2);
        let acs = two.antichains().unwrap();
        assert_eq!(acs.len(), 3);
        assert_eq!(acs[0], AntiChain::empty());
        let d = Poset::discrete(4);
        assert_eq!(d.antichains().unwrap().len(), 16);
        let big = Poset::discrete(65);
        assert!(matches!(big.antichains(), Err(Error::PosetTooLarge { .. })));
    }

    #[test]
    fn antichain_count_of_ferrers_431_by_subset_filter() {
        let board = FerrersPoset::new(Partition::new(vec![4, 3, 1]).unwrap());
        let p = board.poset();
        // oracle: all 2^8 subsets filtered by pairwise incomparability
        let n = p.len();
        let brute = (0u32..1 << n)
            .filter(|mask| {
                let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| !p.comparable(a, b)))
            })
            .count();
        assert_eq!(brute, 23);
        assert_eq!(p.antichains().unwrap().len(), brute);
    }

    #[test]
    fn order_checks() {
        assert!(matches!(
            Poset::from_covers(vec![0usize, 1], &[(0, 1), (1, 0)]),
            Err(Error::NotPartialOrder(_))
        ));
        // not transitive: a ≤ b, b ≤ c but not a ≤ c
        let r = Poset::new(vec![0u8, 1, 2], |a, b| a == b || (*a, *b) == (0, 1) || (*a, *b) == (1, 2));
        assert!(matches!(r, Err(Error::NotPartialOrder(_))));
        let v = Poset::from_covers(vec!["a", "b", "c"], &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(v.covers(), vec![(0, 2), (1, 2)]);
        assert_eq!(v.maximal(&[0, 1, 2]), vec![2]);
        assert_eq!(v.linear_extension(), vec![0, 1, 2]);
        let rev = Poset::from_covers(vec![0usize, 1, 2], &[(2, 1), (1, 0)]).unwrap();
        assert_eq!(rev.linear_extension(), vec![2, 1, 0]);
    }

    #[test]
    fn poset_json_roundtrip() {
        let text = r#"{"elements":["x","y","z"],"covers":[["x","z"],["y","z"]]}"#;
        let pj: PosetJson = serde_json::from_str(text).unwrap();
        let p = pj.clone().into_poset().unwrap();
        assert!(p.lt(0, 2) && !p.comparable(0, 1));
        assert_eq!(PosetJson::from_poset(&p), pj);
        let bad = PosetJson { elements: vec!["x".into()], covers: vec![("x".into(), "w".into())] };
        assert!(matches!(bad.into_poset(), Err(Error::UnknownElement(_))));
    }
}
