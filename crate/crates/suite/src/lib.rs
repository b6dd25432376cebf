//! Brute-force oracles for the acceptance suite.
//!
//! Everything here works over prime fields with plain `u32` residues and
//! recomputes its answer from definitions (spans, group generators, direct
//! counting) without the echelon, pivot or poset code paths of the library.

use std::collections::HashMap;

/// Sorted list of every vector in the span of `cols` over GF(p).
/// Two generating sets span the same subspace iff their keys are equal.
pub fn span_key(cols: &[Vec<u32>], p: u32) -> Vec<Vec<u32>> {
    let n = cols.first().map_or(0, Vec::len);
    let mut out = vec![vec![0u32; n]];
    for c in cols {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for v in &out {
            for a in 0..p {
                next.push(v.iter().zip(c).map(|(&x, &y)| (x + a * y) % p).collect::<Vec<u32>>());
            }
        }
        next.sort_unstable();
        next.dedup();
        out = next;
    }
    out
}

/// Columns of an `n × n` row-major matrix, dropping zero columns.
pub fn nonzero_columns(rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = rows.len();
    (0..n)
        .map(|j| rows.iter().map(|r| r[j]).collect::<Vec<u32>>())
        .filter(|c| c.iter().any(|&x| x != 0))
        .collect()
}

/// `G · v` over GF(p).
pub fn apply(g: &[Vec<u32>], v: &[u32], p: u32) -> Vec<u32> {
    g.iter()
        .map(|row| row.iter().zip(v).fold(0u32, |acc, (&a, &b)| (acc + a * b) % p))
        .collect()
}

/// Generators of the upper triangular group over GF(p): a diagonal matrix
/// with a primitive root in one slot, and the elementary `I + E_{ij}`, i < j.
pub fn borel_generators(n: usize, p: u32) -> Vec<Vec<Vec<u32>>> {
    let root = (1..p)
        .find(|&g| {
            let mut x = 1;
            (1..p - 1).all(|_| {
                x = x * g % p;
                x != 1
            })
        })
        .unwrap_or(1);
    let id = |n: usize| (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect::<Vec<Vec<u32>>>();
    let mut gens = Vec::new();
    if p > 2 {
        for i in 0..n {
            let mut d = id(n);
            d[i][i] = root;
            gens.push(d);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut e = id(n);
            e[i][j] = 1;
            gens.push(e);
        }
    }
    gens
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Orbits of the diagonal action of the upper triangular group on ordered
/// pairs of a set of subspaces closed under that action. Each subspace is
/// given by generator columns; the result maps each pair `(x, y)` (row
/// major, `x * len + y`) to an orbit id numbered by first appearance.
pub fn pair_orbits(points: &[Vec<Vec<u32>>], n: usize, p: u32) -> Vec<usize> {
    let keys: Vec<Vec<Vec<u32>>> = points.iter().map(|c| span_key(c, p)).collect();
    let index: HashMap<&Vec<Vec<u32>>, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let len = points.len();
    let perms: Vec<Vec<usize>> = borel_generators(n, p)
        .iter()
        .map(|g| {
            points
                .iter()
                .map(|cols| {
                    let img: Vec<Vec<u32>> = cols.iter().map(|c| apply(g, c, p)).collect();
                    *index.get(&span_key(&img, p)).expect("point set is closed under the group")
                })
                .collect()
        })
        .collect();
    let mut dsu = Dsu((0..len * len).collect());
    for perm in &perms {
        for x in 0..len {
            for y in 0..len {
                dsu.union(x * len + y, perm[x] * len + perm[y]);
            }
        }
    }
    let mut ids = HashMap::new();
    (0..len * len)
        .map(|t| {
            let r = dsu.find(t);
            let next = ids.len();
            *ids.entry(r).or_insert(next)
        })
        .collect()
}

/// Number of m-dimensional subspaces of GF(p)^n by enumerating all n×m
/// matrices and grouping full-rank ones by span.
pub fn count_subspaces(n: usize, m: usize, p: u32) -> usize {
    let total = (p as u64).pow((n * m) as u32);
    let mut seen = std::collections::HashSet::new();
    for code in 0..total {
        let mut c = code;
        let cols: Vec<Vec<u32>> = (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let d = (c % p as u64) as u32;
                        c /= p as u64;
                        d
                    })
                    .collect()
            })
            .collect();
        let key = span_key(&cols, p);
        if key.len() == (p as usize).pow(m as u32) {
            seen.insert(key);
        }
    }
    seen.len()
}

/// Maximal nonzero positions of `a − b` (1-based), by pairwise comparison.
pub fn difference_maxima(a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<(usize, usize)> {
    let mut supp = Vec::new();
    for (i, (ra, rb)) in a.iter().zip(b).enumerate() {
        for (j, (x, y)) in ra.iter().zip(rb).enumerate() {
            if x != y {
                supp.push((i + 1, j + 1));
            }
        }
    }
    let below = |s: (usize, usize), t: (usize, usize)| s != t && s.0 <= t.0 && s.1 <= t.1;
    let mut out: Vec<(usize, usize)> =
        supp.iter().copied().filter(|&s| !supp.iter().any(|&t| below(s, t))).collect();
    out.sort_unstable();
    out
}
