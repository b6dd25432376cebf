//! Generalized wreath products of association schemes over a finite poset.
//!
//! Points of the product are tuples `(a_x)` with `a_x ∈ Ω_x`. The relation
//! `R(Y, (i_x))` holds between `a` and `b` when they agree outside
//! `Y ∪ Down(Y)` and `(a_x, b_x)` lies in class `i_x` of the component at
//! each `x ∈ Y`. Coordinates in `Down(Y)` are unconstrained.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::par::{self, Parallelism};
use crate::poset::{AntiChain, Poset};
use crate::scheme::SchemeInstance;

/// Default cap on `Π |Ω_x|`.
pub const PRODUCT_BOUND: u128 = 1 << 16;

/// A poset with one component scheme per element (indexed like the poset).
#[derive(Debug, Clone)]
pub struct GwpSpec<T> {
    pub poset: Poset<T>,
    pub components: Vec<SchemeInstance>,
}

impl<T> GwpSpec<T> {
    pub fn new(poset: Poset<T>, components: Vec<SchemeInstance>) -> Result<Self> {
        if components.len() != poset.len() {
            return Err(Error::GwpFault(format!(
                "{} components for {} poset elements",
                components.len(),
                poset.len()
            )));
        }
        if let Some(x) = components.iter().position(|c| c.size() == 0 || c.label_count() == 0) {
            return Err(Error::GwpFault(format!("component {x} is empty")));
        }
        Ok(GwpSpec { poset, components })
    }

    /// Nonidentity class count `r_x` of each component.
    pub fn class_counts(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.label_count() - 1).collect()
    }

    /// `Π |Ω_x|`, or `None` on overflow.
    pub fn product_size(&self) -> Option<u128> {
        self.components.iter().try_fold(1u128, |acc, c| acc.checked_mul(c.size() as u128))
    }

    /// `Σ_Y Π_{x∈Y} r_x` over all anti-chains Y.
    pub fn label_count(&self) -> Result<u128> {
        let r = self.class_counts();
        Ok(self
            .poset
            .antichains()?
            .iter()
            .map(|y| y.members().iter().map(|&x| r[x] as u128).product::<u128>())
            .sum())
    }
}

/// `R(Y, (i_x)_{x∈Y})`: `indices[t]` is the class at `y.members()[t]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GwpLabel {
    pub y: AntiChain,
    pub indices: Vec<u32>,
}

impl GwpLabel {
    pub fn identity() -> Self {
        GwpLabel { y: AntiChain::empty(), indices: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.y.is_empty()
    }

    /// `{"Y": [elements...], "indices": {element: class}}`.
    pub fn to_json<T: Serialize + fmt::Display>(&self, poset: &Poset<T>) -> Value {
        let y: Vec<Value> = self
            .y
            .members()
            .iter()
            .map(|&x| serde_json::to_value(poset.element(x)).expect("poset elements serialize"))
            .collect();
        let mut indices = Map::new();
        for (&x, &i) in self.y.members().iter().zip(&self.indices) {
            indices.insert(poset.element(x).to_string(), json!(i));
        }
        json!({ "Y": y, "indices": indices })
    }
}

/// Label of the pair `(a, b)` given as per-element digits: Y is the set of
/// maximal elements where the components disagree, `i_x` their classes.
pub fn gwp_label_of_pair<T>(spec: &GwpSpec<T>, a: &[u32], b: &[u32]) -> GwpLabel {
    let mut classes = vec![0u32; spec.poset.len()];
    let mut differ = Vec::new();
    for (x, comp) in spec.components.iter().enumerate() {
        let c = comp.relation(a[x] as usize, b[x] as usize);
        if c != 0 {
            classes[x] = c;
            differ.push(x);
        }
    }
    let y = spec.poset.maximal(&differ);
    let indices = y.iter().map(|&x| classes[x]).collect();
    GwpLabel { y: AntiChain::from_sorted_unchecked(y), indices }
}

/// A materialized generalized wreath product.
#[derive(Debug, Clone)]
pub struct GwpScheme<T> {
    pub spec: GwpSpec<T>,
    /// Linear extension used for the mixed-radix point encoding (last fastest).
    pub order: Vec<usize>,
    pub labels: Vec<GwpLabel>,
    pub scheme: SchemeInstance,
    label_ids: HashMap<GwpLabel, u32>,
}

impl<T> GwpScheme<T> {
    /// Per-element digits of point `idx`.
    pub fn decode(&self, idx: usize) -> Vec<u32> {
        decode(&self.spec, &self.order, idx)
    }

    /// Point index of per-element digits.
    pub fn encode(&self, digits: &[u32]) -> usize {
        self.order
            .iter()
            .fold(0usize, |acc, &x| acc * self.spec.components[x].size() + digits[x] as usize)
    }

    pub fn label_id(&self, label: &GwpLabel) -> Option<u32> {
        self.label_ids.get(label).copied()
    }
}

fn decode<T>(spec: &GwpSpec<T>, order: &[usize], mut idx: usize) -> Vec<u32> {
    let mut digits = vec![0u32; spec.poset.len()];
    for &x in order.iter().rev() {
        let s = spec.components[x].size();
        digits[x] = (idx % s) as u32;
        idx /= s;
    }
    digits
}

/// All labels: anti-chains in enumeration order, each with its class tuples
/// in lexicographic order.
pub fn gwp_labels<T>(spec: &GwpSpec<T>) -> Result<Vec<GwpLabel>> {
    let r = spec.class_counts();
    let mut out = Vec::new();
    for y in spec.poset.antichains()? {
        let mut idx = vec![1u32; y.len()];
        if y.members().iter().any(|&x| r[x] == 0) {
            continue;
        }
        loop {
            out.push(GwpLabel { y: y.clone(), indices: idx.clone() });
            let Some(t) = (0..idx.len()).rev().find(|&t| (idx[t] as usize) < r[y.members()[t]]) else {
                break;
            };
            idx[t] += 1;
            idx[t + 1..].fill(1);
        }
    }
    Ok(out)
}

/// Builds the generalized wreath product on `Π Ω_x`.
pub fn build_gwp<T>(spec: GwpSpec<T>, bound: u128, mode: Parallelism) -> Result<GwpScheme<T>>
where
    T: Clone + Eq + Hash + fmt::Display + Send + Sync + 'static,
{
    let size = spec.product_size().unwrap_or(u128::MAX);
    if size > bound {
        return Err(Error::SizeBoundExceeded { size, bound });
    }
    let size = size as usize;
    let order = spec.poset.linear_extension();
    let labels = gwp_labels(&spec)?;
    let label_ids: HashMap<GwpLabel, u32> =
        labels.iter().enumerate().map(|(i, l)| (l.clone(), i as u32)).collect();
    let names = labels.iter().map(|l| label_name(&spec.poset, l)).collect();

    let digits: Arc<Vec<Vec<u32>>> = Arc::new(par::map_range(mode, size, |i| decode(&spec, &order, i)));
    let shared = Arc::new(spec.clone());
    let ids = label_ids.clone();
    let f = move |x: usize, y: usize| {
        let l = gwp_label_of_pair(&shared, &digits[x], &digits[y]);
        *ids.get(&l).expect("every disagreement label is enumerated")
    };
    let scheme = SchemeInstance::from_fn(size, names, mode, f);
    Ok(GwpScheme { spec, order, labels, scheme, label_ids })
}

fn label_name<T: fmt::Display>(poset: &Poset<T>, l: &GwpLabel) -> String {
    let parts: Vec<String> = l
        .y
        .members()
        .iter()
        .zip(&l.indices)
        .map(|(&x, i)| format!("{}:{i}", poset.element(x)))
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// Checks every pair against every label's defining conditions: exactly
/// one label must hold, and it must be the computed one.
pub fn cross_validate<T: Sync>(gwp: &GwpScheme<T>, mode: Parallelism) -> Result<()> {
    let spec = &gwp.spec;
    let n = gwp.scheme.size();
    let downs: Vec<Vec<bool>> = gwp
        .labels
        .iter()
        .map(|l| {
            let down = spec.poset.down_set(&l.y).expect("labels carry anti-chains");
            let mut free = vec![false; spec.poset.len()];
            for x in down.into_iter().chain(l.y.members().iter().copied()) {
                free[x] = true;
            }
            free
        })
        .collect();
    let fault = par::find_map_first(mode, n * n, |t| {
        let (a, b) = (gwp.decode(t / n), gwp.decode(t % n));
        let holding: Vec<usize> = (0..gwp.labels.len())
            .filter(|&k| {
                let l = &gwp.labels[k];
                let outside = (0..spec.poset.len()).all(|x| downs[k][x] || a[x] == b[x]);
                let classes = l.y.members().iter().zip(&l.indices).all(|(&x, &i)| {
                    spec.components[x].relation(a[x] as usize, b[x] as usize) == i
                });
                outside && classes
            })
            .collect();
        let computed = gwp.scheme.relation(t / n, t % n) as usize;
        (holding != [computed]).then(|| format!("pair ({}, {}) satisfies labels {holding:?}, computed {computed}", t / n, t % n))
    });
    fault.map_or(Ok(()), |m| Err(Error::GwpFault(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{
        cyclic_difference_scheme, equal_under_relabeling, one_class_scheme, valencies, verify_scheme, VerifyOptions,
    };

    const SEQ: Parallelism = Parallelism::Sequential;

    fn build<T>(poset: Poset<T>, comps: Vec<SchemeInstance>) -> GwpScheme<T>
    where
        T: Clone + Eq + Hash + fmt::Display + Send + Sync + 'static,
    {
        build_gwp(GwpSpec::new(poset, comps).unwrap(), PRODUCT_BOUND, Parallelism::Parallel).unwrap()
    }

    fn oc(q: usize) -> SchemeInstance {
        one_class_scheme(q).unwrap()
    }

    /// Whether the scheme's relation partition equals the one induced by
    /// `oracle` (label values compared only up to a bijection).
    fn same_partition(s: &SchemeInstance, oracle: impl Fn(usize, usize) -> u64) -> bool {
        let mut fwd = HashMap::new();
        let mut back = HashMap::new();
        for x in 0..s.size() {
            for y in 0..s.size() {
                let a = s.relation(x, y);
                let b = oracle(x, y);
                if *fwd.entry(a).or_insert(b) != b || *back.entry(b).or_insert(a) != a {
                    return false;
                }
            }
        }
        fwd.len() == s.label_count()
    }

    #[test]
    fn single_element_poset_reproduces_the_component() {
        for comp in [oc(3), cyclic_difference_scheme(4).unwrap()] {
            let g = build(Poset::chain(1), vec![comp.clone()]);
            let map: Vec<u32> = (0..comp.label_count() as u32).collect();
            assert!(equal_under_relabeling(&comp, &g.scheme, &map, SEQ));
        }
    }

    #[test]
    fn two_chain_over_gf2() {
        // elements 0 < 1; top is 1
        let g = build(Poset::chain(2), vec![oc(2), oc(2)]);
        let names: Vec<&str> = g.scheme.labels().iter().map(String::as_str).collect();
        assert_eq!(names, ["{}", "{0:1}", "{1:1}"]);
        assert_eq!(valencies(&g.scheme), vec![1, 1, 2]);
        // brute force over the 16 pairs: differing top coordinate means {1}
        for x in 0..4 {
            for y in 0..4 {
                let (a, b) = (g.decode(x), g.decode(y));
                let want = if a[1] != b[1] { 2 } else if a[0] != b[0] { 1 } else { 0 };
                assert_eq!(g.scheme.relation(x, y), want);
            }
        }
        assert!(verify_scheme(&g.scheme, &VerifyOptions::default()).is_valid());
    }

    #[test]
    fn two_antichain_is_the_direct_product() {
        let g = build(Poset::discrete(2), vec![oc(2), oc(2)]);
        assert_eq!(g.labels.len(), 4);
        assert_eq!(valencies(&g.scheme), vec![1, 1, 1, 1]);
        for (q1, q2) in [(2, 3), (3, 3)] {
            let (c1, c2) = (oc(q1), oc(q2));
            let g = build(Poset::discrete(2), vec![c1.clone(), c2.clone()]);
            let oracle = |x: usize, y: usize| {
                let (a, b) = (g.decode(x), g.decode(y));
                (c1.relation(a[0] as usize, b[0] as usize) as u64) * 10
                    + c2.relation(a[1] as usize, b[1] as usize) as u64
            };
            assert!(same_partition(&g.scheme, oracle));
        }
    }

    #[test]
    fn two_chain_is_the_wreath_product() {
        let z3 = cyclic_difference_scheme(3).unwrap();
        for (bottom, top) in [(oc(2), oc(3)), (oc(3), z3.clone()), (z3.clone(), oc(2))] {
            let g = build(Poset::chain(2), vec![bottom.clone(), top.clone()]);
            // ordinary wreath product: the top class decides, else the bottom one
            let oracle = |x: usize, y: usize| {
                let (a, b) = (g.decode(x), g.decode(y));
                let t = top.relation(a[1] as usize, b[1] as usize) as u64;
                if t != 0 {
                    100 + t
                } else {
                    bottom.relation(a[0] as usize, b[0] as usize) as u64
                }
            };
            assert!(same_partition(&g.scheme, oracle));
        }
    }

    fn small_posets() -> Vec<(&'static str, Poset<usize>)> {
        let p = |covers: &[(usize, usize)], n: usize| Poset::from_covers((0..n).collect(), covers).unwrap();
        let mut out = Vec::new();
        for k in 1..=4 {
            out.push(("chain", Poset::chain(k)));
            out.push(("antichain", Poset::discrete(k)));
        }
        out.push(("V", p(&[(0, 2), (1, 2)], 3)));
        out.push(("Λ", p(&[(0, 1), (0, 2)], 3)));
        out.push(("N", p(&[(0, 2), (1, 2), (1, 3)], 4)));
        out.push(("V+1", p(&[(0, 2), (1, 2)], 4)));
        out.push(("diamond", p(&[(0, 1), (0, 2), (1, 3), (2, 3)], 4)));
        out
    }

    #[test]
    fn small_products_are_association_schemes() {
        for (name, poset) in small_posets() {
            for sizes in [[2usize; 4], [3; 4], [2, 3, 2, 3]] {
                let comps = (0..poset.len()).map(|x| oc(sizes[x])).collect();
                let g = build(poset.clone(), comps);
                assert!(g.scheme.size() <= 81);
                let v = verify_scheme(&g.scheme, &VerifyOptions::default());
                assert!(v.is_valid(), "{name} {sizes:?}: {:?}", v.counterexample);
                assert!(v.parameters.unwrap().symmetric);
                assert_eq!(g.labels.len() as u128, g.spec.label_count().unwrap());
                cross_validate(&g, Parallelism::Parallel).unwrap();
            }
        }
    }

    #[test]
    fn non_symmetric_component_still_gives_a_scheme() {
        let z3 = cyclic_difference_scheme(3).unwrap();
        let g = build(Poset::chain(2), vec![oc(2), z3.clone()]);
        let v = verify_scheme(&g.scheme, &VerifyOptions::default());
        assert!(v.is_valid());
        assert!(!v.parameters.unwrap().symmetric);
        // labels: ∅, {0}:1, {1}:1, {1}:2
        assert_eq!(g.labels.len(), 4);
        cross_validate(&g, SEQ).unwrap();
        let v_poset = Poset::from_covers(vec![0usize, 1, 2], &[(0, 2), (1, 2)]).unwrap();
        let g = build(v_poset, vec![oc(2), oc(2), z3]);
        let v = verify_scheme(&g.scheme, &VerifyOptions::default());
        assert!(v.is_valid());
        assert!(!v.parameters.unwrap().symmetric);
    }

    #[test]
    fn pair_labels() {
        let spec = GwpSpec::new(Poset::chain(2), vec![oc(3), oc(3)]).unwrap();
        assert!(gwp_label_of_pair(&spec, &[1, 2], &[1, 2]).is_identity());
        let l = gwp_label_of_pair(&spec, &[0, 2], &[1, 2]);
        assert_eq!((l.y.members(), l.indices.as_slice()), (&[0usize][..], &[1u32][..]));
        // top differs: bottom coordinates are irrelevant
        for (a0, b0) in [(0, 0), (0, 2), (1, 2)] {
            let l = gwp_label_of_pair(&spec, &[a0, 0], &[b0, 1]);
            assert_eq!(l.y.members(), &[1]);
        }
    }

    #[test]
    fn label_json_shape() {
        let poset = Poset::from_covers(vec!["x".to_string(), "y".to_string()], &[]).unwrap();
        let spec = GwpSpec::new(poset, vec![oc(2), cyclic_difference_scheme(3).unwrap()]).unwrap();
        let l = gwp_label_of_pair(&spec, &[0, 0], &[1, 2]);
        assert_eq!(l.to_json(&spec.poset), json!({"Y": ["x", "y"], "indices": {"x": 1, "y": 2}}));
        assert_eq!(GwpLabel::identity().to_json(&spec.poset), json!({"Y": [], "indices": {}}));
    }

    #[test]
    fn invalid_inputs_and_bounds() {
        assert!(GwpSpec::new(Poset::chain(2), vec![oc(2)]).is_err());
        let spec = GwpSpec::new(Poset::discrete(3), vec![oc(3), oc(3), oc(3)]).unwrap();
        assert!(matches!(build_gwp(spec, 26, SEQ), Err(Error::SizeBoundExceeded { size: 27, .. })));
    }

    #[test]
    fn encoding_round_trip() {
        let g = build(Poset::from_covers(vec![0usize, 1, 2], &[(2, 0)]).unwrap(), vec![oc(2), oc(3), oc(2)]);
        assert_eq!(g.order, vec![1, 2, 0]);
        for i in 0..g.scheme.size() {
            assert_eq!(g.encode(&g.decode(i)), i);
        }
    }
}
