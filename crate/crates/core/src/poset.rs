//! Finite graded posets of weighted or pointed partitions.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use fixedbitset::FixedBitSet;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Caps, Error, Result};
use crate::partition::{PointedPartition, WeightedPartition};
use crate::poly::{binomial, ipow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Weighted,
    WeightedAugmented,
    Pointed,
    /// An induced subposet of the weighted partition poset.
    Induced,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Weighted => "weighted",
            Variant::WeightedAugmented => "augmented",
            Variant::Pointed => "pointed",
            Variant::Induced => "induced",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Element {
    Weighted(WeightedPartition),
    Pointed(PointedPartition),
    Top,
}

impl Element {
    pub fn weighted(&self) -> Option<&WeightedPartition> {
        match self {
            Element::Weighted(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Element::Top)
    }

    pub fn leq(&self, other: &Element) -> bool {
        match (self, other) {
            (_, Element::Top) => true,
            (Element::Top, _) => false,
            (Element::Weighted(a), Element::Weighted(b)) => a.leq(b),
            (Element::Pointed(a), Element::Pointed(b)) => a.leq(b),
            _ => false,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Weighted(p) => p.fmt(f),
            Element::Pointed(p) => p.fmt(f),
            Element::Top => f.write_str("top"),
        }
    }
}

/// A finite graded poset with explicit cover lists.
///
/// Elements are stored by increasing rank, so index order is a linear
/// extension of the partial order.
pub struct Poset {
    variant: Variant,
    ground: usize,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    rank: Vec<usize>,
    below: OnceLock<Vec<FixedBitSet>>,
    mobius_rows: Mutex<HashMap<usize, Arc<HashMap<usize, i64>>>>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("variant", &self.variant)
            .field("ground", &self.ground)
            .field("len", &self.elements.len())
            .finish()
    }
}

/// `Σ_k C(n,k)(n-k)^k`, the number of weighted partitions of `[n]`.
pub fn expected_size(n: usize) -> usize {
    (0..n)
        .map(|k| binomial(n as u64, k as u64) * ipow((n - k) as i64, k as u32))
        .sum::<num_bigint::BigInt>()
        .to_usize()
        .unwrap_or(usize::MAX)
}

impl Poset {
    /// Build the weighted, augmented or pointed partition poset on `[n]`.
    pub fn build(n: usize, variant: Variant, caps: &Caps) -> Result<Arc<Poset>> {
        if n == 0 {
            return arg("n must be at least 1");
        }
        Caps::check("poset n", n, caps.poset_n)?;
        Caps::check("poset elements", expected_size(n), caps.max_elements)?;
        let mut layers: Vec<Vec<Element>> = Vec::with_capacity(n + 1);
        match variant {
            Variant::Weighted | Variant::WeightedAugmented => {
                let mut layer = vec![WeightedPartition::bottom(n)];
                loop {
                    let next: std::collections::BTreeSet<WeightedPartition> =
                        layer.iter().flat_map(|p| p.up_covers()).collect();
                    layers.push(layer.into_iter().map(Element::Weighted).collect());
                    if next.is_empty() {
                        break;
                    }
                    layer = next.into_iter().collect();
                }
            }
            Variant::Pointed => {
                let mut layer = vec![PointedPartition::bottom(n)];
                loop {
                    let next: std::collections::BTreeSet<PointedPartition> =
                        layer.iter().flat_map(|p| p.up_covers()).collect();
                    layers.push(layer.into_iter().map(Element::Pointed).collect());
                    if next.is_empty() {
                        break;
                    }
                    layer = next.into_iter().collect();
                }
            }
            Variant::Induced => return arg("use Poset::induced for induced subposets"),
        }
        if variant == Variant::WeightedAugmented {
            layers.push(vec![Element::Top]);
        }
        let mut elements = Vec::new();
        let mut rank = Vec::new();
        for (r, layer) in layers.into_iter().enumerate() {
            rank.extend(std::iter::repeat(r).take(layer.len()));
            elements.extend(layer);
        }
        let index: HashMap<Element, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let mut up = vec![Vec::new(); elements.len()];
        for (i, e) in elements.iter().enumerate() {
            let covers: Vec<Element> = match e {
                Element::Weighted(p) => {
                    if p.len() == 1 {
                        if variant == Variant::WeightedAugmented {
                            vec![Element::Top]
                        } else {
                            vec![]
                        }
                    } else {
                        p.up_covers().into_iter().map(Element::Weighted).collect()
                    }
                }
                Element::Pointed(p) => p.up_covers().into_iter().map(Element::Pointed).collect(),
                Element::Top => vec![],
            };
            let mut ids: Vec<usize> = covers.iter().map(|c| index[c]).collect();
            ids.sort_unstable();
            ids.dedup();
            up[i] = ids;
        }
        Ok(Arc::new(Self::assemble(variant, n, elements, index, up, rank)))
    }

    /// The subposet induced on `parts`, ranked as in the weighted partition
    /// poset, with covers computed by transitive reduction.
    pub fn induced(ground: usize, parts: Vec<WeightedPartition>) -> Result<Arc<Poset>> {
        let mut parts = parts;
        parts.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| a.cmp(b)));
        parts.dedup();
        if parts.iter().any(|p| p.ground() != ground) {
            return arg("induced subposet elements must share the ground set");
        }
        let elements: Vec<Element> = parts.iter().cloned().map(Element::Weighted).collect();
        let rank: Vec<usize> = parts.iter().map(|p| p.rank()).collect();
        let index: HashMap<Element, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let m = parts.len();
        let mut less = vec![FixedBitSet::with_capacity(m); m];
        for i in 0..m {
            for j in i + 1..m {
                if parts[i] != parts[j] && parts[i].leq(&parts[j]) {
                    less[i].insert(j);
                }
            }
        }
        let mut up = vec![Vec::new(); m];
        for i in 0..m {
            for j in less[i].ones() {
                let between = less[i].ones().any(|k| k != j && less[k].contains(j));
                if !between {
                    up[i].push(j);
                }
            }
        }
        Ok(Arc::new(Self::assemble(
            Variant::Induced,
            ground,
            elements,
            index,
            up,
            rank,
        )))
    }

    fn assemble(
        variant: Variant,
        ground: usize,
        elements: Vec<Element>,
        index: HashMap<Element, usize>,
        up: Vec<Vec<usize>>,
        rank: Vec<usize>,
    ) -> Poset {
        let mut down = vec![Vec::new(); elements.len()];
        for (i, ups) in up.iter().enumerate() {
            for &j in ups {
                down[j].push(i);
            }
        }
        Poset {
            variant,
            ground,
            elements,
            index,
            up,
            down,
            rank,
            below: OnceLock::new(),
            mobius_rows: Mutex::new(HashMap::new()),
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn index_of_weighted(&self, p: &WeightedPartition) -> Option<usize> {
        self.index_of(&Element::Weighted(p.clone()))
    }

    pub fn up_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn down_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub fn bottom(&self) -> usize {
        0
    }

    /// Index of `[n]^i`, or of the single-block element in the pointed case
    /// with point `i + 1`.
    pub fn top_block(&self, weight: u32) -> Option<usize> {
        WeightedPartition::top(self.ground, weight)
            .ok()
            .and_then(|p| self.index_of_weighted(&p))
    }

    pub fn top(&self) -> Option<usize> {
        self.index_of(&Element::Top)
    }

    pub fn max_rank(&self) -> usize {
        self.rank.iter().copied().max().unwrap_or(0)
    }

    pub fn rank_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_rank() + 1];
        for &r in &self.rank {
            out[r] += 1;
        }
        out
    }

    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        self.up[x].binary_search(&y).is_ok()
    }

    /// Down-sets as bitsets (`below[y]` contains every `x <= y`).
    pub fn below(&self) -> &[FixedBitSet] {
        self.below.get_or_init(|| {
            let m = self.len();
            let mut below: Vec<FixedBitSet> = Vec::with_capacity(m);
            for y in 0..m {
                let mut set = FixedBitSet::with_capacity(m);
                set.insert(y);
                for &x in &self.down[y] {
                    set.union_with(&below[x]);
                }
                below.push(set);
            }
            below
        })
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        x == y || (self.rank[x] < self.rank[y] && self.elements[x].leq(&self.elements[y]))
    }

    /// Elements of `[x, y]` in index order.
    pub fn interval(&self, x: usize, y: usize) -> Vec<usize> {
        if !self.leq(x, y) {
            return Vec::new();
        }
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut stack = vec![x];
        seen.insert(x);
        while let Some(z) = stack.pop() {
            for &w in &self.up[z] {
                if !seen.contains(w) && self.leq(w, y) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen.ones().collect()
    }

    /// Elements `>= x`, in index order.
    pub fn up_set(&self, x: usize) -> Vec<usize> {
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut stack = vec![x];
        seen.insert(x);
        while let Some(z) = stack.pop() {
            for &w in &self.up[z] {
                if !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen.ones().collect()
    }

    /// `μ(x, z)` for every `z >= x`, memoized per `x`.
    pub fn mobius_row(&self, x: usize) -> Arc<HashMap<usize, i64>> {
        if let Some(row) = self.mobius_rows.lock().expect("memo lock").get(&x) {
            return row.clone();
        }
        let below = self.below();
        let ups = self.up_set(x);
        let mut upset = FixedBitSet::with_capacity(self.len());
        for &z in &ups {
            upset.insert(z);
        }
        let mut mu = vec![0i64; self.len()];
        let mut row = HashMap::with_capacity(ups.len());
        for &z in &ups {
            let value = if z == x {
                1
            } else {
                let mut between = below[z].clone();
                between.intersect_with(&upset);
                -between.ones().filter(|&w| w != z).map(|w| mu[w]).sum::<i64>()
            };
            mu[z] = value;
            row.insert(z, value);
        }
        let row = Arc::new(row);
        self.mobius_rows
            .lock()
            .expect("memo lock")
            .insert(x, row.clone());
        row
    }

    /// `μ(x, y)` by the recursive definition.
    pub fn mobius(&self, x: usize, y: usize) -> Result<i64> {
        if x >= self.len() || y >= self.len() {
            return arg("element index out of range");
        }
        if !self.leq(x, y) {
            return Err(Error::Argument(format!(
                "{} is not below {}",
                self.elements[x], self.elements[y]
            )));
        }
        Ok(self.mobius_row(x)[&y])
    }

    /// Graphviz rendering of the Hasse diagram, one rank per row.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n");
        for r in 0..=self.max_rank() {
            let ids: Vec<String> = (0..self.len())
                .filter(|&i| self.rank[i] == r)
                .map(|i| format!("n{i}"))
                .collect();
            s.push_str(&format!("  {{ rank=same; {} }}\n", ids.join("; ")));
        }
        for (i, e) in self.elements.iter().enumerate() {
            let label = e.to_string().trim_matches(|c| c == '{' || c == '}').to_string();
            s.push_str(&format!("  n{i} [label=\"{label}\"];\n"));
        }
        for (i, ups) in self.up.iter().enumerate() {
            for &j in ups {
                s.push_str(&format!("  n{i} -> n{j};\n"));
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sizes() {
        let caps = Caps::default();
        let p = Poset::build(3, Variant::Weighted, &caps).unwrap();
        assert_eq!(p.len(), 10);
        assert_eq!(p.rank_sizes(), vec![1, 6, 3]);
        let p1 = Poset::build(1, Variant::Weighted, &caps).unwrap();
        assert_eq!(p1.len(), 1);
        let p5 = Poset::build(5, Variant::Weighted, &caps).unwrap();
        assert_eq!(p5.len(), 196);
        assert_eq!(p5.rank_sizes(), vec![1, 20, 90, 80, 5]);
        assert_eq!(expected_size(5), 196);
    }

    #[test]
    fn covers_consistent_with_partition_covers() {
        let caps = Caps::default();
        let p = Poset::build(4, Variant::Weighted, &caps).unwrap();
        for x in 0..p.len() {
            for y in 0..p.len() {
                let a = p.element(x).weighted().unwrap();
                let b = p.element(y).weighted().unwrap();
                assert_eq!(
                    p.up_covers(x).contains(&y),
                    crate::partition::covers(a, b).unwrap()
                );
            }
        }
    }

    #[test]
    fn cap_is_an_error() {
        let caps = Caps {
            poset_n: 3,
            ..Caps::default()
        };
        let err = Poset::build(4, Variant::Weighted, &caps).unwrap_err();
        assert!(matches!(err, Error::Resource { cap: 3, .. }));
    }

    #[test]
    fn mobius_examples() {
        let caps = Caps::default();
        let p = Poset::build(3, Variant::Weighted, &caps).unwrap();
        let top1 = p.top_block(1).unwrap();
        assert_eq!(p.mobius(0, top1).unwrap(), 5);
        assert_eq!(p.mobius(0, 0).unwrap(), 1);
        let a = p
            .index_of_weighted(&WeightedPartition::parse(3, "12^1,3^0").unwrap())
            .unwrap();
        assert_eq!(p.mobius(0, a).unwrap(), -1);
        assert!(p.mobius(top1, 0).is_err());
    }

    #[test]
    fn augmented_has_top() {
        let p = Poset::build(3, Variant::WeightedAugmented, &Caps::default()).unwrap();
        let top = p.top().unwrap();
        assert_eq!(p.down_covers(top).len(), 3);
        assert_eq!(p.rank(top), 3);
    }

    #[test]
    fn dot_has_every_edge() {
        let p = Poset::build(2, Variant::Weighted, &Caps::default()).unwrap();
        let dot = p.to_dot();
        assert!(dot.contains("n0 -> n1"));
        assert!(dot.contains("n0 -> n2"));
        assert!(dot.contains("label=\"12^1\""));
    }
}
