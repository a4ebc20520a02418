//! Liu's partial order on rooted trees with a fixed node set and descent count.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use fixedbitset::FixedBitSet;

use super::rooted::{enumerate_rooted_trees, RootedTree};
use crate::error::{arg, internal, Caps, Result};
use crate::partition::{mask_labels, Mask};

/// One component after deleting an edge: node set and descent count.
type Part = (Mask, usize);

/// The trees of one class `(node set, descents)` with the reachability
/// relation of the order.
#[derive(Debug)]
pub struct LiuClass {
    pub trees: Vec<RootedTree>,
    index: HashMap<RootedTree, usize>,
    /// `above[a]` holds every `b` with `trees[a] <= trees[b]`.
    above: Vec<FixedBitSet>,
}

impl LiuClass {
    pub fn index_of(&self, t: &RootedTree) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn leq_idx(&self, a: usize, b: usize) -> bool {
        self.above[a].contains(b)
    }
}

/// Memoized order computations, shared across node sets.
#[derive(Debug, Default)]
pub struct LiuOrder {
    caps: Caps,
    classes: Mutex<HashMap<(Mask, usize), Arc<LiuClass>>>,
}

impl LiuOrder {
    pub fn new(caps: Caps) -> Self {
        LiuOrder {
            caps,
            classes: Mutex::new(HashMap::new()),
        }
    }

    pub fn leq(&self, a: &RootedTree, b: &RootedTree) -> Result<bool> {
        if a.mask() != b.mask() || a.descents() != b.descents() {
            return arg("trees must share node set and descent count");
        }
        let class = self.class(a.mask(), a.descents())?;
        match (class.index_of(a), class.index_of(b)) {
            (Some(x), Some(y)) => Ok(class.leq_idx(x, y)),
            _ => internal("tree missing from its own class"),
        }
    }

    pub fn class(&self, mask: Mask, descents: usize) -> Result<Arc<LiuClass>> {
        if let Some(c) = self.classes.lock().expect("poisoned").get(&(mask, descents)) {
            return Ok(c.clone());
        }
        let built = Arc::new(self.build(mask, descents)?);
        self.classes
            .lock()
            .expect("poisoned")
            .insert((mask, descents), built.clone());
        Ok(built)
    }

    fn build(&self, mask: Mask, descents: usize) -> Result<LiuClass> {
        let labels: Vec<u32> = mask_labels(mask).collect();
        let trees = enumerate_rooted_trees(&labels, Some(descents), &self.caps)?;
        let m = trees.len();
        let index: HashMap<RootedTree, usize> =
            trees.iter().cloned().enumerate().map(|(k, t)| (t, k)).collect();
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
        if labels.len() <= 2 {
            for (a, s) in succ.iter_mut().enumerate() {
                s.insert(a);
            }
        } else {
            // Edge deletions of every tree, keyed by color and the two parts.
            let mut cuts: HashMap<(bool, Part, Part), Vec<(usize, RootedTree, RootedTree)>> =
                HashMap::new();
            for (k, t) in trees.iter().enumerate() {
                for (c, p) in t.edges() {
                    let below = t.subtree(c);
                    let rest = t.without_subtree(c);
                    let key = (c < p, part(&below), part(&rest));
                    cuts.entry(key).or_default().push((k, below, rest));
                }
            }
            for (k2, t2) in trees.iter().enumerate() {
                let root = t2.root();
                for x in t2.children(root) {
                    let below2 = t2.subtree(x);
                    let rest2 = t2.without_subtree(x);
                    let red = x < root;
                    // Either component of the first tree may carry the
                    // node set of the grafted subtree.
                    for (swap, key) in [
                        (false, (red, part(&below2), part(&rest2))),
                        (true, (red, part(&rest2), part(&below2))),
                    ] {
                        let Some(list) = cuts.get(&key) else { continue };
                        for (k1, b1, r1) in list {
                            let (with_below, with_rest) = if swap { (r1, b1) } else { (b1, r1) };
                            if self.leq(with_below, &below2)? && self.leq(with_rest, &rest2)? {
                                succ[*k1].insert(k2);
                            }
                        }
                    }
                }
            }
        }
        let above = closure(&succ)?;
        Ok(LiuClass {
            trees,
            index,
            above,
        })
    }

    /// Topological order of a class, ties broken by tree order.
    pub fn linear_extension(&self, mask: Mask, descents: usize) -> Result<Vec<RootedTree>> {
        let class = self.class(mask, descents)?;
        let m = class.trees.len();
        let mut indeg = vec![0usize; m];
        for a in 0..m {
            for b in class.above[a].ones() {
                if b != a {
                    indeg[b] += 1;
                }
            }
        }
        let mut ready: BTreeSet<(RootedTree, usize)> = (0..m)
            .filter(|&a| indeg[a] == 0)
            .map(|a| (class.trees[a].clone(), a))
            .collect();
        let mut out = Vec::with_capacity(m);
        while let Some((t, a)) = ready.pop_first() {
            out.push(t);
            for b in class.above[a].ones() {
                if b != a {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        ready.insert((class.trees[b].clone(), b));
                    }
                }
            }
        }
        if out.len() != m {
            return internal("cycle in the Liu order");
        }
        Ok(out)
    }
}

fn part(t: &RootedTree) -> Part {
    (t.mask(), t.descents())
}

/// Reflexive transitive closure of a successor relation; rejects cycles.
fn closure(succ: &[BTreeSet<usize>]) -> Result<Vec<FixedBitSet>> {
    let m = succ.len();
    let mut above = Vec::with_capacity(m);
    for a in 0..m {
        let mut seen = FixedBitSet::with_capacity(m);
        let mut stack = vec![a];
        seen.insert(a);
        while let Some(v) = stack.pop() {
            for &w in &succ[v] {
                if !seen.put(w) {
                    stack.push(w);
                }
            }
        }
        above.push(seen);
    }
    for (a, row) in above.iter().enumerate() {
        for b in row.ones() {
            if b != a && above[b].contains(a) {
                return internal("cycle in the Liu order relation");
            }
        }
    }
    Ok(above)
}

/// Convenience wrapper with default caps.
pub fn liu_leq(a: &RootedTree, b: &RootedTree) -> Result<bool> {
    LiuOrder::new(Caps::default()).leq(a, b)
}

pub fn liu_linear_extension(n: usize, descents: usize, caps: &Caps) -> Result<Vec<RootedTree>> {
    LiuOrder::new(*caps).linear_extension(crate::partition::full_mask(n), descents)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        let order = LiuOrder::new(Caps::default());
        let class = order.class(0b111, 1).unwrap();
        assert_eq!(class.trees.len(), 5);
        for a in 0..5 {
            assert!(class.leq_idx(a, a));
        }
        let ext = order.linear_extension(0b111, 1).unwrap();
        assert_eq!(ext.len(), 5);
        for (j, a) in ext.iter().enumerate() {
            for b in &ext[..j] {
                assert!(!order.leq(a, b).unwrap() || a == b);
            }
        }
    }
}
