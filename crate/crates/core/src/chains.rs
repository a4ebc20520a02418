//! Maximal chains indexed by bicolored trees and forests, their inverse, and
//! the boolean subposets spanned by edge subsets of a rooted tree.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{arg, internal, Result};
use crate::partition::{full_mask, Mask, WeightedPartition};
use crate::poset::Poset;
use crate::trees::bicolored::{BicoloredTree, Color, LinearExtension};
use crate::trees::rooted::RootedTree;

/// A saturated chain of weighted partitions, listed bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionChain(pub Vec<WeightedPartition>);

impl PartitionChain {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> &WeightedPartition {
        &self.0[0]
    }

    pub fn last(&self) -> &WeightedPartition {
        &self.0[self.0.len() - 1]
    }

    /// Element indices in `host`; fails if some element is missing.
    pub fn indices(&self, host: &Poset) -> Result<Vec<usize>> {
        self.0
            .iter()
            .map(|p| {
                host.index_of_weighted(p)
                    .ok_or_else(|| crate::Error::Argument(format!("{p} is not in the host poset")))
            })
            .collect()
    }

    /// The chain with both endpoints removed, as host indices.
    pub fn open_indices(&self, host: &Poset) -> Result<Vec<usize>> {
        let all = self.indices(host)?;
        Ok(all[1..all.len() - 1].to_vec())
    }

    /// The chain with its bottom removed, as host indices.
    pub fn upper_indices(&self, host: &Poset) -> Result<Vec<usize>> {
        Ok(self.indices(host)?[1..].to_vec())
    }
}

impl fmt::Display for PartitionChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(" ⋖ "))
    }
}

/// Ground size of a tree on leaf set `[n]`, or an error.
fn ground_of(t: &BicoloredTree) -> Result<usize> {
    let n = t.leaf_count();
    if t.mask() != full_mask(n) {
        return arg(format!("{t} does not have leaf set [{n}]"));
    }
    Ok(n)
}

/// `c(T, σ, τ)`: step `k` merges the blocks of the two children of the
/// `τ(k)`-th internal node in postorder, adding 1 to the weight when that
/// node is red.
pub fn chain_of_tree(t: &BicoloredTree, tau: &LinearExtension) -> Result<PartitionChain> {
    let n = ground_of(t)?;
    let nodes = t.postorder();
    if !tau.is_valid_for(&nodes) {
        return arg(format!("{:?} is not a linear extension of {t}", tau.0));
    }
    let mut cur = WeightedPartition::bottom(n);
    let mut out = vec![cur.clone()];
    for &k in &tau.0 {
        let node = &nodes[k];
        cur = cur.u_merge(&[node.left, node.right], node.color.u())?;
        out.push(cur.clone());
    }
    Ok(PartitionChain(out))
}

/// `c(T, σ)`, the chain of the postorder extension.
pub fn chain_of_tree_identity(t: &BicoloredTree) -> Result<PartitionChain> {
    chain_of_tree(t, &LinearExtension::identity(t.internal_count()))
}

/// Rebuild a tree and an extension from a maximal chain of `[0̂, [n]^i]`.
/// The merged block with the smaller minimum becomes the left child, so the
/// tree is normalized, and `τ` lists nodes in the order they were merged.
pub fn tree_of_chain(chain: &PartitionChain) -> Result<(BicoloredTree, LinearExtension)> {
    if chain.is_empty() {
        return arg("empty chain");
    }
    let n = chain.first().ground();
    if *chain.first() != WeightedPartition::bottom(n) || chain.last().len() != 1 || chain.len() != n {
        return arg("not a maximal chain from the bottom to a one-block element");
    }
    let mut pieces: HashMap<Mask, BicoloredTree> = (1..=n as u32)
        .map(|l| (crate::partition::label_bit(l), BicoloredTree::leaf(l)))
        .collect();
    // Created node, identified by its leaf mask, for each step.
    let mut created: Vec<Mask> = Vec::with_capacity(n - 1);
    for w in chain.0.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if !crate::partition::covers(a, b)? {
            return arg(format!("{a} is not covered by {b}"));
        }
        let gone: Vec<_> = a.blocks().iter().filter(|x| !b.blocks().contains(x)).collect();
        let new: Vec<_> = b.blocks().iter().filter(|x| !a.blocks().contains(x)).collect();
        let (&[p, q], &[m]) = (gone.as_slice(), new.as_slice()) else {
            return internal("a cover must merge exactly two blocks");
        };
        let (lo, hi) = if p.min_label() < q.min_label() { (p, q) } else { (q, p) };
        let color = Color::from_u(m.weight - p.weight - q.weight).expect("cover increment");
        let l = pieces.remove(&lo.members).expect("block piece");
        let r = pieces.remove(&hi.members).expect("block piece");
        pieces.insert(m.members, BicoloredTree::node(color, l, r));
        created.push(m.members);
    }
    let tree = pieces.remove(&full_mask(n)).expect("single block at the top");
    let nodes = tree.postorder();
    let by_mask: HashMap<Mask, usize> = nodes
        .iter()
        .enumerate()
        .map(|(k, x)| (x.left | x.right, k))
        .collect();
    let tau = LinearExtension(created.iter().map(|m| by_mask[m]).collect());
    Ok((tree, tau))
}

/// The forest chain: nodes of all trees, in the given order, each merging
/// its children's blocks. `merge_order` lists `(tree, postorder index)`.
pub fn chain_of_forest(
    n: usize,
    forest: &[BicoloredTree],
    merge_order: &[(usize, usize)],
) -> Result<PartitionChain> {
    let mut seen: Mask = 0;
    for t in forest {
        if t.mask() & seen != 0 {
            return arg("forest trees must have disjoint leaf sets");
        }
        seen |= t.mask();
    }
    if seen != full_mask(n) {
        return arg(format!("forest leaves do not cover [{n}]"));
    }
    let nodes: Vec<_> = forest.iter().map(|t| t.postorder()).collect();
    let total: usize = nodes.iter().map(|v| v.len()).sum();
    let mut done: Vec<Vec<bool>> = nodes.iter().map(|v| vec![false; v.len()]).collect();
    if merge_order.len() != total {
        return arg("merge order must list every internal node once");
    }
    let mut cur = WeightedPartition::bottom(n);
    let mut out = vec![cur.clone()];
    for &(ti, k) in merge_order {
        let Some(node) = nodes.get(ti).and_then(|v| v.get(k)) else {
            return arg(format!("no node ({ti}, {k})"));
        };
        let ready = [node.left_child, node.right_child]
            .into_iter()
            .flatten()
            .all(|c| done[ti][c]);
        if done[ti][k] || !ready {
            return arg("merge order is not a linear extension of the forest");
        }
        done[ti][k] = true;
        cur = cur.u_merge(&[node.left, node.right], node.color.u())?;
        out.push(cur.clone());
    }
    Ok(PartitionChain(out))
}

/// Postorder across the forest: all nodes of the first tree, then the second.
pub fn forest_postorder(forest: &[BicoloredTree]) -> Vec<(usize, usize)> {
    forest
        .iter()
        .enumerate()
        .flat_map(|(ti, t)| (0..t.internal_count()).map(move |k| (ti, k)))
        .collect()
}

/// The subposet of weighted partitions `α(T_E)` over edge subsets `E`.
#[derive(Debug, Clone)]
pub struct PiSubposet {
    pub tree: RootedTree,
    pub ground: usize,
    /// Edges as `(child, parent)`, in the order used for subset masks.
    pub edges: Vec<(u32, u32)>,
    /// `by_subset[E]` is the element for edge subset `E` (bit `j` is edge `j`).
    pub by_subset: Vec<WeightedPartition>,
    pub poset: Arc<Poset>,
}

impl PiSubposet {
    /// Host indices of every element of the subposet.
    pub fn embed(&self, host: &Poset) -> Result<Vec<usize>> {
        PartitionChain(self.by_subset.clone()).indices(host)
    }

    /// Every maximal chain, one per ordering of the edges.
    pub fn maximal_chains(&self) -> Vec<PartitionChain> {
        let m = self.edges.len();
        let mut out = Vec::new();
        let mut order = Vec::with_capacity(m);
        fn rec(
            me: &PiSubposet,
            used: usize,
            order: &mut Vec<usize>,
            out: &mut Vec<PartitionChain>,
        ) {
            let m = me.edges.len();
            if order.len() == m {
                let mut mask = 0usize;
                let mut chain = vec![me.by_subset[0].clone()];
                for &e in order.iter() {
                    mask |= 1 << e;
                    chain.push(me.by_subset[mask].clone());
                }
                out.push(PartitionChain(chain));
                return;
            }
            for e in 0..m {
                if used & (1 << e) == 0 {
                    order.push(e);
                    rec(me, used | (1 << e), order, out);
                    order.pop();
                }
            }
        }
        rec(self, 0, &mut order, &mut out);
        out
    }
}

/// `Π_T` with an explicit check that it is a boolean lattice on the edges.
pub fn pi_subposet(t: &RootedTree) -> Result<PiSubposet> {
    let ground = t.len();
    if t.mask() != full_mask(ground) {
        return arg("the tree must be on [n]");
    }
    let edges = t.edges();
    let m = edges.len();
    let by_subset: Vec<WeightedPartition> = (0..1usize << m)
        .map(|subset| {
            let kept: Mask = edges
                .iter()
                .enumerate()
                .filter(|(j, _)| subset & (1 << j) != 0)
                .fold(0, |acc, (_, (c, _))| acc | crate::partition::label_bit(*c));
            t.alpha_of_edges(ground, kept)
        })
        .collect();
    let poset = Poset::induced(ground, by_subset.clone())?;
    if poset.len() != 1 << m {
        return internal("edge subsets do not give distinct weighted partitions");
    }
    for a in 0..by_subset.len() {
        for b in 0..by_subset.len() {
            let subset = a & b == a;
            if subset != by_subset[a].leq(&by_subset[b]) {
                return internal("edge-subset order does not match weighted refinement");
            }
        }
    }
    Ok(PiSubposet {
        tree: t.clone(),
        ground,
        edges,
        by_subset,
        poset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> BicoloredTree {
        BicoloredTree::parse(s).unwrap()
    }

    fn p(n: usize, s: &str) -> WeightedPartition {
        WeightedPartition::parse(n, s).unwrap()
    }

    #[test]
    fn figure_chain() {
        let tree = t("<[<[3,4],6>,[1,5]],<<[2,7],9>,8>>");
        let c = chain_of_tree_identity(&tree).unwrap();
        assert_eq!(c.len(), 9);
        assert_eq!(c.0[2], p(9, "{1^0,2^0,346^1,5^0,7^0,8^0,9^0}"));
        assert_eq!(c.0[3], p(9, "{15^0,2^0,346^1,7^0,8^0,9^0}"));
        assert_eq!(c.0[4], p(9, "{13456^1,2^0,7^0,8^0,9^0}"));
        assert_eq!(c.0[7], p(9, "{13456^1,2789^2}"));
        assert_eq!(c.last(), &WeightedPartition::top(9, 4).unwrap());
    }

    #[test]
    fn small_chains() {
        let c = chain_of_tree_identity(&t("[1,2]")).unwrap();
        assert_eq!(c.to_string(), "{1^0,2^0} ⋖ {12^0}");
        let c = chain_of_tree_identity(&t("<1,2>")).unwrap();
        assert_eq!(c.last(), &p(2, "{12^1}"));
        let balanced = t("[[1,2],[3,4]]");
        let tau = LinearExtension(vec![1, 0, 2]);
        let c = chain_of_tree(&balanced, &tau).unwrap();
        assert_eq!(c.0[1], p(4, "{1^0,2^0,34^0}"));
        assert_eq!(tree_of_chain(&c).unwrap(), (balanced.clone(), tau));
        assert!(chain_of_tree(&balanced, &LinearExtension(vec![2, 0, 1])).is_err());
    }

    #[test]
    fn forests() {
        let f = [t("[1,2]"), t("3")];
        let c = chain_of_forest(3, &f, &forest_postorder(&f)).unwrap();
        assert_eq!(c.last(), &p(3, "{12^0,3^0}"));
        let f = [t("<1,2>"), t("[3,4]")];
        let c = chain_of_forest(4, &f, &forest_postorder(&f)).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.last(), &p(4, "{12^1,34^0}"));
        assert!(chain_of_forest(3, &[t("[1,2]"), t("[2,3]")], &[(0, 0), (1, 0)]).is_err());
    }

    #[test]
    fn pi_subposets() {
        let single = pi_subposet(&RootedTree::parse("1(2)").unwrap()).unwrap();
        assert_eq!(single.poset.len(), 2);
        let t4 = RootedTree::parse("3(1,2(4))").unwrap();
        let pi = pi_subposet(&t4).unwrap();
        assert_eq!(pi.poset.len(), 8);
        assert_eq!(pi.poset.rank_sizes(), vec![1, 3, 3, 1]);
        assert_eq!(pi.maximal_chains().len(), 6);
    }
}
