//! Rooted labeled trees and forests, enumerated through Prüfer sequences.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Caps, Result};
use crate::partition::{label_bit, Mask, WeightedBlock, WeightedPartition};
use crate::poly::IntPolynomial;

/// A rooted tree on a finite set of positive labels. `parent[k]` is the parent
/// of `labels[k]`; exactly one entry (the root) is `None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootedTree {
    labels: Vec<u32>,
    parent: Vec<Option<u32>>,
}

impl RootedTree {
    pub fn new(parent_of: &BTreeMap<u32, Option<u32>>) -> Result<Self> {
        let labels: Vec<u32> = parent_of.keys().copied().collect();
        let parent: Vec<Option<u32>> = parent_of.values().copied().collect();
        let t = RootedTree { labels, parent };
        t.validate()?;
        Ok(t)
    }

    pub fn single(label: u32) -> Self {
        RootedTree {
            labels: vec![label],
            parent: vec![None],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.labels.is_empty() || self.labels.contains(&0) {
            return arg("a rooted tree needs at least one positive label");
        }
        if self.parent.iter().filter(|p| p.is_none()).count() != 1 {
            return arg("a rooted tree has exactly one root");
        }
        for &p in self.parent.iter().flatten() {
            if self.pos(p).is_none() {
                return arg(format!("parent {p} is not a node"));
            }
        }
        for &l in &self.labels {
            let mut cur = l;
            for _ in 0..=self.labels.len() {
                match self.parent_of(cur) {
                    Some(p) => cur = p,
                    None => break,
                }
            }
            if self.parent_of(cur).is_some() {
                return arg("parent map has a cycle");
            }
        }
        Ok(())
    }

    fn pos(&self, label: u32) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn mask(&self) -> Mask {
        self.labels.iter().fold(0, |m, &l| m | label_bit(l))
    }

    pub fn parent_of(&self, label: u32) -> Option<u32> {
        self.pos(label).and_then(|k| self.parent[k])
    }

    pub fn root(&self) -> u32 {
        let k = self.parent.iter().position(Option::is_none).expect("validated");
        self.labels[k]
    }

    pub fn children(&self, label: u32) -> Vec<u32> {
        self.labels
            .iter()
            .zip(&self.parent)
            .filter(|(_, p)| **p == Some(label))
            .map(|(&c, _)| c)
            .collect()
    }

    /// Edges as `(child, parent)` pairs, ordered by child.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        self.labels
            .iter()
            .zip(&self.parent)
            .filter_map(|(&c, p)| p.map(|p| (c, p)))
            .collect()
    }

    /// Nodes smaller than their parent.
    pub fn descents(&self) -> usize {
        self.edges().iter().filter(|(c, p)| c < p).count()
    }

    /// Labels of the subtree rooted at `label`.
    pub fn subtree_mask(&self, label: u32) -> Mask {
        let mut mask = label_bit(label);
        loop {
            let before = mask;
            for (c, p) in self.edges() {
                if mask & label_bit(p) != 0 {
                    mask |= label_bit(c);
                }
            }
            if mask == before {
                return mask;
            }
        }
    }

    /// The induced tree on a union of nodes closed under the tree structure
    /// (a subtree, or its complement), rooted at its topmost node.
    pub fn restrict(&self, mask: Mask) -> RootedTree {
        let mut labels = Vec::new();
        let mut parent = Vec::new();
        for (k, &l) in self.labels.iter().enumerate() {
            if mask & label_bit(l) != 0 {
                labels.push(l);
                parent.push(self.parent[k].filter(|&p| mask & label_bit(p) != 0));
            }
        }
        RootedTree { labels, parent }
    }

    /// The subtree rooted at `label`.
    pub fn subtree(&self, label: u32) -> RootedTree {
        self.restrict(self.subtree_mask(label))
    }

    /// The tree with the subtree rooted at `label` removed.
    pub fn without_subtree(&self, label: u32) -> RootedTree {
        self.restrict(self.mask() & !self.subtree_mask(label))
    }

    /// Attach `other`'s root as a new child of `at`.
    pub fn graft(&self, at: u32, other: &RootedTree) -> Result<RootedTree> {
        if self.mask() & other.mask() != 0 {
            return arg("grafted trees must have disjoint labels");
        }
        if self.pos(at).is_none() {
            return arg(format!("{at} is not a node"));
        }
        let other_root = other.root();
        let mut map: BTreeMap<u32, Option<u32>> = BTreeMap::new();
        for (k, &l) in self.labels.iter().enumerate() {
            map.insert(l, self.parent[k]);
        }
        for (k, &l) in other.labels.iter().enumerate() {
            map.insert(l, if l == other_root { Some(at) } else { other.parent[k] });
        }
        RootedTree::new(&map)
    }

    /// The weighted partition of the forest keeping only the edges whose
    /// children are in `kept` (a mask of child labels).
    pub fn alpha_of_edges(&self, ground: usize, kept: Mask) -> WeightedPartition {
        let edges: Vec<(u32, u32)> = self
            .edges()
            .into_iter()
            .filter(|(c, _)| kept & label_bit(*c) != 0)
            .collect();
        forest_alpha(ground, &self.labels, &edges)
    }

    /// Apply a relabeling; `perm[l - 1]` is the new name of `l`.
    pub fn relabel(&self, perm: &[u32]) -> RootedTree {
        let map: BTreeMap<u32, Option<u32>> = self
            .labels
            .iter()
            .zip(&self.parent)
            .map(|(&l, p)| (perm[l as usize - 1], p.map(|p| perm[p as usize - 1])))
            .collect();
        RootedTree::new(&map).expect("relabeling preserves validity")
    }

    fn fmt_node(&self, label: u32, out: &mut String) {
        out.push_str(&label.to_string());
        let kids = self.children(label);
        if !kids.is_empty() {
            out.push('(');
            for (k, c) in kids.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                self.fmt_node(*c, out);
            }
            out.push(')');
        }
    }

    /// Parse the nested form printed by `Display`, e.g. `3(1,2(4))`.
    pub fn parse(text: &str) -> Result<RootedTree> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut map = BTreeMap::new();
        let mut pos = 0;
        parse_node(&chars, &mut pos, None, &mut map)?;
        if pos != chars.len() {
            return arg(format!("trailing input in rooted tree {text:?}"));
        }
        RootedTree::new(&map)
    }
}

fn parse_node(
    chars: &[char],
    pos: &mut usize,
    parent: Option<u32>,
    map: &mut BTreeMap<u32, Option<u32>>,
) -> Result<()> {
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    let label: u32 = chars[start..*pos]
        .iter()
        .collect::<String>()
        .parse()
        .map_err(|_| crate::Error::Argument("expected a label".into()))?;
    if map.insert(label, parent).is_some() {
        return arg(format!("label {label} repeated"));
    }
    if *pos < chars.len() && chars[*pos] == '(' {
        *pos += 1;
        loop {
            parse_node(chars, pos, Some(label), map)?;
            match chars.get(*pos) {
                Some(',') => *pos += 1,
                Some(')') => {
                    *pos += 1;
                    break;
                }
                _ => return arg("unbalanced parentheses"),
            }
        }
    }
    Ok(())
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.fmt_node(self.root(), &mut s);
        f.write_str(&s)
    }
}

/// `α(F)`: one block per component, weighted by its number of descents.
pub fn forest_alpha(ground: usize, labels: &[u32], edges: &[(u32, u32)]) -> WeightedPartition {
    let mut comp: BTreeMap<u32, u32> = labels.iter().map(|&l| (l, l)).collect();
    fn find(comp: &mut BTreeMap<u32, u32>, x: u32) -> u32 {
        let p = comp[&x];
        if p == x {
            x
        } else {
            let r = find(comp, p);
            comp.insert(x, r);
            r
        }
    }
    for &(c, p) in edges {
        let (a, b) = (find(&mut comp, c), find(&mut comp, p));
        if a != b {
            comp.insert(a, b);
        }
    }
    let mut blocks: BTreeMap<u32, (Mask, u32)> = BTreeMap::new();
    for &l in labels {
        let r = find(&mut comp, l);
        blocks.entry(r).or_default().0 |= label_bit(l);
    }
    for &(c, p) in edges {
        if c < p {
            let r = find(&mut comp, c);
            blocks.get_mut(&r).expect("component").1 += 1;
        }
    }
    let blocks = blocks
        .into_values()
        .map(|(members, weight)| WeightedBlock { members, weight })
        .collect();
    WeightedPartition::new(ground, blocks).expect("forest components partition the ground set")
}

/// Decode a Prüfer sequence over vertices `0..m` into `m - 1` edges.
fn prufer_edges(seq: &[usize], m: usize, edges: &mut Vec<(usize, usize)>) {
    edges.clear();
    let mut degree = vec![1usize; m];
    for &s in seq {
        degree[s] += 1;
    }
    for &s in seq {
        let leaf = (0..m).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..m).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
}

/// Orient an undirected tree on `0..m` towards `root`.
fn orient(edges: &[(usize, usize)], m: usize, root: usize, parent: &mut [usize]) {
    let mut adj = vec![Vec::new(); m];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    parent[root] = usize::MAX;
    let mut stack = vec![root];
    let mut seen = vec![false; m];
    seen[root] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                stack.push(w);
            }
        }
    }
}

/// Step a mixed-radix counter; returns `false` after the last value.
fn next_sequence(seq: &mut [usize], radix: usize) -> bool {
    for d in seq.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Visit every rooted tree on vertices `0..m` as a parent array
/// (`usize::MAX` at the root). Order: by root, then by Prüfer sequence.
pub fn for_each_parent_array(m: usize, root: usize, mut visit: impl FnMut(&[usize])) {
    let mut parent = vec![usize::MAX; m];
    if m == 1 {
        visit(&parent);
        return;
    }
    let mut seq = vec![0usize; m - 2];
    let mut edges = Vec::with_capacity(m - 1);
    loop {
        prufer_edges(&seq, m, &mut edges);
        orient(&edges, m, root, &mut parent);
        visit(&parent);
        if !next_sequence(&mut seq, m) {
            break;
        }
    }
}

/// All rooted trees on `labels`, optionally only those with `descents`
/// descents, in canonical order (root-major, then Prüfer order).
pub fn enumerate_rooted_trees(
    labels: &[u32],
    descents: Option<usize>,
    caps: &Caps,
) -> Result<Vec<RootedTree>> {
    if labels.is_empty() {
        return arg("a rooted tree needs at least one node");
    }
    Caps::check("rooted tree labels", labels.len(), caps.rooted_n)?;
    let mut labels = labels.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let m = labels.len();
    let mut out = Vec::new();
    for root in 0..m {
        for_each_parent_array(m, root, |parent| {
            let d = (0..m)
                .filter(|&v| parent[v] != usize::MAX && v < parent[v])
                .count();
            if descents.is_none_or(|want| want == d) {
                out.push(RootedTree {
                    labels: labels.clone(),
                    parent: parent
                        .iter()
                        .map(|&p| (p != usize::MAX).then(|| labels[p]))
                        .collect(),
                });
            }
        });
    }
    Ok(out)
}

/// `Σ_i |{trees on [n] with i descents}| t^i`, counted without materialising
/// trees; shards by root.
pub fn descent_polynomial(n: usize, caps: &Caps) -> Result<IntPolynomial> {
    use rayon::prelude::*;
    if n == 0 {
        return arg("n must be at least 1");
    }
    Caps::check("rooted tree labels", n, caps.rooted_n)?;
    let per_root: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|root| {
            let mut counts = vec![0u64; n];
            for_each_parent_array(n, root, |parent| {
                let d = (0..n)
                    .filter(|&v| parent[v] != usize::MAX && v < parent[v])
                    .count();
                counts[d] += 1;
            });
            counts
        })
        .collect();
    let mut counts = vec![0u64; n];
    for c in per_root {
        for (k, v) in c.into_iter().enumerate() {
            counts[k] += v;
        }
    }
    Ok(IntPolynomial::new(
        counts.into_iter().map(num_bigint::BigInt::from).collect(),
    ))
}

/// Visit every rooted forest on `[n]` as a parent array over labels `1..=n`
/// (index 0 unused, roots have parent 0).
pub fn for_each_forest(n: usize, mut visit: impl FnMut(&[usize])) {
    for_each_parent_array(n + 1, 0, |parent| visit(parent));
}

/// Number of rooted forests on `[n]` with `k` trees, by enumeration.
pub fn forest_count(n: usize, k: usize, caps: &Caps) -> Result<u64> {
    if k == 0 || k > n {
        return arg(format!("need 1 <= k <= n, got k = {k}, n = {n}"));
    }
    Caps::check("forest n", n, caps.rooted_n)?;
    let mut count = 0;
    for_each_forest(n, |parent| {
        if (1..=n).filter(|&v| parent[v] == 0).count() == k {
            count += 1;
        }
    });
    Ok(count)
}

/// Number of rooted forests `F` on `[n]` with each value of `α(F)`.
pub fn forest_alpha_counts(n: usize, caps: &Caps) -> Result<BTreeMap<WeightedPartition, u64>> {
    Caps::check("forest n", n, caps.rooted_n)?;
    let labels: Vec<u32> = (1..=n as u32).collect();
    let mut out = BTreeMap::new();
    let mut edges = Vec::with_capacity(n);
    for_each_forest(n, |parent| {
        edges.clear();
        for v in 1..=n {
            if parent[v] != 0 {
                edges.push((v as u32, parent[v] as u32));
            }
        }
        *out.entry(forest_alpha(n, &labels, &edges)).or_insert(0) += 1;
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(n: usize) -> Vec<usize> {
        let labels: Vec<u32> = (1..=n as u32).collect();
        let trees = enumerate_rooted_trees(&labels, None, &Caps::default()).unwrap();
        let mut c = vec![0; n];
        for t in &trees {
            c[t.descents()] += 1;
        }
        c
    }

    #[test]
    fn small_descent_counts() {
        assert_eq!(counts(1), vec![1]);
        assert_eq!(counts(2), vec![1, 1]);
        assert_eq!(counts(3), vec![2, 5, 2]);
        assert_eq!(counts(4), vec![6, 26, 26, 6]);
    }

    #[test]
    fn descent_polynomial_matches_materialised_counts() {
        let p = descent_polynomial(4, &Caps::default()).unwrap();
        assert_eq!(p, IntPolynomial::from_i64(&[6, 26, 26, 6]));
    }

    #[test]
    fn enumeration_is_distinct_and_canonical() {
        let trees = enumerate_rooted_trees(&[2, 5, 7], None, &Caps::default()).unwrap();
        assert_eq!(trees.len(), 9);
        let set: std::collections::BTreeSet<_> = trees.iter().collect();
        assert_eq!(set.len(), 9);
        assert!(trees[..3].iter().all(|t| t.root() == 2));
    }

    #[test]
    fn forest_counts() {
        let caps = Caps::default();
        assert_eq!(forest_count(4, 2, &caps).unwrap(), 48);
        assert_eq!(forest_count(1, 1, &caps).unwrap(), 1);
        assert_eq!(forest_count(5, 1, &caps).unwrap(), 625);
        assert!(forest_count(3, 0, &caps).is_err());
    }

    #[test]
    fn subtree_surgery_and_parse() {
        let t = RootedTree::parse("3(1,2(4))").unwrap();
        assert_eq!(t.root(), 3);
        assert_eq!(t.descents(), 2);
        assert_eq!(t.subtree(2).to_string(), "2(4)");
        assert_eq!(t.without_subtree(2).to_string(), "3(1)");
        let back = t.without_subtree(2).graft(3, &t.subtree(2)).unwrap();
        assert_eq!(back, t);
        assert_eq!(t.to_string(), "3(1,2(4))");
    }

    #[test]
    fn alpha_of_all_edges() {
        let t = RootedTree::parse("3(1,2(4))").unwrap();
        let full = t.alpha_of_edges(4, t.mask());
        assert_eq!(full, WeightedPartition::top(4, 2).unwrap());
        let none = t.alpha_of_edges(4, 0);
        assert_eq!(none, WeightedPartition::bottom(4));
    }
}
