//! Labeled complete binary trees with blue and red internal nodes.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{arg, Caps, Result};
use crate::partition::{label_bit, mask_min, Mask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    /// Weight increment of a merge: 0 for blue, 1 for red.
    pub fn u(self) -> u32 {
        match self {
            Color::Blue => 0,
            Color::Red => 1,
        }
    }

    pub fn from_u(u: u32) -> Option<Color> {
        match u {
            0 => Some(Color::Blue),
            1 => Some(Color::Red),
            _ => None,
        }
    }

    pub fn flip(self) -> Color {
        match self {
            Color::Blue => Color::Red,
            Color::Red => Color::Blue,
        }
    }
}

/// Path from the root: `false` steps left, `true` steps right.
pub type Path = Vec<bool>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BicoloredTree {
    Leaf(u32),
    Node(Color, Arc<BicoloredTree>, Arc<BicoloredTree>),
}

use BicoloredTree::{Leaf, Node};

/// Per-internal-node data, listed in postorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeInfo {
    pub path: Path,
    pub color: Color,
    pub left: Mask,
    pub right: Mask,
    /// Postorder index of the parent, if any.
    pub parent: Option<usize>,
    pub left_child: Option<usize>,
    pub right_child: Option<usize>,
}

impl BicoloredTree {
    pub fn leaf(label: u32) -> Self {
        Leaf(label)
    }

    pub fn node(color: Color, left: BicoloredTree, right: BicoloredTree) -> Self {
        Node(color, Arc::new(left), Arc::new(right))
    }

    pub fn blue(left: BicoloredTree, right: BicoloredTree) -> Self {
        Self::node(Color::Blue, left, right)
    }

    pub fn red(left: BicoloredTree, right: BicoloredTree) -> Self {
        Self::node(Color::Red, left, right)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Leaf(_))
    }

    pub fn color(&self) -> Option<Color> {
        match self {
            Leaf(_) => None,
            Node(c, _, _) => Some(*c),
        }
    }

    pub fn children(&self) -> Option<(&BicoloredTree, &BicoloredTree)> {
        match self {
            Leaf(_) => None,
            Node(_, l, r) => Some((l, r)),
        }
    }

    pub fn left(&self) -> Option<&BicoloredTree> {
        self.children().map(|c| c.0)
    }

    pub fn right(&self) -> Option<&BicoloredTree> {
        self.children().map(|c| c.1)
    }

    /// Leaf labels left to right.
    pub fn leaves(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u32>) {
        match self {
            Leaf(l) => out.push(*l),
            Node(_, l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn mask(&self) -> Mask {
        match self {
            Leaf(l) => label_bit(*l),
            Node(_, l, r) => l.mask() | r.mask(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Leaf(_) => 1,
            Node(_, l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// `|I(T)|`.
    pub fn internal_count(&self) -> usize {
        self.leaf_count() - 1
    }

    pub fn red_count(&self) -> usize {
        match self {
            Leaf(_) => 0,
            Node(c, l, r) => c.u() as usize + l.red_count() + r.red_count(),
        }
    }

    /// Smallest leaf label: the valency used for combs and Lyndon trees.
    pub fn min_leaf(&self) -> u32 {
        mask_min(self.mask())
    }

    /// Recursive valency: a leaf's label, the min of the children at a blue
    /// node and the max at a red node.
    pub fn liu_valency(&self) -> u32 {
        match self {
            Leaf(l) => *l,
            Node(Color::Blue, l, r) => l.liu_valency().min(r.liu_valency()),
            Node(Color::Red, l, r) => l.liu_valency().max(r.liu_valency()),
        }
    }

    /// `sgn(T)`: 1 on a leaf, `(-1)^{|I(T_2)|} sgn(T_1) sgn(T_2)` on `T_1 ∧ T_2`.
    pub fn tree_sign(&self) -> i64 {
        match self {
            Leaf(_) => 1,
            Node(_, l, r) => parity(r.internal_count()) * l.tree_sign() * r.tree_sign(),
        }
    }

    /// `w(T)`: over internal nodes, the number of internal nodes in the
    /// right subtree.
    pub fn weight(&self) -> usize {
        match self {
            Leaf(_) => 0,
            Node(_, l, r) => r.internal_count() + l.weight() + r.weight(),
        }
    }

    /// Pairs `(x, y)` with `x` blue and `y` red, reached from `x` along
    /// right edges.
    pub fn inversions(&self) -> usize {
        match self {
            Leaf(_) => 0,
            Node(c, l, r) => {
                let own = if *c == Color::Blue {
                    let mut count = 0;
                    let mut cur: &BicoloredTree = r;
                    while let Node(cc, _, rr) = cur {
                        if *cc == Color::Red {
                            count += 1;
                        }
                        cur = rr;
                    }
                    count
                } else {
                    0
                };
                own + l.inversions() + r.inversions()
            }
        }
    }

    /// `(w(T), inv(T))`, compared lexicographically.
    pub fn measure(&self) -> (usize, usize) {
        (self.weight(), self.inversions())
    }

    /// Sign of the leaf word as a permutation of its sorted labels.
    pub fn leaf_word_sign(&self) -> i64 {
        permutation_sign(&self.leaves())
    }

    /// Internal nodes in postorder with their merge data.
    pub fn postorder(&self) -> Vec<NodeInfo> {
        let mut out = Vec::with_capacity(self.internal_count());
        let mut path = Vec::new();
        self.collect_postorder(&mut path, &mut out);
        out
    }

    fn collect_postorder(&self, path: &mut Path, out: &mut Vec<NodeInfo>) -> Option<usize> {
        match self {
            Leaf(_) => None,
            Node(c, l, r) => {
                path.push(false);
                let lc = l.collect_postorder(path, out);
                path.pop();
                path.push(true);
                let rc = r.collect_postorder(path, out);
                path.pop();
                let me = out.len();
                for child in [lc, rc].into_iter().flatten() {
                    out[child].parent = Some(me);
                }
                out.push(NodeInfo {
                    path: path.clone(),
                    color: *c,
                    left: l.mask(),
                    right: r.mask(),
                    parent: None,
                    left_child: lc,
                    right_child: rc,
                });
                Some(me)
            }
        }
    }

    pub fn subtree_at(&self, path: &[bool]) -> Option<&BicoloredTree> {
        let mut cur = self;
        for &step in path {
            let (l, r) = cur.children()?;
            cur = if step { r } else { l };
        }
        Some(cur)
    }

    /// Replace the subtree at `path` by `new`.
    pub fn replace_at(&self, path: &[bool], new: BicoloredTree) -> BicoloredTree {
        match path.split_first() {
            None => new,
            Some((&step, rest)) => match self {
                Leaf(_) => panic!("path runs past a leaf"),
                Node(c, l, r) => {
                    if step {
                        Node(*c, l.clone(), Arc::new(r.replace_at(rest, new)))
                    } else {
                        Node(*c, Arc::new(l.replace_at(rest, new)), r.clone())
                    }
                }
            },
        }
    }

    /// Every node's smallest leaf sits leftmost.
    pub fn is_normalized(&self) -> bool {
        match self {
            Leaf(_) => true,
            Node(_, l, r) => l.min_leaf() < r.min_leaf() && l.is_normalized() && r.is_normalized(),
        }
    }

    /// Normalize with the cohomology swap sign `(-1)^{|I(L)||I(R)|}`.
    pub fn normalize(&self) -> (i64, BicoloredTree) {
        self.normalize_with(&|l, r| parity(l.internal_count() * r.internal_count()))
    }

    /// Normalize with the antisymmetry sign `-1` per swap.
    pub fn normalize_lie(&self) -> (i64, BicoloredTree) {
        self.normalize_with(&|_, _| -1)
    }

    /// Recursively normalize children, then swap them when the right one
    /// holds the smaller label; `swap_sign(L, R)` is the sign of one swap.
    pub fn normalize_with(
        &self,
        swap_sign: &dyn Fn(&BicoloredTree, &BicoloredTree) -> i64,
    ) -> (i64, BicoloredTree) {
        match self {
            Leaf(_) => (1, self.clone()),
            Node(c, l, r) => {
                let (sl, nl) = l.normalize_with(swap_sign);
                let (sr, nr) = r.normalize_with(swap_sign);
                if nr.min_leaf() < nl.min_leaf() {
                    let s = swap_sign(&nl, &nr);
                    (sl * sr * s, Self::node(*c, nr, nl))
                } else {
                    (sl * sr, Self::node(*c, nl, nr))
                }
            }
        }
    }

    /// Swap the children of the node at `path`.
    pub fn swap_at(&self, path: &[bool]) -> Option<BicoloredTree> {
        match self.subtree_at(path)? {
            Leaf(_) => None,
            Node(c, l, r) => Some(self.replace_at(path, Node(*c, r.clone(), l.clone()))),
        }
    }

    pub fn with_color(&self, color: Color) -> BicoloredTree {
        match self {
            Leaf(_) => self.clone(),
            Node(_, l, r) => Node(color, l.clone(), r.clone()),
        }
    }

    /// Swap blue and red everywhere.
    pub fn color_swapped(&self) -> BicoloredTree {
        match self {
            Leaf(_) => self.clone(),
            Node(c, l, r) => Self::node(c.flip(), l.color_swapped(), r.color_swapped()),
        }
    }

    /// Apply a relabeling; `perm[l - 1]` is the new name of `l`.
    pub fn relabel(&self, perm: &[u32]) -> BicoloredTree {
        match self {
            Leaf(l) => Leaf(perm[*l as usize - 1]),
            Node(c, l, r) => Self::node(*c, l.relabel(perm), r.relabel(perm)),
        }
    }

    /// Preorder token string, e.g. `R B 1 2 3`.
    pub fn encode(&self) -> String {
        let mut toks = Vec::new();
        self.encode_into(&mut toks);
        toks.join(" ")
    }

    fn encode_into(&self, toks: &mut Vec<String>) {
        match self {
            Leaf(l) => toks.push(l.to_string()),
            Node(c, l, r) => {
                toks.push(if *c == Color::Blue { "B" } else { "R" }.into());
                l.encode_into(toks);
                r.encode_into(toks);
            }
        }
    }

    pub fn decode(text: &str) -> Result<BicoloredTree> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        let mut pos = 0;
        let t = decode_tokens(&toks, &mut pos)?;
        if pos != toks.len() {
            return arg("trailing tokens in tree encoding");
        }
        t.check_distinct()?;
        Ok(t)
    }

    /// Parse bracket notation: `[x,y]` is a blue node, `<x,y>` a red one.
    pub fn parse(text: &str) -> Result<BicoloredTree> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = parse_bracket(&chars, &mut pos)?;
        if pos != chars.len() {
            return arg(format!("trailing input in {text:?}"));
        }
        t.check_distinct()?;
        Ok(t)
    }

    fn check_distinct(&self) -> Result<()> {
        let mut leaves = self.leaves();
        let len = leaves.len();
        leaves.sort_unstable();
        leaves.dedup();
        if leaves.len() != len || leaves.first() == Some(&0) || leaves.iter().any(|&l| l > 31) {
            return arg("leaf labels must be distinct and in 1..=31");
        }
        Ok(())
    }
}

fn decode_tokens(toks: &[&str], pos: &mut usize) -> Result<BicoloredTree> {
    let Some(&tok) = toks.get(*pos) else {
        return arg("truncated tree encoding");
    };
    *pos += 1;
    match tok {
        "B" | "R" => {
            let l = decode_tokens(toks, pos)?;
            let r = decode_tokens(toks, pos)?;
            let c = if tok == "B" { Color::Blue } else { Color::Red };
            Ok(BicoloredTree::node(c, l, r))
        }
        _ => tok
            .parse()
            .map(Leaf)
            .map_err(|_| crate::Error::Argument(format!("bad token {tok:?}"))),
    }
}

fn parse_bracket(chars: &[char], pos: &mut usize) -> Result<BicoloredTree> {
    match chars.get(*pos) {
        Some(&open @ ('[' | '<')) => {
            *pos += 1;
            let l = parse_bracket(chars, pos)?;
            if chars.get(*pos) != Some(&',') {
                return arg("expected ','");
            }
            *pos += 1;
            let r = parse_bracket(chars, pos)?;
            let (close, color) = if open == '[' {
                (']', Color::Blue)
            } else {
                ('>', Color::Red)
            };
            if chars.get(*pos) != Some(&close) {
                return arg(format!("expected '{close}'"));
            }
            *pos += 1;
            Ok(BicoloredTree::node(color, l, r))
        }
        Some(c) if c.is_ascii_digit() => {
            let start = *pos;
            while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
                *pos += 1;
            }
            let s: String = chars[start..*pos].iter().collect();
            s.parse()
                .map(Leaf)
                .map_err(|_| crate::Error::Argument(format!("bad label {s:?}")))
        }
        _ => arg("expected a label, '[' or '<'"),
    }
}

impl fmt::Display for BicoloredTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leaf(l) => write!(f, "{l}"),
            Node(Color::Blue, l, r) => write!(f, "[{l},{r}]"),
            Node(Color::Red, l, r) => write!(f, "<{l},{r}>"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Leaf {
        leaf: u32,
    },
    Node {
        color: Color,
        left: Box<Repr>,
        right: Box<Repr>,
    },
}

impl From<&BicoloredTree> for Repr {
    fn from(t: &BicoloredTree) -> Repr {
        match t {
            Leaf(l) => Repr::Leaf { leaf: *l },
            Node(c, l, r) => Repr::Node {
                color: *c,
                left: Box::new(Repr::from(&**l)),
                right: Box::new(Repr::from(&**r)),
            },
        }
    }
}

impl From<Repr> for BicoloredTree {
    fn from(r: Repr) -> BicoloredTree {
        match r {
            Repr::Leaf { leaf } => Leaf(leaf),
            Repr::Node { color, left, right } => {
                BicoloredTree::node(color, (*left).into(), (*right).into())
            }
        }
    }
}

impl Serialize for BicoloredTree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Repr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BicoloredTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Repr::deserialize(d).map(Into::into)
    }
}

pub fn parity(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of a word of distinct integers relative to its sorted order.
pub fn permutation_sign(word: &[u32]) -> i64 {
    let mut inv = 0;
    for i in 0..word.len() {
        for j in i + 1..word.len() {
            if word[i] > word[j] {
                inv += 1;
            }
        }
    }
    parity(inv)
}

/// A linear extension of the internal nodes: entry `k` is the postorder
/// index of the `k`-th node listed. The identity is postorder itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearExtension(pub Vec<usize>);

impl LinearExtension {
    pub fn identity(len: usize) -> Self {
        LinearExtension((0..len).collect())
    }

    /// `sgn(τ)` from its inversions.
    pub fn sign(&self) -> i64 {
        permutation_sign(&self.0.iter().map(|&k| k as u32).collect::<Vec<_>>())
    }

    /// Each node listed after both its children.
    pub fn is_valid_for(&self, nodes: &[NodeInfo]) -> bool {
        if self.0.len() != nodes.len() {
            return false;
        }
        let mut at = vec![usize::MAX; nodes.len()];
        for (k, &v) in self.0.iter().enumerate() {
            if v >= nodes.len() || at[v] != usize::MAX {
                return false;
            }
            at[v] = k;
        }
        nodes.iter().enumerate().all(|(v, info)| {
            info.parent.is_none_or(|p| at[v] < at[p])
        })
    }
}

/// Every linear extension of the internal nodes, in lexicographic order.
pub fn linear_extensions(t: &BicoloredTree) -> Vec<LinearExtension> {
    let nodes = t.postorder();
    let m = nodes.len();
    let mut out = Vec::new();
    let mut placed = vec![false; m];
    let mut current = Vec::with_capacity(m);
    fn rec(
        nodes: &[NodeInfo],
        placed: &mut [bool],
        current: &mut Vec<usize>,
        out: &mut Vec<LinearExtension>,
    ) {
        if current.len() == nodes.len() {
            out.push(LinearExtension(current.clone()));
            return;
        }
        for v in 0..nodes.len() {
            if placed[v] {
                continue;
            }
            let ready = [nodes[v].left_child, nodes[v].right_child]
                .into_iter()
                .flatten()
                .all(|c| placed[c]);
            if ready {
                placed[v] = true;
                current.push(v);
                rec(nodes, placed, current, out);
                current.pop();
                placed[v] = false;
            }
        }
    }
    rec(&nodes, &mut placed, &mut current, &mut out);
    out
}

/// The linear extension along which smallest-leaf valencies weakly
/// decrease; ties list descendants first. Fails if not unique.
pub fn valency_decreasing_tau(t: &BicoloredTree) -> Result<LinearExtension> {
    if !t.is_normalized() {
        return arg("valency-decreasing extension needs a normalized tree");
    }
    let nodes = t.postorder();
    let val: Vec<u32> = nodes.iter().map(|x| mask_min(x.left | x.right)).collect();
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| {
        val[b]
            .cmp(&val[a])
            .then(nodes[b].path.len().cmp(&nodes[a].path.len()))
    });
    let tau = LinearExtension(order);
    if !tau.is_valid_for(&nodes) {
        return crate::error::internal("valency order is not a linear extension");
    }
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            if val[a] == val[b] {
                let (pa, pb) = (&nodes[a].path, &nodes[b].path);
                if !(pa.starts_with(pb) || pb.starts_with(pa)) {
                    return crate::error::internal(
                        "two incomparable nodes share a valency; the extension is not unique",
                    );
                }
            }
        }
    }
    Ok(tau)
}

/// All labeled bicolored trees with leaf set `[n]`, optionally with exactly
/// `red` red nodes. Deterministic order.
pub fn enumerate_bicolored(n: usize, red: Option<usize>, caps: &Caps) -> Result<Vec<BicoloredTree>> {
    if n == 0 {
        return arg("n must be at least 1");
    }
    Caps::check("bicolored n", n, caps.bicolored_n)?;
    let mut memo: HashMap<Mask, Arc<Vec<BicoloredTree>>> = HashMap::new();
    let all = all_on_mask(crate::partition::full_mask(n), &mut memo);
    Ok(all
        .iter()
        .filter(|t| red.is_none_or(|r| t.red_count() == r))
        .cloned()
        .collect())
}

fn all_on_mask(mask: Mask, memo: &mut HashMap<Mask, Arc<Vec<BicoloredTree>>>) -> Arc<Vec<BicoloredTree>> {
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let mut out = Vec::new();
    if mask.count_ones() == 1 {
        out.push(Leaf(mask_min(mask)));
    } else {
        let mut sub = (mask - 1) & mask;
        let mut splits = Vec::new();
        while sub != 0 {
            splits.push(sub);
            sub = (sub - 1) & mask;
        }
        splits.sort_unstable();
        for left in splits {
            let right = mask & !left;
            let ls = all_on_mask(left, memo);
            let rs = all_on_mask(right, memo);
            for color in [Color::Blue, Color::Red] {
                for l in ls.iter() {
                    for r in rs.iter() {
                        out.push(BicoloredTree::node(color, l.clone(), r.clone()));
                    }
                }
            }
        }
    }
    let out = Arc::new(out);
    memo.insert(mask, out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> BicoloredTree {
        BicoloredTree::parse(s).unwrap()
    }

    #[test]
    fn counts() {
        let caps = Caps::default();
        assert_eq!(enumerate_bicolored(2, None, &caps).unwrap().len(), 4);
        let all3 = enumerate_bicolored(3, None, &caps).unwrap();
        assert_eq!(all3.len(), 48);
        assert_eq!(all3.iter().filter(|t| t.is_normalized()).count(), 12);
        assert_eq!(enumerate_bicolored(4, Some(1), &caps).unwrap().len(), 5 * 24 * 3);
    }

    #[test]
    fn signs_weights_inversions() {
        assert_eq!(t("1").tree_sign(), 1);
        assert_eq!(t("1").measure(), (0, 0));
        assert_eq!(t("[[1,2],3]").tree_sign(), 1);
        assert_eq!(t("[1,[2,3]]").tree_sign(), -1);
        assert_eq!(t("[1,<2,3>]").inversions(), 1);
        assert_eq!(t("[1,<2,3>]").weight(), 1);
        assert_eq!(t("<1,[2,3]>").inversions(), 0);
    }

    #[test]
    fn normalize_examples() {
        let a = t("[[1,3],2]");
        assert_eq!(a.normalize(), (1, a.clone()));
        assert_eq!(t("[2,1]").normalize(), (1, t("[1,2]")));
        assert_eq!(t("[2,[1,3]]").normalize(), (1, t("[[1,3],2]")));
        assert_eq!(t("[[2,4],[1,3]]").normalize(), (-1, t("[[1,3],[2,4]]")));
        assert_eq!(t("[2,1]").normalize_lie(), (-1, t("[1,2]")));
    }

    #[test]
    fn extensions() {
        assert_eq!(linear_extensions(&t("[[[1,2],3],4]")).len(), 1);
        let balanced = t("[[1,2],[3,4]]");
        assert_eq!(linear_extensions(&balanced).len(), 2);
        let tau = valency_decreasing_tau(&balanced).unwrap();
        assert_eq!(tau, LinearExtension(vec![1, 0, 2]));
        assert_eq!(tau.sign(), -1);
    }

    #[test]
    fn round_trips() {
        let x = t("<[<[3,4],6>,[1,5]],<<[2,7],9>,8>>");
        assert_eq!(x.to_string(), "<[<[3,4],6>,[1,5]],<<[2,7],9>,8>>");
        assert_eq!(BicoloredTree::decode(&x.encode()).unwrap(), x);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(serde_json::from_str::<BicoloredTree>(&json).unwrap(), x);
        assert_eq!(x.leaves(), vec![3, 4, 6, 1, 5, 2, 7, 9, 8]);
        assert_eq!(x.red_count(), 4);
        assert!(BicoloredTree::parse("[1,1]").is_err());
    }
}
