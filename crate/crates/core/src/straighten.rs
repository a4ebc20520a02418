//! Rewriting tree-indexed generators into the comb basis, relation
//! instances, the map to cohomology, and basis verification.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize, Serializer};

use crate::chains::chain_of_tree_identity;
use crate::error::{arg, internal, Caps, Error, Result};
use crate::homology::{ChainVector, OrderComplex, TopCohomology};
use crate::poset::{Poset, Variant};
use crate::trees::bicolored::{enumerate_bicolored, parity, BicoloredTree, Color, Path};
use crate::trees::families::{enumerate_family, is_comb, Family};

/// Which quotient a tree sum lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// Top cohomology of `(0̂, [n]^i)` through `c̄`.
    Cohomology,
    /// The multilinear part of the free Lie algebra with two compatible
    /// brackets.
    Lie2,
    /// Top cohomology of `Π_n^w ∖ {0̂}` through `c̆`.
    FullPoset,
}

impl Side {
    pub const ALL: [Side; 3] = [Side::Cohomology, Side::Lie2, Side::FullPoset];

    /// `k` with `g(L ∧ R) = k · g(R ∧ L)`.
    pub fn swap_sign(self, l: &BicoloredTree, r: &BicoloredTree) -> i64 {
        match self {
            Side::Lie2 => -1,
            _ => parity(l.internal_count() * r.internal_count()),
        }
    }

    /// Coefficient of `(Υ1 ∧ Υ2) ∧ Υ3` in the three-term relation.
    fn left_coeff(self, _y1: &BicoloredTree, _y2: &BicoloredTree, y3: &BicoloredTree) -> i64 {
        match self {
            Side::Lie2 => -1,
            _ => parity(y3.internal_count()),
        }
    }

    /// Coefficient of `Υ2 ∧ (Υ1 ∧ Υ3)` in the three-term relation.
    fn exchange_coeff(self, y1: &BicoloredTree, y2: &BicoloredTree, _y3: &BicoloredTree) -> i64 {
        match self {
            Side::Lie2 => -1,
            _ => parity(y1.internal_count() * y2.internal_count()),
        }
    }

    pub fn normalize(self, t: &BicoloredTree) -> (i64, BicoloredTree) {
        match self {
            Side::Lie2 => t.normalize_lie(),
            _ => t.normalize(),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Cohomology => "cohomology",
            Side::Lie2 => "lie2",
            Side::FullPoset => "full",
        })
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cohomology" => Ok(Side::Cohomology),
            "lie2" => Ok(Side::Lie2),
            "full" | "full-poset" => Ok(Side::FullPoset),
            _ => arg(format!("unknown side {s:?}")),
        }
    }
}

/// Formal integer combination of labeled bicolored trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSum {
    pub side: Side,
    pub terms: BTreeMap<BicoloredTree, i64>,
}

#[derive(Serialize)]
struct TermJson {
    tree: String,
    coeff: i64,
}

#[derive(Serialize)]
struct TreeSumJson {
    side: Side,
    terms: Vec<TermJson>,
}

impl Serialize for TreeSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TreeSumJson {
            side: self.side,
            terms: self
                .terms
                .iter()
                .map(|(t, &c)| TermJson {
                    tree: t.to_string(),
                    coeff: c,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl TreeSum {
    pub fn zero(side: Side) -> Self {
        TreeSum {
            side,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(side: Side, t: BicoloredTree, coeff: i64) -> Self {
        let mut s = Self::zero(side);
        s.add_term(t, coeff).expect("a single term cannot overflow");
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: &BicoloredTree) -> i64 {
        self.terms.get(t).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, t: BicoloredTree, coeff: i64) -> Result<()> {
        if coeff == 0 {
            return Ok(());
        }
        let e = self.terms.entry(t.clone()).or_insert(0);
        *e = e.checked_add(coeff).ok_or(Error::Overflow("tree sum"))?;
        if *e == 0 {
            self.terms.remove(&t);
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &TreeSum, k: i64) -> Result<()> {
        for (t, &c) in &other.terms {
            let v = c.checked_mul(k).ok_or(Error::Overflow("tree sum"))?;
            self.add_term(t.clone(), v)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tree sums serialize")
    }
}

impl fmt::Display for TreeSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(t, c)| format!("{c:+} {t}")).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Swap,
    Assoc,
    Mixed,
    Type4,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::Swap => "swap",
            RelationKind::Assoc => "assoc",
            RelationKind::Mixed => "mixed",
            RelationKind::Type4 => "type4",
        })
    }
}

/// A relation applied at the node of `tree` reached by `path`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationInstance {
    pub kind: RelationKind,
    pub tree: String,
    pub path: String,
}

fn path_string(path: &[bool]) -> String {
    if path.is_empty() {
        "root".into()
    } else {
        path.iter().map(|&r| if r { 'R' } else { 'L' }).collect()
    }
}

/// One rewrite: the relation used, where, and the measure of the rewritten
/// tree against the measures of the trees replacing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub kind: RelationKind,
    pub tree: String,
    pub path: String,
    pub before: (usize, usize),
    pub after: Vec<(usize, usize)>,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let after: Vec<String> = self.after.iter().map(|m| format!("{m:?}")).collect();
        write!(
            f,
            "{} at {} of {}: {:?} -> {}",
            self.kind,
            self.path,
            self.tree,
            self.before,
            after.join(" ")
        )
    }
}

/// Subtrees of the pattern `Υ1 ∧ (Υ2 ∧ Υ3)` at `path`.
struct Pattern<'a> {
    path: Path,
    outer: Color,
    inner: Color,
    y1: &'a BicoloredTree,
    y2: &'a BicoloredTree,
    y3: &'a BicoloredTree,
}

fn pattern_at<'a>(t: &'a BicoloredTree, path: &[bool]) -> Option<Pattern<'a>> {
    let BicoloredTree::Node(outer, y1, right) = t.subtree_at(path)? else {
        return None;
    };
    let BicoloredTree::Node(inner, y2, y3) = right.as_ref() else {
        return None;
    };
    Some(Pattern {
        path: path.to_vec(),
        outer: *outer,
        inner: *inner,
        y1,
        y2,
        y3,
    })
}

/// First node in postorder where a normalized tree fails to be a comb.
fn offending_pattern(t: &BicoloredTree) -> Option<Pattern<'_>> {
    for node in t.postorder() {
        if let Some(p) = pattern_at(t, &node.path) {
            if p.outer == p.inner || (p.outer == Color::Blue && p.inner == Color::Red) {
                return Some(p);
            }
        }
    }
    None
}

use BicoloredTree as T;

/// The terms other than `Υ1 c∧(Υ2 c∧Υ3)` of the three-term relation at the
/// pattern, moved to the other side: `g(main) = Σ k · g(tree)`.
fn assoc_rewrite(side: Side, t: &BicoloredTree, p: &Pattern) -> Vec<(i64, BicoloredTree)> {
    let c = p.outer;
    let (y1, y2, y3) = (p.y1.clone(), p.y2.clone(), p.y3.clone());
    let b = side.left_coeff(p.y1, p.y2, p.y3);
    let e = side.exchange_coeff(p.y1, p.y2, p.y3);
    let left = T::node(c, T::node(c, y1.clone(), y2.clone()), y3.clone());
    let inner = T::node(c, y1, y3);
    let sw = side.swap_sign(&y2, &inner);
    let exchanged = T::node(c, inner, y2);
    vec![
        (-b, t.replace_at(&p.path, left)),
        (-e * sw, t.replace_at(&p.path, exchanged)),
    ]
}

/// The six-term relation solved for `Υ1 b∧(Υ2 r∧Υ3)`.
fn mixed_rewrite(side: Side, t: &BicoloredTree, p: &Pattern) -> Vec<(i64, BicoloredTree)> {
    let (y1, y2, y3) = (p.y1.clone(), p.y2.clone(), p.y3.clone());
    let b = side.left_coeff(p.y1, p.y2, p.y3);
    let e = side.exchange_coeff(p.y1, p.y2, p.y3);
    let (bl, rd) = (Color::Blue, Color::Red);
    let flipped = T::node(rd, y1.clone(), T::node(bl, y2.clone(), y3.clone()));
    let left_rb = T::node(bl, T::node(rd, y1.clone(), y2.clone()), y3.clone());
    let left_br = T::node(rd, T::node(bl, y1.clone(), y2.clone()), y3.clone());
    let in_b = T::node(bl, y1.clone(), y3.clone());
    let in_r = T::node(rd, y1, y3);
    let sw_b = side.swap_sign(&y2, &in_b);
    let sw_r = side.swap_sign(&y2, &in_r);
    let ex_rb = T::node(rd, in_b, y2.clone());
    let ex_br = T::node(bl, in_r, y2);
    vec![
        (-1, t.replace_at(&p.path, flipped)),
        (-b, t.replace_at(&p.path, left_rb)),
        (-b, t.replace_at(&p.path, left_br)),
        (-e * sw_b, t.replace_at(&p.path, ex_rb)),
        (-e * sw_r, t.replace_at(&p.path, ex_br)),
    ]
}

fn root_right_size(t: &BicoloredTree) -> usize {
    t.right().map_or(0, |r| r.internal_count())
}

/// Memoized straightening for one side.
#[derive(Debug)]
pub struct Straightener {
    side: Side,
    memo: Mutex<HashMap<BicoloredTree, Arc<TreeSum>>>,
    full_memo: Mutex<HashMap<BicoloredTree, Arc<TreeSum>>>,
    trace: Option<Mutex<Vec<TraceStep>>>,
}

impl Straightener {
    pub fn new(side: Side) -> Self {
        Straightener {
            side,
            memo: Mutex::new(HashMap::new()),
            full_memo: Mutex::new(HashMap::new()),
            trace: None,
        }
    }

    /// Also records every rewrite that is actually performed.
    pub fn with_trace(side: Side) -> Self {
        Straightener {
            trace: Some(Mutex::new(Vec::new())),
            ..Self::new(side)
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn take_trace(&self) -> Vec<TraceStep> {
        self.trace
            .as_ref()
            .map(|m| std::mem::take(&mut *m.lock().expect("trace lock")))
            .unwrap_or_default()
    }

    fn log(&self, step: TraceStep) {
        if let Some(m) = &self.trace {
            m.lock().expect("trace lock").push(step);
        }
    }

    /// Express one generator in the comb basis (blue-rooted combs on the
    /// full-poset side).
    pub fn straighten(&self, t: &BicoloredTree) -> Result<TreeSum> {
        let (sign, norm) = self.side.normalize(t);
        let reduced = match self.side {
            Side::FullPoset => self.reduce_full(&norm)?,
            _ => self.reduce(&norm)?,
        };
        let mut out = TreeSum::zero(self.side);
        out.add_scaled(&reduced, sign)?;
        Ok(out)
    }

    pub fn straighten_sum(&self, s: &TreeSum) -> Result<TreeSum> {
        if s.side != self.side {
            return arg("tree sum belongs to another side");
        }
        let mut out = TreeSum::zero(self.side);
        for (t, &c) in &s.terms {
            out.add_scaled(&self.straighten(t)?, c)?;
        }
        Ok(out)
    }

    fn table(&self, full: bool) -> &Mutex<HashMap<BicoloredTree, Arc<TreeSum>>> {
        if full {
            &self.full_memo
        } else {
            &self.memo
        }
    }

    fn cached(&self, full: bool, t: &BicoloredTree) -> Option<Arc<TreeSum>> {
        self.table(full).lock().expect("memo lock").get(t).cloned()
    }

    fn store(&self, full: bool, t: &BicoloredTree, s: TreeSum) -> Arc<TreeSum> {
        let s = Arc::new(s);
        self.table(full).lock().expect("memo lock").insert(t.clone(), s.clone());
        s
    }

    /// Straighten a normalized tree; every rewrite must lower `(w, inv)`.
    fn reduce(&self, t: &BicoloredTree) -> Result<Arc<TreeSum>> {
        if let Some(s) = self.cached(false, t) {
            return Ok(s);
        }
        let Some(p) = offending_pattern(t) else {
            return Ok(self.store(false, t, TreeSum::single(self.side, t.clone(), 1)));
        };
        let (kind, terms) = if p.outer == p.inner {
            (RelationKind::Assoc, assoc_rewrite(self.side, t, &p))
        } else {
            (RelationKind::Mixed, mixed_rewrite(self.side, t, &p))
        };
        let before = t.measure();
        let after: Vec<(usize, usize)> = terms.iter().map(|(_, u)| u.measure()).collect();
        self.log(TraceStep {
            kind,
            tree: t.to_string(),
            path: path_string(&p.path),
            before,
            after: after.clone(),
        });
        if after.iter().any(|m| *m >= before) {
            return internal(format!("rewrite of {t} did not lower the weight-inversion pair"));
        }
        let mut out = TreeSum::zero(self.side);
        for (k, u) in terms {
            if !u.is_normalized() {
                return internal(format!("rewrite produced the unnormalized tree {u}"));
            }
            out.add_scaled(&*self.reduce(&u)?, k)?;
        }
        Ok(self.store(false, t, out))
    }

    /// Full-poset side: straighten, recolor red roots, and split blue roots
    /// over blue right children; the right-subtree size must drop.
    fn reduce_full(&self, t: &BicoloredTree) -> Result<Arc<TreeSum>> {
        if let Some(s) = self.cached(true, t) {
            return Ok(s);
        }
        let bound = root_right_size(t);
        let combs = self.reduce(t)?;
        let mut out = TreeSum::zero(self.side);
        for (c, &k) in &combs.terms {
            if root_right_size(c) > bound {
                return internal(format!("straightening {t} grew the right subtree"));
            }
            let (c, k) = match c.color() {
                Some(Color::Red) => {
                    let blue = c.with_color(Color::Blue);
                    self.log(TraceStep {
                        kind: RelationKind::Type4,
                        tree: c.to_string(),
                        path: path_string(&[]),
                        before: (root_right_size(c), 0),
                        after: vec![(root_right_size(&blue), 0)],
                    });
                    (blue, -k)
                }
                _ => (c.clone(), k),
            };
            match pattern_at(&c, &[]) {
                Some(p) if p.inner == Color::Blue => {
                    let terms = assoc_rewrite(self.side, &c, &p);
                    let before = (root_right_size(&c), 0);
                    let after: Vec<(usize, usize)> = terms.iter().map(|(_, u)| (root_right_size(u), 0)).collect();
                    self.log(TraceStep {
                        kind: RelationKind::Assoc,
                        tree: c.to_string(),
                        path: path_string(&[]),
                        before,
                        after: after.clone(),
                    });
                    if after.iter().any(|m| m.0 >= before.0) {
                        return internal(format!("rewrite of {c} did not shrink the right subtree"));
                    }
                    for (j, u) in terms {
                        out.add_scaled(&*self.reduce_full(&u)?, k * j)?;
                    }
                }
                _ => out.add_term(c, k)?,
            }
        }
        Ok(self.store(true, t, out))
    }
}

/// Straighten with a fresh engine.
pub fn straighten(t: &BicoloredTree, side: Side) -> Result<TreeSum> {
    Straightener::new(side).straighten(t)
}

pub fn straighten_full_poset(t: &BicoloredTree) -> Result<TreeSum> {
    Straightener::new(Side::FullPoset).straighten(t)
}

/// Whether a sum is supported on the target basis of its side.
pub fn is_straightened(s: &TreeSum) -> bool {
    s.terms.keys().all(|t| match s.side {
        Side::FullPoset => is_comb(t) && t.color() != Some(Color::Red),
        _ => is_comb(t),
    })
}

/// Every instance of every relation on trees with leaf set `[n]` (and `red`
/// red nodes when given), as sums that vanish in the quotient.
pub fn relation_instances(
    n: usize,
    red: Option<usize>,
    side: Side,
    caps: &Caps,
) -> Result<Vec<(RelationInstance, TreeSum)>> {
    let trees = enumerate_bicolored(n, red, caps)?;
    let mut out = Vec::new();
    for t in &trees {
        for node in t.postorder() {
            let inst = |kind| RelationInstance {
                kind,
                tree: t.to_string(),
                path: path_string(&node.path),
            };
            let (l, r) = t.subtree_at(&node.path).and_then(|s| s.children()).expect("internal node");
            let mut s = TreeSum::single(side, t.clone(), 1);
            s.add_term(t.swap_at(&node.path).expect("internal node"), -side.swap_sign(l, r))?;
            out.push((inst(RelationKind::Swap), s));
            let Some(p) = pattern_at(t, &node.path) else { continue };
            if p.outer == p.inner || (p.outer == Color::Blue && p.inner == Color::Red) {
                let (kind, terms) = if p.outer == p.inner {
                    (RelationKind::Assoc, assoc_rewrite(side, t, &p))
                } else {
                    (RelationKind::Mixed, mixed_rewrite(side, t, &p))
                };
                let mut s = TreeSum::single(side, t.clone(), 1);
                for (k, u) in terms {
                    s.add_term(u, -k)?;
                }
                out.push((inst(kind), s));
            }
        }
        if side == Side::FullPoset && t.color() == Some(Color::Red) {
            let mut s = TreeSum::single(side, t.clone(), 1);
            s.add_term(t.with_color(Color::Blue), 1)?;
            out.push((
                RelationInstance {
                    kind: RelationKind::Type4,
                    tree: t.to_string(),
                    path: path_string(&[]),
                },
                s,
            ));
        }
    }
    Ok(out)
}

fn to_u32(v: Vec<usize>) -> Vec<u32> {
    v.into_iter().map(|x| x as u32).collect()
}

/// `c̄(t)` in the open interval below the top of `t`'s chain.
pub fn interval_cochain(t: &BicoloredTree, host: &Poset) -> Result<ChainVector> {
    let c = chain_of_tree_identity(t)?;
    Ok(ChainVector::single(to_u32(c.open_indices(host)?), 1))
}

/// `c̆(t)`: the chain without its bottom.
pub fn full_cochain(t: &BicoloredTree, host: &Poset) -> Result<ChainVector> {
    let c = chain_of_tree_identity(t)?;
    Ok(ChainVector::single(to_u32(c.upper_indices(host)?), 1))
}

/// `sgn(σ) sgn(T) c̄(T, σ)`.
pub fn phi(t: &BicoloredTree, host: &Poset) -> Result<ChainVector> {
    interval_cochain(t, host)?.scaled(t.leaf_word_sign() * t.tree_sign())
}

/// Lazily built top cohomology groups of one weighted poset.
#[derive(Debug)]
pub struct Oracle {
    pub host: Arc<Poset>,
    caps: Caps,
    intervals: Vec<OnceLock<Arc<TopCohomology>>>,
    full: OnceLock<Arc<TopCohomology>>,
}

impl Oracle {
    pub fn new(n: usize, caps: &Caps) -> Result<Self> {
        Caps::check("homology n", n, caps.homology_n)?;
        let host = Poset::build(n, Variant::Weighted, caps)?;
        Ok(Oracle {
            host,
            caps: *caps,
            intervals: (0..n).map(|_| OnceLock::new()).collect(),
            full: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.host.ground()
    }

    /// Top cohomology of `(0̂, [n]^i)`.
    pub fn interval(&self, i: usize) -> Result<Arc<TopCohomology>> {
        let Some(cell) = self.intervals.get(i) else {
            return arg(format!("weight {i} out of range"));
        };
        if let Some(h) = cell.get() {
            return Ok(h.clone());
        }
        let top = self
            .host
            .top_block(i as u32)
            .ok_or_else(|| Error::Internal("missing maximal element".into()))?;
        let k = OrderComplex::open_interval(self.host.clone(), self.host.bottom(), top, &self.caps)?;
        Ok(cell.get_or_init(|| Arc::new(TopCohomology::new(Arc::new(k)))).clone())
    }

    /// Top cohomology of the poset without its bottom.
    pub fn full(&self) -> Result<Arc<TopCohomology>> {
        if let Some(h) = self.full.get() {
            return Ok(h.clone());
        }
        let k = OrderComplex::without_bottom(self.host.clone(), &self.caps)?;
        Ok(self.full.get_or_init(|| Arc::new(TopCohomology::new(Arc::new(k)))).clone())
    }

    /// Image of a tree sum: `c̄`, `φ` or `c̆` according to its side.
    pub fn cochain(&self, s: &TreeSum) -> Result<ChainVector> {
        let mut out: Option<ChainVector> = None;
        for (t, &k) in &s.terms {
            let v = match s.side {
                Side::Cohomology => interval_cochain(t, &self.host)?,
                Side::Lie2 => phi(t, &self.host)?,
                Side::FullPoset => full_cochain(t, &self.host)?,
            };
            match out.as_mut() {
                None => out = Some(v.scaled(k)?),
                Some(o) => o.add_scaled(&v, k)?,
            }
        }
        Ok(out.unwrap_or_else(|| ChainVector::zero(self.top_dim(s.side))))
    }

    fn top_dim(&self, side: Side) -> isize {
        let n = self.n() as isize;
        match side {
            Side::FullPoset => n - 2,
            _ => n - 3,
        }
    }

    /// Group a sum lives in; interval sides need a uniform red count.
    pub fn group_of(&self, s: &TreeSum) -> Result<Arc<TopCohomology>> {
        match s.side {
            Side::FullPoset => self.full(),
            _ => {
                let mut reds = s.terms.keys().map(|t| t.red_count());
                let Some(i) = reds.next() else { return self.interval(0) };
                if reds.any(|j| j != i) {
                    return arg("tree sum mixes red counts");
                }
                self.interval(i)
            }
        }
    }

    /// Whether a sum vanishes in top cohomology.
    pub fn vanishes(&self, s: &TreeSum) -> Result<bool> {
        if s.is_zero() {
            return Ok(true);
        }
        let v = self.cochain(s)?;
        if v.is_zero() {
            return Ok(true);
        }
        self.group_of(s)?.is_coboundary(&v)
    }

    /// `input − straightened` vanishes; the soundness certificate.
    pub fn certifies(&self, input: &TreeSum, output: &TreeSum) -> Result<bool> {
        let mut d = input.clone();
        d.add_scaled(output, -1)?;
        self.vanishes(&d)
    }
}

/// Cardinality and rank of a claimed basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub family: String,
    pub count: usize,
    pub betti: usize,
    pub rank: usize,
    pub full_rank: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisReport {
    pub n: usize,
    /// `None` for the poset without its bottom.
    pub i: Option<usize>,
    pub entries: Vec<BasisEntry>,
}

impl BasisReport {
    pub fn ok(&self) -> bool {
        self.entries.iter().all(|e| e.full_rank && e.count == e.betti)
    }
}

fn basis_entry(name: &str, h: &TopCohomology, cochains: &[ChainVector]) -> Result<BasisEntry> {
    let rank = h.quotient_rank(cochains)?;
    let betti = h.betti();
    Ok(BasisEntry {
        family: name.to_string(),
        count: cochains.len(),
        betti,
        rank,
        full_rank: rank == cochains.len() && rank == betti,
    })
}

/// Check the given families on `(0̂, [n]^i)`.
pub fn verify_interval_bases(oracle: &Oracle, i: usize, families: &[Family], caps: &Caps) -> Result<BasisReport> {
    let n = oracle.n();
    let h = oracle.interval(i)?;
    let mut entries = Vec::new();
    for &f in families {
        let trees = enumerate_family(f, n, Some(i), caps)?;
        let cochains: Vec<ChainVector> = trees
            .iter()
            .map(|t| interval_cochain(t, &oracle.host))
            .collect::<Result<_>>()?;
        entries.push(basis_entry(&f.to_string(), &h, &cochains)?);
    }
    Ok(BasisReport { n, i: Some(i), entries })
}

/// Check the blue-rooted combs and red-rooted Lyndon trees on the poset
/// without its bottom.
pub fn verify_full_bases(oracle: &Oracle, caps: &Caps) -> Result<BasisReport> {
    let n = oracle.n();
    let h = oracle.full()?;
    let mut entries = Vec::new();
    for (name, f, root) in [
        ("blue-rooted comb", Family::Comb, Color::Blue),
        ("red-rooted lyndon", Family::Lyndon, Color::Red),
    ] {
        let trees: Vec<BicoloredTree> = enumerate_family(f, n, None, caps)?
            .into_iter()
            .filter(|t| t.color().is_none_or(|c| c == root))
            .collect();
        let cochains: Vec<ChainVector> = trees
            .iter()
            .map(|t| full_cochain(t, &oracle.host))
            .collect::<Result<_>>()?;
        entries.push(basis_entry(name, &h, &cochains)?);
    }
    Ok(BasisReport { n, i: None, entries })
}

/// All three tree families on the interval, or both full-poset families.
pub fn verify_bases(oracle: &Oracle, i: Option<usize>, caps: &Caps) -> Result<BasisReport> {
    match i {
        Some(i) => verify_interval_bases(oracle, i, &Family::ALL, caps),
        None => verify_full_bases(oracle, caps),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> BicoloredTree {
        BicoloredTree::parse(s).unwrap()
    }

    #[test]
    fn combs_are_fixed() {
        for side in Side::ALL {
            let c = t("<[1,2],3>");
            let s = Straightener::new(side).straighten(&c).unwrap();
            if side == Side::FullPoset {
                assert_eq!(s.coeff(&t("[[1,2],3]")), -1);
            } else {
                assert_eq!(s, TreeSum::single(side, c, 1));
            }
        }
    }

    #[test]
    fn blue_assoc() {
        let s = straighten(&t("[1,[2,3]]"), Side::Cohomology).unwrap();
        assert_eq!(s.coeff(&t("[[1,2],3]")), -1);
        assert_eq!(s.coeff(&t("[[1,3],2]")), -1);
        assert_eq!(s.len(), 2);
        let s = straighten(&t("[1,[2,3]]"), Side::Lie2).unwrap();
        assert_eq!(s.coeff(&t("[[1,2],3]")), 1);
        assert_eq!(s.coeff(&t("[[1,3],2]")), -1);
    }

    #[test]
    fn mixed_and_oracle() {
        let oracle = Oracle::new(3, &Caps::default()).unwrap();
        let input = t("[1,<2,3>]");
        let s = straighten(&input, Side::Cohomology).unwrap();
        assert_eq!(s.len(), 5);
        assert!(is_straightened(&s));
        assert!(oracle
            .certifies(&TreeSum::single(Side::Cohomology, input, 1), &s)
            .unwrap());
    }

    #[test]
    fn soundness_n4() {
        let caps = Caps::default();
        let oracle = Oracle::new(4, &caps).unwrap();
        for side in Side::ALL {
            let eng = Straightener::with_trace(side);
            for tree in enumerate_bicolored(4, None, &caps).unwrap() {
                let s = eng.straighten(&tree).unwrap();
                assert!(is_straightened(&s), "{side} {tree} -> {s}");
                let input = TreeSum::single(side, tree.clone(), 1);
                assert!(oracle.certifies(&input, &s).unwrap(), "{side} {tree}");
            }
            assert!(!eng.take_trace().is_empty());
        }
    }

    #[test]
    fn relations_vanish() {
        let caps = Caps::default();
        let oracle = Oracle::new(4, &caps).unwrap();
        for side in Side::ALL {
            let eng = Straightener::new(side);
            for (inst, s) in relation_instances(4, None, side, &caps).unwrap() {
                assert!(eng.straighten_sum(&s).unwrap().is_zero(), "{inst:?}");
                assert!(oracle.vanishes(&s).unwrap(), "{inst:?}");
            }
        }
    }

    #[test]
    fn phi_signs() {
        let p = Poset::build(2, Variant::Weighted, &Caps::default()).unwrap();
        assert_eq!(phi(&t("[1,2]"), &p).unwrap().terms.values().next(), Some(&1));
        assert_eq!(phi(&t("[2,1]"), &p).unwrap().terms.values().next(), Some(&-1));
    }

    #[test]
    fn bases_small() {
        let caps = Caps::default();
        let oracle = Oracle::new(3, &caps).unwrap();
        let r = verify_bases(&oracle, Some(1), &caps).unwrap();
        assert!(r.ok());
        assert_eq!(r.entries[0].count, 5);
        let r = verify_bases(&oracle, None, &caps).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.entries[0].count, 4);
    }
}
