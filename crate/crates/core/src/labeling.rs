//! The edge labeling of the augmented poset, its label order, EL verification
//! and ascent-free chains.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::poset::{Element, Poset};

/// `(a, b)^u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeLabel {
    pub a: u32,
    pub b: u32,
    pub u: u32,
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})^{}", self.a, self.b, self.u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelOrder {
    Less,
    Greater,
    Equal,
    Incomparable,
}

/// Compare in the ordinal sum of the product orders on `(b, u)`, one summand
/// per first coordinate.
pub fn label_cmp(p: EdgeLabel, q: EdgeLabel) -> LabelOrder {
    match p.a.cmp(&q.a) {
        Ordering::Less => LabelOrder::Less,
        Ordering::Greater => LabelOrder::Greater,
        Ordering::Equal => {
            if (p.b, p.u) == (q.b, q.u) {
                LabelOrder::Equal
            } else if p.b <= q.b && p.u <= q.u {
                LabelOrder::Less
            } else if p.b >= q.b && p.u >= q.u {
                LabelOrder::Greater
            } else {
                LabelOrder::Incomparable
            }
        }
    }
}

/// Strictly less.
pub fn label_less(p: EdgeLabel, q: EdgeLabel) -> bool {
    label_cmp(p, q) == LabelOrder::Less
}

/// Label of the cover `x ⋖ y` of the weighted (or augmented) poset.
pub fn edge_label(p: &Poset, x: usize, y: usize) -> Result<EdgeLabel> {
    if !p.is_cover(x, y) {
        return arg(format!("{} is not covered by {}", p.element(x), p.element(y)));
    }
    match (p.element(x), p.element(y)) {
        (_, Element::Top) => Ok(EdgeLabel {
            a: 1,
            b: p.ground() as u32 + 1,
            u: 0,
        }),
        (Element::Weighted(a), Element::Weighted(b)) => {
            let gone: Vec<_> = a.blocks().iter().filter(|blk| !b.blocks().contains(blk)).collect();
            let merged = b
                .blocks()
                .iter()
                .find(|blk| !a.blocks().contains(blk))
                .expect("a cover merges two blocks");
            let (lo, hi) = (gone[0].min_label().min(gone[1].min_label()), gone[0].min_label().max(gone[1].min_label()));
            Ok(EdgeLabel {
                a: lo,
                b: hi,
                u: merged.weight - gone[0].weight - gone[1].weight,
            })
        }
        _ => arg("edge labels are defined on weighted partitions only"),
    }
}

/// Maximal chains of `[x, y]` with no strict ascent between consecutive
/// labels, as element index lists from `x` to `y`.
pub fn ascent_free_chains(p: &Poset, x: usize, y: usize) -> Result<Vec<Vec<usize>>> {
    if !p.leq(x, y) {
        return arg("interval endpoints are not comparable");
    }
    let mut out = Vec::new();
    let mut path = vec![x];
    ascent_free_rec(p, y, None, &mut path, &mut |c| out.push(c.to_vec()))?;
    Ok(out)
}

fn ascent_free_rec(
    p: &Poset,
    y: usize,
    last: Option<EdgeLabel>,
    path: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) -> Result<()> {
    let cur = *path.last().expect("nonempty path");
    if cur == y {
        visit(path);
        return Ok(());
    }
    for &z in p.up_covers(cur) {
        if !p.leq(z, y) {
            continue;
        }
        let lab = edge_label(p, cur, z)?;
        if last.is_some_and(|l| label_less(l, lab)) {
            continue;
        }
        path.push(z);
        ascent_free_rec(p, y, Some(lab), path, visit)?;
        path.pop();
    }
    Ok(())
}

pub fn count_ascent_free(p: &Poset, x: usize, y: usize) -> Result<usize> {
    let mut count = 0;
    let mut path = vec![x];
    ascent_free_rec(p, y, None, &mut path, &mut |_| count += 1)?;
    Ok(count)
}

/// One row of the verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub bottom: usize,
    pub top: usize,
    pub interval: String,
    pub maximal_chains: u64,
    pub increasing: u64,
    pub lex_first: bool,
    pub ascent_free: u64,
}

impl IntervalReport {
    pub fn ok(&self) -> bool {
        self.increasing == 1 && self.lex_first
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElReport {
    pub n: usize,
    pub intervals: Vec<IntervalReport>,
    pub violations: usize,
    /// How precedence is read when labels are incomparable.
    pub convention: String,
}

impl ElReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("interval,max_chains,increasing,lex_first_ok,ascent_free\n");
        for r in &self.intervals {
            s.push_str(&format!(
                "\"{}\",{},{},{},{}\n",
                r.interval, r.maximal_chains, r.increasing, r.lex_first, r.ascent_free
            ));
        }
        s
    }
}

/// Increasing maximal chains of `[x, y]`.
pub fn increasing_chains(p: &Poset, x: usize, y: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut path = vec![x];
    increasing_rec(p, y, None, &mut path, &mut out)?;
    Ok(out)
}

fn increasing_rec(
    p: &Poset,
    y: usize,
    last: Option<EdgeLabel>,
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    let cur = *path.last().expect("nonempty path");
    if cur == y {
        out.push(path.clone());
        return Ok(());
    }
    for &z in p.up_covers(cur) {
        if !p.leq(z, y) {
            continue;
        }
        let lab = edge_label(p, cur, z)?;
        if last.is_some_and(|l| !label_less(l, lab)) {
            continue;
        }
        path.push(z);
        increasing_rec(p, y, Some(lab), path, out)?;
        path.pop();
    }
    Ok(())
}

/// Whether `chain` precedes every other maximal chain of its interval: at
/// each step its label is strictly below the label of every other cover
/// still inside the interval.
pub fn is_lex_first(p: &Poset, chain: &[usize]) -> Result<bool> {
    let y = *chain.last().expect("nonempty chain");
    for w in chain.windows(2) {
        let mine = edge_label(p, w[0], w[1])?;
        for &z in p.up_covers(w[0]) {
            if z != w[1] && p.leq(z, y) && !label_less(mine, edge_label(p, w[0], z)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn count_maximal_chains(p: &Poset, x: usize, y: usize) -> u64 {
    let members = p.interval(x, y);
    let mut ways = std::collections::HashMap::new();
    ways.insert(x, 1u64);
    let mut sorted = members;
    sorted.sort_by_key(|&v| p.rank(v));
    for &v in &sorted {
        let w = *ways.get(&v).unwrap_or(&0);
        if w == 0 {
            continue;
        }
        for &z in p.up_covers(v) {
            if p.leq(z, y) {
                *ways.entry(z).or_insert(0) += w;
            }
        }
    }
    ways.get(&y).copied().unwrap_or(0)
}

pub fn verify_interval(p: &Poset, x: usize, y: usize) -> Result<IntervalReport> {
    let inc = increasing_chains(p, x, y)?;
    let lex_first = inc.len() == 1 && is_lex_first(p, &inc[0])?;
    Ok(IntervalReport {
        bottom: x,
        top: y,
        interval: format!("[{}, {}]", p.element(x), p.element(y)),
        maximal_chains: count_maximal_chains(p, x, y),
        increasing: inc.len() as u64,
        lex_first,
        ascent_free: count_ascent_free(p, x, y)? as u64,
    })
}

/// Check every closed interval `[x, y]` with `x < y`.
pub fn verify_el(p: &Poset) -> Result<ElReport> {
    let pairs: Vec<(usize, usize)> = (0..p.len())
        .flat_map(|x| p.up_set(x).into_iter().filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let mut intervals: Vec<IntervalReport> = pairs
        .par_iter()
        .map(|&(x, y)| verify_interval(p, x, y))
        .collect::<Result<_>>()?;
    intervals.sort_by_key(|r| (r.bottom, r.top));
    let violations = intervals.iter().filter(|r| !r.ok()).count();
    Ok(ElReport {
        n: p.ground(),
        intervals,
        violations,
        convention: "lexicographic precedence requires a strictly smaller label at the first \
                     difference; incomparable labels do not precede"
            .into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::WeightedPartition;
    use crate::{Caps, Variant};

    fn idx(p: &Poset, s: &str) -> usize {
        p.index_of_weighted(&WeightedPartition::parse(p.ground(), s).unwrap())
            .unwrap()
    }

    #[test]
    fn labels() {
        let p = Poset::build(3, Variant::WeightedAugmented, &Caps::default()).unwrap();
        let b = p.bottom();
        let l = edge_label(&p, b, idx(&p, "{13^0,2^0}")).unwrap();
        assert_eq!(l, EdgeLabel { a: 1, b: 3, u: 0 });
        let top = p.top().unwrap();
        assert_eq!(edge_label(&p, idx(&p, "{123^2}"), top).unwrap().to_string(), "(1,4)^0");
        let l = edge_label(&p, idx(&p, "{12^0,3^0}"), idx(&p, "{123^1}")).unwrap();
        assert_eq!(l, EdgeLabel { a: 1, b: 3, u: 1 });
        assert!(edge_label(&p, b, top).is_err());
    }

    #[test]
    fn label_order() {
        let e = |a, b, u| EdgeLabel { a, b, u };
        assert_eq!(label_cmp(e(1, 2, 0), e(1, 3, 1)), LabelOrder::Less);
        assert_eq!(label_cmp(e(1, 3, 1), e(1, 4, 0)), LabelOrder::Incomparable);
        assert_eq!(label_cmp(e(2, 3, 0), e(1, 4, 1)), LabelOrder::Greater);
    }

    #[test]
    fn n3() {
        let p = Poset::build(3, Variant::WeightedAugmented, &Caps::default()).unwrap();
        let report = verify_el(&p).unwrap();
        assert_eq!(report.violations, 0);
        let b = p.bottom();
        let t1 = idx(&p, "{123^1}");
        let inc = increasing_chains(&p, b, t1).unwrap();
        let word: Vec<String> = inc[0]
            .windows(2)
            .map(|w| edge_label(&p, w[0], w[1]).unwrap().to_string())
            .collect();
        assert_eq!(word, vec!["(1,2)^0", "(1,3)^1"]);
        let top = p.top().unwrap();
        let inc = increasing_chains(&p, b, top).unwrap();
        assert_eq!(inc.len(), 1);
        assert!(inc[0].contains(&idx(&p, "{123^0}")));
        assert_eq!(count_ascent_free(&p, b, t1).unwrap(), 5);
        assert_eq!(count_ascent_free(&p, b, idx(&p, "{123^0}")).unwrap(), 2);
        assert_eq!(ascent_free_chains(&p, b, top).unwrap().len(), 4);
    }
}
