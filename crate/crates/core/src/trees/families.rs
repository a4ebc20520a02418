//! Combs, bicolored Lyndon trees and Liu-Lyndon trees: membership tests and
//! generators.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::bicolored::{BicoloredTree, Color};
use crate::error::{arg, Caps, Error, Result};
use crate::partition::{full_mask, mask_min, Mask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Comb,
    Lyndon,
    Liu,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Comb, Family::Lyndon, Family::Liu];

    pub fn contains(self, t: &BicoloredTree) -> bool {
        match self {
            Family::Comb => is_comb(t),
            Family::Lyndon => is_lyndon(t),
            Family::Liu => is_liu_lyndon(t),
        }
    }

    /// Whether the root of `left ∧ right` satisfies the family's local
    /// condition, given that both children already belong to the family.
    fn root_ok(self, color: Color, left: &BicoloredTree, right: &BicoloredTree) -> bool {
        match self {
            Family::Comb => left.min_leaf() < right.min_leaf() && comb_root_ok(color, right),
            Family::Lyndon => {
                left.min_leaf() < right.min_leaf() && lyndon_root_ok(color, left, right)
            }
            Family::Liu => liu_root_ok(color, left, right),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Comb => "comb",
            Family::Lyndon => "lyndon",
            Family::Liu => "liu",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s {
            "comb" => Ok(Family::Comb),
            "lyndon" => Ok(Family::Lyndon),
            "liu" => Ok(Family::Liu),
            _ => arg(format!("unknown family {s:?}")),
        }
    }
}

fn comb_root_ok(color: Color, right: &BicoloredTree) -> bool {
    match right.color() {
        None => true,
        Some(rc) => color == Color::Red && rc == Color::Blue,
    }
}

/// `L(x)` a leaf, or `v(R(L(x))) > v(R(x))` with smallest-leaf valency.
pub fn is_lyndon_node(left: &BicoloredTree, right: &BicoloredTree) -> bool {
    match left.right() {
        None => true,
        Some(lr) => lr.min_leaf() > right.min_leaf(),
    }
}

fn lyndon_root_ok(color: Color, left: &BicoloredTree, right: &BicoloredTree) -> bool {
    is_lyndon_node(left, right) || (color == Color::Blue && left.color() == Some(Color::Red))
}

fn liu_root_ok(color: Color, left: &BicoloredTree, right: &BicoloredTree) -> bool {
    let (vl, vr) = (left.liu_valency(), right.liu_valency());
    match color {
        Color::Blue => {
            vl < vr
                && match (left.color(), left.right()) {
                    (Some(Color::Blue), Some(lr)) => lr.liu_valency() > vr,
                    _ => true,
                }
        }
        Color::Red => {
            vl > vr
                && match (left.color(), left.right()) {
                    (None, _) => true,
                    (Some(Color::Red), Some(lr)) => lr.liu_valency() < vr,
                    _ => false,
                }
        }
    }
}

fn check_all(t: &BicoloredTree, family: Family) -> bool {
    match t {
        BicoloredTree::Leaf(_) => true,
        BicoloredTree::Node(c, l, r) => {
            family.root_ok(*c, l, r) && check_all(l, family) && check_all(r, family)
        }
    }
}

/// Normalized, and a node with an internal right child is red with a blue
/// right child.
pub fn is_comb(t: &BicoloredTree) -> bool {
    check_all(t, Family::Comb)
}

/// Normalized, and every node that is not a Lyndon node is blue with a red
/// left child.
pub fn is_lyndon(t: &BicoloredTree) -> bool {
    check_all(t, Family::Lyndon)
}

pub fn is_liu_lyndon(t: &BicoloredTree) -> bool {
    check_all(t, Family::Liu)
}

/// Membership flags and both valency tables, indexed by postorder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub normalized: bool,
    pub comb: bool,
    pub lyndon: bool,
    pub liu_lyndon: bool,
    pub min_leaf_valency: Vec<u32>,
    pub liu_valency: Vec<u32>,
}

pub fn classify(t: &BicoloredTree) -> Classification {
    let mut min_leaf_valency = Vec::new();
    let mut liu_valency = Vec::new();
    for info in t.postorder() {
        let sub = t.subtree_at(&info.path).expect("postorder path");
        min_leaf_valency.push(sub.min_leaf());
        liu_valency.push(sub.liu_valency());
    }
    Classification {
        normalized: t.is_normalized(),
        comb: is_comb(t),
        lyndon: is_lyndon(t),
        liu_lyndon: is_liu_lyndon(t),
        min_leaf_valency,
        liu_valency,
    }
}

/// Generate a family on leaf set `[n]`, optionally with exactly `red` red
/// nodes.
pub fn enumerate_family(
    family: Family,
    n: usize,
    red: Option<usize>,
    caps: &Caps,
) -> Result<Vec<BicoloredTree>> {
    if n == 0 {
        return arg("n must be at least 1");
    }
    Caps::check("family n", n, caps.family_n)?;
    enumerate_family_on(family, full_mask(n), red, caps)
}

/// Generate a family on an arbitrary leaf set.
pub fn enumerate_family_on(
    family: Family,
    mask: Mask,
    red: Option<usize>,
    caps: &Caps,
) -> Result<Vec<BicoloredTree>> {
    if mask == 0 {
        return arg("leaf set must be nonempty");
    }
    Caps::check("family n", mask.count_ones() as usize, caps.family_n)?;
    let mut gen = Generator {
        family,
        memo: HashMap::new(),
    };
    let all = gen.on(mask);
    Ok(all
        .iter()
        .filter(|t| red.is_none_or(|r| t.red_count() == r))
        .cloned()
        .collect())
}

/// Per-`i` sizes of a family on `[n]`.
pub fn family_counts(family: Family, n: usize, caps: &Caps) -> Result<Vec<u64>> {
    let all = enumerate_family(family, n, None, caps)?;
    let mut counts = vec![0u64; n];
    for t in &all {
        counts[t.red_count()] += 1;
    }
    Ok(counts)
}

struct Generator {
    family: Family,
    memo: HashMap<Mask, Arc<Vec<BicoloredTree>>>,
}

impl Generator {
    fn on(&mut self, mask: Mask) -> Arc<Vec<BicoloredTree>> {
        if let Some(v) = self.memo.get(&mask) {
            return v.clone();
        }
        let mut out = Vec::new();
        if mask.count_ones() == 1 {
            out.push(BicoloredTree::Leaf(mask_min(mask)));
        } else {
            let low = mask & mask.wrapping_neg();
            let mut splits = Vec::new();
            let mut sub = (mask - 1) & mask;
            while sub != 0 {
                // The normalized families keep the smallest label on the left.
                if self.family == Family::Liu || sub & low != 0 {
                    splits.push(sub);
                }
                sub = (sub - 1) & mask;
            }
            splits.sort_unstable();
            for left in splits {
                let ls = self.on(left);
                let rs = self.on(mask & !left);
                for color in [Color::Blue, Color::Red] {
                    for l in ls.iter() {
                        for r in rs.iter() {
                            if self.family.root_ok(color, l, r) {
                                out.push(BicoloredTree::node(color, l.clone(), r.clone()));
                            }
                        }
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.memo.insert(mask, out.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> BicoloredTree {
        BicoloredTree::parse(s).unwrap()
    }

    #[test]
    fn small_families() {
        let caps = Caps::default();
        for f in Family::ALL {
            assert_eq!(enumerate_family(f, 3, None, &caps).unwrap().len(), 9, "{f}");
            assert_eq!(enumerate_family(f, 1, None, &caps).unwrap().len(), 1);
        }
        assert_eq!(enumerate_family(Family::Liu, 4, Some(1), &caps).unwrap().len(), 26);
        assert_eq!(family_counts(Family::Comb, 4, &caps).unwrap(), vec![6, 26, 26, 6]);
    }

    #[test]
    fn classify_examples() {
        let c = classify(&t("[[[1,2],3],4]"));
        assert!(c.comb && c.normalized);
        // 2 sits left of the root, so this is not a Lyndon tree.
        assert!(!c.lyndon);
        assert_eq!(c.min_leaf_valency, vec![1, 1, 1]);
        assert!(classify(&t("[1,2]")).lyndon);
        assert!(is_lyndon(&t("[[1,3],2]")) && is_lyndon(&t("[1,[2,3]]")));
        let liu = classify(&t("[<2,1>,3]"));
        assert!(liu.liu_lyndon && !liu.normalized);
        assert_eq!(liu.liu_valency, vec![2, 2]);
        // The root is not a Lyndon node, so it needs a red left child.
        assert!(!is_lyndon(&t("[[[1,3],2],4]")));
        assert!(is_lyndon(&t("[<[1,3],2>,4]")));
    }

    #[test]
    fn generators_match_filters() {
        let caps = Caps::default();
        for n in 1..=5 {
            let all = crate::trees::bicolored::enumerate_bicolored(n, None, &caps).unwrap();
            for f in Family::ALL {
                let mut filtered: Vec<_> = all.iter().filter(|x| f.contains(x)).cloned().collect();
                let mut generated = enumerate_family(f, n, None, &caps).unwrap();
                filtered.sort();
                generated.sort();
                assert_eq!(filtered, generated, "{f} n={n}");
            }
        }
    }
}
