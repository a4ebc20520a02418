//! Weighted and pointed partitions of `[n]`.
//!
//! Blocks are bitmasks: label `k` lives at bit `k - 1`. Partitions keep their
//! blocks sorted by minimum element, so equal partitions are equal as values
//! and hash identically.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};

pub type Mask = u32;

/// Largest ground set size representable with `Mask`.
pub const MAX_GROUND: usize = 31;

pub fn mask_min(mask: Mask) -> u32 {
    mask.trailing_zeros() + 1
}

pub fn mask_len(mask: Mask) -> u32 {
    mask.count_ones()
}

pub fn full_mask(n: usize) -> Mask {
    if n == 0 {
        0
    } else {
        Mask::MAX >> (32 - n)
    }
}

pub fn label_bit(label: u32) -> Mask {
    1 << (label - 1)
}

/// Labels of a mask in increasing order.
pub fn mask_labels(mask: Mask) -> impl Iterator<Item = u32> {
    (0..32u32).filter(move |b| mask >> b & 1 == 1).map(|b| b + 1)
}

pub fn mask_from_labels(labels: impl IntoIterator<Item = u32>) -> Mask {
    labels.into_iter().fold(0, |m, l| m | label_bit(l))
}

pub(crate) fn fmt_members(mask: Mask, wide: bool) -> String {
    let parts: Vec<String> = mask_labels(mask).map(|l| l.to_string()).collect();
    if wide {
        parts.join(".")
    } else {
        parts.concat()
    }
}

/// A block `B^v` with `0 <= v <= |B| - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightedBlock {
    pub members: Mask,
    pub weight: u32,
}

impl WeightedBlock {
    pub fn new(members: Mask, weight: u32) -> Result<Self> {
        if members == 0 {
            return arg("a block must be nonempty");
        }
        if weight >= mask_len(members) {
            return arg(format!(
                "weight {weight} out of range for a block of size {}",
                mask_len(members)
            ));
        }
        Ok(WeightedBlock { members, weight })
    }

    pub fn min_label(&self) -> u32 {
        mask_min(self.members)
    }

    pub fn size(&self) -> u32 {
        mask_len(self.members)
    }
}

/// A weighted partition of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightedPartition {
    ground: usize,
    blocks: Vec<WeightedBlock>,
}

impl WeightedPartition {
    pub fn new(ground: usize, mut blocks: Vec<WeightedBlock>) -> Result<Self> {
        if ground == 0 || ground > MAX_GROUND {
            return arg(format!("ground set size {ground} not in 1..={MAX_GROUND}"));
        }
        let mut seen: Mask = 0;
        for b in &blocks {
            WeightedBlock::new(b.members, b.weight)?;
            if seen & b.members != 0 {
                return arg("blocks are not pairwise disjoint");
            }
            seen |= b.members;
        }
        if seen != full_mask(ground) {
            return arg(format!("blocks do not cover [{ground}]"));
        }
        blocks.sort_by_key(|b| b.min_label());
        Ok(WeightedPartition { ground, blocks })
    }

    /// All singletons with weight zero.
    pub fn bottom(ground: usize) -> Self {
        let blocks = (0..ground)
            .map(|b| WeightedBlock {
                members: 1 << b,
                weight: 0,
            })
            .collect();
        WeightedPartition { ground, blocks }
    }

    /// The maximal element `[n]^i`.
    pub fn top(ground: usize, weight: u32) -> Result<Self> {
        let block = WeightedBlock::new(full_mask(ground), weight)?;
        Ok(WeightedPartition {
            ground,
            blocks: vec![block],
        })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn blocks(&self) -> &[WeightedBlock] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `w(α)`, the total weight.
    pub fn weight(&self) -> u32 {
        self.blocks.iter().map(|b| b.weight).sum()
    }

    /// Rank in the weighted partition poset: `n - |α|`.
    pub fn rank(&self) -> usize {
        self.ground - self.blocks.len()
    }

    pub fn block_containing(&self, label: u32) -> Option<&WeightedBlock> {
        self.blocks
            .iter()
            .find(|b| b.members & label_bit(label) != 0)
    }

    pub fn find_block(&self, members: Mask) -> Option<&WeightedBlock> {
        self.blocks.iter().find(|b| b.members == members)
    }

    /// Replace the listed blocks by their union, with weight the sum of their
    /// weights plus `u`.
    pub fn u_merge(&self, members: &[Mask], u: u32) -> Result<Self> {
        if members.len() < 2 {
            return arg("a merge needs at least two blocks");
        }
        if u as usize > members.len() - 1 {
            return arg(format!(
                "u = {u} out of range for merging {} blocks",
                members.len()
            ));
        }
        let mut union: Mask = 0;
        let mut weight = u;
        for &m in members {
            let Some(b) = self.find_block(m) else {
                return arg(format!("{} is not a block", fmt_members(m, self.ground > 9)));
            };
            if union & m != 0 {
                return arg("repeated block in merge");
            }
            union |= m;
            weight += b.weight;
        }
        let mut blocks: Vec<WeightedBlock> = self
            .blocks
            .iter()
            .filter(|b| union & b.members == 0)
            .copied()
            .collect();
        blocks.push(WeightedBlock {
            members: union,
            weight,
        });
        blocks.sort_by_key(|b| b.min_label());
        Ok(WeightedPartition {
            ground: self.ground,
            blocks,
        })
    }

    /// All weighted partitions covering `self`.
    pub fn up_covers(&self) -> Vec<WeightedPartition> {
        let k = self.blocks.len();
        let mut out = Vec::with_capacity(k * (k.saturating_sub(1)));
        for i in 0..k {
            for j in i + 1..k {
                for u in 0..2 {
                    let (a, b) = (self.blocks[i], self.blocks[j]);
                    let mut blocks = Vec::with_capacity(k - 1);
                    for (t, blk) in self.blocks.iter().enumerate() {
                        if t == i {
                            blocks.push(WeightedBlock {
                                members: a.members | b.members,
                                weight: a.weight + b.weight + u,
                            });
                        } else if t != j {
                            blocks.push(*blk);
                        }
                    }
                    out.push(WeightedPartition {
                        ground: self.ground,
                        blocks,
                    });
                }
            }
        }
        out
    }

    /// The weighted refinement order.
    pub fn leq(&self, other: &WeightedPartition) -> bool {
        if self.ground != other.ground || self.blocks.len() < other.blocks.len() {
            return false;
        }
        let mut count = vec![0u32; other.blocks.len()];
        let mut wsum = vec![0u32; other.blocks.len()];
        for a in &self.blocks {
            let Some(pos) = other
                .blocks
                .iter()
                .position(|b| b.members & a.members == a.members)
            else {
                return false;
            };
            count[pos] += 1;
            wsum[pos] += a.weight;
        }
        other.blocks.iter().enumerate().all(|(k, b)| {
            b.weight >= wsum[k] && b.weight - wsum[k] < count[k].max(1)
        })
    }

    /// Image under a relabeling; `perm[l - 1]` is the new label of `l`.
    pub fn relabel(&self, perm: &[u32]) -> Self {
        let mut blocks: Vec<WeightedBlock> = self
            .blocks
            .iter()
            .map(|b| WeightedBlock {
                members: mask_from_labels(mask_labels(b.members).map(|l| perm[l as usize - 1])),
                weight: b.weight,
            })
            .collect();
        blocks.sort_by_key(|b| b.min_label());
        WeightedPartition {
            ground: self.ground,
            blocks,
        }
    }

    /// Parse `"{12^1,3^0}"` (braces optional). Blocks may use `.` between
    /// labels when `n > 9`.
    pub fn parse(ground: usize, text: &str) -> Result<Self> {
        let body = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut blocks = Vec::new();
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (labels, weight) = match part.split_once('^') {
                Some((l, w)) => (
                    l,
                    w.trim()
                        .parse::<u32>()
                        .map_err(|_| crate::Error::Argument(format!("bad weight in {part:?}")))?,
                ),
                None => (part, 0),
            };
            let members = parse_members(labels, ground)?;
            blocks.push(WeightedBlock::new(members, weight)?);
        }
        WeightedPartition::new(ground, blocks)
    }
}

fn parse_members(labels: &str, ground: usize) -> Result<Mask> {
    let labels: Vec<u32> = if labels.contains('.') {
        labels
            .split('.')
            .map(|s| s.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| crate::Error::Argument(format!("bad block {labels:?}")))?
    } else {
        labels
            .chars()
            .map(|c| c.to_digit(10).ok_or(()))
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| crate::Error::Argument(format!("bad block {labels:?}")))?
    };
    if labels.iter().any(|&l| l == 0 || l as usize > ground) {
        return arg(format!("label out of range in {labels:?}"));
    }
    Ok(mask_from_labels(labels))
}

impl fmt::Display for WeightedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.ground > 9;
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{}^{}", fmt_members(b.members, wide), b.weight))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `true` iff `b` covers `a` in the weighted partition poset.
pub fn covers(a: &WeightedPartition, b: &WeightedPartition) -> Result<bool> {
    if a.ground != b.ground {
        return arg(format!(
            "ground sets differ: [{}] vs [{}]",
            a.ground, b.ground
        ));
    }
    if a.len() != b.len() + 1 {
        return Ok(false);
    }
    let unchanged: Vec<&WeightedBlock> = b.blocks.iter().filter(|x| a.blocks.contains(x)).collect();
    if unchanged.len() != b.len() - 1 {
        return Ok(false);
    }
    let Some(merged) = b.blocks.iter().find(|x| !a.blocks.contains(x)) else {
        return Ok(false);
    };
    let parts: Vec<&WeightedBlock> = a
        .blocks
        .iter()
        .filter(|x| merged.members & x.members == x.members)
        .collect();
    if parts.len() != 2 || parts[0].members | parts[1].members != merged.members {
        return Ok(false);
    }
    let base = parts[0].weight + parts[1].weight;
    Ok(merged.weight >= base && merged.weight - base <= 1)
}

/// A block with a distinguished element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointedBlock {
    pub members: Mask,
    pub point: u32,
}

/// A pointed partition: every block carries a distinguished member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointedPartition {
    ground: usize,
    blocks: Vec<PointedBlock>,
}

impl PointedPartition {
    pub fn new(ground: usize, mut blocks: Vec<PointedBlock>) -> Result<Self> {
        if ground == 0 || ground > MAX_GROUND {
            return arg(format!("ground set size {ground} not in 1..={MAX_GROUND}"));
        }
        let mut seen: Mask = 0;
        for b in &blocks {
            if b.members == 0 || b.point == 0 || b.members & label_bit(b.point) == 0 {
                return arg("the distinguished element must belong to its block");
            }
            if seen & b.members != 0 {
                return arg("blocks are not pairwise disjoint");
            }
            seen |= b.members;
        }
        if seen != full_mask(ground) {
            return arg(format!("blocks do not cover [{ground}]"));
        }
        blocks.sort_by_key(|b| mask_min(b.members));
        Ok(PointedPartition { ground, blocks })
    }

    pub fn bottom(ground: usize) -> Self {
        let blocks = (0..ground as u32)
            .map(|b| PointedBlock {
                members: 1 << b,
                point: b + 1,
            })
            .collect();
        PointedPartition { ground, blocks }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn blocks(&self) -> &[PointedBlock] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.ground - self.blocks.len()
    }

    pub fn up_covers(&self) -> Vec<PointedPartition> {
        let k = self.blocks.len();
        let mut out = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let (a, b) = (self.blocks[i], self.blocks[j]);
                for point in [a.point, b.point] {
                    let mut blocks = Vec::with_capacity(k - 1);
                    for (t, blk) in self.blocks.iter().enumerate() {
                        if t == i {
                            blocks.push(PointedBlock {
                                members: a.members | b.members,
                                point,
                            });
                        } else if t != j {
                            blocks.push(*blk);
                        }
                    }
                    out.push(PointedPartition {
                        ground: self.ground,
                        blocks,
                    });
                }
            }
        }
        out
    }

    /// Refinement, with each coarse block pointed at one of the points of
    /// the blocks it contains.
    pub fn leq(&self, other: &PointedPartition) -> bool {
        if self.ground != other.ground || self.blocks.len() < other.blocks.len() {
            return false;
        }
        let mut pointed = vec![false; other.blocks.len()];
        for a in &self.blocks {
            let Some(pos) = other
                .blocks
                .iter()
                .position(|b| b.members & a.members == a.members)
            else {
                return false;
            };
            if other.blocks[pos].point == a.point {
                pointed[pos] = true;
            }
        }
        pointed.into_iter().all(|p| p)
    }
}

impl fmt::Display for PointedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.ground > 9;
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{}@{}", fmt_members(b.members, wide), b.point))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wp(n: usize, s: &str) -> WeightedPartition {
        WeightedPartition::parse(n, s).unwrap()
    }

    #[test]
    fn covering_examples() {
        assert!(covers(&wp(3, "1^0,2^0,3^0"), &wp(3, "12^0,3^0")).unwrap());
        assert!(!covers(&wp(3, "12^0,3^0"), &wp(3, "123^2")).unwrap_or(true));
        assert!(covers(&wp(3, "12^1,3^0"), &wp(3, "123^1")).unwrap());
        assert!(covers(&wp(3, "12^1,3^0"), &wp(3, "123^2")).unwrap());
        assert!(!covers(&wp(3, "12^1,3^0"), &wp(3, "123^0")).unwrap());
    }

    #[test]
    fn covering_rejects_mismatched_ground() {
        let err = covers(&wp(2, "1^0,2^0"), &wp(3, "123^0")).unwrap_err();
        assert!(matches!(err, crate::Error::Argument(_)));
    }

    #[test]
    fn block_weight_range_enforced() {
        assert!(WeightedBlock::new(0b11, 2).is_err());
        assert!(WeightedBlock::new(0, 0).is_err());
        assert!(WeightedPartition::parse(3, "12^0").is_err());
        assert!(WeightedPartition::parse(3, "12^0,23^0").is_err());
    }

    #[test]
    fn u_merge_examples() {
        let p = WeightedPartition::bottom(3);
        assert_eq!(p.u_merge(&[0b001, 0b010], 0).unwrap(), wp(3, "12^0,3^0"));
        let q = wp(3, "12^1,3^0");
        assert_eq!(q.u_merge(&[0b011, 0b100], 1).unwrap(), wp(3, "123^2"));
        assert_eq!(p.u_merge(&[0b001, 0b010, 0b100], 2).unwrap(), wp(3, "123^2"));
        assert!(p.u_merge(&[0b001, 0b010], 2).is_err());
        assert!(p.u_merge(&[0b011, 0b100], 0).is_err());
    }

    #[test]
    fn leq_matches_weight_window() {
        let bottom = WeightedPartition::bottom(4);
        for w in 0..4 {
            assert!(bottom.leq(&WeightedPartition::top(4, w).unwrap()));
        }
        let a = wp(4, "12^1,34^1");
        assert!(a.leq(&wp(4, "1234^2")));
        assert!(a.leq(&wp(4, "1234^3")));
        assert!(!a.leq(&wp(4, "1234^1")));
        assert!(!wp(4, "12^0,3^0,4^0").leq(&wp(4, "1234^3")));
    }

    #[test]
    fn display_round_trips() {
        let a = wp(5, "{25^1,134^2}");
        assert_eq!(a.to_string(), "{134^2,25^1}");
        assert_eq!(WeightedPartition::parse(5, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn pointed_order() {
        let b = PointedPartition::bottom(3);
        assert_eq!(b.up_covers().len(), 6);
        let p = PointedPartition::new(
            3,
            vec![PointedBlock {
                members: 0b111,
                point: 2,
            }],
        )
        .unwrap();
        assert!(b.leq(&p));
        let q = PointedPartition::new(
            3,
            vec![
                PointedBlock {
                    members: 0b011,
                    point: 1,
                },
                PointedBlock {
                    members: 0b100,
                    point: 3,
                },
            ],
        )
        .unwrap();
        assert!(!q.leq(&p));
    }
}
