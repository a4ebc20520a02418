#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::OnceLock;

use proptest::prelude::*;
use wpp::straighten::Oracle;
use wpp::trees::{BicoloredTree, Color, RootedTree};
use wpp::Caps;

/// Split `leaves` recursively; each choice picks a split point and a color.
pub fn build_tree(leaves: &[u32], choices: &mut impl Iterator<Item = u32>) -> BicoloredTree {
    if leaves.len() == 1 {
        return BicoloredTree::leaf(leaves[0]);
    }
    let c = choices.next().unwrap_or(0);
    let split = 1 + (c as usize % (leaves.len() - 1));
    let color = if (c >> 16) & 1 == 1 { Color::Red } else { Color::Blue };
    let l = build_tree(&leaves[..split], choices);
    let r = build_tree(&leaves[split..], choices);
    BicoloredTree::node(color, l, r)
}

/// Bicolored trees with leaf set `[n]` for `n` in `lo..=hi`.
pub fn tree_strategy(lo: usize, hi: usize) -> impl Strategy<Value = BicoloredTree> {
    (lo..=hi)
        .prop_flat_map(|n| {
            (
                Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(any::<u32>(), n),
            )
        })
        .prop_map(|(leaves, choices)| build_tree(&leaves, &mut choices.into_iter()))
}

/// Rooted trees on `[n]`: label `k` in shuffled order hangs below an earlier one.
pub fn rooted_strategy(lo: usize, hi: usize) -> impl Strategy<Value = RootedTree> {
    (lo..=hi)
        .prop_flat_map(|n| {
            (
                Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(any::<usize>(), n),
            )
        })
        .prop_map(|(order, picks)| {
            let mut parent = BTreeMap::new();
            parent.insert(order[0], None);
            for k in 1..order.len() {
                parent.insert(order[k], Some(order[picks[k] % k]));
            }
            RootedTree::new(&parent).expect("valid parent map")
        })
}

/// Shared oracles for `n` up to 5.
pub fn oracle(n: usize) -> &'static Oracle {
    static ORACLES: OnceLock<Vec<Oracle>> = OnceLock::new();
    let all = ORACLES.get_or_init(|| {
        (0..=5)
            .map(|k| Oracle::new(k.max(1), &Caps::default()).expect("oracle"))
            .collect()
    });
    &all[n]
}
