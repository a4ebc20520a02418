mod common;

use common::{oracle, rooted_strategy, tree_strategy};
use proptest::prelude::*;
use wpp::chains::{chain_of_tree, chain_of_tree_identity, tree_of_chain};
use wpp::homology::ChainVector;
use wpp::partition::covers;
use wpp::trees::bicolored::linear_extensions;
use wpp::trees::families::is_liu_lyndon;
use wpp::trees::liu::liu_linear_extension;
use wpp::trees::{psi, psi_inverse, BicoloredTree, LiuOrder};
use wpp::{Caps, WeightedPartition};

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Internal-node count of every subtree, collected recursively.
fn internal_sizes(t: &BicoloredTree, out: &mut Vec<usize>) -> usize {
    match t.children() {
        None => 0,
        Some((l, r)) => {
            let s = 1 + internal_sizes(l, out) + internal_sizes(r, out);
            out.push(s);
            s
        }
    }
}

fn open_chain(t: &BicoloredTree, tau: &wpp::trees::LinearExtension) -> ChainVector {
    let host = &oracle(t.leaf_count()).host;
    let c = chain_of_tree(t, tau).unwrap().open_indices(host).unwrap();
    ChainVector::single(c.into_iter().map(|x| x as u32).collect(), 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trips(t in tree_strategy(1, 7)) {
        prop_assert_eq!(BicoloredTree::parse(&t.to_string()).unwrap(), t.clone());
        prop_assert_eq!(BicoloredTree::decode(&t.encode()).unwrap(), t);
    }

    #[test]
    fn normalize_is_idempotent(t in tree_strategy(1, 7)) {
        let (s, u) = t.normalize();
        prop_assert!(s == 1 || s == -1);
        prop_assert!(u.is_normalized());
        prop_assert_eq!(u.mask(), t.mask());
        prop_assert_eq!(u.red_count(), t.red_count());
        prop_assert_eq!(u.normalize(), (1, u.clone()));
        prop_assert_eq!(u.normalize_lie(), (1, u.clone()));
    }

    #[test]
    fn extensions_match_hook_count(t in tree_strategy(1, 7)) {
        let exts = linear_extensions(&t);
        let mut sizes = Vec::new();
        let m = internal_sizes(&t, &mut sizes);
        let hook = factorial(m) / sizes.iter().product::<usize>();
        prop_assert_eq!(exts.len(), hook);
        let nodes = t.postorder();
        prop_assert!(exts.iter().all(|e| e.is_valid_for(&nodes)));
        let mut sorted = exts.clone();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), exts.len());
    }

    #[test]
    fn chains_round_trip(t in tree_strategy(2, 6)) {
        let n = t.leaf_count();
        for tau in linear_extensions(&t).into_iter().take(12) {
            let c = chain_of_tree(&t, &tau).unwrap();
            prop_assert_eq!(c.len(), n);
            prop_assert_eq!(c.first(), &WeightedPartition::bottom(n));
            prop_assert_eq!(c.last().weight() as usize, t.red_count());
            for w in c.0.windows(2) {
                prop_assert!(covers(&w[0], &w[1]).unwrap());
            }
            let (u, sigma) = tree_of_chain(&c).unwrap();
            prop_assert_eq!(&u, &t.normalize().1);
            prop_assert_eq!(chain_of_tree(&u, &sigma).unwrap(), c);
        }
    }

    #[test]
    fn extension_sign_lemma(t in tree_strategy(3, 5)) {
        let h = oracle(t.leaf_count()).interval(t.red_count()).unwrap();
        let base = open_chain(&t, &wpp::trees::LinearExtension::identity(t.internal_count()));
        for tau in linear_extensions(&t).into_iter().take(6) {
            let mut d = open_chain(&t, &tau);
            d.add_scaled(&base, -tau.sign()).unwrap();
            prop_assert!(d.is_zero() || h.is_coboundary(&d).unwrap(), "{} {:?}", t, tau.0);
        }
    }

    #[test]
    fn swap_sign_lemma(t in tree_strategy(3, 5)) {
        let (s, u) = t.normalize();
        let h = oracle(t.leaf_count()).interval(t.red_count()).unwrap();
        let host = &oracle(t.leaf_count()).host;
        let one = |x: &BicoloredTree| {
            let c = chain_of_tree_identity(x).unwrap().open_indices(host).unwrap();
            ChainVector::single(c.into_iter().map(|k| k as u32).collect(), 1)
        };
        let mut d = one(&t);
        d.add_scaled(&one(&u), -s).unwrap();
        prop_assert!(d.is_zero() || h.is_coboundary(&d).unwrap());
    }

    #[test]
    fn psi_round_trips(t in rooted_strategy(1, 7)) {
        let b = psi(&t);
        prop_assert!(is_liu_lyndon(&b), "{}", b);
        prop_assert_eq!(b.mask(), t.mask());
        prop_assert_eq!(b.red_count(), t.descents());
        prop_assert_eq!(psi_inverse(&b).unwrap(), t);
    }
}

#[test]
fn liu_order_is_a_partial_order() {
    let caps = Caps::default();
    let order = LiuOrder::new(caps);
    for n in 1..=5 {
        for d in 0..n {
            let ext = liu_linear_extension(n, d, &caps).unwrap();
            for (a, x) in ext.iter().enumerate() {
                assert!(order.leq(x, x).unwrap());
                for (b, y) in ext.iter().enumerate() {
                    if a != b && order.leq(x, y).unwrap() {
                        assert!(a < b, "extension out of order at n={n}, d={d}");
                        assert!(!order.leq(y, x).unwrap(), "cycle at n={n}, d={d}");
                    }
                }
            }
        }
    }
}
