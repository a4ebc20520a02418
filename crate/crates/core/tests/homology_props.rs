mod common;

use std::sync::Arc;

use common::{oracle, rooted_strategy, tree_strategy};
use proptest::prelude::*;
use wpp::homology::{fundamental_cycle, ChainVector, OrderComplex};
use wpp::labeling::count_ascent_free;
use wpp::straighten::phi;
use wpp::trees::families::{enumerate_family, Family};
use wpp::trees::bicolored::permutation_sign;
use wpp::{Caps, Poset, Variant};

fn complexes(n: usize) -> Vec<OrderComplex> {
    let caps = Caps::default();
    let p = Poset::build(n, Variant::Weighted, &caps).unwrap();
    let mut out = vec![OrderComplex::without_bottom(p.clone(), &caps).unwrap()];
    for i in 0..n {
        let top = p.top_block(i as u32).unwrap();
        out.push(OrderComplex::open_interval(p.clone(), p.bottom(), top, &caps).unwrap());
    }
    out
}

/// Every chain of dimension `d`, listed by brute force over subsets of the
/// vertex set that are totally ordered.
fn brute_chains(k: &OrderComplex, vertices: &[usize], d: usize) -> usize {
    let host = &k.host;
    let m = vertices.len();
    let mut count = 0;
    let mut pick = vec![0usize; d + 1];
    fn rec(
        host: &Poset,
        vertices: &[usize],
        m: usize,
        start: usize,
        depth: usize,
        pick: &mut Vec<usize>,
        count: &mut usize,
    ) {
        if depth == pick.len() {
            *count += 1;
            return;
        }
        for j in start..m {
            let v = vertices[j];
            if depth == 0 || host.leq(pick[depth - 1], v) && pick[depth - 1] != v {
                pick[depth] = v;
                rec(host, vertices, m, j + 1, depth + 1, pick, count);
            }
        }
    }
    let mut sorted = vertices.to_vec();
    sorted.sort_by_key(|&v| host.rank(v));
    rec(host, &sorted, m, 0, 0, &mut pick, &mut count);
    count
}

#[test]
fn chain_counts_match_brute_force() {
    for n in 2..=4 {
        for k in complexes(n) {
            for d in 0..=k.top_dim() {
                let vertices: Vec<usize> = k.chains[0].iter().map(|s| s[0] as usize).collect();
                assert_eq!(k.count(d), brute_chains(&k, &vertices, d as usize), "n={n} d={d}");
            }
        }
    }
}

#[test]
fn boundary_squares_to_zero() {
    for n in 2..=4 {
        for k in complexes(n) {
            for d in 1..=k.top_dim() {
                for s in &k.chains[d as usize] {
                    let b = ChainVector::single(s.clone(), 1).boundary().unwrap();
                    assert!(b.boundary().unwrap().is_zero());
                }
            }
        }
    }
}

#[test]
fn coboundary_is_adjoint() {
    for n in 2..=4 {
        for k in complexes(n) {
            let top = k.top_dim();
            if top < 1 {
                continue;
            }
            let lower = &k.chains[top as usize - 1];
            let upper = &k.chains[top as usize];
            // Full check at n <= 3, a stride sample at n = 4.
            let step = if n <= 3 { 1 } else { 7 };
            for c in lower.iter().step_by(step) {
                let c = ChainVector::single(c.clone(), 1);
                let dc = k.coboundary(&c).unwrap();
                for c2 in upper.iter().step_by(step) {
                    let c2 = ChainVector::single(c2.clone(), 1);
                    assert_eq!(dc.pair(&c2).unwrap(), c.pair(&c2.boundary().unwrap()).unwrap());
                }
            }
        }
    }
}

#[test]
fn top_betti_counts_ascent_free_chains() {
    let caps = Caps::default();
    for n in 2..=4 {
        let o = oracle(n);
        let p = &o.host;
        for i in 0..n {
            let top = p.top_block(i as u32).unwrap();
            let betti = o.interval(i).unwrap().betti();
            assert_eq!(betti, count_ascent_free(p, p.bottom(), top).unwrap());
            assert_eq!(betti, enumerate_family(Family::Lyndon, n, Some(i), &caps).unwrap().len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fundamental_cycles_are_cycles(t in rooted_strategy(2, 5)) {
        let host = &oracle(t.len()).host;
        let z = fundamental_cycle(&t, host).unwrap();
        prop_assert!(!z.is_zero());
        prop_assert!(z.boundary().unwrap().is_zero());
    }

    #[test]
    fn phi_is_equivariant(t in tree_strategy(2, 4), a in 0u32..4, b in 0u32..4) {
        let n = t.leaf_count() as u32;
        let (a, b) = (a % n + 1, b % n + 1);
        let mut perm: Vec<u32> = (1..=n).collect();
        perm.swap(a as usize - 1, b as usize - 1);
        let host: Arc<Poset> = oracle(n as usize).host.clone();
        let image = |v: &ChainVector| {
            let mut out = ChainVector::zero(v.dim);
            for (s, &k) in &v.terms {
                let mut moved: Vec<u32> = s
                    .iter()
                    .map(|&x| {
                        let q = host.element(x as usize).weighted().unwrap().relabel(&perm);
                        host.index_of_weighted(&q).unwrap() as u32
                    })
                    .collect();
                moved.sort();
                out.add_term(moved, k).unwrap();
            }
            out
        };
        let lhs = phi(&t.relabel(&perm), &host).unwrap();
        let rhs = image(&phi(&t, &host).unwrap()).scaled(permutation_sign(&perm)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
