//! The acceptance suite: sixteen numbered criteria, each compared against an
//! independent route, with pinned sizes, tolerances and time budgets.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chains::chain_of_tree;
use crate::error::{Caps, Result};
use crate::homology::{betti_numbers, fundamental_cycle, verify_dual_bases, whitney_cohomology_ranks, ChainVector, OrderComplex};
use crate::invariants::{
    characteristic_polynomial, forest_count_formula, is_identity, mat_mul, mobius_from_bottom, mu_augmented,
    mu_polynomial, rank_generating_function, whitney_matrices,
};
use crate::labeling::{ascent_free_chains, verify_el};
use crate::partition::{full_mask, mask_labels};
use crate::poly::{binomial, ipow, IntPolynomial};
use crate::poset::{Poset, Variant};
use crate::straighten::{
    interval_cochain, is_straightened, phi, relation_instances, verify_bases, Oracle, Side, Straightener, TreeSum,
};
use crate::trees::bicolored::{enumerate_bicolored, valency_decreasing_tau, BicoloredTree};
use crate::trees::families::{enumerate_family, enumerate_family_on, family_counts, is_liu_lyndon, Family};
use crate::trees::liu::LiuOrder;
use crate::trees::psi::{psi, psi_inverse};
use crate::trees::rooted::{descent_polynomial, enumerate_rooted_trees, forest_alpha_counts, forest_count};

/// All comparisons are exact integer equalities.
pub const TOLERANCE: i64 = 0;

/// Identifier, description, largest size checked, time budget in seconds.
pub const CRITERIA: [(u8, &str, usize, u64); 16] = [
    (1, "rank sizes match C(n,k)(n-k)^k", 7, 10),
    (2, "Möbius values at the maximal elements match the product formula", 6, 120),
    (3, "Möbius value of the augmented poset is (-1)^n (n-1)^(n-1)", 6, 120),
    (4, "characteristic polynomial is (x-n)^(n-1), weighted and pointed", 6, 120),
    (5, "Whitney matrices are mutually inverse", 6, 1),
    (6, "forest counts and per-partition forest counts", 6, 60),
    (7, "every interval has one increasing chain, lexicographically first", 5, 300),
    (8, "ascent-free chains are the Lyndon-tree chains", 5, 300),
    (9, "Betti numbers of the intervals and of the poset without bottom", 5, 900),
    (10, "descent polynomial of rooted trees is the product formula", 8, 120),
    (11, "comb, Lyndon and Liu-Lyndon counts equal rooted-tree counts", 7, 60),
    (12, "psi is a bijection onto Liu-Lyndon trees with exact inverse", 6, 60),
    (13, "straightening is supported on combs, terminates, and is sound", 5, 1200),
    (14, "comb, Lyndon, Liu-Lyndon and full-poset bases; triangular pairing", 5, 1200),
    (15, "Whitney cohomology ranks", 5, 120),
    (16, "images of combs are independent and Lie relations vanish", 4, 600),
];

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    /// Lowers every criterion's size bound when set.
    pub max_n: Option<usize>,
    pub seed: u64,
    /// Trees drawn at the sampled size of the straightening criterion;
    /// `None` checks every tree.
    pub samples: Option<usize>,
    pub caps: Caps,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_n: None,
            seed: 0x5eed,
            samples: None,
            caps: Caps::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub max_n: usize,
    pub pass: bool,
    pub within_budget: bool,
    pub detail: String,
    pub elapsed_ms: u64,
    pub budget_ms: u64,
    pub seed: Option<u64>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} (n <= {}, {} ms of {} ms): {}: {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.max_n,
            self.elapsed_ms,
            self.budget_ms,
            self.title,
            self.detail
        )
    }
}

/// Accumulates failed comparisons and a short summary.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self) -> (bool, String) {
        if self.failures.is_empty() {
            (true, self.notes.join("; "))
        } else {
            let shown: Vec<&String> = self.failures.iter().filter(|f| !f.is_empty()).collect();
            let extra = self.failures.len() - shown.len();
            let mut s = shown.iter().map(|f| f.as_str()).collect::<Vec<_>>().join("; ");
            if extra > 0 {
                s.push_str(&format!("; and {extra} more"));
            }
            (false, s)
        }
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn sizes(lo: usize, hi: usize) -> std::ops::RangeInclusive<usize> {
    lo..=hi.max(lo.saturating_sub(1))
}

/// `Π_{j=1}^{n-1} ((n-j) + j t)`.
fn descent_product(n: usize) -> IntPolynomial {
    let mut acc = IntPolynomial::one();
    for j in 1..n as i64 {
        acc = &acc * &IntPolynomial::linear(n as i64 - j, j);
    }
    acc
}

fn c1_rank_sizes(hi: usize, caps: &Caps) -> Result<Checks> {
    let mut ch = Checks::default();
    for n in sizes(1, hi) {
        let p = Poset::build(n, Variant::Weighted, caps)?;
        let f = rank_generating_function(&p);
        for k in 0..n {
            let want = binomial(n as u64, k as u64) * ipow((n - k) as i64, k as u32);
            ch.expect(f.coeff(k) == want, || format!("n={n} k={k}: {} vs {want}", f.coeff(k)));
        }
        ch.note(format!("n={n}: {} elements", p.len()));
    }
    Ok(ch)
}

fn c2_mobius(hi: usize, caps: &Caps) -> Result<Checks> {
    let mut ch = Checks::default();
    for n in sizes(1, hi) {
        let p = Poset::build(n, Variant::Weighted, caps)?;
        let mu = mu_polynomial(&p, caps)?;
        let mut want = descent_product(n);
        if n % 2 == 0 {
            want = -&want;
        }
        ch.expect(mu == want, || format!("n={n}: {mu:?}"));
        if n == 3 || n == 4 {
            let v: Vec<BigInt> = (0..n).map(|i| mu.coeff(i)).collect();
            ch.note(format!("n={n}: {}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")));
        }
    }
    Ok(ch)
}

fn c3_augmented(hi: usize, caps: &Caps) -> Result<Checks> {
    let mut ch = Checks::default();
    for n in sizes(1, hi) {
        let p = Poset::build(n, Variant::WeightedAugmented, caps)?;
        let mu = mu_augmented(&p, caps)?;
        let want = ipow(-1, n as u32) * ipow(n as i64 - 1, n as u32 - 1);
        ch.expect(big(mu) == want, || format!("n={n}: {mu} vs {want}"));
        if n == 3 || n == 4 {
            ch.note(format!("n={n}: {mu}"));
        }
    }
    Ok(ch)
}

fn c4_characteristic(hi: usize, caps: &Caps) -> Result<Checks> {
    let mut ch = Checks::default();
    for n in sizes(1, hi) {
        let want = IntPolynomial::linear(-(n as i64), 1).pow(n as u32 - 1);
        for v in [Variant::Weighted, Variant::Pointed] {
            let p = Poset::build(n, v, caps)?;
            let chi = characteristic_polynomial(&p, caps)?;
            ch.expect(chi == want, || format!("n={n} {v}: {chi:?}"));
        }
    }
    ch.note(format!("weighted and pointed, n <= {hi}"));
    Ok(ch)
}

fn c5_whitney_matrices(hi: usize) -> Result<Checks> {
    let mut ch = Checks::default();
    for n in sizes(1, hi) {
        let (a, b) = whitney_matrices(n);
        ch.expect(is_identity(&mat_mul(&a, &b)) && is_identity(&mat_mul(&b, &a)), || format!("n={n}"));
    }
    ch.note(format!("n <= {hi}"));
    Ok(ch)
}

fn c6_forests(hi: usize, caps: &Caps) -> Result<Checks> {
    let mut ch = Checks::default();
    for n in sizes(1, hi) {
        for k in 1..=n {
            let got = forest_count(n, k, caps)?;
            let want = forest_count_formula(n, k);
            ch.expect(big(got as i64) == want, || format!("n={n} k={k}: {got} vs {want}"));
        }
    }
    for n in sizes(1, hi.min(5)) {
        let p = Poset::build(n, Variant::Weighted, caps)?;
        let mu = mobius_from_bottom(&p, caps)?;
        let forests = forest_alpha_counts(n, caps)?;
        ch.expect(forests.len() == mu.len(), || format!("n={n}: {} vs {} partitions", forests.len(), mu.len()));
        for (alpha, m) in &mu {
            let f = forests.get(alpha).copied().unwrap_or(0);
            ch.expect(f == m.unsigned_abs(), || format!("n={n} {alpha}: {f} forests, mu {m}"));
        }
    }
    ch.note(format!("totals n <= {hi}, per partition n <= {}", hi.min(5)));
    Ok(ch)
}

fn c7_el(hi: usize, caps: &Caps) -> Result<Checks> {
    let mut ch = Checks::default();
    for n in sizes(1, hi) {
        let p = Poset::build(n, Variant::WeightedAugmented, caps)?;
        let r = verify_el(&p)?;
        ch.expect(r.violations == 0, || format!("n={n}: {} violations", r.violations));
        ch.note(format!("n={n}: {} intervals", r.intervals.len()));
    }
    Ok(ch)
}

fn c8_ascent_free(hi: usize, caps: &Caps) -> Result<Checks> {
    let mut ch = Checks::default();
    for n in sizes(1, hi) {
        let p = Poset::build(n, Variant::Weighted, caps)?;
        let rooted = descent_polynomial(n, caps)?;
        for i in 0..n {
            let top = p.top_block(i as u32).expect("maximal element");
            let chains: BTreeSet<Vec<usize>> = ascent_free_chains(&p, p.bottom(), top)?.into_iter().collect();
            ch.expect(BigInt::from(chains.len()) == rooted.coeff(i), || {
                format!("n={n} i={i}: {} ascent-free vs {} trees", chains.len(), rooted.coeff(i))
            });
            let lyndon = enumerate_family(Family::Lyndon, n, Some(i), caps)?;
            let mut from_trees = BTreeSet::new();
            for t in &lyndon {
                let tau = valency_decreasing_tau(t)?;
                from_trees.insert(chain_of_tree(t, &tau)?.indices(&p)?);
            }
            ch.expect(from_trees == chains, || format!("n={n} i={i}: chain sets differ"));
        }
    }
    ch.note(format!("n <= {hi}, all i"));
    Ok(ch)
}

fn c9_betti(hi: usize, caps: &Caps) -> Result<Checks> {
    let mut ch = Checks::default();
    for n in sizes(2, hi) {
        let p = Poset::build(n, Variant::Weighted, caps)?;
        let rooted = descent_polynomial(n, caps)?;
        let reports: Vec<_> = (0..n)
            .into_par_iter()
            .map(|i| -> Result<_> {
                let top = p.top_block(i as u32).expect("maximal element");
                let k = OrderComplex::open_interval(p.clone(), p.bottom(), top, caps)?;
                Ok((i, betti_numbers(&format!("(0,[{n}]^{i})"), &k)))
            })
            .collect::<Result<_>>()?;
        for (i, r) in reports {
            let lower_zero = r.betti[..r.betti.len() - 1].iter().all(|&b| b == 0);
            ch.expect(BigInt::from(r.top_betti()) == rooted.coeff(i) && lower_zero, || {
                format!("n={n} i={i}: betti {:?}", r.betti)
            });
            ch.expect(r.torsion_top.is_empty(), || format!("n={n} i={i}: torsion {:?}", r.torsion_top));
        }
        let k = OrderComplex::without_bottom(p.clone(), caps)?;
        let r = betti_numbers(&format!("P{n}"), &k);
        let want = ipow(n as i64 - 1, n as u32 - 1);
        let lower_zero = r.betti[..r.betti.len() - 1].iter().all(|&b| b == 0);
        ch.expect(BigInt::from(r.top_betti()) == want && lower_zero, || format!("n={n} full: betti {:?}", r.betti));
        ch.expect(r.torsion_top.is_empty(), || format!("n={n} full: torsion {:?}", r.torsion_top));
        ch.note(format!("n={n}: full top {}", r.top_betti()));
    }
    Ok(ch)
}

fn c10_drake(hi: usize, caps: &Caps) -> Result<Checks> {
    let mut ch = Checks::default();
    for n in sizes(1, hi) {
        let d = descent_polynomial(n, caps)?;
        ch.expect(d == descent_product(n), || format!("n={n}: {d:?}"));
    }
    ch.note(format!("n <= {hi}"));
    Ok(ch)
}

fn c11_families(hi: usize, caps: &Caps) -> Result<Checks> {
    let mut ch = Checks::default();
    for n in sizes(1, hi) {
        let d = descent_polynomial(n, caps)?;
        for f in Family::ALL {
            let counts = family_counts(f, n, caps)?;
            let total: u64 = counts.iter().sum();
            ch.expect(BigInt::from(total) == ipow(n as i64, n as u32 - 1), || format!("n={n} {f}: {total}"));
            for (i, &c) in counts.iter().enumerate() {
                ch.expect(BigInt::from(c) == d.coeff(i), || format!("n={n} {f} i={i}: {c}"));
            }
        }
    }
    ch.note(format!("n <= {hi}"));
    Ok(ch)
}

fn c12_psi(hi: usize, caps: &Caps) -> Result<Checks> {
    let mut ch = Checks::default();
    let full = full_mask(hi);
    let masks: Vec<u32> = (1..=full).collect();
    let results: Vec<Checks> = masks
        .par_iter()
        .map(|&mask| -> Result<Checks> {
            let mut c = Checks::default();
            let labels: Vec<u32> = mask_labels(mask).collect();
            let trees = enumerate_rooted_trees(&labels, None, caps)?;
            let mut images: BTreeMap<usize, BTreeSet<BicoloredTree>> = BTreeMap::new();
            for t in &trees {
                let b = psi(t);
                c.expect(is_liu_lyndon(&b) && b.red_count() == t.descents() && b.mask() == mask, || {
                    format!("{t:?} -> {b}")
                });
                let back = psi_inverse(&b)?;
                c.expect(back == *t, || format!("{t:?} does not round-trip"));
                images.entry(t.descents()).or_default().insert(b);
            }
            for i in 0..labels.len() {
                let liu: BTreeSet<BicoloredTree> = enumerate_family_on(Family::Liu, mask, Some(i), caps)?.into_iter().collect();
                let img = images.remove(&i).unwrap_or_default();
                c.expect(img == liu, || format!("mask {mask:#b} i={i}: image is not the family"));
            }
            Ok(c)
        })
        .collect::<Result<_>>()?;
    for r in results {
        ch.failures.extend(r.failures);
    }
    ch.note(format!("{} subsets of [{hi}]", masks.len()));
    Ok(ch)
}

fn c13_straightening(hi: usize, cfg: &SuiteConfig) -> Result<Checks> {
    let caps = &cfg.caps;
    let mut ch = Checks::default();
    for n in sizes(2, hi) {
        let oracle = Oracle::new(n, caps)?;
        for side in Side::ALL {
            let eng = Straightener::new(side);
            let mut trees = enumerate_bicolored(n, None, caps)?;
            let total = trees.len();
            if n == 5 {
                if let Some(k) = cfg.samples {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    trees.shuffle(&mut rng);
                    trees.truncate(k.max(500));
                }
            }
            let bad: Vec<String> = trees
                .par_iter()
                .filter_map(|t| {
                    let check = || -> Result<bool> {
                        let s = eng.straighten(t)?;
                        Ok(is_straightened(&s) && oracle.certifies(&TreeSum::single(side, t.clone(), 1), &s)?)
                    };
                    match check() {
                        Ok(true) => None,
                        Ok(false) => Some(format!("n={n} {side} {t}")),
                        Err(e) => Some(format!("n={n} {side} {t}: {e}")),
                    }
                })
                .collect();
            for b in &bad {
                ch.expect(false, || b.clone());
            }
            let inst = relation_instances(n, None, side, caps)?;
            let nonzero = inst
                .par_iter()
                .filter(|(_, s)| eng.straighten_sum(s).map(|r| !r.is_zero()).unwrap_or(true))
                .count();
            ch.expect(nonzero == 0, || format!("n={n} {side}: {nonzero} relation instances survive"));
            ch.note(format!(
                "n={n} {side}: {}/{} trees, {} relations",
                trees.len(),
                total,
                inst.len()
            ));
        }
    }
    Ok(ch)
}

fn c14_bases(hi: usize, caps: &Caps) -> Result<Checks> {
    let mut ch = Checks::default();
    for n in sizes(2, hi) {
        let oracle = Oracle::new(n, caps)?;
        let liu = LiuOrder::new(*caps);
        for i in 0..n {
            let r = verify_bases(&oracle, Some(i), caps)?;
            ch.expect(r.ok(), || format!("n={n} i={i}: {:?}", r.entries));
            if n >= 3 {
                let order = liu.linear_extension(full_mask(n), i)?;
                let cycles: Vec<ChainVector> = order
                    .iter()
                    .map(|t| fundamental_cycle(t, &oracle.host))
                    .collect::<Result<_>>()?;
                let cochains: Vec<ChainVector> = order
                    .iter()
                    .map(|t| interval_cochain(&psi(t), &oracle.host))
                    .collect::<Result<_>>()?;
                let d = verify_dual_bases(&cycles, &cochains)?;
                ch.expect(d.upper_triangular && d.unit_diagonal && d.invertible_integers, || {
                    format!("n={n} i={i}: pairing {d:?}")
                });
            }
        }
        let r = verify_bases(&oracle, None, caps)?;
        ch.expect(r.ok(), || format!("n={n} full: {:?}", r.entries));
        ch.note(format!("n={n}: all i and full"));
    }
    Ok(ch)
}

fn c15_whitney_cohomology(hi: usize, caps: &Caps) -> Result<Checks> {
    let mut ch = Checks::default();
    for n in sizes(1, hi) {
        let p = Poset::build(n, Variant::Weighted, caps)?;
        let ranks = whitney_cohomology_ranks(&p, caps)?;
        let sum: u64 = ranks.iter().sum();
        for (r, &x) in ranks.iter().enumerate() {
            let want = binomial(n as u64 - 1, r as u64) * ipow(n as i64, r as u32);
            ch.expect(BigInt::from(x) == want, || format!("n={n} r={r}: {x} vs {want}"));
        }
        ch.expect(BigInt::from(sum) == ipow(n as i64 + 1, n as u32 - 1), || format!("n={n}: sum {sum}"));
    }
    ch.note(format!("n <= {hi}"));
    Ok(ch)
}

fn c16_phi(hi: usize, caps: &Caps) -> Result<Checks> {
    let mut ch = Checks::default();
    for n in sizes(2, hi) {
        let oracle = Oracle::new(n, caps)?;
        for i in 0..n {
            let combs = enumerate_family(Family::Comb, n, Some(i), caps)?;
            let images: Vec<ChainVector> = combs.iter().map(|t| phi(t, &oracle.host)).collect::<Result<_>>()?;
            let h = oracle.interval(i)?;
            let rank = h.quotient_rank(&images)?;
            ch.expect(rank == combs.len() && rank == h.betti(), || {
                format!("n={n} i={i}: rank {rank} of {} combs, betti {}", combs.len(), h.betti())
            });
        }
        let inst = relation_instances(n, None, Side::Lie2, caps)?;
        let bad = inst
            .par_iter()
            .filter(|(_, s)| !oracle.vanishes(s).unwrap_or(false))
            .count();
        ch.expect(bad == 0, || format!("n={n}: {bad} Lie relation images are not coboundaries"));
        ch.note(format!("n={n}: {} relation images", inst.len()));
    }
    Ok(ch)
}

/// Run one criterion; errors count as failures.
pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> CriterionResult {
    let (_, title, bound, budget) = CRITERIA[(id as usize).clamp(1, 16) - 1];
    let hi = cfg.max_n.map_or(bound, |m| m.min(bound));
    let caps = &cfg.caps;
    let start = Instant::now();
    let outcome = match id {
        1 => c1_rank_sizes(hi, caps),
        2 => c2_mobius(hi, caps),
        3 => c3_augmented(hi, caps),
        4 => c4_characteristic(hi, caps),
        5 => c5_whitney_matrices(hi),
        6 => c6_forests(hi, caps),
        7 => c7_el(hi, caps),
        8 => c8_ascent_free(hi, caps),
        9 => c9_betti(hi, caps),
        10 => c10_drake(hi, caps),
        11 => c11_families(hi, caps),
        12 => c12_psi(hi, caps),
        13 => c13_straightening(hi, cfg),
        14 => c14_bases(hi, caps),
        15 => c15_whitney_cohomology(hi, caps),
        16 => c16_phi(hi, caps),
        _ => Err(crate::Error::Argument(format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let (pass, detail) = match outcome {
        Ok(ch) => ch.finish(),
        Err(e) => (false, e.to_string()),
    };
    let within_budget = elapsed <= Duration::from_secs(budget);
    CriterionResult {
        id,
        title: title.to_string(),
        max_n: hi,
        pass: pass && within_budget,
        within_budget,
        detail: if within_budget { detail } else { format!("{detail}; over the time budget") },
        elapsed_ms: elapsed.as_millis() as u64,
        budget_ms: budget * 1000,
        seed: if id == 13 && cfg.samples.is_some() { Some(cfg.seed) } else { None },
    }
}

/// Run criteria in order, reporting each result as it completes.
pub fn run_suite(cfg: &SuiteConfig, mut on_result: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    (1..=16u8)
        .map(|id| {
            let r = run_criterion(id, cfg);
            on_result(&r);
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite() {
        let cfg = SuiteConfig {
            max_n: Some(3),
            ..SuiteConfig::default()
        };
        for r in run_suite(&cfg, |_| {}) {
            assert!(r.pass, "{}", r.line());
        }
        assert_eq!(TOLERANCE, 0);
    }
}
