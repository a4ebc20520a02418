//! Möbius values, characteristic and rank polynomials, Whitney numbers.
//!
//! Each quantity comes in two routes: one read off a constructed poset, and
//! a closed form. Callers compare the two.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{arg, Caps, Result};
use crate::partition::{WeightedBlock, WeightedPartition};
use crate::poly::{binomial, ipow, IntPolynomial};
use crate::poset::{Element, Poset, Variant};

/// Rank sizes of the poset as a polynomial.
pub fn rank_generating_function(p: &Poset) -> IntPolynomial {
    IntPolynomial::new(p.rank_sizes().into_iter().map(BigInt::from).collect())
}

/// `Σ_k C(n,k)(n-k)^k x^k`.
pub fn rank_generating_formula(n: usize) -> IntPolynomial {
    IntPolynomial::new(
        (0..n)
            .map(|k| binomial(n as u64, k as u64) * ipow((n - k) as i64, k as u32))
            .collect(),
    )
}

fn check_mobius_cap(p: &Poset, caps: &Caps) -> Result<()> {
    Caps::check("mobius n", p.ground(), caps.mobius_n)
}

/// `Σ_i μ(0̂,[n]^i) t^i`, from the constructed weighted poset.
pub fn mu_polynomial(p: &Poset, caps: &Caps) -> Result<IntPolynomial> {
    if !matches!(p.variant(), Variant::Weighted | Variant::WeightedAugmented) {
        return arg("the Möbius polynomial is defined on the weighted poset");
    }
    check_mobius_cap(p, caps)?;
    let n = p.ground();
    let mut coeffs = Vec::with_capacity(n);
    for i in 0..n as u32 {
        let top = p.top_block(i).expect("[n]^i is present");
        coeffs.push(BigInt::from(p.mobius(p.bottom(), top)?));
    }
    Ok(IntPolynomial::new(coeffs))
}

/// `(-1)^{n-1} Π_{i=1}^{n-1} ((n-i) + i t)`.
pub fn mu_product_formula(n: usize) -> IntPolynomial {
    let mut acc = IntPolynomial::one();
    for i in 1..n as i64 {
        acc = &acc * &IntPolynomial::linear(n as i64 - i, i);
    }
    if n % 2 == 0 {
        -&acc
    } else {
        acc
    }
}

/// `μ(0̂, 1̂)` in the augmented poset, by recursion.
pub fn mu_augmented(p: &Poset, caps: &Caps) -> Result<i64> {
    if p.variant() != Variant::WeightedAugmented {
        return arg("need the augmented poset");
    }
    check_mobius_cap(p, caps)?;
    p.mobius(p.bottom(), p.top().expect("augmented poset has a top"))
}

pub fn mu_augmented_formula(n: usize) -> BigInt {
    let v = ipow(n as i64 - 1, n as u32 - 1);
    if n % 2 == 0 {
        v
    } else {
        -v
    }
}

/// `Σ_α μ(0̂,α) x^{n-1-ρ(α)}` over the weighted or pointed poset.
pub fn characteristic_polynomial(p: &Poset, caps: &Caps) -> Result<IntPolynomial> {
    if !matches!(p.variant(), Variant::Weighted | Variant::Pointed) {
        return arg(format!(
            "the characteristic polynomial is taken on the unaugmented poset, not {}",
            p.variant()
        ));
    }
    check_mobius_cap(p, caps)?;
    let n = p.ground();
    let row = p.mobius_row(p.bottom());
    let mut coeffs = vec![BigInt::zero(); n];
    for (&x, &mu) in row.iter() {
        coeffs[n - 1 - p.rank(x)] += mu;
    }
    Ok(IntPolynomial::new(coeffs))
}

/// `(x - n)^{n-1}`.
pub fn characteristic_formula(n: usize) -> IntPolynomial {
    IntPolynomial::linear(-(n as i64), 1).pow(n as u32 - 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WhitneyNumbers {
    /// `w_k`, the coefficient of `x^{n-1-k}` in the characteristic polynomial.
    pub first: Vec<i64>,
    /// `W_k`, the number of rank-`k` elements.
    pub second: Vec<i64>,
}

/// Whitney numbers of both kinds read off the constructed poset.
pub fn whitney_numbers(p: &Poset, caps: &Caps) -> Result<WhitneyNumbers> {
    let n = p.ground();
    let chi = characteristic_polynomial(p, caps)?;
    let first = (0..n)
        .map(|k| i64::try_from(chi.coeff(n - 1 - k)).map_err(|_| crate::Error::Overflow("w_k")))
        .collect::<Result<Vec<_>>>()?;
    let second = p.rank_sizes().into_iter().map(|c| c as i64).collect();
    Ok(WhitneyNumbers { first, second })
}

/// `w_k = (-1)^k C(n-1,k) n^k` and `W_k = C(n,k)(n-k)^k`.
pub fn whitney_formula(n: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    let first = (0..n)
        .map(|k| {
            let v = binomial(n as u64 - 1, k as u64) * ipow(n as i64, k as u32);
            if k % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    let second = (0..n)
        .map(|k| binomial(n as u64, k as u64) * ipow((n - k) as i64, k as u32))
        .collect();
    (first, second)
}

pub type BigMatrix = Vec<Vec<BigInt>>;

/// The matrices `[(-1)^{i-j} C(i-1,j-1) i^{i-j}]` and `[C(i,j) j^{i-j}]`,
/// `1 <= i, j <= n`, of first and second kind Whitney numbers across sizes.
pub fn whitney_matrices(n: usize) -> (BigMatrix, BigMatrix) {
    let mut a = vec![vec![BigInt::zero(); n]; n];
    let mut b = vec![vec![BigInt::zero(); n]; n];
    for i in 1..=n {
        for j in 1..=i {
            let e = (i - j) as u32;
            let v = binomial(i as u64 - 1, j as u64 - 1) * ipow(i as i64, e);
            a[i - 1][j - 1] = if e % 2 == 1 { -v } else { v };
            b[i - 1][j - 1] = binomial(i as u64, j as u64) * ipow(j as i64, e);
        }
    }
    (a, b)
}

pub fn mat_mul(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][k] * &bk[j];
            }
        }
    }
    out
}

pub fn is_identity(m: &BigMatrix) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.len() == m.len()
            && row
                .iter()
                .enumerate()
                .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
    })
}

/// `C(n-1,k-1) n^{n-k}`.
pub fn forest_count_formula(n: usize, k: usize) -> BigInt {
    binomial(n as u64 - 1, k as u64 - 1) * ipow(n as i64, (n - k) as u32)
}

/// The canonical map `[α, 1̂] -> augmented poset on [|α|]`: blocks of `α`
/// become the labels `1..=|α|` in order of their minima and block weights
/// are subtracted.
pub fn upper_interval_map(alpha: &WeightedPartition, beta: &WeightedPartition) -> Option<WeightedPartition> {
    if !alpha.leq(beta) {
        return None;
    }
    let k = alpha.len();
    let blocks = beta
        .blocks()
        .iter()
        .map(|b| {
            let mut members = 0;
            let mut base = 0;
            for (idx, a) in alpha.blocks().iter().enumerate() {
                if b.members & a.members == a.members {
                    members |= 1 << idx;
                    base += a.weight;
                }
            }
            WeightedBlock {
                members,
                weight: b.weight - base,
            }
        })
        .collect();
    WeightedPartition::new(k, blocks).ok()
}

/// Explicitly check that the canonical relabeling is an order isomorphism
/// from `[α, 1̂]` in the augmented poset `p` onto a freshly built augmented
/// poset on `|α|` labels.
pub fn upper_interval_isomorphic(p: &Poset, alpha: usize, caps: &Caps) -> Result<bool> {
    if p.variant() != Variant::WeightedAugmented {
        return arg("need the augmented poset");
    }
    let Some(a) = p.element(alpha).weighted().cloned() else {
        return arg("alpha must be a weighted partition");
    };
    let small = Poset::build(a.len(), Variant::WeightedAugmented, caps)?;
    let upper = p.up_set(alpha);
    let mut image = Vec::with_capacity(upper.len());
    for &x in &upper {
        let target = match p.element(x) {
            Element::Top => Element::Top,
            Element::Weighted(b) => match upper_interval_map(&a, b) {
                Some(m) => Element::Weighted(m),
                None => return Ok(false),
            },
            Element::Pointed(_) => return Ok(false),
        };
        match small.index_of(&target) {
            Some(t) => image.push(t),
            None => return Ok(false),
        }
    }
    let mut sorted = image.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != image.len() || sorted.len() != small.len() {
        return Ok(false);
    }
    for (i, &x) in upper.iter().enumerate() {
        for (j, &y) in upper.iter().enumerate() {
            if p.leq(x, y) != small.leq(image[i], image[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `μ(0̂, α)` for every `α`, keyed by partition.
pub fn mobius_from_bottom(p: &Poset, caps: &Caps) -> Result<BTreeMap<WeightedPartition, i64>> {
    check_mobius_cap(p, caps)?;
    let row = p.mobius_row(p.bottom());
    Ok(row
        .iter()
        .filter_map(|(&x, &mu)| p.element(x).weighted().map(|w| (w.clone(), mu)))
        .collect())
}

/// Abel's identity `(x+y)^n = Σ_k C(n,k) x (x-kz)^{k-1} (y+kz)^{n-k}` at one
/// integer point. The `k = 0` term is `y^n`, and `0^0 = 1`.
pub fn abel_identity_holds(x: i64, y: i64, z: i64, n: u32) -> bool {
    let lhs = ipow(x + y, n);
    let mut rhs = ipow(y, n);
    for k in 1..=n as i64 {
        rhs += binomial(n as u64, k as u64)
            * BigInt::from(x)
            * ipow(x - k * z, (k - 1) as u32)
            * ipow(y + k * z, n - k as u32);
    }
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn mu_polynomial_small() {
        let p = Poset::build(3, Variant::Weighted, &caps()).unwrap();
        assert_eq!(mu_polynomial(&p, &caps()).unwrap(), IntPolynomial::from_i64(&[2, 5, 2]));
        assert_eq!(mu_product_formula(4), IntPolynomial::from_i64(&[-6, -26, -26, -6]));
        assert_eq!(mu_product_formula(1), IntPolynomial::one());
    }

    #[test]
    fn mu_augmented_small() {
        for (n, want) in [(1, -1), (3, -4), (4, 27)] {
            let p = Poset::build(n, Variant::WeightedAugmented, &caps()).unwrap();
            assert_eq!(mu_augmented(&p, &caps()).unwrap(), want);
            assert_eq!(mu_augmented_formula(n), BigInt::from(want));
        }
    }

    #[test]
    fn characteristic_small() {
        let p = Poset::build(3, Variant::Weighted, &caps()).unwrap();
        assert_eq!(
            characteristic_polynomial(&p, &caps()).unwrap(),
            IntPolynomial::from_i64(&[9, -6, 1])
        );
        let q = Poset::build(4, Variant::Pointed, &caps()).unwrap();
        assert_eq!(
            characteristic_polynomial(&q, &caps()).unwrap(),
            IntPolynomial::from_i64(&[-64, 48, -12, 1])
        );
        let one = Poset::build(1, Variant::Weighted, &caps()).unwrap();
        assert_eq!(characteristic_polynomial(&one, &caps()).unwrap(), IntPolynomial::one());
        let aug = Poset::build(3, Variant::WeightedAugmented, &caps()).unwrap();
        assert!(characteristic_polynomial(&aug, &caps()).is_err());
    }

    #[test]
    fn whitney_small() {
        let p = Poset::build(3, Variant::Weighted, &caps()).unwrap();
        let w = whitney_numbers(&p, &caps()).unwrap();
        assert_eq!(w.first, vec![1, -6, 9]);
        assert_eq!(w.second, vec![1, 6, 3]);
        let (a, b) = whitney_matrices(4);
        assert!(is_identity(&mat_mul(&a, &b)));
    }

    #[test]
    fn upper_intervals() {
        let p = Poset::build(3, Variant::WeightedAugmented, &caps()).unwrap();
        for s in ["1^0,2^0,3^0", "12^0,3^0", "12^1,3^0"] {
            let a = p
                .index_of_weighted(&WeightedPartition::parse(3, s).unwrap())
                .unwrap();
            assert!(upper_interval_isomorphic(&p, a, &caps()).unwrap(), "{s}");
        }
    }

    #[test]
    fn abel_at_a_point() {
        assert!(abel_identity_holds(2, -1, 3, 5));
        assert!(abel_identity_holds(0, 0, 0, 0));
    }
}
