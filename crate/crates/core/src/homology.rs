//! Order complexes, integer chain vectors, Betti numbers, top cohomology
//! modulo coboundaries, fundamental cycles of the boolean subposets, and the
//! homology/cohomology pairing.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chains::{chain_of_tree_identity, pi_subposet};
use crate::error::{arg, internal, Caps, Error, Result};
use crate::linalg::{canonical, solve_combination, sparse_rank, Echelon, IntMatrix, SparseMatrix, SparseVec};
use crate::poset::Poset;
use crate::trees::psi::psi;
use crate::trees::rooted::RootedTree;

/// A chain of the order complex: increasing host element indices.
pub type Simplex = Vec<u32>;

/// Formal integer combination of chains of one length.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ChainVector {
    /// Number of elements minus one; the empty chain has dimension −1.
    pub dim: isize,
    pub terms: BTreeMap<Simplex, i64>,
}

impl ChainVector {
    pub fn zero(dim: isize) -> Self {
        ChainVector {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(chain: Simplex, coeff: i64) -> Self {
        let mut v = Self::zero(chain.len() as isize - 1);
        if coeff != 0 {
            v.terms.insert(chain, coeff);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, chain: &[u32]) -> i64 {
        self.terms.get(chain).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, chain: Simplex, coeff: i64) -> Result<()> {
        if chain.len() as isize - 1 != self.dim {
            return arg("chain length does not match the vector's dimension");
        }
        let e = self.terms.entry(chain.clone()).or_insert(0);
        *e = e.checked_add(coeff).ok_or(Error::Overflow("chain vector"))?;
        if *e == 0 {
            self.terms.remove(&chain);
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &ChainVector, k: i64) -> Result<()> {
        if other.is_zero() {
            return Ok(());
        }
        if other.dim != self.dim {
            return arg("adding chain vectors of different dimensions");
        }
        for (c, &x) in &other.terms {
            let y = x.checked_mul(k).ok_or(Error::Overflow("chain vector"))?;
            self.add_term(c.clone(), y)?;
        }
        Ok(())
    }

    pub fn scaled(&self, k: i64) -> Result<ChainVector> {
        let mut out = ChainVector::zero(self.dim);
        out.add_scaled(self, k)?;
        Ok(out)
    }

    /// `Σ (−1)^i (chain without its i-th element)`.
    pub fn boundary(&self) -> Result<ChainVector> {
        let mut out = ChainVector::zero(self.dim - 1);
        if self.dim < 0 {
            return Ok(out);
        }
        for (c, &x) in &self.terms {
            for i in 0..c.len() {
                let mut face = c.clone();
                face.remove(i);
                out.add_term(face, if i % 2 == 0 { x } else { -x })?;
            }
        }
        Ok(out)
    }

    /// Bilinear pairing with chains as an orthonormal basis.
    pub fn pair(&self, other: &ChainVector) -> Result<i64> {
        let mut s: i64 = 0;
        for (c, &x) in &self.terms {
            if let Some(&y) = other.terms.get(c) {
                s = x
                    .checked_mul(y)
                    .and_then(|p| s.checked_add(p))
                    .ok_or(Error::Overflow("pairing"))?;
            }
        }
        Ok(s)
    }

    /// Human-readable form using host element names.
    pub fn describe(&self, host: &Poset) -> String {
        let mut parts = Vec::new();
        for (c, x) in &self.terms {
            let names: Vec<String> = c.iter().map(|&v| host.element(v as usize).to_string()).collect();
            parts.push(format!("{x:+} [{}]", names.join(" < ")));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ")
        }
    }
}

/// The order complex of a set of elements of a host poset.
#[derive(Debug)]
pub struct OrderComplex {
    pub host: Arc<Poset>,
    pub vertices: Vec<u32>,
    /// `chains[d]` lists the chains with `d + 1` elements in lexicographic order.
    pub chains: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, u32>>,
}

impl OrderComplex {
    /// The complex on `vertices`; fails if the chain count passes the cap.
    pub fn new(host: Arc<Poset>, mut vertices: Vec<usize>, caps: &Caps) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        let vs: Vec<u32> = vertices.iter().map(|&v| v as u32).collect();
        let pos: HashMap<u32, usize> = vs.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let up: Vec<Vec<u32>> = vs
            .iter()
            .map(|&v| {
                host.up_set(v as usize)
                    .into_iter()
                    .map(|w| w as u32)
                    .filter(|w| *w != v && pos.contains_key(w))
                    .collect()
            })
            .collect();
        let mut chains: Vec<Vec<Simplex>> = Vec::new();
        let mut total = 0usize;
        let mut stack: Vec<u32> = Vec::new();
        fn rec(
            v: u32,
            up: &[Vec<u32>],
            pos: &HashMap<u32, usize>,
            stack: &mut Vec<u32>,
            chains: &mut Vec<Vec<Simplex>>,
            total: &mut usize,
            cap: usize,
        ) -> Result<()> {
            stack.push(v);
            let d = stack.len() - 1;
            if chains.len() <= d {
                chains.push(Vec::new());
            }
            chains[d].push(stack.clone());
            *total += 1;
            if *total > cap {
                return Err(Error::Resource {
                    what: "order complex chains",
                    requested: *total,
                    cap,
                });
            }
            let mut nexts = up[pos[&v]].clone();
            nexts.sort_unstable();
            for w in nexts {
                rec(w, up, pos, stack, chains, total, cap)?;
            }
            stack.pop();
            Ok(())
        }
        for &v in &vs {
            rec(v, &up, &pos, &mut stack, &mut chains, &mut total, caps.max_elements)?;
        }
        for level in chains.iter_mut() {
            level.sort_unstable();
        }
        let index = chains
            .iter()
            .map(|level| level.iter().enumerate().map(|(k, c)| (c.clone(), k as u32)).collect())
            .collect();
        Ok(OrderComplex {
            host,
            vertices: vs,
            chains,
            index,
        })
    }

    /// The open interval `(x, y)`.
    pub fn open_interval(host: Arc<Poset>, x: usize, y: usize, caps: &Caps) -> Result<Self> {
        if !host.leq(x, y) {
            return arg("interval endpoints are not comparable");
        }
        let vs: Vec<usize> = host.interval(x, y).into_iter().filter(|&v| v != x && v != y).collect();
        Self::new(host, vs, caps)
    }

    /// Every element except the bottom.
    pub fn without_bottom(host: Arc<Poset>, caps: &Caps) -> Result<Self> {
        let b = host.bottom();
        let vs: Vec<usize> = (0..host.len()).filter(|&v| v != b).collect();
        Self::new(host, vs, caps)
    }

    /// Largest dimension with a chain, or −1 for the empty complex.
    pub fn top_dim(&self) -> isize {
        self.chains.len() as isize - 1
    }

    /// Number of chains in dimension `d` (the empty chain counts in −1).
    pub fn count(&self, d: isize) -> usize {
        match d {
            -1 => 1,
            d if d >= 0 && (d as usize) < self.chains.len() => self.chains[d as usize].len(),
            _ => 0,
        }
    }

    pub fn index_of(&self, chain: &[u32]) -> Option<u32> {
        if chain.is_empty() {
            return Some(0);
        }
        self.index.get(chain.len() - 1)?.get(chain).copied()
    }

    /// Rows of `∂_d`, one per `d`-chain, over the `(d−1)`-chains.
    pub fn boundary_rows(&self, d: isize) -> Vec<SparseVec> {
        if d < 0 || d > self.top_dim() {
            return Vec::new();
        }
        self.chains[d as usize]
            .par_iter()
            .map(|c| {
                if d == 0 {
                    return vec![(0, 1)];
                }
                let faces = (0..c.len()).map(|i| {
                    let mut f = c.clone();
                    f.remove(i);
                    (self.index_of(&f).expect("faces are chains"), if i % 2 == 0 { 1 } else { -1 })
                });
                canonical(faces.collect())
            })
            .collect()
    }

    pub fn boundary_matrix(&self, d: isize) -> SparseMatrix {
        SparseMatrix::new(self.count(d - 1), self.boundary_rows(d))
    }

    /// Rows of `δ` into the top dimension, one per codimension-one chain,
    /// over the top chains.
    pub fn top_coboundary_rows(&self) -> Vec<SparseVec> {
        let top = self.top_dim();
        if top < 0 {
            return Vec::new();
        }
        let t = self.boundary_matrix(top).transpose();
        t.entries
    }

    /// `δ` of a chain vector: insert every admissible vertex, with sign
    /// `(−1)^position`.
    pub fn coboundary(&self, v: &ChainVector) -> Result<ChainVector> {
        let mut out = ChainVector::zero(v.dim + 1);
        for (c, &x) in &v.terms {
            for &w in &self.vertices {
                if c.contains(&w) {
                    continue;
                }
                let p = c.partition_point(|&a| a < w);
                let below_ok = p == 0 || self.host.leq(c[p - 1] as usize, w as usize);
                let above_ok = p == c.len() || self.host.leq(w as usize, c[p] as usize);
                if below_ok && above_ok {
                    let mut d = c.clone();
                    d.insert(p, w);
                    out.add_term(d, if p % 2 == 0 { x } else { -x })?;
                }
            }
        }
        Ok(out)
    }

    /// Reduced Betti numbers over the rationals, indexed from dimension −1.
    pub fn reduced_betti(&self) -> Vec<usize> {
        let top = self.top_dim();
        let ranks: Vec<usize> = (0..=top + 1)
            .map(|d| if d > top { 0 } else { sparse_rank(&self.boundary_rows(d)) })
            .collect();
        // ranks[k] = rank ∂_k for k = 0..=top+1.
        (-1..=top)
            .map(|d| {
                let r_d = if d >= 0 { ranks[d as usize] } else { 0 };
                let r_up = ranks[(d + 1) as usize];
                self.count(d) - r_d - r_up
            })
            .collect()
    }

    /// Sparse vector of a top-dimensional chain vector.
    pub fn top_vector(&self, v: &ChainVector) -> Result<SparseVec> {
        if v.dim != self.top_dim() {
            return arg("vector is not top-dimensional");
        }
        let mut out = Vec::with_capacity(v.terms.len());
        for (c, &x) in &v.terms {
            let Some(k) = self.index_of(c) else {
                return arg(format!("{c:?} is not a chain of the complex"));
            };
            out.push((k, x));
        }
        Ok(canonical(out))
    }
}

/// Top cohomology `C^top / B^top` of an order complex.
#[derive(Debug)]
pub struct TopCohomology {
    pub complex: Arc<OrderComplex>,
    coboundaries: Echelon,
    codim_rows: Vec<SparseVec>,
}

impl TopCohomology {
    pub fn new(complex: Arc<OrderComplex>) -> Self {
        let codim_rows = complex.top_coboundary_rows();
        let mut coboundaries = Echelon::new();
        for r in &codim_rows {
            coboundaries.insert(r);
        }
        TopCohomology {
            complex,
            coboundaries,
            codim_rows,
        }
    }

    pub fn rank_of_coboundaries(&self) -> usize {
        self.coboundaries.rank()
    }

    /// `dim C^top − rank δ`.
    pub fn betti(&self) -> usize {
        self.complex.count(self.complex.top_dim()) - self.coboundaries.rank()
    }

    pub fn is_coboundary(&self, v: &ChainVector) -> Result<bool> {
        Ok(self.coboundaries.contains(&self.complex.top_vector(v)?))
    }

    /// Rank of the classes of `vs` in the quotient.
    pub fn quotient_rank(&self, vs: &[ChainVector]) -> Result<usize> {
        let rows: Vec<SparseVec> = vs
            .iter()
            .map(|v| self.complex.top_vector(v))
            .collect::<Result<_>>()?;
        Ok(self.coboundaries.quotient_rank(&rows))
    }

    /// A rational cochain `w = Σ (num_j / den) c_j` of codimension one with
    /// `δ(w) = v`; `None` when `v` is not a coboundary.
    pub fn witness(&self, v: &ChainVector) -> Result<Option<Witness>> {
        let top = self.complex.top_dim();
        if self.codim_rows.len() > 4000 {
            return Err(Error::Resource {
                what: "witness system rows",
                requested: self.codim_rows.len(),
                cap: 4000,
            });
        }
        let target = self.complex.top_vector(v)?;
        let Some((den, nums)) = solve_combination(&self.codim_rows, &target) else {
            return Ok(None);
        };
        let codim = top - 1;
        let chains: Vec<Simplex> = if codim < 0 {
            vec![Vec::new()]
        } else {
            self.complex.chains[codim as usize].clone()
        };
        let terms = chains
            .into_iter()
            .zip(nums)
            .filter(|(_, x)| !x.is_zero())
            .map(|(c, x)| (c, x.to_string()))
            .collect();
        Ok(Some(Witness {
            denominator: den.to_string(),
            terms,
        }))
    }
}

/// A rational codimension-one cochain, numerators over a common denominator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub denominator: String,
    pub terms: Vec<(Simplex, String)>,
}

/// Summary of a (co)homology computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub poset_id: String,
    /// Chain counts per dimension, starting at dimension 0.
    pub dims: Vec<usize>,
    /// Reduced Betti numbers, starting at dimension −1.
    pub betti: Vec<usize>,
    /// Invariant factors above 1 of the top boundary map; empty means the
    /// top cohomology is torsion-free.
    pub torsion_top: Vec<String>,
    /// Invariant factors above 1 of the next boundary map down.
    pub torsion_next: Vec<String>,
    pub runtime_ms: u64,
}

impl HomologyReport {
    pub fn top_betti(&self) -> usize {
        *self.betti.last().unwrap_or(&0)
    }
}

/// Betti numbers and top torsion of a complex.
pub fn betti_numbers(id: &str, k: &OrderComplex) -> HomologyReport {
    let start = Instant::now();
    let top = k.top_dim();
    let betti = k.reduced_betti();
    let torsion_top = if top >= 0 { k.boundary_matrix(top).smith().torsion } else { Vec::new() };
    let torsion_next = if top >= 1 { k.boundary_matrix(top - 1).smith().torsion } else { Vec::new() };
    HomologyReport {
        poset_id: id.to_string(),
        dims: (0..=top).map(|d| k.count(d)).collect(),
        betti,
        torsion_top,
        torsion_next,
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

/// The fundamental cycle of the proper part of `Π_T`, as a chain vector in
/// `host` (the weighted partition poset on the same ground set), normalized
/// so the chain of `ψ(T)` has coefficient +1.
pub fn fundamental_cycle(t: &RootedTree, host: &Poset) -> Result<ChainVector> {
    let pi = pi_subposet(t)?;
    let n = pi.ground;
    let psi_chain = chain_of_tree_identity(&psi(t))?.open_indices(host)?;
    let psi_chain: Simplex = psi_chain.into_iter().map(|v| v as u32).collect();
    if n <= 2 {
        // The proper part is empty; the cycle is the empty chain.
        return Ok(ChainVector::single(Vec::new(), 1));
    }
    let tops: Vec<Simplex> = pi
        .maximal_chains()
        .iter()
        .map(|c| c.open_indices(host).map(|v| v.into_iter().map(|x| x as u32).collect()))
        .collect::<Result<_>>()?;
    // Faces of the top chains, with the empty chain for dimension zero.
    let mut face_index: BTreeMap<Simplex, usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, i64)> = Vec::new();
    for (j, c) in tops.iter().enumerate() {
        for i in 0..c.len() {
            let mut f = c.clone();
            f.remove(i);
            let next = face_index.len();
            let r = *face_index.entry(f).or_insert(next);
            entries.push((r, j, if i % 2 == 0 { 1 } else { -1 }));
        }
    }
    let mut m = IntMatrix::zeros(face_index.len(), tops.len());
    for (r, c, x) in entries {
        let v = m.get(r, c) + BigInt::from(x);
        m.set(r, c, v);
    }
    let kernel = m.kernel();
    if kernel.len() != 1 {
        return internal(format!("top homology of the sphere has rank {}", kernel.len()));
    }
    let Some(pos) = tops.iter().position(|c| *c == psi_chain) else {
        return internal("the chain of psi(T) is not a maximal chain of the subposet");
    };
    let pivot = kernel[0][pos].clone();
    if !pivot.abs().is_one() {
        return internal("fundamental cycle has a non-unit coefficient");
    }
    let mut out = ChainVector::zero(tops[0].len() as isize - 1);
    for (c, x) in tops.iter().zip(&kernel[0]) {
        let y = (x * &pivot).to_i64().ok_or(Error::Overflow("fundamental cycle"))?;
        out.add_term(c.clone(), y)?;
    }
    Ok(out)
}

/// Pairing matrix `⟨cycles_j, cochains_k⟩` and its invertibility verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub size: usize,
    pub determinant: String,
    pub invertible_integers: bool,
    pub invertible_rationals: bool,
    pub upper_triangular: bool,
    pub unit_diagonal: bool,
}

pub fn pairing_matrix(cycles: &[ChainVector], cochains: &[ChainVector]) -> Result<IntMatrix> {
    if cycles.len() != cochains.len() {
        return arg("bases of different sizes");
    }
    if let (Some(a), Some(b)) = (cycles.first(), cochains.first()) {
        if cycles.iter().any(|c| c.dim != a.dim) || cochains.iter().any(|c| c.dim != b.dim) || a.dim != b.dim {
            return arg("dimension mismatch");
        }
    }
    let m = cycles.len();
    let mut out = IntMatrix::zeros(m, m);
    for (j, z) in cycles.iter().enumerate() {
        for (k, c) in cochains.iter().enumerate() {
            out.set(j, k, BigInt::from(z.pair(c)?));
        }
    }
    Ok(out)
}

pub fn verify_dual_bases(cycles: &[ChainVector], cochains: &[ChainVector]) -> Result<DualityReport> {
    let m = pairing_matrix(cycles, cochains)?;
    let det = m.determinant()?;
    Ok(DualityReport {
        size: m.rows,
        determinant: det.to_string(),
        invertible_integers: det.abs().is_one(),
        invertible_rationals: !det.is_zero(),
        upper_triangular: m.is_upper_triangular(),
        unit_diagonal: m.diagonal().iter().all(|d| d.is_one()),
    })
}

/// `Σ_{ρ(x) = r} |μ(0̂, x)|` for each rank `r`.
pub fn whitney_cohomology_ranks(p: &Poset, caps: &Caps) -> Result<Vec<u64>> {
    Caps::check("mobius n", p.ground(), caps.mobius_n)?;
    let row = p.mobius_row(p.bottom());
    let mut out = vec![0u64; p.max_rank() + 1];
    for (&x, &mu) in row.iter() {
        if p.element(x).is_top() {
            continue;
        }
        out[p.rank(x)] += mu.unsigned_abs();
    }
    Ok(out)
}

pub fn whitney_cohomology_formula(n: usize) -> Vec<BigInt> {
    (0..n)
        .map(|r| crate::poly::binomial(n as u64 - 1, r as u64) * crate::poly::ipow(n as i64, r as u32))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::WeightedPartition;
    use crate::Variant;

    fn setup(n: usize) -> Arc<Poset> {
        Poset::build(n, Variant::Weighted, &Caps::default()).unwrap()
    }

    fn top(p: &Poset, n: usize, w: u32) -> usize {
        p.index_of_weighted(&WeightedPartition::top(n, w).unwrap()).unwrap()
    }

    #[test]
    fn small_betti() {
        let caps = Caps::default();
        let p = setup(3);
        let k = OrderComplex::open_interval(p.clone(), p.bottom(), top(&p, 3, 1), &caps).unwrap();
        assert_eq!(k.reduced_betti(), vec![0, 5]);
        let k = OrderComplex::open_interval(p.clone(), p.bottom(), top(&p, 3, 0), &caps).unwrap();
        assert_eq!(k.reduced_betti(), vec![0, 2]);
        let k = OrderComplex::without_bottom(p.clone(), &caps).unwrap();
        let r = betti_numbers("n3", &k);
        assert_eq!(r.betti, vec![0, 0, 4]);
        assert!(r.torsion_top.is_empty());
    }

    #[test]
    fn boundary_and_coboundary() {
        let caps = Caps::default();
        let p = setup(3);
        let k = OrderComplex::without_bottom(p.clone(), &caps).unwrap();
        let c = ChainVector::single(k.chains[1][0].clone(), 1);
        let b = c.boundary().unwrap();
        assert_eq!(b.terms.len(), 2);
        assert!(b.boundary().unwrap().is_zero());
        // <δ a, c> = <a, ∂ c> on every pair of basis chains.
        for a in &k.chains[0] {
            let da = k.coboundary(&ChainVector::single(a.clone(), 1)).unwrap();
            for c in &k.chains[1] {
                let cv = ChainVector::single(c.clone(), 1);
                let lhs = da.pair(&cv).unwrap();
                let rhs = ChainVector::single(a.clone(), 1).pair(&cv.boundary().unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn membership_and_witness() {
        let caps = Caps::default();
        let p = setup(3);
        let k = Arc::new(OrderComplex::open_interval(p.clone(), p.bottom(), top(&p, 3, 1), &caps).unwrap());
        let h = TopCohomology::new(k.clone());
        assert_eq!(h.betti(), 5);
        let single = ChainVector::single(k.chains[0][0].clone(), 1);
        assert!(!h.is_coboundary(&single).unwrap());
        let empty = ChainVector::single(Vec::new(), 1);
        let d = k.coboundary(&empty).unwrap();
        assert!(h.is_coboundary(&d).unwrap());
        let w = h.witness(&d).unwrap().unwrap();
        assert_eq!(w.terms.len(), 1);
        assert_eq!(w.denominator, w.terms[0].1);
    }

    #[test]
    fn cycles() {
        let p = setup(3);
        let t = RootedTree::parse("1(2(3))").unwrap();
        let rho = fundamental_cycle(&t, &p).unwrap();
        assert_eq!(rho.terms.len(), 2);
        let mut coeffs: Vec<i64> = rho.terms.values().copied().collect();
        coeffs.sort();
        assert_eq!(coeffs, vec![-1, 1]);
        assert!(rho.boundary().unwrap().is_zero() || rho.dim == 0);
        let p4 = setup(4);
        for t in crate::trees::rooted::enumerate_rooted_trees(&[1, 2, 3, 4], Some(1), &Caps::default()).unwrap() {
            let rho = fundamental_cycle(&t, &p4).unwrap();
            assert_eq!(rho.terms.len(), 6);
            assert!(rho.boundary().unwrap().is_zero());
            let c = chain_of_tree_identity(&psi(&t)).unwrap().open_indices(&p4).unwrap();
            assert_eq!(rho.coeff(&c.iter().map(|&x| x as u32).collect::<Vec<_>>()), 1);
        }
    }

    #[test]
    fn whitney_ranks() {
        let p = setup(3);
        assert_eq!(whitney_cohomology_ranks(&p, &Caps::default()).unwrap(), vec![1, 6, 9]);
        let p = setup(4);
        assert_eq!(whitney_cohomology_ranks(&p, &Caps::default()).unwrap(), vec![1, 12, 48, 64]);
    }
}
