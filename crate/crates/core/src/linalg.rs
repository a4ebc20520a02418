//! Exact integer linear algebra: an incremental sparse row echelon form
//! (i128 with BigInt fallback), dense matrices with Bareiss elimination,
//! kernels and Smith normal form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};

/// Sparse integer vector, sorted by column, no zero entries.
pub type SparseVec = Vec<(u32, i64)>;

/// Sort, merge duplicates and drop zeros.
pub fn canonical(mut v: Vec<(u32, i64)>) -> SparseVec {
    v.sort_unstable_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (c, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += x,
            _ => out.push((c, x)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

trait Coef: Clone + PartialEq + fmt::Debug {
    fn c_from(x: i64) -> Self;
    fn c_is_zero(&self) -> bool;
    fn c_mul(&self, o: &Self) -> Option<Self>;
    fn c_sub(&self, o: &Self) -> Option<Self>;
    fn c_gcd(&self, o: &Self) -> Self;
    fn c_div(&self, o: &Self) -> Self;
    fn c_is_neg(&self) -> bool;
    fn c_neg(&self) -> Self;
    fn c_is_one(&self) -> bool;
}

impl Coef for i128 {
    fn c_from(x: i64) -> Self {
        x as i128
    }
    fn c_is_zero(&self) -> bool {
        *self == 0
    }
    fn c_mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn c_sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn c_gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn c_div(&self, o: &Self) -> Self {
        self / o
    }
    fn c_is_neg(&self) -> bool {
        *self < 0
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_is_one(&self) -> bool {
        *self == 1
    }
}

impl Coef for BigInt {
    fn c_from(x: i64) -> Self {
        BigInt::from(x)
    }
    fn c_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn c_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn c_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn c_gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn c_div(&self, o: &Self) -> Self {
        self / o
    }
    fn c_is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_is_one(&self) -> bool {
        One::is_one(self)
    }
}

type Row<C> = Vec<(u32, C)>;

#[derive(Clone, Debug)]
struct Core<C> {
    rows: Vec<Row<C>>,
    /// Pivot row for each leading column.
    pivot: BTreeMap<u32, usize>,
}

impl<C: Coef> Core<C> {
    fn new() -> Self {
        Core {
            rows: Vec::new(),
            pivot: BTreeMap::new(),
        }
    }

    fn lift(v: &[(u32, i64)]) -> Row<C> {
        v.iter().map(|&(c, x)| (c, C::c_from(x))).collect()
    }

    /// `a·v − b·r`, content removed. `None` on overflow.
    fn combine(v: &Row<C>, a: &C, r: &Row<C>, b: &C) -> Option<Row<C>> {
        let mut out = Vec::with_capacity(v.len() + r.len());
        let (mut i, mut j) = (0, 0);
        while i < v.len() || j < r.len() {
            let (col, val) = if j >= r.len() || (i < v.len() && v[i].0 < r[j].0) {
                let e = &v[i];
                i += 1;
                (e.0, e.1.c_mul(a)?)
            } else if i >= v.len() || r[j].0 < v[i].0 {
                let e = &r[j];
                j += 1;
                (e.0, C::c_from(0).c_sub(&e.1.c_mul(b)?)?)
            } else {
                let x = v[i].1.c_mul(a)?.c_sub(&r[j].1.c_mul(b)?)?;
                let col = v[i].0;
                i += 1;
                j += 1;
                (col, x)
            };
            if !val.c_is_zero() {
                out.push((col, val));
            }
        }
        Some(Self::primitive(out))
    }

    fn primitive(mut v: Row<C>) -> Row<C> {
        if v.is_empty() {
            return v;
        }
        let mut g = v[0].1.clone();
        for e in &v[1..] {
            if g.c_is_one() {
                break;
            }
            g = g.c_gcd(&e.1);
        }
        if g.c_is_neg() {
            g = g.c_neg();
        }
        if !g.c_is_one() && !g.c_is_zero() {
            for e in v.iter_mut() {
                e.1 = e.1.c_div(&g);
            }
        }
        v
    }

    /// Reduce against the pivots; `None` on overflow.
    fn reduce(&self, mut v: Row<C>) -> Option<Row<C>> {
        v = Self::primitive(v);
        while let Some(&(lead, _)) = v.first() {
            let Some(&k) = self.pivot.get(&lead) else {
                return Some(v);
            };
            let r = &self.rows[k];
            let (rl, vl) = (&r[0].1, &v[0].1);
            let g = rl.c_gcd(vl);
            v = Self::combine(&v, &rl.c_div(&g), r, &vl.c_div(&g))?;
        }
        Some(v)
    }

    fn insert(&mut self, v: Row<C>) -> Option<bool> {
        let v = self.reduce(v)?;
        if v.is_empty() {
            return Some(false);
        }
        self.pivot.insert(v[0].0, self.rows.len());
        self.rows.push(v);
        Some(true)
    }
}

impl Core<i128> {
    fn to_big(&self) -> Core<BigInt> {
        Core {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&(c, x)| (c, BigInt::from(x))).collect())
                .collect(),
            pivot: self.pivot.clone(),
        }
    }
}

#[derive(Clone, Debug)]
enum Mode {
    Small(Core<i128>),
    Big(Core<BigInt>),
}

/// Incremental row echelon form over the rationals, with exact integer rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    mode: Mode,
}

impl Default for Echelon {
    fn default() -> Self {
        Self::new()
    }
}

impl Echelon {
    pub fn new() -> Self {
        Echelon {
            mode: Mode::Small(Core::new()),
        }
    }

    fn promote(&mut self) {
        if let Mode::Small(core) = &self.mode {
            self.mode = Mode::Big(core.to_big());
        }
    }

    /// Add a row; true when it is independent of the rows so far.
    pub fn insert(&mut self, v: &[(u32, i64)]) -> bool {
        if let Mode::Small(core) = &mut self.mode {
            if let Some(new) = core.insert(Core::lift(v)) {
                return new;
            }
            self.promote();
        }
        match &mut self.mode {
            Mode::Big(core) => core.insert(Core::lift(v)).expect("bigint never overflows"),
            Mode::Small(_) => unreachable!(),
        }
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &[(u32, i64)]) -> bool {
        match &self.mode {
            Mode::Small(core) => match core.reduce(Core::lift(v)) {
                Some(r) => r.is_empty(),
                None => core.to_big().reduce(Core::lift(v)).expect("bigint").is_empty(),
            },
            Mode::Big(core) => core.reduce(Core::lift(v)).expect("bigint").is_empty(),
        }
    }

    pub fn rank(&self) -> usize {
        match &self.mode {
            Mode::Small(c) => c.rows.len(),
            Mode::Big(c) => c.rows.len(),
        }
    }

    /// Number of the given rows that are independent modulo the current row
    /// space and each other. Leaves `self` unchanged.
    pub fn quotient_rank(&self, vs: &[SparseVec]) -> usize {
        let mut e = self.clone();
        vs.iter().filter(|v| e.insert(v)).count()
    }

    pub fn is_big(&self) -> bool {
        matches!(self.mode, Mode::Big(_))
    }
}

/// Rank of a list of sparse rows.
pub fn sparse_rank(rows: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    rows.iter().filter(|r| e.insert(r)).count()
}

/// Solve `v = Σ w_j gens_j` over the rationals. Returns `(d, w)` with
/// `v = Σ (w_j / d) gens_j`, or `None` when `v` is not in the span.
pub fn solve_combination(gens: &[SparseVec], v: &[(u32, i64)]) -> Option<(BigInt, Vec<BigInt>)> {
    let m = gens.len();
    // Each tracked row is `(vector, combination)` with `vector = combination · gens`.
    type Tracked = (Vec<(u32, BigInt)>, Vec<BigInt>);
    let lift = |v: &[(u32, i64)]| -> Vec<(u32, BigInt)> {
        v.iter().map(|&(c, x)| (c, BigInt::from(x))).collect()
    };
    let combine = |a: &Tracked, ka: &BigInt, b: &Tracked, kb: &BigInt| -> Tracked {
        let mut map: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (c, x) in &a.0 {
            *map.entry(*c).or_default() += x * ka;
        }
        for (c, x) in &b.0 {
            *map.entry(*c).or_default() -= x * kb;
        }
        let vec = map.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        let combo = a
            .1
            .iter()
            .zip(&b.1)
            .map(|(x, y)| x * ka - y * kb)
            .collect();
        (vec, combo)
    };
    let mut pivots: BTreeMap<u32, Tracked> = BTreeMap::new();
    let reduce = |pivots: &BTreeMap<u32, Tracked>, mut t: Tracked| -> Tracked {
        while let Some((lead, lv)) = t.0.first().cloned() {
            let Some(p) = pivots.get(&lead) else { break };
            let pl = p.0[0].1.clone();
            let g = Integer::gcd(&pl, &lv);
            t = combine(&t, &(&pl / &g), p, &(&lv / &g));
        }
        t
    };
    for (j, g) in gens.iter().enumerate() {
        let mut combo = vec![BigInt::zero(); m];
        combo[j] = BigInt::one();
        let t = reduce(&pivots, (lift(g), combo));
        if let Some((lead, _)) = t.0.first() {
            pivots.insert(*lead, t);
        }
    }
    // Track v with a coefficient: start from (v, 0) and remember the
    // accumulated multiplier of v.
    let mut t: Tracked = (lift(v), vec![BigInt::zero(); m]);
    let mut scale = BigInt::one();
    while let Some((lead, lv)) = t.0.first().cloned() {
        let p = pivots.get(&lead)?;
        let pl = p.0[0].1.clone();
        let g = Integer::gcd(&pl, &lv);
        let ka = &pl / &g;
        scale *= &ka;
        t = combine(&t, &ka, p, &(&lv / &g));
    }
    // Now 0 = scale·v − Σ combo_j gens_j, with the sign of `combine`
    // folded into combo.
    let w: Vec<BigInt> = t.1.iter().map(|x| -x).collect();
    Some((scale, w))
}

/// Dense matrix of big integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return arg("ragged matrix rows");
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != o.rows {
            return arg("matrix dimensions do not match");
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let v = out.get(r, c) + a * o.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|r| (0..r.min(self.cols)).all(|c| self.get(r, c).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Rows as sparse vectors; fails if an entry leaves i64.
    pub fn sparse_rows(&self) -> Result<Vec<SparseVec>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter(|&c| !self.get(r, c).is_zero())
                    .map(|c| {
                        self.get(r, c)
                            .to_i64()
                            .map(|x| (c as u32, x))
                            .ok_or(crate::Error::Overflow("sparse row conversion"))
                    })
                    .collect()
            })
            .collect()
    }

    /// Fraction-free (Bareiss) elimination; returns the echelon matrix, its
    /// rank and the pivot columns.
    fn bareiss(&self) -> (IntMatrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let mut prev = BigInt::one();
        let mut rank = 0;
        let mut pivots = Vec::new();
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            if p != rank {
                for k in 0..m.cols {
                    m.data.swap(p * m.cols + k, rank * m.cols + k);
                }
            }
            let piv = m.get(rank, c).clone();
            for r in rank + 1..m.rows {
                let f = m.get(r, c).clone();
                for k in c..m.cols {
                    let v = (&piv * m.get(r, k) - &f * m.get(rank, k)) / &prev;
                    m.set(r, k, v);
                }
            }
            prev = piv;
            pivots.push(c);
            rank += 1;
        }
        (m, rank, pivots)
    }

    pub fn rank(&self) -> usize {
        self.bareiss().1
    }

    /// Determinant by Bareiss elimination with row-swap sign tracking.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return arg("determinant of a non-square matrix");
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut prev = BigInt::one();
        let mut sign = 1;
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m.get(r, k).is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                for c in 0..n {
                    m.data.swap(p * n + c, k * n + c);
                }
                sign = -sign;
            }
            let piv = m.get(k, k).clone();
            for r in k + 1..n {
                for c in k + 1..n {
                    let v = (&piv * m.get(r, c) - m.get(r, k) * m.get(k, c)) / &prev;
                    m.set(r, c, v);
                }
                m.set(r, k, BigInt::zero());
            }
            prev = piv;
        }
        Ok(m.get(n - 1, n - 1) * sign)
    }

    /// A basis of the right kernel, each vector primitive with a positive
    /// leading entry.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        // Reduced row echelon form over the rationals, kept integral by
        // scaling each row.
        let mut rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).clone()).collect())
            .collect();
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
                continue;
            };
            rows.swap(p, rank);
            for r in 0..rows.len() {
                if r != rank && !rows[r][c].is_zero() {
                    let a = rows[rank][c].clone();
                    let b = rows[r][c].clone();
                    let pivot_row = rows[rank].clone();
                    for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                        *x = &*x * &a - y * &b;
                    }
                    make_primitive(&mut rows[r]);
                }
            }
            pivots.push(c);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Vec::new();
        for &f in &free {
            // x_f = L, x_pivot = -row[f] * L / row[pivot].
            let mut l = BigInt::one();
            for (k, &pc) in pivots.iter().enumerate() {
                l = l.lcm(&rows[k][pc]);
            }
            let mut v = vec![BigInt::zero(); self.cols];
            v[f] = l.clone();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -(&rows[k][f] * &l) / &rows[k][pc];
            }
            make_primitive(&mut v);
            if let Some(first) = v.iter().find(|x| !x.is_zero()) {
                if first.is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                }
            }
            out.push(v);
        }
        out
    }

    /// Nonzero invariant factors of the Smith normal form.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).clone()).collect())
            .collect();
        dense_snf(&mut m)
    }

    /// Sparse triplets `row col value`, one per line, after a size header.
    pub fn to_triplets(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    s.push_str(&format!("{r} {c} {v}\n"));
                }
            }
        }
        s
    }
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        v.iter_mut().for_each(|x| *x = &*x / &g);
    }
}

/// In-place Smith normal form of a dense matrix; returns the nonzero
/// invariant factors in divisibility order.
fn dense_snf(m: &mut [Vec<BigInt>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: nonzero entry of least absolute value.
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if !m[r][c].is_zero()
                    && best.is_none_or(|(br, bc)| m[r][c].abs() < m[br][bc].abs())
                {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut changed = false;
            for r in t + 1..rows {
                if !m[r][t].is_zero() {
                    let q = m[r][t].div_floor(&m[t][t]);
                    for c in t..cols {
                        let v = &m[r][c] - &q * &m[t][c];
                        m[r][c] = v;
                    }
                    if !m[r][t].is_zero() {
                        m.swap(t, r);
                        changed = true;
                    }
                }
            }
            for c in t + 1..cols {
                if !m[t][c].is_zero() {
                    let q = m[t][c].div_floor(&m[t][t]);
                    for row in m.iter_mut().skip(t) {
                        let v = &row[c] - &q * &row[t];
                        row[c] = v;
                    }
                    if !m[t][c].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(t, c);
                        }
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            // Divisibility: fold in any entry not divisible by the pivot.
            let bad = (t + 1..rows)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !(&m[r][c] % &m[t][t]).is_zero());
            match bad {
                Some((r, _)) => {
                    for c in t..cols {
                        let v = &m[t][c] + &m[r][c];
                        m[t][c] = v;
                    }
                }
                None => break,
            }
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

/// Sparse integer matrix given by rows.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn new(cols: usize, entries: Vec<SparseVec>) -> Self {
        SparseMatrix {
            rows: entries.len(),
            cols,
            entries,
        }
    }

    pub fn rank(&self) -> usize {
        sparse_rank(&self.entries)
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(|r| r.len()).sum()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (r, row) in self.entries.iter().enumerate() {
            for &(c, x) in row {
                t[c as usize].push((r as u32, x));
            }
        }
        SparseMatrix::new(self.rows, t)
    }

    pub fn to_triplets(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for (r, row) in self.entries.iter().enumerate() {
            for (c, x) in row {
                s.push_str(&format!("{r} {c} {x}\n"));
            }
        }
        s
    }

    /// Rank and the invariant factors other than 1. Unit pivots are
    /// eliminated sparsely; the remainder goes through dense Smith form.
    pub fn smith(&self) -> SmithSummary {
        let mut rows: Vec<BTreeMap<u32, BigInt>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&(c, x)| (c, BigInt::from(x))).collect())
            .collect();
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.cols];
        for (r, row) in rows.iter().enumerate() {
            for c in row.keys() {
                col_rows[*c as usize].insert(r);
            }
        }
        let mut alive = vec![true; rows.len()];
        let mut units = 0usize;
        loop {
            // Cheapest unit pivot by Markowitz cost.
            let mut best: Option<(usize, u32, usize)> = None;
            for (r, row) in rows.iter().enumerate() {
                if !alive[r] {
                    continue;
                }
                for (c, x) in row {
                    if x.abs().is_one() {
                        let cost = (row.len() - 1) * (col_rows[*c as usize].len() - 1);
                        if best.is_none_or(|b| cost < b.2) {
                            best = Some((r, *c, cost));
                        }
                    }
                }
                if best.is_some_and(|b| b.2 == 0) {
                    break;
                }
            }
            let Some((pr, pc, _)) = best else { break };
            let prow = rows[pr].clone();
            let pval = prow[&pc].clone();
            let others: Vec<usize> = col_rows[pc as usize]
                .iter()
                .copied()
                .filter(|&r| r != pr)
                .collect();
            for r in others {
                let f = &rows[r][&pc] * &pval; // pval = ±1, so f / pval = f * pval
                for (c, x) in &prow {
                    let e = rows[r].entry(*c).or_insert_with(BigInt::zero);
                    *e -= &f * x;
                    if e.is_zero() {
                        rows[r].remove(c);
                        col_rows[*c as usize].remove(&r);
                    } else {
                        col_rows[*c as usize].insert(r);
                    }
                }
            }
            for c in prow.keys() {
                col_rows[*c as usize].remove(&pr);
            }
            alive[pr] = false;
            rows[pr].clear();
            units += 1;
        }
        // Dense remainder.
        let live_rows: Vec<usize> = (0..rows.len()).filter(|&r| alive[r] && !rows[r].is_empty()).collect();
        let live_cols: Vec<u32> = (0..self.cols as u32)
            .filter(|&c| !col_rows[c as usize].is_empty())
            .collect();
        let col_pos: BTreeMap<u32, usize> = live_cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut dense: Vec<Vec<BigInt>> = live_rows
            .iter()
            .map(|&r| {
                let mut v = vec![BigInt::zero(); live_cols.len()];
                for (c, x) in &rows[r] {
                    v[col_pos[c]] = x.clone();
                }
                v
            })
            .collect();
        let factors = dense_snf(&mut dense);
        let rank = units + factors.len();
        let nonunit: Vec<BigInt> = factors.into_iter().filter(|f| !f.is_one()).collect();
        SmithSummary {
            rank,
            torsion: nonunit.iter().map(|f| f.to_string()).collect(),
        }
    }
}

/// Outcome of a Smith normal form computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithSummary {
    pub rank: usize,
    /// Invariant factors greater than 1, as decimal strings.
    pub torsion: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(&[(0, 1), (1, -1)]));
        assert!(e.insert(&[(1, 1), (2, -1)]));
        assert!(!e.insert(&[(0, 2), (2, -2)]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&[(0, 3), (2, -3)]));
        assert!(!e.contains(&[(0, 1)]));
        assert_eq!(e.quotient_rank(&[vec![(0, 1)], vec![(2, 5)], vec![(1, 1)]]), 1);
    }

    #[test]
    fn echelon_promotes_on_overflow() {
        let mut e = Echelon::new();
        let big = i64::MAX / 3;
        for k in 0..6u32 {
            e.insert(&[(k, big - k as i64), (k + 1, big - 7 * k as i64 - 1)]);
        }
        assert_eq!(e.rank(), 6);
        let mut plain = Echelon::new();
        plain.insert(&[(0, 1)]);
        assert!(!plain.is_big());
    }

    #[test]
    fn solve() {
        let gens = vec![vec![(0, 2), (1, 2)], vec![(1, 1), (2, 1)]];
        let (d, w) = solve_combination(&gens, &[(0, 1), (1, 2), (2, 1)]).unwrap();
        // (1,2,1) = 1/2 (2,2,0) + 1 (0,1,1)
        assert_eq!(&w[0] * BigInt::from(2), d.clone());
        assert_eq!(w[1], d);
        assert!(solve_combination(&gens, &[(0, 1)]).is_none());
    }

    #[test]
    fn dense_ops() {
        let singular = IntMatrix::from_rows(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]).unwrap();
        assert_eq!(singular.determinant().unwrap(), BigInt::from(0));
        assert_eq!(singular.rank(), 2);
        let m = IntMatrix::from_rows(&[vec![0, 2, 1], vec![1, 3, 2], vec![1, 1, 2]]).unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::from(-2));
        assert_eq!(m.rank(), 3);
        let s = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let k = s.kernel();
        assert_eq!(k, vec![big(&[1, -1, 1])]);
        let d = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
        assert_eq!(d.invariant_factors(), big(&[2, 6, 12]));
        assert!(IntMatrix::identity(3).is_upper_triangular());
        let p = m.mul(&IntMatrix::identity(3)).unwrap();
        assert_eq!(p, m);
    }

    #[test]
    fn sparse_smith() {
        let s = SparseMatrix::new(3, vec![vec![(0, 2), (1, 4), (2, 4)], vec![(0, -6), (1, 6), (2, 12)], vec![(0, 10), (1, -4), (2, -16)]]);
        let sm = s.smith();
        assert_eq!(sm.rank, 3);
        assert_eq!(sm.torsion, vec!["2", "6", "12"]);
        let b = SparseMatrix::new(3, vec![vec![(0, -1), (1, 1)], vec![(1, -1), (2, 1)], vec![(0, -1), (2, 1)]]);
        assert_eq!(b.smith(), SmithSummary { rank: 2, torsion: vec![] });
        assert_eq!(b.rank(), 2);
    }
}
