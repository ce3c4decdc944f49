//! Dense matrices over a prime field GF(p), `p < 2^32`.

use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Subset counts up to this size are verified exhaustively.
const EXHAUSTIVE_LIMIT: u128 = 100_000;
const SPOT_CHECKS: usize = 10_000;
const SAMPLE_RETRIES: u64 = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("matrix text: {0}")]
    Parse(String),
    #[error("no {t}x{k} general-position family over GF({p}) found in {attempts} attempts")]
    GeneralPosition { t: usize, k: usize, p: u64, attempts: u64 },
}

pub fn is_prime(p: u64) -> bool {
    if !(2..1 << 32).contains(&p) {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<u64>,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        FieldMatrix { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from row vectors; entries are reduced modulo `p`.
    pub fn from_rows(rows: &[Vec<u64>], p: u64) -> Result<Self, GfError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(GfError::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| x % p).collect();
        Ok(FieldMatrix { rows: rows.len(), cols, p, data })
    }

    pub fn from_columns(cols: &[Vec<u64>], rows: usize, p: u64) -> Self {
        let mut m = Self::zeros(rows, cols.len(), p);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x % p);
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, p: u64, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| rng.gen_range(0..p)).collect();
        FieldMatrix { rows, cols, p, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<u64>> = idx.iter().map(|&c| self.column(c)).collect();
        Self::from_columns(&cols, self.rows, self.p)
    }

    /// Horizontal concatenation `[a | b | ...]`.
    pub fn hcat(parts: &[&FieldMatrix]) -> Result<Self, GfError> {
        let first = parts.first().ok_or_else(|| GfError::DimensionMismatch("nothing to concatenate".into()))?;
        let mut cols = Vec::new();
        for m in parts {
            if m.rows != first.rows {
                return Err(GfError::DimensionMismatch(format!("{} rows vs {}", m.rows, first.rows)));
            }
            if m.p != first.p {
                return Err(GfError::PrimeMismatch(m.p, first.p));
            }
            cols.extend(m.columns());
        }
        Ok(Self::from_columns(&cols, first.rows, first.p))
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<Self, GfError> {
        if self.cols != other.rows {
            return Err(GfError::DimensionMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        if self.p != other.p {
            return Err(GfError::PrimeMismatch(self.p, other.p));
        }
        let p = self.p;
        let mut out = Self::zeros(self.rows, other.cols, p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(k, j)) % p;
                }
            }
        }
        Ok(out)
    }

    /// Row echelon form in place; returns the pivot column of each nonzero row.
    fn eliminate(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(r, c), p);
            for j in c..self.cols {
                let v = self.get(r, j) * inv % p;
                self.data[r * self.cols + j] = v;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let sub = f * self.get(r, j) % p;
                    let idx = i * self.cols + j;
                    self.data[idx] = (self.data[idx] + p - sub) % p;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().len()
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.eliminate();
        (m, piv)
    }

    /// A maximal independent subset of the columns.
    pub fn column_basis(&self) -> Self {
        let (_, piv) = self.rref();
        self.select_columns(&piv)
    }

    /// Basis of the right null space, as columns.
    pub fn null_space(&self) -> Self {
        let (r, piv) = self.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![0u64; self.cols];
            v[f] = 1;
            for (row, &pc) in piv.iter().enumerate() {
                v[pc] = (p - r.get(row, f)) % p;
            }
            basis.push(v);
        }
        Self::from_columns(&basis, self.cols, p)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.p);
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, GfError> {
        let mut toks = text.split_whitespace().map(|t| t.parse::<u64>().map_err(|e| GfError::Parse(format!("{t:?}: {e}"))));
        let mut next = |what: &str| toks.next().unwrap_or_else(|| Err(GfError::Parse(format!("missing {what}"))));
        let rows = next("rows")? as usize;
        let cols = next("cols")? as usize;
        let p = next("prime")?;
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        let mut m = Self::zeros(rows, cols, p);
        for i in 0..rows * cols {
            let v = next("entry")?;
            if v >= p {
                return Err(GfError::Parse(format!("entry {v} not below {p}")));
            }
            m.data[i] = v;
        }
        Ok(m)
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

fn check_compatible(a: &FieldMatrix, b: &FieldMatrix) -> Result<(), GfError> {
    if a.rows != b.rows {
        return Err(GfError::DimensionMismatch(format!("{} rows vs {}", a.rows, b.rows)));
    }
    if a.p != b.p {
        return Err(GfError::PrimeMismatch(a.p, b.p));
    }
    Ok(())
}

/// Dimension of the span of all columns of all matrices.
pub fn union_dim(ms: &[&FieldMatrix]) -> Result<usize, GfError> {
    if ms.is_empty() {
        return Ok(0);
    }
    Ok(FieldMatrix::hcat(ms)?.rank())
}

pub fn intersect_dim(a: &FieldMatrix, b: &FieldMatrix) -> Result<usize, GfError> {
    check_compatible(a, b)?;
    Ok(a.rank() + b.rank() - union_dim(&[a, b])?)
}

/// Basis (as columns) of `span(a) ∩ span(b)`.
pub fn intersection_basis(a: &FieldMatrix, b: &FieldMatrix) -> Result<FieldMatrix, GfError> {
    check_compatible(a, b)?;
    let a = a.column_basis();
    let b = b.column_basis();
    let p = a.p;
    let mut neg_b = b.clone();
    for x in neg_b.data.iter_mut() {
        *x = (p - *x) % p;
    }
    let ns = FieldMatrix::hcat(&[&a, &neg_b])?.null_space();
    if ns.cols == 0 || a.cols == 0 {
        return Ok(FieldMatrix::zeros(a.rows, 0, p));
    }
    // (x, y) in the null space gives a·x = b·y; a has independent columns so
    // distinct null vectors give independent intersection vectors.
    let coeffs: Vec<Vec<u64>> = (0..a.cols).map(|r| (0..ns.cols).map(|c| ns.get(r, c)).collect()).collect();
    a.mul(&FieldMatrix::from_rows(&coeffs, p)?)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u128::MAX;
        }
    }
    acc
}

/// Calls `f` on every `t`-subset of `0..k` in lexicographic order until it returns false.
fn for_each_subset(k: usize, t: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(i) = (0..t).rev().find(|&i| idx[i] != i + k - t) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// True when every `min(t, k)`-subset of columns is independent, checked
/// exhaustively for small families and by random spot checks otherwise.
pub fn is_general_position<R: Rng + ?Sized>(m: &FieldMatrix, rng: &mut R) -> bool {
    let (t, k) = (m.rows, m.cols);
    if k <= t {
        return m.rank() == k;
    }
    if binomial(k, t) <= EXHAUSTIVE_LIMIT {
        let mut ok = true;
        for_each_subset(k, t, |idx| {
            ok = m.select_columns(idx).rank() == t;
            ok
        });
        ok
    } else {
        (0..SPOT_CHECKS).all(|_| {
            let idx = sample(rng, k, t).into_vec();
            m.select_columns(&idx).rank() == t
        })
    }
}

/// A `t x k` matrix whose columns are in general position, deterministic per seed.
pub fn sample_general_position(t: usize, k: usize, seed: u64, p: u64) -> Result<FieldMatrix, GfError> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if t == 0 || k == 0 {
        return Err(GfError::DimensionMismatch("general-position family needs t, k >= 1".into()));
    }
    for attempt in 0..SAMPLE_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let m = FieldMatrix::random(t, k, p, &mut rng);
        if is_general_position(&m, &mut rng) {
            return Ok(m);
        }
    }
    Err(GfError::GeneralPosition { t, k, p, attempts: SAMPLE_RETRIES })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u64 = DEFAULT_PRIME;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(P));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(1 << 32));
    }

    #[test]
    fn identity_and_zero_rank() {
        assert_eq!(FieldMatrix::identity(13, P).rank(), 13);
        assert_eq!(FieldMatrix::zeros(13, 5, P).rank(), 0);
    }

    #[test]
    fn rank_over_gf2_differs_from_rationals() {
        // rows (1,1,0), (0,1,1), (1,0,1) sum to zero mod 2
        let m = FieldMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]], 2).unwrap();
        assert_eq!(m.rank(), 2);
        let m3 = FieldMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]], 3).unwrap();
        assert_eq!(m3.rank(), 3);
    }

    #[test]
    fn general_position_13_by_43() {
        let m = sample_general_position(13, 43, 1, P).unwrap();
        assert_eq!((m.rows(), m.cols()), (13, 43));
        let idx: Vec<usize> = (30..43).collect();
        assert_eq!(m.select_columns(&idx).rank(), 13);
        assert_eq!(m, sample_general_position(13, 43, 1, P).unwrap());
    }

    #[test]
    fn general_position_scalar() {
        let m = sample_general_position(1, 1, 3, 2).unwrap();
        assert_eq!(m.get(0, 0), 1);
    }

    #[test]
    fn tiny_field_boundary() {
        // GF(2)^2 has three nonzero vectors, pairwise independent: exactly the
        // 3! orderings of them make a 2x3 general-position family.
        let mut good = 0;
        for bits in 0u32..64 {
            let rows = vec![(0..3).map(|c| ((bits >> c) & 1) as u64).collect(), (0..3).map(|c| ((bits >> (c + 3)) & 1) as u64).collect()];
            let m = FieldMatrix::from_rows(&rows, 2).unwrap();
            if is_general_position(&m, &mut ChaCha8Rng::seed_from_u64(0)) {
                good += 1;
            }
        }
        assert_eq!(good, 6);
        // four vectors cannot be pairwise independent in GF(2)^2
        assert!(matches!(sample_general_position(2, 4, 0, 2), Err(GfError::GeneralPosition { .. })));
        match sample_general_position(2, 3, 0, 2) {
            Ok(m) => assert!(is_general_position(&m, &mut ChaCha8Rng::seed_from_u64(0))),
            Err(e) => assert!(matches!(e, GfError::GeneralPosition { .. })),
        }
    }

    #[test]
    fn intersections() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = FieldMatrix::random(13, 5, P, &mut rng);
        let b = FieldMatrix::random(13, 5, P, &mut rng);
        assert_eq!(intersect_dim(&a, &b).unwrap(), 0);
        assert_eq!(intersect_dim(&a, &a).unwrap(), 5);
        let shared = FieldMatrix::random(13, 2, P, &mut rng);
        let a2 = FieldMatrix::hcat(&[&shared, &a.select_columns(&[0, 1, 2])]).unwrap();
        let b2 = FieldMatrix::hcat(&[&b.select_columns(&[0, 1, 2]), &shared]).unwrap();
        assert_eq!(intersect_dim(&a2, &b2).unwrap(), 2);
        let basis = intersection_basis(&a2, &b2).unwrap();
        assert_eq!(basis.cols(), 2);
        assert_eq!(union_dim(&[&basis, &shared]).unwrap(), 2);
        assert_eq!(intersection_basis(&a, &b).unwrap().cols(), 0);
    }

    #[test]
    fn mismatches_are_errors() {
        let a = FieldMatrix::zeros(3, 1, P);
        let b = FieldMatrix::zeros(4, 1, P);
        assert!(matches!(intersect_dim(&a, &b), Err(GfError::DimensionMismatch(_))));
        let c = FieldMatrix::zeros(3, 1, 7);
        assert_eq!(intersect_dim(&a, &c), Err(GfError::PrimeMismatch(P, 7)));
    }

    #[test]
    fn null_space_annihilates() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = FieldMatrix::random(3, 6, 101, &mut rng);
        let ns = m.null_space();
        assert_eq!(ns.cols(), 3);
        assert_eq!(m.mul(&ns).unwrap().rank(), 0);
    }

    #[test]
    fn text_round_trip() {
        let m = FieldMatrix::from_rows(&[vec![1, 2], vec![3, 4], vec![5, 6]], 7).unwrap();
        assert_eq!(FieldMatrix::from_text(&m.to_text()).unwrap(), m);
        assert!(FieldMatrix::from_text("1 1 4 0").is_err());
        assert!(FieldMatrix::from_text("1 2 7 3").is_err());
    }

    fn matrix() -> impl Strategy<Value = FieldMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(0u64..5, r * c).prop_map(move |d| {
                let rows: Vec<Vec<u64>> = d.chunks(c).map(|x| x.to_vec()).collect();
                FieldMatrix::from_rows(&rows, 5).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_invariant_under_permutation_and_scaling(m in matrix(), s in 1u64..5, rot in 0usize..6) {
            let n = m.cols();
            let perm: Vec<usize> = (0..n).map(|j| (j + rot) % n).collect();
            let mut scaled = m.select_columns(&perm);
            for r in 0..scaled.rows() {
                for c in 0..scaled.cols() {
                    let v = scaled.get(r, c) * s;
                    scaled.set(r, c, v);
                }
            }
            prop_assert_eq!(scaled.rank(), m.rank());
        }

        #[test]
        fn intersect_symmetric(a in matrix(), seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = FieldMatrix::random(a.rows(), 3, 5, &mut rng);
            let ab = intersect_dim(&a, &b).unwrap();
            prop_assert_eq!(ab, intersect_dim(&b, &a).unwrap());
            prop_assert!(union_dim(&[&a, &b]).unwrap() <= a.rows());
            prop_assert_eq!(intersection_basis(&a, &b).unwrap().rank(), ab);
        }
    }
}
