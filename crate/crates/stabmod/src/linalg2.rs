//! Dense linear algebra over the two-element field.
//!
//! Matrices are stored row-major with 64 columns packed per machine word, so
//! row operations are word-wide XORs. Everything downstream (module actions,
//! hom-space solving, homology) reduces to the handful of primitives here:
//! `rank`, `rref`, `kernel`, `image`, `solve`, and quotient bases.
//!
//! Matrices are immutable after construction; elimination always works on a
//! private copy. A `Subspace` keeps its basis in reduced row echelon form with
//! strictly increasing pivot columns, so structural equality of subspaces is
//! literal equality of their representations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum Linalg2Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not contained in the ambient one")]
    NotContained,
}

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A packed vector over F2 with a fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitVec {
    len: usize,
    data: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, data: vec![0; words_for(len)] }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Single basis vector e_i in an ambient of dimension `len`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = BitVec::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.data[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.data[i / WORD] |= mask;
        } else {
            self.data[i / WORD] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of vectors of different lengths");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
    }

    /// Parity of the overlap with `other`; the F2 inner product.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors of different lengths");
        let mut acc = 0u64;
        for (a, b) in self.data.iter().zip(&other.data) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Index of the lowest set bit, if any.
    pub fn leading(&self) -> Option<usize> {
        for (w, &word) in self.data.iter().enumerate() {
            if word != 0 {
                return Some(w * WORD + word.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Concatenation, used when stacking block systems.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> BitVec {
        assert!(range.end <= self.len);
        let mut out = BitVec::zeros(range.len());
        for (j, i) in range.enumerate() {
            if self.get(i) {
                out.set(j, true);
            }
        }
        out
    }

    /// Tensor of vectors under the `(i, j) -> i * b.len() + j` convention.
    pub fn kronecker(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len * other.len);
        for i in self.iter_ones() {
            for j in other.iter_ones() {
                out.set(i * other.len + j, true);
            }
        }
        out
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// A packed matrix over F2. Rows are contiguous runs of words.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = words_for(cols);
        BitMatrix { rows, cols, wpr, data: vec![0; rows * wpr] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = BitMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn from_rows(rows: &[BitVec], cols: usize) -> Self {
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            m.row_words_mut(i).copy_from_slice(&r.data);
        }
        m
    }

    /// Uniformly random entries, filled row-major; the canonical generator for
    /// reproducible test corpora.
    pub fn random(rows: usize, cols: usize, rng: &mut impl rand::Rng) -> Self {
        BitMatrix::from_fn(rows, cols, |_, _| rng.random::<bool>())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.wpr + c / WORD] >> (c % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let mask = 1u64 << (c % WORD);
        let w = &mut self.data[r * self.wpr + c / WORD];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec { len: self.cols, data: self.row_words(r).to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * self.wpr);
            (&lo[src * self.wpr..(src + 1) * self.wpr], &mut hi[..self.wpr])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * self.wpr);
            let dst_slice = &mut lo[dst * self.wpr..(dst + 1) * self.wpr];
            (&hi[..self.wpr] as &[u64], dst_slice)
        };
        for (d, s) in b.iter_mut().zip(a) {
            *d ^= s;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.wpr {
            self.data.swap(a * self.wpr + w, b * self.wpr + w);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            let words = self.row_words(r);
            for (w, &word) in words.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let c = w * WORD + bits.trailing_zeros() as usize;
                    t.set(c, r, true);
                    bits &= bits - 1;
                }
            }
        }
        t
    }

    /// Matrix product; `self` is (m x k), `other` (k x n).
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            // acc ^= rows of `other` selected by the bits of our row i
            let mut acc = vec![0u64; other.wpr];
            let words = self.row_words(i);
            for (w, &word) in words.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let j = w * WORD + bits.trailing_zeros() as usize;
                    for (a, b) in acc.iter_mut().zip(other.row_words(j)) {
                        *a ^= b;
                    }
                    bits &= bits - 1;
                }
            }
            out.row_words_mut(i).copy_from_slice(&acc);
        }
        out
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        out
    }

    /// Column-vector action: `v` has one entry per column.
    pub fn apply(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len(), "matrix apply dimension mismatch");
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.row_words(r).iter().zip(&v.data) {
                acc ^= a & b;
            }
            if acc.count_ones() % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// Side-by-side concatenation `[self | other]`.
    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        BitMatrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                other.get(r, c - self.cols)
            }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut m = BitMatrix::zeros(self.rows + other.rows, self.cols);
        m.data[..self.data.len()].copy_from_slice(&self.data);
        m.data[self.data.len()..].copy_from_slice(&other.data);
        m
    }

    pub fn submatrix_cols(&self, range: std::ops::Range<usize>) -> BitMatrix {
        assert!(range.end <= self.cols);
        BitMatrix::from_fn(self.rows, range.len(), |r, c| self.get(r, range.start + c))
    }

    /// Reduced row echelon form of a copy, with the pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in 0..m.rows {
                if i != r && m.get(i, c) {
                    m.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{v : Mv = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivot_set.contains(&f) {
                continue;
            }
            let mut v = BitVec::zeros(self.cols);
            v.set(f, true);
            for (row, &p) in pivots.iter().enumerate() {
                if r.get(row, f) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        Subspace::from_vectors(self.cols, &basis)
    }

    /// Column space, i.e. the span of `Mv` over all `v`.
    pub fn image(&self) -> Subspace {
        let cols: Vec<BitVec> = (0..self.cols).map(|j| self.transpose().row(j)).collect();
        Subspace::from_vectors(self.rows, &cols)
    }

    /// One solution of `Mx = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>, Linalg2Error> {
        if b.len() != self.rows {
            return Err(Linalg2Error::DimensionMismatch(format!(
                "solve: rhs has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let rhs = BitMatrix::from_fn(self.rows, 1, |r, _| b.get(r));
        Ok(self.solve_matrix(&rhs)?.map(|x| x.transpose().row(0)))
    }

    /// Simultaneous solve `MX = B`, column by column.
    pub fn solve_matrix(&self, b: &BitMatrix) -> Result<Option<BitMatrix>, Linalg2Error> {
        if b.rows() != self.rows {
            return Err(Linalg2Error::DimensionMismatch(format!(
                "solve_matrix: rhs has {} rows, matrix has {}",
                b.rows(),
                self.rows
            )));
        }
        let (r, pivots) = self.hstack(b).rref();
        // any pivot beyond the original columns marks an inconsistent column
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = BitMatrix::zeros(self.cols, b.cols());
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols() {
                if r.get(row, self.cols + j) {
                    x.set(p, j, true);
                }
            }
        }
        Ok(Some(x))
    }

    /// Kronecker product; block (i,j) of the result is `self[i][j] * other`.
    ///
    /// Compatible with the tensor basis convention `(i, j) -> i * dim_b + j`
    /// used for tensor products of graded pieces throughout the crate.
    pub fn kronecker(&self, other: &BitMatrix) -> BitMatrix {
        BitMatrix::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            self.get(r / other.rows, c / other.cols) && other.get(r % other.rows, c % other.cols)
        })
    }

    /// XOR `other` into `self` with its top-left corner at `(r0, c0)`.
    pub fn xor_block(&mut self, r0: usize, c0: usize, other: &BitMatrix) {
        assert!(r0 + other.rows <= self.rows && c0 + other.cols <= self.cols, "block out of range");
        for r in 0..other.rows {
            for c in other.row(r).iter_ones() {
                let cur = self.get(r0 + r, c0 + c);
                self.set(r0 + r, c0 + c, !cur);
            }
        }
    }

    /// True when `self` is invertible (square and full rank).
    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<BitMatrix> {
        if self.rows != self.cols {
            return None;
        }
        self.solve_matrix(&BitMatrix::identity(self.rows)).expect("shape checked")
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// A subspace of F2^n held as an RREF basis with strictly increasing pivots.
///
/// The canonical form makes equality of values coincide with equality of
/// subspaces, which the rest of the crate leans on when comparing kernels,
/// images, and homology representatives.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    basis: BitMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: BitMatrix::zeros(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: BitMatrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_vectors(ambient: usize, vectors: &[BitVec]) -> Self {
        for v in vectors {
            assert_eq!(v.len(), ambient, "spanning vector has wrong length");
        }
        let m = BitMatrix::from_rows(vectors, ambient);
        Subspace::from_matrix_rows(&m)
    }

    /// Span of the rows of `m`.
    pub fn from_matrix_rows(m: &BitMatrix) -> Self {
        let (r, pivots) = m.rref();
        let rank = pivots.len();
        let mut basis = BitMatrix::zeros(rank, m.cols());
        for i in 0..rank {
            basis.row_words_mut(i).copy_from_slice(r.row_words(i));
        }
        Subspace { ambient: m.cols(), basis, pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> Vec<BitVec> {
        (0..self.dim()).map(|i| self.basis.row(i)).collect()
    }

    pub fn basis_matrix(&self) -> &BitMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical coset representative of `v` modulo this subspace.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.ambient, "reduce: ambient mismatch");
        let mut v = v.clone();
        for (i, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                v.xor_assign(&self.basis.row(i));
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis().iter().all(|v| self.contains(v))
    }

    /// Coefficients of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coords_of(&self, v: &BitVec) -> Option<BitVec> {
        assert_eq!(v.len(), self.ambient, "coords_of: ambient mismatch");
        let mut v = v.clone();
        let mut coords = BitVec::zeros(self.dim());
        for (i, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                v.xor_assign(&self.basis.row(i));
                coords.set(i, true);
            }
        }
        if v.is_zero() {
            Some(coords)
        } else {
            None
        }
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "sum: ambient mismatch");
        Subspace::from_matrix_rows(&self.basis.vstack(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "intersect: ambient mismatch");
        // Coefficient pairs (a, b) with a·U = b·V span the intersection.
        let stacked = self.basis.transpose().hstack(&other.basis.transpose());
        let ker = stacked.kernel();
        let vectors: Vec<BitVec> = ker
            .basis()
            .iter()
            .map(|coeffs| {
                let mut v = BitVec::zeros(self.ambient);
                for i in 0..self.dim() {
                    if coeffs.get(i) {
                        v.xor_assign(&self.basis.row(i));
                    }
                }
                v
            })
            .collect();
        Subspace::from_vectors(self.ambient, &vectors)
    }

    /// Coset representatives completing `sub` to this subspace.
    ///
    /// Errors when `sub` is not contained in `self`.
    pub fn quotient_basis(&self, sub: &Subspace) -> Result<Vec<BitVec>, Linalg2Error> {
        if sub.ambient() != self.ambient {
            return Err(Linalg2Error::DimensionMismatch(format!(
                "quotient_basis: ambients {} vs {}",
                sub.ambient(),
                self.ambient
            )));
        }
        if !self.contains_subspace(sub) {
            return Err(Linalg2Error::NotContained);
        }
        let mut reps = Vec::new();
        let mut span = sub.clone();
        for v in self.basis() {
            if !span.contains(&v) {
                span = span.sum(&Subspace::from_vectors(self.ambient, std::slice::from_ref(&v)));
                reps.push(v);
            }
        }
        debug_assert_eq!(reps.len(), self.dim() - sub.dim());
        Ok(reps)
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} of {})", self.dim(), self.ambient)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Unpacked elimination over Vec<Vec<u8>>; the reference the packed code
    /// is measured against. Kept deliberately naive.
    fn naive_rank(m: &BitMatrix) -> usize {
        let mut a: Vec<Vec<u8>> = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c) as u8).collect())
            .collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            let Some(p) = (rank..m.rows()).find(|&r| a[r][c] == 1) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..m.rows() {
                if r != rank && a[r][c] == 1 {
                    for j in 0..m.cols() {
                        a[r][j] ^= a[rank][j];
                    }
                }
            }
            rank += 1;
            if rank == m.rows() {
                break;
            }
        }
        rank
    }

    fn naive_solve(m: &BitMatrix, b: &BitVec) -> Option<Vec<u8>> {
        let mut a: Vec<Vec<u8>> = (0..m.rows())
            .map(|r| {
                let mut row: Vec<u8> = (0..m.cols()).map(|c| m.get(r, c) as u8).collect();
                row.push(b.get(r) as u8);
                row
            })
            .collect();
        let n = m.cols();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..n {
            let Some(p) = (rank..m.rows()).find(|&r| a[r][c] == 1) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..m.rows() {
                if r != rank && a[r][c] == 1 {
                    for j in 0..=n {
                        a[r][j] ^= a[rank][j];
                    }
                }
            }
            pivots.push(c);
            rank += 1;
        }
        if a.iter().skip(rank).any(|row| row[n] == 1) {
            return None;
        }
        let mut x = vec![0u8; n];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = a[r][n];
        }
        Some(x)
    }

    #[test]
    fn rank_of_identity() {
        assert_eq!(BitMatrix::identity(64).rank(), 64);
        assert_eq!(BitMatrix::identity(65).rank(), 65);
        assert_eq!(BitMatrix::zeros(5, 9).rank(), 0);
    }

    #[test]
    fn rank_of_seeded_random_matrix_is_frozen() {
        // Expected value computed once with `naive_rank` and pinned.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let m = BitMatrix::random(20, 20, &mut rng);
        assert_eq!(naive_rank(&m), 18);
        assert_eq!(m.rank(), 18);
    }

    #[test]
    fn kernel_dimension_matches_rank_nullity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.random_range(0..12);
            let cols = rng.random_range(0..12);
            let m = BitMatrix::random(rows, cols, &mut rng);
            let k = m.kernel();
            assert_eq!(m.rank() + k.dim(), cols);
            for v in k.basis() {
                assert!(m.apply(&v).is_zero());
            }
        }
    }

    #[test]
    fn kernel_basis_is_rref_with_increasing_pivots() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = BitMatrix::random(17, 23, &mut rng);
        let k = m.kernel();
        let pivots = k.pivots();
        for w in pivots.windows(2) {
            assert!(w[0] < w[1]);
        }
        // each pivot column is zero in every other basis row
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..k.dim() {
                assert_eq!(k.basis_matrix().get(j, p), i == j);
            }
        }
    }

    #[test]
    fn solve_agrees_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let rows = rng.random_range(1..10);
            let cols = rng.random_range(1..10);
            let m = BitMatrix::random(rows, cols, &mut rng);
            let b = {
                let mut v = BitVec::zeros(rows);
                for i in 0..rows {
                    v.set(i, rng.random());
                }
                v
            };
            let ours = m.solve(&b).unwrap();
            let naive = naive_solve(&m, &b);
            assert_eq!(ours.is_some(), naive.is_some());
            if let Some(x) = ours {
                assert_eq!(m.apply(&x), b);
            }
        }
    }

    #[test]
    fn solve_rejects_wrong_rhs_length() {
        let m = BitMatrix::zeros(3, 2);
        let b = BitVec::zeros(5);
        assert!(matches!(m.solve(&b), Err(Linalg2Error::DimensionMismatch(_))));
    }

    #[test]
    fn rank_matches_oracle_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let rows = rng.random_range(0..24);
            let cols = rng.random_range(0..24);
            let m = BitMatrix::random(rows, cols, &mut rng);
            assert_eq!(m.rank(), naive_rank(&m));
        }
    }

    #[test]
    fn image_is_column_span() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = BitMatrix::random(9, 6, &mut rng);
        let im = m.image();
        assert_eq!(im.dim(), m.rank());
        for j in 0..6 {
            let v = m.apply(&BitVec::unit(6, j));
            assert!(im.contains(&v));
        }
    }

    #[test]
    fn quotient_basis_completes_the_subspace() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let total = Subspace::from_matrix_rows(&BitMatrix::random(8, 10, &mut rng));
        let sub_vecs: Vec<BitVec> = total.basis().into_iter().take(3).collect();
        let sub = Subspace::from_vectors(10, &sub_vecs);
        let reps = total.quotient_basis(&sub).unwrap();
        assert_eq!(reps.len(), total.dim() - sub.dim());
        let mut span = sub;
        for r in &reps {
            assert!(!span.contains(r));
            span = span.sum(&Subspace::from_vectors(10, std::slice::from_ref(r)));
        }
        assert_eq!(span, total);
    }

    #[test]
    fn quotient_basis_rejects_non_subspace() {
        let total = Subspace::from_vectors(4, &[BitVec::unit(4, 0)]);
        let not_sub = Subspace::from_vectors(4, &[BitVec::unit(4, 1)]);
        assert_eq!(total.quotient_basis(&not_sub), Err(Linalg2Error::NotContained));
    }

    #[test]
    fn intersect_and_sum_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let u = Subspace::from_matrix_rows(&BitMatrix::random(5, 9, &mut rng));
            let v = Subspace::from_matrix_rows(&BitMatrix::random(5, 9, &mut rng));
            let s = u.sum(&v);
            let i = u.intersect(&v);
            assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
            for b in i.basis() {
                assert!(u.contains(&b) && v.contains(&b));
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        loop {
            let m = BitMatrix::random(8, 8, &mut rng);
            if m.is_invertible() {
                let inv = m.inverse().unwrap();
                assert_eq!(m.mul(&inv), BitMatrix::identity(8));
                assert_eq!(inv.mul(&m), BitMatrix::identity(8));
                break;
            }
        }
    }

    #[test]
    fn empty_shapes_are_total() {
        let m = BitMatrix::zeros(0, 5);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel().dim(), 5);
        let n = BitMatrix::zeros(5, 0);
        assert_eq!(n.rank(), 0);
        assert_eq!(n.kernel().dim(), 0);
        let p = m.mul(&BitMatrix::zeros(5, 3));
        assert_eq!((p.rows(), p.cols()), (0, 3));
    }
}
