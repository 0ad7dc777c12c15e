//! Dense matrices over an exact field with Gaussian elimination.

use crate::error::{Error, Result};
use crate::field::{Field, FieldKind, PrimeField};

const MODULAR_PRIME: u64 = 2_147_483_629;
const MODULAR_MIN_DIM: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_vec(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::from_vec(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(field: &F, rows: &[Vec<i64>]) -> Self {
        let data = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Self::from_rows(field, data).expect("ragged integer rows")
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn data(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "product shape mismatch");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                let na = f.neg(a);
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    if !f.is_zero(b) {
                        f.sub_mul_assign(d, &na, b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        let data = self.data.iter().map(|a| f.mul(a, c)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &F::Elem, other: &Self) {
        assert_eq!(self.shape(), other.shape());
        let f = self.field.clone();
        if f.is_zero(c) {
            return;
        }
        let nc = f.neg(c);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            f.sub_mul_assign(a, &nc, b);
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Matrix { field: self.field.clone(), rows: self.rows, cols, data }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block diagonal sum.
    pub fn block_diag(&self, other: &Self) -> Self {
        let mut m = Self::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, self.cols, other);
        m
    }

    pub fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(&self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m.data[i * idx.len() + k] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix { field: self.field.clone(), rows: idx.len(), cols: self.cols, data }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(&self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = self.get(r0 + i, c0 + j).clone();
            }
        }
        m
    }

    /// In-place Gaussian elimination; returns the pivot columns.
    /// With `reduced` the result is the RREF, otherwise a row echelon form.
    fn eliminate(&mut self, reduced: bool) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let mut best: Option<(usize, u64)> = None;
            for i in r..rows {
                let v = &self.data[i * cols + c];
                if f.is_zero(v) {
                    continue;
                }
                let h = f.height(v);
                if best.map_or(true, |(_, bh)| h < bh) {
                    best = Some((i, h));
                    if h <= 2 {
                        break;
                    }
                }
            }
            let Some((p, _)) = best else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(&self.data[r * cols + c]).expect("nonzero pivot");
            for j in c..cols {
                let v = &mut self.data[r * cols + j];
                if !f.is_zero(v) {
                    *v = f.mul(v, &inv);
                }
            }
            let (start, end) = if reduced { (0, rows) } else { (r + 1, rows) };
            let pivot_row: Vec<(usize, F::Elem)> = (c..cols)
                .filter_map(|j| {
                    let v = &self.data[r * cols + j];
                    (!f.is_zero(v)).then(|| (j, v.clone()))
                })
                .collect();
            for i in start..end {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c].clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for (j, v) in &pivot_row {
                    f.sub_mul_assign(&mut self.data[i * cols + j], &factor, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if let Some(r) = self.modular_rank() {
            if r == self.rows.min(self.cols) {
                return r;
            }
        }
        self.exact_rank()
    }

    fn exact_rank(&self) -> usize {
        let mut m = if self.rows > self.cols { self.transpose() } else { self.clone() };
        m.eliminate(false).len()
    }

    /// Rank of the image in `F_p` for a fixed word-size prime, a lower bound
    /// for the rank over a field of characteristic zero. `None` over prime
    /// fields, for small matrices, or when a denominator vanishes mod `p`.
    fn modular_rank(&self) -> Option<usize> {
        if self.field.spec().kind != FieldKind::Rationals || self.rows.min(self.cols) < MODULAR_MIN_DIM {
            return None;
        }
        let fp = PrimeField::new(MODULAR_PRIME).expect("prime");
        let m = self.map_field(&fp, |v| self.field.residue(v, MODULAR_PRIME))?;
        Some(m.exact_rank())
    }

    /// `rank >= k`, decided by the modular lower bound when it suffices.
    pub fn rank_at_least(&self, k: usize) -> bool {
        if self.modular_rank().is_some_and(|r| r >= k) {
            return true;
        }
        self.exact_rank() >= k
    }

    /// Indices of the first maximal set of linearly independent columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.clone().eliminate(false)
    }

    /// Columns form a basis of the right kernel.
    pub fn kernel_basis(&self) -> Self {
        let f = &self.field;
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| is_pivot[c].is_none()).collect();
        let mut k = Self::zeros(f, self.cols, free.len());
        for (t, &fc) in free.iter().enumerate() {
            k.data[fc * free.len() + t] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                let v = matrix.get(r, fc);
                if !f.is_zero(v) {
                    k.data[pc * free.len() + t] = f.neg(v);
                }
            }
        }
        k
    }

    /// Basis of the column space, taken from the original columns.
    pub fn column_space(&self) -> Self {
        self.select_columns(&self.pivot_columns())
    }

    /// For a matrix of full column rank, a left inverse `L` with `L * self = I`.
    pub fn left_inverse(&self) -> Result<Self> {
        let n = self.rows;
        let r = self.cols;
        let aug = self.hstack(&Self::identity(&self.field, n));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < r || pivots[..r].iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::Shape("left inverse of a rank-deficient matrix".into()));
        }
        Ok(matrix.block(0, r, r, n))
    }

    /// Inverse of a square invertible matrix.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        self.left_inverse().ok()
    }

    /// Solves `self * x = b` for one particular solution.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = &self.field;
        let col = Self::from_columns(f, self.rows, &[b.to_vec()]);
        let Rref { matrix, pivots } = self.hstack(&col).rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = matrix.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn map_field<G: Field>(&self, target: &G, conv: impl Fn(&F::Elem) -> Option<G::Elem>) -> Option<Matrix<G>> {
        let data = self.data.iter().map(conv).collect::<Option<Vec<_>>>()?;
        Some(Matrix { field: target.clone(), rows: self.rows, cols: self.cols, data })
    }
}

/// Indices of the columns of `candidates` that extend a basis of the span of
/// `existing` (greedy, in order).
pub fn extend_basis<F: Field>(existing: &Matrix<F>, candidates: &Matrix<F>) -> Vec<usize> {
    let s = existing.cols();
    existing
        .hstack(candidates)
        .pivot_columns()
        .into_iter()
        .filter(|&c| c >= s)
        .map(|c| c - s)
        .collect()
}

/// Coordinates of a subquotient `K / I` of an ambient space: `basis` holds
/// representatives in the ambient space and `coords` maps any vector of `K`
/// to its coordinates modulo `I`.
#[derive(Clone, Debug)]
pub struct Subquotient<F: Field> {
    pub basis: Matrix<F>,
    pub coords: Matrix<F>,
}

impl<F: Field> Subquotient<F> {
    /// `sub` spans `I`, `whole` spans `K`; `I ⊆ K` is assumed.
    pub fn new(sub: &Matrix<F>, whole: &Matrix<F>) -> Self {
        let f = sub.field().clone();
        let ambient = sub.rows();
        let i_basis = sub.column_space();
        let extra = extend_basis(&i_basis, whole);
        let basis = whole.select_columns(&extra);
        let full = i_basis.hstack(&basis);
        let k = basis.cols();
        let coords = if k == 0 {
            Matrix::zeros(&f, 0, ambient)
        } else {
            let l = full.left_inverse().expect("independent columns");
            l.block(i_basis.cols(), 0, k, ambient)
        };
        Subquotient { basis, coords }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}
