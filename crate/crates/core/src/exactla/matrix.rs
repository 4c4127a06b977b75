use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::exactla::field::Field;

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Hash for Matrix<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| self.field.format(x)).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of a full reduction: the reduced row echelon form and its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref<F: Field> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct RankKernelImage<F: Field> {
    pub rank: usize,
    /// Columns form a basis of the null space.
    pub kernel: Matrix<F>,
    /// Columns form a basis of the column space.
    pub image: Matrix<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_vec(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Build from integer rows; all rows must have the same length.
    pub fn from_i64(field: &F, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged integer matrix");
        Self::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    /// An explicit `rows x cols` integer matrix, useful when either side is zero.
    pub fn from_i64_shaped(field: &F, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self::from_fn(field, rows, cols, |i, j| field.from_i64(entries[i * cols + j]))
    }

    pub fn column_vector(field: &F, entries: &[i64]) -> Self {
        Self::from_i64_shaped(field, entries.len(), 1, entries)
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn entries(&self) -> &[F::Elem] {
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

    pub fn column(&self, j: usize) -> Matrix<F> {
        Matrix::from_fn(&self.field, self.rows, 1, |i, _| self.get(i, j).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        self.field.is_one(x)
                    } else {
                        self.field.is_zero(x)
                    }
                })
            })
    }

    /// Matrix product. Panics on an inner-dimension mismatch.
    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(
            self.cols, other.rows,
            "matrix product {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn try_mul(&self, other: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cols != other.rows {
            return Err(Error::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(other))
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { data, ..self.clone_shape() }
    }

    pub fn sub(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { data, ..self.clone_shape() }
    }

    pub fn scale(&self, c: &F::Elem) -> Matrix<F> {
        let f = &self.field;
        let data = self.data.iter().map(|a| f.mul(a, c)).collect();
        Matrix { data, ..self.clone_shape() }
    }

    fn clone_shape(&self) -> Matrix<F> {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: Vec::new(),
        }
    }

    pub fn transpose(&self) -> Matrix<F> {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Horizontal concatenation; all parts must share the row count `rows`.
    pub fn hstack(field: &F, rows: usize, parts: &[&Matrix<F>]) -> Matrix<F> {
        assert!(parts.iter().all(|p| p.rows == rows), "hstack row mismatch");
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut c0 = 0;
        for p in parts {
            out.set_block(0, c0, p);
            c0 += p.cols;
        }
        out
    }

    /// Vertical concatenation; all parts must share the column count `cols`.
    pub fn vstack(field: &F, cols: usize, parts: &[&Matrix<F>]) -> Matrix<F> {
        assert!(parts.iter().all(|p| p.cols == cols), "vstack column mismatch");
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut r0 = 0;
        for p in parts {
            out.set_block(r0, 0, p);
            r0 += p.rows;
        }
        out
    }

    pub fn block_diagonal(field: &F, parts: &[&Matrix<F>]) -> Matrix<F> {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            out.set_block(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix<F>) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix<F> {
        Matrix::from_fn(&self.field, r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix<F> {
        Matrix::from_fn(&self.field, self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix<F> {
        Matrix::from_fn(&self.field, rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    pub fn map_field<G: Field>(&self, target: &G, f: impl Fn(&F::Elem) -> Option<G::Elem>) -> Option<Matrix<G>> {
        let data = self.data.iter().map(f).collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            field: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss-Jordan reduction to reduced row echelon form.
    pub fn rref(&self) -> Rref<F> {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Null space basis as columns (`cols x nullity`).
    pub fn kernel(&self) -> Matrix<F> {
        let Rref { reduced, pivots } = self.rref();
        kernel_from_rref(&self.field, &reduced, &pivots, self.cols)
    }

    /// Column space basis as columns, taken from the pivot columns of `self`.
    pub fn image(&self) -> Matrix<F> {
        let Rref { pivots, .. } = self.rref();
        self.select_columns(&pivots)
    }

    pub fn rank_kernel_image(&self) -> RankKernelImage<F> {
        let Rref { reduced, pivots } = self.rref();
        RankKernelImage {
            rank: pivots.len(),
            kernel: kernel_from_rref(&self.field, &reduced, &pivots, self.cols),
            image: self.select_columns(&pivots),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<F::Elem> {
        if !self.is_square() {
            return Err(Error::shape(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let f = &self.field;
        let n = self.rows;
        if n == 0 {
            return Ok(f.one());
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = f.one();
        for k in 0..n - 1 {
            if f.is_zero(m.get(k, k)) {
                match (k + 1..n).find(|&i| !f.is_zero(m.get(i, k))) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        negate = !negate;
                    }
                    None => return Ok(f.zero()),
                }
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = f.sub(&f.mul(m.get(i, j), &pivot), &f.mul(m.get(i, k), m.get(k, j)));
                    let v = f.div(&num, &prev).expect("Bareiss divisor is a nonzero leading minor");
                    m.set(i, j, v);
                }
                m.set(i, k, f.zero());
            }
            prev = pivot;
        }
        let d = m.get(n - 1, n - 1).clone();
        Ok(if negate { f.neg(&d) } else { d })
    }

    /// One exact solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &Matrix<F>) -> Option<Matrix<F>> {
        assert_eq!(self.rows, b.rows, "solve: row count mismatch");
        let f = &self.field;
        let aug = Matrix::hstack(f, self.rows, &[self, b]);
        let Rref { reduced, pivots } = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(f, self.cols, b.cols);
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(c, j, reduced.get(r, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if !self.is_square() {
            return None;
        }
        let id = Matrix::identity(&self.field, self.rows);
        let x = self.solve(&id)?;
        if self.rank() == self.rows {
            Some(x)
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Whether every column of `v` lies in the column span of `self`.
    pub fn column_span_contains(&self, v: &Matrix<F>) -> bool {
        if v.cols == 0 {
            return true;
        }
        self.solve(v).is_some()
    }
}

fn kernel_from_rref<F: Field>(field: &F, reduced: &Matrix<F>, pivots: &[usize], cols: usize) -> Matrix<F> {
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut k = Matrix::zeros(field, cols, free.len());
    for (t, &fc) in free.iter().enumerate() {
        k.set(fc, t, field.one());
        for (r, &pc) in pivots.iter().enumerate() {
            let v = field.neg(reduced.get(r, fc));
            k.set(pc, t, v);
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::field::{PrimeField, Rationals};

    #[test]
    fn empty_matrix_conventions() {
        let q = Rationals;
        let m = Matrix::zeros(&q, 0, 0);
        let rki = m.rank_kernel_image();
        assert_eq!(rki.rank, 0);
        assert_eq!(rki.kernel.shape(), (0, 0));
        assert_eq!(rki.image.shape(), (0, 0));
        assert_eq!(m.det().unwrap(), q.one());
        // 0 x 3: everything is kernel
        let w = Matrix::zeros(&q, 0, 3);
        assert_eq!(w.kernel().shape(), (3, 3));
    }

    #[test]
    fn identity_rank_and_det() {
        let q = Rationals;
        let id = Matrix::identity(&q, 3);
        let rki = id.rank_kernel_image();
        assert_eq!(rki.rank, 3);
        assert_eq!(rki.kernel.cols(), 0);
        assert_eq!(id.det().unwrap(), q.one());
    }

    #[test]
    fn rank_one_kernel() {
        let q = Rationals;
        let m = Matrix::from_i64(&q, &[vec![1, 2], vec![2, 4]]);
        let rki = m.rank_kernel_image();
        assert_eq!(rki.rank, 1);
        assert_eq!(rki.kernel, Matrix::column_vector(&q, &[-2, 1]));
        assert!(m.mul(&rki.kernel).is_zero());
    }

    #[test]
    fn swap_determinant() {
        let q = Rationals;
        let m = Matrix::from_i64(&q, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.det().unwrap(), q.from_i64(-1));
        let f = PrimeField::new(11).unwrap();
        let m = Matrix::from_i64(&f, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.det().unwrap(), 10);
    }

    #[test]
    fn det_rejects_non_square() {
        let q = Rationals;
        let m = Matrix::zeros(&q, 2, 3);
        assert_eq!(m.det().unwrap_err().id(), "shape");
    }

    #[test]
    fn solve_cases() {
        let q = Rationals;
        let id = Matrix::identity(&q, 2);
        let b = Matrix::from_i64(&q, &[vec![3, 1], vec![-4, 7]]);
        assert_eq!(id.solve(&b).unwrap(), b);

        let m = Matrix::from_i64(&q, &[vec![1, 1]]);
        let b = Matrix::from_i64(&q, &[vec![2]]);
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul(&x), b);

        let z = Matrix::from_i64(&q, &[vec![0]]);
        assert!(z.solve(&Matrix::from_i64(&q, &[vec![1]])).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_i64(&f, &[vec![1, 2], vec![3, 4]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let s = Matrix::from_i64(&f, &[vec![1, 2], vec![2, 4]]);
        assert!(s.inverse().is_none());
    }
}
