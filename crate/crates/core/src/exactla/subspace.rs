//! Subspaces of `K^n` given by spanning columns, quotients by them, and
//! exhaustive enumeration of all subspaces over a finite field.

use crate::exactla::field::{Field, FiniteField};
use crate::exactla::matrix::Matrix;

/// Canonical basis of the column span: the transpose of the nonzero rows
/// of the reduced row echelon form of `m^T`. Equal spans give equal matrices.
pub fn canonical_basis<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let n = m.rows();
    if m.cols() == 0 {
        return Matrix::zeros(m.field(), n, 0);
    }
    let r = m.transpose().rref();
    let k = r.pivots.len();
    Matrix::from_fn(m.field(), n, k, |i, j| r.reduced.get(j, i).clone())
}

/// Independent columns spanning the same space as `m`.
pub fn independent_columns<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    m.image()
}

pub fn span_dim<F: Field>(m: &Matrix<F>) -> usize {
    m.rank()
}

pub fn span_sum<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let f = a.field();
    canonical_basis(&Matrix::hstack(f, a.rows(), &[a, b]))
}

pub fn intersection<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let f = a.field();
    let a = independent_columns(a);
    let b = independent_columns(b);
    let stacked = Matrix::hstack(f, a.rows(), &[&a, &b.scale(&f.neg(&f.one()))]);
    let k = stacked.kernel();
    let coeffs = k.block(0, a.cols(), 0, k.cols());
    canonical_basis(&a.mul(&coeffs))
}

pub fn same_span<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> bool {
    canonical_basis(a) == canonical_basis(b)
}

/// Quotient `K^n / U` presented by a projection and a section.
#[derive(Debug, Clone)]
pub struct Quotient<F: Field> {
    /// `(n - r) x n`, kernel exactly `U`.
    pub proj: Matrix<F>,
    /// `n x (n - r)`, with `proj * section = I`.
    pub section: Matrix<F>,
}

impl<F: Field> Quotient<F> {
    pub fn new(field: &F, n: usize, sub: &Matrix<F>) -> Self {
        let u = independent_columns(sub);
        let r = u.cols();
        let id = Matrix::identity(field, n);
        let ext = Matrix::hstack(field, n, &[&u, &id]);
        let piv = ext.rref().pivots;
        debug_assert!(piv[..r].iter().enumerate().all(|(i, &c)| i == c));
        let basis = ext.select_columns(&piv);
        let inv = basis.inverse().expect("extended basis is invertible");
        let proj = inv.block(r, n, 0, n);
        let section = basis.block(0, n, r, n);
        Quotient { proj, section }
    }

    pub fn dim(&self) -> usize {
        self.proj.rows()
    }
}

/// Number of subspaces of `F_q^n` (sum of Gaussian binomials), saturating.
pub fn count_subspaces(q: u64, n: usize) -> u128 {
    (0..=n).fold(0u128, |acc, k| acc.saturating_add(gaussian_binomial(q, n, k)))
}

pub fn gaussian_binomial(q: u64, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        let a = q.saturating_pow((n - i) as u32).saturating_sub(1);
        let b = q.saturating_pow((i + 1) as u32).saturating_sub(1);
        num = num.saturating_mul(a);
        den = den.saturating_mul(b);
        if num == u128::MAX {
            return u128::MAX;
        }
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Every subspace of `F^n`, each given by an `n x k` basis whose transpose is
/// in reduced row echelon form. Ordered by dimension, then pivot set, then
/// free entries in lexicographic index order.
pub fn all_subspaces<F: FiniteField>(field: &F, n: usize) -> Vec<Matrix<F>> {
    let mut out = Vec::new();
    for k in 0..=n {
        subspaces_of_dim(field, n, k, &mut out);
    }
    out
}

pub fn subspaces_of_dim<F: FiniteField>(field: &F, n: usize, k: usize, out: &mut Vec<Matrix<F>>) {
    let q = field.order();
    for pivots in combinations(n, k) {
        // free positions: row i of the echelon form, column c > pivot_i, c not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let piv = &pivots;
                (piv[i] + 1..n).filter(move |c| !piv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let total = q.checked_pow(free.len() as u32).expect("subspace count overflow");
        for code in 0..total {
            let mut m = Matrix::zeros(field, n, k);
            for (i, &p) in pivots.iter().enumerate() {
                m.set(p, i, field.one());
            }
            let mut c = code;
            for &(i, col) in &free {
                m.set(col, i, field.element(c % q));
                c /= q;
            }
            out.push(m);
        }
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::field::{PrimeField, Rationals};
    use std::collections::HashSet;

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for (p, n) in [(2u32, 3usize), (3, 3), (2, 4), (5, 2)] {
            let f = PrimeField::new(p).unwrap();
            let subs = all_subspaces(&f, n);
            assert_eq!(subs.len() as u128, count_subspaces(p as u64, n));
            let distinct: HashSet<_> = subs.iter().map(canonical_basis).collect();
            assert_eq!(distinct.len(), subs.len());
        }
        assert_eq!(count_subspaces(2, 2), 5);
        assert_eq!(count_subspaces(3, 4), 212);
    }

    #[test]
    fn quotient_projection_kills_subspace() {
        let q = Rationals;
        let u = Matrix::from_i64(&q, &[vec![1], vec![1], vec![0]]);
        let quo = Quotient::new(&q, 3, &u);
        assert_eq!(quo.dim(), 2);
        assert!(quo.proj.mul(&u).is_zero());
        assert!(quo.proj.mul(&quo.section).is_identity());
    }

    #[test]
    fn intersection_and_sum() {
        let q = Rationals;
        let a = Matrix::from_i64(&q, &[vec![1, 0], vec![0, 1], vec![0, 0]]);
        let b = Matrix::from_i64(&q, &[vec![0, 0], vec![1, 0], vec![0, 1]]);
        let i = intersection(&a, &b);
        assert_eq!(i, Matrix::column_vector(&q, &[0, 1, 0]));
        assert_eq!(span_sum(&a, &b).cols(), 3);
    }
}
