//! Exact dense linear algebra over the rationals and small prime fields.

pub mod field;
pub mod matrix;
pub mod subspace;

pub use field::{Field, FieldSpec, FiniteField, PrimeField, Rationals};
pub use matrix::{Matrix, RankKernelImage, Rref};

/// Rank, null space basis and column space basis of `m`.
pub fn rank_kernel_image<F: Field>(m: &Matrix<F>) -> RankKernelImage<F> {
    m.rank_kernel_image()
}

pub fn det<F: Field>(m: &Matrix<F>) -> crate::Result<F::Elem> {
    m.det()
}

pub fn solve<F: Field>(m: &Matrix<F>, b: &Matrix<F>) -> Option<Matrix<F>> {
    m.solve(b)
}
