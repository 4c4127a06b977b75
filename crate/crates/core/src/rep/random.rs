//! Random representations for property tests and sampling.

use std::sync::Arc;

use rand::Rng;

use crate::exactla::subspace::canonical_basis;
use crate::exactla::{Field, Matrix};
use crate::quiver::{LadderArrowKind, LadderQuiver};
use crate::rep::{Representation, Subrep};

pub fn random_matrix<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R, rows: usize, cols: usize, bound: i64) -> Matrix<F> {
    Matrix::from_fn(field, rows, cols, |_, _| field.random(rng, bound))
}

/// A random filtered representation. The sink level is a random
/// representation of the base quiver with each dimension in `0..=max_dim`;
/// each lower level is the subrepresentation generated by a few random
/// vectors of the level above.
pub fn random_filtered<F: Field, R: Rng + ?Sized>(
    ladder: &Arc<LadderQuiver>,
    field: &F,
    rng: &mut R,
    max_dim: usize,
    bound: i64,
) -> Representation<F> {
    let q = ladder.base();
    let nb = q.num_vertices();
    let top_dims: Vec<usize> = (0..nb).map(|_| rng.gen_range(0..=max_dim)).collect();
    let top: Vec<Matrix<F>> = q
        .arrows()
        .iter()
        .map(|a| random_matrix(field, rng, top_dims[a.tgt], top_dims[a.src], bound))
        .collect();
    // level_bases[j-1][v]: basis of M(j, v) inside the sink-level space
    let levels = ladder.levels();
    let mut level_bases: Vec<Vec<Matrix<F>>> = vec![Vec::new(); levels];
    level_bases[levels - 1] = top_dims.iter().map(|&d| Matrix::identity(field, d)).collect();
    for j in (1..levels).rev() {
        let above = &level_bases[j];
        let total: usize = above.iter().map(|b| b.cols()).sum();
        let keep_all = rng.gen_bool(0.25);
        let mut gens: Vec<Matrix<F>> = top_dims.iter().map(|&d| Matrix::zeros(field, d, 0)).collect();
        if keep_all {
            gens = above.clone();
        } else if total > 0 {
            for _ in 0..rng.gen_range(0..=total) {
                let v = rng.gen_range(0..nb);
                if above[v].cols() == 0 {
                    continue;
                }
                let c = random_matrix(field, rng, above[v].cols(), 1, bound);
                let vec = above[v].mul(&c);
                gens[v] = Matrix::hstack(field, top_dims[v], &[&gens[v], &vec]);
            }
        }
        for &u in q.topological_order() {
            let mut parts = vec![gens[u].clone()];
            for (ai, a) in q.arrows().iter().enumerate() {
                if a.tgt == u {
                    parts.push(top[ai].mul(&gens[a.src]));
                }
            }
            let refs: Vec<&Matrix<F>> = parts.iter().collect();
            gens[u] = canonical_basis(&Matrix::hstack(field, top_dims[u], &refs));
        }
        level_bases[j - 1] = gens;
    }
    let dims: Vec<usize> = (0..ladder.num_vertices())
        .map(|w| {
            let v = ladder.vertex(w);
            level_bases[v.level - 1][v.base].cols()
        })
        .collect();
    let mats = ladder
        .arrows()
        .iter()
        .map(|a| match a.kind {
            LadderArrowKind::Vertical { level, base_arrow } => {
                let arr = &q.arrows()[base_arrow];
                let (bs, bt) = (&level_bases[level - 1][arr.src], &level_bases[level - 1][arr.tgt]);
                bt.solve(&top[base_arrow].mul(bs)).expect("level is a subrepresentation")
            }
            LadderArrowKind::Horizontal { level, base_vertex } => level_bases[level][base_vertex]
                .solve(&level_bases[level - 1][base_vertex])
                .expect("levels are nested"),
        })
        .collect();
    Representation::new(ladder.clone(), field.clone(), dims, mats).expect("shapes follow the bases")
}

/// A random relation-satisfying representation: the quotient of a random
/// filtered representation by a randomly generated subrepresentation.
pub fn random_rep<F: Field, R: Rng + ?Sized>(
    ladder: &Arc<LadderQuiver>,
    field: &F,
    rng: &mut R,
    max_dim: usize,
    bound: i64,
) -> Representation<F> {
    let n = random_filtered(ladder, field, rng, max_dim, bound);
    if n.is_zero() {
        return n;
    }
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let w = rng.gen_range(0..ladder.num_vertices());
        if n.dim(w) > 0 {
            gens.push((w, random_matrix(field, rng, n.dim(w), 1, bound)));
        }
    }
    Subrep::generated(&n, &gens).quotient(&n).0
}

/// A random invertible matrix, by rejection.
pub fn random_invertible<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R, n: usize, bound: i64) -> Matrix<F> {
    loop {
        let m = random_matrix(field, rng, n, n, bound);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A random element of `prod_w GL(d_w)`.
pub fn random_group_element<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R, dims: &[usize], bound: i64) -> Vec<Matrix<F>> {
    dims.iter().map(|&d| random_invertible(field, rng, d, bound)).collect()
}
