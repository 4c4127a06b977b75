//! Representations of a ladder quiver satisfying the commutativity relations.

mod morphism;
pub mod projective;
pub mod random;
mod subrep;
mod torsion;

pub use morphism::{hom_dim, hom_space, is_isomorphic, Morphism};
pub use projective::indecomposable_projective;
pub use subrep::{cokernel_ambient, cokernel_filtered, image, is_strict_mono, kernel, Subrep};
pub use torsion::{is_torsion, kappa, tf_resolution, torsion_part, TfResolution};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};
use crate::quiver::{LadderQuiver, NormalPath};

/// Dimensions in the canonical (level-major) vertex order.
pub type DimensionVector = Vec<usize>;

/// A representation: a space `K^{d_w}` per vertex and a matrix per arrow,
/// with `mats[a]` of shape `dims[t(a)] x dims[s(a)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation<F: Field> {
    ladder: Arc<LadderQuiver>,
    field: F,
    dims: DimensionVector,
    mats: Vec<Matrix<F>>,
}

impl<F: Field> Representation<F> {
    /// Checks shapes only; relations are checked by [`Self::check_relations`].
    pub fn new(ladder: Arc<LadderQuiver>, field: F, dims: DimensionVector, mats: Vec<Matrix<F>>) -> Result<Self> {
        if dims.len() != ladder.num_vertices() {
            return Err(Error::shape(format!(
                "{} dimensions given for {} vertices",
                dims.len(),
                ladder.num_vertices()
            )));
        }
        if mats.len() != ladder.num_arrows() {
            return Err(Error::shape(format!(
                "{} matrices given for {} arrows",
                mats.len(),
                ladder.num_arrows()
            )));
        }
        for (a, m) in ladder.arrows().iter().zip(&mats) {
            if m.shape() != (dims[a.tgt], dims[a.src]) {
                return Err(Error::shape(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    a.id,
                    dims[a.tgt],
                    dims[a.src],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Representation { ladder, field, dims, mats })
    }

    /// Like [`Self::new`] but also rejects relation failures.
    pub fn new_checked(ladder: Arc<LadderQuiver>, field: F, dims: DimensionVector, mats: Vec<Matrix<F>>) -> Result<Self> {
        let m = Self::new(ladder, field, dims, mats)?;
        m.require_relations()?;
        Ok(m)
    }

    pub fn zero(ladder: Arc<LadderQuiver>, field: F) -> Self {
        let dims = vec![0; ladder.num_vertices()];
        Self::with_zero_maps(ladder, field, dims)
    }

    pub fn with_zero_maps(ladder: Arc<LadderQuiver>, field: F, dims: DimensionVector) -> Self {
        let mats = ladder
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(&field, dims[a.tgt], dims[a.src]))
            .collect();
        Representation { ladder, field, dims, mats }
    }

    /// The simple representation at `w`.
    pub fn simple(ladder: Arc<LadderQuiver>, field: F, w: usize) -> Self {
        let mut dims = vec![0; ladder.num_vertices()];
        dims[w] = 1;
        Self::with_zero_maps(ladder, field, dims)
    }

    pub fn ladder(&self) -> &Arc<LadderQuiver> {
        &self.ladder
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }
    pub fn dim(&self, w: usize) -> usize {
        self.dims[w]
    }
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn mat(&self, arrow: usize) -> &Matrix<F> {
        &self.mats[arrow]
    }
    pub fn mats(&self) -> &[Matrix<F>] {
        &self.mats
    }
    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn same_ladder(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ladder, &other.ladder) || *self.ladder == *other.ladder
    }

    pub(crate) fn require_same_ladder(&self, other: &Self) -> Result<()> {
        if self.same_ladder(other) && self.field == other.field {
            Ok(())
        } else {
            Err(Error::validation("representations live on different ladders or fields"))
        }
    }

    /// Matrix of a normal-form path.
    pub fn path_matrix(&self, p: &NormalPath) -> Matrix<F> {
        let mut acc = Matrix::identity(&self.field, self.dims[p.source(&self.ladder)]);
        for x in p.to_word(&self.ladder) {
            acc = self.mats[x].mul(&acc);
        }
        acc
    }

    /// Composite of horizontal maps `(from, v) -> (to, v)`.
    pub fn horizontal(&self, from: usize, to: usize, v: usize) -> Matrix<F> {
        let l = &self.ladder;
        let mut acc = Matrix::identity(&self.field, self.dims[l.vertex_index(from, v)]);
        for j in from..to {
            acc = self.mats[l.beta(j, v)].mul(&acc);
        }
        acc
    }

    pub fn check_relations(&self) -> bool {
        self.ladder.relations().iter().all(|r| {
            let (a, b) = r.vertical_first;
            let (c, d) = r.horizontal_first;
            self.mats[b].mul(&self.mats[a]) == self.mats[d].mul(&self.mats[c])
        })
    }

    pub(crate) fn require_relations(&self) -> Result<()> {
        for r in self.ladder.relations() {
            let (a, b) = r.vertical_first;
            let (c, d) = r.horizontal_first;
            if self.mats[b].mul(&self.mats[a]) != self.mats[d].mul(&self.mats[c]) {
                return Err(Error::validation(format!(
                    "commutativity relation fails for {} and {}",
                    self.ladder.arrow(a).id,
                    self.ladder.arrow(d).id
                )));
            }
        }
        Ok(())
    }

    /// Every horizontal map injective. Errors when relations fail.
    pub fn is_filtered(&self) -> Result<bool> {
        self.require_relations()?;
        Ok(self.betas_injective())
    }

    pub(crate) fn betas_injective(&self) -> bool {
        self.ladder.betas().all(|b| self.mats[b].rank() == self.mats[b].cols())
    }

    pub(crate) fn require_filtered(&self, what: &str) -> Result<()> {
        if self.is_filtered()? {
            Ok(())
        } else {
            Err(Error::validation(format!("{what} is not a filtered representation")))
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.require_same_ladder(other)?;
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| Matrix::block_diagonal(&self.field, &[a, b]))
            .collect();
        Ok(Representation {
            ladder: self.ladder.clone(),
            field: self.field.clone(),
            dims,
            mats,
        })
    }

    pub fn direct_sum_all(ladder: Arc<LadderQuiver>, field: F, parts: &[Self]) -> Result<Self> {
        parts
            .iter()
            .try_fold(Self::zero(ladder, field), |acc, p| acc.direct_sum(p))
    }

    /// `g . M` with `(g . M)(a) = g_{t(a)} M(a) g_{s(a)}^{-1}`.
    pub fn act(&self, g: &[Matrix<F>]) -> Result<Self> {
        let inv = self.check_group_element(g)?;
        let mats = self
            .ladder
            .arrows()
            .iter()
            .zip(&self.mats)
            .map(|(a, m)| g[a.tgt].mul(m).mul(&inv[a.src]))
            .collect();
        Ok(Representation {
            ladder: self.ladder.clone(),
            field: self.field.clone(),
            dims: self.dims.clone(),
            mats,
        })
    }

    /// Inverses of a tuple of invertible matrices matching the dimensions.
    pub(crate) fn check_group_element(&self, g: &[Matrix<F>]) -> Result<Vec<Matrix<F>>> {
        if g.len() != self.dims.len() {
            return Err(Error::shape("group element needs one matrix per vertex"));
        }
        g.iter()
            .zip(&self.dims)
            .map(|(m, &d)| {
                if m.shape() != (d, d) {
                    return Err(Error::shape(format!("group component must be {d}x{d}")));
                }
                m.inverse()
                    .ok_or_else(|| Error::validation("group component is not invertible"))
            })
            .collect()
    }

    /// Replace the matrices, keeping ladder, field and dimensions.
    pub fn with_mats(&self, mats: Vec<Matrix<F>>) -> Result<Self> {
        Self::new(self.ladder.clone(), self.field.clone(), self.dims.clone(), mats)
    }

    /// Change of scalars, entry by entry.
    pub fn map_field<G: Field>(&self, target: &G, f: impl Fn(&F::Elem) -> Option<G::Elem>) -> Option<Representation<G>> {
        let mats = self
            .mats
            .iter()
            .map(|m| m.map_field(target, &f))
            .collect::<Option<Vec<_>>>()?;
        Some(Representation {
            ladder: self.ladder.clone(),
            field: target.clone(),
            dims: self.dims.clone(),
            mats,
        })
    }
}
