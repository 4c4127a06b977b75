use crate::error::{Error, Result};
use crate::exactla::subspace::{canonical_basis, intersection, span_sum, Quotient};
use crate::exactla::{Field, Matrix};
use crate::rep::{Morphism, Representation};

/// An arrow-closed tuple of subspaces, one per vertex, stored as canonical
/// column bases. The ambient representation is passed to each operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subrep<F: Field> {
    basis: Vec<Matrix<F>>,
}

impl<F: Field> Subrep<F> {
    /// Canonicalizes the bases and checks arrow closure.
    pub fn new(m: &Representation<F>, basis: Vec<Matrix<F>>) -> Result<Self> {
        if basis.len() != m.dims().len() {
            return Err(Error::shape("subrepresentation needs one basis per vertex"));
        }
        for (w, b) in basis.iter().enumerate() {
            if b.rows() != m.dim(w) {
                return Err(Error::shape(format!(
                    "basis at {} has {} rows, space has dimension {}",
                    m.ladder().vertex_name(w),
                    b.rows(),
                    m.dim(w)
                )));
            }
        }
        let s = Subrep {
            basis: basis.iter().map(canonical_basis).collect(),
        };
        if !s.is_closed(m) {
            return Err(Error::validation("subspace tuple is not closed under the arrows"));
        }
        Ok(s)
    }

    /// For bases already known to be closed.
    pub(crate) fn from_closed(basis: Vec<Matrix<F>>) -> Self {
        Subrep {
            basis: basis.iter().map(canonical_basis).collect(),
        }
    }

    /// Bases that are already canonical and closed.
    pub(crate) fn from_canonical(basis: Vec<Matrix<F>>) -> Self {
        Subrep { basis }
    }

    pub fn zero(m: &Representation<F>) -> Self {
        Subrep {
            basis: m.dims().iter().map(|&d| Matrix::zeros(m.field(), d, 0)).collect(),
        }
    }

    pub fn full(m: &Representation<F>) -> Self {
        Subrep {
            basis: m.dims().iter().map(|&d| Matrix::identity(m.field(), d)).collect(),
        }
    }

    /// The smallest subrepresentation containing the given vectors.
    pub fn generated(m: &Representation<F>, gens: &[(usize, Matrix<F>)]) -> Self {
        let field = m.field();
        let l = m.ladder();
        let mut basis: Vec<Matrix<F>> = m.dims().iter().map(|&d| Matrix::zeros(field, d, 0)).collect();
        for (w, v) in gens {
            basis[*w] = Matrix::hstack(field, m.dim(*w), &[&basis[*w], v]);
        }
        for &u in l.topological_order() {
            let mut parts = vec![basis[u].clone()];
            for &a in l.incoming(u) {
                parts.push(m.mat(a).mul(&basis[l.arrow(a).src]));
            }
            let refs: Vec<&Matrix<F>> = parts.iter().collect();
            basis[u] = canonical_basis(&Matrix::hstack(field, m.dim(u), &refs));
        }
        Subrep { basis }
    }

    pub fn is_closed(&self, m: &Representation<F>) -> bool {
        m.ladder().arrows().iter().enumerate().all(|(i, a)| {
            let img = m.mat(i).mul(&self.basis[a.src]);
            self.basis[a.tgt].column_span_contains(&img)
        })
    }

    pub fn basis(&self, w: usize) -> &Matrix<F> {
        &self.basis[w]
    }
    pub fn bases(&self) -> &[Matrix<F>] {
        &self.basis
    }
    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.cols()).collect()
    }
    pub fn dim(&self, w: usize) -> usize {
        self.basis[w].cols()
    }
    pub fn total_dim(&self) -> usize {
        self.basis.iter().map(|b| b.cols()).sum()
    }
    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }
    pub fn is_full(&self, m: &Representation<F>) -> bool {
        self.dims() == *m.dims()
    }

    pub fn contains(&self, other: &Subrep<F>) -> bool {
        self.basis
            .iter()
            .zip(&other.basis)
            .all(|(a, b)| a.column_span_contains(b))
    }

    pub fn sum(&self, other: &Subrep<F>) -> Subrep<F> {
        Subrep {
            basis: self.basis.iter().zip(&other.basis).map(|(a, b)| span_sum(a, b)).collect(),
        }
    }

    pub fn intersection(&self, other: &Subrep<F>) -> Subrep<F> {
        Subrep {
            basis: self
                .basis
                .iter()
                .zip(&other.basis)
                .map(|(a, b)| intersection(a, b))
                .collect(),
        }
    }

    /// The subrepresentation as a representation in its own basis.
    pub fn representation(&self, m: &Representation<F>) -> Representation<F> {
        let mats = m
            .ladder()
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let img = m.mat(i).mul(&self.basis[a.src]);
                self.basis[a.tgt].solve(&img).expect("subrepresentation is arrow-closed")
            })
            .collect();
        Representation::new(m.ladder().clone(), m.field().clone(), self.dims(), mats).expect("restricted shapes match")
    }

    pub fn inclusion(&self, m: &Representation<F>) -> Morphism<F> {
        Morphism::new_unchecked(self.representation(m), m.clone(), self.basis.clone())
    }

    /// `m / self` together with the projection `m -> m / self`.
    pub fn quotient(&self, m: &Representation<F>) -> (Representation<F>, Morphism<F>) {
        let field = m.field();
        let quos: Vec<Quotient<F>> = self
            .basis
            .iter()
            .enumerate()
            .map(|(w, b)| Quotient::new(field, m.dim(w), b))
            .collect();
        let dims = quos.iter().map(|q| q.dim()).collect();
        let mats = m
            .ladder()
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| quos[a.tgt].proj.mul(m.mat(i)).mul(&quos[a.src].section))
            .collect();
        let q = Representation::new(m.ladder().clone(), field.clone(), dims, mats).expect("quotient shapes match");
        let proj = quos.into_iter().map(|q| q.proj).collect();
        let pi = Morphism::new_unchecked(m.clone(), q.clone(), proj);
        (q, pi)
    }

    /// Whether `m / self` has injective horizontal maps, i.e. every
    /// horizontal preimage `M(beta)^{-1}(S_{j+1})` equals `S_j`.
    pub fn is_strict(&self, m: &Representation<F>) -> bool {
        let field = m.field();
        m.ladder().betas().all(|b| {
            let a = m.ladder().arrow(b);
            let (s, t) = (a.src, a.tgt);
            let joined = Matrix::hstack(field, m.dim(t), &[&self.basis[t], m.mat(b)]);
            let rank_mod = joined.rank() - self.dim(t);
            self.dim(s) + rank_mod == m.dim(s)
        })
    }

    /// Image of this subrepresentation under `f`, as a subrepresentation of the target.
    pub fn image_under(&self, f: &Morphism<F>) -> Subrep<F> {
        Subrep::from_closed(self.basis.iter().zip(f.comps()).map(|(b, c)| c.mul(b)).collect())
    }

    /// Preimage of this subrepresentation (of `f`'s target) in `f`'s source.
    pub fn preimage_under(&self, f: &Morphism<F>) -> Subrep<F> {
        let field = f.source().field();
        let basis = f
            .comps()
            .iter()
            .zip(&self.basis)
            .map(|(c, s)| {
                let joined = Matrix::hstack(field, c.rows(), &[c, s]);
                let k = joined.kernel();
                k.block(0, c.cols(), 0, k.cols())
            })
            .collect();
        Subrep::from_closed(basis)
    }
}

/// Vertexwise kernel of `f`.
pub fn kernel<F: Field>(f: &Morphism<F>) -> Subrep<F> {
    Subrep::from_closed(f.comps().iter().map(|c| c.kernel()).collect())
}

/// Vertexwise image of `f` in its target.
pub fn image<F: Field>(f: &Morphism<F>) -> Subrep<F> {
    Subrep::from_closed(f.comps().iter().map(|c| c.image()).collect())
}

/// Vertexwise quotient of the target by the image.
pub fn cokernel_ambient<F: Field>(f: &Morphism<F>) -> Representation<F> {
    image(f).quotient(f.target()).0
}

/// The cokernel inside the filtered category: at `(j, v)`, the image of the
/// target's `(j, v)` space in the ambient cokernel at `(l, v)`.
pub fn cokernel_filtered<F: Field>(f: &Morphism<F>) -> Result<Representation<F>> {
    f.source().require_filtered("source")?;
    f.target().require_filtered("target")?;
    crate::rep::kappa(&cokernel_ambient(f))
}

/// Whether an injective morphism of filtered representations has a filtered
/// ambient cokernel.
pub fn is_strict_mono<F: Field>(f: &Morphism<F>) -> Result<bool> {
    if !f.is_injective() {
        return Err(Error::validation("morphism is not injective"));
    }
    f.source().require_filtered("source")?;
    f.target().require_filtered("target")?;
    Ok(image(f).is_strict(f.target()))
}
