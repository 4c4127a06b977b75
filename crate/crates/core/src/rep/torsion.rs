use crate::error::Result;
use crate::exactla::{Field, Matrix};
use crate::rep::{kernel, Morphism, Representation, Subrep};

/// A representation vanishing on the sink level.
pub fn is_torsion<F: Field>(b: &Representation<F>) -> bool {
    let l = b.ladder();
    (0..l.base().num_vertices()).all(|v| b.dim(l.vertex_index(l.levels(), v)) == 0)
}

/// `B_tor(j, v)`: kernel of the horizontal composite `(j, v) -> (l, v)`.
pub fn torsion_part<F: Field>(b: &Representation<F>) -> Result<Subrep<F>> {
    b.require_relations()?;
    let l = b.ladder();
    let basis = (0..l.num_vertices())
        .map(|w| {
            let v = l.vertex(w);
            b.horizontal(v.level, l.levels(), v.base).kernel()
        })
        .collect();
    Ok(Subrep::from_closed(basis))
}

/// `B / B_tor`, the reflection of `B` into filtered representations.
pub fn kappa<F: Field>(b: &Representation<F>) -> Result<Representation<F>> {
    Ok(torsion_part(b)?.quotient(b).0)
}

/// `0 -> N' -> N -> B -> 0` with `N`, `N'` filtered.
#[derive(Clone, Debug)]
pub struct TfResolution<F: Field> {
    pub n: Representation<F>,
    pub nprime: Representation<F>,
    /// `N' -> N`.
    pub inclusion: Morphism<F>,
    /// `N -> B`.
    pub f: Morphism<F>,
}

/// `N(k, v) = ⊕_{j<=k} B(j, v)` with block-diagonal vertical maps and
/// inclusions as horizontal maps; `f` sums the horizontal composites.
pub fn tf_resolution<F: Field>(b: &Representation<F>) -> Result<TfResolution<F>> {
    b.require_relations()?;
    let l = b.ladder().clone();
    let field = b.field();
    let nb = l.base().num_vertices();
    let levels = l.levels();
    let dim_b = |j: usize, v: usize| b.dim(l.vertex_index(j, v));
    let mut dims = vec![0; l.num_vertices()];
    for k in 1..=levels {
        for v in 0..nb {
            dims[l.vertex_index(k, v)] = (1..=k).map(|j| dim_b(j, v)).sum();
        }
    }
    let mut mats = Vec::with_capacity(l.num_arrows());
    for a in l.arrows() {
        let m = match a.kind {
            crate::quiver::LadderArrowKind::Vertical { level, base_arrow } => {
                let blocks: Vec<&Matrix<F>> = (1..=level).map(|j| b.mat(l.alpha(j, base_arrow))).collect();
                Matrix::block_diagonal(field, &blocks)
            }
            crate::quiver::LadderArrowKind::Horizontal { .. } => {
                let mut m = Matrix::zeros(field, dims[a.tgt], dims[a.src]);
                m.set_block(0, 0, &Matrix::identity(field, dims[a.src]));
                m
            }
        };
        mats.push(m);
    }
    let n = Representation::new(l.clone(), field.clone(), dims, mats)?;
    let comps = (0..l.num_vertices())
        .map(|w| {
            let (k, v) = (l.vertex(w).level, l.vertex(w).base);
            let parts: Vec<Matrix<F>> = (1..=k).map(|j| b.horizontal(j, k, v)).collect();
            let refs: Vec<&Matrix<F>> = parts.iter().collect();
            Matrix::hstack(field, dim_b(k, v), &refs)
        })
        .collect();
    let f = Morphism::new_unchecked(n.clone(), b.clone(), comps);
    let ker = kernel(&f);
    let inclusion = ker.inclusion(&n);
    Ok(TfResolution {
        nprime: inclusion.source().clone(),
        n,
        inclusion,
        f,
    })
}
