use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::{Field, FieldSpec, Matrix};
use crate::rep::Representation;

/// A vertexwise family of matrices intertwining two representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism<F: Field> {
    source: Representation<F>,
    target: Representation<F>,
    comps: Vec<Matrix<F>>,
}

impl<F: Field> Morphism<F> {
    /// Checks shapes and the intertwining equations exactly.
    pub fn new(source: Representation<F>, target: Representation<F>, comps: Vec<Matrix<F>>) -> Result<Self> {
        source.require_same_ladder(&target)?;
        if comps.len() != source.dims().len() {
            return Err(Error::shape("morphism needs one matrix per vertex"));
        }
        for (w, c) in comps.iter().enumerate() {
            if c.shape() != (target.dim(w), source.dim(w)) {
                return Err(Error::shape(format!(
                    "component at {} must be {}x{}",
                    source.ladder().vertex_name(w),
                    target.dim(w),
                    source.dim(w)
                )));
            }
        }
        let f = Morphism { source, target, comps };
        if let Some(a) = f.first_failing_arrow() {
            return Err(Error::validation(format!(
                "morphism does not commute with arrow {}",
                f.source.ladder().arrow(a).id
            )));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: Representation<F>, target: Representation<F>, comps: Vec<Matrix<F>>) -> Self {
        debug_assert!(Morphism {
            source: source.clone(),
            target: target.clone(),
            comps: comps.clone()
        }
        .first_failing_arrow()
        .is_none());
        Morphism { source, target, comps }
    }

    fn first_failing_arrow(&self) -> Option<usize> {
        self.source.ladder().arrows().iter().enumerate().find_map(|(i, a)| {
            let lhs = self.target.mat(i).mul(&self.comps[a.src]);
            let rhs = self.comps[a.tgt].mul(self.source.mat(i));
            (lhs != rhs).then_some(i)
        })
    }

    pub fn identity(m: &Representation<F>) -> Self {
        let comps = m.dims().iter().map(|&d| Matrix::identity(m.field(), d)).collect();
        Morphism {
            source: m.clone(),
            target: m.clone(),
            comps,
        }
    }

    pub fn zero(m: &Representation<F>, n: &Representation<F>) -> Result<Self> {
        m.require_same_ladder(n)?;
        let comps = m
            .dims()
            .iter()
            .zip(n.dims())
            .map(|(&a, &b)| Matrix::zeros(m.field(), b, a))
            .collect();
        Ok(Morphism {
            source: m.clone(),
            target: n.clone(),
            comps,
        })
    }

    pub fn source(&self) -> &Representation<F> {
        &self.source
    }
    pub fn target(&self) -> &Representation<F> {
        &self.target
    }
    pub fn comps(&self) -> &[Matrix<F>] {
        &self.comps
    }
    pub fn comp(&self, w: usize) -> &Matrix<F> {
        &self.comps[w]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism<F>) -> Result<Self> {
        if self.target != other.source {
            return Err(Error::shape("morphisms are not composable"));
        }
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| b.mul(a)).collect();
        Ok(Morphism {
            source: self.source.clone(),
            target: other.target.clone(),
            comps,
        })
    }

    pub fn is_injective(&self) -> bool {
        self.comps.iter().all(|c| c.rank() == c.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.comps.iter().all(|c| c.rank() == c.rows())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.comps.iter().all(|c| c.is_invertible())
    }

    fn combination(&self, basis: &[Morphism<F>], coeffs: &[F::Elem]) -> Self {
        let field = self.source.field();
        let mut comps: Vec<Matrix<F>> = self.comps.iter().map(|c| Matrix::zeros(field, c.rows(), c.cols())).collect();
        for (b, c) in basis.iter().zip(coeffs) {
            if field.is_zero(c) {
                continue;
            }
            for (acc, x) in comps.iter_mut().zip(&b.comps) {
                *acc = acc.add(&x.scale(c));
            }
        }
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            comps,
        }
    }
}

/// Coefficient matrix of the intertwining equations `N(a) f_s - f_t M(a) = 0`
/// in the unknowns `f_w[i][j]`, ordered vertex by vertex, row-major.
fn hom_system<F: Field>(m: &Representation<F>, n: &Representation<F>) -> (Matrix<F>, Vec<usize>) {
    let field = m.field();
    let nv = m.dims().len();
    let mut offsets = Vec::with_capacity(nv + 1);
    let mut acc = 0;
    for w in 0..nv {
        offsets.push(acc);
        acc += m.dim(w) * n.dim(w);
    }
    offsets.push(acc);
    let unknowns = acc;
    let var = |w: usize, i: usize, j: usize| offsets[w] + i * m.dim(w) + j;
    let mut rows: Vec<Vec<(usize, F::Elem)>> = Vec::new();
    for (ai, a) in m.ladder().arrows().iter().enumerate() {
        let (s, t) = (a.src, a.tgt);
        let (na, ma) = (n.mat(ai), m.mat(ai));
        for i in 0..n.dim(t) {
            for j in 0..m.dim(s) {
                let mut row = Vec::new();
                for k in 0..n.dim(s) {
                    let c = na.get(i, k);
                    if !field.is_zero(c) {
                        row.push((var(s, k, j), c.clone()));
                    }
                }
                for k in 0..m.dim(t) {
                    let c = ma.get(k, j);
                    if !field.is_zero(c) {
                        row.push((var(t, i, k), field.neg(c)));
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    let mut sys = Matrix::zeros(field, rows.len(), unknowns);
    for (r, row) in rows.into_iter().enumerate() {
        for (c, v) in row {
            let cur = field.add(sys.get(r, c), &v);
            sys.set(r, c, cur);
        }
    }
    (sys, offsets)
}

/// A basis of `Hom(m, n)`.
pub fn hom_space<F: Field>(m: &Representation<F>, n: &Representation<F>) -> Result<Vec<Morphism<F>>> {
    m.require_same_ladder(n)?;
    let (sys, offsets) = hom_system(m, n);
    let ker = sys.kernel();
    let mut out = Vec::with_capacity(ker.cols());
    for c in 0..ker.cols() {
        let comps = (0..m.dims().len())
            .map(|w| {
                Matrix::from_fn(m.field(), n.dim(w), m.dim(w), |i, j| {
                    ker.get(offsets[w] + i * m.dim(w) + j, c).clone()
                })
            })
            .collect();
        out.push(Morphism::new_unchecked(m.clone(), n.clone(), comps));
    }
    Ok(out)
}

pub fn hom_dim<F: Field>(m: &Representation<F>, n: &Representation<F>) -> Result<usize> {
    m.require_same_ladder(n)?;
    let (sys, offsets) = hom_system(m, n);
    Ok(offsets[offsets.len() - 1] - sys.rank())
}

/// Largest Hom space scanned exhaustively over a finite field.
const EXHAUSTIVE_HOM_LIMIT: u128 = 1_000_000;
const RANDOM_TRIALS: usize = 64;

/// Whether an invertible morphism `m -> n` exists.
///
/// Over a finite field with at most 10^6 morphisms the Hom space is
/// scanned exhaustively and the answer is exact. Otherwise random elements
/// are tried; a generic morphism between isomorphic objects is invertible,
/// so a miss after all trials is reported as non-isomorphic.
pub fn is_isomorphic<F: Field>(m: &Representation<F>, n: &Representation<F>) -> Result<bool> {
    m.require_same_ladder(n)?;
    if m.dims() != n.dims() {
        return Ok(false);
    }
    if m == n {
        return Ok(true);
    }
    if hom_dim(m, n)? != hom_dim(n, m)? {
        return Ok(false);
    }
    let basis = hom_space(m, n)?;
    if basis.is_empty() {
        return Ok(m.is_zero());
    }
    let field = m.field();
    let template = Morphism::zero(m, n)?;
    if let FieldSpec::Prime(p) = field.spec() {
        let size = (p as u128).checked_pow(basis.len() as u32);
        if let Some(size) = size.filter(|&s| s <= EXHAUSTIVE_HOM_LIMIT) {
            let mut coeffs = vec![field.zero(); basis.len()];
            for code in 0..size {
                let mut c = code;
                for x in coeffs.iter_mut() {
                    *x = field.from_i64((c % p as u128) as i64);
                    c /= p as u128;
                }
                if template.combination(&basis, &coeffs).is_isomorphism() {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x15_0b0c);
    let mut bound = 2i64;
    for trial in 0..RANDOM_TRIALS {
        let coeffs: Vec<F::Elem> = basis.iter().map(|_| field.random(&mut rng, bound)).collect();
        if template.combination(&basis, &coeffs).is_isomorphism() {
            return Ok(true);
        }
        if trial % 8 == 7 {
            bound = bound.saturating_mul(4);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{PrimeField, Rationals};
    use crate::quiver::{build_ladder, Quiver};

    fn two_level<F: Field>(field: &F, dims: [usize; 2], beta: &[Vec<i64>]) -> Representation<F> {
        let l = build_ladder(&Quiver::trivial(), 2).unwrap();
        let b = if dims[0] == 0 || dims[1] == 0 {
            Matrix::zeros(field, dims[1], dims[0])
        } else {
            Matrix::from_i64(field, beta)
        };
        Representation::new(l, field.clone(), dims.to_vec(), vec![b]).unwrap()
    }

    #[test]
    fn hom_dimensions_by_hand() {
        let q = Rationals;
        let kk = two_level(&q, [1, 1], &[vec![1]]);
        let ok = two_level(&q, [0, 1], &[]);
        assert_eq!(hom_dim(&kk, &ok).unwrap(), 0);
        assert_eq!(hom_dim(&ok, &kk).unwrap(), 1);
        let end = hom_space(&kk, &kk).unwrap();
        assert_eq!(end.len(), 1);
        assert!(end[0].is_isomorphism());
    }

    #[test]
    fn isomorphism_examples() {
        let q = Rationals;
        let one = two_level(&q, [1, 1], &[vec![1]]);
        let two = two_level(&q, [1, 1], &[vec![2]]);
        let zero = two_level(&q, [1, 1], &[vec![0]]);
        assert!(is_isomorphic(&one, &one).unwrap());
        assert!(is_isomorphic(&one, &two).unwrap());
        assert!(!is_isomorphic(&one, &zero).unwrap());
        let f = Morphism::new(
            one.clone(),
            two.clone(),
            vec![Matrix::from_i64(&q, &[vec![1]]), Matrix::from_i64(&q, &[vec![2]])],
        )
        .unwrap();
        assert!(f.is_isomorphism());

        let p = PrimeField::new(5).unwrap();
        let a = two_level(&p, [1, 1], &[vec![1]]);
        let b = two_level(&p, [1, 1], &[vec![3]]);
        assert!(is_isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn non_intertwining_is_rejected() {
        let q = Rationals;
        let one = two_level(&q, [1, 1], &[vec![1]]);
        let bad = Morphism::new(
            one.clone(),
            one,
            vec![Matrix::from_i64(&q, &[vec![1]]), Matrix::from_i64(&q, &[vec![2]])],
        );
        assert_eq!(bad.unwrap_err().id(), "validation");
    }
}
