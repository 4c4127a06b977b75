//! Projective presentations `P̃₁ -> P̃₀` and the determinantal semi-invariants
//! `Θ_γ(M) = det Hom(γ, M)`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::subspace::Quotient;
use crate::exactla::{Field, Matrix};
use crate::quiver::{normal_paths, LadderQuiver, NormalPath, PathElement};
use crate::rep::{cokernel_ambient, cokernel_filtered, indecomposable_projective, kernel, Morphism, Representation};
use crate::stability::{Convention, StabilityParams};

/// A map `⊕ U1_w P'_w -> ⊕ U0_w P'_w` between sums of indecomposable
/// projectives. Slots are listed vertex by vertex; `gamma[r][c]` is a path
/// element from the vertex of column slot `c` to that of row slot `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation<F: Field> {
    ladder: Arc<LadderQuiver>,
    field: F,
    u0: Vec<usize>,
    u1: Vec<usize>,
    gamma: Vec<Vec<PathElement<F>>>,
}

fn slots(u: &[usize]) -> Vec<usize> {
    u.iter().enumerate().flat_map(|(w, &k)| std::iter::repeat_n(w, k)).collect()
}

impl<F: Field> Presentation<F> {
    pub fn new(
        ladder: Arc<LadderQuiver>,
        field: F,
        u0: Vec<usize>,
        u1: Vec<usize>,
        gamma: Vec<Vec<PathElement<F>>>,
    ) -> Result<Self> {
        let n = ladder.num_vertices();
        if u0.len() != n || u1.len() != n {
            return Err(Error::shape("multiplicities need one entry per vertex"));
        }
        let (rows, cols) = (slots(&u1), slots(&u0));
        if gamma.len() != rows.len() || gamma.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::shape(format!(
                "gamma must be {}x{} in slots",
                rows.len(),
                cols.len()
            )));
        }
        for (r, row) in gamma.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                if e.source() != cols[c] || e.target() != rows[r] {
                    return Err(Error::validation(format!(
                        "entry ({r},{c}) runs {} -> {}, expected {} -> {}",
                        ladder.vertex_name(e.source()),
                        ladder.vertex_name(e.target()),
                        ladder.vertex_name(cols[c]),
                        ladder.vertex_name(rows[r])
                    )));
                }
            }
        }
        Ok(Presentation {
            ladder,
            field,
            u0,
            u1,
            gamma,
        })
    }

    /// `U0 = U1 = 0`.
    pub fn empty(ladder: Arc<LadderQuiver>, field: F) -> Self {
        let n = ladder.num_vertices();
        Presentation {
            ladder,
            field,
            u0: vec![0; n],
            u1: vec![0; n],
            gamma: Vec::new(),
        }
    }

    pub fn ladder(&self) -> &Arc<LadderQuiver> {
        &self.ladder
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn u0(&self) -> &[usize] {
        &self.u0
    }
    pub fn u1(&self) -> &[usize] {
        &self.u1
    }
    pub fn gamma(&self) -> &[Vec<PathElement<F>>] {
        &self.gamma
    }
    pub fn row_slots(&self) -> Vec<usize> {
        slots(&self.u1)
    }
    pub fn col_slots(&self) -> Vec<usize> {
        slots(&self.u0)
    }

    /// `U0_w - U1_w` per vertex.
    pub fn weight(&self) -> Vec<i64> {
        self.u0.iter().zip(&self.u1).map(|(&a, &b)| a as i64 - b as i64).collect()
    }
}

/// `⊕ U_w P'_w` with, per vertex, the offset of each slot's block.
fn projective_sum<F: Field>(ladder: &Arc<LadderQuiver>, field: &F, u: &[usize]) -> Result<(Representation<F>, Vec<Vec<usize>>)> {
    let s = slots(u);
    let parts = s
        .iter()
        .map(|&w| indecomposable_projective(ladder, field, w))
        .collect::<Result<Vec<_>>>()?;
    let offsets = (0..ladder.num_vertices())
        .map(|x| {
            let mut acc = 0;
            parts
                .iter()
                .map(|p| {
                    let o = acc;
                    acc += p.dim(x);
                    o
                })
                .collect()
        })
        .collect();
    Ok((Representation::direct_sum_all(ladder.clone(), field.clone(), &parts)?, offsets))
}

/// `γ` as a morphism `P̃₁ -> P̃₀`: the generator of row slot `r` goes to
/// `Σ_c γ[r][c]` in the column slots.
pub fn realize<F: Field>(pres: &Presentation<F>) -> Result<Morphism<F>> {
    let (l, f) = (&pres.ladder, &pres.field);
    let (p1, off1) = projective_sum(l, f, &pres.u1)?;
    let (p0, off0) = projective_sum(l, f, &pres.u0)?;
    let (rows, cols) = (pres.row_slots(), pres.col_slots());
    let comps = (0..l.num_vertices())
        .map(|x| {
            let mut m = Matrix::zeros(f, p0.dim(x), p1.dim(x));
            for (r, &w) in rows.iter().enumerate() {
                for (j, q) in normal_paths(l, w, x).iter().enumerate() {
                    for (c, &v) in cols.iter().enumerate() {
                        let basis = normal_paths(l, v, x);
                        for (p, coeff) in pres.gamma[r][c].terms() {
                            let pq = p.then(l, q).expect("entry ends where q starts");
                            let i = basis.binary_search(&pq).expect("normal path");
                            let (row, col) = (off0[x][c] + i, off1[x][r] + j);
                            let cur = m.get(row, col).clone();
                            m.set(row, col, f.add(&cur, coeff));
                        }
                    }
                }
            }
            m
        })
        .collect();
    Morphism::new(p1, p0, comps)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalPresentation<F: Field> {
    pub presentation: Presentation<F>,
    /// The realized `γ` is injective.
    pub projective_dimension_at_most_one: bool,
}

/// Top of `m`: a complement of `rad m(w) = Σ images of incoming arrows`
/// at each vertex.
fn top_lifts<F: Field>(m: &Representation<F>) -> Vec<Matrix<F>> {
    let l = m.ladder();
    (0..l.num_vertices())
        .map(|w| {
            let images: Vec<Matrix<F>> = l.incoming(w).iter().map(|&a| m.mat(a).clone()).collect();
            let refs: Vec<&Matrix<F>> = images.iter().collect();
            let rad = Matrix::hstack(m.field(), m.dim(w), &refs).image();
            Quotient::new(m.field(), m.dim(w), &rad).section
        })
        .collect()
}

pub fn minimal_presentation<F: Field>(n: &Representation<F>) -> Result<MinimalPresentation<F>> {
    n.require_relations()?;
    let (l, f) = (n.ladder(), n.field());
    let lifts = top_lifts(n);
    let u0: Vec<usize> = lifts.iter().map(|t| t.cols()).collect();
    let (p0, off0) = projective_sum(l, f, &u0)?;
    let col_slots = slots(&u0);
    let lift_of: Vec<Matrix<F>> = lifts
        .iter()
        .flat_map(|t| (0..t.cols()).map(|i| t.select_columns(&[i])))
        .collect();
    let comps = (0..l.num_vertices())
        .map(|x| {
            let mut m = Matrix::zeros(f, n.dim(x), p0.dim(x));
            for (c, &w) in col_slots.iter().enumerate() {
                for (j, q) in normal_paths(l, w, x).iter().enumerate() {
                    m.set_block(0, off0[x][c] + j, &n.path_matrix(q).mul(&lift_of[c]));
                }
            }
            m
        })
        .collect();
    let cover = Morphism::new(p0.clone(), n.clone(), comps)?;
    debug_assert!(cover.is_surjective());
    let k = kernel(&cover);
    let krep = k.representation(&p0);
    let ktop = top_lifts(&krep);
    let u1: Vec<usize> = ktop.iter().map(|t| t.cols()).collect();
    let mut gamma = Vec::new();
    for (x, t) in ktop.iter().enumerate() {
        let gens = k.basis(x).mul(t);
        for i in 0..gens.cols() {
            let row = col_slots
                .iter()
                .enumerate()
                .map(|(c, &w)| {
                    let mut e = PathElement::zero(f, w, x);
                    for (j, p) in normal_paths(l, w, x).into_iter().enumerate() {
                        let term = PathElement::from_path(f, l, p, gens.get(off0[x][c] + j, i).clone());
                        e = e.add(&term).expect("same endpoints");
                    }
                    e
                })
                .collect();
            gamma.push(row);
        }
    }
    let presentation = Presentation::new(l.clone(), f.clone(), u0, u1, gamma)?;
    let pd = realize(&presentation)?.is_injective();
    Ok(MinimalPresentation {
        presentation,
        projective_dimension_at_most_one: pd,
    })
}

/// Multiplicities satisfying the weight condition at `n` with the least
/// total: `U0 - U1 = -s·n·θ` where `s` is the sign of the convention.
pub fn admissible_multiplicities(theta: &[i64], convention: Convention, n: i64) -> (Vec<usize>, Vec<usize>) {
    theta
        .iter()
        .map(|&t| {
            let w = -convention.sign() * n * t;
            (w.max(0) as usize, (-w).max(0) as usize)
        })
        .unzip()
}

/// `U0_w - U1_w = -s·n·θ_w` at every vertex, with `θ` derived from `d`
/// and `s = +1` for the sub-nonneg convention and `-1` otherwise.
pub fn weight_check<F: Field>(pres: &Presentation<F>, p: &StabilityParams, d: &[usize], n: i64) -> bool {
    if n <= 0 || d.len() != pres.u0.len() {
        return false;
    }
    let theta = p.theta(d);
    pres.weight()
        .iter()
        .zip(&theta)
        .all(|(&u, &t)| u == -p.convention.sign() * n * t)
}

/// `Σ_w (U0_w - U1_w)·d_w`.
pub fn weight_pairing<F: Field>(pres: &Presentation<F>, d: &[usize]) -> i64 {
    pres.weight().iter().zip(d).map(|(&u, &x)| u * x as i64).sum()
}

fn require_compatible<F: Field>(pres: &Presentation<F>, m: &Representation<F>) -> Result<()> {
    if !(Arc::ptr_eq(&pres.ladder, m.ladder()) || *pres.ladder == **m.ladder()) || pres.field != *m.field() {
        return Err(Error::validation("presentation and representation live on different ladders or fields"));
    }
    Ok(())
}

fn entry_matrix<F: Field>(m: &Representation<F>, e: &PathElement<F>) -> Matrix<F> {
    let f = m.field();
    let mut acc = Matrix::zeros(f, m.dim(e.target()), m.dim(e.source()));
    for (p, c) in e.terms() {
        acc = acc.add(&m.path_matrix(p).scale(c));
    }
    acc
}

/// `Hom(P̃₀, M) -> Hom(P̃₁, M)`: block `(r, c)` is `M(γ[r][c])`.
pub fn hom_matrix<F: Field>(pres: &Presentation<F>, m: &Representation<F>) -> Result<Matrix<F>> {
    require_compatible(pres, m)?;
    let (rows, cols) = (pres.row_slots(), pres.col_slots());
    let roff = offsets(&rows, m);
    let coff = offsets(&cols, m);
    let mut out = Matrix::zeros(m.field(), roff[rows.len()], coff[cols.len()]);
    for r in 0..rows.len() {
        for c in 0..cols.len() {
            out.set_block(roff[r], coff[c], &entry_matrix(m, &pres.gamma[r][c]));
        }
    }
    Ok(out)
}

fn offsets<F: Field>(s: &[usize], m: &Representation<F>) -> Vec<usize> {
    let mut out = vec![0];
    for &w in s {
        out.push(out.last().unwrap() + m.dim(w));
    }
    out
}

/// `Θ_γ(M) = det Hom(γ, M)`.
pub fn theta_value<F: Field>(pres: &Presentation<F>, m: &Representation<F>) -> Result<F::Elem> {
    let h = hom_matrix(pres, m)?;
    if !h.is_square() {
        return Err(Error::shape(format!(
            "Hom(γ, M) is {}x{}, not square",
            h.rows(),
            h.cols()
        )));
    }
    h.det()
}

/// `χ_U(g) = Π_w det(g_w)^{U0_w - U1_w}`.
pub fn chi_u<F: Field>(pres: &Presentation<F>, g: &[Matrix<F>]) -> Result<F::Elem> {
    if g.len() != pres.u0.len() {
        return Err(Error::shape("one group component per vertex"));
    }
    let f = &pres.field;
    let mut acc = f.one();
    for (gw, u) in g.iter().zip(pres.weight()) {
        let d = gw.det()?;
        let x = f
            .pow(&d, u)
            .ok_or_else(|| Error::validation("group component is not invertible"))?;
        acc = f.mul(&acc, &x);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertificateBounds {
    pub n_max: i64,
    /// Longest path allowed in a `γ` entry.
    pub entry_degree: usize,
    /// Above this many candidates per `n`, switch to random trials.
    pub exhaustive_limit: u128,
    pub random_trials: usize,
    pub seed: u64,
}

impl Default for CertificateBounds {
    fn default() -> Self {
        CertificateBounds {
            n_max: 2,
            entry_degree: 1,
            exhaustive_limit: 100_000,
            random_trials: 2_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateOutcome<F: Field> {
    Found {
        presentation: Presentation<F>,
        n: i64,
        value: F::Elem,
    },
    /// Nothing nonvanishing within the bounds; says nothing about `M`.
    Inconclusive { tried: u128 },
}

/// Look for a weight-admissible `γ` with `Θ_γ(M) != 0`. Entries are first
/// single paths with coefficient 0 or ±1 (exhaustively when small enough),
/// otherwise random integer combinations of the allowed paths.
pub fn certificate_search<F: Field>(
    m: &Representation<F>,
    p: &StabilityParams,
    bounds: &CertificateBounds,
) -> Result<CertificateOutcome<F>> {
    p.check_shape(m.ladder())?;
    let (l, f) = (m.ladder(), m.field());
    let theta = p.theta(m.dims());
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    let mut tried = 0u128;
    for n in 1..=bounds.n_max {
        let (u0, u1) = admissible_multiplicities(&theta, p.convention, n);
        let (rows, cols) = (slots(&u1), slots(&u0));
        let roff = offsets(&rows, m);
        let coff = offsets(&cols, m);
        // per entry: the allowed paths and their matrices on `m`
        let paths: Vec<Vec<(NormalPath, Matrix<F>)>> = rows
            .iter()
            .flat_map(|&w| {
                cols.iter().map(move |&v| {
                    normal_paths(l, v, w)
                        .into_iter()
                        .filter(|q| q.length() <= bounds.entry_degree)
                        .map(|q| {
                            let mq = m.path_matrix(&q);
                            (q, mq)
                        })
                        .collect()
                })
            })
            .collect();
        let ncols = cols.len();
        let assemble = |choice: &[Vec<(usize, F::Elem)>]| -> Matrix<F> {
            let mut h = Matrix::zeros(f, roff[rows.len()], coff[ncols]);
            for (e, terms) in choice.iter().enumerate() {
                let (r, c) = (e / ncols.max(1), e % ncols.max(1));
                let mut block = Matrix::zeros(f, m.dim(rows[r]), m.dim(cols[c]));
                for (k, coeff) in terms {
                    block = block.add(&paths[e][*k].1.scale(coeff));
                }
                h.set_block(roff[r], coff[c], &block);
            }
            h
        };
        let found = |choice: &[Vec<(usize, F::Elem)>], value: F::Elem| -> Result<CertificateOutcome<F>> {
            let gamma = (0..rows.len())
                .map(|r| {
                    (0..ncols)
                        .map(|c| {
                            let e = r * ncols + c;
                            let mut el = PathElement::zero(f, cols[c], rows[r]);
                            for (k, coeff) in &choice[e] {
                                let t = PathElement::from_path(f, l, paths[e][*k].0.clone(), coeff.clone());
                                el = el.add(&t).expect("same endpoints");
                            }
                            el
                        })
                        .collect()
                })
                .collect();
            Ok(CertificateOutcome::Found {
                presentation: Presentation::new(l.clone(), f.clone(), u0.clone(), u1.clone(), gamma)?,
                n,
                value,
            })
        };
        // options per entry: 0, then +q and -q for each allowed path q
        let options: Vec<usize> = paths.iter().map(|ps| 1 + 2 * ps.len()).collect();
        let total = options.iter().fold(1u128, |acc, &k| acc.saturating_mul(k as u128));
        let decode = |idx: &[usize]| -> Vec<Vec<(usize, F::Elem)>> {
            idx.iter()
                .map(|&i| match i {
                    0 => Vec::new(),
                    i => vec![((i - 1) / 2, if i % 2 == 1 { f.one() } else { f.neg(&f.one()) })],
                })
                .collect()
        };
        if total <= bounds.exhaustive_limit {
            let mut idx = vec![0usize; options.len()];
            loop {
                tried += 1;
                let choice = decode(&idx);
                let v = assemble(&choice).det()?;
                if !f.is_zero(&v) {
                    return found(&choice, v);
                }
                let mut pos = 0;
                while pos < idx.len() {
                    idx[pos] += 1;
                    if idx[pos] < options[pos] {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    break;
                }
            }
        } else {
            for _ in 0..bounds.random_trials {
                tried += 1;
                let choice: Vec<Vec<(usize, F::Elem)>> = paths
                    .iter()
                    .map(|ps| {
                        (0..ps.len())
                            .map(|k| (k, f.from_i64(rng.gen_range(-3..=3))))
                            .filter(|(_, c)| !f.is_zero(c))
                            .collect()
                    })
                    .collect();
                let v = assemble(&choice).det()?;
                if !f.is_zero(&v) {
                    return found(&choice, v);
                }
            }
        }
    }
    Ok(CertificateOutcome::Inconclusive { tried })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KappaClass {
    /// `γ` is injective with a filtered cokernel.
    ProjectiveDimensionOne,
    /// `γ` is injective and its cokernel is killed by κ.
    EpiMonic,
    /// `γ` is not injective, or its cokernel is neither filtered nor torsion.
    Other,
}

impl KappaClass {
    pub fn as_str(self) -> &'static str {
        match self {
            KappaClass::ProjectiveDimensionOne => "projective-dimension-one",
            KappaClass::EpiMonic => "epi-monic",
            KappaClass::Other => "other",
        }
    }
}

/// The projectives are already filtered, so κ leaves the presentation
/// unchanged; what changes is how its cokernel is read in the filtered
/// category.
pub fn kappa_presentation<F: Field>(pres: &Presentation<F>) -> Result<(Presentation<F>, KappaClass)> {
    let g = realize(pres)?;
    let class = if !g.is_injective() {
        KappaClass::Other
    } else if cokernel_filtered(&g)?.is_zero() {
        KappaClass::EpiMonic
    } else if cokernel_ambient(&g).is_filtered()? {
        KappaClass::ProjectiveDimensionOne
    } else {
        KappaClass::Other
    };
    Ok((pres.clone(), class))
}

/// `(Θ_{γ_0}(M) : ... : Θ_{γ_N}(M))`.
pub fn theta_coordinates<F: Field>(m: &Representation<F>, gammas: &[Presentation<F>]) -> Result<Vec<F::Elem>> {
    gammas
        .iter()
        .enumerate()
        .map(|(i, g)| {
            theta_value(g, m).map_err(|e| match e {
                Error::Shape(s) => Error::Shape(format!("presentation {i}: {s}")),
                Error::Validation(s) => Error::Validation(format!("presentation {i}: {s}")),
                other => other,
            })
        })
        .collect()
}

/// Equal up to one common nonzero scalar, both tuples nonzero.
pub fn projectively_equal<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some(i) = b.iter().position(|x| !field.is_zero(x)) else {
        return false;
    };
    let Some(lambda) = field.div(&a[i], &b[i]) else {
        return false;
    };
    !field.is_zero(&lambda) && a.iter().zip(b).all(|(x, y)| *x == field.mul(&lambda, y))
}
