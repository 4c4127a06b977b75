//! One-parameter subgroups of `prod_w GL(d_w)`, their limits, the pairing
//! with the character `χ_θ`, and Hilbert–Mumford and closed-orbit tests.

pub mod oracle;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactla::subspace::{all_subspaces, Quotient};
use crate::exactla::{Field, FiniteField, Matrix};
use crate::filtr::gr_max;
use crate::rep::{is_isomorphic, Representation, Subrep};
use crate::stability::{subrep_count_estimate, Convention, StabilityParams};

/// Where a limit point must land.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Locus {
    /// Relation-satisfying points.
    Rel,
    /// Relation-satisfying points with injective horizontal maps.
    #[default]
    Fil,
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Locus::Rel => "rel",
            Locus::Fil => "fil",
        })
    }
}

impl FromStr for Locus {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rel" => Ok(Locus::Rel),
            "fil" => Ok(Locus::Fil),
            _ => Err(Error::Parse(format!("unknown locus '{s}'"))),
        }
    }
}

/// A one-parameter subgroup: at each vertex, a basis (columns) and one
/// integer weight per basis vector. `λ(t)` scales the `i`-th basis vector
/// of `M(w)` by `t^{weights[w][i]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnePS<F: Field> {
    pub weights: Vec<Vec<i64>>,
    pub basis: Vec<Matrix<F>>,
}

impl<F: Field> OnePS<F> {
    pub fn new(weights: Vec<Vec<i64>>, basis: Vec<Matrix<F>>) -> Result<Self> {
        if weights.len() != basis.len() {
            return Err(Error::shape("one weight list and one basis per vertex"));
        }
        for (w, b) in weights.iter().zip(&basis) {
            if b.shape() != (w.len(), w.len()) {
                return Err(Error::shape("basis must be square with one column per weight"));
            }
        }
        Ok(OnePS { weights, basis })
    }

    /// Diagonal weights in the standard basis.
    pub fn diagonal(field: &F, weights: Vec<Vec<i64>>) -> Self {
        let basis = weights.iter().map(|w| Matrix::identity(field, w.len())).collect();
        OnePS { weights, basis }
    }

    /// Every weight equal to `c`.
    pub fn constant(field: &F, dims: &[usize], c: i64) -> Self {
        Self::diagonal(field, dims.iter().map(|&d| vec![c; d]).collect())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.weights.iter().map(|w| w.len()).collect()
    }

    fn check_against(&self, m: &Representation<F>) -> Result<Vec<Matrix<F>>> {
        if self.dims() != *m.dims() {
            return Err(Error::shape("one-parameter subgroup does not match the dimension vector"));
        }
        self.basis
            .iter()
            .map(|b| b.inverse().ok_or_else(|| Error::validation("one-parameter subgroup basis is singular")))
            .collect()
    }
}

/// `lim_{t->0} λ(t)·M`, or `None` if it does not exist in the locus.
///
/// In the graded basis the block of `M(a)` from source weight `n` to target
/// weight `m` is scaled by `t^{m-n}`: blocks with `m < n` must vanish and
/// the limit keeps the blocks with `m = n`. The result is expressed in the
/// original coordinates.
pub fn ops_limit<F: Field>(m: &Representation<F>, l: &OnePS<F>, locus: Locus) -> Result<Option<Representation<F>>> {
    let inv = l.check_against(m)?;
    let mut mats = Vec::with_capacity(m.mats().len());
    for (i, a) in m.ladder().arrows().iter().enumerate() {
        let (s, t) = (a.src, a.tgt);
        let graded = inv[t].mul(m.mat(i)).mul(&l.basis[s]);
        let mut kept = Matrix::zeros(m.field(), graded.rows(), graded.cols());
        for r in 0..graded.rows() {
            for c in 0..graded.cols() {
                let x = graded.get(r, c);
                if m.field().is_zero(x) {
                    continue;
                }
                match l.weights[t][r].cmp(&l.weights[s][c]) {
                    std::cmp::Ordering::Less => return Ok(None),
                    std::cmp::Ordering::Equal => kept.set(r, c, x.clone()),
                    std::cmp::Ordering::Greater => {}
                }
            }
        }
        mats.push(l.basis[t].mul(&kept).mul(&inv[s]));
    }
    let limit = m.with_mats(mats)?;
    if locus == Locus::Fil && !limit.betas_injective() {
        return Ok(None);
    }
    Ok(Some(limit))
}

/// `M_{>=n}` for every weight `n`, from `M` down to `0`, without repeats.
pub fn filtration_from_ops<F: Field>(m: &Representation<F>, l: &OnePS<F>) -> Result<Vec<Subrep<F>>> {
    if ops_limit(m, l, Locus::Rel)?.is_none() {
        return Err(Error::validation("the one-parameter subgroup has no limit"));
    }
    let mut levels: Vec<i64> = l.weights.iter().flatten().copied().collect();
    levels.sort_unstable();
    levels.dedup();
    let mut chain = vec![Subrep::full(m)];
    for &n in &levels {
        let basis = l
            .basis
            .iter()
            .zip(&l.weights)
            .map(|(b, w)| {
                let cols: Vec<usize> = (0..w.len()).filter(|&i| w[i] >= n).collect();
                b.select_columns(&cols)
            })
            .collect();
        let s = Subrep::new(m, basis)?;
        if chain.last() != Some(&s) {
            chain.push(s);
        }
    }
    let zero = Subrep::zero(m);
    if chain.last() != Some(&zero) {
        chain.push(zero);
    }
    Ok(chain)
}

/// A one-parameter subgroup inducing a descending chain
/// `C_0 ⊇ C_1 ⊇ ... ⊇ C_k`: vectors of `C_i` outside `C_{i+1}` get
/// weight `i`. `M` and `0` are added at the ends when missing.
pub fn ops_from_filtration<F: Field>(m: &Representation<F>, chain: &[Subrep<F>]) -> Result<OnePS<F>> {
    for s in chain {
        if s.dims().len() != m.dims().len() || !s.is_closed(m) {
            return Err(Error::validation("chain member is not a subrepresentation"));
        }
    }
    let mut c: Vec<Subrep<F>> = chain.to_vec();
    if c.first().is_none_or(|s| !s.is_full(m)) {
        c.insert(0, Subrep::full(m));
    }
    if c.last().is_none_or(|s| !s.is_zero()) {
        c.push(Subrep::zero(m));
    }
    for w in c.windows(2) {
        if !w[0].contains(&w[1]) {
            return Err(Error::validation("chain is not descending"));
        }
    }
    let field = m.field();
    let k = c.len() - 1;
    let mut weights = Vec::new();
    let mut basis = Vec::new();
    for v in 0..m.dims().len() {
        let mut cols = Matrix::zeros(field, m.dim(v), 0);
        let mut wts = Vec::new();
        for i in (0..k).rev() {
            let ext = Matrix::hstack(field, m.dim(v), &[&cols, c[i].basis(v)]).image();
            for _ in cols.cols()..ext.cols() {
                wts.push(i as i64);
            }
            cols = ext;
        }
        weights.push(wts);
        basis.push(cols);
    }
    OnePS::new(weights, basis)
}

/// `⟨χ_θ, λ⟩ = sum_w θ_w · (sum of the weights at w)`.
pub fn pairing_chi_lambda<F: Field>(theta: &[i64], l: &OnePS<F>, d: &[usize]) -> Result<i64> {
    if theta.len() != l.weights.len() || l.dims() != d {
        return Err(Error::shape("θ, weights and dimension vector disagree"));
    }
    Ok(theta
        .iter()
        .zip(&l.weights)
        .map(|(t, w)| t * w.iter().sum::<i64>())
        .sum())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HmVerdict<F: Field> {
    pub semistable: bool,
    /// A subgroup whose limit exists but whose pairing has the wrong sign.
    pub witness: Option<OnePS<F>>,
    /// Number of subgroups with an existing limit that were checked.
    pub checked: usize,
}

fn pairing_ok(convention: Convention, value: i64) -> bool {
    match convention {
        Convention::SubNonneg => value >= 0,
        Convention::SubNonpos => value <= 0,
    }
}

/// Hilbert–Mumford test over every two-step grading: for each tuple of
/// subspaces `S_w ⊆ M(w)` (weight 1 on `S`, 0 on a complement) plus the
/// constant subgroups of weight ±1, whenever the limit exists in `locus`
/// the pairing must have the sign fixed by the convention.
pub fn hilbert_mumford_semistable<F: FiniteField>(
    m: &Representation<F>,
    p: &StabilityParams,
    locus: Locus,
) -> Result<HmVerdict<F>> {
    let estimate = subrep_count_estimate(m);
    if estimate > p.cap {
        return Err(Error::Resource {
            what: "two-step gradings".into(),
            estimate,
            cap: p.cap,
        });
    }
    let field = m.field();
    let theta = p.theta(m.dims());
    let mut checked = 0;
    let mut test = |l: OnePS<F>| -> Result<Option<OnePS<F>>> {
        if ops_limit(m, &l, locus)?.is_none() {
            return Ok(None);
        }
        checked += 1;
        let v = pairing_chi_lambda(&theta, &l, m.dims())?;
        Ok((!pairing_ok(p.convention, v)).then_some(l))
    };
    for c in [1, -1] {
        if let Some(w) = test(OnePS::constant(field, m.dims(), c))? {
            return Ok(HmVerdict {
                semistable: false,
                witness: Some(w),
                checked,
            });
        }
    }
    let per_vertex: Vec<Vec<Matrix<F>>> = m.dims().iter().map(|&d| all_subspaces(field, d)).collect();
    let mut idx = vec![0usize; per_vertex.len()];
    loop {
        let mut weights = Vec::with_capacity(idx.len());
        let mut basis = Vec::with_capacity(idx.len());
        for (w, &i) in idx.iter().enumerate() {
            let s = &per_vertex[w][i];
            let d = m.dim(w);
            let comp = Quotient::new(field, d, s).section;
            let mut wt = vec![0; comp.cols()];
            wt.extend(std::iter::repeat_n(1, s.cols()));
            basis.push(Matrix::hstack(field, d, &[&comp, s]));
            weights.push(wt);
        }
        if let Some(w) = test(OnePS { weights, basis })? {
            return Ok(HmVerdict {
                semistable: false,
                witness: Some(w),
                checked,
            });
        }
        // odometer over the subspace tuples
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(HmVerdict {
                    semistable: true,
                    witness: None,
                    checked,
                });
            }
            idx[pos] += 1;
            if idx[pos] < per_vertex[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Closed orbit in the filtered semistable locus iff `M ≅ gr^max(M)`,
/// with the maximal flag taken at the slope of `M`.
pub fn is_closed_orbit_point<F: FiniteField>(m: &Representation<F>, p: &StabilityParams) -> Result<bool> {
    is_isomorphic(m, &gr_max(m, Some(p))?)
}

/// GIT equivalence of two semistable filtered points, decided as
/// S-equivalence.
pub fn git_equivalent<F: FiniteField>(m: &Representation<F>, n: &Representation<F>, p: &StabilityParams) -> Result<bool> {
    if m.dims() != n.dims() {
        return Ok(false);
    }
    crate::filtr::s_equivalent(m, n, Some(p))
}
