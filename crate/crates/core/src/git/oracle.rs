//! Brute-force checks over a finite field: the group `G = prod_w GL(d_w)`
//! is enumerated element by element, orbits are listed literally and
//! limits are followed through every two-step grading.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::exactla::subspace::{all_subspaces, Quotient};
use crate::exactla::{FiniteField, Matrix};
use crate::git::{ops_limit, Locus, OnePS};
use crate::rep::Representation;
use crate::stability::{is_semistable, subrep_count_estimate, StabilityParams};

pub const DEFAULT_ORBIT_CAP: u128 = 1_000_000;

/// `|GL_n(F_q)| = prod_{i<n} (q^n - q^i)`.
pub fn gl_order(q: u64, n: usize) -> u128 {
    let qn = (q as u128).saturating_pow(n as u32);
    (0..n).fold(1u128, |acc, i| acc.saturating_mul(qn - (q as u128).pow(i as u32)))
}

pub fn group_order(q: u64, dims: &[usize]) -> u128 {
    dims.iter().fold(1u128, |acc, &d| acc.saturating_mul(gl_order(q, d)))
}

/// Every invertible `n x n` matrix.
pub fn gl_elements<F: FiniteField>(field: &F, n: usize) -> Vec<Matrix<F>> {
    let q = field.order() as usize;
    let cells = n * n;
    let total = q.pow(cells as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let m = Matrix::from_fn(field, n, n, |_, _| {
            let x = field.element((c % q) as u64);
            c /= q;
            x
        });
        if m.is_invertible() {
            out.push(m);
        }
    }
    out
}

/// The representation as a flat key of field-element indices.
pub fn point_key<F: FiniteField>(m: &Representation<F>) -> Vec<u64> {
    m.mats()
        .iter()
        .flat_map(|a| a.entries().iter().map(|x| m.field().index_of(x)))
        .collect()
}

/// Literal orbit enumeration under `G`.
pub struct Orbits<F: FiniteField> {
    groups: Vec<Vec<Matrix<F>>>,
    canon: HashMap<Vec<u64>, Vec<u64>>,
}

impl<F: FiniteField> Orbits<F> {
    pub fn new(m: &Representation<F>, cap: u128) -> Result<Self> {
        let estimate = group_order(m.field().order(), m.dims());
        if estimate > cap {
            return Err(Error::Resource {
                what: "group elements".into(),
                estimate,
                cap,
            });
        }
        let mut by_dim: HashMap<usize, Vec<Matrix<F>>> = HashMap::new();
        let groups = m
            .dims()
            .iter()
            .map(|&d| by_dim.entry(d).or_insert_with(|| gl_elements(m.field(), d)).clone())
            .collect();
        Ok(Orbits {
            groups,
            canon: HashMap::new(),
        })
    }

    /// Every point `g·M`, without repeats.
    pub fn orbit(&self, m: &Representation<F>) -> Result<BTreeSet<Vec<u64>>> {
        let mut out = BTreeSet::new();
        let mut idx = vec![0usize; self.groups.len()];
        loop {
            let g: Vec<Matrix<F>> = idx.iter().enumerate().map(|(w, &i)| self.groups[w][i].clone()).collect();
            out.insert(point_key(&m.act(&g)?));
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return Ok(out);
                }
                idx[pos] += 1;
                if idx[pos] < self.groups[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    /// The smallest key in the orbit of `M`.
    pub fn canonical(&mut self, m: &Representation<F>) -> Result<Vec<u64>> {
        let key = point_key(m);
        if let Some(c) = self.canon.get(&key) {
            return Ok(c.clone());
        }
        let orbit = self.orbit(m)?;
        let c = orbit.iter().next().expect("orbit contains M").clone();
        for k in orbit {
            self.canon.insert(k, c.clone());
        }
        Ok(c)
    }
}

/// Every limit of `M` under a two-step grading that exists in `locus`.
pub fn two_step_limits<F: FiniteField>(m: &Representation<F>, locus: Locus, cap: u128) -> Result<Vec<Representation<F>>> {
    let estimate = subrep_count_estimate(m);
    if estimate > cap {
        return Err(Error::Resource {
            what: "two-step gradings".into(),
            estimate,
            cap,
        });
    }
    let field = m.field();
    let per_vertex: Vec<Vec<Matrix<F>>> = m.dims().iter().map(|&d| all_subspaces(field, d)).collect();
    let mut idx = vec![0usize; per_vertex.len()];
    let mut out = Vec::new();
    loop {
        let mut weights = Vec::new();
        let mut basis = Vec::new();
        for (w, &i) in idx.iter().enumerate() {
            let s = &per_vertex[w][i];
            let comp = Quotient::new(field, m.dim(w), s).section;
            let mut wt = vec![0; comp.cols()];
            wt.extend(std::iter::repeat_n(1, s.cols()));
            basis.push(Matrix::hstack(field, m.dim(w), &[&comp, s]));
            weights.push(wt);
        }
        if let Some(y) = ops_limit(m, &OnePS { weights, basis }, locus)? {
            out.push(y);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(out);
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

/// Orbits (as canonical keys) reachable from `M` by iterated two-step
/// limits that stay filtered and semistable. All of them lie in the
/// orbit closure of `M` inside the semistable filtered locus.
pub fn degeneration_closure<F: FiniteField>(
    orbits: &mut Orbits<F>,
    m: &Representation<F>,
    p: &StabilityParams,
) -> Result<BTreeSet<Vec<u64>>> {
    let mut seen = BTreeSet::new();
    seen.insert(orbits.canonical(m)?);
    let mut queue = VecDeque::from([m.clone()]);
    while let Some(x) = queue.pop_front() {
        for y in two_step_limits(&x, Locus::Fil, p.cap)? {
            if !is_semistable(&y, p)? {
                continue;
            }
            if seen.insert(orbits.canonical(&y)?) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// Literal closed-orbit test: no degeneration leaves the orbit of `M`.
pub fn orbit_closed_literal<F: FiniteField>(m: &Representation<F>, p: &StabilityParams, cap: u128) -> Result<bool> {
    let mut orbits = Orbits::new(m, cap)?;
    Ok(degeneration_closure(&mut orbits, m, p)?.len() == 1)
}

/// Literal GIT equivalence: the degeneration closures of `M` and `N`
/// share an orbit.
pub fn git_equivalent_literal<F: FiniteField>(
    m: &Representation<F>,
    n: &Representation<F>,
    p: &StabilityParams,
    cap: u128,
) -> Result<bool> {
    if m.dims() != n.dims() {
        return Ok(false);
    }
    let mut orbits = Orbits::new(m, cap)?;
    let a = degeneration_closure(&mut orbits, m, p)?;
    let b = degeneration_closure(&mut orbits, n, p)?;
    Ok(!a.is_disjoint(&b))
}

/// Every relation-satisfying point of dimension vector `dims`.
pub fn enumerate_points<F: FiniteField>(
    ladder: &std::sync::Arc<crate::quiver::LadderQuiver>,
    field: &F,
    dims: &[usize],
    cap: u128,
) -> Result<Vec<Representation<F>>> {
    let shapes: Vec<(usize, usize)> = ladder.arrows().iter().map(|a| (dims[a.tgt], dims[a.src])).collect();
    let cells: u32 = shapes.iter().map(|(r, c)| (r * c) as u32).sum();
    let q = field.order();
    let estimate = (q as u128).checked_pow(cells).unwrap_or(u128::MAX);
    if estimate > cap {
        return Err(Error::Resource {
            what: "points".into(),
            estimate,
            cap,
        });
    }
    let mut out = Vec::new();
    for code in 0..estimate {
        let mut c = code;
        let mats = shapes
            .iter()
            .map(|&(r, k)| {
                Matrix::from_fn(field, r, k, |_, _| {
                    let x = field.element((c % q as u128) as u64);
                    c /= q as u128;
                    x
                })
            })
            .collect();
        let m = Representation::new(ladder.clone(), field.clone(), dims.to_vec(), mats)?;
        if m.check_relations() {
            out.push(m);
        }
    }
    Ok(out)
}
