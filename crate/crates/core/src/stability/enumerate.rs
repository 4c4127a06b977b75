use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::exactla::subspace::{all_subspaces, canonical_basis, count_subspaces, Quotient};
use crate::exactla::{FiniteField, Matrix};
use crate::rep::{Representation, Subrep};

/// Which subobjects a test quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SubMode {
    /// Every arrow-closed subspace tuple.
    #[default]
    All,
    /// Only those with a filtered vertexwise quotient.
    Strict,
}

impl SubMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SubMode::All => "all",
            SubMode::Strict => "strict",
        }
    }
}

pub const DEFAULT_SUBREP_CAP: u128 = 10_000_000;

/// Upper bound on the search: the product over vertices of the number of
/// subspaces of each vertex space.
pub fn subrep_count_estimate<F: FiniteField>(m: &Representation<F>) -> u128 {
    let q = m.field().order();
    m.dims()
        .iter()
        .fold(1u128, |acc, &d| acc.saturating_mul(count_subspaces(q, d)))
}

pub(crate) fn check_cap<F: FiniteField>(m: &Representation<F>, cap: u128) -> Result<()> {
    let estimate = subrep_count_estimate(m);
    if estimate > cap {
        return Err(Error::Resource {
            what: "subrepresentations".into(),
            estimate,
            cap,
        });
    }
    Ok(())
}

/// Visit every subrepresentation (or every strict one), zero and full
/// included. Vertices are processed in topological order; at each vertex
/// the subspace must contain the images of the incoming arrows, so only
/// subspaces of the quotient by those images are tried.
pub fn for_each_subrep<F: FiniteField>(
    m: &Representation<F>,
    mode: SubMode,
    cap: u128,
    mut visit: impl FnMut(&Subrep<F>) -> ControlFlow<()>,
) -> Result<()> {
    check_cap(m, cap)?;
    let mut walker = Walker {
        m,
        mode,
        cache: HashMap::new(),
        basis: m.dims().iter().map(|&d| Matrix::zeros(m.field(), d, 0)).collect(),
    };
    let _ = walker.rec(0, &mut visit);
    Ok(())
}

pub fn enumerate_subreps<F: FiniteField>(m: &Representation<F>, mode: SubMode, cap: u128) -> Result<Vec<Subrep<F>>> {
    let mut out = Vec::new();
    for_each_subrep(m, mode, cap, |s| {
        out.push(s.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

struct Walker<'a, F: FiniteField> {
    m: &'a Representation<F>,
    mode: SubMode,
    cache: HashMap<usize, Vec<Matrix<F>>>,
    basis: Vec<Matrix<F>>,
}

impl<F: FiniteField> Walker<'_, F> {
    fn rec(&mut self, i: usize, visit: &mut impl FnMut(&Subrep<F>) -> ControlFlow<()>) -> ControlFlow<()> {
        let l = self.m.ladder().clone();
        let order = l.topological_order();
        if i == order.len() {
            let s = Subrep::from_canonical(self.basis.clone());
            if self.mode == SubMode::Strict && !s.is_strict(self.m) {
                return ControlFlow::Continue(());
            }
            return visit(&s);
        }
        let u = order[i];
        let field = self.m.field();
        let d = self.m.dim(u);
        let mut parts = Vec::new();
        for &a in l.incoming(u) {
            parts.push(self.m.mat(a).mul(&self.basis[l.arrow(a).src]));
        }
        let refs: Vec<&Matrix<F>> = parts.iter().collect();
        let forced = canonical_basis(&Matrix::hstack(field, d, &refs));
        let quo = Quotient::new(field, d, &forced);
        let r = quo.dim();
        let subs = self
            .cache
            .entry(r)
            .or_insert_with(|| all_subspaces(field, r))
            .clone();
        for sub in &subs {
            let lifted = quo.section.mul(sub);
            self.basis[u] = canonical_basis(&Matrix::hstack(field, d, &[&forced, &lifted]));
            self.rec(i + 1, visit)?;
        }
        ControlFlow::Continue(())
    }
}
