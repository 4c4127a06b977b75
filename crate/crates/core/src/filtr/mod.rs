//! Strict filtrations: Harder–Narasimhan, strict Jordan–Hölder, maximal
//! flags and their graded objects.

use std::ops::ControlFlow;

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::{Field, FiniteField, Matrix};
use crate::rep::{is_isomorphic, Representation, Subrep};
use crate::stability::{destabilizing_subrep_seeded, for_each_subrep, verdict, StabilityParams, SubMode};

/// `0 = M_0 ⊂ M_1 ⊂ ... ⊂ M_k = M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration<F: Field> {
    pub object: Representation<F>,
    /// Includes the zero and the full subobject.
    pub steps: Vec<Subrep<F>>,
    pub strict: bool,
}

impl<F: Field> Filtration<F> {
    /// Checks the chain is ascending with distinct steps and records strictness.
    pub fn new(object: Representation<F>, steps: Vec<Subrep<F>>) -> Result<Self> {
        if steps.first().is_none_or(|s| !s.is_zero()) || steps.last().is_none_or(|s| !s.is_full(&object)) {
            return Err(Error::validation("a filtration must run from 0 to the whole object"));
        }
        for w in steps.windows(2) {
            if !w[1].contains(&w[0]) || w[0] == w[1] {
                return Err(Error::validation("filtration steps must strictly increase"));
            }
        }
        let strict = strict_chain(&object, &steps);
        Ok(Filtration { object, steps, strict })
    }

    /// `0 ⊂ M`, or just `0` when `M = 0`.
    pub fn trivial(object: Representation<F>) -> Self {
        let mut steps = vec![Subrep::zero(&object)];
        if !object.is_zero() {
            steps.push(Subrep::full(&object));
        }
        Filtration {
            object,
            steps,
            strict: true,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The quotients `M_i / M_{i-1}` in filtration order.
    pub fn quotients(&self) -> Vec<Representation<F>> {
        self.steps
            .windows(2)
            .map(|w| {
                let upper = w[1].representation(&self.object);
                let lower_in_upper: Vec<Matrix<F>> = w[1]
                    .bases()
                    .iter()
                    .zip(w[0].bases())
                    .map(|(u, l)| u.solve(l).expect("steps are nested"))
                    .collect();
                Subrep::from_closed(lower_in_upper).quotient(&upper).0
            })
            .collect()
    }

    pub fn quotient_dims(&self) -> Vec<Vec<usize>> {
        self.steps
            .windows(2)
            .map(|w| w[1].dims().iter().zip(w[0].dims()).map(|(a, b)| a - b).collect())
            .collect()
    }

    pub fn slopes(&self, p: &StabilityParams) -> Result<Vec<Rational64>> {
        self.quotient_dims().iter().map(|d| p.slope(d)).collect()
    }
}

fn strict_chain<F: Field>(m: &Representation<F>, steps: &[Subrep<F>]) -> bool {
    steps.iter().all(|s| s.is_strict(m))
}

/// Direct sum of the quotients of a strict filtration, summands sorted by
/// dimension vector and then matrix data.
pub fn gr<F: Field>(f: &Filtration<F>) -> Result<Representation<F>> {
    if !f.strict {
        return Err(Error::validation("associated graded needs a strict filtration"));
    }
    let mut parts = f.quotients();
    parts.sort_by_cached_key(|q| (q.dims().clone(), format!("{:?}", q.mats())));
    Representation::direct_sum_all(f.object.ladder().clone(), f.object.field().clone(), &parts)
}

/// Greedy Harder–Narasimhan filtration: repeatedly split off the maximal
/// destabilizing strict subobject of the running quotient.
pub fn hn_filtration<F: FiniteField>(m: &Representation<F>, p: &StabilityParams) -> Result<Filtration<F>> {
    hn_filtration_seeded(m, p, None)
}

pub fn hn_filtration_seeded<F: FiniteField>(
    m: &Representation<F>,
    p: &StabilityParams,
    seed: Option<u64>,
) -> Result<Filtration<F>> {
    m.require_filtered("input")?;
    p.check_shape(m.ladder())?;
    if !p.is_slope_admissible(m.ladder()) {
        return Err(Error::validation("degree must be nonnegative below the sink level"));
    }
    let mut steps = vec![Subrep::zero(m)];
    let mut round = 0u64;
    loop {
        let cur = steps.last().expect("nonempty").clone();
        if cur.is_full(m) {
            break;
        }
        let (q, pi) = cur.quotient(m);
        let next = match destabilizing_subrep_seeded(&q, p, seed.map(|s| s.wrapping_add(round)))? {
            Some(d) => d.preimage_under(&pi),
            None => Subrep::full(m),
        };
        steps.push(next);
        round += 1;
    }
    Filtration::new(m.clone(), steps)
}

/// Subobjects used by maximal flags: nonzero strict ones, restricted to
/// slope `μ(M)` when stability parameters are given.
fn flag_candidates<F: FiniteField>(
    m: &Representation<F>,
    p: Option<&StabilityParams>,
    cap: u128,
) -> Result<Vec<Subrep<F>>> {
    let mut out = Vec::new();
    let target = match p {
        Some(p) if p.rank_of(m.dims()) > 0 => Some(p.slope(m.dims())?),
        _ => None,
    };
    for_each_subrep(m, SubMode::Strict, cap, |s| {
        if s.is_zero() {
            return ControlFlow::Continue(());
        }
        let keep = match (p, target) {
            (Some(p), Some(mu)) => {
                let d = s.dims();
                let rk = p.rank_of(&d);
                // rank-zero subobjects have slope μ exactly when their degree vanishes
                if rk == 0 {
                    p.degree_of(&d) == 0
                } else {
                    p.slope(&d).expect("positive rank") == mu
                }
            }
            _ => true,
        };
        if keep {
            out.push(s.clone());
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// The maximal flag, built bottom-up from minimal nonzero strict
/// subobjects. With stability parameters the flag is taken in the
/// fixed-slope subcategory: every step must have slope `μ(M)`.
pub fn maximal_flag<F: FiniteField>(m: &Representation<F>, p: Option<&StabilityParams>) -> Result<Filtration<F>> {
    maximal_flag_seeded(m, p, None)
}

pub fn maximal_flag_seeded<F: FiniteField>(
    m: &Representation<F>,
    p: Option<&StabilityParams>,
    seed: Option<u64>,
) -> Result<Filtration<F>> {
    m.require_filtered("input")?;
    let cap = p.map_or(crate::stability::DEFAULT_SUBREP_CAP, |p| p.cap);
    let mut steps = vec![Subrep::zero(m)];
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    loop {
        let cur = steps.last().expect("nonempty").clone();
        if cur.is_full(m) {
            break;
        }
        let (q, pi) = cur.quotient(m);
        let mut cands = flag_candidates(&q, p, cap)?;
        if let Some(rng) = rng.as_mut() {
            cands.shuffle(rng);
        }
        let min = cands
            .iter()
            .min_by_key(|s| s.total_dim())
            .cloned()
            .unwrap_or_else(|| Subrep::full(&q));
        steps.push(min.preimage_under(&pi));
    }
    Filtration::new(m.clone(), steps)
}

pub fn gr_max<F: FiniteField>(m: &Representation<F>, p: Option<&StabilityParams>) -> Result<Representation<F>> {
    gr(&maximal_flag(m, p)?)
}

/// A strict filtration with stable quotients of slope `μ(M)`, found by
/// backtracking over candidate first steps in increasing rank order.
pub fn jh_filtration<F: FiniteField>(m: &Representation<F>, p: &StabilityParams) -> Result<Option<Filtration<F>>> {
    m.require_filtered("input")?;
    if m.is_zero() {
        return Ok(Some(Filtration::trivial(m.clone())));
    }
    let mu = p.slope(m.dims())?;
    match jh_steps(m, p, mu)? {
        Some(chain) => Ok(Some(Filtration::new(m.clone(), chain)?)),
        None => Ok(None),
    }
}

/// Steps of a strict JH filtration of `m`, expressed in `m`.
fn jh_steps<F: FiniteField>(m: &Representation<F>, p: &StabilityParams, mu: Rational64) -> Result<Option<Vec<Subrep<F>>>> {
    if m.is_zero() {
        return Ok(Some(vec![Subrep::zero(m)]));
    }
    let mut cands: Vec<Subrep<F>> = Vec::new();
    for_each_subrep(m, SubMode::Strict, p.cap, |s| {
        if !s.is_zero() {
            cands.push(s.clone());
        }
        ControlFlow::Continue(())
    })?;
    cands.sort_by_key(|s| p.rank_of(&s.dims()));
    for s in cands {
        let d = s.dims();
        if p.rank_of(&d) == 0 || p.slope(&d)? != mu {
            continue;
        }
        if !verdict(&s.representation(m), p)?.stable {
            continue;
        }
        let (q, pi) = s.quotient(m);
        if let Some(rest) = jh_steps(&q, p, mu)? {
            let mut chain = vec![Subrep::zero(m)];
            chain.extend(rest.iter().map(|t| t.preimage_under(&pi)));
            return Ok(Some(chain));
        }
    }
    Ok(None)
}

pub fn s_equivalent<F: FiniteField>(
    m: &Representation<F>,
    n: &Representation<F>,
    p: Option<&StabilityParams>,
) -> Result<bool> {
    is_isomorphic(&gr_max(m, p)?, &gr_max(n, p)?)
}

/// `None` when either object has no strict JH filtration.
pub fn sjh_equivalent<F: FiniteField>(
    m: &Representation<F>,
    n: &Representation<F>,
    p: &StabilityParams,
) -> Result<Option<bool>> {
    let (Some(a), Some(b)) = (jh_filtration(m, p)?, jh_filtration(n, p)?) else {
        return Ok(None);
    };
    Ok(Some(is_isomorphic(&gr(&a)?, &gr(&b)?)?))
}

pub fn is_polystable<F: FiniteField>(m: &Representation<F>, p: &StabilityParams) -> Result<bool> {
    match jh_filtration(m, p)? {
        Some(f) => is_isomorphic(m, &gr(&f)?),
        None => Ok(false),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointType {
    /// The S-equivalence class contains an object with a strict JH filtration.
    Type1,
    Type2,
}

impl PointType {
    pub fn as_str(self) -> &'static str {
        match self {
            PointType::Type1 => "type1",
            PointType::Type2 => "type2",
        }
    }
}

pub fn classify_point_type<F: FiniteField>(m: &Representation<F>, p: &StabilityParams) -> Result<PointType> {
    let g = gr_max(m, Some(p))?;
    Ok(if jh_filtration(&g, p)?.is_some() {
        PointType::Type1
    } else {
        PointType::Type2
    })
}
