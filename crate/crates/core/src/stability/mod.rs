//! Rank and degree functions, slopes, the derived weight θ, and
//! semistability decided by exhaustive subrepresentation enumeration.

mod enumerate;
mod rational;

pub use enumerate::{enumerate_subreps, for_each_subrep, subrep_count_estimate, SubMode, DEFAULT_SUBREP_CAP};
pub use rational::{rational_verdict, OracleVerdict};

use std::cmp::Ordering;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::{Field, FiniteField};
use crate::quiver::LadderQuiver;
use crate::rep::{Representation, Subrep};

/// Degree function Θ, one integer per ladder vertex.
pub type DegreeVector = Vec<i64>;

/// Nonnegative rank weights `r_w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankWeights(Vec<i64>);

impl RankWeights {
    /// Rejects negative weights and weights violating
    /// `sum_{j>=k} r_(j,v) > 0` for some column `v` and level `k`.
    pub fn new(ladder: &LadderQuiver, r: Vec<i64>) -> Result<Self> {
        if r.len() != ladder.num_vertices() {
            return Err(Error::shape(format!(
                "{} rank weights for {} vertices",
                r.len(),
                ladder.num_vertices()
            )));
        }
        if r.iter().any(|&x| x < 0) {
            return Err(Error::validation("rank weights must be nonnegative"));
        }
        for v in 0..ladder.base().num_vertices() {
            for k in 1..=ladder.levels() {
                let tail: i64 = (k..=ladder.levels()).map(|j| r[ladder.vertex_index(j, v)]).sum();
                if tail <= 0 {
                    return Err(Error::validation(format!(
                        "rank weights vanish on levels {k}..{} of column {}",
                        ladder.levels(),
                        ladder.base().vertices()[v]
                    )));
                }
            }
        }
        Ok(RankWeights(r))
    }

    /// `r ≡ 1`, the weights of `rk_dim`.
    pub fn ones(ladder: &LadderQuiver) -> Self {
        RankWeights(vec![1; ladder.num_vertices()])
    }

    /// Weight 1 on the sink level and 0 elsewhere (`rk_s`).
    pub fn sink(ladder: &LadderQuiver) -> Self {
        RankWeights(
            (0..ladder.num_vertices())
                .map(|w| i64::from(ladder.is_sink_level(w)))
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn scaled(&self, c: i64) -> Self {
        RankWeights(self.0.iter().map(|x| x * c).collect())
    }
}

/// Sign convention for the subobject inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// `θ(d(M')) >= 0`, i.e. `μ(M') <= μ(M)`.
    #[default]
    SubNonneg,
    /// `θ(d(M')) <= 0`, i.e. `μ(M') >= μ(M)`.
    SubNonpos,
}

impl Convention {
    pub const BOTH: [Convention; 2] = [Convention::SubNonneg, Convention::SubNonpos];

    pub fn sign(self) -> i64 {
        match self {
            Convention::SubNonneg => 1,
            Convention::SubNonpos => -1,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::SubNonneg => "subgeq",
            Convention::SubNonpos => "subleq",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subgeq" | "sub_nonneg" => Ok(Convention::SubNonneg),
            "subleq" | "sub_nonpos" => Ok(Convention::SubNonpos),
            _ => Err(Error::Parse(format!("unknown convention '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityParams {
    pub degree: DegreeVector,
    pub rank: RankWeights,
    pub convention: Convention,
    pub mode: SubMode,
    pub cap: u128,
}

impl StabilityParams {
    pub fn new(degree: DegreeVector, rank: RankWeights) -> Self {
        StabilityParams {
            degree,
            rank,
            convention: Convention::default(),
            mode: SubMode::default(),
            cap: DEFAULT_SUBREP_CAP,
        }
    }

    pub fn with_convention(mut self, c: Convention) -> Self {
        self.convention = c;
        self
    }

    pub fn with_mode(mut self, mode: SubMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn degree_of(&self, d: &[usize]) -> i64 {
        dot(&self.degree, d)
    }

    pub fn rank_of(&self, d: &[usize]) -> i64 {
        rank_of(d, &self.rank)
    }

    pub fn slope(&self, d: &[usize]) -> Result<Rational64> {
        slope(d, self)
    }

    pub fn theta(&self, d: &[usize]) -> Vec<i64> {
        derive_theta(&self.degree, &self.rank, d)
    }

    /// Degree nonnegative below the sink level, after orienting by the
    /// convention. Needed for Harder–Narasimhan filtrations.
    pub fn is_slope_admissible(&self, ladder: &LadderQuiver) -> bool {
        let oriented: Vec<i64> = self.degree.iter().map(|t| t * self.convention.sign()).collect();
        is_slope_admissible(&oriented, ladder)
    }

    pub(crate) fn check_shape(&self, ladder: &LadderQuiver) -> Result<()> {
        let n = ladder.num_vertices();
        if self.degree.len() != n || self.rank.0.len() != n {
            return Err(Error::shape(format!("stability vectors must have {n} entries")));
        }
        Ok(())
    }

    /// Slope of a subobject oriented so that the active convention reads
    /// "no subobject is above the object". `None` for a rank-zero subobject
    /// of degree zero, which compares as equal.
    fn oriented(&self, d: &[usize]) -> Option<ExtSlope> {
        let deg = self.convention.sign() * self.degree_of(d);
        let rk = self.rank_of(d);
        match (rk, deg.cmp(&0)) {
            (0, Ordering::Less) => Some(ExtSlope::NegInf),
            (0, Ordering::Equal) => None,
            (0, Ordering::Greater) => Some(ExtSlope::PosInf),
            _ => Some(ExtSlope::Finite(Rational64::new(deg, rk))),
        }
    }
}

/// Slopes extended by the limits used for rank-zero subobjects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtSlope {
    NegInf,
    Finite(Rational64),
    PosInf,
}

fn dot(x: &[i64], d: &[usize]) -> i64 {
    x.iter().zip(d).map(|(a, &b)| a * b as i64).sum()
}

/// `sum_w r_w d_w`.
pub fn rank_of(d: &[usize], rk: &RankWeights) -> i64 {
    dot(&rk.0, d)
}

/// `sum_v dim M(l, v) + sum rank M(beta)`, defined on filtered objects.
pub fn rk_dim_filtered<F: Field>(m: &Representation<F>) -> Result<usize> {
    m.require_filtered("input")?;
    let l = m.ladder();
    let sink: usize = (0..l.base().num_vertices())
        .map(|v| m.dim(l.vertex_index(l.levels(), v)))
        .sum();
    let betas: usize = l.betas().map(|b| m.mat(b).rank()).sum();
    Ok(sink + betas)
}

/// `Θ(d) / rk(d)`.
pub fn slope(d: &[usize], p: &StabilityParams) -> Result<Rational64> {
    let rk = p.rank_of(d);
    if rk == 0 {
        return Err(Error::Domain("slope of a rank-zero dimension vector".into()));
    }
    Ok(Rational64::new(p.degree_of(d), rk))
}

/// `θ_w = Θ(d) r_w - rk(d) Θ_w`.
pub fn derive_theta(degree: &[i64], rk: &RankWeights, d: &[usize]) -> Vec<i64> {
    let big_theta = dot(degree, d);
    let r = rank_of(d, rk);
    degree
        .iter()
        .zip(&rk.0)
        .map(|(&t, &rw)| big_theta * rw - r * t)
        .collect()
}

/// `Θ_(j,v) >= 0` below the sink level.
pub fn is_slope_admissible(degree: &[i64], ladder: &LadderQuiver) -> bool {
    (0..ladder.num_vertices()).all(|w| ladder.is_sink_level(w) || degree[w] >= 0)
}

/// Semistability and stability verdicts with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict<F: Field> {
    pub semistable: bool,
    pub stable: bool,
    /// A nonzero subobject violating semistability, if any; otherwise a
    /// proper one violating stability, if any.
    pub witness: Option<Subrep<F>>,
}

/// Slope-form verdict: every nonzero subobject (in `p.mode`) is compared
/// with `μ(M)` under `p.convention`.
pub fn verdict<F: FiniteField>(m: &Representation<F>, p: &StabilityParams) -> Result<Verdict<F>> {
    p.check_shape(m.ladder())?;
    let mu = p
        .oriented(m.dims())
        .filter(|_| p.rank_of(m.dims()) > 0)
        .ok_or_else(|| Error::Domain("slope of a rank-zero representation".into()))?;
    let mut unstable_witness = None;
    let mut semi_witness = None;
    enumerate::for_each_subrep(m, p.mode, p.cap, |s| {
        if s.is_zero() {
            return ControlFlow::Continue(());
        }
        let cmp = p.oriented(&s.dims()).map_or(Ordering::Equal, |x| x.cmp(&mu));
        match cmp {
            Ordering::Greater => {
                semi_witness = Some(s.clone());
                return ControlFlow::Break(());
            }
            Ordering::Equal if !s.is_full(m) && unstable_witness.is_none() => {
                unstable_witness = Some(s.clone());
            }
            _ => {}
        }
        ControlFlow::Continue(())
    })?;
    Ok(match semi_witness {
        Some(w) => Verdict {
            semistable: false,
            stable: false,
            witness: Some(w),
        },
        None => Verdict {
            semistable: true,
            stable: unstable_witness.is_none(),
            witness: unstable_witness,
        },
    })
}

pub fn is_semistable<F: FiniteField>(m: &Representation<F>, p: &StabilityParams) -> Result<bool> {
    Ok(verdict(m, p)?.semistable)
}

pub fn is_stable<F: FiniteField>(m: &Representation<F>, p: &StabilityParams) -> Result<bool> {
    Ok(verdict(m, p)?.stable)
}

/// θ-form: `θ(d(M)) = 0` and every nonzero subobject has `θ(d(M')) >= 0`
/// (or `<= 0` under `SubNonpos`), strictly for proper ones when `strict`.
pub fn theta_test<F: FiniteField>(
    m: &Representation<F>,
    theta: &[i64],
    convention: Convention,
    mode: SubMode,
    cap: u128,
    strict: bool,
) -> Result<bool> {
    if theta.len() != m.dims().len() {
        return Err(Error::shape("θ must have one entry per vertex"));
    }
    if dot(theta, m.dims()) != 0 {
        return Ok(false);
    }
    let mut ok = true;
    enumerate::for_each_subrep(m, mode, cap, |s| {
        if s.is_zero() {
            return ControlFlow::Continue(());
        }
        let t = convention.sign() * dot(theta, &s.dims());
        let proper = !s.is_full(m);
        if t < 0 || (strict && proper && t == 0) {
            ok = false;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    Ok(ok)
}

pub fn is_theta_semistable<F: FiniteField>(m: &Representation<F>, theta: &[i64], p: &StabilityParams) -> Result<bool> {
    theta_test(m, theta, p.convention, p.mode, p.cap, false)
}

pub fn is_theta_stable<F: FiniteField>(m: &Representation<F>, theta: &[i64], p: &StabilityParams) -> Result<bool> {
    theta_test(m, theta, p.convention, p.mode, p.cap, true)
}

/// The strict subobject of largest slope, and of largest rank among
/// those, provided its slope exceeds `μ(M)` (in the orientation of the
/// convention). Ties are broken by enumeration order.
pub fn destabilizing_subrep<F: FiniteField>(m: &Representation<F>, p: &StabilityParams) -> Result<Option<Subrep<F>>> {
    destabilizing_subrep_seeded(m, p, None)
}

/// As [`destabilizing_subrep`], but candidates are shuffled with `seed`
/// before the first maximum is taken. Used to check that the answer does
/// not depend on the search order.
pub fn destabilizing_subrep_seeded<F: FiniteField>(
    m: &Representation<F>,
    p: &StabilityParams,
    seed: Option<u64>,
) -> Result<Option<Subrep<F>>> {
    p.check_shape(m.ladder())?;
    if p.rank_of(m.dims()) == 0 {
        return Err(Error::Domain("slope of a rank-zero representation".into()));
    }
    let mu = p.oriented(m.dims()).expect("positive rank");
    let mut cands: Vec<(ExtSlope, i64, Subrep<F>)> = Vec::new();
    enumerate::for_each_subrep(m, SubMode::Strict, p.cap, |s| {
        if let Some(x) = p.oriented(&s.dims()) {
            if x > mu {
                cands.push((x, p.rank_of(&s.dims()), s.clone()));
            }
        }
        ControlFlow::Continue(())
    })?;
    if let Some(seed) = seed {
        cands.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut best: Option<(ExtSlope, i64, Subrep<F>)> = None;
    for c in cands {
        if best.as_ref().is_none_or(|b| (c.0, c.1) > (b.0, b.1)) {
            best = Some(c);
        }
    }
    Ok(best.map(|b| b.2))
}
