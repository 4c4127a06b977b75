//! Semistability criteria selectable by name.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactla::FiniteField;
use crate::git::{hilbert_mumford_semistable, Locus};
use crate::rep::Representation;
use crate::stability::{theta_test, verdict, StabilityParams, SubMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CriterionVerdict {
    pub semistable: bool,
    /// `None` when the criterion only decides semistability.
    pub stable: Option<bool>,
}

pub trait StabilityCriterion<F: FiniteField>: Send + Sync {
    fn name(&self) -> &'static str;
    fn decide(&self, m: &Representation<F>, p: &StabilityParams) -> Result<CriterionVerdict>;
}

struct Slope {
    mode: Option<SubMode>,
    name: &'static str,
}

impl<F: FiniteField> StabilityCriterion<F> for Slope {
    fn name(&self) -> &'static str {
        self.name
    }
    fn decide(&self, m: &Representation<F>, p: &StabilityParams) -> Result<CriterionVerdict> {
        let p = match self.mode {
            Some(mode) => p.clone().with_mode(mode),
            None => p.clone(),
        };
        let v = verdict(m, &p)?;
        Ok(CriterionVerdict {
            semistable: v.semistable,
            stable: Some(v.stable),
        })
    }
}

struct Theta;

impl<F: FiniteField> StabilityCriterion<F> for Theta {
    fn name(&self) -> &'static str {
        "theta"
    }
    fn decide(&self, m: &Representation<F>, p: &StabilityParams) -> Result<CriterionVerdict> {
        let theta = p.theta(m.dims());
        Ok(CriterionVerdict {
            semistable: theta_test(m, &theta, p.convention, p.mode, p.cap, false)?,
            stable: Some(theta_test(m, &theta, p.convention, p.mode, p.cap, true)?),
        })
    }
}

struct HilbertMumford(Locus);

impl<F: FiniteField> StabilityCriterion<F> for HilbertMumford {
    fn name(&self) -> &'static str {
        match self.0 {
            Locus::Rel => "hilbert-mumford-rel",
            Locus::Fil => "hilbert-mumford-fil",
        }
    }
    fn decide(&self, m: &Representation<F>, p: &StabilityParams) -> Result<CriterionVerdict> {
        Ok(CriterionVerdict {
            semistable: hilbert_mumford_semistable(m, p, self.0)?.semistable,
            stable: None,
        })
    }
}

pub struct CriterionRegistry<F: FiniteField> {
    entries: BTreeMap<&'static str, Box<dyn StabilityCriterion<F>>>,
}

impl<F: FiniteField> CriterionRegistry<F> {
    pub fn empty() -> Self {
        CriterionRegistry {
            entries: BTreeMap::new(),
        }
    }

    /// `slope`, `theta`, `strict-slope`, `hilbert-mumford-rel`,
    /// `hilbert-mumford-fil`.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Slope { mode: None, name: "slope" }));
        r.register(Box::new(Theta));
        r.register(Box::new(Slope {
            mode: Some(SubMode::Strict),
            name: "strict-slope",
        }));
        r.register(Box::new(HilbertMumford(Locus::Rel)));
        r.register(Box::new(HilbertMumford(Locus::Fil)));
        r
    }

    pub fn register(&mut self, c: Box<dyn StabilityCriterion<F>>) {
        self.entries.insert(c.name(), c);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn StabilityCriterion<F>> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::Parse(format!("unknown criterion '{name}', expected one of {:?}", self.names())))
    }
}
