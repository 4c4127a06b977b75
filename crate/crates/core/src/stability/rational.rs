use crate::error::{Error, Result};
use crate::exactla::field::is_prime;
use crate::exactla::{Field, PrimeField, Rationals};
use crate::rep::Representation;
use crate::stability::{verdict, StabilityParams};

/// A verdict over ℚ obtained from reductions modulo several good primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub semistable: bool,
    pub stable: bool,
    pub primes: Vec<u32>,
}

const PRIMES_NEEDED: usize = 3;
const FIRST_PRIME: u32 = 5;
const LAST_PRIME: u32 = 200;

/// Reduce `m` modulo the first three primes at which every entry is
/// defined and the rank of every arrow matrix and horizontal composite is
/// preserved, decide there, and require agreement.
pub fn rational_verdict(m: &Representation<Rationals>, p: &StabilityParams) -> Result<OracleVerdict> {
    m.require_relations()?;
    let mut primes = Vec::new();
    let mut verdicts = Vec::new();
    for q in (FIRST_PRIME..=LAST_PRIME).filter(|&q| is_prime(q)) {
        let f = PrimeField::new(q)?;
        let Some(red) = m.map_field(&f, |x| f.reduce(x)) else {
            continue;
        };
        if !ranks_preserved(m, &red) {
            continue;
        }
        let v = verdict(&red, p)?;
        primes.push(q);
        verdicts.push((v.semistable, v.stable));
        if primes.len() == PRIMES_NEEDED {
            break;
        }
    }
    if primes.len() < PRIMES_NEEDED {
        return Err(Error::Inconclusive("not enough good primes for reduction".into()));
    }
    if verdicts.iter().any(|v| *v != verdicts[0]) {
        return Err(Error::Inconclusive(format!(
            "reductions modulo {primes:?} disagree: {verdicts:?}"
        )));
    }
    Ok(OracleVerdict {
        semistable: verdicts[0].0,
        stable: verdicts[0].1,
        primes,
    })
}

fn ranks_preserved<G: Field>(m: &Representation<Rationals>, red: &Representation<G>) -> bool {
    if m.mats().iter().zip(red.mats()).any(|(a, b)| a.rank() != b.rank()) {
        return false;
    }
    let l = m.ladder();
    (0..l.base().num_vertices()).all(|v| {
        (1..=l.levels()).all(|j| {
            (j..=l.levels()).all(|k| m.horizontal(j, k, v).rank() == red.horizontal(j, k, v).rank())
        })
    })
}
