//! Prime and semiprime submodules, the minimal prime spectrum and associated
//! primes.

use serde::Serialize;

use crate::analysis::ModuleAnalysis;
use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeKind {
    Prime,
    NotPrime,
    Semiprime,
    NotSemiprime,
}

/// Which submodules a prime or semiprime test quantified over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantifier {
    AllSubmodules,
    FullyInvariant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeWitness {
    pub kind: PrimeKind,
    /// `(K, L)` for a failed prime test, `[K]` for a failed semiprime test.
    pub offenders: Vec<usize>,
    pub quantifier: Quantifier,
}

impl PrimeWitness {
    pub fn holds(&self) -> bool {
        matches!(self.kind, PrimeKind::Prime | PrimeKind::Semiprime)
    }
}

/// The submodules the prime and semiprime conditions quantify over.
pub fn quantified_ids(a: &ModuleAnalysis) -> Result<(Quantifier, Vec<usize>)> {
    if a.is_self_projective()? {
        Ok((Quantifier::AllSubmodules, (0..a.lattice().len()).collect()))
    } else {
        Ok((Quantifier::FullyInvariant, a.fully_invariant_ids()?))
    }
}

fn check_candidate(a: &ModuleAnalysis, n: usize) -> Result<()> {
    if n == a.top() {
        return Err(Error::NotProper);
    }
    if !a.is_fully_invariant(n)? {
        return Err(Error::NotFullyInvariant);
    }
    Ok(())
}

pub fn is_prime_in(a: &ModuleAnalysis, p: usize) -> Result<PrimeWitness> {
    check_candidate(a, p)?;
    let (quantifier, ids) = quantified_ids(a)?;
    let outside: Vec<usize> = ids.into_iter().filter(|&k| !a.subset(k, p)).collect();
    let found = par::map_slice(a.config().execution, &outside, |&k| -> Result<Option<usize>> {
        for &l in &outside {
            if a.subset(a.product(k, l)?, p) {
                return Ok(Some(l));
            }
        }
        Ok(None)
    });
    for (i, hit) in found.into_iter().enumerate() {
        if let Some(l) = hit? {
            return Ok(PrimeWitness { kind: PrimeKind::NotPrime, offenders: vec![outside[i], l], quantifier });
        }
    }
    Ok(PrimeWitness { kind: PrimeKind::Prime, offenders: vec![], quantifier })
}

pub fn is_semiprime_in(a: &ModuleAnalysis, n: usize) -> Result<PrimeWitness> {
    check_candidate(a, n)?;
    let (quantifier, ids) = quantified_ids(a)?;
    for k in ids {
        if !a.subset(k, n) && a.subset(a.product(k, k)?, n) {
            return Ok(PrimeWitness { kind: PrimeKind::NotSemiprime, offenders: vec![k], quantifier });
        }
    }
    Ok(PrimeWitness { kind: PrimeKind::Semiprime, offenders: vec![], quantifier })
}

/// Module-level semiprimeness: `0` is semiprime in `M`. The zero module is
/// not semiprime, since `0` is not proper in it.
pub fn module_is_semiprime(a: &ModuleAnalysis) -> Result<PrimeWitness> {
    match is_semiprime_in(a, a.zero()) {
        Err(Error::NotProper) => Ok(PrimeWitness {
            kind: PrimeKind::NotSemiprime,
            offenders: vec![],
            quantifier: Quantifier::FullyInvariant,
        }),
        other => other,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub primes: Vec<usize>,
    pub minimal_primes: Vec<usize>,
    /// Intersection of the minimal primes (`M` when there are none).
    pub intersection: usize,
    /// Per minimal prime, some `K` with `Ann_M(K) = P`.
    pub annihilator_witnesses: Vec<Option<usize>>,
    /// Per minimal prime, `Ann^r_M(P)`, or `None` when its verification failed.
    pub right_annihilators: Vec<Option<usize>>,
    pub quantifier: Quantifier,
}

pub fn primes(a: &ModuleAnalysis) -> Result<Vec<usize>> {
    let candidates: Vec<usize> = a.fully_invariant_ids()?.into_iter().filter(|&p| p != a.top()).collect();
    let verdicts = par::map_slice(a.config().execution, &candidates, |&p| is_prime_in(a, p));
    let mut out = Vec::new();
    for (p, v) in candidates.into_iter().zip(verdicts) {
        if v?.holds() {
            out.push(p);
        }
    }
    Ok(out)
}

pub fn spec_min(a: &ModuleAnalysis) -> Result<SpectrumReport> {
    let (quantifier, _) = quantified_ids(a)?;
    let primes = primes(a)?;
    let minimal_primes: Vec<usize> = primes
        .iter()
        .copied()
        .filter(|&p| !primes.iter().any(|&q| q != p && a.subset(q, p)))
        .collect();
    let intersection = a.meet_all(minimal_primes.iter().copied());
    let mut annihilator_witnesses = Vec::new();
    let mut right_annihilators = Vec::new();
    for &p in &minimal_primes {
        annihilator_witnesses.push(crate::product::annihilator_witness(a, p)?);
        right_annihilators.push(match a.ann_right(p) {
            Ok(n) => Some(n),
            Err(Error::VerificationFailure(_)) => None,
            Err(e) => return Err(e),
        });
    }
    Ok(SpectrumReport { primes, minimal_primes, intersection, annihilator_witnesses, right_annihilators, quantifier })
}

/// `Ass_M(N)`: proper fully invariant `K` that annihilate every nonzero
/// submodule of some nonzero `L ⊆ N`.
pub fn ass_of(a: &ModuleAnalysis, n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for l in 1..a.lattice().len() {
        if !a.subset(l, n) {
            continue;
        }
        let k = a.ann_left(l)?;
        if k == a.top() || !a.is_fully_invariant(k)? {
            continue;
        }
        let mut constant = true;
        for atom in a.atoms_below(l) {
            if a.ann_left(atom)? != k {
                constant = false;
                break;
            }
        }
        if constant {
            out.push(k);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
