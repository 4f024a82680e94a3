//! The endomorphism ring `S = End(M)`, its radicals, continuity and Goldie
//! data.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::analysis::ModuleAnalysis;
use crate::error::{cap, Error, Result};
use crate::hom::{are_isomorphic, Homomorphism};
use crate::product::annihilator_set;
use crate::ring::{FiniteRing, Ideal};
use crate::spectrum::module_is_semiprime;

/// `End(M)` as a ring. `mul(i, j)` is `map(i) ∘ map(j)`, applying `j` first.
#[derive(Debug, Clone)]
pub struct EndoRing {
    ring: FiniteRing,
    maps: Vec<Homomorphism>,
    index: HashMap<Homomorphism, usize>,
}

impl EndoRing {
    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn map(&self, i: usize) -> &Homomorphism {
        &self.maps[i]
    }

    pub fn maps(&self) -> &[Homomorphism] {
        &self.maps
    }

    pub fn index_of(&self, h: &Homomorphism) -> Option<usize> {
        self.index.get(h).copied()
    }
}

pub fn endomorphism_ring(a: &ModuleAnalysis) -> Result<EndoRing> {
    let maps = a.endomorphisms()?.to_vec();
    let limit = a.caps().ring_order;
    if maps.len() > limit {
        return Err(cap("endomorphism ring order", limit));
    }
    let m = a.module();
    let zero = Homomorphism::new(vec![m.zero(); m.order()]);
    let one = Homomorphism::identity(m.order());
    let ring = FiniteRing::from_elements(
        &format!("End({})", m.name()),
        maps.clone(),
        &zero,
        &one,
        |f, g| Homomorphism::new(f.map().iter().zip(g.map()).map(|(&x, &y)| m.add(x, y)).collect()),
        |f, g| f.after(g),
    );
    let index = maps.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect();
    Ok(EndoRing { ring, maps, index })
}

fn left_invertible(r: &FiniteRing) -> Vec<bool> {
    let one = r.one();
    r.elements().map(|x| r.elements().any(|y| r.mul(y, x) == one)).collect()
}

/// `{x : 1 − a·x` is left invertible for every `a}`.
pub fn jacobson_radical(r: &FiniteRing) -> Ideal {
    let inv = left_invertible(r);
    let bits = bits_of(r.order(), r.elements().filter(|&x| r.elements().all(|a| inv[r.sub(r.one(), r.mul(a, x))])));
    debug_assert!(r.is_ideal(&bits));
    Ideal::from_bits(bits)
}

fn bits_of(n: usize, it: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    b.extend(it);
    b
}

/// `Δ = {f ∈ S : ker f ⊆_ess M}`.
pub fn delta_ideal(a: &ModuleAnalysis, s: &EndoRing) -> Result<Ideal> {
    let end = a.end()?;
    let bits = bits_of(s.ring.order(), (0..end.maps.len()).filter(|&i| a.is_essential(end.kernels[i])));
    if !s.ring.is_ideal(&bits) {
        return Err(Error::VerificationFailure("essential-kernel endomorphisms do not form an ideal".into()));
    }
    Ok(Ideal::from_bits(bits))
}

/// `Z_r(S)`: elements whose right annihilator is an essential right ideal,
/// tested against every nonzero principal right ideal.
pub fn right_singular_ideal(r: &FiniteRing, limit: usize) -> Result<Ideal> {
    if r.order() > limit {
        return Err(cap("ring order", limit));
    }
    let zero = r.zero();
    let bits = bits_of(
        r.order(),
        r.elements().filter(|&x| {
            r.elements()
                .filter(|&y| y != zero)
                .all(|y| r.elements().any(|t| r.mul(y, t) != zero && r.mul(x, r.mul(y, t)) == zero))
        }),
    );
    if !r.is_ideal(&bits) {
        return Err(Error::VerificationFailure("right singular set is not an ideal".into()));
    }
    Ok(Ideal::from_bits(bits))
}

/// Least `t` with `I^t = 0` for the two-sided ideal generated by `set`, or
/// `None` when the powers stabilize above zero.
pub fn ideal_nilpotency(r: &FiniteRing, set: impl IntoIterator<Item = usize>) -> Option<usize> {
    let ideal = r.ideal_generated(set);
    let base = ideal.elements();
    let mut current = ideal.bits().clone();
    let mut t = 1;
    loop {
        if current.ones().all(|x| x == r.zero()) {
            return Some(t);
        }
        let next = r.additive_closure(current.ones().flat_map(|x| base.iter().map(move |&y| r.mul(x, y))));
        if next == current {
            return None;
        }
        current = next;
        t += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Continuity {
    pub c1: bool,
    pub c2: bool,
    /// A submodule essential in no direct summand.
    pub c1_witness: Option<usize>,
    /// `(N, D)`: `N` is not a summand but is isomorphic to the summand `D`.
    pub c2_witness: Option<(usize, usize)>,
}

impl Continuity {
    pub fn holds(&self) -> bool {
        self.c1 && self.c2
    }
}

pub fn summand_ids(a: &ModuleAnalysis) -> Vec<usize> {
    (0..a.lattice().len()).filter(|&d| a.complement_of(d).is_some()).collect()
}

pub fn is_continuous(a: &ModuleAnalysis) -> Result<Continuity> {
    let summands = summand_ids(a);
    let c1_witness =
        (0..a.lattice().len()).find(|&n| !summands.iter().any(|&d| a.is_essential_in(n, d)));
    let mut c2_witness = None;
    'outer: for n in 0..a.lattice().len() {
        if summands.binary_search(&n).is_ok() {
            continue;
        }
        let size = a.sub(n).len();
        let nm = a.sub_module(n);
        for &d in &summands {
            if a.sub(d).len() == size && are_isomorphic(&nm, &a.sub_module(d), a.caps())?.is_some() {
                c2_witness = Some((n, d));
                break 'outer;
            }
        }
    }
    Ok(Continuity { c1: c1_witness.is_none(), c2: c2_witness.is_none(), c1_witness, c2_witness })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KNonsingular {
    pub holds: bool,
    /// A nonzero endomorphism with essential kernel.
    pub witness: Option<Homomorphism>,
}

pub fn is_k_nonsingular(a: &ModuleAnalysis) -> Result<KNonsingular> {
    let end = a.end()?;
    let witness = (0..end.maps.len())
        .find(|&i| end.images[i] != a.zero() && a.is_essential(end.kernels[i]))
        .map(|i| end.maps[i].clone());
    Ok(KNonsingular { holds: witness.is_none(), witness })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadicalNilpotency {
    pub ideal: String,
    pub elements: Vec<usize>,
    pub index: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldieReport {
    pub udim: usize,
    pub acc: bool,
    pub longest_annihilator_chain: usize,
    pub semiprime: bool,
    pub is_goldie: bool,
    pub continuity: Continuity,
    pub k_nonsingular: bool,
    pub radical_nilpotency: Vec<RadicalNilpotency>,
}

/// Assembles the Goldie data of `M`. The radical entries need `End(M)`
/// within the ring cap and are left empty otherwise.
pub fn goldie_data(a: &ModuleAnalysis) -> Result<GoldieReport> {
    let ann = annihilator_set(a)?;
    let semiprime = module_is_semiprime(a)?.holds();
    let continuity = is_continuous(a)?;
    let k_nonsingular = is_k_nonsingular(a)?.holds;
    let mut radical_nilpotency = Vec::new();
    match endomorphism_ring(a) {
        Ok(s) => {
            let r = s.ring();
            let mut push = |name: &str, ideal: Ideal| {
                let index = ideal_nilpotency(r, ideal.elements());
                radical_nilpotency.push(RadicalNilpotency { ideal: name.into(), elements: ideal.elements(), index });
            };
            push("J(S)", jacobson_radical(r));
            push("Delta", delta_ideal(a, &s)?);
            push("Z_r(S)", right_singular_ideal(r, a.caps().ring_order)?);
        }
        Err(Error::CapExceeded { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(GoldieReport {
        udim: a.uniform_dimension(),
        acc: ann.acc_holds,
        longest_annihilator_chain: ann.longest_chain,
        semiprime,
        is_goldie: ann.acc_holds,
        continuity,
        k_nonsingular,
        radical_nilpotency,
    })
}
