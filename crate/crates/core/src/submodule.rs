//! Submodules as canonical element sets, and the full submodule lattice.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::config::Caps;
use crate::error::{cap, Result};
use crate::module::FiniteModule;

/// A submodule, stored as the set of element indices it contains.
///
/// Ordering is by size first, then lexicographically on the sorted elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Submodule {
    bits: FixedBitSet,
}

impl Submodule {
    pub(crate) fn from_bits(bits: FixedBitSet) -> Self {
        Submodule { bits }
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn elements(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_zero(&self) -> bool {
        self.len() <= 1
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn is_subset(&self, other: &Submodule) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection(&self, other: &Submodule) -> Submodule {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Submodule { bits }
    }

    /// Greedy generating set: repeatedly the least element not yet generated.
    pub fn generators(&self, m: &FiniteModule) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = submodule_generate(m, []);
        for x in self.bits.ones() {
            if !span.contains(x) {
                gens.push(x);
                span = sum(m, &span, &submodule_generate(m, [x]));
            }
        }
        gens
    }
}

impl fmt::Debug for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sub{:?}", self.elements())
    }
}

impl Ord for Submodule {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.bits.ones().cmp(other.bits.ones()))
    }
}

impl PartialOrd for Submodule {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Submodule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(s)
    }
}

/// Additive subgroup generated by `seeds`.
pub(crate) fn additive_closure(m: &FiniteModule, seeds: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(m.order());
    set.insert(m.zero());
    let mut members = vec![m.zero()];
    let mut queue: Vec<usize> = seeds.into_iter().collect();
    while let Some(x) = queue.pop() {
        if set.contains(x) {
            continue;
        }
        // adjoining x to a subgroup H: H + <x> = union of cosets H + kx
        let base = members.len();
        let mut coset = x;
        loop {
            if set.contains(coset) {
                break;
            }
            for i in 0..base {
                let y = m.add(members[i], coset);
                set.insert(y);
                members.push(y);
            }
            coset = m.add(coset, x);
        }
        queue.retain(|&q| !set.contains(q));
    }
    set
}

/// Least submodule containing `seed`.
pub fn submodule_generate(m: &FiniteModule, seed: impl IntoIterator<Item = usize>) -> Submodule {
    let mut orbit = FixedBitSet::with_capacity(m.order());
    for x in seed {
        for r in m.ring().elements() {
            orbit.insert(m.act(r, x));
        }
    }
    Submodule { bits: additive_closure(m, orbit.ones()) }
}

/// Submodule generated by an arbitrary set of elements given as a bitset.
pub(crate) fn generate_bits(m: &FiniteModule, seed: &FixedBitSet) -> Submodule {
    submodule_generate(m, seed.ones())
}

/// `a + b`.
pub fn sum(m: &FiniteModule, a: &Submodule, b: &Submodule) -> Submodule {
    if a.is_subset(b) {
        return b.clone();
    }
    if b.is_subset(a) {
        return a.clone();
    }
    let mut bits = FixedBitSet::with_capacity(m.order());
    let bs = b.elements();
    for x in a.bits.ones() {
        for &y in &bs {
            bits.insert(m.add(x, y));
        }
    }
    Submodule { bits }
}

/// Checks the submodule axioms for an arbitrary element set.
pub fn is_submodule(m: &FiniteModule, set: &FixedBitSet) -> bool {
    if !set.contains(m.zero()) {
        return false;
    }
    let members: Vec<usize> = set.ones().collect();
    members.iter().all(|&x| {
        members.iter().all(|&y| set.contains(m.add(x, y))) && m.ring().elements().all(|r| set.contains(m.act(r, x)))
    })
}

/// The complete submodule lattice of a module.
#[derive(Clone)]
pub struct SubmoduleLattice {
    subs: Vec<Submodule>,
    index: HashMap<FixedBitSet, usize>,
    cyclic_of: Vec<usize>,
}

impl fmt::Debug for SubmoduleLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.subs).finish()
    }
}

impl SubmoduleLattice {
    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn get(&self, id: usize) -> &Submodule {
        &self.subs[id]
    }

    pub fn subs(&self) -> &[Submodule] {
        &self.subs
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Submodule> {
        self.subs.iter()
    }

    pub fn id_of(&self, s: &Submodule) -> Option<usize> {
        self.index.get(&s.bits).copied()
    }

    pub fn id_of_bits(&self, bits: &FixedBitSet) -> Option<usize> {
        self.index.get(bits).copied()
    }

    pub fn zero_id(&self) -> usize {
        0
    }

    pub fn top_id(&self) -> usize {
        self.subs.len() - 1
    }

    /// Id of the cyclic submodule `Rx`.
    pub fn cyclic_id(&self, x: usize) -> usize {
        self.cyclic_of[x]
    }

    pub fn is_subset(&self, a: usize, b: usize) -> bool {
        self.subs[a].is_subset(&self.subs[b])
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        let s = self.subs[a].intersection(&self.subs[b]);
        self.index[&s.bits]
    }

    pub fn join(&self, m: &FiniteModule, a: usize, b: usize) -> usize {
        let s = sum(m, &self.subs[a], &self.subs[b]);
        self.index[&s.bits]
    }
}

/// Enumerates every submodule by breadth-first joins of cyclic submodules.
pub fn all_submodules(m: &FiniteModule, caps: &Caps) -> Result<SubmoduleLattice> {
    if m.order() > caps.module_order {
        return Err(cap("module order", caps.module_order));
    }
    let mut cyclic_bits: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut cyclics: Vec<Submodule> = Vec::new();
    let mut cyclic_slot = Vec::with_capacity(m.order());
    for x in m.elements() {
        let s = submodule_generate(m, [x]);
        let next = cyclics.len();
        let slot = *cyclic_bits.entry(s.bits.clone()).or_insert(next);
        if slot == next {
            cyclics.push(s);
        }
        cyclic_slot.push(slot);
    }
    let zero = submodule_generate(m, []);
    let mut found: BTreeSet<Submodule> = BTreeSet::new();
    let mut seen: HashMap<FixedBitSet, ()> = HashMap::new();
    seen.insert(zero.bits.clone(), ());
    found.insert(zero.clone());
    let mut frontier = vec![zero];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for current in &frontier {
            for c in &cyclics {
                if c.is_subset(current) {
                    continue;
                }
                let joined = sum(m, current, c);
                if seen.insert(joined.bits.clone(), ()).is_none() {
                    if seen.len() > caps.lattice {
                        return Err(cap("submodule lattice", caps.lattice));
                    }
                    found.insert(joined.clone());
                    next.push(joined);
                }
            }
        }
        frontier = next;
    }
    let subs: Vec<Submodule> = found.into_iter().collect();
    let index: HashMap<FixedBitSet, usize> = subs.iter().enumerate().map(|(i, s)| (s.bits.clone(), i)).collect();
    let cyclic_of = cyclic_slot.iter().map(|&slot| index[&cyclics[slot].bits]).collect();
    Ok(SubmoduleLattice { subs, index, cyclic_of })
}
