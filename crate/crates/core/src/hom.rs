//! Module homomorphisms and their exhaustive enumeration.

use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::config::Caps;
use crate::error::{cap, Result};
use crate::module::FiniteModule;
use crate::submodule::{submodule_generate, Submodule};

/// A homomorphism given by its table of images of source elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Homomorphism {
    map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(map: Vec<usize>) -> Self {
        Homomorphism { map }
    }

    pub fn identity(n: usize) -> Self {
        Homomorphism { map: (0..n).collect() }
    }

    pub fn zero(source: &FiniteModule, target: &FiniteModule) -> Self {
        Homomorphism { map: vec![target.zero(); source.order()] }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn into_map(self) -> Vec<usize> {
        self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Homomorphism) -> Homomorphism {
        Homomorphism { map: first.map.iter().map(|&x| self.map[x]).collect() }
    }

    pub fn kernel(&self, source: &FiniteModule, target: &FiniteModule) -> Submodule {
        let mut bits = FixedBitSet::with_capacity(source.order());
        for (x, &y) in self.map.iter().enumerate() {
            if y == target.zero() {
                bits.insert(x);
            }
        }
        Submodule::from_bits(bits)
    }

    pub fn image(&self, target: &FiniteModule) -> Submodule {
        let mut bits = FixedBitSet::with_capacity(target.order());
        for &y in &self.map {
            bits.insert(y);
        }
        Submodule::from_bits(bits)
    }

    /// Image of a submodule of the source.
    pub fn image_of(&self, target: &FiniteModule, s: &Submodule) -> Submodule {
        let mut bits = FixedBitSet::with_capacity(target.order());
        for x in s.bits().ones() {
            bits.insert(self.map[x]);
        }
        Submodule::from_bits(bits)
    }

    pub fn is_injective(&self, target: &FiniteModule) -> bool {
        let mut seen = FixedBitSet::with_capacity(target.order());
        self.map.iter().all(|&y| {
            let fresh = !seen.contains(y);
            seen.insert(y);
            fresh
        })
    }

    pub fn is_zero(&self, target: &FiniteModule) -> bool {
        self.map.iter().all(|&y| y == target.zero())
    }
}

/// Checks additivity and compatibility with the action.
pub fn is_homomorphism(source: &FiniteModule, target: &FiniteModule, map: &[usize]) -> bool {
    if map.len() != source.order() || map.iter().any(|&y| y >= target.order()) {
        return false;
    }
    source.elements().all(|x| {
        source.elements().all(|y| map[source.add(x, y)] == target.add(map[x], map[y]))
            && source.ring().elements().all(|r| map[source.act(r, x)] == target.act(r, map[x]))
    })
}

/// Options for [`for_each_hom`].
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub injective: bool,
    pub max_nodes: usize,
}

impl SearchOptions {
    pub fn new(caps: &Caps) -> Self {
        SearchOptions { injective: false, max_nodes: caps.search_nodes }
    }

    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }
}

struct Search<'a, F> {
    source: &'a FiniteModule,
    target: &'a FiniteModule,
    gens: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    img: Vec<usize>,
    used: Vec<bool>,
    assigned: Vec<usize>,
    injective: bool,
    nodes: usize,
    max_nodes: usize,
    visit: F,
}

const UNSET: usize = usize::MAX;

impl<F: FnMut(&[usize]) -> ControlFlow<()>> Search<'_, F> {
    fn run(&mut self, level: usize) -> Result<ControlFlow<()>> {
        if level == self.gens.len() {
            return Ok((self.visit)(&self.img));
        }
        let g = self.gens[level];
        let base = self.assigned.len();
        for ci in 0..self.candidates[level].len() {
            let y = self.candidates[level][ci];
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(cap("homomorphism search nodes", self.max_nodes));
            }
            if self.extend(g, y, base) {
                if let ControlFlow::Break(()) = self.run(level + 1)? {
                    return Ok(ControlFlow::Break(()));
                }
            }
            self.undo(base);
        }
        Ok(ControlFlow::Continue(()))
    }

    /// Extends the map from span(previous generators) to span(previous, g)
    /// with `g ↦ y`; false on an inconsistency.
    fn extend(&mut self, g: usize, y: usize, base: usize) -> bool {
        let s = self.source;
        let t = self.target;
        for r in s.ring().elements() {
            let rg = s.act(r, g);
            let ry = t.act(r, y);
            for i in 0..base {
                let d = self.assigned[i];
                let x = s.add(d, rg);
                let v = t.add(self.img[d], ry);
                if !self.set(x, v) {
                    return false;
                }
            }
        }
        true
    }

    #[inline]
    fn set(&mut self, x: usize, v: usize) -> bool {
        let cur = self.img[x];
        if cur != UNSET {
            return cur == v;
        }
        if self.injective {
            if self.used[v] {
                return false;
            }
            self.used[v] = true;
        }
        self.img[x] = v;
        self.assigned.push(x);
        true
    }

    fn undo(&mut self, base: usize) {
        for &x in &self.assigned[base..] {
            if self.injective {
                self.used[self.img[x]] = false;
            }
            self.img[x] = UNSET;
        }
        self.assigned.truncate(base);
    }
}

/// Calls `visit` with the image table of every homomorphism `source → target`
/// (or every monomorphism, under `opts.injective`), in lexicographic order of
/// generator images.
pub fn for_each_hom<F>(source: &FiniteModule, target: &FiniteModule, opts: SearchOptions, visit: F) -> Result<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    source.check_same_ring(target)?;
    if opts.injective && source.order() > target.order() {
        return Ok(());
    }
    let whole = submodule_generate(source, source.elements());
    let gens = whole.generators(source);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let ann_g = source.element_annihilator(g);
            target
                .elements()
                .filter(|&y| {
                    let ann_y = target.element_annihilator(y);
                    if opts.injective {
                        ann_y == ann_g
                    } else {
                        ann_g.is_subset(&ann_y)
                    }
                })
                .collect()
        })
        .collect();
    let mut img = vec![UNSET; source.order()];
    let mut used = vec![false; target.order()];
    img[source.zero()] = target.zero();
    used[target.zero()] = true;
    let mut search = Search {
        source,
        target,
        gens,
        candidates,
        img,
        used,
        assigned: vec![source.zero()],
        injective: opts.injective,
        nodes: 0,
        max_nodes: opts.max_nodes,
        visit,
    };
    let _ = search.run(0)?;
    Ok(())
}

/// All homomorphisms `m → n`, sorted by image table.
pub fn hom_set(m: &FiniteModule, n: &FiniteModule, caps: &Caps) -> Result<Vec<Homomorphism>> {
    let mut out = Vec::new();
    let mut over = false;
    for_each_hom(m, n, SearchOptions::new(caps), |map| {
        if out.len() == caps.homs {
            over = true;
            return ControlFlow::Break(());
        }
        out.push(Homomorphism::new(map.to_vec()));
        ControlFlow::Continue(())
    })?;
    if over {
        return Err(cap("homomorphism set", caps.homs));
    }
    out.sort_unstable();
    Ok(out)
}

/// `|Hom(m, n)|` without materializing the maps.
pub fn hom_count(m: &FiniteModule, n: &FiniteModule, caps: &Caps) -> Result<usize> {
    let mut count = 0usize;
    for_each_hom(m, n, SearchOptions::new(caps), |_| {
        count += 1;
        ControlFlow::Continue(())
    })?;
    Ok(count)
}

/// First monomorphism `a → b`, if any.
pub fn find_monomorphism(a: &FiniteModule, b: &FiniteModule, caps: &Caps) -> Result<Option<Homomorphism>> {
    let mut found = None;
    for_each_hom(a, b, SearchOptions::new(caps).injective(), |map| {
        found = Some(Homomorphism::new(map.to_vec()));
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// An isomorphism `a → b`, if one exists.
pub fn are_isomorphic(a: &FiniteModule, b: &FiniteModule, caps: &Caps) -> Result<Option<Homomorphism>> {
    a.check_same_ring(b)?;
    if a.order() != b.order() {
        return Ok(None);
    }
    find_monomorphism(a, b, caps)
}

/// Common kernel of all maps `l → e`.
pub fn reject(l: &FiniteModule, e: &FiniteModule, caps: &Caps) -> Result<Submodule> {
    let mut bits = FixedBitSet::with_capacity(l.order());
    bits.insert_range(..);
    for_each_hom(l, e, SearchOptions::new(caps), |map| {
        for (x, &y) in map.iter().enumerate() {
            if y != e.zero() {
                bits.set(x, false);
            }
        }
        if bits.count_ones(..) == 1 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(Submodule::from_bits(bits))
}

/// Sum of the images of all maps `m → e` (the trace of `m` in `e`).
pub fn trace(m: &FiniteModule, e: &FiniteModule, caps: &Caps) -> Result<Submodule> {
    let mut seeds = FixedBitSet::with_capacity(e.order());
    for_each_hom(m, e, SearchOptions::new(caps), |map| {
        for &y in map {
            seeds.insert(y);
        }
        ControlFlow::Continue(())
    })?;
    Ok(crate::submodule::generate_bits(e, &seeds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{quotient, regular_module, submodule_as_module, zero_module};
    use crate::ring::ring_cyclic;
    use std::sync::Arc;

    #[test]
    fn z6_endomorphisms_are_scalars() {
        let r = Arc::new(ring_cyclic(6));
        let m = regular_module(&r);
        let homs = hom_set(&m, &m, &Caps::default()).unwrap();
        assert_eq!(homs.len(), 6);
        for h in &homs {
            let a = h.apply(1);
            assert!(m.elements().all(|x| h.apply(x) == (a * x) % 6));
        }
    }

    #[test]
    fn into_3z6_and_zero() {
        let r = Arc::new(ring_cyclic(6));
        let m = regular_module(&r);
        let three = submodule_as_module(&m, &submodule_generate(&m, [3]));
        assert_eq!(hom_set(&m, &three, &Caps::default()).unwrap().len(), 2);
        let z = zero_module(&r);
        let homs = hom_set(&m, &z, &Caps::default()).unwrap();
        assert_eq!(homs, vec![Homomorphism::zero(&m, &z)]);
        assert_eq!(hom_set(&z, &m, &Caps::default()).unwrap().len(), 1);
    }

    #[test]
    fn iso_between_2z6_and_quotient() {
        let r = Arc::new(ring_cyclic(6));
        let m = regular_module(&r);
        let two = submodule_as_module(&m, &submodule_generate(&m, [2]));
        let (q, _) = quotient(&m, &submodule_generate(&m, [3]));
        let iso = are_isomorphic(&two, &q, &Caps::default()).unwrap().unwrap();
        assert!(is_homomorphism(&two, &q, iso.map()));
        assert!(iso.is_injective(&q));
        let id = are_isomorphic(&m, &m, &Caps::default()).unwrap().unwrap();
        assert_eq!(id, Homomorphism::identity(6));
        assert!(are_isomorphic(&m, &two, &Caps::default()).unwrap().is_none());
    }

    #[test]
    fn node_cap_applies() {
        let r = Arc::new(ring_cyclic(6));
        let m = regular_module(&r);
        let caps = Caps { search_nodes: 2, ..Caps::default() };
        assert!(hom_set(&m, &m, &caps).is_err());
        let caps = Caps { homs: 3, ..Caps::default() };
        assert!(hom_set(&m, &m, &caps).is_err());
    }
}
