//! Cached structural data about one module: its submodule lattice, its
//! endomorphisms, and submodule products.

use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use fixedbitset::FixedBitSet;

use crate::config::{Caps, Config, Fault};
use crate::error::{Error, Result};
use crate::hom::{for_each_hom, hom_count, hom_set, Homomorphism, SearchOptions};
use crate::module::{quotient, submodule_as_module, FiniteModule};
use crate::par;
use crate::submodule::{additive_closure, Submodule, SubmoduleLattice};

/// Endomorphisms of the module with their images and kernels as lattice ids.
#[derive(Debug)]
pub struct EndData {
    pub maps: Vec<Homomorphism>,
    pub images: Vec<usize>,
    pub kernels: Vec<usize>,
    pub identity: usize,
    orbit: Vec<FixedBitSet>,
}

pub struct ModuleAnalysis {
    m: FiniteModule,
    cfg: Config,
    lattice: SubmoduleLattice,
    atoms: Vec<usize>,
    socle: usize,
    end: OnceLock<Result<EndData>>,
    value_sets: DashMap<usize, Arc<Vec<FixedBitSet>>>,
    products: DashMap<(usize, usize), usize>,
    self_projectivity: OnceLock<Result<Option<(usize, Homomorphism)>>>,
    fully_invariant: OnceLock<Result<Vec<bool>>>,
}

impl std::fmt::Debug for ModuleAnalysis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModuleAnalysis").field("module", &self.m).field("lattice", &self.lattice.len()).finish()
    }
}

fn cached<T>(cell: &OnceLock<Result<T>>, init: impl FnOnce() -> Result<T>) -> Result<&T> {
    match cell.get_or_init(init) {
        Ok(v) => Ok(v),
        Err(e) => Err(e.clone()),
    }
}

impl ModuleAnalysis {
    pub fn new(m: FiniteModule, cfg: Config) -> Result<Self> {
        let lattice = crate::submodule::all_submodules(&m, &cfg.caps)?;
        let atoms: Vec<usize> = (1..lattice.len())
            .filter(|&id| (1..id).all(|other| !lattice.is_subset(other, id)))
            .collect();
        let mut socle = lattice.zero_id();
        for &a in &atoms {
            socle = lattice.join(&m, socle, a);
        }
        Ok(ModuleAnalysis {
            m,
            cfg,
            lattice,
            atoms,
            socle,
            end: OnceLock::new(),
            value_sets: DashMap::new(),
            products: DashMap::new(),
            self_projectivity: OnceLock::new(),
            fully_invariant: OnceLock::new(),
        })
    }

    pub fn module(&self) -> &FiniteModule {
        &self.m
    }

    pub fn config(&self) -> &Config {
        &self.cfg
    }

    pub fn caps(&self) -> &Caps {
        &self.cfg.caps
    }

    pub fn lattice(&self) -> &SubmoduleLattice {
        &self.lattice
    }

    pub fn sub(&self, id: usize) -> &Submodule {
        self.lattice.get(id)
    }

    pub fn id(&self, s: &Submodule) -> Option<usize> {
        self.lattice.id_of(s)
    }

    pub fn zero(&self) -> usize {
        self.lattice.zero_id()
    }

    pub fn top(&self) -> usize {
        self.lattice.top_id()
    }

    pub fn subset(&self, a: usize, b: usize) -> bool {
        self.lattice.is_subset(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.lattice.meet(a, b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.lattice.join(&self.m, a, b)
    }

    pub fn meet_all(&self, ids: impl IntoIterator<Item = usize>) -> usize {
        ids.into_iter().fold(self.top(), |acc, id| self.meet(acc, id))
    }

    pub fn join_all(&self, ids: impl IntoIterator<Item = usize>) -> usize {
        ids.into_iter().fold(self.zero(), |acc, id| self.join(acc, id))
    }

    /// Lattice id of the submodule generated by an element set.
    pub fn generated(&self, seeds: impl IntoIterator<Item = usize>) -> usize {
        let s = crate::submodule::submodule_generate(&self.m, seeds);
        self.lattice.id_of(&s).expect("generated submodule is in the lattice")
    }

    pub fn cyclic(&self, x: usize) -> usize {
        self.lattice.cyclic_id(x)
    }

    /// Distinct nonzero cyclic submodules.
    pub fn cyclic_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.m.elements().map(|x| self.cyclic(x)).filter(|&c| c != self.zero()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn sub_module(&self, id: usize) -> FiniteModule {
        submodule_as_module(&self.m, self.sub(id))
    }

    pub fn quotient_module(&self, id: usize) -> (FiniteModule, Homomorphism) {
        quotient(&self.m, self.sub(id))
    }

    pub fn end(&self) -> Result<&EndData> {
        cached(&self.end, || {
            let maps = hom_set(&self.m, &self.m, &self.cfg.caps)?;
            let images = maps.iter().map(|h| self.lattice.id_of(&h.image(&self.m)).expect("image")).collect();
            let kernels = maps.iter().map(|h| self.lattice.id_of(&h.kernel(&self.m, &self.m)).expect("kernel")).collect();
            let identity = maps.iter().position(|h| h.map().iter().enumerate().all(|(x, &y)| x == y)).expect("identity");
            let n = self.m.order();
            let mut orbit = vec![FixedBitSet::with_capacity(n); n];
            for h in &maps {
                for (x, &y) in h.map().iter().enumerate() {
                    orbit[x].insert(y);
                }
            }
            Ok(EndData { maps, images, kernels, identity, orbit })
        })
    }

    pub fn endomorphisms(&self) -> Result<&[Homomorphism]> {
        Ok(&self.end()?.maps)
    }

    /// Indices into the endomorphism list of the maps with image inside `l`;
    /// these are exactly the homomorphisms `M → L`.
    pub fn hom_into(&self, l: usize) -> Result<Vec<usize>> {
        let end = self.end()?;
        Ok((0..end.maps.len()).filter(|&i| self.subset(end.images[i], l)).collect())
    }

    /// `V_L[x] = {f(x) : f ∈ Hom(M, L)}` for every `x`.
    pub fn hom_values(&self, l: usize) -> Result<Arc<Vec<FixedBitSet>>> {
        if let Some(v) = self.value_sets.get(&l) {
            return Ok(v.clone());
        }
        let end = self.end()?;
        let n = self.m.order();
        let mut sets = vec![FixedBitSet::with_capacity(n); n];
        if l == self.top() {
            sets.clone_from(&end.orbit);
        } else {
            for i in self.hom_into(l)? {
                for (x, &y) in end.maps[i].map().iter().enumerate() {
                    sets[x].insert(y);
                }
            }
        }
        let sets = Arc::new(sets);
        self.value_sets.insert(l, sets.clone());
        Ok(sets)
    }

    fn product_uncorrupted(&self, k: usize, l: usize) -> Result<usize> {
        if let Some(v) = self.products.get(&(k, l)) {
            return Ok(*v);
        }
        let values = self.hom_values(l)?;
        let mut seeds = FixedBitSet::with_capacity(self.m.order());
        for x in self.sub(k).bits().ones() {
            seeds.union_with(&values[x]);
        }
        let bits = additive_closure(&self.m, seeds.ones());
        let id = self.lattice.id_of_bits(&bits).expect("product is a submodule");
        self.products.insert((k, l), id);
        Ok(id)
    }

    /// `K_M L = Σ f(K)` over `f: M → L`.
    pub fn product(&self, k: usize, l: usize) -> Result<usize> {
        if self.cfg.fault == Some(Fault::CorruptProduct) && k != l {
            return Ok(self.zero());
        }
        self.product_uncorrupted(k, l)
    }

    /// Left-normed power `N^k = N_M(N^{k-1})`.
    pub fn power(&self, n: usize, k: usize) -> Result<usize> {
        assert!(k >= 1, "powers start at 1");
        let mut acc = n;
        for _ in 1..k {
            acc = self.product(n, acc)?;
        }
        Ok(acc)
    }

    /// Right-normed power `(N^{k-1})_M N`.
    pub fn power_right(&self, n: usize, k: usize) -> Result<usize> {
        assert!(k >= 1, "powers start at 1");
        let mut acc = n;
        for _ in 1..k {
            acc = self.product(acc, n)?;
        }
        Ok(acc)
    }

    /// `Ann_M(N)`: common kernel of all maps `M → N`.
    pub fn ann_left(&self, n: usize) -> Result<usize> {
        let values = self.hom_values(n)?;
        let zero = self.m.zero();
        let mut bits = FixedBitSet::with_capacity(self.m.order());
        for (x, v) in values.iter().enumerate() {
            if v.ones().all(|y| y == zero) {
                bits.insert(x);
            }
        }
        Ok(self.lattice.id_of_bits(&bits).expect("kernel intersection is a submodule"))
    }

    /// `Ann^r_M(N)`: sum of cyclic `Rx` with `N_M Rx = 0`, then checked.
    pub fn ann_right(&self, n: usize) -> Result<usize> {
        let mut acc = self.zero();
        for c in self.cyclic_ids() {
            if self.product(n, c)? == self.zero() {
                acc = self.join(acc, c);
            }
        }
        if self.product(n, acc)? != self.zero() {
            return Err(Error::VerificationFailure(format!(
                "sum of annihilated cyclic submodules {:?} is not annihilated by {:?}",
                self.sub(acc),
                self.sub(n)
            )));
        }
        Ok(acc)
    }

    pub fn fully_invariant_flags(&self) -> Result<&[bool]> {
        cached(&self.fully_invariant, || {
            let end = self.end()?;
            Ok(self
                .lattice
                .iter()
                .map(|s| s.bits().ones().all(|x| end.orbit[x].is_subset(s.bits())))
                .collect())
        })
        .map(Vec::as_slice)
    }

    pub fn is_fully_invariant(&self, id: usize) -> Result<bool> {
        Ok(self.fully_invariant_flags()?[id])
    }

    pub fn fully_invariant_ids(&self) -> Result<Vec<usize>> {
        let flags = self.fully_invariant_flags()?;
        Ok((0..flags.len()).filter(|&i| flags[i]).collect())
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn socle(&self) -> usize {
        self.socle
    }

    /// Atoms contained in `id`.
    pub fn atoms_below(&self, id: usize) -> Vec<usize> {
        self.atoms.iter().copied().filter(|&a| self.subset(a, id)).collect()
    }

    /// `K` meets every nonzero submodule; equivalently `K` contains every atom.
    pub fn is_essential(&self, id: usize) -> bool {
        self.atoms.iter().all(|&a| self.subset(a, id))
    }

    /// `small` is essential in `big` (both submodules of M, `small ⊆ big`).
    pub fn is_essential_in(&self, small: usize, big: usize) -> bool {
        self.subset(small, big) && self.atoms_below(big).into_iter().all(|a| self.subset(a, small))
    }

    pub fn is_uniform(&self, id: usize) -> bool {
        self.atoms_below(id).len() == 1
    }

    pub fn uniform_ids(&self) -> Vec<usize> {
        (0..self.lattice.len()).filter(|&id| self.is_uniform(id)).collect()
    }

    /// Greedy maximal independent family of atoms; its size is the uniform
    /// dimension.
    pub fn independent_atoms(&self) -> Vec<usize> {
        let mut family = Vec::new();
        let mut span = self.zero();
        for &a in &self.atoms {
            if self.meet(span, a) == self.zero() {
                family.push(a);
                span = self.join(span, a);
            }
        }
        debug_assert!(self.is_essential(span));
        family
    }

    pub fn uniform_dimension(&self) -> usize {
        self.independent_atoms().len()
    }

    /// `a ∩ b = 0` and `a + b = M`.
    pub fn are_complements(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == self.zero() && self.sub(a).len() * self.sub(b).len() == self.m.order()
    }

    pub fn complement_of(&self, a: usize) -> Option<usize> {
        (0..self.lattice.len()).find(|&b| self.are_complements(a, b))
    }

    /// A nonzero submodule receiving no nonzero map from M, if any.
    pub fn retractable_counterexample(&self) -> Result<Option<usize>> {
        let end = self.end()?;
        let mut images: Vec<usize> = end.images.iter().copied().filter(|&i| i != self.zero()).collect();
        images.sort_unstable();
        images.dedup();
        Ok((1..self.lattice.len()).find(|&n| !images.iter().any(|&i| self.subset(i, n))))
    }

    pub fn is_retractable(&self) -> Result<bool> {
        Ok(self.retractable_counterexample()?.is_none())
    }

    /// A submodule `K` with a map `M → M/K` that does not lift to `End(M)`.
    pub fn self_projectivity_counterexample(&self) -> Result<Option<(usize, Homomorphism)>> {
        cached(&self.self_projectivity, || {
            let end = self.end()?;
            let exec = self.cfg.execution;
            let ids: Vec<usize> = (1..self.lattice.len()).collect();
            let verdicts = par::map_slice(exec, &ids, |&k| -> Result<Option<(usize, Homomorphism)>> {
                let (q, pi) = self.quotient_module(k);
                let lifts = end.maps.len() / self.hom_into(k)?.len();
                if hom_count(&self.m, &q, &self.cfg.caps)? == lifts {
                    return Ok(None);
                }
                let liftable: std::collections::HashSet<Vec<usize>> =
                    end.maps.iter().map(|f| pi.after(f).into_map()).collect();
                let mut witness = None;
                for_each_hom(&self.m, &q, SearchOptions::new(&self.cfg.caps), |map| {
                    if liftable.contains(map) {
                        std::ops::ControlFlow::Continue(())
                    } else {
                        witness = Some(Homomorphism::new(map.to_vec()));
                        std::ops::ControlFlow::Break(())
                    }
                })?;
                Ok(witness.map(|h| (k, h)))
            });
            for v in verdicts {
                if let Some(found) = v? {
                    return Ok(Some(found));
                }
            }
            Ok(None)
        })
        .cloned()
    }

    pub fn is_self_projective(&self) -> Result<bool> {
        Ok(self.self_projectivity_counterexample()?.is_none())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::regular_module;
    use crate::ring::ring_cyclic;

    fn analysis(n: usize) -> ModuleAnalysis {
        ModuleAnalysis::new(regular_module(&Arc::new(ring_cyclic(n))), Config::default()).unwrap()
    }

    #[test]
    fn z6_basics() {
        let a = analysis(6);
        assert_eq!(a.endomorphisms().unwrap().len(), 6);
        assert_eq!(a.uniform_dimension(), 2);
        assert_eq!(a.socle(), a.top());
        assert!(a.is_retractable().unwrap());
        assert!(a.is_self_projective().unwrap());
        let two = a.generated([2]);
        let three = a.generated([3]);
        assert!(!a.is_essential(two));
        assert_eq!(a.ann_right(two).unwrap(), three);
        assert_eq!(a.ann_left(two).unwrap(), three);
        assert!(a.fully_invariant_flags().unwrap().iter().all(|&b| b));
    }

    #[test]
    fn z4_products() {
        let a = analysis(4);
        let two = a.generated([2]);
        assert_eq!(a.power(two, 2).unwrap(), a.zero());
        assert_eq!(a.product(a.top(), a.top()).unwrap(), a.top());
        assert!(a.is_essential(two));
        assert_eq!(a.uniform_dimension(), 1);
    }

    #[test]
    fn corrupt_product_zeroes_mixed_pairs() {
        let m = regular_module(&Arc::new(ring_cyclic(6)));
        let cfg = Config { fault: Some(Fault::CorruptProduct), ..Config::default() };
        let a = ModuleAnalysis::new(m, cfg).unwrap();
        let two = a.generated([2]);
        assert_eq!(a.product(two, a.top()).unwrap(), a.zero());
        assert_eq!(a.product(two, two).unwrap(), two);
    }
}
