#![allow(dead_code)]

use std::sync::Arc;

use modtheory::module::direct_sum;
use modtheory::ring::{ring_product, ring_upper_triangular};
use modtheory::{
    all_submodules, injective_hull, quotient, regular_module, ring_cyclic, ring_trivial_extension, Caps, Config,
    FiniteModule, FiniteRing, ModuleAnalysis,
};

pub fn arc(r: FiniteRing) -> Arc<FiniteRing> {
    Arc::new(r)
}

pub fn z(n: usize) -> FiniteModule {
    regular_module(&arc(ring_cyclic(n)))
}

pub fn e28_ring() -> Arc<FiniteRing> {
    arc(ring_trivial_extension(&ring_cyclic(2), 2))
}

/// The injective hull of the simple module over `Z2 ⋉ Z2^2`.
pub fn e28() -> FiniteModule {
    let reg = regular_module(&e28_ring());
    let lattice = all_submodules(&reg, &Caps::default()).unwrap();
    let maximal = lattice.iter().find(|s| s.len() == 4).unwrap().clone();
    injective_hull(&quotient(&reg, &maximal).0, &Caps::default()).unwrap().ambient
}

/// Small modules over assorted rings, at most order 8.
pub fn family() -> Vec<FiniteModule> {
    let z6 = arc(ring_cyclic(6));
    let z6m = regular_module(&z6);
    let lat = all_submodules(&z6m, &Caps::default()).unwrap();
    let two = lat.iter().find(|s| s.len() == 3).unwrap().clone();
    let three = lat.iter().find(|s| s.len() == 2).unwrap().clone();
    let sum = direct_sum(&quotient(&z6m, &two).0, &quotient(&z6m, &three).0).unwrap().0;
    let z4 = arc(ring_cyclic(4));
    let z4m = regular_module(&z4);
    let lat4 = all_submodules(&z4m, &Caps::default()).unwrap();
    let half = lat4.iter().find(|s| s.len() == 2).unwrap().clone();
    let z4sum = direct_sum(&z4m, &quotient(&z4m, &half).0).unwrap().0;
    vec![
        z(2),
        z(3),
        z(4),
        z(6),
        z(8),
        sum,
        z4sum,
        regular_module(&e28_ring()),
        e28(),
        regular_module(&arc(ring_product(&ring_cyclic(2), &ring_cyclic(4)))),
        regular_module(&arc(ring_upper_triangular(&ring_cyclic(2)))),
    ]
}

pub fn analysis(m: &FiniteModule) -> ModuleAnalysis {
    ModuleAnalysis::new(m.clone(), Config::default()).unwrap()
}
