mod common;

use std::sync::Arc;

use common::{analysis, arc, e28, family};
use modtheory::hom::reject;
use modtheory::injective::{k_singular_submodule, m_singular_submodule_bounded};
use modtheory::laws::Context;
use modtheory::module::{direct_sum, submodule_as_module};
use modtheory::ring::{ring_poly_quotient, ring_product, ring_upper_triangular};
use modtheory::{
    are_isomorphic, hom_set, ideals, injective_hull, m_injective_hull, m_singular_submodule, quotient, regular_module,
    ring_cyclic, ring_trivial_extension, submodule_generate, validate_ring, Caps, FiniteModule, FiniteRing, Verdict,
};
use proptest::prelude::*;

fn rings() -> Vec<FiniteRing> {
    let mut out: Vec<FiniteRing> = (1..=16).map(ring_cyclic).collect();
    out.push(ring_product(&ring_cyclic(2), &ring_cyclic(3)));
    out.push(ring_product(&ring_cyclic(2), &ring_cyclic(2)));
    out.push(ring_trivial_extension(&ring_cyclic(2), 2));
    out.push(ring_trivial_extension(&ring_cyclic(3), 1));
    out.push(ring_upper_triangular(&ring_cyclic(2)));
    out.push(ring_poly_quotient(2, &[1, 1]));
    out.push(ring_poly_quotient(2, &[0, 0]));
    out
}

/// A module built from the pool: regular, a quotient of it, or a sum with a
/// cyclic quotient, then relabelled by a rotation.
fn build(ring: usize, shape: usize, pick: usize, shift: usize) -> FiniteModule {
    let pool = rings();
    let r = Arc::new(pool[ring % pool.len()].clone());
    let reg = regular_module(&r);
    let a = analysis(&reg);
    let sub = a.sub(pick % a.lattice().len()).clone();
    let m = match shape % 4 {
        0 => reg.clone(),
        1 => quotient(&reg, &sub).0,
        2 => submodule_as_module(&reg, &sub),
        _ if reg.order() * quotient(&reg, &sub).0.order() <= 32 => direct_sum(&reg, &quotient(&reg, &sub).0).unwrap().0,
        _ => reg.clone(),
    };
    let n = m.order();
    let perm: Vec<usize> = (0..n).map(|i| if i == m.zero() { i } else { i + shift % n }).collect();
    let perm = if perm.iter().all(|&p| p < n) && perm.iter().collect::<std::collections::BTreeSet<_>>().len() == n {
        perm
    } else {
        (0..n).collect()
    };
    m.relabel(&perm).0
}

fn module_strategy() -> impl Strategy<Value = FiniteModule> {
    (0usize..64, 0usize..4, 0usize..64, 0usize..8).prop_map(|(r, s, p, t)| build(r, s, p, t))
}

#[test]
fn ring_validation_is_idempotent() {
    let caps = Caps::default();
    for r in rings() {
        let again = validate_ring(&r.to_tables(), r.name(), &caps).unwrap();
        assert_eq!(again.to_tables(), r.to_tables());
        let third = validate_ring(&again.to_tables(), r.name(), &caps).unwrap();
        assert_eq!(third, again);
    }
}

#[test]
fn ideals_closed_under_meet_and_sum() {
    for r in rings() {
        let all = ideals(&r);
        for i in &all {
            for j in &all {
                let meet = modtheory::Ideal::from_bits({
                    let mut b = i.bits().clone();
                    b.intersect_with(j.bits());
                    b
                });
                let sum = r.ideal_generated(i.elements().into_iter().chain(j.elements()));
                assert!(all.contains(&meet), "{}", r.name());
                assert!(all.contains(&sum), "{}", r.name());
            }
        }
    }
    assert_eq!(ideals(&ring_trivial_extension(&ring_cyclic(2), 2)).len(), 6);
}

#[test]
fn isomorphism_is_an_equivalence() {
    let caps = Caps::default();
    let fam = family();
    let n = fam.len();
    let iso: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| fam[i].same_ring(&fam[j]) && are_isomorphic(&fam[i], &fam[j], &caps).unwrap().is_some())
                .collect()
        })
        .collect();
    for i in 0..n {
        assert!(iso[i][i]);
        for j in 0..n {
            assert_eq!(iso[i][j], iso[j][i]);
            for k in 0..n {
                if iso[i][j] && iso[j][k] {
                    assert!(iso[i][k]);
                }
            }
        }
    }
}

#[test]
fn uniform_dimension_adds_over_sums() {
    let fam = family();
    for a in &fam {
        for b in &fam {
            if !a.same_ring(b) || a.order() * b.order() > 64 {
                continue;
            }
            let s = direct_sum(a, b).unwrap().0;
            let lhs = analysis(&s).uniform_dimension();
            assert_eq!(lhs, analysis(a).uniform_dimension() + analysis(b).uniform_dimension(), "{} + {}", a.name(), b.name());
        }
    }
}

#[test]
fn associativity_fails_only_without_self_projectivity() {
    let a = analysis(&e28());
    assert!(!a.is_self_projective().unwrap());
    let k = (0..a.lattice().len()).find(|&k| a.sub(k).len() == 4 && a.is_fully_invariant(k).unwrap()).unwrap();
    let kk = a.product(k, k).unwrap();
    assert_ne!(a.product(k, kk).unwrap(), a.product(kk, k).unwrap());
}

#[test]
fn hull_is_unique_under_relabelling() {
    let caps = Caps::default();
    for m in family().into_iter().filter(|m| m.order() <= 6) {
        let h = injective_hull(&m, &caps).unwrap();
        assert!(h.check());
        let n = m.order();
        let perm: Vec<usize> = (0..n).rev().collect();
        let (p, _) = m.relabel(&perm);
        let h2 = injective_hull(&p, &caps).unwrap();
        assert!(are_isomorphic(&h.ambient, &h2.ambient, &caps).unwrap().is_some(), "{}", m.name());
    }
}

#[test]
fn no_statement_is_violated_on_the_family() {
    let ids: Vec<&str> = modtheory::findings::REGISTRY.iter().map(|s| s.id).collect();
    for m in family() {
        let a = analysis(&m);
        let report = Context::new(&a).run(&ids).unwrap();
        let bad: Vec<_> = report.findings.iter().filter(|f| f.verdict == Verdict::Violation).collect();
        assert!(bad.is_empty(), "{}: {bad:?}", m.name());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn generation_is_idempotent_and_monotone(m in module_strategy(), seeds in proptest::collection::vec(0usize..64, 0..4), extra in 0usize..64) {
        let n = m.order();
        let seeds: Vec<usize> = seeds.into_iter().map(|s| s % n).collect();
        let g = submodule_generate(&m, seeds.iter().copied());
        prop_assert_eq!(submodule_generate(&m, g.elements()), g.clone());
        let bigger = submodule_generate(&m, seeds.iter().copied().chain([extra % n]));
        prop_assert!(g.is_subset(&bigger));
    }

    #[test]
    fn socle_is_essential(m in module_strategy()) {
        let a = analysis(&m);
        prop_assert!(a.is_essential(a.socle()));
    }

    #[test]
    fn products_distribute_and_associate(m in module_strategy()) {
        let a = analysis(&m);
        let ids: Vec<usize> = (0..a.lattice().len()).take(10).collect();
        let sp = a.is_self_projective().unwrap();
        for &k1 in &ids {
            for &k2 in &ids {
                for &l in &ids {
                    let lhs = a.product(a.join(k1, k2), l).unwrap();
                    let rhs = a.join(a.product(k1, l).unwrap(), a.product(k2, l).unwrap());
                    prop_assert_eq!(lhs, rhs);
                    if sp {
                        let left = a.product(k1, a.product(k2, l).unwrap()).unwrap();
                        let right = a.product(a.product(k1, k2).unwrap(), l).unwrap();
                        prop_assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn composition_lands_in_product(m in module_strategy()) {
        let a = analysis(&m);
        let end = a.end().unwrap();
        let ids: Vec<usize> = (0..a.lattice().len()).take(8).collect();
        for &n in &ids {
            for &l in &ids {
                let target = a.sub(a.product(n, l).unwrap()).clone();
                for f in a.hom_into(n).unwrap() {
                    for g in a.hom_into(l).unwrap() {
                        let h = end.maps[g].after(&end.maps[f]);
                        prop_assert!(h.image(&m).is_subset(&target));
                    }
                }
            }
        }
    }

    #[test]
    fn reject_is_a_radical(m in module_strategy()) {
        let caps = Caps::default();
        let a = analysis(&m);
        let hull = match m_injective_hull(&m, &m, &caps) {
            Ok(h) => h.module,
            Err(modtheory::Error::CapExceeded { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let rej = reject(&m, &hull, &caps).unwrap();
        let id = a.id(&rej).unwrap();
        prop_assert!(a.is_fully_invariant(id).unwrap());
        let (q, _) = quotient(&m, &rej);
        prop_assert!(reject(&q, &hull, &caps).unwrap().is_zero());
    }

    #[test]
    fn singular_approximations_are_nested(m in module_strategy()) {
        let caps = Caps::default();
        let a = analysis(&m);
        let k = k_singular_submodule(&a).unwrap();
        let b = m_singular_submodule_bounded(&m, &m, 2, &caps).unwrap();
        let z = m_singular_submodule(&m, &m, &caps).unwrap();
        prop_assert!(a.sub(k).is_subset(&b.submodule));
        prop_assert!(b.submodule.is_subset(&z));
    }

    #[test]
    fn hom_sets_respect_relabelling(m in module_strategy(), shift in 1usize..8) {
        let caps = Caps::default();
        let n = m.order();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let (p, _) = m.relabel(&perm);
        prop_assert_eq!(hom_set(&m, &m, &caps).unwrap().len(), hom_set(&p, &p, &caps).unwrap().len());
        prop_assert!(are_isomorphic(&m, &p, &caps).unwrap().is_some());
    }
}

#[test]
fn trivial_extension_ring_is_rebuilt() {
    let r = arc(ring_trivial_extension(&ring_cyclic(2), 2));
    assert_eq!(r.order(), 8);
    assert!(r.is_commutative());
}
