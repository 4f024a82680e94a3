//! Submodule products, annihilators and nilpotence.

use serde::Serialize;

use crate::analysis::ModuleAnalysis;
use crate::error::Result;
use crate::hom::Homomorphism;
use crate::submodule::Submodule;

/// `K_M L` together with the maps `M → L` whose images of `K` make it up.
#[derive(Debug, Clone, Serialize)]
pub struct ProductResult {
    pub value: Submodule,
    pub contributing_maps: Vec<Homomorphism>,
}

pub fn product(a: &ModuleAnalysis, k: usize, l: usize) -> Result<ProductResult> {
    let value = a.sub(a.product(k, l)?).clone();
    let end = a.end()?;
    let k_sub = a.sub(k);
    let contributing_maps = a
        .hom_into(l)?
        .into_iter()
        .map(|i| &end.maps[i])
        .filter(|f| k_sub.bits().ones().any(|x| f.apply(x) != a.module().zero()))
        .cloned()
        .collect();
    Ok(ProductResult { value, contributing_maps })
}

/// The poset 𝒜_M of intersections of endomorphism kernels.
#[derive(Debug, Clone, Serialize)]
pub struct AnnihilatorSet {
    pub members: Vec<usize>,
    pub acc_holds: bool,
    /// Number of members in a longest strictly ascending chain.
    pub longest_chain: usize,
}

pub fn annihilator_set(a: &ModuleAnalysis) -> Result<AnnihilatorSet> {
    let end = a.end()?;
    let mut members: Vec<usize> = end.kernels.clone();
    members.push(a.top());
    members.sort_unstable();
    members.dedup();
    loop {
        let mut added = false;
        let snapshot = members.clone();
        for (i, &x) in snapshot.iter().enumerate() {
            for &y in &snapshot[i + 1..] {
                let z = a.meet(x, y);
                if members.binary_search(&z).is_err() {
                    let pos = members.binary_search(&z).unwrap_err();
                    members.insert(pos, z);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    // ids are sorted by size, so every strict superset comes later
    let mut chain = vec![1usize; members.len()];
    for i in 0..members.len() {
        for j in 0..i {
            if members[j] != members[i] && a.subset(members[j], members[i]) {
                chain[i] = chain[i].max(chain[j] + 1);
            }
        }
    }
    let longest_chain = chain.into_iter().max().unwrap_or(0);
    Ok(AnnihilatorSet { members, acc_holds: true, longest_chain })
}

/// Some `K` with `Ann_M(K) = n`, if one exists.
pub fn annihilator_witness(a: &ModuleAnalysis, n: usize) -> Result<Option<usize>> {
    for k in 0..a.lattice().len() {
        if a.ann_left(k)? == n {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

pub fn is_annihilator_submodule(a: &ModuleAnalysis, n: usize) -> Result<bool> {
    Ok(annihilator_witness(a, n)?.is_some())
}

/// Least `k` with `N^k = 0`, or `None` when the powers stabilize above zero.
pub fn nilpotency_index(a: &ModuleAnalysis, n: usize) -> Result<Option<usize>> {
    let mut k = 1;
    let mut current = n;
    loop {
        if current == a.zero() {
            return Ok(Some(k));
        }
        let next = a.product(n, current)?;
        if next == current {
            return Ok(None);
        }
        current = next;
        k += 1;
    }
}

pub fn is_nilpotent_submodule(a: &ModuleAnalysis, n: usize) -> Result<bool> {
    Ok(nilpotency_index(a, n)?.is_some())
}

/// A cycle `x_0 → x_1 → … → x_0` of nonzero elements of `n` along maps
/// `M → N`, reachable from `n`; `None` means `n` is T_M-nilpotent.
pub fn tm_nilpotency_cycle(a: &ModuleAnalysis, n: usize) -> Result<Option<Vec<usize>>> {
    let values = a.hom_values(n)?;
    let zero = a.module().zero();
    let order = a.module().order();
    let succ = |x: usize| values[x].ones().filter(move |&y| y != zero);
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut color = vec![0u8; order];
    let mut parent = vec![usize::MAX; order];
    for start in a.sub(n).bits().ones().filter(|&x| x != zero) {
        if color[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(start, succ(start).collect())];
        color[start] = 1;
        while let Some((x, pending)) = stack.last_mut() {
            let x = *x;
            match pending.pop() {
                Some(y) if color[y] == 0 => {
                    color[y] = 1;
                    parent[y] = x;
                    let next: Vec<usize> = succ(y).collect();
                    stack.push((y, next));
                }
                Some(y) if color[y] == 1 => {
                    let mut cycle = vec![y];
                    let mut cur = x;
                    while cur != y {
                        cycle.push(cur);
                        cur = parent[cur];
                    }
                    cycle.reverse();
                    let last = cycle.pop().expect("nonempty");
                    cycle.insert(0, last);
                    return Ok(Some(cycle));
                }
                Some(_) => {}
                None => {
                    color[x] = 2;
                    stack.pop();
                }
            }
        }
    }
    Ok(None)
}

pub fn is_tm_nilpotent(a: &ModuleAnalysis, n: usize) -> Result<bool> {
    Ok(tm_nilpotency_cycle(a, n)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::module::regular_module;
    use crate::ring::ring_cyclic;
    use std::sync::Arc;

    fn analysis(n: usize) -> ModuleAnalysis {
        ModuleAnalysis::new(regular_module(&Arc::new(ring_cyclic(n))), Config::default()).unwrap()
    }

    #[test]
    fn z6_annihilator_set() {
        let a = analysis(6);
        let set = annihilator_set(&a).unwrap();
        assert_eq!(set.members.len(), 4);
        assert!(set.acc_holds);
        assert_eq!(set.longest_chain, 3);
    }

    #[test]
    fn z4_nilpotence() {
        let a = analysis(4);
        let two = a.generated([2]);
        assert_eq!(nilpotency_index(&a, two).unwrap(), Some(2));
        assert_eq!(nilpotency_index(&a, a.zero()).unwrap(), Some(1));
        assert_eq!(nilpotency_index(&a, a.top()).unwrap(), None);
        assert!(is_tm_nilpotent(&a, two).unwrap());
        assert!(is_tm_nilpotent(&a, a.zero()).unwrap());
        let cycle = tm_nilpotency_cycle(&a, a.top()).unwrap().unwrap();
        assert!(!cycle.is_empty());
    }

    #[test]
    fn product_contains_identity_image() {
        let a = analysis(6);
        for k in 0..a.lattice().len() {
            let p = product(&a, k, a.top()).unwrap();
            assert!(a.sub(k).is_subset(&p.value));
        }
    }

    #[test]
    fn annihilator_witnesses() {
        let a = analysis(6);
        assert_eq!(annihilator_witness(&a, a.zero()).unwrap(), Some(a.top()));
        assert_eq!(annihilator_witness(&a, a.top()).unwrap(), Some(a.zero()));
    }
}
