//! Injective hulls, M-injective hulls, rejects, singular submodules and the
//! indecomposable injectives cogenerating the module.

use std::collections::BTreeMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde::Serialize;

use crate::analysis::ModuleAnalysis;
use crate::config::Caps;
use crate::error::{cap, Error, Result};
use crate::hom::{are_isomorphic, find_monomorphism, hom_set, trace, Homomorphism};
use crate::module::{regular_module, submodule_with_inclusion, zero_module, FiniteModule};
use crate::ring::{ring_cyclic, FiniteRing};
use crate::submodule::{all_submodules, submodule_generate, Submodule, SubmoduleLattice};

pub use crate::hom::reject;

/// `Hom_Z(R, Z_e)` for the additive exponent `e`, with `(s·χ)(x) = χ(x·s)`.
///
/// Characters are ordered lexicographically by their value vectors, so the
/// zero character is element 0.
pub fn character_module(r: &Arc<FiniteRing>) -> FiniteModule {
    let e = r.additive_exponent();
    let n = r.order();
    let ze = Arc::new(ring_cyclic(e));
    let mut add = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            add[a * n + b] = r.add(a, b);
        }
    }
    let mut action = vec![0; e * n];
    for k in 0..e {
        for x in 0..n {
            action[k * n + x] = if k == 0 { r.zero() } else { r.add(action[(k - 1) * n + x], x) };
        }
    }
    let additive = FiniteModule::from_flat(ze.clone(), "R+", n, add, r.zero(), action);
    let caps = Caps { homs: n.max(1), ..Caps::default() };
    let chars: Vec<Vec<usize>> = hom_set(&additive, &regular_module(&ze), &caps)
        .expect("a finite abelian group has exactly |G| characters")
        .into_iter()
        .map(Homomorphism::into_map)
        .collect();
    let zero = chars[0].clone();
    FiniteModule::from_elements(
        r.clone(),
        &format!("C({})", r.name()),
        chars,
        &zero,
        |a, b| a.iter().zip(b).map(|(x, y)| (x + y) % e).collect(),
        |s, chi| (0..n).map(|x| chi[r.mul(x, s)]).collect(),
    )
}

/// Elements of `C^k` encoded in mixed radix, most significant coordinate first.
struct PowerCodes<'a> {
    c: &'a FiniteModule,
    k: usize,
}

impl PowerCodes<'_> {
    fn order(&self) -> usize {
        self.c.order().pow(self.k as u32)
    }

    fn digits(&self, mut code: usize) -> Vec<usize> {
        let n = self.c.order();
        let mut d = vec![0; self.k];
        for slot in d.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        d
    }

    fn encode(&self, digits: impl IntoIterator<Item = usize>) -> usize {
        digits.into_iter().fold(0, |acc, d| acc * self.c.order() + d)
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let (da, db) = (self.digits(a), self.digits(b));
        self.encode(da.iter().zip(&db).map(|(&x, &y)| self.c.add(x, y)))
    }

    fn act(&self, r: usize, a: usize) -> usize {
        self.encode(self.digits(a).into_iter().map(|x| self.c.act(r, x)))
    }
}

/// An injective hull `E(X)` with the embedding of `X`.
#[derive(Debug, Clone, Serialize)]
pub struct InjectiveHull {
    pub ambient: FiniteModule,
    pub embedding: Homomorphism,
    /// `(y, r)` for every nonzero `y` of the hull: `r·y` is a nonzero element of the image.
    pub essential_certificate: Vec<(usize, usize)>,
}

impl InjectiveHull {
    /// Re-checks injectivity of the embedding and every certificate entry.
    pub fn check(&self) -> bool {
        let a = &self.ambient;
        let image = self.embedding.image(a);
        let covered: FixedBitSet = self.essential_certificate.iter().map(|&(y, _)| y).collect();
        self.embedding.is_injective(a)
            && self.essential_certificate.iter().all(|&(y, r)| {
                let z = a.act(r, y);
                y != a.zero() && z != a.zero() && image.contains(z)
            })
            && a.elements().filter(|&y| y != a.zero()).all(|y| covered.contains(y))
    }
}

fn minimal_kernels(x: &FiniteModule, maps: &[Homomorphism], target: &FiniteModule) -> Vec<(FixedBitSet, usize)> {
    let mut kernels: Vec<(FixedBitSet, usize)> = Vec::new();
    for (i, f) in maps.iter().enumerate() {
        let k = f.kernel(x, target).bits().clone();
        if !kernels.iter().any(|(b, _)| *b == k) {
            kernels.push((k, i));
        }
    }
    let minimal: Vec<(FixedBitSet, usize)> = kernels
        .iter()
        .filter(|(k, _)| !kernels.iter().any(|(o, _)| o != k && o.is_subset(k)))
        .cloned()
        .collect();
    minimal
}

pub fn injective_hull(x: &FiniteModule, caps: &Caps) -> Result<InjectiveHull> {
    if x.order() > caps.module_order {
        return Err(cap("module order", caps.module_order));
    }
    if x.is_zero_module() {
        return Ok(InjectiveHull {
            ambient: zero_module(x.ring_arc()).with_name(format!("E({})", x.name())),
            embedding: Homomorphism::new(vec![0; x.order()]),
            essential_certificate: vec![],
        });
    }
    let c = character_module(x.ring_arc());
    let maps = hom_set(x, &c, caps)?;
    let kernels = minimal_kernels(x, &maps, &c);
    let mut chosen = None;
    'outer: for k in 1..=kernels.len() {
        if c.order().checked_pow(k as u32).is_none_or(|n| n > caps.hull_ambient) {
            return Err(cap("hull ambient order", caps.hull_ambient));
        }
        for combo in (0..kernels.len()).combinations(k) {
            let mut meet = kernels[combo[0]].0.clone();
            for &i in &combo[1..] {
                meet.intersect_with(&kernels[i].0);
            }
            if meet.count_ones(..) == 1 {
                chosen = Some(combo.into_iter().map(|i| kernels[i].1).collect::<Vec<_>>());
                break 'outer;
            }
        }
    }
    let chosen = chosen.ok_or_else(|| Error::VerificationFailure("character module does not cogenerate".into()))?;
    let pc = PowerCodes { c: &c, k: chosen.len() };
    let codes: Vec<usize> = x.elements().map(|v| pc.encode(chosen.iter().map(|&i| maps[i].apply(v)))).collect();
    let total = pc.order();
    let ring = x.ring();
    let mut image = FixedBitSet::with_capacity(total);
    for &code in &codes {
        image.insert(code);
    }
    let zero = pc.encode(std::iter::repeat_n(c.zero(), pc.k));
    let meets = |z: usize| ring.elements().find(|&r| {
        let w = pc.act(r, z);
        w != zero && image.contains(w)
    });
    let mut hull = image.clone();
    let mut members: Vec<usize> = hull.ones().collect();
    for y in 0..total {
        if hull.contains(y) || meets(y).is_none() {
            continue;
        }
        let mut cyclic: Vec<usize> = ring.elements().map(|r| pc.act(r, y)).collect();
        cyclic.sort_unstable();
        cyclic.dedup();
        let mut fresh = FixedBitSet::with_capacity(total);
        for &e in &members {
            for &s in &cyclic {
                let z = pc.add(e, s);
                if !hull.contains(z) {
                    fresh.insert(z);
                }
            }
        }
        if fresh.ones().all(|z| meets(z).is_some()) {
            hull.union_with(&fresh);
            members.extend(fresh.ones());
            if members.len() > caps.module_order {
                return Err(cap("module order", caps.module_order));
            }
        }
    }
    let elems: Vec<usize> = hull.ones().collect();
    let n = elems.len();
    let mut index = vec![usize::MAX; total];
    for (i, &e) in elems.iter().enumerate() {
        index[e] = i;
    }
    let mut add = vec![0; n * n];
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate() {
            add[i * n + j] = index[pc.add(a, b)];
        }
    }
    let q = ring.order();
    let mut action = vec![0; q * n];
    for r in 0..q {
        for (i, &a) in elems.iter().enumerate() {
            action[r * n + i] = index[pc.act(r, a)];
        }
    }
    let ambient = FiniteModule::from_flat(x.ring_arc().clone(), &format!("E({})", x.name()), n, add, index[zero], action);
    let embedding = Homomorphism::new(codes.iter().map(|&code| index[code]).collect());
    let essential_certificate = elems
        .iter()
        .enumerate()
        .filter(|&(_, &e)| e != zero)
        .map(|(i, &e)| (i, meets(e).expect("hull is essential over the image")))
        .collect();
    Ok(InjectiveHull { ambient, embedding, essential_certificate })
}

/// How membership of `X` in `σ[M]` was established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaCertificate {
    /// `X` embeds into `M`.
    Embeds(Homomorphism),
    /// `X` equals the trace of `M` in it.
    Generated,
    /// `Ann_R(M)` kills `X`, so `X` is a subquotient of a finite power of `M`.
    Annihilated,
}

/// Certifies `X ∈ σ[M]`. For finite `M`, `R/Ann_R(M)` embeds into a finite
/// power of `M`, so `Ann_R(M)·X = 0` decides membership.
pub fn sigma_certificate(m: &FiniteModule, x: &FiniteModule, caps: &Caps) -> Result<SigmaCertificate> {
    m.check_same_ring(x)?;
    if x.order() <= m.order() {
        if let Some(f) = find_monomorphism(x, m, caps)? {
            return Ok(SigmaCertificate::Embeds(f));
        }
    }
    if trace(m, x, caps)?.len() == x.order() {
        return Ok(SigmaCertificate::Generated);
    }
    let ann = (0..m.order()).fold(
        {
            let mut all = FixedBitSet::with_capacity(m.ring().order());
            all.insert_range(..);
            all
        },
        |mut acc, v| {
            acc.intersect_with(&m.element_annihilator(v));
            acc
        },
    );
    for r in ann.ones() {
        if let Some(v) = x.elements().find(|&v| x.act(r, v) != x.zero()) {
            return Err(Error::NotInSigma { ring_element: r, element: v });
        }
    }
    Ok(SigmaCertificate::Annihilated)
}

/// `X̂ = tr^M(E(X))`, the injective hull of `X` in `σ[M]`.
#[derive(Debug, Clone, Serialize)]
pub struct MInjectiveHull {
    pub module: FiniteModule,
    pub embedding: Homomorphism,
    pub sigma: SigmaCertificate,
}

pub fn m_injective_hull(m: &FiniteModule, x: &FiniteModule, caps: &Caps) -> Result<MInjectiveHull> {
    let sigma = sigma_certificate(m, x, caps)?;
    let hull = injective_hull(x, caps)?;
    let t = trace(m, &hull.ambient, caps)?;
    if !hull.embedding.image(&hull.ambient).is_subset(&t) {
        return Err(Error::VerificationFailure("trace of M misses the embedded copy".into()));
    }
    let (module, inclusion) = submodule_with_inclusion(&hull.ambient, &t);
    let back: BTreeMap<usize, usize> = inclusion.map().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let embedding = Homomorphism::new(hull.embedding.map().iter().map(|v| back[v]).collect());
    let module = module.with_name(format!("{}^", x.name()));
    Ok(MInjectiveHull { module, embedding, sigma })
}

/// `Z^K(M)`: the sum of the images of endomorphisms with essential kernel.
pub fn k_singular_submodule(a: &ModuleAnalysis) -> Result<usize> {
    let end = a.end()?;
    let ids = end.kernels.iter().zip(&end.images).filter(|(&k, _)| a.is_essential(k)).map(|(_, &i)| i);
    Ok(a.join_all(ids))
}

/// Under-approximation of the `M`-singular submodule `𝒵(L)`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundedSingular {
    pub submodule: Submodule,
    pub depth: usize,
    /// True when depth `depth + 1` yields the same submodule.
    pub exact: bool,
}

/// Left ideals that are essential over one of `levels` in the interval above it.
fn essential_over(left: &SubmoduleLattice, levels: &[usize]) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(left.len());
    for &i in levels {
        let above: Vec<usize> = (0..left.len()).filter(|&a| a != i && left.is_subset(i, a)).collect();
        let atoms: Vec<usize> = above
            .iter()
            .copied()
            .filter(|&a| !above.iter().any(|&b| b != a && left.is_subset(b, a)))
            .collect();
        if atoms.is_empty() {
            out.insert(i);
        }
        for &a in &above {
            if atoms.iter().all(|&t| left.is_subset(t, a)) {
                out.insert(a);
            }
        }
    }
    out
}

/// Submodule of `l` generated by the `w` whose annihilator lies in `good`.
fn singular_part(l: &FiniteModule, left: &SubmoduleLattice, good: &FixedBitSet) -> Submodule {
    let seeds = l.elements().filter(|&w| good.contains(left.id_of_bits(&l.element_annihilator(w)).expect("left ideal")));
    submodule_generate(l, seeds)
}

fn element_annihilator_ids(m: &FiniteModule, left: &SubmoduleLattice) -> Vec<usize> {
    let mut v: Vec<usize> = m.elements().map(|x| left.id_of_bits(&m.element_annihilator(x)).expect("left ideal")).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Sum of the images `f(T/K)` with `T ⊆ M^j`, `j ≤ depth`, `K ⊆_ess T`.
///
/// A cyclic `Rw ⊆ L` is such an image exactly when `ann(w)` contains a left
/// ideal essential over `ann(t)` for some `t ∈ M^j`; `ann(t)` ranges over
/// intersections of at most `j` element annihilators of `M`.
pub fn m_singular_submodule_bounded(m: &FiniteModule, l: &FiniteModule, depth: usize, caps: &Caps) -> Result<BoundedSingular> {
    m.check_same_ring(l)?;
    let left = all_submodules(&regular_module(m.ring_arc()), caps)?;
    let basic = element_annihilator_ids(m, &left);
    let mut levels = vec![left.top_id()];
    let mut results = vec![submodule_generate(l, [])];
    for _ in 0..=depth {
        let mut next = levels.clone();
        for &i in &levels {
            for &b in &basic {
                next.push(left.meet(i, b));
            }
        }
        next.sort_unstable();
        next.dedup();
        levels = next;
        results.push(singular_part(l, &left, &essential_over(&left, &levels)));
    }
    let exact = results[depth + 1] == results[depth];
    Ok(BoundedSingular { submodule: results.swap_remove(depth), depth, exact })
}

/// `𝒵(L)`, the largest `M`-singular submodule of `L`.
///
/// Every cyclic `R/I` with `I ⊇ Ann_R(M)` lies in `σ[M]`, so `w` is
/// `M`-singular exactly when `ann(w)` is essential over such an `I`.
pub fn m_singular_submodule(m: &FiniteModule, l: &FiniteModule, caps: &Caps) -> Result<Submodule> {
    m.check_same_ring(l)?;
    let left = all_submodules(&regular_module(m.ring_arc()), caps)?;
    let basic = element_annihilator_ids(m, &left);
    let floor = basic.iter().fold(left.top_id(), |acc, &b| left.meet(acc, b));
    let levels: Vec<usize> = (0..left.len()).filter(|&i| left.is_subset(floor, i)).collect();
    Ok(singular_part(l, &left, &essential_over(&left, &levels)))
}

/// An iso class of indecomposable injectives in `σ[M]` obtained from a simple
/// submodule of `M`.
#[derive(Debug, Clone, Serialize)]
pub struct InjectiveClass {
    pub hull: MInjectiveHull,
    /// Atoms of the lattice whose hull lies in this class.
    pub atoms: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InjectiveClasses {
    pub classes: Vec<InjectiveClass>,
    /// `M̂`, the hull of `M` in `σ[M]`.
    pub module_hull: FiniteModule,
}

/// Hulls of the uniform submodules of `M`, up to isomorphism, that are
/// torsion free for the theory cogenerated by `M`.
///
/// Every uniform submodule has the same hull as the atom it contains, so
/// only atoms are visited.
pub fn indecomposable_injectives(a: &ModuleAnalysis) -> Result<InjectiveClasses> {
    let m = a.module();
    let caps = a.caps();
    let module_hull = m_injective_hull(m, m, caps)?.module;
    let mut simples: Vec<(FiniteModule, Vec<usize>)> = Vec::new();
    for &atom in a.atoms() {
        let s = a.sub_module(atom);
        let mut placed = false;
        for (rep, ids) in simples.iter_mut() {
            if are_isomorphic(rep, &s, caps)?.is_some() {
                ids.push(atom);
                placed = true;
                break;
            }
        }
        if !placed {
            simples.push((s, vec![atom]));
        }
    }
    let mut classes: Vec<InjectiveClass> = Vec::new();
    for (s, atoms) in simples {
        let hull = m_injective_hull(m, &s, caps)?;
        if !reject(&hull.module, &module_hull, caps)?.is_zero() {
            continue;
        }
        let mut merged = false;
        for class in classes.iter_mut() {
            if are_isomorphic(&class.hull.module, &hull.module, caps)?.is_some() {
                class.atoms.extend(&atoms);
                merged = true;
                break;
            }
        }
        if !merged {
            classes.push(InjectiveClass { hull, atoms });
        }
    }
    Ok(InjectiveClasses { classes, module_hull })
}

/// Mutual cogeneration: each module is torsion free for the theory
/// cogenerated by the other.
pub fn cogenerated_theories_equal(x: &FiniteModule, y: &FiniteModule, caps: &Caps) -> Result<bool> {
    x.check_same_ring(y)?;
    let ex = injective_hull(x, caps)?.ambient;
    let ey = injective_hull(y, caps)?.ambient;
    Ok(reject(x, &ey, caps)?.is_zero() && reject(y, &ex, caps)?.is_zero())
}

#[derive(Debug, Clone, Serialize)]
pub struct TorsionProfile {
    pub module: FiniteModule,
    pub reject_in: BTreeMap<String, Submodule>,
}

pub fn torsion_profile(l: &FiniteModule, tests: &[FiniteModule], caps: &Caps) -> Result<TorsionProfile> {
    let mut reject_in = BTreeMap::new();
    for e in tests {
        l.check_same_ring(e)?;
        reject_in.insert(e.name().to_string(), reject(l, e, caps)?);
    }
    Ok(TorsionProfile { module: l.clone(), reject_in })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::module::{direct_sum, quotient};
    use crate::ring::ring_trivial_extension;

    fn e28() -> Arc<FiniteRing> {
        Arc::new(ring_trivial_extension(&ring_cyclic(2), 2))
    }

    fn simple_of(r: &Arc<FiniteRing>) -> FiniteModule {
        let reg = regular_module(r);
        let a = ModuleAnalysis::new(reg, Config::default()).unwrap();
        let top = a.top();
        let maximal = (0..top).filter(|&id| (id + 1..top).all(|o| !a.subset(id, o))).next().unwrap();
        quotient(a.module(), a.sub(maximal)).0
    }

    #[test]
    fn character_of_cyclic() {
        let caps = Caps::default();
        for n in [2, 6] {
            let r = Arc::new(ring_cyclic(n));
            let c = character_module(&r);
            assert_eq!(c.order(), n);
            assert!(are_isomorphic(&c, &regular_module(&r), &caps).unwrap().is_some());
        }
    }

    #[test]
    fn character_of_e28_has_simple_socle() {
        let c = character_module(&e28());
        assert_eq!(c.order(), 8);
        let a = ModuleAnalysis::new(c, Config::default()).unwrap();
        assert_eq!(a.atoms().len(), 1);
        assert!(a.is_essential(a.socle()));
    }

    #[test]
    fn hull_of_e28_simple() {
        let caps = Caps::default();
        let r = e28();
        let s = simple_of(&r);
        assert_eq!(s.order(), 2);
        let h = injective_hull(&s, &caps).unwrap();
        assert_eq!(h.ambient.order(), 8);
        assert!(h.check());
        let a = ModuleAnalysis::new(h.ambient, Config::default()).unwrap();
        assert_eq!(a.fully_invariant_ids().unwrap().len(), 6);
    }

    #[test]
    fn semisimple_hull_is_itself() {
        let caps = Caps::default();
        let m = regular_module(&Arc::new(ring_cyclic(6)));
        let h = injective_hull(&m, &caps).unwrap();
        assert_eq!(h.ambient.order(), 6);
        assert!(h.check());
        let z4 = regular_module(&Arc::new(ring_cyclic(4)));
        let two = submodule_generate(&z4, [2]);
        let (s, _) = submodule_with_inclusion(&z4, &two);
        assert_eq!(injective_hull(&s, &caps).unwrap().ambient.order(), 4);
    }

    #[test]
    fn m_hulls() {
        let caps = Caps::default();
        let r = e28();
        let s = simple_of(&r);
        let e = injective_hull(&s, &caps).unwrap().ambient;
        let mh = m_injective_hull(&e, &s, &caps).unwrap();
        assert_eq!(mh.module.order(), 8);
        let z6 = regular_module(&Arc::new(ring_cyclic(6)));
        let three = submodule_with_inclusion(&z6, &submodule_generate(&z6, [3])).0;
        assert_eq!(m_injective_hull(&z6, &three, &caps).unwrap().module.order(), 2);
        // Z2 is not in σ[Z3] over Z6
        let two = submodule_with_inclusion(&z6, &submodule_generate(&z6, [2])).0;
        assert!(matches!(m_injective_hull(&two, &three, &caps), Err(Error::NotInSigma { .. })));
    }

    #[test]
    fn singular_submodules() {
        let caps = Caps::default();
        let z4 = ModuleAnalysis::new(regular_module(&Arc::new(ring_cyclic(4))), Config::default()).unwrap();
        assert_eq!(k_singular_submodule(&z4).unwrap(), z4.generated([2]));
        let b = m_singular_submodule_bounded(z4.module(), z4.module(), 1, &caps).unwrap();
        assert_eq!(b.submodule.elements(), vec![0, 2]);
        assert!(b.exact);
        let z6 = regular_module(&Arc::new(ring_cyclic(6)));
        for d in 0..3 {
            assert!(m_singular_submodule_bounded(&z6, &z6, d, &caps).unwrap().submodule.is_zero());
        }
        assert!(m_singular_submodule(&z6, &z6, &caps).unwrap().is_zero());
        assert_eq!(m_singular_submodule(z4.module(), z4.module(), &caps).unwrap().elements(), vec![0, 2]);
        let r = e28();
        let s = simple_of(&r);
        let reg = regular_module(&r);
        assert_eq!(m_singular_submodule(&reg, &s, &caps).unwrap().len(), 2);
    }

    #[test]
    fn injective_classes() {
        let z6 = ModuleAnalysis::new(regular_module(&Arc::new(ring_cyclic(6))), Config::default()).unwrap();
        let classes = indecomposable_injectives(&z6).unwrap();
        assert_eq!(classes.classes.len(), 2);
        let caps = Caps::default();
        let s = simple_of(&e28());
        let e = injective_hull(&s, &caps).unwrap().ambient;
        let a = ModuleAnalysis::new(e, Config::default()).unwrap();
        let classes = indecomposable_injectives(&a).unwrap();
        assert_eq!(classes.classes.len(), 1);
        assert!(are_isomorphic(&classes.classes[0].hull.module, a.module(), &caps).unwrap().is_some());
    }

    #[test]
    fn cogeneration() {
        let caps = Caps::default();
        let z6 = regular_module(&Arc::new(ring_cyclic(6)));
        let q2 = quotient(&z6, &submodule_generate(&z6, [2])).0;
        let q3 = quotient(&z6, &submodule_generate(&z6, [3])).0;
        assert!(cogenerated_theories_equal(&q2, &q2, &caps).unwrap());
        assert!(!cogenerated_theories_equal(&q2, &q3, &caps).unwrap());
        let (zz, _, _) = direct_sum(&z6, &z6).unwrap();
        assert!(cogenerated_theories_equal(&z6, &zz, &caps).unwrap());
        assert!(reject(&z6, &zero_module(z6.ring_arc()), &caps).unwrap().len() == 6);
    }
}
