//! Finite left modules over a [`FiniteRing`].

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Caps;
use crate::error::{cap, Error, Result};
use crate::hom::Homomorphism;
use crate::ring::{check_abelian_group, check_square, FiniteRing, RingTables};
use crate::submodule::Submodule;

/// Raw module description. `action[r][x]` is `r·x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleTables {
    pub order: usize,
    pub add: Vec<Vec<usize>>,
    pub zero: usize,
    pub action: Vec<Vec<usize>>,
}

#[derive(Clone)]
pub struct FiniteModule {
    ring: Arc<FiniteRing>,
    order: usize,
    add: Vec<usize>,
    neg: Vec<usize>,
    zero: usize,
    action: Vec<usize>,
    name: String,
}

impl fmt::Debug for FiniteModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteModule")
            .field("name", &self.name)
            .field("ring", &self.ring.name())
            .field("order", &self.order)
            .finish()
    }
}

impl PartialEq for FiniteModule {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.zero == other.zero
            && self.add == other.add
            && self.action == other.action
            && *self.ring == *other.ring
    }
}

impl Eq for FiniteModule {}

/// Serialized as `{name, ring, tables}` with the ring given by name.
impl Serialize for FiniteModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FiniteModule", 3)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("ring", self.ring.name())?;
        st.serialize_field("tables", &self.to_tables())?;
        st.end()
    }
}

fn violation(axiom: &str, witness: &[usize]) -> Error {
    Error::AxiomViolation { axiom: axiom.to_string(), witness: witness.to_vec() }
}

/// Validates the module axioms exhaustively. Witnesses for action axioms are
/// `(r, s, x)` or `(r, x, y)` as appropriate.
pub fn validate_module(ring: Arc<FiniteRing>, tables: &ModuleTables, name: &str, caps: &Caps) -> Result<FiniteModule> {
    let n = tables.order;
    if n == 0 {
        return Err(Error::MalformedTables("module order must be positive".into()));
    }
    if n > caps.module_order {
        return Err(cap("module order", caps.module_order));
    }
    if tables.zero >= n {
        return Err(Error::MalformedTables("zero out of range".into()));
    }
    let q = ring.order();
    let add = check_square("add", &tables.add, n, n, n)?;
    let action = check_square("action", &tables.action, q, n, n)?;
    let neg = check_abelian_group(n, &add, tables.zero)?;
    let ad = |a: usize, b: usize| add[a * n + b];
    let act = |r: usize, x: usize| action[r * n + x];
    for x in 0..n {
        if act(ring.one(), x) != x {
            return Err(violation("unital", &[x]));
        }
    }
    for r in 0..q {
        for s in 0..q {
            let rs = ring.mul(r, s);
            let r_plus_s = ring.add(r, s);
            for x in 0..n {
                if act(rs, x) != act(r, act(s, x)) {
                    return Err(violation("action_associativity", &[r, s, x]));
                }
                if act(r_plus_s, x) != ad(act(r, x), act(s, x)) {
                    return Err(violation("ring_distributivity", &[r, s, x]));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if act(r, ad(x, y)) != ad(act(r, x), act(r, y)) {
                    return Err(violation("module_distributivity", &[r, x, y]));
                }
            }
        }
    }
    Ok(FiniteModule { ring, order: n, add, neg, zero: tables.zero, action, name: name.to_string() })
}

impl FiniteModule {
    /// Builds a module from an element list with operations closed on it.
    pub(crate) fn from_elements<T, A, C>(ring: Arc<FiniteRing>, name: &str, elems: Vec<T>, zero: &T, add: A, act: C) -> Self
    where
        T: std::hash::Hash + Eq + Clone,
        A: Fn(&T, &T) -> T,
        C: Fn(usize, &T) -> T,
    {
        let index: HashMap<T, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elems.len();
        let q = ring.order();
        let mut add_t = vec![0; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                add_t[i * n + j] = index[&add(a, b)];
            }
        }
        let mut action = vec![0; q * n];
        for r in 0..q {
            for (i, a) in elems.iter().enumerate() {
                action[r * n + i] = index[&act(r, a)];
            }
        }
        Self::from_flat(ring, name, n, add_t, index[zero], action)
    }

    pub(crate) fn from_flat(ring: Arc<FiniteRing>, name: &str, n: usize, add: Vec<usize>, zero: usize, action: Vec<usize>) -> Self {
        let neg = (0..n).map(|a| (0..n).find(|&b| add[a * n + b] == zero).expect("additive inverse")).collect();
        FiniteModule { ring, order: n, add, neg, zero, action, name: name.to_string() }
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b])
    }

    #[inline]
    pub fn act(&self, r: usize, x: usize) -> usize {
        self.action[r * self.order + x]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_zero_module(&self) -> bool {
        self.order == 1
    }

    pub fn same_ring(&self, other: &FiniteModule) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    pub(crate) fn check_same_ring(&self, other: &FiniteModule) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Left annihilator ideal `{r : r·x = 0}` as a bitset over ring elements.
    pub fn element_annihilator(&self, x: usize) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.ring.order());
        for r in self.ring.elements() {
            if self.act(r, x) == self.zero {
                bits.insert(r);
            }
        }
        bits
    }

    /// The cyclic submodule `Rx` as a set.
    pub fn cyclic_set(&self, x: usize) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.order);
        for r in self.ring.elements() {
            bits.insert(self.act(r, x));
        }
        bits
    }

    pub fn to_tables(&self) -> ModuleTables {
        let n = self.order;
        ModuleTables {
            order: n,
            add: self.add.chunks(n).map(<[usize]>::to_vec).collect(),
            zero: self.zero,
            action: self.action.chunks(n).map(<[usize]>::to_vec).collect(),
        }
    }

    /// Same module with element `i` renamed to `perm[i]`; also returns the
    /// isomorphism `self → relabelled`.
    pub fn relabel(&self, perm: &[usize]) -> (FiniteModule, Homomorphism) {
        let n = self.order;
        assert_eq!(perm.len(), n, "permutation length");
        let q = self.ring.order();
        let mut add = vec![0; n * n];
        let mut action = vec![0; q * n];
        for a in 0..n {
            for b in 0..n {
                add[perm[a] * n + perm[b]] = perm[self.add(a, b)];
            }
            for r in 0..q {
                action[r * n + perm[a]] = perm[self.act(r, a)];
            }
        }
        let m = Self::from_flat(self.ring.clone(), &self.name, n, add, perm[self.zero], action);
        (m, Homomorphism::new(perm.to_vec()))
    }

    /// Hex digest of the canonical ring and module tables.
    pub fn structure_hash(&self) -> String {
        #[derive(Serialize)]
        struct Canonical<'a> {
            ring: &'a RingTables,
            module: &'a ModuleTables,
        }
        let ring = self.ring.to_tables();
        let module = self.to_tables();
        let bytes = serde_json::to_vec(&Canonical { ring: &ring, module: &module }).expect("tables serialize");
        let digest = Sha256::digest(&bytes);
        hex::encode(&digest[..8])
    }
}

/// `R` as a left module over itself.
pub fn regular_module(r: &Arc<FiniteRing>) -> FiniteModule {
    let n = r.order();
    let mut add = vec![0; n * n];
    let mut action = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            add[a * n + b] = r.add(a, b);
            action[a * n + b] = r.mul(a, b);
        }
    }
    FiniteModule::from_flat(r.clone(), &format!("{}-reg", r.name()), n, add, r.zero(), action)
}

/// The zero module over `r`.
pub fn zero_module(r: &Arc<FiniteRing>) -> FiniteModule {
    FiniteModule::from_flat(r.clone(), "0", 1, vec![0], 0, vec![0; r.order()])
}

/// `a ⊕ b` with element `(x, y)` at index `x·|b| + y`, plus both injections.
pub fn direct_sum(a: &FiniteModule, b: &FiniteModule) -> Result<(FiniteModule, Homomorphism, Homomorphism)> {
    a.check_same_ring(b)?;
    let (na, nb) = (a.order, b.order);
    let n = na * nb;
    let q = a.ring.order();
    let idx = |x: usize, y: usize| x * nb + y;
    let mut add = vec![0; n * n];
    let mut action = vec![0; q * n];
    for x1 in 0..na {
        for y1 in 0..nb {
            let p = idx(x1, y1);
            for x2 in 0..na {
                for y2 in 0..nb {
                    add[p * n + idx(x2, y2)] = idx(a.add(x1, x2), b.add(y1, y2));
                }
            }
            for r in 0..q {
                action[r * n + p] = idx(a.act(r, x1), b.act(r, y1));
            }
        }
    }
    let sum = FiniteModule::from_flat(a.ring.clone(), &format!("{}+{}", a.name, b.name), n, add, idx(a.zero, b.zero), action);
    let ia = Homomorphism::new((0..na).map(|x| idx(x, b.zero)).collect());
    let ib = Homomorphism::new((0..nb).map(|y| idx(a.zero, y)).collect());
    Ok((sum, ia, ib))
}

/// Direct sum of a list of modules, with the injection of every summand.
pub fn direct_sum_all(parts: &[FiniteModule]) -> Result<(FiniteModule, Vec<Homomorphism>)> {
    let first = parts.first().expect("at least one summand");
    let mut total = first.clone();
    let mut injections = vec![Homomorphism::identity(first.order)];
    for part in &parts[1..] {
        let (next, left, right) = direct_sum(&total, part)?;
        injections = injections.into_iter().map(|h| left.after(&h)).collect();
        injections.push(right);
        total = next;
    }
    Ok((total, injections))
}

/// `m^k`.
pub fn power(m: &FiniteModule, k: usize) -> Result<FiniteModule> {
    if k == 0 {
        return Ok(zero_module(&m.ring));
    }
    let parts = vec![m.clone(); k];
    Ok(direct_sum_all(&parts)?.0.with_name(format!("{}^{k}", m.name)))
}

/// Coset module `m/k`, cosets indexed in order of their least element, plus
/// the projection.
pub fn quotient(m: &FiniteModule, k: &Submodule) -> (FiniteModule, Homomorphism) {
    let n = m.order;
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    let members: Vec<usize> = k.elements();
    for x in 0..n {
        if class[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &y in &members {
            class[m.add(x, y)] = c;
        }
    }
    let c = reps.len();
    let q = m.ring.order();
    let mut add = vec![0; c * c];
    let mut action = vec![0; q * c];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            add[i * c + j] = class[m.add(a, b)];
        }
        for r in 0..q {
            action[r * c + i] = class[m.act(r, a)];
        }
    }
    let module = FiniteModule::from_flat(m.ring.clone(), &format!("{}/K", m.name), c, add, class[m.zero], action);
    (module, Homomorphism::new(class))
}

/// A submodule as a module in its own right, elements in increasing index
/// order, plus the inclusion.
pub fn submodule_as_module(m: &FiniteModule, s: &Submodule) -> FiniteModule {
    submodule_with_inclusion(m, s).0
}

pub fn submodule_with_inclusion(m: &FiniteModule, s: &Submodule) -> (FiniteModule, Homomorphism) {
    let members = s.elements();
    let mut local = vec![usize::MAX; m.order];
    for (i, &x) in members.iter().enumerate() {
        local[x] = i;
    }
    let c = members.len();
    let q = m.ring.order();
    let mut add = vec![0; c * c];
    let mut action = vec![0; q * c];
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate() {
            add[i * c + j] = local[m.add(a, b)];
        }
        for r in 0..q {
            action[r * c + i] = local[m.act(r, a)];
        }
    }
    let module = FiniteModule::from_flat(m.ring.clone(), &format!("{}<", m.name), c, add, local[m.zero], action);
    (module, Homomorphism::new(members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ring_cyclic, ring_trivial_extension};
    use crate::submodule::submodule_generate;

    #[test]
    fn regular_modules_validate() {
        for n in [1, 2, 4, 6] {
            let r = Arc::new(ring_cyclic(n));
            let m = regular_module(&r);
            validate_module(r.clone(), &m.to_tables(), "again", &Caps::default()).unwrap();
        }
        let r = Arc::new(ring_trivial_extension(&ring_cyclic(2), 2));
        validate_module(r.clone(), &regular_module(&r).to_tables(), "x", &Caps::default()).unwrap();
    }

    #[test]
    fn broken_action_is_rejected() {
        let r = Arc::new(ring_cyclic(4));
        let mut t = regular_module(&r).to_tables();
        t.action[3][1] = 1;
        let err = validate_module(r, &t, "bad", &Caps::default()).unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { .. }));
    }

    #[test]
    fn quotient_of_z6_by_2z6() {
        let r = Arc::new(ring_cyclic(6));
        let m = regular_module(&r);
        let k = submodule_generate(&m, [2]);
        let (q, pi) = quotient(&m, &k);
        assert_eq!(q.order(), 2);
        assert_eq!(pi.apply(3), 1);
        let (q0, _) = quotient(&m, &submodule_generate(&m, []));
        assert_eq!(q0, m.clone().with_name(q0.name()));
        let (qm, _) = quotient(&m, &submodule_generate(&m, [1]));
        assert!(qm.is_zero_module());
    }

    #[test]
    fn direct_sum_shapes() {
        let r = Arc::new(ring_cyclic(6));
        let m = regular_module(&r);
        let z = zero_module(&r);
        let (s, ia, ib) = direct_sum(&m, &z).unwrap();
        assert_eq!(s.order(), 6);
        assert_eq!(ia.map().len(), 6);
        assert_eq!(ib.map(), &[0]);
        let (zz, _, _) = direct_sum(&z, &z).unwrap();
        assert!(zz.is_zero_module());
        let other = Arc::new(ring_cyclic(4));
        assert_eq!(direct_sum(&m, &regular_module(&other)).unwrap_err(), Error::RingMismatch);
    }

    #[test]
    fn hash_is_stable_and_discriminates() {
        let r = Arc::new(ring_cyclic(6));
        let m = regular_module(&r);
        assert_eq!(m.structure_hash(), regular_module(&r).structure_hash());
        let r4 = Arc::new(ring_cyclic(4));
        assert_ne!(m.structure_hash(), regular_module(&r4).structure_hash());
    }
}
