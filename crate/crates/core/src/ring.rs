//! Finite rings with unity given by Cayley tables.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::error::{cap, Error, Result};

/// Raw ring description: square tables over element indices `0..order`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingTables {
    pub order: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteRing {
    order: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    zero: usize,
    one: usize,
    name: String,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

pub(crate) fn check_square(what: &str, table: &[Vec<usize>], rows: usize, cols: usize, range: usize) -> Result<Vec<usize>> {
    if table.len() != rows {
        return Err(Error::MalformedTables(format!("{what} has {} rows, expected {rows}", table.len())));
    }
    let mut flat = Vec::with_capacity(rows * cols);
    for (i, row) in table.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::MalformedTables(format!(
                "{what} row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for &v in row {
            if v >= range {
                return Err(Error::MalformedTables(format!("{what} row {i} holds index {v} out of range")));
            }
            flat.push(v);
        }
    }
    Ok(flat)
}

fn violation(axiom: &str, witness: &[usize]) -> Error {
    Error::AxiomViolation { axiom: axiom.to_string(), witness: witness.to_vec() }
}

/// Checks that `add` with identity `zero` is an abelian group on `0..n` and
/// returns the negation table.
pub(crate) fn check_abelian_group(n: usize, add: &[usize], zero: usize) -> Result<Vec<usize>> {
    let op = |a: usize, b: usize| add[a * n + b];
    for a in 0..n {
        if op(a, zero) != a || op(zero, a) != a {
            return Err(violation("add_identity", &[a]));
        }
        for b in 0..n {
            if op(a, b) != op(b, a) {
                return Err(violation("add_commutativity", &[a, b]));
            }
        }
    }
    let mut neg = vec![usize::MAX; n];
    for a in 0..n {
        match (0..n).find(|&b| op(a, b) == zero) {
            Some(b) => neg[a] = b,
            None => return Err(violation("add_inverse", &[a])),
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = op(a, b);
            for c in 0..n {
                if op(ab, c) != op(a, op(b, c)) {
                    return Err(violation("add_associativity", &[a, b, c]));
                }
            }
        }
    }
    Ok(neg)
}

/// Validates ring axioms exhaustively.
pub fn validate_ring(tables: &RingTables, name: &str, caps: &Caps) -> Result<FiniteRing> {
    let n = tables.order;
    if n == 0 {
        return Err(Error::MalformedTables("ring order must be positive".into()));
    }
    if n > caps.ring_order {
        return Err(cap("ring order", caps.ring_order));
    }
    if tables.zero >= n || tables.one >= n {
        return Err(Error::MalformedTables("zero or one out of range".into()));
    }
    let add = check_square("add", &tables.add, n, n, n)?;
    let mul = check_square("mul", &tables.mul, n, n, n)?;
    let neg = check_abelian_group(n, &add, tables.zero)?;
    let ad = |a: usize, b: usize| add[a * n + b];
    let mu = |a: usize, b: usize| mul[a * n + b];
    for a in 0..n {
        for b in 0..n {
            let ab = mu(a, b);
            for c in 0..n {
                if mu(ab, c) != mu(a, mu(b, c)) {
                    return Err(violation("associativity", &[a, b, c]));
                }
            }
        }
    }
    for a in 0..n {
        if mu(tables.one, a) != a {
            return Err(violation("left_identity", &[a]));
        }
        if mu(a, tables.one) != a {
            return Err(violation("right_identity", &[a]));
        }
        if mu(tables.zero, a) != tables.zero || mu(a, tables.zero) != tables.zero {
            return Err(violation("zero_annihilates", &[a]));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mu(a, ad(b, c)) != ad(mu(a, b), mu(a, c)) {
                    return Err(violation("left_distributivity", &[a, b, c]));
                }
                if mu(ad(a, b), c) != ad(mu(a, c), mu(b, c)) {
                    return Err(violation("right_distributivity", &[a, b, c]));
                }
            }
        }
    }
    Ok(FiniteRing { order: n, add, mul, neg, zero: tables.zero, one: tables.one, name: name.to_string() })
}

impl FiniteRing {
    /// Builds a ring from an explicit element list and operations on it.
    /// Elements are re-indexed in the order given; the operations must be
    /// closed on the list.
    pub(crate) fn from_elements<T, A, M>(name: &str, elems: Vec<T>, zero: &T, one: &T, add: A, mul: M) -> Self
    where
        T: std::hash::Hash + Eq + Clone,
        A: Fn(&T, &T) -> T,
        M: Fn(&T, &T) -> T,
    {
        let n = elems.len();
        let index: HashMap<T, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut add_t = vec![0; n * n];
        let mut mul_t = vec![0; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                add_t[i * n + j] = index[&add(a, b)];
                mul_t[i * n + j] = index[&mul(a, b)];
            }
        }
        let zero = index[zero];
        let one = index[one];
        let neg = (0..n).map(|a| (0..n).find(|&b| add_t[a * n + b] == zero).expect("additive inverse")).collect();
        FiniteRing { order: n, add: add_t, mul: mul_t, neg, zero, one, name: name.to_string() }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b])
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Additive order of an element.
    pub fn additive_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.zero {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    /// Exponent of the additive group.
    pub fn additive_exponent(&self) -> usize {
        self.elements().map(|a| self.additive_order(a)).fold(1, lcm)
    }

    pub fn to_tables(&self) -> RingTables {
        let n = self.order;
        RingTables {
            order: n,
            add: self.add.chunks(n).map(<[usize]>::to_vec).collect(),
            mul: self.mul.chunks(n).map(<[usize]>::to_vec).collect(),
            zero: self.zero,
            one: self.one,
        }
    }

    /// Same ring with element `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> FiniteRing {
        let n = self.order;
        assert_eq!(perm.len(), n, "permutation length");
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        let mut neg = vec![0; n];
        for a in 0..n {
            neg[perm[a]] = perm[self.neg[a]];
            for b in 0..n {
                add[perm[a] * n + perm[b]] = perm[self.add(a, b)];
                mul[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        FiniteRing { order: n, add, mul, neg, zero: perm[self.zero], one: perm[self.one], name: self.name.clone() }
    }

    /// Subgroup of `(R, +)` generated by `seeds`.
    pub fn additive_closure(&self, seeds: impl IntoIterator<Item = usize>) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.order);
        set.insert(self.zero);
        let mut members = vec![self.zero];
        let mut queue: Vec<usize> = seeds.into_iter().collect();
        while let Some(x) = queue.pop() {
            if set.contains(x) {
                continue;
            }
            let snapshot = members.len();
            set.insert(x);
            members.push(x);
            for i in 0..snapshot {
                let s = self.add(members[i], x);
                if !set.contains(s) {
                    queue.push(s);
                }
            }
            let d = self.add(x, x);
            if !set.contains(d) {
                queue.push(d);
            }
        }
        set
    }

    /// Two-sided ideal generated by `seeds`.
    pub fn ideal_generated(&self, seeds: impl IntoIterator<Item = usize>) -> Ideal {
        let mut products = BTreeSet::new();
        for x in seeds {
            for a in self.elements() {
                let ax = self.mul(a, x);
                for b in self.elements() {
                    products.insert(self.mul(ax, b));
                }
            }
        }
        Ideal { bits: self.additive_closure(products) }
    }

    pub fn is_ideal(&self, set: &FixedBitSet) -> bool {
        if !set.contains(self.zero) {
            return false;
        }
        let members: Vec<usize> = set.ones().collect();
        members.iter().all(|&x| {
            members.iter().all(|&y| set.contains(self.add(x, y)))
                && self.elements().all(|r| set.contains(self.mul(r, x)) && set.contains(self.mul(x, r)))
        })
    }

    /// Quotient by a two-sided ideal; cosets are ordered by their least element.
    pub fn quotient(&self, ideal: &Ideal) -> (FiniteRing, Vec<usize>) {
        let n = self.order;
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if class[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for i in ideal.bits.ones() {
                class[self.add(x, i)] = c;
            }
        }
        let q = reps.len();
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                add[i * q + j] = class[self.add(a, b)];
                mul[i * q + j] = class[self.mul(a, b)];
            }
        }
        let zero = class[self.zero];
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == zero).expect("inverse")).collect();
        let ring = FiniteRing {
            order: q,
            add,
            mul,
            neg,
            zero,
            one: class[self.one],
            name: format!("{}/I", self.name),
        };
        (ring, class)
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// `Z_n` with arithmetic mod `n`.
pub fn ring_cyclic(n: usize) -> FiniteRing {
    assert!(n >= 1, "Z_n needs n >= 1");
    let elems: Vec<usize> = (0..n).collect();
    FiniteRing::from_elements(&format!("Z{n}"), elems, &0, &(1 % n), |a, b| (a + b) % n, |a, b| (a * b) % n)
}

/// Trivial extension `A ⋉ A^k`: pairs `(s, x)` with `(s,x)(t,y) = (st, sy + xt)`.
/// Elements are ordered lexicographically on `(s, x_1, .., x_k)`.
pub fn ring_trivial_extension(a: &FiniteRing, bimodule_rank: usize) -> FiniteRing {
    let k = bimodule_rank;
    let width = k + 1;
    let elems: Vec<Vec<usize>> = tuples(a.order, width);
    let zero = vec![a.zero; width];
    let mut one = vec![a.zero; width];
    one[0] = a.one;
    let add = |p: &Vec<usize>, q: &Vec<usize>| p.iter().zip(q).map(|(&x, &y)| a.add(x, y)).collect::<Vec<_>>();
    let mul = |p: &Vec<usize>, q: &Vec<usize>| {
        let mut out = Vec::with_capacity(width);
        out.push(a.mul(p[0], q[0]));
        for i in 1..width {
            out.push(a.add(a.mul(p[0], q[i]), a.mul(p[i], q[0])));
        }
        out
    };
    FiniteRing::from_elements(&format!("{}x{}^{k}", a.name, a.name), elems, &zero, &one, add, mul)
}

/// Direct product `A × B`, lexicographic on `(a, b)`.
pub fn ring_product(a: &FiniteRing, b: &FiniteRing) -> FiniteRing {
    let elems: Vec<(usize, usize)> = (0..a.order).flat_map(|x| (0..b.order).map(move |y| (x, y))).collect();
    FiniteRing::from_elements(
        &format!("{}*{}", a.name, b.name),
        elems,
        &(a.zero, b.zero),
        &(a.one, b.one),
        |p, q| (a.add(p.0, q.0), b.add(p.1, q.1)),
        |p, q| (a.mul(p.0, q.0), b.mul(p.1, q.1)),
    )
}

/// Upper triangular 2×2 matrices over `A`, entries `(a11, a12, a22)`.
pub fn ring_upper_triangular(a: &FiniteRing) -> FiniteRing {
    let elems = tuples(a.order, 3);
    let zero = vec![a.zero; 3];
    let one = vec![a.one, a.zero, a.one];
    FiniteRing::from_elements(
        &format!("T2({})", a.name),
        elems,
        &zero,
        &one,
        |p, q| p.iter().zip(q).map(|(&x, &y)| a.add(x, y)).collect::<Vec<_>>(),
        |p, q| {
            vec![
                a.mul(p[0], q[0]),
                a.add(a.mul(p[0], q[1]), a.mul(p[1], q[2])),
                a.mul(p[2], q[2]),
            ]
        },
    )
}

/// `Z_n[x] / (x^d + c_{d-1} x^{d-1} + .. + c_0)` for `modulus = [c_0, .., c_{d-1}]`.
/// Elements are coefficient vectors `[a_0, .., a_{d-1}]` in lexicographic order.
pub fn ring_poly_quotient(n: usize, modulus: &[usize]) -> FiniteRing {
    let d = modulus.len();
    assert!(d >= 1 && n >= 1);
    let elems = tuples(n, d);
    let zero = vec![0; d];
    let mut one = vec![0; d];
    one[0] = 1 % n;
    let name = format!("Z{n}[x]/{modulus:?}");
    FiniteRing::from_elements(
        &name,
        elems,
        &zero,
        &one,
        |p, q| p.iter().zip(q).map(|(x, y)| (x + y) % n).collect::<Vec<_>>(),
        |p, q| {
            let mut full = vec![0usize; 2 * d];
            for i in 0..d {
                for j in 0..d {
                    full[i + j] = (full[i + j] + p[i] * q[j]) % n;
                }
            }
            for deg in (d..2 * d).rev() {
                let c = full[deg];
                if c == 0 {
                    continue;
                }
                full[deg] = 0;
                // x^d = -(c_0 + .. + c_{d-1} x^{d-1})
                for (i, &m) in modulus.iter().enumerate() {
                    let idx = deg - d + i;
                    full[idx] = (full[idx] + (n - (c * m) % n)) % n;
                }
            }
            full.truncate(d);
            full
        },
    )
}

fn tuples(base: usize, width: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..width {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..base).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// A two-sided ideal, stored as the set of its element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ideal {
    bits: FixedBitSet,
}

impl Ideal {
    pub fn from_bits(bits: FixedBitSet) -> Self {
        Ideal { bits }
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
        self.len() == 0
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.bits.is_subset(&other.bits)
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{:?}", self.elements())
    }
}

impl Ord for Ideal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.bits.ones().cmp(other.bits.ones()))
    }
}

impl PartialOrd for Ideal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Ideal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(s)
    }
}

/// All two-sided ideals, sorted by `(size, elements)`.
pub fn ideals(r: &FiniteRing) -> Vec<Ideal> {
    let principal: BTreeSet<Ideal> = r.elements().map(|x| r.ideal_generated([x])).collect();
    let principal: Vec<Ideal> = principal.into_iter().collect();
    let zero = r.ideal_generated(std::iter::empty());
    let mut found: BTreeSet<Ideal> = BTreeSet::new();
    found.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(current) = frontier.pop() {
        for p in &principal {
            if p.is_subset(&current) {
                continue;
            }
            let mut sum = FixedBitSet::with_capacity(r.order);
            for a in current.bits.ones() {
                for b in p.bits.ones() {
                    sum.insert(r.add(a, b));
                }
            }
            let next = Ideal { bits: sum };
            if found.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    found.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn cyclic_rings_validate() {
        for n in 1..=12 {
            let r = ring_cyclic(n);
            assert_eq!(r.order(), n);
            validate_ring(&r.to_tables(), "again", &caps()).unwrap();
        }
        let z1 = ring_cyclic(1);
        assert_eq!(z1.zero(), z1.one());
    }

    #[test]
    fn non_associative_mul_is_rejected() {
        let mut t = ring_cyclic(4).to_tables();
        t.mul[2][2] = 3;
        let err = validate_ring(&t, "bad", &caps()).unwrap_err();
        match err {
            Error::AxiomViolation { axiom, witness } => {
                assert_eq!(axiom, "associativity");
                assert_eq!(witness.len(), 3);
                let (a, b, c) = (witness[0], witness[1], witness[2]);
                let m = |x: usize, y: usize| t.mul[x][y];
                assert_ne!(m(m(a, b), c), m(a, m(b, c)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_tables_are_rejected() {
        let mut t = ring_cyclic(2).to_tables();
        t.add[0].push(0);
        assert!(matches!(validate_ring(&t, "x", &caps()), Err(Error::MalformedTables(_))));
        let mut t = ring_cyclic(2).to_tables();
        t.mul[1][1] = 7;
        assert!(matches!(validate_ring(&t, "x", &caps()), Err(Error::MalformedTables(_))));
    }

    #[test]
    fn order_cap_applies() {
        let small = Caps { ring_order: 4, ..Caps::default() };
        let err = validate_ring(&ring_cyclic(5).to_tables(), "z5", &small).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn z6_ideals() {
        let r = ring_cyclic(6);
        let ids: Vec<Vec<usize>> = ideals(&r).iter().map(Ideal::elements).collect();
        assert_eq!(ids, vec![vec![0], vec![0, 3], vec![0, 2, 4], vec![0, 1, 2, 3, 4, 5]]);
        let z2 = ring_cyclic(2);
        assert_eq!(ideals(&z2).len(), 2);
    }

    #[test]
    fn trivial_extension_of_z2_by_rank_two() {
        let r = ring_trivial_extension(&ring_cyclic(2), 2);
        assert_eq!(r.order(), 8);
        assert!(r.is_commutative());
        validate_ring(&r.to_tables(), "again", &caps()).unwrap();
        let all = ideals(&r);
        assert_eq!(all.len(), 6);
        let maximal: Vec<&Ideal> = all.iter().filter(|i| i.len() < 8 && i.len() == 4).collect();
        assert_eq!(maximal.len(), 1);
        // elements (0, x, y) are indices 0..4
        assert_eq!(maximal[0].elements(), vec![0, 1, 2, 3]);
        assert_eq!(all.iter().filter(|i| i.len() == 2).count(), 3);
    }

    #[test]
    fn trivial_extension_rank_one_is_a_chain() {
        let r = ring_trivial_extension(&ring_cyclic(2), 1);
        assert_eq!(r.order(), 4);
        let sizes: Vec<usize> = ideals(&r).iter().map(Ideal::len).collect();
        assert_eq!(sizes, vec![1, 2, 4]);
    }

    #[test]
    fn constructed_rings_revalidate() {
        let z2 = ring_cyclic(2);
        let z3 = ring_cyclic(3);
        for r in [
            ring_product(&z2, &z3),
            ring_upper_triangular(&z2),
            ring_poly_quotient(2, &[1, 1]),
            ring_poly_quotient(2, &[0, 0]),
            ring_trivial_extension(&ring_cyclic(4), 1),
        ] {
            validate_ring(&r.to_tables(), r.name(), &caps()).unwrap();
        }
        assert!(!ring_upper_triangular(&z2).is_commutative());
        // F4 is a field: two ideals
        assert_eq!(ideals(&ring_poly_quotient(2, &[1, 1])).len(), 2);
    }

    #[test]
    fn quotient_and_relabel() {
        let r = ring_cyclic(12);
        let i = r.ideal_generated([4]);
        let (q, _) = r.quotient(&i);
        assert_eq!(q.order(), 4);
        validate_ring(&q.to_tables(), "q", &caps()).unwrap();
        let perm: Vec<usize> = (0..12).rev().collect();
        let p = r.relabel(&perm);
        validate_ring(&p.to_tables(), "p", &caps()).unwrap();
        assert_eq!(p.zero(), 11);
        assert_eq!(ideals(&p).len(), ideals(&r).len());
    }

    #[test]
    fn ideals_closed_under_sum_and_intersection() {
        let r = ring_trivial_extension(&ring_cyclic(2), 2);
        let all = ideals(&r);
        for a in &all {
            for b in &all {
                let mut inter = a.bits().clone();
                inter.intersect_with(b.bits());
                assert!(all.contains(&Ideal::from_bits(inter)));
                let sum = r.additive_closure(a.elements().into_iter().chain(b.elements()));
                assert!(all.contains(&Ideal::from_bits(sum)));
            }
        }
    }
}
