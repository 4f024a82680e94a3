//! Mechanical checks of the structure statements, each gated on its
//! hypotheses.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde_json::{json, Value};

use crate::analysis::ModuleAnalysis;
use crate::endo::{
    delta_ideal, endomorphism_ring, goldie_data, ideal_nilpotency, is_continuous, jacobson_radical,
    right_singular_ideal, summand_ids, Continuity, EndoRing, GoldieReport,
};
use crate::error::{Error, Result};
use crate::findings::{statement, Finding, Hyp, HypothesisValue, StructureReport, Suite, Verdict, REGISTRY};
use crate::hom::{are_isomorphic, hom_count, reject};
use crate::injective::{
    cogenerated_theories_equal, indecomposable_injectives, injective_hull, k_singular_submodule, m_injective_hull,
    m_singular_submodule, m_singular_submodule_bounded, BoundedSingular, InjectiveClasses,
};
use crate::module::{direct_sum_all, quotient, FiniteModule};
use crate::product::{annihilator_set, nilpotency_index, tm_nilpotency_cycle, AnnihilatorSet};
use crate::ring::{ideals, ring_cyclic, ring_trivial_extension, Ideal};
use crate::spectrum::{is_prime_in, is_semiprime_in, module_is_semiprime, spec_min, SpectrumReport};

struct Outcome {
    holds: bool,
    witness: Value,
}

fn pass() -> Result<Outcome> {
    Ok(Outcome { holds: true, witness: Value::Null })
}

fn fail(witness: Value) -> Result<Outcome> {
    Ok(Outcome { holds: false, witness })
}

fn cached<T>(cell: &OnceLock<Result<T>>, init: impl FnOnce() -> Result<T>) -> Result<&T> {
    match cell.get_or_init(init) {
        Ok(v) => Ok(v),
        Err(e) => Err(e.clone()),
    }
}

/// Largest number of lattice ids used when a check quantifies over pairs of
/// fully invariant submodules.
const PAIR_SAMPLE: usize = 48;

/// Lazily computed data shared by the statement checks on one module.
pub struct Context<'a> {
    a: &'a ModuleAnalysis,
    hyps: [OnceLock<Result<HypothesisValue>>; 11],
    anns: OnceLock<Result<Vec<usize>>>,
    spectrum: OnceLock<Result<SpectrumReport>>,
    ann_set: OnceLock<Result<AnnihilatorSet>>,
    module_hull: OnceLock<Result<FiniteModule>>,
    classes: OnceLock<Result<InjectiveClasses>>,
    endo: OnceLock<Result<EndoRing>>,
    delta: OnceLock<Result<Ideal>>,
    jacobson: OnceLock<Result<Ideal>>,
    right_singular: OnceLock<Result<Ideal>>,
    z_exact: OnceLock<Result<usize>>,
    z_bounded: OnceLock<Result<BoundedSingular>>,
    continuity: OnceLock<Result<Continuity>>,
    n_hulls: OnceLock<Result<Vec<FiniteModule>>>,
}

fn hyp_slot(h: Hyp) -> usize {
    h as usize
}

impl<'a> Context<'a> {
    pub fn new(a: &'a ModuleAnalysis) -> Self {
        Context {
            a,
            hyps: Default::default(),
            anns: OnceLock::new(),
            spectrum: OnceLock::new(),
            ann_set: OnceLock::new(),
            module_hull: OnceLock::new(),
            classes: OnceLock::new(),
            endo: OnceLock::new(),
            delta: OnceLock::new(),
            jacobson: OnceLock::new(),
            right_singular: OnceLock::new(),
            z_exact: OnceLock::new(),
            z_bounded: OnceLock::new(),
            continuity: OnceLock::new(),
            n_hulls: OnceLock::new(),
        }
    }

    fn sub(&self, id: usize) -> Value {
        json!(self.a.sub(id).elements())
    }

    fn ids(&self) -> std::ops::Range<usize> {
        0..self.a.lattice().len()
    }

    fn nonzero_ids(&self) -> std::ops::Range<usize> {
        1..self.a.lattice().len()
    }

    fn proper_fi(&self) -> Result<Vec<usize>> {
        Ok(self.a.fully_invariant_ids()?.into_iter().filter(|&n| n != self.a.top()).collect())
    }

    fn sample_ids(&self) -> Result<Vec<usize>> {
        let mut ids: Vec<usize> = self.a.fully_invariant_ids()?.into_iter().take(PAIR_SAMPLE).collect();
        if !ids.contains(&self.a.top()) {
            ids.push(self.a.top());
        }
        Ok(ids)
    }

    fn anns(&self) -> Result<&Vec<usize>> {
        cached(&self.anns, || self.ids().map(|n| self.a.ann_left(n)).collect())
    }

    fn ann(&self, n: usize) -> Result<usize> {
        Ok(self.anns()?[n])
    }

    fn spectrum(&self) -> Result<&SpectrumReport> {
        cached(&self.spectrum, || spec_min(self.a))
    }

    fn ann_set(&self) -> Result<&AnnihilatorSet> {
        cached(&self.ann_set, || annihilator_set(self.a))
    }

    fn module_hull(&self) -> Result<&FiniteModule> {
        cached(&self.module_hull, || Ok(m_injective_hull(self.a.module(), self.a.module(), self.a.caps())?.module))
    }

    fn classes(&self) -> Result<&InjectiveClasses> {
        cached(&self.classes, || indecomposable_injectives(self.a))
    }

    fn endo(&self) -> Result<&EndoRing> {
        cached(&self.endo, || endomorphism_ring(self.a))
    }

    fn delta(&self) -> Result<&Ideal> {
        cached(&self.delta, || delta_ideal(self.a, self.endo()?))
    }

    fn jacobson(&self) -> Result<&Ideal> {
        cached(&self.jacobson, || Ok(jacobson_radical(self.endo()?.ring())))
    }

    fn right_singular(&self) -> Result<&Ideal> {
        cached(&self.right_singular, || right_singular_ideal(self.endo()?.ring(), self.a.caps().ring_order))
    }

    fn z_exact(&self) -> Result<usize> {
        cached(&self.z_exact, || {
            let z = m_singular_submodule(self.a.module(), self.a.module(), self.a.caps())?;
            Ok(self.a.id(&z).expect("singular submodule"))
        })
        .copied()
    }

    fn z_bounded(&self) -> Result<&BoundedSingular> {
        cached(&self.z_bounded, || {
            m_singular_submodule_bounded(self.a.module(), self.a.module(), self.a.caps().singular_depth, self.a.caps())
        })
    }

    fn continuity(&self) -> Result<&Continuity> {
        cached(&self.continuity, || is_continuous(self.a))
    }

    /// `(P_i, N_i)` for the minimal primes; an unverifiable right annihilator
    /// is reported as an error.
    fn primes_and_rights(&self) -> Result<Vec<(usize, usize)>> {
        let s = self.spectrum()?;
        s.minimal_primes
            .iter()
            .zip(&s.right_annihilators)
            .map(|(&p, n)| n.map(|n| (p, n)).ok_or_else(|| Error::VerificationFailure(format!("right annihilator of {p}"))))
            .collect()
    }

    fn n_hulls(&self) -> Result<&Vec<FiniteModule>> {
        cached(&self.n_hulls, || {
            self.primes_and_rights()?
                .into_iter()
                .map(|(_, n)| Ok(m_injective_hull(self.a.module(), &self.a.sub_module(n), self.a.caps())?.module))
                .collect()
        })
    }

    fn udim_of(&self, id: usize) -> usize {
        let a = self.a;
        let mut span = a.zero();
        let mut count = 0;
        for atom in a.atoms_below(id) {
            if a.meet(span, atom) == a.zero() {
                span = a.join(span, atom);
                count += 1;
            }
        }
        count
    }

    /// `Ass_M(N)` from the cached annihilators.
    fn ass(&self, n: usize) -> Result<Vec<usize>> {
        let a = self.a;
        let anns = self.anns()?;
        let fi = a.fully_invariant_flags()?;
        let mut out = BTreeSet::new();
        for l in self.nonzero_ids() {
            if !a.subset(l, n) {
                continue;
            }
            let k = anns[l];
            if k == a.top() || !fi[k] {
                continue;
            }
            if a.atoms_below(l).into_iter().all(|t| anns[t] == k) {
                out.insert(k);
            }
        }
        Ok(out.into_iter().collect())
    }

    fn semiprime_offender(&self, n: usize, ids: &[usize]) -> Result<Option<usize>> {
        for &k in ids {
            if !self.a.subset(k, n) && self.a.subset(self.a.product(k, k)?, n) {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    fn prime_offender(&self, p: usize, ids: &[usize]) -> Result<Option<(usize, usize)>> {
        let outside: Vec<usize> = ids.iter().copied().filter(|&k| !self.a.subset(k, p)).collect();
        for &k in &outside {
            for &l in &outside {
                if self.a.subset(self.a.product(k, l)?, p) {
                    return Ok(Some((k, l)));
                }
            }
        }
        Ok(None)
    }

    pub fn hypothesis(&self, h: Hyp) -> Result<&HypothesisValue> {
        cached(&self.hyps[hyp_slot(h)], || self.evaluate(h))
    }

    fn evaluate(&self, h: Hyp) -> Result<HypothesisValue> {
        let a = self.a;
        let value = |holds: bool, witness: Value| Ok(HypothesisValue { holds, witness });
        match h {
            Hyp::SelfProjective => match a.self_projectivity_counterexample()? {
                None => value(true, Value::Null),
                Some((k, f)) => value(false, json!({"K": self.sub(k), "map_to_quotient": f})),
            },
            Hyp::Semiprime => {
                let w = module_is_semiprime(a)?;
                let offenders: Vec<Value> = w.offenders.iter().map(|&k| self.sub(k)).collect();
                value(w.holds(), if w.holds() { Value::Null } else { json!({"offenders": offenders}) })
            }
            Hyp::Acc => {
                let s = self.ann_set()?;
                value(s.acc_holds, json!({"longest_chain": s.longest_chain, "members": s.members.len()}))
            }
            Hyp::UniformSubmodules => {
                let bad = self.nonzero_ids().find(|&n| a.atoms_below(n).is_empty());
                value(bad.is_none(), bad.map_or(Value::Null, |n| self.sub(n)))
            }
            Hyp::Goldie => {
                let acc = self.hypothesis(Hyp::Acc)?.holds;
                value(acc, json!({"udim": a.uniform_dimension()}))
            }
            Hyp::Retractable => match a.retractable_counterexample()? {
                None => value(true, Value::Null),
                Some(n) => value(false, json!({"submodule": self.sub(n)})),
            },
            Hyp::Continuous => {
                let c = self.continuity()?;
                let witness = json!({
                    "c1": c.c1,
                    "c2": c.c2,
                    "c1_witness": c.c1_witness.map(|n| self.sub(n)),
                    "c2_witness": c.c2_witness.map(|(n, d)| json!([self.sub(n), self.sub(d)])),
                });
                value(c.holds(), witness)
            }
            Hyp::NonMSingular => {
                let z = self.z_exact()?;
                let bounded = self.z_bounded()?;
                let k = k_singular_submodule(a)?;
                let rejected = reject(a.module(), self.module_hull()?, a.caps())?;
                let witness = json!({
                    "singular_submodule": self.sub(z),
                    "proxies": {
                        "k_nonsingular": k == a.zero(),
                        "reject_into_hull_zero": rejected.is_zero(),
                        "bounded_singular_zero": bounded.submodule.is_zero(),
                        "bounded_depth": bounded.depth,
                        "bounded_exact": bounded.exact,
                    },
                });
                value(z == a.zero(), witness)
            }
            Hyp::SemisimpleDistinct => {
                if a.top() == a.zero() || a.socle() != a.top() {
                    return value(false, json!({"socle": self.sub(a.socle())}));
                }
                let atoms = a.atoms();
                for (i, &x) in atoms.iter().enumerate() {
                    for &y in &atoms[i + 1..] {
                        if are_isomorphic(&a.sub_module(x), &a.sub_module(y), a.caps())?.is_some() {
                            return value(false, json!({"isomorphic_atoms": [self.sub(x), self.sub(y)]}));
                        }
                    }
                }
                value(true, json!({"atoms": atoms.len()}))
            }
            Hyp::Nonzero => value(a.top() != a.zero(), json!({"order": a.module().order()})),
            Hyp::ExampleHull => {
                let m = a.module();
                let target = ring_trivial_extension(&ring_cyclic(2), 2);
                if m.ring().to_tables() != target.to_tables() || m.order() != 8 {
                    return value(false, Value::Null);
                }
                let r = m.ring_arc();
                let reg = crate::module::regular_module(r);
                let ideal = crate::submodule::submodule_generate(&reg, 1..r.order());
                let maximal = crate::submodule::all_submodules(&reg, a.caps())?
                    .iter()
                    .filter(|s| s.len() * 2 == r.order())
                    .next()
                    .cloned()
                    .unwrap_or(ideal);
                let simple = quotient(&reg, &maximal).0;
                let hull = injective_hull(&simple, a.caps())?.ambient;
                let iso = are_isomorphic(&hull, m, a.caps())?.is_some();
                value(iso, Value::Null)
            }
        }
    }

    fn check(&self, id: &str) -> Result<Outcome> {
        let a = self.a;
        let caps = a.caps();
        let zero = a.zero();
        let top = a.top();
        match id {
            "Intro.product" => {
                let end = a.end()?;
                for k in self.ids() {
                    if !a.subset(k, a.product(k, top)?) {
                        return fail(json!({"K": self.sub(k), "product_with_M": self.sub(a.product(k, top)?)}));
                    }
                }
                let ids = self.sample_ids()?;
                for &k in &ids {
                    for &l in &ids {
                        let mut seeds = FixedBitSet::with_capacity(a.module().order());
                        for i in a.hom_into(l)? {
                            for x in a.sub(k).bits().ones() {
                                seeds.insert(end.maps[i].apply(x));
                            }
                        }
                        let expected = a.generated(seeds.ones());
                        let got = a.product(k, l)?;
                        if expected != got {
                            return fail(json!({"K": self.sub(k), "L": self.sub(l), "product": self.sub(got), "sum_of_images": self.sub(expected)}));
                        }
                    }
                }
                pass()
            }
            "Intro.ann" => {
                let end = a.end()?;
                for n in self.ids() {
                    let expected = a.meet_all(a.hom_into(n)?.into_iter().map(|i| end.kernels[i]));
                    if expected != self.ann(n)? {
                        return fail(json!({"N": self.sub(n), "ann": self.sub(self.ann(n)?), "common_kernel": self.sub(expected)}));
                    }
                }
                if self.ann(top)? != zero {
                    return fail(json!({"ann_of_M": self.sub(self.ann(top)?)}));
                }
                pass()
            }
            "Intro.ass" => {
                for n in a.uniform_ids().into_iter().take(PAIR_SAMPLE) {
                    let ass = self.ass(n)?;
                    if ass.len() > 1 {
                        return fail(json!({"uniform": self.sub(n), "ass": ass.iter().map(|&k| self.sub(k)).collect::<Vec<_>>()}));
                    }
                }
                let whole = self.ass(top)?;
                for k in self.ids().filter(|&k| a.is_essential(k)).take(PAIR_SAMPLE) {
                    if self.ass(k)? != whole {
                        return fail(json!({"essential": self.sub(k)}));
                    }
                }
                pass()
            }
            "Def1.1" => {
                for n in self.proper_fi()? {
                    let w = is_semiprime_in(a, n)?;
                    if let Some(&k) = w.offenders.first() {
                        if a.subset(k, n) || !a.subset(a.product(k, k)?, n) {
                            return fail(json!({"N": self.sub(n), "offender": self.sub(k)}));
                        }
                    }
                }
                pass()
            }
            "Rem1.2" => {
                let fi = self.a.fully_invariant_ids()?;
                let all: Vec<usize> = self.ids().collect();
                for n in self.proper_fi()? {
                    let restricted = self.semiprime_offender(n, &fi)?.is_none();
                    let full = self.semiprime_offender(n, &all)?;
                    if restricted != full.is_none() {
                        return fail(json!({"N": self.sub(n), "semiprime_fully_invariant": restricted, "offender": full.map(|k| self.sub(k))}));
                    }
                    let restricted = self.prime_offender(n, &fi)?.is_none();
                    let full = self.prime_offender(n, &all)?;
                    if restricted != full.is_none() {
                        return fail(json!({"P": self.sub(n), "prime_fully_invariant": restricted, "offenders": full.map(|(k, l)| json!([self.sub(k), self.sub(l)]))}));
                    }
                }
                pass()
            }
            "Prop1.3" => {
                let fi = self.a.fully_invariant_ids()?;
                for n in self.proper_fi()? {
                    let semiprime = self.semiprime_offender(n, &fi)?.is_none();
                    let mut bad = None;
                    for k in self.ids().filter(|&k| k != n && a.subset(n, k)) {
                        if a.subset(a.product(k, k)?, n) {
                            bad = Some(k);
                            break;
                        }
                    }
                    if semiprime != bad.is_none() {
                        return fail(json!({"N": self.sub(n), "semiprime": semiprime, "K": bad.map(|k| self.sub(k))}));
                    }
                }
                pass()
            }
            "Rem1.4" => {
                let fi = self.a.fully_invariant_ids()?;
                for p in self.proper_fi()? {
                    let prime = self.prime_offender(p, &fi)?.is_none();
                    let over: Vec<usize> = self.ids().filter(|&k| k != p && a.subset(p, k)).collect();
                    let mut bad = None;
                    'search: for &k in &over {
                        for &l in &over {
                            if a.subset(a.product(k, l)?, p) {
                                bad = Some((k, l));
                                break 'search;
                            }
                        }
                    }
                    if prime != bad.is_none() {
                        return fail(json!({"P": self.sub(p), "prime": prime, "pair": bad.map(|(k, l)| json!([self.sub(k), self.sub(l)]))}));
                    }
                }
                pass()
            }
            "Def1.5" => {
                if a.product(top, top)? != top {
                    return fail(json!({"M_M_M": self.sub(a.product(top, top)?)}));
                }
                for n in self.ids() {
                    let square = a.product(n, n)?;
                    if !a.subset(square, n) {
                        return fail(json!({"N": self.sub(n), "square": self.sub(square)}));
                    }
                    if a.power(n, 3)? != a.product(n, square)? {
                        return fail(json!({"N": self.sub(n), "cube": self.sub(a.power(n, 3)?)}));
                    }
                }
                pass()
            }
            "Lem1.6" => {
                for n in self.proper_fi()? {
                    if !is_semiprime_in(a, n)?.holds() {
                        continue;
                    }
                    for j in self.ids() {
                        let mut p = j;
                        let mut k = 1;
                        loop {
                            let next = a.product(j, p)?;
                            if next == p {
                                break;
                            }
                            p = next;
                            k += 1;
                        }
                        if a.subset(p, n) && !a.subset(j, n) {
                            return fail(json!({"N": self.sub(n), "J": self.sub(j), "power": k}));
                        }
                    }
                }
                pass()
            }
            "Lem1.7.i" | "Lem1.7.ii" => {
                for n in self.ids() {
                    for l in self.ids() {
                        if a.product(n, l)? != zero {
                            continue;
                        }
                        let ok = if id == "Lem1.7.i" { a.product(l, n)? == zero } else { a.meet(n, l) == zero };
                        if !ok {
                            return fail(json!({"N": self.sub(n), "L": self.sub(l)}));
                        }
                    }
                }
                pass()
            }
            "Rem1.8" => {
                let fi = a.fully_invariant_ids()?;
                for l in self.ids() {
                    let ann = self.ann(l)?;
                    if a.meet(l, ann) != zero {
                        return fail(json!({"L": self.sub(l), "ann": self.sub(ann)}));
                    }
                    for &lp in &fi {
                        if lp != ann && a.subset(ann, lp) && a.meet(l, lp) == zero {
                            return fail(json!({"L": self.sub(l), "L_prime": self.sub(lp)}));
                        }
                    }
                }
                pass()
            }
            "Prop1.9" => match a.retractable_counterexample()? {
                None => pass(),
                Some(n) => fail(json!({"N": self.sub(n)})),
            },
            "Prop1.11" => {
                let hull = self.module_hull()?;
                let mut seen = BTreeSet::new();
                for u in a.uniform_ids() {
                    let p = self.ann(u)?;
                    if !seen.insert(p) {
                        continue;
                    }
                    if p == top || !is_prime_in(a, p)?.holds() {
                        return fail(json!({"U": self.sub(u), "ann": self.sub(p), "prime": false}));
                    }
                    let (q, _) = a.quotient_module(p);
                    if !reject(&q, hull, caps)?.is_zero() {
                        return fail(json!({"U": self.sub(u), "ann": self.sub(p), "pure": false}));
                    }
                }
                pass()
            }
            "Rem1.12" => {
                for u in a.uniform_ids() {
                    let p = self.ann(u)?;
                    for up in self.nonzero_ids().filter(|&x| a.subset(x, u)) {
                        if self.ann(up)? != p {
                            return fail(json!({"U": self.sub(u), "U_prime": self.sub(up)}));
                        }
                    }
                    if self.ass(u)? != vec![p] {
                        return fail(json!({"U": self.sub(u), "ass": self.ass(u)?.into_iter().map(|k| self.sub(k)).collect::<Vec<_>>()}));
                    }
                }
                pass()
            }
            "Lem1.13" => {
                let s = self.spectrum()?;
                let mut seen = BTreeSet::new();
                for n in self.ids() {
                    let p = self.ann(n)?;
                    if p == top || !seen.insert(p) {
                        continue;
                    }
                    if s.primes.contains(&p) && !s.minimal_primes.contains(&p) {
                        return fail(json!({"N": self.sub(n), "ann": self.sub(p)}));
                    }
                }
                pass()
            }
            "Def1.14" => {
                for n in self.ids() {
                    let r = match a.ann_right(n) {
                        Ok(r) => r,
                        Err(Error::VerificationFailure(_)) => return fail(json!({"N": self.sub(n), "verification": false})),
                        Err(e) => return Err(e),
                    };
                    for l in self.ids() {
                        if a.product(n, l)? == zero && !a.subset(l, r) {
                            return fail(json!({"N": self.sub(n), "right_ann": self.sub(r), "L": self.sub(l)}));
                        }
                    }
                }
                pass()
            }
            "Prop1.16" => {
                for n in self.ids() {
                    let right = match a.ann_right(n) {
                        Ok(r) => r,
                        Err(Error::VerificationFailure(_)) => return fail(json!({"N": self.sub(n), "verification": false})),
                        Err(e) => return Err(e),
                    };
                    if right != self.ann(n)? {
                        return fail(json!({"N": self.sub(n), "left": self.sub(self.ann(n)?), "right": self.sub(right)}));
                    }
                }
                pass()
            }
            "Def1.17" => {
                for n in self.ids() {
                    let p = self.ann(n)?;
                    if !a.is_fully_invariant(p)? {
                        return fail(json!({"N": self.sub(n), "ann": self.sub(p)}));
                    }
                }
                pass()
            }
            "Prop1.18" => {
                let annihilators: BTreeSet<usize> = self.anns()?.iter().copied().collect();
                for &n in &annihilators {
                    let double = self.ann(self.ann(n)?)?;
                    let right = a.ann_right(a.ann_right(n)?)?;
                    if double != n || right != n {
                        return fail(json!({"N": self.sub(n), "double_left": self.sub(double), "double_right": self.sub(right)}));
                    }
                }
                pass()
            }
            "Def2.1" => {
                let s = self.ann_set()?;
                if !s.members.contains(&top) || (top != zero && !s.members.contains(&zero)) {
                    return fail(json!({"members": s.members.len()}));
                }
                for &x in &s.members {
                    for &y in &s.members {
                        if !s.members.contains(&a.meet(x, y)) {
                            return fail(json!({"X": self.sub(x), "Y": self.sub(y)}));
                        }
                    }
                }
                pass()
            }
            "Thm2.2.i" => {
                let s = self.spectrum()?;
                for &p in &s.primes {
                    if !s.minimal_primes.iter().any(|&q| a.subset(q, p)) {
                        return fail(json!({"prime_without_minimal": self.sub(p)}));
                    }
                }
                if top != zero && s.minimal_primes.is_empty() {
                    return fail(json!({"minimal_primes": []}));
                }
                pass()
            }
            "Thm2.2.ii" => {
                let s = self.spectrum()?;
                if s.intersection != zero {
                    return fail(json!({"intersection": self.sub(s.intersection), "minimal_primes": s.minimal_primes.iter().map(|&p| self.sub(p)).collect::<Vec<_>>()}));
                }
                pass()
            }
            "Thm2.2.iii" => {
                let s = self.spectrum()?;
                let annihilators: BTreeSet<usize> = self.anns()?.iter().copied().collect();
                for &p in &s.primes {
                    if s.minimal_primes.contains(&p) != annihilators.contains(&p) {
                        return fail(json!({"P": self.sub(p), "minimal": s.minimal_primes.contains(&p)}));
                    }
                }
                pass()
            }
            "Ex2.3" => {
                let s = self.spectrum()?;
                let set = self.ann_set()?;
                let facts = json!({
                    "self_projective": a.is_self_projective()?,
                    "semiprime": module_is_semiprime(a)?.holds(),
                    "annihilators": set.members.len(),
                    "lattice": a.lattice().len(),
                    "minimal_primes": s.minimal_primes.len(),
                    "atoms": a.atoms().len(),
                });
                let holds = a.is_self_projective()?
                    && module_is_semiprime(a)?.holds()
                    && set.members.len() == a.lattice().len()
                    && s.minimal_primes.len() == a.atoms().len();
                Ok(Outcome { holds, witness: facts })
            }
            "Lem2.16" => {
                for (p, n) in self.primes_and_rights()? {
                    for l in self.nonzero_ids().filter(|&l| a.subset(l, n)) {
                        if self.ann(l)? != p {
                            return fail(json!({"P": self.sub(p), "N": self.sub(n), "L": self.sub(l)}));
                        }
                    }
                }
                pass()
            }
            "Prop2.17" => {
                let ns: Vec<usize> = self.primes_and_rights()?.into_iter().map(|(_, n)| n).collect();
                for (i, &n) in ns.iter().enumerate() {
                    let others = a.join_all(ns.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x));
                    if a.meet(n, others) != zero {
                        return fail(json!({"N": self.sub(n), "others": self.sub(others)}));
                    }
                }
                pass()
            }
            "Lem2.25" => {
                let pr = self.primes_and_rights()?;
                for (i, &(p, n)) in pr.iter().enumerate() {
                    let meet = a.meet_all(pr.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &(q, _))| q));
                    if meet != n {
                        return fail(json!({"P": self.sub(p), "right_ann": self.sub(n), "meet_of_others": self.sub(meet)}));
                    }
                }
                pass()
            }
            "Rem2.6" => {
                let hull = self.module_hull()?;
                if k_singular_submodule(a)? != zero {
                    return fail(json!({"k_singular": self.sub(k_singular_submodule(a)?)}));
                }
                for k in self.ids() {
                    let (x, _) = a.quotient_module(k);
                    let torsion = reject(&x, hull, caps)?.len() == x.order();
                    let singular = m_singular_submodule(a.module(), &x, caps)?.len() == x.order();
                    if torsion != singular {
                        return fail(json!({"K": self.sub(k), "torsion": torsion, "singular": singular}));
                    }
                }
                pass()
            }
            "Thm2.7" | "Cor2.10" => {
                let classes = self.classes()?;
                let s = self.spectrum()?;
                let mut image = Vec::new();
                for class in &classes.classes {
                    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
                    for &atom in &class.atoms {
                        found.insert(self.ass(atom)?);
                    }
                    let single: Vec<&Vec<usize>> = found.iter().collect();
                    if single.len() != 1 || single[0].len() != 1 || !s.minimal_primes.contains(&single[0][0]) {
                        return fail(json!({"class": class.hull.module.name(), "ass": found.iter().map(|v| v.iter().map(|&k| self.sub(k)).collect::<Vec<_>>()).collect::<Vec<_>>()}));
                    }
                    image.push(single[0][0]);
                }
                let distinct: BTreeSet<usize> = image.iter().copied().collect();
                let covered: BTreeSet<usize> = s.minimal_primes.iter().copied().collect();
                if distinct.len() != image.len() || distinct != covered {
                    return fail(json!({"image": image.iter().map(|&p| self.sub(p)).collect::<Vec<_>>(), "minimal_primes": s.minimal_primes.iter().map(|&p| self.sub(p)).collect::<Vec<_>>()}));
                }
                if id == "Cor2.10" {
                    let theories = self.theory_classes()?;
                    if theories != classes.classes.len() {
                        return fail(json!({"injectives": classes.classes.len(), "theories": theories}));
                    }
                }
                Ok(Outcome { holds: true, witness: json!({"bijection": image.len()}) })
            }
            "Ex2.8" => self.example_hull(),
            "Rem2.9" => {
                let s = self.spectrum()?;
                let ps = &s.minimal_primes;
                for (i, &p) in ps.iter().enumerate() {
                    for &q in &ps[i + 1..] {
                        let (x, _) = a.quotient_module(p);
                        let (y, _) = a.quotient_module(q);
                        if cogenerated_theories_equal(&x, &y, caps)? {
                            return fail(json!({"P": self.sub(p), "Q": self.sub(q)}));
                        }
                    }
                }
                pass()
            }
            "Def2.11" => {
                let family = a.independent_atoms();
                let span = a.join_all(family.iter().copied());
                let sizes: usize = family.iter().map(|&f| a.sub(f).len()).product();
                if top != zero && (!a.is_essential(span) || sizes != a.sub(span).len()) {
                    return fail(json!({"family": family.iter().map(|&f| self.sub(f)).collect::<Vec<_>>()}));
                }
                pass()
            }
            "Thm2.18" | "Prop2.21" => {
                let pr = self.primes_and_rights()?;
                let ns: Vec<usize> = pr.iter().map(|&(_, n)| n).collect();
                let span = a.join_all(ns.iter().copied());
                let direct: usize = ns.iter().map(|&n| a.sub(n).len()).product();
                if direct != a.sub(span).len() || !a.is_essential(span) {
                    return fail(json!({"sum": self.sub(span), "direct": direct == a.sub(span).len()}));
                }
                let hulls = self.n_hulls()?;
                let total: usize = hulls.iter().map(FiniteModule::order).product();
                let whole = self.module_hull()?.order();
                if total != whole {
                    return fail(json!({"hull_orders": hulls.iter().map(FiniteModule::order).collect::<Vec<_>>(), "hull_of_M": whole}));
                }
                if id == "Prop2.21" {
                    for (i, x) in hulls.iter().enumerate() {
                        for (j, y) in hulls.iter().enumerate() {
                            if i != j && hom_count(x, y, caps)? != 1 {
                                return fail(json!({"from": i, "to": j}));
                            }
                        }
                    }
                }
                pass()
            }
            "Thm2.20" => self.hull_decomposition(),
            "Thm2.23" => {
                let pr = self.primes_and_rights()?;
                let parts: Vec<usize> = pr.iter().map(|&(_, n)| self.udim_of(n)).collect();
                if parts.iter().sum::<usize>() != a.uniform_dimension() {
                    return fail(json!({"udim": a.uniform_dimension(), "parts": parts}));
                }
                pass()
            }
            "Def2.28" => {
                for n in self.ids() {
                    if let Some(k) = nilpotency_index(a, n)? {
                        if a.power(n, k)? != zero || (k > 1 && a.power(n, k - 1)? == zero) {
                            return fail(json!({"N": self.sub(n), "index": k}));
                        }
                    }
                }
                pass()
            }
            "Prop2.29" => {
                let z = self.z_exact()?;
                let b = a.id(&self.z_bounded()?.submodule).expect("bounded singular submodule");
                for (name, s) in [("exact", z), ("bounded", b)] {
                    if nilpotency_index(a, s)?.is_none() {
                        return fail(json!({"which": name, "Z": self.sub(s)}));
                    }
                }
                pass()
            }
            "Cor2.30.delta" => {
                let d = self.delta()?;
                match ideal_nilpotency(self.endo()?.ring(), d.elements()) {
                    Some(t) => Ok(Outcome { holds: true, witness: json!({"index": t}) }),
                    None => fail(json!({"delta": d})),
                }
            }
            "Cor2.30.hom" => {
                let end = a.end()?;
                let ids = self.sample_ids()?;
                for &n in &ids {
                    let trace = a.join_all(a.hom_into(n)?.into_iter().map(|g| end.images[g]));
                    for &l in &ids {
                        let values = a.hom_values(l)?;
                        let prod = a.sub(a.product(n, l)?).bits().clone();
                        for x in a.sub(trace).bits().ones() {
                            if !values[x].is_subset(&prod) {
                                return fail(json!({"N": self.sub(n), "L": self.sub(l), "element": x}));
                            }
                        }
                    }
                }
                pass()
            }
            "Cor2.30" => {
                let zr = self.right_singular()?;
                let d = self.delta()?;
                if !zr.is_subset(d) {
                    return fail(json!({"right_singular": zr, "delta": d}));
                }
                match ideal_nilpotency(self.endo()?.ring(), zr.elements()) {
                    Some(_) => pass(),
                    None => fail(json!({"right_singular": zr})),
                }
            }
            "Cor2.31" => {
                let s = self.endo()?;
                let r = s.ring();
                let d = self.delta()?;
                for ideal in ideals_within(r, d) {
                    let kernel = a.meet_all(ideal.elements().into_iter().map(|i| a.end().map(|e| e.kernels[i]).unwrap_or(top)));
                    if a.is_essential(kernel) && ideal_nilpotency(r, ideal.elements()).is_none() {
                        return fail(json!({"ideal": ideal}));
                    }
                }
                pass()
            }
            "Def2.32" => {
                for n in self.ids() {
                    if let Some(cycle) = tm_nilpotency_cycle(a, n)? {
                        let values = a.hom_values(n)?;
                        let valid = (0..cycle.len()).all(|i| {
                            let (x, y) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                            y != a.module().zero() && values[x].contains(y) && a.sub(n).contains(y)
                        });
                        if !valid {
                            return fail(json!({"N": self.sub(n), "cycle": cycle}));
                        }
                    }
                }
                pass()
            }
            "Prop2.33" => {
                for n in self.ids() {
                    if tm_nilpotency_cycle(a, n)?.is_none() && nilpotency_index(a, n)?.is_none() {
                        return fail(json!({"N": self.sub(n)}));
                    }
                }
                pass()
            }
            "Def3.1" => {
                let c = self.continuity()?;
                let summands = summand_ids(a);
                if let Some(n) = c.c1_witness {
                    if summands.iter().any(|&d| a.is_essential_in(n, d)) {
                        return fail(json!({"c1_witness": self.sub(n)}));
                    }
                }
                if let Some((n, d)) = c.c2_witness {
                    if summands.contains(&n) || are_isomorphic(&a.sub_module(n), &a.sub_module(d), caps)?.is_none() {
                        return fail(json!({"c2_witness": [self.sub(n), self.sub(d)]}));
                    }
                }
                pass()
            }
            "Def3.2" => {
                let end = a.end()?;
                let knon = crate::endo::is_k_nonsingular(a)?.holds;
                let essential = (0..end.maps.len()).filter(|&i| a.is_essential(end.kernels[i])).count();
                if knon != (essential == 1) {
                    return fail(json!({"k_nonsingular": knon, "essential_kernel_maps": essential}));
                }
                pass()
            }
            "Def3.3" => {
                let k = k_singular_submodule(a)?;
                let b = a.id(&self.z_bounded()?.submodule).expect("bounded singular submodule");
                let z = self.z_exact()?;
                if !a.subset(k, b) || !a.subset(b, z) || !a.is_fully_invariant(k)? {
                    return fail(json!({"k_singular": self.sub(k), "bounded": self.sub(b), "exact": self.sub(z)}));
                }
                pass()
            }
            "Rem3.4" => {
                let j = self.jacobson()?;
                let d = self.delta()?;
                if j != d {
                    return fail(json!({"jacobson": j, "delta": d}));
                }
                let end = a.end()?;
                let jm = a.join_all(j.elements().into_iter().map(|i| end.images[i]));
                let k = k_singular_submodule(a)?;
                if jm != k {
                    return fail(json!({"JM": self.sub(jm), "k_singular": self.sub(k)}));
                }
                pass()
            }
            "Prop3.5" => {
                let j = self.jacobson()?;
                match ideal_nilpotency(self.endo()?.ring(), j.elements()) {
                    Some(t) => Ok(Outcome { holds: true, witness: json!({"index": t}) }),
                    None => fail(json!({"jacobson": j})),
                }
            }
            "Thm3.6" => {
                let semiprime = module_is_semiprime(a)?.holds();
                let goldie = self.hypothesis(Hyp::Goldie)?.holds;
                Ok(Outcome { holds: semiprime && goldie, witness: json!({"semiprime": semiprime, "goldie": goldie}) })
            }
            other => unreachable!("unregistered statement {other}"),
        }
    }

    /// Number of distinct theories cogenerated by the `M/P` over minimal primes `P`.
    fn theory_classes(&self) -> Result<usize> {
        let a = self.a;
        let mut reps: Vec<FiniteModule> = Vec::new();
        for &p in &self.spectrum()?.minimal_primes {
            let (q, _) = a.quotient_module(p);
            let mut new = true;
            for r in &reps {
                if cogenerated_theories_equal(r, &q, a.caps())? {
                    new = false;
                    break;
                }
            }
            if new {
                reps.push(q);
            }
        }
        Ok(reps.len())
    }

    fn hull_decomposition(&self) -> Result<Outcome> {
        let a = self.a;
        let caps = a.caps();
        let classes = self.classes()?;
        let mut parts: Vec<FiniteModule> = Vec::new();
        let mut summary = Vec::new();
        for (p, n) in self.primes_and_rights()? {
            let mut matching = Vec::new();
            for class in &classes.classes {
                if self.ass(class.atoms[0])? == vec![p] {
                    matching.push(class);
                }
            }
            if matching.len() != 1 {
                return fail(json!({"P": self.sub(p), "matching_injectives": matching.len()}));
            }
            let k = self.udim_of(n);
            summary.push(json!({"P": self.sub(p), "k": k, "order": matching[0].hull.module.order()}));
            for _ in 0..k {
                parts.push(matching[0].hull.module.clone());
            }
        }
        let hull = self.module_hull()?;
        let total: usize = parts.iter().map(FiniteModule::order).product();
        if total != hull.order() {
            return fail(json!({"parts": summary, "hull_order": hull.order()}));
        }
        if !parts.is_empty() && total <= caps.module_order {
            let (sum, _) = direct_sum_all(&parts)?;
            if are_isomorphic(&sum, hull, caps)?.is_none() {
                return fail(json!({"parts": summary, "isomorphic": false}));
            }
        }
        Ok(Outcome { holds: true, witness: json!({"parts": summary}) })
    }

    fn example_hull(&self) -> Result<Outcome> {
        let a = self.a;
        let zero = a.zero();
        let top = a.top();
        let fi = a.fully_invariant_ids()?;
        let s = a.socle();
        let maximal: Vec<usize> = fi.iter().copied().filter(|&x| x != zero && x != s && x != top).collect();
        let mut facts = BTreeMap::new();
        facts.insert("fully_invariant_count", json!(fi.len()));
        let ring_ideals = ideals(a.module().ring());
        facts.insert("ring_ideals", json!(ring_ideals.len()));
        let mut holds = fi.len() == 6 && maximal.len() == 3 && ring_ideals.len() == 6 && fi.contains(&s);
        if holds {
            for &k in &maximal {
                for &l in &maximal {
                    let expect = s;
                    holds &= a.product(k, l)? == expect;
                    if k != l {
                        holds &= a.meet(k, l) == s;
                    }
                }
                holds &= a.product(s, k)? == zero;
                holds &= a.product(k, s)? == s;
                holds &= self.ann(k)? == s;
                holds &= a.power(k, 3)? == s && a.power_right(k, 3)? == zero;
                holds &= !is_prime_in(a, k)?.holds();
            }
            holds &= self.ann(s)? == s;
        }
        let spectrum_empty = self.spectrum()?.minimal_primes.is_empty();
        let classes = self.classes()?;
        let single = classes.classes.len() == 1
            && are_isomorphic(&classes.classes[0].hull.module, a.module(), a.caps())?.is_some();
        let self_projective = a.is_self_projective()?;
        let retractable = a.is_retractable()?;
        facts.insert("spec_min_empty", json!(spectrum_empty));
        facts.insert("single_injective", json!(single));
        facts.insert("self_projective", json!(self_projective));
        facts.insert("retractable", json!(retractable));
        holds &= spectrum_empty && single && !self_projective && retractable;
        Ok(Outcome { holds, witness: json!(facts) })
    }

    /// Evaluates one registered statement.
    pub fn finding(&self, id: &str) -> Result<Finding> {
        let info = statement(id).ok_or_else(|| Error::VerificationFailure(format!("unknown statement id {id}")))?;
        let mut unmet = Vec::new();
        for &h in info.requires {
            if !self.hypothesis(h)?.holds {
                unmet.push(h.name().to_string());
            }
        }
        let met = unmet.is_empty();
        let (verdict, conclusion, witness) = match self.check(id) {
            Ok(o) => {
                let verdict = match (met, o.holds) {
                    (false, _) => Verdict::HypothesisUnmet,
                    (true, true) => Verdict::Verified,
                    (true, false) => Verdict::Violation,
                };
                (verdict, Some(o.holds), o.witness)
            }
            Err(e) if !met => (Verdict::HypothesisUnmet, None, json!({"error": e.to_string()})),
            Err(e @ Error::VerificationFailure(_)) => (Verdict::Violation, None, json!({"error": e.to_string()})),
            Err(e) => return Err(e),
        };
        Ok(Finding { id: id.to_string(), verdict, conclusion, unmet, witness })
    }

    /// Snapshot of every hypothesis evaluated so far, by name.
    pub fn evaluated_hypotheses(&self) -> BTreeMap<String, HypothesisValue> {
        let all = Hyp::ALL;
        all.into_iter()
            .filter_map(|h| match self.hyps[hyp_slot(h)].get() {
                Some(Ok(v)) => Some((h.name().to_string(), v.clone())),
                _ => None,
            })
            .collect()
    }

    pub fn run(&self, ids: &[&str]) -> Result<StructureReport> {
        let mut findings = Vec::with_capacity(ids.len());
        for id in ids {
            findings.push(self.finding(id)?);
        }
        Ok(StructureReport { hypotheses: self.evaluated_hypotheses(), findings })
    }
}

/// Two-sided ideals contained in `bound`.
fn ideals_within(r: &crate::ring::FiniteRing, bound: &Ideal) -> Vec<Ideal> {
    let principal: BTreeSet<Ideal> = bound.elements().into_iter().map(|x| r.ideal_generated([x])).collect();
    let mut found: BTreeSet<Ideal> = BTreeSet::new();
    let zero = r.ideal_generated(std::iter::empty());
    found.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(current) = frontier.pop() {
        for p in &principal {
            if p.is_subset(&current) {
                continue;
            }
            let next = r.ideal_generated(current.elements().into_iter().chain(p.elements()));
            if found.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    found.into_iter().collect()
}

fn suite_ids(suite: Suite) -> Vec<&'static str> {
    REGISTRY.iter().filter(|s| s.suite == suite).map(|s| s.id).collect()
}

/// Ch. 1 and the semiprime structure statements.
pub fn verify_semiprime_structure(a: &ModuleAnalysis) -> Result<StructureReport> {
    Context::new(a).run(&suite_ids(Suite::Semiprime))
}

/// Injective-hull and Goldie decomposition statements.
pub fn verify_goldie_structure(a: &ModuleAnalysis) -> Result<StructureReport> {
    Context::new(a).run(&suite_ids(Suite::Goldie))
}

/// Goldie data together with the endomorphism-ring statements.
pub fn goldie_report(a: &ModuleAnalysis) -> Result<(GoldieReport, StructureReport)> {
    let report = Context::new(a).run(&suite_ids(Suite::Endo))?;
    Ok((goldie_data(a)?, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::module::regular_module;
    use std::sync::Arc;

    fn analysis(n: usize) -> ModuleAnalysis {
        ModuleAnalysis::new(regular_module(&Arc::new(ring_cyclic(n))), Config::default()).unwrap()
    }

    fn all_ids() -> Vec<&'static str> {
        REGISTRY.iter().map(|s| s.id).collect()
    }

    #[test]
    fn z6_everything_verified() {
        let a = analysis(6);
        let r = Context::new(&a).run(&all_ids()).unwrap();
        for f in &r.findings {
            let expected_unmet = f.id == "Ex2.8";
            if expected_unmet {
                assert_eq!(f.verdict, Verdict::HypothesisUnmet, "{}", f.id);
            } else {
                assert_eq!(f.verdict, Verdict::Verified, "{} {:?}", f.id, f.witness);
            }
        }
    }

    #[test]
    fn z4_no_violations() {
        let a = analysis(4);
        let r = Context::new(&a).run(&all_ids()).unwrap();
        assert_eq!(r.violations().count(), 0, "{:?}", r.violations().collect::<Vec<_>>());
        let thm = r.findings.iter().find(|f| f.id == "Thm2.2.ii").unwrap();
        assert_eq!(thm.verdict, Verdict::HypothesisUnmet);
        assert_eq!(thm.conclusion, Some(false));
    }

    #[test]
    fn corrupted_product_is_caught() {
        let cfg = Config { fault: Some(crate::config::Fault::CorruptProduct), ..Config::default() };
        let a = ModuleAnalysis::new(regular_module(&Arc::new(ring_cyclic(6))), cfg).unwrap();
        let f = Context::new(&a).finding("Intro.product").unwrap();
        assert_eq!(f.verdict, Verdict::Violation);
    }

    #[test]
    fn example_hull_reproduced() {
        let r = Arc::new(ring_trivial_extension(&ring_cyclic(2), 2));
        let reg = ModuleAnalysis::new(regular_module(&r), Config::default()).unwrap();
        let simple = quotient(reg.module(), reg.sub(reg.top() - 1)).0;
        let hull = injective_hull(&simple, &crate::config::Caps::default()).unwrap().ambient;
        let a = ModuleAnalysis::new(hull, Config::default()).unwrap();
        let ctx = Context::new(&a);
        let r = ctx.run(&all_ids()).unwrap();
        assert_eq!(r.violations().count(), 0, "{:?}", r.violations().collect::<Vec<_>>());
        let ex = r.findings.iter().find(|f| f.id == "Ex2.8").unwrap();
        assert_eq!(ex.verdict, Verdict::Verified, "{:?}", ex.witness);
    }
}
