//! Verdict types and the fixed registry of checkable statements.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hyp {
    SelfProjective,
    Semiprime,
    Acc,
    UniformSubmodules,
    Goldie,
    Retractable,
    Continuous,
    NonMSingular,
    SemisimpleDistinct,
    ExampleHull,
    Nonzero,
}

impl Hyp {
    pub const ALL: [Hyp; 11] = [
        Hyp::SelfProjective,
        Hyp::Semiprime,
        Hyp::Acc,
        Hyp::UniformSubmodules,
        Hyp::Goldie,
        Hyp::Retractable,
        Hyp::Continuous,
        Hyp::NonMSingular,
        Hyp::SemisimpleDistinct,
        Hyp::ExampleHull,
        Hyp::Nonzero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Hyp::SelfProjective => "self_projective",
            Hyp::Semiprime => "semiprime",
            Hyp::Acc => "acc_annihilators",
            Hyp::UniformSubmodules => "uniform_submodules",
            Hyp::Goldie => "goldie",
            Hyp::Retractable => "retractable",
            Hyp::Continuous => "continuous",
            Hyp::NonMSingular => "non_m_singular",
            Hyp::SemisimpleDistinct => "semisimple_distinct_simples",
            Hyp::ExampleHull => "hull_of_simple_over_trivial_extension",
            Hyp::Nonzero => "nonzero",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "verified")]
    Verified,
    #[serde(rename = "hypothesis-unmet")]
    HypothesisUnmet,
    #[serde(rename = "VIOLATION")]
    Violation,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::HypothesisUnmet => "hypothesis-unmet",
            Verdict::Violation => "VIOLATION",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub id: String,
    pub verdict: Verdict,
    /// Whether the conclusion holds; `None` when it could not be evaluated.
    pub conclusion: Option<bool>,
    pub unmet: Vec<String>,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisValue {
    pub holds: bool,
    pub witness: Value,
}

pub type Hypotheses = BTreeMap<String, HypothesisValue>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub hypotheses: Hypotheses,
    pub findings: Vec<Finding>,
}

impl StructureReport {
    pub fn violations(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.verdict == Verdict::Violation)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Semiprime,
    Goldie,
    Endo,
}

#[derive(Debug, Clone, Copy)]
pub struct StatementInfo {
    pub id: &'static str,
    pub title: &'static str,
    pub suite: Suite,
    pub requires: &'static [Hyp],
}

use Hyp::*;

const SP: &[Hyp] = &[SelfProjective];
const SPS: &[Hyp] = &[SelfProjective, Semiprime];
const SPSA: &[Hyp] = &[SelfProjective, Semiprime, Acc];
const SPSAU: &[Hyp] = &[SelfProjective, Semiprime, Acc, UniformSubmodules];
const NONE: &[Hyp] = &[];

macro_rules! st {
    ($id:expr, $title:expr, $suite:ident, $req:expr) => {
        StatementInfo { id: $id, title: $title, suite: Suite::$suite, requires: $req }
    };
}

pub const REGISTRY: &[StatementInfo] = &[
    st!("Intro.product", "product equals the sum of images and contains K", Semiprime, NONE),
    st!("Intro.ann", "left annihilator is the common kernel of maps into N", Semiprime, NONE),
    st!("Intro.ass", "associated primes of a uniform and of an essential submodule", Semiprime, NONE),
    st!("Def1.1", "semiprime witnesses are valid", Semiprime, NONE),
    st!("Rem1.2", "fully invariant and unrestricted prime tests agree", Semiprime, SP),
    st!("Prop1.3", "semiprime iff no K over N with K_MK inside N", Semiprime, SP),
    st!("Rem1.4", "prime iff no K, L over P with K_ML inside P", Semiprime, SP),
    st!("Def1.5", "powers descend and M_MM = M", Semiprime, NONE),
    st!("Lem1.6", "a power inside a semiprime N forces J inside N", Semiprime, SP),
    st!("Lem1.7.i", "N_ML = 0 implies L_MN = 0", Semiprime, SPS),
    st!("Lem1.7.ii", "N_ML = 0 implies N and L meet in zero", Semiprime, SPS),
    st!("Rem1.8", "L meets its annihilator in zero", Semiprime, SPS),
    st!("Prop1.9", "semiprime self-projective modules are retractable", Semiprime, SPS),
    st!("Prop1.11", "annihilators of uniforms are pure primes", Semiprime, SPS),
    st!("Rem1.12", "annihilator is constant on a uniform", Semiprime, SPS),
    st!("Lem1.13", "prime annihilators are minimal primes", Semiprime, SPS),
    st!("Def1.14", "right annihilator is the largest L with N_ML = 0", Semiprime, SP),
    st!("Prop1.16", "left and right annihilators agree", Semiprime, SPS),
    st!("Def1.17", "annihilator submodules are fully invariant", Semiprime, NONE),
    st!("Prop1.18", "double annihilators fix annihilator submodules", Semiprime, SPS),
    st!("Def2.1", "annihilator poset is intersection closed", Semiprime, NONE),
    st!("Thm2.2.i", "every prime contains one of finitely many minimal primes", Semiprime, SPSA),
    st!("Thm2.2.ii", "minimal primes intersect to zero", Semiprime, SPSA),
    st!("Thm2.2.iii", "a prime is minimal iff it is an annihilator", Semiprime, SPSA),
    st!("Ex2.3", "finite sum of distinct simples", Semiprime, &[SemisimpleDistinct]),
    st!("Lem2.16", "a minimal prime annihilates every nonzero part of its right annihilator", Semiprime, SPSA),
    st!("Prop2.17", "right annihilators of minimal primes are independent", Semiprime, SPSA),
    st!("Lem2.25", "right annihilator is the meet of the other minimal primes", Semiprime, SPSA),
    st!("Rem2.6", "torsion for the cogenerated theory is singular", Goldie, &[NonMSingular]),
    st!("Thm2.7", "indecomposable injectives correspond to minimal primes", Goldie, SPSAU),
    st!("Ex2.8", "trivial extension example", Goldie, &[ExampleHull]),
    st!("Rem2.9", "distinct minimal primes cogenerate distinct theories", Goldie, SP),
    st!("Cor2.10", "injectives correspond to cogenerated theories", Goldie, SPSAU),
    st!("Def2.11", "Goldie flag matches its definition", Goldie, NONE),
    st!("Thm2.18", "hulls of the right annihilators sum to the hull of M", Goldie, SPSAU),
    st!("Thm2.20", "hull of M decomposes into powers of uniform injectives", Goldie, &[SelfProjective, Semiprime, Goldie]),
    st!("Prop2.21", "hulls of the right annihilators are fully invariant", Goldie, &[SelfProjective, Semiprime, Goldie]),
    st!("Thm2.23", "uniform dimension adds over the right annihilators", Goldie, SPSAU),
    st!("Def2.28", "nilpotency indices are exact", Endo, NONE),
    st!("Prop2.29", "the singular submodule is nilpotent", Endo, &[SelfProjective, Acc]),
    st!("Cor2.30.delta", "essential-kernel ideal is nilpotent", Endo, NONE),
    st!("Cor2.30.hom", "composition lands in the product", Endo, NONE),
    st!("Cor2.30", "right singular ideal is nilpotent and inside the essential-kernel ideal", Endo, &[SelfProjective, Retractable, Acc]),
    st!("Cor2.31", "ideals with essential common kernel are nilpotent", Endo, &[SelfProjective]),
    st!("Def2.32", "element cycles witness failure of T-nilpotence", Endo, NONE),
    st!("Prop2.33", "T-nilpotent submodules are nilpotent", Endo, &[SelfProjective, Retractable, Acc]),
    st!("Def3.1", "continuity witnesses are valid", Endo, NONE),
    st!("Def3.2", "K-nonsingular iff the essential-kernel ideal is zero", Endo, NONE),
    st!("Def3.3", "K-singular submodule lies in the singular submodule", Endo, NONE),
    st!("Rem3.4", "radical equals the essential-kernel ideal", Endo, &[Continuous]),
    st!("Prop3.5", "radical is nilpotent", Endo, &[SelfProjective, Continuous, Acc]),
    st!("Thm3.6", "continuous retractable nonsingular modules are semiprime Goldie", Endo, &[Nonzero, SelfProjective, Continuous, Retractable, NonMSingular, Acc]),
];

/// Items that must each be covered by at least one registry entry.
pub const IN_SCOPE: &[&str] = &[
    "Intro.product", "Intro.ann", "Def1.1", "Def1.5", "Def1.14", "Def1.17", "Def2.1", "Def2.11", "Def2.28",
    "Def2.32", "Def3.1", "Def3.2", "Def3.3", "Prop1.3", "Prop1.9", "Prop1.11", "Prop1.16", "Prop1.18", "Prop2.17",
    "Prop2.21", "Prop2.29", "Prop2.33", "Prop3.5", "Lem1.6", "Lem1.7", "Lem1.13", "Lem2.16", "Lem2.25", "Rem1.2",
    "Rem1.8", "Rem1.12", "Rem2.6", "Rem2.9", "Rem3.4", "Thm2.2", "Thm2.7", "Thm2.18", "Thm2.20", "Thm2.23",
    "Thm3.6", "Cor2.10", "Cor2.30", "Cor2.31", "Ex2.3", "Ex2.8",
];

pub fn statement(id: &str) -> Option<&'static StatementInfo> {
    REGISTRY.iter().find(|s| s.id == id)
}

fn covers(id: &str, item: &str) -> bool {
    id == item || id.strip_prefix(item).is_some_and(|rest| rest.starts_with('.'))
}

/// Items of [`IN_SCOPE`] with no registry entry; empty when the registry is total.
pub fn registry_gaps() -> Vec<&'static str> {
    IN_SCOPE.iter().copied().filter(|item| !REGISTRY.iter().any(|s| covers(s.id, item))).collect()
}

/// Registry ids matching a filter: an exact id, a prefix ending in `*`, or
/// `all`.
pub fn select(filter: &str) -> Vec<&'static str> {
    let filter = filter.trim();
    if filter == "all" || filter == "*" {
        return REGISTRY.iter().map(|s| s.id).collect();
    }
    match filter.strip_suffix('*') {
        Some(prefix) => REGISTRY.iter().map(|s| s.id).filter(|id| id.starts_with(prefix)).collect(),
        None => REGISTRY.iter().map(|s| s.id).filter(|id| covers(id, filter)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_total_and_unique() {
        assert!(registry_gaps().is_empty(), "{:?}", registry_gaps());
        let mut ids: Vec<&str> = REGISTRY.iter().map(|s| s.id).collect();
        ids.sort_unstable();
        let before = ids.len();
        ids.dedup();
        assert_eq!(before, ids.len());
    }

    #[test]
    fn filters() {
        assert_eq!(select("Thm2.2.*"), vec!["Thm2.2.i", "Thm2.2.ii", "Thm2.2.iii"]);
        assert_eq!(select("Thm2.2"), vec!["Thm2.2.i", "Thm2.2.ii", "Thm2.2.iii"]);
        assert_eq!(select("Lem1.7.i"), vec!["Lem1.7.i"]);
        assert!(select("Nope").is_empty());
        assert_eq!(select("all").len(), REGISTRY.len());
    }

    #[test]
    fn verdict_strings() {
        assert_eq!(serde_json::to_string(&Verdict::Violation).unwrap(), "\"VIOLATION\"");
        assert_eq!(Verdict::HypothesisUnmet.as_str(), "hypothesis-unmet");
    }
}
