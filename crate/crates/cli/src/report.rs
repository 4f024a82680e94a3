//! Versioned JSON reports for `analyze`, `verify` and `replay`.

use std::collections::BTreeMap;
use std::time::Instant;

use modtheory::findings::{select, Hyp};
use modtheory::injective::indecomposable_injectives;
use modtheory::product::annihilator_set;
use modtheory::spectrum::{ass_of, module_is_semiprime};
use modtheory::{goldie_data, spec_min, Config, Context, Fault, Finding, FiniteModule, ModuleAnalysis, Verdict};
use serde::Serialize;
use serde_json::{json, Value};

use crate::spec::{explicit_spec, AlgebraSpec};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Subject {
    pub module: String,
    pub ring: String,
    pub ring_order: usize,
    pub order: usize,
    pub structure_hash: String,
}

impl Subject {
    pub fn of(m: &FiniteModule) -> Self {
        Subject {
            module: m.name().to_string(),
            ring: m.ring().name().to_string(),
            ring_order: m.ring().order(),
            order: m.order(),
            structure_hash: m.structure_hash(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub subject: Subject,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
    pub hypotheses: BTreeMap<String, Value>,
    pub findings: Vec<Finding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Value>,
    /// The subject as explicit tables; present whenever a finding is a VIOLATION.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<AlgebraSpec>,
    pub timings: BTreeMap<String, u64>,
}

impl Report {
    pub fn violations(&self) -> usize {
        self.findings.iter().filter(|f| f.verdict == Verdict::Violation).count()
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.violations() > 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Registry ids selected by a comma-separated list of filters, in registry order.
pub fn resolve_suite(filter: &str) -> Result<Vec<&'static str>, CliError> {
    let mut wanted = std::collections::BTreeSet::new();
    for part in filter.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let ids = select(part);
        if ids.is_empty() {
            return Err(CliError::UnknownStatementId(part.to_string()));
        }
        wanted.extend(ids);
    }
    if wanted.is_empty() {
        return Err(CliError::UnknownStatementId(filter.to_string()));
    }
    Ok(modtheory::findings::REGISTRY.iter().map(|s| s.id).filter(|id| wanted.contains(id)).collect())
}

fn millis(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

pub(crate) fn hypotheses(ctx: &Context<'_>) -> BTreeMap<String, Value> {
    Hyp::ALL
        .iter()
        .map(|&h| {
            let v = match ctx.hypothesis(h) {
                Ok(v) => json!({"holds": v.holds, "witness": v.witness}),
                Err(e) => json!({"holds": null, "error": e.to_string()}),
            };
            (h.name().to_string(), v)
        })
        .collect()
}

/// Runs the selected statements on `m`.
pub fn run_suite(m: &FiniteModule, filter: &str, cfg: &Config) -> Result<Report, CliError> {
    let ids = resolve_suite(filter)?;
    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let a = ModuleAnalysis::new(m.clone(), cfg.clone())?;
    timings.insert("lattice_ms".into(), millis(start));
    let ctx = Context::new(&a);
    let start = Instant::now();
    let hyps = hypotheses(&ctx);
    timings.insert("hypotheses_ms".into(), millis(start));
    let start = Instant::now();
    let findings = ids.iter().map(|id| ctx.finding(id)).collect::<Result<Vec<_>, _>>()?;
    timings.insert("findings_ms".into(), millis(start));
    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        command: "verify".into(),
        subject: Subject::of(m),
        fault: cfg.fault,
        hypotheses: hyps,
        findings,
        analysis: None,
        replay: None,
        timings,
    };
    if report.violations() > 0 {
        report.replay = Some(explicit_spec(m));
    }
    Ok(report)
}

fn subs(a: &ModuleAnalysis, ids: impl IntoIterator<Item = usize>) -> Vec<Vec<usize>> {
    ids.into_iter().map(|i| a.sub(i).elements()).collect()
}

/// Structural summary of `m` without statement checks.
pub fn analyze(m: &FiniteModule, cfg: &Config) -> Result<Report, CliError> {
    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let a = ModuleAnalysis::new(m.clone(), cfg.clone())?;
    timings.insert("lattice_ms".into(), millis(start));
    let start = Instant::now();
    let fi = a.fully_invariant_ids()?;
    let spectrum = spec_min(&a)?;
    let set = annihilator_set(&a)?;
    let mut analysis = json!({
        "submodules": a.lattice().len(),
        "endomorphisms": a.endomorphisms()?.len(),
        "fully_invariant": subs(&a, fi.iter().copied()),
        "atoms": subs(&a, a.atoms().iter().copied()),
        "socle": a.sub(a.socle()).elements(),
        "uniform_dimension": a.uniform_dimension(),
        "self_projective": a.is_self_projective()?,
        "retractable": a.is_retractable()?,
        "semiprime": module_is_semiprime(&a)?.holds(),
        "primes": subs(&a, spectrum.primes.iter().copied()),
        "minimal_primes": subs(&a, spectrum.minimal_primes.iter().copied()),
        "minimal_prime_intersection": a.sub(spectrum.intersection).elements(),
        "associated_primes": subs(&a, ass_of(&a, a.top())?),
        "annihilators": subs(&a, set.members.iter().copied()),
        "acc_on_annihilators": set.acc_holds,
        "annihilator_chain": set.longest_chain,
    });
    let extra = analysis.as_object_mut().expect("object");
    match indecomposable_injectives(&a) {
        Ok(c) => {
            extra.insert(
                "indecomposable_injectives".into(),
                json!(c.classes.iter().map(|k| json!({"order": k.hull.module.order(), "atoms": subs(&a, k.atoms.iter().copied())})).collect::<Vec<_>>()),
            );
        }
        Err(e) => {
            extra.insert("indecomposable_injectives".into(), json!({"error": e.to_string()}));
        }
    }
    match goldie_data(&a) {
        Ok(g) => {
            extra.insert("goldie".into(), serde_json::to_value(g).expect("goldie data serializes"));
        }
        Err(e) => {
            extra.insert("goldie".into(), json!({"error": e.to_string()}));
        }
    }
    timings.insert("analysis_ms".into(), millis(start));
    let ctx = Context::new(&a);
    let start = Instant::now();
    let hyps = hypotheses(&ctx);
    timings.insert("hypotheses_ms".into(), millis(start));
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: "analyze".into(),
        subject: Subject::of(m),
        fault: cfg.fault,
        hypotheses: hyps,
        findings: vec![],
        analysis: Some(analysis),
        replay: None,
        timings,
    })
}

/// `value` with every `timings` entry removed, for comparing runs.
pub fn without_timings(value: &Value) -> Value {
    match value {
        Value::Object(map) => Value::Object(
            map.iter().filter(|(k, _)| k.as_str() != "timings").map(|(k, v)| (k.clone(), without_timings(v))).collect(),
        ),
        Value::Array(items) => Value::Array(items.iter().map(without_timings).collect()),
        other => other.clone(),
    }
}
