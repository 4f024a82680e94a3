//! Randomized checking over generated rings and modules, with greedy
//! shrinking of counterexamples and a replayable corpus.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use modtheory::module::{direct_sum, submodule_as_module};
use modtheory::ring::{ring_poly_quotient, ring_product, ring_upper_triangular};
use modtheory::{
    ideals, quotient, regular_module, ring_cyclic, ring_trivial_extension, submodule_generate, validate_module,
    validate_ring, Config, Context, Error, Fault, Finding, FiniteModule, FiniteRing, Ideal, ModuleAnalysis,
    ModuleTables, Verdict,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::report::{resolve_suite, Subject, SCHEMA_VERSION};
use crate::spec::{explicit_spec, AlgebraSpec};
use crate::CliError;

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub trials: usize,
    pub max_ring_order: usize,
    pub max_module_order: usize,
    pub seed: u64,
    pub suites: Vec<String>,
    pub engine: Config,
    /// Where minimized counterexamples are written; nothing is written when unset.
    pub corpus: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationRecord {
    pub statement: String,
    pub original_order: usize,
    pub minimized: Subject,
    pub shrink_steps: usize,
    /// Corpus entry relative to the corpus root.
    pub corpus_entry: String,
    pub finding: Finding,
    #[serde(skip)]
    pub module: FiniteModule,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub subject: Subject,
    pub construction: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub verdicts: BTreeMap<String, usize>,
    pub violations: Vec<ViolationRecord>,
    pub timings: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzSummary {
    pub schema_version: u32,
    pub seed: u64,
    pub trials: usize,
    pub max_ring_order: usize,
    pub max_module_order: usize,
    pub suites: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
    pub checked: usize,
    pub skipped: usize,
    pub verdicts: BTreeMap<String, usize>,
    pub violations: usize,
    pub timings: BTreeMap<String, u64>,
}

/// A persisted counterexample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub schema_version: u32,
    pub statement: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
    pub module: String,
    pub algebra: AlgebraSpec,
}

fn gen_ring(rng: &mut ChaCha8Rng, max: usize) -> (FiniteRing, String) {
    let max = max.max(2);
    loop {
        let (r, how) = match rng.gen_range(0..6) {
            0 => {
                let n = rng.gen_range(2..=max);
                (ring_cyclic(n), format!("Z{n}"))
            }
            1 if max >= 4 => {
                let a = rng.gen_range(2..=max / 2);
                let b = rng.gen_range(2..=(max / a).max(2));
                if a * b > max {
                    continue;
                }
                (ring_product(&ring_cyclic(a), &ring_cyclic(b)), format!("Z{a}*Z{b}"))
            }
            2 => {
                let p = *[2usize, 3].choose(rng).expect("nonempty");
                let k = rng.gen_range(1..=3);
                if p.pow(k as u32 + 1) > max {
                    continue;
                }
                (ring_trivial_extension(&ring_cyclic(p), k), format!("Z{p}xZ{p}^{k}"))
            }
            3 if max >= 8 => (ring_upper_triangular(&ring_cyclic(2)), "T2(Z2)".to_string()),
            4 => {
                let n: usize = rng.gen_range(2..=3);
                let d = rng.gen_range(2..=4);
                if n.pow(d as u32) > max {
                    continue;
                }
                let modulus: Vec<usize> = (0..d).map(|_| rng.gen_range(0..n)).collect();
                (ring_poly_quotient(n, &modulus), format!("Z{n}[x]/{modulus:?}"))
            }
            5 => {
                let (base, how) = gen_ring(rng, max);
                let all = ideals(&base);
                let ideal = all.choose(rng).expect("zero ideal").clone();
                if ideal.len() == base.order() {
                    continue;
                }
                (base.quotient(&ideal).0, format!("{how}/{:?}", ideal.elements()))
            }
            _ => continue,
        };
        if r.order() > max || r.order() < 2 {
            continue;
        }
        let mut perm: Vec<usize> = (0..r.order()).collect();
        perm.shuffle(rng);
        let relabelled = r.relabel(&perm);
        return (perturb(rng, relabelled), how);
    }
}

/// Occasionally changes one product entry, keeping the change only when the
/// tables still define a ring.
fn perturb(rng: &mut ChaCha8Rng, r: FiniteRing) -> FiniteRing {
    if !rng.gen_bool(0.25) {
        return r;
    }
    let mut t = r.to_tables();
    let n = t.order;
    let (i, j, v) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
    t.mul[i][j] = v;
    validate_ring(&t, r.name(), &modtheory::Caps::default()).unwrap_or(r)
}

fn random_submodule(rng: &mut ChaCha8Rng, m: &FiniteModule) -> modtheory::Submodule {
    let k = rng.gen_range(1..=2);
    submodule_generate(m, (0..k).map(|_| rng.gen_range(0..m.order())))
}

fn gen_module(rng: &mut ChaCha8Rng, r: &Arc<FiniteRing>, max: usize) -> (FiniteModule, String) {
    let reg = regular_module(r);
    let small = |rng: &mut ChaCha8Rng| -> (FiniteModule, String) {
        for _ in 0..16 {
            let pick = rng.gen_range(0..3);
            let (m, how) = match pick {
                0 => (reg.clone(), "R".to_string()),
                1 => {
                    let s = random_submodule(rng, &reg);
                    (quotient(&reg, &s).0, format!("R/<{:?}>", s.generators(&reg)))
                }
                _ => {
                    let s = random_submodule(rng, &reg);
                    (submodule_as_module(&reg, &s), format!("<{:?}>", s.generators(&reg)))
                }
            };
            if m.order() <= max && m.order() > 1 {
                return (m, how);
            }
        }
        let s = submodule_generate(&reg, reg.elements().skip(1));
        (quotient(&reg, &s).0, "R/R".to_string())
    };
    let (mut m, mut how) = small(rng);
    if rng.gen_bool(0.5) {
        let (b, bhow) = small(rng);
        if m.order() * b.order() <= max {
            m = direct_sum(&m, &b).expect("same ring").0;
            how = format!("{how} + {bhow}");
        }
    }
    let mut perm: Vec<usize> = (0..m.order()).collect();
    perm.shuffle(rng);
    (m.relabel(&perm).0.with_name("M"), how)
}

/// Generated subject of one trial.
pub fn trial_subject(seed: u64, trial: usize, max_ring: usize, max_module: usize) -> (FiniteModule, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let (r, rhow) = gen_ring(&mut rng, max_ring);
    let (m, mhow) = gen_module(&mut rng, &Arc::new(r), max_module);
    (m, format!("{rhow}: {mhow}"))
}

fn violates(m: &FiniteModule, id: &str, cfg: &Config) -> Option<Finding> {
    let a = ModuleAnalysis::new(m.clone(), cfg.clone()).ok()?;
    let f = Context::new(&a).finding(id).ok()?;
    (f.verdict == Verdict::Violation).then_some(f)
}

/// `m` as a module over `R / Ann_R(m)`, when that ideal is nonzero.
fn over_faithful_ring(m: &FiniteModule) -> Option<FiniteModule> {
    let r = m.ring();
    let mut bits = FixedBitSet::with_capacity(r.order());
    bits.extend(r.elements().filter(|&s| m.elements().all(|x| m.act(s, x) == m.zero())));
    if bits.count_ones(..) <= 1 {
        return None;
    }
    let (q, class) = r.quotient(&Ideal::from_bits(bits));
    let mut reps = vec![usize::MAX; q.order()];
    for (s, &c) in class.iter().enumerate() {
        if reps[c] == usize::MAX {
            reps[c] = s;
        }
    }
    let t = m.to_tables();
    let tables = ModuleTables { action: reps.iter().map(|&s| t.action[s].clone()).collect(), ..t };
    let mut q = q;
    q.set_name(format!("{}/ann", r.name()));
    validate_module(Arc::new(q), &tables, m.name(), &modtheory::Caps::default()).ok()
}

/// Smaller modules derived from `m`, smallest first.
fn shrink_candidates(m: &FiniteModule, cfg: &Config) -> Vec<FiniteModule> {
    let mut out = Vec::new();
    if let Some(f) = over_faithful_ring(m) {
        out.push(f);
    }
    if let Ok(a) = ModuleAnalysis::new(m.clone(), cfg.clone()) {
        let top = a.top();
        for id in 1..top {
            let covered_by_top = (id + 1..top).all(|o| !a.subset(id, o));
            let sub = a.sub(id);
            if covered_by_top {
                out.push(submodule_as_module(m, sub).with_name(m.name()));
                out.push(quotient(m, sub).0.with_name(m.name()));
            }
        }
        for &atom in a.atoms() {
            if atom != top {
                out.push(quotient(m, a.sub(atom)).0.with_name(m.name()));
            }
        }
        for id in 1..top {
            if a.complement_of(id).is_some() {
                out.push(submodule_as_module(m, a.sub(id)).with_name(m.name()));
            }
        }
    }
    out.retain(|c| c.order() < m.order() || c.ring().order() < m.ring().order());
    out.sort_by_key(|c| (c.order(), c.ring().order()));
    out
}

/// Greedy shrinking that keeps the violation of `id`.
pub fn minimize(m: &FiniteModule, id: &str, cfg: &Config) -> (FiniteModule, Finding, usize) {
    let mut current = m.clone();
    let mut finding = violates(&current, id, cfg).expect("starting point violates");
    let mut steps = 0;
    'outer: loop {
        for cand in shrink_candidates(&current, cfg) {
            if let Some(f) = violates(&cand, id, cfg) {
                current = cand;
                finding = f;
                steps += 1;
                continue 'outer;
            }
        }
        return (current, finding, steps);
    }
}

fn run_trial(cfg: &FuzzConfig, ids: &[&'static str], trial: usize) -> TrialRecord {
    let start = Instant::now();
    let (m, construction) = trial_subject(cfg.seed, trial, cfg.max_ring_order, cfg.max_module_order);
    let mut record = TrialRecord {
        trial,
        subject: Subject::of(&m),
        construction,
        skipped: None,
        verdicts: BTreeMap::new(),
        violations: vec![],
        timings: BTreeMap::new(),
    };
    let outcome = (|| -> Result<Vec<Finding>, Error> {
        let a = ModuleAnalysis::new(m.clone(), cfg.engine.clone())?;
        let ctx = Context::new(&a);
        ids.iter().map(|id| ctx.finding(id)).collect()
    })();
    match outcome {
        Err(e) => record.skipped = Some(e.to_string()),
        Ok(findings) => {
            for f in &findings {
                *record.verdicts.entry(f.verdict.as_str().to_string()).or_default() += 1;
            }
            for f in findings.iter().filter(|f| f.verdict == Verdict::Violation) {
                let (small, finding, steps) = minimize(&m, &f.id, &cfg.engine);
                let subject = Subject::of(&small);
                record.violations.push(ViolationRecord {
                    statement: f.id.clone(),
                    original_order: m.order(),
                    corpus_entry: format!("{}/{}.json", f.id, subject.structure_hash),
                    minimized: subject,
                    shrink_steps: steps,
                    finding,
                    module: small,
                });
            }
        }
    }
    record.timings.insert("trial_ms".into(), start.elapsed().as_millis() as u64);
    record
}

fn run_trials(cfg: &FuzzConfig, ids: &[&'static str]) -> Vec<TrialRecord> {
    #[cfg(feature = "parallel")]
    if cfg.engine.execution == modtheory::Execution::Parallel {
        use rayon::prelude::*;
        return (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, ids, t)).collect();
    }
    (0..cfg.trials).map(|t| run_trial(cfg, ids, t)).collect()
}

fn write_entry(root: &Path, record: &ViolationRecord, fault: Option<Fault>) -> Result<(), CliError> {
    let m = &record.module;
    let path = root.join(&record.corpus_entry);
    std::fs::create_dir_all(path.parent().expect("entry has a directory")).map_err(|e| CliError::Io(e.to_string()))?;
    let entry = CorpusEntry {
        schema_version: SCHEMA_VERSION,
        statement: record.statement.clone(),
        fault,
        module: m.name().to_string(),
        algebra: explicit_spec(m),
    };
    std::fs::write(&path, serde_json::to_string_pretty(&entry).expect("entry serializes") + "\n")
        .map_err(|e| CliError::Io(e.to_string()))
}

/// Runs every trial, persists minimized counterexamples and returns the trial
/// records in index order with a summary.
pub fn fuzz(cfg: &FuzzConfig) -> Result<(Vec<TrialRecord>, FuzzSummary), CliError> {
    let start = Instant::now();
    let filter = if cfg.suites.is_empty() { "all".to_string() } else { cfg.suites.join(",") };
    let ids = resolve_suite(&filter)?;
    if cfg.max_ring_order < 2 || cfg.max_module_order < 1 {
        return Err(CliError::Usage("fuzz bounds need max ring order >= 2 and max module order >= 1".into()));
    }
    let records = run_trials(cfg, &ids);
    if let Some(root) = &cfg.corpus {
        for r in &records {
            for v in &r.violations {
                write_entry(root, v, cfg.engine.fault)?;
            }
        }
    }
    let mut verdicts = BTreeMap::new();
    for r in &records {
        for (k, v) in &r.verdicts {
            *verdicts.entry(k.clone()).or_default() += v;
        }
    }
    let skipped = records.iter().filter(|r| r.skipped.is_some()).count();
    let summary = FuzzSummary {
        schema_version: SCHEMA_VERSION,
        seed: cfg.seed,
        trials: cfg.trials,
        max_ring_order: cfg.max_ring_order,
        max_module_order: cfg.max_module_order,
        suites: vec![filter],
        fault: cfg.engine.fault,
        checked: records.len() - skipped,
        skipped,
        violations: records.iter().map(|r| r.violations.len()).sum(),
        verdicts,
        timings: BTreeMap::from([("total_ms".to_string(), start.elapsed().as_millis() as u64)]),
    };
    Ok((records, summary))
}

/// Re-runs a corpus entry; the returned finding is its current verdict.
pub fn replay(entry: &CorpusEntry, cfg: &Config) -> Result<(FiniteModule, Finding), CliError> {
    let algebra = crate::spec::Algebra::build(&entry.algebra, &cfg.caps)?;
    let m = algebra.module(&entry.module)?.clone();
    let cfg = Config { fault: entry.fault, ..cfg.clone() };
    let a = ModuleAnalysis::new(m.clone(), cfg)?;
    let ids = resolve_suite(&entry.statement)?;
    let f = Context::new(&a).finding(ids[0])?;
    Ok((m, f))
}
