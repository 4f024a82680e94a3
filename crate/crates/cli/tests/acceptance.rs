use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use modtheory::endo::{endomorphism_ring, ideal_nilpotency, jacobson_radical};
use modtheory::injective::{indecomposable_injectives, k_singular_submodule};
use modtheory::product::is_annihilator_submodule;
use modtheory::spectrum::{is_semiprime_in, PrimeKind};
use modtheory::{
    are_isomorphic, hom_set, ideals, spec_min, Caps, Config, Context, Fault, FiniteModule, ModuleAnalysis,
    Verdict,
};
use modtheory_cli::fuzz::{fuzz, replay, CorpusEntry, FuzzConfig};
use modtheory_cli::report::without_timings;
use modtheory_cli::{fixture_module, FIXTURES};
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn fixture(name: &str) -> FiniteModule {
    fixture_module(name, &Caps::default()).unwrap()
}

fn sequential(m: &FiniteModule) -> ModuleAnalysis {
    ModuleAnalysis::new(m.clone(), Config::sequential()).unwrap()
}

fn by_size(a: &ModuleAnalysis, ids: &[usize], size: usize) -> Vec<usize> {
    ids.iter().copied().filter(|&i| a.sub(i).len() == size).collect()
}

fn example_hull() -> Outcome {
    let start = Instant::now();
    let m = fixture("e28");
    let a = sequential(&m);
    let err = |e: modtheory::Error| e.to_string();

    let r = m.ring();
    let ring_ideals = ideals(r);
    let sizes: Vec<usize> = ring_ideals.iter().map(|i| i.len()).collect();
    ensure(sizes == vec![1, 2, 2, 2, 4, 8], format!("ideal sizes {sizes:?}"))?;
    let maximal = &ring_ideals[4];
    for j in &ring_ideals[1..4] {
        ensure(j.is_subset(maximal), "every minimal ideal lies in the maximal one")?;
    }

    let fi = a.fully_invariant_ids().map_err(err)?;
    let fsizes: Vec<usize> = fi.iter().map(|&i| a.sub(i).len()).collect();
    ensure(fsizes == vec![1, 2, 4, 4, 4, 8], format!("fully invariant sizes {fsizes:?}"))?;
    let s = by_size(&a, &fi, 2)[0];
    let maxi = by_size(&a, &fi, 4);
    ensure(s == a.socle(), "S is the socle")?;
    let (k, l) = (maxi[0], maxi[1]);
    ensure(a.product(k, l).map_err(err)? == s, "K_M L = S")?;
    ensure(a.ann_left(k).map_err(err)? == s, "Ann(K) = S")?;
    ensure(a.ann_left(s).map_err(err)? == s, "Ann(S) = S")?;
    ensure(a.power(k, 3).map_err(err)? == s, "K^3 = S")?;
    ensure(a.power_right(k, 3).map_err(err)? == a.zero(), "(K_M K)_M K = 0")?;
    ensure(spec_min(&a).map_err(err)?.minimal_primes.is_empty(), "spec_min is empty")?;
    let classes = indecomposable_injectives(&a).map_err(err)?;
    ensure(classes.classes.len() == 1, format!("{} injective classes", classes.classes.len()))?;
    ensure(
        are_isomorphic(&classes.classes[0].hull.module, &m, a.caps()).map_err(err)?.is_some(),
        "the injective class is M",
    )?;
    ensure(!a.is_self_projective().map_err(err)?, "M is not self-projective")?;
    ensure(a.is_retractable().map_err(err)?, "M is retractable")?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("{:.2?}", elapsed))
}

fn z6() -> Outcome {
    let start = Instant::now();
    let m = fixture("z6");
    let a = sequential(&m);
    let err = |e: modtheory::Error| e.to_string();
    let spec = spec_min(&a).map_err(err)?;
    let p = &spec.minimal_primes;
    ensure(p.len() == 2 && spec.intersection == a.zero(), "two minimal primes meeting in 0")?;
    for &q in p {
        ensure(is_annihilator_submodule(&a, q).map_err(err)?, "minimal primes are annihilators")?;
    }
    for i in 0..2 {
        let n = a.ann_right(p[i]).map_err(err)?;
        ensure(n == p[1 - i], format!("N_{i} is the other prime"))?;
    }
    let ctx = Context::new(&a);
    let thm27 = ctx.finding("Thm2.7").map_err(err)?;
    ensure(thm27.verdict == Verdict::Verified && thm27.witness["bijection"] == 2, format!("Thm2.7 {thm27:?}"))?;
    let thm220 = ctx.finding("Thm2.20").map_err(err)?;
    ensure(thm220.verdict == Verdict::Verified, format!("Thm2.20 {thm220:?}"))?;
    let ks: Vec<&Value> = thm220.witness["parts"].as_array().unwrap().iter().map(|p| &p["k"]).collect();
    ensure(ks == vec![&Value::from(1), &Value::from(1)], format!("k = {ks:?}"))?;
    let classes = indecomposable_injectives(&a).map_err(err)?;
    ensure(classes.classes.len() == 2, "two injective classes")?;
    ensure(
        are_isomorphic(&classes.classes[0].hull.module, &classes.classes[1].hull.module, a.caps()).map_err(err)?.is_none(),
        "E_1 and E_2 differ",
    )?;
    ensure(a.uniform_dimension() == 2, "udim 2")?;
    let thm36 = ctx.finding("Thm3.6").map_err(err)?;
    ensure(thm36.verdict == Verdict::Verified, format!("Thm3.6 {thm36:?}"))?;
    for h in ["continuous", "retractable", "non_m_singular"] {
        let v = &ctx.evaluated_hypotheses()[h];
        ensure(v.holds, format!("{h} must hold"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!("{:.2?}", elapsed))
}

fn z4() -> Outcome {
    let start = Instant::now();
    let m = fixture("z4");
    let a = sequential(&m);
    let err = |e: modtheory::Error| e.to_string();
    let two = a.generated([2]);
    ensure(a.sub(two).elements() == vec![0, 2], "2Z4")?;
    let w = is_semiprime_in(&a, a.zero()).map_err(err)?;
    ensure(w.kind == PrimeKind::NotSemiprime && w.offenders == vec![two], format!("{w:?}"))?;
    ensure(a.power(two, 2).map_err(err)? == a.zero(), "(2Z4)^2 = 0")?;
    let zk = k_singular_submodule(&a).map_err(err)?;
    ensure(zk == two, "Z^K = 2Z4")?;
    ensure(a.power(zk, 2).map_err(err)? == a.zero(), "(Z^K)^2 = 0")?;
    let s = endomorphism_ring(&a).map_err(err)?;
    let j = jacobson_radical(s.ring());
    let values: BTreeSet<usize> = j.elements().into_iter().map(|i| s.map(i).apply(1)).collect();
    ensure(values == BTreeSet::from([0, 2]), format!("J = {values:?}"))?;
    ensure(ideal_nilpotency(s.ring(), j.elements()) == Some(2), "J^2 = 0, J != 0")?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    Ok(format!("{:.2?}", elapsed))
}

/// Set maps `m → n` preserving addition and the action, by exhaustive search.
fn filtered_homs(m: &FiniteModule, n: &FiniteModule) -> BTreeSet<Vec<usize>> {
    let (a, b) = (m.to_tables(), n.to_tables());
    let order = m.order();
    let mut out = BTreeSet::new();
    let total = n.order().pow(order as u32);
    for code in 0..total {
        let mut c = code;
        let f: Vec<usize> = (0..order)
            .map(|_| {
                let d = c % n.order();
                c /= n.order();
                d
            })
            .collect();
        let additive = (0..order).all(|x| (0..order).all(|y| f[a.add[x][y]] == b.add[f[x]][f[y]]));
        if additive && a.action.iter().zip(&b.action).all(|(ra, rb)| (0..order).all(|x| f[ra[x]] == rb[f[x]])) {
            out.insert(f);
        }
    }
    out
}

fn product_from(a: &ModuleAnalysis, maps: &BTreeSet<Vec<usize>>, k: usize, l: usize) -> usize {
    let lset = a.sub(l);
    let mut seeds = Vec::new();
    for f in maps.iter().filter(|f| f.iter().all(|&y| lset.contains(y))) {
        seeds.extend(a.sub(k).elements().into_iter().map(|x| f[x]));
    }
    a.generated(seeds)
}

fn oracle_equivalence() -> Outcome {
    let caps = Caps::default();
    let modules: Vec<FiniteModule> =
        FIXTURES.iter().map(|(n, _)| fixture(n)).filter(|m| m.order() <= 8).collect();
    let mut pairs = 0;
    let mut products = 0;
    for m in &modules {
        for n in &modules {
            if !m.same_ring(n) {
                continue;
            }
            let fast: BTreeSet<Vec<usize>> = hom_set(m, n, &caps).map_err(|e| e.to_string())?.into_iter().map(|h| h.into_map()).collect();
            let slow = filtered_homs(m, n);
            ensure(fast == slow, format!("hom sets differ for {} -> {}", m.name(), n.name()))?;
            pairs += 1;
        }
        let a = sequential(m);
        let fast: BTreeSet<Vec<usize>> = hom_set(m, m, &caps).unwrap().into_iter().map(|h| h.into_map()).collect();
        let slow = filtered_homs(m, m);
        for k in 0..a.lattice().len() {
            for l in 0..a.lattice().len() {
                let (x, y) = (product_from(&a, &fast, k, l), product_from(&a, &slow, k, l));
                ensure(x == y && x == a.product(k, l).unwrap(), format!("product mismatch on {} ({k}, {l})", m.ring().name()))?;
                products += 1;
            }
        }
    }
    Ok(format!("{} modules, {pairs} hom pairs, {products} products", modules.len()))
}

fn fuzz_gate() -> Outcome {
    let start = Instant::now();
    let cfg = FuzzConfig {
        trials: 200,
        max_ring_order: 16,
        max_module_order: 32,
        seed: 42,
        suites: vec![],
        engine: Config::default(),
        corpus: None,
    };
    let (records, summary) = fuzz(&cfg).map_err(|e| e.to_string())?;
    ensure(records.len() == 200, "every trial reported")?;
    ensure(summary.violations == 0, format!("{} violations", summary.violations))?;
    ensure(summary.checked > 150, format!("only {} trials checked", summary.checked))?;
    ensure(start.elapsed() < Duration::from_secs(15 * 60), "fuzz took too long")?;
    let clean = format!("{} checked, {} skipped, 0 violations", summary.checked, summary.skipped);

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let faulty = FuzzConfig {
        trials: 10,
        engine: Config { fault: Some(Fault::CorruptProduct), ..Config::default() },
        corpus: Some(dir.path().to_path_buf()),
        ..cfg
    };
    let (records, summary) = fuzz(&faulty).map_err(|e| e.to_string())?;
    ensure(summary.violations >= 1, "corrupted product went unnoticed")?;
    let v = records.iter().flat_map(|r| r.violations.iter()).next().unwrap();
    let original = records.iter().find(|r| r.violations.iter().any(|w| std::ptr::eq(w, v))).unwrap();
    ensure(v.minimized.order <= original.subject.order, "minimized witness is not larger")?;
    let text = std::fs::read_to_string(dir.path().join(&v.corpus_entry)).map_err(|e| e.to_string())?;
    let entry: CorpusEntry = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let (_, finding) = replay(&entry, &Config::default()).map_err(|e| e.to_string())?;
    ensure(finding.verdict == Verdict::Violation, "replay did not reproduce the violation")?;
    Ok(format!("{clean}; self-test {} violations, witness order {} replayed", summary.violations, v.minimized.order))
}

fn run_cli(args: &[&str], cwd: &std::path::Path) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_modtheory")).args(args).current_dir(cwd).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn normalized(stdout: &str) -> Vec<Value> {
    stdout
        .split('\n')
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str::<Value>(l).ok())
        .collect::<Option<Vec<_>>>()
        .unwrap_or_else(|| vec![serde_json::from_str(stdout).unwrap_or(Value::String(stdout.to_string()))])
        .iter()
        .map(without_timings)
        .collect()
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let spec = dir.path().join("e28.json");
    std::fs::write(&spec, modtheory_cli::fixture_text("e28").unwrap()).unwrap();
    let spec = spec.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["fixture", "z6"],
        vec!["fixture", "e28", "--emit"],
        vec!["verify", spec, "--module", "M", "--suite", "all"],
        vec!["analyze", spec, "--module", "M"],
        vec!["lattice", spec, "--module", "M", "--format", "dot"],
        vec!["lattice", spec, "--module", "M", "--format", "json"],
        vec!["fuzz", "--trials", "30", "--seed", "9", "--no-corpus"],
        vec!["fuzz", "--trials", "5", "--seed", "9", "--fault", "corrupt-product"],
    ];
    for args in &commands {
        let first = run_cli(args, dir.path());
        let second = run_cli(args, dir.path());
        ensure(first.0 == second.0, format!("exit codes differ for {args:?}"))?;
        ensure(normalized(&first.1) == normalized(&second.1), format!("outputs differ for {args:?}"))?;
    }
    let seq = run_cli(&["--sequential", "fixture", "e28"], dir.path());
    let par = run_cli(&["fixture", "e28"], dir.path());
    ensure(normalized(&seq.1) == normalized(&par.1), "sequential and parallel reports differ")?;
    Ok(format!("{} commands", commands.len() + 1))
}

fn main() -> std::process::ExitCode {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("1 example hull reproduction", example_hull),
        ("2 z6 fixture", z6),
        ("3 z4 fixture", z4),
        ("4 oracle equivalence", oracle_equivalence),
        ("5 fuzz gate", fuzz_gate),
        ("6 determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                println!("criterion {name}: FAIL ({why})");
                failed.push(name);
            }
        }
    }
    if failed.is_empty() {
        return std::process::ExitCode::SUCCESS;
    }
    eprintln!("failed: {failed:?}");
    std::process::ExitCode::FAILURE
}
