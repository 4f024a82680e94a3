use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use modtheory::{Caps, Config, Execution, Fault, ModuleAnalysis};
use modtheory_cli::fuzz::{fuzz, replay, CorpusEntry, FuzzConfig};
use modtheory_cli::report::{analyze, run_suite, Report, Subject, SCHEMA_VERSION};
use modtheory_cli::spec::{explicit_spec, load_spec};
use modtheory_cli::{fixture_module, fixture_text, lattice, CliError};

#[derive(Parser)]
#[command(name = "modtheory", version, about = "Exhaustive module theory over finite rings")]
struct Cli {
    /// Cap overrides such as `lattice=5000,homs=100000`, applied after MODTHEORY_CAPS.
    #[arg(long, global = true)]
    caps: Option<String>,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    CorruptProduct,
}

#[derive(Subcommand)]
enum Command {
    /// Structural summary of one module.
    Analyze {
        spec: PathBuf,
        #[arg(long)]
        module: String,
    },
    /// Check registered statements on one module.
    Verify {
        spec: PathBuf,
        #[arg(long)]
        module: String,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, value_enum)]
        fault: Option<FaultArg>,
    },
    /// Export the submodule and fully invariant lattices.
    Lattice {
        spec: PathBuf,
        #[arg(long)]
        module: String,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Verify a shipped fixture, or print its spec with --emit.
    Fixture {
        name: String,
        #[arg(long)]
        emit: bool,
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Random trials over generated rings and modules.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 16)]
        max_ring_order: usize,
        #[arg(long, default_value_t = 32)]
        max_module_order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        #[arg(long, default_value = "corpus")]
        corpus: PathBuf,
        #[arg(long)]
        no_corpus: bool,
        #[arg(long, value_enum)]
        fault: Option<FaultArg>,
    },
    /// Re-run a persisted counterexample.
    Replay { entry: PathBuf },
}

fn config(cli: &Cli, fault: Option<FaultArg>) -> Result<Config, CliError> {
    let mut caps = Caps::from_env().map_err(CliError::Usage)?;
    if let Some(spec) = &cli.caps {
        caps = caps.parse_overrides(spec).map_err(CliError::Usage)?;
    }
    Ok(Config {
        caps,
        execution: if cli.sequential { Execution::Sequential } else { Execution::Parallel },
        fault: fault.map(|FaultArg::CorruptProduct| Fault::CorruptProduct),
    })
}

/// Writes to stdout, treating a closed pipe as success.
fn write_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
        }
    }
}

fn print(report: &Report) -> i32 {
    write_stdout(&format!("{}\n", report.to_json()));
    report.exit_code()
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Analyze { spec, module } => {
            let cfg = config(cli, None)?;
            let (_, algebra) = load_spec(spec, &cfg.caps)?;
            Ok(print(&analyze(algebra.module(module)?, &cfg)?))
        }
        Command::Verify { spec, module, suite, fault } => {
            let cfg = config(cli, *fault)?;
            let (_, algebra) = load_spec(spec, &cfg.caps)?;
            Ok(print(&run_suite(algebra.module(module)?, suite, &cfg)?))
        }
        Command::Lattice { spec, module, format } => {
            let cfg = config(cli, None)?;
            let (_, algebra) = load_spec(spec, &cfg.caps)?;
            let a = ModuleAnalysis::new(algebra.module(module)?.clone(), cfg)?;
            match format {
                Format::Dot => write_stdout(&lattice::to_dot(&a)?),
                Format::Json => write_stdout(&format!("{}\n", serde_json::to_string_pretty(&lattice::to_json(&a)?).expect("json"))),
            }
            Ok(0)
        }
        Command::Fixture { name, emit, suite } => {
            if *emit {
                write_stdout(&fixture_text(name)?);
                return Ok(0);
            }
            let cfg = config(cli, None)?;
            let m = fixture_module(name, &cfg.caps)?;
            Ok(print(&run_suite(&m, suite, &cfg)?))
        }
        Command::Fuzz { trials, max_ring_order, max_module_order, seed, suite, corpus, no_corpus, fault } => {
            let engine = config(cli, *fault)?;
            let cfg = FuzzConfig {
                trials: *trials,
                max_ring_order: *max_ring_order,
                max_module_order: *max_module_order,
                seed: *seed,
                suites: suite.clone(),
                engine,
                corpus: (!no_corpus).then(|| corpus.clone()),
            };
            let (records, summary) = fuzz(&cfg)?;
            for r in &records {
                write_stdout(&format!("{}\n", serde_json::to_string(r).expect("record serializes")));
            }
            write_stdout(&format!("{}\n", serde_json::to_string(&summary).expect("summary serializes")));
            Ok(i32::from(summary.violations > 0))
        }
        Command::Replay { entry } => {
            let cfg = config(cli, None)?;
            let text = std::fs::read_to_string(entry).map_err(|e| CliError::Io(format!("{}: {e}", entry.display())))?;
            let entry: CorpusEntry = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad corpus entry: {e}")))?;
            let (m, finding) = replay(&entry, &cfg)?;
            let mut report = Report {
                schema_version: SCHEMA_VERSION,
                command: "replay".into(),
                subject: Subject::of(&m),
                fault: entry.fault,
                hypotheses: Default::default(),
                findings: vec![finding],
                analysis: None,
                replay: None,
                timings: Default::default(),
            };
            if report.violations() > 0 {
                report.replay = Some(explicit_spec(&m));
            }
            Ok(print(&report))
        }
    }
}

fn main() -> ExitCode {
    let gaps = modtheory::findings::registry_gaps();
    if !gaps.is_empty() {
        eprintln!("statement registry is missing {gaps:?}");
        return ExitCode::from(2);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
