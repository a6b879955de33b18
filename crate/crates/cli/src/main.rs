use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use tabnl_core::eval::{
    load_dataset, read_reports, run_eval, verify_instance, DatasetFormat, EvalOptions, Instance, LabelSpace, Subset,
};
use tabnl_core::fixtures::write_fixture_dir;
use tabnl_core::gateway::{Backend, LiveBackend, MockBackend};
use tabnl_core::natlog::{execute_proof, Proof};
use tabnl_core::pipeline::{VerdictReport, Verifier};
use tabnl_core::probe::{build_probe, score_probe};
use tabnl_core::{Config, NatOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendKind {
    Live,
    Mock,
}

#[derive(Debug, Parser)]
#[command(name = "tabnl", version, about = "Table fact verification with natural-logic proofs")]
struct Cli {
    /// Engine config file (TOML, or JSON by extension).
    #[arg(long, global = true, env = "TABNL_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "mock")]
    backend: BackendKind,
    /// Directory of prompt/response fixtures for the mock backend.
    #[arg(long, global = true, env = "TABNL_FIXTURES")]
    fixtures: Option<PathBuf>,
    /// Seed for `--sample`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Claims verified concurrently.
    #[arg(long, global = true, default_value_t = 1)]
    parallel: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Verify every claim of a dataset and write one report per line.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value = "feverous-jsonl")]
        format: DatasetFormat,
        /// Verify a seeded random sample of this many claims.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Run NatOps through the automaton, or re-check a stored proof or report.
    ExecuteProof {
        /// Comma or space separated NatOps, e.g. "EQ,FE,ALT" or "≡ ⊑ |".
        #[arg(long, conflicts_with = "input")]
        ops: Option<String>,
        /// JSON file holding a proof or a verdict report.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Build the numeral probe from a labelled dataset.
    ProbeGen {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value = "feverous-jsonl")]
        format: DatasetFormat,
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Retention per probe class from verdict reports of a probe run.
    ProbeScore {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Verify a dataset and report accuracy, macro-F1 and execution rate.
    Eval {
        #[arg(long)]
        input: PathBuf,
        /// Report stream, appended to with `--resume`.
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value = "feverous-jsonl")]
        format: DatasetFormat,
        #[arg(long, default_value = "full")]
        subset: Subset,
        /// Defaults to the dataset format's label space.
        #[arg(long)]
        label_space: Option<LabelSpace>,
        #[arg(long)]
        resume: bool,
        /// Also write the metrics JSON here.
        #[arg(long)]
        metrics: Option<PathBuf>,
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Split a claim into subclaims.
    Decompose {
        #[arg(long)]
        claim: String,
    },
    /// Write the bundled example claims and their mock responses.
    Fixtures {
        #[arg(long)]
        output: PathBuf,
    },
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    match path {
        Some(p) => Config::load(p).with_context(|| format!("loading config {}", p.display())),
        None => Ok(Config::default()),
    }
}

fn backend(cli: &Cli, config: &Config) -> Result<Arc<dyn Backend>> {
    Ok(match cli.backend {
        BackendKind::Live => Arc::new(LiveBackend::new(config.live_config())?),
        BackendKind::Mock => {
            let dir = cli.fixtures.as_ref().context("the mock backend needs --fixtures <dir>")?;
            let mock = MockBackend::from_dir(dir)?;
            log::info!("loaded {} fixtures from {}", mock.len(), dir.display());
            Arc::new(mock)
        }
    })
}

fn verifier(cli: &Cli, config: &Config) -> Result<Verifier> {
    let gateway = config.gateway(backend(cli, config)?)?;
    Ok(Verifier::new(Arc::new(gateway), config.pipeline_config()?))
}

fn load(path: &Path, format: DatasetFormat, sample: Option<usize>, seed: u64) -> Result<(Vec<Instance>, LabelSpace)> {
    let data = load_dataset(path, format).with_context(|| format!("reading {}", path.display()))?;
    if data.skipped > 0 {
        log::warn!("skipped {} malformed records in {}", data.skipped, path.display());
    }
    let mut instances = data.instances;
    if let Some(n) = sample {
        instances.shuffle(&mut StdRng::seed_from_u64(seed));
        instances.truncate(n);
    }
    Ok((instances, data.label_space))
}

fn write_json(path: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => print_out(&text)?,
    }
    Ok(())
}

/// Writes a line to stdout; a closed pipe is not an error.
fn print_out(text: &str) -> Result<()> {
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn parse_ops(text: &str) -> Result<Vec<NatOp>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<NatOp>().map_err(Into::into))
        .collect()
}

fn execute(ops: Option<&str>, input: Option<&Path>) -> Result<serde_json::Value> {
    if let Some(text) = ops {
        let ops = parse_ops(text)?;
        let (verdict, trace) = execute_proof(&ops);
        return Ok(serde_json::json!({ "verdict": verdict, "trace": trace }));
    }
    let Some(path) = input else { bail!("pass --ops or --input") };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Ok(report) = serde_json::from_str::<VerdictReport>(&text) {
        let verdict = report.recompute()?;
        let proofs: Vec<_> = report
            .proofs()
            .map(|p| serde_json::json!({ "subclaim": p.subclaim, "verdict": p.verdict, "trace": p.trace }))
            .collect();
        return Ok(serde_json::json!({ "verdict": verdict, "proofs": proofs }));
    }
    let proof: Proof = serde_json::from_str(&text).with_context(|| format!("{} is neither a proof nor a report", path.display()))?;
    proof.verify()?;
    Ok(serde_json::json!({ "verdict": proof.verdict, "trace": proof.trace }))
}

fn run(cli: &Cli) -> Result<()> {
    let config = load_config(cli.config.as_deref())?;
    match &cli.command {
        Command::Verify { input, output, format, sample } => {
            let (instances, _) = load(input, *format, *sample, cli.seed)?;
            let v = verifier(cli, &config)?;
            let pool = rayon_pool(cli.parallel)?;
            let mut out = BufWriter::new(File::create(output).with_context(|| format!("creating {}", output.display()))?);
            for batch in instances.chunks(cli.parallel.max(1)) {
                let reports: Vec<VerdictReport> = pool.install(|| {
                    use rayon::prelude::*;
                    batch.par_iter().map(|i| verify_instance(&v, i)).collect()
                });
                for r in reports {
                    print_out(&format!("{}\t{}", r.claim_id, r.verdict))?;
                    serde_json::to_writer(&mut out, &r)?;
                    out.write_all(b"\n")?;
                }
                out.flush()?;
            }
        }
        Command::ExecuteProof { ops, input } => {
            write_json(None, &execute(ops.as_deref(), input.as_deref())?)?;
        }
        Command::ProbeGen { input, output, format, sample } => {
            let (instances, _) = load(input, *format, *sample, cli.seed)?;
            let probe = build_probe(&instances);
            let mut out = BufWriter::new(File::create(output).with_context(|| format!("creating {}", output.display()))?);
            for inst in &probe {
                serde_json::to_writer(&mut out, inst)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
            eprintln!("{} probe instances from {} base claims", probe.len(), probe.len() / 18);
        }
        Command::ProbeScore { input, output } => {
            let reports = read_reports(input).with_context(|| format!("reading {}", input.display()))?;
            let score = score_probe(reports.iter().map(|r| (r.claim_id.as_str(), r.verdict)));
            write_json(output.as_deref(), &serde_json::to_value(&score)?)?;
        }
        Command::Eval { input, output, format, subset, label_space, resume, metrics, sample } => {
            let (instances, space) = load(input, *format, *sample, cli.seed)?;
            let v = verifier(cli, &config)?;
            let options = EvalOptions {
                subset: *subset,
                label_space: label_space.unwrap_or(space),
                parallel: cli.parallel,
                resume: *resume,
            };
            let outcome = run_eval(&instances, &v, &options, Some(output))?;
            if outcome.resumed > 0 {
                eprintln!("resumed {} reports from {}", outcome.resumed, output.display());
            }
            let value = serde_json::to_value(&outcome.metrics)?;
            if let Some(path) = metrics {
                write_json(Some(path), &value)?;
            }
            write_json(None, &value)?;
        }
        Command::Decompose { claim } => {
            let v = verifier(cli, &config)?;
            let (subclaims, _, notes) = v.decompose("cli", claim);
            for note in notes {
                log::warn!("{note}");
            }
            for s in subclaims {
                print_out(&s.text)?;
            }
        }
        Command::Fixtures { output } => {
            let gateway = config.gateway(Arc::new(MockBackend::default()))?;
            write_fixture_dir(&gateway, output).with_context(|| format!("writing {}", output.display()))?;
            eprintln!("wrote fixtures and claims.jsonl to {}", output.display());
        }
    }
    Ok(())
}

fn rayon_pool(n: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build()?)
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e:#}");
        let _ = io::stderr().flush();
        std::process::exit(1);
    }
}
