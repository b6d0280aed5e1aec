//! Command-line entry points: `prove`, `bench`, `serve` and `classify`.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dlproof_core::bench::{self, BenchConfig, FbpBenchConfig, FbpInstance, MiningConfig};
use dlproof_core::fbp::FbpMethod;
use dlproof_core::par::Execution;
use dlproof_core::proof::{Measure, ProofDocument};
use dlproof_core::render::functional;
use dlproof_core::tableau::{classify, TableauConfig};
use dlproof_core::{parse_axiom, parse_ontology, parse_signature, Ontology, Signature};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::api::{router, AppState};
use crate::engine::{self, Method, ProofRequest};
use crate::store::Store;

#[derive(Parser, Debug)]
#[command(name = "dlproof", version, about = "Proofs for description-logic entailments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a proof of one entailment as JSON.
    Prove(ProveArgs),
    /// Run an experiment and write its rows as CSV.
    Bench(BenchArgs),
    /// Serve the REST API and, optionally, a static front end.
    Serve(ServeArgs),
    /// Print the entailed atomic concept inclusions.
    Classify {
        #[arg(long)]
        ontology: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct ProveArgs {
    #[arg(long)]
    pub ontology: PathBuf,
    /// Goal axiom in functional syntax.
    #[arg(long)]
    pub goal: String,
    #[arg(long, default_value = "elk-minimal")]
    pub method: String,
    #[arg(long, default_value = "size")]
    pub measure: String,
    #[arg(long)]
    pub known_signature: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 300_000)]
    pub budget_ms: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Condense,
    Fbp,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(value_enum)]
    pub experiment: Experiment,
    #[arg(long)]
    pub ontology: PathBuf,
    #[arg(long)]
    pub signature: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Number of tasks or patterns sampled.
    #[arg(long, default_value_t = 500)]
    pub sample: usize,
    /// Signature symbols a condensation task must use.
    #[arg(long, default_value_t = 5)]
    pub min_symbols: usize,
    /// Justifications computed per goal when mining patterns.
    #[arg(long, default_value_t = 16)]
    pub max_justifications: usize,
    /// Keep only patterns with an axiom outside ELH.
    #[arg(long)]
    pub non_elh_only: bool,
    #[arg(long, value_delimiter = ',', default_value = "heur,symb,size")]
    pub methods: Vec<String>,
    #[arg(long, default_value_t = 300_000)]
    pub budget_ms: u64,
    #[arg(long, default_value_t = 2000)]
    pub forget_timeout_ms: u64,
    /// Write 0 for every elapsed time so that runs compare byte for byte.
    #[arg(long)]
    pub no_timing: bool,
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Args, Debug)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long = "static")]
    pub static_dir: Option<PathBuf>,
    /// Persist projects and proofs under this directory.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value_t = 300_000)]
    pub budget_ms: u64,
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Prove(a) => prove(&a),
        Command::Bench(a) => run_bench(&a),
        Command::Serve(a) => serve(a),
        Command::Classify { ontology } => {
            let o = load_ontology(&ontology)?;
            for a in classify(&o, TableauConfig::default())? {
                println!("{}", functional(&a));
            }
            Ok(())
        }
    }
}

fn load_ontology(path: &Path) -> anyhow::Result<Ontology> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut o = parse_ontology(&text).with_context(|| format!("parsing {}", path.display()))?;
    o.set_name(path.file_stem().and_then(|s| s.to_str()).unwrap_or("ontology"));
    Ok(o)
}

fn load_signature(path: &Path) -> anyhow::Result<Signature> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_signature(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn prove(a: &ProveArgs) -> anyhow::Result<()> {
    let o = load_ontology(&a.ontology)?;
    let goal = parse_axiom(&a.goal).context("parsing --goal")?;
    let method: Method = a.method.parse().map_err(anyhow::Error::msg)?;
    let measure: Measure = a.measure.parse()?;
    let known = match &a.known_signature {
        Some(p) => load_signature(p)?,
        None => Signature::new(),
    };
    let req = ProofRequest { goal, method, measure, known: known.clone() };
    let proof = engine::prove(&o, None, &req, Duration::from_millis(a.budget_ms))?;
    let doc = ProofDocument::new("p1", method.as_str(), &proof, &known);
    fs::write(&a.out, serde_json::to_string_pretty(&doc)?).with_context(|| format!("writing {}", a.out.display()))?;
    log::info!("wrote a proof with {} vertices to {}", proof.len(), a.out.display());
    Ok(())
}

pub fn run_bench(a: &BenchArgs) -> anyhow::Result<()> {
    let o = load_ontology(&a.ontology)?;
    let cfg = BenchConfig {
        execution: if a.sequential { Execution::Sequential } else { Execution::Auto },
        record_timing: !a.no_timing,
    };
    let rows = match a.experiment {
        Experiment::Condense => {
            let sig = a.signature.as_deref().map(load_signature).transpose()?;
            let min = if sig.is_some() { a.min_symbols } else { 0 };
            let mut tasks = bench::extract_tasks(&o, sig.as_ref(), min, a.sample, a.seed)?;
            if let Some(p) = &a.signature {
                tasks.iter_mut().for_each(|t| t.signature_ref = Some(p.display().to_string()));
            }
            log::info!("{} condensation tasks", tasks.len());
            bench::run_condensation(&o, &tasks, &sig.unwrap_or_default(), cfg)
        }
        Experiment::Fbp => {
            let methods = a
                .methods
                .iter()
                .map(|m| m.parse::<FbpMethod>().map_err(anyhow::Error::msg))
                .collect::<anyhow::Result<Vec<_>>>()?;
            if methods.is_empty() {
                bail!("no methods given");
            }
            let mining = MiningConfig {
                max_justifications: a.max_justifications,
                non_elh_only: a.non_elh_only,
                execution: cfg.execution,
                ..MiningConfig::default()
            };
            let report = bench::mine_patterns(&o, mining);
            log::info!(
                "{} entailments, {} patterns, {} exhausted",
                report.tasks,
                report.patterns.len(),
                report.exhausted
            );
            let mut instances = FbpInstance::from_patterns(&report.patterns);
            if instances.len() > a.sample {
                instances.shuffle(&mut ChaCha8Rng::seed_from_u64(a.seed));
                instances.truncate(a.sample);
                instances.sort_by(|x, y| x.id.cmp(&y.id));
            }
            let fbp_cfg = FbpBenchConfig {
                budget: Duration::from_millis(a.budget_ms),
                per_forget_timeout: Duration::from_millis(a.forget_timeout_ms),
                bench: cfg,
            };
            bench::run_fbp_comparison(&instances, &methods, fbp_cfg)
        }
    };
    bench::write_csv_file(&a.out, &rows).with_context(|| format!("writing {}", a.out.display()))?;
    log::info!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(())
}

pub fn serve(a: ServeArgs) -> anyhow::Result<()> {
    let store = match &a.data {
        Some(dir) => Store::persistent(dir)?,
        None => Store::in_memory(),
    };
    let state = Arc::new(AppState { store, budget: Duration::from_millis(a.budget_ms) });
    let app = router(state, a.static_dir);
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(("0.0.0.0", a.port)).await?;
        log::info!("listening on {}", listener.local_addr()?);
        axum::serve(listener, app).await?;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_bench_invocation() {
        let cli = Cli::try_parse_from([
            "dlproof", "bench", "condense", "--ontology", "o.ofn", "--signature", "s.txt", "--seed", "3", "--out", "c.csv",
        ])
        .unwrap();
        let Command::Bench(b) = cli.command else { panic!("expected bench") };
        assert_eq!((b.experiment, b.seed), (Experiment::Condense, 3));
    }
}
