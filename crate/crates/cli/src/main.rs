use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use cvwitness::circuits::named_circuit;
use cvwitness::fock::ModeLabel;
use cvwitness::measurement::{estimate, sample, sample_pipeline, DEFAULT_SHOTS};
use cvwitness::witness::WitnessId;
use cvwitness_cli::config::{Run, RunConfig};
use cvwitness_cli::grid::{expand, parse_param};
use cvwitness_cli::preset::{preset, PRESETS};
use cvwitness_cli::run::{lossy_single, prepare, sweep, write_csv};
use cvwitness_cli::verify::{default_checks, run_checks, write_table};

#[derive(Parser)]
#[command(name = "cvwitness", version, about = "Entanglement witnesses for two-mode continuous-variable states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a witness on every grid point and print one JSON report per line.
    Witness(RunArgs),
    /// Evaluate a witness over a grid and write a CSV table.
    Sweep(RunArgs),
    /// Compare simulated values with all closed-form references.
    Verify(VerifyArgs),
    /// Simulate photon-counting runs and estimate the witness from counts.
    Sample(SampleArgs),
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    /// JSON run description; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in figure grid used as the base configuration.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    witness: Option<String>,
    /// State family (tmsv, tmsv_pair, squeezed_pair, coherent, cat, cat_copies, noon).
    #[arg(long)]
    state: Option<String>,
    /// `name=v1,v2` or `name=start:stop:step`; repeatable.
    #[arg(long = "param")]
    params: Vec<String>,
    /// Per-mode transmissivities such as `a1=0.9,b1=0.8`.
    #[arg(long)]
    loss: Option<String>,
    #[arg(long)]
    cutoff: Option<usize>,
    /// Evaluate through simulated photon-counting distributions.
    #[arg(long)]
    pipeline: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Restrict to checks of one witness.
    #[arg(long)]
    witness: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sample a single catalog circuit on copy 1 instead of the full pipeline.
    #[arg(long)]
    circuit: Option<String>,
    /// Modes read out with `--circuit`; defaults to the circuit's modes.
    #[arg(long, value_delimiter = ',')]
    read: Vec<String>,
    /// Directory receiving one counts CSV per pipeline stage.
    #[arg(long)]
    counts_dir: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig> {
        let mut flags = RunConfig {
            witness: self.witness.clone(),
            state: self.state.clone(),
            loss: self.loss.clone(),
            cutoff: self.cutoff,
            out: self.out.clone(),
            pipeline: self.pipeline,
            ..RunConfig::default()
        };
        for p in &self.params {
            let (k, v) = parse_param(p)?;
            flags.params.insert(k, v);
        }
        if let Some(path) = &self.config {
            flags = flags.or(RunConfig::load(path)?);
        }
        if let Some(name) = &self.preset {
            flags = flags.or(preset(name).with_context(|| format!("known presets: {}", PRESETS.join(", ")))?);
        }
        Ok(flags)
    }
}

fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_witness(run: Run) -> Result<()> {
    let rows = sweep(&run)?;
    let mut w = output(&run.out)?;
    for r in &rows {
        serde_json::to_writer(&mut w, &r.report(&run))?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_sweep(run: Run) -> Result<()> {
    let rows = sweep(&run)?;
    write_csv(&rows, output(&run.out)?)
}

fn cmd_verify(args: VerifyArgs) -> Result<bool> {
    let only = args.witness.as_deref().map(str::parse::<WitnessId>).transpose()?;
    let results = run_checks(&default_checks(), only)?;
    if results.is_empty() {
        return Err(anyhow!("no checks selected"));
    }
    write_table(&results, output(&args.out)?)?;
    Ok(results.iter().all(|r| r.pass))
}

fn cmd_sample(args: SampleArgs) -> Result<()> {
    let mut cfg = args.run.config()?;
    cfg.shots = args.shots.or(cfg.shots);
    cfg.seed = args.seed.or(cfg.seed);
    let run = cfg.resolve()?;
    let shots = run.shots.unwrap_or(DEFAULT_SHOTS);
    let points = expand(&run.params)?;

    if let Some(key) = &args.circuit {
        let circuit = named_circuit(key)?;
        let read: Vec<ModeLabel> = if args.read.is_empty() {
            circuit.modes()
        } else {
            args.read.iter().map(|m| m.parse()).collect::<cvwitness::Result<_>>()?
        };
        let [p] = points.as_slice() else {
            return Err(anyhow!("--circuit sampling needs a single grid point, got {}", points.len()));
        };
        let (copies, losses) = prepare(&run, p)?;
        let rho = lossy_single(&copies[0], &losses)?;
        let mut table = sample(&rho, &circuit, &read, shots, run.seed)?;
        table.circuit = key.clone();
        return table.write_csv(output(&run.out)?).map_err(Into::into);
    }

    if !run.pipeline {
        let id = run.witness;
        id.pipeline_copies().ok_or_else(|| anyhow!("witness {id} has no photon-counting pipeline"))?;
    }
    let run = Run { pipeline: true, ..run };
    let mut w = output(&run.out)?;
    for (i, p) in points.iter().enumerate() {
        let (copies, losses) = prepare(&run, p)?;
        let tables = sample_pipeline(run.witness, &copies, &losses, shots, run.seed)?;
        let (value, stderr) = estimate(run.witness, &tables)?;
        if let Some(dir) = &args.counts_dir {
            std::fs::create_dir_all(dir)?;
            for t in &tables {
                let name = format!("point{i}_{}.csv", t.circuit.replace('.', "_"));
                t.write_csv(File::create(dir.join(name))?)?;
            }
        }
        let oracle = run.family.oracle(run.witness, p, &losses)?;
        let line = serde_json::json!({
            "witness": run.witness,
            "params": p,
            "shots": shots,
            "seed": run.seed,
            "value": value,
            "stderr": stderr,
            "oracle": oracle,
        });
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Witness(a) => a.config().and_then(RunConfig::resolve).and_then(cmd_witness).map(|_| true),
        Command::Sweep(a) => a.config().and_then(RunConfig::resolve).and_then(cmd_sweep).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Sample(a) => cmd_sample(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

