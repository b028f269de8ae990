//! `grover-bench`: run one experiment sweep and write its CSV.
//!
//! Exit status is 0 when every point ran, 2 when some points were skipped
//! and 1 on configuration or I/O errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use itergrover::{Backend, ExecutionMode, IterationPolicy, Precision};
use itergrover_bench::{emit_csv, run_sweep, write_csv, BenchConfig, BenchError, Experiment, MarkedPolicy};

#[derive(Parser, Debug)]
#[command(name = "grover-bench", version, about = "Grover simulation benchmark sweeps")]
struct Cli {
    /// runtime, amplitude or shots
    #[arg(long)]
    experiment: Experiment,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    #[arg(long, value_delimiter = ',', default_value = "sv,mps")]
    backends: Vec<Backend>,
    #[arg(long, value_delimiter = ',', default_value = "common,iterative")]
    modes: Vec<ExecutionMode>,
    #[arg(long, value_delimiter = ',', default_value = "f64")]
    precisions: Vec<Precision>,
    #[arg(long, value_delimiter = ',', default_value = "1,8,64,512,4096")]
    shots: Vec<u64>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 64)]
    chi_max: usize,
    /// paper or optimal
    #[arg(long, default_value = "paper")]
    k_policy: IterationPolicy,
    /// ones or random
    #[arg(long, default_value = "ones")]
    marked: MarkedPolicy,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for independent sweep points.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Largest statevector size; bigger statevector points are skipped.
    #[arg(long)]
    max_dense_qubits: Option<usize>,
    /// Rescale MPS states to unit norm after each compression.
    #[arg(long)]
    renormalize: bool,
}

impl Cli {
    fn into_config(self) -> Result<BenchConfig, BenchError> {
        let mut c = BenchConfig::new(self.experiment)
            .with_n_range(self.n_min, self.n_max)
            .with_backends(&self.backends)
            .with_modes(&self.modes)
            .with_precisions(&self.precisions)
            .with_shots(&self.shots)
            .with_trials(self.trials)
            .with_seed(self.seed);
        c.chi_max = self.chi_max;
        c.k_policy = self.k_policy;
        c.marked_policy = self.marked;
        c.jobs = self.jobs;
        c.renormalize = self.renormalize;
        c.output_path = self.out;
        if let Some(q) = self.max_dense_qubits {
            c.max_dense_qubits = q;
        }
        c.validate()
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let config = match cli.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("grover-bench: {e}");
            return ExitCode::from(1);
        }
    };
    let records = match run_sweep(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("grover-bench: {e}");
            return ExitCode::from(1);
        }
    };
    let written = match &config.output_path {
        Some(path) => emit_csv(&records, path),
        None => write_csv(&records, std::io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("grover-bench: {e}");
        return ExitCode::from(1);
    }
    let skipped = records.iter().filter(|r| r.is_skipped()).count();
    log::info!("{} records, {skipped} skipped", records.len());
    if skipped > 0 {
        eprintln!("grover-bench: {skipped} of {} points skipped", records.len());
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
