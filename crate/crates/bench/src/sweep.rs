//! The three experiments.
//!
//! Each sweep expands its configuration into an ordered lattice of points,
//! evaluates them on a pool of `jobs` threads and returns records in lattice
//! order, so the thread count never changes the output. A point that fails
//! (for example a statevector above the qubit cap) becomes a skipped row and
//! the sweep carries on.

use std::time::Duration;

use itergrover::grover::{iteration_count, run, run_with_state, GroverOutcome};
use itergrover::rng::{derive_seed, seeded};
use itergrover::{Backend, Bitstring, ExecutionMode, GroverResult, GroverSpec, Precision};
use rand::Rng;
use rayon::prelude::*;

use crate::config::{BenchConfig, Experiment, MarkedPolicy};
use crate::record::{BenchRecord, Status};
use crate::BenchError;

// Stream tags for derived seeds.
const TAG_MARKED: u64 = 1;
const TAG_RUN: u64 = 2;
const TAG_SAMPLE: u64 = 3;

#[derive(Clone, Copy, Debug)]
struct Point {
    n: usize,
    backend: Backend,
    mode: ExecutionMode,
    precision: Precision,
}

impl Point {
    fn key(&self) -> [u64; 4] {
        [
            self.n as u64,
            self.backend as u64,
            self.mode as u64,
            self.precision as u64,
        ]
    }
}

fn lattice(config: &BenchConfig) -> Vec<Point> {
    let mut points = Vec::new();
    for n in config.n_min..=config.n_max {
        for &backend in &config.backends {
            for &mode in &config.modes {
                for &precision in &config.precisions {
                    points.push(Point {
                        n,
                        backend,
                        mode,
                        precision,
                    });
                }
            }
        }
    }
    points
}

fn marked_for(config: &BenchConfig, n: usize) -> Bitstring {
    match config.marked_policy {
        MarkedPolicy::AllOnes => Bitstring::ones(n),
        MarkedPolicy::Random => {
            let mut rng = seeded(derive_seed(config.seed, &[TAG_MARKED, n as u64]));
            Bitstring::from_index(n, rng.random_range(0..1usize << n))
        }
    }
}

fn grover_spec(config: &BenchConfig, p: &Point) -> GroverSpec {
    let key = p.key();
    let mut spec = GroverSpec::new(p.n)
        .with_marked(marked_for(config, p.n))
        .with_policy(config.k_policy)
        .with_mode(p.mode)
        .with_backend(p.backend)
        .with_precision(p.precision)
        .with_chi_max(config.chi_max)
        .with_renormalize(config.renormalize)
        .with_seed(derive_seed(
            config.seed,
            &[TAG_RUN, key[0], key[1], key[2], key[3]],
        ));
    spec.max_dense_qubits = config.max_dense_qubits;
    spec
}

fn record_ok(
    experiment: Experiment,
    r: &GroverResult,
    shots: u64,
    trial: usize,
    sampled: f64,
) -> BenchRecord {
    BenchRecord {
        experiment,
        n: r.n,
        backend: r.backend,
        mode: r.mode,
        precision: r.precision,
        k_policy: r.policy,
        k: r.k,
        marked: r.marked.to_string(),
        shots,
        trial,
        wall_time_seconds: r.wall_time.as_secs_f64(),
        marked_amplitude_exact: r.target_amplitude(),
        marked_probability_exact: r.marked_probability,
        marked_amplitude_sampled: sampled,
        peak_program_ops: Some(r.peak_program_ops),
        max_bond_dim: r.stats.max_bond_dim,
        discarded_weight: r.stats.discarded_weight,
        status: Status::Ok,
    }
    .normalized()
}

fn record_skipped(
    experiment: Experiment,
    spec: &GroverSpec,
    shots: u64,
    trial: usize,
    reason: String,
) -> BenchRecord {
    log::warn!(
        "skipping {experiment} n={} {} {} {}: {reason}",
        spec.n,
        spec.backend,
        spec.mode,
        spec.precision
    );
    BenchRecord {
        experiment,
        n: spec.n,
        backend: spec.backend,
        mode: spec.mode,
        precision: spec.precision,
        k_policy: spec.k_policy,
        k: iteration_count(spec.n, spec.k_policy),
        marked: spec.marked.to_string(),
        shots,
        trial,
        wall_time_seconds: f64::NAN,
        marked_amplitude_exact: f64::NAN,
        marked_probability_exact: f64::NAN,
        marked_amplitude_sampled: f64::NAN,
        peak_program_ops: None,
        max_bond_dim: None,
        discarded_weight: f64::NAN,
        status: Status::Skipped(reason),
    }
}

/// Maps `f` over `items` on `jobs` threads, preserving order.
fn parallel_map<I, O, F>(jobs: usize, items: Vec<I>, f: F) -> Result<Vec<O>, BenchError>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| BenchError::Config(format!("cannot start {jobs} worker threads: {e}")))?;
    Ok(pool.install(|| items.into_par_iter().map(f).collect()))
}

fn expect(config: &BenchConfig, experiment: Experiment) -> Result<(), BenchError> {
    if config.experiment != experiment {
        return Err(BenchError::Config(format!(
            "configuration is for the {} experiment, not {experiment}",
            config.experiment
        )));
    }
    Ok(())
}

/// One record per point and trial without sampling.
fn unsampled_sweep(config: &BenchConfig, experiment: Experiment) -> Result<Vec<BenchRecord>, BenchError> {
    let tasks: Vec<(Point, usize)> = lattice(config)
        .into_iter()
        .flat_map(|p| (0..config.trials).map(move |t| (p, t)))
        .collect();
    parallel_map(config.jobs, tasks, |(p, trial)| {
        let spec = grover_spec(config, &p);
        match run(&spec) {
            Ok(r) => record_ok(experiment, &r, 0, trial, f64::NAN),
            Err(e) => record_skipped(experiment, &spec, 0, trial, e.to_string()),
        }
    })
}

/// Times every (n, backend, mode, precision) point `trials` times.
pub fn run_runtime_sweep(config: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    expect(config, Experiment::Runtime)?;
    unsampled_sweep(config, Experiment::Runtime)
}

/// Records exact marked amplitudes per point in every requested precision.
pub fn run_amplitude_sweep(config: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    expect(config, Experiment::Amplitude)?;
    unsampled_sweep(config, Experiment::Amplitude)
}

/// Simulates each point once, then samples the final state for every shot
/// count and trial.
pub fn run_shot_sweep(config: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    expect(config, Experiment::Shots)?;
    let exp = Experiment::Shots;
    let per_point = parallel_map(config.jobs, lattice(config), |p| {
        let spec = grover_spec(config, &p);
        let key = p.key();
        let outcome = run_with_state(&spec);
        let mut rows = Vec::with_capacity(config.shots_list.len() * config.trials);
        for &shots in &config.shots_list {
            for trial in 0..config.trials {
                let row = match &outcome {
                    Ok(GroverOutcome { result, state }) => {
                        let seed = derive_seed(
                            config.seed,
                            &[TAG_SAMPLE, key[0], key[1], key[2], key[3], shots, trial as u64],
                        );
                        match state.sample(shots, seed) {
                            Ok(hist) => {
                                let est = hist.amplitude_estimate(&result.marked);
                                record_ok(exp, result, shots, trial, est)
                            }
                            Err(e) => record_skipped(exp, &spec, shots, trial, e.to_string()),
                        }
                    }
                    Err(e) => record_skipped(exp, &spec, shots, trial, e.to_string()),
                };
                rows.push(row);
            }
        }
        rows
    })?;
    Ok(per_point.into_iter().flatten().collect())
}

/// Dispatches on `config.experiment`.
pub fn run_sweep(config: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    match config.experiment {
        Experiment::Runtime => run_runtime_sweep(config),
        Experiment::Amplitude => run_amplitude_sweep(config),
        Experiment::Shots => run_shot_sweep(config),
    }
}

/// Median of the finite values, `None` if there are none.
pub fn median(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let mut v: Vec<f64> = values.into_iter().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    })
}

/// Median wall time of the records, ignoring skipped rows.
pub fn median_wall_time(records: &[BenchRecord]) -> Option<Duration> {
    median(
        records
            .iter()
            .filter(|r| !r.is_skipped())
            .map(|r| r.wall_time_seconds),
    )
    .map(Duration::from_secs_f64)
}
