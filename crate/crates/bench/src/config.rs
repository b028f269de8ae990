use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use itergrover::statevector::DEFAULT_MAX_QUBITS;
use itergrover::{Backend, ExecutionMode, IterationPolicy, Precision};

use crate::BenchError;

/// Largest qubit count any sweep accepts; basis indices must fit a `u64`.
pub const MAX_QUBITS: usize = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    Runtime,
    Amplitude,
    Shots,
}

impl Experiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Runtime => "runtime",
            Experiment::Amplitude => "amplitude",
            Experiment::Shots => "shots",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s {
            "runtime" => Ok(Experiment::Runtime),
            "amplitude" => Ok(Experiment::Amplitude),
            "shots" => Ok(Experiment::Shots),
            other => Err(BenchError::Config(format!("unknown experiment `{other}`"))),
        }
    }
}

/// How the marked bitstring is chosen for each qubit count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarkedPolicy {
    AllOnes,
    /// Uniform over all `2ⁿ` states, seeded from the sweep seed and `n`.
    Random,
}

impl FromStr for MarkedPolicy {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s {
            "ones" => Ok(MarkedPolicy::AllOnes),
            "random" => Ok(MarkedPolicy::Random),
            other => Err(BenchError::Config(format!("unknown marked policy `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub experiment: Experiment,
    pub n_min: usize,
    pub n_max: usize,
    pub backends: Vec<Backend>,
    pub modes: Vec<ExecutionMode>,
    pub precisions: Vec<Precision>,
    pub shots_list: Vec<u64>,
    pub trials: usize,
    pub chi_max: usize,
    pub k_policy: IterationPolicy,
    pub marked_policy: MarkedPolicy,
    pub seed: u64,
    pub max_dense_qubits: usize,
    /// Rescale MPS states to unit norm after each compression.
    pub renormalize: bool,
    pub jobs: usize,
    pub output_path: Option<PathBuf>,
}

impl BenchConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            n_min: 2,
            n_max: 12,
            backends: vec![Backend::Statevector, Backend::Mps],
            modes: vec![ExecutionMode::Common, ExecutionMode::Iterative],
            precisions: vec![Precision::Double],
            shots_list: vec![1, 8, 64, 512, 4096],
            trials: 10,
            chi_max: 64,
            k_policy: IterationPolicy::PaperRound,
            marked_policy: MarkedPolicy::AllOnes,
            seed: 0,
            max_dense_qubits: DEFAULT_MAX_QUBITS,
            renormalize: false,
            jobs: 1,
            output_path: None,
        }
    }

    pub fn with_n_range(mut self, n_min: usize, n_max: usize) -> Self {
        self.n_min = n_min;
        self.n_max = n_max;
        self
    }

    pub fn with_backends(mut self, backends: &[Backend]) -> Self {
        self.backends = backends.to_vec();
        self
    }

    pub fn with_modes(mut self, modes: &[ExecutionMode]) -> Self {
        self.modes = modes.to_vec();
        self
    }

    pub fn with_precisions(mut self, precisions: &[Precision]) -> Self {
        self.precisions = precisions.to_vec();
        self
    }

    pub fn with_shots(mut self, shots: &[u64]) -> Self {
        self.shots_list = shots.to_vec();
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Sorts and de-duplicates the axis lists, then checks ranges.
    pub fn validate(mut self) -> Result<Self, BenchError> {
        let err = |m: String| Err(BenchError::Config(m));
        if self.n_min == 0 || self.n_min > self.n_max {
            return err(format!("invalid qubit range {}..={}", self.n_min, self.n_max));
        }
        if self.n_max > MAX_QUBITS {
            return err(format!("n_max {} exceeds the supported {MAX_QUBITS}", self.n_max));
        }
        self.backends.sort();
        self.backends.dedup();
        self.modes.sort();
        self.modes.dedup();
        self.precisions.sort();
        self.precisions.dedup();
        if self.backends.is_empty() || self.modes.is_empty() || self.precisions.is_empty() {
            return err("backends, modes and precisions must be non-empty".into());
        }
        if self.trials == 0 {
            return err("trials must be at least 1".into());
        }
        if self.chi_max == 0 {
            return err("chi_max must be at least 1".into());
        }
        if self.jobs == 0 {
            return err("jobs must be at least 1".into());
        }
        if self.experiment == Experiment::Shots {
            if self.shots_list.is_empty() {
                return err("the shots experiment needs at least one shot count".into());
            }
            if self.shots_list.contains(&0) {
                return err("shot counts must be positive".into());
            }
        }
        Ok(self)
    }
}
