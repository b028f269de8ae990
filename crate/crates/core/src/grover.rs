//! Grover search: problem definition, iteration counts, the Grover layer,
//! and the two execution schemes.
//!
//! A Grover layer is `G = D·O` applied right to left: the oracle phase flip
//! on the marked state, then the diffusion `H^{⊗n} · R₀ · H^{⊗n}`.
//!
//! * **Common** materialises the whole circuit (preparation plus `k` layers)
//!   as one [`GroverProgram`] before executing it.
//! * **Iterative** materialises a single layer and re-applies it `k` times to
//!   the live state.
//!
//! Both execute the same operation sequence in the same order, so their final
//! states agree bit for bit; they differ only in how much program is held.
//!
//! The oracle here is the marked-state flip `I − 2|m⟩⟨m|`. The reflection
//! about the unmarked component, `I − 2|r⟩⟨r|`, differs from it by a global
//! sign on `span{|w⟩, |r⟩}`, so every probability is unchanged.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_complex::Complex;

use crate::bits::{Bitstring, Histogram};
use crate::error::{invalid, Error, Result};
use crate::gates::{hadamard, GateOp};
use crate::mps::{MpsState, DEFAULT_CHI_MAX};
use crate::numeric::{to_c64, Precision, Real};
use crate::statevector::{StateVector, DEFAULT_MAX_QUBITS};

/// Rule for choosing the number of Grover iterations `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IterationPolicy {
    /// `round(π/4 · √(2ⁿ))`
    PaperRound,
    /// `round(π/(4θ) − 1/2)`, at least 1
    OptimalRound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExecutionMode {
    Common,
    Iterative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    Statevector,
    Mps,
}

macro_rules! str_enum {
    ($ty:ident { $($variant:ident => $name:literal $(| $alias:literal)*),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => $name),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($name $(| $alias)* => Ok($ty::$variant),)+
                    other => invalid(format!(concat!("unknown ", stringify!($ty), " `{}`"), other)),
                }
            }
        }
    };
}

str_enum!(IterationPolicy { PaperRound => "paper", OptimalRound => "optimal" });
str_enum!(ExecutionMode { Common => "common", Iterative => "iterative" });
str_enum!(Backend { Statevector => "sv" | "statevector", Mps => "mps" });

/// `θ = asin(√(1/2ⁿ))` for a single marked item.
pub fn theta(n: usize) -> f64 {
    (0.5f64).powf(n as f64 / 2.0).asin()
}

pub fn iteration_count(n: usize, policy: IterationPolicy) -> usize {
    match policy {
        IterationPolicy::PaperRound => {
            (std::f64::consts::FRAC_PI_4 * 2f64.powf(n as f64 / 2.0)).round() as usize
        }
        IterationPolicy::OptimalRound => {
            let k = (std::f64::consts::PI / (4.0 * theta(n)) - 0.5).round();
            (k as usize).max(1)
        }
    }
}

/// `sin²((2k+1)θ)`.
pub fn predicted_success_probability(n: usize, k: usize) -> f64 {
    ((2 * k + 1) as f64 * theta(n)).sin().powi(2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroverSpec {
    pub n: usize,
    pub marked: Bitstring,
    pub k_policy: IterationPolicy,
    pub mode: ExecutionMode,
    pub backend: Backend,
    pub precision: Precision,
    pub chi_max: usize,
    /// Relative singular-value cutoff; the precision's default when `None`.
    pub rel_cutoff: Option<f64>,
    /// Rescale the MPS to unit norm after each truncating sweep. Off by
    /// default so rounding drift stays visible in single precision.
    pub renormalize: bool,
    /// Largest statevector this run may allocate.
    pub max_dense_qubits: usize,
    pub seed: u64,
}

impl GroverSpec {
    /// All-ones marked state, `PaperRound` iteration count, iterative MPS in double
    /// precision with `χ_max = 64`.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            marked: Bitstring::ones(n),
            k_policy: IterationPolicy::PaperRound,
            mode: ExecutionMode::Iterative,
            backend: Backend::Mps,
            precision: Precision::Double,
            chi_max: DEFAULT_CHI_MAX,
            rel_cutoff: None,
            renormalize: false,
            max_dense_qubits: DEFAULT_MAX_QUBITS,
            seed: 0,
        }
    }

    pub fn with_marked(mut self, marked: Bitstring) -> Self {
        self.marked = marked;
        self
    }

    pub fn with_policy(mut self, policy: IterationPolicy) -> Self {
        self.k_policy = policy;
        self
    }

    pub fn with_mode(mut self, mode: ExecutionMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn with_chi_max(mut self, chi_max: usize) -> Self {
        self.chi_max = chi_max;
        self
    }

    pub fn with_renormalize(mut self, on: bool) -> Self {
        self.renormalize = on;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return invalid("n must be at least 1");
        }
        self.marked.expect_len(self.n)?;
        if self.chi_max == 0 {
            return invalid("chi_max must be at least 1");
        }
        if let Some(c) = self.rel_cutoff {
            if !(0.0..1.0).contains(&c) {
                return invalid(format!("rel_cutoff must lie in [0, 1), got {c}"));
            }
        }
        Ok(())
    }

    pub fn iterations(&self) -> usize {
        iteration_count(self.n, self.k_policy)
    }

    fn cutoff(&self) -> f64 {
        self.rel_cutoff
            .unwrap_or_else(|| self.precision.default_rel_cutoff())
    }
}

/// `H` on every qubit: `|0…0⟩ → |s⟩`.
pub fn preparation_ops<T: Real>(n: usize) -> Vec<GateOp<T>> {
    (0..n)
        .map(|site| GateOp::SingleQubit {
            gate: hadamard(),
            site,
        })
        .collect()
}

/// `[oracle, H×n, R₀, H×n]`, i.e. `2n + 2` operations.
pub fn build_grover_layer<T: Real>(spec: &GroverSpec) -> Vec<GateOp<T>> {
    let mut ops = Vec::with_capacity(2 * spec.n + 2);
    ops.push(GateOp::PhaseFlipMarked(spec.marked.clone()));
    ops.extend(preparation_ops(spec.n));
    ops.push(GateOp::ZeroReflection);
    ops.extend(preparation_ops(spec.n));
    ops
}

/// A materialised operation list.
#[derive(Clone, Debug, PartialEq)]
pub struct GroverProgram<T: Real> {
    pub ops: Vec<GateOp<T>>,
    pub prep_length: usize,
    pub layer_length: usize,
    pub layers_materialized: usize,
}

impl<T: Real> GroverProgram<T> {
    /// Preparation followed by `k` copies of the layer.
    pub fn common(spec: &GroverSpec, k: usize) -> Self {
        let mut ops = preparation_ops(spec.n);
        let prep_length = ops.len();
        let layer = build_grover_layer::<T>(spec);
        let layer_length = layer.len();
        ops.reserve(k * layer_length);
        for _ in 0..k {
            ops.extend(layer.iter().cloned());
        }
        Self {
            ops,
            prep_length,
            layer_length,
            layers_materialized: k,
        }
    }

    /// Preparation followed by one layer, to be re-applied.
    pub fn iterative(spec: &GroverSpec) -> Self {
        let mut p = Self::common(spec, 1);
        p.layers_materialized = 1;
        p
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn layer(&self, i: usize) -> &[GateOp<T>] {
        let start = self.prep_length + i * self.layer_length;
        &self.ops[start..start + self.layer_length]
    }
}

/// Backend-side resource counters.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BackendStats {
    /// Largest MPS bond seen at a Grover step boundary (`None` for dense).
    pub max_bond_dim: Option<usize>,
    pub discarded_weight: f64,
    /// Peak complex entries held by the state representation.
    pub peak_state_entries: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroverResult {
    pub n: usize,
    pub k: usize,
    pub marked: Bitstring,
    pub policy: IterationPolicy,
    pub mode: ExecutionMode,
    pub backend: Backend,
    pub precision: Precision,
    pub marked_amplitude: Complex<f64>,
    pub marked_probability: f64,
    /// Program construction plus execution.
    pub wall_time: Duration,
    /// Operations held in memory at once.
    pub peak_program_ops: usize,
    pub stats: BackendStats,
}

impl GroverResult {
    /// `|⟨m|ψ⟩|`.
    pub fn target_amplitude(&self) -> f64 {
        self.marked_amplitude.norm()
    }
}

/// Final state of a run, kept for sampling.
#[derive(Clone, Debug)]
pub enum FinalState {
    StatevectorF32(StateVector<f32>),
    StatevectorF64(StateVector<f64>),
    MpsF32(MpsState<f32>),
    MpsF64(MpsState<f64>),
}

impl FinalState {
    pub fn amplitude_of(&self, basis: &Bitstring) -> Result<Complex<f64>> {
        match self {
            FinalState::StatevectorF32(s) => s.amplitude_of(basis).map(to_c64),
            FinalState::StatevectorF64(s) => s.amplitude_of(basis),
            FinalState::MpsF32(s) => s.amplitude_of(basis).map(to_c64),
            FinalState::MpsF64(s) => s.amplitude_of(basis),
        }
    }

    pub fn sample(&self, shots: u64, seed: u64) -> Result<Histogram> {
        match self {
            FinalState::StatevectorF32(s) => s.sample(shots, seed),
            FinalState::StatevectorF64(s) => s.sample(shots, seed),
            FinalState::MpsF32(s) => s.sample(shots, seed),
            FinalState::MpsF64(s) => s.sample(shots, seed),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroverOutcome {
    pub result: GroverResult,
    pub state: FinalState,
}

/// Common surface of the two backends.
pub trait Simulator<T: Real> {
    fn apply(&mut self, op: &GateOp<T>) -> Result<()>;
    fn amplitude_of(&self, basis: &Bitstring) -> Result<Complex<T>>;
    fn sample(&self, shots: u64, seed: u64) -> Result<Histogram>;
    fn bond_dim(&self) -> Option<usize>;
    fn stats(&self) -> BackendStats;
}

impl<T: Real> Simulator<T> for StateVector<T> {
    fn apply(&mut self, op: &GateOp<T>) -> Result<()> {
        StateVector::apply(self, op)
    }

    fn amplitude_of(&self, basis: &Bitstring) -> Result<Complex<T>> {
        StateVector::amplitude_of(self, basis)
    }

    fn sample(&self, shots: u64, seed: u64) -> Result<Histogram> {
        StateVector::sample(self, shots, seed)
    }

    fn bond_dim(&self) -> Option<usize> {
        None
    }

    fn stats(&self) -> BackendStats {
        BackendStats {
            max_bond_dim: None,
            discarded_weight: 0.0,
            peak_state_entries: self.amplitudes().len(),
        }
    }
}

impl<T: Real> Simulator<T> for MpsState<T> {
    fn apply(&mut self, op: &GateOp<T>) -> Result<()> {
        MpsState::apply(self, op)
    }

    fn amplitude_of(&self, basis: &Bitstring) -> Result<Complex<T>> {
        MpsState::amplitude_of(self, basis)
    }

    fn sample(&self, shots: u64, seed: u64) -> Result<Histogram> {
        MpsState::sample(self, shots, seed)
    }

    fn bond_dim(&self) -> Option<usize> {
        Some(self.max_bond_dim())
    }

    fn stats(&self) -> BackendStats {
        BackendStats {
            max_bond_dim: Some(self.max_bond_dim()),
            discarded_weight: self.cumulative_discarded_weight(),
            peak_state_entries: self.peak_entries(),
        }
    }
}

fn apply_all<T: Real, S: Simulator<T>>(state: &mut S, ops: &[GateOp<T>]) -> Result<()> {
    ops.iter().try_for_each(|op| state.apply(op))
}

/// Executes `spec` on an already-initialised backend state; returns the
/// peak program size and the largest bond seen at a layer boundary.
fn execute<T: Real, S: Simulator<T>>(
    state: &mut S,
    spec: &GroverSpec,
    k: usize,
    mut on_step: impl FnMut(usize, &S),
) -> Result<(usize, Option<usize>)> {
    let mut max_bond = state.bond_dim();
    let mut observe = |step: usize, s: &S| {
        max_bond = match (max_bond, s.bond_dim()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        on_step(step, s);
    };
    let peak = match spec.mode {
        ExecutionMode::Common => {
            let program = GroverProgram::<T>::common(spec, k);
            apply_all(state, &program.ops[..program.prep_length])?;
            observe(0, state);
            for step in 0..k {
                apply_all(state, program.layer(step))?;
                observe(step + 1, state);
            }
            program.len()
        }
        ExecutionMode::Iterative => {
            let program = GroverProgram::<T>::iterative(spec);
            apply_all(state, &program.ops[..program.prep_length])?;
            observe(0, state);
            let layer = program.layer(0);
            for step in 0..k {
                apply_all(state, layer)?;
                observe(step + 1, state);
            }
            program.len()
        }
    };
    Ok((peak, max_bond))
}

fn run_typed<T: Real, S: Simulator<T>>(
    spec: &GroverSpec,
    k: usize,
    start: Instant,
    mut state: S,
    on_step: impl FnMut(usize, &S),
) -> Result<(GroverResult, S)> {
    let (peak_program_ops, max_bond) = execute(&mut state, spec, k, on_step)?;
    let wall_time = start.elapsed();
    let amp = to_c64(state.amplitude_of(&spec.marked)?);
    let mut stats = state.stats();
    stats.max_bond_dim = max_bond;
    let result = GroverResult {
        n: spec.n,
        k,
        marked: spec.marked.clone(),
        policy: spec.k_policy,
        mode: spec.mode,
        backend: spec.backend,
        precision: spec.precision,
        marked_amplitude: amp,
        marked_probability: amp.norm_sqr(),
        wall_time,
        peak_program_ops,
        stats,
    };
    Ok((result, state))
}

fn run_precision<T: Real>(spec: &GroverSpec, k: usize) -> Result<(GroverResult, FinalStateOf<T>)> {
    let start = Instant::now();
    match spec.backend {
        Backend::Statevector => {
            let sv = StateVector::<T>::init_zero_with_cap(spec.n, spec.max_dense_qubits)?;
            let (r, s) = run_typed(spec, k, start, sv, |_, _| {})?;
            Ok((r, FinalStateOf::Sv(s)))
        }
        Backend::Mps => {
            let mut mps = MpsState::<T>::init_zero(spec.n, spec.chi_max, T::lit(spec.cutoff()))?;
            mps.set_renormalize(spec.renormalize);
            let (r, s) = run_typed(spec, k, start, mps, |_, _| {})?;
            Ok((r, FinalStateOf::Mps(s)))
        }
    }
}

enum FinalStateOf<T: Real> {
    Sv(StateVector<T>),
    Mps(MpsState<T>),
}

/// Runs `spec` and keeps the final state.
pub fn run_with_state(spec: &GroverSpec) -> Result<GroverOutcome> {
    spec.validate()?;
    let k = spec.iterations();
    let (result, state) = match spec.precision {
        Precision::Single => {
            let (r, s) = run_precision::<f32>(spec, k)?;
            let s = match s {
                FinalStateOf::Sv(s) => FinalState::StatevectorF32(s),
                FinalStateOf::Mps(s) => FinalState::MpsF32(s),
            };
            (r, s)
        }
        Precision::Double => {
            let (r, s) = run_precision::<f64>(spec, k)?;
            let s = match s {
                FinalStateOf::Sv(s) => FinalState::StatevectorF64(s),
                FinalStateOf::Mps(s) => FinalState::MpsF64(s),
            };
            (r, s)
        }
    };
    Ok(GroverOutcome { result, state })
}

pub fn run(spec: &GroverSpec) -> Result<GroverResult> {
    run_with_state(spec).map(|o| o.result)
}

/// Runs an MPS simulation of `spec` in precision `T`, calling `on_step` at
/// every layer boundary (step 0 is the prepared uniform state).
pub fn run_mps_observed<T: Real>(
    spec: &GroverSpec,
    on_step: impl FnMut(usize, &MpsState<T>),
) -> Result<(GroverResult, MpsState<T>)> {
    spec.validate()?;
    if T::PRECISION != spec.precision {
        return invalid(format!(
            "spec asks for {} but the state type is {}",
            spec.precision,
            T::PRECISION
        ));
    }
    let k = spec.iterations();
    let start = Instant::now();
    let mut mps = MpsState::<T>::init_zero(spec.n, spec.chi_max, T::lit(spec.cutoff()))?;
    mps.set_renormalize(spec.renormalize);
    let mut spec = spec.clone();
    spec.backend = Backend::Mps;
    run_typed(&spec, k, start, mps, on_step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn theta_values() {
        assert!((theta(2) - PI / 6.0).abs() < 1e-15);
        assert!((theta(3) - (1.0 / 8f64.sqrt()).asin()).abs() < 1e-15);
        assert!((theta(3) - 0.361_367_123_906_708).abs() < 1e-12);
        for n in 10..40 {
            let approx = 2f64.powf(-(n as f64) / 2.0);
            assert!((theta(n) - approx).abs() / approx < 0.01);
        }
    }

    #[test]
    fn iteration_counts() {
        assert_eq!(iteration_count(4, IterationPolicy::PaperRound), 3);
        assert_eq!(iteration_count(2, IterationPolicy::PaperRound), 2);
        assert_eq!(iteration_count(2, IterationPolicy::OptimalRound), 1);
        assert_eq!(iteration_count(10, IterationPolicy::PaperRound), 25);
        assert_eq!(iteration_count(5, IterationPolicy::PaperRound), 4);
        assert_eq!(iteration_count(1, IterationPolicy::OptimalRound), 1);
    }

    #[test]
    fn success_probability() {
        assert!((predicted_success_probability(2, 1) - 1.0).abs() < 1e-15);
        assert!((predicted_success_probability(3, 2) - 0.945_312_5).abs() < 1e-12);
        for n in 1..20 {
            let p0 = predicted_success_probability(n, 0);
            assert!((p0 - 0.5f64.powi(n as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn layer_shape() {
        for n in 1..8 {
            let spec = GroverSpec::new(n);
            let layer = build_grover_layer::<f64>(&spec);
            assert_eq!(layer.len(), 2 * n + 2);
            assert!(matches!(layer[0], GateOp::PhaseFlipMarked(_)));
            assert!(matches!(layer[n + 1], GateOp::ZeroReflection));
        }
    }

    #[test]
    fn program_sizes() {
        let spec = GroverSpec::new(6);
        let k = spec.iterations();
        let common = GroverProgram::<f64>::common(&spec, k);
        let iterative = GroverProgram::<f64>::iterative(&spec);
        assert_eq!(common.layers_materialized, k);
        assert_eq!(common.len(), 6 + k * 14);
        assert_eq!(iterative.layers_materialized, 1);
        assert_eq!(iterative.len(), 6 + 14);
        assert_eq!(common.layer(k - 1), iterative.layer(0));
    }

    #[test]
    fn parse_enums() {
        assert_eq!(
            "paper".parse::<IterationPolicy>().unwrap(),
            IterationPolicy::PaperRound
        );
        assert_eq!("SV".parse::<Backend>().unwrap(), Backend::Statevector);
        assert_eq!(
            "iterative".parse::<ExecutionMode>().unwrap(),
            ExecutionMode::Iterative
        );
        assert!("dense".parse::<Backend>().is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(GroverSpec::new(3)
            .with_marked("01".parse().unwrap())
            .validate()
            .is_err());
        assert!(GroverSpec::new(3).with_chi_max(0).validate().is_err());
        assert!(GroverSpec::new(0).validate().is_err());
    }

    #[test]
    fn exact_two_qubit_search() {
        for backend in [Backend::Statevector, Backend::Mps] {
            for mode in [ExecutionMode::Common, ExecutionMode::Iterative] {
                for m in 0..4 {
                    let spec = GroverSpec::new(2)
                        .with_marked(Bitstring::from_index(2, m))
                        .with_policy(IterationPolicy::OptimalRound)
                        .with_backend(backend)
                        .with_mode(mode);
                    let r = run(&spec).unwrap();
                    assert_eq!(r.k, 1);
                    assert!((r.marked_probability - 1.0).abs() < 1e-12, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn one_and_two_layers_on_three_qubits() {
        let marked: Bitstring = "010".parse().unwrap();
        let spec = GroverSpec::new(3)
            .with_marked(marked.clone())
            .with_backend(Backend::Statevector);
        let mut sv = StateVector::<f64>::init_zero(3).unwrap();
        for op in preparation_ops::<f64>(3) {
            sv.apply(&op).unwrap();
        }
        let layer = build_grover_layer::<f64>(&spec);
        for op in &layer {
            sv.apply(op).unwrap();
        }
        let p1 = sv.amplitude_of(&marked).unwrap().norm_sqr();
        assert!((p1 - 25.0 / 32.0).abs() < 1e-12);
        for op in &layer {
            sv.apply(op).unwrap();
        }
        let p2 = sv.amplitude_of(&marked).unwrap().norm_sqr();
        assert!((p2 - 0.945_312_5).abs() < 1e-12);
    }

    #[test]
    fn capacity_error_surfaces() {
        let mut spec = GroverSpec::new(6).with_backend(Backend::Statevector);
        spec.max_dense_qubits = 5;
        assert!(matches!(run(&spec), Err(Error::CapacityExceeded { .. })));
    }

    #[test]
    fn observed_run_rejects_precision_mismatch() {
        let spec = GroverSpec::new(3).with_precision(Precision::Single);
        assert!(run_mps_observed::<f64>(&spec, |_, _| {}).is_err());
    }
}
