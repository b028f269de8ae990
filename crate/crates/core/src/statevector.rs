//! Dense statevector simulation.
//!
//! Amplitude `i` belongs to the basis state whose bitstring is
//! [`Bitstring::from_index`]`(n, i)`, i.e. qubit `q` is bit `n − 1 − q` of
//! the index.

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;

use crate::bits::{Bitstring, Histogram};
use crate::error::{invalid, Error, Result};
use crate::gates::GateOp;
use crate::numeric::{ComplexMatrix, Precision, Real};
use crate::rng::seeded;

/// Default hard cap on the qubit count of a dense state.
pub const DEFAULT_MAX_QUBITS: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real> {
    n: usize,
    amps: Vec<Complex<T>>,
}

pub(crate) fn check_gate<T: Real>(gate: &ComplexMatrix<T>, dim: usize) -> Result<()> {
    if gate.rows() != dim || gate.cols() != dim {
        return Err(Error::InvalidGate(format!(
            "expected a {dim}x{dim} matrix, got {}x{}",
            gate.rows(),
            gate.cols()
        )));
    }
    let defect = gate.unitarity_defect();
    if defect > T::lit(8.0) * T::unit_roundoff() {
        return Err(Error::InvalidGate(format!(
            "matrix is not unitary (max |M†M - I| = {defect:e})"
        )));
    }
    Ok(())
}

impl<T: Real> StateVector<T> {
    /// `|0…0⟩` on `n` qubits, subject to [`DEFAULT_MAX_QUBITS`].
    pub fn init_zero(n: usize) -> Result<Self> {
        Self::init_zero_with_cap(n, DEFAULT_MAX_QUBITS)
    }

    pub fn init_zero_with_cap(n: usize, max_qubits: usize) -> Result<Self> {
        if n == 0 {
            return invalid("a state needs at least one qubit");
        }
        if n > max_qubits || n >= usize::BITS as usize {
            let bytes = (1u128 << n.min(127)) * 2 * std::mem::size_of::<T>() as u128;
            return Err(Error::CapacityExceeded {
                what: format!("{n}-qubit {} statevector", T::PRECISION),
                required_bytes: bytes,
                limit: format!("{max_qubits} qubits"),
            });
        }
        let mut amps = vec![Complex::zero(); 1 << n];
        amps[0] = Complex::one();
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        if n == 0 || n >= usize::BITS as usize || amps.len() != 1 << n {
            return invalid(format!("{} amplitudes do not describe {n} qubits", amps.len()));
        }
        Ok(Self { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn precision(&self) -> Precision {
        T::PRECISION
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return invalid(format!("qubit {q} out of range for {} qubits", self.n));
        }
        Ok(())
    }

    pub fn apply_single_qubit(&mut self, gate: &ComplexMatrix<T>, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        check_gate(gate, 2)?;
        let (g00, g01, g10, g11) = (gate[(0, 0)], gate[(0, 1)], gate[(1, 0)], gate[(1, 1)]);
        let stride = 1usize << (self.n - 1 - qubit);
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = g00 * x + g01 * y;
                *a1 = g10 * x + g11 * y;
            }
        }
        Ok(())
    }

    /// Applies a 4×4 gate to qubits `(first, second)`; the gate's row index
    /// is `2·b_first + b_second`. The qubits need not be adjacent.
    pub fn apply_two_qubit(&mut self, gate: &ComplexMatrix<T>, first: usize, second: usize) -> Result<()> {
        self.check_qubit(first)?;
        self.check_qubit(second)?;
        if first == second {
            return invalid("two-qubit gate needs distinct qubits");
        }
        check_gate(gate, 4)?;
        let m1 = 1usize << (self.n - 1 - first);
        let m2 = 1usize << (self.n - 1 - second);
        let mut local = [Complex::<T>::zero(); 4];
        for base in 0..self.amps.len() {
            if base & (m1 | m2) != 0 {
                continue;
            }
            let idx = [base, base | m2, base | m1, base | m1 | m2];
            for (l, &i) in local.iter_mut().zip(&idx) {
                *l = self.amps[i];
            }
            for (r, &i) in idx.iter().enumerate() {
                self.amps[i] = (0..4).fold(Complex::zero(), |acc, k| acc + gate[(r, k)] * local[k]);
            }
        }
        Ok(())
    }

    /// `I − 2|m⟩⟨m|`: negates the marked amplitude.
    pub fn apply_phase_flip(&mut self, marked: &Bitstring) -> Result<()> {
        marked.expect_len(self.n)?;
        let i = marked.index();
        self.amps[i] = -self.amps[i];
        Ok(())
    }

    /// `R₀ = 2|0…0⟩⟨0…0| − I`: keeps amplitude 0 and negates the rest.
    pub fn apply_zero_reflection(&mut self) {
        for a in &mut self.amps[1..] {
            *a = -*a;
        }
    }

    pub fn apply(&mut self, op: &GateOp<T>) -> Result<()> {
        match op {
            GateOp::SingleQubit { gate, site } => self.apply_single_qubit(gate, *site),
            GateOp::TwoQubitAdjacent { gate, site } => self.apply_two_qubit(gate, *site, site + 1),
            GateOp::PhaseFlipMarked(m) => self.apply_phase_flip(m),
            GateOp::ZeroReflection => {
                self.apply_zero_reflection();
                Ok(())
            }
        }
    }

    pub fn amplitude_of(&self, basis: &Bitstring) -> Result<Complex<T>> {
        basis.expect_len(self.n)?;
        Ok(self.amps[basis.index()])
    }

    /// Probability that `qubit` reads 1.
    pub fn marginal_one(&self, qubit: usize) -> Result<T> {
        self.check_qubit(qubit)?;
        let mask = 1usize << (self.n - 1 - qubit);
        let total = self.norm_sqr();
        let ones: T = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        Ok(ones / total)
    }

    /// Draws `shots` samples from `|amps|²` (renormalised).
    pub fn sample(&self, shots: u64, seed: u64) -> Result<Histogram> {
        if shots == 0 {
            return invalid("shots must be at least 1");
        }
        let mut acc = 0.0f64;
        let cdf: Vec<f64> = self
            .amps
            .iter()
            .map(|a| {
                acc += a.norm_sqr().as_f64();
                acc
            })
            .collect();
        let total = acc;
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::NumericalFailure(format!(
                "cannot sample a state of norm² {total}"
            )));
        }
        let mut rng = seeded(seed);
        let mut hist = Histogram::new();
        for _ in 0..shots {
            let u = rng.random::<f64>() * total;
            let i = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            hist.record(Bitstring::from_index(self.n, i));
        }
        Ok(hist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{hadamard, pauli_x};

    fn uniform(n: usize) -> StateVector<f64> {
        let mut sv = StateVector::init_zero(n).unwrap();
        for q in 0..n {
            sv.apply_single_qubit(&hadamard(), q).unwrap();
        }
        sv
    }

    #[test]
    fn init_zero_states() {
        let sv = StateVector::<f64>::init_zero(1).unwrap();
        assert_eq!(sv.amplitudes(), &[Complex::one(), Complex::zero()]);
        let sv = StateVector::<f32>::init_zero(3).unwrap();
        assert_eq!(sv.amplitudes().len(), 8);
        assert_eq!(sv.norm_sqr(), 1.0);
    }

    #[test]
    fn init_zero_over_cap() {
        match StateVector::<f64>::init_zero(33) {
            Err(Error::CapacityExceeded { required_bytes, .. }) => {
                assert_eq!(required_bytes, (1u128 << 33) * 16)
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(StateVector::<f64>::init_zero_with_cap(5, 4).is_err());
    }

    #[test]
    fn hadamard_on_one_qubit() {
        let sv = uniform(1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for a in sv.amplitudes() {
            assert!((a.re - h).abs() < 1e-16 && a.im == 0.0);
        }
    }

    #[test]
    fn x_on_qubit_one_of_two() {
        let mut sv = StateVector::<f64>::init_zero(2).unwrap();
        sv.apply_single_qubit(&pauli_x(), 1).unwrap();
        assert_eq!(sv.amplitude_of(&"01".parse().unwrap()).unwrap(), Complex::one());
    }

    #[test]
    fn hadamard_layer_is_uniform() {
        let sv = uniform(4);
        for a in sv.amplitudes() {
            assert!((a.re - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_unitary_gate() {
        let mut sv = StateVector::<f64>::init_zero(2).unwrap();
        let bad = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            sv.apply_single_qubit(&bad, 0),
            Err(Error::InvalidGate(_))
        ));
        assert!(matches!(
            sv.apply_single_qubit(&ComplexMatrix::identity(4), 0),
            Err(Error::InvalidGate(_))
        ));
        assert!(sv.apply_single_qubit(&hadamard(), 2).is_err());
    }

    #[test]
    fn phase_flip() {
        let mut sv = uniform(2);
        sv.apply_phase_flip(&"00".parse().unwrap()).unwrap();
        let re: Vec<f64> = sv.amplitudes().iter().map(|a| a.re).collect();
        for (x, e) in re.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
            assert!((x - e).abs() < 1e-15);
        }

        let mut sv = uniform(3);
        let before = sv.clone();
        let m: Bitstring = "101".parse().unwrap();
        sv.apply_phase_flip(&m).unwrap();
        assert_eq!(sv.amplitudes().iter().filter(|a| a.re < 0.0).count(), 1);
        assert!(sv.amplitude_of(&m).unwrap().re < 0.0);
        sv.apply_phase_flip(&m).unwrap();
        assert_eq!(sv, before);

        assert!(matches!(
            sv.apply_phase_flip(&"10".parse().unwrap()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn zero_reflection() {
        let mut sv = StateVector::<f64>::init_zero(3).unwrap();
        sv.apply_zero_reflection();
        assert_eq!(sv, StateVector::init_zero(3).unwrap());

        let mut one = StateVector::<f64>::init_zero(1).unwrap();
        one.apply_single_qubit(&pauli_x(), 0).unwrap();
        one.apply_zero_reflection();
        assert_eq!(one.amplitudes()[1], -Complex::<f64>::one());

        let mut sv = uniform(2);
        let before = sv.clone();
        sv.apply_zero_reflection();
        let re: Vec<f64> = sv.amplitudes().iter().map(|a| a.re).collect();
        for (x, e) in re.iter().zip([0.5, -0.5, -0.5, -0.5]) {
            assert!((x - e).abs() < 1e-15);
        }
        sv.apply_zero_reflection();
        assert_eq!(sv, before);
    }

    #[test]
    fn amplitude_queries() {
        let sv = StateVector::<f64>::init_zero(3).unwrap();
        assert_eq!(sv.amplitude_of(&Bitstring::zeros(3)).unwrap(), Complex::one());
        let u = uniform(4);
        for i in 0..16 {
            let a = u.amplitude_of(&Bitstring::from_index(4, i)).unwrap();
            assert!((a.re - 0.25).abs() < 1e-15);
        }
        assert!(u.amplitude_of(&Bitstring::zeros(3)).is_err());
    }

    #[test]
    fn sampling() {
        let sv = StateVector::<f64>::init_zero(3).unwrap();
        let h = sv.sample(100, 1).unwrap();
        assert_eq!(h.count(&Bitstring::zeros(3)), 100);
        let h = sv.sample(1, 9).unwrap();
        assert_eq!(h.count(&Bitstring::zeros(3)), 1);
        assert!(sv.sample(0, 1).is_err());

        // binomial(4096, 1/8): sigma = sqrt(4096 * 1/8 * 7/8)
        let sigma = (4096.0f64 * 0.125 * 0.875).sqrt();
        let h = uniform(3).sample(4096, 42).unwrap();
        assert_eq!(h.total(), 4096);
        for i in 0..8 {
            let c = h.count(&Bitstring::from_index(3, i)) as f64;
            assert!((c - 512.0).abs() <= 4.0 * sigma, "outcome {i}: {c}");
        }
        assert_eq!(
            uniform(3).sample(64, 42).unwrap(),
            uniform(3).sample(64, 42).unwrap()
        );
    }

    #[test]
    fn two_qubit_gate_matches_kron() {
        let mut rng = seeded(3);
        let g = crate::gates::random_unitary::<f64, _>(4, &mut rng);
        let a = crate::gates::random_unitary::<f64, _>(2, &mut rng);
        let b = crate::gates::random_unitary::<f64, _>(2, &mut rng);
        let mut sv = uniform(3);
        sv.apply_single_qubit(&a, 0).unwrap();
        sv.apply_single_qubit(&b, 2).unwrap();
        // gate on (2, 0) equals swapping roles of the kron factors
        let mut left = sv.clone();
        left.apply_two_qubit(&a.kron(&b), 2, 0).unwrap();
        let mut right = sv.clone();
        right.apply_single_qubit(&b, 0).unwrap();
        right.apply_single_qubit(&a, 2).unwrap();
        for (x, y) in left.amplitudes().iter().zip(right.amplitudes()) {
            assert!((x - y).norm() < 1e-14);
        }
        sv.apply_two_qubit(&g, 0, 1).unwrap();
        assert!((sv.norm_sqr() - 1.0).abs() < 1e-14);
    }
}
