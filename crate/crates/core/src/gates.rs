//! Standard gate matrices and the backend-neutral circuit operation.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bits::Bitstring;
use crate::numeric::{c, ComplexMatrix, Real};

/// One circuit operation, executable on either backend.
///
/// Two-qubit gates act on `(site, site + 1)`; the gate's row index is
/// `2·b_site + b_{site+1}`.
#[derive(Clone, Debug, PartialEq)]
pub enum GateOp<T: Real> {
    SingleQubit {
        gate: ComplexMatrix<T>,
        site: usize,
    },
    TwoQubitAdjacent {
        gate: ComplexMatrix<T>,
        site: usize,
    },
    /// `I − 2|m⟩⟨m|`
    PhaseFlipMarked(Bitstring),
    /// `R₀ = 2|0…0⟩⟨0…0| − I`
    ZeroReflection,
}

impl<T: Real> GateOp<T> {
    pub fn name(&self) -> &'static str {
        match self {
            GateOp::SingleQubit { .. } => "1q",
            GateOp::TwoQubitAdjacent { .. } => "2q",
            GateOp::PhaseFlipMarked(_) => "oracle",
            GateOp::ZeroReflection => "zero-reflection",
        }
    }
}

pub fn hadamard<T: Real>() -> ComplexMatrix<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]).expect("2x2")
}

pub fn pauli_x<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("2x2")
}

pub fn pauli_z<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).expect("2x2")
}

pub fn cz<T: Real>() -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::identity(4);
    m[(3, 3)] = c(-1.0, 0.0);
    m
}

pub fn cnot<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
    ])
    .expect("4x4")
}

pub fn swap<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
    ])
    .expect("4x4")
}

/// Haar-like random unitary: Gram-Schmidt (applied twice) on Gaussian
/// columns, built in double precision and rounded to `T`.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    let mut cols: Vec<Vec<Complex<f64>>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex<f64>> = (0..dim)
            .map(|_| Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        for _ in 0..2 {
            for q in &cols {
                let proj = q
                    .iter()
                    .zip(&v)
                    .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b);
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= a * proj;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            v.iter_mut().for_each(|x| *x /= norm);
            cols.push(v);
        }
    }
    let mut m = ComplexMatrix::<T>::zeros(dim, dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            m[(i, j)] = Complex::new(T::lit(z.re), T::lit(z.im));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn standard_gates_are_unitary() {
        assert!(hadamard::<f64>().is_unitary());
        assert!(hadamard::<f32>().is_unitary());
        assert!(pauli_x::<f64>().is_unitary());
        assert!(pauli_z::<f64>().is_unitary());
        assert!(cz::<f64>().is_unitary());
        assert!(cnot::<f64>().is_unitary());
        assert!(swap::<f32>().is_unitary());
    }

    #[test]
    fn random_unitaries_pass_the_gate_check() {
        let mut rng = seeded(5);
        for dim in [2, 4] {
            for _ in 0..50 {
                assert!(random_unitary::<f64, _>(dim, &mut rng).is_unitary());
                assert!(random_unitary::<f32, _>(dim, &mut rng).is_unitary());
            }
        }
    }
}
