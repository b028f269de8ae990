use num_complex::Complex;
use num_traits::Zero;

use super::SiteTensor;
use crate::bits::Bitstring;
use crate::error::{invalid, Result};
use crate::numeric::Real;

/// One core `W[a, b](p)` of a diagonal MPO: only the diagonal `p → p` of the
/// physical operator is stored.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalCore<T: Real> {
    left: usize,
    right: usize,
    // (a, b, p) row-major
    diag: Vec<Complex<T>>,
}

impl<T: Real> DiagonalCore<T> {
    fn new(left: usize, right: usize) -> Self {
        Self {
            left,
            right,
            diag: vec![Complex::zero(); left * right * 2],
        }
    }

    fn set(&mut self, a: usize, b: usize, p: usize, v: Complex<T>) {
        self.diag[(a * self.right + b) * 2 + p] = v;
    }

    pub fn get(&self, a: usize, b: usize, p: usize) -> Complex<T> {
        self.diag[(a * self.right + b) * 2 + p]
    }

    pub fn left_dim(&self) -> usize {
        self.left
    }

    pub fn right_dim(&self) -> usize {
        self.right
    }

    /// `N[(l,a), p, (r,b)] = W[a,b](p) · A[l,p,r]`.
    pub(crate) fn apply_to(&self, site: &SiteTensor<T>) -> SiteTensor<T> {
        let nl = site.left * self.left;
        let nr = site.right * self.right;
        let mut data = vec![Complex::zero(); nl * 2 * nr];
        for l in 0..site.left {
            for a in 0..self.left {
                for p in 0..2 {
                    for b in 0..self.right {
                        let w = self.get(a, b, p);
                        if w.is_zero() {
                            continue;
                        }
                        for r in 0..site.right {
                            let row = (l * self.left + a) * 2 + p;
                            data[row * nr + r * self.right + b] = w * site.get(l, p, r);
                        }
                    }
                }
            }
        }
        SiteTensor {
            left: nl,
            right: nr,
            data,
        }
    }
}

/// Diagonal operator in MPO form with bond dimension at most 2.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalMpo<T: Real> {
    cores: Vec<DiagonalCore<T>>,
}

impl<T: Real> DiagonalMpo<T> {
    /// `α·I + β·|m⟩⟨m|`.
    ///
    /// The projector `|m⟩⟨m| = ⊗ᵢ δ(pᵢ, mᵢ)` is a product operator, so the
    /// sum needs one extra bond channel: channel 0 carries the identity and
    /// channel 1 the projector, and the last core weights them by `α`, `β`.
    pub fn identity_plus_projector(marked: &Bitstring, alpha: f64, beta: f64) -> Result<Self> {
        let n = marked.len();
        if n == 0 {
            return invalid("MPO needs at least one site");
        }
        let one = Complex::new(T::one(), T::zero());
        let delta = |q: usize, p: usize| (marked.bit(q) as usize == p) as u8 as f64;
        let lit = |x: f64| Complex::new(T::lit(x), T::zero());

        if n == 1 {
            let mut core = DiagonalCore::new(1, 1);
            for p in 0..2 {
                core.set(0, 0, p, lit(alpha + beta * delta(0, p)));
            }
            return Ok(Self { cores: vec![core] });
        }

        let mut cores = Vec::with_capacity(n);
        let mut first = DiagonalCore::new(1, 2);
        for p in 0..2 {
            first.set(0, 0, p, one);
            first.set(0, 1, p, lit(delta(0, p)));
        }
        cores.push(first);
        for q in 1..n - 1 {
            let mut mid = DiagonalCore::new(2, 2);
            for p in 0..2 {
                mid.set(0, 0, p, one);
                mid.set(1, 1, p, lit(delta(q, p)));
            }
            cores.push(mid);
        }
        let mut last = DiagonalCore::new(2, 1);
        for p in 0..2 {
            last.set(0, 0, p, lit(alpha));
            last.set(1, 0, p, lit(beta * delta(n - 1, p)));
        }
        cores.push(last);
        Ok(Self { cores })
    }

    /// Oracle `I − 2|m⟩⟨m|`.
    pub fn phase_flip(marked: &Bitstring) -> Result<Self> {
        Self::identity_plus_projector(marked, 1.0, -2.0)
    }

    /// `R₀ = 2|0…0⟩⟨0…0| − I`.
    pub fn zero_reflection(n: usize) -> Result<Self> {
        Self::identity_plus_projector(&Bitstring::zeros(n), -1.0, 2.0)
    }

    pub fn num_sites(&self) -> usize {
        self.cores.len()
    }

    pub fn cores(&self) -> &[DiagonalCore<T>] {
        &self.cores
    }

    pub fn max_bond_dim(&self) -> usize {
        self.cores.iter().map(|c| c.right).max().unwrap_or(1)
    }

    /// Diagonal entry for one basis state, by contracting the cores.
    pub fn diagonal_entry(&self, basis: &Bitstring) -> Result<Complex<T>> {
        basis.expect_len(self.cores.len())?;
        let mut env = vec![Complex::new(T::one(), T::zero())];
        for (core, &bit) in self.cores.iter().zip(basis.bits()) {
            let p = bit as usize;
            let mut next = vec![Complex::zero(); core.right];
            for (a, e) in env.iter().enumerate() {
                for (b, x) in next.iter_mut().enumerate() {
                    *x = *x + *e * core.get(a, b, p);
                }
            }
            env = next;
        }
        Ok(env[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_flip_diagonal() {
        for n in 1..6 {
            let m = Bitstring::from_index(n, (1 << n) / 3);
            let mpo = DiagonalMpo::<f64>::phase_flip(&m).unwrap();
            assert!(mpo.max_bond_dim() <= 2);
            for i in 0..1 << n {
                let b = Bitstring::from_index(n, i);
                let d = mpo.diagonal_entry(&b).unwrap();
                let want = if b == m { -1.0 } else { 1.0 };
                assert_eq!(d, Complex::new(want, 0.0), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn zero_reflection_diagonal() {
        for n in 1..6 {
            let mpo = DiagonalMpo::<f32>::zero_reflection(n).unwrap();
            for i in 0..1 << n {
                let d = mpo.diagonal_entry(&Bitstring::from_index(n, i)).unwrap();
                assert_eq!(d.re, if i == 0 { 1.0 } else { -1.0 });
            }
        }
    }
}
