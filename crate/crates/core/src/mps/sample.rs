//! Perfect sampling: outcomes are drawn site by site from exact conditional
//! marginals. With the orthogonality centre on site 0 every site to the right
//! is right-isometric, so the conditional weight of a prefix is the squared
//! norm of the left environment alone.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use super::{MpsState, SiteTensor};
use crate::bits::{Bitstring, Histogram};
use crate::error::{invalid, Error, Result};
use crate::numeric::Real;
use crate::rng::seeded;

#[derive(Clone, Debug)]
pub struct PerfectSampler<T: Real> {
    sites: Vec<SiteTensor<T>>,
}

impl<T: Real> PerfectSampler<T> {
    pub fn new(psi: &MpsState<T>) -> Result<Self> {
        let mut psi = psi.clone();
        psi.canonicalize(0)?;
        Ok(Self { sites: psi.sites })
    }

    /// `env · A[:, p, :]` for both values of `p`, with squared norms.
    fn branch(env: &[Complex<T>], site: &SiteTensor<T>) -> [(Vec<Complex<T>>, T); 2] {
        let mk = |p: usize| {
            let mut v = vec![Complex::<T>::zero(); site.right];
            for (l, e) in env.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                for (r, x) in v.iter_mut().enumerate() {
                    *x = *x + *e * site.get(l, p, r);
                }
            }
            let w = v.iter().map(|z| z.norm_sqr()).sum::<T>();
            (v, w)
        };
        [mk(0), mk(1)]
    }

    /// Distribution of the next qubit given the outcomes in `prefix`.
    pub fn conditional(&self, prefix: &[bool]) -> Result<[T; 2]> {
        if prefix.len() >= self.sites.len() {
            return invalid(format!(
                "prefix of length {} leaves no site to sample",
                prefix.len()
            ));
        }
        let mut env = vec![Complex::new(T::one(), T::zero())];
        for (site, &bit) in self.sites.iter().zip(prefix) {
            let [b0, b1] = Self::branch(&env, site);
            let (v, w) = if bit { b1 } else { b0 };
            if w.is_zero() {
                return invalid("prefix has zero probability");
            }
            let norm = w.sqrt();
            env = v.into_iter().map(|z| z / norm).collect();
        }
        let [(_, w0), (_, w1)] = Self::branch(&env, &self.sites[prefix.len()]);
        let total = w0 + w1;
        Ok([w0 / total, w1 / total])
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Bitstring> {
        let mut bits = Vec::with_capacity(self.sites.len());
        let mut env = vec![Complex::new(T::one(), T::zero())];
        for site in &self.sites {
            let [(v0, w0), (v1, w1)] = Self::branch(&env, site);
            let total = w0 + w1;
            if total <= T::zero() || !total.is_finite() {
                return Err(Error::NumericalFailure(format!(
                    "conditional weights sum to {total} at site {}",
                    bits.len()
                )));
            }
            let u: f64 = rng.random();
            let bit = u * total.as_f64() >= w0.as_f64();
            let (v, w) = if bit { (v1, w1) } else { (v0, w0) };
            let norm = w.sqrt();
            env = v.into_iter().map(|z| z / norm).collect();
            bits.push(bit);
        }
        Ok(Bitstring::new(bits))
    }

    pub fn sample(&self, shots: u64, seed: u64) -> Result<Histogram> {
        if shots == 0 {
            return invalid("shots must be at least 1");
        }
        let mut rng = seeded(seed);
        let mut hist = Histogram::new();
        for _ in 0..shots {
            hist.record(self.draw(&mut rng)?);
        }
        Ok(hist)
    }
}
