//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations, and
//! the spectrum truncation used for MPS compression.

use num_complex::Complex;
use num_traits::Zero;

use super::{ComplexMatrix, Real};
use crate::error::{invalid, Error, Result};

/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// `A = U · diag(s) · V†` with `s` sorted non-increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct SvdResult<T: Real> {
    /// `rows × r` with orthonormal columns, `r = min(rows, cols)` before
    /// truncation.
    pub u: ComplexMatrix<T>,
    pub s: Vec<T>,
    /// `r × cols` with orthonormal rows.
    pub vdag: ComplexMatrix<T>,
}

impl<T: Real> SvdResult<T> {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    /// Multiplies the factors back together.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let mut us = self.u.clone();
        let r = self.s.len();
        for i in 0..us.rows() {
            for j in 0..r {
                us[(i, j)] = us[(i, j)] * self.s[j];
            }
        }
        us.matmul(&self.vdag).expect("factor shapes agree")
    }

    fn check_sorted(&self) -> Result<()> {
        if self.s.iter().any(|x| !x.is_finite() || *x < T::zero()) {
            return invalid("singular values must be finite and non-negative");
        }
        if self.s.windows(2).any(|w| w[0] < w[1]) {
            return invalid("singular values must be sorted non-increasing");
        }
        if self.u.cols() != self.s.len() || self.vdag.rows() != self.s.len() {
            return invalid("singular vector counts do not match the spectrum");
        }
        Ok(())
    }
}

/// Outcome of [`truncate_spectrum`].
#[derive(Clone, Debug, PartialEq)]
pub struct Truncation<T: Real> {
    pub svd: SvdResult<T>,
    /// `Σ_{i≥χ} s_i² / Σ_i s_i²`.
    pub discarded_weight: T,
    /// All singular values were zero; one (zero) value was kept.
    pub degenerate: bool,
}

impl<T: Real> Truncation<T> {
    pub fn retained(&self) -> usize {
        self.svd.s.len()
    }
}

pub fn svd<T: Real>(a: &ComplexMatrix<T>) -> Result<SvdResult<T>> {
    if a.rows() == 0 || a.cols() == 0 {
        return invalid(format!(
            "cannot decompose an empty {}x{} matrix",
            a.rows(),
            a.cols()
        ));
    }
    if !a.is_finite() {
        return invalid("matrix has non-finite entries");
    }
    if a.rows() >= a.cols() {
        let (u, s, v) = jacobi_tall(a)?;
        Ok(SvdResult {
            u,
            s,
            vdag: v.adjoint(),
        })
    } else {
        // A† = U' S V'†  =>  A = V' S U'†
        let (u, s, v) = jacobi_tall(&a.adjoint())?;
        Ok(SvdResult {
            u: v,
            s,
            vdag: u.adjoint(),
        })
    }
}

/// Column-pair orthogonalisation of a tall matrix (`rows >= cols`); returns
/// `(U, s, V)` in row-major form with `s` sorted non-increasing.
fn jacobi_tall<T: Real>(a: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, Vec<T>, ComplexMatrix<T>)> {
    let m = a.rows();
    let n = a.cols();
    let eps = T::epsilon();

    // column-major working copies
    let mut w: Vec<Complex<T>> = (0..n)
        .flat_map(|j| (0..m).map(move |i| (i, j)))
        .map(|ij| a[ij])
        .collect();
    let mut v: Vec<Complex<T>> = vec![Complex::zero(); n * n];
    for j in 0..n {
        v[j * n + j] = Complex::new(T::one(), T::zero());
    }

    // Columns at or below this norm are treated as null space and replaced by
    // an orthonormal completion afterwards, so their pairs need no rotation.
    let frob = w.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let null_norm = eps * eps * frob / T::lit(n as f64);
    // Rotating a column against a much larger one leaves a residual overlap
    // of order eps from cancellation, so a bare eps threshold can cycle.
    let tol = eps * T::lit((m as f64).sqrt().max(2.0));

    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let (alpha, beta, gamma) = {
                    let ci = &w[i * m..(i + 1) * m];
                    let cj = &w[j * m..(j + 1) * m];
                    let mut alpha = T::zero();
                    let mut beta = T::zero();
                    let mut gamma = Complex::<T>::zero();
                    for (x, y) in ci.iter().zip(cj) {
                        alpha = alpha + x.norm_sqr();
                        beta = beta + y.norm_sqr();
                        gamma = gamma + x.conj() * y;
                    }
                    (alpha, beta, gamma)
                };
                let g = gamma.norm();
                let (na, nb) = (alpha.sqrt(), beta.sqrt());
                if g.is_zero() || na.min(nb) <= null_norm || g <= tol * na * nb {
                    continue;
                }
                rotated = true;
                let phase_conj = (gamma / g).conj();
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let t = zeta.signum() / (zeta.abs() + T::one().hypot(zeta));
                let cos = T::one() / T::one().hypot(t);
                let sin = cos * t;
                rotate(&mut w, m, i, j, phase_conj, cos, sin);
                rotate(&mut v, n, i, j, phase_conj, cos, sin);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "Jacobi SVD of a {m}x{n} matrix did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let norms: Vec<T> = (0..n)
        .map(|j| {
            w[j * m..(j + 1) * m]
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<T>()
                .sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal values keep column order
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).expect("finite norms"));

    let s: Vec<T> = order.iter().map(|&j| norms[j]).collect();
    let floor = s[0] * eps * eps;
    let mut u = ComplexMatrix::zeros(m, n);
    let mut vout = ComplexMatrix::zeros(n, n);
    let mut needs_completion = Vec::new();
    for (col, &j) in order.iter().enumerate() {
        let sj = norms[j];
        if sj.is_zero() || sj <= floor {
            needs_completion.push(col);
        } else {
            for r in 0..m {
                u[(r, col)] = w[j * m + r] / sj;
            }
        }
        for r in 0..n {
            vout[(r, col)] = v[j * n + r];
        }
    }
    if !needs_completion.is_empty() {
        complete_columns(&mut u, &needs_completion)?;
    }
    Ok((u, s, vout))
}

#[inline]
fn rotate<T: Real>(
    cols: &mut [Complex<T>],
    len: usize,
    i: usize,
    j: usize,
    phase_conj: Complex<T>,
    cos: T,
    sin: T,
) {
    let (head, tail) = cols.split_at_mut(j * len);
    let ci = &mut head[i * len..(i + 1) * len];
    let cj = &mut tail[..len];
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let xi = *x;
        let yj = *y * phase_conj;
        *x = xi * cos - yj * sin;
        *y = xi * sin + yj * cos;
    }
}

/// Fills the listed (null-space) columns of `u` with unit vectors orthogonal
/// to every other column, by Gram-Schmidt on the standard basis.
fn complete_columns<T: Real>(u: &mut ComplexMatrix<T>, missing: &[usize]) -> Result<()> {
    let m = u.rows();
    let n = u.cols();
    let mut filled: Vec<bool> = vec![true; n];
    for &c in missing {
        filled[c] = false;
    }
    let mut next_basis = 0;
    for &c in missing {
        let mut found = false;
        while next_basis < m && !found {
            let mut cand: Vec<Complex<T>> = vec![Complex::zero(); m];
            cand[next_basis] = Complex::new(T::one(), T::zero());
            next_basis += 1;
            for _ in 0..2 {
                for k in (0..n).filter(|&k| filled[k]) {
                    let proj = (0..m).fold(Complex::zero(), |acc: Complex<T>, r| {
                        acc + u[(r, k)].conj() * cand[r]
                    });
                    for r in 0..m {
                        cand[r] = cand[r] - u[(r, k)] * proj;
                    }
                }
            }
            let norm = cand.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            if norm > T::lit(0.5) {
                for r in 0..m {
                    u[(r, c)] = cand[r] / norm;
                }
                filled[c] = true;
                found = true;
            }
        }
        if !found {
            return Err(Error::NumericalFailure(
                "could not complete an orthonormal basis for the null space".into(),
            ));
        }
    }
    Ok(())
}

/// Keeps the dominant singular triplets.
///
/// The retained count is `min(chi_max, #{s_i > rel_cutoff·s_0})`, never less
/// than one. Ties at the boundary keep the earlier entries.
pub fn truncate_spectrum<T: Real>(svd: SvdResult<T>, chi_max: usize, rel_cutoff: T) -> Result<Truncation<T>> {
    if chi_max == 0 {
        return invalid("chi_max must be at least 1");
    }
    if !(rel_cutoff >= T::zero() && rel_cutoff < T::one()) {
        return invalid(format!("rel_cutoff must lie in [0, 1), got {rel_cutoff}"));
    }
    svd.check_sorted()?;
    if svd.s.is_empty() {
        return invalid("empty spectrum");
    }

    let s0 = svd.s[0];
    if s0.is_zero() {
        return Ok(Truncation {
            svd: slice_svd(svd, 1),
            discarded_weight: T::zero(),
            degenerate: true,
        });
    }
    let above = svd.s.iter().take_while(|&&x| x > rel_cutoff * s0).count();
    let keep = above.min(chi_max).max(1);
    if keep == svd.s.len() {
        return Ok(Truncation {
            svd,
            discarded_weight: T::zero(),
            degenerate: false,
        });
    }
    let total: T = svd.s.iter().map(|&x| x * x).sum();
    let dropped: T = svd.s[keep..].iter().map(|&x| x * x).sum();
    Ok(Truncation {
        svd: slice_svd(svd, keep),
        discarded_weight: dropped / total,
        degenerate: false,
    })
}

fn slice_svd<T: Real>(svd: SvdResult<T>, keep: usize) -> SvdResult<T> {
    let SvdResult { u, s, vdag } = svd;
    let m = u.rows();
    let mut u_new = ComplexMatrix::zeros(m, keep);
    for i in 0..m {
        for j in 0..keep {
            u_new[(i, j)] = u[(i, j)];
        }
    }
    let cols = vdag.cols();
    let vdag_new = ComplexMatrix::from_vec(keep, cols, vdag.as_slice()[..keep * cols].to_vec())
        .expect("row slice has the right length");
    SvdResult {
        u: u_new,
        s: s[..keep].to_vec(),
        vdag: vdag_new,
    }
}
