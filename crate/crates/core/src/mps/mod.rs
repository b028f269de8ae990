//! Matrix product states with SVD-truncated updates.
//!
//! Site `i` carries qubit `i`; site 0 is the leftmost tensor and holds the
//! most significant bit of a basis index, so contracting left to right
//! enumerates basis states in index order.
//!
//! ```text
//!   1 ── A[0] ── A[1] ── … ── A[n-1] ── 1
//!         │       │             │
//!        q0      q1           q(n-1)
//! ```
//!
//! Entries of a site tensor are stored as `(left, phys, right)` in row-major
//! order. That makes the two reshapes used by every sweep free: the same
//! buffer read as a `(left·2) × right` matrix (left-grouped) or as a
//! `left × (2·right)` matrix (right-grouped).

mod mpo;
mod sample;

use num_complex::Complex;
use num_traits::{One, Zero};

pub use mpo::DiagonalMpo;
pub use sample::PerfectSampler;

use crate::bits::{Bitstring, Histogram};
use crate::error::{invalid, Error, Result};
use crate::gates::{swap, GateOp};
use crate::numeric::{svd, truncate_spectrum, ComplexMatrix, Precision, Real};
use crate::statevector::{check_gate, StateVector};

/// Bond cap used when none is given.
pub const DEFAULT_CHI_MAX: usize = 64;

/// Largest chain that [`MpsState::to_statevector`] will contract.
pub const MAX_DENSE_QUBITS: usize = 20;

/// Rank-3 tensor `A[left, phys, right]` with `phys ∈ {0, 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteTensor<T: Real> {
    left: usize,
    right: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> SiteTensor<T> {
    pub fn new(left: usize, right: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if left == 0 || right == 0 || data.len() != left * 2 * right {
            return invalid(format!(
                "site tensor {left}x2x{right} cannot hold {} entries",
                data.len()
            ));
        }
        Ok(Self { left, right, data })
    }

    /// Product-state tensor for a single qubit in `|bit⟩`.
    pub fn basis(bit: bool) -> Self {
        let mut data = vec![Complex::zero(); 2];
        data[bit as usize] = Complex::one();
        Self {
            left: 1,
            right: 1,
            data,
        }
    }

    #[inline]
    pub fn left_dim(&self) -> usize {
        self.left
    }

    #[inline]
    pub fn right_dim(&self) -> usize {
        self.right
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    #[inline]
    pub fn get(&self, l: usize, p: usize, r: usize) -> Complex<T> {
        self.data[(l * 2 + p) * self.right + r]
    }

    fn left_grouped(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_vec(self.left * 2, self.right, self.data.clone()).expect("shape")
    }

    fn right_grouped(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_vec(self.left, 2 * self.right, self.data.clone()).expect("shape")
    }

    fn from_left_grouped(m: ComplexMatrix<T>) -> Self {
        debug_assert_eq!(m.rows() % 2, 0);
        Self {
            left: m.rows() / 2,
            right: m.cols(),
            data: m.into_vec(),
        }
    }

    fn from_right_grouped(m: ComplexMatrix<T>) -> Self {
        debug_assert_eq!(m.cols() % 2, 0);
        Self {
            left: m.rows(),
            right: m.cols() / 2,
            data: m.into_vec(),
        }
    }

    fn frobenius_sqr(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Deviation of `Σ_p A_p† A_p` from the identity.
    pub fn left_isometry_defect(&self) -> T {
        gram_defect(&self.left_grouped())
    }

    /// Deviation of `Σ_p A_p A_p†` from the identity.
    pub fn right_isometry_defect(&self) -> T {
        gram_defect(&self.right_grouped().adjoint())
    }
}

fn gram_defect<T: Real>(m: &ComplexMatrix<T>) -> T {
    let g = m.adjoint().matmul(m).expect("square gram");
    g.max_abs_diff(&ComplexMatrix::identity(g.rows()))
        .expect("same shape")
}

/// Resource counters reported by a finished simulation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MpsStats {
    pub max_bond_dim: usize,
    pub peak_entries: usize,
    pub discarded_weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MpsState<T: Real> {
    sites: Vec<SiteTensor<T>>,
    chi_max: usize,
    rel_cutoff: T,
    canonical_center: Option<usize>,
    discarded_weight: f64,
    renormalize: bool,
    last_norm_factor: f64,
    peak_entries: usize,
}

impl<T: Real> MpsState<T> {
    /// `|0…0⟩` with unit bonds, centred on site 0.
    pub fn init_zero(n: usize, chi_max: usize, rel_cutoff: T) -> Result<Self> {
        if n == 0 {
            return invalid("an MPS needs at least one site");
        }
        Self::from_sites(
            (0..n).map(|_| SiteTensor::basis(false)).collect(),
            chi_max,
            rel_cutoff,
        )
        .map(|mut s| {
            s.canonical_center = Some(0);
            s
        })
    }

    /// `|0…0⟩` with the default bond cap and cutoff for `T`.
    pub fn init_zero_default(n: usize) -> Result<Self> {
        Self::init_zero(n, DEFAULT_CHI_MAX, T::lit(T::PRECISION.default_rel_cutoff()))
    }

    /// Wraps arbitrary tensors; no canonical form is assumed.
    pub fn from_sites(sites: Vec<SiteTensor<T>>, chi_max: usize, rel_cutoff: T) -> Result<Self> {
        if sites.is_empty() {
            return invalid("an MPS needs at least one site");
        }
        if chi_max == 0 {
            return invalid("chi_max must be at least 1");
        }
        if !(rel_cutoff >= T::zero() && rel_cutoff < T::one()) {
            return invalid(format!("rel_cutoff must lie in [0, 1), got {rel_cutoff}"));
        }
        let n = sites.len();
        if sites[0].left != 1 || sites[n - 1].right != 1 {
            return invalid("boundary bonds must have dimension 1");
        }
        for (i, w) in sites.windows(2).enumerate() {
            if w[0].right != w[1].left {
                return invalid(format!(
                    "bond {i}: right dim {} does not match left dim {}",
                    w[0].right, w[1].left
                ));
            }
            if w[0].right > chi_max {
                return invalid(format!(
                    "bond {i} has dimension {} > chi_max {chi_max}",
                    w[0].right
                ));
            }
        }
        let mut s = Self {
            sites,
            chi_max,
            rel_cutoff,
            canonical_center: None,
            discarded_weight: 0.0,
            renormalize: false,
            last_norm_factor: 1.0,
            peak_entries: 0,
        };
        s.track(0);
        Ok(s)
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn precision(&self) -> Precision {
        T::PRECISION
    }

    pub fn sites(&self) -> &[SiteTensor<T>] {
        &self.sites
    }

    pub fn chi_max(&self) -> usize {
        self.chi_max
    }

    pub fn rel_cutoff(&self) -> T {
        self.rel_cutoff
    }

    pub fn canonical_center(&self) -> Option<usize> {
        self.canonical_center
    }

    pub fn cumulative_discarded_weight(&self) -> f64 {
        self.discarded_weight
    }

    /// When set, truncating updates rescale the state back to unit norm.
    pub fn set_renormalize(&mut self, on: bool) {
        self.renormalize = on;
    }

    pub fn renormalize(&self) -> bool {
        self.renormalize
    }

    /// Scale factor applied by the most recent renormalisation (1 if none).
    pub fn last_norm_factor(&self) -> f64 {
        self.last_norm_factor
    }

    /// Internal bond dimensions, `n − 1` of them.
    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites[..self.sites.len() - 1]
            .iter()
            .map(|s| s.right)
            .collect()
    }

    pub fn max_bond_dim(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// Complex entries currently held by the site tensors.
    pub fn tensor_entries(&self) -> usize {
        self.sites.iter().map(|s| s.data.len()).sum()
    }

    /// Largest number of complex entries held at once, counting the
    /// temporaries of two-site updates, MPO products and SVDs.
    pub fn peak_entries(&self) -> usize {
        self.peak_entries
    }

    pub fn stats(&self) -> MpsStats {
        MpsStats {
            max_bond_dim: self.max_bond_dim(),
            peak_entries: self.peak_entries,
            discarded_weight: self.discarded_weight,
        }
    }

    fn track(&mut self, transient: usize) {
        self.peak_entries = self.peak_entries.max(self.tensor_entries() + transient);
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.sites.len() {
            return invalid(format!("site {site} out of range for {} sites", self.sites.len()));
        }
        Ok(())
    }

    /// Whether every site left of the centre is left-isometric and every site
    /// right of it is right-isometric, to within `tol`.
    pub fn is_canonical(&self, tol: T) -> bool {
        let Some(c) = self.canonical_center else {
            return false;
        };
        self.sites[..c].iter().all(|s| s.left_isometry_defect() <= tol)
            && self.sites[c + 1..]
                .iter()
                .all(|s| s.right_isometry_defect() <= tol)
    }

    pub fn apply_single_qubit(&mut self, gate: &ComplexMatrix<T>, site: usize) -> Result<()> {
        self.check_site(site)?;
        check_gate(gate, 2)?;
        let t = &mut self.sites[site];
        let r = t.right;
        for l in 0..t.left {
            let base = l * 2 * r;
            let (lo, hi) = t.data[base..base + 2 * r].split_at_mut(r);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = gate[(0, 0)] * x + gate[(0, 1)] * y;
                *a1 = gate[(1, 0)] * x + gate[(1, 1)] * y;
            }
        }
        // a unitary on the physical leg keeps either isometry condition
        Ok(())
    }

    /// Applies a 4×4 gate to `(site, site + 1)`, re-splits by truncated SVD,
    /// and leaves the canonical centre on `site + 1`.
    pub fn apply_two_qubit(&mut self, gate: &ComplexMatrix<T>, site: usize) -> Result<()> {
        if site + 1 >= self.sites.len() {
            return invalid(format!(
                "two-site gate at {site} needs sites {site} and {} of {}",
                site + 1,
                self.sites.len()
            ));
        }
        check_gate(gate, 4)?;
        self.canonicalize(site)?;

        let a = self.sites[site].left_grouped();
        let b = self.sites[site + 1].right_grouped();
        let theta = a.matmul(&b)?; // (l·2) × (2·r)
        let l = self.sites[site].left;
        let r = self.sites[site + 1].right;

        let mut out = ComplexMatrix::<T>::zeros(l * 2, 2 * r);
        for li in 0..l {
            for ri in 0..r {
                let mut local = [Complex::<T>::zero(); 4];
                for p1 in 0..2 {
                    for p2 in 0..2 {
                        local[p1 * 2 + p2] = theta[(li * 2 + p1, p2 * r + ri)];
                    }
                }
                for q1 in 0..2 {
                    for q2 in 0..2 {
                        let row = q1 * 2 + q2;
                        let v = (0..4).fold(Complex::zero(), |acc, k| acc + gate[(row, k)] * local[k]);
                        out[(li * 2 + q1, q2 * r + ri)] = v;
                    }
                }
            }
        }
        self.track(theta.as_slice().len() * 2);

        let split = truncate_spectrum(svd(&out)?, self.chi_max, self.rel_cutoff)?;
        self.discarded_weight += split.discarded_weight.as_f64();
        let k = split.retained();
        self.track(out.as_slice().len() + (l * 2 + 2 * r) * k);

        let mut svd = split.svd;
        if self.renormalize {
            self.rescale_spectrum(&mut svd.s);
        }
        let mut right = svd.vdag;
        scale_rows(&mut right, &svd.s);
        self.sites[site] = SiteTensor::from_left_grouped(svd.u);
        self.sites[site + 1] = SiteTensor::from_right_grouped(right);
        self.canonical_center = Some(site + 1);
        self.track(0);
        Ok(())
    }

    fn rescale_spectrum(&mut self, s: &mut [T]) {
        let norm = s.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm > T::zero() {
            let f = T::one() / norm;
            s.iter_mut().for_each(|x| *x = *x * f);
            self.last_norm_factor = f.as_f64();
            if (self.last_norm_factor - 1.0).abs() > 1e3 * T::unit_roundoff().as_f64() {
                log::debug!("renormalised MPS by factor {}", self.last_norm_factor);
            }
        }
    }

    /// Two-qubit gate on arbitrary qubits, routed through swaps to adjacency
    /// and back. The gate's row index is `2·b_first + b_second`.
    pub fn apply_two_qubit_any(
        &mut self,
        gate: &ComplexMatrix<T>,
        first: usize,
        second: usize,
    ) -> Result<()> {
        self.check_site(first)?;
        self.check_site(second)?;
        if first == second {
            return invalid("two-qubit gate needs distinct qubits");
        }
        check_gate(gate, 4)?;
        let (lo, hi) = (first.min(second), first.max(second));
        let sw = swap::<T>();
        let oriented = if first < second {
            gate.clone()
        } else {
            sw.matmul(gate)?.matmul(&sw)?
        };
        for s in (lo + 1..hi).rev() {
            self.apply_two_qubit(&sw, s)?;
        }
        self.apply_two_qubit(&oriented, lo)?;
        for s in lo + 1..hi {
            self.apply_two_qubit(&sw, s)?;
        }
        Ok(())
    }

    /// Moves the orthogonality centre to `center` with untruncated SVDs.
    pub fn canonicalize(&mut self, center: usize) -> Result<()> {
        self.check_site(center)?;
        let n = self.sites.len();
        let (left_from, right_from) = match self.canonical_center {
            Some(c) => (c, c),
            None => (0, n - 1),
        };
        for i in left_from..center {
            self.shift_right(i, None)?;
        }
        for i in (center + 1..=right_from).rev() {
            self.shift_left(i, None)?;
        }
        self.canonical_center = Some(center);
        Ok(())
    }

    /// Splits site `i` as `U · (S V†)`, keeps `U` on `i` and pushes `S V†`
    /// into site `i + 1`.
    fn shift_right(&mut self, i: usize, truncate: Option<(usize, T)>) -> Result<()> {
        let m = self.sites[i].left_grouped();
        let mut dec = svd(&m)?;
        if let Some((chi, cutoff)) = truncate {
            let t = truncate_spectrum(dec, chi, cutoff)?;
            self.discarded_weight += t.discarded_weight.as_f64();
            dec = t.svd;
        }
        self.track(m.as_slice().len() + dec.u.as_slice().len() + dec.vdag.as_slice().len());
        let mut sv = dec.vdag;
        scale_rows(&mut sv, &dec.s);
        let next = sv.matmul(&self.sites[i + 1].right_grouped())?;
        self.sites[i] = SiteTensor::from_left_grouped(dec.u);
        self.sites[i + 1] = SiteTensor::from_right_grouped(next);
        Ok(())
    }

    /// Splits site `i` as `(U S) · V†`, keeps `V†` on `i` and pushes `U S`
    /// into site `i − 1`.
    fn shift_left(&mut self, i: usize, truncate: Option<(usize, T)>) -> Result<()> {
        let m = self.sites[i].right_grouped();
        let mut dec = svd(&m)?;
        if let Some((chi, cutoff)) = truncate {
            let t = truncate_spectrum(dec, chi, cutoff)?;
            self.discarded_weight += t.discarded_weight.as_f64();
            dec = t.svd;
        }
        self.track(m.as_slice().len() + dec.u.as_slice().len() + dec.vdag.as_slice().len());
        let mut us = dec.u;
        scale_cols(&mut us, &dec.s);
        let prev = self.sites[i - 1].left_grouped().matmul(&us)?;
        self.sites[i] = SiteTensor::from_right_grouped(dec.vdag);
        self.sites[i - 1] = SiteTensor::from_left_grouped(prev);
        Ok(())
    }

    /// Right-to-left exact sweep followed by a left-to-right truncating
    /// sweep; ends centred on the last site.
    pub fn compress(&mut self) -> Result<()> {
        let n = self.sites.len();
        self.canonical_center = None;
        for i in (1..n).rev() {
            self.shift_left(i, None)?;
        }
        let trunc = Some((self.chi_max, self.rel_cutoff));
        for i in 0..n - 1 {
            self.shift_right(i, trunc)?;
        }
        self.canonical_center = Some(n - 1);
        if self.renormalize {
            let last = &mut self.sites[n - 1];
            let norm = last.frobenius_sqr().sqrt();
            if norm > T::zero() {
                let f = T::one() / norm;
                last.data.iter_mut().for_each(|z| *z = *z * f);
                self.last_norm_factor = f.as_f64();
            }
        }
        Ok(())
    }

    /// Multiplies by a diagonal MPO (bond dims grow by the MPO bond), then
    /// restores canonical form and the bond cap with [`compress`](Self::compress).
    pub fn apply_diagonal_mpo(&mut self, mpo: &DiagonalMpo<T>) -> Result<()> {
        if mpo.num_sites() != self.sites.len() {
            return invalid(format!(
                "MPO spans {} sites, state has {}",
                mpo.num_sites(),
                self.sites.len()
            ));
        }
        let grown: Vec<SiteTensor<T>> = self
            .sites
            .iter()
            .zip(mpo.cores())
            .map(|(site, core)| core.apply_to(site))
            .collect();
        let grown_entries: usize = grown.iter().map(|s| s.data.len()).sum();
        self.track(grown_entries);
        self.sites = grown;
        self.compress()
    }

    pub fn apply(&mut self, op: &GateOp<T>) -> Result<()> {
        match op {
            GateOp::SingleQubit { gate, site } => self.apply_single_qubit(gate, *site),
            GateOp::TwoQubitAdjacent { gate, site } => self.apply_two_qubit(gate, *site),
            GateOp::PhaseFlipMarked(m) => {
                let mpo = DiagonalMpo::phase_flip(m)?;
                self.apply_diagonal_mpo(&mpo)
            }
            GateOp::ZeroReflection => {
                let mpo = DiagonalMpo::zero_reflection(self.sites.len())?;
                self.apply_diagonal_mpo(&mpo)
            }
        }
    }

    /// `⟨basis|ψ⟩` by a left-to-right vector-matrix sweep.
    pub fn amplitude_of(&self, basis: &Bitstring) -> Result<Complex<T>> {
        basis.expect_len(self.sites.len())?;
        let mut env = vec![Complex::<T>::one()];
        for (site, &bit) in self.sites.iter().zip(basis.bits()) {
            let p = bit as usize;
            let mut next = vec![Complex::zero(); site.right];
            for (l, e) in env.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let row = &site.data[(l * 2 + p) * site.right..(l * 2 + p + 1) * site.right];
                for (x, a) in next.iter_mut().zip(row) {
                    *x = *x + *e * *a;
                }
            }
            env = next;
        }
        Ok(env[0])
    }

    /// `⟨ψ|ψ⟩` by transfer-matrix contraction.
    pub fn norm_sqr(&self) -> T {
        let mut env = ComplexMatrix::<T>::identity(1);
        for site in &self.sites {
            let mut next = ComplexMatrix::<T>::zeros(site.right, site.right);
            for p in 0..2 {
                // A_p as left × right
                let mut ap = ComplexMatrix::<T>::zeros(site.left, site.right);
                for l in 0..site.left {
                    for r in 0..site.right {
                        ap[(l, r)] = site.get(l, p, r);
                    }
                }
                let t = ap
                    .adjoint()
                    .matmul(&env)
                    .and_then(|x| x.matmul(&ap))
                    .expect("shapes");
                for (x, y) in next.as_mut_slice().iter_mut().zip(t.as_slice()) {
                    *x = *x + *y;
                }
            }
            env = next;
        }
        env[(0, 0)].re
    }

    /// Full contraction into a dense vector (at most [`MAX_DENSE_QUBITS`]).
    pub fn to_statevector(&self) -> Result<StateVector<T>> {
        let n = self.sites.len();
        if n > MAX_DENSE_QUBITS {
            return Err(Error::CapacityExceeded {
                what: format!("dense contraction of a {n}-site MPS"),
                required_bytes: (1u128 << n) * 2 * std::mem::size_of::<T>() as u128,
                limit: format!("{MAX_DENSE_QUBITS} sites"),
            });
        }
        // rows: basis prefixes in index order, cols: open right bond
        let mut acc = self.sites[0].left_grouped();
        for site in &self.sites[1..] {
            let next = acc.matmul(&site.right_grouped())?;
            let rows = next.rows() * 2;
            acc = ComplexMatrix::from_vec(rows, site.right, next.into_vec())?;
        }
        StateVector::from_amplitudes(n, acc.into_vec())
    }

    /// Perfect sampling of `shots` outcomes.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<Histogram> {
        PerfectSampler::new(self)?.sample(shots, seed)
    }
}

fn scale_rows<T: Real>(m: &mut ComplexMatrix<T>, s: &[T]) {
    let cols = m.cols();
    for (row, &x) in m.as_mut_slice().chunks_exact_mut(cols).zip(s) {
        row.iter_mut().for_each(|z| *z = *z * x);
    }
}

fn scale_cols<T: Real>(m: &mut ComplexMatrix<T>, s: &[T]) {
    let cols = m.cols();
    for row in m.as_mut_slice().chunks_exact_mut(cols) {
        for (z, &x) in row.iter_mut().zip(s) {
            *z = *z * x;
        }
    }
}

#[cfg(test)]
mod tests;
