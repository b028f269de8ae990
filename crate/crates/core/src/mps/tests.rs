use super::*;
use crate::gates::{cz, hadamard, pauli_x, random_unitary};
use crate::rng::seeded;
use rand::Rng;

fn max_diff<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (*x - *y).norm().as_f64())
        .fold(0.0, f64::max)
}

fn uniform_mps(n: usize) -> MpsState<f64> {
    let mut psi = MpsState::init_zero_default(n).unwrap();
    for q in 0..n {
        psi.apply_single_qubit(&hadamard(), q).unwrap();
    }
    psi
}

fn random_mps(n: usize, chi: usize, seed: u64) -> MpsState<f64> {
    let mut rng = seeded(seed);
    let mut sites = Vec::new();
    for i in 0..n {
        let l = if i == 0 { 1 } else { chi };
        let r = if i == n - 1 { 1 } else { chi };
        let data = (0..l * 2 * r)
            .map(|_| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        sites.push(SiteTensor::new(l, r, data).unwrap());
    }
    MpsState::from_sites(sites, 64, 1e-12).unwrap()
}

/// Random brickwork circuit applied to both backends.
fn random_circuit(n: usize, depth: usize, seed: u64) -> (StateVector<f64>, MpsState<f64>) {
    let mut rng = seeded(seed);
    let mut sv = StateVector::<f64>::init_zero(n).unwrap();
    let mut psi = MpsState::<f64>::init_zero_default(n).unwrap();
    for layer in 0..depth {
        for q in 0..n {
            let g = random_unitary::<f64, _>(2, &mut rng);
            sv.apply_single_qubit(&g, q).unwrap();
            psi.apply_single_qubit(&g, q).unwrap();
        }
        for q in (layer % 2..n.saturating_sub(1)).step_by(2) {
            let g = random_unitary::<f64, _>(4, &mut rng);
            sv.apply_two_qubit(&g, q, q + 1).unwrap();
            psi.apply_two_qubit(&g, q).unwrap();
        }
    }
    (sv, psi)
}

#[test]
fn init_zero_product_state() {
    let psi = MpsState::<f64>::init_zero_default(5).unwrap();
    assert_eq!(psi.bond_dims(), vec![1, 1, 1, 1]);
    assert_eq!(psi.canonical_center(), Some(0));
    assert_eq!(psi.cumulative_discarded_weight(), 0.0);
    assert_eq!(psi.amplitude_of(&Bitstring::zeros(5)).unwrap(), Complex::one());
    assert!(MpsState::<f64>::init_zero(0, 4, 0.0).is_err());
    assert!(MpsState::<f64>::init_zero(3, 0, 0.0).is_err());
}

#[test]
fn memory_linear_in_sites() {
    let per_site: Vec<usize> = (1..10)
        .map(|n| MpsState::<f64>::init_zero_default(n).unwrap().tensor_entries())
        .collect();
    for (i, e) in per_site.iter().enumerate() {
        assert_eq!(*e, 2 * (i + 1));
    }
}

#[test]
fn hadamard_layer_stays_product() {
    let psi = uniform_mps(4);
    assert_eq!(psi.bond_dims(), vec![1, 1, 1]);
    for i in 0..16 {
        let a = psi.amplitude_of(&Bitstring::from_index(4, i)).unwrap();
        assert!((a.re - 0.25).abs() < 1e-15);
    }
    let psi = uniform_mps(6);
    let a = psi.amplitude_of(&"010011".parse().unwrap()).unwrap();
    assert!((a.re - 0.125).abs() < 1e-15);
}

#[test]
fn x_on_site_two_sets_last_bit() {
    let mut psi = MpsState::<f64>::init_zero_default(3).unwrap();
    psi.apply_single_qubit(&pauli_x(), 2).unwrap();
    assert_eq!(psi.amplitude_of(&"001".parse().unwrap()).unwrap(), Complex::one());
}

#[test]
fn single_site_random_unitary_matches_dense() {
    let mut rng = seeded(17);
    let g = random_unitary::<f64, _>(2, &mut rng);
    let (mut sv, mut psi) = random_circuit(6, 2, 4);
    sv.apply_single_qubit(&g, 0).unwrap();
    psi.apply_single_qubit(&g, 0).unwrap();
    assert!(max_diff(&sv, &psi.to_statevector().unwrap()) < 1e-10);
}

#[test]
fn identity_two_site_gate() {
    let (_, mut psi) = random_circuit(5, 3, 8);
    let before = psi.to_statevector().unwrap();
    let dims = psi.bond_dims();
    psi.apply_two_qubit(&ComplexMatrix::identity(4), 1).unwrap();
    assert_eq!(psi.bond_dims(), dims);
    assert!(max_diff(&before, &psi.to_statevector().unwrap()) <= 64.0 * f64::EPSILON);
    assert_eq!(psi.canonical_center(), Some(2));
}

#[test]
fn cz_entangles_plus_plus() {
    let mut psi = uniform_mps(2);
    psi.apply_two_qubit(&cz(), 0).unwrap();
    assert_eq!(psi.bond_dims(), vec![2]);
    let sv = psi.to_statevector().unwrap();
    for (a, e) in sv.amplitudes().iter().zip([0.5, 0.5, 0.5, -0.5]) {
        assert!((a.re - e).abs() < 1e-15 && a.im.abs() < 1e-15);
    }
}

#[test]
fn random_circuit_matches_dense() {
    let (sv, psi) = random_circuit(8, 6, 21);
    assert!(psi.max_bond_dim() <= 16);
    assert!(max_diff(&sv, &psi.to_statevector().unwrap()) < 1e-8);
    assert!(psi.cumulative_discarded_weight() < 1e-20);
}

#[test]
fn long_range_gate_via_swaps() {
    let mut rng = seeded(2);
    let (mut sv, mut psi) = random_circuit(6, 2, 13);
    for (a, b) in [(0, 4), (5, 1), (2, 3), (3, 2)] {
        let g = random_unitary::<f64, _>(4, &mut rng);
        sv.apply_two_qubit(&g, a, b).unwrap();
        psi.apply_two_qubit_any(&g, a, b).unwrap();
    }
    assert!(max_diff(&sv, &psi.to_statevector().unwrap()) < 1e-10);
}

#[test]
fn two_site_gate_argument_checks() {
    let mut psi = uniform_mps(3);
    assert!(psi.apply_two_qubit(&cz(), 2).is_err());
    assert!(matches!(
        psi.apply_two_qubit(&hadamard(), 0),
        Err(Error::InvalidGate(_))
    ));
    assert!(matches!(
        psi.apply_single_qubit(&cz(), 0),
        Err(Error::InvalidGate(_))
    ));
    assert!(psi.apply_single_qubit(&hadamard(), 3).is_err());
}

#[test]
fn forced_bond_one_discards_weight() {
    let mut psi = uniform_mps(2);
    let mut psi = MpsState::from_sites(psi.sites.drain(..).collect(), 1, 1e-12).unwrap();
    psi.apply_two_qubit(&cz(), 0).unwrap();
    assert_eq!(psi.bond_dims(), vec![1]);
    assert!((psi.cumulative_discarded_weight() - 0.5).abs() < 1e-12);
}

#[test]
fn phase_flip_mpo() {
    let mut psi = MpsState::<f64>::init_zero_default(3).unwrap();
    for q in 0..3 {
        psi.apply_single_qubit(&pauli_x(), q).unwrap();
    }
    let before = psi.to_statevector().unwrap();
    psi.apply_diagonal_mpo(&DiagonalMpo::phase_flip(&Bitstring::zeros(3)).unwrap())
        .unwrap();
    assert!(max_diff(&before, &psi.to_statevector().unwrap()) < 1e-15);

    let (_, mut psi) = random_circuit(6, 3, 5);
    let before = psi.to_statevector().unwrap();
    let m: Bitstring = "011010".parse().unwrap();
    let mpo = DiagonalMpo::phase_flip(&m).unwrap();
    psi.apply_diagonal_mpo(&mpo).unwrap();
    let flipped = psi.to_statevector().unwrap();
    let mut want = before.clone();
    want.apply_phase_flip(&m).unwrap();
    assert!(max_diff(&want, &flipped) < 1e-12);
    psi.apply_diagonal_mpo(&mpo).unwrap();
    assert!(max_diff(&before, &psi.to_statevector().unwrap()) < 1e-12);
    assert_eq!(psi.canonical_center(), Some(5));
    assert!(psi.is_canonical(1e-12));

    assert!(psi
        .apply_diagonal_mpo(&DiagonalMpo::phase_flip(&Bitstring::zeros(4)).unwrap())
        .is_err());
}

#[test]
fn grover_step_via_mpos_matches_dense() {
    let n = 10;
    let m: Bitstring = "1011001110".parse().unwrap();
    let mut psi = uniform_mps(n);
    let mut sv = StateVector::<f64>::init_zero(n).unwrap();
    for q in 0..n {
        sv.apply_single_qubit(&hadamard(), q).unwrap();
    }
    let spec = crate::grover::GroverSpec::new(n).with_marked(m.clone());
    for op in crate::grover::build_grover_layer::<f64>(&spec) {
        psi.apply(&op).unwrap();
        sv.apply(&op).unwrap();
    }
    let a = psi.amplitude_of(&m).unwrap();
    let b = sv.amplitude_of(&m).unwrap();
    assert!((a - b).norm() < 1e-10);
    assert!(psi.max_bond_dim() <= 2);
}

#[test]
fn amplitude_length_mismatch() {
    let psi = uniform_mps(3);
    assert!(matches!(
        psi.amplitude_of(&Bitstring::zeros(4)),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn canonicalize_preserves_state() {
    let (_, mut psi) = random_circuit(8, 5, 33);
    let before = psi.to_statevector().unwrap();
    let norm = psi.norm_sqr();
    for c in [0, 7, 3, 3, 5] {
        psi.canonicalize(c).unwrap();
        assert_eq!(psi.canonical_center(), Some(c));
        assert!(psi.is_canonical(64.0 * f64::EPSILON));
        assert!(max_diff(&before, &psi.to_statevector().unwrap()) < 1e-10);
        assert!((psi.norm_sqr() - norm).abs() < 1e-12);
    }

    let mut once = psi.clone();
    once.canonicalize(2).unwrap();
    let mut twice = once.clone();
    twice.canonicalize(2).unwrap();
    assert!(max_diff(&once.to_statevector().unwrap(), &twice.to_statevector().unwrap()) < 1e-14);

    let mut raw = random_mps(6, 3, 1);
    assert_eq!(raw.canonical_center(), None);
    let before = raw.to_statevector().unwrap();
    raw.canonicalize(4).unwrap();
    assert!(raw.is_canonical(1e-12));
    assert!(max_diff(&before, &raw.to_statevector().unwrap()) < 1e-12);
}

#[test]
fn dense_contraction() {
    let psi = MpsState::<f64>::init_zero_default(3).unwrap();
    let sv = psi.to_statevector().unwrap();
    let mut want = [Complex::zero(); 8];
    want[0] = Complex::one();
    assert_eq!(sv.amplitudes(), &want[..]);

    let sv = uniform_mps(2).to_statevector().unwrap();
    for a in sv.amplitudes() {
        assert!((a.re - 0.5).abs() < 1e-15);
    }

    let psi = MpsState::<f64>::init_zero_default(21).unwrap();
    assert!(matches!(
        psi.to_statevector(),
        Err(Error::CapacityExceeded { .. })
    ));
}

/// Right-to-left contraction, independent of `to_statevector`'s order.
fn contract_from_right(psi: &MpsState<f64>) -> Vec<Complex<f64>> {
    let n = psi.num_sites();
    // columns: suffix index, rows: open left bond
    let last = &psi.sites()[n - 1];
    let mut acc: Vec<Vec<Complex<f64>>> = (0..last.left_dim())
        .map(|l| (0..2).map(|p| last.get(l, p, 0)).collect())
        .collect();
    for site in psi.sites()[..n - 1].iter().rev() {
        let width = acc[0].len();
        let mut next = vec![vec![Complex::zero(); 2 * width]; site.left_dim()];
        for (l, row) in next.iter_mut().enumerate() {
            for p in 0..2 {
                for (r, suffix) in acc.iter().enumerate() {
                    let a = site.get(l, p, r);
                    for (s, x) in suffix.iter().enumerate() {
                        row[p * width + s] += a * x;
                    }
                }
            }
        }
        acc = next;
    }
    acc.remove(0)
}

#[test]
fn two_contraction_orders_agree() {
    let psi = random_mps(6, 4, 99);
    let left = psi.to_statevector().unwrap();
    let right = contract_from_right(&psi);
    let nl: f64 = left.amplitudes().iter().map(|z| z.norm_sqr()).sum();
    let nr: f64 = right.iter().map(|z| z.norm_sqr()).sum();
    assert!((nl - psi.norm_sqr()).abs() < 1e-10 * nl.max(1.0));
    assert!((nr - psi.norm_sqr()).abs() < 1e-10 * nr.max(1.0));
    for (a, b) in left.amplitudes().iter().zip(&right) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn from_sites_validation() {
    let s = |l, r| SiteTensor::<f64>::new(l, r, vec![Complex::zero(); l * 2 * r]).unwrap();
    assert!(MpsState::from_sites(vec![s(2, 1)], 4, 0.0).is_err());
    assert!(MpsState::from_sites(vec![s(1, 2), s(3, 1)], 4, 0.0).is_err());
    assert!(MpsState::from_sites(vec![s(1, 8), s(8, 1)], 4, 0.0).is_err());
    assert!(MpsState::from_sites(vec![s(1, 2), s(2, 1)], 4, 1.0).is_err());
    assert!(SiteTensor::<f64>::new(1, 1, vec![Complex::zero(); 3]).is_err());
}

#[test]
fn sampling_product_state() {
    let mut psi = MpsState::<f64>::init_zero_default(4).unwrap();
    psi.apply_single_qubit(&pauli_x(), 1).unwrap();
    psi.apply_single_qubit(&pauli_x(), 3).unwrap();
    let h = psi.sample(50, 3).unwrap();
    assert_eq!(h.count(&"0101".parse().unwrap()), 50);
    assert!(psi.sample(0, 3).is_err());
}

#[test]
fn sampling_uniform() {
    let sigma = (4096.0f64 * 0.125 * 0.875).sqrt();
    let h = uniform_mps(3).sample(4096, 77).unwrap();
    assert_eq!(h.total(), 4096);
    for i in 0..8 {
        let c = h.count(&Bitstring::from_index(3, i)) as f64;
        assert!((c - 512.0).abs() <= 4.0 * sigma);
    }
    assert_eq!(
        uniform_mps(3).sample(100, 5).unwrap(),
        uniform_mps(3).sample(100, 5).unwrap()
    );
}

#[test]
fn sampler_marginals_match_dense() {
    for n in 2..=8 {
        let (sv, psi) = random_circuit(n, 4, 100 + n as u64);
        let sampler = PerfectSampler::new(&psi).unwrap();
        let [p0, p1] = sampler.conditional(&[]).unwrap();
        let want = sv.marginal_one(0).unwrap();
        assert!((p1 - want).abs() < 1e-10, "n={n}");
        assert!((p0 + p1 - 1.0).abs() < 1e-14);
    }
}

#[test]
fn single_precision_mps_tracks_double() {
    let mut rng = seeded(8);
    let n = 6;
    let mut psi32 = MpsState::<f32>::init_zero_default(n).unwrap();
    let mut psi64 = MpsState::<f64>::init_zero_default(n).unwrap();
    for layer in 0..4 {
        for q in 0..n {
            let g = random_unitary::<f64, _>(2, &mut rng);
            psi64.apply_single_qubit(&g, q).unwrap();
            psi32.apply_single_qubit(&g.cast(), q).unwrap();
        }
        for q in (layer % 2..n - 1).step_by(2) {
            let g = random_unitary::<f64, _>(4, &mut rng);
            psi64.apply_two_qubit(&g, q).unwrap();
            psi32.apply_two_qubit(&g.cast(), q).unwrap();
        }
    }
    let a = psi64.to_statevector().unwrap();
    let b = psi32.to_statevector().unwrap();
    for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
        assert!((x.re - y.re as f64).abs() < 1e-5 && (x.im - y.im as f64).abs() < 1e-5);
    }
}
