//! Wave-packet scattering against plane-wave theory: in the broad-packet
//! limit the numerics must reproduce the closed-form transmission, mode by
//! mode and in aggregate. These are the cross-engine checks; neither side
//! knows how the other computes.

use std::sync::LazyLock;

use lattice_scatter::evolve::{
    check_boundary_clear, energy_expectation, evolve_to, initial_packet, split_probabilities,
    EigenSystem, GaussianPacketSpec, LatticeConfig, WaveFunction,
};
use lattice_scatter::planewave::transmission;
use lattice_scatter::{BarrierSpec, DispersionParams};

use ndarray::Array2;

const PI: f64 = std::f64::consts::PI;
const P: DispersionParams<f64> = DispersionParams { t0: 1.0, a: 1.0 };

/// One lattice big enough for the widest packets: 4200 sites, dimer barrier
/// at midpoint. Diagonalized once and shared across tests.
struct System {
    lattice: LatticeConfig,
    hamiltonian: Array2<f64>,
    eig: EigenSystem,
}

static DIMER_4200: LazyLock<System> = LazyLock::new(|| {
    let lattice = LatticeConfig {
        n_sites: 4200,
        t0: 1.0,
        barrier: Some(BarrierSpec {
            n_impurities: 2,
            spacing: 1,
            strength: 1.0,
            start_site: 2100,
        }),
    };
    let hamiltonian = lattice_scatter::evolve::build_hamiltonian(&lattice).unwrap();
    let eig = EigenSystem::new(&hamiltonian).unwrap();
    System { lattice, hamiltonian, eig }
});

fn scatter(alpha: f64, k0: f64, t: f64) -> WaveFunction {
    let sys = &*DIMER_4200;
    let spec = GaussianPacketSpec { x0: 1100.0, k0, alpha };
    let psi0 = initial_packet(&spec, &sys.lattice).unwrap();
    let psi = evolve_to(&sys.eig, &psi0, t);
    check_boundary_clear(&psi).unwrap();
    psi
}

/// Transmitted fraction of a Gaussian packet vs the closed-form average
/// `int |phi(k)|^2 T(k) dk` over its momentum content. Exact in the broad-
/// packet limit; already sub-percent at `alpha = 25a`.
#[test]
fn transmitted_fraction_approaches_the_mode_average() {
    let sys = &*DIMER_4200;
    let barrier = sys.lattice.barrier.unwrap();
    let k0 = 0.5 * PI; // T(k0) = 0.8, comfortably between the extremes
    for alpha in [25.0, 50.0, 100.0, 200.0] {
        let psi = scatter(alpha, k0, 1000.0);
        let (_, p_mid, p_right) = split_probabilities(&psi, &barrier);
        assert!(p_mid < 1e-6, "alpha = {alpha}: scattering unfinished, p_mid = {p_mid}");

        // Gaussian momentum density: variance 1/(4 alpha^2)
        let weight = |k: f64| {
            (2.0 * alpha * alpha / PI).sqrt() * (-2.0 * alpha * alpha * (k - k0) * (k - k0)).exp()
        };
        let sigma_k = 0.5 / alpha;
        let (lo, hi) = (k0 - 10.0 * sigma_k, k0 + 10.0 * sigma_k);
        let n = 4000;
        let h = (hi - lo) / n as f64;
        let mut expect = 0.0;
        for i in 0..=n {
            let k = lo + i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            expect += w * weight(k) * transmission(k, &barrier, &P).unwrap();
        }
        expect *= h / 3.0;

        let rel = (p_right - expect).abs() / expect;
        assert!(
            rel < 0.02,
            "alpha = {alpha}: p_right = {p_right:.6} vs mode average {expect:.6} (rel {rel:.2e})"
        );
    }
}

/// Mean wave-vector magnitude of a region of the lattice, from the Fourier
/// power restricted to `k` in `(k_lo, k_hi)` (radians, signed).
fn mean_k_in_window(psi: &WaveFunction, sites: std::ops::Range<usize>, k_lo: f64, k_hi: f64) -> f64 {
    let n_k = 3000;
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..=n_k {
        let k = k_lo + (k_hi - k_lo) * j as f64 / n_k as f64;
        let mut amp = lattice_scatter::C64::new(0.0, 0.0);
        for l in sites.clone() {
            let x = l as f64 + 1.0;
            amp += psi.amplitudes[l] * lattice_scatter::C64::from_polar(1.0, -k * x);
        }
        let p = amp.norm_sqr();
        num += p * k.abs();
        den += p;
    }
    num / den
}

/// Scattering off a static barrier is elastic: both outgoing packets carry
/// the incident `|k0|` to within the packet's own momentum width.
#[test]
fn reflected_and_transmitted_packets_keep_the_incident_wave_vector() {
    let sys = &*DIMER_4200;
    let barrier = sys.lattice.barrier.unwrap();
    let alpha = 50.0;
    let k0 = 0.5 * PI;
    let psi = scatter(alpha, k0, 1000.0);
    let (p_left, _, p_right) = split_probabilities(&psi, &barrier);
    assert!(p_left > 0.1 && p_right > 0.5, "expected a genuine split, got {p_left}/{p_right}");

    let left_region = 0..(barrier.start_site as usize - 1);
    let right_region = barrier.end_site() as usize..sys.lattice.n_sites;
    let k_reflected = mean_k_in_window(&psi, left_region, -0.9 * PI, -0.1 * PI);
    let k_transmitted = mean_k_in_window(&psi, right_region, 0.1 * PI, 0.9 * PI);

    let tol = 1.0 / alpha;
    assert!(
        (k_reflected - k0).abs() < tol,
        "reflected mean |k| = {k_reflected} vs k0 = {k0}"
    );
    assert!(
        (k_transmitted - k0).abs() < tol,
        "transmitted mean |k| = {k_transmitted} vs k0 = {k0}"
    );
}

/// The Hamiltonian expectation is a constant of motion through the whole
/// scattering event.
#[test]
fn energy_is_conserved_through_the_collision() {
    let sys = &*DIMER_4200;
    let spec = GaussianPacketSpec { x0: 1100.0, k0: 0.5 * PI, alpha: 50.0 };
    let psi0 = initial_packet(&spec, &sys.lattice).unwrap();
    let e0 = energy_expectation(&sys.hamiltonian, &psi0);
    for t in [300.0, 1000.0] {
        let psi = evolve_to(&sys.eig, &psi0, t);
        let e = energy_expectation(&sys.hamiltonian, &psi);
        assert!(
            (e - e0).abs() <= 1e-8 * e0.abs().max(1.0),
            "t = {t}: energy drifted {e0} -> {e}"
        );
        assert!((psi.norm() - 1.0).abs() < 1e-10);
    }
}
