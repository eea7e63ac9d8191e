//! Cross-checks between the Chebyshev closed forms and the brute-force
//! transfer-matrix product, plus the frozen reference values the
//! near-resonance expansion must reproduce.

use proptest::prelude::*;

use lattice_scatter::analytic::{f_of_k, rho_derivative, RHO_DERIVATIVE_STEP};
use lattice_scatter::chebyshev::cheb_u;
use lattice_scatter::planewave::{amplitudes, barrier_matrix, reflection, transmission};
use lattice_scatter::resonance::resonant_strength;
use lattice_scatter::{BarrierSpec, DispersionParams};

const P: DispersionParams<f64> = DispersionParams { t0: 1.0, a: 1.0 };
const PI: f64 = std::f64::consts::PI;

fn arb_barrier() -> impl Strategy<Value = BarrierSpec> {
    (1u32..=40, 1u32..=12, -5.0f64..5.0)
        .prop_map(|(n, m, v)| BarrierSpec::new(n, m, v))
}

fn arb_k() -> impl Strategy<Value = f64> {
    (0.05f64..0.95).prop_map(|x| x * PI)
}

proptest! {
    /// The closed form `T = 1/(1 + f^2)` and the explicit matrix product
    /// are independent evaluations of the same barrier; they must agree to
    /// near machine precision wherever the product is representable.
    #[test]
    fn closed_form_matches_brute_force_product(barrier in arb_barrier(), k in arb_k()) {
        let m = barrier_matrix(k, &barrier, &P).unwrap();
        prop_assume!(m.m22.norm_sqr().is_finite());

        let t_closed = transmission(k, &barrier, &P).unwrap();
        let t_brute = 1.0 / m.m22.norm_sqr();
        if t_closed < 1e-250 {
            prop_assert!(t_brute < 1e-250);
        } else {
            let rel = (t_closed - t_brute).abs() / t_closed.max(t_brute);
            prop_assert!(rel < 1e-9, "T mismatch: closed {t_closed:.15e} vs brute {t_brute:.15e}");
        }

        let r = reflection(k, &barrier, &P).unwrap();
        prop_assert!((r + t_closed - 1.0).abs() < 1e-12);
    }

    /// Real on-site potentials conserve current: `det M = 1` and the matrix
    /// has the time-reversal block structure `m22 = conj(m11)`,
    /// `m21 = conj(m12)`. The probabilities it yields sum to one.
    #[test]
    fn transfer_matrices_are_unimodular_and_time_reversal_symmetric(
        barrier in arb_barrier(),
        k in arb_k(),
    ) {
        let m = barrier_matrix(k, &barrier, &P).unwrap();
        prop_assume!(m.m22.norm_sqr().is_finite());
        // det cancels |M|^2-sized terms and the block structure |M|-sized
        // ones; normalize each defect by what it cancels
        let scale = m.m22.norm().max(1.0);
        prop_assert!(m.unimodularity_defect() / (scale * scale) < 1e-10);
        prop_assert!(m.time_reversal_defect() / scale < 1e-10);

        let a = amplitudes(k, &barrier, &P).unwrap();
        let total = a.reflection_probability() + a.transmission_probability();
        prop_assert!((total - 1.0).abs() < 1e-9, "|rho|^2 + |tau|^2 = {total}");
    }

    /// The product's off-diagonal carries the same reflection factor the
    /// closed form computes: `|m12| = |v_k U_{N-1}(h_k)|`.
    #[test]
    fn off_diagonal_modulus_is_the_reflection_factor(barrier in arb_barrier(), k in arb_k()) {
        let m = barrier_matrix(k, &barrier, &P).unwrap();
        prop_assume!(m.m22.norm_sqr().is_finite());
        let f = f_of_k(k, &barrier, &P).unwrap().abs();
        let diff = (m.m12.norm() - f).abs();
        prop_assert!(diff <= 1e-9 * f.max(1.0), "|m12| = {} vs |f| = {f}", m.m12.norm());
    }

    /// Solving the resonance condition for the strength and feeding it back
    /// must give unit transmission: the design formula and the scattering
    /// formula are inverses.
    #[test]
    fn designed_strength_makes_the_barrier_transparent(
        n in 2u32..=12,
        m in 1u32..=6,
        root_index in 1u32..=11,
        k in 0.1f64..0.9,
    ) {
        prop_assume!(root_index <= n - 1);
        let k = k * PI;
        let v = match resonant_strength(k, n, m, root_index, &P) {
            Ok(v) => v,
            Err(_) => return Ok(()), // degenerate spacing at this k
        };
        prop_assume!(v.abs() <= 50.0);
        let barrier = BarrierSpec::new(n, m, v);
        let t = transmission(k, &barrier, &P).unwrap();
        prop_assert!((1.0 - t).abs() < 1e-10, "T = {t} for N={n}, m={m}, V={v}");
    }
}

/// Single impurity: `T = sin^2(ka) / (sin^2(ka) + V^2/4)`, written out
/// without any shared helper.
#[test]
fn single_impurity_transmission_matches_the_textbook_form() {
    for v in [0.3, 1.0, -2.5, 4.0] {
        let barrier = BarrierSpec::new(1, 1, v);
        for ka in [0.2, 0.5 * PI, 2.0, 0.9 * PI] {
            let s2 = ka.sin().powi(2);
            let expect = s2 / (s2 + 0.25 * v * v);
            let got = transmission(ka, &barrier, &P).unwrap();
            assert!((got - expect).abs() < 1e-13, "V={v}, ka={ka}: {got} vs {expect}");
        }
    }
}

/// Dimer: `f = v_k * 2 h_k` gives `|rho| = |f| / sqrt(1 + f^2)`, again from
/// scratch.
#[test]
fn dimer_reflection_modulus_matches_the_explicit_form() {
    let barrier = BarrierSpec::new(2, 1, 1.0);
    for ka in [0.3, 1.0, 0.5 * PI, 2.0 * PI / 3.0, 2.8] {
        let v = 1.0 / (2.0 * ka.sin());
        let h = ka.cos() + v * ka.sin();
        let f = v * 2.0 * h;
        let expect = f.abs() / (1.0 + f * f).sqrt();
        let got = amplitudes(ka, &barrier, &P).unwrap().rho.norm();
        assert!((got - expect).abs() < 1e-12, "ka={ka}: {got} vs {expect}");
    }
}

/// Band-center transparency needs the impurity count divisible by 3 at
/// odd spacing: `U_{N-1}(1/2) = 0` only then. Guards the resonance tables
/// against off-by-one regressions in the Chebyshev order.
#[test]
fn band_center_resonance_needs_n_divisible_by_three()
{
    for half in [0.5f64, -0.5] {
        assert!(cheb_u(2, half).abs() < 1e-15); // N = 3
        assert!(cheb_u(5, half).abs() < 1e-15); // N = 6
        assert!(cheb_u(3, half).abs() > 0.5, "N = 4 must not resonate at band center");
        assert!(cheb_u(4, half).abs() > 0.5, "N = 5 must not resonate at band center");
    }
    // and through the full stack: V = t0 at ka = pi/2
    for (n, resonant) in [(3u32, true), (4, false), (5, false), (6, true)] {
        let t = transmission(0.5 * PI, &BarrierSpec::new(n, 1, 1.0), &P).unwrap();
        assert_eq!((1.0 - t).abs() < 1e-12, resonant, "N = {n}: T = {t}");
    }
}

/// `rho(k)` and `f(k)` describe the same pole: at a resonance
/// `|rho'| = |f'|`, evaluated here by independent differencing.
#[test]
fn rho_slope_equals_f_slope_at_resonance() {
    let cases = [
        (BarrierSpec::new(2, 1, 1.0), 2.0 * PI / 3.0),
        (BarrierSpec::new(3, 1, 1.0), 0.5 * PI),
        (BarrierSpec::new(6, 9, 1.0), 0.5 * PI),
    ];
    for (barrier, k0) in cases {
        let rho_slope = rho_derivative(k0, &barrier, &P, RHO_DERIVATIVE_STEP).unwrap().norm();
        let d = 1e-6;
        let coarse = (f_of_k(k0 + d, &barrier, &P).unwrap()
            - f_of_k(k0 - d, &barrier, &P).unwrap())
            / (2.0 * d);
        let fine = (f_of_k(k0 + d / 2.0, &barrier, &P).unwrap()
            - f_of_k(k0 - d / 2.0, &barrier, &P).unwrap())
            / d;
        let f_slope = ((4.0 * fine - coarse) / 3.0).abs();
        let rel = (rho_slope - f_slope).abs() / f_slope;
        assert!(rel < 1e-6, "N={}, m={}: |rho'| = {rho_slope} vs |f'| = {f_slope}",
            barrier.n_impurities, barrier.spacing);
    }
}

/// Frozen slope oracles at unit strength: `|rho'|^2 = (m V a / t0)^2` for
/// the dimer at its `2 pi / 3` resonance and `(2 m)^2` / `(4 m)^2` for
/// three and six impurities at band center.
#[test]
fn resonant_slopes_match_the_frozen_references() {
    let cases = [
        (BarrierSpec::new(2, 1, 1.0), 2.0 * PI / 3.0, 1.0),
        (BarrierSpec::new(3, 1, 1.0), 0.5 * PI, 4.0),
        (BarrierSpec::new(3, 9, 1.0), 0.5 * PI, 324.0),
        (BarrierSpec::new(6, 1, 1.0), 0.5 * PI, 16.0),
        (BarrierSpec::new(6, 9, 1.0), 0.5 * PI, 1296.0),
    ];
    for (barrier, k0, expect) in cases {
        let got = rho_derivative(k0, &barrier, &P, RHO_DERIVATIVE_STEP).unwrap().norm_sqr();
        let rel = (got - expect).abs() / expect;
        assert!(rel < 1e-5, "N={}, m={}: |rho'|^2 = {got} vs {expect}",
            barrier.n_impurities, barrier.spacing);
    }
}
