//! Closed-form predictions for a wave packet scattering at resonance.
//!
//! A Gaussian packet with mean wave vector pinned to a transmission
//! resonance `k0` reflects only through the curvature of `rho(k)` around
//! its zero. Expanding the reflection amplitude to first order,
//! `rho(k) ~ rho'(k0) (k - k0)`, turns the reflected momentum distribution
//! into a Hermite-weighted Gaussian, and the reflected real-space density
//! into a two-lobed profile with an exact node at its ballistic centroid:
//!
//! ```text
//! |psi_R(x, t)|^2 = |rho'(k0)|^2 / sqrt(2 pi) * y^2 exp(-y^2)
//!                   / (2 alpha^2 sqrt(alpha^2 (1 + u^2)))
//! ```
//!
//! with `u = E''(k0) t / (2 alpha^2)` and
//! `y = (x - origin - E'(k0) t) / sqrt(2 alpha^2 (1 + u^2))`, all evaluated
//! at the *reflected* mean wave vector (see [`SplitGaussianParams`]). Its
//! integral over `x` is exactly `|rho'(k0)|^2 / (4 alpha^2)`, the total
//! reflected probability to this order.
//!
//! [`rho_derivative`] supplies `|rho'(k0)|^2` from the exact transfer-matrix
//! amplitudes; [`reflection_near_resonance`] gives the small-`(k - k0)`
//! reflection probability used for momentum-space convolutions.

use num_complex::Complex;

use crate::planewave::{amplitudes, reflection_factor, BarrierSpec, DispersionParams};
use crate::{Error, Float, Result};

/// Default step (units `1/a`) for the numerical derivative of `rho`.
pub const RHO_DERIVATIVE_STEP: f64 = 1e-6;

/// Width (units `1/a`) of the five-point curvature stencil inside
/// [`resonant_reflection_delay`]. Second differences halve the working
/// precision, so this is much wider than [`RHO_DERIVATIVE_STEP`]; the
/// fourth-order stencil keeps truncation below 1e-7 even for the widest
/// arrays, whose reflectance phase winds fastest in `k`.
pub const CURVATURE_STEP: f64 = 3e-5;

/// A configuration counts as resonant when `|rho(k0)|` is below this.
pub const RESONANCE_TOL: f64 = 1e-8;

/// `f(k) = v_k U_{N-1}(h_k)`: the real factor the reflection runs through,
/// `R = f^2 / (1 + f^2)`. Near a resonance `|rho'(k0)| = |f'(k0)|`, which
/// pins the expansions below to the transfer matrices.
pub fn f_of_k<T: Float>(
    k: T,
    barrier: &BarrierSpec,
    params: &DispersionParams<T>,
) -> Result<T> {
    reflection_factor(k, barrier, params)
}

/// `d rho / dk` at `k0` by a Richardson-extrapolated central difference
/// over the exact amplitudes.
///
/// `k0` must be resonant (`|rho(k0)| <= 1e-8`), otherwise the derivative is
/// not the quantity the expansion needs and [`Error::NotResonant`] is
/// returned. `|result|^2` is stable to 1e-6 under halving `step`; the
/// default [`RHO_DERIVATIVE_STEP`] balances rounding against curvature for
/// every barrier this crate targets.
pub fn rho_derivative<T: Float>(
    k0: T,
    barrier: &BarrierSpec,
    params: &DispersionParams<T>,
    step: T,
) -> Result<Complex<T>> {
    if !(step > T::zero()) {
        return Err(Error::InvalidConfig("derivative step must be positive".into()));
    }
    let on_resonance = amplitudes(k0, barrier, params)?.rho.norm();
    if on_resonance > T::cast(RESONANCE_TOL) {
        return Err(Error::NotResonant(on_resonance.as_f64()));
    }
    let diff = |d: T| -> Result<Complex<T>> {
        let hi = amplitudes(k0 + d, barrier, params)?.rho;
        let lo = amplitudes(k0 - d, barrier, params)?.rho;
        Ok((hi - lo) / Complex::new(d + d, T::zero()))
    };
    let half = step / (T::one() + T::one());
    let coarse = diff(step)?;
    let fine = diff(half)?;
    let four = T::cast(4.0);
    let three = T::cast(3.0);
    Ok((fine * four - coarse) / three)
}

/// Spatial delay of a resonantly reflected packet, in units of `a`.
///
/// Writing `rho(k) = rho'(k0) (k - k0) exp[gamma (k - k0)] + O((k - k0)^3)`
/// around a resonant `k0`, the imaginary part of `gamma = rho''/(2 rho')`
/// is the slope of the reflectance phase, and by stationary phase it
/// displaces the reflected packet: the bounce acts like a mirror sitting
/// `delay / 2` beyond the first impurity. [`amplitudes`] anchors the first
/// impurity at `x = a`, so its frame contributes exactly `2a` to the slope;
/// that term is subtracted here and what remains is a property of the
/// barrier alone. For the band-center resonances at `V = t0` the value
/// comes out an exact multiple of the spacing — `3ma` for `N = 3`, `7ma`
/// for `N = 6` — and `a` for the dimer at its resonance; an independent
/// lattice scattering solution reproduces these to 1e-6.
pub fn resonant_reflection_delay<T: Float>(
    k0: T,
    barrier: &BarrierSpec,
    params: &DispersionParams<T>,
    step: T,
) -> Result<T> {
    let rho_prime = rho_derivative(k0, barrier, params, step)?;
    let h = T::cast(CURVATURE_STEP) / params.a;
    let r = |d: T| -> Result<Complex<T>> { Ok(amplitudes(k0 + d, barrier, params)?.rho) };
    let (m2, m1, c, p1, p2) = (r(-(h + h))?, r(-h)?, r(T::zero())?, r(h)?, r(h + h)?);
    let sixteen = T::cast(16.0);
    let thirty = T::cast(30.0);
    let rho_second = (-m2 + m1 * sixteen - c * thirty + p1 * sixteen - p2)
        / Complex::new(T::cast(12.0) * h * h, T::zero());
    let two = T::one() + T::one();
    let gamma = rho_second / (rho_prime * two);
    Ok(gamma.im - two * params.a)
}

/// Which truncation of the near-resonance reflection expansion to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionOrder {
    /// `R ~ |rho'|^2 (k - k0)^2`
    First,
    /// First order times the linear bracket correction; available for the
    /// dimer, identical to `First` elsewhere.
    Second,
}

/// Taylor data of the reflection probability around a resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantExpansion<T: Float> {
    /// The resonant wave vector the expansion is anchored to.
    pub k0: T,
    /// `|d rho / dk|^2` at `k0`, units `a^2`.
    pub rho_prime_abs2: T,
    /// Coefficient `c` in `R ~ |rho'|^2 (k-k0)^2 (1 + c (k-k0))`. Carried
    /// only for the dimer (`N = 2`, `m = 1`), where `c = -a cot(k0 a)`;
    /// zero for every other barrier, making order 2 fall back to order 1.
    pub second_order_coeff: T,
}

impl<T: Float> ResonantExpansion<T> {
    /// Builds the expansion from the exact amplitudes of `barrier` at the
    /// resonant `k0`.
    pub fn for_barrier(
        k0: T,
        barrier: &BarrierSpec,
        params: &DispersionParams<T>,
    ) -> Result<Self> {
        let step = T::cast(RHO_DERIVATIVE_STEP) / params.a;
        let rho_prime = rho_derivative(k0, barrier, params, step)?;
        let second_order_coeff = if barrier.n_impurities == 2 && barrier.spacing == 1 {
            let ka = k0 * params.a;
            -params.a * ka.cos() / ka.sin()
        } else {
            T::zero()
        };
        Ok(Self { k0, rho_prime_abs2: rho_prime.norm_sqr(), second_order_coeff })
    }
}

/// Near-resonance reflection probability at `k`, to the requested order.
pub fn reflection_near_resonance<T: Float>(
    k: T,
    expansion: &ResonantExpansion<T>,
    order: ExpansionOrder,
) -> T {
    let dk = k - expansion.k0;
    let leading = expansion.rho_prime_abs2 * dk * dk;
    match order {
        ExpansionOrder::First => leading,
        ExpansionOrder::Second => leading * (T::one() + expansion.second_order_coeff * dk),
    }
}

/// Parameters of the reflected two-lobed profile.
///
/// Everything refers to the *reflected* component of a packet that came in
/// from the left with mean wave vector `+|k0|`: [`Self::for_reflection`]
/// stores `k0 < 0`, so `e_prime = 2 t0 a sin(k0 a)` is negative and the
/// centroid `origin + e_prime t` marches left. `origin` is the mirror image
/// of the packet launch point in the apparent mirror plane
/// `x_barrier + delay / 2`, i.e. `2 x_barrier + delay - x0`: the bounce off
/// a resonant multi-impurity array emerges as if reflected `delay / 2`
/// beyond the barrier face (see [`resonant_reflection_delay`]), and the
/// ballistic centroid passes `origin` at `t = 0` extrapolated backwards
/// through the bounce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitGaussianParams<T: Float> {
    pub alpha: T,
    pub k0: T,
    pub e_prime: T,
    pub e_double_prime: T,
    pub rho_prime_abs2: T,
    pub origin: T,
}

impl<T: Float> SplitGaussianParams<T> {
    /// Reflected-profile parameters for a packet launched at `x0` toward a
    /// barrier whose first impurity sits at `x_barrier` (both in units of
    /// `a`), with incident mean wave vector `k0_incident > 0`. `delay` is
    /// the reflectance phase slope from [`resonant_reflection_delay`]; pass
    /// `0` for a bare mirror.
    pub fn for_reflection(
        k0_incident: T,
        alpha: T,
        x0: T,
        x_barrier: T,
        delay: T,
        rho_prime_abs2: T,
        params: &DispersionParams<T>,
    ) -> Self {
        let k0 = -k0_incident;
        Self {
            alpha,
            k0,
            e_prime: params.group_velocity(k0),
            e_double_prime: params.curvature(k0),
            rho_prime_abs2,
            origin: x_barrier + x_barrier + delay - x0,
        }
    }

    /// Dimensionless spreading parameter `u(t) = E'' t / (2 alpha^2)`;
    /// exactly zero at band center (`|k0| a = pi/2`) where the dispersion
    /// has no curvature.
    pub fn u(&self, t: T) -> T {
        let two = T::one() + T::one();
        self.e_double_prime * t / (two * self.alpha * self.alpha)
    }

    /// Ballistic centroid `origin + e_prime t`, where the profile's node
    /// sits at all times.
    pub fn centroid(&self, t: T) -> T {
        self.origin + self.e_prime * t
    }

    /// Lobe scale `sqrt(2 alpha^2 (1 + u^2))`; the two density maxima sit
    /// at `centroid +- width_scale`.
    pub fn width_scale(&self, t: T) -> T {
        let two = T::one() + T::one();
        let u = self.u(t);
        (two * self.alpha * self.alpha * (T::one() + u * u)).sqrt()
    }

    /// Exact integral of the profile over all `x`:
    /// `|rho'|^2 / (4 alpha^2)`, the total reflected probability.
    pub fn total_reflected_probability(&self) -> T {
        self.rho_prime_abs2 / (T::cast(4.0) * self.alpha * self.alpha)
    }
}

/// Reflected density `|psi_R(x, t)|^2` of the split-Gaussian profile.
pub fn split_gaussian_density<T: Float>(x: T, t: T, p: &SplitGaussianParams<T>) -> T {
    let two = T::one() + T::one();
    let u = p.u(t);
    let one_pu2 = T::one() + u * u;
    let y = (x - p.centroid(t)) / (two * p.alpha * p.alpha * one_pu2).sqrt();
    let norm = two * p.alpha * p.alpha * (p.alpha * p.alpha * one_pu2).sqrt();
    p.rho_prime_abs2 / (two * T::PI()).sqrt() * y * y * (-y * y).exp() / norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planewave::transmission;
    use std::f64::consts::{FRAC_PI_2, PI};

    const P: DispersionParams<f64> = DispersionParams { t0: 1.0, a: 1.0 };

    fn dimer() -> BarrierSpec {
        BarrierSpec::new(2, 1, 1.0)
    }

    fn k_res() -> f64 {
        2.0 * PI / 3.0
    }

    #[test]
    fn f_matches_the_dimer_closed_form() {
        let b = dimer();
        for i in 1..40 {
            let ka = 0.024 * PI * i as f64;
            let f = f_of_k(ka, &b, &P).unwrap();
            let reference = (ka.cos() + 0.5) / ka.sin();
            assert!((f - reference).abs() < 1e-13, "f mismatch at ka = {ka}");
        }
        assert!(f_of_k(k_res(), &b, &P).unwrap().abs() < 1e-15);
    }

    #[test]
    fn dimer_rho_slope_is_the_reduced_strength() {
        // |rho'(k0)| = a V/t0 at the dimer resonance
        let d = rho_derivative(k_res(), &dimer(), &P, RHO_DERIVATIVE_STEP).unwrap();
        assert!((d.norm_sqr() - 1.0).abs() < 1e-6, "|rho'|^2 = {}", d.norm_sqr());
        // stable under halving the step
        let d2 = rho_derivative(k_res(), &dimer(), &P, RHO_DERIVATIVE_STEP / 2.0).unwrap();
        assert!((d.norm_sqr() - d2.norm_sqr()).abs() < 1e-6);
    }

    #[test]
    fn off_resonance_derivative_is_refused() {
        let err = rho_derivative(FRAC_PI_2, &dimer(), &P, RHO_DERIVATIVE_STEP).unwrap_err();
        assert!(matches!(err, Error::NotResonant(_)));
    }

    #[test]
    fn expansion_reproduces_the_quoted_orders() {
        let e = ResonantExpansion::for_barrier(k_res(), &dimer(), &P).unwrap();
        // c = -cot(2 pi / 3) = +1/sqrt(3)
        assert!((e.second_order_coeff - 1.0 / 3.0_f64.sqrt()).abs() < 1e-12);
        let k = k_res() + 0.05;
        let r1 = reflection_near_resonance(k, &e, ExpansionOrder::First);
        let r2 = reflection_near_resonance(k, &e, ExpansionOrder::Second);
        assert!((r1 - 0.0025).abs() < 2e-9);
        assert!((r2 - 0.0025 * (1.0 + 0.05 / 3.0_f64.sqrt())).abs() < 2e-9);
        // both orders track the exact R nearby; order 2 tracks it better
        let exact = 1.0 - transmission(k, &dimer(), &P).unwrap();
        assert!((r2 - exact).abs() < (r1 - exact).abs());
    }

    #[test]
    fn non_dimer_order_two_falls_back_to_order_one() {
        let b = BarrierSpec::new(3, 1, 1.0);
        let e = ResonantExpansion::for_barrier(FRAC_PI_2, &b, &P).unwrap();
        assert_eq!(e.second_order_coeff, 0.0);
        let k = FRAC_PI_2 + 0.03;
        assert_eq!(
            reflection_near_resonance(k, &e, ExpansionOrder::First),
            reflection_near_resonance(k, &e, ExpansionOrder::Second)
        );
    }

    #[test]
    fn delay_matches_the_frozen_references() {
        // values from an independent lattice scattering solution (exact
        // back-propagation of the eigenstate recursion), stable to 1e-6
        for (n, m, k0, expect) in [
            (3u32, 1u32, FRAC_PI_2, 3.0),
            (3, 9, FRAC_PI_2, 27.0),
            (6, 1, FRAC_PI_2, 7.0),
            (6, 9, FRAC_PI_2, 63.0),
            (2, 1, 2.0 * PI / 3.0, 1.0),
        ] {
            let b = BarrierSpec::new(n, m, 1.0);
            let d = resonant_reflection_delay(k0, &b, &P, RHO_DERIVATIVE_STEP).unwrap();
            assert!((d - expect).abs() < 1e-5, "delay {d} vs {expect} for N{n} m{m}");
        }
    }

    #[test]
    fn off_resonance_delay_is_refused() {
        let err = resonant_reflection_delay(FRAC_PI_2, &dimer(), &P, RHO_DERIVATIVE_STEP);
        assert!(matches!(err.unwrap_err(), Error::NotResonant(_)));
    }

    fn reflected_profile() -> SplitGaussianParams<f64> {
        // alpha = 50a packet from x0 = 600a onto a three-impurity barrier
        // (face at 1500a, delay 3a, |rho'|^2 = 4)
        SplitGaussianParams::for_reflection(FRAC_PI_2, 50.0, 600.0, 1500.0, 3.0, 4.0, &P)
    }

    #[test]
    fn profile_geometry_and_node() {
        let p = reflected_profile();
        assert_eq!(p.origin, 2403.0);
        assert!(p.e_prime < 0.0, "reflected packet must move left");
        // at t = 1000 the centroid is back at 403a and the node sits on it
        let t = 1000.0;
        assert!((p.centroid(t) - 403.0).abs() < 1e-9);
        assert_eq!(split_gaussian_density(p.centroid(t), t, &p), 0.0);
        // two maxima at centroid +- sqrt(2) alpha (no spreading at band center)
        assert!(p.u(t).abs() < 1e-12);
        let w = p.width_scale(t);
        assert!((w - 50.0 * 2.0_f64.sqrt()).abs() < 1e-9);
        for sign in [-1.0, 1.0] {
            let peak = p.centroid(t) + sign * w;
            let d0 = split_gaussian_density(peak, t, &p);
            assert!(d0 > split_gaussian_density(peak + 0.5, t, &p));
            assert!(d0 > split_gaussian_density(peak - 0.5, t, &p));
        }
    }

    #[test]
    fn profile_integrates_to_the_reflected_probability() {
        for (k0, t) in [(FRAC_PI_2, 0.0), (FRAC_PI_2, 900.0), (2.0 * PI / 3.0, 750.0)] {
            let p = SplitGaussianParams::for_reflection(k0, 50.0, 600.0, 1500.0, 3.0, 4.0, &P);
            // Simpson over +-12 lobe widths around the centroid
            let (lo, n) = (p.centroid(t) - 12.0 * p.width_scale(t), 48_000usize);
            let h = 24.0 * p.width_scale(t) / n as f64;
            let mut sum = split_gaussian_density(lo, t, &p)
                + split_gaussian_density(lo + n as f64 * h, t, &p);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                sum += w * split_gaussian_density(lo + i as f64 * h, t, &p);
            }
            let integral = sum * h / 3.0;
            let exact = p.total_reflected_probability();
            assert!(
                (integral - exact).abs() < 1e-10 * exact.max(1.0),
                "quadrature {integral} vs closed form {exact} at k0 = {k0}, t = {t}"
            );
        }
    }

    #[test]
    fn band_center_profile_does_not_spread() {
        let p = reflected_profile();
        let d0 = split_gaussian_density(p.centroid(0.0) + 37.0, 0.0, &p);
        let d1 = split_gaussian_density(p.centroid(1000.0) + 37.0, 1000.0, &p);
        assert!((d0 - d1).abs() < 1e-15);
    }
}
