//! Unit-transmission wave vectors of a periodic barrier.
//!
//! `R(k) = f^2/(1+f^2)` with `f = v_k U_{N-1}(h_k)` vanishes exactly where
//! `U_{N-1}(h_k(k)) = 0`, i.e. where the Chebyshev argument crosses one of
//! the `N - 1` roots of `U_{N-1}`. This module finds those crossings by a
//! sign-change scan plus bisection ([`find_resonant_wavevectors`]) and
//! solves the inverse problem of tuning the impurity strength so that a
//! chosen wave vector becomes resonant ([`resonant_strength`]).

use crate::chebyshev::{cheb_u, cheb_u_roots};
use crate::planewave::{closed_form_inputs, transmission, BarrierSpec, DispersionParams};
use crate::{Error, Float, Result};

/// Default sign-change scan resolution.
pub const DEFAULT_GRID_POINTS: usize = 4096;

/// Scan window in `ka/pi`; the excluded 1% margins keep the search away
/// from the band edges where `v_k` diverges.
pub const SEARCH_WINDOW: (f64, f64) = (0.01, 0.99);

/// Two roots closer than this (in `ka`) are treated as one.
const MIN_SEPARATION: f64 = 1e-6;

/// Wave vectors with `T(k) = 1`, ascending, with their `|1 - T|` residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceSet<T: Float> {
    pub barrier: BarrierSpec,
    pub wavevectors: Vec<T>,
    pub residuals: Vec<T>,
}

impl<T: Float> ResonanceSet<T> {
    pub fn len(&self) -> usize {
        self.wavevectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wavevectors.is_empty()
    }
}

// U_{N-1}(h_k), the function whose sign changes are bracketed. v_k is
// nonzero inside the window, so its zeros are exactly the zeros of f.
fn chebyshev_factor<T: Float>(
    k: T,
    barrier: &BarrierSpec,
    params: &DispersionParams<T>,
) -> Result<T> {
    let (_, h_k) = closed_form_inputs(k, barrier, params)?;
    Ok(cheb_u(barrier.n_impurities - 1, h_k))
}

/// Scans `ka/pi` in 0.01..0.99 on `grid_points` points and bisects every
/// sign change of `U_{N-1}(h_k)` down to floating-point resolution.
///
/// `grid_points` must be at least 1000: zeros cluster near the band edges
/// for long barriers, and a coarse scan silently skips pairs of them. Roots
/// closer than 1e-6 are merged. Every returned wave vector transmits with
/// `|1 - T| <= 1e-10` (anything worse is dropped with a warning on stderr;
/// with transversal crossings this does not happen).
pub fn find_resonant_wavevectors<T: Float>(
    barrier: &BarrierSpec,
    params: &DispersionParams<T>,
    grid_points: usize,
) -> Result<ResonanceSet<T>> {
    barrier.validate()?;
    if grid_points < 1000 {
        return Err(Error::InvalidConfig(format!(
            "resonance scan needs at least 1000 grid points, got {grid_points}"
        )));
    }
    if barrier.n_impurities == 1 {
        return Err(Error::NoResonance(
            "a single impurity reflects at every wave vector".into(),
        ));
    }

    let lo = T::cast(SEARCH_WINDOW.0) * T::PI() / params.a;
    let hi = T::cast(SEARCH_WINDOW.1) * T::PI() / params.a;
    let step = (hi - lo) / T::from_usize(grid_points - 1).unwrap();

    let mut roots: Vec<T> = Vec::new();
    let mut prev_k = lo;
    let mut prev_s = chebyshev_factor(lo, barrier, params)?;
    for i in 1..grid_points {
        let k = lo + step * T::from_usize(i).unwrap();
        let s = chebyshev_factor(k, barrier, params)?;
        if prev_s == T::zero() {
            roots.push(prev_k);
        } else if s != T::zero() && (prev_s > T::zero()) != (s > T::zero()) {
            roots.push(bisect(prev_k, k, prev_s, barrier, params)?);
        }
        prev_k = k;
        prev_s = s;
    }
    if prev_s == T::zero() {
        roots.push(prev_k);
    }

    roots.dedup_by(|b, a| (*b - *a).abs() < T::cast(MIN_SEPARATION));

    let mut wavevectors = Vec::with_capacity(roots.len());
    let mut residuals = Vec::with_capacity(roots.len());
    for k in roots {
        let res = (T::one() - transmission(k, barrier, params)?).abs();
        if res <= T::cast(1e-10) {
            wavevectors.push(k);
            residuals.push(res);
        } else {
            eprintln!(
                "warning: dropping grazing resonance candidate at ka = {} (|1 - T| = {:e})",
                (k * params.a).as_f64(),
                res.as_f64()
            );
        }
    }

    if wavevectors.is_empty() {
        return Err(Error::NoResonance(format!(
            "no transmission resonance in the scan window for N = {}, m = {}, V/t0 = {}",
            barrier.n_impurities, barrier.spacing, barrier.strength
        )));
    }
    Ok(ResonanceSet { barrier: *barrier, wavevectors, residuals })
}

// Bisection on a bracketed sign change; stops when the bracket collapses to
// floating-point resolution or an exact zero shows up.
fn bisect<T: Float>(
    mut lo: T,
    mut hi: T,
    s_lo: T,
    barrier: &BarrierSpec,
    params: &DispersionParams<T>,
) -> Result<T> {
    let lo_positive = s_lo > T::zero();
    // 2 ulps at the scale of the bracket endpoints
    let eps = (T::one() + T::one()) * T::epsilon() * hi.abs().max(T::one());
    while hi - lo > eps {
        let mid = (lo + hi) / (T::one() + T::one());
        if mid <= lo || mid >= hi {
            break;
        }
        let s = chebyshev_factor(mid, barrier, params)?;
        if s == T::zero() {
            return Ok(mid);
        }
        if (s > T::zero()) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / (T::one() + T::one()))
}

/// Impurity strength (in units of `t0`) that makes `k` resonant through a
/// barrier of `n_impurities` impurities spaced `spacing` sites apart:
///
/// ```text
/// V/t0 = 2 sin(ka) (h_root - cos(k m a)) / sin(k m a)
/// ```
///
/// where `h_root` is the `root_index`-th root of `U_{N-1}` in ascending
/// order (`1..=N-1`). Fails with [`Error::DegenerateSpacing`] where
/// `sin(k m a) ~ 0`: there the Chebyshev argument pins to `cos(k m a) = +-1`
/// regardless of strength and no finite `V` works.
pub fn resonant_strength<T: Float>(
    k: T,
    n_impurities: u32,
    spacing: u32,
    root_index: u32,
    params: &DispersionParams<T>,
) -> Result<T> {
    if n_impurities < 2 {
        return Err(Error::NoResonance(
            "a single impurity reflects at every wave vector".into(),
        ));
    }
    if root_index < 1 || root_index > n_impurities - 1 {
        return Err(Error::InvalidConfig(format!(
            "root index {root_index} outside 1..={}",
            n_impurities - 1
        )));
    }
    let ka = k * params.a;
    let sin_ka = ka.sin();
    if sin_ka.abs() < T::cast(crate::planewave::BAND_EDGE_TOL) {
        return Err(Error::BandEdge { sin_ka: sin_ka.as_f64() });
    }
    let kma = ka * T::from_u32(spacing).unwrap();
    let sin_kma = kma.sin();
    if sin_kma.abs() < T::cast(1e-12) {
        return Err(Error::DegenerateSpacing(sin_kma.as_f64()));
    }
    let h_root = cheb_u_roots::<T>(n_impurities - 1)[root_index as usize - 1];
    Ok((sin_ka + sin_ka) * (h_root - kma.cos()) / sin_kma)
}
