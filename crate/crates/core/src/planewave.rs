//! Stationary-state scattering amplitudes through a periodic impurity
//! barrier, from 2x2 transfer matrices.
//!
//! A plane wave `exp(i k a l)` on the chain accumulates, per impurity of
//! reduced strength `vt = V/t0`, the site matrix [`site_matrix`]; between
//! impurities it picks up free phases [`free_hop_matrix`]. The full barrier
//! of `N` impurities spaced `m` sites apart is the alternating product
//! `M_1 (M_free^(m-1) M_1)^(N-1)` ([`barrier_matrix`]).
//!
//! The product telescopes: with `v_k = vt / (2 sin ka)` and the argument
//! `h_k = cos(k m a) + v_k sin(k m a)`, the transmission probability is
//!
//! ```text
//! T(k) = 1 / (1 + [v_k U_{N-1}(h_k)]^2)
//! ```
//!
//! which is the production path ([`transmission`], [`reflection`]); the
//! explicit matrix product is kept as the brute-force reference and for the
//! complex amplitudes themselves ([`amplitudes`]).
//!
//! Everything here depends only on the dimensionless combinations `ka` and
//! `V/t0`; with the default `DispersionParams` (`a = 1`) the wave-vector
//! argument is `ka` itself.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::chebyshev::cheb_u;
use crate::{Error, Float, Result};

/// Band edges `ka = 0, pi` are excluded below this margin on `|sin(ka)|`.
pub const BAND_EDGE_TOL: f64 = 1e-12;

/// Hopping amplitude and lattice spacing; both default to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionParams<T: Float> {
    pub t0: T,
    pub a: T,
}

impl<T: Float> Default for DispersionParams<T> {
    fn default() -> Self {
        Self { t0: T::one(), a: T::one() }
    }
}

impl<T: Float> DispersionParams<T> {
    /// Free-lattice dispersion `E_k = -2 t0 cos(ka)`.
    pub fn energy(&self, k: T) -> T {
        -(self.t0 + self.t0) * (k * self.a).cos()
    }

    /// Group velocity `dE/dk / hbar = 2 t0 a sin(ka)` (hbar = 1).
    pub fn group_velocity(&self, k: T) -> T {
        (self.t0 + self.t0) * self.a * (k * self.a).sin()
    }

    /// Dispersion curvature `d2E/dk2 = 2 t0 a^2 cos(ka)`.
    pub fn curvature(&self, k: T) -> T {
        (self.t0 + self.t0) * self.a * self.a * (k * self.a).cos()
    }
}

/// Barrier geometry: `n_impurities` equal on-site impurities of `strength`
/// (in units of `t0`), spaced `spacing` sites apart, the first at lattice
/// site `start_site`.
///
/// The closed-form engines ignore `start_site` (it only shifts the
/// reflection phase); the wave-packet engine places the barrier with it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierSpec {
    pub n_impurities: u32,
    pub spacing: u32,
    pub strength: f64,
    pub start_site: i64,
}

impl BarrierSpec {
    pub fn new(n_impurities: u32, spacing: u32, strength: f64) -> Self {
        Self { n_impurities, spacing, strength, start_site: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_impurities < 1 {
            return Err(Error::InvalidConfig("barrier needs at least one impurity".into()));
        }
        if self.spacing < 1 {
            return Err(Error::InvalidConfig("impurity spacing must be at least one site".into()));
        }
        if !self.strength.is_finite() {
            return Err(Error::InvalidConfig("impurity strength must be finite".into()));
        }
        Ok(())
    }

    /// Site of the last impurity.
    pub fn end_site(&self) -> i64 {
        self.start_site + (self.n_impurities as i64 - 1) * self.spacing as i64
    }

    /// Impurity sites, ascending.
    pub fn sites(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.n_impurities as i64).map(move |j| self.start_site + j * self.spacing as i64)
    }

    /// Spatial extent `(N - 1) m a` in units of `a`.
    pub fn width(&self) -> f64 {
        (self.n_impurities as f64 - 1.0) * self.spacing as f64
    }
}

/// Complex 2x2 transfer matrix acting on (right-moving, left-moving)
/// coefficient pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix2<T: Float> {
    pub m11: Complex<T>,
    pub m12: Complex<T>,
    pub m21: Complex<T>,
    pub m22: Complex<T>,
}

impl<T: Float> TransferMatrix2<T> {
    pub fn identity() -> Self {
        Self {
            m11: Complex::new(T::one(), T::zero()),
            m12: Complex::new(T::zero(), T::zero()),
            m21: Complex::new(T::zero(), T::zero()),
            m22: Complex::new(T::one(), T::zero()),
        }
    }

    pub fn det(&self) -> Complex<T> {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// `|det - 1|`; zero for any physical (current-conserving) barrier.
    pub fn unimodularity_defect(&self) -> T {
        (self.det() - Complex::new(T::one(), T::zero())).norm()
    }

    /// Deviation from the time-reversal structure `m22 = conj(m11)`,
    /// `m21 = conj(m12)` shared by every real-potential barrier.
    pub fn time_reversal_defect(&self) -> T {
        let d1 = (self.m22 - self.m11.conj()).norm();
        let d2 = (self.m21 - self.m12.conj()).norm();
        d1.max(d2)
    }
}

impl<T: Float> std::ops::Mul for TransferMatrix2<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self {
            m11: self.m11 * rhs.m11 + self.m12 * rhs.m21,
            m12: self.m11 * rhs.m12 + self.m12 * rhs.m22,
            m21: self.m21 * rhs.m11 + self.m22 * rhs.m21,
            m22: self.m21 * rhs.m12 + self.m22 * rhs.m22,
        }
    }
}

/// Reflection and transmission amplitudes at fixed `k`; probabilities are
/// the squared moduli and sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes<T: Float> {
    pub rho: Complex<T>,
    pub tau: Complex<T>,
}

impl<T: Float> ScatteringAmplitudes<T> {
    pub fn reflection_probability(&self) -> T {
        self.rho.norm_sqr()
    }

    pub fn transmission_probability(&self) -> T {
        self.tau.norm_sqr()
    }
}

/// `sin(ka)` with the band-edge guard; every amplitude is singular where it
/// vanishes.
fn band_sine<T: Float>(k: T, params: &DispersionParams<T>) -> Result<T> {
    let s = (k * params.a).sin();
    if s.abs() < T::cast(BAND_EDGE_TOL) {
        return Err(Error::BandEdge { sin_ka: s.as_f64() });
    }
    Ok(s)
}

/// Transfer matrix of a single impurity of reduced strength `vt = V/t0`.
///
/// With `g = exp(i ka)` and `v_k = vt / (2 sin ka)`:
///
/// ```text
/// | g (1 - i v_k)      -i g v_k       |
/// | i conj(g) v_k      conj(g) (1 + i v_k) |
/// ```
///
/// Unimodular, and `vt = 0` reduces it to the free single-site hop.
pub fn site_matrix<T: Float>(
    k: T,
    vt: T,
    params: &DispersionParams<T>,
) -> Result<TransferMatrix2<T>> {
    let sin_ka = band_sine(k, params)?;
    let v_k = vt / (sin_ka + sin_ka);
    let g = Complex::from_polar(T::one(), k * params.a);
    let one = Complex::new(T::one(), T::zero());
    let i_vk = Complex::new(T::zero(), v_k);
    Ok(TransferMatrix2 {
        m11: g * (one - i_vk),
        m12: -i_vk * g,
        m21: i_vk * g.conj(),
        m22: g.conj() * (one + i_vk),
    })
}

/// Diagonal free-propagation matrix over `hops` lattice sites,
/// `diag(exp(i ka hops), exp(-i ka hops))`; `hops = 0` is the identity.
///
/// The phase is taken from `ka * hops` in one shot rather than by repeated
/// multiplication, so long spacers do not accumulate rounding drift.
pub fn free_hop_matrix<T: Float>(
    k: T,
    hops: u32,
    params: &DispersionParams<T>,
) -> TransferMatrix2<T> {
    let phase = k * params.a * T::from_u32(hops).unwrap();
    let g = Complex::from_polar(T::one(), phase);
    TransferMatrix2 {
        m11: g,
        m12: Complex::new(T::zero(), T::zero()),
        m21: Complex::new(T::zero(), T::zero()),
        m22: g.conj(),
    }
}

/// Full barrier matrix: the explicit alternating product of `N` site
/// matrices and `N - 1` free spacers of `m - 1` hops.
///
/// This is the brute-force reference path; [`transmission`] evaluates the
/// same physics in closed form.
pub fn barrier_matrix<T: Float>(
    k: T,
    barrier: &BarrierSpec,
    params: &DispersionParams<T>,
) -> Result<TransferMatrix2<T>> {
    barrier.validate()?;
    let site = site_matrix(k, T::cast(barrier.strength), params)?;
    let spacer = free_hop_matrix(k, barrier.spacing - 1, params);
    let block = spacer * site;
    let mut m = site;
    for _ in 1..barrier.n_impurities {
        m = m * block;
    }
    Ok(m)
}

/// Reduced impurity response `v_k = vt / (2 sin ka)` and Chebyshev argument
/// `h_k = cos(k m a) + v_k sin(k m a)`, the two scalars that the closed
/// forms run on.
pub(crate) fn closed_form_inputs<T: Float>(
    k: T,
    barrier: &BarrierSpec,
    params: &DispersionParams<T>,
) -> Result<(T, T)> {
    barrier.validate()?;
    let sin_ka = band_sine(k, params)?;
    let v_k = T::cast(barrier.strength) / (sin_ka + sin_ka);
    let kma = k * params.a * T::from_u32(barrier.spacing).unwrap();
    let h_k = kma.cos() + v_k * kma.sin();
    Ok((v_k, h_k))
}

/// `f(k) = v_k U_{N-1}(h_k)`, the single real function the barrier reflects
/// through: `R = f^2 / (1 + f^2)` and the resonances are its zeros.
pub(crate) fn reflection_factor<T: Float>(
    k: T,
    barrier: &BarrierSpec,
    params: &DispersionParams<T>,
) -> Result<T> {
    let (v_k, h_k) = closed_form_inputs(k, barrier, params)?;
    Ok(v_k * cheb_u(barrier.n_impurities - 1, h_k))
}

/// Closed-form transmission probability `T = 1 / (1 + f^2)`.
///
/// Deep in a gap `U_{N-1}` grows like `exp(N acosh|h|)` and can overflow;
/// a non-finite `f^2` (including the inf - inf NaN the recurrence tail can
/// produce past the overflow point) is the `T -> 0` limit and is returned
/// as exactly 0.
pub fn transmission<T: Float>(
    k: T,
    barrier: &BarrierSpec,
    params: &DispersionParams<T>,
) -> Result<T> {
    let f = reflection_factor(k, barrier, params)?;
    let f2 = f * f;
    if !f2.is_finite() {
        return Ok(T::zero());
    }
    Ok((T::one() + f2).recip())
}

/// Closed-form reflection probability `R = f^2 / (1 + f^2) = 1 - T`.
pub fn reflection<T: Float>(
    k: T,
    barrier: &BarrierSpec,
    params: &DispersionParams<T>,
) -> Result<T> {
    let f = reflection_factor(k, barrier, params)?;
    let f2 = f * f;
    if !f2.is_finite() {
        return Ok(T::one());
    }
    Ok(f2 / (T::one() + f2))
}

/// Complex reflection and transmission amplitudes from the barrier matrix:
/// `rho = M12 / M22`, `tau = 1 / M22`.
///
/// The matrix structure guarantees `|M11| = |M22|`, so reading `T` off
/// `M22` rather than `M11` is a convention, not a choice of physics; the
/// reflection phase is that of a barrier starting at site 1.
pub fn amplitudes<T: Float>(
    k: T,
    barrier: &BarrierSpec,
    params: &DispersionParams<T>,
) -> Result<ScatteringAmplitudes<T>> {
    let m = barrier_matrix(k, barrier, params)?;
    Ok(ScatteringAmplitudes { rho: m.m12 / m.m22, tau: m.m22.finv() })
}
