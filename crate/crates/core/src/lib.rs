//! Scattering of plane waves and Gaussian wave packets off periodic
//! impurity arrays on a one-dimensional tight-binding lattice.
//!
//! The Hamiltonian is nearest-neighbor hopping with amplitude `t0` plus `N`
//! equal on-site impurities of strength `V`, spaced `m` sites apart:
//!
//! ```text
//! H = -t0 sum_l (c†_l c_{l+1} + h.c.) + V sum_{l in barrier} c†_l c_l
//! ```
//!
//! with free dispersion `E_k = -2 t0 cos(ka)`. Two complementary engines are
//! provided and cross-checked against each other:
//!
//! * [`planewave`] computes exact stationary-state transmission and
//!   reflection amplitudes through the barrier from 2x2 transfer matrices,
//!   with the Chebyshev closed form as the production path and the explicit
//!   matrix product as the brute-force reference. [`resonance`] locates the
//!   unit-transmission wave vectors and [`analytic`] expands the reflection
//!   probability and the reflected density profile around them.
//! * [`evolve`] propagates Gaussian wave packets on a finite periodic
//!   lattice by full diagonalization of the Hamiltonian.
//!
//! [`harness`] wires both engines into deterministic parameter scans and
//! CSV/JSON tables; the `lattice-scatter` binary exposes them on the command
//! line.
//!
//! Units: lattice spacing `a`, hopping `t0` and `hbar` are all 1 unless a
//! [`DispersionParams`] says otherwise; times are in units of `hbar/t0`,
//! wave vectors in `1/a`.

// openblas-src only emits link flags for the system BLAS/LAPACK; the
// underscore import keeps the link dependency alive.
use openblas_src as _;

pub mod analytic;
pub mod chebyshev;
pub mod evolve;
pub mod harness;
pub mod planewave;
pub mod resonance;

pub use analytic::{ResonantExpansion, SplitGaussianParams};
pub use evolve::{EigenSystem, GaussianPacketSpec, LatticeConfig, Snapshot, WaveFunction};
pub use harness::{expand_preset, run, FigureTable, Mode, RunConfig};
pub use planewave::{BarrierSpec, DispersionParams, ScatteringAmplitudes, TransferMatrix2};
pub use resonance::ResonanceSet;

/// Double-precision complex scalar used by the wave-packet engine.
pub type C64 = num_complex::Complex<f64>;

/// Real scalar for the closed-form engines.
///
/// Everything the transfer-matrix side needs from a float: arithmetic,
/// transcendentals, constants, and conversions from literals. Implemented
/// for `f32` and `f64`; the wave-packet engine is `f64`-only because its
/// backend is LAPACK's double-precision solver.
pub trait Float:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::NumAssign
    + num_traits::FromPrimitive
    + std::fmt::Debug
    + std::fmt::Display
    + std::iter::Sum
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal or tolerance.
    fn cast(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in this scalar")
    }

    /// Widening conversion for diagnostics.
    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Float for f32 {}
impl Float for f64 {}

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// |sin(ka)| below tolerance: scattering amplitudes are singular at the
    /// band edges ka = 0, pi.
    #[error("wave vector at a band edge: |sin(ka)| = {sin_ka:.3e} is below 1e-12")]
    BandEdge { sin_ka: f64 },

    /// The barrier supports no unit-transmission wave vector.
    #[error("no resonance: {0}")]
    NoResonance(String),

    /// sin(k m a) ~ 0: the resonance condition cannot be solved for V there.
    #[error("degenerate spacing at this wave vector: |sin(k m a)| = {0:.3e} is below 1e-12")]
    DegenerateSpacing(f64),

    /// A barrier site falls outside the lattice.
    #[error("barrier site {site} outside the lattice range 1..={n_sites}")]
    BarrierOutOfRange { site: i64, n_sites: usize },

    /// The initial packet does not fit the lattice with 5-sigma margins.
    #[error(
        "packet tails leave the lattice: need x0 +/- 5*alpha within [1, {n_sites}], \
         got x0 = {x0}, alpha = {alpha}"
    )]
    PacketOutOfRange { x0: f64, alpha: f64, n_sites: usize },

    /// An analytic comparison was requested off resonance.
    #[error("configuration is not resonant at k0: |rho(k0)| = {0:.3e} exceeds 1e-8")]
    NotResonant(f64),

    /// A packet reached the periodic seam; everything after this time would
    /// be wrap-around artifacts.
    #[error("wave packet reached the periodic boundary: density {density:.3e} at site {site}")]
    BoundaryWrap { site: usize, density: f64 },

    /// Scattering has not finished at the comparison time.
    #[error(
        "scattering incomplete at t = {t}: barrier-region probability {p_barrier:.3e} \
         is not below 1e-6"
    )]
    ScatteringIncomplete { t: f64, p_barrier: f64 },

    /// LAPACK failed to converge or was fed a malformed matrix.
    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    /// Anything rejected by configuration validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable discriminant for CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BandEdge { .. } => "band_edge",
            Error::NoResonance(_) => "no_resonance",
            Error::DegenerateSpacing(_) => "degenerate_spacing",
            Error::BarrierOutOfRange { .. } => "barrier_out_of_range",
            Error::PacketOutOfRange { .. } => "packet_out_of_range",
            Error::NotResonant(_) => "not_resonant",
            Error::BoundaryWrap { .. } => "boundary_wrap",
            Error::ScatteringIncomplete { .. } => "scattering_incomplete",
            Error::Eigen(_) => "eigen",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
