//! Spectral diagnostics for the energy cascade of forced, weakly dispersive
//! nonlinear Schrödinger equations
//!
//! ```text
//! i u_t + ε² u_xx = |u|^{2σ} u - f
//! ```
//!
//! with `f = 1 - e^{-δ} e^{-βx²/2}` (P = 0) or the rotating `f = 2Q e^{-3it}`,
//! `Q = 4c³ - 3c`, `c = e^{-δ/2 - βx²/4}` (P = 1).

pub mod cascade_fit;
pub mod dynamics;
pub mod error;
pub mod forcing;
pub mod grid;
pub mod profiles;
pub mod runner;
pub mod stationary;
pub mod sum;
pub mod tridiag;

pub use cascade_fit::{
    default_window, fit_power_law, weighted_deviation, SpectrumEstimate, Window,
};
pub use error::{Error, Result};
pub use forcing::{eval_f, eval_q, series_coefficients, series_spectrum, ForcingSpec, Regime};
pub use grid::{
    dft_at, dft_backward, dft_forward, discrete_norm, spectral_derivative, Boundary, Field,
    Fourier, Grid1D, NormKind, Space,
};
pub use profiles::{cardano_profiles, power_root_profile, AlgebraicProfile, Branch, CardanoBranch};
