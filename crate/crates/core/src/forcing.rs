//! Forcing profiles and the binomial series for the spectrum of `f^α - 1`.
//!
//! With `f(x) = 1 - e^{-δ} e^{-βx²/2}` and `(1 - X)^α - 1 = Σ_{n≥1} a_n (-X)^n`,
//! each power `X^n` is a Gaussian, so
//!
//! ```text
//! 𝓕(f^α - 1)(ξ) = Σ_{n≥1} (-1)^n a_n (βn)^{-1/2} e^{-nδ} e^{-ξ²/(2nβ)}
//! ```
//!
//! in one space dimension. Every term is negative.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid1D};
use crate::sum::CompensatedSum;

/// The constant `P` in the time-periodic forcing `2Q(x) e^{-3iPt}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Time-independent forcing `f`.
    Zero,
    /// Cubic nonlinearity with forcing `2Q(x) e^{-3it}`.
    One,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForcingSpec {
    delta: f64,
    beta: f64,
    sigma: u32,
    alpha: f64,
    regime: Regime,
    focusing: bool,
}

impl ForcingSpec {
    /// Time-independent forcing with `α = 1/(2σ+1)`.
    pub fn power_root(delta: f64, sigma: u32) -> Result<Self> {
        if sigma == 0 {
            return Err(Error::invalid("sigma must be a positive integer"));
        }
        Self {
            delta,
            beta: 1.0,
            sigma,
            alpha: 1.0 / (2 * sigma + 1) as f64,
            regime: Regime::Zero,
            focusing: false,
        }
        .validated()
    }

    /// Cubic time-periodic forcing; the cascade exponent is `α = 1/2`.
    pub fn cardano(delta: f64) -> Result<Self> {
        Self {
            delta,
            beta: 1.0,
            sigma: 1,
            alpha: 0.5,
            regime: Regime::One,
            focusing: false,
        }
        .validated()
    }

    pub fn new(regime: Regime, delta: f64, sigma: u32) -> Result<Self> {
        match regime {
            Regime::Zero => Self::power_root(delta, sigma),
            Regime::One if sigma == 1 => Self::cardano(delta),
            Regime::One => Err(Error::invalid(format!(
                "P = 1 requires sigma = 1 (cubic nonlinearity), got sigma = {sigma}"
            ))),
        }
    }

    /// Overrides the exponent, e.g. `k/(2σ+1)` reduced to its fractional part.
    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.alpha = alpha;
        self.validated()
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        self.beta = beta;
        self.validated()
    }

    pub fn with_focusing(mut self, focusing: bool) -> Self {
        self.focusing = focusing;
        self
    }

    fn validated(self) -> Result<Self> {
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::invalid(format!(
                "delta must be > 0, got {}",
                self.delta
            )));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::invalid(format!(
                "beta must be > 0, got {}",
                self.beta
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.regime == Regime::One && self.sigma != 1 {
            return Err(Error::invalid("P = 1 requires sigma = 1"));
        }
        Ok(self)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn is_focusing(&self) -> bool {
        self.focusing
    }

    /// `2σ + 1`.
    pub fn degree(&self) -> u32 {
        2 * self.sigma + 1
    }

    /// Exponent of the predicted cascade `|ξ|^{-(2α+1)}` in one dimension.
    pub fn cascade_exponent(&self) -> f64 {
        2.0 * self.alpha + 1.0
    }
}

/// `f(x) = 1 - e^{-δ} e^{-βx²/2}`.
pub fn eval_f(spec: &ForcingSpec, grid: &Grid1D) -> Result<Field> {
    if spec.regime != Regime::Zero {
        return Err(Error::WrongRegime("f is defined for P = 0".into()));
    }
    let depth = (-spec.delta).exp();
    let beta = spec.beta;
    Ok(Field::from_fn(*grid, |x| {
        1.0 - depth * (-beta * x * x / 2.0).exp()
    }))
}

/// `Q(x) = 4 e^{-3δ/2 - 3βx²/4} - 3 e^{-δ/2 - βx²/4}`, i.e. `4c³ - 3c` with
/// `c = e^{-δ/2 - βx²/4}`.
pub fn eval_q(spec: &ForcingSpec, grid: &Grid1D) -> Result<Field> {
    if spec.regime != Regime::One {
        return Err(Error::WrongRegime("Q is defined for P = 1".into()));
    }
    let (delta, beta) = (spec.delta, spec.beta);
    Ok(Field::from_fn(*grid, |x| {
        let r = beta * x * x;
        4.0 * (-1.5 * delta - 0.75 * r).exp() - 3.0 * (-0.5 * delta - 0.25 * r).exp()
    }))
}

/// Binomial coefficients `a_1 … a_{n_max}` of `(1 - X)^α - 1 = Σ a_n (-X)^n`,
/// from `a_{n+1} = a_n (α - n)/(n + 1)`.
pub fn series_coefficients(alpha: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if n_max == 0 {
        return Err(Error::invalid("n_max must be >= 1"));
    }
    let mut out = Vec::with_capacity(n_max);
    let mut a = 1.0;
    for n in 0..n_max {
        a *= (alpha - n as f64) / (n + 1) as f64;
        out.push(a);
    }
    Ok(out)
}

/// Hard cap on the number of series terms: `e^{-nδ} < e^{-40}` beyond it.
pub fn series_term_cap(delta: f64) -> usize {
    (40.0 / delta).ceil() as usize
}

/// Semi-analytic spectrum `S(ξ) = 𝓕(f^α - 1)(ξ)` in one dimension.
///
/// Terms are accumulated in increasing `n` with compensated summation and the
/// series is truncated at `min(⌈40/δ⌉, first n > ξ²/(2β) whose term is below
/// tol · |partial sum|)`.
pub fn series_spectrum(spec: &ForcingSpec, xi: &[f64], tol: f64) -> Result<Vec<f64>> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::invalid(format!("tol must be > 0, got {tol}")));
    }
    if let Some(bad) = xi.iter().find(|x| !x.is_finite()) {
        return Err(Error::invalid(format!("non-finite frequency {bad}")));
    }
    let (alpha, beta, delta) = (spec.alpha, spec.beta, spec.delta);
    let cap = series_term_cap(delta);
    Ok(xi
        .par_iter()
        .map(|&k| {
            let half_k2 = k * k / 2.0;
            let settle = half_k2 / beta;
            let mut acc = CompensatedSum::new();
            // b_n = (-1)^n a_n, all negative.
            let mut b = -alpha;
            for n in 1..=cap {
                let nf = n as f64;
                let term = b / (beta * nf).sqrt() * (-nf * delta - half_k2 / (nf * beta)).exp();
                acc += term;
                if nf > settle && term.abs() < tol * acc.value().abs() {
                    break;
                }
                b *= (nf - alpha) / (nf + 1.0);
            }
            acc.value()
        })
        .collect())
}
