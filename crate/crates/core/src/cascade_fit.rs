//! Power-law fits of Fourier magnitudes and the weighted spectral deviation.

use crate::error::{Error, Result};
use crate::grid::{dft_at, Field, Space};

/// Lower edge of the default fit window.
pub const DEFAULT_XI0: f64 = 2.0;
/// Upper edge of the default fit window is `WINDOW_MARGIN / √δ`.
pub const WINDOW_MARGIN: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(Error::EmptyWindow { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, xi: f64) -> bool {
        xi >= self.lo && xi <= self.hi
    }

    /// `count` log-spaced frequencies spanning the window, endpoints included.
    pub fn log_spaced(&self, count: usize) -> Vec<f64> {
        if count < 2 {
            return vec![self.lo];
        }
        let (a, b) = (self.lo.ln(), self.hi.ln());
        (0..count)
            .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEstimate {
    pub xi: Vec<f64>,
    pub magnitude: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: Window,
    pub points_in_window: usize,
}

/// `(ξ₀, 0.3/√δ)`.
pub fn default_window(delta: f64, xi0: f64) -> Result<Window> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::invalid(format!("delta must be > 0, got {delta}")));
    }
    if !(xi0.is_finite() && xi0 > 0.0) {
        return Err(Error::invalid(format!("xi0 must be > 0, got {xi0}")));
    }
    Window::new(xi0, WINDOW_MARGIN / delta.sqrt())
}

/// Least-squares fit of `log |û|` against `log ξ` over the window.
/// Non-positive frequencies are ignored.
pub fn fit_power_law(xi: &[f64], magnitude: &[f64], window: Window) -> Result<SpectrumEstimate> {
    if xi.len() != magnitude.len() {
        return Err(Error::invalid(format!(
            "{} frequencies but {} magnitudes",
            xi.len(),
            magnitude.len()
        )));
    }
    let (xi, magnitude): (Vec<f64>, Vec<f64>) = xi
        .iter()
        .zip(magnitude)
        .filter(|(&x, _)| x > 0.0)
        .map(|(&x, &m)| (x, m))
        .unzip();
    if xi.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("frequencies must be strictly increasing"));
    }
    if magnitude.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
        return Err(Error::invalid("magnitudes must be finite and non-negative"));
    }

    let mut logs = Vec::new();
    for (&x, &m) in xi.iter().zip(&magnitude) {
        if window.contains(x) {
            if m == 0.0 {
                return Err(Error::DegenerateSpectrum { xi: x });
            }
            logs.push((x.ln(), m.ln()));
        }
    }
    if logs.len() < 3 {
        return Err(Error::InsufficientData {
            found: logs.len(),
            required: 3,
        });
    }

    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_tot: f64 = logs.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = logs
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };

    Ok(SpectrumEstimate {
        points_in_window: logs.len(),
        xi,
        magnitude,
        slope,
        intercept,
        r_squared,
        window,
    })
}

/// Default number of frequencies for [`fit_field_spectrum`].
pub const DENSE_SAMPLES: usize = 64;

/// Fits `|û|` of a physical-space field at `samples` log-spaced frequencies
/// across the window, each evaluated by direct quadrature. Narrow windows
/// hold too few lattice points for a stable fit at moderate δ.
pub fn fit_field_spectrum(
    field: &Field,
    window: Window,
    samples: usize,
) -> Result<SpectrumEstimate> {
    let xi = window.log_spaced(samples);
    let magnitude: Vec<f64> = dft_at(field, &xi)?.iter().map(|z| z.norm()).collect();
    fit_power_law(&xi, &magnitude, window)
}

/// Positive lattice frequencies and `|û|` of a frequency-space field.
pub fn positive_spectrum(spectrum: &Field) -> Result<(Vec<f64>, Vec<f64>)> {
    if spectrum.space() != Space::Frequency {
        return Err(Error::invalid("expected a frequency-space field"));
    }
    Ok(spectrum
        .grid()
        .frequencies()
        .into_iter()
        .zip(spectrum.values())
        .filter(|(x, _)| *x > 0.0)
        .map(|(x, z)| (x, z.norm()))
        .unzip())
}

/// `max_{|ξ| ∈ window} |ξ|^exponent |a(ξ) - b(ξ)|` on a shared frequency lattice.
pub fn weighted_deviation(a: &Field, b: &Field, exponent: f64, window: Window) -> Result<f64> {
    if a.space() != Space::Frequency || b.space() != Space::Frequency {
        return Err(Error::invalid(
            "weighted deviation compares frequency-space fields",
        ));
    }
    if a.grid() != b.grid() {
        return Err(Error::invalid(
            "spectra live on different frequency lattices",
        ));
    }
    if !exponent.is_finite() {
        return Err(Error::invalid("exponent must be finite"));
    }
    Ok(a.grid()
        .frequencies()
        .iter()
        .zip(a.values().iter().zip(b.values()))
        .filter(|(x, _)| window.contains(x.abs()))
        .map(|(x, (p, q))| x.abs().powf(exponent) * (p - q).norm())
        .fold(0.0, f64::max))
}
