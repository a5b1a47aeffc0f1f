//! Uniform 1-D grids, the continuum-normalized discrete Fourier transform,
//! spectral derivatives and discrete norms.
//!
//! The transform approximates
//! `û(ξ) = (2π)^{-1/2} ∫ e^{-ixξ} u(x) dx`
//! by the Riemann sum `dx (2π)^{-1/2} Σ_j e^{-i x_j ξ_k} u(x_j)`, so discrete
//! spectra can be compared directly with continuum formulas and Plancherel
//! reads `‖û‖_{L²(ξ)} = ‖u‖_{L²(x)}`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    /// Endpoints `±half_length` carry prescribed values and are not unknowns.
    Dirichlet,
}

/// Uniform grid on `[-half_length, half_length)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    n_points: usize,
    half_length: f64,
    dx: f64,
    boundary: Boundary,
}

impl Grid1D {
    pub fn new(n_points: usize, half_length: f64, boundary: Boundary) -> Result<Self> {
        if n_points < 4 || !n_points.is_power_of_two() {
            return Err(Error::invalid(format!(
                "n_points must be a power of two >= 4, got {n_points}"
            )));
        }
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::invalid(format!(
                "half_length must be positive and finite, got {half_length}"
            )));
        }
        Ok(Self {
            n_points,
            half_length,
            dx: 2.0 * half_length / n_points as f64,
            boundary,
        })
    }

    pub fn periodic(n_points: usize, half_length: f64) -> Result<Self> {
        Self::new(n_points, half_length, Boundary::Periodic)
    }

    pub fn dirichlet(n_points: usize, half_length: f64) -> Result<Self> {
        Self::new(n_points, half_length, Boundary::Dirichlet)
    }

    /// Same spacing, other boundary treatment. Periodic point `j` and
    /// Dirichlet interior point `j - 1` sit at the same `x`.
    pub fn with_boundary(&self, boundary: Boundary) -> Self {
        Self { boundary, ..*self }
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Number of unknowns: `n_points` for periodic grids, `n_points - 1`
    /// interior points for Dirichlet grids.
    pub fn len(&self) -> usize {
        match self.boundary {
            Boundary::Periodic => self.n_points,
            Boundary::Dirichlet => self.n_points - 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        let offset = match self.boundary {
            Boundary::Periodic => 0,
            Boundary::Dirichlet => 1,
        };
        (0..self.len())
            .map(|j| -self.half_length + (j + offset) as f64 * self.dx)
            .collect()
    }

    /// Spacing of the dual lattice, `π / half_length`.
    pub fn dxi(&self) -> f64 {
        PI / self.half_length
    }

    /// Frequency lattice in natural order, `ξ_k = k π / half_length` for
    /// `k = -n/2 .. n/2 - 1`.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.n_points as i64;
        (-n / 2..n / 2).map(|k| k as f64 * self.dxi()).collect()
    }

    /// Frequencies in FFT storage order (0, 1, …, n/2-1, -n/2, …, -1).
    pub fn frequencies_fft_order(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n)
            .map(|k| {
                let signed = if k < n / 2 {
                    k as i64
                } else {
                    k as i64 - n as i64
                };
                signed as f64 * self.dxi()
            })
            .collect()
    }

    pub fn max_frequency(&self) -> f64 {
        (self.n_points / 2) as f64 * self.dxi()
    }
}

impl Default for Grid1D {
    fn default() -> Self {
        Self::periodic(1 << 14, 2.0 * PI).expect("default grid is valid")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Physical,
    /// Natural (monotone) frequency order, see [`Grid1D::frequencies`].
    Frequency,
}

/// Complex samples on a grid, either in physical or in frequency space.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid1D,
    space: Space,
    values: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: Grid1D, space: Space, values: Vec<Complex64>) -> Result<Self> {
        let expected = match space {
            Space::Physical => grid.len(),
            Space::Frequency => grid.n_points(),
        };
        if values.len() != expected {
            return Err(Error::invalid(format!(
                "field has {} values, grid expects {expected}",
                values.len()
            )));
        }
        Ok(Self {
            grid,
            space,
            values,
        })
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            space: Space::Physical,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_real(grid: Grid1D, values: &[f64]) -> Result<Self> {
        Self::new(
            grid,
            Space::Physical,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// Samples `f` at the grid points.
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = grid
            .points()
            .into_iter()
            .map(|x| Complex64::new(f(x), 0.0))
            .collect();
        Self {
            grid,
            space: Space::Physical,
            values,
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Real-valued up to `1e-12 · max|u|` in the imaginary part.
    pub fn is_real(&self) -> bool {
        let max_im = self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        max_im <= 1e-12 * self.max_abs()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            space: self.space,
            values: self.values.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn zip_with(
        &self,
        other: &Field,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            grid: self.grid,
            space: self.space,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Field) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Field) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn offset(&self, c: f64) -> Self {
        self.map(|z| z - c)
    }

    pub(crate) fn check_compatible(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid || self.space != other.space || self.len() != other.len() {
            return Err(Error::invalid("fields live on different grids or spaces"));
        }
        Ok(())
    }

    /// Lifts interior values of a Dirichlet field onto the periodic grid with
    /// the same spacing; the point `x = -half_length` takes `boundary_value`.
    pub fn dirichlet_to_periodic(&self, boundary_value: f64) -> Result<Self> {
        if self.grid.boundary() != Boundary::Dirichlet || self.space != Space::Physical {
            return Err(Error::invalid(
                "expected a physical field on a Dirichlet grid",
            ));
        }
        let mut values = Vec::with_capacity(self.grid.n_points());
        values.push(Complex64::new(boundary_value, 0.0));
        values.extend_from_slice(&self.values);
        Field::new(
            self.grid.with_boundary(Boundary::Periodic),
            Space::Physical,
            values,
        )
    }

    /// Inverse of [`Field::dirichlet_to_periodic`]: drops the `x = -half_length` sample.
    pub fn periodic_to_dirichlet(&self) -> Result<Self> {
        if self.grid.boundary() != Boundary::Periodic || self.space != Space::Physical {
            return Err(Error::invalid(
                "expected a physical field on a periodic grid",
            ));
        }
        Field::new(
            self.grid.with_boundary(Boundary::Dirichlet),
            Space::Physical,
            self.values[1..].to_vec(),
        )
    }

    fn ensure_finite(&self) -> Result<()> {
        if self
            .values
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            Ok(())
        } else {
            Err(Error::invalid("field contains non-finite values"))
        }
    }
}

/// Cached FFT plans for one periodic grid. Works in raw FFT order with the
/// unnormalized forward and `1/n`-normalized inverse transform.
pub struct Fourier {
    grid: Grid1D,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl Fourier {
    pub fn new(grid: Grid1D) -> Result<Self> {
        if grid.boundary() != Boundary::Periodic {
            return Err(Error::invalid("Fourier transforms require a periodic grid"));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.n_points());
        let inverse = planner.plan_fft_inverse(grid.n_points());
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Ok(Self {
            grid,
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn forward_raw(&mut self, buf: &mut [Complex64]) {
        self.forward.process_with_scratch(buf, &mut self.scratch);
    }

    pub fn inverse_raw(&mut self, buf: &mut [Complex64]) {
        self.inverse.process_with_scratch(buf, &mut self.scratch);
        let scale = 1.0 / self.grid.n_points() as f64;
        buf.iter_mut().for_each(|z| *z *= scale);
    }

    /// Applies the Fourier multiplier `m(ξ)` (given in FFT order) in place.
    pub fn apply_multiplier(&mut self, buf: &mut [Complex64], multiplier: &[Complex64]) {
        self.forward_raw(buf);
        buf.iter_mut().zip(multiplier).for_each(|(z, m)| *z *= m);
        self.inverse_raw(buf);
    }

    pub fn forward(&mut self, field: &Field) -> Result<Field> {
        self.check(field, Space::Physical)?;
        let n = self.grid.n_points();
        let mut buf = field.values().to_vec();
        self.forward_raw(&mut buf);
        // x_j = -L + j dx gives e^{-i x_j ξ_k} = (-1)^k e^{-2πijk/n}.
        let scale = self.grid.dx() / (2.0 * PI).sqrt();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (m, slot) in out.iter_mut().enumerate() {
            let k = m as i64 - (n / 2) as i64;
            let raw = buf[k.rem_euclid(n as i64) as usize];
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            *slot = raw * (sign * scale);
        }
        Field::new(self.grid, Space::Frequency, out)
    }

    pub fn backward(&mut self, field: &Field) -> Result<Field> {
        self.check(field, Space::Frequency)?;
        let n = self.grid.n_points();
        let scale = (2.0 * PI).sqrt() / self.grid.dx();
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (m, &v) in field.values().iter().enumerate() {
            let k = m as i64 - (n / 2) as i64;
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            buf[k.rem_euclid(n as i64) as usize] = v * (sign * scale);
        }
        self.inverse_raw(&mut buf);
        Field::new(self.grid, Space::Physical, buf)
    }

    /// `∂_x^order u` via the multiplier `(iξ)^order`.
    pub fn derivative(&mut self, field: &Field, order: u32) -> Result<Field> {
        self.check(field, Space::Physical)?;
        let multiplier: Vec<Complex64> = self
            .grid
            .frequencies_fft_order()
            .into_iter()
            .map(|xi| Complex64::new(0.0, xi).powu(order))
            .collect();
        let mut buf = field.values().to_vec();
        self.apply_multiplier(&mut buf, &multiplier);
        Field::new(self.grid, Space::Physical, buf)
    }

    fn check(&self, field: &Field, space: Space) -> Result<()> {
        if *field.grid() != self.grid {
            return Err(Error::invalid(
                "field grid does not match the transform grid",
            ));
        }
        if field.space() != space {
            return Err(Error::invalid(format!(
                "expected a field in {space:?} space, got {:?}",
                field.space()
            )));
        }
        Ok(())
    }
}

pub fn dft_forward(field: &Field) -> Result<Field> {
    Fourier::new(*field.grid())?.forward(field)
}

pub fn dft_backward(field: &Field) -> Result<Field> {
    Fourier::new(*field.grid())?.backward(field)
}

pub fn spectral_derivative(field: &Field, order: u32) -> Result<Field> {
    Fourier::new(*field.grid())?.derivative(field, order)
}

/// Evaluates the Riemann-sum transform at arbitrary (off-lattice) frequencies.
/// Costs `O(n)` per frequency; meant for dense sampling of a fit window.
pub fn dft_at(field: &Field, xi: &[f64]) -> Result<Vec<Complex64>> {
    if field.space() != Space::Physical {
        return Err(Error::invalid("dft_at expects a physical-space field"));
    }
    if xi.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite frequency"));
    }
    let grid = field.grid();
    let points = grid.points();
    let scale = grid.dx() / (2.0 * PI).sqrt();
    Ok(xi
        .iter()
        .map(|&k| {
            // e^{-i x_j k} by recurrence from x_0, renormalized every so often.
            let step = Complex64::from_polar(1.0, -k * grid.dx());
            let mut phase = Complex64::from_polar(1.0, -k * points[0]);
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &u) in field.values().iter().enumerate() {
                if j % 256 == 0 {
                    phase = Complex64::from_polar(1.0, -k * points[j]);
                }
                acc += u * phase;
                phase *= step;
            }
            acc * scale
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormKind {
    L2,
    /// Homogeneous Sobolev seminorm with multiplier `|ξ|^s`.
    HsDot(f64),
    /// `‖⟨x⟩^k u‖_{L²}` with `⟨x⟩ = (1 + x²)^{1/2}`.
    L2Weighted(f64),
}

pub fn discrete_norm(field: &Field, kind: NormKind) -> Result<f64> {
    field.ensure_finite()?;
    let grid = field.grid();
    match kind {
        NormKind::L2 => {
            let step = match field.space() {
                Space::Physical => grid.dx(),
                Space::Frequency => grid.dxi(),
            };
            Ok((step * field.values().iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt())
        }
        NormKind::HsDot(s) => {
            if !(s.is_finite() && s >= 0.0) {
                return Err(Error::invalid(format!(
                    "Sobolev index must be >= 0, got {s}"
                )));
            }
            let spectrum = match field.space() {
                Space::Physical => dft_forward(field)?,
                Space::Frequency => field.clone(),
            };
            let sum: f64 = grid
                .frequencies()
                .iter()
                .zip(spectrum.values())
                .map(|(&xi, z)| {
                    let weight = if s == 0.0 {
                        1.0
                    } else {
                        xi.abs().powf(2.0 * s)
                    };
                    weight * z.norm_sqr()
                })
                .sum();
            Ok((grid.dxi() * sum).sqrt())
        }
        NormKind::L2Weighted(k) => {
            if !k.is_finite() {
                return Err(Error::invalid("weight exponent must be finite"));
            }
            if field.space() != Space::Physical {
                return Err(Error::invalid("weighted norm is defined in physical space"));
            }
            let sum: f64 = grid
                .points()
                .iter()
                .zip(field.values())
                .map(|(&x, z)| (1.0 + x * x).powf(k) * z.norm_sqr())
                .sum();
            Ok((grid.dx() * sum).sqrt())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_grid() -> Grid1D {
        Grid1D::periodic(256, 2.0 * PI).unwrap()
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(Grid1D::periodic(100, 1.0).is_err());
        assert!(Grid1D::periodic(64, 0.0).is_err());
        assert!(Grid1D::periodic(64, f64::NAN).is_err());
    }

    #[test]
    fn lattice_matches_definition() {
        let g = Grid1D::default();
        assert_eq!(g.n_points(), 1 << 14);
        assert!((g.dx() * g.n_points() as f64 - 4.0 * PI).abs() < 1e-12);
        let xi = g.frequencies();
        assert_eq!(xi.len(), g.n_points());
        assert!((xi[0] + 8192.0 * 0.5).abs() < 1e-9);
        assert_eq!(xi[8192], 0.0);
        assert!(xi.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn dirichlet_points_are_interior() {
        let g = Grid1D::dirichlet(16, 1.0).unwrap();
        let x = g.points();
        assert_eq!(x.len(), 15);
        assert!((x[0] + 1.0 - g.dx()).abs() < 1e-15);
        assert!((x[14] - 1.0 + g.dx()).abs() < 1e-15);
        assert!(Fourier::new(g).is_err());
    }

    #[test]
    fn zero_field_transforms_to_zero() {
        let g = small_grid();
        let spec = dft_forward(&Field::zeros(g)).unwrap();
        assert!(spec.values().iter().all(|z| z.norm() == 0.0));
        assert_eq!(discrete_norm(&Field::zeros(g), NormKind::L2).unwrap(), 0.0);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let g = small_grid();
        assert!(Field::from_real(g, &[1.0; 10]).is_err());
    }

    #[test]
    fn lattice_mode_is_a_single_spike() {
        let g = small_grid();
        let m = 7i64;
        let xi_m = m as f64 * g.dxi();
        let field = Field::new(
            g,
            Space::Physical,
            g.points()
                .iter()
                .map(|&x| Complex64::from_polar(1.0, xi_m * x))
                .collect(),
        )
        .unwrap();
        let spec = dft_forward(&field).unwrap();
        let peak = g.dx() * g.n_points() as f64 / (2.0 * PI).sqrt();
        let idx = (m + g.n_points() as i64 / 2) as usize;
        for (i, z) in spec.values().iter().enumerate() {
            if i == idx {
                assert!((z.norm() - peak).abs() < 1e-10 * peak);
            } else {
                assert!(z.norm() < 1e-10, "leak {} at {i}", z.norm());
            }
        }
    }

    #[test]
    fn gaussian_is_its_own_transform() {
        let g = Grid1D::default();
        let u = Field::from_fn(g, |x| (-x * x / 2.0).exp());
        let spec = dft_forward(&u).unwrap();
        let mut max_err: f64 = 0.0;
        for (&xi, z) in g.frequencies().iter().zip(spec.values()) {
            if xi.abs() <= 20.0 {
                max_err = max_err.max((z - Complex64::new((-xi * xi / 2.0).exp(), 0.0)).norm());
            }
        }
        assert!(max_err < 1e-8, "max error {max_err:e}");
    }

    #[test]
    fn gaussian_direct_quadrature_matches_fft() {
        // Off-lattice evaluation agrees with the FFT on lattice points.
        let g = small_grid();
        let u = Field::from_fn(g, |x| (-x * x).exp() * (1.0 + 0.3 * x));
        let spec = dft_forward(&u).unwrap();
        let freqs = g.frequencies();
        let picks = [128usize, 131, 140, 200];
        let xi: Vec<f64> = picks.iter().map(|&i| freqs[i]).collect();
        let direct = dft_at(&u, &xi).unwrap();
        for (d, &i) in direct.iter().zip(&picks) {
            assert!((d - spec.values()[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn gaussian_l2_norm() {
        let u = Field::from_fn(Grid1D::default(), |x| (-x * x / 2.0).exp());
        let norm = discrete_norm(&u, NormKind::L2).unwrap();
        assert!((norm - PI.powf(0.25)).abs() < 1e-6);
    }

    #[test]
    fn spectral_second_derivative_of_lattice_mode() {
        let g = small_grid();
        let m = 5.0;
        let k = m * g.dxi();
        let u = Field::new(
            g,
            Space::Physical,
            g.points()
                .iter()
                .map(|&x| Complex64::from_polar(1.0, k * x))
                .collect(),
        )
        .unwrap();
        let d2 = spectral_derivative(&u, 2).unwrap();
        for (a, b) in d2.values().iter().zip(u.values()) {
            assert!((a + b * k * k).norm() < 1e-11);
        }
    }

    #[test]
    fn norm_errors() {
        let g = small_grid();
        let u = Field::from_fn(g, |x| x.sin());
        assert!(discrete_norm(&u, NormKind::HsDot(-1.0)).is_err());
        let bad = u.map(|_| Complex64::new(f64::NAN, 0.0));
        assert!(discrete_norm(&bad, NormKind::L2).is_err());
    }

    #[test]
    fn weighted_norm_dominates_plain_norm() {
        let u = Field::from_fn(small_grid(), |x| (-x * x).exp());
        let plain = discrete_norm(&u, NormKind::L2).unwrap();
        let weighted = discrete_norm(&u, NormKind::L2Weighted(2.0)).unwrap();
        assert!(weighted > plain);
        assert_eq!(discrete_norm(&u, NormKind::L2Weighted(0.0)).unwrap(), plain);
    }

    #[test]
    fn dirichlet_periodic_lift_roundtrip() {
        let p = small_grid();
        let d = p.with_boundary(Boundary::Dirichlet);
        let u = Field::from_fn(d, |x| x.cos());
        let lifted = u.dirichlet_to_periodic(1.0).unwrap();
        assert_eq!(lifted.len(), p.n_points());
        assert_eq!(lifted.values()[0].re, 1.0);
        assert_eq!(lifted.periodic_to_dirichlet().unwrap(), u);
    }

    fn random_field() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 256)
    }

    proptest! {
        #[test]
        fn roundtrip_is_identity(vals in random_field()) {
            let g = small_grid();
            let u = Field::new(g, Space::Physical, vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap();
            let back = dft_backward(&dft_forward(&u).unwrap()).unwrap();
            let scale = u.max_abs().max(1e-300);
            for (a, b) in back.values().iter().zip(u.values()) {
                prop_assert!((a - b).norm() <= 1e-12 * scale);
            }
        }

        #[test]
        fn plancherel(vals in random_field()) {
            let g = small_grid();
            let u = Field::new(g, Space::Physical, vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap();
            let x_norm = discrete_norm(&u, NormKind::L2).unwrap();
            let xi_norm = discrete_norm(&dft_forward(&u).unwrap(), NormKind::L2).unwrap();
            let hs0 = discrete_norm(&u, NormKind::HsDot(0.0)).unwrap();
            prop_assert!((x_norm - xi_norm).abs() <= 1e-10 * x_norm);
            prop_assert!((x_norm - hs0).abs() <= 1e-10 * x_norm);
        }
    }
}
