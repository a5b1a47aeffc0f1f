//! ε-corrected stationary solutions `u_ε = u₀ + v`.
//!
//! With `a = (2σ+1)u₀^{2σ} - 3P` and `R` the Taylor remainder of
//! `y ↦ y^{2σ+1}` at `u₀`, the correction solves
//!
//! ```text
//! (-ε²Δ_h + a) v_{n+1} = ε²Δ_h u₀ - R(u₀, v_n),    v_0 = 0
//! ```
//!
//! on a Dirichlet grid whose boundary carries the profile's far-field value.
//! In focusing mode `a` and `R` change sign.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forcing::Regime;
use crate::grid::{Boundary, Field, Space};
use crate::profiles::AlgebraicProfile;
use crate::tridiag;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub epsilon: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    /// Bound on `‖v‖_∞`; `None` means `10³ · max|RHS|`.
    pub divergence_guard: Option<f64>,
}

impl SolverConfig {
    pub fn new(epsilon: f64) -> Result<Self> {
        let config = Self {
            epsilon,
            ..Self::default()
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::invalid(format!(
                "epsilon must be finite and >= 0, got {}",
                self.epsilon
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be positive"));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(Error::invalid(format!(
                "tolerance must lie in (0, 1), got {}",
                self.tolerance
            )));
        }
        if let Some(g) = self.divergence_guard {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::invalid(format!(
                    "divergence_guard must be > 0, got {g}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            max_iterations: 200,
            tolerance: 1e-12,
            divergence_guard: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StationaryResult {
    /// On the same grid as the input profile.
    pub u_eps: Field,
    /// `u_eps - u₀`.
    pub v: Field,
    pub iterations: usize,
    /// Max-norm of the full nonlinear residual.
    pub residual: f64,
    pub converged: bool,
    /// `‖v_{n+1} - v_n‖_∞` per iteration.
    pub increments: Vec<f64>,
}

impl StationaryResult {
    pub fn v_max(&self) -> f64 {
        self.v.max_abs()
    }
}

/// `(u_{j-1} - 2u_j + u_{j+1}) / dx²` on the interior of a Dirichlet grid,
/// with `boundary_value` standing in for the missing neighbours.
pub fn fd_laplacian_apply(field: &Field, boundary_value: f64) -> Result<Field> {
    let grid = *field.grid();
    if grid.boundary() != Boundary::Dirichlet || field.space() != Space::Physical {
        return Err(Error::invalid(
            "finite-difference Laplacian needs a physical field on a Dirichlet grid",
        ));
    }
    let u = field.values();
    let b = Complex64::new(boundary_value, 0.0);
    let n = u.len();
    let inv = 1.0 / (grid.dx() * grid.dx());
    let out = (0..n)
        .map(|j| {
            let left = if j == 0 { b } else { u[j - 1] };
            let right = if j + 1 == n { b } else { u[j + 1] };
            (left - 2.0 * u[j] + right) * inv
        })
        .collect();
    Field::new(grid, Space::Physical, out)
}

/// Solves `(-ε²Δ_h + a) w = rhs` with `w = 0` on the boundary.
pub fn solve_linearized(a_diag: &Field, epsilon: f64, rhs: &Field) -> Result<Field> {
    a_diag.check_compatible(rhs)?;
    let grid = *rhs.grid();
    if grid.boundary() != Boundary::Dirichlet || rhs.space() != Space::Physical {
        return Err(Error::invalid(
            "linearized solve needs physical fields on a Dirichlet grid",
        ));
    }
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::invalid(format!(
            "epsilon must be finite and >= 0, got {epsilon}"
        )));
    }
    if !a_diag.is_real() || !rhs.is_real() {
        return Err(Error::invalid("linearized solve is real-valued"));
    }
    let a = a_diag.re();
    let min_coefficient = a.iter().copied().fold(f64::INFINITY, f64::min);
    if min_coefficient.is_nan() || min_coefficient <= 0.0 {
        return Err(Error::LostEllipticity { min_coefficient });
    }
    let r = rhs.re();
    let k = epsilon * epsilon / (grid.dx() * grid.dx());
    let diag: Vec<f64> = a.iter().map(|a| a + 2.0 * k).collect();
    let off = vec![-k; a.len()];
    let w = tridiag::solve(&off, &diag, &off, &r)?;
    let rhs_norm = r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let residual = tridiag::residual(&off, &diag, &off, &w, &r);
    if residual > 1e-10 * rhs_norm {
        return Err(Error::InaccurateSolve { residual, rhs_norm });
    }
    Field::from_real(grid, &w)
}

/// `(u₀ + v)^{2σ+1} - u₀^{2σ+1} - (2σ+1)u₀^{2σ}v`, expanded binomially.
fn taylor_remainder(u0: f64, v: f64, degree: u32) -> f64 {
    let mut binom = degree as f64 * (degree as f64 - 1.0) / 2.0;
    let mut sum = 0.0;
    for l in 2..=degree {
        sum += binom * u0.powi((degree - l) as i32) * v.powi(l as i32);
        binom *= (degree - l) as f64 / (l + 1) as f64;
    }
    sum
}

/// Linear coefficient `a = (2σ+1)u₀^{2σ} - 3P`, sign-flipped when focusing.
pub fn linear_coefficient(profile: &AlgebraicProfile) -> Field {
    let spec = profile.spec();
    let degree = spec.degree() as i32;
    let shift = match spec.regime() {
        Regime::Zero => 0.0,
        Regime::One => 3.0,
    };
    let sign = if spec.is_focusing() { -1.0 } else { 1.0 };
    profile
        .values()
        .map(|u| Complex64::new(sign * (degree as f64 * u.re.powi(degree - 1) - shift), 0.0))
}

pub fn stationary_fixed_point(
    profile: &AlgebraicProfile,
    config: &SolverConfig,
) -> Result<StationaryResult> {
    config.validate()?;
    let spec = profile.spec();
    if !profile.values().is_real() {
        return Err(Error::invalid("algebraic profile must be real"));
    }
    let input_grid = *profile.grid();
    let to_interior = |f: Field| -> Result<Field> {
        match input_grid.boundary() {
            Boundary::Dirichlet => Ok(f),
            Boundary::Periodic => f.periodic_to_dirichlet(),
        }
    };
    let far = profile.far_field();
    let u0 = to_interior(profile.values().clone())?;
    let rhs = to_interior(profile.source()?)?;
    let a = to_interior(linear_coefficient(profile))?;
    let grid = *u0.grid();

    let sign = if spec.is_focusing() { -1.0 } else { 1.0 };
    let degree = spec.degree();
    let shift = match spec.regime() {
        Regime::Zero => 0.0,
        Regime::One => 3.0,
    };
    let eps2 = config.epsilon * config.epsilon;
    let u0_re = u0.re();
    let lap_u0 = fd_laplacian_apply(&u0, far)?.re();
    let guard = config
        .divergence_guard
        .unwrap_or_else(|| 1e3 * rhs.max_abs().max(1.0));

    let mut v = vec![0.0; u0_re.len()];
    let mut increments = Vec::new();
    let mut converged = false;
    for iteration in 1..=config.max_iterations {
        let g: Vec<f64> = u0_re
            .iter()
            .zip(&v)
            .zip(&lap_u0)
            .map(|((&u, &v), &l)| eps2 * l - sign * taylor_remainder(u, v, degree))
            .collect();
        let next = solve_linearized(&a, config.epsilon, &Field::from_real(grid, &g)?)?.re();
        let increment = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let norm = next.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        v = next;
        increments.push(increment);
        if !norm.is_finite() || norm > guard {
            return Err(Error::Divergence {
                iteration,
                norm,
                guard,
            });
        }
        if increment < config.tolerance {
            converged = true;
            break;
        }
    }

    let u: Vec<f64> = u0_re.iter().zip(&v).map(|(a, b)| a + b).collect();
    let lap_u = fd_laplacian_apply(&Field::from_real(grid, &u)?, far)?.re();
    let residual = u
        .iter()
        .zip(&lap_u)
        .zip(rhs.re())
        .map(|((&u, &l), r)| (-eps2 * l + sign * (u.powi(degree as i32) - shift * u - r)).abs())
        .fold(0.0, f64::max);

    // v vanishes on the boundary, so the periodic point x = -L keeps u₀.
    let v = Field::from_real(grid, &v)?;
    let v = match input_grid.boundary() {
        Boundary::Dirichlet => v,
        Boundary::Periodic => v.dirichlet_to_periodic(0.0)?,
    };
    let u_eps = profile.values().add(&v)?;
    Ok(StationaryResult {
        u_eps,
        v,
        iterations: increments.len(),
        residual,
        converged,
        increments,
    })
}

/// One solve per `epsilon`, run in parallel; results keep the input order.
pub fn sweep(
    profile: &AlgebraicProfile,
    base: &SolverConfig,
    epsilons: &[f64],
) -> Vec<Result<StationaryResult>> {
    epsilons
        .par_iter()
        .map(|&epsilon| stationary_fixed_point(profile, &SolverConfig { epsilon, ..*base }))
        .collect()
}
