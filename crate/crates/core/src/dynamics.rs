//! Split-step integration of
//!
//! ```text
//! i u_t + ε² u_xx (+ iνε² u_xx) = ±|u|^{2σ} u - f(t, x)
//! ```
//!
//! on a periodic grid, with `f = f_δ(x)` or `f = 2Q(x) e^{∓3it}`, and the
//! diagnostics tracked along a trajectory.

use log::warn;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::cascade_fit::{default_window, DEFAULT_XI0};
use crate::error::{Error, Result};
use crate::forcing::{eval_f, eval_q, ForcingSpec, Regime};
use crate::grid::{Boundary, Field, Fourier, Grid1D, Space};
use crate::profiles::CardanoBranch;

/// Amplitudes beyond this are treated as blow-up.
const BLOW_UP_AMPLITUDE: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reference {
    /// `u_ε`, constant in time.
    StationaryProfile,
    /// `U_k e^{∓3it}`.
    RotatingCardano(CardanoBranch),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub t_final: f64,
    pub nu: f64,
    pub record_every: usize,
    pub reference: Reference,
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_final.is_finite() && self.t_final >= self.dt) {
            return Err(Error::invalid(format!(
                "t_final must be finite and >= dt, got {} (dt = {})",
                self.t_final, self.dt
            )));
        }
        if !(self.nu.is_finite() && self.nu >= 0.0) {
            return Err(Error::invalid(format!("nu must be >= 0, got {}", self.nu)));
        }
        if self.record_every == 0 {
            return Err(Error::invalid("record_every must be positive"));
        }
        Ok(())
    }

    /// Number of steps; `dt` is adjusted so they land exactly on `t_final`.
    pub fn steps(&self) -> usize {
        ((self.t_final / self.dt).round() as usize).max(1)
    }
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_final: 1.0,
            nu: 0.0,
            record_every: 10,
            reference: Reference::StationaryProfile,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub l2_v: Vec<f64>,
    /// Only for time-independent forcing.
    pub energy: Option<Vec<f64>>,
    /// Only for σ = 1 with a stationary reference.
    pub renorm_energy: Option<Vec<f64>>,
    pub mass: Vec<f64>,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TimeForcing {
    None,
    Static(Vec<f64>),
    /// `amplitude(x) e^{-i frequency t}`.
    Rotating {
        amplitude: Vec<f64>,
        frequency: f64,
    },
}

impl TimeForcing {
    /// `f_δ` for `P = 0`; `2Q e^{-3it}` for `P = 1`, or `2Q e^{3it}` when focusing.
    pub fn from_spec(spec: &ForcingSpec, grid: &Grid1D) -> Result<Self> {
        match spec.regime() {
            Regime::Zero => Ok(TimeForcing::Static(eval_f(spec, grid)?.re())),
            Regime::One => Ok(TimeForcing::Rotating {
                amplitude: eval_q(spec, grid)?
                    .re()
                    .into_iter()
                    .map(|q| 2.0 * q)
                    .collect(),
                frequency: rotation_frequency(spec),
            }),
        }
    }

    fn len(&self) -> Option<usize> {
        match self {
            TimeForcing::None => None,
            TimeForcing::Static(f) => Some(f.len()),
            TimeForcing::Rotating { amplitude, .. } => Some(amplitude.len()),
        }
    }
}

fn rotation_frequency(spec: &ForcingSpec) -> f64 {
    if spec.is_focusing() {
        -3.0
    } else {
        3.0
    }
}

/// Strang splitting `L(dt/2) N(dt) L(dt/2)` with cached FFT plans.
pub struct SplitStepper {
    fourier: Fourier,
    half_step: Vec<Complex64>,
    dt: f64,
    sigma: u32,
    sign: f64,
    forcing: TimeForcing,
    linear: bool,
    nonlinear: bool,
}

impl SplitStepper {
    pub fn new(
        grid: Grid1D,
        forcing: TimeForcing,
        dt: f64,
        epsilon: f64,
        nu: f64,
        sigma: u32,
        focusing: bool,
    ) -> Result<Self> {
        if grid.boundary() != Boundary::Periodic {
            return Err(Error::invalid("time stepping needs a periodic grid"));
        }
        if !(dt.is_finite() && dt > 0.0)
            || !(epsilon.is_finite() && epsilon >= 0.0)
            || !(nu.is_finite() && nu >= 0.0)
        {
            return Err(Error::invalid(
                "dt must be > 0, epsilon and nu finite and >= 0",
            ));
        }
        if sigma == 0 {
            return Err(Error::invalid("sigma must be >= 1"));
        }
        if let Some(n) = forcing.len() {
            if n != grid.n_points() {
                return Err(Error::invalid("forcing length does not match the grid"));
            }
        }
        let e2 = epsilon * epsilon;
        let half_step = grid
            .frequencies_fft_order()
            .into_iter()
            .map(|xi| (Complex64::new(-nu, -1.0) * (e2 * xi * xi * dt / 2.0)).exp())
            .collect();
        Ok(Self {
            fourier: Fourier::new(grid)?,
            half_step,
            dt,
            sigma,
            sign: if focusing { -1.0 } else { 1.0 },
            forcing,
            linear: true,
            nonlinear: true,
        })
    }

    pub fn from_spec(
        grid: Grid1D,
        spec: &ForcingSpec,
        dt: f64,
        epsilon: f64,
        nu: f64,
    ) -> Result<Self> {
        Self::new(
            grid,
            TimeForcing::from_spec(spec, &grid)?,
            dt,
            epsilon,
            nu,
            spec.sigma(),
            spec.is_focusing(),
        )
    }

    /// Test hook: skip the dispersive substep.
    pub fn without_linear(mut self) -> Self {
        self.linear = false;
        self
    }

    /// Test hook: skip the nonlinear and forcing substep.
    pub fn without_nonlinear(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances `u` from `t` to `t + dt` in place.
    pub fn step(&mut self, u: &mut [Complex64], t: f64) {
        if self.linear {
            self.fourier.apply_multiplier(u, &self.half_step);
        }
        if self.nonlinear {
            self.nonlinear_substep(u, t);
        }
        if self.linear {
            self.fourier.apply_multiplier(u, &self.half_step);
        }
    }

    fn nonlinear_substep(&self, u: &mut [Complex64], t: f64) {
        let (dt, s, sigma) = (self.dt, self.sign, self.sigma as i32);
        let rhs = |z: Complex64, f: Complex64| -> Complex64 {
            Complex64::new(0.0, -1.0) * (s * z.norm_sqr().powi(sigma) * z - f)
        };
        match &self.forcing {
            TimeForcing::None => {
                for z in u.iter_mut() {
                    *z *= Complex64::from_polar(1.0, -s * z.norm_sqr().powi(sigma) * dt);
                }
            }
            TimeForcing::Static(f) => {
                for (z, &f) in u.iter_mut().zip(f) {
                    *z = rk4(*z, dt, |w, _| rhs(w, Complex64::new(f, 0.0)));
                }
            }
            TimeForcing::Rotating {
                amplitude,
                frequency,
            } => {
                let phase = |tau: f64| Complex64::from_polar(1.0, -frequency * (t + tau));
                let phases = [phase(0.0), phase(dt / 2.0), phase(dt)];
                for (z, &q) in u.iter_mut().zip(amplitude) {
                    *z = rk4(*z, dt, |w, stage| rhs(w, q * phases[stage]));
                }
            }
        }
    }
}

/// Classical RK4; `f(u, stage)` with stage 0, 1, 2 for `t`, `t + h/2`, `t + h`.
fn rk4(u: Complex64, h: f64, f: impl Fn(Complex64, usize) -> Complex64) -> Complex64 {
    let k1 = f(u, 0);
    let k2 = f(u + k1 * (h / 2.0), 1);
    let k3 = f(u + k2 * (h / 2.0), 1);
    let k4 = f(u + k3 * h, 2);
    u + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0)
}

/// One Strang step with a freshly planned stepper.
#[allow(clippy::too_many_arguments)]
pub fn step_strang(
    u: &Field,
    forcing: &TimeForcing,
    t: f64,
    dt: f64,
    epsilon: f64,
    nu: f64,
    sigma: u32,
    focusing: bool,
) -> Result<Field> {
    if u.space() != Space::Physical {
        return Err(Error::invalid("step_strang expects a physical-space field"));
    }
    let mut stepper =
        SplitStepper::new(*u.grid(), forcing.clone(), dt, epsilon, nu, sigma, focusing)?;
    let mut values = u.values().to_vec();
    stepper.step(&mut values, t);
    if !all_finite(&values) {
        return Err(Error::BlowUp {
            time: t + dt,
            record: Box::default(),
        });
    }
    Field::new(*u.grid(), Space::Physical, values)
}

fn all_finite(u: &[Complex64]) -> bool {
    u.iter()
        .all(|z| z.re.is_finite() && z.im.is_finite() && z.norm() < BLOW_UP_AMPLITUDE)
}

fn l2(grid: &Grid1D, u: impl Iterator<Item = Complex64>) -> f64 {
    (grid.dx() * u.map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
}

/// `‖∂_x u‖²_{L²}`, computed on the frequency side.
fn gradient_sq(fourier: &mut Fourier, u: &Field) -> Result<f64> {
    let spectrum = fourier.forward(u)?;
    let grid = *u.grid();
    Ok(grid.dxi()
        * grid
            .frequencies()
            .iter()
            .zip(spectrum.values())
            .map(|(xi, z)| xi * xi * z.norm_sqr())
            .sum::<f64>())
}

fn check_periodic_physical(u: &Field) -> Result<()> {
    if u.grid().boundary() != Boundary::Periodic || u.space() != Space::Physical {
        return Err(Error::invalid(
            "expected a physical field on a periodic grid",
        ));
    }
    Ok(())
}

/// `ε²/2 ‖∂u‖² ± ∫|u|^{2σ+2}/(2σ+2) - Re∫f ū` for time-independent `f`.
pub fn energy(u: &Field, spec: &ForcingSpec, epsilon: f64) -> Result<f64> {
    check_periodic_physical(u)?;
    if spec.regime() != Regime::Zero {
        return Err(Error::WrongRegime(
            "the energy needs time-independent forcing (P = 0)".into(),
        ));
    }
    let f = eval_f(spec, u.grid())?;
    let mut fourier = Fourier::new(*u.grid())?;
    energy_with(&mut fourier, u, &f.re(), spec, epsilon)
}

fn energy_with(
    fourier: &mut Fourier,
    u: &Field,
    f: &[f64],
    spec: &ForcingSpec,
    epsilon: f64,
) -> Result<f64> {
    let p = 2 * spec.sigma() as i32 + 2;
    let sign = if spec.is_focusing() { -1.0 } else { 1.0 };
    let dx = u.grid().dx();
    let potential: f64 = u
        .values()
        .iter()
        .zip(f)
        .map(|(z, f)| sign * z.norm().powi(p) / p as f64 - f * z.re)
        .sum();
    Ok(epsilon * epsilon / 2.0 * gradient_sq(fourier, u)? + dx * potential)
}

/// Renormalized energy of `v = u - u_ε` for the cubic defocusing equation:
///
/// ```text
/// ε²/2 ‖∂v‖² + ½‖u_ε v‖² + ∫u_ε²(Re v)² + Re∫|v|² v u_ε + ¼‖v‖⁴_{L⁴}
/// ```
///
/// This is `E(u_ε + v) - E(u_ε)` and is bounded below by
/// `ε²/2 ‖∂v‖² + ½∫u_ε²|v|²`.
pub fn renormalized_energy(v: &Field, u_eps: &Field, epsilon: f64) -> Result<f64> {
    check_periodic_physical(v)?;
    v.check_compatible(u_eps)?;
    if !u_eps.is_real() {
        return Err(Error::invalid("the stationary solution must be real"));
    }
    let mut fourier = Fourier::new(*v.grid())?;
    renormalized_energy_with(&mut fourier, v, u_eps, epsilon)
}

fn renormalized_energy_with(
    fourier: &mut Fourier,
    v: &Field,
    u_eps: &Field,
    epsilon: f64,
) -> Result<f64> {
    let dx = v.grid().dx();
    let local: f64 = v
        .values()
        .iter()
        .zip(u_eps.values())
        .map(|(v, u)| {
            let (u, m) = (u.re, v.norm_sqr());
            0.5 * u * u * m + u * u * v.re * v.re + m * v.re * u + 0.25 * m * m
        })
        .sum();
    Ok(epsilon * epsilon / 2.0 * gradient_sq(fourier, v)? + dx * local)
}

/// Random field with Fourier support in `|ξ| ≤ xi_max`, scaled to `‖v‖_{L²} = l2_norm`.
pub fn band_limited_perturbation(
    grid: Grid1D,
    xi_max: f64,
    l2_norm: f64,
    seed: u64,
) -> Result<Field> {
    if grid.boundary() != Boundary::Periodic {
        return Err(Error::invalid("perturbations live on a periodic grid"));
    }
    if !(xi_max > 0.0 && l2_norm.is_finite() && l2_norm >= 0.0) {
        return Err(Error::invalid("need xi_max > 0 and a finite l2_norm >= 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf: Vec<Complex64> = grid
        .frequencies_fft_order()
        .into_iter()
        .map(|xi| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            if xi.abs() <= xi_max {
                Complex64::new(re, im)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let mut fourier = Fourier::new(grid)?;
    fourier.inverse_raw(&mut buf);
    let norm = l2(&grid, buf.iter().copied());
    if norm == 0.0 {
        return Err(Error::invalid("band contains no lattice frequencies"));
    }
    buf.iter_mut().for_each(|z| *z *= l2_norm / norm);
    Field::new(grid, Space::Physical, buf)
}

/// Runs the trajectory from `initial`. `reference` is `u_ε` for a stationary
/// reference or `U_k` for a rotating one.
pub fn evolve(
    initial: &Field,
    reference: &Field,
    config: &EvolutionConfig,
    spec: &ForcingSpec,
    epsilon: f64,
) -> Result<TrajectoryRecord> {
    config.validate()?;
    check_periodic_physical(initial)?;
    initial.check_compatible(reference)?;
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::invalid(format!(
            "epsilon must be finite and >= 0, got {epsilon}"
        )));
    }
    let grid = *initial.grid();
    let steps = config.steps();
    let dt = config.t_final / steps as f64;

    if let Ok(window) = default_window(spec.delta(), DEFAULT_XI0) {
        let xi = window.hi.min(grid.max_frequency());
        if dt * epsilon * epsilon * xi * xi > std::f64::consts::PI {
            warn!("dt = {dt:e} under-resolves the linear phase at xi = {xi:.3}");
        }
    }

    let rotation = match config.reference {
        Reference::StationaryProfile => None,
        Reference::RotatingCardano(_) => {
            if spec.regime() != Regime::One {
                return Err(Error::WrongRegime(
                    "a rotating Cardano reference needs P = 1".into(),
                ));
            }
            Some(rotation_frequency(spec))
        }
    };
    let static_f = match spec.regime() {
        Regime::Zero => Some(eval_f(spec, &grid)?.re()),
        Regime::One => None,
    };
    let track_renorm =
        rotation.is_none() && spec.sigma() == 1 && !spec.is_focusing() && reference.is_real();

    let mut stepper = SplitStepper::from_spec(grid, spec, dt, epsilon, config.nu)?;
    let mut fourier = Fourier::new(grid)?;
    let mut record = TrajectoryRecord {
        energy: static_f.as_ref().map(|_| Vec::new()),
        renorm_energy: track_renorm.then(Vec::new),
        ..Default::default()
    };

    let mut u = initial.values().to_vec();
    let mut observe = |u: &[Complex64], t: f64, record: &mut TrajectoryRecord| -> Result<()> {
        let phase = rotation.map_or(Complex64::new(1.0, 0.0), |w| {
            Complex64::from_polar(1.0, -w * t)
        });
        let v: Vec<Complex64> = u
            .iter()
            .zip(reference.values())
            .map(|(a, r)| a - r * phase)
            .collect();
        let u_field = Field::new(grid, Space::Physical, u.to_vec())?;
        record.times.push(t);
        record.l2_v.push(l2(&grid, v.iter().copied()));
        record.mass.push(l2(&grid, u.iter().copied()));
        if let (Some(f), Some(e)) = (&static_f, record.energy.as_mut()) {
            e.push(energy_with(&mut fourier, &u_field, f, spec, epsilon)?);
        }
        if let Some(e) = record.renorm_energy.as_mut() {
            let v = Field::new(grid, Space::Physical, v)?;
            e.push(renormalized_energy_with(
                &mut fourier,
                &v,
                reference,
                epsilon,
            )?);
        }
        Ok(())
    };

    observe(&u, 0.0, &mut record)?;
    for n in 0..steps {
        let t = n as f64 * dt;
        stepper.step(&mut u, t);
        let t_next = (n + 1) as f64 * dt;
        if !all_finite(&u) {
            return Err(Error::BlowUp {
                time: t_next,
                record: Box::new(record),
            });
        }
        if (n + 1) % config.record_every == 0 || n + 1 == steps {
            observe(&u, t_next, &mut record)?;
        }
    }
    Ok(record)
}

/// `A e^{Ct}` bound on a trajectory norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub amplitude: f64,
    pub rate: f64,
    pub r_squared: f64,
    /// The samples never increase, so any `C ≥ 0` works.
    pub non_increasing: bool,
}

/// Fits `log` of the running maximum of `values` linearly in `t` to get `C`,
/// then takes the smallest `A` with `values ≤ A e^{Ct}`.
pub fn fit_envelope(times: &[f64], values: &[f64]) -> Result<Envelope> {
    if times.len() != values.len() {
        return Err(Error::invalid("times and values differ in length"));
    }
    if times.len() < 3 {
        return Err(Error::InsufficientData {
            found: times.len(),
            required: 3,
        });
    }
    if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::invalid("envelope fit needs finite positive samples"));
    }
    let non_increasing = values.windows(2).all(|w| w[1] <= w[0]);
    let mut running = Vec::with_capacity(values.len());
    let mut m = 0.0f64;
    for &v in values {
        m = m.max(v);
        running.push(m.ln());
    }
    let n = times.len() as f64;
    let mt = times.iter().sum::<f64>() / n;
    let my = running.iter().sum::<f64>() / n;
    let stt: f64 = times.iter().map(|t| (t - mt).powi(2)).sum();
    let sty: f64 = times
        .iter()
        .zip(&running)
        .map(|(t, y)| (t - mt) * (y - my))
        .sum();
    let rate = sty / stt;
    let intercept = my - rate * mt;
    let ss_tot: f64 = running.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = times
        .iter()
        .zip(&running)
        .map(|(t, y)| (y - intercept - rate * t).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    let amplitude = times
        .iter()
        .zip(values)
        .map(|(t, v)| v * (-rate * t).exp())
        .fold(0.0, f64::max);
    Ok(Envelope {
        amplitude,
        rate,
        r_squared,
        non_increasing,
    })
}
