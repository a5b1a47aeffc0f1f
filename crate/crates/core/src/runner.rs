//! Experiment configuration, orchestration and CSV/SVG output.
//!
//! Every float is written with 17 significant digits and every file is
//! written to a temporary name first and then renamed into place.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use rayon::prelude::*;
use serde::Deserialize;

use crate::cascade_fit::{
    default_window, fit_field_spectrum, fit_power_law, positive_spectrum, weighted_deviation,
    SpectrumEstimate, Window,
};
use crate::dynamics::{
    band_limited_perturbation, evolve, fit_envelope, EvolutionConfig, Reference, TrajectoryRecord,
};
use crate::error::{Error, Result};
use crate::forcing::{series_spectrum, ForcingSpec, Regime};
use crate::grid::{dft_forward, Field, Grid1D};
use crate::profiles::{profile, AlgebraicProfile, CardanoBranch};
use crate::stationary::{stationary_fixed_point, sweep, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Stationary,
    Evolve,
    Sweep,
    Fit,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForcingConfig {
    pub p: u8,
    pub delta: f64,
    pub sigma: u32,
    pub beta: f64,
    pub focusing: bool,
    /// Cardano branch for `p = 1`.
    pub branch: usize,
}

impl Default for ForcingConfig {
    fn default() -> Self {
        Self {
            p: 0,
            delta: 2f64.powi(-14),
            sigma: 1,
            beta: 1.0,
            focusing: false,
            branch: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n_points: usize,
    pub half_length: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n_points: 1 << 14,
            half_length: 2.0 * std::f64::consts::PI,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    pub xi0: f64,
    /// Upper window edge; `0.3/√δ` when absent.
    pub xi_hi: Option<f64>,
    pub samples: usize,
    pub series_tol: f64,
    /// Input CSV for the `fit` command.
    pub input: Option<PathBuf>,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            xi0: 2.0,
            xi_hi: None,
            samples: crate::cascade_fit::DENSE_SAMPLES,
            series_tol: 1e-14,
            input: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    /// Explicit ε values; when empty, `ε = 2^{-j}δ` for `j < epsilon_steps`.
    pub epsilons: Vec<f64>,
    pub epsilon_steps: u32,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub divergence_guard: Option<f64>,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            epsilons: Vec::new(),
            epsilon_steps: 7,
            max_iterations: 200,
            tolerance: 1e-12,
            divergence_guard: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionSection {
    /// Defaults to `δ/16`.
    pub epsilon: Option<f64>,
    pub dt: f64,
    pub t_final: f64,
    pub nu: f64,
    pub record_every: usize,
    /// `‖v₀‖_{L²} = perturbation · ε^{1/2}`.
    pub perturbation: f64,
}

impl Default for EvolutionSection {
    fn default() -> Self {
        Self {
            epsilon: None,
            dt: 1e-3,
            t_final: 1.0,
            nu: 0.0,
            record_every: 10,
            perturbation: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub deltas: Vec<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            deltas: vec![2f64.powi(-6), 2f64.powi(-10), 2f64.powi(-14)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub output_dir: PathBuf,
    pub emit_svg: bool,
    pub seed: u64,
    pub forcing: ForcingConfig,
    pub grid: GridConfig,
    pub fit: FitConfig,
    pub solver: SolverSection,
    pub evolution: EvolutionSection,
    pub sweep: SweepSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("out"),
            emit_svg: false,
            seed: 1,
            forcing: ForcingConfig::default(),
            grid: GridConfig::default(),
            fit: FitConfig::default(),
            solver: SolverSection::default(),
            evolution: EvolutionSection::default(),
            sweep: SweepSection::default(),
        }
    }
}

/// Command-line overrides; `None` leaves the file value alone.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub sigma: Option<u32>,
    pub p: Option<u8>,
    pub n_points: Option<usize>,
    pub half_length: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub svg: bool,
    pub input: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::invalid(format!("config: {}", e.message())))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::InvalidInput(msg) => Error::InvalidInput(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.delta {
            self.forcing.delta = v;
        }
        if let Some(v) = o.epsilon {
            self.solver.epsilons = vec![v];
            self.evolution.epsilon = Some(v);
        }
        if let Some(v) = o.sigma {
            self.forcing.sigma = v;
        }
        if let Some(v) = o.p {
            self.forcing.p = v;
        }
        if let Some(v) = o.n_points {
            self.grid.n_points = v;
        }
        if let Some(v) = o.half_length {
            self.grid.half_length = v;
        }
        if let Some(v) = &o.out {
            self.output_dir = v.clone();
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if o.svg {
            self.emit_svg = true;
        }
        if let Some(v) = &o.input {
            self.fit.input = Some(v.clone());
        }
    }

    pub fn forcing_spec(&self) -> Result<ForcingSpec> {
        let f = &self.forcing;
        let spec = match f.p {
            0 => ForcingSpec::new(Regime::Zero, f.delta, f.sigma)?,
            1 => ForcingSpec::new(Regime::One, f.delta, f.sigma)?,
            p => return Err(Error::invalid(format!("forcing.p must be 0 or 1, got {p}"))),
        };
        Ok(spec.with_beta(f.beta)?.with_focusing(f.focusing))
    }

    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::periodic(self.grid.n_points, self.grid.half_length)
    }

    pub fn branch(&self) -> Result<CardanoBranch> {
        CardanoBranch::from_index(self.forcing.branch)
    }

    pub fn window(&self, delta: f64) -> Result<Window> {
        let window = default_window(delta, self.fit.xi0)?;
        match self.fit.xi_hi {
            Some(hi) => Window::new(self.fit.xi0, hi),
            None => Ok(window),
        }
    }

    pub fn epsilons(&self) -> Vec<f64> {
        if self.solver.epsilons.is_empty() {
            (0..self.solver.epsilon_steps)
                .map(|j| self.forcing.delta * 2f64.powi(-(j as i32)))
                .collect()
        } else {
            self.solver.epsilons.clone()
        }
    }

    pub fn solver_config(&self, epsilon: f64) -> Result<SolverConfig> {
        let config = SolverConfig {
            epsilon,
            max_iterations: self.solver.max_iterations,
            tolerance: self.solver.tolerance,
            divergence_guard: self.solver.divergence_guard,
        };
        config.validate()?;
        Ok(config)
    }

    /// Re-checks every parameter against the constraints of the numerics.
    pub fn validate(&self) -> Result<()> {
        self.forcing_spec()?;
        self.grid()?;
        self.branch()?;
        self.window(self.forcing.delta)?;
        if !(self.fit.samples >= 3) {
            return Err(Error::invalid("fit.samples must be at least 3"));
        }
        if !(self.fit.series_tol > 0.0 && self.fit.series_tol < 1.0) {
            return Err(Error::invalid("fit.series_tol must lie in (0, 1)"));
        }
        for &eps in &self.epsilons() {
            self.solver_config(eps)?;
        }
        if self
            .sweep
            .deltas
            .iter()
            .any(|d| !(d.is_finite() && *d > 0.0))
        {
            return Err(Error::invalid("sweep.deltas must all be > 0"));
        }
        if !(self.evolution.perturbation.is_finite() && self.evolution.perturbation >= 0.0) {
            return Err(Error::invalid("evolution.perturbation must be >= 0"));
        }
        self.evolution_config(CardanoBranch::U1).validate()
    }

    fn evolution_config(&self, branch: CardanoBranch) -> EvolutionConfig {
        EvolutionConfig {
            dt: self.evolution.dt,
            t_final: self.evolution.t_final,
            nu: self.evolution.nu,
            record_every: self.evolution.record_every,
            reference: match self.forcing.p {
                1 => Reference::RotatingCardano(branch),
                _ => Reference::StationaryProfile,
            },
        }
    }
}

/// 0 success, 2 invalid configuration, 3 numerical failure, 4 I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => 4,
        e if e.is_numerical() => 3,
        _ => 2,
    }
}

pub fn run(command: Command, config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    config.validate()?;
    fs::create_dir_all(&config.output_dir).map_err(|e| Error::io(&config.output_dir, e))?;
    match command {
        Command::Spectrum => run_spectrum(config),
        Command::Stationary => run_stationary(config),
        Command::Evolve => run_evolve(config),
        Command::Sweep => run_sweep(config),
        Command::Fit => run_fit(config),
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
    info!("wrote {}", path.display());
    Ok(())
}

fn spectrum_fit(
    profile: &AlgebraicProfile,
    window: Window,
    samples: usize,
) -> Result<SpectrumEstimate> {
    fit_field_spectrum(&profile.fluctuation(), window, samples)
}

pub fn run_spectrum(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let spec = config.forcing_spec()?;
    let grid = config.grid()?;
    let window = config.window(spec.delta())?;
    let profile = profile(&spec, &grid, config.branch()?)?;
    let fit = spectrum_fit(&profile, window, config.fit.samples)?;
    let (xi, magnitude) = positive_spectrum(&dft_forward(&profile.fluctuation())?)?;

    // The series converges slowly at small δ, so it is only summed on the window.
    let series: Vec<Option<f64>> = match spec.regime() {
        Regime::Zero => {
            let inside: Vec<f64> = xi.iter().copied().filter(|&x| window.contains(x)).collect();
            let values = series_spectrum(&spec, &inside, config.fit.series_tol)?;
            let mut it = values.into_iter();
            xi.iter()
                .map(|&x| {
                    if window.contains(x) {
                        it.next().map(f64::abs)
                    } else {
                        None
                    }
                })
                .collect()
        }
        Regime::One => vec![None; xi.len()],
    };

    let mut csv = String::from(
        "xi,abs_uhat_dft,abs_uhat_series,fitted_slope_window_lo,fitted_slope_window_hi,slope,r2\n",
    );
    for ((x, m), s) in xi.iter().zip(&magnitude).zip(&series) {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            num(*x),
            num(*m),
            s.map(num).unwrap_or_default(),
            num(window.lo),
            num(window.hi),
            num(fit.slope),
            num(fit.r_squared)
        );
    }
    let path = config.output_dir.join("spectrum.csv");
    write_atomic(&path, &csv)?;
    let mut written = vec![path];

    if config.emit_svg {
        let data: Vec<(f64, f64)> = xi.iter().copied().zip(magnitude.iter().copied()).collect();
        let line: Vec<(f64, f64)> = [window.lo, window.hi]
            .iter()
            .map(|&x| (x, (fit.intercept + fit.slope * x.ln()).exp()))
            .collect();
        let svg = loglog_svg(&[("|û|", &data), ("fit", &line)]);
        let path = config.output_dir.join("spectrum.svg");
        write_atomic(&path, &svg)?;
        written.push(path);
    }
    Ok(written)
}

pub fn run_stationary(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let spec = config.forcing_spec()?;
    let grid = config.grid()?;
    let window = config.window(spec.delta())?;
    let profile = profile(&spec, &grid, config.branch()?)?;
    let u0_hat = dft_forward(profile.values())?;
    let exponent = spec.cascade_exponent();
    let epsilons = config.epsilons();
    let results = sweep(&profile, &config.solver_config(0.0)?, &epsilons);

    let mut table =
        String::from("epsilon,converged,iterations,residual,v_max,weighted_deviation\n");
    let mut long = String::from("epsilon,xi,weighted_abs_diff\n");
    for (&eps, result) in epsilons.iter().zip(results) {
        match result {
            Ok(r) => {
                let u_hat = dft_forward(&r.u_eps)?;
                let dev = weighted_deviation(&u_hat, &u0_hat, exponent, window)?;
                let _ = writeln!(
                    table,
                    "{},{},{},{},{},{}",
                    num(eps),
                    r.converged,
                    r.iterations,
                    num(r.residual),
                    num(r.v_max()),
                    num(dev)
                );
                for ((x, a), b) in grid
                    .frequencies()
                    .iter()
                    .zip(u_hat.values())
                    .zip(u0_hat.values())
                {
                    if *x > 0.0 && window.contains(*x) {
                        let _ = writeln!(
                            long,
                            "{},{},{}",
                            num(eps),
                            num(*x),
                            num(x.powf(exponent) * (a - b).norm())
                        );
                    }
                }
            }
            Err(e) if e.is_numerical() => {
                let iterations = match &e {
                    Error::Divergence { iteration, .. } => *iteration,
                    _ => 0,
                };
                info!("epsilon = {eps:e}: {e}");
                let _ = writeln!(table, "{},false,{iterations},,,", num(eps));
            }
            Err(e) => return Err(e),
        }
    }
    let a = config.output_dir.join("stationary.csv");
    let b = config.output_dir.join("deviation.csv");
    write_atomic(&a, &table)?;
    write_atomic(&b, &long)?;
    Ok(vec![a, b])
}

fn trajectory_csv(record: &TrajectoryRecord, summary: &str) -> String {
    let mut csv = String::from("t,l2_v,energy,renorm_energy,mass\n");
    let opt = |s: &Option<Vec<f64>>, i: usize| s.as_ref().map(|v| num(v[i])).unwrap_or_default();
    for i in 0..record.len() {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            num(record.times[i]),
            num(record.l2_v[i]),
            opt(&record.energy, i),
            opt(&record.renorm_energy, i),
            num(record.mass[i])
        );
    }
    csv.push_str(summary);
    csv.push('\n');
    csv
}

fn envelope_summary(record: &TrajectoryRecord) -> String {
    match fit_envelope(&record.times, &record.l2_v) {
        Ok(e) => format!(
            "envelope_amplitude={},envelope_rate={},envelope_r2={},non_increasing={}",
            num(e.amplitude),
            num(e.rate),
            num(e.r_squared),
            e.non_increasing
        ),
        Err(_) => "envelope=none".to_string(),
    }
}

pub fn run_evolve(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let spec = config.forcing_spec()?;
    let grid = config.grid()?;
    let branch = config.branch()?;
    let epsilon = config.evolution.epsilon.unwrap_or(spec.delta() / 16.0);
    let profile = profile(&spec, &grid, branch)?;
    let reference: Field = match spec.regime() {
        Regime::Zero => {
            let r = stationary_fixed_point(&profile, &config.solver_config(epsilon)?)?;
            if !r.converged {
                return Err(Error::Divergence {
                    iteration: r.iterations,
                    norm: r.v_max(),
                    guard: f64::INFINITY,
                });
            }
            r.u_eps
        }
        Regime::One => profile.values().clone(),
    };
    let l2 = config.evolution.perturbation * epsilon.sqrt();
    let initial = if l2 > 0.0 {
        let hi = config.window(spec.delta())?.hi;
        reference.add(&band_limited_perturbation(grid, hi, l2, config.seed)?)?
    } else {
        reference.clone()
    };

    let evo = config.evolution_config(branch);
    let path = config.output_dir.join("trajectory.csv");
    let head = format!(
        "# seed={},epsilon={},v0_l2={}",
        config.seed,
        num(epsilon),
        num(l2)
    );
    match evolve(&initial, &reference, &evo, &spec, epsilon) {
        Ok(record) => {
            let summary = format!("{head},status=ok,{}", envelope_summary(&record));
            write_atomic(&path, &trajectory_csv(&record, &summary))?;
            Ok(vec![path])
        }
        Err(Error::BlowUp { time, record }) => {
            let summary = format!(
                "{head},status=blow-up,blow_up_time={},{}",
                num(time),
                envelope_summary(&record)
            );
            write_atomic(&path, &trajectory_csv(&record, &summary))?;
            Err(Error::BlowUp { time, record })
        }
        Err(e) => Err(e),
    }
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let grid = config.grid()?;
    let branch = config.branch()?;
    let rows: Vec<Result<(f64, SpectrumEstimate)>> = config
        .sweep
        .deltas
        .par_iter()
        .map(|&delta| {
            let mut c = config.clone();
            c.forcing.delta = delta;
            c.fit.xi_hi = None;
            let spec = c.forcing_spec()?;
            let profile = profile(&spec, &grid, branch)?;
            Ok((
                delta,
                spectrum_fit(&profile, c.window(delta)?, c.fit.samples)?,
            ))
        })
        .collect();
    let mut csv = String::from("delta,xi_lo,xi_hi,slope,r2\n");
    for row in rows {
        let (delta, fit) = row?;
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            num(delta),
            num(fit.window.lo),
            num(fit.window.hi),
            num(fit.slope),
            num(fit.r_squared)
        );
    }
    let path = config.output_dir.join("sweep.csv");
    write_atomic(&path, &csv)?;
    Ok(vec![path])
}

/// Reads `xi,magnitude` pairs from the first two columns of a CSV.
/// Lines starting with `#` and a non-numeric header are skipped; rows with
/// an empty magnitude are dropped.
pub fn read_spectrum_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut xi = Vec::new();
    let mut mag = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (a, b) = (cols.next().unwrap_or(""), cols.next().unwrap_or(""));
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(x), Ok(m)) => {
                xi.push(x);
                mag.push(m);
            }
            (Ok(_), Err(_)) if b.is_empty() => {}
            _ if lineno == 0 => {}
            _ => {
                return Err(Error::invalid(format!(
                    "{}:{}: expected two numeric columns",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok((xi, mag))
}

pub fn run_fit(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let input = config
        .fit
        .input
        .as_ref()
        .ok_or_else(|| Error::invalid("fit needs an input CSV (fit.input or --input)"))?;
    let (xi, mag) = read_spectrum_csv(input)?;
    let fit = fit_power_law(&xi, &mag, config.window(config.forcing.delta)?)?;
    let csv = format!(
        "xi_lo,xi_hi,points,slope,intercept,r2\n{},{},{},{},{},{}\n",
        num(fit.window.lo),
        num(fit.window.hi),
        fit.points_in_window,
        num(fit.slope),
        num(fit.intercept),
        num(fit.r_squared)
    );
    let path = config.output_dir.join("fit.csv");
    write_atomic(&path, &csv)?;
    Ok(vec![path])
}

/// Log-log polylines with decade ticks. Non-positive points are skipped.
pub fn loglog_svg(series: &[(&str, &[(f64, f64)])]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const M: f64 = 60.0;
    const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

    let pts = || {
        series
            .iter()
            .flat_map(|s| s.1.iter())
            .filter(|p| p.0 > 0.0 && p.1 > 0.0)
    };
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in pts() {
        x0 = x0.min(x.log10());
        x1 = x1.max(x.log10());
        y0 = y0.min(y.log10());
        y1 = y1.max(y.log10());
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let (x0, x1, y0, y1) = (
        x0.floor(),
        x1.ceil().max(x0.floor() + 1.0),
        y0.floor(),
        y1.ceil().max(y0.floor() + 1.0),
    );
    let sx = |x: f64| M + (x.log10() - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y.log10() - y0) / (y1 - y0) * (H - 2.0 * M);

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\" font-size=\"11\">\n\
         <rect x=\"{M}\" y=\"{M}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        W - 2.0 * M,
        H - 2.0 * M
    );
    for d in x0 as i32..=x1 as i32 {
        let x = sx(10f64.powi(d));
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"black\"/><text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">1e{d}</text>",
            H - M,
            H - M + 5.0,
            H - M + 18.0
        );
    }
    for d in y0 as i32..=y1 as i32 {
        let y = sy(10f64.powi(d));
        let _ = writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{M}\" y2=\"{y:.1}\" stroke=\"black\"/><text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">1e{d}</text>",
            M - 5.0,
            M - 8.0,
            y + 4.0
        );
    }
    for (i, (label, data)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = data
            .iter()
            .filter(|p| p.0 > 0.0 && p.1 > 0.0)
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" points=\"{}\"/><text x=\"{:.1}\" y=\"{:.1}\" fill=\"{color}\">{label}</text>",
            points.join(" "),
            W - M - 60.0,
            M + 16.0 * (i as f64 + 1.0)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
