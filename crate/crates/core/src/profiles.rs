//! Algebraic (ε = 0) solutions.
//!
//! For `P = 0` the profile is `u₀ = f^α`. For `P = 1` the depressed cubic
//! `U³ - 3U - 2Q = 0` has three real roots, evaluated from
//! `c = cos(θ/3) = e^{-δ/2 - x²/4}` and `s = sin(θ/3) = (1 - e^{-δ - x²/2})^{1/2}`:
//!
//! ```text
//! U₀ = 2c,   U₁ = -c - √3 s,   U₂ = -c + √3 s
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forcing::{eval_f, eval_q, ForcingSpec, Regime};
use crate::grid::{Field, Grid1D};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CardanoBranch {
    U0,
    U1,
    U2,
}

impl CardanoBranch {
    pub fn index(self) -> usize {
        match self {
            CardanoBranch::U0 => 0,
            CardanoBranch::U1 => 1,
            CardanoBranch::U2 => 2,
        }
    }

    pub fn from_index(k: usize) -> Result<Self> {
        match k {
            0 => Ok(CardanoBranch::U0),
            1 => Ok(CardanoBranch::U1),
            2 => Ok(CardanoBranch::U2),
            _ => Err(Error::invalid(format!(
                "Cardano branch must be 0, 1 or 2, got {k}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    PowerRoot,
    Cardano(CardanoBranch),
}

#[derive(Clone, Debug)]
pub struct AlgebraicProfile {
    spec: ForcingSpec,
    branch: Branch,
    values: Field,
}

impl AlgebraicProfile {
    pub fn spec(&self) -> &ForcingSpec {
        &self.spec
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn values(&self) -> &Field {
        &self.values
    }

    pub fn grid(&self) -> &Grid1D {
        self.values.grid()
    }

    /// Limit of the profile as `|x| → ∞`: 1 for `f^α`, `0, -√3, √3` for `U₀, U₁, U₂`.
    pub fn far_field(&self) -> f64 {
        far_field(self.branch)
    }

    /// The profile minus its far-field constant; this is what carries the
    /// cascade (the constant only contributes at ξ = 0).
    pub fn fluctuation(&self) -> Field {
        self.values.offset(self.far_field())
    }

    /// Right-hand side of the algebraic equation: `f` or `2Q`.
    pub fn source(&self) -> Result<Field> {
        source(&self.spec, self.grid())
    }

    /// Pointwise max of `|U^{2σ+1} - f|` or `|U³ - 3U - 2Q|`.
    pub fn residual(&self) -> Result<f64> {
        let rhs = self.source()?;
        let degree = self.spec.degree() as i32;
        let linear = match self.branch {
            Branch::PowerRoot => 0.0,
            Branch::Cardano(_) => 3.0,
        };
        Ok(self
            .values
            .values()
            .iter()
            .zip(rhs.values())
            .map(|(u, r)| (u.re.powi(degree) - linear * u.re - r.re).abs())
            .fold(0.0, f64::max))
    }
}

pub fn far_field(branch: Branch) -> f64 {
    match branch {
        Branch::PowerRoot => 1.0,
        Branch::Cardano(CardanoBranch::U0) => 0.0,
        Branch::Cardano(CardanoBranch::U1) => -SQRT_3,
        Branch::Cardano(CardanoBranch::U2) => SQRT_3,
    }
}

/// `f` for `P = 0`, `2Q` for `P = 1`.
pub fn source(spec: &ForcingSpec, grid: &Grid1D) -> Result<Field> {
    match spec.regime() {
        Regime::Zero => eval_f(spec, grid),
        Regime::One => Ok(eval_q(spec, grid)?.map(|z| z * 2.0)),
    }
}

/// `u₀ = f^α`, evaluated as `exp(α log f)`.
pub fn power_root_profile(spec: &ForcingSpec, grid: &Grid1D) -> Result<AlgebraicProfile> {
    if spec.regime() != Regime::Zero {
        return Err(Error::WrongRegime(
            "the power-root profile needs P = 0".into(),
        ));
    }
    let alpha = spec.alpha();
    let values = eval_f(spec, grid)?.map(|z| Complex64::new((alpha * z.re.ln()).exp(), 0.0));
    Ok(AlgebraicProfile {
        spec: *spec,
        branch: Branch::PowerRoot,
        values,
    })
}

/// The three real roots `(U₀, U₁, U₂)` of `U³ - 3U - 2Q = 0`.
pub fn cardano_profiles(
    spec: &ForcingSpec,
    grid: &Grid1D,
) -> Result<(AlgebraicProfile, AlgebraicProfile, AlgebraicProfile)> {
    if spec.regime() != Regime::One || spec.sigma() != 1 {
        return Err(Error::WrongRegime(
            "Cardano profiles need P = 1 and sigma = 1".into(),
        ));
    }
    let (delta, beta) = (spec.delta(), spec.beta());
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::invalid("Cardano branches need delta > 0"));
    }
    let points = grid.points();
    let mut branches = [Vec::new(), Vec::new(), Vec::new()];
    for &x in &points {
        let r = beta * x * x;
        let c = (-delta / 2.0 - r / 4.0).exp();
        // 1 - e^{-t} without cancellation for small t.
        let s = (-(-delta - r / 2.0).exp_m1()).sqrt();
        branches[0].push(2.0 * c);
        branches[1].push(-c - SQRT_3 * s);
        branches[2].push(-c + SQRT_3 * s);
    }
    let make = |k: CardanoBranch, vals: &[f64]| -> Result<AlgebraicProfile> {
        Ok(AlgebraicProfile {
            spec: *spec,
            branch: Branch::Cardano(k),
            values: Field::from_real(*grid, vals)?,
        })
    };
    Ok((
        make(CardanoBranch::U0, &branches[0])?,
        make(CardanoBranch::U1, &branches[1])?,
        make(CardanoBranch::U2, &branches[2])?,
    ))
}

/// Convenience wrapper selecting one profile for a spec.
pub fn profile(
    spec: &ForcingSpec,
    grid: &Grid1D,
    cardano: CardanoBranch,
) -> Result<AlgebraicProfile> {
    match spec.regime() {
        Regime::Zero => power_root_profile(spec, grid),
        Regime::One => {
            let (u0, u1, u2) = cardano_profiles(spec, grid)?;
            Ok(match cardano {
                CardanoBranch::U0 => u0,
                CardanoBranch::U1 => u1,
                CardanoBranch::U2 => u2,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn power_root_at_origin() {
        let spec = ForcingSpec::power_root(LN_2, 1).unwrap();
        let g = Grid1D::periodic(64, 2.0 * PI).unwrap();
        let p = power_root_profile(&spec, &g).unwrap();
        assert!((p.values().values()[32].re - 0.5f64.powf(1.0 / 3.0)).abs() < 1e-15);
        assert!((p.values().values()[32].re - 0.793_700_525_984_099_7).abs() < 1e-15);
    }

    #[test]
    fn power_root_residual_and_bounds() {
        let g = Grid1D::default();
        for sigma in [1, 2] {
            let delta = 2f64.powi(-8);
            let spec = ForcingSpec::power_root(delta, sigma).unwrap();
            let p = power_root_profile(&spec, &g).unwrap();
            assert!(p.residual().unwrap() < 1e-13);
            let floor = spec.alpha() * delta * (-delta).exp();
            assert!(p.values().re().iter().all(|&u| u >= floor && u <= 1.0));
            assert!(p.values().is_real());
        }
    }

    #[test]
    fn wrong_regime() {
        let g = Grid1D::periodic(64, 1.0).unwrap();
        assert!(power_root_profile(&ForcingSpec::cardano(0.1).unwrap(), &g).is_err());
        assert!(cardano_profiles(&ForcingSpec::power_root(0.1, 1).unwrap(), &g).is_err());
    }

    #[test]
    fn cardano_far_field_limits() {
        let g = Grid1D::default();
        let spec = ForcingSpec::cardano(2f64.powi(-10)).unwrap();
        let (u0, u1, u2) = cardano_profiles(&spec, &g).unwrap();
        // x_0 = -2π; even profiles, so this is the value at |x| = 2π.
        assert!(u0.values().values()[0].re.abs() < 2e-4);
        assert!((u1.values().values()[0].re + SQRT_3).abs() < 2e-4);
        assert!((u2.values().values()[0].re - SQRT_3).abs() < 2e-4);
    }

    #[test]
    fn u1_at_origin() {
        let g = Grid1D::periodic(64, 2.0 * PI).unwrap();
        let delta = 2f64.powi(-6);
        let (_, u1, _) = cardano_profiles(&ForcingSpec::cardano(delta).unwrap(), &g).unwrap();
        let expected = -(-delta / 2.0).exp() - SQRT_3 * (1.0 - (-delta).exp()).sqrt();
        assert!((u1.values().values()[32].re - expected).abs() < 1e-15);
    }

    #[test]
    fn cardano_invariants() {
        let g = Grid1D::default();
        for j in [4, 8, 12, 16, 20] {
            let delta = 2f64.powi(-j);
            let (u0, u1, u2) = cardano_profiles(&ForcingSpec::cardano(delta).unwrap(), &g).unwrap();
            for p in [&u0, &u1, &u2] {
                assert!(p.residual().unwrap() < 1e-12);
            }
            let floor = 3.0 - 2.0 * (-delta).exp();
            for ((a, b), c) in u0
                .values()
                .values()
                .iter()
                .zip(u1.values().values())
                .zip(u2.values().values())
            {
                assert!((a.re + b.re + c.re).abs() < 1e-13);
                assert!(b.re * b.re >= floor - 1e-15);
                assert!(3.0 * b.re * b.re - 3.0 >= 6.0 * (1.0 - (-delta).exp()) - 1e-12);
            }
            if j >= 8 {
                let min_u2 = u2.values().abs().into_iter().fold(f64::INFINITY, f64::min);
                assert!(min_u2 < 10.0 * delta.sqrt(), "min|U2| = {min_u2}");
            }
        }
    }

    #[test]
    fn far_field_subtraction() {
        let g = Grid1D::periodic(64, 1.0).unwrap();
        let p = power_root_profile(&ForcingSpec::power_root(0.1, 1).unwrap(), &g).unwrap();
        assert_eq!(p.far_field(), 1.0);
        assert!(p.fluctuation().re().iter().all(|&v| v < 0.0));
        assert_eq!(CardanoBranch::from_index(2).unwrap(), CardanoBranch::U2);
        assert!(CardanoBranch::from_index(3).is_err());
    }

    proptest! {
        #[test]
        fn residuals_hold_for_any_delta(j in 0.0f64..20.0, sigma in 1u32..4) {
            let g = Grid1D::periodic(512, 2.0 * PI).unwrap();
            let delta = 2f64.powf(-j);
            let p = power_root_profile(&ForcingSpec::power_root(delta, sigma).unwrap(), &g).unwrap();
            prop_assert!(p.residual().unwrap() < 1e-12);
            let (u0, u1, u2) = cardano_profiles(&ForcingSpec::cardano(delta).unwrap(), &g).unwrap();
            for q in [&u0, &u1, &u2] {
                prop_assert!(q.residual().unwrap() < 1e-12);
            }
        }
    }
}
