//! Benchmark problem definitions: initial profiles, boundary values, exact
//! solutions where they exist, and closed-form invariant values.
//!
//! The solitary wave of the equation is U(x,t) = 3c·sech²(k(x−x₀−ct)) with
//! k = 1/√(4μ): amplitude 3c, speed c, so taller waves travel faster and
//! negative c gives a leftward depression wave. Its invariants are
//! I₁ = 6c/k, I₂ = 12c²/k + (48/5)k c² μ, I₃ = (144/5)c³/k.

use crate::config::RunConfig;
use crate::mesh::DirichletPair;
use crate::{Error, Result};

/// Everything the runner needs to set up a problem, independent of mesh and
/// time step choices.
pub struct ProblemSpec {
    pub bc: DirichletPair,
    pub u0: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub exact: Option<Box<dyn Fn(f64, f64) -> f64 + Send + Sync>>,
    /// Closed-form (I₁, I₂, I₃) of the profile on the whole line, when known.
    pub analytic_invariants: Option<(f64, f64, f64)>,
}

fn sech(y: f64) -> f64 {
    1.0 / y.cosh()
}

fn check_mu(mu: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::Domain(format!("dispersion coefficient {mu} must be positive")));
    }
    Ok(1.0 / (4.0 * mu).sqrt())
}

fn wave_invariants(c: f64, mu: f64, k: f64) -> (f64, f64, f64) {
    (
        6.0 * c / k,
        12.0 * c * c / k + 9.6 * k * c * c * mu,
        28.8 * c * c * c / k,
    )
}

/// One solitary wave of speed c (amplitude 3c) centered at x₀, with the exact
/// traveling solution attached.
pub fn single_solitary_wave(c: f64, mu: f64, x0: f64) -> Result<ProblemSpec> {
    let k = check_mu(mu)?;
    if c == 0.0 {
        return Err(Error::Domain("wave speed must be nonzero".into()));
    }
    let profile = move |x: f64, t: f64| {
        let s = sech(k * (x - x0 - c * t));
        3.0 * c * s * s
    };
    Ok(ProblemSpec {
        bc: DirichletPair { left: 0.0, right: 0.0 },
        u0: Box::new(move |x| profile(x, 0.0)),
        exact: Some(Box::new(profile)),
        analytic_invariants: Some(wave_invariants(c, mu, k)),
    })
}

/// A superposition of solitary waves; wave j starts centered at xⱼ + cⱼ. The
/// whole-line invariants add per wave, which is exact up to the exponentially
/// small overlap of well-separated pulses.
pub fn multi_solitary_waves(cs: &[f64], xs: &[f64], mu: f64) -> Result<ProblemSpec> {
    let k = check_mu(mu)?;
    if cs.is_empty() || cs.len() != xs.len() {
        return Err(Error::Domain(format!(
            "need matching nonempty speed/center lists, got {} speeds and {} centers",
            cs.len(),
            xs.len()
        )));
    }
    if cs.contains(&0.0) {
        return Err(Error::Domain("wave speeds must be nonzero".into()));
    }
    let (mut i1, mut i2, mut i3) = (0.0, 0.0, 0.0);
    for &c in cs {
        let w = wave_invariants(c, mu, k);
        i1 += w.0;
        i2 += w.1;
        i3 += w.2;
    }
    let cs = cs.to_vec();
    let xs = xs.to_vec();
    let u0 = move |x: f64| {
        let mut u = 0.0;
        for (c, x0) in cs.iter().zip(&xs) {
            let s = sech(k * (x - x0 - c));
            u += 3.0 * c * s * s;
        }
        u
    };
    Ok(ProblemSpec {
        bc: DirichletPair { left: 0.0, right: 0.0 },
        u0: Box::new(u0),
        exact: None,
        analytic_invariants: Some((i1, i2, i3)),
    })
}

/// Gaussian pulse exp(−(x−20)²), which is not a solitary wave and sheds a
/// dispersive tail. Its profile invariants are
/// I₁ = √π, I₂ = √(π/2)(1+μ), I₃ = √(π/3).
pub fn maxwellian(mu: f64) -> Result<ProblemSpec> {
    check_mu(mu)?;
    let pi = std::f64::consts::PI;
    Ok(ProblemSpec {
        bc: DirichletPair { left: 0.0, right: 0.0 },
        u0: Box::new(|x: f64| (-(x - 20.0) * (x - 20.0)).exp()),
        exact: None,
        analytic_invariants: Some((
            pi.sqrt(),
            (pi / 2.0).sqrt() * (1.0 + mu),
            (pi / 3.0).sqrt(),
        )),
    })
}

/// Smoothed step u₀(x) = U₀/2 · (1 − tanh((x−x₀)/d)) feeding an undular
/// bore: water flows in from the left wall, so the invariants grow linearly.
pub fn undular_bore(u0_amp: f64, d: f64, x0: f64) -> Result<ProblemSpec> {
    if !(u0_amp > 0.0) {
        return Err(Error::Domain(format!("step height {u0_amp} must be positive")));
    }
    if !(d > 0.0) {
        return Err(Error::Domain(format!("step width {d} must be positive")));
    }
    Ok(ProblemSpec {
        bc: DirichletPair { left: u0_amp, right: 0.0 },
        u0: Box::new(move |x: f64| 0.5 * u0_amp * (1.0 - ((x - x0) / d).tanh())),
        exact: None,
        analytic_invariants: None,
    })
}

/// Exact growth rates (dI₁/dt, dI₂/dt, dI₃/dt) of the bore invariants,
/// driven by the fluxes through the left wall where U = U₀:
/// (U₀²/2, (2/3)U₀³, (3/4)U₀⁴).
pub fn bore_growth_rates(u0_amp: f64) -> (f64, f64, f64) {
    (
        0.5 * u0_amp * u0_amp,
        2.0 / 3.0 * u0_amp.powi(3),
        0.75 * u0_amp.powi(4),
    )
}

/// Build the problem named by a config from its parameters.
pub fn build(cfg: &RunConfig) -> Result<ProblemSpec> {
    let expect_waves = |n: usize| -> Result<()> {
        if cfg.c.len() != n || cfg.x0.len() != n {
            return Err(Error::ConfigInvalid(format!(
                "problem {} needs exactly {n} wave speeds and centers, got {} and {}",
                cfg.problem,
                cfg.c.len(),
                cfg.x0.len()
            )));
        }
        Ok(())
    };
    match cfg.problem.as_str() {
        "single" => {
            expect_waves(1)?;
            single_solitary_wave(cfg.c[0], cfg.mu, cfg.x0[0])
        }
        "two_waves" => {
            expect_waves(2)?;
            multi_solitary_waves(&cfg.c, &cfg.x0, cfg.mu)
        }
        "three_waves" => {
            expect_waves(3)?;
            multi_solitary_waves(&cfg.c, &cfg.x0, cfg.mu)
        }
        "collision" => {
            expect_waves(2)?;
            multi_solitary_waves(&cfg.c, &cfg.x0, cfg.mu)
        }
        "maxwellian" => maxwellian(cfg.mu),
        "bore" => {
            if cfg.x0.len() != 1 {
                return Err(Error::ConfigInvalid(format!(
                    "problem bore needs exactly one step center, got {}",
                    cfg.x0.len()
                )));
            }
            undular_bore(cfg.u0_amp, cfg.d, cfg.x0[0])
        }
        other => Err(Error::UnknownProblem(other.to_string())),
    }
}
