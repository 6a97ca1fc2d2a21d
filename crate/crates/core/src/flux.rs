//! Per-period angular-momentum flux into a single rotor wall.
//!
//! Only the probed wall (present during period `n`) is a rotor; every other
//! period uses a classical wall at `theta = 0`.

use crate::config::ExperimentConfig;
use crate::dynamics::{evolve, PeriodUnitary};
use crate::error::{Error, Result};
use crate::state::{JointState, ParticleMode};
use crate::tolerance;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `-sin((2n - 1) pi / 4N) sin(pi / 4N)` in units of hbar.
pub fn analytic_flux(n_rounds: usize, n: usize) -> Result<f64> {
    if n_rounds == 0 || !(1..=2 * n_rounds).contains(&n) {
        return Err(Error::InvalidConfig(format!(
            "period {n} outside 1..={}",
            2 * n_rounds
        )));
    }
    let q = PI / (4.0 * n_rounds as f64);
    Ok(-((2 * n - 1) as f64 * q).sin() * q.sin())
}

/// Result of probing one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxSample {
    pub n: usize,
    pub delta_lx: f64,
    pub prob_left: f64,
    pub prob_spin_given_left: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxProfile {
    pub n_rounds: usize,
    pub per_period: Vec<f64>,
    pub analytic: Vec<f64>,
    pub total: f64,
    pub analytic_total: f64,
    pub prob_left: Vec<f64>,
    pub prob_spin_given_left: Vec<f64>,
}

impl FluxProfile {
    /// Largest `|sim - analytic| / max(5% |analytic|, 1e-4)`; at most 1 means every period agrees.
    pub fn worst_relative_error(&self) -> f64 {
        self.per_period
            .iter()
            .zip(&self.analytic)
            .map(|(s, a)| (s - a).abs() / (0.05 * a.abs()).max(1e-4))
            .fold(0.0, f64::max)
    }
}

/// Rotor wall during period `n` only.
pub fn flux_schedule(config: &ExperimentConfig, n: usize) -> Vec<PeriodUnitary> {
    let eps = config.epsilon();
    (1..=2 * config.n_rounds)
        .map(|j| {
            let u = if j == n {
                PeriodUnitary::rotor(eps)
            } else {
                PeriodUnitary::fixed(eps, 0.0)
            };
            u.with_ideal(config.ideal)
        })
        .collect()
}

/// Angular-momentum gain of the wall present during period `config.flux_wall_index`.
pub fn run_flux_experiment(config: &ExperimentConfig) -> Result<FluxSample> {
    config.validate()?;
    let n = config
        .flux_wall_index
        .ok_or_else(|| Error::InvalidConfig("flux experiment needs a wall index".into()))?;
    let phi = config.rotor.build()?;
    let mut state = JointState::initial(config.n_rounds, &phi, None)?;
    evolve(&mut state, &flux_schedule(config, n))?;
    let prob_left = state.mode_probability(ParticleMode::Left)?;
    if prob_left.is_nan() || prob_left < tolerance::POSTSELECT_FLOOR {
        return Err(Error::PostSelectionFailed {
            prob_left,
            prob_spin: 0.0,
        });
    }
    let (p, packet) = state.conditional_rotor(ParticleMode::Left, &config.postselect.bra())?;
    Ok(FluxSample {
        n,
        delta_lx: packet.expectation_lx()? - phi.expectation_lx()?,
        prob_left,
        prob_spin_given_left: p / prob_left,
    })
}

/// All `2N` periods, in order of `n`.
pub fn flux_profile(config: &ExperimentConfig) -> Result<FluxProfile> {
    config.validate()?;
    let n_rounds = config.n_rounds;
    let samples: Vec<FluxSample> = (1..=2 * n_rounds)
        .into_par_iter()
        .map(|n| {
            let mut c = config.clone();
            c.flux_wall_index = Some(n);
            run_flux_experiment(&c)
        })
        .collect::<Result<_>>()?;
    let analytic: Vec<f64> = (1..=2 * n_rounds)
        .map(|n| analytic_flux(n_rounds, n))
        .collect::<Result<_>>()?;
    let per_period: Vec<f64> = samples.iter().map(|s| s.delta_lx).collect();
    Ok(FluxProfile {
        n_rounds,
        total: per_period.iter().sum(),
        analytic_total: analytic.iter().sum(),
        per_period,
        analytic,
        prob_left: samples.iter().map(|s| s.prob_left).collect(),
        prob_spin_given_left: samples.iter().map(|s| s.prob_spin_given_left).collect(),
    })
}
