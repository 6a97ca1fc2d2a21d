//! Angular-momentum shift of a rotor wall under post-selection, and the
//! backward-evolution consistency check.

use crate::config::ExperimentConfig;
use crate::dynamics::{evolve, evolve_inverse, survival_amplitude, PeriodUnitary};
use crate::error::{Error, Result};
use crate::rotor::RotorPacket;
use crate::spin::{SpinOutcome, SpinVector};
use crate::state::{fidelity, JointState, ParticleMode};
use crate::tolerance;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftReport {
    pub prob_left: f64,
    pub prob_spin_given_left: f64,
    /// `<L_x>` of the initial rotor packet (hbar).
    pub lx_initial: f64,
    /// `<L_x>` of the post-selected rotor packet (hbar).
    pub lx_final: f64,
    /// `lx_final - lx_initial`.
    pub shift: f64,
    /// Leading-order deviation estimate `(1 - c) / 2`, `c = cos^{2N} eps`.
    pub predicted_bound: f64,
    /// Small-packet limit of the deviation, `(1 - c) / 2c`.
    pub small_angle_deviation: f64,
    pub config: ExperimentConfig,
}

impl ShiftReport {
    /// `|shift - expected|` for the configured outcome.
    pub fn deviation(&self) -> f64 {
        let expected = if self.config.epsilon() == 0.0 {
            0.0
        } else {
            self.config.postselect.expected_shift()
        };
        (self.shift - expected).abs()
    }
}

/// `2N` identical periods with the rotor as the right wall.
pub fn shift_schedule(config: &ExperimentConfig) -> Vec<PeriodUnitary> {
    let u = PeriodUnitary::rotor(config.epsilon()).with_ideal(config.ideal);
    vec![u; 2 * config.n_rounds]
}

fn check(config: &ExperimentConfig) -> Result<RotorPacket> {
    config.validate()?;
    if config.wall_packet.is_some() {
        return Err(Error::InvalidConfig(
            "the shift experiment has no wall position; drop the wall packet".into(),
        ));
    }
    config.rotor.build()
}

/// Evolve and post-select; returns `(P(left), P(spin | left), rotor)`.
fn postselected(
    config: &ExperimentConfig,
    phi: &RotorPacket,
    outcome: SpinOutcome,
) -> Result<(f64, f64, RotorPacket)> {
    let mut state = JointState::initial(config.n_rounds, phi, None)?;
    evolve(&mut state, &shift_schedule(config))?;
    let prob_left = state.mode_probability(ParticleMode::Left)?;
    if prob_left.is_nan() || prob_left < tolerance::POSTSELECT_FLOOR {
        return Err(Error::PostSelectionFailed {
            prob_left,
            prob_spin: 0.0,
        });
    }
    let (p, packet) = state
        .conditional_rotor(ParticleMode::Left, &outcome.bra())
        .map_err(|e| match e {
            Error::PostSelectionFailed { prob_spin, .. } => Error::PostSelectionFailed {
                prob_left,
                prob_spin,
            },
            other => other,
        })?;
    Ok((prob_left, p / prob_left, packet))
}

pub fn run_shift_experiment(config: &ExperimentConfig) -> Result<ShiftReport> {
    let phi = check(config)?;
    shift_for_packet(config, &phi)
}

/// As [`run_shift_experiment`], with an arbitrary unit-norm rotor packet in place of `config.rotor`.
pub fn shift_for_packet(config: &ExperimentConfig, phi: &RotorPacket) -> Result<ShiftReport> {
    check(config)?;
    let (prob_left, prob_spin_given_left, packet) = postselected(config, phi, config.postselect)?;
    let lx_initial = phi.expectation_lx()?;
    let lx_final = packet.expectation_lx()?;
    let c = if config.ideal {
        1.0
    } else {
        survival_amplitude(config.n_rounds, config.epsilon())
    };
    log::debug!("shift: P(L) = {prob_left}, P(s|L) = {prob_spin_given_left}, <Lx> {lx_initial} -> {lx_final}");
    Ok(ShiftReport {
        prob_left,
        prob_spin_given_left,
        lx_initial,
        lx_final,
        shift: lx_final - lx_initial,
        predicted_bound: 0.5 * (1.0 - c),
        small_angle_deviation: 0.5 * (1.0 - c) / c,
        config: config.clone(),
    })
}

/// Normalized rotor packet conditioned on `Left` and `outcome`.
pub fn conditional_wall_state(
    config: &ExperimentConfig,
    outcome: SpinOutcome,
) -> Result<RotorPacket> {
    let phi = check(config)?;
    Ok(postselected(config, &phi, outcome)?.2)
}

/// Fidelity with `Phi` of the initial wall state implied by the post-selection.
///
/// The post-selected state `|L>|b>|Phi_f>` is run through the adjoint schedule
/// and projected onto the pre-selected `|L>|up_z>`.
pub fn backward_check(config: &ExperimentConfig) -> Result<f64> {
    let phi = check(config)?;
    let (_, _, final_wall) = postselected(config, &phi, config.postselect)?;
    let n = config.n_rounds;
    let mut state = JointState::product(
        n,
        2 * n,
        ParticleMode::Left,
        config.postselect.bra(),
        &final_wall,
        None,
    )?;
    evolve_inverse(&mut state, &shift_schedule(config))?;
    let (_, initial_wall) = state.conditional_rotor(ParticleMode::Left, &SpinVector::up_z())?;
    fidelity(&initial_wall, &phi)
}
