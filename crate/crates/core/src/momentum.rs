//! Linear momentum handed to a wall with a position wavepacket.
//!
//! Momentum is reported as momentum received by the wall: a reflection that
//! stamps `exp(-2i p0 x)` on the joint state lowers the spectral `<p>` by
//! `2 p0` and counts as `+2 p0` received.

use crate::config::{ExperimentConfig, ReflectionMode};
use crate::dynamics::{evolve, PeriodUnitary};
use crate::error::{Error, Result};
use crate::rotor::{ensure_unit, RotorPacket};
use crate::spin::SpinVector;
use crate::state::{fidelity, JointState, ParticleMode};
use crate::tolerance;
use serde::{Deserialize, Serialize};

/// `2 p0 integral |sin(theta/2) Phi(theta)|^2 dtheta`.
pub fn analytic_p_transfer(rotor: &RotorPacket, p0: f64) -> Result<f64> {
    ensure_unit(rotor.norm())?;
    Ok(2.0 * p0 * rotor.sin_half_weight())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumReport {
    /// Ensemble momentum received by the wall, no post-selection.
    pub p_transfer: f64,
    /// Same, conditioned on the particle ending in `Left`.
    pub p_transfer_left: f64,
    /// Same, conditioned on `Left` and the configured spin outcome.
    pub p_transfer_postselected: f64,
    pub p_transfer_analytic: f64,
    /// `p_transfer / p_transfer_analytic`; `None` when the analytic value vanishes.
    pub kappa: Option<f64>,
    /// Rotor `<L_x>` shift from the fully post-selected state (hbar).
    pub lx_shift: f64,
    /// Rotor `<L_x>` shift conditioned on `Left` only.
    pub lx_shift_left: f64,
    pub phase_budget: f64,
    pub reflection_mode: ReflectionMode,
    pub prob_left: f64,
    pub prob_spin_given_left: f64,
    /// `|<Psi|Psi_f>|^2` for the reflected branch at the rotor sample nearest `theta = 0`.
    pub wall_coherence: f64,
    pub delta_theta: f64,
    pub delta_x: f64,
    pub p0: f64,
    pub warnings: Vec<String>,
}

/// `2N` rotor periods with the reflection phase placed per `mode`.
pub fn momentum_schedule(config: &ExperimentConfig) -> Vec<PeriodUnitary> {
    let n = config.n_rounds;
    let u = PeriodUnitary::rotor(config.epsilon()).with_ideal(config.ideal);
    (1..=2 * n)
        .map(|j| {
            let on = match config.reflection_mode {
                ReflectionMode::PerPeriod => true,
                ReflectionMode::OncePerTransit => j == n,
            };
            u.with_reflection_phase(on)
        })
        .collect()
}

pub fn run_momentum_experiment(config: &ExperimentConfig) -> Result<MomentumReport> {
    config.validate()?;
    let psi = config
        .build_wall()?
        .ok_or_else(|| Error::InvalidConfig("momentum experiment needs a wall packet".into()))?;
    let phase_budget = config.phase_budget().unwrap_or(0.0);
    if phase_budget > tolerance::PHASE_BUDGET_MAX {
        return Err(Error::ModelValidity { phase_budget });
    }
    let mut warnings = Vec::new();
    if phase_budget > tolerance::PHASE_BUDGET_WARN {
        let msg = format!(
            "phase budget {phase_budget:.3} exceeds {}; imprint is no longer small",
            tolerance::PHASE_BUDGET_WARN
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }

    let phi = config.rotor.build()?;
    let p_before = psi.expectation_p()?;
    let lx_before = phi.expectation_lx()?;
    let mut state = JointState::initial(config.n_rounds, &phi, Some(&psi))?;
    evolve(&mut state, &momentum_schedule(config))?;

    let received = |s: &JointState| -> Result<f64> { Ok(p_before - s.expectation_p()?) };
    let p_transfer = received(&state)?;

    let (prob_left, left) = state.project_modes(&[ParticleMode::Left])?;
    let (p_joint, post) = left
        .project(&[ParticleMode::Left], &config.postselect.bra())
        .map_err(|e| match e {
            Error::PostSelectionFailed { prob_spin, .. } => Error::PostSelectionFailed {
                prob_left,
                prob_spin,
            },
            other => other,
        })?;

    let mid = phi.grid_size() / 2;
    let wall_coherence =
        match state.conditional_wall(ParticleMode::Left, &SpinVector::down_z(), mid) {
            Ok((_, fiber)) => fidelity(&fiber, &psi)?,
            Err(Error::PostSelectionFailed { .. }) => 1.0,
            Err(e) => return Err(e),
        };

    let analytic = analytic_p_transfer(&phi, psi.box_momentum())?;
    Ok(MomentumReport {
        p_transfer,
        p_transfer_left: received(&left)?,
        p_transfer_postselected: received(&post)?,
        p_transfer_analytic: analytic,
        kappa: (analytic != 0.0).then(|| p_transfer / analytic),
        lx_shift: post.expectation_lx() - lx_before,
        lx_shift_left: left.expectation_lx() - lx_before,
        phase_budget,
        reflection_mode: config.reflection_mode,
        prob_left,
        prob_spin_given_left: p_joint,
        wall_coherence,
        delta_theta: phi.delta_theta(),
        delta_x: psi.delta_x(),
        p0: psi.box_momentum(),
        warnings,
    })
}

/// Least-squares slope of `p_transfer` against `p_transfer_analytic`.
pub fn fit_kappa(reports: &[MomentumReport]) -> Option<f64> {
    let (num, den) = reports.iter().fold((0.0, 0.0), |(n, d), r| {
        (
            n + r.p_transfer * r.p_transfer_analytic,
            d + r.p_transfer_analytic.powi(2),
        )
    });
    (den > 0.0).then(|| num / den)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta_theta: f64,
    pub delta_x: f64,
    pub p_transfer: f64,
    pub p_transfer_analytic: f64,
    pub lx_shift: f64,
    pub phase_budget: f64,
    pub warnings: Vec<String>,
}

/// Rerun the momentum experiment along a ladder of `(dtheta, dx_w)` pairs.
///
/// The wall grid keeps its extent-to-width ratio and `p0` is held fixed.
pub fn sweep_vanishing(config: &ExperimentConfig, ladder: &[(f64, f64)]) -> Result<Vec<SweepRow>> {
    let base = config
        .wall_packet
        .ok_or_else(|| Error::InvalidConfig("sweep needs a wall packet".into()))?;
    if ladder
        .windows(2)
        .any(|w| !(w[1].0 < w[0].0 && w[1].1 < w[0].1))
    {
        return Err(Error::InvalidConfig(
            "ladder must decrease in both dtheta and dx_w".into(),
        ));
    }
    let ratio = base.extent / base.delta_x;
    ladder
        .iter()
        .map(|&(dt, dx)| {
            let mut c = config.clone();
            c.rotor.delta_theta = dt;
            c.wall_packet = Some(crate::wall::WallPacketParams {
                delta_x: dx,
                extent: ratio * dx,
                ..base
            });
            let r = run_momentum_experiment(&c)?;
            Ok(SweepRow {
                delta_theta: dt,
                delta_x: dx,
                p_transfer: r.p_transfer,
                p_transfer_analytic: r.p_transfer_analytic,
                lx_shift: r.lx_shift,
                phase_budget: r.phase_budget,
                warnings: r.warnings,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RotorParams;
    use crate::rotor::PacketFamily;
    use crate::shift::run_shift_experiment;
    use crate::wall::WallPacketParams;
    use approx::assert_abs_diff_eq;

    fn cfg(n: usize, g: usize, dt: f64, dx: f64, p0: f64) -> ExperimentConfig {
        ExperimentConfig::new(n, RotorParams::new(g, dt))
            .with_wall(WallPacketParams::with_defaults(dx, p0))
    }

    #[test]
    fn analytic_transfer_oracles() {
        let narrow = RotorPacket::new(1 << 14, 2e-3, PacketFamily::TruncatedGaussian).unwrap();
        assert!(analytic_p_transfer(&narrow, 1.0).unwrap() < 1e-6);
        let g = RotorPacket::new(8192, 0.1, PacketFamily::TruncatedGaussian).unwrap();
        let sigma = 0.1 / 3.0;
        assert_abs_diff_eq!(
            analytic_p_transfer(&g, 1.0).unwrap(),
            0.5 * sigma * sigma,
            epsilon = 0.05 * 5.6e-4
        );
    }

    #[test]
    fn zero_momentum_gives_zero_transfer() {
        let r = run_momentum_experiment(&cfg(20, 1024, 0.05, 0.01, 0.0)).unwrap();
        assert_abs_diff_eq!(r.p_transfer, 0.0, epsilon = tolerance::IDENTITY);
        assert_eq!(r.kappa, None);
        let s =
            run_shift_experiment(&ExperimentConfig::new(20, RotorParams::new(1024, 0.05))).unwrap();
        assert_abs_diff_eq!(r.lx_shift, s.shift, epsilon = 1e-12);
    }

    #[test]
    fn once_per_transit_gives_unit_kappa() {
        let r = run_momentum_experiment(&cfg(20, 2048, 0.1, 1e-3, 0.25)).unwrap();
        let k = r.kappa.unwrap();
        assert!((k - 1.0).abs() < 1e-3, "kappa = {k}");
        assert!(r.wall_coherence > 1.0 - r.phase_budget.powi(2));
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn per_period_accumulates() {
        let c = cfg(20, 2048, 0.1, 1e-3, 0.25).with_reflection_mode(ReflectionMode::PerPeriod);
        let r = run_momentum_experiment(&c).unwrap();
        assert!(r.kappa.unwrap() > 5.0);
    }

    #[test]
    fn budget_limits() {
        let warn = run_momentum_experiment(&cfg(10, 512, 0.1, 0.01, 1.0)).unwrap();
        assert_eq!(warn.warnings.len(), 1);
        assert!(matches!(
            run_momentum_experiment(&cfg(10, 512, 0.1, 0.1, 1.0)),
            Err(Error::ModelValidity { .. })
        ));
        let missing = ExperimentConfig::new(10, RotorParams::new(256, 0.05));
        assert!(run_momentum_experiment(&missing).is_err());
    }

    #[test]
    fn sweep_requires_decreasing_ladder() {
        let c = cfg(10, 1024, 0.1, 1e-3, 0.5);
        assert!(sweep_vanishing(&c, &[(0.1, 1e-3), (0.1, 5e-4)]).is_err());
        let rows = sweep_vanishing(&c, &[(0.1, 1e-3), (0.05, 5e-4)]).unwrap();
        assert_eq!(rows.len(), 2);
        let ratio = rows[0].p_transfer / rows[1].p_transfer;
        assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}");
    }
}
