//! Subcommand drivers: build a config, run the experiment, fill a report.

use crate::args::*;
use crate::report::{ReportEnvelope, Unit};
use crate::svg::{Line, Plot};
use amflow_core::{
    backward_check, conditional_wall_state, flux_profile, run_flux_experiment,
    run_momentum_experiment, run_shift_experiment, survival_amplitude, sweep_vanishing,
    ExperimentConfig, RotorParams, WallPacketParams,
};
use serde_json::json;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] amflow_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(amflow_core::Error::PostSelectionFailed { .. }) => 2,
            CliError::Core(amflow_core::Error::ModelValidity { .. }) => 3,
            _ => 1,
        }
    }
}

pub type Outcome = Result<(ReportEnvelope, Option<Plot>), CliError>;

struct Defaults {
    n_rounds: usize,
    delta_theta: f64,
    grid: usize,
}

fn build_config(c: &Common, d: Defaults) -> ExperimentConfig {
    let mut rotor = RotorParams::new(
        c.grid.unwrap_or(d.grid),
        c.delta_theta.unwrap_or(d.delta_theta),
    );
    rotor.family = c.family.into();
    let mut config = ExperimentConfig::new(c.n_rounds.unwrap_or(d.n_rounds), rotor)
        .with_postselect(c.postselect.into())
        .with_ideal(c.ideal);
    config.epsilon = c.epsilon;
    config
}

fn echo(config: &ExperimentConfig, common: &Common, extra: serde_json::Value) -> serde_json::Value {
    json!({
        "experiment": config,
        "epsilon_resolved": config.epsilon(),
        "seed": common.seed,
        "command_flags": extra,
    })
}

fn no_svg(common: &Common, what: &str) -> Result<(), CliError> {
    match common.svg {
        Some(_) => Err(CliError::Usage(format!(
            "--svg is not available for {what}"
        ))),
        None => Ok(()),
    }
}

pub fn shift(a: &ShiftArgs) -> Outcome {
    let mut config = build_config(
        &a.common,
        Defaults {
            n_rounds: 100,
            delta_theta: 0.05,
            grid: 256,
        },
    );
    config.rotor.center = a.center;
    let start = Instant::now();
    let r = run_shift_experiment(&config)?;
    let plot = match a.common.svg {
        Some(_) => Some(fourier_plot(&config, &r)?),
        None => None,
    };
    let mut rep = ReportEnvelope::new(
        "shift",
        echo(&config, &a.common, json!({ "center": a.center })),
    );
    rep.timings
        .insert("experiment".into(), start.elapsed().as_secs_f64());
    let expected = if config.epsilon() == 0.0 {
        0.0
    } else {
        config.postselect.expected_shift()
    };
    rep.quantity("prob_left", r.prob_left, Unit::Probability);
    rep.quantity(
        "prob_spin_given_left",
        r.prob_spin_given_left,
        Unit::Probability,
    );
    rep.quantity("lx_initial", r.lx_initial, Unit::Hbar);
    rep.quantity("lx_final", r.lx_final, Unit::Hbar);
    rep.quantity("shift", r.shift, Unit::Hbar);
    rep.quantity("expected_shift", expected, Unit::Hbar);
    rep.quantity("deviation", r.deviation(), Unit::Hbar);
    rep.quantity("predicted_bound", r.predicted_bound, Unit::Hbar);
    rep.quantity("small_angle_deviation", r.small_angle_deviation, Unit::Hbar);
    rep.quantity("epsilon", config.epsilon(), Unit::Radians);
    Ok((rep, plot))
}

/// Angular-momentum distribution of the rotor before and after post-selection.
fn fourier_plot(config: &ExperimentConfig, r: &amflow_core::ShiftReport) -> Result<Plot, CliError> {
    let phi = config.rotor.build()?;
    let post = conditional_wall_state(config, config.postselect)?;
    let g = phi.grid_size() as i64;
    let weights = |p: &amflow_core::RotorPacket| -> Vec<(f64, f64)> {
        p.fourier_view()
            .iter()
            .enumerate()
            .map(|(i, z)| ((i as i64 - g / 2) as f64, z.norm_sqr()))
            .collect()
    };
    let (w0, w1) = (weights(&phi), weights(&post));
    let peak = w0.iter().map(|p| p.1).fold(0.0, f64::max);
    let keep = |w: &[(f64, f64)]| -> Vec<(f64, f64)> {
        let lo = w.iter().position(|p| p.1 > 1e-4 * peak).unwrap_or(0);
        let hi = w
            .iter()
            .rposition(|p| p.1 > 1e-4 * peak)
            .unwrap_or(w.len() - 1);
        w[lo..=hi].to_vec()
    };
    Ok(Plot {
        title: format!("Rotor L_x distribution, shift = {:.4} hbar", r.shift),
        x_label: "m (hbar)".into(),
        y_label: "|c_m|^2".into(),
        lines: vec![
            Line::new("initial", keep(&w0)),
            Line::new("post-selected", keep(&w1)).dashed(),
        ],
        ..Plot::default()
    })
}

pub fn flux(a: &FluxArgs) -> Outcome {
    let mut config = build_config(
        &a.common,
        Defaults {
            n_rounds: 20,
            delta_theta: 0.02,
            grid: 4096,
        },
    );
    config.ideal = a.common.ideal || a.up_channel == UpChannel::Lossless;
    let flags = json!({ "wall_index": a.wall_index, "up_channel": a.up_channel });
    let start = Instant::now();
    if let Some(n) = a.wall_index {
        no_svg(&a.common, "a single wall index")?;
        config.flux_wall_index = Some(n);
        let s = run_flux_experiment(&config)?;
        let mut rep = ReportEnvelope::new("flux", echo(&config, &a.common, flags));
        rep.timings
            .insert("experiment".into(), start.elapsed().as_secs_f64());
        rep.quantity("wall_index", n as f64, Unit::Index);
        rep.quantity("delta_lx", s.delta_lx, Unit::Hbar);
        rep.quantity(
            "analytic",
            amflow_core::analytic_flux(config.n_rounds, n)?,
            Unit::Hbar,
        );
        rep.quantity("prob_left", s.prob_left, Unit::Probability);
        rep.quantity(
            "prob_spin_given_left",
            s.prob_spin_given_left,
            Unit::Probability,
        );
        return Ok((rep, None));
    }
    let p = flux_profile(&config)?;
    let mut rep = ReportEnvelope::new("flux", echo(&config, &a.common, flags));
    rep.timings
        .insert("experiment".into(), start.elapsed().as_secs_f64());
    rep.series("per_period", p.per_period.clone(), Unit::Hbar);
    rep.series("analytic", p.analytic.clone(), Unit::Hbar);
    rep.quantity("total", p.total, Unit::Hbar);
    rep.quantity("analytic_total", p.analytic_total, Unit::Hbar);
    rep.quantity(
        "max_dev_over_tol",
        p.worst_relative_error(),
        Unit::Dimensionless,
    );
    rep.series("prob_left", p.prob_left.clone(), Unit::Probability);
    rep.series(
        "prob_spin_given_left",
        p.prob_spin_given_left.clone(),
        Unit::Probability,
    );
    let idx = |v: &[f64]| -> Vec<(f64, f64)> {
        v.iter()
            .enumerate()
            .map(|(i, y)| ((i + 1) as f64, *y))
            .collect()
    };
    let plot = Plot {
        title: format!(
            "Flux per period, N = {}, total = {:.4} hbar",
            p.n_rounds, p.total
        ),
        x_label: "period n".into(),
        y_label: "delta <L_x> (hbar)".into(),
        lines: vec![
            Line::new("simulated", idx(&p.per_period)),
            Line::new("analytic", idx(&p.analytic)).dashed(),
        ],
        ..Plot::default()
    };
    Ok((rep, Some(plot)))
}

pub fn momentum(a: &MomentumArgs) -> Outcome {
    let mut config = build_config(
        &a.common,
        Defaults {
            n_rounds: 100,
            delta_theta: 0.05,
            grid: 4096,
        },
    );
    let n = config.n_rounds as f64;
    let p0 = a.p0.unwrap_or(a.phase_budget / (2.0 * n * a.delta_x));
    let wall = WallPacketParams {
        grid_size: a.wall_grid,
        ..WallPacketParams::with_defaults(a.delta_x, p0)
    };
    config = config
        .with_wall(wall)
        .with_reflection_mode(a.reflection_mode.into());
    let flags = json!({
        "delta_x": a.delta_x,
        "p0": p0,
        "phase_budget_target": a.phase_budget,
        "wall_grid": a.wall_grid,
        "reflection_mode": a.reflection_mode,
        "sweep": a.sweep,
    });
    let start = Instant::now();
    if a.sweep {
        let dt = config.rotor.delta_theta;
        let ladder: Vec<(f64, f64)> = (0..4)
            .map(|k| (dt / f64::from(1 << k), a.delta_x / f64::from(1 << k)))
            .collect();
        let rows = sweep_vanishing(&config, &ladder)?;
        let mut rep = ReportEnvelope::new("momentum", echo(&config, &a.common, flags));
        rep.timings
            .insert("experiment".into(), start.elapsed().as_secs_f64());
        rep.table(
            "ladder",
            &[
                ("delta_theta", Unit::Radians),
                ("delta_x", Unit::Length),
                ("p_transfer", Unit::P0Units),
                ("p_transfer_analytic", Unit::P0Units),
                ("lx_shift", Unit::Hbar),
                ("phase_budget", Unit::Dimensionless),
            ],
            rows.iter()
                .map(|r| {
                    vec![
                        r.delta_theta,
                        r.delta_x,
                        r.p_transfer,
                        r.p_transfer_analytic,
                        r.lx_shift,
                        r.phase_budget,
                    ]
                })
                .collect(),
        );
        rep.series(
            "decay_ratio",
            rows.windows(2)
                .map(|w| w[0].p_transfer / w[1].p_transfer)
                .collect(),
            Unit::Dimensionless,
        );
        rep.text(
            "warnings",
            rows.iter().flat_map(|r| r.warnings.clone()).collect(),
        );
        let plot = Plot {
            title: "Linear momentum transfer along the ladder".into(),
            x_label: "delta theta (rad)".into(),
            y_label: "p transfer (p0 units)".into(),
            log_x: true,
            log_y: true,
            lines: vec![
                Line::new(
                    "simulated",
                    rows.iter().map(|r| (r.delta_theta, r.p_transfer)).collect(),
                ),
                Line::new(
                    "analytic",
                    rows.iter()
                        .map(|r| (r.delta_theta, r.p_transfer_analytic))
                        .collect(),
                )
                .dashed(),
            ],
        };
        return Ok((rep, Some(plot)));
    }
    no_svg(&a.common, "a single momentum run (use --sweep)")?;
    let r = run_momentum_experiment(&config)?;
    let mut half = config.clone();
    half.wall_packet = Some(WallPacketParams {
        delta_x: wall.delta_x / 2.0,
        extent: wall.extent / 2.0,
        ..wall
    });
    let rh = run_momentum_experiment(&half)?;
    let mut rep = ReportEnvelope::new("momentum", echo(&config, &a.common, flags));
    rep.timings
        .insert("experiment".into(), start.elapsed().as_secs_f64());
    rep.quantity("p_transfer", r.p_transfer, Unit::P0Units);
    rep.quantity("p_transfer_left", r.p_transfer_left, Unit::P0Units);
    rep.quantity(
        "p_transfer_postselected",
        r.p_transfer_postselected,
        Unit::P0Units,
    );
    rep.quantity("p_transfer_analytic", r.p_transfer_analytic, Unit::P0Units);
    rep.quantity(
        "residual",
        (r.p_transfer - r.p_transfer_analytic).abs(),
        Unit::P0Units,
    );
    rep.quantity(
        "residual_half_dx",
        (rh.p_transfer - rh.p_transfer_analytic).abs(),
        Unit::P0Units,
    );
    if let Some(k) = r.kappa {
        rep.quantity("kappa", k, Unit::Dimensionless);
    }
    rep.quantity("lx_shift", r.lx_shift, Unit::Hbar);
    rep.quantity("lx_shift_left", r.lx_shift_left, Unit::Hbar);
    rep.quantity("phase_budget", r.phase_budget, Unit::Dimensionless);
    rep.quantity("prob_left", r.prob_left, Unit::Probability);
    rep.quantity(
        "prob_spin_given_left",
        r.prob_spin_given_left,
        Unit::Probability,
    );
    rep.quantity("wall_coherence", r.wall_coherence, Unit::Probability);
    rep.quantity("p0", r.p0, Unit::P0Units);
    rep.text(
        "reflection_mode",
        vec![serde_json::to_value(r.reflection_mode)
            .unwrap_or_default()
            .as_str()
            .unwrap_or_default()
            .to_string()],
    );
    rep.text("warnings", r.warnings);
    Ok((rep, None))
}

pub fn sweep(a: &SweepArgs) -> Outcome {
    if a.common.n_rounds.is_some() {
        return Err(CliError::Usage(
            "sweep takes --n-ladder, not --n-rounds".into(),
        ));
    }
    if a.n_ladder.is_empty() {
        return Err(CliError::Usage("--n-ladder is empty".into()));
    }
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut config = build_config(
        &a.common,
        Defaults {
            n_rounds: a.n_ladder[0],
            delta_theta: 0.05,
            grid: 256,
        },
    );
    for &n in &a.n_ladder {
        config.n_rounds = n;
        let r = run_shift_experiment(&config)?;
        let c = if config.ideal {
            1.0
        } else {
            survival_amplitude(n, config.epsilon())
        };
        rows.push(vec![
            n as f64,
            r.prob_left,
            c * c,
            r.shift,
            r.deviation(),
            r.predicted_bound,
        ]);
    }
    let monotone = rows.windows(2).all(|w| w[1][1] > w[0][1]);
    config.n_rounds = a.n_ladder[0];
    let mut rep = ReportEnvelope::new(
        "sweep",
        echo(&config, &a.common, json!({ "n_ladder": a.n_ladder })),
    );
    rep.timings
        .insert("experiment".into(), start.elapsed().as_secs_f64());
    rep.table(
        "ladder",
        &[
            ("n_rounds", Unit::Index),
            ("survival", Unit::Probability),
            ("survival_oracle", Unit::Probability),
            ("shift", Unit::Hbar),
            ("deviation", Unit::Hbar),
            ("predicted_bound", Unit::Hbar),
        ],
        rows.clone(),
    );
    rep.quantity(
        "survival_monotone",
        f64::from(u8::from(monotone)),
        Unit::Dimensionless,
    );
    let col = |j: usize| -> Vec<(f64, f64)> { rows.iter().map(|r| (r[0], r[j])).collect() };
    let plot = Plot {
        title: "Convergence along N".into(),
        x_label: "N".into(),
        y_label: "value".into(),
        log_x: true,
        log_y: true,
        lines: vec![
            Line::new(
                "1 - P(left)",
                rows.iter().map(|r| (r[0], 1.0 - r[1])).collect(),
            ),
            Line::new(
                "1 - cos^4N",
                rows.iter().map(|r| (r[0], 1.0 - r[2])).collect(),
            )
            .dashed(),
            Line::new("|shift dev|", col(4)),
            Line::new("(1 - c)/2", col(5)).dashed(),
        ],
    };
    Ok((rep, Some(plot)))
}

pub fn backward(a: &BackwardArgs) -> Outcome {
    no_svg(&a.common, "backward")?;
    let config = build_config(
        &a.common,
        Defaults {
            n_rounds: 100,
            delta_theta: 0.05,
            grid: 1024,
        },
    );
    let start = Instant::now();
    let f = backward_check(&config)?;
    let mut rep = ReportEnvelope::new("backward", echo(&config, &a.common, json!({})));
    rep.timings
        .insert("experiment".into(), start.elapsed().as_secs_f64());
    rep.quantity("fidelity", f, Unit::Probability);
    rep.quantity("infidelity", 1.0 - f, Unit::Probability);
    Ok((rep, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        let ps = CliError::Core(amflow_core::Error::PostSelectionFailed {
            prob_left: 0.0,
            prob_spin: 0.0,
        });
        assert_eq!(ps.exit_code(), 2);
        assert_eq!(
            CliError::Core(amflow_core::Error::ModelValidity { phase_budget: 2.0 }).exit_code(),
            3
        );
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        assert_eq!(
            CliError::Core(amflow_core::Error::InvalidConfig("x".into())).exit_code(),
            1
        );
    }
}
