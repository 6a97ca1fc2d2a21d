//! Fixtures shared by the benchmarks.

use amflow_core::{
    evolve, ExperimentConfig, JointState, PeriodUnitary, RotorParams, WallPacketParams,
};

/// Config for the rotor-only shift experiment at grid `g`.
pub fn shift_config(n_rounds: usize, g: usize) -> ExperimentConfig {
    ExperimentConfig::new(n_rounds, RotorParams::new(g, 0.05))
}

/// Joint state after `periods` rotor-wall periods, optionally with a wall axis of `wall_grid` points.
pub fn evolved_state(
    n_rounds: usize,
    g: usize,
    wall_grid: Option<usize>,
    periods: usize,
) -> JointState {
    let rotor = RotorParams::new(g, 0.05).build().expect("rotor packet");
    let wall = wall_grid.map(|p| {
        WallPacketParams {
            grid_size: p,
            ..WallPacketParams::with_defaults(1e-3, 0.05)
        }
        .build()
        .expect("wall packet")
    });
    let mut state = JointState::initial(n_rounds, &rotor, wall.as_ref()).expect("initial state");
    let eps = std::f64::consts::PI / (2.0 * n_rounds as f64);
    evolve(&mut state, &vec![PeriodUnitary::rotor(eps); periods]).expect("evolve");
    state
}
