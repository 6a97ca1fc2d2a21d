//! One period of box dynamics, conditioned on the wall angle.
//!
//! Per period the particle meets the partition once (reflect `cos eps`,
//! transmit `i sin eps`). In the wall basis a `down_theta` particle on the
//! right is reflected back into the box; an `up_theta` particle passes
//! through the wall and is recorded as a fresh escaped packet `Out(1)`, while
//! older escaped packets move one step further out.

use crate::error::{Error, Result};
use crate::state::JointState;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Orientation of the right-hand wall during one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WallOrientation {
    /// The wall angle is the rotor coordinate.
    Rotor,
    /// A classical wall at a fixed angle.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodUnitary {
    pub epsilon: f64,
    pub wall: WallOrientation,
    /// Stamp `exp(-2i p0 x)` on amplitude reflected by the wall this period.
    pub reflection_phase: bool,
    /// Lossless up channel: `Left` is untouched and nothing leaks out of it.
    pub ideal: bool,
}

impl PeriodUnitary {
    pub fn rotor(epsilon: f64) -> Self {
        Self {
            epsilon,
            wall: WallOrientation::Rotor,
            reflection_phase: false,
            ideal: false,
        }
    }

    pub fn fixed(epsilon: f64, theta: f64) -> Self {
        Self {
            epsilon,
            wall: WallOrientation::Fixed(theta),
            reflection_phase: false,
            ideal: false,
        }
    }

    pub fn with_reflection_phase(mut self, on: bool) -> Self {
        self.reflection_phase = on;
        self
    }

    pub fn with_ideal(mut self, on: bool) -> Self {
        self.ideal = on;
        self
    }
}

/// `cos^{2N}(eps)`: the `Left` amplitude of the transparent channel after `2N` periods.
pub fn survival_amplitude(n_rounds: usize, epsilon: f64) -> f64 {
    epsilon.cos().powi(2 * n_rounds as i32)
}

/// Per-slice constants.
#[derive(Clone, Copy)]
struct Coeffs {
    ce: f64,
    se: f64,
    ch: f64,
    sh: f64,
    phase: Option<Complex64>,
    ideal: bool,
}

impl Coeffs {
    fn new(u: &PeriodUnitary, theta: f64, phase: Option<Complex64>) -> Self {
        let (se, ce) = u.epsilon.sin_cos();
        let (sh, ch) = (0.5 * theta).sin_cos();
        Self {
            ce,
            se,
            ch,
            sh,
            phase,
            ideal: u.ideal,
        }
    }

    /// z-basis `(up, down)` to wall-basis `(up_theta, down_theta)` coefficients.
    fn to_wall(self, u: Complex64, d: Complex64) -> (Complex64, Complex64) {
        let is = I * self.sh;
        (u * self.ch + d * is, u * is + d * self.ch)
    }

    fn to_z(self, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
        let mis = -I * self.sh;
        (a * self.ch + b * mis, a * mis + b * self.ch)
    }
}

/// Forward period on one `(angle, position)` slice. `emit` is the slot of the new `Out(1)`.
fn forward_slice(k: &Coeffs, slice: &mut [Complex64], emit: usize) {
    let (lu, ld) = k.to_wall(slice[0], slice[1]);
    let (ru, rd) = k.to_wall(slice[2], slice[3]);
    let (c, is) = (k.ce, I * k.se);

    let (lu2, out) = if k.ideal {
        (lu, ru)
    } else {
        (lu * c + ru * is, lu * is + ru * c)
    };
    let ld2 = ld * c + rd * is;
    let mut rd2 = ld * is + rd * c;
    if let Some(p) = k.phase {
        rd2 *= p;
    }

    let (a, b) = k.to_z(lu2, ld2);
    slice[0] = a;
    slice[1] = b;
    let (a, b) = k.to_z(ZERO, rd2);
    slice[2] = a;
    slice[3] = b;
    let (a, b) = k.to_z(out, ZERO);
    slice[2 * emit] = a;
    slice[2 * emit + 1] = b;
}

/// Adjoint of [`forward_slice`]. `emit` is the slot currently holding `Out(1)`.
fn inverse_slice(k: &Coeffs, slice: &mut [Complex64], emit: usize) {
    let (lu, ld) = k.to_wall(slice[0], slice[1]);
    let (_, rd) = k.to_wall(slice[2], slice[3]);
    let (ou, _) = k.to_wall(slice[2 * emit], slice[2 * emit + 1]);
    let (c, mis) = (k.ce, -I * k.se);

    let (lu0, ru0) = if k.ideal {
        (lu, ou)
    } else {
        (lu * c + ou * mis, lu * mis + ou * c)
    };
    let rd = match k.phase {
        Some(p) => rd * p.conj(),
        None => rd,
    };
    let ld0 = ld * c + rd * mis;
    let rd0 = ld * mis + rd * c;

    let (a, b) = k.to_z(lu0, ld0);
    slice[0] = a;
    slice[1] = b;
    let (a, b) = k.to_z(ru0, rd0);
    slice[2] = a;
    slice[3] = b;
    slice[2 * emit] = ZERO;
    slice[2 * emit + 1] = ZERO;
}

fn run_slices(state: &mut JointState, u: &PeriodUnitary, emit: usize, forward: bool) {
    let slice_len = state.slice_len();
    let w_len = state.wall_len();
    let angles: Vec<f64> = match u.wall {
        WallOrientation::Rotor => (0..state.rotor_window().len())
            .map(|r| state.rotor_angle(r))
            .collect(),
        WallOrientation::Fixed(t) => vec![t],
    };
    // Skipping the multiply when p0 = 0 keeps that case bit-identical to the phase-free run.
    let phases: Option<Vec<Complex64>> = match (&state.wall, u.reflection_phase) {
        (Some(axis), true) if axis.box_momentum != 0.0 => Some(
            (0..w_len)
                .map(|w| Complex64::from_polar(1.0, -2.0 * axis.box_momentum * axis.position(w)))
                .collect(),
        ),
        _ => None,
    };
    state
        .amps
        .par_chunks_mut(slice_len)
        .enumerate()
        .for_each(|(i, slice)| {
            let (r, w) = (i / w_len, i % w_len);
            let theta = if angles.len() == 1 {
                angles[0]
            } else {
                angles[r]
            };
            let k = Coeffs::new(u, theta, phases.as_ref().map(|p| p[w]));
            if forward {
                forward_slice(&k, slice, emit);
            } else {
                inverse_slice(&k, slice, emit);
            }
        });
}

/// Advance `state` by one period.
pub fn apply_period(state: &mut JointState, u: &PeriodUnitary) -> Result<()> {
    let t = state.elapsed();
    let capacity = 2 * state.n_rounds();
    if t >= capacity {
        return Err(Error::OutModeOverflow {
            elapsed: t,
            capacity,
        });
    }
    run_slices(state, u, 2 + t, true);
    state.set_elapsed(t + 1);
    Ok(())
}

/// Undo the most recent period, i.e. apply its adjoint.
pub fn apply_period_inverse(state: &mut JointState, u: &PeriodUnitary) -> Result<()> {
    let t = state.elapsed();
    if t == 0 {
        return Err(Error::NothingToInvert);
    }
    run_slices(state, u, 1 + t, false);
    state.set_elapsed(t - 1);
    Ok(())
}

/// Apply the periods of `schedule` in order.
pub fn evolve(state: &mut JointState, schedule: &[PeriodUnitary]) -> Result<()> {
    let room = 2 * state.n_rounds() - state.elapsed();
    if schedule.len() > room {
        return Err(Error::OutModeOverflow {
            elapsed: state.elapsed() + room,
            capacity: 2 * state.n_rounds(),
        });
    }
    schedule.iter().try_for_each(|u| apply_period(state, u))
}

/// Apply the adjoints of `schedule` in reverse order.
pub fn evolve_inverse(state: &mut JointState, schedule: &[PeriodUnitary]) -> Result<()> {
    schedule
        .iter()
        .rev()
        .try_for_each(|u| apply_period_inverse(state, u))
}
