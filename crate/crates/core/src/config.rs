//! Experiment configuration shared by every run.

use crate::error::{Error, Result};
use crate::rotor::{PacketFamily, RotorPacket};
use crate::spin::SpinOutcome;
use crate::wall::{WallPacket, WallPacketParams};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Construction parameters for the rotor packet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotorParams {
    pub grid_size: usize,
    pub delta_theta: f64,
    pub family: PacketFamily,
    #[serde(default)]
    pub center: f64,
}

impl RotorParams {
    pub fn new(grid_size: usize, delta_theta: f64) -> Self {
        Self {
            grid_size,
            delta_theta,
            family: PacketFamily::default(),
            center: 0.0,
        }
    }

    pub fn build(&self) -> Result<RotorPacket> {
        RotorPacket::centered(self.grid_size, self.delta_theta, self.center, self.family)
    }
}

/// How often the wall-reflection phase is stamped during a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ReflectionMode {
    /// One full imprint for the single excursion to the right: applied only
    /// during period `N`, when the reflected branch sits against the wall.
    #[default]
    OncePerTransit,
    /// Imprint on every period, for all amplitude reflected by the wall.
    PerPeriod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_rounds: usize,
    /// Partition parameter; `None` means `pi / 2N`.
    pub epsilon: Option<f64>,
    pub rotor: RotorParams,
    pub wall_packet: Option<WallPacketParams>,
    pub postselect: SpinOutcome,
    pub flux_wall_index: Option<usize>,
    /// Lossless up channel: `cos^{2N} eps -> 1`, nothing escapes from it.
    pub ideal: bool,
    pub reflection_mode: ReflectionMode,
}

impl ExperimentConfig {
    pub fn new(n_rounds: usize, rotor: RotorParams) -> Self {
        Self {
            n_rounds,
            epsilon: None,
            rotor,
            wall_packet: None,
            postselect: SpinOutcome::UpX,
            flux_wall_index: None,
            ideal: false,
            reflection_mode: ReflectionMode::default(),
        }
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.epsilon = Some(eps);
        self
    }

    pub fn with_postselect(mut self, outcome: SpinOutcome) -> Self {
        self.postselect = outcome;
        self
    }

    pub fn with_ideal(mut self, ideal: bool) -> Self {
        self.ideal = ideal;
        self
    }

    pub fn with_wall(mut self, params: WallPacketParams) -> Self {
        self.wall_packet = Some(params);
        self
    }

    pub fn with_reflection_mode(mut self, mode: ReflectionMode) -> Self {
        self.reflection_mode = mode;
        self
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(PI / (2.0 * self.n_rounds as f64))
    }

    /// `2N p0 dx_w`, or `None` without a wall packet.
    pub fn phase_budget(&self) -> Option<f64> {
        self.wall_packet
            .map(|w| 2.0 * self.n_rounds as f64 * w.box_momentum.abs() * w.delta_x)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_rounds < 2 {
            return Err(Error::InvalidConfig(format!(
                "N = {} must be at least 2",
                self.n_rounds
            )));
        }
        let eps = self.epsilon();
        if !(0.0..=PI / 4.0).contains(&eps) {
            return Err(Error::InvalidConfig(format!(
                "epsilon = {eps} must lie in [0, pi/4]"
            )));
        }
        let dt = self.rotor.delta_theta;
        if !(dt > 0.0 && dt <= PI / 8.0) {
            return Err(Error::InvalidConfig(format!(
                "dtheta = {dt} must lie in (0, pi/8]"
            )));
        }
        if !self.rotor.center.is_finite() {
            return Err(Error::InvalidConfig("rotor center must be finite".into()));
        }
        if let Some(n) = self.flux_wall_index {
            if !(1..=2 * self.n_rounds).contains(&n) {
                return Err(Error::InvalidConfig(format!(
                    "wall index {n} outside 1..={}",
                    2 * self.n_rounds
                )));
            }
        }
        self.rotor.build()?;
        if let Some(w) = &self.wall_packet {
            w.build()?;
        }
        Ok(())
    }

    pub(crate) fn build_wall(&self) -> Result<Option<WallPacket>> {
        self.wall_packet
            .as_ref()
            .map(WallPacketParams::build)
            .transpose()
    }
}
