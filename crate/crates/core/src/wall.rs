//! The wall's position wavefunction `Psi(x_w)` around the right end of the box.

use crate::error::{Error, Result};
use crate::rotor::{ensure_unit, PacketFamily};
use crate::spectral;
use crate::state::Overlap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::Range;

/// Default number of position samples.
pub const DEFAULT_GRID: usize = 1024;
/// Default grid half-extent in units of the packet half-width.
pub const DEFAULT_EXTENT_RATIO: f64 = 8.0;

/// Construction parameters for a [`WallPacket`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallPacketParams {
    pub grid_size: usize,
    /// Half-extent `X` of the periodic grid `[-X, X)`.
    pub extent: f64,
    /// Support half-width `dx_w`.
    pub delta_x: f64,
    /// Particle momentum `p0` (hbar = 1).
    pub box_momentum: f64,
    pub family: PacketFamily,
}

impl WallPacketParams {
    /// `P = 1024`, `X = 8 dx_w`, raised-cosine envelope.
    pub fn with_defaults(delta_x: f64, box_momentum: f64) -> Self {
        Self {
            grid_size: DEFAULT_GRID,
            extent: DEFAULT_EXTENT_RATIO * delta_x,
            delta_x,
            box_momentum,
            family: PacketFamily::RaisedCosine,
        }
    }

    pub fn build(&self) -> Result<WallPacket> {
        WallPacket::new(*self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WallPacket {
    samples: Vec<Complex64>,
    extent: f64,
    delta_x: f64,
    box_momentum: f64,
}

impl WallPacket {
    pub fn new(params: WallPacketParams) -> Result<Self> {
        let WallPacketParams {
            grid_size,
            extent,
            delta_x,
            box_momentum,
            family,
        } = params;
        if grid_size < 4 {
            return Err(Error::InvalidConfig(format!(
                "wall grid {grid_size} too small"
            )));
        }
        if !(delta_x > 0.0 && extent >= delta_x) {
            return Err(Error::InvalidConfig(format!(
                "wall packet needs 0 < dx_w <= X (dx_w = {delta_x}, X = {extent})"
            )));
        }
        if !box_momentum.is_finite() {
            return Err(Error::InvalidConfig("p0 must be finite".into()));
        }
        let step = 2.0 * extent / grid_size as f64;
        let samples: Vec<Complex64> = (0..grid_size)
            .map(|j| Complex64::new(family.envelope(-extent + step * j as f64, delta_x), 0.0))
            .collect();
        if samples.iter().all(|z| z.norm_sqr() == 0.0) {
            return Err(Error::InvalidConfig(
                "wall packet support contains no grid point".into(),
            ));
        }
        let mut packet = Self {
            samples,
            extent,
            delta_x,
            box_momentum,
        };
        let n = packet.norm();
        packet.samples.iter_mut().for_each(|z| *z /= n);
        Ok(packet)
    }

    /// Wrap raw samples on `[-extent, extent)` without normalizing them.
    pub fn from_samples(
        samples: Vec<Complex64>,
        extent: f64,
        delta_x: f64,
        box_momentum: f64,
    ) -> Result<Self> {
        if samples.len() < 4 || extent.is_nan() || extent <= 0.0 {
            return Err(Error::InvalidConfig(
                "wall grid too small or extent not positive".into(),
            ));
        }
        Ok(Self {
            samples,
            extent,
            delta_x,
            box_momentum,
        })
    }

    pub fn grid_size(&self) -> usize {
        self.samples.len()
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn delta_x(&self) -> f64 {
        self.delta_x
    }

    pub fn box_momentum(&self) -> f64 {
        self.box_momentum
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / self.grid_size() as f64
    }

    pub fn position(&self, j: usize) -> f64 {
        -self.extent + self.spacing() * j as f64
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn norm(&self) -> f64 {
        (spectral::sum_norm_sqr(&self.samples) * self.spacing()).sqrt()
    }

    /// Index range of the nonzero samples.
    pub fn support(&self) -> Range<usize> {
        let nz = |z: &Complex64| z.norm_sqr() != 0.0;
        match (
            self.samples.iter().position(nz),
            self.samples.iter().rposition(nz),
        ) {
            (Some(lo), Some(hi)) => lo..hi + 1,
            _ => 0..self.grid_size(),
        }
    }

    /// Wavenumber spacing of the periodic grid.
    pub fn momentum_step(&self) -> f64 {
        PI / self.extent
    }

    /// `exp(i q x) Psi(x)`.
    pub fn boosted(&self, q: f64) -> Self {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, z)| z * Complex64::from_polar(1.0, q * self.position(j)))
            .collect();
        Self { samples, ..*self }
    }

    /// `<p>` with hbar = 1, from the DFT in standard wavenumber ordering.
    ///
    /// A factor `exp(i q x)` raises the result by `q`.
    pub fn expectation_p(&self) -> Result<f64> {
        ensure_unit(self.norm())?;
        let mut buf = self.samples.clone();
        let (first, weight) =
            spectral::mean_bin(spectral::forward_plan(buf.len()).as_ref(), &mut buf);
        Ok(self.momentum_step() * first / weight)
    }
}

impl Overlap for WallPacket {
    fn overlap(&self, other: &Self) -> Result<Complex64> {
        if self.grid_size() != other.grid_size() || self.extent != other.extent {
            return Err(Error::DimensionMismatch("wall grids differ".into()));
        }
        let s: Complex64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * self.spacing())
    }

    fn norm(&self) -> f64 {
        WallPacket::norm(self)
    }
}
