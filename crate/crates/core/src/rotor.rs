//! The wall's angular wavefunction on a periodic grid over `[-pi, pi)`.
//!
//! Samples hold wavefunction values `Phi(theta_j)` normalized by quadrature,
//! `sum |Phi_j|^2 h = 1` with `h = 2 pi / G`. The Fourier view holds unit-norm
//! coefficients on integer angular-momentum modes `m` in `[-G/2, G/2)`, so
//! `L_x = -i d/dtheta` is diagonal there. Multiplying the samples by
//! `exp(-i k theta)` is an exact cyclic shift of the Fourier view by `-k`.

use crate::error::{Error, Result};
use crate::spectral;
use crate::state::Overlap;
use crate::tolerance;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::Range;

/// Envelope used to build a compactly supported packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PacketFamily {
    /// `cos^2(pi x / 2 dx)` on `|x| < dx`.
    #[default]
    RaisedCosine,
    /// Gaussian whose density `|Phi|^2` has standard deviation `dx / 3`,
    /// hard-zeroed outside `|x| <= dx`.
    TruncatedGaussian,
}

impl PacketFamily {
    /// Unnormalized envelope at offset `x` from the packet center.
    pub fn envelope(self, x: f64, half_width: f64) -> f64 {
        if x.abs() > half_width {
            return 0.0;
        }
        match self {
            PacketFamily::RaisedCosine => {
                if x.abs() == half_width {
                    0.0
                } else {
                    (0.5 * PI * x / half_width).cos().powi(2)
                }
            }
            PacketFamily::TruncatedGaussian => {
                let sigma = half_width / 3.0;
                (-0.25 * (x / sigma).powi(2)).exp()
            }
        }
    }
}

/// Map an angle difference to `(-pi, pi]`.
pub(crate) fn wrap_angle(x: f64) -> f64 {
    let mut y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        y = PI;
    }
    y
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotorPacket {
    samples: Vec<Complex64>,
    delta_theta: f64,
}

impl RotorPacket {
    /// A packet of the given family centered at `theta = 0`.
    pub fn new(grid_size: usize, delta_theta: f64, family: PacketFamily) -> Result<Self> {
        Self::centered(grid_size, delta_theta, 0.0, family)
    }

    pub fn centered(
        grid_size: usize,
        delta_theta: f64,
        center: f64,
        family: PacketFamily,
    ) -> Result<Self> {
        check_grid(grid_size)?;
        if !(delta_theta > 0.0 && delta_theta < PI) {
            return Err(Error::InvalidConfig(format!(
                "packet half-width {delta_theta} must lie in (0, pi)"
            )));
        }
        let h = 2.0 * PI / grid_size as f64;
        let samples: Vec<Complex64> = (0..grid_size)
            .map(|j| {
                let x = wrap_angle(-PI + h * j as f64 - center);
                Complex64::new(family.envelope(x, delta_theta), 0.0)
            })
            .collect();
        if samples.iter().all(|z| z.norm_sqr() == 0.0) {
            return Err(Error::InvalidConfig(format!(
                "no grid point of G = {grid_size} falls inside the packet support (dtheta = {delta_theta})"
            )));
        }
        Self::from_samples(samples, delta_theta)?.normalized()
    }

    /// Wrap raw samples without normalizing them.
    pub fn from_samples(samples: Vec<Complex64>, delta_theta: f64) -> Result<Self> {
        check_grid(samples.len())?;
        if samples
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidConfig("non-finite rotor sample".into()));
        }
        Ok(Self {
            samples,
            delta_theta,
        })
    }

    /// Rescale to unit quadrature norm.
    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::NotNormalized { norm: 0.0 });
        }
        self.samples.iter_mut().for_each(|z| *z /= n);
        Ok(self)
    }

    pub fn grid_size(&self) -> usize {
        self.samples.len()
    }

    pub fn delta_theta(&self) -> f64 {
        self.delta_theta
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.grid_size() as f64
    }

    pub fn angle(&self, j: usize) -> f64 {
        -PI + self.spacing() * j as f64
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.grid_size()).map(|j| self.angle(j)).collect()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Quadrature norm `sqrt(sum |Phi_j|^2 h)`.
    pub fn norm(&self) -> f64 {
        (spectral::sum_norm_sqr(&self.samples) * self.spacing()).sqrt()
    }

    /// Smallest index range holding every nonzero sample.
    ///
    /// Falls back to the full grid when the support wraps across `theta = pi`.
    pub fn support(&self) -> Range<usize> {
        let g = self.grid_size();
        let nz = |z: &Complex64| z.norm_sqr() != 0.0;
        match (
            self.samples.iter().position(nz),
            self.samples.iter().rposition(nz),
        ) {
            (Some(lo), Some(hi)) if !(nz(&self.samples[0]) && nz(&self.samples[g - 1])) => {
                lo..hi + 1
            }
            _ => 0..g,
        }
    }

    /// Unit-norm coefficients on modes `m = -G/2 .. G/2-1`, index `m + G/2`.
    pub fn fourier_view(&self) -> Vec<Complex64> {
        let g = self.grid_size();
        let scale = (self.spacing() / g as f64).sqrt();
        let mut buf: Vec<Complex64> = self.samples.iter().map(|z| z * scale).collect();
        spectral::forward_plan(g).process(&mut buf);
        (0..g)
            .map(|i| {
                let m = i as i64 - (g / 2) as i64;
                let z = buf[m.rem_euclid(g as i64) as usize];
                if m % 2 == 0 {
                    z
                } else {
                    -z
                }
            })
            .collect()
    }

    /// `exp(i k theta) Phi(theta)`.
    pub fn winding(&self, k: i64) -> Self {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, z)| z * Complex64::from_polar(1.0, k as f64 * self.angle(j)))
            .collect();
        Self {
            samples,
            delta_theta: self.delta_theta,
        }
    }

    /// `<L_x>` in units of hbar, evaluated in the Fourier view.
    ///
    /// The unpaired mode `m = -G/2` carries no angular momentum.
    pub fn expectation_lx(&self) -> Result<f64> {
        ensure_unit(self.norm())?;
        let g = self.grid_size();
        let mut buf = self.samples.clone();
        let (first, weight) = spectral::mean_bin(spectral::forward_plan(g).as_ref(), &mut buf);
        Ok(first / weight)
    }

    /// `integral |sin(theta/2) Phi(theta)|^2 dtheta` by grid quadrature.
    pub fn sin_half_weight(&self) -> f64 {
        let h = self.spacing();
        self.samples
            .iter()
            .enumerate()
            .map(|(j, z)| (0.5 * self.angle(j)).sin().powi(2) * z.norm_sqr() * h)
            .sum()
    }
}

impl Overlap for RotorPacket {
    fn overlap(&self, other: &Self) -> Result<Complex64> {
        if self.grid_size() != other.grid_size() {
            return Err(Error::DimensionMismatch(format!(
                "rotor grids {} vs {}",
                self.grid_size(),
                other.grid_size()
            )));
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
        RotorPacket::norm(self)
    }
}

fn check_grid(g: usize) -> Result<()> {
    if g < 2 || !g.is_power_of_two() {
        return Err(Error::InvalidConfig(format!(
            "grid size {g} must be a power of two >= 2"
        )));
    }
    Ok(())
}

pub(crate) fn ensure_unit(norm: f64) -> Result<()> {
    if (norm - 1.0).abs() > tolerance::UNITARY {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}
