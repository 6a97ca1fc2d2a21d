//! The joint wavefunction over particle mode, spin, rotor angle and
//! (optionally) wall position.
//!
//! Amplitudes are stored as a discrete unit vector: a rotor sample carries the
//! quadrature weight `sqrt(h)` and a wall sample `sqrt(dx)`. Only the index
//! windows where the initial packets are nonzero are stored; the dynamics is
//! diagonal in angle and position, so everything outside those windows stays
//! exactly zero.
//!
//! Escaped wavepackets are kept as explicit modes `Out(1..=2N)`. Internally
//! they are stored by emission period, so advancing one period relabels them
//! instead of moving memory: at time `t`, `Out(k)` is the packet emitted
//! during period `t - k + 1`.

use crate::error::{Error, Result};
use crate::rotor::{ensure_unit, RotorPacket};
use crate::spectral;
use crate::spin::SpinVector;
use crate::tolerance;
use crate::wall::WallPacket;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::Range;

/// Where the particle is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParticleMode {
    Left,
    Right,
    /// Escaped wavepacket at distance `k D` from the left wall.
    Out(usize),
}

impl ParticleMode {
    /// All `2N + 2` modes in canonical order.
    pub fn all(n_rounds: usize) -> Vec<ParticleMode> {
        let mut v = vec![ParticleMode::Left, ParticleMode::Right];
        v.extend((1..=2 * n_rounds).map(ParticleMode::Out));
        v
    }
}

/// Inner products between states of the same kind.
pub trait Overlap {
    /// `<self|other>`.
    fn overlap(&self, other: &Self) -> Result<Complex64>;
    fn norm(&self) -> f64;
}

/// `|<a|b>|^2` for unit-norm `a` and `b`.
pub fn fidelity<T: Overlap>(a: &T, b: &T) -> Result<f64> {
    ensure_unit(a.norm())?;
    ensure_unit(b.norm())?;
    Ok(a.overlap(b)?.norm_sqr())
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct WallAxis {
    pub grid: usize,
    pub window: Range<usize>,
    pub extent: f64,
    pub delta_x: f64,
    pub box_momentum: f64,
}

impl WallAxis {
    pub fn step(&self) -> f64 {
        2.0 * self.extent / self.grid as f64
    }

    pub fn position(&self, w: usize) -> f64 {
        -self.extent + self.step() * (self.window.start + w) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    n_rounds: usize,
    elapsed: usize,
    rotor_grid: usize,
    rotor_window: Range<usize>,
    rotor_delta: f64,
    pub(crate) wall: Option<WallAxis>,
    pub(crate) amps: Vec<Complex64>,
}

impl JointState {
    /// `|L>|up_z>|Phi>(|Psi>)` at `t = 0`.
    pub fn initial(
        n_rounds: usize,
        rotor: &RotorPacket,
        wall: Option<&WallPacket>,
    ) -> Result<Self> {
        Self::product(
            n_rounds,
            0,
            ParticleMode::Left,
            SpinVector::up_z(),
            rotor,
            wall,
        )
    }

    /// Product state `|mode>|spin>|Phi>(|Psi>)` at time `elapsed` (in periods).
    pub fn product(
        n_rounds: usize,
        elapsed: usize,
        mode: ParticleMode,
        spin: SpinVector,
        rotor: &RotorPacket,
        wall: Option<&WallPacket>,
    ) -> Result<Self> {
        if n_rounds == 0 {
            return Err(Error::InvalidConfig("need at least one round".into()));
        }
        if elapsed > 2 * n_rounds {
            return Err(Error::InvalidConfig(format!(
                "t = {elapsed} exceeds the 2N = {} periods a run holds",
                2 * n_rounds
            )));
        }
        let norm = rotor.norm();
        ensure_unit(norm)?;
        let rotor_window = rotor.support();
        let (wall_axis, wall_amps) = match wall {
            Some(psi) => {
                ensure_unit(psi.norm())?;
                let window = psi.support();
                let sq = psi.spacing().sqrt();
                let amps: Vec<Complex64> = psi.samples()[window.clone()]
                    .iter()
                    .map(|z| z * sq)
                    .collect();
                let axis = WallAxis {
                    grid: psi.grid_size(),
                    window,
                    extent: psi.extent(),
                    delta_x: psi.delta_x(),
                    box_momentum: psi.box_momentum(),
                };
                (Some(axis), amps)
            }
            None => (None, vec![Complex64::new(1.0, 0.0)]),
        };
        let mut state = Self {
            n_rounds,
            elapsed,
            rotor_grid: rotor.grid_size(),
            rotor_window: rotor_window.clone(),
            rotor_delta: rotor.delta_theta(),
            wall: wall_axis,
            amps: Vec::new(),
        };
        let slot = state.slot_of(mode)?.ok_or_else(|| {
            Error::InvalidConfig(format!("{mode:?} is not populated at t = {elapsed}"))
        })?;
        let m = state.slot_count();
        let w_len = wall_amps.len();
        state.amps = vec![Complex64::new(0.0, 0.0); rotor_window.len() * w_len * m * 2];
        let sh = rotor.spacing().sqrt();
        for (r, phi) in rotor.samples()[rotor_window].iter().enumerate() {
            for (w, psi) in wall_amps.iter().enumerate() {
                let base = ((r * w_len + w) * m + slot) * 2;
                let a = phi * sh * psi;
                state.amps[base] = a * spin.up_z;
                state.amps[base + 1] = a * spin.down_z;
            }
        }
        Ok(state)
    }

    pub fn n_rounds(&self) -> usize {
        self.n_rounds
    }

    /// Periods applied so far.
    pub fn elapsed(&self) -> usize {
        self.elapsed
    }

    pub(crate) fn set_elapsed(&mut self, t: usize) {
        self.elapsed = t;
    }

    /// Number of particle modes, `2N + 2`.
    pub fn mode_count(&self) -> usize {
        2 * self.n_rounds + 2
    }

    pub(crate) fn slot_count(&self) -> usize {
        self.mode_count()
    }

    pub fn rotor_grid(&self) -> usize {
        self.rotor_grid
    }

    /// Stored rotor indices; amplitudes outside are identically zero.
    pub fn rotor_window(&self) -> Range<usize> {
        self.rotor_window.clone()
    }

    pub fn rotor_angle(&self, r: usize) -> f64 {
        -PI + 2.0 * PI * (self.rotor_window.start + r) as f64 / self.rotor_grid as f64
    }

    pub fn has_wall(&self) -> bool {
        self.wall.is_some()
    }

    pub fn wall_grid(&self) -> Option<usize> {
        self.wall.as_ref().map(|w| w.grid)
    }

    pub(crate) fn wall_len(&self) -> usize {
        self.wall.as_ref().map_or(1, |w| w.window.len())
    }

    /// Length of one `(angle, position)` slice: every mode and spin.
    pub(crate) fn slice_len(&self) -> usize {
        2 * self.slot_count()
    }

    /// Storage slot for `mode` at the current time, `None` if it cannot be populated yet.
    pub(crate) fn slot_of(&self, mode: ParticleMode) -> Result<Option<usize>> {
        match mode {
            ParticleMode::Left => Ok(Some(0)),
            ParticleMode::Right => Ok(Some(1)),
            ParticleMode::Out(k) if (1..=2 * self.n_rounds).contains(&k) => {
                Ok((k <= self.elapsed).then(|| 2 + self.elapsed - k))
            }
            ParticleMode::Out(k) => Err(Error::InvalidConfig(format!(
                "Out({k}) outside 1..={}",
                2 * self.n_rounds
            ))),
        }
    }

    fn index(&self, slot: usize, spin: usize, r: usize, w: usize) -> usize {
        ((r * self.wall_len() + w) * self.slot_count() + slot) * 2 + spin
    }

    /// Amplitude at a full-grid rotor index and wall index; spin 0 is up_z.
    pub fn amplitude(
        &self,
        mode: ParticleMode,
        spin: usize,
        rotor_idx: usize,
        wall_idx: usize,
    ) -> Result<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        let Some(slot) = self.slot_of(mode)? else {
            return Ok(zero);
        };
        if !self.rotor_window.contains(&rotor_idx) || spin > 1 {
            return Ok(zero);
        }
        let w = match &self.wall {
            Some(axis) if axis.window.contains(&wall_idx) => wall_idx - axis.window.start,
            Some(_) => return Ok(zero),
            None if wall_idx == 0 => 0,
            None => return Ok(zero),
        };
        Ok(self.amps[self.index(slot, spin, rotor_idx - self.rotor_window.start, w)])
    }

    pub fn norm(&self) -> f64 {
        spectral::sum_norm_sqr(&self.amps).sqrt()
    }

    /// Total probability in `mode`.
    pub fn mode_probability(&self, mode: ParticleMode) -> Result<f64> {
        let Some(slot) = self.slot_of(mode)? else {
            return Ok(0.0);
        };
        Ok(self
            .amps
            .chunks_exact(self.slice_len())
            .map(|s| s[2 * slot].norm_sqr() + s[2 * slot + 1].norm_sqr())
            .sum())
    }

    fn filter_slots(&self, modes: &[ParticleMode]) -> Result<Vec<usize>> {
        let mut slots = Vec::new();
        for &m in modes {
            if let Some(s) = self.slot_of(m)? {
                if !slots.contains(&s) {
                    slots.push(s);
                }
            }
        }
        Ok(slots)
    }

    /// Apply `P_modes (x) |b><b|` and renormalize.
    ///
    /// Returns the outcome probability alongside the conditional state. The
    /// original state is untouched.
    pub fn project(
        &self,
        modes: &[ParticleMode],
        spin_bra: &SpinVector,
    ) -> Result<(f64, JointState)> {
        spin_bra.ensure_normalized()?;
        let slots = self.filter_slots(modes)?;
        let [bu, bd] = spin_bra.as_array();
        let mut reduced = self.clone();
        let mut p_modes = 0.0;
        for slice in reduced.amps.chunks_exact_mut(self.slice_len()) {
            for slot in 0..self.slot_count() {
                let (u, d) = (slice[2 * slot], slice[2 * slot + 1]);
                if slots.contains(&slot) {
                    p_modes += u.norm_sqr() + d.norm_sqr();
                    let c = bu.conj() * u + bd.conj() * d;
                    slice[2 * slot] = bu * c;
                    slice[2 * slot + 1] = bd * c;
                } else {
                    slice[2 * slot] = Complex64::new(0.0, 0.0);
                    slice[2 * slot + 1] = Complex64::new(0.0, 0.0);
                }
            }
        }
        let p = spectral::sum_norm_sqr(&reduced.amps);
        if p.is_nan() || p < tolerance::POSTSELECT_FLOOR {
            let prob_spin = if p_modes > 0.0 { p / p_modes } else { 0.0 };
            return Err(Error::PostSelectionFailed {
                prob_left: p_modes,
                prob_spin,
            });
        }
        let s = p.sqrt();
        reduced.amps.iter_mut().for_each(|z| *z /= s);
        Ok((p, reduced))
    }

    /// Apply `P_modes` (spin untouched) and renormalize.
    pub fn project_modes(&self, modes: &[ParticleMode]) -> Result<(f64, JointState)> {
        let slots = self.filter_slots(modes)?;
        let mut reduced = self.clone();
        for slice in reduced.amps.chunks_exact_mut(self.slice_len()) {
            for slot in (0..self.slot_count()).filter(|s| !slots.contains(s)) {
                slice[2 * slot] = Complex64::new(0.0, 0.0);
                slice[2 * slot + 1] = Complex64::new(0.0, 0.0);
            }
        }
        let p = spectral::sum_norm_sqr(&reduced.amps);
        if p.is_nan() || p < tolerance::POSTSELECT_FLOOR {
            return Err(Error::PostSelectionFailed {
                prob_left: p,
                prob_spin: 0.0,
            });
        }
        let s = p.sqrt();
        reduced.amps.iter_mut().for_each(|z| *z /= s);
        Ok((p, reduced))
    }

    /// Wall wavefunction `<mode, b, theta_j|psi>` at full-grid rotor index `rotor_idx`, normalized.
    pub fn conditional_wall(
        &self,
        mode: ParticleMode,
        spin_bra: &SpinVector,
        rotor_idx: usize,
    ) -> Result<(f64, WallPacket)> {
        let axis = self
            .wall
            .as_ref()
            .ok_or_else(|| Error::DimensionMismatch("state has no wall axis".into()))?;
        spin_bra.ensure_normalized()?;
        let [bu, bd] = spin_bra.as_array();
        let mut samples = vec![Complex64::new(0.0, 0.0); axis.grid];
        if let (Some(slot), true) = (self.slot_of(mode)?, self.rotor_window.contains(&rotor_idx)) {
            let r = rotor_idx - self.rotor_window.start;
            for w in 0..self.wall_len() {
                let i = self.index(slot, 0, r, w);
                samples[axis.window.start + w] =
                    bu.conj() * self.amps[i] + bd.conj() * self.amps[i + 1];
            }
        }
        let p = spectral::sum_norm_sqr(&samples);
        if p.is_nan() || p < tolerance::POSTSELECT_FLOOR {
            return Err(Error::PostSelectionFailed {
                prob_left: 0.0,
                prob_spin: p,
            });
        }
        let scale = 1.0 / (p * axis.step()).sqrt();
        samples.iter_mut().for_each(|z| *z *= scale);
        let packet =
            WallPacket::from_samples(samples, axis.extent, axis.delta_x, axis.box_momentum)?;
        Ok((p, packet))
    }

    /// Probability mass per rotor grid point (length `G`), summed over everything else.
    pub fn rotor_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.rotor_grid];
        let per_r = self.wall_len() * self.slice_len();
        for (r, block) in self.amps.chunks_exact(per_r).enumerate() {
            out[self.rotor_window.start + r] = spectral::sum_norm_sqr(block);
        }
        out
    }

    /// Rotor wavefunction `<mode, b|psi>` with its probability.
    ///
    /// Only defined without a wall axis, where the conditional rotor state is pure.
    pub fn conditional_rotor(
        &self,
        mode: ParticleMode,
        spin_bra: &SpinVector,
    ) -> Result<(f64, RotorPacket)> {
        if self.wall.is_some() {
            return Err(Error::DimensionMismatch(
                "rotor state is mixed when a wall axis is present".into(),
            ));
        }
        spin_bra.ensure_normalized()?;
        let slot = self.slot_of(mode)?;
        let [bu, bd] = spin_bra.as_array();
        let mut samples = vec![Complex64::new(0.0, 0.0); self.rotor_grid];
        if let Some(slot) = slot {
            for (r, slice) in self.amps.chunks_exact(self.slice_len()).enumerate() {
                samples[self.rotor_window.start + r] =
                    bu.conj() * slice[2 * slot] + bd.conj() * slice[2 * slot + 1];
            }
        }
        let p = spectral::sum_norm_sqr(&samples);
        if p.is_nan() || p < tolerance::POSTSELECT_FLOOR {
            let p_mode = match slot {
                Some(_) => self.mode_probability(mode)?,
                None => 0.0,
            };
            let prob_spin = if p_mode > 0.0 { p / p_mode } else { 0.0 };
            return Err(Error::PostSelectionFailed {
                prob_left: p_mode,
                prob_spin,
            });
        }
        let h = 2.0 * PI / self.rotor_grid as f64;
        let scale = 1.0 / (p * h).sqrt();
        samples.iter_mut().for_each(|z| *z *= scale);
        Ok((p, RotorPacket::from_samples(samples, self.rotor_delta)?))
    }

    /// `<L_x>` of the rotor, averaged over every other index (hbar = 1).
    ///
    /// Does not require unit norm; the result is weighted by the state's own norm.
    pub fn expectation_lx(&self) -> f64 {
        let g = self.rotor_grid;
        let fft = spectral::forward_plan(g);
        let (w_len, slots) = (self.wall_len(), self.slot_count());
        let start = self.rotor_window.start;
        let fibers: Vec<(usize, usize, usize)> = (0..w_len)
            .flat_map(|w| (0..slots).flat_map(move |slot| (0..2).map(move |s| (w, slot, s))))
            .collect();
        let parts: Vec<(f64, f64)> = fibers
            .par_iter()
            .map_init(
                || vec![Complex64::new(0.0, 0.0); g],
                |buf, &(w, slot, s)| {
                    buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                    let mut any = false;
                    for r in 0..self.rotor_window.len() {
                        let z = self.amps[self.index(slot, s, r, w)];
                        any |= z.norm_sqr() != 0.0;
                        buf[start + r] = z;
                    }
                    if !any {
                        return (0.0, 0.0);
                    }
                    spectral::mean_bin(fft.as_ref(), buf)
                },
            )
            .collect();
        let (first, weight) = parts.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        first / weight
    }

    /// `<p>` of the wall position packet, averaged over every other index.
    pub fn expectation_p(&self) -> Result<f64> {
        let axis = self
            .wall
            .as_ref()
            .ok_or_else(|| Error::DimensionMismatch("state has no wall axis".into()))?;
        let fft = spectral::forward_plan(axis.grid);
        let (slots, w_len) = (self.slot_count(), self.wall_len());
        let fibers: Vec<(usize, usize, usize)> = (0..self.rotor_window.len())
            .flat_map(|r| (0..slots).flat_map(move |slot| (0..2).map(move |s| (r, slot, s))))
            .collect();
        let parts: Vec<(f64, f64)> = fibers
            .par_iter()
            .map_init(
                || vec![Complex64::new(0.0, 0.0); axis.grid],
                |buf, &(r, slot, s)| {
                    buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                    let mut any = false;
                    for w in 0..w_len {
                        let z = self.amps[self.index(slot, s, r, w)];
                        any |= z.norm_sqr() != 0.0;
                        buf[axis.window.start + w] = z;
                    }
                    if !any {
                        return (0.0, 0.0);
                    }
                    spectral::mean_bin(fft.as_ref(), buf)
                },
            )
            .collect();
        let (first, weight) = parts.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        Ok(PI / axis.extent * first / weight)
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.n_rounds == other.n_rounds
            && self.elapsed == other.elapsed
            && self.rotor_grid == other.rotor_grid
            && self.rotor_window == other.rotor_window
            && self.wall == other.wall
    }
}

impl Overlap for JointState {
    fn overlap(&self, other: &Self) -> Result<Complex64> {
        if !self.same_shape(other) {
            return Err(Error::DimensionMismatch(
                "joint states differ in shape".into(),
            ));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn norm(&self) -> f64 {
        JointState::norm(self)
    }
}
