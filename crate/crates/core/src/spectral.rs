//! FFT helpers shared by the rotor and wall packets.
//!
//! Both packets live on periodic grids. Their conjugate momenta are read off
//! the discrete Fourier transform in the standard ordering, with the unpaired
//! Nyquist bin assigned zero momentum so that real wavefunctions have exactly
//! zero mean momentum.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub(crate) fn forward_plan(len: usize) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft_forward(len)
}

/// Integer wavenumber of FFT bin `k` on a grid of length `len`, Nyquist mapped to 0.
pub(crate) fn signed_bin(k: usize, len: usize) -> f64 {
    let half = len / 2;
    if len.is_multiple_of(2) && k == half {
        0.0
    } else if k < half || (len % 2 == 1 && k == half) {
        k as f64
    } else {
        k as f64 - len as f64
    }
}

/// Mean integer wavenumber and total weight of `buf` after an in-place FFT.
///
/// Sums run in bin order so the result does not depend on threading.
pub(crate) fn mean_bin(fft: &dyn Fft<f64>, buf: &mut [Complex64]) -> (f64, f64) {
    fft.process(buf);
    let len = buf.len();
    let mut first = 0.0;
    let mut weight = 0.0;
    for (k, z) in buf.iter().enumerate() {
        let w = z.norm_sqr();
        first += signed_bin(k, len) * w;
        weight += w;
    }
    (first, weight)
}

pub(crate) fn sum_norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}
