//! Spin-1/2 states and the wall-axis basis change.
//!
//! A wall whose proper axis sits at angle `theta` from `z` in the y-z plane
//! is transparent to `|up_theta>` and reflects `|down_theta>`. In the z basis
//!
//! ```text
//! |up_theta>   =  cos(theta/2)|up_z> - i sin(theta/2)|down_z>
//! |down_theta> = -i sin(theta/2)|up_z> + cos(theta/2)|down_z>
//! ```

use crate::error::{Error, Result};
use crate::tolerance;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A spin-1/2 state in the z basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinVector {
    pub up_z: Complex64,
    pub down_z: Complex64,
}

impl SpinVector {
    pub const fn new(up_z: Complex64, down_z: Complex64) -> Self {
        Self { up_z, down_z }
    }

    pub fn up_z() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn down_z() -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn up_x() -> Self {
        let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::new(a, a)
    }

    pub fn down_x() -> Self {
        let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::new(a, -a)
    }

    /// Spin up along a wall axis at angle `theta`.
    pub fn up_theta(theta: f64) -> Self {
        let r = spin_rotation(theta);
        Self::new(r.0[0][0], r.0[1][0])
    }

    /// Spin down along a wall axis at angle `theta`.
    pub fn down_theta(theta: f64) -> Self {
        let r = spin_rotation(theta);
        Self::new(r.0[0][1], r.0[1][1])
    }

    pub fn as_array(&self) -> [Complex64; 2] {
        [self.up_z, self.down_z]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up_z.norm_sqr() + self.down_z.norm_sqr()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &SpinVector) -> Complex64 {
        self.up_z.conj() * other.up_z + self.down_z.conj() * other.down_z
    }

    pub(crate) fn ensure_normalized(&self) -> Result<()> {
        let n = self.norm_sqr().sqrt();
        if (n - 1.0).abs() > tolerance::IDENTITY {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(())
    }
}

/// Post-selected spin outcome along x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinOutcome {
    UpX,
    DownX,
}

impl SpinOutcome {
    pub fn bra(self) -> SpinVector {
        match self {
            SpinOutcome::UpX => SpinVector::up_x(),
            SpinOutcome::DownX => SpinVector::down_x(),
        }
    }

    /// Sign of the angular-momentum shift this outcome predicts, in units of hbar.
    pub fn expected_shift(self) -> f64 {
        match self {
            SpinOutcome::UpX => -1.0,
            SpinOutcome::DownX => 1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            SpinOutcome::UpX => SpinOutcome::DownX,
            SpinOutcome::DownX => SpinOutcome::UpX,
        }
    }
}

/// A 2x2 complex matrix acting on z-basis spin coefficients, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMatrix(pub [[Complex64; 2]; 2]);

impl SpinMatrix {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self([[one, zero], [zero, one]])
    }

    pub fn apply(&self, v: &SpinVector) -> SpinVector {
        let m = &self.0;
        SpinVector::new(
            m[0][0] * v.up_z + m[0][1] * v.down_z,
            m[1][0] * v.up_z + m[1][1] * v.down_z,
        )
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn mul(&self, rhs: &SpinMatrix) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Self(out)
    }

    /// Largest entry of `|M^dagger M - 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let id = SpinMatrix::identity();
        p.0.iter()
            .flatten()
            .zip(id.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Columns are `|up_theta>` and `|down_theta>` in the z basis.
///
/// Applying the adjoint maps z-basis coefficients to wall-basis coefficients.
pub fn spin_rotation(theta: f64) -> SpinMatrix {
    let (s, c) = (0.5 * theta).sin_cos();
    let c = Complex64::new(c, 0.0);
    let mis = -I * s;
    SpinMatrix([[c, mis], [mis, c]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn zero_angle_is_identity() {
        assert_eq!(spin_rotation(0.0), SpinMatrix::identity());
    }

    #[test]
    fn half_turn_sends_up_z_to_minus_i_down_z() {
        let v = spin_rotation(PI).apply(&SpinVector::up_z());
        assert!(close(v.up_z, Complex64::new(0.0, 0.0), 1e-15));
        assert!(close(v.down_z, -I, 1e-15));
    }

    #[test]
    fn x_overlaps_match_closed_form() {
        let theta = 0.3;
        let expect = Complex64::from_polar(FRAC_1_SQRT_2, -theta / 2.0);
        let up_x = SpinVector::up_x();
        assert!(close(
            up_x.inner(&SpinVector::up_theta(theta)),
            expect,
            1e-15
        ));
        assert!(close(
            up_x.inner(&SpinVector::down_theta(theta)),
            expect,
            1e-15
        ));
    }

    #[test]
    fn z_states_decompose_into_wall_basis() {
        // |up_z> = cos|up_t> + i sin|down_t>, |down_z> = i sin|up_t> + cos|down_t>
        let theta: f64 = 1.1;
        let (s, c) = (theta / 2.0).sin_cos();
        let (ut, dt) = (SpinVector::up_theta(theta), SpinVector::down_theta(theta));
        let uz = SpinVector::up_z();
        let dz = SpinVector::down_z();
        assert!(close(ut.inner(&uz), Complex64::new(c, 0.0), 1e-15));
        assert!(close(dt.inner(&uz), I * s, 1e-15));
        assert!(close(ut.inner(&dz), I * s, 1e-15));
        assert!(close(dt.inner(&dz), Complex64::new(c, 0.0), 1e-15));
    }

    #[test]
    fn rotation_is_unitary_across_the_circle() {
        for k in 0..64 {
            let theta = -PI + 2.0 * PI * k as f64 / 64.0;
            assert!(spin_rotation(theta).unitarity_defect() < 1e-14);
        }
    }

    #[test]
    fn normalization_check_rejects_scaled_states() {
        assert!(SpinVector::up_x().ensure_normalized().is_ok());
        let v = SpinVector::new(Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0));
        assert!(matches!(
            v.ensure_normalized(),
            Err(Error::NotNormalized { .. })
        ));
    }
}
