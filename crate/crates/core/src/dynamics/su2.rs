//! Helpers for 2×2 maps on the logical subspace.

use nalgebra::Matrix2;
use serde::Serialize;

use crate::C64;

pub type QubitMap = Matrix2<C64>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_x() -> QubitMap {
    Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
}

pub fn pauli_y() -> QubitMap {
    Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
}

pub fn pauli_z() -> QubitMap {
    Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
}

pub fn hadamard() -> QubitMap {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix2::new(c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0))
}

/// `exp(−i angle n·σ / 2)` for a unit axis `n`.
pub fn rotation(axis: [f64; 3], angle: f64) -> QubitMap {
    let (s, co) = (0.5 * angle).sin_cos();
    let [x, y, z] = axis;
    Matrix2::new(
        c(co, -s * z),
        c(-s * y, -s * x),
        c(s * y, -s * x),
        c(co, s * z),
    )
}

/// `|tr(A† B)|² / 4`, insensitive to a global phase.
pub fn fidelity_proxy(ideal: &QubitMap, realized: &QubitMap) -> f64 {
    (ideal.adjoint() * realized).trace().norm_sqr() / 4.0
}

/// Unitary factor `M (M†M)^{−1/2}` of the polar decomposition, or `None`
/// when `M` is numerically singular.
pub fn polar_unitary(m: &QubitMap) -> Option<QubitMap> {
    let p = m.adjoint() * m;
    let det = (p[(0, 0)] * p[(1, 1)] - p[(0, 1)] * p[(1, 0)]).re;
    if det <= 1e-24 {
        return None;
    }
    // √P = (P + √det I) / √(tr P + 2√det) for positive 2×2 P
    let root_det = det.sqrt();
    let norm = (p.trace().re + 2.0 * root_det).sqrt();
    let sqrt_p = (p + QubitMap::identity() * c(root_det, 0.0)) / c(norm, 0.0);
    sqrt_p.try_inverse().map(|inv| m * inv)
}

/// Axis and angle of a 2×2 unitary, modulo global phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisAngle {
    /// Unit axis with `z ≥ 0` (ties broken towards `x ≥ 0`, then `y ≥ 0`).
    pub axis: [f64; 3],
    /// Rotation angle in `(−π, π]`.
    pub angle: f64,
}

impl AxisAngle {
    /// Polar angle of the axis from `+z`, in `[0, π/2]`.
    pub fn tilt(&self) -> f64 {
        let [x, y, z] = self.axis;
        (x * x + y * y).sqrt().atan2(z)
    }

    pub fn azimuth(&self) -> f64 {
        self.axis[1].atan2(self.axis[0])
    }

    pub fn to_unitary(&self) -> QubitMap {
        rotation(self.axis, self.angle)
    }
}

pub fn axis_angle(u: &QubitMap) -> AxisAngle {
    let det = u.determinant();
    let r = u * C64::from_polar(1.0, -0.5 * det.arg());
    let mut cos_half = 0.5 * (r[(0, 0)] + r[(1, 1)]).re;
    let mut v = [
        -0.5 * (r[(1, 0)] + r[(0, 1)]).im,
        0.5 * (r[(1, 0)] - r[(0, 1)]).re,
        -0.5 * (r[(0, 0)] - r[(1, 1)]).im,
    ];
    if cos_half < 0.0 {
        cos_half = -cos_half;
        v = v.map(|x| -x);
    }
    let sin_half = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if sin_half < 1e-15 {
        return AxisAngle {
            axis: [0.0, 0.0, 1.0],
            angle: 0.0,
        };
    }
    let mut axis = v.map(|x| x / sin_half);
    let mut angle = 2.0 * sin_half.atan2(cos_half);
    let flip =
        axis[2] < 0.0 || (axis[2] == 0.0 && (axis[0] < 0.0 || (axis[0] == 0.0 && axis[1] < 0.0)));
    if flip {
        axis = axis.map(|x| -x);
        angle = -angle;
    }
    if angle <= -std::f64::consts::PI {
        angle += 2.0 * std::f64::consts::PI;
    }
    AxisAngle { axis, angle }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn close(a: &QubitMap, b: &QubitMap) -> bool {
        fidelity_proxy(a, b) > 1.0 - 1e-12
    }

    #[test]
    fn rotations_match_pauli_exponentials() {
        let x = rotation([1.0, 0.0, 0.0], PI);
        assert!(close(&x, &pauli_x()));
        assert!(close(&rotation([0.0, 0.0, 1.0], PI), &pauli_z()));
        let n = [
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
            std::f64::consts::FRAC_1_SQRT_2,
        ];
        assert!(close(&rotation(n, PI), &hadamard()));
    }

    #[test]
    fn axis_angle_round_trip() {
        let cases = [
            ([0.0, 0.0, 1.0], 0.7),
            ([0.6, 0.0, 0.8], -2.1),
            ([0.0, 1.0, 0.0], PI),
            ([0.48, 0.6, -0.64], 1.3),
        ];
        for (axis, angle) in cases {
            let u = rotation(axis, angle) * C64::from_polar(1.0, 0.37);
            let aa = axis_angle(&u);
            assert!(aa.axis[2] >= 0.0);
            assert!(aa.angle > -PI && aa.angle <= PI);
            assert!(close(&aa.to_unitary(), &u));
        }
        let id = axis_angle(&QubitMap::identity());
        assert_eq!(id.angle, 0.0);
    }

    #[test]
    fn lower_hemisphere_axis_is_flipped() {
        let aa = axis_angle(&rotation([0.0, 0.0, -1.0], 0.5));
        assert_eq!(aa.axis, [0.0, 0.0, 1.0]);
        assert!((aa.angle + 0.5).abs() < 1e-14);
    }

    #[test]
    fn polar_factor_of_scaled_unitary() {
        let u = rotation([0.0, 0.6, 0.8], 1.1);
        let m = u * c(0.9, 0.0);
        let p = polar_unitary(&m).unwrap();
        assert!((p - u).norm() < 1e-14);
        assert!(polar_unitary(&QubitMap::zeros()).is_none());
    }
}
