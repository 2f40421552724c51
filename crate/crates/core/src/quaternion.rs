//! Quaternion algebra over `f64` and the position-dependent imaginary unit.
//!
//! The imaginary units multiply as `e_i e_j = -δ_ij + Σ_k ε_ijk e_k`. The
//! unit radial quaternion `j(x) = (x·e)/|x|` squares to -1 and spans, together
//! with 1, the complex subalgebra onto which commuting quaternions project.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// Guard below which a vector is treated as having no direction.
pub const ZERO_VECTOR_GUARD: f64 = 1e-300;
/// Largest scalar part accepted by [`Quaternion::exp_pure`].
pub const PURE_SCALAR_TOL: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq, Debug, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn zero() -> Self {
        Vec3::default()
    }

    pub fn dot(&self, o: &Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn component(&self, i: usize) -> f64 {
        match i {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        self.scale(-1.0)
    }
}

/// `w + x e1 + y e2 + z e3`.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn one() -> Self {
        Quaternion::new(1.0, 0.0, 0.0, 0.0)
    }

    pub fn scalar(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    pub fn from_vec(v: Vec3) -> Self {
        Quaternion::new(0.0, v.x, v.y, v.z)
    }

    pub fn vec_part(&self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Inverse of a unit quaternion; for general quaternions divide by the
    /// squared norm.
    pub fn inverse(&self) -> Result<Self> {
        let n2 = self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z;
        if n2 < ZERO_VECTOR_GUARD {
            return Err(Error::ZeroVector);
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    /// Exponential of a pure quaternion: `cos|v| + (v/|v|) sin|v|`.
    ///
    /// The scalar part must vanish to within [`PURE_SCALAR_TOL`].
    pub fn exp_pure(&self) -> Result<Self> {
        if self.w.abs() > PURE_SCALAR_TOL {
            return Err(Error::NotPure(self.w));
        }
        let v = self.vec_part();
        let theta = v.norm();
        if theta < ZERO_VECTOR_GUARD {
            return Ok(Quaternion::one());
        }
        let s = theta.sin() / theta;
        Ok(Quaternion::new(theta.cos(), v.x * s, v.y * s, v.z * s))
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y + self.y * o.w + self.z * o.x - self.x * o.z,
            self.w * o.z + self.z * o.w + self.x * o.y - self.y * o.x,
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

/// Hamilton product as a free function.
pub fn qmul(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b
}

/// The unit radial imaginary quaternion `j(x) = (x·e)/|x|`.
pub fn unit_radial(x: Vec3) -> Result<Quaternion> {
    let n = x.norm();
    if n < ZERO_VECTOR_GUARD {
        return Err(Error::ZeroVector);
    }
    Ok(Quaternion::from_vec(x.scale(1.0 / n)))
}

/// `cos θ + j(x) sin θ`: the exponential of `j(x)·θ`.
pub fn radial_phase(x: Vec3, theta: f64) -> Result<Quaternion> {
    let j = unit_radial(x)?;
    Ok(Quaternion::scalar(theta.cos()) + j.scale(theta.sin()))
}

/// Project a quaternion onto the complex subalgebra spanned by `{1, j(x)}`.
///
/// Returns the complex coordinates `a + b·i` (with `i` standing for `j(x)`)
/// and the Euclidean norm of the rejected component. Quaternions that commute
/// with `j(x)` project with zero residual.
pub fn complex_project(q: Quaternion, x: Vec3) -> Result<(Complex64, f64)> {
    let j = unit_radial(x)?;
    let a = q.w;
    // Scalar part of -j(x)·q picks out the coefficient along j(x).
    let b = (-j * q).w;
    let rest = q - (Quaternion::scalar(a) + j.scale(b));
    Ok((Complex64::new(a, b), rest.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const E1: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    const E2: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    const E3: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[test]
    fn imaginary_unit_table() {
        assert_eq!(E1 * E2, E3);
        assert_eq!(E2 * E3, E1);
        assert_eq!(E3 * E1, E2);
        assert_eq!(E2 * E1, -E3);
        assert_eq!(E1 * E1, Quaternion::scalar(-1.0));
        assert_eq!(E2 * E2, Quaternion::scalar(-1.0));
        assert_eq!(E3 * E3, Quaternion::scalar(-1.0));
    }

    #[test]
    fn radial_unit_squares_to_minus_one() {
        let x = Vec3::new(0.3, -1.2, 0.7);
        let j = unit_radial(x).unwrap();
        let jj = j * j;
        assert!((jj.w + 1.0).abs() < 1e-15);
        assert!(jj.vec_part().norm() < 1e-15);
    }

    #[test]
    fn zero_vector_has_no_direction() {
        assert_eq!(unit_radial(Vec3::zero()), Err(Error::ZeroVector));
    }

    #[test]
    fn exp_pure_matches_axis_angle() {
        let x = Vec3::new(1.0, 2.0, -0.5);
        let theta = 0.8137;
        let j = unit_radial(x).unwrap();
        let via_exp = Quaternion::from_vec(x.scale(theta / x.norm()))
            .exp_pure()
            .unwrap();
        let direct = Quaternion::scalar(theta.cos()) + j.scale(theta.sin());
        assert!((via_exp - direct).norm() < 1e-14);
    }

    #[test]
    fn exp_pure_rejects_scalar_part() {
        let q = Quaternion::new(1e-6, 1.0, 0.0, 0.0);
        assert!(matches!(q.exp_pure(), Err(Error::NotPure(_))));
    }

    #[test]
    fn projection_recovers_commutant_coordinates() {
        let x = Vec3::new(0.2, 0.4, -1.0);
        let j = unit_radial(x).unwrap();
        let q = Quaternion::scalar(0.25) + j.scale(-1.5);
        let (c, residual) = complex_project(q, x).unwrap();
        assert!((c.re - 0.25).abs() < 1e-15);
        assert!((c.im + 1.5).abs() < 1e-15);
        assert!(residual < 1e-15);

        // A component orthogonal to span{1, j(x)} lands in the residual.
        let perp = Vec3::new(1.0, 0.0, 0.0).cross(&x);
        let q2 = q + Quaternion::from_vec(perp);
        let (c2, residual2) = complex_project(q2, x).unwrap();
        assert!((c2 - c).norm() < 1e-15);
        assert!((residual2 - perp.norm()).abs() < 1e-12);
    }
}
