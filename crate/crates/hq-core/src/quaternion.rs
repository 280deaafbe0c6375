//! Quaternion arithmetic and the tuple pairing `r·ū`.
//!
//! Components are ordered `(w, x, y, z)` with the right-handed Hamilton
//! convention `ij = k`; the commutation table of the left-invariant vector
//! fields (see [`crate::operators`]) cross-checks the sign consistency of
//! this choice.

use serde::{Deserialize, Serialize};

use crate::error::HqError;

/// A point of ℝ³ (imaginary parts, center components).
pub type Vec3 = [f64; 3];

/// Euclidean norm on ℝ³.
pub fn vec3_norm(v: &Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// A quaternion `w + xi + yj + zk`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 4]", from = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
}

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    /// Conjugate: negates the imaginary components, fixes `w`.
    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Imaginary part as a point of ℝ³; zero iff the quaternion is real.
    pub fn im(self) -> Vec3 {
        [self.x, self.y, self.z]
    }

    pub fn norm_sq(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(s * self.w, s * self.x, s * self.y, s * self.z)
    }
}

impl std::ops::Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl std::ops::Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product with `i² = j² = k² = ijk = −1`.
impl std::ops::Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        let (a, b, c, d) = (self.w, self.x, self.y, self.z);
        let (e, f, g, h) = (rhs.w, rhs.x, rhs.y, rhs.z);
        Quaternion::new(
            a * e - b * f - c * g - d * h,
            a * f + b * e + c * h - d * g,
            a * g - b * h + c * e + d * f,
            a * h + b * g - c * f + d * e,
        )
    }
}

/// The pairing `r·ū = Σⱼ rⱼ ūⱼ` over equal-length quaternion tuples.
pub fn dot_bar(r: &[Quaternion], u: &[Quaternion]) -> Result<Quaternion, HqError> {
    if r.len() != u.len() {
        return Err(HqError::DimensionMismatch {
            expected: r.len(),
            got: u.len(),
        });
    }
    let mut acc = Quaternion::ZERO;
    for (a, b) in r.iter().zip(u) {
        acc = acc + *a * b.conj();
    }
    Ok(acc)
}

/// `|u|² = Σⱼ |uⱼ|²` for a quaternion tuple.
pub fn tuple_norm_sq(u: &[Quaternion]) -> f64 {
    u.iter().map(|q| q.norm_sq()).sum()
}

pub fn tuple_norm(u: &[Quaternion]) -> f64 {
    tuple_norm_sq(u).sqrt()
}
