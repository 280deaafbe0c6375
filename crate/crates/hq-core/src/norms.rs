//! The closed-form quasi-norm families and axiom-checking primitives.
//!
//! Five families are provided: Korányi `(|u|⁴+|t|²)^{1/4}`, Folland–Stein
//! `(|u|²+|t|)^{1/2}`, the α-family `(|u|^α+|t|^{α/2})^{1/α}` for α > 0,
//! the Euclidean box norm `√(|u|²+|t|²)`, and the max norm
//! `max(|u|, |t|^{1/2})`. All except the box norm are degree-1 homogeneous
//! under the dilations δρ(u,t) = (ρu, ρ²t); the box norm's homogeneity
//! defect is measurable through [`homogeneity_defect`].

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::HqError;
use crate::group::{dilate, gmul, GroupElement};
use crate::quaternion::{tuple_norm, vec3_norm};

/// Tagged choice of quasi-norm family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormSpec {
    Koranyi,
    FollandStein,
    Alpha(f64),
    Box,
    Max,
}

impl NormSpec {
    /// Constructs an α-family spec, rejecting α ≤ 0.
    pub fn alpha(a: f64) -> Result<Self, HqError> {
        if !(a > 0.0) {
            return Err(HqError::NonPositiveAlpha(a));
        }
        Ok(NormSpec::Alpha(a))
    }

    /// Degree-1 homogeneous under the group dilations? False only for Box.
    pub fn is_homogeneous(self) -> bool {
        !matches!(self, NormSpec::Box)
    }

    /// Evaluates the quasi-norm at a group element.
    pub fn eval(self, v: &GroupElement) -> Result<f64, HqError> {
        let q = tuple_norm(&v.u);
        let t = vec3_norm(&v.t);
        match self {
            NormSpec::Koranyi => Ok(koranyi_qt(q, t)),
            NormSpec::FollandStein => Ok((q * q + t).sqrt()),
            NormSpec::Alpha(a) => {
                if !(a > 0.0) {
                    return Err(HqError::NonPositiveAlpha(a));
                }
                Ok((q.powf(a) + t.powf(a / 2.0)).powf(1.0 / a))
            }
            NormSpec::Box => Ok((q * q + t * t).sqrt()),
            NormSpec::Max => Ok(q.max(t.sqrt())),
        }
    }
}

// √hypot keeps the gauge exact on both axes (t = 0 gives back q, q = 0
// gives √t), so ‖·‖_K ≥ max(|u|, |t|^{1/2}) holds pointwise in floats
fn koranyi_qt(q: f64, t: f64) -> f64 {
    (q * q).hypot(t).sqrt()
}

/// Korányi gauge `(|u|⁴+|t|²)^{1/4}`.
pub fn koranyi(v: &GroupElement) -> f64 {
    koranyi_qt(tuple_norm(&v.u), vec3_norm(&v.t))
}

/// Folland–Stein gauge `(|u|²+|t|)^{1/2}`.
pub fn folland_stein(v: &GroupElement) -> f64 {
    let q = tuple_norm(&v.u);
    (q * q + vec3_norm(&v.t)).sqrt()
}

/// α-family `(|u|^α+|t|^{α/2})^{1/α}`; coincides with Korányi at α = 4.
pub fn alpha_norm(alpha: f64, v: &GroupElement) -> Result<f64, HqError> {
    NormSpec::Alpha(alpha).eval(v)
}

/// Euclidean norm of the concatenated coordinates, `√(|u|²+|t|²)`.
pub fn box_norm(v: &GroupElement) -> f64 {
    let q = tuple_norm(&v.u);
    let t = vec3_norm(&v.t);
    (q * q + t * t).sqrt()
}

/// `max(|u|, |t|^{1/2})`.
pub fn max_norm(v: &GroupElement) -> f64 {
    tuple_norm(&v.u).max(vec3_norm(&v.t).sqrt())
}

/// `‖δρ(v)‖ − ρ‖v‖`: zero for degree-1 homogeneous families, generally
/// nonzero for the box norm.
pub fn homogeneity_defect(spec: NormSpec, v: &GroupElement, rho: f64) -> Result<f64, HqError> {
    let scaled = dilate(rho, v)?;
    Ok(spec.eval(&scaled)? - rho * spec.eval(v)?)
}

/// `‖ab‖ / (‖a‖ + ‖b‖)`, the quantity bounded by the quasi-triangle
/// constant K. Errors when both operands are the identity.
pub fn quasi_triangle_ratio(
    spec: NormSpec,
    a: &GroupElement,
    b: &GroupElement,
) -> Result<f64, HqError> {
    let denom = spec.eval(a)? + spec.eval(b)?;
    if denom == 0.0 {
        return Err(HqError::ZeroDenominator);
    }
    Ok(spec.eval(&gmul(a, b)?)? / denom)
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Koranyi => write!(f, "koranyi"),
            NormSpec::FollandStein => write!(f, "fs"),
            NormSpec::Alpha(a) => write!(f, "alpha:{a}"),
            NormSpec::Box => write!(f, "box"),
            NormSpec::Max => write!(f, "max"),
        }
    }
}

impl FromStr for NormSpec {
    type Err = HqError;

    fn from_str(s: &str) -> Result<Self, HqError> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "koranyi" | "k" => Ok(NormSpec::Koranyi),
            "fs" | "folland-stein" | "follandstein" => Ok(NormSpec::FollandStein),
            "box" => Ok(NormSpec::Box),
            "max" => Ok(NormSpec::Max),
            lower => {
                if let Some(a) = lower.strip_prefix("alpha:") {
                    let a: f64 = a
                        .parse()
                        .map_err(|_| HqError::Parse(format!("bad alpha value in {s:?}")))?;
                    NormSpec::alpha(a)
                } else {
                    Err(HqError::Parse(format!(
                        "unknown norm family {s:?} (expected koranyi|fs|alpha:<a>|box|max)"
                    )))
                }
            }
        }
    }
}
