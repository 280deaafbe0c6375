//! Numerical estimation of the sandwich constants between two homogeneous
//! quasi-norms.
//!
//! Any two degree-1 homogeneous quasi-norms `‖·‖_A`, `‖·‖_B` satisfy
//! `m‖ν‖_A ≤ ‖ν‖_B ≤ M‖ν‖_A` with `m`, `M` the extrema of `‖·‖_B` over
//! the `‖·‖_A` unit sphere. The sphere is compact and the norms are
//! continuous, so sampled extrema converge; a local pattern search sharpens
//! the sampled witnesses. Results are deterministic functions of the seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::HqError;
use crate::group::{dilate, sample_gaussian, GroupElement};
use crate::norms::NormSpec;

/// Estimated sandwich constants with extremizing witnesses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivEstimate {
    /// The `from` (sphere-defining) quasi-norm.
    pub from: NormSpec,
    /// The `to` (extremized) quasi-norm.
    pub to: NormSpec,
    pub lower_m: f64,
    #[serde(rename = "upper_M")]
    pub upper_m: f64,
    pub argmin: GroupElement,
    pub argmax: GroupElement,
    pub samples: u64,
    pub seed: u64,
    pub refined: bool,
}

/// Rescales `v` by a dilation so that `spec.eval` of the result is 1.
///
/// Requires a degree-1 homogeneous family (not Box) and `v ≠ identity`.
pub fn project_to_sphere(spec: NormSpec, v: &GroupElement) -> Result<GroupElement, HqError> {
    if !spec.is_homogeneous() {
        return Err(HqError::UnsupportedFamily);
    }
    let r = spec.eval(v)?;
    if r == 0.0 {
        return Err(HqError::IdentityProjection);
    }
    dilate(1.0 / r, v)
}

/// Maximum pattern-search sweeps per witness refinement.
const REFINE_MAX_SWEEPS: usize = 10_000;
/// Stop refining once a full sweep improves the objective by less than this.
const REFINE_MIN_IMPROVEMENT: f64 = 1e-10;

fn refine_witness(
    spec_a: NormSpec,
    spec_b: NormSpec,
    start: &GroupElement,
    maximize: bool,
) -> Result<(f64, GroupElement), HqError> {
    let n = start.n();
    let sign = if maximize { 1.0 } else { -1.0 };
    let objective = |coords: &[f64]| -> Result<(f64, GroupElement), HqError> {
        let w = project_to_sphere(spec_a, &GroupElement::from_coords(n, coords)?)?;
        // dividing by the (≈1) post-projection value cancels the rounding
        // the dilation itself introduces
        let val = spec_b.eval(&w)? / spec_a.eval(&w)?;
        Ok((val, w))
    };

    let mut coords = start.coords();
    let (mut best_val, mut best_point) = objective(&coords)?;
    let mut step = 0.25;

    for _ in 0..REFINE_MAX_SWEEPS {
        let mut sweep_gain = 0.0;
        for i in 0..coords.len() {
            let saved = coords[i];
            let mut accepted = false;
            for delta in [step, -step] {
                coords[i] = saved + delta;
                // a perturbation may hit the identity; treat as non-improving
                if let Ok((val, point)) = objective(&coords) {
                    if sign * (val - best_val) > 0.0 {
                        sweep_gain += sign * (val - best_val);
                        best_val = val;
                        best_point = point;
                        accepted = true;
                        break;
                    }
                }
            }
            if !accepted {
                coords[i] = saved;
            }
        }
        if sweep_gain < REFINE_MIN_IMPROVEMENT {
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
        }
    }
    Ok((best_val, best_point))
}

/// Estimates the sandwich constants (m, M) between `spec_a` and `spec_b`
/// by extremizing `spec_b` over the `spec_a` unit sphere.
///
/// Directions are sampled isotropically in the concatenated coordinate
/// space and projected to the sphere by a dilation. With `refine` set, a
/// local pattern search is run from both sampled witnesses.
pub fn estimate_constants(
    spec_a: NormSpec,
    spec_b: NormSpec,
    n: usize,
    samples: u64,
    seed: u64,
    refine: bool,
) -> Result<EquivEstimate, HqError> {
    if !spec_a.is_homogeneous() || !spec_b.is_homogeneous() {
        return Err(HqError::UnsupportedFamily);
    }
    if samples == 0 {
        return Err(HqError::EmptySampleSet);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lower = f64::INFINITY;
    let mut upper = f64::NEG_INFINITY;
    let mut argmin = GroupElement::identity(n);
    let mut argmax = GroupElement::identity(n);

    let mut drawn = 0u64;
    while drawn < samples {
        let v = sample_gaussian(n, &mut rng);
        drawn += 1;
        let w = match project_to_sphere(spec_a, &v) {
            Ok(w) => w,
            // measure-zero draw at the identity; redraw counts as a sample
            Err(HqError::IdentityProjection) => continue,
            Err(e) => return Err(e),
        };
        let val = spec_b.eval(&w)? / spec_a.eval(&w)?;
        if val < lower {
            lower = val;
            argmin = w.clone();
        }
        if val > upper {
            upper = val;
            argmax = w;
        }
    }

    if refine {
        let (lo, lo_point) = refine_witness(spec_a, spec_b, &argmin, false)?;
        let (hi, hi_point) = refine_witness(spec_a, spec_b, &argmax, true)?;
        lower = lo;
        argmin = lo_point;
        upper = hi;
        argmax = hi_point;
    }

    Ok(EquivEstimate {
        from: spec_a,
        to: spec_b,
        lower_m: lower,
        upper_m: upper,
        argmin,
        argmax,
        samples,
        seed,
        refined: refine,
    })
}

/// Outcome of [`verify_sandwich`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SandwichCheck {
    pub violations: u64,
    /// Worst relative excess beyond the sandwich; nonpositive when every
    /// fresh point satisfied the two-sided bound.
    pub max_excess: f64,
}

/// Relative tolerance applied when counting sandwich violations.
pub const SANDWICH_TOL: f64 = 1e-9;

/// Checks `m‖ν‖_A ≤ ‖ν‖_B ≤ M‖ν‖_A` on fresh points of arbitrary scale.
///
/// Violations beyond a relative tolerance of [`SANDWICH_TOL`] indicate
/// either estimator undercoverage (m, M not yet extremal) or a bug.
pub fn verify_sandwich(
    est: &EquivEstimate,
    spec_a: NormSpec,
    spec_b: NormSpec,
    fresh_samples: u64,
    seed: u64,
) -> Result<SandwichCheck, HqError> {
    if fresh_samples == 0 {
        return Err(HqError::EmptySampleSet);
    }
    let n = est.argmin.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0u64;
    let mut max_excess = f64::NEG_INFINITY;

    for _ in 0..fresh_samples {
        let v = sample_gaussian(n, &mut rng);
        // arbitrary scale: spread over four decades
        let rho = 10.0f64.powf(rng.random_range(-2.0..2.0));
        let v = dilate(rho, &v)?;
        let a = spec_a.eval(&v)?;
        let b = spec_b.eval(&v)?;
        if a == 0.0 {
            continue;
        }
        let excess = (est.lower_m * a - b).max(b - est.upper_m * a) / a;
        max_excess = max_excess.max(excess);
        if b < est.lower_m * a * (1.0 - SANDWICH_TOL) || b > est.upper_m * a * (1.0 + SANDWICH_TOL)
        {
            violations += 1;
        }
    }

    Ok(SandwichCheck {
        violations,
        max_excess,
    })
}
