//! The group ℍⁿ × ℝ³: multiplication, inversion, dilations, and a Monte
//! Carlo check of the Haar-measure scaling exponent.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::HqError;
use crate::quaternion::{dot_bar, tuple_norm, Quaternion, Vec3};

/// A point ν = (u, t) with horizontal part u ∈ ℍⁿ and center part t ∈ ℝ³.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub u: Vec<Quaternion>,
    pub t: Vec3,
}

impl GroupElement {
    pub fn new(u: Vec<Quaternion>, t: Vec3) -> Self {
        GroupElement { u, t }
    }

    /// The identity (0, 0) at horizontal dimension n.
    pub fn identity(n: usize) -> Self {
        GroupElement {
            u: vec![Quaternion::ZERO; n],
            t: [0.0; 3],
        }
    }

    /// Number of quaternionic coordinates n.
    pub fn n(&self) -> usize {
        self.u.len()
    }

    /// Euclidean norm of the horizontal part, `|u|`.
    pub fn horizontal_norm(&self) -> f64 {
        tuple_norm(&self.u)
    }

    pub fn is_identity(&self) -> bool {
        self.u.iter().all(|q| *q == Quaternion::ZERO) && self.t == [0.0; 3]
    }

    /// Flattened coordinates (4n horizontal, then 3 center).
    pub fn coords(&self) -> Vec<f64> {
        let mut c = Vec::with_capacity(4 * self.u.len() + 3);
        for q in &self.u {
            c.extend_from_slice(&[q.w, q.x, q.y, q.z]);
        }
        c.extend_from_slice(&self.t);
        c
    }

    /// Rebuilds an element from flattened coordinates of length 4n + 3.
    pub fn from_coords(n: usize, c: &[f64]) -> Result<Self, HqError> {
        if c.len() != 4 * n + 3 {
            return Err(HqError::DimensionMismatch {
                expected: 4 * n + 3,
                got: c.len(),
            });
        }
        let u = (0..n)
            .map(|j| Quaternion::new(c[4 * j], c[4 * j + 1], c[4 * j + 2], c[4 * j + 3]))
            .collect();
        let t = [c[4 * n], c[4 * n + 1], c[4 * n + 2]];
        Ok(GroupElement { u, t })
    }
}

/// Group product `(u,v)(r,s) = (u+r, v+s+2Im(r·ū))`.
pub fn gmul(a: &GroupElement, b: &GroupElement) -> Result<GroupElement, HqError> {
    let twist = dot_bar(&b.u, &a.u)?;
    let im = twist.im();
    let u = a.u.iter().zip(&b.u).map(|(p, q)| *p + *q).collect();
    let t = [
        a.t[0] + b.t[0] + 2.0 * im[0],
        a.t[1] + b.t[1] + 2.0 * im[1],
        a.t[2] + b.t[2] + 2.0 * im[2],
    ];
    Ok(GroupElement { u, t })
}

/// Group inverse `(u,t)⁻¹ = (−u, −t)`.
pub fn ginv(a: &GroupElement) -> GroupElement {
    GroupElement {
        u: a.u.iter().map(|q| -*q).collect(),
        t: [-a.t[0], -a.t[1], -a.t[2]],
    }
}

/// Dilation `δρ(u,t) = (ρu, ρ²t)`, a group automorphism for every ρ > 0.
///
/// Every closed-form quasi-norm in [`crate::norms`] except the box norm is
/// degree-1 homogeneous under this scaling.
pub fn dilate(rho: f64, a: &GroupElement) -> Result<GroupElement, HqError> {
    if !(rho > 0.0) {
        return Err(HqError::NonPositiveScale(rho));
    }
    Ok(GroupElement {
        u: a.u.iter().map(|q| q.scale(rho)).collect(),
        t: [rho * rho * a.t[0], rho * rho * a.t[1], rho * rho * a.t[2]],
    })
}

/// Alternative dilation parameterization `(√ρ u, ρ t)`.
///
/// Equal to [`dilate`] at scale √ρ; exposed because both parameterizations
/// of the same one-parameter family appear in the literature.
pub fn dilate_sqrt(rho: f64, a: &GroupElement) -> Result<GroupElement, HqError> {
    if !(rho > 0.0) {
        return Err(HqError::NonPositiveScale(rho));
    }
    dilate(rho.sqrt(), a)
}

/// The homogeneous dimension: the sum of the coordinate scaling weights
/// (1 for each of the 4n horizontal coordinates, 2 for each of the 3
/// center coordinates), i.e. 4n + 6.
pub fn homogeneous_dimension(n: usize) -> u32 {
    (4 * n) as u32 + 2 * 3
}

/// A standard-normal sample in every coordinate.
pub fn sample_gaussian<R: Rng>(n: usize, rng: &mut R) -> GroupElement {
    let u = (0..n)
        .map(|_| {
            Quaternion::new(
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            )
        })
        .collect();
    let t = [
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    ];
    GroupElement { u, t }
}

/// Outcome of [`haar_scaling_check`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HaarCheck {
    pub empirical_ratio: f64,
    pub exact_ratio: f64,
}

/// Monte Carlo check that Lebesgue measure scales as ρ^(4n+6) under δρ.
///
/// The reference set is the unit coordinate box B anchored at the origin.
/// The volume of δρ(B) is estimated by rejection sampling in a slightly
/// larger box, testing membership through the inverse dilation, and the
/// result is compared against the analytic ratio ρ^(4n+6). For the box the
/// comparison is exact up to RNG noise, which makes this a test of the
/// sampling harness and of [`dilate`] itself.
pub fn haar_scaling_check(
    rho: f64,
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<HaarCheck, HqError> {
    if !(rho > 0.0) {
        return Err(HqError::NonPositiveScale(rho));
    }
    if samples == 0 {
        return Err(HqError::EmptySampleSet);
    }
    if n == 0 {
        return Err(HqError::DimensionMismatch {
            expected: 1,
            got: 0,
        });
    }
    let d = 4 * n + 3;

    // Sides of δρ(B), read off by dilating the all-ones corner.
    let ones = GroupElement::from_coords(n, &vec![1.0; d])?;
    let sides = dilate(rho, &ones)?.coords();

    // Enclosing box: each side padded by 20% so the hit rate stays high
    // while leaving genuine rejection volume.
    const SLACK: f64 = 1.2;
    let enclosing_volume: f64 = sides.iter().map(|s| SLACK * s).product();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inv = 1.0 / rho;
    let mut hits: u64 = 0;
    let mut coords = vec![0.0f64; d];
    for _ in 0..samples {
        for (c, s) in coords.iter_mut().zip(&sides) {
            *c = rng.random::<f64>() * SLACK * s;
        }
        let candidate = GroupElement::from_coords(n, &coords)?;
        let pre = dilate(inv, &candidate)?;
        if pre.coords().iter().all(|&c| c <= 1.0) {
            hits += 1;
        }
    }

    let empirical = hits as f64 / samples as f64 * enclosing_volume;
    let exact = rho.powi(homogeneous_dimension(n) as i32);
    Ok(HaarCheck {
        empirical_ratio: empirical,
        exact_ratio: exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn assert_close(a: &GroupElement, b: &GroupElement, tol: f64) {
        for (x, y) in a.coords().iter().zip(b.coords()) {
            assert!((x - y).abs() <= tol, "{x} vs {y}");
        }
    }

    #[test]
    fn identity_is_neutral() {
        let e = GroupElement::identity(1);
        let v = GroupElement::new(vec![Quaternion::new(1.0, -2.0, 3.0, 0.5)], [0.1, 0.2, 0.3]);
        assert_eq!(gmul(&e, &v).unwrap(), v);
        assert_eq!(gmul(&v, &e).unwrap(), v);
    }

    #[test]
    fn product_picks_up_center_twist() {
        // oracle: direct formula evaluation, Im(i·1̄) = (1,0,0)
        let a = GroupElement::new(vec![Quaternion::ONE], [0.0; 3]);
        let b = GroupElement::new(vec![Quaternion::I], [0.0; 3]);
        let p = gmul(&a, &b).unwrap();
        assert_eq!(p.u, vec![Quaternion::new(1.0, 1.0, 0.0, 0.0)]);
        assert_eq!(p.t, [2.0, 0.0, 0.0]);
    }

    #[test]
    fn inverse_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let v = sample_gaussian(2, &mut rng);
            let e = GroupElement::identity(2);
            assert_close(&gmul(&v, &ginv(&v)).unwrap(), &e, 1e-12);
            assert_close(&gmul(&ginv(&v), &v).unwrap(), &e, 1e-12);
        }
    }

    #[test]
    fn ginv_examples() {
        assert_eq!(ginv(&GroupElement::identity(3)), GroupElement::identity(3));
        let v = GroupElement::new(vec![Quaternion::new(1.0, 1.0, 0.0, 0.0)], [2.0, 0.0, 0.0]);
        assert_eq!(
            ginv(&v),
            GroupElement::new(vec![Quaternion::new(-1.0, -1.0, 0.0, 0.0)], [-2.0, 0.0, 0.0])
        );
    }

    #[test]
    fn left_cancellation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = sample_gaussian(1, &mut rng);
            let b = sample_gaussian(1, &mut rng);
            let back = gmul(&ginv(&a), &gmul(&a, &b).unwrap()).unwrap();
            assert_close(&back, &b, 1e-12);
        }
    }

    #[test]
    fn dilate_examples() {
        let v = GroupElement::new(vec![Quaternion::ONE], [1.0, 0.0, 0.0]);
        assert_eq!(dilate(1.0, &v).unwrap(), v);
        let d = dilate(2.0, &v).unwrap();
        assert_eq!(d.u, vec![Quaternion::new(2.0, 0.0, 0.0, 0.0)]);
        assert_eq!(d.t, [4.0, 0.0, 0.0]);
        assert!(matches!(dilate(0.0, &v), Err(HqError::NonPositiveScale(_))));
        assert!(matches!(dilate(-1.0, &v), Err(HqError::NonPositiveScale(_))));
    }

    #[test]
    fn dilate_is_automorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for rho in [0.5, 1.0, 2.0, 10.0] {
            for _ in 0..50 {
                let a = sample_gaussian(1, &mut rng);
                let b = sample_gaussian(1, &mut rng);
                let lhs = gmul(&dilate(rho, &a).unwrap(), &dilate(rho, &b).unwrap()).unwrap();
                let rhs = dilate(rho, &gmul(&a, &b).unwrap()).unwrap();
                assert_close(&lhs, &rhs, 1e-10 * (1.0 + rho * rho));
            }
        }
    }

    #[test]
    fn dilate_one_parameter_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = sample_gaussian(2, &mut rng);
        let a = dilate(3.0, &dilate(0.25, &v).unwrap()).unwrap();
        let b = dilate(0.75, &v).unwrap();
        assert_close(&a, &b, 1e-12);
    }

    #[test]
    fn dilate_sqrt_matches_reparameterization() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = sample_gaussian(1, &mut rng);
        let a = dilate_sqrt(4.0, &v).unwrap();
        let b = dilate(2.0, &v).unwrap();
        assert_close(&a, &b, 1e-12);
    }

    #[test]
    fn homogeneous_dimension_formula() {
        assert_eq!(homogeneous_dimension(1), 10);
        assert_eq!(homogeneous_dimension(2), 14);
        assert_eq!(homogeneous_dimension(3), 18);
    }

    #[test]
    fn haar_trivial_at_rho_one() {
        let r = haar_scaling_check(1.0, 1, 1000, 0).unwrap();
        assert_eq!(r.exact_ratio, 1.0);
        assert_relative_eq!(r.empirical_ratio, 1.0, max_relative = 0.1);
    }

    #[test]
    fn haar_exact_ratios() {
        assert_eq!(haar_scaling_check(2.0, 1, 1, 0).unwrap().exact_ratio, 1024.0);
        assert_eq!(
            haar_scaling_check(3.0, 2, 1, 0).unwrap().exact_ratio,
            3.0f64.powi(14)
        );
    }

    #[test]
    fn haar_empirical_tracks_exact() {
        let r = haar_scaling_check(2.0, 1, 200_000, 42).unwrap();
        let ratio = r.empirical_ratio / r.exact_ratio;
        assert!((0.98..1.02).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn coords_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = sample_gaussian(3, &mut rng);
        let back = GroupElement::from_coords(3, &v.coords()).unwrap();
        assert_eq!(v, back);
    }
}
