//! Randomized property tests for the algebraic and metric invariants.

use hq_core::group::{dilate, ginv, gmul, sample_gaussian};
use hq_core::norms::quasi_triangle_ratio;
use hq_core::quaternion::Quaternion;
use hq_core::{GroupElement, NormSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn coord() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn quaternion() -> impl Strategy<Value = Quaternion> {
    (coord(), coord(), coord(), coord()).prop_map(|(w, x, y, z)| Quaternion::new(w, x, y, z))
}

fn element(n: usize) -> impl Strategy<Value = GroupElement> {
    (
        proptest::collection::vec(quaternion(), n),
        (coord(), coord(), coord()),
    )
        .prop_map(|(u, (t1, t2, t3))| GroupElement::new(u, [t1, t2, t3]))
}

fn coord_gap(a: &GroupElement, b: &GroupElement) -> f64 {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

const HOMOGENEOUS: [NormSpec; 8] = [
    NormSpec::Koranyi,
    NormSpec::FollandStein,
    NormSpec::Max,
    NormSpec::Alpha(1.0),
    NormSpec::Alpha(2.0),
    NormSpec::Alpha(3.0),
    NormSpec::Alpha(4.0),
    NormSpec::Alpha(6.0),
];

proptest! {
    #[test]
    fn quaternion_norm_is_multiplicative(p in quaternion(), q in quaternion()) {
        let lhs = (p * q).norm();
        let rhs = p.norm() * q.norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn quaternion_product_associates(
        p in quaternion(),
        q in quaternion(),
        r in quaternion(),
    ) {
        let a = (p * q) * r;
        let b = p * (q * r);
        let scale = a.norm().max(1.0);
        prop_assert!((a + -b).norm() <= 1e-12 * scale);
    }

    #[test]
    fn group_product_associates(a in element(2), b in element(2), c in element(2)) {
        let left = gmul(&gmul(&a, &b).unwrap(), &c).unwrap();
        let right = gmul(&a, &gmul(&b, &c).unwrap()).unwrap();
        prop_assert!(coord_gap(&left, &right) <= 1e-9);
    }

    #[test]
    fn inverses_cancel(a in element(1)) {
        let e = GroupElement::identity(1);
        prop_assert!(coord_gap(&gmul(&a, &ginv(&a)).unwrap(), &e) <= 1e-12);
        prop_assert!(coord_gap(&gmul(&ginv(&a), &a).unwrap(), &e) <= 1e-12);
    }

    #[test]
    fn dilations_are_automorphisms(a in element(1), b in element(1), k in -3..4i32) {
        let rho = 2.0f64.powi(k);
        let lhs = dilate(rho, &gmul(&a, &b).unwrap()).unwrap();
        let rhs = gmul(&dilate(rho, &a).unwrap(), &dilate(rho, &b).unwrap()).unwrap();
        prop_assert!(coord_gap(&lhs, &rhs) <= 1e-9 * rho.powi(2).max(1.0));
    }

    #[test]
    fn norms_are_symmetric_and_positive(v in element(1)) {
        for spec in HOMOGENEOUS.iter().chain([&NormSpec::Box]) {
            let a = spec.eval(&v).unwrap();
            let b = spec.eval(&ginv(&v)).unwrap();
            prop_assert!(a >= 0.0);
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }
    }

    #[test]
    fn homogeneous_families_scale_linearly(v in element(1), k in -3..4i32) {
        let rho = 10.0f64.powi(k);
        for spec in HOMOGENEOUS {
            let base = spec.eval(&v).unwrap();
            let scaled = spec.eval(&dilate(rho, &v).unwrap()).unwrap();
            prop_assert!(
                (scaled - rho * base).abs() <= 1e-12 * (rho * base).max(1e-12),
                "family {spec} at rho {rho}: {scaled} vs {}", rho * base
            );
        }
    }

    #[test]
    fn koranyi_quasi_triangle_bound(a in element(1), b in element(1)) {
        if let Ok(r) = quasi_triangle_ratio(NormSpec::Koranyi, &a, &b) {
            prop_assert!(r <= 24f64.powf(0.25) + 1e-12);
        }
    }
}

// bulk deterministic sweep, denser than the proptest case budget
#[test]
fn associativity_bulk_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    for i in 0..10_000 {
        let n = 1 + (i % 3);
        let a = sample_gaussian(n, &mut rng);
        let b = sample_gaussian(n, &mut rng);
        let c = sample_gaussian(n, &mut rng);
        let left = gmul(&gmul(&a, &b).unwrap(), &c).unwrap();
        let right = gmul(&a, &gmul(&b, &c).unwrap()).unwrap();
        assert!(coord_gap(&left, &right) <= 1e-12, "triple {i}");
    }
}
