//! The `verify` suite: one row per library invariant, each measured
//! against an explicit tolerance on seeded random data.

use hq_core::cc::{self, SolverParams};
use hq_core::equivalence::{estimate_constants, verify_sandwich};
use hq_core::group::{
    dilate, ginv, gmul, haar_scaling_check, homogeneous_dimension, sample_gaussian,
};
use hq_core::literal::format_point;
use hq_core::norms::{homogeneity_defect, quasi_triangle_ratio};
use hq_core::operators::{
    check_commutation_table, commutator, horizontal_sum_of_squares,
    quoted_negated_kohn_expansion, sublaplacian, vector_field, FieldName,
    SecondOrderOperator,
};
use hq_core::quaternion::{dot_bar, Quaternion};
use hq_core::{GroupElement, NormSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// The check measures a violation that the theory predicts (the box
    /// norm is not homogeneous); finding it is the passing outcome.
    ExpectedFail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub status: Status,
    pub measured: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckRow {
    pub fn ok(&self) -> bool {
        self.status != Status::Fail
    }
}

fn bounded(name: &str, measured: f64, tolerance: f64, witness: Option<String>) -> CheckRow {
    CheckRow {
        name: name.into(),
        status: if measured <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        },
        measured,
        tolerance,
        witness,
    }
}

const ALL_FAMILIES: [NormSpec; 6] = [
    NormSpec::Koranyi,
    NormSpec::FollandStein,
    NormSpec::Alpha(2.0),
    NormSpec::Alpha(4.0),
    NormSpec::Box,
    NormSpec::Max,
];

fn quaternion_checks(samples: u64, seed: u64, rows: &mut Vec<CheckRow>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mult_dev: f64 = 0.0;
    let mut pairing_dev: f64 = 0.0;
    for _ in 0..samples {
        let a = sample_gaussian(2, &mut rng);
        let p = a.u[0];
        let q = a.u[1];
        let prod = (p * q).norm();
        let sep = p.norm() * q.norm();
        if sep > 0.0 {
            mult_dev = mult_dev.max((prod - sep).abs() / sep);
        }
        // the self-pairing u·ū is real with value |u|²
        let d = dot_bar(&a.u, &a.u).expect("matched lengths");
        let im = d.im();
        let scale = d.w.max(1.0);
        pairing_dev = pairing_dev.max(
            (im[0].abs().max(im[1].abs()).max(im[2].abs())) / scale,
        );
    }
    rows.push(bounded("quaternion-norm-multiplicative", mult_dev, 1e-12, None));
    rows.push(bounded("quaternion-self-pairing-real", pairing_dev, 1e-12, None));
}

fn coord_gap(a: &GroupElement, b: &GroupElement) -> f64 {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn group_checks(samples: u64, seed: u64, rows: &mut Vec<CheckRow>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assoc: f64 = 0.0;
    let mut inverse: f64 = 0.0;
    let mut dil: f64 = 0.0;
    let e = GroupElement::identity(1);
    for _ in 0..samples {
        let a = sample_gaussian(1, &mut rng);
        let b = sample_gaussian(1, &mut rng);
        let c = sample_gaussian(1, &mut rng);
        let left = gmul(&gmul(&a, &b).unwrap(), &c).unwrap();
        let right = gmul(&a, &gmul(&b, &c).unwrap()).unwrap();
        assoc = assoc.max(coord_gap(&left, &right));
        inverse = inverse.max(coord_gap(&gmul(&a, &ginv(&a)).unwrap(), &e));
        for rho in [0.5, 2.0, 10.0] {
            let lhs = dilate(rho, &gmul(&a, &b).unwrap()).unwrap();
            let rhs = gmul(&dilate(rho, &a).unwrap(), &dilate(rho, &b).unwrap()).unwrap();
            dil = dil.max(coord_gap(&lhs, &rhs) / rho.powi(2).max(1.0));
        }
    }
    rows.push(bounded("group-associativity", assoc, 1e-10, None));
    rows.push(bounded("group-inverse-law", inverse, 1e-12, None));
    rows.push(bounded("dilation-automorphism", dil, 1e-10, None));

    let exponent_exact = (1..=3).all(|n| homogeneous_dimension(n) == 4 * n as u32 + 6);
    rows.push(bounded(
        "homogeneous-dimension-4n+6",
        if exponent_exact { 0.0 } else { 1.0 },
        0.0,
        None,
    ));

    let haar_samples = samples.max(50_000);
    let haar = haar_scaling_check(2.0, 1, haar_samples, seed).unwrap();
    rows.push(bounded(
        "haar-scaling-rho2",
        (haar.empirical_ratio / haar.exact_ratio - 1.0).abs(),
        0.01,
        None,
    ));
}

fn norm_checks(samples: u64, seed: u64, rows: &mut Vec<CheckRow>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut symmetry: f64 = 0.0;
    let mut min_positive = f64::INFINITY;
    for _ in 0..samples {
        let v = sample_gaussian(1, &mut rng);
        for spec in ALL_FAMILIES {
            let a = spec.eval(&v).unwrap();
            let b = spec.eval(&ginv(&v)).unwrap();
            if a > 0.0 {
                symmetry = symmetry.max((a - b).abs() / a);
            }
            min_positive = min_positive.min(a);
        }
    }
    let identity_zero = ALL_FAMILIES
        .iter()
        .map(|s| s.eval(&GroupElement::identity(1)).unwrap())
        .fold(0.0f64, f64::max);
    rows.push(bounded("norm-symmetry", symmetry, 1e-12, None));
    rows.push(CheckRow {
        name: "norm-positivity".into(),
        status: if min_positive > 0.0 && identity_zero == 0.0 {
            Status::Pass
        } else {
            Status::Fail
        },
        measured: min_positive,
        tolerance: 0.0,
        witness: None,
    });

    // degree-1 homogeneity across six decades of scale
    let mut hom: f64 = 0.0;
    let rhos: Vec<f64> = (-3..=3).map(|k| 10f64.powi(k)).collect();
    for _ in 0..(samples / 100).max(50) {
        let v = sample_gaussian(1, &mut rng);
        for spec in ALL_FAMILIES.iter().filter(|s| s.is_homogeneous()) {
            let base = spec.eval(&v).unwrap();
            for &rho in &rhos {
                let d = homogeneity_defect(*spec, &v, rho).unwrap();
                hom = hom.max(d.abs() / (rho * base));
            }
        }
    }
    rows.push(bounded("norm-homogeneity", hom, 1e-12, None));

    // the box norm must NOT be homogeneous: at a pure center point and
    // rho = 2 the defect is exactly 2
    let center = GroupElement::new(vec![Quaternion::ZERO], [1.0, 0.0, 0.0]);
    let defect = homogeneity_defect(NormSpec::Box, &center, 2.0).unwrap();
    rows.push(CheckRow {
        name: "box-norm-homogeneity".into(),
        status: if (defect - 2.0).abs() <= 1e-12 {
            Status::ExpectedFail
        } else {
            Status::Fail
        },
        measured: defect,
        tolerance: 1e-12,
        witness: Some(format_point(&center)),
    });

    // alpha = 4 coincides with the Korányi gauge
    let mut alpha4: f64 = 0.0;
    for _ in 0..samples {
        let v = sample_gaussian(1, &mut rng);
        let a = NormSpec::Alpha(4.0).eval(&v).unwrap();
        let k = NormSpec::Koranyi.eval(&v).unwrap();
        alpha4 = alpha4.max((a - k).abs() / k);
    }
    rows.push(bounded("alpha4-equals-koranyi", alpha4, 1e-14, None));

    // quasi-triangle constant for the Korányi gauge
    let bound = 24f64.powf(0.25);
    let mut sup: f64 = 0.0;
    let mut witness = None;
    for _ in 0..samples {
        let a = sample_gaussian(1, &mut rng);
        let b = sample_gaussian(1, &mut rng);
        let r = quasi_triangle_ratio(NormSpec::Koranyi, &a, &b).unwrap();
        if r > sup {
            sup = r;
            witness = Some(format!("{} | {}", format_point(&a), format_point(&b)));
        }
    }
    rows.push(bounded("koranyi-quasi-triangle", sup, bound, witness));
}

fn equivalence_checks(samples: u64, seed: u64, rows: &mut Vec<CheckRow>) {
    let est = estimate_constants(NormSpec::Max, NormSpec::Koranyi, 1, samples, seed, true)
        .unwrap();
    let target = 2f64.powf(0.25);
    rows.push(bounded(
        "equiv-max-koranyi-lower",
        (est.lower_m - 1.0).abs(),
        1e-3,
        Some(format_point(&est.argmin)),
    ));
    rows.push(bounded(
        "equiv-max-koranyi-upper",
        (est.upper_m - target).abs(),
        1e-3,
        Some(format_point(&est.argmax)),
    ));

    let fresh = (samples / 10).max(1000);
    let sandwich =
        verify_sandwich(&est, NormSpec::Max, NormSpec::Koranyi, fresh, seed ^ 0x5eed).unwrap();
    rows.push(bounded(
        "equiv-sandwich-fresh-points",
        sandwich.violations as f64,
        0.0,
        None,
    ));

    // swapping the two families inverts the constants: m_AB · M_BA ≈ 1
    let back = estimate_constants(NormSpec::Koranyi, NormSpec::Max, 1, samples, seed, true)
        .unwrap();
    rows.push(bounded(
        "equiv-duality",
        (est.lower_m * back.upper_m - 1.0).abs(),
        0.01,
        None,
    ));
}

fn operator_checks(rows: &mut Vec<CheckRow>) {
    let table = check_commutation_table();
    let failed = table.relations.iter().filter(|r| !r.pass).count();
    rows.push(bounded("commutation-table", failed as f64, 0.0, None));

    // step-2 nilpotency: every double bracket of basis fields vanishes
    let fields = FieldName::ALL.map(vector_field);
    let mut nonzero = 0usize;
    for a in &fields {
        for b in &fields {
            let ab = commutator(a, b);
            for c in &fields {
                if !commutator(&ab, c).is_zero() {
                    nonzero += 1;
                }
            }
        }
    }
    rows.push(bounded("step-2-nilpotency", nonzero as f64, 0.0, None));

    // sub-Laplacian horizontal block at x = 0 is −¼ of the x-Laplacian
    let sub = sublaplacian();
    let origin = [0.0f64; 7];
    let mut dev: f64 = 0.0;
    for i in 0..4 {
        dev = dev.max((sub.second(i, i).eval(&origin) + 0.25).abs());
        for j in (i + 1)..4 {
            dev = dev.max(sub.second(i, j).eval(&origin).abs());
        }
    }
    rows.push(bounded("sublaplacian-horizontal-block", dev, 0.0, None));

    // the quoted expansion disagrees with −Σ Xᵢ² only where documented:
    // the center block and the first-order cross terms
    let quoted = quoted_negated_kohn_expansion();
    let computed = SecondOrderOperator::zero().sub(&horizontal_sum_of_squares());
    let mut x_block_gap = 0usize;
    for i in 0..4 {
        for j in i..4 {
            if computed.second(i, j) != quoted.second(i, j) {
                x_block_gap += 1;
            }
        }
    }
    rows.push(bounded(
        "kohn-expansion-x-block-agrees",
        x_block_gap as f64,
        0.0,
        None,
    ));
}

fn cc_checks(seed: u64, rows: &mut Vec<CheckRow>) {
    let params = SolverParams {
        steps: 16,
        restarts: 3,
        seed,
        tol: 1e-6,
        max_sweeps: 80,
        max_stages: 10,
        ..SolverParams::default()
    };

    // a purely horizontal target is reached by the straight segment
    let target = GroupElement::new(vec![Quaternion::ONE], [0.0, 0.0, 0.0]);
    let solve = cc::cc_distance(&target, &params).unwrap();
    rows.push(bounded(
        "cc-horizontal-segment",
        (solve.distance - 1.0).abs().max(solve.endpoint_error),
        0.03,
        Some(format_point(&target)),
    ));

    // d(ν) = d(ν⁻¹) by symmetry of the metric
    let loose = SolverParams {
        tol: 1e-4,
        ..params
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = sample_gaussian(1, &mut rng);
    let d1 = cc::cc_distance(&v, &loose).unwrap();
    let d2 = cc::cc_distance(&ginv(&v), &loose).unwrap();
    rows.push(bounded(
        "cc-symmetry",
        (d1.distance - d2.distance).abs() / d1.distance,
        0.05,
        Some(format_point(&v)),
    ));

    // comparability with the Korányi gauge on unit-gauge targets
    let gauge = cc::compare_to_gauge(12, seed, &loose, 1).unwrap();
    let spread = gauge.max_ratio / gauge.min_ratio;
    rows.push(CheckRow {
        name: "cc-gauge-comparability".into(),
        status: if gauge.min_ratio > 0.0 && spread < 10.0 {
            Status::Pass
        } else {
            Status::Fail
        },
        measured: spread,
        tolerance: 10.0,
        witness: None,
    });
}

/// Runs every check with `samples` seeded draws where applicable.
pub fn run_all(samples: u64, seed: u64) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    quaternion_checks(samples, seed, &mut rows);
    group_checks(samples, seed.wrapping_add(1), &mut rows);
    norm_checks(samples, seed.wrapping_add(2), &mut rows);
    equivalence_checks(samples, seed.wrapping_add(3), &mut rows);
    operator_checks(&mut rows);
    cc_checks(seed.wrapping_add(4), &mut rows);
    rows
}
