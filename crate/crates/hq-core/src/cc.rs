//! Carnot–Carathéodory distance by direct transcription.
//!
//! A horizontal curve from the identity is parameterized by piecewise-
//! constant controls on a uniform grid over [0,1]: on each segment the
//! control vector a ∈ ℝ^{4n} gives the horizontal velocity, and the center
//! velocity follows as ṫ = 2 Im(a·ū). The distance to a target is the
//! infimum of Σ|aᵢ|Δs over controls whose developed endpoint hits the
//! target; it is approached from above by penalty-method minimization with
//! a geometrically increasing endpoint weight, multi-started over seeded
//! initializations. Left-invariance reduces the general two-point problem
//! to targets based at the identity: d(a,b) = d(e, a⁻¹b).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::HqError;
use crate::group::GroupElement;
use crate::norms;
use crate::quaternion::Quaternion;

/// Piecewise-constant horizontal controls on a uniform grid over [0,1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizontalPath {
    /// Flattened controls, `steps × 4n` row-major.
    pub controls: Vec<f64>,
    pub steps: usize,
    pub n: usize,
}

impl HorizontalPath {
    pub fn new(controls: Vec<f64>, steps: usize, n: usize) -> Result<Self, HqError> {
        if controls.len() != steps * 4 * n {
            return Err(HqError::DimensionMismatch {
                expected: steps * 4 * n,
                got: controls.len(),
            });
        }
        Ok(HorizontalPath { controls, steps, n })
    }

    pub fn control(&self, i: usize) -> &[f64] {
        let w = 4 * self.n;
        &self.controls[i * w..(i + 1) * w]
    }

    /// Path length Σ|aᵢ|Δs.
    pub fn length(&self) -> f64 {
        path_length(&self.controls, self.steps, self.n)
    }
}

fn segment_speed_sq(a: &[f64]) -> f64 {
    a.iter().map(|c| c * c).sum()
}

fn path_length(controls: &[f64], steps: usize, n: usize) -> f64 {
    let w = 4 * n;
    let ds = 1.0 / steps as f64;
    (0..steps)
        .map(|i| segment_speed_sq(&controls[i * w..(i + 1) * w]).sqrt() * ds)
        .sum()
}

/// Center drift 2·Im(a·ū) for control quaternions a over state u.
fn center_velocity(a: &[Quaternion], u: &[Quaternion]) -> [f64; 3] {
    let mut acc = Quaternion::ZERO;
    for (p, q) in a.iter().zip(u) {
        acc = acc + *p * q.conj();
    }
    let im = acc.im();
    [2.0 * im[0], 2.0 * im[1], 2.0 * im[2]]
}

fn add_scaled(u: &[Quaternion], a: &[Quaternion], s: f64) -> Vec<Quaternion> {
    u.iter().zip(a).map(|(p, q)| *p + q.scale(s)).collect()
}

/// Integrates the horizontal ODE γ̇ = Σ aₖ Xₖ(γ) from the identity with
/// one classical Runge–Kutta step per control segment and returns γ(1).
///
/// The horizontal coordinates integrate exactly (unit constant
/// coefficients), and for piecewise-constant controls the center velocity
/// is constant on each segment, so the integrator is exact there too.
pub fn develop(path: &HorizontalPath) -> Result<GroupElement, HqError> {
    develop_controls(&path.controls, path.steps, path.n)
}

fn develop_controls(controls: &[f64], steps: usize, n: usize) -> Result<GroupElement, HqError> {
    if controls.len() != steps * 4 * n {
        return Err(HqError::DimensionMismatch {
            expected: steps * 4 * n,
            got: controls.len(),
        });
    }
    if steps == 0 {
        return Err(HqError::InvalidSolverParams("steps must be >= 1".into()));
    }
    let h = 1.0 / steps as f64;
    let mut u = vec![Quaternion::ZERO; n];
    let mut t = [0.0f64; 3];
    let mut a = vec![Quaternion::ZERO; n];

    for i in 0..steps {
        let seg = &controls[i * 4 * n..(i + 1) * 4 * n];
        for (j, q) in a.iter_mut().enumerate() {
            *q = Quaternion::new(seg[4 * j], seg[4 * j + 1], seg[4 * j + 2], seg[4 * j + 3]);
        }
        let k1 = center_velocity(&a, &u);
        let u_mid = add_scaled(&u, &a, 0.5 * h);
        let k2 = center_velocity(&a, &u_mid);
        let k3 = k2;
        let u_end = add_scaled(&u, &a, h);
        let k4 = center_velocity(&a, &u_end);
        for d in 0..3 {
            t[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        }
        u = u_end;
    }
    Ok(GroupElement::new(u, t))
}

/// Grid states γ(0), γ(Δs), ..., γ(1) of the developed path.
pub fn trajectory(path: &HorizontalPath) -> Result<Vec<GroupElement>, HqError> {
    let mut out = Vec::with_capacity(path.steps + 1);
    out.push(GroupElement::identity(path.n));
    for i in 1..=path.steps {
        let prefix = HorizontalPath {
            controls: path.controls[..i * 4 * path.n].to_vec(),
            steps: i,
            n: path.n,
        };
        // prefix of a unit-interval path: compress the controls onto [0,1]
        // by scaling time, which scales speeds by i/steps
        let scale = i as f64 / path.steps as f64;
        let scaled = HorizontalPath {
            controls: prefix.controls.iter().map(|c| c * scale).collect(),
            ..prefix
        };
        out.push(develop(&scaled)?);
    }
    Ok(out)
}

/// Solver configuration for [`cc_distance`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverParams {
    pub steps: usize,
    pub restarts: u32,
    pub seed: u64,
    /// Endpoint tolerance (Euclidean distance in coordinates).
    pub tol: f64,
    /// Initial endpoint-penalty weight; multiplied by 10 per stage.
    pub mu0: f64,
    /// Stage cap for the penalty schedule.
    pub max_stages: u32,
    /// Pattern-search sweep cap per stage.
    pub max_sweeps: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            steps: 32,
            restarts: 8,
            seed: 0,
            tol: 1e-6,
            mu0: 10.0,
            max_stages: 12,
            max_sweeps: 120,
        }
    }
}

/// Result of a CC-distance solve. `distance` is an upper bound on the
/// true infimum up to discretization error; non-convergence is reported
/// through `converged`, not as an error.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CcResult {
    pub distance: f64,
    pub path: HorizontalPath,
    pub endpoint_error: f64,
    pub iterations: u64,
    pub converged: bool,
}

/// Smoothing under the square root of the per-segment speed.
const LENGTH_EPS: f64 = 1e-8;

/// Gaussian elimination with partial pivoting for the small dense
/// symmetric positive-definite systems of the endpoint projection.
fn solve_spd(a: &mut [f64], rhs: &[f64], dim: usize) -> Option<Vec<f64>> {
    let mut b = rhs.to_vec();
    for col in 0..dim {
        let pivot = (col..dim).max_by(|&p, &q| {
            a[p * dim + col]
                .abs()
                .total_cmp(&a[q * dim + col].abs())
        })?;
        if a[pivot * dim + col].abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for k in 0..dim {
                a.swap(col * dim + k, pivot * dim + k);
            }
            b.swap(col, pivot);
        }
        for row in col + 1..dim {
            let f = a[row * dim + col] / a[col * dim + col];
            for k in col..dim {
                a[row * dim + k] -= f * a[col * dim + k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; dim];
    for row in (0..dim).rev() {
        let mut acc = b[row];
        for k in row + 1..dim {
            acc -= a[row * dim + k] * x[k];
        }
        x[row] = acc / a[row * dim + row];
    }
    Some(x)
}

struct PenaltyProblem<'a> {
    steps: usize,
    n: usize,
    target: &'a [f64],
}

impl PenaltyProblem<'_> {
    fn endpoint_err_sq(&self, controls: &[f64]) -> f64 {
        let dev = develop_controls(controls, self.steps, self.n)
            .expect("control layout is fixed")
            .coords();
        dev.iter()
            .zip(self.target)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    /// Regularized length (or energy, during the final polish) plus the
    /// quadratic endpoint penalty.
    fn objective(&self, controls: &[f64], mu: f64, energy: bool) -> f64 {
        let w = 4 * self.n;
        let ds = 1.0 / self.steps as f64;
        let running: f64 = (0..self.steps)
            .map(|i| {
                let s2 = segment_speed_sq(&controls[i * w..(i + 1) * w]);
                if energy {
                    s2 * ds
                } else {
                    (s2 + LENGTH_EPS).sqrt() * ds
                }
            })
            .sum();
        running + mu * self.endpoint_err_sq(controls)
    }

    /// Finite-difference Gauss-Newton projection onto the endpoint
    /// constraint: least-norm control updates solving J Δc = −r, where r
    /// is the endpoint residual. Run after the penalty stages to push the
    /// endpoint error well below tolerance without disturbing the length.
    /// Returns the number of endpoint evaluations spent.
    fn project_endpoint(&self, controls: &mut [f64], tol: f64) -> u64 {
        let dim = self.target.len();
        let m = controls.len();
        let mut evals = 0u64;
        for _ in 0..12 {
            let dev = develop_controls(controls, self.steps, self.n)
                .expect("control layout is fixed")
                .coords();
            evals += 1;
            let r: Vec<f64> = dev.iter().zip(self.target).map(|(a, b)| a - b).collect();
            let err: f64 = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            if err <= 0.01 * tol {
                break;
            }
            // forward-difference Jacobian, dim × m
            let fd = 1e-6;
            let mut jac = vec![0.0f64; dim * m];
            for c in 0..m {
                let saved = controls[c];
                controls[c] = saved + fd;
                let plus = develop_controls(controls, self.steps, self.n)
                    .expect("control layout is fixed")
                    .coords();
                evals += 1;
                controls[c] = saved;
                for d in 0..dim {
                    jac[d * m + c] = (plus[d] - dev[d]) / fd;
                }
            }
            // solve (J Jᵀ + λI) y = r, then Δc = −Jᵀ y
            let mut gram = vec![0.0f64; dim * dim];
            for a in 0..dim {
                for b in 0..dim {
                    gram[a * dim + b] = (0..m).map(|c| jac[a * m + c] * jac[b * m + c]).sum();
                }
                gram[a * dim + a] += 1e-10;
            }
            let y = match solve_spd(&mut gram, &r, dim) {
                Some(y) => y,
                None => break,
            };
            for c in 0..m {
                let step: f64 = (0..dim).map(|d| jac[d * m + c] * y[d]).sum();
                controls[c] -= step;
            }
        }
        evals
    }

    /// Coordinate pattern search; returns the number of objective
    /// evaluations spent.
    fn pattern_search(
        &self,
        controls: &mut [f64],
        mu: f64,
        energy: bool,
        init_step: f64,
        max_sweeps: usize,
    ) -> u64 {
        let mut best = self.objective(controls, mu, energy);
        let mut step = init_step;
        let mut evals = 1u64;
        for _ in 0..max_sweeps {
            let mut improved = false;
            for i in 0..controls.len() {
                let saved = controls[i];
                let mut accepted = false;
                for delta in [step, -step] {
                    controls[i] = saved + delta;
                    let val = self.objective(controls, mu, energy);
                    evals += 1;
                    if val < best {
                        best = val;
                        accepted = true;
                        improved = true;
                        break;
                    }
                }
                if !accepted {
                    controls[i] = saved;
                }
            }
            if !improved {
                step *= 0.5;
                if step < 1e-9 {
                    break;
                }
            }
        }
        evals
    }
}

/// Minimizes path length to reach `target` from the identity.
///
/// Multi-start penalty method: restart 0 is the straight horizontal
/// segment toward the target's horizontal part (exact when the target has
/// no center component), the rest are seeded Gaussian controls. The
/// returned result is the deterministic argmin over restarts, preferring
/// converged solves and breaking ties by lowest restart index.
pub fn cc_distance(target: &GroupElement, params: &SolverParams) -> Result<CcResult, HqError> {
    if params.steps < 4 {
        return Err(HqError::InvalidSolverParams("steps must be >= 4".into()));
    }
    if !(params.tol > 0.0) {
        return Err(HqError::InvalidSolverParams("tol must be > 0".into()));
    }
    if params.restarts == 0 {
        return Err(HqError::InvalidSolverParams("restarts must be >= 1".into()));
    }

    let n = target.n();
    let w = 4 * n;
    let tgt = target.coords();
    let problem = PenaltyProblem {
        steps: params.steps,
        n,
        target: &tgt,
    };
    // scale of the problem, used to size initializations and steps
    let scale = norms::koranyi(target).max(1e-3);

    let mut best: Option<CcResult> = None;
    for restart in 0..params.restarts {
        let mut controls = vec![0.0f64; params.steps * w];
        if restart == 0 {
            // constant control developing to (u_target, 0) exactly
            for i in 0..params.steps {
                for (j, q) in target.u.iter().enumerate() {
                    let seg = &mut controls[i * w + 4 * j..i * w + 4 * j + 4];
                    seg.copy_from_slice(&[q.w, q.x, q.y, q.z]);
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(restart as u64));
            for c in controls.iter_mut() {
                let g: f64 = rng.sample(StandardNormal);
                *c = 2.0 * scale * g;
            }
        }

        let mut mu = params.mu0;
        let mut iterations = 0u64;
        for stage in 0..params.max_stages {
            let init_step = if stage == 0 { 0.5 * scale } else { 0.1 * scale };
            iterations +=
                problem.pattern_search(&mut controls, mu, false, init_step, params.max_sweeps);
            if problem.endpoint_err_sq(&controls).sqrt() <= params.tol {
                break;
            }
            mu *= 10.0;
        }
        // energy polish: equalizes segment speeds along the found path,
        // returning a near-constant-speed parameterization
        iterations += problem.pattern_search(&mut controls, mu, true, 0.05 * scale, params.max_sweeps);
        // land exactly on the endpoint constraint
        iterations += problem.project_endpoint(&mut controls, params.tol);

        let endpoint_error = problem.endpoint_err_sq(&controls).sqrt();
        let distance = path_length(&controls, params.steps, n);
        let candidate = CcResult {
            distance,
            path: HorizontalPath {
                controls,
                steps: params.steps,
                n,
            },
            endpoint_error,
            iterations,
            converged: endpoint_error <= params.tol,
        };
        let better = match &best {
            None => true,
            Some(b) => match (candidate.converged, b.converged) {
                (true, false) => true,
                (false, true) => false,
                (true, true) => candidate.distance < b.distance,
                (false, false) => candidate.endpoint_error < b.endpoint_error,
            },
        };
        if better {
            best = Some(candidate);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Outcome of [`compare_to_gauge`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GaugeComparison {
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Targets excluded because the solver did not converge.
    pub excluded: u64,
}

/// Ratio range of cc-distance over the Korányi gauge on random unit-gauge
/// targets. Both quantities are degree-1 homogeneous under the dilations,
/// so sphere sampling covers all scales.
///
/// Targets are stratified over the horizontal/center balance: the angle θ
/// with `|u| = cos(θ)^{1/2}`, `|t| = sin(θ)` is drawn on a jittered grid
/// over [0, π/2] with both boundary angles pinned, and the horizontal and
/// center directions isotropically. The ratio varies mostly with θ (the
/// direction dependence is quotiented out by group automorphisms), so
/// stratifying θ keeps the observed interval stable across seeds at
/// moderate sample counts.
pub fn compare_to_gauge(
    samples: u64,
    seed: u64,
    params: &SolverParams,
    n: usize,
) -> Result<GaugeComparison, HqError> {
    if samples == 0 {
        return Err(HqError::EmptySampleSet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = f64::NEG_INFINITY;
    let mut excluded = 0u64;

    for k in 0..samples {
        let v = crate::group::sample_gaussian(n, &mut rng);
        let jitter: f64 = rng.random();
        let theta = if k == 0 {
            0.0
        } else if k == samples - 1 {
            std::f64::consts::FRAC_PI_2
        } else {
            std::f64::consts::FRAC_PI_2 * (k as f64 + jitter) / samples as f64
        };
        let target = match gauge_sphere_point(&v, theta) {
            Some(w) => w,
            None => continue,
        };
        let solve = cc_distance(
            &target,
            &SolverParams {
                seed: params.seed.wrapping_add(k << 8),
                ..*params
            },
        )?;
        if !solve.converged {
            excluded += 1;
            continue;
        }
        let ratio = solve.distance / norms::koranyi(&target);
        min_ratio = min_ratio.min(ratio);
        max_ratio = max_ratio.max(ratio);
    }

    Ok(GaugeComparison {
        min_ratio,
        max_ratio,
        excluded,
    })
}

/// Places a point on the Korányi unit sphere with horizontal weight
/// `cos(θ)^{1/2}` and center weight `sin(θ)`, taking the directions from
/// the isotropic draw `v`. Returns None for degenerate direction draws.
fn gauge_sphere_point(v: &GroupElement, theta: f64) -> Option<GroupElement> {
    let hn = v.horizontal_norm();
    let tn = crate::quaternion::vec3_norm(&v.t);
    if hn == 0.0 || tn == 0.0 {
        return None;
    }
    let c = theta.cos();
    let hw = c.sqrt() / hn;
    let tw = theta.sin() / tn;
    Some(GroupElement::new(
        v.u.iter().map(|q| q.scale(hw)).collect(),
        [v.t[0] * tw, v.t[1] * tw, v.t[2] * tw],
    ))
}
