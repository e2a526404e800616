//! Discrete hyperbolic Ricci flow on circle-packing metrics, driven by
//! Newton's method to zero vertex curvature (geodesic boundary).

mod metric;
pub mod sparse;

use thiserror::Error;

use crate::hyperbolic::HypError;
use crate::mesh::HalfedgeMesh;
use crate::scalar::Real;

pub use metric::{
    corner_angles, curvature, edge_length, edge_length_derivative, init_metric, radius_from_u, u_from_radius,
    CurvatureState, DiscreteMetric, RADIUS_RATIO,
};
use sparse::{solve_pcg, CsrMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RicciError {
    #[error("cannot initialise metric: {0}")]
    Init(String),
    #[error("no convergence after {iterations} iterations (residual {last:e})", last = history.last().copied().unwrap_or(f64::NAN))]
    NoConvergence { iterations: usize, history: Vec<f64> },
    #[error("line search failed at iteration {iteration}")]
    StepFailure { iteration: usize },
    #[error("Newton system singular beyond regularisation at iteration {iteration}")]
    SolveFailure { iteration: usize },
    #[error(transparent)]
    Degenerate(#[from] HypError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HessianMode {
    #[default]
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowConfig {
    /// Bound on `max |K_v|`.
    pub tolerance: f64,
    pub max_iters: usize,
    pub hessian: HessianMode,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self { tolerance: 1e-8, max_iters: 100, hessian: HessianMode::Analytic }
    }
}

/// One row of the iteration log. Row 0 describes the initial metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowLogRow {
    pub iteration: usize,
    pub residual: f64,
    pub min_radius: f64,
    pub step_scale: f64,
    pub gauss_bonnet_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowOutcome<T> {
    pub metric: DiscreteMetric<T>,
    pub state: CurvatureState<T>,
    pub iterations: usize,
    pub log: Vec<FlowLogRow>,
}

impl<T> FlowOutcome<T> {
    pub fn residual_history(&self) -> Vec<f64> {
        self.log.iter().map(|r| r.residual).collect()
    }
}

/// Sparsity pattern of `dK/du`: each vertex with itself and its neighbours.
fn hessian_pattern<T: Real>(mesh: &HalfedgeMesh) -> CsrMatrix<T> {
    let rows: Vec<Vec<usize>> = (0..mesh.n_vertices())
        .map(|v| {
            let mut r = mesh.neighbors(v);
            r.push(v);
            r.sort_unstable();
            r.dedup();
            r
        })
        .collect();
    CsrMatrix::with_pattern(&rows)
}

/// Closed-form `H = dK/du`.
pub fn hessian<T: Real>(mesh: &HalfedgeMesh, metric: &DiscreteMetric<T>) -> Result<CsrMatrix<T>, HypError> {
    let mut h = hessian_pattern(mesh);
    let radii = metric.radii();
    for f in 0..mesh.n_faces() {
        let vs = mesh.faces()[f];
        let tri = metric.triangle(mesh, f)?;
        let dtheta = tri.angle_derivatives()?;
        let l = tri.edge_lengths;
        // dl_s/du_m for side s (opposite corner s) and corner m.
        let mut dl = [[T::zero(); 3]; 3];
        for s in 0..3 {
            let e = mesh.edge(3 * f + (s + 1) % 3);
            let w = metric.weights[e];
            for m in [(s + 1) % 3, (s + 2) % 3] {
                let other = if m == (s + 1) % 3 { (s + 2) % 3 } else { (s + 1) % 3 };
                dl[s][m] = edge_length_derivative(radii[vs[m]], radii[vs[other]], w, l[s]);
            }
        }
        for a in 0..3 {
            for m in 0..3 {
                let mut d = T::zero();
                for s in 0..3 {
                    d += dtheta[a][s] * dl[s][m];
                }
                h.add(vs[a], vs[m], -d);
            }
        }
    }
    Ok(h)
}

/// `dK/du` by central differences, perturbing one conformal factor at a
/// time and re-evaluating only the faces around it.
pub fn hessian_finite_difference<T: Real>(
    mesh: &HalfedgeMesh,
    metric: &DiscreteMetric<T>,
) -> Result<CsrMatrix<T>, RicciError> {
    let mut h = hessian_pattern(mesh);
    let radii = metric.radii();
    let step = T::epsilon().cbrt();
    for m in 0..mesh.n_vertices() {
        let hm = step * T::one().max(metric.u[m].abs());
        let mut columns: Vec<(usize, T)> = Vec::new();
        for (sign, u_m) in [(T::one(), metric.u[m] + hm), (-T::one(), metric.u[m] - hm)] {
            if !(u_m < T::zero()) {
                return Err(RicciError::Init(format!("conformal factor of vertex {m} too close to zero")));
            }
            let r_m = radius_from_u(u_m);
            for h0 in mesh.outgoing(m) {
                let f = mesh.face(h0);
                let vs = mesh.faces()[f];
                let side = |s: usize| {
                    let (a, b) = (vs[(s + 1) % 3], vs[(s + 2) % 3]);
                    if a == m || b == m {
                        let other = if a == m { b } else { a };
                        edge_length(r_m, radii[other], metric.weights[mesh.edge(3 * f + (s + 1) % 3)])
                    } else {
                        metric.lengths[mesh.edge(3 * f + (s + 1) % 3)]
                    }
                };
                let angles = crate::hyperbolic::HyperbolicTriangle::new([side(0), side(1), side(2)])?.angles()?;
                for k in 0..3 {
                    // K = const - sum of angles.
                    columns.push((vs[k], -sign * angles[k] / (hm + hm)));
                }
            }
        }
        for (v, d) in columns {
            h.add(v, m, d);
        }
    }
    Ok(h)
}

/// Newton direction `delta` with `(H + lambda I) delta = -K`, escalating the
/// regularisation from `1e-12` by factors of ten at most six times.
pub fn newton_direction<T: Real>(h: &CsrMatrix<T>, k: &[T]) -> Option<Vec<T>> {
    let rhs: Vec<T> = k.iter().map(|&x| -x).collect();
    let rel_tol = T::lit(1e-11).max(T::epsilon() * T::lit(100.0));
    let max_iter = (10 * h.n).max(1000);
    let mut lambda = T::lit(1e-12);
    for _ in 0..=6 {
        if let Some(x) = solve_pcg(h, &rhs, lambda, rel_tol, max_iter) {
            return Some(x);
        }
        lambda *= T::lit(10.0);
    }
    None
}

fn log_row<T: Real>(iteration: usize, metric: &DiscreteMetric<T>, state: &CurvatureState<T>, step: f64) -> FlowLogRow {
    FlowLogRow {
        iteration,
        residual: state.residual.to_f64_lossy(),
        min_radius: metric.min_radius().to_f64_lossy(),
        step_scale: step,
        gauss_bonnet_error: state.gauss_bonnet_error.to_f64_lossy(),
    }
}

/// One damped Newton step. Returns the accepted metric, its curvature and the
/// step scale used. The step is halved until all conformal factors stay
/// negative, every face is a valid triangle and the Euclidean norm of the
/// curvature vector does not increase.
pub fn newton_step<T: Real>(
    mesh: &HalfedgeMesh,
    metric: &DiscreteMetric<T>,
    state: &CurvatureState<T>,
    mode: HessianMode,
    iteration: usize,
) -> Result<(DiscreteMetric<T>, CurvatureState<T>, T), RicciError> {
    let h = match mode {
        HessianMode::Analytic => hessian(mesh, metric)?,
        HessianMode::FiniteDifference => hessian_finite_difference(mesh, metric)?,
    };
    let delta = newton_direction(&h, &state.k).ok_or(RicciError::SolveFailure { iteration })?;
    let norm0 = state.l2_norm();
    let mut t = T::one();
    for _ in 0..40 {
        let u: Vec<T> = metric.u.iter().zip(&delta).map(|(&u, &d)| u + t * d).collect();
        if u.iter().all(|&x| x < T::zero() && x.is_finite()) {
            if let Ok(candidate) = DiscreteMetric::from_u(mesh, u, metric.weights.clone()) {
                if let Ok(s) = curvature(mesh, &candidate) {
                    if s.l2_norm() <= norm0 {
                        return Ok((candidate, s, t));
                    }
                }
            }
        }
        t *= T::lit(0.5);
    }
    Err(RicciError::StepFailure { iteration })
}

/// Runs Newton iterations until `max |K_v| <= tolerance`.
pub fn flow_to_hyperbolic<T: Real>(
    mesh: &HalfedgeMesh,
    metric: DiscreteMetric<T>,
    config: &FlowConfig,
) -> Result<FlowOutcome<T>, RicciError> {
    let tol = T::lit(config.tolerance);
    let mut metric = metric;
    let mut state = curvature(mesh, &metric)?;
    let mut log = vec![log_row(0, &metric, &state, 0.0)];
    let mut iterations = 0;
    while state.residual > tol {
        if iterations == config.max_iters {
            return Err(RicciError::NoConvergence {
                iterations,
                history: log.iter().map(|r| r.residual).collect(),
            });
        }
        iterations += 1;
        let (m, s, t) = newton_step(mesh, &metric, &state, config.hessian, iterations)?;
        metric = m;
        state = s;
        log.push(log_row(iterations, &metric, &state, t.to_f64_lossy()));
    }
    Ok(FlowOutcome { metric, state, iterations, log })
}
