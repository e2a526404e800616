//! Circle-packing metrics and their discrete curvature.

use super::RicciError;
use crate::hyperbolic::{HypError, HyperbolicTriangle};
use crate::mesh::HalfedgeMesh;
use crate::scalar::{pairwise_sum, Real};

/// Vertex circle radii relative to the average incident edge length.
/// `1/sqrt(3)` is the circumradius ratio of the equilateral triangle, which
/// keeps fitted weights inside `[0, 1]` on well-shaped meshes.
pub const RADIUS_RATIO: f64 = 0.577_350_269_189_625_8;

/// Per-vertex conformal factors `u = log tanh(r/2)` with per-edge weights and
/// the edge lengths they induce:
/// `cosh l_ij = cosh r_i cosh r_j + w_ij sinh r_i sinh r_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMetric<T> {
    pub u: Vec<T>,
    pub weights: Vec<T>,
    pub lengths: Vec<T>,
}

/// Radius of the circle with conformal factor `u < 0`.
pub fn radius_from_u<T: Real>(u: T) -> T {
    T::lit(2.0) * u.exp().atanh()
}

pub fn u_from_radius<T: Real>(r: T) -> T {
    (r * T::lit(0.5)).tanh().ln()
}

/// `cosh l - 1 = 2 sinh^2((r_i - r_j)/2) + (1 + w) sinh r_i sinh r_j`, which
/// avoids cancellation for small circles.
pub fn edge_length<T: Real>(ri: T, rj: T, w: T) -> T {
    let two = T::lit(2.0);
    let d = ((ri - rj) / two).sinh();
    let x = two * d * d + (T::one() + w) * ri.sinh() * rj.sinh();
    two * (x / two).sqrt().asinh()
}

/// `d l_ij / d u_i` for the edge from `i` to `j`.
pub fn edge_length_derivative<T: Real>(ri: T, rj: T, w: T, l: T) -> T {
    ri.sinh() * (ri.sinh() * rj.cosh() + w * ri.cosh() * rj.sinh()) / l.sinh()
}

impl<T: Real> DiscreteMetric<T> {
    /// Builds the metric for conformal factors `u` and fixed weights.
    pub fn from_u(mesh: &HalfedgeMesh, u: Vec<T>, weights: Vec<T>) -> Result<Self, RicciError> {
        if u.len() != mesh.n_vertices() || weights.len() != mesh.n_edges() {
            return Err(RicciError::Init("metric size does not match the mesh".into()));
        }
        if let Some(i) = u.iter().position(|&x| !(x < T::zero() && x.is_finite())) {
            return Err(RicciError::Init(format!("conformal factor of vertex {i} is not negative and finite")));
        }
        let radii: Vec<T> = u.iter().map(|&x| radius_from_u(x)).collect();
        let lengths = (0..mesh.n_edges())
            .map(|e| {
                let [a, b] = mesh.edge_vertices(e);
                edge_length(radii[a], radii[b], weights[e])
            })
            .collect();
        Ok(Self { u, weights, lengths })
    }

    pub fn radii(&self) -> Vec<T> {
        self.u.iter().map(|&x| radius_from_u(x)).collect()
    }

    pub fn min_radius(&self) -> T {
        self.radii().into_iter().fold(T::infinity(), T::min)
    }

    /// Side lengths of face `f`; side `k` is opposite corner `k`.
    pub fn face_lengths(&self, mesh: &HalfedgeMesh, f: usize) -> [T; 3] {
        [1, 2, 0].map(|k| self.lengths[mesh.edge(3 * f + k)])
    }

    pub fn triangle(&self, mesh: &HalfedgeMesh, f: usize) -> Result<HyperbolicTriangle<T>, HypError> {
        HyperbolicTriangle::new(self.face_lengths(mesh, f))
    }

    /// Length of the edge carrying halfedge `h`.
    pub fn halfedge_length(&self, mesh: &HalfedgeMesh, h: usize) -> T {
        self.lengths[mesh.edge(h)]
    }

    /// Sum of the hyperbolic areas of all faces.
    pub fn total_area(&self, mesh: &HalfedgeMesh) -> Result<T, HypError> {
        let areas = (0..mesh.n_faces()).map(|f| self.triangle(mesh, f)?.area()).collect::<Result<Vec<_>, _>>()?;
        Ok(pairwise_sum(&areas))
    }
}

/// Initial circle-packing metric fitted to the Euclidean edge lengths.
///
/// Lengths are first normalised by a global factor making the Euclidean area
/// equal to `2 pi |chi|`, the hyperbolic area of the target metric; the whole
/// pipeline is therefore invariant under rescaling of the input.
pub fn init_metric<T: Real>(mesh: &HalfedgeMesh) -> Result<DiscreteMetric<T>, RicciError> {
    let chi = mesh.euler_characteristic();
    if chi >= 0 {
        return Err(RicciError::Init(format!("Euler characteristic {chi} admits no hyperbolic metric")));
    }
    let euclid: Vec<f64> = (0..mesh.n_edges()).map(|e| mesh.euclidean_edge_length(e)).collect();
    let face_areas: Vec<f64> = (0..mesh.n_faces())
        .map(|f| {
            let l = [0, 1, 2].map(|k| euclid[mesh.edge(3 * f + k)]);
            let s = 0.5 * (l[0] + l[1] + l[2]);
            (s * (s - l[0]) * (s - l[1]) * (s - l[2])).max(0.0).sqrt()
        })
        .collect();
    let area = pairwise_sum(&face_areas);
    if !(area > 0.0) || euclid.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(RicciError::Init("input has zero-length edges or zero area".into()));
    }
    let base = (2.0 * std::f64::consts::PI * (-chi) as f64 / area).sqrt();

    let mut tried = Vec::new();
    for step in 0..40 {
        // 1, 1/2, 2, 1/4, 4, ...
        let factor = if step == 0 { 1.0 } else { 2f64.powi(if step % 2 == 1 { -(step + 1) / 2 } else { step / 2 }) };
        if !(1e-6..=1e6).contains(&factor) {
            continue;
        }
        tried.push(factor);
        let scale = base * factor;
        let metric = fit_metric::<T>(mesh, &euclid, scale)?;
        if (0..mesh.n_faces()).all(|f| metric.triangle(mesh, f).is_ok()) {
            return Ok(metric);
        }
    }
    Err(RicciError::Init(format!("no rescale among {} candidates validates all faces", tried.len())))
}

fn fit_metric<T: Real>(mesh: &HalfedgeMesh, euclid: &[f64], scale: f64) -> Result<DiscreteMetric<T>, RicciError> {
    let scaled: Vec<f64> = euclid.iter().map(|l| l * scale).collect();
    let radii: Vec<f64> = (0..mesh.n_vertices())
        .map(|v| {
            let inc: Vec<f64> = mesh.neighbors(v).iter().map(|&w| scaled[mesh.find_edge(v, w).unwrap()]).collect();
            RADIUS_RATIO * pairwise_sum(&inc) / inc.len() as f64
        })
        .collect();
    let weights: Vec<T> = (0..mesh.n_edges())
        .map(|e| {
            let [a, b] = mesh.edge_vertices(e);
            let (ra, rb) = (radii[a], radii[b]);
            let half = 0.5 * scaled[e];
            let d = 0.5 * (ra - rb);
            let w = (2.0 * half.sinh().powi(2) - 2.0 * d.sinh().powi(2)) / (ra.sinh() * rb.sinh()) - 1.0;
            T::lit(w.clamp(0.0, 1.0))
        })
        .collect();
    let u = radii.iter().map(|&r| T::lit(u_from_radius(r))).collect();
    DiscreteMetric::from_u(mesh, u, weights)
}

/// Vertex curvatures of a metric. Target is zero at every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureState<T> {
    /// `2 pi - angle sum` at interior vertices, `pi - angle sum` on the boundary.
    pub k: Vec<T>,
    pub angle_sums: Vec<T>,
    pub total_area: T,
    /// `max |K_v|`
    pub residual: T,
    /// `sum K - sum area - 2 pi chi`
    pub gauss_bonnet_error: T,
}

impl<T: Real> CurvatureState<T> {
    pub fn l2_norm(&self) -> T {
        let sq: Vec<T> = self.k.iter().map(|&x| x * x).collect();
        pairwise_sum(&sq).sqrt()
    }
}

/// Corner angles of every face, `angles[3f + k]` at corner `k` of face `f`.
pub fn corner_angles<T: Real>(mesh: &HalfedgeMesh, metric: &DiscreteMetric<T>) -> Result<Vec<T>, HypError> {
    let mut out = Vec::with_capacity(3 * mesh.n_faces());
    for f in 0..mesh.n_faces() {
        out.extend_from_slice(&metric.triangle(mesh, f)?.angles()?);
    }
    Ok(out)
}

pub fn curvature<T: Real>(mesh: &HalfedgeMesh, metric: &DiscreteMetric<T>) -> Result<CurvatureState<T>, HypError> {
    let angles = corner_angles(mesh, metric)?;
    let pi = T::PI();
    let mut k = Vec::with_capacity(mesh.n_vertices());
    let mut angle_sums = Vec::with_capacity(mesh.n_vertices());
    for v in 0..mesh.n_vertices() {
        let corners: Vec<T> = mesh.outgoing(v).into_iter().map(|h| angles[h]).collect();
        let s = pairwise_sum(&corners);
        let full = if mesh.is_boundary_vertex(v) { pi } else { pi + pi };
        angle_sums.push(s);
        k.push(full - s);
    }
    let areas: Vec<T> =
        (0..mesh.n_faces()).map(|f| pi - pairwise_sum(&angles[3 * f..3 * f + 3])).collect();
    let total_area = pairwise_sum(&areas);
    let residual = k.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    let chi = T::lit(mesh.euler_characteristic() as f64);
    let gauss_bonnet_error = pairwise_sum(&k) - total_area - (pi + pi) * chi;
    Ok(CurvatureState { k, angle_sums, total_area, residual, gauss_bonnet_error })
}
