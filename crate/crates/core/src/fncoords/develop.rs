//! Developing triangle strips into the upper half-plane.
//!
//! Every halfedge `h` has a chart: the isometric placement of its face with
//! `origin(h)` at `i`, `target(h)` at `i e^l` and the face on the left
//! (`Re z < 0`). Transitions between charts of neighbouring halfedges are
//! products of a rotation about `i` and a translation along the imaginary axis.

use num_complex::Complex;

use super::FnError;
use crate::hyperbolic::{distance, HolonomyTransform, HypError};
use crate::mesh::HalfedgeMesh;
use crate::ricci::{corner_angles, DiscreteMetric};
use crate::scalar::Real;
use crate::topology::{CutCurve, Piece};

/// Shared-edge mismatch (relative) above which a layout is rejected.
pub const DRIFT_LIMIT: f64 = 1e-6;

/// Edge lengths and corner angles of a metric, indexed by halfedge.
/// `angle[h]` is the angle of `face(h)` at `origin(h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfedgeGeometry<T> {
    pub length: Vec<T>,
    pub angle: Vec<T>,
}

impl<T: Real> HalfedgeGeometry<T> {
    pub fn new(mesh: &HalfedgeMesh, metric: &DiscreteMetric<T>) -> Result<Self, HypError> {
        let length = (0..mesh.n_halfedges()).map(|h| metric.halfedge_length(mesh, h)).collect();
        Ok(Self { length, angle: corner_angles(mesh, metric)? })
    }

    /// The same geometry seen from a cut piece.
    pub fn restrict(&self, piece: &Piece) -> Self {
        let n = piece.mesh.n_halfedges();
        let pick = |v: &[T]| (0..n).map(|h| v[piece.source_halfedge(h)]).collect();
        Self { length: pick(&self.length), angle: pick(&self.angle) }
    }

    /// Chart of `next(h)` expressed in the chart of `h`.
    pub fn next_transition(&self, mesh: &HalfedgeMesh, h: usize) -> HolonomyTransform<T> {
        let turn = T::PI() - self.angle[mesh.next(h)];
        HolonomyTransform::translation(self.length[h]).compose(&HolonomyTransform::rotation(turn))
    }

    /// Chart of `twin(h)` expressed in the chart of `h`.
    pub fn cross_transition(&self, h: usize) -> HolonomyTransform<T> {
        HolonomyTransform::translation(self.length[h]).compose(&HolonomyTransform::rotation(T::PI()))
    }

    /// Corners of `face(h)` in the chart of `h`, in face corner order.
    fn face_in_chart(&self, mesh: &HalfedgeMesh, h: usize) -> [Complex<T>; 3] {
        let up = |l: T| Complex::new(T::zero(), l.exp());
        let third = HolonomyTransform::rotation(self.angle[h]).apply(up(self.length[mesh.prev(h)]));
        let local = [up(T::zero()), up(self.length[h]), third];
        let k = h % 3;
        [0, 1, 2].map(|c| local[(c + 3 - k) % 3])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacedTriangle<T> {
    pub face: usize,
    pub corners: [Complex<T>; 3],
}

/// Triangles to the left of a closed curve, developed in the chart of the
/// curve's first halfedge.
#[derive(Debug, Clone, PartialEq)]
pub struct LaidOutStrip<T> {
    pub curve: CutCurve,
    pub placements: Vec<PlacedTriangle<T>>,
    /// Maps the chart of the last placed copy of the first halfedge (one turn
    /// around the curve) into the chart of the first; translates towards the
    /// curve's direction.
    pub holonomy: HolonomyTransform<T>,
    /// Largest relative disagreement of shared edge endpoints.
    pub edge_mismatch: T,
}

impl<T: Real> LaidOutStrip<T> {
    /// Largest relative deviation of placed side lengths from the metric.
    pub fn length_mismatch(&self, geometry: &HalfedgeGeometry<T>) -> T {
        let mut worst = T::zero();
        for p in &self.placements {
            for k in 0..3 {
                let l = geometry.length[3 * p.face + k];
                let d = distance(p.corners[k], p.corners[(k + 1) % 3]);
                worst = worst.max((d - l).abs() / l);
            }
        }
        worst
    }
}

pub(crate) struct Development<T> {
    pub holonomy: HolonomyTransform<T>,
    pub placements: Vec<PlacedTriangle<T>>,
    pub edge_mismatch: T,
}

fn relative_gap<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    (a - b).norm() / a.norm().max(b.norm()).max(T::one())
}

/// Develops the faces to the left of a closed chain of halfedges, walking
/// each vertex fan from the incoming to the outgoing halfedge.
pub(crate) fn develop_chain<T: Real>(
    mesh: &HalfedgeMesh,
    geometry: &HalfedgeGeometry<T>,
    chain: &[usize],
) -> Result<Development<T>, FnError> {
    let n = chain.len();
    let mut m = HolonomyTransform::identity();
    let mut placements = vec![PlacedTriangle { face: mesh.face(chain[0]), corners: geometry.face_in_chart(mesh, chain[0]) }];
    let mut edge_mismatch = T::zero();
    for i in 0..n {
        let (h, goal) = (chain[i], chain[(i + 1) % n]);
        if mesh.target(h) != mesh.origin(goal) {
            return Err(FnError::Geometry(format!("halfedges {h} and {goal} are not consecutive")));
        }
        m = m.compose(&geometry.next_transition(mesh, h));
        let mut x = mesh.next(h);
        let mut guard = 0;
        while x != goal {
            let t = mesh
                .twin(x)
                .ok_or_else(|| FnError::Geometry(format!("fan walk at vertex {} reached the boundary", mesh.origin(x))))?;
            guard += 1;
            if guard > mesh.n_halfedges() {
                return Err(FnError::Geometry("fan walk does not return to the curve".into()));
            }
            let before = placements.last().expect("at least one placement");
            let shared_old = [x % 3, (x + 1) % 3].map(|k| before.corners[k]);
            m = m.compose(&geometry.cross_transition(x));
            let corners = geometry.face_in_chart(mesh, t).map(|z| m.apply(z));
            // twin(x) runs the other way along the shared edge.
            let shared_new = [(t + 1) % 3, t % 3].map(|k| corners[k]);
            for (a, b) in shared_old.into_iter().zip(shared_new) {
                edge_mismatch = edge_mismatch.max(relative_gap(a, b));
            }
            placements.push(PlacedTriangle { face: mesh.face(t), corners });
            m = m.compose(&geometry.next_transition(mesh, t));
            x = mesh.next(t);
        }
    }
    // The last fan re-enters the first face; that copy starts the next turn.
    if placements.len() > 1 && placements.last().is_some_and(|p| p.face == mesh.face(chain[0])) {
        placements.pop();
    }
    if !(edge_mismatch <= T::lit(DRIFT_LIMIT)) {
        return Err(FnError::NumericalDrift { mismatch: edge_mismatch.to_f64_lossy() });
    }
    Ok(Development { holonomy: m, placements, edge_mismatch })
}

/// Halfedges along a vertex cycle.
pub(crate) fn curve_chain(mesh: &HalfedgeMesh, curve: &CutCurve) -> Result<Vec<usize>, FnError> {
    let v = &curve.vertices;
    if v.len() < 3 {
        return Err(FnError::Geometry(format!("curve of {} vertices", v.len())));
    }
    (0..v.len())
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            mesh.find_halfedge(a, b).ok_or_else(|| FnError::Geometry(format!("no halfedge from {a} to {b}")))
        })
        .collect()
}

/// Halfedges of the boundary loop through boundary halfedge `start`.
pub(crate) fn boundary_chain(mesh: &HalfedgeMesh, start: usize) -> Vec<usize> {
    let mut chain = vec![start];
    let mut h = mesh.next_boundary(start);
    while h != start {
        chain.push(h);
        h = mesh.next_boundary(h);
    }
    chain
}

/// Develops the strip to the left of `curve`.
pub fn layout_strip_with<T: Real>(
    mesh: &HalfedgeMesh,
    geometry: &HalfedgeGeometry<T>,
    curve: &CutCurve,
) -> Result<LaidOutStrip<T>, FnError> {
    let chain = curve_chain(mesh, curve)?;
    let dev = develop_chain(mesh, geometry, &chain)?;
    Ok(LaidOutStrip { curve: curve.clone(), placements: dev.placements, holonomy: dev.holonomy, edge_mismatch: dev.edge_mismatch })
}

/// Develops the strip to the left of `curve` under `metric`.
pub fn layout_strip<T: Real>(
    mesh: &HalfedgeMesh,
    metric: &DiscreteMetric<T>,
    curve: &CutCurve,
) -> Result<LaidOutStrip<T>, FnError> {
    layout_strip_with(mesh, &HalfedgeGeometry::new(mesh, metric)?, curve)
}

/// Length of the closed geodesic homotopic to the strip's curve.
pub fn geodesic_length<T: Real>(strip: &LaidOutStrip<T>) -> Result<T, HypError> {
    strip.holonomy.translation_length()
}
