//! Cuff holonomies of pants pieces, seam feet and twists.

use std::collections::VecDeque;

use super::develop::{boundary_chain, develop_chain, HalfedgeGeometry};
use super::FnError;
use crate::hyperbolic::{perpendicular_to_imaginary_axis, HolonomyTransform};
use crate::mesh::HalfedgeMesh;
use crate::scalar::Real;
use crate::topology::{Pants, PantsDecomposition};

/// Holonomies of the three cuffs of one pants piece, each in the chart of
/// its base halfedge, and the chart transports between base halfedges.
#[derive(Debug, Clone)]
pub struct PantsGeometry<T> {
    pub cuff_holonomy: [HolonomyTransform<T>; 3],
    pub cuff_length: [T; 3],
    /// `transport[s][x]`: chart of cuff `x`'s base expressed in the chart of
    /// cuff `s`'s base, along a face path without repeated faces.
    pub transport: [[HolonomyTransform<T>; 3]; 3],
    pub edge_mismatch: T,
}

/// Chart of `to` expressed in the chart of `from`, following a shortest
/// path in the dual graph. Shortest dual paths visit each face once, so the
/// arc they describe is simple.
fn transport<T: Real>(mesh: &HalfedgeMesh, geometry: &HalfedgeGeometry<T>, from: usize, to: usize) -> HolonomyTransform<T> {
    let nf = mesh.n_faces();
    let (start, goal) = (mesh.face(from), mesh.face(to));
    let mut entry = vec![usize::MAX; nf];
    entry[start] = from;
    let mut queue = VecDeque::from([start]);
    while let Some(f) = queue.pop_front() {
        if f == goal {
            break;
        }
        for k in 0..3 {
            if let Some(t) = mesh.twin(3 * f + k) {
                let g = mesh.face(t);
                if entry[g] == usize::MAX {
                    entry[g] = t;
                    queue.push_back(g);
                }
            }
        }
    }
    let mut crossings = Vec::new();
    let mut f = goal;
    while f != start {
        let t = entry[f];
        crossings.push(t);
        f = mesh.face(mesh.twin(t).expect("entry halfedge has a twin"));
    }
    crossings.reverse();

    let mut m = HolonomyTransform::identity();
    let mut h = from;
    let walk = |m: &mut HolonomyTransform<T>, h: &mut usize, target: usize| {
        while *h != target {
            *m = m.compose(&geometry.next_transition(mesh, *h));
            *h = mesh.next(*h);
        }
    };
    for t in crossings {
        let exit = mesh.twin(t).expect("entry halfedge has a twin");
        walk(&mut m, &mut h, exit);
        m = m.compose(&geometry.cross_transition(exit));
        h = t;
    }
    walk(&mut m, &mut h, to);
    m
}

impl<T: Real> PantsGeometry<T> {
    pub fn new(pants: &Pants, geometry: &HalfedgeGeometry<T>) -> Result<Self, FnError> {
        let mesh = &pants.piece.mesh;
        let local = geometry.restrict(&pants.piece);
        let mut edge_mismatch = T::zero();
        let mut hol = Vec::with_capacity(3);
        for c in &pants.cuffs {
            let dev = develop_chain(mesh, &local, &boundary_chain(mesh, c.base_halfedge))?;
            edge_mismatch = edge_mismatch.max(dev.edge_mismatch);
            hol.push(dev.holonomy);
        }
        let cuff_holonomy: [HolonomyTransform<T>; 3] = [hol[0], hol[1], hol[2]];
        let mut cuff_length = [T::zero(); 3];
        for (l, h) in cuff_length.iter_mut().zip(&cuff_holonomy) {
            *l = h.translation_length()?;
        }
        let base = pants.cuffs.map(|c| c.base_halfedge);
        let transport = [0, 1, 2].map(|s| [0, 1, 2].map(|x| transport(mesh, &local, base[s], base[x])));
        Ok(Self { cuff_holonomy, cuff_length, transport, edge_mismatch })
    }

    /// Lift of cuff `x`'s axis seen from cuff `s`, in the chart of `s`'s base.
    fn lifted(&self, s: usize, x: usize) -> HolonomyTransform<T> {
        self.cuff_holonomy[x].conjugate_by(&self.transport[s][x])
    }

    /// Common perpendicular from cuff `s` to cuff `x`, normalised so that
    /// cuff `s` runs up the imaginary axis.
    pub fn seam(&self, s: usize, x: usize) -> Result<SeamFoot<T>, FnError> {
        let normalizer = self.cuff_holonomy[s].axis_normalizer()?;
        SeamFoot::locate(&self.lifted(s, x), &normalizer)
    }
}

/// Foot of a seam on a cuff axis in normalised coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeamFoot<T> {
    /// Endpoints of the other cuff's lifted axis.
    pub endpoints: (T, T),
    pub length: T,
    /// Height of the foot on the imaginary axis.
    pub height: T,
}

impl<T: Real> SeamFoot<T> {
    fn locate(other: &HolonomyTransform<T>, normalizer: &HolonomyTransform<T>) -> Result<Self, FnError> {
        let (p, q) = other.conjugate_by(normalizer).fixed_points()?;
        let (p, q) = p.zip(q).ok_or_else(|| FnError::Geometry("seam target axis passes through infinity".into()))?;
        let (length, height) = perpendicular_to_imaginary_axis(p, q)
            .map_err(|_| FnError::Geometry(format!("seam target axis ({p}, {q}) crosses the cuff axis")))?;
        Ok(Self { endpoints: (p, q), length, height })
    }

    /// Which side of the upward axis the other cuff lies on.
    fn on_left(&self) -> bool {
        self.endpoints.0 < T::zero()
    }
}

/// Slot of the cuff that seams from slot `s` are measured to: the first
/// of the two remaining slots in cuff order.
pub fn seam_partner(s: usize) -> usize {
    if s == 0 { 1 } else { 0 }
}

/// Twist data of one interior curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistMeasurement<T> {
    /// Signed distance along the geodesic from the left seam foot to the
    /// right one, positive towards the curve's direction.
    pub raw_offset: T,
    /// `raw_offset` reduced into `(-l/2, l/2]`.
    pub offset: T,
    /// `2 pi offset / l`.
    pub angle: T,
    pub length: T,
    /// Entry-wise gap between the holonomies seen from the two sides.
    pub closure_error: T,
}

/// Reduces an offset along a closed geodesic of length `l` into `(-l/2, l/2]`.
pub fn reduce_offset<T: Real>(d: T, l: T) -> T {
    let half = l * T::lit(0.5);
    let mut r = d - l * (d / l).round();
    if r <= -half {
        r += l;
    } else if r > half {
        r -= l;
    }
    r
}

/// Twist of interior curve `curve`. With `reversed` the curve is traversed
/// the other way, which swaps its sides; the result must not change.
pub fn cuff_twist_with<T: Real>(
    mesh: &HalfedgeMesh,
    geometry: &HalfedgeGeometry<T>,
    decomposition: &PantsDecomposition,
    pants_geometry: &[PantsGeometry<T>],
    curve: usize,
    reversed: bool,
) -> Result<TwistMeasurement<T>, FnError> {
    let adj = decomposition
        .adjacency
        .get(curve)
        .filter(|a| a.len() == 2)
        .ok_or_else(|| FnError::Geometry(format!("curve {curve} is not an interior curve")))?;
    let (left, right) = if reversed { (adj[1], adj[0]) } else { (adj[0], adj[1]) };
    let (gl, gr) = (&pants_geometry[left.pants], &pants_geometry[right.pants]);
    let base = decomposition.pants[left.pants].piece.source_halfedge(decomposition.pants[left.pants].cuffs[left.slot].base_halfedge);
    let twin = decomposition.pants[right.pants].piece.source_halfedge(decomposition.pants[right.pants].cuffs[right.slot].base_halfedge);
    if mesh.twin(base) != Some(twin) {
        return Err(FnError::Geometry(format!("base halfedges of curve {curve} are not twins")));
    }

    let axis = gl.cuff_holonomy[left.slot];
    let length = axis.translation_length()?;
    let normalizer = axis.axis_normalizer()?;
    let left_foot = SeamFoot::locate(&gl.lifted(left.slot, seam_partner(left.slot)), &normalizer)?;

    // The right pants is developed in the chart of the twin halfedge.
    let cross = geometry.cross_transition(base);
    let right_axis = gr.cuff_holonomy[right.slot].conjugate_by(&cross);
    let right_foot = SeamFoot::locate(&gr.lifted(right.slot, seam_partner(right.slot)).conjugate_by(&cross), &normalizer)?;
    if !left_foot.on_left() || right_foot.on_left() {
        return Err(FnError::Geometry(format!("seams of curve {curve} lie on the wrong sides of its axis")));
    }

    let raw_offset = (right_foot.height / left_foot.height).ln();
    let offset = reduce_offset(raw_offset, length);
    Ok(TwistMeasurement {
        raw_offset,
        offset,
        angle: T::TAU() * offset / length,
        length,
        closure_error: right_axis.distance_to(&axis.inverse()),
    })
}

/// Seam from each cuff to the next one, measured in the layout and
/// predicted from the three cuff lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeamCheck<T> {
    pub pants: usize,
    pub slots: [usize; 2],
    pub measured: T,
    pub predicted: T,
}

pub fn seam_checks<T: Real>(pants: usize, g: &PantsGeometry<T>) -> Result<Vec<SeamCheck<T>>, FnError> {
    let mut out = Vec::with_capacity(6);
    for s in 0..3 {
        for x in (0..3).filter(|&x| x != s) {
            let k = 3 - s - x;
            let measured = g.seam(s, x)?.length;
            let predicted = crate::hyperbolic::pants_seam(g.cuff_length[s], g.cuff_length[x], g.cuff_length[k])?;
            out.push(SeamCheck { pants, slots: [s, x], measured, predicted });
        }
    }
    Ok(out)
}
