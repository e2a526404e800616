//! Combinatorial pants decompositions: disjoint essential edge cycles that
//! cut the surface into pairs of pants.

mod cut;
pub mod homology;
mod search;

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::mesh::{HalfedgeMesh, MeshError, SurfaceSignature};
pub use cut::{cut_along, Piece};
use homology::{Span, TreeCotree};
use search::shortest_cycle;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopoError {
    #[error("mesh too coarse to route disjoint curves: {0}; refine and retry")]
    RefinementNeeded(String),
    #[error("topology error: {0}")]
    Topology(String),
    #[error("invalid cut curve: {0}")]
    Curve(String),
}

impl From<MeshError> for TopoError {
    fn from(e: MeshError) -> Self {
        Self::Topology(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveKind {
    Interior,
    Boundary,
}

/// Closed simple cycle of mesh vertices; consecutive vertices share an edge
/// and the last connects back to the first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CutCurve {
    pub vertices: Vec<usize>,
    pub kind: CurveKind,
}

impl CutCurve {
    pub fn interior(vertices: Vec<usize>) -> Self {
        Self { vertices, kind: CurveKind::Interior }
    }

    pub fn boundary(vertices: Vec<usize>) -> Self {
        Self { vertices, kind: CurveKind::Boundary }
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len()
    }

    /// Same cycle traversed the other way, starting at the same vertex.
    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v[1..].reverse();
        Self { vertices: v, kind: self.kind }
    }

    /// The halfedge from the first to the second vertex.
    pub fn first_halfedge(&self, mesh: &HalfedgeMesh) -> Option<usize> {
        mesh.find_halfedge(self.vertices[0], self.vertices[1])
    }
}

/// Side of an oriented curve. Boundary curves are oriented with the surface
/// on their left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// One boundary component of a pants piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cuff {
    pub curve: usize,
    pub side: Side,
    /// Piece boundary halfedge over the curve's first edge.
    pub base_halfedge: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pants {
    pub piece: Piece,
    /// Sorted by curve index, left side first.
    pub cuffs: [Cuff; 3],
}

impl Pants {
    pub fn slot_of(&self, curve: usize, side: Side) -> Option<usize> {
        self.cuffs.iter().position(|c| c.curve == curve && c.side == side)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CuffRef {
    pub pants: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PantsDecomposition {
    pub signature: SurfaceSignature,
    /// Interior curves in discovery order, then boundary loops in mesh order.
    pub curves: Vec<CutCurve>,
    pub pants: Vec<Pants>,
    /// Per curve: `[left, right]` for interior curves, `[left]` for boundary.
    pub adjacency: Vec<Vec<CuffRef>>,
}

impl PantsDecomposition {
    pub fn interior_count(&self) -> usize {
        self.curves.iter().filter(|c| c.kind == CurveKind::Interior).count()
    }

    pub fn interior_curves(&self) -> &[CutCurve] {
        &self.curves[..self.interior_count()]
    }

    pub fn boundary_curves(&self) -> &[CutCurve] {
        &self.curves[self.interior_count()..]
    }
}

/// Generators of the first homology from a tree-cotree decomposition,
/// `2g + max(b - 1, 0)` simple cycles.
pub fn homotopy_generators(mesh: &HalfedgeMesh) -> Result<Vec<CutCurve>, TopoError> {
    mesh.signature()?;
    let tc = TreeCotree::new(mesh);
    Ok(tc.leftover.iter().map(|&e| CutCurve::interior(tc.fundamental_cycle(mesh, e))).collect())
}

fn find_split(piece: &Piece, sig: SurfaceSignature) -> Result<CutCurve, TopoError> {
    let m = &piece.mesh;
    let tc = TreeCotree::new(m);
    let loops = m.boundary_vertex_loops();
    let parities: Vec<_> = loops.iter().map(|l| tc.cycle_parity(m, l)).collect();
    let candidate = if sig.genus > 0 {
        let span = Span::new(&parities);
        shortest_cycle(m, &tc, |p| !span.contains(p))
    } else {
        let b = sig.boundary_count;
        let basis = Span::new(&parities[..b - 1]);
        shortest_cycle(m, &tc, |p| {
            basis.express(p).is_some_and(|c| (2..=b - 2).contains(&c.count_ones()))
        })
    };
    candidate.map(CutCurve::interior).ok_or_else(|| {
        TopoError::RefinementNeeded(format!(
            "no disjoint essential cycle in a component of genus {} with {} boundaries",
            sig.genus, sig.boundary_count
        ))
    })
}

fn check_split(before: SurfaceSignature, after: &[Piece]) -> Result<(), TopoError> {
    let sigs: Vec<SurfaceSignature> = after.iter().map(|p| p.mesh.signature()).collect::<Result<_, _>>()?;
    let ok = if before.genus > 0 {
        sigs == [SurfaceSignature::new(before.genus - 1, before.boundary_count + 2)]
    } else {
        sigs.len() == 2
            && sigs.iter().all(|s| s.genus == 0 && s.boundary_count >= 3)
            && sigs[0].boundary_count + sigs[1].boundary_count == before.boundary_count + 2
    };
    if ok {
        Ok(())
    } else {
        Err(TopoError::Topology(format!("unexpected split of {before:?} into {sigs:?}")))
    }
}

/// Greedy pants decomposition: while a component is not a pair of pants,
/// cut it along a shortest non-separating cycle (positive genus) or a
/// shortest cycle splitting its boundaries into two groups of at least two.
/// Curves use interior vertices of their component only, so they are
/// pairwise disjoint and disjoint from the mesh boundary.
pub fn pants_decompose(mesh: &HalfedgeMesh) -> Result<PantsDecomposition, TopoError> {
    let signature = mesh.signature()?;
    if !signature.is_admissible() {
        return Err(TopoError::Topology(format!(
            "surface of genus {} with {} boundaries has no pants decomposition",
            signature.genus, signature.boundary_count
        )));
    }

    let mut found: Vec<CutCurve> = Vec::new();
    let mut queue = VecDeque::from(cut_along(mesh, &[])?);
    while let Some(piece) = queue.pop_front() {
        let sig = piece.mesh.signature()?;
        if sig == SurfaceSignature::new(0, 3) {
            continue;
        }
        if !sig.is_admissible() {
            return Err(TopoError::Topology(format!("component {sig:?} is not hyperbolic")));
        }
        let curve = find_split(&piece, sig)?;
        let sub = cut_along(&piece.mesh, std::slice::from_ref(&curve))?;
        check_split(sig, &sub)?;
        found.push(CutCurve::interior(curve.vertices.iter().map(|&v| piece.vertex_origin[v]).collect()));
        for s in sub {
            queue.push_back(Piece {
                vertex_origin: s.vertex_origin.iter().map(|&v| piece.vertex_origin[v]).collect(),
                face_origin: s.face_origin.iter().map(|&f| piece.face_origin[f]).collect(),
                mesh: s.mesh,
            });
        }
    }
    assemble_decomposition(mesh, signature, found)
}

/// Builds the decomposition record for a complete set of interior curves.
pub fn assemble_decomposition(
    mesh: &HalfedgeMesh,
    signature: SurfaceSignature,
    interior: Vec<CutCurve>,
) -> Result<PantsDecomposition, TopoError> {
    let pieces = cut_along(mesh, &interior)?;
    if pieces.len() != signature.pants_count() || interior.len() != signature.interior_curve_count() {
        return Err(TopoError::Topology(format!(
            "{} curves cut the surface into {} pieces",
            interior.len(),
            pieces.len()
        )));
    }
    let mut piece_of_face = vec![0; mesh.n_faces()];
    for (i, p) in pieces.iter().enumerate() {
        for &f in &p.face_origin {
            piece_of_face[f] = i;
        }
    }

    // Orient each interior curve with the lower-indexed pants on its left.
    let mut curves: Vec<CutCurve> = interior
        .into_iter()
        .map(|c| {
            let h = c.first_halfedge(mesh).expect("interior curve edge");
            let t = mesh.twin(h).expect("interior curve edge");
            if piece_of_face[mesh.face(h)] > piece_of_face[mesh.face(t)] { c.reversed() } else { c }
        })
        .collect();
    let n_interior = curves.len();
    curves.extend(mesh.boundary_vertex_loops().into_iter().map(CutCurve::boundary));

    let mut side_of: HashMap<usize, (usize, Side)> = HashMap::new();
    let mut base: Vec<[usize; 2]> = Vec::with_capacity(curves.len());
    for (ci, c) in curves.iter().enumerate() {
        if ci < n_interior {
            for i in 0..c.vertices.len() {
                let h = mesh.find_halfedge(c.vertices[i], c.vertices[(i + 1) % c.vertices.len()]).unwrap();
                side_of.insert(h, (ci, Side::Left));
                side_of.insert(mesh.twin(h).unwrap(), (ci, Side::Right));
            }
            let h = c.first_halfedge(mesh).unwrap();
            base.push([h, mesh.twin(h).unwrap()]);
        } else {
            let lp = &mesh.boundary_loops()[ci - n_interior];
            for &h in lp {
                side_of.insert(h, (ci, Side::Left));
            }
            base.push([lp[0], usize::MAX]);
        }
    }

    let mut pants = Vec::with_capacity(pieces.len());
    for (pi, piece) in pieces.into_iter().enumerate() {
        let mut cuffs = Vec::with_capacity(3);
        for lp in piece.mesh.boundary_loops() {
            let tags: Vec<(usize, Side)> = lp
                .iter()
                .map(|&h| side_of.get(&piece.source_halfedge(h)).copied())
                .collect::<Option<_>>()
                .ok_or_else(|| TopoError::Topology(format!("pants {pi} has an unexpected boundary edge")))?;
            let (curve, side) = tags[0];
            if tags.iter().any(|&t| t != (curve, side)) {
                return Err(TopoError::Topology(format!("pants {pi} has a boundary loop spanning several curves")));
            }
            let src = base[curve][if side == Side::Left { 0 } else { 1 }];
            let base_halfedge = piece.local_halfedge(src).expect("base halfedge lies in its pants");
            cuffs.push(Cuff { curve, side, base_halfedge });
        }
        cuffs.sort_by_key(|c| (c.curve, c.side));
        let cuffs: [Cuff; 3] = cuffs
            .try_into()
            .map_err(|_| TopoError::Topology(format!("pants {pi} does not have three cuffs")))?;
        pants.push(Pants { piece, cuffs });
    }

    let mut adjacency = vec![Vec::new(); curves.len()];
    for side in [Side::Left, Side::Right] {
        for (pi, p) in pants.iter().enumerate() {
            for (slot, c) in p.cuffs.iter().enumerate() {
                if c.side == side {
                    adjacency[c.curve].push(CuffRef { pants: pi, slot });
                }
            }
        }
    }
    for (ci, a) in adjacency.iter().enumerate() {
        let expected = if ci < n_interior { 2 } else { 1 };
        if a.len() != expected {
            return Err(TopoError::Topology(format!("curve {ci} bounds {} cuffs", a.len())));
        }
    }
    Ok(PantsDecomposition { signature, curves, pants, adjacency })
}
