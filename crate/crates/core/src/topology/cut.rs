//! Cutting a mesh along disjoint simple edge cycles.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{CurveKind, CutCurve, TopoError};
use crate::mesh::HalfedgeMesh;

/// A connected component of a cut mesh. Face `f` of the piece is face
/// `face_origin[f]` of the source with the same corner order, so piece
/// halfedge `3f + k` corresponds to source halfedge `3 face_origin[f] + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub mesh: HalfedgeMesh,
    pub vertex_origin: Vec<usize>,
    pub face_origin: Vec<usize>,
}

impl Piece {
    /// Source halfedge of piece halfedge `h`.
    pub fn source_halfedge(&self, h: usize) -> usize {
        3 * self.face_origin[h / 3] + h % 3
    }

    /// Piece halfedge of source halfedge `h`, if its face belongs to the piece.
    pub fn local_halfedge(&self, h: usize) -> Option<usize> {
        self.face_origin.binary_search(&(h / 3)).ok().map(|f| 3 * f + h % 3)
    }
}

/// Edge ids of a closed vertex cycle, validated to be simple and to follow
/// mesh edges.
pub(crate) fn curve_edges(mesh: &HalfedgeMesh, curve: &[usize]) -> Result<Vec<usize>, TopoError> {
    if curve.len() < 3 {
        return Err(TopoError::Curve(format!("cycle of {} vertices is too short", curve.len())));
    }
    let mut sorted = curve.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(TopoError::Curve("cycle repeats a vertex".into()));
    }
    if let Some(&v) = sorted.last().filter(|&&v| v >= mesh.n_vertices()) {
        return Err(TopoError::Curve(format!("vertex {v} out of range")));
    }
    (0..curve.len())
        .map(|i| {
            let (a, b) = (curve[i], curve[(i + 1) % curve.len()]);
            mesh.find_edge(a, b).ok_or_else(|| TopoError::Curve(format!("no edge between {a} and {b}")))
        })
        .collect()
}

/// Cuts along the interior curves (boundary curves are already boundary and
/// are skipped). Curves must be simple, pairwise vertex-disjoint and avoid
/// the mesh boundary. Pieces are ordered by their smallest face.
pub fn cut_along(mesh: &HalfedgeMesh, curves: &[CutCurve]) -> Result<Vec<Piece>, TopoError> {
    let mut on_curve: HashMap<usize, usize> = HashMap::new();
    let mut cut = vec![false; mesh.n_edges()];
    for (ci, c) in curves.iter().enumerate().filter(|(_, c)| c.kind == CurveKind::Interior) {
        for e in curve_edges(mesh, &c.vertices)? {
            cut[e] = true;
        }
        for &v in &c.vertices {
            if mesh.is_boundary_vertex(v) {
                return Err(TopoError::Curve(format!("curve {ci} touches the boundary at vertex {v}")));
            }
            if let Some(other) = on_curve.insert(v, ci) {
                return Err(TopoError::Curve(format!("curves {other} and {ci} share vertex {v}")));
            }
        }
    }

    // New vertex per (vertex, fan sector), keyed so that an empty cut keeps
    // the original numbering.
    let mut corner_vertex = vec![(0usize, 0usize); mesh.n_halfedges()];
    for v in 0..mesh.n_vertices() {
        let fan = mesh.outgoing(v);
        let start = if on_curve.contains_key(&v) {
            fan.iter().position(|&h| cut[mesh.edge(h)]).expect("curve vertex has a cut edge")
        } else {
            0
        };
        let mut sector = 0;
        for i in 0..fan.len() {
            let h = fan[(start + i) % fan.len()];
            if i > 0 && cut[mesh.edge(h)] {
                sector += 1;
            }
            corner_vertex[h] = (v, sector);
        }
    }

    // Face components across uncut edges.
    let nf = mesh.n_faces();
    let mut comp = vec![usize::MAX; nf];
    let mut n_comp = 0;
    for f0 in 0..nf {
        if comp[f0] != usize::MAX {
            continue;
        }
        comp[f0] = n_comp;
        let mut queue = VecDeque::from([f0]);
        while let Some(f) = queue.pop_front() {
            for k in 0..3 {
                let h = 3 * f + k;
                if cut[mesh.edge(h)] {
                    continue;
                }
                if let Some(t) = mesh.twin(h) {
                    let g = mesh.face(t);
                    if comp[g] == usize::MAX {
                        comp[g] = n_comp;
                        queue.push_back(g);
                    }
                }
            }
        }
        n_comp += 1;
    }

    let mut pieces = Vec::with_capacity(n_comp);
    for c in 0..n_comp {
        let face_origin: Vec<usize> = (0..nf).filter(|&f| comp[f] == c).collect();
        let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &f in &face_origin {
            for k in 0..3 {
                ids.insert(corner_vertex[3 * f + k], 0);
            }
        }
        let mut vertex_origin = Vec::with_capacity(ids.len());
        for (i, (key, id)) in ids.iter_mut().enumerate() {
            *id = i;
            vertex_origin.push(key.0);
        }
        let faces: Vec<[usize; 3]> =
            face_origin.iter().map(|&f| [0, 1, 2].map(|k| ids[&corner_vertex[3 * f + k]])).collect();
        let positions = vertex_origin.iter().map(|&v| mesh.positions()[v]).collect();
        let piece_mesh = HalfedgeMesh::new(positions, faces).map_err(|e| TopoError::Topology(format!("cut piece is invalid: {e}")))?;
        pieces.push(Piece { mesh: piece_mesh, vertex_origin, face_origin });
    }
    Ok(pieces)
}
