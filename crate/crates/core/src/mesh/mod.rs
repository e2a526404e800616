//! Oriented manifold triangle meshes with boundary.
//!
//! Halfedges are stored face-major: the three halfedges of face `f` are
//! `3f`, `3f + 1` and `3f + 2`, in the winding order of the face. A halfedge
//! without a twin lies on the boundary; its face is on its left, so following
//! boundary halfedges walks every boundary loop with the surface on the left.

mod excise;
pub mod io;
mod refine;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use excise::{excise_landmarks, LandmarkSet};
pub use refine::subdivide_midpoint;

pub type Point3 = [f64; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("face {face} has {arity} vertices; only triangles are supported")]
    NonTriangular { face: usize, arity: usize },
    #[error("non-manifold mesh: {0}")]
    NonManifold(String),
    #[error("inconsistent face winding across edge ({0}, {1})")]
    NonOrientable(usize, usize),
    #[error("mesh is disconnected: {0}")]
    Disconnected(String),
    #[error("topology error: {0}")]
    Topology(String),
    #[error("landmark error: {0}")]
    Landmark(String),
    #[error("surface with genus {genus} and {boundaries} boundaries violates 2g - 2 + n > 0")]
    Admissibility { genus: usize, boundaries: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Halfedge {
    pub origin: usize,
    pub twin: Option<usize>,
    pub next: usize,
    pub face: usize,
}

/// Genus and number of boundary components of a connected surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSignature {
    pub genus: usize,
    pub boundary_count: usize,
}

impl SurfaceSignature {
    pub fn new(genus: usize, boundary_count: usize) -> Self {
        Self { genus, boundary_count }
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_count as i64
    }

    /// `2g - 2 + n > 0`: the surface admits a hyperbolic metric with geodesic
    /// boundary and a pants decomposition.
    pub fn is_admissible(&self) -> bool {
        self.euler_characteristic() < 0
    }

    /// Number of interior curves of a pants decomposition, `3g - 3 + n`.
    pub fn interior_curve_count(&self) -> usize {
        (3 * self.genus as i64 - 3 + self.boundary_count as i64).max(0) as usize
    }

    /// Number of pairs of pants, `2g - 2 + n`.
    pub fn pants_count(&self) -> usize {
        (-self.euler_characteristic()).max(0) as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfedgeMesh {
    positions: Vec<Point3>,
    faces: Vec<[usize; 3]>,
    halfedges: Vec<Halfedge>,
    halfedge_edge: Vec<usize>,
    edge_halfedge: Vec<usize>,
    /// One outgoing halfedge per vertex; the boundary one for boundary vertices.
    vertex_halfedge: Vec<usize>,
    boundary_loops: Vec<Vec<usize>>,
}

impl HalfedgeMesh {
    /// Builds and validates a mesh. Faces are oriented by their vertex order.
    pub fn new(positions: Vec<Point3>, faces: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        let nv = positions.len();
        if faces.is_empty() {
            return Err(MeshError::Topology("mesh has no faces".into()));
        }
        for (f, face) in faces.iter().enumerate() {
            if let Some(&v) = face.iter().find(|&&v| v >= nv) {
                return Err(MeshError::Topology(format!(
                    "face {f} references vertex {v}, but there are only {nv} vertices"
                )));
            }
            if face[0] == face[1] || face[1] == face[2] || face[0] == face[2] {
                return Err(MeshError::NonManifold(format!("face {f} repeats a vertex")));
            }
        }

        let mut undirected: HashMap<(usize, usize), u32> = HashMap::new();
        for face in &faces {
            for k in 0..3 {
                let (a, b) = (face[k], face[(k + 1) % 3]);
                *undirected.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        if let Some((&(a, b), _)) = undirected.iter().filter(|(_, &c)| c > 2).min_by_key(|(k, _)| **k) {
            return Err(MeshError::NonManifold(format!("edge ({a}, {b}) has more than two incident faces")));
        }

        let mut directed: HashMap<(usize, usize), usize> = HashMap::with_capacity(faces.len() * 3);
        let mut halfedges = Vec::with_capacity(faces.len() * 3);
        for (f, face) in faces.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (face[k], face[(k + 1) % 3]);
                let h = 3 * f + k;
                if directed.insert((a, b), h).is_some() {
                    return Err(MeshError::NonOrientable(a.min(b), a.max(b)));
                }
                halfedges.push(Halfedge { origin: a, twin: None, next: 3 * f + (k + 1) % 3, face: f });
            }
        }
        for h in 0..halfedges.len() {
            let a = halfedges[h].origin;
            let b = halfedges[halfedges[h].next].origin;
            halfedges[h].twin = directed.get(&(b, a)).copied();
        }

        let mut halfedge_edge = vec![usize::MAX; halfedges.len()];
        let mut edge_halfedge = Vec::new();
        for h in 0..halfedges.len() {
            if halfedge_edge[h] == usize::MAX {
                let e = edge_halfedge.len();
                edge_halfedge.push(h);
                halfedge_edge[h] = e;
                if let Some(t) = halfedges[h].twin {
                    halfedge_edge[t] = e;
                }
            }
        }

        // Outgoing halfedges per vertex, then fan checks.
        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (h, he) in halfedges.iter().enumerate() {
            outgoing[he.origin].push(h);
        }
        if let Some(v) = outgoing.iter().position(|o| o.is_empty()) {
            return Err(MeshError::Disconnected(format!("vertex {v} is not referenced by any face")));
        }
        let mut vertex_halfedge = vec![0; nv];
        for v in 0..nv {
            let boundary: Vec<usize> =
                outgoing[v].iter().copied().filter(|&h| halfedges[h].twin.is_none()).collect();
            if boundary.len() > 1 {
                return Err(MeshError::NonManifold(format!("vertex {v} joins several boundary fans")));
            }
            let start = boundary.first().copied().unwrap_or(outgoing[v][0]);
            let mut count = 0;
            let mut h = start;
            loop {
                count += 1;
                let prev = halfedges[halfedges[h].next].next;
                match halfedges[prev].twin {
                    Some(t) if t != start => h = t,
                    _ => break,
                }
                if count > outgoing[v].len() {
                    break;
                }
            }
            if count != outgoing[v].len() {
                return Err(MeshError::NonManifold(format!("vertex {v} is a bowtie (its faces form several fans)")));
            }
            vertex_halfedge[v] = start;
        }

        // Connectivity through shared edges.
        let nf = faces.len();
        let mut seen = vec![false; nf];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(f) = queue.pop_front() {
            for k in 0..3 {
                if let Some(t) = halfedges[3 * f + k].twin {
                    let g = halfedges[t].face;
                    if !seen[g] {
                        seen[g] = true;
                        reached += 1;
                        queue.push_back(g);
                    }
                }
            }
        }
        if reached != nf {
            return Err(MeshError::Disconnected(format!("{} of {nf} faces unreachable from face 0", nf - reached)));
        }

        let mut mesh = Self { positions, faces, halfedges, halfedge_edge, edge_halfedge, vertex_halfedge, boundary_loops: Vec::new() };
        mesh.boundary_loops = mesh.trace_boundary_loops();
        Ok(mesh)
    }

    fn trace_boundary_loops(&self) -> Vec<Vec<usize>> {
        let mut visited = vec![false; self.halfedges.len()];
        let mut loops = Vec::new();
        for h0 in 0..self.halfedges.len() {
            if self.halfedges[h0].twin.is_some() || visited[h0] {
                continue;
            }
            let mut lp = Vec::new();
            let mut h = h0;
            while !visited[h] {
                visited[h] = true;
                lp.push(h);
                h = self.next_boundary(h);
            }
            loops.push(lp);
        }
        loops
    }

    /// The boundary halfedge that follows boundary halfedge `h`.
    pub fn next_boundary(&self, h: usize) -> usize {
        let mut x = self.next(h);
        while let Some(t) = self.twin(x) {
            x = self.next(t);
        }
        x
    }

    pub fn positions(&self) -> &[Point3] {
        &self.positions
    }
    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }
    pub fn halfedges(&self) -> &[Halfedge] {
        &self.halfedges
    }
    pub fn n_vertices(&self) -> usize {
        self.positions.len()
    }
    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }
    pub fn n_edges(&self) -> usize {
        self.edge_halfedge.len()
    }
    pub fn n_halfedges(&self) -> usize {
        self.halfedges.len()
    }

    #[inline]
    pub fn origin(&self, h: usize) -> usize {
        self.halfedges[h].origin
    }
    #[inline]
    pub fn target(&self, h: usize) -> usize {
        self.halfedges[self.halfedges[h].next].origin
    }
    #[inline]
    pub fn next(&self, h: usize) -> usize {
        self.halfedges[h].next
    }
    #[inline]
    pub fn prev(&self, h: usize) -> usize {
        self.next(self.next(h))
    }
    #[inline]
    pub fn twin(&self, h: usize) -> Option<usize> {
        self.halfedges[h].twin
    }
    #[inline]
    pub fn face(&self, h: usize) -> usize {
        self.halfedges[h].face
    }
    #[inline]
    pub fn edge(&self, h: usize) -> usize {
        self.halfedge_edge[h]
    }
    /// A representative halfedge of edge `e`.
    #[inline]
    pub fn edge_halfedge(&self, e: usize) -> usize {
        self.edge_halfedge[e]
    }
    pub fn edge_vertices(&self, e: usize) -> [usize; 2] {
        let h = self.edge_halfedge[e];
        [self.origin(h), self.target(h)]
    }
    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.twin(self.edge_halfedge[e]).is_none()
    }
    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.twin(self.vertex_halfedge[v]).is_none()
    }

    /// Outgoing halfedges of `v` in counter-clockwise fan order. For boundary
    /// vertices the first one is the boundary halfedge.
    pub fn outgoing(&self, v: usize) -> Vec<usize> {
        let start = self.vertex_halfedge[v];
        let mut out = vec![start];
        let mut h = start;
        loop {
            match self.twin(self.prev(h)) {
                Some(t) if t != start => {
                    out.push(t);
                    h = t;
                }
                _ => break,
            }
        }
        out
    }

    /// Neighbouring vertices of `v`, in fan order. For a boundary vertex the
    /// trailing boundary neighbour is included.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let out = self.outgoing(v);
        let mut nb: Vec<usize> = out.iter().map(|&h| self.target(h)).collect();
        if self.is_boundary_vertex(v) {
            let last = *out.last().unwrap();
            nb.push(self.origin(self.prev(last)));
        }
        nb
    }

    pub fn vertex_faces(&self, v: usize) -> Vec<usize> {
        self.outgoing(v).into_iter().map(|h| self.face(h)).collect()
    }

    /// The halfedge from `a` to `b`, if there is one.
    pub fn find_halfedge(&self, a: usize, b: usize) -> Option<usize> {
        self.outgoing(a).into_iter().find(|&h| self.target(h) == b)
    }

    /// Either halfedge of the edge `{a, b}`.
    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        self.find_halfedge(a, b).or_else(|| self.find_halfedge(b, a)).map(|h| self.edge(h))
    }

    /// Boundary loops as sequences of boundary halfedges.
    pub fn boundary_loops(&self) -> &[Vec<usize>] {
        &self.boundary_loops
    }

    /// Boundary loops as vertex cycles, surface on the left.
    pub fn boundary_vertex_loops(&self) -> Vec<Vec<usize>> {
        self.boundary_loops.iter().map(|lp| lp.iter().map(|&h| self.origin(h)).collect()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_faces() as i64
    }

    /// Genus and boundary count from `chi = 2 - 2g - b`.
    pub fn signature(&self) -> Result<SurfaceSignature, MeshError> {
        let b = self.boundary_loops.len() as i64;
        let twice_genus = 2 - b - self.euler_characteristic();
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(MeshError::Topology(format!(
                "Euler characteristic {} with {b} boundary loops gives no integral genus",
                self.euler_characteristic()
            )));
        }
        Ok(SurfaceSignature::new((twice_genus / 2) as usize, b as usize))
    }

    /// Euclidean length of edge `e` from the vertex positions.
    pub fn euclidean_edge_length(&self, e: usize) -> f64 {
        let [a, b] = self.edge_vertices(e);
        distance(&self.positions[a], &self.positions[b])
    }
}

pub(crate) fn distance(a: &Point3, b: &Point3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}
