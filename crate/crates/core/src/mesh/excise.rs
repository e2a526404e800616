use super::{HalfedgeMesh, MeshError, SurfaceSignature};

/// Landmark vertices to be turned into punctures.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LandmarkSet {
    pub vertex_ids: Vec<usize>,
}

impl LandmarkSet {
    pub fn new(vertex_ids: Vec<usize>) -> Self {
        Self { vertex_ids }
    }

    pub fn len(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_ids.is_empty()
    }

    /// Checks the landmark invariants against `mesh`: indices are distinct and
    /// in range, every landmark is interior, and the closed one-rings are
    /// pairwise disjoint and stay off the existing boundary, so the excised
    /// discs become vertex-disjoint boundary loops.
    pub fn validate(&self, mesh: &HalfedgeMesh) -> Result<(), MeshError> {
        let nv = mesh.n_vertices();
        let mut owner = vec![usize::MAX; nv];
        for (i, &v) in self.vertex_ids.iter().enumerate() {
            if v >= nv {
                return Err(MeshError::Landmark(format!("landmark {v} out of range (mesh has {nv} vertices)")));
            }
            if mesh.is_boundary_vertex(v) {
                return Err(MeshError::Landmark(format!("landmark {v} lies on the boundary")));
            }
            for w in std::iter::once(v).chain(mesh.neighbors(v)) {
                if w != v && mesh.is_boundary_vertex(w) {
                    return Err(MeshError::Landmark(format!("one-ring of landmark {v} touches the boundary at {w}")));
                }
                if owner[w] != usize::MAX {
                    let other = self.vertex_ids[owner[w]];
                    return Err(if other == v {
                        MeshError::Landmark(format!("landmark {v} listed twice"))
                    } else {
                        MeshError::Landmark(format!("one-rings of landmarks {other} and {v} overlap at vertex {w}"))
                    });
                }
                owner[w] = i;
            }
        }
        Ok(())
    }
}

/// Removes each landmark vertex with its incident triangles. Every landmark
/// leaves its link cycle behind as a new boundary loop; genus is unchanged.
/// Remaining vertices keep their relative order.
pub fn excise_landmarks(mesh: &HalfedgeMesh, landmarks: &LandmarkSet) -> Result<HalfedgeMesh, MeshError> {
    landmarks.validate(mesh)?;
    let sig = mesh.signature()?;
    let after = SurfaceSignature::new(sig.genus, sig.boundary_count + landmarks.len());
    if !after.is_admissible() {
        return Err(MeshError::Admissibility { genus: after.genus, boundaries: after.boundary_count });
    }
    if landmarks.is_empty() {
        return Ok(mesh.clone());
    }

    let mut removed = vec![false; mesh.n_vertices()];
    for &v in &landmarks.vertex_ids {
        removed[v] = true;
    }
    let mut new_id = vec![usize::MAX; mesh.n_vertices()];
    let mut positions = Vec::with_capacity(mesh.n_vertices() - landmarks.len());
    for v in 0..mesh.n_vertices() {
        if !removed[v] {
            new_id[v] = positions.len();
            positions.push(mesh.positions()[v]);
        }
    }
    let faces: Vec<[usize; 3]> = mesh
        .faces()
        .iter()
        .filter(|f| !f.iter().any(|&v| removed[v]))
        .map(|f| [new_id[f[0]], new_id[f[1]], new_id[f[2]]])
        .collect();

    let out = HalfedgeMesh::new(positions, faces)
        .map_err(|e| MeshError::Landmark(format!("excision produced an invalid mesh: {e}")))?;
    for v in 0..out.n_vertices() {
        if out.is_boundary_vertex(v) && out.outgoing(v).len() < 2 {
            return Err(MeshError::Landmark(format!(
                "excision leaves vertex {v} with a single triangle; refine around the landmarks"
            )));
        }
    }
    Ok(out)
}
