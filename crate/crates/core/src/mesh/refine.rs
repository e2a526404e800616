use super::{HalfedgeMesh, MeshError};

/// 1:4 midpoint subdivision. Original vertices keep their indices; one new
/// vertex per edge is appended in edge order.
pub fn subdivide_midpoint(mesh: &HalfedgeMesh) -> Result<HalfedgeMesh, MeshError> {
    let nv = mesh.n_vertices();
    let mut positions = mesh.positions().to_vec();
    for e in 0..mesh.n_edges() {
        let [a, b] = mesh.edge_vertices(e);
        let (pa, pb) = (mesh.positions()[a], mesh.positions()[b]);
        positions.push([(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0, (pa[2] + pb[2]) / 2.0]);
    }
    let mut faces = Vec::with_capacity(mesh.n_faces() * 4);
    for f in 0..mesh.n_faces() {
        let [a, b, c] = mesh.faces()[f];
        let mid = |k: usize| nv + mesh.edge(3 * f + k);
        let (ab, bc, ca) = (mid(0), mid(1), mid(2));
        faces.push([a, ab, ca]);
        faces.push([ab, b, bc]);
        faces.push([ca, bc, c]);
        faces.push([ab, bc, ca]);
    }
    HalfedgeMesh::new(positions, faces)
}
