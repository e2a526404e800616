//! Generated meshes used by the tests, the acceptance suite and the examples
//! in the README. None of these are needed by the pipeline itself.

use std::collections::{HashMap, VecDeque};

use crate::mesh::{HalfedgeMesh, Point3};

pub fn tetrahedron() -> (Vec<Point3>, Vec<[usize; 3]>) {
    let p = vec![[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
    let f = vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]];
    (p, f)
}

pub fn cube() -> (Vec<Point3>, Vec<[usize; 3]>) {
    let mut p = Vec::new();
    for i in 0..8 {
        p.push([(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
    }
    let quads = [[0, 2, 3, 1], [4, 5, 7, 6], [0, 1, 5, 4], [2, 6, 7, 3], [0, 4, 6, 2], [1, 3, 7, 5]];
    let f = quads.iter().flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]).collect();
    (p, f)
}

/// Outward-oriented triangles of a convex polyhedron given by its vertices
/// and edge length: every triple of mutually adjacent vertices is a face.
fn convex_faces(p: &[Point3], edge: f64) -> Vec<[usize; 3]> {
    let adj = |a: usize, b: usize| (crate::mesh::distance(&p[a], &p[b]) - edge).abs() < 1e-6 * edge;
    let mut faces = Vec::new();
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            for c in b + 1..p.len() {
                if adj(a, b) && adj(b, c) && adj(a, c) {
                    let n = cross(sub(p[b], p[a]), sub(p[c], p[a]));
                    let centroid = [(p[a][0] + p[b][0] + p[c][0]), (p[a][1] + p[b][1] + p[c][1]), (p[a][2] + p[b][2] + p[c][2])];
                    if dot(n, centroid) > 0.0 {
                        faces.push([a, b, c]);
                    } else {
                        faces.push([a, c, b]);
                    }
                }
            }
        }
    }
    faces
}

pub fn icosahedron() -> (Vec<Point3>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut p = Vec::new();
    for &(a, b) in &[(-1.0, t), (1.0, t), (-1.0, -t), (1.0, -t)] {
        p.push([a, b, 0.0]);
    }
    for &(a, b) in &[(-1.0, t), (1.0, t), (-1.0, -t), (1.0, -t)] {
        p.push([0.0, a, b]);
    }
    for &(a, b) in &[(-1.0, t), (1.0, t), (-1.0, -t), (1.0, -t)] {
        p.push([b, 0.0, a]);
    }
    let f = convex_faces(&p, 2.0);
    (p, f)
}

/// Icosahedron subdivided `level` times, projected onto the unit sphere.
pub fn icosphere(level: usize) -> HalfedgeMesh {
    let (p, f) = icosahedron();
    let mut mesh = HalfedgeMesh::new(p, f).expect("icosahedron");
    for _ in 0..level {
        let r = crate::mesh::subdivide_midpoint(&mesh).expect("subdivision");
        let positions = r.positions().iter().map(|&q| normalize(q)).collect();
        mesh = HalfedgeMesh::new(positions, r.faces().to_vec()).expect("icosphere");
    }
    let positions = mesh.positions().iter().map(|&q| normalize(q)).collect();
    HalfedgeMesh::new(positions, mesh.faces().to_vec()).expect("icosphere")
}

/// Torus of revolution with `around` x `tube` vertices, quads split along one
/// diagonal.
pub fn torus(around: usize, tube: usize, major: f64, minor: f64) -> HalfedgeMesh {
    reglued_torus(around, tube, major, minor, 0)
}

/// Torus of revolution whose last ring of quads closes onto the first ring
/// rotated by `shift` vertices. Positions are those of the plain torus, so
/// only the closing ring of triangles is sheared.
pub fn reglued_torus(around: usize, tube: usize, major: f64, minor: f64, shift: usize) -> HalfedgeMesh {
    let id = |i: usize, j: usize| if i == around { (j + shift) % tube } else { i * tube + j % tube };
    let mut p = Vec::with_capacity(around * tube);
    for i in 0..around {
        let th = std::f64::consts::TAU * i as f64 / around as f64;
        for j in 0..tube {
            let ph = std::f64::consts::TAU * j as f64 / tube as f64;
            let rr = major + minor * ph.cos();
            p.push([rr * th.cos(), rr * th.sin(), minor * ph.sin()]);
        }
    }
    let mut f = Vec::with_capacity(2 * around * tube);
    for i in 0..around {
        for j in 0..tube {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            f.push([a, b, c]);
            f.push([a, c, d]);
        }
    }
    HalfedgeMesh::new(p, f).expect("torus")
}

/// Boundary surface of a union of unit voxels on a `dims` lattice, scaled by
/// `1 / resolution` after subdividing every voxel into `resolution^3` cells.
/// Square faces are split into four triangles around their centre, so the
/// triangulation shares every symmetry of the voxel set.
pub fn voxel_surface(dims: [usize; 3], resolution: usize, solid: impl Fn(usize, usize, usize) -> bool) -> HalfedgeMesh {
    let s = resolution.max(1);
    let n = [dims[0] * s, dims[1] * s, dims[2] * s];
    let filled = |c: [i64; 3]| -> bool {
        if c.iter().zip(n.iter()).any(|(&x, &m)| x < 0 || x >= m as i64) {
            return false;
        }
        solid(c[0] as usize / s, c[1] as usize / s, c[2] as usize / s)
    };
    let mut index: HashMap<[i64; 3], usize> = HashMap::new();
    let mut positions: Vec<Point3> = Vec::new();
    // Lattice points are stored doubled so quad centres are integral too.
    let mut vertex = |q: [i64; 3], positions: &mut Vec<Point3>| -> usize {
        *index.entry(q).or_insert_with(|| {
            positions.push([q[0] as f64 / (2 * s) as f64, q[1] as f64 / (2 * s) as f64, q[2] as f64 / (2 * s) as f64]);
            positions.len() - 1
        })
    };
    let mut faces = Vec::new();
    for x in 0..n[0] as i64 {
        for y in 0..n[1] as i64 {
            for z in 0..n[2] as i64 {
                let c = [x, y, z];
                if !filled(c) {
                    continue;
                }
                for axis in 0..3 {
                    for dir in [1i64, -1] {
                        let mut nb = c;
                        nb[axis] += dir;
                        if filled(nb) {
                            continue;
                        }
                        let (b, cc) = ((axis + 1) % 3, (axis + 2) % 3);
                        let corner = |u: i64, v: i64| {
                            let mut q = [2 * c[0], 2 * c[1], 2 * c[2]];
                            q[axis] += if dir > 0 { 2 } else { 0 };
                            q[b] += 2 * u;
                            q[cc] += 2 * v;
                            q
                        };
                        let mut quad = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)];
                        if dir < 0 {
                            quad.reverse();
                        }
                        let mut centre = quad[0];
                        centre[b] = 2 * c[b] + 1;
                        centre[cc] = 2 * c[cc] + 1;
                        let ids: Vec<usize> = quad.iter().map(|&q| vertex(q, &mut positions)).collect();
                        let m = vertex(centre, &mut positions);
                        for k in 0..4 {
                            faces.push([ids[k], ids[(k + 1) % 4], m]);
                        }
                    }
                }
            }
        }
    }
    HalfedgeMesh::new(positions, faces).expect("voxel surface")
}

/// Flat plate of `(2g+1) x 3 x 1` voxels with `g` square through-holes: a
/// closed polyhedral surface of genus `g`.
pub fn voxel_plate(genus: usize, resolution: usize) -> HalfedgeMesh {
    voxel_surface([2 * genus + 1, 3, 1], resolution, |x, y, _| !(y == 1 && x % 2 == 1))
}

/// Rectangular frame: a `width x depth x height` block with a through-hole of
/// `hole_w x hole_d` voxels placed at `offset`. Genus one.
pub fn voxel_frame(width: usize, depth: usize, height: usize, hole: [usize; 2], offset: [usize; 2], resolution: usize) -> HalfedgeMesh {
    voxel_surface([width, depth, height], resolution, |x, y, _| {
        !(x >= offset[0] && x < offset[0] + hole[0] && y >= offset[1] && y < offset[1] + hole[1])
    })
}

/// Greedy farthest-point selection of `count` interior vertices whose closed
/// one-rings are pairwise disjoint and avoid the boundary.
pub fn spread_landmarks(mesh: &HalfedgeMesh, count: usize) -> Vec<usize> {
    let ok = |v: usize| !mesh.is_boundary_vertex(v) && mesh.neighbors(v).iter().all(|&w| !mesh.is_boundary_vertex(w));
    let mut chosen: Vec<usize> = Vec::new();
    let mut dist = vec![usize::MAX; mesh.n_vertices()];
    let Some(first) = (0..mesh.n_vertices()).find(|&v| ok(v)) else { return chosen };
    let mut pick = first;
    while chosen.len() < count {
        chosen.push(pick);
        let mut q = VecDeque::from([pick]);
        let mut d = vec![usize::MAX; mesh.n_vertices()];
        d[pick] = 0;
        while let Some(v) = q.pop_front() {
            for w in mesh.neighbors(v) {
                if d[w] == usize::MAX {
                    d[w] = d[v] + 1;
                    q.push_back(w);
                }
            }
        }
        for v in 0..dist.len() {
            dist[v] = dist[v].min(d[v]);
        }
        match (0..mesh.n_vertices()).filter(|&v| ok(v) && dist[v] >= 3).max_by_key(|&v| (dist[v], std::cmp::Reverse(v))) {
            Some(v) => pick = v,
            None => break,
        }
    }
    chosen
}

/// Applies a vertex permutation (`perm[old] = new`), rotates every face by
/// `shift` and reverses the face order. Used to check labelling invariance.
pub fn relabel(positions: &[Point3], faces: &[[usize; 3]], perm: &[usize], shift: usize) -> (Vec<Point3>, Vec<[usize; 3]>) {
    let mut p = vec![[0.0; 3]; positions.len()];
    for (old, &new) in perm.iter().enumerate() {
        p[new] = positions[old];
    }
    let f = faces
        .iter()
        .rev()
        .map(|f| {
            let g = [perm[f[0]], perm[f[1]], perm[f[2]]];
            [g[shift % 3], g[(shift + 1) % 3], g[(shift + 2) % 3]]
        })
        .collect();
    (p, f)
}

fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: Point3, b: Point3) -> Point3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: Point3, b: Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(a: Point3) -> Point3 {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn platonic_solids_are_spheres() {
        let (p, f) = icosahedron();
        assert_eq!(f.len(), 20);
        let m = HalfedgeMesh::new(p, f).unwrap();
        assert_eq!(m.euler_characteristic(), 2);
        assert_eq!(icosphere(2).n_faces(), 320);
    }

    #[test]
    fn voxel_surfaces_have_expected_genus() {
        for g in 1..=3 {
            let m = voxel_plate(g, 1);
            assert_eq!(m.signature().unwrap().genus, g);
        }
        let m = voxel_frame(4, 4, 1, [2, 2], [1, 1], 2);
        assert_eq!(m.signature().unwrap().genus, 1);
    }

    #[test]
    fn landmarks_are_spread() {
        let m = icosphere(2);
        let marks = spread_landmarks(&m, 6);
        assert_eq!(marks.len(), 6);
        for (i, &a) in marks.iter().enumerate() {
            for &b in &marks[i + 1..] {
                assert!(!m.neighbors(a).contains(&b));
            }
        }
    }
}
