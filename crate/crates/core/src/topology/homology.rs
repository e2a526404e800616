//! Tree-cotree cut systems and Z/2 homology coordinates of edge cycles.

use std::collections::VecDeque;

use crate::mesh::HalfedgeMesh;

/// Fixed-width bit vector over Z/2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(Vec<u64>);

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len.div_ceil(64)])
    }
    pub fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    pub fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }
    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    pub fn xor_assign(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }
    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    pub fn count_ones(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn lowest(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| 64 * i + w.trailing_zeros() as usize)
    }
}

/// Spanning tree of the vertex graph, spanning tree of the dual graph on the
/// remaining edges (with one extra dual node for the outside when the surface
/// has boundary), and the leftover edges, one per homology generator.
#[derive(Debug, Clone)]
pub struct TreeCotree {
    /// Parent halfedge (pointing to the vertex) per vertex; `None` at the root.
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
    pub in_tree: Vec<bool>,
    pub in_cotree: Vec<bool>,
    pub leftover: Vec<usize>,
    /// Homology coordinates of each edge: bit `j` is set when the edge crosses
    /// the dual cycle of leftover edge `j`.
    pub parity: Vec<Bits>,
}

impl TreeCotree {
    pub fn new(mesh: &HalfedgeMesh) -> Self {
        let nv = mesh.n_vertices();
        let ne = mesh.n_edges();
        let nf = mesh.n_faces();

        let mut parent = vec![None; nv];
        let mut depth = vec![0; nv];
        let mut seen = vec![false; nv];
        let mut in_tree = vec![false; ne];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for w in mesh.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    let h = mesh.find_halfedge(v, w).or_else(|| mesh.find_halfedge(w, v)).unwrap();
                    parent[w] = Some(h);
                    depth[w] = depth[v] + 1;
                    in_tree[mesh.edge(h)] = true;
                    queue.push_back(w);
                }
            }
        }

        // Dual BFS: faces 0..nf, plus node nf for the outside.
        let has_outside = !mesh.boundary_loops().is_empty();
        let n_dual = nf + usize::from(has_outside);
        let dual_neighbours = |node: usize| -> Vec<(usize, usize)> {
            if node == nf {
                mesh.boundary_loops().iter().flatten().map(|&h| (mesh.edge(h), mesh.face(h))).collect()
            } else {
                (0..3)
                    .map(|k| {
                        let h = 3 * node + k;
                        (mesh.edge(h), mesh.twin(h).map_or(nf, |t| mesh.face(t)))
                    })
                    .collect()
            }
        };
        let mut dual_parent: Vec<Option<(usize, usize)>> = vec![None; n_dual];
        let mut dual_depth = vec![0usize; n_dual];
        let mut dseen = vec![false; n_dual];
        let mut in_cotree = vec![false; ne];
        dseen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(n) = queue.pop_front() {
            for (e, m) in dual_neighbours(n) {
                if !in_tree[e] && !dseen[m] {
                    dseen[m] = true;
                    dual_parent[m] = Some((e, n));
                    dual_depth[m] = dual_depth[n] + 1;
                    in_cotree[e] = true;
                    queue.push_back(m);
                }
            }
        }

        let leftover: Vec<usize> = (0..ne).filter(|&e| !in_tree[e] && !in_cotree[e]).collect();
        let mut parity = vec![Bits::zeros(leftover.len()); ne];
        for (j, &e) in leftover.iter().enumerate() {
            parity[e].set(j);
            let h = mesh.edge_halfedge(e);
            let (mut a, mut b) = (mesh.face(h), mesh.twin(h).map_or(nf, |t| mesh.face(t)));
            while a != b {
                if dual_depth[a] < dual_depth[b] {
                    std::mem::swap(&mut a, &mut b);
                }
                let (edge, up) = dual_parent[a].expect("dual tree is connected");
                parity[edge].flip(j);
                a = up;
            }
        }
        Self { parent, depth, in_tree, in_cotree, leftover, parity }
    }

    pub fn rank(&self) -> usize {
        self.leftover.len()
    }

    /// Homology coordinates of a closed vertex cycle.
    pub fn cycle_parity(&self, mesh: &HalfedgeMesh, cycle: &[usize]) -> Bits {
        let mut p = Bits::zeros(self.rank());
        for i in 0..cycle.len() {
            let e = mesh.find_edge(cycle[i], cycle[(i + 1) % cycle.len()]).expect("cycle follows mesh edges");
            p.xor_assign(&self.parity[e]);
        }
        p
    }

    /// Simple cycle closing leftover edge `e` through the vertex tree.
    pub fn fundamental_cycle(&self, mesh: &HalfedgeMesh, e: usize) -> Vec<usize> {
        let [u, v] = mesh.edge_vertices(e);
        let up = |x: usize| {
            let h = self.parent[x].unwrap();
            if mesh.origin(h) == x { mesh.target(h) } else { mesh.origin(h) }
        };
        let (mut a, mut b) = (u, v);
        let (mut left, mut right) = (vec![a], vec![b]);
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = up(a);
                left.push(a);
            } else {
                b = up(b);
                right.push(b);
            }
        }
        // Both end at the common ancestor: walk ancestor -> u, then v -> ancestor.
        right.pop();
        left.reverse();
        left.extend(right);
        left
    }
}

/// Row-reduced span of a set of vectors, tracking which inputs combine to
/// each basis vector.
#[derive(Debug, Clone)]
pub struct Span {
    rows: Vec<(usize, Bits, Bits)>,
    inputs: usize,
}

impl Span {
    pub fn new(vectors: &[Bits]) -> Self {
        let mut span = Self { rows: Vec::new(), inputs: vectors.len() };
        for (i, v) in vectors.iter().enumerate() {
            let mut combo = Bits::zeros(vectors.len());
            combo.set(i);
            let (r, c) = span.reduce(v.clone(), combo);
            if let Some(pivot) = r.lowest() {
                span.rows.push((pivot, r, c));
            }
        }
        span
    }

    fn reduce(&self, mut v: Bits, mut combo: Bits) -> (Bits, Bits) {
        for (pivot, row, c) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
                combo.xor_assign(c);
            }
        }
        (v, combo)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &Bits) -> bool {
        self.reduce(v.clone(), Bits::zeros(self.inputs)).0.is_zero()
    }

    /// Which inputs sum to `v`, if any.
    pub fn express(&self, v: &Bits) -> Option<Bits> {
        let (r, c) = self.reduce(v.clone(), Bits::zeros(self.inputs));
        r.is_zero().then_some(c)
    }
}
