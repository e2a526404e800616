//! Shortest simple cycles through interior vertices, classified by their
//! homology coordinates.

use std::collections::VecDeque;

use super::homology::{Bits, TreeCotree};
use crate::mesh::HalfedgeMesh;

/// Visits, in a deterministic order, every cycle consisting of two shortest
/// paths from a common root plus one edge, restricted to interior vertices.
/// `accept` is called with the cycle's homology coordinates; only strictly shorter
/// accepted cycles replace the current best. Returns the best cycle as a
/// vertex sequence.
pub fn shortest_cycle(
    mesh: &HalfedgeMesh,
    tc: &TreeCotree,
    mut accept: impl FnMut(&Bits) -> bool,
) -> Option<Vec<usize>> {
    let nv = mesh.n_vertices();
    let interior: Vec<bool> = (0..nv).map(|v| !mesh.is_boundary_vertex(v)).collect();
    let adjacency: Vec<Vec<(usize, usize)>> = (0..nv)
        .map(|v| {
            if !interior[v] {
                return Vec::new();
            }
            mesh.neighbors(v)
                .into_iter()
                .filter(|&w| interior[w])
                .map(|w| (w, mesh.find_edge(v, w).unwrap()))
                .collect()
        })
        .collect();

    let mut current: Option<Vec<usize>> = None;
    let mut best_len = usize::MAX;
    let mut depth = vec![usize::MAX; nv];
    let mut parent = vec![usize::MAX; nv];
    let mut parent_edge = vec![usize::MAX; nv];
    let mut branch = vec![usize::MAX; nv];
    let mut done = vec![false; nv];
    let mut parity: Vec<Option<Bits>> = vec![None; nv];
    let mut touched: Vec<usize> = Vec::new();

    for root in (0..nv).filter(|&v| interior[v]) {
        for &v in &touched {
            depth[v] = usize::MAX;
            done[v] = false;
            parity[v] = None;
        }
        touched.clear();
        depth[root] = 0;
        branch[root] = root;
        parent_edge[root] = usize::MAX;
        parity[root] = Some(Bits::zeros(tc.rank()));
        touched.push(root);
        let mut found: Option<(usize, usize)> = None;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            // Any cycle closed from here on has at least 2 depth[u] edges.
            if 2 * depth[u] >= best_len {
                break;
            }
            done[u] = true;
            for &(w, e) in &adjacency[u] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[u] + 1;
                    parent[w] = u;
                    parent_edge[w] = e;
                    branch[w] = if u == root { w } else { branch[u] };
                    parity[w] = Some(parity[u].as_ref().unwrap().xor(&tc.parity[e]));
                    touched.push(w);
                    queue.push_back(w);
                } else if done[w] && w != root && parent_edge[u] != e && branch[w] != branch[u] {
                    let len = depth[u] + depth[w] + 1;
                    if len < best_len {
                        let mut p = parity[u].as_ref().unwrap().xor(parity[w].as_ref().unwrap());
                        p.xor_assign(&tc.parity[e]);
                        if accept(&p) {
                            best_len = len;
                            found = Some((w, u));
                        }
                    }
                }
            }
        }
        if let Some((a, b)) = found {
            let path = |mut x: usize| {
                let mut p = vec![x];
                while x != root {
                    x = parent[x];
                    p.push(x);
                }
                p
            };
            let mut cycle = path(a);
            cycle.reverse();
            let mut back = path(b);
            back.pop();
            cycle.extend(back);
            current = Some(cycle);
        }
    }
    current
}
