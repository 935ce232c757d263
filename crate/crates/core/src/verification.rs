//! Ground-truth oracles and test-input generators.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{invalid, Error, Result};
use crate::graph::AdjacencyMatrix;
use crate::rng;

/// Largest `n` for which [`enumerate_graphs`] will run (2^16 matrices).
pub const MAX_ENUMERATION_VERTICES: usize = 4;

fn bfs_distances(matrix: &AdjacencyMatrix, src: usize) -> (Vec<Option<usize>>, Vec<usize>) {
    let n = matrix.n();
    let mut dist = vec![None; n + 1];
    let mut parent = vec![0; n + 1];
    let mut queue = VecDeque::new();
    dist[src] = Some(0);
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for v in 1..=n {
            if matrix.get(u, v) && dist[v].is_none() {
                dist[v] = Some(du + 1);
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    (dist, parent)
}

fn check_endpoints(matrix: &AdjacencyMatrix, src: usize, dst: usize) -> Result<()> {
    matrix.check_vertex(src)?;
    matrix.check_vertex(dst)
}

/// Breadth-first reachability; every vertex reaches itself.
pub fn bfs_reachable(matrix: &AdjacencyMatrix, src: usize, dst: usize) -> Result<bool> {
    Ok(shortest_path_length(matrix, src, dst)?.is_some())
}

/// Number of edges on a shortest `src -> dst` path, `None` if unreachable.
pub fn shortest_path_length(matrix: &AdjacencyMatrix, src: usize, dst: usize) -> Result<Option<usize>> {
    check_endpoints(matrix, src, dst)?;
    Ok(bfs_distances(matrix, src).0[dst])
}

/// Vertices `src = A_0, A_1, ..., A_l' = dst` of one shortest path.
pub fn shortest_path(matrix: &AdjacencyMatrix, src: usize, dst: usize) -> Result<Option<Vec<usize>>> {
    check_endpoints(matrix, src, dst)?;
    let (dist, parent) = bfs_distances(matrix, src);
    Ok(dist[dst].map(|len| {
        let mut path = vec![dst];
        let mut v = dst;
        for _ in 0..len {
            v = parent[v];
            path.push(v);
        }
        path.reverse();
        path
    }))
}

/// Whether a walk (vertices may repeat) of exactly `l` edges leads from
/// `src` to `dst`.
pub fn exact_length_walk_exists(matrix: &AdjacencyMatrix, src: usize, dst: usize, l: usize) -> Result<bool> {
    check_endpoints(matrix, src, dst)?;
    let n = matrix.n();
    let mut frontier = vec![false; n + 1];
    frontier[src] = true;
    for _ in 0..l {
        let mut next = vec![false; n + 1];
        for u in (1..=n).filter(|&u| frontier[u]) {
            for v in 1..=n {
                if matrix.get(u, v) {
                    next[v] = true;
                }
            }
        }
        frontier = next;
    }
    Ok(frontier[dst])
}

/// All `2^(n^2)` adjacency matrices in lexicographic order.
pub fn enumerate_graphs(n: usize) -> Result<impl Iterator<Item = AdjacencyMatrix>> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    if n > MAX_ENUMERATION_VERTICES {
        return Err(Error::BudgetExceeded {
            what: format!("exhaustive enumeration of graphs on {n} vertices"),
            cost: 1u128.checked_shl((n * n) as u32).unwrap_or(u128::MAX),
            limit: 1 << (MAX_ENUMERATION_VERTICES * MAX_ENUMERATION_VERTICES),
        });
    }
    let total = 1u64 << (n * n);
    Ok((0..total).map(move |idx| AdjacencyMatrix::from_lex_index(n, idx)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SampleKind {
    Exhaustive { index: u64 },
    Uniform { edge_prob: f64 },
    PlantedPath { length: usize, noise_prob: f64 },
    /// No `1 -> n` path by construction.
    NoPath { edge_prob: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphSample {
    pub matrix: AdjacencyMatrix,
    pub seed: u64,
    pub kind: SampleKind,
}

fn check_prob(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("probability {p} outside [0, 1]")))
    }
}

fn add_noise(matrix: &mut AdjacencyMatrix, p: f64, rng: &mut rng::Rng, allowed: impl Fn(usize, usize) -> bool) {
    let n = matrix.n();
    for i in 1..=n {
        for j in 1..=n {
            // Always draw so the stream does not depend on `allowed`.
            let hit = rng.gen_bool(p);
            if hit && allowed(i, j) {
                matrix.set(i, j, true);
            }
        }
    }
}

/// Each of the `n^2` entries (self-loops included) is an edge independently
/// with probability `edge_prob`.
pub fn random_graph(n: usize, edge_prob: f64, seed: u64) -> Result<GraphSample> {
    check_prob(edge_prob)?;
    let mut matrix = AdjacencyMatrix::new(n)?;
    let mut rng = rng::seeded(seed);
    add_noise(&mut matrix, edge_prob, &mut rng, |_, _| true);
    Ok(GraphSample {
        matrix,
        seed,
        kind: SampleKind::Uniform { edge_prob },
    })
}

/// A simple path `1 -> ... -> n` with `path_len` edges through randomly
/// chosen distinct intermediate vertices, plus independent noise edges.
pub fn planted_path_graph(n: usize, path_len: usize, noise_prob: f64, seed: u64) -> Result<GraphSample> {
    check_prob(noise_prob)?;
    if n < 2 || path_len == 0 || path_len > n - 1 {
        return Err(invalid(format!("path length {path_len} outside 1..={}", n.saturating_sub(1))));
    }
    let mut rng = rng::seeded(seed);
    let mut middle: Vec<usize> = (2..n).collect();
    middle.shuffle(&mut rng);
    let mut path = Vec::with_capacity(path_len + 1);
    path.push(1);
    path.extend_from_slice(&middle[..path_len - 1]);
    path.push(n);
    let mut matrix = AdjacencyMatrix::new(n)?;
    for w in path.windows(2) {
        matrix.set(w[0], w[1], true);
    }
    add_noise(&mut matrix, noise_prob, &mut rng, |_, _| true);
    Ok(GraphSample {
        matrix,
        seed,
        kind: SampleKind::PlantedPath {
            length: path_len,
            noise_prob,
        },
    })
}

/// Random graph with no `1 -> n` path: vertices are split into a side
/// containing 1 and a side containing n, and no edge leads from the first
/// side to the second.
pub fn no_path_graph(n: usize, edge_prob: f64, seed: u64) -> Result<GraphSample> {
    check_prob(edge_prob)?;
    if n < 2 {
        return Err(invalid("need at least two vertices"));
    }
    let mut rng = rng::seeded(seed);
    let mut source_side = vec![false; n + 1];
    source_side[1] = true;
    for v in source_side.iter_mut().take(n).skip(2) {
        *v = rng.gen_bool(0.5);
    }
    let mut matrix = AdjacencyMatrix::new(n)?;
    add_noise(&mut matrix, edge_prob, &mut rng, |i, j| !(source_side[i] && !source_side[j]));
    Ok(GraphSample {
        matrix,
        seed,
        kind: SampleKind::NoPath { edge_prob },
    })
}
