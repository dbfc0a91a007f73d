//! Realizing a degree sequence: feasibility test, deterministic
//! construction, and degree-preserving connection of the components.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;
use thiserror::Error;

use crate::graph::{Graph, Pairing, SwapOutcome};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RealizeError {
    #[error("degree sequence is not realizable as a simple graph")]
    Unrealizable,
    #[error("degree sequence admits no connected simple graph")]
    NotConnectable,
}

/// Target degrees, one per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<u32>) -> DegreeSequence {
        DegreeSequence { degrees }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn sum(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).sum()
    }

    pub fn has_even_sum(&self) -> bool {
        self.sum() % 2 == 0
    }

    /// Number of edges any realization must have (sum of degrees over two).
    pub fn edge_count(&self) -> u64 {
        self.sum() / 2
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }
}

impl From<Vec<u32>> for DegreeSequence {
    fn from(degrees: Vec<u32>) -> Self {
        DegreeSequence::new(degrees)
    }
}

/// Erdős–Gallai test: true iff the sequence is realizable as a simple
/// graph. Even sum, and for every k on the non-increasing sort,
/// sum of the k largest degrees ≤ k(k-1) + sum over the rest of min(d, k).
pub fn erdos_gallai(seq: &DegreeSequence) -> bool {
    let n = seq.len();
    let mut d: Vec<u64> = seq.degrees().iter().map(|&x| x as u64).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    if d.first().is_some_and(|&x| x > n as u64 - 1) {
        return false;
    }
    let total: u64 = d.iter().sum();
    if total % 2 != 0 {
        return false;
    }
    // suffix[i] = d[i] + d[i+1] + ... + d[n-1]
    let mut suffix = vec![0u64; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + d[i];
    }
    let mut head = 0u64;
    for k in 1..=n {
        head += d[k - 1];
        let kk = k as u64;
        // Among d[k..], the ones ≥ k contribute k each, the rest their value.
        let big = d[k..].partition_point(|&x| x >= kk);
        let tail = kk * big as u64 + suffix[k + big];
        if head > kk * (kk - 1) + tail {
            return false;
        }
    }
    true
}

/// Havel–Hakimi construction: repeatedly connect the vertex of highest
/// residual degree to the next-highest residuals, ties broken toward the
/// smaller vertex id. Deterministic; the output degree vector equals the
/// input exactly.
pub fn havel_hakimi(seq: &DegreeSequence) -> Result<Graph, RealizeError> {
    if !erdos_gallai(seq) {
        return Err(RealizeError::Unrealizable);
    }
    let n = seq.len();
    let mut residual: Vec<u32> = seq.degrees().to_vec();
    // Max-heap on (residual, smallest id); stale entries are skipped by
    // comparing the carried residual against the current one.
    let mut heap: BinaryHeap<(u32, Reverse<u32>)> = residual
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .map(|(v, &d)| (d, Reverse(v as u32)))
        .collect();
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity((seq.sum() / 2) as usize);
    let mut touched: Vec<u32> = Vec::new();
    while let Some((r, Reverse(v))) = heap.pop() {
        if residual[v as usize] != r {
            continue;
        }
        residual[v as usize] = 0;
        touched.clear();
        for _ in 0..r {
            let u = loop {
                match heap.pop() {
                    None => return Err(RealizeError::Unrealizable),
                    Some((rt, Reverse(u))) => {
                        if residual[u as usize] == rt {
                            break u;
                        }
                    }
                }
            };
            edges.push((v, u));
            residual[u as usize] -= 1;
            touched.push(u);
        }
        for &u in &touched {
            if residual[u as usize] > 0 {
                heap.push((residual[u as usize], Reverse(u)));
            }
        }
    }
    debug_assert!(residual.iter().all(|&r| r == 0));
    Ok(Graph::from_edge_list(n, &edges).expect("Havel-Hakimi output is simple by construction"))
}

/// Merges the connected components of a simple graph into one without
/// changing any degree, by swapping a cycle edge of one component with an
/// edge of another (both created edges then bridge the two components).
///
/// Already-connected graphs are returned unchanged. Fails with
/// `NotConnectable` when no connected realization with these degrees
/// exists: fewer than n-1 edges, or an isolated vertex alongside others.
pub fn connect<R: Rng>(mut g: Graph, rng: &mut R) -> Result<Graph, RealizeError> {
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(g);
    }

    // DFS forest: component label and parent per vertex.
    let mut comp = vec![u32::MAX; n];
    let mut parent = vec![u32::MAX; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut comp_count = 0u32;
    for root in 0..n as u32 {
        if comp[root as usize] != u32::MAX {
            continue;
        }
        comp[root as usize] = comp_count;
        stack.push(root);
        while let Some(u) = stack.pop() {
            for w in g.neighbors(u) {
                if comp[w as usize] == u32::MAX {
                    comp[w as usize] = comp_count;
                    parent[w as usize] = u;
                    stack.push(w);
                }
            }
        }
        comp_count += 1;
    }
    if comp_count == 1 {
        return Ok(g);
    }
    if g.edge_count() < n - 1 {
        return Err(RealizeError::NotConnectable);
    }

    // Classify every edge as tree (in the DFS forest) or spare (closes a
    // cycle, so it can be removed without splitting its component).
    let nc = comp_count as usize;
    let mut tree_edges: Vec<Vec<(u32, u32)>> = vec![Vec::new(); nc];
    let mut spare_edges: Vec<Vec<(u32, u32)>> = vec![Vec::new(); nc];
    let mut comp_size = vec![0usize; nc];
    for v in 0..n {
        comp_size[comp[v] as usize] += 1;
    }
    if comp_size.iter().any(|&s| s == 1) {
        // A lone vertex has degree 0 and can never be attached.
        return Err(RealizeError::NotConnectable);
    }
    for &(u, v) in g.edges() {
        let c = comp[u as usize] as usize;
        if parent[v as usize] == u || parent[u as usize] == v {
            tree_edges[c].push((u, v));
        } else {
            spare_edges[c].push((u, v));
        }
    }

    // Merge order: components with spare edges first (the accumulator then
    // never runs dry), trees afterwards, both by smallest contained id.
    let mut order: Vec<usize> = (0..nc).collect();
    order.sort_by_key(|&c| (spare_edges[c].is_empty(), c));
    let main = order[0];
    debug_assert!(!spare_edges[main].is_empty(), "m >= n-1 guarantees a cycle");
    let mut main_tree = std::mem::take(&mut tree_edges[main]);
    let mut main_spares = std::mem::take(&mut spare_edges[main]);

    for &c in &order[1..] {
        let cycle_edge = main_spares
            .pop()
            .expect("accumulator keeps at least one spare per pending merge");
        let idx = rng.gen_range(0..tree_edges[c].len());
        let partner = tree_edges[c].swap_remove(idx);
        let swap = g
            .swap_for_edges(cycle_edge, partner, Pairing::Parallel)
            .expect("both edges are present");
        let outcome = g.try_swap(&swap).expect("slots just resolved");
        let created = match outcome {
            SwapOutcome::Applied { created } => created,
            // Endpoints lie in different components, so the created edges
            // cannot pre-exist and cannot be loops.
            _ => unreachable!("cross-component swap is always simple"),
        };
        main_tree.append(&mut tree_edges[c]);
        main_tree.extend_from_slice(&created);
        main_spares.append(&mut spare_edges[c]);
    }

    debug_assert!(g.is_connected());
    Ok(g)
}
