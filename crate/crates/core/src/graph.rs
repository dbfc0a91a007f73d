//! Simple undirected graph with constant-expected-time edge operations.
//!
//! The representation is tuned for the edge-swap Markov chain: a flat edge
//! array supports uniform edge sampling by index, and per-vertex hashed
//! neighbor maps give O(1) expected membership tests. Swapping two edges
//! rewrites the two affected array slots in place, so a swap (and its
//! rollback) costs a handful of hash operations regardless of graph size.
//!
//! Neighbor maps are insertion-ordered ([`IndexMap`]), which keeps every
//! traversal deterministic for a fixed operation history. That property is
//! load-bearing: the CLI promises byte-identical output for identical seeds.

use indexmap::IndexMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u32, u32),
    #[error("loop edge at vertex {0}")]
    LoopEdge(u32),
    #[error("vertex {vertex} out of range for n = {n}")]
    BadVertex { vertex: u32, n: usize },
    #[error("graph has {0} edges, need at least 2")]
    TooFewEdges(usize),
    #[error("swap references an edge that is not in the graph")]
    StaleSwap,
}

/// The two degree-preserving rewirings of an ordered edge pair
/// `(a,b), (c,d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// Rewire to `(a,d), (c,b)`.
    Cross,
    /// Rewire to `(a,c), (b,d)`.
    Parallel,
}

/// A candidate edge swap: two distinct edge slots, their expected oriented
/// endpoint pairs, and the chosen rewiring.
///
/// Endpoint orientation matters: the pairing is defined on `(a,b), (c,d)` as
/// written, not on the normalized pairs. Both pairings are involutions with
/// respect to [`EdgeSwap::inverse`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeSwap {
    pub slot1: u32,
    pub slot2: u32,
    pub e1: (u32, u32),
    pub e2: (u32, u32),
    pub pairing: Pairing,
}

impl EdgeSwap {
    /// The edges this swap would create, oriented.
    pub fn created(&self) -> [(u32, u32); 2] {
        let (a, b) = self.e1;
        let (c, d) = self.e2;
        match self.pairing {
            Pairing::Cross => [(a, d), (c, b)],
            Pairing::Parallel => [(a, c), (b, d)],
        }
    }

    /// The swap that undoes this one once it has been applied.
    pub fn inverse(&self) -> EdgeSwap {
        let [f1, f2] = self.created();
        EdgeSwap {
            slot1: self.slot1,
            slot2: self.slot2,
            e1: f1,
            e2: f2,
            pairing: self.pairing,
        }
    }
}

/// Outcome of attempting a swap. The graph is mutated only for `Applied`;
/// both rejection variants leave it bit-identical to before.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapOutcome {
    Applied { created: [(u32, u32); 2] },
    RejectedSimplicity,
    RejectedIsolation { component_size: u32 },
}

/// Result of a bounded component-size probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsolationResult {
    /// The vertex lies in a component of exactly this many vertices (≤ K).
    Isolated(u32),
    NotIsolated,
}

/// Reusable buffers for traversals, so per-swap probes never allocate.
#[derive(Debug, Default, Clone)]
pub struct TraversalScratch {
    mark: Vec<u64>,
    epoch: u64,
    stack_a: Vec<u32>,
    stack_b: Vec<u32>,
}

impl TraversalScratch {
    fn ensure(&mut self, n: usize) {
        if self.mark.len() < n {
            self.mark.resize(n, 0);
        }
    }

    fn next_epoch(&mut self) -> u64 {
        self.epoch += 1;
        self.epoch
    }
}

fn norm(u: u32, v: u32) -> (u32, u32) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Simple undirected graph on dense vertex ids `0..n`.
#[derive(Debug, Clone)]
pub struct Graph {
    /// Per-vertex neighbor map; the value is the slot of the edge in `edges`.
    adj: Vec<IndexMap<u32, u32>>,
    /// Flat edge array, each entry normalized `(u, v)` with `u < v`.
    edges: Vec<(u32, u32)>,
}

impl PartialEq for Graph {
    /// Slot-exact equality: same vertex count and the same edge in every
    /// slot. This is the strong form needed by rollback-exactness checks;
    /// two graphs with equal edge sets in different slot orders compare
    /// unequal.
    fn eq(&self, other: &Self) -> bool {
        self.adj.len() == other.adj.len() && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn from_edge_list(n: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        let mut g = Graph {
            adj: vec![IndexMap::new(); n],
            edges: Vec::with_capacity(edges.len()),
        };
        for &(u, v) in edges {
            if u as usize >= n {
                return Err(GraphError::BadVertex { vertex: u, n });
            }
            if v as usize >= n {
                return Err(GraphError::BadVertex { vertex: v, n });
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            if g.adj[u as usize].contains_key(&v) {
                let (a, b) = norm(u, v);
                return Err(GraphError::DuplicateEdge(a, b));
            }
            let slot = g.edges.len() as u32;
            g.adj[u as usize].insert(v, slot);
            g.adj[v as usize].insert(u, slot);
            g.edges.push(norm(u, v));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: u32) -> u32 {
        self.adj[v as usize].len() as u32
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.adj.iter().map(|m| m.len() as u32).collect()
    }

    /// Average degree z = 2m/n.
    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.adj.len() as f64
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj
            .get(u as usize)
            .is_some_and(|m| m.contains_key(&v))
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[v as usize].keys().copied()
    }

    /// Edge array in slot order, each entry normalized `(u, v)`, `u < v`.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Sorted copy of the edge set, independent of slot order.
    pub fn canonical_edges(&self) -> Vec<(u32, u32)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    pub(crate) fn edge_slot(&self, u: u32, v: u32) -> Option<u32> {
        self.adj.get(u as usize)?.get(&v).copied()
    }

    pub fn scratch(&self) -> TraversalScratch {
        let mut s = TraversalScratch::default();
        s.ensure(self.adj.len());
        s
    }

    /// Builds a swap for two edges already present in the graph, resolving
    /// their slots. Errors with `StaleSwap` if either edge is absent or if
    /// the two edges are the same.
    pub fn swap_for_edges(
        &self,
        e1: (u32, u32),
        e2: (u32, u32),
        pairing: Pairing,
    ) -> Result<EdgeSwap, GraphError> {
        let slot1 = self.edge_slot(e1.0, e1.1).ok_or(GraphError::StaleSwap)?;
        let slot2 = self.edge_slot(e2.0, e2.1).ok_or(GraphError::StaleSwap)?;
        if slot1 == slot2 {
            return Err(GraphError::StaleSwap);
        }
        Ok(EdgeSwap {
            slot1,
            slot2,
            e1,
            e2,
            pairing,
        })
    }

    /// Draws a swap uniformly: an ordered pair of distinct edge slots
    /// (`1/(m(m-1))` per ordered pair) and an independent fair pairing.
    pub fn sample_swap<R: rand::Rng>(&self, rng: &mut R) -> Result<EdgeSwap, GraphError> {
        let m = self.edges.len();
        if m < 2 {
            return Err(GraphError::TooFewEdges(m));
        }
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let pairing = if rng.gen::<bool>() {
            Pairing::Cross
        } else {
            Pairing::Parallel
        };
        Ok(EdgeSwap {
            slot1: i as u32,
            slot2: j as u32,
            e1: self.edges[i],
            e2: self.edges[j],
            pairing,
        })
    }

    /// Applies the swap if the rewiring keeps the graph simple.
    ///
    /// A rewiring is rejected when a created edge would be a loop (shared
    /// endpoint) or already exists in the current graph. Connectivity is
    /// deliberately not checked here; that is the caller's business.
    /// Degrees are unchanged in all cases.
    pub fn try_swap(&mut self, s: &EdgeSwap) -> Result<SwapOutcome, GraphError> {
        let m = self.edges.len();
        let (s1, s2) = (s.slot1 as usize, s.slot2 as usize);
        if s1 == s2 || s1 >= m || s2 >= m {
            return Err(GraphError::StaleSwap);
        }
        if self.edges[s1] != norm(s.e1.0, s.e1.1) || self.edges[s2] != norm(s.e2.0, s.e2.1) {
            return Err(GraphError::StaleSwap);
        }
        let [f1, f2] = s.created();
        if f1.0 == f1.1 || f2.0 == f2.1 {
            return Ok(SwapOutcome::RejectedSimplicity);
        }
        if self.has_edge(f1.0, f1.1) || self.has_edge(f2.0, f2.1) {
            return Ok(SwapOutcome::RejectedSimplicity);
        }
        debug_assert!(norm(f1.0, f1.1) != norm(f2.0, f2.1));

        let (a, b) = s.e1;
        let (c, d) = s.e2;
        self.adj[a as usize].swap_remove(&b);
        self.adj[b as usize].swap_remove(&a);
        self.adj[c as usize].swap_remove(&d);
        self.adj[d as usize].swap_remove(&c);
        self.adj[f1.0 as usize].insert(f1.1, s.slot1);
        self.adj[f1.1 as usize].insert(f1.0, s.slot1);
        self.adj[f2.0 as usize].insert(f2.1, s.slot2);
        self.adj[f2.1 as usize].insert(f2.0, s.slot2);
        self.edges[s1] = norm(f1.0, f1.1);
        self.edges[s2] = norm(f2.0, f2.1);
        Ok(SwapOutcome::Applied { created: [f1, f2] })
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_with(&mut self.scratch())
    }

    /// Iterative full traversal from vertex 0; true iff all n vertices are
    /// reached. Allocation-free given a warm scratch.
    pub fn is_connected_with(&self, scratch: &mut TraversalScratch) -> bool {
        let n = self.adj.len();
        if n <= 1 {
            return true;
        }
        scratch.ensure(n);
        let epoch = scratch.next_epoch();
        let stack = &mut scratch.stack_a;
        stack.clear();
        scratch.mark[0] = epoch;
        stack.push(0);
        let mut seen = 1usize;
        while let Some(u) = stack.pop() {
            for (&w, _) in &self.adj[u as usize] {
                if scratch.mark[w as usize] != epoch {
                    scratch.mark[w as usize] = epoch;
                    seen += 1;
                    stack.push(w);
                }
            }
        }
        seen == n
    }

    /// Whether `a` and `b` lie in the same connected component, decided by a
    /// bidirectional search that stops as soon as the two sides touch.
    ///
    /// Exact for any graph. The payoff is speed in the swap-probing loops:
    /// right after a swap that removed edge `(a,b)` of a previously
    /// connected graph, the result equals full-graph connectivity, and the
    /// search usually terminates after a tiny fraction of the graph.
    pub fn in_same_component(&self, a: u32, b: u32, scratch: &mut TraversalScratch) -> bool {
        if a == b {
            return true;
        }
        let n = self.adj.len();
        scratch.ensure(n);
        let ea = scratch.next_epoch();
        let eb = scratch.next_epoch();
        scratch.stack_a.clear();
        scratch.stack_b.clear();
        scratch.mark[a as usize] = ea;
        scratch.mark[b as usize] = eb;
        scratch.stack_a.push(a);
        scratch.stack_b.push(b);
        loop {
            // Expand the side with the smaller pending frontier; an
            // exhausted side proves separation.
            let a_turn = scratch.stack_a.len() <= scratch.stack_b.len();
            let (stack, own, other) = if a_turn {
                (&mut scratch.stack_a, ea, eb)
            } else {
                (&mut scratch.stack_b, eb, ea)
            };
            let Some(u) = stack.pop() else {
                return false;
            };
            for (&w, _) in &self.adj[u as usize] {
                let mark = scratch.mark[w as usize];
                if mark == other {
                    return true;
                }
                if mark != own {
                    scratch.mark[w as usize] = own;
                    stack.push(w);
                }
            }
        }
    }

    /// Bounded probe: does `v` lie in a component of at most `width`
    /// vertices? Visits at most `width + 1` vertices. With `degree_stop`,
    /// meeting any vertex of degree > `width` answers `NotIsolated` at once
    /// (its component has at least degree + 1 vertices).
    pub fn isolation_test(&self, v: u32, width: u32, degree_stop: bool) -> IsolationResult {
        self.isolation_test_with(v, width, degree_stop, &mut self.scratch())
            .0
    }

    /// Same as [`Graph::isolation_test`] but allocation-free; also reports
    /// how many vertices were visited.
    pub fn isolation_test_with(
        &self,
        v: u32,
        width: u32,
        degree_stop: bool,
        scratch: &mut TraversalScratch,
    ) -> (IsolationResult, u32) {
        scratch.ensure(self.adj.len());
        if degree_stop && self.degree(v) > width {
            return (IsolationResult::NotIsolated, 1);
        }
        let epoch = scratch.next_epoch();
        let stack = &mut scratch.stack_a;
        stack.clear();
        scratch.mark[v as usize] = epoch;
        stack.push(v);
        let mut visited = 1u32;
        while let Some(u) = stack.pop() {
            for (&w, _) in &self.adj[u as usize] {
                if scratch.mark[w as usize] == epoch {
                    continue;
                }
                visited += 1;
                if visited > width {
                    return (IsolationResult::NotIsolated, visited);
                }
                if degree_stop && self.degree(w) > width {
                    return (IsolationResult::NotIsolated, visited);
                }
                scratch.mark[w as usize] = epoch;
                stack.push(w);
            }
        }
        (IsolationResult::Isolated(visited), visited)
    }

    /// Fraction of ordered vertex pairs at distance 3 or more (unreachable
    /// pairs count). All-pairs breadth-first search to depth 2; meant for
    /// small graphs.
    pub fn rho(&self) -> f64 {
        let n = self.adj.len();
        if n < 2 {
            return 0.0;
        }
        let mut scratch = self.scratch();
        let mut frontier = Vec::new();
        let mut next = Vec::new();
        let mut close_pairs = 0u64;
        for v in 0..n as u32 {
            let epoch = scratch.next_epoch();
            scratch.mark[v as usize] = epoch;
            frontier.clear();
            frontier.push(v);
            let mut within_two = 0u64;
            for _depth in 0..2 {
                next.clear();
                for &u in &frontier {
                    for (&w, _) in &self.adj[u as usize] {
                        if scratch.mark[w as usize] != epoch {
                            scratch.mark[w as usize] = epoch;
                            within_two += 1;
                            next.push(w);
                        }
                    }
                }
                std::mem::swap(&mut frontier, &mut next);
            }
            close_pairs += within_two;
        }
        1.0 - close_pairs as f64 / (n as f64 * (n - 1) as f64)
    }

    /// Fraction of swap candidates (ordered pairs of distinct edge slots ×
    /// the two pairings) that keep the graph simple and connected.
    /// Exhaustive, O(m²) connectivity tests; small graphs only.
    pub fn valid_swap_fraction(&self) -> Result<f64, GraphError> {
        let m = self.edges.len();
        if m < 2 {
            return Err(GraphError::TooFewEdges(m));
        }
        let mut work = self.clone();
        let mut scratch = work.scratch();
        let mut valid = 0u64;
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                for pairing in [Pairing::Cross, Pairing::Parallel] {
                    let swap = EdgeSwap {
                        slot1: i as u32,
                        slot2: j as u32,
                        e1: work.edges[i],
                        e2: work.edges[j],
                        pairing,
                    };
                    if let SwapOutcome::Applied { .. } = work.try_swap(&swap)? {
                        if work.is_connected_with(&mut scratch) {
                            valid += 1;
                        }
                        let undone = work.try_swap(&swap.inverse())?;
                        debug_assert!(matches!(undone, SwapOutcome::Applied { .. }));
                    }
                }
            }
        }
        Ok(valid as f64 / (m as f64 * (m - 1) as f64 * 2.0))
    }

    /// Induced subgraph on a maximum-cardinality component, vertices
    /// relabeled compactly in increasing original-id order. Ties go to the
    /// component containing the smallest original vertex id.
    pub fn largest_component(&self) -> Graph {
        let n = self.adj.len();
        if n == 0 {
            return Graph {
                adj: Vec::new(),
                edges: Vec::new(),
            };
        }
        let mut comp = vec![u32::MAX; n];
        let mut stack = Vec::new();
        let mut best_comp = 0u32;
        let mut best_size = 0usize;
        let mut comp_id = 0u32;
        for root in 0..n as u32 {
            if comp[root as usize] != u32::MAX {
                continue;
            }
            comp[root as usize] = comp_id;
            stack.push(root);
            let mut size = 0usize;
            while let Some(u) = stack.pop() {
                size += 1;
                for (&w, _) in &self.adj[u as usize] {
                    if comp[w as usize] == u32::MAX {
                        comp[w as usize] = comp_id;
                        stack.push(w);
                    }
                }
            }
            if size > best_size {
                best_size = size;
                best_comp = comp_id;
            }
            comp_id += 1;
        }
        let mut relabel = vec![u32::MAX; n];
        let mut next = 0u32;
        for v in 0..n {
            if comp[v] == best_comp {
                relabel[v] = next;
                next += 1;
            }
        }
        let edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .filter(|&&(u, _)| comp[u as usize] == best_comp)
            .map(|&(u, v)| (relabel[u as usize], relabel[v as usize]))
            .collect();
        Graph::from_edge_list(best_size, &edges)
            .expect("induced subgraph of a simple graph is simple")
    }

    /// Validates every structural invariant; for tests and debugging.
    pub fn assert_invariants(&self) {
        let n = self.adj.len();
        let mut degree_sum = 0usize;
        for v in 0..n as u32 {
            for (&w, &slot) in &self.adj[v as usize] {
                assert_ne!(v, w, "loop at {v}");
                assert!((w as usize) < n, "neighbor out of range");
                assert_eq!(
                    self.adj[w as usize].get(&v),
                    Some(&slot),
                    "asymmetric adjacency between {v} and {w}"
                );
                assert_eq!(
                    self.edges[slot as usize],
                    norm(v, w),
                    "edge slot mismatch for ({v}, {w})"
                );
            }
            degree_sum += self.adj[v as usize].len();
        }
        assert_eq!(degree_sum, 2 * self.edges.len(), "degree sum != 2m");
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &self.edges {
            assert!(u < v, "edge not normalized");
            assert!(seen.insert((u, v)), "duplicate edge in edge array");
        }
    }
}
