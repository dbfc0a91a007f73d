//! The "common method" shortcut — uniform stub matching, then dropping
//! multi-edges/loops and keeping the giant component — and a quantification
//! of how far its output drifts from the prescribed degrees.
//!
//! Notation: from a stub-matched multigraph G we derive G_S (simplified),
//! G_C (giant component of G, multi-edges and loops kept), and G_CS (giant
//! component of the simplified graph). Reported quantities are also
//! normalized by G's value, so 1 means "no bias".

use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::Graph;
use crate::realization::DegreeSequence;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BiasError {
    #[error("degree sum must be even to match stubs")]
    OddSum,
}

/// Multigraph produced by stub matching: loops and parallel edges are kept.
/// A loop contributes 2 to its vertex's degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
    degrees: Vec<u32>,
}

impl MultiGraph {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n as f64
    }

    /// Component label per vertex over the underlying simple support;
    /// loops never connect anything. Returns (labels, size of each label).
    fn support_components(&self) -> (Vec<u32>, Vec<usize>) {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            if u != v {
                adj[u as usize].push(v);
                adj[v as usize].push(u);
            }
        }
        let mut comp = vec![u32::MAX; self.n];
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        for root in 0..self.n as u32 {
            if comp[root as usize] != u32::MAX {
                continue;
            }
            let id = sizes.len() as u32;
            comp[root as usize] = id;
            stack.push(root);
            let mut size = 0usize;
            while let Some(u) = stack.pop() {
                size += 1;
                for &w in &adj[u as usize] {
                    if comp[w as usize] == u32::MAX {
                        comp[w as usize] = id;
                        stack.push(w);
                    }
                }
            }
            sizes.push(size);
        }
        (comp, sizes)
    }
}

/// Uniform random perfect matching on the degree stubs. Each vertex v
/// contributes deg(v) stubs; a uniformly shuffled stub list paired off two
/// by two is a uniform matching.
pub fn molloy_reed<R: Rng>(seq: &DegreeSequence, rng: &mut R) -> Result<MultiGraph, BiasError> {
    if !seq.has_even_sum() {
        return Err(BiasError::OddSum);
    }
    let mut stubs: Vec<u32> = Vec::with_capacity(seq.sum() as usize);
    for (v, &d) in seq.degrees().iter().enumerate() {
        for _ in 0..d {
            stubs.push(v as u32);
        }
    }
    stubs.shuffle(rng);
    let edges: Vec<(u32, u32)> = stubs
        .chunks_exact(2)
        .map(|pair| {
            if pair[0] <= pair[1] {
                (pair[0], pair[1])
            } else {
                (pair[1], pair[0])
            }
        })
        .collect();
    Ok(MultiGraph {
        n: seq.len(),
        edges,
        degrees: seq.degrees().to_vec(),
    })
}

/// Removes loops and collapses each parallel bundle to a single edge. The
/// vertex set is unchanged.
pub fn simplify(g: &MultiGraph) -> Graph {
    let mut seen = std::collections::HashSet::with_capacity(g.edges.len());
    let mut edges = Vec::with_capacity(g.edges.len());
    for &(u, v) in &g.edges {
        if u != v && seen.insert((u, v)) {
            edges.push((u, v));
        }
    }
    Graph::from_edge_list(g.n, &edges).expect("deduplicated loop-free edges are simple")
}

/// Vertex/edge/average-degree triple of one derived subgraph, averaged over
/// trials, plus the same normalized by the stub-matched graph's values.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SubgraphSummary {
    pub vertices: f64,
    pub edges: f64,
    pub avg_degree: f64,
    pub vertices_norm: f64,
    pub edges_norm: f64,
    pub avg_degree_norm: f64,
}

/// Averages over stub-matching trials for one degree sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasReport {
    pub trials: u64,
    /// Stub-matched graph G: exact by construction.
    pub n: f64,
    pub m: f64,
    pub z: f64,
    /// G_S: multi-edges and loops removed.
    pub simplified: SubgraphSummary,
    /// G_C: giant component, multi-edges and loops kept.
    pub giant: SubgraphSummary,
    /// G_CS: giant component of the simplified graph.
    pub giant_simplified: SubgraphSummary,
}

/// Runs `trials` stub matchings and averages the nine quantities.
///
/// G_C counts multiplicities and loops (a loop adds 2 to the degree sum of
/// its component); G_CS is the giant component of G_S, which has the same
/// vertex set as G_C because edge deduplication never changes the support.
pub fn bias_report<R: Rng>(
    seq: &DegreeSequence,
    trials: u64,
    rng: &mut R,
) -> Result<BiasReport, BiasError> {
    assert!(trials >= 1, "need at least one trial");
    let n = seq.len();
    let m_exact = seq.edge_count();
    let mut acc = [[0f64; 3]; 3]; // [S, C, CS] x [n, m, z]
    for _ in 0..trials {
        let g = molloy_reed(seq, rng)?;
        let gs = simplify(&g);
        let (comp, sizes) = g.support_components();
        let giant_id = sizes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i as u32)
            .unwrap_or(0);
        let n_c = sizes.get(giant_id as usize).copied().unwrap_or(0);
        let m_c = g
            .edges()
            .iter()
            .filter(|&&(u, _)| comp[u as usize] == giant_id)
            .count();
        let m_cs = gs
            .edges()
            .iter()
            .filter(|&&(u, _)| comp[u as usize] == giant_id)
            .count();
        let summaries = [
            (n as f64, gs.edge_count() as f64),
            (n_c as f64, m_c as f64),
            (n_c as f64, m_cs as f64),
        ];
        for (i, &(nv, ne)) in summaries.iter().enumerate() {
            acc[i][0] += nv;
            acc[i][1] += ne;
            acc[i][2] += if nv > 0.0 { 2.0 * ne / nv } else { 0.0 };
        }
    }
    let z = 2.0 * m_exact as f64 / n as f64;
    let t = trials as f64;
    let summarize = |row: [f64; 3]| SubgraphSummary {
        vertices: row[0] / t,
        edges: row[1] / t,
        avg_degree: row[2] / t,
        vertices_norm: row[0] / t / n as f64,
        edges_norm: row[1] / t / m_exact as f64,
        avg_degree_norm: row[2] / t / z,
    };
    Ok(BiasReport {
        trials,
        n: n as f64,
        m: m_exact as f64,
        z,
        simplified: summarize(acc[0]),
        giant: summarize(acc[1]),
        giant_simplified: summarize(acc[2]),
    })
}

/// One CSV row per (alpha, z_target) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasCsvRow {
    pub alpha: f64,
    pub z_target: f64,
    pub report: BiasReport,
}

/// CSV emission for external plotting. `params` is echoed on a leading
/// `#` comment line, which also records that G_C quantities are computed
/// on the multigraph with loops counting twice.
pub fn write_bias_csv<W: Write>(mut w: W, params: &str, rows: &[BiasCsvRow]) -> std::io::Result<()> {
    writeln!(
        w,
        "# bias study; {params}; giant-component quantities use the multigraph (loops count 2)"
    )?;
    writeln!(
        w,
        "alpha,n,z_target,trials,N,M,Z,\
         s_n,s_m,s_z,s_n_norm,s_m_norm,s_z_norm,\
         c_n,c_m,c_z,c_n_norm,c_m_norm,c_z_norm,\
         cs_n,cs_m,cs_z,cs_n_norm,cs_m_norm,cs_z_norm"
    )?;
    for row in rows {
        let r = &row.report;
        write!(
            w,
            "{},{},{},{},{},{},{:.6}",
            row.alpha, r.n, row.z_target, r.trials, r.n, r.m, r.z
        )?;
        for s in [&r.simplified, &r.giant, &r.giant_simplified] {
            write!(
                w,
                ",{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
                s.vertices, s.edges, s.avg_degree, s.vertices_norm, s.edges_norm, s.avg_degree_norm
            )?;
        }
        writeln!(w)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn seq(d: &[u32]) -> DegreeSequence {
        DegreeSequence::new(d.to_vec())
    }

    #[test]
    fn molloy_reed_degenerate_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let g = molloy_reed(&seq(&[2]), &mut rng).unwrap();
        assert_eq!(g.edges(), &[(0, 0)]);
        assert_eq!(g.degrees(), &[2]);

        let g = molloy_reed(&seq(&[1, 1]), &mut rng).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);

        assert_eq!(molloy_reed(&seq(&[1, 2]), &mut rng), Err(BiasError::OddSum));
    }

    #[test]
    fn molloy_reed_matching_distribution_on_two_vertices() {
        // Stubs 0,0,1,1 admit 3 matchings: two give the double edge (0,1),
        // one gives two loops. Double-edge probability is 2/3.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let trials = 100_000;
        let mut doubles = 0u32;
        for _ in 0..trials {
            let g = molloy_reed(&seq(&[2, 2]), &mut rng).unwrap();
            match g.edges() {
                [(0, 1), (0, 1)] => doubles += 1,
                [(0, 0), (1, 1)] | [(1, 1), (0, 0)] => {}
                other => panic!("unexpected matching {other:?}"),
            }
        }
        let frac = doubles as f64 / trials as f64;
        assert!((frac - 2.0 / 3.0).abs() < 0.01, "double-edge fraction {frac}");
    }

    #[test]
    fn molloy_reed_respects_degrees_and_seed() {
        let s = seq(&[3, 1, 2, 2, 4, 2]);
        let a = molloy_reed(&s, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = molloy_reed(&s, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        // Degree check including loops-count-twice.
        let mut deg = vec![0u32; 6];
        for &(u, v) in a.edges() {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        assert_eq!(deg, s.degrees());
    }

    #[test]
    fn simplify_cases() {
        let g = MultiGraph {
            n: 3,
            edges: vec![(0, 1), (1, 2)],
            degrees: vec![1, 2, 1],
        };
        assert_eq!(simplify(&g).canonical_edges(), vec![(0, 1), (1, 2)]);

        let loops = MultiGraph {
            n: 1,
            edges: vec![(0, 0)],
            degrees: vec![2],
        };
        let s = simplify(&loops);
        assert_eq!(s.vertex_count(), 1);
        assert_eq!(s.edge_count(), 0);

        let double = MultiGraph {
            n: 2,
            edges: vec![(0, 1), (0, 1)],
            degrees: vec![2, 2],
        };
        assert_eq!(simplify(&double).canonical_edges(), vec![(0, 1)]);
    }

    #[test]
    fn simplify_never_adds_edges_or_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let s = seq(&[4, 3, 3, 2, 2, 2, 1, 1, 1, 1]);
            let g = molloy_reed(&s, &mut rng).unwrap();
            let gs = simplify(&g);
            assert_eq!(gs.vertex_count(), g.vertex_count());
            assert!(gs.edge_count() <= g.edge_count());
            for v in 0..g.vertex_count() as u32 {
                assert!(gs.degree(v) <= g.degrees()[v as usize]);
            }
        }
    }

    #[test]
    fn report_on_two_disjoint_stub_edges() {
        // Degrees [1,1,1,1]: every matching is two disjoint edges, so the
        // giant component always has 2 of 4 vertices.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = bias_report(&seq(&[1, 1, 1, 1]), 500, &mut rng).unwrap();
        assert_eq!(r.giant.vertices_norm, 0.5);
        assert_eq!(r.giant.vertices, 2.0);
        assert_eq!(r.simplified.edges_norm, 1.0);
        assert_eq!(r.giant_simplified.vertices, r.giant.vertices);
    }

    #[test]
    fn report_identity_on_simple_connected_draw() {
        // Find a seed whose [3,3,3,3] draw is simple and connected (K4
        // comes up often); on that trial every normalized ratio is 1.
        let s = seq(&[3, 3, 3, 3]);
        for seed in 0..200 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = molloy_reed(&s, &mut rng).unwrap();
            let gs = simplify(&g);
            if gs.edge_count() == g.edge_count() && gs.is_connected() {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let r = bias_report(&s, 1, &mut rng).unwrap();
                for part in [&r.simplified, &r.giant, &r.giant_simplified] {
                    assert_eq!(part.vertices_norm, 1.0);
                    assert_eq!(part.edges_norm, 1.0);
                    assert_eq!(part.avg_degree_norm, 1.0);
                }
                return;
            }
        }
        panic!("no simple connected K4 draw in 200 seeds");
    }

    #[test]
    fn report_invariants_on_heavy_tail() {
        use crate::degree_model::{sample_sequence, PowerLawSpec};
        let spec = PowerLawSpec::new(2.1, 0.0, 400).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = sample_sequence(&spec, &mut rng).unwrap();
        let r = bias_report(&s, 40, &mut rng).unwrap();
        assert_eq!(r.giant.vertices, r.giant_simplified.vertices);
        assert!(r.giant_simplified.edges <= r.simplified.edges);
        assert!(r.giant_simplified.edges <= r.giant.edges);
        assert!(r.simplified.edges <= r.m);
        assert!(r.giant.vertices_norm <= 1.0);
    }

    #[test]
    fn csv_is_deterministic_and_headed() {
        let s = seq(&[2, 2, 2, 1, 1]);
        let make = || {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let report = bias_report(&s, 10, &mut rng).unwrap();
            let mut buf = Vec::new();
            write_bias_csv(
                &mut buf,
                "alpha=0 n=5 trials=10 seed=5",
                &[BiasCsvRow {
                    alpha: 0.0,
                    z_target: 1.6,
                    report,
                }],
            )
            .unwrap();
            String::from_utf8(buf).unwrap()
        };
        let a = make();
        assert_eq!(a, make());
        assert!(a.starts_with("# bias study"));
        assert_eq!(a.lines().count(), 3);
        assert_eq!(a.lines().nth(1).unwrap().split(',').count(), 25);
    }
}
