//! Text formats used by the CLI.
//!
//! Edge list: first line `n m`, then m lines `u v` with `u < v`, 0-indexed,
//! space-separated, newline-terminated. Degree file: one non-negative
//! integer per line; line i is the degree of vertex i.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::graph::Graph;
use crate::realization::DegreeSequence;

#[derive(Debug, Error)]
pub enum ReadError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {problem}")]
    Malformed { line: usize, problem: String },
}

fn malformed(line: usize, problem: impl Into<String>) -> ReadError {
    ReadError::Malformed {
        line,
        problem: problem.into(),
    }
}

pub fn write_edge_list<W: Write>(mut w: W, g: &Graph) -> std::io::Result<()> {
    writeln!(w, "{} {}", g.vertex_count(), g.edge_count())?;
    for &(u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph, ReadError> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| malformed(1, "missing header line 'n m'"))??;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .ok_or_else(|| malformed(1, "missing vertex count"))?
        .parse()
        .map_err(|_| malformed(1, "vertex count is not an integer"))?;
    let m: usize = parts
        .next()
        .ok_or_else(|| malformed(1, "missing edge count"))?
        .parse()
        .map_err(|_| malformed(1, "edge count is not an integer"))?;
    if parts.next().is_some() {
        return Err(malformed(1, "trailing tokens after 'n m'"));
    }

    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut line_no = 1usize;
    for _ in 0..m {
        line_no += 1;
        let line = lines
            .next()
            .ok_or_else(|| malformed(line_no, format!("expected {m} edge lines, file ended early")))??;
        let mut parts = line.split_whitespace();
        let u: u32 = parts
            .next()
            .ok_or_else(|| malformed(line_no, "missing first endpoint"))?
            .parse()
            .map_err(|_| malformed(line_no, "endpoint is not an integer"))?;
        let v: u32 = parts
            .next()
            .ok_or_else(|| malformed(line_no, "missing second endpoint"))?
            .parse()
            .map_err(|_| malformed(line_no, "endpoint is not an integer"))?;
        if parts.next().is_some() {
            return Err(malformed(line_no, "trailing tokens after edge"));
        }
        if u >= v {
            return Err(malformed(line_no, format!("expected u < v, got {u} {v}")));
        }
        if v as usize >= n {
            return Err(malformed(
                line_no,
                format!("vertex {v} out of range for n = {n}"),
            ));
        }
        if !seen.insert((u, v)) {
            return Err(malformed(line_no, format!("duplicate edge {u} {v}")));
        }
        edges.push((u, v));
    }
    for line in lines {
        line_no += 1;
        let line = line?;
        if !line.trim().is_empty() {
            return Err(malformed(line_no, "unexpected content after last edge"));
        }
    }
    Ok(Graph::from_edge_list(n, &edges).expect("edges validated line by line"))
}

pub fn write_degree_file<W: Write>(mut w: W, seq: &DegreeSequence) -> std::io::Result<()> {
    for &d in seq.degrees() {
        writeln!(w, "{d}")?;
    }
    Ok(())
}

pub fn read_degree_file<R: BufRead>(r: R) -> Result<DegreeSequence, ReadError> {
    let mut degrees = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let d: u32 = t
            .parse()
            .map_err(|_| malformed(idx + 1, format!("'{t}' is not a non-negative integer")))?;
        degrees.push(d);
    }
    Ok(DegreeSequence::new(degrees))
}
