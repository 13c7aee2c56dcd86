//! Balanced bipartite graphs on `L = {0..n}` and `R = {0..n}`.
//!
//! Edges are addressed two ways: by endpoint pair `(l, r)` and by a 1-based
//! coordinate in `[1, n²]` (row-major, `l` outer). The coordinate order is what
//! the interpolation path sweeps over.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;
use std::fmt;
use std::io::{BufRead, Write};

use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::{Domain, RandomSeed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId {
    pub side: Side,
    pub index: u32,
}

impl VertexId {
    pub const fn left(index: u32) -> Self {
        Self {
            side: Side::L,
            index,
        }
    }

    pub const fn right(index: u32) -> Self {
        Self {
            side: Side::R,
            index,
        }
    }

    /// Position in the `[2n]` vector layout used by polynomial outputs:
    /// `L` occupies `0..n`, `R` occupies `n..2n`.
    pub fn flat(self, n: usize) -> usize {
        match self.side {
            Side::L => self.index as usize,
            Side::R => n + self.index as usize,
        }
    }

    pub fn from_flat(i: usize, n: usize) -> Self {
        if i < n {
            Self::left(i as u32)
        } else {
            Self::right((i - n) as u32)
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::L => write!(f, "l{}", self.index),
            Side::R => write!(f, "r{}", self.index),
        }
    }
}

/// A coordinate of the edge-indicator vector `A ∈ {0,1}^{n²}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeCoordinate {
    /// 1-based, in `[1, n²]`.
    pub index: u64,
    pub l: u32,
    pub r: u32,
}

impl EdgeCoordinate {
    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        let (l, r) = edge_index_roundtrip(n, index)?;
        Ok(Self { index, l, r })
    }

    pub fn from_pair(n: usize, l: u32, r: u32) -> Self {
        Self {
            index: edge_index(n, l, r),
            l,
            r,
        }
    }
}

/// Maps a 1-based coordinate to its `(l, r)` pair.
pub fn edge_index_roundtrip(n: usize, index: u64) -> Result<(u32, u32)> {
    if n == 0 {
        return Err(invalid("n", "must be positive"));
    }
    let m = (n as u64) * (n as u64);
    if index == 0 || index > m {
        return Err(invalid("index", format!("{index} is outside [1, {m}]")));
    }
    let z = index - 1;
    Ok(((z / n as u64) as u32, (z % n as u64) as u32))
}

/// Inverse of [`edge_index_roundtrip`].
pub fn edge_index(n: usize, l: u32, r: u32) -> u64 {
    l as u64 * n as u64 + r as u64 + 1
}

/// An undirected bipartite graph with `n` vertices per side.
///
/// Neighbour lists are kept sorted. The type exposes no public mutators; the
/// interpolation path is the only code that edits edges in place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n: usize,
    adj_l: Vec<Vec<u32>>,
    adj_r: Vec<Vec<u32>>,
    edge_count: usize,
}

impl BipartiteGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj_l: vec![Vec::new(); n],
            adj_r: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from `(l, r)` pairs. Duplicates are merged.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut adj_l = vec![Vec::new(); n];
        for (l, r) in edges {
            if l as usize >= n || r as usize >= n {
                return Err(invalid("edge", format!("({l}, {r}) out of range for n = {n}")));
            }
            adj_l[l as usize].push(r);
        }
        for row in &mut adj_l {
            row.sort_unstable();
            row.dedup();
        }
        Ok(Self::from_rows(n, adj_l))
    }

    /// Complete bipartite graph `K_{n,n}`.
    pub fn complete(n: usize) -> Self {
        let rows = (0..n).map(|_| (0..n as u32).collect()).collect();
        Self::from_rows(n, rows)
    }

    /// `rows[l]` must be sorted and duplicate free.
    fn from_rows(n: usize, adj_l: Vec<Vec<u32>>) -> Self {
        let mut degree_r = vec![0usize; n];
        for row in &adj_l {
            for &r in row {
                degree_r[r as usize] += 1;
            }
        }
        let mut adj_r: Vec<Vec<u32>> = degree_r.iter().map(|&k| Vec::with_capacity(k)).collect();
        // Iterating l in increasing order keeps each adj_r list sorted.
        for (l, row) in adj_l.iter().enumerate() {
            for &r in row {
                adj_r[r as usize].push(l as u32);
            }
        }
        let edge_count = adj_l.iter().map(Vec::len).sum();
        Self {
            n,
            adj_l,
            adj_r,
            edge_count,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbours of `v`, as indices on the opposite side.
    pub fn neighbors(&self, v: VertexId) -> &[u32] {
        match v.side {
            Side::L => &self.adj_l[v.index as usize],
            Side::R => &self.adj_r[v.index as usize],
        }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, l: u32, r: u32) -> bool {
        self.adj_l[l as usize].binary_search(&r).is_ok()
    }

    /// All edges in coordinate order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj_l
            .iter()
            .enumerate()
            .flat_map(|(l, row)| row.iter().map(move |&r| (l as u32, r)))
    }

    /// For each `l`, the bitmask of its `R`-neighbours. Only for `n ≤ 64`.
    pub fn left_masks(&self) -> Option<Vec<u64>> {
        if self.n > 64 {
            return None;
        }
        Some(
            self.adj_l
                .iter()
                .map(|row| row.iter().fold(0u64, |m, &r| m | (1 << r)))
                .collect(),
        )
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v.index as usize) < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Sets the indicator of `(l, r)`. Returns whether the graph changed.
    pub(crate) fn set_edge(&mut self, l: u32, r: u32, present: bool) -> bool {
        let row = &mut self.adj_l[l as usize];
        match (row.binary_search(&r), present) {
            (Ok(_), true) | (Err(_), false) => false,
            (Err(pos), true) => {
                row.insert(pos, r);
                let col = &mut self.adj_r[r as usize];
                let pos = col.binary_search(&l).unwrap_err();
                col.insert(pos, l);
                self.edge_count += 1;
                true
            }
            (Ok(pos), false) => {
                row.remove(pos);
                let col = &mut self.adj_r[r as usize];
                let pos = col.binary_search(&l).unwrap();
                col.remove(pos);
                self.edge_count -= 1;
                true
            }
        }
    }

    /// Writes the text format: a header `n m`, then one `l r` line per edge.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.n, self.edge_count)?;
        for (l, r) in self.edges() {
            writeln!(out, "{l} {r}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii")
    }

    /// Parses the text format. Blank lines and `#` comments are skipped.
    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut fields = body.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                tok.ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: "expected two integers".into(),
                })?
                .parse::<usize>()
                .map_err(|e| Error::Parse {
                    line: line_no,
                    message: e.to_string(),
                })
            };
            let a = parse(fields.next())?;
            let b = parse(fields.next())?;
            if fields.next().is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "trailing tokens".into(),
                });
            }
            match header {
                None => {
                    if a == 0 {
                        return Err(Error::Parse {
                            line: line_no,
                            message: "n must be positive".into(),
                        });
                    }
                    header = Some((a, b));
                }
                Some((n, _)) => {
                    if a >= n || b >= n {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("edge ({a}, {b}) out of range for n = {n}"),
                        });
                    }
                    edges.push((a as u32, b as u32));
                }
            }
        }
        let (n, m) = header.ok_or(Error::Parse {
            line: 0,
            message: "missing `n m` header".into(),
        })?;
        let graph = Self::from_edges(n, edges.iter().copied())?;
        if edges.len() != m || graph.edge_count != m {
            return Err(Error::Parse {
                line: 0,
                message: format!("header announces {m} edges, found {} distinct", graph.edge_count),
            });
        }
        Ok(graph)
    }
}

/// Samples `G^bip_{n,d}`: every pair in `L × R` is an edge independently with
/// probability `d / n`.
///
/// Each `L`-row is drawn by geometric skipping from its own generator keyed by
/// `(seed, row)`, so the result does not depend on thread count.
pub fn sample_bipartite_graph(n: usize, d: f64, seed: RandomSeed) -> Result<BipartiteGraph> {
    if n == 0 {
        return Err(invalid("n", "must be positive"));
    }
    if !(d.is_finite() && d > 0.0) {
        return Err(invalid("d", format!("must be a positive real, got {d}")));
    }
    if d >= n as f64 {
        return Err(invalid("d", format!("d = {d} must be below n = {n}")));
    }
    let p = d / n as f64;
    let geo = Geometric::new(p).map_err(|e| invalid("d", e.to_string()))?;
    let rows: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|l| {
            let mut rng = seed.rng(Domain::GraphRow, l as u64);
            let mut row = Vec::new();
            let mut r: u64 = 0;
            loop {
                r = r.saturating_add(geo.sample(&mut rng));
                if r >= n as u64 {
                    break;
                }
                row.push(r as u32);
                r += 1;
            }
            row
        })
        .collect();
    Ok(BipartiteGraph::from_rows(n, rows))
}

/// The ball of graph distance `≤ radius` around a root, as an induced subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    /// BFS order; the root is at position 0.
    pub vertices: Vec<VertexId>,
    pub depth: Vec<usize>,
    /// Adjacency of the induced subgraph in local indices.
    pub adjacency: Vec<Vec<usize>>,
}

impl Neighborhood {
    pub fn root(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }
}

pub fn neighborhood(graph: &BipartiteGraph, v: VertexId, radius: usize) -> Result<Neighborhood> {
    graph.check_vertex(v)?;
    let mut local: FxHashMap<VertexId, usize> = FxHashMap::default();
    let mut vertices = vec![v];
    let mut depth = vec![0usize];
    local.insert(v, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if depth[i] == radius {
            continue;
        }
        let u = vertices[i];
        for &w in graph.neighbors(u) {
            let w = VertexId {
                side: u.side.other(),
                index: w,
            };
            if let std::collections::hash_map::Entry::Vacant(e) = local.entry(w) {
                e.insert(vertices.len());
                queue.push_back(vertices.len());
                vertices.push(w);
                depth.push(depth[i] + 1);
            }
        }
    }
    let adjacency = vertices
        .iter()
        .map(|&u| {
            graph
                .neighbors(u)
                .iter()
                .filter_map(|&w| {
                    local
                        .get(&VertexId {
                            side: u.side.other(),
                            index: w,
                        })
                        .copied()
                })
                .collect()
        })
        .collect();
    Ok(Neighborhood {
        vertices,
        depth,
        adjacency,
    })
}
