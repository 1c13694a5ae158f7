//! Simple undirected graphs in compressed sparse row form.
//!
//! A [`Graph`] is immutable once built. Every edit (`overlay`, `induced`,
//! `difference`) returns a fresh snapshot, which is what lets the pipeline
//! keep each stage around for its edge ledger.

pub mod generators;
pub mod io;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

pub type Vertex = u32;
pub type Edge = (Vertex, Vertex);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("graphs have different vertex counts ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },
    #[error("edge ({0}, {1}) is already present; overlay-add requires disjoint edge sets")]
    EdgeAlreadyPresent(Vertex, Vertex),
    #[error("edge ({0}, {1}) is not present; overlay-remove requires a subgraph")]
    EdgeMissing(Vertex, Vertex),
}

/// Sorted set of distinct vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new(mut ids: Vec<Vertex>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }

    pub fn full(n: usize) -> Self {
        VertexSet((0..n as Vertex).collect())
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    /// Membership bitmap over `0..n`. Errors if an id is `>= n`.
    pub fn mask(&self, n: usize) -> Result<Vec<bool>, GraphError> {
        let mut mask = vec![false; n];
        for &v in &self.0 {
            *mask
                .get_mut(v as usize)
                .ok_or(GraphError::VertexOutOfRange { vertex: v, n })? = true;
        }
        Ok(mask)
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlayMode {
    Add,
    Remove,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeStats {
    pub min: u32,
    pub max: u32,
    /// degree -> number of vertices with that degree
    pub histogram: BTreeMap<u32, usize>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.m())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Builds a graph from an edge list, dropping duplicates in either
    /// orientation. Self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut canon = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            canon.push(if u < v { (u, v) } else { (v, u) });
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Self::from_canonical(n, &canon))
    }

    /// `edges` must be sorted, deduplicated, with `u < v < n`.
    fn from_canonical(n: usize, edges: &[Edge]) -> Self {
        let mut deg = vec![0usize; n];
        for &(u, v) in edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0; offsets[n]];
        // Edges arrive sorted by (u, v), so each row fills in increasing
        // order: lower neighbours come from edges (w, u) with w < u, which
        // precede all edges (u, v).
        for &(u, v) in edges {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        let g = Graph { offsets, targets };
        debug_assert!((0..n).all(|v| g.neighbors(v as Vertex).windows(2).all(|w| w[0] < w[1])));
        g
    }

    /// Builds from per-vertex neighbour lists that are already sorted and
    /// symmetric. Used by generators that know their adjacency directly.
    pub(crate) fn from_sorted_adjacency(rows: Vec<Vec<Vertex>>) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        for row in rows {
            targets.extend_from_slice(&row);
            offsets.push(targets.len());
        }
        Graph { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, v: Vertex) -> u32 {
        let v = v as usize;
        (self.offsets[v + 1] - self.offsets[v]) as u32
    }

    pub fn degrees(&self) -> Vec<u32> {
        (0..self.n() as Vertex).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        (u as usize) < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n() as Vertex).flat_map(move |u| {
            let row = self.neighbors(u);
            let start = row.partition_point(|&w| w <= u);
            row[start..].iter().map(move |&v| (u, v))
        })
    }

    pub fn max_degree(&self) -> u32 {
        (0..self.n() as Vertex).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> u32 {
        (0..self.n() as Vertex).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// The common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<u32> {
        if self.n() == 0 {
            return Some(0);
        }
        let d = self.degree(0);
        (0..self.n() as Vertex).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let mut histogram = BTreeMap::new();
        for v in 0..self.n() as Vertex {
            *histogram.entry(self.degree(v)).or_insert(0) += 1;
        }
        DegreeStats {
            min: self.min_degree(),
            max: self.max_degree(),
            histogram,
        }
    }

    fn check_set(&self, x: &VertexSet) -> Result<(), GraphError> {
        match x.as_slice().last() {
            Some(&v) if v as usize >= self.n() => {
                Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
            }
            _ => Ok(()),
        }
    }

    /// `G[X]` relabelled densely in the sort order of `X`, together with the
    /// map from new ids back to ids of `self`.
    pub fn induced(&self, x: &VertexSet) -> Result<(Graph, Vec<Vertex>), GraphError> {
        self.check_set(x)?;
        let mut relabel = vec![Vertex::MAX; self.n()];
        for (i, v) in x.iter().enumerate() {
            relabel[v as usize] = i as Vertex;
        }
        let rows = x
            .iter()
            .map(|v| {
                self.neighbors(v)
                    .iter()
                    .filter_map(|&w| {
                        let r = relabel[w as usize];
                        (r != Vertex::MAX).then_some(r)
                    })
                    .collect()
            })
            .collect();
        Ok((Graph::from_sorted_adjacency(rows), x.as_slice().to_vec()))
    }

    /// Edge-set union (`Add`) or difference (`Remove`) with `other`.
    ///
    /// `Add` requires the edge sets to be disjoint and `Remove` requires
    /// `other` to be a subgraph; the first offending edge is reported.
    pub fn overlay(&self, other: &Graph, mode: OverlayMode) -> Result<Graph, GraphError> {
        if self.n() != other.n() {
            return Err(GraphError::OrderMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        for (u, v) in other.edges() {
            match (mode, self.has_edge(u, v)) {
                (OverlayMode::Add, true) => return Err(GraphError::EdgeAlreadyPresent(u, v)),
                (OverlayMode::Remove, false) => return Err(GraphError::EdgeMissing(u, v)),
                _ => {}
            }
        }
        Ok(match mode {
            OverlayMode::Add => self.union(other),
            OverlayMode::Remove => self.difference(other),
        })
    }

    /// Union of edge sets; shared edges appear once.
    pub fn union(&self, other: &Graph) -> Graph {
        assert_eq!(self.n(), other.n());
        let rows = (0..self.n() as Vertex)
            .map(|v| merge_union(self.neighbors(v), other.neighbors(v)))
            .collect();
        Graph::from_sorted_adjacency(rows)
    }

    /// Edges of `self` not in `other`.
    pub fn difference(&self, other: &Graph) -> Graph {
        assert_eq!(self.n(), other.n());
        let rows = (0..self.n() as Vertex)
            .map(|v| {
                let b = other.neighbors(v);
                self.neighbors(v)
                    .iter()
                    .copied()
                    .filter(|w| b.binary_search(w).is_err())
                    .collect()
            })
            .collect();
        Graph::from_sorted_adjacency(rows)
    }

    /// Edges present in both.
    pub fn intersection(&self, other: &Graph) -> Graph {
        assert_eq!(self.n(), other.n());
        let rows = (0..self.n() as Vertex)
            .map(|v| {
                let b = other.neighbors(v);
                self.neighbors(v)
                    .iter()
                    .copied()
                    .filter(|w| b.binary_search(w).is_ok())
                    .collect()
            })
            .collect();
        Graph::from_sorted_adjacency(rows)
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n() == other.n() && self.edges().all(|(u, v)| other.has_edge(u, v))
    }

    /// Number of triangles, by merge-intersecting sorted neighbour lists
    /// along each edge and counting each triangle at its smallest vertex.
    pub fn triangle_count(&self) -> u64 {
        let mut count = 0u64;
        for (u, v) in self.edges() {
            count += count_common_above(self.neighbors(u), self.neighbors(v), v);
        }
        count
    }

    /// Up to `limit` triangles `(a, b, c)` with `a < b < c`, in lex order.
    pub fn triangles(&self, limit: usize) -> Vec<[Vertex; 3]> {
        let mut out = Vec::new();
        for (u, v) in self.edges() {
            let (a, b) = (self.neighbors(u), self.neighbors(v));
            let (mut i, mut j) = (a.partition_point(|&w| w <= v), b.partition_point(|&w| w <= v));
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if out.len() == limit {
                            return out;
                        }
                        out.push([u, v, a[i]]);
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        out
    }

    /// True iff no edge has both endpoints in `x`.
    pub fn is_independent(&self, x: &VertexSet) -> Result<bool, GraphError> {
        let mask = x.mask(self.n())?;
        Ok(x
            .iter()
            .all(|v| self.neighbors(v).iter().all(|&w| !mask[w as usize])))
    }

    /// `e(S, T)`: ordered pairs `(s, t)` with `s` in `S`, `t` in `T` and `st`
    /// an edge. Edges inside `S ∩ T` count twice, so `e(V, V) = 2m`.
    pub fn edges_between(&self, s: &VertexSet, t: &VertexSet) -> Result<u64, GraphError> {
        self.check_set(s)?;
        let t_mask = t.mask(self.n())?;
        Ok(s.iter()
            .map(|v| {
                self.neighbors(v)
                    .iter()
                    .filter(|&&w| t_mask[w as usize])
                    .count() as u64
            })
            .sum())
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            stack.push(root as Vertex);
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in self.neighbors(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Position of `v` inside the CSR row of `u`, if the edge exists.
    pub(crate) fn slot(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let base = self.offsets[u as usize];
        self.neighbors(u).binary_search(&v).ok().map(|i| base + i)
    }

    pub(crate) fn row_start(&self, u: Vertex) -> usize {
        self.offsets[u as usize]
    }
}

fn merge_union(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Number of common elements of two sorted slices strictly greater than `floor`.
fn count_common_above(a: &[Vertex], b: &[Vertex], floor: Vertex) -> u64 {
    let mut i = a.partition_point(|&w| w <= floor);
    let mut j = b.partition_point(|&w| w <= floor);
    let mut c = 0;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}
