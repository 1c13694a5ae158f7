use std::collections::{BTreeMap, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::Plan;
use crate::alon::{induced_cayley, GeneratorSet};
use crate::flow::FlowNetwork;
use crate::graph::{Edge, Graph, GraphError, Vertex, VertexSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StageError {
    #[error("no sample within the degree window after {attempts} attempts (worst deviation {worst_deviation:.2})")]
    WindowMissed { attempts: u32, worst_deviation: f64 },
    #[error("vertex {vertex} has degree {degree} < delta = {delta}")]
    BelowDelta { vertex: Vertex, degree: u32, delta: u32 },
    #[error("graphs are not edge-disjoint: both contain {0:?}")]
    Overlap(Edge),
    #[error("W is not independent: edge {0:?}")]
    NotIndependent(Edge),
    #[error(
        "Hall violation: {} vertices of W (first: {:?}) demand {demand} but only {routed} can be routed",
        .witness.len(),
        &.witness.as_slice()[..witness.len().min(8)]
    )]
    HallViolation {
        witness: VertexSet,
        demand: u64,
        routed: u64,
    },
    #[error("graph is disconnected ({} components)", .0.len())]
    Disconnected(Vec<Vec<Vertex>>),
    #[error("vertices {0:?} cannot be attached to the tree")]
    Unmatched(VertexSet),
    #[error("input is not a forest")]
    NotAForest,
    #[error("input is not a tree")]
    NotATree,
    #[error("target parities sum to an odd number on the component of {0}")]
    OddTarget(Vertex),
    #[error("target has length {got}, expected {expected}")]
    TargetLength { got: usize, expected: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A vertex-induced view of some host graph, so that huge hosts never need to
/// be materialised.
pub trait InducedSource {
    fn order(&self) -> usize;
    fn induced_on(&self, x: &VertexSet) -> Result<Graph, GraphError>;
}

impl InducedSource for Graph {
    fn order(&self) -> usize {
        self.n()
    }

    fn induced_on(&self, x: &VertexSet) -> Result<Graph, GraphError> {
        Ok(self.induced(x)?.0)
    }
}

/// The Alon graph described by its generators.
#[derive(Debug, Clone)]
pub struct CayleySource {
    pub order: usize,
    pub generators: GeneratorSet,
}

impl InducedSource for CayleySource {
    fn order(&self) -> usize {
        self.order
    }

    fn induced_on(&self, x: &VertexSet) -> Result<Graph, GraphError> {
        induced_cayley(self.order, &self.generators, x)
    }
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub x: VertexSet,
    /// `A[X]`, relabelled to `0..n` in increasing order of `X`.
    pub graph: Graph,
    pub attempts: u32,
}

/// Draws uniform `n`-subsets until every degree of `A[X]` lies within
/// `pn ± conc_slack`.
pub fn sample_subset<A: InducedSource + ?Sized>(
    a: &A,
    plan: &Plan,
    seed: u64,
) -> Result<Sample, StageError> {
    let (order, n) = (a.order(), plan.n);
    let pn = plan.pn();
    let deviation = |g: &Graph| {
        g.degrees()
            .into_iter()
            .map(|d| (d as f64 - pn).abs())
            .fold(0.0, f64::max)
    };
    if n >= order {
        let x = VertexSet::full(order);
        let graph = a.induced_on(&x)?;
        let worst = deviation(&graph);
        if worst > plan.conc_slack {
            return Err(StageError::WindowMissed {
                attempts: 1,
                worst_deviation: worst,
            });
        }
        return Ok(Sample { x, graph, attempts: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_seen = f64::INFINITY;
    for attempt in 1..=plan.sample_retry_cap {
        let x: VertexSet = rand::seq::index::sample(&mut rng, order, n)
            .into_iter()
            .map(|i| i as Vertex)
            .collect();
        let graph = a.induced_on(&x)?;
        let worst = deviation(&graph);
        if worst <= plan.conc_slack {
            return Ok(Sample {
                x,
                graph,
                attempts: attempt,
            });
        }
        worst_seen = worst_seen.min(worst);
    }
    Err(StageError::WindowMissed {
        attempts: plan.sample_retry_cap,
        worst_deviation: worst_seen,
    })
}

#[derive(Debug, Clone)]
pub struct Trim {
    pub g1: Graph,
    /// Vertices still above `delta`; independent in `g1`.
    pub w: VertexSet,
    /// `h(v) = d_{G1 ∪ S}(v) − delta` on `W`.
    pub h: BTreeMap<Vertex, u32>,
    pub removed: Vec<Edge>,
}

fn check_disjoint(a: &Graph, b: &Graph) -> Result<(), StageError> {
    if a.n() != b.n() {
        return Err(GraphError::OrderMismatch { left: a.n(), right: b.n() }.into());
    }
    match a.intersection(b).edges().next() {
        Some(e) => Err(StageError::Overlap(e)),
        None => Ok(()),
    }
}

/// Deletes edges of `g0` whose endpoints both have `d_{G0 ∪ S} > delta`,
/// lexicographically smallest eligible edge first.
pub fn trim_excess(g0: &Graph, s: &Graph, delta: u32) -> Result<Trim, StageError> {
    check_disjoint(g0, s)?;
    let n = g0.n();
    let mut deg: Vec<u32> = (0..n as Vertex).map(|v| g0.degree(v) + s.degree(v)).collect();
    if let Some(v) = (0..n).find(|&v| deg[v] < delta) {
        return Err(StageError::BelowDelta {
            vertex: v as Vertex,
            degree: deg[v],
            delta,
        });
    }
    // Deletions only lower degrees, so an edge found ineligible stays
    // ineligible and a single lexicographic pass reaches the fixpoint.
    let mut removed = Vec::new();
    for (u, v) in g0.edges() {
        if deg[u as usize] > delta && deg[v as usize] > delta {
            deg[u as usize] -= 1;
            deg[v as usize] -= 1;
            removed.push((u, v));
        }
    }
    let g1 = g0.difference(&Graph::from_edges(n, removed.iter().copied())?);
    let h: BTreeMap<Vertex, u32> = (0..n)
        .filter(|&v| deg[v] > delta)
        .map(|v| (v as Vertex, deg[v] - delta))
        .collect();
    let w = VertexSet::new(h.keys().copied().collect());
    Ok(Trim { g1, w, h, removed })
}

/// Finds `F ⊆ G1` between `W` and `V ∖ W` with `d_F(x) = h(x)` on `W` and
/// `d_F(y) ≤ cap` elsewhere, as a maximum flow. On failure the source side of
/// a minimum cut, restricted to `W`, is returned as a Hall witness.
pub fn prescribed_subgraph(
    g1: &Graph,
    w: &VertexSet,
    h: &BTreeMap<Vertex, u32>,
    cap: u32,
) -> Result<Graph, StageError> {
    let n = g1.n();
    let in_w = w.mask(n)?;
    for x in w.iter() {
        if let Some(&y) = g1.neighbors(x).iter().find(|&&y| in_w[y as usize]) {
            return Err(StageError::NotIndependent((x.min(y), x.max(y))));
        }
    }
    let (source, sink) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2);
    let mut demand = 0u64;
    let mut cross = Vec::new();
    for x in w.iter() {
        let hx = h.get(&x).copied().unwrap_or(0);
        if hx == 0 {
            continue;
        }
        demand += hx as u64;
        net.add_arc(source, x as usize, hx as i64);
        for &y in g1.neighbors(x) {
            cross.push(((x, y), net.add_arc(x as usize, y as usize, 1)));
        }
    }
    for (y, _) in in_w.iter().enumerate().filter(|(_, &inside)| !inside) {
        net.add_arc(y, sink, cap as i64);
    }
    let routed = net.max_flow(source, sink) as u64;
    if routed < demand {
        let side = net.residual_reachable(source);
        let witness: VertexSet = w.iter().filter(|&x| side[x as usize]).collect();
        let demand_w: u64 = witness.iter().map(|x| h[&x] as u64).sum();
        let routed_w = cross
            .iter()
            .filter(|((x, _), _)| witness.contains(*x))
            .map(|(_, arc)| net.flow(*arc) as u64)
            .sum();
        return Err(StageError::HallViolation {
            witness,
            demand: demand_w,
            routed: routed_w,
        });
    }
    let chosen = cross
        .into_iter()
        .filter(|(_, arc)| net.flow(*arc) > 0)
        .map(|(e, _)| e);
    Ok(Graph::from_edges(n, chosen)?)
}

/// Spanning tree of a connected graph with maximum degree at most `maxdeg`.
pub fn bounded_spanning_tree(g: &Graph, maxdeg: u32) -> Result<Graph, StageError> {
    let comps = g.components();
    if comps.len() > 1 {
        return Err(StageError::Disconnected(comps));
    }
    bounded_spanning_forest(g, maxdeg)
}

/// One bounded-degree spanning tree per component.
///
/// Each tree is grown depth-first from the component's smallest vertex,
/// always stepping to the neighbour with the fewest vertices still outside
/// the tree. This keeps trees close to Hamiltonian paths. Vertices may only
/// be attached to tree vertices of degree below `maxdeg − 1`; anything left
/// over is matched into the residual capacity afterwards.
pub fn bounded_spanning_forest(g: &Graph, maxdeg: u32) -> Result<Graph, StageError> {
    let n = g.n();
    let grow_cap = maxdeg.saturating_sub(1);
    let mut in_tree = vec![false; n];
    let mut free: Vec<u32> = g.degrees();
    let mut tdeg = vec![0u32; n];
    let mut edges: Vec<Edge> = Vec::with_capacity(n);
    let mut left = Vec::new();

    let visit = |v: Vertex, in_tree: &mut Vec<bool>, free: &mut Vec<u32>| {
        in_tree[v as usize] = true;
        for &w in g.neighbors(v) {
            free[w as usize] -= 1;
        }
    };
    for comp in g.components() {
        let root = comp[0];
        visit(root, &mut in_tree, &mut free);
        let mut stack = vec![root];
        while let Some(&u) = stack.last() {
            let next = if tdeg[u as usize] < grow_cap {
                g.neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&c| !in_tree[c as usize])
                    .min_by_key(|&c| (free[c as usize], c))
            } else {
                None
            };
            match next {
                Some(c) => {
                    visit(c, &mut in_tree, &mut free);
                    tdeg[u as usize] += 1;
                    tdeg[c as usize] += 1;
                    edges.push((u.min(c), u.max(c)));
                    stack.push(c);
                }
                None => {
                    stack.pop();
                }
            }
        }
        left.extend(comp.into_iter().filter(|&v| !in_tree[v as usize]));
    }

    if !left.is_empty() {
        let (source, sink) = (n, n + 1);
        let mut net = FlowNetwork::new(n + 2);
        let mut arcs = Vec::new();
        for &b in &left {
            net.add_arc(source, b as usize, 1);
            for &t in g.neighbors(b) {
                if in_tree[t as usize] {
                    arcs.push(((b, t), net.add_arc(b as usize, t as usize, 1)));
                }
            }
        }
        for t in 0..n {
            if in_tree[t] && tdeg[t] < maxdeg {
                net.add_arc(t, sink, (maxdeg - tdeg[t]) as i64);
            }
        }
        net.max_flow(source, sink);
        let mut covered = vec![false; n];
        for ((b, t), arc) in arcs {
            if net.flow(arc) > 0 {
                covered[b as usize] = true;
                edges.push((b.min(t), b.max(t)));
            }
        }
        let uncovered: VertexSet = left.into_iter().filter(|&b| !covered[b as usize]).collect();
        if !uncovered.is_empty() {
            return Err(StageError::Unmatched(uncovered));
        }
    }
    Ok(Graph::from_edges(n, edges)?)
}

/// Parent pointers, a root-first vertex order, and the roots.
type Rooted = (Vec<Option<Vertex>>, Vec<Vertex>, Vec<Vertex>);

/// Roots every component of a forest at its smallest vertex.
fn root_forest(t: &Graph) -> Result<Rooted, StageError> {
    let n = t.n();
    if t.m() + t.components().len() != n {
        return Err(StageError::NotAForest);
    }
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut roots = Vec::new();
    for r in 0..n as Vertex {
        if seen[r as usize] {
            continue;
        }
        roots.push(r);
        seen[r as usize] = true;
        let mut queue = VecDeque::from([r]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in t.neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    parent[w as usize] = Some(u);
                    queue.push_back(w);
                }
            }
        }
    }
    Ok((parent, order, roots))
}

/// `T′ ⊆ T` with `d_{T′}(v) ≡ target(v) (mod 2)` for a tree `T`, rooted at
/// vertex 0.
pub fn parity_subgraph(t: &Graph, target: &[bool]) -> Result<Graph, StageError> {
    if t.n() > 0 && t.m() + 1 != t.n() {
        return Err(StageError::NotATree);
    }
    parity_subforest(t, target).map_err(|e| match e {
        StageError::NotAForest => StageError::NotATree,
        other => other,
    })
}

/// Forest version of [`parity_subgraph`]: the target must have even sum on
/// every component.
pub fn parity_subforest(t: &Graph, target: &[bool]) -> Result<Graph, StageError> {
    let n = t.n();
    if target.len() != n {
        return Err(StageError::TargetLength {
            got: target.len(),
            expected: n,
        });
    }
    let (parent, order, roots) = root_forest(t)?;
    let mut odd = vec![false; n];
    let mut chosen = Vec::new();
    for &v in order.iter().rev() {
        if let Some(p) = parent[v as usize] {
            if odd[v as usize] != target[v as usize] {
                chosen.push((v.min(p), v.max(p)));
                odd[v as usize] = !odd[v as usize];
                odd[p as usize] = !odd[p as usize];
            }
        }
    }
    if let Some(&r) = roots.iter().find(|&&r| odd[r as usize] != target[r as usize]) {
        return Err(StageError::OddTarget(r));
    }
    Ok(Graph::from_edges(n, chosen)?)
}
