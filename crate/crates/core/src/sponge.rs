//! Degree-adjusting gadgets built from edge-disjoint pentagons.
//!
//! A pentagon `C` with designated anchor `g(C)` splits into `S_C`, the three
//! edges forming a path through the anchor plus the opposite edge (`P₃ ⊔ K₂`),
//! and `R_C`, the two remaining edges (`2K₂`). Both halves give every
//! non-anchor vertex degree one, while the anchor has degree two in `S_C` and
//! zero in `R_C`. Swapping `S_C` for `R_C` therefore lowers exactly one
//! degree, the anchor's, by two. A [`Sponge`] collects enough pentagons that
//! every vertex anchors at least `per_vertex_min` of them, so any degree
//! reduction `2·f(v)` with `f(v) ≤ |C_v|` can be realised inside `R ∪ S`.

use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::flow::FlowNetwork;
use crate::graph::{Edge, Graph, Vertex, VertexSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpongeError {
    #[error("pentagon {0:?} does not have five distinct vertices with the anchor among them")]
    BadPentagon([Vertex; 5]),
    #[error("host graph contains {0} triangles")]
    NotTriangleFree(u64),
    #[error("invalid sponge config: {0}")]
    BadConfig(String),
    #[error("vertex {vertex} stalled at pentagon-degree {achieved} (needs {required})")]
    Stalled {
        vertex: Vertex,
        achieved: u32,
        required: u32,
    },
    #[error("sponge needs more than {budget} edges")]
    EdgeBudget { budget: u64 },
    #[error("vertex {vertex} anchors only {achieved} pentagons (needs {required})")]
    AnchorShortfall {
        vertex: Vertex,
        achieved: u32,
        required: u32,
    },
    #[error("f({vertex}) = {requested} exceeds |C_v| = {available}")]
    ReductionOutOfRange {
        vertex: Vertex,
        requested: u32,
        available: u32,
    },
    #[error("reduction vector has length {got}, expected {expected}")]
    ReductionLength { got: usize, expected: usize },
    #[error("loss budget has length {got}, expected {expected}")]
    BudgetLength { got: usize, expected: usize },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
}

/// A 5-cycle stored in cycle order with its anchor first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pentagon {
    cycle: [Vertex; 5],
}

fn canon(u: Vertex, v: Vertex) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Pentagon {
    pub fn new(cycle: [Vertex; 5], anchor: Vertex) -> Result<Self, SpongeError> {
        let mut sorted = cycle;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(SpongeError::BadPentagon(cycle));
        }
        let pos = cycle
            .iter()
            .position(|&c| c == anchor)
            .ok_or(SpongeError::BadPentagon(cycle))?;
        let mut rotated = cycle;
        rotated.rotate_left(pos);
        Ok(Pentagon { cycle: rotated })
    }

    pub fn anchor(&self) -> Vertex {
        self.cycle[0]
    }

    /// Vertices in cycle order starting at the anchor.
    pub fn cycle(&self) -> [Vertex; 5] {
        self.cycle
    }

    pub fn edges(&self) -> [Edge; 5] {
        let c = &self.cycle;
        std::array::from_fn(|i| canon(c[i], c[(i + 1) % 5]))
    }

    /// `S_C`: the two anchor edges and the edge opposite the anchor.
    pub fn s_part(&self) -> [Edge; 3] {
        let c = &self.cycle;
        [canon(c[4], c[0]), canon(c[0], c[1]), canon(c[2], c[3])]
    }

    /// `R_C`: the two edges avoiding the anchor that are not in `S_C`.
    pub fn r_part(&self) -> [Edge; 2] {
        let c = &self.cycle;
        [canon(c[1], c[2]), canon(c[3], c[4])]
    }
}

/// Tuning of [`build_sponge`]. All degree quantities are edge degrees in
/// `R ∪ S`, i.e. twice the number of pentagons through a vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpongeConfig {
    /// Pentagons each vertex must anchor.
    pub per_vertex_min: u32,
    /// The repair loop runs until every vertex has at least this
    /// pentagon-degree.
    pub cover_min: u32,
    /// Budget on `|E(R ∪ S)|`, per vertex of the host.
    pub phase_edge_factor: u32,
    /// A vertex may join another vertex's bundle only while its
    /// pentagon-degree is at most `phase_maxdeg − 2`.
    pub phase_maxdeg: u32,
    /// Hard cap on `Δ(R ∪ S)`.
    pub rs_maxdeg: u32,
    /// Most pentagons mined around a vertex per call.
    pub bundle_target: u32,
    /// Rounds allowed for the cover loop and for anchor repair.
    pub retry_cap: u32,
}

impl SpongeConfig {
    /// Constants for workstation-sized graphs with typical degree `pn`.
    pub fn desk(pn: f64) -> Self {
        let per_vertex_min = 2;
        let phase_maxdeg = ((0.6 * pn).ceil() as u32).max(12);
        SpongeConfig {
            per_vertex_min,
            cover_min: 4 * per_vertex_min,
            phase_edge_factor: ((pn / 3.0).ceil() as u32).max(10),
            phase_maxdeg,
            rs_maxdeg: 2 * phase_maxdeg,
            bundle_target: ((pn / 100.0).ceil() as u32).max(3),
            retry_cap: 50,
        }
    }

    /// The asymptotic constants, literally.
    pub fn paper(n: usize, pn: f64) -> Self {
        let tenth = (n as f64).powf(0.1);
        SpongeConfig {
            per_vertex_min: tenth.ceil() as u32,
            cover_min: (20.0 * tenth).ceil() as u32,
            phase_edge_factor: (50.0 * tenth).floor() as u32,
            phase_maxdeg: (300.0 * tenth).floor() as u32,
            rs_maxdeg: (600.0 * tenth).floor() as u32,
            bundle_target: ((pn / 100.0).ceil() as u32).max(1),
            retry_cap: 50,
        }
    }

    pub fn validate(&self) -> Result<(), SpongeError> {
        let fields = [
            ("per_vertex_min", self.per_vertex_min),
            ("cover_min", self.cover_min),
            ("phase_edge_factor", self.phase_edge_factor),
            ("phase_maxdeg", self.phase_maxdeg),
            ("rs_maxdeg", self.rs_maxdeg),
            ("bundle_target", self.bundle_target),
            ("retry_cap", self.retry_cap),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| *v == 0) {
            return Err(SpongeError::BadConfig(format!("{name} must be positive")));
        }
        if self.rs_maxdeg < 2 * self.phase_maxdeg {
            return Err(SpongeError::BadConfig(format!(
                "rs_maxdeg {} < 2 * phase_maxdeg {}",
                self.rs_maxdeg, self.phase_maxdeg
            )));
        }
        Ok(())
    }
}

/// The pair `(R, S)` with the per-anchor pentagon collections.
#[derive(Debug, Clone)]
pub struct Sponge {
    pub r: Graph,
    pub s: Graph,
    /// `collections[v]` holds the pentagons anchored at `v`.
    pub collections: Vec<Vec<Pentagon>>,
    pub config: SpongeConfig,
}

impl Sponge {
    /// Assembles `R` and `S` from anchored pentagons on `n` vertices.
    pub fn from_pentagons(n: usize, pentagons: &[Pentagon], config: SpongeConfig) -> Self {
        let mut collections = vec![Vec::new(); n];
        for p in pentagons {
            collections[p.anchor() as usize].push(*p);
        }
        let r = Graph::from_edges(n, pentagons.iter().flat_map(|p| p.r_part())).unwrap();
        let s = Graph::from_edges(n, pentagons.iter().flat_map(|p| p.s_part())).unwrap();
        Sponge {
            r,
            s,
            collections,
            config,
        }
    }

    pub fn n(&self) -> usize {
        self.collections.len()
    }

    pub fn pentagons(&self) -> impl Iterator<Item = &Pentagon> {
        self.collections.iter().flatten()
    }

    pub fn pentagon_count(&self) -> usize {
        self.collections.iter().map(Vec::len).sum()
    }

    pub fn anchored(&self, v: Vertex) -> &[Pentagon] {
        &self.collections[v as usize]
    }

    /// `R ∪ S`.
    pub fn union(&self) -> Graph {
        self.r.union(&self.s)
    }

    /// Replaces `S_C` by `R_C` for the first `f(v)` pentagons of each `C_v`,
    /// giving `H ⊆ R ∪ S` with `d_H(v) = d_S(v) − 2 f(v)`.
    pub fn reduce(&self, f: &[u32]) -> Result<Graph, SpongeError> {
        if f.len() != self.n() {
            return Err(SpongeError::ReductionLength {
                got: f.len(),
                expected: self.n(),
            });
        }
        let mut edges = Vec::with_capacity(self.s.m());
        for (v, (coll, &fv)) in self.collections.iter().zip(f).enumerate() {
            if fv as usize > coll.len() {
                return Err(SpongeError::ReductionOutOfRange {
                    vertex: v as Vertex,
                    requested: fv,
                    available: coll.len() as u32,
                });
            }
            for (i, p) in coll.iter().enumerate() {
                if i < fv as usize {
                    edges.extend(p.r_part());
                } else {
                    edges.extend(p.s_part());
                }
            }
        }
        Ok(Graph::from_edges(self.n(), edges).unwrap())
    }

    /// Checks every structural property against the host graph the sponge
    /// was mined from.
    pub fn audit(&self, host: &Graph) -> Result<(), String> {
        let n = self.n();
        if host.n() != n {
            return Err(format!("host has {} vertices, sponge {}", host.n(), n));
        }
        let mut edges: Vec<Edge> = Vec::new();
        for p in self.pentagons() {
            for (u, v) in p.edges() {
                if !host.has_edge(u, v) {
                    return Err(format!("pentagon {:?} uses non-edge ({u}, {v})", p.cycle()));
                }
            }
            let (s, r) = (p.s_part(), p.r_part());
            let deg = |part: &[Edge], x: Vertex| part.iter().filter(|e| e.0 == x || e.1 == x).count();
            if deg(&s, p.anchor()) != 2 || deg(&r, p.anchor()) != 0 {
                return Err(format!("bad split at anchor of {:?}", p.cycle()));
            }
            for &x in &p.cycle()[1..] {
                if deg(&s, x) != 1 || deg(&r, x) != 1 {
                    return Err(format!("bad split at {x} in {:?}", p.cycle()));
                }
            }
            edges.extend(p.edges());
        }
        let total = edges.len();
        edges.sort_unstable();
        edges.dedup();
        if edges.len() != total {
            return Err("pentagons are not edge-disjoint".into());
        }
        if self.r.m() + self.s.m() != total {
            return Err(format!(
                "|R| + |S| = {} but pentagons carry {} edges",
                self.r.m() + self.s.m(),
                total
            ));
        }
        if self.r.intersection(&self.s).m() != 0 {
            return Err("R and S share an edge".into());
        }
        let union = self.union();
        if union.max_degree() > self.config.rs_maxdeg {
            return Err(format!(
                "Δ(R ∪ S) = {} exceeds {}",
                union.max_degree(),
                self.config.rs_maxdeg
            ));
        }
        for v in 0..n as Vertex {
            let cv = self.anchored(v).len() as u32;
            if cv < self.config.per_vertex_min {
                return Err(format!("|C_{v}| = {cv} < {}", self.config.per_vertex_min));
            }
            if self.s.degree(v) < 2 * cv {
                return Err(format!("d_S({v}) = {} < 2|C_v| = {}", self.s.degree(v), 2 * cv));
            }
        }
        Ok(())
    }

    /// One line per pentagon: `v1 v2 v3 v4 v5 anchor`.
    pub fn write_dump<W: Write>(&self, mut w: W) -> io::Result<()> {
        for p in self.pentagons() {
            let c = p.cycle();
            writeln!(w, "{} {} {} {} {} {}", c[0], c[1], c[2], c[3], c[4], p.anchor())?;
        }
        w.flush()
    }
}

/// Incremental pentagon miner: tracks which edges are already used by
/// earlier pentagons and each vertex's pentagon-degree.
struct Miner<'a> {
    g: &'a Graph,
    used: Vec<bool>,
    pdeg: Vec<u32>,
    cand: Vec<u32>,
    taken: Vec<u32>,
    stamp: u32,
    rng: ChaCha8Rng,
    found: Vec<[Vertex; 5]>,
}

impl<'a> Miner<'a> {
    fn new(g: &'a Graph, seed: u64) -> Self {
        let n = g.n();
        Miner {
            g,
            used: vec![false; 2 * g.m()],
            pdeg: vec![0; n],
            cand: vec![0; n],
            taken: vec![0; n],
            stamp: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            found: Vec::new(),
        }
    }

    fn free_neighbors(&self, u: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let base = self.g.row_start(u);
        self.g
            .neighbors(u)
            .iter()
            .enumerate()
            .filter(move |(i, _)| !self.used[base + i])
            .map(|(_, &w)| w)
    }

    fn claim(&mut self, u: Vertex, w: Vertex) {
        let a = self.g.slot(u, w).unwrap();
        let b = self.g.slot(w, u).unwrap();
        self.used[a] = true;
        self.used[b] = true;
    }

    /// Up to `want` pentagons through `v` whose other vertices satisfy
    /// `allow` and are pairwise disjoint. Returns how many were found.
    fn bundle(&mut self, v: Vertex, want: usize, allow: &dyn Fn(&[u32], Vertex) -> bool) -> usize {
        self.stamp += 1;
        let stamp = self.stamp;
        let mut nbrs: Vec<Vertex> = self
            .free_neighbors(v)
            .filter(|&b| allow(&self.pdeg, b))
            .collect();
        nbrs.shuffle(&mut self.rng);
        for &b in &nbrs {
            self.cand[b as usize] = stamp;
        }
        self.taken[v as usize] = stamp;
        let mut got = 0;
        for &a in &nbrs {
            if got == want {
                break;
            }
            if self.cand[a as usize] != stamp {
                continue;
            }
            if let Some(cycle) = self.close_pentagon(v, a, stamp, allow) {
                for &x in &cycle[1..] {
                    self.taken[x as usize] = stamp;
                    self.cand[x as usize] = 0;
                }
                for i in 0..5 {
                    self.claim(cycle[i], cycle[(i + 1) % 5]);
                    self.pdeg[cycle[i] as usize] += 2;
                }
                self.found.push(cycle);
                got += 1;
            }
        }
        for &b in &nbrs {
            if self.cand[b as usize] == stamp {
                self.cand[b as usize] = 0;
            }
        }
        got
    }

    /// Looks for `v – a – x – y – b – v` over free edges with `b` another
    /// candidate neighbour of `v`.
    fn close_pentagon(
        &self,
        v: Vertex,
        a: Vertex,
        stamp: u32,
        allow: &dyn Fn(&[u32], Vertex) -> bool,
    ) -> Option<[Vertex; 5]> {
        let fresh = |u: Vertex| {
            u != v
                && self.taken[u as usize] != stamp
                && self.cand[u as usize] != stamp
                && allow(&self.pdeg, u)
        };
        for x in self.free_neighbors(a) {
            if !fresh(x) {
                continue;
            }
            for y in self.free_neighbors(x) {
                if y == a || !fresh(y) {
                    continue;
                }
                for b in self.free_neighbors(y) {
                    if b != a && self.cand[b as usize] == stamp {
                        return Some([v, a, x, y, b]);
                    }
                }
            }
        }
        None
    }
}

/// Up to `t` pentagons through `v`, each using four vertices of `x`, pairwise
/// meeting only in `v`. Returned cycles start at `v`. Never fabricates: a
/// short result means the search ran dry.
pub fn c5_bundle(
    g_avail: &Graph,
    x: &VertexSet,
    v: Vertex,
    t: usize,
) -> Result<Vec<Pentagon>, SpongeError> {
    let n = g_avail.n();
    if v as usize >= n {
        return Err(SpongeError::VertexOutOfRange { vertex: v, n });
    }
    let mask = x
        .mask(n)
        .map_err(|_| SpongeError::VertexOutOfRange {
            vertex: *x.as_slice().last().unwrap(),
            n,
        })?;
    let mut miner = Miner::new(g_avail, 0);
    miner.bundle(v, t, &|_, u| mask[u as usize]);
    Ok(miner
        .found
        .iter()
        .map(|c| Pentagon::new(*c, v).unwrap())
        .collect())
}

/// Mines edge-disjoint pentagons until every vertex reaches `cover_min`
/// pentagon-degree, then assigns anchors by max-flow so every vertex anchors
/// at least `per_vertex_min` pentagons, mining more around any vertex the
/// flow leaves short.
pub fn build_sponge(g: &Graph, cfg: &SpongeConfig, seed: u64) -> Result<Sponge, SpongeError> {
    build_sponge_within(g, cfg, seed, None)
}

/// [`build_sponge`] with a per-vertex loss budget.
///
/// A pentagon through `v` not anchored at `v` costs `v` one unit of degree
/// in `(G ∖ (R ∪ S)) ∪ S`; one anchored at `v` costs nothing. With a budget,
/// every vertex ends with `|pentagons through v| − |C_v| ≤ budget[v]`, so
/// low-degree vertices keep their degree by anchoring what passes through
/// them and only join other bundles while they can afford it.
pub fn build_sponge_within(
    g: &Graph,
    cfg: &SpongeConfig,
    seed: u64,
    budget: Option<&[u32]>,
) -> Result<Sponge, SpongeError> {
    cfg.validate()?;
    let triangles = g.triangle_count();
    if triangles != 0 {
        return Err(SpongeError::NotTriangleFree(triangles));
    }
    let n = g.n();
    if let Some(b) = budget {
        if b.len() != n {
            return Err(SpongeError::BudgetLength {
                got: b.len(),
                expected: n,
            });
        }
    }
    if let Some(v) = (0..n as Vertex).find(|&v| g.degree(v) == 0) {
        return Err(SpongeError::Stalled {
            vertex: v,
            achieved: 0,
            required: cfg.cover_min,
        });
    }
    let mut miner = Miner::new(g, seed);
    let mut order_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let tiebreak: Vec<u64> = (0..n).map(|_| order_rng.random()).collect();
    let phase_cap = cfg.phase_maxdeg;
    let quota = cfg.per_vertex_min;
    let allow = move |pdeg: &[u32], u: Vertex| {
        let pd = pdeg[u as usize];
        pd + 2 <= phase_cap && budget.is_none_or(|b| pd / 2 < b[u as usize] + quota)
    };

    let mut round = 0;
    loop {
        let mut needy: Vec<Vertex> = (0..n as Vertex)
            .filter(|&v| miner.pdeg[v as usize] < cfg.cover_min)
            .collect();
        if needy.is_empty() {
            break;
        }
        if round == cfg.retry_cap {
            let v = needy[0];
            return Err(SpongeError::Stalled {
                vertex: v,
                achieved: miner.pdeg[v as usize],
                required: cfg.cover_min,
            });
        }
        round += 1;
        needy.sort_by_key(|&v| (miner.pdeg[v as usize], tiebreak[v as usize]));
        let mut progress = false;
        let mut stuck = None;
        for v in needy {
            let pd = miner.pdeg[v as usize];
            if pd >= cfg.cover_min {
                continue;
            }
            let room = cfg.rs_maxdeg.saturating_sub(pd) / 2;
            let want = cfg.bundle_target.min((cfg.cover_min - pd).div_ceil(2)).min(room);
            if want > 0 && miner.bundle(v, want as usize, &allow) > 0 {
                progress = true;
            } else if stuck.is_none() {
                stuck = Some(v);
            }
        }
        if !progress {
            let v = stuck.unwrap();
            return Err(SpongeError::Stalled {
                vertex: v,
                achieved: miner.pdeg[v as usize],
                required: cfg.cover_min,
            });
        }
    }

    let budget_limit = cfg.phase_edge_factor as u64 * n as u64;
    let over_budget = |m: &Miner| 5 * m.found.len() as u64 > budget_limit;
    let mut repairs = 0;
    loop {
        if over_budget(&miner) {
            return Err(SpongeError::EdgeBudget {
                budget: budget_limit,
            });
        }
        let demand: Vec<u32> = (0..n)
            .map(|v| {
                let through = miner.pdeg[v] / 2;
                let excess = budget.map_or(0, |b| through.saturating_sub(b[v]));
                quota.max(excess)
            })
            .collect();
        let (anchors, counts) = assign_anchors(n, &miner.found, &demand, &tiebreak);
        let short: Vec<Vertex> = (0..n as Vertex)
            .filter(|&v| counts[v as usize] < demand[v as usize])
            .collect();
        if short.is_empty() {
            let pentagons: Vec<Pentagon> = miner
                .found
                .iter()
                .zip(&anchors)
                .map(|(c, &a)| Pentagon::new(*c, a).unwrap())
                .collect();
            return Ok(Sponge::from_pentagons(n, &pentagons, cfg.clone()));
        }
        let v = short[0];
        let shortfall = SpongeError::AnchorShortfall {
            vertex: v,
            achieved: counts[v as usize],
            required: demand[v as usize],
        };
        if repairs == cfg.retry_cap {
            return Err(shortfall);
        }
        repairs += 1;
        let mut progress = false;
        for &u in &short {
            let room = cfg.rs_maxdeg.saturating_sub(miner.pdeg[u as usize]) / 2;
            let want = cfg.bundle_target.min(room);
            if want > 0 && miner.bundle(u, want as usize, &allow) > 0 {
                progress = true;
            }
        }
        if !progress {
            return Err(shortfall);
        }
    }
}

/// Chooses an anchor for every pentagon so that as many vertices as possible
/// meet their demand (max-flow), then hands each leftover pentagon to the
/// vertex on it with the smallest surplus.
fn assign_anchors(
    n: usize,
    cycles: &[[Vertex; 5]],
    demand: &[u32],
    tiebreak: &[u64],
) -> (Vec<Vertex>, Vec<u32>) {
    let p = cycles.len();
    let source = 0;
    let sink = 1 + p + n;
    let mut net = FlowNetwork::new(sink + 1);
    let mut arcs = Vec::with_capacity(p);
    for (i, c) in cycles.iter().enumerate() {
        net.add_arc(source, 1 + i, 1);
        arcs.push(c.map(|v| net.add_arc(1 + i, 1 + p + v as usize, 1)));
    }
    for (v, &d) in demand.iter().enumerate() {
        net.add_arc(1 + p + v, sink, d as i64);
    }
    net.max_flow(source, sink);
    let mut counts = vec![0u32; n];
    let mut anchors = vec![Vertex::MAX; p];
    for (i, c) in cycles.iter().enumerate() {
        if let Some(j) = (0..5).find(|&j| net.flow(arcs[i][j]) > 0) {
            anchors[i] = c[j];
            counts[c[j] as usize] += 1;
        }
    }
    for (i, c) in cycles.iter().enumerate() {
        if anchors[i] == Vertex::MAX {
            let a = *c
                .iter()
                .min_by_key(|&&v| {
                    let surplus = counts[v as usize] as i64 - demand[v as usize] as i64;
                    (surplus, tiebreak[v as usize])
                })
                .unwrap();
            anchors[i] = a;
            counts[a as usize] += 1;
        }
    }
    (anchors, counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{cycle, petersen};

    fn pent(c: [Vertex; 5], a: Vertex) -> Pentagon {
        Pentagon::new(c, a).unwrap()
    }

    #[test]
    fn split_invariant() {
        let p = pent([3, 1, 4, 0, 2], 4);
        assert_eq!(p.cycle(), [4, 0, 2, 3, 1]);
        let mut all: Vec<Edge> = p.s_part().into_iter().chain(p.r_part()).collect();
        all.sort_unstable();
        let mut edges = p.edges().to_vec();
        edges.sort_unstable();
        assert_eq!(all, edges);
        assert!(p.r_part().iter().all(|&(u, v)| u != 4 && v != 4));
        assert!(Pentagon::new([0, 1, 2, 3, 3], 0).is_err());
        assert!(Pentagon::new([0, 1, 2, 3, 4], 9).is_err());
    }

    #[test]
    fn bundle_on_single_pentagon() {
        let c5 = cycle(5);
        for v in 0..5 {
            let got = c5_bundle(&c5, &VertexSet::full(5), v, 1).unwrap();
            assert_eq!(got.len(), 1);
            let mut e = got[0].edges().to_vec();
            e.sort_unstable();
            assert_eq!(e, c5.edges().collect::<Vec<_>>());
        }
    }

    #[test]
    fn bundle_on_two_pentagons_sharing_a_vertex() {
        let g = Graph::from_edges(
            9,
            [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (5, 6), (6, 7), (7, 8), (8, 0)],
        )
        .unwrap();
        let got = c5_bundle(&g, &VertexSet::full(9), 0, 2).unwrap();
        assert_eq!(got.len(), 2);
        let mut others: Vec<Vertex> = got.iter().flat_map(|p| p.cycle()[1..].to_vec()).collect();
        others.sort_unstable();
        assert_eq!(others, (1..9).collect::<Vec<_>>());
    }

    #[test]
    fn petersen_bundles_hold_one_pentagon() {
        let p = petersen();
        // exhaustive: every 5-cycle of the Petersen graph, as vertex sets
        let mut fives = Vec::new();
        for mask in 0u32..1024 {
            if mask.count_ones() != 5 {
                continue;
            }
            let x: VertexSet = (0..10).filter(|i| mask >> i & 1 == 1).collect();
            let (h, _) = p.induced(&x).unwrap();
            if h.regular_degree() == Some(2) && h.components().len() == 1 {
                fives.push(x);
            }
        }
        assert_eq!(fives.len(), 12);
        for v in 0..10 {
            let through: Vec<_> = fives.iter().filter(|x| x.contains(v)).collect();
            assert_eq!(through.len(), 6);
            // any two pentagons through v share a neighbour of v
            for a in &through {
                for b in &through {
                    let shared = a.iter().filter(|&u| u != v && b.contains(u)).count();
                    assert!(shared > 0);
                }
            }
            let got = c5_bundle(&p, &VertexSet::full(10), v, 2).unwrap();
            assert_eq!(got.len(), 1);
        }
    }

    #[test]
    fn reduce_examples() {
        let p = pent([0, 1, 2, 3, 4], 0);
        let cfg = SpongeConfig {
            per_vertex_min: 1,
            cover_min: 2,
            phase_edge_factor: 5,
            phase_maxdeg: 2,
            rs_maxdeg: 4,
            bundle_target: 1,
            retry_cap: 1,
        };
        let sp = Sponge::from_pentagons(5, &[p], cfg);
        assert_eq!(sp.reduce(&[0; 5]).unwrap(), sp.s);
        let h = sp.reduce(&[1, 0, 0, 0, 0]).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(1, 2), (3, 4)]);
        assert_eq!(h.degree(0), 0);
        assert!(matches!(
            sp.reduce(&[0, 1, 0, 0, 0]),
            Err(SpongeError::ReductionOutOfRange { vertex: 1, .. })
        ));
        assert!(matches!(sp.reduce(&[0; 4]), Err(SpongeError::ReductionLength { .. })));
    }

    #[test]
    fn isolated_vertex_is_infeasible() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let cfg = SpongeConfig::desk(40.0);
        match build_sponge(&g, &cfg, 1) {
            Err(SpongeError::Stalled { vertex, .. }) => assert_eq!(vertex, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn disjoint_pentagons_cannot_meet_quota() {
        let mut edges = Vec::new();
        for b in 0..4u32 {
            for i in 0..5 {
                edges.push((5 * b + i, 5 * b + (i + 1) % 5));
            }
        }
        let g = Graph::from_edges(20, edges).unwrap();
        let cfg = SpongeConfig {
            per_vertex_min: 1,
            cover_min: 2,
            phase_edge_factor: 5,
            phase_maxdeg: 2,
            rs_maxdeg: 4,
            bundle_target: 1,
            retry_cap: 3,
        };
        match build_sponge(&g, &cfg, 7) {
            Err(SpongeError::AnchorShortfall { achieved, .. }) => assert_eq!(achieved, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn triangle_in_host_is_rejected() {
        let g = crate::graph::generators::complete(3);
        assert_eq!(
            build_sponge(&g, &SpongeConfig::desk(40.0), 0).unwrap_err(),
            SpongeError::NotTriangleFree(1)
        );
    }

    #[test]
    fn config_validation() {
        let mut cfg = SpongeConfig::desk(41.0);
        assert!(cfg.validate().is_ok());
        cfg.rs_maxdeg = cfg.phase_maxdeg;
        assert!(cfg.validate().is_err());
        cfg = SpongeConfig::desk(41.0);
        cfg.bundle_target = 0;
        assert!(cfg.validate().is_err());
    }

    fn alon_subset_sponge(seed: u64) -> (Graph, Sponge) {
        use crate::alon::{alon_generators, induced_cayley};
        let (gens, spec) = alon_generators(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: VertexSet = rand::seq::index::sample(&mut rng, spec.order, 3500)
            .into_iter()
            .map(|i| i as Vertex)
            .collect();
        let g = induced_cayley(spec.order, &gens, &x).unwrap();
        let pn = 56.0 * 3500.0 / 4096.0;
        let sp = build_sponge(&g, &SpongeConfig::desk(pn), seed).unwrap();
        (g, sp)
    }

    #[test]
    fn alon_subset_sponge_passes_audit() {
        let (g, sp) = alon_subset_sponge(1);
        sp.audit(&g).unwrap();
        assert!(sp.collections.iter().all(|c| c.len() >= 2));
        assert!(sp.union().max_degree() <= sp.config.rs_maxdeg);
        assert_eq!(5 * sp.pentagon_count(), sp.r.m() + sp.s.m());
        let mut dump = Vec::new();
        sp.write_dump(&mut dump).unwrap();
        let text = String::from_utf8(dump).unwrap();
        assert_eq!(text.lines().count(), sp.pentagon_count());
        let first: Vec<Vertex> = text.lines().next().unwrap().split(' ').map(|t| t.parse().unwrap()).collect();
        assert_eq!(first.len(), 6);
        assert_eq!(first[0], first[5]);
    }

    #[test]
    fn single_swaps_move_only_the_anchor() {
        let (_, sp) = alon_subset_sponge(2);
        let n = sp.n();
        let base = sp.s.degrees();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let all: Vec<&Pentagon> = sp.pentagons().collect();
        for _ in 0..1000 {
            let p = all[rng.random_range(0..all.len())];
            let swapped = sp
                .s
                .overlay(&Graph::from_edges(n, p.s_part()).unwrap(), crate::graph::OverlayMode::Remove)
                .unwrap()
                .overlay(&Graph::from_edges(n, p.r_part()).unwrap(), crate::graph::OverlayMode::Add)
                .unwrap();
            for v in 0..n as Vertex {
                let expect = if v == p.anchor() { base[v as usize] - 2 } else { base[v as usize] };
                assert_eq!(swapped.degree(v), expect);
            }
        }
    }

    #[test]
    fn reduction_is_monotone() {
        let (_, sp) = alon_subset_sponge(3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let f: Vec<u32> = sp.collections.iter().map(|c| rng.random_range(0..=c.len() as u32)).collect();
            let g: Vec<u32> = sp
                .collections
                .iter()
                .zip(&f)
                .map(|(c, &x)| rng.random_range(x..=c.len() as u32))
                .collect();
            let (hf, hg) = (sp.reduce(&f).unwrap(), sp.reduce(&g).unwrap());
            for v in 0..sp.n() as Vertex {
                assert!(hf.degree(v) >= hg.degree(v));
                assert_eq!(hf.degree(v), sp.s.degree(v) - 2 * f[v as usize]);
            }
            assert!(hf.is_subgraph_of(&sp.union()));
        }
    }
}
