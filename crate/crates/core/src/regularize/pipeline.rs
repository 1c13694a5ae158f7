use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::stages::{
    bounded_spanning_forest, parity_subforest, prescribed_subgraph, sample_subset, trim_excess,
    CayleySource,
};
use super::{Plan, PlanError, Profile};
use crate::alon::{alon_generators, cayley_spectrum, AlonError};
use crate::graph::{Graph, OverlayMode, Vertex};
use crate::spectral::{lambda, Method, SpectralError, SpectralOptions};
use crate::sponge::build_sponge_within;

/// Numerical slack allowed on the eigenvalue chain.
pub const LAMBDA_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Sample,
    Sponge,
    Trim,
    Prescribed,
    SpanningTree,
    Parity,
    Reduce,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Sample => "sample",
            Stage::Sponge => "sponge",
            Stage::Trim => "trim",
            Stage::Prescribed => "prescribed",
            Stage::SpanningTree => "spanning_tree",
            Stage::Parity => "parity",
            Stage::Reduce => "reduce",
        })
    }
}

#[derive(Debug, Error)]
pub enum SynthError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Base(#[from] AlonError),
    #[error("stage {stage} infeasible after {attempts} attempts: {detail}")]
    Infeasible {
        stage: Stage,
        attempts: u32,
        detail: String,
    },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    /// A structural invariant failed on an otherwise successful run.
    #[error("certification failed: {0}")]
    Certification(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub edges_removed: usize,
    pub edges_added: usize,
    /// Largest degree change any single vertex saw in this stage.
    pub max_degree_delta: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageTiming {
    pub stage: Stage,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub total_ms: u64,
    pub stages: Vec<StageTiming>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaBase {
    pub computed: f64,
    pub bound: f64,
    pub method: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaFinal {
    pub computed: f64,
    /// `lambda_base.computed + max_deleted_degree`.
    pub bound: f64,
    pub method: Method,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Seeds {
    pub seed: u64,
    /// 1-based pipeline attempt that succeeded.
    pub attempt: u32,
    pub sample_seed: u64,
    pub sponge_seed: u64,
    pub sample_attempts: u32,
}

/// Quantities observed along the way, for reporting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measured {
    pub delta: u32,
    pub pentagons: usize,
    pub min_anchored: usize,
    pub sponge_max_degree: u32,
    pub trim_max_loss: u32,
    pub offw_cap_used: u32,
    pub tree_max_degree: u32,
    pub max_reduction: u32,
    /// `d′ / n^{2/3}`.
    pub degree_ratio: f64,
    /// `λ′ / sqrt(d′ ln n)`.
    pub lambda_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub n: usize,
    pub d_prime: u32,
    pub k: u32,
    #[serde(rename = "N")]
    pub order: usize,
    #[serde(rename = "D")]
    pub degree: usize,
    pub lambda_base: LambdaBase,
    pub max_deleted_degree: u32,
    pub lambda_final: LambdaFinal,
    pub triangle_count: u64,
    pub regular: bool,
    pub seeds: Seeds,
    pub profile: Profile,
    pub plan: Plan,
    pub measured: Measured,
    pub stage_log: Vec<StageRecord>,
    /// Output vertex `i` is vertex `base_vertices[i]` of the base graph.
    pub base_vertices: Vec<Vertex>,
    pub timing: Timing,
}

impl Certificate {
    /// The certificate as JSON with the `timing` object removed, which is the
    /// part that must be reproducible.
    pub fn deterministic_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("certificate serialises");
        v.as_object_mut().unwrap().remove("timing");
        v
    }
}

#[derive(Debug, Clone)]
pub struct Synthesis {
    pub graph: Graph,
    pub certificate: Certificate,
}

fn record(stage: Stage, before: &Graph, removed: &Graph, added: &Graph) -> StageRecord {
    let max_degree_delta = (0..before.n() as Vertex)
        .map(|v| removed.degree(v).abs_diff(added.degree(v)))
        .max()
        .unwrap_or(0);
    StageRecord {
        stage,
        edges_removed: removed.m(),
        edges_added: added.m(),
        max_degree_delta,
    }
}

struct Clock {
    start: Instant,
    last: Instant,
    stages: Vec<StageTiming>,
}

impl Clock {
    fn new() -> Self {
        let now = Instant::now();
        Clock {
            start: now,
            last: now,
            stages: Vec::new(),
        }
    }

    fn lap(&mut self, stage: Stage) {
        let now = Instant::now();
        self.stages.push(StageTiming {
            stage,
            wall_ms: (now - self.last).as_millis() as u64,
        });
        self.last = now;
    }

    fn finish(self) -> Timing {
        Timing {
            total_ms: self.start.elapsed().as_millis() as u64,
            stages: self.stages,
        }
    }
}

/// Output of one successful attempt, before certification.
struct Attempt {
    host: Graph,
    graph: Graph,
    d_prime: u32,
    log: Vec<StageRecord>,
    measured: Measured,
    sample_attempts: u32,
    base_vertices: Vec<Vertex>,
}

struct Failure {
    stage: Stage,
    detail: String,
}

fn fail<E: fmt::Display>(stage: Stage) -> impl Fn(E) -> Failure {
    move |e| Failure {
        stage,
        detail: e.to_string(),
    }
}

fn attempt(
    base: &CayleySource,
    plan: &Plan,
    sample_seed: u64,
    sponge_seed: u64,
    clock: &mut Clock,
) -> Result<Attempt, Failure> {
    let sample = sample_subset(base, plan, sample_seed).map_err(fail(Stage::Sample))?;
    let g = sample.graph;
    let n = g.n();
    let empty = Graph::empty(n);
    let mut log = vec![record(Stage::Sample, &g, &empty, &g)];
    clock.lap(Stage::Sample);

    let budget: Option<Vec<u32>> = plan.loss_slack.map(|slack| {
        let keep = g
            .min_degree()
            .saturating_sub(slack)
            .min((plan.pn().floor() as u32).saturating_sub(plan.loss_mean));
        g.degrees().into_iter().map(|d| d - keep).collect()
    });
    let sp = build_sponge_within(&g, &plan.sponge, sponge_seed, budget.as_deref())
        .map_err(fail(Stage::Sponge))?;
    let rs = sp.union();
    let g0 = g.difference(&rs);
    log.push(record(Stage::Sponge, &g, &rs, &empty));
    clock.lap(Stage::Sponge);

    let delta = (0..n as Vertex)
        .map(|v| g0.degree(v) + sp.s.degree(v))
        .min()
        .unwrap_or(0);
    let trim = trim_excess(&g0, &sp.s, delta).map_err(fail(Stage::Trim))?;
    let trimmed = g0.difference(&trim.g1);
    log.push(record(Stage::Trim, &g0, &trimmed, &empty));
    clock.lap(Stage::Trim);

    let mut found = None;
    let mut last_err = None;
    for cap in 1..=plan.offw_cap {
        match prescribed_subgraph(&trim.g1, &trim.w, &trim.h, cap) {
            Ok(f) => {
                found = Some((cap, f));
                break;
            }
            Err(e) => last_err = Some(e),
        }
    }
    let (cap_used, f) = found.ok_or_else(|| fail(Stage::Prescribed)(last_err.unwrap()))?;
    let g2 = trim.g1.difference(&f);
    log.push(record(Stage::Prescribed, &trim.g1, &f, &empty));
    clock.lap(Stage::Prescribed);

    let tree = bounded_spanning_forest(&g2, plan.tree_maxdeg).map_err(fail(Stage::SpanningTree))?;
    log.push(record(Stage::SpanningTree, &g2, &empty, &empty));
    clock.lap(Stage::SpanningTree);

    let target: Vec<bool> = (0..n as Vertex)
        .map(|v| (g2.degree(v) + sp.s.degree(v)) % 2 == 1)
        .collect();
    let t_prime = parity_subforest(&tree, &target).map_err(fail(Stage::Parity))?;
    let g_star = g2.difference(&t_prime);
    log.push(record(Stage::Parity, &g2, &t_prime, &empty));
    clock.lap(Stage::Parity);

    let dstar: Vec<u32> = (0..n as Vertex)
        .map(|v| g_star.degree(v) + sp.s.degree(v))
        .collect();
    let low = dstar.iter().copied().min().unwrap_or(0);
    let d_prime = low - low % 2;
    if d_prime == 0 {
        return Err(Failure {
            stage: Stage::Reduce,
            detail: "no room left for a positive even degree".into(),
        });
    }
    let f_red: Vec<u32> = dstar.iter().map(|&d| (d - d_prime) / 2).collect();
    let h = sp.reduce(&f_red).map_err(fail(Stage::Reduce))?;
    let graph = g_star
        .overlay(&h, OverlayMode::Add)
        .map_err(fail(Stage::Reduce))?;
    let s_to_h = sp.s.difference(&h);
    log.push(record(Stage::Reduce, &g_star, &s_to_h, &h.difference(&sp.s)));
    clock.lap(Stage::Reduce);

    // Edge ledger: recompute the output by set algebra from the pieces.
    let expected = g
        .difference(&rs)
        .difference(&trimmed)
        .difference(&f)
        .difference(&t_prime)
        .union(&h);
    let ledger_ok = graph == expected
        && h.is_subgraph_of(&rs)
        && g_star.intersection(&rs).m() == 0
        && graph.is_subgraph_of(&g);
    if !ledger_ok {
        return Err(Failure {
            stage: Stage::Reduce,
            detail: "edge ledger mismatch".into(),
        });
    }

    let measured = Measured {
        delta,
        pentagons: sp.pentagon_count(),
        min_anchored: sp.collections.iter().map(Vec::len).min().unwrap_or(0),
        sponge_max_degree: rs.max_degree(),
        trim_max_loss: trimmed.max_degree(),
        offw_cap_used: cap_used,
        tree_max_degree: tree.max_degree(),
        max_reduction: f_red.iter().copied().max().unwrap_or(0),
        degree_ratio: 0.0,
        lambda_ratio: 0.0,
    };
    Ok(Attempt {
        host: g,
        graph,
        d_prime,
        log,
        measured,
        sample_attempts: sample.attempts,
        base_vertices: sample.x.as_slice().to_vec(),
    })
}

/// Runs the whole pipeline for `plan` and certifies the result.
///
/// Each attempt draws a fresh sample and sponge seed from `seed`; a stage
/// failure moves on to the next attempt, up to `plan.retry_cap`.
pub fn synthesize(plan: &Plan, seed: u64, threads: usize) -> Result<Synthesis, SynthError> {
    let mut clock = Clock::new();
    let (generators, spec) = alon_generators(plan.k)?;
    let base_spectrum = cayley_spectrum(spec.order, &generators);
    let base = CayleySource {
        order: spec.order,
        generators,
    };
    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for attempt_no in 1..=plan.retry_cap {
        let sample_seed: u64 = seeder.random();
        let sponge_seed: u64 = seeder.random();
        clock.stages.clear();
        let run = match attempt(&base, plan, sample_seed, sponge_seed, &mut clock) {
            Ok(run) => run,
            Err(f) => {
                last = Some(f);
                continue;
            }
        };
        let Attempt {
            host,
            graph,
            d_prime,
            log,
            mut measured,
            sample_attempts,
            base_vertices,
        } = run;

        let regular = graph.regular_degree() == Some(d_prime);
        let triangle_count = graph.triangle_count();
        let max_deleted_degree = host.difference(&graph).max_degree();
        let report = lambda(
            &graph,
            &SpectralOptions {
                tol: 1e-9,
                threads,
                ..SpectralOptions::default()
            },
        )?;
        let bound = base_spectrum.lambda + max_deleted_degree as f64;
        let n = plan.n as f64;
        measured.degree_ratio = d_prime as f64 / n.powf(2.0 / 3.0);
        measured.lambda_ratio = report.lambda / (d_prime as f64 * n.ln()).sqrt();
        let certificate = Certificate {
            n: plan.n,
            d_prime,
            k: plan.k,
            order: plan.order,
            degree: plan.degree,
            lambda_base: LambdaBase {
                computed: base_spectrum.lambda,
                bound: spec.lambda_bound,
                method: "character-sum",
            },
            max_deleted_degree,
            lambda_final: LambdaFinal {
                computed: report.lambda,
                bound,
                method: report.method,
                residual: report.residual,
                iterations: report.iterations,
            },
            triangle_count,
            regular,
            seeds: Seeds {
                seed,
                attempt: attempt_no,
                sample_seed,
                sponge_seed,
                sample_attempts,
            },
            profile: plan.profile,
            plan: plan.clone(),
            measured,
            stage_log: log,
            base_vertices,
            timing: Timing {
                total_ms: 0,
                stages: Vec::new(),
            },
        };
        if !regular {
            return Err(SynthError::Certification(format!("output is not {d_prime}-regular")));
        }
        if triangle_count != 0 {
            return Err(SynthError::Certification(format!(
                "output has {triangle_count} triangles"
            )));
        }
        if report.lambda > bound + LAMBDA_TOL {
            return Err(SynthError::Certification(format!(
                "lambda {} exceeds {} + {}",
                report.lambda, base_spectrum.lambda, max_deleted_degree
            )));
        }
        let certificate = Certificate {
            timing: clock.finish(),
            ..certificate
        };
        return Ok(Synthesis { graph, certificate });
    }
    let last = last.expect("retry_cap is positive");
    Err(SynthError::Infeasible {
        stage: last.stage,
        attempts: plan.retry_cap,
        detail: last.detail,
    })
}
