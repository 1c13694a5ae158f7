use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alon::{AlonSpec, SUPPORTED_K};
use crate::sponge::{SpongeConfig, SpongeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// Asymptotic constants taken literally.
    Paper,
    /// Constants sized for graphs of a few thousand vertices.
    Desk,
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Paper => "paper",
            Profile::Desk => "desk",
        })
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(Profile::Paper),
            "desk" => Ok(Profile::Desk),
            other => Err(format!("unknown profile {other:?} (expected paper|desk)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("n = {0} is too small (need n >= 64)")]
    TooSmall(usize),
    #[error("no supported k has 2^(3k) >= {0}")]
    NoSupportedK(usize),
    #[error("infeasible at n = {n}: {reason}")]
    Infeasible { n: usize, reason: String },
    #[error("unknown parameter {0:?}")]
    UnknownParameter(String),
    #[error("parameter {key}: cannot parse {value:?} as {expected}")]
    BadValue {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error(transparent)]
    Sponge(#[from] SpongeError),
}

/// Everything the synthesis pipeline needs to know before it touches a graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Plan {
    pub n: usize,
    pub profile: Profile,
    pub k: u32,
    #[serde(rename = "N")]
    pub order: usize,
    #[serde(rename = "D")]
    pub degree: usize,
    /// Edge density `D / N`.
    pub p: f64,
    /// Half-width of the accepted degree window around `pn` for `A[X]`.
    pub conc_slack: f64,
    /// Target minimum degree. The desk profile measures it after the sponge
    /// is removed, so it is `None` here.
    pub delta: Option<f64>,
    /// Largest degree the prescribed subgraph may give a vertex outside `W`.
    pub offw_cap: u32,
    pub tree_maxdeg: u32,
    /// When set, the sponge may cost each vertex `v` at most
    /// `d_{A[X]}(v) − keep` degree, where
    /// `keep = min(δ(A[X]) − loss_slack, ⌊pn⌋ − loss_mean)`.
    pub loss_slack: Option<u32>,
    pub loss_mean: u32,
    /// Final degree, when it can be fixed in advance.
    pub d_prime: Option<u32>,
    /// Desk feasibility floor on the expected degree `pn`.
    pub min_pn: f64,
    pub sample_retry_cap: u32,
    /// Whole-pipeline attempts, each with a fresh sample.
    pub retry_cap: u32,
    pub sponge: SpongeConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Count,
    Real,
}

/// A key accepted by [`Plan::set`].
#[derive(Debug, Clone, Copy)]
pub struct Param {
    pub name: &'static str,
    pub kind: ParamKind,
    pub help: &'static str,
}

const fn param(name: &'static str, kind: ParamKind, help: &'static str) -> Param {
    Param { name, kind, help }
}

pub const PARAMETERS: &[Param] = &[
    param("conc_slack", ParamKind::Real, "degree window half-width for the sampled subgraph"),
    param("offw_cap", ParamKind::Count, "max prescribed-subgraph degree outside W"),
    param("tree_maxdeg", ParamKind::Count, "max spanning-tree degree"),
    param("loss_slack", ParamKind::Count, "sponge may lower the minimum degree by at most this"),
    param("loss_mean", ParamKind::Count, "typical degree the sponge may cost a vertex"),
    param("min_pn", ParamKind::Real, "smallest expected degree pn the desk profile accepts"),
    param("sample_retry_cap", ParamKind::Count, "resampling attempts per pipeline attempt"),
    param("retry_cap", ParamKind::Count, "pipeline attempts"),
    param("per_vertex_min", ParamKind::Count, "pentagons each vertex must anchor"),
    param("cover_min", ParamKind::Count, "pentagon-degree every vertex must reach"),
    param("phase_edge_factor", ParamKind::Count, "sponge edge budget per vertex"),
    param("phase_maxdeg", ParamKind::Count, "pentagon-degree cap for joining a bundle"),
    param("rs_maxdeg", ParamKind::Count, "max degree of R ∪ S"),
    param("bundle_target", ParamKind::Count, "pentagons mined per bundle call"),
    param("sponge_retry_cap", ParamKind::Count, "sponge repair rounds"),
];

enum Value {
    Count(u32),
    Real(f64),
}

fn parse_override(key: &str, value: &str) -> Result<Value, PlanError> {
    let spec = PARAMETERS
        .iter()
        .find(|p| p.name == key)
        .ok_or_else(|| PlanError::UnknownParameter(key.to_string()))?;
    let bad = |expected| PlanError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        expected,
    };
    match spec.kind {
        ParamKind::Real => {
            let x: f64 = value.parse().map_err(|_| bad("a real number"))?;
            if !x.is_finite() || x < 0.0 {
                return Err(bad("a finite non-negative real"));
            }
            Ok(Value::Real(x))
        }
        ParamKind::Count => value
            .parse()
            .map(Value::Count)
            .map_err(|_| bad("a non-negative integer")),
    }
}

/// Checks that `key` names a registered parameter and `value` parses as its
/// type, without needing a plan to apply it to.
pub fn check_override(key: &str, value: &str) -> Result<(), PlanError> {
    parse_override(key, value).map(|_| ())
}

/// Smallest `k ∉ 3ℤ` with `n ≤ 2^{3k}`.
pub fn choose_k(n: usize) -> Option<u32> {
    (1u32..)
        .filter(|k| k % 3 != 0)
        .take_while(|&k| 3 * k < usize::BITS)
        .find(|&k| n <= 1usize << (3 * k))
}

pub fn plan(n: usize, profile: Profile) -> Result<Plan, PlanError> {
    plan_with(n, profile, &[])
}

/// Builds the plan for `n`, applies `key=value` overrides in order, then
/// checks feasibility.
pub fn plan_with(
    n: usize,
    profile: Profile,
    overrides: &[(String, String)],
) -> Result<Plan, PlanError> {
    if n < 64 {
        return Err(PlanError::TooSmall(n));
    }
    let k = choose_k(n).ok_or(PlanError::NoSupportedK(n))?;
    if !SUPPORTED_K.contains(&k) {
        return Err(PlanError::NoSupportedK(n));
    }
    let spec = AlonSpec::new(k).expect("k chosen off multiples of 3");
    let p = spec.degree as f64 / spec.order as f64;
    let pn = p * n as f64;
    let ln = (n as f64).ln();
    let mut plan = match profile {
        Profile::Paper => {
            let cube = (n as f64).cbrt() * ln.sqrt();
            let offw = ln.powi(10).min(u32::MAX as f64) as u32;
            Plan {
                n,
                profile,
                k,
                order: spec.order,
                degree: spec.degree,
                p,
                conc_slack: 10.0 * cube,
                delta: Some(pn - 11.0 * cube),
                offw_cap: offw,
                tree_maxdeg: 10,
                loss_slack: None,
                loss_mean: 0,
                d_prime: None,
                min_pn: 0.0,
                sample_retry_cap: 50,
                retry_cap: 50,
                sponge: SpongeConfig::paper(n, pn),
            }
        }
        Profile::Desk => Plan {
            n,
            profile,
            k,
            order: spec.order,
            degree: spec.degree,
            p,
            conc_slack: 3.0 * (p * (1.0 - p) * n as f64 * ln).sqrt(),
            delta: None,
            offw_cap: 3,
            tree_maxdeg: 10,
            loss_slack: Some(2),
            loss_mean: 14,
            d_prime: None,
            min_pn: 41.0,
            sample_retry_cap: 50,
            retry_cap: 50,
            sponge: SpongeConfig::desk(pn),
        },
    };
    for (key, value) in overrides {
        plan.set(key, value)?;
    }
    plan.finish()?;
    Ok(plan)
}

impl Plan {
    /// Expected degree `pn` of the sampled subgraph.
    pub fn pn(&self) -> f64 {
        self.p * self.n as f64
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), PlanError> {
        let x = match parse_override(key, value)? {
            Value::Real(x) => {
                match key {
                    "conc_slack" => self.conc_slack = x,
                    "min_pn" => self.min_pn = x,
                    _ => unreachable!(),
                }
                return Ok(());
            }
            Value::Count(x) => x,
        };
        let s = &mut self.sponge;
        match key {
            "offw_cap" => self.offw_cap = x,
            "tree_maxdeg" => self.tree_maxdeg = x,
            "loss_slack" => self.loss_slack = Some(x),
            "loss_mean" => self.loss_mean = x,
            "sample_retry_cap" => self.sample_retry_cap = x,
            "retry_cap" => self.retry_cap = x,
            "per_vertex_min" => s.per_vertex_min = x,
            "cover_min" => s.cover_min = x,
            "phase_edge_factor" => s.phase_edge_factor = x,
            "phase_maxdeg" => s.phase_maxdeg = x,
            "rs_maxdeg" => s.rs_maxdeg = x,
            "bundle_target" => s.bundle_target = x,
            "sponge_retry_cap" => s.retry_cap = x,
            _ => unreachable!(),
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<(), PlanError> {
        let infeasible = |reason: String| PlanError::Infeasible { n: self.n, reason };
        if self.tree_maxdeg < 2 {
            return Err(infeasible(format!("tree_maxdeg {} < 2", self.tree_maxdeg)));
        }
        if self.offw_cap == 0 {
            return Err(infeasible("offw_cap must be positive".into()));
        }
        if self.retry_cap == 0 || self.sample_retry_cap == 0 {
            return Err(infeasible("retry caps must be positive".into()));
        }
        self.sponge.validate()?;
        match self.profile {
            Profile::Paper => {
                let delta = self.delta.unwrap();
                let room = delta - self.offw_cap as f64 - self.tree_maxdeg as f64;
                // largest even integer strictly below `room`
                let mut d = room.ceil() - 1.0;
                if d.rem_euclid(2.0) != 0.0 {
                    d -= 1.0;
                }
                if d <= 0.0 {
                    return Err(infeasible(format!(
                        "d' <= 0 (delta {delta:.1} cannot absorb offw_cap {} and tree_maxdeg {})",
                        self.offw_cap, self.tree_maxdeg
                    )));
                }
                self.d_prime = Some(d as u32);
            }
            Profile::Desk => {
                if self.pn() < self.min_pn {
                    return Err(infeasible(format!(
                        "expected degree pn = {:.2} below min_pn = {}",
                        self.pn(),
                        self.min_pn
                    )));
                }
            }
        }
        Ok(())
    }
}
