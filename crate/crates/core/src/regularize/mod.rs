//! From the Alon base graph to an exactly regular triangle-free graph on
//! `n` vertices.
//!
//! The pipeline samples `X`, carves a [`Sponge`](crate::sponge::Sponge) out
//! of `A[X]`, trims surplus degree, removes a prescribed-degree subgraph and
//! a parity subforest, and finally lets the sponge absorb the remaining
//! (even) differences. Every edge of the output is an edge of `A[X]`, so the
//! result stays triangle-free and its eigenvalue is controlled by that of the
//! base plus the largest degree of what was deleted.

mod pipeline;
mod plan;
mod stages;

pub use pipeline::{
    synthesize, Certificate, LambdaBase, LambdaFinal, Measured, Seeds, Stage, StageRecord,
    StageTiming, SynthError, Synthesis, Timing, LAMBDA_TOL,
};
pub use plan::{check_override, choose_k, plan, plan_with, Param, ParamKind, Plan, PlanError, Profile, PARAMETERS};
pub use stages::{
    bounded_spanning_forest, bounded_spanning_tree, parity_subforest, parity_subgraph,
    prescribed_subgraph, sample_subset, trim_excess, CayleySource, InducedSource, Sample,
    StageError, Trim,
};
