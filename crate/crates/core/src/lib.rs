//! Certified triangle-free regular pseudorandom graphs.

pub mod alon;
pub mod cli;
pub mod flow;
pub mod gf2k;
pub mod graph;
pub mod regularize;
pub mod spectral;
pub mod sponge;
