// `!(x > bound)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod cliques;
pub mod decompose;
pub mod error;
pub mod eval;
pub mod graph;
mod linalg;
pub mod netstats;
pub mod seed;
pub mod synth;
