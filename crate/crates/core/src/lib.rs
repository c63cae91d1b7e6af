//! Modeling, analysis, and solving toolkit for constrained QUBO problems,
//! with builders for two combinatorial use cases: reaction-network pathway
//! analysis and mRNA codon selection.
//!
//! The pieces fit together as a pipeline:
//!
//! * [`qubo`] — sparse constrained QUBO models, energy evaluation,
//!   incremental flip deltas, and penalty embedding;
//! * [`metrics`] — structure metrics (size, density, interconnectivity,
//!   rank-1 analysis) over a model;
//! * [`encodings`] — unary and log integer-to-binary encodings;
//! * [`crn`] — reaction networks with integer-program and binarized QUBO
//!   formulations plus an artificial network generator;
//! * [`mrna`] — codon-selection problems in constrained QUBO, penalty
//!   embedded QUBO, MIP, and CP formulations;
//! * [`solvers`] — exact references (brute force, codon DP, integer
//!   enumeration) and heuristics (simulated annealing, local-field sweep
//!   annealing with parallel tempering, steepest descent);
//! * [`bench`] — solver-by-instance benchmark harness with cost and
//!   time-to-solution aggregation and scaling plots.

pub mod bench;
pub mod crn;
pub mod encodings;
pub mod error;
pub mod metrics;
pub mod mip;
pub mod mrna;
pub mod qubo;
pub mod solvers;

pub use error::{Error, Result};
pub use qubo::{
    Assignment, Constraint, ConstraintSense, FeasibilityReport, MultiplierRule, QuboModel,
};
pub use solvers::{AnnealSchedule, SolveResult, Solution};
