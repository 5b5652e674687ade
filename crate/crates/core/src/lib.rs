//! Positive recurrence classification for semimartingale reflecting
//! Brownian motions (SRBMs) in two and three dimensions.
//!
//! The classifier combines four exact computations on the data `(θ, R)`:
//! the nonsingularity/negativity test on `R⁻¹θ`, boundary-spiral membership
//! with its single-cycle gain, enumeration and categorisation of all LCP
//! solutions, and (in two dimensions) the P-matrix test. Each verdict carries
//! a certificate that can be re-checked independently.
//!
//! Two corroboration tools sit beside it: an exact piecewise-linear fluid path
//! integrator and a Monte Carlo SRBM simulator.
//!
//! All algorithms are generic over [`Scalar`]: [`Rational`] runs them exactly,
//! `f64` runs them with a strictness tolerance of [`FLOAT_TOLERANCE`].

pub mod classifier;
pub mod error;
pub mod fluid;
pub mod index_set;
pub mod lcp;
pub mod matrix;
pub mod normalization;
mod polyhedron;
pub mod scalar;
pub mod sim;
pub mod spiral;

pub use classifier::{classify, classify_2d, necessity_certificate, Basis, Certificate, Decision, Verdict};
pub use error::{Error, Result};
pub use fluid::{face_velocity, fluid_trace, spiral_breakpoints, FluidBudget, FluidPath, FluidVerdict};
pub use index_set::IndexSet;
pub use lcp::{classify_solution, proper_solution, solve_and_classify, solve_lcp, Category, LcpSolution};
pub use matrix::{invert, is_completely_s, is_m_matrix, is_p_matrix, is_s_matrix, Matrix, SCertificate};
pub use normalization::{condition_15, normalize, Condition15, NormalizationRecord, ProblemData};
pub use scalar::{Mode, Rational, Scalar, Sign, FLOAT_TOLERANCE};
pub use sim::{estimate_hitting_time, simulate_path, skorokhod_step, HittingStats, PathTrace, SimConfig};
pub use spiral::{single_cycle_gain, spiral_certificate, spiral_membership, Membership, SpiralReport};
