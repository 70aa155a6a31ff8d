//! Asymmetric Colonel Blotto games `ACB(X_A, X_B, n)`.
//!
//! Two players split budgets `X_A` and `X_B` over `n` battlefields with
//! nondecreasing allocations; each battlefield goes to the larger allocation
//! and ties split it. This crate evaluates payoffs exactly, builds the known
//! closed-form equilibria, computes exact best responses against finite mixed
//! strategies and solves grid discretizations as matrix games.
//!
//! - [`game`]: feasibility and payoffs
//! - [`analytic`]: the `ACB(1, 1, 3)` marginals and triangle-family sampler
//! - [`closed_form`]: `W₂(t)`, the known pieces of `W₃(t)` and their equilibria
//! - [`best_response`]: exact best-response oracle and exploitability
//! - [`discrete`]: grid discretization, exact simplex and fictitious play
//! - [`harness`]: per-result verification reports and plot data

pub mod analytic;
pub mod best_response;
pub mod closed_form;
pub mod discrete;
pub mod error;
pub mod game;
pub mod harness;
pub mod rational;

pub use analytic::{MarginalCdf, TriangleFamilySpec};
pub use best_response::{BestResponseResult, Relation};
pub use closed_form::{EquilibriumConstruction, ValueAnswer, ValueKind, W3Equilibrium};
pub use discrete::{DiscreteMatrixGame, SolveMethod, SolveReport};
pub use error::{Error, Result};
pub use game::{Allocation, FiniteMixedStrategy, GameSpec};
pub use harness::{Check, VerificationReport};
pub use rational::Rational;
