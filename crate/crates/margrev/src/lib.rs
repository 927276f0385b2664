//! Revenue curves and marginal-revenue mechanisms for agents with general
//! (multi-dimensional, non-linear, budgeted) preferences.
//!
//! The crate solves constrained lottery pricing for a single finite-type
//! agent by linear programming, builds the agent's concave revenue curve,
//! classifies the agent (revenue linearity, orderability, step
//! monotonicity), and assembles the matching multi-agent marginal-revenue
//! mechanism for service-constrained environments. Brute-force oracles in
//! [`verify`] check optimality and approximation claims at desk scale.

pub mod catalog;
pub mod classifier;
pub mod envs;
pub mod lp;
pub mod mech;
pub mod model;
pub mod quantile;
pub mod rng;
pub mod single_agent;
pub mod tol;
pub mod verify;

pub use model::{AgentModel, AllocationRule, InterimOutcomeRule, OutcomeRecord, RevenueCurve};
pub use single_agent::{PreparedAgent, StepMechanism};
