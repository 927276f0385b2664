//! Centralized numeric tolerances.
//!
//! Every comparison threshold used across the crate lives here so that the
//! feasibility, duality, and statistical gates are declared in one place
//! rather than scattered as ad-hoc magic numbers.

/// Mass bookkeeping: type masses must sum to one within this bound.
pub const MASS_SUM: f64 = 1e-12;

/// Pointwise curve/rule comparisons (dominance, cumulative equality).
pub const FEASIBILITY: f64 = 1e-9;

/// Relative duality-gap bound accepted from the LP solver.
pub const LP_GAP: f64 = 1e-7;

/// Incentive-compatibility and individual-rationality residuals of LP
/// outcome rules.
pub const IC_RESIDUAL: f64 = 1e-7;

/// Ex ante allocation of a step mechanism must hit its quantile this tightly.
pub const EX_ANTE: f64 = 1e-7;

/// Slope comparisons on piecewise-linear revenue curves (concavity check,
/// detection of strictly decreasing marginal revenue).
pub const CURVE_SLOPE: f64 = 1e-6;

/// Relative gap in the concave linearity test.
pub const LINEARITY: f64 = 1e-6;

/// Equality of allocation probabilities when forming orderability classes.
pub const CLASS_EQ: f64 = 1e-7;

/// Bisection target for the public-budget closed form.
pub const BUDGET_ROOT: f64 = 1e-12;

/// Residual accepted on the two budget-lottery identities.
pub const BUDGET_IDENTITY: f64 = 1e-10;

/// Asymptotic Kolmogorov-Smirnov critical value at the 1% level is
/// `KS_CRIT_1PCT / sqrt(n)`.
pub const KS_CRIT_1PCT: f64 = 1.6276;

/// Interval-resampling push-forward recomputation must match the target
/// rule this tightly.
pub const RESAMPLE_EXACT: f64 = 1e-9;
