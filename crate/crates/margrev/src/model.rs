//! Domain types shared by every other module: agents, outcomes, allocation
//! rules on quantile space, and piecewise-linear revenue curves.
//!
//! An allocation rule is a nonincreasing step function on [0,1]. Piece `k`
//! covers the half-open interval `(b[k-1], b[k]]` (the first piece also
//! contains 0) and the final breakpoint is always 1. A rule therefore stores
//! parallel `breakpoints` / `values` vectors of equal length.

use serde::{Deserialize, Serialize};

use crate::tol;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("agent validation failed: {0}")]
    Agent(String),
    #[error("allocation rule invalid: {0}")]
    Rule(String),
    #[error("revenue curve invalid: {0}")]
    Curve(String),
    #[error("weights must sum to 1 (got {0})")]
    WeightSum(f64),
    #[error("outcome-rule row {0} does not sum to 1")]
    RowSum(usize),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// One entry of an agent's outcome menu: a service flag and a payment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub service: bool,
    pub payment: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TypeRecord {
    pub mass: f64,
    /// Utility of this type for each outcome in the menu, menu order.
    pub utilities: Vec<f64>,
}

/// Finite single-agent model: type masses, outcome menu, and the utility
/// table over (type, outcome) pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgentModel {
    #[serde(default)]
    pub id: usize,
    pub types: Vec<TypeRecord>,
    pub outcomes: Vec<OutcomeRecord>,
    /// Declared atom count; every type mass is an integer multiple of `1/atoms`.
    #[serde(default)]
    pub atoms: usize,
    /// When set, the ex ante allocation constraint is relaxed to an upper
    /// bound and revenue curves become nondecreasing.
    #[serde(default)]
    pub downward_closed: bool,
}

impl AgentModel {
    pub fn new(
        types: Vec<TypeRecord>,
        outcomes: Vec<OutcomeRecord>,
        downward_closed: bool,
    ) -> Result<Self, ModelError> {
        let mut agent = AgentModel {
            id: 0,
            types,
            outcomes,
            atoms: 0,
            downward_closed,
        };
        agent.atoms = infer_atoms(&agent.types)?;
        agent.validate()?;
        Ok(agent)
    }

    pub fn n_types(&self) -> usize {
        self.types.len()
    }

    pub fn n_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn utility(&self, type_idx: usize, outcome_idx: usize) -> f64 {
        self.types[type_idx].utilities[outcome_idx]
    }

    /// Number of equal-mass atoms occupied by each type.
    pub fn atoms_of(&self, type_idx: usize) -> usize {
        (self.types[type_idx].mass * self.atoms as f64).round() as usize
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.types.is_empty() {
            return Err(ModelError::Agent("no types".into()));
        }
        if self.outcomes.is_empty() {
            return Err(ModelError::Agent("no outcomes".into()));
        }
        let mut sum = 0.0;
        for (i, t) in self.types.iter().enumerate() {
            if !(t.mass > 0.0) {
                return Err(ModelError::Agent(format!("type {i} has nonpositive mass")));
            }
            if t.utilities.len() != self.outcomes.len() {
                return Err(ModelError::Agent(format!(
                    "type {i} utility row has length {} (menu has {})",
                    t.utilities.len(),
                    self.outcomes.len()
                )));
            }
            if t.utilities.iter().any(|u| !u.is_finite()) {
                return Err(ModelError::Agent(format!("type {i} has non-finite utility")));
            }
            sum += t.mass;
        }
        if (sum - 1.0).abs() > tol::MASS_SUM {
            return Err(ModelError::Agent(format!("masses sum to {sum}")));
        }
        if self
            .outcomes
            .iter()
            .any(|w| !w.payment.is_finite())
        {
            return Err(ModelError::Agent("non-finite payment".into()));
        }
        if !self
            .outcomes
            .iter()
            .any(|w| !w.service && w.payment == 0.0)
        {
            return Err(ModelError::Agent(
                "menu needs a zero-payment non-service outcome".into(),
            ));
        }
        if self.atoms == 0 {
            return Err(ModelError::Agent("atom count not set".into()));
        }
        let m = self.atoms as f64;
        for (i, t) in self.types.iter().enumerate() {
            let k = t.mass * m;
            if (k - k.round()).abs() > 1e-6 || k.round() < 1.0 {
                return Err(ModelError::Agent(format!(
                    "type {i} mass {} is not a multiple of 1/{}",
                    t.mass, self.atoms
                )));
            }
        }
        Ok(())
    }

    /// Zero-payment non-service outcome, used as the null branch of
    /// conditional draws.
    pub fn null_outcome(&self) -> usize {
        self.outcomes
            .iter()
            .position(|w| !w.service && w.payment == 0.0)
            .expect("validated menu has a null outcome")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let doc: AgentDoc = serde_json::from_str(text)?;
        doc.into_agent()
    }

    pub fn to_json(&self) -> String {
        let doc = AgentDoc {
            schema: AGENT_SCHEMA.to_string(),
            types: self.types.clone(),
            outcomes: self.outcomes.clone(),
            atoms: Some(self.atoms),
            downward_closed: self.downward_closed,
            id: self.id,
        };
        serde_json::to_string_pretty(&doc).expect("agent serializes")
    }
}

pub const AGENT_SCHEMA: &str = "margrev/agent/v1";

#[derive(Serialize, Deserialize)]
struct AgentDoc {
    #[serde(default)]
    schema: String,
    types: Vec<TypeRecord>,
    outcomes: Vec<OutcomeRecord>,
    #[serde(default)]
    atoms: Option<usize>,
    #[serde(default)]
    downward_closed: bool,
    #[serde(default)]
    id: usize,
}

impl AgentDoc {
    fn into_agent(self) -> Result<AgentModel, ModelError> {
        if !self.schema.is_empty() && self.schema != AGENT_SCHEMA {
            return Err(ModelError::Agent(format!(
                "unsupported schema {:?}",
                self.schema
            )));
        }
        let atoms = match self.atoms {
            Some(m) => m,
            None => infer_atoms(&self.types)?,
        };
        let agent = AgentModel {
            id: self.id,
            types: self.types,
            outcomes: self.outcomes,
            atoms,
            downward_closed: self.downward_closed,
        };
        agent.validate()?;
        Ok(agent)
    }
}

/// Smallest M <= 10_000 such that every mass is an integer multiple of 1/M.
fn infer_atoms(types: &[TypeRecord]) -> Result<usize, ModelError> {
    for m in 1..=10_000usize {
        let ok = types.iter().all(|t| {
            let k = t.mass * m as f64;
            (k - k.round()).abs() < 1e-9 && k.round() >= 1.0
        });
        if ok {
            return Ok(m);
        }
    }
    Err(ModelError::Agent(
        "could not infer an atom count; declare \"atoms\" explicitly".into(),
    ))
}

/// Nonincreasing step function on quantile space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationRule {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl AllocationRule {
    /// Builds a rule from raw pieces and canonicalizes it (merges equal
    /// neighbours, forces the domain to end at 1).
    pub fn from_pieces(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self, ModelError> {
        if breakpoints.len() != values.len() || breakpoints.is_empty() {
            return Err(ModelError::Rule("breakpoint/value length mismatch".into()));
        }
        let mut prev = 0.0;
        for (&b, &v) in breakpoints.iter().zip(&values) {
            if !(b > prev) || b > 1.0 + 1e-12 {
                return Err(ModelError::Rule(format!(
                    "breakpoints must increase strictly in (0,1], got {b} after {prev}"
                )));
            }
            if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                return Err(ModelError::Rule(format!("value {v} outside [0,1]")));
            }
            prev = b;
        }
        for w in values.windows(2) {
            if w[1] > w[0] + 1e-12 {
                return Err(ModelError::Rule("values must be nonincreasing".into()));
            }
        }
        let mut rule = AllocationRule {
            breakpoints,
            values,
        };
        rule.canonicalize();
        Ok(rule)
    }

    fn canonicalize(&mut self) {
        if let Some(last) = self.breakpoints.last_mut() {
            if (*last - 1.0).abs() <= 1e-12 {
                *last = 1.0;
            }
        }
        if *self.breakpoints.last().unwrap() < 1.0 {
            self.breakpoints.push(1.0);
            self.values.push(0.0);
        }
        let mut bp = Vec::with_capacity(self.breakpoints.len());
        let mut vals: Vec<f64> = Vec::with_capacity(self.values.len());
        for (&b, &v) in self.breakpoints.iter().zip(&self.values) {
            let v = v.clamp(0.0, 1.0);
            if let Some(&last) = vals.last() {
                if (last - v).abs() <= 1e-13 {
                    *bp.last_mut().unwrap() = b;
                    continue;
                }
            }
            bp.push(b);
            vals.push(v);
        }
        self.breakpoints = bp;
        self.values = vals;
    }

    /// The q-step constraint: 1 on [0,q], 0 after.
    pub fn step(q: f64) -> Self {
        assert!((0.0..=1.0).contains(&q), "step quantile {q} outside [0,1]");
        if q <= 0.0 {
            AllocationRule {
                breakpoints: vec![1.0],
                values: vec![0.0],
            }
        } else if q >= 1.0 {
            AllocationRule {
                breakpoints: vec![1.0],
                values: vec![1.0],
            }
        } else {
            AllocationRule {
                breakpoints: vec![q, 1.0],
                values: vec![1.0, 0.0],
            }
        }
    }

    pub fn zero() -> Self {
        Self::step(0.0)
    }

    pub fn constant(v: f64) -> Self {
        AllocationRule {
            breakpoints: vec![1.0],
            values: vec![v.clamp(0.0, 1.0)],
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_pieces(&self) -> usize {
        self.values.len()
    }

    /// Value at quantile q; pieces are right-closed, so `value_at(b[k])`
    /// is the value of piece k.
    pub fn value_at(&self, q: f64) -> f64 {
        if q <= 0.0 {
            return self.values[0];
        }
        match self
            .breakpoints
            .binary_search_by(|b| b.partial_cmp(&q).unwrap())
        {
            Ok(k) => self.values[k],
            Err(k) => self.values[k.min(self.values.len() - 1)],
        }
    }

    /// Cumulative allocation Y(q) = integral from 0 to q of the rule.
    pub fn cumulative_at(&self, q: f64) -> f64 {
        let q = q.clamp(0.0, 1.0);
        let mut acc = 0.0;
        let mut left = 0.0;
        for (&b, &v) in self.breakpoints.iter().zip(&self.values) {
            if q <= b {
                return acc + (q - left) * v;
            }
            acc += (b - left) * v;
            left = b;
        }
        acc
    }

    /// Total ex ante mass Y(1).
    pub fn total(&self) -> f64 {
        self.cumulative_at(1.0)
    }

    /// The full cumulative curve as a piecewise-linear function.
    pub fn cumulative(&self) -> PiecewiseLinear {
        let mut qs = Vec::with_capacity(self.breakpoints.len() + 1);
        let mut ys = Vec::with_capacity(self.breakpoints.len() + 1);
        qs.push(0.0);
        ys.push(0.0);
        let mut acc = 0.0;
        let mut left = 0.0;
        for (&b, &v) in self.breakpoints.iter().zip(&self.values) {
            acc += (b - left) * v;
            qs.push(b);
            ys.push(acc);
            left = b;
        }
        PiecewiseLinear { qs, ys }
    }

    /// Iterates pieces as (left, right, value).
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let lefts = std::iter::once(0.0).chain(self.breakpoints.iter().copied());
        lefts
            .zip(self.breakpoints.iter().copied())
            .zip(self.values.iter().copied())
            .map(|((l, r), v)| (l, r, v))
    }

    /// Writes the rule as `q,value` CSV rows (piece right endpoints).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,value\n");
        for (_, r, v) in self.pieces() {
            out.push_str(&format!("{:.12},{:.12}\n", r, v));
        }
        out
    }
}

/// Recovers a rule from its cumulative curve by slope extraction.
pub fn rule_from_cumulative(y: &PiecewiseLinear) -> Result<AllocationRule, ModelError> {
    let mut bp = Vec::new();
    let mut vals = Vec::new();
    for k in 1..y.qs.len() {
        let dq = y.qs[k] - y.qs[k - 1];
        if dq <= 0.0 {
            continue;
        }
        bp.push(y.qs[k]);
        vals.push(((y.ys[k] - y.ys[k - 1]) / dq).clamp(0.0, 1.0));
    }
    AllocationRule::from_pieces(bp, vals)
}

/// Pointwise convex combination of rules; breakpoints are the union of the
/// inputs' breakpoints.
pub fn mix(rules: &[AllocationRule], weights: &[f64]) -> Result<AllocationRule, ModelError> {
    assert_eq!(rules.len(), weights.len());
    let wsum: f64 = weights.iter().sum();
    if (wsum - 1.0).abs() > tol::MASS_SUM {
        return Err(ModelError::WeightSum(wsum));
    }
    let mut bp: Vec<f64> = rules
        .iter()
        .flat_map(|r| r.breakpoints.iter().copied())
        .collect();
    bp.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bp.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    let vals: Vec<f64> = bp
        .iter()
        .map(|&q| {
            rules
                .iter()
                .zip(weights)
                .map(|(r, &w)| w * r.value_at(q))
                .sum()
        })
        .collect();
    AllocationRule::from_pieces(bp, vals)
}

/// Cumulative dominance of `a` over `b`. With `downward_closed` the total
/// masses may differ (a may carry more); otherwise they must match.
pub fn dominates(a: &AllocationRule, b: &AllocationRule, downward_closed: bool) -> bool {
    let ta = a.total();
    let tb = b.total();
    if downward_closed {
        if ta < tb - tol::FEASIBILITY {
            return false;
        }
    } else if (ta - tb).abs() > tol::FEASIBILITY {
        return false;
    }
    let mut grid: Vec<f64> = a
        .breakpoints
        .iter()
        .chain(b.breakpoints.iter())
        .copied()
        .collect();
    grid.push(0.0);
    grid.sort_by(|x, y| x.partial_cmp(y).unwrap());
    grid.dedup();
    grid.iter()
        .all(|&q| a.cumulative_at(q) >= b.cumulative_at(q) - tol::FEASIBILITY)
}

/// Continuous piecewise-linear function on [0,1] given by knots.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    pub qs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn value_at(&self, q: f64) -> f64 {
        let q = q.clamp(self.qs[0], *self.qs.last().unwrap());
        let k = match self
            .qs
            .binary_search_by(|x| x.partial_cmp(&q).unwrap())
        {
            Ok(k) => return self.ys[k],
            Err(k) => k,
        };
        let (q0, q1) = (self.qs[k - 1], self.qs[k]);
        let t = (q - q0) / (q1 - q0);
        self.ys[k - 1] + t * (self.ys[k] - self.ys[k - 1])
    }
}

/// Concave piecewise-linear revenue curve R(q): knots on the atom grid,
/// R(0) at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevenueCurve {
    qs: Vec<f64>,
    values: Vec<f64>,
}

impl RevenueCurve {
    pub fn from_knots(qs: Vec<f64>, values: Vec<f64>) -> Result<Self, ModelError> {
        if qs.len() != values.len() || qs.len() < 2 {
            return Err(ModelError::Curve("need at least two knots".into()));
        }
        if qs[0] != 0.0 || (qs[qs.len() - 1] - 1.0).abs() > 1e-12 {
            return Err(ModelError::Curve("knots must span [0,1]".into()));
        }
        for w in qs.windows(2) {
            if w[1] <= w[0] {
                return Err(ModelError::Curve("knots must increase".into()));
            }
        }
        let curve = RevenueCurve { qs, values };
        curve.assert_concave(tol::CURVE_SLOPE)?;
        Ok(curve)
    }

    pub fn assert_concave(&self, slope_tol: f64) -> Result<(), ModelError> {
        let mut prev = f64::INFINITY;
        for k in 1..self.qs.len() {
            let s = (self.values[k] - self.values[k - 1]) / (self.qs[k] - self.qs[k - 1]);
            if s > prev + slope_tol {
                return Err(ModelError::Curve(format!(
                    "slope rises from {prev} to {s} at q={}",
                    self.qs[k]
                )));
            }
            prev = prev.min(s);
        }
        Ok(())
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.qs, &self.values)
    }

    pub fn value_at(&self, q: f64) -> f64 {
        PiecewiseLinear {
            qs: self.qs.clone(),
            ys: self.values.clone(),
        }
        .value_at(q)
    }

    /// Marginal revenue pieces: (left, right, slope) with runs of equal
    /// slope merged. Pieces are right-closed like allocation rules.
    pub fn marginal_pieces(&self) -> Vec<(f64, f64, f64)> {
        let mut out: Vec<(f64, f64, f64)> = Vec::new();
        for k in 1..self.qs.len() {
            let s = (self.values[k] - self.values[k - 1]) / (self.qs[k] - self.qs[k - 1]);
            match out.last_mut() {
                Some((_, r, sp)) if (*sp - s).abs() <= tol::CURVE_SLOPE => *r = self.qs[k],
                _ => out.push((self.qs[k - 1], self.qs[k], s)),
            }
        }
        out
    }

    /// Marginal revenue R'(q), with pieces right-closed: the value at a
    /// breakpoint is the slope of the piece ending there.
    pub fn marginal_at(&self, q: f64) -> f64 {
        let pieces = self.marginal_pieces();
        if q <= pieces[0].1 {
            return pieces[0].2;
        }
        for &(l, r, s) in &pieces {
            if q > l && q <= r {
                return s;
            }
        }
        pieces.last().unwrap().2
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest knot attaining the maximum (the monopoly quantile on the grid).
    pub fn peak_quantile(&self) -> f64 {
        let m = self.max_value();
        for (&q, &v) in self.qs.iter().zip(&self.values) {
            if v >= m - 1e-12 {
                return q;
            }
        }
        1.0
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,revenue\n");
        for (&q, &v) in self.qs.iter().zip(&self.values) {
            out.push_str(&format!("{:.12},{:.12}\n", q, v));
        }
        out
    }
}

/// Per-type distribution over the outcome menu.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterimOutcomeRule {
    pub probs: Vec<Vec<f64>>,
}

impl InterimOutcomeRule {
    pub fn null(agent: &AgentModel) -> Self {
        let null = agent.null_outcome();
        let mut probs = vec![vec![0.0; agent.n_outcomes()]; agent.n_types()];
        for row in &mut probs {
            row[null] = 1.0;
        }
        InterimOutcomeRule { probs }
    }

    pub fn validate(&self, agent: &AgentModel) -> Result<(), ModelError> {
        for (t, row) in self.probs.iter().enumerate() {
            if row.len() != agent.n_outcomes() {
                return Err(ModelError::RowSum(t));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > 1e-9 || row.iter().any(|&p| p < -1e-12) {
                return Err(ModelError::RowSum(t));
            }
        }
        Ok(())
    }

    /// Service probability of each type under this rule.
    pub fn alloc_by_type(&self, agent: &AgentModel) -> Vec<f64> {
        self.probs
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&agent.outcomes)
                    .filter(|(_, w)| w.service)
                    .map(|(p, _)| p)
                    .sum::<f64>()
                    .clamp(0.0, 1.0)
            })
            .collect()
    }

    /// Expected payment over types and outcome draws.
    pub fn expected_payment(&self, agent: &AgentModel) -> f64 {
        self.probs
            .iter()
            .zip(&agent.types)
            .map(|(row, t)| {
                t.mass
                    * row
                        .iter()
                        .zip(&agent.outcomes)
                        .map(|(p, w)| p * w.payment)
                        .sum::<f64>()
            })
            .sum()
    }

    /// Expected utility for `true_type` when assigned the row of `report`.
    pub fn interim_utility(&self, agent: &AgentModel, true_type: usize, report: usize) -> f64 {
        self.probs[report]
            .iter()
            .enumerate()
            .map(|(w, p)| p * agent.utility(true_type, w))
            .sum()
    }

    /// Largest BIC/IIR violation of this rule: positive values mean a
    /// profitable misreport or negative truthful utility exists.
    pub fn incentive_residual(&self, agent: &AgentModel) -> f64 {
        let mut worst: f64 = f64::NEG_INFINITY;
        for t in 0..agent.n_types() {
            let truthful = self.interim_utility(agent, t, t);
            worst = worst.max(-truthful);
            for r in 0..agent.n_types() {
                if r != t {
                    worst = worst.max(self.interim_utility(agent, t, r) - truthful);
                }
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(bp: &[f64], vals: &[f64]) -> AllocationRule {
        AllocationRule::from_pieces(bp.to_vec(), vals.to_vec()).unwrap()
    }

    #[test]
    fn cumulative_of_constant_rule_is_identity() {
        let r = AllocationRule::step(1.0);
        for q in [0.0, 0.3, 0.5, 1.0] {
            assert!((r.cumulative_at(q) - q).abs() < 1e-15);
        }
    }

    #[test]
    fn cumulative_of_half_step() {
        let r = AllocationRule::step(0.5);
        for q in [0.0, 0.2, 0.5, 0.7, 1.0] {
            assert!((r.cumulative_at(q) - q.min(0.5)).abs() < 1e-15);
        }
    }

    #[test]
    fn cumulative_two_piece() {
        // y = 0.75 on [0,0.4], 0.25 after; hand integration gives Y(1)=0.45.
        let r = rule(&[0.4, 1.0], &[0.75, 0.25]);
        assert!((r.total() - 0.45).abs() < 1e-12);
        // numeric quadrature cross-check
        let n = 100_000;
        let quad: f64 = (0..n)
            .map(|i| r.value_at((i as f64 + 0.5) / n as f64) / n as f64)
            .sum();
        assert!((quad - 0.45).abs() < 1e-5);
    }

    #[test]
    fn step_constraint_edges() {
        assert_eq!(AllocationRule::step(0.0).total(), 0.0);
        assert_eq!(AllocationRule::step(1.0).total(), 1.0);
        assert!((AllocationRule::step(0.5).total() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dominance_cases() {
        let a = AllocationRule::step(0.5);
        let b = AllocationRule::step(0.3);
        assert!(dominates(&a, &a, false));
        assert!(dominates(&a, &b, true));
        assert!(!dominates(&a, &b, false));
        assert!(!dominates(&b, &a, true));
    }

    #[test]
    fn mix_singleton_is_identity() {
        let y = AllocationRule::step(0.4);
        let m = mix(std::slice::from_ref(&y), &[1.0]).unwrap();
        assert_eq!(m, y);
    }

    #[test]
    fn mix_two_steps() {
        let m = mix(
            &[AllocationRule::step(0.2), AllocationRule::step(0.8)],
            &[0.5, 0.5],
        )
        .unwrap();
        assert!((m.value_at(0.1) - 1.0).abs() < 1e-15);
        assert!((m.value_at(0.5) - 0.5).abs() < 1e-15);
        assert!((m.value_at(0.9) - 0.0).abs() < 1e-15);
    }

    #[test]
    fn mix_rejects_bad_weights() {
        let r = AllocationRule::step(0.5);
        assert!(mix(&[r.clone(), r], &[0.5, 0.6]).is_err());
    }

    #[test]
    fn staircase_mixture_approximates_one_minus_q() {
        let n = 4;
        let rules: Vec<_> = (1..=n)
            .map(|k| AllocationRule::step(k as f64 / n as f64))
            .collect();
        let w = vec![1.0 / n as f64; n];
        let m = mix(&rules, &w).unwrap();
        // piece ((j-1)/N, j/N] has value (N-j+1)/N
        for j in 1..=n {
            let q = (j as f64 - 0.5) / n as f64;
            let want = (n - j + 1) as f64 / n as f64;
            assert!((m.value_at(q) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rule_roundtrip_through_cumulative() {
        let r = rule(&[0.25, 0.6, 1.0], &[0.9, 0.4, 0.1]);
        let back = rule_from_cumulative(&r.cumulative()).unwrap();
        assert_eq!(r.breakpoints(), back.breakpoints());
        for (a, b) in r.values().iter().zip(back.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn curve_marginal_pieces_merge() {
        let c = RevenueCurve::from_knots(
            vec![0.0, 0.25, 0.5, 0.75, 1.0],
            vec![0.0, 0.25, 0.375, 0.375, 0.25],
        )
        .unwrap();
        let mp = c.marginal_pieces();
        assert_eq!(mp.len(), 4);
        assert!((c.marginal_at(0.1) - 1.0).abs() < 1e-12);
        assert!((c.marginal_at(0.6) - 0.0).abs() < 1e-12);
        assert!((c.marginal_at(1.0) + 0.5).abs() < 1e-12);
        assert!((c.peak_quantile() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn concavity_violation_rejected() {
        assert!(RevenueCurve::from_knots(vec![0.0, 0.5, 1.0], vec![0.0, 0.1, 0.5]).is_err());
    }

    #[test]
    fn agent_json_roundtrip() {
        let agent = AgentModel::new(
            vec![
                TypeRecord {
                    mass: 0.5,
                    utilities: vec![0.0, 0.5],
                },
                TypeRecord {
                    mass: 0.5,
                    utilities: vec![0.0, 1.5],
                },
            ],
            vec![
                OutcomeRecord {
                    service: false,
                    payment: 0.0,
                },
                OutcomeRecord {
                    service: true,
                    payment: 0.5,
                },
            ],
            false,
        )
        .unwrap();
        assert_eq!(agent.atoms, 2);
        let back = AgentModel::from_json(&agent.to_json()).unwrap();
        assert_eq!(back.n_types(), 2);
        assert_eq!(back.atoms, 2);
    }

    #[test]
    fn agent_missing_null_outcome_rejected() {
        let r = AgentModel::new(
            vec![TypeRecord {
                mass: 1.0,
                utilities: vec![1.0],
            }],
            vec![OutcomeRecord {
                service: true,
                payment: 1.0,
            }],
            false,
        );
        assert!(r.is_err());
    }
}
