//! Constrained lottery pricing, revenue curves, step mechanisms, and
//! marginal revenue.
//!
//! The LotP program maximizes expected payment over per-type outcome
//! distributions subject to incentive compatibility, individual
//! rationality, and a cumulative allocation constraint. Under the
//! equal-mass atom representation the exponential family of subset
//! constraints collapses to one top-k majorization constraint per atom
//! count k, each linearized with a threshold variable. Incentive rows are
//! generated lazily: after each solve every (type, report) pair is checked
//! and violated rows are appended, which keeps the working LP small.

use std::collections::HashSet;

use crate::lp::{IncrementalLp, LpError, LpStatus, Rel};
use crate::model::{
    AgentModel, AllocationRule, InterimOutcomeRule, ModelError, RevenueCurve,
};
use crate::tol;

#[derive(Debug, thiserror::Error)]
pub enum SingleAgentError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("constraint cannot be met by this agent's menu")]
    Infeasible,
    #[error("numerical failure: {0}")]
    Numerical(String),
}

#[derive(Debug, Clone)]
pub struct LotpOutcome {
    pub outcome_rule: InterimOutcomeRule,
    pub revenue: f64,
    pub alloc_by_type: Vec<f64>,
}

/// Optimal single-agent mechanism under the q-step constraint.
#[derive(Debug, Clone)]
pub struct StepMechanism {
    pub q: f64,
    pub revenue: f64,
    pub outcome_rule: InterimOutcomeRule,
    pub alloc_by_type: Vec<f64>,
    pub induced_alloc: AllocationRule,
}

/// Incremental LotP solver for one agent. Step constraints share the base
/// program (only the total-allocation right-hand side moves), so a sweep
/// over the quantile grid warm-starts each solve from the previous basis.
pub struct LotpSolver {
    agent: AgentModel,
    pub eng: IncrementalLp,
    total_row: usize,
    ic_rows: HashSet<(usize, usize)>,
    constraint: Option<AllocationRule>,
    total_rhs: f64,
    n_w: usize,
}

const MAX_IC_ROUNDS: usize = 80;

impl LotpSolver {
    /// Base program for step constraints (no majorization rows needed: a
    /// step bound is implied by the total row and 0 <= p <= 1).
    pub fn for_steps(agent: &AgentModel) -> Self {
        Self::build(agent, None, &[])
    }

    /// Program for an arbitrary constraint `y`; majorization rows are added
    /// for every atom count whose bound is not already implied.
    pub fn for_rule(agent: &AgentModel, y: &AllocationRule) -> Self {
        Self::build(agent, Some(y), &[])
    }

    fn build(agent: &AgentModel, y: Option<&AllocationRule>, seed_ic: &[(usize, usize)]) -> Self {
        let n_t = agent.n_types();
        let n_w = agent.n_outcomes();
        let m = agent.atoms as f64;
        let big_m = agent.atoms;
        let counts: Vec<f64> = (0..n_t).map(|t| agent.atoms_of(t) as f64).collect();
        let total = y.map_or(0.0, |y| m * y.total());

        // ks that need an explicit top-k row
        let needed: Vec<usize> = match y {
            None => Vec::new(),
            Some(y) => (1..big_m)
                .filter(|&k| {
                    let bound = m * y.cumulative_at(k as f64 / m);
                    bound < (k as f64).min(total) - 1e-12
                })
                .collect(),
        };

        let p = |t: usize, w: usize| t * n_w + w;
        let n_p = n_t * n_w;
        let tau = |ki: usize| n_p + ki * (n_t + 1);
        let surp = |ki: usize, t: usize| n_p + ki * (n_t + 1) + 1 + t;
        let n_vars = n_p + needed.len() * (n_t + 1);

        let mut obj = vec![0.0; n_vars];
        for t in 0..n_t {
            for w in 0..n_w {
                obj[p(t, w)] = counts[t] / m * agent.outcomes[w].payment;
            }
        }
        let mut eng = IncrementalLp::new(n_vars, true, &obj);

        for t in 0..n_t {
            let coeffs: Vec<(usize, f64)> = (0..n_w).map(|w| (p(t, w), 1.0)).collect();
            eng.add_row(&coeffs, Rel::Eq, 1.0);
        }
        for t in 0..n_t {
            let coeffs: Vec<(usize, f64)> = (0..n_w)
                .map(|w| (p(t, w), agent.utility(t, w)))
                .filter(|&(_, u)| u != 0.0)
                .collect();
            eng.add_row(&coeffs, Rel::Ge, 0.0);
        }
        let total_coeffs: Vec<(usize, f64)> = (0..n_t)
            .flat_map(|t| {
                let ct = counts[t];
                (0..n_w)
                    .filter(|&w| agent.outcomes[w].service)
                    .map(move |w| (p(t, w), ct))
                    .collect::<Vec<_>>()
            })
            .collect();
        let rel = if agent.downward_closed { Rel::Le } else { Rel::Eq };
        let total_row = eng.add_row(&total_coeffs, rel, total);

        for (ki, &k) in needed.iter().enumerate() {
            let y = y.expect("needed ks only exist for explicit rules");
            let bound = m * y.cumulative_at(k as f64 / m);
            let mut coeffs = vec![(tau(ki), k as f64)];
            for t in 0..n_t {
                coeffs.push((surp(ki, t), counts[t]));
            }
            eng.add_row(&coeffs, Rel::Le, bound);
            for t in 0..n_t {
                let mut coeffs: Vec<(usize, f64)> = (0..n_w)
                    .filter(|&w| agent.outcomes[w].service)
                    .map(|w| (p(t, w), 1.0))
                    .collect();
                coeffs.push((tau(ki), -1.0));
                coeffs.push((surp(ki, t), -1.0));
                eng.add_row(&coeffs, Rel::Le, 0.0);
            }
        }

        let mut solver = LotpSolver {
            agent: agent.clone(),
            eng,
            total_row,
            ic_rows: HashSet::new(),
            constraint: y.cloned(),
            total_rhs: total,
            n_w,
        };
        for &(t, r) in seed_ic {
            solver.add_ic_row(t, r);
        }
        solver
    }

    /// Incentive rows accumulate across warm restarts; once well past the
    /// set that still binds, rebuild the engine with only the binding rows
    /// so the basis stays small over long sweeps.
    fn consolidate(&mut self, rule: &InterimOutcomeRule) {
        let n_t = self.agent.n_types();
        let cap = self.ic_cap();
        if self.ic_rows.len() <= cap {
            return;
        }
        let mut keep: Vec<(usize, usize)> = Vec::new();
        for &(t, r) in &self.ic_rows {
            let gain = rule.interim_utility(&self.agent, t, r)
                - rule.interim_utility(&self.agent, t, t);
            if gain > -1e-6 {
                keep.push((t, r));
            }
        }
        keep.sort_unstable();
        if keep.len() + n_t >= self.ic_rows.len() {
            return; // nothing worth dropping
        }
        let rebuilt = Self::build(&self.agent, self.constraint.as_ref(), &keep);
        self.eng = rebuilt.eng;
        self.total_row = rebuilt.total_row;
        self.ic_rows = rebuilt.ic_rows;
        self.eng.set_rhs(self.total_row, self.total_rhs);
    }

    fn ic_cap(&self) -> usize {
        (4 * self.agent.n_types()).max(48)
    }

    /// Re-points the step constraint at quantile `j / atoms` and solves.
    pub fn solve_step(&mut self, j: usize) -> Result<LotpOutcome, SingleAgentError> {
        self.total_rhs = j as f64;
        self.eng.set_rhs(self.total_row, self.total_rhs);
        self.solve()
    }

    /// Solves the current program, generating violated incentive rows until
    /// the returned outcome rule is BIC/IIR within tolerance.
    pub fn solve(&mut self) -> Result<LotpOutcome, SingleAgentError> {
        let n_t = self.agent.n_types();
        for _ in 0..MAX_IC_ROUNDS {
            match self.eng.solve()? {
                LpStatus::Optimal => {}
                LpStatus::Infeasible => return Err(SingleAgentError::Infeasible),
                LpStatus::Unbounded => {
                    return Err(SingleAgentError::Numerical("LotP unbounded".into()))
                }
            }
            let rule = self.extract_rule();
            let mut added = false;
            for t in 0..n_t {
                let truthful = rule.interim_utility(&self.agent, t, t);
                let mut worst: Option<(usize, f64)> = None;
                for r in 0..n_t {
                    if r == t || self.ic_rows.contains(&(t, r)) {
                        continue;
                    }
                    let gain = rule.interim_utility(&self.agent, t, r) - truthful;
                    if gain > 1e-9 && worst.map_or(true, |(_, g)| gain > g) {
                        worst = Some((r, gain));
                    }
                }
                if let Some((r, _)) = worst {
                    self.add_ic_row(t, r);
                    added = true;
                }
            }
            if !added {
                let alloc = rule.alloc_by_type(&self.agent);
                let revenue = self.eng.user_objective();
                self.consolidate(&rule);
                return Ok(LotpOutcome {
                    outcome_rule: rule,
                    revenue,
                    alloc_by_type: alloc,
                });
            }
        }
        Err(SingleAgentError::Numerical(
            "incentive row generation did not converge".into(),
        ))
    }

    pub fn ic_count(&self) -> usize {
        self.ic_rows.len()
    }

    fn add_ic_row(&mut self, t: usize, r: usize) {
        // u(t, rule(r)) - u(t, rule(t)) <= 0
        let n_w = self.n_w;
        let mut coeffs = Vec::with_capacity(2 * n_w);
        for w in 0..n_w {
            let u = self.agent.utility(t, w);
            if u != 0.0 {
                coeffs.push((r * n_w + w, u));
                coeffs.push((t * n_w + w, -u));
            }
        }
        self.eng.add_row(&coeffs, Rel::Le, 0.0);
        self.ic_rows.insert((t, r));
    }

    fn extract_rule(&self) -> InterimOutcomeRule {
        let x = self.eng.primal_structural();
        let n_t = self.agent.n_types();
        let probs = (0..n_t)
            .map(|t| {
                let mut row: Vec<f64> =
                    x[t * self.n_w..(t + 1) * self.n_w].iter().map(|&v| v.max(0.0)).collect();
                let s: f64 = row.iter().sum();
                if s > 0.0 {
                    for v in &mut row {
                        *v /= s;
                    }
                }
                row
            })
            .collect();
        InterimOutcomeRule { probs }
    }
}

/// Revenue-optimal outcome rule subject to an arbitrary allocation
/// constraint.
pub fn solve_lotp(
    agent: &AgentModel,
    y: &AllocationRule,
) -> Result<LotpOutcome, SingleAgentError> {
    let mut solver = LotpSolver::for_rule(agent, y);
    let out = solver.solve()?;
    let resid = out.outcome_rule.incentive_residual(agent);
    if resid > tol::IC_RESIDUAL {
        return Err(SingleAgentError::Numerical(format!(
            "IC residual {resid} after generation"
        )));
    }
    verify_majorization(agent, &out.alloc_by_type, y)?;
    Ok(out)
}

/// Direct check that the realized atom allocations are majorized by the
/// constraint: sum of the k largest atom allocations <= M * Y(k/M).
fn verify_majorization(
    agent: &AgentModel,
    alloc: &[f64],
    y: &AllocationRule,
) -> Result<(), SingleAgentError> {
    let m = agent.atoms as f64;
    let mut atom_alloc: Vec<f64> = Vec::with_capacity(agent.atoms);
    for (t, &x) in alloc.iter().enumerate() {
        atom_alloc.extend(std::iter::repeat(x).take(agent.atoms_of(t)));
    }
    atom_alloc.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut acc = 0.0;
    for (k, &x) in atom_alloc.iter().enumerate() {
        acc += x;
        let bound = m * y.cumulative_at((k + 1) as f64 / m);
        if acc > bound + tol::EX_ANTE * m {
            return Err(SingleAgentError::Numerical(format!(
                "top-{} allocation {acc} exceeds bound {bound}",
                k + 1
            )));
        }
    }
    if !agent.downward_closed {
        let want = m * y.total();
        if (acc - want).abs() > tol::EX_ANTE * m {
            return Err(SingleAgentError::Numerical(format!(
                "total allocation {acc} != {want}"
            )));
        }
    }
    Ok(())
}

/// Atom quantile intervals and the normalized allocation rule induced by an
/// outcome rule: atoms sorted by allocation descending, ties by type index.
#[derive(Debug, Clone)]
pub struct InducedAllocation {
    pub rule: AllocationRule,
    /// Quantile interval occupied by each type, indexed by type.
    pub intervals: Vec<(f64, f64)>,
    /// Types from strongest to weakest under this rule.
    pub order: Vec<usize>,
}

pub fn induced_allocation(rule: &InterimOutcomeRule, agent: &AgentModel) -> InducedAllocation {
    induced_allocation_from(&rule.alloc_by_type(agent), agent)
}

pub fn induced_allocation_from(alloc: &[f64], agent: &AgentModel) -> InducedAllocation {
    let mut order: Vec<usize> = (0..agent.n_types()).collect();
    order.sort_by(|&a, &b| {
        alloc[b]
            .partial_cmp(&alloc[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut intervals = vec![(0.0, 0.0); agent.n_types()];
    let mut bp = Vec::with_capacity(agent.n_types());
    let mut vals = Vec::with_capacity(agent.n_types());
    let mut q = 0.0;
    for &t in &order {
        let right = q + agent.types[t].mass;
        intervals[t] = (q, right);
        bp.push(right);
        vals.push(alloc[t].clamp(0.0, 1.0));
        q = right;
    }
    *bp.last_mut().unwrap() = 1.0;
    let rule = AllocationRule::from_pieces(bp, vals).expect("sorted allocations form a rule");
    InducedAllocation {
        rule,
        intervals,
        order,
    }
}

/// Revenue of the step-mechanism mixture matching constraint `y`:
/// sum over y's downward jumps of R(q) * jump, plus the endpoint term
/// R(1) * y(1) carried by the mass that never steps down.
pub fn marginal_revenue_of(curve: &RevenueCurve, y: &AllocationRule) -> f64 {
    marginal_revenue_with_endpoint(curve, y, true)
}

/// Same with the endpoint term optional; dropping it matches settings where
/// the weakest-quantile step mechanism is never run.
pub fn marginal_revenue_with_endpoint(
    curve: &RevenueCurve,
    y: &AllocationRule,
    include_endpoint: bool,
) -> f64 {
    let bps = y.breakpoints();
    let vals = y.values();
    let mut total = 0.0;
    for k in 0..vals.len() {
        let next = if k + 1 < vals.len() { vals[k + 1] } else { 0.0 };
        let jump = vals[k] - next;
        if k + 1 == vals.len() {
            if include_endpoint && jump > 0.0 {
                total += curve.value_at(1.0) * jump;
            }
        } else if jump > 0.0 {
            total += curve.value_at(bps[k]) * jump;
        }
    }
    total
}

/// An agent together with its revenue curve and the full grid of step
/// mechanisms; the shared precomputation behind classification, quantile
/// maps, and the multi-agent mechanisms.
#[derive(Debug, Clone)]
pub struct PreparedAgent {
    pub agent: AgentModel,
    pub curve: RevenueCurve,
    pub steps: Vec<StepMechanism>,
}

impl PreparedAgent {
    pub fn build(agent: &AgentModel) -> Result<Self, SingleAgentError> {
        agent.validate()?;
        let big_m = agent.atoms;
        let mut solver = LotpSolver::for_steps(agent);
        let mut steps = Vec::with_capacity(big_m + 1);
        let mut qs = Vec::with_capacity(big_m + 1);
        let mut values = Vec::with_capacity(big_m + 1);
        for j in 0..=big_m {
            let q = j as f64 / big_m as f64;
            let out = solver.solve_step(j)?;
            let resid = out.outcome_rule.incentive_residual(agent);
            if resid > tol::IC_RESIDUAL {
                return Err(SingleAgentError::Numerical(format!(
                    "IC residual {resid} at q={q}"
                )));
            }
            let ex_ante: f64 = out
                .alloc_by_type
                .iter()
                .zip(&agent.types)
                .map(|(x, t)| x * t.mass)
                .sum();
            if !agent.downward_closed && (ex_ante - q).abs() > tol::EX_ANTE {
                return Err(SingleAgentError::Numerical(format!(
                    "ex ante allocation {ex_ante} at q={q}"
                )));
            }
            if agent.downward_closed && ex_ante > q + tol::EX_ANTE {
                return Err(SingleAgentError::Numerical(format!(
                    "ex ante allocation {ex_ante} exceeds q={q}"
                )));
            }
            let induced = induced_allocation_from(&out.alloc_by_type, agent);
            steps.push(StepMechanism {
                q,
                revenue: out.revenue,
                outcome_rule: out.outcome_rule,
                alloc_by_type: out.alloc_by_type,
                induced_alloc: induced.rule,
            });
            qs.push(q);
            values.push(steps[j].revenue);
        }
        let curve = RevenueCurve::from_knots(qs, values).map_err(|e| {
            SingleAgentError::Numerical(format!("revenue curve failed validation: {e}"))
        })?;
        if agent.downward_closed {
            for w in curve.knots().1.windows(2) {
                if w[1] < w[0] - tol::FEASIBILITY {
                    return Err(SingleAgentError::Numerical(
                        "downward-closed revenue curve must be nondecreasing".into(),
                    ));
                }
            }
        }
        Ok(PreparedAgent {
            agent: agent.clone(),
            curve,
            steps,
        })
    }

    pub fn grid(&self) -> usize {
        self.agent.atoms
    }

    pub fn grid_q(&self, j: usize) -> f64 {
        j as f64 / self.agent.atoms as f64
    }

    /// Step mechanism at an arbitrary quantile; off-grid quantiles mix the
    /// two neighbouring grid mechanisms.
    pub fn step_mechanism(&self, q: f64) -> StepMechanism {
        assert!((0.0..=1.0 + 1e-12).contains(&q));
        let m = self.agent.atoms as f64;
        let scaled = q * m;
        let lo = (scaled.floor() as usize).min(self.agent.atoms);
        if (scaled - lo as f64).abs() < 1e-12 || lo == self.agent.atoms {
            return self.steps[lo].clone();
        }
        let hi = lo + 1;
        let lam = hi as f64 - scaled; // weight on lo
        let a = &self.steps[lo];
        let b = &self.steps[hi];
        let probs = a
            .outcome_rule
            .probs
            .iter()
            .zip(&b.outcome_rule.probs)
            .map(|(ra, rb)| {
                ra.iter()
                    .zip(rb)
                    .map(|(x, y)| lam * x + (1.0 - lam) * y)
                    .collect()
            })
            .collect();
        let alloc: Vec<f64> = a
            .alloc_by_type
            .iter()
            .zip(&b.alloc_by_type)
            .map(|(x, y)| lam * x + (1.0 - lam) * y)
            .collect();
        let induced = induced_allocation_from(&alloc, &self.agent);
        StepMechanism {
            q,
            revenue: lam * a.revenue + (1.0 - lam) * b.revenue,
            outcome_rule: InterimOutcomeRule { probs },
            alloc_by_type: alloc,
            induced_alloc: induced.rule,
        }
    }

    /// Quantile-sampling CDF for a type: grid knots of the service
    /// probability under each step mechanism. Beyond the revenue peak of a
    /// downward-closed agent the values interpolate linearly up to 1, which
    /// keeps the aggregate law uniform.
    pub fn g_table(&self, type_idx: usize) -> Vec<f64> {
        let big_m = self.agent.atoms;
        let mut g: Vec<f64> = self
            .steps
            .iter()
            .map(|s| s.alloc_by_type[type_idx].clamp(0.0, 1.0))
            .collect();
        if self.agent.downward_closed {
            let peak = self.curve.peak_quantile();
            let peak_j = (peak * big_m as f64).round() as usize;
            let anchor = g[peak_j];
            for (j, v) in g.iter_mut().enumerate().skip(peak_j + 1) {
                let t = (j - peak_j) as f64 / (big_m - peak_j) as f64;
                *v = anchor + t * (1.0 - anchor);
            }
        }
        g
    }

    pub fn marginal_revenue_of(&self, y: &AllocationRule) -> f64 {
        marginal_revenue_of(&self.curve, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{budget_agent, uniform_grid_agent};
    use crate::model::dominates;

    /// Posted-price oracle for a quasilinear agent with the equality
    /// constraint: enumerate prices on the value grid and mix adjacent
    /// posted-price mechanisms to hit the target mass exactly.
    fn posted_price_revenue(values: &[f64], masses: &[f64], q: f64) -> f64 {
        // revenue at ex ante mass exactly s for each grid mass point
        let mut pts: Vec<(f64, f64)> = vec![(0.0, 0.0)];
        let mut sorted: Vec<(f64, f64)> = values
            .iter()
            .zip(masses)
            .map(|(&v, &m)| (v, m))
            .collect();
        sorted.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut mass = 0.0;
        for &(v, m) in &sorted {
            mass += m;
            pts.push((mass, v * mass));
        }
        // upper concave envelope over the points, evaluated at q
        let mut best: f64 = f64::NEG_INFINITY;
        for (i, &(qa, ra)) in pts.iter().enumerate() {
            for &(qb, rb) in &pts[i..] {
                let (lo, hi) = (qa.min(qb), qa.max(qb));
                if (lo - 1e-12..=hi + 1e-12).contains(&q) {
                    let lam = if hi > lo { (q - lo) / (hi - lo) } else { 0.0 };
                    let r = if qa <= qb {
                        ra + lam * (rb - ra)
                    } else {
                        rb + lam * (ra - rb)
                    };
                    best = best.max(r);
                }
            }
        }
        best
    }

    #[test]
    fn uniform4_revenue_grid_matches_posted_price_oracle() {
        let agent = uniform_grid_agent(4, false);
        let prep = PreparedAgent::build(&agent).unwrap();
        let want = [0.0, 0.25, 0.375, 0.375, 0.25];
        for (j, &r) in want.iter().enumerate() {
            assert!(
                (prep.steps[j].revenue - r).abs() < 1e-7,
                "R({}) = {}, want {r}",
                prep.grid_q(j),
                prep.steps[j].revenue
            );
            let oracle = posted_price_revenue(
                &[0.25, 0.5, 0.75, 1.0],
                &[0.25; 4],
                prep.grid_q(j),
            );
            assert!((prep.steps[j].revenue - oracle).abs() < 1e-7);
        }
    }

    #[test]
    fn zero_constraint_gives_zero_revenue() {
        let agent = uniform_grid_agent(4, false);
        let out = solve_lotp(&agent, &AllocationRule::zero()).unwrap();
        assert!(out.revenue.abs() < 1e-9);
        assert!(out.alloc_by_type.iter().all(|&x| x < 1e-9));
    }

    #[test]
    fn lotp_at_half_step_is_0_375() {
        let agent = uniform_grid_agent(4, false);
        let out = solve_lotp(&agent, &AllocationRule::step(0.5)).unwrap();
        assert!((out.revenue - 0.375).abs() < 1e-7, "{}", out.revenue);
    }

    #[test]
    fn staircase_revenue_is_mean_of_grid_revenues() {
        // y(q) = 1-q staircase: N=4 uniform mixture of steps. Revenue
        // linearity makes the optimum the mean of R over {1/4,...,1} for
        // both constraint forms.
        let rules: Vec<_> = (1..=4).map(|k| AllocationRule::step(k as f64 / 4.0)).collect();
        let y = crate::model::mix(&rules, &[0.25; 4]).unwrap();
        let out = solve_lotp(&uniform_grid_agent(4, false), &y).unwrap();
        assert!((out.revenue - 0.3125).abs() < 1e-7, "{}", out.revenue);
        let out_dc = solve_lotp(&uniform_grid_agent(4, true), &y).unwrap();
        assert!((out_dc.revenue - 0.34375).abs() < 1e-7, "{}", out_dc.revenue);
    }

    #[test]
    fn step_mechanism_edges_and_mixing() {
        let agent = uniform_grid_agent(4, false);
        let prep = PreparedAgent::build(&agent).unwrap();
        let null = prep.step_mechanism(0.0);
        assert!(null.revenue.abs() < 1e-9);
        let mid = prep.step_mechanism(0.375);
        assert!((mid.revenue - 0.5 * (0.25 + 0.375)).abs() < 1e-9);
        let ex_ante: f64 = mid
            .alloc_by_type
            .iter()
            .zip(&agent.types)
            .map(|(x, t)| x * t.mass)
            .sum();
        assert!((ex_ante - 0.375).abs() < 1e-7);
    }

    #[test]
    fn induced_allocation_dominated_by_step() {
        let agent = uniform_grid_agent(4, false);
        let prep = PreparedAgent::build(&agent).unwrap();
        for s in &prep.steps {
            let y = AllocationRule::step(s.q);
            assert!(
                dominates(&y, &s.induced_alloc, true),
                "step at {} fails dominance",
                s.q
            );
        }
    }

    #[test]
    fn induced_allocation_examples() {
        let agent = uniform_grid_agent(4, false);
        let zero = InterimOutcomeRule::null(&agent);
        let ind = induced_allocation(&zero, &agent);
        assert!(ind.rule.total() < 1e-12);
        // serve the top two types with probability 1
        let alloc = [0.0, 0.0, 1.0, 1.0];
        let ind = induced_allocation_from(&alloc, &agent);
        assert_eq!(ind.rule, AllocationRule::step(0.5));
        assert_eq!(ind.order[0], 2); // ties by type index among the served
        assert_eq!(ind.intervals[3], (0.25, 0.5));
    }

    #[test]
    fn marginal_revenue_examples() {
        let agent = uniform_grid_agent(4, false);
        let prep = PreparedAgent::build(&agent).unwrap();
        for j in 0..=4 {
            let q = j as f64 / 4.0;
            let mr = prep.marginal_revenue_of(&AllocationRule::step(q));
            assert!((mr - prep.steps[j].revenue).abs() < 1e-12);
        }
        let y = crate::model::mix(
            &[AllocationRule::step(0.25), AllocationRule::step(0.75)],
            &[0.5, 0.5],
        )
        .unwrap();
        assert!((prep.marginal_revenue_of(&y) - 0.3125).abs() < 1e-9);
    }

    #[test]
    fn marginal_revenue_never_exceeds_optimal() {
        let agent = uniform_grid_agent(4, false);
        let prep = PreparedAgent::build(&agent).unwrap();
        let rules: Vec<_> = (1..=4).map(|k| AllocationRule::step(k as f64 / 4.0)).collect();
        let y = crate::model::mix(&rules, &[0.25; 4]).unwrap();
        let rev = solve_lotp(&agent, &y).unwrap().revenue;
        assert!(prep.marginal_revenue_of(&y) <= rev + tol::CURVE_SLOPE);
    }

    #[test]
    fn downward_closed_curve_monotone() {
        let agent = uniform_grid_agent(4, true);
        let prep = PreparedAgent::build(&agent).unwrap();
        let (_, vals) = prep.curve.knots();
        assert!((vals[4] - 0.375).abs() < 1e-7, "{:?}", vals);
        for w in vals.windows(2) {
            assert!(w[1] >= w[0] - 1e-9);
        }
    }

    #[test]
    fn budget_agent_curve_builds() {
        let agent = budget_agent(0.5, 8).unwrap();
        let prep = PreparedAgent::build(&agent).unwrap();
        // with the budget binding, revenue at high q stays near B * mass served
        assert!(prep.curve.max_value() > 0.2);
        let g = prep.g_table(7); // strongest type
        for w in g.windows(2) {
            assert!(w[1] >= w[0] - 1e-9, "G must be monotone: {g:?}");
        }
    }
}
