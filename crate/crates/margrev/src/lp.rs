//! Self-contained dense linear-program solver.
//!
//! Revised simplex over an explicit basis inverse, two-phase (no big-M),
//! Dantzig pricing with a Bland fallback once the objective stalls. The
//! engine is incremental: `<=` rows can be appended and right-hand sides
//! changed after a solve, after which `solve` warm-starts with the dual
//! simplex from the previous optimal basis. Used by LotP, the revenue-curve
//! sweep, and the brute-force oracles.

use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, thiserror::Error)]
pub enum LpError {
    #[error("pivot budget exhausted after {0} iterations")]
    PivotBudget(usize),
    #[error("singular basis during refactorization")]
    SingularBasis,
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// Spec-facing LP description; rows are sparse (index, coefficient) lists.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub n_vars: usize,
    pub maximize: bool,
    pub objective: Vec<f64>,
    pub rows: Vec<(Vec<(usize, f64)>, Rel, f64)>,
    /// Optional upper bounds; lower bounds are 0.
    pub upper: Vec<Option<f64>>,
}

impl LinearProgram {
    pub fn new(n_vars: usize, maximize: bool, objective: Vec<f64>) -> Self {
        assert_eq!(objective.len(), n_vars);
        LinearProgram {
            n_vars,
            maximize,
            objective,
            rows: Vec::new(),
            upper: vec![None; n_vars],
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, rel: Rel, rhs: f64) {
        self.rows.push((coeffs, rel, rhs));
    }

    /// Plain-text tableau of the program, for the CLI debug flag.
    pub fn dump_tableau(&self) -> String {
        let mut out = String::new();
        let sense = if self.maximize { "max" } else { "min" };
        out.push_str(&format!("{sense} "));
        for (j, c) in self.objective.iter().enumerate() {
            if *c != 0.0 {
                out.push_str(&format!("{c:+.6}*x{j} "));
            }
        }
        out.push('\n');
        for (coeffs, rel, rhs) in &self.rows {
            let mut dense = vec![0.0; self.n_vars];
            for &(j, v) in coeffs {
                dense[j] += v;
            }
            for (j, v) in dense.iter().enumerate() {
                if *v != 0.0 {
                    out.push_str(&format!("{v:+.6}*x{j} "));
                }
            }
            let r = match rel {
                Rel::Le => "<=",
                Rel::Eq => "=",
                Rel::Ge => ">=",
            };
            out.push_str(&format!("{r} {rhs:.6}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    pub dual: Vec<f64>,
    pub objective: f64,
}

/// Solves a one-shot program. On `Optimal` the primal is feasible within
/// `tol::FEASIBILITY` and the duality gap is at most `tol::LP_GAP`
/// relative; both are re-verified before returning.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let mut eng = IncrementalLp::from_program(lp);
    let status = eng.solve()?;
    match status {
        LpStatus::Optimal => {
            let primal = eng.primal_structural();
            let dual = eng.user_duals();
            let objective = eng.user_objective();
            // duality gap in the internal minimization orientation
            let gap = eng.duality_gap();
            if gap > tol::LP_GAP * (1.0 + eng.internal_objective().abs()) {
                return Err(LpError::Numerical(format!("duality gap {gap}")));
            }
            let resid = eng.primal_residual();
            if resid > tol::FEASIBILITY * 10.0 {
                return Err(LpError::Numerical(format!("primal residual {resid}")));
            }
            Ok(LpSolution {
                status,
                primal,
                dual,
                objective,
            })
        }
        _ => Ok(LpSolution {
            status,
            primal: vec![],
            dual: vec![],
            objective: 0.0,
        }),
    }
}

const DTOL: f64 = 1e-9;
const PTOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 128;

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

/// Incremental revised-simplex engine over the equality standard form.
pub struct IncrementalLp {
    n_struct: usize,
    maximize: bool,
    // column-major sparse matrix, structural columns first
    cols: Vec<Vec<(u32, f64)>>,
    kind: Vec<ColKind>,
    cost: Vec<f64>, // minimization costs
    b: Vec<f64>,
    row_sign: Vec<f64>,   // +1 or -1: user rhs * sign = internal rhs
    user_rows: Vec<Rel>,  // original relation per row
    basis: Vec<usize>,    // basic column per row
    in_basis: Vec<bool>,
    banned: Vec<bool>,
    binv: Vec<f64>, // m*m row-major
    xb: Vec<f64>,
    m: usize,
    solved: bool,
    pivots: usize,
    /// (warm solves, cold solves) since construction, for diagnostics.
    pub solve_stats: (usize, usize),
    /// total pivots, for diagnostics
    pub total_pivots: usize,
}

impl IncrementalLp {
    pub fn new(n_vars: usize, maximize: bool, objective: &[f64]) -> Self {
        assert_eq!(objective.len(), n_vars);
        let cost = if maximize {
            objective.iter().map(|c| -c).collect()
        } else {
            objective.to_vec()
        };
        IncrementalLp {
            n_struct: n_vars,
            maximize,
            cols: (0..n_vars).map(|_| Vec::new()).collect(),
            kind: vec![ColKind::Structural; n_vars],
            cost,
            b: Vec::new(),
            row_sign: Vec::new(),
            user_rows: Vec::new(),
            basis: Vec::new(),
            in_basis: vec![false; n_vars],
            banned: vec![false; n_vars],
            binv: Vec::new(),
            xb: Vec::new(),
            m: 0,
            solved: false,
            pivots: 0,
            solve_stats: (0, 0),
            total_pivots: 0,
        }
    }

    pub fn from_program(lp: &LinearProgram) -> Self {
        let mut eng = IncrementalLp::new(lp.n_vars, lp.maximize, &lp.objective);
        for (coeffs, rel, rhs) in &lp.rows {
            eng.add_row(coeffs, *rel, *rhs);
        }
        for (j, u) in lp.upper.iter().enumerate() {
            if let Some(u) = u {
                eng.add_row(&[(j, 1.0)], Rel::Le, *u);
            }
        }
        eng
    }

    /// Appends a row. Before the first solve any relation is accepted;
    /// afterwards only `<=` rows keep the warm basis (the fresh slack enters
    /// the basis and the dual simplex restores feasibility).
    pub fn add_row(&mut self, coeffs: &[(usize, f64)], rel: Rel, rhs: f64) -> usize {
        let row = self.m;
        // normalize to nonnegative rhs only pre-solve; post-solve Le rows
        // are kept as-is so the slack can enter the basis directly
        let (sign, rel_eff) = if !self.solved && rhs < 0.0 {
            let flipped = match rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
            (-1.0, flipped)
        } else {
            (1.0, rel)
        };
        assert!(
            !self.solved || rel_eff == Rel::Le,
            "only <= rows may be added after the first solve"
        );
        self.row_sign.push(sign);
        self.user_rows.push(rel);
        self.b.push(rhs * sign);
        for &(j, v) in coeffs {
            debug_assert!(j < self.n_struct);
            if v != 0.0 {
                self.cols[j].push((row as u32, v * sign));
            }
        }
        let slack = match rel_eff {
            Rel::Le => {
                let id = self.push_col(ColKind::Slack, 0.0);
                self.cols[id].push((row as u32, 1.0));
                Some(id)
            }
            Rel::Ge => {
                let id = self.push_col(ColKind::Slack, 0.0);
                self.cols[id].push((row as u32, -1.0));
                None // surplus cannot start basic
            }
            Rel::Eq => None,
        };
        self.m += 1;
        if self.solved {
            // extend binv with the derived bordering row
            let id = slack.expect("post-solve rows are <=");
            let mut arow = vec![0.0; self.m - 1];
            for (k, &bc) in self.basis.iter().enumerate() {
                for &(r, v) in &self.cols[bc] {
                    if r as usize == row {
                        arow[k] += v;
                    }
                }
            }
            // arow is in basis order; new binv row = -arow * binv_old, then 1
            let old_m = self.m - 1;
            let mut new_row = vec![0.0; self.m];
            for (k, &a) in arow.iter().enumerate() {
                if a != 0.0 {
                    for c in 0..old_m {
                        new_row[c] -= a * self.binv[k * old_m + c];
                    }
                }
            }
            new_row[self.m - 1] = 1.0;
            let mut nb = vec![0.0; self.m * self.m];
            for r in 0..old_m {
                nb[r * self.m..r * self.m + old_m]
                    .copy_from_slice(&self.binv[r * old_m..(r + 1) * old_m]);
            }
            nb[(self.m - 1) * self.m..].copy_from_slice(&new_row);
            self.binv = nb;
            self.basis.push(id);
            self.in_basis[id] = true;
            self.recompute_xb();
        }
        row
    }

    pub fn set_rhs(&mut self, row: usize, rhs: f64) {
        self.b[row] = rhs * self.row_sign[row];
        if self.solved {
            self.recompute_xb();
        }
    }

    fn push_col(&mut self, kind: ColKind, cost: f64) -> usize {
        self.cols.push(Vec::new());
        self.kind.push(kind);
        self.cost.push(cost);
        self.in_basis.push(false);
        self.banned.push(false);
        self.cols.len() - 1
    }

    fn recompute_xb(&mut self) {
        let m = self.m;
        self.xb = vec![0.0; m];
        for r in 0..m {
            let mut s = 0.0;
            for c in 0..m {
                s += self.binv[r * m + c] * self.b[c];
            }
            self.xb[r] = s;
        }
    }

    fn refactorize(&mut self) -> Result<(), LpError> {
        let m = self.m;
        // Gauss-Jordan inverse of the basis matrix
        let mut a = vec![0.0; m * 2 * m];
        for (k, &bc) in self.basis.iter().enumerate() {
            for &(r, v) in &self.cols[bc] {
                a[(r as usize) * 2 * m + k] = v;
            }
        }
        for r in 0..m {
            a[r * 2 * m + m + r] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = a[col * 2 * m + col].abs();
            for r in col + 1..m {
                let v = a[r * 2 * m + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-12 {
                return Err(LpError::SingularBasis);
            }
            if piv != col {
                for c in 0..2 * m {
                    a.swap(col * 2 * m + c, piv * 2 * m + c);
                }
            }
            let d = a[col * 2 * m + col];
            for c in 0..2 * m {
                a[col * 2 * m + c] /= d;
            }
            for r in 0..m {
                if r != col {
                    let f = a[r * 2 * m + col];
                    if f != 0.0 {
                        for c in 0..2 * m {
                            a[r * 2 * m + c] -= f * a[col * 2 * m + c];
                        }
                    }
                }
            }
        }
        for r in 0..m {
            for c in 0..m {
                self.binv[r * m + c] = a[r * 2 * m + m + c];
            }
        }
        Ok(())
    }

    fn btran_costs(&self, costs: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (k, &bc) in self.basis.iter().enumerate() {
            let cb = costs[bc];
            if cb != 0.0 {
                for c in 0..m {
                    y[c] += cb * self.binv[k * m + c];
                }
            }
        }
        y
    }

    fn ftran(&self, col: usize) -> Vec<f64> {
        let m = self.m;
        let mut w = vec![0.0; m];
        for &(r, v) in &self.cols[col] {
            let r = r as usize;
            for i in 0..m {
                w[i] += v * self.binv[i * m + r];
            }
        }
        w
    }

    fn col_dot(&self, y: &[f64], col: usize) -> f64 {
        self.cols[col]
            .iter()
            .map(|&(r, v)| y[r as usize] * v)
            .sum()
    }

    fn pivot(&mut self, row: usize, entering: usize, w: &[f64]) {
        let m = self.m;
        let piv = w[row];
        let theta = self.xb[row] / piv;
        for i in 0..m {
            if i != row {
                self.xb[i] -= theta * w[i];
            }
        }
        self.xb[row] = theta;
        // binv row update
        let prow: Vec<f64> = self.binv[row * m..(row + 1) * m]
            .iter()
            .map(|v| v / piv)
            .collect();
        for i in 0..m {
            if i != row && w[i] != 0.0 {
                let f = w[i];
                for c in 0..m {
                    self.binv[i * m + c] -= f * prow[c];
                }
            }
        }
        self.binv[row * m..(row + 1) * m].copy_from_slice(&prow);
        let leaving = self.basis[row];
        self.in_basis[leaving] = false;
        self.basis[row] = entering;
        self.in_basis[entering] = true;
        self.pivots += 1;
        self.total_pivots += 1;
        if self.pivots % REFACTOR_EVERY == 0 {
            let _ = self.refactorize();
            self.recompute_xb();
        }
    }

    /// Primal simplex on the given cost vector. Assumes a primal-feasible
    /// basis. Returns false on unboundedness.
    fn primal_simplex(&mut self, costs: &[f64], budget: &mut usize) -> Result<bool, LpError> {
        let mut stall = 0usize;
        let mut bland = false;
        let mut last_obj = f64::INFINITY;
        loop {
            if *budget == 0 {
                return Err(LpError::PivotBudget(self.pivots));
            }
            *budget -= 1;
            let y = self.btran_costs(costs);
            let mut enter: Option<usize> = None;
            let mut best = -DTOL;
            for j in 0..self.cols.len() {
                if self.in_basis[j] || self.banned[j] {
                    continue;
                }
                let d = costs[j] - self.col_dot(&y, j);
                if bland {
                    if d < -DTOL {
                        enter = Some(j);
                        break;
                    }
                } else if d < best {
                    best = d;
                    enter = Some(j);
                }
            }
            let Some(j) = enter else {
                return Ok(true);
            };
            let w = self.ftran(j);
            let mut row: Option<usize> = None;
            let mut min_ratio = f64::INFINITY;
            for i in 0..self.m {
                if w[i] > 1e-9 {
                    let ratio = self.xb[i].max(0.0) / w[i];
                    let better = match row {
                        None => true,
                        Some(r) => {
                            ratio < min_ratio - 1e-10
                                || (ratio < min_ratio + 1e-10
                                    && if bland {
                                        self.basis[i] < self.basis[r]
                                    } else {
                                        w[i].abs() > w[r].abs()
                                    })
                        }
                    };
                    if better {
                        min_ratio = ratio;
                        row = Some(i);
                    }
                }
            }
            let Some(r) = row else {
                return Ok(false); // unbounded direction
            };
            self.pivot(r, j, &w);
            let obj: f64 = self
                .basis
                .iter()
                .zip(&self.xb)
                .map(|(&bc, &x)| costs[bc] * x)
                .sum();
            if obj < last_obj - 1e-12 {
                stall = 0;
                bland = false;
            } else {
                stall += 1;
                if stall > 2 * (self.m + 10) {
                    bland = true;
                }
            }
            last_obj = obj;
        }
    }

    /// Dual simplex: assumes dual feasibility for `costs`, restores primal
    /// feasibility. Returns false if the program is primal infeasible.
    fn dual_simplex(&mut self, costs: &[f64], budget: &mut usize) -> Result<bool, LpError> {
        loop {
            if *budget == 0 {
                return Err(LpError::PivotBudget(self.pivots));
            }
            *budget -= 1;
            let mut row: Option<usize> = None;
            let mut most_neg = -PTOL;
            for i in 0..self.m {
                if self.xb[i] < most_neg {
                    most_neg = self.xb[i];
                    row = Some(i);
                }
            }
            let Some(r) = row else {
                return Ok(true);
            };
            let m = self.m;
            let rho = &self.binv[r * m..(r + 1) * m];
            let y = self.btran_costs(costs);
            let mut enter: Option<(usize, f64)> = None;
            let mut min_ratio = f64::INFINITY;
            for j in 0..self.cols.len() {
                if self.in_basis[j] || self.banned[j] {
                    continue;
                }
                let alpha = self.col_dot(rho, j);
                if alpha < -1e-9 {
                    let d = (costs[j] - self.col_dot(&y, j)).max(0.0);
                    let ratio = d / (-alpha);
                    // ties by pivot magnitude: big pivots are stabler and
                    // cut through degenerate vertices far faster
                    let better = match enter {
                        None => true,
                        Some((_, a)) => {
                            ratio < min_ratio - 1e-10
                                || (ratio < min_ratio + 1e-10 && -alpha > -a)
                        }
                    };
                    if better {
                        min_ratio = ratio;
                        enter = Some((j, alpha));
                    }
                }
            }
            let enter = enter.map(|(j, _)| j);
            let Some(j) = enter else {
                return Ok(false); // primal infeasible
            };
            let w = self.ftran(j);
            self.pivot(r, j, &w);
        }
    }

    /// Solves (or re-solves) the program. Cold solves run a two-phase
    /// primal; warm solves reuse the basis via the dual simplex and fall
    /// back to a cold solve when anything degrades.
    pub fn solve(&mut self) -> Result<LpStatus, LpError> {
        let budget = 1000 + 10 * (self.m + self.cols.len());
        if self.solved {
            self.solve_stats.0 += 1;
            let mut budget = budget;
            match self.warm_solve(&mut budget) {
                Ok(st) => {
                    if st == LpStatus::Optimal && self.verify().is_ok() {
                        return Ok(st);
                    }
                    if st != LpStatus::Optimal {
                        return Ok(st);
                    }
                }
                Err(_) => {}
            }
            // degraded: fall through to a cold solve
            self.solved = false;
        }
        self.solve_stats.1 += 1;
        let mut budget = budget;
        let st = self.cold_solve(&mut budget)?;
        if st == LpStatus::Optimal {
            self.verify()
                .map_err(|e| LpError::Numerical(format!("post-solve verification: {e}")))?;
            self.solved = true;
        }
        Ok(st)
    }

    fn warm_solve(&mut self, budget: &mut usize) -> Result<LpStatus, LpError> {
        self.recompute_xb();
        let cost = self.cost.clone();
        if self.dual_simplex(&cost, budget)? {
            Ok(LpStatus::Optimal)
        } else {
            Ok(LpStatus::Infeasible)
        }
    }

    fn cold_solve(&mut self, budget: &mut usize) -> Result<LpStatus, LpError> {
        let m = self.m;
        // build the starting basis: slacks where possible, artificials elsewhere
        self.basis.clear();
        for f in self.in_basis.iter_mut() {
            *f = false;
        }
        // find a slack with +1 in each row
        let mut row_basic: Vec<Option<usize>> = vec![None; m];
        for (j, col) in self.cols.iter().enumerate() {
            if self.kind[j] == ColKind::Slack && col.len() == 1 && col[0].1 == 1.0 {
                row_basic[col[0].0 as usize] = Some(j);
            }
        }
        let mut artificials = Vec::new();
        for r in 0..m {
            let j = match row_basic[r] {
                Some(j) => j,
                None => {
                    let id = self.push_col(ColKind::Artificial, 0.0);
                    self.cols[id].push((r as u32, 1.0));
                    artificials.push(id);
                    id
                }
            };
            self.basis.push(j);
            self.in_basis[j] = true;
        }
        self.binv = vec![0.0; m * m];
        for r in 0..m {
            self.binv[r * m + r] = 1.0;
        }
        self.recompute_xb();
        // rows whose starting slack sits at a negative value (Le rows with
        // negative rhs appended after a solve) get a signed artificial
        for r in 0..m {
            if self.xb[r] < 0.0 && matches!(self.kind[self.basis[r]], ColKind::Slack) {
                let sign = if self.b[r] >= 0.0 { 1.0 } else { -1.0 };
                let id = self.push_col(ColKind::Artificial, 0.0);
                self.cols[id].push((r as u32, sign));
                artificials.push(id);
                let old = self.basis[r];
                self.in_basis[old] = false;
                self.basis[r] = id;
                self.in_basis[id] = true;
                self.binv[r * m + r] = sign;
            }
        }
        self.recompute_xb();

        if !artificials.is_empty() {
            let mut phase1 = vec![0.0; self.cols.len()];
            for &a in &artificials {
                phase1[a] = 1.0;
            }
            let ok = self.primal_simplex(&phase1, budget)?;
            debug_assert!(ok, "phase-1 is bounded below by 0");
            let p1: f64 = self
                .basis
                .iter()
                .zip(&self.xb)
                .map(|(&bc, &x)| phase1[bc] * x)
                .sum();
            let scale = 1.0 + self.b.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
            if p1 > 1e-7 * scale {
                return Ok(LpStatus::Infeasible);
            }
            // ban artificials and pivot basic ones out where possible
            for &a in &artificials {
                self.banned[a] = true;
            }
            for r in 0..m {
                if self.kind[self.basis[r]] == ColKind::Artificial {
                    let rho: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();
                    let mut found = None;
                    for j in 0..self.cols.len() {
                        if !self.in_basis[j] && !self.banned[j] {
                            let alpha = self.col_dot(&rho, j);
                            if alpha.abs() > 1e-7 {
                                found = Some(j);
                                break;
                            }
                        }
                    }
                    if let Some(j) = found {
                        let w = self.ftran(j);
                        self.pivot(r, j, &w);
                    }
                }
            }
        }
        while self.cost.len() < self.cols.len() {
            self.cost.push(0.0);
        }
        let cost = self.cost.clone();
        if !self.primal_simplex(&cost, budget)? {
            return Ok(LpStatus::Unbounded);
        }
        Ok(LpStatus::Optimal)
    }

    fn verify(&self) -> Result<(), String> {
        let resid = self.primal_residual();
        if resid > 1e-7 {
            return Err(format!("primal residual {resid}"));
        }
        let gap = self.duality_gap();
        if gap > tol::LP_GAP * (1.0 + self.internal_objective().abs()) {
            return Err(format!("duality gap {gap}"));
        }
        Ok(())
    }

    pub fn primal_residual(&self) -> f64 {
        // Ax - b over all rows using the basic solution, plus negativity
        let x = self.full_primal();
        let mut worst = 0.0f64;
        let mut lhs = vec![0.0; self.m];
        for (j, col) in self.cols.iter().enumerate() {
            if x[j] != 0.0 {
                for &(r, v) in col {
                    lhs[r as usize] += v * x[j];
                }
            }
        }
        for r in 0..self.m {
            worst = worst.max((lhs[r] - self.b[r]).abs());
        }
        for &v in &x {
            worst = worst.max(-v);
        }
        worst
    }

    fn full_primal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.cols.len()];
        for (k, &bc) in self.basis.iter().enumerate() {
            x[bc] = self.xb[k];
        }
        x
    }

    pub fn primal_structural(&self) -> Vec<f64> {
        let x = self.full_primal();
        x[..self.n_struct].to_vec()
    }

    pub fn primal(&self, var: usize) -> f64 {
        debug_assert!(var < self.n_struct);
        for (k, &bc) in self.basis.iter().enumerate() {
            if bc == var {
                return self.xb[k];
            }
        }
        0.0
    }

    pub fn internal_objective(&self) -> f64 {
        self.basis
            .iter()
            .zip(&self.xb)
            .map(|(&bc, &x)| self.cost[bc] * x)
            .sum()
    }

    pub fn user_objective(&self) -> f64 {
        if self.maximize {
            -self.internal_objective()
        } else {
            self.internal_objective()
        }
    }

    pub fn duality_gap(&self) -> f64 {
        let y = self.btran_costs(&self.cost);
        let dual_obj: f64 = y.iter().zip(&self.b).map(|(a, b)| a * b).sum();
        (dual_obj - self.internal_objective()).abs()
    }

    /// Row duals in the user's orientation (objective = sum dual_i * rhs_i
    /// at optimality for programs without variable upper bounds).
    pub fn user_duals(&self) -> Vec<f64> {
        let y = self.btran_costs(&self.cost);
        (0..self.m)
            .map(|r| {
                let v = y[r] * self.row_sign[r];
                if self.maximize {
                    -v
                } else {
                    v
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp1() -> LinearProgram {
        // max x s.t. x <= 3
        let mut lp = LinearProgram::new(1, true, vec![1.0]);
        lp.add_row(vec![(0, 1.0)], Rel::Le, 3.0);
        lp
    }

    #[test]
    fn max_single_var() {
        let s = solve_lp(&lp1()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 3.0).abs() < 1e-9);
        assert!((s.primal[0] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_split() {
        // max x+y s.t. x+y <= 1
        let mut lp = LinearProgram::new(2, true, vec![1.0, 1.0]);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], Rel::Le, 1.0);
        let s = solve_lp(&lp).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-9);
        assert!((s.primal[0] + s.primal[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn equality_rows_native() {
        // max 2x + y s.t. x + y = 1, x <= 0.6
        let mut lp = LinearProgram::new(2, true, vec![2.0, 1.0]);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], Rel::Eq, 1.0);
        lp.add_row(vec![(0, 1.0)], Rel::Le, 0.6);
        let s = solve_lp(&lp).unwrap();
        assert!((s.objective - 1.6).abs() < 1e-9);
        assert!((s.primal[0] - 0.6).abs() < 1e-9);
    }

    #[test]
    fn ge_rows_and_duals() {
        // min 3x + 2y s.t. x + y >= 2, x - y >= -1
        let mut lp = LinearProgram::new(2, false, vec![3.0, 2.0]);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], Rel::Ge, 2.0);
        lp.add_row(vec![(0, 1.0), (1, -1.0)], Rel::Ge, -1.0);
        let s = solve_lp(&lp).unwrap();
        assert!((s.objective - 4.5).abs() < 1e-8, "got {}", s.objective);
        let dual_obj: f64 = s.dual[0] * 2.0 + s.dual[1] * -1.0;
        assert!((dual_obj - s.objective).abs() < 1e-7);
    }

    #[test]
    fn infeasible_detected() {
        let mut lp = LinearProgram::new(1, true, vec![1.0]);
        lp.add_row(vec![(0, 1.0)], Rel::Le, 1.0);
        lp.add_row(vec![(0, 1.0)], Rel::Ge, 2.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new(2, true, vec![1.0, 0.0]);
        lp.add_row(vec![(1, 1.0)], Rel::Le, 1.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
    }

    #[test]
    fn permuted_rows_same_objective() {
        let mut lp = LinearProgram::new(3, true, vec![5.0, 4.0, 3.0]);
        lp.add_row(vec![(0, 2.0), (1, 3.0), (2, 1.0)], Rel::Le, 5.0);
        lp.add_row(vec![(0, 4.0), (1, 1.0), (2, 2.0)], Rel::Le, 11.0);
        lp.add_row(vec![(0, 3.0), (1, 4.0), (2, 2.0)], Rel::Le, 8.0);
        let s1 = solve_lp(&lp).unwrap();
        let mut lp2 = lp.clone();
        lp2.rows.rotate_left(1);
        let s2 = solve_lp(&lp2).unwrap();
        assert!((s1.objective - 13.0).abs() < 1e-9);
        assert!((s1.objective - s2.objective).abs() < 1e-9);
    }

    #[test]
    fn upper_bounds() {
        let mut lp = LinearProgram::new(2, true, vec![1.0, 1.0]);
        lp.upper[0] = Some(0.25);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], Rel::Le, 1.0);
        let s = solve_lp(&lp).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-9);
        assert!(s.primal[0] <= 0.25 + 1e-9);
    }

    #[test]
    fn warm_restart_rhs_change() {
        let mut eng = IncrementalLp::new(2, true, &[2.0, 1.0]);
        let r = eng.add_row(&[(0, 1.0), (1, 1.0)], Rel::Eq, 1.0);
        eng.add_row(&[(0, 1.0)], Rel::Le, 0.6);
        assert_eq!(eng.solve().unwrap(), LpStatus::Optimal);
        assert!((eng.user_objective() - 1.6).abs() < 1e-9);
        eng.set_rhs(r, 0.5);
        assert_eq!(eng.solve().unwrap(), LpStatus::Optimal);
        assert!((eng.user_objective() - 1.0).abs() < 1e-9, "{}", eng.user_objective());
        eng.set_rhs(r, 2.0);
        assert_eq!(eng.solve().unwrap(), LpStatus::Optimal);
        assert!((eng.user_objective() - 2.6).abs() < 1e-9);
    }

    #[test]
    fn warm_restart_added_row() {
        let mut eng = IncrementalLp::new(2, true, &[1.0, 1.0]);
        eng.add_row(&[(0, 1.0)], Rel::Le, 2.0);
        eng.add_row(&[(1, 1.0)], Rel::Le, 2.0);
        assert_eq!(eng.solve().unwrap(), LpStatus::Optimal);
        assert!((eng.user_objective() - 4.0).abs() < 1e-9);
        eng.add_row(&[(0, 1.0), (1, 1.0)], Rel::Le, 1.5);
        assert_eq!(eng.solve().unwrap(), LpStatus::Optimal);
        assert!((eng.user_objective() - 1.5).abs() < 1e-9);
        // cut below zero: infeasible with a >= through negative slack path
        eng.add_row(&[(0, -1.0), (1, -1.0)], Rel::Le, -3.0);
        assert_eq!(eng.solve().unwrap(), LpStatus::Infeasible);
    }

    #[test]
    fn tableau_dump_contains_rows() {
        let text = lp1().dump_tableau();
        assert!(text.contains("max"));
        assert!(text.contains("<= 3"));
    }
}
