use margrev::catalog::uniform_grid_agent;
use margrev::single_agent::LotpSolver;

fn main() {
    let m: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(30);
    let agent = uniform_grid_agent(m, false);
    let mut solver = LotpSolver::for_steps(&agent);
    let t0 = std::time::Instant::now();
    for j in 0..=m {
        let _ = solver.solve_step(j).unwrap();
    }
    println!("total {:?} pivots={} warm={} cold={} ic_rows={}", t0.elapsed(),
        solver.eng.total_pivots, solver.eng.solve_stats.0, solver.eng.solve_stats.1,
        solver.ic_count());
}
