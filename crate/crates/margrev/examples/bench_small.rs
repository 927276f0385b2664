use margrev::catalog::uniform_grid_agent;
use margrev::single_agent::PreparedAgent;

fn main() {
    for m in [10usize, 20, 30, 40] {
        let t0 = std::time::Instant::now();
        let agent = uniform_grid_agent(m, false);
        let prep = PreparedAgent::build(&agent).unwrap();
        println!("M={m}: {:.2?}  R(0.5)={:.4}", t0.elapsed(), prep.curve.value_at(0.5));
    }
}
