use margrev::catalog::uniform_grid_agent;
use margrev::single_agent::PreparedAgent;

fn main() {
    let t0 = std::time::Instant::now();
    let agent = uniform_grid_agent(100, false);
    let prep = PreparedAgent::build(&agent).unwrap();
    let dt = t0.elapsed();
    let (qs, vals) = prep.curve.knots();
    let mut worst = 0.0f64;
    for (q, v) in qs.iter().zip(vals) {
        worst = worst.max((v - (q - q * q)).abs());
    }
    println!("M=100 curve built in {:.2?}; max |R - (q - q^2)| = {:.5}", dt, worst);
}
