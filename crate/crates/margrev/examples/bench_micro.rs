use margrev::catalog::uniform_grid_agent;
use margrev::model::InterimOutcomeRule;

fn main() {
    let agent = uniform_grid_agent(40, false);
    let rule = InterimOutcomeRule::null(&agent);
    let t0 = std::time::Instant::now();
    let mut acc = 0.0;
    for _round in 0..80 {
        for t in 0..40 {
            for r in 0..40 {
                acc += rule.interim_utility(&agent, t, r);
            }
        }
    }
    println!("scan-equivalent: {:?} (acc {acc})", t0.elapsed());
}
