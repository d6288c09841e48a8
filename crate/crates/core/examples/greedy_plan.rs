//! Greedy plan for the one-sided weight `2^-n` / `1` with scalars `2^k`,
//! and the double series evaluated on it.

use orbitforge::criteria::{greedy_plan, theorem_a_series, GreedyOutcome, PlanRule};
use orbitforge::gamma::GammaSet;
use orbitforge::group::Window;
use orbitforge::repro::ex52_v1;
use orbitforge::shifts::ShiftSet;
use orbitforge::synthesis::PlanTarget;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = ex52_v1();
    let p = 3.0;
    let gamma = GammaSet::pow2_grid(0, 40)?;
    let targets: Vec<PlanTarget> = (1..=10)
        .map(|n| PlanTarget { window: Window::centered(n), alpha: 1.0 })
        .collect();
    let out = greedy_plan(&w, &ShiftSet::HalfLinePos, &gamma, p, &targets, 4096, PlanRule::Majorant)?;
    let GreedyOutcome::Plan(plan) = out else {
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(());
    };
    println!("n\ts_n\tlog2 lambda_n\tmargin");
    for st in &plan.steps {
        println!("{}\t{}\t{}\t{:.3}", st.n, st.s, st.lambda.log2(), st.margin());
    }
    let series = theorem_a_series(&plan, &w, p, 10)?;
    println!("partial sum {:.6}, disjoint {}", series.partial_sum, series.disjoint_ok);
    Ok(())
}
