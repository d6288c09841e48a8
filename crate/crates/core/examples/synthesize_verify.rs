//! Builds a truncated dense-vector candidate for the two-sided weight
//! `2^-|n|` with the single scalar 1, then checks every certificate
//! against a direct measurement of the orbit error.

use num_complex::Complex64;
use orbitforge::approx::orbit_error;
use orbitforge::criteria::{greedy_plan, GreedyOutcome, PlanRule};
use orbitforge::gamma::GammaSet;
use orbitforge::repro::twosided_exp;
use orbitforge::shifts::ShiftSet;
use orbitforge::synthesis::{build_vector, enumerate_targets, DenseVectorCandidate, TargetConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = twosided_exp();
    let p = 2.0;
    let gamma = GammaSet::Singleton { modulus: 1.0, phase: 0.0 };
    let targets = enumerate_targets(TargetConfig::default())?.take(12)?;
    let plan_targets: Vec<_> = targets.iter().map(|t| t.plan_target(p)).collect();
    let GreedyOutcome::Plan(plan) = greedy_plan(&w, &ShiftSet::All, &gamma, p, &plan_targets, 4096, PlanRule::Exact)? else {
        return Err("no plan within the horizon".into());
    };
    let c = build_vector(&plan, &w, &targets, 12)?;
    println!("support size {}, ||f|| <= {:.4}", c.components[0].len(), c.norm_bound);
    println!("n\ts_n\tbound\t\tmeasured");
    for cert in &c.certificates {
        let step = &plan.steps[cert.n - 1];
        let m = orbit_error(&c.components[0], &targets[cert.n - 1].components[0], &step.s, Complex64::new(step.lambda, 0.0), &w, p)?;
        println!("{}\t{}\t{:.3e}\t{:.3e}", cert.n, step.s, cert.bound, m);
    }
    // the JSON form reloads to the same certificates
    let again = DenseVectorCandidate::from_json(&c.to_json())?;
    assert_eq!(again.certificates, c.certificates);
    Ok(())
}
