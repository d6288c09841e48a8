//! The scalar kernel `inf_lambda max(lambda c, d / lambda)` over several
//! magnitude sets, and the feasibility question behind every criterion.

use orbitforge::gamma::{feasible, objective, GammaSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (c, d): (f64, f64) = (0.01, 4.0);
    let sets = [
        GammaSet::AllNonzero,
        GammaSet::ZeroToOne,
        GammaSet::OneToInf,
        GammaSet::annulus(0.5, 8.0)?,
        GammaSet::pow2_grid(0, 6)?,
        GammaSet::Singleton { modulus: 3.0, phase: 1.0 },
    ];
    println!("c = {c}, d = {d}; unconstrained optimum sqrt(cd) = {}", (c * d).sqrt());
    for g in &sets {
        let o = objective(c, d, g);
        let f = feasible(c, d, 0.5, g);
        println!(
            "{:<14} inf = {:<10.6} argmin = {:<12} feasible(eps = 0.5) = {} {}",
            g.label(),
            o.value,
            o.argmin.map_or("-".into(), |a| format!("{a:.4}")),
            f.feasible,
            f.witness.map_or(String::new(), |w| format!("at {w:.4}")),
        );
    }
    Ok(())
}
