//! Best `lambda T_s f` approximation of a target, against the brute-force
//! grid oracle, for a few exponents and scalar sets.

use num_complex::Complex64;
use orbitforge::approx::{best_approx, best_lambda, brute_oracle, BruteGrid};
use orbitforge::gamma::GammaSet;
use orbitforge::group::{GroupPoint, Space, SupportedVec};
use orbitforge::repro::twosided_exp;
use orbitforge::shifts::ShiftSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = twosided_exp();
    let f = SupportedVec::from_entries(
        Space::Z,
        [
            (GroupPoint::Int(0), Complex64::new(1.0, 0.0)),
            (GroupPoint::Int(1), Complex64::new(0.5, -0.5)),
        ],
    )?;
    let g = SupportedVec::from_entries(
        Space::Z,
        [
            (GroupPoint::Int(3), Complex64::new(0.0, 2.0)),
            (GroupPoint::Int(4), Complex64::new(1.0, 1.0)),
        ],
    )?;
    let s = GroupPoint::Int(3);
    for gamma in [GammaSet::AllNonzero, GammaSet::annulus(0.5, 1.5)?, GammaSet::pow2_grid(-2, 2)?] {
        for p in [1.0, 2.0, 3.0] {
            let fit = best_lambda(&f, &g, &s, &gamma, p, &w)?;
            let brute = brute_oracle(&f, &g, &s, &gamma, p, &w, BruteGrid::default())?;
            println!(
                "{:<12} p = {p}: lambda = {:.4}, error = {:.6}, grid = {:.6}",
                gamma.label(),
                fit.lambda.unwrap_or_default(),
                fit.error,
                brute
            );
        }
    }
    let best = best_approx(&f, &g, &ShiftSet::All, &GammaSet::AllNonzero, 2.0, &w, 8)?;
    println!("best over |s| <= 8: {}", best.to_json());
    Ok(())
}
