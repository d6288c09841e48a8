//! Windowed criterion, sup and norm variants, for a one-sided weight under
//! several scalar sets.

use orbitforge::criteria::{default_schedule, theorem_b_check, BVariant};
use orbitforge::gamma::GammaSet;
use orbitforge::group::Space;
use orbitforge::repro::{ex52_v1, twosided_exp};
use orbitforge::shifts::ShiftSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schedule = default_schedule(Space::Z, 10)?;
    for (name, w) in [("ex52_v1", ex52_v1()), ("twosided_exp", twosided_exp())] {
        for gamma in [GammaSet::AllNonzero, GammaSet::OneToInf, GammaSet::ZeroToOne, GammaSet::Singleton { modulus: 1.0, phase: 0.0 }] {
            for variant in [BVariant::Sup, BVariant::Norm] {
                let r = theorem_b_check(&w, &ShiftSet::HalfLinePos, &gamma, 2.0, &schedule, 4096, variant)?;
                println!("{name:<13} {:<12} {variant:?}\t{}", gamma.label(), r.verdict.name());
            }
        }
    }
    Ok(())
}
