//! Pointwise and unit-translation criteria on the two one-sided weights and
//! on the doubly exponential weight, where the verdicts disagree.

use orbitforge::criteria::{pointwise_gamma_criterion, salas_hypercyclic, salas_supercyclic};
use orbitforge::gamma::GammaSet;
use orbitforge::repro::{ex52_v1, ex52_v2, final_z};
use orbitforge::shifts::ShiftSet;
use orbitforge::weights::Weight;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = 4096;
    for (name, w, shifts) in [
        ("ex52_v1", ex52_v1(), ShiftSet::HalfLinePos),
        ("ex52_v2", ex52_v2(), ShiftSet::HalfLinePos),
        ("final_z", final_z(), ShiftSet::HalfLineNeg),
    ] {
        let Weight::Discrete(dw) = &w else { unreachable!() };
        let pw = pointwise_gamma_criterion(&w, &shifts, &GammaSet::AllNonzero, h)?;
        let hyper = salas_hypercyclic(dw, 2, h)?;
        let sup = salas_supercyclic(dw, 2, h)?;
        println!("{name}");
        println!("  pointwise (all scalars)  {}", pw.verdict.name());
        println!("  salas hypercyclic        {}", hyper.verdict.name());
        println!("  salas supercyclic        {}", sup.verdict.name());
        for note in &pw.notes {
            println!("  note: {note}");
        }
    }
    let pw = pointwise_gamma_criterion(&final_z(), &ShiftSet::HalfLineNeg, &GammaSet::AllNonzero, h)?;
    println!("\nfinal_z pointwise report:\n{}", serde_json::to_string_pretty(&pw.to_json())?);
    Ok(())
}
