//! Prints every experiment table as CSV.

use orbitforge::repro::{run_experiment, ExperimentParams, EXPERIMENTS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for id in EXPERIMENTS {
        println!("# {id}");
        print!("{}", run_experiment(id, &ExperimentParams::defaults(id))?.to_csv());
    }
    Ok(())
}
