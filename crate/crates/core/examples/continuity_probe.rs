//! `||T_s f - f||` for `s = 2^-n` on the peaked real weight. For `p > 1`
//! it grows with `n` instead of tending to zero.

use orbitforge::approx::continuity_probe;
use orbitforge::group::GroupPoint;
use orbitforge::repro::{claim2_vector, r_peaks};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_max = 12;
    let w = r_peaks(n_max)?;
    let f = claim2_vector(n_max)?;
    let approach: Vec<_> = (2..=n_max - 2).map(|n| GroupPoint::real((-(n as f64)).exp2())).collect();
    for p in [1.0, 1.5, 2.0] {
        let d = continuity_probe(&f, &GroupPoint::real(0.0), &approach, &w, p)?;
        let row: Vec<String> = d.iter().map(|x| format!("{x:.3}")).collect();
        println!("p = {p}: {}", row.join(" "));
    }
    Ok(())
}
