//! Weights on Z, Z^2 and R: point values, local norms, weighted norms and
//! translation norms M(s).

use num_complex::Complex64;
use orbitforge::group::{GroupPoint, RealInterval, Space, SupportedVec, Window};
use orbitforge::repro::{final_z, r_peaks, twosided_exp};
use orbitforge::weights::{DiscreteWeight, ProductWeight, Weight};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = twosided_exp();
    let f = SupportedVec::from_entries(Space::Z, (-3..=3).map(|n| (GroupPoint::Int(n), Complex64::new(1.0, 0.0))))?;
    println!("2^-|n|: ||1_[-3,3]||_2 = {:.6}, M(1) = {}", w.weighted_norm(&f, 2.0)?, w.m_bound(&GroupPoint::Int(1), 64)?.value);

    let z = final_z();
    for s in [1, -1, -5] {
        let m = z.m_bound(&GroupPoint::Int(s), 4096)?;
        println!("final_z: M({s}) = {} (certified {})", m.value, m.certified);
    }

    let Weight::Discrete(d) = twosided_exp() else { unreachable!() };
    let p2 = Weight::Product(ProductWeight::new(vec![d.clone(), DiscreteWeight::constant(2.0)?])?);
    let k = Window::int_box(vec![-1, -1], vec![1, 1])?;
    println!("Z^2 product weight: local 2-norm on [-1,1]^2 = {:.6}", p2.local_norm(&k, 2.0)?);

    let r = r_peaks(8)?;
    let a = 720;
    let k = Window::real_union(vec![RealInterval::new(a, -1.0, 0.5)?])?;
    println!("r_peaks around 6!: sup = {}, local 1-norm = {:.6}", r.sup_on(&k)?, r.local_norm(&k, 1.0)?);
    for n in [3, 5, 8] {
        let s = (-(n as f64)).exp2();
        println!("r_peaks: M(2^-{n}) = {:.2}", r.m_bound(&GroupPoint::real(s), 8)?.value);
    }
    Ok(())
}
