#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use orbitforge::criteria::{salas_value, CriterionReport, Verdict};
use orbitforge::criteria::pointwise_value;
use orbitforge::gamma::GammaSet;
use orbitforge::group::{GroupPoint, RealInterval, Space, SupportedVec};
use orbitforge::weights::{DiscreteWeight, RealWeight, TailModel, Weight};

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Window of `1..=6` log2 values in `[-4, 4]`, with affine tails of slope
/// `b/2`, `b in -4..=4`, glued to the edges.
pub fn random_weight(r: &mut ChaCha8Rng) -> DiscreteWeight {
    let lo = r.gen_range(-4..=0);
    let len = r.gen_range(1..=6);
    let vals: Vec<f64> = (0..len).map(|_| f64::from(r.gen_range(-8..=8)) / 2.0).collect();
    let hi = lo + len as i64 - 1;
    let bl = f64::from(r.gen_range(-4..=4)) / 2.0;
    let br = f64::from(r.gen_range(-4..=4)) / 2.0;
    let left = TailModel::Log2Affine { a: vals[0] - bl * lo as f64, b: bl };
    let right = TailModel::Log2Affine { a: vals[len - 1] - br * hi as f64, b: br };
    DiscreteWeight::from_log2(lo, vals, left, right).expect("glued tails")
}

pub fn random_vector(r: &mut ChaCha8Rng, radius: i64, len: usize) -> SupportedVec {
    let entries = (0..len).map(|_| {
        (
            GroupPoint::Int(r.gen_range(-radius..=radius)),
            Complex64::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)),
        )
    });
    SupportedVec::from_entries(Space::Z, entries).expect("discrete entries")
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Adaptive Simpson on `[a, b]` for a function smooth there.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// `integral w^p` over `iv` by quadrature, split at every segment edge.
pub fn quadrature_pow(w: &RealWeight, iv: &RealInterval, p: f64) -> f64 {
    let a = iv.anchor;
    let mut cuts = vec![iv.lo, iv.hi];
    for s in w.segments() {
        let pos = w.anchors().position(s.anchor).expect("anchor in table");
        for u in [s.lo, s.hi] {
            let x = (pos - a) as f64 + u;
            if x > iv.lo && x < iv.hi {
                cuts.push(x);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .map(|c| {
            let (x0, x1) = (c[0], c[1]);
            // stay off the edges, where a reciprocal piece may be singular
            let f = |x: f64| {
                let x = x.clamp(x0 + 1e-300, x1);
                w.value(&orbitforge::group::RealPoint::new(a, x)).expect("finite").powf(p)
            };
            let scale = f(0.5 * (x0 + x1)).abs().max(1e-300) * (x1 - x0);
            simpson(&f, x0, x1, 1e-14 * scale)
        })
        .sum()
}

pub fn norm_axioms(w: &Weight, f: &SupportedVec, g: &SupportedVec, c: Complex64, p: f64) -> Check {
    let nf = w.weighted_norm(f, p).map_err(|e| e.to_string())?;
    let ng = w.weighted_norm(g, p).map_err(|e| e.to_string())?;
    let nsum = w.weighted_norm(&f.add(g).map_err(|e| e.to_string())?, p).map_err(|e| e.to_string())?;
    let nc = w.weighted_norm(&f.scale(c), p).map_err(|e| e.to_string())?;
    if nf < 0.0 || (nf == 0.0) != f.is_zero() {
        return Err(format!("definiteness: ||f|| = {nf}"));
    }
    if nsum > (nf + ng) * (1.0 + 1e-12) + 1e-300 {
        return Err(format!("triangle: {nsum} > {nf} + {ng}"));
    }
    if !close(nc, c.norm() * nf, 1e-12) && nf > 0.0 {
        return Err(format!("homogeneity: {nc} vs {}", c.norm() * nf));
    }
    Ok(())
}

pub fn translation_composition(f: &SupportedVec, a: &GroupPoint, b: &GroupPoint) -> Check {
    let two = f.translate(a).and_then(|x| x.translate(b)).map_err(|e| e.to_string())?;
    let one = f.translate(&a.add(b).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let back = two.translate(&a.add(b).map_err(|e| e.to_string())?.neg()).map_err(|e| e.to_string())?;
    if two != one {
        return Err(format!("T_b T_a f != T_(a+b) f for a = {a}, b = {b}"));
    }
    if &back != f {
        return Err("T_-(a+b) does not undo T_(a+b)".into());
    }
    Ok(())
}

/// `M(a+b) <= M(a) M(b)`, and `||T_s f|| <= M(s) ||f||` on a sample vector.
pub fn m_submultiplicative(w: &Weight, a: &GroupPoint, b: &GroupPoint, f: &SupportedVec, p: f64, horizon: i64) -> Check {
    let m = |s: &GroupPoint| w.m_bound(s, horizon).map(|m| m.log2_value).map_err(|e| e.to_string());
    let ab = a.add(b).map_err(|e| e.to_string())?;
    let (la, lb, lab) = (m(a)?, m(b)?, m(&ab)?);
    if lab > la + lb + 1e-9 {
        return Err(format!("log2 M({ab}) = {lab} > {la} + {lb}"));
    }
    let nf = w.weighted_norm(f, p).map_err(|e| e.to_string())?;
    let nt = w.weighted_norm(&f.translate(a).map_err(|e| e.to_string())?, p).map_err(|e| e.to_string())?;
    if la.is_finite() && nt > la.exp2() * nf * (1.0 + 1e-9) {
        return Err(format!("||T_a f|| = {nt} > M({a}) ||f|| = {}", la.exp2() * nf));
    }
    Ok(())
}

pub fn exact_vs_quadrature(w: &RealWeight, iv: &RealInterval, p: f64) -> Check {
    let exact = w.integral_pow(iv, p);
    let quad = quadrature_pow(w, iv, p);
    if close(exact, quad, 1e-9) {
        Ok(())
    } else {
        Err(format!("integral over {iv:?}, p = {p}: exact {exact}, quadrature {quad}"))
    }
}

/// Each pointwise witness really lies below its threshold, and its scalar,
/// if any, achieves the threshold.
pub fn pointwise_witnesses_hold(w: &Weight, gamma: &GammaSet, report: &CriterionReport) -> Check {
    for wit in &report.witnesses {
        let s = wit.s.as_ref().ok_or("witness without shift")?;
        let v = pointwise_value(w, s, gamma).map_err(|e| e.to_string())?;
        if v >= wit.threshold * (1.0 + 1e-12) {
            return Err(format!("witness at {s}: value {v} not below {}", wit.threshold));
        }
        if let Some(l) = wit.lambda {
            let ws = w.eval(s).map_err(|e| e.to_string())?;
            let wm = w.eval(&s.neg()).map_err(|e| e.to_string())?;
            if (l * ws).max(wm / l) >= wit.threshold * (1.0 + 1e-9) {
                return Err(format!("witness scalar {l} at {s} misses {}", wit.threshold));
            }
        }
    }
    Ok(())
}

/// A certified failure bound is below the functional at every sampled shift
/// of its derivation window.
pub fn pointwise_failure_sound(w: &Weight, gamma: &GammaSet, report: &CriterionReport, horizon: i64) -> Check {
    let Verdict::FailsCertified { bound, window, .. } = &report.verdict else {
        return Ok(());
    };
    for s in window.shifts.enumerate(w.space(), horizon).map_err(|e| e.to_string())? {
        let v = pointwise_value(w, &s, gamma).map_err(|e| e.to_string())?;
        if v < *bound * (1.0 - 1e-12) {
            return Err(format!("value {v} at {s} below certified bound {bound}"));
        }
    }
    Ok(())
}

pub fn salas_failure_sound(w: &DiscreteWeight, report: &CriterionReport, product: bool, horizon: i64) -> Check {
    let Verdict::FailsCertified { bound, window, .. } = &report.verdict else {
        return Ok(());
    };
    let q = window.q.ok_or("salas failure without q")?;
    for s in window.shifts.enumerate(Space::Z, horizon).map_err(|e| e.to_string())? {
        let n = s.as_int().ok_or("non-integer n")?;
        let v = salas_value(w, q, n, product);
        if v < *bound * (1.0 - 1e-12) {
            return Err(format!("salas value {v} at n = {n}, q = {q} below {bound}"));
        }
    }
    Ok(())
}
