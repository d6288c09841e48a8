//! Approximation of targets by orbit elements `lambda T_s f`.
//!
//! Here phases matter: `Singleton` is the single complex scalar it
//! describes, every other descriptor is the rotation-invariant set of
//! scalars whose modulus lies in `|Gamma \ {0}|`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gamma::{GammaSet, Magnitudes};
use crate::group::{GroupPoint, RealInterval, RealPoint, SupportedVec};
use crate::shifts::ShiftSet;
use crate::weights::Weight;

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxResult {
    pub s: GroupPoint,
    /// `None` when no scalar attains the error: either `T_s f = 0`, or the
    /// infimum is only approached as `|lambda| -> 0`
    pub lambda: Option<Complex64>,
    pub error: f64,
    pub attained: bool,
}

impl ApproxResult {
    pub fn to_json(&self) -> Value {
        json!({
            "s": self.s,
            "lambda": self.lambda.map(|l| json!({"re": l.re, "im": l.im})),
            "error": self.error,
            "attained": self.attained,
        })
    }
}

/// Best scalar for a fixed shift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaFit {
    pub lambda: Option<Complex64>,
    pub error: f64,
    pub attained: bool,
}

/// `||lambda T_s f - g||_{p,w}`.
pub fn orbit_error(
    f: &SupportedVec,
    g: &SupportedVec,
    s: &GroupPoint,
    lambda: Complex64,
    w: &Weight,
    p: f64,
) -> Result<f64> {
    let h = f.translate(s)?.scale(lambda);
    w.weighted_norm(&h.sub(g)?, p)
}

/// Constant cells of the pair `(h, g)`: `(integral of w^p over the cell, h, g)`.
struct Cells(Vec<(f64, Complex64, Complex64)>);

impl Cells {
    fn new(h: &SupportedVec, g: &SupportedVec, w: &Weight, p: f64) -> Result<Self> {
        w.space().expect(h.space())?;
        w.space().expect(g.space())?;
        let mut out = Vec::new();
        match (h, g, w) {
            (SupportedVec::Step(a), SupportedVec::Step(b), Weight::Real(rw)) => {
                let mut cuts: Vec<RealPoint> = a
                    .iter()
                    .chain(b.iter())
                    .flat_map(|pc| [pc.interval.start(), pc.interval.end()])
                    .collect();
                cuts.sort_by(|x, y| x.cmp_position(y));
                cuts.dedup_by(|x, y| x.diff(y) == 0.0);
                for c in cuts.windows(2) {
                    let len = c[1].diff(&c[0]);
                    if len <= 0.0 {
                        continue;
                    }
                    let mid = GroupPoint::Real(c[0].shifted(0.5 * len));
                    let (hv, gv) = (h.value_at(&mid), g.value_at(&mid));
                    if hv == Complex64::default() && gv == Complex64::default() {
                        continue;
                    }
                    let iv = RealInterval {
                        anchor: c[0].anchor,
                        lo: c[0].offset,
                        hi: c[0].offset + len,
                    };
                    out.push((rw.integral_pow(&iv, p), hv, gv));
                }
            }
            _ => {
                let mut points: Vec<&GroupPoint> = h.entries().chain(g.entries()).map(|e| e.0).collect();
                points.sort();
                points.dedup();
                for t in points {
                    out.push(((p * w.log2_eval(t)?).exp2(), h.value_at(t), g.value_at(t)));
                }
            }
        }
        Ok(Cells(out))
    }

    fn phi(&self, lambda: Complex64, p: f64) -> f64 {
        self.0
            .iter()
            .map(|(m, h, g)| m * (lambda * h - g).norm().powf(p))
            .sum()
    }

    fn norm_pow_h(&self, p: f64) -> f64 {
        self.0.iter().map(|(m, h, _)| m * h.norm().powf(p)).sum()
    }

    fn norm_pow_g(&self, p: f64) -> f64 {
        self.0.iter().map(|(m, _, g)| m * g.norm().powf(p)).sum()
    }

    fn is_real(&self) -> bool {
        self.0.iter().all(|(_, h, g)| h.im == 0.0 && g.im == 0.0)
    }
}

/// Minimizer of a unimodal function on `[a, b]`.
fn golden(mut a: f64, mut b: f64, tol: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Unconstrained minimizer of the convex `lambda -> ||lambda h - g||^p`.
///
/// Any minimizer satisfies `|lambda| ||h|| - ||g|| <= ||g||`, which gives
/// the bracket `|Re|, |Im| <= 2 ||g|| / ||h||`.
fn free_minimizer(cells: &Cells, p: f64) -> Complex64 {
    let (nh, ng) = (cells.norm_pow_h(p).powf(1.0 / p), cells.norm_pow_g(p).powf(1.0 / p));
    if ng == 0.0 {
        return Complex64::default();
    }
    if p == 2.0 {
        let (num, den) = cells.0.iter().fold((Complex64::default(), 0.0), |(n, d), (m, h, g)| {
            (n + g * h.conj() * m, d + m * h.norm_sqr())
        });
        return num / den;
    }
    let b = 2.0 * ng / nh;
    let tol = TOL * b;
    let best_re = |im: f64| golden(-b, b, tol, |re| cells.phi(Complex64::new(re, im), p));
    if cells.is_real() {
        // the objective is symmetric under conjugation, so a real minimizer exists
        return Complex64::new(best_re(0.0).0, 0.0);
    }
    let (im, _) = golden(-b, b, tol, |im| best_re(im).1);
    Complex64::new(best_re(im).0, im)
}

/// Best phase on the circle `|lambda| = r`: a 256-point scan refined by
/// golden sections around the best cell.
fn best_on_circle(cells: &Cells, p: f64, r: f64, hint: Complex64) -> (Complex64, f64) {
    let at = |theta: f64| cells.phi(Complex64::from_polar(r, theta), p);
    let n = 256;
    let step = std::f64::consts::TAU / n as f64;
    let mut best = (hint.arg(), at(hint.arg()));
    for j in 0..n {
        let th = -std::f64::consts::PI + j as f64 * step;
        let v = at(th);
        if v < best.1 {
            best = (th, v);
        }
    }
    let (th, v) = golden(best.0 - step, best.0 + step, TOL, at);
    let (th, _) = if v <= best.1 { (th, v) } else { best };
    let lambda = Complex64::from_polar(r, th);
    (lambda, cells.phi(lambda, p))
}

/// Best `lambda` in `Gamma` for `lambda T_s f ~ g`; see the module docs for
/// how `Gamma` is read. For `p = 2` the unconstrained optimum is the
/// weighted projection `<g, h> / ||h||^2`; for other `p` it is found by
/// nested golden sections. Magnitude constraints are then enforced on the
/// boundary circles, where the convex objective attains its constrained
/// minimum.
pub fn best_lambda(
    f: &SupportedVec,
    g: &SupportedVec,
    s: &GroupPoint,
    gamma: &GammaSet,
    p: f64,
    w: &Weight,
) -> Result<LambdaFit> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("p must be a finite real >= 1, got {p}")));
    }
    let h = f.translate(s)?;
    let cells = Cells::new(&h, g, w, p)?;
    let g_norm = w.weighted_norm(g, p)?;
    if cells.norm_pow_h(p) == 0.0 {
        return Ok(LambdaFit {
            lambda: None,
            error: g_norm,
            attained: false,
        });
    }
    let finish = |lambda: Complex64| -> Result<LambdaFit> {
        Ok(LambdaFit {
            lambda: Some(lambda),
            error: orbit_error(f, g, s, lambda, w, p)?,
            attained: true,
        })
    };
    if let GammaSet::Singleton { modulus, phase } = gamma {
        return finish(Complex64::from_polar(*modulus, *phase));
    }
    let free = free_minimizer(&cells, p);
    let r = free.norm();
    let circle = |m: f64| {
        if p == 2.0 {
            // ||lambda h - g||^2 = ||h||^2 |lambda - free|^2 + const
            let dir = if r > 0.0 { free / r } else { Complex64::new(1.0, 0.0) };
            (dir * m, 0.0)
        } else {
            best_on_circle(&cells, p, m, free)
        }
    };
    match gamma.magnitudes() {
        Magnitudes::Finite(ms) => {
            let mut best: Option<(Complex64, f64)> = None;
            for m in ms {
                let (l, _) = circle(m);
                let v = cells.phi(l, p);
                if best.is_none_or(|b| v < b.1) {
                    best = Some((l, v));
                }
            }
            finish(best.expect("validated grids are nonempty").0)
        }
        Magnitudes::Interval { lo, hi, .. } => {
            if r > lo && r <= hi && r.is_finite() {
                return finish(free);
            }
            if r <= lo {
                if lo == 0.0 {
                    // the infimum over Gamma \ {0} is the value at 0
                    return Ok(LambdaFit {
                        lambda: None,
                        error: g_norm,
                        attained: false,
                    });
                }
                return finish(circle(lo).0);
            }
            finish(circle(hi).0)
        }
    }
}

/// Best `(s, lambda)` over the first members of `S`. Ties go to the
/// canonically smaller `s`, then to the smaller `|lambda|`.
pub fn best_approx(
    f: &SupportedVec,
    g: &SupportedVec,
    shifts: &ShiftSet,
    gamma: &GammaSet,
    p: f64,
    w: &Weight,
    horizon: i64,
) -> Result<ApproxResult> {
    let candidates = shifts.enumerate(w.space(), horizon)?;
    let fits: Vec<LambdaFit> = candidates
        .par_iter()
        .map(|s| best_lambda(f, g, s, gamma, p, w))
        .collect::<Result<_>>()?;
    let mut best: Option<(usize, LambdaFit)> = None;
    for (i, fit) in fits.into_iter().enumerate() {
        let better = match &best {
            None => true,
            Some((_, b)) => {
                fit.error < b.error
                    || (fit.error == b.error
                        && fit.lambda.map_or(f64::INFINITY, |l| l.norm())
                            < b.lambda.map_or(f64::INFINITY, |l| l.norm()))
            }
        };
        if better {
            best = Some((i, fit));
        }
    }
    let (i, fit) = best.ok_or_else(|| Error::InvalidArgument("the shift set is empty".into()))?;
    Ok(ApproxResult {
        s: candidates[i].clone(),
        lambda: fit.lambda,
        error: fit.error,
        attained: fit.attained,
    })
}

/// Search grid of the brute-force oracle: `magnitudes` log-spaced moduli
/// times `phases` equispaced angles, re-gridded `refinements` times around
/// the best cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BruteGrid {
    pub magnitudes: usize,
    pub phases: usize,
    pub refinements: usize,
    /// initial moduli span `[r/spread, r*spread]` around `r = ||g|| / ||T_s f||`
    pub spread: f64,
}

impl Default for BruteGrid {
    fn default() -> Self {
        BruteGrid {
            magnitudes: 1000,
            phases: 64,
            refinements: 0,
            spread: 1e3,
        }
    }
}

/// Exhaustive minimum of `||lambda T_s f - g||` over a grid in `Gamma`.
pub fn brute_oracle(
    f: &SupportedVec,
    g: &SupportedVec,
    s: &GroupPoint,
    gamma: &GammaSet,
    p: f64,
    w: &Weight,
    grid: BruteGrid,
) -> Result<f64> {
    let h = f.translate(s)?;
    let cells = Cells::new(&h, g, w, p)?;
    let g_norm = w.weighted_norm(g, p)?;
    let nh = cells.norm_pow_h(p).powf(1.0 / p);
    if nh == 0.0 {
        return Ok(g_norm);
    }
    let phi = |m: f64, th: f64| cells.phi(Complex64::from_polar(m, th), p);
    let phases = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        (0..n).map(|j| lo + (hi - lo) * j as f64 / n as f64).collect()
    };
    let pi = std::f64::consts::PI;
    let mut best = f64::INFINITY;
    match gamma {
        GammaSet::Singleton { modulus, phase } => best = phi(*modulus, *phase),
        _ => match gamma.magnitudes() {
            Magnitudes::Finite(ms) => {
                for m in ms {
                    for th in phases(-pi, pi, grid.phases) {
                        best = best.min(phi(m, th));
                    }
                }
            }
            Magnitudes::Interval { lo, hi, .. } => {
                let center = if g_norm > 0.0 { g_norm / nh } else { 1.0 };
                let a = (center / grid.spread).max(lo).max(f64::MIN_POSITIVE);
                let b = (center * grid.spread).min(hi);
                if lo == 0.0 {
                    best = best.min(g_norm.powf(p));
                }
                if a < b {
                    let (mut la, mut lb) = (a.ln(), b.ln());
                    let (mut ta, mut tb) = (-pi, pi);
                    let nm = grid.magnitudes.max(2);
                    for _ in 0..=grid.refinements {
                        let dm = (lb - la) / (nm - 1) as f64;
                        let dt = (tb - ta) / grid.phases as f64;
                        let mut arg = (la, ta);
                        for i in 0..nm {
                            let lm = la + dm * i as f64;
                            for th in phases(ta, tb, grid.phases) {
                                let v = phi(lm.exp(), th);
                                if v < best {
                                    best = v;
                                    arg = (lm, th);
                                }
                            }
                        }
                        la = (arg.0 - dm).max(a.ln());
                        lb = (arg.0 + dm).min(b.ln());
                        ta = arg.1 - dt;
                        tb = arg.1 + dt;
                    }
                } else if a == b {
                    for th in phases(-pi, pi, grid.phases) {
                        best = best.min(phi(a, th));
                    }
                }
            }
        },
    }
    Ok(best.powf(1.0 / p))
}

/// `||T_s f - T_{s0} f||_{p,w}` for each `s` in `approach`, exactly.
pub fn continuity_probe(
    f: &SupportedVec,
    s0: &GroupPoint,
    approach: &[GroupPoint],
    w: &Weight,
    p: f64,
) -> Result<Vec<f64>> {
    let base = f.translate(s0)?;
    approach
        .par_iter()
        .map(|s| w.weighted_norm(&f.translate(s)?.sub(&base)?, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Space, StepPiece};
    use crate::weights::DiscreteWeight;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one() -> Weight {
        Weight::Discrete(DiscreteWeight::constant(1.0).unwrap())
    }

    #[test]
    fn exact_fit_of_a_point_mass() {
        let f = SupportedVec::delta(GroupPoint::Int(0), c(1.0, 0.0)).unwrap();
        let g = SupportedVec::delta(GroupPoint::Int(5), c(3.0, 0.0)).unwrap();
        for p in [1.0, 2.0, 3.0] {
            let fit = best_lambda(&f, &g, &GroupPoint::Int(5), &GammaSet::AllNonzero, p, &one()).unwrap();
            assert!((fit.lambda.unwrap() - c(3.0, 0.0)).norm() < 1e-6);
            assert!(fit.error < 1e-6);
        }
    }

    #[test]
    fn singleton_is_direct_evaluation() {
        let f = SupportedVec::from_entries(Space::Z, [(GroupPoint::Int(0), c(1.0, 0.0)), (GroupPoint::Int(1), c(0.0, 2.0))]).unwrap();
        let g = SupportedVec::delta(GroupPoint::Int(3), c(1.0, 1.0)).unwrap();
        let s = GroupPoint::Int(2);
        let gamma = GammaSet::Singleton { modulus: 1.0, phase: 0.0 };
        let fit = best_lambda(&f, &g, &s, &gamma, 1.5, &one()).unwrap();
        let direct = one().weighted_norm(&f.translate(&s).unwrap().sub(&g).unwrap(), 1.5).unwrap();
        assert_eq!(fit.error, direct);
    }

    #[test]
    fn two_point_target_cannot_be_covered() {
        let f = SupportedVec::delta(GroupPoint::Int(0), c(1.0, 0.0)).unwrap();
        let g = SupportedVec::from_entries(Space::Z, [(GroupPoint::Int(0), c(1.0, 0.0)), (GroupPoint::Int(1), c(1.0, 0.0))]).unwrap();
        let r = best_approx(&f, &g, &ShiftSet::All, &GammaSet::AllNonzero, 1.0, &one(), 10).unwrap();
        assert!(r.error >= 1.0 - 1e-9);
    }

    #[test]
    fn zero_orbit_returns_the_target_norm() {
        let f = SupportedVec::zero(Space::Z);
        let g = SupportedVec::delta(GroupPoint::Int(1), c(2.0, 0.0)).unwrap();
        let fit = best_lambda(&f, &g, &GroupPoint::Int(0), &GammaSet::AllNonzero, 2.0, &one()).unwrap();
        assert_eq!((fit.lambda, fit.error, fit.attained), (None, 2.0, false));
        let b = brute_oracle(&f, &g, &GroupPoint::Int(0), &GammaSet::AllNonzero, 2.0, &one(), BruteGrid::default()).unwrap();
        assert_eq!(b, 2.0);
    }

    #[test]
    fn zero_target_is_an_infimum_near_zero() {
        let f = SupportedVec::delta(GroupPoint::Int(0), c(1.0, 0.0)).unwrap();
        let g = SupportedVec::zero(Space::Z);
        let fit = best_lambda(&f, &g, &GroupPoint::Int(0), &GammaSet::AllNonzero, 2.0, &one()).unwrap();
        assert_eq!((fit.error, fit.attained), (0.0, false));
        let grid = GammaSet::grid(vec![0.5, 2.0]).unwrap();
        let fit = best_lambda(&f, &g, &GroupPoint::Int(0), &grid, 2.0, &one()).unwrap();
        assert_eq!(fit.error, 0.5);
    }

    #[test]
    fn annulus_clamps_to_the_nearest_circle() {
        let f = SupportedVec::delta(GroupPoint::Int(0), c(1.0, 0.0)).unwrap();
        let g = SupportedVec::delta(GroupPoint::Int(0), c(0.0, 5.0)).unwrap();
        let gamma = GammaSet::annulus(0.5, 2.0).unwrap();
        for p in [2.0, 1.0] {
            let fit = best_lambda(&f, &g, &GroupPoint::Int(0), &gamma, p, &one()).unwrap();
            assert!((fit.lambda.unwrap() - c(0.0, 2.0)).norm() < 1e-6);
            assert!((fit.error - 3.0).abs() < 1e-6);
        }
    }

    #[test]
    fn step_functions_use_exact_integrals() {
        let piece = |lo: f64, hi: f64, v: f64| StepPiece {
            interval: RealInterval::new(0, lo, hi).unwrap(),
            coeff: c(v, 0.0),
        };
        let w = Weight::Real(crate::weights::RealWeight::constant(1.0).unwrap());
        let f = SupportedVec::step(vec![piece(0.0, 1.0, 1.0)]).unwrap();
        let out = continuity_probe(&f, &GroupPoint::real(0.0), &[GroupPoint::real(0.25), GroupPoint::real(2.0)], &w, 1.0).unwrap();
        assert!((out[0] - 0.5).abs() < 1e-15);
        assert!((out[1] - 2.0).abs() < 1e-15);
    }
}
