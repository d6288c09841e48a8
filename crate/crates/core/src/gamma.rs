//! Scalar sets `Gamma` and the kernel `inf_{lambda} max(|lambda| c, d / |lambda|)`.
//!
//! Only the magnitude set `|Gamma \ {0}|` matters to every criterion, so
//! each descriptor is reduced to either an interval of magnitudes or a
//! finite list before anything is computed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::tail::{LogForm, TailExpr};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GammaSet {
    /// `modulus * e^{i phase}`
    Singleton {
        modulus: f64,
        #[serde(default)]
        phase: f64,
    },
    Annulus {
        r: f64,
        #[serde(rename = "R")]
        big_r: f64,
    },
    ZeroToOne,
    OneToInf,
    #[serde(rename = "all")]
    AllNonzero,
    Grid { magnitudes: Vec<f64> },
}

/// `|Gamma \ {0}|`.
#[derive(Clone, Debug, PartialEq)]
pub enum Magnitudes {
    Interval {
        lo: f64,
        lo_closed: bool,
        hi: f64,
        hi_closed: bool,
    },
    Finite(Vec<f64>),
}

impl Magnitudes {
    fn contains(&self, x: f64) -> bool {
        match self {
            Magnitudes::Interval {
                lo,
                lo_closed,
                hi,
                hi_closed,
            } => {
                (x > *lo || (*lo_closed && x == *lo)) && (x < *hi || (*hi_closed && x == *hi))
            }
            Magnitudes::Finite(v) => v.contains(&x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GammaObjective {
    pub value: f64,
    /// minimizing magnitude; `None` when the infimum is only a limit at 0 or
    /// infinity
    pub argmin: Option<f64>,
    pub attained: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub witness: Option<f64>,
}

impl GammaSet {
    pub fn singleton(lambda: Complex64) -> Result<Self> {
        let (modulus, phase) = lambda.to_polar();
        GammaSet::Singleton { modulus, phase }.validated()
    }

    pub fn annulus(r: f64, big_r: f64) -> Result<Self> {
        GammaSet::Annulus { r, big_r }.validated()
    }

    pub fn grid(magnitudes: Vec<f64>) -> Result<Self> {
        GammaSet::Grid { magnitudes }.validated()
    }

    /// `{2^k : lo <= k <= hi}`.
    pub fn pow2_grid(lo: i32, hi: i32) -> Result<Self> {
        GammaSet::grid((lo..=hi).map(|k| 2f64.powi(k)).collect())
    }

    /// Checks the invariants and brings grids into sorted, deduplicated form.
    pub fn validated(self) -> Result<Self> {
        match self {
            GammaSet::Singleton { modulus, phase } => {
                if !(modulus > 0.0 && modulus.is_finite() && phase.is_finite()) {
                    return Err(Error::Invariant(format!(
                        "singleton scalar must be nonzero and finite, got modulus {modulus}"
                    )));
                }
                Ok(self)
            }
            GammaSet::Annulus { r, big_r } => {
                if !(r > 0.0 && r <= big_r && big_r.is_finite()) {
                    return Err(Error::Invariant(format!(
                        "annulus needs 0 < r <= R < inf, got r = {r}, R = {big_r}"
                    )));
                }
                Ok(self)
            }
            GammaSet::Grid { mut magnitudes } => {
                if magnitudes.is_empty() {
                    return Err(Error::Invariant("grid of magnitudes is empty".into()));
                }
                if let Some(m) = magnitudes.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
                    return Err(Error::Invariant(format!(
                        "grid magnitudes must be positive and finite, got {m}"
                    )));
                }
                magnitudes.sort_by(f64::total_cmp);
                magnitudes.dedup();
                Ok(GammaSet::Grid { magnitudes })
            }
            other => Ok(other),
        }
    }

    /// `e^{i theta} Gamma`.
    pub fn rotated(&self, theta: f64) -> GammaSet {
        match self {
            GammaSet::Singleton { modulus, phase } => GammaSet::Singleton {
                modulus: *modulus,
                phase: (phase + theta).rem_euclid(std::f64::consts::TAU),
            },
            other => other.clone(),
        }
    }

    /// `|Gamma|` as a descriptor in its own right.
    pub fn abs(&self) -> GammaSet {
        match self {
            GammaSet::Singleton { modulus, .. } => GammaSet::Singleton {
                modulus: *modulus,
                phase: 0.0,
            },
            other => other.clone(),
        }
    }

    pub fn magnitudes(&self) -> Magnitudes {
        let iv = |lo, lo_closed, hi, hi_closed| Magnitudes::Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
        };
        match self {
            GammaSet::Singleton { modulus, .. } => Magnitudes::Finite(vec![*modulus]),
            GammaSet::Annulus { r, big_r } => iv(*r, true, *big_r, true),
            GammaSet::ZeroToOne => iv(0.0, false, 1.0, true),
            GammaSet::OneToInf => iv(1.0, true, f64::INFINITY, false),
            GammaSet::AllNonzero => iv(0.0, false, f64::INFINITY, false),
            GammaSet::Grid { magnitudes } => Magnitudes::Finite(magnitudes.clone()),
        }
    }

    /// Whether `|Gamma|` is unbounded above, i.e. arbitrarily large scalings
    /// are available.
    pub fn unbounded(&self) -> bool {
        matches!(self, GammaSet::OneToInf | GammaSet::AllNonzero)
    }

    /// Short human-readable label.
    pub fn label(&self) -> String {
        match self {
            GammaSet::Singleton { modulus, .. } => format!("singleton:{modulus}"),
            GammaSet::Annulus { r, big_r } => format!("annulus:{r},{big_r}"),
            GammaSet::ZeroToOne => "zero_to_one".into(),
            GammaSet::OneToInf => "one_to_inf".into(),
            GammaSet::AllNonzero => "all".into(),
            GammaSet::Grid { magnitudes } => format!("grid[{}]", magnitudes.len()),
        }
    }
}

fn kernel(lambda: f64, c: f64, d: f64) -> f64 {
    (lambda * c).max(d / lambda)
}

/// `inf over lambda in |Gamma \ {0}|` of `max(lambda c, d / lambda)`.
pub fn objective(c: f64, d: f64, gamma: &GammaSet) -> GammaObjective {
    let at = |lambda: f64| GammaObjective {
        value: kernel(lambda, c, d),
        argmin: Some(lambda),
        attained: true,
    };
    let limit = |value: f64| GammaObjective {
        value,
        argmin: None,
        attained: false,
    };
    match gamma.magnitudes() {
        Magnitudes::Finite(v) => {
            let mut best = at(v[0]);
            for &m in &v[1..] {
                let cand = at(m);
                if cand.value < best.value {
                    best = cand;
                }
            }
            best
        }
        Magnitudes::Interval { lo, hi, .. } => {
            if c == 0.0 && d == 0.0 {
                return at(1f64.clamp(lo.max(f64::MIN_POSITIVE), hi));
            }
            if c == 0.0 {
                // d / lambda decreases
                return if hi.is_finite() { at(hi) } else { limit(0.0) };
            }
            if d == 0.0 {
                return if lo > 0.0 { at(lo) } else { limit(0.0) };
            }
            if c.is_infinite() || d.is_infinite() {
                return limit(f64::INFINITY);
            }
            let star = (d / c).sqrt();
            let lambda = if star.is_finite() && star > 0.0 {
                star
            } else {
                // ratio outside the f64 range: the optimum lies at an end
                (c.log2() * -0.5 + d.log2() * 0.5).exp2()
            };
            let lambda = lambda.clamp(lo, hi);
            if lambda > 0.0 && lambda.is_finite() {
                at(lambda)
            } else {
                let v = ((c.log2() + d.log2()) * 0.5).exp2();
                limit(v)
            }
        }
    }
}

/// `log2` of the objective computed from `log2 c` and `log2 d`; stays
/// meaningful when `c` or `d` overflow `f64`.
pub fn log2_objective(lc: f64, ld: f64, gamma: &GammaSet) -> f64 {
    let mid = if lc == f64::NEG_INFINITY || ld == f64::NEG_INFINITY {
        if lc == f64::INFINITY || ld == f64::INFINITY {
            f64::NAN
        } else {
            f64::NEG_INFINITY
        }
    } else {
        0.5 * (lc + ld)
    };
    let clip = |lo: Option<f64>, hi: Option<f64>| {
        let mut v = mid;
        if let Some(l) = lo {
            v = v.max(l + lc);
        }
        if let Some(h) = hi {
            v = v.max(ld - h);
        }
        v
    };
    match gamma {
        GammaSet::AllNonzero => clip(None, None),
        GammaSet::ZeroToOne => clip(None, Some(0.0)),
        GammaSet::OneToInf => clip(Some(0.0), None),
        GammaSet::Annulus { r, big_r } => clip(Some(r.log2()), Some(big_r.log2())),
        GammaSet::Singleton { .. } | GammaSet::Grid { .. } => match gamma.magnitudes() {
            Magnitudes::Finite(v) => v
                .iter()
                .map(|m| (m.log2() + lc).max(ld - m.log2()))
                .fold(f64::INFINITY, f64::min),
            Magnitudes::Interval { .. } => unreachable!("finite descriptors"),
        },
    }
}

/// The same functional as [`log2_objective`] applied to closed-form tails:
/// `a` is `log2 c` and `b` is `log2 d` along a ray.
pub fn log2_objective_expr(a: &TailExpr, b: &TailExpr, gamma: &GammaSet) -> TailExpr {
    let mid = a.add(b).scale(0.5);
    let shifted = |e: &TailExpr, k: f64| e.shift_constant(k);
    match gamma {
        GammaSet::AllNonzero => mid,
        GammaSet::ZeroToOne => TailExpr::Max(vec![mid, b.clone()]),
        GammaSet::OneToInf => TailExpr::Max(vec![mid, a.clone()]),
        GammaSet::Annulus { r, big_r } => TailExpr::Max(vec![
            mid,
            shifted(a, r.log2()),
            shifted(b, -big_r.log2()),
        ]),
        GammaSet::Singleton { .. } | GammaSet::Grid { .. } => {
            let Magnitudes::Finite(v) = gamma.magnitudes() else {
                unreachable!("finite descriptors")
            };
            let per: Vec<TailExpr> = v
                .iter()
                .map(|m| TailExpr::Max(vec![shifted(a, m.log2()), shifted(b, -m.log2())]))
                .collect();
            if per.len() == 1 {
                per.into_iter().next().expect("one element")
            } else {
                TailExpr::Min(per)
            }
        }
    }
}

/// A constant as a tail expression.
pub fn const_expr(c: f64) -> TailExpr {
    TailExpr::Form(LogForm::constant(c))
}

/// Picks a magnitude in the open interval `(a, b)`: a power of two if one
/// fits (closest to the geometric mean), otherwise an interior point.
fn interior_witness(a: f64, b: f64) -> f64 {
    let target = match (a > 0.0, b.is_finite()) {
        (true, true) => (a.log2() + b.log2()) * 0.5,
        (false, true) => b.log2() - 1.0,
        (true, false) => a.log2() + 1.0,
        (false, false) => 0.0,
    };
    let k_lo = if a > 0.0 { a.log2().floor() as i64 + 1 } else { i64::MIN / 4 };
    let k_hi = if b.is_finite() { b.log2().ceil() as i64 - 1 } else { i64::MAX / 4 };
    let k = (target.round() as i64).clamp(k_lo, k_hi.max(k_lo));
    let cand = (k as f64).exp2();
    if k_lo <= k_hi && cand > a && cand < b {
        return cand;
    }
    let g = target.exp2();
    if g > a && g < b {
        g
    } else {
        0.5 * (a + b)
    }
}

/// Is there `lambda` in `|Gamma \ {0}|` with `lambda c < eps` and `d / lambda < eps`?
pub fn feasible(c: f64, d: f64, eps: f64, gamma: &GammaSet) -> Feasibility {
    let no = Feasibility {
        feasible: false,
        witness: None,
    };
    if !(eps > 0.0) || c.is_nan() || d.is_nan() {
        return no;
    }
    // admissible magnitudes form the open interval (lower, upper)
    let lower = d / eps;
    let upper = if c == 0.0 { f64::INFINITY } else { eps / c };
    if !(lower < upper) {
        return no;
    }
    let inside = |x: f64| x > lower && x < upper;
    match gamma.magnitudes() {
        Magnitudes::Finite(v) => {
            let g = if lower > 0.0 && upper.is_finite() {
                0.5 * (lower.log2() + upper.log2())
            } else if upper.is_finite() {
                upper.log2() - 1.0
            } else {
                lower.log2() + 1.0
            };
            let best = v
                .iter()
                .copied()
                .filter(|m| inside(*m))
                .min_by(|x, y| (x.log2() - g).abs().total_cmp(&(y.log2() - g).abs()));
            Feasibility {
                feasible: best.is_some(),
                witness: best,
            }
        }
        m @ Magnitudes::Interval { lo, hi, .. } => {
            let a = lower.max(lo);
            let b = upper.min(hi);
            if a < b {
                let w = interior_witness(a, b);
                Feasibility {
                    feasible: true,
                    witness: Some(w),
                }
            } else if a == b && inside(a) && m.contains(a) {
                Feasibility {
                    feasible: true,
                    witness: Some(a),
                }
            } else {
                no
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn closed_form_examples() {
        let o = objective(4.0, 1.0, &GammaSet::AllNonzero);
        assert_eq!((o.value, o.argmin, o.attained), (2.0, Some(0.5), true));
        let o = objective(4.0, 1.0, &GammaSet::OneToInf);
        assert_eq!((o.value, o.argmin), (4.0, Some(1.0)));
        let one = GammaSet::singleton(Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(objective(3.0, 7.0, &one).value, 7.0);
    }

    #[test]
    fn degenerate_inputs_never_nan() {
        for g in [GammaSet::AllNonzero, GammaSet::ZeroToOne, GammaSet::OneToInf] {
            for (c, d) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)] {
                let o = objective(c, d, &g);
                assert!(!o.value.is_nan(), "{g:?} {c} {d}");
            }
        }
        let o = objective(0.0, 1.0, &GammaSet::AllNonzero);
        assert_eq!((o.value, o.attained), (0.0, false));
        assert_eq!(objective(0.0, 1.0, &GammaSet::ZeroToOne).value, 1.0);
    }

    #[test]
    fn feasibility_examples() {
        let f = feasible(0.1, 0.1, 0.2, &GammaSet::AllNonzero);
        assert!(f.feasible);
        assert_eq!(f.witness, Some(1.0));
        let f = feasible(10.0, 0.01, 0.5, &GammaSet::ZeroToOne);
        let w = f.witness.unwrap();
        assert!(f.feasible && w > 0.02 && w < 0.05);
        let one = GammaSet::singleton(Complex64::new(1.0, 0.0)).unwrap();
        assert!(!feasible(1.0, 1.0, 0.5, &one).feasible);
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert!(GammaSet::annulus(2.0, 1.0).is_err());
        assert!(GammaSet::grid(vec![]).is_err());
        assert!(GammaSet::singleton(Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn json_names() {
        let g: GammaSet = serde_json::from_str(r#"{"kind":"annulus","r":0.5,"R":2}"#).unwrap();
        assert_eq!(g, GammaSet::Annulus { r: 0.5, big_r: 2.0 });
        let g: GammaSet = serde_json::from_str(r#"{"kind":"all"}"#).unwrap();
        assert_eq!(g, GammaSet::AllNonzero);
    }

    #[test]
    fn dense_grid_approaches_annulus() {
        let (r, big_r) = (0.5f64, 2.0f64);
        let n = 1000;
        let mags: Vec<f64> = (0..n)
            .map(|i| (r.log2() + (big_r.log2() - r.log2()) * i as f64 / (n - 1) as f64).exp2())
            .collect();
        let grid = GammaSet::grid(mags).unwrap();
        let ann = GammaSet::annulus(r, big_r).unwrap();
        for (c, d) in [(1.0, 1.0), (3.0, 0.01), (0.01, 3.0), (100.0, 1e-4)] {
            let a = objective(c, d, &ann).value;
            let g = objective(c, d, &grid).value;
            assert!(g >= a && (g - a) / a < 1e-3, "{c} {d}: {g} vs {a}");
        }
    }

    fn gammas() -> impl Strategy<Value = GammaSet> {
        prop_oneof![
            Just(GammaSet::AllNonzero),
            Just(GammaSet::ZeroToOne),
            Just(GammaSet::OneToInf),
            (-4.0f64..4.0, 0.0f64..4.0)
                .prop_map(|(l, w)| GammaSet::annulus(l.exp2(), (l + w).exp2()).unwrap()),
            (0.01f64..100.0, 0.0f64..6.3)
                .prop_map(|(m, t)| GammaSet::singleton(Complex64::from_polar(m, t)).unwrap()),
        ]
    }

    /// 10^4-point log-grid minimization, re-gridded three times around the
    /// best cell (the kernel has a kink at the optimum, so a single uniform
    /// grid only converges linearly).
    fn brute(c: f64, d: f64, g: &GammaSet) -> f64 {
        if let Magnitudes::Finite(v) = g.magnitudes() {
            return v.iter().map(|m| kernel(*m, c, d)).fold(f64::INFINITY, f64::min);
        }
        let Magnitudes::Interval { lo, hi, .. } = g.magnitudes() else { unreachable!() };
        let (mut a, mut b) = (lo.max(1e-12).log2(), hi.min(1e12).log2());
        let n = 10_000;
        let mut best = f64::INFINITY;
        for _ in 0..3 {
            let h = (b - a) / (n - 1) as f64;
            let mut arg = a;
            for i in 0..n {
                let x = a + h * i as f64;
                let v = kernel(x.exp2(), c, d);
                if v < best {
                    best = v;
                    arg = x;
                }
            }
            (a, b) = ((arg - h).max(a), (arg + h).min(b));
        }
        best
    }

    proptest! {
        #[test]
        fn matches_log_grid_minimization(lc in -6.0f64..6.0, ld in -6.0f64..6.0, g in gammas()) {
            let (c, d) = (10f64.powf(lc), 10f64.powf(ld));
            let exact = objective(c, d, &g).value;
            let b = brute(c, d, &g);
            prop_assert!(exact <= b * (1.0 + 1e-12));
            prop_assert!((b - exact) / exact < 1e-6, "{} vs {}", exact, b);
        }

        #[test]
        fn attained_argmin_reproduces_value(lc in -6.0f64..6.0, ld in -6.0f64..6.0, g in gammas()) {
            let (c, d) = (10f64.powf(lc), 10f64.powf(ld));
            let o = objective(c, d, &g);
            if o.attained {
                let m = o.argmin.unwrap();
                prop_assert!(((kernel(m, c, d) - o.value) / o.value).abs() < 1e-12);
            }
        }

        #[test]
        fn phase_does_not_matter(lc in -6.0f64..6.0, ld in -6.0f64..6.0, le in -3.0f64..3.0,
                                 g in gammas(), theta in 0.0f64..6.3) {
            let (c, d, e) = (10f64.powf(lc), 10f64.powf(ld), 10f64.powf(le));
            let r = g.rotated(theta);
            prop_assert_eq!(objective(c, d, &r), objective(c, d, &g));
            prop_assert_eq!(feasible(c, d, e, &g), feasible(c, d, e, &r));
            prop_assert_eq!(objective(c, d, &g.abs()), objective(c, d, &g));
        }

        #[test]
        fn monotone_in_c_and_d(lc in -6.0f64..6.0, ld in -6.0f64..6.0, bump in 0.0f64..2.0, g in gammas()) {
            let (c, d) = (10f64.powf(lc), 10f64.powf(ld));
            let k = 1.0 + bump;
            let base = objective(c, d, &g).value;
            prop_assert!(objective(c * k, d, &g).value >= base * (1.0 - 1e-15));
            prop_assert!(objective(c, d * k, &g).value >= base * (1.0 - 1e-15));
        }

        #[test]
        fn feasible_iff_objective_below_eps(lc in -6.0f64..6.0, ld in -6.0f64..6.0, le in -4.0f64..4.0, g in gammas()) {
            let (c, d, e) = (10f64.powf(lc), 10f64.powf(ld), 10f64.powf(le));
            let o = objective(c, d, &g).value;
            prop_assume!((o - e).abs() > 1e-9 * e);
            let f = feasible(c, d, e, &g);
            prop_assert_eq!(f.feasible, o < e);
            if let Some(w) = f.witness {
                prop_assert!(w * c < e && d / w < e);
            }
        }

        #[test]
        fn log_form_agrees(lc in -30.0f64..30.0, ld in -30.0f64..30.0, g in gammas()) {
            let o = objective(lc.exp2(), ld.exp2(), &g).value;
            let l = log2_objective(lc, ld, &g);
            prop_assert!((o.log2() - l).abs() < 1e-9);
            let e = log2_objective_expr(&const_expr(lc), &const_expr(ld), &g);
            prop_assert!((e.eval(0.0) - l).abs() < 1e-9);
        }
    }
}
