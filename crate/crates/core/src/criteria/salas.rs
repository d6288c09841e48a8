//! Hypercyclicity and supercyclicity of the unit translation on `l^p(Z, w)`:
//! `liminf_n w(n+q) + w(-n+q) = 0`, resp. `liminf_n w(n+q) w(-n+q) = 0`,
//! for every `q`.

use serde_json::json;

use super::{
    log2_add, shade_down, CriterionReport, DerivationWindow, Verdict, Witness, SCHEDULE_DEPTH,
};
use crate::error::{Error, Result};
use crate::group::GroupPoint;
use crate::shifts::ShiftSet;
use crate::weights::{DiscreteWeight, TailExpr};

fn log2_value(w: &DiscreteWeight, q: i64, n: i64, product: bool) -> f64 {
    let (a, b) = (w.log2_at(n + q), w.log2_at(-n + q));
    if product {
        a + b
    } else {
        log2_add(a, b)
    }
}

/// `w(n+q) + w(-n+q)`, or the product when `product` is set.
pub fn salas_value(w: &DiscreteWeight, q: i64, n: i64, product: bool) -> f64 {
    log2_value(w, q, n, product).exp2()
}

pub fn salas_hypercyclic(w: &DiscreteWeight, q_max: i64, horizon: i64) -> Result<CriterionReport> {
    salas(w, q_max, horizon, false)
}

pub fn salas_supercyclic(w: &DiscreteWeight, q_max: i64, horizon: i64) -> Result<CriterionReport> {
    salas(w, q_max, horizon, true)
}

struct PerQ {
    zero: bool,
    lower_bound: Option<f64>,
    n0: i64,
}

fn salas(w: &DiscreteWeight, q_max: i64, horizon: i64, product: bool) -> Result<CriterionReport> {
    if q_max < 0 || horizon < 1 {
        return Err(Error::InvalidArgument(format!(
            "need q_max >= 0 and horizon >= 1, got {q_max} and {horizon}"
        )));
    }
    let (lo, hi) = w.window();
    let mut per_q = Vec::new();
    let mut witnesses = Vec::new();
    let mut all_found = true;
    let mut best = f64::INFINITY;
    for q in 0..=q_max {
        // from n0 on, n+q is in the right tail and -n+q in the left one
        let n0 = (hi + 1 - q).max(q - lo + 1).max(1);
        let (fa, _) = w.ray_form(n0 + q, 1);
        let (fb, _) = w.ray_form(q - n0, -1);
        let (a, b) = (TailExpr::form(fa), TailExpr::form(fb));
        let (upper, lower_bound) = if product {
            let e = a.add(&b);
            let lb = e.lower_bound(0, horizon);
            (e, lb)
        } else {
            let la = a.lower_bound(0, horizon).unwrap_or(f64::NEG_INFINITY);
            let lb = b.lower_bound(0, horizon).unwrap_or(f64::NEG_INFINITY);
            (TailExpr::Max(vec![a, b]).shift_constant(1.0), Some(log2_add(la, lb)))
        };
        for n in 1..n0 {
            best = best.min(log2_value(w, q, n, product));
        }
        for k in 1..=SCHEDULE_DEPTH {
            let tau = -f64::from(k);
            match first_below(w, q, n0, &upper, tau, horizon, product) {
                Some((n, v)) => {
                    best = best.min(v);
                    witnesses.push(Witness {
                        s: Some(GroupPoint::Int(n)),
                        q: Some(q),
                        lambda: None,
                        window: None,
                        deficit: None,
                        value: v.exp2(),
                        threshold: tau.exp2(),
                    });
                }
                None => all_found = false,
            }
        }
        per_q.push(PerQ {
            zero: upper.limit() == f64::NEG_INFINITY,
            lower_bound,
            n0,
        });
    }
    let verdict = if per_q.iter().all(|p| p.zero) && all_found {
        Verdict::HoldsCertified
    } else if let Some((q, p, lb)) = per_q.iter().enumerate().find_map(|(q, p)| {
        p.lower_bound
            .filter(|l| !p.zero && l.is_finite())
            .map(|l| (q as i64, p, l))
    }) {
        let lb = shade_down(lb);
        Verdict::FailsCertified {
            bound: lb.exp2(),
            log2_bound: lb,
            window: DerivationWindow {
                q: Some(q),
                item: None,
                shifts: ShiftSet::Arithmetic {
                    start: GroupPoint::Int(p.n0),
                    step: GroupPoint::Int(1),
                },
            },
        }
    } else if all_found {
        Verdict::HoldsNumeric { horizon }
    } else {
        Verdict::Inconclusive {
            horizon,
            best_margin: best.exp2(),
        }
    };
    let kind = if product {
        "salas_supercyclic"
    } else {
        "salas_hypercyclic"
    };
    let mut report = CriterionReport::new(
        kind,
        verdict,
        witnesses,
        json!({"q_max": q_max, "horizon": horizon}),
    );
    if report.verdict == Verdict::HoldsCertified {
        report
            .notes
            .push("tail limits do not depend on q, so the verdict covers every q".into());
    }
    Ok(report)
}

/// First `n >= 1` with functional below `2^tau`: explicit up to `n0`, then
/// doubling steps along the closed-form tail.
fn first_below(
    w: &DiscreteWeight,
    q: i64,
    n0: i64,
    upper: &TailExpr,
    tau: f64,
    horizon: i64,
    product: bool,
) -> Option<(i64, f64)> {
    for n in 1..n0 {
        let v = log2_value(w, q, n, product);
        if v < tau {
            return Some((n, v));
        }
    }
    if upper.limit() != f64::NEG_INFINITY {
        for u in 0..=horizon {
            let v = log2_value(w, q, n0 + u, product);
            if v < tau {
                return Some((n0 + u, v));
            }
        }
        return None;
    }
    let (mut u, mut step) = (0i64, 1i64);
    while u <= horizon.saturating_mul(64) {
        if upper.eval(u as f64) < tau {
            let v = log2_value(w, q, n0 + u, product);
            let v = if v.is_nan() { upper.eval(u as f64) } else { v };
            if v < tau {
                return Some((n0 + u, v));
            }
        }
        u += step;
        step *= 2;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::TailModel;

    fn affine(a: f64, b: f64) -> TailModel {
        TailModel::Log2Affine { a, b }
    }

    #[test]
    fn two_sided_decay_is_hypercyclic() {
        let w = DiscreteWeight::from_tails(0, affine(0.0, 1.0), affine(0.0, -1.0)).unwrap();
        let r = salas_hypercyclic(&w, 3, 100).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsCertified);
        assert!(r.witnesses.iter().all(|x| x.value < x.threshold));
    }

    #[test]
    fn constant_weight_bounds() {
        let w = DiscreteWeight::constant(1.0).unwrap();
        let hyp = salas_hypercyclic(&w, 2, 100).unwrap();
        let sup = salas_supercyclic(&w, 2, 100).unwrap();
        match (hyp.verdict, sup.verdict) {
            (
                Verdict::FailsCertified { bound: b1, .. },
                Verdict::FailsCertified { bound: b2, .. },
            ) => {
                assert!((b1 - 2.0).abs() < 1e-9 && b1 <= 2.0);
                assert!((b2 - 1.0).abs() < 1e-9 && b2 <= 1.0);
            }
            v => panic!("unexpected {v:?}"),
        }
    }
}
