//! Windowed criterion: for each `(F, eps)` find `s` in `S`, `lambda` in
//! `Gamma` and `E` inside `F` with `mu(F \ E) < eps`,
//! `|lambda| sup_E w(s + .) < eps` and `sup_E w(-s + .) / |lambda| < eps`.
//! The norm variant replaces the suprema by local `p`-norms.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::engine::{self, PairFunctional, RayExprs};
use super::{
    log2_local_pow, log2_sup, shade_down, CriterionReport, DerivationWindow, Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::gamma::{feasible, log2_objective, objective, GammaSet, Magnitudes};
use crate::group::{GroupPoint, RealInterval, RealPoint, Space, Window};
use crate::shifts::{ShiftRay, ShiftSet};
use crate::weights::{RealWeight, TailExpr, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BVariant {
    Sup,
    Norm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleItem {
    pub window: Window,
    pub eps: f64,
}

/// `F_m = [-m, m]` (a cube on `Z^d`), `eps_m = 2^-m`, for `m = 1..=m_max`.
pub fn default_schedule(space: Space, m_max: u32) -> Result<Vec<ScheduleItem>> {
    (1..=i64::from(m_max))
        .map(|m| {
            let window = match space {
                Space::Z => Window::centered(m),
                Space::Zd(d) => Window::int_box(vec![-m; d], vec![m; d])?,
                Space::R => Window::real_union(vec![RealInterval::new(0, -(m as f64), m as f64)?])?,
            };
            Ok(ScheduleItem {
                window,
                eps: (-(m as f64)).exp2(),
            })
        })
        .collect()
}

struct WindowFunctional<'a> {
    w: &'a Weight,
    window: &'a Window,
    variant: BVariant,
    p: f64,
}

impl WindowFunctional<'_> {
    fn log2_size(&self, k: &Window) -> Result<f64> {
        match self.variant {
            BVariant::Sup => log2_sup(self.w, k),
            BVariant::Norm => Ok(log2_local_pow(self.w, k, self.p)? / self.p),
        }
    }
}

impl PairFunctional for WindowFunctional<'_> {
    fn space(&self) -> Space {
        self.w.space()
    }

    fn log2_pair(&self, s: &GroupPoint) -> Result<(f64, f64)> {
        Ok((
            self.log2_size(&self.window.shift(s)?)?,
            self.log2_size(&self.window.shift(&s.neg())?)?,
        ))
    }

    fn ray(&self, ray: &ShiftRay) -> Result<Option<RayExprs>> {
        if matches!(self.w, Weight::Real(_)) || self.window.is_empty() {
            return Ok(None);
        }
        let mut cs = Vec::new();
        let mut ds = Vec::new();
        let mut u0 = 0;
        for t in self.window.points() {
            let (c, uc) = self.w.ray_form(&ray.start.add(&t)?, &ray.step)?;
            let (d, ud) = self.w.ray_form(&ray.start.neg().add(&t)?, &ray.step.neg())?;
            cs.push(TailExpr::form(c));
            ds.push(TailExpr::form(d));
            u0 = u0.max(uc).max(ud);
        }
        let (c, d) = (TailExpr::Max(cs), TailExpr::Max(ds));
        Ok(Some(match self.variant {
            BVariant::Sup => RayExprs::exact(c, d, u0),
            BVariant::Norm => {
                // sup <= norm <= |F|^(1/p) sup
                let slack = self.window.measure().log2() / self.p;
                RayExprs {
                    upper: (c.shift_constant(slack), d.shift_constant(slack)),
                    lower: (c, d),
                    u0,
                }
            }
        }))
    }
}

/// The objective `inf_lambda max(|lambda| c(s), d(s) / |lambda|)` for the
/// window `F` at one shift, with `E = F`.
pub fn theorem_b_value(
    w: &Weight,
    window: &Window,
    s: &GroupPoint,
    gamma: &GammaSet,
    variant: BVariant,
    p: f64,
) -> Result<f64> {
    let f = WindowFunctional {
        w,
        window,
        variant,
        p,
    };
    let (lc, ld) = f.log2_pair(s)?;
    Ok(log2_objective(lc, ld, gamma).exp2())
}

/// `E = {t in F : w(s + t) <= theta_c and w(-s + t) <= theta_d}` as an
/// exact union of intervals, and `mu(F \ E)`.
pub fn select_good_subset(
    w: &RealWeight,
    window: &Window,
    s: &RealPoint,
    theta_c: f64,
    theta_d: f64,
) -> Result<(Window, f64)> {
    let parts: &[RealInterval] = match window {
        Window::RealUnion(parts) => parts,
        Window::Empty(Space::R) => &[],
        other => {
            return Err(Error::SpaceMismatch {
                expected: Space::R,
                found: other.space(),
            })
        }
    };
    let mut kept = Vec::new();
    for iv in parts {
        let mut a = w.sublevel_shifted(iv, s, theta_c);
        let mut b = w.sublevel_shifted(iv, &s.neg(), theta_d);
        a.sort_by(|x, y| x.0.total_cmp(&y.0));
        b.sort_by(|x, y| x.0.total_cmp(&y.0));
        let (mut i, mut j) = (0, 0);
        let mut local: Vec<(f64, f64)> = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].0.max(b[j].0);
            let hi = a[i].1.min(b[j].1);
            if lo < hi {
                match local.last_mut() {
                    Some(last) if last.1 >= lo => last.1 = last.1.max(hi),
                    _ => local.push((lo, hi)),
                }
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        for (lo, hi) in local {
            kept.push(RealInterval::new(iv.anchor, lo, hi)?);
        }
    }
    let e = Window::real_union(kept)?;
    let deficit = (window.measure() - e.measure()).max(0.0);
    Ok((e, deficit))
}

/// Magnitudes tried when shrinking `F` on the real line: the optimum for
/// `E = F` and every power of two in `|Gamma|` within `2^-40..2^40`.
fn lambda_candidates(c: f64, d: f64, gamma: &GammaSet) -> Vec<f64> {
    let mut out: Vec<f64> = objective(c, d, gamma).argmin.into_iter().collect();
    match gamma.magnitudes() {
        Magnitudes::Finite(v) => out.extend(v),
        Magnitudes::Interval { lo, hi, .. } => out.extend(
            (-40..=40)
                .map(|k| f64::from(k).exp2())
                .filter(|x| *x >= lo && *x <= hi && *x > 0.0),
        ),
    }
    out
}

enum Item {
    Pass { witness: Witness, certified: bool },
    Fails { log2_bound: f64 },
    Unknown { best: f64 },
}

#[allow(clippy::too_many_arguments)]
fn check_item(
    w: &Weight,
    shifts: &ShiftSet,
    gamma: &GammaSet,
    p: f64,
    item: &ScheduleItem,
    horizon: i64,
    variant: BVariant,
) -> Result<Item> {
    let f = WindowFunctional {
        w,
        window: &item.window,
        variant,
        p,
    };
    let tau = item.eps.log2();
    let scan = engine::scan(&f, shifts, gamma, horizon, &[tau])?;
    if let Some(x) = &scan.found[0] {
        let lambda = feasible(x.lc.exp2(), x.ld.exp2(), item.eps, gamma).witness;
        return Ok(Item::Pass {
            witness: Witness {
                s: Some(x.s.clone()),
                q: None,
                lambda,
                window: Some(item.window.clone()),
                deficit: Some(0.0),
                value: x.log2_value.exp2(),
                threshold: item.eps,
            },
            certified: scan.zero_certified && w.space().is_discrete(),
        });
    }
    if let Weight::Real(rw) = w {
        if let Some(witness) = shrink_window(rw, w, shifts, gamma, p, item, horizon, variant)? {
            return Ok(Item::Pass {
                witness,
                certified: false,
            });
        }
        return Ok(Item::Unknown { best: scan.best });
    }
    // on a discrete group mu(F \ E) < eps <= 1 forces E = F
    match scan.lower_bound {
        Some(lb) if item.eps <= 1.0 && lb >= tau => Ok(Item::Fails { log2_bound: lb }),
        _ => Ok(Item::Unknown { best: scan.best }),
    }
}

#[allow(clippy::too_many_arguments)]
fn shrink_window(
    rw: &RealWeight,
    w: &Weight,
    shifts: &ShiftSet,
    gamma: &GammaSet,
    p: f64,
    item: &ScheduleItem,
    horizon: i64,
    variant: BVariant,
) -> Result<Option<Witness>> {
    let eps = item.eps;
    let f = WindowFunctional {
        w,
        window: &item.window,
        variant,
        p,
    };
    for s in shifts.enumerate(Space::R, horizon)? {
        let sp = s.as_real().expect("real shift");
        let (lc, ld) = f.log2_pair(&s)?;
        for lambda in lambda_candidates(lc.exp2(), ld.exp2(), gamma) {
            let shade = 1.0 - 1e-12;
            let (e, deficit) =
                select_good_subset(rw, &item.window, &sp, eps / lambda * shade, eps * lambda * shade)?;
            if deficit >= eps {
                continue;
            }
            let g = WindowFunctional {
                w,
                window: &e,
                variant,
                p,
            };
            let (ec, ed) = g.log2_pair(&s)?;
            let (c, d) = (ec.exp2(), ed.exp2());
            if lambda * c < eps && d / lambda < eps {
                return Ok(Some(Witness {
                    s: Some(s.clone()),
                    q: None,
                    lambda: Some(lambda),
                    window: Some(e),
                    deficit: Some(deficit),
                    value: (lambda * c).max(d / lambda),
                    threshold: eps,
                }));
            }
        }
    }
    Ok(None)
}

/// Runs every schedule item. Holds when each item has a witness (certified
/// when, for each window, a tail ray drives the objective to zero); fails
/// certified when the objective provably stays at or above some `eps_m`.
#[allow(clippy::too_many_arguments)]
pub fn theorem_b_check(
    w: &Weight,
    shifts: &ShiftSet,
    gamma: &GammaSet,
    p: f64,
    schedule: &[ScheduleItem],
    horizon: i64,
    variant: BVariant,
) -> Result<CriterionReport> {
    if schedule.is_empty() {
        return Err(Error::InvalidArgument("schedule must not be empty".into()));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("p must be a finite real >= 1, got {p}")));
    }
    for it in schedule {
        w.space().expect(it.window.space())?;
        if !(it.eps > 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {}", it.eps)));
        }
    }
    let mut witnesses = Vec::new();
    let mut all_certified = true;
    let mut failure = None;
    let mut best = f64::INFINITY;
    let mut unknown = false;
    for (m, item) in schedule.iter().enumerate() {
        match check_item(w, shifts, gamma, p, item, horizon, variant)? {
            Item::Pass { witness, certified } => {
                all_certified &= certified;
                witnesses.push(witness);
            }
            Item::Fails { log2_bound } => {
                failure.get_or_insert((m, log2_bound));
            }
            Item::Unknown { best: b } => {
                unknown = true;
                best = best.min(b);
            }
        }
    }
    let mut verdict = if let Some((m, lb)) = failure {
        let lb = shade_down(lb);
        Verdict::FailsCertified {
            bound: lb.exp2(),
            log2_bound: lb,
            window: DerivationWindow {
                q: None,
                item: Some(m),
                shifts: shifts.clone(),
            },
        }
    } else if unknown {
        Verdict::Inconclusive {
            horizon,
            best_margin: best.exp2(),
        }
    } else if all_certified {
        Verdict::HoldsCertified
    } else {
        Verdict::HoldsNumeric { horizon }
    };
    let mut notes = Vec::new();
    if matches!(gamma, GammaSet::Grid { .. }) && verdict.certified() {
        verdict = verdict.downgraded(horizon);
        notes.push("finite magnitude grid: numeric verdict only".to_string());
    }
    let mut report = CriterionReport::new(
        match variant {
            BVariant::Sup => "windowed_sup",
            BVariant::Norm => "windowed_norm",
        },
        verdict,
        witnesses,
        json!({
            "space": w.space(),
            "shifts": shifts,
            "gamma": gamma.abs(),
            "p": p,
            "horizon": horizon,
            "schedule": schedule,
        }),
    );
    report.notes = notes;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{DiscreteWeight, TailModel};

    fn weight(left_b: f64, right_b: f64) -> Weight {
        Weight::Discrete(
            DiscreteWeight::from_tails(
                0,
                TailModel::Log2Affine { a: 0.0, b: left_b },
                TailModel::Log2Affine { a: 0.0, b: right_b },
            )
            .unwrap(),
        )
    }

    fn one() -> GammaSet {
        GammaSet::Singleton {
            modulus: 1.0,
            phase: 0.0,
        }
    }

    #[test]
    fn two_sided_decay_holds_with_unit_scalar() {
        let sched = default_schedule(Space::Z, 8).unwrap();
        for variant in [BVariant::Sup, BVariant::Norm] {
            let r = theorem_b_check(&weight(1.0, -1.0), &ShiftSet::All, &one(), 2.0, &sched, 256, variant)
                .unwrap();
            assert_eq!(r.verdict, Verdict::HoldsCertified, "{variant:?}");
            assert_eq!(r.witnesses.len(), 8);
        }
    }

    #[test]
    fn one_sided_decay_needs_unbounded_scalars() {
        let sched = default_schedule(Space::Z, 6).unwrap();
        let w = weight(0.0, -1.0);
        let r = theorem_b_check(&w, &ShiftSet::All, &one(), 2.0, &sched, 256, BVariant::Sup).unwrap();
        assert!(matches!(r.verdict, Verdict::FailsCertified { bound, .. } if bound <= 1.0 && bound > 0.99));
        let r = theorem_b_check(&w, &ShiftSet::All, &GammaSet::AllNonzero, 2.0, &sched, 256, BVariant::Sup)
            .unwrap();
        assert_eq!(r.verdict, Verdict::HoldsCertified);
    }

    #[test]
    fn empty_schedule_is_an_error() {
        let r = theorem_b_check(&weight(1.0, -1.0), &ShiftSet::All, &one(), 2.0, &[], 16, BVariant::Sup);
        assert!(r.is_err());
    }

    #[test]
    fn constant_weight_keeps_the_whole_window() {
        let w = RealWeight::constant(1.0).unwrap();
        let f = Window::real_union(vec![RealInterval::new(0, 0.0, 3.0).unwrap()]).unwrap();
        let (e, deficit) = select_good_subset(&w, &f, &RealPoint::at(0.7), 2.0, 2.0).unwrap();
        assert_eq!(e, f);
        assert_eq!(deficit, 0.0);
    }
}
