//! The pointwise criterion `inf_{s in S} inf_lambda max(|lambda| w(s), w(-s)/|lambda|) = 0`.

use serde_json::json;

use super::engine::{self, PairFunctional, RayExprs, Scan};
use super::{
    salas, shade_down, CriterionReport, CrossCheck, DerivationWindow, Verdict, Witness,
    SCHEDULE_DEPTH,
};
use crate::error::Result;
use crate::gamma::{feasible, log2_objective, GammaSet};
use crate::group::{GroupPoint, Space};
use crate::shifts::{ShiftRay, ShiftSet};
use crate::weights::{group_admissible, TailExpr, Weight};

pub(crate) struct Pointwise<'a> {
    pub w: &'a Weight,
}

impl PairFunctional for Pointwise<'_> {
    fn space(&self) -> Space {
        self.w.space()
    }

    fn log2_pair(&self, s: &GroupPoint) -> Result<(f64, f64)> {
        Ok((self.w.log2_eval(s)?, self.w.log2_eval(&s.neg())?))
    }

    fn ray(&self, ray: &ShiftRay) -> Result<Option<RayExprs>> {
        if matches!(self.w, Weight::Real(_)) {
            return Ok(None);
        }
        let (c, uc) = self.w.ray_form(&ray.start, &ray.step)?;
        let (d, ud) = self.w.ray_form(&ray.start.neg(), &ray.step.neg())?;
        Ok(Some(RayExprs::exact(
            TailExpr::form(c),
            TailExpr::form(d),
            uc.max(ud),
        )))
    }
}

/// `inf_lambda max(|lambda| w(s), w(-s)/|lambda|)` at one shift.
pub fn pointwise_value(w: &Weight, s: &GroupPoint, gamma: &GammaSet) -> Result<f64> {
    let (lc, ld) = Pointwise { w }.log2_pair(s)?;
    Ok(log2_objective(lc, ld, gamma).exp2())
}

pub(crate) fn thresholds() -> Vec<f64> {
    (1..=SCHEDULE_DEPTH).map(|k| -f64::from(k)).collect()
}

/// Witnesses for every threshold reached, with a scalar from `feasible`.
pub(crate) fn witnesses(scan: &Scan, thresholds: &[f64], gamma: &GammaSet) -> Vec<Witness> {
    scan.found
        .iter()
        .zip(thresholds)
        .filter_map(|(x, &tau)| {
            let x = x.as_ref()?;
            let lambda = feasible(x.lc.exp2(), x.ld.exp2(), tau.exp2(), gamma).witness;
            Some(Witness {
                s: Some(x.s.clone()),
                q: None,
                lambda,
                window: None,
                deficit: None,
                value: x.log2_value.exp2(),
                threshold: tau.exp2(),
            })
        })
        .collect()
}

/// Verdict shared by the criteria that ask for the infimum over `S` to vanish.
pub(crate) fn verdict_of(scan: &Scan, shifts: &ShiftSet, horizon: i64) -> Verdict {
    let all_found = scan.found.iter().all(Option::is_some);
    if scan.zero_certified && all_found {
        return Verdict::HoldsCertified;
    }
    if let Some(lb) = scan.lower_bound.filter(|l| l.is_finite()) {
        let lb = shade_down(lb);
        return Verdict::FailsCertified {
            bound: lb.exp2(),
            log2_bound: lb,
            window: DerivationWindow {
                q: None,
                item: None,
                shifts: shifts.clone(),
            },
        };
    }
    if all_found {
        Verdict::HoldsNumeric { horizon }
    } else {
        Verdict::Inconclusive {
            horizon,
            best_margin: scan.best.exp2(),
        }
    }
}

/// Decides whether `inf_{s in S}` of the pointwise functional is zero.
///
/// The report carries the admissibility of `w` for all translations; when
/// it fails, a Holds verdict is only a necessary condition and, on `Z`, the
/// supercyclicity criterion is attached as a cross-check.
pub fn pointwise_gamma_criterion(
    w: &Weight,
    shifts: &ShiftSet,
    gamma: &GammaSet,
    horizon: i64,
) -> Result<CriterionReport> {
    let taus = thresholds();
    let scan = engine::scan(&Pointwise { w }, shifts, gamma, horizon, &taus)?;
    let mut verdict = verdict_of(&scan, shifts, horizon);
    let mut notes = Vec::new();
    if matches!(gamma, GammaSet::Grid { .. }) && verdict.certified() {
        verdict = verdict.downgraded(horizon);
        notes.push("finite magnitude grid: numeric verdict only".to_string());
    }
    let admissibility = group_admissible(w, horizon)?;
    let mut cross_checks = Vec::new();
    if !admissibility.admissible {
        notes.push("weight is not admissible for every translation".to_string());
        if verdict.holds() {
            notes.push("holds with necessary-condition semantics only".to_string());
            if let Weight::Discrete(dw) = w {
                let sup = salas::salas_supercyclic(dw, 2, horizon)?;
                cross_checks.push(CrossCheck {
                    kind: sup.kind,
                    note: "supercyclicity of the unit translation".into(),
                    verdict: sup.verdict,
                });
            }
        }
    }
    let mut report = CriterionReport::new(
        "pointwise_gamma",
        verdict,
        witnesses(&scan, &taus, gamma),
        json!({
            "space": w.space(),
            "shifts": shifts,
            "gamma": gamma.abs(),
            "horizon": horizon,
        }),
    );
    report.notes = notes;
    report.admissibility = Some(admissibility);
    report.cross_checks = cross_checks;
    Ok(report)
}
