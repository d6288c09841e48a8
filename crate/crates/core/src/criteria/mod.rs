//! Density criteria as horizon-bounded checkers.
//!
//! Every checker returns a [`CriterionReport`] whose [`Verdict`] is one of
//! four values. "Certified" verdicts rest on the closed-form tail models of
//! the weight; "numeric" and "inconclusive" verdicts only describe what was
//! observed up to the horizon.

mod engine;
pub mod pointwise;
pub mod salas;
pub mod theorem_a;
pub mod theorem_b;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;
use crate::group::{GroupPoint, Window};
use crate::shifts::ShiftSet;
use crate::weights::{AdmissibilityReport, Weight};

pub use pointwise::{pointwise_gamma_criterion, pointwise_value};
pub use salas::{salas_hypercyclic, salas_supercyclic, salas_value};
pub use theorem_a::{greedy_plan, theorem_a_series, GreedyOutcome, PlanRule, SeriesReport};
pub use theorem_b::{
    default_schedule, select_good_subset, theorem_b_check, theorem_b_value, BVariant,
    ScheduleItem,
};

/// Holds witnesses are requested for the thresholds `2^-k`, `k = 1..=SCHEDULE_DEPTH`.
pub const SCHEDULE_DEPTH: u32 = 20;

/// One point at which a criterion functional was observed below a threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<GroupPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    /// magnitude of the scalar
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deficit: Option<f64>,
    pub value: f64,
    pub threshold: f64,
}

/// Where a certified lower bound was derived: the functional is at least
/// the bound for every shift in `shifts` (and the given `q` or schedule item).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivationWindow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub item: Option<usize>,
    pub shifts: ShiftSet,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Verdict {
    HoldsCertified,
    HoldsNumeric {
        horizon: i64,
    },
    FailsCertified {
        bound: f64,
        log2_bound: f64,
        window: DerivationWindow,
    },
    /// `best_margin` is the smallest functional value seen.
    Inconclusive {
        horizon: i64,
        best_margin: f64,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::HoldsCertified | Verdict::HoldsNumeric { .. })
    }

    pub fn certified(&self) -> bool {
        matches!(self, Verdict::HoldsCertified | Verdict::FailsCertified { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::HoldsCertified => "holds_certified",
            Verdict::HoldsNumeric { .. } => "holds_numeric",
            Verdict::FailsCertified { .. } => "fails_certified",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    /// Certified verdicts become numeric ones; used for finite grids of
    /// magnitudes, which are never certified.
    pub(crate) fn downgraded(self, horizon: i64) -> Verdict {
        match self {
            Verdict::HoldsCertified => Verdict::HoldsNumeric { horizon },
            Verdict::FailsCertified { bound, .. } => Verdict::Inconclusive {
                horizon,
                best_margin: bound,
            },
            v => v,
        }
    }
}

/// Verdict of a second criterion attached to a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub kind: String,
    pub verdict: Verdict,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub kind: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub params: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub admissibility: Option<AdmissibilityReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cross_checks: Vec<CrossCheck>,
}

impl CriterionReport {
    fn new(kind: &str, verdict: Verdict, witnesses: Vec<Witness>, params: Value) -> Self {
        CriterionReport {
            kind: kind.into(),
            verdict,
            witnesses,
            params,
            notes: Vec::new(),
            admissibility: None,
            cross_checks: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }
}

/// `log2 (2^a + 2^b)` without overflow.
pub(crate) fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// `log2 sum 2^x` over an iterator.
pub(crate) fn log2_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.into_iter().collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp2()).sum::<f64>().log2()
}

/// Lowers a certified log2 bound by a rounding allowance so that exact
/// re-evaluation never lands below it.
pub(crate) fn shade_down(log2_bound: f64) -> f64 {
    log2_bound - 1e-12 * log2_bound.abs().max(1.0)
}

/// `log2 integral_K w^p`, computed in the log domain on discrete groups.
pub(crate) fn log2_local_pow(w: &Weight, k: &Window, p: f64) -> Result<f64> {
    match w {
        Weight::Real(_) => Ok(w.local_norm_pow(k, p)?.log2()),
        _ => {
            let ls = k
                .points()
                .iter()
                .map(|t| w.log2_eval(t).map(|l| p * l))
                .collect::<Result<Vec<_>>>()?;
            Ok(log2_sum(ls))
        }
    }
}

/// `log2 sup_K w`.
pub(crate) fn log2_sup(w: &Weight, k: &Window) -> Result<f64> {
    match w {
        Weight::Real(_) => Ok(w.sup_on(k)?.log2()),
        _ => Ok(k
            .points()
            .iter()
            .map(|t| w.log2_eval(t))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)),
    }
}
