//! Weights, local norms, weighted norms and translation-operator norms.

pub mod discrete;
pub mod real;
pub mod tail;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{GroupPoint, Space, SupportedVec, Window};
use crate::shifts::ShiftSet;

pub use discrete::{DiscreteWeight, ProductWeight};
pub use real::{AnchorTable, RealWeight, Segment, SegmentKind};
pub use tail::{LogForm, TailExpr, TailModel};

#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Discrete(DiscreteWeight),
    Product(ProductWeight),
    Real(RealWeight),
}

/// Bound on `M(s) = sup_t w(t+s)/w(t)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MBound {
    pub value: f64,
    pub log2_value: f64,
    pub certified: bool,
    pub witness: GroupPoint,
    /// on `R`: the per-anchor maxima keep growing up to the last anchor,
    /// which points at divergence of the untruncated weight
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub grows_with_anchor: bool,
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("p must be a finite real >= 1, got {p}")))
    }
}

impl Weight {
    pub fn space(&self) -> Space {
        match self {
            Weight::Discrete(_) => Space::Z,
            Weight::Product(w) => Space::Zd(w.dim()),
            Weight::Real(_) => Space::R,
        }
    }

    pub fn log2_eval(&self, t: &GroupPoint) -> Result<f64> {
        self.space().expect(t.space())?;
        match (self, t) {
            (Weight::Discrete(w), GroupPoint::Int(n)) => Ok(w.log2_at(*n)),
            (Weight::Product(w), GroupPoint::IntVec(v)) => w.log2_at(v),
            (Weight::Real(w), GroupPoint::Real(x)) => w.value(x).map(f64::log2),
            _ => unreachable!("spaces checked above"),
        }
    }

    pub fn eval(&self, t: &GroupPoint) -> Result<f64> {
        match (self, t) {
            (Weight::Real(w), GroupPoint::Real(x)) => w.value(x),
            _ => self.log2_eval(t).map(f64::exp2),
        }
    }

    /// `integral_K w^p`.
    pub fn local_norm_pow(&self, k: &Window, p: f64) -> Result<f64> {
        check_p(p)?;
        self.space().expect(k.space())?;
        match (self, k) {
            (_, Window::Empty(_)) => Ok(0.0),
            (Weight::Real(w), Window::RealUnion(parts)) => {
                Ok(parts.iter().map(|i| w.integral_pow(i, p)).sum())
            }
            _ => k
                .points()
                .iter()
                .map(|t| self.log2_eval(t).map(|l| (p * l).exp2()))
                .sum(),
        }
    }

    pub fn local_norm(&self, k: &Window, p: f64) -> Result<f64> {
        Ok(self.local_norm_pow(k, p)?.powf(1.0 / p))
    }

    /// `sum |f|^p w^p` or `integral |f|^p w^p`.
    pub fn weighted_norm_pow(&self, f: &SupportedVec, p: f64) -> Result<f64> {
        check_p(p)?;
        self.space().expect(f.space())?;
        match (self, f) {
            (Weight::Real(w), SupportedVec::Step(pieces)) => Ok(pieces
                .iter()
                .map(|pc| pc.coeff.norm().powf(p) * w.integral_pow(&pc.interval, p))
                .sum()),
            _ => f
                .entries()
                .map(|(t, c)| {
                    self.log2_eval(t)
                        .map(|l| (p * (l + c.norm().log2())).exp2())
                })
                .sum(),
        }
    }

    pub fn weighted_norm(&self, f: &SupportedVec, p: f64) -> Result<f64> {
        Ok(self.weighted_norm_pow(f, p)?.powf(1.0 / p))
    }

    /// `sup_K w` (essential supremum on `R`).
    pub fn sup_on(&self, k: &Window) -> Result<f64> {
        self.space().expect(k.space())?;
        match self {
            Weight::Real(w) => w.sup_on_window(k),
            _ => Ok(k
                .points()
                .iter()
                .map(|t| self.log2_eval(t))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max)
                .exp2()),
        }
    }

    /// `M(s)`. On discrete groups the bound is exact over the whole group
    /// whenever the tails settle within `horizon`; on `R` only segments on
    /// anchors `<= horizon` are considered.
    pub fn m_bound(&self, s: &GroupPoint, horizon: i64) -> Result<MBound> {
        if horizon < 1 {
            return Err(Error::InvalidArgument(format!("horizon must be >= 1, got {horizon}")));
        }
        self.space().expect(s.space())?;
        Ok(match (self, s) {
            (Weight::Discrete(w), GroupPoint::Int(n)) => {
                let r = w.ratio_sup(*n, horizon);
                MBound {
                    value: r.log2_value.exp2(),
                    log2_value: r.log2_value,
                    certified: r.certified,
                    witness: GroupPoint::Int(r.witness),
                    grows_with_anchor: false,
                }
            }
            (Weight::Product(w), GroupPoint::IntVec(v)) => {
                let (l, certified, wit) = w.ratio_sup(v, horizon)?;
                MBound {
                    value: l.exp2(),
                    log2_value: l,
                    certified,
                    witness: GroupPoint::IntVec(wit),
                    grows_with_anchor: false,
                }
            }
            (Weight::Real(w), GroupPoint::Real(x)) => {
                let limit = usize::try_from(horizon).unwrap_or(usize::MAX);
                let certified = limit >= w.max_anchor_used();
                let r = if certified {
                    w.ratio_sup(x)
                } else {
                    w.truncated(limit).ratio_sup(x)
                };
                MBound {
                    value: r.value,
                    log2_value: r.value.log2(),
                    certified,
                    witness: GroupPoint::Real(r.witness),
                    grows_with_anchor: r.grows_with_anchor(),
                }
            }
            _ => unreachable!("spaces checked above"),
        })
    }

    /// `log2 w(start + step*u)` as a closed form valid for `u >= u_start`.
    pub fn ray_form(&self, start: &GroupPoint, step: &GroupPoint) -> Result<(LogForm, i64)> {
        self.space().expect(start.space())?;
        self.space().expect(step.space())?;
        match (self, start, step) {
            (Weight::Discrete(w), GroupPoint::Int(a), GroupPoint::Int(m)) => Ok(w.ray_form(*a, *m)),
            (Weight::Product(w), GroupPoint::IntVec(a), GroupPoint::IntVec(m)) => w.ray_form(a, m),
            _ => Err(Error::Unsupported(
                "closed-form rays exist only for discrete weights".into(),
            )),
        }
    }

    /// `k * w`.
    pub fn scaled(&self, k: f64) -> Result<Weight> {
        Ok(match self {
            Weight::Discrete(w) => Weight::Discrete(w.scaled(k)?),
            Weight::Product(w) => Weight::Product(w.scaled(k)?),
            Weight::Real(w) => {
                if !(k > 0.0 && k.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "scaling factor must be positive, got {k}"
                    )));
                }
                Weight::Real(w.scaled(k)?)
            }
        })
    }

    pub fn to_json(&self) -> Value {
        fn discrete(w: &DiscreteWeight) -> Value {
            let (lo, hi) = w.window();
            let (l, r) = w.tails();
            let mut v = json!({
                "space": "Z",
                "window": {"lo": lo, "hi": hi, "log2_values": w.raw_log2_values()},
                "left_tail": l,
                "right_tail": r,
            });
            if w.log2_scale() != 0.0 {
                v["log2_scale"] = json!(w.log2_scale());
            }
            v
        }
        match self {
            Weight::Discrete(w) => discrete(w),
            Weight::Product(w) => json!({
                "space": "Zd",
                "factors": w.factors().iter().map(discrete).collect::<Vec<_>>(),
            }),
            Weight::Real(w) => json!({
                "space": "R",
                "anchors": w.anchors().positions(),
                "segments": w.segments(),
                "default": w.default_value(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Weight> {
        let space = v
            .get("space")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse("space", "expected \"Z\", \"Zd\" or \"R\""))?;
        match space {
            "Z" => discrete_from_json(v, "").map(Weight::Discrete),
            "Zd" => {
                let factors = v
                    .get("factors")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::parse("factors", "expected an array of Z weights"))?;
                let ws = factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| discrete_from_json(f, &format!("factors[{i}].")))
                    .collect::<Result<Vec<_>>>()?;
                ProductWeight::new(ws).map(Weight::Product)
            }
            "R" => real_from_json(v).map(Weight::Real),
            other => Err(Error::parse("space", format!("unknown space {other:?}"))),
        }
    }
}

fn num(v: &Value, field: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::parse(field, format!("expected a number, got {v}")))
}

fn discrete_from_json(v: &Value, prefix: &str) -> Result<DiscreteWeight> {
    let f = |name: &str| format!("{prefix}{name}");
    let window = v
        .get("window")
        .ok_or_else(|| Error::parse(f("window"), "missing"))?;
    let lo = window
        .get("lo")
        .and_then(Value::as_i64)
        .ok_or_else(|| Error::parse(f("window.lo"), "expected an integer"))?;
    let tail = |name: &str| -> Result<TailModel> {
        let t = v.get(name).ok_or_else(|| Error::parse(f(name), "missing"))?;
        serde_json::from_value(t.clone()).map_err(|e| Error::parse(f(name), e.to_string()))
    };
    let (left, right) = (tail("left_tail")?, tail("right_tail")?);
    let read_list = |key: &str| -> Result<Option<Vec<f64>>> {
        match window.get(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .enumerate()
                .map(|(i, x)| num(x, &f(&format!("window.{key}[{i}]"))))
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(_) => Err(Error::parse(f(&format!("window.{key}")), "expected an array")),
        }
    };
    let w = if let Some(values) = read_list("values")? {
        if let Some(i) = values.iter().position(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(Error::parse(
                f(&format!("window.values[{i}]")),
                format!("weight values must be positive, got {}", values[i]),
            ));
        }
        DiscreteWeight::new(lo, values, left, right)
    } else if let Some(logs) = read_list("log2_values")? {
        DiscreteWeight::from_log2(lo, logs, left, right)
    } else {
        return Err(Error::parse(f("window.values"), "missing"));
    }
    .map_err(|e| match e {
        Error::Invariant(m) => Error::parse(f("window"), m),
        other => other,
    })?;
    if let Some(hi) = window.get("hi") {
        let hi = hi
            .as_i64()
            .ok_or_else(|| Error::parse(f("window.hi"), "expected an integer"))?;
        if hi != w.hi() {
            return Err(Error::parse(
                f("window.hi"),
                format!("window [{lo}, {hi}] does not match {} values", w.hi() - lo + 1),
            ));
        }
    }
    match v.get("log2_scale") {
        Some(s) => w.scaled(num(s, &f("log2_scale"))?.exp2()),
        None => Ok(w),
    }
}

fn real_from_json(v: &Value) -> Result<RealWeight> {
    let anchors = match v.get("anchors") {
        None => AnchorTable::new(vec![0])?,
        Some(Value::String(s)) => {
            let n = s
                .strip_prefix("factorial:")
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| Error::parse("anchors", "expected \"factorial:<n_max>\" or a list"))?;
            AnchorTable::factorial(n).map_err(|e| Error::parse("anchors", e.to_string()))?
        }
        Some(Value::Array(items)) => {
            let pos = items
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    x.as_i64()
                        .ok_or_else(|| Error::parse(format!("anchors[{i}]"), "expected an integer"))
                })
                .collect::<Result<Vec<_>>>()?;
            AnchorTable::new(pos).map_err(|e| Error::parse("anchors", e.to_string()))?
        }
        Some(_) => return Err(Error::parse("anchors", "expected a string or a list")),
    };
    let segments = match v.get("segments") {
        None => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, s)| {
                serde_json::from_value::<Segment>(s.clone())
                    .map_err(|e| Error::parse(format!("segments[{i}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(Error::parse("segments", "expected a list")),
    };
    let default = match v.get("default") {
        None => 1.0,
        Some(d) => num(d, "default")?,
    };
    RealWeight::new(anchors, segments, default).map_err(|e| Error::parse("segments", e.to_string()))
}

/// Status of one tested `M(s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MStatus {
    FiniteCertified,
    FiniteNumeric,
    InfiniteCertified,
    /// finite on the truncated model, but growing with the anchor index
    DivergentNumeric,
}

impl MStatus {
    fn of(b: &MBound) -> MStatus {
        match (b.value.is_finite(), b.certified, b.grows_with_anchor) {
            (false, true, _) => MStatus::InfiniteCertified,
            (_, _, true) => MStatus::DivergentNumeric,
            (true, true, false) => MStatus::FiniteCertified,
            _ => MStatus::FiniteNumeric,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, MStatus::FiniteCertified | MStatus::FiniteNumeric)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilityEntry {
    pub s: GroupPoint,
    pub bound: MBound,
    pub status: MStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub entries: Vec<AdmissibilityEntry>,
    /// every tested `M(s)` is finite
    pub admissible: bool,
    /// every tested `M(s)` is certified finite
    pub certified: bool,
}

impl AdmissibilityReport {
    fn from_entries(entries: Vec<AdmissibilityEntry>) -> Self {
        let admissible = entries.iter().all(|e| e.status.is_finite());
        let certified = entries.iter().all(|e| e.status == MStatus::FiniteCertified);
        AdmissibilityReport {
            entries,
            admissible,
            certified,
        }
    }
}

/// `M(s)` for every `s` of `S` enumerated within `horizon`.
pub fn admissible(w: &Weight, shifts: &ShiftSet, horizon: i64) -> Result<AdmissibilityReport> {
    let points = shifts.enumerate(w.space(), horizon)?;
    admissible_at(w, &points, horizon)
}

pub fn admissible_at(w: &Weight, points: &[GroupPoint], horizon: i64) -> Result<AdmissibilityReport> {
    let entries = points
        .par_iter()
        .map(|s| {
            w.m_bound(s, horizon).map(|bound| AdmissibilityEntry {
                s: s.clone(),
                status: MStatus::of(&bound),
                bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AdmissibilityReport::from_entries(entries))
}

/// Admissibility for every translation of the group. By submultiplicativity
/// it is enough to bound `M` on the generators `±e_i` of a discrete group;
/// on `R` the dyadic points `±2^-k`, `k <= 3`, are tested.
pub fn group_admissible(w: &Weight, horizon: i64) -> Result<AdmissibilityReport> {
    let points: Vec<GroupPoint> = match w.space() {
        Space::Z => vec![GroupPoint::Int(1), GroupPoint::Int(-1)],
        Space::Zd(d) => (0..d)
            .flat_map(|i| {
                [1, -1].map(|sign| {
                    let mut e = vec![0; d];
                    e[i] = sign;
                    GroupPoint::IntVec(e)
                })
            })
            .collect(),
        Space::R => (0..4)
            .flat_map(|k| [1.0, -1.0].map(|sign| GroupPoint::real(sign * (-(k as f64)).exp2())))
            .collect(),
    };
    let mut report = admissible_at(w, &points, horizon)?;
    if w.space() == Space::R {
        // finitely many samples never certify all of R
        report.certified = false;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::indicator;
    use num_complex::Complex64;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn twosided() -> Weight {
        Weight::Discrete(
            DiscreteWeight::from_tails(
                0,
                TailModel::Log2Affine { a: 0.0, b: 1.0 },
                TailModel::Log2Affine { a: 0.0, b: -1.0 },
            )
            .unwrap(),
        )
    }

    #[test]
    fn local_norms_on_z() {
        let k = Window::interval(0, 2).unwrap();
        let ones = Weight::Discrete(DiscreteWeight::constant(1.0).unwrap());
        assert_eq!(ones.local_norm(&k, 1.0).unwrap(), 3.0);
        assert_eq!(twosided().local_norm(&k, 1.0).unwrap(), 1.75);
        assert!(ones.local_norm(&k, 0.5).is_err());
    }

    #[test]
    fn weighted_norm_of_scaled_indicator() {
        let ones = Weight::Discrete(DiscreteWeight::constant(1.0).unwrap());
        let f = indicator(&Window::interval(0, 2).unwrap(), Complex64::new(3.0, 0.0));
        let n = ones.weighted_norm(&f, 2.0).unwrap();
        assert!((n - 3.0 * 3f64.sqrt()).abs() < 1e-12);
        let d = SupportedVec::delta(GroupPoint::Int(4), one()).unwrap();
        assert!((twosided().weighted_norm(&d, 3.0).unwrap() - 2f64.powi(-4)).abs() < 1e-16);
    }

    #[test]
    fn sup_on_discrete_window() {
        assert_eq!(twosided().sup_on(&Window::interval(-2, 3).unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn json_round_trip_preserves_weight() {
        let w = twosided().scaled(5.0).unwrap();
        let back = Weight::from_json(&w.to_json()).unwrap();
        for n in -6..6 {
            let t = GroupPoint::Int(n);
            assert!((w.log2_eval(&t).unwrap() - back.log2_eval(&t).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn malformed_json_names_the_field() {
        let v = json!({"space": "Z", "window": {"lo": 0, "values": [1.0, -2.0]},
            "left_tail": {"kind": "log2affine", "a": 0.0, "b": 0.0},
            "right_tail": {"kind": "log2affine", "a": 0.0, "b": 0.0}});
        match Weight::from_json(&v) {
            Err(Error::Parse { field, .. }) => assert_eq!(field, "window.values[1]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn group_admissibility_of_two_sided_exponential() {
        let r = group_admissible(&twosided(), 100).unwrap();
        assert!(r.admissible && r.certified);
        assert!(r.entries.iter().all(|e| e.bound.value == 2.0));
    }
}
