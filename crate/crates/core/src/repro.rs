//! Builders for the named example weights and vectors, and the experiment
//! drivers that turn them into CSV tables.

use num_complex::Complex64;
use serde::Serialize;

use crate::approx::continuity_probe;
use crate::criteria::{
    default_schedule, pointwise_gamma_criterion, salas_hypercyclic, salas_supercyclic,
    theorem_b_check, BVariant, CriterionReport, Verdict,
};
use crate::error::{Error, Result};
use crate::gamma::GammaSet;
use crate::group::{GroupPoint, RealInterval, Space, StepPiece, SupportedVec};
use crate::shifts::ShiftSet;
use crate::weights::{
    admissible, group_admissible, AnchorTable, DiscreteWeight, RealWeight, Segment, SegmentKind,
    TailModel, Weight,
};

/// Largest factorial anchor accepted by the real-line builders.
pub const MAX_ANCHOR: usize = 14;

pub const NAMED: [&str; 7] = [
    "r_peaks",
    "claim2_vector",
    "ex52_v1",
    "ex52_v2",
    "final_z",
    "twosided_exp",
    "constant_one",
];

pub const EXPERIMENTS: [&str; 4] = ["claim1", "claim2", "ex52", "final_z"];

#[derive(Clone, Debug, PartialEq)]
pub enum Named {
    Weight(Weight),
    Vector(SupportedVec),
}

fn check_n_max(n_max: usize) -> Result<()> {
    if (2..=MAX_ANCHOR).contains(&n_max) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "n_max must lie in 2..={MAX_ANCHOR}, got {n_max}"
        )))
    }
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// The real-line weight with peaks around `a_n = n!`, `2 <= n <= n_max`,
/// and value 1 elsewhere. Each anchor carries six segments in local
/// coordinates `u = t - a_n`:
///
/// | span | value |
/// |---|---|
/// | `[a_{n-1} + 1 - a_n, -n]` | `1` |
/// | `[-n, -1]` | `2^(u + n)` |
/// | `[-1, -1/2]` | `2^(n-1)` |
/// | `[-1/2, 0]` | `1 - (2^n - 2) u` |
/// | `[0, 2^-n]` | `1 + (2^n - 1) 2^n u` |
/// | `[2^-n, 1]` | `1/u` |
pub fn r_peaks(n_max: usize) -> Result<Weight> {
    check_n_max(n_max)?;
    let anchors = AnchorTable::factorial(n_max)?;
    let mut segs = Vec::new();
    for n in 2..=n_max {
        let a = factorial(n);
        let prev_end = if n == 2 { 0 } else { factorial(n - 1) + 1 };
        let nf = n as f64;
        let top = nf.exp2();
        let mut push = |lo: f64, hi: f64, kind| {
            segs.push(Segment {
                anchor: n,
                lo,
                hi,
                kind,
            })
        };
        let flat_lo = (prev_end - a) as f64;
        if flat_lo < -nf {
            push(flat_lo, -nf, SegmentKind::Const { a: 1.0 });
        }
        push(-nf, -1.0, SegmentKind::Exp2 { a: top, b: 1.0 });
        push(-1.0, -0.5, SegmentKind::Const { a: top / 2.0 });
        push(-0.5, 0.0, SegmentKind::Affine { a: 1.0, b: -(top - 2.0) });
        push(0.0, top.recip(), SegmentKind::Affine { a: 1.0, b: (top - 1.0) * top });
        push(top.recip(), 1.0, SegmentKind::Recip { a: 1.0 });
    }
    Ok(Weight::Real(RealWeight::new(anchors, segs, 1.0)?))
}

/// `sum_{k=2}^{n_max} chi_[a_k - 2^-k, a_k]`.
pub fn claim2_vector(n_max: usize) -> Result<SupportedVec> {
    check_n_max(n_max)?;
    let pieces = (2..=n_max)
        .map(|k| {
            Ok(StepPiece {
                interval: RealInterval::new(factorial(k), -(-(k as f64)).exp2(), 0.0)?,
                coeff: Complex64::new(1.0, 0.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SupportedVec::step(pieces)
}

fn affine(a: f64, b: f64) -> TailModel {
    TailModel::Log2Affine { a, b }
}

/// `w(n) = 2^-n` for `n >= 0` and `1` for `n <= 0`.
pub fn ex52_v1() -> Weight {
    Weight::Discrete(DiscreteWeight::from_tails(0, affine(0.0, 0.0), affine(0.0, -1.0)).expect("valid tails"))
}

/// `w(n) = 1` for `n >= 0` and `2^n` for `n <= 0`.
pub fn ex52_v2() -> Weight {
    Weight::Discrete(DiscreteWeight::from_tails(0, affine(0.0, 1.0), affine(0.0, 0.0)).expect("valid tails"))
}

/// `w(n) = 2^(2^n)` for `n >= 0` and `2^(-2^(1-n))` for `n < 0`.
pub fn final_z() -> Weight {
    let left = TailModel::Log2DoubleExp { sign: -1, c: 2.0, b: -1.0 };
    let right = TailModel::Log2DoubleExp { sign: 1, c: 1.0, b: 1.0 };
    Weight::Discrete(DiscreteWeight::from_log2(-1, vec![-4.0, 1.0], left, right).expect("valid tails"))
}

/// `w(n) = 2^-|n|`.
pub fn twosided_exp() -> Weight {
    Weight::Discrete(DiscreteWeight::from_tails(0, affine(0.0, 1.0), affine(0.0, -1.0)).expect("valid tails"))
}

pub fn constant_one() -> Weight {
    Weight::Discrete(DiscreteWeight::constant(1.0).expect("positive"))
}

/// Builds a named object; `n_max` only matters for the real-line ones.
pub fn build(id: &str, n_max: usize) -> Result<Named> {
    Ok(match id {
        "r_peaks" => Named::Weight(r_peaks(n_max)?),
        "claim2_vector" => Named::Vector(claim2_vector(n_max)?),
        "ex52_v1" => Named::Weight(ex52_v1()),
        "ex52_v2" => Named::Weight(ex52_v2()),
        "final_z" => Named::Weight(final_z()),
        "twosided_exp" => Named::Weight(twosided_exp()),
        "constant_one" => Named::Weight(constant_one()),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown example {id:?}; expected one of {}",
                NAMED.join(", ")
            )))
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentParams {
    /// inclusive range of the dyadic exponent `n`
    pub n_lo: usize,
    pub n_hi: usize,
    pub p_values: Vec<f64>,
    /// anchors of the real-line weight
    pub n_max: usize,
    pub horizon: i64,
}

impl ExperimentParams {
    pub fn defaults(id: &str) -> Self {
        let (n_lo, n_hi) = match id {
            "claim1" => (2, 10),
            _ => (2, 12),
        };
        ExperimentParams {
            n_lo,
            n_hi,
            p_values: vec![1.0, 2.0],
            n_max: 12,
            horizon: 4096,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    /// Column `name` of row `i`.
    pub fn get(&self, i: usize, name: &str) -> Option<&str> {
        let j = self.columns.iter().position(|c| c == name)?;
        self.rows.get(i).map(|r| r[j].as_str())
    }
}

/// Column schemas, one line per experiment.
pub fn schema(id: &str) -> Option<&'static str> {
    Some(match id {
        "claim1" => "n,s,m_hat,analysis_sup,witness,lower_bound,upper_bound,within_bounds",
        "claim2" => "n,p,segment_integral,closed_form,lower_bound,ratio,probe_norm_pow",
        "ex52" => "weight,criterion,gamma,shifts,verdict,bound",
        "final_z" => "check,shifts,verdict,value,note",
        _ => return None,
    })
}

fn fmt(x: f64) -> String {
    format!("{x:e}")
}

fn bound_of(v: &Verdict) -> String {
    match v {
        Verdict::FailsCertified { bound, .. } => fmt(*bound),
        Verdict::Inconclusive { best_margin, .. } => fmt(*best_margin),
        _ => String::new(),
    }
}

/// One CSV-ready table per experiment; column names are listed by [`schema`].
pub fn run_experiment(id: &str, params: &ExperimentParams) -> Result<Table> {
    let columns: Vec<&str> = schema(id)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown experiment {id:?}; expected one of {}",
                EXPERIMENTS.join(", ")
            ))
        })?
        .split(',')
        .collect();
    let mut table = Table::new(&columns);
    match id {
        "claim1" => {
            let n_max = params.n_max.max(params.n_hi);
            let w = r_peaks(n_max)?;
            for n in params.n_lo..=params.n_hi {
                let s = (-(n as f64)).exp2();
                let analysis = w.m_bound(&GroupPoint::real(s), n_max as i64)?.value;
                let a = factorial(n);
                let witness = w.eval(&GroupPoint::anchored(a, s))? / w.eval(&GroupPoint::anchored(a, 0.0))?;
                let m_hat = analysis.max(witness);
                let (lo, hi) = (1.0 / (8.0 * s), 2.0 / s);
                table.rows.push(vec![
                    n.to_string(),
                    fmt(s),
                    fmt(m_hat),
                    fmt(analysis),
                    fmt(witness),
                    fmt(lo),
                    fmt(hi),
                    (lo <= witness && m_hat <= hi).to_string(),
                ]);
            }
        }
        "claim2" => {
            let n_max = params.n_max.max(params.n_hi);
            let w = r_peaks(n_max)?;
            let Weight::Real(rw) = &w else { unreachable!("real builder") };
            let f = claim2_vector(n_max)?;
            for &p in &params.p_values {
                for n in params.n_lo..=params.n_hi {
                    let s = (-(n as f64)).exp2();
                    let exact = rw.integral_pow(&RealInterval::new(factorial(n), 0.0, s)?, p);
                    let nf = n as f64;
                    let closed = ((nf * (p + 1.0)).exp2() - 1.0)
                        / ((p + 1.0) * ((2.0 * nf).exp2() - nf.exp2()));
                    let bound = (nf * (p - 1.0)).exp2() / ((p + 1.0) * p.exp2());
                    let probe = continuity_probe(&f, &GroupPoint::real(0.0), &[GroupPoint::real(s)], &w, p)?[0];
                    table.rows.push(vec![
                        n.to_string(),
                        p.to_string(),
                        fmt(exact),
                        fmt(closed),
                        fmt(bound),
                        fmt(exact / bound),
                        fmt(probe.powf(p)),
                    ]);
                }
            }
        }
        "ex52" => {
            let h = params.horizon;
            let one = GammaSet::Singleton { modulus: 1.0, phase: 0.0 };
            for (name, w, gamma) in [
                ("ex52_v1", ex52_v1(), GammaSet::OneToInf),
                ("ex52_v2", ex52_v2(), GammaSet::ZeroToOne),
            ] {
                let Weight::Discrete(dw) = &w else { unreachable!("discrete builder") };
                let mut push = |r: CriterionReport, g: &str, sh: &str| {
                    table.rows.push(vec![
                        name.into(),
                        r.kind.clone(),
                        g.into(),
                        sh.into(),
                        r.verdict.name().into(),
                        bound_of(&r.verdict),
                    ])
                };
                push(salas_hypercyclic(dw, 2, h)?, "singleton:1", "unit_translation");
                push(salas_supercyclic(dw, 2, h)?, "all", "unit_translation");
                let schedule = default_schedule(Space::Z, 8)?;
                for (g, label) in [(GammaSet::AllNonzero, "all"), (gamma.clone(), &*gamma.label()), (one.clone(), "singleton:1")] {
                    push(pointwise_gamma_criterion(&w, &ShiftSet::HalfLinePos, &g, h)?, label, "half_line_pos");
                    push(
                        theorem_b_check(&w, &ShiftSet::HalfLinePos, &g, 2.0, &schedule, h, BVariant::Sup)?,
                        label,
                        "half_line_pos",
                    );
                }
            }
        }
        "final_z" => {
            let w = final_z();
            let Weight::Discrete(dw) = &w else { unreachable!("discrete builder") };
            let h = params.horizon;
            let neg = ShiftSet::HalfLineNeg;
            let pw = pointwise_gamma_criterion(&w, &neg, &GammaSet::AllNonzero, h)?;
            let inf_value = pw.witnesses.last().map(|x| x.value).unwrap_or(f64::NAN);
            table.rows.push(vec![
                "pointwise_gamma".into(),
                "half_line_neg".into(),
                pw.verdict.name().into(),
                fmt(inf_value),
                "inf of w(s) w(-s) over S".into(),
            ]);
            let sa = admissible(&w, &neg, 8)?;
            table.rows.push(vec![
                "admissible_on_S".into(),
                "half_line_neg".into(),
                sa.admissible.to_string(),
                fmt(sa.entries.iter().map(|e| e.bound.value).fold(0.0, f64::max)),
                "largest M(s) for -8 <= s <= -1".into(),
            ]);
            let ga = group_admissible(&w, h)?;
            let m_plus = ga
                .entries
                .iter()
                .find(|e| e.s == GroupPoint::Int(1))
                .map(|e| e.bound.value)
                .unwrap_or(f64::NAN);
            table.rows.push(vec![
                "admissible_on_group".into(),
                "all".into(),
                ga.admissible.to_string(),
                fmt(m_plus),
                "M(1)".into(),
            ]);
            let sup = salas_supercyclic(dw, 2, h)?;
            table.rows.push(vec![
                "salas_supercyclic".into(),
                "unit_translation".into(),
                sup.verdict.name().into(),
                bound_of(&sup.verdict),
                "liminf of w(n+q) w(-n+q)".into(),
            ]);
        }
        _ => unreachable!("schema checked above"),
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_peaks_is_one_at_anchors() {
        let w = r_peaks(5).unwrap();
        assert_eq!(w.eval(&GroupPoint::anchored(24, 0.0)).unwrap(), 1.0);
        assert_eq!(w.eval(&GroupPoint::anchored(24, -0.75)).unwrap(), 8.0);
        assert_eq!(w.eval(&GroupPoint::anchored(24, 1.0 / 16.0)).unwrap(), 16.0);
    }

    #[test]
    fn r_peaks_is_continuous_at_every_junction() {
        let w = r_peaks(9).unwrap();
        let Weight::Real(rw) = &w else { unreachable!() };
        for s in rw.segments() {
            let a = factorial(s.anchor);
            for u in [s.lo, s.hi] {
                let inside = s.kind.value(u).unwrap();
                let l = w.eval(&GroupPoint::anchored(a, u - 1e-9)).unwrap();
                let r = w.eval(&GroupPoint::anchored(a, u + 1e-9)).unwrap();
                let tol = 1e-6 * inside * (1.0 + (s.anchor as f64).exp2());
                assert!((l - inside).abs() < tol && (r - inside).abs() < tol, "jump at {a}{u:+}");
            }
        }
    }

    #[test]
    fn builders_match_displayed_values() {
        assert_eq!(ex52_v1().eval(&GroupPoint::Int(0)).unwrap(), 1.0);
        assert_eq!(ex52_v1().eval(&GroupPoint::Int(3)).unwrap(), 0.125);
        assert_eq!(final_z().eval(&GroupPoint::Int(2)).unwrap(), 16.0);
        assert_eq!(final_z().eval(&GroupPoint::Int(-2)).unwrap(), 2f64.powi(-8));
        assert!(matches!(build("r_peaks", 15), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn claim2_spot_value() {
        let p = ExperimentParams {
            n_lo: 3,
            n_hi: 3,
            p_values: vec![1.0],
            ..ExperimentParams::defaults("claim2")
        };
        let t = run_experiment("claim2", &p).unwrap();
        let v: f64 = t.get(0, "segment_integral").unwrap().parse().unwrap();
        assert!((v - 0.5625).abs() < 1e-12);
    }
}
