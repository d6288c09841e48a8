//! Tail models of discrete weights and the closed-form expressions used to
//! certify limits and extrema along rays `n = a + m*u`, `u >= 0`.
//!
//! Everything here lives in the log2 domain. A [`LogForm`] is
//! `constant + linear*u + sum(±2^(mag + rate*u))`, which is closed under
//! addition and covers both tail families. Its derivative is a sum of
//! monotone terms, so its sign on `[u0, inf)` can be bounded exactly; once
//! the sign is fixed the extrema on the ray are known in closed form.

use serde::{Deserialize, Serialize};

/// Closed-form tail of a weight on `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TailModel {
    /// `log2 w(n) = a + b*n`
    Log2Affine { a: f64, b: f64 },
    /// `log2 w(n) = sign * c * 2^(b*n)`
    Log2DoubleExp { sign: i8, c: f64, b: f64 },
}

impl TailModel {
    pub fn log2_at(&self, n: i64) -> f64 {
        match *self {
            TailModel::Log2Affine { a, b } => a + b * n as f64,
            TailModel::Log2DoubleExp { sign, c, b } => {
                f64::from(sign.signum()) * c * (b * n as f64).exp2()
            }
        }
    }

    /// The tail evaluated along `n = a + m*u` as a [`LogForm`] in `u`.
    pub fn on_ray(&self, a: i64, m: i64) -> LogForm {
        match *self {
            TailModel::Log2Affine { a: c0, b } => LogForm {
                constant: c0 + b * a as f64,
                linear: b * m as f64,
                exps: Vec::new(),
            },
            TailModel::Log2DoubleExp { sign, c, b } => LogForm {
                constant: 0.0,
                linear: 0.0,
                exps: vec![ExpTerm {
                    negative: sign < 0,
                    log2_mag: c.log2() + b * a as f64,
                    rate: b * m as f64,
                }],
            }
            .normalized(),
        }
    }

    pub(crate) fn validate(&self) -> Result<(), String> {
        match *self {
            TailModel::Log2Affine { a, b } if a.is_finite() && b.is_finite() => Ok(()),
            TailModel::Log2DoubleExp { sign, c, b }
                if (sign == 1 || sign == -1) && c > 0.0 && c.is_finite() && b.is_finite() =>
            {
                Ok(())
            }
            other => Err(format!("malformed tail model {other:?}")),
        }
    }
}

/// `±2^(log2_mag + rate*u)`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpTerm {
    pub negative: bool,
    pub log2_mag: f64,
    pub rate: f64,
}

impl ExpTerm {
    fn sign(&self) -> f64 {
        if self.negative {
            -1.0
        } else {
            1.0
        }
    }

    fn exponent(&self, u: f64) -> f64 {
        self.log2_mag + self.rate * u
    }
}

/// `constant + linear*u + sum of exponential terms`, a function of `u >= 0`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LogForm {
    pub constant: f64,
    pub linear: f64,
    pub exps: Vec<ExpTerm>,
}

/// Sum of signed powers of two, computed without overflow by factoring out
/// the largest exponent.
fn signed_pow2_sum(terms: &[(f64, f64)]) -> f64 {
    let emax = terms
        .iter()
        .map(|&(_, e)| e)
        .fold(f64::NEG_INFINITY, f64::max);
    if emax == f64::NEG_INFINITY {
        return 0.0;
    }
    let inner: f64 = terms.iter().map(|&(s, e)| s * (e - emax).exp2()).sum();
    if inner == 0.0 {
        return 0.0;
    }
    inner.signum() * (emax + inner.abs().log2()).exp2()
}

impl LogForm {
    pub fn constant(c: f64) -> Self {
        LogForm {
            constant: c,
            ..Default::default()
        }
    }

    /// Merges exponential terms with equal rates, folds rate-zero terms into
    /// the constant and drops vanishing terms.
    fn normalized(mut self) -> Self {
        let mut merged: Vec<ExpTerm> = Vec::new();
        self.exps.sort_by(|a, b| a.rate.total_cmp(&b.rate));
        let mut i = 0;
        while i < self.exps.len() {
            let rate = self.exps[i].rate;
            let mut j = i;
            let mut group = Vec::new();
            while j < self.exps.len() && self.exps[j].rate == rate {
                group.push((self.exps[j].sign(), self.exps[j].log2_mag));
                j += 1;
            }
            let total = signed_pow2_sum(&group);
            if rate == 0.0 {
                self.constant += total;
            } else if total != 0.0 {
                merged.push(ExpTerm {
                    negative: total < 0.0,
                    log2_mag: total.abs().log2(),
                    rate,
                });
            }
            i = j;
        }
        self.exps = merged;
        self
    }

    pub fn add(&self, other: &LogForm) -> LogForm {
        LogForm {
            constant: self.constant + other.constant,
            linear: self.linear + other.linear,
            exps: self.exps.iter().chain(&other.exps).copied().collect(),
        }
        .normalized()
    }

    pub fn scale(&self, k: f64) -> LogForm {
        if k == 0.0 {
            return LogForm::default();
        }
        LogForm {
            constant: self.constant * k,
            linear: self.linear * k,
            exps: self
                .exps
                .iter()
                .map(|e| ExpTerm {
                    negative: e.negative ^ (k < 0.0),
                    log2_mag: e.log2_mag + k.abs().log2(),
                    rate: e.rate,
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &LogForm) -> LogForm {
        self.add(&other.scale(-1.0))
    }

    pub fn shift_constant(&self, c: f64) -> LogForm {
        let mut out = self.clone();
        out.constant += c;
        out
    }

    pub fn eval(&self, u: f64) -> f64 {
        let mut terms: Vec<(f64, f64)> = self
            .exps
            .iter()
            .map(|e| (e.sign(), e.exponent(u)))
            .collect();
        let base = self.constant + self.linear * u;
        if base != 0.0 {
            terms.push((base.signum(), base.abs().log2()));
        }
        signed_pow2_sum(&terms)
    }

    /// Limit as `u -> inf`.
    pub fn limit(&self) -> f64 {
        if let Some(dominant) = self
            .exps
            .iter()
            .filter(|e| e.rate > 0.0)
            .max_by(|a, b| a.rate.total_cmp(&b.rate))
        {
            return dominant.sign() * f64::INFINITY;
        }
        if self.linear != 0.0 {
            return self.linear.signum() * f64::INFINITY;
        }
        self.constant
    }

    /// Bounds on the derivative over `[u0, inf)`.
    fn derivative_bounds(&self, u0: f64) -> (f64, f64) {
        let mut lo = self.linear;
        let mut hi = self.linear;
        for e in &self.exps {
            let sign = e.sign() * e.rate.signum();
            let at_start = (e.rate.abs() * std::f64::consts::LN_2).log2() + e.exponent(u0);
            let v0 = at_start.exp2();
            // magnitude grows to infinity when rate > 0, decays to 0 otherwise
            let (mag_lo, mag_hi) = if e.rate > 0.0 {
                (v0, f64::INFINITY)
            } else {
                (0.0, v0)
            };
            if sign > 0.0 {
                lo += mag_lo;
                hi += mag_hi;
            } else {
                lo -= mag_hi;
                hi -= mag_lo;
            }
        }
        (lo, hi)
    }

    /// Exact infimum and supremum of the form over integers `u >= u0`.
    ///
    /// The form is evaluated explicitly until its derivative has a provable
    /// sign on the remaining ray; after that the remaining extremum is either
    /// the value at the current point or the limit. Returns `None` if the
    /// sign is still undetermined past `horizon`.
    pub fn range_on_ray(&self, u0: i64, horizon: i64) -> Option<RayRange> {
        let mut inf = f64::INFINITY;
        let mut sup = f64::NEG_INFINITY;
        let mut inf_at = Some(u0);
        let mut sup_at = Some(u0);
        let mut u = u0;
        loop {
            let (dlo, dhi) = self.derivative_bounds(u as f64);
            let here = self.eval(u as f64);
            let lim = self.limit();
            if dlo >= 0.0 || dhi <= 0.0 {
                let (start_is_inf, tail_low, tail_high) = if dlo >= 0.0 {
                    (true, here, lim)
                } else {
                    (false, lim, here)
                };
                if tail_low < inf {
                    inf = tail_low;
                    inf_at = if start_is_inf { Some(u) } else { None };
                }
                if tail_high > sup {
                    sup = tail_high;
                    sup_at = if start_is_inf { None } else { Some(u) };
                }
                if dlo >= 0.0 && dhi <= 0.0 {
                    // constant
                    inf_at = inf_at.or(Some(u));
                    sup_at = sup_at.or(Some(u));
                }
                return Some(RayRange {
                    inf,
                    sup,
                    inf_at,
                    sup_at,
                });
            }
            if u > horizon {
                return None;
            }
            let next = (u + 1).max(2 * u.max(1)).min(horizon + 1);
            for v in u..next {
                let x = self.eval(v as f64);
                if x < inf {
                    inf = x;
                    inf_at = Some(v);
                }
                if x > sup {
                    sup = x;
                    sup_at = Some(v);
                }
            }
            u = next;
        }
    }
}

/// Extrema of a form on a ray; `*_at` is `None` when the extremum is only
/// approached in the limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayRange {
    pub inf: f64,
    pub sup: f64,
    pub inf_at: Option<i64>,
    pub sup_at: Option<i64>,
}

/// Max/min combinations of log-forms; the log2 of every criterion
/// functional on a tail is one of these.
#[derive(Clone, Debug, PartialEq)]
pub enum TailExpr {
    Form(LogForm),
    Max(Vec<TailExpr>),
    Min(Vec<TailExpr>),
}

impl TailExpr {
    pub fn form(f: LogForm) -> Self {
        TailExpr::Form(f)
    }

    pub fn add(&self, other: &TailExpr) -> TailExpr {
        match (self, other) {
            (TailExpr::Form(a), TailExpr::Form(b)) => TailExpr::Form(a.add(b)),
            (TailExpr::Max(v), o) => TailExpr::Max(v.iter().map(|x| x.add(o)).collect()),
            (TailExpr::Min(v), o) => TailExpr::Min(v.iter().map(|x| x.add(o)).collect()),
            (f @ TailExpr::Form(_), o) => o.add(f),
        }
    }

    /// Multiplication by a positive constant.
    pub fn scale(&self, k: f64) -> TailExpr {
        debug_assert!(k > 0.0);
        match self {
            TailExpr::Form(f) => TailExpr::Form(f.scale(k)),
            TailExpr::Max(v) => TailExpr::Max(v.iter().map(|x| x.scale(k)).collect()),
            TailExpr::Min(v) => TailExpr::Min(v.iter().map(|x| x.scale(k)).collect()),
        }
    }

    pub fn shift_constant(&self, c: f64) -> TailExpr {
        self.add(&TailExpr::Form(LogForm::constant(c)))
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self {
            TailExpr::Form(f) => f.eval(u),
            TailExpr::Max(v) => v.iter().map(|x| x.eval(u)).fold(f64::NEG_INFINITY, f64::max),
            TailExpr::Min(v) => v.iter().map(|x| x.eval(u)).fold(f64::INFINITY, f64::min),
        }
    }

    pub fn limit(&self) -> f64 {
        match self {
            TailExpr::Form(f) => f.limit(),
            TailExpr::Max(v) => v.iter().map(TailExpr::limit).fold(f64::NEG_INFINITY, f64::max),
            TailExpr::Min(v) => v.iter().map(TailExpr::limit).fold(f64::INFINITY, f64::min),
        }
    }

    /// A certified lower bound over integers `u >= u0`.
    pub fn lower_bound(&self, u0: i64, horizon: i64) -> Option<f64> {
        match self {
            TailExpr::Form(f) => f.range_on_ray(u0, horizon).map(|r| r.inf),
            TailExpr::Max(v) => v
                .iter()
                .filter_map(|x| x.lower_bound(u0, horizon))
                .reduce(f64::max),
            TailExpr::Min(v) => v
                .iter()
                .map(|x| x.lower_bound(u0, horizon))
                .collect::<Option<Vec<_>>>()
                .and_then(|b| b.into_iter().reduce(f64::min)),
        }
    }

    /// A certified upper bound over integers `u >= u0`.
    pub fn upper_bound(&self, u0: i64, horizon: i64) -> Option<f64> {
        match self {
            TailExpr::Form(f) => f.range_on_ray(u0, horizon).map(|r| r.sup),
            TailExpr::Max(v) => v
                .iter()
                .map(|x| x.upper_bound(u0, horizon))
                .collect::<Option<Vec<_>>>()
                .and_then(|b| b.into_iter().reduce(f64::max)),
            TailExpr::Min(v) => v
                .iter()
                .filter_map(|x| x.upper_bound(u0, horizon))
                .reduce(f64::min),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_tail_on_ray() {
        let t = TailModel::Log2Affine { a: 0.0, b: -1.0 };
        let f = t.on_ray(3, 1);
        assert_eq!(f.eval(0.0), -3.0);
        assert_eq!(f.eval(4.0), -7.0);
        assert_eq!(f.limit(), f64::NEG_INFINITY);
    }

    #[test]
    fn double_exp_difference_merges() {
        // 2^(u+1) - 2^u = 2^u
        let up = TailModel::Log2DoubleExp { sign: 1, c: 1.0, b: 1.0 }.on_ray(1, 1);
        let down = TailModel::Log2DoubleExp { sign: 1, c: 1.0, b: 1.0 }.on_ray(0, 1);
        let d = up.sub(&down);
        assert_eq!(d.exps.len(), 1);
        assert_eq!(d.eval(5.0), 32.0);
        assert_eq!(d.limit(), f64::INFINITY);
    }

    #[test]
    fn huge_exponents_do_not_produce_nan() {
        let f = TailModel::Log2DoubleExp { sign: 1, c: 1.0, b: 1.0 }.on_ray(0, 1);
        let g = LogForm {
            constant: 0.0,
            linear: -1.0,
            exps: vec![],
        };
        let h = f.add(&g);
        assert_eq!(h.eval(5000.0), f64::INFINITY);
        let neg = h.scale(-1.0);
        assert_eq!(neg.eval(5000.0), f64::NEG_INFINITY);
    }

    #[test]
    fn range_of_monotone_forms() {
        let f = LogForm {
            constant: 2.0,
            linear: -0.5,
            exps: vec![],
        };
        let r = f.range_on_ray(4, 100).unwrap();
        assert_eq!(r.sup, 0.0);
        assert_eq!(r.sup_at, Some(4));
        assert_eq!(r.inf, f64::NEG_INFINITY);
        assert_eq!(r.inf_at, None);
    }

    #[test]
    fn range_of_non_monotone_form_brute_force() {
        // -3u + 2^(u - 6): decreases, then increases.
        let f = LogForm {
            constant: 0.0,
            linear: -3.0,
            exps: vec![ExpTerm {
                negative: false,
                log2_mag: -6.0,
                rate: 1.0,
            }],
        };
        let r = f.range_on_ray(0, 1000).unwrap();
        let brute = (0..60).map(|u| f.eval(u as f64)).fold(f64::INFINITY, f64::min);
        assert_eq!(r.inf, brute);
        assert_eq!(r.sup, f64::INFINITY);
    }

    #[test]
    fn max_expression_bounds() {
        let a = TailExpr::Form(LogForm {
            constant: 0.0,
            linear: -1.0,
            exps: vec![],
        });
        let b = TailExpr::Form(LogForm::constant(0.0));
        let m = TailExpr::Max(vec![a, b]);
        assert_eq!(m.limit(), 0.0);
        assert_eq!(m.lower_bound(1, 100), Some(0.0));
    }
}
