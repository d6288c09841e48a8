//! Weights on `Z` (explicit window plus closed-form tails) and separable
//! product weights on `Z^d`.

use crate::error::{Error, Result};
use crate::weights::tail::{LogForm, TailModel};

/// Relative agreement required between a tail and the window edge it meets.
const EDGE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteWeight {
    lo: i64,
    log2_values: Vec<f64>,
    left: TailModel,
    right: TailModel,
    /// added to every log2 value, tails included
    log2_scale: f64,
}

/// `log2 sup_t w(t+s)/w(t)` with certification status and a maximizing `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscreteRatio {
    pub log2_value: f64,
    pub certified: bool,
    pub witness: i64,
}

impl DiscreteWeight {
    pub fn new(lo: i64, values: Vec<f64>, left: TailModel, right: TailModel) -> Result<Self> {
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(Error::Invariant(format!(
                "weight value at n = {} must be positive and finite, got {v}",
                lo + i as i64
            )));
        }
        Self::from_log2(lo, values.iter().map(|v| v.log2()).collect(), left, right)
    }

    pub fn from_log2(
        lo: i64,
        log2_values: Vec<f64>,
        left: TailModel,
        right: TailModel,
    ) -> Result<Self> {
        if log2_values.is_empty() {
            return Err(Error::Invariant("weight window must be non-empty".into()));
        }
        if log2_values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invariant("weight log2 values must be finite".into()));
        }
        left.validate().map_err(Error::Invariant)?;
        right.validate().map_err(Error::Invariant)?;
        let hi = lo + log2_values.len() as i64 - 1;
        for (edge, tail, v, side) in [
            (lo, left, log2_values[0], "left"),
            (hi, right, log2_values[log2_values.len() - 1], "right"),
        ] {
            let t = tail.log2_at(edge);
            // |2^(t - v) - 1| <= tol, in log2 terms
            if ((t - v) * std::f64::consts::LN_2).exp_m1().abs() > EDGE_TOL {
                return Err(Error::Invariant(format!(
                    "{side} tail gives log2 w({edge}) = {t}, window has {v}"
                )));
            }
        }
        Ok(DiscreteWeight {
            lo,
            log2_values,
            left,
            right,
            log2_scale: 0.0,
        })
    }

    /// Weight given entirely by two tails meeting at `split`: the left tail
    /// covers `n < split`, the right tail `n > split`, and `w(split)` is the
    /// right tail's value there.
    pub fn from_tails(split: i64, left: TailModel, right: TailModel) -> Result<Self> {
        Self::from_log2(split, vec![right.log2_at(split)], left, right)
    }

    pub fn constant(value: f64) -> Result<Self> {
        let t = TailModel::Log2Affine {
            a: value.log2(),
            b: 0.0,
        };
        Self::new(0, vec![value], t, t)
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi())
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.log2_values.len() as i64 - 1
    }

    pub fn tails(&self) -> (TailModel, TailModel) {
        (self.left, self.right)
    }

    pub fn log2_values(&self) -> Vec<f64> {
        self.log2_values.iter().map(|v| v + self.log2_scale).collect()
    }

    pub fn raw_log2_values(&self) -> &[f64] {
        &self.log2_values
    }

    pub fn log2_scale(&self) -> f64 {
        self.log2_scale
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "scaling factor must be positive, got {k}"
            )));
        }
        let mut out = self.clone();
        out.log2_scale += k.log2();
        Ok(out)
    }

    pub fn log2_at(&self, n: i64) -> f64 {
        let raw = if n < self.lo {
            self.left.log2_at(n)
        } else if n > self.hi() {
            self.right.log2_at(n)
        } else {
            self.log2_values[(n - self.lo) as usize]
        };
        raw + self.log2_scale
    }

    pub fn at(&self, n: i64) -> f64 {
        self.log2_at(n).exp2()
    }

    /// `log2 w(start + step*u)` as a form valid for `u >= u_start`.
    pub fn ray_form(&self, start: i64, step: i64) -> (LogForm, i64) {
        let (form, u0) = if step > 0 {
            let u0 = (self.hi() + 1 - start).max(0);
            (self.right.on_ray(start, step), div_ceil(u0, step))
        } else if step < 0 {
            let u0 = (start - (self.lo - 1)).max(0);
            (self.left.on_ray(start, step), div_ceil(u0, -step))
        } else {
            (LogForm::constant(self.log2_at(start) - self.log2_scale), 0)
        };
        (form.shift_constant(self.log2_scale), u0)
    }

    /// Supremum of `w(t+s)/w(t)` over all of `Z`: the window and the
    /// stretch where exactly one of `t`, `t+s` is in a tail are scanned, the
    /// two pure-tail rays are bounded in closed form.
    pub fn ratio_sup(&self, s: i64, horizon: i64) -> DiscreteRatio {
        let right_start = self.hi() + 1 + (-s).max(0);
        let left_start = self.lo - 1 - s.max(0);
        let mut best = DiscreteRatio {
            log2_value: f64::NEG_INFINITY,
            certified: true,
            witness: left_start + 1,
        };
        let consider = |v: f64, t: i64, best: &mut DiscreteRatio| {
            if v > best.log2_value {
                best.log2_value = v;
                best.witness = t;
            }
        };
        for t in left_start + 1..right_start {
            consider(self.log2_at(t + s) - self.log2_at(t), t, &mut best);
        }
        for (start, dir, model) in [(right_start, 1i64, self.right), (left_start, -1, self.left)] {
            let diff = model.on_ray(start + s, dir).sub(&model.on_ray(start, dir));
            match diff.range_on_ray(0, horizon) {
                Some(r) => {
                    let at = r.sup_at.unwrap_or(horizon);
                    consider(r.sup, start + dir * at, &mut best);
                }
                None => {
                    best.certified = false;
                    for u in 0..=horizon {
                        consider(diff.eval(u as f64), start + dir * u, &mut best);
                    }
                }
            }
        }
        best
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0 && a >= 0);
    (a + b - 1) / b
}

/// Separable weight `w(n_1,...,n_d) = prod w_i(n_i)` on `Z^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductWeight {
    factors: Vec<DiscreteWeight>,
}

impl ProductWeight {
    pub fn new(factors: Vec<DiscreteWeight>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Invariant("product weight needs at least one factor".into()));
        }
        Ok(ProductWeight { factors })
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[DiscreteWeight] {
        &self.factors
    }

    pub fn log2_at(&self, n: &[i64]) -> Result<f64> {
        self.check_dim(n.len())?;
        Ok(self.factors.iter().zip(n).map(|(w, &x)| w.log2_at(x)).sum())
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim() {
            return Err(Error::SpaceMismatch {
                expected: crate::group::Space::Zd(self.dim()),
                found: crate::group::Space::Zd(d),
            });
        }
        Ok(())
    }

    pub fn ray_form(&self, start: &[i64], step: &[i64]) -> Result<(LogForm, i64)> {
        self.check_dim(start.len())?;
        self.check_dim(step.len())?;
        let mut total = LogForm::constant(0.0);
        let mut u0 = 0;
        for ((w, &a), &m) in self.factors.iter().zip(start).zip(step) {
            let (f, u) = w.ray_form(a, m);
            total = total.add(&f);
            u0 = u0.max(u);
        }
        Ok((total, u0))
    }

    pub fn ratio_sup(&self, s: &[i64], horizon: i64) -> Result<(f64, bool, Vec<i64>)> {
        self.check_dim(s.len())?;
        let mut log2 = 0.0;
        let mut certified = true;
        let mut witness = Vec::with_capacity(s.len());
        for (w, &x) in self.factors.iter().zip(s) {
            let r = w.ratio_sup(x, horizon);
            log2 += r.log2_value;
            certified &= r.certified;
            witness.push(r.witness);
        }
        Ok((log2, certified, witness))
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        let mut factors = self.factors.clone();
        factors[0] = factors[0].scaled(k)?;
        Ok(ProductWeight { factors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex52() -> DiscreteWeight {
        DiscreteWeight::from_tails(
            0,
            TailModel::Log2Affine { a: 0.0, b: 0.0 },
            TailModel::Log2Affine { a: 0.0, b: -1.0 },
        )
        .unwrap()
    }

    #[test]
    fn tails_and_window() {
        let w = ex52();
        assert_eq!(w.at(3), 0.125);
        assert_eq!(w.at(-7), 1.0);
        assert_eq!(w.at(0), 1.0);
    }

    #[test]
    fn edge_mismatch_is_rejected() {
        let r = DiscreteWeight::new(
            0,
            vec![2.0],
            TailModel::Log2Affine { a: 0.0, b: 0.0 },
            TailModel::Log2Affine { a: 0.0, b: -1.0 },
        );
        assert!(matches!(r, Err(Error::Invariant(_))));
    }

    #[test]
    fn negative_value_is_rejected() {
        let t = TailModel::Log2Affine { a: 0.0, b: 0.0 };
        assert!(DiscreteWeight::new(0, vec![-1.0], t, t).is_err());
    }

    #[test]
    fn ratio_sup_against_brute_force() {
        let w = ex52();
        for s in -4..=4 {
            let r = w.ratio_sup(s, 1000);
            let brute = (-200..200)
                .map(|t| w.log2_at(t + s) - w.log2_at(t))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(r.certified);
            assert_eq!(r.log2_value, brute, "s = {s}");
        }
        assert_eq!(w.ratio_sup(1, 100).log2_value, 0.0);
        assert_eq!(w.ratio_sup(-1, 100).log2_value, 1.0);
    }

    #[test]
    fn double_exp_ratio_is_certified_infinite_or_finite() {
        let w = DiscreteWeight::from_log2(
            -1,
            vec![-4.0, 1.0],
            TailModel::Log2DoubleExp { sign: -1, c: 2.0, b: -1.0 },
            TailModel::Log2DoubleExp { sign: 1, c: 1.0, b: 1.0 },
        )
        .unwrap();
        let up = w.ratio_sup(1, 200);
        assert!(up.certified);
        assert_eq!(up.log2_value, f64::INFINITY);
        let down = w.ratio_sup(-1, 200);
        assert!(down.certified && down.log2_value.is_finite());
    }

    #[test]
    fn ray_form_matches_pointwise() {
        let w = ex52().scaled(3.0).unwrap();
        let (f, u0) = w.ray_form(-5, 2);
        for u in u0..u0 + 10 {
            assert!((f.eval(u as f64) - w.log2_at(-5 + 2 * u)).abs() < 1e-12);
        }
        let (g, v0) = w.ray_form(5, -3);
        for u in v0..v0 + 10 {
            assert!((g.eval(u as f64) - w.log2_at(5 - 3 * u)).abs() < 1e-12);
        }
    }
}
