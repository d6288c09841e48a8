//! Truncated dense-vector candidates built from greedy plans.
//!
//! For a plan `(s_k, lambda_k, F_k)` and targets `g_k` supported in `F_k`,
//! the candidate is `f = sum_{k <= N} (1/lambda_k) T_{-s_k} g_k`. Since the
//! sets `F_k - s_k` are pairwise disjoint, `lambda_n T_{s_n} f - g_n` is a
//! sum of disjointly supported cross terms and its `p`-th power norm is at
//! most `B_n^p = sum_{k != n} alpha_k (lambda_n/lambda_k)^p ||w||^p_{F_k + s_n - s_k}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::criteria::{log2_local_pow, log2_sum, PlanRule};
use crate::error::{Error, Result};
use crate::gamma::GammaSet;
use crate::group::{GroupPoint, Space, SupportedVec, Window};
use crate::io::{vector_from_json, vector_to_json};
use crate::weights::Weight;

/// Window and sup-norm budget of one target, as seen by the planner.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanTarget {
    pub window: Window,
    /// at least `max_j sup |g_j|^p` over the components of the target
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanStep {
    pub n: usize,
    pub s: GroupPoint,
    pub lambda: f64,
    pub window: Window,
    pub alpha: f64,
    /// values of C1, C2, C3 at the chosen `(s, lambda)`
    pub conditions: [f64; 3],
    /// `2^-n`
    pub budget: f64,
}

impl PlanStep {
    /// `log2(budget / max condition)`, positive for a valid step.
    pub fn margin(&self) -> f64 {
        let worst = self.conditions.iter().copied().fold(0.0, f64::max);
        self.budget.log2() - worst.log2()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisPlan {
    pub space: Space,
    pub p: f64,
    pub gamma: GammaSet,
    pub rule: PlanRule,
    pub steps: Vec<PlanStep>,
}

impl SynthesisPlan {
    /// Checks C0 and the recorded margins.
    pub fn validate(&self) -> Result<()> {
        for (i, st) in self.steps.iter().enumerate() {
            if st.n != i + 1 {
                return Err(Error::Invariant(format!("step {} stored at position {}", st.n, i + 1)));
            }
            if st.conditions.iter().any(|c| !(*c < st.budget)) {
                return Err(Error::Invariant(format!("step {} exceeds its budget", st.n)));
            }
            let mine = st.window.shift(&st.s.neg())?;
            for earlier in &self.steps[..i] {
                if !mine.disjoint(&earlier.window.shift(&earlier.s.neg())?)? {
                    return Err(Error::Invariant(format!(
                        "translated windows of steps {} and {} overlap",
                        earlier.n, st.n
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetConfig {
    pub space: Space,
    /// number of components per tuple
    pub width: usize,
    /// coefficients are `(a + ib) / 2^depth` with `|a|, |b| <= 2^depth`
    pub depth: u32,
    /// smallest radius of the windows `F_k`
    pub base_radius: i64,
}

impl Default for TargetConfig {
    fn default() -> Self {
        TargetConfig {
            space: Space::Z,
            width: 1,
            depth: 1,
            base_radius: 1,
        }
    }
}

/// One enumerated tuple `(g_k, h_k, ...)` with its window `F_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetTuple {
    pub index: usize,
    /// index of the tuple in the underlying list; each one recurs infinitely often
    pub base: usize,
    pub components: Vec<SupportedVec>,
    pub window: Window,
}

impl TargetTuple {
    pub fn alpha(&self, p: f64) -> f64 {
        self.components
            .iter()
            .map(|g| g.sup_abs().powf(p))
            .fold(0.0, f64::max)
    }

    pub fn plan_target(&self, p: f64) -> PlanTarget {
        PlanTarget {
            window: self.window.clone(),
            alpha: self.alpha(p),
        }
    }
}

/// Deterministic enumeration of finitely supported dyadic tuples.
///
/// Base tuple `i` is read off the digits of `i + 1` in base `|A| + 1`
/// (least significant first, digit 0 meaning a zero coefficient), the
/// digits going round-robin to the components and, within a component, to
/// points in the order `0, -1, 1, -2, 2, ...`. Index `k` visits base tuple
/// `i` through Cantor unpairing, so every `i` recurs infinitely often.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetStream {
    config: TargetConfig,
    alphabet: Vec<Complex64>,
}

pub fn enumerate_targets(config: TargetConfig) -> Result<TargetStream> {
    TargetStream::new(config)
}

fn canonical_points(space: Space, count: usize) -> Vec<GroupPoint> {
    let mut r = 0i64;
    loop {
        let w = match space {
            Space::Zd(d) => Window::IntBox {
                lo: vec![-r; d],
                hi: vec![r; d],
            },
            _ => Window::centered(r),
        };
        if w.measure() >= count as f64 {
            let mut pts = w.points();
            pts.sort_by(|a, b| a.size().total_cmp(&b.size()).then_with(|| a.cmp(b)));
            pts.truncate(count);
            return pts;
        }
        r += 1;
    }
}

impl TargetStream {
    pub fn new(config: TargetConfig) -> Result<Self> {
        if !config.space.is_discrete() {
            return Err(Error::Unsupported("targets are enumerated on Z and Z^d only".into()));
        }
        if config.width == 0 || config.depth > 8 || config.base_radius < 0 {
            return Err(Error::InvalidArgument(format!(
                "need width >= 1, depth <= 8 and base_radius >= 0, got {:?}",
                config
            )));
        }
        let m = 1i64 << config.depth;
        let mut grid = Vec::new();
        for a in -m..=m {
            for b in -m..=m {
                if (a, b) != (0, 0) {
                    grid.push((a, b));
                }
            }
        }
        // coarse denominators first, then small numerators, so that 1 leads
        let den_exp = |x: i64| {
            if x == 0 {
                0
            } else {
                config.depth - x.trailing_zeros().min(config.depth)
            }
        };
        grid.sort_by_key(|&(a, b)| {
            (
                den_exp(a).max(den_exp(b)),
                a.abs() + b.abs(),
                b != 0,
                a < 0,
                b < 0,
                a.abs(),
                b.abs(),
            )
        });
        let scale = (m as f64).recip();
        let alphabet = grid
            .into_iter()
            .map(|(a, b)| Complex64::new(a as f64 * scale, b as f64 * scale))
            .collect();
        Ok(TargetStream { config, alphabet })
    }

    pub fn config(&self) -> &TargetConfig {
        &self.config
    }

    pub fn alphabet(&self) -> &[Complex64] {
        &self.alphabet
    }

    /// Base tuple visited at index `k`.
    pub fn base_of(k: usize) -> usize {
        let mut w = (((8.0 * k as f64 + 1.0).sqrt() - 1.0) / 2.0) as usize;
        while w * (w + 1) / 2 > k {
            w -= 1;
        }
        while (w + 1) * (w + 2) / 2 <= k {
            w += 1;
        }
        k - w * (w + 1) / 2
    }

    fn digits(&self, i: usize) -> Vec<usize> {
        let radix = self.alphabet.len() + 1;
        let mut x = i + 1;
        let mut out = Vec::new();
        while x > 0 {
            out.push(x % radix);
            x /= radix;
        }
        out
    }

    /// Sup-norm radius of the support of base tuple `i`.
    fn rho(&self, i: usize) -> i64 {
        let slots = self.digits(i).len().div_ceil(self.config.width);
        canonical_points(self.config.space, slots)
            .iter()
            .map(|p| p.size() as i64)
            .max()
            .unwrap_or(0)
    }

    /// Radius of `F_k`; nondecreasing in `k` because digit counts are.
    pub fn radius(&self, k: usize) -> i64 {
        self.config.base_radius.max(self.rho(k))
    }

    pub fn window(&self, k: usize) -> Window {
        let r = self.radius(k);
        match self.config.space {
            Space::Zd(d) => Window::IntBox {
                lo: vec![-r; d],
                hi: vec![r; d],
            },
            _ => Window::centered(r),
        }
    }

    pub fn tuple(&self, k: usize) -> Result<TargetTuple> {
        let base = Self::base_of(k);
        let digits = self.digits(base);
        let width = self.config.width;
        let points = canonical_points(self.config.space, digits.len().div_ceil(width));
        let mut items: Vec<Vec<(GroupPoint, Complex64)>> = vec![Vec::new(); width];
        for (j, d) in digits.iter().enumerate() {
            if *d > 0 {
                items[j % width].push((points[j / width].clone(), self.alphabet[d - 1]));
            }
        }
        let components = items
            .into_iter()
            .map(|it| SupportedVec::from_entries(self.config.space, it))
            .collect::<Result<_>>()?;
        Ok(TargetTuple {
            index: k,
            base,
            components,
            window: self.window(k),
        })
    }

    pub fn take(&self, count: usize) -> Result<Vec<TargetTuple>> {
        (0..count).map(|k| self.tuple(k)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub n: usize,
    /// `B_n`
    pub bound: f64,
    pub log2_bound_pow: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseVectorCandidate {
    pub components: Vec<SupportedVec>,
    pub targets: Vec<TargetTuple>,
    pub plan: SynthesisPlan,
    pub weight: Weight,
    pub truncation: usize,
    /// bound on `||f_j||_{p,w}`, shared by all components
    pub norm_bound: f64,
    pub certificates: Vec<Certificate>,
}

/// `f_j = sum_{k <= truncation} (1/lambda_k) T_{-s_k} g_{k,j}` with its
/// certificates.
pub fn build_vector(
    plan: &SynthesisPlan,
    w: &Weight,
    targets: &[TargetTuple],
    truncation: usize,
) -> Result<DenseVectorCandidate> {
    w.space().expect(plan.space)?;
    if truncation == 0 || plan.steps.len() < truncation || targets.len() < truncation {
        return Err(Error::InvalidArgument(format!(
            "truncation {truncation} needs that many plan steps ({}) and targets ({})",
            plan.steps.len(),
            targets.len()
        )));
    }
    let width = targets[0].components.len();
    for (st, t) in plan.steps.iter().zip(targets).take(truncation) {
        if t.components.len() != width {
            return Err(Error::InvalidArgument("targets have different widths".into()));
        }
        if st.window != t.window {
            return Err(Error::InvalidArgument(format!(
                "target {} window {:?} differs from plan window {:?}",
                st.n, t.window, st.window
            )));
        }
        if t.alpha(plan.p) > st.alpha {
            return Err(Error::InvalidArgument(format!(
                "target {} exceeds the plan's sup-norm budget",
                st.n
            )));
        }
        for g in &t.components {
            let hull = g.support_hull();
            if !hull.is_empty() && !hull.is_subset(&t.window)? {
                return Err(Error::InvalidArgument(format!(
                    "target {} is not supported in its window",
                    st.n
                )));
            }
        }
    }
    let mut components = vec![SupportedVec::zero(plan.space); width];
    for (st, t) in plan.steps.iter().zip(targets).take(truncation) {
        let factor = Complex64::new(st.lambda.recip(), 0.0);
        for (f, g) in components.iter_mut().zip(&t.components) {
            *f = f.axpy(factor, &g.translate(&st.s.neg())?)?;
        }
    }
    let p = plan.p;
    let norm_terms = plan.steps[..truncation]
        .iter()
        .map(|st| {
            let k = st.window.shift(&st.s.neg())?;
            Ok(st.alpha.log2() - p * st.lambda.log2() + log2_local_pow(w, &k, p)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut candidate = DenseVectorCandidate {
        components,
        targets: targets[..truncation].to_vec(),
        plan: plan.clone(),
        weight: w.clone(),
        truncation,
        norm_bound: (log2_sum(norm_terms) / p).exp2(),
        certificates: Vec::new(),
    };
    candidate.certificates = (1..=truncation)
        .into_par_iter()
        .map(|n| {
            let l = log2_bound_pow(&candidate, n)?;
            Ok(Certificate {
                n,
                bound: (l / p).exp2(),
                log2_bound_pow: l,
            })
        })
        .collect::<Result<_>>()?;
    Ok(candidate)
}

fn log2_bound_pow(c: &DenseVectorCandidate, n: usize) -> Result<f64> {
    if n == 0 || n > c.truncation {
        return Err(Error::InvalidArgument(format!(
            "target index {n} outside 1..={}",
            c.truncation
        )));
    }
    let p = c.plan.p;
    let steps = &c.plan.steps[..c.truncation];
    let sn = &steps[n - 1];
    let terms = steps
        .iter()
        .filter(|st| st.n != n)
        .map(|st| {
            let set = st.window.shift(&sn.s.sub(&st.s)?)?;
            Ok(st.alpha.log2() + p * (sn.lambda.log2() - st.lambda.log2()) + log2_local_pow(&c.weight, &set, p)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(log2_sum(terms))
}

/// `B_n`, recomputed from the plan and the weight.
pub fn certify(candidate: &DenseVectorCandidate, n: usize) -> Result<f64> {
    Ok((log2_bound_pow(candidate, n)? / candidate.plan.p).exp2())
}

impl DenseVectorCandidate {
    pub fn to_json(&self) -> Value {
        json!({
            "space": self.plan.space,
            "components": self.components.iter().map(vector_to_json).collect::<Vec<_>>(),
            "truncation": self.truncation,
            "norm_bound": self.norm_bound,
            "weight": self.weight.to_json(),
            "plan": self.plan,
            "targets": self.targets.iter().map(|t| json!({
                "index": t.index,
                "base": t.base,
                "window": t.window,
                "components": t.components.iter().map(vector_to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "certificates": self.certificates,
        })
    }

    /// Reads the output of [`to_json`](Self::to_json) back. Components are
    /// taken as stored; certificates are recomputed.
    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| v.get(name).ok_or_else(|| Error::parse(name, "missing"));
        let weight = Weight::from_json(field("weight")?)?;
        let plan: SynthesisPlan = serde_json::from_value(field("plan")?.clone())
            .map_err(|e| Error::parse("plan", e.to_string()))?;
        let components = field("components")?
            .as_array()
            .ok_or_else(|| Error::parse("components", "expected an array"))?
            .iter()
            .map(vector_from_json)
            .collect::<Result<Vec<_>>>()?;
        let targets = field("targets")?
            .as_array()
            .ok_or_else(|| Error::parse("targets", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let at = |name: &str| format!("targets[{i}].{name}");
                let get = |name: &str| t.get(name).ok_or_else(|| Error::parse(at(name), "missing"));
                Ok(TargetTuple {
                    index: get("index")?.as_u64().ok_or_else(|| Error::parse(at("index"), "expected an integer"))? as usize,
                    base: get("base")?.as_u64().ok_or_else(|| Error::parse(at("base"), "expected an integer"))? as usize,
                    window: serde_json::from_value(get("window")?.clone())
                        .map_err(|e| Error::parse(at("window"), e.to_string()))?,
                    components: get("components")?
                        .as_array()
                        .ok_or_else(|| Error::parse(at("components"), "expected an array"))?
                        .iter()
                        .map(vector_from_json)
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let truncation = targets.len();
        let mut c = build_vector(&plan, &weight, &targets, truncation)?;
        c.components = components;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{greedy_plan, GreedyOutcome};
    use crate::shifts::ShiftSet;
    use crate::weights::{DiscreteWeight, TailModel};

    #[test]
    fn first_tuple_is_a_unit_mass_at_zero() {
        let s = enumerate_targets(TargetConfig::default()).unwrap();
        let t = s.tuple(0).unwrap();
        assert_eq!(
            t.components[0],
            SupportedVec::delta(GroupPoint::Int(0), Complex64::new(1.0, 0.0)).unwrap()
        );
        assert_eq!(s.alphabet().len(), 24);
    }

    #[test]
    fn early_tuples_recur() {
        let s = enumerate_targets(TargetConfig::default()).unwrap();
        let bases: Vec<usize> = (0..100).map(TargetStream::base_of).collect();
        for i in 0..5 {
            assert!(bases.iter().filter(|&&b| b == i).count() >= 2);
        }
        for k in 0..100 {
            let t = s.tuple(k).unwrap();
            assert!(t.components[0].support_hull().is_subset(&t.window).unwrap());
        }
    }

    #[test]
    fn pairs_stay_inside_their_windows() {
        let s = enumerate_targets(TargetConfig {
            width: 2,
            ..TargetConfig::default()
        })
        .unwrap();
        for t in s.take(60).unwrap() {
            assert_eq!(t.components.len(), 2);
            for g in &t.components {
                if !g.is_zero() {
                    assert!(g.support_hull().is_subset(&t.window).unwrap());
                }
            }
        }
    }

    #[test]
    fn single_step_candidate_is_a_translated_mass() {
        let w = Weight::Discrete(DiscreteWeight::constant(1.0).unwrap());
        let g = SupportedVec::delta(GroupPoint::Int(0), Complex64::new(1.0, 0.0)).unwrap();
        let window = Window::centered(0);
        let plan = SynthesisPlan {
            space: Space::Z,
            p: 2.0,
            gamma: GammaSet::Singleton { modulus: 1.0, phase: 0.0 },
            rule: PlanRule::Exact,
            steps: vec![PlanStep {
                n: 1,
                s: GroupPoint::Int(5),
                lambda: 1.0,
                window: window.clone(),
                alpha: 1.0,
                conditions: [0.0; 3],
                budget: 0.5,
            }],
        };
        let t = TargetTuple {
            index: 0,
            base: 0,
            components: vec![g],
            window,
        };
        let c = build_vector(&plan, &w, &[t], 1).unwrap();
        assert_eq!(
            c.components[0],
            SupportedVec::delta(GroupPoint::Int(-5), Complex64::new(1.0, 0.0)).unwrap()
        );
        assert_eq!(certify(&c, 1).unwrap(), 0.0);
    }

    #[test]
    fn greedy_candidate_has_small_certificates() {
        let w = Weight::Discrete(
            DiscreteWeight::from_tails(
                0,
                TailModel::Log2Affine { a: 0.0, b: 1.0 },
                TailModel::Log2Affine { a: 0.0, b: -1.0 },
            )
            .unwrap(),
        );
        let p = 2.0;
        let stream = enumerate_targets(TargetConfig::default()).unwrap();
        let targets = stream.take(8).unwrap();
        let pt: Vec<_> = targets.iter().map(|t| t.plan_target(p)).collect();
        let gamma = GammaSet::Singleton { modulus: 1.0, phase: 0.0 };
        let GreedyOutcome::Plan(plan) =
            greedy_plan(&w, &ShiftSet::All, &gamma, p, &pt, 4096, PlanRule::Exact).unwrap()
        else {
            panic!("no plan")
        };
        plan.validate().unwrap();
        let c = build_vector(&plan, &w, &targets, 8).unwrap();
        for cert in &c.certificates {
            assert!(cert.log2_bound_pow < 1.0 - cert.n as f64);
        }
        let norm = w.weighted_norm(&c.components[0], p).unwrap();
        assert!(norm <= c.norm_bound * (1.0 + 1e-12));
        assert!(c.norm_bound.powf(p) < 1.0);
    }
}
