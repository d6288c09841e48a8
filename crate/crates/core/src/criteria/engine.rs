//! Shared search over `S` for functionals of the form
//! `inf_lambda max(lambda c(s), d(s) / lambda)`.
//!
//! `c` and `d` are supplied in log2 form, exactly at single points and as
//! closed-form tail expressions along the rays that cover the rest of `S`.

use rayon::prelude::*;

use crate::error::Result;
use crate::gamma::{log2_objective, log2_objective_expr, GammaSet};
use crate::group::{GroupPoint, Space};
use crate::shifts::{ShiftRay, ShiftSet};
use crate::weights::TailExpr;

/// Largest number of points evaluated one by one before a ray's closed
/// form takes over.
const MAX_EXPLICIT: i64 = 1 << 16;

/// Tail expressions for `log2 c` and `log2 d` along a ray. `lower` bounds
/// both from below, `upper` from above; they coincide for exact forms.
pub(crate) struct RayExprs {
    pub lower: (TailExpr, TailExpr),
    pub upper: (TailExpr, TailExpr),
    /// first ray index from which the expressions apply
    pub u0: i64,
}

impl RayExprs {
    pub fn exact(c: TailExpr, d: TailExpr, u0: i64) -> Self {
        RayExprs {
            lower: (c.clone(), d.clone()),
            upper: (c, d),
            u0,
        }
    }
}

pub(crate) trait PairFunctional: Sync {
    fn space(&self) -> Space;
    /// `(log2 c(s), log2 d(s))`
    fn log2_pair(&self, s: &GroupPoint) -> Result<(f64, f64)>;
    /// `None` when no closed form is available.
    fn ray(&self, ray: &ShiftRay) -> Result<Option<RayExprs>>;
}

#[derive(Clone, Debug)]
pub(crate) struct Found {
    pub s: GroupPoint,
    pub lc: f64,
    pub ld: f64,
    pub log2_value: f64,
}

pub(crate) struct Scan {
    /// first point found below each threshold
    pub found: Vec<Option<Found>>,
    /// some ray drives the functional to 0
    pub zero_certified: bool,
    /// certified `log2 inf_S` of the functional
    pub lower_bound: Option<f64>,
    /// smallest log2 value evaluated explicitly
    pub best: f64,
}

struct RayData {
    ray: ShiftRay,
    lo: TailExpr,
    hi: TailExpr,
    u0: i64,
}

fn point_on(ray: &ShiftRay, u: i64) -> Result<GroupPoint> {
    let step = match &ray.step {
        GroupPoint::Int(m) => GroupPoint::Int(m * u),
        GroupPoint::IntVec(v) => GroupPoint::IntVec(v.iter().map(|x| x * u).collect()),
        GroupPoint::Real(p) => GroupPoint::Real(crate::group::RealPoint::new(
            p.anchor * u,
            p.offset * u as f64,
        )),
    };
    ray.start.add(&step)
}

fn evaluate(f: &dyn PairFunctional, gamma: &GammaSet, s: &GroupPoint) -> Result<Found> {
    let (lc, ld) = f.log2_pair(s)?;
    Ok(Found {
        s: s.clone(),
        lc,
        ld,
        log2_value: log2_objective(lc, ld, gamma),
    })
}

/// Chooses how much of `S` is enumerated explicitly: the smallest doubling
/// of the head after which every tail ray has a closed form from its start.
fn head_horizon(f: &dyn PairFunctional, shifts: &ShiftSet, horizon: i64) -> Result<i64> {
    if shifts.is_finite() {
        return Ok(horizon);
    }
    let mut h = 1;
    loop {
        let Some(rays) = shifts.tail_rays(f.space(), h)? else {
            return Ok(horizon);
        };
        let mut settled = true;
        for r in &rays {
            match f.ray(r)? {
                Some(e) if e.u0 == 0 => {}
                Some(_) => settled = false,
                None => return Ok(horizon),
            }
        }
        if settled || h >= horizon {
            return Ok(h.min(horizon));
        }
        h = (2 * h).min(horizon);
    }
}

pub(crate) fn scan(
    f: &dyn PairFunctional,
    shifts: &ShiftSet,
    gamma: &GammaSet,
    horizon: i64,
    thresholds: &[f64],
) -> Result<Scan> {
    let h = head_horizon(f, shifts, horizon)?;
    let head: Vec<Found> = shifts
        .enumerate(f.space(), h)?
        .par_iter()
        .map(|s| evaluate(f, gamma, s))
        .collect::<Result<_>>()?;

    let mut exact_min = f64::INFINITY;
    let mut known = true;
    let mut best = f64::INFINITY;
    for x in &head {
        if x.log2_value.is_nan() {
            known = false;
        } else {
            exact_min = exact_min.min(x.log2_value);
            best = best.min(x.log2_value);
        }
    }

    let mut rays = Vec::new();
    let mut explicit: Vec<Found> = Vec::new();
    match shifts.tail_rays(f.space(), h)? {
        None => known &= shifts.is_finite(),
        Some(list) => {
            for ray in list {
                let Some(e) = f.ray(&ray)? else {
                    known = false;
                    continue;
                };
                if e.u0 > MAX_EXPLICIT {
                    known = false;
                    continue;
                }
                for u in 0..e.u0 {
                    let x = evaluate(f, gamma, &point_on(&ray, u)?)?;
                    if x.log2_value.is_nan() {
                        known = false;
                    } else {
                        exact_min = exact_min.min(x.log2_value);
                        best = best.min(x.log2_value);
                    }
                    explicit.push(x);
                }
                rays.push(RayData {
                    lo: log2_objective_expr(&e.lower.0, &e.lower.1, gamma),
                    hi: log2_objective_expr(&e.upper.0, &e.upper.1, gamma),
                    u0: e.u0,
                    ray,
                });
            }
        }
    }

    let zero_certified = rays.iter().any(|r| r.hi.limit() == f64::NEG_INFINITY);
    let mut lower_bound = if known { Some(exact_min) } else { None };
    for r in &rays {
        lower_bound = match (lower_bound, r.lo.lower_bound(r.u0, horizon)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            _ => None,
        };
    }

    let mut found = Vec::with_capacity(thresholds.len());
    for &tau in thresholds {
        let hit = head
            .iter()
            .chain(&explicit)
            .find(|x| x.log2_value < tau)
            .cloned();
        let hit = match hit {
            Some(x) => Some(x),
            None => search_rays(f, gamma, &rays, tau, horizon)?,
        };
        found.push(hit);
    }
    Ok(Scan {
        found,
        zero_certified,
        lower_bound,
        best,
    })
}

/// Walks each ray that tends to zero with doubling steps until the upper
/// expression drops below `tau`, then confirms the point exactly.
fn search_rays(
    f: &dyn PairFunctional,
    gamma: &GammaSet,
    rays: &[RayData],
    tau: f64,
    horizon: i64,
) -> Result<Option<Found>> {
    for r in rays.iter().filter(|r| r.hi.limit() == f64::NEG_INFINITY) {
        let mut u = r.u0;
        let mut step = 1i64;
        let cap = r.u0.saturating_add(horizon.saturating_mul(64));
        while u <= cap {
            if r.hi.eval(u as f64) < tau {
                let mut x = evaluate(f, gamma, &point_on(&r.ray, u)?)?;
                if x.log2_value.is_nan() {
                    x.log2_value = r.hi.eval(u as f64);
                }
                if x.log2_value < tau {
                    return Ok(Some(x));
                }
            }
            u = u.saturating_add(step);
            step = step.saturating_mul(2);
        }
    }
    Ok(None)
}
