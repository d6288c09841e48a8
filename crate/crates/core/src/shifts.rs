//! Sets of admissible translations `S`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupPoint, Space};

/// Spacing of the sample grid used to enumerate continuous shift sets on `R`.
pub const REAL_GRID_STEP: f64 = 0.125;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShiftSet {
    All,
    /// `s > 0`
    HalfLinePos,
    /// `s < 0`
    HalfLineNeg,
    /// `n*g`, `n >= 1`
    SingleGenerator { generator: GroupPoint },
    List { points: Vec<GroupPoint> },
    /// `a + n*step`, `n >= 0`
    Arithmetic { start: GroupPoint, step: GroupPoint },
}

/// The points `start + u*step`, `u >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftRay {
    pub start: GroupPoint,
    pub step: GroupPoint,
}

fn int_mul(g: &GroupPoint, n: i64) -> GroupPoint {
    match g {
        GroupPoint::Int(x) => GroupPoint::Int(x * n),
        GroupPoint::IntVec(v) => GroupPoint::IntVec(v.iter().map(|x| x * n).collect()),
        GroupPoint::Real(p) => GroupPoint::Real(crate::group::RealPoint::new(
            p.anchor * n,
            p.offset * n as f64,
        )),
    }
}

impl ShiftSet {
    fn check_space(&self, space: Space) -> Result<()> {
        match self {
            ShiftSet::SingleGenerator { generator } => space.expect(generator.space()),
            ShiftSet::List { points } => points.iter().try_for_each(|p| space.expect(p.space())),
            ShiftSet::Arithmetic { start, step } => {
                space.expect(start.space())?;
                space.expect(step.space())
            }
            ShiftSet::HalfLinePos | ShiftSet::HalfLineNeg if matches!(space, Space::Zd(_)) => {
                Err(Error::Unsupported("half lines are defined on Z and R only".into()))
            }
            _ => Ok(()),
        }
    }

    /// Members of `S` with index at most `horizon`, sorted by size and then
    /// canonically. Index means `|s|` on `Z`, `n` for generated sets, the
    /// sup-norm on `Z^d`; on `R` continuous sets are sampled on the grid
    /// `REAL_GRID_STEP * Z` up to `|s| <= horizon`.
    pub fn enumerate(&self, space: Space, horizon: i64) -> Result<Vec<GroupPoint>> {
        self.check_space(space)?;
        if horizon < 1 {
            return Err(Error::InvalidArgument(format!("horizon must be >= 1, got {horizon}")));
        }
        let mut out: Vec<GroupPoint> = match (self, space) {
            (ShiftSet::List { points }, _) => points.clone(),
            (ShiftSet::SingleGenerator { generator }, _) => {
                (1..=horizon).map(|n| int_mul(generator, n)).collect()
            }
            (ShiftSet::Arithmetic { start, step }, _) => (0..horizon)
                .map(|n| start.add(&int_mul(step, n)))
                .collect::<Result<_>>()?,
            (ShiftSet::All, Space::Z) => (-horizon..=horizon).map(GroupPoint::Int).collect(),
            (ShiftSet::HalfLinePos, Space::Z) => (1..=horizon).map(GroupPoint::Int).collect(),
            (ShiftSet::HalfLineNeg, Space::Z) => (1..=horizon).map(|n| GroupPoint::Int(-n)).collect(),
            (ShiftSet::All, Space::Zd(d)) => {
                // cube radius with roughly 2*horizon+1 points in total
                let mut r = 0i64;
                while (2 * (r + 1) + 1).checked_pow(d as u32).is_some_and(|c| c <= 2 * horizon + 1)
                {
                    r += 1;
                }
                let r = r.max(1);
                crate::group::Window::int_box(vec![-r; d], vec![r; d])?.points()
            }
            (set, Space::R) => {
                let n = horizon.saturating_mul((1.0 / REAL_GRID_STEP) as i64);
                let range: Box<dyn Iterator<Item = i64>> = match set {
                    ShiftSet::All => Box::new(-n..=n),
                    ShiftSet::HalfLinePos => Box::new(1..=n),
                    _ => Box::new((1..=n).map(|j| -j)),
                };
                range
                    .map(|j| GroupPoint::real(j as f64 * REAL_GRID_STEP))
                    .collect()
            }
            _ => unreachable!("rejected by check_space"),
        };
        out.sort_by(|a, b| a.size().total_cmp(&b.size()).then_with(|| a.cmp(b)));
        out.dedup();
        Ok(out)
    }

    /// Rays covering every member of `S` not returned by
    /// `enumerate(space, horizon)`; `None` when no finite family of rays
    /// covers the rest (continuous sets, whole lattices in dimension >= 2).
    pub fn tail_rays(&self, space: Space, horizon: i64) -> Result<Option<Vec<ShiftRay>>> {
        self.check_space(space)?;
        let h = horizon + 1;
        Ok(match (self, space) {
            (ShiftSet::List { .. }, _) => Some(Vec::new()),
            (_, Space::R) => None,
            (ShiftSet::SingleGenerator { generator }, _) => Some(vec![ShiftRay {
                start: int_mul(generator, h),
                step: generator.clone(),
            }]),
            (ShiftSet::Arithmetic { start, step }, _) => Some(vec![ShiftRay {
                start: start.add(&int_mul(step, horizon))?,
                step: step.clone(),
            }]),
            (ShiftSet::All, Space::Z) => Some(vec![
                ShiftRay { start: GroupPoint::Int(h), step: GroupPoint::Int(1) },
                ShiftRay { start: GroupPoint::Int(-h), step: GroupPoint::Int(-1) },
            ]),
            (ShiftSet::HalfLinePos, Space::Z) => Some(vec![ShiftRay {
                start: GroupPoint::Int(h),
                step: GroupPoint::Int(1),
            }]),
            (ShiftSet::HalfLineNeg, Space::Z) => Some(vec![ShiftRay {
                start: GroupPoint::Int(-h),
                step: GroupPoint::Int(-1),
            }]),
            _ => None,
        })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ShiftSet::List { .. })
    }

    /// Whether `s` lies in the set (exact on discrete groups).
    pub fn contains(&self, s: &GroupPoint) -> bool {
        let sign = |p: &GroupPoint| match p {
            GroupPoint::Int(n) => n.signum() as f64,
            GroupPoint::Real(x) => x.approx().signum() * f64::from(x.approx() != 0.0),
            GroupPoint::IntVec(_) => f64::NAN,
        };
        match self {
            ShiftSet::All => true,
            ShiftSet::HalfLinePos => sign(s) == 1.0,
            ShiftSet::HalfLineNeg => sign(s) == -1.0,
            ShiftSet::List { points } => points.contains(s),
            ShiftSet::SingleGenerator { generator } => multiple_of(s, generator, 1),
            ShiftSet::Arithmetic { start, step } => match s.sub(start) {
                Ok(d) => d.is_identity() || multiple_of(&d, step, 1),
                Err(_) => false,
            },
        }
    }
}

/// Whether `s = n*g` for some integer `n >= min_n`.
fn multiple_of(s: &GroupPoint, g: &GroupPoint, min_n: i64) -> bool {
    match (s, g) {
        (GroupPoint::Int(a), GroupPoint::Int(b)) => {
            *b != 0 && a % b == 0 && a / b >= min_n || (*b == 0 && *a == 0 && min_n <= 0)
        }
        (GroupPoint::IntVec(a), GroupPoint::IntVec(b)) if a.len() == b.len() => {
            let n = a
                .iter()
                .zip(b)
                .find(|(_, y)| **y != 0)
                .map(|(x, y)| if x % y == 0 { Some(x / y) } else { None });
            match n {
                Some(Some(n)) => n >= min_n && a.iter().zip(b).all(|(x, y)| *x == n * y),
                _ => false,
            }
        }
        (GroupPoint::Real(a), GroupPoint::Real(b)) => {
            let r = a.approx() / b.approx();
            r.is_finite() && r.fract() == 0.0 && r >= min_n as f64
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_order_on_z() {
        let pts = ShiftSet::All.enumerate(Space::Z, 2).unwrap();
        let ints: Vec<i64> = pts.iter().map(|p| p.as_int().unwrap()).collect();
        assert_eq!(ints, vec![0, -1, 1, -2, 2]);
    }

    #[test]
    fn head_and_rays_partition_the_set() {
        for set in [
            ShiftSet::All,
            ShiftSet::HalfLinePos,
            ShiftSet::HalfLineNeg,
            ShiftSet::SingleGenerator { generator: GroupPoint::Int(3) },
            ShiftSet::Arithmetic { start: GroupPoint::Int(-2), step: GroupPoint::Int(5) },
        ] {
            let head = set.enumerate(Space::Z, 6).unwrap();
            let rays = set.tail_rays(Space::Z, 6).unwrap().unwrap();
            let mut covered: Vec<i64> = head.iter().map(|p| p.as_int().unwrap()).collect();
            for r in &rays {
                let (a, m) = (r.start.as_int().unwrap(), r.step.as_int().unwrap());
                covered.extend((0..40).map(|u| a + m * u));
            }
            for n in -30..=30 {
                let member = set.contains(&GroupPoint::Int(n));
                assert_eq!(covered.contains(&n), member, "{set:?} at {n}");
            }
        }
    }

    #[test]
    fn real_half_line_samples() {
        let pts = ShiftSet::HalfLinePos.enumerate(Space::R, 1).unwrap();
        assert_eq!(pts.len(), 8);
        assert_eq!(pts[0], GroupPoint::real(0.125));
        assert!(ShiftSet::HalfLinePos.tail_rays(Space::R, 1).unwrap().is_none());
    }

    #[test]
    fn half_line_on_lattice_is_rejected() {
        assert!(ShiftSet::HalfLinePos.enumerate(Space::Zd(2), 3).is_err());
    }
}
