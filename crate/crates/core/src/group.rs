//! Group elements, compact windows and finitely supported vectors on the
//! three ambient groups: `Z`, `Z^d` and an anchored model of `R`.
//!
//! All groups are abelian and written additively, so the translation
//! operator acts as `(T_s f)(t) = f(t - s)`.
//!
//! Real-line points carry an exact integer anchor plus a floating offset.
//! Arithmetic between points on the same anchor never touches the anchor,
//! which keeps offsets of size `2^-12` exact next to anchors as large as
//! `12! = 479001600`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ambient group of a point, window, vector or weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    Z,
    Zd(usize),
    R,
}

impl Space {
    pub fn is_discrete(self) -> bool {
        !matches!(self, Space::R)
    }

    pub(crate) fn expect(self, found: Space) -> Result<()> {
        if self == found {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                expected: self,
                found,
            })
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Z => write!(f, "Z"),
            Space::Zd(d) => write!(f, "Z^{d}"),
            Space::R => write!(f, "R"),
        }
    }
}

/// A point of the anchored real line: `anchor + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealPoint {
    pub anchor: i64,
    pub offset: f64,
}

impl RealPoint {
    pub const ORIGIN: RealPoint = RealPoint {
        anchor: 0,
        offset: 0.0,
    };

    pub fn new(anchor: i64, offset: f64) -> Self {
        RealPoint { anchor, offset }
    }

    pub fn at(x: f64) -> Self {
        RealPoint {
            anchor: 0,
            offset: x,
        }
    }

    /// `self - other` as a real number, anchors subtracted exactly first.
    pub fn diff(&self, other: &RealPoint) -> f64 {
        (self.anchor - other.anchor) as f64 + (self.offset - other.offset)
    }

    /// Coordinate of this point relative to the integer `anchor`.
    pub fn local(&self, anchor: i64) -> f64 {
        (self.anchor - anchor) as f64 + self.offset
    }

    pub fn add(&self, other: &RealPoint) -> RealPoint {
        RealPoint {
            anchor: self.anchor + other.anchor,
            offset: self.offset + other.offset,
        }
    }

    pub fn neg(&self) -> RealPoint {
        RealPoint {
            anchor: -self.anchor,
            offset: -self.offset,
        }
    }

    pub fn shifted(&self, by: f64) -> RealPoint {
        RealPoint {
            anchor: self.anchor,
            offset: self.offset + by,
        }
    }

    pub fn approx(&self) -> f64 {
        self.anchor as f64 + self.offset
    }

    /// Geometric order on the line.
    pub fn cmp_position(&self, other: &RealPoint) -> Ordering {
        let d = self.diff(other);
        if d < 0.0 {
            Ordering::Less
        } else if d > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }
}

/// Element of one of the supported groups. Serialized as a bare integer, an
/// integer array or an `{anchor, offset}` object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupPoint {
    Int(i64),
    IntVec(Vec<i64>),
    Real(RealPoint),
}

impl GroupPoint {
    pub fn real(x: f64) -> Self {
        GroupPoint::Real(RealPoint::at(x))
    }

    pub fn anchored(anchor: i64, offset: f64) -> Self {
        GroupPoint::Real(RealPoint::new(anchor, offset))
    }

    pub fn space(&self) -> Space {
        match self {
            GroupPoint::Int(_) => Space::Z,
            GroupPoint::IntVec(v) => Space::Zd(v.len()),
            GroupPoint::Real(_) => Space::R,
        }
    }

    pub fn identity(space: Space) -> Self {
        match space {
            Space::Z => GroupPoint::Int(0),
            Space::Zd(d) => GroupPoint::IntVec(vec![0; d]),
            Space::R => GroupPoint::Real(RealPoint::ORIGIN),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupPoint::Int(n) => *n == 0,
            GroupPoint::IntVec(v) => v.iter().all(|&x| x == 0),
            GroupPoint::Real(p) => p.approx() == 0.0 && p.diff(&RealPoint::ORIGIN) == 0.0,
        }
    }

    pub fn add(&self, other: &GroupPoint) -> Result<GroupPoint> {
        self.space().expect(other.space())?;
        Ok(match (self, other) {
            (GroupPoint::Int(a), GroupPoint::Int(b)) => GroupPoint::Int(a + b),
            (GroupPoint::IntVec(a), GroupPoint::IntVec(b)) => {
                GroupPoint::IntVec(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupPoint::Real(a), GroupPoint::Real(b)) => GroupPoint::Real(a.add(b)),
            _ => unreachable!("spaces checked above"),
        })
    }

    pub fn neg(&self) -> GroupPoint {
        match self {
            GroupPoint::Int(a) => GroupPoint::Int(-a),
            GroupPoint::IntVec(a) => GroupPoint::IntVec(a.iter().map(|x| -x).collect()),
            GroupPoint::Real(a) => GroupPoint::Real(a.neg()),
        }
    }

    pub fn sub(&self, other: &GroupPoint) -> Result<GroupPoint> {
        self.add(&other.neg())
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            GroupPoint::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<RealPoint> {
        match self {
            GroupPoint::Real(p) => Some(*p),
            _ => None,
        }
    }

    /// Coordinates of a discrete point (`Z` is treated as `Z^1`).
    pub fn coords(&self) -> Option<Vec<i64>> {
        match self {
            GroupPoint::Int(n) => Some(vec![*n]),
            GroupPoint::IntVec(v) => Some(v.clone()),
            GroupPoint::Real(_) => None,
        }
    }

    /// Sup-norm size, used for canonical enumeration order.
    pub fn size(&self) -> f64 {
        match self {
            GroupPoint::Int(n) => n.unsigned_abs() as f64,
            GroupPoint::IntVec(v) => v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as f64,
            GroupPoint::Real(p) => p.approx().abs(),
        }
    }
}

impl Eq for GroupPoint {}

impl PartialOrd for GroupPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical total order: variant, then value (lexicographic on `Z^d`,
/// anchor then offset on `R`).
impl Ord for GroupPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        fn rank(p: &GroupPoint) -> u8 {
            match p {
                GroupPoint::Int(_) => 0,
                GroupPoint::IntVec(_) => 1,
                GroupPoint::Real(_) => 2,
            }
        }
        match (self, other) {
            (GroupPoint::Int(a), GroupPoint::Int(b)) => a.cmp(b),
            (GroupPoint::IntVec(a), GroupPoint::IntVec(b)) => a.cmp(b),
            (GroupPoint::Real(a), GroupPoint::Real(b)) => a
                .cmp_position(b)
                .then(a.anchor.cmp(&b.anchor))
                .then(a.offset.total_cmp(&b.offset)),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

impl fmt::Display for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupPoint::Int(n) => write!(f, "{n}"),
            GroupPoint::IntVec(v) => write!(f, "{v:?}"),
            GroupPoint::Real(p) if p.anchor == 0 => write!(f, "{}", p.offset),
            GroupPoint::Real(p) => write!(f, "{}{:+}", p.anchor, p.offset),
        }
    }
}

/// Closed interval `[anchor + lo, anchor + hi]` on the real line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealInterval {
    pub anchor: i64,
    pub lo: f64,
    pub hi: f64,
}

impl RealInterval {
    pub fn new(anchor: i64, lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "interval offsets must be finite, got [{lo}, {hi}]"
            )));
        }
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "interval lower end {lo} exceeds upper end {hi}"
            )));
        }
        Ok(RealInterval { anchor, lo, hi })
    }

    pub fn start(&self) -> RealPoint {
        RealPoint::new(self.anchor, self.lo)
    }

    pub fn end(&self) -> RealPoint {
        RealPoint::new(self.anchor, self.hi)
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn shift(&self, s: &RealPoint) -> RealInterval {
        RealInterval {
            anchor: self.anchor + s.anchor,
            lo: self.lo + s.offset,
            hi: self.hi + s.offset,
        }
    }

    /// Half-open membership `start <= x < end`, the convention for step
    /// functions.
    pub fn contains(&self, x: &RealPoint) -> bool {
        let u = x.local(self.anchor);
        self.lo <= u && u < self.hi
    }

    /// Lebesgue measure of the intersection.
    pub fn overlap(&self, other: &RealInterval) -> f64 {
        let o_lo = other.start().local(self.anchor);
        let o_hi = other.end().local(self.anchor);
        (self.hi.min(o_hi) - self.lo.max(o_lo)).max(0.0)
    }
}

/// Compact set: an integer interval, an integer box or a finite union of
/// real intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Window {
    IntInterval { lo: i64, hi: i64 },
    IntBox { lo: Vec<i64>, hi: Vec<i64> },
    RealUnion(Vec<RealInterval>),
    Empty(Space),
}

impl Window {
    pub fn interval(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "window lower end {lo} exceeds upper end {hi}"
            )));
        }
        Ok(Window::IntInterval { lo, hi })
    }

    /// Symmetric window `[-m, m]`.
    pub fn centered(m: i64) -> Self {
        Window::IntInterval { lo: -m, hi: m }
    }

    pub fn int_box(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidArgument(
                "box corners must have the same positive dimension".into(),
            ));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::InvalidArgument(format!(
                "box lower corner {lo:?} exceeds upper corner {hi:?}"
            )));
        }
        Ok(Window::IntBox { lo, hi })
    }

    pub fn real_union(mut parts: Vec<RealInterval>) -> Result<Self> {
        parts.sort_by(|a, b| a.start().cmp_position(&b.start()));
        for w in parts.windows(2) {
            if w[0].end().diff(&w[1].start()) > 0.0 {
                return Err(Error::Invariant(format!(
                    "real window intervals overlap: {:?} and {:?}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Window::RealUnion(parts))
    }

    pub fn space(&self) -> Space {
        match self {
            Window::Empty(s) => *s,
            Window::IntInterval { .. } => Space::Z,
            Window::IntBox { lo, .. } => Space::Zd(lo.len()),
            Window::RealUnion(_) => Space::R,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Window::Empty(_) => true,
            Window::RealUnion(parts) => parts.is_empty(),
            _ => false,
        }
    }

    /// Counting measure on discrete groups, total length on `R`.
    pub fn measure(&self) -> f64 {
        match self {
            Window::Empty(_) => 0.0,
            Window::IntInterval { lo, hi } => (hi - lo + 1) as f64,
            Window::IntBox { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(a, b)| (b - a + 1) as f64)
                .product(),
            Window::RealUnion(parts) => parts.iter().map(RealInterval::length).sum(),
        }
    }

    /// The translate `K + s`.
    pub fn shift(&self, s: &GroupPoint) -> Result<Window> {
        self.space().expect(s.space())?;
        Ok(match (self, s) {
            (Window::Empty(sp), _) => Window::Empty(*sp),
            (Window::IntInterval { lo, hi }, GroupPoint::Int(d)) => Window::IntInterval {
                lo: lo + d,
                hi: hi + d,
            },
            (Window::IntBox { lo, hi }, GroupPoint::IntVec(d)) => Window::IntBox {
                lo: lo.iter().zip(d).map(|(a, b)| a + b).collect(),
                hi: hi.iter().zip(d).map(|(a, b)| a + b).collect(),
            },
            (Window::RealUnion(parts), GroupPoint::Real(p)) => {
                Window::RealUnion(parts.iter().map(|i| i.shift(p)).collect())
            }
            _ => unreachable!("spaces checked above"),
        })
    }

    /// Measure-theoretic disjointness. Exact on the discrete groups; on `R`
    /// intervals sharing only an endpoint are disjoint.
    pub fn disjoint(&self, other: &Window) -> Result<bool> {
        self.space().expect(other.space())?;
        if self.is_empty() || other.is_empty() {
            return Ok(true);
        }
        Ok(match (self, other) {
            (Window::IntInterval { lo: a, hi: b }, Window::IntInterval { lo: c, hi: d }) => {
                b < c || d < a
            }
            (Window::IntBox { lo: a, hi: b }, Window::IntBox { lo: c, hi: d }) => (0..a.len())
                .any(|i| b[i] < c[i] || d[i] < a[i]),
            (Window::RealUnion(x), Window::RealUnion(y)) => x
                .iter()
                .all(|i| y.iter().all(|j| i.overlap(j) <= 0.0)),
            _ => unreachable!("spaces checked above"),
        })
    }

    /// Whether `self` is contained in `other`.
    pub fn is_subset(&self, other: &Window) -> Result<bool> {
        self.space().expect(other.space())?;
        if self.is_empty() {
            return Ok(true);
        }
        Ok(match (self, other) {
            (_, Window::Empty(_)) => false,
            (Window::IntInterval { lo: a, hi: b }, Window::IntInterval { lo: c, hi: d }) => {
                c <= a && b <= d
            }
            (Window::IntBox { lo: a, hi: b }, Window::IntBox { lo: c, hi: d }) => {
                (0..a.len()).all(|i| c[i] <= a[i] && b[i] <= d[i])
            }
            (Window::RealUnion(x), Window::RealUnion(y)) => x.iter().all(|i| {
                let covered: f64 = y.iter().map(|j| i.overlap(j)).sum();
                covered >= i.length() - 1e-12 * i.length().max(1.0)
            }),
            _ => unreachable!("spaces checked above"),
        })
    }

    /// Points of a discrete window in canonical order.
    pub fn points(&self) -> Vec<GroupPoint> {
        match self {
            Window::Empty(_) | Window::RealUnion(_) => Vec::new(),
            Window::IntInterval { lo, hi } => (*lo..=*hi).map(GroupPoint::Int).collect(),
            Window::IntBox { lo, hi } => {
                let mut out = vec![Vec::with_capacity(lo.len())];
                for (a, b) in lo.iter().zip(hi) {
                    out = out
                        .into_iter()
                        .flat_map(|prefix| {
                            (*a..=*b).map(move |x| {
                                let mut p = prefix.clone();
                                p.push(x);
                                p
                            })
                        })
                        .collect();
                }
                out.into_iter().map(GroupPoint::IntVec).collect()
            }
        }
    }

    /// Smallest integer interval or box containing both windows.
    pub fn hull(&self, other: &Window) -> Result<Window> {
        self.space().expect(other.space())?;
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        match (self, other) {
            (Window::IntInterval { lo: a, hi: b }, Window::IntInterval { lo: c, hi: d }) => {
                Ok(Window::IntInterval {
                    lo: *a.min(c),
                    hi: *b.max(d),
                })
            }
            (Window::IntBox { lo: a, hi: b }, Window::IntBox { lo: c, hi: d }) => {
                Ok(Window::IntBox {
                    lo: a.iter().zip(c).map(|(x, y)| *x.min(y)).collect(),
                    hi: b.iter().zip(d).map(|(x, y)| *x.max(y)).collect(),
                })
            }
            _ => Err(Error::Unsupported("hull of real windows".into())),
        }
    }
}

/// One constant piece of a real step function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepPiece {
    pub interval: RealInterval,
    pub coeff: Complex64,
}

/// Finitely supported function on a discrete group, or a finite step
/// function on the real line. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub enum SupportedVec {
    Discrete {
        space: Space,
        entries: BTreeMap<GroupPoint, Complex64>,
    },
    Step(Vec<StepPiece>),
}

impl SupportedVec {
    pub fn zero(space: Space) -> Self {
        match space {
            Space::R => SupportedVec::Step(Vec::new()),
            _ => SupportedVec::Discrete {
                space,
                entries: BTreeMap::new(),
            },
        }
    }

    pub fn delta(point: GroupPoint, coeff: Complex64) -> Result<Self> {
        let space = point.space();
        if space == Space::R {
            return Err(Error::Unsupported(
                "point masses are not elements of L^p(R)".into(),
            ));
        }
        Self::from_entries(space, [(point, coeff)])
    }

    /// Builds a discrete vector, summing duplicate points and dropping zeros.
    pub fn from_entries(
        space: Space,
        items: impl IntoIterator<Item = (GroupPoint, Complex64)>,
    ) -> Result<Self> {
        if space == Space::R {
            return Err(Error::Unsupported(
                "use SupportedVec::step for real-line vectors".into(),
            ));
        }
        let mut entries: BTreeMap<GroupPoint, Complex64> = BTreeMap::new();
        for (p, c) in items {
            space.expect(p.space())?;
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "non-finite coefficient at {p}"
                )));
            }
            *entries.entry(p).or_default() += c;
        }
        entries.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(SupportedVec::Discrete { space, entries })
    }

    /// Builds a step function from pairwise disjoint pieces.
    pub fn step(pieces: Vec<StepPiece>) -> Result<Self> {
        let mut pieces: Vec<StepPiece> = pieces
            .into_iter()
            .filter(|p| p.coeff != Complex64::new(0.0, 0.0) && p.interval.length() > 0.0)
            .collect();
        pieces.sort_by(|a, b| a.interval.start().cmp_position(&b.interval.start()));
        for w in pieces.windows(2) {
            if w[0].interval.end().diff(&w[1].interval.start()) > 0.0 {
                return Err(Error::Invariant(format!(
                    "step pieces overlap: {:?} and {:?}",
                    w[0].interval, w[1].interval
                )));
            }
        }
        Ok(SupportedVec::Step(pieces))
    }

    pub fn space(&self) -> Space {
        match self {
            SupportedVec::Discrete { space, .. } => *space,
            SupportedVec::Step(_) => Space::R,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SupportedVec::Discrete { entries, .. } => entries.is_empty(),
            SupportedVec::Step(p) => p.is_empty(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SupportedVec::Discrete { entries, .. } => entries.len(),
            SupportedVec::Step(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Value at a point (half-open convention on `R`).
    pub fn value_at(&self, t: &GroupPoint) -> Complex64 {
        match (self, t) {
            (SupportedVec::Discrete { entries, .. }, _) => {
                entries.get(t).copied().unwrap_or_default()
            }
            (SupportedVec::Step(pieces), GroupPoint::Real(x)) => pieces
                .iter()
                .find(|p| p.interval.contains(x))
                .map(|p| p.coeff)
                .unwrap_or_default(),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// `T_s f`, i.e. `t -> f(t - s)`.
    pub fn translate(&self, s: &GroupPoint) -> Result<SupportedVec> {
        self.space().expect(s.space())?;
        Ok(match (self, s) {
            (SupportedVec::Discrete { space, entries }, _) => SupportedVec::Discrete {
                space: *space,
                entries: entries
                    .iter()
                    .map(|(p, c)| (p.add(s).expect("same space"), *c))
                    .collect(),
            },
            (SupportedVec::Step(pieces), GroupPoint::Real(d)) => SupportedVec::Step(
                pieces
                    .iter()
                    .map(|p| StepPiece {
                        interval: p.interval.shift(d),
                        coeff: p.coeff,
                    })
                    .collect(),
            ),
            _ => unreachable!("spaces checked above"),
        })
    }

    pub fn scale(&self, lambda: Complex64) -> SupportedVec {
        if lambda == Complex64::new(0.0, 0.0) {
            return SupportedVec::zero(self.space());
        }
        match self {
            SupportedVec::Discrete { space, entries } => SupportedVec::Discrete {
                space: *space,
                entries: entries
                    .iter()
                    .map(|(p, c)| (p.clone(), c * lambda))
                    .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
                    .collect(),
            },
            SupportedVec::Step(pieces) => SupportedVec::Step(
                pieces
                    .iter()
                    .map(|p| StepPiece {
                        interval: p.interval,
                        coeff: p.coeff * lambda,
                    })
                    .filter(|p| p.coeff != Complex64::new(0.0, 0.0))
                    .collect(),
            ),
        }
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: Complex64, other: &SupportedVec) -> Result<SupportedVec> {
        self.space().expect(other.space())?;
        match (self, other) {
            (SupportedVec::Discrete { space, entries }, SupportedVec::Discrete { entries: e2, .. }) => {
                let items = entries
                    .iter()
                    .map(|(p, c)| (p.clone(), *c))
                    .chain(e2.iter().map(|(p, c)| (p.clone(), c * factor)));
                SupportedVec::from_entries(*space, items)
            }
            (SupportedVec::Step(a), SupportedVec::Step(b)) => {
                let mut cuts: Vec<RealPoint> = a
                    .iter()
                    .chain(b.iter())
                    .flat_map(|p| [p.interval.start(), p.interval.end()])
                    .collect();
                cuts.sort_by(|x, y| x.cmp_position(y));
                cuts.dedup_by(|x, y| x.diff(y) == 0.0);
                let lookup = |pieces: &[StepPiece], x: &RealPoint| {
                    pieces
                        .iter()
                        .find(|p| p.interval.contains(x))
                        .map(|p| p.coeff)
                        .unwrap_or_default()
                };
                let mut out = Vec::new();
                for w in cuts.windows(2) {
                    let len = w[1].diff(&w[0]);
                    if len <= 0.0 {
                        continue;
                    }
                    let mid = w[0].shifted(0.5 * len);
                    let c = lookup(a, &mid) + factor * lookup(b, &mid);
                    if c != Complex64::new(0.0, 0.0) {
                        out.push(StepPiece {
                            interval: RealInterval {
                                anchor: w[0].anchor,
                                lo: w[0].offset,
                                hi: w[0].offset + len,
                            },
                            coeff: c,
                        });
                    }
                }
                SupportedVec::step(out)
            }
            _ => unreachable!("spaces checked above"),
        }
    }

    pub fn add(&self, other: &SupportedVec) -> Result<SupportedVec> {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &SupportedVec) -> Result<SupportedVec> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// Largest coefficient modulus.
    pub fn sup_abs(&self) -> f64 {
        match self {
            SupportedVec::Discrete { entries, .. } => {
                entries.values().map(|c| c.norm()).fold(0.0, f64::max)
            }
            SupportedVec::Step(p) => p.iter().map(|p| p.coeff.norm()).fold(0.0, f64::max),
        }
    }

    /// Smallest integer interval or box containing the support of a discrete
    /// vector.
    pub fn support_hull(&self) -> Window {
        match self {
            SupportedVec::Discrete { space, entries } => {
                let mut hull = Window::Empty(*space);
                for p in entries.keys() {
                    let w = match p {
                        GroupPoint::Int(n) => Window::IntInterval { lo: *n, hi: *n },
                        GroupPoint::IntVec(v) => Window::IntBox {
                            lo: v.clone(),
                            hi: v.clone(),
                        },
                        GroupPoint::Real(_) => unreachable!("discrete vector"),
                    };
                    hull = hull.hull(&w).expect("same space");
                }
                hull
            }
            SupportedVec::Step(p) => Window::RealUnion(p.iter().map(|p| p.interval).collect()),
        }
    }

    /// Discrete entries in canonical order (empty for step functions).
    pub fn entries(&self) -> impl Iterator<Item = (&GroupPoint, &Complex64)> {
        let map = match self {
            SupportedVec::Discrete { entries, .. } => Some(entries),
            SupportedVec::Step(_) => None,
        };
        map.into_iter().flat_map(|m| m.iter())
    }

    pub fn pieces(&self) -> &[StepPiece] {
        match self {
            SupportedVec::Step(p) => p,
            SupportedVec::Discrete { .. } => &[],
        }
    }
}

/// The function `coeff * chi_K`.
pub fn indicator(window: &Window, coeff: Complex64) -> SupportedVec {
    let space = window.space();
    if coeff == Complex64::new(0.0, 0.0) {
        return SupportedVec::zero(space);
    }
    match window {
        Window::Empty(_) => SupportedVec::zero(space),
        Window::RealUnion(parts) => SupportedVec::Step(
            parts
                .iter()
                .filter(|i| i.length() > 0.0)
                .map(|i| StepPiece {
                    interval: *i,
                    coeff,
                })
                .collect(),
        ),
        _ => SupportedVec::Discrete {
            space,
            entries: window.points().into_iter().map(|p| (p, coeff)).collect(),
        },
    }
}

pub fn translate(f: &SupportedVec, s: &GroupPoint) -> Result<SupportedVec> {
    f.translate(s)
}

pub fn shift_window(k: &Window, s: &GroupPoint) -> Result<Window> {
    k.shift(s)
}

pub fn disjoint(k1: &Window, k2: &Window) -> Result<bool> {
    k1.disjoint(k2)
}

pub fn measure(k: &Window) -> f64 {
    k.measure()
}
