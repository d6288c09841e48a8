//! Piecewise-analytic weights on the anchored real line.
//!
//! A weight is a list of segments, each attached to an anchor and written
//! in the local coordinate `u = t - anchor`, plus a default value used off
//! all segments. Four segment kinds cover every weight we need; each has a
//! closed-form antiderivative of `g^p`, a closed-form sub-level set, and
//! a closed-form log-derivative, so integrals, suprema and ratio suprema
//! are all exact up to floating point.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{RealInterval, RealPoint, Window};

/// Strictly increasing exact anchor positions, the first being 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnchorTable {
    positions: Vec<i64>,
}

impl AnchorTable {
    pub fn new(positions: Vec<i64>) -> Result<Self> {
        if positions.first() != Some(&0) {
            return Err(Error::Invariant("anchor table must start at position 0".into()));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invariant("anchor positions must be strictly increasing".into()));
        }
        Ok(AnchorTable { positions })
    }

    /// Anchors `0, 1!, 2!, ..., n_max!`, so that anchor id `n` sits at `n!`.
    pub fn factorial(n_max: usize) -> Result<Self> {
        if n_max > 20 {
            return Err(Error::InvalidArgument(format!(
                "factorial anchors overflow i64 beyond 20!, got n_max = {n_max}"
            )));
        }
        let mut positions = vec![0i64];
        let mut f = 1i64;
        for n in 1..=n_max as i64 {
            f *= n;
            positions.push(f);
        }
        AnchorTable::new(positions)
    }

    pub fn position(&self, id: usize) -> Option<i64> {
        self.positions.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }
}

/// Analytic form of a segment in its local coordinate `u`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SegmentKind {
    /// `a`
    Const { a: f64 },
    /// `a + b*u`
    Affine { a: f64, b: f64 },
    /// `a * 2^(b*u)`
    Exp2 { a: f64, b: f64 },
    /// `a / u`
    Recip { a: f64 },
}

/// `(e^((p+1) ln(1+z)) - 1) / ((p+1) z)`, stable near `z = 0`.
fn power_growth(z: f64, q: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        (q * z.ln_1p()).exp_m1() / (q * z)
    }
}

impl SegmentKind {
    pub fn value(&self, u: f64) -> Result<f64> {
        match *self {
            SegmentKind::Const { a } => Ok(a),
            SegmentKind::Affine { a, b } => Ok(a + b * u),
            SegmentKind::Exp2 { a, b } => Ok(a * (b * u).exp2()),
            SegmentKind::Recip { a } => {
                if u == 0.0 {
                    Err(Error::Domain("reciprocal segment evaluated at u = 0".into()))
                } else {
                    Ok(a / u)
                }
            }
        }
    }

    fn value_unchecked(&self, u: f64) -> f64 {
        self.value(u).unwrap_or(f64::INFINITY)
    }

    pub fn scaled(&self, k: f64) -> SegmentKind {
        match *self {
            SegmentKind::Const { a } => SegmentKind::Const { a: a * k },
            SegmentKind::Affine { a, b } => SegmentKind::Affine { a: a * k, b: b * k },
            SegmentKind::Exp2 { a, b } => SegmentKind::Exp2 { a: a * k, b },
            SegmentKind::Recip { a } => SegmentKind::Recip { a: a * k },
        }
    }

    /// `integral_{u0}^{u1} g(u)^p du` in closed form.
    pub fn integral_pow(&self, u0: f64, u1: f64, p: f64) -> f64 {
        let len = u1 - u0;
        if len <= 0.0 {
            return 0.0;
        }
        match *self {
            SegmentKind::Const { a } => a.powf(p) * len,
            SegmentKind::Affine { a, b } => {
                let y0 = a + b * u0;
                if b == 0.0 {
                    return y0.powf(p) * len;
                }
                // y1^(p+1) - y0^(p+1) over b(p+1), rewritten around y0
                y0.powf(p) * len * power_growth(b * len / y0, p + 1.0)
            }
            SegmentKind::Exp2 { a, b } => {
                let rate = p * b * std::f64::consts::LN_2;
                let start = a.powf(p) * (p * b * u0).exp2();
                if rate == 0.0 {
                    start * len
                } else {
                    let x = rate * len;
                    start * len * (x.exp_m1() / x)
                }
            }
            SegmentKind::Recip { a } => {
                // integrate |a|^p |u|^(-p) over the positive mirror if needed
                let (v0, v1) = if u0 >= 0.0 { (u0, u1) } else { (-u1, -u0) };
                let ap = a.abs().powf(p);
                let z = (v1 - v0) / v0;
                if p == 1.0 {
                    ap * z.ln_1p()
                } else {
                    ap * v0.powf(1.0 - p) * (v1 - v0) / v0 * power_growth(z, 1.0 - p)
                }
            }
        }
    }

    /// `{u in [u0, u1] : g(u) <= theta}` for the monotone kinds, as a closed
    /// interval (possibly empty).
    pub fn sublevel(&self, u0: f64, u1: f64, theta: f64) -> Option<(f64, f64)> {
        let clip = |lo: f64, hi: f64| {
            let (lo, hi) = (lo.max(u0), hi.min(u1));
            (lo <= hi).then_some((lo, hi))
        };
        match *self {
            SegmentKind::Const { a } => (a <= theta).then_some((u0, u1)),
            SegmentKind::Affine { a, b } => {
                if b == 0.0 {
                    return (a <= theta).then_some((u0, u1));
                }
                let cross = (theta - a) / b;
                if b > 0.0 {
                    clip(f64::NEG_INFINITY, cross)
                } else {
                    clip(cross, f64::INFINITY)
                }
            }
            SegmentKind::Exp2 { a, b } => {
                if theta <= 0.0 {
                    return None;
                }
                if b == 0.0 {
                    return (a <= theta).then_some((u0, u1));
                }
                let cross = (theta / a).log2() / b;
                if b > 0.0 {
                    clip(f64::NEG_INFINITY, cross)
                } else {
                    clip(cross, f64::INFINITY)
                }
            }
            SegmentKind::Recip { a } => {
                if theta <= 0.0 {
                    return None;
                }
                let cross = a / theta;
                if u0 >= 0.0 {
                    clip(cross, f64::INFINITY)
                } else {
                    clip(f64::NEG_INFINITY, cross)
                }
            }
        }
    }
}

/// Interior stationary point of `u -> num(u + delta) / den(u)`, if the
/// pair admits one. Every pair of kinds has at most one.
fn ratio_stationary(num: &SegmentKind, den: &SegmentKind, delta: f64) -> Option<f64> {
    use SegmentKind::*;
    let ln2 = std::f64::consts::LN_2;
    let u = match (*num, *den) {
        (Affine { a: a1, b: b1 }, Exp2 { b: b2, .. }) if b1 != 0.0 && b2 != 0.0 => {
            (b1 / (b2 * ln2) - a1) / b1 - delta
        }
        (Exp2 { b: b1, .. }, Affine { a: a2, b: b2 }) if b1 != 0.0 && b2 != 0.0 => {
            (b2 / (b1 * ln2) - a2) / b2
        }
        (Affine { a: a1, b: b1 }, Recip { .. }) if b1 != 0.0 => -(a1 + b1 * delta) / (2.0 * b1),
        (Recip { .. }, Affine { a: a2, b: b2 }) if b2 != 0.0 => -(a2 + b2 * delta) / (2.0 * b2),
        (Exp2 { b: b1, .. }, Recip { .. }) if b1 != 0.0 => -1.0 / (b1 * ln2),
        (Recip { .. }, Exp2 { b: b2, .. }) if b2 != 0.0 => -1.0 / (b2 * ln2) - delta,
        _ => return None,
    };
    u.is_finite().then_some(u)
}

/// A segment of a real weight, in local coordinates of its anchor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub anchor: usize,
    pub lo: f64,
    pub hi: f64,
    #[serde(flatten)]
    pub kind: SegmentKind,
}

/// Piece of a real interval on which the weight has a single analytic form.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Piece {
    /// interval-local coordinates
    pub lo: f64,
    pub hi: f64,
    pub kind: SegmentKind,
    /// segment-local coordinate = interval-local coordinate + shift
    pub shift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealWeight {
    anchors: AnchorTable,
    segments: Vec<Segment>,
    default: f64,
}

impl RealWeight {
    pub fn new(anchors: AnchorTable, segments: Vec<Segment>, default: f64) -> Result<Self> {
        if !(default > 0.0 && default.is_finite()) {
            return Err(Error::Invariant(format!(
                "default weight value must be positive and finite, got {default}"
            )));
        }
        let mut kept = Vec::with_capacity(segments.len());
        for (i, s) in segments.into_iter().enumerate() {
            let pos = anchors.position(s.anchor).ok_or_else(|| {
                Error::Invariant(format!("segment {i} refers to missing anchor {}", s.anchor))
            })?;
            if !(s.lo.is_finite() && s.hi.is_finite() && s.lo <= s.hi) {
                return Err(Error::Invariant(format!(
                    "segment {i} has malformed span [{}, {}]",
                    s.lo, s.hi
                )));
            }
            if let SegmentKind::Recip { .. } = s.kind {
                if s.lo <= 0.0 && s.hi >= 0.0 {
                    return Err(Error::Invariant(format!(
                        "reciprocal segment {i} contains u = 0"
                    )));
                }
            }
            if let SegmentKind::Exp2 { a, .. } | SegmentKind::Const { a } = s.kind {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::Invariant(format!(
                        "segment {i} has non-positive scale {a}"
                    )));
                }
            }
            for u in [s.lo, s.hi] {
                let v = s.kind.value(u)?;
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Invariant(format!(
                        "segment {i} is not strictly positive at u = {u} (value {v})"
                    )));
                }
            }
            if s.hi > s.lo {
                kept.push((pos, s));
            }
        }
        kept.sort_by(|(p, a), (q, b)| {
            RealPoint::new(*p, a.lo).cmp_position(&RealPoint::new(*q, b.lo))
        });
        for w in kept.windows(2) {
            let end = RealPoint::new(w[0].0, w[0].1.hi);
            let start = RealPoint::new(w[1].0, w[1].1.lo);
            if end.diff(&start) > 1e-12 {
                return Err(Error::Invariant(format!(
                    "segments overlap near anchor {}",
                    w[1].1.anchor
                )));
            }
        }
        Ok(RealWeight {
            anchors,
            segments: kept.into_iter().map(|(_, s)| s).collect(),
            default,
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        RealWeight::new(AnchorTable::new(vec![0])?, Vec::new(), value)
    }

    pub fn anchors(&self) -> &AnchorTable {
        &self.anchors
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn default_value(&self) -> f64 {
        self.default
    }

    fn seg_pos(&self, s: &Segment) -> i64 {
        self.anchors.position(s.anchor).expect("validated anchor")
    }

    pub fn scaled(&self, k: f64) -> Result<RealWeight> {
        RealWeight::new(
            self.anchors.clone(),
            self.segments
                .iter()
                .map(|s| Segment {
                    kind: s.kind.scaled(k),
                    ..*s
                })
                .collect(),
            self.default * k,
        )
    }

    /// Keeps only the segments attached to anchors `<= max_anchor`.
    pub fn truncated(&self, max_anchor: usize) -> RealWeight {
        RealWeight {
            anchors: self.anchors.clone(),
            segments: self
                .segments
                .iter()
                .filter(|s| s.anchor <= max_anchor)
                .copied()
                .collect(),
            default: self.default,
        }
    }

    pub fn max_anchor_used(&self) -> usize {
        self.segments.iter().map(|s| s.anchor).max().unwrap_or(0)
    }

    fn locate(&self, x: &RealPoint) -> Option<(&Segment, f64)> {
        self.segments.iter().find_map(|s| {
            let u = x.local(self.seg_pos(s));
            (s.lo <= u && u <= s.hi).then_some((s, u))
        })
    }

    pub fn value(&self, x: &RealPoint) -> Result<f64> {
        match self.locate(x) {
            Some((s, u)) => s.kind.value(u),
            None => Ok(self.default),
        }
    }

    /// Splits `iv` into pieces carrying a single analytic form each.
    pub(crate) fn pieces(&self, iv: &RealInterval) -> Vec<Piece> {
        let mut covered: Vec<Piece> = Vec::new();
        for s in &self.segments {
            let pos = self.seg_pos(s);
            let shift = (iv.anchor - pos) as f64;
            let lo = (s.lo - shift).max(iv.lo);
            let hi = (s.hi - shift).min(iv.hi);
            if hi > lo {
                covered.push(Piece {
                    lo,
                    hi,
                    kind: s.kind,
                    shift,
                });
            }
        }
        covered.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let tol = 1e-13 * (1.0 + iv.lo.abs().max(iv.hi.abs()));
        let mut out = Vec::with_capacity(2 * covered.len() + 1);
        let mut cursor = iv.lo;
        for p in covered {
            if p.lo - cursor > tol {
                out.push(Piece {
                    lo: cursor,
                    hi: p.lo,
                    kind: SegmentKind::Const { a: self.default },
                    shift: 0.0,
                });
            }
            cursor = cursor.max(p.hi);
            out.push(p);
        }
        if iv.hi - cursor > tol || (out.is_empty() && iv.hi > iv.lo) {
            out.push(Piece {
                lo: cursor,
                hi: iv.hi,
                kind: SegmentKind::Const { a: self.default },
                shift: 0.0,
            });
        }
        out
    }

    pub fn integral_pow(&self, iv: &RealInterval, p: f64) -> f64 {
        self.pieces(iv)
            .iter()
            .map(|pc| pc.kind.integral_pow(pc.lo + pc.shift, pc.hi + pc.shift, p))
            .sum()
    }

    /// Essential supremum over an interval of positive length (every kind is
    /// monotone, so only piece endpoints matter).
    pub fn sup_on_interval(&self, iv: &RealInterval) -> f64 {
        if iv.length() <= 0.0 {
            return 0.0;
        }
        self.pieces(iv)
            .iter()
            .flat_map(|pc| {
                [
                    pc.kind.value_unchecked(pc.lo + pc.shift),
                    pc.kind.value_unchecked(pc.hi + pc.shift),
                ]
            })
            .fold(0.0, f64::max)
    }

    pub fn sup_on_window(&self, k: &Window) -> Result<f64> {
        match k {
            Window::Empty(_) => Ok(0.0),
            Window::RealUnion(parts) => {
                Ok(parts.iter().map(|i| self.sup_on_interval(i)).fold(0.0, f64::max))
            }
            other => Err(Error::SpaceMismatch {
                expected: crate::group::Space::R,
                found: other.space(),
            }),
        }
    }

    /// Intervals of `iv` on which `w(t + shift) <= theta`.
    pub(crate) fn sublevel_shifted(
        &self,
        iv: &RealInterval,
        shift: &RealPoint,
        theta: f64,
    ) -> Vec<(f64, f64)> {
        let moved = iv.shift(shift);
        // moved-local coordinates equal iv-local coordinates plus shift.offset
        self.pieces(&moved)
            .iter()
            .filter_map(|pc| {
                pc.kind
                    .sublevel(pc.lo + pc.shift, pc.hi + pc.shift, theta)
                    .map(|(a, b)| (a - pc.shift - shift.offset, b - pc.shift - shift.offset))
            })
            .collect()
    }

    /// All segment endpoints as absolute points.
    fn breakpoints(&self) -> Vec<RealPoint> {
        self.segments
            .iter()
            .flat_map(|s| {
                let pos = self.seg_pos(s);
                [RealPoint::new(pos, s.lo), RealPoint::new(pos, s.hi)]
            })
            .collect()
    }

    /// `sup_t w(t + s) / w(t)` by exact analysis on every elementary piece
    /// where both `t` and `t + s` sit in a single segment (or the default
    /// region). Returns the supremum, a point attaining it, and the largest
    /// ratio found per anchor id (indexed by the anchor of the segment
    /// containing `t` or `t + s`).
    pub fn ratio_sup(&self, s: &RealPoint) -> RatioSup {
        let mut cuts = self.breakpoints();
        let minus_s = s.neg();
        cuts.extend(self.breakpoints().iter().map(|b| b.add(&minus_s)));
        cuts.sort_by(|a, b| a.cmp_position(b));
        cuts.dedup_by(|a, b| a.diff(b) == 0.0);

        let mut best = RatioSup {
            value: 1.0,
            witness: cuts
                .first()
                .map(|c| c.shifted(-1.0))
                .unwrap_or(RealPoint::ORIGIN),
            per_anchor: vec![0.0; self.anchors.len()],
        };
        for w in cuts.windows(2) {
            let len = w[1].diff(&w[0]);
            if len <= 0.0 {
                continue;
            }
            let x0 = w[0];
            let mid = x0.shifted(0.5 * len);
            let (den, u0, den_anchor) = match self.locate(&mid) {
                Some((seg, _)) => (seg.kind, x0.local(self.seg_pos(seg)), Some(seg.anchor)),
                None => (SegmentKind::Const { a: self.default }, 0.0, None),
            };
            let shifted0 = x0.add(s);
            let (num, v0, num_anchor) = match self.locate(&mid.add(s)) {
                Some((seg, _)) => (seg.kind, shifted0.local(self.seg_pos(seg)), Some(seg.anchor)),
                None => (SegmentKind::Const { a: self.default }, 0.0, None),
            };
            let delta = v0 - u0;
            let mut candidates = vec![u0, u0 + len];
            if let Some(u) = ratio_stationary(&num, &den, delta) {
                if u > u0 && u < u0 + len {
                    candidates.push(u);
                }
            }
            for u in candidates {
                let r = num.value_unchecked(u + delta) / den.value_unchecked(u);
                if !r.is_finite() {
                    continue;
                }
                if let Some(a) = den_anchor.max(num_anchor) {
                    if r > best.per_anchor[a] {
                        best.per_anchor[a] = r;
                    }
                }
                if r > best.value {
                    best.value = r;
                    best.witness = x0.shifted(u - u0);
                }
            }
        }
        best
    }

    /// Sets of `t` in `iv` on which the weight sits in a single form, used by
    /// tests as an integration oracle partition.
    pub fn piece_bounds(&self, iv: &RealInterval) -> Vec<(f64, f64, SegmentKind, f64)> {
        self.pieces(iv)
            .into_iter()
            .map(|p| (p.lo, p.hi, p.kind, p.shift))
            .collect()
    }
}

/// Result of [`RealWeight::ratio_sup`].
#[derive(Clone, Debug, PartialEq)]
pub struct RatioSup {
    pub value: f64,
    pub witness: RealPoint,
    pub per_anchor: Vec<f64>,
}

impl RatioSup {
    /// Heuristic divergence signal: the largest ratio sits on the last anchor
    /// in use and the per-anchor maxima grow by at least 1.5x over the last
    /// three anchors.
    pub fn grows_with_anchor(&self) -> bool {
        let used: Vec<f64> = self
            .per_anchor
            .iter()
            .copied()
            .filter(|&r| r > 0.0)
            .collect();
        if used.len() < 3 {
            return false;
        }
        let tail = &used[used.len() - 3..];
        let last_is_max = used
            .iter()
            .all(|&r| r.partial_cmp(&tail[2]) != Some(Ordering::Greater));
        last_is_max && tail[1] >= 1.5 * tail[0] && tail[2] >= 1.5 * tail[1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                    + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
            }
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, depth)
    }

    #[test]
    fn closed_form_integrals_match_quadrature() {
        let kinds = [
            (SegmentKind::Const { a: 3.0 }, 0.5, 2.0),
            (SegmentKind::Affine { a: 1.0, b: 56.0 }, 0.0, 0.125),
            (SegmentKind::Affine { a: 1.0, b: -6.0 }, -0.5, 0.0),
            (SegmentKind::Exp2 { a: 8.0, b: 1.0 }, -3.0, -1.0),
            (SegmentKind::Exp2 { a: 2.0, b: -0.7 }, 0.0, 4.0),
            (SegmentKind::Recip { a: 1.0 }, 0.125, 1.0),
            (SegmentKind::Recip { a: -2.0 }, -3.0, -0.5),
        ];
        for p in [1.0, 1.5, 2.0, 3.25] {
            for (k, a, b) in kinds {
                let exact = k.integral_pow(a, b, p);
                let f = |u: f64| k.value(u).unwrap().powf(p);
                let quad = simpson(&f, a, b, 1e-14, 40);
                assert!(
                    ((exact - quad) / quad).abs() < 1e-10,
                    "{k:?} p={p}: {exact} vs {quad}"
                );
            }
        }
    }

    #[test]
    fn recip_rejects_zero() {
        assert!(matches!(
            SegmentKind::Recip { a: 1.0 }.value(0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn sublevels_of_each_kind() {
        let aff = SegmentKind::Affine { a: 1.0, b: -6.0 };
        assert_eq!(aff.sublevel(-0.5, 0.0, 2.0), Some((-1.0 / 6.0, 0.0)));
        let rec = SegmentKind::Recip { a: 1.0 };
        assert_eq!(rec.sublevel(0.125, 1.0, 2.0), Some((0.5, 1.0)));
        let ex = SegmentKind::Exp2 { a: 1.0, b: 1.0 };
        assert_eq!(ex.sublevel(0.0, 3.0, 4.0), Some((0.0, 2.0)));
        assert_eq!(SegmentKind::Const { a: 4.0 }.sublevel(0.0, 1.0, 2.0), None);
    }

    #[test]
    fn overlapping_segments_are_rejected() {
        let anchors = AnchorTable::new(vec![0, 10]).unwrap();
        let segs = vec![
            Segment { anchor: 1, lo: -1.0, hi: 1.0, kind: SegmentKind::Const { a: 2.0 } },
            Segment { anchor: 1, lo: 0.5, hi: 2.0, kind: SegmentKind::Const { a: 2.0 } },
        ];
        assert!(RealWeight::new(anchors, segs, 1.0).is_err());
    }

    #[test]
    fn non_positive_segment_is_rejected() {
        let anchors = AnchorTable::new(vec![0]).unwrap();
        let segs = vec![Segment {
            anchor: 0,
            lo: 0.0,
            hi: 1.0,
            kind: SegmentKind::Affine { a: 0.5, b: -1.0 },
        }];
        assert!(RealWeight::new(anchors, segs, 1.0).is_err());
    }

    #[test]
    fn constant_weight_ratio_is_one() {
        let w = RealWeight::constant(3.0).unwrap();
        let r = w.ratio_sup(&RealPoint::at(0.7));
        assert_eq!(r.value, 1.0);
    }
}
