//! Coupling functions with dead zones.
//!
//! A coupling function is a 2π-periodic scalar function `g`. Its dead-zone set
//! is where it is locally null; the complement consists of live zones. Two
//! kinds are supported:
//!
//! * [`Piecewise`]: identically zero outside a finite list of live-zone
//!   profiles. Each profile is an affine segment multiplied by a C∞ plateau
//!   window, so dead zones are exact and the value and slope at each live-zone
//!   center can be prescribed.
//! * [`KuramotoSakaguchi`]: `g(ψ) = −sin(ψ+α)·h(ψ)` with the smooth gate
//!   `h(ψ) = ½(tanh((cos b − cos(a−ψ))/ε) + 1)`. Its dead zone is the
//!   approximate one, the closed arc of half-width `b` around `a`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::{circular_distance, wrap, TAU};

/// Angular tolerance used when comparing arc endpoints.
const ARC_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CouplingError {
    #[error("arc width {0} must lie in (0, 2π)")]
    InvalidArcWidth(f64),
    #[error("angle {0} is not finite")]
    NonFinite(f64),
    #[error("profile center {center} is not inside its support")]
    CenterOutsideSupport { center: f64 },
    #[error("live-zone supports {0} and {1} overlap or touch")]
    OverlappingProfiles(usize, usize),
    #[error("dead-zone arcs {0} and {1} overlap")]
    OverlappingArcs(usize, usize),
    #[error("coupling function has no live zone with nonzero variation")]
    Constant,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A closed arc `[start, start + width]` on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleArc {
    start: f64,
    width: f64,
}

impl CircleArc {
    pub fn new(start: f64, width: f64) -> Result<Self, CouplingError> {
        if !start.is_finite() {
            return Err(CouplingError::NonFinite(start));
        }
        if !(width > 0.0 && width < TAU) {
            return Err(CouplingError::InvalidArcWidth(width));
        }
        Ok(Self {
            start: wrap(start),
            width,
        })
    }

    /// The arc running counterclockwise from `lo` to `hi`.
    pub fn from_endpoints(lo: f64, hi: f64) -> Result<Self, CouplingError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(CouplingError::NonFinite(if lo.is_finite() { hi } else { lo }));
        }
        Self::new(lo, wrap(hi - lo))
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// End point, not reduced mod 2π (may exceed 2π).
    pub fn end(&self) -> f64 {
        self.start + self.width
    }

    pub fn midpoint(&self) -> f64 {
        wrap(self.start + 0.5 * self.width)
    }

    /// Offset of `psi` from the start, in `[0, 2π)`.
    #[inline]
    fn offset(&self, psi: f64) -> f64 {
        wrap(psi - self.start)
    }

    /// Closed-arc membership.
    #[inline]
    pub fn contains(&self, psi: f64) -> bool {
        self.offset(psi) <= self.width
    }

    /// Open-arc membership.
    #[inline]
    pub fn contains_interior(&self, psi: f64) -> bool {
        let d = self.offset(psi);
        d > 0.0 && d < self.width
    }

    pub fn distance_to_boundary(&self, psi: f64) -> f64 {
        circular_distance(psi, self.start).min(circular_distance(psi, self.end()))
    }

    /// The image under `ψ ↦ −ψ`.
    pub fn reflect(&self) -> Self {
        Self {
            start: wrap(-self.end()),
            width: self.width,
        }
    }

    fn same_as(&self, other: &Self) -> bool {
        circular_distance(self.start, other.start) < ARC_EPS
            && (self.width - other.width).abs() < ARC_EPS
    }
}

/// A finite set of pairwise disjoint closed arcs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DeadZoneSet {
    arcs: Vec<CircleArc>,
}

impl DeadZoneSet {
    pub fn new(mut arcs: Vec<CircleArc>) -> Result<Self, CouplingError> {
        arcs.sort_by(|a, b| a.start.total_cmp(&b.start));
        let total: f64 = arcs.iter().map(|a| a.width).sum();
        if total >= TAU {
            return Err(CouplingError::InvalidParameter(
                "dead zones cover the whole circle".into(),
            ));
        }
        let n = arcs.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (&arcs[i], &arcs[j]);
                if a.contains(b.start) || b.contains(a.start) {
                    return Err(CouplingError::OverlappingArcs(i, j));
                }
            }
        }
        Ok(Self { arcs })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn arcs(&self) -> &[CircleArc] {
        &self.arcs
    }

    /// Number of dead zones.
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    #[inline]
    pub fn contains(&self, psi: f64) -> bool {
        self.arcs.iter().any(|a| a.contains(psi))
    }

    /// Distance from `psi` to the nearest dead-zone boundary point;
    /// infinite when there are no dead zones.
    pub fn distance_to_boundary(&self, psi: f64) -> f64 {
        self.arcs
            .iter()
            .map(|a| a.distance_to_boundary(psi))
            .fold(f64::INFINITY, f64::min)
    }

    /// The live zones: closures of the connected components of the complement.
    pub fn live_zones(&self) -> Vec<CircleArc> {
        let n = self.arcs.len();
        (0..n)
            .filter_map(|i| {
                let cur = &self.arcs[i];
                let next = &self.arcs[(i + 1) % n];
                let gap = wrap(next.start - cur.end());
                CircleArc::new(cur.end(), gap).ok()
            })
            .collect()
    }

    /// Whether `−DZ = DZ` as subsets of the circle.
    pub fn is_symmetric(&self) -> bool {
        let mut unmatched = self.arcs.clone();
        self.arcs.iter().map(CircleArc::reflect).all(|r| {
            match unmatched.iter().position(|a| a.same_as(&r)) {
                Some(p) => {
                    unmatched.swap_remove(p);
                    true
                }
                None => false,
            }
        })
    }
}

/// Smooth step `S(t) = f(t) / (f(t) + f(1−t))` with `f(t) = exp(−1/t)`.
/// `S` is C∞, equals 0 for `t ≤ 0` and 1 for `t ≥ 1`, with all derivatives
/// vanishing at both ends.
#[inline]
fn smooth_step(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0);
    }
    let s = 1.0 - t;
    let f = (-1.0 / t).exp();
    let fs = (-1.0 / s).exp();
    let d = f + fs;
    if d == 0.0 {
        return (0.0, 0.0);
    }
    let df = f / (t * t);
    let dfs = fs / (s * s);
    // d/dt [f(t) / (f(t) + f(1-t))]
    let deriv = (df * fs + f * dfs) / (d * d);
    (f / d, deriv)
}

/// One live zone of a [`Piecewise`] coupling function:
/// `p(ψ) = (value + slope·x)·w(x)` with `x = ψ − center` and `w` a C∞ window
/// that is 1 on the middle third around the center and vanishes with all
/// derivatives at the support boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpProfile {
    center: f64,
    support: CircleArc,
    value: f64,
    slope: f64,
    // distances from the center to the support ends
    left: f64,
    right: f64,
    // reciprocal lengths of the left and right transitions
    inv_left: f64,
    inv_right: f64,
}

impl BumpProfile {
    pub fn new(
        center: f64,
        support: CircleArc,
        value: f64,
        slope: f64,
    ) -> Result<Self, CouplingError> {
        if !value.is_finite() || !slope.is_finite() {
            return Err(CouplingError::InvalidParameter(
                "profile value and slope must be finite".into(),
            ));
        }
        if !support.contains_interior(center) {
            return Err(CouplingError::CenterOutsideSupport { center });
        }
        let left = support.offset(center);
        Ok(Self {
            center: wrap(center),
            support,
            value,
            slope,
            left,
            right: support.width - left,
            inv_left: 1.5 / left,
            inv_right: 1.5 / (support.width - left),
        })
    }

    /// Profile on a support of the given width centered at `center`.
    pub fn centered(center: f64, width: f64, value: f64, slope: f64) -> Result<Self, CouplingError> {
        let support = CircleArc::new(center - 0.5 * width, width)?;
        Self::new(center, support, value, slope)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn support(&self) -> CircleArc {
        self.support
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    /// Window and its derivative at offset `x` from the center.
    #[inline]
    fn window(&self, x: f64) -> (f64, f64) {
        // one test for the whole plateau; x flips sign often near the center
        if (3.0 * x <= self.right) & (-3.0 * x <= self.left) {
            return (1.0, 0.0);
        }
        if x >= 0.0 {
            let (w, dw) = smooth_step((self.right - x) * self.inv_right);
            (w, -dw * self.inv_right)
        } else {
            let (w, dw) = smooth_step((x + self.left) * self.inv_left);
            (w, dw * self.inv_left)
        }
    }

    /// Value and derivative at a point given by its offset from the support start.
    #[inline]
    fn eval_at_offset(&self, d: f64) -> (f64, f64) {
        if d >= self.support.width {
            return (0.0, 0.0);
        }
        let x = d - self.left;
        let (w, dw) = self.window(x);
        let affine = self.value + self.slope * x;
        (affine * w, self.slope * w + affine * dw)
    }

    pub fn eval(&self, psi: f64) -> f64 {
        self.eval_at_offset(self.support.offset(psi)).0
    }

    pub fn deriv(&self, psi: f64) -> f64 {
        self.eval_at_offset(self.support.offset(psi)).1
    }
}

/// Build a single live-zone profile. See [`BumpProfile`].
pub fn make_bump_profile(
    center: f64,
    support: CircleArc,
    value: f64,
    slope: f64,
) -> Result<BumpProfile, CouplingError> {
    BumpProfile::new(center, support, value, slope)
}

/// Coupling function that vanishes identically outside its live-zone profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise {
    // sorted by support start
    profiles: Vec<BumpProfile>,
    dead_zones: DeadZoneSet,
    // cell i runs from the start of support i to the start of support i + 1
    cells: Vec<f64>,
}

impl Piecewise {
    pub fn new(mut profiles: Vec<BumpProfile>) -> Result<Self, CouplingError> {
        if !profiles.iter().any(|p| p.slope != 0.0 || p.value != 0.0) {
            return Err(CouplingError::Constant);
        }
        profiles.sort_by(|a, b| a.support.start.total_cmp(&b.support.start));
        let n = profiles.len();
        let mut dead = Vec::with_capacity(n);
        for i in 0..n {
            let cur = profiles[i].support;
            let next = profiles[(i + 1) % n].support;
            let gap = if n == 1 {
                TAU - cur.width
            } else {
                next.start - cur.end() + if i + 1 == n { TAU } else { 0.0 }
            };
            if gap <= 0.0 || (n > 1 && cur.width + gap >= TAU) {
                return Err(CouplingError::OverlappingProfiles(i, (i + 1) % n));
            }
            dead.push(CircleArc::new(cur.end(), gap)?);
        }
        let cells = profiles.iter().map(|p| p.support.width).zip(&dead).map(|(w, d)| w + d.width).collect();
        Ok(Self {
            profiles,
            dead_zones: DeadZoneSet { arcs: sorted_arcs(dead) },
            cells,
        })
    }

    /// A coupling function whose dead-zone set is exactly the given arcs.
    /// Each live zone gets a profile centered at its midpoint with value 1 and
    /// slope 1.
    pub fn from_dead_zones(arcs: Vec<CircleArc>) -> Result<Self, CouplingError> {
        let set = DeadZoneSet::new(arcs)?;
        if set.is_empty() {
            return Err(CouplingError::InvalidParameter(
                "a piecewise coupling function needs at least one dead zone".into(),
            ));
        }
        let profiles = set
            .live_zones()
            .into_iter()
            .map(|lz| BumpProfile::new(lz.midpoint(), lz, 1.0, 1.0))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(profiles)
    }

    pub fn profiles(&self) -> &[BumpProfile] {
        &self.profiles
    }

    pub fn dead_zones(&self) -> &DeadZoneSet {
        &self.dead_zones
    }

    #[inline]
    fn lookup(&self, psi: f64) -> Option<(&BumpProfile, f64)> {
        let psi = wrap(psi);
        let idx = self.profiles.partition_point(|p| p.support.start <= psi);
        let last = self.profiles.last()?;
        let cand = if idx == 0 { last } else { &self.profiles[idx - 1] };
        let d = psi - cand.support.start;
        let d = if d < 0.0 { d + TAU } else { d };
        if d < cand.support.width {
            return Some((cand, d));
        }
        // only the last support can wrap past 2π
        let d = psi + TAU - last.support.start;
        (d < last.support.width).then_some((last, d))
    }

    /// Like `lookup`, but first tries the cell `hint` and updates it.
    #[inline]
    fn lookup_hinted(&self, psi: f64, hint: &mut usize) -> Option<(&BumpProfile, f64)> {
        if let Some(p) = self.profiles.get(*hint) {
            // psi is usually a difference of reduced angles, so a couple of
            // shifts suffice; anything else falls through to the full search
            let mut d = psi - p.support.start;
            d += if d < 0.0 { TAU } else { 0.0 };
            d += if d < 0.0 { TAU } else { 0.0 };
            d -= if d >= TAU { TAU } else { 0.0 };
            if (d >= 0.0) & (d < self.cells[*hint]) {
                return (d < p.support.width).then_some((p, d));
            }
        }
        let psi = wrap(psi);
        let idx = self.profiles.partition_point(|p| p.support.start <= psi);
        *hint = if idx == 0 { self.profiles.len() - 1 } else { idx - 1 };
        self.lookup(psi)
    }

    /// Value at `psi` and whether `psi` is live, using and updating a cell
    /// hint for callers that evaluate nearby points repeatedly.
    #[inline]
    pub fn eval_hinted(&self, psi: f64, hint: &mut usize) -> (f64, bool) {
        match self.lookup_hinted(psi, hint) {
            Some((p, d)) if d > 0.0 => (p.eval_at_offset(d).0, true),
            _ => (0.0, false),
        }
    }

    #[inline]
    pub fn eval(&self, psi: f64) -> f64 {
        self.lookup(psi).map_or(0.0, |(p, d)| p.eval_at_offset(d).0)
    }

    #[inline]
    pub fn deriv(&self, psi: f64) -> f64 {
        self.lookup(psi).map_or(0.0, |(p, d)| p.eval_at_offset(d).1)
    }

    #[inline]
    pub fn eval_with_deriv(&self, psi: f64) -> (f64, f64) {
        self.lookup(psi).map_or((0.0, 0.0), |(p, d)| p.eval_at_offset(d))
    }
}

fn sorted_arcs(mut arcs: Vec<CircleArc>) -> Vec<CircleArc> {
    arcs.sort_by(|a, b| a.start.total_cmp(&b.start));
    arcs
}

/// Default steepness of the smooth gate.
pub const KS_DEFAULT_EPS: f64 = 5e-3;
/// Default phase shift.
pub const KS_DEFAULT_ALPHA: f64 = 1.3;

/// Modulated Kuramoto–Sakaguchi coupling with an approximate dead zone of
/// half-width `b` centered at `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct KuramotoSakaguchi {
    a: f64,
    b: f64,
    eps: f64,
    alpha: f64,
    cos_b: f64,
    dead_zones: DeadZoneSet,
}

impl KuramotoSakaguchi {
    pub fn new(a: f64, b: f64, eps: f64, alpha: f64) -> Result<Self, CouplingError> {
        for v in [a, b, eps, alpha] {
            if !v.is_finite() {
                return Err(CouplingError::NonFinite(v));
            }
        }
        if !(0.0..std::f64::consts::PI).contains(&b) {
            return Err(CouplingError::InvalidParameter(format!(
                "half-width b = {b} must lie in [0, π)"
            )));
        }
        if eps <= 0.0 {
            return Err(CouplingError::InvalidParameter(format!(
                "steepness eps = {eps} must be positive"
            )));
        }
        let dead_zones = if b > 0.0 {
            DeadZoneSet {
                arcs: vec![CircleArc::new(a - b, 2.0 * b)?],
            }
        } else {
            DeadZoneSet::empty()
        };
        Ok(Self {
            a,
            b,
            eps,
            alpha,
            cos_b: b.cos(),
            dead_zones,
        })
    }

    /// Default steepness and phase shift.
    pub fn with_defaults(a: f64, b: f64) -> Result<Self, CouplingError> {
        Self::new(a, b, KS_DEFAULT_EPS, KS_DEFAULT_ALPHA)
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dead_zones(&self) -> &DeadZoneSet {
        &self.dead_zones
    }

    #[inline]
    pub fn eval(&self, psi: f64) -> f64 {
        let u = (self.cos_b - (self.a - psi).cos()) / self.eps;
        let h = 0.5 * (u.tanh() + 1.0);
        -(psi + self.alpha).sin() * h
    }

    #[inline]
    pub fn deriv(&self, psi: f64) -> f64 {
        let u = (self.cos_b - (self.a - psi).cos()) / self.eps;
        let th = u.tanh();
        let h = 0.5 * (th + 1.0);
        let du = -(self.a - psi).sin() / self.eps;
        let dh = 0.5 * (1.0 - th * th) * du;
        let phase = psi + self.alpha;
        -phase.cos() * h - phase.sin() * dh
    }
}

/// A 2π-periodic coupling function with a finite set of dead zones.
#[derive(Debug, Clone, PartialEq)]
pub enum CouplingFunction {
    Piecewise(Piecewise),
    KuramotoSakaguchi(KuramotoSakaguchi),
}

impl CouplingFunction {
    pub fn ks(a: f64, b: f64, eps: f64, alpha: f64) -> Result<Self, CouplingError> {
        KuramotoSakaguchi::new(a, b, eps, alpha).map(Self::KuramotoSakaguchi)
    }

    pub fn piecewise(profiles: Vec<BumpProfile>) -> Result<Self, CouplingError> {
        Piecewise::new(profiles).map(Self::Piecewise)
    }

    /// Piecewise function whose dead zones are exactly `arcs`.
    pub fn with_dead_zones(arcs: Vec<CircleArc>) -> Result<Self, CouplingError> {
        Piecewise::from_dead_zones(arcs).map(Self::Piecewise)
    }

    #[inline]
    pub fn eval(&self, psi: f64) -> f64 {
        match self {
            Self::Piecewise(p) => p.eval(psi),
            Self::KuramotoSakaguchi(k) => k.eval(psi),
        }
    }

    #[inline]
    pub fn deriv(&self, psi: f64) -> f64 {
        match self {
            Self::Piecewise(p) => p.deriv(psi),
            Self::KuramotoSakaguchi(k) => k.deriv(psi),
        }
    }

    /// Value at `psi` and whether `psi` is live. `hint` is a per-caller cache
    /// that speeds up repeated evaluation at slowly varying arguments; any
    /// initial value is valid.
    #[inline]
    pub fn eval_hinted(&self, psi: f64, hint: &mut usize) -> (f64, bool) {
        match self {
            Self::Piecewise(p) => p.eval_hinted(psi, hint),
            Self::KuramotoSakaguchi(k) => (k.eval(psi), !self.in_dead_zone(psi)),
        }
    }

    /// The dead-zone set; for Kuramoto–Sakaguchi functions this is the
    /// approximate dead zone.
    pub fn dead_zones(&self) -> &DeadZoneSet {
        match self {
            Self::Piecewise(p) => p.dead_zones(),
            Self::KuramotoSakaguchi(k) => k.dead_zones(),
        }
    }

    #[inline]
    pub fn in_dead_zone(&self, psi: f64) -> bool {
        match self {
            // for piecewise functions, dead iff outside every open support
            Self::Piecewise(p) => match p.lookup(psi) {
                None => true,
                Some((_, d)) => d == 0.0,
            },
            Self::KuramotoSakaguchi(k) => k.b > 0.0 && circular_distance(psi, k.a) <= k.b,
        }
    }

    pub fn is_dead_zone_symmetric(&self) -> bool {
        self.dead_zones().is_symmetric()
    }

    /// Number of dead zones.
    pub fn dead_zone_count(&self) -> usize {
        self.dead_zones().len()
    }

    /// Number of live zones.
    pub fn live_zone_count(&self) -> usize {
        match self {
            Self::Piecewise(p) => p.profiles.len(),
            Self::KuramotoSakaguchi(_) => 1,
        }
    }

    /// Distance from `psi` to the nearest dead-zone boundary point.
    pub fn distance_to_boundary(&self, psi: f64) -> f64 {
        self.dead_zones().distance_to_boundary(psi)
    }
}

/// One live-zone profile in a coupling-function file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub center: f64,
    pub support_start: f64,
    pub support_width: f64,
    pub value: f64,
    pub slope: f64,
}

/// Serialized form of a coupling function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CouplingSpec {
    Ks {
        a: f64,
        b: f64,
        #[serde(default = "default_eps")]
        eps: f64,
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    Piecewise {
        profiles: Vec<ProfileSpec>,
    },
}

fn default_eps() -> f64 {
    KS_DEFAULT_EPS
}

fn default_alpha() -> f64 {
    KS_DEFAULT_ALPHA
}

impl TryFrom<&CouplingSpec> for CouplingFunction {
    type Error = CouplingError;

    fn try_from(spec: &CouplingSpec) -> Result<Self, Self::Error> {
        match spec {
            CouplingSpec::Ks { a, b, eps, alpha } => Self::ks(*a, *b, *eps, *alpha),
            CouplingSpec::Piecewise { profiles } => {
                let profiles = profiles
                    .iter()
                    .map(|p| {
                        let support = CircleArc::new(p.support_start, p.support_width)?;
                        BumpProfile::new(p.center, support, p.value, p.slope)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Self::piecewise(profiles)
            }
        }
    }
}

impl From<&CouplingFunction> for CouplingSpec {
    fn from(g: &CouplingFunction) -> Self {
        match g {
            CouplingFunction::KuramotoSakaguchi(k) => CouplingSpec::Ks {
                a: k.a,
                b: k.b,
                eps: k.eps,
                alpha: k.alpha,
            },
            CouplingFunction::Piecewise(p) => CouplingSpec::Piecewise {
                profiles: p
                    .profiles
                    .iter()
                    .map(|pr| ProfileSpec {
                        center: pr.center,
                        support_start: pr.support.start,
                        support_width: pr.support.width,
                        value: pr.value,
                        slope: pr.slope,
                    })
                    .collect(),
            },
        }
    }
}

impl Serialize for CouplingFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CouplingSpec::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CouplingFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let spec = CouplingSpec::deserialize(d)?;
        CouplingFunction::try_from(&spec).map_err(serde::de::Error::custom)
    }
}
