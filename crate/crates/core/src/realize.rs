//! Constructing coupling functions that realize a prescribed effective graph.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::angle::{min_separation, wrap, TAU};
use crate::coupling::{BumpProfile, CouplingError, CouplingFunction};
use crate::effective::{PhasePoint, StructuralNetwork};
use crate::graphs::{has_spanning_diverging_tree, DirectedGraph, GraphError};
use crate::linalg::{self, Disc};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealizeError {
    #[error("phase differences are not distinct enough (minimum separation {0:e} rad)")]
    NotGeneric(f64),
    #[error("could not place {0} graphs with distinct phase differences")]
    Capacity(usize),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(
        "target graph {0} has no spanning diverging tree, which stable realization requires"
    )]
    NoSpanningTree(DirectedGraph),
    #[error("target graph {target} is not a subgraph of the structural graph {structural}")]
    NotContained {
        target: DirectedGraph,
        structural: DirectedGraph,
    },
    #[error("size mismatch: {0} vs {1} oscillators")]
    SizeMismatch(usize, usize),
    #[error("construction failed verification: expected {expected}, found {found}")]
    Verification {
        expected: DirectedGraph,
        found: DirectedGraph,
    },
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Differences closer than this are treated as coincident.
pub const GENERIC_MIN_SEP: f64 = 1e-9;
/// Upper bound on live-zone widths around realized differences.
pub const MAX_LIVE_WIDTH: f64 = 0.1;

/// A coupling function and a point at which the effective graph is `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationCertificate {
    pub g: CouplingFunction,
    pub theta: PhasePoint,
    pub target: DirectedGraph,
    pub structural: DirectedGraph,
    pub dead_zone_count: usize,
}

impl RealizationCertificate {
    /// Checks the effective graph at `theta` and fills in the dead-zone count.
    pub fn verified(
        g: CouplingFunction,
        theta: PhasePoint,
        target: DirectedGraph,
        structural: DirectedGraph,
    ) -> Result<Self, RealizeError> {
        let net = StructuralNetwork::new(structural.clone(), 0.0, g.clone());
        let found = net.effective_graph_at(theta.angles());
        if found != target {
            return Err(RealizeError::Verification {
                expected: target,
                found,
            });
        }
        Ok(Self {
            dead_zone_count: g.dead_zone_count(),
            g,
            theta,
            target,
            structural,
        })
    }

    /// Re-runs the effective-graph check.
    pub fn verify(&self) -> bool {
        let net = StructuralNetwork::new(self.structural.clone(), 0.0, self.g.clone());
        net.effective_graph_at(self.theta.angles()) == self.target
    }
}

/// Ordered phase differences `θ_j − θ_k`, `j ≠ k`, in `[0, 2π)`.
pub fn ordered_differences(theta: &[f64]) -> Vec<f64> {
    let n = theta.len();
    let mut out = Vec::with_capacity(n * (n - 1));
    for j in 0..n {
        for k in 0..n {
            if j != k {
                out.push(wrap(theta[j] - theta[k]));
            }
        }
    }
    out
}

fn live_profiles(centers: &[f64], width: f64) -> Result<Vec<BumpProfile>, RealizeError> {
    Ok(centers
        .iter()
        .map(|&c| BumpProfile::centered(c, width, 0.0, 1.0))
        .collect::<Result<_, _>>()?)
}

/// Midpoint of the widest gap between the given angles.
fn largest_gap_midpoint(angles: &[f64]) -> f64 {
    let mut sorted: Vec<f64> = angles.iter().map(|&a| wrap(a)).collect();
    if sorted.is_empty() {
        return PI;
    }
    sorted.sort_by(f64::total_cmp);
    let last = *sorted.last().unwrap();
    let (mut best_gap, mut best_mid) = (sorted[0] + TAU - last, last + 0.5 * (sorted[0] + TAU - last));
    for w in sorted.windows(2) {
        if w[1] - w[0] > best_gap {
            best_gap = w[1] - w[0];
            best_mid = 0.5 * (w[0] + w[1]);
        }
    }
    wrap(best_mid)
}

/// Live zones at the differences along `target`'s edges (or one live zone
/// in the widest gap if `target` is empty), each of width `width` with value
/// 0 and slope 1 at its center.
fn build_on_differences(
    points: &[(&[f64], &DirectedGraph)],
    width: f64,
) -> Result<CouplingFunction, RealizeError> {
    let mut centers = Vec::new();
    for (theta, h) in points {
        for (j, k) in h.edges() {
            centers.push(wrap(theta[j] - theta[k]));
        }
    }
    if centers.is_empty() {
        let all: Vec<f64> = points.iter().flat_map(|(t, _)| ordered_differences(t)).collect();
        centers.push(largest_gap_midpoint(&all));
    }
    Ok(CouplingFunction::piecewise(live_profiles(&centers, width)?)?)
}

/// Realizes `target` at a generic point `theta` with `A = K_N`: one live zone
/// of width `min(s/2, 0.1)` centered at each edge difference, where `s` is
/// the minimum separation of the ordered differences.
pub fn realize_generic(
    target: &DirectedGraph,
    theta: &PhasePoint,
) -> Result<RealizationCertificate, RealizeError> {
    let n = target.n();
    if theta.n() != n {
        return Err(RealizeError::SizeMismatch(n, theta.n()));
    }
    let s = min_separation(&ordered_differences(theta.angles()));
    if s < GENERIC_MIN_SEP {
        return Err(RealizeError::NotGeneric(s));
    }
    let width = (0.5 * s).min(MAX_LIVE_WIDTH);
    let g = build_on_differences(&[(theta.angles(), target)], width)?;
    RealizationCertificate::verified(g, theta.clone(), target.clone(), DirectedGraph::complete(n))
}

/// One coupling function realizing several graphs at different points.
#[derive(Debug, Clone, PartialEq)]
pub struct SharedRealization {
    pub g: CouplingFunction,
    pub certificates: Vec<RealizationCertificate>,
}

/// Minimum separation required between the differences of all points in
/// [`realize_all_one_g`].
pub const SHARED_MIN_SEP: f64 = 1e-6;
const SHARED_MAX_TRIES: usize = 100_000;

/// Additive-recurrence (Kronecker) sequence with the generalized golden
/// ratio of dimension `d`.
struct Kronecker {
    alpha: Vec<f64>,
    index: u64,
}

impl Kronecker {
    fn new(d: usize) -> Self {
        // unique positive root of x^(d+1) = x + 1
        let mut phi = 2.0f64;
        for _ in 0..64 {
            phi = (1.0 + phi).powf(1.0 / (d as f64 + 1.0));
        }
        let alpha = (1..=d).map(|i| phi.powi(-(i as i32))).collect();
        Self { alpha, index: 0 }
    }

    fn next_point(&mut self) -> Vec<f64> {
        self.index += 1;
        let n = self.index as f64;
        self.alpha.iter().map(|a| (0.5 + n * a).fract() * TAU).collect()
    }
}

/// Realizes every listed graph with a single coupling function. Points come
/// from a low-discrepancy sequence; a candidate is skipped if any of its
/// differences lands within [`SHARED_MIN_SEP`] of a difference already used.
pub fn realize_all_one_g(targets: &[DirectedGraph]) -> Result<SharedRealization, RealizeError> {
    let Some(first) = targets.first() else {
        return Err(RealizeError::Parameter("the list of graphs is empty".into()));
    };
    let n = first.n();
    if let Some(h) = targets.iter().find(|h| h.n() != n) {
        return Err(RealizeError::SizeMismatch(n, h.n()));
    }
    let mut seq = Kronecker::new(n);
    let mut used: Vec<f64> = Vec::new();
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(targets.len());
    let mut tries = 0;
    while points.len() < targets.len() {
        tries += 1;
        if tries > SHARED_MAX_TRIES {
            return Err(RealizeError::Capacity(targets.len()));
        }
        let cand = seq.next_point();
        let diffs = ordered_differences(&cand);
        let mut all = used.clone();
        all.extend_from_slice(&diffs);
        if min_separation(&all) >= SHARED_MIN_SEP {
            used = all;
            points.push(cand);
        }
    }
    let s = min_separation(&used);
    let width = (0.5 * s).min(MAX_LIVE_WIDTH);
    let pairs: Vec<(&[f64], &DirectedGraph)> = points.iter().map(|p| p.as_slice()).zip(targets).collect();
    let g = build_on_differences(&pairs, width)?;
    let certificates = points
        .into_iter()
        .zip(targets)
        .map(|(p, h)| {
            RealizationCertificate::verified(
                g.clone(),
                PhasePoint::new(p).expect("finite point"),
                h.clone(),
                DirectedGraph::complete(n),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SharedRealization { g, certificates })
}

/// The point `θ_i = (2^{i−1} − 1)·a`, whose successive gaps are `a, 2a, 4a, …`.
pub fn geometric_point(n: usize, a: f64) -> Vec<f64> {
    (0..n).map(|i| ((1u64 << i) - 1) as f64 * a).collect()
}

/// Realizes `target` with live zones of width exactly `delta`, at the
/// geometric point with base gap `a`. Needs `0 < a < π/2^{N−1}` and
/// `0 < δ < a`.
pub fn realize_delta(
    target: &DirectedGraph,
    a: f64,
    delta: f64,
) -> Result<RealizationCertificate, RealizeError> {
    let n = target.n();
    if n < 2 || n > 40 {
        return Err(RealizeError::Parameter(format!("unsupported size N = {n}")));
    }
    let bound = PI / (1u64 << (n - 1)) as f64;
    if !(a > 0.0 && a < bound) {
        return Err(RealizeError::Parameter(format!(
            "need 0 < a < pi/2^(N-1) = {bound}, got a = {a}"
        )));
    }
    if !(delta > 0.0 && delta < a) {
        return Err(RealizeError::Parameter(format!(
            "need 0 < delta < a = {a}, got delta = {delta}"
        )));
    }
    let theta = geometric_point(n, a);
    let mut centers: Vec<f64> = target.edges().map(|(j, k)| wrap(theta[j] - theta[k])).collect();
    if centers.is_empty() {
        // every difference lies within π − a of 0
        centers.push(PI);
    }
    let g = CouplingFunction::piecewise(live_profiles(&centers, delta)?)?;
    RealizationCertificate::verified(
        g,
        PhasePoint::new(theta).expect("finite point"),
        target.clone(),
        DirectedGraph::complete(n),
    )
}

/// A rigidly rotating solution `Ωt·1 + θ°`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeEquilibrium {
    pub theta: PhasePoint,
    pub omega: f64,
}

/// Largest allowed spread of the vector-field components at a relative
/// equilibrium.
pub const EQUILIBRIUM_TOL: f64 = 1e-10;
/// Eigenvalues other than the zero eigenvalue must have real part below
/// minus this.
pub const SPECTRAL_MARGIN: f64 = 1e-9;

/// Linear stability of a relative equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// `T_jk = A_jk H_jk g'(θ_j − θ_k)` off the diagonal, columns summing to 0.
    pub t_matrix: DMatrix<f64>,
    pub discs: Vec<Disc>,
    /// Every column disc lies in the closed left half-plane.
    pub discs_in_left_half_plane: bool,
    /// Multiplicity of 0 as a root of the characteristic polynomial of `−T`.
    pub zero_multiplicity: usize,
    /// Eigenvalues of `T`, from the Schur decomposition.
    pub eigenvalues: Vec<Complex<f64>>,
    /// Largest real part among all eigenvalues but the one closest to 0.
    pub max_other_re: f64,
    pub stable: bool,
}

impl StabilityReport {
    pub fn new(t_matrix: DMatrix<f64>) -> Self {
        let discs = linalg::column_gershgorin_discs(&t_matrix);
        let discs_in_left_half_plane = discs.iter().all(|d| d.center + d.radius <= 1e-12);
        let zero_multiplicity = linalg::zero_root_multiplicity(&linalg::characteristic_polynomial(&-&t_matrix));
        let mut eigenvalues = linalg::eigenvalues(&t_matrix);
        eigenvalues.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        let max_other_re = eigenvalues
            .iter()
            .skip(1)
            .map(|l| l.re)
            .fold(f64::NEG_INFINITY, f64::max);
        let stable = discs_in_left_half_plane && zero_multiplicity == 1 && max_other_re < -SPECTRAL_MARGIN;
        Self {
            t_matrix,
            discs,
            discs_in_left_half_plane,
            zero_multiplicity,
            eigenvalues,
            max_other_re,
            stable,
        }
    }
}

/// Output of [`realize_stable`].
#[derive(Debug, Clone, PartialEq)]
pub struct StableRealization {
    pub certificate: RealizationCertificate,
    pub equilibrium: RelativeEquilibrium,
    pub report: StabilityReport,
    pub omega: f64,
}

impl StableRealization {
    pub fn network(&self) -> StructuralNetwork {
        StructuralNetwork::new(self.certificate.structural.clone(), self.omega, self.certificate.g.clone())
    }
}

const SEARCH_RESTARTS: usize = 12;
const SEARCH_ITERS: usize = 1500;

/// A seeded point whose ordered phase differences are well separated,
/// found by random restarts and hill climbing on the minimum separation.
pub fn separated_point(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // no arrangement of N(N−1) differences beats equal spacing
    let ceiling = TAU / (n * (n - 1) + 1) as f64;
    let mut best = vec![0.0; n];
    let mut best_s = -1.0;
    for _ in 0..SEARCH_RESTARTS {
        let mut x: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { rng.gen_range(0.0..TAU) }).collect();
        let mut s = min_separation(&ordered_differences(&x));
        let mut step = 0.5;
        for it in 0..SEARCH_ITERS {
            let i = rng.gen_range(1..n);
            let old = x[i];
            x[i] = wrap(old + rng.gen_range(-step..step));
            let s_new = min_separation(&ordered_differences(&x));
            if s_new >= s {
                s = s_new;
            } else {
                x[i] = old;
            }
            if it % 100 == 99 {
                step *= 0.7;
            }
        }
        if s > best_s {
            best_s = s;
            best = x;
        }
        if best_s >= 0.75 * ceiling {
            break;
        }
    }
    best
}

/// Smallest difference separation accepted by [`realize_stable`].
pub const STABLE_MIN_SEP: f64 = 1e-3;

/// Realizes `target` inside the structural graph `a` at a linearly stable
/// relative equilibrium.
///
/// Every live-zone center carries value 0 and slope 1, so the incoming sums
/// all vanish, the collective frequency equals `omega`, and the linearization
/// is minus the Laplacian of `target`.
pub fn realize_stable(
    target: &DirectedGraph,
    a: &DirectedGraph,
    omega: f64,
    seed: u64,
) -> Result<StableRealization, RealizeError> {
    let n = target.n();
    if a.n() != n {
        return Err(RealizeError::SizeMismatch(n, a.n()));
    }
    if !target.is_subgraph_of(a) {
        return Err(RealizeError::NotContained {
            target: target.clone(),
            structural: a.clone(),
        });
    }
    if !has_spanning_diverging_tree(target) {
        return Err(RealizeError::NoSpanningTree(target.clone()));
    }
    if !omega.is_finite() {
        return Err(RealizeError::Parameter(format!("omega must be finite, got {omega}")));
    }
    let theta = separated_point(n, seed);
    let s = min_separation(&ordered_differences(&theta));
    if s < STABLE_MIN_SEP {
        return Err(RealizeError::NotGeneric(s));
    }
    let width = (0.5 * s).min(MAX_LIVE_WIDTH);
    let g = build_on_differences(&[(&theta, target)], width)?;
    let theta = PhasePoint::new(theta).expect("finite point");
    let certificate = RealizationCertificate::verified(g.clone(), theta.clone(), target.clone(), a.clone())?;

    let net = StructuralNetwork::new(a.clone(), omega, g.clone());
    let mut f = vec![0.0; n];
    net.vector_field(theta.angles(), &mut f);
    let big_omega = f.iter().sum::<f64>() / n as f64;
    debug_assert!(f.iter().all(|v| (v - big_omega).abs() < EQUILIBRIUM_TOL));

    let th = theta.angles();
    let mut t = DMatrix::zeros(n, n);
    for (j, k) in target.edges() {
        t[(j, k)] = g.deriv(th[j] - th[k]);
    }
    for k in 0..n {
        let col: f64 = (0..n).filter(|&j| j != k).map(|j| t[(j, k)]).sum();
        t[(k, k)] = -col;
    }
    Ok(StableRealization {
        certificate,
        equilibrium: RelativeEquilibrium {
            theta,
            omega: big_omega,
        },
        report: StabilityReport::new(t),
        omega,
    })
}
