//! Effective coupling graphs.
//!
//! For a structural graph `A` and coupling function `g`, the effective graph
//! at `θ` keeps the edges `(j, k)` of `A` whose phase difference `θ_j − θ_k`
//! lies outside the dead zones of `g`.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::angle::{wrap, TAU};
use crate::coupling::CouplingFunction;
use crate::graphs::{graph_number, DirectedGraph, GraphError, Permutation};
use crate::par;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EffectiveError {
    #[error("a phase point needs at least 2 oscillators, got {0}")]
    TooFewOscillators(usize),
    #[error("phase {0} is not finite")]
    NonFinite(f64),
    #[error("size mismatch: network has {network} oscillators, point has {point}")]
    SizeMismatch { network: usize, point: usize },
    #[error("point is {distance:e} rad from a region boundary (tolerance {tolerance:e})")]
    NearBoundary { distance: f64, tolerance: f64 },
    #[error("vertex partition is invalid: {0}")]
    BadPartition(String),
    #[error("raster resolution must be at least 2, got {0}")]
    Resolution(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A point on the torus `T^N`, angles reduced to `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    angles: Vec<f64>,
}

impl PhasePoint {
    pub fn new(angles: Vec<f64>) -> Result<Self, EffectiveError> {
        if angles.len() < 2 {
            return Err(EffectiveError::TooFewOscillators(angles.len()));
        }
        if let Some(&bad) = angles.iter().find(|a| !a.is_finite()) {
            return Err(EffectiveError::NonFinite(bad));
        }
        Ok(Self {
            angles: angles.into_iter().map(wrap).collect(),
        })
    }

    /// `(0, 2π/N, …, (N−1)2π/N)`.
    pub fn splay(n: usize) -> Result<Self, EffectiveError> {
        Self::new((0..n).map(|k| k as f64 * TAU / n as f64).collect())
    }

    /// `(φ, …, φ)`.
    pub fn sync(n: usize, phi: f64) -> Result<Self, EffectiveError> {
        Self::new(vec![phi; n])
    }

    pub fn n(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// `θ_j − θ_k` reduced to `[0, 2π)`.
    pub fn difference(&self, j: usize, k: usize) -> f64 {
        wrap(self.angles[j] - self.angles[k])
    }

    /// Image under a vertex permutation: oscillator `k` moves to slot `γ(k)`,
    /// so that the effective graph transforms as `G(γθ) = γG(θ)`.
    pub fn permuted(&self, gamma: &Permutation) -> Self {
        let mut out = vec![0.0; self.n()];
        for (k, &a) in self.angles.iter().enumerate() {
            out[gamma.apply(k)] = a;
        }
        Self { angles: out }
    }

    /// All phases advanced by `c`.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            angles: self.angles.iter().map(|&a| wrap(a + c)).collect(),
        }
    }
}

/// Structural coupling graph, intrinsic frequency and coupling function.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralNetwork {
    pub a: DirectedGraph,
    pub omega: f64,
    pub g: CouplingFunction,
    // edges of `a`, cached for the hot loops
    edges: Vec<(usize, usize)>,
}

impl StructuralNetwork {
    pub fn new(a: DirectedGraph, omega: f64, g: CouplingFunction) -> Self {
        let edges = a.edges().collect();
        Self { a, omega, g, edges }
    }

    /// All-to-all coupling, `A = K_N`.
    pub fn all_to_all(n: usize, omega: f64, g: CouplingFunction) -> Self {
        Self::new(DirectedGraph::complete(n), omega, g)
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn structural_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn check(&self, theta: &[f64]) -> Result<(), EffectiveError> {
        if theta.len() == self.n() {
            Ok(())
        } else {
            Err(EffectiveError::SizeMismatch {
                network: self.n(),
                point: theta.len(),
            })
        }
    }

    /// Effective graph at raw phases (any real values; reduced internally).
    ///
    /// Panics if `theta` has the wrong length.
    #[inline]
    pub fn effective_graph_at(&self, theta: &[f64]) -> DirectedGraph {
        assert_eq!(theta.len(), self.n(), "phase vector has the wrong length");
        let mut h = DirectedGraph::empty(self.n());
        for &(j, k) in &self.edges {
            if !self.g.in_dead_zone(theta[j] - theta[k]) {
                h.insert(j, k);
            }
        }
        h
    }

    /// Vector field `F_k(θ) = ω + Σ_j A_jk g(θ_j − θ_k)`, written into `out`.
    #[inline]
    pub fn vector_field(&self, theta: &[f64], out: &mut [f64]) {
        out.fill(self.omega);
        for &(j, k) in &self.edges {
            out[k] += self.g.eval(theta[j] - theta[k]);
        }
    }

    /// Distance of the closest structural phase difference to a dead-zone
    /// boundary.
    pub fn boundary_distance(&self, theta: &[f64]) -> f64 {
        self.edges
            .iter()
            .map(|&(j, k)| self.g.distance_to_boundary(theta[j] - theta[k]))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `G_{g,A}(θ)`.
pub fn effective_graph(
    net: &StructuralNetwork,
    theta: &PhasePoint,
) -> Result<DirectedGraph, EffectiveError> {
    net.check(theta.angles())?;
    Ok(net.effective_graph_at(theta.angles()))
}

/// Whether `θ ∈ Θ_{g,A}(H)`.
pub fn region_membership(
    net: &StructuralNetwork,
    theta: &PhasePoint,
    h: &DirectedGraph,
) -> Result<bool, EffectiveError> {
    Ok(&effective_graph(net, theta)? == h)
}

/// Directed cycles guaranteed to be contained in the effective graph of the
/// all-to-all network at the splay point.
///
/// If `2nπ/N` is live then `θ_{k+n} − θ_k = 2nπ/N` makes every edge
/// `(k+n, k)` live; with step `s = N − n` these edges form `gcd(s, N)`
/// disjoint cycles `C_{r, r+s, r+2s, …}`.
pub fn predict_splay_cycles(g: &CouplingFunction, n: usize) -> Vec<DirectedGraph> {
    let mut out = Vec::new();
    for m in 1..n {
        if g.in_dead_zone(TAU * m as f64 / n as f64) {
            continue;
        }
        let step = n - m;
        let cycles = gcd(step, n);
        let len = n / cycles;
        for r in 0..cycles {
            let mut c = DirectedGraph::empty(n);
            for i in 0..len {
                let from = (r + i * step) % n;
                c.insert(from, (from + step) % n);
            }
            out.push(c);
        }
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Local structure of the vector field across a vertex cut `{v¹, v²}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkewClass {
    /// Edges only from `v¹` to `v²`: `v¹` evolves autonomously and drives `v²`.
    SkewV1ToV2,
    SkewV2ToV1,
    /// No edges across the cut.
    Product,
    /// Edges in both directions.
    Coupled,
}

impl SkewClass {
    fn from_cut(forward: bool, backward: bool) -> Self {
        match (forward, backward) {
            (false, false) => Self::Product,
            (true, false) => Self::SkewV1ToV2,
            (false, true) => Self::SkewV2ToV1,
            (true, true) => Self::Coupled,
        }
    }
}

/// Minimum distance of a phase difference to a dead-zone boundary for a point
/// to count as interior to its region.
pub const BOUNDARY_TOL: f64 = 1e-6;
/// Central finite-difference step for Jacobians.
pub const JACOBIAN_STEP: f64 = 1e-6;
/// Jacobian entries below this magnitude count as zero.
pub const JACOBIAN_ZERO: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SkewReport {
    /// Classification from the cut-set of the effective graph.
    pub class: SkewClass,
    /// Classification from the sparsity of the finite-difference Jacobian.
    pub jacobian_class: SkewClass,
    /// `jacobian[(k, j)] ≈ ∂F_k/∂θ_j`.
    pub jacobian: DMatrix<f64>,
    /// Largest off-diagonal Jacobian magnitude over edges absent from the
    /// effective graph.
    pub max_absent_entry: f64,
    /// Whether every absent edge has a Jacobian entry below [`JACOBIAN_ZERO`].
    pub consistent: bool,
}

/// Central finite-difference Jacobian `J[(k, j)] = ∂F_k/∂θ_j`.
pub fn jacobian_fd(net: &StructuralNetwork, theta: &[f64], step: f64) -> DMatrix<f64> {
    let n = net.n();
    let mut jac = DMatrix::zeros(n, n);
    let mut x = theta.to_vec();
    let (mut fp, mut fm) = (vec![0.0; n], vec![0.0; n]);
    for j in 0..n {
        let orig = x[j];
        x[j] = orig + step;
        net.vector_field(&x, &mut fp);
        x[j] = orig - step;
        net.vector_field(&x, &mut fm);
        x[j] = orig;
        for k in 0..n {
            jac[(k, j)] = (fp[k] - fm[k]) / (2.0 * step);
        }
    }
    jac
}

/// Classifies the local (skew-)product structure of the vector field at an
/// interior point for the cut `{v1, complement}`.
pub fn skew_product_check(
    net: &StructuralNetwork,
    theta: &PhasePoint,
    v1: &[usize],
) -> Result<SkewReport, EffectiveError> {
    let n = net.n();
    net.check(theta.angles())?;
    let mut in_v1 = vec![false; n];
    for &v in v1 {
        if v >= n || std::mem::replace(&mut in_v1[v], true) {
            return Err(EffectiveError::BadPartition(format!("{v1:?}")));
        }
    }
    if v1.is_empty() || v1.len() == n {
        return Err(EffectiveError::BadPartition("both parts must be nonempty".into()));
    }
    let distance = net.boundary_distance(theta.angles());
    if distance <= BOUNDARY_TOL {
        return Err(EffectiveError::NearBoundary {
            distance,
            tolerance: BOUNDARY_TOL,
        });
    }
    let h = net.effective_graph_at(theta.angles());
    let crosses = |fwd: bool| h.edges().any(|(j, k)| in_v1[j] == fwd && in_v1[k] != fwd);
    let class = SkewClass::from_cut(crosses(true), crosses(false));

    let jacobian = jacobian_fd(net, theta.angles(), JACOBIAN_STEP);
    let mut max_absent = 0.0f64;
    let (mut jac_fwd, mut jac_back) = (false, false);
    for k in 0..n {
        for j in 0..n {
            if j == k {
                continue;
            }
            let v = jacobian[(k, j)].abs();
            if !h.has_edge(j, k) {
                max_absent = max_absent.max(v);
            }
            if v >= JACOBIAN_ZERO && in_v1[j] != in_v1[k] {
                if in_v1[j] {
                    jac_fwd = true;
                } else {
                    jac_back = true;
                }
            }
        }
    }
    Ok(SkewReport {
        class,
        jacobian_class: SkewClass::from_cut(jac_fwd, jac_back),
        jacobian,
        max_absent_entry: max_absent,
        consistent: max_absent < JACOBIAN_ZERO,
    })
}

/// Graph numbers of the effective graph for `N = 3` on a regular grid over
/// the phase-difference torus `(φ₁, φ₂) = (θ₂ − θ₁, θ₃ − θ₂)`, with `θ₁ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterGrid {
    resolution: usize,
    // row i ↔ φ₁ index, column j ↔ φ₂ index
    cells: Vec<u8>,
}

impl RasterGrid {
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Cell-center coordinate along either axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * TAU / self.resolution as f64
    }

    /// `ν` at cell `(i, j)`.
    pub fn cell(&self, i: usize, j: usize) -> u8 {
        self.cells[i * self.resolution + j]
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// Cell containing the point `(φ₁, φ₂)`.
    pub fn locate(&self, phi1: f64, phi2: f64) -> (usize, usize) {
        let idx = |p: f64| ((wrap(p) / TAU * self.resolution as f64) as usize).min(self.resolution - 1);
        (idx(phi1), idx(phi2))
    }

    /// Presence mask over `ν ∈ 0..64`.
    pub fn mask(&self) -> u64 {
        self.cells.iter().fold(0u64, |m, &nu| m | 1 << nu)
    }
}

/// The phase point `(0, φ₁, φ₁ + φ₂)`.
pub fn raster_point(phi1: f64, phi2: f64) -> [f64; 3] {
    [0.0, phi1, phi1 + phi2]
}

/// Rasterizes the partition of the three-oscillator torus by effective graph.
pub fn raster_cir(net: &StructuralNetwork, resolution: usize) -> Result<RasterGrid, EffectiveError> {
    if net.n() != 3 {
        return Err(GraphError::NotThreeVertices(net.n()).into());
    }
    if resolution < 2 {
        return Err(EffectiveError::Resolution(resolution));
    }
    let step = TAU / resolution as f64;
    let rows = par::map_range(resolution, |i| {
        let phi1 = (i as f64 + 0.5) * step;
        (0..resolution)
            .map(|j| {
                let phi2 = (j as f64 + 0.5) * step;
                net.effective_graph_at(&raster_point(phi1, phi2)).bits() as u8
            })
            .collect::<Vec<u8>>()
    });
    Ok(RasterGrid {
        resolution,
        cells: rows.concat(),
    })
}

/// How phase points are sampled when cataloguing realised graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// Regular grid of cell centers over the `N−1` successive phase
    /// differences, `θ₁ = 0`.
    Grid(usize),
    /// Uniform random points on `T^N`.
    Random { count: usize, seed: u64 },
}

/// Distinct effective graphs found over a sample of phase points.
pub fn catalog_realised(net: &StructuralNetwork, sampler: Sampler) -> BTreeSet<DirectedGraph> {
    let n = net.n();
    let chunks: Vec<BTreeSet<DirectedGraph>> = match sampler {
        Sampler::Grid(res) => {
            let res = res.max(1);
            let step = TAU / res as f64;
            let inner = res.pow((n - 2) as u32);
            par::map_range(res, |first| {
                let mut found = BTreeSet::new();
                let mut theta = vec![0.0; n];
                for rest in 0..inner {
                    let mut idx = rest;
                    theta[1] = (first as f64 + 0.5) * step;
                    for slot in 2..n {
                        let d = idx % res;
                        idx /= res;
                        theta[slot] = theta[slot - 1] + (d as f64 + 0.5) * step;
                    }
                    found.insert(net.effective_graph_at(&theta));
                }
                found
            })
        }
        Sampler::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let points: Vec<Vec<f64>> = (0..count)
                .map(|_| (0..n).map(|_| rng.gen_range(0.0..TAU)).collect())
                .collect();
            vec![points.iter().map(|p| net.effective_graph_at(p)).collect()]
        }
    };
    chunks.into_iter().flatten().collect()
}

/// Presence mask over `ν` of a catalogue of three-vertex graphs.
pub fn catalog_mask(catalog: &BTreeSet<DirectedGraph>) -> Result<u64, GraphError> {
    catalog
        .iter()
        .try_fold(0u64, |m, h| Ok(m | 1 << graph_number(h)?))
}
