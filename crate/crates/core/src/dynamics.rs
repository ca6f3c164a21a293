//! Integration of the oscillator equations, effective-graph transition
//! events and numerical stability probes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::angle::{wrap, wrap_signed, TAU};
use crate::effective::{PhasePoint, StructuralNetwork};
use crate::graphs::DirectedGraph;
use crate::par;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("time step must be positive and finite, got {0}")]
    TimeStep(f64),
    #[error("end time must be positive and finite, got {0}")]
    EndTime(f64),
    #[error("sample stride must be at least 1")]
    Stride,
    #[error("initial point has {point} phases but the network has {network} oscillators")]
    SizeMismatch { network: usize, point: usize },
}

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_STRIDE: usize = 10;
/// Event times are localized to within `dt` times this factor.
pub const EVENT_REL_TOL: f64 = 1e-6;
// more graph changes than this inside one step are not resolved further
const MAX_EVENTS_PER_STEP: usize = 64;

/// `F(θ)`, componentwise `ω + Σ_j A_jk g(θ_j − θ_k)`.
pub fn eval_field(net: &StructuralNetwork, theta: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; net.n()];
    net.vector_field(theta, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub theta: PhasePoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub t: f64,
    pub before: DirectedGraph,
    pub after: DirectedGraph,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationParams {
    pub net: StructuralNetwork,
    pub theta0: PhasePoint,
    pub t_end: f64,
    pub dt: f64,
    pub stride: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub events: Vec<Event>,
    /// Effective graph at the initial point.
    pub initial_graph: DirectedGraph,
    pub params: IntegrationParams,
}

impl Trajectory {
    pub fn final_state(&self) -> &PhasePoint {
        &self.samples.last().expect("trajectories have samples").theta
    }

    pub fn final_graph(&self) -> &DirectedGraph {
        self.events.last().map_or(&self.initial_graph, |e| &e.after)
    }
}

/// Evaluates the vector field together with the live/dead state of every
/// structural edge, caching profile lookups per edge.
struct Field<'a> {
    net: &'a StructuralNetwork,
    hints: Vec<usize>,
}

impl<'a> Field<'a> {
    fn new(net: &'a StructuralNetwork) -> Self {
        Self {
            net,
            hints: vec![0; net.structural_edges().len()],
        }
    }

    fn words(&self) -> usize {
        self.hints.len().div_ceil(64).max(1)
    }

    #[inline]
    fn eval(&mut self, theta: &[f64], out: &mut [f64], mut live: Option<&mut [u64]>) {
        out.fill(self.net.omega);
        if let Some(l) = live.as_deref_mut() {
            l.fill(0);
        }
        for (i, (&(j, k), hint)) in self.net.structural_edges().iter().zip(&mut self.hints).enumerate() {
            let (v, is_live) = self.net.g.eval_hinted(theta[j] - theta[k], hint);
            out[k] += v;
            if is_live {
                if let Some(l) = live.as_deref_mut() {
                    l[i / 64] |= 1 << (i % 64);
                }
            }
        }
    }

    fn live_mask(&mut self, theta: &[f64]) -> Vec<u64> {
        let mut mask = vec![0; self.words()];
        let mut scratch = vec![0.0; theta.len()];
        self.eval(theta, &mut scratch, Some(&mut mask));
        mask
    }

    fn graph(&self, mask: &[u64]) -> DirectedGraph {
        let mut h = DirectedGraph::empty(self.net.n());
        for (i, &(j, k)) in self.net.structural_edges().iter().enumerate() {
            if mask[i / 64] >> (i % 64) & 1 == 1 {
                h.insert(j, k);
            }
        }
        h
    }
}

/// Reduces to `[0, 2π)` a value that is usually already in range or just
/// outside it.
#[inline]
fn rewrap(x: f64) -> f64 {
    if (0.0..TAU).contains(&x) {
        x
    } else {
        wrap(x)
    }
}

/// Scratch buffers for one classical Runge–Kutta step.
struct Rk4 {
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4 {
    fn new(n: usize) -> Self {
        Self {
            k2: vec![0.0; n],
            k3: vec![0.0; n],
            k4: vec![0.0; n],
            tmp: vec![0.0; n],
        }
    }

    /// Advances `x` to `out` by step `h`, given `k1 = F(x)`.
    fn step(&mut self, field: &mut Field, x: &[f64], k1: &[f64], h: f64, out: &mut [f64]) {
        let n = x.len();
        for i in 0..n {
            self.tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        field.eval(&self.tmp, &mut self.k2, None);
        for i in 0..n {
            self.tmp[i] = x[i] + 0.5 * h * self.k2[i];
        }
        field.eval(&self.tmp, &mut self.k3, None);
        for i in 0..n {
            self.tmp[i] = x[i] + h * self.k3[i];
        }
        field.eval(&self.tmp, &mut self.k4, None);
        for i in 0..n {
            out[i] = rewrap(x[i] + h / 6.0 * (k1[i] + 2.0 * (self.k2[i] + self.k3[i]) + self.k4[i]));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub dt: f64,
    /// Store every `stride`-th step (the initial and final states are always
    /// stored).
    pub stride: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DT,
            stride: DEFAULT_STRIDE,
        }
    }
}

/// Integrates from `θ₀` to `t_end` with fixed step `dt`, default stride.
pub fn integrate(
    net: &StructuralNetwork,
    theta0: &PhasePoint,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory, DynamicsError> {
    integrate_with(net, theta0, t_end, IntegrateOptions { dt, ..Default::default() })
}

/// Classical RK4 on the torus. After every step the effective graph is
/// compared with the previous one, and each change is localized by bisection
/// on the step interval.
pub fn integrate_with(
    net: &StructuralNetwork,
    theta0: &PhasePoint,
    t_end: f64,
    opts: IntegrateOptions,
) -> Result<Trajectory, DynamicsError> {
    let IntegrateOptions { dt, stride } = opts;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(DynamicsError::TimeStep(dt));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(DynamicsError::EndTime(t_end));
    }
    if stride == 0 {
        return Err(DynamicsError::Stride);
    }
    let n = net.n();
    if theta0.n() != n {
        return Err(DynamicsError::SizeMismatch {
            network: n,
            point: theta0.n(),
        });
    }

    let steps = ((t_end / dt) - 1e-9).ceil().max(1.0) as usize;
    let mut field = Field::new(net);
    let mut rk = Rk4::new(n);
    let words = field.words();

    let mut x = theta0.angles().to_vec();
    let mut next = vec![0.0; n];
    let mut k1 = vec![0.0; n];
    let mut mask = vec![0u64; words];
    let mut next_mask = vec![0u64; words];
    field.eval(&x, &mut k1, Some(&mut mask));
    let initial_graph = field.graph(&mask);

    let mut samples = vec![Sample {
        t: 0.0,
        theta: theta0.clone(),
    }];
    let mut events = Vec::new();
    let mut next_k1 = vec![0.0; n];

    for step in 0..steps {
        let t0 = step as f64 * dt;
        let h = if step + 1 == steps { t_end - t0 } else { dt };
        rk.step(&mut field, &x, &k1, h, &mut next);
        field.eval(&next, &mut next_k1, Some(&mut next_mask));
        if next_mask != mask {
            localize_events(&mut field, &mut rk, &x, &k1, h, t0, dt, &mask, &next_mask, &mut events);
        }
        std::mem::swap(&mut x, &mut next);
        std::mem::swap(&mut k1, &mut next_k1);
        std::mem::swap(&mut mask, &mut next_mask);
        if (step + 1) % stride == 0 || step + 1 == steps {
            samples.push(Sample {
                t: if step + 1 == steps { t_end } else { (step + 1) as f64 * dt },
                theta: PhasePoint::new(x.clone()).expect("finite state"),
            });
        }
    }

    Ok(Trajectory {
        samples,
        events,
        initial_graph,
        params: IntegrationParams {
            net: net.clone(),
            theta0: theta0.clone(),
            t_end,
            dt,
            stride,
        },
    })
}

/// Records the graph changes between `x` (graph `mask`) and the RK4 step of
/// length `h` (graph `end_mask`). Sub-steps are taken from `x`, so every
/// intermediate state lies on the same polynomial interpolant.
#[allow(clippy::too_many_arguments)]
fn localize_events(
    field: &mut Field,
    rk: &mut Rk4,
    x: &[f64],
    k1: &[f64],
    h: f64,
    t0: f64,
    dt: f64,
    mask: &[u64],
    end_mask: &[u64],
    events: &mut Vec<Event>,
) {
    let tol = dt * EVENT_REL_TOL;
    let mut y = vec![0.0; x.len()];
    let mut lo = 0.0;
    let mut cur = mask.to_vec();
    for _ in 0..MAX_EVENTS_PER_STEP {
        let mut hi = h;
        let mut hi_mask = end_mask.to_vec();
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            rk.step(field, x, k1, mid, &mut y);
            let m = field.live_mask(&y);
            if m == cur {
                lo = mid;
            } else {
                hi = mid;
                hi_mask = m;
            }
        }
        events.push(Event {
            t: t0 + hi,
            before: field.graph(&cur),
            after: field.graph(&hi_mask),
        });
        if hi_mask == end_mask {
            return;
        }
        cur = hi_mask;
        lo = hi;
    }
    // unresolved: jump straight to the end-of-step graph
    events.push(Event {
        t: t0 + h,
        before: field.graph(&cur),
        after: field.graph(end_mask),
    });
}

/// `(θ₂ − θ₁, …, θ_N − θ₁)` mod 2π at every sample.
pub fn phase_differences(traj: &Trajectory) -> Vec<(f64, Vec<f64>)> {
    traj.samples
        .iter()
        .map(|s| {
            let a = s.theta.angles();
            (s.t, a[1..].iter().map(|&x| wrap(x - a[0])).collect())
        })
        .collect()
}

/// Run-length encoded sequence of effective graphs with their dwell times.
pub fn graph_itinerary(traj: &Trajectory) -> Vec<(DirectedGraph, f64)> {
    let mut out = Vec::with_capacity(traj.events.len() + 1);
    let mut current = traj.initial_graph.clone();
    let mut since = 0.0;
    for e in &traj.events {
        out.push((current, e.t - since));
        current = e.after.clone();
        since = e.t;
    }
    out.push((current, traj.params.t_end - since));
    out
}

/// Parameters of a basin-sampling stability probe.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub center: PhasePoint,
    /// Half-width of the ∞-ball that initial conditions are drawn from.
    pub radius: f64,
    pub count: usize,
    pub seed: u64,
    pub t_end: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRun {
    pub start: PhasePoint,
    pub terminal_graph: DirectedGraph,
    pub last_event: Option<f64>,
    /// Largest rate of change of any phase difference over the final tenth
    /// of the run.
    pub drift_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub runs: Vec<ProbeRun>,
    pub stably_realised: bool,
}

/// Drift rates at or above this count as not settled.
pub const DRIFT_TOL: f64 = 1e-8;

/// Integrates `count` seeded starts from the ∞-ball of radius `radius`
/// around the probe center and checks that all of them settle in the region
/// of `h`: terminal graph `h`, last event before `t_end / 2`, and drift rate
/// below [`DRIFT_TOL`].
pub fn test_stable_realization(
    net: &StructuralNetwork,
    h: &DirectedGraph,
    probe: &Probe,
) -> Result<ProbeReport, DynamicsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(probe.seed);
    let starts: Vec<PhasePoint> = (0..probe.count)
        .map(|_| {
            let theta = probe
                .center
                .angles()
                .iter()
                .map(|&c| c + rng.gen_range(-probe.radius..=probe.radius))
                .collect();
            PhasePoint::new(theta).expect("finite start")
        })
        .collect();
    let steps = (probe.t_end / probe.dt).ceil().max(1.0) as usize;
    let opts = IntegrateOptions {
        dt: probe.dt,
        stride: (steps / 10).max(1),
    };
    let runs = par::map_range(starts.len(), |i| -> Result<ProbeRun, DynamicsError> {
        let traj = integrate_with(net, &starts[i], probe.t_end, opts)?;
        Ok(ProbeRun {
            start: starts[i].clone(),
            terminal_graph: traj.final_graph().clone(),
            last_event: traj.events.last().map(|e| e.t),
            drift_rate: terminal_drift(&traj),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let stably_realised = runs.iter().all(|r| {
        &r.terminal_graph == h
            && r.last_event.map_or(true, |t| t < 0.5 * probe.t_end)
            && r.drift_rate < DRIFT_TOL
    });
    Ok(ProbeReport {
        runs,
        stably_realised,
    })
}

/// Largest rate of change of a phase difference between the last sample and
/// the sample closest to 90% of the run.
pub fn terminal_drift(traj: &Trajectory) -> f64 {
    let last = traj.samples.last().expect("trajectories have samples");
    let target = 0.9 * last.t;
    let earlier = traj
        .samples
        .iter()
        .min_by(|a, b| (a.t - target).abs().total_cmp(&(b.t - target).abs()))
        .expect("trajectories have samples");
    let span = last.t - earlier.t;
    if span <= 0.0 {
        return 0.0;
    }
    let (a, b) = (earlier.theta.angles(), last.theta.angles());
    (1..a.len())
        .map(|i| wrap_signed((b[i] - b[0]) - (a[i] - a[0])).abs() / span)
        .fold(0.0, f64::max)
}
