//! Networks of identical phase oscillators whose coupling function has dead
//! zones.
//!
//! The dynamics are `θ̇_k = ω + Σ_j A_jk g(θ_j − θ_k)` on the torus `T^N`,
//! where `A` is a structural coupling graph and `g` a 2π-periodic coupling
//! function that vanishes identically on its dead zones. At each state the
//! pairs whose phase difference lies outside the dead zones form the
//! *effective coupling graph*.
//!
//! * [`coupling`]: coupling functions, dead zones and live-zone profiles.
//! * [`graphs`]: directed-graph algebra, symmetry groups, Laplacian spectra.
//! * [`effective`]: effective graphs at phase points and phase-space rasters.
//! * [`realize`]: constructing coupling functions that realize a target graph.
//! * [`dynamics`]: integration, transition events and stability probes.
//! * [`io`]: file formats (CSV, SVG, JSON certificates).

pub mod angle;
pub mod coupling;
pub mod dynamics;
pub mod effective;
pub mod graphs;
pub mod io;
pub mod linalg;
mod par;
pub mod realize;

pub use coupling::{BumpProfile, CircleArc, CouplingFunction, CouplingSpec, DeadZoneSet};
pub use effective::{PhasePoint, StructuralNetwork};
pub use graphs::{DirectedGraph, Permutation};
