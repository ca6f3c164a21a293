//! Browser bindings: rasterize the three-oscillator torus for a
//! Kuramoto–Sakaguchi coupling with a dead zone, trace trajectories on it,
//! and build stable realizations of typed-in graphs.
//!
//! The plain functions are what the bindings call; they are also used by the
//! native tests.

use deadzone::angle::wrap;
use deadzone::dynamics::{integrate_with, IntegrateOptions};
use deadzone::effective::{raster_cir, raster_point};
use deadzone::graphs::{from_graph_number, graph_color};
use deadzone::io::CertificateDoc;
use deadzone::realize::realize_stable;
use deadzone::{CouplingFunction, DirectedGraph, PhasePoint, StructuralNetwork};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest raster the page may ask for.
pub const MAX_RESOLUTION: usize = 600;
/// Step cap for one trajectory, so the page stays responsive.
pub const MAX_STEPS: f64 = 200_000.0;

fn ks_network(a: f64, b: f64, eps: f64, alpha: f64) -> Result<StructuralNetwork, String> {
    let g = CouplingFunction::ks(a, b, eps, alpha).map_err(|e| e.to_string())?;
    Ok(StructuralNetwork::all_to_all(3, 1.0, g))
}

/// Row-major `ν` per cell, `cells[i·R + j]` at `(φ₁, φ₂)` cell `(i, j)`.
pub fn raster_cells(a: f64, b: f64, eps: f64, alpha: f64, resolution: usize) -> Result<Vec<u8>, String> {
    if resolution > MAX_RESOLUTION {
        return Err(format!("resolution {resolution} exceeds {MAX_RESOLUTION}"));
    }
    let net = ks_network(a, b, eps, alpha)?;
    let grid = raster_cir(&net, resolution).map_err(|e| e.to_string())?;
    Ok(grid.cells().to_vec())
}

/// RGB bytes for `ν = 0..63`, three per graph.
pub fn palette_bytes() -> Vec<u8> {
    (0..64u8)
        .flat_map(|nu| {
            let rgb = graph_color(&from_graph_number(nu).expect("below 64")).expect("three vertices");
            rgb.map(|c| (c * 255.0).round() as u8)
        })
        .collect()
}

pub fn graph_literal(nu: u8) -> Result<String, String> {
    from_graph_number(nu).map(|h| h.to_string()).map_err(|e| e.to_string())
}

/// Trajectory from `(0, φ₁, φ₁ + φ₂)` as flat triples `(φ₁, φ₂, ν)`, in
/// raster coordinates, one per stored sample.
pub fn trajectory_points(
    a: f64,
    b: f64,
    eps: f64,
    alpha: f64,
    phi1: f64,
    phi2: f64,
    t_end: f64,
) -> Result<Vec<f64>, String> {
    let net = ks_network(a, b, eps, alpha)?;
    let start = PhasePoint::new(raster_point(phi1, phi2).to_vec()).map_err(|e| e.to_string())?;
    let dt = 0.01f64.max(t_end / MAX_STEPS);
    let opts = IntegrateOptions { dt, stride: 5 };
    let traj = integrate_with(&net, &start, t_end, opts).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(traj.samples.len() * 3);
    for s in &traj.samples {
        let th = s.theta.angles();
        let nu = net.effective_graph_at(th).bits();
        out.extend([wrap(th[1] - th[0]), wrap(th[2] - th[1]), nu as f64]);
    }
    Ok(out)
}

#[derive(Serialize)]
struct StableSummary {
    certificate: CertificateDoc,
    zero_multiplicity: usize,
    discs_in_left_half_plane: bool,
    eigenvalues: Vec<[f64; 2]>,
    stable: bool,
}

/// Stable realization of `target` (a graph literal) inside all-to-all
/// coupling, as pretty JSON: the certificate plus its stability report.
pub fn stable_realization_json(target: &str, seed: u64) -> Result<String, String> {
    let h: DirectedGraph = target.parse().map_err(|e: deadzone::graphs::GraphError| e.to_string())?;
    let k = DirectedGraph::complete(h.n());
    let r = realize_stable(&h, &k, 1.0, seed).map_err(|e| e.to_string())?;
    let summary = StableSummary {
        certificate: CertificateDoc::from(&r),
        zero_multiplicity: r.report.zero_multiplicity,
        discs_in_left_half_plane: r.report.discs_in_left_half_plane,
        eigenvalues: r.report.eigenvalues.iter().map(|z| [z.re, z.im]).collect(),
        stable: r.report.stable,
    };
    Ok(serde_json::to_string_pretty(&summary).expect("summaries serialize"))
}

fn js_err(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen(js_name = rasterCells)]
pub fn raster_cells_js(a: f64, b: f64, eps: f64, alpha: f64, resolution: usize) -> Result<Vec<u8>, JsError> {
    raster_cells(a, b, eps, alpha, resolution).map_err(js_err)
}

#[wasm_bindgen(js_name = palette)]
pub fn palette_js() -> Vec<u8> {
    palette_bytes()
}

#[wasm_bindgen(js_name = graphLiteral)]
pub fn graph_literal_js(nu: u8) -> Result<String, JsError> {
    graph_literal(nu).map_err(js_err)
}

#[wasm_bindgen(js_name = trajectory)]
pub fn trajectory_js(a: f64, b: f64, eps: f64, alpha: f64, phi1: f64, phi2: f64, t_end: f64) -> Result<Vec<f64>, JsError> {
    trajectory_points(a, b, eps, alpha, phi1, phi2, t_end).map_err(js_err)
}

#[wasm_bindgen(js_name = stableRealization)]
pub fn stable_realization_js(target: &str, seed: u32) -> Result<String, JsError> {
    stable_realization_json(target, u64::from(seed)).map_err(js_err)
}
