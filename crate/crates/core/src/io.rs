//! File formats: CSV tables, SVG renderings and JSON certificates.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::{wrap, TAU};
use crate::coupling::{CouplingError, CouplingFunction, CouplingSpec};
use crate::dynamics::Trajectory;
use crate::effective::{EffectiveError, PhasePoint, RasterGrid};
use crate::graphs::{from_graph_number, graph_color_hex, graph_number, DirectedGraph, GraphError};
use crate::realize::{RealizationCertificate, StableRealization};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed certificate: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Effective(#[from] EffectiveError),
    #[error("certificate does not verify: effective graph differs from {0}")]
    Unverified(DirectedGraph),
}

/// `i,j,phi1,phi2,nu`, one row per raster cell.
pub fn raster_csv(grid: &RasterGrid) -> String {
    let r = grid.resolution();
    let mut out = String::with_capacity(r * r * 32);
    out.push_str("i,j,phi1,phi2,nu\n");
    for i in 0..r {
        for j in 0..r {
            let _ = writeln!(
                out,
                "{i},{j},{},{},{}",
                grid.coordinate(i),
                grid.coordinate(j),
                grid.cell(i, j)
            );
        }
    }
    out
}

fn nu_color(nu: u8) -> String {
    graph_color_hex(&from_graph_number(nu).expect("nu below 64")).expect("three vertices")
}

const SVG_SIZE: f64 = 600.0;

// φ₁ along x, φ₂ upwards along y
fn to_svg(phi1: f64, phi2: f64) -> (f64, f64) {
    (phi1 / TAU * SVG_SIZE, (1.0 - phi2 / TAU) * SVG_SIZE)
}

/// Renders a raster as SVG: one rectangle per horizontal run of equal cells,
/// solid lines where a phase difference is 0, dashed lines where it is π,
/// `●` at the synchronous point and `○` at the two splay points. Optional
/// trajectories are drawn as polylines in the same coordinates.
pub fn raster_svg(grid: &RasterGrid, trajectories: &[&Trajectory]) -> String {
    let r = grid.resolution();
    let cell = SVG_SIZE / r as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}" shape-rendering="crispEdges">"#,
        s = SVG_SIZE
    );
    for j in 0..r {
        let y = (r - 1 - j) as f64 * cell;
        let mut i = 0;
        while i < r {
            let nu = grid.cell(i, j);
            let start = i;
            while i < r && grid.cell(i, j) == nu {
                i += 1;
            }
            let _ = writeln!(
                out,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                start as f64 * cell,
                y,
                (i - start) as f64 * cell,
                cell,
                nu_color(nu)
            );
        }
    }
    let line = |out: &mut String, a: (f64, f64), b: (f64, f64), dashed: bool| {
        let (x1, y1) = to_svg(a.0, a.1);
        let (x2, y2) = to_svg(b.0, b.1);
        let dash = if dashed { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(
            out,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="black" stroke-width="1.5"{dash}/>"#
        );
    };
    // θ₂ − θ₁ = 0, θ₃ − θ₂ = 0 lie on the frame; θ₃ − θ₁ = 0 is the anti-diagonal
    line(&mut out, (0.0, 0.0), (TAU, 0.0), false);
    line(&mut out, (0.0, 0.0), (0.0, TAU), false);
    line(&mut out, (0.0, TAU), (TAU, 0.0), false);
    line(&mut out, (PI, 0.0), (PI, TAU), true);
    line(&mut out, (0.0, PI), (TAU, PI), true);
    line(&mut out, (0.0, PI), (PI, 0.0), true);
    line(&mut out, (PI, TAU), (TAU, PI), true);

    for traj in trajectories {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        let flush = |out: &mut String, pts: &mut Vec<(f64, f64)>| {
            if pts.len() > 1 {
                out.push_str(r##"<polyline fill="none" stroke="#303030" stroke-width="1" points=""##);
                for (x, y) in pts.iter() {
                    let _ = write!(out, "{x:.2},{y:.2} ");
                }
                out.push_str("\"/>\n");
            }
            pts.clear();
        };
        for s in &traj.samples {
            let a = s.theta.angles();
            let p = to_svg(wrap(a[1] - a[0]), wrap(a[2] - a[1]));
            if let Some(&(px, py)) = pts.last() {
                // break the line where it wraps around the torus
                if (p.0 - px).abs() > SVG_SIZE / 2.0 || (p.1 - py).abs() > SVG_SIZE / 2.0 {
                    flush(&mut out, &mut pts);
                }
            }
            pts.push(p);
        }
        flush(&mut out, &mut pts);
    }

    let marker = |out: &mut String, phi1: f64, phi2: f64, filled: bool| {
        let (x, y) = to_svg(phi1, phi2);
        let fill = if filled { "black" } else { "white" };
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="6" fill="{fill}" stroke="black" stroke-width="1.5"/>"#
        );
    };
    for (x, y) in [(0.0, 0.0), (TAU, 0.0), (0.0, TAU), (TAU, TAU)] {
        marker(&mut out, x, y, true);
    }
    marker(&mut out, TAU / 3.0, TAU / 3.0, false);
    marker(&mut out, 2.0 * TAU / 3.0, 2.0 * TAU / 3.0, false);
    out.push_str("</svg>\n");
    out
}

fn graph_column(h: &DirectedGraph) -> String {
    match graph_number(h) {
        Ok(nu) => nu.to_string(),
        Err(_) => format!("\"{h}\""),
    }
}

/// `t,theta_1..theta_N,nu`; the last column holds ν for three oscillators and
/// the graph literal otherwise.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let n = traj.params.net.n();
    let mut out = String::from("t");
    for k in 1..=n {
        let _ = write!(out, ",theta_{k}");
    }
    out.push_str(if n == 3 { ",nu\n" } else { ",graph\n" });
    let net = &traj.params.net;
    for s in &traj.samples {
        let _ = write!(out, "{}", s.t);
        for a in s.theta.angles() {
            let _ = write!(out, ",{a}");
        }
        let _ = writeln!(out, ",{}", graph_column(&net.effective_graph_at(s.theta.angles())));
    }
    out
}

/// `t_event,before,after` with graph literals.
pub fn events_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t_event,before,after\n");
    for e in &traj.events {
        let _ = writeln!(out, "{},\"{}\",\"{}\"", e.t, e.before, e.after);
    }
    out
}

/// Black/white strip over `ν = 0..63`: black where the graph was found.
pub fn catalog_svg(mask: u64, label: &str) -> String {
    let (w, h) = (10.0, 60.0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        64.0 * w + 20.0,
        h + 40.0,
        64.0 * w + 20.0,
        h + 40.0
    );
    if !label.is_empty() {
        let _ = writeln!(out, r#"<text x="10" y="16" font-family="sans-serif" font-size="14">{}</text>"#, escape(label));
    }
    for nu in 0..64 {
        let fill = if mask >> nu & 1 == 1 { "black" } else { "white" };
        let _ = writeln!(
            out,
            r##"<rect x="{}" y="24" width="{w}" height="{h}" fill="{fill}" stroke="#888" stroke-width="0.5"/>"##,
            10.0 + nu as f64 * w
        );
    }
    for nu in (0..64).step_by(8) {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10">{nu}</text>"#,
            10.0 + nu as f64 * w,
            h + 36.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// JSON form of a realization certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub coupling: CouplingSpec,
    pub theta: Vec<f64>,
    pub target: String,
    pub structural: String,
    pub dead_zone_count: usize,
    /// Intrinsic frequency, for stable realizations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Collective frequency of the relative equilibrium.
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "Omega")]
    pub collective_omega: Option<f64>,
}

impl From<&RealizationCertificate> for CertificateDoc {
    fn from(c: &RealizationCertificate) -> Self {
        Self {
            coupling: CouplingSpec::from(&c.g),
            theta: c.theta.angles().to_vec(),
            target: c.target.to_string(),
            structural: c.structural.to_string(),
            dead_zone_count: c.dead_zone_count,
            omega: None,
            collective_omega: None,
        }
    }
}

impl From<&StableRealization> for CertificateDoc {
    fn from(r: &StableRealization) -> Self {
        Self {
            omega: Some(r.omega),
            collective_omega: Some(r.equilibrium.omega),
            ..Self::from(&r.certificate)
        }
    }
}

impl CertificateDoc {
    /// Rebuilds the certificate and re-checks the effective graph.
    pub fn certificate(&self) -> Result<RealizationCertificate, IoError> {
        let g = CouplingFunction::try_from(&self.coupling)?;
        let target: DirectedGraph = self.target.parse()?;
        let structural: DirectedGraph = self.structural.parse()?;
        let theta = PhasePoint::new(self.theta.clone())?;
        let cert = RealizationCertificate {
            dead_zone_count: g.dead_zone_count(),
            g,
            theta,
            target: target.clone(),
            structural,
        };
        if cert.verify() {
            Ok(cert)
        } else {
            Err(IoError::Unverified(target))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }
}
