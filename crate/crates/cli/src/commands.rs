use std::fmt::Write as _;
use std::path::Path;

use anyhow::Context;
use deadzone::angle::{parse_angle, parse_angle_list, TAU};
use deadzone::dynamics::{
    graph_itinerary, integrate_with, test_stable_realization, IntegrateOptions, Probe, Trajectory,
};
use deadzone::effective::{
    catalog_mask, catalog_realised, effective_graph, raster_cir, raster_point, Sampler,
};
use deadzone::graphs::{
    connectivity_class, graph_isotropy, graph_number, has_spanning_diverging_tree,
    point_isotropy, symmetric_group, MAX_GROUP_ORDER_N,
};
use deadzone::io::{self, CertificateDoc};
use deadzone::realize::{realize_delta, realize_generic, realize_stable, RealizationCertificate};
use deadzone::{CouplingFunction, CouplingSpec, DirectedGraph, PhasePoint, StructuralNetwork};
use rayon::prelude::*;

use crate::args::{CatalogArgs, EffectiveArgs, RasterArgs, RealizeArgs, SimulateArgs, VerifyArgs};
use crate::{precondition, usage, Classify, CmdResult};

/// A coupling argument: either a plain coupling function or a certificate.
enum Loaded {
    Coupling(CouplingFunction),
    Certificate(CertificateDoc, RealizationCertificate),
}

impl Loaded {
    fn coupling(&self) -> &CouplingFunction {
        match self {
            Loaded::Coupling(g) => g,
            Loaded::Certificate(_, c) => &c.g,
        }
    }
}

/// Reads a coupling function from a file, or from the argument itself when
/// it starts with `{`.
fn load_coupling(arg: Option<&str>) -> CmdResult<Loaded> {
    let arg = arg.ok_or_else(|| usage("--coupling is required"))?;
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}")).io()?
    };
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {arg}")).usage()?;
    if value.get("coupling").is_some() {
        let doc: CertificateDoc = serde_json::from_value(value).with_context(|| format!("certificate {arg}")).usage()?;
        let cert = doc.certificate().precondition()?;
        Ok(Loaded::Certificate(doc, cert))
    } else {
        let spec: CouplingSpec = serde_json::from_value(value).with_context(|| format!("coupling {arg}")).usage()?;
        let g = CouplingFunction::try_from(&spec).with_context(|| format!("coupling {arg}")).usage()?;
        Ok(Loaded::Coupling(g))
    }
}

fn parse_graph(text: &str) -> CmdResult<DirectedGraph> {
    text.parse().with_context(|| format!("graph {text:?}")).usage()
}

/// Phase list, or `splay[:N]` / `sync[:N]` with `N` defaulting to `n`.
fn parse_theta(text: &str, n: Option<usize>) -> CmdResult<Vec<f64>> {
    let t = text.trim();
    let (kind, count) = match t.split_once(':') {
        Some((k, c)) => (k, Some(c)),
        None => (t, None),
    };
    if kind == "splay" || kind == "sync" {
        let n = match count {
            Some(c) => c.parse().map_err(|_| usage(format!("bad oscillator count in {text:?}")))?,
            None => n.unwrap_or(3),
        };
        let p = if kind == "splay" { PhasePoint::splay(n) } else { PhasePoint::sync(n, 0.0) };
        return Ok(p.usage()?.angles().to_vec());
    }
    parse_angle_list(t).ok_or_else(|| usage(format!("cannot parse phases {text:?}")))
}

fn write_file(path: &str, contents: &str) -> CmdResult {
    if let Some(dir) = Path::new(path).parent().filter(|d| !d.as_os_str().is_empty()) {
        if !dir.is_dir() {
            return Err(crate::Failure {
                code: crate::EXIT_IO,
                error: anyhow::anyhow!("directory {} does not exist", dir.display()),
            });
        }
    }
    std::fs::write(path, contents).with_context(|| format!("writing {path}")).io()
}

fn structural_or_complete(text: Option<&str>, n: usize) -> CmdResult<DirectedGraph> {
    match text {
        Some(s) => parse_graph(s),
        None => Ok(DirectedGraph::complete(n)),
    }
}

fn nu_suffix(h: &DirectedGraph) -> String {
    graph_number(h).map(|nu| format!(" (nu = {nu})")).unwrap_or_default()
}

pub fn effective(a: EffectiveArgs) -> CmdResult {
    let g = load_coupling(a.coupling.as_deref())?.coupling().clone();
    let structural = a.structural.as_deref().map(parse_graph).transpose()?;
    let theta_text = a.theta.as_deref().ok_or_else(|| usage("--theta is required"))?;
    let theta = parse_theta(theta_text, structural.as_ref().map(DirectedGraph::n))?;
    let point = PhasePoint::new(theta).precondition()?;
    let structural = structural.unwrap_or_else(|| DirectedGraph::complete(point.n()));
    let net = StructuralNetwork::new(structural, 1.0, g);
    let h = effective_graph(&net, &point).precondition()?;

    println!("graph: {h}");
    if let Ok(nu) = graph_number(&h) {
        println!("nu: {nu}");
    }
    println!("connectivity: {}", connectivity_class(&h));
    println!(
        "spanning diverging tree: {}",
        if has_spanning_diverging_tree(&h) { "yes" } else { "no" }
    );
    if h.n() <= MAX_GROUP_ORDER_N {
        let group = symmetric_group(h.n()).precondition()?;
        let graph_iso = graph_isotropy(&h, &group);
        let point_iso = point_isotropy(point.angles(), &group);
        println!("isotropy: graph {}, point {}", graph_iso.len(), point_iso.len());
    }
    Ok(())
}

pub fn raster(a: RasterArgs) -> CmdResult {
    let g = load_coupling(a.coupling.as_deref())?.coupling().clone();
    let structural = structural_or_complete(a.structural.as_deref(), 3)?;
    let out = a.out.as_deref().ok_or_else(|| usage("--out is required"))?;
    let resolution = a.resolution.expect("defaulted");
    let net = StructuralNetwork::new(structural, 1.0, g);
    let grid = raster_cir(&net, resolution).precondition()?;
    write_file(&format!("{out}.csv"), &io::raster_csv(&grid))?;
    write_file(&format!("{out}.svg"), &io::raster_svg(&grid, &[]))?;
    println!(
        "wrote {out}.csv and {out}.svg: {resolution}x{resolution} cells, {} distinct graphs",
        grid.mask().count_ones()
    );
    Ok(())
}

fn itinerary_text(traj: &Trajectory) -> String {
    const SHOWN: usize = 8;
    let it = graph_itinerary(traj);
    let mut s = String::new();
    for (i, (h, dwell)) in it.iter().take(SHOWN).enumerate() {
        if i > 0 {
            s.push_str(" -> ");
        }
        let _ = write!(s, "{h} [{dwell:.3}]");
    }
    if it.len() > SHOWN {
        let _ = write!(s, " -> ... ({} more)", it.len() - SHOWN);
    }
    s
}

pub fn simulate(a: SimulateArgs) -> CmdResult {
    let loaded = load_coupling(a.coupling.as_deref())?;
    let (cert_structural, cert_omega, cert_theta) = match &loaded {
        Loaded::Certificate(doc, c) => (Some(c.structural.clone()), doc.omega, Some(c.theta.clone())),
        Loaded::Coupling(_) => (None, None, None),
    };
    let omega = a.omega.or(cert_omega).unwrap_or(1.0);
    let opts = IntegrateOptions {
        dt: a.dt.expect("defaulted"),
        stride: a.stride.expect("defaulted"),
    };
    let t_end = a.t_end.expect("defaulted");
    let structural = a.structural.as_deref().map(parse_graph).transpose()?.or(cert_structural);

    if let Some(k) = a.grid {
        if k == 0 {
            return Err(usage("--grid must be at least 1"));
        }
        let structural = structural.unwrap_or_else(|| DirectedGraph::complete(3));
        if structural.n() != 3 {
            return Err(precondition("--grid needs three oscillators"));
        }
        let net = StructuralNetwork::new(structural, omega, loaded.coupling().clone());
        let step = TAU / k as f64;
        let starts: Vec<(f64, f64)> = (0..k * k)
            .map(|c| ((c / k) as f64 * step + 0.5 * step, (c % k) as f64 * step + 0.5 * step))
            .collect();
        let trajs = starts
            .par_iter()
            .map(|&(p1, p2)| {
                let start = PhasePoint::new(raster_point(p1, p2).to_vec()).expect("finite start");
                integrate_with(&net, &start, t_end, opts)
            })
            .collect::<Result<Vec<_>, _>>()
            .precondition()?;

        let mut table = String::from("phi1,phi2,events,itinerary_length,final_nu\n");
        let mut multi = 0;
        let mut events = 0;
        for (&(p1, p2), t) in starts.iter().zip(&trajs) {
            let len = graph_itinerary(t).len();
            multi += usize::from(len >= 2);
            events += t.events.len();
            let nu = graph_number(t.final_graph()).expect("three vertices");
            let _ = writeln!(table, "{p1},{p2},{},{len},{nu}", t.events.len());
        }
        if let Some(out) = &a.out {
            write_file(&format!("{out}.itineraries.csv"), &table)?;
            if let Some(r) = a.overlay {
                let grid = raster_cir(&net, r).precondition()?;
                let refs: Vec<&Trajectory> = trajs.iter().collect();
                write_file(&format!("{out}.svg"), &io::raster_svg(&grid, &refs))?;
            }
        }
        println!(
            "{} runs to t = {t_end}: {events} events, {multi} runs visit two or more graphs",
            k * k
        );
        return Ok(());
    }

    let theta0 = match (&a.theta0, cert_theta) {
        (Some(text), _) => PhasePoint::new(parse_theta(text, structural.as_ref().map(DirectedGraph::n))?).precondition()?,
        (None, Some(t)) => t,
        (None, None) => return Err(usage("--theta0 or --grid is required")),
    };
    let structural = structural.unwrap_or_else(|| DirectedGraph::complete(theta0.n()));
    let net = StructuralNetwork::new(structural, omega, loaded.coupling().clone());
    let traj = integrate_with(&net, &theta0, t_end, opts).precondition()?;
    if let Some(out) = &a.out {
        write_file(&format!("{out}.trajectory.csv"), &io::trajectory_csv(&traj))?;
        write_file(&format!("{out}.events.csv"), &io::events_csv(&traj))?;
        if let Some(r) = a.overlay {
            let grid = raster_cir(&net, r).precondition()?;
            write_file(&format!("{out}.svg"), &io::raster_svg(&grid, &[&traj]))?;
        }
    }
    let settled = traj.events.last().map_or(0.0, |e| e.t);
    println!("events: {}", traj.events.len());
    println!("itinerary: {}", itinerary_text(&traj));
    println!(
        "final graph: {}{} since t = {settled:.6}",
        traj.final_graph(),
        nu_suffix(traj.final_graph())
    );
    Ok(())
}

fn print_certificate(cert: &RealizationCertificate, verified: bool) {
    println!("target: {}{}", cert.target, nu_suffix(&cert.target));
    println!("structural: {}", cert.structural);
    println!("theta: {:?}", cert.theta.angles());
    println!("effective graph re-check: {}", if verified { "ok" } else { "FAILED" });
    println!("dead zones: {}", cert.dead_zone_count);
    println!("live zones: {}", cert.g.live_zone_count());
}

pub fn realize(a: RealizeArgs) -> CmdResult {
    let target = parse_graph(a.target.as_deref().ok_or_else(|| usage("--target is required"))?)?;
    let modes = usize::from(a.generic) + usize::from(a.delta.is_some()) + usize::from(a.stable);
    if modes != 1 {
        return Err(usage("choose exactly one of --generic, --delta, --stable"));
    }
    let seed = a.seed.expect("defaulted");

    let (cert, stable) = if a.generic {
        let text = a.theta.as_deref().ok_or_else(|| usage("--generic needs --theta"))?;
        let theta = PhasePoint::new(parse_theta(text, Some(target.n()))?).precondition()?;
        (realize_generic(&target, &theta).precondition()?, None)
    } else if let Some(d) = &a.delta {
        let parse = |s: &String| parse_angle(s).ok_or_else(|| usage(format!("cannot parse angle {s:?}")));
        let (base, delta) = match d.as_slice() {
            [x, y] => (parse(x)?, parse(y)?),
            _ => return Err(usage("--delta takes two values: A DELTA")),
        };
        (realize_delta(&target, base, delta).precondition()?, None)
    } else {
        let structural = structural_or_complete(a.structural.as_deref(), target.n())?;
        let omega = a.omega.expect("defaulted");
        let r = realize_stable(&target, &structural, omega, seed).precondition()?;
        (r.certificate.clone(), Some(r))
    };
    let doc = stable.as_ref().map_or_else(|| CertificateDoc::from(&cert), CertificateDoc::from);

    // the written document is what gets checked, so the file round-trips
    let json = doc.to_json();
    let reread = CertificateDoc::from_json(&json).and_then(|d| d.certificate());
    let verified = reread.is_ok();
    print_certificate(&cert, verified);

    let mut ok = verified;
    if let Some(r) = &stable {
        let rep = &r.report;
        println!("collective frequency: {}", r.equilibrium.omega);
        println!("zero eigenvalue multiplicity: {}", rep.zero_multiplicity);
        println!(
            "gershgorin discs in closed left half-plane: {}",
            if rep.discs_in_left_half_plane { "yes" } else { "no" }
        );
        println!("largest real part of other eigenvalues: {:.6e}", rep.max_other_re);
        println!("linearly stable: {}", if rep.stable { "yes" } else { "no" });
        ok &= rep.stable;
        if let Some(m) = a.probe {
            let probe = Probe {
                center: r.equilibrium.theta.clone(),
                radius: 1e-2,
                count: m,
                seed,
                t_end: 200.0,
                dt: deadzone::dynamics::DEFAULT_DT,
            };
            let report = test_stable_realization(&r.network(), &target, &probe).precondition()?;
            println!(
                "probe: {m} perturbed runs, stably realised: {}",
                if report.stably_realised { "yes" } else { "no" }
            );
            ok &= report.stably_realised;
        }
    }
    if let Some(out) = &a.out {
        write_file(out, &json)?;
        println!("wrote {out}");
    }
    if ok {
        Ok(())
    } else {
        Err(precondition("certificate did not pass all checks"))
    }
}

fn parse_sampler(text: &str) -> CmdResult<Sampler> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || usage(format!("sampler must be grid:R or random:M:SEED, got {text:?}"));
    match parts.as_slice() {
        ["grid", r] => Ok(Sampler::Grid(r.parse().map_err(|_| bad())?)),
        ["random", m, s] => Ok(Sampler::Random {
            count: m.parse().map_err(|_| bad())?,
            seed: s.parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}

pub fn catalog(a: CatalogArgs) -> CmdResult {
    let g = load_coupling(a.coupling.as_deref())?.coupling().clone();
    let structural = structural_or_complete(a.structural.as_deref(), 3)?;
    let sampler_text = a.sampler.as_deref().expect("defaulted");
    let sampler = parse_sampler(sampler_text)?;
    let net = StructuralNetwork::new(structural, 1.0, g);
    let found = catalog_realised(&net, sampler);
    let mask = catalog_mask(&found).precondition()?;
    let nus: Vec<String> = (0..64).filter(|nu| mask >> nu & 1 == 1).map(|nu| nu.to_string()).collect();
    println!("mask: 0x{mask:016x}");
    println!("graphs: {}", nus.len());
    println!("nu: {}", nus.join(" "));
    println!(
        "undirected only: {}",
        if found.iter().all(DirectedGraph::is_undirected) { "yes" } else { "no" }
    );
    if let Some(out) = &a.out {
        write_file(out, &io::catalog_svg(mask, sampler_text))?;
        println!("wrote {out}");
    }
    Ok(())
}

pub fn verify(a: VerifyArgs) -> CmdResult {
    let path = a.certificate.as_deref().ok_or_else(|| usage("a certificate file is required"))?;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}")).io()?;
    let doc = CertificateDoc::from_json(&text).with_context(|| format!("certificate {path}")).usage()?;
    let cert = doc.certificate().precondition()?;
    print_certificate(&cert, true);
    if let Some(w) = doc.collective_omega {
        println!("collective frequency: {w}");
    }
    Ok(())
}
