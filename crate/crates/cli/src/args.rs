//! Flags for each subcommand. Every record doubles as the JSON config
//! format: keys are the long flag names, and flags given on the command line
//! win over values from the file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "deadzone", version, about = "Phase oscillator networks with dead-zone coupling")]
pub struct Cli {
    /// JSON file with values for the subcommand's flags (flags override it)
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Print the fully resolved configuration as JSON and exit
    #[arg(long, global = true)]
    pub print_config: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Effective coupling graph at a phase point
    Effective(EffectiveArgs),
    /// Partition of the three-oscillator torus by effective graph
    Raster(RasterArgs),
    /// Integrate trajectories and record effective-graph transitions
    Simulate(SimulateArgs),
    /// Build a coupling function realizing a target graph
    Realize(RealizeArgs),
    /// Which three-vertex graphs a coupling function realises
    Catalog(CatalogArgs),
    /// Re-check a certificate file
    Verify(VerifyArgs),
}

/// Fills unset fields of `self` from `other`.
pub trait Merge {
    fn merge(self, other: Self) -> Self;
}

macro_rules! merge_impl {
    ($ty:ty { $($opt:ident),* } flags { $($flag:ident),* }) => {
        impl Merge for $ty {
            fn merge(self, other: Self) -> Self {
                Self {
                    $($opt: self.$opt.or(other.$opt),)*
                    $($flag: self.$flag || other.$flag,)*
                }
            }
        }
    };
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct EffectiveArgs {
    /// Coupling-function JSON file (or inline JSON, or a certificate)
    #[arg(long, value_name = "FILE")]
    pub coupling: Option<String>,
    /// Structural graph literal, e.g. "3;1>2,2>3"; defaults to all-to-all
    #[arg(long, value_name = "GRAPH")]
    pub structural: Option<String>,
    /// Phases, e.g. "0,2pi/3,4pi/3", or "splay:N" / "sync:N"
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub theta: Option<String>,
}
merge_impl!(EffectiveArgs { coupling, structural, theta } flags {});

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RasterArgs {
    #[arg(long, value_name = "FILE")]
    pub coupling: Option<String>,
    /// Structural graph on three vertices; defaults to all-to-all
    #[arg(long, value_name = "GRAPH")]
    pub structural: Option<String>,
    /// Cells per axis [default: 300]
    #[arg(long, value_name = "R")]
    pub resolution: Option<usize>,
    /// Output prefix: writes PREFIX.csv and PREFIX.svg
    #[arg(long, value_name = "PREFIX")]
    pub out: Option<String>,
}
merge_impl!(RasterArgs { coupling, structural, resolution, out } flags {});

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SimulateArgs {
    /// Coupling-function JSON file, or a certificate (which also supplies
    /// the structural graph, ω and the start point)
    #[arg(long, value_name = "FILE")]
    pub coupling: Option<String>,
    #[arg(long, value_name = "GRAPH")]
    pub structural: Option<String>,
    /// Intrinsic frequency [default: 1, or the certificate's]
    #[arg(long, value_name = "W", allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Initial phases
    #[arg(long = "theta0", value_name = "LIST", allow_hyphen_values = true)]
    #[serde(rename = "theta0")]
    pub theta0: Option<String>,
    /// Run a K×K grid of starts (0, φ₁, φ₁+φ₂) instead of a single start
    #[arg(long, value_name = "K", conflicts_with = "theta0")]
    pub grid: Option<usize>,
    /// [default: 100]
    #[arg(long, value_name = "T")]
    pub t_end: Option<f64>,
    /// [default: 0.001]
    #[arg(long, value_name = "D")]
    pub dt: Option<f64>,
    /// Keep every STRIDE-th step [default: 10]
    #[arg(long)]
    pub stride: Option<usize>,
    /// Also write PREFIX.svg: trajectories over a raster with R cells per axis
    #[arg(long, value_name = "R")]
    pub overlay: Option<usize>,
    /// Output prefix
    #[arg(long, value_name = "PREFIX")]
    pub out: Option<String>,
}
merge_impl!(SimulateArgs { coupling, structural, omega, theta0, grid, t_end, dt, stride, overlay, out } flags {});

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RealizeArgs {
    /// Target graph literal
    #[arg(long, value_name = "GRAPH")]
    pub target: Option<String>,
    /// Realize at the generic point given by --theta
    #[arg(long)]
    pub generic: bool,
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Live zones of width DELTA at the geometric point with base gap A
    #[arg(long, num_args = 2, value_names = ["A", "DELTA"])]
    pub delta: Option<Vec<String>>,
    /// Realize at a linearly stable relative equilibrium
    #[arg(long)]
    pub stable: bool,
    /// Structural graph for --stable [default: all-to-all]
    #[arg(long, value_name = "GRAPH")]
    pub structural: Option<String>,
    /// Intrinsic frequency for --stable [default: 1]
    #[arg(long, value_name = "W", allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// [default: 0]
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
    /// With --stable, also integrate M perturbed starts to confirm stability
    #[arg(long, value_name = "M")]
    pub probe: Option<usize>,
    /// Certificate JSON output
    #[arg(long, value_name = "FILE")]
    pub out: Option<String>,
}
merge_impl!(RealizeArgs { target, theta, delta, structural, omega, seed, probe, out } flags { generic, stable });

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct CatalogArgs {
    #[arg(long, value_name = "FILE")]
    pub coupling: Option<String>,
    #[arg(long, value_name = "GRAPH")]
    pub structural: Option<String>,
    /// grid:R or random:M:SEED [default: grid:300]
    #[arg(long, value_name = "SAMPLER")]
    pub sampler: Option<String>,
    /// Bar-strip SVG output
    #[arg(long, value_name = "FILE")]
    pub out: Option<String>,
}
merge_impl!(CatalogArgs { coupling, structural, sampler, out } flags {});

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct VerifyArgs {
    /// Certificate JSON file
    #[arg(value_name = "FILE")]
    pub certificate: Option<String>,
}
merge_impl!(VerifyArgs { certificate } flags {});

impl RasterArgs {
    pub fn with_defaults(mut self) -> Self {
        self.resolution.get_or_insert(300);
        self
    }
}

impl SimulateArgs {
    pub fn with_defaults(mut self) -> Self {
        self.t_end.get_or_insert(100.0);
        self.dt.get_or_insert(deadzone::dynamics::DEFAULT_DT);
        self.stride.get_or_insert(deadzone::dynamics::DEFAULT_STRIDE);
        self
    }
}

impl RealizeArgs {
    pub fn with_defaults(mut self) -> Self {
        self.seed.get_or_insert(0);
        if self.stable {
            self.omega.get_or_insert(1.0);
        }
        self
    }
}

impl CatalogArgs {
    pub fn with_defaults(mut self) -> Self {
        self.sampler.get_or_insert_with(|| "grid:300".into());
        self
    }
}
