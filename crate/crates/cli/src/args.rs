//! Command-line surface: subcommands, flags, and cross-flag validation that
//! clap cannot express on its own.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fqa_core::RescaleSpec;

#[derive(Parser)]
#[command(
    name = "fqa",
    version,
    about = "Feedback-based quantum algorithm simulator (FQA/FALQON) with time-rescaled variants"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Run one feedback trajectory and write per-layer records as CSV.
    Run(RunArgs),
    /// Run several rescaling variants on one instance, one CSV each.
    Sweep(SweepArgs),
    /// Print exact reference data for an instance (max cut, ground energy).
    Oracle(OracleArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum ProblemKind {
    Maxcut,
    Annni,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum RescaleKind {
    Identity,
    Sine,
    Poly,
}

#[derive(Args)]
pub struct InstanceArgs {
    /// Problem Hamiltonian family.
    #[arg(long, value_enum)]
    pub problem: ProblemKind,

    /// Edge-list file (maxcut). First non-comment line is the vertex count,
    /// then one `u v w` line per edge; `#` starts a comment.
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,

    /// Generate a seeded random regular graph with this many vertices (maxcut).
    #[arg(long, value_name = "V")]
    pub generate_regular: Option<usize>,

    /// Vertex degree for --generate-regular.
    #[arg(long, default_value_t = 3)]
    pub degree: usize,

    /// PRNG seed for --generate-regular.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Chain length (annni).
    #[arg(long = "L", value_name = "SITES")]
    pub length: Option<usize>,

    /// Next-nearest-neighbor YY coupling (annni).
    #[arg(long)]
    pub kappa: Option<f64>,

    /// Transverse field (annni).
    #[arg(long)]
    pub g: Option<f64>,
}

impl InstanceArgs {
    pub fn validate(&self) -> Result<()> {
        match self.problem {
            ProblemKind::Maxcut => {
                match (&self.graph, self.generate_regular) {
                    (Some(_), Some(_)) => {
                        bail!("--graph and --generate-regular are mutually exclusive")
                    }
                    (None, None) => {
                        bail!("--problem maxcut needs either --graph or --generate-regular")
                    }
                    _ => {}
                }
                if self.length.is_some() || self.kappa.is_some() || self.g.is_some() {
                    bail!("--L, --kappa and --g are only valid with --problem annni");
                }
            }
            ProblemKind::Annni => {
                if self.graph.is_some() || self.generate_regular.is_some() {
                    bail!("--graph and --generate-regular are only valid with --problem maxcut");
                }
                if self.length.is_none() {
                    bail!("--problem annni requires --L");
                }
                if self.kappa.is_none() {
                    bail!("--problem annni requires --kappa");
                }
                if self.g.is_none() {
                    bail!("--problem annni requires --g");
                }
            }
        }
        Ok(())
    }
}

#[derive(Args)]
pub struct ScheduleArgs {
    /// Layer duration (dt, or dtau under rescaling).
    #[arg(long)]
    pub dt: f64,

    /// Number of circuit layers.
    #[arg(long)]
    pub layers: usize,
}

impl ScheduleArgs {
    pub fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            bail!("--dt must be positive, got {}", self.dt);
        }
        if self.layers < 1 {
            bail!("--layers must be at least 1");
        }
        Ok(())
    }
}

#[derive(Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,

    #[command(flatten)]
    pub schedule: ScheduleArgs,

    /// Rescaling family.
    #[arg(long, value_enum, default_value_t = RescaleKind::Identity)]
    pub rescale: RescaleKind,

    /// Contraction parameter a (required for sine/poly).
    #[arg(long)]
    pub a: Option<f64>,

    /// Original final time t_f (required for sine/poly).
    #[arg(long)]
    pub tf: Option<f64>,

    /// Output CSV path; a `<out>.summary` file is written beside it.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,

    #[command(flatten)]
    pub schedule: ScheduleArgs,

    /// Comma-separated rescaling families to sweep.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [RescaleKind::Identity])]
    pub rescale: Vec<RescaleKind>,

    /// Comma-separated contraction parameters, applied to each non-identity
    /// family.
    #[arg(long, value_delimiter = ',')]
    pub a: Vec<f64>,

    /// Original final time t_f, shared by the non-identity entries.
    #[arg(long)]
    pub tf: Option<f64>,

    /// Output stem; entries are written as `<out>_<label>.csv`.
    #[arg(long, value_name = "STEM")]
    pub out: PathBuf,

    /// Concurrent sweep entries (defaults to the available cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
}

/// Build the rescaling spec for one (family, a, tf) choice, naming the
/// offending flag on failure.
pub fn resolve_rescale(kind: RescaleKind, a: Option<f64>, tf: Option<f64>) -> Result<RescaleSpec> {
    match kind {
        RescaleKind::Identity => {
            if a.is_some() {
                bail!("--a is only valid with --rescale sine or --rescale poly");
            }
            if tf.is_some() {
                bail!("--tf is only valid with --rescale sine or --rescale poly");
            }
            Ok(RescaleSpec::identity())
        }
        RescaleKind::Sine | RescaleKind::Poly => {
            let a = a.ok_or_else(|| anyhow::anyhow!("--rescale {kind:?} requires --a"))?;
            let tf = tf.ok_or_else(|| anyhow::anyhow!("--rescale {kind:?} requires --tf"))?;
            if !a.is_finite() || a <= 0.0 {
                bail!("--a must be positive, got {a}");
            }
            if !tf.is_finite() || tf <= 0.0 {
                bail!("--tf must be positive, got {tf}");
            }
            match kind {
                RescaleKind::Sine => Ok(RescaleSpec::sine(a, tf)?),
                _ => Ok(RescaleSpec::polynomial(a, tf)?),
            }
        }
    }
}

pub fn rescale_kind_name(kind: RescaleKind) -> &'static str {
    match kind {
        RescaleKind::Identity => "identity",
        RescaleKind::Sine => "sine",
        RescaleKind::Poly => "poly",
    }
}
