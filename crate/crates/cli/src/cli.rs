//! Argument surface. Every setting is optional at the parser level; required
//! values and defaults are resolved against the optional config file
//! (precedence: flag > config key > default).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "zetadyn",
    version,
    about = "Iterated-map dynamics, spectra, energy metrics, and Schrödinger eigenproblems",
    after_help = "Config file: flat key=value lines mirroring the long flag names; \
                  flags override file keys. ZETADYN_WORKERS sets the default worker count."
)]
pub struct Cli {
    /// Optional key=value config file; flags take precedence over its keys
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Iterate the map and emit the post-transient orbit (CSV columns: step,x)
    Orbit(OrbitArgs),
    /// Locate and classify fixed points (CSV columns: r,x_star,multiplier,stability,residual)
    FixedPoints(FixedPointsArgs),
    /// Bifurcation/Lyapunov sweep over the scan parameter (CSV columns: r,lyapunov,status)
    Scan(ScanArgs),
    /// Poincaré section in delay coordinates (CSV columns: x,x_next)
    Poincare(PoincareArgs),
    /// 3-D embedding (x, sin x, cos x) of the orbit (CSV columns: step,x,y,z)
    Attractor(OrbitArgs),
    /// One-sided power spectrum of the orbit (CSV columns: frequency,power)
    Spectrum(SpectrumArgs),
    /// Mean stored energies per r (CSV columns: r,mean_e_inductor,mean_e_capacitor,status)
    Energy(EnergyArgs),
    /// Mean per-step inductor-energy change per r (CSV columns: r,mean_transfer_rate,status)
    Transfer(EnergyArgs),
    /// Eigenvalues of the discretized Hamiltonian, one row per (grid size, index)
    /// (CSV columns: n_points,index,eigenvalue_re,eigenvalue_im,residual,method)
    Eigen(EigenArgs),
    /// Pair-correlation statistics g(u) or R2 (CSV columns: u,value)
    PairCorrelation(PairCorrelationArgs),
}

#[derive(Args)]
pub struct MapArgs {
    /// Map family: electrical | appendix
    #[arg(long)]
    pub map: Option<String>,
    /// Scaling parameter of the electrical map
    #[arg(long)]
    pub r: Option<f64>,
    /// Resistance (ohm)
    #[arg(long = "R")]
    pub resistance: Option<f64>,
    /// Inductance (henry)
    #[arg(long = "L")]
    pub inductance: Option<f64>,
    /// Capacitance (farad)
    #[arg(long = "C")]
    pub capacitance: Option<f64>,
    /// Coefficient of the 1/x^3 term (appendix map)
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Args)]
pub struct WindowArgs {
    /// Initial state
    #[arg(long)]
    pub x0: Option<f64>,
    /// Total iterations
    #[arg(long)]
    pub n: Option<usize>,
    /// Discarded leading iterations
    #[arg(long)]
    pub transient: Option<usize>,
}

#[derive(Args)]
pub struct OutArgs {
    /// Output file path
    #[arg(long)]
    pub out: Option<String>,
    /// Output format: csv | svg
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub struct FixedPointsArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Lower end of the search interval
    #[arg(long)]
    pub x_min: Option<f64>,
    /// Upper end of the search interval
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Number of uniformly placed Newton seeds
    #[arg(long)]
    pub seeds: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub struct ScanArgs {
    /// Map family: electrical (scans r) | appendix (scans alpha)
    #[arg(long)]
    pub map: Option<String>,
    /// Scan-parameter lower bound
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Scan-parameter upper bound
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Grid size (endpoints included)
    #[arg(long)]
    pub steps: Option<usize>,
    /// Resistance (ohm)
    #[arg(long = "R")]
    pub resistance: Option<f64>,
    /// Inductance (henry)
    #[arg(long = "L")]
    pub inductance: Option<f64>,
    /// Capacitance (farad)
    #[arg(long = "C")]
    pub capacitance: Option<f64>,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Post-transient samples kept per grid point
    #[arg(long)]
    pub retain: Option<usize>,
    /// Worker thread count (default: ZETADYN_WORKERS or 1)
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
    /// Optional second CSV with one (r, x) row per retained point
    #[arg(long)]
    pub bifurcation_out: Option<String>,
    /// Optional text report cross-checking Lyapunov signs against
    /// fixed-point multipliers on the same grid
    #[arg(long)]
    pub discrepancy_note: Option<String>,
}

#[derive(Args)]
pub struct PoincareArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Section threshold (default: median of the retained samples)
    #[arg(long)]
    pub section: Option<f64>,
    /// Section mode: crossing | stroboscopic
    #[arg(long)]
    pub mode: Option<String>,
    /// Stride for stroboscopic sampling
    #[arg(long)]
    pub stride: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Mean handling before the transform: remove | keep
    #[arg(long)]
    pub mean: Option<String>,
    /// Taper: rectangular | hann
    #[arg(long = "window")]
    pub window_fn: Option<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub struct EnergyArgs {
    /// Scan-parameter lower bound (r)
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Scan-parameter upper bound (r)
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Grid size (endpoints included)
    #[arg(long)]
    pub steps: Option<usize>,
    /// Resistance (ohm)
    #[arg(long = "R")]
    pub resistance: Option<f64>,
    /// Inductance (henry)
    #[arg(long = "L")]
    pub inductance: Option<f64>,
    /// Capacitance (farad)
    #[arg(long = "C")]
    pub capacitance: Option<f64>,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Worker thread count (default: ZETADYN_WORKERS or 1)
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub struct EigenArgs {
    /// Potential: zero | montgomery-approx | montgomery-appendix | yitang
    #[arg(long)]
    pub potential: Option<String>,
    /// A coefficient of the approximated potential
    #[arg(long = "A")]
    pub a_coefficient: Option<f64>,
    /// C coefficient of the approximated potential
    #[arg(long = "C")]
    pub c_coefficient: Option<f64>,
    /// Alpha parameter (appendix / yitang potentials)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// c parameter of the yitang potential
    #[arg(long)]
    pub yitang_c: Option<f64>,
    /// Particle mass (ħ = 1)
    #[arg(long)]
    pub mass: Option<f64>,
    /// Domain lower endpoint
    #[arg(long)]
    pub x_min: Option<f64>,
    /// Domain upper endpoint
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Interior grid sizes, comma-separated (rows ordered by size)
    #[arg(long)]
    pub n_points: Option<String>,
    /// Number of smallest-real-part eigenvalues
    #[arg(long)]
    pub k: Option<usize>,
    /// Solver: auto | dense | arnoldi
    #[arg(long)]
    pub method: Option<String>,
    /// Worker thread count (default: ZETADYN_WORKERS or 1)
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub struct PairCorrelationArgs {
    /// Statistic: g | r2
    #[arg(long)]
    pub statistic: Option<String>,
    /// Lower end of the u grid
    #[arg(long)]
    pub u_min: Option<f64>,
    /// Upper end of the u grid
    #[arg(long)]
    pub u_max: Option<f64>,
    /// Grid size (endpoints included)
    #[arg(long)]
    pub steps: Option<usize>,
    /// Optional constant deviation term added to g(u)
    #[arg(long)]
    pub delta: Option<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}
