//! `msei` — command-line front end for the nested multi-scale SEI toolkit.
//!
//! Subcommands map one-to-one onto the library: `simulate` runs both scales,
//! `analyze` emits the stability report, `elasticity` the sensitivity table,
//! `bifurcate` the branch diagram, `heatmap` a two-parameter `R0` grid and
//! `interventions` the comparative-effectiveness table. Every run derives
//! the coupling constant from the configured fast scale, writes plot-ready
//! CSVs plus a normalized config and a run manifest into the output
//! directory, and is byte-deterministic (manifest timestamp aside).
//!
//! Exit codes: 1 configuration/usage, 2 numerical failure, 3 I/O.

// Negated comparisons like `!(v >= 0.0)` also reject NaN; `v < 0.0` does not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod manifest;

use clap::{Args, Parser, Subcommand};
use config::{load_config, parse_override, BASELINE_TOML};
use msei_core::{
    analysis, between_host, coupling, export, interventions, sweeps, within_host, EvalMode,
};
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Environment variable holding the default output directory.
const OUT_DIR_ENV: &str = "MSEI_OUT_DIR";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Numeric(msei_core::Error),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Numeric(err) => write!(f, "numerical failure: {err}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl From<msei_core::Error> for CliError {
    fn from(err: msei_core::Error) -> Self {
        CliError::Numeric(err)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "msei",
    version,
    about = "Nested multi-scale SEI epidemic model: simulation, stability analysis, sweeps and intervention rankings"
)]
struct Cli {
    /// Scenario file (TOML). Defaults to the bundled baseline scenario.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (default: $MSEI_OUT_DIR, else ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override a config key, e.g. --set between_host.beta=0.00115
    /// (repeatable; applied before validation).
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate both scales and export the trajectories and the coupling
    /// summary.
    Simulate,
    /// Reproduction number, equilibria, eigenvalues and Routh-Hurwitz
    /// classification (plus effective reproduction number when the
    /// configured efficacies are nonzero).
    Analyze,
    /// Elasticity indices of R0: closed form vs finite differences.
    Elasticity(ElasticityArgs),
    /// One-parameter sweep of the transmission coefficient across the
    /// critical value.
    Bifurcate(BifurcateArgs),
    /// Two-parameter R0 heat grid.
    Heatmap(HeatmapArgs),
    /// Comparative-effectiveness table of the intervention bundles.
    Interventions(InterventionsArgs),
}

#[derive(Args)]
struct ElasticityArgs {
    /// Relative step of the finite-difference oracle, in (0, 0.01].
    #[arg(long, default_value_t = msei_core::sensitivity::DEFAULT_REL_STEP)]
    rel_step: f64,
}

#[derive(Args)]
struct BifurcateArgs {
    /// Lower end of the beta range (default: 0.5 * beta_star).
    #[arg(long)]
    lo: Option<f64>,
    /// Upper end of the beta range (default: 2 * beta_star).
    #[arg(long)]
    hi: Option<f64>,
    /// Number of grid points.
    #[arg(long, default_value_t = 101)]
    points: usize,
}

#[derive(Args)]
struct HeatmapArgs {
    /// Axis spec `name:lo:hi:n`; exactly two (x axis first, then y axis).
    /// Names: lambda, beta, mu, pi, gamma1, gamma2, d, n_h.
    #[arg(long = "grid", value_name = "NAME:LO:HI:N", required = true)]
    grids: Vec<String>,
}

#[derive(Args)]
struct InterventionsArgs {
    /// Efficacy levels, comma-separated, each in (0, 1).
    #[arg(long, value_delimiter = ',')]
    levels: Vec<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("msei: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let overrides = cli
        .set
        .iter()
        .map(|s| parse_override(s))
        .collect::<Result<Vec<_>, _>>()?;
    let (config_text, config_source) = match &cli.config {
        Some(path) => (
            std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?,
            path.display().to_string(),
        ),
        None => (BASELINE_TOML.to_string(), "<bundled baseline>".to_string()),
    };
    let scenario = load_config(&config_text, &overrides)?;

    let out_dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| scenario.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out_dir.display())))?;

    // Every subcommand consumes the derived coupling constant.
    let summary = coupling::derive_nh(&scenario.within_host, &scenario.coupling)?;
    if summary.empty_window {
        eprintln!(
            "msei: warning: viral load never reaches the detection limit {}; N_h = 0",
            summary.detection_limit
        );
    }
    let bh = scenario.between_host(summary.n_h);

    let mut outputs = vec![("coupling.csv", export::coupling_summary_csv(&summary))];
    let command_name;
    match &cli.command {
        Command::Simulate => {
            command_name = "simulate";
            let wh_traj = within_host::simulate_within_host(
                &scenario.within_host,
                &scenario.wh_initial,
                scenario.wh_horizon,
                &scenario.coupling.integrator,
            )?;
            let bh_traj = between_host::simulate_between_host(
                &bh,
                &scenario.bh_initial,
                scenario.bh_horizon,
                &scenario.coupling.integrator,
            )?;
            println!(
                "N_h = {:.6e}; fast scale: {} steps; slow scale: {} steps, final (S, E, I) = ({:.6e}, {:.6e}, {:.6e})",
                summary.n_h,
                wh_traj.stats.accepted,
                bh_traj.stats.accepted,
                bh_traj.final_state()[0],
                bh_traj.final_state()[1],
                bh_traj.final_state()[2],
            );
            outputs.push((
                "within_host.csv",
                export::trajectory_csv(&wh_traj, "s,U,U_star,V"),
            ));
            outputs.push((
                "between_host.csv",
                export::trajectory_csv(&bh_traj, "t,S,E,I"),
            ));
        }
        Command::Analyze => {
            command_name = "analyze";
            let report = analysis::routh_hurwitz(&bh)?;
            let mut csv = export::stability_report_csv(&report);
            let eff = &scenario.efficacies;
            if [eff.epsilon, eff.gamma_k, eff.delta, eff.rho]
                .iter()
                .any(|v| *v > 0.0)
            {
                let r_e = interventions::effective_r(
                    &bh,
                    &scenario.within_host,
                    eff,
                    &scenario.coupling,
                )?;
                csv.push_str(&format!("R_E,{}\n", export::fmt_f64(r_e)));
                csv.push_str(&format!(
                    "pct_reduction,{}\n",
                    export::fmt_f64(interventions::pct_reduction(report.r0, r_e)?)
                ));
            }
            println!(
                "R0 = {:.6e}; E0 {}; E1 {}",
                report.r0,
                report.classification_e0.as_str(),
                report.classification_e1.as_str()
            );
            outputs.push(("stability_report.csv", csv));
        }
        Command::Elasticity(args) => {
            command_name = "elasticity";
            let closed = msei_core::elasticity_closed_form(&bh)?;
            let fd = msei_core::elasticity_finite_difference(&bh, args.rel_step)?;
            println!(
                "R0 = {:.6e}; elasticities written",
                analysis::compute_r0(&bh)?
            );
            outputs.push(("elasticity.csv", export::elasticity_csv(&closed, &fd)));
        }
        Command::Bifurcate(args) => {
            command_name = "bifurcate";
            let beta_star = analysis::bifurcation_quantities(&bh)?.beta_star;
            let lo = args.lo.unwrap_or(0.5 * beta_star);
            let hi = args.hi.unwrap_or(2.0 * beta_star);
            if !(lo < hi) {
                return Err(CliError::Usage(format!(
                    "bifurcate range is empty: --lo {lo} must be below --hi {hi}"
                )));
            }
            if args.points < 3 {
                return Err(CliError::Usage(format!(
                    "bifurcate needs at least 3 points, got {}",
                    args.points
                )));
            }
            let grid = sweeps::bifurcation_sweep(&bh, (lo, hi), args.points)?;
            println!(
                "beta* = {beta_star:.6e}; swept beta over [{lo:.6e}, {hi:.6e}] with {} points",
                args.points
            );
            outputs.push(("bifurcation.csv", export::bifurcation_csv(&grid)));
        }
        Command::Heatmap(args) => {
            command_name = "heatmap";
            if args.grids.len() != 2 {
                return Err(CliError::Usage(format!(
                    "heatmap needs exactly two --grid specs (x, then y), got {}",
                    args.grids.len()
                )));
            }
            let x = parse_axis(&args.grids[0])?;
            let y = parse_axis(&args.grids[1])?;
            let grid = sweeps::heat_grid(&bh, &x, &y, EvalMode::Parallel)?;
            let supercritical = grid.cells.iter().filter(|c| c.r0 >= 1.0).count();
            println!(
                "heat grid {}x{}: {supercritical}/{} cells supercritical",
                x.n,
                y.n,
                grid.cells.len()
            );
            outputs.push(("heatmap.csv", export::heat_grid_csv(&grid)));
        }
        Command::Interventions(args) => {
            command_name = "interventions";
            let levels = if args.levels.is_empty() {
                scenario.levels.clone()
            } else {
                args.levels.clone()
            };
            let tables = interventions::effectiveness_table(
                &scenario.between_host(0.0),
                &scenario.within_host,
                &levels,
                &scenario.coupling,
                EvalMode::Parallel,
            )?;
            for table in &tables {
                let best = table.rows.iter().find(|r| r.rank == 8).unwrap();
                println!(
                    "level {:.2}: best bundle {} ({:.4}% reduction)",
                    table.level,
                    best.combo.label(),
                    best.pct_reduction
                );
            }
            outputs.push(("interventions.csv", export::effectiveness_csv(&tables)));
        }
    }

    outputs.push(("normalized_config.toml", scenario.to_normalized_toml()));
    for (name, contents) in &outputs {
        write_file(&out_dir.join(name), contents)?;
    }
    let manifest = manifest::render(
        command_name,
        &config_source,
        &cli.set,
        &scenario.to_normalized_toml(),
        &outputs.iter().map(|(n, _)| *n).collect::<Vec<_>>(),
    );
    write_file(&out_dir.join("run_manifest.txt"), &manifest)?;
    println!("wrote {} files to {}", outputs.len() + 1, out_dir.display());
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Parse an axis spec `name:lo:hi:n`.
fn parse_axis(spec: &str) -> Result<sweeps::AxisSpec, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 4 {
        return Err(CliError::Usage(format!(
            "grid spec '{spec}' is not of the form name:lo:hi:n"
        )));
    }
    let lo: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("grid spec '{spec}': bad lower bound")))?;
    let hi: f64 = parts[2]
        .parse()
        .map_err(|_| CliError::Usage(format!("grid spec '{spec}': bad upper bound")))?;
    let n: usize = parts[3]
        .parse()
        .map_err(|_| CliError::Usage(format!("grid spec '{spec}': bad point count")))?;
    if n < 2 || !(lo < hi) {
        return Err(CliError::Usage(format!(
            "grid spec '{spec}' needs lo < hi and at least 2 points"
        )));
    }
    msei_core::BhParam::from_name(parts[0])
        .map_err(|e| CliError::Usage(format!("grid spec '{spec}': {e}")))?;
    Ok(sweeps::AxisSpec::new(parts[0], lo, hi, n))
}
