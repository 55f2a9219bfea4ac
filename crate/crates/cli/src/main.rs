//! Command-line surface: spectrum tables, wavefunction sampling, flux sweeps,
//! and the closed-form vs oracle verification suite, with CSV/JSON emission.
//!
//! Exit codes: 0 success, 1 domain or verification failure, 2 usage/parse
//! failure. Every emitted float carries 17 significant digits, so re-parsing
//! reproduces bit-identical values.

mod config;
mod emit;

use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use nu_spectra::oracle::{self, OracleOverrides};
use nu_spectra::potentials::{
    closed_form_wavefunction, normalize, spectrum, PhysicalScale, PotentialSpec, QuantumState,
    RowStatus,
};

use config::Defaults;
use emit::{fmt_f64, OutputSink, Row, Value};

#[derive(Parser)]
#[command(
    name = "nu-spectra",
    version,
    about = "Bound-state spectra of flux-threaded radial potentials",
    long_about = "Closed-form bound-state energies and wavefunctions for the modified Coulomb,\n\
                  modified oscillator, Kratzer-Fues and Mie-type potentials under an\n\
                  Aharonov-Bohm flux, cross-checked by a finite-difference eigensolver.\n\
                  The NU_SPECTRA_CONFIG environment variable may name a `key = value`\n\
                  defaults file; explicit flags always win."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate closed-form energies over an (n, l) grid at fixed flux
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Sample a normalized radial wavefunction R(r)
    #[command(allow_negative_numbers = true)]
    Wavefunction(WavefunctionArgs),
    /// Sweep the flux ratio at fixed (n, l) and emit E(flux)
    #[command(allow_negative_numbers = true)]
    FluxSweep(FluxSweepArgs),
    /// Run the closed-form vs finite-difference verification matrix
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    Coulomb,
    Oscillator,
    Kratzer,
    Mie,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every command that needs a potential and a unit system.
#[derive(Args)]
struct PhysicsArgs {
    /// Potential family
    #[arg(long, value_enum)]
    potential: Option<PotentialKind>,
    /// Constant offset a (energy)
    #[arg(long)]
    a: Option<f64>,
    /// Strength b (energy*length, or energy/length^2 for the oscillator)
    #[arg(long)]
    b: Option<f64>,
    /// Inverse-square strength c (energy*length^2; kratzer/mie only)
    #[arg(long)]
    c: Option<f64>,
    /// Planck constant
    #[arg(long)]
    hbar: Option<f64>,
    /// Particle mass
    #[arg(long)]
    mass: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Largest radial quantum number
    #[arg(long)]
    nmax: Option<u32>,
    /// Largest orbital quantum number
    #[arg(long)]
    lmax: Option<u32>,
    /// Flux ratio alpha = Phi/Phi_0
    #[arg(long)]
    flux: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct WavefunctionArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Radial quantum number
    #[arg(long)]
    n: Option<u32>,
    /// Orbital quantum number
    #[arg(long)]
    l: Option<u32>,
    /// Flux ratio
    #[arg(long)]
    flux: Option<f64>,
    /// Sampling range end (defaults to a family-tuned window)
    #[arg(long)]
    rmax: Option<f64>,
    /// Number of samples
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FluxSweepArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Radial quantum number
    #[arg(long)]
    n: Option<u32>,
    /// Orbital quantum number
    #[arg(long)]
    l: Option<u32>,
    /// First flux value
    #[arg(long)]
    flux_start: Option<f64>,
    /// Last flux value
    #[arg(long)]
    flux_stop: Option<f64>,
    /// Number of samples (>= 2, endpoints included)
    #[arg(long)]
    flux_steps: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Restrict to one family (all four by default)
    #[arg(long, value_enum)]
    family: Option<PotentialKind>,
    /// Restrict to one flux value (0 and 0.3 by default)
    #[arg(long)]
    flux: Option<f64>,
    /// Largest radial quantum number per slice
    #[arg(long)]
    nmax: Option<u32>,
    /// Largest orbital quantum number
    #[arg(long)]
    lmax: Option<u32>,
    /// Absolute tolerance on |E_closed - E_oracle|
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Override: first interior grid point
    #[arg(long)]
    rmin: Option<f64>,
    /// Override: right boundary
    #[arg(long)]
    rmax: Option<f64>,
    /// Override: number of interior grid points
    #[arg(long)]
    points: Option<usize>,
    /// Override: number of levels per slice
    #[arg(long)]
    levels: Option<usize>,
    #[command(flatten)]
    physics: PhysicsArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    let defaults = match Defaults::from_env() {
        Ok(d) => d,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Spectrum(args) => cmd_spectrum(args, &defaults),
        Command::Wavefunction(args) => cmd_wavefunction(args, &defaults),
        Command::FluxSweep(args) => cmd_flux_sweep(args, &defaults),
        Command::Verify(args) => cmd_verify(args, &defaults),
    };
    match result {
        Ok(code) => code,
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// Writing into a closed pipe (`... | head`) is not a failure.
fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|cause| {
        cause
            .downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}

struct Physics {
    spec: PotentialSpec,
    scale: PhysicalScale,
}

fn resolve_physics(args: &PhysicsArgs, defaults: &Defaults) -> Result<Physics> {
    let kind = args
        .potential
        .or(defaults.potential)
        .ok_or_else(|| anyhow!("--potential is required (coulomb|oscillator|kratzer|mie)"))?;
    let a = args.a.or(defaults.a).unwrap_or(0.0);
    let b = args.b.or(defaults.b).unwrap_or(1.0);
    let c = args.c.or(defaults.c).unwrap_or(0.0);
    let spec = match kind {
        PotentialKind::Coulomb => PotentialSpec::ModifiedCoulomb { a, b },
        PotentialKind::Oscillator => PotentialSpec::ModifiedOscillator { a, b },
        PotentialKind::Kratzer => PotentialSpec::KratzerFues { b, c },
        PotentialKind::Mie => PotentialSpec::MieType { a, b, c },
    };
    let scale = PhysicalScale::new(
        args.hbar.or(defaults.hbar).unwrap_or(1.0),
        args.mass.or(defaults.mass).unwrap_or(1.0),
    )?;
    spec.validate_for_bound_states()?;
    Ok(Physics { spec, scale })
}

fn resolve_output(args: &OutputArgs, defaults: &Defaults) -> (Format, Option<std::path::PathBuf>) {
    let format = args.format.or(defaults.format).unwrap_or(Format::Csv);
    (format, args.out.clone())
}

fn spectrum_rows(table: &nu_spectra::potentials::SpectrumTable) -> Vec<Row> {
    table
        .rows
        .iter()
        .map(|r| Row {
            fields: vec![
                ("n", Value::Int(i64::from(r.n))),
                ("l", Value::Int(i64::from(r.l))),
                ("flux", Value::Float(r.flux)),
                (
                    "energy",
                    r.energy.map(Value::Float).unwrap_or(Value::Empty),
                ),
                (
                    "source",
                    r.source
                        .map(|s| Value::Str(s.as_str()))
                        .unwrap_or(Value::Empty),
                ),
                ("status", Value::Str(r.status.as_str())),
            ],
        })
        .collect()
}

fn cmd_spectrum(args: SpectrumArgs, defaults: &Defaults) -> Result<ExitCode> {
    let physics = resolve_physics(&args.physics, defaults)?;
    let n_max = args.nmax.or(defaults.nmax).unwrap_or(2);
    let l_max = args.lmax.or(defaults.lmax).unwrap_or(2);
    let flux = args.flux.or(defaults.flux).unwrap_or(0.0);
    let table = spectrum(&physics.spec, n_max, l_max, flux, &physics.scale);
    let (format, out) = resolve_output(&args.output, defaults);
    let mut sink = OutputSink::create(out.as_deref())?;
    sink.write_rows(format == Format::Json, &spectrum_rows(&table))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_wavefunction(args: WavefunctionArgs, defaults: &Defaults) -> Result<ExitCode> {
    let physics = resolve_physics(&args.physics, defaults)?;
    let n = args.n.unwrap_or(0);
    let l = args.l.unwrap_or(0);
    let flux = args.flux.or(defaults.flux).unwrap_or(0.0);
    let samples = args.samples.or(defaults.samples).unwrap_or(2001);
    if samples < 3 {
        bail!("--samples must be at least 3");
    }
    let state = QuantumState::new(n, l, flux);
    let wf = closed_form_wavefunction(&physics.spec, &state, &physics.scale)?;
    let r_max = args
        .rmax
        .unwrap_or_else(|| default_wavefunction_window(&physics.spec, &state, &physics.scale));
    let normed = normalize(&wf, r_max, samples).map_err(|err| match err {
        nu_spectra::Error::TailNotConverged { .. } => {
            anyhow!("{err}; try a larger --rmax")
        }
        other => anyhow!(other),
    })?;
    // sample on (0, r_max]: R may diverge integrably at the origin when
    // l - flux < 0, so r = 0 itself is not emitted
    let step = r_max / samples as f64;
    let rows: Vec<Row> = (1..=samples)
        .map(|i| {
            let r = step * i as f64;
            Row {
                fields: vec![
                    ("r", Value::Float(r)),
                    ("R", Value::Float(normed.evaluate_radial(r))),
                ],
            }
        })
        .collect();
    let (format, out) = resolve_output(&args.output, defaults);
    let mut sink = OutputSink::create(out.as_deref())?;
    sink.write_rows(format == Format::Json, &rows)?;
    Ok(ExitCode::SUCCESS)
}

/// Window covering the state's nodes plus enough tail for the 1e-8
/// normalization threshold.
fn default_wavefunction_window(
    spec: &PotentialSpec,
    state: &QuantumState,
    scale: &PhysicalScale,
) -> f64 {
    let k = 2.0 * scale.mass / (scale.hbar * scale.hbar);
    match spec {
        PotentialSpec::ModifiedOscillator { b, .. } => {
            let omega = (k * b).sqrt();
            (8.0 + (4.0 * f64::from(state.n) + 2.0 * f64::from(state.l) + 3.0).sqrt())
                / omega.sqrt()
        }
        _ => {
            let b = spec.coulomb_strength();
            let unit = 2.0 / (k * b);
            let d = match spec {
                PotentialSpec::ModifiedCoulomb { .. } => {
                    f64::from(state.n) + 1.0 + state.effective_l()
                }
                _ => {
                    let sigma =
                        (k * spec.inverse_square_strength() + state.effective_j().powi(2)).sqrt();
                    f64::from(state.n) + 0.5 + sigma
                }
            };
            // decay rate kappa = 2/(d * unit): allow 30 e-foldings
            (12.0 * d * d * unit).max(15.0 * d * unit)
        }
    }
}

fn cmd_flux_sweep(args: FluxSweepArgs, defaults: &Defaults) -> Result<ExitCode> {
    let physics = resolve_physics(&args.physics, defaults)?;
    let n = args.n.unwrap_or(0);
    let l = args.l.unwrap_or(0);
    let start = args
        .flux_start
        .ok_or_else(|| anyhow!("--flux-start is required"))?;
    let stop = args
        .flux_stop
        .ok_or_else(|| anyhow!("--flux-stop is required"))?;
    let steps = args.flux_steps.unwrap_or(2);
    if steps < 2 {
        bail!("--flux-steps must be at least 2");
    }
    let rows: Vec<Row> = (0..steps)
        .map(|i| {
            let flux = start + (stop - start) * i as f64 / (steps - 1) as f64;
            let state = QuantumState::new(n, l, flux);
            let (energy, status) = match nu_spectra::potentials::closed_form_energy(
                &physics.spec,
                &state,
                &physics.scale,
            ) {
                Ok(level) => (Value::Float(level.energy), RowStatus::Ok),
                Err(nu_spectra::Error::FluxRegularity { .. }) => {
                    (Value::Empty, RowStatus::SkippedRegularity)
                }
                Err(_) => (Value::Empty, RowStatus::SkippedUnbound),
            };
            Row {
                fields: vec![
                    ("flux", Value::Float(flux)),
                    ("energy", energy),
                    ("status", Value::Str(status.as_str())),
                ],
            }
        })
        .collect();
    let (format, out) = resolve_output(&args.output, defaults);
    let mut sink = OutputSink::create(out.as_deref())?;
    sink.write_rows(format == Format::Json, &rows)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs, defaults: &Defaults) -> Result<ExitCode> {
    let scale = PhysicalScale::new(
        args.physics.hbar.or(defaults.hbar).unwrap_or(1.0),
        args.physics.mass.or(defaults.mass).unwrap_or(1.0),
    )?;
    // The canonical verification set; --a/--b/--c reshape a single-family run.
    let default_specs = [
        PotentialSpec::ModifiedCoulomb { a: 0.0, b: 1.0 },
        PotentialSpec::ModifiedOscillator { a: 0.0, b: 0.5 },
        PotentialSpec::KratzerFues { b: 1.0, c: 1.0 },
        PotentialSpec::MieType {
            a: 1.0,
            b: 1.0,
            c: 1.0,
        },
    ];
    let specs: Vec<PotentialSpec> = match args.family {
        None => default_specs.to_vec(),
        Some(kind) => {
            let a = args.physics.a.unwrap_or(0.0);
            let c = args.physics.c.unwrap_or(1.0);
            vec![match kind {
                PotentialKind::Coulomb => PotentialSpec::ModifiedCoulomb {
                    a,
                    b: args.physics.b.unwrap_or(1.0),
                },
                PotentialKind::Oscillator => PotentialSpec::ModifiedOscillator {
                    a,
                    b: args.physics.b.unwrap_or(0.5),
                },
                PotentialKind::Kratzer => PotentialSpec::KratzerFues {
                    b: args.physics.b.unwrap_or(1.0),
                    c,
                },
                PotentialKind::Mie => PotentialSpec::MieType {
                    a: args.physics.a.unwrap_or(1.0),
                    b: args.physics.b.unwrap_or(1.0),
                    c,
                },
            }]
        }
    };
    let fluxes: Vec<f64> = match args.flux {
        Some(f) => vec![f],
        None => vec![0.0, 0.3],
    };
    let n_max = args.nmax.unwrap_or(2);
    let l_max = args.lmax.unwrap_or(2);
    let abs_tol = args.abs_tol.unwrap_or(1e-4);
    let overrides = OracleOverrides {
        r_min: args.rmin,
        r_max: args.rmax,
        points: args.points,
        levels: args.levels,
    };
    let outcomes =
        oracle::verify_matrix(&specs, n_max, l_max, &fluxes, &scale, abs_tol, overrides);

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    use std::io::Write;
    let mut all_pass = true;
    let mut worst = 0.0f64;
    for outcome in &outcomes {
        match &outcome.report {
            Ok(report) => {
                worst = worst.max(report.worst_deviation);
                let verdict = if report.all_pass { "pass" } else { "FAIL" };
                all_pass &= report.all_pass;
                writeln!(
                    out,
                    "{:10} l={} flux={} levels={} points={} worst={} {}",
                    outcome.family,
                    outcome.l,
                    fmt_f64(outcome.flux),
                    report.checks.len(),
                    report.points,
                    fmt_f64(report.worst_deviation),
                    verdict
                )?;
                for check in report.checks.iter().filter(|c| !c.pass) {
                    writeln!(
                        out,
                        "    n={} closed={} oracle={} |diff|={}",
                        check.n,
                        fmt_f64(check.closed_form),
                        fmt_f64(check.numeric),
                        fmt_f64(check.deviation)
                    )?;
                }
            }
            Err(err) => {
                all_pass = false;
                writeln!(
                    out,
                    "{:10} l={} flux={} ERROR {err}",
                    outcome.family,
                    outcome.l,
                    fmt_f64(outcome.flux)
                )?;
            }
        }
    }
    writeln!(
        out,
        "verify: {} slices, worst deviation {}, tolerance {}: {}",
        outcomes.len(),
        fmt_f64(worst),
        fmt_f64(abs_tol),
        if all_pass { "PASS" } else { "FAIL" }
    )?;
    if all_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(anyhow!("worst deviation {worst:e}")).context("closed-form vs oracle mismatch")
    }
}
