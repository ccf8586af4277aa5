//! `digs` — steady-state probe response of the five-level DIGS system.

mod config;

use clap::{Parser, Subcommand};
use digs_core::model::{BackendTag, MediumParams, LEVEL_NAMES, NLEVELS};
use digs_core::presets;
use digs_core::spectra::{
    self, find_default_zeros, linspace, to_optical, ScanVariable, TrendPoint,
};
use num_complex::Complex64;
use serde::Serialize;

use config::{
    classify, config_error, parse_scan_range, CliFailure, Format, ParamArgs, RunConfig, NM,
};

#[derive(Parser)]
#[command(
    name = "digs",
    about = "Weak-probe susceptibility of the five-level DIGS atom",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep chi-tilde over a probe-detuning grid.
    Sweep(ParamArgs),
    /// Locate absorption zeros (Im chi-tilde = 0), optionally along a
    /// parameter scan.
    Zeros(ZerosArgs),
    /// List the built-in figure parameter sets.
    Presets,
    /// Convert a reduced susceptibility into index and absorption.
    Index(IndexArgs),
}

#[derive(clap::Args)]
struct ZerosArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Scan a variable while tracking the negative-detuning zero:
    /// VAR MIN:MAX:POINTS with VAR one of gamma1, omega_b.
    #[arg(long, num_args = 2, value_names = ["VAR", "RANGE"], allow_hyphen_values = true)]
    scan: Option<Vec<String>>,
}

#[derive(clap::Args)]
struct IndexArgs {
    /// Re part of the reduced susceptibility chi-tilde.
    #[arg(allow_hyphen_values = true)]
    re_chi: f64,
    /// Im part of the reduced susceptibility (default 0).
    #[arg(allow_hyphen_values = true, default_value_t = 0.0)]
    im_chi: f64,
    /// Atomic number density in cm^-3.
    #[arg(long)]
    density: f64,
    /// Probe vacuum wavelength in nm.
    #[arg(long, default_value_t = 800.0)]
    wavelength: f64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let code = err
                .downcast_ref::<CliFailure>()
                .map(CliFailure::exit_code)
                .unwrap_or(1);
            std::process::ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Sweep(args) => cmd_sweep(&config::resolve(&args)?),
        Command::Zeros(args) => {
            let run = config::resolve(&args.params)?;
            match &args.scan {
                Some(scan) => cmd_zero_scan(&run, scan),
                None => cmd_zeros(&run),
            }
        }
        Command::Presets => {
            cmd_presets();
            Ok(())
        }
        Command::Index(args) => cmd_index(&args),
    }
}

/// One emitted spectral point; optical columns appear only with a medium.
#[derive(Serialize)]
struct SweepRow {
    delta_p: f64,
    re_chi: f64,
    im_chi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
}

fn sweep_row(delta_p: f64, chi: Complex64, medium: Option<&MediumParams>) -> SweepRow {
    let optical = medium.map(|m| to_optical(chi, m));
    SweepRow {
        delta_p,
        re_chi: chi.re,
        im_chi: chi.im,
        n: optical.as_ref().map(|o| o.n),
        delta_n: optical.as_ref().map(|o| o.delta_n),
        alpha: optical.as_ref().map(|o| o.alpha),
    }
}

fn cmd_sweep(run: &RunConfig) -> anyhow::Result<()> {
    let grid = linspace(run.grid.0, run.grid.1, run.grid.2).map_err(classify)?;
    let spectrum = spectra::sweep(
        &run.atom,
        &run.relaxation,
        &grid,
        run.backend,
        run.doppler.as_ref(),
    )
    .map_err(classify)?;
    let rows: Vec<SweepRow> = spectrum
        .grid
        .iter()
        .zip(&spectrum.chi)
        .map(|(&delta_p, &chi)| sweep_row(delta_p, chi, run.medium.as_ref()))
        .collect();

    let text = match run.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("delta_p,re_chi,im_chi");
            if run.medium.is_some() {
                out.push_str(",n,delta_n,alpha");
            }
            out.push('\n');
            for r in &rows {
                out.push_str(&format!("{:.16e},{:.16e},{:.16e}", r.delta_p, r.re_chi, r.im_chi));
                if let (Some(n), Some(dn), Some(al)) = (r.n, r.delta_n, r.alpha) {
                    out.push_str(&format!(",{n:.16e},{dn:.16e},{al:.16e}"));
                }
                out.push('\n');
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct SweepReport<'a> {
                backend: BackendTag,
                #[serde(skip_serializing_if = "Option::is_none")]
                doppler: Option<&'a digs_core::doppler::DopplerSpec>,
                points: &'a [SweepRow],
            }
            let mut text = serde_json::to_string_pretty(&SweepReport {
                backend: run.backend,
                doppler: run.doppler.as_ref(),
                points: &rows,
            })?;
            text.push('\n');
            text
        }
    };
    emit(run.out.as_deref(), &text)
}

/// One zero record of a zero report.
#[derive(Serialize)]
struct ZeroRow {
    delta_p_zero: f64,
    re_chi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_n: Option<f64>,
}

fn zero_row(delta_p_zero: f64, re_chi: f64, medium: Option<&MediumParams>) -> ZeroRow {
    let optical = medium.map(|m| to_optical(Complex64::new(re_chi, 0.0), m));
    ZeroRow {
        delta_p_zero,
        re_chi,
        n: optical.as_ref().map(|o| o.n),
        delta_n: optical.as_ref().map(|o| o.delta_n),
    }
}

fn zeros_text(run: &RunConfig, rows: &[ZeroRow]) -> anyhow::Result<String> {
    Ok(match run.format.unwrap_or(Format::Json) {
        Format::Json => {
            #[derive(Serialize)]
            struct ZeroReport<'a> {
                backend: BackendTag,
                doppler_averaged: bool,
                zeros: &'a [ZeroRow],
            }
            let mut text = serde_json::to_string_pretty(&ZeroReport {
                backend: run.backend,
                doppler_averaged: run.doppler.as_ref().is_some_and(|d| d.is_active()),
                zeros: rows,
            })?;
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut out = String::from("delta_p_zero,re_chi");
            if run.medium.is_some() {
                out.push_str(",n,delta_n");
            }
            out.push('\n');
            for r in rows {
                out.push_str(&format!("{:.16e},{:.16e}", r.delta_p_zero, r.re_chi));
                if let (Some(n), Some(dn)) = (r.n, r.delta_n) {
                    out.push_str(&format!(",{n:.16e},{dn:.16e}"));
                }
                out.push('\n');
            }
            out
        }
    })
}

fn cmd_zeros(run: &RunConfig) -> anyhow::Result<()> {
    let zeros = find_default_zeros(
        &run.atom,
        &run.relaxation,
        run.backend,
        run.doppler.as_ref(),
    )
    .map_err(classify)?;
    let rows: Vec<ZeroRow> = zeros
        .iter()
        .map(|z| zero_row(z.delta_p_zero, z.re_chi_at_zero, run.medium.as_ref()))
        .collect();
    emit(run.out.as_deref(), &zeros_text(run, &rows)?)
}

fn cmd_zero_scan(run: &RunConfig, scan: &[String]) -> anyhow::Result<()> {
    if run.doppler.as_ref().is_some_and(|d| d.is_active()) {
        return Err(config_error("--scan does not combine with Doppler averaging"));
    }
    let variable = match scan[0].as_str() {
        "gamma1" => ScanVariable::Gamma1,
        "omega_b" => ScanVariable::OmegaB,
        other => {
            return Err(config_error(format!(
                "unknown scan variable {other:?} (expected gamma1 or omega_b)"
            )))
        }
    };
    let (min, max, points) = parse_scan_range(&scan[1])?;
    let values = linspace(min, max, points).map_err(classify)?;
    let table = spectra::zero_trend(&run.atom, &run.relaxation, variable, &values, run.backend)
        .map_err(classify)?;

    #[derive(Serialize)]
    struct TrendRow {
        value: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        zero: Option<ZeroRow>,
    }
    let rows: Vec<TrendRow> = table
        .iter()
        .map(|TrendPoint { value, zero }| TrendRow {
            value: *value,
            zero: zero
                .as_ref()
                .map(|z| zero_row(z.delta_p_zero, z.re_chi_at_zero, run.medium.as_ref())),
        })
        .collect();

    let text = match run.format.unwrap_or(Format::Json) {
        Format::Json => {
            #[derive(Serialize)]
            struct TrendReport<'a> {
                backend: BackendTag,
                scan: &'a str,
                rows: &'a [TrendRow],
            }
            let mut text = serde_json::to_string_pretty(&TrendReport {
                backend: run.backend,
                scan: &scan[0],
                rows: &rows,
            })?;
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut out = String::from("value,delta_p_zero,re_chi\n");
            for r in &rows {
                match &r.zero {
                    Some(z) => out.push_str(&format!(
                        "{:.16e},{:.16e},{:.16e}\n",
                        r.value, z.delta_p_zero, z.re_chi
                    )),
                    None => out.push_str(&format!("{:.16e},,\n", r.value)),
                }
            }
            out
        }
    };
    emit(run.out.as_deref(), &text)
}

fn cmd_presets() {
    for p in presets::all() {
        println!("{}  ({})", p.name, p.description);
        let a = &p.atom;
        println!(
            "  omega_mu={} omega_b={} omega_c={} omega_p={}",
            a.omega_mu, a.omega_b, a.omega_c, a.omega_p
        );
        println!(
            "  delta_p={} delta_mu={} delta_b={} delta_c={}",
            a.delta_p, a.delta_mu, a.delta_b, a.delta_c
        );
        println!("  r_b={} r_cp={}", p.relaxation.r_b, p.relaxation.r_cp);
        let mut gammas = String::new();
        for j in 0..NLEVELS {
            for k in j..NLEVELS {
                gammas.push_str(&format!(
                    " {}{}={}",
                    LEVEL_NAMES[j],
                    LEVEL_NAMES[k],
                    p.relaxation.gamma(j, k)
                ));
            }
        }
        println!("  gamma:{gammas}");
    }
}

fn cmd_index(args: &IndexArgs) -> anyhow::Result<()> {
    if args.density <= 0.0 || args.wavelength <= 0.0 {
        return Err(config_error("density and wavelength must be > 0"));
    }
    let medium = MediumParams {
        density_n: args.density,
        lambda_p: args.wavelength * NM,
    };
    let point = to_optical(Complex64::new(args.re_chi, args.im_chi), &medium);
    let mut text = serde_json::to_string_pretty(&point)?;
    text.push('\n');
    emit(args.out.as_deref(), &text)
}

fn emit(out: Option<&std::path::Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| config_error(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
