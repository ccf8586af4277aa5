//! Run configuration: preset base, optional config-file overlay, flag
//! overrides, and validation.

use digs_core::doppler::DopplerSpec;
use digs_core::model::{AtomParams, BackendTag, MediumParams, RelaxationModel};
use digs_core::presets;
use serde::Deserialize;

/// Centimetres per nanometre; wavelengths are given in nm on the outside
/// and carried in cm internally.
pub const NM: f64 = 1e-7;

/// Fully resolved settings for one command invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub atom: AtomParams,
    pub relaxation: RelaxationModel,
    pub medium: Option<MediumParams>,
    pub doppler: Option<DopplerSpec>,
    pub grid: (f64, f64, usize),
    pub backend: BackendTag,
    pub out: Option<std::path::PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Per-field overlay of [`AtomParams`]; unset keys keep the base value.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSection {
    pub omega_mu: Option<f64>,
    pub omega_b: Option<f64>,
    pub omega_c: Option<f64>,
    pub omega_p: Option<f64>,
    pub delta_p: Option<f64>,
    pub delta_mu: Option<f64>,
    pub delta_b: Option<f64>,
    pub delta_c: Option<f64>,
}

impl AtomSection {
    fn apply(&self, atom: &mut AtomParams) {
        let pairs = [
            (&self.omega_mu, &mut atom.omega_mu),
            (&self.omega_b, &mut atom.omega_b),
            (&self.omega_c, &mut atom.omega_c),
            (&self.omega_p, &mut atom.omega_p),
            (&self.delta_p, &mut atom.delta_p),
            (&self.delta_mu, &mut atom.delta_mu),
            (&self.delta_b, &mut atom.delta_b),
            (&self.delta_c, &mut atom.delta_c),
        ];
        for (src, dst) in pairs {
            if let Some(v) = src {
                *dst = *v;
            }
        }
    }
}

/// Per-rate overlay of the named relaxation rates.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaxationSection {
    pub gamma_aa: Option<f64>,
    pub gamma_ab: Option<f64>,
    pub gamma_abp: Option<f64>,
    pub gamma_ac: Option<f64>,
    pub gamma_acp: Option<f64>,
    pub gamma_bb: Option<f64>,
    pub gamma_bpbp: Option<f64>,
    pub gamma_cc: Option<f64>,
    pub gamma_cpcp: Option<f64>,
    pub gamma_bbp: Option<f64>,
    pub gamma_ccp: Option<f64>,
    pub gamma_c_upper: Option<f64>,
    pub gamma_cp_upper: Option<f64>,
    pub r_b: Option<f64>,
    pub r_cp: Option<f64>,
}

impl RelaxationSection {
    fn apply(&self, base: &RelaxationModel) -> RelaxationModel {
        use digs_core::model::{A, B, BP, C, CP};
        let mut g = *base.matrix();
        let mut set = |j: usize, k: usize, v: Option<f64>| {
            if let Some(v) = v {
                g[j][k] = v;
                g[k][j] = v;
            }
        };
        set(A, A, self.gamma_aa);
        set(B, B, self.gamma_bb);
        set(BP, BP, self.gamma_bpbp);
        set(C, C, self.gamma_cc);
        set(CP, CP, self.gamma_cpcp);
        set(A, B, self.gamma_ab);
        set(A, BP, self.gamma_abp);
        set(A, C, self.gamma_ac);
        set(A, CP, self.gamma_acp);
        set(B, BP, self.gamma_bbp);
        set(C, CP, self.gamma_ccp);
        set(C, B, self.gamma_c_upper);
        set(C, BP, self.gamma_c_upper);
        set(CP, B, self.gamma_cp_upper);
        set(CP, BP, self.gamma_cp_upper);
        RelaxationModel::from_matrix(
            g,
            self.r_b.unwrap_or(base.r_b),
            self.r_cp.unwrap_or(base.r_cp),
        )
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumSection {
    /// Atomic number density in cm^-3.
    pub density_n: f64,
    /// Probe vacuum wavelength in nm.
    pub lambda_p_nm: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<std::path::PathBuf>,
    pub format: Option<Format>,
}

/// On-disk config file: every section overlays the preset base.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// Base parameter set; defaults to fig1-red when absent.
    pub preset: Option<String>,
    pub backend: Option<BackendTag>,
    pub atom: Option<AtomSection>,
    pub relaxation: Option<RelaxationSection>,
    pub medium: Option<MediumSection>,
    pub doppler: Option<DopplerSpec>,
    pub sweep: Option<SweepSection>,
    pub output: Option<OutputSection>,
}

/// Look up a preset; a bare family name ("fig1", "fig4") resolves to its
/// first member.
pub fn lookup_preset(name: &str) -> Option<presets::Preset> {
    if let Some(p) = presets::preset(name) {
        return Some(p);
    }
    let prefix = format!("{name}-");
    presets::all().into_iter().find(|p| p.name.starts_with(&prefix))
}

/// Shared parameter flags of the sweep/zeros subcommands.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct ParamArgs {
    /// Named figure parameter set used as the base configuration.
    #[arg(long)]
    pub preset: Option<String>,
    /// Config file overlaying the preset (sections: atom, relaxation,
    /// medium, doppler, sweep, output).
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Output format (default: csv for sweeps, json for zero reports).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Evaluation backend; defaults to analytic on its domain, numeric
    /// otherwise.
    #[arg(long, value_enum)]
    pub backend: Option<CliBackend>,
    /// Probe-detuning grid as MIN:MAX:POINTS.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Gaussian width of the two-photon detuning distribution.
    #[arg(long)]
    pub sigma_delta: Option<f64>,
    /// Gaussian width of the probe-only detuning distribution.
    #[arg(long)]
    pub sigma_probe: Option<f64>,
    /// Override the RF detuning delta_b.
    #[arg(long, allow_hyphen_values = true)]
    pub delta_b: Option<f64>,
    /// Atomic number density in cm^-3; enables index/absorption columns.
    #[arg(long)]
    pub density: Option<f64>,
    /// Probe vacuum wavelength in nm (default 800 when --density is set).
    #[arg(long)]
    pub wavelength: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CliBackend {
    Analytic,
    Numeric,
}

impl From<CliBackend> for BackendTag {
    fn from(b: CliBackend) -> Self {
        match b {
            CliBackend::Analytic => BackendTag::Analytic,
            CliBackend::Numeric => BackendTag::Numeric,
        }
    }
}

/// A configuration problem (exit code 1).
pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(CliFailure::Config(msg.into()))
}

/// A solver/backend problem (exit code 2).
pub fn backend_error(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(CliFailure::Backend(msg.into()))
}

#[derive(Debug, thiserror::Error)]
pub enum CliFailure {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("backend error: {0}")]
    Backend(String),
}

impl CliFailure {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliFailure::Config(_) => 1,
            CliFailure::Backend(_) => 2,
        }
    }
}

/// Classify a core error: grid/doppler/domain problems are configuration
/// mistakes, solver degeneracies are backend failures.
pub fn classify(err: digs_core::Error) -> anyhow::Error {
    use digs_core::Error::*;
    match &err {
        InvalidGrid(_) | InvalidDoppler(_) | Domain(_) => config_error(err.to_string()),
        SingularSystem { .. } | DegenerateRelaxation(_) | DegenerateDressing => {
            backend_error(err.to_string())
        }
    }
}

fn parse_triple(spec: &str) -> anyhow::Result<(f64, f64, usize)> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(config_error(format!("expected MIN:MAX:POINTS, got {spec:?}")));
    }
    let min: f64 = parts[0]
        .parse()
        .map_err(|e| config_error(format!("bad MIN in {spec:?}: {e}")))?;
    let max: f64 = parts[1]
        .parse()
        .map_err(|e| config_error(format!("bad MAX in {spec:?}: {e}")))?;
    let points: usize = parts[2]
        .parse()
        .map_err(|e| config_error(format!("bad POINTS in {spec:?}: {e}")))?;
    Ok((min, max, points))
}

pub fn parse_scan_range(spec: &str) -> anyhow::Result<(f64, f64, usize)> {
    parse_triple(spec)
}

const DEFAULT_GRID: (f64, f64, usize) = (-2.0, 2.0, 2001);

/// Resolve preset base + config file + flags into a [`RunConfig`].
pub fn resolve(args: &ParamArgs) -> anyhow::Result<RunConfig> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                config_error(format!("cannot read {}: {e}", path.display()))
            })?;
            toml::from_str(&text)
                .map_err(|e| config_error(format!("{}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };

    let preset_name = args
        .preset
        .as_deref()
        .or(file.preset.as_deref())
        .unwrap_or("fig1-red");
    let preset = lookup_preset(preset_name)
        .ok_or_else(|| config_error(format!("unknown preset {preset_name:?}")))?;

    let mut atom = preset.atom;
    if let Some(section) = &file.atom {
        section.apply(&mut atom);
    }
    let mut relaxation = preset.relaxation.clone();
    if let Some(section) = &file.relaxation {
        relaxation = section.apply(&relaxation);
    }
    if let Some(delta_b) = args.delta_b {
        atom.delta_b = delta_b;
    }

    let mut doppler = file.doppler;
    if args.sigma_delta.is_some() || args.sigma_probe.is_some() {
        let mut spec = doppler.unwrap_or_default();
        if let Some(sd) = args.sigma_delta {
            spec.sigma_delta = sd;
        }
        if let Some(sp) = args.sigma_probe {
            spec.sigma_probe = sp;
        }
        doppler = Some(spec);
    }
    if let Some(spec) = &doppler {
        spec.validate().map_err(|e| config_error(e.to_string()))?;
    }

    let medium = match (&file.medium, args.density) {
        (_, Some(density_n)) => Some(MediumParams {
            density_n,
            lambda_p: args.wavelength.unwrap_or(800.0) * NM,
        }),
        (Some(section), None) => Some(MediumParams {
            density_n: section.density_n,
            lambda_p: args
                .wavelength
                .or(section.lambda_p_nm)
                .unwrap_or(800.0)
                * NM,
        }),
        (None, None) => None,
    };

    let grid = match (&args.grid, &file.sweep) {
        (Some(spec), _) => parse_triple(spec)?,
        (None, Some(s)) => (s.min, s.max, s.points),
        (None, None) => DEFAULT_GRID,
    };
    if grid.2 < 2 || !(grid.1 > grid.0) {
        return Err(config_error(format!(
            "grid needs points >= 2 and max > min (got {}:{}:{})",
            grid.0, grid.1, grid.2
        )));
    }

    let doppler_active = doppler.as_ref().is_some_and(|d| d.is_active());
    let off_domain = atom.delta_mu != 0.0 || atom.delta_c != 0.0;
    let explicit = args.backend.map(BackendTag::from).or(file.backend);
    let backend = explicit.unwrap_or(if off_domain || doppler_active {
        BackendTag::Numeric
    } else {
        BackendTag::Analytic
    });
    if backend == BackendTag::Analytic && off_domain {
        return Err(config_error(
            "the analytic closed form holds only on the delta_mu = delta_c = 0 domain; \
             use backend = numeric for detuned control fields",
        ));
    }
    if explicit == Some(BackendTag::Analytic) && doppler_active {
        return Err(config_error(
            "Doppler averaging shifts delta_mu off the closed form's domain and always \
             runs numerically; drop backend = analytic or the sigma flags",
        ));
    }

    let report = digs_core::model::validate(&atom, &relaxation);
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    if !report.passed() {
        return Err(config_error(report.failures.join("; ")));
    }

    let out = args.out.clone().or(file
        .output
        .as_ref()
        .and_then(|o| o.path.clone()));
    let format = args
        .format
        .or(file.output.as_ref().and_then(|o| o.format));

    Ok(RunConfig {
        atom,
        relaxation,
        medium,
        doppler,
        grid,
        backend,
        out,
        format,
    })
}
