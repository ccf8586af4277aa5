//! Domain types and unit conventions shared by all other modules.
//!
//! Level basis order is `[a, b, b', c, c']` throughout the crate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Index of the excited state |a>.
pub const A: usize = 0;
/// Index of the probed ground state |b>.
pub const B: usize = 1;
/// Index of the RF-coupled partner |b'>.
pub const BP: usize = 2;
/// Index of the control-laser ground state |c>.
pub const C: usize = 3;
/// Index of the pumped metastable state |c'>.
pub const CP: usize = 4;

/// Number of levels in the DIGS manifold.
pub const NLEVELS: usize = 5;

pub const LEVEL_NAMES: [&str; NLEVELS] = ["a", "b", "b'", "c", "c'"];

/// Rabi frequencies and detunings of the four fields, in units of gamma_ab.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomParams {
    /// Control-laser Rabi frequency on c <-> a.
    pub omega_mu: f64,
    /// RF Rabi frequency on b <-> b'.
    pub omega_b: f64,
    /// RF Rabi frequency on c <-> c'.
    pub omega_c: f64,
    /// Probe Rabi frequency on b <-> a.
    pub omega_p: f64,
    /// Probe detuning.
    pub delta_p: f64,
    /// Control-laser detuning.
    pub delta_mu: f64,
    /// RF detuning on b <-> b'.
    pub delta_b: f64,
    /// RF detuning on c <-> c'.
    pub delta_c: f64,
}

impl AtomParams {
    /// Two-photon detuning, always derived: delta = delta_p - delta_mu.
    pub fn two_photon_detuning(&self) -> f64 {
        self.delta_p - self.delta_mu
    }

    /// True when the probe is weak enough for linear response
    /// (omega_p <= 1e-3 in units of gamma_ab).
    pub fn weak_probe(&self) -> bool {
        self.omega_p <= 1e-3
    }
}

/// Named decay/decoherence rates as they appear in the figure captions,
/// plus the two incoherent pump rates. Builds the full symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxationRates {
    pub gamma_aa: f64,
    pub gamma_ab: f64,
    pub gamma_abp: f64,
    pub gamma_ac: f64,
    pub gamma_acp: f64,
    pub gamma_bb: f64,
    pub gamma_bpbp: f64,
    pub gamma_cc: f64,
    pub gamma_cpcp: f64,
    pub gamma_bbp: f64,
    pub gamma_ccp: f64,
    /// gamma_C = gamma_cb = gamma_cb'.
    pub gamma_c_upper: f64,
    /// gamma_C' = gamma_c'b = gamma_c'b'.
    pub gamma_cp_upper: f64,
    /// Incoherent pump rate into |b>.
    pub r_b: f64,
    /// Incoherent pump rate into |c'>.
    pub r_cp: f64,
}

/// Element-wise decay matrix gamma_jk plus incoherent pump rates.
///
/// The matrix is stored fully; `gamma[j][j]` is the population decay of
/// level j, `gamma[j][k]` (j != k) the coherence decay of rho_jk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxationModel {
    gamma: [[f64; NLEVELS]; NLEVELS],
    pub r_b: f64,
    pub r_cp: f64,
}

impl RelaxationModel {
    pub fn from_rates(r: &RelaxationRates) -> Self {
        let mut g = [[0.0; NLEVELS]; NLEVELS];
        g[A][A] = r.gamma_aa;
        g[B][B] = r.gamma_bb;
        g[BP][BP] = r.gamma_bpbp;
        g[C][C] = r.gamma_cc;
        g[CP][CP] = r.gamma_cpcp;
        let mut set = |j: usize, k: usize, v: f64| {
            g[j][k] = v;
            g[k][j] = v;
        };
        set(A, B, r.gamma_ab);
        set(A, BP, r.gamma_abp);
        set(A, C, r.gamma_ac);
        set(A, CP, r.gamma_acp);
        set(B, BP, r.gamma_bbp);
        set(C, CP, r.gamma_ccp);
        set(C, B, r.gamma_c_upper);
        set(C, BP, r.gamma_c_upper);
        set(CP, B, r.gamma_cp_upper);
        set(CP, BP, r.gamma_cp_upper);
        RelaxationModel {
            gamma: g,
            r_b: r.r_b,
            r_cp: r.r_cp,
        }
    }

    pub fn from_matrix(gamma: [[f64; NLEVELS]; NLEVELS], r_b: f64, r_cp: f64) -> Self {
        RelaxationModel { gamma, r_b, r_cp }
    }

    pub fn gamma(&self, j: usize, k: usize) -> f64 {
        self.gamma[j][k]
    }

    pub fn matrix(&self) -> &[[f64; NLEVELS]; NLEVELS] {
        &self.gamma
    }

    pub fn gamma_ab(&self) -> f64 {
        self.gamma[A][B]
    }

    /// gamma_C, asserting the stored matrix honors gamma_cb = gamma_cb'.
    pub fn gamma_c_upper(&self) -> f64 {
        debug_assert_eq!(self.gamma[C][B], self.gamma[C][BP]);
        self.gamma[C][B]
    }

    /// gamma_C', asserting gamma_c'b = gamma_c'b'.
    pub fn gamma_cp_upper(&self) -> f64 {
        debug_assert_eq!(self.gamma[CP][B], self.gamma[CP][BP]);
        self.gamma[CP][B]
    }

    /// Set gamma_C = gamma_C' = value (the Fig. 2 scan variable gamma_1).
    pub fn set_ground_decoherence(&mut self, value: f64) {
        for k in [B, BP] {
            for j in [C, CP] {
                self.gamma[j][k] = value;
                self.gamma[k][j] = value;
            }
        }
    }

    /// Multiply every rate (gammas and pumps) by a common factor.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut g = self.gamma;
        for row in g.iter_mut() {
            for v in row.iter_mut() {
                *v *= factor;
            }
        }
        RelaxationModel {
            gamma: g,
            r_b: self.r_b * factor,
            r_cp: self.r_cp * factor,
        }
    }
}

/// Atomic density and probe wavelength, the only dimensional quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    /// Atomic number density in cm^-3.
    pub density_n: f64,
    /// Probe vacuum wavelength in cm.
    pub lambda_p: f64,
}

impl MediumParams {
    /// The dimensional conversion 3 N lambda_p^3 / (4 pi^2) that maps the
    /// reduced susceptibility onto the full one.
    pub fn chi_prefactor(&self) -> f64 {
        3.0 * self.density_n * self.lambda_p.powi(3) / (4.0 * std::f64::consts::PI.powi(2))
    }
}

/// Which evaluation backend produced a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendTag {
    Analytic,
    Numeric,
}

impl std::fmt::Display for BackendTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BackendTag::Analytic => write!(f, "analytic"),
            BackendTag::Numeric => write!(f, "numeric"),
        }
    }
}

/// Settings that produced a [`Spectrum`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMeta {
    pub backend: BackendTag,
    pub atom: AtomParams,
    pub relaxation: RelaxationModel,
    pub doppler: Option<crate::doppler::DopplerSpec>,
}

/// chi-tilde sampled on a strictly increasing probe-detuning grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub grid: Vec<f64>,
    pub chi: Vec<Complex64>,
    pub meta: SpectrumMeta,
}

/// Pass/fail plus warnings from [`validate`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the invariants of a parameter set and flag regimes outside the
/// weak-probe/weak-RF assumptions.
pub fn validate(params: &AtomParams, relax: &RelaxationModel) -> ValidationReport {
    let mut report = ValidationReport::default();

    if !(params.omega_mu > 0.0) {
        report.failures.push("omega_mu must be > 0".into());
    }
    if params.omega_b < 0.0 {
        report.failures.push("omega_b must be >= 0".into());
    }
    if params.omega_c < 0.0 {
        report.failures.push("omega_c must be >= 0".into());
    }
    if !(params.omega_p > 0.0) {
        report.failures.push("omega_p must be > 0".into());
    }

    for j in 0..NLEVELS {
        for k in 0..NLEVELS {
            let g = relax.gamma(j, k);
            if g < 0.0 {
                report.failures.push(format!(
                    "gamma_{}{} = {g} must be >= 0",
                    LEVEL_NAMES[j], LEVEL_NAMES[k]
                ));
            }
            if (g - relax.gamma(k, j)).abs() > 0.0 {
                report.failures.push(format!(
                    "gamma matrix not symmetric at ({}, {})",
                    LEVEL_NAMES[j], LEVEL_NAMES[k]
                ));
            }
        }
        if !(relax.gamma(j, j) > 0.0) {
            report.failures.push(format!(
                "gamma_{0}{0} must be > 0 for a unique steady state",
                LEVEL_NAMES[j]
            ));
        }
    }
    if relax.r_b < 0.0 {
        report.failures.push("r_b must be >= 0".into());
    }
    if relax.r_cp < 0.0 {
        report.failures.push("r_cp must be >= 0".into());
    }

    if (relax.gamma_ab() - 1.0).abs() > 1e-12 {
        report.warnings.push(format!(
            "gamma_ab = {} departs from the unit convention gamma_ab = 1",
            relax.gamma_ab()
        ));
    }

    // Paper regime: optical coherence decay dominates ground-state rates.
    let min_upper = [B, BP, C, CP]
        .iter()
        .map(|&j| relax.gamma(A, j))
        .fold(f64::INFINITY, f64::min);
    let mut max_lower = 0.0f64;
    for j in [B, BP, C, CP] {
        for k in [B, BP, C, CP] {
            max_lower = max_lower.max(relax.gamma(j, k));
        }
    }
    if min_upper < max_lower {
        report.warnings.push(format!(
            "gamma_aj (min {min_upper}) should dominate ground-state rates (max {max_lower})"
        ));
    }

    if params.omega_c >= params.omega_mu {
        report.warnings.push(format!(
            "omega_c = {} >= omega_mu = {} is outside the perturbative regime",
            params.omega_c, params.omega_mu
        ));
    }
    if params.omega_p >= 1e-2 {
        report.warnings.push(format!(
            "omega_p = {} is outside the weak-probe regime (expect >= 1e-2 distortion)",
            params.omega_p
        ));
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn fig1_passes_clean() {
        let p = presets::preset("fig1-red").unwrap();
        let report = validate(&p.atom, &p.relaxation);
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert!(report.warnings.is_empty(), "warnings: {:?}", report.warnings);
    }

    #[test]
    fn zero_population_decay_fails() {
        let p = presets::preset("fig1-red").unwrap();
        let mut rates = presets::fig1_rates();
        rates.gamma_bb = 0.0;
        let relax = RelaxationModel::from_rates(&rates);
        assert!(!validate(&p.atom, &relax).passed());
    }

    #[test]
    fn strong_rf_warns() {
        let p = presets::preset("fig1-red").unwrap();
        let mut atom = p.atom;
        atom.omega_c = 3.0;
        atom.omega_mu = 2.0;
        let report = validate(&atom, &p.relaxation);
        assert!(report.passed());
        assert!(!report.warnings.is_empty());
    }

    #[test]
    fn two_photon_detuning_is_derived() {
        let p = presets::preset("fig1-red").unwrap();
        let mut atom = p.atom;
        atom.delta_p = 0.75;
        atom.delta_mu = 0.25;
        assert_eq!(atom.two_photon_detuning(), 0.5);
    }

    #[test]
    fn named_accessors_match_matrix() {
        let p = presets::preset("fig1-red").unwrap();
        assert_eq!(p.relaxation.gamma_c_upper(), 1e-4);
        assert_eq!(p.relaxation.gamma_cp_upper(), 1e-4);
        assert_eq!(p.relaxation.gamma_ab(), 1.0);
    }

    #[test]
    fn set_ground_decoherence_updates_both_triangles() {
        let mut relax = presets::preset("fig1-red").unwrap().relaxation;
        relax.set_ground_decoherence(0.5);
        assert_eq!(relax.gamma(C, B), 0.5);
        assert_eq!(relax.gamma(B, C), 0.5);
        assert_eq!(relax.gamma(CP, BP), 0.5);
        assert_eq!(relax.gamma_c_upper(), 0.5);
    }
}
