//! Built-in parameter sets for the published figure configurations.

use crate::model::{AtomParams, RelaxationModel, RelaxationRates};

/// A named, self-contained parameter set.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub atom: AtomParams,
    pub relaxation: RelaxationModel,
}

/// Baseline decay rates shared by every preset: strong optical decoherence,
/// ground-state rates of 1e-4.
pub fn fig1_rates() -> RelaxationRates {
    RelaxationRates {
        gamma_aa: 2.0,
        gamma_ab: 1.0,
        gamma_abp: 1.0,
        gamma_ac: 1.0,
        gamma_acp: 1.0,
        gamma_bb: 1e-4,
        gamma_bpbp: 1e-4,
        gamma_cc: 1e-4,
        gamma_cpcp: 1e-4,
        gamma_bbp: 1e-4,
        gamma_ccp: 1e-4,
        gamma_c_upper: 1e-4,
        gamma_cp_upper: 1e-4,
        r_b: 0.0,
        r_cp: 0.0,
    }
}

fn fig1_atom() -> AtomParams {
    AtomParams {
        omega_mu: 2.0,
        omega_b: 0.65,
        omega_c: 0.15,
        omega_p: 1e-4,
        delta_p: 0.0,
        delta_mu: 0.0,
        delta_b: 0.0,
        delta_c: 0.0,
    }
}

fn make(
    name: &'static str,
    description: &'static str,
    atom: AtomParams,
    r_b: f64,
    r_cp: f64,
) -> Preset {
    let rates = RelaxationRates {
        r_b,
        r_cp,
        ..fig1_rates()
    };
    Preset {
        name,
        description,
        atom,
        relaxation: RelaxationModel::from_rates(&rates),
    }
}

fn fig4_atom(delta_b: f64) -> AtomParams {
    AtomParams {
        delta_b,
        ..fig1_atom()
    }
}

/// All built-in presets, in listing order.
pub fn all() -> Vec<Preset> {
    let fig3_atom = AtomParams {
        omega_b: 0.2,
        omega_c: 0.1,
        ..fig1_atom()
    };
    vec![
        make(
            "fig1-red",
            "resonant, strong pumping into c' (solid line)",
            fig1_atom(),
            5e-5,
            0.023,
        ),
        make(
            "fig1-blue",
            "resonant, stronger c' pumping (dashed line)",
            fig1_atom(),
            3e-5,
            0.03,
        ),
        make(
            "fig1-purple",
            "resonant, strongest c' pumping (dotted line)",
            fig1_atom(),
            9e-6,
            0.04,
        ),
        make(
            "fig2",
            "zero-trend baseline for decoherence and omega_b scans",
            fig1_atom(),
            5e-5,
            0.023,
        ),
        make(
            "fig3",
            "narrow-line configuration for Doppler averaging studies",
            fig3_atom,
            4e-5,
            0.0058,
        ),
        make(
            "fig4-1",
            "near-threshold pumping, delta_b = +0.01 (solid line)",
            fig4_atom(0.01),
            8.7e-5,
            0.0058,
        ),
        make(
            "fig4-2",
            "near-threshold pumping, delta_b = +0.01 (dashed line)",
            fig4_atom(0.01),
            7e-5,
            0.0046,
        ),
        make(
            "fig4-3",
            "sub-threshold pumping, delta_b = +0.01",
            fig4_atom(0.01),
            9e-5,
            0.004,
        ),
        make(
            "fig4-4",
            "near-threshold pumping, delta_b = -0.01",
            fig4_atom(-0.01),
            7e-5,
            0.0046,
        ),
        make(
            "fig4-5",
            "near-threshold pumping, delta_b = -0.01",
            fig4_atom(-0.01),
            8.7e-5,
            0.0058,
        ),
        make(
            "fig4-6",
            "sub-threshold pumping, delta_b = -0.01",
            fig4_atom(-0.01),
            9e-5,
            0.004,
        ),
    ]
}

/// Look up a preset by name.
pub fn preset(name: &str) -> Option<Preset> {
    all().into_iter().find(|p| p.name == name)
}
