//! Closed-form resonant susceptibility chi-tilde = X+ - X- and the auxiliary
//! population, coherence, and dressed-state formulas, valid for
//! delta_mu = delta_c = 0 and perturbative omega_c / omega_mu.

use num_complex::Complex64;

use crate::model::{AtomParams, RelaxationModel, A, B, BP, CP};
use crate::{Error, Result};

/// Dimensionless combinations entering the closed-form expressions.
#[derive(Debug, Clone, Copy)]
pub struct ReducedParams {
    /// eta = 2 gamma_ab / omega_mu.
    pub eta: f64,
    /// c = omega_c / omega_mu.
    pub c: f64,
    /// b = sqrt(omega_b^2 + delta_b^2) / omega_mu.
    pub b: f64,
    /// eps1 = 2 gamma_C / omega_mu.
    pub eps1: f64,
    /// eps2 = 2 gamma_C' / omega_mu.
    pub eps2: f64,
    /// a = (delta_p - delta_b/2) / omega_mu.
    pub a: f64,
    /// a+ = -2a - b.
    pub a_plus: f64,
    /// a- = -2a + b.
    pub a_minus: f64,
}

impl ReducedParams {
    pub fn new(params: &AtomParams, relax: &RelaxationModel) -> Self {
        let omega_mu = params.omega_mu;
        let a = (params.delta_p - params.delta_b / 2.0) / omega_mu;
        let b = (params.omega_b.powi(2) + params.delta_b.powi(2)).sqrt() / omega_mu;
        ReducedParams {
            eta: 2.0 * relax.gamma_ab() / omega_mu,
            c: params.omega_c / omega_mu,
            b,
            eps1: 2.0 * relax.gamma_c_upper() / omega_mu,
            eps2: 2.0 * relax.gamma_cp_upper() / omega_mu,
            a,
            a_plus: -2.0 * a - b,
            a_minus: -2.0 * a + b,
        }
    }
}

/// Dressing angle theta_b and the projections of the steady-state
/// populations/coherence onto the RF-dressed doublet.
#[derive(Debug, Clone, Copy)]
pub struct DressedPopulations {
    pub theta_b: f64,
    pub p_b_plus: Complex64,
    pub p_b_minus: Complex64,
    pub p_c_plus: Complex64,
    pub p_c_minus: Complex64,
    pub rho_bb: f64,
    pub rho_bbp: Complex64,
    pub rho_cpcp: f64,
}

/// Steady-state population of the pumped state |c'>, to lowest order in
/// omega_c / omega_mu.
pub fn population_cpcp(params: &AtomParams, relax: &RelaxationModel) -> Result<f64> {
    let den = 2.0 * relax.gamma(A, CP) * params.omega_c.powi(2)
        + relax.gamma(CP, CP) * params.omega_mu.powi(2);
    if den <= 0.0 {
        return Err(Error::DegenerateRelaxation(
            "2 gamma_c'a omega_c^2 + gamma_c'c' omega_mu^2 vanishes".into(),
        ));
    }
    Ok(relax.r_cp * params.omega_mu.powi(2) / den)
}

fn bb_denominator(params: &AtomParams, relax: &RelaxationModel) -> Result<f64> {
    let g_bb = relax.gamma(B, B);
    let g_bpbp = relax.gamma(BP, BP);
    let g_bbp = relax.gamma(B, BP);
    let den = 2.0 * g_bb * g_bpbp * (g_bbp.powi(2) + params.delta_b.powi(2))
        + (g_bb + g_bpbp) * g_bbp * params.omega_b.powi(2);
    if den <= 0.0 {
        return Err(Error::DegenerateRelaxation(
            "b/b' population denominator vanishes".into(),
        ));
    }
    Ok(den)
}

/// Steady-state population of |b> under RF dressing and pumping.
pub fn population_bb(params: &AtomParams, relax: &RelaxationModel) -> Result<f64> {
    let g_bpbp = relax.gamma(BP, BP);
    let g_bbp = relax.gamma(B, BP);
    let den = bb_denominator(params, relax)?;
    let num = relax.r_b
        * (2.0 * g_bpbp * (g_bbp.powi(2) + params.delta_b.powi(2))
            + g_bbp * params.omega_b.powi(2));
    Ok(num / den)
}

/// Steady-state coherence rho_bb' (complex; pure imaginary on RF resonance).
pub fn coherence_bbp(params: &AtomParams, relax: &RelaxationModel) -> Result<Complex64> {
    let g_bpbp = relax.gamma(BP, BP);
    let g_bbp = relax.gamma(B, BP);
    let den = bb_denominator(params, relax)?;
    let num = relax.r_b
        * g_bpbp
        * Complex64::new(params.delta_b, -g_bbp)
        * params.omega_b;
    Ok(num / den)
}

/// Dressing angle on the branch continuous with pi/4 at delta_b = 0.
pub fn dressing_angle(params: &AtomParams) -> Result<f64> {
    if params.omega_b == 0.0 && params.delta_b == 0.0 {
        return Err(Error::DegenerateDressing);
    }
    Ok(0.5 * params.omega_b.atan2(params.delta_b))
}

/// Populate theta_b and the four projections P_B^+-, P_C^+-.
pub fn dressed_projections(
    params: &AtomParams,
    relax: &RelaxationModel,
) -> Result<DressedPopulations> {
    let theta_b = dressing_angle(params)?;
    let rho_bb = population_bb(params, relax)?;
    let rho_bbp = coherence_bbp(params, relax)?;
    let rho_cpcp = population_cpcp(params, relax)?;
    let (sin, cos) = theta_b.sin_cos();
    let cos2 = cos * cos;
    let sin2 = sin * sin;
    let cross = sin * cos;
    Ok(DressedPopulations {
        theta_b,
        p_b_plus: -cos2 * rho_bb - cross * rho_bbp,
        p_b_minus: sin2 * rho_bb - cross * rho_bbp,
        p_c_plus: Complex64::new(-cos2 * rho_cpcp, 0.0),
        p_c_minus: Complex64::new(sin2 * rho_cpcp, 0.0),
        rho_bb,
        rho_bbp,
        rho_cpcp,
    })
}

fn x_branch(red: &ReducedParams, a_pm: f64, p_b: Complex64, p_c: Complex64) -> Complex64 {
    let i = Complex64::i();
    let f1 = i * red.eps1 + a_pm;
    let f2 = i * red.eps2 + a_pm;
    let c2 = red.c * red.c;
    let num = p_b * f1 * f2 - c2 * (p_b - p_c);
    let den = f2 - (i * red.eta + a_pm) * (f1 * f2 - c2);
    -red.eta * num / den
}

/// Closed-form reduced susceptibility chi-tilde = X+ - X-.
///
/// Only valid on the delta_mu = delta_c = 0 domain; use the numeric backend
/// elsewhere.
pub fn chi_analytic(params: &AtomParams, relax: &RelaxationModel) -> Result<Complex64> {
    if params.delta_mu != 0.0 || params.delta_c != 0.0 {
        return Err(Error::Domain(format!(
            "closed form requires delta_mu = delta_c = 0 (got delta_mu = {}, delta_c = {})",
            params.delta_mu, params.delta_c
        )));
    }
    let dressed = dressed_projections(params, relax)?;
    let red = ReducedParams::new(params, relax);
    let x_plus = x_branch(&red, red.a_plus, dressed.p_b_plus, dressed.p_c_plus);
    let x_minus = x_branch(&red, red.a_minus, dressed.p_b_minus, dressed.p_c_minus);
    Ok(x_plus - x_minus)
}

/// Pumping-ratio threshold r_c'/r_b above which the narrow lines amplify.
pub fn gain_threshold(params: &AtomParams, relax: &RelaxationModel) -> Result<f64> {
    let den = (relax.gamma(B, B) + relax.gamma(BP, BP)) * params.omega_mu.powi(2);
    if den <= 0.0 {
        return Err(Error::DegenerateRelaxation(
            "(gamma_bb + gamma_b'b') omega_mu^2 vanishes".into(),
        ));
    }
    Ok((2.0 * relax.gamma(A, CP) * params.omega_c.powi(2)
        + relax.gamma_cp_upper() * params.omega_mu.powi(2))
        / den)
}

/// Gain-line width Gamma = gamma_ab (omega_c/omega_mu)^2 + gamma_C'.
pub fn gain_linewidth(params: &AtomParams, relax: &RelaxationModel) -> f64 {
    relax.gamma_ab() * (params.omega_c / params.omega_mu).powi(2) + relax.gamma_cp_upper()
}
