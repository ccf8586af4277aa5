//! Gaussian inhomogeneous averaging of chi-tilde over the two-photon
//! detuning delta and/or the probe detuning delta_p, via feature-resolving
//! composite quadrature.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::liouvillian::susceptibility_numeric;
use crate::model::{AtomParams, RelaxationModel};
use crate::{Error, Result};

/// Gaussian broadening widths and quadrature order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DopplerSpec {
    /// Width of the two-photon detuning distribution; 0 disables.
    #[serde(default)]
    pub sigma_delta: f64,
    /// Width of the probe-only detuning distribution; 0 disables.
    #[serde(default)]
    pub sigma_probe: f64,
    /// Number of Gauss-Hermite nodes (odd, >= 3).
    #[serde(default = "default_order")]
    pub quadrature_order: usize,
}

fn default_order() -> usize {
    41
}

impl Default for DopplerSpec {
    fn default() -> Self {
        DopplerSpec {
            sigma_delta: 0.0,
            sigma_probe: 0.0,
            quadrature_order: default_order(),
        }
    }
}

impl DopplerSpec {
    pub fn validate(&self) -> Result<()> {
        if self.sigma_delta < 0.0 || self.sigma_probe < 0.0 {
            return Err(Error::InvalidDoppler("sigma must be >= 0".into()));
        }
        if self.quadrature_order < 3 || self.quadrature_order % 2 == 0 {
            return Err(Error::InvalidDoppler(format!(
                "quadrature_order must be odd and >= 3, got {}",
                self.quadrature_order
            )));
        }
        Ok(())
    }

    pub fn is_active(&self) -> bool {
        self.sigma_delta > 0.0 || self.sigma_probe > 0.0
    }
}

/// Gauss-Hermite nodes and weights via the Golub-Welsch eigenproblem,
/// normalized so that the weights average a standard normal density
/// (weights sum to 1, nodes in units of the standard deviation 1).
pub fn normal_quadrature(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    // Jacobi matrix of the Hermite recurrence: zero diagonal,
    // off-diagonal sqrt(i/2).
    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for i in 1..order {
        let beta = (i as f64 / 2.0).sqrt();
        jacobi[(i, i - 1)] = beta;
        jacobi[(i - 1, i)] = beta;
    }
    let eigen = jacobi.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|k| {
            let node = eigen.eigenvalues[k];
            let weight = eigen.eigenvectors[(0, k)].powi(2);
            // Physicists' node x maps to a normal deviate sqrt(2) x.
            (std::f64::consts::SQRT_2 * node, weight)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    let nodes = pairs.iter().map(|p| p.0).collect();
    let weights = pairs.iter().map(|p| p.1 / total).collect();
    (nodes, weights)
}

/// Gauss-Legendre nodes and weights on [-1, 1] via Golub-Welsch.
pub fn legendre_quadrature(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for i in 1..order {
        let k = i as f64;
        let beta = k / (4.0 * k * k - 1.0).sqrt();
        jacobi[(i, i - 1)] = beta;
        jacobi[(i - 1, i)] = beta;
    }
    let eigen = jacobi.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|k| (eigen.eigenvalues[k], 2.0 * eigen.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    (
        pairs.iter().map(|p| p.0).collect(),
        pairs.iter().map(|p| p.1).collect(),
    )
}

/// Quadrature shifts (node, weight) for a zero-mean normal of width `sigma`.
///
/// The response carries lines as narrow as `feature`, which a global
/// Gauss-Hermite rule cannot resolve once sigma greatly exceeds the line
/// width. Instead, the +-8 sigma support is cut into panels no wider than
/// half the smaller of sigma and `feature`, with a density-weighted
/// Gauss-Legendre rule per panel; weights are renormalized to sum to one so
/// a constant integrand averages exactly.
fn shifts(sigma: f64, feature: f64, order: usize) -> Vec<(f64, f64)> {
    if sigma == 0.0 {
        return vec![(0.0, 1.0)];
    }
    let span = 8.0 * sigma;
    let resolve = 0.5 * sigma.min(feature.max(1e-3 * sigma));
    let panels = ((2.0 * span / resolve).ceil() as usize).clamp(16, 4096);
    let per_panel = (order / 8).max(3);
    let (gl_nodes, gl_weights) = legendre_quadrature(per_panel);

    let mut out = Vec::with_capacity(panels * per_panel);
    let width = 2.0 * span / panels as f64;
    for p in 0..panels {
        let left = -span + width * p as f64;
        let center = left + 0.5 * width;
        for (&x, &w) in gl_nodes.iter().zip(&gl_weights) {
            let s = center + 0.5 * width * x;
            let pdf = (-0.5 * (s / sigma).powi(2)).exp();
            out.push((s, w * pdf));
        }
    }
    let total: f64 = out.iter().map(|p| p.1).sum();
    for pair in &mut out {
        pair.1 /= total;
    }
    out
}

/// Doppler-averaged chi-tilde at `params.delta_p`, always through the
/// numeric backend (the detuning shifts leave the closed form's
/// delta_mu = 0 domain).
///
/// A delta shift s moves the {|c>, |c'>} diagonal block (delta_mu -> -s at
/// fixed delta_p); a probe-only shift co-shifts delta_p and delta_mu so the
/// two-photon detuning stays fixed.
pub fn average_chi(
    params: &AtomParams,
    relax: &RelaxationModel,
    spec: &DopplerSpec,
) -> Result<Complex64> {
    spec.validate()?;
    // Narrowest structure along each axis: the gain line width for the
    // two-photon detuning, the bare line width for the probe detuning.
    let delta_feature = crate::analytic::gain_linewidth(params, relax);
    let probe_feature = relax.gamma_ab();
    let delta_shifts = shifts(spec.sigma_delta, delta_feature, spec.quadrature_order);
    let probe_shifts = shifts(spec.sigma_probe, probe_feature, spec.quadrature_order);

    let mut acc = Complex64::ZERO;
    for &(sd, wd) in &delta_shifts {
        for &(sp, wp) in &probe_shifts {
            let shifted = AtomParams {
                delta_p: params.delta_p + sp,
                delta_mu: params.delta_mu - sd + sp,
                ..*params
            };
            acc += wd * wp * susceptibility_numeric(&shifted, relax)?;
        }
    }
    Ok(acc)
}
