//! Rotating-frame Hamiltonian, open-system equations of motion, and the
//! dense steady-state solve — the ground-truth engine valid for arbitrary
//! detunings.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::model::{AtomParams, RelaxationModel, A, B, BP, C, CP, NLEVELS};
use crate::{Error, Result};

const DIM: usize = NLEVELS * NLEVELS;

/// Steady-state 5x5 density matrix over the basis [a, b, b', c, c'].
///
/// The trace is not 1: all levels decay to outside states and the total
/// population is set by pump/loss balance.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub rho: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.rho[(j, k)]
    }

    /// Max-norm deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..NLEVELS {
            for k in 0..NLEVELS {
                worst = worst.max((self.rho[(j, k)] - self.rho[(k, j)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest real part along the diagonal.
    pub fn min_population(&self) -> f64 {
        (0..NLEVELS)
            .map(|j| self.rho[(j, j)].re)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn trace(&self) -> Complex64 {
        (0..NLEVELS).map(|j| self.rho[(j, j)]).sum()
    }
}

/// Vectorized steady-state equations: 25x25 coefficient matrix and the
/// negated pump terms on the right-hand side.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: DMatrix<Complex64>,
    pub rhs: DVector<Complex64>,
}

fn idx(j: usize, k: usize) -> usize {
    NLEVELS * j + k
}

/// Rotating-frame Hamiltonian H/hbar in units of gamma_ab.
///
/// Diagonal [delta_p, 0, delta_b, delta, delta + delta_c] on [a, b, b', c, c']
/// with delta = delta_p - delta_mu; couplings -omega/2 on the four driven
/// transitions. Hermitian by construction.
pub fn build_hamiltonian(params: &AtomParams) -> DMatrix<Complex64> {
    let mut h = DMatrix::<Complex64>::zeros(NLEVELS, NLEVELS);
    let delta = params.two_photon_detuning();
    h[(A, A)] = Complex64::new(params.delta_p, 0.0);
    h[(BP, BP)] = Complex64::new(params.delta_b, 0.0);
    h[(C, C)] = Complex64::new(delta, 0.0);
    h[(CP, CP)] = Complex64::new(delta + params.delta_c, 0.0);

    let mut couple = |j: usize, k: usize, omega: f64| {
        let v = Complex64::new(-0.5 * omega, 0.0);
        h[(j, k)] = v;
        h[(k, j)] = v.conj();
    };
    couple(A, B, params.omega_p);
    couple(A, C, params.omega_mu);
    couple(BP, B, params.omega_b);
    couple(CP, C, params.omega_c);
    h
}

/// Vectorize 0 = -i[H, rho]_jk - gamma_jk rho_jk + r_b d_jb d_kb
/// + r_c' d_jc' d_kc' over all 25 elements.
pub fn build_equations(params: &AtomParams, relax: &RelaxationModel) -> LinearSystem {
    let h = build_hamiltonian(params);
    let mut a = DMatrix::<Complex64>::zeros(DIM, DIM);
    let mut b = DVector::<Complex64>::zeros(DIM);
    let i = Complex64::i();

    for j in 0..NLEVELS {
        for k in 0..NLEVELS {
            let row = idx(j, k);
            for l in 0..NLEVELS {
                // -i (H_jl rho_lk - rho_jl H_lk)
                a[(row, idx(l, k))] -= i * h[(j, l)];
                a[(row, idx(j, l))] += i * h[(l, k)];
            }
            a[(row, row)] -= Complex64::new(relax.gamma(j, k), 0.0);
        }
    }
    b[idx(B, B)] = Complex64::new(-relax.r_b, 0.0);
    b[idx(CP, CP)] = Complex64::new(-relax.r_cp, 0.0);

    LinearSystem { matrix: a, rhs: b }
}

/// Direct LU solve of the vectorized system with a residual check.
pub fn solve_steady_state(system: &LinearSystem) -> Result<DensityMatrix> {
    let lu = system.matrix.clone().lu();
    let x = lu
        .solve(&system.rhs)
        .ok_or(Error::SingularSystem { residual: f64::INFINITY })?;

    let residual = (&system.matrix * &x - &system.rhs)
        .iter()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max);
    let scale = system
        .rhs
        .iter()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max)
        .max(1e-30);
    if !(residual / scale < 1e-10) {
        return Err(Error::SingularSystem {
            residual: residual / scale,
        });
    }

    let mut rho = DMatrix::<Complex64>::zeros(NLEVELS, NLEVELS);
    for j in 0..NLEVELS {
        for k in 0..NLEVELS {
            rho[(j, k)] = x[idx(j, k)];
        }
    }
    Ok(DensityMatrix { rho })
}

/// Full steady-state solve for the given parameters.
pub fn steady_state(params: &AtomParams, relax: &RelaxationModel) -> Result<DensityMatrix> {
    solve_steady_state(&build_equations(params, relax))
}

/// Reduced susceptibility chi-tilde = 2 gamma_ab rho_ab / omega_p at
/// `params.delta_p`, from the full density-matrix solve.
///
/// Sign convention: in the bare two-level limit Im chi-tilde(0) = rho_bb > 0
/// (absorption positive).
pub fn susceptibility_numeric(params: &AtomParams, relax: &RelaxationModel) -> Result<Complex64> {
    let rho = steady_state(params, relax)?;
    Ok(2.0 * relax.gamma_ab() * rho.get(A, B) / params.omega_p)
}

/// Excited-state population rho_aa from the steady-state solve.
pub fn excited_population(params: &AtomParams, relax: &RelaxationModel) -> Result<f64> {
    Ok(steady_state(params, relax)?.get(A, A).re)
}

/// Order-of-magnitude estimate of rho_aa from the probe and pump pathways.
pub fn excited_population_estimate(params: &AtomParams, relax: &RelaxationModel) -> f64 {
    let gaa = relax.gamma(A, A);
    let gab = relax.gamma_ab();
    let gacp = relax.gamma(A, CP);
    let gcpcp = relax.gamma(CP, CP);
    let ratio = params.omega_c / params.omega_mu;
    let probe_part =
        params.omega_p.powi(2) / (4.0 * gaa * gab) * relax.r_b / (2.0 * relax.gamma(B, B));
    let pump_part = params.omega_mu / (4.0 * gaa) * ratio * relax.r_cp
        / (2.0 * gacp * ratio.powi(2) + gcpcp);
    probe_part + pump_part
}
