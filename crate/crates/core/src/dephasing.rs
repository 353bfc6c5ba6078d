//! The pure-dephasing channel model.
//!
//! A channel is a family of environment unitaries `{V_i}`, one per reference
//! basis state, and an environment state `rho_E`. All observable action on
//! the system is captured by the dephasing factor matrix
//! `Phi[i][j] = Tr(V_i rho_E V_j†)`, which multiplies the system coherences
//! entrywise and leaves populations unchanged.

use crate::error::{Error, Result};
use crate::qmat::{self, c, CMatrix, Complex64};

/// Unitarity tolerance for channel validation.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Lowest admissible eigenvalue for PSD validation of a factor matrix.
pub const PSD_TOL: f64 = 1e-9;

/// A validated pure-dephasing channel.
#[derive(Debug, Clone)]
pub struct PureDephasingChannel {
    v: Vec<CMatrix>,
    rho_e: CMatrix,
}

impl PureDephasingChannel {
    /// Builds a channel from environment unitaries and an environment state.
    pub fn new(v: Vec<CMatrix>, rho_e: CMatrix) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "unitary list",
                expected: 1,
                actual: 0,
            });
        }
        let d_e = rho_e.nrows();
        for (index, u) in v.iter().enumerate() {
            if u.nrows() != d_e || u.ncols() != d_e {
                return Err(Error::DimensionMismatch {
                    context: "environment unitary",
                    expected: d_e,
                    actual: u.nrows(),
                });
            }
            let dev = qmat::max_abs(&(u * u.adjoint() - qmat::identity(d_e)));
            if dev > UNITARITY_TOL {
                return Err(Error::NonUnitary {
                    index,
                    deviation: dev,
                });
            }
        }
        qmat::check_state(&rho_e, PSD_TOL)?;
        Ok(Self { v, rho_e })
    }

    pub fn d_system(&self) -> usize {
        self.v.len()
    }

    pub fn d_env(&self) -> usize {
        self.rho_e.nrows()
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.v
    }

    pub fn env_state(&self) -> &CMatrix {
        &self.rho_e
    }

    /// `V_i rho_E V_j†`, the (i,j) environment block of the evolved state.
    pub fn env_block(&self, i: usize, j: usize) -> CMatrix {
        &self.v[i] * &self.rho_e * self.v[j].adjoint()
    }

    /// The dephasing factor matrix `Phi[i][j] = Tr(V_i rho_E V_j†)`.
    pub fn dephasing_matrix(&self) -> DephasingFactorMatrix {
        let d = self.d_system();
        let mut phi = CMatrix::zeros(d, d);
        // Tr(V_i rho V_j†) = Σ_kl (V_i rho)[k,l] conj(V_j[k,l])
        let blocks: Vec<CMatrix> = self.v.iter().map(|u| u * &self.rho_e).collect();
        for i in 0..d {
            for j in 0..=i {
                let s: Complex64 = blocks[i]
                    .iter()
                    .zip(self.v[j].iter())
                    .map(|(b, v)| b * v.conj())
                    .sum();
                phi[(i, j)] = s;
                phi[(j, i)] = s.conj();
            }
        }
        DephasingFactorMatrix::new(phi).expect("valid channel induces a valid factor matrix")
    }
}

/// The Gram-type matrix of dephasing factors; a channel's complete description.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasingFactorMatrix {
    phi: CMatrix,
}

impl DephasingFactorMatrix {
    /// Validates Hermiticity, PSD, unit diagonal and bounded off-diagonals.
    pub fn new(phi: CMatrix) -> Result<Self> {
        if phi.nrows() != phi.ncols() {
            return Err(Error::NonSquare {
                rows: phi.nrows(),
                cols: phi.ncols(),
            });
        }
        let dev = qmat::hermiticity_deviation(&phi);
        if dev > 1e-9 {
            return Err(Error::NonHermitianInput { deviation: dev });
        }
        for i in 0..phi.nrows() {
            if (phi[(i, i)] - c(1., 0.)).norm() > 1e-9 {
                return Err(Error::InvalidInput {
                    path: format!("phi[{i}][{i}]"),
                    reason: "diagonal entry must be 1".into(),
                });
            }
            for j in 0..phi.ncols() {
                if phi[(i, j)].norm() > 1.0 + 1e-9 {
                    return Err(Error::InvalidInput {
                        path: format!("phi[{i}][{j}]"),
                        reason: format!("|phi| = {} exceeds 1", phi[(i, j)].norm()),
                    });
                }
            }
        }
        let (vals, _) = qmat::hermitian_eig(&phi)?;
        if vals.last().copied().unwrap_or(0.0) < -PSD_TOL {
            return Err(Error::InvalidInput {
                path: "phi".into(),
                reason: format!("not PSD (min eigenvalue {})", vals.last().unwrap()),
            });
        }
        Ok(Self { phi })
    }

    pub fn d_system(&self) -> usize {
        self.phi.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.phi
    }

    /// All-ones factor matrix (identity channel).
    pub fn all_ones(d: usize) -> Self {
        Self {
            phi: CMatrix::from_element(d, d, c(1., 0.)),
        }
    }
}

/// Joint state after evolution: `Σ_ij rho_S[i][j] |i><j| ⊗ V_i rho_E V_j†`.
pub fn evolve_joint(ch: &PureDephasingChannel, rho_s: &CMatrix) -> Result<CMatrix> {
    let d_s = ch.d_system();
    let d_e = ch.d_env();
    if rho_s.nrows() != d_s || rho_s.ncols() != d_s {
        return Err(Error::DimensionMismatch {
            context: "system state",
            expected: d_s,
            actual: rho_s.nrows(),
        });
    }
    let mut out = CMatrix::zeros(d_s * d_e, d_s * d_e);
    for i in 0..d_s {
        for j in 0..d_s {
            let block = ch.env_block(i, j) * rho_s[(i, j)];
            out.view_mut((i * d_e, j * d_e), (d_e, d_e)).copy_from(&block);
        }
    }
    Ok(out)
}

/// Channel action on a system state: `rho'[i][j] = Phi[i][j] * rho[i][j]`.
pub fn apply_channel(phi: &DephasingFactorMatrix, rho_s: &CMatrix) -> Result<CMatrix> {
    let d = phi.d_system();
    if rho_s.nrows() != d || rho_s.ncols() != d {
        return Err(Error::DimensionMismatch {
            context: "system state",
            expected: d,
            actual: rho_s.nrows(),
        });
    }
    Ok(CMatrix::from_fn(d, d, |i, j| {
        phi.matrix()[(i, j)] * rho_s[(i, j)]
    }))
}

/// Choi state in its maximally correlated compression: `Phi / d_S`.
///
/// The full Choi state of a dephasing channel is supported on span{|mm>},
/// where it equals this d_S x d_S matrix; the compression carries the whole
/// nonzero spectrum.
pub fn choi_state(phi: &DephasingFactorMatrix) -> CMatrix {
    let d = phi.d_system() as f64;
    phi.matrix() / c(d, 0.)
}

/// Full `d²x d²` Choi embedding; cross-validation only.
pub fn choi_embedding(phi: &DephasingFactorMatrix) -> CMatrix {
    let d = phi.d_system();
    let mut out = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            out[(i * d + i, j * d + j)] = phi.matrix()[(i, j)] / c(d as f64, 0.);
        }
    }
    out
}
