//! Entanglement and discord certification from the reduced channel.
//!
//! The separability criteria operate on the channel's environment operators:
//! zero discord requires all `V_i rho_E V_j†` to commute; separability splits
//! into a qubit-like condition (all `V_i rho_E V_i†` equal a common `R`) and a
//! qutrit-like condition on the commutators `R [V_i V_j†, V_k V_l†] R`. The
//! quantitative witness is the non-mixed-unitarity measure `Q_A`, computed in
//! [`eoa`] from the entanglement of assistance of the channel's Choi state.

mod eoa;

pub use eoa::{
    entanglement_of_assistance, mu_baseline, q_a, random_decomposition_search, EoaOptions,
    EoaResult, LogBase, MuBaseline, QaOptions, WitnessReport,
};

use serde::Serialize;

use crate::dephasing::PureDephasingChannel;
use crate::error::{Error, Result};
use crate::qmat::{self, c, CMatrix, Complex64, Subsystem};

/// Default absolute tolerance (operator norm) for the criteria checks.
pub const CRITERIA_TOL: f64 = 1e-8;

/// Outcome of one separability/discord criterion.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CheckResult {
    pub pass: bool,
    /// Largest operator-norm violation found.
    pub violation: f64,
    pub tol: f64,
}

impl CheckResult {
    fn from_violation(violation: f64, tol: f64) -> Self {
        Self {
            pass: violation <= tol,
            violation,
            tol,
        }
    }
}

/// All criteria for one channel.
#[derive(Debug, Clone, Serialize)]
pub struct CriteriaReport {
    pub zero_discord: CheckResult,
    pub qubit_like: CheckResult,
    pub qutrit_like: CheckResult,
    /// The qutrit-like check used `R = V_0 rho_E V_0†` although the
    /// qubit-like condition failed, so `R` is not the common branch value.
    pub qutrit_r_from_branch0: bool,
    pub tol: f64,
}

/// Zero-discord condition: `[V_i rho V_j†, V_k rho V_l†] = 0` for all indices.
pub fn zero_discord_check(ch: &PureDephasingChannel, tol: f64) -> CheckResult {
    let d = ch.d_system();
    let mut blocks = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            blocks.push(ch.env_block(i, j));
        }
    }
    let mut worst: f64 = 0.0;
    for (a, ba) in blocks.iter().enumerate() {
        for bb in blocks.iter().skip(a + 1) {
            let comm = ba * bb - bb * ba;
            worst = worst.max(qmat::operator_norm(&comm));
        }
    }
    CheckResult::from_violation(worst, tol)
}

/// Qubit-like condition: all `V_i rho V_i†` coincide. Returns the branch-0
/// value `R`, which is the common value whenever the check passes.
pub fn qubit_like_check(ch: &PureDephasingChannel, tol: f64) -> (CheckResult, CMatrix) {
    let d = ch.d_system();
    let rs: Vec<CMatrix> = (0..d).map(|i| ch.env_block(i, i)).collect();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            worst = worst.max(qmat::operator_norm(&(&rs[i] - &rs[j])));
        }
    }
    (CheckResult::from_violation(worst, tol), rs[0].clone())
}

/// Corrected qutrit-like condition: `R [V_i V_j†, V_k V_l†] R = 0`.
pub fn qutrit_like_check(ch: &PureDephasingChannel, tol: f64) -> CheckResult {
    let (_, r) = qubit_like_check(ch, tol);
    qutrit_like_check_with_r(ch, &r, tol)
}

fn qutrit_like_check_with_r(ch: &PureDephasingChannel, r: &CMatrix, tol: f64) -> CheckResult {
    let d = ch.d_system();
    let mut ys = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            ys.push(&ch.unitaries()[i] * ch.unitaries()[j].adjoint());
        }
    }
    let mut worst: f64 = 0.0;
    for (a, ya) in ys.iter().enumerate() {
        for yb in ys.iter().skip(a + 1) {
            let comm = ya * yb - yb * ya;
            worst = worst.max(qmat::operator_norm(&(r * comm * r)));
        }
    }
    CheckResult::from_violation(worst, tol)
}

/// Runs all criteria at the given tolerance.
pub fn criteria_report(ch: &PureDephasingChannel, tol: f64) -> CriteriaReport {
    let zero_discord = zero_discord_check(ch, tol);
    let (qubit_like, r) = qubit_like_check(ch, tol);
    let qutrit_like = qutrit_like_check_with_r(ch, &r, tol);
    CriteriaReport {
        zero_discord,
        qubit_like,
        qutrit_like,
        qutrit_r_from_branch0: !qubit_like.pass,
        tol,
    }
}

/// One principal minor `D_{(nm);(nm')}` of the partially transposed joint state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PrincipalMinor {
    /// Index of the eigenvalue block of `R`.
    pub n: usize,
    pub m: usize,
    pub m_prime: usize,
    pub value: f64,
}

/// Principal minors certifying entanglement for a qutrit system with pure
/// input amplitudes `c`; any value below `-tol` certifies entanglement.
///
/// `R` is eigendecomposed into blocks `(q_n, Pi_n)`; within each block the
/// unitary `Y_01 = V_0 V_1†` is diagonalized (phases `theta_m`), `x_{mm'}`
/// are the block matrix elements of `Y_02`, and
/// `D = -2 |c0 c1 c2|^2 q_n^3 |x_{mm'}|^2 (1 - cos(theta_m - theta_m'))`.
pub fn qutrit_principal_minors(
    ch: &PureDephasingChannel,
    amplitudes: &[Complex64; 3],
) -> Result<Vec<PrincipalMinor>> {
    if ch.d_system() != 3 {
        return Err(Error::DimensionMismatch {
            context: "qutrit principal minors",
            expected: 3,
            actual: ch.d_system(),
        });
    }
    let coeff = amplitudes.iter().map(|a| a.norm_sqr()).product::<f64>();
    let (_, r) = qubit_like_check(ch, CRITERIA_TOL);
    let y01 = &ch.unitaries()[0] * ch.unitaries()[1].adjoint();
    let y02 = &ch.unitaries()[0] * ch.unitaries()[2].adjoint();

    let (vals, vecs) = qmat::hermitian_eig(&r)?;
    let blocks = cluster(&vals, 1e-8);

    let mut minors = Vec::new();
    for (n, block) in blocks.iter().enumerate() {
        let q_n = vals[block[0]];
        if q_n <= 1e-12 {
            continue; // orthogonal to the support of R
        }
        let basis = columns(&vecs, block);
        // diagonalize the unitary block of Y01 on this eigenspace
        let y01_block = basis.adjoint() * &y01 * &basis;
        let w = diagonalize_unitary(&y01_block)?;
        let eigvecs = &basis * w; // columns |e_nm> in the full space
        let dim = block.len();
        let thetas: Vec<f64> = (0..dim)
            .map(|m| {
                let v = eigvecs.column(m);
                (v.adjoint() * &y01 * v)[(0, 0)].arg()
            })
            .collect();
        for m in 0..dim {
            for mp in 0..dim {
                if m == mp {
                    continue;
                }
                let x = (eigvecs.column(m).adjoint() * &y02 * eigvecs.column(mp))[(0, 0)];
                let value = -2.0
                    * coeff
                    * q_n.powi(3)
                    * x.norm_sqr()
                    * (1.0 - (thetas[m] - thetas[mp]).cos());
                minors.push(PrincipalMinor {
                    n,
                    m,
                    m_prime: mp,
                    value,
                });
            }
        }
    }
    Ok(minors)
}

/// Groups indices of a descending value list into clusters within `tol`.
fn cluster(vals: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (k, &v) in vals.iter().enumerate() {
        match out.last_mut() {
            Some(block) if (vals[block[0]] - v).abs() <= tol => block.push(k),
            _ => out.push(vec![k]),
        }
    }
    out
}

fn columns(m: &CMatrix, idx: &[usize]) -> CMatrix {
    let mut out = CMatrix::zeros(m.nrows(), idx.len());
    for (c_, &k) in idx.iter().enumerate() {
        out.set_column(c_, &m.column(k));
    }
    out
}

/// Unitary diagonalization of a (near-)unitary matrix via its commuting
/// Hermitian and anti-Hermitian parts. Returns the eigenvector columns.
fn diagonalize_unitary(u: &CMatrix) -> Result<CMatrix> {
    let n = u.nrows();
    if n == 1 {
        return Ok(qmat::identity(1));
    }
    let re = (u + u.adjoint()).scale(0.5);
    let im = (u - u.adjoint()).map(|z| z * c(0., -0.5));
    let (a_vals, a_vecs) = qmat::hermitian_eig(&re)?;
    let groups = cluster(&a_vals, 1e-8);
    let mut out = CMatrix::zeros(n, n);
    let mut col = 0;
    for g in groups {
        let basis = columns(&a_vecs, &g);
        if g.len() == 1 {
            out.set_column(col, &basis.column(0));
            col += 1;
            continue;
        }
        let sub = basis.adjoint() * &im * &basis;
        let (_, b_vecs) = qmat::hermitian_eig(&sub)?;
        let joint = &basis * b_vecs;
        for k in 0..g.len() {
            out.set_column(col, &joint.column(k));
            col += 1;
        }
    }
    Ok(out)
}

/// Negativity `(||rho^{T_A}||_1 - 1) / 2` of a bipartite state.
pub fn negativity(rho: &CMatrix, dims: (usize, usize)) -> Result<f64> {
    qmat::check_state(rho, 1e-8)?;
    let pt = qmat::partial_transpose(rho, dims, Subsystem::A)?;
    Ok(((qmat::trace_norm(&pt)? - 1.0) / 2.0).max(0.0))
}
