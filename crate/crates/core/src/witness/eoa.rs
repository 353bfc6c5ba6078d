//! Entanglement of assistance of a dephasing Choi state, by Riemannian
//! gradient ascent over pure-state decompositions, and the derived
//! non-mixed-unitarity measure `Q_A`.
//!
//! The compressed Choi state `rho = Phi / d` has spectral factor `B` with
//! columns `sqrt(lambda_k) u_k` (support rank `r`). Every size-`K`
//! decomposition `rho = Σ_i |psi~_i><psi~_i|` corresponds to an isometry
//! `W` (`K x r`, `W†W = I`) through `psi~_i = Σ_k W[i][k] B[:,k]`. Because
//! all decomposition vectors live in the maximally correlated subspace, the
//! average entanglement entropy reduces to
//!
//! ```text
//! F(W) = Σ_i p_i H(|psi~_i|^2 / p_i),   p_i = ||psi~_i||^2,
//! ```
//!
//! a smooth function on the complex Stiefel manifold. `F` is maximized by
//! projected gradient ascent with QR retraction and Armijo backtracking,
//! restarted from independent Haar-random isometries. The best value is a
//! certified lower bound on the entanglement of assistance, so
//! `Q_A = log d - F_best` is an upper... conservative estimate that
//! over-reports when under-converged; reports therefore carry convergence
//! diagnostics and an optimizer-floor calibration over random mixed-unitary
//! channels.

use rayon::prelude::*;
use serde::Serialize;

use crate::dephasing::DephasingFactorMatrix;
use crate::error::{Error, Result};
use crate::qmat::{self, c, CMatrix, Complex64};

use super::CriteriaReport;

const STREAM_RESTART: u64 = 0x72657374;
const STREAM_BASELINE: u64 = 0x6261_7365;
const STREAM_SEARCH: u64 = 0x73726368;

/// Logarithm base for entropies; `Two` yields bits, `E` nats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum LogBase {
    #[default]
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    pub fn ln_base(self) -> f64 {
        match self {
            LogBase::Two => std::f64::consts::LN_2,
            LogBase::E => 1.0,
        }
    }

    /// `log d` in this base.
    pub fn log(self, x: f64) -> f64 {
        x.ln() / self.ln_base()
    }
}

#[derive(Debug, Clone)]
pub struct EoaOptions {
    pub log_base: LogBase,
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop when the Riemannian gradient norm falls below this.
    pub grad_tol: f64,
    /// Stop when the relative objective gain over `stall_window` iterations
    /// falls below this.
    pub rel_obj_tol: f64,
    pub stall_window: usize,
    /// Decomposition size; defaults to `max(r^2, d)`.
    pub ensemble_size: Option<usize>,
    /// Eigenvalues of `Phi/d` below this are treated as zero.
    pub rank_cutoff: f64,
    pub seed: u64,
    /// Record the per-iteration objective of the best restart.
    pub record_trace: bool,
}

impl Default for EoaOptions {
    fn default() -> Self {
        Self {
            log_base: LogBase::Two,
            restarts: 16,
            max_iters: 20_000,
            grad_tol: 1e-10,
            rel_obj_tol: 1e-13,
            stall_window: 50,
            ensemble_size: None,
            rank_cutoff: 1e-12,
            seed: 0,
            record_trace: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EoaResult {
    /// Certified lower bound on the entanglement of assistance, in the
    /// configured log base.
    pub e_a_lower_bound: f64,
    pub ensemble_size: usize,
    pub support_rank: usize,
    pub restarts_used: usize,
    pub best_restart: usize,
    pub converged: bool,
    pub grad_norm: f64,
    pub iterations: usize,
    /// Ensemble weights of the best decomposition found.
    pub weights: Vec<f64>,
    /// Normalized ensemble vectors (compressed d-dimensional representation).
    #[serde(skip)]
    pub vectors: Vec<crate::CVector>,
    #[serde(skip)]
    pub objective_trace: Option<Vec<f64>>,
}

struct Spectral {
    b: CMatrix, // d x r, columns sqrt(lambda_k) u_k
    rank: usize,
}

fn spectral_factor(phi: &DephasingFactorMatrix, cutoff: f64) -> Result<Spectral> {
    let d = phi.d_system();
    let rho = phi.matrix() / c(d as f64, 0.);
    let (vals, vecs) = qmat::hermitian_eig(&rho)?;
    let rank = vals.iter().take_while(|&&l| l > cutoff).count().max(1);
    let mut b = CMatrix::zeros(d, rank);
    for k in 0..rank {
        let col = vecs.column(k) * c(vals[k].max(0.0).sqrt(), 0.);
        b.set_column(k, &col);
    }
    Ok(Spectral { b, rank })
}

/// Objective in nats. `g_buf` receives `W B^T` for reuse.
fn objective(w: &CMatrix, b_t: &CMatrix, g_buf: &mut CMatrix) -> f64 {
    w.mul_to(b_t, g_buf);
    let mut f = 0.0;
    for i in 0..g_buf.nrows() {
        let mut p = 0.0;
        let mut row_term = 0.0;
        for m in 0..g_buf.ncols() {
            let a = g_buf[(i, m)].norm_sqr();
            p += a;
            if a > 1e-300 {
                row_term -= a * a.ln();
            }
        }
        if p > 1e-300 {
            f += row_term + p * p.ln();
        }
    }
    f
}

/// Euclidean gradient dF/dW* given G = W B^T already computed.
fn euclidean_grad(g: &CMatrix, b_conj: &CMatrix) -> CMatrix {
    let mut eg = CMatrix::zeros(g.nrows(), g.ncols());
    for i in 0..g.nrows() {
        let mut p = 0.0;
        for m in 0..g.ncols() {
            p += g[(i, m)].norm_sqr();
        }
        if p <= 1e-300 {
            continue;
        }
        for m in 0..g.ncols() {
            let a = g[(i, m)].norm_sqr();
            if a > 1e-300 {
                eg[(i, m)] = g[(i, m)] * c((p / a).ln(), 0.);
            }
        }
    }
    eg * b_conj
}

/// Projects an ambient gradient onto the tangent space at `w`.
fn riemannian_grad(w: &CMatrix, eg: &CMatrix) -> CMatrix {
    let sym = w.adjoint() * eg;
    let herm = (&sym + sym.adjoint()).scale(0.5);
    eg - w * herm
}

/// QR retraction with phase-fixed R diagonal.
fn retract(y: CMatrix) -> CMatrix {
    let r_cols = y.ncols();
    let qr = y.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..r_cols {
        let rkk = r[(k, k)];
        if rkk.norm() > 0.0 {
            let col = q.column(k) * (rkk / rkk.norm());
            q.set_column(k, &col);
        }
    }
    q
}

fn haar_isometry(k: usize, r: usize, rng: &mut impl rand::Rng) -> CMatrix {
    retract(qmat::ginibre_rng(k, r, rng))
}

struct AscentOutcome {
    value: f64, // nats
    w: CMatrix,
    converged: bool,
    grad_norm: f64,
    iterations: usize,
    trace: Option<Vec<f64>>,
}

fn ascend(spec: &Spectral, k: usize, seed: u64, opts: &EoaOptions) -> Result<AscentOutcome> {
    let b_t = spec.b.transpose();
    let b_conj = spec.b.conjugate();
    let mut rng = qmat::rng_from_seed(seed);
    let mut w = haar_isometry(k, spec.rank, &mut rng);
    let mut g = CMatrix::zeros(k, b_t.ncols());
    let mut f = objective(&w, &b_t, &mut g);
    let mut alpha = 1.0f64;
    let mut trace = opts.record_trace.then(|| vec![f]);
    let mut hist = std::collections::VecDeque::with_capacity(opts.stall_window + 1);
    hist.push_back(f);
    let mut grad_norm = f64::INFINITY;

    for iter in 0..opts.max_iters {
        let eg = euclidean_grad(&g, &b_conj);
        let rg = riemannian_grad(&w, &eg);
        let gn2: f64 = rg.iter().map(|z| z.norm_sqr()).sum();
        grad_norm = gn2.sqrt();
        if !grad_norm.is_finite() || !f.is_finite() {
            return Err(Error::ConvergenceFailure);
        }
        if grad_norm < opts.grad_tol {
            return Ok(AscentOutcome {
                value: f,
                w,
                converged: true,
                grad_norm,
                iterations: iter,
                trace,
            });
        }
        alpha = (alpha * 2.0).min(1e3);
        let mut accepted = false;
        while alpha > 1e-18 {
            let w2 = retract(&w + &rg * c(alpha, 0.));
            let f2 = objective(&w2, &b_t, &mut g);
            if f2 >= f + 1e-4 * alpha * 2.0 * gn2 {
                debug_assert!(f2 >= f, "ascent must be monotone");
                w = w2;
                f = f2;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            // line search exhausted: gradient no longer yields progress
            return Ok(AscentOutcome {
                value: f,
                w,
                converged: true,
                grad_norm,
                iterations: iter,
                trace,
            });
        }
        if let Some(t) = trace.as_mut() {
            t.push(f);
        }
        hist.push_back(f);
        if hist.len() > opts.stall_window {
            let old = hist.pop_front().unwrap();
            if f - old < opts.rel_obj_tol * f.abs().max(1.0) {
                return Ok(AscentOutcome {
                    value: f,
                    w,
                    converged: true,
                    grad_norm,
                    iterations: opts.max_iters.min(hist.len()),
                    trace,
                });
            }
        }
    }
    Ok(AscentOutcome {
        value: f,
        w,
        converged: false,
        grad_norm,
        iterations: opts.max_iters,
        trace,
    })
}

/// Maximizes the average entanglement entropy over pure-state decompositions
/// of `Phi / d`; the result is a certified lower bound on the entanglement of
/// assistance.
pub fn entanglement_of_assistance(
    phi: &DephasingFactorMatrix,
    opts: &EoaOptions,
) -> Result<EoaResult> {
    let spec = spectral_factor(phi, opts.rank_cutoff)?;
    let d = phi.d_system();
    let k = opts
        .ensemble_size
        .unwrap_or_else(|| (spec.rank * spec.rank).max(d))
        .max(spec.rank);

    let outcomes: Vec<(usize, Result<AscentOutcome>)> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|j| {
            let seed = qmat::derived_seed(opts.seed, STREAM_RESTART, j as u64);
            (j, ascend(&spec, k, seed, opts))
        })
        .collect();

    let mut best: Option<(usize, AscentOutcome)> = None;
    for (j, out) in outcomes {
        let out = out?;
        best = match best {
            None => Some((j, out)),
            Some((bj, bo)) => {
                // ties within 1e-12 resolve to the earliest restart
                if out.value > bo.value + 1e-12 {
                    Some((j, out))
                } else {
                    Some((bj, bo))
                }
            }
        };
    }
    let (best_restart, out) = best.expect("at least one restart");

    let b_t = spec.b.transpose();
    let ensemble = &out.w * &b_t; // K x d rows psi~_i
    let mut weights = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    for i in 0..k {
        let row = ensemble.row(i);
        let p: f64 = row.iter().map(|z| z.norm_sqr()).sum();
        weights.push(p);
        let v = if p > 1e-300 {
            crate::CVector::from_iterator(d, row.iter().map(|z| z / c(p.sqrt(), 0.)))
        } else {
            crate::CVector::zeros(d)
        };
        vectors.push(v);
    }

    Ok(EoaResult {
        e_a_lower_bound: out.value / opts.log_base.ln_base(),
        ensemble_size: k,
        support_rank: spec.rank,
        restarts_used: opts.restarts.max(1),
        best_restart,
        converged: out.converged,
        grad_norm: out.grad_norm,
        iterations: out.iterations,
        weights,
        vectors,
        objective_trace: out.trace,
    })
}

/// Statistics of `Q_A` over randomly generated mixed-unitary channels;
/// quantifies the optimizer floor.
#[derive(Debug, Clone, Serialize)]
pub struct MuBaseline {
    pub n_samples: usize,
    pub n_unitaries: usize,
    pub max_q_a: f64,
    pub mean_q_a: f64,
}

/// Random mixed-unitary factor matrix: `Σ p_n z_n z_n†` over random phase
/// vectors with random simplex weights.
pub fn random_mu_phi(d: usize, n_unitaries: usize, seed: u64) -> DephasingFactorMatrix {
    use rand::Rng;
    let mut rng = qmat::rng_from_seed(seed);
    let mut weights: Vec<f64> = (0..n_unitaries)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let mut phi = CMatrix::zeros(d, d);
    for &w in &weights {
        let z = crate::CVector::from_iterator(
            d,
            (0..d).map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))),
        );
        phi += (&z * z.adjoint()).scale(w);
    }
    // exact unit diagonal regardless of roundoff
    for i in 0..d {
        phi[(i, i)] = c(1., 0.);
    }
    DephasingFactorMatrix::new(phi).expect("mixture of phase projectors is valid")
}

pub fn mu_baseline(
    d: usize,
    n_samples: usize,
    n_unitaries: usize,
    seed: u64,
    opts: &EoaOptions,
) -> Result<MuBaseline> {
    let qas: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let sample_seed = qmat::derived_seed(seed, STREAM_BASELINE, i as u64);
            let phi = random_mu_phi(d, n_unitaries, sample_seed);
            let mut sub = opts.clone();
            sub.seed = qmat::derived_seed(sample_seed, STREAM_RESTART, u64::MAX);
            sub.record_trace = false;
            entanglement_of_assistance(&phi, &sub)
                .map(|r| opts.log_base.log(d as f64) - r.e_a_lower_bound)
        })
        .collect::<Result<_>>()?;
    let max_q_a = qas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean_q_a = qas.iter().sum::<f64>() / qas.len().max(1) as f64;
    Ok(MuBaseline {
        n_samples,
        n_unitaries,
        max_q_a,
        mean_q_a,
    })
}

#[derive(Debug, Clone)]
pub struct QaOptions {
    pub eoa: EoaOptions,
    /// Number of random mixed-unitary channels used to calibrate the
    /// optimizer floor carried by the report; 0 skips calibration.
    pub floor_samples: usize,
}

impl Default for QaOptions {
    fn default() -> Self {
        Self {
            eoa: EoaOptions::default(),
            floor_samples: 8,
        }
    }
}

/// Full non-mixed-unitarity report for a factor matrix.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub schema_version: u32,
    pub d_system: usize,
    pub log_base: LogBase,
    /// `log d - E_A`; positive values witness non-mixed unitarity.
    pub q_a: f64,
    pub e_a: f64,
    pub e_a_max: f64,
    pub eoa: EoaResult,
    pub mu_floor: Option<MuBaseline>,
    pub criteria: Option<CriteriaReport>,
    pub negativity: Option<f64>,
}

pub fn q_a(phi: &DephasingFactorMatrix, opts: &QaOptions) -> Result<WitnessReport> {
    let d = phi.d_system();
    let eoa_res = entanglement_of_assistance(phi, &opts.eoa)?;
    let e_a_max = opts.eoa.log_base.log(d as f64);
    let mu_floor = if opts.floor_samples > 0 {
        Some(mu_baseline(
            d,
            opts.floor_samples,
            d * d,
            qmat::derived_seed(opts.eoa.seed, STREAM_BASELINE, 0x666c6f6f72),
            &opts.eoa,
        )?)
    } else {
        None
    };
    Ok(WitnessReport {
        schema_version: 1,
        d_system: d,
        log_base: opts.eoa.log_base,
        q_a: e_a_max - eoa_res.e_a_lower_bound,
        e_a: eoa_res.e_a_lower_bound,
        e_a_max,
        eoa: eoa_res,
        mu_floor,
        criteria: None,
        negativity: None,
    })
}

/// Derivative-free randomized search over decompositions: pure random
/// isometries followed by stochastic hill climbing, within a fixed budget of
/// objective evaluations. Independent of the gradient-based optimizer; used
/// to cross-check its values.
pub fn random_decomposition_search(
    phi: &DephasingFactorMatrix,
    evaluations: usize,
    seed: u64,
    log_base: LogBase,
) -> Result<f64> {
    use rand::Rng;
    let spec = spectral_factor(phi, 1e-12)?;
    let d = phi.d_system();
    let k = (spec.rank * spec.rank).max(d);
    let b_t = spec.b.transpose();
    let mut g = CMatrix::zeros(k, d);

    let n_random = evaluations / 5;
    let mut rng = qmat::rng_from_seed(qmat::derived_seed(seed, STREAM_SEARCH, 0));
    let mut best_f = f64::NEG_INFINITY;
    let mut best_w = haar_isometry(k, spec.rank, &mut rng);
    for _ in 0..n_random {
        let w = haar_isometry(k, spec.rank, &mut rng);
        let f = objective(&w, &b_t, &mut g);
        if f > best_f {
            best_f = f;
            best_w = w;
        }
    }

    let climbers = 16usize;
    let budget = (evaluations - n_random) / climbers;
    let mut overall = best_f;
    for climb in 0..climbers {
        let mut rng = qmat::rng_from_seed(qmat::derived_seed(seed, STREAM_SEARCH, 1 + climb as u64));
        // half the climbers refine the random-phase winner, half start fresh
        let mut w = if climb % 2 == 0 {
            best_w.clone()
        } else {
            haar_isometry(k, spec.rank, &mut rng)
        };
        let mut f = objective(&w, &b_t, &mut g);
        let mut sigma = 0.3f64;
        for _ in 0..budget {
            let step = qmat::ginibre_rng(k, spec.rank, &mut rng);
            let norm: f64 = step.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let w2 = retract(&w + step * c(sigma / norm, 0.));
            let f2 = objective(&w2, &b_t, &mut g);
            if f2 > f {
                w = w2;
                f = f2;
                sigma = (sigma * 1.3).min(1.0);
            } else {
                sigma = (sigma * 0.95).max(1e-9);
            }
        }
        overall = overall.max(f);
    }
    if !overall.is_finite() {
        return Err(Error::ConvergenceFailure);
    }
    Ok(overall / log_base.ln_base())
}
