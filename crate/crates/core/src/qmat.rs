//! Dense complex-matrix numerics: eigendecomposition, partial operations on
//! bipartite systems, entropies, and Haar-random sampling.
//!
//! All matrices are `nalgebra::DMatrix<Complex<f64>>`. Values are immutable
//! after construction and every function here is pure, so concurrent use is
//! safe without synchronization.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub type Complex64 = num_complex::Complex<f64>;
pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative tolerance for Hermiticity validation.
pub const HERMITICITY_RTOL: f64 = 1e-12;

/// Which factor of a bipartite tensor product an operation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// Largest entry modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// max |A[i][j] - conj(A[j][i])| over all entries.
pub fn hermiticity_deviation(a: &CMatrix) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

fn require_hermitian(a: &CMatrix) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::NonSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let dev = hermiticity_deviation(a);
    if dev > HERMITICITY_RTOL * max_abs(a).max(1.0) {
        return Err(Error::NonHermitianInput { deviation: dev });
    }
    Ok(())
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in descending order together with the matching
/// orthonormal eigenvector columns, so that `A = U diag(λ) U†`.
pub fn hermitian_eig(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    require_hermitian(a)?;
    // Symmetrize away roundoff before decomposing.
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(sym);
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(k));
    }
    Ok((values, vectors))
}

/// Sum of singular values.
pub fn trace_norm(a: &CMatrix) -> Result<f64> {
    if a.nrows() != a.ncols() {
        return Err(Error::NonSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.clone().singular_values().iter().sum())
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> f64 {
    a.clone()
        .singular_values()
        .iter()
        .fold(0.0f64, |m, &s| m.max(s))
}

fn check_bipartite(rho: &CMatrix, dims: (usize, usize)) -> Result<()> {
    let d = dims.0 * dims.1;
    if rho.nrows() != d || rho.ncols() != d {
        return Err(Error::DimensionMismatch {
            context: "bipartite operator",
            expected: d,
            actual: rho.nrows(),
        });
    }
    Ok(())
}

/// Partial transpose of a bipartite operator on `dims = (dA, dB)`.
pub fn partial_transpose(rho: &CMatrix, dims: (usize, usize), sub: Subsystem) -> Result<CMatrix> {
    check_bipartite(rho, dims)?;
    let (da, db) = dims;
    let mut out = CMatrix::zeros(da * db, da * db);
    for a1 in 0..da {
        for b1 in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    let (r, c_) = match sub {
                        Subsystem::A => (a2 * db + b1, a1 * db + b2),
                        Subsystem::B => (a1 * db + b2, a2 * db + b1),
                    };
                    out[(r, c_)] = rho[(a1 * db + b1, a2 * db + b2)];
                }
            }
        }
    }
    Ok(out)
}

/// Partial trace over one factor of a bipartite operator.
pub fn partial_trace(rho: &CMatrix, dims: (usize, usize), traced: Subsystem) -> Result<CMatrix> {
    check_bipartite(rho, dims)?;
    let (da, db) = dims;
    match traced {
        Subsystem::B => {
            let mut out = CMatrix::zeros(da, da);
            for a1 in 0..da {
                for a2 in 0..da {
                    let mut s = c(0., 0.);
                    for b in 0..db {
                        s += rho[(a1 * db + b, a2 * db + b)];
                    }
                    out[(a1, a2)] = s;
                }
            }
            Ok(out)
        }
        Subsystem::A => {
            let mut out = CMatrix::zeros(db, db);
            for b1 in 0..db {
                for b2 in 0..db {
                    let mut s = c(0., 0.);
                    for a in 0..da {
                        s += rho[(a * db + b1, a * db + b2)];
                    }
                    out[(b1, b2)] = s;
                }
            }
            Ok(out)
        }
    }
}

/// Unitary `exp(-i h t)` of a Hermitian generator, via eigendecomposition.
pub fn matexp_hermitian(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let (vals, vecs) = hermitian_eig(h)?;
    let phases = DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&l| Complex64::from_polar(1.0, -l * t)),
    );
    Ok(&vecs * CMatrix::from_diagonal(&phases) * vecs.adjoint())
}

/// Validates that `rho` is a density matrix: Hermitian, unit trace, PSD.
pub fn check_state(rho: &CMatrix, eig_tol: f64) -> Result<()> {
    if hermiticity_deviation(rho) > 1e-9 * max_abs(rho).max(1.0) {
        return Err(Error::NotAState {
            reason: "not Hermitian".into(),
        });
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::NotAState {
            reason: format!("trace {} != 1", tr.re),
        });
    }
    let (vals, _) = hermitian_eig(rho)?;
    if let Some(min) = vals.last() {
        if *min < -eig_tol {
            return Err(Error::NotAState {
                reason: format!("negative eigenvalue {min}"),
            });
        }
    }
    Ok(())
}

/// Von Neumann entropy `-Σ λ log λ` in the given log base, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &CMatrix, log_base: f64) -> Result<f64> {
    check_state(rho, 1e-9)?;
    let (vals, _) = hermitian_eig(rho)?;
    let nats: f64 = vals
        .iter()
        .map(|&l| if l > 1e-300 { -l * l.ln() } else { 0.0 })
        .sum();
    Ok(nats / log_base.ln())
}

/// Shannon entropy of a probability vector in the given log base.
pub fn shannon_entropy(p: &[f64], log_base: f64) -> f64 {
    let nats: f64 = p
        .iter()
        .map(|&x| if x > 1e-300 { -x * x.ln() } else { 0.0 })
        .sum();
    nats / log_base.ln()
}

/// Deterministic generator for a seed. Same seed, same stream.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for task `index` within a derived stream.
///
/// Tasks within one family use `base ^ index`; `stream` separates nested
/// families (restarts inside samples) so their seed sets cannot collide.
pub fn derived_seed(base: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(base ^ stream.rotate_left(17)) ^ index)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Complex Ginibre matrix (iid standard complex Gaussians).
pub fn ginibre_rng<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(standard_normal(rng), standard_normal(rng))
    })
}

/// Haar-random unitary via QR of a Ginibre matrix with phase-fixed R diagonal.
pub fn haar_random_unitary_rng<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    let g = ginibre_rng(d, d, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..d {
        let rkk = r[(k, k)];
        let phase = if rkk.norm() > 0.0 {
            rkk / rkk.norm()
        } else {
            c(1., 0.)
        };
        let col = q.column(k) * phase;
        q.set_column(k, &col);
    }
    q
}

pub fn haar_random_unitary(d: usize, seed: u64) -> CMatrix {
    haar_random_unitary_rng(d, &mut rng_from_seed(seed))
}

/// Haar-random pure state as a unit-norm column vector.
pub fn random_pure_state_rng<R: Rng>(d: usize, rng: &mut R) -> CVector {
    let mut v = CVector::from_fn(d, |_, _| c(standard_normal(rng), standard_normal(rng)));
    let n = v.norm();
    v /= c(n, 0.0);
    v
}

pub fn random_pure_state(d: usize, seed: u64) -> CVector {
    random_pure_state_rng(d, &mut rng_from_seed(seed))
}

/// Random density matrix `GG†/Tr(GG†)` of the given rank.
pub fn random_density_matrix_rng<R: Rng>(d: usize, rank: usize, rng: &mut R) -> CMatrix {
    let g = ginibre_rng(d, rank.max(1).min(d), rng);
    let rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho / c(tr, 0.0)
}
