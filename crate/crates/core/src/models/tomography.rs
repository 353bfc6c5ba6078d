//! Two-qubit state tomography with shot noise: nine Pauli settings sampled
//! from the exact Born distribution, reconstructed by linear inversion.


use crate::error::Result;
use crate::qmat::{self, identity, kron, pauli_x, pauli_y, pauli_z, CMatrix};

fn paulis() -> [CMatrix; 4] {
    [identity(2), pauli_x(), pauli_y(), pauli_z()]
}

/// Exact expectations `<P ⊗ Q>` for all sixteen Pauli pairs, indexed
/// `[p][q]` with 0 = I, 1 = X, 2 = Y, 3 = Z.
pub fn exact_pauli_expectations(rho: &CMatrix) -> Result<[[f64; 4]; 4]> {
    qmat::check_state(rho, 1e-8)?;
    let p = paulis();
    let mut out = [[0.0; 4]; 4];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in p.iter().enumerate() {
            out[i][j] = (kron(a, b) * rho).trace().re;
        }
    }
    Ok(out)
}

/// Reconstructs `(1/4) Σ <PQ> P ⊗ Q` from a table of expectations.
pub fn reconstruct_from_expectations(exps: &[[f64; 4]; 4]) -> CMatrix {
    let p = paulis();
    let mut rho = CMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            rho += kron(&p[i], &p[j]).scale(exps[i][j] / 4.0);
        }
    }
    rho
}

/// Simulated tomography of a two-qubit state.
///
/// For each of the nine settings {X,Y,Z}x{X,Y,Z} the four outcome
/// probabilities follow the exact Born rule; `shots_per_setting` outcomes are
/// drawn per setting. Two-body expectations come from their own setting,
/// single-body ones pool the marginals of the three settings that measure
/// that operator. The linear-inversion estimate is Hermitian with unit trace
/// but may have negative eigenvalues.
pub fn simulate_tomography(
    rho: &CMatrix,
    shots_per_setting: usize,
    seed: u64,
) -> Result<CMatrix> {
    qmat::check_state(rho, 1e-8)?;
    let shots = shots_per_setting.max(1);
    let p = paulis();
    let mut rng = qmat::rng_from_seed(seed);

    // counts[a][b][outcome] with a, b in {X,Y,Z} = {0,1,2}
    let mut counts = [[[0usize; 4]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let mut probs = [0.0f64; 4];
            for (o, pr) in probs.iter_mut().enumerate() {
                let sa = if o & 2 == 0 { 1.0 } else { -1.0 };
                let sb = if o & 1 == 0 { 1.0 } else { -1.0 };
                let proj_a = (identity(2) + p[a + 1].scale(sa)).scale(0.5);
                let proj_b = (identity(2) + p[b + 1].scale(sb)).scale(0.5);
                *pr = (kron(&proj_a, &proj_b) * rho).trace().re.max(0.0);
            }
            let total: f64 = probs.iter().sum();
            for o in 0..shots {
                let _ = o;
                let mut u: f64 = rng.random::<f64>() * total;
                let mut k = 0;
                while k < 3 && u > probs[k] {
                    u -= probs[k];
                    k += 1;
                }
                counts[a][b][k] += 1;
            }
        }
    }

    let sign_a = |o: usize| if o & 2 == 0 { 1.0 } else { -1.0 };
    let sign_b = |o: usize| if o & 1 == 0 { 1.0 } else { -1.0 };
    let mut exps = [[0.0f64; 4]; 4];
    exps[0][0] = 1.0;
    for a in 0..3 {
        for b in 0..3 {
            let mut corr = 0.0;
            for o in 0..4 {
                corr += sign_a(o) * sign_b(o) * counts[a][b][o] as f64;
            }
            exps[a + 1][b + 1] = corr / shots as f64;
        }
    }
    // marginals pooled over the partner settings
    for a in 0..3 {
        let mut acc = 0.0;
        for b in 0..3 {
            for o in 0..4 {
                acc += sign_a(o) * counts[a][b][o] as f64;
            }
        }
        exps[a + 1][0] = acc / (3 * shots) as f64;
    }
    for b in 0..3 {
        let mut acc = 0.0;
        for a in 0..3 {
            for o in 0..4 {
                acc += sign_b(o) * counts[a][b][o] as f64;
            }
        }
        exps[0][b + 1] = acc / (3 * shots) as f64;
    }

    Ok(reconstruct_from_expectations(&exps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dephasing::apply_channel;
    use crate::models::{maximally_coherent_state, trapped_ion_channel};
    use crate::qmat::{hermiticity_deviation, max_abs, random_density_matrix_rng, rng_from_seed};

    #[test]
    fn infinite_shot_limit_recovers_state() {
        let mut rng = rng_from_seed(3);
        let rho = random_density_matrix_rng(4, 4, &mut rng);
        let exps = exact_pauli_expectations(&rho).unwrap();
        let recon = reconstruct_from_expectations(&exps);
        assert!(max_abs(&(recon - rho)) < 1e-12);
    }

    #[test]
    fn single_shot_output_is_hermitian_unit_trace() {
        let mut rng = rng_from_seed(5);
        let rho = random_density_matrix_rng(4, 2, &mut rng);
        let est = simulate_tomography(&rho, 1, 7).unwrap();
        assert!(hermiticity_deviation(&est) < 1e-12);
        assert!((est.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn estimate_is_reproducible_per_seed() {
        let rho = maximally_coherent_state();
        let a = simulate_tomography(&rho, 50, 11).unwrap();
        let b = simulate_tomography(&rho, 50, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coherence_estimate_spread_matches_binomial_scale() {
        // 300 shots per setting puts the standard deviation of the recovered
        // off-diagonal factor in the 0.05..0.07 range
        let phi = trapped_ion_channel(0.7).dephasing_matrix();
        let rho = apply_channel(&phi, &maximally_coherent_state()).unwrap();
        let n = 200;
        let mut res = Vec::with_capacity(n);
        let mut ims = Vec::with_capacity(n);
        for s in 0..n {
            let est = simulate_tomography(&rho, 300, 1000 + s as u64).unwrap();
            res.push(4.0 * est[(1, 3)].re);
            ims.push(4.0 * est[(1, 3)].im);
        }
        let stddev = |xs: &[f64]| {
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
        };
        let (sd_re, sd_im) = (stddev(&res), stddev(&ims));
        assert!((0.04..0.09).contains(&sd_re), "sd_re = {sd_re}");
        assert!((0.04..0.09).contains(&sd_im), "sd_im = {sd_im}");
    }

    #[test]
    fn estimator_is_unbiased() {
        let phi = trapped_ion_channel(1.1).dephasing_matrix();
        let rho = apply_channel(&phi, &maximally_coherent_state()).unwrap();
        let truth = exact_pauli_expectations(&rho).unwrap();
        let n = 1000;
        let shots = 64;
        let mut mean = [[0.0f64; 4]; 4];
        for s in 0..n {
            let est = simulate_tomography(&rho, shots, 5000 + s as u64).unwrap();
            let exps = {
                // recover expectations from the estimate by tracing Paulis
                let p = [identity(2), crate::qmat::pauli_x(), crate::qmat::pauli_y(), crate::qmat::pauli_z()];
                let mut out = [[0.0f64; 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        out[i][j] = (kron(&p[i], &p[j]) * &est).trace().re;
                    }
                }
                out
            };
            for i in 0..4 {
                for j in 0..4 {
                    mean[i][j] += exps[i][j] / n as f64;
                }
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                if i == 0 && j == 0 {
                    continue;
                }
                // pooled marginals have 3x the samples
                let samples = if i == 0 || j == 0 { 3 * n * shots } else { n * shots };
                let se = ((1.0 - truth[i][j] * truth[i][j]).max(1e-6) / samples as f64).sqrt();
                let dev = (mean[i][j] - truth[i][j]).abs();
                assert!(dev < 4.0 * se, "({i},{j}): dev {dev} vs 4se {}", 4.0 * se);
            }
        }
    }
}
