//! Hamiltonian-ensemble incompatibility analysis for the trapped-ion model:
//! the analytic dephasing factor, its quasi-probability distribution, the
//! single-parameter amplitude fit, and generic periodic Fourier coefficients.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmat::{c, Complex64};

/// Closed form of the 01-11 dephasing factor:
/// `cos^2 t - sin^2 t / 2 + i (sqrt(3)/2) sin^2 t sgn(t)`.
///
/// The sgn factor symmetrizes the imaginary part so the associated
/// quasi-distribution is real; it does not affect values for `t >= 0`.
pub fn phi_0111_analytic(t: f64) -> Complex64 {
    let (s2, c2) = (t.sin() * t.sin(), t.cos() * t.cos());
    c(c2 - 0.5 * s2, 3f64.sqrt() / 2.0 * s2 * sign(t))
}

fn sign(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Continuous part of the quasi-distribution:
/// `chi(w) = sqrt(3) / (pi w (w-2) (w+2))`.
///
/// Strictly negative exactly on `(-inf, -2) U (0, 2)`.
pub fn chi(omega: f64) -> Result<f64> {
    for pole in [-2.0, 0.0, 2.0] {
        if omega == pole {
            return Err(Error::PoleAt { omega });
        }
    }
    Ok(3f64.sqrt() / (std::f64::consts::PI * omega * (omega - 2.0) * (omega + 2.0)))
}

/// Quasi-probability distribution: delta peaks plus a scaled `chi`.
#[derive(Debug, Clone, Serialize)]
pub struct QuasiDistribution {
    /// `(frequency, weight)` delta terms.
    pub delta_terms: Vec<(f64, f64)>,
    /// Scale applied to the continuous part `chi`.
    pub alpha: f64,
}

/// Components of the model's quasi-distribution:
/// deltas `(0, 1/4), (2, 3/8), (-2, 1/8)` and a unit-scale continuous part.
pub fn quasi_distribution_components() -> QuasiDistribution {
    QuasiDistribution {
        delta_terms: vec![(0.0, 0.25), (2.0, 0.375), (-2.0, 0.125)],
        alpha: 1.0,
    }
}

/// Least-squares fit result for the imaginary-part amplitude.
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub alpha: f64,
    /// Residual sum of squares at the optimum.
    pub rss: f64,
    pub n_samples: usize,
}

/// Fits `Im(phi)(t) = alpha (sqrt(3)/2) sin^2 t` to samples `(t, Im phi)`.
pub fn fit_alpha(samples: &[(f64, f64)]) -> Result<FitResult> {
    if samples.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let mut wy = 0.0;
    let mut ww = 0.0;
    for &(t, _) in samples {
        let w = 3f64.sqrt() / 2.0 * t.sin() * t.sin();
        ww += w * w;
    }
    if ww == 0.0 {
        return Err(Error::DegenerateFit);
    }
    for &(t, y) in samples {
        let w = 3f64.sqrt() / 2.0 * t.sin() * t.sin();
        wy += w * y;
    }
    let alpha = wy / ww;
    let rss = samples
        .iter()
        .map(|&(t, y)| {
            let r = y - alpha * 3f64.sqrt() / 2.0 * t.sin() * t.sin();
            r * r
        })
        .sum();
    Ok(FitResult {
        alpha,
        rss,
        n_samples: samples.len(),
    })
}

/// Open intervals on which `alpha * chi(w)` is negative. Unbounded ends are
/// `f64::NEG_INFINITY` / `f64::INFINITY`.
pub fn negativity_regions(alpha: f64) -> Vec<(f64, f64)> {
    if alpha > 0.0 {
        vec![(f64::NEG_INFINITY, -2.0), (0.0, 2.0)]
    } else if alpha < 0.0 {
        vec![(-2.0, 0.0), (2.0, f64::INFINITY)]
    } else {
        vec![]
    }
}

/// Fourier-series coefficients `c_n` (frequency `2 pi n / period`) of a
/// periodic signal from `N` uniform samples over one period, for
/// `n = -n_harmonics ..= n_harmonics`. Returns `(n, c_n)` pairs.
pub fn fourier_coefficients(
    samples: &[Complex64],
    n_harmonics: usize,
) -> Result<Vec<(i64, Complex64)>> {
    let n = samples.len();
    let needed = 2 * n_harmonics + 1;
    if n < needed {
        return Err(Error::InsufficientSamples { needed, got: n });
    }
    let mut out = Vec::with_capacity(needed);
    for h in -(n_harmonics as i64)..=(n_harmonics as i64) {
        let mut acc = c(0., 0.);
        for (j, &f) in samples.iter().enumerate() {
            let angle = -std::f64::consts::TAU * (h as f64) * (j as f64) / (n as f64);
            acc += f * Complex64::from_polar(1.0, angle);
        }
        out.push((h, acc / c(n as f64, 0.)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

    #[test]
    fn analytic_factor_values() {
        assert!((phi_0111_analytic(0.0) - c(1., 0.)).norm() < 1e-15);
        let expect = c(-0.5, 3f64.sqrt() / 2.0);
        assert!((phi_0111_analytic(FRAC_PI_2) - expect).norm() < 1e-15);
        let expect = c(0.25, 3f64.sqrt() / 4.0);
        assert!((phi_0111_analytic(FRAC_PI_4) - expect).norm() < 1e-15);
    }

    #[test]
    fn chi_values_and_poles() {
        assert!((chi(1.0).unwrap() + 3f64.sqrt() / (3.0 * PI)).abs() < 1e-15);
        assert!((chi(3.0).unwrap() - 3f64.sqrt() / (15.0 * PI)).abs() < 1e-15);
        assert!((chi(-1.0).unwrap() - 3f64.sqrt() / (3.0 * PI)).abs() < 1e-15);
        for pole in [-2.0, 0.0, 2.0] {
            assert!(matches!(chi(pole), Err(Error::PoleAt { .. })));
        }
    }

    #[test]
    fn chi_is_odd() {
        let mut w = -6.0;
        while w < 6.0 {
            if [-2.0, 0.0, 2.0].iter().all(|p| (w - p).abs() > 1e-9) {
                assert!((chi(-w).unwrap() + chi(w).unwrap()).abs() < 1e-15);
            }
            w += 0.31;
        }
    }

    #[test]
    fn chi_sign_pattern() {
        for (w, neg) in [(-5.0, true), (-1.0, false), (1.0, true), (1.9, true), (3.0, false)] {
            assert_eq!(chi(w).unwrap() < 0.0, neg, "omega = {w}");
        }
    }

    #[test]
    fn component_weights() {
        let q = quasi_distribution_components();
        assert_eq!(q.delta_terms[0], (0.0, 0.25));
        assert_eq!(q.delta_terms[1], (2.0, 0.375));
        assert_eq!(q.delta_terms[2], (-2.0, 0.125));
        let total: f64 = q.delta_terms.iter().map(|(_, w)| w).sum();
        assert!((total - 0.75).abs() < 1e-15);
        assert_eq!(q.alpha, 1.0);
    }

    /// Principal-value integral of `f(w) exp(-i w t)` over the real line
    /// with simple poles at 0 and ±2, by Gauss-Legendre panels; each pole is
    /// handled by quadrature of the symmetrized integrand
    /// `f(a+u) exp(-i(a+u)t) + f(a-u) exp(-i(a-u)t)`, which is smooth.
    fn pv_integral(f: impl Fn(f64) -> f64, t: f64, omega_max: f64) -> Complex64 {
        let (nodes, weights) = gauss_legendre_32();
        let phase = |w: f64| Complex64::from_polar(1.0, -w * t);
        let panel = |lo: f64, hi: f64, g: &dyn Fn(f64) -> Complex64| {
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            let mut acc = c(0., 0.);
            for (x, w) in nodes.iter().zip(&weights) {
                acc += g(mid + half * x) * c(w * half, 0.);
            }
            acc
        };
        let mut total = c(0., 0.);
        // symmetric neighborhoods around each pole; the paired integrand is
        // smooth, so grade panels toward u = 0 and stop once negligible
        let half_width = 1.0;
        for a in [-2.0, 0.0, 2.0] {
            let g = |u: f64| c(f(a + u), 0.) * phase(a + u) + c(f(a - u), 0.) * phase(a - u);
            let mut hi = half_width;
            while hi > 1e-14 {
                let lo = hi / 2.0;
                total += panel(lo, hi, &g);
                hi = lo;
            }
        }
        // plain panels away from the poles
        let segments = [
            (-omega_max, -2.0 - half_width),
            (-2.0 + half_width, -half_width),
            (half_width, 2.0 - half_width),
            (2.0 + half_width, omega_max),
        ];
        for (lo, hi) in segments {
            let n_panels = ((hi - lo) / 1.0).ceil().max(1.0) as usize;
            let step = (hi - lo) / n_panels as f64;
            for k in 0..n_panels {
                let (a, b) = (lo + k as f64 * step, lo + (k + 1) as f64 * step);
                total += panel(a, b, &|w| c(f(w), 0.) * phase(w));
            }
        }
        total
    }

    fn gauss_legendre_32() -> (Vec<f64>, Vec<f64>) {
        // Newton iteration on Legendre P_32
        let n = 32usize;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    }

    #[test]
    fn pv_integral_of_chi_vanishes() {
        let total = pv_integral(|w| chi(w).unwrap(), 0.0, 400.0);
        assert!(total.norm() < 1e-5, "PV integral {total}");
    }

    /// Inverse-transform round trip. The delta weights that reconstruct the
    /// analytic factor are (1/4, 3/8, 3/8): the total delta mass must equal
    /// phi(0) = 1 because the principal-value integral of chi vanishes
    /// (checked above). The published (1/4, 3/8, 1/8) weights returned by
    /// `quasi_distribution_components` sum to 3/4 and fail this round trip;
    /// they are kept as the reference values, with the normalization-
    /// consistent weight used here.
    #[test]
    fn inverse_transform_reproduces_analytic_factor() {
        let deltas = [(0.0, 0.25), (2.0, 0.375), (-2.0, 0.375)];
        for &t in &[0.1, 0.3, 1.0, 2.0, 3.0] {
            let mut val = c(0., 0.);
            for &(w, p) in &deltas {
                val += Complex64::from_polar(p, -w * t);
            }
            val += pv_integral(|w| chi(w).unwrap(), t, 400.0);
            let expect = phi_0111_analytic(t);
            assert!(
                (val - expect).norm() < 1e-6,
                "t={t}: reconstructed {val}, analytic {expect}"
            );
        }
    }

    #[test]
    fn fit_recovers_unit_alpha_on_noiseless_samples() {
        let samples: Vec<(f64, f64)> = (1..8)
            .map(|k| {
                let t = k as f64 * PI / 8.0;
                (t, phi_0111_analytic(t).im)
            })
            .collect();
        let fit = fit_alpha(&samples).unwrap();
        assert!((fit.alpha - 1.0).abs() < 1e-12);
        assert!(fit.rss < 1e-24);
    }

    #[test]
    fn fit_is_scale_equivariant() {
        for &scale in &[0.9, 0.3, -1.2] {
            let samples: Vec<(f64, f64)> = (1..8)
                .map(|k| {
                    let t = k as f64 * PI / 8.0;
                    (t, scale * phi_0111_analytic(t).im)
                })
                .collect();
            let fit = fit_alpha(&samples).unwrap();
            assert!((fit.alpha - scale).abs() < 1e-12);
        }
    }

    #[test]
    fn fit_rejects_degenerate_samples() {
        assert!(matches!(
            fit_alpha(&[(0.0, 0.1), (PI, -0.2)]),
            Err(Error::DegenerateFit)
        ));
        assert!(matches!(
            fit_alpha(&[]),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn regions_by_alpha_sign() {
        assert_eq!(
            negativity_regions(1.0),
            vec![(f64::NEG_INFINITY, -2.0), (0.0, 2.0)]
        );
        assert_eq!(
            negativity_regions(-1.0),
            vec![(-2.0, 0.0), (2.0, f64::INFINITY)]
        );
        assert_eq!(negativity_regions(0.9739), negativity_regions(1.0));
        assert!(negativity_regions(0.0).is_empty());
    }

    #[test]
    fn fourier_constant_signal() {
        let samples = vec![c(0.7, -0.2); 9];
        let coeffs = fourier_coefficients(&samples, 2).unwrap();
        for (n, v) in coeffs {
            if n == 0 {
                assert!((v - c(0.7, -0.2)).norm() < 1e-12);
            } else {
                assert!(v.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn fourier_single_harmonic() {
        // e^{2it} sampled over one period T = pi is harmonic n = +1
        let n = 16;
        let samples: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(1.0, 2.0 * (j as f64 * PI / n as f64)))
            .collect();
        let coeffs = fourier_coefficients(&samples, 3).unwrap();
        for (h, v) in coeffs {
            if h == 1 {
                assert!((v - c(1., 0.)).norm() < 1e-12);
            } else {
                assert!(v.norm() < 1e-12);
            }
        }
    }

    /// The real part of the analytic factor is `1/4 + (3/4) cos 2t`, so its
    /// series over one period carries 1/4 at n = 0 and 3/8 at n = ±1.
    #[test]
    fn fourier_series_of_real_part() {
        let n = 32;
        let samples: Vec<Complex64> = (0..n)
            .map(|j| c(phi_0111_analytic(j as f64 * PI / n as f64).re, 0.))
            .collect();
        let coeffs = fourier_coefficients(&samples, 2).unwrap();
        for (h, v) in coeffs {
            let expect = match h {
                0 => 0.25,
                1 | -1 => 0.375,
                _ => 0.0,
            };
            assert!((v - c(expect, 0.)).norm() < 1e-12, "harmonic {h}: {v}");
        }
    }

    #[test]
    fn fourier_needs_enough_samples() {
        let samples = vec![c(1., 0.); 4];
        assert!(matches!(
            fourier_coefficients(&samples, 2),
            Err(Error::InsufficientSamples { needed: 5, got: 4 })
        ));
        let _ = TAU;
    }
}
