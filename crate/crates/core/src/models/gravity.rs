//! Two massive test particles in spatial superposition coupled to a
//! mechanical oscillator through the Newtonian potential. Each position
//! branch displaces the oscillator conditionally, producing pure dephasing
//! of the four-branch particle state with closed-form thermal factors.

use serde::Serialize;

use crate::dephasing::DephasingFactorMatrix;
use crate::error::{Error, Result};
use crate::qmat::{c, CMatrix, Complex64};

pub const GRAVITATIONAL_CONSTANT: f64 = 6.674e-11;
pub const HBAR: f64 = 1.054571817e-34;
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Physical inputs, SI units. Defaults are the silica benchmark scenario.
#[derive(Debug, Clone, Serialize)]
pub struct GravityInputs {
    /// Mass density of particles and oscillator (kg/m^3).
    pub density: f64,
    /// Test-particle radius (m).
    pub r_particle: f64,
    /// Oscillator radius (m).
    pub r_oscillator: f64,
    /// Particle-oscillator separation (m).
    pub separation: f64,
    /// Superposition split of each particle (m).
    pub split: f64,
    /// Shifted oscillator angular frequency (rad/s).
    pub omega: f64,
    /// Oscillator temperature (K).
    pub temperature: f64,
}

impl Default for GravityInputs {
    fn default() -> Self {
        Self {
            density: 2400.0,
            r_particle: 70e-9,
            r_oscillator: 7e-6,
            separation: 175e-6,
            split: 500e-9,
            omega: 0.01,
            temperature: 1e-3,
        }
    }
}

/// Derived model parameters.
#[derive(Debug, Clone, Serialize)]
pub struct GravityParams {
    pub inputs: GravityInputs,
    /// Test-particle mass (kg).
    pub mass_particle: f64,
    /// Oscillator mass (kg).
    pub mass_oscillator: f64,
    /// Particle-oscillator coupling (rad/s).
    pub coupling: f64,
    /// Dimensionless coupling `g / omega`.
    pub coupling_ratio: f64,
    /// Branch frequency shift of each particle (rad/s).
    pub omega_m: f64,
    /// Thermal occupation of the oscillator.
    pub n_bar: f64,
    /// Bare oscillator frequency implied by the gravitational softening.
    pub omega_bare: f64,
    /// Half oscillation period, where coherence decay peaks (s).
    pub t_star: f64,
}

/// Computes masses, coupling, branch shift and thermal occupation.
pub fn gravity_params(inputs: GravityInputs) -> Result<GravityParams> {
    for (field, value) in [
        ("density", inputs.density),
        ("r_particle", inputs.r_particle),
        ("r_oscillator", inputs.r_oscillator),
        ("separation", inputs.separation),
        ("split", inputs.split),
        ("omega", inputs.omega),
        ("temperature", inputs.temperature),
    ] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositiveInput { field, value });
        }
    }
    let sphere = |r: f64| inputs.density * 4.0 / 3.0 * std::f64::consts::PI * r.powi(3);
    let m = sphere(inputs.r_particle);
    let m_osc = sphere(inputs.r_oscillator);
    let d3 = inputs.separation.powi(3);
    let coupling = -(GRAVITATIONAL_CONSTANT * m * inputs.split / d3)
        * (m_osc / (2.0 * HBAR * inputs.omega)).sqrt();
    let omega_m = GRAVITATIONAL_CONSTANT * m_osc * m * inputs.split
        / (2.0 * HBAR * inputs.separation.powi(2));
    // exp_m1 keeps n_bar accurate in the high-temperature regime
    let x = HBAR * inputs.omega / (BOLTZMANN * inputs.temperature);
    let n_bar = 1.0 / x.exp_m1();
    let omega_bare = (inputs.omega.powi(2) + 2.0 * GRAVITATIONAL_CONSTANT * m / d3).sqrt();
    let t_star = std::f64::consts::PI / inputs.omega;
    Ok(GravityParams {
        mass_particle: m,
        mass_oscillator: m_osc,
        coupling,
        coupling_ratio: coupling / inputs.omega,
        omega_m,
        n_bar,
        omega_bare,
        t_star,
        inputs,
    })
}

/// Branch labels `(s1, s2)` ordered `(+,+), (+,-), (-,+), (-,-)`, matching
/// the position basis `LL, LR, RL, RR`.
pub const BRANCHES: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];

/// Dephasing factor matrix of the particle pair at time `t`.
///
/// Branch `s` displaces the oscillator by `alpha_s(t) = (lambda_s/omega)
/// (e^{-i omega t} - 1)` with `lambda_s = g (s1+s2)` and accumulates the
/// phase `phi_s(t) = (lambda_s/omega)^2 (omega t - sin omega t)`; the thermal
/// expectation of the relative displacement gives
///
/// ```text
/// Phi[s][s'] = exp[-i (c_s - c_s') t + i (phi_s - phi_s')
///              - i Im(alpha_s conj(alpha_s'))]
///            * exp[-|alpha_s - alpha_s'|^2 (2 n_bar + 1) / 2]
/// ```
///
/// with branch energy `c_s = omega_m (s1 + s2)`.
pub fn gravity_phi(params: &GravityParams, t: f64) -> DephasingFactorMatrix {
    let omega = params.inputs.omega;
    let lambdas: Vec<f64> = BRANCHES
        .iter()
        .map(|(s1, s2)| params.coupling * (s1 + s2))
        .collect();
    let energies: Vec<f64> = BRANCHES
        .iter()
        .map(|(s1, s2)| params.omega_m * (s1 + s2))
        .collect();
    let rot = Complex64::from_polar(1.0, -omega * t) - c(1., 0.);
    let alphas: Vec<Complex64> = lambdas.iter().map(|&l| rot * c(l / omega, 0.)).collect();
    let phases: Vec<f64> = lambdas
        .iter()
        .map(|&l| (l / omega).powi(2) * (omega * t - (omega * t).sin()))
        .collect();

    let mut phi = CMatrix::zeros(4, 4);
    for i in 0..4 {
        phi[(i, i)] = c(1., 0.);
        for j in 0..i {
            let cross = (alphas[i] * alphas[j].conj()).im;
            let arg = -(energies[i] - energies[j]) * t + (phases[i] - phases[j]) - cross;
            let decay = (alphas[i] - alphas[j]).norm_sqr() * (2.0 * params.n_bar + 1.0) / 2.0;
            let value = Complex64::from_polar((-decay).exp(), arg);
            phi[(i, j)] = value;
            phi[(j, i)] = value.conj();
        }
    }
    DephasingFactorMatrix::new(phi).expect("closed form is a valid factor matrix")
}

/// Largest deviation of any factor modulus from one.
pub fn max_coherence_decay(phi: &DephasingFactorMatrix) -> f64 {
    let m = phi.matrix();
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((1.0 - m[(i, j)].norm()).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{hermitian_eig, max_abs};

    #[test]
    fn benchmark_derived_quantities() {
        let p = gravity_params(GravityInputs::default()).unwrap();
        assert!(
            ((p.coupling_ratio - (-2.75e-9)) / 2.75e-9).abs() < 0.01,
            "g/omega = {}",
            p.coupling_ratio
        );
        assert!((p.n_bar / 1.31e10 - 1.0).abs() < 0.01, "n_bar = {}", p.n_bar);
        assert!((p.omega_m / 6.1e-5 - 1.0).abs() < 0.02, "omega_m = {}", p.omega_m);
        assert!((p.t_star - 314.159_265_358_979_3).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_positive_inputs() {
        let mut inputs = GravityInputs::default();
        inputs.temperature = 0.0;
        match gravity_params(inputs) {
            Err(Error::NonPositiveInput { field, .. }) => assert_eq!(field, "temperature"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn time_zero_gives_all_ones() {
        let p = gravity_params(GravityInputs::default()).unwrap();
        let phi = gravity_phi(&p, 0.0);
        assert!(max_abs(&(phi.matrix() - CMatrix::from_element(4, 4, c(1., 0.)))) < 1e-15);
    }

    #[test]
    fn benchmark_peak_decay() {
        let p = gravity_params(GravityInputs::default()).unwrap();
        let phi = gravity_phi(&p, p.t_star);
        let decay = max_coherence_decay(&phi);
        assert!((5e-6..8e-6).contains(&decay), "decay = {decay}");
    }

    #[test]
    fn factor_matrix_properties_along_trajectory() {
        let p = gravity_params(GravityInputs::default()).unwrap();
        for k in 1..=8 {
            let phi = gravity_phi(&p, k as f64 * p.t_star / 4.0);
            let m = phi.matrix();
            for i in 0..4 {
                assert_eq!(m[(i, i)], c(1., 0.));
            }
            let (vals, _) = hermitian_eig(m).unwrap();
            assert!(vals.last().unwrap() > &-1e-10);
        }
    }

    /// Degenerate branches (s1+s2 = 0) must stay perfectly coherent with
    /// each other.
    #[test]
    fn middle_branches_never_dephase() {
        let p = gravity_params(GravityInputs::default()).unwrap();
        let phi = gravity_phi(&p, 0.37 * p.t_star);
        assert!((phi.matrix()[(1, 2)] - c(1., 0.)).norm() < 1e-15);
    }
}
