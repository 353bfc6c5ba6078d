//! Controlled-dephasing model: a two-qubit system conditions single-qubit
//! rotations of an environment qubit about three axes in the x-y plane,
//! spaced 120 degrees apart. The environment starts in |0><0|.

use crate::dephasing::PureDephasingChannel;
use crate::qmat::{c, identity, kron, pauli_x, pauli_y, CMatrix, CVector};

/// Rotation axes (x, y components) for the branches 01, 10, 11.
///
/// The 01 branch rotates about y; the 10 and 11 branches about unit axes at
/// 210 and -30 degrees. With the factor convention
/// `Phi[i][j] = Tr(V_i rho_E V_j†)` this assignment yields
/// `Phi[01][11](t) = cos^2 t - sin^2 t / 2 + i (sqrt(3)/2) sin^2 t`.
pub const BRANCH_AXES: [(f64, f64); 3] = [
    (0.0, 1.0),
    (-0.8660254037844386, -0.5), // 210 degrees
    (0.8660254037844386, -0.5),  // -30 degrees
];

fn axis_matrix(axis: (f64, f64)) -> CMatrix {
    pauli_x().scale(axis.0) + pauli_y().scale(axis.1)
}

/// `exp(-i (n.sigma) t) = cos(t) I - i sin(t) (n.sigma)` for a unit axis.
pub fn rotation(axis: (f64, f64), t: f64) -> CMatrix {
    identity(2).scale(t.cos()) + axis_matrix(axis).map(|z| z * c(0., -t.sin()))
}

/// The four branch unitaries `(V_00, V_01, V_10, V_11)` at time `t`.
pub fn trapped_ion_unitaries(t: f64) -> [CMatrix; 4] {
    [
        identity(2),
        rotation(BRANCH_AXES[0], t),
        rotation(BRANCH_AXES[1], t),
        rotation(BRANCH_AXES[2], t),
    ]
}

/// The model as a validated channel with environment state |0><0|.
pub fn trapped_ion_channel(t: f64) -> PureDephasingChannel {
    let mut rho_e = CMatrix::zeros(2, 2);
    rho_e[(0, 0)] = c(1., 0.);
    PureDephasingChannel::new(trapped_ion_unitaries(t).to_vec(), rho_e)
        .expect("model unitaries are exact")
}

/// Three-qubit generator `Σ_i |i><i| ⊗ h_i` whose evolution the circuit
/// realizes; `h_00 = 0`.
pub fn trapped_ion_hamiltonian() -> CMatrix {
    let mut h = CMatrix::zeros(8, 8);
    for (branch, axis) in BRANCH_AXES.iter().enumerate() {
        let mut proj = CMatrix::zeros(4, 4);
        proj[(branch + 1, branch + 1)] = c(1., 0.);
        h += kron(&proj, &axis_matrix(*axis));
    }
    h
}

/// `(|00> + |01> + |10> + |11>)/2` as a density matrix.
pub fn maximally_coherent_state() -> CMatrix {
    let v = CVector::from_element(4, c(0.5, 0.));
    &v * v.adjoint()
}
