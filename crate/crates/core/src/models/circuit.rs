//! Gate-level statevector circuit model used to realize the controlled
//! dephasing evolution with two-qubit CZ gates and single-qubit rotations.
//!
//! Qubit 0 is the most significant bit of the basis index. Gates are applied
//! left to right.

use crate::error::{Error, Result};
use crate::qmat::{c, identity, pauli_x, pauli_y, CMatrix, Complex64};

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// Rotation about z by `theta`: `diag(e^{-i theta/2}, e^{i theta/2})`.
    Rz { target: usize, theta: f64 },
    /// Rotation about a unit axis `(x, y)` in the equatorial plane.
    Rn {
        target: usize,
        theta: f64,
        axis: (f64, f64),
    },
    X { target: usize },
    H { target: usize },
    Cz { a: usize, b: usize },
    /// Doubly controlled z rotation of the target.
    Ccrz {
        controls: (usize, usize),
        target: usize,
        theta: f64,
    },
    /// Doubly controlled rotation about an equatorial axis.
    Ccrn {
        controls: (usize, usize),
        target: usize,
        theta: f64,
        axis: (f64, f64),
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

fn rz_matrix(theta: f64) -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 0)] = Complex64::from_polar(1.0, -theta / 2.0);
    m[(1, 1)] = Complex64::from_polar(1.0, theta / 2.0);
    m
}

fn rn_matrix(theta: f64, axis: (f64, f64)) -> Result<CMatrix> {
    let norm = (axis.0 * axis.0 + axis.1 * axis.1).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput {
            path: "axis".into(),
            reason: format!("axis norm {norm} != 1"),
        });
    }
    let n_sigma = pauli_x().scale(axis.0) + pauli_y().scale(axis.1);
    Ok(identity(2).scale((theta / 2.0).cos()) + n_sigma.map(|z| z * c(0., -(theta / 2.0).sin())))
}

fn h_matrix() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)])
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    fn check_index(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::IndexOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    fn bit_mask(&self, q: usize) -> usize {
        1 << (self.n_qubits - 1 - q)
    }

    /// Full matrix of a single-qubit gate, optionally under two controls.
    fn controlled_single(
        &self,
        controls: Option<(usize, usize)>,
        target: usize,
        g: &CMatrix,
    ) -> CMatrix {
        let dim = 1 << self.n_qubits;
        let tmask = self.bit_mask(target);
        let cmask = controls.map(|(a, b)| self.bit_mask(a) | self.bit_mask(b));
        let mut out = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            let active = cmask.map_or(true, |m| i & m == m);
            if !active {
                out[(i, i)] = c(1., 0.);
                continue;
            }
            let bi = usize::from(i & tmask != 0);
            for bj in 0..2 {
                let j = (i & !tmask) | (bj * tmask);
                out[(i, j)] = g[(bi, bj)];
            }
        }
        out
    }

    fn gate_matrix(&self, gate: &Gate) -> Result<CMatrix> {
        Ok(match gate {
            Gate::Rz { target, theta } => {
                self.check_index(*target)?;
                self.controlled_single(None, *target, &rz_matrix(*theta))
            }
            Gate::Rn {
                target,
                theta,
                axis,
            } => {
                self.check_index(*target)?;
                self.controlled_single(None, *target, &rn_matrix(*theta, *axis)?)
            }
            Gate::X { target } => {
                self.check_index(*target)?;
                self.controlled_single(None, *target, &pauli_x())
            }
            Gate::H { target } => {
                self.check_index(*target)?;
                self.controlled_single(None, *target, &h_matrix())
            }
            Gate::Cz { a, b } => {
                self.check_index(*a)?;
                self.check_index(*b)?;
                let dim = 1 << self.n_qubits;
                let mask = self.bit_mask(*a) | self.bit_mask(*b);
                let mut out = CMatrix::zeros(dim, dim);
                for i in 0..dim {
                    out[(i, i)] = if i & mask == mask { c(-1., 0.) } else { c(1., 0.) };
                }
                out
            }
            Gate::Ccrz {
                controls,
                target,
                theta,
            } => {
                self.check_index(controls.0)?;
                self.check_index(controls.1)?;
                self.check_index(*target)?;
                self.controlled_single(Some(*controls), *target, &rz_matrix(*theta))
            }
            Gate::Ccrn {
                controls,
                target,
                theta,
                axis,
            } => {
                self.check_index(controls.0)?;
                self.check_index(controls.1)?;
                self.check_index(*target)?;
                self.controlled_single(Some(*controls), *target, &rn_matrix(*theta, *axis)?)
            }
        })
    }

    /// Composite unitary with gates applied left to right.
    pub fn unitary(&self) -> Result<CMatrix> {
        let dim = 1 << self.n_qubits;
        let mut u = identity(dim);
        for gate in &self.gates {
            u = self.gate_matrix(gate)? * u;
        }
        Ok(u)
    }
}

/// Distance up to global phase between equally sized unitaries, normalized so
/// that identical operators give 0 and orthogonal ones sqrt(2).
pub fn phase_distance(u: &CMatrix, v: &CMatrix) -> f64 {
    let n = u.nrows() as f64;
    let overlap = (u.adjoint() * v).trace().norm() / n;
    (2.0 - 2.0 * overlap).max(0.0).sqrt()
}

/// Decomposition of a doubly controlled z rotation into four CZ gates, four
/// equatorial rotations by `theta/4`, and a basis change on the target.
///
/// The target is cycled through the conjugate basis; the rotations then
/// accumulate the parity-dependent phase `theta (b_t - 1/2)` exactly when
/// both controls are set, and cancel otherwise.
pub fn ccrz_decomposition(theta: f64) -> Circuit {
    let alpha = theta / 4.0;
    let x_axis = (1.0, 0.0);
    let mut circ = Circuit::new(3);
    circ.push(Gate::H { target: 2 });
    for (rot, cz_control) in [(alpha, 0), (-alpha, 1), (alpha, 0), (-alpha, 1)] {
        circ.push(Gate::Rn {
            target: 2,
            theta: rot,
            axis: x_axis,
        });
        circ.push(Gate::Cz { a: cz_control, b: 2 });
    }
    circ.push(Gate::H { target: 2 });
    circ
}

fn native_ccrn(circ: &mut Circuit, theta: f64, axis_angle: f64) {
    let alpha = theta / 4.0;
    let x_axis = (1.0, 0.0);
    circ.push(Gate::Rz {
        target: 2,
        theta: -axis_angle,
    });
    // equatorial-axis variant of the CZ gadget: H Rz H = Rn(x)
    for (rot, cz_control) in [(alpha, 0), (-alpha, 1), (alpha, 0), (-alpha, 1)] {
        circ.push(Gate::Rn {
            target: 2,
            theta: rot,
            axis: x_axis,
        });
        circ.push(Gate::Cz { a: cz_control, b: 2 });
    }
    circ.push(Gate::Rz {
        target: 2,
        theta: axis_angle,
    });
}

/// Native-gate circuit realizing the three-branch controlled dephasing at
/// rotation angle `theta = 2 t`: qubits 0 and 1 are the system, qubit 2 the
/// environment. White controls are produced by X conjugation of the control.
pub fn experiment_circuit(theta: f64) -> Circuit {
    let mut circ = Circuit::new(3);
    let axes: [(f64, f64); 3] = super::BRANCH_AXES;
    let angles = axes.map(|(x, y)| y.atan2(x));

    // branch 01: control qubit 0 on |0>
    circ.push(Gate::X { target: 0 });
    native_ccrn(&mut circ, theta, angles[0]);
    circ.push(Gate::X { target: 0 });
    // branch 10: control qubit 1 on |0>
    circ.push(Gate::X { target: 1 });
    native_ccrn(&mut circ, theta, angles[1]);
    circ.push(Gate::X { target: 1 });
    // branch 11
    native_ccrn(&mut circ, theta, angles[2]);
    circ
}
