//! Simulation of finite-dimensional pure-dephasing open-system dynamics and
//! certification of system-environment entanglement from the reduced channel.

pub mod dephasing;
pub mod error;
pub mod he_analysis;
pub mod models;
pub mod qmat;
pub mod witness;

pub use dephasing::{DephasingFactorMatrix, PureDephasingChannel};
pub use error::{Error, Result};
pub use qmat::{CMatrix, CVector, Complex64};
pub use witness::{EoaOptions, LogBase, QaOptions, WitnessReport};
