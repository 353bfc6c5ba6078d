//! Built-in physical models: the trapped-ion controlled-dephasing circuit,
//! the gravitationally coupled particle-oscillator model, and the random
//! pure-dephasing sampler.

mod circuit;
mod gravity;
mod sampler;
mod tomography;
mod trapped_ion;

pub use circuit::{ccrz_decomposition, experiment_circuit, Circuit, Gate};
pub use gravity::{gravity_params, gravity_phi, GravityInputs, GravityParams};
pub use sampler::{
    gram_and_negativity, random_dephasing_sample, scan, scan_summary, BinnedMinimum, SampleRecord,
};
pub use tomography::{exact_pauli_expectations, simulate_tomography};
pub use trapped_ion::{
    maximally_coherent_state, trapped_ion_channel, trapped_ion_hamiltonian, trapped_ion_unitaries,
    BRANCH_AXES,
};
