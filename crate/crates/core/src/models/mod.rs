//! Model parameters, device formulas and Hamiltonian builders.

pub mod device;
pub mod hamiltonians;
pub mod params;

pub use device::{
    cantilever_params, dressed_states, magnetic_coupling, mechanical_damping, pump_amplitude, spring_modulation,
    strain_coupling, to_lambda_units, CantileverMode, DeviceParams, DressedStates,
};
pub use hamiltonians::{
    build_correction, build_interaction_picture, build_ising, build_oat, build_squeezed_rabi, build_time_dependent,
    build_total_hamiltonian, ising_couplings, ConstantSqueeze, FnSchedule, FrameTerms, ModeOperators, SqueezeSchedule,
    TanhRamp, TimeDependentHamiltonian,
};
pub use params::{
    cooperativity, coupling_enhancement, derive_squeeze_params, engineered_dissipation, ising_strength,
    lamb_dicke_boundary, lamb_dicke_eta, spin_spin_enhancement, squeezing_from_pump_ratio, Cooperativity,
    EngineeredDissipation, LambDicke, ModelParams, SqueezeParams,
};
