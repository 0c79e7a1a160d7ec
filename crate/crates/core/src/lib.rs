//! Self-adjoint point interactions for the one-dimensional Dirac equation
//! across a junction of two media with position-dependent mass and velocity.
//!
//! The boundary conditions at the junction are encoded by a 2x2 matching
//! matrix `T` with `phi(0+) = T phi(0-)`. Matrices come either from a unitary
//! `U` (one per self-adjoint extension) or from four named one-parameter
//! families. On top of that the crate computes scattering amplitudes,
//! reflectionless energies, bound states, and numerical checks of the
//! underlying deficiency solutions.

pub mod deficiency;
pub mod error;
pub mod linalg;
pub mod matching;
pub mod model;
pub mod roots;
pub mod scattering;
pub mod spectral;
pub mod validation;

pub use deficiency::{boundary_value, deficiency_spinor};
pub use error::{Error, Result};
pub use linalg::{Mat2, C64};
pub use matching::{matching_closed_form, matching_from_unitary, named_matrix, MatchingMatrix};
pub use model::{EigenSign, ExtensionParams, Family, Junction, Medium, NamedExtension, Side, SpinorSample, UnitaryMatrix};
pub use scattering::{
    amplitudes_closed, amplitudes_solve, find_reflection_zeros, flux_transmission, high_energy_transmission,
    zero_momentum_resonances, Direction, EnergyWindow, HighEnergyTransmission, Interaction, PureVectorBound,
    ReflectionZeros, ScatteringAmplitudes,
};
pub use spectral::{
    equal_mass_crossings, equal_mass_energy, find_bound_states, find_general_bound_states, spectral_residual,
    sweep_strength, BoundSource, BoundState, SweepTable,
};
pub use validation::{deficiency_indices, determinant_audit, eigen_residual, DeterminantReport, ResidualReport};
