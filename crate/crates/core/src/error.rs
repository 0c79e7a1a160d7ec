use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid medium: {0}")]
    InvalidMedium(String),

    #[error("invalid extension parameters: {0}")]
    InvalidExtension(String),

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("boundary matrix at 0+ is singular (condition number {condition:e})")]
    SingularBoundaryMatrix { condition: f64 },

    #[error("extension decouples the half-lines (|a1| = {a1:e}); no transmission matrix exists")]
    DegenerateExtension { a1: f64 },

    #[error("named extensions need equal Fermi velocities, got v_l = {left}, v_r = {right}")]
    VelocityMismatch { left: f64, right: f64 },

    #[error("strength {strength} violates the sign convention of the {family} family")]
    StrengthSignError { family: &'static str, strength: f64 },

    #[error("energy {energy} is not above the scattering threshold {threshold}")]
    BelowThreshold { energy: f64, threshold: f64 },

    #[error("scattering system is singular at E = {energy}")]
    SingularSystem { energy: f64 },

    #[error("energy {energy} is outside the bound-state window ({emin}, {emax})")]
    OutsideWindow { energy: f64, emin: f64, emax: f64 },

    #[error("pure vector matching matrix needs non-zero masses on both sides")]
    MasslessRatio,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
