use thiserror::Error;

use crate::tracepoly::Mode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mode mismatch: {left} vs {right}")]
    ModeMismatch { left: Mode, right: Mode },

    #[error("operation not defined in mode {mode}: {reason}")]
    ModeUnsupported { mode: Mode, reason: String },

    #[error("degree {degree} exceeds the basis order k = {k}")]
    DegreeExceeds { degree: u32, k: u32 },

    #[error("unknown basis `{basis}` for mode {mode}")]
    UnknownBasis { basis: String, mode: Mode },

    #[error("coordinate extraction failed: {0}")]
    Coordinates(String),

    #[error("characteristic polynomial of block {block} has a factor with no rational root: {factor}")]
    IrrationalSpectrum { block: u32, factor: String },

    #[error("{0} is not an eigenvalue of the matrix")]
    NotAnEigenvalue(String),

    #[error("invalid representation labels j1 = {j1}, j2 = {j2}: {reason}")]
    Parity {
        j1: String,
        j2: String,
        reason: &'static str,
    },

    #[error("character {label} with eigenvalue {eigenvalue} is not contained in its eigenspace")]
    CharacterMismatch { label: String, eigenvalue: String },

    #[error("point is off the sphere: |x| = {norm}, R = {radius}")]
    OffSphere { norm: f64, radius: f64 },

    #[error("Haar sampling failed after {0} retries")]
    DegenerateSample(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
