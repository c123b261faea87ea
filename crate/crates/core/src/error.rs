use thiserror::Error;

/// Errors produced by the thermodynamic and optimization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OttoError {
    #[error("temperature must be strictly positive and finite, got {0}")]
    NonPositiveTemperature(f64),

    #[error("bath temperatures must satisfy 0 < tc <= th, got tc={tc}, th={th}")]
    BadTemperatures { tc: f64, th: f64 },

    #[error("non-finite parameter `{0}`")]
    NonFinite(&'static str),

    #[error("level shift `{name}` must be non-negative, got {value}")]
    NegativeShift { name: &'static str, value: f64 },

    #[error("level lists must have equal length, got {expected} and {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("sign pattern (q_c={q_c:+e}, w={w:+e}, q_h={q_h:+e}) is forbidden by the laws of thermodynamics")]
    ForbiddenModePattern { q_c: f64, w: f64, q_h: f64 },

    #[error("(r1_i={r1_i}, r1_f={r1_f}) is outside the engine window")]
    OutsideEngineWindow { r1_i: f64, r1_f: f64 },

    #[error("level shift must be nonzero")]
    ZeroShift,

    #[error("kappa does not cross 1 on the bracket [0, {r_max}]")]
    NoRoot { r_max: f64 },

    #[error("boundary curve {curve} has no point inside the requested window")]
    EmptyDomain { curve: u8 },

    #[error("no extremum with the requested work sign in the window")]
    EmptyResult,

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl OttoError {
    /// Stable variant name, used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            OttoError::NonPositiveTemperature(_) => "NonPositiveTemperature",
            OttoError::BadTemperatures { .. } => "BadTemperatures",
            OttoError::NonFinite(_) => "NonFinite",
            OttoError::NegativeShift { .. } => "NegativeShift",
            OttoError::LengthMismatch { .. } => "LengthMismatch",
            OttoError::ForbiddenModePattern { .. } => "ForbiddenModePattern",
            OttoError::OutsideEngineWindow { .. } => "OutsideEngineWindow",
            OttoError::ZeroShift => "ZeroShift",
            OttoError::NoRoot { .. } => "NoRoot",
            OttoError::EmptyDomain { .. } => "EmptyDomain",
            OttoError::EmptyResult => "EmptyResult",
            OttoError::InvalidWindow(_) => "InvalidWindow",
            OttoError::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, OttoError>;

pub(crate) fn check_temperature(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(OttoError::NonPositiveTemperature(t))
    }
}

pub(crate) fn check_baths(tc: f64, th: f64) -> Result<()> {
    if tc.is_finite() && th.is_finite() && tc > 0.0 && tc <= th {
        Ok(())
    } else {
        Err(OttoError::BadTemperatures { tc, th })
    }
}
