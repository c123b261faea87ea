use otto_spin_core::OttoError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or missing flags; exit status 2.
    #[error("{0}")]
    Usage(String),
    /// The computation itself failed; exit status 1.
    #[error("{name}: {0}", name = .0.name())]
    Domain(OttoError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<OttoError> for CliError {
    fn from(e: OttoError) -> Self {
        match &e {
            OttoError::NonPositiveTemperature(_) | OttoError::BadTemperatures { .. } => {
                CliError::Usage(format!("invalid temperatures --tc/--th: {e}"))
            }
            OttoError::NegativeShift { name, .. } | OttoError::NonFinite(name) => CliError::Usage(
                format!("invalid value for --{}: {e}", name.replace('_', "-")),
            ),
            OttoError::InvalidWindow(_) => CliError::Usage(format!(
                "invalid window --x-min/--x-max/--y-min/--y-max: {e}"
            )),
            OttoError::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
