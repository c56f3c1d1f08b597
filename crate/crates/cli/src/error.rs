use thiserror::Error;

/// Exit code for invalid specs and arguments.
pub const EXIT_SPEC: i32 = 2;
/// Exit code for failures while running a valid spec.
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error("run failed: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => EXIT_SPEC,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl From<gaplab::Error> for CliError {
    fn from(e: gaplab::Error) -> Self {
        use gaplab::Error as E;
        match e {
            E::SearchExhausted { .. } | E::InconsistentSample | E::NotSelfConsistent(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Spec(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Spec(e.to_string())
    }
}
