use sublevel::asym::AsymError;
use sublevel::empirics::EmpiricsError;
use sublevel::mgcheck::MgError;
use sublevel::polynomial::PolyError;
use thiserror::Error;

/// Failures that end a command. Each maps to one stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;
pub const EXIT_MG_VIOLATION: i32 = 4;
pub const EXIT_UNSUPPORTED: i32 = 5;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Inconsistent(_) => EXIT_INCONSISTENT,
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
            CliError::Usage(_) | CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<AsymError> for CliError {
    fn from(e: AsymError) -> Self {
        // geometry and LP failures on valid input are internal faults too
        CliError::Inconsistent(e.to_string())
    }
}

impl From<MgError> for CliError {
    fn from(e: MgError) -> Self {
        match e {
            MgError::Poly(p) => p.into(),
            MgError::Inconsistent(_) | MgError::Geom(_) | MgError::FaceMismatch => {
                CliError::Inconsistent(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<EmpiricsError> for CliError {
    fn from(e: EmpiricsError) -> Self {
        match e {
            EmpiricsError::Asym(a) => a.into(),
            other if other.is_unsupported() => CliError::Unsupported(other.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sublevel::PolynomialMap;

    #[test]
    fn errors_map_to_stable_exit_codes() {
        let parse: CliError = PolynomialMap::parse("x1 +", 1).unwrap_err().into();
        assert_eq!(parse.exit_code(), EXIT_PARSE);
        let unsupported: CliError = EmpiricsError::InfiniteVolume.into();
        assert_eq!(unsupported.exit_code(), EXIT_UNSUPPORTED);
        let budget: CliError = EmpiricsError::TooFewPoints { got: 3 }.into();
        assert_eq!(budget.exit_code(), EXIT_FAILURE);
        let inconsistent: CliError = AsymError::Inconsistent("routes differ".into()).into();
        assert_eq!(inconsistent.exit_code(), EXIT_INCONSISTENT);
        let io: CliError = std::io::Error::other("disk").into();
        assert_eq!(io.exit_code(), EXIT_FAILURE);
    }
}
