use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors shared across the core modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Inconsistent matrix or vector dimensions.
    Dimension(String),
    /// Invalid argument (out-of-range index, bad parameter, failed validation).
    Argument(String),
    /// A row sum is zero where a positive degree is required (tau = 0).
    SingularDegree { snapshot: usize, node: usize },
    /// The iterative eigensolver did not converge within the iteration cap.
    NoConvergence { iterations: usize },
    /// Repeated context eigenvalues make the perturbation formula undefined.
    DegenerateSpectrum { gap: f64 },
    /// Edge-list parse failure.
    Parse { line: usize, message: String },
    /// Problem size exceeds the brute-force enumeration limit.
    TooLarge { n: usize, limit: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::Argument(msg) => write!(f, "invalid argument: {msg}"),
            Error::SingularDegree { snapshot, node } => write!(
                f,
                "zero degree for node {node} in snapshot {snapshot} with tau = 0"
            ),
            Error::NoConvergence { iterations } => {
                write!(f, "eigensolver did not converge after {iterations} iterations")
            }
            Error::DegenerateSpectrum { gap } => write!(
                f,
                "repeated context eigenvalues (gap {gap:.3e}); perturbation formula undefined"
            ),
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::TooLarge { n, limit } => {
                write!(f, "n = {n} exceeds brute-force limit {limit}")
            }
        }
    }
}

impl core::error::Error for Error {}
