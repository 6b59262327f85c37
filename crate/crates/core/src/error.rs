use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: operands live in different rings")]
    RingMismatch,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),

    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    #[error("exponent overflow: monomials support at most 8 variables with exponents below 128")]
    ExponentOverflow,

    #[error("not m-primary or raise --nmax (length still growing at truncation degree {degree})")]
    NotPrimary { degree: u32 },

    #[error("containment failure: generator `{generator}` of the inner ideal is not in the outer ideal")]
    NotContained { generator: String },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("n_max too small: {0}")]
    NmaxTooSmall(String),

    #[error("series not stabilized within n_max = {0}")]
    SeriesNotStabilized(usize),

    #[error("non-integral Hilbert coefficient while fitting: {0}")]
    NonIntegral(String),

    #[error("reduction not certified; raise --rmax (tried r <= {rmax}, {attempts} attempt(s))")]
    ReductionNotCertified { rmax: usize, attempts: usize },

    #[error("Ratliff-Rush colon chain did not stabilize before k = {0}")]
    NoStabilization(usize),

    #[error("no superficial element found after {0} attempt(s)")]
    SuperficialNotFound(usize),

    #[error("soundness violation: {0}")]
    Soundness(String),
}

impl Error {
    /// Process exit code: 2 for input problems, 3 for exhausted resource
    /// ceilings, 1 for verdict violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::UndeclaredVariable(_)
            | Error::NotPrime(_)
            | Error::Input(_)
            | Error::RingMismatch
            | Error::Unsupported(_) => 2,
            Error::NotPrimary { .. }
            | Error::NmaxTooSmall(_)
            | Error::SeriesNotStabilized(_)
            | Error::ReductionNotCertified { .. }
            | Error::NoStabilization(_)
            | Error::SuperficialNotFound(_)
            | Error::ExponentOverflow => 3,
            Error::Soundness(_) | Error::NonIntegral(_) => 1,
            Error::Arithmetic(_) | Error::NotContained { .. } => 2,
        }
    }
}
