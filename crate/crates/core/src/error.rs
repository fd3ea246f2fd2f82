use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the function.
    Domain { what: &'static str, value: f64 },
    /// A structural parameter was rejected by a constructor.
    InvalidParameter { name: &'static str, reason: &'static str },
    /// The Gamma function has a pole at nonpositive integers.
    Pole { x: f64 },
    /// The Bessel-K power series requires a non-integer order.
    IntegerOrder { order: f64 },
    /// A series hit its term limit before meeting its tolerance.
    NonConvergence { what: &'static str, terms: usize },
    /// Adaptive quadrature ran out of subdivisions.
    QuadratureNonConvergence { estimate: f64, error: f64 },
    /// A truncated BER series went negative; more terms are needed.
    NegativeSeries { value: f64, terms: usize },
    /// The asymptotic BER form needs alpha > beta.
    ParameterOrder { alpha: f64, beta: f64 },
    /// The rejection sampler accepted nothing in a full window of proposals.
    RejectionStall { proposals: u64 },
    /// A Monte-Carlo estimate is too noisy to report.
    InsufficientSamples { relative_error: f64 },
    /// The degenerate split is a point mass and has no density.
    DegenerateModel,
    /// The degenerate/uniform SNR ratio is identically one for MRC.
    MrcRatio,
    /// The objective returned NaN or an infinity at the given draw.
    NonFinite { index: u64, value: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what}: argument {value} out of domain"),
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::Pole { x } => write!(f, "gamma function pole at {x}"),
            Error::IntegerOrder { order } => {
                write!(f, "Bessel-K series needs a non-integer order, got {order}")
            }
            Error::NonConvergence { what, terms } => {
                write!(f, "{what} did not converge within {terms} terms")
            }
            Error::QuadratureNonConvergence { estimate, error } => write!(
                f,
                "quadrature did not converge (estimate {estimate:e}, error {error:e})"
            ),
            Error::NegativeSeries { value, terms } => write!(
                f,
                "BER series truncated at {terms} terms is negative ({value:e}); increase the term count"
            ),
            Error::ParameterOrder { alpha, beta } => write!(
                f,
                "asymptotic BER requires alpha > beta (alpha = {alpha}, beta = {beta})"
            ),
            Error::RejectionStall { proposals } => {
                write!(f, "rejection sampler stalled: no acceptance in {proposals} proposals")
            }
            Error::InsufficientSamples { relative_error } => write!(
                f,
                "relative standard error {relative_error:.3} exceeds 10%; use more samples"
            ),
            Error::DegenerateModel => f.write_str("degenerate split is a point mass with no density"),
            Error::MrcRatio => f.write_str("MRC average SNR does not depend on the split model"),
            Error::NonFinite { index, value } => {
                write!(f, "objective is not finite ({value}) at draw {index}")
            }
        }
    }
}

impl core::error::Error for Error {}
