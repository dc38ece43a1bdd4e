use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building objects or evaluating bounds.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A probability vector failed validation (negative mass, NaN, or a sum
    /// away from one by more than the stated tolerance).
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A stochastic matrix failed validation.
    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    /// Two objects that must agree on an alphabet size do not.
    #[error("dimension mismatch in {context}: {left} vs {right}")]
    DimensionMismatch {
        /// What was being combined.
        context: &'static str,
        /// Size on the left operand.
        left: usize,
        /// Size on the right operand.
        right: usize,
    },

    /// A product construction would materialise more entries than the cap.
    #[error("product space needs {required} entries, above the cap of {cap}")]
    SizeCapExceeded {
        /// Entries the construction would allocate.
        required: u128,
        /// Configured cap.
        cap: usize,
    },

    /// A scalar parameter is outside its admissible range.
    #[error("{name} = {value} outside {range}")]
    OutOfRange {
        /// Parameter name.
        name: &'static str,
        /// Offending value.
        value: f64,
        /// Human-readable admissible range.
        range: &'static str,
    },

    /// Exhaustive enumeration was requested beyond the supported size.
    #[error("enumeration supports k <= {cap}, got k = {k}")]
    EnumerationCap {
        /// Requested input length.
        k: usize,
        /// Hard cap.
        cap: usize,
    },

    /// An iterative optimiser stopped without meeting its certificate.
    #[error("optimizer stopped after {iterations} iterations with stationarity residual {residual:.3e}")]
    NonConvergence {
        /// Iterations spent.
        iterations: usize,
        /// Final stationarity residual (0 means certified).
        residual: f64,
        /// Best objective value reached.
        best_value: f64,
        /// Best iterate reached.
        best_point: Vec<f64>,
    },

    /// A request was structurally valid but semantically inconsistent.
    #[error("{0}")]
    InvalidArgument(String),

    /// JSON input could not be parsed into the expected schema.
    #[error("malformed input{}: {message}", path.as_ref().map(|p| format!(" in {p}")).unwrap_or_default())]
    MalformedInput {
        /// File the input came from, when known.
        path: Option<String>,
        /// Parser or schema error, naming the offending field when possible.
        message: String,
    },
}

impl Error {
    pub(crate) fn invalid_distribution(msg: impl Into<String>) -> Self {
        Error::InvalidDistribution(msg.into())
    }

    pub(crate) fn invalid_channel(msg: impl Into<String>) -> Self {
        Error::InvalidChannel(msg.into())
    }

    pub(crate) fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
