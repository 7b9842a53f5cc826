use thiserror::Error;

/// Errors raised by the analytical and simulation engines.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates one of its invariants; the message names it.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot parse configuration: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// An argument lies outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: estimated error {achieved:.3e} exceeds tolerance {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    /// A quantity that must be a (partial) probability came out negative or above one.
    #[error("numerical consistency check failed: {0}")]
    Numerical(String),

    /// The channel to be precoded lies in the span of the nulled channels.
    #[error("degenerate channel: projection onto the null space vanished")]
    DegenerateChannel,

    #[error("network realization has no base station")]
    EmptyNetwork,

    #[error("evaluation failed at {param}: {source}")]
    Evaluator {
        param: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable identifier of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "invalid_config",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Domain(_) => "domain",
            Error::Quadrature { .. } => "quadrature",
            Error::Numerical(_) => "numerical",
            Error::DegenerateChannel => "degenerate_channel",
            Error::EmptyNetwork => "empty_network",
            Error::Evaluator { source, .. } => source.code(),
        }
    }
}
