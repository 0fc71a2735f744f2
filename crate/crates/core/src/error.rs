use thiserror::Error;

/// Errors raised by the algebra, group and slice-map routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A supplied J-map family violates an H-type identity. `witness` is the
    /// center vector Z (or pair of basis indices flattened) exposing the failure.
    #[error("H-type axiom violated: {identity} (witness Z = {witness:?}, residual {residual:.3e})")]
    HTypeAxiom {
        identity: String,
        witness: Vec<f64>,
        residual: f64,
    },

    #[error("series division by a series with zero constant term")]
    SingularSeries,

    #[error("numeric overflow: {0}")]
    NumericOverflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
