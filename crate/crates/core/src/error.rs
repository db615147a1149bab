use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShfError {
    /// Parameters outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter lies outside the range in which a bound is proven.
    #[error("range error: {0}")]
    Range(String),

    /// A bound's stated hypothesis does not hold.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("symbol {symbol} at column {column} is not below q = {q}")]
    Symbol { symbol: u32, column: usize, q: u32 },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

pub type Result<T, E = ShfError> = std::result::Result<T, E>;

pub(crate) fn domain<T>(message: impl Into<String>) -> Result<T> {
    Err(ShfError::Domain(message.into()))
}
