use alloc::string::String;

/// Errors raised by the library.
///
/// Invalid structures are *not* errors: axiom failures are reported through
/// [`ValidationReport`](crate::ValidationReport) and theorem failures through
/// audit entries. Errors are reserved for malformed input and capacity limits.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("index out of range: {what} = {value}, bound {bound}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        bound: usize,
    },
    #[error("capacity exceeded: {what} is {actual}, limit {limit}")]
    Capacity {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}
