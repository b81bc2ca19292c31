use alloc::string::String;
use core::fmt;

/// Errors produced by the numerical layer.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// An argument violated a documented precondition.
    Domain(String),
    /// Two objects that must share a grid do not.
    GridMismatch,
    /// An index fell outside the grid.
    IndexOutOfRange { axis: usize, index: usize, len: usize },
    /// The grid cannot resolve the requested construction; the message
    /// prescribes the minimum resolution.
    Resolution(String),
    /// A truncated sum could not reach the requested completeness.
    WindowInsufficient(String),
    /// An operation is outside the supported parameter range.
    Unsupported(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::Domain(m) => write!(f, "domain error: {m}"),
            CoreError::GridMismatch => write!(f, "grid mismatch"),
            CoreError::IndexOutOfRange { axis, index, len } => {
                write!(f, "index {index} out of range on axis {axis} (len {len})")
            }
            CoreError::Resolution(m) => write!(f, "insufficient resolution: {m}"),
            CoreError::WindowInsufficient(m) => write!(f, "window insufficient: {m}"),
            CoreError::Unsupported(m) => write!(f, "unsupported: {m}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, CoreError>;

pub(crate) fn domain(msg: impl fmt::Display) -> CoreError {
    CoreError::Domain(alloc::format!("{msg}"))
}
