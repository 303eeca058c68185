use alloc::string::String;

/// Errors raised by the core analysis routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("cannot parse `{0}` as a number")]
    Parse(String),
    #[error("operation requires exact arithmetic but got a float value")]
    NotExact,
    #[error("matrix contains a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("matrix is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("matrix is not square")]
    NotSquare,
    #[error("lattice pair ({i}, {j}) is outside degree bound {n}")]
    IndexOutOfRange { i: u32, j: u32, n: u32 },
    #[error("path step {0} is not a unit step east or north")]
    InvalidPath(usize),
    #[error("1/t is not integrable: {0}")]
    NotIntegrable(String),
    #[error("borderline float verdict at u = ({0}, {1}) and no exact fallback")]
    Borderline(u32, u32),
    #[error("bisection bracket is not monotone: y2 = {lo} -> {lo_holds}, y2 = {hi} -> {hi_holds}")]
    BracketNotMonotone {
        lo: String,
        hi: String,
        lo_holds: bool,
        hi_holds: bool,
    },
    #[error("division by zero")]
    DivisionByZero,
}

pub type Result<T> = core::result::Result<T, Error>;
