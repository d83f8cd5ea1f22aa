use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("division by a structurally zero expression")]
    DivisionByZero,
    #[error("no binding for symbol `{0}`")]
    MissingBinding(String),
    #[error("denominator evaluates to zero")]
    Pole,
    #[error("binding for `{0}` is not a finite number")]
    NonFiniteBinding(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("label of {0} is structurally zero")]
    ZeroLabel(String),
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("matrix is singular")]
    Singular,
    #[error("network has no synthesis or degradation edges")]
    NoPartialEdges,
    #[error("complementary digraph is not strongly connected")]
    NotStronglyConnected,
    #[error("steady-state existence conditions are violated")]
    NoSteadyState,
    #[error("trajectory diverged at t = {time}")]
    Diverged { time: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
