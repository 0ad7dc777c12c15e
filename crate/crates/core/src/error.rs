use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree window too small: {0}")]
    DegreeWindowTooSmall(String),
    #[error("window too short: {0}")]
    WindowTooShort(String),
    #[error("window mismatch: {0}")]
    WindowMismatch(String),
    #[error("degree {0} lies outside the window")]
    OutOfRange(i64),
    #[error("module action does not commute: {0}")]
    NotCommutative(String),
    #[error("input is not a linear strand: {0}")]
    NonLinearInput(String),
    #[error("module is not finitely generated inside the window (generator in degree {0})")]
    NotFinitelyGeneratedInWindow(i64),
    #[error("resolution chain too short: {0}")]
    InsufficientChain(String),
    #[error("computed Betti table is not pure: {0}")]
    PurityCheckFailed(String),
    #[error("morphism is not surjective in degree {0}")]
    MuNotSurjective(i64),
    #[error("no surjection found after {0} attempts")]
    NoSurjectionFound(usize),
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("monad condition failed: {0}")]
    MonadConditionFailed(String),
    #[error("coefficient {value} cannot be reduced modulo {modulus}")]
    FieldReductionImpossible { value: String, modulus: u64 },
    #[error("evaluation point is zero")]
    ZeroPoint,
    #[error("pencil is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("root module is not linearly presented: {0}")]
    RootNotLinear(String),
    #[error("malformed document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
