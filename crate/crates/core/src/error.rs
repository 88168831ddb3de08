use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} must be finite, got {value}")]
    NotFinite { name: &'static str, value: f64 },

    #[error("{name} = {value} lies outside ({low}, {high})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        low: f64,
        high: f64,
    },

    #[error("length mismatch: expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("at least {needed} grid nodes are required, found {found}")]
    TooFewNodes { needed: usize, found: usize },

    #[error("grid nodes must be strictly increasing and positive (node {index})")]
    UnorderedNodes { index: usize },

    #[error("grid nodes are neither log-spaced nor linearly spaced")]
    IrregularNodes,

    #[error("density must be nonnegative, node {index} has {value}")]
    NegativeDensity { index: usize, value: f64 },

    #[error("nuclear charge must be nonnegative, nucleus {index} has {value}")]
    NegativeCharge { index: usize, value: f64 },

    #[error("a molecule needs at least one nucleus")]
    EmptyConfig,

    #[error("nuclei {first} and {second} occupy the same position")]
    CoincidentNuclei { first: usize, second: usize },

    #[error("point coincides with nucleus {nucleus}, where the potential is singular")]
    SingularPoint { nucleus: usize },

    #[error("the inscribed ball is unbounded for a single nucleus")]
    UnboundedCell,

    #[error("weight function must vanish at the ball radius, got u(R) = {value}")]
    BoundaryWeight { value: f64 },

    #[error("all nuclear charges must be equal for this operation")]
    UnequalCharges,

    #[error("extremal profile denominator is nonpositive at r = {radius}")]
    NonpositiveDenominator { radius: f64 },

    #[error("power-law exponent must be at least 4, got {value}")]
    InvalidExponent { value: f64 },

    #[error("search budget must be at least {minimum} evaluations, got {budget}")]
    BudgetTooSmall { budget: usize, minimum: usize },

    #[error("Schwarz bound violated: lhs = {lhs} with vanishing rhs")]
    SchwarzViolation { lhs: f64 },

    #[error("{0}")]
    Invalid(String),
}
