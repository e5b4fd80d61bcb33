use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic two unsupported")]
    CharacteristicTwo,
    #[error("field with {0} elements exceeds the table limit")]
    FieldTooLarge(u64),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular model: f is not squarefree")]
    SingularModel,
    #[error("unsupported degree {0}: the curve model needs a monic quintic")]
    UnsupportedDegree(usize),
    #[error("enumeration limit exceeded: {size} > {limit}")]
    GuardExceeded { size: u64, limit: u64 },
    #[error("valuation of the zero function is +infinity")]
    ZeroFunction,
    #[error("objects belong to different curves")]
    CurveMismatch,
    #[error("expected ordinary curve")]
    NotOrdinary,
    #[error("class not of exact order p")]
    NotOrderP,
    #[error("trivialization mismatch: div(g) is not p times the class representative")]
    BadTrivialization,
    #[error("Frobenius on a twisted H^1 needs a trivialization")]
    MissingTrivialization,
    #[error("mismatched bundle divisors")]
    BundleMismatch,
    #[error("excluded pencil: A is linearly equivalent to K + point")]
    ExcludedPencil,
    #[error("pencil has h^0 = {0}, expected 2")]
    PencilDimension(usize),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(Box<crate::obstruction::SearchStats>),
    #[error("degenerate chart data: {0}")]
    DegenerateChart(String),
    #[error("extend field: {0}")]
    ExtendField(String),
    #[error("nefness violated by curve {index}: L.A = {degree}")]
    NotNef { index: usize, degree: i64 },
    #[error("Rankin hypothesis violated by pair ({0}, {1})")]
    RankinHypothesis(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("degenerate Gram matrix (nullity {0})")]
    DegenerateGram(usize),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}
