use thiserror::Error;

/// Errors raised by library operations. `code()` is the stable machine-readable tag.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("valuation of zero")]
    ValuationOfZero,
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("point not in the unit polydisc at {place}")]
    NotInUnitPolydisc { place: String },
    #[error("degenerate map: resultant is zero")]
    DegenerateMap,
    #[error("singular curve: discriminant is zero")]
    SingularCurve,
    #[error("budget exceeded, increase budget or reduce k ({0})")]
    BudgetExceeded(String),
    #[error("spanning failure: good-basis hypothesis violated ({0})")]
    SpanningFailure(String),
    #[error("wrong tuple length: expected {expected}, got {got}")]
    WrongTupleLength { expected: usize, got: usize },
    #[error("point is not on the target variety")]
    PointOffTarget,
    #[error("isotrivial curve: j-invariant is constant")]
    Isotrivial,
    #[error("repeated points in sample")]
    RepeatedPoints,
    #[error("point does not reduce to the identity component at {place}")]
    NonzeroComponentIndex { place: String },
    #[error("place {place} is not a place of multiplicative reduction")]
    NonMultiplicativePlace { place: String },
    #[error("operation undefined at the point at infinity")]
    PointAtInfinity,
    #[error("not a Hilbert polynomial of a subscheme: {0}")]
    NotHilbertPolynomial(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::ValuationOfZero => "valuation_of_zero",
            Error::Parse { .. } => "parse_error",
            Error::NotInUnitPolydisc { .. } => "not_in_unit_polydisc",
            Error::DegenerateMap => "degenerate_map",
            Error::SingularCurve => "singular_curve",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::SpanningFailure(_) => "spanning_failure",
            Error::WrongTupleLength { .. } => "wrong_tuple_length",
            Error::PointOffTarget => "point_off_target",
            Error::Isotrivial => "isotrivial",
            Error::RepeatedPoints => "repeated_points",
            Error::NonzeroComponentIndex { .. } => "nonzero_component_index",
            Error::NonMultiplicativePlace { .. } => "non_multiplicative_place",
            Error::PointAtInfinity => "point_at_infinity",
            Error::NotHilbertPolynomial(_) => "not_hilbert_polynomial",
            Error::Precondition(_) => "precondition",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
