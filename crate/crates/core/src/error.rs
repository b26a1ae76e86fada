use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("only p = 2 is supported by the exact field layer, got p = {0}")]
    UnsupportedPrime(u64),
    #[error("unsupported field order q = {0} (expected 2, 4, 8 or 16)")]
    UnsupportedOrder(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("p-adic valuation of 0 is undefined")]
    ZeroValuation,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("argument must be positive")]
    NonPositive,
    #[error("d = {d} exceeds the enumeration guard {limit}")]
    GuardExceeded { d: u64, limit: u64 },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("valuation of the zero function is not represented")]
    ZeroFunction,
    #[error("function is not regular at the prime (valuation {0})")]
    NotRegular(i64),
    #[error("differential order at non-rational prime unsupported")]
    NonRationalPrime,
    #[error("x^(2^{c}) + a is reducible: a is a square in K")]
    ReduciblePrime { c: u32 },
    #[error("residue field element not of monomial-root form: {0}")]
    Representation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("the tower engine supports p = 2 only, got p = {0}")]
    UnsupportedCharacteristic(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
    #[error("undefined symbol `{symbol}` at level {level}")]
    UndefinedSymbol { symbol: String, level: usize },
    #[error("symbol `{0}` defined twice")]
    DuplicateSymbol(String),
    #[error("division by zero while elaborating level {0}")]
    DivisionByZero(usize),
    #[error("bottom prime must be rational (degree 1), got degree {0}")]
    BottomNotRational(u64),
    #[error("levels must be contiguous from {expected_top} down to 0, found {found:?}")]
    NonContiguousLevels {
        expected_top: usize,
        found: Vec<usize>,
    },
    #[error("tower has no levels")]
    Empty,
    #[error("witness rejected at level {level}: claimed {claim}, computed {computed}")]
    WitnessRejected {
        level: usize,
        claim: String,
        computed: String,
    },
    #[error("ramification profile inconsistent with element at level {level}: valuation {numerator}/{denominator}")]
    RamificationInconsistent {
        level: usize,
        numerator: i64,
        denominator: i64,
    },
    #[error(
        "constraint system infeasible at level {level}: lower bound {lower} exceeds genus {upper}"
    )]
    Infeasible {
        level: usize,
        lower: u64,
        upper: u64,
    },
    #[error("trace invariant violated: {0}")]
    InvariantViolated(String),
    #[error("construction guard exceeded: {0}")]
    Guard(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("invalid relation at {pointer}: {source}")]
    Relation {
        pointer: String,
        #[source]
        source: ParseError,
    },
    #[error("{0}")]
    Tower(#[from] TowerError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(
        "inconsistent multiplicity data: component `{component}` gives {numerator}/{denominator}"
    )]
    InconsistentMultiplicities {
        component: String,
        numerator: i64,
        denominator: i64,
    },
    #[error("invalid dual graph: {0}")]
    InvalidGraph(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search guard exceeded: {0}")]
    Guard(String),
}
