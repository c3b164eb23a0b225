use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),

    #[error("field order {0} is outside the supported range 2..=65536")]
    UnsupportedOrder(u32),

    #[error("modulus {0:?} is not a monic polynomial of the right degree over GF(p)")]
    BadModulus(Vec<u16>),

    #[error("modulus {0:?} is reducible")]
    ReducibleModulus(Vec<u16>),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension n = {0} is too small (need n >= {1})")]
    DimensionTooSmall(usize, usize),

    #[error("linear form {0} is not canonical (last nonzero coefficient must be 1)")]
    NotCanonical(String),

    #[error("label {0} is not a column of the design")]
    NotAColumn(String),

    #[error("duplicate linear form {0} in the h-list")]
    DuplicateH(String),

    #[error("construction requires an odd field order, got s = {0}")]
    EvenS(u32),

    #[error("need 1 <= k < s fractions, got k = {k} for s = {s}")]
    BadFractionCount { k: usize, s: u32 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("the selected fraction is empty")]
    EmptyFraction,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("column {0} is not balanced")]
    UnbalancedDesign(usize),

    #[error("replacement table column {0} is not balanced")]
    UnbalancedTable(usize),

    #[error("symbol {symbol} in column {column} exceeds its level count {levels}")]
    SymbolOutOfRange {
        column: usize,
        symbol: u16,
        levels: u16,
    },

    #[error("design has mixed levels; operation needs a common level count")]
    MixedLevels,

    #[error("design is not two-level")]
    NotTwoLevel,

    #[error("no field realization for {0} levels")]
    NoFieldRealization(u16),

    #[error("work estimate {needed} exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("design is too large for this operation: {0}")]
    TooLarge(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("label parse error: {0}")]
    LabelParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
