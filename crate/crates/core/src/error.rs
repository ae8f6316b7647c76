use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("symbol {0} is not in the alphabet")]
    UnknownSymbol(String),
    #[error("symbol {0} has a different arity than the rest of the alphabet")]
    ArityMismatch(String),
    #[error("operands are over different alphabets")]
    AlphabetMismatch,
    #[error("state {state} out of range (automaton has {count} states)")]
    InvalidState { state: u32, count: usize },
    #[error("symbol map has no image for {0}")]
    IncompleteMap(String),
    #[error("state budget of {limit} exceeded")]
    BudgetExceeded { limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvError {
    #[error("pad atom inside input word {0}")]
    PadInWord(usize),
    #[error("input symbol in word {0} is not plain")]
    NotPlain(usize),
    #[error("invalid padding in row {row} at position {position}")]
    InvalidPadding { row: usize, position: usize },
    #[error("all-pad letter at position {0}")]
    AllPadLetter(usize),
    #[error("letter at position {position} has arity {found}, expected {expected}")]
    Arity {
        position: usize,
        expected: usize,
        found: usize,
    },
    #[error("alphabet is not the full padded product of its atoms for {0} components")]
    NotPadded(usize),
    #[error("search node budget of {limit} exceeded")]
    NodeBudget { limit: usize },
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TilingError {
    #[error("corner index {0} does not name a tile")]
    BadCorner(usize),
    #[error("tiling width {found} differs from 2^n = {expected}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("the reduction needs n >= 6, got {0}")]
    SmallN(u32),
    #[error("n must be at least 1")]
    ZeroN,
    #[error("width must be at least {min}, got {found}")]
    NarrowWidth { min: usize, found: usize },
    #[error("row budget of {limit} exceeded")]
    Budget { limit: usize },
    #[error("malformed tiling: {0}")]
    Shape(String),
    #[error("condition index {0} is not in 1..=6")]
    BadCondition(usize),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuchiError {
    #[error("variable {0} has no value")]
    Unbound(String),
    #[error("unknown formula {0}")]
    UnknownFormula(String),
    #[error("bad parameters: {0}")]
    Params(String),
    #[error("base must be at least 2, got {0}")]
    Base(u32),
}
