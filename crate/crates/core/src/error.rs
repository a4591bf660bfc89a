use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed rule {0:?}: expected a decimal integer")]
    MalformedRule(String),
    #[error("rule {0} out of range 0..=255")]
    RuleOutOfRange(u64),
    #[error("malformed state {0:?}: expected a binary string")]
    MalformedState(String),
    #[error("an automaton needs at least one cell")]
    Empty,
    #[error("rule vector has {rules} cells but state has {state}")]
    LengthMismatch { rules: usize, state: usize },
    #[error("RMT mask {0:#010b} has an odd number of members")]
    OddMask(u8),
    #[error("{what} supports at most {max} cells, got {n}")]
    TooManyCells {
        what: &'static str,
        n: usize,
        max: usize,
    },
    #[error("{what} needs at least {min} cells, got {n}")]
    TooFewCells {
        what: &'static str,
        n: usize,
        min: usize,
    },
    #[error("rule {rule} in class {class} leads to a level matching no class")]
    Unclassified { rule: u8, class: &'static str },
    #[error("rule {rule} is not an allowed choice for cell {cell}")]
    InvalidChoice { cell: usize, rule: u8 },
    #[error("rule {rule} is not a member of class {class}")]
    NotInClass { rule: u8, class: &'static str },
}
