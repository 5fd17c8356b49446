use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("no value assigned to variable {0}")]
    MissingVariable(String),
    #[error("cannot parse polynomial {0:?}")]
    Parse(String),
    #[error("invalid sector {sector} for {mode} with N={n}")]
    InvalidSector { sector: String, mode: String, n: usize },
    #[error("invalid mode: {0}")]
    InvalidMode(String),
    #[error("generator {0} out of range for N={1}")]
    GeneratorOutOfRange(String, usize),
    #[error("string counts differ: bottom has {0}, top has {1}")]
    StringMismatch(usize, usize),
    #[error("empty sector {0}")]
    EmptySector(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
