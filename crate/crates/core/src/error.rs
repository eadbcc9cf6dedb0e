use thiserror::Error;

/// Errors raised while reading a cipher description file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("undeclared S-box `{0}`")]
    UndeclaredSbox(String),
    #[error("S-box `{0}` is not a permutation of 0..15")]
    SboxNotPermutation(String),
    #[error("bit map is not a permutation of 0..15")]
    PermNotPermutation,
    #[error("rotation {0} out of range 0..15")]
    RotationOutOfRange(u32),
    #[error("block size {0} unsupported (only 16)")]
    BlockBits(u32),
}

impl ParseError {
    pub(crate) fn new(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }

    pub(crate) fn syntax(line: usize, msg: impl Into<String>) -> Self {
        ParseError::new(line, ParseErrorKind::Syntax(msg.into()))
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("key has {got} words, description needs {expected}")]
    KeyLength { expected: usize, got: usize },
    #[error("layer range {start}..{end} contains a substitution layer at index {index}")]
    NonLinearRange {
        start: usize,
        end: usize,
        index: usize,
    },
    #[error("layer range {start}..{end} out of bounds for {len} layers")]
    LayerRange {
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("input difference must be nonzero")]
    ZeroDifference,
    #[error("invalid difference `{0}`: expected 4 hex digits or four 4-bit groups")]
    BadDifference(String),
    #[error("rounds must be at least 1")]
    NoRounds,
    #[error("theorem case i = {0} outside 3..=5")]
    TheoremCase(u32),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
