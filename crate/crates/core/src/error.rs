use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet mismatch between operands")]
    AlphabetMismatch,
    #[error("{0}: operation undefined for relations")]
    RelationOperand(&'static str),
    #[error("infinite ambiguity: the image of the input is infinite")]
    InfiniteAmbiguity,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid symbol name `{0}`")]
    BadSymbol(String),
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown macro `{0}`")]
    UnknownMacro(String),
    #[error("macro `{name}` called with {found} argument(s); no clause takes that many")]
    Arity { name: String, found: usize },
    #[error("no clause of macro `{0}` matches its arguments")]
    NoClause(String),
    #[error("recursive macro `{0}`")]
    RecursiveMacro(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown constraint `{0}`")]
    UnknownConstraint(String),
    #[error("unknown grammar `{0}`")]
    UnknownGrammar(String),
    #[error("Gen modifies input; matching filter unsound ({0})")]
    UnsoundMatching(String),
    #[error("no exact precision <= {max_prec} for constraint `{constraint}`")]
    NoExactPrecision {
        constraint: String,
        max_prec: u32,
        /// Precisions settled for the constraints ranked above.
        settled: Vec<u32>,
    },
    #[error("AT&T format error on line {line}: {msg}")]
    Att { line: usize, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("grammar error: {0}")]
    Grammar(String),
}
