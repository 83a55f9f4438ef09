use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operation requires exact scalars")]
    FloatModeUnsupported,

    #[error("matrix is singular")]
    Singular,

    /// 0-based position of the first entry whose diagonal successor differs.
    #[error("matrix is not Toeplitz: entry ({},{}) differs from ({},{})", row + 1, col + 1, row + 2, col + 2)]
    NotToeplitz { row: usize, col: usize },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    /// `factor` is the 1-based position of the failing factor in a chain, if any.
    #[error("Levinson breakdown at order {order}{}", factor.map(|f| format!(" in factor {f}")).unwrap_or_default())]
    Breakdown { order: usize, factor: Option<usize> },

    #[error("decomposition does not reproduce the matrix: max deviation {deviation:e} at ({row},{col})")]
    VerificationFailed {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("expected rank {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error(
        "no constructive decomposition for invertible {n}x{n} input; existence bound Toep(M) <= {bound} is non-constructive, try `search`"
    )]
    InvertibleFallback { n: usize, bound: usize },

    #[error("no constructive decomposition for {n}x{n} input of rank {rank}; general bound is {bound}")]
    NoConstruction { n: usize, rank: usize, bound: usize },

    #[error("degenerate diagonal: {0}")]
    DegenerateDiagonal(String),

    #[error("polynomials live in different rings")]
    RingMismatch,

    #[error("certificate mismatch, difference polynomial: {0}")]
    CertificateMismatch(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}
