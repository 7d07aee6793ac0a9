use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("classes live in different cohomology rings")]
    RingMismatch,

    #[error("argument has a nonzero degree-0 component; split it off before evaluating")]
    NotNilpotent,

    #[error("series truncated at order {have} but the argument needs order {needed}")]
    InsufficientOrder { needed: usize, have: usize },

    #[error("series constant term {0} is not invertible")]
    NotInvertible(String),

    #[error("cohomology h^{{{q},{k}}} is not known to this model")]
    MissingCohomology { q: usize, k: i64 },

    #[error("spectral model window insufficient: {0}")]
    WindowInsufficient(String),

    #[error(
        "Laplacian table entry (q={q}, k={k}, halfMuSq={half_mu_sq}) violates the Nakano bound {bound}"
    )]
    NakanoViolation { q: usize, k: i64, half_mu_sq: String, bound: String },

    #[error("negative Type-2 multiplicity {mult} at (q={q}, k={k}, halfMuSq={half_mu_sq})")]
    NegativeMultiplicity { q: usize, k: i64, half_mu_sq: String, mult: i64 },

    #[error("{0}")]
    NotFano(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("spectral result indeterminate: {}", .0.join("; "))]
    Indeterminate(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
