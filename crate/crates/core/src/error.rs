use crate::bdd::BddError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Bdd(#[from] BddError),
    #[error("unmapped proposition `{0}`")]
    UnmappedAtom(String),
    #[error("parse error at {0}")]
    Parse(#[from] crate::specformat::ParseError),
    #[error("unknown proposition `{0}` in task")]
    UnknownProposition(String),
    #[error("insufficient data for skill `{skill}`: {found} samples, need {needed}")]
    InsufficientData { skill: String, found: usize, needed: usize },
    #[error("invalid dataset: {0}")]
    Dataset(String),
    #[error("spec realizable")]
    SpecRealizable,
    #[error("spec unrealizable")]
    SpecUnrealizable,
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
