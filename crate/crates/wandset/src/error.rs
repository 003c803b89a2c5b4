use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a Kuratowski pair")]
    NotAPair,
    #[error("not a carrier")]
    NotACarrier,
    #[error("not in the image of theta")]
    NotInThetaImage,
    #[error("depth cap exceeded: level would hold {needed} sets, cap is {cap}")]
    DepthCapExceeded { needed: u128, cap: usize },
    #[error("object cap exceeded: build would hold {needed} objects, cap is {cap}")]
    CapExceeded { needed: u128, cap: usize },
    #[error("object is not bland")]
    NotBland,
    #[error("answer lies beyond the fragment: {0}")]
    BeyondFragment(String),
    #[error("tap undefined at path index {0}")]
    TapUndefinedAt(usize),
    #[error("not a conch")]
    NotAConch,
    #[error("kind taxonomy violated: {0}")]
    TaxonomyViolation(String),
    #[error("parse error at offset {offset}: {msg}")]
    ParseError { offset: usize, msg: String },
    #[error("signature mismatch: {0}")]
    SignatureError(String),
    #[error("stage stability violated: {0}")]
    StabilityViolation(String),
    #[error("unknown spec `{0}`")]
    UnknownSpec(String),
    #[error("malformed data: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
