use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 1")]
    InvalidModulus,

    #[error("element {value} is out of range for modulus {modulus}")]
    OutOfRange { value: u64, modulus: u64 },

    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("need at least two distances, got {0}")]
    NotEnoughDistances(usize),

    #[error("reverse pass needs at least two surviving distances, got {0}")]
    ReversePassUnderdetermined(usize),

    #[error("could not determine the orientation (no admissible second element)")]
    OrientationUndetermined,

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("cannot parse {token:?} as a non-negative integer")]
    Parse { token: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
