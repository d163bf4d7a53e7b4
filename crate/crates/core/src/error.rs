use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Cartan type {series}{rank}: {constraint}")]
    InvalidCartanType {
        series: char,
        rank: usize,
        constraint: &'static str,
    },

    #[error("unknown Cartan type label `{0}`")]
    UnknownCartanType(String),

    #[error("{0} is not a root of the system")]
    NotARoot(String),

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("invalid form `{form}`: {message}")]
    Validation { form: String, message: String },

    #[error("unknown form `{0}`")]
    UnknownForm(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parameter is not regular integral: pairing with coroot {coroot} is {value}")]
    NotRegularIntegral { coroot: String, value: String },

    #[error("{quantity} is undefined for the compact form `{form}`")]
    UndefinedForCompact { quantity: &'static str, form: String },

    #[error("`{0}` is compact and has no restricted roots")]
    NoRestrictedRoots(String),

    #[error("unsupported: {form} with Levi {levi}: {reason}")]
    Unsupported {
        form: String,
        levi: String,
        reason: String,
    },

    #[error("`{form}` has rank(t) = {rank}, which exceeds the exhaustive limit {limit}; rerun with --deep")]
    ExceedsLimit {
        form: String,
        rank: usize,
        limit: usize,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
