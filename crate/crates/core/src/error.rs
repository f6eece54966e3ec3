use thiserror::Error;

pub type Result<T, E = GpcError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum GpcError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate weights: every log-weight is -inf")]
    DegenerateWeights,

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("matrix is not positive definite: pivot {pivot} has value {value:e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("degenerate particle set: {0}")]
    DegenerateSet(String),

    #[error("simulation failed on replicate {replicate}: {source}")]
    Simulation {
        replicate: usize,
        #[source]
        source: Box<GpcError>,
    },

    #[error("ingestion error: {0}")]
    Ingestion(String),

    #[error("invalid configuration for `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl GpcError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        GpcError::Domain(msg.into())
    }

    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        GpcError::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }
}
