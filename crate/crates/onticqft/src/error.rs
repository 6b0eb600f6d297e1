use thiserror::Error;

pub type Result<T> = std::result::Result<T, EngineError>;

/// Error type shared by all engine modules.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("capacity exceeded for {what}: attempted {attempted}, cap {cap}")]
    CapacityExceeded {
        what: &'static str,
        attempted: usize,
        cap: usize,
    },

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("label shape mismatch: expected {expected}, got {got}")]
    LabelShape { expected: String, got: String },

    #[error("singular denominator: {0}")]
    SingularDenominator(String),

    #[error("undefined direction: momentum vector is zero")]
    UndefinedDirection,

    #[error("truncation unsound: {0}")]
    TruncationUnsound(String),

    #[error("time {t} is not an integer multiple of the site step {step}")]
    Commensurability { t: f64, step: f64 },

    #[error("configuration error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("unknown demo `{0}`")]
    UnknownDemo(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("report parse error: {0}")]
    ReportParse(#[from] serde_json::Error),
}

impl EngineError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        EngineError::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
