use thiserror::Error;

/// Errors raised by samplers, reshapers, metrics and the benchmark harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Sobol direction numbers cover at most {max} dimensions, {requested} requested")]
    SobolDimension { requested: usize, max: usize },

    #[error("{kind} does not support digit scrambling (only Halton and Hammersley do)")]
    NotScramblable { kind: &'static str },

    #[error("value {value} outside the open interval (0, 1)")]
    OutsideUnitInterval { value: f64 },

    #[error("meta recentering needs dimension >= 2 (got {dimension}); supply lambda explicitly, e.g. Rctg0.5<Base>")]
    MetaLambdaDimension { dimension: f64 },

    #[error("column {column} is constant over the sample, cannot rescale it to the bounds")]
    DegenerateColumn { column: usize },

    #[error("unknown method name `{name}` ({reason}); expected [Cauchy][O|QO][Rctg<float>|MetaRctg][Rescale]<Base>[PlusMiddlePoint] with <Base> = [Shift][Scr]Random|Grid|LHS|Jittered|Halton|Hammersley|Sobol; nearest valid name: {suggestion}")]
    UnknownMethod {
        name: String,
        reason: String,
        suggestion: String,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
