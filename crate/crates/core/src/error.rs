use thiserror::Error;

pub type Result<T> = std::result::Result<T, GofError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GofError {
    #[error("{what}: argument {value} is outside the domain")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("order m = {m} is invalid for sample size n = {n} (need 2 <= m <= n)")]
    Order { m: usize, n: usize },

    #[error("sample mean {mean} <= 1, moment estimator of beta is undefined")]
    Estimation { mean: f64 },

    #[error("observation {index} is not finite")]
    NonFinite { index: usize },

    #[error("sample of size {n} is too small (need at least {min})")]
    SampleSize { n: usize, min: usize },

    #[error("{statistic} is singular: an observation sits exactly on the support boundary x = 1")]
    Singular { statistic: &'static str },

    #[error("naive enumeration is limited to n <= 10 and m <= 3 (got n = {n}, m = {m})")]
    SizeGuard { n: usize, m: usize },

    #[error("binomial coefficient C({n}, {k}) overflows 128 bits")]
    Overflow { n: usize, k: usize },

    #[error("gave up after {attempts} degenerate redraws in replication {replication}")]
    Degenerate { replication: usize, attempts: usize },

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl GofError {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        GofError::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
