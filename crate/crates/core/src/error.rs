use serde::Serialize;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// One row of a residual scan, kept on `NotFound` so callers can inspect
/// where the search looked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub x: f64,
    pub residual: f64,
}

/// One Newton iterate of the interior-bump solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NewtonStep {
    pub r0: f64,
    pub r1: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchTrace {
    Scan { rows: Vec<ScanRow> },
    Newton { steps: Vec<NewtonStep> },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {func}: argument {arg} ({reason})")]
    Domain {
        func: &'static str,
        arg: f64,
        reason: &'static str,
    },
    #[error("{func}({arg}) overflows f64 (threshold {threshold})")]
    Overflow {
        func: &'static str,
        arg: f64,
        threshold: f64,
    },
    #[error("invalid parameters: {}", fields.join(", "))]
    Validation { fields: Vec<String> },
    #[error("regime mismatch: {0}")]
    Regime(String),
    #[error(
        "no zero of the density before the first minimum of J0 (target {target} < -m = {neg_m})"
    )]
    NoZero { target: f64, neg_m: f64 },
    #[error("no solution found: {reason}")]
    NotFound { reason: String, trace: SearchTrace },
    #[error("converged root rejected: {0}")]
    SpuriousRoot(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("quadrature did not reach tolerance on [{lo}, {hi}] (best estimate {estimate})")]
    Accuracy { lo: f64, hi: f64, estimate: f64 },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(func: &'static str, arg: f64, reason: &'static str) -> Self {
        Error::Domain { func, arg, reason }
    }
}
