//! Classical statistics for the classification and correlation stages.

mod contingency;
mod correlation;
mod logistic;
mod normality;

use serde::Serialize;
use thiserror::Error;

pub use contingency::{
    chi_square, chi_square_sf, cramers_v, fisher_exact_2x2, ContingencyTable, CramersV,
};
pub use correlation::{
    average_ranks, correlation_matrix, holm_adjust, pearson, spearman, spearman_permutation,
    CorrelationMatrix, NormalityEntry,
};
pub use logistic::{logistic_fit, LogisticFit};
pub use normality::shapiro_wilk;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum StatsError {
    #[error("sample size {n} outside [{min}, {max}]")]
    SampleSize { n: usize, min: usize, max: usize },
    #[error("degenerate sample: {0}")]
    Degenerate(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("undefined correlation: {0} is constant")]
    UndefinedCorrelation(&'static str),
    #[error("invalid contingency table: {0}")]
    BadTable(String),
    #[error("{0} has a zero marginal total")]
    ZeroMargin(String),
    #[error("perfect separation: {0}")]
    Separation(String),
    #[error("logistic fit did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("non-finite value in input")]
    NonFinite,
}

/// Outcome of a hypothesis test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub method: String,
    pub statistic: f64,
    pub df: Option<u32>,
    pub p_value: f64,
    pub effect_size: Option<f64>,
    /// False when the test's large-sample conditions are not met.
    pub valid: bool,
}

impl TestResult {
    fn new(method: &str, statistic: f64, df: Option<u32>, p_value: f64) -> Self {
        TestResult {
            method: method.to_string(),
            statistic,
            df,
            p_value: p_value.clamp(0.0, 1.0),
            effect_size: None,
            valid: true,
        }
    }

    pub fn significant(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

fn check_finite(xs: &[f64]) -> Result<(), StatsError> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(StatsError::NonFinite)
    }
}
