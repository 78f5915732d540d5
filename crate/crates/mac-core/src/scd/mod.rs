//! Native statistical causal discovery: Fisher-Z conditional independence
//! testing, PC with Meek orientation, exact BIC-minimizing structure search,
//! and DirectLiNGAM. All routines are deterministic functions of their
//! inputs and configuration.

mod bic;
mod exact_search;
mod fisher_z;
mod lingam;
mod pc;

pub use bic::bic_local_score;
pub use exact_search::exact_search;
pub use fisher_z::fisher_z;
pub use lingam::{direct_lingam, LingamResult};
pub use pc::pc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScdError {
    #[error("need more than |conditioning set| + 3 = {needed} rows, got {rows}")]
    InsufficientSamples { rows: usize, needed: usize },
    #[error("covariance matrix is singular for variables {0:?}")]
    SingularCovariance(Vec<usize>),
    #[error("regression design is singular for target {target} with parents {parents:?}")]
    SingularDesign { target: usize, parents: Vec<usize> },
    #[error("constraints are inconsistent: {0}")]
    InconsistentConstraints(String),
    #[error("exact search supports at most {max} variables, got {n}")]
    TooManyVariables { n: usize, max: usize },
    #[error("super-structure must be symmetric; differs at ({0},{1})")]
    AsymmetricSuperStructure(usize, usize),
    #[error("column {0} has (near-)zero variance")]
    ZeroVarianceColumn(usize),
    #[error("prior knowledge admits no causal order: {0}")]
    InfeasiblePrior(String),
    #[error("alpha must lie in (0,1), got {0}")]
    InvalidAlpha(f64),
    #[error("variable index {0} out of range for {1} variables")]
    IndexOutOfRange(usize, usize),
}

/// Order-graph strategy for exact search; both return the same optimum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMethod {
    #[default]
    Astar,
    Dp,
}

/// Pairwise non-Gaussianity measure for DirectLiNGAM. Only the likelihood-
/// ratio measure on the log-cosh entropy approximation is implemented;
/// kernel-based measures are out of scope by construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    #[default]
    Pwling,
}

/// Shared knobs for the statistical algorithms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AlgorithmConfig {
    /// Two-sided significance level for conditional independence tests.
    pub alpha: f64,
    /// Exact-search strategy.
    pub search_method: SearchMethod,
    /// Maximum parent-set size for exact search; `None` = unlimited.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_parents: Option<usize>,
    /// DirectLiNGAM exogeneity measure.
    pub measure: Measure,
    /// |weight| above which a LiNGAM coefficient counts as an edge.
    pub edge_threshold: f64,
    /// Recorded for provenance; every algorithm here is deterministic.
    pub seed: u64,
    /// Cap on PC conditioning-set size; `None` = up to n-2.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_cond_size: Option<usize>,
    /// Variable-count ceiling for exact search.
    pub max_exact_vars: usize,
    /// How undirected pairs collapse when a pattern is binarized.
    pub undirected_policy: crate::graph::UndirectedPolicy,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            search_method: SearchMethod::default(),
            max_parents: None,
            measure: Measure::default(),
            edge_threshold: 0.01,
            seed: 0,
            max_cond_size: None,
            max_exact_vars: 16,
            undirected_policy: crate::graph::UndirectedPolicy::Both,
        }
    }
}

impl AlgorithmConfig {
    pub fn validate(&self) -> Result<(), ScdError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(ScdError::InvalidAlpha(self.alpha));
        }
        Ok(())
    }
}

/// Outcome of one conditional independence test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CITestResult {
    pub i: usize,
    pub j: usize,
    pub cond: Vec<usize>,
    /// Partial correlation of (i, j) given `cond`.
    pub statistic: f64,
    pub p_value: f64,
    /// `p_value > alpha` — the null of independence was not rejected.
    pub independent: bool,
}
