//! Structure-recovery metrics between an estimated and a true directed graph.
//!
//! Edge classification runs over ordered off-diagonal pairs, so
//! `tp + fp + fn + tn = n(n-1)`. SHD is counted per unordered pair — a
//! reversed, extra, or missing edge each costs exactly 1. NHD divides
//! differing cells (diagonal included) by `n^2`. Ratios with a zero
//! denominator are defined as 0.

use crate::graph::{BinaryAdjacency, GraphError};
use serde::{Deserialize, Serialize};

/// Ordered-pair edge confusion counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub true_negatives: usize,
}

/// The report row: column order matches the CSV written by `to_csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub shd: usize,
    pub nhd: f64,
    pub fnr: f64,
    pub fpr: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl MetricsReport {
    pub const CSV_HEADER: &'static str = "SHD,NHD,FNR,FPR,Precision,Recall,F1";

    /// Two-line CSV: fixed header plus one row, LF endings. Float cells use
    /// shortest round-trip formatting, so identical reports serialize to
    /// identical bytes.
    pub fn to_csv(&self) -> String {
        format!(
            "{}\n{},{},{},{},{},{},{}\n",
            Self::CSV_HEADER,
            self.shd,
            self.nhd,
            self.fnr,
            self.fpr,
            self.precision,
            self.recall,
            self.f1
        )
    }
}

fn check_labels(est: &BinaryAdjacency, truth: &BinaryAdjacency) -> Result<(), GraphError> {
    if est.labels() != truth.labels() {
        return Err(GraphError::UnknownLabelOrder {
            expected: truth.labels().to_vec(),
            found: est.labels().to_vec(),
        });
    }
    Ok(())
}

/// Classifies every ordered off-diagonal pair of `est` against `truth`.
pub fn confusion(est: &BinaryAdjacency, truth: &BinaryAdjacency) -> Result<Confusion, GraphError> {
    check_labels(est, truth)?;
    let n = est.n();
    let mut c = Confusion {
        true_positives: 0,
        false_positives: 0,
        false_negatives: 0,
        true_negatives: 0,
    };
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            match (est.get(i, j), truth.get(i, j)) {
                (1, 1) => c.true_positives += 1,
                (1, 0) => c.false_positives += 1,
                (0, 1) => c.false_negatives += 1,
                (0, 0) => c.true_negatives += 1,
                _ => unreachable!("cells are validated binary"),
            }
        }
    }
    Ok(c)
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Computes the full report. SHD compares unordered-pair states (none /
/// forward / backward / both); any disagreement costs 1.
pub fn compute_metrics(
    est: &BinaryAdjacency,
    truth: &BinaryAdjacency,
) -> Result<MetricsReport, GraphError> {
    check_labels(est, truth)?;
    let c = confusion(est, truth)?;
    let n = est.n();

    let mut shd = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            let same = est.get(i, j) == truth.get(i, j) && est.get(j, i) == truth.get(j, i);
            if !same {
                shd += 1;
            }
        }
    }

    let mut differing = 0usize;
    for i in 0..n {
        for j in 0..n {
            if est.get(i, j) != truth.get(i, j) {
                differing += 1;
            }
        }
    }
    let nhd = differing as f64 / (n * n) as f64;

    let precision = ratio(c.true_positives, c.true_positives + c.false_positives);
    let recall = ratio(c.true_positives, c.true_positives + c.false_negatives);
    let fnr = ratio(c.false_negatives, c.true_positives + c.false_negatives);
    let fpr = ratio(c.false_positives, c.false_positives + c.true_negatives);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };

    Ok(MetricsReport {
        shd,
        nhd,
        fnr,
        fpr,
        precision,
        recall,
        f1,
    })
}
