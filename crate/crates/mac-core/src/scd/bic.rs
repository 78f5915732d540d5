//! Gaussian BIC local score for linear-regression structure scoring.

use super::ScdError;
use crate::datasets::TabularData;
use crate::linalg;

/// Residual-sum-of-squares floor: `1e-12 · rows` keeps the log finite on
/// (near-)deterministic relationships.
fn rss_floor(rows: usize) -> f64 {
    1e-12 * rows as f64
}

/// Centered scatter matrix `S[a][b] = Σ_r (x_a - mean_a)(x_b - mean_b)`,
/// computed once so that every local score is a small linear solve.
pub(super) struct ScatterScorer {
    rows: usize,
    scatter: Vec<Vec<f64>>,
}

impl ScatterScorer {
    pub(super) fn new(data: &TabularData) -> Self {
        let n = data.n_cols();
        let rows = data.n_rows();
        let cols: Vec<Vec<f64>> = (0..n).map(|c| data.column(c)).collect();
        let means: Vec<f64> = cols
            .iter()
            .map(|c| c.iter().sum::<f64>() / rows as f64)
            .collect();
        let mut scatter = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in a..n {
                let mut s = 0.0;
                for r in 0..rows {
                    s += (cols[a][r] - means[a]) * (cols[b][r] - means[b]);
                }
                scatter[a][b] = s;
                scatter[b][a] = s;
            }
        }
        Self { rows, scatter }
    }

    /// RSS of regressing `target` on `parents` plus an intercept.
    pub(super) fn rss(&self, target: usize, parents: &[usize]) -> Result<f64, ScdError> {
        let syy = self.scatter[target][target];
        if parents.is_empty() {
            return Ok(syy.max(rss_floor(self.rows)));
        }
        let k = parents.len();
        let mut sxx = vec![vec![0.0; k]; k];
        let mut sxy = vec![0.0; k];
        for (a, &pa) in parents.iter().enumerate() {
            sxy[a] = self.scatter[pa][target];
            for (b, &pb) in parents.iter().enumerate() {
                sxx[a][b] = self.scatter[pa][pb];
            }
        }
        let beta = linalg::solve(sxx, sxy.clone()).ok_or_else(|| ScdError::SingularDesign {
            target,
            parents: parents.to_vec(),
        })?;
        let explained: f64 = beta.iter().zip(&sxy).map(|(b, s)| b * s).sum();
        Ok((syy - explained).max(rss_floor(self.rows)))
    }

    /// `rows·ln(RSS/rows) + (|parents|+1)·ln(rows)` — lower is better.
    pub(super) fn local_score(&self, target: usize, parents: &[usize]) -> Result<f64, ScdError> {
        let rows = self.rows as f64;
        let rss = self.rss(target, parents)?;
        Ok(rows * (rss / rows).ln() + (parents.len() as f64 + 1.0) * rows.ln())
    }
}

/// BIC of `node` given `parents` under a linear-Gaussian model with
/// intercept: `rows·ln(RSS/rows) + (|parents|+1)·ln(rows)`. Lower is better.
/// With an empty parent set the RSS is the centered sum of squares of the
/// node itself. RSS is floored at `1e-12·rows`.
pub fn bic_local_score(
    data: &TabularData,
    node: usize,
    parents: &[usize],
) -> Result<f64, ScdError> {
    let n = data.n_cols();
    for &v in std::iter::once(&node).chain(parents.iter()) {
        if v >= n {
            return Err(ScdError::IndexOutOfRange(v, n));
        }
    }
    if parents.contains(&node) {
        return Err(ScdError::InconsistentConstraints(format!(
            "node {node} cannot be its own parent"
        )));
    }
    ScatterScorer::new(data).local_score(node, parents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim;

    /// Direct normal-equation oracle: build the design matrix with an
    /// intercept column, solve X'X b = X'y, and sum squared residuals.
    fn rss_oracle(data: &TabularData, target: usize, parents: &[usize]) -> f64 {
        let rows = data.n_rows();
        let k = parents.len() + 1;
        let design: Vec<Vec<f64>> = (0..rows)
            .map(|r| {
                let mut row = vec![1.0];
                row.extend(parents.iter().map(|&p| data.value(r, p)));
                row
            })
            .collect();
        let mut xtx = vec![vec![0.0; k]; k];
        let mut xty = vec![0.0; k];
        for r in 0..rows {
            for a in 0..k {
                xty[a] += design[r][a] * data.value(r, target);
                for b in 0..k {
                    xtx[a][b] += design[r][a] * design[r][b];
                }
            }
        }
        let beta = crate::linalg::solve(xtx, xty).unwrap();
        (0..rows)
            .map(|r| {
                let fit: f64 = (0..k).map(|a| beta[a] * design[r][a]).sum();
                let e = data.value(r, target) - fit;
                e * e
            })
            .sum()
    }

    fn score_oracle(data: &TabularData, target: usize, parents: &[usize]) -> f64 {
        let rows = data.n_rows() as f64;
        let rss = rss_oracle(data, target, parents).max(1e-12 * rows);
        rows * (rss / rows).ln() + (parents.len() as f64 + 1.0) * rows.ln()
    }

    #[test]
    fn matches_normal_equation_oracle() {
        let data = sim::random_dag_sem(5, 0.6, 31).sample(400, 31);
        let parent_sets: [&[usize]; 6] = [&[], &[0], &[1, 3], &[0, 1, 2], &[4], &[0, 2, 3, 4]];
        for (t, parents) in (0..5).zip(parent_sets.iter()) {
            let ps: Vec<usize> = parents.iter().copied().filter(|&p| p != t).collect();
            let got = bic_local_score(&data, t, &ps).unwrap();
            let want = score_oracle(&data, t, &ps);
            assert!(
                (got - want).abs() < 1e-9,
                "target {t} parents {ps:?}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn empty_parent_set_scores_marginal_variance() {
        let data = sim::gaussian_noise(3, 200, 5);
        let got = bic_local_score(&data, 1, &[]).unwrap();
        let col = data.column(1);
        let mean: f64 = col.iter().sum::<f64>() / 200.0;
        let rss: f64 = col.iter().map(|v| (v - mean) * (v - mean)).sum();
        let want = 200.0 * (rss / 200.0).ln() + 200f64.ln();
        assert!((got - want).abs() < 1e-9);
    }

    #[test]
    fn true_parent_beats_grandparent_and_empty() {
        let data = sim::chain(3, 1.0, 2_000, 8);
        let direct = bic_local_score(&data, 2, &[1]).unwrap();
        let grandparent = bic_local_score(&data, 2, &[0]).unwrap();
        let empty = bic_local_score(&data, 2, &[]).unwrap();
        assert!(direct < grandparent, "{direct} vs {grandparent}");
        assert!(grandparent < empty, "{grandparent} vs {empty}");
    }

    #[test]
    fn deterministic_relation_hits_rss_floor() {
        // y = 2x exactly: RSS underflows to the floor instead of -inf.
        let rows: Vec<Vec<f64>> = (0..100)
            .map(|k| {
                let x = k as f64 / 10.0;
                vec![x, 2.0 * x]
            })
            .collect();
        let data = TabularData::new(vec!["x".into(), "y".into()], rows).unwrap();
        let score = bic_local_score(&data, 1, &[0]).unwrap();
        let floor_score = 100.0 * (1e-12f64).ln() + 2.0 * 100f64.ln();
        assert!((score - floor_score).abs() < 1e-6);
    }

    #[test]
    fn duplicate_parent_columns_are_singular() {
        let rows: Vec<Vec<f64>> = (0..50)
            .map(|k| {
                let x = (k * k % 17) as f64;
                vec![x, x, (k % 5) as f64]
            })
            .collect();
        let data = TabularData::new(vec!["a".into(), "b".into(), "y".into()], rows).unwrap();
        assert!(matches!(
            bic_local_score(&data, 2, &[0, 1]),
            Err(ScdError::SingularDesign { .. })
        ));
    }
}
