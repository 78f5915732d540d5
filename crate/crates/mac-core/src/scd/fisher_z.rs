//! Fisher-Z conditional independence test on partial correlations.

use super::{CITestResult, ScdError};
use crate::datasets::TabularData;
use crate::linalg;

/// Pearson correlation matrix of the selected columns.
fn correlation_matrix(data: &TabularData, vars: &[usize]) -> Result<Vec<Vec<f64>>, ScdError> {
    let rows = data.n_rows() as f64;
    let cols: Vec<Vec<f64>> = vars.iter().map(|&v| data.column(v)).collect();
    let means: Vec<f64> = cols.iter().map(|c| c.iter().sum::<f64>() / rows).collect();
    let k = vars.len();
    let mut cov = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in a..k {
            let mut s = 0.0;
            for r in 0..data.n_rows() {
                s += (cols[a][r] - means[a]) * (cols[b][r] - means[b]);
            }
            cov[a][b] = s / rows;
            cov[b][a] = cov[a][b];
        }
    }
    for (idx, &v) in vars.iter().enumerate() {
        if cov[idx][idx] <= 1e-300 {
            return Err(ScdError::ZeroVarianceColumn(v));
        }
    }
    let mut corr = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in 0..k {
            corr[a][b] = cov[a][b] / (cov[a][a] * cov[b][b]).sqrt();
        }
    }
    Ok(corr)
}

/// Tests `i ⊥ j | cond` at level `alpha`.
///
/// The partial correlation r comes from the inverse correlation matrix of
/// `{i, j} ∪ cond`; the statistic is
/// `z = sqrt(rows - |cond| - 3) * atanh(r)` with a two-sided p-value from
/// the standard normal. Independence holds iff `p > alpha`.
pub fn fisher_z(
    data: &TabularData,
    i: usize,
    j: usize,
    cond: &[usize],
    alpha: f64,
) -> Result<CITestResult, ScdError> {
    let n = data.n_cols();
    for &v in [i, j].iter().chain(cond.iter()) {
        if v >= n {
            return Err(ScdError::IndexOutOfRange(v, n));
        }
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(ScdError::InvalidAlpha(alpha));
    }
    let rows = data.n_rows();
    let needed = cond.len() + 3;
    if rows <= needed {
        return Err(ScdError::InsufficientSamples { rows, needed });
    }

    // Canonical variable order makes the result exactly symmetric in i, j.
    let mut vars = vec![i.min(j), i.max(j)];
    vars.extend_from_slice(cond);
    let corr = correlation_matrix(data, &vars)?;
    let r = if corr[0][1].abs() >= 1.0 - 1e-12 {
        // Deterministically related pair; no conditioning set changes that,
        // and the correlation matrix is singular, so answer directly.
        corr[0][1].clamp(-1.0, 1.0)
    } else if cond.is_empty() {
        corr[0][1]
    } else {
        let precision =
            linalg::invert(&corr).ok_or_else(|| ScdError::SingularCovariance(vars.clone()))?;
        let denom = precision[0][0] * precision[1][1];
        if denom <= 0.0 {
            return Err(ScdError::SingularCovariance(vars));
        }
        (-precision[0][1] / denom.sqrt()).clamp(-1.0, 1.0)
    };

    let dof = (rows - cond.len() - 3) as f64;
    let p_value = if r.abs() >= 1.0 - 1e-12 {
        0.0
    } else {
        let z = dof.sqrt() * r.atanh();
        // Two-sided tail of the standard normal: p = erfc(|z| / sqrt(2)).
        libm::erfc(z.abs() / std::f64::consts::SQRT_2)
    };
    Ok(CITestResult {
        i,
        j,
        cond: cond.to_vec(),
        statistic: r,
        p_value,
        independent: p_value > alpha,
    })
}
