use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Result};
use crate::simplex::SimplexPoint;

/// Minimum total count accepted by [`chi_square_gof`].
pub const MIN_TOTAL: u64 = 1000;
/// Cells with a smaller expected count are pooled.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-square goodness-of-fit test of `counts` against `expected`.
///
/// Cells whose expected count is below [`MIN_EXPECTED`] are pooled into one
/// cell; if the pool itself stays below the threshold it is merged into the
/// smallest remaining cell. A positive count on a zero-probability cell gives
/// an infinite statistic and p-value 0.
pub fn chi_square_gof(counts: &[u64], expected: &SimplexPoint) -> Result<GofResult> {
    if counts.len() != expected.dim() {
        return invalid(format!(
            "{} counts for {} categories",
            counts.len(),
            expected.dim()
        ));
    }
    let total: u64 = counts.iter().sum();
    if total < MIN_TOTAL {
        return invalid(format!(
            "need at least {MIN_TOTAL} observations, got {total}"
        ));
    }
    let total_f = total as f64;
    let mass = expected.mass();

    // (observed, expected) per merged cell.
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut pool = (0.0, 0.0);
    for (c, p) in counts.iter().zip(expected.weights()) {
        let e = total_f * p / mass;
        if e <= 0.0 {
            if *c > 0 {
                return Ok(GofResult {
                    statistic: f64::INFINITY,
                    dof: expected.dim().saturating_sub(1).max(1),
                    p_value: 0.0,
                });
            }
            continue;
        }
        if e < MIN_EXPECTED {
            pool.0 += *c as f64;
            pool.1 += e;
        } else {
            cells.push((*c as f64, e));
        }
    }
    if pool.1 > 0.0 {
        if pool.1 >= MIN_EXPECTED || cells.is_empty() {
            cells.push(pool);
        } else {
            let smallest = cells
                .iter_mut()
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty");
            smallest.0 += pool.0;
            smallest.1 += pool.1;
        }
    }
    if cells.len() < 2 {
        return invalid("expected distribution is degenerate after pooling small cells");
    }
    let statistic: f64 = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = cells.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    Ok(GofResult {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    })
}
