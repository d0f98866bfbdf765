//! Exhaustive lattice search over channels, for cross-checking the solver on
//! tiny instances. Every grid channel is evaluated through the table route
//! ([`extend_with_q`] and [`constraint_residuals`]), not through the
//! solver's objective.

use crate::error::{Error, Result};
use crate::prob::{mutual_information, Channel, JointTable, VarSet};

use super::{constraint_residuals, extend_with_q};

/// Largest number of grid channels the oracle will enumerate.
const MAX_GRID_POINTS: usize = 2_000_000;

/// All vectors of `parts` non-negative integers summing to `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Best `I(Q:Y)` over channels whose rows lie on the simplex lattice with
/// spacing `1/grid_resolution` and whose residuals are all at most
/// `feasibility_tolerance`. A lower bound on `I_α` at this arity.
pub fn ialpha_oracle(
    table: &JointTable,
    predictors: &[VarSet],
    grid_resolution: usize,
    q_arity: usize,
    feasibility_tolerance: f64,
) -> Result<f64> {
    if grid_resolution < 4 {
        return Err(Error::InvalidConfig(
            "grid resolution must be at least 4".into(),
        ));
    }
    if predictors.is_empty() {
        return Err(Error::NoPredictors);
    }
    if !(1..=3).contains(&q_arity) {
        return Err(Error::TooLargeForOracle(format!("q_arity {q_arity} > 3")));
    }
    let ny = table.target_variable().cardinality();
    let rows: Vec<Vec<f64>> = compositions(grid_resolution, q_arity)
        .into_iter()
        .map(|c| c.into_iter().map(|k| k as f64 / grid_resolution as f64).collect())
        .collect();
    let points = (rows.len() as f64).powi(ny as i32);
    if points > MAX_GRID_POINTS as f64 {
        return Err(Error::TooLargeForOracle(format!(
            "{} grid channels for |Y| = {ny}",
            points as u64
        )));
    }
    let q = table.num_variables();
    let qs = VarSet::single(q);
    let y = table.target_set();
    let mut best = 0.0f64;
    let mut choice = vec![0usize; ny];
    loop {
        let channel =
            Channel::new(choice.iter().map(|&c| rows[c].clone()).collect())?;
        let ext = extend_with_q(table, &channel)?;
        let residuals = constraint_residuals(&ext, q, predictors)?;
        if residuals.iter().all(|&r| r <= feasibility_tolerance) {
            best = best.max(mutual_information(&ext, &qs, &y)?);
        }
        // odometer over row choices
        let mut k = 0;
        loop {
            if k == ny {
                return Ok(best);
            }
            choice[k] += 1;
            if choice[k] < rows.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(8, 3).len(), 45);
        assert_eq!(compositions(8, 2).len(), 9);
        assert!(compositions(4, 3).iter().all(|c| c.iter().sum::<usize>() == 4));
    }
}
