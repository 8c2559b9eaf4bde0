//! Data tables behind the success-probability heatmap and the sweep of
//! optimal iteration counts over the number of parallel searchers.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{angle_from_overlap, grover_prob_at_angle};
use crate::error::{Error, Result};
use crate::strategy::{parallel_plan, PlanMethod};

/// Success probability for uniform start and averaging states, indexed by
/// iteration count (rows) and number of targets (columns).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Heatmap {
    pub n_items: usize,
    /// `rows[n][r - 1]` is the probability after `n` iterations with `r` targets.
    pub rows: Vec<Vec<f64>>,
}

impl Heatmap {
    pub fn n_max(&self) -> u64 {
        self.rows.len() as u64 - 1
    }

    /// Probabilities for `r` targets over all iteration counts.
    pub fn column(&self, r: usize) -> Vec<f64> {
        self.rows.iter().map(|row| row[r - 1]).collect()
    }
}

/// Two periods of the single-target column: `2 ceil(pi / (2 phi(r = 1)))`.
pub fn default_heatmap_iterations(n_items: usize) -> u64 {
    let phi = angle_from_overlap((1.0 / n_items as f64).sqrt());
    2 * (FRAC_PI_2 / phi).ceil() as u64
}

pub fn heatmap(n_items: usize, n_max: u64) -> Result<Heatmap> {
    if n_items == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let angles: Vec<f64> = (1..=n_items)
        .map(|r| angle_from_overlap((r as f64 / n_items as f64).sqrt()))
        .collect();
    let rows = (0..=n_max)
        .map(|n| {
            angles
                .iter()
                .map(|&phi| grover_prob_at_angle(phi, n as f64))
                .collect()
        })
        .collect();
    Ok(Heatmap { n_items, rows })
}

/// One `(r, k)` point of the parallelism sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub r: u64,
    pub k: u32,
    pub n_numeric: u64,
    /// Closed-form optimum; absent for `k < 2` or `r/N > 0.01`.
    pub n_formula: Option<f64>,
    pub cost_numeric: f64,
    /// Closed-form optimal cost.
    pub cost_formula: Option<f64>,
    /// Exact cost at the rounded closed-form iteration count.
    pub cost_exact_at_formula_n: Option<f64>,
}

/// Numeric and closed-form plans for every `(r, k)`, ordered by `r` then `k`.
pub fn parallel_sweep(n_items: u64, rs: &[u64], ks: &[u32]) -> Result<Vec<SweepRow>> {
    let points: Vec<(u64, u32)> = rs
        .iter()
        .flat_map(|&r| ks.iter().map(move |&k| (r, k)))
        .collect();
    points
        .into_par_iter()
        .map(|(r, k)| {
            let numeric = parallel_plan(r, n_items, k, PlanMethod::Numeric)?;
            let formula = match parallel_plan(r, n_items, k, PlanMethod::ClosedForm) {
                Ok(plan) => Some(plan),
                Err(Error::OutOfValidity(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(SweepRow {
                r,
                k,
                n_numeric: numeric.n_int,
                n_formula: formula.map(|p| p.n_opt),
                cost_numeric: numeric.expected_cost,
                cost_formula: formula.map(|p| p.expected_cost),
                cost_exact_at_formula_n: formula.map(|p| p.exact_cost),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn heatmap_first_row_is_classical_guess() {
        let h = heatmap(64, 10).unwrap();
        for r in 1..=64 {
            assert!((h.rows[0][r - 1] - r as f64 / 64.0).abs() < 1e-14);
        }
        assert!((h.rows[1][15] - 1.0).abs() < 1e-14);
        // Every target marked: certain success at every n.
        assert!(h.column(64).iter().all(|p| (p - 1.0).abs() < 1e-14));
    }

    #[test]
    fn heatmap_default_depth() {
        // phi(r = 1, N = 64) = 2 asin(1/8) ~ 0.2507 -> ceil(6.27) = 7
        assert_eq!(default_heatmap_iterations(64), 14);
        assert_eq!(heatmap(64, 14).unwrap().n_max(), 14);
    }

    #[test]
    fn heatmap_columns_are_periodic() {
        let h = heatmap(64, 200).unwrap();
        for r in [1usize, 3, 10, 40] {
            let phi = angle_from_overlap((r as f64 / 64.0).sqrt());
            let period = PI / phi;
            for n in 0..50u64 {
                let shifted = grover_prob_at_angle(phi, n as f64 + period);
                assert!((shifted - h.rows[n as usize][r - 1]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn sweep_rows_ordered_and_formula_gated() {
        let rows = parallel_sweep(1 << 14, &[1, 2], &[1, 2, 3]).unwrap();
        let keys: Vec<(u64, u32)> = rows.iter().map(|r| (r.r, r.k)).collect();
        assert_eq!(keys, vec![(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]);
        assert!(rows[0].n_formula.is_none() && rows[0].cost_formula.is_none());
        assert!(rows[1].n_formula.is_some());
        // r/N too large for the closed form
        let rows = parallel_sweep(64, &[2], &[4]).unwrap();
        assert!(rows[0].n_formula.is_none());
    }
}
