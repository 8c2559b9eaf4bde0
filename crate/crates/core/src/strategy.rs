//! Restart strategies: how many iterations to run before measuring.
//!
//! A punctuated search runs `n` iterations, measures, and restarts from the
//! start state on failure, so its cost is geometric with mean `n / p(n)`.
//! With `k` independent searchers racing, a round succeeds with probability
//! `1 - (1 - p)^k`.
//!
//! For the single searcher the large-`n` optimum satisfies `x = tan(x/2)`
//! with `x = 2 n phi`. For `k` searchers a second-order expansion of the cost
//! derivative in `x = (1 + 2n) sqrt(r/N)` yields a closed-form `x(k)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use serde::Serialize;

use crate::analytic::{angle_from_overlap, grover_prob_at_angle};
use crate::error::{check_domain, Error, Result};
use crate::numeric::brent_root;

/// Result of planning a single-searcher punctuated search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PunctuatedPlan {
    pub phi: f64,
    /// Continuous optimum `x* / (2 phi)`.
    pub n_opt: f64,
    /// `n_opt` rounded to the nearest positive integer.
    pub n_int: u64,
    /// Exact success probability after `n_int` iterations.
    pub probability: f64,
    /// `n_int / probability`.
    pub expected_cost: f64,
    /// Cost at `n_opt` in the large-`n` model where `(2n+1) phi ~ 2 n phi`;
    /// equals `x* / (phi (1 - cos x*))` ~ `1.3801 / phi`.
    pub model_cost: f64,
    pub stddev_quadratic: f64,
    pub stddev_geometric: f64,
}

/// Standard deviation of the restart cost under the two competing formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostSpread {
    /// `(n/p) sqrt((1-p)(1-p+p^2))`.
    pub quadratic: f64,
    /// `n sqrt(1-p) / p`, the deviation of `n` times a geometric variable.
    pub geometric: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanMethod {
    ClosedForm,
    Numeric,
}

/// Which form of the `k`-parallel cost to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostModel {
    /// Uses the exact half-angle `(1+2n) arccos(1 - 2r/N) / 2`.
    #[default]
    Exact,
    /// Replaces the half-angle by `(1+2n) sqrt(r/N)`, valid for `r << N`.
    SmallRatio,
}

/// Result of planning a `k`-parallel search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParallelPlan {
    pub agents: u32,
    pub r: u64,
    pub n_items: u64,
    /// `(1 + 2 n_opt) sqrt(r/N)`.
    pub x: f64,
    pub n_opt: f64,
    pub n_int: u64,
    /// Closed form: the optimal-cost formula evaluated at `x`.
    /// Numeric: the exact cost at `n_int`.
    pub expected_cost: f64,
    /// Exact cost at `n_int`, for both methods.
    pub exact_cost: f64,
    pub method: PlanMethod,
}

/// Mean cost `n / p` of restarting until success.
pub fn expected_cost(n: f64, p: f64) -> Result<f64> {
    check_domain("n", n, "(0, inf)", n > 0.0 && n.is_finite())?;
    check_domain("p", p, "[0, 1]", (0.0..=1.0).contains(&p))?;
    if p == 0.0 {
        return Err(Error::NeverSucceeds);
    }
    Ok(n / p)
}

/// Lowest positive root of `x = tan(x / 2)`, approximately 2.3311.
pub fn optimal_x_single() -> f64 {
    static ROOT: OnceLock<f64> = OnceLock::new();
    *ROOT.get_or_init(|| {
        brent_root(|x| x - (x / 2.0).tan(), FRAC_PI_2 * 1.01, PI * 0.999, 1e-14)
            .expect("x - tan(x/2) changes sign on (pi/2, pi)")
    })
}

/// Expected cost of running `x / (2 phi)` iterations per round in the
/// large-`n` model: `x / (phi (1 - cos x))`.
pub fn model_cost(x: f64, phi: f64) -> f64 {
    x / (phi * (1.0 - x.cos()))
}

/// Cost of running to the first probability maximum and measuring once,
/// `pi / (2 phi)` in the large-`n` model.
pub fn max_probability_cost(phi: f64) -> Result<f64> {
    check_regime(phi)?;
    Ok(model_cost(PI, phi))
}

/// Smallest iteration count whose model cost equals the cost of running to
/// maximum probability. About `0.7854 / phi`.
pub fn break_even_iterations(phi: f64) -> Result<f64> {
    let target = max_probability_cost(phi)?;
    // The model cost falls monotonically from +inf at x -> 0 to its minimum.
    let x = brent_root(
        |x| model_cost(x, phi) - target,
        1e-6,
        optimal_x_single(),
        1e-14,
    )?;
    Ok(x / (2.0 * phi))
}

fn check_regime(phi: f64) -> Result<()> {
    if !(phi > 0.0 && phi < FRAC_PI_2) {
        return Err(Error::Regime(phi));
    }
    Ok(())
}

/// Optimal punctuated plan for rotation angle `phi` with the start state
/// equal to the averaging state.
pub fn punctuated_plan(phi: f64) -> Result<PunctuatedPlan> {
    check_regime(phi)?;
    let x = optimal_x_single();
    let n_opt = x / (2.0 * phi);
    let n_int = (n_opt.round() as u64).max(1);
    let probability = grover_prob_at_angle(phi, n_int as f64);
    let expected_cost = expected_cost(n_int as f64, probability)?;
    let spread = cost_stddev(n_int as f64, probability)?;
    Ok(PunctuatedPlan {
        phi,
        n_opt,
        n_int,
        probability,
        expected_cost,
        model_cost: model_cost(x, phi),
        stddev_quadratic: spread.quadratic,
        stddev_geometric: spread.geometric,
    })
}

pub fn cost_stddev(n: f64, p: f64) -> Result<CostSpread> {
    let mean = expected_cost(n, p)?;
    let q = 1.0 - p;
    Ok(CostSpread {
        quadratic: mean * (q * (q + p * p)).sqrt(),
        geometric: n * q.sqrt() / p,
    })
}

/// Probability that at least one of `k` independent searchers succeeds.
pub fn parallel_success(p: f64, k: u32) -> f64 {
    match k {
        1 => p,
        _ if p >= 1.0 => 1.0,
        _ => -(k as f64 * (-p).ln_1p()).exp_m1(),
    }
}

fn check_counts(r: u64, n_items: u64, k: u32) -> Result<()> {
    if n_items == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if r == 0 || r > n_items {
        return Err(Error::InvalidTarget(format!(
            "r = {r} must lie in [1, N = {n_items}]"
        )));
    }
    if k == 0 {
        return Err(Error::OutOfValidity("k >= 1"));
    }
    Ok(())
}

/// Expected parallel time of `k` searchers each running `n` iterations per
/// round, with `r` uniformly weighted targets among `N` items.
pub fn parallel_expected_cost(
    n: f64,
    r: u64,
    n_items: u64,
    k: u32,
    model: CostModel,
) -> Result<f64> {
    check_counts(r, n_items, k)?;
    check_domain("n", n, "(0, inf)", n > 0.0 && n.is_finite())?;
    let ratio = r as f64 / n_items as f64;
    let p_k = match model {
        // cos^2((1+2n) phi / 2) is the single-searcher failure probability.
        CostModel::Exact => {
            parallel_success(grover_prob_at_angle(angle_from_overlap(ratio.sqrt()), n), k)
        }
        CostModel::SmallRatio => 1.0 - ((1.0 + 2.0 * n) * ratio.sqrt()).cos().powi(2 * k as i32),
    };
    if p_k <= 0.0 {
        return Err(Error::NeverSucceeds);
    }
    Ok(n / p_k)
}

/// Large-`n` cost derivative in terms of `x = (1 + 2n) sqrt(r/N)`:
/// `(1 - cos^{2k} x (1 + 2 k x tan x)) / (cos^{2k} x - 1)^2`.
pub fn parallel_cost_derivative(x: f64, k: u32) -> Result<f64> {
    check_domain("x", x, "(0, pi/2)", x > 0.0 && x < FRAC_PI_2)?;
    if k == 0 {
        return Err(Error::OutOfValidity("k >= 1"));
    }
    let c2k = x.cos().powi(2 * k as i32);
    let denom = (c2k - 1.0).powi(2);
    if denom == 0.0 {
        return Err(Error::Domain {
            name: "x",
            value: x,
            domain: "away from 0 (derivative is singular)",
        });
    }
    Ok((1.0 - c2k * (1.0 + 2.0 * k as f64 * x * x.tan())) / denom)
}

/// Closed-form optimal `x` for `k >= 2` searchers, from the second-order
/// expansion of the cost derivative.
pub fn optimal_x_parallel_approx(k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::OutOfValidity("k >= 2"));
    }
    let k = k as f64;
    let disc = -31.0 - 30.0 * k + 225.0 * k * k;
    let num = 5.0 - 15.0 * k + 5f64.sqrt() * disc.sqrt();
    let den = -3.0 + 15.0 * k * k;
    Ok((num / den).sqrt())
}

/// Optimal `k`-parallel cost as a closed form in `k`, `r` and `N`:
/// `(x sqrt(N/r) - 1) / (2 - 2 cos^{2k} x)` with `x = x(k)`.
pub fn parallel_optimal_cost_formula(r: u64, n_items: u64, k: u32) -> Result<f64> {
    check_counts(r, n_items, k)?;
    let x = optimal_x_parallel_approx(k)?;
    let scale = (n_items as f64 / r as f64).sqrt();
    Ok((x * scale - 1.0) / (2.0 - 2.0 * x.cos().powi(2 * k as i32)))
}

/// Largest iteration count worth scanning: `ceil(pi/4 sqrt(N/r))`.
pub fn scan_limit(r: u64, n_items: u64) -> u64 {
    ((PI / 4.0) * (n_items as f64 / r as f64).sqrt())
        .ceil()
        .max(1.0) as u64
}

/// Plans a `k`-parallel search for `r` targets among `N` items.
///
/// `ClosedForm` needs `k >= 2` and `r/N <= 0.01`. `Numeric` scans every
/// integer `n` up to [`scan_limit`] against the exact cost and keeps the
/// smallest minimizer.
pub fn parallel_plan(r: u64, n_items: u64, k: u32, method: PlanMethod) -> Result<ParallelPlan> {
    check_counts(r, n_items, k)?;
    let root_ratio = (r as f64 / n_items as f64).sqrt();
    match method {
        PlanMethod::ClosedForm => {
            if r as f64 / n_items as f64 > 0.01 {
                return Err(Error::OutOfValidity("r/N <= 0.01"));
            }
            let x = optimal_x_parallel_approx(k)?;
            let n_opt = 0.5 * (x / root_ratio - 1.0);
            let n_int = (n_opt.round() as u64).max(1);
            Ok(ParallelPlan {
                agents: k,
                r,
                n_items,
                x,
                n_opt,
                n_int,
                expected_cost: parallel_optimal_cost_formula(r, n_items, k)?,
                exact_cost: parallel_expected_cost(n_int as f64, r, n_items, k, CostModel::Exact)?,
                method,
            })
        }
        PlanMethod::Numeric => {
            let mut best: Option<(u64, f64)> = None;
            for n in 1..=scan_limit(r, n_items) {
                let cost = match parallel_expected_cost(n as f64, r, n_items, k, CostModel::Exact) {
                    Ok(c) => c,
                    Err(Error::NeverSucceeds) => continue,
                    Err(e) => return Err(e),
                };
                if best.map_or(true, |(_, c)| cost < c) {
                    best = Some((n, cost));
                }
            }
            let (n_int, cost) = best.ok_or(Error::NeverSucceeds)?;
            Ok(ParallelPlan {
                agents: k,
                r,
                n_items,
                x: (1.0 + 2.0 * n_int as f64) * root_ratio,
                n_opt: n_int as f64,
                n_int,
                expected_cost: cost,
                exact_cost: cost,
                method,
            })
        }
    }
}
