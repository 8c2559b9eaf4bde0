//! Reduction of a search instance to a rotation in the plane spanned by
//! `|t>` (the normalized target projection of `|a>`) and `|a'>` (the rest of
//! `|a>`), plus the closed-form success probability that follows from it.
//!
//! `Q` rotates that plane by `phi = arccos(1 - 2 v^2)`, fixes the target
//! residual and negates the non-target residual. With the start state written
//! as `alpha |t> + beta e^{ib} |a'> + |phi_t> + |phi_l>`, the probability of
//! measuring a target after `n` steps is
//!
//! ```text
//! p(n) = w_t + (alpha^2 + beta^2)/2 + (A/2) cos(2 n phi - theta)
//! A     = |alpha^2 + beta^2 e^{2ib}|
//! theta = atan2(2 alpha beta cos b, alpha^2 - beta^2)
//! ```

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_domain, Error, Result};
use crate::statevector::{SearchInstance, StateVector, TargetSet};

/// Squared overlaps within this distance of 0 or 1 are treated as degenerate.
const DEGENERACY_TOLERANCE: f64 = 1e-14;

/// Rotation-plane coordinates of a search instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decomposition {
    /// Overlap magnitude of `|a>` with the target subspace.
    pub v: f64,
    /// Rotation angle per iteration.
    pub phi: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Relative phase of the `|a'>` coordinate, in `[0, 2 pi)`.
    pub b: f64,
    /// `|alpha^2 + beta^2 e^{2ib}|`.
    pub amp: f64,
    /// Phase of the oscillating term, in `(-pi, pi]`.
    pub theta: f64,
    /// Weight of the start state in the target subspace outside the plane.
    pub w_t: f64,
    /// Weight of the start state in the non-target subspace outside the plane.
    pub w_l: f64,
}

impl Decomposition {
    /// Builds a decomposition from its independent coordinates, deriving
    /// `phi`, `amp` and `theta`.
    pub fn from_plane(v: f64, alpha: f64, beta: f64, b: f64, w_t: f64, w_l: f64) -> Self {
        let a2 = alpha * alpha;
        let b2 = beta * beta;
        let amp = (Complex64::new(a2, 0.0) + b2 * Complex64::from_polar(1.0, 2.0 * b)).norm();
        let mut theta = (2.0 * alpha * beta * b.cos()).atan2(a2 - b2);
        if theta <= -PI {
            theta = PI;
        }
        Self {
            v,
            phi: angle_from_overlap(v),
            alpha,
            beta,
            b,
            amp,
            theta,
            w_t,
            w_l,
        }
    }

    /// The phase in the `cos(2 n phi + psi)` convention: `psi = pi - theta`.
    pub fn psi(&self) -> f64 {
        PI - self.theta
    }

    /// In-plane target probability `g(n) = |<t|Q^n|s>|^2`.
    pub fn g(&self, n: f64) -> f64 {
        0.5 * (self.alpha * self.alpha + self.beta * self.beta)
            + 0.5 * self.amp * (2.0 * n * self.phi - self.theta).cos()
    }

    /// Total success probability `w_t + g(n)`.
    pub fn success_probability(&self, n: f64) -> f64 {
        self.w_t + self.g(n)
    }

    /// `phi^2 A delta^2`: leading-order loss of `g` when measuring `delta`
    /// iterations away from a maximum.
    pub fn rounding_loss(&self, delta: f64) -> f64 {
        self.phi * self.phi * self.amp * delta * delta
    }
}

/// A continuous maximizer of the success probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Maximum {
    pub n: f64,
    /// `g(n)` at the maximum.
    pub g_value: f64,
    /// `w_t + g(n)` at the maximum.
    pub probability: f64,
}

/// Mean and spread of target and non-target amplitudes of a start state,
/// the parameterization used for uniform averaging states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BihamMapping {
    pub k_bar: Complex64,
    pub l_bar: Complex64,
    pub sigma_k: f64,
    pub sigma_l: f64,
}

impl BihamMapping {
    /// `r |k|^2 + r s_k^2 + (N-r) |l|^2 + (N-r) s_l^2`, which equals 1.
    pub fn normalization(&self, r: usize, n_items: usize) -> f64 {
        let r = r as f64;
        let rest = (n_items as f64) - r;
        r * self.k_bar.norm_sqr()
            + r * self.sigma_k * self.sigma_k
            + rest * self.l_bar.norm_sqr()
            + rest * self.sigma_l * self.sigma_l
    }
}

/// Rotation angle `arccos(1 - 2 v^2)`.
pub fn rotation_angle(v: f64) -> Result<f64> {
    check_domain("v", v, "[0, 1]", (0.0..=1.0).contains(&v))?;
    Ok(angle_from_overlap(v))
}

// arccos(1 - 2v^2) == 2 asin(v); this form keeps full precision as v -> 0.
pub(crate) fn angle_from_overlap(v: f64) -> f64 {
    let v = v.clamp(0.0, 1.0);
    2.0 * v.atan2((1.0 - v * v).sqrt())
}

/// Decomposes an instance into rotation-plane coordinates.
///
/// The global phase of `|s>` is chosen so that `<t|s>` is real and
/// non-negative, which makes `alpha` real.
pub fn decompose(instance: &SearchInstance) -> Result<Decomposition> {
    let targets = instance.targets();
    let a = instance.averaging().amplitudes();
    let s = instance.start().amplitudes();

    let v2 = instance.overlap_sqr();
    if v2 <= DEGENERACY_TOLERANCE {
        return Err(Error::NoOverlap);
    }
    let v = v2.sqrt();

    // <t|s> with |t> = (1/v) P_T |a>.
    let ct: Complex64 = targets
        .indices()
        .iter()
        .map(|&i| a[i].conj() * s[i])
        .sum::<Complex64>()
        / v;
    let w_t = residual_norm_sqr(targets.indices().iter().map(|&i| (s[i], a[i] / v)), ct);

    if 1.0 - v2 <= DEGENERACY_TOLERANCE {
        return Err(Error::DegenerateAPrime {
            alpha: ct.norm(),
            w_t,
        });
    }

    // |a'> is supported on the non-targets: a'_i = a_i / sqrt(1 - v^2).
    let scale = 1.0 / (1.0 - v2).sqrt();
    let mask = targets.mask();
    let non_targets = || (0..s.len()).filter(|&i| !mask[i]);
    let ca: Complex64 = non_targets().map(|i| (a[i] * scale).conj() * s[i]).sum();
    let w_l = residual_norm_sqr(non_targets().map(|i| (s[i], a[i] * scale)), ca);

    let alpha = ct.norm();
    let beta = ca.norm();
    let b = if beta == 0.0 || alpha == 0.0 {
        // With alpha = 0 the global phase is free; spend it on making beta real.
        0.0
    } else {
        let raw = (ca * ct.conj()).arg().rem_euclid(TAU);
        if raw >= TAU {
            0.0
        } else {
            raw
        }
    };
    Ok(Decomposition::from_plane(v, alpha, beta, b, w_t, w_l))
}

// Squared norm of `sum (s_i - c e_i)` over a component, i.e. what is left of
// the start state after removing its projection `c` onto the unit vector `e`.
fn residual_norm_sqr(items: impl Iterator<Item = (Complex64, Complex64)>, c: Complex64) -> f64 {
    items.map(|(si, ei)| (si - c * ei).norm_sqr()).sum()
}

/// Closed-form success probability after `n` (possibly fractional) iterations.
pub fn success_prob_analytic(dec: &Decomposition, n: f64) -> Result<f64> {
    check_domain("n", n, "[0, inf)", n >= 0.0 && n.is_finite())?;
    Ok(dec.success_probability(n))
}

/// The `j`-th continuous maximizer `n_j = (theta + 2 pi j) / (2 phi)`.
pub fn optimal_iterations_analytic(dec: &Decomposition, j: u64) -> Result<Maximum> {
    if dec.phi <= 0.0 {
        return Err(Error::NoRotation);
    }
    if dec.amp <= DEGENERACY_TOLERANCE {
        return Err(Error::FlatProbability);
    }
    let n = (dec.theta + TAU * j as f64) / (2.0 * dec.phi);
    let g_value = 0.5 * (dec.alpha * dec.alpha + dec.beta * dec.beta) + 0.5 * dec.amp;
    Ok(Maximum {
        n,
        g_value,
        probability: dec.w_t + g_value,
    })
}

/// The smallest non-negative continuous maximizer.
pub fn first_maximum(dec: &Decomposition) -> Result<Maximum> {
    let m = optimal_iterations_analytic(dec, 0)?;
    if m.n >= 0.0 {
        Ok(m)
    } else {
        optimal_iterations_analytic(dec, 1)
    }
}

/// Success probability `(1 - cos((2n+1) phi)) / 2` when the start state equals
/// the averaging state.
pub fn grover_case_prob(v: f64, n: u64) -> Result<f64> {
    check_domain("v", v, "(0, 1)", v > 0.0 && v < 1.0)?;
    Ok(grover_prob_at_angle(angle_from_overlap(v), n as f64))
}

pub(crate) fn grover_prob_at_angle(phi: f64, n: f64) -> f64 {
    0.5 * (1.0 - ((2.0 * n + 1.0) * phi).cos())
}

/// Means and standard deviations of the target and non-target amplitudes.
pub fn biham_mapping(start: &StateVector, targets: &TargetSet) -> Result<BihamMapping> {
    let n_items = start.dim();
    let r = targets.len();
    if targets.n_items() != n_items {
        return Err(Error::DimensionMismatch {
            expected: targets.n_items(),
            found: n_items,
        });
    }
    if r == 0 || r >= n_items {
        return Err(Error::MappingUndefined { r, n_items });
    }
    let mask = targets.mask();
    let amps = start.amplitudes();
    let (target_amps, other_amps): (Vec<Complex64>, Vec<Complex64>) =
        amps.iter()
            .zip(&mask)
            .fold((Vec::new(), Vec::new()), |(mut t, mut l), (&x, &is_t)| {
                if is_t {
                    t.push(x)
                } else {
                    l.push(x)
                }
                (t, l)
            });
    let (k_bar, sigma_k) = mean_and_std(&target_amps);
    let (l_bar, sigma_l) = mean_and_std(&other_amps);
    Ok(BihamMapping {
        k_bar,
        l_bar,
        sigma_k,
        sigma_l,
    })
}

fn mean_and_std(xs: &[Complex64]) -> (Complex64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<Complex64>() / n;
    let var = xs.iter().map(|x| (x - mean).norm_sqr()).sum::<f64>() / n;
    (mean, var.sqrt())
}
