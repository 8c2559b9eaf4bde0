//! Dense state-vector simulation of the amplitude-amplification operator.
//!
//! One application of `Q` is two O(N) passes: the oracle negates the
//! amplitudes of the target indices, then the state is reflected about the
//! averaging state. No N x N matrix is ever formed, so N = 2^20 fits easily.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};

/// Allowed deviation of a squared norm from 1 before a state is rejected.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// A unit-norm vector of complex amplitudes over the measurement basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized (within [`NORM_TOLERANCE`]).
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        let state = Self { amplitudes };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE || !norm_sqr.is_finite() {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// Scales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    /// The basis state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if index >= dim {
            return Err(Error::InvalidTarget(format!(
                "index {index} out of range for N = {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Born-rule outcome probabilities `|amplitude_i|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Negates the amplitudes of every target index in place.
    pub fn apply_oracle(&mut self, targets: &TargetSet) -> Result<()> {
        targets.check_dim(self.dim())?;
        for &i in targets.indices() {
            self.amplitudes[i] = -self.amplitudes[i];
        }
        Ok(())
    }

    /// Replaces the state with `2<axis|state> axis - state` in place.
    pub fn apply_reflection(&mut self, axis: &StateVector) -> Result<()> {
        check_dims(axis.dim(), self.dim())?;
        let norm_sqr = axis.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidAxis { norm_sqr });
        }
        self.reflect_unchecked(axis);
        Ok(())
    }

    fn reflect_unchecked(&mut self, axis: &StateVector) {
        let overlap: Complex64 = axis
            .amplitudes
            .iter()
            .zip(&self.amplitudes)
            .map(|(a, s)| a.conj() * s)
            .sum();
        let twice = 2.0 * overlap;
        for (s, a) in self.amplitudes.iter_mut().zip(&axis.amplitudes) {
            *s = twice * a - *s;
        }
    }

    fn check_norm(&self, iterations: u64) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE || !norm_sqr.is_finite() {
            return Err(Error::NormDrift {
                norm_sqr,
                iterations,
            });
        }
        Ok(())
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A sorted set of distinct target indices in `[0, N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TargetSet {
    indices: Vec<usize>,
    n_items: usize,
}

impl TargetSet {
    pub fn new(indices: impl IntoIterator<Item = usize>, n_items: usize) -> Result<Self> {
        if n_items == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let mut indices: Vec<usize> = indices.into_iter().collect();
        indices.sort_unstable();
        if indices.is_empty() {
            return Err(Error::InvalidTarget(
                "at least one target is required".into(),
            ));
        }
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidTarget(format!("duplicate index {}", w[0])));
        }
        if let Some(&last) = indices.last() {
            if last >= n_items {
                return Err(Error::InvalidTarget(format!(
                    "index {last} out of range for N = {n_items}"
                )));
            }
        }
        Ok(Self { indices, n_items })
    }

    /// Targets at indices `0..r`.
    pub fn first(r: usize, n_items: usize) -> Result<Self> {
        if r > n_items {
            return Err(Error::InvalidTarget(format!(
                "r = {r} exceeds N = {n_items}"
            )));
        }
        Self::new(0..r, n_items)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    /// Number of targets `r`.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    /// Membership flags for every basis index.
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n_items];
        for &i in &self.indices {
            mask[i] = true;
        }
        mask
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.n_items != dim {
            return Err(Error::InvalidTarget(format!(
                "target set is for N = {}, state has dimension {dim}",
                self.n_items
            )));
        }
        Ok(())
    }
}

/// A complete search problem: targets, averaging state `|a>` and start `|s>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchInstance {
    targets: TargetSet,
    averaging: StateVector,
    start: StateVector,
}

impl SearchInstance {
    pub fn new(targets: TargetSet, averaging: StateVector, start: StateVector) -> Result<Self> {
        check_dims(targets.n_items(), averaging.dim())?;
        check_dims(targets.n_items(), start.dim())?;
        Ok(Self {
            targets,
            averaging,
            start,
        })
    }

    /// Original Grover setting: uniform averaging and starting states.
    pub fn uniform(n_items: usize, targets: TargetSet) -> Result<Self> {
        let u = uniform_state(n_items)?;
        Self::new(targets, u.clone(), u)
    }

    pub fn n_items(&self) -> usize {
        self.targets.n_items()
    }

    pub fn targets(&self) -> &TargetSet {
        &self.targets
    }

    pub fn averaging(&self) -> &StateVector {
        &self.averaging
    }

    pub fn start(&self) -> &StateVector {
        &self.start
    }

    /// `v^2`: weight of the averaging state inside the target subspace.
    pub fn overlap_sqr(&self) -> f64 {
        self.targets
            .indices()
            .iter()
            .map(|&i| self.averaging.amplitudes[i].norm_sqr())
            .sum::<f64>()
            .min(1.0)
    }

    /// One application of `Q`: oracle first, then the averaging reflection.
    pub fn step(&self, state: &mut StateVector) -> Result<()> {
        check_dims(self.n_items(), state.dim())?;
        for &i in self.targets.indices() {
            state.amplitudes[i] = -state.amplitudes[i];
        }
        state.reflect_unchecked(&self.averaging);
        Ok(())
    }

    /// Success probabilities after `0..=n_max` iterations, from one sweep.
    pub fn success_curve(&self, n_max: u64) -> Result<Vec<f64>> {
        let mut state = self.start.clone();
        let mut curve = Vec::with_capacity(n_max as usize + 1);
        curve.push(success_probability(&state, &self.targets)?);
        for n in 1..=n_max {
            self.step(&mut state)?;
            curve.push(success_probability(&state, &self.targets)?);
            if n % 256 == 0 {
                state.check_norm(n)?;
            }
        }
        state.check_norm(n_max)?;
        Ok(curve)
    }
}

/// The uniform superposition `N^{-1/2} sum |x>`.
pub fn uniform_state(n_items: usize) -> Result<StateVector> {
    if n_items == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let amp = Complex64::new(1.0 / (n_items as f64).sqrt(), 0.0);
    Ok(StateVector {
        amplitudes: vec![amp; n_items],
    })
}

/// A random state drawn uniformly from the unit sphere: independent
/// complex-Gaussian components, normalized. Deterministic in `seed`.
pub fn random_state(n_items: usize, seed: u64) -> Result<StateVector> {
    if n_items == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amplitudes = (0..n_items)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    StateVector::normalized(amplitudes)
}

/// Applies the phase oracle `1 - 2 sum |t_i><t_i|`.
pub fn oracle_reflect(state: &StateVector, targets: &TargetSet) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply_oracle(targets)?;
    Ok(out)
}

/// Applies `2|axis><axis| - 1`.
pub fn reflect_about(state: &StateVector, axis: &StateVector) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply_reflection(axis)?;
    Ok(out)
}

/// `Q^n |s>`.
pub fn grover_power(instance: &SearchInstance, n: u64) -> Result<StateVector> {
    let mut state = instance.start.clone();
    for i in 1..=n {
        instance.step(&mut state)?;
        if i % 256 == 0 {
            state.check_norm(i)?;
        }
    }
    state.check_norm(n)?;
    Ok(state)
}

/// Total probability of measuring any target index.
pub fn success_probability(state: &StateVector, targets: &TargetSet) -> Result<f64> {
    targets.check_dim(state.dim())?;
    Ok(targets
        .indices()
        .iter()
        .map(|&i| state.amplitudes[i].norm_sqr())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn uniform_amplitudes() {
        let s = uniform_state(4).unwrap();
        assert!(s.amplitudes().iter().all(|a| *a == c(0.5)));
        assert_eq!(uniform_state(1).unwrap().amplitudes(), &[c(1.0)]);
        let s = uniform_state(64).unwrap();
        assert!(s.amplitudes().iter().all(|a| (a - c(0.125)).norm() < 1e-15));
        assert_eq!(uniform_state(0), Err(Error::InvalidDimension(0)));
    }

    #[test]
    fn random_state_is_seeded_and_normalized() {
        let a = random_state(8, 1).unwrap();
        assert_eq!(a, random_state(8, 1).unwrap());
        assert_ne!(a, random_state(8, 2).unwrap());
        let s = random_state(16, 7).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(random_state(0, 1).is_err());
    }

    #[test]
    fn oracle_negates_targets() {
        let s = uniform_state(4).unwrap();
        let t = TargetSet::new([2], 4).unwrap();
        let out = oracle_reflect(&s, &t).unwrap();
        assert_eq!(out.amplitudes(), &[c(0.5), c(0.5), c(-0.5), c(0.5)]);
        assert_eq!(oracle_reflect(&out, &t).unwrap(), s);

        let r = random_state(6, 3).unwrap();
        let all = TargetSet::first(6, 6).unwrap();
        let neg = oracle_reflect(&r, &all).unwrap();
        for (x, y) in neg.amplitudes().iter().zip(r.amplitudes()) {
            assert_eq!(*x, -*y);
        }
    }

    #[test]
    fn oracle_rejects_mismatched_targets() {
        let s = uniform_state(4).unwrap();
        let t = TargetSet::new([1], 8).unwrap();
        assert!(matches!(
            oracle_reflect(&s, &t),
            Err(Error::InvalidTarget(_))
        ));
    }

    #[test]
    fn target_set_validation() {
        assert!(TargetSet::new([4], 4).is_err());
        assert!(TargetSet::new([1, 1], 4).is_err());
        assert!(TargetSet::new(std::iter::empty(), 4).is_err());
        assert!(TargetSet::first(5, 4).is_err());
        let t = TargetSet::new([3, 0, 2], 4).unwrap();
        assert_eq!(t.indices(), &[0, 2, 3]);
        assert!(t.contains(2) && !t.contains(1));
        assert_eq!(t.mask(), vec![true, false, true, true]);
    }

    #[test]
    fn reflection_eigenvalues() {
        let axis = random_state(5, 9).unwrap();
        let same = reflect_about(&axis, &axis).unwrap();
        assert!(max_diff(&same, &axis) < 1e-12);

        // Something orthogonal to |0>: flips sign.
        let e0 = StateVector::basis(5, 0).unwrap();
        let e3 = StateVector::basis(5, 3).unwrap();
        let flipped = reflect_about(&e3, &e0).unwrap();
        assert_eq!(flipped.amplitudes()[3], c(-1.0));

        let s = random_state(5, 10).unwrap();
        let twice = reflect_about(&reflect_about(&s, &axis).unwrap(), &axis).unwrap();
        assert!(max_diff(&twice, &s) < 1e-12);
        assert!((reflect_about(&s, &axis).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reflection_rejects_non_unit_axis() {
        let s = uniform_state(2).unwrap();
        let bad = StateVector {
            amplitudes: vec![c(1.0), c(1.0)],
        };
        assert!(matches!(
            reflect_about(&s, &bad),
            Err(Error::InvalidAxis { .. })
        ));
    }

    #[test]
    fn grover_power_small_cases() {
        let inst = SearchInstance::uniform(4, TargetSet::new([3], 4).unwrap()).unwrap();
        assert_eq!(grover_power(&inst, 0).unwrap(), *inst.start());
        let p = success_probability(&grover_power(&inst, 1).unwrap(), inst.targets()).unwrap();
        assert!((p - 1.0).abs() < 1e-14);

        // (1 - cos(7 arccos(7/8))) / 2 evaluated at 50 digits.
        let inst = SearchInstance::uniform(16, TargetSet::new([5], 16).unwrap()).unwrap();
        let p = success_probability(&grover_power(&inst, 3).unwrap(), inst.targets()).unwrap();
        assert!((p - 0.961_318_969_726_562_5).abs() < 1e-12, "{p}");
    }

    #[test]
    fn success_probability_cases() {
        let s = uniform_state(4).unwrap();
        let t = TargetSet::new([0], 4).unwrap();
        assert_eq!(success_probability(&s, &t).unwrap(), 0.25);
        let e = StateVector::basis(4, 0).unwrap();
        assert_eq!(success_probability(&e, &t).unwrap(), 1.0);
        let r = random_state(4, 2).unwrap();
        let all = TargetSet::first(4, 4).unwrap();
        assert!((success_probability(&r, &all).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn success_curve_matches_grover_power() {
        let targets = TargetSet::new([1, 6], 8).unwrap();
        let inst = SearchInstance::new(
            targets,
            random_state(8, 4).unwrap(),
            random_state(8, 5).unwrap(),
        )
        .unwrap();
        let curve = inst.success_curve(12).unwrap();
        for (n, p) in curve.iter().enumerate() {
            let direct =
                success_probability(&grover_power(&inst, n as u64).unwrap(), inst.targets())
                    .unwrap();
            assert_eq!(*p, direct);
        }
    }

    #[test]
    fn from_amplitudes_requires_unit_norm() {
        assert!(StateVector::from_amplitudes(vec![c(1.0), c(1.0)]).is_err());
        assert!(StateVector::from_amplitudes(vec![]).is_err());
        assert!(StateVector::from_amplitudes(vec![c(0.6), Complex64::new(0.0, 0.8)]).is_ok());
        assert!(StateVector::normalized(vec![c(0.0)]).is_err());
    }
}
