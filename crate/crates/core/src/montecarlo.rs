//! Seeded restart experiments that check the expected-cost formulas.
//!
//! Every trial draws from its own ChaCha8 stream: the key comes from the
//! master seed and the stream id is the trial index. A trial's cost therefore
//! depends only on `(seed, trial index)`, so trials can be split across any
//! number of workers and still reproduce a sequential run exactly.

use std::ops::Range;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_domain, Error, Result};
use crate::statevector::{grover_power, success_probability, SearchInstance, StateVector};

/// Upper bound on measurement rounds in a single trial.
pub const ROUND_CAP: u64 = 1_000_000_000;

/// Surcharge for a measure-and-reset cycle when it is charged at all.
pub const RESET_SURCHARGE_CALLS: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RestartOptions {
    /// Oracle calls charged for every reset after a failed round. Zero means
    /// measurement and reset are free.
    pub reset_calls: u64,
}

impl RestartOptions {
    pub fn with_reset_surcharge() -> Self {
        Self {
            reset_calls: RESET_SURCHARGE_CALLS,
        }
    }
}

/// Empirical mean cost over a batch of trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`.
    pub stderr: f64,
    /// Sample standard deviation of the trial costs.
    pub std_dev: f64,
    /// Large-sample standard error of `std_dev`.
    pub std_dev_stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Estimate {
    pub fn from_costs(costs: &[u64], seed: u64) -> Self {
        let trials = costs.len() as u64;
        let count = costs.len() as f64;
        let total: u128 = costs.iter().map(|&c| c as u128).sum();
        let mean = total as f64 / count;
        if costs.len() < 2 {
            return Self {
                mean,
                stderr: 0.0,
                std_dev: 0.0,
                std_dev_stderr: 0.0,
                trials,
                seed,
            };
        }
        let (m2, m4) = costs.iter().fold((0.0, 0.0), |(m2, m4), &c| {
            let d = c as f64 - mean;
            let d2 = d * d;
            (m2 + d2, m4 + d2 * d2)
        });
        let variance = m2 / (count - 1.0);
        let std_dev = variance.sqrt();
        // Var(s^2) ~ (mu_4 - sigma^4) / n, and s = sqrt(s^2).
        let mu4 = m4 / count;
        let std_dev_stderr = if std_dev > 0.0 {
            ((mu4 - variance * variance).max(0.0) / count).sqrt() / (2.0 * std_dev)
        } else {
            0.0
        };
        Self {
            mean,
            stderr: std_dev / count.sqrt(),
            std_dev,
            std_dev_stderr,
            trials,
            seed,
        }
    }

    /// Whether `value` lies within `z` standard errors of the mean.
    pub fn covers(&self, value: f64, z: f64) -> bool {
        (self.mean - value).abs() <= z * self.stderr
    }
}

/// A `k`-searcher run: parallel time plus the total work of all searchers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParallelEstimate {
    pub time: Estimate,
    pub agent_calls: Estimate,
    pub agents: u32,
}

/// One round of a restart process: run some iterations, then measure.
pub trait RestartExperiment: Sync {
    /// Oracle calls spent per round.
    fn iterations(&self) -> u64;

    /// Draws one measurement round; true on success.
    fn round_succeeds(&self, rng: &mut ChaCha8Rng) -> bool;
}

/// Single searcher whose measurement succeeds with probability `p`.
#[derive(Debug, Clone, Copy)]
pub struct CoinFlip {
    p: f64,
    n: u64,
}

impl CoinFlip {
    pub fn new(p: f64, n: u64) -> Result<Self> {
        check_probability(p)?;
        check_iterations(n)?;
        Ok(Self { p, n })
    }
}

impl RestartExperiment for CoinFlip {
    fn iterations(&self) -> u64 {
        self.n
    }

    fn round_succeeds(&self, rng: &mut ChaCha8Rng) -> bool {
        rng.random::<f64>() < self.p
    }
}

/// `k` searchers measuring simultaneously; the round succeeds if any does.
#[derive(Debug, Clone, Copy)]
pub struct Race {
    p: f64,
    n: u64,
    k: u32,
}

impl Race {
    pub fn new(p: f64, n: u64, k: u32) -> Result<Self> {
        check_probability(p)?;
        check_iterations(n)?;
        if k == 0 {
            return Err(Error::OutOfValidity("k >= 1"));
        }
        Ok(Self { p, n, k })
    }
}

impl RestartExperiment for Race {
    fn iterations(&self) -> u64 {
        self.n
    }

    fn round_succeeds(&self, rng: &mut ChaCha8Rng) -> bool {
        // Every searcher measures, even after one has already succeeded.
        (0..self.k).fold(false, |hit, _| rng.random::<f64>() < self.p || hit)
    }
}

/// Draws basis indices with Born-rule probabilities `|amplitude|^2`.
#[derive(Debug, Clone)]
pub struct BornSampler {
    index: WeightedIndex<f64>,
}

impl BornSampler {
    pub fn new(state: &StateVector) -> Result<Self> {
        let index =
            WeightedIndex::new(state.probabilities()).map_err(|_| Error::NotNormalized {
                norm_sqr: state.norm_sqr(),
            })?;
        Ok(Self { index })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.index.sample(rng)
    }
}

/// Measures `Q^n |s>` in the computational basis; success iff the outcome
/// is a target index.
#[derive(Debug, Clone)]
pub struct MeasuredSearch {
    sampler: BornSampler,
    is_target: Vec<bool>,
    n: u64,
    probability: f64,
}

impl MeasuredSearch {
    pub fn new(instance: &SearchInstance, n: u64) -> Result<Self> {
        check_iterations(n)?;
        let state = grover_power(instance, n)?;
        let probability = success_probability(&state, instance.targets())?;
        if probability <= 0.0 {
            return Err(Error::NeverSucceeds);
        }
        Ok(Self {
            sampler: BornSampler::new(&state)?,
            is_target: instance.targets().mask(),
            n,
            probability,
        })
    }

    /// Exact success probability of one round.
    pub fn probability(&self) -> f64 {
        self.probability
    }
}

impl RestartExperiment for MeasuredSearch {
    fn iterations(&self) -> u64 {
        self.n
    }

    fn round_succeeds(&self, rng: &mut ChaCha8Rng) -> bool {
        self.is_target[self.sampler.sample(rng)]
    }
}

fn check_probability(p: f64) -> Result<()> {
    check_domain("p", p, "(0, 1]", (0.0..=1.0).contains(&p))?;
    if p == 0.0 {
        return Err(Error::NeverSucceeds);
    }
    Ok(())
}

fn check_iterations(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfValidity("n >= 1"));
    }
    Ok(())
}

fn master_key(seed: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut key);
    key
}

/// The random stream of trial `index` under master `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    stream_rng(&master_key(seed), index)
}

fn stream_rng(key: &[u8; 32], index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(*key);
    rng.set_stream(index);
    rng
}

fn trial_cost<E: RestartExperiment + ?Sized>(
    experiment: &E,
    rng: &mut ChaCha8Rng,
    options: &RestartOptions,
) -> Result<u64> {
    for round in 1..=ROUND_CAP {
        if experiment.round_succeeds(rng) {
            return Ok(round * experiment.iterations() + (round - 1) * options.reset_calls);
        }
    }
    Err(Error::RoundCapExceeded(ROUND_CAP))
}

/// Costs of the trials with indices in `range`, in index order.
pub fn trial_costs<E: RestartExperiment + ?Sized>(
    experiment: &E,
    seed: u64,
    range: Range<u64>,
    options: &RestartOptions,
) -> Result<Vec<u64>> {
    let key = master_key(seed);
    range
        .into_par_iter()
        .map(|i| trial_cost(experiment, &mut stream_rng(&key, i), options))
        .collect()
}

/// Runs `trials` independent trials and summarizes their costs.
pub fn estimate<E: RestartExperiment + ?Sized>(
    experiment: &E,
    trials: u64,
    seed: u64,
    options: &RestartOptions,
) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::OutOfValidity("trials >= 1"));
    }
    let costs = trial_costs(experiment, seed, 0..trials, options)?;
    Ok(Estimate::from_costs(&costs, seed))
}

/// Punctuated search where each measurement succeeds with probability `p`.
pub fn run_punctuated(p: f64, n: u64, trials: u64, seed: u64) -> Result<Estimate> {
    estimate(
        &CoinFlip::new(p, n)?,
        trials,
        seed,
        &RestartOptions::default(),
    )
}

/// `k` punctuated searchers racing; the time is parallel rounds times `n`.
pub fn run_parallel(p: f64, n: u64, k: u32, trials: u64, seed: u64) -> Result<ParallelEstimate> {
    let time = estimate(
        &Race::new(p, n, k)?,
        trials,
        seed,
        &RestartOptions::default(),
    )?;
    let scale = k as f64;
    let agent_calls = Estimate {
        mean: time.mean * scale,
        stderr: time.stderr * scale,
        std_dev: time.std_dev * scale,
        std_dev_stderr: time.std_dev_stderr * scale,
        ..time
    };
    Ok(ParallelEstimate {
        time,
        agent_calls,
        agents: k,
    })
}

/// Punctuated search on a concrete instance, measuring `Q^n |s>` each round.
pub fn run_punctuated_statevector(
    instance: &SearchInstance,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    estimate(
        &MeasuredSearch::new(instance, n)?,
        trials,
        seed,
        &RestartOptions::default(),
    )
}

/// `count` Born-rule measurements of `state`, deterministic in `seed`.
pub fn sample_outcomes(state: &StateVector, count: u64, seed: u64) -> Result<Vec<usize>> {
    let sampler = BornSampler::new(state)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| sampler.sample(&mut rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::{random_state, TargetSet};

    #[test]
    fn certain_success_costs_n() {
        let e = run_punctuated(1.0, 7, 1000, 3).unwrap();
        assert_eq!(e.mean, 7.0);
        assert_eq!(e.stderr, 0.0);
        assert_eq!(e.trials, 1000);
    }

    #[test]
    fn zero_probability_refused() {
        assert_eq!(run_punctuated(0.0, 1, 10, 0), Err(Error::NeverSucceeds));
        assert!(run_parallel(0.0, 1, 3, 10, 0).is_err());
        assert!(run_punctuated(1.5, 1, 10, 0).is_err());
        assert!(run_punctuated(0.5, 0, 10, 0).is_err());
        assert!(run_punctuated(0.5, 1, 0, 0).is_err());
        assert!(run_parallel(0.5, 1, 0, 10, 0).is_err());
    }

    #[test]
    fn reproducible_bit_for_bit() {
        let a = run_parallel(0.3, 4, 3, 5000, 99).unwrap();
        let b = run_parallel(0.3, 4, 3, 5000, 99).unwrap();
        assert_eq!(a, b);
        let c = run_parallel(0.3, 4, 3, 5000, 100).unwrap();
        assert_ne!(a.time.mean, c.time.mean);
    }

    #[test]
    fn split_workers_match_sequential() {
        let exp = Race::new(0.2, 3, 2).unwrap();
        let opts = RestartOptions::default();
        let whole = trial_costs(&exp, 5, 0..1000, &opts).unwrap();
        let mut pieces = Vec::new();
        for chunk in [0..17, 17..400, 400..401, 401..1000] {
            pieces.extend(trial_costs(&exp, 5, chunk, &opts).unwrap());
        }
        assert_eq!(whole, pieces);
        // And a hand-driven sequential loop over the public streams.
        let manual: Vec<u64> = (0..1000)
            .map(|i| trial_cost(&exp, &mut trial_rng(5, i), &opts).unwrap())
            .collect();
        assert_eq!(whole, manual);
    }

    #[test]
    fn reset_surcharge() {
        let exp = CoinFlip::new(0.5, 3).unwrap();
        let free = trial_costs(&exp, 1, 0..200, &RestartOptions::default()).unwrap();
        let paid = trial_costs(&exp, 1, 0..200, &RestartOptions::with_reset_surcharge()).unwrap();
        for (f, p) in free.iter().zip(&paid) {
            let rounds = f / 3;
            assert_eq!(*p, rounds * 3 + rounds - 1);
        }
    }

    #[test]
    fn punctuated_mean_matches_closed_form() {
        let e = run_punctuated(0.5, 3, 1_000_000, 42).unwrap();
        assert!(e.covers(6.0, 3.0), "{e:?}");
    }

    #[test]
    fn parallel_means_match_closed_form() {
        let e = run_parallel(0.5, 1, 2, 1_000_000, 42).unwrap();
        assert!(e.time.covers(1.0 / 0.75, 3.0), "{e:?}");
        assert!((e.agent_calls.mean - 2.0 * e.time.mean).abs() < 1e-12);

        let e = run_parallel(0.1, 10, 8, 100_000, 7).unwrap();
        assert!(e.time.covers(10.0 / (1.0 - 0.9f64.powi(8)), 3.0), "{e:?}");
    }

    #[test]
    fn single_agent_race_matches_punctuated() {
        let a = run_parallel(0.3, 5, 1, 200_000, 1).unwrap().time;
        let b = run_punctuated(0.3, 5, 200_000, 2).unwrap();
        let joint = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        assert!((a.mean - b.mean).abs() < 3.0 * joint);
    }

    #[test]
    fn statevector_run_certain_case() {
        let inst = SearchInstance::uniform(4, TargetSet::new([2], 4).unwrap()).unwrap();
        let e = run_punctuated_statevector(&inst, 1, 500, 8).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.std_dev, 0.0);
    }

    #[test]
    fn statevector_never_succeeds() {
        // Start orthogonal to the targets with |a> = |s>: Q fixes the start.
        let n_items = 4;
        let s = StateVector::basis(n_items, 1).unwrap();
        let inst =
            SearchInstance::new(TargetSet::new([0], n_items).unwrap(), s.clone(), s).unwrap();
        assert_eq!(
            run_punctuated_statevector(&inst, 3, 10, 0),
            Err(Error::NeverSucceeds)
        );
    }

    #[test]
    fn born_sampling_chi_square() {
        let state = random_state(8, 21).unwrap();
        let probs = state.probabilities();
        let count = 200_000u64;
        let draws = sample_outcomes(&state, count, 4).unwrap();
        let mut observed = [0f64; 8];
        for d in draws {
            observed[d] += 1.0;
        }
        let chi2: f64 = observed
            .iter()
            .zip(&probs)
            .map(|(o, p)| {
                let e = p * count as f64;
                (o - e).powi(2) / e
            })
            .sum();
        // 7 degrees of freedom: P(chi2 > 24.32) = 0.001.
        assert!(chi2 < 24.32, "chi2 = {chi2}");
    }

    #[test]
    fn estimate_moments() {
        let e = Estimate::from_costs(&[1, 2, 3, 4], 0);
        assert_eq!(e.mean, 2.5);
        assert!((e.std_dev - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((e.stderr - e.std_dev / 2.0).abs() < 1e-15);
        let one = Estimate::from_costs(&[9], 0);
        assert_eq!((one.mean, one.stderr), (9.0, 0.0));
    }
}
