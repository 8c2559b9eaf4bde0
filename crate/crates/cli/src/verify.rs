use std::fmt::Write as _;

use anyhow::Result;

use gensearch_core::analytic::first_maximum;
use gensearch_core::strategy::{
    expected_cost, optimal_x_single, parallel_expected_cost, punctuated_plan, CostModel,
};
use gensearch_core::{
    biham_mapping, decompose, grover_case_prob, random_state, rotation_angle,
    success_prob_analytic, uniform_state, SearchInstance, TargetSet,
};

struct Check {
    name: &'static str,
    measured: f64,
    expected: f64,
    tolerance: f64,
}

impl Check {
    fn pass(&self) -> bool {
        (self.measured - self.expected).abs() <= self.tolerance
    }

    fn line(&self) -> String {
        let (measured, expected) = if self.expected == 0.0 {
            (format!("{:.3e}", self.measured), "0".to_owned())
        } else {
            let digits = (-self.tolerance.log10()).ceil().max(4.0) as usize;
            (
                format!("{:.digits$}", self.measured),
                format!("{:.digits$}", self.expected),
            )
        };
        format!(
            "{} = {measured} (expected {expected} ± {:e}): {}",
            self.name,
            self.tolerance,
            if self.pass() { "PASS" } else { "FAIL" }
        )
    }
}

fn grover_case_error(n_items: usize) -> Result<f64> {
    let inst = SearchInstance::uniform(n_items, TargetSet::first(1, n_items)?)?;
    let v = (1.0 / n_items as f64).sqrt();
    let dec = decompose(&inst)?;
    let mut worst = 0.0f64;
    for (n, p) in inst.success_curve(20)?.into_iter().enumerate() {
        worst = worst
            .max((grover_case_prob(v, n as u64)? - p).abs())
            .max((success_prob_analytic(&dec, n as f64)? - p).abs());
    }
    Ok(worst)
}

fn biham_errors() -> Result<(f64, f64)> {
    let n_items = 64;
    let r = 4;
    let targets = TargetSet::first(r, n_items)?;
    let (mut norm, mut amps) = (0.0f64, 0.0f64);
    for seed in 0..20 {
        let start = random_state(n_items, seed)?;
        let m = biham_mapping(&start, &targets)?;
        let inst = SearchInstance::new(targets.clone(), uniform_state(n_items)?, start)?;
        let dec = decompose(&inst)?;
        norm = norm.max((m.normalization(r, n_items) - 1.0).abs());
        amps = amps
            .max((dec.alpha - m.k_bar.norm() * (r as f64).sqrt()).abs())
            .max((dec.beta - m.l_bar.norm() * ((n_items - r) as f64).sqrt()).abs());
    }
    Ok((norm, amps))
}

fn single_agent_error() -> Result<f64> {
    let mut worst = 0.0f64;
    for (r, n_items) in [(1u64, 1024u64), (4, 1 << 16), (1, 1 << 20)] {
        let v = (r as f64 / n_items as f64).sqrt();
        for n in [1u64, 3, 10, 40, 100, 400] {
            let single = expected_cost(n as f64, grover_case_prob(v, n)?)?;
            let k1 = parallel_expected_cost(n as f64, r, n_items, 1, CostModel::Exact)?;
            worst = worst.max((k1 - single).abs());
        }
    }
    Ok(worst)
}

/// One line per check; returns the report and whether every check passed.
pub fn verify() -> Result<(String, bool)> {
    let phi = 0.01;
    let plan = punctuated_plan(phi)?;
    let n_items = (1u64 << 20) as f64;
    let big = punctuated_plan(rotation_angle(n_items.sqrt().recip())?)?;
    let quarter = SearchInstance::uniform(16, TargetSet::first(1, 16)?)?;
    let dec = decompose(&quarter)?;
    let (biham_norm, biham_amps) = biham_errors()?;

    let checks = [
        Check {
            name: "optimal_x_single",
            measured: optimal_x_single(),
            expected: 2.3311,
            tolerance: 1e-4,
        },
        Check {
            name: "n_opt * phi",
            measured: plan.n_opt * phi,
            expected: 1.1655,
            tolerance: 1e-3,
        },
        Check {
            name: "expected cost * phi",
            measured: plan.model_cost * phi,
            expected: 1.3801,
            tolerance: 1e-3,
        },
        Check {
            name: "expected cost / sqrt(N) at N = 2^20",
            measured: big.expected_cost / n_items.sqrt(),
            expected: 0.6900,
            tolerance: 0.0035,
        },
        Check {
            name: "grover case v = 1/4, max |analytic - simulated|",
            measured: grover_case_error(16)?,
            expected: 0.0,
            tolerance: 1e-10,
        },
        Check {
            name: "grover case v = 1/4, first maximum",
            measured: first_maximum(&dec)?.n,
            expected: std::f64::consts::PI / (2.0 * dec.phi) - 0.5,
            tolerance: 1e-9,
        },
        Check {
            name: "mean/spread normalization on 20 random states, max error",
            measured: biham_norm,
            expected: 0.0,
            tolerance: 1e-10,
        },
        Check {
            name: "mean/spread plane amplitudes on 20 random states, max error",
            measured: biham_amps,
            expected: 0.0,
            tolerance: 1e-10,
        },
        Check {
            name: "one-searcher parallel cost vs punctuated cost, max difference",
            measured: single_agent_error()?,
            expected: 0.0,
            tolerance: 1e-12,
        },
    ];

    let mut report = String::new();
    for c in &checks {
        writeln!(report, "{}", c.line())?;
    }
    let passed = checks.iter().filter(|c| c.pass()).count();
    writeln!(report, "{passed}/{} checks passed", checks.len())?;
    Ok((report, passed == checks.len()))
}
