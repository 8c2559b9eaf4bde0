use std::fmt::Write as _;

use anyhow::{bail, ensure, Context, Result};
use clap::ValueEnum;
use serde::Serialize;

use gensearch_core::figures::{default_heatmap_iterations, heatmap, parallel_sweep, SweepRow};
use gensearch_core::montecarlo::{run_parallel, run_punctuated_statevector};
use gensearch_core::strategy::{
    cost_stddev, expected_cost, parallel_plan, parallel_success, punctuated_plan, CostSpread,
};
use gensearch_core::{
    decompose, grover_power, random_state, rotation_angle, statefile, success_probability,
    uniform_state, Decomposition, Error, Estimate, ParallelEstimate, ParallelPlan, PunctuatedPlan,
    SearchInstance, StateVector, TargetSet,
};

use crate::args::{
    Format, HeatmapArgs, InstanceArgs, MonteCarloArgs, OutputArgs, PlanArgs, SimulateArgs,
    StateSpec, SweepArgs, TargetArgs,
};

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn check_format(output: &OutputArgs, allowed: &[Format]) -> Result<()> {
    if !allowed.contains(&output.format) {
        let name = output
            .format
            .to_possible_value()
            .map(|v| v.get_name().to_owned());
        bail!(
            "--format {} is not available for this command",
            name.unwrap_or_default()
        );
    }
    Ok(())
}

/// Shortest round-trip form, switching to exponent notation for tiny values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn resolve_targets(args: &TargetArgs, n_items: usize) -> Result<TargetSet> {
    let targets = match (&args.targets, args.num_targets) {
        (Some(list), None) => TargetSet::new(list.iter().copied(), n_items)?,
        (None, Some(r)) => TargetSet::first(r, n_items)?,
        _ => bail!("give exactly one of --targets or --num-targets"),
    };
    Ok(targets)
}

fn target_count(args: &TargetArgs, n_items: u64) -> Result<u64> {
    match (&args.targets, args.num_targets) {
        (Some(list), None) => {
            let n = usize::try_from(n_items).context("--n-items too large")?;
            Ok(TargetSet::new(list.iter().copied(), n)?.len() as u64)
        }
        (None, Some(r)) => {
            ensure!(
                (1..=n_items).contains(&(r as u64)),
                "--num-targets must be in 1..=N"
            );
            Ok(r as u64)
        }
        _ => bail!("give exactly one of --targets or --num-targets"),
    }
}

fn load_state(spec: &StateSpec, n_items: usize) -> Result<StateVector> {
    let state = match spec {
        StateSpec::Uniform => uniform_state(n_items)?,
        StateSpec::Random(seed) => random_state(n_items, *seed)?,
        StateSpec::File(path) => statefile::read(path)?,
    };
    Ok(state)
}

fn build_instance(args: &InstanceArgs) -> Result<SearchInstance> {
    let n_items = args.n_items.context("--n-items is required")?;
    let targets = resolve_targets(&args.targets, n_items)?;
    let averaging = load_state(&args.averaging, n_items).context("--averaging")?;
    let start = load_state(&args.start, n_items).context("--start")?;
    Ok(SearchInstance::new(targets, averaging, start)?)
}

#[derive(Debug, Clone, Copy, Serialize)]
struct DecompositionFields {
    v: f64,
    phi: f64,
    alpha: f64,
    beta: f64,
    b: f64,
    psi: f64,
    w_t: f64,
    w_l: f64,
}

impl From<&Decomposition> for DecompositionFields {
    fn from(d: &Decomposition) -> Self {
        Self {
            v: d.v,
            phi: d.phi,
            alpha: d.alpha,
            beta: d.beta,
            b: d.b,
            psi: d.psi(),
            w_t: d.w_t,
            w_l: d.w_l,
        }
    }
}

#[derive(Debug, Serialize)]
struct SimulationRow {
    n: u64,
    p_simulated: f64,
    p_analytic: f64,
}

#[derive(Debug, Serialize)]
struct SimulationReport {
    n_items: usize,
    targets: Vec<usize>,
    v: f64,
    decomposition: Option<DecompositionFields>,
    rows: Vec<SimulationRow>,
}

pub fn simulate(args: &SimulateArgs) -> Result<Vec<u8>> {
    check_format(&args.output, &[Format::Json, Format::Csv])?;
    let inst = build_instance(&args.instance)?;
    let range = args.iterations;
    let curve = inst.success_curve(range.end)?;
    // Without a rotation the target weight never changes.
    let (decomposition, constant) = match decompose(&inst) {
        Ok(d) => (Some(d), None),
        Err(Error::DegenerateAPrime { .. } | Error::NoOverlap) => (
            None,
            Some(success_probability(inst.start(), inst.targets())?),
        ),
        Err(e) => return Err(e.into()),
    };
    let mut rows = Vec::new();
    for n in range.iter() {
        let p_analytic = match &decomposition {
            Some(d) => gensearch_core::success_prob_analytic(d, n as f64)?,
            None => constant.unwrap_or_default(),
        };
        rows.push(SimulationRow {
            n,
            p_simulated: curve[n as usize],
            p_analytic,
        });
    }
    let fields = decomposition.as_ref().map(DecompositionFields::from);
    match args.output.format {
        Format::Csv => {
            let mut out = String::from("n,p_simulated,p_analytic,v,phi,alpha,beta,b,psi,w_t,w_l\n");
            let tail = match fields {
                Some(f) => format!(
                    "{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
                    f.v, f.phi, f.alpha, f.beta, f.b, f.psi, f.w_t, f.w_l
                ),
                None => format!("{:?},,,,,,,", inst.overlap_sqr().sqrt()),
            };
            for row in &rows {
                writeln!(
                    out,
                    "{},{:?},{:?},{tail}",
                    row.n, row.p_simulated, row.p_analytic
                )?;
            }
            Ok(out.into_bytes())
        }
        _ => json(&SimulationReport {
            n_items: inst.n_items(),
            targets: inst.targets().indices().to_vec(),
            v: inst.overlap_sqr().sqrt(),
            decomposition: fields,
            rows,
        }),
    }
}

#[derive(Debug, Serialize)]
struct PlanReport {
    n_items: u64,
    r: u64,
    punctuated: PunctuatedPlan,
    parallel: ParallelPlan,
}

pub fn plan(args: &PlanArgs) -> Result<Vec<u8>> {
    check_format(&args.output, &[Format::Json, Format::Csv])?;
    ensure!(args.n_items >= 2, "--n-items must be at least 2");
    ensure!(args.agents >= 1, "--agents must be at least 1");
    let r = target_count(&args.targets, args.n_items)?;
    ensure!(r < args.n_items, "planning needs r < N");
    let phi = rotation_angle((r as f64 / args.n_items as f64).sqrt())?;
    let punctuated = punctuated_plan(phi)?;
    let parallel = parallel_plan(r, args.n_items, args.agents, args.method.into())?;
    match args.output.format {
        Format::Csv => {
            let p = &punctuated;
            let q = &parallel;
            let method = match q.method {
                gensearch_core::PlanMethod::ClosedForm => "closed_form",
                gensearch_core::PlanMethod::Numeric => "numeric",
            };
            Ok(format!(
                "{PLAN_HEADER}\n{},{r},{},{method},{:?},{:?},{},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{},{:?},{:?}\n",
                args.n_items,
                q.agents,
                p.phi,
                p.n_opt,
                p.n_int,
                p.probability,
                p.expected_cost,
                p.model_cost,
                p.stddev_geometric,
                p.stddev_quadratic,
                q.x,
                q.n_opt,
                q.n_int,
                q.expected_cost,
                q.exact_cost,
            )
            .into_bytes())
        }
        _ => json(&PlanReport {
            n_items: args.n_items,
            r,
            punctuated,
            parallel,
        }),
    }
}

const PLAN_HEADER: &str = "n_items,r,agents,method,phi,n_opt,n_int,probability,expected_cost,\
model_cost,stddev_geometric,stddev_quadratic,parallel_x,parallel_n_opt,parallel_n_int,\
parallel_expected_cost,parallel_exact_cost";

#[derive(Debug, Serialize)]
struct HeatmapReport<'a> {
    n_items: usize,
    first_iteration: u64,
    /// `rows[i][r - 1]` is the probability after `first_iteration + i` iterations.
    rows: &'a [Vec<f64>],
}

pub fn heatmap_cmd(args: &HeatmapArgs) -> Result<Vec<u8>> {
    ensure!(args.n_items >= 1, "--n-items must be at least 1");
    let (first, last) = match args.iterations {
        Some(r) if r.start == r.end => (0, r.end),
        Some(r) => (r.start, r.end),
        None => (0, default_heatmap_iterations(args.n_items)),
    };
    let map = heatmap(args.n_items, last)?;
    let rows = &map.rows[first as usize..];
    match args.output.format {
        Format::Json => json(&HeatmapReport {
            n_items: args.n_items,
            first_iteration: first,
            rows,
        }),
        Format::Csv => {
            let mut out = String::from("n");
            for r in 1..=args.n_items {
                write!(out, ",{r}")?;
            }
            out.push('\n');
            for (i, row) in rows.iter().enumerate() {
                write!(out, "{}", first + i as u64)?;
                for p in row {
                    write!(out, ",{p:?}")?;
                }
                out.push('\n');
            }
            Ok(out.into_bytes())
        }
        Format::Pgm => {
            let mut out = format!("P5\n{} {}\n255\n", args.n_items, rows.len()).into_bytes();
            out.extend(
                rows.iter()
                    .flatten()
                    .map(|p| (p.clamp(0.0, 1.0) * 255.0).round() as u8),
            );
            Ok(out)
        }
    }
}

pub fn parallel_sweep_cmd(args: &SweepArgs) -> Result<Vec<u8>> {
    check_format(&args.output, &[Format::Json, Format::Csv])?;
    ensure!(args.n_items >= 2, "--n-items must be at least 2");
    ensure!(
        args.num_targets.start >= 1 && args.num_targets.end < args.n_items,
        "--num-targets must lie in 1..N-1"
    );
    ensure!(args.agents.start >= 1, "--agents must be at least 1");
    let rs: Vec<u64> = args.num_targets.iter().collect();
    let ks = args
        .agents
        .iter()
        .map(u32::try_from)
        .collect::<Result<Vec<u32>, _>>()
        .context("--agents too large")?;
    let rows = parallel_sweep(args.n_items, &rs, &ks)?;
    match args.output.format {
        Format::Csv => {
            let mut out = String::from(
                "r,k,n_numeric,n_formula,cost_numeric,cost_formula,cost_exact_at_formula_n\n",
            );
            for SweepRow {
                r,
                k,
                n_numeric,
                n_formula,
                cost_numeric,
                cost_formula,
                cost_exact_at_formula_n,
            } in &rows
            {
                writeln!(
                    out,
                    "{r},{k},{n_numeric},{},{cost_numeric:?},{},{}",
                    opt(*n_formula),
                    opt(*cost_formula),
                    opt(*cost_exact_at_formula_n)
                )?;
            }
            Ok(out.into_bytes())
        }
        _ => json(&rows),
    }
}

#[derive(Debug, Serialize)]
struct MonteCarloReport {
    p: f64,
    n: u64,
    agents: u32,
    trials: u64,
    seed: u64,
    /// Closed-form expected parallel time `n / p_k`.
    closed_form_time: f64,
    /// Closed-form spread of the parallel time.
    closed_form_std_dev: CostSpread,
    estimate: ParallelEstimate,
    /// Single searcher measuring the simulated state each round.
    statevector: Option<Estimate>,
}

pub fn montecarlo(args: &MonteCarloArgs) -> Result<Vec<u8>> {
    check_format(&args.output, &[Format::Json, Format::Csv])?;
    ensure!(args.iterations >= 1, "--iterations must be at least 1");
    ensure!(args.agents >= 1, "--agents must be at least 1");
    ensure!(args.trials >= 1, "--trials must be at least 1");
    let n = args.iterations;
    let (p, instance) = match args.probability {
        Some(p) => {
            ensure!((0.0..=1.0).contains(&p), "--probability must lie in [0, 1]");
            (p, None)
        }
        None => {
            let inst = build_instance(&args.instance)?;
            let p = success_probability(&grover_power(&inst, n)?, inst.targets())?;
            (p, Some(inst))
        }
    };
    let p_k = parallel_success(p, args.agents);
    let closed_form_time = expected_cost(n as f64, p_k)?;
    let closed_form_std_dev = cost_stddev(n as f64, p_k)?;
    let estimate = run_parallel(p, n, args.agents, args.trials, args.seed)?;
    let statevector = match &instance {
        Some(inst) if args.agents == 1 => {
            Some(run_punctuated_statevector(inst, n, args.trials, args.seed)?)
        }
        _ => None,
    };
    let report = MonteCarloReport {
        p,
        n,
        agents: args.agents,
        trials: args.trials,
        seed: args.seed,
        closed_form_time,
        closed_form_std_dev,
        estimate,
        statevector,
    };
    match args.output.format {
        Format::Csv => {
            let t = &report.estimate.time;
            Ok(format!(
                "p,n,agents,trials,seed,closed_form_time,closed_form_std_dev,mean,stderr,std_dev,\
                 std_dev_stderr,agent_calls_mean,statevector_mean,statevector_stderr\n\
                 {:?},{},{},{},{},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{},{}\n",
                report.p,
                report.n,
                report.agents,
                report.trials,
                report.seed,
                report.closed_form_time,
                report.closed_form_std_dev.geometric,
                t.mean,
                t.stderr,
                t.std_dev,
                t.std_dev_stderr,
                report.estimate.agent_calls.mean,
                opt(report.statevector.map(|e| e.mean)),
                opt(report.statevector.map(|e| e.stderr)),
            )
            .into_bytes())
        }
        _ => json(&report),
    }
}
