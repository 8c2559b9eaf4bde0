//! Property tests for the simulator and its agreement with the closed forms.

use gensearch_core::strategy::{
    expected_cost, parallel_expected_cost, parallel_success, CostModel,
};
use gensearch_core::{
    decompose, grover_case_prob, oracle_reflect, random_state, reflect_about,
    success_prob_analytic, uniform_state, Complex64, SearchInstance, StateVector, TargetSet,
};
use proptest::prelude::*;

/// Random instance: N in [4, 64], 1 <= r <= N/2 targets at distinct indices.
fn instance_strategy() -> impl Strategy<Value = SearchInstance> {
    (4usize..=64, any::<u64>(), any::<bool>()).prop_flat_map(|(n_items, seed, uniform_a)| {
        let r_max = n_items / 2;
        (
            Just(n_items),
            proptest::sample::subsequence((0..n_items).collect::<Vec<_>>(), 1..=r_max),
            Just(seed),
            Just(uniform_a),
        )
            .prop_map(|(n_items, targets, seed, uniform_a)| {
                let averaging = if uniform_a {
                    uniform_state(n_items).unwrap()
                } else {
                    random_state(n_items, seed ^ 0x5eed).unwrap()
                };
                SearchInstance::new(
                    TargetSet::new(targets, n_items).unwrap(),
                    averaging,
                    random_state(n_items, seed).unwrap(),
                )
                .unwrap()
            })
    })
}

/// `|t>` and `|a'>` built directly from their definitions.
fn plane_basis(inst: &SearchInstance) -> (StateVector, StateVector) {
    let n_items = inst.n_items();
    let a = inst.averaging().amplitudes();
    let zero = Complex64::new(0.0, 0.0);
    let mut t = vec![zero; n_items];
    let mut rest = vec![zero; n_items];
    for i in 0..n_items {
        if inst.targets().contains(i) {
            t[i] = a[i];
        } else {
            rest[i] = a[i];
        }
    }
    (
        StateVector::normalized(t).unwrap(),
        StateVector::normalized(rest).unwrap(),
    )
}

/// Components of `psi` in the target and non-target subspaces with the
/// plane directions projected out.
fn residuals(
    psi: &StateVector,
    inst: &SearchInstance,
    t: &StateVector,
    a_prime: &StateVector,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let ct = t.inner(psi).unwrap();
    let ca = a_prime.inner(psi).unwrap();
    let amps = psi.amplitudes();
    let mut in_t = Vec::new();
    let mut in_l = Vec::new();
    for (i, amp) in amps.iter().enumerate() {
        if inst.targets().contains(i) {
            in_t.push(amp - ct * t.amplitudes()[i]);
        } else {
            in_l.push(amp - ca * a_prime.amplitudes()[i]);
        }
    }
    (in_t, in_l)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unitarity(inst in instance_strategy(), n in 0u64..=1000) {
        let psi = gensearch_core::grover_power(&inst, n).unwrap();
        prop_assert!((psi.norm_sqr().sqrt() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rotation_plane_weight_is_conserved(inst in instance_strategy()) {
        let (t, a_prime) = plane_basis(&inst);
        let weight = |psi: &StateVector| {
            t.inner(psi).unwrap().norm_sqr() + a_prime.inner(psi).unwrap().norm_sqr()
        };
        let mut psi = inst.start().clone();
        let w0 = weight(&psi);
        let dec = decompose(&inst).unwrap();
        prop_assert!((w0 - (dec.alpha.powi(2) + dec.beta.powi(2))).abs() < 1e-10);
        for _ in 0..40 {
            inst.step(&mut psi).unwrap();
            prop_assert!((weight(&psi) - w0).abs() < 1e-10);
        }
    }

    #[test]
    fn residuals_are_fixed_and_flipped(inst in instance_strategy()) {
        let (t, a_prime) = plane_basis(&inst);
        let (rt0, rl0) = residuals(inst.start(), &inst, &t, &a_prime);
        let mut psi = inst.start().clone();
        for n in 1..=25 {
            inst.step(&mut psi).unwrap();
            let (rt, rl) = residuals(&psi, &inst, &t, &a_prime);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for (x, y) in rt.iter().zip(&rt0) {
                prop_assert!((x - y).norm() < 1e-10);
            }
            for (x, y) in rl.iter().zip(&rl0) {
                prop_assert!((x - sign * y).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn reflections_are_involutions(dim in 1usize..40, s1 in any::<u64>(), s2 in any::<u64>()) {
        let psi = random_state(dim, s1).unwrap();
        let axis = random_state(dim, s2).unwrap();
        let back = reflect_about(&reflect_about(&psi, &axis).unwrap(), &axis).unwrap();
        let targets = TargetSet::new([dim / 2], dim).unwrap();
        let back2 = oracle_reflect(&oracle_reflect(&psi, &targets).unwrap(), &targets).unwrap();
        for ((x, y), z) in back.amplitudes().iter().zip(psi.amplitudes()).zip(back2.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
            prop_assert!((z - y).norm() < 1e-12);
        }
    }

    #[test]
    fn analytic_matches_simulation(inst in instance_strategy()) {
        let dec = decompose(&inst).unwrap();
        let total = dec.alpha.powi(2) + dec.beta.powi(2) + dec.w_t + dec.w_l;
        prop_assert!((total - 1.0).abs() < 1e-10);
        for (n, p) in inst.success_curve(50).unwrap().into_iter().enumerate() {
            let analytic = success_prob_analytic(&dec, n as f64).unwrap();
            prop_assert!((analytic - p).abs() < 1e-10, "n = {}", n);
        }
    }

    #[test]
    fn grover_case_consistency(n_items in 3usize..200, r_frac in 0.0f64..1.0, n in 0u64..60) {
        let r = 1 + ((n_items - 2) as f64 * r_frac) as usize;
        let inst = SearchInstance::uniform(n_items, TargetSet::first(r, n_items).unwrap()).unwrap();
        let dec = decompose(&inst).unwrap();
        let v = (r as f64 / n_items as f64).sqrt();
        let closed = grover_case_prob(v, n).unwrap();
        prop_assert!((success_prob_analytic(&dec, n as f64).unwrap() - closed).abs() < 1e-12);
    }

    #[test]
    fn target_placement_is_irrelevant_for_uniform_states(
        n_items in 4usize..64,
        picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..4),
        n in 0u64..20,
    ) {
        let mut targets: Vec<usize> = picks.iter().map(|i| i.index(n_items)).collect();
        targets.sort_unstable();
        targets.dedup();
        let r = targets.len();
        let scattered = SearchInstance::uniform(n_items, TargetSet::new(targets, n_items).unwrap()).unwrap();
        let packed = SearchInstance::uniform(n_items, TargetSet::first(r, n_items).unwrap()).unwrap();
        let p1 = scattered.success_curve(n).unwrap()[n as usize];
        let p2 = packed.success_curve(n).unwrap()[n as usize];
        prop_assert!((p1 - p2).abs() < 1e-12);
    }

    #[test]
    fn parallel_success_is_monotone(p in 0.0f64..=1.0, dp in 0.0f64..0.5, k in 1u32..64) {
        let q = (p + dp).min(1.0);
        prop_assert!(parallel_success(q, k) >= parallel_success(p, k) - 1e-15);
        prop_assert!(parallel_success(p, k + 1) >= parallel_success(p, k) - 1e-15);
    }

    #[test]
    fn single_agent_parallel_cost_is_punctuated_cost(
        n in 1u64..2000,
        log_n_items in 3u32..24,
        r_frac in 0.0f64..0.5,
    ) {
        let n_items = 1u64 << log_n_items;
        let r = 1 + (r_frac * n_items as f64) as u64;
        let v = (r as f64 / n_items as f64).sqrt();
        let p = grover_case_prob(v, n).unwrap();
        prop_assume!(p > 0.0);
        let single = expected_cost(n as f64, p).unwrap();
        let k1 = parallel_expected_cost(n as f64, r, n_items, 1, CostModel::Exact).unwrap();
        prop_assert_eq!(k1, single);
    }
}
