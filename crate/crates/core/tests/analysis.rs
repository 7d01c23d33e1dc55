use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use randomd::analysis::{
    chi_square_gof, evaluate_bound, highprob_check, pseudo_regret, realized_regret, BoundKind,
    BoundSpec, ReadCounter, RegretReport, RunTrace, Scope, StepRecord, TraceMeta,
};
use randomd::md::{sample_categorical, Block, ProductSimplexSpec};
use randomd::simplex::SimplexPoint;

fn spec(kind: BoundKind, m: f64, n: usize, steps: u64, omega: f64) -> BoundSpec {
    let s = BoundSpec::new(kind, m, n, steps).with_omega(omega);
    if kind == BoundKind::R9Product {
        let blocks = (0..n).map(|_| Block { size: 3, mass: 1.0 }).collect();
        s.with_blocks(ProductSimplexSpec::new(blocks).unwrap())
    } else {
        s
    }
}

fn kind_strategy() -> impl Strategy<Value = BoundKind> {
    prop::sample::select(BoundKind::ALL.to_vec())
}

proptest! {
    #[test]
    fn bounds_are_monotone(
        kind in kind_strategy(),
        m in 0.1f64..10.0,
        n in 2usize..1000,
        steps in 1u64..1_000_000,
        omega in 0.0f64..10.0,
        bump in 1.01f64..3.0,
    ) {
        let base = evaluate_bound(&spec(kind, m, n, steps, omega)).unwrap();
        let more_steps = evaluate_bound(&spec(kind, m, n, steps * 2, omega)).unwrap();
        let more_m = evaluate_bound(&spec(kind, m * bump, n, steps, omega)).unwrap();
        let more_omega = evaluate_bound(&spec(kind, m, n, steps, omega + 0.5)).unwrap();
        let more_n = evaluate_bound(&spec(kind, m, n + 1, steps, omega)).unwrap();
        prop_assert!(more_steps < base);
        prop_assert!(more_m > base);
        if kind == BoundKind::T1Mean || kind == BoundKind::T2Mean {
            prop_assert_eq!(more_omega, base);
        } else {
            prop_assert!(more_omega > base);
        }
        prop_assert!(more_n > base);
    }

    #[test]
    fn pseudo_regret_is_bounded_below(
        seed in any::<u64>(),
        n in 2usize..8,
        steps in 1u64..200,
        m in 0.1f64..3.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut trace = RunTrace::new(TraceMeta { algorithm: "t".into(), seed, n, steps, grad_bound: m });
        let mut sums = vec![0.0; n];
        for k in 1..=steps {
            let l: Vec<f64> = (0..n).map(|_| rng.random_range(-m..=m)).collect();
            let i = rng.random_range(0..n);
            sums.iter_mut().zip(&l).for_each(|(s, v)| *s += v);
            trace.push(StepRecord::new(k, l[i], l.iter().sum::<f64>() / n as f64)).unwrap();
        }
        let p = pseudo_regret(&trace, &sums).unwrap();
        let r = realized_regret(&trace, &sums).unwrap();
        prop_assert!(p >= -2.0 * m && r >= -2.0 * m);
        let report = RegretReport::new(trace.total_expected_loss(), &sums, &BoundSpec::new(BoundKind::T1Mean, m, n, steps)).unwrap();
        prop_assert!(report.is_consistent());
        prop_assert!((report.pseudo_regret - p).abs() < 1e-12);
    }

    #[test]
    fn highprob_check_extremes(regrets in prop::collection::vec(-1.0f64..1.0, 10..60), bound in -1.0f64..1.0) {
        prop_assert!(highprob_check(&regrets, bound, 1.0).unwrap().pass);
        let strict = highprob_check(&regrets, bound, 0.0).unwrap();
        prop_assert_eq!(strict.pass, regrets.iter().all(|r| *r <= bound));
    }

    #[test]
    fn counters_are_additive(deltas in prop::collection::vec((any::<bool>(), 0u64..1000), 0..100)) {
        let mut total = ReadCounter::new();
        let mut parts = ReadCounter::new();
        let (mut solver, mut verify) = (0, 0);
        for (i, (is_solver, d)) in deltas.iter().enumerate() {
            let scope = if *is_solver { Scope::Solver } else { Scope::Verify };
            if *is_solver { solver += d } else { verify += d }
            if i % 2 == 0 {
                total.record(scope, *d);
            } else {
                parts.record(scope, *d);
            }
        }
        total.merge(&parts);
        prop_assert_eq!(total.get(Scope::Solver), solver);
        prop_assert_eq!(total.get(Scope::Verify), verify);
    }
}

#[test]
fn bound_reference_values() {
    let v = evaluate_bound(&BoundSpec::new(BoundKind::T1Mean, 1.0, 2, 10_000)).unwrap();
    assert!((v - 0.016651).abs() < 1e-6);
    let v = evaluate_bound(&BoundSpec::new(BoundKind::T2Mean, 1.0, 10, 10_000)).unwrap();
    assert!((v - 0.0303485).abs() < 1e-6);
    assert!(evaluate_bound(&BoundSpec::new(BoundKind::T1Mean, 1.0, 2, 0)).is_err());
    assert!(evaluate_bound(&BoundSpec::new(BoundKind::R9Product, 1.0, 2, 10)).is_err());
}

/// Under the null, the test rejects at level α about an α fraction of the
/// time.
#[test]
fn chi_square_null_rejection_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let p = SimplexPoint::probability(vec![0.5, 0.2, 0.15, 0.1, 0.04, 0.01]).unwrap();
    let sims = 1000;
    let mut rejected = 0;
    for _ in 0..sims {
        let mut counts = vec![0u64; 6];
        for _ in 0..2000 {
            counts[sample_categorical(p.weights(), &mut rng)] += 1;
        }
        if chi_square_gof(&counts, &p).unwrap().p_value < 0.05 {
            rejected += 1;
        }
    }
    let rate = rejected as f64 / sims as f64;
    // Binomial(1000, 0.05) has sd ≈ 0.0069.
    assert!((rate - 0.05).abs() < 0.025, "{rate}");
}

#[test]
fn chi_square_detects_a_wrong_law() {
    let p = SimplexPoint::probability(vec![0.5, 0.5]).unwrap();
    let r = chi_square_gof(&[600, 400], &p).unwrap();
    assert!(r.p_value < 1e-9);
    assert_eq!(r.dof, 1);
    assert!(chi_square_gof(&[5, 5], &p).is_err());
}

#[test]
fn traces_elide_distributions_over_budget() {
    let meta = TraceMeta {
        algorithm: "t".into(),
        seed: 0,
        n: 4,
        steps: 3,
        grad_bound: 1.0,
    };
    let mut small = RunTrace::with_budget(meta.clone(), 12);
    let mut big = RunTrace::with_budget(meta, 11);
    for k in 1..=3 {
        let mut r = StepRecord::new(k, 0.0, 0.0);
        r.distribution = Some(vec![0.25; 4]);
        small.push(r.clone()).unwrap();
        big.push(r).unwrap();
    }
    assert!(small.records().iter().all(|r| r.distribution.is_some()));
    assert!(big.records().iter().all(|r| r.distribution.is_none()));
    assert!(big.push(StepRecord::new(7, 0.0, 0.0)).is_err());

    let mut buf = Vec::new();
    big.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "k,loss,action,gap_if_game,reads_solver,reads_verify,expected_loss,grad_inf_norm,dual_checksum"
    );
    assert_eq!(text.lines().count(), 4);
}
