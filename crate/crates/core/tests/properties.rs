use condscreen_core::metrics::{aggregate, min_model_size, DEFAULT_QUANTILE_LEVELS};
use condscreen_core::{
    ccsis_utility_all, csirs_all, dcsis_utility_all, rank_and_select, sirs_utility_all, DataSet,
    KernelSpec, Method, UtilityVector, DEFAULT_EPS,
};
use ndarray::{Array1, Array2};
use proptest::prelude::*;

fn dataset(n: usize, p: usize) -> impl Strategy<Value = DataSet> {
    (
        prop::collection::vec(-3.0..3.0f64, n * p),
        prop::collection::vec(-3.0..3.0f64, n),
        prop::collection::vec(0.0..1.0f64, n),
    )
        .prop_map(move |(x, y, u)| {
            DataSet::new(
                Array2::from_shape_vec((n, p), x).unwrap(),
                Array1::from(y),
                Array1::from(u),
            )
            .unwrap()
        })
}

/// Datasets with constant columns, coarsely rounded predictors and heavily
/// tied responses.
fn degenerate_dataset() -> impl Strategy<Value = DataSet> {
    (4usize..=25, 1usize..=5).prop_flat_map(|(n, p)| {
        (
            prop::collection::vec((-2i32..=2, any::<bool>()), n * p),
            prop::collection::vec(0u8..3, n),
            prop::collection::vec(0.0..1.0f64, n),
            prop::collection::vec(any::<bool>(), p),
        )
            .prop_map(move |(x, y, u, constant)| {
                let x = Array2::from_shape_fn((n, p), |(i, k)| {
                    if constant[k] {
                        1.5
                    } else {
                        let (v, fine) = x[i * p + k];
                        f64::from(v) + if fine { 1e-9 } else { 0.0 }
                    }
                });
                let y = Array1::from_iter(y.into_iter().map(f64::from));
                DataSet::new(x, y, Array1::from(u)).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn monotone_response_transform_is_exact(
        data in (5usize..=30, 1usize..=5).prop_flat_map(|(n, p)| dataset(n, p)),
        h in 0.1..1.5f64,
    ) {
        let spec = KernelSpec::fixed(h).unwrap();
        let moved = data.with_response(data.y().mapv(|v| (2.0 * v).exp() + v.powi(3))).unwrap();
        prop_assert_eq!(
            csirs_all(&data, &spec, DEFAULT_EPS).unwrap(),
            csirs_all(&moved, &spec, DEFAULT_EPS).unwrap()
        );
        prop_assert_eq!(sirs_utility_all(&data), sirs_utility_all(&moved));
    }

    #[test]
    fn affine_predictor_transform(
        data in (5usize..=30, 1usize..=5).prop_flat_map(|(n, p)| dataset(n, p)),
        h in 0.1..1.5f64,
        a in prop_oneof![-10.0..-0.1f64, 0.1..10.0f64],
        b in -20.0..20.0f64,
    ) {
        let spec = KernelSpec::fixed(h).unwrap();
        let base = csirs_all(&data, &spec, DEFAULT_EPS).unwrap();
        let moved = data.with_predictors(data.x().mapv(|v| a * v + b)).unwrap();
        let got = csirs_all(&moved, &spec, DEFAULT_EPS).unwrap();
        for (g, w) in got.omega.iter().zip(&base.omega) {
            let scale = g.abs().max(w.abs());
            prop_assert!(scale == 0.0 || (g - w).abs() / scale <= 1e-12, "{} vs {}", g, w);
        }
    }

    #[test]
    fn unconditional_methods_ignore_exposure(
        data in (5usize..=30, 1usize..=5).prop_flat_map(|(n, p)| dataset(n, p)),
        seed in any::<u64>(),
    ) {
        let n = data.n();
        let mut perm: Vec<usize> = (0..n).collect();
        // Fisher–Yates driven by a simple LCG keyed on the seed.
        let mut state = seed | 1;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let shuffled = data.with_exposure(Array1::from_iter(perm.iter().map(|&i| data.u()[i]))).unwrap();
        prop_assert_eq!(sirs_utility_all(&data), sirs_utility_all(&shuffled));
        prop_assert_eq!(dcsis_utility_all(&data), dcsis_utility_all(&shuffled));
    }

    #[test]
    fn ccsis_response_scale_invariance(
        data in (5usize..=30, 1usize..=5).prop_flat_map(|(n, p)| dataset(n, p)),
        a in prop_oneof![-50.0..-0.5f64, 0.5..50.0f64],
    ) {
        let spec = KernelSpec::fixed(0.5).unwrap();
        let base = ccsis_utility_all(&data, &spec, DEFAULT_EPS).unwrap();
        let scaled = ccsis_utility_all(&data.with_response(data.y().mapv(|v| a * v)).unwrap(), &spec, DEFAULT_EPS)
            .unwrap();
        for (g, w) in scaled.omega.iter().zip(&base.omega) {
            let scale = g.abs().max(w.abs());
            prop_assert!(scale == 0.0 || (g - w).abs() / scale <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn utilities_stay_in_unit_interval(
        data in prop_oneof![
            (4usize..=25, 1usize..=5).prop_flat_map(|(n, p)| dataset(n, p)),
            degenerate_dataset(),
        ],
        h in 0.02..2.0f64,
    ) {
        let spec = KernelSpec::fixed(h).unwrap();
        let all = [
            csirs_all(&data, &spec, DEFAULT_EPS).unwrap(),
            ccsis_utility_all(&data, &spec, DEFAULT_EPS).unwrap(),
            sirs_utility_all(&data),
            dcsis_utility_all(&data),
        ];
        for uv in &all {
            for &v in &uv.omega {
                prop_assert!(v.is_finite() && (0.0..=1.0).contains(&v), "{:?} {}", uv.method, v);
            }
        }
    }

    #[test]
    fn ranking_is_a_sorted_permutation(omega in prop::collection::vec(0.0..1.0f64, 1..40)) {
        let p = omega.len();
        let res = rank_and_select(UtilityVector::new(Method::Sirs, omega.clone()), &[1, p]).unwrap();
        let mut seen = res.ranking.clone();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..p).collect::<Vec<_>>());
        for w in res.ranking.windows(2) {
            prop_assert!(omega[w[0]] > omega[w[1]] || (omega[w[0]] == omega[w[1]] && w[0] < w[1]));
        }
        prop_assert_eq!(&res.selected[&p], &res.ranking);
        for (pos, &k) in res.ranking.iter().enumerate() {
            prop_assert_eq!(res.rank_of(k).unwrap(), pos + 1);
        }
    }

    #[test]
    fn aggregated_rates_are_consistent(
        reps in prop::collection::vec(prop::collection::vec(0.0..1.0f64, 12), 1..20),
        active in prop::sample::subsequence((0..12).collect::<Vec<usize>>(), 1..5),
    ) {
        let cutoffs: Vec<usize> = (1..=12).collect();
        let results: Vec<_> = reps
            .iter()
            .map(|o| (rank_and_select(UtilityVector::new(Method::Csirs, o.clone()), &[]).unwrap(), active.clone()))
            .collect();
        let m = aggregate(&results, &cutoffs, &DEFAULT_QUANTILE_LEVELS).unwrap();
        let sizes: Vec<usize> = results.iter().map(|(r, a)| min_model_size(r, a).unwrap()).collect();
        for &d in &cutoffs {
            let direct = sizes.iter().filter(|&&s| s <= d).count() as f64 / sizes.len() as f64;
            prop_assert_eq!(m.p_all[&d], direct);
            for &k in &active {
                prop_assert!(m.p_all[&d] <= m.p_each[&(d, k)]);
                if d > 1 {
                    prop_assert!(m.p_each[&(d - 1, k)] <= m.p_each[&(d, k)]);
                }
            }
            if d > 1 {
                prop_assert!(m.p_all[&(d - 1)] <= m.p_all[&d]);
            }
        }
        prop_assert_eq!(m.p_all[&12], 1.0);
        for w in m.min_model_size_quantiles.windows(2) {
            prop_assert!(w[0].1 <= w[1].1);
        }
        for (&k, &r) in &m.rank_by_active {
            prop_assert!((1.0..=12.0).contains(&r), "k={} r={}", k, r);
        }
        prop_assert!(m.min_model_size_quantiles[0].1 >= active.len() as f64);
    }
}

#[test]
fn thread_count_does_not_change_utilities() {
    use condscreen_core::simgen::{generate, Scenario, ScenarioSpec};
    let rep = generate(&ScenarioSpec::new(Scenario::Ex2Case3, 80, 60, 0.5, 17).unwrap()).unwrap();
    let spec = KernelSpec::default();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                (
                    csirs_all(&rep.data, &spec, DEFAULT_EPS).unwrap(),
                    ccsis_utility_all(&rep.data, &spec, DEFAULT_EPS).unwrap(),
                    sirs_utility_all(&rep.data),
                    dcsis_utility_all(&rep.data),
                )
            })
    };
    assert_eq!(run(1), run(6));
}
