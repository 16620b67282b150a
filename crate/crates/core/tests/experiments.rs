use mscale::experiments::{
    run_experiment, run_experiment_on, ExperimentPlan, InputRef, ModelSpec, STAT_B, STAT_H1,
    STAT_LAMBDA2_EFF,
};
use mscale::surrogates::SurrogateKind;
use mscale::{Error, LagWindow, Series};

const MRW: ModelSpec = ModelSpec::Mrw {
    lambda2: 0.03,
    corr_len: 1000.0,
    sigma: 1.0,
    dt: 1.0,
};

fn short_plan(model: ModelSpec, surrogate: SurrogateKind, k: usize, n: usize) -> ExperimentPlan {
    ExperimentPlan::synthetic(model, surrogate, 99)
        .with_realizations(k)
        .with_length(n)
        .with_windows(vec![LagWindow::SHORT])
}

fn mean_b(plan: &ExperimentPlan) -> (f64, f64) {
    let r = run_experiment(plan).unwrap();
    let s = r.arms[0]
        .window(LagWindow::SHORT)
        .unwrap()
        .stat(STAT_B)
        .unwrap()
        .clone();
    (s.mean, s.stderr)
}

#[test]
fn reports_are_identical_across_thread_counts() {
    let plan = short_plan(MRW, SurrogateKind::Gaussianize, 6, 1 << 13);
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| serde_json::to_string(&run_experiment(&plan).unwrap()).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(1));
}

#[test]
fn monte_carlo_error_shrinks_like_root_k() {
    let se = |k| mean_b(&short_plan(ModelSpec::Bm, SurrogateKind::None, k, 1 << 12)).1;
    let ratio = se(100) / se(200);
    assert!((1.2..=1.7).contains(&ratio), "ratio {ratio}");
}

#[test]
fn small_window_orderings() {
    let (k, n) = (40, 1 << 15);
    let (plain, _) = mean_b(&short_plan(MRW, SurrogateKind::None, k, n));
    let (shuffled, _) = mean_b(&short_plan(MRW, SurrogateKind::Shuffle, k, n));
    let (gauss, _) = mean_b(&short_plan(MRW, SurrogateKind::Gaussianize, k, n));
    assert!(shuffled < plain && plain < 0.0, "{shuffled} {plain}");
    assert!(gauss > 0.0, "{gauss}");
    let t: Vec<f64> = [3.0, 4.0, 5.0]
        .iter()
        .map(|&n_| {
            mean_b(&short_plan(
                ModelSpec::Tbm { n: n_ },
                SurrogateKind::None,
                k,
                n,
            ))
            .0
        })
        .collect();
    assert!(t[0] < t[1] && t[1] < t[2] && t[2] < 0.0, "{t:?}");
}

#[test]
fn report_carries_theory_and_provenance() {
    let plan = short_plan(MRW, SurrogateKind::None, 4, 1 << 13)
        .with_windows(vec![LagWindow::SHORT, LagWindow::new(30, 250).unwrap()]);
    let r = run_experiment(&plan).unwrap();
    assert_eq!(r.seed, 99);
    assert_eq!(r.plan, plan);
    let arm = &r.arms[0];
    let b = arm.window(LagWindow::LONG).unwrap().stat(STAT_B).unwrap();
    assert_eq!(b.theory, Some(-0.015));
    assert!(b.std >= 0.0 && b.count == 4);
    let h = arm.window(LagWindow::SHORT).unwrap().stat(STAT_H1).unwrap();
    assert!((h.theory.unwrap() - 0.515).abs() < 1e-15);
    assert_eq!(arm.stat(STAT_LAMBDA2_EFF).unwrap().theory, Some(0.03));
    assert_eq!(r.table().len(), 2 * 5 + 1);

    let shuffled = run_experiment(&short_plan(
        ModelSpec::Bm,
        SurrogateKind::Shuffle,
        3,
        1 << 12,
    ))
    .unwrap();
    assert_eq!(
        shuffled.arms[0].windows[0].stat(STAT_B).unwrap().theory,
        Some(0.0)
    );
}

#[test]
fn failing_realization_reports_its_seed() {
    let mut plan = ExperimentPlan::synthetic(ModelSpec::Bm, SurrogateKind::None, 1234);
    plan.model = None;
    plan.input = Some(InputRef {
        path: "flat.csv".into(),
        column: None,
        transform: None,
    });
    plan.windows = vec![LagWindow::SHORT];
    let flat = Series::increments(vec![0.0; 500]).unwrap();
    match run_experiment_on(&plan, &flat) {
        Err(Error::Realization {
            index,
            seed,
            source,
        }) => {
            assert_eq!((index, seed), (0, 1234));
            assert!(source.is_estimation());
            assert!(format!(
                "{}",
                Error::Realization {
                    index,
                    seed,
                    source
                }
            )
            .contains("1234"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn invalid_plans_are_rejected() {
    let plan = short_plan(ModelSpec::Bm, SurrogateKind::None, 0, 1000);
    assert!(matches!(run_experiment(&plan), Err(Error::Domain(_))));
    let plan = short_plan(ModelSpec::Bm, SurrogateKind::None, 5, 50);
    assert!(matches!(run_experiment(&plan), Err(Error::Domain(_))));
}
