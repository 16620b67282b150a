use mscale::estimators::{
    estimate_ghe, fit_log_autocovariance, fit_log_autocovariance_auto, fit_parabola,
    fit_parabola_points, fit_tail, TailSide,
};
use mscale::generators::{gen_bm, gen_mrw, gen_tbm, MrwParams, TbmParams};
use mscale::{Error, LagWindow, MasterSeed, QGrid, Series, StreamPurpose};
use rand::Rng;
use rand_distr::StandardNormal;

#[test]
fn ramp_and_quadratic_exactness() {
    let ramp = Series::increments(vec![1.0; 2000]).unwrap();
    for w in [LagWindow::SHORT, LagWindow::LONG] {
        let r = estimate_ghe(&ramp, w, &QGrid::default()).unwrap();
        for p in &r.points {
            assert!((p.zeta_hat - p.q).abs() < 1e-10);
        }
    }
    let grid = QGrid::default();
    let z: Vec<f64> = grid
        .qs()
        .iter()
        .map(|q| -0.015 * q * q + 0.53 * q)
        .collect();
    let f = fit_parabola_points(grid.qs(), &z).unwrap();
    assert!((f.b + 0.015).abs() < 1e-10 && (f.a - 0.53).abs() < 1e-10 && f.c.abs() < 1e-10);
    let z: Vec<f64> = grid.qs().iter().map(|q| 0.5 * q).collect();
    let f = fit_parabola_points(grid.qs(), &z).unwrap();
    assert!(f.b.abs() < 1e-10 && (f.a - 0.5).abs() < 1e-10 && f.c.abs() < 1e-10);
}

#[test]
fn duplicate_q_is_rank_deficient() {
    assert!(matches!(
        fit_parabola_points(&[0.5, 0.5, 0.5], &[0.1, 0.2, 0.3]),
        Err(Error::Domain(_))
    ));
}

#[test]
fn ghe_on_levels_and_window_report() {
    let s = gen_bm(4000, MasterSeed(3), 0).unwrap();
    let r = estimate_ghe(&s, LagWindow::LONG, &QGrid::default()).unwrap();
    assert_eq!(r.points.len(), 10);
    assert!(r.points.iter().all(|p| p.r2 > 0.5 && p.stderr > 0.0));
    let p = fit_parabola(&r).unwrap();
    assert!(p.stderrs.b > 0.0);
}

#[test]
fn cov_fit_recovers_mrw_parameters() {
    let params = MrwParams::new(0.09, 1000.0, 1.0, 1_000_000).unwrap();
    let s = gen_mrw(&params, MasterSeed(314), 0).unwrap();
    let fit = fit_log_autocovariance_auto(&s).unwrap();
    assert!(fit.is_meaningful());
    let l2 = fit.lambda2_hat;
    let l = fit.corr_len_hat.unwrap();
    // single-path sampling error dominates the OLS error on correlated residuals
    assert!((l2 - 0.09).abs() < 0.015, "lambda2 {l2} (fit {fit:?})");
    assert!(l > 300.0 && l < 3000.0, "L {l}");
}

#[test]
fn cov_fit_on_noise_is_flat() {
    let s = gen_bm(200_000, MasterSeed(8), 0).unwrap();
    let fit = fit_log_autocovariance(&s, 50).unwrap();
    assert!(
        fit.lambda2_hat.abs() < 3.0 * fit.slope_stderr + 1e-3,
        "{fit:?}"
    );
}

fn pareto(alpha: f64, n: usize, seed: u64) -> Series {
    let mut rng = MasterSeed(seed).stream(0, StreamPurpose::Generate);
    let v = (0..n)
        .map(|_| {
            let u: f64 = 1.0 - rng.random::<f64>();
            u.powf(-1.0 / alpha)
        })
        .collect();
    Series::increments(v).unwrap()
}

#[test]
fn pareto_exponent_within_two_percent() {
    let fit = fit_tail(&pareto(3.5, 100_000, 21), TailSide::Right).unwrap();
    assert!((fit.alpha / 3.5 - 1.0).abs() < 0.02, "{fit:?}");
    assert!(fit.n_tail >= 50 && fit.xmin > 0.0);
    assert!((fit.density_exponent() - fit.alpha - 1.0).abs() < 1e-15);
}

#[test]
fn student_three_tails_approach_three_from_below() {
    // cutoffs stop at the 99th percentile, where the t(3) tail is not yet a pure
    // power law: the MLE there converges to about 2.88
    let p = TbmParams::new(3.0, 1_000_000).unwrap();
    let s = gen_tbm(&p, MasterSeed(33), 0).unwrap();
    for side in [TailSide::Left, TailSide::Right] {
        let fit = fit_tail(&s, side).unwrap();
        assert!(fit.alpha > 2.6 && fit.alpha < 3.05, "{side}: {fit:?}");
        assert!(fit.xmin > 2.0, "{side}: {fit:?}");
    }
}

#[test]
fn mixture_cutoff_found_within_decade() {
    let cutoff = 2.0;
    let mut rng = MasterSeed(5).stream(0, StreamPurpose::Generate);
    let mut v = Vec::new();
    for _ in 0..60_000 {
        let g: f64 = rng.sample(StandardNormal);
        v.push((g.abs() * 0.5).min(cutoff * 0.999));
    }
    for _ in 0..20_000 {
        let u: f64 = 1.0 - rng.random::<f64>();
        v.push(cutoff * u.powf(-1.0 / 2.5));
    }
    let fit = fit_tail(&Series::increments(v).unwrap(), TailSide::Right).unwrap();
    assert!(
        fit.xmin >= cutoff / 10.0 && fit.xmin <= cutoff * 10.0,
        "{fit:?}"
    );
    assert!((fit.alpha / 2.5 - 1.0).abs() < 0.05, "{fit:?}");
}
