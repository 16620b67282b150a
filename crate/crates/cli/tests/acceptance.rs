//! Acceptance suite: one PASS/FAIL line per criterion. With
//! `MSCALE_ACCEPTANCE_STRICT=1` any FAIL also makes the exit status non-zero.
//!
//! `MSCALE_ACCEPTANCE_CSV` (and optionally `MSCALE_ACCEPTANCE_COLUMN`) points
//! criterion 10 at a daily equity-index price file; without it a synthetic
//! index is used. `MSCALE_ACCEPTANCE_ONLY=1,7,8` runs a subset.

use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use mscale::estimators::{estimate_ghe, fit_parabola_points, fit_tail, TailSide};
use mscale::experiments::{
    run_experiment, ExperimentPlan, ExperimentReport, ModelSpec, StatSummary, STAT_B, STAT_H1,
    STAT_LAMBDA2_EFF,
};
use mscale::generators::{gen_mrw, gen_tbm, MrwParams, TbmParams};
use mscale::surrogates::SurrogateKind;
use mscale::{LagWindow, MasterSeed, QGrid, Series, StreamPurpose};
use rand::Rng;

const SEED: u64 = 20_240_917;
const K: usize = 200;
const N: usize = 1 << 17;

fn mrw(lambda2: f64) -> ModelSpec {
    ModelSpec::Mrw {
        lambda2,
        corr_len: 1000.0,
        sigma: 1.0,
        dt: 1.0,
    }
}

struct Ensembles {
    cache: HashMap<String, ExperimentReport>,
}

impl Ensembles {
    fn get(&mut self, model: ModelSpec, surrogate: SurrogateKind) -> &ExperimentReport {
        let key = format!("{}/{surrogate:?}", model.label());
        self.cache.entry(key.clone()).or_insert_with(|| {
            let t = Instant::now();
            let plan = ExperimentPlan::synthetic(model, surrogate, SEED)
                .with_realizations(K)
                .with_length(N);
            let r = run_experiment(&plan).expect("ensemble run");
            eprintln!("  ensemble {key}: {:.1}s", t.elapsed().as_secs_f64());
            r
        })
    }

    fn stat(
        &mut self,
        model: ModelSpec,
        s: SurrogateKind,
        w: LagWindow,
        name: &str,
    ) -> StatSummary {
        self.get(model, s).arms[0]
            .window(w)
            .unwrap()
            .stat(name)
            .unwrap()
            .clone()
    }

    fn lambda2(&mut self, model: ModelSpec, s: SurrogateKind) -> StatSummary {
        self.get(model, s).arms[0]
            .stat(STAT_LAMBDA2_EFF)
            .unwrap()
            .clone()
    }
}

fn fmt(s: &StatSummary) -> String {
    format!("{:.5}±{:.5}", s.mean, s.stderr)
}

fn z(s: &StatSummary, v: f64) -> f64 {
    (s.mean - v) / s.stderr
}

type Outcome = (bool, String);

fn c1(e: &mut Ensembles) -> Outcome {
    let m = mrw(0.03);
    let b = e.stat(m, SurrogateKind::None, LagWindow::LONG, STAT_B);
    let h = e.stat(m, SurrogateKind::None, LagWindow::LONG, STAT_H1);
    let ok = b.within(-0.015, 3.0) && h.within(0.515, 3.0);
    (
        ok,
        format!(
            "[30,250] B={} (z={:+.2} vs -0.015), H(1)={} (z={:+.2} vs 0.515)",
            fmt(&b),
            z(&b, -0.015),
            fmt(&h),
            z(&h, 0.515)
        ),
    )
}

fn c2(e: &mut Ensembles) -> Outcome {
    let m = mrw(0.03);
    let plain = e.stat(m, SurrogateKind::None, LagWindow::SHORT, STAT_B);
    let sh = e.stat(m, SurrogateKind::Shuffle, LagWindow::SHORT, STAT_B);
    let combined = plain.stderr.hypot(sh.stderr);
    let sep = (plain.mean - sh.mean) / combined;
    let ok = sh.mean < plain.mean && sep > 5.0 && z(&sh, 0.0) < -3.0;
    (
        ok,
        format!(
            "[1,19] B shuffled={} plain={}, separation {sep:.1} SE, shuffled z vs 0 = {:+.1}",
            fmt(&sh),
            fmt(&plain),
            z(&sh, 0.0)
        ),
    )
}

fn c3(e: &mut Ensembles) -> Outcome {
    let sh = e.stat(mrw(0.03), SurrogateKind::Shuffle, LagWindow::LONG, STAT_B);
    (
        sh.within(0.0, 3.0),
        format!(
            "[30,250] B shuffled={} (z={:+.2} vs 0)",
            fmt(&sh),
            z(&sh, 0.0)
        ),
    )
}

fn c4(e: &mut Ensembles) -> Outcome {
    let mut short = Vec::new();
    let mut long = Vec::new();
    for n in [3.0, 4.0, 5.0] {
        let m = ModelSpec::Tbm { n };
        short.push(e.stat(m, SurrogateKind::None, LagWindow::SHORT, STAT_B));
        long.push(e.stat(m, SurrogateKind::None, LagWindow::LONG, STAT_B));
    }
    let negative = short.iter().all(|s| z(s, 0.0) < -3.0);
    let ordered = short[0].mean < short[1].mean && short[1].mean < short[2].mean;
    let shrinks = short
        .iter()
        .zip(&long)
        .all(|(s, l)| l.mean.abs() < s.mean.abs());
    (
        negative && ordered && shrinks,
        format!(
            "[1,19] B n=3,4,5: {}, {}, {}; [30,250]: {}, {}, {}",
            fmt(&short[0]),
            fmt(&short[1]),
            fmt(&short[2]),
            fmt(&long[0]),
            fmt(&long[1]),
            fmt(&long[2])
        ),
    )
}

fn c5(e: &mut Ensembles) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for l2 in [0.03, 0.04, 0.05] {
        let s = e.stat(
            mrw(l2),
            SurrogateKind::Gaussianize,
            LagWindow::SHORT,
            STAT_B,
        );
        let l = e.stat(mrw(l2), SurrogateKind::Gaussianize, LagWindow::LONG, STAT_B);
        ok &= s.mean > 0.0 && l.mean < 0.0;
        parts.push(format!("λ²={l2}: [1,19] {} [30,250] {}", fmt(&s), fmt(&l)));
    }
    (ok, parts.join("; "))
}

fn c6(e: &mut Ensembles) -> Outcome {
    let g = e.lambda2(mrw(0.03), SurrogateKind::Gaussianize);
    let plain = e.lambda2(mrw(0.03), SurrogateKind::None);
    let ok = g.within(0.0223, 3.0) && g.mean < plain.mean;
    (
        ok,
        format!(
            "lambda2_eff={} (z={:+.2} vs 0.0223), plain fitted lambda2={}",
            fmt(&g),
            z(&g, 0.0223),
            fmt(&plain)
        ),
    )
}

fn c7() -> Outcome {
    let mut rng = MasterSeed(SEED).stream(0, StreamPurpose::Generate);
    let pareto: Vec<f64> = (0..100_000)
        .map(|_| (1.0 - rng.random::<f64>()).powf(-1.0 / 3.5))
        .collect();
    let p = fit_tail(&Series::increments(pareto).unwrap(), TailSide::Right).unwrap();
    let t = gen_tbm(
        &TbmParams::new(3.0, 1_000_000).unwrap(),
        MasterSeed(SEED),
        0,
    )
    .unwrap();
    let left = fit_tail(&t, TailSide::Left).unwrap();
    let right = fit_tail(&t, TailSide::Right).unwrap();
    let rel = |a: f64, v: f64| (a / v - 1.0).abs();
    let ok =
        rel(p.alpha, 3.5) < 0.02 && rel(left.alpha, 3.0) < 0.05 && rel(right.alpha, 3.0) < 0.05;
    (ok, format!(
        "Pareto(3.5) alpha={:.4} ({:+.2}%); tBM(3) left={:.4} ({:+.2}%, xmin {:.2}) right={:.4} ({:+.2}%, xmin {:.2})",
        p.alpha, 100.0 * (p.alpha / 3.5 - 1.0),
        left.alpha, 100.0 * (left.alpha / 3.0 - 1.0), left.xmin,
        right.alpha, 100.0 * (right.alpha / 3.0 - 1.0), right.xmin
    ))
}

fn c8() -> Outcome {
    let grid = QGrid::default();
    let ramp = Series::increments(vec![1.0; 4096]).unwrap();
    let mut worst: f64 = 0.0;
    for w in [LagWindow::SHORT, LagWindow::LONG] {
        for p in estimate_ghe(&ramp, w, &grid).unwrap().points {
            worst = worst.max((p.zeta_hat - p.q).abs());
        }
    }
    let z: Vec<f64> = grid
        .qs()
        .iter()
        .map(|q| -0.015 * q * q + 0.53 * q)
        .collect();
    let f = fit_parabola_points(grid.qs(), &z).unwrap();
    let coef = (f.b + 0.015).abs().max((f.a - 0.53).abs()).max(f.c.abs());
    (
        worst < 1e-10 && coef < 1e-10,
        format!("ramp max |zeta-q|={worst:.1e}; quadratic max coef error={coef:.1e}"),
    )
}

fn mscale_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mscale"))
        .args(args)
        .output()
        .expect("run mscale")
}

fn c9(dir: &Path) -> Outcome {
    let plan = dir.join("repro.toml");
    std::fs::write(
        &plan,
        "surrogate = \"gaussianize\"\nrealizations = 16\nlength = 32768\n\n[model]\nkind = \"mrw\"\nlambda2 = 0.03\nL = 1000\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4", "1"] {
        let out = dir.join(format!("repro_{threads}_{}.json", outputs.len()));
        let o = mscale_cli(&[
            "--seed",
            "11",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
            "experiment",
            plan.to_str().unwrap(),
        ]);
        if !o.status.success() {
            return (
                false,
                format!("experiment failed: {}", String::from_utf8_lossy(&o.stderr)),
            );
        }
        outputs.push(std::fs::read(&out).unwrap());
    }
    let ok = outputs.windows(2).all(|w| w[0] == w[1]);
    (
        ok,
        format!(
            "3 runs (threads 1, 4, 1), {} bytes each, identical={ok}",
            outputs[0].len()
        ),
    )
}

/// Daily closes of an MRW index: 2^17 days, 1% daily volatility, cents.
/// A single path of this length separates the two windows' Gaussianized
/// curvature far beyond its per-path spread; 25k days does not.
fn synthetic_index(path: &Path) {
    let params = MrwParams::new(0.04, 1000.0, 0.01, 1 << 17).unwrap();
    let r = gen_mrw(&params, MasterSeed(SEED), 0).unwrap();
    let mut text = String::from("date,close\n");
    let mut level: f64 = 100.0;
    text.push_str(&format!("d00000,{level:.2}\n"));
    for (i, x) in r.values().iter().enumerate() {
        level *= x.exp();
        text.push_str(&format!("d{:05},{level:.2}\n", i + 1));
    }
    std::fs::write(path, text).unwrap();
}

fn c10(dir: &Path) -> Outcome {
    let (csv, column, origin) = match std::env::var("MSCALE_ACCEPTANCE_CSV") {
        Ok(p) => (
            std::path::PathBuf::from(p),
            std::env::var("MSCALE_ACCEPTANCE_COLUMN").ok(),
            "user file",
        ),
        Err(_) => {
            let p = dir.join("index.csv");
            synthetic_index(&p);
            (p, Some("close".to_string()), "synthetic MRW index")
        }
    };
    let csv = std::fs::canonicalize(&csv).unwrap_or(csv);
    let column_line = column
        .map(|c| format!("column = \"{c}\"\n"))
        .unwrap_or_default();
    let plan = dir.join("battery.toml");
    std::fs::write(
        &plan,
        format!(
            "battery = true\nrealizations = 100\n\n[input]\npath = {:?}\n{column_line}transform = \"log_returns\"\n",
            csv.display().to_string()
        ),
    )
    .unwrap();
    let out = dir.join("battery.json");
    let o = mscale_cli(&[
        "--seed",
        "5",
        "--out",
        out.to_str().unwrap(),
        "experiment",
        plan.to_str().unwrap(),
    ]);
    if !o.status.success() {
        return (
            false,
            format!(
                "{origin}: battery failed: {}",
                String::from_utf8_lossy(&o.stderr)
            ),
        );
    }
    let report: ExperimentReport =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let points = mscale_cli_len(
        &csv,
        report.plan.input.as_ref().and_then(|i| i.column.clone()),
    );
    let g = report.arm("gaussianized").unwrap();
    let both = report
        .arms
        .iter()
        .all(|a| a.window(LagWindow::SHORT).is_some() && a.window(LagWindow::LONG).is_some());
    let bs = g.window(LagWindow::SHORT).unwrap().stat(STAT_B).unwrap();
    let bl = g.window(LagWindow::LONG).unwrap().stat(STAT_B).unwrap();
    let ok = points >= 10_000 && both && bs.mean > 0.0 && bl.mean < 0.0;
    (
        ok,
        format!(
            "{origin}, {points} returns: gaussianized B [1,19]={:.5} [30,250]={:.5}; arms {}",
            bs.mean,
            bl.mean,
            report
                .arms
                .iter()
                .map(|a| a.name.as_str())
                .collect::<Vec<_>>()
                .join(",")
        ),
    )
}

fn mscale_cli_len(csv: &Path, column: Option<String>) -> usize {
    let mut spec =
        mscale_cli::IngestSpec::new(csv).with_transform(mscale_cli::Transform::LogReturns);
    if let Some(c) = column {
        spec = spec.with_column(c.parse().unwrap());
    }
    mscale_cli::ingest(&spec)
        .map(|i| i.series.len())
        .unwrap_or(0)
}

fn main() -> ExitCode {
    let only: Option<Vec<usize>> = std::env::var("MSCALE_ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let dir = tempfile::tempdir().unwrap();
    let mut e = Ensembles {
        cache: HashMap::new(),
    };
    let names = [
        "theory-oracle recovery (MRW, [30,250])",
        "shuffling bias at small tau",
        "shuffling neutrality at large tau",
        "tBM spurious concavity ordering",
        "concavity flip under Gaussianization",
        "lambda_eff reduction",
        "tail estimator calibration",
        "deterministic-series exactness",
        "reproducibility across thread counts",
        "real-data pipeline",
    ];
    let mut failed = 0;
    for (i, name) in names.iter().enumerate() {
        let id = i + 1;
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let t = Instant::now();
        let (ok, detail) = match id {
            1 => c1(&mut e),
            2 => c2(&mut e),
            3 => c3(&mut e),
            4 => c4(&mut e),
            5 => c5(&mut e),
            6 => c6(&mut e),
            7 => c7(),
            8 => c8(),
            9 => c9(dir.path()),
            _ => c10(dir.path()),
        };
        failed += usize::from(!ok);
        println!(
            "{} criterion {id:>2}: {name}: {detail} [{:.0}s]",
            if ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        if std::env::var("MSCALE_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
            ExitCode::FAILURE
        } else {
            ExitCode::SUCCESS
        }
    } else {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    }
}
