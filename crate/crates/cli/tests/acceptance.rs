//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line reaches the terminal;
//! exits non-zero if any criterion fails. Each line also reports the
//! wall-clock time against the criterion's runtime budget; the budget is
//! informational and does not decide the verdict.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use oneshot::benchmark::{win_table, BenchGrid, FunctionId, NamedMethod, Prior};
use oneshot::metrics::{
    check_lhs_corner_bound, check_middle_point_theorem, check_projected_jittered, star_discrepancy, DiscrepancyMethod,
};
use oneshot::reshaping::{cauchy_cdf, cauchy_inv_cdf, normal_cdf, normal_inv_cdf};
use oneshot::sequence::{gen_base, SequenceKind};
use oneshot::{RngSeed, SamplerSpec};
use rayon::prelude::*;

const CDF_TOLERANCE: f64 = 1e-12;
const CDF_GRID_POINTS: usize = 100_000;
const CDF_GRID_LOW: f64 = 1e-10;
const BOUND_SE_MULTIPLIER: f64 = 3.0;
const WIN_THRESHOLD: f64 = 0.55;
const WIN_REPLICAS: usize = 1000;
const LHS_SEEDS: u64 = 100;
const LHS_MAX_N: usize = 1000;
const LHS_MAX_D: usize = 20;
const LHS_BOX_REPLICAS: usize = 10_000;
const JITTER_REPLICAS: usize = 10_000;
const GAUSSIAN_REPLICAS: usize = 1000;
const SQ_NORM_RATIO_RANGE: (f64, f64) = (0.9, 1.1);
const DISCREPANCY_BOXES: usize = 100_000;
const DISCREPANCY_RANDOM_SAMPLES: u64 = 20;
const DISCREPANCY_RATIO: f64 = 0.5;

struct Outcome {
    pass: bool,
    detail: String,
}

fn criterion(id: u32, name: &str, budget_secs: u64, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_secs);
    println!(
        "criterion {id:>2} {} {name}: {} [runtime {:.1}s, budget {budget_secs}s{}]",
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed.as_secs_f64(),
        if elapsed > budget { ", exceeded" } else { "" }
    );
    outcome.pass
}

/// Every column of every LHS sample occupies each of the `n` strata once.
fn lhs_stratification() -> Outcome {
    let pairs: Vec<(usize, usize)> = (1..=LHS_MAX_D).flat_map(|d| (2..=LHS_MAX_N).map(move |n| (n, d))).collect();
    let failures: Vec<(u64, usize, usize)> = (0..LHS_SEEDS)
        .into_par_iter()
        .flat_map_iter(|seed| {
            let pairs = &pairs;
            pairs.iter().filter_map(move |&(n, d)| {
                let sample = gen_base(SequenceKind::Lhs, n, d, RngSeed(seed).substream(&[n as u64, d as u64])).ok()?;
                let stratified = (0..d).all(|j| {
                    let mut seen = vec![false; n];
                    sample.column(j).all(|x| {
                        let cell = (x * n as f64).floor();
                        if !(0.0..n as f64).contains(&cell) || seen[cell as usize] {
                            return false;
                        }
                        seen[cell as usize] = true;
                        true
                    })
                });
                (!stratified).then_some((seed, n, d))
            })
        })
        .collect();
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "{} samples over n=2..{LHS_MAX_N}, d=1..{LHS_MAX_D}, {LHS_SEEDS} seeds; {} violations{}",
            pairs.len() as u64 * LHS_SEEDS,
            failures.len(),
            failures.first().map(|f| format!(", first {f:?}")).unwrap_or_default()
        ),
    }
}

fn cdf_round_trips() -> Outcome {
    let step = (1.0 - 2.0 * CDF_GRID_LOW) / (CDF_GRID_POINTS - 1) as f64;
    let mut worst_normal: f64 = 0.0;
    let mut worst_cauchy: f64 = 0.0;
    for i in 0..CDF_GRID_POINTS {
        let u = (CDF_GRID_LOW + i as f64 * step).min(1.0 - CDF_GRID_LOW);
        worst_normal = worst_normal.max((normal_cdf(normal_inv_cdf(u).unwrap()) - u).abs());
        worst_cauchy = worst_cauchy.max((cauchy_cdf(cauchy_inv_cdf(u).unwrap()) - u).abs());
    }
    Outcome {
        pass: worst_normal <= CDF_TOLERANCE && worst_cauchy <= CDF_TOLERANCE,
        detail: format!("max |g(g^-1(u))-u| = {worst_normal:.3e}, max |C(C^-1(u))-u| = {worst_cauchy:.3e}, tolerance {CDF_TOLERANCE:e}"),
    }
}

fn lhs_corner() -> Outcome {
    let r = check_lhs_corner_bound(64, 4, 3, LHS_BOX_REPLICAS, RngSeed(3)).unwrap();
    let one_d = check_lhs_corner_bound(64, 4, 1, LHS_BOX_REPLICAS, RngSeed(3)).unwrap();
    let pass = r.estimate <= r.bound + BOUND_SE_MULTIPLIER * r.stderr && one_d.estimate == 0.0;
    Outcome {
        pass,
        detail: format!(
            "miss probability {:.5} (se {:.5}) vs bound {:.5}; d=1 miss probability {}",
            r.estimate, r.stderr, r.bound, one_d.estimate
        ),
    }
}

fn projected_jittered() -> Outcome {
    let r = check_projected_jittered(81, 4, 2, 0.1, JITTER_REPLICAS, RngSeed(4)).unwrap();
    Outcome {
        pass: r.estimate <= r.bound + BOUND_SE_MULTIPLIER * r.stderr,
        detail: format!("0.9-quantile {:.5} (se {:.5}) vs bound {:.5}", r.estimate, r.stderr, r.bound),
    }
}

fn gaussian_search() -> Outcome {
    let r = check_middle_point_theorem(30, 100, GAUSSIAN_REPLICAS, RngSeed(5)).unwrap();
    let ratio = r.extra("median_sq_norm_over_d").unwrap();
    let pass = r.bound > r.estimate && (SQ_NORM_RATIO_RANGE.0..=SQ_NORM_RATIO_RANGE.1).contains(&ratio);
    Outcome {
        pass,
        detail: format!(
            "median min-distance {:.4} vs median |x*| {:.4}; median |x*|^2/d = {ratio:.4}",
            r.bound, r.estimate
        ),
    }
}

fn head_to_head(challenger: &str, baseline: &str, d: usize, budget: usize, prior: Prior, seed: u64) -> Outcome {
    let methods = vec![
        NamedMethod::new(challenger, SamplerSpec::parse(challenger).unwrap()),
        NamedMethod::new(baseline, SamplerSpec::parse(baseline).unwrap()),
    ];
    let grid = BenchGrid { dims: vec![(d, d)], budgets: vec![budget], functions: vec![FunctionId::Sphere], prior };
    let table = win_table(&methods, &grid, WIN_REPLICAS, RngSeed(seed)).unwrap();
    let freq = table.frequency(table.cell(0, 0), challenger, baseline).unwrap();
    let se = (freq * (1.0 - freq) / WIN_REPLICAS as f64).sqrt();
    Outcome {
        pass: freq > WIN_THRESHOLD,
        detail: format!("{challenger} beats {baseline} with frequency {freq:.3} (se {se:.3}), threshold {WIN_THRESHOLD}"),
    }
}

fn discrepancy_ordering() -> Outcome {
    let mc = |s: &oneshot::UnitSample, seed: u64| {
        star_discrepancy(s, DiscrepancyMethod::MonteCarlo { boxes: DISCREPANCY_BOXES, seed: RngSeed(seed) })
            .unwrap()
            .value
    };
    let halton = mc(&gen_base(SequenceKind::Halton, 1024, 2, RngSeed(0)).unwrap(), 9);
    let random: Vec<f64> = (0..DISCREPANCY_RANDOM_SAMPLES)
        .map(|i| mc(&gen_base(SequenceKind::Random, 1024, 2, RngSeed(100 + i)).unwrap(), 200 + i))
        .collect();
    let mean = random.iter().sum::<f64>() / random.len() as f64;
    Outcome {
        pass: halton <= DISCREPANCY_RATIO * mean,
        detail: format!("Halton {halton:.5} vs {DISCREPANCY_RATIO} x random mean {mean:.5}"),
    }
}

fn bench_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bench.toml");
    std::fs::write(&config, "kind = \"bench\"\nseed = 2024\nreplicas = 10\n").unwrap();
    let run = |out: &Path, jobs: &str| {
        let status = Command::new(env!("CARGO_BIN_EXE_oneshot"))
            .args(["bench", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(out)
            .args(["--jobs", jobs])
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        (std::fs::read(out.join("results.csv")).unwrap(), std::fs::read(out.join("win_table.txt")).unwrap())
    };
    let a = run(&dir.path().join("a"), "1");
    let b = run(&dir.path().join("b"), "3");
    let records = a.0.iter().filter(|&&c| c == b'\n').count() - 1;
    Outcome {
        pass: a == b,
        detail: format!("{records} result records; results and win table byte-identical: {}", a == b),
    }
}

fn main() {
    let mut all = true;
    all &= criterion(1, "LHS stratification", 60, lhs_stratification);
    all &= criterion(2, "CDF round trips", 10, cdf_round_trips);
    all &= criterion(3, "LHS corner-box miss bound", 60, lhs_corner);
    all &= criterion(4, "projected jittered dispersion bound", 120, projected_jittered);
    all &= criterion(5, "Gaussian search vs centre", 60, gaussian_search);
    all &= criterion(6, "middle point benefit", 60, || {
        head_to_head("RandomPlusMiddlePoint", "Random", 100, 30, Prior::NormalStd, 6)
    });
    all &= criterion(7, "recentering benefit", 60, || {
        head_to_head("MetaRctgScrHammersley", "ScrHammersley", 100, 100, Prior::NormalStd, 7)
    });
    all &= criterion(8, "Cauchy benefit under misspecified scale", 60, || {
        head_to_head("CauchyRctg0.55ScrHammersley", "Rctg0.55ScrHammersley", 30, 100, Prior::NormalScaled(5.0), 8)
    });
    all &= criterion(9, "discrepancy ordering", 60, discrepancy_ordering);
    all &= criterion(10, "bench determinism", 120, bench_determinism);
    if !all {
        std::process::exit(1);
    }
}
