//! Monte-Carlo checks of the dispersion bounds for LHS, projected jittered
//! sampling and Gaussian search around a Gaussian optimum.

use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use libm::tgamma as gamma;

use super::stats::{median, quantile_with_stderr};
use super::min_distance;
use crate::error::{invalid, Result};
use crate::rng::RngSeed;
use crate::sequence::{cells_per_axis, gen_base, SequenceKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    /// Parameters outside the regime where the claim applies.
    NotAsserted,
}

/// How the estimate is compared with the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PassRule {
    /// `estimate <= bound + 3 * stderr`
    AtMostBoundPlus3Se,
    /// `estimate < bound`
    StrictlyBelowBound,
}

impl PassRule {
    fn judge(self, estimate: f64, stderr: f64, bound: f64) -> Verdict {
        let ok = match self {
            PassRule::AtMostBoundPlus3Se => estimate <= bound + 3.0 * stderr,
            PassRule::StrictlyBelowBound => estimate < bound,
        };
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn tag(self) -> &'static str {
        match self {
            PassRule::AtMostBoundPlus3Se => "le_bound_plus_3se",
            PassRule::StrictlyBelowBound => "lt_bound",
        }
    }
}

/// Outcome of one numerical bound check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckReport {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub estimate: f64,
    pub stderr: f64,
    pub bound: f64,
    pub rule: PassRule,
    pub verdict: Verdict,
    /// Secondary quantities reported alongside the check.
    pub extras: Vec<(String, f64)>,
}

impl BoundCheckReport {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    pub fn extra(&self, key: &str) -> Option<f64> {
        self.extras.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }

    /// One whitespace-separated `key=value` record.
    pub fn to_line(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for BoundCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "check={}", self.name)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        write!(
            f,
            " estimate={} stderr={} bound={} rule={} pass={}",
            self.estimate,
            self.stderr,
            self.bound,
            self.rule.tag(),
            match self.verdict {
                Verdict::Pass => "true",
                Verdict::Fail => "false",
                Verdict::NotAsserted => "na",
            }
        )?;
        for (k, v) in &self.extras {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

fn is_power_of_two(x: usize) -> bool {
    x.is_power_of_two()
}

/// Upper bound on the probability that LHS(n) misses `[0, m/n]^d`.
pub fn lhs_corner_bound(n: usize, m: usize, d: usize) -> f64 {
    let scale = (n as f64).powf(1.0 - 1.0 / d as f64);
    let alpha = m as f64 / scale;
    let base = (1.0 - alpha.powi(d as i32 - 1) / scale).max(0.0);
    base.powf(alpha * scale)
}

/// Probability that an LHS sample of `n` points has no point in
/// `[0, m/n]^d`, against [`lhs_corner_bound`]. Box membership uses the
/// maximum norm: every coordinate must be at most `m/n`.
pub fn check_lhs_corner_bound(n: usize, m: usize, d: usize, replicas: usize, seed: RngSeed) -> Result<BoundCheckReport> {
    if !is_power_of_two(n) || !is_power_of_two(m) || m > n {
        return Err(invalid(format!("n and m must be powers of two with m <= n, got n={n} m={m}")));
    }
    if d == 0 || replicas == 0 {
        return Err(invalid("dimension and replica count must be >= 1"));
    }
    let side = m as f64 / n as f64;
    let misses = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let s = gen_base(SequenceKind::Lhs, n, d, seed.substream(&[r as u64]))?;
            let hit = s.points().any(|p| p.iter().all(|&x| x <= side));
            Ok(!hit)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&miss| miss)
        .count();
    let p = misses as f64 / replicas as f64;
    let stderr = (p * (1.0 - p) / replicas as f64).sqrt();
    let bound = lhs_corner_bound(n, m, d);
    let rule = PassRule::AtMostBoundPlus3Se;
    Ok(BoundCheckReport {
        name: "lhs_corner_bound".into(),
        params: params(&[("n", n), ("m", m), ("d", d), ("replicas", replicas)], seed),
        estimate: p,
        stderr,
        bound,
        rule,
        verdict: rule.judge(p, stderr, bound),
        extras: vec![("alpha".into(), m as f64 / (n as f64).powf(1.0 - 1.0 / d as f64))],
    })
}

/// Volume of the Euclidean unit ball in dimension `d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    let half = d as f64 / 2.0;
    std::f64::consts::PI.powf(half) / gamma(half + 1.0)
}

/// `2^(1+1/d') log(1/delta)^(1/d') / (V_d' n)^(1/d')`.
pub fn projected_jittered_bound(n: usize, d_proj: usize, delta: f64) -> f64 {
    let inv = 1.0 / d_proj as f64;
    2f64.powf(1.0 + inv) * (1.0 / delta).ln().powf(inv) / (unit_ball_volume(d_proj) * n as f64).powf(inv)
}

/// The `(1 - delta)` quantile of the distance from a uniform probe to the
/// nearest point of a jittered sample projected on its first `d_proj` axes.
pub fn check_projected_jittered(
    n: usize,
    d: usize,
    d_proj: usize,
    delta: f64,
    replicas: usize,
    seed: RngSeed,
) -> Result<BoundCheckReport> {
    if d == 0 || cells_per_axis(n, d).pow(d as u32) != n {
        return Err(invalid(format!("n = {n} is not a perfect power k^{d}")));
    }
    if d_proj == 0 || d_proj > d {
        return Err(invalid(format!("projection dimension must be in 1..={d}, got {d_proj}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    if replicas == 0 {
        return Err(invalid("replica count must be >= 1"));
    }
    let coords: Vec<usize> = (0..d_proj).collect();
    let distances = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let s = gen_base(SequenceKind::Jittered, n, d, seed.substream(&[0, r as u64]))?;
            let projected = s.project(&coords)?;
            let mut rng = seed.substream(&[1, r as u64]).rng();
            let probe: Vec<f64> = (0..d_proj).map(|_| rng.random::<f64>()).collect();
            min_distance(&probe, projected.points())
        })
        .collect::<Result<Vec<f64>>>()?;
    let (estimate, stderr) = quantile_with_stderr(&distances, 1.0 - delta);
    let bound = projected_jittered_bound(n, d_proj, delta);
    let rule = PassRule::AtMostBoundPlus3Se;
    let mut p = params(&[("n", n), ("d", d), ("d_proj", d_proj), ("replicas", replicas)], seed);
    p.insert(3, ("delta".into(), delta.to_string()));
    Ok(BoundCheckReport {
        name: "projected_jittered".into(),
        params: p,
        estimate,
        stderr,
        bound,
        rule,
        verdict: rule.judge(estimate, stderr, bound),
        extras: vec![("unit_ball_volume".into(), unit_ball_volume(d_proj))],
    })
}

/// Sample size below which Gaussian search loses to the centre point:
/// `1/2 (exp(1/2) / 2)^(-d/2)`.
pub fn middle_point_threshold(d: usize) -> f64 {
    0.5 * (0.5 * 0.5f64.exp()).powf(-(d as f64) / 2.0)
}

/// Median distance from a standard normal optimum to the nearest of `n`
/// standard normal points, against the median distance to the origin.
///
/// The claim is asserted only when `n` is below [`middle_point_threshold`].
pub fn check_middle_point_theorem(n: usize, d: usize, replicas: usize, seed: RngSeed) -> Result<BoundCheckReport> {
    if n == 0 || d == 0 || replicas == 0 {
        return Err(invalid("n, d and replica count must be >= 1"));
    }
    let draws = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = seed.substream(&[r as u64]).rng();
            let mut normal = || -> f64 { rng.sample(StandardNormal) };
            let optimum: Vec<f64> = (0..d).map(|_| normal()).collect();
            let points: Vec<f64> = (0..n * d).map(|_| normal()).collect();
            let nearest = min_distance(&optimum, points.chunks_exact(d))?;
            let sq_norm: f64 = optimum.iter().map(|x| x * x).sum();
            Ok((nearest, sq_norm))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let nearest: Vec<f64> = draws.iter().map(|&(m, _)| m).collect();
    let norms: Vec<f64> = draws.iter().map(|&(_, s)| s.sqrt()).collect();
    let sq_norms: Vec<f64> = draws.iter().map(|&(_, s)| s).collect();
    let (median_norm, stderr) = quantile_with_stderr(&norms, 0.5);
    let median_nearest = median(&nearest);
    let threshold = middle_point_threshold(d);
    let rule = PassRule::StrictlyBelowBound;
    let verdict = if (n as f64) < threshold {
        rule.judge(median_norm, stderr, median_nearest)
    } else {
        Verdict::NotAsserted
    };
    Ok(BoundCheckReport {
        name: "middle_point_theorem".into(),
        params: params(&[("n", n), ("d", d), ("replicas", replicas)], seed),
        estimate: median_norm,
        stderr,
        bound: median_nearest,
        rule,
        verdict,
        extras: vec![
            ("median_sq_norm_over_d".into(), median(&sq_norms) / d as f64),
            ("median_sq_norm".into(), median(&sq_norms)),
            ("n_threshold".into(), threshold),
        ],
    })
}

fn params(values: &[(&str, usize)], seed: RngSeed) -> Vec<(String, String)> {
    values
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .chain(std::iter::once(("seed".to_string(), seed.value().to_string())))
        .collect()
}

/// Every bound check at its reference parameters, one report per bound.
///
/// `replicas` overrides the per-check replica counts when given.
pub fn default_bound_suite(seed: RngSeed, replicas: Option<usize>) -> Result<Vec<BoundCheckReport>> {
    Ok(vec![
        check_lhs_corner_bound(64, 4, 3, replicas.unwrap_or(10_000), seed.substream(&[0]))?,
        check_projected_jittered(81, 4, 2, 0.1, replicas.unwrap_or(10_000), seed.substream(&[1]))?,
        check_middle_point_theorem(30, 100, replicas.unwrap_or(1_000), seed.substream(&[2]))?,
    ])
}
