//! Sample quality measures and numerical checks of dispersion bounds.

mod bounds;
mod stats;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::method::SamplerSpec;
use crate::rng::RngSeed;
use crate::sequence::{scramble, SequenceKind, UnitSample};

pub use bounds::{
    check_lhs_corner_bound, check_middle_point_theorem, check_projected_jittered, default_bound_suite,
    lhs_corner_bound, middle_point_threshold, projected_jittered_bound, unit_ball_volume, BoundCheckReport,
    PassRule, Verdict,
};
pub use stats::{mean_and_stderr, median, quantile, quantile_with_stderr};

/// Largest sample size accepted by the exact discrepancy enumeration.
pub const EXACT_MAX_POINTS: usize = 256;
/// Largest dimension accepted by the exact discrepancy enumeration.
pub const EXACT_MAX_DIM: usize = 3;
/// Fewest random boxes a Monte-Carlo discrepancy estimate may use.
pub const MIN_MC_BOXES: usize = 100_000;
/// Default probe count for stochastic dispersion.
pub const DEFAULT_PROBES: usize = 512;

/// Euclidean distance from `x_star` to the nearest point.
pub fn min_distance<'a>(x_star: &[f64], points: impl IntoIterator<Item = &'a [f64]>) -> Result<f64> {
    let mut best: Option<f64> = None;
    for p in points {
        if p.len() != x_star.len() {
            return Err(invalid(format!(
                "point of dimension {} compared with target of dimension {}",
                p.len(),
                x_star.len()
            )));
        }
        let sq: f64 = p.iter().zip(x_star).map(|(a, b)| (a - b) * (a - b)).sum();
        best = Some(best.map_or(sq, |b| b.min(sq)));
    }
    best.map(f64::sqrt)
        .ok_or_else(|| invalid("min_distance over an empty sample"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionEstimate {
    /// Max over probes of the replica-averaged nearest-point distance.
    pub value: f64,
    /// Standard error of the replica average at the maximising probe.
    pub stderr: f64,
    pub probes: usize,
    pub replicas: usize,
}

/// Stochastic dispersion `sup_x E min_i |x_i - x|`, with the supremum
/// taken over a scrambled-Hammersley probe set.
pub fn stochastic_dispersion(
    sampler: &SamplerSpec,
    n: usize,
    d: usize,
    replicas: usize,
    probe_count: usize,
    seed: RngSeed,
) -> Result<DispersionEstimate> {
    if replicas < 30 {
        return Err(invalid(format!("stochastic dispersion needs >= 30 replicas, got {replicas}")));
    }
    if probe_count < 100 {
        return Err(invalid(format!("stochastic dispersion needs >= 100 probes, got {probe_count}")));
    }
    let probes = scramble(SequenceKind::Hammersley, probe_count, d, seed.substream(&[0]))?;
    stochastic_dispersion_with_probes(sampler, n, d, replicas, &probes, seed)
}

/// Same as [`stochastic_dispersion`] with a caller-supplied probe set.
pub fn stochastic_dispersion_with_probes(
    sampler: &SamplerSpec,
    n: usize,
    d: usize,
    replicas: usize,
    probes: &UnitSample,
    seed: RngSeed,
) -> Result<DispersionEstimate> {
    if replicas == 0 {
        return Err(invalid("stochastic dispersion needs at least one replica"));
    }
    if probes.dim() != d {
        return Err(invalid("probe dimension differs from sample dimension"));
    }
    let per_replica: Vec<Vec<f64>> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let sample = sampler.generate_cube(n, d, seed.substream(&[1, r as u64]))?;
            probes.points().map(|x| min_distance(x, sample.points())).collect()
        })
        .collect::<Result<_>>()?;

    let mut best = (f64::NEG_INFINITY, 0.0);
    for j in 0..probes.len() {
        let values: Vec<f64> = per_replica.iter().map(|row| row[j]).collect();
        let (mean, se) = mean_and_stderr(&values);
        if mean > best.0 {
            best = (mean, se);
        }
    }
    Ok(DispersionEstimate {
        value: best.0,
        stderr: best.1,
        probes: probes.len(),
        replicas,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiscrepancyMethod {
    /// Enumerates every anchored box with corners on the sample's coordinate grid.
    ExactSmall,
    /// Max deviation over random anchored boxes; a lower bound on the truth.
    MonteCarlo { boxes: usize, seed: RngSeed },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyEstimate {
    pub value: f64,
    pub method: DiscrepancyMethod,
    pub boxes: usize,
}

/// Star discrepancy: sup over boxes `[0, b)` of `|vol(b) - #{x in box}/n|`.
pub fn star_discrepancy(sample: &UnitSample, method: DiscrepancyMethod) -> Result<DiscrepancyEstimate> {
    match method {
        DiscrepancyMethod::ExactSmall => {
            if sample.dim() > EXACT_MAX_DIM || sample.len() > EXACT_MAX_POINTS {
                return Err(invalid(format!(
                    "exact discrepancy is limited to d <= {EXACT_MAX_DIM} and n <= {EXACT_MAX_POINTS}, got {}x{}",
                    sample.len(),
                    sample.dim()
                )));
            }
            let (value, boxes) = exact_star_discrepancy(sample);
            Ok(DiscrepancyEstimate { value, method, boxes })
        }
        DiscrepancyMethod::MonteCarlo { boxes, seed } => {
            if boxes < MIN_MC_BOXES {
                return Err(invalid(format!(
                    "Monte-Carlo discrepancy needs >= {MIN_MC_BOXES} boxes, got {boxes}"
                )));
            }
            let value = monte_carlo_star_discrepancy(sample, boxes, seed);
            Ok(DiscrepancyEstimate { value, method, boxes })
        }
    }
}

fn monte_carlo_star_discrepancy(sample: &UnitSample, boxes: usize, seed: RngSeed) -> f64 {
    let d = sample.dim();
    let n = sample.len() as f64;
    let mut rng = seed.rng();
    let corners: Vec<f64> = (0..boxes * d).map(|_| rng.random::<f64>()).collect();
    corners
        .par_chunks_exact(d)
        .map(|b| {
            let volume: f64 = b.iter().product();
            let inside = sample
                .points()
                .filter(|p| p.iter().zip(b).all(|(x, c)| x < c))
                .count();
            (volume - inside as f64 / n).abs()
        })
        .reduce(|| 0.0, f64::max)
}

/// Sweeps the last coordinate for every corner choice on the other axes.
///
/// Uses `D* = max_b max(vol(b) - open(b)/n, closed(b)/n - vol(b))` over the
/// grid `{x_ij} U {1}`, where `open` counts points strictly inside and
/// `closed` counts points in the closed box.
fn exact_star_discrepancy(sample: &UnitSample) -> (f64, usize) {
    let d = sample.dim();
    let n = sample.len();
    let last = d - 1;
    let grids: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            let mut g: Vec<f64> = sample.column(j).collect();
            g.push(1.0);
            g.sort_by(f64::total_cmp);
            g.dedup();
            g
        })
        .collect();
    let mut by_last: Vec<&[f64]> = sample.points().collect();
    by_last.sort_by(|a, b| a[last].total_cmp(&b[last]));

    let mut worst: f64 = 0.0;
    let mut boxes = 0usize;
    let mut corner = vec![0usize; last];
    let mut open_last = Vec::with_capacity(n);
    let mut closed_last = Vec::with_capacity(n);
    loop {
        let b: Vec<f64> = corner.iter().enumerate().map(|(j, &k)| grids[j][k]).collect();
        let partial_volume: f64 = b.iter().product();
        open_last.clear();
        closed_last.clear();
        for p in &by_last {
            if p[..last].iter().zip(&b).all(|(x, c)| x < c) {
                open_last.push(p[last]);
            }
            if p[..last].iter().zip(&b).all(|(x, c)| x <= c) {
                closed_last.push(p[last]);
            }
        }
        let (mut open, mut closed) = (0usize, 0usize);
        for &t in &grids[last] {
            while open < open_last.len() && open_last[open] < t {
                open += 1;
            }
            while closed < closed_last.len() && closed_last[closed] <= t {
                closed += 1;
            }
            let volume = partial_volume * t;
            worst = worst
                .max(volume - open as f64 / n as f64)
                .max(closed as f64 / n as f64 - volume);
            boxes += 1;
        }
        // advance the corner odometer over the leading axes
        let mut axis = 0;
        loop {
            if axis == last {
                return (worst, boxes);
            }
            corner[axis] += 1;
            if corner[axis] < grids[axis].len() {
                break;
            }
            corner[axis] = 0;
            axis += 1;
        }
    }
}
