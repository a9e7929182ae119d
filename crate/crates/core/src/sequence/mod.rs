//! Raw space-filling point sets in the half-open unit cube.
//!
//! Halton and Sobol start at sequence index 1 so that no point sits on the
//! origin. Hammersley uses indices `0..n`, so its first point has zero
//! radical-inverse coordinates.

mod radical;
mod sobol;

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::{RngSeed, SampleRng};

pub use radical::{first_primes, radix_inverse, scrambled_radix_inverse};
pub use sobol::max_dimension as sobol_max_dimension;

/// `n` points in `[0, 1)^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSample {
    n: usize,
    d: usize,
    data: Vec<f64>,
}

impl UnitSample {
    pub fn new(n: usize, d: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(invalid(format!("sample shape {n}x{d} must be non-empty")));
        }
        if data.len() != n * d {
            return Err(invalid(format!(
                "{} coordinates do not fill a {n}x{d} sample",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|u| !(0.0..1.0).contains(*u)) {
            return Err(invalid(format!("coordinate {bad} outside [0, 1)")));
        }
        Ok(Self { n, d, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != d) {
            return Err(invalid("rows have different lengths"));
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::new(rows.len(), d, data)
    }

    pub(crate) fn from_raw(n: usize, d: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * d);
        debug_assert!(data.iter().all(|u| (0.0..1.0).contains(u)), "{data:?}");
        Self { n, d, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.d)
    }

    pub fn column(&self, j: usize) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.data.iter().skip(j).step_by(self.d).copied()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_raw(self) -> Vec<f64> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.points().map(<[f64]>::to_vec).collect()
    }

    /// Keeps only the listed coordinates, in the listed order.
    pub fn project(&self, coords: &[usize]) -> Result<UnitSample> {
        if coords.is_empty() {
            return Err(invalid("projection needs at least one coordinate"));
        }
        if let Some(&j) = coords.iter().find(|&&j| j >= self.d) {
            return Err(invalid(format!("coordinate {j} out of range for dimension {}", self.d)));
        }
        let data = self
            .points()
            .flat_map(|p| coords.iter().map(move |&j| p[j]))
            .collect();
        Ok(Self::from_raw(self.n, coords.len(), data))
    }
}

/// Base point-set constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SequenceKind {
    Random,
    Grid,
    #[serde(rename = "LHS")]
    Lhs,
    Jittered,
    Halton,
    Hammersley,
    Sobol,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 7] = [
        SequenceKind::Random,
        SequenceKind::Grid,
        SequenceKind::Lhs,
        SequenceKind::Jittered,
        SequenceKind::Halton,
        SequenceKind::Hammersley,
        SequenceKind::Sobol,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SequenceKind::Random => "Random",
            SequenceKind::Grid => "Grid",
            SequenceKind::Lhs => "LHS",
            SequenceKind::Jittered => "Jittered",
            SequenceKind::Halton => "Halton",
            SequenceKind::Hammersley => "Hammersley",
            SequenceKind::Sobol => "Sobol",
        }
    }

    /// Whether the output depends on the seed.
    pub fn is_randomized(self) -> bool {
        matches!(
            self,
            SequenceKind::Random | SequenceKind::Lhs | SequenceKind::Jittered
        )
    }

    pub fn is_radical_inverse(self) -> bool {
        matches!(self, SequenceKind::Halton | SequenceKind::Hammersley)
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A base construction together with its radical-inverse bases.
///
/// When `primes` is `None` the first primes in ascending order are used.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaseSequenceKind {
    pub kind: SequenceKind,
    pub primes: Option<Vec<u64>>,
}

impl From<SequenceKind> for BaseSequenceKind {
    fn from(kind: SequenceKind) -> Self {
        Self { kind, primes: None }
    }
}

impl BaseSequenceKind {
    pub fn with_primes(kind: SequenceKind, primes: Vec<u64>) -> Self {
        Self {
            kind,
            primes: Some(primes),
        }
    }

    /// Bases for the radical-inverse coordinates of a `d`-dimensional point.
    fn bases(&self, d: usize) -> Result<Vec<u64>> {
        let needed = match self.kind {
            SequenceKind::Halton => d,
            SequenceKind::Hammersley => d - 1,
            _ => 0,
        };
        match &self.primes {
            None => Ok(first_primes(needed)),
            Some(primes) => {
                if primes.len() < needed {
                    return Err(invalid(format!(
                        "{} needs {needed} bases in dimension {d}, {} given",
                        self.kind,
                        primes.len()
                    )));
                }
                let bases = primes[..needed].to_vec();
                radical::check_bases(&bases)?;
                Ok(bases)
            }
        }
    }

    pub fn generate(&self, n: usize, d: usize, seed: RngSeed) -> Result<UnitSample> {
        self.generate_inner(n, d, seed, false)
    }

    /// Halton or Hammersley with one random digit permutation per base.
    ///
    /// Each permutation fixes 0 and is applied to every significant digit of
    /// the index before reversal, so expansions stay finite.
    pub fn generate_scrambled(&self, n: usize, d: usize, seed: RngSeed) -> Result<UnitSample> {
        if !self.kind.is_radical_inverse() {
            return Err(Error::NotScramblable {
                kind: self.kind.name(),
            });
        }
        self.generate_inner(n, d, seed, true)
    }

    fn generate_inner(&self, n: usize, d: usize, seed: RngSeed, scrambled: bool) -> Result<UnitSample> {
        if n == 0 {
            return Err(invalid("sample size n must be >= 1"));
        }
        if d == 0 {
            return Err(invalid("dimension d must be >= 1"));
        }
        let mut rng = seed.rng();
        let data = match self.kind {
            SequenceKind::Random => uniform(&mut rng, n * d),
            SequenceKind::Grid => grid(&mut rng, n, d, false),
            SequenceKind::Jittered => grid(&mut rng, n, d, true),
            SequenceKind::Lhs => lhs(&mut rng, n, d),
            SequenceKind::Sobol => sobol::sobol_points(n, d)?,
            SequenceKind::Halton | SequenceKind::Hammersley => {
                let bases = self.bases(d)?;
                let perms = if scrambled {
                    bases.iter().map(|&p| digit_permutation(&mut rng, p)).collect()
                } else {
                    Vec::new()
                };
                radical_points(self.kind, n, d, &bases, &perms)
            }
        };
        Ok(UnitSample::from_raw(n, d, data))
    }
}

/// Generates `n` points of `kind` in dimension `d` with default bases.
pub fn gen_base(kind: SequenceKind, n: usize, d: usize, seed: RngSeed) -> Result<UnitSample> {
    BaseSequenceKind::from(kind).generate(n, d, seed)
}

/// Scrambled Halton or Hammersley with default bases.
pub fn scramble(kind: SequenceKind, n: usize, d: usize, seed: RngSeed) -> Result<UnitSample> {
    BaseSequenceKind::from(kind).generate_scrambled(n, d, seed)
}

/// Adds one uniform shift vector to every point, modulo 1.
pub fn random_shift(sample: &UnitSample, seed: RngSeed) -> UnitSample {
    let mut rng = seed.rng();
    let shift: Vec<f64> = (0..sample.dim()).map(|_| rng.random::<f64>()).collect();
    shift_by(sample, &shift)
}

/// Translation on the torus by a fixed vector.
pub fn shift_by(sample: &UnitSample, shift: &[f64]) -> UnitSample {
    assert_eq!(shift.len(), sample.dim(), "shift vector dimension");
    let data = sample
        .points()
        .flat_map(|p| p.iter().zip(shift).map(|(&x, &v)| wrap_unit(x + v)))
        .collect();
    UnitSample::from_raw(sample.len(), sample.dim(), data)
}

fn wrap_unit(x: f64) -> f64 {
    let y = x - x.floor();
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

/// Largest `f64` strictly below 1 when `x` rounded up to 1.
pub(crate) fn below_one(x: f64) -> f64 {
    if x >= 1.0 {
        ONE_MINUS_ULP
    } else {
        x
    }
}

pub(crate) const ONE_MINUS_ULP: f64 = 1.0 - f64::EPSILON / 2.0;

fn uniform(rng: &mut SampleRng, count: usize) -> Vec<f64> {
    (0..count).map(|_| rng.random::<f64>()).collect()
}

/// A point of the stratum `[cell/k, (cell+1)/k)`, offset by `r` in `[0, 1)`.
///
/// The result is pinned inside the float boundaries of the stratum so that
/// rounding can never push it into a neighbour.
pub(crate) fn in_stratum(cell: usize, r: f64, k: usize) -> f64 {
    let k = k as f64;
    let lo = cell as f64 / k;
    let hi = (cell + 1) as f64 / k;
    let x = (cell as f64 + r) / k;
    x.max(lo).min(f64::from_bits(hi.to_bits() - 1))
}

/// Largest `k` with `k^d <= n`.
pub(crate) fn cells_per_axis(n: usize, d: usize) -> usize {
    let fits = |k: usize| {
        u32::try_from(d)
            .ok()
            .and_then(|d| k.checked_pow(d))
            .is_some_and(|v| v <= n)
    };
    let mut k = (n as f64).powf(1.0 / d as f64).floor().max(1.0) as usize;
    while k > 1 && !fits(k) {
        k -= 1;
    }
    while fits(k + 1) {
        k += 1;
    }
    k
}

fn grid(rng: &mut SampleRng, n: usize, d: usize, jitter: bool) -> Vec<f64> {
    let k = cells_per_axis(n, d);
    let cells = k.pow(d as u32);
    let mut data = Vec::with_capacity(n * d);
    let mut digits = vec![0usize; d];
    for _ in 0..cells {
        for &c in &digits {
            let r = if jitter { rng.random::<f64>() } else { 0.5 };
            data.push(in_stratum(c, r, k));
        }
        // odometer with the first coordinate most significant
        for digit in digits.iter_mut().rev() {
            *digit += 1;
            if *digit < k {
                break;
            }
            *digit = 0;
        }
    }
    data.extend(uniform(rng, (n - cells) * d));
    data
}

fn lhs(rng: &mut SampleRng, n: usize, d: usize) -> Vec<f64> {
    let mut data = vec![0.0; n * d];
    let mut perm: Vec<usize> = (0..n).collect();
    for j in 0..d {
        perm.shuffle(rng);
        for (i, &cell) in perm.iter().enumerate() {
            data[i * d + j] = in_stratum(cell, rng.random::<f64>(), n);
        }
    }
    data
}

fn digit_permutation(rng: &mut SampleRng, base: u64) -> Vec<u64> {
    let mut perm: Vec<u64> = (0..base).collect();
    perm[1..].shuffle(rng);
    perm
}

fn radical_points(kind: SequenceKind, n: usize, d: usize, bases: &[u64], perms: &[Vec<u64>]) -> Vec<f64> {
    let perm = |j: usize| perms.get(j).map(Vec::as_slice);
    let mut data = Vec::with_capacity(n * d);
    for i in 0..n {
        match kind {
            SequenceKind::Halton => {
                let index = i as u64 + 1;
                for (j, &p) in bases.iter().enumerate() {
                    data.push(radical::permuted_radix_inverse(index, p, perm(j)));
                }
            }
            SequenceKind::Hammersley => {
                data.push((i as f64 + 0.5) / n as f64);
                for (j, &p) in bases.iter().enumerate() {
                    data.push(radical::permuted_radix_inverse(i as u64, p, perm(j)));
                }
            }
            _ => unreachable!("not a radical-inverse kind"),
        }
    }
    data
}

#[cfg(test)]
mod tests {
    use super::*;

    const SEED: RngSeed = RngSeed(20190101);

    #[test]
    fn grid_example() {
        let s = gen_base(SequenceKind::Grid, 4, 2, SEED).unwrap();
        assert_eq!(
            s.to_rows(),
            vec![
                vec![0.25, 0.25],
                vec![0.25, 0.75],
                vec![0.75, 0.25],
                vec![0.75, 0.75]
            ]
        );
    }

    #[test]
    fn grid_remainder_is_random() {
        let a = gen_base(SequenceKind::Grid, 6, 2, SEED).unwrap();
        let b = gen_base(SequenceKind::Grid, 6, 2, RngSeed(1)).unwrap();
        assert_eq!(a.point(0), b.point(0));
        assert_eq!(a.point(3), b.point(3));
        assert_ne!(a.point(4), b.point(4));
        // k = 1 in high dimension: the single cell centre then random fill
        let c = gen_base(SequenceKind::Grid, 3, 10, SEED).unwrap();
        assert!(c.point(0).iter().all(|&u| u == 0.5));
    }

    #[test]
    fn hammersley_first_coordinate() {
        let s = gen_base(SequenceKind::Hammersley, 4, 1, SEED).unwrap();
        assert_eq!(s.column(0).collect::<Vec<_>>(), vec![0.125, 0.375, 0.625, 0.875]);
        let s = gen_base(SequenceKind::Hammersley, 4, 3, SEED).unwrap();
        assert_eq!(s.point(0), &[0.125, 0.0, 0.0]);
        assert_eq!(s.point(3), &[0.875, 0.75, 1.0 / 9.0]);
    }

    #[test]
    fn halton_example() {
        let s = gen_base(SequenceKind::Halton, 3, 2, SEED).unwrap();
        assert_eq!(
            s.to_rows(),
            vec![
                vec![0.5, 1.0 / 3.0],
                vec![0.25, 2.0 / 3.0],
                vec![0.75, 1.0 / 9.0]
            ]
        );
    }

    #[test]
    fn custom_primes() {
        let kind = BaseSequenceKind::with_primes(SequenceKind::Halton, vec![3, 2]);
        let s = kind.generate(1, 2, SEED).unwrap();
        assert_eq!(s.point(0), &[1.0 / 3.0, 0.5]);
        let bad = BaseSequenceKind::with_primes(SequenceKind::Halton, vec![2, 4]);
        assert!(bad.generate(2, 2, SEED).is_err());
        let short = BaseSequenceKind::with_primes(SequenceKind::Halton, vec![2]);
        assert!(short.generate(2, 2, SEED).is_err());
    }

    #[test]
    fn deterministic_kinds_ignore_seed() {
        for kind in SequenceKind::ALL {
            let a = gen_base(kind, 27, 3, RngSeed(1)).unwrap();
            let b = gen_base(kind, 27, 3, RngSeed(2)).unwrap();
            let a2 = gen_base(kind, 27, 3, RngSeed(1)).unwrap();
            assert_eq!(a, a2, "{kind}");
            assert_eq!(a == b, !kind.is_randomized(), "{kind}");
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(gen_base(SequenceKind::Random, 0, 2, SEED).is_err());
        assert!(gen_base(SequenceKind::Random, 2, 0, SEED).is_err());
        assert!(matches!(
            gen_base(SequenceKind::Sobol, 2, 5000, SEED),
            Err(Error::SobolDimension { .. })
        ));
    }

    #[test]
    fn scrambling_base_two_is_identity() {
        let plain = gen_base(SequenceKind::Halton, 50, 3, SEED).unwrap();
        let scr = scramble(SequenceKind::Halton, 50, 3, SEED).unwrap();
        assert_eq!(plain.column(0).collect::<Vec<_>>(), scr.column(0).collect::<Vec<_>>());
        assert_ne!(plain.column(2).collect::<Vec<_>>(), scr.column(2).collect::<Vec<_>>());
        // Hammersley: first coordinate untouched, second coordinate is base 2
        let plain = gen_base(SequenceKind::Hammersley, 50, 2, SEED).unwrap();
        let scr = scramble(SequenceKind::Hammersley, 50, 2, SEED).unwrap();
        assert_eq!(plain, scr);
    }

    #[test]
    fn scrambling_rejects_other_kinds() {
        for kind in [SequenceKind::Sobol, SequenceKind::Lhs, SequenceKind::Random] {
            assert!(matches!(scramble(kind, 4, 2, SEED), Err(Error::NotScramblable { .. })));
        }
    }

    #[test]
    fn shift_wraps() {
        let s = UnitSample::from_rows(&[[0.7]]).unwrap();
        assert_eq!(shift_by(&s, &[0.5]).point(0), &[0.7 + 0.5 - 1.0]);
        assert_eq!(shift_by(&s, &[0.0]), s);
        let t = UnitSample::from_rows(&[[ONE_MINUS_ULP]]).unwrap();
        assert_eq!(shift_by(&t, &[ONE_MINUS_ULP]).point(0)[0], 1.0 - f64::EPSILON);
    }

    #[test]
    fn cells_per_axis_cases() {
        assert_eq!(cells_per_axis(4, 2), 2);
        assert_eq!(cells_per_axis(8, 2), 2);
        assert_eq!(cells_per_axis(9, 2), 3);
        assert_eq!(cells_per_axis(81, 4), 3);
        assert_eq!(cells_per_axis(1000, 3), 10);
        assert_eq!(cells_per_axis(5, 600), 1);
        assert_eq!(cells_per_axis(7, 1), 7);
    }

    #[test]
    fn stratum_pinning() {
        let x = in_stratum(4, ONE_MINUS_ULP, 7);
        assert!((4.0 / 7.0..5.0 / 7.0).contains(&x));
        assert_eq!(in_stratum(0, 0.0, 3), 0.0);
    }

    #[test]
    fn unit_sample_validation() {
        assert!(UnitSample::new(1, 2, vec![0.1, 1.0]).is_err());
        assert!(UnitSample::new(1, 2, vec![0.1, -0.0]).is_ok());
        assert!(UnitSample::new(1, 2, vec![0.1, f64::NAN]).is_err());
        assert!(UnitSample::new(2, 2, vec![0.1, 0.2]).is_err());
        assert!(UnitSample::from_rows(&[vec![0.1], vec![0.1, 0.2]]).is_err());
        let s = UnitSample::from_rows(&[[0.1, 0.2, 0.3]]).unwrap();
        assert_eq!(s.project(&[2, 0]).unwrap().point(0), &[0.3, 0.1]);
        assert!(s.project(&[3]).is_err());
    }
}
