//! Reshaping of the search distribution.
//!
//! Unit-cube samples are pulled toward the centre (recentering), pushed
//! toward the faces (rescaling), reflected (opposition), or mapped to `R^d`
//! through a scaled normal or Cauchy quantile. Every inverse-CDF call sees
//! coordinates clamped into `[u_min, 1 - u_min]`.

mod cdf;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::RngSeed;
use crate::sequence::{below_one, UnitSample};

pub use cdf::{cauchy_cdf, cauchy_inv_cdf, normal_cdf, normal_inv_cdf};

/// Default clamp applied before inverse-CDF evaluation.
pub const U_MIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Distribution {
    #[default]
    Normal,
    Cauchy,
}

impl Distribution {
    /// Quantile of the distribution after clamping `u` into `[u_min, 1 - u_min]`.
    pub fn clamped_quantile(self, u: f64, u_min: f64) -> f64 {
        let u = clamp_unit(u, u_min);
        match self {
            Distribution::Normal => cdf::normal_quantile(u),
            Distribution::Cauchy => cdf::cauchy_quantile(u),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Target {
    #[default]
    UnitCube,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Opposition {
    #[default]
    None,
    Opposite,
    QuasiOpposite,
}

/// Recentering scale: a constant, or derived from budget and dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Lambda {
    Fixed(f64),
    Meta,
}

impl Default for Lambda {
    fn default() -> Self {
        Lambda::Fixed(1.0)
    }
}

impl Lambda {
    pub fn resolve(self, budget: usize, dimension: usize) -> Result<f64> {
        match self {
            Lambda::Fixed(l) => Ok(l),
            Lambda::Meta => meta_lambda(budget as f64, dimension as f64),
        }
    }
}

/// How a unit-cube base sample is turned into search points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReshapeSpec {
    pub distribution: Distribution,
    pub lambda: Lambda,
    pub target: Target,
    pub middle_point: bool,
    pub opposition: Opposition,
    pub rescale: bool,
    pub u_min: f64,
}

impl Default for ReshapeSpec {
    fn default() -> Self {
        Self {
            distribution: Distribution::Normal,
            lambda: Lambda::default(),
            target: Target::UnitCube,
            middle_point: false,
            opposition: Opposition::None,
            rescale: false,
            u_min: U_MIN,
        }
    }
}

impl ReshapeSpec {
    pub fn validate(&self) -> Result<()> {
        if let Lambda::Fixed(l) = self.lambda {
            if !l.is_finite() || l < 0.0 {
                return Err(invalid(format!("lambda must be finite and >= 0, got {l}")));
            }
            if l == 0.0 && self.target == Target::Unbounded {
                return Err(invalid("lambda = 0 is only meaningful in the unit cube"));
            }
        }
        if self.rescale && self.target == Target::Unbounded {
            return Err(invalid("rescaling to the bounds cannot target unbounded space"));
        }
        if !(self.u_min > 0.0 && self.u_min < 0.5) {
            return Err(invalid(format!("u_min must lie in (0, 0.5), got {}", self.u_min)));
        }
        Ok(())
    }

    /// Whether recentering in the cube changes anything.
    pub(crate) fn recenters(&self, lambda: f64) -> bool {
        self.distribution == Distribution::Cauchy || lambda != 1.0
    }
}

/// Points of `R^d`, all finite.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSample {
    n: usize,
    d: usize,
    data: Vec<f64>,
    /// Canonical name of the method that produced the sample, if known.
    pub provenance: Option<String>,
}

impl RealSample {
    pub fn new(n: usize, d: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || d == 0 || data.len() != n * d {
            return Err(invalid(format!("{} values do not form a {n}x{d} sample", data.len())));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric("non-finite coordinate in real sample".into()));
        }
        Ok(Self {
            n,
            d,
            data,
            provenance: None,
        })
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

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.points().map(<[f64]>::to_vec).collect()
    }

    pub fn with_provenance(mut self, name: impl Into<String>) -> Self {
        self.provenance = Some(name.into());
        self
    }
}

pub fn clamp_unit(u: f64, u_min: f64) -> f64 {
    u.clamp(u_min, 1.0 - u_min)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("lambda must be finite and >= 0, got {lambda}")))
    }
}

/// `u -> g(lambda * F^-1(u))` coordinate-wise, with `g` the standard normal
/// CDF and `F` the chosen distribution.
pub fn recenter(sample: &UnitSample, lambda: f64, distribution: Distribution) -> Result<UnitSample> {
    recenter_clamped(sample, lambda, distribution, U_MIN)
}

pub fn recenter_clamped(
    sample: &UnitSample,
    lambda: f64,
    distribution: Distribution,
    u_min: f64,
) -> Result<UnitSample> {
    check_lambda(lambda)?;
    let data = sample
        .as_slice()
        .iter()
        .map(|&u| {
            let z = lambda * distribution.clamped_quantile(u, u_min);
            clamp_unit(normal_cdf(z), u_min)
        })
        .collect();
    Ok(UnitSample::from_raw(sample.len(), sample.dim(), data))
}

/// Recentering scale `(1 + ln budget) / (4 ln dimension)`.
pub fn meta_lambda(budget: f64, dimension: f64) -> Result<f64> {
    if dimension.is_nan() || dimension < 2.0 {
        return Err(Error::MetaLambdaDimension { dimension });
    }
    if budget.is_nan() || budget < 1.0 {
        return Err(invalid(format!("budget must be >= 1, got {budget}")));
    }
    Ok((1.0 + budget.ln()) / (4.0 * dimension.ln()))
}

/// `u -> lambda * F^-1(u)` coordinate-wise.
pub fn convert_unbounded(sample: &UnitSample, lambda: f64, distribution: Distribution) -> Result<RealSample> {
    convert_unbounded_clamped(sample, lambda, distribution, U_MIN)
}

pub fn convert_unbounded_clamped(
    sample: &UnitSample,
    lambda: f64,
    distribution: Distribution,
    u_min: f64,
) -> Result<RealSample> {
    check_lambda(lambda)?;
    let data = sample
        .as_slice()
        .iter()
        .map(|&u| lambda * distribution.clamped_quantile(u, u_min))
        .collect();
    RealSample::new(sample.len(), sample.dim(), data)
}

/// Replaces the first point by the centre of the cube; the size is unchanged.
pub fn add_middle_point(sample: &UnitSample) -> UnitSample {
    let mut out = sample.clone();
    let d = out.dim();
    out.data_mut()[..d].fill(0.5);
    out
}

/// Keeps the first `n/2` points and fills the rest with their (quasi-)opposites.
///
/// Slot `n/2 + i` holds the opposite of point `i`; when `n` is odd the last
/// slot is the centre. Opposite maps `x` to `1 - x`; quasi-opposite maps it
/// to `1/2 + r (1/2 - x)` with a fresh `r ~ U[0, 1)` per point.
pub fn oppose(sample: &UnitSample, mode: Opposition, seed: RngSeed) -> Result<UnitSample> {
    let n = sample.len();
    if n < 2 {
        return Err(invalid("opposition sampling needs n >= 2"));
    }
    let half = n / 2;
    let data = sample.as_slice()[..half * sample.dim()].to_vec();
    let base = UnitSample::from_raw(half, sample.dim(), data);
    complete_with_opposites(&base, n, mode, seed)
}

/// Extends a base sample of `n / 2` points to `n` points by opposition.
pub(crate) fn complete_with_opposites(
    base: &UnitSample,
    n: usize,
    mode: Opposition,
    seed: RngSeed,
) -> Result<UnitSample> {
    let half = n / 2;
    if base.len() != half || half == 0 {
        return Err(invalid(format!(
            "opposition expects {half} base points for n = {n}, got {}",
            base.len()
        )));
    }
    let d = base.dim();
    let mut rng = seed.rng();
    let mut data = Vec::with_capacity(n * d);
    data.extend_from_slice(base.as_slice());
    for p in base.points() {
        match mode {
            Opposition::None => return Err(invalid("no opposition mode selected")),
            Opposition::Opposite => data.extend(p.iter().map(|&x| below_one(1.0 - x))),
            Opposition::QuasiOpposite => {
                let r: f64 = rng.random();
                data.extend(p.iter().map(|&x| below_one(0.5 + r * (0.5 - x))));
            }
        }
    }
    if n % 2 == 1 {
        data.extend(std::iter::repeat_n(0.5, d));
    }
    Ok(UnitSample::from_raw(n, d, data))
}

/// Affine per-column map sending the sample minimum to 0 and maximum to 1,
/// then clamped into `[u_min, 1 - u_min]`.
pub fn rescale_to_bounds(sample: &UnitSample) -> Result<UnitSample> {
    rescale_to_bounds_clamped(sample, U_MIN)
}

pub fn rescale_to_bounds_clamped(sample: &UnitSample, u_min: f64) -> Result<UnitSample> {
    if sample.len() < 2 {
        return Err(invalid("rescaling needs at least two points"));
    }
    let d = sample.dim();
    let mut ranges = Vec::with_capacity(d);
    for j in 0..d {
        let (lo, hi) = sample
            .column(j)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        if hi <= lo {
            return Err(Error::DegenerateColumn { column: j });
        }
        ranges.push((lo, hi - lo));
    }
    let data = sample
        .points()
        .flat_map(|p| {
            p.iter()
                .zip(&ranges)
                .map(|(&x, &(lo, width))| clamp_unit((x - lo) / width, u_min))
        })
        .collect();
    Ok(UnitSample::from_raw(sample.len(), d, data))
}
