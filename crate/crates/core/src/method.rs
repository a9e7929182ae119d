//! Sampler pipelines and their compact names.
//!
//! A name such as `CauchyORctg0.55ScrHammersleyPlusMiddlePoint` reads left
//! to right as
//!
//! ```text
//! [Cauchy] [O|QO] [Rctg<float>|MetaRctg] [Rescale] [Shift][Scr]<Kind> [PlusMiddlePoint]
//! ```
//!
//! with `<Kind>` one of `Random`, `Grid`, `LHS`, `Jittered`, `Halton`,
//! `Hammersley`, `Sobol`. A bare `MetaRctg` defaults to scrambled
//! Hammersley. Spaced spellings such as `Cchy Rctg.55 Scr Hmsley` are
//! normalised before parsing.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::reshaping::{
    complete_with_opposites, convert_unbounded_clamped, recenter_clamped, rescale_to_bounds_clamped,
    Distribution, Lambda, Opposition, RealSample, ReshapeSpec, Target,
};
use crate::rng::RngSeed;
use crate::sequence::{random_shift, BaseSequenceKind, SequenceKind, UnitSample};

const BASE_STREAM: u64 = 0;
const SHIFT_STREAM: u64 = 1;
const OPPOSITION_STREAM: u64 = 2;

/// Method names used by default in benchmarks.
pub const DEFAULT_METHODS: &[&str] = &[
    "Random",
    "RandomPlusMiddlePoint",
    "LHS",
    "ScrHalton",
    "ScrHammersley",
    "ScrHammersleyPlusMiddlePoint",
    "Rctg0.4ScrHammersley",
    "Rctg0.7ScrHalton",
    "ORctg0.7ScrHalton",
    "QORctg0.4ScrHammersley",
    "MetaRctgScrHammersley",
    "CauchyRctg0.55ScrHammersley",
    "CauchyMetaRctgScrHammersley",
];

/// A complete sampling pipeline: base sequence, sequence modifiers and
/// distribution reshaping.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerSpec {
    pub base: BaseSequenceKind,
    pub scrambled: bool,
    pub shifted: bool,
    pub reshape: ReshapeSpec,
}

/// Output of a pipeline, in the space its target asks for.
#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    Cube(UnitSample),
    Real(RealSample),
}

impl Sample {
    pub fn len(&self) -> usize {
        match self {
            Sample::Cube(s) => s.len(),
            Sample::Real(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        match self {
            Sample::Cube(s) => s.dim(),
            Sample::Real(s) => s.dim(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        match self {
            Sample::Cube(s) => s.to_rows(),
            Sample::Real(s) => s.to_rows(),
        }
    }
}

impl From<SequenceKind> for SamplerSpec {
    fn from(kind: SequenceKind) -> Self {
        Self {
            base: kind.into(),
            scrambled: false,
            shifted: false,
            reshape: ReshapeSpec::default(),
        }
    }
}

impl SamplerSpec {
    pub fn parse(name: &str) -> Result<Self> {
        parse_method_spec(name)
    }

    pub fn with_target(mut self, target: Target) -> Self {
        self.reshape.target = target;
        self
    }

    pub fn target(&self) -> Target {
        self.reshape.target
    }

    pub fn validate(&self) -> Result<()> {
        if self.scrambled && !self.base.kind.is_radical_inverse() {
            return Err(Error::NotScramblable {
                kind: self.base.kind.name(),
            });
        }
        self.reshape.validate()
    }

    pub fn canonical_name(&self) -> String {
        let r = &self.reshape;
        let mut name = String::new();
        if r.distribution == Distribution::Cauchy {
            name.push_str("Cauchy");
        }
        match r.opposition {
            Opposition::None => {}
            Opposition::Opposite => name.push('O'),
            Opposition::QuasiOpposite => name.push_str("QO"),
        }
        match r.lambda {
            Lambda::Meta => name.push_str("MetaRctg"),
            Lambda::Fixed(l) if l != 1.0 => name.push_str(&format!("Rctg{l}")),
            Lambda::Fixed(_) => {}
        }
        if r.rescale {
            name.push_str("Rescale");
        }
        if self.shifted {
            name.push_str("Shift");
        }
        if self.scrambled {
            name.push_str("Scr");
        }
        name.push_str(self.base.kind.name());
        if r.middle_point {
            name.push_str("PlusMiddlePoint");
        }
        name
    }

    /// The pipeline up to, and including, every unit-cube step.
    ///
    /// For an unbounded target this stops before the quantile conversion.
    pub fn sample_cube(&self, n: usize, d: usize, seed: RngSeed) -> Result<UnitSample> {
        self.validate()?;
        let r = &self.reshape;
        if n == 0 {
            return Err(invalid("sample size n must be >= 1"));
        }
        let base_n = match r.opposition {
            Opposition::None => n,
            _ if n < 2 => return Err(invalid("opposition sampling needs n >= 2")),
            _ => n / 2,
        };
        let base_seed = seed.substream(&[BASE_STREAM]);
        let mut sample = if self.scrambled {
            self.base.generate_scrambled(base_n, d, base_seed)?
        } else {
            self.base.generate(base_n, d, base_seed)?
        };
        if self.shifted {
            sample = random_shift(&sample, seed.substream(&[SHIFT_STREAM]));
        }
        if r.opposition != Opposition::None {
            sample = complete_with_opposites(&sample, n, r.opposition, seed.substream(&[OPPOSITION_STREAM]))?;
        }
        if r.rescale {
            sample = rescale_to_bounds_clamped(&sample, r.u_min)?;
        }
        if r.target == Target::UnitCube {
            let lambda = r.lambda.resolve(n, d)?;
            if r.recenters(lambda) {
                sample = recenter_clamped(&sample, lambda, r.distribution, r.u_min)?;
            }
        }
        if r.middle_point {
            sample = crate::reshaping::add_middle_point(&sample);
        }
        Ok(sample)
    }

    pub fn generate(&self, n: usize, d: usize, seed: RngSeed) -> Result<Sample> {
        let cube = self.sample_cube(n, d, seed)?;
        match self.reshape.target {
            Target::UnitCube => Ok(Sample::Cube(cube)),
            Target::Unbounded => {
                let lambda = self.reshape.lambda.resolve(n, d)?;
                let real = convert_unbounded_clamped(&cube, lambda, self.reshape.distribution, self.reshape.u_min)?;
                Ok(Sample::Real(real.with_provenance(self.canonical_name())))
            }
        }
    }

    /// Generates in `R^d` regardless of the configured target.
    pub fn generate_unbounded(&self, n: usize, d: usize, seed: RngSeed) -> Result<RealSample> {
        match self.clone().with_target(Target::Unbounded).generate(n, d, seed)? {
            Sample::Real(r) => Ok(r),
            Sample::Cube(_) => unreachable!("unbounded target yields real points"),
        }
    }

    /// Generates in the unit cube regardless of the configured target.
    pub fn generate_cube(&self, n: usize, d: usize, seed: RngSeed) -> Result<UnitSample> {
        self.clone().with_target(Target::UnitCube).sample_cube(n, d, seed)
    }
}

impl fmt::Display for SamplerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_name())
    }
}

impl FromStr for SamplerSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_method_spec(s)
    }
}

/// Rewrites spaced and abbreviated spellings into the compact grammar.
pub fn normalize_method_name(name: &str) -> String {
    let mut s: String = name
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '-' && *c != '_')
        .collect();
    s = s.replace("Cchy", "Cauchy");
    for abbrev in ["Hmsley", "Hmsly"] {
        s = s.replace(abbrev, "Hammersley");
    }
    for abbrev in ["Ctrng", "Cntrg", "Ctrg"] {
        while let Some(pos) = s.find(abbrev) {
            let after = &s[pos + abbrev.len()..];
            let digits: String = after.chars().take_while(|c| c.is_ascii_digit() || *c == '.').collect();
            // "Ctrg12" means 1.2 and "Ctrg4" means 0.4
            let value = if digits.is_empty() || digits.contains('.') {
                digits.clone()
            } else if digits.len() == 1 {
                format!("0.{digits}")
            } else {
                format!("{}.{}", &digits[..1], &digits[1..])
            };
            s = format!("{}Rctg{}{}", &s[..pos], value, &after[digits.len()..]);
        }
    }
    s = s.replace("Rctg.", "Rctg0.");
    s = s.replace("MetaCauchyRctg", "CauchyMetaRctg");
    s
}

/// Parses a compact method name into a pipeline with a unit-cube target.
pub fn parse_method_spec(name: &str) -> Result<SamplerSpec> {
    let normalized = normalize_method_name(name);
    let mut rest = normalized.as_str();
    let mut reshape = ReshapeSpec::default();
    let mut consumed = String::new();

    let eat = |rest: &mut &str, token: &str, consumed: &mut String| -> bool {
        match rest.strip_prefix(token) {
            Some(r) => {
                *rest = r;
                consumed.push_str(token);
                true
            }
            None => false,
        }
    };

    if eat(&mut rest, "Cauchy", &mut consumed) {
        reshape.distribution = Distribution::Cauchy;
    }
    if eat(&mut rest, "QO", &mut consumed) {
        reshape.opposition = Opposition::QuasiOpposite;
    } else if eat(&mut rest, "O", &mut consumed) {
        reshape.opposition = Opposition::Opposite;
    }
    if eat(&mut rest, "MetaRctg", &mut consumed) {
        reshape.lambda = Lambda::Meta;
    } else if eat(&mut rest, "Rctg", &mut consumed) {
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit() || *c == '.').collect();
        let lambda = digits.parse::<f64>().ok().filter(|l| l.is_finite() && *l >= 0.0);
        let Some(lambda) = lambda else {
            return Err(unknown(
                name,
                format!("Rctg must be followed by a non-negative number, found `{digits}`"),
                format!("{consumed}0.5{}", nearest_base(&rest[digits.len()..], false)),
            ));
        };
        rest = &rest[digits.len()..];
        consumed.push_str(&digits);
        reshape.lambda = Lambda::Fixed(lambda);
    }
    if eat(&mut rest, "Rescale", &mut consumed) {
        reshape.rescale = true;
    }
    if let Some(r) = rest.strip_suffix("PlusMiddlePoint") {
        rest = r;
        reshape.middle_point = true;
    }
    let suffix = if reshape.middle_point { "PlusMiddlePoint" } else { "" };

    let shifted = eat(&mut rest, "Shift", &mut consumed);
    let mut scrambled = eat(&mut rest, "Scr", &mut consumed);
    let kind = if rest.is_empty() && reshape.lambda == Lambda::Meta && !shifted && !scrambled {
        scrambled = true;
        SequenceKind::Hammersley
    } else if let Some(kind) = SequenceKind::ALL.iter().copied().find(|k| k.name() == rest) {
        kind
    } else {
        let reason = if rest.is_empty() {
            "missing base sequence".to_string()
        } else {
            format!("unknown token `{rest}`")
        };
        let base = nearest_base(rest, scrambled);
        return Err(unknown(name, reason, format!("{consumed}{base}{suffix}")));
    };
    if scrambled && !kind.is_radical_inverse() {
        return Err(unknown(
            name,
            format!("{kind} cannot be scrambled"),
            format!("{}{kind}{suffix}", consumed.trim_end_matches("Scr")),
        ));
    }
    Ok(SamplerSpec {
        base: kind.into(),
        scrambled,
        shifted,
        reshape,
    })
}

fn nearest_base(token: &str, scrambled: bool) -> &'static str {
    let candidates: &[&str] = if scrambled {
        &["Halton", "Hammersley"]
    } else {
        &["Random", "Grid", "LHS", "Jittered", "Halton", "Hammersley", "Sobol", "ScrHalton", "ScrHammersley"]
    };
    candidates
        .iter()
        .copied()
        .min_by_key(|c| strsim::levenshtein(token, c))
        .expect("candidate list is not empty")
}

fn unknown(name: &str, reason: String, suggestion: String) -> Error {
    Error::UnknownMethod {
        name: name.to_string(),
        reason,
        suggestion,
    }
}
