//! Artificial one-shot optimization benchmarks: synthetic objectives whose
//! optimum is drawn from a known prior, critical and useless variables, and
//! pairwise win-frequency tables.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_distr::{Cauchy, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::method::SamplerSpec;
use crate::rng::RngSeed;

const INSTANCE_STREAM: u64 = 1;
const SAMPLE_STREAM: u64 = 2;

/// Weight of the non-leading coordinates in the Cigar function.
pub const CIGAR_CONDITIONING: f64 = 1e6;
/// Amplitude of the cosine term in the Rastrigin function.
pub const RASTRIGIN_AMPLITUDE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctionId {
    Sphere,
    Rastrigin,
    Cigar,
}

impl FunctionId {
    pub const ALL: [FunctionId; 3] = [FunctionId::Sphere, FunctionId::Rastrigin, FunctionId::Cigar];

    pub fn name(self) -> &'static str {
        match self {
            FunctionId::Sphere => "Sphere",
            FunctionId::Rastrigin => "Rastrigin",
            FunctionId::Cigar => "Cigar",
        }
    }

    /// Value at offset `z` from the optimum; zero exactly at `z = 0`.
    pub fn value(self, z: &[f64]) -> f64 {
        match self {
            FunctionId::Sphere => z.iter().map(|v| v * v).sum(),
            FunctionId::Cigar => match z.split_first() {
                Some((first, rest)) => first * first + CIGAR_CONDITIONING * rest.iter().map(|v| v * v).sum::<f64>(),
                None => 0.0,
            },
            FunctionId::Rastrigin => z
                .iter()
                .map(|v| v * v + RASTRIGIN_AMPLITUDE * (1.0 - (2.0 * std::f64::consts::PI * v).cos()))
                .sum(),
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionId::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| invalid(format!("unknown function '{s}', expected one of Sphere, Rastrigin, Cigar")))
    }
}

/// Distribution of the optimum on the critical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Prior {
    #[default]
    NormalStd,
    NormalScaled(f64),
    CauchyScaled(f64),
}

impl Prior {
    pub fn scale(self) -> f64 {
        match self {
            Prior::NormalStd => 1.0,
            Prior::NormalScaled(s) | Prior::CauchyScaled(s) => s,
        }
    }

    fn validate(self) -> Result<()> {
        let s = self.scale();
        if s.is_finite() && s > 0.0 {
            Ok(())
        } else {
            Err(invalid(format!("prior scale must be finite and > 0, got {s}")))
        }
    }

    fn draw<R: Rng>(self, rng: &mut R) -> f64 {
        match self {
            Prior::NormalStd => rng.sample(StandardNormal),
            Prior::NormalScaled(s) => s * rng.sample::<f64, _>(StandardNormal),
            Prior::CauchyScaled(s) => rng.sample(Cauchy::new(0.0, s).expect("validated scale")),
        }
    }
}

impl fmt::Display for Prior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prior::NormalStd => f.write_str("NormalStd"),
            Prior::NormalScaled(s) => write!(f, "NormalScaled({s})"),
            Prior::CauchyScaled(s) => write!(f, "CauchyScaled({s})"),
        }
    }
}

impl FromStr for Prior {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
        if t == "normalstd" {
            return Ok(Prior::NormalStd);
        }
        let scaled = |prefix: &str| -> Option<Result<f64>> {
            let rest = t.strip_prefix(prefix)?;
            let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
            Some(inner.parse::<f64>().map_err(|_| invalid(format!("bad prior scale in '{s}'"))))
        };
        let prior = if let Some(v) = scaled("normalscaled") {
            Prior::NormalScaled(v?)
        } else if let Some(v) = scaled("cauchyscaled") {
            Prior::CauchyScaled(v?)
        } else {
            return Err(invalid(format!(
                "unknown prior '{s}', expected NormalStd, NormalScaled(<s>) or CauchyScaled(<s>)"
            )));
        };
        prior.validate()?;
        Ok(prior)
    }
}

impl TryFrom<String> for Prior {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Prior> for String {
    fn from(p: Prior) -> String {
        p.to_string()
    }
}

/// One objective: a function of the critical coordinates of `x`, with its
/// optimum at `x_star`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveInstance {
    pub function: FunctionId,
    /// Ambient dimension.
    pub d: usize,
    /// Sorted, distinct critical coordinates.
    pub mask: Vec<usize>,
    /// Optimum on the critical coordinates.
    pub x_star: Vec<f64>,
    /// Prior scale the optimum was drawn with.
    pub scale: f64,
}

impl ObjectiveInstance {
    pub fn new(function: FunctionId, d: usize, mut mask: Vec<usize>, x_star: Vec<f64>, scale: f64) -> Result<Self> {
        mask.sort_unstable();
        mask.dedup();
        if mask.is_empty() || mask.len() != x_star.len() {
            return Err(invalid("mask must be non-empty, distinct and match the optimum's length"));
        }
        if mask.last().is_some_and(|&m| m >= d) {
            return Err(invalid(format!("critical coordinate out of range for dimension {d}")));
        }
        Ok(Self { function, d, mask, x_star, scale })
    }

    /// Number of critical coordinates.
    pub fn d_prime(&self) -> usize {
        self.mask.len()
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.d {
            Ok(())
        } else {
            Err(invalid(format!("point of dimension {} for an objective of dimension {}", x.len(), self.d)))
        }
    }

    fn offset(&self, x: &[f64]) -> Vec<f64> {
        self.mask.iter().zip(&self.x_star).map(|(&j, &s)| x[j] - s).collect()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.function.value(&self.offset(x)))
    }

    /// Euclidean distance to the optimum on the critical coordinates.
    pub fn distance(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.offset(x).iter().map(|v| v * v).sum::<f64>().sqrt())
    }
}

/// Draws a mask uniformly without replacement and an optimum from the prior.
pub fn draw_instance(function: FunctionId, d: usize, d_prime: usize, prior: Prior, seed: RngSeed) -> Result<ObjectiveInstance> {
    if d_prime == 0 || d_prime > d {
        return Err(invalid(format!("need 1 <= d' <= d, got d'={d_prime}, d={d}")));
    }
    prior.validate()?;
    let mut rng = seed.rng();
    let mask = sample_indices(&mut rng, d, d_prime).into_vec();
    let x_star = (0..d_prime).map(|_| prior.draw(&mut rng)).collect();
    ObjectiveInstance::new(function, d, mask, x_star, prior.scale())
}

pub fn evaluate(instance: &ObjectiveInstance, x: &[f64]) -> Result<f64> {
    instance.evaluate(x)
}

/// Outcome of one method on one objective at one budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicaResult {
    pub function: FunctionId,
    pub d: usize,
    pub d_prime: usize,
    pub budget: usize,
    pub method: String,
    pub replica: usize,
    /// Best value found; the optimum value is zero.
    pub regret: f64,
    /// Distance from the closest point to the optimum.
    pub min_distance: f64,
    /// Seed of the method's sample.
    pub seed: u64,
}

fn score(points: &crate::reshaping::RealSample, instance: &ObjectiveInstance) -> Result<(f64, f64)> {
    let mut regret = f64::INFINITY;
    let mut dist = f64::INFINITY;
    for p in points.points() {
        regret = regret.min(instance.evaluate(p)?);
        dist = dist.min(instance.distance(p)?);
    }
    Ok((regret, dist))
}

/// Samples `budget` points in `R^d` with `method` and scores them.
///
/// The replica index of the result is 0; callers running many replicas
/// set it themselves.
pub fn run_replica(method: &SamplerSpec, instance: &ObjectiveInstance, budget: usize, seed: RngSeed) -> Result<ReplicaResult> {
    let points = method.generate_unbounded(budget, instance.d, seed)?;
    let (regret, min_distance) = score(&points, instance)?;
    Ok(ReplicaResult {
        function: instance.function,
        d: instance.d,
        d_prime: instance.d_prime(),
        budget,
        method: method.canonical_name(),
        replica: 0,
        regret,
        min_distance,
        seed: seed.value(),
    })
}

/// A method under a caller-chosen id.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedMethod {
    pub id: String,
    pub spec: SamplerSpec,
}

impl NamedMethod {
    pub fn new(id: impl Into<String>, spec: SamplerSpec) -> Self {
        Self { id: id.into(), spec }
    }

    /// Parses a method name, keeping the name as given as the id.
    pub fn parse(name: &str) -> Result<Self> {
        Ok(Self::new(name.trim(), SamplerSpec::parse(name)?))
    }
}

/// Axes of a benchmark: `(ambient d, critical d')` rows by budget columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchGrid {
    pub dims: Vec<(usize, usize)>,
    pub budgets: Vec<usize>,
    pub functions: Vec<FunctionId>,
    pub prior: Prior,
}

impl BenchGrid {
    /// Desk-scale grid: critical dimensions 3 and 25 with 100% and 16.67%
    /// critical variables, fully critical 100, and budgets up to 3000.
    pub fn desk() -> Self {
        Self {
            dims: vec![(3, 3), (18, 3), (25, 25), (100, 100), (150, 25)],
            budgets: vec![30, 100, 300, 1000, 3000],
            functions: FunctionId::ALL.to_vec(),
            prior: Prior::NormalStd,
        }
    }

    /// The full grid: dimensions up to 600 and budgets up to 300000.
    pub fn full() -> Self {
        Self {
            dims: vec![(3, 3), (18, 3), (25, 25), (100, 100), (150, 25), (600, 100)],
            budgets: vec![30, 100, 300, 1000, 3000, 10_000, 30_000, 100_000, 300_000],
            functions: FunctionId::ALL.to_vec(),
            prior: Prior::NormalStd,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.budgets.is_empty() || self.functions.is_empty() {
            return Err(invalid("grid needs at least one dimension pair, budget and function"));
        }
        if let Some(&(d, dp)) = self.dims.iter().find(|&&(d, dp)| dp == 0 || dp > d) {
            return Err(invalid(format!("need 1 <= d' <= d, got d'={dp}, d={d}")));
        }
        if self.budgets.contains(&0) {
            return Err(invalid("budgets must be >= 1"));
        }
        self.prior.validate()
    }
}

/// One (dimension, budget) cell of a win table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinCell {
    pub d: usize,
    pub d_prime: usize,
    pub budget: usize,
    /// `pairwise[a][b]`: frequency with which method `a` strictly beats
    /// method `b`, ties counting one half.
    pub pairwise: Vec<Vec<f64>>,
    /// Mean of `pairwise[a][b]` over `b != a`.
    pub mean_win: Vec<f64>,
    /// Index of the best method.
    pub winner: usize,
}

/// Best method per (dimension, budget) by mean pairwise win frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinTable {
    pub methods: Vec<String>,
    pub dims: Vec<(usize, usize)>,
    pub budgets: Vec<usize>,
    pub functions: Vec<FunctionId>,
    pub prior: Prior,
    pub replicas: usize,
    /// Row-major over `dims` x `budgets`.
    pub cells: Vec<WinCell>,
}

impl WinTable {
    pub fn cell(&self, row: usize, col: usize) -> &WinCell {
        &self.cells[row * self.budgets.len() + col]
    }

    pub fn winner_id(&self, cell: &WinCell) -> &str {
        &self.methods[cell.winner]
    }

    /// Frequency with which method `a` beats method `b` in a cell.
    pub fn frequency(&self, cell: &WinCell, a: &str, b: &str) -> Option<f64> {
        let i = self.methods.iter().position(|m| m == a)?;
        let j = self.methods.iter().position(|m| m == b)?;
        Some(cell.pairwise[i][j])
    }

    /// Aggregates replica results, which must hold one record per
    /// (cell, function, replica, method).
    pub fn from_results(
        methods: &[String],
        grid: &BenchGrid,
        replicas: usize,
        results: &[ReplicaResult],
    ) -> Result<Self> {
        let m = methods.len();
        if m < 2 {
            return Err(invalid("a win table needs at least two methods"));
        }
        let mut cells = Vec::with_capacity(grid.dims.len() * grid.budgets.len());
        for &(d, d_prime) in &grid.dims {
            for &budget in &grid.budgets {
                let mut wins = vec![vec![0.0; m]; m];
                let mut groups = 0usize;
                for &function in &grid.functions {
                    for replica in 0..replicas {
                        let mut regrets = vec![None; m];
                        for r in results.iter().filter(|r| {
                            r.d == d
                                && r.d_prime == d_prime
                                && r.budget == budget
                                && r.function == function
                                && r.replica == replica
                        }) {
                            if let Some(k) = methods.iter().position(|id| *id == r.method) {
                                regrets[k] = Some(r.regret);
                            }
                        }
                        let regrets: Vec<f64> = regrets
                            .into_iter()
                            .collect::<Option<_>>()
                            .ok_or_else(|| invalid(format!("missing results in cell d={d} budget={budget}")))?;
                        accumulate_wins(&mut wins, &regrets);
                        groups += 1;
                    }
                }
                cells.push(finish_cell(d, d_prime, budget, wins, groups, methods));
            }
        }
        Ok(Self {
            methods: methods.to_vec(),
            dims: grid.dims.clone(),
            budgets: grid.budgets.clone(),
            functions: grid.functions.clone(),
            prior: grid.prior,
            replicas,
            cells,
        })
    }

    /// Text table: one row per dimension pair, one column per budget.
    pub fn to_text(&self) -> String {
        let header: Vec<String> = std::iter::once("d (d')".to_string())
            .chain(self.budgets.iter().map(|b| b.to_string()))
            .collect();
        let mut rows = vec![header];
        for (i, &(d, dp)) in self.dims.iter().enumerate() {
            let mut row = vec![format!("{d} ({dp})")];
            for j in 0..self.budgets.len() {
                let cell = self.cell(i, j);
                row.push(format!("{} ({:.3})", self.winner_id(cell), cell.mean_win[cell.winner]));
            }
            rows.push(row);
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let functions: Vec<&str> = self.functions.iter().map(|f| f.name()).collect();
        let mut out = String::new();
        out.push_str("# best method by mean pairwise win frequency\n");
        out.push_str(&format!(
            "# replicas={} functions={} prior={} methods={}\n",
            self.replicas,
            functions.join(","),
            self.prior,
            self.methods.join(",")
        ));
        out.push_str("# ties in regret count 1/2; ties in mean frequency go to the lexicographically smallest method id\n");
        for row in rows {
            let line: Vec<String> = row.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}")).collect();
            out.push_str(line.join(" | ").trim_end());
            out.push('\n');
        }
        out
    }
}

fn accumulate_wins(wins: &mut [Vec<f64>], regrets: &[f64]) {
    for (a, &ra) in regrets.iter().enumerate() {
        for (b, &rb) in regrets.iter().enumerate() {
            if ra < rb {
                wins[a][b] += 1.0;
            } else if ra == rb || (ra.is_nan() && rb.is_nan()) {
                wins[a][b] += 0.5;
            } else if ra.is_nan() != rb.is_nan() {
                // A NaN regret always loses.
                wins[a][b] += if rb.is_nan() { 1.0 } else { 0.0 };
            }
        }
    }
}

fn finish_cell(d: usize, d_prime: usize, budget: usize, mut wins: Vec<Vec<f64>>, groups: usize, ids: &[String]) -> WinCell {
    let m = wins.len();
    for row in &mut wins {
        for w in row.iter_mut() {
            *w /= groups as f64;
        }
    }
    let mean_win: Vec<f64> = (0..m)
        .map(|a| (0..m).filter(|&b| b != a).map(|b| wins[a][b]).sum::<f64>() / (m - 1) as f64)
        .collect();
    let winner = (0..m)
        .max_by(|&a, &b| mean_win[a].total_cmp(&mean_win[b]).then_with(|| ids[b].cmp(&ids[a])))
        .unwrap_or(0);
    WinCell { d, d_prime, budget, pairwise: wins, mean_win, winner }
}

/// Full output of a benchmark run.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutput {
    /// Ordered by cell, then replica, function and method.
    pub results: Vec<ReplicaResult>,
    /// Present when at least two methods were run.
    pub table: Option<WinTable>,
}

/// Seed of a method's sample in one replica of one grid cell.
///
/// Every function of the cell shares the sample.
pub fn sample_seed(master: RngSeed, cell: usize, replica: usize, method: usize) -> RngSeed {
    master.substream(&[SAMPLE_STREAM, cell as u64, replica as u64, method as u64])
}

/// Seed of the objective instance every method faces in one replica.
pub fn instance_seed(master: RngSeed, cell: usize, function: FunctionId, replica: usize) -> RngSeed {
    master.substream(&[INSTANCE_STREAM, cell as u64, function as u64, replica as u64])
}

/// Runs every method on every cell, function and replica.
///
/// Within a replica all methods face the same objective instance. Results
/// depend only on the inputs, never on thread scheduling.
pub fn run_benchmark(methods: &[NamedMethod], grid: &BenchGrid, replicas: usize, master: RngSeed) -> Result<BenchOutput> {
    if methods.is_empty() {
        return Err(invalid("benchmark needs at least one method"));
    }
    if replicas == 0 {
        return Err(invalid("replica count must be >= 1"));
    }
    let ids: Vec<String> = methods.iter().map(|m| m.id.clone()).collect();
    if let Some(dup) = ids.iter().enumerate().find(|(i, id)| ids[..*i].contains(id)) {
        return Err(invalid(format!("duplicate method id '{}'", dup.1)));
    }
    grid.validate()?;
    let mut results = Vec::new();
    for (row, &(d, d_prime)) in grid.dims.iter().enumerate() {
        for (col, &budget) in grid.budgets.iter().enumerate() {
            let cell = row * grid.budgets.len() + col;
            let per_replica = (0..replicas)
                .into_par_iter()
                .map(|replica| {
                    let instances = grid
                        .functions
                        .iter()
                        .map(|&f| draw_instance(f, d, d_prime, grid.prior, instance_seed(master, cell, f, replica)))
                        .collect::<Result<Vec<_>>>()?;
                    let mut out = Vec::with_capacity(methods.len() * instances.len());
                    let mut by_method = Vec::with_capacity(methods.len());
                    for (k, method) in methods.iter().enumerate() {
                        let seed = sample_seed(master, cell, replica, k);
                        by_method.push((seed, method.spec.generate_unbounded(budget, d, seed)?));
                    }
                    for instance in &instances {
                        for (method, (seed, points)) in methods.iter().zip(&by_method) {
                            let (regret, min_distance) = score(points, instance)?;
                            out.push(ReplicaResult {
                                function: instance.function,
                                d,
                                d_prime,
                                budget,
                                method: method.id.clone(),
                                replica,
                                regret,
                                min_distance,
                                seed: seed.value(),
                            });
                        }
                    }
                    Ok(out)
                })
                .collect::<Result<Vec<_>>>()?;
            results.extend(per_replica.into_iter().flatten());
        }
    }
    let table = if methods.len() >= 2 {
        Some(WinTable::from_results(&ids, grid, replicas, &results)?)
    } else {
        None
    };
    Ok(BenchOutput { results, table })
}

/// Win table of at least two methods over at least 30 replicas.
pub fn win_table(methods: &[NamedMethod], grid: &BenchGrid, replicas: usize, master: RngSeed) -> Result<WinTable> {
    if methods.len() < 2 {
        return Err(invalid("a win table needs at least two methods"));
    }
    if replicas < 30 {
        return Err(invalid(format!("a win table needs >= 30 replicas, got {replicas}")));
    }
    run_benchmark(methods, grid, replicas, master)?
        .table
        .ok_or_else(|| invalid("no win table produced"))
}

/// Column names of the results file.
pub const RESULTS_HEADER: &str = "function,d,d_prime,budget,method,replica,regret,min_distance,seed";

/// Results as CSV text with a header line.
pub fn results_to_csv(results: &[ReplicaResult]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if results.is_empty() {
        w.write_record(RESULTS_HEADER.split(','))
            .map_err(|e| invalid(format!("csv: {e}")))?;
    }
    for r in results {
        w.serialize(r).map_err(|e| invalid(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| invalid(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| invalid(format!("csv: {e}")))
}

/// Parses text produced by [`results_to_csv`].
pub fn results_from_csv(text: &str) -> Result<Vec<ReplicaResult>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| invalid(format!("results file: {e}")))?;
    if header.iter().collect::<Vec<_>>().join(",") != RESULTS_HEADER {
        return Err(invalid(format!("results file must start with '{RESULTS_HEADER}'")));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| invalid(format!("results file: {e}"))))
        .collect()
}
