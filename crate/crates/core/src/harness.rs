//! Experiment harness: configuration, algorithm registry, deterministic
//! initial points, run execution, and CSV export.
//!
//! A run is described by an [`ExperimentConfig`] (parsed from `key=value`
//! text and/or CLI overrides), names a benchmark family and an algorithm
//! from a [registry](AlgorithmRegistry) of [`AlgorithmStrategy`] objects,
//! and produces an [`ExperimentRun`]: the raw iterate trace, per-iterate
//! scores, and a [`SummaryReport`] with the guarantee audit. Identical
//! configs produce byte-identical traces and CSV files.
//!
//! Algorithms ship in three modes:
//! * `comparison_adangd` — comparison queries only; give a target
//!   `epsilon`, everything else is derived;
//! * `exact_ngd` — analytic gradient directions; give `iters`;
//! * `approx_ngd_with_gde` — comparison-based directions at a fixed
//!   per-call accuracy; give `iters` and `delta` (and optionally `gamma`).

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::benchmark::{BenchmarkParams, BenchmarkRegistry};
use crate::descent::{
    comparison_descent, normalized_descent, ComparisonEstimator, DescentSchedule,
    ExactDirectionEstimator, RunTrace,
};
use crate::error::{Error, Result};
use crate::metrics::{
    check_hypotheses, convergence_bound, evaluate_trace, select_best, BestIterate, EvalRecord,
    HypothesisReport,
};
use crate::objective::Objective;
use crate::oracle::CountingOracle;
use crate::vector::Vector;

/// Parses `key=value` configuration text: one pair per line, `#` starts a
/// comment, blank lines are skipped, keys and values are trimmed.
///
/// # Errors
/// [`Error::Config`] on a line without `=`, an empty key, or a duplicated
/// key.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "line {}: expected 'key = value', got '{raw}'",
                idx + 1
            )));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", idx + 1)));
        }
        if map.insert(key.clone(), value).is_some() {
            return Err(Error::Config(format!(
                "line {}: duplicate key '{key}'",
                idx + 1
            )));
        }
    }
    Ok(map)
}

/// A fully parsed experiment description. Field semantics follow the CLI
/// flags of the same names; mode-specific requirements are enforced by the
/// selected algorithm's [`AlgorithmStrategy::check_config`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// Benchmark family name, e.g. `quadratic`.
    pub benchmark: String,
    /// Ambient dimension.
    pub dim: usize,
    /// Algorithm name, e.g. `comparison_adangd`.
    pub algorithm: String,
    /// Bound `D` on the initial distance to the minimizer.
    pub d_bound: f64,
    /// Smoothness constant `L`; defaults to the benchmark's stored one.
    pub smoothness: Option<f64>,
    /// Target projection accuracy (comparison_adangd only).
    pub epsilon: Option<f64>,
    /// Iteration count (exact_ngd / approx_ngd_with_gde).
    pub iters: Option<u64>,
    /// Per-call direction accuracy (approx_ngd_with_gde).
    pub delta: Option<f64>,
    /// Gradient floor assumed by the estimator (approx_ngd_with_gde;
    /// defaults to `2·D·delta`).
    pub gamma: Option<f64>,
    /// Explicit initial point; overrides sampling.
    pub x1: Option<Vec<f64>>,
    /// Sampling radius for the initial point (default `D/2`).
    pub x1_radius: Option<f64>,
    /// Sampling center for the initial point (default: the benchmark's
    /// minimizer).
    pub x1_center: Option<Vec<f64>>,
    /// Seed for the initial-point sampler.
    pub seed: u64,
    /// Benchmark minimizer location (default: the origin).
    pub center: Option<Vec<f64>>,
    /// Per-coordinate curvatures for the quadratic family.
    pub spectrum: Option<Vec<f64>>,
    /// CSV output path.
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Builds a config from string key/value pairs (see [`parse_config_text`]).
    ///
    /// Required keys: `benchmark`, `dim`, `algorithm`, `D`. `seed` defaults
    /// to 0. Unknown keys are rejected so typos fail loudly.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        const KNOWN: &[&str] = &[
            "benchmark", "dim", "algorithm", "D", "L", "epsilon", "iters", "delta", "gamma",
            "x1", "x1_radius", "x1_center", "seed", "center", "spectrum", "out",
        ];
        for key in map.keys() {
            if !KNOWN.contains(&key.as_str()) {
                return Err(Error::Config(format!(
                    "unknown config key '{key}' (known keys: {})",
                    KNOWN.join(", ")
                )));
            }
        }
        let require = |key: &str| -> Result<&String> {
            map.get(key)
                .ok_or_else(|| Error::Config(format!("missing required config key '{key}'")))
        };
        let config = Self {
            benchmark: require("benchmark")?.clone(),
            dim: parse_number(require("dim")?, "dim")?,
            algorithm: require("algorithm")?.clone(),
            d_bound: parse_number(require("D")?, "D")?,
            smoothness: parse_opt(map, "L")?,
            epsilon: parse_opt(map, "epsilon")?,
            iters: parse_opt(map, "iters")?,
            delta: parse_opt(map, "delta")?,
            gamma: parse_opt(map, "gamma")?,
            x1: parse_opt_vec(map, "x1")?,
            x1_radius: parse_opt(map, "x1_radius")?,
            x1_center: parse_opt_vec(map, "x1_center")?,
            seed: match map.get("seed") {
                Some(value) => parse_number(value, "seed")?,
                None => 0,
            },
            center: parse_opt_vec(map, "center")?,
            spectrum: parse_opt_vec(map, "spectrum")?,
            out: map.get("out").map(PathBuf::from),
        };
        if config.dim == 0 {
            return Err(Error::Config("dim must be at least 1".into()));
        }
        if !(config.d_bound.is_finite() && config.d_bound > 0.0) {
            return Err(Error::Config(format!(
                "D must be positive and finite, got {}",
                config.d_bound
            )));
        }
        Ok(config)
    }

    /// The benchmark-construction part of the config.
    pub fn benchmark_params(&self) -> BenchmarkParams {
        BenchmarkParams {
            center: self.center.clone(),
            spectrum: self.spectrum.clone(),
        }
    }
}

fn parse_number<T: std::str::FromStr>(value: &str, key: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("config key '{key}': cannot parse '{value}'")))
}

fn parse_opt<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key).map(|v| parse_number(v, key)).transpose()
}

fn parse_opt_vec(map: &BTreeMap<String, String>, key: &str) -> Result<Option<Vec<f64>>> {
    map.get(key)
        .map(|value| {
            value
                .split(',')
                .map(|part| parse_number(part.trim(), key))
                .collect::<Result<Vec<f64>>>()
        })
        .transpose()
}

/// The iterate trace of one algorithm execution plus the parameters that
/// determine its guarantee.
#[derive(Clone, Debug)]
pub struct ResolvedRun {
    pub trace: RunTrace,
    /// Iterations the algorithm planned (and, absent failure, executed).
    pub iters: u64,
    /// Worst-case per-step direction error the guarantee charges (0 for
    /// exact gradients).
    pub direction_error: f64,
    /// Gradient floor assumed by comparison-based estimation, if any.
    pub gamma: Option<f64>,
}

/// A runnable optimization algorithm, selectable by name at runtime.
pub trait AlgorithmStrategy {
    /// Registry key, e.g. `exact_ngd`.
    fn name(&self) -> &'static str;

    /// Rejects configs that under- or over-specify this algorithm's mode
    /// (for example a target `epsilon` passed to a fixed-iteration mode).
    fn check_config(&self, config: &ExperimentConfig) -> Result<()>;

    /// Executes the algorithm from `x1`. A
    /// [`Error::NumericalFailure`] return still carries the partial trace.
    fn run(&self, config: &ExperimentConfig, objective: &Objective, x1: &Vector)
        -> Result<ResolvedRun>;
}

fn require_set<T>(value: &Option<T>, key: &str, algorithm: &str) -> Result<()> {
    if value.is_none() {
        return Err(Error::Config(format!(
            "algorithm '{algorithm}' requires config key '{key}'"
        )));
    }
    Ok(())
}

fn require_unset<T>(value: &Option<T>, key: &str, algorithm: &str, reason: &str) -> Result<()> {
    if value.is_some() {
        return Err(Error::Config(format!(
            "algorithm '{algorithm}' does not accept '{key}': {reason}"
        )));
    }
    Ok(())
}

fn resolved_smoothness(config: &ExperimentConfig, objective: &Objective) -> f64 {
    config.smoothness.unwrap_or_else(|| objective.smoothness())
}

/// Comparison-query-only minimization to a target accuracy: iteration count,
/// per-call accuracy, and gradient floor are all derived from `epsilon` and
/// `D`.
struct ComparisonAdaNgd;

impl AlgorithmStrategy for ComparisonAdaNgd {
    fn name(&self) -> &'static str {
        "comparison_adangd"
    }

    fn check_config(&self, config: &ExperimentConfig) -> Result<()> {
        require_set(&config.epsilon, "epsilon", self.name())?;
        let why = "it is derived from epsilon and D";
        require_unset(&config.iters, "iters", self.name(), why)?;
        require_unset(&config.delta, "delta", self.name(), why)?;
        require_unset(&config.gamma, "gamma", self.name(), why)
    }

    fn run(
        &self,
        config: &ExperimentConfig,
        objective: &Objective,
        x1: &Vector,
    ) -> Result<ResolvedRun> {
        let epsilon = config.epsilon.expect("checked by check_config");
        let mut oracle = CountingOracle::new(objective.clone());
        let (trace, schedule) = comparison_descent(
            &mut oracle,
            resolved_smoothness(config, objective),
            x1,
            config.d_bound,
            epsilon,
        )?;
        Ok(ResolvedRun {
            trace,
            iters: schedule.iters,
            direction_error: schedule.delta,
            gamma: Some(schedule.gamma),
        })
    }
}

/// Normalized descent with analytic gradient directions — the idealized
/// baseline.
struct ExactNgd;

impl AlgorithmStrategy for ExactNgd {
    fn name(&self) -> &'static str {
        "exact_ngd"
    }

    fn check_config(&self, config: &ExperimentConfig) -> Result<()> {
        require_set(&config.iters, "iters", self.name())?;
        let why = "exact gradient directions involve no estimation parameters";
        require_unset(&config.epsilon, "epsilon", self.name(), why)?;
        require_unset(&config.delta, "delta", self.name(), why)?;
        require_unset(&config.gamma, "gamma", self.name(), why)
    }

    fn run(
        &self,
        config: &ExperimentConfig,
        objective: &Objective,
        x1: &Vector,
    ) -> Result<ResolvedRun> {
        let iters = config.iters.expect("checked by check_config");
        let mut estimator = ExactDirectionEstimator::new(objective.clone())?;
        let trace = normalized_descent(&mut estimator, x1, config.d_bound, iters)?;
        Ok(ResolvedRun {
            trace,
            iters,
            direction_error: 0.0,
            gamma: None,
        })
    }
}

/// Normalized descent with comparison-based direction estimates at a fixed
/// per-call accuracy `delta`; the gradient floor `gamma` defaults to
/// `2·D·delta` (the floor under which that accuracy suffices for the
/// matching target).
struct ApproxNgdWithGde;

impl AlgorithmStrategy for ApproxNgdWithGde {
    fn name(&self) -> &'static str {
        "approx_ngd_with_gde"
    }

    fn check_config(&self, config: &ExperimentConfig) -> Result<()> {
        require_set(&config.iters, "iters", self.name())?;
        require_set(&config.delta, "delta", self.name())?;
        require_unset(
            &config.epsilon,
            "epsilon",
            self.name(),
            "iteration count and accuracy are given directly",
        )
    }

    fn run(
        &self,
        config: &ExperimentConfig,
        objective: &Objective,
        x1: &Vector,
    ) -> Result<ResolvedRun> {
        let iters = config.iters.expect("checked by check_config");
        let delta = config.delta.expect("checked by check_config");
        let gamma = config.gamma.unwrap_or(2.0 * config.d_bound * delta);
        let oracle = CountingOracle::new(objective.clone());
        let mut estimator = ComparisonEstimator::new(
            oracle,
            resolved_smoothness(config, objective),
            delta,
            gamma,
        )?;
        let trace = normalized_descent(&mut estimator, x1, config.d_bound, iters)?;
        Ok(ResolvedRun {
            trace,
            iters,
            direction_error: delta,
            gamma: Some(gamma),
        })
    }
}

/// Name-indexed collection of algorithms; extensible with custom
/// strategies.
pub struct AlgorithmRegistry {
    entries: BTreeMap<&'static str, Box<dyn AlgorithmStrategy>>,
}

impl AlgorithmRegistry {
    /// An empty registry.
    pub fn new() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// The three built-in algorithms.
    pub fn with_builtins() -> Self {
        let mut registry = Self::new();
        registry.register(Box::new(ComparisonAdaNgd));
        registry.register(Box::new(ExactNgd));
        registry.register(Box::new(ApproxNgdWithGde));
        registry
    }

    /// Registers a strategy under its own name, replacing any previous
    /// holder of that name.
    pub fn register(&mut self, strategy: Box<dyn AlgorithmStrategy>) {
        self.entries.insert(strategy.name(), strategy);
    }

    /// # Errors
    /// [`Error::Config`] naming the known algorithms when `name` is not
    /// registered.
    pub fn get(&self, name: &str) -> Result<&dyn AlgorithmStrategy> {
        self.entries.get(name).map(Box::as_ref).ok_or_else(|| {
            Error::Config(format!(
                "unknown algorithm '{name}' (known algorithms: {})",
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl Default for AlgorithmRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

/// The deterministic initial point for a config: the explicit `x1` if
/// given, otherwise a seeded uniform draw from the sphere of radius
/// `x1_radius` (default `D/2`) around `x1_center` (default: the
/// benchmark's minimizer).
pub fn sample_initial_point(config: &ExperimentConfig, objective: &Objective) -> Result<Vector> {
    if let Some(coords) = &config.x1 {
        let x1 = Vector::new(coords.clone())?;
        if x1.dim() != objective.dim() {
            return Err(Error::DimensionMismatch {
                expected: objective.dim(),
                actual: x1.dim(),
            });
        }
        return Ok(x1);
    }
    let radius = config.x1_radius.unwrap_or(config.d_bound / 2.0);
    if !(radius.is_finite() && radius >= 0.0) {
        return Err(Error::Config(format!(
            "x1_radius must be non-negative and finite, got {radius}"
        )));
    }
    let center = match &config.x1_center {
        Some(coords) => {
            let center = Vector::new(coords.clone())?;
            if center.dim() != objective.dim() {
                return Err(Error::DimensionMismatch {
                    expected: objective.dim(),
                    actual: center.dim(),
                });
            }
            center
        }
        None => objective
            .minimizer()
            .cloned()
            .ok_or_else(|| {
                Error::Config(format!(
                    "objective '{}' has no known minimizer; provide x1 or x1_center",
                    objective.name()
                ))
            })?,
    };
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let direction = loop {
        let coords: Vec<f64> = (0..objective.dim())
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let candidate = Vector::new(coords)?;
        if let Some(unit) = candidate.normalized() {
            if candidate.norm() > 1e-12 {
                break unit;
            }
        }
    };
    Ok(center.add_scaled(radius, &direction))
}

/// How a run ended.
#[derive(Clone, Debug, PartialEq)]
pub enum RunStatus {
    /// All planned iterations executed.
    Completed,
    /// The run aborted; the trace covers the iterations before the abort.
    Failed { iter: u64, reason: String },
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunStatus::Completed => write!(f, "completed"),
            RunStatus::Failed { iter, reason } => {
                write!(f, "failed at iteration {iter}: {reason}")
            }
        }
    }
}

/// Human-readable outcome of one experiment.
#[derive(Clone, Debug)]
pub struct SummaryReport {
    pub benchmark: String,
    pub algorithm: String,
    pub dim: usize,
    pub seed: u64,
    pub d_bound: f64,
    pub status: RunStatus,
    /// Planned iteration count.
    pub iters: u64,
    /// Comparison queries the run actually spent.
    pub total_queries: u64,
    /// Reported iterate (projection argmin when scorable); `None` only for
    /// an empty failed trace.
    pub best: Option<BestIterate>,
    /// Guaranteed best-iterate projection for a completed run.
    pub bound: Option<f64>,
    /// Whether the reported projection met the bound (`None` when either
    /// side is unavailable).
    pub bound_met: Option<bool>,
    /// Audit of the guarantee's hypotheses, when the objective is scorable.
    pub hypotheses: Option<HypothesisReport>,
    /// Where the CSV went, if requested.
    pub out: Option<PathBuf>,
}

impl fmt::Display for SummaryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "benchmark: {} (dim {}), algorithm: {}, seed {}",
            self.benchmark, self.dim, self.algorithm, self.seed
        )?;
        writeln!(f, "status: {}", self.status)?;
        writeln!(
            f,
            "iterations: {} planned, comparison queries: {}",
            self.iters, self.total_queries
        )?;
        match &self.best {
            Some(BestIterate::ByProjection {
                iter, projection, ..
            }) => {
                writeln!(f, "best iterate: #{iter}, gradient projection {projection:.6e}")?;
            }
            Some(BestIterate::LastIterate { iter, .. }) => {
                writeln!(f, "best iterate: #{iter} (last; objective not scorable)")?;
            }
            None => writeln!(f, "best iterate: none recorded")?,
        }
        match (self.bound, self.bound_met) {
            (Some(bound), Some(true)) => writeln!(f, "guaranteed projection: {bound:.6e} (met)")?,
            (Some(bound), Some(false)) => {
                writeln!(f, "guaranteed projection: {bound:.6e} (NOT met)")?;
            }
            (Some(bound), None) => writeln!(f, "guaranteed projection: {bound:.6e}")?,
            (None, _) => writeln!(f, "guaranteed projection: none (run did not complete)")?,
        }
        if let Some(h) = &self.hypotheses {
            write!(
                f,
                "hypotheses: max distance {:.6e} ({} bound D)",
                h.max_distance,
                if h.distance_within_bound { "within" } else { "EXCEEDS" }
            )?;
            match (h.gradient_floor_holds, h.min_prefix_gradient_norm) {
                (Some(true), Some(min)) => {
                    writeln!(f, "; gradient floor held (min {min:.6e} before target)")?;
                }
                (Some(true), None) => writeln!(f, "; gradient floor vacuously held")?,
                (Some(false), Some(min)) => {
                    writeln!(f, "; gradient floor VIOLATED (min {min:.6e} before target)")?;
                }
                _ => writeln!(f)?,
            }
        }
        if let Some(path) = &self.out {
            writeln!(f, "csv: {}", path.display())?;
        }
        Ok(())
    }
}

/// Everything one experiment produces.
#[derive(Clone, Debug)]
pub struct ExperimentRun {
    pub summary: SummaryReport,
    pub trace: RunTrace,
    /// Per-iterate scores; empty when the objective is not scorable.
    pub records: Vec<EvalRecord>,
}

/// Runs an experiment against the built-in benchmark and algorithm
/// registries.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentRun> {
    run_experiment_with(
        config,
        &BenchmarkRegistry::default(),
        &AlgorithmRegistry::default(),
    )
}

/// Runs an experiment with caller-supplied registries (for custom
/// benchmarks or algorithms).
///
/// A numerical failure inside the algorithm is not an error at this level:
/// the run comes back with [`RunStatus::Failed`], the partial trace, and —
/// if requested — the partial CSV. Configuration problems and I/O errors
/// are errors.
pub fn run_experiment_with(
    config: &ExperimentConfig,
    benchmarks: &BenchmarkRegistry,
    algorithms: &AlgorithmRegistry,
) -> Result<ExperimentRun> {
    let objective = benchmarks.build(&config.benchmark, config.dim, &config.benchmark_params())?;
    let strategy = algorithms.get(&config.algorithm)?;
    strategy.check_config(config)?;
    let x1 = sample_initial_point(config, &objective)?;

    let (trace, status, resolved) = match strategy.run(config, &objective, &x1) {
        Ok(resolved) => (
            resolved.trace.clone(),
            RunStatus::Completed,
            Some((resolved.iters, resolved.direction_error, resolved.gamma)),
        ),
        Err(Error::NumericalFailure {
            iter,
            reason,
            trace,
        }) => (*trace, RunStatus::Failed { iter, reason }, None),
        Err(other) => return Err(other),
    };

    let scorable = objective.has_grad() && objective.minimizer().is_some();
    let records = if scorable {
        evaluate_trace(&trace, &objective)?
    } else {
        Vec::new()
    };
    let best = (!trace.steps.is_empty())
        .then(|| select_best(&trace, &objective))
        .transpose()?;
    let (bound, planned_iters, floor) = match &resolved {
        Some((iters, direction_error, gamma)) => (
            Some(convergence_bound(config.d_bound, *iters, *direction_error)?),
            *iters,
            *gamma,
        ),
        None => {
            // Failed run: reconstruct the planned count for the report.
            let planned = match (config.iters, config.epsilon) {
                (Some(iters), _) => iters,
                (None, Some(epsilon)) => DescentSchedule::for_target(config.d_bound, epsilon)
                    .map(|schedule| schedule.iters)
                    .unwrap_or(0),
                (None, None) => 0,
            };
            (None, planned, None)
        }
    };
    let bound_met = match (&best, bound) {
        (Some(BestIterate::ByProjection { projection, .. }), Some(bound)) => {
            Some(*projection <= bound)
        }
        _ => None,
    };
    let hypotheses = (scorable && !trace.steps.is_empty())
        .then(|| check_hypotheses(&trace, &objective, config.d_bound, floor, bound))
        .transpose()?;

    if let Some(path) = &config.out {
        if !scorable {
            return Err(Error::Unsupported(format!(
                "objective '{}' is not scorable; CSV export needs a gradient and minimizer",
                objective.name()
            )));
        }
        write_csv(&trace, &records, path)?;
    }

    Ok(ExperimentRun {
        summary: SummaryReport {
            benchmark: config.benchmark.clone(),
            algorithm: config.algorithm.clone(),
            dim: config.dim,
            seed: config.seed,
            d_bound: config.d_bound,
            status,
            iters: planned_iters,
            total_queries: trace.total_queries,
            best,
            bound,
            bound_met,
            hypotheses,
            out: config.out.clone(),
        },
        trace,
        records,
    })
}

/// Writes a run to CSV with the pinned header
/// `iter,h_k,queries_cum,f_gap,v_f,dist`. Floats are rendered with 17
/// significant digits so a rerun of the same config reproduces the file
/// byte for byte. An empty trace produces a header-only file.
///
/// # Errors
/// [`Error::InvalidArgument`] when `records` does not score exactly the
/// trace's steps; [`Error::Io`] on filesystem problems.
pub fn write_csv(trace: &RunTrace, records: &[EvalRecord], path: &Path) -> Result<()> {
    if records.len() != trace.steps.len() {
        return Err(Error::InvalidArgument(format!(
            "records score {} iterates but the trace holds {}",
            records.len(),
            trace.steps.len()
        )));
    }
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(io_err)?;
        }
    }
    let mut writer = std::io::BufWriter::new(fs::File::create(path).map_err(io_err)?);
    writeln!(writer, "iter,h_k,queries_cum,f_gap,v_f,dist").map_err(io_err)?;
    for (step, record) in trace.steps.iter().zip(records) {
        writeln!(
            writer,
            "{},{:.16e},{},{:.16e},{:.16e},{:.16e}",
            step.iter, step.step, step.queries_cumulative, record.objective_gap,
            record.projection, record.distance
        )
        .map_err(io_err)?;
    }
    writer.flush().map_err(io_err)
}
