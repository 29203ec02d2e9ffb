//! `phsim`: command-line driver for the pseudo-Hermitian measurement
//! toolkit. All data output is CSV (default) or JSON; errors go to stderr
//! as one JSON object `{"error": <tag>, "message": <text>}` with a
//! nonzero exit code.

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use phsim::config::{ExperimentConfig, StateSource};
use phsim::dilation::DilatedMeasurement;
use phsim::error::{PhError, Result};
use phsim::fixtures;
use phsim::linalg::{matrix_from_json, CMat};
use phsim::measurement::{self, DecompositionCoefficients};
use phsim::phcore::{Normalization, PHMetric, PHObservable, QuantumState};
use phsim::sampler;
use phsim::spectral::PHSpectrum;
use phsim::uncertainty::{uncertainty_ratio, EvaluationMode};

const DEFAULT_TRIALS: u64 = 1_000_000;
const DEFAULT_SEED: u64 = 42;
const DEFAULT_GRID_POINTS: usize = 37;

#[derive(Parser)]
#[command(
    name = "phsim",
    about = "Pseudo-Hermitian observable simulator: spectra, dilated projective \
             measurement, shot-noise sampling, and the metric uncertainty relation",
    after_help = "Observable/metric references are fixture names (eq5.A, eq5.B, \
                  eq6.A, eq6.B; eta_pos, eta_indef, identity) or paths to JSON \
                  matrices written as nested arrays of [re, im] pairs."
)]
struct Cli {
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// RNG seed for sampled runs
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emitted photons per sampled run
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct PairRef {
    /// Observable: fixture name or JSON matrix file
    #[arg(long)]
    observable: Option<String>,
    /// Metric: fixture name or JSON matrix file
    #[arg(long)]
    metric: Option<String>,
    /// Experiment config JSON (overrides --observable/--metric/state flags)
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct StateArgs {
    /// First state angle (radians)
    #[arg(long)]
    theta1: Option<f64>,
    /// Second state angle (radians)
    #[arg(long)]
    theta2: Option<f64>,
    /// State JSON file: {"theta1":..,"theta2":..} or {"psi":[..]} or {"rho":[..]}
    #[arg(long)]
    state: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the pseudo-Hermiticity condition for an observable over a metric
    ///
    /// CSV columns: observable,metric,dim,residual,metric_definiteness
    Validate(PairRef),
    /// Eigenvalues, signs and decomposition residuals
    ///
    /// CSV columns: k,eigenvalue,sign,eta_gram_residual,completeness_residual
    Spectrum(PairRef),
    /// Analytic expectation, variance and decomposition coefficients
    ///
    /// CSV columns: expectation,variance,renormalized,p_0..p_{n-1},sign_0..sign_{n-1}
    Measure {
        #[command(flatten)]
        pair: PairRef,
        #[command(flatten)]
        state: StateArgs,
    },
    /// Dual vectors, weights and synthesized subspace unitaries
    ///
    /// CSV columns: k,weight,normalizer,v{j}_re,v{j}_im (j<n),
    /// u{i}{j}_re,u{i}{j}_im (i,j<n), f{m}_first,f{m}_theta,f{m}_alpha,f{m}_beta (m<n-1)
    Dilate(PairRef),
    /// Monte Carlo run of the dilated measurement
    ///
    /// CSV columns: k,e_k,s_k,n_k,p_kk_analytic,p_hat
    Sample {
        #[command(flatten)]
        pair: PairRef,
        #[command(flatten)]
        state: StateArgs,
    },
    /// Uncertainty-relation ratio R for a pair of observables
    ///
    /// CSV columns: theta1,theta2,var_a,var_b,re_cross,im_cross,R,mode,std_error_R
    Uncertainty {
        /// First observable: fixture name or JSON matrix file
        #[arg(long)]
        observable_a: String,
        /// Second observable: fixture name or JSON matrix file
        #[arg(long)]
        observable_b: String,
        /// Metric: fixture name or JSON matrix file
        #[arg(long)]
        metric: String,
        #[command(flatten)]
        state: StateArgs,
        /// Evaluate through the sampling pipeline instead of analytically
        #[arg(long)]
        sampled: bool,
    },
    /// Sweep theta2 over [0, pi) and emit a figure curve
    ///
    /// fig3* CSV columns: index,theta1,theta2,expectation,variance,
    /// expectation_hat,expectation_std_error,variance_hat,variance_std_error,status.
    /// fig4* CSV columns: index,theta1,theta2,var_a,var_b,re_cross,im_cross,
    /// r_analytic,r_sampled,r_std_error,status
    Reproduce {
        /// Which curve to compute
        #[arg(long, value_enum)]
        figure: Figure,
        /// Number of theta2 grid points
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Fig3a,
    Fig3b,
    Fig3c,
    Fig3d,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig4d,
}

// ---------------------------------------------------------------------------
// Tabular output

enum Cell {
    F(f64),
    U(u64),
    S(String),
    Empty,
}

struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::F(v) => format!("{v}"),
                    Cell::U(v) => format!("{v}"),
                    Cell::S(s) => s.clone(),
                    Cell::Empty => String::new(),
                })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row.iter())
                    .map(|(name, cell)| {
                        let v = match cell {
                            Cell::F(v) => json!(v),
                            Cell::U(v) => json!(v),
                            Cell::S(s) => json!(s),
                            Cell::Empty => Value::Null,
                        };
                        (name.clone(), v)
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&Value::Array(rows)).unwrap();
        text.push('\n');
        text
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

fn opt_f(v: Option<f64>) -> Cell {
    match v {
        Some(x) => Cell::F(x),
        None => Cell::Empty,
    }
}

// ---------------------------------------------------------------------------
// Input resolution

fn io_err(e: std::io::Error, path: &PathBuf) -> PhError {
    PhError::Backend(format!("{}: {e}", path.display()))
}

fn matrix_ref(text: &str) -> Result<CMat> {
    if fixtures::OBSERVABLE_NAMES.contains(&text) {
        return fixtures::observable_matrix(text);
    }
    if fixtures::METRIC_NAMES.contains(&text) {
        return Ok(fixtures::metric(text)?.eta().clone());
    }
    let path = PathBuf::from(text);
    let raw = fs::read_to_string(&path).map_err(|e| io_err(e, &path))?;
    let rows = serde_json::from_str(&raw).map_err(|e| PhError::Config(e.to_string()))?;
    matrix_from_json(&rows)
}

fn metric_ref(text: &str) -> Result<PHMetric> {
    if fixtures::METRIC_NAMES.contains(&text) {
        return fixtures::metric(text);
    }
    PHMetric::new(matrix_ref(text)?)
}

struct Inputs {
    observable: PHObservable,
    state_source: Option<StateSource>,
    trials: Option<u64>,
    seed: Option<u64>,
}

fn missing(flag: &str) -> PhError {
    PhError::Config(format!("missing --{flag} (or --config)"))
}

/// Resolves a config file, or the --observable/--metric pair, into a
/// validated observable plus whatever state/sampling settings came along.
fn resolve_pair(pair: &PairRef) -> Result<Inputs> {
    if let Some(path) = &pair.config {
        let raw = fs::read_to_string(path).map_err(|e| io_err(e, path))?;
        let cfg = ExperimentConfig::from_json(&raw)?;
        return Ok(Inputs {
            observable: cfg.resolve_observable()?,
            state_source: Some(cfg.state.clone()),
            trials: cfg.trials,
            seed: cfg.seed,
        });
    }
    let obs = pair.observable.as_deref().ok_or_else(|| missing("observable"))?;
    let met = pair.metric.as_deref().ok_or_else(|| missing("metric"))?;
    let metric = metric_ref(met)?;
    Ok(Inputs {
        observable: PHObservable::new(matrix_ref(obs)?, metric)?,
        state_source: None,
        trials: None,
        seed: None,
    })
}

/// State from --state file or --theta1/--theta2 flags (defaults 0, 0),
/// unless a config file already supplied one.
fn resolve_state(
    args: &StateArgs,
    from_config: Option<&StateSource>,
    metric: &PHMetric,
) -> Result<(QuantumState, Option<(f64, f64)>)> {
    let source = if let Some(src) = from_config {
        src.clone()
    } else if let Some(path) = &args.state {
        let raw = fs::read_to_string(path).map_err(|e| io_err(e, path))?;
        serde_json::from_str(&raw).map_err(|e| PhError::Config(e.to_string()))?
    } else {
        StateSource::Angles {
            theta1: args.theta1.unwrap_or(0.0),
            theta2: args.theta2.unwrap_or(0.0),
        }
    };
    let angles = match &source {
        StateSource::Angles { theta1, theta2 } => Some((*theta1, *theta2)),
        _ => None,
    };
    Ok((source.resolve(metric, Normalization::EtaNormalized)?, angles))
}

// ---------------------------------------------------------------------------
// Subcommands

fn cmd_validate(pair: &PairRef) -> Result<Table> {
    let inputs = resolve_pair(pair)?;
    let obs = &inputs.observable;
    let mut table = Table::new(&[
        "observable",
        "metric",
        "dim",
        "residual",
        "metric_definiteness",
    ]);
    table.push(vec![
        Cell::S(pair.observable.clone().unwrap_or_else(|| "config".into())),
        Cell::S(pair.metric.clone().unwrap_or_else(|| "config".into())),
        Cell::U(obs.dim() as u64),
        Cell::F(obs.residual()),
        Cell::S(format!("{:?}", obs.metric().definiteness())),
    ]);
    Ok(table)
}

fn cmd_spectrum(pair: &PairRef) -> Result<Table> {
    let inputs = resolve_pair(pair)?;
    let spectrum = PHSpectrum::decompose(&inputs.observable)?;
    let gram = spectrum.eta_gram();
    let mut gram_residual: f64 = 0.0;
    for k in 0..spectrum.dim() {
        for l in 0..spectrum.dim() {
            let expected = if k == l { spectrum.signs()[k] } else { 0.0 };
            gram_residual = gram_residual.max((gram[[k, l]].re - expected).abs());
            gram_residual = gram_residual.max(gram[[k, l]].im.abs());
        }
    }
    let completeness = spectrum.completeness_residual();
    let mut table = Table::new(&[
        "k",
        "eigenvalue",
        "sign",
        "eta_gram_residual",
        "completeness_residual",
    ]);
    for k in 0..spectrum.dim() {
        table.push(vec![
            Cell::U(k as u64),
            Cell::F(spectrum.eigenvalues()[k]),
            Cell::F(spectrum.signs()[k]),
            Cell::F(gram_residual),
            Cell::F(completeness),
        ]);
    }
    Ok(table)
}

fn cmd_measure(pair: &PairRef, state_args: &StateArgs) -> Result<Table> {
    let inputs = resolve_pair(pair)?;
    let obs = &inputs.observable;
    let (state, _) = resolve_state(state_args, inputs.state_source.as_ref(), obs.metric())?;
    let moments = measurement::moments(obs, &state)?;
    let spectrum = PHSpectrum::decompose(obs)?;
    let coeffs = DecompositionCoefficients::new(&spectrum, &state)?;
    let n = spectrum.dim();

    let mut columns: Vec<String> = vec![
        "expectation".into(),
        "variance".into(),
        "renormalized".into(),
    ];
    for k in 0..n {
        columns.push(format!("p_{k}"));
    }
    for k in 0..n {
        columns.push(format!("sign_{k}"));
    }
    let mut table = Table {
        columns,
        rows: Vec::new(),
    };
    let mut row = vec![
        Cell::F(moments.expectation),
        Cell::F(moments.variance),
        Cell::U(moments.renormalized as u64),
    ];
    row.extend(coeffs.diagonal().into_iter().map(Cell::F));
    row.extend(spectrum.signs().iter().copied().map(Cell::F));
    table.push(row);
    Ok(table)
}

fn cmd_dilate(pair: &PairRef) -> Result<Table> {
    let inputs = resolve_pair(pair)?;
    let spectrum = PHSpectrum::decompose(&inputs.observable)?;
    let dilation = DilatedMeasurement::build(&spectrum)?;
    let n = dilation.dim();

    let mut columns: Vec<String> = vec!["k".into(), "weight".into(), "normalizer".into()];
    for j in 0..n {
        columns.push(format!("v{j}_re"));
        columns.push(format!("v{j}_im"));
    }
    for i in 0..n {
        for j in 0..n {
            columns.push(format!("u{i}{j}_re"));
            columns.push(format!("u{i}{j}_im"));
        }
    }
    for m in 0..n - 1 {
        columns.push(format!("f{m}_first"));
        columns.push(format!("f{m}_theta"));
        columns.push(format!("f{m}_alpha"));
        columns.push(format!("f{m}_beta"));
    }
    let mut table = Table {
        columns,
        rows: Vec::new(),
    };
    for k in 0..n {
        let mut row = vec![
            Cell::U(k as u64),
            Cell::F(dilation.weights()[k]),
            Cell::F(dilation.normalizer()),
        ];
        for j in 0..n {
            let v = dilation.duals()[k][j];
            row.push(Cell::F(v.re));
            row.push(Cell::F(v.im));
        }
        let u = &dilation.unitaries()[k];
        for i in 0..n {
            for j in 0..n {
                row.push(Cell::F(u[[i, j]].re));
                row.push(Cell::F(u[[i, j]].im));
            }
        }
        let factors = &dilation.factorizations()[k];
        for m in 0..n - 1 {
            match factors.get(m) {
                Some(f) => {
                    row.push(Cell::U(f.first as u64));
                    row.push(Cell::F(f.theta));
                    row.push(Cell::F(f.alpha));
                    row.push(Cell::F(f.beta));
                }
                None => row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]),
            }
        }
        table.push(row);
    }
    Ok(table)
}

fn cmd_sample(
    pair: &PairRef,
    state_args: &StateArgs,
    trials: u64,
    seed: u64,
) -> Result<Table> {
    let inputs = resolve_pair(pair)?;
    let obs = &inputs.observable;
    let (state, _) = resolve_state(state_args, inputs.state_source.as_ref(), obs.metric())?;
    let trials = inputs.trials.unwrap_or(trials);
    let seed = inputs.seed.unwrap_or(seed);

    let spectrum = PHSpectrum::decompose(obs)?;
    let dilation = DilatedMeasurement::build(&spectrum)?;
    let coeffs = DecompositionCoefficients::new(&spectrum, &state)?;
    let record = sampler::simulate_events(&dilation, &spectrum, &state, trials, seed)?;

    // Self-normalizing estimate of p_kk: the allocation weights and the
    // state scale cancel in the sign-weighted ratio.
    let denom: f64 = record
        .counts
        .iter()
        .zip(record.signs.iter())
        .map(|(&c, s)| c as f64 * s)
        .sum();
    let p_analytic = coeffs.diagonal();
    let mut table = Table::new(&["k", "e_k", "s_k", "n_k", "p_kk_analytic", "p_hat"]);
    for k in 0..spectrum.dim() {
        let p_hat = if denom != 0.0 {
            Some(record.counts[k] as f64 / denom)
        } else {
            None
        };
        table.push(vec![
            Cell::U(k as u64),
            Cell::F(record.eigenvalues[k]),
            Cell::F(record.signs[k]),
            Cell::U(record.counts[k]),
            Cell::F(p_analytic[k]),
            opt_f(p_hat),
        ]);
    }
    Ok(table)
}

#[allow(clippy::too_many_arguments)]
fn cmd_uncertainty(
    observable_a: &str,
    observable_b: &str,
    metric_name: &str,
    state_args: &StateArgs,
    sampled: bool,
    trials: u64,
    seed: u64,
) -> Result<Table> {
    let metric = metric_ref(metric_name)?;
    let a = PHObservable::new(matrix_ref(observable_a)?, metric.clone())?;
    let b = PHObservable::new(matrix_ref(observable_b)?, metric.clone())?;
    let (state, angles) = resolve_state(state_args, None, &metric)?;
    let mode = if sampled {
        EvaluationMode::Sampled { trials, seed }
    } else {
        EvaluationMode::Analytic
    };
    let report = uncertainty_ratio(&a, &b, &state, mode)?;

    let mut table = Table::new(&[
        "theta1",
        "theta2",
        "var_a",
        "var_b",
        "re_cross",
        "im_cross",
        "R",
        "mode",
        "std_error_R",
    ]);
    table.push(vec![
        opt_f(angles.map(|t| t.0)),
        opt_f(angles.map(|t| t.1)),
        Cell::F(report.var_a),
        Cell::F(report.var_b),
        Cell::F(report.cross_term.re),
        Cell::F(report.cross_term.im),
        opt_f(report.ratio_r),
        Cell::S(if sampled { "sampled" } else { "analytic" }.into()),
        opt_f(report.std_error_r),
    ]);
    Ok(table)
}

struct FigureSpec {
    theta1: f64,
    /// `Some(name)`: moment curve for one observable; `None`: R curve.
    moment_observable: Option<&'static str>,
    pair: (&'static str, &'static str),
    metric: &'static str,
}

fn figure_spec(figure: Figure) -> FigureSpec {
    let (theta1_zero, theta1_tilt) = (0.0, PI / 2.5);
    match figure {
        Figure::Fig3a => FigureSpec {
            theta1: theta1_zero,
            moment_observable: Some("eq5.A"),
            pair: ("eq5.A", "eq5.B"),
            metric: "eta_pos",
        },
        Figure::Fig3b => FigureSpec {
            theta1: theta1_zero,
            moment_observable: Some("eq5.B"),
            pair: ("eq5.A", "eq5.B"),
            metric: "eta_pos",
        },
        Figure::Fig3c => FigureSpec {
            theta1: theta1_tilt,
            moment_observable: Some("eq5.A"),
            pair: ("eq5.A", "eq5.B"),
            metric: "eta_pos",
        },
        Figure::Fig3d => FigureSpec {
            theta1: theta1_tilt,
            moment_observable: Some("eq5.B"),
            pair: ("eq5.A", "eq5.B"),
            metric: "eta_pos",
        },
        Figure::Fig4a => FigureSpec {
            theta1: theta1_zero,
            moment_observable: None,
            pair: ("eq5.A", "eq5.B"),
            metric: "eta_pos",
        },
        Figure::Fig4b => FigureSpec {
            theta1: theta1_tilt,
            moment_observable: None,
            pair: ("eq5.A", "eq5.B"),
            metric: "eta_pos",
        },
        Figure::Fig4c => FigureSpec {
            theta1: theta1_zero,
            moment_observable: None,
            pair: ("eq6.A", "eq6.B"),
            metric: "eta_indef",
        },
        Figure::Fig4d => FigureSpec {
            theta1: theta1_tilt,
            moment_observable: None,
            pair: ("eq6.A", "eq6.B"),
            metric: "eta_indef",
        },
    }
}

fn grid_state(metric: &PHMetric, theta1: f64, theta2: f64) -> Result<QuantumState> {
    QuantumState::from_pure(
        &fixtures::psi_state(theta1, theta2),
        metric,
        Normalization::EtaNormalized,
    )
}

fn cmd_reproduce(figure: Figure, grid_points: usize, trials: u64, seed: u64) -> Result<Table> {
    if grid_points < 2 {
        return Err(PhError::Config("grid_points must be >= 2".into()));
    }
    let spec = figure_spec(figure);
    let metric = fixtures::metric(spec.metric)?;

    match spec.moment_observable {
        Some(name) => {
            let obs = fixtures::observable(name)?;
            let mut table = Table::new(&[
                "index",
                "theta1",
                "theta2",
                "expectation",
                "variance",
                "expectation_hat",
                "expectation_std_error",
                "variance_hat",
                "variance_std_error",
                "status",
            ]);
            for i in 0..grid_points {
                let theta2 = i as f64 * PI / grid_points as f64;
                let point = grid_state(&metric, spec.theta1, theta2).and_then(|state| {
                    sampler::run_experiment(&obs, &state, trials, seed.wrapping_add(i as u64))
                });
                let row = match point {
                    Ok(run) => vec![
                        Cell::U(i as u64),
                        Cell::F(spec.theta1),
                        Cell::F(theta2),
                        Cell::F(run.analytic_expectation),
                        Cell::F(run.analytic_variance),
                        Cell::F(run.estimate.expectation_hat),
                        Cell::F(run.estimate.std_error),
                        Cell::F(run.estimate.variance_hat),
                        Cell::F(run.estimate.variance_std_error),
                        Cell::S("ok".into()),
                    ],
                    Err(e) => failed_row(i, spec.theta1, theta2, 6, &e),
                };
                table.push(row);
            }
            Ok(table)
        }
        None => {
            let a = fixtures::observable(spec.pair.0)?;
            let b = fixtures::observable(spec.pair.1)?;
            let mut table = Table::new(&[
                "index",
                "theta1",
                "theta2",
                "var_a",
                "var_b",
                "re_cross",
                "im_cross",
                "r_analytic",
                "r_sampled",
                "r_std_error",
                "status",
            ]);
            for i in 0..grid_points {
                let theta2 = i as f64 * PI / grid_points as f64;
                // Four observables are sampled per point, each with its
                // own seed; stride keeps grid points independent.
                let point_seed = seed.wrapping_add(4 * i as u64);
                let point = grid_state(&metric, spec.theta1, theta2).and_then(|state| {
                    let analytic = uncertainty_ratio(&a, &b, &state, EvaluationMode::Analytic)?;
                    let sampled = uncertainty_ratio(
                        &a,
                        &b,
                        &state,
                        EvaluationMode::Sampled {
                            trials,
                            seed: point_seed,
                        },
                    )?;
                    Ok((analytic, sampled))
                });
                let row = match point {
                    Ok((analytic, sampled)) => vec![
                        Cell::U(i as u64),
                        Cell::F(spec.theta1),
                        Cell::F(theta2),
                        Cell::F(analytic.var_a),
                        Cell::F(analytic.var_b),
                        Cell::F(analytic.cross_term.re),
                        Cell::F(analytic.cross_term.im),
                        opt_f(analytic.ratio_r),
                        opt_f(sampled.ratio_r),
                        opt_f(sampled.std_error_r),
                        Cell::S("ok".into()),
                    ],
                    Err(e) => failed_row(i, spec.theta1, theta2, 7, &e),
                };
                table.push(row);
            }
            Ok(table)
        }
    }
}

fn failed_row(index: usize, theta1: f64, theta2: f64, blanks: usize, e: &PhError) -> Vec<Cell> {
    let mut row = vec![Cell::U(index as u64), Cell::F(theta1), Cell::F(theta2)];
    row.extend((0..blanks).map(|_| Cell::Empty));
    row.push(Cell::S(e.tag().to_string()));
    row
}

// ---------------------------------------------------------------------------

fn run(cli: &Cli) -> Result<Table> {
    let trials = cli.trials.unwrap_or(DEFAULT_TRIALS);
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match &cli.command {
        Command::Validate(pair) => cmd_validate(pair),
        Command::Spectrum(pair) => cmd_spectrum(pair),
        Command::Measure { pair, state } => cmd_measure(pair, state),
        Command::Dilate(pair) => cmd_dilate(pair),
        Command::Sample { pair, state } => cmd_sample(pair, state, trials, seed),
        Command::Uncertainty {
            observable_a,
            observable_b,
            metric,
            state,
            sampled,
        } => cmd_uncertainty(observable_a, observable_b, metric, state, *sampled, trials, seed),
        Command::Reproduce {
            figure,
            grid_points,
        } => cmd_reproduce(*figure, *grid_points, trials, seed),
    }
}

fn main() {
    let cli = Cli::parse();
    let table = match run(&cli) {
        Ok(table) => table,
        Err(e) => {
            eprintln!("{}", json!({"error": e.tag(), "message": e.to_string()}));
            std::process::exit(1);
        }
    };
    let text = table.render(cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!(
                    "{}",
                    json!({"error": "Backend", "message": format!("{}: {e}", path.display())})
                );
                std::process::exit(1);
            }
        }
        None => print!("{text}"),
    }
}
