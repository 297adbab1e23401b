//! Command-line front end: figure-ready CSV/JSON data.
//!
//! Times are always the dimensionless `Gamma t`; the channel is built with
//! `Gamma = 1` and `gamma = ratio`.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::bellstate::BellDiagonalState;
use crate::channel::DephasingChannel;
use crate::correlations::{self, MeasureSet};
use crate::critical;
use crate::error::Error;
use crate::oracle::{self, GridSpec};

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_IO: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Convergence(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Convergence(_) => EXIT_CONVERGENCE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Convergence { .. } => CliError::Convergence(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qdiscord", version, about = "Discord measures of Bell-diagonal states under dephasing")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// D, Q_R, Q_S, C and I of a single state.
    Measures(MeasuresArgs),
    /// All measures along a dephasing trajectory.
    Trajectory(TrajectoryArgs),
    /// Sudden-change time of a state under a channel.
    Critical(CriticalArgs),
    /// Measure map over (c1, c2) at fixed c3.
    Contour(ContourArgs),
    /// Scaled critical time against gamma/Gamma.
    BandwidthSweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ContourMeasure {
    Discord,
    Hs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(long, default_value_t = 0.8, allow_hyphen_values = true)]
    pub c1: f64,
    #[arg(long, default_value_t = -0.4, allow_hyphen_values = true)]
    pub c2: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub c3: f64,
}

impl StateArgs {
    fn state(&self) -> Result<BellDiagonalState, CliError> {
        Ok(BellDiagonalState::physical(self.c1, self.c2, self.c3)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// gamma/Gamma.
    #[arg(long, default_value_t = 0.1, conflicts_with = "markovian", allow_hyphen_values = true)]
    pub ratio: f64,
    /// Markovian limit gamma -> infinity.
    #[arg(long)]
    pub markovian: bool,
}

impl ChannelArgs {
    fn channel(&self) -> Result<DephasingChannel, CliError> {
        if self.markovian {
            return Ok(DephasingChannel::scaled(None)?);
        }
        if !(self.ratio.is_finite() && self.ratio > 0.0) {
            return Err(CliError::Invalid(format!("--ratio must be positive, got {}", self.ratio)));
        }
        Ok(DephasingChannel::scaled(Some(self.ratio))?)
    }

    fn echo(&self) -> Value {
        if self.markovian {
            json!({ "markovian": true })
        } else {
            json!({ "ratio": number(self.ratio), "markovian": false })
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct MeasuresArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Cross-check the closed forms against the brute-force oracles.
    #[arg(long)]
    pub verify: bool,
    /// Seed for the random states added to the --verify run.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of random states added to the --verify run.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Largest Gamma t.
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub t_max: f64,
    /// Number of samples, endpoints included.
    #[arg(long, default_value_t = 501)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ContourArgs {
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub c3_fixed: f64,
    /// Points per axis over [-1, 1]; odd so that 0 is sampled.
    #[arg(long, default_value_t = 201)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = ContourMeasure::Discord)]
    pub measure: ContourMeasure,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Explicit comma-separated gamma/Gamma values, increasing.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub ratios: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.01)]
    pub ratio_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub ratio_max: f64,
    #[arg(long, default_value_t = 60)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    pub spacing: Spacing,
    /// eta*Gamma; defaults to -ln|c3/c1| of the state flags.
    #[arg(long, allow_hyphen_values = true)]
    pub eta_gamma: Option<f64>,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Shortest decimal that round-trips the value rounded to 12 significant digits.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round12(x);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn round12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// JSON counterpart of [`format_number`]; non-finite values become `null`.
fn number(x: f64) -> Value {
    if x.is_finite() {
        let r = round12(x);
        json!(if r == 0.0 { 0.0 } else { r })
    } else {
        Value::Null
    }
}

fn optional_number(x: Option<f64>) -> Value {
    x.map(number).unwrap_or_else(|| Value::String("none".into()))
}

fn optional_text(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_else(|| "none".into())
}

/// Columnar data plus metadata, rendered as CSV or JSON.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
    comments: Vec<String>,
    meta: Map<String, Value>,
}

impl Table {
    fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new(), comments: Vec::new(), meta: Map::new() }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = String::new();
                for c in &self.comments {
                    let _ = writeln!(s, "# {c}");
                }
                let _ = writeln!(s, "{}", self.columns.join(","));
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
                    let _ = writeln!(s, "{}", cells.join(","));
                }
                s
            }
            Format::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, &x)| (c.to_string(), number(x)))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut meta = self.meta.clone();
                meta.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
                let doc = json!({ "meta": meta, "records": records });
                let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

fn state_echo(s: &BellDiagonalState) -> Value {
    json!({ "c1": number(s.c1), "c2": number(s.c2), "c3": number(s.c3) })
}

fn measure_row(m: &MeasureSet) -> [f64; 5] {
    [m.discord, m.relative_entropy, m.hilbert_schmidt, m.classical, m.mutual_information]
}

/// Largest oracle deviations from the closed forms over a set of states.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub states: usize,
    pub classical: f64,
    pub relative_entropy: f64,
    pub hilbert_schmidt: f64,
}

pub fn verify_states(states: &[BellDiagonalState]) -> Result<VerifyReport, CliError> {
    let mgrid = GridSpec::default_measurement();
    let wgrid = GridSpec::default_weight();
    let agrid = GridSpec::default_axis();
    let devs: Vec<[f64; 3]> = states
        .par_iter()
        .map(|s| -> Result<[f64; 3], Error> {
            let (c, _) = oracle::optimize_classical_correlation(&s.to_density_matrix()?, &mgrid)?;
            let q_r = oracle::min_relative_entropy_to_classical(s, &wgrid)?;
            let q_s = oracle::min_hs_to_zero_discord(s, &agrid)?.distance;
            Ok([
                (c - correlations::classical_correlation(s)).abs(),
                (q_r - correlations::relative_entropy_discord(s).0).abs(),
                (q_s - correlations::hs_discord_bell(s)).abs(),
            ])
        })
        .collect::<Result<_, _>>()?;
    let mut report = VerifyReport { states: states.len(), ..Default::default() };
    for d in devs {
        report.classical = report.classical.max(d[0]);
        report.relative_entropy = report.relative_entropy.max(d[1]);
        report.hilbert_schmidt = report.hilbert_schmidt.max(d[2]);
    }
    Ok(report)
}

fn cmd_measures(args: &MeasuresArgs) -> Result<String, CliError> {
    let state = args.state.state()?;
    let m = correlations::measure_all(&state)?;
    let mut table = Table::new(vec!["c1", "c2", "c3", "D", "Q_R", "Q_S", "C", "I"]);
    let mut row = vec![state.c1, state.c2, state.c3];
    row.extend(measure_row(&m));
    table.rows.push(row);
    table.meta.insert("command".into(), json!("measures"));
    table.meta.insert("state".into(), state_echo(&state));
    if args.verify {
        let mut states = vec![state];
        states.extend(oracle::sample_physical_states(args.seed, args.samples));
        let report = verify_states(&states)?;
        table.comments.push(format!(
            "verify seed={} states={} max_dev_C={} max_dev_Q_R={} max_dev_Q_S={}",
            args.seed,
            report.states,
            format_number(report.classical),
            format_number(report.relative_entropy),
            format_number(report.hilbert_schmidt)
        ));
        table.meta.insert(
            "verify".into(),
            json!({
                "seed": args.seed,
                "states": report.states,
                "max_dev_C": number(report.classical),
                "max_dev_Q_R": number(report.relative_entropy),
                "max_dev_Q_S": number(report.hilbert_schmidt),
            }),
        );
    }
    Ok(table.render(args.output.format))
}

fn cmd_trajectory(args: &TrajectoryArgs) -> Result<String, CliError> {
    let state = args.state.state()?;
    let channel = args.channel.channel()?;
    if args.steps < 2 {
        return Err(CliError::Invalid(format!("--steps must be at least 2, got {}", args.steps)));
    }
    if !(args.t_max.is_finite() && args.t_max >= 0.0) {
        return Err(CliError::Invalid(format!("--t-max must be non-negative, got {}", args.t_max)));
    }
    let cp = critical::critical_time(&state, &channel)?;
    let mut table = Table::new(vec!["Gamma_t", "c1", "c2", "c3", "D", "Q_R", "Q_S", "C", "I"]);
    if let Some(t) = cp.scaled_tau() {
        table.comments.push(format!("tau_Gamma={}", format_number(t)));
    }
    let last = (args.steps - 1) as f64;
    for k in 0..args.steps {
        let t = args.t_max * k as f64 / last;
        let s = channel.evolve(&state, t)?;
        let m = correlations::measure_all(&s)?;
        let mut row = vec![t, s.c1, s.c2, s.c3];
        row.extend(measure_row(&m));
        table.rows.push(row);
    }
    table.meta.insert("command".into(), json!("trajectory"));
    table.meta.insert("state".into(), state_echo(&state));
    table.meta.insert("channel".into(), args.channel.echo());
    table.meta.insert("t_max".into(), number(args.t_max));
    table.meta.insert("steps".into(), json!(args.steps));
    table.meta.insert("tau_Gamma".into(), optional_number(cp.scaled_tau()));
    Ok(table.render(args.output.format))
}

fn cmd_critical(args: &CriticalArgs) -> Result<String, CliError> {
    let state = args.state.state()?;
    let channel = args.channel.channel()?;
    let cp = critical::critical_time(&state, &channel)?;
    Ok(match args.output.format {
        Format::Csv => format!(
            "tau_Gamma,eta_Gamma,lambert_argument\n{},{},{}\n",
            optional_text(cp.scaled_tau()),
            optional_text(cp.scaled_eta()),
            optional_text(cp.lambert_argument)
        ),
        Format::Json => {
            let doc = json!({
                "meta": {
                    "command": "critical",
                    "state": state_echo(&state),
                    "channel": args.channel.echo(),
                    "version": env!("CARGO_PKG_VERSION"),
                },
                "records": [{
                    "tau_Gamma": optional_number(cp.scaled_tau()),
                    "eta_Gamma": optional_number(cp.scaled_eta()),
                    "lambert_argument": optional_number(cp.lambert_argument),
                }],
            });
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
    })
}

/// Value of the contour map at one grid point; `NaN` outside the tetrahedron.
pub fn contour_value(measure: ContourMeasure, c1: f64, c2: f64, c3: f64) -> f64 {
    let s = BellDiagonalState::new(c1, c2, c3);
    if !s.is_physical() {
        return f64::NAN;
    }
    match measure {
        ContourMeasure::Discord => correlations::quantum_discord(&s),
        ContourMeasure::Hs => correlations::hs_discord_bell(&s),
    }
}

/// `-1 + 2k/(n-1)`, exact at both ends and at the midpoint.
pub fn grid_coordinate(k: usize, n: usize) -> f64 {
    let half = (n - 1) / 2;
    if k == half && n % 2 == 1 {
        return 0.0;
    }
    -1.0 + 2.0 * k as f64 / (n - 1) as f64
}

fn cmd_contour(args: &ContourArgs) -> Result<String, CliError> {
    if args.grid < 3 || args.grid % 2 == 0 {
        return Err(CliError::Invalid(format!("--grid must be odd and at least 3, got {}", args.grid)));
    }
    if !(args.c3_fixed.is_finite() && args.c3_fixed.abs() <= 1.0) {
        return Err(CliError::Invalid(format!("--c3-fixed must lie in [-1, 1], got {}", args.c3_fixed)));
    }
    let n = args.grid;
    let rows: Vec<Vec<Vec<f64>>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let c2 = grid_coordinate(j, n);
            (0..n)
                .map(|i| {
                    let c1 = grid_coordinate(i, n);
                    vec![c1, c2, contour_value(args.measure, c1, c2, args.c3_fixed)]
                })
                .collect()
        })
        .collect();
    let mut table = Table::new(vec!["c1", "c2", "measure_value"]);
    table.rows = rows.into_iter().flatten().collect();
    table.meta.insert("command".into(), json!("contour"));
    table.meta.insert("measure".into(), json!(args.measure));
    table.meta.insert("c3".into(), number(args.c3_fixed));
    table.meta.insert("grid".into(), json!(n));
    Ok(table.render(args.output.format))
}

/// Ratios requested by the sweep flags, increasing.
pub fn sweep_ratios(args: &SweepArgs) -> Result<Vec<f64>, CliError> {
    let ratios = match &args.ratios {
        Some(list) => list.clone(),
        None => {
            let (a, b, n) = (args.ratio_min, args.ratio_max, args.points);
            if !(a.is_finite() && b.is_finite() && a > 0.0 && b >= a) {
                return Err(CliError::Invalid(format!("ratio range [{a}, {b}] must be positive and ordered")));
            }
            if n > 1 && a == b {
                return Err(CliError::Invalid("ratio range is a single point but --points > 1".into()));
            }
            match n {
                0 => Vec::new(),
                1 => vec![a],
                _ => (0..n)
                    .map(|k| {
                        let f = k as f64 / (n - 1) as f64;
                        if k == n - 1 {
                            b
                        } else {
                            match args.spacing {
                                Spacing::Log => (a.ln() + f * (b.ln() - a.ln())).exp(),
                                Spacing::Linear => a + f * (b - a),
                            }
                        }
                    })
                    .collect(),
            }
        }
    };
    if ratios.is_empty() {
        return Err(CliError::Invalid("empty bandwidth range".into()));
    }
    if ratios.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(CliError::Invalid("bandwidth ratios must be positive".into()));
    }
    if ratios.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Invalid("bandwidth ratios must be strictly increasing".into()));
    }
    Ok(ratios)
}

fn cmd_bandwidth_sweep(args: &SweepArgs) -> Result<String, CliError> {
    let ratios = sweep_ratios(args)?;
    let eta_gamma = match args.eta_gamma {
        Some(e) => e,
        None => {
            let s = args.state.state()?;
            let (c1, c3) = (s.c1.abs(), s.c3.abs());
            if !(c1 > c3 && c3 > 0.0) {
                return Err(CliError::Invalid(format!(
                    "state {s} has no sudden change (need |c1| > |c3| > 0); pass --eta-gamma"
                )));
            }
            -(c3 / c1).ln()
        }
    };
    if !(eta_gamma.is_finite() && eta_gamma > 0.0) {
        return Err(CliError::Invalid(format!("--eta-gamma must be positive, got {eta_gamma}")));
    }
    let points = critical::bandwidth_sweep(&ratios, eta_gamma)?;
    let mut table = Table::new(vec!["gamma_over_Gamma", "T"]);
    table.rows = points.iter().map(|&(r, t)| vec![r, t]).collect();
    table.meta.insert("command".into(), json!("bandwidth-sweep"));
    table.meta.insert("eta_Gamma".into(), number(eta_gamma));
    table.meta.insert("spacing".into(), json!(args.spacing));
    Ok(table.render(args.output.format))
}

impl Command {
    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Measures(a) => &a.output,
            Command::Trajectory(a) => &a.output,
            Command::Critical(a) => &a.output,
            Command::Contour(a) => &a.output,
            Command::BandwidthSweep(a) => &a.output,
        }
    }
}

/// Produces the report text for a parsed configuration.
pub fn run(config: &RunConfig) -> Result<String, CliError> {
    match &config.command {
        Command::Measures(a) => cmd_measures(a),
        Command::Trajectory(a) => cmd_trajectory(a),
        Command::Critical(a) => cmd_critical(a),
        Command::Contour(a) => cmd_contour(a),
        Command::BandwidthSweep(a) => cmd_bandwidth_sweep(a),
    }
}

/// Runs and writes to `--out` or stdout; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = run(&config).and_then(|text| {
        match &config.command.output().out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qdiscord: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("qdiscord").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(0.1025), "0.1025");
        assert_eq!(format_number(0.188_721_875_540_867_136), "0.188721875541");
        assert_eq!(format_number(f64::NAN), "nan");
        assert_eq!(format_number(1.5e-20), "1.5e-20");
        assert_eq!(format_number(-3.0), "-3");
        assert_eq!(format_number(1e6), "1000000");
    }

    #[test]
    fn grid_coordinates_hit_origin_and_ends() {
        assert_eq!(grid_coordinate(0, 201), -1.0);
        assert_eq!(grid_coordinate(100, 201), 0.0);
        assert_eq!(grid_coordinate(200, 201), 1.0);
        assert!((grid_coordinate(180, 201) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn measures_report() {
        let out = run(&parse(&["measures", "--c1", "0.8", "--c2", "-0.4", "--c3", "0.5"])).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "c1,c2,c3,D,Q_R,Q_S,C,I");
        assert_eq!(lines[1], "0.8,-0.4,0.5,0.188721875541,0.188721875541,0.1025,0.531004406411,0.719726281952");
        let zeros = run(&parse(&["measures", "--c1", "0", "--c2", "0", "--c3", "0"])).unwrap();
        assert_eq!(zeros.lines().nth(1).unwrap(), "0,0,0,0,0,0,0,0");
    }

    #[test]
    fn unphysical_state_is_invalid_input() {
        let err = run(&parse(&["measures", "--c1", "1", "--c2", "1", "--c3", "1"])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("lambda_11"), "{err}");
    }

    #[test]
    fn critical_report() {
        let out = run(&parse(&["critical", "--ratio", "0.1"])).unwrap();
        let row = out.lines().nth(1).unwrap();
        assert!(row.starts_with("3.23096024306,0.470003629246,"), "{row}");
        let mk = run(&parse(&["critical", "--markovian"])).unwrap();
        assert_eq!(mk.lines().nth(1).unwrap(), "0.470003629246,0.470003629246,none");
        let none = run(&parse(&["critical", "--c1", "0.4", "--c2", "-0.2", "--c3", "0.5"])).unwrap();
        assert!(none.lines().nth(1).unwrap().starts_with("none,"));
    }

    #[test]
    fn contour_validation() {
        for bad in [["contour", "--grid", "200"], ["contour", "--grid", "1"], ["contour", "--c3-fixed", "1.5"]] {
            assert_eq!(run(&parse(&bad)).unwrap_err().exit_code(), 2);
        }
    }

    #[test]
    fn sweep_validation() {
        assert_eq!(run(&parse(&["bandwidth-sweep", "--points", "0"])).unwrap_err().exit_code(), 2);
        assert_eq!(run(&parse(&["bandwidth-sweep", "--ratios"])).unwrap_err().exit_code(), 2);
        assert_eq!(run(&parse(&["bandwidth-sweep", "--ratios", "1,0.5"])).unwrap_err().exit_code(), 2);
        assert_eq!(
            run(&parse(&["bandwidth-sweep", "--c1", "0.4", "--c2", "-0.2", "--c3", "0.5"]))
                .unwrap_err()
                .exit_code(),
            2
        );
    }

    #[test]
    fn trajectory_validation() {
        assert_eq!(run(&parse(&["trajectory", "--steps", "1"])).unwrap_err().exit_code(), 2);
        assert_eq!(run(&parse(&["trajectory", "--t-max", "-1"])).unwrap_err().exit_code(), 2);
        assert_eq!(run(&parse(&["trajectory", "--ratio", "0"])).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn json_output_has_meta_and_records() {
        let out = run(&parse(&["measures", "--format", "json"])).unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["meta"]["command"], "measures");
        assert_eq!(v["records"][0]["Q_S"], 0.1025);
        let keys: Vec<&String> = v["records"][0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["c1", "c2", "c3", "D", "Q_R", "Q_S", "C", "I"]);
    }

    #[test]
    fn convergence_errors_map_to_exit_three() {
        let e: CliError = Error::Convergence { routine: "lambert_w0", iterations: 50 }.into();
        assert_eq!(e.exit_code(), 3);
    }
}
