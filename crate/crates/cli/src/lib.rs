//! Command-line front end for `farey_dim`.
//!
//! Every subcommand produces a [`Report`]; [`serialize`] renders it as CSV
//! (payload only) or JSON (metadata and payload).

use std::collections::BTreeMap;
use std::fmt;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use farey_dim::circle::{dimension_estimate, gap_covers, slope_scatter, CircleMap};
use farey_dim::euclid::{
    duality_residuals, spectrum_equal_lengths, spectrum_equal_probs, LengthContractors,
    ProbabilityContractors, SpectrumCurve,
};
use farey_dim::farey::{build_partition, ContinuedFraction, Fraction, PeriodicContinuedFraction};
use farey_dim::fb::{ek_sweep, information_point, lambda_dichotomy_ratios};
use farey_dim::hyperbolic::{cutting_sequence, GeodesicFoot};
use farey_dim::stats::{
    census, empirical_log_a, log_a_series, mean_relative_length_closed_form, statistical_dimension,
    CumulantMode,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Real(f64),
    /// Free text, including exact rationals as `p/q`.
    Text(String),
}

impl Value {
    pub fn exact(f: &Fraction) -> Value {
        Value::Text(f.to_string())
    }

    fn csv_field(&self) -> String {
        match self {
            Value::Bool(b) => b.to_string(),
            Value::Int(i) => i.to_string(),
            Value::Real(x) => format_real(*x),
            Value::Text(s) => s.clone(),
        }
    }
}

/// 17 significant digits, scientific notation.
pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<i64> for Value {
    fn from(x: i64) -> Self {
        Value::Int(x)
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::Int(x as i64)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.into())
    }
}

impl From<String> for Value {
    fn from(x: String) -> Self {
        Value::Text(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub command: String,
    pub version: String,
    pub parameters: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scalar {
    pub name: String,
    pub value: Value,
    /// Bound on the error of `value`, when one is known.
    pub certificate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Scalars(Vec<Scalar>),
    Table {
        columns: Vec<String>,
        rows: Vec<Vec<Value>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: Metadata,
    pub payload: Payload,
}

impl Report {
    pub fn scalar(&self, name: &str) -> Option<&Scalar> {
        match &self.payload {
            Payload::Scalars(s) => s.iter().find(|s| s.name == name),
            Payload::Table { .. } => None,
        }
    }

    /// Column `name` of a table payload.
    pub fn column(&self, name: &str) -> Option<Vec<&Value>> {
        match &self.payload {
            Payload::Table { columns, rows } => {
                let i = columns.iter().position(|c| c == name)?;
                Some(rows.iter().map(|r| &r[i]).collect())
            }
            Payload::Scalars(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn serialize(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(report).expect("report is serializable");
            v.push(b'\n');
            v
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            match &report.payload {
                Payload::Scalars(s) => {
                    let mut header = Vec::new();
                    let mut row = Vec::new();
                    for x in s {
                        header.push(x.name.clone());
                        row.push(x.value.csv_field());
                        if let Some(c) = x.certificate {
                            header.push(format!("{}_certificate", x.name));
                            row.push(format_real(c));
                        }
                    }
                    w.write_record(&header).unwrap();
                    w.write_record(&row).unwrap();
                }
                Payload::Table { columns, rows } => {
                    w.write_record(columns).unwrap();
                    for r in rows {
                        w.write_record(r.iter().map(Value::csv_field)).unwrap();
                    }
                }
            }
            w.into_inner().expect("in-memory writer")
        }
    }
}

pub fn parse_json(bytes: &[u8]) -> serde_json::Result<Report> {
    serde_json::from_slice(bytes)
}

#[derive(Debug)]
pub enum CliError {
    Usage(clap::Error),
    Validation(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(e) if !e.use_stderr() => 0,
            CliError::Usage(_) | CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(e) => write!(f, "{e}"),
            CliError::Validation(m) => write!(f, "error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<farey_dim::Error> for CliError {
    fn from(e: farey_dim::Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Validation(msg.into()))
}

#[derive(Parser, Debug)]
#[command(
    name = "farey-dim",
    version,
    about = "Farey–Brocot dimensions of the critical staircase"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Intervals of a Farey–Brocot partition with exact lengths.
    Partition(PartitionArgs),
    /// Multifractal spectrum of a two-scale Euclidean measure.
    Spectrum(SpectrumArgs),
    /// Information dimension of the Farey–Brocot measure.
    FbDim(FbDimArgs),
    /// Dimensions of the sets E_k of bounded partial quotients.
    EkDim(EkDimArgs),
    /// Statistical self-similar dimension from the restricted tree.
    StatDim(StatDimArgs),
    /// Partial-quotient census against closed forms.
    Census(CensusArgs),
    /// Gap covers of the critical circle map's staircase.
    Staircase(StaircaseArgs),
    /// Cutting sequence of a geodesic through the Farey tessellation.
    Cutseq(CutseqArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Partition(_) => "partition",
            Command::Spectrum(_) => "spectrum",
            Command::FbDim(_) => "fb-dim",
            Command::EkDim(_) => "ek-dim",
            Command::StatDim(_) => "stat-dim",
            Command::Census(_) => "census",
            Command::Staircase(_) => "staircase",
            Command::Cutseq(_) => "cutseq",
        }
    }
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    #[arg(long, default_value_t = 12)]
    pub level: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Equal lengths carrying the given probabilities, tilted by `Λ`.
    EqualLengths,
    /// Equal probabilities carried by the given lengths, tilted by `Ξ`.
    EqualProbs,
    /// `q̄ + τ(q)` for the inverted equal-length spectrum.
    Duality,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long, value_enum, default_value_t = Family::EqualLengths)]
    pub family: Family,
    /// Contractors, comma separated; decimals or `p/q`.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<String>>,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
}

#[derive(Args, Debug)]
pub struct FbDimArgs {
    #[arg(long, default_value_t = 64)]
    pub jmax: usize,
    /// Emit `2^{(Λ−1)j}/(j+1)^{2f(Λ−1)}` for these `Λ` instead.
    #[arg(long, value_delimiter = ',')]
    pub dichotomy: Option<Vec<f64>>,
    #[arg(long, default_value_t = 40)]
    pub dichotomy_jmax: usize,
}

#[derive(Args, Debug)]
pub struct EkDimArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 4, 8, 16, 32, 64])]
    pub k: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Besicovitch,
    Exact,
}

#[derive(Args, Debug)]
pub struct StatDimArgs {
    #[arg(long, default_value_t = 64)]
    pub jmax: usize,
    #[arg(long, default_value_t = 8)]
    pub min_level: u32,
    #[arg(long, default_value_t = 20)]
    pub max_level: u32,
    #[arg(long, value_enum, default_value_t = Mode::Besicovitch)]
    pub mode: Mode,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(long, default_value_t = 2)]
    pub min_level: u32,
    #[arg(long, default_value_t = 16)]
    pub level: u32,
}

#[derive(Args, Debug)]
pub struct StaircaseArgs {
    #[arg(long, default_value_t = 7)]
    pub level: u32,
    #[arg(long, default_value_t = farey_dim::circle::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct CutseqArgs {
    /// Partial quotients of a rational foot.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["prefix", "period"])]
    pub cf: Option<Vec<u64>>,
    /// Pre-period of a quadratic foot.
    #[arg(long, value_delimiter = ',')]
    pub prefix: Option<Vec<u64>>,
    /// Period of a quadratic foot; the default is the golden mean.
    #[arg(long, value_delimiter = ',')]
    pub period: Option<Vec<u64>>,
    #[arg(long, default_value_t = 30)]
    pub depth: usize,
}

/// Parses `argv` (program name first) and runs the command.
pub fn dispatch<I, T>(argv: I) -> CliResult<(Report, Format)>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(CliError::Usage)?;
    let report = run(&cli.command)?;
    Ok((report, cli.format))
}

pub fn run(cmd: &Command) -> CliResult<Report> {
    let mut params = BTreeMap::new();
    let payload = match cmd {
        Command::Partition(a) => partition(a, &mut params)?,
        Command::Spectrum(a) => spectrum(a, &mut params)?,
        Command::FbDim(a) => fb_dim(a, &mut params)?,
        Command::EkDim(a) => ek_dim(a, &mut params)?,
        Command::StatDim(a) => stat_dim(a, &mut params)?,
        Command::Census(a) => census_cmd(a, &mut params)?,
        Command::Staircase(a) => staircase(a, &mut params)?,
        Command::Cutseq(a) => cutseq(a, &mut params)?,
    };
    Ok(Report {
        metadata: Metadata {
            command: cmd.name().into(),
            version: VERSION.into(),
            parameters: params,
        },
        payload,
    })
}

type Params = BTreeMap<String, Value>;

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn table(columns: &[&str], rows: Vec<Vec<Value>>) -> Payload {
    Payload::Table {
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
    }
}

fn scalar(name: &str, value: impl Into<Value>, certificate: Option<f64>) -> Scalar {
    Scalar {
        name: name.into(),
        value: value.into(),
        certificate,
    }
}

fn partition(a: &PartitionArgs, params: &mut Params) -> CliResult<Payload> {
    params.insert("level".into(), (a.level as u64).into());
    let part = build_partition(a.level)?;
    let rows = part
        .breakpoints()
        .windows(2)
        .map(|w| {
            vec![
                Value::exact(&w[0]),
                Value::exact(&w[1]),
                Value::exact(&(&w[1] - &w[0])),
                Value::Text(w[0].determinant(&w[1]).to_string()),
            ]
        })
        .collect();
    Ok(table(&["left", "right", "length", "determinant"], rows))
}

fn parse_weight(s: &str) -> CliResult<f64> {
    let s = s.trim();
    if s.contains('/') {
        match s.parse::<Fraction>() {
            Ok(f) => Ok(f.to_f64()),
            Err(_) => invalid(format!("bad weight {s:?}")),
        }
    } else {
        s.parse::<f64>()
            .or_else(|_| invalid(format!("bad weight {s:?}")))
    }
}

fn grid(lo: f64, hi: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && step > 0.0 && hi >= lo) {
        return invalid(format!("bad grid [{lo}, {hi}] step {step}"));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if n > 1_000_000 {
        return invalid("grid has more than a million points");
    }
    Ok((0..n).map(|i| lo + i as f64 * step).collect())
}

fn curve_rows(c: &SpectrumCurve) -> Vec<Vec<Value>> {
    c.points
        .iter()
        .map(|p| {
            let t = p.thermo.expect("thermodynamic points");
            vec![
                t.param.into(),
                p.alpha.into(),
                p.f.into(),
                t.tau.into(),
                t.slope.into(),
            ]
        })
        .collect()
}

fn spectrum(a: &SpectrumArgs, params: &mut Params) -> CliResult<Payload> {
    let (dw, dlo, dhi): (&[&str], f64, f64) = match a.family {
        Family::EqualLengths => (&["0.25", "0.75"], 0.2, 3.0),
        Family::EqualProbs => (&["1/3", "2/3"], 0.2, 3.0),
        Family::Duality => (&["0.3", "0.7"], -2.0, 3.0),
    };
    let weights: Vec<String> = match &a.weights {
        Some(w) => w.clone(),
        None => dw.iter().map(|s| s.to_string()).collect(),
    };
    let w = weights
        .iter()
        .map(|s| parse_weight(s))
        .collect::<CliResult<Vec<_>>>()?;
    let (lo, hi) = (a.lo.unwrap_or(dlo), a.hi.unwrap_or(dhi));
    let g = grid(lo, hi, a.step)?;
    params.insert(
        "family".into(),
        format!("{:?}", a.family).to_lowercase().into(),
    );
    params.insert("weights".into(), weights.join(",").into());
    params.insert("lo".into(), lo.into());
    params.insert("hi".into(), hi.into());
    params.insert("step".into(), a.step.into());
    let cols = ["param", "alpha", "f", "tau", "slope"];
    match a.family {
        Family::EqualLengths => {
            let pc = ProbabilityContractors::new(w)?;
            Ok(table(&cols, curve_rows(&spectrum_equal_lengths(&pc, &g)?)))
        }
        Family::EqualProbs => {
            let lc = LengthContractors::new(w)?;
            Ok(table(&cols, curve_rows(&spectrum_equal_probs(&lc, &g)?)))
        }
        Family::Duality => {
            let pc = ProbabilityContractors::new(w)?;
            let rows = duality_residuals(&pc, &g)?
                .into_iter()
                .map(|r| {
                    vec![
                        r.q.into(),
                        r.tau.into(),
                        r.q_bar.into(),
                        r.residual.into(),
                        r.tau_bar_residual.into(),
                    ]
                })
                .collect();
            Ok(table(
                &["q", "tau", "q_bar", "residual", "tau_bar_residual"],
                rows,
            ))
        }
    }
}

fn fb_dim(a: &FbDimArgs, params: &mut Params) -> CliResult<Payload> {
    params.insert("jmax".into(), (a.jmax as u64).into());
    let ip = information_point(a.jmax)?;
    if let Some(lambdas) = &a.dichotomy {
        params.insert("dichotomy".into(), join(lambdas).into());
        params.insert("dichotomy_jmax".into(), (a.dichotomy_jmax as u64).into());
        if a.dichotomy_jmax == 0 || lambdas.iter().any(|l| !l.is_finite()) {
            return invalid("dichotomy needs finite Λ and a positive range");
        }
        let cols: Vec<Vec<f64>> = lambdas
            .iter()
            .map(|&l| lambda_dichotomy_ratios(l, ip.value, a.dichotomy_jmax))
            .collect();
        let rows = (0..a.dichotomy_jmax)
            .map(|j| {
                let mut r = vec![Value::Int(j as i64 + 1)];
                r.extend(cols.iter().map(|c| Value::Real(c[j])));
                r
            })
            .collect();
        let mut names = vec!["j".to_string()];
        names.extend(lambdas.iter().map(|l| format!("ratio_{l}")));
        return Ok(Payload::Table {
            columns: names,
            rows,
        });
    }
    let stat = statistical_dimension(a.jmax)?;
    Ok(Payload::Scalars(vec![
        scalar("dimension", ip.value, Some(ip.certificate)),
        scalar("statistical_dimension", stat, None),
        scalar("coincidence", (ip.value - stat).abs(), None),
        scalar("direct_alpha", ip.direct_alpha, None),
        scalar("direct_f", ip.direct_f, None),
    ]))
}

fn ek_dim(a: &EkDimArgs, params: &mut Params) -> CliResult<Payload> {
    params.insert("k".into(), join(&a.k).into());
    let rows = ek_sweep(&a.k)?
        .into_iter()
        .map(|(k, d)| vec![(k as u64).into(), d.into(), (k as f64 * (1.0 - d)).into()])
        .collect();
    Ok(table(&["k", "dimension", "k_one_minus_d"], rows))
}

fn stat_dim(a: &StatDimArgs, params: &mut Params) -> CliResult<Payload> {
    params.insert("jmax".into(), (a.jmax as u64).into());
    params.insert("min_level".into(), (a.min_level as u64).into());
    params.insert("max_level".into(), (a.max_level as u64).into());
    params.insert("mode".into(), format!("{:?}", a.mode).to_lowercase().into());
    if a.min_level > a.max_level {
        return invalid("min-level exceeds max-level");
    }
    let mode = match a.mode {
        Mode::Besicovitch => CumulantMode::Besicovitch,
        Mode::Exact => CumulantMode::Exact,
    };
    let (log_a, _) = log_a_series(a.jmax)?;
    let mut rows = Vec::new();
    for n in a.min_level..=a.max_level {
        let e = empirical_log_a(n, mode)?;
        rows.push(vec![
            (n as u64).into(),
            e.into(),
            log_a.into(),
            (std::f64::consts::LN_2 / e).into(),
            Value::exact(&mean_relative_length_closed_form(n)),
        ]);
    }
    Ok(table(
        &[
            "n",
            "empirical_log_a",
            "log_a_series",
            "dimension",
            "mean_relative_length",
        ],
        rows,
    ))
}

fn census_cmd(a: &CensusArgs, params: &mut Params) -> CliResult<Payload> {
    params.insert("min_level".into(), (a.min_level as u64).into());
    params.insert("level".into(), (a.level as u64).into());
    if a.min_level > a.level {
        return invalid("min-level exceeds level");
    }
    let mut rows = Vec::new();
    for n in a.min_level..=a.level {
        let c = census(n)?;
        for ch in &c.checks {
            rows.push(vec![
                (n as u64).into(),
                ch.name.as_str().into(),
                ch.k.map(Value::from)
                    .unwrap_or_else(|| Value::Text(String::new())),
                ch.enumerated.into(),
                Value::exact(&ch.closed_form),
                Value::exact(&ch.discrepancy()),
            ]);
        }
        rows.push(vec![
            (n as u64).into(),
            "mean_relative_length".into(),
            Value::Text(String::new()),
            Value::Text(String::new()),
            Value::exact(&mean_relative_length_closed_form(n)),
            Value::exact(&(&mean_relative_length_closed_form(n) - &c.mean_relative_length())),
        ]);
    }
    Ok(table(
        &[
            "n",
            "check",
            "k",
            "enumerated",
            "closed_form",
            "discrepancy",
        ],
        rows,
    ))
}

fn staircase(a: &StaircaseArgs, params: &mut Params) -> CliResult<Payload> {
    params.insert("level".into(), (a.level as u64).into());
    params.insert("tol".into(), a.tol.into());
    let map = CircleMap::critical_sine();
    let covers = gap_covers(&map, a.level, a.tol)?;
    let est = dimension_estimate(&covers)?;
    let mut out = vec![scalar("dimension", est.extrapolated, None)];
    for (c, (n, d)) in covers.iter().zip(&est.per_level) {
        let s = slope_scatter(c)?;
        out.push(scalar(&format!("d_{n}"), *d, None));
        out.push(scalar(&format!("total_length_{n}"), c.total_length(), None));
        out.push(scalar(&format!("slope_{n}"), s.slope, None));
        out.push(scalar(&format!("r_squared_{n}"), s.r_squared, None));
    }
    for (n, d) in &est.ratio_estimates {
        out.push(scalar(&format!("ratio_d_{n}"), *d, None));
    }
    Ok(Payload::Scalars(out))
}

fn cutseq(a: &CutseqArgs, params: &mut Params) -> CliResult<Payload> {
    params.insert("depth".into(), (a.depth as u64).into());
    let (foot, quotients): (GeodesicFoot, Vec<u64>) = if let Some(cf) = &a.cf {
        params.insert("cf".into(), join(cf).into());
        let c = ContinuedFraction::new(cf.clone())?;
        (GeodesicFoot::from_cf(&c), cf.clone())
    } else {
        let prefix = a.prefix.clone().unwrap_or_default();
        let period = a.period.clone().unwrap_or_else(|| vec![1]);
        params.insert("prefix".into(), join(&prefix).into());
        params.insert("period".into(), join(&period).into());
        let p = PeriodicContinuedFraction::new(prefix, period)?;
        let q = p.quotients().take(a.depth).collect();
        (GeodesicFoot::from_periodic(&p)?, q)
    };
    let w = cutting_sequence(&foot, a.depth)?;
    let blocks = w.block_lengths();
    let n = blocks.len().min(quotients.len());
    let expected = if w.terminated {
        &quotients[..]
    } else {
        &quotients[..n.saturating_sub(1)]
    };
    let matches = blocks.len() >= expected.len() && blocks[..expected.len()] == *expected;
    Ok(Payload::Scalars(vec![
        scalar("word", w.to_string(), None),
        scalar("blocks", join(&blocks), None),
        scalar("terminated", w.terminated, None),
        scalar("blocks_match_quotients", matches, None),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_have_seventeen_digits() {
        assert_eq!(format_real(0.1), "1.0000000000000001e-1");
        assert_eq!(format_real(-2.0), "-2.0000000000000000e0");
        assert_eq!(format_real(f64::INFINITY), "inf");
    }

    #[test]
    fn grid_endpoints() {
        let g = grid(0.2, 3.0, 0.05).unwrap();
        assert_eq!(g.len(), 57);
        assert!((g[56] - 3.0).abs() < 1e-12);
        assert!(grid(1.0, 0.0, 0.1).is_err());
        assert!(grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn weights_accept_fractions() {
        assert!((parse_weight("1/3").unwrap() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(parse_weight(" 0.25").unwrap(), 0.25);
        assert!(parse_weight("x").is_err());
    }
}
