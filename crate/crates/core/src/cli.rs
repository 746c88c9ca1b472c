//! Command-line driver. Every subcommand renders to a string so the binary
//! stays a thin wrapper and tests can call [`run`] directly.

use std::fmt;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::frame::{Frame, MassFunction};
use crate::measures::{deng_entropy, fb_entropy, shannon_of_masses, tfb_entropy, EntropyReport, Measure};
use crate::oracle::{cross_check, grid_search_max, GridMeasure, GridSpec};
use crate::split::{build_split_tree, csv_writer, deng_volume, DEFAULT_EPSILON, DEFAULT_MAX_ITER};
use crate::volume::{hoivmf_value, VolumeQuery};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// The BPA of the Deng-volume comparison table.
pub const TABLE2_BPA: &str = r#"{"frame":["A","B"],"masses":{"A":0.2,"B":0.2,"A,B":0.6}}"#;

#[derive(Debug, Parser)]
#[command(name = "tfb", version, about = "Belief entropies and information volume of mass functions")]
pub struct Cli {
    /// Decimal places in printed values
    #[arg(long, global = true, default_value_t = 4)]
    pub precision: usize,

    /// Write output here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate entropy measures on a BPA file (JSON rows)
    Entropy(EntropyArgs),
    /// Reproduce the maximum-TFB table (1) or the Deng-volume comparison (2)
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
    /// TFB entropy surfaces over the two-element simplex, one CSV per order
    Surface(SurfaceArgs),
    /// Measures along the path m(AB)=1-t, m(A)=r·t, m(B)=(1-r)·t
    Trajectory(TrajectoryArgs),
    /// Leaves or per-origin leaf counts of the k-round split tree
    Split(SplitArgs),
    /// Iterated proportional splitting with Deng entropy per iteration
    DengVolume(DengVolumeArgs),
    /// Closed form vs split-tree identities for one BPA (JSON report)
    CrossCheck {
        bpa: PathBuf,
        #[arg(long, default_value_t = 4)]
        k_max: u64,
    },
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// BPA JSON file, or '-' for standard input
    pub bpa: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "shannon,deng,fb")]
    pub measures: Vec<Measure>,
    /// TFB order; required when tfb is requested
    #[arg(long)]
    pub k: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Orders as a range `1..9`, a list `1,3,5`, or a single value
    #[arg(long, default_value = "1..9")]
    pub k: String,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    /// Directory for surface_k<k>.csv files; only the summary is printed if omitted
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    /// Share of the resolved mass going to A
    #[arg(long, default_value_t = 0.5)]
    pub ratio: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Leaves,
    Counts,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    pub bpa: PathBuf,
    #[arg(long)]
    pub k: u64,
    #[arg(long, value_enum, default_value_t = Emit::Leaves)]
    pub emit: Emit,
    /// Emit leaves of every round instead of the last one
    #[arg(long)]
    pub all_rounds: bool,
}

#[derive(Debug, Args)]
pub struct DengVolumeArgs {
    pub bpa: PathBuf,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TreeTooLarge { .. } => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

/// Standard output text plus any warnings for standard error.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub warnings: Vec<String>,
}

impl From<String> for Output {
    fn from(stdout: String) -> Self {
        Self { stdout, warnings: Vec::new() }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let p = cli.precision;
    match &cli.command {
        Command::Entropy(args) => cmd_entropy(&read_bpa(&args.bpa)?, &args.measures, args.k, p).map(Output::from),
        Command::Table { which } => cmd_table(*which, p).map(Output::from),
        Command::Surface(args) => {
            cmd_surface(&parse_orders(&args.k)?, args.step, args.out_dir.as_deref(), p).map(Output::from)
        }
        Command::Trajectory(args) => cmd_trajectory(args.ratio, args.steps, p).map(Output::from),
        Command::Split(args) => {
            cmd_split(&read_bpa(&args.bpa)?, args.k, args.emit, args.all_rounds, p).map(Output::from)
        }
        Command::DengVolume(args) => cmd_deng_volume(&read_bpa(&args.bpa)?, args.epsilon, args.max_iter, p),
        Command::CrossCheck { bpa, k_max } => {
            let report = cross_check(&read_bpa(bpa)?, *k_max);
            Ok(Output::from(to_json(&report)))
        }
    }
}

pub fn read_bpa(path: &Path) -> Result<MassFunction, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::usage(format!("reading standard input: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
    };
    MassFunction::from_json(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn round_to(value: f64, precision: usize) -> f64 {
    format!("{value:.precision$}").parse().unwrap_or(value)
}

fn fmt(value: f64, precision: usize) -> String {
    format!("{value:.precision$}")
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn csv_string(rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn row<const N: usize>(fields: [&str; N]) -> Vec<String> {
    fields.iter().map(|s| s.to_string()).collect()
}

pub fn cmd_entropy(
    m: &MassFunction,
    measures: &[Measure],
    k: Option<u64>,
    precision: usize,
) -> Result<String, CliError> {
    if measures.contains(&Measure::Tfb) && k.is_none() {
        return Err(CliError::usage("--k is required when tfb is requested"));
    }
    let mut rows = Vec::with_capacity(measures.len());
    for &measure in measures {
        let mut r = EntropyReport::evaluate(m, measure, k)?;
        r.value = round_to(r.value, precision);
        rows.push(r);
    }
    Ok(to_json(&rows))
}

pub fn cmd_table(which: u8, precision: usize) -> Result<String, CliError> {
    match which {
        1 => {
            let mut rows = vec![row(["k", "n", "argument", "value"])];
            for k in 1..=4u64 {
                for n in 2..=5u32 {
                    let q = VolumeQuery::new(n, k)?;
                    let arg = q.argument().ok_or_else(|| Error::Overflow(format!("n={n}, k={k}")))?;
                    rows.push(vec![k.to_string(), n.to_string(), arg.to_string(), fmt(q.value(), precision)]);
                }
            }
            Ok(csv_string(rows))
        }
        2 => {
            let m = MassFunction::from_json(TABLE2_BPA)?;
            let dv = deng_volume(&m, f64::MIN_POSITIVE, 14)?;
            let mut rows = vec![row(["k", "deng_method", "hoivmf"])];
            for &(k, v) in &dv.values {
                rows.push(vec![k.to_string(), fmt(v, precision), fmt(hoivmf_value(2, k as u64), precision)]);
            }
            Ok(csv_string(rows))
        }
        other => Err(CliError::usage(format!("no table {other}; expected 1 or 2"))),
    }
}

/// Parse `1..9`, `1..=9`, `1,3,5` or `4`.
pub fn parse_orders(spec: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::usage(format!("invalid order list {spec:?}"));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    let orders: Vec<u64> = if let Some((a, b)) = spec.split_once("..") {
        let (lo, hi) = (num(a)?, num(b.trim_start_matches('='))?);
        if lo > hi {
            return Err(bad());
        }
        (lo..=hi).collect()
    } else {
        spec.split(',').map(num).collect::<Result<_, _>>()?
    };
    if orders.is_empty() || orders.contains(&0) {
        return Err(bad());
    }
    Ok(orders)
}

pub fn cmd_surface(orders: &[u64], step: f64, out_dir: Option<&Path>, precision: usize) -> Result<String, CliError> {
    let frame = Frame::new(["A", "B"])?;
    let mut rows = vec![row(["k", "mA", "mB", "mAB", "max", "hoivmf"])];
    for &k in orders {
        let spec = GridSpec::new(frame.clone(), step, GridMeasure::Tfb(k))?;
        let result = grid_search_max(&spec)?;
        if let Some(dir) = out_dir {
            fs::create_dir_all(dir).map_err(|e| CliError::usage(format!("{}: {e}", dir.display())))?;
            let path = dir.join(format!("surface_k{k}.csv"));
            let file = fs::File::create(&path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            result.write_csv(std::io::BufWriter::new(file), precision)?;
        }
        let p = result.argmax_point();
        rows.push(vec![
            k.to_string(),
            fmt(p.m_a, precision),
            fmt(p.m_b, precision),
            fmt(p.m_ab, precision),
            fmt(result.max_value, precision),
            fmt(hoivmf_value(2, k), precision),
        ]);
    }
    Ok(csv_string(rows))
}

pub fn cmd_trajectory(ratio: f64, steps: usize, precision: usize) -> Result<String, CliError> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(CliError::usage(format!("ratio must lie in [0, 1], got {ratio}")));
    }
    if steps < 2 {
        return Err(CliError::usage("steps must be at least 2"));
    }
    let frame = Frame::new(["A", "B"])?;
    let mut rows = vec![row(["t", "shannon_over_focal_masses", "fb", "deng", "tfb_k1", "tfb_k2", "tfb_k3"])];
    for i in 0..steps {
        let t = i as f64 / (steps - 1) as f64;
        let m = MassFunction::new(frame.clone(), [(0b01, ratio * t), (0b10, (1.0 - ratio) * t), (0b11, 1.0 - t)])?;
        let values = [
            shannon_of_masses(&m),
            fb_entropy(&m)?,
            deng_entropy(&m),
            tfb_entropy(&m, 1)?,
            tfb_entropy(&m, 2)?,
            tfb_entropy(&m, 3)?,
        ];
        let mut r = vec![fmt(t, precision)];
        r.extend(values.iter().map(|&v| fmt(v, precision)));
        rows.push(r);
    }
    Ok(csv_string(rows))
}

pub fn cmd_split(m: &MassFunction, k: u64, emit: Emit, all_rounds: bool, precision: usize) -> Result<String, CliError> {
    let tree = build_split_tree(m, k)?;
    match emit {
        Emit::Leaves => {
            let mut buf = Vec::new();
            tree.write_csv(&mut buf, all_rounds, precision)?;
            Ok(String::from_utf8(buf).expect("utf-8 csv"))
        }
        Emit::Counts => {
            let mut rows = vec![row(["origin", "count"])];
            for (origin, count) in tree.final_round().counts_by_origin() {
                rows.push(vec![m.frame().format_subset(origin), count.to_string()]);
            }
            Ok(csv_string(rows))
        }
    }
}

pub fn cmd_deng_volume(m: &MassFunction, epsilon: f64, max_iter: usize, precision: usize) -> Result<Output, CliError> {
    if max_iter == 0 {
        return Err(CliError::usage("max-iter must be at least 1"));
    }
    let dv = deng_volume(m, epsilon, max_iter)?;
    let mut rows = vec![row(["iteration", "value", "note"])];
    let last = dv.values.len();
    for &(i, v) in &dv.values {
        let note = if i == last { "final" } else { "" };
        rows.push(vec![i.to_string(), fmt(v, precision), note.to_string()]);
    }
    let mut warnings = Vec::new();
    if let Err(e) = dv.check() {
        rows.push(vec!["warning".into(), String::new(), e.to_string()]);
        warnings.push(e.to_string());
    }
    Ok(Output { stdout: csv_string(rows), warnings })
}
