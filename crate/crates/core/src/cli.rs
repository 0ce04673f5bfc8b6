//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on bad input or a failed precondition, 2 when
//! `check-theorem` finds a failing instance.

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::{
    check_margin_grid, span_locus_codim_lower, summarize, BoundReport, BoundVariant, MarginGrid,
    MarginReport, ProblemInstance,
};
use crate::catalog::quadric_pair_table;
use crate::error::{Error, Result};
use crate::exactmath::{hilbert_lower_bound, ExactInt};
use crate::gfpoly::{
    estimate_codim_sweep, positive_dim_test_with, Certificate, CountReport, ExcessMethod,
    ExtensionSchedule, GaloisField, LabConfig, Mode, TupleFile, DEFAULT_SIZE_GUARD,
};

pub const WORKERS_ENV: &str = "EXCESS_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "excess", version, about = "Excess-intersection codimension calculators and a finite-field lab")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Worker threads for the parallel subcommands
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Omit the generation timestamp from JSON output
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate h_{r,a}(d)
    Hilbert {
        #[arg(long)]
        r: Span,
        #[arg(long)]
        a: Span,
        #[arg(long)]
        d: Span,
    },
    /// Lower bound for the span-b excess locus
    Bound {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        d: DegreeList,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value = "eq")]
        variant: BoundVariant,
    },
    /// Check bound >= chain > line over a grid or one instance
    CheckTheorem {
        #[arg(long, default_value = "2..8")]
        r: Span,
        #[arg(long, default_value = "1..3")]
        a: Span,
        /// Degree range for the grid (`1..6`) or one degree tuple (`1,1`)
        #[arg(long, default_value = "1..6")]
        d: DegreeSpec,
    },
    /// Codimensions of the common-hyperplane and common-quadric components for quadric pairs
    Catalog {
        #[arg(long)]
        rmax: u32,
    },
    /// Count tuples with excess common zero sets over finite fields
    Bruteforce {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d: DegreeList,
        #[arg(long, default_value_t = 1)]
        a: u32,
        /// Field orders
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        #[arg(long)]
        sampled: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        /// Count over every extension degree 1..=m-max
        #[arg(long)]
        m_max: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_SIZE_GUARD)]
        size_guard: u128,
        #[arg(long, default_value = "auto")]
        method: ExcessMethod,
    },
    /// Decide one tuple read from a JSON file
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long)]
        m_max: Option<u32>,
        #[arg(long, default_value = "auto")]
        method: ExcessMethod,
    },
}

/// Inclusive integer range written `lo..hi` or as a single value. `lo > hi`
/// is an empty range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span(pub RangeInclusive<u32>);

impl FromStr for Span {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("invalid range `{s}`"));
        match s.split_once("..") {
            Some((lo, hi)) => Ok(Span(num(lo)?..=num(hi.trim_start_matches('='))?)),
            None => num(s).map(|v| Span(v..=v)),
        }
    }
}

/// Comma-separated degrees, which must be non-decreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeList(pub Vec<u32>);

impl FromStr for DegreeList {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let degrees = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| format!("invalid degree list `{s}`")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if degrees.windows(2).any(|w| w[0] > w[1]) {
            return Err(format!("degrees `{s}` must be given in non-decreasing order"));
        }
        Ok(DegreeList(degrees))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeSpec {
    Range(Span),
    Tuple(DegreeList),
}

impl FromStr for DegreeSpec {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.contains("..") {
            s.parse().map(DegreeSpec::Range)
        } else {
            s.parse().map(DegreeSpec::Tuple)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertRow {
    pub r: u32,
    pub a: u32,
    pub d: u32,
    pub h: ExactInt,
}

/// Flat rendering of a [`BoundReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    pub r: u32,
    pub a: u32,
    pub degrees: Vec<u32>,
    pub b: u32,
    pub variant: BoundVariant,
    pub bound: ExactInt,
    pub argmin: Vec<u32>,
}

impl From<&BoundReport> for BoundRow {
    fn from(rep: &BoundReport) -> Self {
        BoundRow {
            r: rep.instance.r(),
            a: rep.instance.a(),
            degrees: rep.instance.degrees().to_vec(),
            b: rep.b,
            variant: rep.variant,
            bound: rep.lower_bound.clone(),
            argmin: rep.argmin.indices().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginLine {
    pub r: u32,
    pub a: u32,
    pub degrees: Vec<u32>,
    pub b: u32,
    pub bound: ExactInt,
    pub argmin: Vec<u32>,
    pub chain: ExactInt,
    pub line: ExactInt,
    pub pass: bool,
}

fn margin_lines(rep: &MarginReport) -> impl Iterator<Item = MarginLine> + '_ {
    rep.rows.iter().map(move |row| MarginLine {
        r: rep.instance.r(),
        a: rep.instance.a(),
        degrees: rep.instance.degrees().to_vec(),
        b: row.b,
        bound: row.bound.clone(),
        argmin: row.argmin.indices().to_vec(),
        chain: row.chain.clone(),
        line: row.line.clone(),
        pass: row.pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub p: u64,
    pub m: u32,
    pub r: u32,
    pub a: u32,
    pub degrees: Vec<u32>,
    pub positive: bool,
    pub certificate: Certificate,
}

/// JSON output wrapper shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at_unix: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<Value>,
    pub rows: Vec<T>,
}

struct Rendered {
    command: &'static str,
    header: Vec<String>,
    cells: Vec<Vec<String>>,
    rows: Vec<Value>,
    summary: Option<Value>,
    // text-only lines after the table
    notes: Vec<String>,
    exit: i32,
}

impl Rendered {
    fn new<T: Serialize>(command: &'static str, header: &[&str], cells: Vec<Vec<String>>, rows: &[T]) -> Result<Self> {
        Ok(Rendered {
            command,
            header: header.iter().map(|s| s.to_string()).collect(),
            cells,
            rows: rows.iter().map(serde_json::to_value).collect::<std::result::Result<_, _>>()?,
            summary: None,
            notes: Vec::new(),
            exit: 0,
        })
    }

    fn render(&self, common: &CommonArgs) -> Result<Vec<u8>> {
        match common.format {
            Format::Text => Ok(self.text().into_bytes()),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header)?;
                for row in &self.cells {
                    w.write_record(row)?;
                }
                w.into_inner().map_err(|e| Error::Input(e.to_string()))
            }
            Format::Json => {
                let generated_at_unix = (!common.no_timestamp)
                    .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
                let env = Envelope {
                    command: self.command.to_string(),
                    generated_at_unix,
                    summary: self.summary.clone(),
                    rows: self.rows.clone(),
                };
                let mut out = serde_json::to_vec_pretty(&env)?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }

    fn text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(String::len).collect();
        for row in &self.cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let line = |row: &[String]| {
            let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            cells.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = String::new();
        if !self.header.is_empty() {
            out += &line(&self.header);
            for row in &self.cells {
                out += &line(row);
            }
        }
        for note in &self.notes {
            out += note;
            out.push('\n');
        }
        out
    }
}

fn tuple_str(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn workers(common: &CommonArgs) -> usize {
    common
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from))
        .max(1)
}

fn schedule(m_max: Option<u32>) -> Result<ExtensionSchedule> {
    match m_max {
        Some(0) => Err(Error::Input("--m-max must be >= 1".into())),
        Some(m) => Ok(ExtensionSchedule::UpTo(m)),
        None => Ok(ExtensionSchedule::Default),
    }
}

fn cmd_hilbert(r: &Span, a: &Span, d: &Span) -> Result<Rendered> {
    if d.0.contains(&0) {
        return Err(Error::Input("degrees in --d must be >= 1".into()));
    }
    let mut rows = Vec::new();
    for r in r.0.clone() {
        for a in a.0.clone().filter(|&a| a <= r) {
            for d in d.0.clone() {
                rows.push(HilbertRow { r, a, d, h: hilbert_lower_bound(r, a, d)? });
            }
        }
    }
    let cells = rows
        .iter()
        .map(|x| vec![x.r.to_string(), x.a.to_string(), x.d.to_string(), x.h.to_string()])
        .collect();
    Rendered::new("hilbert", &["r", "a", "d", "h"], cells, &rows)
}

fn cmd_bound(r: u32, a: u32, degrees: &[u32], b: u32, variant: BoundVariant) -> Result<Rendered> {
    let instance = ProblemInstance::new(r, a, degrees.to_vec())?;
    let row = BoundRow::from(&span_locus_codim_lower(&instance, b, variant)?);
    let cells = vec![vec![
        row.r.to_string(),
        row.a.to_string(),
        tuple_str(&row.degrees),
        row.b.to_string(),
        row.variant.as_str().to_string(),
        row.bound.to_string(),
        tuple_str(&row.argmin),
    ]];
    Rendered::new("bound", &["r", "a", "degrees", "b", "variant", "bound", "argmin"], cells, &[row])
}

fn cmd_check_theorem(r: &Span, a: &Span, d: &DegreeSpec, workers: usize) -> Result<Rendered> {
    let reports = match d {
        DegreeSpec::Range(span) => {
            check_margin_grid(&MarginGrid { r: r.0.clone(), a: a.0.clone(), degree_range: span.0.clone() }, workers)?
        }
        DegreeSpec::Tuple(list) => {
            let single = |s: &Span| (s.0.start() == s.0.end()).then(|| *s.0.start());
            let (Some(r), Some(a)) = (single(r), single(a)) else {
                return Err(Error::Input("a degree tuple in --d needs single values for --r and --a".into()));
            };
            let instance = ProblemInstance::new(r, a, list.0.clone())?;
            vec![crate::bounds::theorem_margin_check(&instance)?]
        }
    };
    let summary = summarize(&reports);
    let lines: Vec<MarginLine> = reports.iter().flat_map(margin_lines).collect();
    let cells = lines
        .iter()
        .map(|l| {
            vec![
                l.r.to_string(),
                l.a.to_string(),
                tuple_str(&l.degrees),
                l.b.to_string(),
                l.bound.to_string(),
                tuple_str(&l.argmin),
                l.chain.to_string(),
                l.line.to_string(),
                if l.pass { "pass" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    let mut out = Rendered::new(
        "check-theorem",
        &["r", "a", "degrees", "b", "bound", "argmin", "chain", "line", "pass"],
        cells,
        &lines,
    )?;
    if reports.len() != 1 {
        // the grid is too large for a human table; keep failures only
        out.cells.retain(|c| c[8] != "pass");
        if out.cells.is_empty() {
            out.header.clear();
        }
    }
    for fail in &summary.failures {
        let b: Vec<String> = fail.witnesses().map(|b| b.to_string()).collect();
        out.notes.push(format!("witness: {} fails at b = {}", fail.instance, b.join(",")));
    }
    out.notes.push(format!(
        "instances={} checks={} failures={} {}",
        summary.instances,
        summary.checks,
        summary.failures.len(),
        if summary.pass() { "PASS" } else { "FAIL" }
    ));
    out.summary = Some(json!({
        "instances": summary.instances,
        "checks": summary.checks,
        "failures": summary.failures.len(),
        "pass": summary.pass(),
    }));
    out.exit = if summary.pass() { 0 } else { 2 };
    Ok(out)
}

fn cmd_catalog(rmax: u32) -> Result<Rendered> {
    let rows = quadric_pair_table(rmax)?;
    let cells = rows
        .iter()
        .map(|x| {
            vec![
                x.r.to_string(),
                x.codim_hyperplane.to_string(),
                x.codim_quadric.to_string(),
                x.dominant.as_str().to_string(),
            ]
        })
        .collect();
    Rendered::new("catalog", &["r", "codim_hyperplane", "codim_quadric", "dominant"], cells, &rows)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bruteforce(
    r: u32,
    degrees: &[u32],
    a: u32,
    qs: &[u64],
    mode: Mode,
    m_max: Option<u32>,
    size_guard: u128,
    method: ExcessMethod,
    workers: usize,
) -> Result<Rendered> {
    let fields = qs.iter().map(|&q| GaloisField::of_order(q)).collect::<Result<Vec<_>>>()?;
    let config = LabConfig { workers, size_guard, method, schedule: schedule(m_max)? };
    let reports: Vec<CountReport> = estimate_codim_sweep(r, degrees, a, &fields, mode, &config)?;
    let cells = reports.iter().map(CountReport::csv_record).collect();
    Rendered::new("bruteforce", &CountReport::CSV_HEADER, cells, &reports)
}

fn cmd_classify(input: &std::path::Path, a: u32, m_max: Option<u32>, method: ExcessMethod) -> Result<Rendered> {
    let file = TupleFile::read(input)?;
    let tuple = file.to_instance()?;
    let verdict = positive_dim_test_with(&tuple, a, schedule(m_max)?, method)?;
    let row = Classification {
        p: file.p,
        m: file.m,
        r: file.r,
        a,
        degrees: file.degrees.clone(),
        positive: verdict.positive,
        certificate: verdict.certificate,
    };
    let cells = vec![vec![
        row.p.to_string(),
        row.m.to_string(),
        row.r.to_string(),
        row.a.to_string(),
        tuple_str(&row.degrees),
        row.positive.to_string(),
        serde_json::to_string(&row.certificate)?,
    ]];
    Rendered::new("classify", &["p", "m", "r", "a", "degrees", "positive", "certificate"], cells, &[row])
}

fn dispatch(cli: &Cli) -> Result<Rendered> {
    let w = workers(&cli.common);
    match &cli.command {
        Command::Hilbert { r, a, d } => cmd_hilbert(r, a, d),
        Command::Bound { r, a, d, b, variant } => cmd_bound(*r, *a, &d.0, *b, *variant),
        Command::CheckTheorem { r, a, d } => cmd_check_theorem(r, a, d, w),
        Command::Catalog { rmax } => cmd_catalog(*rmax),
        Command::Bruteforce { r, d, a, q, sampled, seed, n, m_max, size_guard, method } => {
            let mode = if *sampled { Mode::Sampled { seed: *seed, n: *n } } else { Mode::Exhaustive };
            cmd_bruteforce(*r, &d.0, *a, q, mode, *m_max, *size_guard, *method, w)
        }
        Command::Classify { input, a, m_max, method } => cmd_classify(input, *a, *m_max, *method),
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = dispatch(&cli).and_then(|rendered| {
        let bytes = rendered.render(&cli.common)?;
        match &cli.common.output {
            Some(path) => std::fs::write(path, bytes)?,
            None => out.write_all(&bytes)?,
        }
        Ok(rendered.exit)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
