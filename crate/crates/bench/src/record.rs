use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use nystrom_core::nystrom::Variant;

use crate::config::Selector;
use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The variant failed (Cholesky breakdown, singular solve, ...).
    Breakdown,
    /// The variant returned, but with non-finite entries or an error far
    /// above the optimal one.
    UnstableFlag,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Breakdown => "breakdown",
            Status::UnstableFlag => "unstable_flag",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ok" => Ok(Status::Ok),
            "breakdown" => Ok(Status::Breakdown),
            "unstable_flag" => Ok(Status::UnstableFlag),
            _ => Err(BenchError::IoError(format!("unknown status {s:?}"))),
        }
    }
}

/// One `(rank, variant)` outcome. Missing or non-finite values are `None`
/// and appear as empty CSV cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub rank: usize,
    pub variant: Variant,
    pub selector: Selector,
    pub rel_frob: Option<f64>,
    pub rel_spectral: Option<f64>,
    /// Optimal relative Frobenius error at the target rank.
    pub tsvd_rel_frob: f64,
    pub r_hat: Option<usize>,
    pub sigma_min_sq: Option<f64>,
    pub wall_time_ms: Option<f64>,
    pub status: Status,
}

pub const CSV_HEADER: [&str; 10] = [
    "rank",
    "variant",
    "selector",
    "rel_frob",
    "rel_spectral",
    "tsvd_rel_frob",
    "r_hat",
    "sigma_min_sq",
    "wall_time_ms",
    "status",
];

/// Shortest representation that parses back to the same value.
fn float_cell(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:e}"))
}

fn parse_cell<T: FromStr>(s: &str, column: &str) -> Result<Option<T>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| BenchError::IoError(format!("bad {column} value {s:?}")))
}

fn required<T>(v: Option<T>, column: &str) -> Result<T> {
    v.ok_or_else(|| BenchError::IoError(format!("missing {column}")))
}

/// Sort into the canonical order: rank, then variant name.
pub fn sort_records(records: &mut [SweepRecord]) {
    records.sort_by(|a, b| a.rank.cmp(&b.rank).then(a.variant.as_str().cmp(b.variant.as_str())));
}

pub fn write_csv(records: &[SweepRecord], out: impl Write) -> Result<()> {
    if records.is_empty() {
        return Err(BenchError::IoError("no records to write".into()));
    }
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &sorted {
        w.write_record([
            r.rank.to_string(),
            r.variant.to_string(),
            r.selector.to_string(),
            float_cell(r.rel_frob),
            float_cell(r.rel_spectral),
            float_cell(Some(r.tsvd_rel_frob)),
            r.r_hat.map_or_else(String::new, |k| k.to_string()),
            float_cell(r.sigma_min_sq),
            float_cell(r.wall_time_ms),
            r.status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(BenchError::IoError("no records to write".into()));
    }
    let file = std::fs::File::create(path)?;
    write_csv(records, std::io::BufWriter::new(file))
}

pub fn read_csv(input: impl Read) -> Result<Vec<SweepRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header: Vec<String> = rd.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(BenchError::IoError(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row?;
        let cell = |k: usize| row.get(k).unwrap_or("");
        let core = |e: nystrom_core::Error| BenchError::IoError(e.to_string());
        out.push(SweepRecord {
            rank: required(parse_cell(cell(0), "rank")?, "rank")?,
            variant: cell(1).parse().map_err(core)?,
            selector: cell(2).parse()?,
            rel_frob: parse_cell(cell(3), "rel_frob")?,
            rel_spectral: parse_cell(cell(4), "rel_spectral")?,
            tsvd_rel_frob: required(parse_cell(cell(5), "tsvd_rel_frob")?, "tsvd_rel_frob")?,
            r_hat: parse_cell(cell(6), "r_hat")?,
            sigma_min_sq: parse_cell(cell(7), "sigma_min_sq")?,
            wall_time_ms: parse_cell(cell(8), "wall_time_ms")?,
            status: cell(9).parse()?,
        });
    }
    Ok(out)
}
