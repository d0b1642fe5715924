//! CSV and JSON serialization of sweep rows.
//!
//! Reals are written with 12 significant digits in scientific notation so
//! output is byte-stable across runs and platforms. Infeasible cells leave
//! their result columns empty (CSV) or `null` (JSON).

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::binomial::{SelectionMode, TailConvention};
use crate::error::{Error, Result};
use crate::sweep::SweepRow;

pub const CSV_HEADER: [&str; 8] = [
    "alpha",
    "n",
    "s_selected",
    "p_achieved",
    "log_bf01",
    "posterior_h0",
    "mode",
    "tail",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::invalid("format", other, "expected `csv` or `json`")),
        }
    }
}

/// `x` with 12 significant digits, e.g. `5.22725551235e-1`.
pub fn format_real(x: f64) -> String {
    format!("{x:.11e}")
}

/// `x` rounded to the value its 12-digit serialization parses back to.
pub fn round_real(x: f64) -> f64 {
    format_real(x).parse().expect("formatted float parses")
}

#[derive(Serialize)]
struct JsonRow {
    alpha: f64,
    n: u64,
    s_selected: Option<u64>,
    p_achieved: Option<f64>,
    log_bf01: Option<f64>,
    posterior_h0: Option<f64>,
    mode: SelectionMode,
    tail: TailConvention,
}

impl From<&SweepRow> for JsonRow {
    fn from(row: &SweepRow) -> Self {
        JsonRow {
            alpha: round_real(row.alpha),
            n: row.n,
            s_selected: row.s_selected,
            p_achieved: row.p_achieved.map(round_real),
            log_bf01: row.log_bf01.map(round_real),
            posterior_h0: row.posterior_h0.map(round_real),
            mode: row.mode,
            tail: row.tail,
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

/// Writes `rows` in sweep order.
pub fn write_rows<W: Write>(rows: &[SweepRow], format: OutputFormat, writer: W) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(rows, writer),
        OutputFormat::Json => {
            let mut writer = writer;
            let view: Vec<JsonRow> = rows.iter().map(JsonRow::from).collect();
            serde_json::to_writer_pretty(&mut writer, &view)
                .map_err(|e| Error::Format(e.to_string()))?;
            writeln!(writer).map_err(|e| Error::Format(e.to_string()))
        }
    }
}

fn write_csv<W: Write>(rows: &[SweepRow], writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(CSV_HEADER).map_err(csv_error)?;
    let opt_real = |v: Option<f64>| v.map(format_real).unwrap_or_default();
    for row in rows {
        out.write_record([
            format_real(row.alpha),
            row.n.to_string(),
            row.s_selected.map(|s| s.to_string()).unwrap_or_default(),
            opt_real(row.p_achieved),
            opt_real(row.log_bf01),
            opt_real(row.posterior_h0),
            row.mode.to_string(),
            row.tail.to_string(),
        ])
        .map_err(csv_error)?;
    }
    out.flush().map_err(|e| Error::Format(e.to_string()))
}

/// Writes `rows` to the file at `destination`, creating or truncating it.
pub fn emit(rows: &[SweepRow], format: OutputFormat, destination: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: destination.to_path_buf(),
        source,
    };
    let file = File::create(destination).map_err(io_err)?;
    let mut writer = BufWriter::new(file);
    write_rows(rows, format, &mut writer).map_err(|e| match e {
        Error::Format(msg) => Error::Format(format!("{}: {msg}", destination.display())),
        other => other,
    })?;
    writer.flush().map_err(io_err)
}

/// Parses CSV produced by [`write_rows`].
pub fn read_csv<R: Read>(reader: R) -> Result<Vec<SweepRow>> {
    let mut input = csv::Reader::from_reader(reader);
    let header = input.headers().map_err(csv_error)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Format(format!(
            "unexpected header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut rows = Vec::new();
    for (line, record) in input.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let bad = |col: &str, value: &str| {
            Error::Format(format!("row {}: bad {col} `{value}`", line + 1))
        };
        let real = |i: usize| -> Result<f64> {
            field(i).parse().map_err(|_| bad(CSV_HEADER[i], field(i)))
        };
        let opt_real = |i: usize| -> Result<Option<f64>> {
            if field(i).is_empty() {
                Ok(None)
            } else {
                real(i).map(Some)
            }
        };
        rows.push(SweepRow {
            alpha: real(0)?,
            n: field(1).parse().map_err(|_| bad("n", field(1)))?,
            s_selected: if field(2).is_empty() {
                None
            } else {
                Some(field(2).parse().map_err(|_| bad("s_selected", field(2)))?)
            },
            p_achieved: opt_real(3)?,
            log_bf01: opt_real(4)?,
            posterior_h0: opt_real(5)?,
            mode: field(6).parse().map_err(|_| bad("mode", field(6)))?,
            tail: field(7).parse().map_err(|_| bad("tail", field(7)))?,
        });
    }
    Ok(rows)
}
