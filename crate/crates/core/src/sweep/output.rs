//! CSV and JSON serialization of sweep results.
//!
//! Floats are written in Rust's shortest round-trip form, so parsing an
//! emitted file recovers every value bit for bit.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{OutputFormat, SweepResult, SweepRow};
use crate::error::{Error, Result};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn orders(result: &SweepResult) -> std::ops::RangeInclusive<usize> {
    result.config.k_min..=result.config.k_max
}

pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = [
        "d",
        "k_selected",
        "h_expected_bits",
        "h_rate_q_bits",
        "kl_correction_bits",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(orders(result).map(|k| format!("log_evidence_k{k}")));
    header.extend(orders(result).map(|k| format!("p_order_k{k}")));
    w.write_record(&header)?;

    let width = orders(result).count();
    for row in &result.rows {
        let mut rec = vec![
            row.d.to_string(),
            opt(row.k_selected),
            opt(row.h_expected_bits),
            opt(row.h_rate_q_bits),
            opt(row.kl_correction_bits),
        ];
        for values in [&row.log_evidence, &row.p_order] {
            rec.extend((0..width).map(|i| opt(values.get(i))));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Per-(d, k) estimates, one line per decision point and order.
pub fn write_detail_csv<W: Write>(result: &SweepResult, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "d",
        "k",
        "log_evidence",
        "p_order",
        "h_expected_bits",
        "h_rate_q_bits",
        "kl_correction_bits",
    ])?;
    for row in result.rows.iter().filter(|r| r.is_ok()) {
        for (i, est) in row.per_order.iter().enumerate() {
            w.write_record([
                row.d.to_string(),
                est.order.to_string(),
                opt(row.log_evidence.get(i)),
                opt(row.p_order.get(i)),
                est.expected_info.to_string(),
                est.h_rate_q.to_string(),
                est.kl_correction.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes the summary to `path`, or to stdout when `path` is `None`.
pub fn emit(result: &SweepResult, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    let stdout = Path::new("<stdout>");
    let shown = path.unwrap_or(stdout);
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_err(p))?)),
        None => Box::new(std::io::stdout().lock()),
    };
    match format {
        OutputFormat::Csv => write_csv(result, sink).map_err(|e| csv_err(shown, e)),
        OutputFormat::Json => {
            let mut sink = sink;
            serde_json::to_writer_pretty(&mut sink, result).map_err(|e| Error::Format {
                path: shown.to_path_buf(),
                message: e.to_string(),
            })?;
            writeln!(sink)
                .and_then(|_| sink.flush())
                .map_err(io_err(shown))
        }
    }
}

pub fn emit_detail(result: &SweepResult, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    write_detail_csv(result, BufWriter::new(file)).map_err(|e| csv_err(path, e))
}

fn parse_field<T: std::str::FromStr>(path: &Path, name: &str, raw: &str) -> Result<Option<T>> {
    if raw.is_empty() {
        return Ok(None);
    }
    raw.parse().map(Some).map_err(|_| Error::Format {
        path: path.to_path_buf(),
        message: format!("column {name}: cannot parse {raw:?}"),
    })
}

/// Reads summary rows back from a CSV written by [`emit`]. Per-order
/// estimates are not part of the summary and come back empty.
pub fn parse_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = reader.headers().map_err(|e| csv_err(path, e))?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Format {
                path: path.to_path_buf(),
                message: format!("missing column {name}"),
            })
    };
    let fixed = [
        col("d")?,
        col("k_selected")?,
        col("h_expected_bits")?,
        col("h_rate_q_bits")?,
        col("kl_correction_bits")?,
    ];
    let evidence_cols: Vec<usize> = (0..header.len())
        .filter(|&i| header[i].starts_with("log_evidence_k"))
        .collect();
    let order_cols: Vec<usize> = (0..header.len())
        .filter(|&i| header[i].starts_with("p_order_k"))
        .collect();

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let get = |i: usize| record.get(i).unwrap_or("");
        let d = parse_field(path, "d", get(fixed[0]))?.ok_or_else(|| Error::Format {
            path: path.to_path_buf(),
            message: "empty decision point".into(),
        })?;
        let k_selected = parse_field(path, "k_selected", get(fixed[1]))?;
        let collect = |cols: &[usize]| -> Result<Vec<f64>> {
            cols.iter()
                .filter_map(|&i| parse_field(path, &header[i], get(i)).transpose())
                .collect()
        };
        rows.push(SweepRow {
            d,
            k_selected,
            h_expected_bits: parse_field(path, "h_expected_bits", get(fixed[2]))?,
            h_rate_q_bits: parse_field(path, "h_rate_q_bits", get(fixed[3]))?,
            kl_correction_bits: parse_field(path, "kl_correction_bits", get(fixed[4]))?,
            log_evidence: collect(&evidence_cols)?,
            p_order: collect(&order_cols)?,
            per_order: Vec::new(),
            error: k_selected
                .is_none()
                .then(|| "row failed during the sweep".to_string()),
        });
    }
    Ok(rows)
}

pub fn parse_json(path: &Path) -> Result<SweepResult> {
    let file = File::open(path).map_err(io_err(path))?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
