//! CSV files written by the command line tool.
//!
//! Every number is written in scientific notation with 17 significant digits,
//! which reads back to the identical `f64`.

use std::io::{Read, Write};

use crate::driver::{DiffSample, DiffSeries, EocRow, ErrorSample, ErrorSeries};
use crate::error::{Error, Result};

pub const ERROR_HEADER: [&str; 3] = ["time", "l2_error", "linf_error"];
pub const DIFF_HEADER: [&str; 2] = ["time", "linf_diff"];
pub const EOC_HEADER: [&str; 3] = ["n_elem", "l2_error", "order"];

pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Data(e.to_string())
}

fn write_rows<W: Write>(
    out: W,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(&row).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

fn read_rows<R: Read>(input: R, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_reader(input);
    let found = r.headers().map_err(io_err)?;
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Data(format!(
            "expected header '{}', found '{}'",
            header.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    r.records()
        .map(|rec| {
            let rec = rec.map_err(io_err)?;
            rec.iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| Error::Data(format!("bad number '{f}'")))
                })
                .collect()
        })
        .collect()
}

pub fn write_error_series<W: Write>(out: W, series: &ErrorSeries) -> Result<()> {
    write_rows(
        out,
        &ERROR_HEADER,
        series.samples.iter().map(|s| {
            vec![
                format_f64(s.time),
                format_f64(s.l2_error),
                format_f64(s.linf_error),
            ]
        }),
    )
}

pub fn read_error_series<R: Read>(input: R) -> Result<ErrorSeries> {
    let samples = read_rows(input, &ERROR_HEADER)?
        .into_iter()
        .map(|r| ErrorSample {
            time: r[0],
            l2_error: r[1],
            linf_error: r[2],
        })
        .collect();
    Ok(ErrorSeries { samples })
}

pub fn write_diff_series<W: Write>(out: W, series: &DiffSeries) -> Result<()> {
    write_rows(
        out,
        &DIFF_HEADER,
        series
            .samples
            .iter()
            .map(|s| vec![format_f64(s.time), format_f64(s.linf_diff)]),
    )
}

pub fn read_diff_series<R: Read>(input: R) -> Result<DiffSeries> {
    let samples = read_rows(input, &DIFF_HEADER)?
        .into_iter()
        .map(|r| DiffSample {
            time: r[0],
            linf_diff: r[1],
        })
        .collect();
    Ok(DiffSeries { samples })
}

pub fn write_eoc_table<W: Write>(out: W, rows: &[EocRow]) -> Result<()> {
    write_rows(
        out,
        &EOC_HEADER,
        rows.iter().map(|r| {
            vec![
                r.n_elem.to_string(),
                format_f64(r.l2_error),
                r.order.map(format_f64).unwrap_or_default(),
            ]
        }),
    )
}
