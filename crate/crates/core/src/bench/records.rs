//! CSV form of trial and aggregate records.
//!
//! Reals are written like C's `%.6g`; missing values are empty fields.

use std::path::Path;

use super::aggregate::AggregateRecord;
use super::sweep::TrialRecord;
use crate::error::{Error, Result};

pub const TRIAL_COLUMNS: [&str; 13] = [
    "family",
    "n",
    "c",
    "algorithm",
    "trial_index",
    "seed",
    "m_edges",
    "matching_size",
    "oracle_size",
    "o1",
    "o2",
    "h",
    "wall_time_seconds",
];

pub const AGGREGATE_COLUMNS: [&str; 11] = [
    "family", "n", "c", "algorithm", "lambda", "rho", "t_bar", "t_var", "f_o1", "f_o2", "f_h",
];

/// Formats `x` with 6 significant digits, trailing zeros removed.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn optional<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn trial_row(r: &TrialRecord) -> [String; 13] {
    [
        r.family.to_string(),
        r.n.to_string(),
        format_real(r.c),
        r.algorithm.to_string(),
        r.trial_index.to_string(),
        r.seed.to_string(),
        r.m_edges.to_string(),
        r.matching_size.to_string(),
        optional(r.oracle_size),
        r.o1.to_string(),
        r.o2.to_string(),
        r.h.to_string(),
        format_real(r.wall_time_seconds),
    ]
}

fn aggregate_row(a: &AggregateRecord) -> [String; 11] {
    [
        a.family.to_string(),
        a.n.to_string(),
        format_real(a.c),
        a.algorithm.to_string(),
        optional(a.lambda.map(format_real)),
        optional(a.rho.map(format_real)),
        format_real(a.t_bar),
        format_real(a.t_var),
        format_real(a.f_o1),
        format_real(a.f_o2),
        format_real(a.f_h),
    ]
}

fn write_rows<const K: usize>(
    path: &Path,
    header: [&str; K],
    rows: impl Iterator<Item = [String; K]>,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    w.write_record(header).map_err(|e| Error::csv(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_trials_csv(records: &[TrialRecord], path: impl AsRef<Path>) -> Result<()> {
    write_rows(path.as_ref(), TRIAL_COLUMNS, records.iter().map(trial_row))
}

pub fn write_aggregates_csv(records: &[AggregateRecord], path: impl AsRef<Path>) -> Result<()> {
    write_rows(path.as_ref(), AGGREGATE_COLUMNS, records.iter().map(aggregate_row))
}

/// Parses the rows of a CSV file whose header must equal `header`.
fn read_rows<const K: usize, T>(
    path: &Path,
    header: [&str; K],
    parse: impl Fn(&csv::StringRecord) -> std::result::Result<T, String>,
) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let found = r.headers().map_err(|e| Error::csv(path, e))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("{}: unexpected header {:?}", path.display(), found),
        });
    }
    let mut out = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row.map_err(|e| Error::csv(path, e))?;
        let value = parse(&row).map_err(|msg| Error::Parse {
            line: i + 2,
            msg: format!("{}: {msg}", path.display()),
        })?;
        out.push(value);
    }
    Ok(out)
}

fn field<T: std::str::FromStr>(row: &csv::StringRecord, i: usize, name: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    let raw = row.get(i).ok_or_else(|| format!("missing column {name}"))?;
    raw.parse().map_err(|e| format!("column {name}: {raw:?}: {e}"))
}

fn optional_field<T: std::str::FromStr>(
    row: &csv::StringRecord,
    i: usize,
    name: &str,
) -> std::result::Result<Option<T>, String>
where
    T::Err: std::fmt::Display,
{
    match row.get(i) {
        Some("") => Ok(None),
        _ => field(row, i, name).map(Some),
    }
}

pub fn read_trials_csv(path: impl AsRef<Path>) -> Result<Vec<TrialRecord>> {
    read_rows(path.as_ref(), TRIAL_COLUMNS, |row| {
        let c = TRIAL_COLUMNS;
        Ok(TrialRecord {
            family: field(row, 0, c[0])?,
            n: field(row, 1, c[1])?,
            c: field(row, 2, c[2])?,
            algorithm: field(row, 3, c[3])?,
            trial_index: field(row, 4, c[4])?,
            seed: field(row, 5, c[5])?,
            m_edges: field(row, 6, c[6])?,
            matching_size: field(row, 7, c[7])?,
            oracle_size: optional_field(row, 8, c[8])?,
            o1: field(row, 9, c[9])?,
            o2: field(row, 10, c[10])?,
            h: field(row, 11, c[11])?,
            wall_time_seconds: field(row, 12, c[12])?,
        })
    })
}

pub fn read_aggregates_csv(path: impl AsRef<Path>) -> Result<Vec<AggregateRecord>> {
    read_rows(path.as_ref(), AGGREGATE_COLUMNS, |row| {
        let c = AGGREGATE_COLUMNS;
        Ok(AggregateRecord {
            family: field(row, 0, c[0])?,
            n: field(row, 1, c[1])?,
            c: field(row, 2, c[2])?,
            algorithm: field(row, 3, c[3])?,
            lambda: optional_field(row, 4, c[4])?,
            rho: optional_field(row, 5, c[5])?,
            t_bar: field(row, 6, c[6])?,
            t_var: field(row, 7, c[7])?,
            f_o1: field(row, 8, c[8])?,
            f_o2: field(row, 9, c[9])?,
            f_h: field(row, 10, c[10])?,
        })
    })
}
