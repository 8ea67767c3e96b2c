//! Deterministic CSV and JSON writers.

use lattperm::scalar::Rational;
use lattperm::{Report, Torus};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub const SCHEMA: &str = "lattperm.report/1";

pub enum Sink {
    Stdout(BufWriter<io::Stdout>),
    File(BufWriter<File>),
}

impl Sink {
    pub fn open(path: Option<&Path>) -> io::Result<Self> {
        Ok(match path {
            Some(p) => Sink::File(BufWriter::new(File::create(p)?)),
            None => Sink::Stdout(BufWriter::new(io::stdout())),
        })
    }

    pub fn json<T: Serialize>(&mut self, v: &T) -> io::Result<()> {
        let s = serde_json::to_string_pretty(v).map_err(io::Error::other)?;
        writeln!(self, "{s}")
    }
}

impl Write for Sink {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self {
            Sink::Stdout(w) => w.write(buf),
            Sink::File(w) => w.write(buf),
        }
    }
    fn flush(&mut self) -> io::Result<()> {
        match self {
            Sink::Stdout(w) => w.flush(),
            Sink::File(w) => w.flush(),
        }
    }
}

/// Verification report in the shipped JSON schema.
#[derive(Serialize)]
pub struct JsonReport {
    pub schema: &'static str,
    pub check: String,
    pub params: BTreeMap<&'static str, String>,
    pub pass: bool,
    pub checked: usize,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub known_failure: Option<String>,
}

impl JsonReport {
    pub fn new(check: String, params: BTreeMap<&'static str, String>, r: Report) -> Self {
        JsonReport {
            schema: SCHEMA,
            check,
            params,
            pass: r.pass,
            checked: r.checked,
            witnesses: r.witnesses,
            notes: r.notes,
            known_failure: None,
        }
    }
}

pub fn csv_header_named(out: &mut impl Write, d: usize, prefix: &str, cols: &[&str]) -> io::Result<()> {
    let mut h: Vec<String> = (1..=d).map(|i| format!("{prefix}_{i}")).collect();
    h.extend(cols.iter().map(|c| c.to_string()));
    writeln!(out, "{}", h.join(","))
}

pub fn csv_header(out: &mut impl Write, d: usize, name: &str) -> io::Result<()> {
    csv_header_named(out, d, "x", &[&format!("{name}_num"), &format!("{name}_den")])
}

pub fn csv_row(out: &mut impl Write, c: &[i64], q: &Rational) -> io::Result<()> {
    let mut f: Vec<String> = c.iter().map(|v| v.to_string()).collect();
    f.push(q.numer().to_string());
    f.push(q.denom().to_string());
    writeln!(out, "{}", f.join(","))
}

pub fn csv_floats(out: &mut impl Write, c: &[i64], vals: &[f64]) -> io::Result<()> {
    let mut f: Vec<String> = c.iter().map(|v| v.to_string()).collect();
    f.extend(vals.iter().map(|v| format!("{v:.17e}")));
    writeln!(out, "{}", f.join(","))
}

/// One row per site in site-index order.
pub fn csv_rational(out: &mut impl Write, t: &Torus, name: &str, v: &[Rational]) -> io::Result<()> {
    csv_header(out, t.d(), name)?;
    for (x, q) in v.iter().enumerate() {
        csv_row(out, &t.coords(x), q)?;
    }
    Ok(())
}
