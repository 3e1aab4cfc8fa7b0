use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::integrate::TerminalEvent;
use crate::model::{CaseLabel, ModelParams};

/// Version of the report schema, written into every JSON report.
pub const SPEC_VERSION: &str = "1.0";

pub(crate) enum Sink {
    Stdout(io::StdoutLock<'static>),
    File(BufWriter<File>),
}

impl Sink {
    pub(crate) fn open(path: Option<&Path>) -> Result<Self> {
        Ok(match path {
            Some(p) => Sink::File(BufWriter::new(File::create(p)?)),
            None => Sink::Stdout(io::stdout().lock()),
        })
    }

    pub(crate) fn finish(mut self) -> Result<()> {
        self.flush()?;
        Ok(())
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

/// A report that can be written as CSV or JSON.
pub trait Report: Serialize {
    fn write_csv(&self, w: &mut dyn Write) -> Result<()>;
}

pub(crate) fn write_json<T: Serialize + ?Sized>(w: &mut impl Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    w.write_all(b"\n")?;
    Ok(())
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn csv_writer(w: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::Writer::from_writer(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub r: f64,
    pub h: f64,
    pub dh: f64,
    pub energy_cum: f64,
    /// `lhs - rhs` of the Pohozaev identity
    pub pohozaev_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrateReport {
    pub spec_version: &'static str,
    pub params: ModelParams,
    pub a: f64,
    pub k: i64,
    pub r0: f64,
    pub terminal: TerminalEvent,
    pub energy: f64,
    pub pohozaev_sup_relative_residual: f64,
    pub samples: Vec<ProfileRow>,
}

impl Report for IntegrateReport {
    fn write_csv(&self, w: &mut dyn Write) -> Result<()> {
        let mut c = csv_writer(w);
        c.write_record(["r", "h", "dh", "energy_cum", "pohozaev_residual"])?;
        for s in &self.samples {
            c.write_record([num(s.r), num(s.h), num(s.dh), num(s.energy_cum), num(s.pohozaev_residual)])?;
        }
        c.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShootReport {
    pub spec_version: &'static str,
    pub params: ModelParams,
    pub k: i64,
    pub a_range: (f64, f64),
    /// Whether the case label admits limits of the parity of `k`.
    pub parity_admitted: bool,
    pub a_lo: f64,
    pub a_hi: f64,
    pub a_star: f64,
    pub residual: f64,
    pub iterations: usize,
    pub accepted: bool,
    pub r_closest: f64,
}

impl Report for ShootReport {
    fn write_csv(&self, w: &mut dyn Write) -> Result<()> {
        let mut c = csv_writer(w);
        c.write_record([
            "lambda", "omega", "m", "k", "a_lo", "a_hi", "a_star", "residual", "iterations", "r_closest",
        ])?;
        c.write_record([
            num(self.params.lambda),
            num(self.params.omega),
            self.params.signed_degree().to_string(),
            self.k.to_string(),
            num(self.a_lo),
            num(self.a_hi),
            num(self.a_star),
            num(self.residual),
            self.iterations.to_string(),
            num(self.r_closest),
        ])?;
        c.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub spec_version: &'static str,
    pub lambda: f64,
    pub omega: f64,
    pub label: CaseLabel,
}

fn label_fields(l: &CaseLabel) -> [String; 3] {
    [
        format!("{:?}", l.tag),
        format!("{:?}", l.admissible_limit_parity),
        l.exponential_tail_guaranteed.to_string(),
    ]
}

impl Report for ClassifyReport {
    fn write_csv(&self, w: &mut dyn Write) -> Result<()> {
        let mut c = csv_writer(w);
        c.write_record(["lambda", "omega", "case", "parity", "exponential_tail"])?;
        let [t, p, e] = label_fields(&self.label);
        c.write_record([num(self.lambda), num(self.omega), t, p, e])?;
        c.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalCell {
    pub lambda: f64,
    pub omega: f64,
    pub k: i64,
    pub bracket_found: bool,
    pub a_star: Option<f64>,
    pub tail_rate: Option<f64>,
    /// False when a solution was found where the label rules one out.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub spec_version: &'static str,
    pub m: i32,
    pub grid: Vec<(f64, f64)>,
    pub labels: Vec<CaseLabel>,
    pub empirical: Vec<EmpiricalCell>,
}

impl Report for SweepResult {
    fn write_csv(&self, w: &mut dyn Write) -> Result<()> {
        let mut c = csv_writer(w);
        let mut header = vec!["lambda", "omega", "case", "parity", "exponential_tail"];
        let emp = !self.empirical.is_empty();
        if emp {
            header.extend(["k", "bracket_found", "a_star", "tail_rate", "consistent"]);
        }
        c.write_record(&header)?;
        for (i, (&(l, o), lab)) in self.grid.iter().zip(&self.labels).enumerate() {
            let mut row: Vec<String> = vec![num(l), num(o)];
            row.extend(label_fields(lab));
            if emp {
                let e = &self.empirical[i];
                row.extend([
                    e.k.to_string(),
                    e.bracket_found.to_string(),
                    opt(e.a_star),
                    opt(e.tail_rate),
                    e.consistent.to_string(),
                ]);
            }
            c.write_record(&row)?;
        }
        c.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BpCheck {
    pub m: i32,
    pub a: f64,
    pub sup_error: f64,
    pub energy: f64,
    pub energy_expected: f64,
    pub energy_error: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyBpReport {
    pub spec_version: &'static str,
    pub r_max: f64,
    pub sup_r: f64,
    pub checks: Vec<BpCheck>,
    pub all_passed: bool,
}

impl Report for VerifyBpReport {
    fn write_csv(&self, w: &mut dyn Write) -> Result<()> {
        let mut c = csv_writer(w);
        c.write_record(["m", "a", "sup_error", "energy", "energy_error", "passed"])?;
        for k in &self.checks {
            c.write_record([
                k.m.to_string(),
                num(k.a),
                num(k.sup_error),
                num(k.energy),
                num(k.energy_error),
                k.passed.to_string(),
            ])?;
        }
        c.flush()?;
        Ok(())
    }
}
