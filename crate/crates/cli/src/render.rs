//! Text and JSON renderings of the command results.

use std::io::{self, Write};

use agm_pi_core::convergence::ConvergenceReport;
use agm_pi_core::equivalence::EquivalenceReport;
use agm_pi_core::integral_oracle::IdentityCheck;
use agm_pi_core::BigFixed;
use serde::Serialize;

use crate::config::{Algorithm, CliConfig, Format};

/// Fraction digits of `p_n` shown per row of the text table.
const TABLE_PREVIEW_DIGITS: usize = 40;

fn algorithm_name(a: Algorithm) -> &'static str {
    match a {
        Algorithm::Bs => "bs",
        Algorithm::Bb2 => "bb2",
        Algorithm::Bb4 => "bb4",
    }
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

#[derive(Serialize)]
struct ComputeJson<'a> {
    algorithm: &'static str,
    digits: u64,
    guard: u64,
    iterations: u32,
    pi: &'a str,
}

pub fn compute(
    out: &mut dyn Write,
    cfg: &CliConfig,
    iterations: u32,
    text: &str,
) -> io::Result<()> {
    match cfg.format {
        Format::Text => writeln!(out, "{text}"),
        Format::Json => json_line(
            out,
            &ComputeJson {
                algorithm: algorithm_name(cfg.algorithm),
                digits: cfg.digits,
                guard: cfg.guard,
                iterations,
                pi: text,
            },
        ),
    }
}

#[derive(Serialize)]
struct RecordJson<'a> {
    n: u32,
    correct_digits: usize,
    log10_bound: Option<f64>,
    empirical_ratio: Option<f64>,
    digits: &'a str,
}

#[derive(Serialize)]
struct TableJson<'a> {
    digits: u64,
    guard: u64,
    reference: &'a str,
    records: Vec<RecordJson<'a>>,
}

fn preview(digits: &str) -> &str {
    match digits.find('.') {
        Some(dot) if digits.len() > dot + 1 + TABLE_PREVIEW_DIGITS => {
            &digits[..dot + 1 + TABLE_PREVIEW_DIGITS]
        }
        _ => digits,
    }
}

fn opt(x: Option<f64>, fmt: impl Fn(f64) -> String) -> String {
    x.map(fmt).unwrap_or_else(|| "-".into())
}

pub fn table(out: &mut dyn Write, cfg: &CliConfig, report: &ConvergenceReport) -> io::Result<()> {
    match cfg.format {
        Format::Text => {
            writeln!(
                out,
                "{:>3}  {:>8}  {:>14}  {:>10}  p_n",
                "n", "correct", "log10 bound", "ratio"
            )?;
            for r in &report.records {
                writeln!(
                    out,
                    "{:>3}  {:>8}  {:>14}  {:>10}  {}",
                    r.n,
                    r.correct_digits,
                    opt(r.log10_bound, |b| format!("{b:.3}")),
                    opt(r.empirical_ratio, |q| format!("{q:.3e}")),
                    preview(&r.digits),
                )?;
            }
            Ok(())
        }
        Format::Json => json_line(
            out,
            &TableJson {
                digits: cfg.digits,
                guard: cfg.guard,
                reference: &report.reference_digits,
                records: report
                    .records
                    .iter()
                    .map(|r| RecordJson {
                        n: r.n,
                        correct_digits: r.correct_digits,
                        log10_bound: r.log10_bound,
                        empirical_ratio: r.empirical_ratio,
                        digits: &r.digits,
                    })
                    .collect(),
            },
        ),
    }
}

#[derive(Serialize)]
struct VerifyJson {
    iterations: u32,
    max_dev_e: Option<String>,
    max_dev_k: Option<String>,
    max_dev_y: Option<String>,
    max_dev_z: Option<String>,
    max_dev_outputs: String,
    tolerance: String,
    pass: bool,
}

pub fn verify(out: &mut dyn Write, cfg: &CliConfig, report: &EquivalenceReport) -> io::Result<()> {
    let sci = |x: &Option<BigFixed>| x.as_ref().map(BigFixed::to_sci_string);
    let flat = VerifyJson {
        iterations: report.iterations,
        max_dev_e: sci(&report.max_dev_e),
        max_dev_k: sci(&report.max_dev_k),
        max_dev_y: sci(&report.max_dev_y),
        max_dev_z: sci(&report.max_dev_z),
        max_dev_outputs: report.max_dev_outputs.to_sci_string(),
        tolerance: report.tolerance.to_sci_string(),
        pass: report.pass,
    };
    match cfg.format {
        Format::Text => {
            let show = |x: &Option<String>| x.clone().unwrap_or_else(|| "-".into());
            writeln!(out, "iterations = {}", flat.iterations)?;
            writeln!(out, "max_dev_e = {}", show(&flat.max_dev_e))?;
            writeln!(out, "max_dev_k = {}", show(&flat.max_dev_k))?;
            writeln!(out, "max_dev_y = {}", show(&flat.max_dev_y))?;
            writeln!(out, "max_dev_z = {}", show(&flat.max_dev_z))?;
            writeln!(out, "max_dev_outputs = {}", flat.max_dev_outputs)?;
            writeln!(out, "tolerance = {}", flat.tolerance)?;
            writeln!(out, "pass = {}", flat.pass)
        }
        Format::Json => json_line(out, &flat),
    }
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    lhs: f64,
    rhs: f64,
    abs_dev: f64,
    tol: f64,
    pass: bool,
}

pub fn oracle(out: &mut dyn Write, cfg: &CliConfig, checks: &[IdentityCheck]) -> io::Result<()> {
    match cfg.format {
        Format::Text => {
            for c in checks {
                writeln!(
                    out,
                    "{}  {}  dev {:.2e} (tol {:.0e})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.abs_dev,
                    c.tol
                )?;
            }
            Ok(())
        }
        Format::Json => {
            let rows: Vec<_> = checks
                .iter()
                .map(|c| CheckJson {
                    name: &c.name,
                    lhs: c.lhs,
                    rhs: c.rhs,
                    abs_dev: c.abs_dev,
                    tol: c.tol,
                    pass: c.pass,
                })
                .collect();
            json_line(out, &rows)
        }
    }
}
