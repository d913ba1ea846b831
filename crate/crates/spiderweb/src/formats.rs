//! CSV, PGM and JSON report formats.

use std::io::{self, Read, Write};

use serde::Serialize;
use spiderweb_core::curves::Curve;
use spiderweb_core::dynamics::{Class, ClassGrid, RingAnalysis};
use spiderweb_core::modulus::GrowthProfile;
use spiderweb_core::subharmonic::MeanProfile;
use spiderweb_core::theorems::{A_T_QUARTER_MIN, T_QUARTER_MIN, WINDING_CONSTANT};
use spiderweb_core::LogComplex;

use crate::function_file::FunctionFile;

fn csv_err(e: csv::Error) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, e)
}

/// `log_r,log_M,log_m`, then `# order_estimate,<value>` when available.
pub fn write_growth_csv<W: Write>(profile: &GrowthProfile, mut out: W) -> io::Result<()> {
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(["log_r", "log_M", "log_m"])
            .map_err(csv_err)?;
        for s in &profile.samples {
            w.serialize((s.log_r, s.log_max, s.log_min))
                .map_err(csv_err)?;
        }
        w.flush()?;
    }
    if let Some(rho) = profile.order_estimate {
        writeln!(out, "# order_estimate,{rho}")?;
    }
    Ok(())
}

pub fn write_mean_csv<W: Write>(profile: &MeanProfile, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["log_r", "B", "T", "rTprime"])
        .map_err(csv_err)?;
    for s in &profile.samples {
        w.serialize((s.log_r, s.b, s.t, s.r_t_prime))
            .map_err(csv_err)?;
    }
    w.flush()
}

/// `log_mod,arg` per point. A closed curve repeats its first point at the
/// end, which is how `read_curve_csv` recognises it.
pub fn write_curve_csv<W: Write>(curve: &Curve, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["log_mod", "arg"]).map_err(csv_err)?;
    let closing = curve.closed.then(|| curve.points.first()).flatten();
    for p in curve.points.iter().chain(closing) {
        w.serialize((p.log_mod, p.arg)).map_err(csv_err)?;
    }
    w.flush()
}

pub fn read_curve_csv<R: Read>(input: R) -> io::Result<Curve> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let mut points = Vec::new();
    for rec in r.deserialize::<(f64, f64)>() {
        let (log_mod, arg) = rec.map_err(csv_err)?;
        points.push(LogComplex::new(log_mod, arg));
    }
    if points.len() < 2 {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            "curve needs two points",
        ));
    }
    if points.len() > 2 && points.first() == points.last() {
        points.pop();
        let mut c = Curve::open(points);
        c.closed = true;
        return Ok(c);
    }
    Ok(Curve::open(points))
}

pub fn gray(class: Class) -> u8 {
    match class {
        Class::Low => 0,
        Class::Undecided => 85,
        Class::QuiteFast => 170,
        Class::Fast => 255,
    }
}

/// Plain PGM (P2), row 0 at the top, at most 16 values per text line.
pub fn write_pgm<W: Write>(grid: &ClassGrid, mut out: W) -> io::Result<()> {
    writeln!(out, "P2")?;
    writeln!(out, "{} {}", grid.width, grid.height)?;
    writeln!(out, "255")?;
    for row in grid.cells.chunks(grid.width) {
        for line in row.chunks(16) {
            let text: Vec<String> = line.iter().map(|c| gray(c.class).to_string()).collect();
            writeln!(out, "{}", text.join(" "))?;
        }
    }
    Ok(())
}

/// Grey levels of a P2 file, row-major.
pub fn read_pgm(text: &str) -> io::Result<(usize, usize, Vec<u8>)> {
    let bad = |m: &str| io::Error::new(io::ErrorKind::InvalidData, m.to_string());
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    if tokens.next() != Some("P2") {
        return Err(bad("not a P2 file"));
    }
    let mut num = || -> io::Result<usize> {
        tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad("truncated header"))
    };
    let (w, h, _max) = (num()?, num()?, num()?);
    let values: Vec<u8> = tokens.filter_map(|t| t.parse().ok()).collect();
    if values.len() != w * h {
        return Err(bad("pixel count does not match the header"));
    }
    Ok((w, h, values))
}

pub fn write_rings_csv<W: Write>(analysis: &RingAnalysis, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "component_id",
        "kind",
        "cells",
        "log_r_min",
        "log_r_max",
        "surrounds_origin",
        "touches_boundary",
        "annulus_ok",
        "in_scope",
    ])
    .map_err(csv_err)?;
    for r in analysis.rings.iter().chain(&analysis.holes) {
        let kind = serde_json::to_value(r.kind)?;
        w.write_record([
            r.component_id.to_string(),
            kind.as_str().unwrap_or_default().to_string(),
            r.cells.to_string(),
            r.log_r_min.to_string(),
            r.log_r_max.to_string(),
            r.surrounds_origin.to_string(),
            r.touches_boundary.to_string(),
            r.annulus_ok.to_string(),
            r.in_scope.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
}

/// The constants of the winding bound, embedded in every report.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Constants {
    pub t_quarter_min: f64,
    pub a_t_quarter_min: f64,
    pub winding_constant: f64,
}

pub const CONSTANTS: Constants = Constants {
    t_quarter_min: T_QUARTER_MIN,
    a_t_quarter_min: A_T_QUARTER_MIN,
    winding_constant: WINDING_CONSTANT,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    PreconditionFailed,
}

/// A self-contained verification report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    /// Absent for the built-in matrices, which name their own functions.
    pub function: Option<FunctionFile>,
    pub constants: Constants,
    pub params: serde_json::Value,
    pub verdict: Verdict,
    pub result: serde_json::Value,
}

impl Report {
    pub fn write<W: Write>(&self, out: W) -> io::Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use spiderweb_core::modulus::GrowthSample;

    #[test]
    fn growth_csv_has_trailing_order() {
        let p = GrowthProfile {
            samples: vec![GrowthSample {
                log_r: 1.0,
                log_max: 2.0,
                log_min: -0.5,
            }],
            order_estimate: Some(0.5),
            hadamard_ok: true,
        };
        let mut buf = Vec::new();
        write_growth_csv(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "log_r,log_M,log_m\n1.0,2.0,-0.5\n# order_estimate,0.5\n"
        );
    }

    #[test]
    fn curve_round_trip() {
        let c = Curve::circle(0.5, 8);
        let mut buf = Vec::new();
        write_curve_csv(&c, &mut buf).unwrap();
        assert_eq!(read_curve_csv(&buf[..]).unwrap(), c);
        let c = Curve::log_segment(LogComplex::new(0.0, 0.1), LogComplex::new(2.0, 0.4), 5);
        let mut buf = Vec::new();
        write_curve_csv(&c, &mut buf).unwrap();
        assert_eq!(read_curve_csv(&buf[..]).unwrap(), c);
    }
}
