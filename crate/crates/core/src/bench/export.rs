//! CSV and SVG output for benchmark records and profile curves.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use csv::{ReaderBuilder, Terminator, WriterBuilder};

use super::{BenchError, ProfileCurve, RunRecord};
use crate::solver::Status;

const RECORD_HEADER: [&str; 7] = ["problem", "dim", "solver", "status", "iters", "fevals", "time_s"];
const CURVE_HEADER: [&str; 3] = ["solver", "tau", "rho"];

fn writer() -> csv::Writer<Vec<u8>> {
    WriterBuilder::new()
        .terminator(Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

pub fn records_to_csv(records: &[RunRecord]) -> String {
    let mut w = writer();
    w.write_record(RECORD_HEADER).expect("in-memory write");
    for r in records {
        w.write_record([
            r.problem.clone(),
            r.dim.to_string(),
            r.solver.clone(),
            r.status.as_str().to_string(),
            r.iters.to_string(),
            r.fevals.to_string(),
            format!("{:.6e}", r.wall_time),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

pub fn records_from_csv(text: &str) -> Result<Vec<RunRecord>, BenchError> {
    let mut rd = ReaderBuilder::new().from_reader(text.as_bytes());
    let header = rd
        .headers()
        .map_err(|e| BenchError::InvalidRecord(e.to_string()))?
        .clone();
    if header.iter().ne(RECORD_HEADER) {
        return Err(BenchError::InvalidRecord(format!(
            "expected header `{}`, found `{}`",
            RECORD_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row.map_err(|e| BenchError::InvalidRecord(e.to_string()))?;
        let line = i + 2;
        let field = |k: usize| row.get(k).unwrap_or("");
        let num = |k: usize| {
            field(k).parse::<usize>().map_err(|_| {
                BenchError::InvalidRecord(format!("line {line}: bad {} `{}`", RECORD_HEADER[k], field(k)))
            })
        };
        let status = Status::parse(field(3)).ok_or_else(|| {
            BenchError::InvalidRecord(format!("line {line}: unknown status `{}`", field(3)))
        })?;
        let wall_time = field(6)
            .parse::<f64>()
            .ok()
            .filter(|t| *t >= 0.0)
            .ok_or_else(|| BenchError::InvalidRecord(format!("line {line}: bad time_s `{}`", field(6))))?;
        out.push(RunRecord {
            problem: field(0).to_string(),
            dim: num(1)?,
            solver: field(2).to_string(),
            status,
            iters: num(4)?,
            fevals: num(5)?,
            wall_time,
        });
    }
    Ok(out)
}

pub fn curves_to_csv(curves: &[ProfileCurve]) -> String {
    let mut w = writer();
    w.write_record(CURVE_HEADER).expect("in-memory write");
    for c in curves {
        for &(tau, rho) in &c.points {
            w.write_record([c.solver.clone(), format!("{tau}"), format!("{rho}")])
                .expect("in-memory write");
        }
    }
    finish(w)
}

fn write_file(path: &Path, contents: &str) -> Result<(), BenchError> {
    fs::write(path, contents).map_err(|source| BenchError::Io { path: path.to_path_buf(), source })
}

pub fn write_records_csv(path: &Path, records: &[RunRecord]) -> Result<(), BenchError> {
    write_file(path, &records_to_csv(records))
}

pub fn read_records_csv(path: &Path) -> Result<Vec<RunRecord>, BenchError> {
    let text = fs::read_to_string(path).map_err(|source| BenchError::Io { path: path.to_path_buf(), source })?;
    records_from_csv(&text).map_err(|e| match e {
        BenchError::InvalidRecord(msg) => BenchError::InvalidRecord(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_curves_csv(path: &Path, curves: &[ProfileCurve]) -> Result<(), BenchError> {
    write_file(path, &curves_to_csv(curves))
}

pub fn write_profile_svg(path: &Path, curves: &[ProfileCurve], title: &str, log2: bool) -> Result<(), BenchError> {
    write_file(path, &profile_svg(curves, title, log2))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

/// Standalone SVG of the step curves, optionally with a log2 tau axis.
pub fn profile_svg(curves: &[ProfileCurve], title: &str, log2: bool) -> String {
    let (w, h) = (640.0, 420.0);
    let (left, right, top, bottom) = (60.0, 150.0, 40.0, 50.0);
    let (pw, ph) = (w - left - right, h - top - bottom);

    let axis = |tau: f64| if log2 { tau.log2() } else { tau };
    let max_tau = curves
        .iter()
        .filter_map(|c| c.points.last().map(|p| p.0))
        .fold(1.0_f64, f64::max);
    let (lo, hi) = (axis(1.0), axis(max_tau).max(axis(1.0) + 1e-9) * 1.05 + if log2 { 0.05 } else { 0.0 });
    let sx = |tau: f64| left + (axis(tau) - lo) / (hi - lo) * pw;
    let sy = |rho: f64| top + (1.0 - rho) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        left + pw / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let rho = i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end" font-family="sans-serif" font-size="11">{rho:.2}</text>"#,
            left - 6.0,
            sy(rho) + 4.0
        );
    }
    for i in 0..=4 {
        let a = lo + (hi - lo) * i as f64 / 4.0;
        let label = format!("{a:.2}");
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{label}</text>"#,
            left + pw * i as f64 / 4.0,
            top + ph + 16.0
        );
    }
    let xlabel = if log2 { "log2(tau)" } else { "tau" };
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{xlabel}</text>"#,
        left + pw / 2.0,
        h - 12.0
    );

    for (k, c) in curves.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut pts = vec![(sx(1.0), sy(0.0))];
        let mut rho = 0.0;
        for &(tau, r) in &c.points {
            pts.push((sx(tau), sy(rho)));
            pts.push((sx(tau), sy(r)));
            rho = r;
        }
        pts.push((left + pw, sy(rho)));
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            coords.join(" ")
        );
        let ly = top + 14.0 + 18.0 * k as f64;
        let lx = left + pw + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(&c.solver)
        );
    }
    s.push_str("</svg>\n");
    s
}
