//! Per-iteration trace records and their line format.
//!
//! One record per accepted outer iteration, whitespace separated, in the column
//! order of [`TRACE_HEADER`]. Floats are written in Rust's shortest round-trip
//! form so a parsed trace reproduces the values bit for bit.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

pub const TRACE_HEADER: &str = "# k f gnorm delta0 p C step_norm fevals gevals";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub f: f64,
    pub gnorm: f64,
    pub delta0: f64,
    pub inner_rejections: usize,
    /// Reference value `C_k` used by the ratio test.
    pub reference: f64,
    pub accepted_step_norm: f64,
    pub fevals_so_far: usize,
    pub gevals_so_far: usize,
}

impl fmt::Display for IterationRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:?} {:?} {:?} {} {:?} {:?} {} {}",
            self.k,
            self.f,
            self.gnorm,
            self.delta0,
            self.inner_rejections,
            self.reference,
            self.accepted_step_norm,
            self.fevals_so_far,
            self.gevals_so_far
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed trace line: {0}")]
pub struct TraceParseError(pub String);

impl FromStr for IterationRecord {
    type Err = TraceParseError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let bad = || TraceParseError(line.to_string());
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 9 {
            return Err(bad());
        }
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad());
        let real = |s: &str| s.parse::<f64>().map_err(|_| bad());
        Ok(IterationRecord {
            k: int(cols[0])?,
            f: real(cols[1])?,
            gnorm: real(cols[2])?,
            delta0: real(cols[3])?,
            inner_rejections: int(cols[4])?,
            reference: real(cols[5])?,
            accepted_step_norm: real(cols[6])?,
            fevals_so_far: int(cols[7])?,
            gevals_so_far: int(cols[8])?,
        })
    }
}

pub fn write_trace<W: Write>(mut w: W, records: &[IterationRecord]) -> io::Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for r in records {
        writeln!(w, "{r}")?;
    }
    Ok(())
}

/// Reads a trace, skipping blank lines and `#` comments.
pub fn read_trace<R: BufRead>(r: R) -> io::Result<Vec<IterationRecord>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(t.parse().map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn line_round_trip(k in 0usize..10_000, f in any::<f64>(), g in 0.0f64..1e300, p in 0usize..60,
                           fe in 0usize..1_000_000) {
            prop_assume!(!f.is_nan());
            let r = IterationRecord {
                k, f, gnorm: g, delta0: g / 3.0, inner_rejections: p, reference: f,
                accepted_step_norm: g * 0.5, fevals_so_far: fe, gevals_so_far: k + 1,
            };
            let back: IterationRecord = r.to_string().parse().unwrap();
            prop_assert_eq!(back, r);
        }
    }

    #[test]
    fn file_round_trip() {
        let r = IterationRecord {
            k: 3,
            f: 1.5,
            gnorm: 0.25,
            delta0: 2.0,
            inner_rejections: 1,
            reference: 1.75,
            accepted_step_norm: 0.5,
            fevals_so_far: 6,
            gevals_so_far: 4,
        };
        let mut buf = Vec::new();
        write_trace(&mut buf, &[r, r]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(TRACE_HEADER));
        assert_eq!(read_trace(&buf[..]).unwrap(), vec![r, r]);
        assert!(read_trace(&b"1 2 3\n"[..]).is_err());
    }
}
