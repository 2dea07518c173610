//! Plain-text series format shared by the cache and the CLI:
//!
//! ```text
//! qseries val=-1 prec=2
//! -1 1
//! 0 744
//! 1 196884
//! ```
//!
//! One line per exponent in `val..prec`, coefficients in lowest terms with a
//! `/den` suffix only when the denominator is not 1.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::QSeries;
use crate::error::{Error, Result};

impl QSeries {
    pub fn to_text(&self) -> String {
        let mut out = format!("qseries val={} prec={}\n", self.val(), self.prec());
        for (i, c) in self.coeffs().into_iter().enumerate() {
            let e = self.val() + i as i64;
            if c.denom().is_one() {
                writeln!(out, "{e} {}", c.numer()).unwrap();
            } else {
                writeln!(out, "{e} {}/{}", c.numer(), c.denom()).unwrap();
            }
        }
        out
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("qseries") {
            return Err(Error::Parse(format!("bad header: {header}")));
        }
        let val = header_field(parts.next(), "val")?;
        let prec = header_field(parts.next(), "prec")?;
        if parts.next().is_some() {
            return Err(Error::Parse(format!("trailing header fields: {header}")));
        }
        let mut coeffs = Vec::new();
        let mut expect = val;
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let (e, c) = line
                .split_once(' ')
                .ok_or_else(|| Error::Parse(format!("bad line: {line}")))?;
            let e: i64 = e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent: {line}")))?;
            if e != expect {
                return Err(Error::Parse(format!(
                    "expected exponent {expect}, found {e}"
                )));
            }
            coeffs.push(parse_rational(c)?);
            expect += 1;
        }
        QSeries::make(val, coeffs, prec)
    }
}

fn header_field(tok: Option<&str>, name: &str) -> Result<i64> {
    let tok = tok.ok_or_else(|| Error::Parse(format!("missing {name}")))?;
    let v = tok
        .strip_prefix(name)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("expected {name}=, found {tok}")))?;
    v.parse()
        .map_err(|_| Error::Parse(format!("bad {name}: {v}")))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad coefficient: {s}"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
        Some((n, d)) => {
            let n = BigInt::from_str(n).map_err(|_| bad())?;
            let d = BigInt::from_str(d).map_err(|_| bad())?;
            if d <= BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}
