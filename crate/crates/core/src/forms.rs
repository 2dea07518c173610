//! Named forms, as written on the command line: `E:4`, `delta`, `j`,
//! `f:4:1`, `S:4:2`, `T:6:2`, `newform:Xi8`, `phi:3`, `psi:3`,
//! `theta:-12:2`, `alpha:-12:2`, `B:8:2:1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::integral_bases::{dim_mk, integral_basis};
use crate::level_one::{canonical_form, delta, eisenstein, jfunc};
use crate::level_p::{newform, phi, psi, s_form, t_form, theta_alpha, Newform};
use crate::qseries::QSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormSpec {
    Eisenstein(i64),
    Delta,
    J,
    Canonical { k: i64, m: i64 },
    S { k: i64, p: u32 },
    T { k: i64, p: u32 },
    Newform(Newform),
    Phi(u32),
    Psi(u32),
    Theta { k: i64, p: u32 },
    Alpha { k: i64, p: u32 },
    Basis { k: i64, p: u32, n: i64 },
}

fn bad(s: &str) -> Error {
    Error::Parse(format!("unrecognized form `{s}`"))
}

impl FromStr for FormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let int = |i: usize| -> Result<i64> { parts[i].parse().map_err(|_| bad(s)) };
        let prime = |i: usize| -> Result<u32> { parts[i].parse().map_err(|_| bad(s)) };
        let spec = match (parts[0], parts.len()) {
            ("E", 2) => FormSpec::Eisenstein(int(1)?),
            ("delta", 1) => FormSpec::Delta,
            ("j", 1) => FormSpec::J,
            ("f", 3) => FormSpec::Canonical {
                k: int(1)?,
                m: int(2)?,
            },
            ("S", 3) => FormSpec::S {
                k: int(1)?,
                p: prime(2)?,
            },
            ("T", 3) => FormSpec::T {
                k: int(1)?,
                p: prime(2)?,
            },
            ("newform", 2) => FormSpec::Newform(parts[1].parse()?),
            ("phi", 2) => FormSpec::Phi(prime(1)?),
            ("psi", 2) => FormSpec::Psi(prime(1)?),
            ("theta", 3) => FormSpec::Theta {
                k: int(1)?,
                p: prime(2)?,
            },
            ("alpha", 3) => FormSpec::Alpha {
                k: int(1)?,
                p: prime(2)?,
            },
            ("B", 4) => FormSpec::Basis {
                k: int(1)?,
                p: prime(2)?,
                n: int(3)?,
            },
            _ => return Err(bad(s)),
        };
        Ok(spec)
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormSpec::Eisenstein(k) => write!(f, "E:{k}"),
            FormSpec::Delta => write!(f, "delta"),
            FormSpec::J => write!(f, "j"),
            FormSpec::Canonical { k, m } => write!(f, "f:{k}:{m}"),
            FormSpec::S { k, p } => write!(f, "S:{k}:{p}"),
            FormSpec::T { k, p } => write!(f, "T:{k}:{p}"),
            FormSpec::Newform(n) => write!(f, "newform:{n}"),
            FormSpec::Phi(p) => write!(f, "phi:{p}"),
            FormSpec::Psi(p) => write!(f, "psi:{p}"),
            FormSpec::Theta { k, p } => write!(f, "theta:{k}:{p}"),
            FormSpec::Alpha { k, p } => write!(f, "alpha:{k}:{p}"),
            FormSpec::Basis { k, p, n } => write!(f, "B:{k}:{p}:{n}"),
        }
    }
}

impl FormSpec {
    /// Expansion to `O(q^prec)`.
    pub fn expand(&self, prec: i64) -> Result<QSeries> {
        match *self {
            FormSpec::Eisenstein(k) => eisenstein(k, prec),
            FormSpec::Delta => delta(prec),
            FormSpec::J => jfunc(prec),
            FormSpec::Canonical { k, m } => Ok(canonical_form(k, m, prec)?.series),
            FormSpec::S { k, p } => Ok(s_form(k, p, prec)?.series),
            FormSpec::T { k, p } => Ok(t_form(k, p, prec)?.series),
            FormSpec::Newform(n) => Ok(newform(n, prec)?.series),
            FormSpec::Phi(p) => Ok(phi(p, prec)?.series),
            FormSpec::Psi(p) => Ok(psi(p, prec)?.series),
            FormSpec::Theta { k, p } => Ok(theta_alpha(k, p, prec)?.theta),
            FormSpec::Alpha { k, p } => Ok(theta_alpha(k, p, prec)?.alpha),
            FormSpec::Basis { k, p, n } => {
                let d = dim_mk(k, p)?;
                if !(0..d).contains(&n) {
                    return Err(Error::IndexOutOfRange { j: n, max: d - 1 });
                }
                Ok(integral_basis(k, p, prec)?.elements[n as usize].clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_names() {
        for s in [
            "E:4",
            "delta",
            "j",
            "f:4:1",
            "S:4:2",
            "T:6:2",
            "newform:Xi8",
            "phi:3",
            "psi:5",
            "theta:-12:2",
            "alpha:-6:3",
            "B:8:2:1",
        ] {
            assert_eq!(s.parse::<FormSpec>().unwrap().to_string(), s);
        }
        for s in ["", "E", "E:x", "f:4", "newform:Xi9", "B:8:2", "delta:1"] {
            assert!(s.parse::<FormSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn theta_pole() {
        let t = FormSpec::Theta { k: -12, p: 2 }.expand(5).unwrap();
        assert_eq!(t.val(), -3);
        assert!(FormSpec::Basis { k: 8, p: 2, n: 3 }.expand(10).is_err());
    }
}
