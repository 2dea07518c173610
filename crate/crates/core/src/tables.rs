//! Stored constants: the divisibility exponents `epsilon_{k,p}` and the
//! `mu`, `nu`, pole-order data of the level-p `theta`/`alpha` pairs.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::error::{Error, Result};

const TABLES_TOML: &str = include_str!("../data/tables.toml");

#[derive(Debug, Deserialize)]
struct RawTables {
    version: u32,
    epsilon: Vec<RawEpsilon>,
    theta_alpha: Vec<RawLevel>,
}

#[derive(Debug, Deserialize)]
struct RawEpsilon {
    p: u32,
    k: Vec<i64>,
    value: u32,
}

#[derive(Debug, Deserialize)]
struct RawLevel {
    p: u32,
    rows: Vec<TableRow>,
}

/// One row of the `theta`/`alpha` data for weight `k < 0` and level `p`.
#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
pub struct TableRow {
    pub k: i64,
    pub mu: i64,
    pub nu: u32,
    pub pole_order: i64,
}

pub struct Tables {
    pub version: u32,
    epsilon: BTreeMap<(i64, u32), u32>,
    rows: BTreeMap<(i64, u32), TableRow>,
}

pub const WEIGHTS: [i64; 5] = [4, 6, 8, 10, 14];
pub const PRIMES: [u32; 3] = [2, 3, 5];
pub const NEGATIVE_WEIGHTS: [i64; 5] = [-2, -4, -6, -8, -12];

pub fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let raw: RawTables = toml::from_str(TABLES_TOML).expect("bundled tables parse");
        let mut epsilon = BTreeMap::new();
        for e in raw.epsilon {
            for k in e.k {
                epsilon.insert((k, e.p), e.value);
            }
        }
        let mut rows = BTreeMap::new();
        for level in raw.theta_alpha {
            for r in level.rows {
                rows.insert((r.k, level.p), r);
            }
        }
        Tables {
            version: raw.version,
            epsilon,
            rows,
        }
    })
}

impl Tables {
    /// `epsilon_{k,p}` for `k in {4,6,8,10,14}`, `p in {2,3,5}`.
    pub fn epsilon(&self, k: i64, p: u32) -> Result<u32> {
        self.epsilon
            .get(&(k, p))
            .copied()
            .ok_or(Error::NotInTable { k, p })
    }

    /// Row for negative weight `k in {-2,-4,-6,-8,-12}`.
    pub fn row(&self, k: i64, p: u32) -> Result<TableRow> {
        self.rows
            .get(&(k, p))
            .copied()
            .ok_or(Error::NotInTable { k, p })
    }
}

/// `lambda_p = 24 / (p - 1)`.
pub fn lambda(p: u32) -> Result<u32> {
    match p {
        2 | 3 | 5 => Ok(24 / (p - 1)),
        _ => Err(Error::InvalidLevel(p)),
    }
}
