use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{poly, QSeries};
use crate::error::{Error, Result};

/// `prod eta(d tau)^e` over the listed `(d, e)` factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    factors: Vec<(u32, i32)>,
}

impl EtaQuotientSpec {
    /// Rejects nonpositive scales and quotients whose leading power of `q` is
    /// fractional (`sum d e` not divisible by 24). Repeated scales are merged.
    pub fn new(factors: &[(i64, i64)]) -> Result<Self> {
        let mut merged: BTreeMap<u32, i32> = BTreeMap::new();
        for &(d, e) in factors {
            if d <= 0 {
                return Err(Error::EtaScale(d));
            }
            *merged.entry(d as u32).or_insert(0) += e as i32;
        }
        let weighted: i64 = merged.iter().map(|(&d, &e)| d as i64 * e as i64).sum();
        if weighted % 24 != 0 {
            return Err(Error::EtaNotIntegral(weighted));
        }
        Ok(Self {
            factors: merged.into_iter().filter(|&(_, e)| e != 0).collect(),
        })
    }

    pub fn factors(&self) -> &[(u32, i32)] {
        &self.factors
    }

    /// Order at infinity, `sum d e / 24`.
    pub fn valuation(&self) -> i64 {
        self.factors
            .iter()
            .map(|&(d, e)| d as i64 * e as i64)
            .sum::<i64>()
            / 24
    }

    /// Weight `sum e / 2` (may be half-integral; returned doubled).
    pub fn double_weight(&self) -> i64 {
        self.factors.iter().map(|&(_, e)| e as i64).sum()
    }
}

/// `prod_(n>=1) (1 - q^n)` to `len` terms, from the pentagonal number theorem:
/// the coefficient of `q^(k(3k-1)/2)` is `(-1)^k` for every integer `k`.
pub fn euler_function(len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    if len == 0 {
        return out;
    }
    out[0] = BigInt::from(1);
    let mut k: i64 = 1;
    loop {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let g1 = (k * (3 * k - 1) / 2) as usize;
        let g2 = (k * (3 * k + 1) / 2) as usize;
        if g1 >= len {
            break;
        }
        out[g1] = BigInt::from(sign);
        if g2 < len {
            out[g2] = BigInt::from(sign);
        }
        k += 1;
    }
    out
}

// A^e for a series with a_0 = 1 given by its sparse nonzero terms, via
// n p_n = sum_(k=1..n) ((e+1) k - n) a_k p_(n-k).
fn sparse_power(sparse: &[(usize, BigInt)], e: i64, len: usize) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = Vec::with_capacity(len);
    if len == 0 {
        return p;
    }
    p.push(BigInt::from(1));
    for n in 1..len {
        let mut acc = BigInt::zero();
        for (k, ak) in sparse {
            let k = *k;
            if k > n {
                break;
            }
            let w = (e + 1) * k as i64 - n as i64;
            if w != 0 {
                acc += &p[n - k] * ak * w;
            }
        }
        debug_assert!((&acc % n).is_zero());
        p.push(acc / n);
    }
    p
}

/// Expansion of an eta quotient to `O(q^prec)`, with `val = sum d e / 24`.
pub fn eta_quotient(spec: &EtaQuotientSpec, prec: i64) -> Result<QSeries> {
    let val = spec.valuation();
    if prec <= val {
        return Err(Error::EmptyWindow { val, prec });
    }
    let len = (prec - val) as usize;
    let euler = euler_function(len);
    let sparse: Vec<(usize, BigInt)> = euler
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect();

    let mut acc: Option<Vec<BigInt>> = None;
    for &(d, e) in spec.factors() {
        let d = d as usize;
        let inner = sparse_power(&sparse, e as i64, len.div_ceil(d));
        let mut spread = vec![BigInt::zero(); len];
        for (i, c) in inner.into_iter().enumerate() {
            if i * d < len {
                spread[i * d] = c;
            }
        }
        acc = Some(match acc {
            None => spread,
            Some(a) => poly::mul_short(&a, &spread, len),
        });
    }
    let coeffs = acc.unwrap_or_else(|| {
        let mut one = vec![BigInt::zero(); len];
        one[0] = BigInt::from(1);
        one
    });
    QSeries::from_ints(val, coeffs, prec)
}
