//! Echelon bases `B_{n,k,p} = q^n + O(q^d)` of `M_k(p)` with integer
//! coefficients, and the `d`-coefficient congruence test they enable.
//!
//! For each weight a form vanishing to order `d - 1` is built as a product of
//! seed forms; the rest of the basis comes from repeatedly multiplying by
//! `psi_p` and clearing the window with integer multiples of the elements
//! already found.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::level_p::{newform, phi, psi, s_form, weight2_form, LevelPForm, Newform};
use crate::qseries::{vp_int, QSeries};

/// Extra coefficients beyond `d` used by [`default_prec`].
pub const GUARD: i64 = 50;

fn check_args(k: i64, p: u32) -> Result<()> {
    if !matches!(p, 2 | 3 | 5) {
        return Err(Error::InvalidLevel(p));
    }
    if k < 0 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k));
    }
    Ok(())
}

/// `dim M_k(Gamma_0(p))` for even `k >= 0`.
pub fn dim_mk(k: i64, p: u32) -> Result<i64> {
    check_args(k, p)?;
    Ok(match p {
        2 => k / 4 + 1,
        3 => k / 3 + 1,
        _ => 2 * (k / 4) + 1,
    })
}

/// `d + GUARD`.
pub fn default_prec(k: i64, p: u32) -> Result<i64> {
    Ok(dim_mk(k, p)? + GUARD)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralBasis {
    pub k: i64,
    pub p: u32,
    pub d: i64,
    pub elements: Vec<QSeries>,
}

#[derive(Serialize)]
struct Manifest {
    k: i64,
    p: u32,
    d: i64,
}

impl IntegralBasis {
    pub fn prec(&self) -> i64 {
        self.elements[0].prec()
    }

    pub fn manifest_json(&self) -> String {
        serde_json::to_string(&Manifest {
            k: self.k,
            p: self.p,
            d: self.d,
        })
        .expect("manifest")
    }

    /// `sum_n c_n B_n` for integer `c`.
    pub fn combine(&self, c: &[BigInt]) -> QSeries {
        let mut acc = QSeries::constant(BigRational::zero(), self.prec()).expect("zero series");
        for (b, c) in self.elements.iter().zip(c) {
            if !c.is_zero() {
                acc = acc.add(&b.scale_int(c));
            }
        }
        acc
    }
}

// Weight step and the seed of each residue class of weights.
fn step_form(p: u32, prec: i64) -> Result<(i64, QSeries)> {
    Ok(match p {
        2 => (4, s_form(4, 2, prec)?.series),
        3 => (
            6,
            phi(3, prec)?
                .series
                .mul(&newform(Newform::Omega6, prec)?.series),
        ),
        _ => (
            4,
            phi(5, prec)?
                .series
                .mul(&newform(Newform::Lambda4, prec)?.series),
        ),
    })
}

fn seed_form(r: i64, p: u32, prec: i64) -> Result<QSeries> {
    match r {
        0 => QSeries::one(prec),
        2 => Ok(weight2_form(p, prec)?.series),
        4 if p == 3 => Ok(s_form(4, 3, prec)?.series),
        _ => unreachable!("residue {r} for level {p}"),
    }
}

fn top_form(k: i64, p: u32, prec: i64) -> Result<QSeries> {
    let (step, s) = step_form(p, prec)?;
    let mut f = seed_form(k % step, p, prec)?;
    for _ in 0..k / step {
        f = f.mul(&s);
    }
    f.truncate(prec)
}

fn build(k: i64, p: u32, prec: i64) -> Result<IntegralBasis> {
    let d = dim_mk(k, p)?;
    if prec < d {
        return Err(Error::InsufficientPrecision {
            needed: d,
            available: prec,
        });
    }
    let work = prec + d;
    let top = top_form(k, p, work)?.normalize();
    if top.leading_exponent() != Some(d - 1) || !top.coeff(d - 1)?.is_one() || !top.is_integral() {
        return Err(Error::Parse(format!(
            "seed product for M_{k}({p}) is not q^{} + ...",
            d - 1
        )));
    }
    let psi = psi(p, work)?.series;
    // elements[i] holds B_{d-1-i}
    let mut desc = vec![top];
    for n in (0..d - 1).rev() {
        let mut g = desc.last().unwrap().mul(&psi);
        for (i, b) in desc.iter().enumerate() {
            let t = d - 1 - i as i64;
            let c = g.coeff(t)?;
            if !c.denom().is_one() {
                return Err(Error::NonIntegralMultiplier { exponent: t });
            }
            if !c.is_zero() {
                g = g.sub(&b.scale_int(c.numer()));
            }
        }
        debug_assert_eq!(g.normalize().leading_exponent(), Some(n));
        desc.push(g);
    }
    let mut elements = desc
        .into_iter()
        .rev()
        .map(|b| b.with_val(0).truncate(prec))
        .collect::<Result<Vec<_>>>()?;
    elements.shrink_to_fit();
    Ok(IntegralBasis { k, p, d, elements })
}

type BasisCache = Mutex<HashMap<(i64, u32), Arc<IntegralBasis>>>;

fn cache() -> &'static BasisCache {
    static C: OnceLock<BasisCache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The basis of `M_k(p)` to `O(q^prec)`; needs `prec >= d`.
pub fn integral_basis(k: i64, p: u32, prec: i64) -> Result<IntegralBasis> {
    check_args(k, p)?;
    let hit = cache().lock().unwrap().get(&(k, p)).cloned();
    let basis = match hit {
        Some(b) if b.prec() >= prec => b,
        _ => {
            let b = Arc::new(build(k, p, prec)?);
            cache().lock().unwrap().insert((k, p), b.clone());
            b
        }
    };
    if basis.prec() == prec {
        return Ok((*basis).clone());
    }
    Ok(IntegralBasis {
        elements: basis
            .elements
            .iter()
            .map(|b| b.truncate(prec))
            .collect::<Result<_>>()?,
        ..(*basis).clone()
    })
}

/// True iff the first `d` coefficients of `f` are divisible by `p^s`, which
/// forces every coefficient to be. The conclusion is also checked against
/// the coefficients actually present; a failure there is an error.
pub fn congruence_by_window(f: &LevelPForm, s: i64, p: u32) -> Result<bool> {
    let d = dim_mk(f.weight, p)?;
    let series = &f.series;
    if let Some(v) = series.leading_exponent().filter(|&v| v < 0) {
        return Err(Error::NotHolomorphic(v));
    }
    if series.prec() < d {
        return Err(Error::InsufficientPrecision {
            needed: d,
            available: series.prec(),
        });
    }
    let divisible = |n: i64| -> Result<bool> {
        if n < series.val() {
            return Ok(true);
        }
        let c = series.coeff(n)?;
        if !c.denom().is_one() {
            return Err(Error::NonIntegral { exponent: n });
        }
        Ok(vp_int(c.numer(), p).at_least(s))
    };
    for n in 0..d {
        if !divisible(n)? {
            return Ok(false);
        }
    }
    for n in d..series.prec() {
        if !divisible(n)? {
            return Err(Error::CongruenceViolation { exponent: n });
        }
    }
    Ok(true)
}
