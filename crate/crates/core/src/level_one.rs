//! Level-one forms: Bernoulli numbers, Eisenstein series, `Delta`, `j`, and the
//! canonical basis `f_{k,m} = q^-m + O(q^(ell+1))` of weakly holomorphic forms
//! of weight `k = 12 ell + k'`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qseries::{eta_quotient, EtaQuotientSpec, QSeries};

/// Exact `B_k` from `sum_(j<=n) C(n+1, j) B_j = 0`.
pub fn bernoulli(k: u32) -> BigRational {
    let n = k as usize;
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        // binomials C(m+1, j)
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * &binom;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigInt::from(m + 1));
    }
    b.pop().unwrap()
}

/// `A_k = -2k / B_k`, the normalizing factor of `E_k`.
pub fn eisenstein_factor(k: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(-2 * k as i64)) / bernoulli(k)
}

/// `sigma_s(n)` for `0 <= n < len` (entry 0 is 0).
pub fn divisor_sums(s: u32, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for d in 1..len {
        let dp = BigInt::from(d).pow(s);
        let mut m = d;
        while m < len {
            out[m] += &dp;
            m += d;
        }
    }
    out
}

/// `E_k` to `O(q^prec)`; `E_0 = 1`, and `E_2 = 1 - 24 sum sigma_1(n) q^n` (not modular).
pub fn eisenstein(k: i64, prec: i64) -> Result<QSeries> {
    if k < 0 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k));
    }
    if prec < 1 {
        return Err(Error::EmptyWindow { val: 0, prec });
    }
    if k == 0 {
        return QSeries::one(prec);
    }
    let factor = if k == 2 {
        BigRational::from_integer(BigInt::from(-24))
    } else {
        eisenstein_factor(k as u32)
    };
    let sig = divisor_sums(k as u32 - 1, prec as usize);
    let mut num: Vec<BigInt> = sig.into_iter().map(|s| s * factor.numer()).collect();
    num[0] = factor.denom().clone();
    Ok(QSeries::from_parts(0, prec, num, factor.denom().clone()))
}

/// `Delta = q prod (1 - q^n)^24`.
pub fn delta(prec: i64) -> Result<QSeries> {
    eta_quotient(&EtaQuotientSpec::new(&[(1, 24)])?, prec)
}

fn j_cache() -> &'static Mutex<Option<QSeries>> {
    static J: OnceLock<Mutex<Option<QSeries>>> = OnceLock::new();
    J.get_or_init(|| Mutex::new(None))
}

/// `j = E_4^3 / Delta = q^-1 + 744 + 196884 q + ...`; memoized at the largest
/// precision requested so far.
pub fn jfunc(prec: i64) -> Result<QSeries> {
    if prec < 0 {
        return Err(Error::EmptyWindow { val: -1, prec });
    }
    let mut guard = j_cache().lock().unwrap();
    if let Some(j) = guard.as_ref() {
        if j.prec() >= prec {
            return j.truncate(prec);
        }
    }
    let e4 = eisenstein(4, prec + 1)?;
    let inv_delta = delta(prec + 2)?.invert(prec)?;
    let j = e4.pow(3)?.mul(&inv_delta);
    debug_assert_eq!(j.prec(), prec);
    *guard = Some(j.clone());
    Ok(j)
}

/// `k = 12 ell + k'` with `k' in {0, 4, 6, 8, 10, 14}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightSplit {
    pub k: i64,
    pub ell: i64,
    pub kprime: i64,
}

pub fn weight_split(k: i64) -> Result<WeightSplit> {
    if k % 2 != 0 {
        return Err(Error::InvalidWeight(k));
    }
    let kprime = match k.rem_euclid(12) {
        0 => 0,
        2 => 14,
        r => r,
    };
    Ok(WeightSplit {
        k,
        ell: (k - kprime) / 12,
        kprime,
    })
}

/// A basis element `f_{k,m}`.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub k: i64,
    pub m: i64,
    pub ell: i64,
    pub series: QSeries,
}

impl CanonicalForm {
    /// `a_k(m, n)`: the coefficient of `q^n` for `n > ell`.
    pub fn a(&self, n: i64) -> Result<BigInt> {
        if n <= self.ell {
            return Ok(BigInt::zero());
        }
        self.series.coeff_int(n)
    }
}

// f_{k,-ell}, ..., f_{k,max_m}, each known to at least `prec`.
struct Chain {
    ell: i64,
    max_m: i64,
    prec: i64,
    forms: Vec<QSeries>,
}

impl Chain {
    fn covers(&self, m: i64, prec: i64) -> bool {
        m <= self.max_m && prec <= self.prec
    }

    fn form(&self, m: i64) -> &QSeries {
        &self.forms[(m + self.ell) as usize]
    }
}

type ChainSlot = Arc<Mutex<Vec<Arc<Chain>>>>;

fn chain_slot(k: i64) -> ChainSlot {
    static SLOTS: OnceLock<Mutex<HashMap<i64, ChainSlot>>> = OnceLock::new();
    let slots = SLOTS.get_or_init(|| Mutex::new(HashMap::new()));
    slots.lock().unwrap().entry(k).or_default().clone()
}

// Requests are rounded up so that scans over growing (m, n) reuse chains.
fn round_request(m: i64, prec: i64) -> (i64, i64) {
    let m = if m > 16 {
        Integer::div_ceil(&m, &16) * 16
    } else {
        m
    };
    (m, Integer::div_ceil(&prec, &16) * 16)
}

fn chain_for(k: i64, m: i64, prec: i64) -> Result<Arc<Chain>> {
    let slot = chain_slot(k);
    let mut chains = slot.lock().unwrap();
    if let Some(c) = chains.iter().find(|c| c.covers(m, prec)) {
        return Ok(c.clone());
    }
    let (m, prec) = round_request(m, prec);
    let chain = Arc::new(build_chain(k, m, prec)?);
    chains.retain(|c| !(c.max_m <= chain.max_m && c.prec <= chain.prec));
    chains.push(chain.clone());
    Ok(chain)
}

fn build_chain(k: i64, max_m: i64, prec: i64) -> Result<Chain> {
    let WeightSplit { ell, kprime, .. } = weight_split(k)?;
    let steps = ell + max_m;
    // each multiplication by j costs one term of precision
    let base_prec = prec + steps;
    let slack = 2 * ell.abs() + 2;

    let eis = eisenstein(kprime, base_prec + slack)?;
    let delta_pow = if ell >= 0 {
        eta_quotient(&EtaQuotientSpec::new(&[(1, 24 * ell)])?, base_prec + slack)?
    } else {
        let inv = delta(base_prec + slack + 2)?.invert(base_prec + slack)?;
        inv.pow((-ell) as u32)?
    };
    let base = delta_pow.mul(&eis).truncate(base_prec)?;

    let j = jfunc(base_prec + max_m + 2)?;
    let mut forms = vec![base];
    for i in -ell..max_m {
        let mut g = forms.last().unwrap().mul(&j);
        // clear q^t for -i <= t <= ell using f_{k,-t} = q^t + O(q^(ell+1))
        for t in -i..=ell {
            let c = g.coeff(t)?;
            if c.is_zero() {
                continue;
            }
            if !c.denom().is_one() {
                return Err(Error::NonIntegralMultiplier { exponent: t });
            }
            g = g.add_scaled(&-c, &forms[(-t + ell) as usize]);
        }
        debug_assert!(g.coeff(-(i + 1)).unwrap().is_one());
        forms.push(g);
    }
    for f in &mut forms {
        *f = f.truncate(prec)?;
    }
    Ok(Chain {
        ell,
        max_m,
        prec,
        forms,
    })
}

/// `f_{k,m}` to `O(q^prec)`. Built from `Delta^ell E_{k'}` by repeated
/// multiplication by `j` and integer elimination; memoized per weight.
pub fn canonical_form(k: i64, m: i64, prec: i64) -> Result<CanonicalForm> {
    let WeightSplit { ell, .. } = weight_split(k)?;
    if m < -ell {
        return Err(Error::IndexBelowBound { k, m, min: -ell });
    }
    if prec <= ell + 1 {
        return Err(Error::InsufficientPrecision {
            needed: ell + 2,
            available: prec,
        });
    }
    let chain = chain_for(k, m, prec)?;
    Ok(CanonicalForm {
        k,
        m,
        ell,
        series: chain.form(m).truncate(prec)?,
    })
}

/// `a_k(m, n)`, zero when `m < -ell` or `n <= ell`.
pub fn a_coeff(k: i64, m: i64, n: i64) -> Result<BigInt> {
    let WeightSplit { ell, .. } = weight_split(k)?;
    if m < -ell || n <= ell {
        return Ok(BigInt::zero());
    }
    let chain = chain_for(k, m, (ell + 2).max(n + 1))?;
    let f = chain.form(m);
    if !f.is_integral() {
        return Err(Error::NonIntegral { exponent: n });
    }
    Ok(f.int_ref(n).cloned().unwrap_or_default())
}

/// `a_k(m, n)` where `m` and `n` are given as fractions `num/den`; zero unless
/// both are integers.
pub fn a_coeff_frac(k: i64, m: (i64, i64), n: (i64, i64)) -> Result<BigInt> {
    let (mq, mr) = m.0.div_rem(&m.1);
    let (nq, nr) = n.0.div_rem(&n.1);
    if mr != 0 || nr != 0 {
        return Ok(BigInt::zero());
    }
    a_coeff(k, mq, nq)
}
