//! Truncated Laurent series in `q` with exact rational coefficients.
//!
//! A [`QSeries`] stores a contiguous window of coefficients for the exponents
//! `val..prec` and is known only modulo `O(q^prec)`. Reading past `prec` is an
//! error. Internally the coefficients are integer numerators over one shared
//! positive denominator kept in lowest terms, so integral series (almost
//! everything in this crate) never touch a rational gcd.

mod eta;
pub mod poly;
mod text;
mod valuation;

pub use eta::{eta_quotient, euler_function, EtaQuotientSpec};
pub use valuation::{vp, vp_int, Valuation};

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    val: i64,
    prec: i64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl QSeries {
    /// Builds `sum coeffs[i] q^(val+i) + O(q^prec)`; does not normalize.
    pub fn make(val: i64, coeffs: Vec<BigRational>, prec: i64) -> Result<Self> {
        check_window(val, prec, coeffs.len())?;
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .into_iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Self::from_parts(val, prec, num, den))
    }

    /// Integer-coefficient constructor.
    pub fn from_ints(val: i64, coeffs: Vec<BigInt>, prec: i64) -> Result<Self> {
        check_window(val, prec, coeffs.len())?;
        Ok(Self {
            val,
            prec,
            num: coeffs,
            den: BigInt::one(),
        })
    }

    pub fn from_i64s(val: i64, coeffs: &[i64], prec: i64) -> Result<Self> {
        Self::from_ints(val, coeffs.iter().map(|&c| BigInt::from(c)).collect(), prec)
    }

    /// `c + O(q^prec)` for `prec > 0`.
    pub fn constant(c: BigRational, prec: i64) -> Result<Self> {
        Self::monomial(0, c, prec)
    }

    pub fn one(prec: i64) -> Result<Self> {
        Self::constant(BigRational::one(), prec)
    }

    /// `c q^n + O(q^prec)`, with window starting at `n`.
    pub fn monomial(n: i64, c: BigRational, prec: i64) -> Result<Self> {
        if prec <= n {
            return Err(Error::EmptyWindow { val: n, prec });
        }
        let mut coeffs = vec![BigRational::zero(); (prec - n) as usize];
        coeffs[0] = c;
        Self::make(n, coeffs, prec)
    }

    /// Numerators over `den`, reduced to lowest terms.
    pub(crate) fn from_parts(val: i64, prec: i64, num: Vec<BigInt>, den: BigInt) -> Self {
        debug_assert_eq!(num.len() as i64, prec - val);
        let mut s = Self {
            val,
            prec,
            num,
            den,
        };
        s.reduce();
        s
    }

    fn reduce(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Number of stored coefficients, `prec - val`.
    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    /// Shared positive denominator (1 for integral series).
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Numerators over [`denominator`](Self::denominator), indexed from `val`.
    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// True when every coefficient in the window is zero.
    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// Coefficient of `q^n`; zero below `val`, an error at or past `prec`.
    pub fn coeff(&self, n: i64) -> Result<BigRational> {
        if n >= self.prec {
            return Err(Error::PastPrecision {
                exponent: n,
                prec: self.prec,
            });
        }
        if n < self.val {
            return Ok(BigRational::zero());
        }
        Ok(BigRational::new(
            self.num[(n - self.val) as usize].clone(),
            self.den.clone(),
        ))
    }

    /// Integer coefficient of `q^n`; errors if it is not integral.
    pub fn coeff_int(&self, n: i64) -> Result<BigInt> {
        if n >= self.prec {
            return Err(Error::PastPrecision {
                exponent: n,
                prec: self.prec,
            });
        }
        if n < self.val {
            return Ok(BigInt::zero());
        }
        let c = &self.num[(n - self.val) as usize];
        if self.den.is_one() {
            return Ok(c.clone());
        }
        let (q, r) = c.div_rem(&self.den);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NonIntegral { exponent: n })
        }
    }

    /// Borrowed numerator of `q^n` for integral series (no allocation).
    pub(crate) fn int_ref(&self, n: i64) -> Option<&BigInt> {
        debug_assert!(self.den.is_one());
        if n < self.val || n >= self.prec {
            None
        } else {
            Some(&self.num[(n - self.val) as usize])
        }
    }

    /// All coefficients as rationals, indexed from `val`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// Integer coefficients, or the first non-integral exponent.
    pub fn int_coeffs(&self) -> Result<Vec<BigInt>> {
        (self.val..self.prec).map(|n| self.coeff_int(n)).collect()
    }

    /// Exponent of the first nonzero coefficient, if any.
    pub fn leading_exponent(&self) -> Option<i64> {
        self.num
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.val + i as i64)
    }

    /// Drops leading zeros so that `val` is the true valuation. A series that is
    /// zero to its precision is returned unchanged.
    pub fn normalize(&self) -> Self {
        match self.num.iter().position(|c| !c.is_zero()) {
            Some(0) | None => self.clone(),
            Some(i) => Self {
                val: self.val + i as i64,
                prec: self.prec,
                num: self.num[i..].to_vec(),
                den: self.den.clone(),
            },
        }
    }

    /// Forgets every coefficient at or beyond `prec`.
    pub fn truncate(&self, prec: i64) -> Result<Self> {
        if prec > self.prec {
            return Err(Error::InsufficientPrecision {
                needed: prec,
                available: self.prec,
            });
        }
        if prec <= self.val {
            return Err(Error::EmptyWindow {
                val: self.val,
                prec,
            });
        }
        Ok(Self::from_parts(
            self.val,
            prec,
            self.num[..(prec - self.val) as usize].to_vec(),
            self.den.clone(),
        ))
    }

    /// Same series with the window extended down to `val` (zeros prepended).
    pub fn with_val(&self, val: i64) -> Self {
        if val >= self.val {
            return self.clone();
        }
        let pad = (self.val - val) as usize;
        let mut num = vec![BigInt::zero(); pad];
        num.extend(self.num.iter().cloned());
        Self {
            val,
            prec: self.prec,
            num,
            den: self.den.clone(),
        }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            val: self.val + k,
            prec: self.prec + k,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let num = self.num.iter().map(|x| x * c.numer()).collect();
        Self::from_parts(self.val, self.prec, num, &self.den * c.denom())
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        let num = self.num.iter().map(|x| x * c).collect();
        Self::from_parts(self.val, self.prec, num, self.den.clone())
    }

    /// `self + c * other` without building the intermediate scaled series.
    pub fn add_scaled(&self, c: &BigRational, other: &Self) -> Self {
        if c.is_zero() {
            let prec = self.prec.min(other.prec);
            let val = self.val.min(other.val);
            return self
                .with_val(val)
                .truncate(prec)
                .unwrap_or_else(|_| self.clone());
        }
        let val = self.val.min(other.val);
        let prec = self.prec.min(other.prec);
        let den = self.den.lcm(&(&other.den * c.denom()));
        let fa = &den / &self.den;
        let fb = (&den / (&other.den * c.denom())) * c.numer();
        let len = (prec - val) as usize;
        let mut num = Vec::with_capacity(len);
        for e in val..prec {
            let mut acc = BigInt::zero();
            if e >= self.val {
                let x = &self.num[(e - self.val) as usize];
                if !x.is_zero() {
                    acc += x * &fa;
                }
            }
            if e >= other.val {
                let y = &other.num[(e - other.val) as usize];
                if !y.is_zero() {
                    acc += y * &fb;
                }
            }
            num.push(acc);
        }
        Self::from_parts(val, prec, num, den)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(&BigRational::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(&-BigRational::one(), other)
    }

    pub fn neg(&self) -> Self {
        Self {
            val: self.val,
            prec: self.prec,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    /// Product; known to `min(a.prec + b.val, b.prec + a.val)`.
    pub fn mul(&self, other: &Self) -> Self {
        let val = self.val + other.val;
        let prec = (self.prec + other.val).min(other.prec + self.val);
        let n = (prec - val) as usize;
        let num = poly::mul_short(&self.num, &other.num, n);
        Self::from_parts(val, prec, num, &self.den * &other.den)
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, e: u32) -> Result<Self> {
        if e == 0 {
            return Self::one(self.prec - self.val);
        }
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc.expect("e > 0"))
    }

    /// Reciprocal to `O(q^prec)`. The series must be normalized (nonzero
    /// leading coefficient); the best attainable precision is `prec - 2 val`.
    pub fn invert(&self, prec: i64) -> Result<Self> {
        if self.num[0].is_zero() {
            return Err(Error::ZeroLeading);
        }
        let val = -self.val;
        let available = self.prec - 2 * self.val;
        if prec > available {
            return Err(Error::InsufficientPrecision {
                needed: prec,
                available,
            });
        }
        if prec <= val {
            return Err(Error::EmptyWindow { val, prec });
        }
        let n = (prec - val) as usize;
        let u = &self.num;
        let u0 = &u[0];
        // 1/(U/den) = den/U; W = 1/U scaled so every entry stays integral.
        let (w, wden) = if u0.abs().is_one() {
            let mut w: Vec<BigInt> = Vec::with_capacity(n);
            w.push(u0.clone());
            for k in 1..n {
                let mut acc = BigInt::zero();
                for i in 1..=k.min(u.len() - 1) {
                    if !u[i].is_zero() {
                        acc += &u[i] * &w[k - i];
                    }
                }
                w.push(-(acc * u0));
            }
            (w, BigInt::one())
        } else {
            // W'_k = W_k u0^(k+1):  W'_k = -sum_i U_i W'_(k-i) u0^(i-1)
            let mut pows = vec![BigInt::one()];
            for _ in 1..n {
                let next = pows.last().unwrap() * u0;
                pows.push(next);
            }
            let mut w: Vec<BigInt> = vec![BigInt::one()];
            for k in 1..n {
                let mut acc = BigInt::zero();
                for i in 1..=k.min(u.len() - 1) {
                    if !u[i].is_zero() {
                        acc += &u[i] * &w[k - i] * &pows[i - 1];
                    }
                }
                w.push(-acc);
            }
            // w_k = W'_k / u0^(k+1); common denominator u0^n
            let last = pows.last().unwrap() * u0;
            let scaled = w
                .into_iter()
                .enumerate()
                .map(|(k, x)| x * &pows[n - 1 - k])
                .collect();
            (scaled, last)
        };
        let num = w.into_iter().map(|x| x * &self.den).collect();
        Ok(Self::from_parts(val, prec, num, wden))
    }

    /// `f(q) -> f(q^p)`: the `V_p` operator. Result is known to `O(q^(p prec))`.
    pub fn apply_vp(&self, p: u32) -> Self {
        let p = p as i64;
        let val = self.val * p;
        let prec = self.prec * p;
        let mut num = vec![BigInt::zero(); (prec - val) as usize];
        for (i, c) in self.num.iter().enumerate() {
            num[i * p as usize] = c.clone();
        }
        Self {
            val,
            prec,
            num,
            den: self.den.clone(),
        }
    }

    /// `sum a_n q^n -> sum a_(pn) q^n`: the `U_p` operator. Result is known
    /// to `O(q^ceil(prec/p))`.
    pub fn apply_up(&self, p: u32) -> Self {
        let p = p as i64;
        let prec = Integer::div_ceil(&self.prec, &p);
        let val = Integer::div_ceil(&self.val, &p).min(prec - 1);
        let num = (val..prec)
            .map(|n| {
                let idx = n * p - self.val;
                if idx < 0 {
                    BigInt::zero()
                } else {
                    self.num[idx as usize].clone()
                }
            })
            .collect();
        Self::from_parts(val, prec, num, self.den.clone())
    }
}

fn check_window(val: i64, prec: i64, len: usize) -> Result<()> {
    if prec <= val {
        return Err(Error::EmptyWindow { val, prec });
    }
    if prec - val != len as i64 {
        return Err(Error::LengthMismatch {
            expected: prec - val,
            actual: len,
        });
    }
    Ok(())
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::neg(self)
    }
}
