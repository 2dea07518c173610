use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

/// p-adic valuation; `Infinity` is the valuation of zero and compares above
/// every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn at_least(self, bound: i64) -> bool {
        self >= Valuation::Finite(bound)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

pub fn vp_int(x: &BigInt, p: u32) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        x = q;
        v += 1;
    }
}

pub fn vp(x: &BigRational, p: u32) -> Valuation {
    match (vp_int(x.numer(), p), vp_int(x.denom(), p)) {
        (Valuation::Infinity, _) => Valuation::Infinity,
        (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
        (Valuation::Finite(_), Valuation::Infinity) => unreachable!("denominator is nonzero"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_valuations() {
        assert_eq!(vp_int(&BigInt::from(68234240u64), 2), Valuation::Finite(10));
        assert_eq!(vp_int(&BigInt::from(-250), 5), Valuation::Finite(3));
        assert_eq!(vp_int(&BigInt::from(7), 3), Valuation::Finite(0));
        assert_eq!(vp_int(&BigInt::zero(), 3), Valuation::Infinity);
    }

    #[test]
    fn rational_valuation() {
        let x = BigRational::new(3.into(), 8.into());
        assert_eq!(vp(&x, 2), Valuation::Finite(-3));
        assert_eq!(vp(&BigRational::zero(), 5), Valuation::Infinity);
    }

    #[test]
    fn ordering() {
        assert!(Valuation::Infinity > Valuation::Finite(1_000_000));
        assert!(Valuation::Infinity.at_least(7));
        assert!(!Valuation::Finite(6).at_least(7));
    }
}
