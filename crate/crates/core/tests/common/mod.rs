#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use serde::Deserialize;

use whmf::cache::Cache;
use whmf::forms::FormSpec;
use whmf::verifier::{decompose, reconstruct};
use whmf::QSeries;

#[derive(Debug, Deserialize)]
pub struct KnownValues {
    pub version: u32,
    pub a4_factorizations: Vec<Factorization>,
    pub weight14_level2: Constants,
    pub decomposition_3_8_1: BList,
    pub decomposition_5_14: LongDecomposition,
    pub lehner: Lehner,
}

#[derive(Debug, Deserialize)]
pub struct Factorization {
    pub n: i64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> BigInt {
        self.factors
            .iter()
            .map(|&(p, e)| BigInt::from(p).pow(e))
            .product()
    }
}

#[derive(Debug, Deserialize)]
pub struct Constants {
    pub constants: Vec<String>,
}

#[derive(Debug, Deserialize)]
pub struct BList {
    pub b: Vec<String>,
    pub min_vp_positive: i64,
}

#[derive(Debug, Deserialize)]
pub struct LongDecomposition {
    pub n_terms: usize,
    pub min_digits: usize,
}

#[derive(Debug, Deserialize)]
pub struct Lehner {
    pub c2_min_vp2: i64,
}

pub fn known_values() -> KnownValues {
    let text = include_str!("../fixtures/known_values.toml");
    toml::from_str(text).expect("fixture parses")
}

/// Same precision and the same coefficients on the union of the windows.
pub fn same(a: &QSeries, b: &QSeries) -> bool {
    a.prec() == b.prec()
        && (a.val().min(b.val())..a.prec()).all(|n| a.coeff(n).unwrap() == b.coeff(n).unwrap())
}

pub fn series() -> impl Strategy<Value = QSeries> {
    (-3i64..4, prop::collection::vec(-1000i64..1000, 1..40))
        .prop_map(|(val, c)| QSeries::from_i64s(val, &c, val + c.len() as i64).unwrap())
}

pub fn unit_series() -> impl Strategy<Value = QSeries> {
    (-2i64..3, 1i64..5, prop::collection::vec(-50i64..50, 1..30)).prop_map(|(val, lead, mut c)| {
        c.insert(0, if lead % 2 == 0 { -lead } else { lead });
        QSeries::from_i64s(val, &c, val + c.len() as i64).unwrap()
    })
}

pub fn ring_laws(a: &QSeries, b: &QSeries, c: &QSeries) -> Result<(), TestCaseError> {
    prop_assert!(same(&a.add(b), &b.add(a)));
    prop_assert!(same(&a.add(b).add(c), &a.add(&b.add(c))));
    prop_assert!(same(&a.mul(b), &b.mul(a)));
    prop_assert!(same(&a.mul(b).mul(c), &a.mul(&b.mul(c))));
    prop_assert!(same(&a.mul(&b.add(c)), &a.mul(b).add(&a.mul(c))));
    prop_assert!(a.sub(a).is_zero());
    Ok(())
}

pub fn invert_round_trip(a: &QSeries) -> Result<(), TestCaseError> {
    let a = a.normalize();
    let target = a.prec() - 2 * a.val();
    prop_assume!(target > -a.val());
    let inv = a.invert(target).unwrap();
    let one = a.mul(&inv);
    for n in one.val()..one.prec() {
        let want = if n == 0 { 1 } else { 0 };
        prop_assert_eq!(
            one.coeff(n).unwrap(),
            BigRational::from_integer(want.into())
        );
    }
    Ok(())
}

pub fn up_after_vp(a: &QSeries, p: u32) -> Result<(), TestCaseError> {
    prop_assert!(same(&a.apply_vp(p).apply_up(p), a));
    Ok(())
}

/// `(k, p)` from the certified weights and levels.
pub fn pair() -> impl Strategy<Value = (i64, u32)> {
    (
        prop::sample::select(vec![4i64, 6, 8, 10, 14]),
        prop::sample::select(vec![2u32, 3, 5]),
    )
}

pub fn decompose_round_trip(k: i64, p: u32, b: &[i64]) -> Result<(), TestCaseError> {
    let b: Vec<BigRational> = b
        .iter()
        .map(|&x| BigRational::from_integer(x.into()))
        .collect();
    let prec = 40;
    let f = reconstruct(k, p, &b, prec).unwrap();
    let dec = decompose(&f, k, p, b.len() - 1, prec).unwrap();
    prop_assert_eq!(dec.b, b);
    Ok(())
}

pub fn form_spec() -> impl Strategy<Value = FormSpec> {
    prop_oneof![
        prop::sample::select(vec![4i64, 6, 8, 10, 12, 14]).prop_map(FormSpec::Eisenstein),
        Just(FormSpec::J),
        Just(FormSpec::Delta),
        (prop::sample::select(vec![4i64, -2, 12, -4]), 1i64..4)
            .prop_map(|(k, m)| FormSpec::Canonical { k, m }),
        prop::sample::select(vec![2u32, 3, 5]).prop_map(FormSpec::Psi),
        (
            prop::sample::select(vec![4i64, 6]),
            prop::sample::select(vec![2u32, 3])
        )
            .prop_map(|(k, p)| FormSpec::T { k, p }),
        (
            prop::sample::select(vec![-2i64, -8]),
            prop::sample::select(vec![2u32, 5])
        )
            .prop_map(|(k, p)| FormSpec::Alpha { k, p }),
    ]
}

pub fn cache_byte_exact(spec: &FormSpec, prec: i64) -> Result<(), TestCaseError> {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let fresh = spec.expand(prec).unwrap();
    let first = cache.expand(spec, prec).unwrap();
    let bytes = std::fs::read(cache.path(spec, prec)).unwrap();
    let text = fresh.to_text();
    prop_assert_eq!(bytes.as_slice(), text.as_bytes());
    let again = cache.expand(spec, prec).unwrap();
    prop_assert_eq!(&first, &fresh);
    prop_assert_eq!(&again, &fresh);
    prop_assert_eq!(again.to_text(), fresh.to_text());
    Ok(())
}
