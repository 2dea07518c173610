mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use whmf::integral_bases::{congruence_by_window, dim_mk, integral_basis};
use whmf::level_one::{a_coeff, eisenstein};
use whmf::level_p::{weight2_form, LevelPForm};
use whmf::qseries::poly::{mul_short, mul_short_schoolbook};
use whmf::qseries::{eta_quotient, EtaQuotientSpec};
use whmf::QSeries;

fn brute_eta(factors: &[(i64, i64)], prec: i64) -> QSeries {
    // prod (1 - q^(d n))^e by repeated multiplication, times q^(sum d e / 24)
    let shift: i64 = factors.iter().map(|&(d, e)| d * e).sum::<i64>() / 24;
    let len = (prec - shift) as usize;
    let mut acc = QSeries::one(len as i64).unwrap();
    for &(d, e) in factors {
        for n in 1.. {
            let step = (d * n) as usize;
            if step >= len {
                break;
            }
            let mut c = vec![0i64; len];
            c[0] = 1;
            c[step] = -1;
            let f = QSeries::from_i64s(0, &c, len as i64).unwrap();
            let f = if e >= 0 {
                f.pow(e as u32).unwrap()
            } else {
                f.invert(len as i64).unwrap().pow((-e) as u32).unwrap()
            };
            acc = acc.mul(&f);
        }
    }
    acc.shift(shift)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn ring_laws(a in common::series(), b in common::series(), c in common::series()) {
        common::ring_laws(&a, &b, &c)?;
    }

    #[test]
    fn invert_round_trip(a in common::unit_series()) {
        common::invert_round_trip(&a)?;
    }

    #[test]
    fn up_after_vp_is_identity(a in common::series(), p in 2u32..8) {
        common::up_after_vp(&a, p)?;
    }

    #[test]
    fn short_products_agree(
        a in prop::collection::vec(-1_000_000i64..1_000_000, 1..150),
        b in prop::collection::vec(-1_000_000i64..1_000_000, 1..150),
    ) {
        let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
        let b: Vec<BigInt> = b.into_iter().map(BigInt::from).collect();
        let n = a.len().min(b.len());
        prop_assert_eq!(mul_short(&a, &b, n), mul_short_schoolbook(&a, &b, n));
    }

    #[test]
    fn text_round_trip(val in -5i64..5, nums in prop::collection::vec(-500i64..500, 1..20), den in 1i64..30) {
        let coeffs: Vec<BigRational> = nums
            .iter()
            .map(|&x| BigRational::new(x.into(), den.into()))
            .collect();
        let s = QSeries::make(val, coeffs, val + nums.len() as i64).unwrap();
        let back = QSeries::from_text(&s.to_text()).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_text(), s.to_text());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn eta_quotient_matches_product(
        e1 in -3i64..4,
        d2 in prop::sample::select(vec![2i64, 3, 4, 6]),
        e2 in -3i64..4,
    ) {
        // pad with eta(tau)^x so the exponent sum is divisible by 24
        let rest = (24 - (e1 + d2 * e2).rem_euclid(24)) % 24;
        let factors = [(1, e1 + rest), (d2, e2)];
        let spec = EtaQuotientSpec::new(&factors).unwrap();
        let prec = spec.valuation() + 30;
        prop_assert_eq!(eta_quotient(&spec, prec).unwrap(), brute_eta(&factors, prec));
    }

    #[test]
    fn decompose_round_trip((k, p) in common::pair(), b in prop::collection::vec(-10_000i64..10_000, 1..10)) {
        common::decompose_round_trip(k, p, &b)?;
    }

    #[test]
    fn cache_is_byte_exact(spec in common::form_spec(), prec in 8i64..40) {
        common::cache_byte_exact(&spec, prec)?;
    }

    #[test]
    fn duality_any_weight(k in -10i64..12, m in 1i64..12, n in 1i64..12) {
        let k = 2 * k;
        prop_assert_eq!(a_coeff(k, m, n).unwrap(), -a_coeff(2 - k, n, m).unwrap());
    }

    #[test]
    fn holomorphic_forms_are_window_combinations(
        (k, p) in common::pair(),
        r in prop::collection::vec(-20i64..20, 3),
    ) {
        let prec = dim_mk(k, p).unwrap() + 40;
        let e = eisenstein(k, prec).unwrap();
        let g = weight2_form(p, prec).unwrap().series.pow((k / 2) as u32).unwrap();
        let f = e
            .scale_int(&r[0].into())
            .add(&e.apply_vp(p).truncate(prec).unwrap().scale_int(&r[1].into()))
            .add(&g.scale_int(&r[2].into()));
        prop_assume!(f.is_integral());
        let basis = integral_basis(k, p, prec).unwrap();
        let c: Vec<BigInt> = (0..basis.d).map(|n| f.coeff_int(n).unwrap()).collect();
        prop_assert!(common::same(&basis.combine(&c), &f.with_val(0)));
    }

    #[test]
    fn window_congruence_extends_to_every_coefficient(
        (k, p) in common::pair(),
        r in prop::collection::vec(-9i64..9, 8),
        s in 0i64..4,
    ) {
        let d = dim_mk(k, p).unwrap();
        let basis = integral_basis(k, p, d + 60).unwrap();
        let ps = BigInt::from(p).pow(s as u32);
        let c: Vec<BigInt> = r.iter().take(d as usize).map(|&x| BigInt::from(x) * &ps).collect();
        let f = LevelPForm::new(k, p, basis.combine(&c));
        prop_assert!(congruence_by_window(&f, s, p).unwrap());
    }
}
