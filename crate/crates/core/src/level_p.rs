//! Level-p objects for `p in {2, 3, 5}`: the Eisenstein combinations
//! `S_{k,p}`, `T_{k,p}` and the weight-2 form, the five newforms, the weight-0
//! eta quotients `Phi_p`, `psi_p = 1/Phi_p`, the negative-weight pairs
//! `theta_{k,p}` / `alpha_{k,p}`, and the operators `T_p` and the change of
//! cusp for `U_p`-images.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::level_one::{delta, eisenstein, eisenstein_factor};
use crate::qseries::{eta_quotient, vp_int, EtaQuotientSpec, QSeries, Valuation};
use crate::tables::{lambda, tables};

/// Slack added to component precisions so that products of a few factors with
/// poles still reach the requested precision.
const SLACK: i64 = 40;

/// A form of weight `weight` on `Gamma_0(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelPForm {
    pub weight: i64,
    pub p: u32,
    pub series: QSeries,
    pub integral: bool,
}

impl LevelPForm {
    pub fn new(weight: i64, p: u32, series: QSeries) -> Self {
        let integral = series.is_integral();
        Self {
            weight,
            p,
            series,
            integral,
        }
    }
}

fn check_prime(p: u32) -> Result<()> {
    if p < 2
        || (2..p)
            .take_while(|d| d * d <= p)
            .any(|d| p.is_multiple_of(d))
    {
        return Err(Error::InvalidLevel(p));
    }
    Ok(())
}

fn check_weight(k: i64) -> Result<()> {
    if matches!(k, 4 | 6 | 8 | 10 | 14) {
        Ok(())
    } else {
        Err(Error::InvalidWeight(k))
    }
}

fn pow_rat(p: u32, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// `S_{k,p} = (E_k - E_k(p tau)) / A_k`, vanishing at infinity.
pub fn s_form(k: i64, p: u32, prec: i64) -> Result<LevelPForm> {
    check_weight(k)?;
    check_prime(p)?;
    let e = eisenstein(k, prec)?;
    let diff = e.sub(&e.apply_vp(p));
    let s = diff.scale(&eisenstein_factor(k as u32).recip()).normalize();
    Ok(LevelPForm::new(k, p, s))
}

/// `T_{k,p} = (p^k E_k(p tau) - E_k) / (p^k - 1)`, vanishing at 0.
pub fn t_form(k: i64, p: u32, prec: i64) -> Result<LevelPForm> {
    check_weight(k)?;
    check_prime(p)?;
    let e = eisenstein(k, prec)?;
    let pk = BigInt::from(p).pow(k as u32);
    let t = e.apply_vp(p).scale_int(&pk).sub(&e);
    let t = t.scale(&BigRational::new(BigInt::one(), pk - 1));
    Ok(LevelPForm::new(k, p, t))
}

/// `(E_2 - p E_2(p tau)) / (1 - p)`: weight 2, level p, constant term 1.
///
/// For `p = 2, 3, 5` this is the same series as `2E_2(2tau) - E_2`,
/// `(3E_2(3tau) - E_2)/2` and `(5E_2(5tau) - E_2)/4`.
pub fn weight2_form(p: u32, prec: i64) -> Result<LevelPForm> {
    check_prime(p)?;
    let e2 = eisenstein(2, prec)?;
    let num = e2.sub(&e2.apply_vp(p).scale_int(&BigInt::from(p)));
    let f = num.scale(&BigRational::new(BigInt::one(), BigInt::from(1 - p as i64)));
    Ok(LevelPForm::new(2, p, f))
}

/// `(p E_2(p tau) - E_2) / c` as printed for each level, computed literally
/// (used to cross-check [`weight2_form`]).
pub fn weight2_variant(p: u32, prec: i64) -> Result<LevelPForm> {
    let divisor: i64 = match p {
        2 => 1,
        3 => 2,
        5 => 4,
        _ => return Err(Error::InvalidLevel(p)),
    };
    let e2 = eisenstein(2, prec)?;
    let f = e2
        .apply_vp(p)
        .scale_int(&BigInt::from(p))
        .sub(&e2)
        .scale(&BigRational::new(BigInt::one(), BigInt::from(divisor)));
    Ok(LevelPForm::new(2, p, f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Newform {
    /// `(eta(tau) eta(2tau))^8`, weight 8, level 2.
    Xi8,
    /// `S_{4,2} T_{6,2}`, weight 10, level 2.
    Xi10,
    /// `(eta(tau) eta(3tau))^6`, weight 6, level 3.
    Omega6,
    /// `(eta(tau) eta(5tau))^4`, weight 4, level 5.
    Lambda4,
    /// `(5E_2(5tau) - E_2)/4 * Lambda4`, weight 6, level 5.
    Lambda6,
}

impl Newform {
    pub const ALL: [Newform; 5] = [
        Newform::Xi8,
        Newform::Xi10,
        Newform::Omega6,
        Newform::Lambda4,
        Newform::Lambda6,
    ];

    pub fn weight(self) -> i64 {
        match self {
            Newform::Xi8 => 8,
            Newform::Xi10 => 10,
            Newform::Omega6 | Newform::Lambda6 => 6,
            Newform::Lambda4 => 4,
        }
    }

    pub fn level(self) -> u32 {
        match self {
            Newform::Xi8 | Newform::Xi10 => 2,
            Newform::Omega6 => 3,
            Newform::Lambda4 | Newform::Lambda6 => 5,
        }
    }

    /// Sign of the Fricke involution (stored, not derived).
    pub fn fricke_sign(self) -> i32 {
        match self {
            Newform::Xi8 | Newform::Lambda4 => 1,
            Newform::Xi10 | Newform::Omega6 | Newform::Lambda6 => -1,
        }
    }
}

impl FromStr for Newform {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Xi8" => Ok(Newform::Xi8),
            "Xi10" => Ok(Newform::Xi10),
            "Omega6" => Ok(Newform::Omega6),
            "Lambda4" => Ok(Newform::Lambda4),
            "Lambda6" => Ok(Newform::Lambda6),
            other => Err(Error::UnknownNewform(other.to_string())),
        }
    }
}

impl fmt::Display for Newform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Newform::Xi8 => "Xi8",
            Newform::Xi10 => "Xi10",
            Newform::Omega6 => "Omega6",
            Newform::Lambda4 => "Lambda4",
            Newform::Lambda6 => "Lambda6",
        })
    }
}

fn eta(factors: &[(i64, i64)], prec: i64) -> Result<QSeries> {
    eta_quotient(&EtaQuotientSpec::new(factors)?, prec)
}

pub fn newform(name: Newform, prec: i64) -> Result<LevelPForm> {
    if prec < 2 {
        return Err(Error::InsufficientPrecision {
            needed: 2,
            available: prec,
        });
    }
    let series = match name {
        Newform::Xi8 => eta(&[(1, 8), (2, 8)], prec)?,
        Newform::Xi10 => s_form(4, 2, prec)?.series.mul(&t_form(6, 2, prec)?.series),
        Newform::Omega6 => eta(&[(1, 6), (3, 6)], prec)?,
        Newform::Lambda4 => eta(&[(1, 4), (5, 4)], prec)?,
        Newform::Lambda6 => weight2_form(5, prec)?
            .series
            .mul(&eta(&[(1, 4), (5, 4)], prec)?),
    };
    Ok(LevelPForm::new(name.weight(), name.level(), series))
}

/// `Phi_p = (eta(p tau) / eta(tau))^lambda = q + ...`, `lambda = 24/(p-1)`.
pub fn phi(p: u32, prec: i64) -> Result<LevelPForm> {
    let l = lambda(p)? as i64;
    Ok(LevelPForm::new(0, p, eta(&[(p as i64, l), (1, -l)], prec)?))
}

/// `psi_p = 1 / Phi_p = q^-1 + ...`.
pub fn psi(p: u32, prec: i64) -> Result<LevelPForm> {
    let l = lambda(p)? as i64;
    Ok(LevelPForm::new(0, p, eta(&[(p as i64, -l), (1, l)], prec)?))
}

/// Hecke operator `f | T_p = f | U_p + p^(k-1) f | V_p` for weight `k`.
pub fn apply_tp(f: &QSeries, p: u32, k: i64) -> QSeries {
    f.apply_up(p).add_scaled(&pow_rat(p, k - 1), &f.apply_vp(p))
}

/// Expansion at infinity of `p (p tau)^-k (f|U_p)(-1/(p tau))` for a level-one
/// form `f` of weight `k`, from `-f + p (f|U_p)|V_p + p^k f|V_(p^2)`.
pub fn fricke_up_image(f: &QSeries, k: i64, p: u32, prec: i64) -> Result<QSeries> {
    if f.prec() < prec {
        return Err(Error::InsufficientPrecision {
            needed: prec,
            available: f.prec(),
        });
    }
    let f = f.truncate(prec)?;
    let up_vp = f.apply_up(p).apply_vp(p).scale_int(&BigInt::from(p));
    let vp2 = f.apply_vp(p * p);
    let image = up_vp.sub(&f).add_scaled(&pow_rat(p, k), &vp2);
    image.truncate(prec)
}

/// `theta_{k,p}`, `alpha_{k,p}` with their stored constants.
#[derive(Clone, Debug)]
pub struct ThetaAlphaEntry {
    pub k: i64,
    pub p: u32,
    pub theta: QSeries,
    pub alpha: QSeries,
    pub mu: i64,
    pub nu: u32,
    pub pole_order_at_infty: i64,
}

impl ThetaAlphaEntry {
    /// First exponent `n >= 1` (below `prec`) where `alpha - 1` is not
    /// divisible by `p^nu`, if any.
    pub fn alpha_congruence_failure(&self) -> Option<i64> {
        (1..self.alpha.prec()).find(|&n| {
            let c = self.alpha.coeff_int(n).expect("alpha is integral");
            !vp_int(&c, self.p).at_least(self.nu as i64)
        })
    }
}

// theta = num_theta / Delta(p tau)^a, alpha = num_alpha / Delta(tau)^b
fn theta_alpha_recipe(k: i64, p: u32, prec: i64) -> Result<(QSeries, QSeries)> {
    let w = prec + SLACK;
    let pi = p as i64;
    let inv_dp = |a: i64| eta(&[(pi, -24 * a)], w);
    let inv_d = |a: i64| eta(&[(1, -24 * a)], w);
    let s = |kk: i64| s_form(kk, p, w).map(|f| f.series);
    let t = |kk: i64| t_form(kk, p, w).map(|f| f.series);
    let nf = |n: Newform| newform(n, w).map(|f| f.series);
    let phi_s = || phi(p, w).map(|f| f.series);
    let psi_s = || psi(p, w).map(|f| f.series);

    let prod = |parts: Vec<QSeries>| -> QSeries {
        let mut it = parts.into_iter();
        let first = it.next().expect("nonempty product");
        it.fold(first, |acc, x| acc.mul(&x))
    };

    let (theta, alpha) = match (p, k) {
        (2, -2) => (
            prod(vec![nf(Newform::Xi10)?, inv_dp(1)?]),
            prod(vec![nf(Newform::Xi10)?, inv_d(1)?]),
        ),
        (2, -4) => (
            prod(vec![nf(Newform::Xi8)?, inv_dp(1)?]),
            prod(vec![nf(Newform::Xi8)?, inv_d(1)?]),
        ),
        (2, -6) => (prod(vec![t(6)?, inv_dp(1)?]), prod(vec![s(6)?, inv_d(1)?])),
        (2, -8) => (prod(vec![t(4)?, inv_dp(1)?]), prod(vec![s(4)?, inv_d(1)?])),
        (2, -12) => (
            prod(vec![delta(w)?, inv_dp(2)?]),
            prod(vec![delta(w)?.apply_vp(2), inv_d(2)?]),
        ),
        (3, -2) => (
            prod(vec![s(4)?, nf(Newform::Omega6)?, inv_dp(1)?]),
            prod(vec![t(4)?, nf(Newform::Omega6)?, inv_d(1)?]),
        ),
        (3, -4) => (
            prod(vec![s(4)?, t(4)?, inv_dp(1)?]),
            prod(vec![s(4)?, t(4)?, inv_d(1)?]),
        ),
        (3, -6) => (
            prod(vec![nf(Newform::Omega6)?, inv_dp(1)?]),
            prod(vec![nf(Newform::Omega6)?, inv_d(1)?]),
        ),
        (3, -8) => (prod(vec![t(4)?, inv_dp(1)?]), prod(vec![s(4)?, inv_d(1)?])),
        (3, -12) => (
            prod(vec![phi_s()?, delta(w)?, inv_dp(2)?]),
            prod(vec![psi_s()?, delta(w)?.apply_vp(3), inv_d(2)?]),
        ),
        (5, -2) => (
            prod(vec![
                nf(Newform::Lambda4)?,
                nf(Newform::Lambda6)?,
                phi_s()?,
                inv_dp(1)?,
            ]),
            prod(vec![
                nf(Newform::Lambda4)?,
                nf(Newform::Lambda6)?,
                psi_s()?,
                inv_d(1)?,
            ]),
        ),
        (5, -4) => (
            prod(vec![nf(Newform::Lambda4)?.pow(2)?, phi_s()?, inv_dp(1)?]),
            prod(vec![nf(Newform::Lambda4)?.pow(2)?, psi_s()?, inv_d(1)?]),
        ),
        (5, -6) => (
            prod(vec![nf(Newform::Lambda6)?, inv_dp(1)?]),
            prod(vec![nf(Newform::Lambda6)?, inv_d(1)?]),
        ),
        (5, -8) => (
            prod(vec![nf(Newform::Lambda4)?, inv_dp(1)?]),
            prod(vec![nf(Newform::Lambda4)?, inv_d(1)?]),
        ),
        (5, -12) => (
            prod(vec![phi_s()?, nf(Newform::Lambda4)?.pow(3)?, inv_dp(2)?]),
            prod(vec![psi_s()?, nf(Newform::Lambda4)?.pow(3)?, inv_d(2)?]),
        ),
        _ => return Err(Error::NotInTable { k, p }),
    };
    Ok((theta.truncate(prec)?, alpha.truncate(prec)?))
}

fn entry_cache() -> &'static Mutex<HashMap<(i64, u32), ThetaAlphaEntry>> {
    static C: OnceLock<Mutex<HashMap<(i64, u32), ThetaAlphaEntry>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds the table entry for `k in {-2,-4,-6,-8,-12}`, `p in {2,3,5}` to
/// `O(q^prec)`, checking the stored pole order, the normalizations and
/// integrality.
pub fn theta_alpha(k: i64, p: u32, prec: i64) -> Result<ThetaAlphaEntry> {
    let row = tables().row(k, p)?;
    if prec < 1 {
        return Err(Error::InsufficientPrecision {
            needed: 1,
            available: prec,
        });
    }
    {
        let cache = entry_cache().lock().unwrap();
        if let Some(e) = cache.get(&(k, p)) {
            if e.alpha.prec() >= prec {
                return Ok(ThetaAlphaEntry {
                    theta: e.theta.truncate(prec)?,
                    alpha: e.alpha.truncate(prec)?,
                    ..e.clone()
                });
            }
        }
    }
    let (theta, alpha) = theta_alpha_recipe(k, p, prec)?;
    let theta = theta.normalize();
    let alpha = alpha.normalize();
    let lead = theta.coeff(theta.val())?;
    let theta = if lead.is_one() {
        theta
    } else {
        theta.scale(&lead.recip())
    };
    if -theta.val() != row.pole_order {
        return Err(Error::Parse(format!(
            "theta_{{{k},{p}}} has a pole of order {} but the table records {}",
            -theta.val(),
            row.pole_order
        )));
    }
    if alpha.val() != 0 || !alpha.coeff(0)?.is_one() {
        return Err(Error::Parse(format!(
            "alpha_{{{k},{p}}} does not start with 1"
        )));
    }
    for s in [&theta, &alpha] {
        if let Some(e) = (s.val()..s.prec()).find(|&n| s.coeff_int(n).is_err()) {
            return Err(Error::NonIntegral { exponent: e });
        }
    }
    let entry = ThetaAlphaEntry {
        k,
        p,
        theta,
        alpha,
        mu: row.mu,
        nu: row.nu,
        pole_order_at_infty: row.pole_order,
    };
    entry_cache().lock().unwrap().insert((k, p), entry.clone());
    Ok(entry)
}

/// `v_p(mu_{k,p})`.
pub fn mu_valuation(k: i64, p: u32) -> Result<i64> {
    let mu = tables().row(k, p)?.mu;
    Ok(vp_int(&BigInt::from(mu), p)
        .finite()
        .expect("mu is nonzero"))
}

/// True when every coefficient of `f` in `1..prec` is divisible by `p^s`.
pub fn congruent_to_constant(f: &QSeries, p: u32, s: i64) -> bool {
    (1.max(f.val())..f.prec()).all(|n| match f.coeff_int(n) {
        Ok(c) => vp_int(&c, p) >= Valuation::Finite(s),
        Err(_) => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level_one::divisor_sums;
    use num_traits::Zero;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn s_forms_are_integral_and_vanish_at_infinity() {
        for p in [2, 3, 5] {
            for k in [4, 6, 8, 10, 14] {
                let s = s_form(k, p, 60).unwrap();
                assert!(s.integral, "S_{k},{p}");
                assert!(s.series.coeff(0).unwrap().is_zero());
                assert!(s.series.coeff(1).unwrap().is_one());
            }
        }
    }

    #[test]
    fn s42_matches_divisor_sums() {
        let s = s_form(4, 2, 30).unwrap();
        let sig = divisor_sums(3, 30);
        for n in 1..30usize {
            let expect = if n % 2 == 0 {
                &sig[n] - &sig[n / 2]
            } else {
                sig[n].clone()
            };
            assert_eq!(s.series.coeff_int(n as i64).unwrap(), expect);
        }
    }

    #[test]
    fn t_forms_integral_where_expected() {
        for (k, p) in [(4, 2), (6, 2), (4, 3)] {
            let t = t_form(k, p, 80).unwrap();
            assert!(t.integral, "T_{k},{p}");
            assert!(t.series.coeff(0).unwrap().is_one());
        }
        assert!(!t_form(8, 2, 10).unwrap().integral);
        assert!(matches!(t_form(12, 2, 10), Err(Error::InvalidWeight(12))));
    }

    #[test]
    fn weight2_forms() {
        let f = weight2_form(2, 40).unwrap();
        assert_eq!(f.series.int_coeffs().unwrap()[..3], ints(&[1, 24, 24]));
        for p in [2, 3, 5] {
            let f = weight2_form(p, 50).unwrap();
            assert!(f.integral);
            assert_eq!(f, weight2_variant(p, 50).unwrap());
        }
        assert!(congruent_to_constant(
            &weight2_form(2, 200).unwrap().series,
            2,
            3
        ));
        assert!(congruent_to_constant(
            &weight2_form(3, 200).unwrap().series,
            3,
            1
        ));
    }

    #[test]
    fn newforms_normalized_and_integral() {
        for n in Newform::ALL {
            let f = newform(n, 50).unwrap();
            assert!(f.integral, "{n}");
            assert_eq!(f.series.leading_exponent(), Some(1), "{n}");
            assert!(f.series.coeff(1).unwrap().is_one(), "{n}");
            assert_eq!(n.to_string().parse::<Newform>().unwrap(), n);
        }
        let xi8 = newform(Newform::Xi8, 4).unwrap();
        assert_eq!(xi8.series.int_coeffs().unwrap(), ints(&[1, -8, 12]));
        assert!("Xi12".parse::<Newform>().is_err());
    }

    #[test]
    fn phi_psi_reciprocal() {
        for p in [2, 3, 5] {
            let f = phi(p, 80).unwrap().series;
            let g = psi(p, 80).unwrap().series;
            assert_eq!(f.val(), 1);
            assert_eq!(g.val(), -1);
            let one = f.mul(&g);
            assert_eq!(one, QSeries::one(one.prec()).unwrap());
            let inv = f.invert(78).unwrap();
            assert_eq!(inv, g.truncate(inv.prec()).unwrap());
        }
        let p2 = phi(2, 3).unwrap().series;
        assert_eq!(p2.int_coeffs().unwrap(), ints(&[1, 24]));
        assert!(phi(7, 10).is_err());
    }

    #[test]
    fn hecke_on_delta_is_eigen() {
        // Delta | T_2 = tau(2) Delta
        let d = delta(200).unwrap();
        let t = apply_tp(&d, 2, 12);
        assert_eq!(t.coeff_int(1).unwrap(), BigInt::from(-24));
        let expect = d.scale_int(&BigInt::from(-24)).truncate(t.prec()).unwrap();
        assert_eq!(t.normalize(), expect.normalize());
        let one = QSeries::one(30).unwrap();
        let c = apply_tp(&one, 3, 4);
        assert_eq!(c.coeff_int(0).unwrap(), BigInt::from(28));
    }

    #[test]
    fn fricke_image_of_constant() {
        // -1 + p + p^k
        let one = QSeries::one(40).unwrap();
        let img = fricke_up_image(&one, 4, 3, 20).unwrap();
        assert_eq!(img.coeff_int(0).unwrap(), BigInt::from(3 + 81 - 1));
        assert!(img.coeff(5).unwrap().is_zero());
        assert!(fricke_up_image(&one, 4, 3, 41).is_err());
    }

    #[test]
    fn fricke_image_identity_with_hecke() {
        // p f_p(p tau) + p^k f(p^2 tau) = p ((f|T_p)|V_p)
        let f = delta(300).unwrap();
        let p = 2;
        let lhs = fricke_up_image(&f, 12, p, 300).unwrap().add(&f);
        let rhs = apply_tp(&f, p, 12).apply_vp(p).scale_int(&BigInt::from(p));
        let n = lhs.prec().min(rhs.prec());
        assert_eq!(
            lhs.truncate(n).unwrap().normalize(),
            rhs.truncate(n).unwrap().normalize()
        );
    }

    #[test]
    fn theta_alpha_rows_match_stored_data() {
        for p in [2, 3, 5] {
            for k in [-2, -4, -6, -8, -12] {
                let e = theta_alpha(k, p, 120).unwrap();
                assert_eq!(-e.theta.val(), e.pole_order_at_infty, "({k},{p})");
                assert!(e.theta.is_integral() && e.alpha.is_integral());
                assert_eq!(e.alpha_congruence_failure(), None, "alpha_{{{k},{p}}}");
                assert_eq!(e.theta.prec(), 120);
            }
        }
        assert!(matches!(
            theta_alpha(-10, 2, 10),
            Err(Error::NotInTable { .. })
        ));
    }

    #[test]
    fn theta_alpha_cache_serves_shorter_requests() {
        let long = theta_alpha(-8, 3, 90).unwrap();
        let short = theta_alpha(-8, 3, 30).unwrap();
        assert_eq!(short.alpha, long.alpha.truncate(30).unwrap());
        assert_eq!(mu_valuation(-8, 3).unwrap(), 5);
    }
}
