//! Certificates for `p^eps | a_k(m p^s, n)`.
//!
//! For each `j` in `1..d` the weight `2 - k` test form (`f_{2-k,j} | U_p`,
//! minus `f_{2-k,j/p}` when `p | j`) is written as `sum_i B_i Phi^i alpha`
//! with `i` running up to its pole order at the cusp 0. Valuation bounds on
//! the `B_i` then prove the form is a constant modulo `p^eps`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::integral_bases::dim_mk;
use crate::level_one::{a_coeff, a_coeff_frac, canonical_form};
use crate::level_p::{fricke_up_image, mu_valuation, phi, psi, theta_alpha};
use crate::qseries::{vp, vp_int, QSeries, Valuation};
use crate::tables::{lambda, tables, PRIMES, WEIGHTS};

/// Floor for the working precision of [`verify_theorem5`].
pub const DEFAULT_PREC: i64 = 500;

/// Coefficients past the constant term used when checking the decomposition
/// of the image at the cusp 0.
const ZERO_CUSP_PREC: i64 = 40;

pub fn epsilon(k: i64, p: u32) -> Result<u32> {
    tables().epsilon(k, p)
}

fn check_pair(k: i64, p: u32) -> Result<()> {
    if !PRIMES.contains(&p) {
        return Err(Error::InvalidLevel(p));
    }
    if !WEIGHTS.contains(&k) {
        return Err(Error::InvalidWeight(k));
    }
    Ok(())
}

fn p_pow(p: u32, e: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b.recip(), (-e) as usize)
    }
}

fn rat(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

/// `a_k(m, n p^s) = p^(s(k-1)) (a_k(m p^s, n) - a_k(m p^(s-1), n/p)) + a_k(m/p, n p^(s-1))`.
pub fn recurrence_check(p: u32, k: i64, m: i64, n: i64, s: u32) -> Result<bool> {
    if m <= 0 || n <= 0 || s == 0 {
        return Err(Error::IndexOutOfRange {
            j: m.min(n).min(s as i64),
            max: 0,
        });
    }
    let pi = p as i64;
    let ps = pi.pow(s);
    let lhs = rat(a_coeff(k, m, n * ps)?);
    let inner = a_coeff(k, m * ps, n)? - a_coeff_frac(k, (m * ps / pi, 1), (n, pi))?;
    let rhs = p_pow(p, s as i64 * (k - 1)) * rat(inner)
        + rat(a_coeff_frac(k, (m, pi), (n * ps / pi, 1))?);
    Ok(lhs == rhs)
}

/// `a_k(m p^r, n p^s) = a_k(m p^(r-t-1), n p^(s-t-1)) + sum_{i<=t} p^((s-i)(k-1)) a_k(m p^(r+s-2i), n)`
/// for every `0 <= t <= min(r, s - 1)`; needs `p` prime to `m` and `n`.
pub fn reduction_chain_check(p: u32, k: i64, m: i64, n: i64, r: u32, s: u32) -> Result<bool> {
    let pi = p as i64;
    if m <= 0 || n <= 0 || m % pi == 0 || n % pi == 0 || s == 0 {
        return Err(Error::IndexOutOfRange { j: m, max: 0 });
    }
    let lhs = rat(a_coeff(k, m * pi.pow(r), n * pi.pow(s))?);
    for t in 0..=r.min(s - 1) {
        // exponents r - t - 1 and s - t - 1 may be -1
        let frac = |x: i64, e: i64| {
            if e >= 0 {
                (x * pi.pow(e as u32), 1)
            } else {
                (x, pi.pow((-e) as u32))
            }
        };
        let mut rhs = rat(a_coeff_frac(
            k,
            frac(m, r as i64 - t as i64 - 1),
            frac(n, s as i64 - t as i64 - 1),
        )?);
        for i in 0..=t {
            let e = (s - i) as i64 * (k - 1);
            rhs += p_pow(p, e) * rat(a_coeff(k, m * pi.pow(r + s - 2 * i), n)?);
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For `g = f_{k, m p^s} - f_{k, m p^(s-1)}(p tau)`, the coefficients at
/// exponents prime to `p` equal `a_k(m p^s, n)`.
pub fn g_construction_check(p: u32, k: i64, m: i64, s: u32, prec: i64) -> Result<bool> {
    let pi = p as i64;
    let top = canonical_form(k, m * pi.pow(s), prec)?.series;
    let low = canonical_form(k, m * pi.pow(s - 1), prec)?
        .series
        .apply_vp(p);
    let g = top.sub(&low);
    for n in 1..prec {
        if n % pi != 0 && g.coeff_int(n)? != a_coeff(k, m * pi.pow(s), n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One of the forms whose congruence to a constant proves the divisibility.
#[derive(Clone, Debug)]
pub struct TestForm {
    pub p: u32,
    pub k: i64,
    pub j: i64,
    pub series: QSeries,
    /// Expansion at infinity of `p (p tau)^(k-2) F(-1/(p tau))`.
    pub image: QSeries,
    /// Number of `Phi^i alpha` terms beyond the first: the pole order at 0
    /// minus that of `alpha`.
    pub n_terms: usize,
}

impl TestForm {
    pub fn constant(&self) -> BigRational {
        self.series.coeff(0).expect("test form reaches q^0")
    }

    pub fn description(&self) -> String {
        let w = 2 - self.k;
        if self.j % self.p as i64 == 0 {
            format!(
                "f_{{{w},{}}}|U_{} - f_{{{w},{}}}",
                self.j,
                self.p,
                self.j / self.p as i64
            )
        } else {
            format!("f_{{{w},{}}}|U_{}", self.j, self.p)
        }
    }
}

/// Builds the `j`-th test form to `O(q^prec)` from `f_{2-k,j}` known to
/// `O(q^(p prec))`, together with its image at the other cusp.
pub fn build_test_form(p: u32, k: i64, j: i64, prec: i64) -> Result<TestForm> {
    check_pair(k, p)?;
    let d = dim_mk(k, p)?;
    if j < 1 || j >= d {
        return Err(Error::IndexOutOfRange { j, max: d - 1 });
    }
    let w = 2 - k;
    let pi = p as i64;
    let src = canonical_form(w, j, pi * prec.max(1))?.series;
    let mut series = src.apply_up(p);
    let image_prec = ZERO_CUSP_PREC.min(src.prec());
    let mut image = fricke_up_image(&src, w, p, image_prec)?;
    if j % pi == 0 {
        let low = canonical_form(w, j / pi, prec.max(image_prec))?.series;
        series = series.sub(&low.truncate(series.prec())?);
        let low_image = low
            .truncate(image_prec)?
            .apply_vp(p)
            .scale_int(&BigInt::from(p));
        image = image.sub(&low_image);
    }
    let series = series.normalize();
    if let Some(v) = series.leading_exponent().filter(|&v| v < 0) {
        return Err(Error::NotHolomorphic(v));
    }
    let series = series.with_val(0).truncate(prec)?;
    let image = image.normalize();
    let pole = tables().row(w, p)?.pole_order;
    let n_terms = -image.val() - pole;
    if n_terms < 0 {
        return Err(Error::NotHolomorphic(image.val()));
    }
    Ok(TestForm {
        p,
        k,
        j,
        series,
        image,
        n_terms: n_terms as usize,
    })
}

type Ladder = Arc<Vec<QSeries>>;

fn ladder_cache() -> &'static Mutex<HashMap<(i64, u32), Ladder>> {
    static C: OnceLock<Mutex<HashMap<(i64, u32), Ladder>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Phi^i alpha_{2-k,p} = q^i + ...` for `i <= n_terms`, to `O(q^prec)`.
pub fn phi_alpha_ladder(k: i64, p: u32, n_terms: usize, prec: i64) -> Result<Ladder> {
    let key = (k, p);
    let (mut n_terms, mut prec) = (n_terms, prec);
    if let Some(l) = ladder_cache().lock().unwrap().get(&key) {
        if l.len() > n_terms && l[0].prec() >= prec {
            return Ok(l.clone());
        }
        // never shrink what is already there
        n_terms = n_terms.max(l.len() - 1);
        prec = prec.max(l[0].prec());
    }
    let alpha = theta_alpha(2 - k, p, prec)?.alpha;
    let phi = phi(p, prec)?.series;
    let mut rungs = Vec::with_capacity(n_terms + 1);
    rungs.push(alpha);
    for _ in 0..n_terms {
        let next = rungs.last().unwrap().mul(&phi);
        rungs.push(next);
    }
    let ladder = Arc::new(rungs);
    ladder_cache().lock().unwrap().insert(key, ladder.clone());
    Ok(ladder)
}

/// `f = sum_{i <= N} B_i Phi^i alpha_{2-k,p}`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub p: u32,
    pub k: i64,
    pub target: String,
    pub b: Vec<BigRational>,
    pub n_terms: usize,
    pub valuations: Vec<Valuation>,
    pub remainder_ok: bool,
    /// Precision to which the remainder was checked to vanish.
    pub checked_to: i64,
}

impl Decomposition {
    pub fn min_vp_positive(&self) -> Valuation {
        self.valuations
            .iter()
            .skip(1)
            .copied()
            .min()
            .unwrap_or(Valuation::Infinity)
    }
}

/// `sum_i b_i Phi^i alpha_{2-k,p}` to `O(q^prec)`.
pub fn reconstruct(k: i64, p: u32, b: &[BigRational], prec: i64) -> Result<QSeries> {
    let ladder = phi_alpha_ladder(k, p, b.len().saturating_sub(1), prec)?;
    let mut acc = QSeries::constant(BigRational::zero(), prec)?;
    for (c, rung) in b.iter().zip(ladder.iter()) {
        acc = acc.add_scaled(c, &rung.truncate(prec)?);
    }
    Ok(acc)
}

/// Solves for `B_0..B_N` one coefficient at a time and checks that nothing is
/// left below `q^prec`.
pub fn decompose(f: &QSeries, k: i64, p: u32, n_terms: usize, prec: i64) -> Result<Decomposition> {
    check_pair(k, p)?;
    if f.prec() < prec {
        return Err(Error::InsufficientPrecision {
            needed: prec,
            available: f.prec(),
        });
    }
    if prec <= n_terms as i64 {
        return Err(Error::InsufficientPrecision {
            needed: n_terms as i64 + 1,
            available: prec,
        });
    }
    if let Some(v) = f.leading_exponent().filter(|&v| v < 0) {
        return Err(Error::NotHolomorphic(v));
    }
    let ladder = phi_alpha_ladder(k, p, n_terms, prec)?;
    let mut rem = f.with_val(0).truncate(prec)?;
    let mut b = Vec::with_capacity(n_terms + 1);
    for (i, rung) in ladder.iter().take(n_terms + 1).enumerate() {
        let c = rem.coeff(i as i64)?;
        if !c.is_zero() {
            rem = rem.add_scaled(&-c.clone(), &rung.truncate(prec)?);
        }
        b.push(c);
    }
    if let Some(e) = rem.leading_exponent() {
        return Err(Error::RemainderNonzero { exponent: e });
    }
    let valuations = b.iter().map(|x| vp(x, p)).collect();
    Ok(Decomposition {
        p,
        k,
        target: String::new(),
        b,
        n_terms,
        valuations,
        remainder_ok: true,
        checked_to: prec,
    })
}

/// `v_p(B_i) >= eps` for `i > 0`, `v_p(B_0) >= eps - nu`, and `B_0 = K` when
/// `K` is given.
pub fn certify_constant_congruence(
    dec: &Decomposition,
    eps: i64,
    nu: i64,
    k_expected: Option<&BigRational>,
) -> bool {
    dec.remainder_ok
        && dec.min_vp_positive().at_least(eps)
        && dec.valuations[0].at_least(eps - nu)
        && k_expected.is_none_or(|k| &dec.b[0] == k)
}

/// The same decomposition read off at the cusp 0, where the image is
/// `sum_i c_i psi^i theta_{2-k,p}`.
#[derive(Clone, Debug)]
pub struct ZeroCuspCheck {
    pub c: Vec<BigRational>,
    /// `B_i = c_i mu p^(i lambda/2 - 1)` for every `i`.
    pub mu_consistent: bool,
    /// `p^(k-2) c_i` is an integer for every `i`.
    pub a_integral: bool,
}

pub fn zero_cusp_check(test: &TestForm, dec: &Decomposition) -> Result<ZeroCuspCheck> {
    let (p, k, n) = (test.p, test.k, test.n_terms);
    let w = 2 - k;
    let r = test.image.prec();
    let n_i = n as i64;
    let entry = theta_alpha(w, p, r + n_i + 1)?;
    let pole = entry.pole_order_at_infty;
    let psi = psi(p, r + 2 * n_i + pole + 2)?.series;
    let mut rungs = vec![entry.theta];
    for _ in 0..n {
        let next = rungs.last().unwrap().mul(&psi);
        rungs.push(next);
    }
    let mut rem = test.image.clone();
    let mut c = vec![BigRational::zero(); n + 1];
    for i in (0..=n).rev() {
        let ci = rem.coeff(-pole - i as i64)?;
        if !ci.is_zero() {
            rem = rem.add_scaled(&-ci.clone(), &rungs[i].truncate(r)?);
        }
        c[i] = ci;
    }
    if let Some(e) = rem.leading_exponent() {
        return Err(Error::RemainderNonzero { exponent: e });
    }
    let mu = rat(BigInt::from(entry.mu));
    let half = lambda(p)? as i64 / 2;
    let mu_consistent = c
        .iter()
        .zip(&dec.b)
        .enumerate()
        .all(|(i, (ci, bi))| ci * &mu * p_pow(p, i as i64 * half - 1) == *bi);
    let scale = p_pow(p, k - 2);
    let a_integral = c.iter().all(|ci| (ci * &scale).is_integer());
    Ok(ZeroCuspCheck {
        c,
        mu_consistent,
        a_integral,
    })
}

fn valuation_json(v: Valuation) -> Option<i64> {
    v.finite()
}

fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        x.to_string()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct JReport {
    pub j: i64,
    pub constant: String,
    #[serde(rename = "min_vp_Bi_igt0")]
    pub min_vp_bi_igt0: Option<i64>,
    #[serde(rename = "vp_B0")]
    pub vp_b0: Option<i64>,
    pub pass: bool,
    pub target: String,
    pub n_terms: usize,
    #[serde(rename = "B")]
    pub b: Vec<String>,
    pub direct_scan_ok: bool,
    pub mu_consistent: bool,
    pub a_integral: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub p: u32,
    pub k: i64,
    pub d: i64,
    pub epsilon: u32,
    pub tests: Vec<JReport>,
    pub pass: bool,
    pub prec: i64,
    pub elapsed_ms: u64,
    pub nu: u32,
    /// `v_p(mu_{2-k,p}) + 1 - k + lambda/2`; when at least `epsilon` the
    /// constant term alone already decides every test.
    pub single_coefficient_margin: i64,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn single_coefficient_margin(k: i64, p: u32) -> Result<i64> {
    Ok(mu_valuation(2 - k, p)? + 1 - k + lambda(p)? as i64 / 2)
}

/// Certificate for every `j` in `1..d`. Works to `max(prec, N + d + 50)`
/// coefficients of each test form, `N` the longest decomposition.
pub fn verify_theorem5(p: u32, k: i64, prec: i64) -> Result<VerificationReport> {
    check_pair(k, p)?;
    let start = Instant::now();
    let d = dim_mk(k, p)?;
    let eps = epsilon(k, p)?;
    let row = tables().row(2 - k, p)?;
    let max_n = (1..d)
        .map(|j| j * (p as i64).pow(2) - row.pole_order)
        .max()
        .unwrap_or(0);
    let work = prec.max(max_n + d + 50);
    let mut tests = Vec::new();
    for j in 1..d {
        let tf = build_test_form(p, k, j, work)?;
        let mut dec = decompose(&tf.series, k, p, tf.n_terms, work)?;
        dec.target = tf.description();
        let constant = tf.constant();
        let pass = certify_constant_congruence(&dec, eps as i64, row.nu as i64, Some(&constant));
        let direct_scan_ok =
            (1..work).all(|n| vp(&tf.series.coeff(n).unwrap(), p).at_least(eps as i64));
        let zc = zero_cusp_check(&tf, &dec)?;
        tests.push(JReport {
            j,
            constant: rational_string(&constant),
            min_vp_bi_igt0: valuation_json(dec.min_vp_positive()),
            vp_b0: valuation_json(dec.valuations[0]),
            pass,
            target: dec.target.clone(),
            n_terms: dec.n_terms,
            b: dec.b.iter().map(rational_string).collect(),
            direct_scan_ok,
            mu_consistent: zc.mu_consistent,
            a_integral: zc.a_integral,
        });
    }
    let pass = tests.iter().all(|t| t.pass);
    Ok(VerificationReport {
        p,
        k,
        d,
        epsilon: eps,
        tests,
        pass,
        prec: work,
        elapsed_ms: start.elapsed().as_millis() as u64,
        nu: row.nu,
        single_coefficient_margin: single_coefficient_margin(k, p)?,
    })
}

/// All fifteen pairs, weights in parallel; within a weight the largest
/// level runs first so the smaller ones reuse its canonical forms.
pub fn verify_all(prec: i64) -> Vec<Result<VerificationReport>> {
    let mut out: Vec<(u32, i64, Result<VerificationReport>)> = WEIGHTS
        .par_iter()
        .flat_map_iter(|&k| {
            [5, 3, 2]
                .into_iter()
                .map(move |p| (p, k, verify_theorem5(p, k, prec)))
        })
        .collect();
    out.sort_by_key(|(p, k, _)| (*p, *k));
    out.into_iter().map(|(_, _, r)| r).collect()
}

/// Pairs with `v_p(m) = v_p(n)` fall outside the divisibility statement (the
/// Eisenstein-like case) and are never tested.
pub const EISENSTEIN_EXCLUSION: &str =
    "no prediction about divisibility when v_p(m) = v_p(n); such pairs are skipped";

pub fn eisenstein_exclusion_note() -> &'static str {
    EISENSTEIN_EXCLUSION
}

/// Lower bound on `v_p(a_k(m, n))`, or `None` when `v_p(m) = v_p(n)`.
pub fn theorem1_bound(p: u32, k: i64, m: i64, n: i64) -> Result<Option<i64>> {
    let eps = epsilon(k, p)? as i64;
    let vm = vp_int(&BigInt::from(m), p).finite().expect("m > 0");
    let vn = vp_int(&BigInt::from(n), p).finite().expect("n > 0");
    Ok(match vm.cmp(&vn) {
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(eps),
        std::cmp::Ordering::Less => Some((vn - vm) * (k - 1) + eps),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub m: i64,
    pub n: i64,
    pub value: String,
    pub vp: Option<i64>,
    pub bound: i64,
}

/// The sampled region and what was found in it.
#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub p: u32,
    pub k: i64,
    pub m_values: Vec<i64>,
    pub nmax: i64,
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<Violation>,
}

/// Checks the bound for `m = m' p^s` (`1 <= m' <= mmax`, `0 <= s <= smax`)
/// and `1 <= n <= nmax`.
pub fn scan_theorem1(p: u32, k: i64, mmax: i64, nmax: i64, smax: u32) -> Result<ScanReport> {
    check_pair(k, p)?;
    let pi = p as i64;
    let ms: BTreeSet<i64> = (1..=mmax)
        .flat_map(|m| (0..=smax).map(move |s| m * pi.pow(s)))
        .collect();
    let m_values: Vec<i64> = ms.into_iter().collect();
    let mut report = ScanReport {
        p,
        k,
        m_values,
        nmax,
        checked: 0,
        skipped: 0,
        violations: vec![],
    };
    let (Some(&top), true) = (report.m_values.last(), nmax >= 1) else {
        return Ok(report);
    };
    // one chain for the whole range
    canonical_form(k, top, nmax + 1)?;
    for &m in &report.m_values {
        for n in 1..=nmax {
            let Some(bound) = theorem1_bound(p, k, m, n)? else {
                report.skipped += 1;
                continue;
            };
            report.checked += 1;
            let a = a_coeff(k, m, n)?;
            let v = vp_int(&a, p);
            if !v.at_least(bound) {
                report.violations.push(Violation {
                    m,
                    n,
                    value: a.to_string(),
                    vp: v.finite(),
                    bound,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn recurrence_small_instances() {
        assert!(recurrence_check(2, 4, 1, 1, 1).unwrap());
        assert!(recurrence_check(3, 6, 1, 2, 1).unwrap());
        assert!(recurrence_check(5, 4, 2, 3, 2).unwrap());
        // the recurrence at s = 1 with p | m
        assert!(recurrence_check(2, 10, 4, 3, 1).unwrap());
    }

    #[test]
    fn recurrence_first_instance_by_hand() {
        // a_4(1, 2) = 2^3 a_4(2, 1)
        let lhs = a_coeff(4, 1, 2).unwrap();
        assert_eq!(lhs, a_coeff(4, 2, 1).unwrap() * 8);
    }

    #[test]
    fn reduction_chain() {
        assert!(reduction_chain_check(2, 4, 1, 1, 1, 1).unwrap());
        assert!(reduction_chain_check(2, 4, 1, 1, 1, 2).unwrap());
        assert!(reduction_chain_check(5, 4, 1, 1, 2, 1).unwrap());
        assert!(reduction_chain_check(3, 8, 2, 1, 2, 2).unwrap());
        assert!(reduction_chain_check(2, 4, 2, 1, 1, 1).is_err());
    }

    #[test]
    fn g_construction() {
        assert!(g_construction_check(2, 4, 1, 1, 30).unwrap());
        assert!(g_construction_check(3, 6, 2, 2, 20).unwrap());
        assert!(g_construction_check(5, 14, 1, 1, 12).unwrap());
    }

    #[test]
    fn test_form_index_range() {
        assert!(matches!(
            build_test_form(2, 4, 2, 20),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            build_test_form(3, 8, 3, 20),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            build_test_form(7, 8, 1, 20),
            Err(Error::InvalidLevel(7))
        ));
    }

    #[test]
    fn pole_bound_from_image() {
        let t = build_test_form(3, 8, 1, 60).unwrap();
        assert_eq!(t.n_terms, 7);
        let t = build_test_form(2, 14, 2, 60).unwrap();
        assert_eq!(t.n_terms, 8 - 3);
        for (p, k) in [(2, 8), (3, 10), (5, 6)] {
            let d = dim_mk(k, p).unwrap();
            let pole = tables().row(2 - k, p).unwrap().pole_order;
            for j in 1..d {
                let t = build_test_form(p, k, j, 30).unwrap();
                assert_eq!(
                    t.n_terms as i64,
                    j * (p as i64).pow(2) - pole,
                    "({p},{k},{j})"
                );
            }
        }
    }

    #[test]
    fn duality_bridge() {
        // q^{n p} of f_{2-k,j} becomes q^n of the U_p image: a_{2-k}(j, np) = -a_k(np, j)
        for (p, k, j) in [(2, 8, 1), (3, 8, 2), (5, 10, 3)] {
            let t = build_test_form(p, k, j, 20).unwrap();
            for n in 1..20 {
                let c = t.series.coeff_int(n).unwrap();
                assert_eq!(
                    c,
                    -a_coeff(k, n * p as i64, j).unwrap(),
                    "({p},{k},{j}) q^{n}"
                );
            }
        }
    }

    #[test]
    fn trivial_decompositions() {
        let alpha = theta_alpha(-6, 3, 60).unwrap().alpha;
        let dec = decompose(&alpha, 8, 3, 3, 60).unwrap();
        assert_eq!(
            dec.b,
            vec![
                BigRational::one(),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero()
            ]
        );
        assert!(certify_constant_congruence(
            &dec,
            3,
            3,
            Some(&BigRational::one())
        ));
        let pa = alpha.mul(&phi(3, 60).unwrap().series);
        let dec = decompose(&pa, 8, 3, 1, 60).unwrap();
        assert_eq!(dec.b, vec![BigRational::zero(), BigRational::one()]);
    }

    #[test]
    fn short_decomposition_leaves_remainder() {
        let t = build_test_form(3, 8, 1, 60).unwrap();
        assert!(matches!(
            decompose(&t.series, 8, 3, 5, 60),
            Err(Error::RemainderNonzero { .. })
        ));
    }

    #[test]
    fn zero_cusp_agrees_for_small_cases() {
        for (p, k, j) in [(3, 8, 1), (2, 14, 2), (5, 4, 1), (3, 14, 3)] {
            let t = build_test_form(p, k, j, 120).unwrap();
            let dec = decompose(&t.series, k, p, t.n_terms, 120).unwrap();
            let zc = zero_cusp_check(&t, &dec).unwrap();
            assert!(zc.mu_consistent, "({p},{k},{j})");
            assert!(zc.a_integral, "({p},{k},{j})");
        }
    }

    #[test]
    fn single_coefficient_margins() {
        let applies =
            |k, p| single_coefficient_margin(k, p).unwrap() >= epsilon(k, p).unwrap() as i64;
        for k in WEIGHTS {
            assert!(applies(k, 2));
        }
        assert!(applies(4, 3) && applies(6, 3) && applies(10, 3));
        assert!(!applies(8, 3) && !applies(14, 3));
        assert!(applies(4, 5));
        for k in [6, 8, 10, 14] {
            assert!(!applies(k, 5));
        }
    }

    #[test]
    fn bounds_and_exclusion() {
        assert_eq!(theorem1_bound(2, 4, 1, 2).unwrap(), Some(10));
        assert_eq!(theorem1_bound(5, 4, 1, 5).unwrap(), Some(4));
        assert_eq!(theorem1_bound(3, 4, 3, 1).unwrap(), Some(2));
        assert_eq!(theorem1_bound(2, 4, 2, 2).unwrap(), None);
        assert_eq!(theorem1_bound(3, 4, 6, 3).unwrap(), None);
        assert_eq!(theorem1_bound(2, 4, 6, 3).unwrap(), Some(7));
        for p in PRIMES {
            assert_eq!(theorem1_bound(p, 4, 1, 1).unwrap(), None);
        }
    }

    #[test]
    fn scan_small() {
        let r = scan_theorem1(2, 4, 3, 16, 1).unwrap();
        assert!(r.violations.is_empty());
        assert_eq!(r.m_values, vec![1, 2, 3, 4, 6]);
        assert_eq!(r.checked + r.skipped, 5 * 16);
        let empty = scan_theorem1(5, 4, 4, 0, 0).unwrap();
        assert_eq!(empty.checked, 0);
    }

    #[test]
    fn weight_four_level_two_report() {
        let r = verify_theorem5(2, 4, 60).unwrap();
        assert_eq!(r.d, 2);
        assert!(r.pass);
        assert_eq!(r.tests.len(), 1);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in [
            "p",
            "k",
            "d",
            "epsilon",
            "tests",
            "pass",
            "prec",
            "elapsed_ms",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        for key in ["j", "constant", "min_vp_Bi_igt0", "vp_B0", "pass"] {
            assert!(v["tests"][0].get(key).is_some(), "{key}");
        }
    }
}
