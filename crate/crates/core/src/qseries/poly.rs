//! Dense integer polynomial kernels behind [`QSeries`](super::QSeries) multiplication.
//!
//! Only truncated ("short") products are ever needed: the result of a series
//! product is known to `min(len_a, len_b)` terms.

use num_bigint::BigInt;
use num_traits::Zero;

/// Below this length the short product falls back to schoolbook.
///
/// Picked from `benches/mul.rs`: with coefficients of a few hundred digits the
/// crossover sits between 24 and 48 terms.
pub const KARATSUBA_THRESHOLD: usize = 32;

/// First `n` coefficients of `a * b`. Both inputs must have at least `n` entries.
pub fn mul_short(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    debug_assert!(a.len() >= n && b.len() >= n);
    let mut out = vec![BigInt::zero(); n];
    short_into(&a[..n], &b[..n], &mut out);
    out
}

/// Schoolbook short product, exposed for benchmarking against the split version.
pub fn mul_short_schoolbook(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    schoolbook_short_into(&a[..n], &b[..n], &mut out);
    out
}

/// Full product `a * b` (length `a.len() + b.len() - 1`).
pub fn mul_full(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    full_into(a, b, &mut out);
    out
}

// out[i] += sum_{j+k=i, i<n} a[j] b[k]
fn schoolbook_short_into(a: &[BigInt], b: &[BigInt], out: &mut [BigInt]) {
    let n = out.len();
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
}

fn schoolbook_full_into(a: &[BigInt], b: &[BigInt], out: &mut [BigInt]) {
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
}

// low n terms of a*b accumulated into out (len n); a, b have exactly n entries.
//
// a*b mod x^n = a0*b0 + x^h (a0*b1 + a1*b0) mod x^n, with a0*b0 a full product
// of two length-h halves and the cross terms again short products.
fn short_into(a: &[BigInt], b: &[BigInt], out: &mut [BigInt]) {
    let n = out.len();
    if n < KARATSUBA_THRESHOLD {
        schoolbook_short_into(a, b, out);
        return;
    }
    let h = n - n / 2;
    let lo = n - h;
    let mut full = vec![BigInt::zero(); 2 * h - 1];
    full_into(&a[..h], &b[..h], &mut full);
    for (o, v) in out.iter_mut().zip(full) {
        *o += v;
    }
    short_into(&a[..lo], &b[h..h + lo], &mut out[h..]);
    short_into(&a[h..h + lo], &b[..lo], &mut out[h..]);
}

// full product accumulated into out (len a+b-1).
fn full_into(a: &[BigInt], b: &[BigInt], out: &mut [BigInt]) {
    let n = a.len().min(b.len());
    if n < KARATSUBA_THRESHOLD || a.len() != b.len() {
        if a.len() != b.len() && n >= KARATSUBA_THRESHOLD {
            // unbalanced: chop the longer operand into blocks of the shorter length
            let (long, short, swap) = if a.len() > b.len() {
                (a, b, false)
            } else {
                (b, a, true)
            };
            let m = short.len();
            let mut start = 0;
            while start < long.len() {
                let end = (start + m).min(long.len());
                let block = &long[start..end];
                let dst = &mut out[start..start + block.len() + m - 1];
                if swap {
                    full_into(short, block, dst);
                } else {
                    full_into(block, short, dst);
                }
                start = end;
            }
            return;
        }
        schoolbook_full_into(a, b, out);
        return;
    }
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);

    let z0 = mul_full(a0, b0);
    let z2 = mul_full(a1, b1);
    let sa = add_padded(a0, a1);
    let sb = add_padded(b0, b1);
    let mut z1 = mul_full(&sa, &sb);
    for (i, v) in z0.iter().enumerate() {
        z1[i] -= v;
    }
    for (i, v) in z2.iter().enumerate() {
        z1[i] -= v;
    }
    for (i, v) in z0.into_iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in z2.into_iter().enumerate() {
        out[2 * h + i] += v;
    }
    for (i, v) in z1.into_iter().enumerate() {
        if i + h < out.len() {
            out[i + h] += v;
        } else {
            debug_assert!(v.is_zero());
        }
    }
}

fn add_padded(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let n = x.len().max(y.len());
    (0..n)
        .map(|i| match (x.get(i), y.get(i)) {
            (Some(u), Some(v)) => u + v,
            (Some(u), None) => u.clone(),
            (None, Some(v)) => v.clone(),
            (None, None) => BigInt::zero(),
        })
        .collect()
}
