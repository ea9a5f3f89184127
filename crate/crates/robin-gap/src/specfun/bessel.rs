//! Evaluation of `J_n(x)` and `J'_n(x)` for integer `n ≥ 0`, real `x ≥ 0`.
//!
//! Two regimes:
//!
//! * power series, used only where it is cancellation-free: the term ratio
//!   `(x/2)²/((k+1)(n+k+1))` must be ≤ 1 already at `k = 0`, i.e.
//!   `x² ≤ 4(n+1)`, so terms decrease monotonically and the sum is accurate
//!   to a few ulp;
//! * Miller backward recurrence with the normalization
//!   `J_0 + 2 J_2 + 2 J_4 + … = 1` everywhere else. The recurrence is run
//!   from a start order above both `n` and the turning point `x + O(x^{1/3})`,
//!   which keeps the minimal solution `J` accurate relative to its own scale.
//!
//! The derivative uses `J'_n(x) = (n/x) J_n(x) - J_{n+1}(x)`; a single
//! backward pass yields both orders.

use crate::error::{Error, Result};

/// Largest order accepted by the public entry points.
pub const MAX_ORDER: u32 = 2048;
/// Largest order the internal kernels support (the diagonal model needs
/// zeros up to n = 2000).
pub(crate) const MAX_ORDER_INTERNAL: u32 = 4096;
/// Largest argument accepted.
pub const MAX_ARGUMENT: f64 = 1.0e4;

const RESCALE_THRESHOLD: f64 = 1.0e250;
const RESCALE_FACTOR: f64 = 1.0e-250;

/// `J_n(x)` and `J_{n+1}(x)` from one pass. No domain checks.
pub(crate) fn j_pair_raw(n: u32, x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (if n == 0 { 1.0 } else { 0.0 }, 0.0);
    }
    if series_safe(n, x) {
        (series_j(n, x), series_j(n + 1, x))
    } else {
        miller_pair(n, x)
    }
}

pub(crate) fn series_safe(n: u32, x: f64) -> bool {
    x * x <= 4.0 * (n as f64 + 1.0)
}

/// Power series `Σ_k (-1)^k (x/2)^{n+2k} / (k! (n+k)!)`, compensated
/// summation, truncated when a term drops below 1e-18 of the partial sum.
pub(crate) fn series_j(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    // leading coefficient (x/2)^n / n!, built incrementally to dodge
    // overflow of n! and underflow of (x/2)^n separately
    let mut lead = 1.0_f64;
    for k in 1..=n {
        lead *= half / k as f64;
        if lead == 0.0 {
            return 0.0; // underflowed: J_n(x) below f64 range
        }
    }
    let msq = -half * half;
    let mut term = lead;
    let mut sum = term;
    let mut comp = 0.0_f64; // Kahan compensation
    for k in 1..400 {
        term *= msq / (k as f64 * (n as f64 + k as f64));
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() < 1.0e-18 * sum.abs().max(lead * 1.0e-30) {
            break;
        }
    }
    sum
}

/// Miller backward recurrence. Returns `(J_n(x), J_{n+1}(x))`.
fn miller_pair(n: u32, x: f64) -> (f64, f64) {
    debug_assert!(x > 0.0);
    let start = start_order(n, x); // start ≥ n + 2
    let two_over_x = 2.0 / x;

    // invariant at the top of each step: jp = J_{k+1}, j = J_k (unnormalized)
    let mut k = start;
    let mut jp = 0.0_f64;
    let mut j = 1.0e-30_f64;
    let mut norm = if start.is_multiple_of(2) {
        2.0 * j
    } else {
        0.0
    };
    let mut jn = 0.0_f64;
    let mut jn1 = 0.0_f64;

    while k >= 1 {
        let jm = k as f64 * two_over_x * j - jp; // J_{k-1}
        jp = j;
        j = jm;
        k -= 1;
        // now j = J_k, jp = J_{k+1}
        if k == n + 1 {
            jn1 = j;
        } else if k == n {
            jn = j;
        }
        if k == 0 {
            norm += j;
        } else if k.is_multiple_of(2) {
            norm += 2.0 * j;
        }
        if j.abs() > RESCALE_THRESHOLD {
            jp *= RESCALE_FACTOR;
            j *= RESCALE_FACTOR;
            norm *= RESCALE_FACTOR;
            jn *= RESCALE_FACTOR;
            jn1 *= RESCALE_FACTOR;
        }
    }
    (jn / norm, jn1 / norm)
}

/// Start order for backward recurrence: above the order, above the turning
/// point, with a contamination margin.
fn start_order(n: u32, x: f64) -> u32 {
    let turning = x + 18.0 * x.cbrt() + 14.0;
    (turning.ceil() as u32).max(n + 2) + 16
}

/// Bessel function of the first kind of integer order.
///
/// Domain: `0 ≤ n ≤ 2048`, `0 ≤ x ≤ 1e4`.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    check_domain("bessel_j", n, x)?;
    Ok(j_pair_raw(n, x).0)
}

/// Derivative `J'_n(x) = (n/x) J_n(x) - J_{n+1}(x)`.
///
/// At `x = 0` the exact limits are returned: `J'_0(0) = 0`, `J'_1(0) = 1/2`,
/// `J'_n(0) = 0` for `n ≥ 2`.
pub fn bessel_j_prime(n: u32, x: f64) -> Result<f64> {
    check_domain("bessel_j_prime", n, x)?;
    Ok(j_prime_raw(n, x))
}

pub(crate) fn j_prime_raw(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 1 { 0.5 } else { 0.0 };
    }
    let (jn, jn1) = j_pair_raw(n, x);
    (n as f64 / x) * jn - jn1
}

/// `(J_n(x), J'_n(x))` from a single backward pass.
pub(crate) fn j_and_prime_raw(n: u32, x: f64) -> (f64, f64) {
    if x == 0.0 {
        let j = if n == 0 { 1.0 } else { 0.0 };
        let jp = if n == 1 { 0.5 } else { 0.0 };
        return (j, jp);
    }
    let (jn, jn1) = j_pair_raw(n, x);
    (jn, (n as f64 / x) * jn - jn1)
}

fn check_domain(op: &'static str, n: u32, x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(op, format!("x = {x} must be finite and ≥ 0")));
    }
    if x > MAX_ARGUMENT {
        return Err(Error::domain(op, format!("x = {x} exceeds {MAX_ARGUMENT}")));
    }
    if n > MAX_ORDER {
        return Err(Error::domain(op, format!("n = {n} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_constant_term() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn prime_at_zero() {
        assert_eq!(bessel_j_prime(0, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j_prime(1, 0.0).unwrap(), 0.5);
        assert_eq!(bessel_j_prime(2, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_j(0, -1.0).is_err());
        assert!(bessel_j(MAX_ORDER + 1, 1.0).is_err());
        assert!(bessel_j(0, 2.0e4).is_err());
    }

    #[test]
    fn miller_agrees_with_series_on_overlap() {
        // both routes are eps-accurate where the series is safe
        for n in [0u32, 1, 2, 5, 10, 40] {
            let xmax = 2.0 * ((n + 1) as f64).sqrt();
            for i in 1..=8 {
                let x = xmax * i as f64 / 8.0;
                let s = series_j(n, x);
                let (m, _) = miller_pair(n, x);
                let scale = s.abs().max(1e-300);
                assert!(
                    ((s - m) / scale).abs() < 5e-14,
                    "n={n} x={x}: series {s:e} vs miller {m:e}"
                );
            }
        }
    }

    #[test]
    fn recurrence_identity_across_regimes() {
        // J_{n-1} + J_{n+1} = (2n/x) J_n, evaluated independently per order
        for &(n, x) in &[(1u32, 8.0), (3, 15.0), (10, 30.0), (60, 70.0), (200, 230.0)] {
            let a = bessel_j(n - 1, x).unwrap();
            let b = bessel_j(n + 1, x).unwrap();
            let c = bessel_j(n, x).unwrap();
            let lhs = a + b;
            let rhs = 2.0 * n as f64 / x * c;
            let scale = lhs.abs().max(rhs.abs()).max(1e-12);
            assert!(
                ((lhs - rhs) / scale).abs() < 1e-12,
                "n={n} x={x}: {lhs:e} vs {rhs:e}"
            );
        }
    }
}
