//! Ratios `I_{n+1}(1)/I_n(1)` of modified Bessel functions at argument 1.
//!
//! These ratios are the whole interface: the Dirichlet-to-Neumann eigenvalue
//! of `-Δ + 1` on the unit circle is `λ̌_n = n + I_{n+1}(1)/I_n(1)`, and the
//! closed-form coupling weights need the next ratio up as well. Two
//! independent routes are kept:
//!
//! * normalized power series: with `s_n = Σ_k 1/(4^k k! (n+1)⋯(n+k))`
//!   (so `I_n(1) = s_n / (2^n n!)`), the ratio is
//!   `s_{n+1} / (2(n+1) s_n)` — no under/overflow at any order;
//! * backward recurrence on the ratio itself:
//!   `r_k = 1/(2(k+1) + r_{k+1})`, seeded with 0 well above the target
//!   order. The seed error is damped by ~`1/(4k²)` per level.

use crate::error::{Error, Result};

/// Levels of backward recurrence run above the requested order.
const TAIL: u32 = 16;

/// Route agreement demanded of the two evaluations (relative).
pub const ROUTE_AGREEMENT: f64 = 1e-13;

/// `I_{n+1}(1)/I_n(1)` by downward ratio recurrence. No domain checks.
pub(crate) fn ratio_backward(n: u32) -> f64 {
    let mut r = 0.0_f64;
    for k in (n..n + TAIL).rev() {
        r = 1.0 / (2.0 * (k as f64 + 1.0) + r);
    }
    r
}

/// Ratios `r_k = I_{k+1}(1)/I_k(1)` for all `k = 0..=n_max` in one pass.
pub(crate) fn ratio_table(n_max: u32) -> Vec<f64> {
    let mut out = vec![0.0_f64; n_max as usize + 1];
    let mut r = 0.0_f64;
    for k in (0..n_max + TAIL).rev() {
        r = 1.0 / (2.0 * (k as f64 + 1.0) + r);
        if k <= n_max {
            out[k as usize] = r;
        }
    }
    out
}

/// Normalized series `s_n = Σ_k c_k`, `c_0 = 1`,
/// `c_{k+1} = c_k / (4 (k+1) (n+k+1))`; compensated summation.
fn scaled_series(n: u32) -> f64 {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut comp = 0.0_f64;
    for k in 0..200u32 {
        term /= 4.0 * (k as f64 + 1.0) * (n as f64 + k as f64 + 1.0);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term < 1.0e-18 * sum {
            break;
        }
    }
    sum
}

pub(crate) fn ratio_series(n: u32) -> f64 {
    scaled_series(n + 1) / (2.0 * (n as f64 + 1.0) * scaled_series(n))
}

/// `I_{n+1}(1)/I_n(1)`, computed two independent ways and cross-checked.
///
/// The result lies in `(0, 1/2)` and is strictly decreasing in `n`.
pub fn modified_ratio(n: u32) -> Result<f64> {
    if n > 10_000 {
        return Err(Error::domain(
            "modified_ratio",
            format!("n = {n} exceeds 1e4"),
        ));
    }
    let cf = ratio_backward(n);
    let series = ratio_series(n);
    let rel = (cf - series).abs() / cf.max(f64::MIN_POSITIVE);
    if rel > ROUTE_AGREEMENT {
        return Err(Error::PrecisionLoss {
            op: "modified_ratio",
            a: cf,
            b: series,
            rel,
        });
    }
    debug_assert!(cf > 0.0 && cf < 0.5);
    Ok(cf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn routes_agree_up_to_large_order() {
        for n in (0..=2000).step_by(37) {
            let cf = ratio_backward(n);
            let s = ratio_series(n);
            assert!(((cf - s) / cf).abs() < 1e-14, "n={n}: {cf:e} vs {s:e}");
        }
    }

    #[test]
    fn table_matches_pointwise() {
        let table = ratio_table(300);
        for n in [0u32, 1, 7, 100, 299, 300] {
            assert_eq!(table[n as usize], ratio_backward(n));
        }
    }

    #[test]
    fn below_one_half_and_decreasing() {
        let mut prev = 0.5;
        for n in 0..=100 {
            let r = modified_ratio(n).unwrap();
            assert!(r > 0.0 && r < 0.5);
            assert!(r < prev, "ratio must decrease: n={n}");
            prev = r;
        }
    }
}
