//! Negative zeros of the Airy function through its Bessel representation
//!
//! ```text
//! Ai(-x) = (√x / 3) · (J_{1/3}(ζ) + J_{-1/3}(ζ)),   ζ = (2/3) x^{3/2},
//! ```
//!
//! so the `m`-th negative Airy zero `a_m` is the `m`-th positive root of the
//! bracketed Bessel combination. Fractional order uses the same Miller
//! backward recurrence as integer order, normalized with
//! `(x/2)^ν = Σ_k (ν+2k) Γ(ν+k)/k! · J_{ν+2k}(x)`.

use crate::error::{Error, Result};

/// Γ(1/3) and Γ(2/3).
const GAMMA_THIRD: f64 = 2.6789385347077476;
const GAMMA_TWO_THIRDS: f64 = 1.3541179394264005;

/// A negative zero of the Airy function: `Ai(-a_m) = 0`, `a_m > 0`.
#[derive(Debug, Clone, Copy)]
pub struct AiryZero {
    /// 1-based index; zeros are strictly increasing in it.
    pub index: u32,
    pub value: f64,
}

/// `J_ν(x)` for fractional `ν ∈ (-1, 1)`, `x > 0`, by backward recurrence.
fn bessel_j_frac(nu: f64, x: f64) -> f64 {
    debug_assert!(nu > -1.0 && nu < 1.0 && x > 0.0);
    let start = (x + 18.0 * x.cbrt() + 20.0).ceil() as usize;

    // weights w_k = (ν+2k) Γ(ν+k) / k! of the normalization sum
    let gamma_nu1 = if (nu - 1.0 / 3.0).abs() < 1e-9 {
        GAMMA_THIRD / 3.0 // Γ(4/3)
    } else {
        GAMMA_TWO_THIRDS // Γ(2/3), for ν = -1/3
    };

    let mut jp = 0.0_f64; // J_{ν+k+1}
    let mut j = 1.0e-30_f64; // J_{ν+k}
    let jnu;
    let mut even = vec![0.0_f64; start / 2 + 1]; // unnormalized J_{ν+2i}

    let mut k = start;
    loop {
        let jm = 2.0 * (nu + k as f64) / x * j - jp;
        jp = j;
        j = jm;
        k -= 1;
        if k.is_multiple_of(2) {
            even[k / 2] = j;
        }
        if k == 0 {
            jnu = j;
            break;
        }
        if j.abs() > 1.0e250 {
            jp *= 1.0e-250;
            j *= 1.0e-250;
            for v in even.iter_mut() {
                *v *= 1.0e-250;
            }
        }
    }

    let mut w = gamma_nu1; // w_0 = ν Γ(ν) = Γ(ν+1)
    let mut norm = w * even[0];
    for (i, &j_even) in even.iter().enumerate().skip(1) {
        let kf = i as f64;
        w *= (nu + kf - 1.0) * (nu + 2.0 * kf) / (kf * (nu + 2.0 * kf - 2.0));
        norm += w * j_even;
    }
    jnu * (0.5 * x).powf(nu) / norm
}

/// The scaled combination `J_{1/3}(ζ) + J_{-1/3}(ζ)` whose roots in `x` are
/// the negative Airy zeros.
pub(crate) fn airy_combination(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    bessel_j_frac(1.0 / 3.0, zeta) + bessel_j_frac(-1.0 / 3.0, zeta)
}

/// The `m`-th negative zero of the Airy function (`1 ≤ m ≤ 50`), found by
/// bisection on the Bessel representation. Residual ≤ 1e-10.
pub fn airy_negative_zero(m: u32) -> Result<AiryZero> {
    if m == 0 || m > 50 {
        return Err(Error::domain(
            "airy_negative_zero",
            format!("m = {m} not in 1..=50"),
        ));
    }
    let zeros = airy_zero_table(m)?;
    Ok(zeros[m as usize - 1])
}

/// The first `m_max` negative Airy zeros from one scan.
pub fn airy_zero_table(m_max: u32) -> Result<Vec<AiryZero>> {
    if m_max == 0 || m_max > 50 {
        return Err(Error::domain(
            "airy_zero_table",
            format!("m_max = {m_max} not in 1..=50"),
        ));
    }
    let mut out = Vec::with_capacity(m_max as usize);
    let step = 0.25;
    let mut x_prev = 0.5;
    let mut f_prev = airy_combination(x_prev);
    // a_m ~ (3π(4m-1)/8)^{2/3}: cap well past the m_max-th zero
    let x_cap =
        (3.0 * std::f64::consts::PI * (4.0 * m_max as f64 + 3.0) / 8.0).powf(2.0 / 3.0) + 4.0;

    while (out.len() as u32) < m_max {
        let x = x_prev + step;
        if x > x_cap {
            return Err(Error::BracketFailure {
                op: "airy_negative_zero",
                lo: x_prev,
                hi: x_cap,
            });
        }
        let f = airy_combination(x);
        if (f_prev > 0.0 && f <= 0.0) || (f_prev < 0.0 && f >= 0.0) {
            let root = bisect_airy(x_prev, x)?;
            if let Some(last) = out.last() {
                let last: &AiryZero = last;
                if root <= last.value {
                    return Err(Error::invariant(
                        "airy_negative_zero",
                        "zeros not increasing",
                    ));
                }
            }
            out.push(AiryZero {
                index: out.len() as u32 + 1,
                value: root,
            });
        }
        x_prev = x;
        f_prev = f;
    }
    Ok(out)
}

fn bisect_airy(mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = airy_combination(lo);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = airy_combination(mid);
        if fm == 0.0 || hi - lo < 1e-13 * mid.max(1.0) {
            return Ok(mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    if airy_combination(root).abs() > 1e-10 {
        return Err(Error::invariant(
            "airy_negative_zero",
            "bisection residual above 1e-10",
        ));
    }
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_two_zeros() {
        let a1 = airy_negative_zero(1).unwrap();
        let a2 = airy_negative_zero(2).unwrap();
        assert!((a1.value - 2.338107).abs() < 1e-5);
        assert!((a2.value - 4.087949).abs() < 1e-5);
        assert!(a2.value > a1.value);
    }

    #[test]
    fn residuals_and_growth() {
        let zeros = airy_zero_table(50).unwrap();
        for z in &zeros {
            assert!(airy_combination(z.value).abs() <= 1e-10);
            // a_m / m^{2/3} stays bounded (McMahon-type growth)
            let scaled = z.value / (z.index as f64).powf(2.0 / 3.0);
            assert!(scaled > 1.0 && scaled < 4.0);
        }
    }
}
