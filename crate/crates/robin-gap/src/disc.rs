//! Dirichlet, Neumann, and Robin eigenvalues of `-Δ` on the unit disc.
//!
//! In angular sector `n` the radial part is `J_n(√λ r)`; the boundary
//! condition `∂u/∂ν + βu = 0` at `r = 1` reduces to the secular equation
//!
//! ```text
//! F(s) = s J'_n(s) + β J_n(s) = 0,       λ = s².
//! ```
//!
//! Interlacing of the zeros of `J_n` and `J'_n` pins the `m`-th Robin root
//! to the certified bracket `(k'_{n,m}, k_{n,m})`, on which `F` changes sign
//! for every `β > 0`; `β = 0` is the Neumann problem exactly, and `β → ∞`
//! recovers the Dirichlet eigenvalue.

use crate::error::{Error, Result};
use crate::specfun::{self, BesselZero};

/// One separated mode of the disc, with both zero certificates.
#[derive(Debug, Clone)]
pub struct DiscMode {
    /// Angular order `n ≥ 0`.
    pub n: u32,
    /// Radial index `m ≥ 1`.
    pub m: u32,
    pub dirichlet: BesselZero,
    pub neumann: BesselZero,
}

impl DiscMode {
    /// `k_{n,m}`: the Dirichlet wavenumber.
    pub fn dirichlet_k(&self) -> f64 {
        self.dirichlet.value
    }

    /// `k'_{n,m}`: the Neumann wavenumber (0 for the constant mode).
    pub fn neumann_k(&self) -> f64 {
        self.neumann.value
    }

    /// Dirichlet eigenvalue `k²`.
    pub fn dirichlet_eigenvalue(&self) -> f64 {
        let k = self.dirichlet_k();
        k * k
    }

    /// Neumann eigenvalue `k'²`.
    pub fn neumann_eigenvalue(&self) -> f64 {
        let k = self.neumann_k();
        k * k
    }

    /// 1 for `n = 0`, 2 otherwise (the `e^{±inθ}` pair).
    pub fn multiplicity(&self) -> u32 {
        if self.n == 0 {
            1
        } else {
            2
        }
    }
}

/// Exact Robin eigenvalue of one mode, with its residual certificate.
#[derive(Debug, Clone)]
pub struct RobinEigenvalue {
    pub mode: DiscMode,
    pub beta: f64,
    /// `λ = s²`, strictly inside `(k'², k²)` for `0 < β < ∞`.
    pub lambda: f64,
    /// `s = √λ`, the secular-equation root.
    pub s: f64,
    /// `|s J'_n(s) + β J_n(s)|`.
    pub residual: f64,
}

/// Residual certificate scale: `residual ≤ ROBIN_RESIDUAL_TOL · (1 + β)`.
pub const ROBIN_RESIDUAL_TOL: f64 = 1e-11;

/// Compute the mode data (both zeros) for `(n, m)`.
pub fn disc_mode(n: u32, m: u32) -> Result<DiscMode> {
    let mut row = disc_modes_row(n, m)?;
    Ok(row.swap_remove(m as usize - 1))
}

/// Modes `(n, 1), …, (n, m_max)` from one zero walk.
pub fn disc_modes_row(n: u32, m_max: u32) -> Result<Vec<DiscMode>> {
    if m_max == 0 {
        return Err(Error::domain("disc_modes_row", "m_max must be ≥ 1"));
    }
    let (dirichlet, neumann) = specfun::zero_rows(n, m_max, m_max)?;
    Ok(dirichlet
        .into_iter()
        .zip(neumann)
        .enumerate()
        .map(|(i, (d, p))| {
            debug_assert_eq!(d.index, i as u32 + 1);
            DiscMode {
                n,
                m: i as u32 + 1,
                dirichlet: d,
                neumann: p,
            }
        })
        .collect())
}

/// Robin eigenvalue for mode `(n, m)` at coupling `β ≥ 0`.
pub fn robin_eigenvalue(n: u32, m: u32, beta: f64) -> Result<RobinEigenvalue> {
    let mode = disc_mode(n, m)?;
    robin_eigenvalue_for(&mode, beta)
}

/// Robin eigenvalue for a precomputed mode (the hot path for β grids).
pub fn robin_eigenvalue_for(mode: &DiscMode, beta: f64) -> Result<RobinEigenvalue> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::domain(
            "robin_eigenvalue",
            format!("beta = {beta} must be ≥ 0"),
        ));
    }
    if beta > 1e12 {
        return Err(Error::Overflow {
            op: "robin_eigenvalue",
            beta,
        });
    }
    if beta == 0.0 {
        let s = mode.neumann_k();
        return Ok(RobinEigenvalue {
            mode: mode.clone(),
            beta,
            lambda: s * s,
            s,
            residual: 0.0,
        });
    }

    let n = mode.n;
    let lo = mode.neumann_k();
    let hi = mode.dirichlet_k();
    let f = |s: f64| -> f64 {
        let (j, jp) = crate::specfun::j_and_prime_raw(n, s);
        s * jp + beta * j
    };
    // F(k'⁺) = β J_n(k') and F(k⁻) = k J'_n(k) carry opposite signs; for the
    // constant mode (0,1) the left end is F(0) = β > 0.
    let flo = if lo == 0.0 { beta } else { f(lo) };
    let fhi = f(hi);
    if flo == 0.0 || fhi == 0.0 || (flo > 0.0) == (fhi > 0.0) {
        return Err(Error::invariant(
            "robin_eigenvalue",
            format!(
                "secular bracket carries no sign change at n={n}, m={}, beta={beta}",
                mode.m
            ),
        ));
    }

    let (mut a, mut b, mut fa) = (lo, hi, flo);
    while b - a > 1e-4 * b.max(1.0) {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            a = mid - 1e-9 * mid.max(1.0);
            b = mid + 1e-9 * mid.max(1.0);
            break;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }

    // Newton: F'(s) = β J'_n(s) - (s - n²/s) J_n(s)
    let mut s = 0.5 * (a + b);
    for _ in 0..8 {
        let (j, jp) = crate::specfun::j_and_prime_raw(n, s);
        let fx = s * jp + beta * j;
        let dfx = beta * jp - (s - (n as f64) * (n as f64) / s) * j;
        if dfx == 0.0 {
            break;
        }
        let next = s - fx / dfx;
        if next <= a || next >= b {
            break;
        }
        let moved = (next - s).abs();
        s = next;
        if moved <= 2.0 * f64::EPSILON * s {
            break;
        }
    }

    let residual = f(s).abs();
    let tol = ROBIN_RESIDUAL_TOL * (1.0 + beta);
    if residual > tol {
        return Err(Error::invariant(
            "robin_eigenvalue",
            format!(
                "residual {residual:.3e} exceeds {tol:.3e} at n={n}, m={}, beta={beta}",
                mode.m
            ),
        ));
    }
    Ok(RobinEigenvalue {
        mode: mode.clone(),
        beta,
        lambda: s * s,
        s,
        residual,
    })
}

/// `∫_0^1 J_n(cr)² r dr = J'_n(c)²/2 + (1 - n²/c²) J_n(c)²/2`.
///
/// The limits at `c = 0` are exact: 1/2 for `n = 0`, 0 otherwise.
pub fn normalization_integral(n: u32, c: f64) -> Result<f64> {
    if !c.is_finite() || c < 0.0 {
        return Err(Error::domain(
            "normalization_integral",
            format!("c = {c} must be ≥ 0"),
        ));
    }
    if c == 0.0 {
        return Ok(if n == 0 { 0.5 } else { 0.0 });
    }
    let (j, jp) = crate::specfun::j_and_prime_raw(n, c);
    Ok(0.5 * jp * jp + 0.5 * (1.0 - (n as f64) * (n as f64) / (c * c)) * j * j)
}

/// `∫_0^1 J_n(ar) J_n(br) r dr` for `a ≠ b` (Lommel):
/// `(b J_n(a) J'_n(b) - a J'_n(a) J_n(b)) / (a² - b²)`.
///
/// Near-degenerate arguments (`|a - b| ≤ 1e-8`) are routed to the coincident
/// formula at the midpoint.
pub fn cross_overlap(n: u32, a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a <= 0.0 || b <= 0.0 {
        return Err(Error::domain("cross_overlap", "arguments must be positive"));
    }
    if (a - b).abs() <= 1e-8 {
        return normalization_integral(n, 0.5 * (a + b));
    }
    let (ja, jpa) = crate::specfun::j_and_prime_raw(n, a);
    let (jb, jpb) = crate::specfun::j_and_prime_raw(n, b);
    Ok((b * ja * jpb - a * jpa * jb) / (a * a - b * b))
}

/// Scalar `d` with `∂f/∂ν = d · e^{±inθ}/√π` for the normalized Dirichlet
/// mode `f = π^{-1/2} J_n(k r)/J_{n+1}(k) e^{±inθ}`; equals `-k_{n,m}`.
pub fn boundary_normal_derivative(n: u32, m: u32) -> Result<f64> {
    Ok(-disc_mode(n, m)?.dirichlet_k())
}

/// Boundary Gram entry of the normalized Dirichlet pair: `2 k_{n,m}²`
/// (arclength pairing of `∂f/∂ν` with itself).
pub fn dirichlet_pairing(n: u32, m: u32) -> Result<f64> {
    let k = disc_mode(n, m)?.dirichlet_k();
    Ok(2.0 * k * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_zero_is_neumann() {
        let r = robin_eigenvalue(1, 1, 0.0).unwrap();
        let kp = r.mode.neumann_k();
        assert_eq!(r.lambda, kp * kp);
        assert!((r.lambda - 3.38996).abs() < 1e-4);
    }

    #[test]
    fn beta_increases_toward_dirichlet() {
        let mode = disc_mode(0, 1).unwrap();
        let k2 = mode.dirichlet_eigenvalue();
        let mut prev = robin_eigenvalue_for(&mode, 1e3).unwrap().lambda;
        for beta in [1e4, 1e5] {
            let lam = robin_eigenvalue_for(&mode, beta).unwrap().lambda;
            assert!(lam > prev);
            assert!(lam < k2);
            prev = lam;
        }
        assert!((k2 - 5.783185962946785).abs() < 1e-10);
        assert!(k2 - prev < 2.0 * k2 / 1e5 * 1.1);
    }

    #[test]
    fn constant_mode_bracket() {
        // (0,1): Neumann k' = 0, Robin root in (0, k_{0,1})
        let r = robin_eigenvalue(0, 1, 2.5).unwrap();
        assert!(r.lambda > 0.0 && r.lambda < 5.783185962946785);
        assert!(r.residual <= ROBIN_RESIDUAL_TOL * 3.5);
    }

    #[test]
    fn overlap_orthogonality() {
        let row = disc_modes_row(0, 3).unwrap();
        let k1 = row[0].dirichlet_k();
        let k2 = row[1].dirichlet_k();
        let v = cross_overlap(0, k1, k2).unwrap();
        assert!(
            v.abs() < 1e-12,
            "Dirichlet modes must be orthogonal, got {v:e}"
        );

        let p2 = row[1].neumann_k();
        let p3 = row[2].neumann_k();
        let w = cross_overlap(0, p2, p3).unwrap();
        assert!(
            w.abs() < 1e-12,
            "Neumann modes must be orthogonal, got {w:e}"
        );
    }

    #[test]
    fn normal_derivative_scalar() {
        let d = boundary_normal_derivative(0, 1).unwrap();
        assert!((d + 2.404825557695773).abs() < 1e-12);
        let pairing = dirichlet_pairing(0, 1).unwrap();
        assert!((d * d * 2.0 - pairing).abs() < 1e-12);
    }

    #[test]
    fn overflow_guard() {
        assert!(matches!(
            robin_eigenvalue(0, 1, 2e12),
            Err(Error::Overflow { .. })
        ));
    }
}
