//! Certified zeros of `J_n` and `J'_n`.
//!
//! For fixed `n` the zeros of the two functions strictly interlace:
//!
//! ```text
//! n ≤ k'_{n,1} < k_{n,1} < k'_{n,2} < k_{n,2} < …        (n ≥ 1)
//! 0 = k'_{0,1} < k_{0,1} < k'_{0,2} < k_{0,2} < …        (n = 0)
//! ```
//!
//! and consecutive members of the union are never closer than ~1.4 (the gap
//! tends to π/2 from above as the argument grows, and widens near the
//! turning point `x ≈ n`). A single rightward walk with step 0.5 therefore
//! meets every zero of both families in order, one sign change per step; the
//! walk enforces the alternation and fails hard if it is ever violated.
//! Each sign-change bracket is shrunk by bisection, polished by Newton, and
//! re-certified as a tight bracket around the root.

use super::bessel::{j_and_prime_raw, MAX_ORDER_INTERNAL};
use crate::error::{Error, Result};

/// Which function the zero belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroFamily {
    /// Zero of `J_n`; squares to a Dirichlet eigenvalue of the disc.
    DirichletJ,
    /// Zero of `J'_n`; squares to a Neumann eigenvalue of the disc.
    NeumannJprime,
}

impl ZeroFamily {
    pub fn label(self) -> &'static str {
        match self {
            ZeroFamily::DirichletJ => "dirichlet",
            ZeroFamily::NeumannJprime => "neumann",
        }
    }
}

/// A positive root `k_{n,m}` or `k'_{n,m}` with its certificate.
#[derive(Debug, Clone)]
pub struct BesselZero {
    pub family: ZeroFamily,
    /// Angular order `n ≥ 0`.
    pub order: u32,
    /// Radial index `m ≥ 1`.
    pub index: u32,
    pub value: f64,
    /// Sign-change bracket `lo < value < hi`.
    pub bracket: (f64, f64),
    /// `|J_n(value)|` or `|J'_n(value)|`.
    pub residual: f64,
}

/// Residual certificate: `residual ≤ RESIDUAL_TOL · max(1, value)`.
pub const RESIDUAL_TOL: f64 = 1e-12;

const WALK_STEP: f64 = 0.5;

/// Both zero families of order `n`, first `m_dirichlet` roots of `J_n` and
/// first `m_neumann` roots of `J'_n`, from one certified walk.
pub fn zero_rows(
    n: u32,
    m_dirichlet: u32,
    m_neumann: u32,
) -> Result<(Vec<BesselZero>, Vec<BesselZero>)> {
    if n > MAX_ORDER_INTERNAL {
        return Err(Error::domain(
            "zero_rows",
            format!("n = {n} exceeds {MAX_ORDER_INTERNAL}"),
        ));
    }
    if m_dirichlet.max(m_neumann) > 600 {
        return Err(Error::domain("zero_rows", "m exceeds 600"));
    }

    let mut dirichlet = Vec::with_capacity(m_dirichlet as usize);
    let mut neumann = Vec::with_capacity(m_neumann as usize);

    // k'_{0,1} = 0 exactly: J'_0 = -J_1 vanishes at the origin.
    if n == 0 && m_neumann >= 1 {
        neumann.push(BesselZero {
            family: ZeroFamily::NeumannJprime,
            order: 0,
            index: 1,
            value: 0.0,
            bracket: (-1e-12, 1e-12),
            residual: 0.0,
        });
    }

    // Just right of the start both J_n and J'_n are positive for n ≥ 1;
    // for n = 0, J_0 > 0 and J'_0 < 0, and the first event is a J-zero.
    let x0 = if n == 0 { 1e-6 } else { n as f64 };
    let m_max = m_dirichlet.max(m_neumann);
    let x_cap = x0 + 40.0 + 4.0 * (m_max as f64 + 2.0) + 60.0 * (n as f64).cbrt();

    let mut expect_prime = n >= 1; // family of the next expected event
    let mut x_prev = x0;
    let (mut j_prev, mut p_prev) = eval(n, x0);

    while (dirichlet.len() as u32) < m_dirichlet || (neumann.len() as u32) < m_neumann {
        let x = x_prev + WALK_STEP;
        if x > x_cap {
            return Err(Error::BracketFailure {
                op: "zero_rows",
                lo: x_prev,
                hi: x_cap,
            });
        }
        let (j, p) = eval(n, x);
        let j_flip = sign_change(j_prev, j);
        let p_flip = sign_change(p_prev, p);
        if j_flip && p_flip {
            return Err(Error::invariant(
                "zero_rows",
                format!("two sign changes in one step at n={n}, x∈[{x_prev},{x}]"),
            ));
        }
        if j_flip {
            if expect_prime {
                return Err(Error::invariant(
                    "zero_rows",
                    format!("J_n zero before expected J'_n zero at n={n}, x≈{x}"),
                ));
            }
            if (dirichlet.len() as u32) < m_dirichlet {
                let m = dirichlet.len() as u32 + 1;
                dirichlet.push(refine(n, ZeroFamily::DirichletJ, m, x_prev, x)?);
            }
            expect_prime = true;
        } else if p_flip {
            if !expect_prime {
                return Err(Error::invariant(
                    "zero_rows",
                    format!("J'_n zero before expected J_n zero at n={n}, x≈{x}"),
                ));
            }
            if (neumann.len() as u32) < m_neumann {
                let m = neumann.len() as u32 + 1;
                neumann.push(refine(n, ZeroFamily::NeumannJprime, m, x_prev, x)?);
            }
            expect_prime = false;
        }
        x_prev = x;
        j_prev = j;
        p_prev = p;
    }

    Ok((dirichlet, neumann))
}

/// First `m_max` zeros of one family at order `n`.
pub fn zero_row(family: ZeroFamily, n: u32, m_max: u32) -> Result<Vec<BesselZero>> {
    match family {
        ZeroFamily::DirichletJ => Ok(zero_rows(n, m_max, 0)?.0),
        ZeroFamily::NeumannJprime => Ok(zero_rows(n, 0, m_max)?.1),
    }
}

/// The `m`-th positive zero (`m ≥ 1`) of `J_n` or `J'_n`, with certified
/// bracket and residual. `k'_{0,1} = 0` is returned exactly; deterministic.
pub fn find_zero(family: ZeroFamily, n: u32, m: u32) -> Result<BesselZero> {
    if m == 0 {
        return Err(Error::domain("find_zero", "index m must be ≥ 1"));
    }
    if m > 600 {
        return Err(Error::domain("find_zero", format!("m = {m} exceeds 600")));
    }
    let row = zero_row(family, n, m)?;
    Ok(row.into_iter().nth(m as usize - 1).unwrap())
}

fn eval(n: u32, x: f64) -> (f64, f64) {
    j_and_prime_raw(n, x)
}

fn sign_change(a: f64, b: f64) -> bool {
    (a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0)
}

/// Bisection inside a certified sign-change bracket, then Newton polish,
/// then re-certification of a tight bracket around the polished root.
fn refine(n: u32, family: ZeroFamily, index: u32, mut lo: f64, mut hi: f64) -> Result<BesselZero> {
    let f = |x: f64| -> f64 {
        let (j, p) = eval(n, x);
        match family {
            ZeroFamily::DirichletJ => j,
            ZeroFamily::NeumannJprime => p,
        }
    };
    let mut flo = f(lo);
    if flo == 0.0 {
        // walk grid hit the root head-on; nudge to restore a bracket
        lo -= 1e-9;
        flo = f(lo);
    }
    // bisect to ~1e-6 width
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            lo = mid - 1e-9;
            hi = mid + 1e-9;
            break;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }

    // Newton from the midpoint; for J'_n zeros the derivative is
    // J''_n = -J'_n/x - (1 - n²/x²) J_n.
    let mut x = 0.5 * (lo + hi);
    for _ in 0..6 {
        let (j, p) = eval(n, x);
        let (fx, dfx) = match family {
            ZeroFamily::DirichletJ => (j, p),
            ZeroFamily::NeumannJprime => {
                let n2 = (n as f64) * (n as f64);
                (p, -p / x - (1.0 - n2 / (x * x)) * j)
            }
        };
        if dfx == 0.0 {
            break;
        }
        let step = fx / dfx;
        let next = x - step;
        if next <= lo || next >= hi {
            break; // stay inside the certificate
        }
        x = next;
        if step.abs() <= 4.0 * f64::EPSILON * x {
            break;
        }
    }

    // Re-certify a tight bracket around the polished root.
    let mut bracket = (lo, hi);
    for exp in [-13.0_f64, -12.0, -11.0, -10.0, -9.0] {
        let h = 10.0_f64.powf(exp) * x.max(1.0);
        let (a, b) = (x - h, x + h);
        if a > lo && b < hi && f(a) * f(b) < 0.0 {
            bracket = (a, b);
            break;
        }
    }

    let residual = f(x).abs();
    let tol = RESIDUAL_TOL * x.max(1.0);
    if residual > tol {
        return Err(Error::invariant(
            "find_zero",
            format!("residual {residual:.3e} exceeds {tol:.3e} at n={n}, m={index}, {family:?}"),
        ));
    }
    Ok(BesselZero {
        family,
        order: n,
        index,
        value: x,
        bracket,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_dirichlet_zero_of_j0() {
        let z = find_zero(ZeroFamily::DirichletJ, 0, 1).unwrap();
        assert!((z.value - 2.404825557695773).abs() < 1e-12);
        assert!(z.bracket.0 < z.value && z.value < z.bracket.1);
        assert!(z.residual <= RESIDUAL_TOL);
    }

    #[test]
    fn neumann_order_zero_conventions() {
        let z1 = find_zero(ZeroFamily::NeumannJprime, 0, 1).unwrap();
        assert_eq!(z1.value, 0.0);
        assert_eq!(z1.residual, 0.0);

        // k'_{0,m} = k_{1,m-1}: J'_0 = -J_1
        let z2 = find_zero(ZeroFamily::NeumannJprime, 0, 2).unwrap();
        let d = find_zero(ZeroFamily::DirichletJ, 1, 1).unwrap();
        assert!((z2.value - d.value).abs() < 1e-12);
        assert!((z2.value - 3.831705970207512).abs() < 1e-12);
    }

    #[test]
    fn interlacing_small_orders() {
        for n in [0u32, 1, 2, 5, 17] {
            let (d, p) = zero_rows(n, 10, 10).unwrap();
            for m in 0..10 {
                assert!(
                    p[m].value < d[m].value,
                    "k'_{{{n},{}}} < k_{{{n},{}}}",
                    m + 1,
                    m + 1
                );
                if m > 0 {
                    assert!(d[m - 1].value < p[m].value);
                }
            }
            if n >= 1 {
                assert!(p[0].value > n as f64);
            }
        }
    }

    #[test]
    fn large_order_first_zero_bracketed() {
        // turning-point scaling: k'_{n,1} ≈ n + 0.8086 n^{1/3}
        let z = find_zero(ZeroFamily::NeumannJprime, 2000, 1).unwrap();
        assert!(z.value > 2000.0 && z.value < 2000.0 + 2.0 * 2000.0_f64.cbrt());
        assert!(z.residual <= RESIDUAL_TOL * z.value);
    }
}
