//! Real special functions needed by the disc spectral problem: integer-order
//! Bessel `J_n`, `J'_n`, modified-Bessel ratios at 1, negative Airy zeros,
//! and certified zeros of `J_n`/`J'_n`.
//!
//! Everything is pure and deterministic; no global state.

mod airy;
mod bessel;
mod modified;
mod zeros;

pub use airy::{airy_negative_zero, airy_zero_table, AiryZero};
pub use bessel::{bessel_j, bessel_j_prime, MAX_ARGUMENT, MAX_ORDER};
pub use modified::{modified_ratio, ROUTE_AGREEMENT};
pub use zeros::{find_zero, zero_row, zero_rows, BesselZero, ZeroFamily, RESIDUAL_TOL};

pub(crate) use bessel::j_and_prime_raw;
pub(crate) use modified::{ratio_backward, ratio_series, ratio_table};
