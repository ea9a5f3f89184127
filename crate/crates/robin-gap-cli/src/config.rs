//! Run configuration: hard-coded defaults, optionally overlaid by a flat
//! JSON file, then by command-line flags. No randomness anywhere.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Mode-table size of the diagonal gap model.
    pub n_max: u32,
    /// Terms kept by the truncated-sum `γ²` route.
    pub m_trunc: u32,
    /// Truncation of the cross-space ladder in the explicit second-order
    /// entry.
    pub q_trunc: u32,
    /// Zero tables cover `n ≤ zeros_n_max`, `m ≤ zeros_m_max` in `verify`.
    pub zeros_n_max: u32,
    pub zeros_m_max: u32,
    /// Robin grid bound for `verify`.
    pub robin_nm_max: u32,
    /// Richardson stage.
    pub beta0: f64,
    pub ratio: f64,
    pub levels: u32,
    /// Default β grid for rate and norm commands (strictly increasing).
    pub beta_grid: Vec<f64>,
    /// Where `verify` writes its report and data files.
    pub output_dir: String,
    /// Acceptance tolerances; echoed into every report. These are pinned —
    /// a config file may restate them only verbatim.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n_max: 2000,
            m_trunc: 64,
            q_trunc: 64,
            zeros_n_max: 50,
            zeros_m_max: 50,
            robin_nm_max: 20,
            beta0: 1e3,
            ratio: 2.0,
            levels: 6,
            beta_grid: log_grid(1e2, 1e6, 9),
            output_dir: "out".to_string(),
            tolerances: pinned_tolerances(),
        }
    }
}

/// Log-spaced grid, inclusive of both ends.
pub fn log_grid(lo: f64, hi: f64, points: u32) -> Vec<f64> {
    (0..points)
        .map(|i| lo * (hi / lo).powf(i as f64 / (points - 1) as f64))
        .collect()
}

/// The acceptance tolerances, pinned in code.
pub fn pinned_tolerances() -> BTreeMap<String, f64> {
    let mut map = BTreeMap::new();
    map.insert("assembly_identity_rel".into(), 1e-10);
    map.insert("c1_rel".into(), 1e-6);
    map.insert("c2_rel".into(), 1e-3);
    map.insert("drift_slope_hi".into(), -1.9);
    map.insert("drift_slope_lo".into(), -2.1);
    map.insert("dtn_growth_slope_halfwidth".into(), 0.05);
    map.insert("dtn_route_agreement_rel".into(), 1e-13);
    map.insert("opnorm_exponent_halfwidth".into(), 0.02);
    map.insert("opnorm_sup_rel".into(), 0.01);
    map.insert("robin_residual_scale".into(), 1e-11);
    map.insert("trace_increase_min".into(), 0.20);
    map.insert("trace_logfit_r2_min".into(), 0.99);
    map.insert("zero_residual_scale".into(), 1e-12);
    map
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<RunConfig, CliError> {
        let cfg = match path {
            None => RunConfig::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::usage(format!("cannot read config {}: {e}", p.display()))
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::usage(format!("bad config {}: {e}", p.display())))?
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(8..=2000).contains(&self.n_max) {
            return Err(CliError::usage("n_max must be in 8..=2000"));
        }
        if self.m_trunc < 8 {
            return Err(CliError::usage("m_trunc must be ≥ 8"));
        }
        if self.q_trunc < 32 {
            return Err(CliError::usage("q_trunc must be ≥ 32"));
        }
        if self.zeros_m_max < 1 || self.zeros_m_max > 200 || self.zeros_n_max > 512 {
            return Err(CliError::usage("zeros ranges exceed supported table sizes"));
        }
        if self.robin_nm_max < 1 || self.robin_nm_max > 64 {
            return Err(CliError::usage("robin_nm_max must be in 1..=64"));
        }
        if !(self.beta0 >= 1e3) || !(self.ratio >= 2.0) || !(3..=8).contains(&self.levels) {
            return Err(CliError::usage(
                "richardson stage needs beta0 ≥ 1e3, ratio ≥ 2, levels 3..=8",
            ));
        }
        if self.beta_grid.len() < 2 || self.beta_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::usage(
                "beta_grid must be strictly increasing with ≥ 2 points",
            ));
        }
        if self.beta_grid.iter().any(|&b| !(b > 0.0) || b > 1e12) {
            return Err(CliError::usage("beta_grid entries must be in (0, 1e12]"));
        }
        if self.tolerances != pinned_tolerances() {
            return Err(CliError::usage(
                "tolerances are pinned; a config file may only restate them verbatim",
            ));
        }
        Ok(())
    }

    /// The verify-engine view of this configuration.
    pub fn verify_config(&self, threads: usize) -> robin_gap::verify::VerifyConfig {
        robin_gap::verify::VerifyConfig {
            n_max: self.n_max,
            m_trunc: self.m_trunc,
            q_trunc: self.q_trunc,
            zeros_n_max: self.zeros_n_max,
            zeros_m_max: self.zeros_m_max,
            robin_nm_max: self.robin_nm_max,
            beta0: self.beta0,
            ratio: self.ratio,
            levels: self.levels,
            threads,
        }
    }
}

/// `ROBIN_GAP_THREADS`: integer ≥ 1 capping worker parallelism; defaults
/// to 1 (fully sequential) when unset.
pub fn threads_from_env() -> Result<usize, CliError> {
    match std::env::var("ROBIN_GAP_THREADS") {
        Err(_) => Ok(1),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(CliError::usage(format!(
                "ROBIN_GAP_THREADS must be an integer ≥ 1, got {s:?}"
            ))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_decreasing_grid() {
        let mut cfg = RunConfig::default();
        cfg.beta_grid = vec![10.0, 5.0];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rejects_tampered_tolerances() {
        let mut cfg = RunConfig::default();
        cfg.tolerances.insert("c1_rel".into(), 1.0);
        assert!(cfg.validate().is_err());
    }
}
