//! The acceptance-criteria engine.
//!
//! Each criterion converts one of the limit statements about the disc into a
//! finite, certified computation with a pinned tolerance, and reports PASS or
//! FAIL together with the table of numbers it judged. The CLI `verify`
//! command and the acceptance test suite both drive [`run_all`].

use crate::error::Result;
use crate::fitting::{linear_fit, rate_fit};
use crate::specfun::{airy_zero_table, zero_rows, RESIDUAL_TOL};
use crate::{asym, disc, dtn, gap};

/// Pinned tolerances and grids; `Default` is the canonical configuration.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Mode-table size of the diagonal gap model.
    pub n_max: u32,
    /// Terms kept by the truncated-sum `γ²` route used for cross-validation.
    pub m_trunc: u32,
    /// Truncation of the cross-space ladder in the explicit `α` entry.
    pub q_trunc: u32,
    /// Zero tables cover `n ≤ zeros_n_max`, `m ≤ zeros_m_max`.
    pub zeros_n_max: u32,
    pub zeros_m_max: u32,
    /// Robin grid covers `n, m ≤ robin_nm_max`.
    pub robin_nm_max: u32,
    /// Richardson stage.
    pub beta0: f64,
    pub ratio: f64,
    pub levels: u32,
    /// Worker threads for independent criteria (results are deterministic
    /// regardless).
    pub threads: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 2000,
            m_trunc: 64,
            q_trunc: 64,
            zeros_n_max: 50,
            zeros_m_max: 50,
            robin_nm_max: 20,
            beta0: 1e3,
            ratio: 2.0,
            levels: 6,
            threads: 1,
        }
    }
}

/// One table cell; kept typed so CSV and JSON writers can format
/// deterministically.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Bool(bool),
}

/// A named rectangular result table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    /// Informational notes (never affect `passed`).
    pub flags: Vec<String>,
    pub details: String,
    pub tables: Vec<Table>,
    /// Wall-clock seconds; excluded from any deterministic output.
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub criteria: Vec<CriterionResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

/// Run criteria 1-11 (criterion 12, byte-identical reruns, belongs to the
/// CLI layer that owns the serialization).
pub fn run_all(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let model = gap::DiagonalModel::build(cfg.n_max, cfg.m_trunc)?;

    type Job<'a> = Box<dyn FnOnce() -> CriterionResult + Send + 'a>;
    let jobs: Vec<Job> = vec![
        Box::new(|| guard(1, "special-function zeros", || c01_zeros(cfg))),
        Box::new(|| {
            guard(2, "dtn eigenvalue bounds and routes", || {
                c02_dtn_bounds(cfg)
            })
        }),
        Box::new(|| guard(3, "dtn growth exponent", || c03_dtn_growth(cfg))),
        Box::new(|| guard(4, "robin bracketing and monotonicity", || c04_robin(cfg))),
        Box::new(|| guard(5, "first-order coefficient", || c05_first_order(cfg))),
        Box::new(|| guard(6, "second-order coefficient", || c06_second_order(cfg))),
        Box::new(|| guard(7, "operator-norm rate", || c07_operator_norm(cfg, &model))),
        Box::new(|| guard(8, "trace-norm behavior", || c08_trace_norm(cfg, &model))),
        Box::new(|| guard(9, "expansion remainder", || c09_remainder(cfg, &model))),
        Box::new(|| guard(10, "projection drift", || c10_projection_drift(cfg))),
        Box::new(|| guard(11, "second-order assembly identity", || c11_identity(cfg))),
    ];

    let threads = cfg.threads.max(1).min(jobs.len());
    let mut criteria: Vec<Option<CriterionResult>> = (0..jobs.len()).map(|_| None).collect();
    if threads <= 1 {
        for (slot, job) in criteria.iter_mut().zip(jobs) {
            *slot = Some(job());
        }
    } else {
        let queue = std::sync::Mutex::new(jobs.into_iter().enumerate().collect::<Vec<_>>());
        let results = std::sync::Mutex::new(&mut criteria);
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| loop {
                    let next = queue.lock().unwrap().pop();
                    match next {
                        Some((i, job)) => {
                            let r = job();
                            results.lock().unwrap()[i] = Some(r);
                        }
                        None => break,
                    }
                });
            }
        });
    }

    Ok(VerifyReport {
        criteria: criteria.into_iter().map(|c| c.unwrap()).collect(),
    })
}

fn guard<F: FnOnce() -> Result<CriterionResult>>(id: u32, name: &str, f: F) -> CriterionResult {
    let started = std::time::Instant::now();
    let mut c = match f() {
        Ok(c) => c,
        Err(e) => {
            let mut c = blank();
            c.details = format!("error: {e}");
            c
        }
    };
    c.id = id;
    c.name = name.to_string();
    c.seconds = started.elapsed().as_secs_f64();
    c
}

fn blank() -> CriterionResult {
    CriterionResult {
        id: 0,
        name: String::new(),
        passed: false,
        flags: Vec::new(),
        details: String::new(),
        tables: Vec::new(),
        seconds: 0.0,
    }
}

fn log_grid(lo: f64, hi: f64, pts: u32) -> Vec<f64> {
    (0..pts)
        .map(|i| lo * (hi / lo).powf(i as f64 / (pts - 1) as f64))
        .collect()
}

/// Criterion 1: residuals ≤ 1e-12·max(1,k), strict interlacing, the
/// `k'_{0,m} = k_{1,m-1}` identity, and the two-sided Airy bounds, with
/// zero violations over `n, m ≤ 50`.
fn c01_zeros(cfg: &VerifyConfig) -> Result<CriterionResult> {
    let airy = airy_zero_table(cfg.zeros_m_max)?;
    let cbrt2inv = 0.7937005259840998_f64;

    let mut violations = 0u64;
    let mut checked = 0u64;
    let mut table = Table::new(
        "zero_certificates",
        &[
            "n",
            "zeros",
            "max_scaled_residual",
            "interlacing_ok",
            "airy_ok",
        ],
    );
    let mut j1_row: Vec<f64> = Vec::new();

    for n in 0..=cfg.zeros_n_max {
        let (d, p) = zero_rows(n, cfg.zeros_m_max, cfg.zeros_m_max)?;
        if n == 1 {
            j1_row = d.iter().map(|z| z.value).collect();
        }
        let mut max_res = 0.0_f64;
        let mut inter_ok = true;
        let mut airy_ok = true;
        for m in 0..cfg.zeros_m_max as usize {
            checked += 2;
            for z in [&d[m], &p[m]] {
                let scaled = z.residual / z.value.max(1.0);
                max_res = max_res.max(scaled);
                if scaled > RESIDUAL_TOL {
                    violations += 1;
                }
                if !(z.bracket.0 < z.value && z.value < z.bracket.1) {
                    violations += 1;
                }
            }
            // interlacing chain: n ≤ k'_m < k_m < k'_{m+1}
            if !(p[m].value < d[m].value) || (m > 0 && !(d[m - 1].value < p[m].value)) {
                inter_ok = false;
                violations += 1;
            }
            if n >= 1 && !(p[0].value > n as f64) {
                inter_ok = false;
                violations += 1;
            }
            // Airy two-sided bound on k_{n,m}, n ≥ 1
            if n >= 1 {
                let nf = n as f64;
                let a = airy[m].value;
                let lo = nf + cbrt2inv * a * nf.cbrt();
                let hi = lo + 0.3 * a * a / nf.cbrt();
                if !(lo < d[m].value && d[m].value < hi) {
                    airy_ok = false;
                    violations += 1;
                }
            }
        }
        // k'_{0,m} = k_{1,m-1} for m ≥ 2 (and k'_{0,1} = 0)
        if n == 0 {
            if p[0].value != 0.0 {
                violations += 1;
            }
        } else if n == 1 {
            let (_, p0) = zero_rows(0, 1, cfg.zeros_m_max)?;
            for m in 1..cfg.zeros_m_max as usize {
                let diff = (p0[m].value - j1_row[m - 1]).abs();
                if diff > 2e-12 * j1_row[m - 1].max(1.0) {
                    violations += 1;
                }
            }
        }
        table.push(vec![
            Cell::Int(n as i64),
            Cell::Int(2 * cfg.zeros_m_max as i64),
            Cell::Num(max_res),
            Cell::Bool(inter_ok),
            Cell::Bool(airy_ok),
        ]);
    }

    let mut c = blank();
    c.passed = violations == 0;
    c.details = format!(
        "{checked} zeros over n ≤ {}, m ≤ {}: {violations} violations",
        cfg.zeros_n_max, cfg.zeros_m_max
    );
    c.tables.push(table);
    Ok(c)
}

/// Criterion 2: `n < λ̌_n < n + 1/2` for `n ≤ 500` and the two ratio routes
/// agree to 1e-13 relative.
fn c02_dtn_bounds(_cfg: &VerifyConfig) -> Result<CriterionResult> {
    let mut worst_gap = 0.0_f64;
    let mut violations = 0u32;
    let mut table = Table::new("dtn_eigenvalues", &["n", "lambda_check", "route_rel_gap"]);
    for n in 0..=500u32 {
        let cf = crate::specfun::ratio_backward(n);
        let series = crate::specfun::ratio_series(n);
        let rel = (cf - series).abs() / cf;
        worst_gap = worst_gap.max(rel);
        let lam = n as f64 + cf;
        if !(lam > n as f64 && lam < n as f64 + 0.5) || rel > 1e-13 {
            violations += 1;
        }
        if n <= 8 || n % 50 == 0 {
            table.push(vec![Cell::Int(n as i64), Cell::Num(lam), Cell::Num(rel)]);
        }
    }
    let mut c = blank();
    c.passed = violations == 0;
    c.details = format!("n ≤ 500, worst route gap {worst_gap:.2e}, {violations} violations");
    c.tables.push(table);
    Ok(c)
}

/// Criterion 3: log-log slope of `λ̌_k` (with multiplicity) against `k` over
/// `k ∈ [10, 500]` lies in `[0.95, 1.05]`.
fn c03_dtn_growth(_cfg: &VerifyConfig) -> Result<CriterionResult> {
    let modes = dtn::dtn_modes(251)?;
    let mut pts = Vec::new();
    let mut table = Table::new("dtn_growth", &["k", "n", "lambda_check"]);
    for k in 10..=500u32 {
        let n = k / 2; // eigenvalue count: n = 0 once, n ≥ 1 twice
        let lam = modes[n as usize].lambda_check;
        pts.push(((k as f64).ln(), lam.ln()));
        if k % 49 == 0 {
            table.push(vec![
                Cell::Int(k as i64),
                Cell::Int(n as i64),
                Cell::Num(lam),
            ]);
        }
    }
    let (slope, _, r2) = linear_fit(&pts)?;
    let mut c = blank();
    c.passed = (0.95..=1.05).contains(&slope);
    c.details = format!("slope {slope:.4} (r² {r2:.6}), window [0.95, 1.05]");
    c.tables.push(table);
    Ok(c)
}

/// Criterion 4: for `n, m ≤ 20` and `β ∈ {1, 10, …, 1e6}`, every Robin
/// eigenvalue sits strictly inside `(k'², k²)`, increases strictly in `β`,
/// and meets its residual certificate.
fn c04_robin(cfg: &VerifyConfig) -> Result<CriterionResult> {
    let betas: Vec<f64> = (0..=6).map(|e| 10f64.powi(e)).collect();
    let mut violations = 0u64;
    let mut count = 0u64;
    let mut table = Table::new(
        "robin_grid",
        &[
            "n",
            "m",
            "beta",
            "lambda",
            "neumann_sq",
            "dirichlet_sq",
            "residual",
        ],
    );
    for n in 0..=cfg.robin_nm_max {
        let row = disc::disc_modes_row(n, cfg.robin_nm_max)?;
        for mode in &row {
            let lo = mode.neumann_eigenvalue();
            let hi = mode.dirichlet_eigenvalue();
            let mut prev = f64::MIN;
            for &b in &betas {
                let r = disc::robin_eigenvalue_for(mode, b)?;
                count += 1;
                if !(r.lambda > lo && r.lambda < hi) {
                    violations += 1;
                }
                if r.lambda <= prev {
                    violations += 1;
                }
                if r.residual > disc::ROBIN_RESIDUAL_TOL * (1.0 + b) {
                    violations += 1;
                }
                prev = r.lambda;
                if mode.n <= 1 && mode.m <= 2 {
                    table.push(vec![
                        Cell::Int(mode.n as i64),
                        Cell::Int(mode.m as i64),
                        Cell::Num(b),
                        Cell::Num(r.lambda),
                        Cell::Num(lo),
                        Cell::Num(hi),
                        Cell::Num(r.residual),
                    ]);
                }
            }
        }
    }
    let mut c = blank();
    c.passed = violations == 0;
    c.details = format!("{count} eigenvalues on the (n, m, β) grid: {violations} violations");
    c.tables.push(table);
    Ok(c)
}

fn fit_modes() -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for n in 0..=3u32 {
        for m in 1..=3u32 {
            v.push((n, m));
        }
    }
    v
}

/// Criterion 5: extracted `c₁` equals `-2k²` to 1e-6 relative on
/// `{0..3} × {1..3}`.
fn c05_first_order(cfg: &VerifyConfig) -> Result<CriterionResult> {
    let mut worst = 0.0_f64;
    let mut table = Table::new(
        "first_order",
        &["n", "m", "c1_extracted", "c1_exact", "rel_gap"],
    );
    for (n, m) in fit_modes() {
        let fit = asym::extract_coefficients(n, m, cfg.beta0, cfg.ratio, cfg.levels)?;
        let rel = (fit.c1 - fit.c1_exact).abs() / fit.c1_exact.abs();
        worst = worst.max(rel);
        table.push(vec![
            Cell::Int(n as i64),
            Cell::Int(m as i64),
            Cell::Num(fit.c1),
            Cell::Num(fit.c1_exact),
            Cell::Num(rel),
        ]);
    }
    let mut c = blank();
    c.passed = worst <= 1e-6;
    c.details = format!("worst |c1 + 2k²|/2k² = {worst:.2e}, tolerance 1e-6");
    c.tables.push(table);
    Ok(c)
}

/// Criterion 6: extracted `c₂` equals the perturbation oracle `2k²` to 1e-3
/// relative; the comparison against the explicit `α` entry is emitted as
/// informational flags only.
fn c06_second_order(cfg: &VerifyConfig) -> Result<CriterionResult> {
    let rep = asym::coefficient_comparison(
        &[0, 1, 2, 3],
        &[1, 2, 3],
        cfg.beta0,
        cfg.ratio,
        cfg.levels,
        cfg.q_trunc,
    )?;
    let mut worst = 0.0_f64;
    let mut flags = Vec::new();
    let mut table = Table::new(
        "second_order",
        &[
            "n",
            "m",
            "c2_extracted",
            "c2_oracle",
            "rel_gap",
            "alpha_explicit",
            "alpha_tail_bound",
            "alpha_closed",
            "formula_discrepancy",
        ],
    );
    for row in &rep.rows {
        worst = worst.max(row.c2_rel_gap);
        if row.formula_discrepancy {
            flags.push(format!(
                "FORMULA-DISCREPANCY (informational) at (n,m)=({},{}): c2 {} vs alpha {} ± {}",
                row.n, row.m, row.c2_extracted, row.alpha_value, row.alpha_tail_bound
            ));
        }
        table.push(vec![
            Cell::Int(row.n as i64),
            Cell::Int(row.m as i64),
            Cell::Num(row.c2_extracted),
            Cell::Num(row.c2_oracle),
            Cell::Num(row.c2_rel_gap),
            Cell::Num(row.alpha_value),
            Cell::Num(row.alpha_tail_bound),
            Cell::Num(row.alpha_closed),
            Cell::Bool(row.formula_discrepancy),
        ]);
    }
    let mut c = blank();
    c.passed = worst <= 1e-3;
    c.flags = flags;
    c.details = format!("worst |c2 - 2k²|/2k² = {worst:.2e}, tolerance 1e-3");
    c.tables.push(table);
    Ok(c)
}

/// Criterion 7: the operator-norm gap decays at exponent `-1.00 ± 0.02`
/// over `β ∈ [1e2, 1e6]`, and `β‖D_β - D_∞‖` at `β = 1e5` is within 1% of
/// `sup_n λ̌²γ²` with its tail certificate.
fn c07_operator_norm(_cfg: &VerifyConfig, model: &gap::DiagonalModel) -> Result<CriterionResult> {
    let grid = log_grid(1e2, 1e6, 9);
    let mut curve = Vec::new();
    let mut table = Table::new(
        "operator_norm",
        &["beta", "norm", "tail_bound", "beta_norm"],
    );
    for &b in &grid {
        let v = gap::operator_norm_gap(model, b)?;
        curve.push((b, v.value));
        table.push(vec![
            Cell::Num(b),
            Cell::Num(v.value),
            Cell::Num(v.tail_bound),
            Cell::Num(b * v.value),
        ]);
    }
    let fit = rate_fit(&curve)?;
    let sup = model
        .modes()
        .iter()
        .map(|m| m.lambda_check * m.lambda_check * m.gamma_sq)
        .fold(f64::MIN, f64::max);
    let at = gap::operator_norm_gap(model, 1e5)?;
    let ratio = 1e5 * at.value / sup;
    let rate_ok = (fit.exponent + 1.0).abs() <= 0.02;
    let sup_ok = (ratio - 1.0).abs() <= 0.01 && at.tail_bound < at.value;

    let mut c = blank();
    c.passed = rate_ok && sup_ok;
    c.details = format!(
        "exponent {:.4} (±0.02 about -1), β·norm/sup@1e5 = {ratio:.6} (±1%), tail {:.1e}",
        fit.exponent, at.tail_bound
    );
    c.tables.push(table);
    Ok(c)
}

/// Criterion 8: over `β ∈ [1e3, 1e7]`, `β^0.9·S₁` decreases on the top two
/// decades, `β·S₁` grows ≥ 20% from 1e3 to 1e6, and `β·S₁` fits
/// `a + b·ln β` with `r² > 0.99`.
fn c08_trace_norm(_cfg: &VerifyConfig, model: &gap::DiagonalModel) -> Result<CriterionResult> {
    let grid = log_grid(1e3, 1e7, 9);
    let mut table = Table::new(
        "trace_norm",
        &["beta", "s1", "tail_bound", "beta_s1", "beta09_s1"],
    );
    let mut lnb_bs1 = Vec::new();
    let mut top = Vec::new();
    let mut at_1e3 = f64::NAN;
    let mut at_1e6 = f64::NAN;
    for &b in &grid {
        let s = gap::schatten_norm_gap(model, b, 1.0)?;
        let bs1 = b * s.value;
        let b09 = b.powf(0.9) * s.value;
        lnb_bs1.push((b.ln(), bs1));
        if b >= 1e5 * (1.0 - 1e-9) {
            top.push(b09);
        }
        if (b / 1e3 - 1.0).abs() < 1e-9 {
            at_1e3 = bs1;
        }
        if (b / 1e6 - 1.0).abs() < 1e-9 {
            at_1e6 = bs1;
        }
        table.push(vec![
            Cell::Num(b),
            Cell::Num(s.value),
            Cell::Num(s.tail_bound),
            Cell::Num(bs1),
            Cell::Num(b09),
        ]);
    }
    let decreasing = top.windows(2).all(|w| w[1] < w[0]);
    let increase = at_1e6 / at_1e3 - 1.0;
    let (_, _, r2) = linear_fit(&lnb_bs1)?;

    let mut c = blank();
    c.passed = decreasing && increase >= 0.20 && r2 > 0.99;
    c.details = format!(
        "β^0.9·S₁ decreasing on top decades: {decreasing}; β·S₁ increase 1e3→1e6: {:.1}% (≥20%); log fit r² = {r2:.6} (>0.99)",
        100.0 * increase
    );
    c.tables.push(table);
    Ok(c)
}

/// Criterion 9: mode-wise, the second-order remainder obeys the cubic bound
/// `γ²λ̌⁴/β³` for `β ≥ λ̌_max`, and the damped second-order sup respects the
/// undamped bound `sup γ²λ̌³`.
fn c09_remainder(_cfg: &VerifyConfig, model: &gap::DiagonalModel) -> Result<CriterionResult> {
    let mut violations = 0u64;
    let mut table = Table::new(
        "remainder",
        &[
            "beta",
            "sup_remainder",
            "sup_cubic_bound",
            "damped_sup",
            "undamped_sup",
        ],
    );
    for factor in [1.0, 2.0, 10.0] {
        let beta = factor * model.lambda_max();
        for m in model.modes() {
            let l = m.lambda_check;
            let g = m.gamma_sq;
            let gap_v = gap::gap_mode_eigenvalue(m, beta);
            let rem = (gap_v - g * l * l / beta + g * l * l * l / (beta * beta)).abs();
            let bound = g * l.powi(4) / beta.powi(3);
            if rem > bound * (1.0 + 1e-9) + 1e-300 {
                violations += 1;
            }
        }
        let rep = gap::expansion_remainder(model, beta)?;
        if rep.damped_second_order_sup > rep.second_order_sup * (1.0 + 1e-12) {
            violations += 1;
        }
        table.push(vec![
            Cell::Num(beta),
            Cell::Num(rep.sup_remainder),
            Cell::Num(rep.sup_cubic_bound),
            Cell::Num(rep.damped_second_order_sup),
            Cell::Num(rep.second_order_sup),
        ]);
    }
    let mut c = blank();
    c.passed = violations == 0;
    c.details = format!(
        "mode-wise cubic bound and second-order norm bound at β ∈ {{1, 2, 10}}·λ̌_max: {violations} violations"
    );
    c.tables.push(table);
    Ok(c)
}

/// Criterion 10: the projection drift `1 - |⟨u_β, f⟩|²` decays with log-log
/// slope in `[-2.1, -1.9]` over `β ∈ [1e2, 1e5]` for modes (0,1), (1,1),
/// (2,2).
fn c10_projection_drift(_cfg: &VerifyConfig) -> Result<CriterionResult> {
    let grid = log_grid(1e2, 1e5, 7);
    let mut table = Table::new("projection_drift", &["n", "m", "slope", "r_squared"]);
    let mut passed = true;
    let mut details = Vec::new();
    for (n, m) in [(0u32, 1u32), (1, 1), (2, 2)] {
        let mode = disc::disc_mode(n, m)?;
        let curve: Vec<(f64, f64)> = grid
            .iter()
            .map(|&b| asym::projection_drift_for(&mode, b).map(|d| (b, d)))
            .collect::<Result<_>>()?;
        let fit = rate_fit(&curve)?;
        if !(-2.1..=-1.9).contains(&fit.exponent) {
            passed = false;
        }
        details.push(format!("({n},{m}): {:.4}", fit.exponent));
        table.push(vec![
            Cell::Int(n as i64),
            Cell::Int(m as i64),
            Cell::Num(fit.exponent),
            Cell::Num(fit.r_squared),
        ]);
    }
    let mut c = blank();
    c.passed = passed;
    c.details = format!("slopes {} within [-2.1, -1.9]", details.join(", "));
    c.tables.push(table);
    Ok(c)
}

/// Criterion 11: the two assemblies of the second-order entry agree to
/// 1e-10 relative on `{0..3} × {1..3}`.
fn c11_identity(cfg: &VerifyConfig) -> Result<CriterionResult> {
    let mut worst = 0.0_f64;
    let mut table = Table::new(
        "assembly_identity",
        &["n", "m", "n_entry", "alpha_explicit", "rel_gap"],
    );
    for (n, m) in fit_modes() {
        let rep = asym::n_matrix_entry(n, m, cfg.q_trunc)?;
        let alpha = asym::alpha_explicit(n, m, cfg.q_trunc)?;
        let rel = (rep.n_entry - alpha.value).abs() / alpha.value.abs();
        worst = worst.max(rel);
        table.push(vec![
            Cell::Int(n as i64),
            Cell::Int(m as i64),
            Cell::Num(rep.n_entry),
            Cell::Num(alpha.value),
            Cell::Num(rel),
        ]);
    }
    let mut c = blank();
    c.passed = worst <= 1e-10;
    c.details = format!("worst assembly gap {worst:.2e}, tolerance 1e-10");
    c.tables.push(table);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threaded_run_matches_sequential() {
        let mut cfg = VerifyConfig {
            n_max: 64,
            m_trunc: 16,
            zeros_n_max: 6,
            zeros_m_max: 8,
            robin_nm_max: 3,
            ..VerifyConfig::default()
        };
        let seq = run_all(&cfg).unwrap();
        cfg.threads = 4;
        let par = run_all(&cfg).unwrap();
        assert_eq!(seq.criteria.len(), par.criteria.len());
        for (a, b) in seq.criteria.iter().zip(&par.criteria) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.details, b.details);
            assert_eq!(a.tables.len(), b.tables.len());
            for (ta, tb) in a.tables.iter().zip(&b.tables) {
                assert_eq!(ta, tb);
            }
        }
    }
}
