//! The experiment commands behind the CLI subcommands. Each builds one
//! [`Report`]; the binary decides where the bytes go.

use std::collections::BTreeMap;
use std::time::Instant;

use robin_gap::specfun::zero_rows;
use robin_gap::verify::{Cell, Table};
use robin_gap::{asym, disc, dtn, fitting, gap};

use crate::config::RunConfig;
use crate::output::Report;
use crate::CliError;

fn push_timing(report: &mut Report, want: bool, name: &str, seconds: f64) {
    if want {
        report
            .timings
            .get_or_insert_with(BTreeMap::new)
            .insert(name.to_string(), seconds);
    }
}

/// `zeros`: certified zero tables of `J_n` / `J'_n`, sorted by `(n, m)`,
/// with the interlacing walk as validator.
pub fn cmd_zeros(
    cfg: &RunConfig,
    kind: ZeroKind,
    n_range: (u32, u32),
    m_range: (u32, u32),
    timings: bool,
) -> Result<Report, CliError> {
    let started = Instant::now();
    if n_range.1 > 512 {
        return Err(CliError::usage("zero tables support n ≤ 512"));
    }
    if m_range.0 < 1 || m_range.1 > 200 {
        return Err(CliError::usage("zero tables support 1 ≤ m ≤ 200"));
    }
    let mut table = Table::new(
        "zeros",
        &[
            "family",
            "n",
            "m",
            "value",
            "residual",
            "bracket_lo",
            "bracket_hi",
        ],
    );
    for n in n_range.0..=n_range.1 {
        // the walk certifies interlacing for both families at once
        let (d, p) = zero_rows(n, m_range.1, m_range.1).map_err(CliError::from)?;
        let mut emit = |z: &robin_gap::specfun::BesselZero| {
            table.push(vec![
                Cell::Text(z.family.label().to_string()),
                Cell::Int(z.order as i64),
                Cell::Int(z.index as i64),
                Cell::Num(z.value),
                Cell::Num(z.residual),
                Cell::Num(z.bracket.0),
                Cell::Num(z.bracket.1),
            ]);
        };
        if matches!(kind, ZeroKind::Dirichlet | ZeroKind::Both) {
            for z in &d[(m_range.0 - 1) as usize..] {
                emit(z);
            }
        }
        if matches!(kind, ZeroKind::Neumann | ZeroKind::Both) {
            for z in &p[(m_range.0 - 1) as usize..] {
                emit(z);
            }
        }
    }
    let mut report = Report::new("zeros", cfg);
    report.tables.push(table);
    push_timing(
        &mut report,
        timings,
        "zeros",
        started.elapsed().as_secs_f64(),
    );
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroKind {
    Dirichlet,
    Neumann,
    Both,
}

/// `dtn`: eigenvalues `λ̌_n` and coupling weights by both routes, plus the
/// boundedness diagnostics of `λ̌^{2s}γ²` at `s ∈ {1, 3/2}`.
pub fn cmd_dtn(
    cfg: &RunConfig,
    n_range: (u32, u32),
    m_trunc: u32,
    timings: bool,
) -> Result<Report, CliError> {
    let started = Instant::now();
    if m_trunc < 8 {
        return Err(CliError::usage("m_trunc must be ≥ 8"));
    }
    let mut table = Table::new(
        "dtn_modes",
        &[
            "n",
            "lambda_check",
            "gamma_sq_truncated",
            "gamma_sq_tail_bound",
            "gamma_sq_exact",
            "multiplicity",
        ],
    );
    for n in n_range.0..=n_range.1 {
        let lam = dtn::dtn_eigenvalue(n)?;
        let (g, tail) = dtn::gamma_sq(n, m_trunc)?;
        let exact = dtn::gamma_sq_exact(n)?;
        table.push(vec![
            Cell::Int(n as i64),
            Cell::Num(lam),
            Cell::Num(g),
            Cell::Num(tail),
            Cell::Num(exact),
            Cell::Int(if n == 0 { 1 } else { 2 }),
        ]);
    }

    let mut diag = Table::new(
        "boundedness",
        &["s", "n_max", "sup", "argmax", "tail_decreasing", "plateau"],
    );
    for s in [1.0, 1.5] {
        let rep = dtn::boundedness_diagnostics(cfg.n_max.clamp(100, 2000), s)?;
        diag.push(vec![
            Cell::Num(rep.s),
            Cell::Int(rep.n_max as i64),
            Cell::Num(rep.sup),
            Cell::Int(rep.argmax as i64),
            Cell::Bool(rep.tail_decreasing),
            Cell::Bool(rep.plateau),
        ]);
    }

    let mut report = Report::new("dtn", cfg);
    report.tables.push(table);
    report.tables.push(diag);
    push_timing(&mut report, timings, "dtn", started.elapsed().as_secs_f64());
    Ok(report)
}

/// `robin-eig`: exact Robin eigenvalues of one mode over a β list.
pub fn cmd_robin_eig(
    cfg: &RunConfig,
    n: u32,
    m: u32,
    betas: &[f64],
    timings: bool,
) -> Result<Report, CliError> {
    let started = Instant::now();
    let mode = disc::disc_mode(n, m)?;
    let mut table = Table::new(
        "robin_eigenvalues",
        &[
            "n",
            "m",
            "beta",
            "s",
            "lambda",
            "residual",
            "neumann_sq",
            "dirichlet_sq",
        ],
    );
    for &beta in betas {
        let r = disc::robin_eigenvalue_for(&mode, beta)?;
        table.push(vec![
            Cell::Int(n as i64),
            Cell::Int(m as i64),
            Cell::Num(beta),
            Cell::Num(r.s),
            Cell::Num(r.lambda),
            Cell::Num(r.residual),
            Cell::Num(mode.neumann_eigenvalue()),
            Cell::Num(mode.dirichlet_eigenvalue()),
        ]);
    }
    let mut report = Report::new("robin-eig", cfg);
    report.tables.push(table);
    push_timing(
        &mut report,
        timings,
        "robin-eig",
        started.elapsed().as_secs_f64(),
    );
    Ok(report)
}

/// Which operator `gap-norms` measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormTarget {
    /// `D_β - D_∞` (β-dependent).
    Gap,
    /// `D_∞` itself (β-independent).
    Dinf,
}

/// `gap-norms`: Schatten or operator norms of `D_β - D_∞`, or of `D_∞`,
/// over a β list.
pub fn cmd_gap_norms(
    cfg: &RunConfig,
    target: NormTarget,
    p: f64,
    betas: &[f64],
    n_max: u32,
    timings: bool,
) -> Result<Report, CliError> {
    let started = Instant::now();
    let model = gap::DiagonalModel::build(n_max, cfg.m_trunc)?;
    let mut table = Table::new(
        "gap_norms",
        &[
            "operator",
            "beta",
            "p",
            "value",
            "tail_bound",
            "beta_times_value",
        ],
    );
    match target {
        NormTarget::Gap => {
            for &beta in betas {
                let s = gap::schatten_norm_gap(&model, beta, p)?;
                table.push(vec![
                    Cell::Text("gap".into()),
                    Cell::Num(beta),
                    Cell::Num(p),
                    Cell::Num(s.value),
                    Cell::Num(s.tail_bound),
                    Cell::Num(beta * s.value),
                ]);
            }
        }
        NormTarget::Dinf => {
            let s = if p.is_infinite() {
                let op = gap::operator_norm_dinf(&model)?;
                gap::SchattenNorm {
                    p,
                    value: op.value,
                    tail_bound: op.tail_bound,
                }
            } else {
                gap::schatten_norm_dinf(&model, p)?
            };
            table.push(vec![
                Cell::Text("dinf".into()),
                Cell::Num(0.0),
                Cell::Num(p),
                Cell::Num(s.value),
                Cell::Num(s.tail_bound),
                Cell::Num(0.0),
            ]);
        }
    }
    let mut report = Report::new("gap-norms", cfg);
    report.tables.push(table);
    push_timing(
        &mut report,
        timings,
        "gap-norms",
        started.elapsed().as_secs_f64(),
    );
    Ok(report)
}

/// `rates`: operator-norm and trace-norm decay curves with their log-log
/// fits, in long format for plotting.
pub fn cmd_rates(
    cfg: &RunConfig,
    betas: &[f64],
    n_max: u32,
    timings: bool,
) -> Result<Report, CliError> {
    let started = Instant::now();
    let model = gap::DiagonalModel::build(n_max, cfg.m_trunc)?;
    let mut curves = Table::new("rate_curves", &["quantity", "beta", "value", "tail_bound"]);
    let mut fits = Table::new(
        "rate_fits",
        &["quantity", "exponent", "log_constant", "r_squared"],
    );

    let mut op_curve = Vec::new();
    let mut s1_curve = Vec::new();
    for &beta in betas {
        let op = gap::operator_norm_gap(&model, beta)?;
        let s1 = gap::schatten_norm_gap(&model, beta, 1.0)?;
        op_curve.push((beta, op.value));
        s1_curve.push((beta, s1.value));
        curves.push(vec![
            Cell::Text("operator_norm".into()),
            Cell::Num(beta),
            Cell::Num(op.value),
            Cell::Num(op.tail_bound),
        ]);
        curves.push(vec![
            Cell::Text("s1_norm".into()),
            Cell::Num(beta),
            Cell::Num(s1.value),
            Cell::Num(s1.tail_bound),
        ]);
    }
    for (name, curve) in [("operator_norm", op_curve), ("s1_norm", s1_curve)] {
        let fit = fitting::rate_fit(&curve)?;
        fits.push(vec![
            Cell::Text(name.into()),
            Cell::Num(fit.exponent),
            Cell::Num(fit.log_constant),
            Cell::Num(fit.r_squared),
        ]);
    }
    let mut report = Report::new("rates", cfg);
    report.tables.push(curves);
    report.tables.push(fits);
    push_timing(
        &mut report,
        timings,
        "rates",
        started.elapsed().as_secs_f64(),
    );
    Ok(report)
}

/// `expansion`: Richardson-extracted coefficients for one mode, against the
/// oracle and the explicit entry.
#[allow(clippy::too_many_arguments)]
pub fn cmd_expansion(
    cfg: &RunConfig,
    n: u32,
    m: u32,
    beta0: f64,
    ratio: f64,
    levels: u32,
    q_trunc: u32,
    timings: bool,
) -> Result<Report, CliError> {
    let started = Instant::now();
    let fit = asym::extract_coefficients(n, m, beta0, ratio, levels)?;
    let alpha = asym::alpha_explicit(n, m, q_trunc)?;
    let closed = asym::alpha_closed(n, m)?;
    let alpha_gap = (fit.c2 - alpha.value).abs();
    let discrepancy = alpha_gap / fit.c2.abs().max(1e-300) > 1e-2 && alpha_gap > alpha.tail_bound;

    let mut coeffs = Table::new(
        "coefficients",
        &[
            "n",
            "m",
            "c0",
            "c0_exact",
            "c1",
            "c1_exact",
            "c2",
            "c2_oracle",
            "alpha_explicit",
            "alpha_tail_bound",
            "alpha_closed",
            "conditioning_warning",
            "formula_discrepancy",
        ],
    );
    coeffs.push(vec![
        Cell::Int(n as i64),
        Cell::Int(m as i64),
        Cell::Num(fit.c0),
        Cell::Num(fit.c0_exact),
        Cell::Num(fit.c1),
        Cell::Num(fit.c1_exact),
        Cell::Num(fit.c2),
        Cell::Num(fit.c2_oracle),
        Cell::Num(alpha.value),
        Cell::Num(alpha.tail_bound),
        Cell::Num(closed),
        Cell::Bool(fit.conditioning_warning),
        Cell::Bool(discrepancy),
    ]);

    let mut levels_table = Table::new("richardson_levels", &["level", "beta", "c0", "c1", "c2"]);
    for (i, &b) in fit.beta_grid.iter().enumerate() {
        levels_table.push(vec![
            Cell::Int(i as i64),
            Cell::Num(b),
            Cell::Num(fit.c0_levels[i]),
            Cell::Num(fit.c1_levels[i]),
            Cell::Num(fit.c2_levels[i]),
        ]);
    }

    let mut report = Report::new("expansion", cfg);
    report.flags.push(
        "boundary pairing convention: arclength measure dθ, giving the Gram entry 2k² for the \
         normalized Dirichlet pair (the normalized measure dθ/2π would give k²/π)"
            .to_string(),
    );
    if discrepancy {
        report.flags.push(format!(
            "FORMULA-DISCREPANCY (informational) at (n,m)=({n},{m}): c2 {} vs alpha {} ± {}",
            fit.c2, alpha.value, alpha.tail_bound
        ));
    }
    report.tables.push(coeffs);
    report.tables.push(levels_table);
    push_timing(
        &mut report,
        timings,
        "expansion",
        started.elapsed().as_secs_f64(),
    );
    Ok(report)
}

/// `verify`: the full acceptance suite. Criteria 1-11 come from the
/// engine; criterion 12 reruns the engine (under a different thread count)
/// and demands byte-identical result tables. Returns the report and whether
/// everything passed.
pub fn cmd_verify(
    cfg: &RunConfig,
    threads: usize,
    timings: bool,
) -> Result<(Report, bool), CliError> {
    let started = Instant::now();
    let outcome = robin_gap::verify::run_all(&cfg.verify_config(threads))?;
    let rerun = robin_gap::verify::run_all(&cfg.verify_config(if threads == 1 { 2 } else { 1 }))?;

    let mut table_count = 0usize;
    let mut identical = outcome.criteria.len() == rerun.criteria.len();
    for (a, b) in outcome.criteria.iter().zip(&rerun.criteria) {
        table_count += a.tables.len();
        identical &= a.id == b.id
            && a.passed == b.passed
            && a.details == b.details
            && a.flags == b.flags
            && a.tables == b.tables;
    }

    let mut report = Report::new("verify", cfg);
    let mut criteria = Table::new("criteria", &["id", "name", "passed", "details"]);
    for c in &outcome.criteria {
        criteria.push(vec![
            Cell::Int(c.id as i64),
            Cell::Text(c.name.clone()),
            Cell::Bool(c.passed),
            Cell::Text(c.details.clone()),
        ]);
        report.flags.extend(c.flags.iter().cloned());
        push_timing(
            &mut report,
            timings,
            &format!("criterion_{:02}", c.id),
            c.seconds,
        );
    }
    criteria.push(vec![
        Cell::Int(12),
        Cell::Text("verify determinism".into()),
        Cell::Bool(identical),
        Cell::Text(format!(
            "{table_count} result tables byte-identical across an engine rerun"
        )),
    ]);
    report.tables.push(criteria);
    for c in &outcome.criteria {
        for t in &c.tables {
            report.tables.push(t.clone());
        }
    }
    push_timing(
        &mut report,
        timings,
        "verify_total",
        started.elapsed().as_secs_f64(),
    );
    Ok((report, outcome.all_passed() && identical))
}
