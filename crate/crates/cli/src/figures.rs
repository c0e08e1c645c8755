//! Figure data as deterministic CSV.
//!
//! Numeric fields are serialized with 12 significant digits; rows follow the
//! grid order regardless of how the sweep executed, so repeated invocations
//! are bit-identical.

use crate::CliError;
use cfcomm::optimizer::{
    baseline_min_total, minimize_total_approx, minimize_total_exact, OptimizeError, ScanBounds,
};
use cfcomm::states::PhotonStatistics;
use cfcomm::{analytic, run, ProtocolParams, Signal};
use rayon::prelude::*;
use std::path::Path;

pub fn fmt12(x: f64) -> String {
    format!("{:.11e}", x)
}

/// Inclusive `start:end:step` integer grid.
pub fn parse_int_grid(spec: &str) -> Result<Vec<u32>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, end, step] = parts.as_slice() else {
        return Err(CliError::invalid(format!(
            "grid `{spec}`: expected start:end:step"
        )));
    };
    let (start, end, step): (u32, u32, u32) = (
        start
            .parse()
            .map_err(|_| CliError::invalid(format!("bad grid start in `{spec}`")))?,
        end.parse()
            .map_err(|_| CliError::invalid(format!("bad grid end in `{spec}`")))?,
        step.parse()
            .map_err(|_| CliError::invalid(format!("bad grid step in `{spec}`")))?,
    );
    if step == 0 || end < start {
        return Err(CliError::invalid(format!("grid `{spec}` is empty")));
    }
    Ok((start..=end).step_by(step as usize).collect())
}

/// Inclusive `start:end:step` grid of reals.
pub fn parse_float_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, end, step] = parts.as_slice() else {
        return Err(CliError::invalid(format!(
            "grid `{spec}`: expected start:end:step"
        )));
    };
    let (start, end, step): (f64, f64, f64) = (
        start
            .parse()
            .map_err(|_| CliError::invalid(format!("bad grid start in `{spec}`")))?,
        end.parse()
            .map_err(|_| CliError::invalid(format!("bad grid end in `{spec}`")))?,
        step.parse()
            .map_err(|_| CliError::invalid(format!("bad grid step in `{spec}`")))?,
    );
    if step <= 0.0 || end < start {
        return Err(CliError::invalid(format!("grid `{spec}` is empty")));
    }
    let count = ((end - start) / step + 1.5).floor() as usize;
    Ok((0..count)
        .map(|i| start + i as f64 * step)
        .filter(|v| *v <= end + 1e-9)
        .collect())
}

pub fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<(), CliError> {
    let mut text = String::with_capacity(rows.len() * 40 + header.len() + 1);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::invalid(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, text)
        .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))
}

/// Success probability over an (M, N) grid for one signal.
pub fn success_grid_rows(
    mean: f64,
    m_grid: &[u32],
    n_grid: &[u32],
    signal: Signal,
) -> Result<Vec<String>, CliError> {
    let stats = PhotonStatistics::coherent(mean).map_err(CliError::from_msg)?;
    let cells: Vec<(u32, u32)> = m_grid
        .iter()
        .flat_map(|m| n_grid.iter().map(move |n| (*m, *n)))
        .collect();
    let probs: Vec<f64> = cells
        .par_iter()
        .map(|(m, n)| {
            let params = ProtocolParams::slaz(*m, *n, signal)
                .map_err(|e| CliError::invalid(e.to_string()))?;
            let out = run(&params, &stats);
            Ok(match signal {
                Signal::Zero => out.prob_only_d0,
                Signal::One => out.prob_only_d1,
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(cells
        .iter()
        .zip(probs)
        .map(|((m, n), p)| format!("{m},{n},{}", fmt12(p)))
        .collect())
}

fn infeasible_to_error(target: f64, err: OptimizeError) -> CliError {
    match err {
        OptimizeError::Infeasible { .. } => CliError::infeasible(format!("target {target}: {err}")),
        other => CliError::invalid(other.to_string()),
    }
}

/// Rows `Ptilde,log10T_approx,log10T_exact` for the minimum-cycle figure.
pub fn min_cycles_rows(
    mean: f64,
    targets: &[f64],
    bounds: &ScanBounds,
) -> Result<Vec<String>, CliError> {
    targets
        .par_iter()
        .map(|t| {
            let approx = minimize_total_approx(*t, *t, mean, bounds.cutoff_max)
                .map_err(|e| infeasible_to_error(*t, e))?;
            let exact =
                minimize_total_exact(*t, mean, bounds).map_err(|e| infeasible_to_error(*t, e))?;
            Ok(format!(
                "{},{},{}",
                fmt12(*t),
                fmt12((approx.total as f64).log10()),
                fmt12((exact.total as f64).log10())
            ))
        })
        .collect()
}

/// Rows `Ptilde,M,N,mc,T` — the exact minimum-resource configurations.
pub fn min_cycles_table_rows(
    mean: f64,
    targets: &[f64],
    bounds: &ScanBounds,
) -> Result<Vec<String>, CliError> {
    targets
        .par_iter()
        .map(|t| {
            let exact =
                minimize_total_exact(*t, mean, bounds).map_err(|e| infeasible_to_error(*t, e))?;
            Ok(format!(
                "{},{},{},{},{}",
                fmt12(*t),
                exact.outer,
                exact.inner,
                exact.cutoff.unwrap_or(0),
                exact.total
            ))
        })
        .collect()
}

/// Rows `Pprime,log10T_baseline,log10T_D34,log10T_eq8` comparing the
/// single-photon baseline with the modified-scheme designs.
pub fn baseline_comparison_rows(
    mean: f64,
    k_bar: f64,
    targets: &[f64],
    cutoff_max: u32,
) -> Result<Vec<String>, CliError> {
    targets
        .iter()
        .map(|p| {
            let baseline = baseline_min_total(*p, 1_000_000, 1_000_000_000)
                .map_err(|e| infeasible_to_error(*p, e))?;
            let counterfactual_only = analytic::counterfactual_only_design(k_bar, *p, *p, mean);
            let approx = minimize_total_approx(*p, *p, mean, cutoff_max)
                .map_err(|e| infeasible_to_error(*p, e))?;
            Ok(format!(
                "{},{},{},{}",
                fmt12(*p),
                fmt12((baseline.total as f64).log10()),
                fmt12(counterfactual_only.log10_total),
                fmt12((approx.total as f64).log10())
            ))
        })
        .collect()
}
