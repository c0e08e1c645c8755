//! Minimum-total-cycle-number searches.
//!
//! Three modes: an analytic scan of the modified-scheme design formulas over
//! m_c, an exhaustive integer search driven by the exact engine, and the
//! single-photon baseline. T = m_c·N for the modified scheme and M′N′ for
//! the baseline; the outer cycle number M only sets the beam-splitter
//! reflectivity and never enters T, which is what makes the exact search
//! tractable: for each (m_c, M) only the minimal feasible N matters, and the
//! blocked-channel success probability grows monotonically with N.

use crate::analytic::{baseline_probs, modified_design};
use crate::engine::{run, ProtocolParams, Signal};
use crate::states::PhotonStatistics;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OptMode {
    Approx,
    Exact,
    Baseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub mode: OptMode,
    /// m_c for the modified-scheme modes, absent for the baseline.
    #[serde(rename = "mc")]
    pub cutoff: Option<u32>,
    /// M (or M′ in baseline mode).
    #[serde(rename = "M")]
    pub outer: u32,
    /// N (or N′).
    #[serde(rename = "N")]
    pub inner: u32,
    /// T = m_c·N, or M′N′ for the baseline.
    #[serde(rename = "T")]
    pub total: u64,
    /// Mean photons delivered to Zone 1 at readout for s = 1.
    #[serde(rename = "kBar")]
    pub k_bar: Option<f64>,
    #[serde(rename = "achievedP0")]
    pub achieved_p0: f64,
    #[serde(rename = "achievedP1")]
    pub achieved_p1: f64,
}

/// Integer search box for the exact mode. Pinning a range to one value
/// restricts the scan to that slice, e.g. a fixed m_c or a fixed M.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanBounds {
    pub cutoff_min: u32,
    pub cutoff_max: u32,
    pub outer_min: u32,
    pub outer_max: u32,
    pub inner_min: u32,
    pub inner_max: u32,
}

impl Default for ScanBounds {
    fn default() -> Self {
        Self {
            cutoff_min: 1,
            cutoff_max: 50,
            outer_min: 2,
            outer_max: 5000,
            inner_min: 1,
            inner_max: 100_000,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum OptimizeError {
    #[error("targets must lie in [0, 1), got {0}")]
    BadTarget(f64),
    #[error("no feasible configuration within bounds; tightest achieved (P0, P1) = ({best_p0}, {best_p1})")]
    Infeasible { best_p0: f64, best_p1: f64 },
}

/// Scan m_c through the design formulas, rounding the real-valued solutions
/// up so feasibility is preserved, and keep the minimizer of T = m_c·⌈N⌉.
pub fn minimize_total_approx(
    target_p0: f64,
    target_p1: f64,
    mean: f64,
    cutoff_max: u32,
) -> Result<OptimizationResult, OptimizeError> {
    for t in [target_p0, target_p1] {
        if !(0.0..1.0).contains(&t) {
            return Err(OptimizeError::BadTarget(t));
        }
    }
    let mut best: Option<OptimizationResult> = None;
    for cutoff in 1..=cutoff_max {
        let Ok(design) = modified_design(target_p0, target_p1, mean, cutoff) else {
            continue;
        };
        let inner = design.inner.ceil().max(1.0);
        let outer = design.outer.ceil().max(f64::from(cutoff).max(2.0));
        if inner > f64::from(u32::MAX) || outer > f64::from(u32::MAX) {
            continue;
        }
        let (inner, outer) = (inner as u32, outer as u32);
        let total = u64::from(cutoff) * u64::from(inner);
        if best.is_none_or(|b| total < b.total) {
            let probs =
                crate::analytic::modified_probs(mean, f64::from(outer), f64::from(inner), cutoff);
            best = Some(OptimizationResult {
                mode: OptMode::Approx,
                cutoff: Some(cutoff),
                outer,
                inner,
                total,
                k_bar: Some(-f64::from(cutoff) * target_p0.ln()),
                achieved_p0: probs.p_tilde0,
                achieved_p1: probs.p_tilde1,
            });
        }
    }
    best.ok_or(OptimizeError::Infeasible {
        best_p0: 0.0,
        best_p1: 0.0,
    })
}

/// Success probabilities of one modified-scheme configuration per the exact
/// engine.
fn engine_p_tildes(mean: f64, outer: u32, inner: u32, cutoff: u32) -> (f64, f64) {
    let stats = PhotonStatistics::Coherent { mean_photons: mean };
    let p0 = run(
        &ProtocolParams::modified(outer, inner, cutoff, Signal::Zero).unwrap(),
        &stats,
    );
    let p1 = run(
        &ProtocolParams::modified(outer, inner, cutoff, Signal::One).unwrap(),
        &stats,
    );
    (p0.p_tilde(), p1.p_tilde())
}

fn engine_p_tilde1(mean: f64, outer: u32, inner: u32, cutoff: u32) -> f64 {
    let stats = PhotonStatistics::Coherent { mean_photons: mean };
    run(
        &ProtocolParams::modified(outer, inner, cutoff, Signal::One).unwrap(),
        &stats,
    )
    .p_tilde()
}

/// s = 0 success is independent of N, so probe it once per (m_c, M).
fn engine_p_tilde0(mean: f64, outer: u32, cutoff: u32) -> f64 {
    let stats = PhotonStatistics::Coherent { mean_photons: mean };
    run(
        &ProtocolParams::modified(outer, 1, cutoff, Signal::Zero).unwrap(),
        &stats,
    )
    .p_tilde()
}

/// Brute-force integer minimization of T = m_c·N over (m_c, M, N) with the
/// exact engine deciding feasibility: both P̃₀ and P̃₁ must reach `target`.
/// Ties break towards smaller m_c, then smaller M, which the ascending scan
/// order delivers for free.
///
/// Pruning, all of it lossless:
/// * P̃₀ is N-independent and increases with M, so each m_c has a minimal
///   feasible M found by bisection;
/// * P̃₁ ≤ 1 − exp(−|α|² min(1, m_c sin θ_M)²) whatever N, which caps M from
///   above (Zone 1 can never hold more than m_c beam-splitter transfers);
/// * P̃₁ grows with N, so the minimal N per (m_c, M) comes from bisection,
///   and any cell whose N would push T past the incumbent is dropped after
///   a single evaluation at the cap.
pub fn minimize_total_exact(
    target: f64,
    mean: f64,
    bounds: &ScanBounds,
) -> Result<OptimizationResult, OptimizeError> {
    if !(0.0..1.0).contains(&target) {
        return Err(OptimizeError::BadTarget(target));
    }
    let mut best: Option<(u64, u32, u32, u32)> = None; // (T, m_c, M, N)
    let mut tightest = (0.0f64, 0.0f64);

    for cutoff in bounds.cutoff_min.max(1)..=bounds.cutoff_max {
        if let Some((best_t, ..)) = best {
            if u64::from(cutoff) >= best_t {
                break; // T = m_c·N ≥ m_c already loses
            }
        }
        if cutoff > bounds.outer_max {
            break; // the cutoff chain cannot be longer than the outer chain
        }
        let outer_min = cutoff.max(2).max(bounds.outer_min);
        if outer_min > bounds.outer_max {
            continue;
        }
        if engine_p_tilde0(mean, bounds.outer_max, cutoff) < target {
            continue; // even the weakest coupling leaks too much for s = 0
        }
        // Bisect the smallest M whose s = 0 success reaches the target.
        let mut lo = outer_min;
        let mut hi = bounds.outer_max;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if engine_p_tilde0(mean, mid, cutoff) >= target {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let first_outer = lo.saturating_sub(1).max(outer_min);

        for outer in first_outer..=bounds.outer_max {
            // Hard cap on what any N could deliver for s = 1.
            let theta_m = PI / (2.0 * f64::from(outer));
            let reach = (f64::from(cutoff) * theta_m.sin()).min(1.0);
            let p1_cap = -(-mean * reach * reach).exp_m1();
            if p1_cap <= target {
                break; // shrinks further with M
            }
            let inner_min = bounds.inner_min.max(1);
            let inner_cap = match best {
                Some((best_t, ..)) => {
                    let cap = (best_t - 1) / u64::from(cutoff);
                    if cap < u64::from(inner_min) {
                        break;
                    }
                    cap.min(u64::from(bounds.inner_max)) as u32
                }
                None => bounds.inner_max,
            };
            if inner_cap < inner_min {
                continue;
            }
            if engine_p_tilde1(mean, outer, inner_cap, cutoff) < target {
                if best.is_none() {
                    // only worth tracking while infeasibility is still on
                    // the table
                    let (p0, p1) = engine_p_tildes(mean, outer, inner_cap, cutoff);
                    if p0.min(p1) > tightest.0.min(tightest.1) {
                        tightest = (p0, p1);
                    }
                }
                continue;
            }
            let mut lo = inner_min;
            let mut hi = inner_cap;
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if engine_p_tilde1(mean, outer, mid, cutoff) >= target {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            // Closed loop: re-verify the candidate as the engine sees it.
            let (p0, p1) = engine_p_tildes(mean, outer, lo, cutoff);
            if p0 >= target && p1 >= target {
                let total = u64::from(cutoff) * u64::from(lo);
                if best.is_none_or(|(best_t, ..)| total < best_t) {
                    best = Some((total, cutoff, outer, lo));
                }
            }
        }
    }

    match best {
        Some((total, cutoff, outer, inner)) => {
            let stats = PhotonStatistics::Coherent { mean_photons: mean };
            let out0 = run(
                &ProtocolParams::modified(outer, inner, cutoff, Signal::Zero).unwrap(),
                &stats,
            );
            let out1 = run(
                &ProtocolParams::modified(outer, inner, cutoff, Signal::One).unwrap(),
                &stats,
            );
            Ok(OptimizationResult {
                mode: OptMode::Exact,
                cutoff: Some(cutoff),
                outer,
                inner,
                total,
                k_bar: Some(mean * out1.final_amplitudes.beta1.powi(2)),
                achieved_p0: out0.p_tilde(),
                achieved_p1: out1.p_tilde(),
            })
        }
        None => Err(OptimizeError::Infeasible {
            best_p0: tightest.0,
            best_p1: tightest.1,
        }),
    }
}

/// Minimal M′N′ for the single-photon standard scheme: both outer and inner
/// requirements invert in closed form, and T grows with M′, so the smallest
/// feasible M′ wins. The steps in T as the target loosens come from the
/// integer ceilings.
pub fn baseline_min_total(
    target: f64,
    outer_max: u32,
    inner_max: u32,
) -> Result<OptimizationResult, OptimizeError> {
    if !(0.0..1.0).contains(&target) {
        return Err(OptimizeError::BadTarget(target));
    }
    let pi2 = PI * PI;
    let mut outer = (pi2 / (4.0 * (1.0 - target))).ceil().max(3.0) as u64;
    // guard the ceiling against landing exactly on the bound
    while 1.0 - pi2 / (4.0 * outer as f64) < target {
        outer += 1;
    }
    let mut inner = (pi2 * outer as f64 / (8.0 * (1.0 - target)))
        .ceil()
        .max(1.0) as u64;
    while 1.0 - pi2 * outer as f64 / (8.0 * inner as f64) < target {
        inner += 1;
    }
    if outer > u64::from(outer_max) || inner > u64::from(inner_max) {
        return Err(OptimizeError::Infeasible {
            best_p0: 0.0,
            best_p1: 0.0,
        });
    }
    let b = baseline_probs(outer as f64, inner as f64);
    Ok(OptimizationResult {
        mode: OptMode::Baseline,
        cutoff: None,
        outer: outer as u32,
        inner: inner as u32,
        total: outer * inner,
        k_bar: None,
        achieved_p0: b.p0,
        achieved_p1: b.p1,
    })
}
