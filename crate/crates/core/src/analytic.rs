//! Closed-form companions to the exact engine.
//!
//! Everything here is directly evaluable: per-photon final amplitudes with
//! their loss coefficients, small-parameter success probabilities for both
//! schemes, resource-count identities between the multiphoton schemes and the
//! single-photon baseline, and the design inversions the optimizer scans.
//!
//! Approximate operations carry machine-checkable validity ratios derived
//! from the regime assumptions (M ≫ v, N ≫ Mv, N ≫ m_c², k̄ ≪ |α|²), with
//! "≫" read as a ratio of at least [`MUCH_GREATER_DEFAULT`] unless the caller
//! picks another factor.

use crate::engine::Signal;
use crate::numeric::{cos_power, cos_power_factors};
use crate::states::{truncate_statistics, PhotonStatistics, DEFAULT_TRUNCATION_EPSILON};
use std::f64::consts::PI;
use thiserror::Error;

/// Default reading of "much greater than": a ratio of ten.
pub const MUCH_GREATER_DEFAULT: f64 = 10.0;

/// Accumulated loss-imbalance coefficients of the blocked-channel evolution:
/// after m outer cycles the Zone 0 amplitude gains `a` and the Zone 1
/// amplitude loses `b`, both first order in the per-chain Zeno loss π²/8N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossCoefficients {
    pub a: f64,
    pub b: f64,
}

/// Exact finite sums
/// A_m = (π²/8N) Σ_{m'=1}^{m−1} sin m'θ_M sin (m−m')θ_M and
/// B_m = (π²/8N) Σ_{m'=1}^{m−1} sin m'θ_M cos (m−m')θ_M.
pub fn loss_coefficients(m: u32, outer: u32, inner: u32) -> LossCoefficients {
    let theta_m = PI / (2.0 * f64::from(outer));
    let scale = PI * PI / (8.0 * f64::from(inner));
    let mf = f64::from(m);
    let mut a = 0.0;
    let mut b = 0.0;
    for k in 1..m {
        let kf = f64::from(k);
        let s = (kf * theta_m).sin();
        a += s * ((mf - kf) * theta_m).sin();
        b += s * ((mf - kf) * theta_m).cos();
    }
    LossCoefficients {
        a: scale * a,
        b: scale * b,
    }
}

/// Integral replacements of the full-chain sums: A_M ≈ πM/8N, B_M ≈ Mπ²/16N.
pub fn loss_coefficients_asymptotic(outer: u32, inner: u32) -> LossCoefficients {
    let m = f64::from(outer);
    let n = f64::from(inner);
    LossCoefficients {
        a: PI * m / (8.0 * n),
        b: m * PI * PI / (16.0 * n),
    }
}

/// Per-photon final amplitudes (Zone 0, Zone 1) of the standard scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockFinalAmplitudes {
    /// Finite-sum branch, valid for every M and N: for a free channel the
    /// exact per-pass product, for a blocked channel the first order in the
    /// per-chain Zeno loss with no integral replacement.
    pub exact: (f64, f64),
    /// Large-M, large-N branch: (1 − π²/8M, π/2M) for s = 0 and
    /// (πM/8N, 1 − π²M/16N) for s = 1.
    pub asymptotic: (f64, f64),
    /// ‖exact pair‖^{2v} — the no-channel-click probability of v photons.
    pub survival: f64,
    pub loss: LossCoefficients,
}

pub fn fock_final_amplitudes(
    outer: u32,
    inner: u32,
    v: u32,
    signal: Signal,
) -> FockFinalAmplitudes {
    let m = f64::from(outer);
    let theta_m = PI / (2.0 * m);
    let loss = loss_coefficients(outer, outer, inner);
    let exact = match signal {
        Signal::Zero => (
            cos_power(theta_m, outer),
            cos_power(theta_m, outer - 1) * theta_m.sin(),
        ),
        Signal::One => (loss.a, (m * theta_m).sin() - loss.b),
    };
    let asymptotic = match signal {
        Signal::Zero => (1.0 - PI * PI / (8.0 * m), PI / (2.0 * m)),
        Signal::One => {
            let la = loss_coefficients_asymptotic(outer, inner);
            (la.a, 1.0 - la.b)
        }
    };
    let norm_sq = exact.0 * exact.0 + exact.1 * exact.1;
    FockFinalAmplitudes {
        exact,
        asymptotic,
        survival: norm_sq.powi(v as i32),
        loss,
    }
}

/// Regime ratios behind the linearized success probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlazValidity {
    /// Photon-number scale the conditions are measured against: v for a Fock
    /// state, |α|² for a coherent state, the truncation cutoff otherwise.
    pub scale: f64,
    /// M / scale.
    pub outer_ratio: f64,
    /// N / (M · scale).
    pub inner_ratio: f64,
}

impl SlazValidity {
    pub fn is_met(&self, factor: f64) -> bool {
        self.outer_ratio >= factor && self.inner_ratio >= factor
    }
}

/// Success probabilities of the standard scheme at two approximation levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlazApprox {
    /// Photon-number sums Σ_{v≥1} w_v a_s^{2v} over the per-photon final
    /// amplitudes a₀ = cos^M θ_M (exact) and a₁ = 1 − π²M/16N.
    pub sum_p0: f64,
    pub sum_p1: f64,
    /// Fully linearized values 1 − π²v̄/4M − w₀ and 1 − π²v̄M/8N − w₀. The
    /// vacuum weight is subtracted because an empty pulse clicks nothing.
    pub linear_p0: f64,
    pub linear_p1: f64,
    pub validity: SlazValidity,
}

pub fn approx_probs_slaz(outer: u32, inner: u32, stats: &PhotonStatistics) -> SlazApprox {
    let m = f64::from(outer);
    let n = f64::from(inner);
    let a0_sq = cos_power(PI / (2.0 * m), 2 * outer);
    let a1 = 1.0 - PI * PI * m / (16.0 * n);
    let a1_sq = a1 * a1;

    let weight_sum = |base: f64| -> f64 {
        match stats {
            PhotonStatistics::Fock(v) => {
                if *v == 0 {
                    0.0
                } else {
                    base.powi(*v as i32)
                }
            }
            _ => {
                let t = truncate_statistics(stats, DEFAULT_TRUNCATION_EPSILON);
                let mut power = 1.0;
                let mut acc = 0.0;
                for (v, w) in t.weights.iter().enumerate() {
                    if v > 0 {
                        power *= base;
                        acc += w * power;
                    }
                }
                acc
            }
        }
    };

    let mean = stats.mean_photons();
    let w0 = stats.vacuum_weight();
    let scale = match stats {
        PhotonStatistics::Fock(v) => f64::from(*v),
        PhotonStatistics::Coherent { mean_photons } => *mean_photons,
        PhotonStatistics::Arbitrary { .. } => {
            truncate_statistics(stats, DEFAULT_TRUNCATION_EPSILON).cutoff as f64
        }
    };

    SlazApprox {
        sum_p0: weight_sum(a0_sq),
        sum_p1: weight_sum(a1_sq),
        linear_p0: 1.0 - PI * PI * mean / (4.0 * m) - w0,
        linear_p1: 1.0 - PI * PI * mean * m / (8.0 * n) - w0,
        validity: SlazValidity {
            scale,
            outer_ratio: m / scale,
            inner_ratio: n / (m * scale),
        },
    }
}

/// Exact closed forms for a coherent input, the independent route the engine
/// is verified against.
///
/// P₀ comes from the per-pass loss product
/// exp[−μ(1 − cos^{2M}θ_M)] − exp(−μ), which is exact for a free channel.
/// P₁ keeps the product structure [survival]·[D₀ silent]·[D₁ clicks] with
/// its constituents evaluated exactly: the damped outer rotation is unrolled
/// through the scalar three-term recurrence of its transfer matrix instead
/// of stepping amplitude vectors, so no code is shared with the engine path.
pub fn slaz_coherent_exact(outer: u32, inner: u32, mean: f64) -> (f64, f64) {
    let theta_m = PI / (2.0 * f64::from(outer));
    let (_, loss01) = cos_power_factors(theta_m, outer); // 1 − cos^{2M}θ_M
    let p0 = (-mean * loss01).exp() - (-mean).exp();

    let theta_n = PI / (2.0 * f64::from(inner));
    let (damp, leak_factor) = cos_power_factors(theta_n, inner);
    let (c, s) = (theta_m.cos(), theta_m.sin());
    // One outer cycle maps (b₀, b₁) by R(θ_M)·diag(1, damp); Cayley–Hamilton
    // turns the matrix power into x_{m+1} = tr·x_m − det·x_{m−1}.
    let tr = (1.0 + damp) * c;
    let det = damp;
    let (mut b0_prev, mut b1_prev) = (c, s);
    let (mut b0, mut b1) = (c * c - damp * s * s, (1.0 + damp) * s * c);
    let mut chain_weight = b1_prev * b1_prev; // Σ b₁(m)² over chains m = 1..M−1
    for _ in 3..=outer {
        chain_weight += b1 * b1;
        let next0 = tr * b0 - det * b0_prev;
        let next1 = tr * b1 - det * b1_prev;
        b0_prev = b0;
        b1_prev = b1;
        b0 = next0;
        b1 = next1;
    }
    let survival = (-mean * leak_factor * chain_weight).exp();
    let p1 = survival * (-mean * b0 * b0).exp() * -(-mean * b1 * b1).exp_m1();
    (p0, p1)
}

/// Poisson-resummed per-photon power forms for a coherent input:
/// P_s = exp[−μ(1 − a_s²)] − exp(−μ) over the same bases as the photon-number
/// sums. P₀ is exact; P₁ inherits the first-order Zone 1 amplitude.
pub fn slaz_coherent_resummed(outer: u32, inner: u32, mean: f64) -> (f64, f64) {
    let m = f64::from(outer);
    let n = f64::from(inner);
    let (_, loss0) = cos_power_factors(PI / (2.0 * m), outer);
    let a1 = 1.0 - PI * PI * m / (16.0 * n);
    (
        (-mean * loss0).exp() - (-mean).exp(),
        (-mean * (1.0 - a1 * a1)).exp() - (-mean).exp(),
    )
}

/// First-order product form of the blocked-channel coherent success
/// probability: exp(−μπ²M/8N) · exp(−μπ²M²/64N²) · {1 − exp[−μ(1 − π²M/16N)²]},
/// valid for N ≫ M ≫ 1.
pub fn slaz_coherent_first_order_p1(outer: u32, inner: u32, mean: f64) -> f64 {
    let m = f64::from(outer);
    let n = f64::from(inner);
    let pi2 = PI * PI;
    (-mean * pi2 * m / (8.0 * n)).exp()
        * (-mean * pi2 * m * m / (64.0 * n * n)).exp()
        * -(-mean * (1.0 - pi2 * m / (16.0 * n)).powi(2)).exp_m1()
}

/// Single-photon baseline of the standard scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineResult {
    pub outer: f64,
    pub inner: f64,
    /// 1 − π²/4M′.
    pub p0: f64,
    /// 1 − π²M′/8N′.
    pub p1: f64,
}

pub fn baseline_probs(outer: f64, inner: f64) -> BaselineResult {
    BaselineResult {
        outer,
        inner,
        p0: 1.0 - PI * PI / (4.0 * outer),
        p1: 1.0 - PI * PI * outer / (8.0 * inner),
    }
}

/// Cycle numbers a coherent input needs to match the single-photon baseline
/// probabilities: M = |α|²M′, N = |α|⁴N′, so T = |α|⁶M′N′.
pub fn slaz_resource_requirement(mean: f64, base_outer: f64, base_inner: f64) -> (f64, f64, f64) {
    let m = mean * base_outer;
    let n = mean * mean * base_inner;
    (m, n, m * n)
}

/// Regime ratios of the modified-scheme formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedValidity {
    /// |α|² / k̄ (the small-angle assumption k̄ ≪ |α|²).
    pub mean_ratio: f64,
    /// N / m_c² (the channel stays nearly empty).
    pub zeno_ratio: f64,
}

impl ModifiedValidity {
    pub fn is_met(&self, factor: f64) -> bool {
        self.mean_ratio >= factor && self.zeno_ratio >= factor
    }
}

/// Constituent probabilities of the modified scheme for a coherent input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedProbs {
    /// p_s · f_s for each signal.
    pub p_tilde0: f64,
    pub p_tilde1: f64,
    /// Counterfactuality: no channel detector clicks.
    pub p0: f64,
    pub p1: f64,
    /// D_s sees at least one photon given no channel click.
    pub f0: f64,
    pub f1: f64,
    /// Mean photons delivered to Zone 1 at readout for s = 1, in the
    /// loss-free idealization: k̄ = |α|² sin² m_c θ_M.
    pub k_bar: f64,
    pub validity: ModifiedValidity,
}

/// Modified-scheme probabilities from the truncated-chain states: exact
/// per-pass products for s = 0, first-order Zeno sums for s = 1. Real-valued
/// M and N are accepted so design formulas can be fed back in before
/// rounding.
pub fn modified_probs(mean: f64, outer: f64, inner: f64, cutoff: u32) -> ModifiedProbs {
    let theta_m = PI / (2.0 * outer);
    let mc = f64::from(cutoff);
    let (pow_mc, loss01) = cos_power_factors(theta_m, cutoff);
    let kept = pow_mc * pow_mc; // cos^{2m_c}θ_M
    let p0 = (-mean * loss01).exp();
    let f0 = -(-mean * kept).exp_m1();

    let mut sin_sq_sum = 0.0;
    let mut cross_sum = 0.0;
    for k in 1..=cutoff {
        let kf = f64::from(k);
        let s = (kf * theta_m).sin();
        sin_sq_sum += s * s;
        cross_sum += s * ((mc - kf) * theta_m).cos();
    }
    let p1 = (-mean * PI * PI / (4.0 * inner) * sin_sq_sum).exp();
    let zone1 = (mc * theta_m).sin() - PI * PI / (8.0 * inner) * cross_sum;
    let f1 = -(-mean * zone1 * zone1).exp_m1();

    let k_bar = mean * (mc * theta_m).sin().powi(2);
    ModifiedProbs {
        p_tilde0: p0 * f0,
        p_tilde1: p1 * f1,
        p0,
        p1,
        f0,
        f1,
        k_bar,
        validity: ModifiedValidity {
            mean_ratio: if k_bar > 0.0 {
                mean / k_bar
            } else {
                f64::INFINITY
            },
            zeno_ratio: inner / (mc * mc),
        },
    }
}

/// Small-angle counterfactual success for s = 0:
/// P̃₀ = exp(−|α|² m_c π² / 4M²).
pub fn modified_p_tilde0_small_angle(mean: f64, cutoff: u32, outer: f64) -> f64 {
    (-mean * f64::from(cutoff) * PI * PI / (4.0 * outer * outer)).exp()
}

/// Small-angle success for s = 1 with M eliminated through the s = 0 target.
pub fn modified_p_tilde1_small_angle(p_tilde0: f64, cutoff: u32, inner: f64) -> f64 {
    let mc = f64::from(cutoff);
    let ln0 = p_tilde0.ln();
    let pi2 = PI * PI;
    (pi2 * (mc + 1.0) * (2.0 * mc + 1.0) * ln0 / (24.0 * inner)).exp()
        * -(mc * ln0 * (1.0 - pi2 * (1.0 + mc) / (16.0 * inner)).powi(2)).exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedDesign {
    pub outer: f64,
    pub inner: f64,
    /// T = m_c · N.
    pub total: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum DesignError {
    #[error("target P̃₁ = {p_tilde1} is unreachable at m_c = {cutoff}: even an ideal chain caps it at {max_p_tilde1}")]
    Infeasible {
        cutoff: u32,
        p_tilde1: f64,
        max_p_tilde1: f64,
    },
}

/// Invert the small-angle forms: M from the s = 0 target, N from the s = 1
/// target at that M. Infeasible whenever the requested P̃₁ is not below
/// 1 − P̃₀^{m_c}, the click probability an infinitely long inner chain would
/// deliver.
pub fn modified_design(
    p_tilde0: f64,
    p_tilde1: f64,
    mean: f64,
    cutoff: u32,
) -> Result<ModifiedDesign, DesignError> {
    assert!(p_tilde0 > 0.0 && p_tilde0 < 1.0, "P̃₀ must lie in (0,1)");
    assert!(p_tilde1 > 0.0 && p_tilde1 < 1.0, "P̃₁ must lie in (0,1)");
    let mc = f64::from(cutoff);
    let ln0 = p_tilde0.ln();
    let x = (mc * ln0).exp();
    let denom = p_tilde1 + x - 1.0;
    if denom >= 0.0 {
        return Err(DesignError::Infeasible {
            cutoff,
            p_tilde1,
            max_p_tilde1: 1.0 - x,
        });
    }
    let outer = (-mean * mc * PI * PI / (4.0 * ln0)).sqrt();
    let inner = PI * PI * (mc + 1.0) * ((2.0 * mc + 1.0) + (mc - 1.0) * x) * ln0 / (24.0 * denom);
    Ok(ModifiedDesign {
        outer,
        inner,
        total: mc * inner,
    })
}

/// Total cycle number of the modified scheme as a function of the delivered
/// photon number k̄, with both success targets held at (P̄₀, P̄₁).
pub fn modified_total_cycles(k_bar: f64, p0_bar: f64, p1_bar: f64) -> f64 {
    let ln0 = p0_bar.ln();
    let e = (-k_bar).exp();
    PI * PI * k_bar * (ln0 - k_bar) * (2.0 * k_bar - ln0 + (k_bar + ln0) * e)
        / (24.0 * ln0 * ln0 * (e - (1.0 - p1_bar)))
}

/// Large-k̄ limit of [`modified_total_cycles`]: T ≈ π²k̄³ / [12 (ln P̄₀)² (1 − P̄₁)].
pub fn modified_total_cycles_large_k(k_bar: f64, p0_bar: f64, p1_bar: f64) -> f64 {
    let ln0 = p0_bar.ln();
    PI * PI * k_bar.powi(3) / (12.0 * ln0 * ln0 * (1.0 - p1_bar))
}

/// Resource count of the modified scheme matched to a single-photon baseline
/// (M′, N′): T = (32/3π⁴) k̄³ M′N′ ≈ k̄³M′N′/10.
pub fn baseline_comparison(k_bar: f64, base_outer: f64, base_inner: f64) -> f64 {
    32.0 / (3.0 * PI.powi(4)) * k_bar.powi(3) * base_outer * base_inner
}

/// Design that only guarantees an empty channel (counterfactuality p_s), with
/// no requirement on Alice's detectors firing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterfactualOnlyDesign {
    pub cutoff: f64,
    pub outer: f64,
    pub inner: f64,
    pub total: f64,
    pub log10_total: f64,
}

/// m_c = −k̄/ln p₀, M from the s = 0 counterfactuality target,
/// N = π²k̄²/(12 ln p₀ ln p₁), T = −π²k̄³/[12 (ln p₀)² ln p₁].
pub fn counterfactual_only_design(
    k_bar: f64,
    p0: f64,
    p1: f64,
    mean: f64,
) -> CounterfactualOnlyDesign {
    let ln0 = p0.ln();
    let ln1 = p1.ln();
    let cutoff = -k_bar / ln0;
    let outer = (-mean * cutoff * PI * PI / (4.0 * ln0)).sqrt();
    let inner = PI * PI * k_bar * k_bar / (12.0 * ln0 * ln1);
    let total = -PI * PI * k_bar.powi(3) / (12.0 * ln0 * ln0 * ln1);
    CounterfactualOnlyDesign {
        cutoff,
        outer,
        inner,
        total,
        log10_total: total.log10(),
    }
}

/// The same design expressed through the baseline cycle numbers:
/// m_c ≈ 4M′k̄/π², M ≈ 2M′|α|√k̄/π, N ≈ 8N′k̄²/3π², T = (32/3π⁴)k̄³M′N′.
pub fn counterfactual_only_from_baseline(
    k_bar: f64,
    base_outer: f64,
    base_inner: f64,
    mean: f64,
) -> CounterfactualOnlyDesign {
    let pi2 = PI * PI;
    let cutoff = 4.0 * base_outer * k_bar / pi2;
    let outer = 2.0 * base_outer * k_bar.sqrt() * mean.sqrt() / PI;
    let inner = 8.0 * base_inner * k_bar * k_bar / (3.0 * pi2);
    let total = baseline_comparison(k_bar, base_outer, base_inner);
    CounterfactualOnlyDesign {
        cutoff,
        outer,
        inner,
        total,
        log10_total: total.log10(),
    }
}

/// Loss-free peak channel occupancies of the modified scheme,
/// (|α|² sin²θ_M for s = 0, |α|² sin² m_cθ_M sin²θ_N for s = 1).
pub fn modified_occupancy_maxima(mean: f64, outer: f64, inner: f64, cutoff: u32) -> (f64, f64) {
    let theta_m = PI / (2.0 * outer);
    let theta_n = PI / (2.0 * inner);
    (
        mean * theta_m.sin().powi(2),
        mean * (f64::from(cutoff) * theta_m).sin().powi(2) * theta_n.sin().powi(2),
    )
}
