//! Exact dynamical evolution of the two communication schemes.
//!
//! The outer chain mixes Zones 0 and 1 with M beam splitters of reflectivity
//! cos²θ_M, θ_M = π/2M. Between consecutive outer beam splitters sits an
//! inner chain of N beam splitters (θ_N = π/2N) mixing Zone 1 with the public
//! channel. Bob's signal decides what happens inside an inner chain:
//!
//! * s = 1 — his blocking detector D_2B projects the channel onto vacuum
//!   after every BS_N, so Zone 1 keeps a cos^N θ_N Zeno factor per chain and
//!   the per-step channel weights β₁² cos^{2(n−1)}θ_N sin²θ_N sum
//!   geometrically to β₁²(1 − cos^{2N}θ_N);
//! * s = 0 — the chain runs freely, the N rotations compose to a quarter
//!   turn that routes all of Zone 1 into the channel, and D_2A projects once
//!   at the chain exit.
//!
//! Both branches are evaluated through these composed-rotation / geometric
//! identities, which are algebraically identical to stepping beam splitter by
//! beam splitter but keep the amplitudes accurate to a few ulp over runs with
//! millions of cycles. Survival probabilities are assembled in the log
//! domain from the accumulated leak weights.
//!
//! In the standard scheme BS_M appears M times with an inner chain after each
//! of the first M − 1; detectors D₀/D₁ sit past the final BS_M. The modified
//! scheme keeps the BS_M reflectivity of a nominal M but truncates the
//! structure after the m_c-th inner chain, where the detectors are moved.

use crate::numeric::{cos_power_factors, Kahan};
use crate::states::{ModeAmplitudes, PhotonStatistics};
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Slaz,
    Modified,
}

/// Bob's one-bit signal: `One` keeps the blocking detector D_2B active in
/// the channel, `Zero` makes it transparent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Signal {
    Zero,
    One,
}

impl Signal {
    pub fn as_bit(self) -> u8 {
        match self {
            Signal::Zero => 0,
            Signal::One => 1,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("outer cycle number M must be at least 2, got {0}")]
    OuterTooSmall(u32),
    #[error("inner cycle number N must be at least 1")]
    InnerTooSmall,
    #[error("cutoff m_c must satisfy 1 <= m_c <= M, got m_c = {cutoff} with M = {outer}")]
    CutoffOutOfRange { cutoff: u32, outer: u32 },
}

/// Validated run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProtocolParams {
    pub scheme: Scheme,
    /// Outer cycle number M; sets θ_M = π/2M.
    pub outer: u32,
    /// Inner cycle number N; sets θ_N = π/2N.
    pub inner: u32,
    /// m_c, the inner chain at which the modified scheme stops. `None` for
    /// the standard scheme.
    pub cutoff: Option<u32>,
    pub signal: Signal,
}

impl ProtocolParams {
    /// Standard scheme: M outer beam splitters, an inner chain after each of
    /// the first M − 1. M = 1 is rejected — θ_M = π/2 leaves no outer
    /// interference to read a signal from.
    pub fn slaz(outer: u32, inner: u32, signal: Signal) -> Result<Self, ParamError> {
        if outer < 2 {
            return Err(ParamError::OuterTooSmall(outer));
        }
        if inner < 1 {
            return Err(ParamError::InnerTooSmall);
        }
        Ok(Self {
            scheme: Scheme::Slaz,
            outer,
            inner,
            cutoff: None,
            signal,
        })
    }

    /// Modified scheme: m_c outer beam splitters (reflectivity still set by
    /// M), an inner chain after every one of them, detectors at the exit of
    /// the m_c-th chain.
    pub fn modified(
        outer: u32,
        inner: u32,
        cutoff: u32,
        signal: Signal,
    ) -> Result<Self, ParamError> {
        if outer < 2 {
            return Err(ParamError::OuterTooSmall(outer));
        }
        if inner < 1 {
            return Err(ParamError::InnerTooSmall);
        }
        if cutoff < 1 || cutoff > outer {
            return Err(ParamError::CutoffOutOfRange { cutoff, outer });
        }
        Ok(Self {
            scheme: Scheme::Modified,
            outer,
            inner,
            cutoff: Some(cutoff),
            signal,
        })
    }

    pub fn theta_outer(&self) -> f64 {
        PI / (2.0 * f64::from(self.outer))
    }

    pub fn theta_inner(&self) -> f64 {
        PI / (2.0 * f64::from(self.inner))
    }

    /// Number of outer beam splitters actually traversed.
    fn bs_count(&self) -> u32 {
        match self.scheme {
            Scheme::Slaz => self.outer,
            Scheme::Modified => self.cutoff.expect("modified params carry a cutoff"),
        }
    }

    /// Whether an inner chain follows the m-th outer beam splitter.
    fn chain_after(&self, m: u32) -> bool {
        match self.scheme {
            Scheme::Slaz => m < self.outer,
            Scheme::Modified => true,
        }
    }
}

/// State, leak and channel peak of one inner chain traversal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerChainResult {
    /// Post-chain amplitudes; the channel component is always back to zero.
    pub state: ModeAmplitudes,
    /// Per-photon weight removed by the channel detector(s) in this chain.
    pub leaked_weight: f64,
    /// Largest per-photon channel weight β₂² seen right after a BS_N,
    /// before the corresponding projection.
    pub peak_channel_weight: f64,
}

/// Signal-dependent chain factors, fixed by (N, s): every chain in a run
/// shares them, so they are computed once.
#[derive(Debug, Clone, Copy)]
struct ChainKernel {
    /// Multiplier on β₁ across the chain: cos(Nθ_N) free, cos^N θ_N blocked.
    keep: f64,
    /// Leaked fraction of β₁²: sin²(Nθ_N) free, 1 − cos^{2N}θ_N blocked.
    leak_factor: f64,
    /// Peak channel fraction of β₁²: the chain exit (free) or first pass
    /// (blocked).
    peak_factor: f64,
}

impl ChainKernel {
    fn new(inner: u32, signal: Signal) -> Self {
        let theta_n = PI / (2.0 * f64::from(inner));
        match signal {
            Signal::Zero => {
                // Free evolution composes to a rotation by Nθ_N = π/2; the
                // exit detector removes everything that was in Zone 1.
                let total = f64::from(inner) * theta_n;
                let (sin, cos) = total.sin_cos();
                Self {
                    keep: cos,
                    leak_factor: sin * sin,
                    peak_factor: sin * sin,
                }
            }
            Signal::One => {
                // Projection after every pass: β₁ → β₁ cos^N θ_N and the
                // step leaks β₁² cos^{2(n−1)}θ_N sin²θ_N sum geometrically
                // to β₁²(1 − cos^{2N}θ_N).
                let (pow, leak_factor) = cos_power_factors(theta_n, inner);
                let s = theta_n.sin();
                Self {
                    keep: pow,
                    leak_factor,
                    peak_factor: s * s,
                }
            }
        }
    }

    fn apply(&self, state: ModeAmplitudes) -> InnerChainResult {
        debug_assert_eq!(
            state.beta2, 0.0,
            "inner chains are entered with an empty channel"
        );
        let b1_sq = state.beta1 * state.beta1;
        InnerChainResult {
            state: ModeAmplitudes::new(state.beta0, state.beta1 * self.keep, 0.0),
            leaked_weight: b1_sq * self.leak_factor,
            peak_channel_weight: b1_sq * self.peak_factor,
        }
    }
}

/// One inner chain: N beam-splitter passes on Zones (1,2) with the
/// signal-dependent measurement pattern described in the module docs.
///
/// Expects a state with no channel component, which is how every chain is
/// entered in both schemes.
pub fn run_inner_chain(state: ModeAmplitudes, inner: u32, signal: Signal) -> InnerChainResult {
    ChainKernel::new(inner, signal).apply(state)
}

/// Walk the full interferometer, reporting the state entering each inner
/// chain to `on_chain(m, entry)`. Returns the final amplitudes and the total
/// per-photon leak weight.
fn evolve(
    params: &ProtocolParams,
    mut on_chain: impl FnMut(u32, ModeAmplitudes),
) -> (ModeAmplitudes, f64) {
    let theta_m = params.theta_outer();
    let (sin_m, cos_m) = theta_m.sin_cos();
    let kernel = ChainKernel::new(params.inner, params.signal);
    let mut state = ModeAmplitudes::input();
    let mut leak = Kahan::default();
    for m in 1..=params.bs_count() {
        state = ModeAmplitudes::new(
            state.beta0 * cos_m - state.beta1 * sin_m,
            state.beta0 * sin_m + state.beta1 * cos_m,
            0.0,
        );
        if params.chain_after(m) {
            on_chain(m, state);
            let chain = kernel.apply(state);
            state = chain.state;
            leak.add(chain.leaked_weight);
        }
    }
    (state, leak.total())
}

/// Mean photon number in the channel for a state with channel weight
/// `beta2_sq` and total weight `norm_sq`, conditioned on every earlier
/// measurement having stayed silent.
fn zone2_occupancy(stats: &PhotonStatistics, beta2_sq: f64, norm_sq: f64) -> f64 {
    if beta2_sq == 0.0 {
        return 0.0;
    }
    match stats {
        PhotonStatistics::Coherent { mean_photons } => mean_photons * beta2_sq,
        PhotonStatistics::Fock(v) => f64::from(*v) * beta2_sq / norm_sq,
        PhotonStatistics::Arbitrary { weights } => {
            // Surviving weights are reweighted by norm_sq^v.
            let mut power = 1.0;
            let mut mass = 0.0;
            let mut photons = 0.0;
            for (v, w) in weights.iter().enumerate() {
                mass += w * power;
                photons += w * power * v as f64;
                power *= norm_sq;
            }
            if mass == 0.0 {
                0.0
            } else {
                (photons / mass) * beta2_sq / norm_sq
            }
        }
    }
}

/// Complete set of outcome probabilities for one run.
///
/// The "only" probabilities demand silence of the opposite detector;
/// `p_tilde` is the looser figure of merit of the modified scheme, which
/// asks only that the channel stayed silent and D_s clicked.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RunOutcome {
    /// P(only D₀ clicks): no channel click, D₁ silent, D₀ sees ≥ 1 photon.
    pub prob_only_d0: f64,
    /// P(only D₁ clicks).
    pub prob_only_d1: f64,
    /// ln p_s, the log-probability that neither channel detector ever
    /// clicks. Kept in log form: s = 1 runs multiply up to M·N near-unity
    /// survival factors.
    pub ln_p_counterfactual: f64,
    /// P(D_s sees ≥ 1 photon | no channel click) for the run's signal s.
    pub f_click: f64,
    /// P(some channel detector clicked) = 1 − p_s.
    pub prob_leak: f64,
    /// Mass of the remaining outcomes: no detector fires at all, or both
    /// D₀ and D₁ fire.
    pub prob_other: f64,
    /// Peak mean photon number in the channel across every BS_N output,
    /// each taken before its measurement.
    pub max_channel_occupancy: f64,
    /// Unnormalized per-photon amplitudes at the detector plane (β₂ = 0).
    pub final_amplitudes: ModeAmplitudes,
}

impl RunOutcome {
    pub fn p_counterfactual(&self) -> f64 {
        self.ln_p_counterfactual.exp()
    }

    /// p_s · f_s — the modified scheme's success probability P̃_s.
    pub fn p_tilde(&self) -> f64 {
        self.ln_p_counterfactual.exp() * self.f_click
    }
}

/// Run either scheme for any photon statistics.
///
/// The per-photon amplitude trajectory is statistics-independent; only the
/// outcome assembly differs, so the evolution is done once and read out
/// according to `stats`.
pub fn run(params: &ProtocolParams, stats: &PhotonStatistics) -> RunOutcome {
    let mut max_occ = 0.0f64;
    let theta_n = PI / (2.0 * f64::from(params.inner));
    let sin_total = (f64::from(params.inner) * theta_n).sin();
    let (gamma, total_leak) = evolve(params, |_, entry| {
        let b1_sq = entry.beta1 * entry.beta1;
        // Within a chain the channel weight peaks at the last pass (s = 0,
        // amplitude grown to β₁ sin Nθ_N) or the first pass (s = 1, before
        // any Zeno damping); the conditioning norm there is the entry norm.
        let peak_beta2_sq = match params.signal {
            Signal::Zero => b1_sq * sin_total * sin_total,
            Signal::One => b1_sq * theta_n.sin().powi(2),
        };
        let occ = zone2_occupancy(stats, peak_beta2_sq, entry.norm_sq());
        if occ > max_occ {
            max_occ = occ;
        }
    });
    assemble_outcome(params.signal, stats, gamma, total_leak, max_occ)
}

fn assemble_outcome(
    signal: Signal,
    stats: &PhotonStatistics,
    gamma: ModeAmplitudes,
    total_leak: f64,
    max_channel_occupancy: f64,
) -> RunOutcome {
    let g0_sq = gamma.beta0 * gamma.beta0;
    let g1_sq = gamma.beta1 * gamma.beta1;
    // Per-photon survival 1 − L, in log form.
    let ln_survival = (-total_leak).ln_1p();
    let (signal_sq, other_sq) = match signal {
        Signal::Zero => (g0_sq, g1_sq),
        Signal::One => (g1_sq, g0_sq),
    };

    let (prob_only_d0, prob_only_d1, ln_p, f_click, prob_leak, prob_other) = match stats {
        PhotonStatistics::Fock(v) => {
            let vf = f64::from(*v);
            let ln_p = vf * ln_survival;
            if *v == 0 {
                (0.0, 0.0, ln_p, 0.0, 0.0, 1.0)
            } else {
                let only0 = g0_sq.powi(*v as i32);
                let only1 = g1_sq.powi(*v as i32);
                let leak = -(vf * ln_survival).exp_m1();
                // 1 − (γ_other² / (1−L))^v
                let f = if other_sq == 0.0 {
                    1.0
                } else if total_leak >= 1.0 {
                    0.0
                } else {
                    -(vf * (other_sq.ln() - ln_survival)).exp_m1()
                };
                let other = ln_p.exp() - only0 - only1;
                (only0, only1, ln_p, f, leak, other)
            }
        }
        PhotonStatistics::Coherent { mean_photons: mu } => {
            let ln_p = -mu * total_leak;
            let only0 = (-mu * (total_leak + g1_sq)).exp() * -(-mu * g0_sq).exp_m1();
            let only1 = (-mu * (total_leak + g0_sq)).exp() * -(-mu * g1_sq).exp_m1();
            let leak = -ln_p.exp_m1();
            let f = -(-mu * signal_sq).exp_m1();
            // Neither output detector fires, or both do.
            let other = ln_p.exp()
                * ((-mu * (g0_sq + g1_sq)).exp() + (-mu * g0_sq).exp_m1() * (-mu * g1_sq).exp_m1());
            (only0, only1, ln_p, f, leak, other)
        }
        PhotonStatistics::Arbitrary { weights } => {
            let survival = ln_survival.exp();
            let sum_pow = |base: f64| -> f64 {
                let mut power = 1.0;
                let mut acc = 0.0;
                for w in weights {
                    acc += w * power;
                    power *= base;
                }
                acc
            };
            let p = sum_pow(survival);
            let only0 = sum_pow(g0_sq) - weights[0];
            let only1 = sum_pow(g1_sq) - weights[0];
            let f = if p == 0.0 {
                0.0
            } else {
                (p - sum_pow(other_sq)) / p
            };
            let other = weights[0] + (p - weights[0]) - (only0 + only1);
            (only0, only1, p.ln(), f, 1.0 - p, other)
        }
    };

    RunOutcome {
        prob_only_d0,
        prob_only_d1,
        ln_p_counterfactual: ln_p,
        f_click,
        prob_leak,
        prob_other,
        max_channel_occupancy,
        final_amplitudes: gamma,
    }
}

/// Mean channel photon number after every BS_N, indexed by (outer cycle m,
/// inner cycle n), each entry taken before the following measurement.
///
/// Allocates one entry per inner beam splitter; for survey-sized runs
/// (M·N in the millions) prefer [`run`], which tracks only the peak.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OccupancyEntry {
    pub outer: u32,
    pub inner: u32,
    pub mean_photons: f64,
}

pub fn channel_occupancy_profile(
    params: &ProtocolParams,
    stats: &PhotonStatistics,
) -> Vec<OccupancyEntry> {
    let theta_n = params.theta_inner();
    let n = params.inner;
    let mut entries = Vec::new();
    evolve(params, |m, entry| {
        let b1_sq = entry.beta1 * entry.beta1;
        match params.signal {
            Signal::Zero => {
                // No measurement until the chain exit: norm stays put while
                // the channel amplitude grows as β₁ sin(nθ_N).
                let norm = entry.norm_sq();
                for k in 1..=n {
                    let beta2_sq = b1_sq * (f64::from(k) * theta_n).sin().powi(2);
                    entries.push(OccupancyEntry {
                        outer: m,
                        inner: k,
                        mean_photons: zone2_occupancy(stats, beta2_sq, norm),
                    });
                }
            }
            Signal::One => {
                let sin_sq = theta_n.sin().powi(2);
                let cos_sq = theta_n.cos().powi(2);
                let mut b1_sq_step = b1_sq;
                let mut norm = entry.norm_sq();
                for k in 1..=n {
                    let beta2_sq = b1_sq_step * sin_sq;
                    entries.push(OccupancyEntry {
                        outer: m,
                        inner: k,
                        mean_photons: zone2_occupancy(stats, beta2_sq, norm),
                    });
                    norm -= beta2_sq;
                    b1_sq_step *= cos_sq;
                }
            }
        }
    });
    entries
}
