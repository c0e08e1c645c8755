//! Independent verifiers for the engine.
//!
//! [`fock_simulate`] evolves the full photon-number state over the three
//! zones, beam splitter by beam splitter, with dense two-mode mixing
//! matrices — no product-form shortcut, no composed rotations — and projects
//! the measured mode onto vacuum without renormalizing, exactly like the
//! apparatus. It is exact up to the Fock cutoff and exists for correctness,
//! not speed.
//!
//! [`monte_carlo_clicks`] samples detector-click records shot by shot: the
//! photon number comes from the source statistics and each photon follows
//! the single-photon trajectory independently, which is valid because the
//! state stays a symmetric product throughout. Frequencies converge to the
//! engine probabilities.

use crate::engine::{run_inner_chain, ProtocolParams, RunOutcome, Scheme, Signal};
use crate::states::{beam_splitter_apply, ModeAmplitudes, ModePair, PhotonStatistics};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("cutoff {cutoff} too small for this source; need at least {required}")]
    CutoffTooSmall { cutoff: usize, required: usize },
}

/// Dense amplitude array over occupation triples (v₀, v₁, v₂) with
/// v₀ + v₁ + v₂ ≤ cutoff. Beam splitters conserve the photon number of each
/// sector, so the array never grows past the initial support.
#[derive(Debug, Clone)]
pub struct FockSpaceState {
    cutoff: usize,
    stride: usize,
    amps: Vec<f64>,
}

impl FockSpaceState {
    pub fn vacuum(cutoff: usize) -> Self {
        let stride = cutoff + 1;
        let mut amps = vec![0.0; stride * stride * stride];
        amps[0] = 1.0;
        Self {
            cutoff,
            stride,
            amps,
        }
    }

    /// Initial state `Σ_v c_v |v, 0, 0⟩` for the given source, truncated at
    /// the cutoff. Returns the state and the truncated probability mass.
    pub fn from_source(
        stats: &PhotonStatistics,
        cutoff: usize,
    ) -> Result<(Self, f64), OracleError> {
        let mut state = Self::vacuum(cutoff);
        state.amps[0] = 0.0;
        let mut kept = 0.0;
        match stats {
            PhotonStatistics::Fock(v) => {
                let v = *v as usize;
                if v > cutoff {
                    return Err(OracleError::CutoffTooSmall {
                        cutoff,
                        required: v,
                    });
                }
                let idx = state.index(v, 0, 0);
                state.amps[idx] = 1.0;
                kept = 1.0;
            }
            PhotonStatistics::Coherent { mean_photons } => {
                let alpha = mean_photons.sqrt();
                let mut amp = (-mean_photons / 2.0).exp(); // c₀
                for v in 0..=cutoff {
                    if v > 0 {
                        amp *= alpha / (v as f64).sqrt();
                    }
                    let idx = state.index(v, 0, 0);
                    state.amps[idx] = amp;
                    kept += amp * amp;
                }
            }
            PhotonStatistics::Arbitrary { weights } => {
                let top = weights.iter().rposition(|w| *w > 0.0).unwrap_or(0);
                if top > cutoff {
                    return Err(OracleError::CutoffTooSmall {
                        cutoff,
                        required: top,
                    });
                }
                for (v, w) in weights.iter().enumerate().take(cutoff + 1) {
                    let idx = state.index(v, 0, 0);
                    state.amps[idx] = w.sqrt();
                    kept += w;
                }
            }
        }
        Ok((state, 1.0 - kept))
    }

    fn index(&self, v0: usize, v1: usize, v2: usize) -> usize {
        (v0 * self.stride + v1) * self.stride + v2
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitude(&self, v0: usize, v1: usize, v2: usize) -> f64 {
        self.amps[self.index(v0, v1, v2)]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    /// Mean photon number in one mode, conditioned on the survival encoded
    /// in the unnormalized amplitudes.
    pub fn mode_occupancy(&self, mode: usize) -> f64 {
        let mut weighted = 0.0;
        let mut mass = 0.0;
        self.for_each(|v, a| {
            let w = a * a;
            mass += w;
            weighted += w * v[mode] as f64;
        });
        if mass == 0.0 {
            0.0
        } else {
            weighted / mass
        }
    }

    fn for_each(&self, mut f: impl FnMut([usize; 3], f64)) {
        for v0 in 0..=self.cutoff {
            for v1 in 0..=self.cutoff - v0 {
                for v2 in 0..=self.cutoff - v0 - v1 {
                    let a = self.amps[self.index(v0, v1, v2)];
                    if a != 0.0 {
                        f([v0, v1, v2], a);
                    }
                }
            }
        }
    }

    /// Apply one beam splitter to a mode pair through the dense pair-sum
    /// mixing matrices.
    pub fn apply_beam_splitter(&mut self, pair: ModePair, matrices: &BsMatrices) {
        let cutoff = self.cutoff;
        let mut column = vec![0.0; cutoff + 1];
        for other in 0..=cutoff {
            for pair_total in 0..=cutoff - other {
                let u = &matrices.per_total[pair_total];
                for (i, slot) in column.iter_mut().enumerate().take(pair_total + 1) {
                    let (v0, v1, v2) = match pair {
                        ModePair::ZeroOne => (i, pair_total - i, other),
                        ModePair::OneTwo => (other, i, pair_total - i),
                    };
                    *slot = self.amps[self.index(v0, v1, v2)];
                }
                for j in 0..=pair_total {
                    let mut acc = 0.0;
                    for i in 0..=pair_total {
                        acc += u[j * (pair_total + 1) + i] * column[i];
                    }
                    let (v0, v1, v2) = match pair {
                        ModePair::ZeroOne => (j, pair_total - j, other),
                        ModePair::OneTwo => (other, j, pair_total - j),
                    };
                    let idx = self.index(v0, v1, v2);
                    self.amps[idx] = acc;
                }
            }
        }
    }

    /// Project one mode onto vacuum without renormalizing; returns the
    /// probability mass removed.
    pub fn collapse_vacuum(&mut self, mode: usize) -> f64 {
        let mut leaked = 0.0;
        for v0 in 0..=self.cutoff {
            for v1 in 0..=self.cutoff - v0 {
                for v2 in 0..=self.cutoff - v0 - v1 {
                    let occupied = [v0, v1, v2][mode] > 0;
                    if occupied {
                        let idx = self.index(v0, v1, v2);
                        leaked += self.amps[idx] * self.amps[idx];
                        self.amps[idx] = 0.0;
                    }
                }
            }
        }
        leaked
    }
}

/// Photon-number-conserving mixing matrices of one beam splitter, one
/// (K+1)×(K+1) block per pair total K.
pub struct BsMatrices {
    per_total: Vec<Vec<f64>>,
}

impl BsMatrices {
    /// Matrix elements come from expanding
    /// (a† cosθ + b† sinθ)^i (b† cosθ − a† sinθ)^{K−i} over the pair basis.
    pub fn new(theta: f64, cutoff: usize) -> Self {
        let (c, s) = (theta.cos(), theta.sin());
        let mut factorial = vec![1.0f64; cutoff + 1];
        for k in 1..=cutoff {
            factorial[k] = factorial[k - 1] * k as f64;
        }
        let binomial = |n: usize, k: usize| factorial[n] / (factorial[k] * factorial[n - k]);
        let mut per_total = Vec::with_capacity(cutoff + 1);
        for total in 0..=cutoff {
            let dim = total + 1;
            let mut u = vec![0.0; dim * dim];
            for i in 0..=total {
                for j in 0..=total {
                    let mut acc = 0.0;
                    let p_lo = j.saturating_sub(total - i);
                    let p_hi = i.min(j);
                    for p in p_lo..=p_hi {
                        let q = j - p;
                        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
                        acc += sign
                            * binomial(i, p)
                            * binomial(total - i, q)
                            * c.powi((p + (total - i) - q) as i32)
                            * s.powi((i - p + q) as i32);
                    }
                    let norm = ((factorial[j] * factorial[total - j])
                        / (factorial[i] * factorial[total - i]))
                        .sqrt();
                    u[j * dim + i] = acc * norm;
                }
            }
            per_total.push(u);
        }
        Self { per_total }
    }
}

/// Exact dense-state run plus the truncated source mass (zero for Fock and
/// in-range arbitrary inputs).
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub outcome: RunOutcome,
    pub truncation_error: f64,
}

/// Evolve the dense state through every beam splitter and projection of the
/// configured scheme and read out the same outcome probabilities as the
/// engine.
pub fn fock_simulate(
    params: &ProtocolParams,
    stats: &PhotonStatistics,
    cutoff: usize,
) -> Result<OracleRun, OracleError> {
    let (mut state, truncation_error) = FockSpaceState::from_source(stats, cutoff)?;
    let bs_outer = BsMatrices::new(params.theta_outer(), cutoff);
    let bs_inner = BsMatrices::new(params.theta_inner(), cutoff);

    let outer_count = match params.scheme {
        Scheme::Slaz => params.outer,
        Scheme::Modified => params.cutoff.expect("modified params carry a cutoff"),
    };
    let mut leaked = 0.0;
    let mut max_occupancy = 0.0f64;
    for m in 1..=outer_count {
        state.apply_beam_splitter(ModePair::ZeroOne, &bs_outer);
        let has_chain = match params.scheme {
            Scheme::Slaz => m < params.outer,
            Scheme::Modified => true,
        };
        if !has_chain {
            continue;
        }
        for _ in 0..params.inner {
            state.apply_beam_splitter(ModePair::OneTwo, &bs_inner);
            let occ = state.mode_occupancy(2);
            if occ > max_occupancy {
                max_occupancy = occ;
            }
            if params.signal == Signal::One {
                leaked += state.collapse_vacuum(2);
            }
        }
        if params.signal == Signal::Zero {
            leaked += state.collapse_vacuum(2);
        }
    }

    let survival = state.norm_sq();
    let mut only_d0 = 0.0;
    let mut only_d1 = 0.0;
    let mut signal_mode_empty = 0.0;
    let signal_mode = match params.signal {
        Signal::Zero => 0,
        Signal::One => 1,
    };
    state.for_each(|v, a| {
        let w = a * a;
        if v[1] == 0 && v[2] == 0 && v[0] > 0 {
            only_d0 += w;
        }
        if v[0] == 0 && v[2] == 0 && v[1] > 0 {
            only_d1 += w;
        }
        if v[signal_mode] == 0 {
            signal_mode_empty += w;
        }
    });
    let f_click = if survival == 0.0 {
        0.0
    } else {
        (survival - signal_mode_empty) / survival
    };

    let final_amplitudes = recover_photon_pair(&state, stats);

    Ok(OracleRun {
        outcome: RunOutcome {
            prob_only_d0: only_d0,
            prob_only_d1: only_d1,
            ln_p_counterfactual: survival.ln(),
            f_click,
            prob_leak: leaked,
            prob_other: survival - only_d0 - only_d1,
            max_channel_occupancy: max_occupancy,
            final_amplitudes,
        },
        truncation_error,
    })
}

/// Per-photon amplitude pair pulled back out of the dense state. The state
/// keeps the product form (β₀a₀† + β₁a₁†)^v throughout, so the pure
/// components carry clean powers of the pair; amplitudes are non-negative in
/// these protocols.
fn recover_photon_pair(state: &FockSpaceState, stats: &PhotonStatistics) -> ModeAmplitudes {
    let from_component = |v: usize, weight: f64| -> ModeAmplitudes {
        if v == 0 || weight <= 0.0 {
            return ModeAmplitudes::new(0.0, 0.0, 0.0);
        }
        let root = 1.0 / v as f64;
        ModeAmplitudes::new(
            (state.amplitude(v, 0, 0) / weight.sqrt())
                .max(0.0)
                .powf(root),
            (state.amplitude(0, v, 0) / weight.sqrt())
                .max(0.0)
                .powf(root),
            0.0,
        )
    };
    match stats {
        PhotonStatistics::Fock(v) => from_component(*v as usize, 1.0),
        PhotonStatistics::Coherent { mean_photons } => {
            let vac = state.amplitude(0, 0, 0);
            if *mean_photons == 0.0 || vac == 0.0 {
                return ModeAmplitudes::new(0.0, 0.0, 0.0);
            }
            let alpha = mean_photons.sqrt();
            ModeAmplitudes::new(
                state.amplitude(1, 0, 0) / (vac * alpha),
                state.amplitude(0, 1, 0) / (vac * alpha),
                0.0,
            )
        }
        PhotonStatistics::Arbitrary { weights } => {
            let top = weights
                .iter()
                .cloned()
                .enumerate()
                .skip(1)
                .filter(|(v, w)| *w > 0.0 && *v <= state.cutoff())
                .max_by(|a, b| a.1.partial_cmp(&b.1).expect("weights are finite"));
            match top {
                Some((v, w)) => from_component(v, w),
                None => ModeAmplitudes::new(0.0, 0.0, 0.0),
            }
        }
    }
}

/// Detector-click counts over a batch of independently sampled shots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClickTally {
    pub shots: u64,
    pub only_d0: u64,
    pub only_d1: u64,
    pub channel_leak: u64,
    pub other: u64,
    pub seed: u64,
}

impl ClickTally {
    pub fn frequencies(&self) -> [f64; 4] {
        let n = self.shots as f64;
        [
            self.only_d0 as f64 / n,
            self.only_d1 as f64 / n,
            self.channel_leak as f64 / n,
            self.other as f64 / n,
        ]
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Per-shot generator derived from (seed, shot index), so shots are
/// reorderable without changing the tally.
fn shot_rng(seed: u64, shot: u64) -> ChaCha12Rng {
    let mut state = seed ^ shot.wrapping_mul(0xa076_1d64_78bd_642f);
    let mut bytes = [0u8; 32];
    for chunk in bytes.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha12Rng::from_seed(bytes)
}

fn sample_photon_number(stats: &PhotonStatistics, rng: &mut ChaCha12Rng) -> u32 {
    match stats {
        PhotonStatistics::Fock(v) => *v,
        PhotonStatistics::Coherent { mean_photons } => {
            if *mean_photons == 0.0 {
                return 0;
            }
            // CDF inversion along the Poissonian recurrence.
            let u: f64 = rng.gen();
            let mut pmf = (-mean_photons).exp();
            let mut cdf = pmf;
            let mut v = 0u32;
            while u >= cdf && v < 100_000 {
                v += 1;
                pmf *= mean_photons / f64::from(v);
                cdf += pmf;
            }
            v
        }
        PhotonStatistics::Arbitrary { weights } => {
            let u: f64 = rng.gen();
            let mut cdf = 0.0;
            for (v, w) in weights.iter().enumerate() {
                cdf += w;
                if u < cdf {
                    return v as u32;
                }
            }
            (weights.len() - 1) as u32
        }
    }
}

/// Walk the configured protocol once with the single-photon amplitude ops to
/// get the per-photon trajectory summary: survival weight and the final
/// Zone 0 / Zone 1 split.
fn trajectory(params: &ProtocolParams) -> (f64, f64, f64) {
    let theta_m = params.theta_outer();
    let outer_count = match params.scheme {
        Scheme::Slaz => params.outer,
        Scheme::Modified => params.cutoff.expect("modified params carry a cutoff"),
    };
    let mut state = ModeAmplitudes::input();
    for m in 1..=outer_count {
        state = beam_splitter_apply(state, ModePair::ZeroOne, theta_m);
        let has_chain = match params.scheme {
            Scheme::Slaz => m < params.outer,
            Scheme::Modified => true,
        };
        if has_chain {
            state = run_inner_chain(state, params.inner, params.signal).state;
        }
    }
    let g0_sq = state.beta0 * state.beta0;
    let g1_sq = state.beta1 * state.beta1;
    (g0_sq + g1_sq, g0_sq, g1_sq)
}

/// Sample `shots` runs of the protocol. Each photon survives the run's
/// projections with the trajectory weight ‖γ‖² and, surviving, lands on D₀
/// or D₁ with odds γ₀² : γ₁²; any leaked photon aborts the shot into the
/// channel-leak bin.
pub fn monte_carlo_clicks(
    params: &ProtocolParams,
    stats: &PhotonStatistics,
    shots: u64,
    seed: u64,
) -> ClickTally {
    let (survival, g0_sq, _) = trajectory(params);
    let p_leak = 1.0 - survival;
    let p_d0_given_survival = if survival > 0.0 {
        g0_sq / survival
    } else {
        0.0
    };

    let mut tally = ClickTally {
        shots,
        only_d0: 0,
        only_d1: 0,
        channel_leak: 0,
        other: 0,
        seed,
    };
    for shot in 0..shots {
        let mut rng = shot_rng(seed, shot);
        let photons = sample_photon_number(stats, &mut rng);
        let mut leaked = false;
        let mut at_d0 = 0u32;
        let mut at_d1 = 0u32;
        for _ in 0..photons {
            if rng.gen::<f64>() < p_leak {
                leaked = true;
                break;
            }
            if rng.gen::<f64>() < p_d0_given_survival {
                at_d0 += 1;
            } else {
                at_d1 += 1;
            }
        }
        if leaked {
            tally.channel_leak += 1;
        } else if at_d0 > 0 && at_d1 == 0 {
            tally.only_d0 += 1;
        } else if at_d1 > 0 && at_d0 == 0 {
            tally.only_d1 += 1;
        } else {
            tally.other += 1;
        }
    }
    tally
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mixing_matrices_are_orthogonal() {
        let m = BsMatrices::new(0.7, 6);
        for total in 0..=6usize {
            let dim = total + 1;
            let u = &m.per_total[total];
            for a in 0..dim {
                for b in 0..dim {
                    let dot: f64 = (0..dim).map(|k| u[k * dim + a] * u[k * dim + b]).sum();
                    let expected = if a == b { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(dot, expected, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn beam_splitter_conserves_sector_norms() {
        let stats = PhotonStatistics::arbitrary(vec![0.2, 0.5, 0.3]).unwrap();
        let (mut state, _) = FockSpaceState::from_source(&stats, 4).unwrap();
        let m = BsMatrices::new(0.41, 4);
        let before = state.norm_sq();
        state.apply_beam_splitter(ModePair::ZeroOne, &m);
        state.apply_beam_splitter(ModePair::OneTwo, &m);
        assert_abs_diff_eq!(state.norm_sq(), before, epsilon = 1e-13);
    }

    #[test]
    fn single_photon_matches_engine_exactly() {
        for signal in [Signal::Zero, Signal::One] {
            let params = ProtocolParams::slaz(5, 4, signal).unwrap();
            let stats = PhotonStatistics::Fock(1);
            let dense = fock_simulate(&params, &stats, 1).unwrap();
            let fast = run(&params, &stats);
            assert_abs_diff_eq!(
                dense.outcome.prob_only_d0,
                fast.prob_only_d0,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                dense.outcome.prob_only_d1,
                fast.prob_only_d1,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(dense.outcome.prob_leak, fast.prob_leak, epsilon = 1e-12);
        }
    }

    #[test]
    fn three_photon_blocked_channel_matches_engine() {
        let params = ProtocolParams::slaz(4, 3, Signal::One).unwrap();
        let stats = PhotonStatistics::Fock(3);
        let dense = fock_simulate(&params, &stats, 3).unwrap();
        let fast = run(&params, &stats);
        assert_abs_diff_eq!(
            dense.outcome.prob_only_d1,
            fast.prob_only_d1,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            dense.outcome.p_counterfactual(),
            fast.p_counterfactual(),
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(dense.outcome.f_click, fast.f_click, epsilon = 1e-10);
    }

    #[test]
    fn total_probability_is_conserved() {
        let params = ProtocolParams::slaz(4, 4, Signal::One).unwrap();
        let stats = PhotonStatistics::coherent(2.0).unwrap();
        let dense = fock_simulate(&params, &stats, 20).unwrap();
        let o = &dense.outcome;
        let total = o.p_counterfactual() + o.prob_leak + dense.truncation_error;
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn coherent_truncation_error_is_poisson_tail() {
        let params = ProtocolParams::slaz(4, 4, Signal::Zero).unwrap();
        let stats = PhotonStatistics::coherent(2.0).unwrap();
        let dense = fock_simulate(&params, &stats, 20).unwrap();
        assert!(dense.truncation_error < 1e-10);
        let fast = run(&params, &stats);
        assert_abs_diff_eq!(
            dense.outcome.prob_only_d0,
            fast.prob_only_d0,
            epsilon = 1e-8
        );
        assert_abs_diff_eq!(
            dense.outcome.prob_only_d1,
            fast.prob_only_d1,
            epsilon = 1e-8
        );
        assert_abs_diff_eq!(
            dense.outcome.max_channel_occupancy,
            fast.max_channel_occupancy,
            epsilon = 1e-8
        );
    }

    #[test]
    fn recovered_amplitudes_match_engine() {
        for stats in [
            PhotonStatistics::Fock(3),
            PhotonStatistics::coherent(1.5).unwrap(),
            PhotonStatistics::arbitrary(vec![0.2, 0.5, 0.3]).unwrap(),
        ] {
            let params = ProtocolParams::slaz(5, 3, Signal::One).unwrap();
            let dense = fock_simulate(&params, &stats, 12).unwrap();
            let fast = run(&params, &stats);
            assert_abs_diff_eq!(
                dense.outcome.final_amplitudes.beta0,
                fast.final_amplitudes.beta0,
                epsilon = 1e-10
            );
            assert_abs_diff_eq!(
                dense.outcome.final_amplitudes.beta1,
                fast.final_amplitudes.beta1,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn cutoff_too_small_is_rejected() {
        let params = ProtocolParams::slaz(3, 2, Signal::Zero).unwrap();
        let err = fock_simulate(&params, &PhotonStatistics::Fock(7), 5).unwrap_err();
        assert_eq!(
            err,
            OracleError::CutoffTooSmall {
                cutoff: 5,
                required: 7
            }
        );
    }

    #[test]
    fn tally_is_deterministic_and_complete() {
        let params = ProtocolParams::slaz(8, 20, Signal::One).unwrap();
        let stats = PhotonStatistics::coherent(3.0).unwrap();
        let a = monte_carlo_clicks(&params, &stats, 20_000, 42);
        let b = monte_carlo_clicks(&params, &stats, 20_000, 42);
        assert_eq!(a, b);
        assert_eq!(a.only_d0 + a.only_d1 + a.channel_leak + a.other, a.shots);
        let c = monte_carlo_clicks(&params, &stats, 20_000, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn vacuum_shots_never_click() {
        let params = ProtocolParams::slaz(6, 5, Signal::One).unwrap();
        let tally = monte_carlo_clicks(&params, &PhotonStatistics::Fock(0), 5_000, 7);
        assert_eq!(tally.other, tally.shots);
    }

    #[test]
    fn frequencies_track_engine_probabilities() {
        let params = ProtocolParams::slaz(20, 200, Signal::One).unwrap();
        let stats = PhotonStatistics::coherent(10.0).unwrap();
        let out = run(&params, &stats);
        let probs = [
            out.prob_only_d0,
            out.prob_only_d1,
            out.prob_leak,
            out.prob_other,
        ];
        let shots = 100_000u64;
        let tally = monte_carlo_clicks(&params, &stats, shots, 1);
        for (freq, p) in tally.frequencies().iter().zip(probs) {
            let sigma = (p * (1.0 - p) / shots as f64).sqrt();
            assert!(
                (freq - p).abs() <= 4.0 * sigma + 1e-9,
                "freq {freq} vs p {p} (σ = {sigma})"
            );
        }
    }
}
