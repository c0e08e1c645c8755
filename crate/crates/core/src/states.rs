//! Amplitude-level description of the three optical zones and the photon
//! statistics of the source.
//!
//! Zone 0 and Zone 1 are Alice's upper and lower paths; Zone 2 is the public
//! transmission channel. Because every element of the interferometer chain is
//! either a two-mode beam splitter or a vacuum projection, an initial
//! `(β·a†)^v / √v!` product state stays in product form for the whole run, so
//! a single real amplitude triple carries the complete per-photon dynamics.
//! After a projection the triple is deliberately *not* renormalized: its
//! squared norm is the accumulated survival probability per photon.

use serde::Serialize;
use thiserror::Error;

/// Single-excitation amplitudes for Zones 0, 1, 2.
///
/// The triple is unnormalized: beam splitters preserve the norm, vacuum
/// projections shrink it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeAmplitudes {
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
}

/// The two mode pairs mixed by the physical beam splitters: BS_M acts on
/// (0,1), BS_N on (1,2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModePair {
    ZeroOne,
    OneTwo,
}

impl ModeAmplitudes {
    pub const fn new(beta0: f64, beta1: f64, beta2: f64) -> Self {
        Self {
            beta0,
            beta1,
            beta2,
        }
    }

    /// Full excitation in Zone 0, the source-side input of both schemes.
    pub const fn input() -> Self {
        Self::new(1.0, 0.0, 0.0)
    }

    pub fn norm_sq(&self) -> f64 {
        self.beta0 * self.beta0 + self.beta1 * self.beta1 + self.beta2 * self.beta2
    }

    pub fn amplitude(&self, mode: usize) -> f64 {
        match mode {
            0 => self.beta0,
            1 => self.beta1,
            2 => self.beta2,
            _ => panic!("mode index out of range: {mode}"),
        }
    }
}

/// Beam-splitter rotation on one mode pair; the third mode is untouched.
///
/// (β_a, β_b) ↦ (β_a cosθ − β_b sinθ, β_a sinθ + β_b cosθ), which is the
/// amplitude image of a_a† → a_a† cosθ + a_b† sinθ,
/// a_b† → a_b† cosθ − a_a† sinθ. cos²θ is the reflectivity.
pub fn beam_splitter_apply(state: ModeAmplitudes, pair: ModePair, theta: f64) -> ModeAmplitudes {
    let (c, s) = (theta.cos(), theta.sin());
    match pair {
        ModePair::ZeroOne => ModeAmplitudes::new(
            state.beta0 * c - state.beta1 * s,
            state.beta0 * s + state.beta1 * c,
            state.beta2,
        ),
        ModePair::OneTwo => ModeAmplitudes::new(
            state.beta0,
            state.beta1 * c - state.beta2 * s,
            state.beta1 * s + state.beta2 * c,
        ),
    }
}

/// Vacuum projection of one mode by an ideal vacuum / non-vacuum detector.
///
/// Returns the projected (unnormalized) triple and the squared amplitude
/// removed from it. The leaked weight is the per-photon detection
/// probability at this point; survival factors are assembled by the caller
/// because they depend on the photon statistics (e.g. exp(−|α|²·leak) for a
/// coherent input).
pub fn collapse_vacuum(state: ModeAmplitudes, mode: usize) -> (ModeAmplitudes, f64) {
    let leaked = state.amplitude(mode).powi(2);
    let mut out = state;
    match mode {
        0 => out.beta0 = 0.0,
        1 => out.beta1 = 0.0,
        2 => out.beta2 = 0.0,
        _ => panic!("mode index out of range: {mode}"),
    }
    (out, leaked)
}

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("mean photon number must be finite and nonnegative, got {0}")]
    BadMean(f64),
    #[error("arbitrary weights must be nonnegative, got {value} at index {index}")]
    NegativeWeight { index: usize, value: f64 },
    #[error("arbitrary weights must sum to 1 within 1e-12, got {0}")]
    NotNormalized(f64),
    #[error("arbitrary weights must be nonempty")]
    Empty,
}

/// Photon-number statistics of the source.
///
/// A coherent input is described by its mean photon number |α|² alone: the
/// beam-splitter map is a real rotation and no relative phase ever appears,
/// so a complex α is reduced to |α| up front.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PhotonStatistics {
    /// Definite photon number v.
    Fock(u32),
    /// Poissonian statistics with mean |α|².
    Coherent { mean_photons: f64 },
    /// Explicit weights w_v = |c_v|², v = 0..len-1, summing to one.
    Arbitrary { weights: Vec<f64> },
}

impl PhotonStatistics {
    pub fn coherent(mean_photons: f64) -> Result<Self, StatsError> {
        if !mean_photons.is_finite() || mean_photons < 0.0 {
            return Err(StatsError::BadMean(mean_photons));
        }
        Ok(Self::Coherent { mean_photons })
    }

    pub fn arbitrary(weights: Vec<f64>) -> Result<Self, StatsError> {
        if weights.is_empty() {
            return Err(StatsError::Empty);
        }
        for (index, &value) in weights.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(StatsError::NegativeWeight { index, value });
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(StatsError::NotNormalized(total));
        }
        Ok(Self::Arbitrary { weights })
    }

    /// Mean photon number v̄ of the source.
    pub fn mean_photons(&self) -> f64 {
        match self {
            Self::Fock(v) => f64::from(*v),
            Self::Coherent { mean_photons } => *mean_photons,
            Self::Arbitrary { weights } => {
                weights.iter().enumerate().map(|(v, w)| v as f64 * w).sum()
            }
        }
    }

    /// Weight of the vacuum component |c₀|².
    pub fn vacuum_weight(&self) -> f64 {
        match self {
            Self::Fock(v) => {
                if *v == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Coherent { mean_photons } => (-mean_photons).exp(),
            Self::Arbitrary { weights } => weights[0],
        }
    }
}

/// Finite head of a photon-number distribution, cut where the remaining
/// states stop contributing to the mean photon number.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedStatistics {
    /// Source weights for v = 0..=cutoff, not renormalized.
    pub weights: Vec<f64>,
    pub cutoff: usize,
    /// Photon-weighted residual Σ_{v>cutoff} w_v · v.
    pub tail_mass: f64,
}

/// Default photon-weighted tail mass for truncation.
pub const DEFAULT_TRUNCATION_EPSILON: f64 = 1e-12;

/// Smallest cutoff v_c with Σ_{v>v_c} w_v · v < ε.
///
/// A Fock state truncates to itself; a coherent state walks the Poisson mass
/// function until the photon-weighted tail drops below ε.
pub fn truncate_statistics(stats: &PhotonStatistics, epsilon: f64) -> TruncatedStatistics {
    assert!(epsilon > 0.0, "truncation epsilon must be positive");
    match stats {
        PhotonStatistics::Fock(v) => {
            let v = *v as usize;
            let mut weights = vec![0.0; v + 1];
            weights[v] = 1.0;
            TruncatedStatistics {
                weights,
                cutoff: v,
                tail_mass: 0.0,
            }
        }
        PhotonStatistics::Coherent { mean_photons } => truncate_poisson(*mean_photons, epsilon),
        PhotonStatistics::Arbitrary { weights } => {
            // Photon-weighted tail of the explicit list, scanned from the end.
            let mut tail = 0.0;
            let mut cutoff = weights.len() - 1;
            for v in (0..weights.len()).rev() {
                let with_v = tail + weights[v] * v as f64;
                if with_v < epsilon {
                    tail = with_v;
                    cutoff = v.saturating_sub(1);
                } else {
                    break;
                }
            }
            // cutoff bottoms out at 0; the v=0 term never carries mean photons.
            TruncatedStatistics {
                weights: weights[..=cutoff].to_vec(),
                cutoff,
                tail_mass: tail,
            }
        }
    }
}

fn truncate_poisson(mean: f64, epsilon: f64) -> TruncatedStatistics {
    if mean == 0.0 {
        return TruncatedStatistics {
            weights: vec![1.0],
            cutoff: 0,
            tail_mass: 0.0,
        };
    }
    // Σ_{v>v_c} w_v·v = mean · P(X ≥ v_c) for Poissonian X, so walk the CDF.
    let mut weights = Vec::new();
    let mut pmf = (-mean).exp();
    let mut cdf_prev = 0.0; // Σ_{u <= v_c - 1} pmf(u)
    let mut v = 0usize;
    loop {
        // tail mass for cutoff = v uses the CDF up to v-1
        let tail = mean * (1.0 - cdf_prev);
        weights.push(pmf);
        if tail < epsilon {
            return TruncatedStatistics {
                weights,
                cutoff: v,
                tail_mass: tail,
            };
        }
        cdf_prev += pmf;
        v += 1;
        pmf *= mean / v as f64;
        assert!(v < 100_000, "Poisson truncation runaway at mean {mean}");
    }
}

impl TruncatedStatistics {
    /// Mean photon number of the kept head.
    pub fn mean_photons(&self) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(v, w)| v as f64 * w)
            .sum()
    }
}
