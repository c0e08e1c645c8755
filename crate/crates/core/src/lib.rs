//! Exact simulation and design toolkit for direct counterfactual
//! communication through double chained Mach-Zehnder interferometers with
//! multiphoton sources.
//!
//! Bob's one-bit signal is encoded in whether his blocking detector sits in
//! the public channel; repeated vacuum projections then steer Alice's
//! photons — Fock, coherent or arbitrary statistics — without any photon
//! occupying the channel in a successful run. The crate provides:
//!
//! * [`states`] — amplitude triples over the three zones, beam-splitter and
//!   vacuum-projection primitives, photon statistics and truncation;
//! * [`engine`] — exact outcome probabilities for the standard chained
//!   scheme and the truncated (modified) scheme, plus channel-occupancy
//!   profiles;
//! * [`analytic`] — every closed-form approximation: final amplitudes, loss
//!   coefficients, success probabilities, resource-count identities and
//!   design inversions;
//! * [`optimizer`] — minimum total-cycle-number searches (analytic scan,
//!   exact integer search, single-photon baseline);
//! * [`oracle`] — a dense Fock-space simulator and a Monte Carlo click
//!   sampler that verify the engine independently.

pub mod analytic;
pub mod engine;
mod numeric;
pub mod optimizer;
pub mod oracle;
pub mod states;

pub use engine::{run, ProtocolParams, RunOutcome, Scheme, Signal};
pub use states::{ModeAmplitudes, PhotonStatistics};
