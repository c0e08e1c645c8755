//! Cross-module consistency: the amplitude-level engine against the dense
//! Fock-space simulator on sources beyond pure Fock states, occupancy
//! bookkeeping between the two, and probability accounting over randomized
//! configurations.

use cfcomm::oracle::fock_simulate;
use cfcomm::states::PhotonStatistics;
use cfcomm::{run, ProtocolParams, Signal};
use proptest::prelude::*;

fn all_params(outer: u32, inner: u32, cutoff: u32, signal: Signal) -> Vec<ProtocolParams> {
    vec![
        ProtocolParams::slaz(outer, inner, signal).unwrap(),
        ProtocolParams::modified(outer, inner, cutoff, signal).unwrap(),
    ]
}

#[test]
fn engine_matches_dense_oracle_for_mixed_sources() {
    let sources = [
        PhotonStatistics::coherent(1.5).unwrap(),
        PhotonStatistics::arbitrary(vec![0.1, 0.2, 0.4, 0.2, 0.1]).unwrap(),
    ];
    for stats in &sources {
        for signal in [Signal::Zero, Signal::One] {
            for params in all_params(5, 4, 2, signal) {
                let dense = fock_simulate(&params, stats, 18).unwrap();
                let fast = run(&params, stats);
                let tol = 1e-8 + dense.truncation_error * 10.0;
                for (a, b) in [
                    (dense.outcome.prob_only_d0, fast.prob_only_d0),
                    (dense.outcome.prob_only_d1, fast.prob_only_d1),
                    (dense.outcome.p_counterfactual(), fast.p_counterfactual()),
                    (dense.outcome.f_click, fast.f_click),
                    (dense.outcome.prob_other, fast.prob_other),
                ] {
                    assert!(
                        (a - b).abs() <= tol,
                        "{a} vs {b} at {params:?} for {stats:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn occupancy_peaks_agree_between_routes() {
    // The engine reads its peak from per-chain closed forms, the dense
    // simulator measures mean photon number after every beam splitter.
    let stats = PhotonStatistics::coherent(2.0).unwrap();
    for signal in [Signal::Zero, Signal::One] {
        for params in all_params(6, 5, 3, signal) {
            let dense = fock_simulate(&params, &stats, 20).unwrap();
            let fast = run(&params, &stats);
            assert!(
                (dense.outcome.max_channel_occupancy - fast.max_channel_occupancy).abs() <= 1e-8,
                "occupancy {} vs {} at {params:?}",
                dense.outcome.max_channel_occupancy,
                fast.max_channel_occupancy
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outcome_masses_account_for_everything(
        outer in 2u32..40,
        inner in 1u32..60,
        cutoff_seed in 1u32..40,
        mean in 0.0f64..30.0,
        signal_bit in 0u8..2,
        modified in proptest::bool::ANY,
    ) {
        let signal = if signal_bit == 0 { Signal::Zero } else { Signal::One };
        let params = if modified {
            ProtocolParams::modified(outer, inner, cutoff_seed.min(outer), signal).unwrap()
        } else {
            ProtocolParams::slaz(outer, inner, signal).unwrap()
        };
        let stats = PhotonStatistics::coherent(mean).unwrap();
        let out = run(&params, &stats);
        let total = out.prob_only_d0 + out.prob_only_d1 + out.prob_leak + out.prob_other;
        prop_assert!((total - 1.0).abs() < 1e-10, "mass {total}");
        for p in [out.prob_only_d0, out.prob_only_d1, out.prob_leak, out.prob_other, out.f_click] {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p), "probability {p} out of range");
        }
        prop_assert!(out.ln_p_counterfactual <= 1e-12);
    }

    #[test]
    fn fock_runs_account_for_everything(
        outer in 2u32..30,
        inner in 1u32..40,
        v in 0u32..6,
        signal_bit in 0u8..2,
    ) {
        let signal = if signal_bit == 0 { Signal::Zero } else { Signal::One };
        let params = ProtocolParams::slaz(outer, inner, signal).unwrap();
        let out = run(&params, &PhotonStatistics::Fock(v));
        let total = out.prob_only_d0 + out.prob_only_d1 + out.prob_leak + out.prob_other;
        prop_assert!((total - 1.0).abs() < 1e-10, "mass {total}");
    }
}
