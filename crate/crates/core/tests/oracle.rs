//! End-to-end oracle sweeps: the analytic layer against the truncated
//! number-basis engine on instances up to the sizes the closed forms are
//! relied on for.

use scw_repeater::fock::verify::{
    all_passed, default_suite, verify_detection, verify_link_probs, verify_swap, verify_teleport,
};
use scw_repeater::fock::{
    beam_splitter_apply, cat_fock, entangled_cat_fock, project_mode, tensor, FockVector,
};
use scw_repeater::herald::{LinkConfig, Parity};
use scw_repeater::link::{outcome_probs, PairSymmetry};
use scw_repeater::modes::CatSymmetry;
use scw_repeater::photodetect::RelayStateLabel;
use scw_repeater::swap::{LinkState, SwapConfig};
use scw_repeater::teleport::{Detector, TeleportConfig};
use scw_repeater::Complex;

#[test]
fn default_suite_is_green() {
    let reports = default_suite().unwrap();
    assert!(reports.len() > 40);
    for r in &reports {
        assert!(r.passed, "{r:#?}");
    }
}

#[test]
fn link_oracle_up_to_two_photons() {
    for pair in [
        PairSymmetry::ODD_ODD,
        PairSymmetry::EVEN_EVEN,
        PairSymmetry::CROSS,
    ] {
        for &(r, a) in &[(0.2, 2.0), (0.5, 2.0), (0.8, 1.3), (0.35, 0.1)] {
            let reports = verify_link_probs(pair, r, a).unwrap();
            assert!(all_passed(&reports), "{reports:#?}");
        }
    }
}

#[test]
fn detection_oracle_across_regimes() {
    for state in [RelayStateLabel::MinusCat, RelayStateLabel::PlusCat] {
        for &(n, eta, xi) in &[(0.2, 0.9, 0.95), (1.0, 0.6, 0.7), (2.0, 0.95, 0.9)] {
            let reports = verify_detection(state, n, eta, xi).unwrap();
            assert!(all_passed(&reports), "{reports:#?}");
        }
    }
}

#[test]
fn swap_oracle_at_unit_node_photon_number() {
    // r_bs = 0.2, a = 0.625 puts the full node photon number at 1.0
    let link = LinkConfig::new(0.625, 0.2, 0.95, 0.9).unwrap();
    let cfg = SwapConfig::new(link, 0.85).unwrap();
    let mixed = LinkState::new(0.65, 0.35).unwrap();
    for parity in [Parity::Even, Parity::Odd] {
        for other in [LinkState::PURE_PLUS, mixed] {
            let reports = verify_swap(&mixed, &other, parity, &cfg).unwrap();
            assert!(all_passed(&reports), "{reports:#?}");
        }
    }
}

#[test]
fn teleport_oracle_across_conventions() {
    for nu in [CatSymmetry::Even, CatSymmetry::Odd] {
        for det in [Detector::D1, Detector::D2] {
            for mu in [-1, 0, 2] {
                let cfg = TeleportConfig::new(0.3, 0.25, 0.35, 0.7, -0.2, nu, 0.9, mu, det)
                    .unwrap();
                let reports = verify_teleport(&cfg).unwrap();
                assert!(all_passed(&reports), "{reports:#?}");
            }
        }
    }
}

#[test]
fn link_oracle_is_cutoff_stable() {
    // recompute one outcome probability with hand-picked cutoffs well above
    // the automatic choice; the result must not move
    let (r, a) = (0.3, 1.0f64);
    let amp_qm = ((1.0 - r) * a).sqrt();
    let amp_bs = (r * a).sqrt();
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let mut values = Vec::new();
    for (cut_qm, cut_bs) in [(16usize, 20usize), (24, 30)] {
        let real = |x: f64| Complex::new(x, 0.0);
        let alice =
            entangled_cat_fock(real(amp_qm), real(amp_bs), CatSymmetry::Odd, cut_qm, cut_bs)
                .unwrap();
        let bob = alice.clone();
        let joint = tensor(&alice, &bob).unwrap();
        let mixed = beam_splitter_apply(&joint, 1, 3, half, half, 1e-9).unwrap();
        let dark = project_mode(&mixed, 3, &FockVector::vacuum(cut_bs)).unwrap();
        let target = cat_fock(
            real(2.0f64.sqrt() * amp_bs),
            CatSymmetry::Odd,
            false,
            cut_bs,
        )
        .unwrap();
        values.push(project_mode(&dark, 1, &target).unwrap().norm_sqr());
    }
    assert!((values[0] - values[1]).abs() < 1e-10, "{values:?}");
    let analytic = outcome_probs(PairSymmetry::ODD_ODD, r, a).unwrap();
    assert!((values[1] - analytic.p_minus).abs() < 1e-10);
}
