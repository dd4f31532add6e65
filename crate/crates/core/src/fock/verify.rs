//! Oracle drivers comparing the analytic closed forms against direct
//! truncated-basis computations. Each driver builds the relevant joint
//! state explicitly, applies the optical elements and measurements as
//! linear algebra, and reports the analytic and numeric values side by
//! side with a per-quantity gate.

use super::{
    beam_splitter_apply, cat_fock, coherent_fock, conditional_density, count_weights,
    entangled_cat_fock, lossy_detector_prob, loss_stinespring, mode_outcome_prob, parity_weights,
    project_mode, tensor, FockVector,
};
use crate::error::Result;
use crate::herald::Parity;
use crate::link::{outcome_probs, PairSymmetry};
use crate::modes::{bessel_j, CatSymmetry, ModulatorSettings};
use crate::photodetect::{
    parity_prob, photocount_prob, ChannelParams, ClickParity, DetectorParams, RelayStateLabel,
};
use crate::swap::{swap_fidelity, swap_success, LinkState, SwapConfig};
use crate::teleport::{teleport_outcome, Detector, TeleportConfig};
use crate::Complex;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;
const BS_TAIL_TOL: f64 = 1e-9;
/// Gate for probability comparisons.
pub const PROB_TOL: f64 = 1e-8;
/// Gate for heralded-fidelity comparisons.
pub const FIDELITY_TOL: f64 = 5e-3;

/// One analytic-versus-numeric comparison.
#[derive(Debug, Clone, serde::Serialize)]
pub struct OracleReport {
    pub quantity: String,
    pub analytic: f64,
    pub oracle: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Largest single-mode cutoff used by the numeric route.
    pub cutoff: usize,
}

fn report(quantity: String, analytic: f64, oracle: f64, tolerance: f64, cutoff: usize) -> OracleReport {
    let abs_diff = (analytic - oracle).abs();
    OracleReport {
        quantity,
        analytic,
        oracle,
        abs_diff,
        tolerance,
        passed: abs_diff <= tolerance,
        cutoff,
    }
}

/// True when every report in the slice is within its gate.
pub fn all_passed(reports: &[OracleReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

/// Cutoff with a Poisson tail far below the probability gate.
fn oracle_cutoff(mean_photons: f64) -> usize {
    (mean_photons + 7.0 * mean_photons.max(0.4).sqrt() + 9.0).ceil() as usize
}

fn real(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// Compares the three relay outcome probabilities of one generation attempt
/// against a four-mode simulation of the split cats and the relay beam
/// splitter.
pub fn verify_link_probs(pair: PairSymmetry, r_bs: f64, a: f64) -> Result<Vec<OracleReport>> {
    let analytic = outcome_probs(pair, r_bs, a)?;
    let amp_qm = ((1.0 - r_bs) * a).sqrt();
    let amp_bs = (r_bs * a).sqrt();
    let cut_qm = oracle_cutoff(amp_qm * amp_qm);
    let cut_bs = oracle_cutoff(2.0 * r_bs * a);

    let alice = entangled_cat_fock(real(amp_qm), real(amp_bs), pair.alice, cut_qm, cut_bs)?;
    let bob = entangled_cat_fock(real(amp_qm), real(amp_bs), pair.bob, cut_qm, cut_bs)?;
    // modes [A_qm, A_relay, B_qm, B_relay]
    let joint = tensor(&alice, &bob)?;
    let mixed = beam_splitter_apply(&joint, 1, 3, SQRT_HALF, SQRT_HALF, BS_TAIL_TOL)?;

    let relay_amp = real(2.0f64.sqrt() * amp_bs);
    let vac = FockVector::vacuum(cut_bs);
    let dark_port = project_mode(&mixed, 3, &vac)?;
    let numeric = |target: &FockVector| -> Result<f64> {
        Ok(project_mode(&dark_port, 1, target)?.norm_sqr())
    };
    // the outcome label mu names the heralded entangled symmetry; the
    // relay cat parity detected for it is the sign product nu' nu mu
    let odd_projection = numeric(&cat_fock(relay_amp, CatSymmetry::Odd, false, cut_bs)?)?;
    let even_projection = numeric(&cat_fock(relay_amp, CatSymmetry::Even, true, cut_bs)?)?;
    let (p_minus, p_plus) = if pair.is_cross() {
        (even_projection, odd_projection)
    } else {
        (odd_projection, even_projection)
    };
    let p_vac = numeric(&vac)?;

    let tag = format!(
        "link outcome, pair ({:?}, {:?}), r = {r_bs}, a = {a}",
        pair.alice, pair.bob
    );
    Ok(vec![
        report(format!("{tag}: p_minus"), analytic.p_minus, p_minus, PROB_TOL, cut_bs),
        report(format!("{tag}: p_plus"), analytic.p_plus, p_plus, PROB_TOL, cut_bs),
        report(format!("{tag}: p_vac"), analytic.p_vac, p_vac, PROB_TOL, cut_bs),
    ])
}

/// Compares click statistics of a lossy detector on a relay cat against
/// both numeric routes: the folded diagonal POVM and an explicit
/// environment-mode dilation of the loss channel.
pub fn verify_detection(
    state: RelayStateLabel,
    n_total: f64,
    eta: f64,
    xi: f64,
) -> Result<Vec<OracleReport>> {
    let channel = ChannelParams::new(eta)?;
    let det = DetectorParams::new(xi)?;
    let cutoff = oracle_cutoff(n_total);
    let (symmetry, modified) = match state {
        RelayStateLabel::PlusCat => (CatSymmetry::Even, true),
        RelayStateLabel::MinusCat => (CatSymmetry::Odd, false),
        RelayStateLabel::Vacuum => {
            return Err(crate::error::Error::InvalidArgument(
                "vacuum relay statistics are trivial".into(),
            ))
        }
    };
    let cat = cat_fock(real(n_total.sqrt()), symmetry, modified, cutoff)?;
    let dilated = loss_stinespring(&cat, eta, cutoff)?;

    let mut reports = Vec::new();
    let tag = format!("detection on {state:?}, n = {n_total}, eta = {eta}, xi = {xi}");
    for parity in [ClickParity::NoClick, ClickParity::Even, ClickParity::Odd] {
        let analytic = parity_prob(parity, state, n_total, channel, det)?;
        let folded = cat
            .photon_distribution()
            .iter()
            .zip(&parity_weights(cutoff, parity, eta * xi)?)
            .map(|(p, w)| p * w)
            .sum::<f64>();
        let dilated_prob = mode_outcome_prob(&dilated, 0, &parity_weights(cutoff, parity, xi)?)?;
        reports.push(report(
            format!("{tag}: {parity:?} via folded efficiency"),
            analytic,
            folded,
            PROB_TOL,
            cutoff,
        ));
        reports.push(report(
            format!("{tag}: {parity:?} via environment dilation"),
            analytic,
            dilated_prob,
            PROB_TOL,
            cutoff,
        ));
    }
    for k in 1..=4usize {
        let analytic = photocount_prob(k, state, n_total, channel, det)?;
        let folded = lossy_detector_prob(&cat, k, eta * xi)?;
        let dilated_prob = mode_outcome_prob(&dilated, 0, &count_weights(cutoff, k, xi)?)?;
        reports.push(report(
            format!("{tag}: {k} clicks via folded efficiency"),
            analytic,
            folded,
            PROB_TOL,
            cutoff,
        ));
        reports.push(report(
            format!("{tag}: {k} clicks via environment dilation"),
            analytic,
            dilated_prob,
            PROB_TOL,
            cutoff,
        ));
    }
    Ok(reports)
}

/// Compares node success probability and fused fidelities for mixed
/// incoming links against a four-mode simulation of the node beam splitter
/// and its parity detector.
pub fn verify_swap(
    link1: &LinkState,
    link2: &LinkState,
    parity: Parity,
    cfg: &SwapConfig,
) -> Result<Vec<OracleReport>> {
    let (_, zeta_m, a_node) = cfg.node_params();
    // memory loss commutes with the balanced coupler and folds into the
    // detector efficiency, also for the conditional state
    let xi_eff = 2.0 * zeta_m;
    let amp = (a_node / 2.0).sqrt();
    let cut_qm = oracle_cutoff(amp * amp);
    let cut_bs = oracle_cutoff(a_node);
    let kept_dim = cut_qm + 1;

    let target = |mu: CatSymmetry| entangled_cat_fock(real(amp), real(amp), mu, cut_qm, cut_qm);
    let target_plus = target(CatSymmetry::Even)?;
    let target_minus = target(CatSymmetry::Odd)?;
    debug_assert_eq!(target_plus.coeffs().len(), kept_dim * kept_dim);

    let click_weights = parity_weights(cut_bs, parity.to_click(), xi_eff)?;
    let trace_weights = vec![1.0; cut_bs + 1];

    let components = [CatSymmetry::Even, CatSymmetry::Odd];
    let weight = |state: &LinkState, mu: CatSymmetry| match mu {
        CatSymmetry::Even => state.f_plus,
        CatSymmetry::Odd => state.f_minus,
    };
    let mut p_mixed = 0.0;
    let mut num_plus = 0.0;
    let mut num_minus = 0.0;
    for mu1 in components {
        for mu2 in components {
            let w = weight(link1, mu1) * weight(link2, mu2);
            let left = entangled_cat_fock(real(amp), real(amp), mu1, cut_qm, cut_bs)?;
            let right = entangled_cat_fock(real(amp), real(amp), mu2, cut_bs, cut_qm)?;
            // modes [outer 1, node arm 1, node arm 2, outer 2]
            let joint = tensor(&left, &right)?;
            let mixed = beam_splitter_apply(&joint, 1, 2, SQRT_HALF, SQRT_HALF, BS_TAIL_TOL)?;
            let rho = conditional_density(
                &mixed,
                &[(1, click_weights.clone()), (2, trace_weights.clone())],
            )?;
            p_mixed += w * rho.prob;
            if rho.prob > 0.0 {
                num_plus += w * rho.prob * rho.fidelity_to(&target_plus)?;
                num_minus += w * rho.prob * rho.fidelity_to(&target_minus)?;
            }
        }
    }

    let analytic_p = swap_success(link1, link2, parity, cfg)?;
    let (analytic_fp, analytic_fm) = swap_fidelity(link1, link2, parity, cfg)?;
    let tag = format!(
        "swap, {parity:?} clicks, links ({}, {}) x ({}, {})",
        link1.f_plus, link1.f_minus, link2.f_plus, link2.f_minus
    );
    Ok(vec![
        report(format!("{tag}: success probability"), analytic_p, p_mixed, PROB_TOL, cut_bs),
        report(
            format!("{tag}: fused f_plus"),
            analytic_fp,
            num_plus / p_mixed,
            PROB_TOL,
            cut_bs,
        ),
        report(
            format!("{tag}: fused f_minus"),
            analytic_fm,
            num_minus / p_mixed,
            PROB_TOL,
            cut_bs,
        ),
    ])
}

/// Gram-matrix inner product on the nonorthogonal {|b>, |-b>} pair.
fn cat_pair_inner(a: (Complex, Complex), b: (Complex, Complex), overlap: f64) -> Complex {
    a.0.conj() * b.0 + a.1.conj() * b.1 + (a.0.conj() * b.1 + a.1.conj() * b.0) * overlap
}

/// Compares the heralded teleportation outcome against a sideband-resolved
/// number-basis computation. The exact route projects on a single photon in
/// the chosen sideband with vacuum everywhere else; the threshold route
/// models a click detector that cannot resolve photon number and is
/// reported as a diagnostic of the single-photon truncation.
pub fn verify_teleport(cfg: &TeleportConfig) -> Result<Vec<OracleReport>> {
    let outcome = teleport_outcome(cfg)?;
    let sideband_cut = ModulatorSettings::auto_cutoff(cfg.m);
    let overlap = (-2.0 * cfg.beta_mag * cfg.beta_mag).exp();
    let a2 = cfg.alpha_mag * cfg.alpha_mag;
    let b2 = cfg.beta_mag * cfg.beta_mag;
    let nu = cfg.nu.sign();
    let shared_norm = 2.0 * (1.0 + nu * (-2.0 * (a2 + b2)).exp());

    const MAX_CLICKS: usize = 8;
    // per-branch heralding amplitudes: index 0 holds the entanglement
    // branch with +alpha at Alice, index 1 the sign-flipped branch
    let mut spectator = [Complex::new(1.0, 0.0); 2];
    let mut heralded: Vec<Vec<Complex>> = vec![Vec::new(); 2];
    let mut cutoff_used = 0;
    for (branch, s) in [1.0f64, -1.0].into_iter().enumerate() {
        for mu in -sideband_cut..=sideband_cut {
            let j = bessel_j(mu, cfg.m);
            let g = Complex::from_polar(cfg.gamma_mag * j, mu as f64 * cfg.phi_c);
            let al = Complex::from_polar(cfg.alpha_mag * j, mu as f64 * cfg.phi_a);
            let d1 = (g + s * al) * SQRT_HALF;
            let d2 = (g - s * al) * SQRT_HALF;
            let cut = oracle_cutoff(d1.norm_sqr().max(d2.norm_sqr())).max(MAX_CLICKS);
            cutoff_used = cutoff_used.max(cut);
            let v1 = coherent_fock(d1, cut)?;
            let v2 = coherent_fock(d2, cut)?;
            let (fired, idle) = match cfg.detector {
                Detector::D1 => (&v1, &v2),
                Detector::D2 => (&v2, &v1),
            };
            if mu == cfg.mu {
                spectator[branch] *= idle.coeffs[0];
                heralded[branch] = fired.coeffs[..=MAX_CLICKS].to_vec();
            } else {
                spectator[branch] *= v1.coeffs[0] * v2.coeffs[0];
            }
        }
    }
    let pair_for = |k: usize| -> (Complex, Complex) {
        (
            spectator[0] * heralded[0][k] / shared_norm.sqrt(),
            nu * spectator[1] * heralded[1][k] / shared_norm.sqrt(),
        )
    };

    let exact = pair_for(1);
    let p_oracle = cat_pair_inner(exact, exact, overlap).re;
    let bob = (outcome.bob.c_plus, outcome.bob.c_minus);
    let fid_exact = cat_pair_inner(bob, exact, overlap).norm_sqr() / p_oracle;

    let mut trace = 0.0;
    let mut matched = 0.0;
    for k in 1..=MAX_CLICKS {
        let pair = pair_for(k);
        trace += cat_pair_inner(pair, pair, overlap).re;
        matched += cat_pair_inner(bob, pair, overlap).norm_sqr();
    }
    let fid_click = matched / trace;

    let tag = format!(
        "teleport, {:?} sideband {} at amp ({}, {}, {})",
        cfg.detector, cfg.mu, cfg.gamma_mag, cfg.alpha_mag, cfg.beta_mag
    );
    Ok(vec![
        report(
            format!("{tag}: sideband heralding probability"),
            outcome.p_sideband,
            p_oracle,
            PROB_TOL,
            cutoff_used,
        ),
        report(
            format!("{tag}: heralded fidelity, single-photon projection"),
            1.0,
            fid_exact,
            FIDELITY_TOL,
            cutoff_used,
        ),
        report(
            format!("{tag}: heralded fidelity, threshold-click diagnostic"),
            1.0,
            fid_click,
            FIDELITY_TOL,
            cutoff_used,
        ),
    ])
}

/// Standard verification sweep used by the command-line `verify` run.
pub fn default_suite() -> Result<Vec<OracleReport>> {
    let mut reports = Vec::new();
    for pair in [
        PairSymmetry::ODD_ODD,
        PairSymmetry::EVEN_EVEN,
        PairSymmetry::CROSS,
    ] {
        for &(r_bs, a) in &[(0.2, 1.0), (0.5, 2.0), (0.7, 0.5)] {
            reports.extend(verify_link_probs(pair, r_bs, a)?);
        }
    }
    for state in [RelayStateLabel::MinusCat, RelayStateLabel::PlusCat] {
        reports.extend(verify_detection(state, 1.0, 0.8, 0.9)?);
        reports.extend(verify_detection(state, 2.0, 0.95, 0.9)?);
    }
    let link = crate::herald::LinkConfig::new(0.5, 0.2, 0.95, 0.9)?;
    let cfg = SwapConfig::new(link, 0.8)?;
    let link1 = LinkState::new(0.7, 0.3)?;
    let link2 = LinkState::new(0.6, 0.4)?;
    for parity in [Parity::Odd, Parity::Even] {
        reports.extend(verify_swap(&link1, &link2, parity, &cfg)?);
    }
    let symmetric = TeleportConfig::symmetric(
        0.2,
        0.9,
        0.3,
        CatSymmetry::Even,
        0.6,
        1,
        Detector::D1,
    )?;
    reports.extend(verify_teleport(&symmetric)?);
    let general = TeleportConfig::new(
        0.4,
        0.2,
        0.3,
        1.2,
        -0.4,
        CatSymmetry::Odd,
        0.8,
        -1,
        Detector::D2,
    )?;
    reports.extend(verify_teleport(&general)?);
    Ok(reports)
}
