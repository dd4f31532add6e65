//! Phase teleportation over the shared entangled cat state.
//!
//! Charlie encodes a phase into his modulated multimode coherent state,
//! Alice re-modulates her share of the entanglement and interferes it with
//! Charlie's state on a balanced beam splitter. A single photon found in a
//! chosen sideband behind either output heralds a conditional coherent-state
//! superposition at Bob carrying Charlie's phase.

use crate::error::{Error, Result};
use crate::modes::{bessel_j, CatSymmetry};
use crate::Complex;

/// Which heralding detector fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Detector {
    D1,
    D2,
}

/// Teleportation instance parameters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TeleportConfig {
    /// Charlie's carrier amplitude magnitude.
    pub gamma_mag: f64,
    /// Alice's share of the entangled amplitude.
    pub alpha_mag: f64,
    /// Bob's stored amplitude magnitude.
    pub beta_mag: f64,
    /// Charlie's modulation phase, radians.
    pub phi_c: f64,
    /// Alice's modulation phase, radians.
    pub phi_a: f64,
    /// Symmetry of the shared entangled state.
    pub nu: CatSymmetry,
    /// Modulation index, common to Charlie and Alice.
    pub m: f64,
    /// Heralding sideband index.
    pub mu: i32,
    pub detector: Detector,
}

impl TeleportConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        gamma_mag: f64,
        alpha_mag: f64,
        beta_mag: f64,
        phi_c: f64,
        phi_a: f64,
        nu: CatSymmetry,
        m: f64,
        mu: i32,
        detector: Detector,
    ) -> Result<Self> {
        for (name, v) in [
            ("gamma", gamma_mag),
            ("alpha", alpha_mag),
            ("beta", beta_mag),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "{name} magnitude must be finite and nonnegative, got {v}"
                )));
            }
        }
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "modulation index must be finite and nonnegative, got {m}"
            )));
        }
        Ok(Self {
            gamma_mag,
            alpha_mag,
            beta_mag,
            phi_c,
            phi_a,
            nu,
            m,
            mu,
            detector,
        })
    }

    /// Symmetric configuration with equal amplitudes everywhere.
    pub fn symmetric(
        amp: f64,
        phi_c: f64,
        phi_a: f64,
        nu: CatSymmetry,
        m: f64,
        mu: i32,
        detector: Detector,
    ) -> Result<Self> {
        Self::new(amp, amp, amp, phi_c, phi_a, nu, m, mu, detector)
    }
}

/// Bob's conditional state as coefficients on the nonorthogonal pair
/// {|beta>, |-beta>}.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BobState {
    pub c_plus: Complex,
    pub c_minus: Complex,
    /// Magnitude of Bob's stored amplitude.
    pub beta_mag: f64,
    pub normalized: bool,
}

impl BobState {
    /// Squared norm accounting for the coherent-state overlap
    /// <beta|-beta> = exp(-2 beta^2).
    pub fn norm_sq(&self) -> f64 {
        let overlap = (-2.0 * self.beta_mag * self.beta_mag).exp();
        self.c_plus.norm_sqr()
            + self.c_minus.norm_sqr()
            + 2.0 * (self.c_plus.conj() * self.c_minus).re * overlap
    }

    /// Overlap of this state with the coherent state |target>.
    pub fn overlap_with_coherent(&self, target: Complex) -> Complex {
        let b = Complex::new(self.beta_mag, 0.0);
        let inner = |t: Complex, s: Complex| -> Complex {
            ((t.conj() * s) - (t.norm_sqr() + s.norm_sqr()) / 2.0).exp()
        };
        self.c_plus * inner(target, b) + self.c_minus * inner(target, -b)
    }

    /// Fidelity to the coherent state |target>.
    pub fn fidelity_to_coherent(&self, target: Complex) -> f64 {
        self.overlap_with_coherent(target).norm_sqr()
    }
}

/// Heralded outcome of one teleportation run.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TeleportOutcome {
    pub bob: BobState,
    /// Probability of a single photon in the chosen sideband.
    pub p_sideband: f64,
    /// Sideband-independent success factor.
    pub p_total: f64,
    /// Cleared when the amplitude leaves the single-photon truncation
    /// regime the closed forms assume.
    pub in_validity_regime: bool,
}

fn raw_coefficients(cfg: &TeleportConfig) -> (Complex, Complex) {
    let mu = cfg.mu as f64;
    let g = Complex::from_polar(cfg.gamma_mag, mu * cfg.phi_c);
    let a = Complex::from_polar(cfg.alpha_mag, mu * cfg.phi_a);
    let nu = cfg.nu.sign();
    match cfg.detector {
        Detector::D1 => (g + a, nu * (g - a)),
        // the second detector heralds the same state with beta negated,
        // which swaps the coefficient roles up to a global sign
        Detector::D2 => (g - a, nu * (g + a)),
    }
}

/// Sideband-independent heralding probability.
fn success_factor(cfg: &TeleportConfig) -> Result<f64> {
    let g2 = cfg.gamma_mag * cfg.gamma_mag;
    let a2 = cfg.alpha_mag * cfg.alpha_mag;
    let b2 = cfg.beta_mag * cfg.beta_mag;
    let nu = cfg.nu.sign();
    let shared_norm = 1.0 + nu * (-2.0 * (a2 + b2)).exp();
    if shared_norm <= 0.0 {
        return Err(Error::Degenerate(
            "antisymmetric shared state with vanishing amplitudes".into(),
        ));
    }
    let num = g2 + a2 + nu * (g2 - a2) * (-2.0 * b2).exp();
    Ok((num * (-(a2 + g2)).exp() / (2.0 * shared_norm)).max(0.0))
}

/// Full heralded outcome: Bob's normalized state with a canonical global
/// phase, plus the success probabilities.
pub fn teleport_outcome(cfg: &TeleportConfig) -> Result<TeleportOutcome> {
    let (u, v) = raw_coefficients(cfg);
    let mut bob = BobState {
        c_plus: u,
        c_minus: v,
        beta_mag: cfg.beta_mag,
        normalized: false,
    };
    let n2 = bob.norm_sq();
    if n2 < 1e-280 {
        return Err(Error::Degenerate(
            "heralded state has vanishing norm".into(),
        ));
    }
    let n = n2.sqrt();
    bob.c_plus /= n;
    bob.c_minus /= n;
    // canonical global phase: make the larger coefficient real nonnegative
    let anchor = if bob.c_plus.norm() >= 1e-12 {
        bob.c_plus
    } else {
        bob.c_minus
    };
    if anchor.norm() > 0.0 {
        let phase = anchor.conj() / anchor.norm();
        bob.c_plus *= phase;
        bob.c_minus *= phase;
    }
    bob.normalized = true;
    let (p_total, p_sideband) = teleport_success(cfg)?;
    Ok(TeleportOutcome {
        bob,
        p_sideband,
        p_total,
        in_validity_regime: cfg.alpha_mag <= 0.5,
    })
}

/// Success probabilities (sideband independent, chosen sideband).
pub fn teleport_success(cfg: &TeleportConfig) -> Result<(f64, f64)> {
    let p_total = success_factor(cfg)?;
    let j = bessel_j(cfg.mu, cfg.m);
    Ok((p_total, j * j * p_total))
}

/// Probability mass never heralded by a single sideband photon at either
/// detector; reported, not renormalized away.
pub fn heralding_residual(cfg: &TeleportConfig) -> Result<f64> {
    let p_total = success_factor(cfg)?;
    Ok((1.0 - 2.0 * p_total).max(0.0))
}

/// Exact fidelity between the teleported state for phase difference phi and
/// the coherent state with phase -psi, at mean photon number a.
pub fn phase_fidelity(phi: f64, psi: f64, a: f64) -> f64 {
    let rot = Complex::from_polar(a, psi);
    let z = (phi / 2.0).cos() * rot.exp()
        + Complex::i() * (phi / 2.0).sin() * (-rot).exp();
    ((-2.0 * a).exp() * z.norm_sqr()).min(1.0)
}

/// Quadratic small-amplitude expansion of [`phase_fidelity`].
pub fn phase_fidelity_series(phi: f64, psi: f64, a: f64) -> f64 {
    1.0 + 2.0 * ((phi - psi).cos() - 1.0) * a
}

/// Phase carried by the coherent-state approximation of Bob's state.
pub fn approx_phase(cfg: &TeleportConfig) -> f64 {
    let base = cfg.mu as f64 * (cfg.phi_c - cfg.phi_a);
    match cfg.detector {
        Detector::D1 => base,
        Detector::D2 => base + std::f64::consts::PI,
    }
}

/// Small-amplitude coherent approximation of the heralded state.
pub fn coherent_approximation(cfg: &TeleportConfig) -> Complex {
    Complex::from_polar(cfg.beta_mag, -approx_phase(cfg))
}

/// Nominal coherent-state labels used by the truth table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum CoherentLabel {
    Alpha,
    MinusAlpha,
    IAlpha,
    MinusIAlpha,
}

impl CoherentLabel {
    pub fn factor(self) -> Complex {
        match self {
            CoherentLabel::Alpha => Complex::new(1.0, 0.0),
            CoherentLabel::MinusAlpha => Complex::new(-1.0, 0.0),
            CoherentLabel::IAlpha => Complex::i(),
            CoherentLabel::MinusIAlpha => -Complex::i(),
        }
    }

    const ALL: [CoherentLabel; 4] = [
        CoherentLabel::Alpha,
        CoherentLabel::MinusAlpha,
        CoherentLabel::IAlpha,
        CoherentLabel::MinusIAlpha,
    ];
}

/// One row-cell of the heralding truth table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TruthTableEntry {
    /// Charlie's phase offset above Alice's, radians.
    pub phi_offset: f64,
    pub detector: Detector,
    pub sideband: i32,
    /// Closest of the four nominal coherent states.
    pub label: CoherentLabel,
    /// Fidelity of the exact heralded state to the labeled coherent state.
    pub fidelity: f64,
}

/// Enumerates the sixteen heralding outcomes for the symmetric shared state
/// at equal amplitudes, Alice's phase zero, over the four quadrant phases,
/// both first-order sidebands, and both detectors.
pub fn truth_table(amp: f64, m: f64) -> Result<Vec<TruthTableEntry>> {
    use std::f64::consts::PI;
    let mut entries = Vec::with_capacity(16);
    for &phi_offset in &[0.0, PI, PI / 2.0, 3.0 * PI / 2.0] {
        for detector in [Detector::D1, Detector::D2] {
            for sideband in [1, -1] {
                let cfg = TeleportConfig::symmetric(
                    amp,
                    phi_offset,
                    0.0,
                    CatSymmetry::Even,
                    m,
                    sideband,
                    detector,
                )?;
                let outcome = teleport_outcome(&cfg)?;
                let (label, fidelity) = CoherentLabel::ALL
                    .iter()
                    .map(|&l| {
                        let target = l.factor() * amp;
                        (l, outcome.bob.fidelity_to_coherent(target))
                    })
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("label set is nonempty");
                entries.push(TruthTableEntry {
                    phi_offset,
                    detector,
                    sideband,
                    label,
                    fidelity,
                });
            }
        }
    }
    Ok(entries)
}
