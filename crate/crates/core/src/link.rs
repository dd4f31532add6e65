//! Beam-splitter relay outcomes for a pair of modulated cat states.
//!
//! When Alice's and Bob's relay-bound modes interfere on the symmetric 50:50
//! beam splitter, the output decomposes over three orthonormal relay states
//! per arm: the antisymmetric cat, the vacuum-subtracted symmetric cat, and
//! the vacuum. This module evaluates the probabilities of those outcomes for
//! every input symmetry pairing.
//!
//! All closed forms are written with `exp_m1`-style exponent factoring so
//! mean photon numbers up to ~700 evaluate without overflow.

use crate::error::{Error, Result};
use crate::modes::{CatSymmetry, ModePartition, ModeVector};
use crate::Complex;

/// Symmetry pairing of Alice's and Bob's input cats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct PairSymmetry {
    /// Alice's cat symmetry (nu').
    pub alice: CatSymmetry,
    /// Bob's cat symmetry (nu).
    pub bob: CatSymmetry,
}

impl PairSymmetry {
    pub const EVEN_EVEN: PairSymmetry = PairSymmetry {
        alice: CatSymmetry::Even,
        bob: CatSymmetry::Even,
    };
    pub const ODD_ODD: PairSymmetry = PairSymmetry {
        alice: CatSymmetry::Odd,
        bob: CatSymmetry::Odd,
    };
    pub const CROSS: PairSymmetry = PairSymmetry {
        alice: CatSymmetry::Even,
        bob: CatSymmetry::Odd,
    };

    pub fn new(alice: CatSymmetry, bob: CatSymmetry) -> Self {
        Self { alice, bob }
    }

    /// True when the two inputs differ in symmetry. The two mixed orderings
    /// give identical probabilities and are normalized to one canonical case.
    pub fn is_cross(self) -> bool {
        self.alice != self.bob
    }

    /// Sign product nu' * nu.
    pub fn sign_product(self) -> CatSymmetry {
        self.alice.product(self.bob)
    }
}

/// Probabilities of the three relay outcomes for one output arm.
///
/// The sum rule is `2 p_plus + 2 p_minus + p_vac = 1`: the cat outcomes can
/// occur at either output port, the vacuum outcome only jointly.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct OutcomeProbs {
    /// Probability of the modified symmetric cat at one port.
    pub p_plus: f64,
    /// Probability of the antisymmetric cat at one port.
    pub p_minus: f64,
    /// Probability of vacuum at both ports.
    pub p_vac: f64,
    /// Set when the values are an analytic limit of a 0/0 point.
    pub at_limit: bool,
}

impl OutcomeProbs {
    pub fn sum_rule(&self) -> f64 {
        2.0 * self.p_plus + 2.0 * self.p_minus + self.p_vac
    }
}

/// 50:50 beam-splitter action on a coherent pair with signs
/// `(sign_a * amp, sign_b * amp)`: equal signs exit port C with amplitude
/// `sqrt(2) * sign * amp`, opposite signs exit port D.
pub fn bs_pair_transform(
    sign_a: CatSymmetry,
    sign_b: CatSymmetry,
    amp: &ModeVector,
) -> (ModeVector, ModeVector) {
    let root2 = Complex::new(std::f64::consts::SQRT_2, 0.0);
    let scaled = amp.scale(root2 * sign_a.sign());
    if sign_a == sign_b {
        (scaled, ModeVector::zero(amp.cutoff()))
    } else {
        (ModeVector::zero(amp.cutoff()), scaled)
    }
}

fn m_norm(sign: f64, mean_photons: f64) -> f64 {
    2.0 * (1.0 + sign * (-2.0 * mean_photons).exp())
}

fn m_tilde_plus(mean_photons: f64) -> f64 {
    let t = -(-mean_photons).exp_m1();
    2.0 * t * t
}

/// General relay outcome probabilities from the stored and relay-bound mean
/// photon numbers `n_qm = |alpha_qm|^2` and `n_bs = |alpha_bs|^2`.
pub fn outcome_probs_general(pair: PairSymmetry, n_qm: f64, n_bs: f64) -> Result<OutcomeProbs> {
    if !(n_qm >= 0.0) || !(n_bs >= 0.0) {
        return Err(Error::InvalidArgument(
            "mean photon numbers must be nonnegative".into(),
        ));
    }
    let has_odd = pair.alice == CatSymmetry::Odd || pair.bob == CatSymmetry::Odd;
    if n_qm == 0.0 && n_bs == 0.0 && has_odd {
        return Err(Error::Degenerate(
            "odd input cat at zero amplitude has vanishing norm".into(),
        ));
    }
    let n = n_qm + n_bs;
    let denom = m_norm(pair.alice.sign(), n) * m_norm(pair.bob.sign(), n);
    // relay mode gamma_bs = sqrt(2) alpha_bs, pair state carries 2 n_qm photons
    let n_gamma = 2.0 * n_bs;
    let p_of = |mu: f64| -> f64 {
        let mu_prime = pair.sign_product().sign() * mu;
        let m_relay = if mu_prime > 0.0 {
            m_tilde_plus(n_gamma)
        } else {
            m_norm(-1.0, n_gamma)
        };
        0.25 * m_relay * m_norm(mu, 2.0 * n_qm) / denom
    };
    let p_vac =
        m_norm(pair.alice.sign(), n_qm) * m_norm(pair.bob.sign(), n_qm) * (-n_gamma).exp() / denom;
    Ok(OutcomeProbs {
        p_plus: p_of(1.0),
        p_minus: p_of(-1.0),
        p_vac,
        at_limit: false,
    })
}

/// Closed-form outcome probabilities when the two input cats share the same
/// symmetry `nu`, as a function of the photon-number ratio `r_bs` and the
/// total mean photon number `a = |alpha|^2`.
pub fn outcome_probs_identical(nu: CatSymmetry, r_bs: f64, a: f64) -> Result<OutcomeProbs> {
    check_ratio_and_amp(r_bs, a)?;
    // 1 - e^{-x} evaluated without cancellation
    let em = |x: f64| -> f64 { -(-x).exp_m1() };
    let r = r_bs;
    let odd = if a == 0.0 {
        // analytic a -> 0 limit of the hyperbolic ratios
        OutcomeProbs {
            p_minus: r * (1.0 - r),
            p_plus: r * r / 2.0,
            p_vac: (1.0 - r) * (1.0 - r),
            at_limit: true,
        }
    } else {
        let d = em(2.0 * a); // 1 - e^{-2a}
        OutcomeProbs {
            // sinh(2(1-r)a) sinh(2ra) / (4 sinh^2 a)
            p_minus: em(4.0 * (1.0 - r) * a) * em(4.0 * r * a) / (4.0 * d * d),
            // cosh(2(1-r)a) sinh^2(ra) / (2 sinh^2 a)
            p_plus: (1.0 + (-4.0 * (1.0 - r) * a).exp()) * em(2.0 * r * a).powi(2)
                / (4.0 * d * d),
            // sinh^2((1-r)a) / sinh^2 a
            p_vac: (-2.0 * r * a).exp() * em(2.0 * (1.0 - r) * a).powi(2) / (d * d),
            at_limit: false,
        }
    };
    match nu {
        CatSymmetry::Odd => Ok(odd),
        CatSymmetry::Even => {
            let t2 = a.tanh().powi(2);
            let dp = 1.0 + (-2.0 * a).exp(); // 1 + e^{-2a}
            Ok(OutcomeProbs {
                p_plus: t2 * odd.p_plus,
                p_minus: t2 * odd.p_minus,
                // cosh^2((1-r)a) / cosh^2 a, evaluated directly
                p_vac: (-2.0 * r * a).exp() * (1.0 + (-2.0 * (1.0 - r) * a).exp()).powi(2)
                    / (dp * dp),
                at_limit: odd.at_limit,
            })
        }
    }
}

/// Closed-form outcome probabilities when the input cats differ in symmetry.
pub fn outcome_probs_cross(r_bs: f64, a: f64) -> Result<OutcomeProbs> {
    check_ratio_and_amp(r_bs, a)?;
    let em = |x: f64| -> f64 { -(-x).exp_m1() };
    let r = r_bs;
    if a == 0.0 {
        return Ok(OutcomeProbs {
            p_plus: r / 2.0,
            p_minus: 0.0,
            p_vac: 1.0 - r,
            at_limit: true,
        });
    }
    let d = em(4.0 * a); // 1 - e^{-4a}
    Ok(OutcomeProbs {
        // sinh(2(1-r)a) sinh^2(ra) / sinh(2a)
        p_minus: em(4.0 * (1.0 - r) * a) * em(2.0 * r * a).powi(2) / (4.0 * d),
        // cosh(2(1-r)a) sinh(2ra) / (2 sinh(2a))
        p_plus: (1.0 + (-4.0 * (1.0 - r) * a).exp()) * em(4.0 * r * a) / (4.0 * d),
        // sinh(2(1-r)a) / sinh(2a)
        p_vac: (-2.0 * r * a).exp() * em(4.0 * (1.0 - r) * a) / d,
        at_limit: false,
    })
}

/// Outcome probabilities for an arbitrary symmetry pairing via the closed
/// forms, dispatching on whether the pair is identical or cross.
pub fn outcome_probs(pair: PairSymmetry, r_bs: f64, a: f64) -> Result<OutcomeProbs> {
    if pair.is_cross() {
        outcome_probs_cross(r_bs, a)
    } else {
        outcome_probs_identical(pair.alice, r_bs, a)
    }
}

/// Convenience wrapper taking a mode partition instead of scalars.
pub fn outcome_probs_for_partition(
    pair: PairSymmetry,
    partition: &ModePartition,
) -> Result<OutcomeProbs> {
    outcome_probs_general(pair, partition.n_qm, partition.n_bs)
}

fn check_ratio_and_amp(r_bs: f64, a: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r_bs) {
        return Err(Error::InvalidArgument(format!(
            "photon number ratio must lie in [0, 1], got {r_bs}"
        )));
    }
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "mean photon number must be finite and nonnegative, got {a}"
        )));
    }
    Ok(())
}
