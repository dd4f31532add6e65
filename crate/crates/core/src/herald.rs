//! Heralded link generation: success probabilities and the fidelity mixture
//! of the entangled state shared by the two end nodes after the relay
//! announces a click parity.
//!
//! Loss and detector inefficiency enter only through the effective photon
//! number ratio zeta = xi * eta * r_bs: every loss-free outcome formula
//! holds with r_bs replaced by zeta.

use crate::error::{Error, Result};
use crate::link::{self, PairSymmetry};
use crate::modes::CatSymmetry;
use crate::photodetect::ClickParity;

/// Parity of relay clicks restricted to the two heralding outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn to_click(self) -> ClickParity {
        match self {
            Parity::Even => ClickParity::Even,
            Parity::Odd => ClickParity::Odd,
        }
    }
}

/// Which relay detector fired. The heralded states behind the two ports
/// differ by a correctable pi phase on one stored mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum DetectorPort {
    First,
    Second,
}

/// Elementary-link parameters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LinkConfig {
    /// Total mean photon number |alpha|^2 per side.
    pub a: f64,
    /// Fraction of photons sent to the relay.
    pub r_bs: f64,
    /// Channel transmittance node to relay.
    pub eta: f64,
    /// Relay detector efficiency.
    pub xi: f64,
}

impl LinkConfig {
    pub fn new(a: f64, r_bs: f64, eta: f64, xi: f64) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "mean photon number must be finite and nonnegative, got {a}"
            )));
        }
        for (name, v) in [("r_bs", r_bs), ("eta", eta), ("xi", xi)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(Self { a, r_bs, eta, xi })
    }

    /// Effective photon number ratio folding loss and detector efficiency.
    pub fn zeta(&self) -> f64 {
        let z = self.xi * self.eta * self.r_bs;
        debug_assert!(z <= self.r_bs + 1e-15);
        z
    }

    /// Mean photon number stored per side.
    pub fn stored_photons(&self) -> f64 {
        (1.0 - self.r_bs) * self.a
    }

    /// Mean photon number of the relay mode before loss.
    pub fn relay_photons(&self) -> f64 {
        2.0 * self.r_bs * self.a
    }
}

/// Success probability and heralded fidelity weights for one link.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct HeraldResult {
    /// Per-detector success probability of the click-parity outcome.
    pub p_success: f64,
    /// Weight of the symmetric entangled component.
    pub f_plus: f64,
    /// Weight of the antisymmetric entangled component.
    pub f_minus: f64,
}

/// Two-component mixture describing the heralded shared state.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct HeraldedDensity {
    pub f_plus: f64,
    pub f_minus: f64,
    /// Mean photon number kept in each node's memory.
    pub stored_photons: f64,
    /// Port metadata; the second port needs a pi phase correction.
    pub port: DetectorPort,
}

/// Success probability at explicit (photon ratio, effective ratio, photon
/// number) values. The closed forms are the loss-free outcome probabilities
/// evaluated at the effective ratio.
pub fn success_prob_at(pair: PairSymmetry, parity: Parity, zeta: f64, a: f64) -> Result<f64> {
    if pair.is_cross() {
        let p = link::outcome_probs_cross(zeta, a)?;
        Ok(match parity {
            Parity::Odd => p.p_plus,
            Parity::Even => p.p_minus,
        })
    } else {
        let p = link::outcome_probs_identical(CatSymmetry::Odd, zeta, a)?;
        let base = match parity {
            Parity::Odd => p.p_minus,
            Parity::Even => p.p_plus,
        };
        Ok(match pair.alice {
            CatSymmetry::Odd => base,
            CatSymmetry::Even => a.tanh().powi(2) * base,
        })
    }
}

/// Per-detector heralding success probability for a configured link.
pub fn success_prob(pair: PairSymmetry, parity: Parity, cfg: &LinkConfig) -> Result<f64> {
    success_prob_at(pair, parity, cfg.zeta(), cfg.a)
}

/// Fidelity weights (f_plus, f_minus) at explicit parameter values.
pub fn fidelity_at(
    pair: PairSymmetry,
    parity: Parity,
    r_bs: f64,
    zeta: f64,
    a: f64,
) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&r_bs) || !(0.0..=1.0).contains(&zeta) || zeta > r_bs + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= zeta ({zeta}) <= r_bs ({r_bs}) <= 1"
        )));
    }
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "mean photon number must be finite and nonnegative, got {a}"
        )));
    }
    // the cross pairing swaps the roles of the two click parities
    let minus_dominant = match (pair.is_cross(), parity) {
        (false, Parity::Odd) | (true, Parity::Even) => true,
        (false, Parity::Even) | (true, Parity::Odd) => false,
    };
    let t_keep = (2.0 * (1.0 - r_bs) * a).tanh();
    let t_lost = (2.0 * (r_bs - zeta).max(0.0) * a).tanh();
    if minus_dominant {
        let f_minus = if a == 0.0 {
            if (1.0 - zeta).abs() < 1e-300 {
                return Err(Error::UndefinedFidelity);
            }
            (1.0 - r_bs) / (1.0 - zeta)
        } else {
            let denom = t_keep + t_lost;
            if denom == 0.0 {
                return Err(Error::UndefinedFidelity);
            }
            t_keep / denom
        };
        Ok((1.0 - f_minus, f_minus))
    } else {
        let f_plus = 1.0 / (1.0 + t_keep * t_lost);
        Ok((f_plus, 1.0 - f_plus))
    }
}

/// Fidelity weights of the heralded state for a configured link.
pub fn heralded_fidelity(pair: PairSymmetry, parity: Parity, cfg: &LinkConfig) -> Result<(f64, f64)> {
    fidelity_at(pair, parity, cfg.r_bs, cfg.zeta(), cfg.a)
}

/// Combined success probability and fidelity weights.
pub fn herald(pair: PairSymmetry, parity: Parity, cfg: &LinkConfig) -> Result<HeraldResult> {
    let p_success = success_prob(pair, parity, cfg)?;
    let (f_plus, f_minus) = heralded_fidelity(pair, parity, cfg)?;
    Ok(HeraldResult {
        p_success,
        f_plus,
        f_minus,
    })
}

/// Heralded two-component density description, tagged with the detector port.
pub fn heralded_state(
    pair: PairSymmetry,
    parity: Parity,
    cfg: &LinkConfig,
    port: DetectorPort,
) -> Result<HeraldedDensity> {
    let (f_plus, f_minus) = heralded_fidelity(pair, parity, cfg)?;
    Ok(HeraldedDensity {
        f_plus,
        f_minus,
        stored_photons: cfg.stored_photons(),
        port,
    })
}

/// Click statistics conditioned on the relay outcome mu for a given input
/// pairing: the detected cat's photon parity is the sign product of the
/// input symmetries with mu.
pub fn conditional_parity_prob(
    parity: ClickParity,
    mu: CatSymmetry,
    pair: PairSymmetry,
    cfg: &LinkConfig,
) -> Result<f64> {
    use crate::photodetect::{parity_prob, ChannelParams, DetectorParams, RelayStateLabel};
    let state = match pair.sign_product().product(mu) {
        CatSymmetry::Even => RelayStateLabel::PlusCat,
        CatSymmetry::Odd => RelayStateLabel::MinusCat,
    };
    parity_prob(
        parity,
        state,
        cfg.relay_photons(),
        ChannelParams::new(cfg.eta)?,
        DetectorParams::new(cfg.xi)?,
    )
}

/// Click-count statistics conditioned on the relay outcome mu.
pub fn conditional_count_prob(
    k: usize,
    mu: CatSymmetry,
    pair: PairSymmetry,
    cfg: &LinkConfig,
) -> Result<f64> {
    use crate::photodetect::{photocount_prob, ChannelParams, DetectorParams, RelayStateLabel};
    let state = match pair.sign_product().product(mu) {
        CatSymmetry::Even => RelayStateLabel::PlusCat,
        CatSymmetry::Odd => RelayStateLabel::MinusCat,
    };
    photocount_prob(
        k,
        state,
        cfg.relay_photons(),
        ChannelParams::new(cfg.eta)?,
        DetectorParams::new(cfg.xi)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::outcome_probs;
    use approx::assert_abs_diff_eq;

    fn cfg(a: f64, r_bs: f64, eta: f64, xi: f64) -> LinkConfig {
        LinkConfig::new(a, r_bs, eta, xi).unwrap()
    }

    /// Definitional success probability: sum the click-parity probability of
    /// each relay outcome weighted by the loss-free outcome probability.
    fn success_by_definition(pair: PairSymmetry, parity: Parity, c: &LinkConfig) -> f64 {
        let p = outcome_probs(pair, c.r_bs, c.a).unwrap();
        let click = parity.to_click();
        conditional_parity_prob(click, CatSymmetry::Even, pair, c).unwrap() * p.p_plus
            + conditional_parity_prob(click, CatSymmetry::Odd, pair, c).unwrap() * p.p_minus
    }

    #[test]
    fn zeta_substitution_matches_definition() {
        for pair in [
            PairSymmetry::ODD_ODD,
            PairSymmetry::EVEN_EVEN,
            PairSymmetry::CROSS,
        ] {
            for parity in [Parity::Even, Parity::Odd] {
                for &a in &[0.2, 0.7, 2.0] {
                    for &r in &[0.1, 0.4, 0.8] {
                        for &(eta, xi) in &[(1.0, 1.0), (0.95, 0.9), (0.6, 0.7)] {
                            let c = cfg(a, r, eta, xi);
                            let closed = success_prob(pair, parity, &c).unwrap();
                            let def = success_by_definition(pair, parity, &c);
                            assert_abs_diff_eq!(closed, def, epsilon = 1e-10);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bayes_consistency() {
        for parity in [Parity::Even, Parity::Odd] {
            for &a in &[0.3, 1.1] {
                let c = cfg(a, 0.2, 0.95, 0.9);
                let pair = PairSymmetry::ODD_ODD;
                let res = herald(pair, parity, &c).unwrap();
                let p = outcome_probs(pair, c.r_bs, c.a).unwrap();
                let click = parity.to_click();
                let joint_plus =
                    conditional_parity_prob(click, CatSymmetry::Even, pair, &c).unwrap() * p.p_plus;
                let joint_minus =
                    conditional_parity_prob(click, CatSymmetry::Odd, pair, &c).unwrap() * p.p_minus;
                assert_abs_diff_eq!(res.f_plus * res.p_success, joint_plus, epsilon = 1e-12);
                assert_abs_diff_eq!(res.f_minus * res.p_success, joint_minus, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn small_amplitude_success_limits() {
        let c = cfg(1e-6, 0.2, 0.95, 0.9);
        let z = c.zeta();
        let p = success_prob(PairSymmetry::ODD_ODD, Parity::Odd, &c).unwrap();
        assert!((2.0 * p - 2.0 * z * (1.0 - z)).abs() / (2.0 * z * (1.0 - z)) < 1e-5);
        let p = success_prob(PairSymmetry::CROSS, Parity::Odd, &c).unwrap();
        assert!((2.0 * p - z).abs() / z < 1e-5);
    }

    #[test]
    fn half_zeta_saturates_bound() {
        // zeta = 1/2 requires r_bs = 1/(2 eta xi)
        let eta = 0.95;
        let xi = 0.9;
        let r = 1.0 / (2.0 * eta * xi);
        for &a in &[0.1, 1.0, 10.0] {
            let c = cfg(a, r, eta, xi);
            let p = success_prob(PairSymmetry::ODD_ODD, Parity::Odd, &c).unwrap();
            assert_abs_diff_eq!(2.0 * p, 0.5, epsilon = 1e-12);
        }
        // away from zeta = 1/2 the bound is strict
        let c = cfg(1.0, 0.3, eta, xi);
        assert!(2.0 * success_prob(PairSymmetry::ODD_ODD, Parity::Odd, &c).unwrap() < 0.5);
    }

    #[test]
    fn tanh_squared_law() {
        for parity in [Parity::Even, Parity::Odd] {
            for &a in &[0.2, 1.5, 6.0] {
                let c = cfg(a, 0.35, 0.9, 0.85);
                let p_odd = success_prob(PairSymmetry::ODD_ODD, parity, &c).unwrap();
                let p_even = success_prob(PairSymmetry::EVEN_EVEN, parity, &c).unwrap();
                assert_abs_diff_eq!(p_even, a.tanh().powi(2) * p_odd, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn fidelity_zero_amplitude_limits() {
        for &r in &[0.2, 0.5848, 0.7848] {
            let c = cfg(0.0, r, 0.95, 0.9);
            let (f_plus, _) = heralded_fidelity(PairSymmetry::ODD_ODD, Parity::Even, &c).unwrap();
            assert_abs_diff_eq!(f_plus, 1.0, epsilon = 1e-12);
            let (_, f_minus) = heralded_fidelity(PairSymmetry::ODD_ODD, Parity::Odd, &c).unwrap();
            assert_abs_diff_eq!(f_minus, (1.0 - r) / (1.0 - c.zeta()), epsilon = 1e-12);
        }
    }

    #[test]
    fn fidelity_large_amplitude_half() {
        let c = cfg(200.0, 0.4, 0.95, 0.9);
        for parity in [Parity::Even, Parity::Odd] {
            let (f_plus, f_minus) =
                heralded_fidelity(PairSymmetry::ODD_ODD, parity, &c).unwrap();
            assert_abs_diff_eq!(f_plus, 0.5, epsilon = 1e-9);
            assert_abs_diff_eq!(f_minus, 0.5, epsilon = 1e-9);
        }
    }

    #[test]
    fn fidelity_parity_symmetry_between_pairings() {
        for &a in &[0.2, 1.0, 4.0] {
            let c = cfg(a, 0.3, 0.9, 0.8);
            let same_odd = heralded_fidelity(PairSymmetry::ODD_ODD, Parity::Odd, &c).unwrap();
            let cross_even = heralded_fidelity(PairSymmetry::CROSS, Parity::Even, &c).unwrap();
            assert_abs_diff_eq!(same_odd.0, cross_even.0, epsilon = 1e-12);
            let same_even = heralded_fidelity(PairSymmetry::ODD_ODD, Parity::Even, &c).unwrap();
            let cross_odd = heralded_fidelity(PairSymmetry::CROSS, Parity::Odd, &c).unwrap();
            assert_abs_diff_eq!(same_even.0, cross_odd.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ideal_link_heralds_pure_states() {
        // no loss and perfect detection leave the heralded state pure
        let c = cfg(0.8, 0.3, 1.0, 1.0);
        let (_, f_minus) = heralded_fidelity(PairSymmetry::ODD_ODD, Parity::Odd, &c).unwrap();
        assert_abs_diff_eq!(f_minus, 1.0, epsilon = 1e-15);
        let (f_plus, _) = heralded_fidelity(PairSymmetry::ODD_ODD, Parity::Even, &c).unwrap();
        assert_abs_diff_eq!(f_plus, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn fidelity_monotone_decay_in_amplitude() {
        let mut prev_minus = f64::INFINITY;
        let mut prev_plus = f64::INFINITY;
        for i in 0..=100 {
            let a = i as f64 * 0.1;
            let c = cfg(a, 0.4, 0.9, 0.85);
            let (_, f_minus) = heralded_fidelity(PairSymmetry::ODD_ODD, Parity::Odd, &c).unwrap();
            let (f_plus, _) = heralded_fidelity(PairSymmetry::ODD_ODD, Parity::Even, &c).unwrap();
            assert!(f_minus <= prev_minus + 1e-12);
            assert!(f_plus <= prev_plus + 1e-12);
            prev_minus = f_minus;
            prev_plus = f_plus;
        }
    }

    #[test]
    fn conditional_probs_ideal_detection() {
        let c = cfg(0.7, 0.3, 1.0, 1.0);
        let p = conditional_parity_prob(
            ClickParity::Odd,
            CatSymmetry::Odd,
            PairSymmetry::ODD_ODD,
            &c,
        )
        .unwrap();
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-12);
        // cross pairing flips the detected parity label
        let p = conditional_parity_prob(
            ClickParity::Even,
            CatSymmetry::Odd,
            PairSymmetry::CROSS,
            &c,
        )
        .unwrap();
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn heralded_state_fields() {
        let c = cfg(0.5, 0.2, 0.95, 0.9);
        let d = heralded_state(
            PairSymmetry::ODD_ODD,
            Parity::Odd,
            &c,
            DetectorPort::Second,
        )
        .unwrap();
        assert_abs_diff_eq!(d.f_plus + d.f_minus, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.stored_photons, 0.4, epsilon = 1e-15);
        assert_eq!(d.port, DetectorPort::Second);
    }

    #[test]
    fn degenerate_fidelity() {
        assert!(fidelity_at(PairSymmetry::ODD_ODD, Parity::Odd, 1.0, 1.0, 1.0).is_err());
        assert!(fidelity_at(PairSymmetry::ODD_ODD, Parity::Even, 1.0, 1.0, 1.0).is_ok());
    }
}
