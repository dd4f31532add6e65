//! Pure-loss fiber channel and photon-number-resolving detection of the
//! relay cat states.
//!
//! The channel splits a relay amplitude into a detected signal part and a
//! traced-out environment part. Detection with sub-unit efficiency follows
//! the Kelley-Kleiner photocount distribution; the parity-summed closed
//! forms are used wherever only the even/odd click outcome matters.

use crate::error::{Error, Result};
use crate::modes::CatSymmetry;

/// Fiber transmittance.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ChannelParams {
    pub eta: f64,
}

impl ChannelParams {
    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidArgument(format!(
                "transmittance must lie in [0, 1], got {eta}"
            )));
        }
        Ok(Self { eta })
    }

    pub const IDEAL: ChannelParams = ChannelParams { eta: 1.0 };
}

/// Detector quantum efficiency.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DetectorParams {
    pub xi: f64,
}

impl DetectorParams {
    pub fn new(xi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::InvalidArgument(format!(
                "detector efficiency must lie in [0, 1], got {xi}"
            )));
        }
        Ok(Self { xi })
    }

    pub const IDEAL: DetectorParams = DetectorParams { xi: 1.0 };
}

/// Mean photon numbers of the transmitted and lost parts of an amplitude.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SignalSplit {
    pub n_signal: f64,
    pub n_env: f64,
}

/// Parity class of the click count at the relay detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ClickParity {
    NoClick,
    Even,
    Odd,
}

/// Which of the three orthonormal relay states arrived at the detector arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum RelayStateLabel {
    /// Modified symmetric cat (vacuum component removed).
    PlusCat,
    /// Antisymmetric cat.
    MinusCat,
    Vacuum,
}

/// Splits a mean photon number across the lossy channel.
pub fn loss_split(n_total: f64, channel: ChannelParams) -> Result<SignalSplit> {
    if !(n_total >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "mean photon number must be nonnegative, got {n_total}"
        )));
    }
    Ok(SignalSplit {
        n_signal: channel.eta * n_total,
        n_env: (1.0 - channel.eta) * n_total,
    })
}

fn clamp_prob(p: f64) -> f64 {
    debug_assert!(
        (-1e-10..=1.0 + 1e-10).contains(&p),
        "probability out of range: {p}"
    );
    p.clamp(0.0, 1.0)
}

fn m_norm(sign: f64, n: f64) -> f64 {
    2.0 * (1.0 + sign * (-2.0 * n).exp())
}

fn m_tilde_plus(n: f64) -> f64 {
    let t = -(-n).exp_m1();
    2.0 * t * t
}

/// (e^x - 1) e^{-y} written as e^{x-y} (1 - e^{-x}), stable at any scale.
fn expm1_damped(x: f64, y: f64) -> f64 {
    (x - y).exp() * -(-x).exp_m1()
}

/// Kelley-Kleiner weight C_mu(k) for an exact click count k >= 1, where mu
/// is the photon-number parity of the incident cat.
pub fn click_weight(k: usize, mu: CatSymmetry, n_signal: f64, det: DetectorParams) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "zero clicks are handled by the vacuum branch, not the count weight".into(),
        ));
    }
    if !(n_signal >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "signal photon number must be nonnegative, got {n_signal}"
        )));
    }
    let x = det.xi * n_signal;
    if x == 0.0 {
        return Ok(0.0);
    }
    // ln(x^k / k!) accumulated term by term to stay finite at large k
    let mut ln_t = 0.0;
    for i in 1..=k {
        ln_t += (x / i as f64).ln();
    }
    let sign = if k % 2 == 0 { mu.sign() } else { -mu.sign() };
    Ok(2.0 * ((ln_t - x).exp() + sign * (ln_t + x - 2.0 * n_signal).exp()))
}

/// Parity-summed Kelley-Kleiner weight from the two detection aggregates:
/// the total signal photon number and the efficiency-weighted sum. The two
/// coincide scaled by xi in the single-mode case and generalize to
/// multimode signals.
pub fn parity_weight_aggregates(
    parity: ClickParity,
    mu: CatSymmetry,
    n_signal: f64,
    xi_n_signal: f64,
) -> Result<f64> {
    if !(n_signal >= 0.0) || !(xi_n_signal >= 0.0) || xi_n_signal > n_signal + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= weighted sum {xi_n_signal} <= signal photon number {n_signal}"
        )));
    }
    let n = n_signal;
    let x = xi_n_signal;
    let w = match parity {
        ClickParity::Even => {
            let c = (-x).exp_m1().powi(2);
            let s = expm1_damped(x, n) * expm1_damped(x, n);
            c + mu.sign() * s
        }
        ClickParity::Odd => -(-2.0 * x).exp_m1() - mu.sign() * expm1_damped(2.0 * x, 2.0 * n),
        ClickParity::NoClick => 2.0 * ((-x).exp() + mu.sign() * (x - 2.0 * n).exp()),
    };
    Ok(w)
}

/// Parity-summed weight C_mu for a single-mode signal.
pub fn parity_weight(
    parity: ClickParity,
    mu: CatSymmetry,
    n_signal: f64,
    det: DetectorParams,
) -> Result<f64> {
    parity_weight_aggregates(parity, mu, n_signal, det.xi * n_signal)
}

/// Aggregates a multimode signal into the two sums the parity formulas
/// consume: total photon number and the efficiency-weighted photon number.
pub fn multimode_effective(per_mode: &[(f64, f64)]) -> Result<(f64, f64)> {
    let mut n_total = 0.0;
    let mut weighted = 0.0;
    for &(n_i, xi_i) in per_mode {
        if !(n_i >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "mode photon number must be nonnegative, got {n_i}"
            )));
        }
        if !(0.0..=1.0).contains(&xi_i) {
            return Err(Error::InvalidArgument(format!(
                "mode efficiency must lie in [0, 1], got {xi_i}"
            )));
        }
        n_total += n_i;
        weighted += xi_i * n_i;
    }
    Ok((n_total, weighted))
}

fn state_mix(state: RelayStateLabel, n_total: f64, n_env: f64) -> Result<(f64, f64, f64)> {
    match state {
        RelayStateLabel::PlusCat => Ok((m_norm(1.0, n_env), m_norm(-1.0, n_env), {
            let norm = m_tilde_plus(n_total);
            if norm == 0.0 {
                return Err(Error::Degenerate(
                    "modified symmetric cat at zero amplitude has vanishing norm".into(),
                ));
            }
            norm
        })),
        RelayStateLabel::MinusCat => {
            let norm = m_norm(-1.0, n_total);
            if norm == 0.0 {
                return Err(Error::Degenerate(
                    "antisymmetric cat at zero amplitude has vanishing norm".into(),
                ));
            }
            Ok((m_norm(-1.0, n_env), m_norm(1.0, n_env), norm))
        }
        RelayStateLabel::Vacuum => Err(Error::InvalidArgument(
            "vacuum branch is handled before the mixture weights".into(),
        )),
    }
}

/// Probability of exactly k clicks given the relay state, with the channel
/// transmittance applied before detection.
pub fn photocount_prob(
    k: usize,
    state: RelayStateLabel,
    n_total: f64,
    channel: ChannelParams,
    det: DetectorParams,
) -> Result<f64> {
    if state == RelayStateLabel::Vacuum {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    let split = loss_split(n_total, channel)?;
    let (w_plus, w_minus, norm) = state_mix(state, n_total, split.n_env)?;
    if k == 0 {
        return match state {
            RelayStateLabel::MinusCat => {
                let c_plus = parity_weight(ClickParity::NoClick, CatSymmetry::Even, split.n_signal, det)?;
                let c_minus = parity_weight(ClickParity::NoClick, CatSymmetry::Odd, split.n_signal, det)?;
                Ok(clamp_prob((w_plus * c_plus + w_minus * c_minus) / (4.0 * norm)))
            }
            // the vacuum-subtracted term makes zero clicks a completeness
            // complement rather than a direct Kelley-Kleiner weight
            _ => {
                let even = parity_prob(ClickParity::Even, state, n_total, channel, det)?;
                let odd = parity_prob(ClickParity::Odd, state, n_total, channel, det)?;
                Ok(clamp_prob(1.0 - even - odd))
            }
        };
    }
    let c_plus = click_weight(k, CatSymmetry::Even, split.n_signal, det)?;
    let c_minus = click_weight(k, CatSymmetry::Odd, split.n_signal, det)?;
    Ok(clamp_prob((w_plus * c_plus + w_minus * c_minus) / (4.0 * norm)))
}

/// Probability of a click-parity outcome given the relay state.
pub fn parity_prob(
    parity: ClickParity,
    state: RelayStateLabel,
    n_total: f64,
    channel: ChannelParams,
    det: DetectorParams,
) -> Result<f64> {
    if state == RelayStateLabel::Vacuum {
        return Ok(if parity == ClickParity::NoClick { 1.0 } else { 0.0 });
    }
    if parity == ClickParity::NoClick {
        let even = parity_prob(ClickParity::Even, state, n_total, channel, det)?;
        let odd = parity_prob(ClickParity::Odd, state, n_total, channel, det)?;
        return Ok(clamp_prob(1.0 - even - odd));
    }
    let split = loss_split(n_total, channel)?;
    let (w_plus, w_minus, norm) = state_mix(state, n_total, split.n_env)?;
    let c_plus = parity_weight(parity, CatSymmetry::Even, split.n_signal, det)?;
    let c_minus = parity_weight(parity, CatSymmetry::Odd, split.n_signal, det)?;
    Ok(clamp_prob((w_plus * c_plus + w_minus * c_minus) / (4.0 * norm)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const ETA: ChannelParams = ChannelParams { eta: 0.8 };
    const XI: DetectorParams = DetectorParams { xi: 0.9 };

    #[test]
    fn loss_split_values() {
        let s = loss_split(2.0, ChannelParams::new(0.5).unwrap()).unwrap();
        assert_eq!(s.n_signal, 1.0);
        assert_eq!(s.n_env, 1.0);
        let s = loss_split(3.0, ChannelParams::IDEAL).unwrap();
        assert_eq!(s.n_signal, 3.0);
        assert_eq!(s.n_env, 0.0);
        let s = loss_split(3.0, ChannelParams::new(0.0).unwrap()).unwrap();
        assert_eq!(s.n_signal, 0.0);
        assert_eq!(s.n_env, 3.0);
    }

    #[test]
    fn ideal_detector_kills_wrong_parity() {
        for &n in &[0.2, 1.0, 4.0] {
            let c = parity_weight(ClickParity::Even, CatSymmetry::Odd, n, DetectorParams::IDEAL)
                .unwrap();
            assert_abs_diff_eq!(c, 0.0, epsilon = 1e-14);
            let c = parity_weight(ClickParity::Odd, CatSymmetry::Even, n, DetectorParams::IDEAL)
                .unwrap();
            assert_abs_diff_eq!(c, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn count_weights_sum_to_parity_weights() {
        let n = 1.3;
        for mu in [CatSymmetry::Even, CatSymmetry::Odd] {
            let mut even = 0.0;
            let mut odd = 0.0;
            for k in 1..=80 {
                let c = click_weight(k, mu, n, XI).unwrap();
                if k % 2 == 0 {
                    even += c;
                } else {
                    odd += c;
                }
            }
            assert_abs_diff_eq!(
                even,
                parity_weight(ClickParity::Even, mu, n, XI).unwrap(),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                odd,
                parity_weight(ClickParity::Odd, mu, n, XI).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn perfect_discrimination() {
        for &n in &[0.4, 1.0, 3.0] {
            let p = parity_prob(
                ClickParity::Even,
                RelayStateLabel::PlusCat,
                n,
                ChannelParams::IDEAL,
                DetectorParams::IDEAL,
            )
            .unwrap();
            assert_abs_diff_eq!(p, 1.0, epsilon = 1e-12);
            let p = parity_prob(
                ClickParity::Odd,
                RelayStateLabel::MinusCat,
                n,
                ChannelParams::IDEAL,
                DetectorParams::IDEAL,
            )
            .unwrap();
            assert_abs_diff_eq!(p, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn completeness_on_grid() {
        for state in [RelayStateLabel::PlusCat, RelayStateLabel::MinusCat] {
            for &eta in &[0.3, 0.8, 1.0] {
                for &xi in &[0.5, 0.9, 1.0] {
                    for &n in &[0.1, 1.0, 5.0] {
                        let ch = ChannelParams::new(eta).unwrap();
                        let d = DetectorParams::new(xi).unwrap();
                        let total = parity_prob(ClickParity::NoClick, state, n, ch, d).unwrap()
                            + parity_prob(ClickParity::Even, state, n, ch, d).unwrap()
                            + parity_prob(ClickParity::Odd, state, n, ch, d).unwrap();
                        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn photocount_series_sums_to_one() {
        for state in [RelayStateLabel::PlusCat, RelayStateLabel::MinusCat] {
            let mut total = photocount_prob(0, state, 1.5, ETA, XI).unwrap();
            for k in 1..=60 {
                total += photocount_prob(k, state, 1.5, ETA, XI).unwrap();
            }
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn minuscat_noclick_direct_weight_matches_complement() {
        for &n in &[0.3, 1.0, 2.5] {
            let complement = parity_prob(ClickParity::NoClick, RelayStateLabel::MinusCat, n, ETA, XI)
                .unwrap();
            let direct = photocount_prob(0, RelayStateLabel::MinusCat, n, ETA, XI).unwrap();
            assert_abs_diff_eq!(complement, direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn vacuum_state() {
        assert_eq!(
            photocount_prob(0, RelayStateLabel::Vacuum, 1.0, ETA, XI).unwrap(),
            1.0
        );
        assert_eq!(
            photocount_prob(3, RelayStateLabel::Vacuum, 1.0, ETA, XI).unwrap(),
            0.0
        );
        assert_eq!(
            parity_prob(ClickParity::NoClick, RelayStateLabel::Vacuum, 1.0, ETA, XI).unwrap(),
            1.0
        );
        assert_eq!(
            parity_prob(ClickParity::Odd, RelayStateLabel::Vacuum, 1.0, ETA, XI).unwrap(),
            0.0
        );
    }

    #[test]
    fn noclick_monotone_in_efficiencies() {
        for state in [RelayStateLabel::PlusCat, RelayStateLabel::MinusCat] {
            let mut prev = f64::INFINITY;
            for i in 0..=10 {
                let xi = i as f64 / 10.0;
                let p = parity_prob(
                    ClickParity::NoClick,
                    state,
                    1.2,
                    ETA,
                    DetectorParams::new(xi).unwrap(),
                )
                .unwrap();
                assert!(p <= prev + 1e-12);
                prev = p;
            }
            let mut prev = f64::INFINITY;
            for i in 0..=10 {
                let eta = i as f64 / 10.0;
                let p = parity_prob(
                    ClickParity::NoClick,
                    state,
                    1.2,
                    ChannelParams::new(eta).unwrap(),
                    XI,
                )
                .unwrap();
                assert!(p <= prev + 1e-12);
                prev = p;
            }
        }
    }

    #[test]
    fn multimode_aggregates() {
        let (n, w) = multimode_effective(&[(0.3, 0.9), (0.2, 0.5)]).unwrap();
        assert_abs_diff_eq!(n, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w, 0.37, epsilon = 1e-15);
        let (n, w) = multimode_effective(&[(0.7, 0.4)]).unwrap();
        assert_eq!((n, w), (0.7, 0.7 * 0.4));
        let (n2, w2) = multimode_effective(&[(0.7, 0.4), (0.7, 0.4)]).unwrap();
        assert_abs_diff_eq!(n2, 2.0 * n, epsilon = 1e-15);
        assert_abs_diff_eq!(w2, 2.0 * w, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(photocount_prob(1, RelayStateLabel::MinusCat, 0.0, ETA, XI).is_err());
        assert!(click_weight(0, CatSymmetry::Even, 1.0, XI).is_err());
    }

    #[test]
    fn zero_efficiency_never_clicks() {
        let d = DetectorParams::new(0.0).unwrap();
        for state in [RelayStateLabel::PlusCat, RelayStateLabel::MinusCat] {
            let p = parity_prob(ClickParity::NoClick, state, 2.0, ETA, d).unwrap();
            assert_abs_diff_eq!(p, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn large_photon_number_stable() {
        for state in [RelayStateLabel::PlusCat, RelayStateLabel::MinusCat] {
            let total = parity_prob(ClickParity::NoClick, state, 700.0, ETA, XI).unwrap()
                + parity_prob(ClickParity::Even, state, 700.0, ETA, XI).unwrap()
                + parity_prob(ClickParity::Odd, state, 700.0, ETA, XI).unwrap();
            assert!(total.is_finite());
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
        }
    }
}
