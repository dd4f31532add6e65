//! Attempt-count statistics and timing for two-link entanglement
//! distribution.
//!
//! Each link repeats heralding attempts until success; attempt counts are
//! geometric. The slower link sets the preparation time and the faster
//! link's memory waits out the difference. A seeded Monte Carlo sampler
//! cross-checks the analytic expectations.

use crate::error::{Error, Result};
use crate::herald::{self, LinkConfig, Parity};
use crate::link::PairSymmetry;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Per-attempt success probabilities of the two links.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AttemptModel {
    pub p1: f64,
    pub p2: f64,
}

impl AttemptModel {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        for p in [p1, p2] {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "attempt success probability must lie in (0, 1], got {p}"
                )));
            }
        }
        Ok(Self { p1, p2 })
    }

    pub fn q1(&self) -> f64 {
        1.0 - self.p1
    }

    pub fn q2(&self) -> f64 {
        1.0 - self.p2
    }
}

/// Fiber attenuation and geometry.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FiberModel {
    /// Attenuation in dB/km.
    pub kappa: f64,
    /// Node-to-relay distance in km; the elementary link spans twice this.
    pub length: f64,
    /// Signal velocity in km/s.
    pub velocity: f64,
}

/// Group velocity of light in fiber, km/s.
pub const FIBER_VELOCITY_KM_S: f64 = 2.0e5;
/// Vacuum speed of light, km/s.
pub const VACUUM_VELOCITY_KM_S: f64 = 2.99792458e5;

impl FiberModel {
    pub fn new(kappa: f64, length: f64, velocity: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !(length >= 0.0) || !(velocity > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need kappa >= 0 ({kappa}), length >= 0 ({length}), velocity > 0 ({velocity})"
            )));
        }
        Ok(Self {
            kappa,
            length,
            velocity,
        })
    }

    /// One-way propagation time node to relay, in seconds.
    pub fn unit_time(&self) -> f64 {
        self.length / self.velocity
    }

    pub fn transmittance(&self) -> f64 {
        transmittance(self.length, self.kappa)
    }
}

/// Fiber transmittance over a distance in km at a given attenuation.
pub fn transmittance(length: f64, kappa: f64) -> f64 {
    10f64.powf(-kappa * length / 10.0)
}

/// Expected attempt counts and derived times.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TimingStats {
    /// Expected attempt-count difference between the links.
    pub n_w: f64,
    /// Expected total attempts across both links.
    pub n_t: f64,
    pub n_max: f64,
    pub n_min: f64,
    /// Preparation time in seconds.
    pub t_prep: f64,
    /// Memory waiting time in seconds.
    pub t_wait: f64,
}

impl TimingStats {
    /// True when the expected waiting time fits within a memory lifetime.
    pub fn within_lifetime(&self, lifetime_s: f64) -> bool {
        self.t_wait < lifetime_s
    }
}

/// Probability that the attempt counts of the two links differ by exactly k.
pub fn diff_distribution(k: u64, model: &AttemptModel) -> f64 {
    let (p1, p2, q1, q2) = (model.p1, model.p2, model.q1(), model.q2());
    let mult = if k == 0 { 1.0 } else { 2.0 };
    p1 * p2 * (q1.powi(k as i32) + q2.powi(k as i32)) * mult / (2.0 * (1.0 - q1 * q2))
}

/// Analytic attempt-count expectations with times scaled by the one-way
/// propagation time.
pub fn attempt_stats(model: &AttemptModel, fiber: &FiberModel) -> TimingStats {
    let (p1, p2, q1, q2) = (model.p1, model.p2, model.q1(), model.q2());
    let n_w = (p2 * p2 * q1 + p1 * p1 * q2) / (p1 * p2 * (1.0 - q1 * q2));
    let n_t = (p1 + p2) / (p1 * p2);
    let t = fiber.unit_time();
    TimingStats {
        n_w,
        n_t,
        n_max: (n_t + n_w) / 2.0,
        n_min: (n_t - n_w) / 2.0,
        t_prep: (n_t + n_w) / 2.0 * t,
        t_wait: n_w * t,
    }
}

/// Per-attempt link success probability at a given distance, counting both
/// relay detectors.
pub fn link_success_from_distance(
    template: &LinkConfig,
    fiber: &FiberModel,
    pair: PairSymmetry,
    parity: Parity,
) -> Result<f64> {
    let cfg = LinkConfig::new(
        template.a,
        template.r_bs,
        fiber.transmittance(),
        template.xi,
    )?;
    Ok(2.0 * herald::success_prob(pair, parity, &cfg)?)
}

/// Empirical mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

/// Monte Carlo attempt-count estimates.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SimulatedStats {
    pub n_w: Estimate,
    pub n_t: Estimate,
    pub n_max: Estimate,
    pub n_min: Estimate,
    pub trials: u64,
    pub seed: u64,
}

/// Inverse-CDF geometric sample with support {1, 2, ...}.
fn sample_geometric(p: f64, rng: &mut impl Rng) -> u64 {
    if p >= 1.0 {
        return 1;
    }
    let u: f64 = 1.0 - rng.gen::<f64>(); // uniform in (0, 1]
    let n = (u.ln() / (1.0 - p).ln()).ceil() as u64;
    n.max(1)
}

struct Accumulator {
    sum: f64,
    sum_sq: f64,
}

impl Accumulator {
    fn new() -> Self {
        Accumulator {
            sum: 0.0,
            sum_sq: 0.0,
        }
    }

    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn estimate(&self, n: f64) -> Estimate {
        let mean = self.sum / n;
        let var = (self.sum_sq / n - mean * mean).max(0.0);
        Estimate {
            mean,
            std_err: (var / n).sqrt(),
        }
    }
}

/// Samples attempt counts for both links over independent trials.
///
/// Each trial draws from its own counter-indexed stream of one seeded
/// generator, so the result depends only on (seed, trials) no matter how
/// trials are scheduled.
pub fn simulate_attempts(model: &AttemptModel, trials: u64, seed: u64) -> Result<SimulatedStats> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let base = ChaCha8Rng::seed_from_u64(seed);
    let mut acc_w = Accumulator::new();
    let mut acc_t = Accumulator::new();
    let mut acc_max = Accumulator::new();
    let mut acc_min = Accumulator::new();
    for trial in 0..trials {
        let mut rng = base.clone();
        rng.set_stream(trial);
        let n1 = sample_geometric(model.p1, &mut rng);
        let n2 = sample_geometric(model.p2, &mut rng);
        acc_w.push(n1.abs_diff(n2) as f64);
        acc_t.push((n1 + n2) as f64);
        acc_max.push(n1.max(n2) as f64);
        acc_min.push(n1.min(n2) as f64);
    }
    let n = trials as f64;
    Ok(SimulatedStats {
        n_w: acc_w.estimate(n),
        n_t: acc_t.estimate(n),
        n_max: acc_max.estimate(n),
        n_min: acc_min.estimate(n),
        trials,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn fiber(length: f64) -> FiberModel {
        FiberModel::new(0.2, length, FIBER_VELOCITY_KM_S).unwrap()
    }

    #[test]
    fn transmittance_values() {
        assert_eq!(transmittance(0.0, 0.2), 1.0);
        assert_abs_diff_eq!(transmittance(50.0, 0.2), 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(transmittance(15.0, 0.2), 10f64.powf(-0.3), epsilon = 1e-15);
    }

    #[test]
    fn diff_distribution_deterministic_case() {
        let m = AttemptModel::new(1.0, 1.0).unwrap();
        assert_eq!(diff_distribution(0, &m), 1.0);
        assert_eq!(diff_distribution(1, &m), 0.0);
        assert_eq!(diff_distribution(5, &m), 0.0);
    }

    #[test]
    fn diff_distribution_normalized() {
        let m = AttemptModel::new(0.3, 0.7).unwrap();
        let mut total = 0.0;
        for k in 0..2000 {
            total += diff_distribution(k, &m);
        }
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        // closed geometric resummation gives exactly 1
        let analytic = (m.p1 + m.p2 - m.p1 * m.p2) / (1.0 - m.q1() * m.q2());
        assert_abs_diff_eq!(analytic, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn diff_mean_matches_expectation() {
        let m = AttemptModel::new(0.3, 0.7).unwrap();
        let mut mean = 0.0;
        for k in 0..2000 {
            mean += k as f64 * diff_distribution(k, &m);
        }
        let stats = attempt_stats(&m, &fiber(10.0));
        assert_abs_diff_eq!(mean, stats.n_w, epsilon = 1e-10);
    }

    #[test]
    fn attempt_stats_identities() {
        for &(p1, p2) in &[(0.1, 0.9), (0.35, 0.35), (0.02, 0.6)] {
            let m = AttemptModel::new(p1, p2).unwrap();
            let s = attempt_stats(&m, &fiber(25.0));
            assert_abs_diff_eq!(s.n_max + s.n_min, s.n_t, epsilon = 1e-12);
            assert_abs_diff_eq!(s.n_max - s.n_min, s.n_w, epsilon = 1e-12);
            let t = 25.0 / FIBER_VELOCITY_KM_S;
            assert_abs_diff_eq!(s.t_prep, s.n_max * t, epsilon = 1e-15);
            assert_abs_diff_eq!(s.t_wait, s.n_w * t, epsilon = 1e-15);
        }
    }

    #[test]
    fn equal_links_simplification() {
        let p = 0.25;
        let q = 1.0 - p;
        let m = AttemptModel::new(p, p).unwrap();
        let s = attempt_stats(&m, &fiber(25.0));
        assert_abs_diff_eq!(s.n_w, 2.0 * q / (p * (1.0 + q)), epsilon = 1e-12);
        assert_abs_diff_eq!(s.n_t, 2.0 / p, epsilon = 1e-12);
    }

    #[test]
    fn sure_success_stats() {
        let m = AttemptModel::new(1.0, 1.0).unwrap();
        let s = attempt_stats(&m, &fiber(25.0));
        assert_eq!((s.n_w, s.n_t, s.n_max, s.n_min), (0.0, 2.0, 1.0, 1.0));
    }

    #[test]
    fn link_success_composition() {
        let template = LinkConfig::new(0.01, 0.2, 1.0, 0.9).unwrap();
        let p50 = link_success_from_distance(
            &template,
            &fiber(50.0),
            PairSymmetry::ODD_ODD,
            Parity::Odd,
        )
        .unwrap();
        let zeta = 0.9 * 0.1 * 0.2;
        assert!((p50 - 2.0 * zeta * (1.0 - zeta)).abs() < 1e-4);

        let mut prev = f64::INFINITY;
        for i in 0..=12 {
            let l = i as f64 * 5.0;
            let p = link_success_from_distance(
                &template,
                &fiber(l),
                PairSymmetry::ODD_ODD,
                Parity::Odd,
            )
            .unwrap();
            assert!(p <= prev + 1e-15);
            prev = p;
        }
    }

    #[test]
    fn waiting_time_milliseconds_at_repeater_scale() {
        let template = LinkConfig::new(0.01, 0.2, 1.0, 0.9).unwrap();
        for &l in &[10.0, 30.0, 50.0, 60.0] {
            let f = fiber(l);
            let p = link_success_from_distance(&template, &f, PairSymmetry::ODD_ODD, Parity::Odd)
                .unwrap();
            let m = AttemptModel::new(p, p).unwrap();
            let s = attempt_stats(&m, &f);
            assert!(s.t_wait > 1e-4 && s.t_wait < 1.0, "t_wait = {}", s.t_wait);
        }
    }

    #[test]
    fn simulation_matches_analytics() {
        let m = AttemptModel::new(0.3, 0.7).unwrap();
        let f = fiber(25.0);
        let exact = attempt_stats(&m, &f);
        let sim = simulate_attempts(&m, 200_000, 7).unwrap();
        for (est, truth) in [
            (sim.n_w, exact.n_w),
            (sim.n_t, exact.n_t),
            (sim.n_max, exact.n_max),
            (sim.n_min, exact.n_min),
        ] {
            assert!(
                (est.mean - truth).abs() < 4.0 * est.std_err,
                "mean {} vs {} with se {}",
                est.mean,
                truth,
                est.std_err
            );
        }
    }

    #[test]
    fn simulation_deterministic() {
        let m = AttemptModel::new(0.2, 0.5).unwrap();
        let a = simulate_attempts(&m, 5000, 42).unwrap();
        let b = simulate_attempts(&m, 5000, 42).unwrap();
        assert_eq!(a, b);
        let c = simulate_attempts(&m, 5000, 43).unwrap();
        assert_ne!(a.n_w.mean, c.n_w.mean);
    }

    #[test]
    fn simulation_sure_success() {
        let m = AttemptModel::new(1.0, 1.0).unwrap();
        let s = simulate_attempts(&m, 100, 1).unwrap();
        assert_eq!(s.n_w.mean, 0.0);
        assert_eq!(s.n_t.mean, 2.0);
        assert_eq!(s.n_max.mean, 1.0);
        assert_eq!(s.n_min.mean, 1.0);
    }

    #[test]
    fn invalid_inputs() {
        assert!(AttemptModel::new(0.0, 0.5).is_err());
        assert!(AttemptModel::new(0.5, 1.1).is_err());
        let m = AttemptModel::new(0.5, 0.5).unwrap();
        assert!(simulate_attempts(&m, 0, 1).is_err());
    }

    #[test]
    fn lifetime_flag() {
        let m = AttemptModel::new(0.05, 0.05).unwrap();
        let s = attempt_stats(&m, &fiber(50.0));
        assert!(s.within_lifetime(1.0));
        assert!(!s.within_lifetime(1e-9));
    }
}
