//! Single-mode and multimode Schrodinger-cat states produced by electro-optic
//! phase modulation.
//!
//! A modulator driven at index `m` and phase `phi` scatters a carrier
//! amplitude over sidebands `mu in [-S, S]` with weights given by Bessel
//! functions of the first kind, `U_{mu 0} = exp(-i mu phi) J_mu(m)`.

use crate::error::{Error, Result};
use crate::Complex;

/// Even (`+`) or odd (`-`) cat-state symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CatSymmetry {
    Even,
    Odd,
}

impl CatSymmetry {
    /// Symmetry sign: `+1` for even, `-1` for odd.
    pub fn sign(self) -> f64 {
        match self {
            CatSymmetry::Even => 1.0,
            CatSymmetry::Odd => -1.0,
        }
    }

    pub fn from_sign(sign: f64) -> CatSymmetry {
        if sign >= 0.0 {
            CatSymmetry::Even
        } else {
            CatSymmetry::Odd
        }
    }

    /// Product of two symmetry labels (group multiplication of signs).
    pub fn product(self, other: CatSymmetry) -> CatSymmetry {
        if self == other {
            CatSymmetry::Even
        } else {
            CatSymmetry::Odd
        }
    }
}

/// Modulation index, modulation phase, and sideband cutoff of a phase modulator.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ModulatorSettings {
    /// Modulation index `m >= 0`.
    pub index: f64,
    /// Modulation phase in radians.
    pub phase: f64,
    /// Sideband cutoff `S >= 0`; sidebands run over `[-S, S]`.
    pub cutoff: i32,
}

impl ModulatorSettings {
    pub fn new(index: f64, phase: f64, cutoff: i32) -> Result<Self> {
        if !index.is_finite() || index < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "modulation index must be finite and nonnegative, got {index}"
            )));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidArgument("modulation phase must be finite".into()));
        }
        if cutoff < 0 {
            return Err(Error::InvalidArgument(format!(
                "sideband cutoff must be nonnegative, got {cutoff}"
            )));
        }
        Ok(Self { index, phase, cutoff })
    }

    /// Smallest cutoff `S` whose Bessel-weight deficit `1 - sum_mu J_mu(m)^2`
    /// drops below `1e-12`.
    pub fn auto_cutoff(index: f64) -> i32 {
        let mut s = index.ceil() as i32;
        loop {
            let deficit = bessel_sum_deficit(index, s);
            if deficit < 1e-12 {
                return s;
            }
            s += 1;
            // J_mu(m) decays superexponentially past mu ~ m; this cannot run away.
            assert!(s < 10_000, "Bessel sum failed to converge");
        }
    }

    pub fn with_auto_cutoff(index: f64, phase: f64) -> Result<Self> {
        let cutoff = Self::auto_cutoff(index);
        Self::new(index, phase, cutoff)
    }
}

/// `1 - sum_{|mu| <= s} J_mu(m)^2`, clamped at zero.
pub fn bessel_sum_deficit(index: f64, cutoff: i32) -> f64 {
    let mut sum = bessel_j(0, index).powi(2);
    for mu in 1..=cutoff {
        sum += 2.0 * bessel_j(mu, index).powi(2);
    }
    (1.0 - sum).max(0.0)
}

/// Bessel function of the first kind of integer order, by Miller-style
/// downward recurrence normalized with `J_0^2 + 2 sum_{k>=1} J_k^2 = 1`.
pub fn bessel_j(order: i32, x: f64) -> f64 {
    let n = order.unsigned_abs() as usize;
    // J_{-n}(x) = (-1)^n J_n(x)
    let sign = if order < 0 && n % 2 == 1 { -1.0 } else { 1.0 };
    if x == 0.0 {
        return if n == 0 { sign } else { 0.0 };
    }
    debug_assert!(x > 0.0, "modulation index is nonnegative");

    // Start the recurrence far enough above max(order, x) that the seed
    // contamination has decayed below f64 precision at order n.
    let start = {
        let base = n.max(x.ceil() as usize);
        let s = base + 16 + (2.0 * x.sqrt().max(1.0) * 8.0) as usize;
        s + (s % 2) // even start keeps the normalization sum aligned
    };

    let mut jkp1 = 0.0_f64; // candidate J_{k+1}
    let mut jk = 1.0_f64; // candidate J_k, starting at k = start
    let mut result = if n == start { jk } else { 0.0 };
    let mut norm_sq = 2.0 * jk * jk;
    for k in (1..=start).rev() {
        let jkm1 = (2.0 * k as f64 / x) * jk - jkp1;
        jkp1 = jk;
        jk = jkm1; // jk now holds the candidate J_{k-1}
        if k - 1 == n {
            result = jk;
        }
        norm_sq += if k - 1 >= 1 { 2.0 * jk * jk } else { jk * jk };
        // Rescale to dodge overflow when the start order is far above x;
        // the threshold leaves room for the squared accumulator.
        if jk.abs() > 1e140 {
            let scale = 1e-140;
            jk *= scale;
            jkp1 *= scale;
            result *= scale;
            norm_sq *= scale * scale;
        }
    }
    sign * result / norm_sq.sqrt()
}

/// Complex sideband amplitudes indexed by `mu in [-S, S]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeVector {
    cutoff: i32,
    amplitudes: Vec<Complex>,
}

impl ModeVector {
    pub fn new(cutoff: i32, amplitudes: Vec<Complex>) -> Result<Self> {
        if amplitudes.len() != (2 * cutoff + 1) as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {} amplitudes for cutoff {cutoff}, got {}",
                2 * cutoff + 1,
                amplitudes.len()
            )));
        }
        Ok(Self { cutoff, amplitudes })
    }

    pub fn zero(cutoff: i32) -> Self {
        Self {
            cutoff,
            amplitudes: vec![Complex::new(0.0, 0.0); (2 * cutoff + 1) as usize],
        }
    }

    pub fn cutoff(&self) -> i32 {
        self.cutoff
    }

    pub fn amplitude(&self, mu: i32) -> Result<Complex> {
        if mu.abs() > self.cutoff {
            return Err(Error::IndexOutOfRange { index: mu, cutoff: self.cutoff });
        }
        Ok(self.amplitudes[(mu + self.cutoff) as usize])
    }

    /// Total mean photon number `sum_mu |alpha_mu|^2`.
    pub fn mean_photons(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, Complex)> + '_ {
        let cutoff = self.cutoff;
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(i, &a)| (i as i32 - cutoff, a))
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self {
            cutoff: self.cutoff,
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }
}

/// Evolution-matrix element `U_{mu 0} = exp(-i mu phi) J_mu(m)`.
pub fn evolution_element(mu: i32, settings: &ModulatorSettings) -> Result<Complex> {
    if mu.abs() > settings.cutoff {
        return Err(Error::IndexOutOfRange { index: mu, cutoff: settings.cutoff });
    }
    let phase = Complex::from_polar(1.0, -(mu as f64) * settings.phase);
    Ok(phase * bessel_j(mu, settings.index))
}

/// Scatter a carrier amplitude over sidebands: `alpha_mu = conj(U_{mu 0}) alpha`.
pub fn modulate(alpha: Complex, settings: &ModulatorSettings) -> ModeVector {
    let cutoff = settings.cutoff;
    let amplitudes = (-cutoff..=cutoff)
        .map(|mu| {
            let u = evolution_element(mu, settings).expect("mu in range by construction");
            u.conj() * alpha
        })
        .collect();
    ModeVector { cutoff, amplitudes }
}

/// Cat-state normalization `M_nu = 2 (1 + nu exp(-2 |alpha|^2))`, or the
/// vacuum-subtracted `M~_+ = M_+ - 4 exp(-|alpha|^2)` when `modified` is set.
pub fn cat_norm(mean_photons: f64, symmetry: CatSymmetry, modified: bool) -> Result<f64> {
    if !(mean_photons >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "mean photon number must be nonnegative, got {mean_photons}"
        )));
    }
    if modified && symmetry == CatSymmetry::Odd {
        return Err(Error::InvalidArgument(
            "vacuum subtraction applies only to the even cat".into(),
        ));
    }
    let m = 2.0 * (1.0 + symmetry.sign() * (-2.0 * mean_photons).exp());
    if modified {
        // M_+ - 4 e^{-n} = 2 (1 - e^{-n})^2, written in the cancellation-free form.
        let t = -(-mean_photons).exp_m1(); // 1 - e^{-n}
        Ok(2.0 * t * t)
    } else {
        Ok(m)
    }
}

/// A multimode cat state together with its norm.
#[derive(Debug, Clone)]
pub struct MultimodeCat {
    pub symmetry: CatSymmetry,
    pub modes: ModeVector,
    pub norm: f64,
    /// Set when the norm vanishes (odd cat at zero amplitude).
    pub degenerate: bool,
}

impl MultimodeCat {
    pub fn new(symmetry: CatSymmetry, modes: ModeVector) -> Result<Self> {
        let norm = cat_norm(modes.mean_photons(), symmetry, false)?;
        let degenerate = norm == 0.0;
        Ok(Self { symmetry, modes, norm, degenerate })
    }
}

/// Partition of the sidebands into quantum-memory and beam-splitter groups.
#[derive(Debug, Clone)]
pub struct ModePartition {
    pub qm_indices: Vec<i32>,
    pub bs_indices: Vec<i32>,
    /// Mean photon number stored in memory, `|alpha_qm|^2`.
    pub n_qm: f64,
    /// Mean photon number sent to the relay, `|alpha_bs|^2`.
    pub n_bs: f64,
    /// Photon-number ratio `|alpha_bs|^2 / |alpha|^2`; zero at the degenerate point.
    pub r_bs: f64,
    /// Set when the total amplitude vanishes and `r_bs` is a convention.
    pub degenerate: bool,
}

/// Split a mode vector into relay-bound and memory-bound groups.
pub fn split_modes(modes: &ModeVector, bs_indices: &[i32]) -> Result<ModePartition> {
    let cutoff = modes.cutoff();
    let mut bs_sorted = bs_indices.to_vec();
    bs_sorted.sort_unstable();
    bs_sorted.dedup();
    for &mu in &bs_sorted {
        if mu.abs() > cutoff {
            return Err(Error::IndexOutOfRange { index: mu, cutoff });
        }
    }
    let mut n_bs = 0.0;
    let mut qm_indices = Vec::new();
    for (mu, amp) in modes.iter() {
        if bs_sorted.binary_search(&mu).is_ok() {
            n_bs += amp.norm_sqr();
        } else {
            qm_indices.push(mu);
        }
    }
    let n_total = modes.mean_photons();
    let n_qm = (n_total - n_bs).max(0.0);
    let (r_bs, degenerate) = if n_total > 0.0 {
        (n_bs / n_total, false)
    } else {
        (0.0, true)
    };
    Ok(ModePartition {
        qm_indices,
        bs_indices: bs_sorted,
        n_qm,
        n_bs,
        r_bs,
        degenerate,
    })
}
