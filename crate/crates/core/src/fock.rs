//! Brute-force verification engine in a truncated photon-number basis.
//!
//! States are dense coefficient tensors over up to four modes. Beam
//! splitters, loss channels, and detector POVMs are implemented exactly
//! within the cutoff, so every analytic probability and fidelity in the
//! crate can be cross-checked on small instances by direct linear algebra.

pub mod verify;

use crate::error::{Error, Result};
use crate::modes::CatSymmetry;
use crate::photodetect::ClickParity;
use crate::Complex;

/// Hard cap on the joint-tensor mode count.
pub const MAX_MODES: usize = 4;
/// Hard cap on a single-mode cutoff.
pub const MAX_CUTOFF: usize = 64;
/// Default bound on probability mass allowed to leave the truncated basis.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

fn ln_factorials(up_to: usize) -> Vec<f64> {
    let mut lnf = vec![0.0; up_to + 1];
    for n in 1..=up_to {
        lnf[n] = lnf[n - 1] + (n as f64).ln();
    }
    lnf
}

/// Cutoff heuristic keeping the Poisson tail of a coherent amplitude with
/// the given mean photon number far below the tail tolerance.
pub fn recommended_cutoff(mean_photons: f64) -> usize {
    (mean_photons + 10.0 * (mean_photons + 1.0).sqrt() + 20.0).ceil() as usize
}

/// Single-mode state in the number basis, indices 0..=cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub cutoff: usize,
    pub coeffs: Vec<Complex>,
}

impl FockVector {
    pub fn new(coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > MAX_CUTOFF + 1 {
            return Err(Error::InvalidArgument(format!(
                "coefficient length {} outside 1..={}",
                coeffs.len(),
                MAX_CUTOFF + 1
            )));
        }
        Ok(FockVector {
            cutoff: coeffs.len() - 1,
            coeffs,
        })
    }

    pub fn vacuum(cutoff: usize) -> Self {
        let mut coeffs = vec![Complex::new(0.0, 0.0); cutoff + 1];
        coeffs[0] = Complex::new(1.0, 0.0);
        FockVector { cutoff, coeffs }
    }

    pub fn number_state(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(Error::IndexOutOfRange {
                index: n as i32,
                cutoff: cutoff as i32,
            });
        }
        let mut coeffs = vec![Complex::new(0.0, 0.0); cutoff + 1];
        coeffs[n] = Complex::new(1.0, 0.0);
        Ok(FockVector { cutoff, coeffs })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &FockVector) -> Complex {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr().sqrt();
        if n < 1e-150 {
            return Err(Error::Degenerate("state has vanishing norm".into()));
        }
        for c in &mut self.coeffs {
            *c /= n;
        }
        Ok(())
    }

    pub fn photon_distribution(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }
}

/// Coherent state expansion in the number basis.
pub fn coherent_fock(alpha: Complex, cutoff: usize) -> Result<FockVector> {
    if cutoff > MAX_CUTOFF {
        return Err(Error::Infeasible(format!(
            "cutoff {cutoff} exceeds the {MAX_CUTOFF} cap"
        )));
    }
    let n_mean = alpha.norm_sqr();
    let mut coeffs = Vec::with_capacity(cutoff + 1);
    let mut c = Complex::new((-n_mean / 2.0).exp(), 0.0);
    coeffs.push(c);
    for n in 1..=cutoff {
        c *= alpha / (n as f64).sqrt();
        coeffs.push(c);
    }
    let v = FockVector {
        cutoff,
        coeffs,
    };
    let tail = (1.0 - v.norm_sqr()).max(0.0);
    if tail > 1e-12 {
        return Err(Error::TailBound {
            cutoff,
            tail,
            tolerance: 1e-12,
        });
    }
    Ok(v)
}

/// Cat state expansion; the modified symmetric cat has its vacuum component
/// removed before normalization.
pub fn cat_fock(
    alpha: Complex,
    symmetry: CatSymmetry,
    modified: bool,
    cutoff: usize,
) -> Result<FockVector> {
    if modified && symmetry == CatSymmetry::Odd {
        return Err(Error::InvalidArgument(
            "only the symmetric cat has a modified variant".into(),
        ));
    }
    let plus = coherent_fock(alpha, cutoff)?;
    let minus = coherent_fock(-alpha, cutoff)?;
    let sign = symmetry.sign();
    let mut coeffs: Vec<Complex> = plus
        .coeffs
        .iter()
        .zip(&minus.coeffs)
        .map(|(p, m)| p + sign * m)
        .collect();
    if modified {
        coeffs[0] = Complex::new(0.0, 0.0);
    }
    let mut v = FockVector { cutoff, coeffs };
    v.normalize().map_err(|_| {
        Error::Degenerate("cat state at zero amplitude has vanishing norm".into())
    })?;
    Ok(v)
}

/// Dense joint state over up to [`MAX_MODES`] modes, row major with the
/// last mode fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct MultimodeFock {
    cutoffs: Vec<usize>,
    coeffs: Vec<Complex>,
}

impl MultimodeFock {
    pub fn from_product(modes: &[FockVector]) -> Result<Self> {
        if modes.is_empty() || modes.len() > MAX_MODES {
            return Err(Error::Infeasible(format!(
                "mode count {} outside 1..={MAX_MODES}",
                modes.len()
            )));
        }
        let mut state = MultimodeFock {
            cutoffs: vec![modes[0].cutoff],
            coeffs: modes[0].coeffs.clone(),
        };
        for m in &modes[1..] {
            let single = MultimodeFock {
                cutoffs: vec![m.cutoff],
                coeffs: m.coeffs.clone(),
            };
            state = tensor(&state, &single)?;
        }
        Ok(state)
    }

    pub fn mode_count(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn dims(&self) -> Vec<usize> {
        self.cutoffs.iter().map(|c| c + 1).collect()
    }

    fn strides(&self) -> Vec<usize> {
        let dims = self.dims();
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        strides
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr().sqrt();
        if n < 1e-150 {
            return Err(Error::Degenerate("state has vanishing norm".into()));
        }
        for c in &mut self.coeffs {
            *c /= n;
        }
        Ok(())
    }

    pub fn inner(&self, other: &MultimodeFock) -> Result<Complex> {
        if self.cutoffs != other.cutoffs {
            return Err(Error::InvalidArgument(
                "inner product needs matching shapes".into(),
            ));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Adds `factor * other` in place; shapes must match.
    pub fn add_scaled(&mut self, other: &MultimodeFock, factor: Complex) -> Result<()> {
        if self.cutoffs != other.cutoffs {
            return Err(Error::InvalidArgument(
                "superposition needs matching shapes".into(),
            ));
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += factor * b;
        }
        Ok(())
    }

    /// Photon-number marginal of one mode.
    pub fn photon_marginal(&self, mode: usize) -> Result<Vec<f64>> {
        let dims = self.dims();
        if mode >= dims.len() {
            return Err(Error::InvalidArgument(format!("no mode {mode}")));
        }
        let strides = self.strides();
        let mut marginal = vec![0.0; dims[mode]];
        for (flat, c) in self.coeffs.iter().enumerate() {
            let n = flat / strides[mode] % dims[mode];
            marginal[n] += c.norm_sqr();
        }
        Ok(marginal)
    }
}

/// Tensor product of two joint states.
pub fn tensor(a: &MultimodeFock, b: &MultimodeFock) -> Result<MultimodeFock> {
    let count = a.mode_count() + b.mode_count();
    if count > MAX_MODES {
        return Err(Error::Infeasible(format!(
            "tensor product would hold {count} modes, cap is {MAX_MODES}"
        )));
    }
    let mut cutoffs = a.cutoffs.clone();
    cutoffs.extend_from_slice(&b.cutoffs);
    let mut coeffs = Vec::with_capacity(a.coeffs.len() * b.coeffs.len());
    for ca in &a.coeffs {
        for cb in &b.coeffs {
            coeffs.push(ca * cb);
        }
    }
    Ok(MultimodeFock { cutoffs, coeffs })
}

/// Two-mode entangled coherent superposition (|a, b> + nu |-a, -b>)/norm.
pub fn entangled_cat_fock(
    alpha: Complex,
    beta: Complex,
    nu: CatSymmetry,
    cutoff_a: usize,
    cutoff_b: usize,
) -> Result<MultimodeFock> {
    let mut state = MultimodeFock::from_product(&[
        coherent_fock(alpha, cutoff_a)?,
        coherent_fock(beta, cutoff_b)?,
    ])?;
    let flipped = MultimodeFock::from_product(&[
        coherent_fock(-alpha, cutoff_a)?,
        coherent_fock(-beta, cutoff_b)?,
    ])?;
    state.add_scaled(&flipped, Complex::new(nu.sign(), 0.0))?;
    state.normalize()?;
    Ok(state)
}

fn ln_choose(lnf: &[f64], n: usize, k: usize) -> f64 {
    lnf[n] - lnf[k] - lnf[n - k]
}

/// ln(base^e) for nonnegative base; None marks an exactly-zero factor.
fn pow_ln(base: f64, e: i64) -> Option<f64> {
    if e == 0 {
        Some(0.0)
    } else if base == 0.0 {
        None
    } else {
        Some(e as f64 * base.ln())
    }
}

/// Number-basis amplitude <m, p+q-m| BS |p, q> for the orthogonal symmetric
/// coupling [[t, r], [r, -t]].
fn bs_amplitude(m: usize, p: usize, q: usize, t: f64, r: f64, lnf: &[f64]) -> f64 {
    let n2 = p + q - m;
    let j_lo = m.saturating_sub(q);
    let j_hi = m.min(p);
    let prefactor = 0.5 * (lnf[m] + lnf[n2] - lnf[p] - lnf[q]);
    let mut total = 0.0;
    for j in j_lo..=j_hi {
        let k = m - j;
        let t_exp = q as i64 - m as i64 + 2 * j as i64;
        let r_exp = p as i64 + m as i64 - 2 * j as i64;
        let (Some(lt), Some(lr)) = (pow_ln(t, t_exp), pow_ln(r, r_exp)) else {
            continue;
        };
        let ln_mag = prefactor + ln_choose(lnf, p, j) + ln_choose(lnf, q, k) + lt + lr;
        let sign = if (q - k) % 2 == 1 { -1.0 } else { 1.0 };
        total += sign * ln_mag.exp();
    }
    total
}

/// Applies the two-mode coupling [[t, r], [r, -t]] to modes `mode_i` and
/// `mode_j`. Probability mass pushed past the cutoffs is accounted and
/// rejected above the tail tolerance.
pub fn beam_splitter_apply(
    state: &MultimodeFock,
    mode_i: usize,
    mode_j: usize,
    t: f64,
    r: f64,
    tail_tol: f64,
) -> Result<MultimodeFock> {
    let dims = self_dims_checked(state, mode_i, mode_j)?;
    if (t * t + r * r - 1.0).abs() > 1e-12 || t < 0.0 || r < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "coupling ({t}, {r}) is not a unit column"
        )));
    }
    let di = dims[mode_i];
    let dj = dims[mode_j];
    let ext = di + dj - 1;
    let lnf = ln_factorials(ext);

    // amplitude table over (p, q, m)
    let mut table = vec![0.0; di * dj * ext];
    for p in 0..di {
        for q in 0..dj {
            for m in 0..=(p + q) {
                table[(p * dj + q) * ext + m] = bs_amplitude(m, p, q, t, r, &lnf);
            }
        }
    }

    let strides = state.strides();
    let si = strides[mode_i];
    let sj = strides[mode_j];
    let mut out = MultimodeFock {
        cutoffs: state.cutoffs.clone(),
        coeffs: vec![Complex::new(0.0, 0.0); state.coeffs.len()],
    };
    let mut lost = 0.0;
    let mut temp = vec![Complex::new(0.0, 0.0); ext * ext];
    for base in block_bases(&dims, &strides, mode_i, mode_j) {
        for cell in temp.iter_mut() {
            *cell = Complex::new(0.0, 0.0);
        }
        for p in 0..di {
            for q in 0..dj {
                let c = state.coeffs[base + p * si + q * sj];
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                let row = (p * dj + q) * ext;
                for m in 0..=(p + q) {
                    temp[m * ext + (p + q - m)] += c * table[row + m];
                }
            }
        }
        for m in 0..ext {
            for n in 0..ext {
                let v = temp[m * ext + n];
                if m < di && n < dj {
                    out.coeffs[base + m * si + n * sj] = v;
                } else {
                    lost += v.norm_sqr();
                }
            }
        }
    }
    if lost > tail_tol {
        return Err(Error::TailBound {
            cutoff: state.cutoffs[mode_i].max(state.cutoffs[mode_j]),
            tail: lost,
            tolerance: tail_tol,
        });
    }
    Ok(out)
}

fn self_dims_checked(state: &MultimodeFock, mode_i: usize, mode_j: usize) -> Result<Vec<usize>> {
    let dims = state.dims();
    if mode_i >= dims.len() || mode_j >= dims.len() || mode_i == mode_j {
        return Err(Error::InvalidArgument(format!(
            "invalid mode pair ({mode_i}, {mode_j})"
        )));
    }
    Ok(dims)
}

/// Flat base offsets enumerating all index combinations of the modes other
/// than the given pair.
fn block_bases(dims: &[usize], strides: &[usize], mode_i: usize, mode_j: usize) -> Vec<usize> {
    let mut bases = vec![0usize];
    for (k, (&d, &s)) in dims.iter().zip(strides).enumerate() {
        if k == mode_i || k == mode_j {
            continue;
        }
        let mut next = Vec::with_capacity(bases.len() * d);
        for &b in &bases {
            for n in 0..d {
                next.push(b + n * s);
            }
        }
        bases = next;
    }
    bases
}

/// Contracts one mode against a bra vector, returning the unnormalized
/// state of the remaining modes.
pub fn project_mode(
    state: &MultimodeFock,
    mode: usize,
    bra: &FockVector,
) -> Result<MultimodeFock> {
    let dims = state.dims();
    if mode >= dims.len() {
        return Err(Error::InvalidArgument(format!("no mode {mode}")));
    }
    if dims.len() == 1 {
        return Err(Error::InvalidArgument(
            "cannot project out the last remaining mode".into(),
        ));
    }
    if bra.coeffs.len() != dims[mode] {
        return Err(Error::InvalidArgument(format!(
            "bra dimension {} does not match mode dimension {}",
            bra.coeffs.len(),
            dims[mode]
        )));
    }
    let strides = state.strides();
    let rest_cutoffs: Vec<usize> = state
        .cutoffs
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != mode)
        .map(|(_, &c)| c)
        .collect();
    let rest_len: usize = rest_cutoffs.iter().map(|c| c + 1).product();
    let mut coeffs = vec![Complex::new(0.0, 0.0); rest_len];
    for (flat, c) in state.coeffs.iter().enumerate() {
        let n = flat / strides[mode] % dims[mode];
        let w = bra.coeffs[n].conj();
        if w.norm_sqr() == 0.0 {
            continue;
        }
        let rest_flat = rest_index(flat, &dims, &strides, mode);
        coeffs[rest_flat] += w * c;
    }
    Ok(MultimodeFock {
        cutoffs: rest_cutoffs,
        coeffs,
    })
}

fn rest_index(flat: usize, dims: &[usize], strides: &[usize], dropped: usize) -> usize {
    let mut rest = 0usize;
    let mut stride = 1usize;
    for k in (0..dims.len()).rev() {
        if k == dropped {
            continue;
        }
        let idx = flat / strides[k] % dims[k];
        rest += idx * stride;
        stride *= dims[k];
    }
    rest
}

/// Click-count probability of a diagonal lossy detector on a single mode.
pub fn lossy_detector_prob(state: &FockVector, k: usize, xi: f64) -> Result<f64> {
    let weights = count_weights(state.cutoff, k, xi)?;
    Ok(state
        .photon_distribution()
        .iter()
        .zip(&weights)
        .map(|(p, w)| p * w)
        .sum())
}

/// Diagonal POVM weights <n|Pi_k|n> = C(n, k) xi^k (1 - xi)^(n - k).
pub fn count_weights(cutoff: usize, k: usize, xi: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::InvalidArgument(format!(
            "efficiency must lie in [0, 1], got {xi}"
        )));
    }
    let lnf = ln_factorials(cutoff);
    let mut weights = vec![0.0; cutoff + 1];
    for (n, w) in weights.iter_mut().enumerate() {
        if n < k {
            continue;
        }
        let (Some(lx), Some(lo)) = (
            pow_ln(xi, k as i64),
            pow_ln(1.0 - xi, (n - k) as i64),
        ) else {
            continue;
        };
        *w = (ln_choose(&lnf, n, k) + lx + lo).exp();
    }
    Ok(weights)
}

/// Diagonal POVM weights for a click-parity outcome.
pub fn parity_weights(cutoff: usize, parity: ClickParity, xi: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::InvalidArgument(format!(
            "efficiency must lie in [0, 1], got {xi}"
        )));
    }
    let mut weights = vec![0.0; cutoff + 1];
    for (n, w) in weights.iter_mut().enumerate() {
        let e = n as i32;
        let none = (1.0 - xi).powi(e);
        let alt = (1.0 - 2.0 * xi).powi(e);
        *w = match parity {
            ClickParity::NoClick => none,
            ClickParity::Even => (1.0 + alt) / 2.0 - none,
            ClickParity::Odd => (1.0 - alt) / 2.0,
        };
    }
    Ok(weights)
}

/// Probability of a diagonal-weight outcome on one mode of a joint state.
pub fn mode_outcome_prob(state: &MultimodeFock, mode: usize, weights: &[f64]) -> Result<f64> {
    let marginal = state.photon_marginal(mode)?;
    if weights.len() != marginal.len() {
        return Err(Error::InvalidArgument(
            "weight vector does not match mode dimension".into(),
        ));
    }
    Ok(marginal.iter().zip(weights).map(|(p, w)| p * w).sum())
}

/// Unnormalized conditional density matrix over the kept modes after
/// applying diagonal weights to the listed measured modes. Unit weights
/// realize a partial trace.
pub struct ConditionalDensity {
    pub dim: usize,
    /// Row-major dim x dim matrix.
    pub matrix: Vec<Complex>,
    /// Trace, equal to the outcome probability for POVM weights.
    pub prob: f64,
}

impl ConditionalDensity {
    /// Normalized overlap <psi| rho |psi> / tr(rho) against a pure state on
    /// the kept modes.
    pub fn fidelity_to(&self, pure: &MultimodeFock) -> Result<f64> {
        if pure.coeffs.len() != self.dim {
            return Err(Error::InvalidArgument(
                "pure state does not match the kept-mode dimension".into(),
            ));
        }
        if self.prob <= 0.0 {
            return Err(Error::UndefinedFidelity);
        }
        let mut total = Complex::new(0.0, 0.0);
        for row in 0..self.dim {
            let mut acc = Complex::new(0.0, 0.0);
            for col in 0..self.dim {
                acc += self.matrix[row * self.dim + col] * pure.coeffs[col];
            }
            total += pure.coeffs[row].conj() * acc;
        }
        Ok((total.re / self.prob).clamp(0.0, 1.0))
    }
}

/// Builds the conditional density of the kept modes given diagonal weights
/// on each measured mode.
pub fn conditional_density(
    state: &MultimodeFock,
    measured: &[(usize, Vec<f64>)],
) -> Result<ConditionalDensity> {
    let dims = state.dims();
    for (mode, weights) in measured {
        if *mode >= dims.len() {
            return Err(Error::InvalidArgument(format!("no mode {mode}")));
        }
        if weights.len() != dims[*mode] {
            return Err(Error::InvalidArgument(format!(
                "weight vector for mode {mode} does not match its dimension"
            )));
        }
    }
    let strides = state.strides();
    let measured_modes: Vec<usize> = measured.iter().map(|(m, _)| *m).collect();
    let kept: Vec<usize> = (0..dims.len())
        .filter(|k| !measured_modes.contains(k))
        .collect();
    if kept.is_empty() {
        return Err(Error::InvalidArgument("no kept modes".into()));
    }
    let kept_dim: usize = kept.iter().map(|&k| dims[k]).product();
    let meas_dim: usize = measured_modes.iter().map(|&k| dims[k]).product();

    // reorganize into per-measured-outcome vectors over the kept modes
    let mut slices = vec![Complex::new(0.0, 0.0); meas_dim * kept_dim];
    let mut weights = vec![1.0; meas_dim];
    for (flat, c) in state.coeffs.iter().enumerate() {
        let mut meas_flat = 0usize;
        for (mode, _) in measured {
            meas_flat = meas_flat * dims[*mode] + flat / strides[*mode] % dims[*mode];
        }
        let mut kept_flat = 0usize;
        for &k in &kept {
            kept_flat = kept_flat * dims[k] + flat / strides[k] % dims[k];
        }
        slices[meas_flat * kept_dim + kept_flat] = *c;
    }
    for meas_flat in 0..meas_dim {
        let mut rem = meas_flat;
        let mut w = 1.0;
        for (mode, mode_weights) in measured.iter().rev() {
            w *= mode_weights[rem % dims[*mode]];
            rem /= dims[*mode];
        }
        weights[meas_flat] = w;
    }

    let mut matrix = vec![Complex::new(0.0, 0.0); kept_dim * kept_dim];
    let mut prob = 0.0;
    for (meas_flat, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let v = &slices[meas_flat * kept_dim..(meas_flat + 1) * kept_dim];
        for (row, vr) in v.iter().enumerate() {
            if vr.norm_sqr() == 0.0 {
                continue;
            }
            prob += w * vr.norm_sqr();
            for (col, vc) in v.iter().enumerate() {
                matrix[row * kept_dim + col] += w * vr * vc.conj();
            }
        }
    }
    Ok(ConditionalDensity {
        dim: kept_dim,
        matrix,
        prob,
    })
}

/// Sends a single-mode state through a pure-loss channel by coupling it to
/// a fresh vacuum environment mode with transmittance eta; returns the
/// joint (signal, environment) state.
pub fn loss_stinespring(state: &FockVector, eta: f64, env_cutoff: usize) -> Result<MultimodeFock> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidArgument(format!(
            "transmittance must lie in [0, 1], got {eta}"
        )));
    }
    let joint = MultimodeFock::from_product(&[state.clone(), FockVector::vacuum(env_cutoff)])?;
    beam_splitter_apply(&joint, 0, 1, eta.sqrt(), (1.0 - eta).sqrt(), DEFAULT_TAIL_TOL)
}
