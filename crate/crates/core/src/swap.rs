//! Entanglement swapping at a repeater node.
//!
//! Two heralded links release their stored modes onto the node's balanced
//! beam splitter; a click-parity outcome there fuses the outer nodes into a
//! longer-range entangled state. Memory readout inefficiency folds into the
//! node's effective detection ratio.

use crate::error::{Error, Result};
use crate::herald::{self, LinkConfig, Parity};
use crate::link::PairSymmetry;
use crate::modes::CatSymmetry;

/// Node configuration: both incoming links share one link configuration.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SwapConfig {
    pub link: LinkConfig,
    /// Memory readout efficiency.
    pub eta_m: f64,
}

impl SwapConfig {
    pub fn new(link: LinkConfig, eta_m: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta_m) {
            return Err(Error::InvalidArgument(format!(
                "memory efficiency must lie in [0, 1], got {eta_m}"
            )));
        }
        Ok(Self { link, eta_m })
    }

    /// Effective (photon ratio, loss-folded ratio, photon number) seen by
    /// the node beam splitter: the full stored amplitude of both sides goes
    /// to the node, so the ratio is 1/2 and the photon number is the total
    /// stored across the two memories.
    pub fn node_params(&self) -> (f64, f64, f64) {
        (
            0.5,
            self.eta_m * self.link.xi / 2.0,
            2.0 * (1.0 - self.link.r_bs) * self.link.a,
        )
    }
}

/// Fidelity weights of one incoming heralded link.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LinkState {
    pub f_plus: f64,
    pub f_minus: f64,
}

impl LinkState {
    pub fn new(f_plus: f64, f_minus: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&f_plus)
            || !(0.0..=1.0).contains(&f_minus)
            || (f_plus + f_minus - 1.0).abs() > 1e-9
        {
            return Err(Error::InvalidArgument(format!(
                "fidelity weights must be probabilities summing to 1, got ({f_plus}, {f_minus})"
            )));
        }
        Ok(Self { f_plus, f_minus })
    }

    pub const PURE_PLUS: LinkState = LinkState {
        f_plus: 1.0,
        f_minus: 0.0,
    };
    pub const PURE_MINUS: LinkState = LinkState {
        f_plus: 0.0,
        f_minus: 1.0,
    };
}

impl From<herald::HeraldResult> for LinkState {
    fn from(h: herald::HeraldResult) -> Self {
        LinkState {
            f_plus: h.f_plus,
            f_minus: h.f_minus,
        }
    }
}

/// Outcome of fusing two links at a node.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SwapResult {
    pub p_success: f64,
    pub f_plus_12: f64,
    pub f_minus_12: f64,
}

/// Outcome of folding a whole chain of links through repeated swaps.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ChainResult {
    /// Product of the per-node success probabilities.
    pub p_success: f64,
    pub state: LinkState,
    /// Set when more than one swap was folded; the repeated-swap rule is an
    /// extension beyond the two-link analysis.
    pub extrapolated: bool,
}

fn pair_of(mu1: CatSymmetry, mu2: CatSymmetry) -> PairSymmetry {
    PairSymmetry::new(mu1, mu2)
}

const COMPONENTS: [CatSymmetry; 2] = [CatSymmetry::Even, CatSymmetry::Odd];

fn weight(state: &LinkState, mu: CatSymmetry) -> f64 {
    match mu {
        CatSymmetry::Even => state.f_plus,
        CatSymmetry::Odd => state.f_minus,
    }
}

/// Node-level success probability averaged over the component mixture of
/// both incoming links.
pub fn swap_success(
    link1: &LinkState,
    link2: &LinkState,
    parity: Parity,
    cfg: &SwapConfig,
) -> Result<f64> {
    let (_, zeta_m, a_node) = cfg.node_params();
    let mut total = 0.0;
    for mu1 in COMPONENTS {
        for mu2 in COMPONENTS {
            let p = herald::success_prob_at(pair_of(mu1, mu2), parity, zeta_m, a_node)?;
            total += p * weight(link1, mu1) * weight(link2, mu2);
        }
    }
    Ok(total)
}

/// Fidelity weights of the fused state shared by the outer nodes.
pub fn swap_fidelity(
    link1: &LinkState,
    link2: &LinkState,
    parity: Parity,
    cfg: &SwapConfig,
) -> Result<(f64, f64)> {
    let (r_node, zeta_m, a_node) = cfg.node_params();
    let mut num_plus = 0.0;
    let mut num_minus = 0.0;
    let mut p_total = 0.0;
    for mu1 in COMPONENTS {
        for mu2 in COMPONENTS {
            let pair = pair_of(mu1, mu2);
            let w = weight(link1, mu1) * weight(link2, mu2);
            let p = herald::success_prob_at(pair, parity, zeta_m, a_node)?;
            let (f_plus, f_minus) = herald::fidelity_at(pair, parity, r_node, zeta_m, a_node)?;
            num_plus += f_plus * p * w;
            num_minus += f_minus * p * w;
            p_total += p * w;
        }
    }
    if p_total <= 0.0 {
        return Err(Error::UndefinedFidelity);
    }
    Ok((num_plus / p_total, num_minus / p_total))
}

/// Success probability and fused-state fidelities in one call.
pub fn swap(
    link1: &LinkState,
    link2: &LinkState,
    parity: Parity,
    cfg: &SwapConfig,
) -> Result<SwapResult> {
    let p_success = swap_success(link1, link2, parity, cfg)?;
    let (f_plus_12, f_minus_12) = swap_fidelity(link1, link2, parity, cfg)?;
    Ok(SwapResult {
        p_success,
        f_plus_12,
        f_minus_12,
    })
}

/// Folds a chain of link states left to right through repeated swaps,
/// assuming every node operates at the same configuration and the stored
/// amplitude is unchanged by each fusion.
pub fn swap_chain(links: &[LinkState], parity: Parity, cfg: &SwapConfig) -> Result<ChainResult> {
    let (first, rest) = links
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("chain needs at least one link".into()))?;
    let mut state = *first;
    let mut p_success = 1.0;
    for next in rest {
        let res = swap(&state, next, parity, cfg)?;
        p_success *= res.p_success;
        state = LinkState {
            f_plus: res.f_plus_12,
            f_minus: res.f_minus_12,
        };
    }
    Ok(ChainResult {
        p_success,
        state,
        extrapolated: links.len() > 2,
    })
}
