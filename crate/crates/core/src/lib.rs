//! Analytic model of a quantum repeater that distributes entanglement via
//! phase-modulated multimode Schrodinger-cat states.
//!
//! The library covers the full pipeline of the scheme: construction of the
//! modulated cat states ([`modes`]), beam-splitter relay outcomes ([`link`]),
//! lossy photon-number-resolving detection ([`photodetect`]), heralded success
//! probabilities and fidelities ([`herald`]), entanglement swapping at a
//! repeater node ([`swap`]), attempt-count and waiting-time statistics
//! ([`timing`]), and phase teleportation over the generated entanglement
//! ([`teleport`]).
//!
//! Every closed form is cross-checked against an independent brute-force
//! engine that works in a truncated photon-number basis ([`fock`]).

pub mod error;
pub mod fock;
pub mod herald;
pub mod link;
pub mod modes;
pub mod photodetect;
pub mod swap;
pub mod teleport;
pub mod timing;

pub use error::{Error, Result};
pub use herald::{HeraldResult, HeraldedDensity, LinkConfig, Parity};
pub use link::{OutcomeProbs, PairSymmetry};
pub use modes::{CatSymmetry, ModePartition, ModeVector, ModulatorSettings, MultimodeCat};
pub use photodetect::{ChannelParams, ClickParity, DetectorParams, RelayStateLabel, SignalSplit};
pub use swap::{LinkState, SwapConfig, SwapResult};
pub use teleport::{BobState, TeleportConfig, TeleportOutcome};
pub use timing::{AttemptModel, FiberModel, TimingStats};

/// Complex amplitude type used throughout the crate.
pub type Complex = num_complex::Complex64;
