//! Design-space model of a triple-resonance cavity electro-optic transducer.
//!
//! All rates are angular (rad/s). The crate is organised bottom-up:
//!
//! - [`transducer`]: loss bookkeeping, pump buildup, cooperativity and
//!   conversion efficiency in closed form.
//! - [`steady_state`]: linearized input-output solve used as an independent
//!   check on the closed forms, plus the blue-detuned stability boundary.
//! - [`herald`]: Poisson heralding probabilities for remote entanglement and
//!   a seeded Monte Carlo estimator.
//! - [`optimize`] and [`sweep`]: golden-section search and parameter sweeps
//!   over pump power and microwave quality factor.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x >= 0.0)` also rejects NaN

pub mod error;
pub mod herald;
pub mod optimize;
pub mod steady_state;
pub mod sweep;
pub mod transducer;

pub use error::{Error, Result};
pub use herald::{HeraldBreakdown, HeraldModel, McEstimate};
pub use steady_state::{LinearizedSystem, ParametricThreshold, ScatteringPoint};
pub use sweep::{HeraldOptions, PowerAxis, R0Mapping, Spacing, SweepOutputs, SweepRow, SweepSpec};
pub use transducer::{DriveCondition, EfficiencyBreakdown, Mode, ModeLabel, TransducerConfig};

use serde::{Deserialize, Serialize};

/// Pump detuning regime.
///
/// `Red` drives the beam-splitter (state swap) interaction used for
/// conversion; `Blue` drives two-mode squeezing, which creates
/// microwave/optical photon pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Red,
    Blue,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scheme::Red => f.write_str("red"),
            Scheme::Blue => f.write_str("blue"),
        }
    }
}
