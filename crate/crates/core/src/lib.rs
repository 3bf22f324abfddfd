//! Estimating the number of Minishogi positions reachable from the initial
//! position.
//!
//! The candidate space of first-player-to-move positions is counted exactly
//! and indexed by a bijective rank ([`codec`]). Uniformly sampled ranks are
//! classified by cheap legality filters ([`legality`]) and a retrograde
//! best-first search back to a two-Kings-only position ([`retro`]). The
//! [`estimator`] aggregates the pass rates into a confidence interval on the
//! number of reachable positions, and [`oracle`] provides forward-enumeration
//! ground truth for cross-checking.

pub mod codec;
pub mod error;
pub mod estimator;
pub mod legality;
pub mod oracle;
pub mod retro;
pub mod rules;

pub use error::{Error, Result};
