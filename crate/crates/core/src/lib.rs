//! Slotted-time wireless data-dissemination simulator with a random linear
//! network coding data plane and three channel-access strategies: two
//! game-theoretic schemes driven by mixed-strategy Nash equilibria and an
//! 802.11-like backoff baseline.
//!
//! The crate is organized along the data path:
//! - [`gf256`]: GF(2^8) arithmetic and dense linear algebra.
//! - [`rlnc`]: generation-based coding, decoding and the 13-byte header.
//! - [`game`]: expected-energy cost functions and equilibrium solvers.
//! - [`mac`]: per-slot channel-access decisions of the three strategies.
//! - [`engine`]: the discrete-slot simulator and energy ledger.
//! - [`metrics`]: completion time, energy efficiency, batch aggregation.
//! - [`batch`]: Monte Carlo batches, parallel by default (feature
//!   `parallel`), with a sequential fallback.

pub mod batch;
pub mod engine;
pub mod game;
pub mod gf256;
pub mod mac;
pub mod metrics;
pub mod rlnc;
