//! Secure-key-rate calculator for differential-phase-shift QKD under
//! individual attacks, with BB84 and sequential-attack comparison rates and a
//! Monte Carlo pulse-train simulator for the concrete eavesdropping
//! strategies.
//!
//! The crate is organized around six layers:
//!
//! - [`model`] — physical parameter types (channel, source, protocol,
//!   error-correction efficiency) with validation.
//! - [`collision`] — the per-bit collision-probability bound, the
//!   five-parameter attack surface behind it, and a brute-force
//!   maximization oracle that checks the analytic bound.
//! - [`rates`] — closed-form detection, error-rate, and secure-rate
//!   formulas (DPS, BB84 with Poisson or single-photon sources,
//!   sequential attacks, photon-splitting leak fractions).
//! - [`optimize`] — per-loss mean-photon-number optimization, loss
//!   sweeps, and cutoff-loss determination.
//! - [`montecarlo`] — discrete-time simulator of the pulse train with
//!   pluggable eavesdroppers, for empirical cross-checks of the closed
//!   forms.
//! - [`cli`] — the `dpsqkd` command-line front end (CSV emission, SVG
//!   charts, reproduction sweeps).

pub mod cli;
pub mod collision;
pub mod model;
pub mod montecarlo;
pub mod optimize;
pub mod rates;

mod svg;

pub use model::{ChannelModel, ErrorCorrection, ProtocolKind, SourceKind, SourceModel};
pub use optimize::{OptimumResult, SweepProtocol, SweepSpec};
pub use rates::RatePoint;
