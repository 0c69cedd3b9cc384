//! Sum-rate maximization for a two-user downlink NOMA system served by
//! pinching antennas on a single dielectric waveguide.
//!
//! - [`channel`]: spherical-wave line-of-sight gains for pinching and
//!   conventional antennas.
//! - [`noma`]: achievable rates, the sum-rate objective and the closed-form
//!   power split.
//! - [`placement`]: bisection placement with phase fine-tuning.
//! - [`oracle`]: exhaustive references for the power split and placement.
//! - [`sim`]: seeded Monte Carlo sweeps and tabular output.
//!
//! The `parallel` feature (on by default) runs trial batches and oracle grids
//! on rayon; without it everything runs sequentially with identical results.

pub mod channel;
pub mod config;
pub mod error;
pub mod noma;
pub mod oracle;
pub mod par;
pub mod placement;
pub mod sim;
pub mod table;

pub use channel::{AntennaLayout, BaselineMode, ComplexGain, SystemParams, UserPosition};
pub use config::RunConfig;
pub use error::{Error, Result};
pub use noma::{FeasibilityReport, PowerSplit, QosTargets, RateReport};
pub use oracle::{OracleConfig, Strategy};
pub use par::Execution;
pub use placement::{AlgoConfig, PlacementSolution};
pub use sim::{Scenario, Scheme, SweepSpec};
