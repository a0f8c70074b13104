//! 1D quasi-relativistic Vlasov-Maxwell solver.
//!
//! Kinetic electron transport f(t, x, p) coupled to transverse
//! electromagnetic fields (A, B, E_perp) and an electrostatic Poisson
//! equation, integrated by four WENO-based scheme couplings:
//!
//! * `rk-fdweno-rk`  - TVD-RK3 in time, flux-split WENO5 finite differences
//!   for Vlasov, RK-integrated Maxwell.
//! * `rk-fdweno-lf`  - TVD-RK3 Vlasov, leap-frog (Yee) Maxwell.
//! * `ts-dslweno-lf` - Strang splitting with direct (non-conservative)
//!   semi-Lagrangian advection, Yee Maxwell.
//! * `ts-cslweno-lf` - Strang splitting with conservative (flux-balance)
//!   semi-Lagrangian advection, Yee Maxwell.

pub mod advection;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod fields;
pub mod grid;
pub mod init;
pub mod integrators;
pub mod output;
pub mod run;
pub mod weno;

#[cfg(test)]
pub(crate) mod test_util;

pub use config::{parse_config, SimConfig, TimeControl};
pub use diagnostics::{density, DiagnosticsRecord};
pub use error::{QrvmError, Result};
pub use grid::{build_grid, DistributionField, PhaseGrid};
pub use init::{default_params, init_distribution, pump_fields, Maxwellian, PhysicalParams};
pub use integrators::{Scheme, SimState, Simulation, VlasovKernel};
pub use run::{run, RunOutcome, RunReport};
