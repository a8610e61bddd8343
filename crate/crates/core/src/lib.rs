//! Hardy-type nonlocality for two spin-½ particles.
//!
//! For any two spin components per particle in the x-z plane, this crate builds the
//! unique state that satisfies the Hardy conditions, evaluates and optimizes the
//! probability of the contradiction, analyzes the state's Schmidt structure and
//! checks the argument against local hidden-variable models.
//!
//! Angles are radians throughout; all amplitudes are real.
//!
//! ```
//! use hardy_lab::{golden, hardy};
//!
//! let t0 = golden::theta_zero();
//! let setup = hardy::MeasurementSetup::from_relative(t0, t0);
//! let state = hardy::construct_state(&setup, hardy::Sign::Positive).unwrap();
//! let report = hardy::check_conditions(&state, &setup, hardy::HardyVariant::Original, hardy::DEFAULT_ZERO_TOL);
//! assert!(report.holds);
//! assert!((report.p1d - golden::p_max()).abs() < 1e-12);
//! ```

pub mod error;
pub mod golden;
pub mod hardy;
pub mod nonlocal;
pub mod optimize;
pub mod schmidt;
pub mod spinalg;

pub use error::{HardyError, Result};
pub use hardy::{HardyReport, HardyVariant, MeasurementSetup, TwoQubitState};
pub use spinalg::{Angle, Outcome, Side};
