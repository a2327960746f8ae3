//! Steady-state quantum statistics of a five-mode linearized
//! opto/magnomechanical system.
//!
//! The system couples a microwave cavity (`a`), a magnon mode (`m`), two
//! mechanical modes (`b1`, `b2`) and an optical whispering-gallery mode (`c`).
//! Around a strongly driven steady state, fluctuations obey linear quantum
//! Langevin equations `du/dt = A u + n`; the stationary state is Gaussian and
//! fully described by a 10x10 covariance matrix `V` solving
//! `A V + V Aᵀ = -D`.
//!
//! The crate is organized bottom-up:
//!
//! * [`model`]: parameters, thermal occupations, drift and diffusion matrices.
//! * [`steady`]: classical amplitudes, drive-power conversions, and the
//!   self-consistent effective detunings.
//! * [`lyapunov`]: stability and the steady-state covariance matrix.
//! * [`measures`]: logarithmic negativity and effective occupations.
//! * [`spectrum`]: frequency-domain fluctuations and the optical output
//!   spectrum.
//! * [`config`], [`sweep`], [`presets`]: config ingestion, parameter sweeps
//!   and the figure presets used by the `magnomech` command line tool.
//!
//! ```
//! use magnomech::{Mode, SystemParams};
//!
//! let params = SystemParams::reference();
//! let report = magnomech::sweep::run_point(&params).unwrap();
//! assert!(report.stability.stable);
//! let e_ac = report.entanglement(Mode::A, Mode::C).unwrap();
//! assert!(e_ac > 0.0);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod constants;
mod error;
pub mod lyapunov;
pub mod measures;
pub mod model;
mod mode;
pub mod presets;
pub mod spectrum;
pub mod steady;
pub mod sweep;

pub use error::{Error, Result};
pub use lyapunov::{CovarianceMatrix, StabilityReport};
pub use measures::{BipartiteCM, Measure, Negativity};
pub use model::{DiffusionMatrix, DriftMatrix, SystemParams};
pub use mode::Mode;
pub use spectrum::{FrequencyResponse, SpectrumTrace};
pub use steady::{DriveSpec, SteadyState};
