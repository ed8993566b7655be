//! Annealed Ising model on random regular graphs and configuration models:
//! exact finite-size laws, variational thermodynamic limits, quenched
//! comparison, and Monte Carlo / enumeration oracles.

pub mod configmodel;
pub mod error;
pub mod finite;
pub mod gtable;
pub mod math;
pub mod params;
pub mod quad;
pub mod quenched;
pub mod regular;
pub mod root;
pub mod sampler;

pub use configmodel::{cm_pressure, g_limit, lambda_fn, lambda_star, DegreeDistribution};
pub use error::{Error, Result};
pub use finite::{finite_thermo, limit_theorem_report, FiniteThermo, SpinCountLaw};
pub use gtable::GTable;
pub use params::ModelParams;
pub use quenched::{quenched_pressure, QuenchedResult};
pub use regular::{critical_beta, phase_diagram, pressure, ThermoResult};
