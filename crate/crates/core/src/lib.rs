//! The quantum angle `∠(a, b) = arccos |⟨a|b⟩|` as a metric on physical
//! states, its kinematics along curves of states, its dynamics under
//! one-parameter unitary groups, and a checker for the certainty principle
//! `|δs|·ΔA ≥ ħ`.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod io;
pub mod kinematics;
pub mod models;
pub mod report;
pub mod sampling;

pub use dynamics::{EvolutionContext, HermitianGenerator, OrbitStats};
pub use error::{Error, Result};
pub use hilbert::{QuantumAngle, StateVector, C64};
pub use kinematics::Curve;
pub use report::BoundReport;
