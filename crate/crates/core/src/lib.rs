//! Resource theory of activity for finite-dimensional quantum systems with
//! non-degenerate Hamiltonians.
//!
//! States are density matrices written in the energy eigenbasis, with levels
//! ordered by increasing energy. Logarithms are base 2 throughout.

pub mod channels;
pub mod checks;
pub mod convertibility;
pub mod error;
pub mod io;
pub mod linalg;
pub mod monotones;
pub mod parallel;
pub mod sampling;
pub mod solver;
pub mod states;
pub mod tolerance;
pub mod witnesses;

pub use channels::{CorrelationMatrix, EpcprChannel, SubCorrelationMatrix};
pub use convertibility::{ConvertibilityReport, Verdict};
pub use error::{ActivityError, Result};
pub use linalg::{ComplexMatrix, HermitianMatrix, C64};
pub use monotones::{Monotone, MonotoneResult};
pub use parallel::Execution;
pub use solver::SolverOptions;
pub use states::{DensityMatrix, HamiltonianSpectrum, PassiveDistribution};
pub use tolerance::ToleranceConfig;
pub use witnesses::ActivityWitness;
