//! Cutting-plane engine for the passive-cone programs, its LP master solver,
//! and brute-force oracles.

pub mod cutting;
pub mod lp;
pub mod oracle;

pub use cutting::{max_gain_dominated, min_cost_dominating, ConeSolution, PassiveConeVector, SolverOptions};
pub use lp::{dense_lp, LpError, LpProblem, LpRow, LpSolution, RowKind, Sense};
pub use oracle::{oracle_haar_ergotropy, oracle_passive_grid, GridObjective};
