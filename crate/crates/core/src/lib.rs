//! Engine for the network creation game with per-player link prices.
//!
//! Each player `i` buys a set of edges `s_i` at price `alpha_i` per edge and
//! pays the sum of its shortest-path distances to every other player in the
//! undirected graph formed by all purchases. The crate computes player and
//! social costs, checks and enumerates (weak) Nash equilibria, runs
//! best-response dynamics, finds social optima by exhaustive search, reports
//! the price of anarchy and stability, and adjudicates the structural case
//! claims (complete graph, star, clique-plus-star) instance by instance.
//!
//! ```
//! use netforge::{claims, equilibrium, CostVector, Limits, NashMode};
//!
//! let costs = CostVector::new(vec![0.5, 0.5, 0.5]).unwrap();
//! let profile = claims::complete_profile(3);
//! let report = equilibrium::is_nash(&profile, &costs, NashMode::Exact, &Limits::default()).unwrap();
//! assert!(report.is_nash);
//! ```

pub mod claims;
pub mod cli;
pub mod equilibrium;
mod error;
pub mod fixed;
pub mod game;
pub mod graph;
pub mod io;
pub mod optimum;
mod parallel;
pub mod sweep;

pub use claims::{ClaimId, ClaimVerdict, ClaimWitness, CliqueAttachment, ThresholdSplit};
pub use equilibrium::{
    DeviationWitness, DynamicsOrder, DynamicsOutcome, NashConcept, NashMode, NashReport,
};
pub use error::{Error, Result};
pub use game::{Cost, CostVector, OwnedGraph};
pub use graph::{Distance, DistanceMatrix, PlayerId, PlayerSet, StrategyProfile, UndirectedGraph};
pub use optimum::{OptimumReport, RatioReport};

/// Tolerance for every strict-improvement and optimality comparison on finite costs.
pub const EPSILON: f64 = 1e-9;

/// Largest game the bitset representation supports.
pub const MAX_PLAYERS: usize = 64;

/// Enumeration caps. Each exhaustive routine refuses games above its cap
/// with [`Error::Capacity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Single best response searches `2^(n-1)` purchase sets.
    pub best_response: usize,
    /// Equilibrium enumeration walks `2^(n(n-1))` profiles.
    pub enumerate_nash: usize,
    /// Optimum search walks `2^(n(n-1)/2)` graphs.
    pub optimum: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            best_response: 12,
            enumerate_nash: 5,
            optimum: 7,
        }
    }
}

impl Limits {
    pub(crate) fn check(what: &'static str, n: usize, cap: usize) -> Result<()> {
        if n > cap {
            Err(Error::Capacity { what, n, cap })
        } else {
            Ok(())
        }
    }
}
