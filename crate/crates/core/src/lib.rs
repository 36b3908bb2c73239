//! Topological pressure computations for finite nonautonomous dynamical
//! systems.
//!
//! A system is a finite metric space with an eventually periodic sequence
//! of self-maps and a potential. On top of it the crate computes:
//!
//! - theta-intermediate lower/upper topological pressures via weighted
//!   Bowen-ball (or cover-string) covers with length windows
//!   `N <= n < N/theta + 1`, including the Pesin–Pitskel case `theta = 0`
//!   and the capacity case `theta = 1` ([`cover`]);
//! - classical pressures from weighted spanning and separated sets, plus
//!   the sup-entropy over all starting times ([`classical`]);
//! - measure-theoretic pressures over full-measure covers and both
//!   variational principles ([`measure`]);
//! - an executable battery of structural checks: power rules, time
//!   shifts, commuting maps, (semi)conjugacy and factor inequalities
//!   ([`harness`]);
//! - naive reference implementations used as oracles by the test suites
//!   ([`brute`]).
//!
//! Everything is deterministic: pure functions of the inputs, fixed
//! bisection sequences, and seeded randomness only.

pub mod bitset;
pub mod brute;
pub mod classical;
pub mod config;
pub mod cover;
pub mod error;
pub mod harness;
pub mod measure;
pub mod system;

pub use bitset::PointSet;
pub use cover::{
    bracket_halfwidth, candidates_bowen, candidates_string, capacity_pressures, critical_alpha,
    pesin_pitskel, pressure_profile, pressure_profile_strings, sweep_cap, theta_sweep,
    CoverProblem,
    CriticalAlpha, PressureProfile, ProblemCandidate, ProfileParams, ScaleResult, SolverKind,
    SolverStatus, Theta, ThetaWindow, WeightMode, DEFAULT_CANDIDATE_LIMIT, DEFAULT_TOL,
};
pub use error::{CoverError, HarnessError, SystemError};
pub use system::{CandidateKind, CoverCandidate, FunctionTable, NdsSystem, OpenCover};
