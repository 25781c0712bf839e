//! Quantum state transfer along alternating open XY spin chains.
//!
//! In the single-excitation sector the chain Hamiltonian reduces to half of
//! a symmetric tridiagonal matrix `D` with alternating couplings `D1, D2`.
//! This crate builds `D`, diagonalizes it in closed form (even and odd
//! chains) and numerically, evaluates transfer probabilities, searches for
//! high-probability transfer, enumerates the perfect-transfer family of the
//! four-site chain, and evaluates the analytic cap for odd chains. A brute
//! force `2^N` propagator checks the reduction end to end.
//!
//! Batch work (time grids, ratio sweeps, chain-length sweeps) runs on rayon
//! when the default `parallel` feature is on; results are gathered in index
//! order so output does not depend on the worker count.

pub mod bounds;
pub mod chain;
pub mod dynamics;
mod error;
pub mod ideal;
pub mod oracle;
pub mod par;
pub mod scalar;
pub mod search;
pub mod spectral;
mod tridiag;
pub mod verify;

pub use bounds::{bound_report, equality_feasible, BoundReport};
pub use chain::{build_coupling_matrix, ChainSpec, CouplingMatrix};
pub use dynamics::{
    node_amplitude, node_probability, sample_curve, transfer_probability,
    transfer_probability_even_form, transfer_probability_odd_form, Propagator, TransferCurve,
};
pub use error::{Error, Result};
pub use ideal::{ideal_solutions, n4_probability, IdealSolution};
pub use oracle::{full_space_amplitude, FullSpaceOracle};
pub use search::{
    dwell_window, first_peak, first_peak_with, fixed_time_optimize, optimize_delta, table1_sweep,
    DwellWindow, SweepRow, TransferTriad,
};
pub use spectral::{
    eigensystem, eigensystem_even, eigensystem_numeric, eigensystem_odd, solve_even_roots,
    EigenSystem, EvenRootSet, Provenance,
};
