//! Exact-diagonalization library for sudden-quench dynamics of the
//! Lipkin-Meshkov-Glick model: work statistics, survival probability,
//! diagonal-ensemble entropy and the symmetry-breaking signatures of the
//! excited-state quantum phase transition, plus the semiclassical
//! critical-quench predictions in closed form.

pub mod error;
pub mod io;
pub mod model;
pub mod quench;
pub mod semiclassics;
pub mod spectral;
pub mod sweep;

pub use error::{LmgError, Result};
pub use model::{
    build_hamiltonian, build_sx, dicke_oracle_hamiltonian, split_parity_blocks, BandedMatrix,
    ModelParams, ParityLabel, TridiagonalMatrix,
};
pub use quench::{
    diagonal_entropy, prepare_initial, revival_period, run_quench, survival_probability,
    transition_probabilities, work_distribution, work_moments, InitialStateSpec, PreparedState,
    QuenchOptions, QuenchResult, SurvivalSeries, WorkDistribution,
};
pub use spectral::{
    degeneracy_scan, density_of_states, diagonalize, diagonalize_dense, DegeneracyReport,
    DensityOfStates, EigenDecomposition,
};
pub use sweep::{
    compare_symmetry, fit_entropy_scaling, run_sweep, ScalingFit, SweepPlan, SweepRow,
};
