//! Simulation library for feedback-based quantum algorithms (FQA, and its
//! combinatorial-optimization form FALQON) and their time-rescaled variants.
//!
//! Layer parameters are set from measurements of the previous layer's state
//! rather than by a classical optimizer; time rescaling modulates layer
//! durations by `fdot(tau)` and divides the feedback gain by the same factor,
//! shortening the depth needed to approach the ground state.
//!
//! Module map:
//!
//! * [`pauli`] — Pauli-string algebra, observables, commutators, dense forms.
//! * [`hamiltonians`] — MaxCut and ANNNI problem operators, driver, graph I/O.
//! * [`statevector`] — dense state with the layer-unitary gate kernels.
//! * [`rescale`] — rescaling function families `f(tau)`, `fdot(tau)`.
//! * [`engine`] — the measurement-feedback loop and trajectory records.
//! * [`oracle`] — brute-force and dense-diagonalization ground truth.

pub mod engine;
pub mod hamiltonians;
pub mod oracle;
pub mod pauli;
pub mod rescale;
pub mod statevector;

pub use engine::{run, sweep, RunConfig, Trajectory};
pub use hamiltonians::{
    annni_hamiltonian, driver_hamiltonian, load_graph, maxcut_hamiltonian, random_regular_graph,
    AnnniParams, Graph,
};
pub use oracle::{brute_force_maxcut, exact_propagator, ground_energy, MaxCutSolution};
pub use pauli::{commutator_i, Observable, Pauli, PauliString};
pub use rescale::{RescaleFamily, RescaleSpec};
pub use statevector::{PropagatorPlan, Statevector};
