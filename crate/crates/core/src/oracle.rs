//! Independent ground truth for tests and run summaries: brute-force MaxCut
//! enumeration, dense Hermitian diagonalization for ground energies, and
//! dense propagators for validating gate kernels and product formulas.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::hamiltonians::Graph;
use crate::pauli::{Observable, PauliError};
use crate::statevector::{StateError, Statevector};

/// Brute-force enumeration walks all 2^V assignments.
pub const MAX_BRUTE_FORCE_VERTICES: usize = 26;

/// Dense diagonalization cap; 2^12 keeps the Hermitian solve tractable.
pub const MAX_EIGEN_QUBITS: usize = 12;

/// Dense propagator cap for kernel cross-checks.
pub const MAX_PROPAGATOR_QUBITS: usize = 6;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("{operation} capped at {max} qubits/vertices, got {given}")]
    SizeCap {
        operation: &'static str,
        given: usize,
        max: usize,
    },
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Exact MaxCut optimum with every maximizing bitstring.
#[derive(Clone, PartialEq, Debug)]
pub struct MaxCutSolution {
    pub max_value: f64,
    pub solutions: BTreeSet<usize>,
}

/// Enumerate all bipartitions of the graph and return the maximum cut weight
/// together with every assignment achieving it.
pub fn brute_force_maxcut(graph: &Graph) -> Result<MaxCutSolution, OracleError> {
    let n = graph.num_vertices();
    if n > MAX_BRUTE_FORCE_VERTICES {
        return Err(OracleError::SizeCap {
            operation: "brute-force MaxCut",
            given: n,
            max: MAX_BRUTE_FORCE_VERTICES,
        });
    }
    let mut max_value = f64::NEG_INFINITY;
    let mut solutions = BTreeSet::new();
    for assignment in 0..1usize << n {
        let value = graph.cut_value(assignment);
        if value > max_value {
            max_value = value;
            solutions.clear();
            solutions.insert(assignment);
        } else if value == max_value {
            solutions.insert(assignment);
        }
    }
    let full_mask = (1usize << n) - 1;
    for &s in &solutions {
        assert!(
            solutions.contains(&(s ^ full_mask)),
            "solution set must be closed under global spin flip"
        );
    }
    Ok(MaxCutSolution {
        max_value,
        solutions,
    })
}

/// Smallest eigenvalue of the observable's dense matrix, from a Hermitian
/// eigensolve. Eigenvalues of the QR iteration are accurate to machine
/// precision even on degenerate spectra.
pub fn ground_energy(obs: &Observable) -> Result<f64, OracleError> {
    if obs.num_qubits() > MAX_EIGEN_QUBITS {
        return Err(OracleError::SizeCap {
            operation: "ground-energy diagonalization",
            given: obs.num_qubits(),
            max: MAX_EIGEN_QUBITS,
        });
    }
    let eigen = obs.to_dense()?.symmetric_eigen();
    Ok(eigen
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min))
}

/// `exp(A)` by scaling-and-squaring with a Taylor series. For anti-Hermitian
/// `A` the result is unitary to machine precision; QR-based
/// eigendecomposition is avoided here because its eigenvectors only
/// block-diagonalize degenerate spectra to about sqrt(epsilon).
fn dense_exponential(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let dim = a.nrows();
    // 1-norm bound picks the scaling so the series converges in ~16 terms
    let norm = (0..dim)
        .map(|col| a.column(col).iter().map(|entry| entry.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm <= 0.5 {
        0
    } else {
        (norm / 0.5).log2().ceil() as u32
    };
    let scaled = a.map(|entry| entry / 2f64.powi(squarings as i32));
    let mut term = DMatrix::<Complex64>::identity(dim, dim);
    let mut sum = DMatrix::<Complex64>::identity(dim, dim);
    for order in 1..=32 {
        term = (&term * &scaled) / Complex64::new(order as f64, 0.0);
        sum += &term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-i duration M) |state>` through the dense matrix `M`.
pub fn exact_propagator(
    obs: &Observable,
    duration: f64,
    state: &Statevector,
) -> Result<Statevector, OracleError> {
    if obs.num_qubits() != state.num_qubits() {
        return Err(OracleError::State(StateError::RegisterMismatch {
            state: state.num_qubits(),
            operator: obs.num_qubits(),
        }));
    }
    if obs.num_qubits() > MAX_PROPAGATOR_QUBITS {
        return Err(OracleError::SizeCap {
            operation: "dense propagator",
            given: obs.num_qubits(),
            max: MAX_PROPAGATOR_QUBITS,
        });
    }
    let generator = obs
        .to_dense()?
        .map(|entry| Complex64::new(0.0, -duration) * entry);
    let unitary = dense_exponential(&generator);
    let output = unitary * DVector::from_column_slice(state.amplitudes());
    Ok(Statevector::from_amplitudes(
        state.num_qubits(),
        output.as_slice().to_vec(),
    )?)
}

/// `<state| M |state>` through the dense matrix; test-oriented counterpart of
/// the statevector's per-term path.
pub fn dense_expectation(obs: &Observable, state: &Statevector) -> Result<Complex64, OracleError> {
    if obs.num_qubits() != state.num_qubits() {
        return Err(OracleError::State(StateError::RegisterMismatch {
            state: state.num_qubits(),
            operator: obs.num_qubits(),
        }));
    }
    let matrix: DMatrix<Complex64> = obs.to_dense()?;
    let vector = DVector::from_column_slice(state.amplitudes());
    Ok((vector.adjoint() * matrix * vector)[(0, 0)])
}
