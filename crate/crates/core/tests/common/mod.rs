//! Shared generators for the property suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use fqa_core::pauli::{Observable, Pauli, PauliString};
use fqa_core::statevector::Statevector;
use fqa_core::Graph;
use num_complex::Complex64;
use proptest::prelude::*;

pub fn arb_pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

/// A Pauli string over `num_qubits` sites, possibly the identity.
pub fn arb_pauli_string(num_qubits: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::btree_map(0..num_qubits, arb_pauli(), 0..=num_qubits)
        .prop_map(PauliString::from_factors)
}

/// An observable with a handful of bounded random terms and a constant.
pub fn arb_observable(num_qubits: usize) -> impl Strategy<Value = Observable> {
    let term = (arb_pauli_string(num_qubits), -2.0..2.0f64);
    (prop::collection::vec(term, 0..6), -1.0..1.0f64).prop_map(move |(terms, constant)| {
        let mut obs = Observable::from_terms(num_qubits, terms).unwrap();
        obs.add_constant(constant);
        obs
    })
}

/// A normalized random state.
pub fn arb_state(num_qubits: usize) -> impl Strategy<Value = Statevector> {
    let dim = 1usize << num_qubits;
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim..=dim).prop_filter_map(
        "state must have nonzero norm",
        move |raw| {
            let amps: Vec<Complex64> = raw
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                return None;
            }
            let amps = amps.into_iter().map(|a| a / norm).collect();
            Some(Statevector::from_amplitudes(num_qubits, amps).unwrap())
        },
    )
}

/// A connected-ish random unweighted graph with at least one edge.
pub fn arb_graph(max_vertices: usize) -> impl Strategy<Value = Graph> {
    (2..=max_vertices)
        .prop_flat_map(|n| {
            let all_pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
                .collect();
            let count = all_pairs.len();
            (
                Just(n),
                Just(all_pairs),
                prop::collection::vec(any::<bool>(), count..=count),
            )
        })
        .prop_filter_map("graph needs an edge", |(n, pairs, picks)| {
            let edges: Vec<(usize, usize)> = pairs
                .into_iter()
                .zip(picks)
                .filter_map(|(pair, keep)| keep.then_some(pair))
                .collect();
            if edges.is_empty() {
                return None;
            }
            Some(Graph::unweighted(n, &edges).unwrap())
        })
}

/// Solution set helper for tests that need one.
#[allow(dead_code)]
pub fn solutions_of(indices: &[usize]) -> BTreeSet<usize> {
    indices.iter().copied().collect()
}
