//! Dense complex statevector with the in-place gate kernels used by layered
//! product-formula evolution: diagonal Z-string phases, two-qubit YY mixing,
//! and single-qubit X rotations.
//!
//! Basis indexing is little-endian: qubit 0 is the least significant bit of
//! the amplitude index. Kernels partition the amplitude array into disjoint
//! ranges and may process those ranges in parallel; expectation evaluation
//! uses fixed-size chunked partial sums so results are bit-deterministic
//! regardless of thread scheduling.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::pauli::{Observable, Pauli, PauliString, StringAction};

/// Memory cap: 2^26 complex doubles is about 1 GiB.
pub const MAX_QUBITS: usize = 26;

/// Below this amplitude count, kernels and reductions run single-threaded.
const PARALLEL_THRESHOLD: usize = 1 << 16;

/// Fixed chunk size for deterministic parallel reductions.
const REDUCTION_CHUNK: usize = 1 << 14;

/// Expectation values of Hermitian observables must be real to this residue.
pub const EXPECTATION_IM_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("qubit count {0} outside the supported range 1..={MAX_QUBITS}")]
    QubitCountOutOfRange(usize),
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    IndexOutOfRange { index: usize, num_qubits: usize },
    #[error("two-qubit kernel needs distinct targets, both were {0}")]
    DuplicateQubit(usize),
    #[error("basis index {index} out of range for {num_qubits} qubits")]
    BasisIndexOutOfRange { index: usize, num_qubits: usize },
    #[error("amplitude count {given} does not match 2^{num_qubits}")]
    AmplitudeCountMismatch { given: usize, num_qubits: usize },
    #[error("register size mismatch: state has {state} qubits, operator has {operator}")]
    RegisterMismatch { state: usize, operator: usize },
    #[error("expectation value has imaginary residue {0:e}")]
    ImaginaryResidue(f64),
    #[error("success probability needs a non-empty solution set")]
    EmptySolutionSet,
    #[error("propagator plan does not support term {0}; only Z-strings, YY pairs and single X are allowed")]
    UnsupportedTerm(String),
    #[error("duration must be finite, got {0}")]
    NonFiniteDuration(f64),
}

/// Dense state of `num_qubits` qubits as 2^L complex amplitudes.
#[derive(Clone, PartialEq, Debug)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// The uniform superposition: every amplitude 2^{-L/2} with zero phase.
    pub fn uniform_superposition(num_qubits: usize) -> Result<Self, StateError> {
        Self::check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            num_qubits,
            amplitudes: vec![amp; dim],
        })
    }

    /// A computational basis state.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self, StateError> {
        Self::check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(StateError::BasisIndexOutOfRange { index, num_qubits });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Wrap raw amplitudes; the caller is responsible for normalization.
    pub fn from_amplitudes(
        num_qubits: usize,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self, StateError> {
        Self::check_qubit_count(num_qubits)?;
        if amplitudes.len() != 1usize << num_qubits {
            return Err(StateError::AmplitudeCountMismatch {
                given: amplitudes.len(),
                num_qubits,
            });
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    fn check_qubit_count(num_qubits: usize) -> Result<(), StateError> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(StateError::QubitCountOutOfRange(num_qubits));
        }
        Ok(())
    }

    fn check_qubit(&self, index: usize) -> Result<(), StateError> {
        if index >= self.num_qubits {
            return Err(StateError::IndexOutOfRange {
                index,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Squared norm, summed deterministically.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes
            .chunks(REDUCTION_CHUNK)
            .map(|chunk| chunk.iter().map(Complex64::norm_sqr).sum::<f64>())
            .sum()
    }

    /// `<self|other>`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64, StateError> {
        if self.num_qubits != other.num_qubits {
            return Err(StateError::RegisterMismatch {
                state: self.num_qubits,
                operator: other.num_qubits,
            });
        }
        let total = self
            .amplitudes
            .chunks(REDUCTION_CHUNK)
            .zip(other.amplitudes.chunks(REDUCTION_CHUNK))
            .map(|(a, b)| {
                a.iter()
                    .zip(b.iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum::<Complex64>()
            })
            .sum();
        Ok(total)
    }

    /// `|<self|other>|^2`: phase-insensitive overlap of two unit states.
    pub fn fidelity(&self, other: &Self) -> Result<f64, StateError> {
        Ok(self.inner_product(other)?.norm_sqr())
    }

    /// In-place `exp(-i theta X_j)` on qubit `j`:
    /// `cos(theta) I - i sin(theta) X` across every amplitude pair that
    /// differs in bit `j`.
    pub fn apply_rx(&mut self, qubit: usize, theta: f64) -> Result<(), StateError> {
        self.check_qubit(qubit)?;
        let cos = Complex64::new(theta.cos(), 0.0);
        let misin = Complex64::new(0.0, -theta.sin());
        let half = 1usize << qubit;
        let block = half << 1;
        let kernel = |chunk: &mut [Complex64]| {
            let (lo, hi) = chunk.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = cos * x + misin * y;
                *b = misin * x + cos * y;
            }
        };
        if self.amplitudes.len() >= PARALLEL_THRESHOLD {
            self.amplitudes.par_chunks_mut(block).for_each(kernel);
        } else {
            self.amplitudes.chunks_mut(block).for_each(kernel);
        }
        Ok(())
    }

    /// In-place `exp(-i theta Z_i Z_j)`: each basis amplitude picks up
    /// `exp(-i theta z_i z_j)` with `z = +1` for bit 0 and `-1` for bit 1.
    pub fn apply_zz_phase(&mut self, i: usize, j: usize, theta: f64) -> Result<(), StateError> {
        self.check_qubit(i)?;
        self.check_qubit(j)?;
        if i == j {
            return Err(StateError::DuplicateQubit(i));
        }
        let mask = (1u64 << i) | (1u64 << j);
        self.apply_diagonal_phase(mask, theta);
        Ok(())
    }

    /// In-place `exp(-i theta P)` for a Z-string `P` given by `mask`:
    /// eigenvalue `(-1)^popcount(z & mask)` per basis state `z`.
    fn apply_diagonal_phase(&mut self, mask: u64, theta: f64) {
        let plus = Complex64::from_polar(1.0, -theta);
        let minus = Complex64::from_polar(1.0, theta);
        let kernel = |(z, amp): (usize, &mut Complex64)| {
            *amp *= if (z as u64 & mask).count_ones() & 1 == 0 {
                plus
            } else {
                minus
            };
        };
        if self.amplitudes.len() >= PARALLEL_THRESHOLD {
            self.amplitudes.par_iter_mut().enumerate().for_each(kernel);
        } else {
            self.amplitudes.iter_mut().enumerate().for_each(kernel);
        }
    }

    /// Multiply every amplitude by `exp(-i theta)`.
    fn apply_global_phase(&mut self, theta: f64) {
        let phase = Complex64::from_polar(1.0, -theta);
        if self.amplitudes.len() >= PARALLEL_THRESHOLD {
            self.amplitudes.par_iter_mut().for_each(|a| *a *= phase);
        } else {
            self.amplitudes.iter_mut().for_each(|a| *a *= phase);
        }
    }

    /// In-place `exp(-i theta Y_i Y_j)`.
    ///
    /// `YY` acts as `-X` on the {|00>, |11>} pair of each two-bit block and
    /// as `+X` on {|01>, |10>}, so the pairs mix with `cos(theta)` and
    /// `+/- i sin(theta)` respectively.
    pub fn apply_yy(&mut self, i: usize, j: usize, theta: f64) -> Result<(), StateError> {
        self.check_qubit(i)?;
        self.check_qubit(j)?;
        if i == j {
            return Err(StateError::DuplicateQubit(i));
        }
        let lo_bit = i.min(j);
        let hi_bit = i.max(j);
        let half = 1usize << hi_bit;
        let block = half << 1;
        let lo_mask = 1usize << lo_bit;
        let cos = Complex64::new(theta.cos(), 0.0);
        let plus_isin = Complex64::new(0.0, theta.sin());
        let minus_isin = Complex64::new(0.0, -theta.sin());
        let kernel = |chunk: &mut [Complex64]| {
            let (lo, hi) = chunk.split_at_mut(half);
            #[allow(clippy::needless_range_loop)]
            for idx in 0..half {
                let partner = idx ^ lo_mask;
                // bits (hi, lo) = (0, b) here and (1, !b) in the partner:
                // equal-bit pairs take +i sin, unequal-bit pairs take -i sin
                let isin = if idx & lo_mask == 0 {
                    plus_isin
                } else {
                    minus_isin
                };
                let (x, y) = (lo[idx], hi[partner]);
                lo[idx] = cos * x + isin * y;
                hi[partner] = cos * y + isin * x;
            }
        };
        if self.amplitudes.len() >= PARALLEL_THRESHOLD {
            self.amplitudes.par_chunks_mut(block).for_each(kernel);
        } else {
            self.amplitudes.chunks_mut(block).for_each(kernel);
        }
        Ok(())
    }

    /// Apply the product-formula propagator `exp(-i H duration)` described by
    /// `plan`.
    ///
    /// Terms within a group commute, so each group exponential is exact; the
    /// groups themselves are combined symmetrically (half-step outer groups
    /// around a full-step innermost group), giving a third-order-per-step
    /// splitting error. A plan with a single populated group, the diagonal
    /// cut operators included, is applied in one exact pass.
    pub fn apply_propagator(
        &mut self,
        plan: &PropagatorPlan,
        duration: f64,
    ) -> Result<(), StateError> {
        if !duration.is_finite() {
            return Err(StateError::NonFiniteDuration(duration));
        }
        if plan.num_qubits != self.num_qubits {
            return Err(StateError::RegisterMismatch {
                state: self.num_qubits,
                operator: plan.num_qubits,
            });
        }
        let populated = [
            !plan.diagonal.is_empty(),
            !plan.yy.is_empty(),
            !plan.x.is_empty(),
        ]
        .iter()
        .filter(|&&p| p)
        .count();
        if populated <= 1 {
            self.apply_group(plan, Group::Diagonal, duration)?;
            self.apply_group(plan, Group::Yy, duration)?;
            self.apply_group(plan, Group::X, duration)?;
        } else {
            self.apply_group(plan, Group::Diagonal, duration / 2.0)?;
            self.apply_group(plan, Group::Yy, duration / 2.0)?;
            self.apply_group(plan, Group::X, duration)?;
            self.apply_group(plan, Group::Yy, duration / 2.0)?;
            self.apply_group(plan, Group::Diagonal, duration / 2.0)?;
        }
        if plan.constant != 0.0 {
            self.apply_global_phase(plan.constant * duration);
        }
        Ok(())
    }

    fn apply_group(
        &mut self,
        plan: &PropagatorPlan,
        group: Group,
        duration: f64,
    ) -> Result<(), StateError> {
        match group {
            Group::Diagonal => {
                for &(mask, coefficient) in &plan.diagonal {
                    self.apply_diagonal_phase(mask, coefficient * duration);
                }
            }
            Group::Yy => {
                for &(i, j, coefficient) in &plan.yy {
                    self.apply_yy(i, j, coefficient * duration)?;
                }
            }
            Group::X => {
                for &(qubit, coefficient) in &plan.x {
                    self.apply_rx(qubit, coefficient * duration)?;
                }
            }
        }
        Ok(())
    }

    /// `<psi|P|psi>` for one Pauli string, summed deterministically.
    fn string_expectation(&self, action: StringAction) -> Complex64 {
        let amps = &self.amplitudes;
        let chunk_sum = |(chunk_index, chunk): (usize, &[Complex64])| {
            let base = chunk_index * REDUCTION_CHUNK;
            let mut sum = Complex64::new(0.0, 0.0);
            for (offset, &amp) in chunk.iter().enumerate() {
                let z = (base + offset) as u64;
                let partner = (z ^ action.flip_mask) as usize;
                sum += amps[partner].conj() * action.phase_on(z) * amp;
            }
            sum
        };
        if amps.len() >= PARALLEL_THRESHOLD {
            let partials: Vec<Complex64> = amps
                .par_chunks(REDUCTION_CHUNK)
                .enumerate()
                .map(chunk_sum)
                .collect();
            partials.into_iter().sum()
        } else {
            amps.chunks(REDUCTION_CHUNK)
                .enumerate()
                .map(chunk_sum)
                .sum()
        }
    }

    /// `<psi|obs|psi>`, evaluated term by term without dense matrices.
    pub fn expectation(&self, obs: &Observable) -> Result<f64, StateError> {
        if obs.num_qubits() != self.num_qubits {
            return Err(StateError::RegisterMismatch {
                state: self.num_qubits,
                operator: obs.num_qubits(),
            });
        }
        let mut total = if obs.constant() != 0.0 {
            Complex64::new(obs.constant() * self.norm_sqr(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        for (string, coefficient) in obs.terms() {
            total += coefficient * self.string_expectation(string.action());
        }
        if total.im.abs() > EXPECTATION_IM_TOL {
            return Err(StateError::ImaginaryResidue(total.im));
        }
        Ok(total.re)
    }

    /// Total probability weight on a set of basis states.
    pub fn success_probability(&self, solutions: &BTreeSet<usize>) -> Result<f64, StateError> {
        if solutions.is_empty() {
            return Err(StateError::EmptySolutionSet);
        }
        let mut total = 0.0;
        for &index in solutions {
            if index >= self.amplitudes.len() {
                return Err(StateError::BasisIndexOutOfRange {
                    index,
                    num_qubits: self.num_qubits,
                });
            }
            total += self.amplitudes[index].norm_sqr();
        }
        Ok(total)
    }
}

#[derive(Clone, Copy)]
enum Group {
    Diagonal,
    Yy,
    X,
}

/// Precompiled term list for [`Statevector::apply_propagator`].
///
/// Terms are grouped as diagonal Z-strings, YY pairs, and single-qubit X,
/// each group in canonical term order, with the identity offset applied as a
/// global phase. Group order inside a layer is fixed and symmetric, so
/// repeated applications are deterministic across runs.
#[derive(Clone, Debug)]
pub struct PropagatorPlan {
    num_qubits: usize,
    constant: f64,
    diagonal: Vec<(u64, f64)>,
    yy: Vec<(usize, usize, f64)>,
    x: Vec<(usize, f64)>,
}

impl PropagatorPlan {
    /// Classify the observable's terms. Anything that is not a Z-string, a
    /// two-site YY pair, or a single-site X is rejected.
    pub fn new(obs: &Observable) -> Result<Self, StateError> {
        let mut diagonal = Vec::new();
        let mut yy = Vec::new();
        let mut x = Vec::new();
        for (string, coefficient) in obs.terms() {
            if let Some(mask) = as_z_string(string) {
                diagonal.push((mask, coefficient));
            } else if let Some((i, j)) = as_yy_pair(string) {
                yy.push((i, j, coefficient));
            } else if let Some(qubit) = as_single_x(string) {
                x.push((qubit, coefficient));
            } else {
                return Err(StateError::UnsupportedTerm(string.to_string()));
            }
        }
        Ok(Self {
            num_qubits: obs.num_qubits(),
            constant: obs.constant(),
            diagonal,
            yy,
            x,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// True when every term is diagonal, i.e. the propagator is exact.
    pub fn is_diagonal(&self) -> bool {
        self.yy.is_empty() && self.x.is_empty()
    }
}

fn as_z_string(string: &PauliString) -> Option<u64> {
    let mut mask = 0u64;
    for (qubit, pauli) in string.factors() {
        if pauli != Pauli::Z {
            return None;
        }
        mask |= 1u64 << qubit;
    }
    Some(mask)
}

fn as_yy_pair(string: &PauliString) -> Option<(usize, usize)> {
    if string.weight() != 2 {
        return None;
    }
    let mut sites = string.factors();
    let (i, p) = sites.next()?;
    let (j, q) = sites.next()?;
    (p == Pauli::Y && q == Pauli::Y).then_some((i, j))
}

fn as_single_x(string: &PauliString) -> Option<usize> {
    if string.weight() != 1 {
        return None;
    }
    let (qubit, pauli) = string.factors().next()?;
    (pauli == Pauli::X).then_some(qubit)
}
