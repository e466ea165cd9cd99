//! Exact algebra over weighted sums of Pauli strings.
//!
//! A [`PauliString`] is a tensor product of single-site Pauli operators; an
//! [`Observable`] is a real-weighted sum of strings plus an identity offset.
//! The module provides group multiplication with exact phase tracking, the
//! Hermitian combination `i[A, B]` needed by feedback laws, and a dense-matrix
//! realization for small registers used by the oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Largest register for which [`Observable::to_dense`] will materialize a matrix.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Imaginary residue above this magnitude during commutator simplification is
/// treated as a Hermiticity bug rather than rounding noise.
pub const COMMUTATOR_IM_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum PauliError {
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    IndexOutOfRange { index: usize, num_qubits: usize },
    #[error("register must have at least one qubit")]
    EmptyRegister,
    #[error("register size mismatch: {left} vs {right} qubits")]
    RegisterMismatch { left: usize, right: usize },
    #[error("dense form capped at {max} qubits, register has {num_qubits}")]
    TooLargeForDense { num_qubits: usize, max: usize },
    #[error("non-Hermitian residue {residue:e} on term {term} while simplifying a commutator")]
    ImaginaryResidue { term: String, residue: f64 },
    #[error("coefficient for {term} is not finite")]
    NonFiniteCoefficient { term: String },
}

/// Single-site Pauli operator. Identity is implicit: sites a string does not
/// mention carry `I`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A unit from the Pauli group phase set {1, i, -1, -i}, stored as the power of i.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) & 3)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        };
        f.write_str(s)
    }
}

/// Single-site products `a * b = phase * result`, with `None` for identity.
fn single_site_product(a: Pauli, b: Pauli) -> (Phase, Option<Pauli>) {
    use Pauli::*;
    match (a, b) {
        (X, X) | (Y, Y) | (Z, Z) => (Phase::ONE, None),
        (X, Y) => (Phase::I, Some(Z)),
        (Y, X) => (Phase::MINUS_I, Some(Z)),
        (Y, Z) => (Phase::I, Some(X)),
        (Z, Y) => (Phase::MINUS_I, Some(X)),
        (Z, X) => (Phase::I, Some(Y)),
        (X, Z) => (Phase::MINUS_I, Some(Y)),
    }
}

/// Bit masks describing how a string acts on computational basis states,
/// little-endian: qubit 0 is the least significant bit of a basis index.
///
/// `P|z> = i^y_count * (-1)^popcount(z & phase_mask) |z ^ flip_mask>`
#[derive(Clone, Copy, Debug)]
pub struct StringAction {
    pub flip_mask: u64,
    pub phase_mask: u64,
    pub y_count: u32,
}

impl StringAction {
    /// Phase picked up when the string acts on basis state `z`.
    #[inline]
    pub fn phase_on(&self, z: u64) -> Complex64 {
        let sign = if (z & self.phase_mask).count_ones() & 1 == 1 {
            -1.0
        } else {
            1.0
        };
        Phase((self.y_count & 3) as u8).to_complex() * sign
    }
}

/// Tensor product of single-site Pauli operators over an unbounded register.
///
/// Canonical form: sites carrying identity are absent from the factor map, so
/// equality, ordering and hashing are purely structural.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct PauliString {
    factors: BTreeMap<usize, Pauli>,
}

impl PauliString {
    /// The identity string (no factors).
    pub fn identity() -> Self {
        Self::default()
    }

    /// A single Pauli operator on one site.
    pub fn single(qubit: usize, pauli: Pauli) -> Self {
        let mut factors = BTreeMap::new();
        factors.insert(qubit, pauli);
        Self { factors }
    }

    /// Build from (site, operator) pairs. Sites must be distinct.
    pub fn from_factors<I>(factors: I) -> Self
    where
        I: IntoIterator<Item = (usize, Pauli)>,
    {
        let mut map = BTreeMap::new();
        for (qubit, pauli) in factors {
            let previous = map.insert(qubit, pauli);
            assert!(previous.is_none(), "duplicate factor on qubit {qubit}");
        }
        Self { factors: map }
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, qubit: usize) -> Option<Pauli> {
        self.factors.get(&qubit).copied()
    }

    /// Sites the string acts on, in increasing order.
    pub fn factors(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        self.factors.iter().map(|(&q, &p)| (q, p))
    }

    /// Largest site index touched, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        self.factors.keys().next_back().copied()
    }

    /// Group product `self * other = phase * string`, result in canonical form.
    pub fn product(&self, other: &Self) -> (Phase, PauliString) {
        let mut phase = Phase::ONE;
        let mut factors = self.factors.clone();
        for (&qubit, &rhs) in &other.factors {
            match factors.remove(&qubit) {
                None => {
                    factors.insert(qubit, rhs);
                }
                Some(lhs) => {
                    let (p, r) = single_site_product(lhs, rhs);
                    phase = phase * p;
                    if let Some(r) = r {
                        factors.insert(qubit, r);
                    }
                }
            }
        }
        (phase, PauliString { factors })
    }

    /// Whether the two strings commute as operators. Strings anticommute
    /// exactly when an odd number of sites carry differing non-identity
    /// operators.
    pub fn commutes_with(&self, other: &Self) -> bool {
        let mut anticommuting_sites = 0usize;
        for (&qubit, &lhs) in &self.factors {
            if let Some(rhs) = other.factor(qubit) {
                if lhs != rhs {
                    anticommuting_sites += 1;
                }
            }
        }
        anticommuting_sites.is_multiple_of(2)
    }

    /// Basis-state action masks (sites must be below 64).
    pub fn action(&self) -> StringAction {
        let mut flip_mask = 0u64;
        let mut phase_mask = 0u64;
        let mut y_count = 0u32;
        for (&qubit, &pauli) in &self.factors {
            assert!(qubit < 64, "site index {qubit} exceeds mask width");
            let bit = 1u64 << qubit;
            match pauli {
                Pauli::X => flip_mask |= bit,
                Pauli::Y => {
                    flip_mask |= bit;
                    phase_mask |= bit;
                    y_count += 1;
                }
                Pauli::Z => phase_mask |= bit,
            }
        }
        StringAction {
            flip_mask,
            phase_mask,
            y_count,
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("I");
        }
        let mut first = true;
        for (&qubit, &pauli) in &self.factors {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", pauli.letter(), qubit)?;
            first = false;
        }
        Ok(())
    }
}

/// Hermitian operator as a real-weighted sum of Pauli strings plus an
/// identity offset, over a fixed register of `num_qubits` sites.
///
/// Invariants: every stored coefficient is real, finite and non-zero; the
/// identity string is folded into `constant`; term keys are canonically
/// ordered, so equality is structural.
#[derive(Clone, PartialEq, Debug)]
pub struct Observable {
    num_qubits: usize,
    constant: f64,
    terms: BTreeMap<PauliString, f64>,
}

impl Observable {
    /// The zero operator on `num_qubits` sites.
    pub fn zero(num_qubits: usize) -> Result<Self, PauliError> {
        if num_qubits == 0 {
            return Err(PauliError::EmptyRegister);
        }
        Ok(Self {
            num_qubits,
            constant: 0.0,
            terms: BTreeMap::new(),
        })
    }

    /// Build from weighted strings, merging duplicates and dropping exact zeros.
    /// Identity strings accumulate into the constant offset.
    pub fn from_terms<I>(num_qubits: usize, terms: I) -> Result<Self, PauliError>
    where
        I: IntoIterator<Item = (PauliString, f64)>,
    {
        let mut obs = Self::zero(num_qubits)?;
        for (string, coefficient) in terms {
            obs.add_term(string, coefficient)?;
        }
        Ok(obs)
    }

    /// Add `coefficient * string`, keeping canonical form.
    pub fn add_term(&mut self, string: PauliString, coefficient: f64) -> Result<(), PauliError> {
        if !coefficient.is_finite() {
            return Err(PauliError::NonFiniteCoefficient {
                term: string.to_string(),
            });
        }
        if let Some(max) = string.max_qubit() {
            if max >= self.num_qubits {
                return Err(PauliError::IndexOutOfRange {
                    index: max,
                    num_qubits: self.num_qubits,
                });
            }
        }
        if string.is_identity() {
            self.constant += coefficient;
            return Ok(());
        }
        let merged = self.terms.get(&string).copied().unwrap_or(0.0) + coefficient;
        if merged == 0.0 {
            self.terms.remove(&string);
        } else {
            self.terms.insert(string, merged);
        }
        Ok(())
    }

    /// Add `value` to the identity offset.
    pub fn add_constant(&mut self, value: f64) {
        self.constant += value;
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True when the operator has no terms and no constant offset.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant == 0.0
    }

    pub fn coefficient(&self, string: &PauliString) -> f64 {
        self.terms.get(string).copied().unwrap_or(0.0)
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, f64)> + '_ {
        self.terms.iter().map(|(s, &c)| (s, c))
    }

    /// The operator scaled by a real factor.
    pub fn scaled(&self, factor: f64) -> Self {
        if factor == 0.0 {
            return Self {
                num_qubits: self.num_qubits,
                constant: 0.0,
                terms: BTreeMap::new(),
            };
        }
        Self {
            num_qubits: self.num_qubits,
            constant: self.constant * factor,
            terms: self
                .terms
                .iter()
                .map(|(s, &c)| (s.clone(), c * factor))
                .collect(),
        }
    }

    /// Dense matrix over the computational basis, little-endian ordering
    /// (qubit 0 is the least significant bit of the basis index).
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>, PauliError> {
        if self.num_qubits > MAX_DENSE_QUBITS {
            return Err(PauliError::TooLargeForDense {
                num_qubits: self.num_qubits,
                max: MAX_DENSE_QUBITS,
            });
        }
        let dim = 1usize << self.num_qubits;
        let mut matrix =
            DMatrix::from_diagonal_element(dim, dim, Complex64::new(self.constant, 0.0));
        for (string, &coefficient) in &self.terms {
            let action = string.action();
            for col in 0..dim as u64 {
                let row = (col ^ action.flip_mask) as usize;
                matrix[(row, col as usize)] += coefficient * action.phase_on(col);
            }
        }
        Ok(matrix)
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if self.constant != 0.0 {
            write!(f, "{:+}", self.constant)?;
            wrote = true;
        }
        for (string, coefficient) in &self.terms {
            if wrote {
                f.write_str(" ")?;
            }
            write!(f, "{coefficient:+} {string}")?;
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// The Hermitian combination `i(ab - ba)`, simplified to canonical form.
///
/// Only anticommuting string pairs contribute, each as `2i * phase * r` with
/// an imaginary `phase`, so every surviving coefficient is real. Imaginary
/// residue above [`COMMUTATOR_IM_TOL`] is reported as an error.
pub fn commutator_i(a: &Observable, b: &Observable) -> Result<Observable, PauliError> {
    if a.num_qubits != b.num_qubits {
        return Err(PauliError::RegisterMismatch {
            left: a.num_qubits,
            right: b.num_qubits,
        });
    }
    let mut accumulator: BTreeMap<PauliString, Complex64> = BTreeMap::new();
    for (p, alpha) in a.terms() {
        for (q, gamma) in b.terms() {
            if p.commutes_with(q) {
                continue;
            }
            // pq = phase * r and qp = -pq, so i(pq - qp) = 2i * phase * r
            let (phase, r) = p.product(q);
            let weight = Complex64::new(0.0, 2.0 * alpha * gamma) * phase.to_complex();
            *accumulator.entry(r).or_insert(Complex64::new(0.0, 0.0)) += weight;
        }
    }
    let mut result = Observable::zero(a.num_qubits)?;
    for (string, value) in accumulator {
        if value.im.abs() > COMMUTATOR_IM_TOL {
            return Err(PauliError::ImaginaryResidue {
                term: string.to_string(),
                residue: value.im,
            });
        }
        if value.re != 0.0 {
            result.terms.insert(string, value.re);
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(q: usize) -> PauliString {
        PauliString::single(q, Pauli::X)
    }

    fn y(q: usize) -> PauliString {
        PauliString::single(q, Pauli::Y)
    }

    fn z(q: usize) -> PauliString {
        PauliString::single(q, Pauli::Z)
    }

    fn zz(a: usize, b: usize) -> PauliString {
        PauliString::from_factors([(a, Pauli::Z), (b, Pauli::Z)])
    }

    #[test]
    fn product_single_site_table() {
        // XZ = -iY
        let (phase, r) = x(0).product(&z(0));
        assert_eq!(phase, Phase::MINUS_I);
        assert_eq!(r, y(0));
        // XX = I
        let (phase, r) = x(0).product(&x(0));
        assert_eq!(phase, Phase::ONE);
        assert!(r.is_identity());
        // XY = iZ
        let (phase, r) = x(0).product(&y(0));
        assert_eq!(phase, Phase::I);
        assert_eq!(r, z(0));
    }

    #[test]
    fn product_disjoint_supports() {
        let (phase, r) = x(0).product(&zz(1, 2));
        assert_eq!(phase, Phase::ONE);
        assert_eq!(
            r,
            PauliString::from_factors([(0, Pauli::X), (1, Pauli::Z), (2, Pauli::Z)])
        );
    }

    #[test]
    fn commutes_with_matches_anticommuting_site_parity() {
        assert!(z(0).commutes_with(&zz(0, 1)));
        assert!(!x(0).commutes_with(&zz(0, 1)));
        assert!(x(0).commutes_with(&x(0)));
        assert!(!x(0).commutes_with(&y(0)));
        // two anticommuting sites cancel
        let xx = PauliString::from_factors([(0, Pauli::X), (1, Pauli::X)]);
        assert!(xx.commutes_with(&zz(0, 1)));
    }

    #[test]
    fn commutator_driver_with_zz() {
        // i[X0 + X1, 1/2 Z0 Z1] = Y0 Z1 + Z0 Y1
        let a = Observable::from_terms(2, [(x(0), 1.0), (x(1), 1.0)]).unwrap();
        let b = Observable::from_terms(2, [(zz(0, 1), 0.5)]).unwrap();
        let c = commutator_i(&a, &b).unwrap();
        let yz = PauliString::from_factors([(0, Pauli::Y), (1, Pauli::Z)]);
        let zy = PauliString::from_factors([(0, Pauli::Z), (1, Pauli::Y)]);
        assert_eq!(c.num_terms(), 2);
        assert!((c.coefficient(&yz) - 1.0).abs() < 1e-15);
        assert!((c.coefficient(&zy) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn commutator_of_commuting_terms_is_zero() {
        let a = Observable::from_terms(2, [(z(0), 1.0)]).unwrap();
        let b = Observable::from_terms(2, [(zz(0, 1), 1.0)]).unwrap();
        let c = commutator_i(&a, &b).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn commutator_x_y_gives_minus_two_z() {
        // i[X, Y] = i(iZ - (-iZ)) = -2Z
        let a = Observable::from_terms(1, [(x(0), 1.0)]).unwrap();
        let b = Observable::from_terms(1, [(y(0), 1.0)]).unwrap();
        let c = commutator_i(&a, &b).unwrap();
        assert_eq!(c.num_terms(), 1);
        assert!((c.coefficient(&z(0)) + 2.0).abs() < 1e-15);
    }

    #[test]
    fn commutator_register_mismatch() {
        let a = Observable::from_terms(1, [(x(0), 1.0)]).unwrap();
        let b = Observable::from_terms(2, [(zz(0, 1), 1.0)]).unwrap();
        assert!(matches!(
            commutator_i(&a, &b),
            Err(PauliError::RegisterMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn dense_z_is_diag_1_minus_1() {
        let obs = Observable::from_terms(1, [(z(0), 1.0)]).unwrap();
        let m = obs.to_dense().unwrap();
        assert_eq!(m[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(1, 1)], Complex64::new(-1.0, 0.0));
        assert_eq!(m[(0, 1)], Complex64::new(0.0, 0.0));
        assert_eq!(m[(1, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn dense_x_flips_bit_zero() {
        let obs = Observable::from_terms(2, [(x(0), 1.0)]).unwrap();
        let m = obs.to_dense().unwrap();
        for col in 0..4usize {
            for row in 0..4usize {
                let expected = if row == col ^ 1 { 1.0 } else { 0.0 };
                assert_eq!(m[(row, col)], Complex64::new(expected, 0.0));
            }
        }
    }

    #[test]
    fn dense_y_phase() {
        let obs = Observable::from_terms(1, [(y(0), 1.0)]).unwrap();
        let m = obs.to_dense().unwrap();
        // Y|0> = i|1>, Y|1> = -i|0>
        assert_eq!(m[(1, 0)], Complex64::new(0.0, 1.0));
        assert_eq!(m[(0, 1)], Complex64::new(0.0, -1.0));
    }

    #[test]
    fn dense_single_edge_cut_diagonal() {
        // -1/2 (1 - Z0 Z1) on two qubits: diag(0, -1, -1, 0)
        let mut obs = Observable::from_terms(2, [(zz(0, 1), 0.5)]).unwrap();
        obs.add_constant(-0.5);
        let m = obs.to_dense().unwrap();
        let expected = [0.0, -1.0, -1.0, 0.0];
        for (i, &e) in expected.iter().enumerate() {
            assert!((m[(i, i)] - Complex64::new(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn dense_rejects_large_registers() {
        let obs = Observable::zero(MAX_DENSE_QUBITS + 1).unwrap();
        assert!(matches!(
            obs.to_dense(),
            Err(PauliError::TooLargeForDense { .. })
        ));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let obs = Observable::from_terms(2, [(zz(0, 1), 1.0), (zz(0, 1), -1.0)]).unwrap();
        assert_eq!(obs.num_terms(), 0);
        assert!(obs.is_zero());
    }

    #[test]
    fn identity_terms_fold_into_constant() {
        let obs =
            Observable::from_terms(2, [(PauliString::identity(), 2.5), (zz(0, 1), 1.0)]).unwrap();
        assert_eq!(obs.constant(), 2.5);
        assert_eq!(obs.num_terms(), 1);
    }

    #[test]
    fn from_terms_rejects_out_of_range_sites() {
        assert!(matches!(
            Observable::from_terms(2, [(z(5), 1.0)]),
            Err(PauliError::IndexOutOfRange {
                index: 5,
                num_qubits: 2
            })
        ));
    }

    #[test]
    fn display_formats() {
        assert_eq!(PauliString::identity().to_string(), "I");
        assert_eq!(zz(0, 3).to_string(), "Z0 Z3");
        assert_eq!(Phase::MINUS_I.to_string(), "-i");
    }
}
