//! The measurement-feedback loop.
//!
//! Starting from the uniform superposition, each layer applies the problem
//! propagator `exp(-i H_p fdot(k dtau) dtau)` followed by the driver
//! `exp(-i H_d beta_k fdot(k dtau) dtau)`, measures the steering signal
//! `A_k = <psi_k| i[H_d, H_p] |psi_k>` and the cost `J_k = <psi_k|H_p|psi_k>`,
//! and sets the next control as `beta_{k+1} = -A_k / fdot((k+1) dtau)` with
//! `beta_1 = 0`. Under the identity rescaling (`fdot = 1`) this is the plain
//! feedback algorithm with `beta_{k+1} = -A_k`; the division keeps the cost
//! non-increasing for any admissible rescaling because
//! `dJ/dtau = beta A fdot = -A^2 <= 0`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::pauli::{commutator_i, Observable, PauliError};
use crate::rescale::{RescaleError, RescaleSpec, FDOT_EPSILON};
use crate::statevector::{PropagatorPlan, StateError, Statevector};

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("problem and driver registers differ: {problem} vs {driver} qubits")]
    RegisterMismatch { problem: usize, driver: usize },
    #[error("dt must be positive and finite, got {0}")]
    InvalidDt(f64),
    #[error("layer count must be at least 1")]
    NoLayers,
    #[error("total evolution time dt * layers is not finite")]
    NonFiniteHorizon,
    #[error("driver and problem Hamiltonians commute; the feedback signal is identically zero")]
    CommutingPair,
    #[error("feedback denominator vanished: fdot = {fdot:e}")]
    VanishingDerivative { fdot: f64 },
    #[error("cost diverged at layer {layer}: J = {value}")]
    NumericalFailure { layer: usize, value: f64 },
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Rescale(#[from] RescaleError),
}

/// Initial state preparation. Only the uniform superposition is supported.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum InitialState {
    #[default]
    UniformSuperposition,
}

/// Everything one trajectory needs: the operator pair, layer schedule,
/// rescaling choice, and optional exact reference data for reporting.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub problem: Observable,
    pub driver: Observable,
    pub initial_state: InitialState,
    /// Layer duration; `dt` for the plain loop, `dtau` under rescaling.
    pub dt: f64,
    pub layers: usize,
    pub rescale: RescaleSpec,
    /// Basis states counted as solutions, when known (MaxCut).
    pub solutions: Option<BTreeSet<usize>>,
    /// Exact ground energy, when known, for convergence-gap reporting.
    pub ground_energy: Option<f64>,
}

impl RunConfig {
    pub fn new(problem: Observable, driver: Observable, dt: f64, layers: usize) -> Self {
        Self {
            problem,
            driver,
            initial_state: InitialState::UniformSuperposition,
            dt,
            layers,
            rescale: RescaleSpec::identity(),
            solutions: None,
            ground_energy: None,
        }
    }

    pub fn with_rescale(mut self, rescale: RescaleSpec) -> Self {
        self.rescale = rescale;
        self
    }

    pub fn with_solutions(mut self, solutions: BTreeSet<usize>) -> Self {
        self.solutions = Some(solutions);
        self
    }

    pub fn with_ground_energy(mut self, energy: f64) -> Self {
        self.ground_energy = Some(energy);
        self
    }
}

/// One layer's worth of measurements.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct LayerRecord {
    /// 1-based layer index.
    pub layer: usize,
    /// Control applied in this layer (`beta_1 = 0`).
    pub beta: f64,
    /// Steering signal `<i[H_d, H_p]>` measured after the layer.
    pub a_expectation: f64,
    /// Cost `<H_p>` measured after the layer.
    pub cost: f64,
    /// Rescaling derivative used for this layer's durations.
    pub fdot: f64,
    /// Probability weight on the solution set, when one was supplied.
    pub success_probability: Option<f64>,
}

/// Why a run stopped before its configured layer count.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum RunFailure {
    /// The rescaling derivative dropped to the guard threshold at this layer,
    /// making the feedback division unsafe.
    VanishingDerivative { layer: usize, fdot: f64 },
}

/// Per-layer records plus the final state. `records.len() == layers` unless
/// `failure` marks an early stop.
#[derive(Clone, PartialEq, Debug)]
pub struct Trajectory {
    pub records: Vec<LayerRecord>,
    pub final_state: Statevector,
    pub failure: Option<RunFailure>,
}

impl Trajectory {
    pub fn final_cost(&self) -> Option<f64> {
        self.records.last().map(|r| r.cost)
    }

    pub fn final_success_probability(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.success_probability)
    }
}

/// Feedback law `beta = -a_prev / fdot`, guarded against a vanishing
/// denominator. With `fdot = 1` this is the plain `beta = -A` rule.
pub fn feedback_beta(a_prev: f64, fdot: f64) -> Result<f64, EngineError> {
    if fdot.is_nan() || fdot <= FDOT_EPSILON {
        return Err(EngineError::VanishingDerivative { fdot });
    }
    Ok(-a_prev / fdot)
}

fn validate(config: &RunConfig) -> Result<Observable, EngineError> {
    if config.problem.num_qubits() != config.driver.num_qubits() {
        return Err(EngineError::RegisterMismatch {
            problem: config.problem.num_qubits(),
            driver: config.driver.num_qubits(),
        });
    }
    if !config.dt.is_finite() || config.dt <= 0.0 {
        return Err(EngineError::InvalidDt(config.dt));
    }
    if config.layers == 0 {
        return Err(EngineError::NoLayers);
    }
    if !(config.dt * config.layers as f64).is_finite() {
        return Err(EngineError::NonFiniteHorizon);
    }
    let steering = commutator_i(&config.driver, &config.problem)?;
    if steering.is_zero() {
        return Err(EngineError::CommutingPair);
    }
    Ok(steering)
}

/// Execute the feedback loop and record every layer.
///
/// A vanishing rescaling derivative mid-run truncates the trajectory at the
/// last completed layer and marks the failure; a non-finite cost aborts with
/// an error.
pub fn run(config: &RunConfig) -> Result<Trajectory, EngineError> {
    let steering = validate(config)?;
    let problem_plan = PropagatorPlan::new(&config.problem)?;
    let driver_plan = PropagatorPlan::new(&config.driver)?;

    let InitialState::UniformSuperposition = config.initial_state;
    let mut state = Statevector::uniform_superposition(config.problem.num_qubits())?;
    if let Some(solutions) = &config.solutions {
        // surface bad solution indices before running any layer
        state.success_probability(solutions)?;
    }

    let mut records = Vec::with_capacity(config.layers);
    let mut failure = None;

    // beta_1 = 0; the first layer needs fdot(dtau) for its durations.
    let mut beta_next = 0.0;
    let mut fdot_next = match config.rescale.evaluate(config.dt) {
        Ok((_, fdot)) => fdot,
        Err(RescaleError::VanishingDerivative { fdot, .. }) => {
            return Ok(Trajectory {
                records,
                final_state: state,
                failure: Some(RunFailure::VanishingDerivative { layer: 1, fdot }),
            });
        }
        Err(e) => return Err(e.into()),
    };

    for layer in 1..=config.layers {
        let beta = beta_next;
        let fdot = fdot_next;

        state.apply_propagator(&problem_plan, fdot * config.dt)?;
        state.apply_propagator(&driver_plan, beta * fdot * config.dt)?;

        let a_expectation = state.expectation(&steering)?;
        let cost = state.expectation(&config.problem)?;
        if !cost.is_finite() {
            return Err(EngineError::NumericalFailure { layer, value: cost });
        }
        let success_probability = match &config.solutions {
            Some(solutions) => Some(state.success_probability(solutions)?),
            None => None,
        };
        records.push(LayerRecord {
            layer,
            beta,
            a_expectation,
            cost,
            fdot,
            success_probability,
        });

        if layer < config.layers {
            let tau_next = (layer + 1) as f64 * config.dt;
            match config.rescale.evaluate(tau_next) {
                Ok((_, fdot)) => {
                    fdot_next = fdot;
                    beta_next = feedback_beta(a_expectation, fdot)?;
                }
                Err(RescaleError::VanishingDerivative { fdot, .. }) => {
                    failure = Some(RunFailure::VanishingDerivative {
                        layer: layer + 1,
                        fdot,
                    });
                    break;
                }
                Err(e) => return Err(e.into()),
            }
        }
    }

    Ok(Trajectory {
        records,
        final_state: state,
        failure,
    })
}

/// Run several configurations independently. Result order matches input
/// order; entries may execute concurrently and failures are reported per
/// entry without aborting the rest.
pub fn sweep(configs: &[RunConfig]) -> Vec<Result<Trajectory, EngineError>> {
    configs.par_iter().map(run).collect()
}
