//! Time-rescaling functions `f(tau)` and their derivatives.
//!
//! A monotone reparameterization `t = f(tau)` turns an evolution over
//! `[0, t_f]` into one over `[0, t_f/a]` under the rescaled generator
//! `H(f(tau)) * fdot(tau)`. Two closed-form families are provided:
//!
//! * sine:       `f(tau) = a tau - (t_f / 2 pi a)(a - 1) sin(2 pi a tau / t_f)`
//! * polynomial: `f(tau) = 2(a^2 - a^3)/t_f^2 tau^3 + 3(a^2 - a)/t_f tau^2 + tau`
//!
//! Both satisfy `f(0) = 0`, `f(t_f/a) = t_f` and `fdot(0) = fdot(t_f/a) = 1`,
//! so initial and final generators are unchanged. The identity family returns
//! `(tau, 1)` and recovers the unrescaled evolution.
//!
//! Formulas are evaluated for every `tau >= 0`, including past the rescaled
//! horizon `t_f/a`: the sine family continues periodically, while the
//! polynomial family eventually drives `fdot` toward zero, which surfaces as
//! a vanishing-derivative error because feedback laws divide by `fdot`.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

/// Derivatives at or below this threshold are reported as vanishing.
pub const FDOT_EPSILON: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum RescaleError {
    #[error("contraction parameter a must be positive and finite, got {0}")]
    InvalidContraction(f64),
    #[error("final time t_f must be positive and finite, got {0}")]
    InvalidFinalTime(f64),
    #[error("tau must be finite and non-negative, got {0}")]
    InvalidTau(f64),
    #[error("rescaling derivative vanished: fdot = {fdot:e} <= {epsilon:e} at tau = {tau}")]
    VanishingDerivative { tau: f64, fdot: f64, epsilon: f64 },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RescaleFamily {
    Identity,
    Sine,
    Polynomial,
}

impl fmt::Display for RescaleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RescaleFamily::Identity => "identity",
            RescaleFamily::Sine => "sine",
            RescaleFamily::Polynomial => "polynomial",
        };
        f.write_str(name)
    }
}

/// A rescaling function family with its contraction parameter `a` and the
/// original final time `t_f`. The identity family ignores both in
/// [`RescaleSpec::evaluate`] but keeps `t_f` as its nominal horizon.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct RescaleSpec {
    family: RescaleFamily,
    a: f64,
    t_f: f64,
}

impl RescaleSpec {
    pub fn new(family: RescaleFamily, a: f64, t_f: f64) -> Result<Self, RescaleError> {
        if !a.is_finite() || a <= 0.0 {
            return Err(RescaleError::InvalidContraction(a));
        }
        if !t_f.is_finite() || t_f <= 0.0 {
            return Err(RescaleError::InvalidFinalTime(t_f));
        }
        Ok(Self { family, a, t_f })
    }

    /// The identity rescaling with a nominal unit horizon.
    pub fn identity() -> Self {
        Self {
            family: RescaleFamily::Identity,
            a: 1.0,
            t_f: 1.0,
        }
    }

    pub fn sine(a: f64, t_f: f64) -> Result<Self, RescaleError> {
        Self::new(RescaleFamily::Sine, a, t_f)
    }

    pub fn polynomial(a: f64, t_f: f64) -> Result<Self, RescaleError> {
        Self::new(RescaleFamily::Polynomial, a, t_f)
    }

    pub fn family(&self) -> RescaleFamily {
        self.family
    }

    pub fn contraction(&self) -> f64 {
        self.a
    }

    pub fn final_time(&self) -> f64 {
        self.t_f
    }

    /// `(f(tau), fdot(tau))` by the closed-form family formulas.
    ///
    /// Errors with [`RescaleError::VanishingDerivative`] when
    /// `fdot <= FDOT_EPSILON`, since feedback laws divide by `fdot`.
    pub fn evaluate(&self, tau: f64) -> Result<(f64, f64), RescaleError> {
        if !tau.is_finite() || tau < 0.0 {
            return Err(RescaleError::InvalidTau(tau));
        }
        let (f, fdot) = match self.family {
            RescaleFamily::Identity => (tau, 1.0),
            RescaleFamily::Sine => {
                let omega = 2.0 * PI * self.a / self.t_f;
                let f = self.a * tau
                    - (self.t_f / (2.0 * PI * self.a)) * (self.a - 1.0) * (omega * tau).sin();
                let fdot = self.a - (self.a - 1.0) * (omega * tau).cos();
                (f, fdot)
            }
            RescaleFamily::Polynomial => {
                let a = self.a;
                let t_f = self.t_f;
                let cubic = 2.0 * (a * a - a * a * a) / (t_f * t_f);
                let quad = 3.0 * (a * a - a) / t_f;
                let f = cubic * tau * tau * tau + quad * tau * tau + tau;
                let fdot = 3.0 * cubic * tau * tau + 2.0 * quad * tau + 1.0;
                (f, fdot)
            }
        };
        if fdot <= FDOT_EPSILON {
            return Err(RescaleError::VanishingDerivative {
                tau,
                fdot,
                epsilon: FDOT_EPSILON,
            });
        }
        Ok((f, fdot))
    }

    /// Duration of the rescaled evolution: `t_f / a`, or `t_f` itself for the
    /// identity family.
    pub fn rescaled_horizon(&self) -> f64 {
        match self.family {
            RescaleFamily::Identity => self.t_f,
            _ => self.t_f / self.a,
        }
    }
}
