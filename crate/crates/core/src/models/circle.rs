//! A particle on a circle in the Fourier-mode basis `m ∈ {−M, …, M}`, where
//! the angular momentum `J = −iħ d/dφ` is diagonal and rotations
//! `U(δφ) = e^{−iδφ J/ħ}` are exact phase multiplications.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::dynamics::{
    certainty_verdict, minimal_substantial_shift, std_dev, EvolutionContext, HermitianGenerator,
    Orbit,
};
use crate::error::{Error, Result};
use crate::hilbert::{CVector, StateVector, C64};
use crate::report::BoundReport;

/// Below this `ΔJ/ħ` a state is reported as an angular-momentum eigenstate.
const EIGENSTATE_SPREAD: f64 = 1e-12;

/// Samples per `2π` when scanning the angle over full turns.
const TURN_SAMPLES: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleModel {
    m_max: i64,
}

impl CircleModel {
    pub fn new(m_max: i64) -> Result<Self> {
        if m_max < 1 {
            return Err(Error::InvalidParameter(format!("need M >= 1, got {m_max}")));
        }
        Ok(Self { m_max })
    }

    pub fn m_max(&self) -> i64 {
        self.m_max
    }

    pub fn dim(&self) -> usize {
        (2 * self.m_max + 1) as usize
    }

    pub fn modes(&self) -> impl Iterator<Item = i64> {
        -self.m_max..=self.m_max
    }

    pub fn index(&self, m: i64) -> Result<usize> {
        if m.abs() > self.m_max {
            return Err(Error::InvalidParameter(format!(
                "mode {m} outside ±{}",
                self.m_max
            )));
        }
        Ok((m + self.m_max) as usize)
    }

    /// The single-mode state `e^{imφ}/√(2π)`.
    pub fn mode_state(&self, m: i64) -> Result<StateVector> {
        StateVector::basis(self.dim(), self.index(m)?)
    }

    /// A normalized superposition with the given amplitude on each mode.
    pub fn superposition(&self, terms: &[(i64, C64)]) -> Result<StateVector> {
        let mut amps = CVector::zeros(self.dim());
        for &(m, a) in terms {
            amps[self.index(m)?] += a;
        }
        StateVector::normalize(amps)
    }

    /// Equal-weight superposition of the listed modes.
    pub fn balanced(&self, modes: &[i64]) -> Result<StateVector> {
        let terms: Vec<(i64, C64)> = modes.iter().map(|&m| (m, C64::from(1.0))).collect();
        self.superposition(&terms)
    }
}

/// `J = diag(ħm)`.
pub fn angular_momentum_operator(model: &CircleModel, hbar: f64) -> HermitianGenerator {
    let values: Vec<f64> = model.modes().map(|m| hbar * m as f64).collect();
    HermitianGenerator::diagonal(&values).expect("mode values are finite")
}

/// The certainty principle for rotations of a circle state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleDemo {
    /// Verdict at `δφ*`, or at a full turn when the state never changes
    /// substantially.
    pub report: BoundReport,
    /// Smallest rotation in `(0, 2π]` that changes the state substantially.
    pub delta_star: Option<f64>,
    pub std_dev: f64,
    /// `δφ*·ΔJ/ħ`.
    pub product: Option<f64>,
    /// Largest angle to the initial state over `δφ ∈ [0, 4π]`.
    pub max_angle: f64,
    pub eigenstate: bool,
    pub note: String,
}

pub fn circle_certainty_demo(
    model: &CircleModel,
    state: &StateVector,
    hbar: f64,
) -> Result<CircleDemo> {
    let ctx = EvolutionContext::new(angular_momentum_operator(model, hbar), hbar)?;
    let spread = std_dev(ctx.generator(), state)?;
    let delta_star = minimal_substantial_shift(&ctx, state, 2.0 * PI)?;
    let report = certainty_verdict(&ctx, state, delta_star.unwrap_or(2.0 * PI))?;

    let orbit = Orbit::new(&ctx, state)?;
    let samples = 2 * TURN_SAMPLES;
    let max_angle = (0..=samples)
        .map(|k| orbit.angle_at(4.0 * PI * k as f64 / samples as f64))
        .fold(0.0, f64::max);

    let eigenstate = spread / hbar < EIGENSTATE_SPREAD;
    let note = if eigenstate {
        "angular-momentum eigenstate: dJ = 0, the state is perfectly well defined and no rotation \
         changes it substantially; a dphi*dJ >= hbar/2 analogue has no valid counterpart here"
            .to_string()
    } else {
        String::new()
    };
    debug_assert!(max_angle <= FRAC_PI_2);
    Ok(CircleDemo {
        report,
        delta_star,
        std_dev: spread,
        product: delta_star.map(|d| d * spread / hbar),
        max_angle,
        eigenstate,
        note,
    })
}
