//! Unit state vectors, the inner product, and the quantum angle
//! `∠(a, b) = arccos |⟨a|b⟩|` between the rays they represent.
//!
//! The angle is a metric on physical states (unit vectors modulo a global
//! phase). This module also carries the machinery used to check the metric
//! axioms numerically, including the reduction of an arbitrary triple of
//! states to a canonical form in `C³`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CVector = DVector<C64>;

/// Maximum distance from unit norm accepted by [`StateVector::new`].
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Angle at or above which two states differ substantially (one radian).
pub const SUBSTANTIAL_ANGLE: f64 = 1.0;

/// Angle between orthogonal states.
pub const ORTHOGONAL_ANGLE: f64 = FRAC_PI_2;

/// Below this overlap magnitude the angle is taken from `arccos`; above it the
/// orthogonal residual is used instead, where `arccos` loses half its digits.
const SMALL_ANGLE_OVERLAP: f64 = 0.7;

/// A normalized vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    /// Wraps `amplitudes`, rejecting vectors more than [`NORM_TOLERANCE`] away
    /// from unit norm.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        check_amplitudes(&amplitudes)?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    pub fn from_vec(amplitudes: Vec<C64>) -> Result<Self> {
        Self::new(CVector::from_vec(amplitudes))
    }

    /// Rescales `raw` to unit norm, keeping its direction.
    pub fn normalize(raw: CVector) -> Result<Self> {
        check_amplitudes(&raw)?;
        let norm = raw.norm();
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        if !norm.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            amplitudes: raw.unscale(norm),
        })
    }

    /// Builds a state from real samples, normalizing.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::normalize(CVector::from_iterator(
            values.len(),
            values.iter().map(|&v| C64::new(v, 0.0)),
        ))
    }

    /// The `k`-th standard basis vector of `C^dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if dim == 0 || k >= dim {
            return Err(Error::InvalidDimension(dim));
        }
        let mut amplitudes = CVector::zeros(dim);
        amplitudes[k] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub(crate) fn from_trusted(amplitudes: CVector) -> Self {
        debug_assert!((amplitudes.norm() - 1.0).abs() <= 1e-6);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn as_slice(&self) -> &[C64] {
        self.amplitudes.as_slice()
    }

    pub fn into_inner(self) -> CVector {
        self.amplitudes
    }

    /// Multiplies by the global phase `e^{iθ}`; the ray is unchanged.
    pub fn with_phase(&self, theta: f64) -> Self {
        Self {
            amplitudes: self.amplitudes.scale_complex(C64::from_polar(1.0, theta)),
        }
    }

    pub fn inner(&self, other: &Self) -> Result<C64> {
        inner(self, other)
    }

    pub fn angle_to(&self, other: &Self) -> Result<QuantumAngle> {
        quantum_angle(self, other)
    }
}

trait ScaleComplex {
    fn scale_complex(&self, factor: C64) -> Self;
}

impl ScaleComplex for CVector {
    fn scale_complex(&self, factor: C64) -> Self {
        self.map(|z| z * factor)
    }
}

fn check_amplitudes(v: &CVector) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidDimension(0));
    }
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// `⟨a|b⟩`, antilinear in `a` and linear in `b`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<C64> {
    check_dims(a.dim(), b.dim())?;
    Ok(a.amplitudes.dotc(&b.amplitudes))
}

/// An angle between rays, always in `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuantumAngle(f64);

impl QuantumAngle {
    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn is_substantial(self) -> bool {
        self.0 >= SUBSTANTIAL_ANGLE
    }
}

impl fmt::Display for QuantumAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad", self.0)
    }
}

/// `∠(a, b) = arccos |⟨a|b⟩|`, with the overlap clamped into `[0, 1]`.
///
/// For nearly parallel states the same angle is evaluated as
/// `arcsin ‖b − a⟨a|b⟩‖`, symmetrized over the argument order, so that tiny
/// angles keep full relative precision. The result is exactly symmetric.
pub fn quantum_angle(a: &StateVector, b: &StateVector) -> Result<QuantumAngle> {
    check_dims(a.dim(), b.dim())?;
    Ok(QuantumAngle(unit_angle(&a.amplitudes, &b.amplitudes)))
}

pub(crate) fn unit_angle(a: &CVector, b: &CVector) -> f64 {
    let overlap = a.dotc(b);
    let modulus = overlap.norm();
    if modulus > 1.0 {
        return 0.0;
    }
    if modulus < SMALL_ANGLE_OVERLAP {
        return modulus.acos();
    }
    let residual_ab = residual_norm(a, b, overlap);
    let residual_ba = residual_norm(b, a, overlap.conj());
    let sine = ((residual_ab + residual_ba) / 2.0).min(1.0);
    sine.asin()
}

/// `‖b − a·overlap‖` without allocating.
fn residual_norm(a: &CVector, b: &CVector, overlap: C64) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(&x, &y)| (y - x * overlap).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// True iff `∠(a, b) ≥ 1` radian.
pub fn differ_substantially(a: &StateVector, b: &StateVector) -> Result<bool> {
    Ok(quantum_angle(a, b)?.is_substantial())
}

/// A triple of states rotated and rephased into the form
/// `a = (1, 0, 0)`, `b = (b₁, z, b₃)`, `c = (c₁, c₂, 0)` with `b₁, b₃, c₁, c₂`
/// real and non-negative. All pairwise angles match the source triple.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalTriple {
    pub a: StateVector,
    pub b: StateVector,
    pub c: StateVector,
    pub b1: f64,
    pub b3: f64,
    pub c1: f64,
    pub c2: f64,
    pub z: C64,
}

/// Residual norm below which a Gram–Schmidt direction is considered absent.
const SPAN_EPS: f64 = 1e-12;

/// Reduces `(a, b, c)` to a [`CanonicalTriple`].
///
/// The basis is built by Gram–Schmidt on `(a, c, b)`; `b` and `c` are first
/// rephased so that their overlaps with `a` are real and non-negative. When the
/// span has fewer than three dimensions the missing coordinates are zero.
pub fn canonicalize_triple(
    a: &StateVector,
    b: &StateVector,
    c: &StateVector,
) -> Result<CanonicalTriple> {
    check_dims(a.dim(), b.dim())?;
    check_dims(a.dim(), c.dim())?;

    let e1 = a.amplitudes();
    let b_aligned = align_to(e1, b.amplitudes());
    let c_aligned = align_to(e1, c.amplitudes());

    let b1 = e1.dotc(&b_aligned).re.clamp(0.0, 1.0);
    let c1 = e1.dotc(&c_aligned).re.clamp(0.0, 1.0);

    let c_rest = orthogonal_residual(&c_aligned, &[e1]);
    let c2 = c_rest.norm();

    let (z, b3) = if c2 > SPAN_EPS {
        let e2 = c_rest.unscale(c2);
        let z = e2.dotc(&b_aligned);
        let b3 = orthogonal_residual(&b_aligned, &[e1, &e2]).norm();
        (z, b3)
    } else {
        // c is parallel to a; b's residual then defines the second axis.
        let b_rest = orthogonal_residual(&b_aligned, &[e1]).norm();
        (C64::new(b_rest, 0.0), 0.0)
    };
    let c2 = if c2 > SPAN_EPS { c2 } else { 0.0 };

    let re = |x: f64| C64::new(x, 0.0);
    Ok(CanonicalTriple {
        a: StateVector::new(CVector::from_vec(vec![re(1.0), re(0.0), re(0.0)]))?,
        b: StateVector::normalize(CVector::from_vec(vec![re(b1), z, re(b3)]))?,
        c: StateVector::normalize(CVector::from_vec(vec![re(c1), re(c2), re(0.0)]))?,
        b1,
        b3,
        c1,
        c2,
        z,
    })
}

/// `v·e^{iα}` with `⟨reference|v e^{iα}⟩` real and non-negative (α = 0 when
/// the overlap vanishes).
fn align_to(reference: &CVector, v: &CVector) -> CVector {
    let overlap = reference.dotc(v);
    if overlap.norm() == 0.0 {
        return v.clone();
    }
    let phase = overlap.conj() / overlap.norm();
    v.scale_complex(phase)
}

/// Removes the components of `v` along each (orthonormal) vector in `basis`.
/// Two passes keep the result orthogonal to working precision.
fn orthogonal_residual(v: &CVector, basis: &[&CVector]) -> CVector {
    let mut out = v.clone();
    for _ in 0..2 {
        for e in basis {
            let coeff = e.dotc(&out);
            out -= e.scale_complex(coeff);
        }
    }
    out
}

/// The real vector `b′ = (b₁, |z|, b₃)` used in the triangle-inequality
/// argument. It keeps `∠(a, b′) = ∠(a, b)` and satisfies
/// `∠(b′, c) ≤ ∠(b, c)`.
pub fn auxiliary_b_prime(triple: &CanonicalTriple) -> StateVector {
    let re = |x: f64| C64::new(x, 0.0);
    let raw = CVector::from_vec(vec![re(triple.b1), re(triple.z.norm()), re(triple.b3)]);
    StateVector::normalize(raw).expect("b is a unit vector, so b′ is too")
}

/// A state drawn from the unitarily invariant measure on the unit sphere of
/// `C^dim`, deterministic in `seed`.
pub fn random_state(dim: usize, seed: u64) -> Result<StateVector> {
    random_state_with(&mut ChaCha8Rng::seed_from_u64(seed), dim)
}

/// Like [`random_state`], drawing from an existing generator.
pub fn random_state_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<StateVector> {
    if dim == 0 {
        return Err(Error::InvalidDimension(0));
    }
    loop {
        let raw = CVector::from_fn(dim, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        // An exactly zero draw has probability zero; redraw if it happens.
        if raw.norm() > 0.0 {
            return StateVector::normalize(raw);
        }
    }
}
