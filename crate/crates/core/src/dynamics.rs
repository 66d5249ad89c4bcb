//! One-parameter unitary groups `U(δs) = e^{−iδs A/ħ}` and the behaviour of
//! the quantum angle along their orbits.
//!
//! Along an orbit the mean and standard deviation of the generator are
//! constant, and so is the angular speed `ΔA/ħ`. Integrating that speed bounds
//! the angle travelled, which gives the certainty principle: a state can change
//! substantially (angle ≥ 1 rad) only if `|δs|·ΔA ≥ ħ`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    check_dims, differ_substantially, CVector, StateVector, C64, ORTHOGONAL_ANGLE,
    SUBSTANTIAL_ANGLE,
};
use crate::kinematics::Curve;
use crate::report::BoundReport;

/// Relative tolerance on `‖A − A†‖_max`, scaled by `max(1, ‖A‖_max)`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Relative tolerance on `‖VΛV† − A‖_max`, scaled by `‖A‖_max`.
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-8;

/// Tolerance, in units of ħ, for the certainty-principle verdict.
pub const CERTAINTY_TOLERANCE: f64 = 1e-9;

/// Tolerance for `angle ≤ min(π/2, bound)` in [`angle_profile`].
pub const PROFILE_TOLERANCE: f64 = 1e-9;

/// Width of the final bracket in [`minimal_substantial_shift`], relative to
/// the bracket's right end.
pub const SHIFT_RESOLUTION: f64 = 1e-13;

/// Eigenvalues and (column) eigenvectors of a Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: DVector<f64>,
    pub vectors: DMatrix<C64>,
}

/// A self-adjoint operator with its spectral decomposition.
///
/// The decomposition is computed when the generator is built with
/// [`HermitianGenerator::new`], and on first use for generators produced by
/// [`combined_generator`] (large combined operators are often only needed for
/// their moments).
#[derive(Debug)]
pub struct HermitianGenerator {
    matrix: DMatrix<C64>,
    spectrum: OnceLock<Spectrum>,
}

impl Clone for HermitianGenerator {
    fn clone(&self) -> Self {
        let spectrum = OnceLock::new();
        if let Some(s) = self.spectrum.get() {
            let _ = spectrum.set(s.clone());
        }
        Self {
            matrix: self.matrix.clone(),
            spectrum,
        }
    }
}

impl HermitianGenerator {
    /// Validates `matrix` and diagonalizes it.
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        let generator = Self::deferred(matrix)?;
        generator.spectrum()?;
        Ok(generator)
    }

    /// Validates `matrix`; the spectrum is computed on first use.
    pub fn deferred(matrix: DMatrix<C64>) -> Result<Self> {
        check_hermitian(&matrix)?;
        Ok(Self {
            matrix,
            spectrum: OnceLock::new(),
        })
    }

    /// The diagonal operator with the given real entries.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = values.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::from(values[i])
            } else {
                C64::from(0.0)
            }
        });
        let spectrum = OnceLock::new();
        let _ = spectrum.set(Spectrum {
            values: DVector::from_column_slice(values),
            vectors: DMatrix::identity(n, n),
        });
        Ok(Self { matrix, spectrum })
    }

    /// Uses a known eigen-decomposition instead of computing one.
    ///
    /// `vectors` must be unitary; a few columns of `VΛV†` are compared against
    /// `matrix` to catch mismatched inputs.
    pub fn with_spectrum(
        matrix: DMatrix<C64>,
        values: DVector<f64>,
        vectors: DMatrix<C64>,
    ) -> Result<Self> {
        check_hermitian(&matrix)?;
        let n = matrix.nrows();
        if values.len() != n || vectors.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: values.len(),
            });
        }
        let spectrum = Spectrum { values, vectors };
        let scale = max_abs(&matrix);
        let mut probes = vec![0, n / 2, n - 1];
        probes.dedup();
        for col in probes {
            // column `col` of VΛV†
            let row = spectrum.vectors.row(col).adjoint();
            let weighted = row.zip_map(&spectrum.values, |v, l| v * l);
            let rebuilt = &spectrum.vectors * weighted;
            let residual = max_abs_iter((rebuilt - matrix.column(col)).iter());
            if residual > RECONSTRUCTION_TOLERANCE * scale {
                return Err(Error::Decomposition { residual });
            }
        }
        let cell = OnceLock::new();
        let _ = cell.set(spectrum);
        Ok(Self {
            matrix,
            spectrum: cell,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// The spectral decomposition, computing it if needed.
    pub fn spectrum(&self) -> Result<&Spectrum> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        let eig = SymmetricEigen::new(self.matrix.clone());
        let spectrum = Spectrum {
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        };
        let residual = reconstruction_residual(&self.matrix, &spectrum);
        if residual > RECONSTRUCTION_TOLERANCE * max_abs(&self.matrix) {
            return Err(Error::Decomposition { residual });
        }
        Ok(self.spectrum.get_or_init(|| spectrum))
    }

    /// `A·v`.
    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        check_dims(self.dim(), v.len())?;
        Ok(&self.matrix * v)
    }

    /// The operator multiplied by a real factor.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !factor.is_finite() {
            return Err(Error::NonFinite);
        }
        let matrix = self.matrix.map(|z| z * factor);
        let spectrum = OnceLock::new();
        if let Some(s) = self.spectrum.get() {
            let _ = spectrum.set(Spectrum {
                values: s.values.map(|v| v * factor),
                vectors: s.vectors.clone(),
            });
        }
        Ok(Self { matrix, spectrum })
    }
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    max_abs_iter(m.iter())
}

fn max_abs_iter<'a>(entries: impl Iterator<Item = &'a C64>) -> f64 {
    entries.map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_hermitian(m: &DMatrix<C64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            left: m.nrows(),
            right: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = m.nrows();
    let mut deviation: f64 = 0.0;
    for j in 0..n {
        for i in j..n {
            deviation = deviation.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if deviation > HERMITIAN_TOLERANCE * max_abs(m).max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// `‖VΛV† − A‖_max`.
pub fn reconstruction_residual(matrix: &DMatrix<C64>, spectrum: &Spectrum) -> f64 {
    let mut scaled = spectrum.vectors.clone();
    for (mut col, &l) in scaled.column_iter_mut().zip(spectrum.values.iter()) {
        col *= C64::from(l);
    }
    max_abs(&(scaled * spectrum.vectors.adjoint() - matrix))
}

/// A generator together with the value of ħ that converts it into a group.
#[derive(Debug, Clone)]
pub struct EvolutionContext {
    generator: HermitianGenerator,
    hbar: f64,
}

impl EvolutionContext {
    pub fn new(generator: HermitianGenerator, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        Ok(Self { generator, hbar })
    }

    /// Natural units, ħ = 1.
    pub fn natural(generator: HermitianGenerator) -> Self {
        Self {
            generator,
            hbar: 1.0,
        }
    }

    pub fn generator(&self) -> &HermitianGenerator {
        &self.generator
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

/// `e^{−iδs A/ħ} ψ₀`, through the spectral decomposition of `A`.
pub fn evolve(ctx: &EvolutionContext, psi0: &StateVector, deltas: f64) -> Result<StateVector> {
    Orbit::new(ctx, psi0)?.state_at(deltas)
}

/// `⟨ψ|A|ψ⟩`; the imaginary round-off is discarded.
pub fn mean(generator: &HermitianGenerator, psi: &StateVector) -> Result<f64> {
    let applied = generator.apply(psi.amplitudes())?;
    Ok(psi.amplitudes().dotc(&applied).re)
}

/// `⟨(A − Ā)²⟩^{1/2}`, evaluated as `‖(A − Ā)ψ‖`.
pub fn std_dev(generator: &HermitianGenerator, psi: &StateVector) -> Result<f64> {
    let applied = generator.apply(psi.amplitudes())?;
    let m = psi.amplitudes().dotc(&applied).re;
    Ok((applied - psi.amplitudes() * C64::from(m)).norm())
}

/// Mean, standard deviation, and angular speed of an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitStats {
    pub mean: f64,
    pub std_dev: f64,
    /// `std_dev / ħ`, the angular speed along the orbit.
    pub omega: f64,
}

pub fn orbit_stats(ctx: &EvolutionContext, psi0: &StateVector) -> Result<OrbitStats> {
    let m = mean(&ctx.generator, psi0)?;
    let s = std_dev(&ctx.generator, psi0)?;
    Ok(OrbitStats {
        mean: m,
        std_dev: s,
        omega: s / ctx.hbar,
    })
}

/// The velocity `Aψ/(iħ)` of the orbit through `psi`.
pub fn orbit_velocity(ctx: &EvolutionContext, psi: &StateVector) -> Result<CVector> {
    let applied = ctx.generator.apply(psi.amplitudes())?;
    Ok(applied * C64::new(0.0, -1.0 / ctx.hbar))
}

/// The orbit of a fixed state, expanded once in the eigenbasis of the
/// generator so that points and overlaps along it are cheap.
#[derive(Debug, Clone)]
pub struct Orbit<'a> {
    spectrum: &'a Spectrum,
    hbar: f64,
    coefficients: CVector,
    weights: Vec<f64>,
    total_weight: f64,
}

impl<'a> Orbit<'a> {
    pub fn new(ctx: &'a EvolutionContext, psi0: &StateVector) -> Result<Self> {
        check_dims(ctx.generator.dim(), psi0.dim())?;
        let spectrum = ctx.generator.spectrum()?;
        let coefficients = spectrum.vectors.ad_mul(psi0.amplitudes());
        let weights: Vec<f64> = coefficients.iter().map(|c| c.norm_sqr()).collect();
        let total_weight = weights.iter().sum();
        Ok(Self {
            spectrum,
            hbar: ctx.hbar,
            coefficients,
            weights,
            total_weight,
        })
    }

    fn phase(&self, j: usize, deltas: f64) -> C64 {
        C64::from_polar(1.0, -deltas * self.spectrum.values[j] / self.hbar)
    }

    /// `ψ(δs)`.
    pub fn state_at(&self, deltas: f64) -> Result<StateVector> {
        if !deltas.is_finite() {
            return Err(Error::NonFinite);
        }
        let rotated = CVector::from_fn(self.coefficients.len(), |j, _| {
            self.coefficients[j] * self.phase(j, deltas)
        });
        Ok(StateVector::from_trusted(&self.spectrum.vectors * rotated))
    }

    /// `⟨ψ(0)|ψ(δs)⟩ = Σ_j |c_j|² e^{−iδs λ_j/ħ}`.
    pub fn autocorrelation(&self, deltas: f64) -> C64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(j, &w)| self.phase(j, deltas) * w)
            .sum()
    }

    /// `∠(ψ(δs), ψ(0))`.
    ///
    /// The weights are renormalized so that `δs = 0` gives exactly zero.
    /// Near-parallel states use `sin² = Σ_j w_j |e^{−iδsλ_j/ħ} − g|²`, which is
    /// `1 − |g|²` without the cancellation.
    pub fn angle_at(&self, deltas: f64) -> f64 {
        let g = self.autocorrelation(deltas) / self.total_weight;
        let modulus = g.norm();
        if modulus > 1.0 {
            return 0.0;
        }
        if modulus < 0.7 {
            return modulus.acos();
        }
        let sine_sq: f64 = self
            .weights
            .iter()
            .enumerate()
            .map(|(j, &w)| w * (self.phase(j, deltas) - g).norm_sqr())
            .sum::<f64>()
            / self.total_weight;
        sine_sq.sqrt().min(1.0).asin()
    }

    /// Spread of the generator in the orbit's state, from the spectral weights.
    pub fn spectral_std_dev(&self) -> f64 {
        let values = &self.spectrum.values;
        let m: f64 = self
            .weights
            .iter()
            .zip(values.iter())
            .map(|(w, l)| w * l)
            .sum();
        self.weights
            .iter()
            .zip(values.iter())
            .map(|(w, l)| w * (l - m) * (l - m))
            .sum::<f64>()
            .sqrt()
    }
}

/// One sample of the angle along an orbit and its bound `|δs|·ΔA/ħ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub deltas: f64,
    pub angle: f64,
    pub bound: f64,
    /// `angle ≤ min(π/2, bound)` within [`PROFILE_TOLERANCE`].
    pub holds: bool,
}

pub fn angle_profile(
    ctx: &EvolutionContext,
    psi0: &StateVector,
    grid: &[f64],
) -> Result<Vec<ProfilePoint>> {
    if grid.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite);
    }
    let orbit = Orbit::new(ctx, psi0)?;
    let omega = std_dev(&ctx.generator, psi0)? / ctx.hbar;
    Ok(grid
        .iter()
        .map(|&deltas| {
            let angle = orbit.angle_at(deltas);
            let bound = deltas.abs() * omega;
            ProfilePoint {
                deltas,
                angle,
                bound,
                holds: angle <= bound.min(ORTHOGONAL_ANGLE) + PROFILE_TOLERANCE,
            }
        })
        .collect())
}

/// The certainty principle at one group parameter: if `U(δs)ψ₀` differs
/// substantially from `ψ₀`, then `ħ ≤ |δs|·ΔA`. When the premise is false the
/// report holds vacuously.
pub fn certainty_verdict(
    ctx: &EvolutionContext,
    psi0: &StateVector,
    deltas: f64,
) -> Result<BoundReport> {
    let moved = evolve(ctx, psi0, deltas)?;
    let spread = std_dev(&ctx.generator, psi0)?;
    let lhs = ctx.hbar;
    let rhs = deltas.abs() * spread;
    if differ_substantially(&moved, psi0)? {
        Ok(BoundReport::check(
            "substantial change requires |ds|*dA >= hbar",
            lhs,
            rhs,
            CERTAINTY_TOLERANCE * ctx.hbar,
        ))
    } else {
        Ok(BoundReport::vacuous(
            "not applicable: premise false (state did not change substantially)",
            lhs,
            rhs,
        ))
    }
}

/// The smallest `δs ∈ (0, max_shift]` with `∠(ψ(δs), ψ₀) ≥ 1`, or `None`
/// if the orbit stays within one radian over the range.
///
/// The range is scanned with step `min(0.01·ħ/ΔA, max_shift/1000)` and the
/// first crossing is refined by bisection to [`SHIFT_RESOLUTION`].
pub fn minimal_substantial_shift(
    ctx: &EvolutionContext,
    psi0: &StateVector,
    max_shift: f64,
) -> Result<Option<f64>> {
    if !(max_shift > 0.0) || !max_shift.is_finite() {
        return Err(Error::EmptyRange);
    }
    let orbit = Orbit::new(ctx, psi0)?;
    let spread = std_dev(&ctx.generator, psi0)?;
    let by_range = max_shift / 1000.0;
    let step = if spread > 0.0 {
        (0.01 * ctx.hbar / spread).min(by_range)
    } else {
        by_range
    };
    let substantial = |s: f64| orbit.angle_at(s) >= SUBSTANTIAL_ANGLE;

    let mut lo = 0.0;
    let mut k = 1u64;
    loop {
        let hi = (k as f64 * step).min(max_shift);
        if substantial(hi) {
            return Ok(Some(bisect(lo, hi, substantial)));
        }
        if hi >= max_shift {
            return Ok(None);
        }
        lo = hi;
        k += 1;
    }
}

/// Shrinks `[lo, hi]` around the first point where `pred` turns true,
/// assuming `pred(hi)`; returns the right end.
pub(crate) fn bisect(mut lo: f64, mut hi: f64, pred: impl Fn(f64) -> bool) -> f64 {
    while hi - lo > SHIFT_RESOLUTION * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `Σ_i c_i A_i`. The sum is re-checked for Hermiticity; its spectrum is
/// computed on first use.
pub fn combined_generator(
    coeffs: &[f64],
    gens: &[&HermitianGenerator],
) -> Result<HermitianGenerator> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if coeffs.len() != gens.len() {
        return Err(Error::DimensionMismatch {
            left: coeffs.len(),
            right: gens.len(),
        });
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    let dim = gens[0].dim();
    for g in &gens[1..] {
        check_dims(dim, g.dim())?;
    }
    let mut sum = DMatrix::<C64>::zeros(dim, dim);
    for (&c, g) in coeffs.iter().zip(gens) {
        sum.zip_apply(g.matrix(), |acc, a| *acc += a * c);
    }
    HermitianGenerator::deferred(sum)
}

/// The orbit of `psi0` sampled at `intervals + 1` uniform points of
/// `[s0, s1]`, as a kinematic curve.
pub fn orbit_curve(
    ctx: &EvolutionContext,
    psi0: &StateVector,
    s0: f64,
    s1: f64,
    intervals: usize,
) -> Result<Curve> {
    let orbit = Orbit::new(ctx, psi0)?;
    Curve::uniform(s0, s1, intervals, |s| orbit.state_at(s))
}
