//! A particle on a line, discretized on a periodic grid, with the group of
//! spatial shifts `U(δx) = e^{−iδx P/ħ}`.
//!
//! The momentum operator is built spectrally (diagonal in the discrete Fourier
//! basis), so the group it generates is an exact shift of the trigonometric
//! interpolant and the Gaussian equalities hold to near machine precision.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rustfft::FftPlanner;
use serde::Serialize;

use crate::dynamics::{
    certainty_verdict, minimal_substantial_shift, EvolutionContext, HermitianGenerator,
    CERTAINTY_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::hilbert::{check_dims, quantum_angle, CVector, StateVector, C64, SUBSTANTIAL_ANGLE};
use crate::report::BoundReport;

/// Packets must be at least this many grid spacings wide.
pub const GAUSSIAN_MIN_SPACINGS: f64 = 5.0;
/// Gaussian packets must keep this many widths clear of the boundary.
pub const GAUSSIAN_CLEARANCE: f64 = 6.0;
/// Bump supports must span at least this many grid spacings.
pub const BUMP_MIN_SPACINGS: f64 = 10.0;
/// Slack allowed below `ħ/2` in [`pauli_weyl_check`].
pub const PAULI_WEYL_TOLERANCE: f64 = 1e-6;
/// The search for `δx*` covers `[0, LINE_SEARCH·ħ/ΔP]`, capped at `L/2`.
pub const LINE_SEARCH: f64 = 20.0;

/// A periodic grid of `n` points on `[−L/2, L/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineGrid {
    n: usize,
    length: f64,
}

impl LineGrid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "grid needs an even node count >= 8, got {n}"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid length must be positive, got {length}"
            )));
        }
        Ok(Self { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn position(&self, k: usize) -> f64 {
        -0.5 * self.length + k as f64 * self.spacing()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.position(k)).collect()
    }

    /// Integer mode number of FFT bin `q`, in `{−n/2+1, …, n/2}`.
    pub fn mode(&self, q: usize) -> i64 {
        let n = self.n as i64;
        let q = q as i64;
        if q <= n / 2 {
            q
        } else {
            q - n
        }
    }

    /// Wavenumber `k_q = 2π·mode(q)/L` of FFT bin `q`.
    pub fn wavenumber(&self, q: usize) -> f64 {
        2.0 * PI * self.mode(q) as f64 / self.length
    }

    fn half_width(&self) -> f64 {
        0.5 * self.length
    }
}

/// `e^{2πi k/n}` for `k = 0..n`.
fn roots_of_unity(n: usize) -> Vec<C64> {
    (0..n)
        .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect()
}

/// `P = −iħ d/dx` on the grid, diagonal in the plane-wave basis with
/// eigenvalues `ħk_q`.
///
/// The matrix is circulant, `P_{jl} = (ħ/n) Σ_q k_q e^{2πi m_q (j−l)/n}`, and is
/// filled so that it is exactly Hermitian.
pub fn momentum_operator(grid: &LineGrid, hbar: f64) -> Result<HermitianGenerator> {
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    let n = grid.n;
    let roots = roots_of_unity(n);
    let modes: Vec<i64> = (0..n).map(|q| grid.mode(q)).collect();
    let root = |m: i64, j: i64| roots[(m * j).rem_euclid(n as i64) as usize];

    let mut column = vec![C64::from(0.0); n];
    for d in 0..=n / 2 {
        let sum: C64 = modes
            .iter()
            .enumerate()
            .map(|(q, &m)| root(m, d as i64) * grid.wavenumber(q))
            .sum();
        column[d] = sum * (hbar / n as f64);
    }
    column[0].im = 0.0;
    column[n / 2].im = 0.0;
    for d in 1..n / 2 {
        column[n - d] = column[d].conj();
    }
    let matrix = DMatrix::from_fn(n, n, |j, l| column[(j + n - l) % n]);

    // Plane waves e^{ik x_j}/√n = (−1)^m e^{2πi m j/n}/√n.
    let norm = 1.0 / (n as f64).sqrt();
    let vectors = DMatrix::from_fn(n, n, |j, q| {
        let m = modes[q];
        let sign = if m.rem_euclid(2) == 0 { norm } else { -norm };
        root(m, j as i64) * sign
    });
    let values = DVector::from_fn(n, |q, _| hbar * grid.wavenumber(q));
    HermitianGenerator::with_spectrum(matrix, values, vectors)
}

/// `X`, diagonal in grid positions.
pub fn position_operator(grid: &LineGrid) -> HermitianGenerator {
    HermitianGenerator::diagonal(&grid.positions()).expect("grid positions are finite")
}

/// `exp(−(x−x₀)²/(4σ²))·exp(i p₀ x/ħ)` sampled on the grid and normalized.
///
/// Fails with a numerical-guard error unless `σ ≥ 5·spacing` and the packet
/// keeps `6σ` clear of the boundary.
pub fn gaussian_packet(
    grid: &LineGrid,
    x0: f64,
    p0: f64,
    sigma: f64,
    hbar: f64,
) -> Result<StateVector> {
    if !(sigma > 0.0) || !(hbar > 0.0) || !x0.is_finite() || !p0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "packet needs sigma > 0 and hbar > 0 (sigma {sigma}, hbar {hbar})"
        )));
    }
    if sigma < GAUSSIAN_MIN_SPACINGS * grid.spacing() {
        return Err(Error::NumericalGuard(format!(
            "sigma {sigma} is under-resolved by spacing {}",
            grid.spacing()
        )));
    }
    if x0.abs() + GAUSSIAN_CLEARANCE * sigma > grid.half_width() {
        return Err(Error::NumericalGuard(format!(
            "packet at {x0} with sigma {sigma} is clipped by the boundary at ±{}",
            grid.half_width()
        )));
    }
    let samples = CVector::from_iterator(
        grid.n,
        grid.positions().into_iter().map(|x| {
            let envelope = (-(x - x0) * (x - x0) / (4.0 * sigma * sigma)).exp();
            C64::from_polar(envelope, p0 * x / hbar)
        }),
    );
    StateVector::normalize(samples)
}

/// A smooth packet supported exactly on `[x₀ − l/2, x₀ + l/2]`, with profile
/// `exp(−1/(1−u²))`, `u = 2(x−x₀)/l`.
pub fn bump_packet(grid: &LineGrid, x0: f64, support: f64) -> Result<StateVector> {
    if !(support > 0.0) || !x0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bad bump support {support}"
        )));
    }
    if support < BUMP_MIN_SPACINGS * grid.spacing() {
        return Err(Error::NumericalGuard(format!(
            "support {support} is under-resolved by spacing {}",
            grid.spacing()
        )));
    }
    if x0.abs() + 0.5 * support > grid.half_width() {
        return Err(Error::NumericalGuard(format!(
            "bump at {x0} with support {support} leaves the domain ±{}",
            grid.half_width()
        )));
    }
    let samples = CVector::from_iterator(
        grid.n,
        grid.positions().into_iter().map(|x| {
            let u = 2.0 * (x - x0) / support;
            if u.abs() < 1.0 {
                C64::from((-1.0 / (1.0 - u * u)).exp())
            } else {
                C64::from(0.0)
            }
        }),
    );
    StateVector::normalize(samples)
}

fn spectrum_of(grid: &LineGrid, psi: &StateVector) -> Result<Vec<C64>> {
    check_dims(grid.n, psi.dim())?;
    let mut buffer = psi.as_slice().to_vec();
    FftPlanner::new()
        .plan_fft_forward(grid.n)
        .process(&mut buffer);
    Ok(buffer)
}

/// `ψ(x) ↦ ψ(x − δx)` on the periodic grid, applied as the phase
/// `e^{−ik δx}` on each Fourier mode. Exact for any real `δx`.
pub fn shift_state(grid: &LineGrid, psi: &StateVector, deltax: f64) -> Result<StateVector> {
    if !deltax.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut buffer = spectrum_of(grid, psi)?;
    for (q, z) in buffer.iter_mut().enumerate() {
        *z *= C64::from_polar(1.0 / grid.n as f64, -grid.wavenumber(q) * deltax);
    }
    FftPlanner::new()
        .plan_fft_inverse(grid.n)
        .process(&mut buffer);
    Ok(StateVector::from_trusted(CVector::from_vec(buffer)))
}

/// `ΔX` from the position distribution `|ψ(x_k)|²`.
pub fn position_std_dev(grid: &LineGrid, psi: &StateVector) -> Result<f64> {
    check_dims(grid.n, psi.dim())?;
    let weights: Vec<f64> = psi.as_slice().iter().map(|z| z.norm_sqr()).collect();
    Ok(weighted_std(&weights, &grid.positions()))
}

/// `ΔP` from the momentum distribution `|ψ̂(k)|²`, via one FFT.
pub fn momentum_std_dev(grid: &LineGrid, psi: &StateVector, hbar: f64) -> Result<f64> {
    let spectrum = spectrum_of(grid, psi)?;
    let weights: Vec<f64> = spectrum.iter().map(|z| z.norm_sqr()).collect();
    let momenta: Vec<f64> = (0..grid.n).map(|q| hbar * grid.wavenumber(q)).collect();
    Ok(weighted_std(&weights, &momenta))
}

fn weighted_std(weights: &[f64], values: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    let mean = weights.iter().zip(values).map(|(w, v)| w * v).sum::<f64>() / total;
    let var = weights
        .iter()
        .zip(values)
        .map(|(w, v)| w * (v - mean) * (v - mean))
        .sum::<f64>()
        / total;
    var.sqrt()
}

/// `ħ/2 ≤ ΔX·ΔP`. Only meaningful for states localized away from the periodic
/// boundary.
pub fn pauli_weyl_check(grid: &LineGrid, psi: &StateVector, hbar: f64) -> Result<BoundReport> {
    let dx = position_std_dev(grid, psi)?;
    let dp = momentum_std_dev(grid, psi, hbar)?;
    Ok(BoundReport::check(
        "hbar/2 <= dX*dP",
        0.5 * hbar,
        dx * dp,
        PAULI_WEYL_TOLERANCE,
    ))
}

/// Gaussian packet on the line: moments, Pauli–Weyl saturation and the
/// smallest substantial shift.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineDemo {
    pub delta_x: f64,
    pub delta_p: f64,
    pub pauli_weyl: BoundReport,
    /// `|⟨ψ|U(δx)ψ⟩|` at the probe shift.
    pub probe_shift: f64,
    pub probe_overlap: f64,
    pub delta_star: Option<f64>,
    /// `δx*·ΔP/ħ`.
    pub product: Option<f64>,
    pub report: BoundReport,
}

pub fn line_certainty_demo(
    grid: &LineGrid,
    sigma: f64,
    probe_shift: f64,
    hbar: f64,
) -> Result<LineDemo> {
    let psi = gaussian_packet(grid, 0.0, 0.0, sigma, hbar)?;
    let ctx = EvolutionContext::new(momentum_operator(grid, hbar)?, hbar)?;
    let delta_p = momentum_std_dev(grid, &psi, hbar)?;
    let delta_x = position_std_dev(grid, &psi)?;
    let probe_overlap = psi.inner(&shift_state(grid, &psi, probe_shift)?)?.norm();

    let limit = (LINE_SEARCH * hbar / delta_p).min(grid.half_width());
    let delta_star = minimal_substantial_shift(&ctx, &psi, limit)?;
    let report = match delta_star {
        Some(d) => certainty_verdict(&ctx, &psi, d)?,
        None => BoundReport::vacuous("no substantial shift within the search range", hbar, 0.0),
    };
    Ok(LineDemo {
        delta_x,
        delta_p,
        pauli_weyl: pauli_weyl_check(grid, &psi, hbar)?,
        probe_shift,
        probe_overlap,
        delta_star,
        product: delta_star.map(|d| d * delta_p / hbar),
        report,
    })
}

/// A bump of support `l` shifted by `l`: the copies are orthogonal, so the
/// change is substantial and `l·ΔP ≥ ħ` must follow.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BumpCheck {
    /// The requested support rounded to a whole number of grid spacings.
    pub support: f64,
    pub angle: f64,
    pub delta_p: f64,
    /// `l·ΔP/ħ`.
    pub product: f64,
    pub report: BoundReport,
}

/// The bump sits on `[−l, 0]` and is shifted onto `[0, l]`. Rounding `l` to
/// the grid makes the shift an exact index roll, so the supports share no
/// node.
pub fn bump_shift_check(grid: &LineGrid, support: f64, hbar: f64) -> Result<BumpCheck> {
    if !(support > 0.0) || !support.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bad bump support {support}"
        )));
    }
    let l = (support / grid.spacing()).round() * grid.spacing();
    let psi = bump_packet(grid, -0.5 * l, l)?;
    let moved = shift_state(grid, &psi, l)?;
    let angle = quantum_angle(&psi, &moved)?.radians();
    let delta_p = momentum_std_dev(grid, &psi, hbar)?;
    let report = if angle >= SUBSTANTIAL_ANGLE {
        BoundReport::check(
            "substantial shift by l requires l*dP >= hbar",
            hbar,
            l * delta_p,
            CERTAINTY_TOLERANCE * hbar,
        )
    } else {
        BoundReport::vacuous("shifted bump overlaps the original", hbar, l * delta_p)
    };
    Ok(BumpCheck {
        support: l,
        angle,
        delta_p,
        product: l * delta_p / hbar,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve, mean, std_dev};
    use crate::hilbert::random_state;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn standard() -> LineGrid {
        LineGrid::new(1024, 40.0).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(LineGrid::new(6, 1.0).is_err());
        assert!(LineGrid::new(9, 1.0).is_err());
        assert!(LineGrid::new(8, 0.0).is_err());
        let g = LineGrid::new(8, 4.0).unwrap();
        assert_eq!(
            g.positions(),
            vec![-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5]
        );
        let modes: Vec<i64> = (0..8).map(|q| g.mode(q)).collect();
        assert_eq!(modes, vec![0, 1, 2, 3, 4, -3, -2, -1]);
    }

    #[test]
    fn momentum_eigenmodes() {
        let g = LineGrid::new(64, 10.0).unwrap();
        let p = momentum_operator(&g, 1.3).unwrap();

        let constant = StateVector::from_real(&[1.0; 64]).unwrap();
        assert!(p.apply(constant.amplitudes()).unwrap().norm() < 1e-12);

        let k = 2.0 * PI / g.length();
        let wave = StateVector::normalize(CVector::from_iterator(
            64,
            g.positions()
                .into_iter()
                .map(|x| C64::from_polar(1.0, k * x)),
        ))
        .unwrap();
        let applied = p.apply(wave.amplitudes()).unwrap();
        let residual = (applied - wave.amplitudes() * C64::from(1.3 * k)).norm();
        assert!(residual < 1e-10, "{residual}");
    }

    #[test]
    fn momentum_matrix_is_exactly_hermitian() {
        let p = momentum_operator(&LineGrid::new(32, 3.0).unwrap(), 1.0).unwrap();
        assert_eq!(p.matrix(), &p.matrix().adjoint());
    }

    #[test]
    fn gaussian_moments() {
        let g = standard();
        let psi = gaussian_packet(&g, 0.0, 0.0, 1.0, 1.0).unwrap();
        let p = momentum_operator(&g, 1.0).unwrap();
        let x = position_operator(&g);
        assert!((std_dev(&p, &psi).unwrap() - 0.5).abs() < 1e-6);
        assert!(mean(&x, &psi).unwrap().abs() < 1e-8);
        assert!((std_dev(&x, &psi).unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(quantum_angle(&psi, &psi).unwrap().radians(), 0.0);

        // the FFT route agrees with the dense operator
        let fft = momentum_std_dev(&g, &psi, 1.0).unwrap();
        assert!((fft - std_dev(&p, &psi).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn delta_state_position() {
        let g = LineGrid::new(16, 4.0).unwrap();
        let x = position_operator(&g);
        let psi = StateVector::basis(16, 5).unwrap();
        assert_eq!(mean(&x, &psi).unwrap(), g.position(5));
        assert_eq!(std_dev(&x, &psi).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_overlap_under_shift() {
        let g = standard();
        let psi = gaussian_packet(&g, 0.0, 0.0, 1.0, 1.0).unwrap();
        for d in [0.5, 1.0, 2.5, 4.0, 6.3] {
            let moved = shift_state(&g, &psi, d).unwrap();
            let overlap = psi.inner(&moved).unwrap().norm();
            assert!(
                (overlap - (-d * d / 8.0f64).exp()).abs() < 1e-6,
                "{d}: {overlap}"
            );
        }
    }

    #[test]
    fn packet_guards() {
        let g = standard();
        assert!(matches!(
            gaussian_packet(&g, 0.0, 0.0, 0.1, 1.0),
            Err(Error::NumericalGuard(_))
        ));
        assert!(matches!(
            gaussian_packet(&g, 15.0, 0.0, 1.0, 1.0),
            Err(Error::NumericalGuard(_))
        ));
        assert!(gaussian_packet(&g, 0.0, 0.0, -1.0, 1.0).is_err());
        assert!(matches!(
            bump_packet(&g, 0.0, 0.2),
            Err(Error::NumericalGuard(_))
        ));
        assert!(matches!(
            bump_packet(&g, 18.0, 5.0),
            Err(Error::NumericalGuard(_))
        ));
    }

    #[test]
    fn shift_identities() {
        let g = standard();
        let psi = gaussian_packet(&g, 1.0, 0.7, 1.3, 1.0).unwrap();
        let same = shift_state(&g, &psi, 0.0).unwrap();
        assert!((same.amplitudes() - psi.amplitudes()).norm() < 1e-12);
        let around = shift_state(&g, &psi, g.length()).unwrap();
        assert!((around.amplitudes() - psi.amplitudes()).norm() < 1e-10);

        for m in [1usize, 7, 100] {
            let moved = shift_state(&g, &psi, m as f64 * g.spacing()).unwrap();
            let n = g.n();
            for j in 0..n {
                let want = psi.as_slice()[(j + n - m) % n];
                assert!((moved.as_slice()[j] - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn shift_matches_momentum_group() {
        let g = LineGrid::new(128, 12.0).unwrap();
        let ctx = EvolutionContext::new(momentum_operator(&g, 1.0).unwrap(), 1.0).unwrap();
        for seed in 0..10 {
            let psi = random_state(128, seed).unwrap();
            let dx = 0.37 * seed as f64 - 1.5;
            let a = shift_state(&g, &psi, dx).unwrap();
            let b = evolve(&ctx, &psi, dx).unwrap();
            assert!((a.amplitudes() - b.amplitudes()).norm() < 1e-10);
        }
    }

    #[test]
    fn bump_disjoint_shift_is_orthogonal() {
        let g = standard();
        let l = 80.0 * g.spacing();
        let psi = bump_packet(&g, -0.5 * l, l).unwrap();
        assert!(psi.as_slice().iter().filter(|z| z.norm() > 0.0).count() < 80);
        let moved = shift_state(&g, &psi, l).unwrap();
        let ang = quantum_angle(&psi, &moved).unwrap().radians();
        assert!((ang - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
        let same = shift_state(&g, &psi, 0.0).unwrap();
        assert!(quantum_angle(&psi, &same).unwrap().radians() < 1e-12);
    }

    #[test]
    fn pauli_weyl_examples() {
        let g = standard();
        let gauss = gaussian_packet(&g, 0.0, 0.0, 1.0, 1.0).unwrap();
        let r = pauli_weyl_check(&g, &gauss, 1.0).unwrap();
        assert!(r.holds && (r.rhs - 0.5).abs() < 1e-6);

        let bump = bump_packet(&g, 0.0, 4.0).unwrap();
        let r = pauli_weyl_check(&g, &bump, 1.0).unwrap();
        assert!(r.holds && r.rhs > 0.5 + 1e-3, "{}", r.rhs);

        let left = gaussian_packet(&g, -5.0, 0.0, 1.0, 1.0).unwrap();
        let right = gaussian_packet(&g, 5.0, 0.0, 1.0, 1.0).unwrap();
        let pair = StateVector::normalize(left.amplitudes() + right.amplitudes()).unwrap();
        let r = pauli_weyl_check(&g, &pair, 1.0).unwrap();
        assert!(r.holds && r.rhs > 2.0, "{}", r.rhs);
    }

    #[test]
    fn line_demo_oracles() {
        let demo = line_certainty_demo(&standard(), 1.0, 4.0, 1.0).unwrap();
        assert!((demo.delta_p - 0.5).abs() < 1e-6);
        assert!((demo.delta_x * demo.delta_p - 0.5).abs() < 1e-6);
        assert!((demo.probe_overlap - (-2.0f64).exp()).abs() < 1e-6);
        assert!((demo.product.unwrap() - 1.1096183761870693).abs() < 1e-3);
        assert!(demo.report.holds && !demo.report.vacuous);
    }

    #[test]
    fn line_product_is_width_independent() {
        for sigma in [0.5, 1.0, 2.0] {
            let demo = line_certainty_demo(&standard(), sigma, 1.0, 1.0).unwrap();
            assert!(
                (demo.product.unwrap() - 1.1096183761870693).abs() < 1e-3,
                "{sigma}"
            );
        }
    }

    #[test]
    fn bump_corollary_for_seeded_widths() {
        let g = standard();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let l: f64 = rng.random_range(1.0..10.0);
            let check = bump_shift_check(&g, l, 1.0).unwrap();
            assert!((check.support - l).abs() <= 0.5 * g.spacing());
            assert!((check.angle - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
            assert!(check.product >= 1.0 && check.report.holds && !check.report.vacuous);
        }
    }
}
