//! Time shifts of a state with a time-independent Hamiltonian, and the
//! lifetime of a quasi-stationary state: `|δt|·ΔH ≥ ħ`.
//!
//! A decaying level of width `Γ` is modelled by a discrete spectrum with
//! Gaussian weights of standard deviation `Γ`. A Lorentzian line shape would
//! have infinite `ΔH` and make the bound empty.

use serde::Serialize;

use crate::dynamics::{
    certainty_verdict, minimal_substantial_shift, std_dev, EvolutionContext, HermitianGenerator,
};
use crate::error::{Error, Result};
use crate::hilbert::{CVector, StateVector, C64};
use crate::report::BoundReport;

pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// The search for `t*` covers `[0, LIFETIME_SEARCH·ħ/ΔH]`.
pub const LIFETIME_SEARCH: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelModel {
    energies: Vec<f64>,
    weights: Vec<f64>,
}

impl LevelModel {
    /// Weights must be non-negative and sum to one.
    pub fn new(energies: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if energies.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                left: energies.len(),
                right: weights.len(),
            });
        }
        if energies.iter().chain(&weights).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidParameter("negative level weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self { energies, weights })
    }

    /// Like `new` but rescales positive weights to unit sum.
    pub fn normalized(energies: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidParameter(
                "weights have no positive mass".into(),
            ));
        }
        Self::new(energies, weights.iter().map(|w| w / total).collect())
    }

    pub fn single(energy: f64) -> Result<Self> {
        Self::new(vec![energy], vec![1.0])
    }

    /// Two equally weighted levels at `E ± Γ`.
    pub fn two_level(energy: f64, gamma: f64) -> Result<Self> {
        Self::new(vec![energy - gamma, energy + gamma], vec![0.5, 0.5])
    }

    /// `levels` equally spaced energies across `center ± span·Γ`, weighted by
    /// `exp(−(E − center)²/(2Γ²))`.
    pub fn gaussian(center: f64, gamma: f64, levels: usize, span: f64) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidParameter(format!(
                "need >= 2 levels, got {levels}"
            )));
        }
        if !(gamma > 0.0) || !(span > 0.0) {
            return Err(Error::InvalidParameter(
                "width and span must be positive".into(),
            ));
        }
        let step = 2.0 * span * gamma / (levels - 1) as f64;
        let energies: Vec<f64> = (0..levels)
            .map(|k| center - span * gamma + k as f64 * step)
            .collect();
        let weights = energies
            .iter()
            .map(|e| (-(e - center).powi(2) / (2.0 * gamma * gamma)).exp())
            .collect();
        Self::normalized(energies, weights)
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// `H = diag(E)`.
    pub fn hamiltonian(&self) -> HermitianGenerator {
        HermitianGenerator::diagonal(&self.energies).expect("energies are finite")
    }

    /// The time-shift generator `−H`.
    pub fn time_generator(&self) -> HermitianGenerator {
        let neg: Vec<f64> = self.energies.iter().map(|e| -e).collect();
        HermitianGenerator::diagonal(&neg).expect("energies are finite")
    }

    /// `ψ₀ = Σ √w_j |E_j⟩`.
    pub fn initial_state(&self) -> Result<StateVector> {
        let amps =
            CVector::from_iterator(self.dim(), self.weights.iter().map(|w| C64::from(w.sqrt())));
        StateVector::normalize(amps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LifetimeDemo {
    /// First time the state is substantially changed; `None` if it never is.
    pub t_star: Option<f64>,
    pub delta_h: f64,
    /// `t*·ΔH/ħ`.
    pub product: Option<f64>,
    pub report: BoundReport,
    pub note: String,
}

pub fn lifetime_demo(model: &LevelModel, hbar: f64) -> Result<LifetimeDemo> {
    let psi0 = model.initial_state()?;
    let delta_h = std_dev(&model.hamiltonian(), &psi0)?;
    let ctx = EvolutionContext::new(model.time_generator(), hbar)?;

    let t_star = if delta_h > 0.0 {
        minimal_substantial_shift(&ctx, &psi0, LIFETIME_SEARCH * hbar / delta_h)?
    } else {
        None
    };
    let report = match t_star {
        Some(t) => certainty_verdict(&ctx, &psi0, t)?,
        None => BoundReport::vacuous("never changes substantially", hbar, 0.0),
    };
    let note = if t_star.is_none() {
        "never decays substantially".to_string()
    } else {
        String::new()
    };
    Ok(LifetimeDemo {
        t_star,
        delta_h,
        product: t_star.map(|t| t * delta_h / hbar),
        report,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_validation() {
        assert!(LevelModel::new(vec![], vec![]).is_err());
        assert!(LevelModel::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(LevelModel::new(vec![0.0, 1.0], vec![0.5, 0.6]).is_err());
        assert!(LevelModel::new(vec![0.0, 1.0], vec![1.5, -0.5]).is_err());
        assert!(LevelModel::gaussian(0.0, 0.0, 61, 4.0).is_err());
        let g = LevelModel::gaussian(3.0, 0.5, 61, 4.0).unwrap();
        assert!((g.weights().iter().sum::<f64>() - 1.0).abs() < WEIGHT_TOLERANCE);
        assert!((g.energies()[0] - 1.0).abs() < 1e-12);
        assert!((g.energies()[60] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn two_level_equality() {
        for (e, gamma, hbar) in [(0.0, 1.0, 1.0), (5.0, 0.3, 1.0), (-2.0, 2.0, 0.5)] {
            let demo = lifetime_demo(&LevelModel::two_level(e, gamma).unwrap(), hbar).unwrap();
            assert!((demo.delta_h - gamma).abs() < 1e-12);
            assert!((demo.t_star.unwrap() - hbar / gamma).abs() < 1e-9 * hbar / gamma);
            assert!((demo.product.unwrap() - 1.0).abs() < 1e-9);
            assert!(demo.report.holds);
        }
    }

    #[test]
    fn gaussian_spectrum_lifetime() {
        let model = LevelModel::gaussian(0.0, 1.0, 61, 4.0).unwrap();
        let demo = lifetime_demo(&model, 1.0).unwrap();
        // discrete spectrum: ΔH = 0.99958812, t*·Γ/ħ = 1.10965698
        assert!((demo.delta_h - 0.999588121283559).abs() < 1e-9);
        assert!((demo.t_star.unwrap() - 1.1096569817912165).abs() < 1e-7);
        assert!((demo.t_star.unwrap() - 1.1096183761870693).abs() < 1e-2);
        assert!(demo.product.unwrap() >= 1.0);
    }

    #[test]
    fn lifetime_scales_inversely_with_width() {
        let narrow =
            lifetime_demo(&LevelModel::gaussian(2.0, 0.25, 61, 4.0).unwrap(), 1.0).unwrap();
        let wide = lifetime_demo(&LevelModel::gaussian(2.0, 1.0, 61, 4.0).unwrap(), 1.0).unwrap();
        let ratio = narrow.t_star.unwrap() / wide.t_star.unwrap();
        assert!((ratio - 4.0).abs() < 1e-6);
        assert!((narrow.product.unwrap() - wide.product.unwrap()).abs() < 1e-6);
    }

    #[test]
    fn single_level_never_decays() {
        let demo = lifetime_demo(&LevelModel::single(1.3).unwrap(), 1.0).unwrap();
        assert!(demo.t_star.is_none());
        assert_eq!(demo.delta_h, 0.0);
        assert!(demo.report.vacuous);
        assert_eq!(demo.note, "never decays substantially");
    }
}
