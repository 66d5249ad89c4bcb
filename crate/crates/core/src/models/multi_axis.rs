//! Shifts of a product Gaussian in two or three dimensions, generated by
//! `B = Σ δx_i P_i`. For a product state the cross covariances vanish, so
//! `ΔB² = Σ δx_i² ΔP_i²`; small grids are cross-checked against the full
//! tensor-product operator.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::dynamics::{
    bisect, combined_generator, std_dev, HermitianGenerator, CERTAINTY_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::hilbert::{CVector, StateVector, C64, SUBSTANTIAL_ANGLE};
use crate::models::line::{
    gaussian_packet, momentum_operator, momentum_std_dev, shift_state, LineGrid,
};
use crate::report::BoundReport;

/// Largest total dimension accepted at all.
pub const MAX_TOTAL_DIM: usize = 1 << 20;

/// Largest total dimension for which the dense tensor oracle is built.
pub const TENSOR_ORACLE_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiAxisDemo {
    /// Verdict for the unit group parameter, i.e. the full displacement.
    pub report: BoundReport,
    pub delta_p: Vec<f64>,
    /// `sqrt(Σ δx_i² ΔP_i²)`.
    pub delta_b: f64,
    /// `ΔB` from the dense tensor-product operator, when small enough.
    pub delta_b_tensor: Option<f64>,
    /// Angle between the product state and its displaced copy.
    pub angle: f64,
    /// Smallest `λ` for which displacing by `λ·δx` is a substantial change.
    pub scale_star: Option<f64>,
    /// `λ*·ΔB/ħ`.
    pub product: Option<f64>,
}

/// Row-major embedding of a one-axis operator: the last axis varies fastest.
pub fn embed_axis_operator(op: &DMatrix<C64>, axis: usize, dims: &[usize]) -> Result<DMatrix<C64>> {
    if axis >= dims.len() {
        return Err(Error::InvalidParameter(format!(
            "no axis {axis} in {} axes",
            dims.len()
        )));
    }
    if op.nrows() != dims[axis] || op.ncols() != dims[axis] {
        return Err(Error::DimensionMismatch {
            left: dims[axis],
            right: op.nrows(),
        });
    }
    let before: usize = dims[..axis].iter().product();
    let after: usize = dims[axis + 1..].iter().product();
    let left = DMatrix::<C64>::identity(before, before).kronecker(op);
    Ok(left.kronecker(&DMatrix::<C64>::identity(after, after)))
}

/// `ψ_0 ⊗ ψ_1 ⊗ …` in the same ordering as [`embed_axis_operator`].
pub fn product_state(factors: &[StateVector]) -> Result<StateVector> {
    let (first, rest) = factors.split_first().ok_or(Error::InvalidDimension(0))?;
    let mut acc: CVector = first.amplitudes().clone();
    for f in rest {
        acc = acc.kronecker(f.amplitudes());
    }
    StateVector::normalize(acc)
}

/// Centered Gaussian factors, one per axis.
pub fn product_gaussian_factors(
    grids: &[LineGrid],
    sigmas: &[f64],
    hbar: f64,
) -> Result<Vec<StateVector>> {
    grids
        .iter()
        .zip(sigmas)
        .map(|(g, &s)| gaussian_packet(g, 0.0, 0.0, s, hbar))
        .collect()
}

/// Angle between a product state and its copy displaced by `scale·δx`; the
/// overlap factorizes over the axes.
pub fn displaced_angle(
    grids: &[LineGrid],
    factors: &[StateVector],
    displacement: &[f64],
    scale: f64,
) -> Result<f64> {
    let mut overlap = 1.0;
    for ((g, f), d) in grids.iter().zip(factors).zip(displacement) {
        overlap *= f.inner(&shift_state(g, f, scale * d)?)?.norm();
    }
    Ok(overlap.min(1.0).acos())
}

fn total_dim(grids: &[LineGrid]) -> Result<usize> {
    grids.iter().try_fold(1usize, |acc, g| {
        acc.checked_mul(g.n())
            .filter(|&d| d <= MAX_TOTAL_DIM)
            .ok_or_else(|| {
                Error::InvalidParameter(format!("total dimension exceeds {MAX_TOTAL_DIM}"))
            })
    })
}

/// `ΔB` for the product state computed with the dense `Σ δx_i P_i ⊗ I`.
pub fn tensor_delta_b(
    grids: &[LineGrid],
    factors: &[StateVector],
    displacement: &[f64],
    hbar: f64,
) -> Result<f64> {
    total_dim(grids)?;
    let dims: Vec<usize> = grids.iter().map(|g| g.n()).collect();
    let mut embedded = Vec::with_capacity(grids.len());
    for (axis, g) in grids.iter().enumerate() {
        let p = momentum_operator(g, hbar)?;
        embedded.push(HermitianGenerator::deferred(embed_axis_operator(
            p.matrix(),
            axis,
            &dims,
        )?)?);
    }
    let refs: Vec<_> = embedded.iter().collect();
    let b = combined_generator(displacement, &refs)?;
    drop(embedded);
    std_dev(&b, &product_state(factors)?)
}

pub fn multi_axis_demo(
    grids: &[LineGrid],
    sigmas: &[f64],
    displacement: &[f64],
    hbar: f64,
) -> Result<MultiAxisDemo> {
    if !(2..=3).contains(&grids.len()) {
        return Err(Error::InvalidParameter(format!(
            "need 2 or 3 axes, got {}",
            grids.len()
        )));
    }
    for len in [sigmas.len(), displacement.len()] {
        if len != grids.len() {
            return Err(Error::DimensionMismatch {
                left: grids.len(),
                right: len,
            });
        }
    }
    if displacement.iter().any(|d| !d.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n_total = total_dim(grids)?;

    let factors = product_gaussian_factors(grids, sigmas, hbar)?;
    let delta_p = grids
        .iter()
        .zip(&factors)
        .map(|(g, f)| momentum_std_dev(g, f, hbar))
        .collect::<Result<Vec<_>>>()?;
    let delta_b = displacement
        .iter()
        .zip(&delta_p)
        .map(|(d, p)| (d * p).powi(2))
        .sum::<f64>()
        .sqrt();
    let delta_b_tensor = if n_total <= TENSOR_ORACLE_DIM {
        Some(tensor_delta_b(grids, &factors, displacement, hbar)?)
    } else {
        None
    };

    let angle_at = |scale: f64| displaced_angle(grids, &factors, displacement, scale);
    let angle = angle_at(1.0)?;

    let scale_star = if delta_b > 0.0 {
        let step = 0.01 * hbar / delta_b;
        let mut found = None;
        let mut lo = 0.0;
        for k in 1..=2000 {
            let hi = k as f64 * step;
            if angle_at(hi)? >= SUBSTANTIAL_ANGLE {
                found = Some(bisect(lo, hi, |s| {
                    angle_at(s).map_or(false, |a| a >= SUBSTANTIAL_ANGLE)
                }));
                break;
            }
            lo = hi;
        }
        found
    } else {
        None
    };

    let report = if angle >= SUBSTANTIAL_ANGLE {
        BoundReport::check(
            "substantial displacement requires d(dx_i P_i) >= hbar",
            hbar,
            delta_b,
            CERTAINTY_TOLERANCE * hbar,
        )
    } else {
        BoundReport::vacuous(
            "not applicable: premise false (state did not change substantially)",
            hbar,
            delta_b,
        )
    };
    Ok(MultiAxisDemo {
        report,
        delta_p,
        delta_b,
        delta_b_tensor,
        angle,
        scale_star,
        product: scale_star.map(|s| s * delta_b / hbar),
    })
}
