//! Sampled curves of states and their kinematics: quantum velocity, its
//! split into components parallel and orthogonal to the state, angular speed,
//! and the arc-length bound on the angle between a curve's endpoints.
//!
//! Curves are stored as samples on a strictly increasing parameter grid, so
//! derivatives are finite differences and integrals are quadratures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{check_dims, quantum_angle, unit_angle, CVector, StateVector, C64};
use crate::report::BoundReport;

/// Fixed part of the tolerance used by [`check_estimate`].
pub const ESTIMATE_TOLERANCE: f64 = 1e-8;

/// Relative tolerance for treating a grid as uniform.
const UNIFORM_RTOL: f64 = 1e-9;

/// A path `t ↦ r(t)` sampled at `params[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    params: Vec<f64>,
    states: Vec<StateVector>,
}

impl Curve {
    pub fn new(params: Vec<f64>, states: Vec<StateVector>) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::TooFewNodes { needed: 1, got: 0 });
        }
        if params.len() != states.len() {
            return Err(Error::InvalidParameter(format!(
                "{} parameters for {} states",
                params.len(),
                states.len()
            )));
        }
        if params.iter().any(|t| !t.is_finite()) || params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::NonIncreasingGrid);
        }
        let dim = states[0].dim();
        for s in &states[1..] {
            check_dims(dim, s.dim())?;
        }
        Ok(Self { params, states })
    }

    /// Samples `f` at each parameter.
    pub fn sample<F>(params: Vec<f64>, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<StateVector>,
    {
        let states = params.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Self::new(params, states)
    }

    /// Samples `f` at `intervals + 1` evenly spaced points of `[t0, t1]`.
    pub fn uniform<F>(t0: f64, t1: f64, intervals: usize, f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<StateVector>,
    {
        Self::sample(linspace(t0, t1, intervals)?, f)
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn first(&self) -> &StateVector {
        &self.states[0]
    }

    pub fn last(&self) -> &StateVector {
        &self.states[self.states.len() - 1]
    }

    /// Largest spacing between consecutive nodes (zero for a single node).
    pub fn max_step(&self) -> f64 {
        self.params
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    pub fn is_uniform(&self) -> bool {
        let Some(first) = self.params.windows(2).map(|w| w[1] - w[0]).next() else {
            return true;
        };
        self.params
            .windows(2)
            .all(|w| ((w[1] - w[0]) - first).abs() <= UNIFORM_RTOL * first)
    }

    fn require_segments(&self) -> Result<()> {
        if self.len() < 2 {
            return Err(Error::TooFewNodes {
                needed: 2,
                got: self.len(),
            });
        }
        Ok(())
    }
}

/// `intervals + 1` evenly spaced points from `t0` to `t1` inclusive.
pub fn linspace(t0: f64, t1: f64, intervals: usize) -> Result<Vec<f64>> {
    if intervals == 0 || !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "cannot space {intervals} intervals over [{t0}, {t1}]"
        )));
    }
    let h = (t1 - t0) / intervals as f64;
    Ok((0..=intervals)
        .map(|k| {
            if k == intervals {
                t1
            } else {
                t0 + k as f64 * h
            }
        })
        .collect())
}

/// The quantum velocity `ṙ` at node `k`.
///
/// Interior nodes use the central difference `(r_{k+1} − r_{k−1}) / (t_{k+1} − t_{k−1})`.
/// Endpoints use a one-sided three-point formula (two-point on a two-node curve).
pub fn velocity_at(curve: &Curve, k: usize) -> Result<CVector> {
    curve.require_segments()?;
    let n = curve.len();
    if k >= n {
        return Err(Error::NodeOutOfRange { index: k, len: n });
    }
    let t = &curve.params;
    let r = |i: usize| curve.states[i].amplitudes();

    if k > 0 && k + 1 < n {
        return Ok((r(k + 1) - r(k - 1)).unscale(t[k + 1] - t[k - 1]));
    }
    if n == 2 {
        return Ok((r(1) - r(0)).unscale(t[1] - t[0]));
    }
    let weighted = |w: [f64; 3], idx: [usize; 3]| {
        r(idx[0]) * C64::from(w[0]) + r(idx[1]) * C64::from(w[1]) + r(idx[2]) * C64::from(w[2])
    };
    if k == 0 {
        let (a, b) = (t[1] - t[0], t[2] - t[1]);
        let w = [
            -(2.0 * a + b) / (a * (a + b)),
            (a + b) / (a * b),
            -a / (b * (a + b)),
        ];
        Ok(weighted(w, [0, 1, 2]))
    } else {
        let (a, b) = (t[n - 1] - t[n - 2], t[n - 2] - t[n - 3]);
        let w = [
            (2.0 * a + b) / (a * (a + b)),
            -(a + b) / (a * b),
            a / (b * (a + b)),
        ];
        Ok(weighted(w, [n - 1, n - 2, n - 3]))
    }
}

/// A velocity split as `v = v_par + v_perp` with `v_par = r⟨r|v⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityDecomposition {
    pub v: CVector,
    pub v_par: CVector,
    pub v_perp: CVector,
}

pub fn decompose_velocity(r: &StateVector, v: &CVector) -> Result<VelocityDecomposition> {
    check_dims(r.dim(), v.len())?;
    let along = r.amplitudes().dotc(v);
    let v_par = r.amplitudes() * along;
    let v_perp = v - &v_par;
    Ok(VelocityDecomposition {
        v: v.clone(),
        v_par,
        v_perp,
    })
}

/// Angular speed `ω = ‖v_perp‖` at node `k`, in radians per parameter unit.
pub fn angular_speed(curve: &Curve, k: usize) -> Result<f64> {
    let v = velocity_at(curve, k)?;
    Ok(decompose_velocity(&curve.states[k], &v)?.v_perp.norm())
}

/// Angular speed at every node.
pub fn angular_speeds(curve: &Curve) -> Result<Vec<f64>> {
    (0..curve.len()).map(|k| angular_speed(curve, k)).collect()
}

/// `∠(r_{k+1}, r_k) / (t_{k+1} − t_k)`, the forward angle quotient whose limit
/// defines the angular speed.
pub fn angle_difference_quotient(curve: &Curve, k: usize) -> Result<f64> {
    curve.require_segments()?;
    if k + 1 >= curve.len() {
        return Err(Error::NodeOutOfRange {
            index: k + 1,
            len: curve.len(),
        });
    }
    let angle = quantum_angle(&curve.states[k + 1], &curve.states[k])?.radians();
    Ok(angle / (curve.params[k + 1] - curve.params[k]))
}

/// `|∫ ω dt|` over the whole curve: composite Simpson on uniform grids with an
/// even number of intervals, the trapezoid rule otherwise.
pub fn arc_length(curve: &Curve) -> Result<f64> {
    let omega = angular_speeds(curve)?;
    Ok(integrate(&curve.params, &omega, curve.is_uniform()).abs())
}

fn integrate(t: &[f64], f: &[f64], uniform: bool) -> f64 {
    let intervals = t.len() - 1;
    if uniform && intervals % 2 == 0 {
        let h = (t[intervals] - t[0]) / intervals as f64;
        let inner: f64 = f[1..intervals]
            .iter()
            .enumerate()
            .map(|(i, &v)| if i % 2 == 0 { 4.0 * v } else { 2.0 * v })
            .sum();
        h / 3.0 * (f[0] + inner + f[intervals])
    } else {
        t.windows(2)
            .zip(f.windows(2))
            .map(|(tw, fw)| 0.5 * (tw[1] - tw[0]) * (fw[0] + fw[1]))
            .sum()
    }
}

/// Checks `∠(r(t_N), r(t_0)) ≤ |∫ ω dt|`.
///
/// The tolerance is [`ESTIMATE_TOLERANCE`] plus `h²·N`, with `h` the largest
/// step and `N` the number of intervals.
pub fn check_estimate(curve: &Curve) -> Result<BoundReport> {
    let lhs = quantum_angle(curve.last(), curve.first())?.radians();
    let rhs = arc_length(curve)?;
    let h = curve.max_step();
    let allowance = h * h * (curve.len() - 1) as f64;
    Ok(BoundReport::check(
        "endpoint angle <= arc length",
        lhs,
        rhs,
        ESTIMATE_TOLERANCE + allowance,
    ))
}

/// `e^{iα} r2` with `⟨e^{iα} r2 | r1⟩` real and in `[0, 1]`. When the two
/// states are orthogonal `r2` is returned unchanged.
pub fn phase_align(r1: &StateVector, r2: &StateVector) -> Result<StateVector> {
    let overlap = r2.inner(r1)?;
    let modulus = overlap.norm();
    if modulus == 0.0 {
        return Ok(r2.clone());
    }
    Ok(r2.with_phase(overlap.arg()))
}

/// The great-circle arc from `r1` to (a phase copy of) `r2`, sampled at
/// `intervals + 1` uniform nodes of the arc parameter `s ∈ [0, ∠(r1, r2)]`.
///
/// Its arc length equals the angle between the endpoints. For identical rays
/// the result is the constant curve on `s ∈ [0, 1]`.
pub fn geodesic(r1: &StateVector, r2: &StateVector, intervals: usize) -> Result<Curve> {
    let aligned = phase_align(r1, r2)?;
    let angle = quantum_angle(r1, &aligned)?.radians();
    if intervals == 0 {
        return Err(Error::InvalidParameter(
            "geodesic needs at least one interval".into(),
        ));
    }
    let base = r1.amplitudes();
    let cos_angle = base.dotc(aligned.amplitudes()).re;
    let residual = aligned.amplitudes() - base * C64::from(cos_angle);
    let residual_norm = residual.norm();
    if angle == 0.0 || residual_norm == 0.0 {
        return Curve::uniform(0.0, 1.0, intervals, |_| Ok(r1.clone()));
    }
    let tangent = residual.unscale(residual_norm);
    Curve::uniform(0.0, angle, intervals, |s| {
        let point = base * C64::from(s.cos()) + &tangent * C64::from(s.sin());
        Ok(StateVector::from_trusted(point))
    })
}

/// One row of the exported curve table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: f64,
    pub omega: f64,
    /// Trapezoid-rule `∫ ω dt` from the start to this node.
    pub cumulative_length: f64,
    pub angle_to_start: f64,
}

pub fn curve_profile(curve: &Curve) -> Result<Vec<CurvePoint>> {
    let omega = angular_speeds(curve)?;
    let start = curve.first().amplitudes();
    let mut cumulative = 0.0;
    Ok((0..curve.len())
        .map(|k| {
            if k > 0 {
                cumulative +=
                    0.5 * (curve.params[k] - curve.params[k - 1]) * (omega[k] + omega[k - 1]);
            }
            CurvePoint {
                t: curve.params[k],
                omega: omega[k],
                cumulative_length: cumulative,
                angle_to_start: unit_angle(start, curve.states[k].amplitudes()),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::random_state;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn circle(t: f64) -> Result<StateVector> {
        StateVector::from_vec(vec![c(t.cos(), 0.0), c(t.sin(), 0.0)])
    }

    fn phase_curve(omega: f64) -> impl Fn(f64) -> Result<StateVector> {
        move |t| StateVector::from_vec(vec![C64::from_polar(1.0, omega * t), c(0.0, 0.0)])
    }

    #[test]
    fn curve_validation() {
        let s = StateVector::basis(2, 0).unwrap();
        assert!(Curve::new(vec![], vec![]).is_err());
        assert!(matches!(
            Curve::new(vec![0.0, 0.0], vec![s.clone(), s.clone()]),
            Err(Error::NonIncreasingGrid)
        ));
        let other = StateVector::basis(3, 0).unwrap();
        assert!(Curve::new(vec![0.0, 1.0], vec![s.clone(), other]).is_err());

        let single = Curve::new(vec![0.0], vec![s]).unwrap();
        assert!(matches!(
            velocity_at(&single, 0),
            Err(Error::TooFewNodes { needed: 2, got: 1 })
        ));
        assert!(arc_length(&single).is_err());
    }

    #[test]
    fn constant_curve_has_zero_velocity() {
        let curve = Curve::uniform(0.0, 1.0, 10, |_| StateVector::basis(2, 0)).unwrap();
        for k in 0..curve.len() {
            assert!(velocity_at(&curve, k).unwrap().norm() < 1e-12);
        }
        assert!(arc_length(&curve).unwrap() < 1e-12);
        let report = check_estimate(&curve).unwrap();
        assert!(report.holds);
        assert_eq!(report.lhs, 0.0);
        assert!(report.rhs < 1e-12);
    }

    #[test]
    fn circle_velocity_is_second_order() {
        // Central difference of (cos t, sin t) is (−sin t, cos t)·sin(h)/h.
        let h = 1e-3;
        let curve = Curve::uniform(0.0, 1000.0 * h, 1000, circle).unwrap();
        for k in [1, 250, 777, 999] {
            let t = curve.params()[k];
            let exact = CVector::from_vec(vec![c(-t.sin(), 0.0), c(t.cos(), 0.0)]);
            let err = (velocity_at(&curve, k).unwrap() - exact).norm();
            assert!(err <= h * h / 6.0 * 1.01 + 1e-12, "{k}: {err}");
        }
    }

    #[test]
    fn phase_velocity_is_imaginary_multiple() {
        let omega = 2.5;
        let h = 1e-3;
        let curve = Curve::uniform(0.0, 1.0, 1000, phase_curve(omega)).unwrap();
        let k = 400;
        let t = curve.params()[k];
        let exact = CVector::from_vec(vec![
            c(0.0, omega) * C64::from_polar(1.0, omega * t),
            c(0.0, 0.0),
        ]);
        let err = (velocity_at(&curve, k).unwrap() - exact).norm();
        assert!(err <= omega.powi(3) * h * h / 6.0 * 1.01, "{err}");
        // pure phase motion is entirely parallel to the state
        assert!(angular_speed(&curve, k).unwrap() < 1e-10);
    }

    #[test]
    fn decomposition_examples() {
        let a = 0.3;
        let b = -1.7;
        let r = StateVector::basis(2, 0).unwrap();
        let v = CVector::from_vec(vec![c(0.0, a), c(b, 0.0)]);
        let d = decompose_velocity(&r, &v).unwrap();
        assert_eq!(d.v_par, CVector::from_vec(vec![c(0.0, a), c(0.0, 0.0)]));
        assert_eq!(d.v_perp, CVector::from_vec(vec![c(0.0, 0.0), c(b, 0.0)]));

        let par = r.amplitudes() * c(0.5, 2.0);
        assert_eq!(decompose_velocity(&r, &par).unwrap().v_perp.norm(), 0.0);

        let r = StateVector::from_real(&[1.0, 1.0]).unwrap();
        let v = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let d = decompose_velocity(&r, &v).unwrap();
        let want_par = CVector::from_vec(vec![c(0.5, 0.0), c(0.5, 0.0)]);
        let want_perp = CVector::from_vec(vec![c(0.5, 0.0), c(-0.5, 0.0)]);
        assert!((d.v_par - want_par).norm() < 1e-15);
        assert!((d.v_perp - want_perp).norm() < 1e-15);

        assert!(decompose_velocity(&r, &CVector::zeros(3)).is_err());
    }

    #[test]
    fn great_circle_speed_is_one() {
        let h = 1e-3;
        let curve = Curve::uniform(0.0, FRAC_PI_2, 1571, circle).unwrap();
        for k in 1..curve.len() - 1 {
            let w = angular_speed(&curve, k).unwrap();
            assert!((w - 1.0).abs() < h * h, "{k}: {w}");
        }
    }

    #[test]
    fn great_circle_arc_length() {
        let curve = Curve::uniform(0.0, FRAC_PI_2, 1000, circle).unwrap();
        let len = arc_length(&curve).unwrap();
        assert!((len - FRAC_PI_2).abs() < 1e-6, "{len}");

        // odd interval count falls back to trapezoid
        let curve = Curve::uniform(0.0, FRAC_PI_2, 1001, circle).unwrap();
        assert!((arc_length(&curve).unwrap() - FRAC_PI_2).abs() < 1e-6);

        let report =
            check_estimate(&Curve::uniform(0.0, FRAC_PI_2, 1000, circle).unwrap()).unwrap();
        assert!(report.holds);
        assert!((report.lhs - FRAC_PI_2).abs() < 1e-12);
        assert!((report.rhs - report.lhs).abs() < 1e-6);
    }

    #[test]
    fn backtracking_curve_is_strict() {
        // s(t) = sin t on [0, π]: goes out to angle 1 and comes back.
        let curve = Curve::uniform(0.0, PI, 2000, |t| circle(t.sin())).unwrap();
        let report = check_estimate(&curve).unwrap();
        assert!(report.lhs < 1e-12);
        assert!((report.rhs - 2.0).abs() < 1e-4, "{}", report.rhs);
        assert!(report.holds && report.slack > 1.9);
    }

    #[test]
    fn non_uniform_grid_uses_trapezoid() {
        let params: Vec<f64> = (0..=400)
            .map(|k| (k as f64 / 400.0).powi(2) * FRAC_PI_2)
            .collect();
        let curve = Curve::sample(params, circle).unwrap();
        assert!(!curve.is_uniform());
        assert!((arc_length(&curve).unwrap() - FRAC_PI_2).abs() < 1e-4);
    }

    #[test]
    fn phase_align_examples() {
        let r1 = random_state(4, 1).unwrap();
        let r2 = r1.with_phase(1.234);
        let aligned = phase_align(&r1, &r2).unwrap();
        assert!((aligned.inner(&r1).unwrap() - c(1.0, 0.0)).norm() < 1e-12);

        let e1 = StateVector::basis(2, 0).unwrap();
        let e2 = StateVector::basis(2, 1).unwrap().with_phase(0.7);
        assert_eq!(phase_align(&e1, &e2).unwrap(), e2);

        let r2 = StateVector::from_vec(vec![c(0.0, 0.6), c(0.0, 0.8)]).unwrap();
        let aligned = phase_align(&e1, &r2).unwrap();
        let want = [c(0.6, 0.0), c(0.8, 0.0)];
        for (z, w) in aligned.as_slice().iter().zip(want) {
            assert!((z - w).norm() < 1e-15);
        }
        assert!((aligned.inner(&e1).unwrap() - c(0.6, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn geodesic_examples() {
        let e1 = StateVector::basis(2, 0).unwrap();
        let constant = geodesic(&e1, &e1.with_phase(0.3), 10).unwrap();
        assert_eq!(arc_length(&constant).unwrap(), 0.0);

        let e2 = StateVector::basis(2, 1).unwrap();
        let quarter = geodesic(&e1, &e2, 1000).unwrap();
        assert!((arc_length(&quarter).unwrap() - FRAC_PI_2).abs() < 1e-6);

        for k in 0..10 {
            let theta = 0.61 * k as f64;
            let r2 = StateVector::from_vec(vec![
                c(FRAC_1_SQRT_2, 0.0),
                C64::from_polar(FRAC_1_SQRT_2, theta),
            ])
            .unwrap();
            let g = geodesic(&e1, &r2, 1000).unwrap();
            assert!((arc_length(&g).unwrap() - FRAC_PI_4).abs() < 1e-6);
            assert!(quantum_angle(g.first(), &e1).unwrap().radians() < 1e-10);
            assert!(quantum_angle(g.last(), &r2).unwrap().radians() < 1e-10);
        }
    }

    #[test]
    fn profile_columns() {
        let curve = Curve::uniform(0.0, 1.0, 100, circle).unwrap();
        let rows = curve_profile(&curve).unwrap();
        assert_eq!(rows.len(), 101);
        let last = rows.last().unwrap();
        assert!((last.cumulative_length - 1.0).abs() < 1e-4);
        assert!((last.angle_to_start - 1.0).abs() < 1e-12);
    }
}
