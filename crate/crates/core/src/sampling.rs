//! Seeded random operators for property checks and demos.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::hilbert::C64;

fn ginibre<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// A Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal pushed back into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<C64> {
    let qr = ginibre(rng, dim).qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            col *= d / d.norm();
        }
    }
    q
}

/// A GUE-style Hermitian matrix `(G + G†)/2`, scaled by `scale`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> DMatrix<C64> {
    let g = ginibre(rng, dim);
    let mut h = (&g + g.adjoint()).scale(0.5 * scale);
    for i in 0..dim {
        h[(i, i)].im = 0.0;
    }
    h
}
