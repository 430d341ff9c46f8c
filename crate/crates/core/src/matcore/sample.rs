//! Seeded samplers. Every sampler takes the RNG explicitly; [`rng_for`]
//! derives an independent ChaCha substream per `(seed, stream)` pair.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{c, CMat, ComplexSymMatrix, RMat, RealSymMatrix};
use crate::error::{CrownError, Result};

/// Shift added to `A Aᵀ` for interior samples.
const INTERIOR_SHIFT: f64 = 1e-3;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> RMat {
    RMat::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn random_real_sym<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealSymMatrix {
    RealSymMatrix::symmetrized(gaussian_matrix(n, n, rng))
}

/// `A Aᵀ + δI` with standard Gaussian `A`.
pub fn random_interior<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealSymMatrix {
    let a = gaussian_matrix(n, n, rng);
    RealSymMatrix::symmetrized(&a * a.transpose() + RMat::identity(n, n) * INTERIOR_SHIFT)
}

/// Haar-distributed orthogonal matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMat {
    let qr = gaussian_matrix(n, n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Haar-distributed unitary matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            let mut col = q.column_mut(j);
            col *= phase;
        }
    }
    q
}

/// PSD matrix of rank exactly `p`: `Q diag(λ₁..λ_p, 0..0) Qᵀ`, `λ ∈ [0.5, 2]`.
pub fn random_psd_rank<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> RealSymMatrix {
    let q = random_orthogonal(n, rng);
    let d = DVector::from_fn(n, |i, _| {
        if i < p {
            rng.random_range(0.5..2.0)
        } else {
            0.0
        }
    });
    RealSymMatrix::symmetrized(&q * RMat::from_diagonal(&d) * q.transpose())
}

pub fn random_sym_c<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexSymMatrix {
    ComplexSymMatrix::from_parts(&random_real_sym(n, rng), &random_real_sym(n, rng))
}

/// Gaussian matrix redrawn until its smallest singular value exceeds 0.05.
pub fn random_gl<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMat {
    loop {
        let a = gaussian_matrix(n, n, rng);
        let smin = a
            .singular_values()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if smin > 0.05 {
            return a;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    InteriorW,
    BoundaryW { rank: usize },
    SymC,
    GL,
}

#[derive(Debug, Clone)]
pub enum Sample {
    RealSym(RealSymMatrix),
    ComplexSym(ComplexSymMatrix),
    General(RMat),
}

pub fn sample(kind: SampleKind, n: usize, seed: u64) -> Result<Sample> {
    if n == 0 {
        return Err(CrownError::Input("n must be at least 1".into()));
    }
    let mut rng = rng_for(seed, 0);
    Ok(match kind {
        SampleKind::InteriorW => Sample::RealSym(random_interior(n, &mut rng)),
        SampleKind::BoundaryW { rank } => {
            if rank >= n {
                return Err(CrownError::Input(format!(
                    "boundary rank {rank} must be below n = {n}"
                )));
            }
            Sample::RealSym(random_psd_rank(n, rank, &mut rng))
        }
        SampleKind::SymC => Sample::ComplexSym(random_sym_c(n, &mut rng)),
        SampleKind::GL => Sample::General(random_gl(n, &mut rng)),
    })
}
