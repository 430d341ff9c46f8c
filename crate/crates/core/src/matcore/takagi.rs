use nalgebra::DVector;
use num_complex::Complex64;

use super::{c, CMat, ComplexSymMatrix, RMat, RealSymMatrix};
use crate::error::{CrownError, Result};

/// `Z = U diag(σ) Uᵀ` with `U` unitary and `σ` sorted descending.
#[derive(Debug, Clone)]
pub struct Takagi {
    pub u: CMat,
    pub sigma: Vec<f64>,
    /// `‖U Σ Uᵀ − Z‖_F`.
    pub residual: f64,
}

impl Takagi {
    pub fn reconstruct(&self) -> CMat {
        let d = CMat::from_diagonal(&DVector::from_iterator(
            self.sigma.len(),
            self.sigma.iter().map(|&s| c(s, 0.0)),
        ));
        &self.u * d * self.u.transpose()
    }
}

/// Takagi factorization of a complex symmetric matrix.
///
/// With `Z = B + iC` and `u = x + iy`, the Takagi equation `Z ū = σ u` is the
/// real symmetric eigenproblem `[[B, C], [C, -B]] [x; y] = σ [x; y]`. Its
/// spectrum is `±σ`, and eigenvectors for positive eigenvalues are
/// orthonormal as complex vectors, including inside repeated clusters. The
/// numerically zero part is replaced by an orthonormal completion, which
/// spans the conjugate kernel of `Z`.
pub fn takagi(z: &ComplexSymMatrix, tol: f64) -> Result<Takagi> {
    let n = z.n();
    let zm = z.as_matrix();
    let b = zm.map(|v| v.re);
    let cm = zm.map(|v| v.im);
    let mut big = RMat::zeros(2 * n, 2 * n);
    big.view_mut((0, 0), (n, n)).copy_from(&b);
    big.view_mut((0, n), (n, n)).copy_from(&cm);
    big.view_mut((n, 0), (n, n)).copy_from(&cm);
    big.view_mut((n, n), (n, n)).copy_from(&(-&b));
    let (values, vectors) = RealSymMatrix::symmetrized(big).eigen();

    let scale = values.first().copied().unwrap_or(0.0).max(0.0);
    let zero_thr = 1e-13 * (1.0 + scale) * (n as f64);

    let mut cols: Vec<DVector<Complex64>> = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &s) in values.iter().take(n).enumerate() {
        if s <= zero_thr {
            break;
        }
        let col = DVector::from_fn(n, |i, _| c(vectors[(i, k)], vectors[(i + n, k)]));
        cols.push(col);
        sigma.push(s);
    }
    complete_orthonormal(&mut cols, n);
    sigma.resize(n, 0.0);

    let mut u = CMat::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        let mut col = col.clone();
        let lead = col.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if let Some(first) = col.iter().find(|v| v.norm() > 1e-8 * lead).copied() {
            if first.re < 0.0 || (first.re == 0.0 && first.im < 0.0) {
                col.neg_mut();
            }
        }
        u.set_column(j, &col);
    }

    let mut out = Takagi {
        u,
        sigma,
        residual: 0.0,
    };
    out.residual = (out.reconstruct() - zm).norm();
    let unitarity = (out.u.adjoint() * &out.u - CMat::identity(n, n)).norm();
    if out.residual > tol * (1.0 + zm.norm()) || unitarity > tol.max(1e-12) * (n as f64) {
        return Err(CrownError::Numeric {
            what: "takagi".into(),
            residual: out.residual.max(unitarity),
        });
    }
    Ok(out)
}

/// Extends orthonormal `cols` to a basis of `C^n` by Gram-Schmidt on unit vectors.
fn complete_orthonormal(cols: &mut Vec<DVector<Complex64>>, n: usize) {
    for k in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = DVector::from_fn(n, |i, _| if i == k { c(1.0, 0.0) } else { c(0.0, 0.0) });
        for _ in 0..2 {
            for q in cols.iter() {
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            cols.push(v / c(norm, 0.0));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::I;

    fn sym(rows: &[&[Complex64]]) -> ComplexSymMatrix {
        let n = rows.len();
        ComplexSymMatrix::new(CMat::from_fn(n, n, |i, j| rows[i][j])).unwrap()
    }

    #[test]
    fn zero_matrix() {
        let t = takagi(&ComplexSymMatrix::scalar(3, c(0.0, 0.0)), 1e-10).unwrap();
        assert_eq!(t.sigma, vec![0.0; 3]);
        assert!((&t.u - CMat::identity(3, 3)).norm() < 1e-15);
    }

    #[test]
    fn antidiagonal_ones() {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let z = sym(&[&[zero, one], &[one, zero]]);
        let t = takagi(&z, 1e-12).unwrap();
        assert!((t.sigma[0] - 1.0).abs() < 1e-14 && (t.sigma[1] - 1.0).abs() < 1e-14);
        assert!((t.u.clone() * t.u.transpose() - z.as_matrix()).norm() < 1e-12);
        assert!((t.u.adjoint() * &t.u - CMat::identity(2, 2)).norm() < 1e-12);

        // the hand-computed factor U = (1/√2)[[1, i], [1, -i]] also satisfies U Uᵀ = Z
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = CMat::from_row_slice(2, 2, &[c(h, 0.0), c(0.0, h), c(h, 0.0), c(0.0, -h)]);
        assert!((u.clone() * u.transpose() - z.as_matrix()).norm() < 1e-15);
    }

    #[test]
    fn scalar_two_i() {
        let t = takagi(&ComplexSymMatrix::scalar(1, 2.0 * I), 1e-12).unwrap();
        assert!((t.sigma[0] - 2.0).abs() < 1e-14);
        let expected = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert!((t.u[(0, 0)] - expected).norm() < 1e-14);
        // U² · 2 = 2i
        assert!((t.u[(0, 0)] * t.u[(0, 0)] * 2.0 - 2.0 * I).norm() < 1e-14);
    }

    #[test]
    fn repeated_values_and_rank_deficiency() {
        // Z = W diag(2,2,0) Wᵀ for a fixed unitary W
        let w = crate::matcore::random_unitary(3, &mut crate::matcore::rng_for(5, 0));
        let d = CMat::from_diagonal(&DVector::from_vec(vec![
            c(2.0, 0.0),
            c(2.0, 0.0),
            c(0.0, 0.0),
        ]));
        let z = ComplexSymMatrix::symmetrized(&w * d * w.transpose());
        let t = takagi(&z, 1e-10).unwrap();
        assert!((t.sigma[0] - 2.0).abs() < 1e-12 && (t.sigma[1] - 2.0).abs() < 1e-12);
        assert!(t.sigma[2].abs() < 1e-12);
        assert!(t.residual < 1e-12);
    }
}
