//! Real and complex symmetric matrices, the positive definite cone `W`
//! and its boundary, plus the spectral helpers the rest of the crate uses.

mod sample;
mod takagi;

pub use sample::{
    gaussian_matrix, random_gl, random_interior, random_orthogonal, random_psd_rank,
    random_real_sym, random_sym_c, random_unitary, rng_for, sample, Sample, SampleKind,
};
pub use takagi::{takagi, Takagi};

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{CrownError, Result};

pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;

/// Default relative tolerance for cone classification.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative asymmetry accepted by the checked constructors.
pub const SYMMETRY_TOL: f64 = 1e-9;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Element of `Sym(n, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSymMatrix(RMat);

impl RealSymMatrix {
    /// Checked constructor: the input must be square, finite and symmetric
    /// up to [`SYMMETRY_TOL`]; the stored entries are exactly symmetric.
    pub fn new(m: RMat) -> Result<Self> {
        check_square(m.nrows(), m.ncols())?;
        if m.iter().any(|x| !x.is_finite()) {
            return Err(CrownError::Input("non-finite entry".into()));
        }
        let asym = (&m - m.transpose()).norm();
        if asym > SYMMETRY_TOL * (1.0 + m.norm()) {
            return Err(CrownError::Input(format!(
                "matrix is not symmetric (asymmetry {asym:e})"
            )));
        }
        Ok(Self::symmetrized(m))
    }

    /// Unchecked: averages `m` with its transpose.
    pub fn symmetrized(m: RMat) -> Self {
        let t = m.transpose();
        RealSymMatrix((m + t) * 0.5)
    }

    pub fn identity(n: usize) -> Self {
        RealSymMatrix(RMat::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        RealSymMatrix(RMat::zeros(n, n))
    }

    pub fn from_diag(d: &[f64]) -> Self {
        RealSymMatrix(RMat::from_diagonal(&nalgebra::DVector::from_column_slice(
            d,
        )))
    }

    pub fn scaled(&self, s: f64) -> Self {
        RealSymMatrix(&self.0 * s)
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &RMat {
        &self.0
    }

    pub fn into_inner(self) -> RMat {
        self.0
    }

    /// Eigenvalues in descending order with matching eigenvector columns.
    /// Each eigenvector is signed so its largest-magnitude entry is positive.
    pub fn eigen(&self) -> (Vec<f64>, RMat) {
        let n = self.n();
        let eig = SymmetricEigen::new(self.0.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut vectors = RMat::zeros(n, n);
        for (j, &k) in order.iter().enumerate() {
            let mut col = eig.eigenvectors.column(k).into_owned();
            let lead = col
                .iter()
                .copied()
                .fold(0.0_f64, |m, x| if x.abs() > m.abs() { x } else { m });
            if lead < 0.0 {
                col.neg_mut();
            }
            vectors.set_column(j, &col);
        }
        (values, vectors)
    }

    pub fn spectral_norm(&self) -> f64 {
        self.eigen().0.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
    }

    /// `a S aᵀ`.
    pub fn congruence(&self, a: &RMat) -> RealSymMatrix {
        RealSymMatrix::symmetrized(a * &self.0 * a.transpose())
    }

    pub fn inverse(&self) -> Result<RealSymMatrix> {
        self.0
            .clone()
            .try_inverse()
            .map(RealSymMatrix::symmetrized)
            .ok_or_else(|| CrownError::Domain("singular symmetric matrix".into()))
    }

    /// `s · S` as a complex symmetric matrix.
    pub fn times_complex(&self, s: Complex64) -> ComplexSymMatrix {
        ComplexSymMatrix(self.0.map(|x| s * x))
    }

    /// Exact-symmetry distance from another matrix in Frobenius norm.
    pub fn dist(&self, other: &RealSymMatrix) -> f64 {
        (&self.0 - &other.0).norm()
    }
}

/// Element of `Sym(n, C)`: complex symmetric, not Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSymMatrix(CMat);

impl ComplexSymMatrix {
    pub fn new(m: CMat) -> Result<Self> {
        check_square(m.nrows(), m.ncols())?;
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CrownError::Input("non-finite entry".into()));
        }
        let asym = (&m - m.transpose()).norm();
        if asym > SYMMETRY_TOL * (1.0 + m.norm()) {
            return Err(CrownError::Input(format!(
                "matrix is not symmetric (asymmetry {asym:e})"
            )));
        }
        Ok(Self::symmetrized(m))
    }

    pub fn symmetrized(m: CMat) -> Self {
        let t = m.transpose();
        ComplexSymMatrix((m + t) * c(0.5, 0.0))
    }

    pub fn from_parts(re: &RealSymMatrix, im: &RealSymMatrix) -> Self {
        ComplexSymMatrix(re.0.zip_map(&im.0, c))
    }

    /// `s · I_n`.
    pub fn scalar(n: usize, s: Complex64) -> Self {
        ComplexSymMatrix(CMat::identity(n, n) * s)
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_inner(self) -> CMat {
        self.0
    }

    pub fn re(&self) -> RealSymMatrix {
        RealSymMatrix::symmetrized(self.0.map(|z| z.re))
    }

    pub fn im(&self) -> RealSymMatrix {
        RealSymMatrix::symmetrized(self.0.map(|z| z.im))
    }

    pub fn dist(&self, other: &ComplexSymMatrix) -> f64 {
        (&self.0 - &other.0).norm()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }
}

fn check_square(r: usize, c: usize) -> Result<()> {
    if r == 0 || r != c {
        return Err(CrownError::Input(format!(
            "expected a non-empty square matrix, got {r}x{c}"
        )));
    }
    Ok(())
}

/// Position of a symmetric matrix relative to the cone `W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ConeLabel {
    InteriorW,
    BoundaryW,
    Outside,
}

/// Eigenvalue threshold for `S`: `tol · (1 + ‖S‖₂)`.
pub fn cone_threshold(s: &RealSymMatrix, tol: f64) -> f64 {
    tol * (1.0 + s.spectral_norm())
}

pub fn classify_cone(s: &RealSymMatrix, tol: f64) -> ConeLabel {
    let (values, _) = s.eigen();
    let thr = tol * (1.0 + values.iter().fold(0.0_f64, |m, x| m.max(x.abs())));
    if values.iter().all(|&l| l > thr) {
        ConeLabel::InteriorW
    } else if values.iter().all(|&l| l >= -thr) {
        ConeLabel::BoundaryW
    } else {
        ConeLabel::Outside
    }
}

/// Number of eigenvalues above the classification threshold.
pub fn psd_rank(s: &RealSymMatrix, tol: f64) -> usize {
    let thr = cone_threshold(s, tol);
    s.eigen().0.iter().filter(|&&l| l > thr).count()
}

/// The unique positive definite square root.
pub fn sqrt_pd(s: &RealSymMatrix, tol: f64) -> Result<RealSymMatrix> {
    if classify_cone(s, tol) != ConeLabel::InteriorW {
        return Err(CrownError::Domain(
            "sqrt_pd requires a positive definite matrix".into(),
        ));
    }
    let (values, v) = s.eigen();
    let d = RMat::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|l| l.sqrt()),
    ));
    Ok(RealSymMatrix::symmetrized(&v * d * v.transpose()))
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect()
}

pub fn sigma_min(m: &CMat) -> f64 {
    singular_values(m).into_iter().fold(f64::INFINITY, f64::min)
}

pub fn spectral_norm_c(m: &CMat) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

pub fn complexify(m: &RMat) -> CMat {
    m.map(|x| c(x, 0.0))
}

/// Solves `X · B = A` for `X`, i.e. `A B⁻¹`, refusing when `σ_min(B) ≤ tol`.
pub(crate) fn right_divide(a: &CMat, b: &CMat, tol: f64) -> Result<CMat> {
    let smin = sigma_min(b);
    if !(smin > tol) {
        return Err(CrownError::ChartEscape { sigma_min: smin });
    }
    let lu = b.transpose().lu();
    lu.solve(&a.transpose())
        .map(|x| x.transpose())
        .ok_or(CrownError::ChartEscape { sigma_min: smin })
}
