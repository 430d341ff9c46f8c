//! The Lagrangian Grassmannian of `C^{2n}`.
//!
//! A [`Lagrangian`] is stored as an orthonormal `2n × n` frame; all
//! comparisons are between column spans (largest principal angle), never
//! between frames.

use nalgebra::SVD;

use crate::error::{CrownError, Result};
use crate::matcore::{right_divide, sigma_min, spectral_norm_c, CMat, ComplexSymMatrix, I};
use crate::symplectic::{j_matrix, SymplecticElement};

/// Isotropy residual accepted by [`Lagrangian::from_frame`].
pub const ISOTROPY_TOL: f64 = 1e-8;

/// Default band for boundary detection in the bounded charts.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct Lagrangian {
    n: usize,
    frame: CMat,
}

impl Lagrangian {
    /// Orthonormalizes `f` and certifies full rank and isotropy.
    pub fn from_frame(f: CMat) -> Result<Self> {
        let (rows, n) = f.shape();
        if n == 0 || rows != 2 * n {
            return Err(CrownError::Input(format!(
                "a Lagrangian frame must be 2n x n, got {rows}x{n}"
            )));
        }
        if f.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CrownError::Input("non-finite entry".into()));
        }
        let svd = SVD::new(f, true, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if !(smax > 0.0) || smin <= 1e-12 * smax {
            return Err(CrownError::Domain(format!(
                "frame is rank deficient (σ_min/σ_max = {:e})",
                smin / smax
            )));
        }
        let l = Lagrangian {
            n,
            frame: svd.u.expect("requested u"),
        };
        let iso = l.isotropy_residual();
        if iso > ISOTROPY_TOL {
            return Err(CrownError::Domain(format!(
                "span is not isotropic (residual {iso:e})"
            )));
        }
        Ok(l)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frame(&self) -> &CMat {
        &self.frame
    }

    /// `‖Fᵀ J F‖_F` for the orthonormal frame `F`.
    pub fn isotropy_residual(&self) -> f64 {
        (self.frame.transpose() * j_matrix(self.n) * &self.frame).norm()
    }

    fn top(&self) -> CMat {
        self.frame.rows(0, self.n).into_owned()
    }

    fn bottom(&self) -> CMat {
        self.frame.rows(self.n, self.n).into_owned()
    }

    /// Sine of the largest principal angle between the two spans.
    pub fn distance(&self, other: &Lagrangian) -> f64 {
        let proj = &self.frame * (self.frame.adjoint() * &other.frame);
        spectral_norm_c(&(&other.frame - proj))
    }

    pub fn approx_eq(&self, other: &Lagrangian, tol: f64) -> bool {
        self.n == other.n && self.distance(other) <= tol
    }

    /// `L₀ = {(iv, v)}`, the image of `x₀ = iI`.
    pub fn base(n: usize) -> Self {
        graph(&ComplexSymMatrix::scalar(n, I))
    }

    /// `L̄₀ = {(-iv, v)}`.
    pub fn base_conj(n: usize) -> Self {
        graph(&ComplexSymMatrix::scalar(n, -I))
    }

    /// `{(v, 0)}`, outside the affine chart.
    pub fn infinity(n: usize) -> Self {
        let mut f = CMat::zeros(2 * n, n);
        f.view_mut((0, 0), (n, n)).fill_with_identity();
        Lagrangian { n, frame: f }
    }

    fn stack(top: &CMat, bottom: &CMat) -> CMat {
        let n = top.ncols();
        let mut f = CMat::zeros(2 * n, n);
        f.view_mut((0, 0), (n, n)).copy_from(top);
        f.view_mut((n, 0), (n, n)).copy_from(bottom);
        f
    }
}

/// `L_T = {(Tv, v)}`.
pub fn graph(t: &ComplexSymMatrix) -> Lagrangian {
    let n = t.n();
    Lagrangian::from_frame(Lagrangian::stack(t.as_matrix(), &CMat::identity(n, n)))
        .expect("graph of a symmetric matrix is Lagrangian")
}

#[derive(Debug, Clone)]
pub enum Chart {
    Point(ComplexSymMatrix),
    /// Lower frame block is numerically singular.
    Escape {
        sigma_min: f64,
    },
}

impl Chart {
    pub fn point(self) -> Option<ComplexSymMatrix> {
        match self {
            Chart::Point(t) => Some(t),
            Chart::Escape { .. } => None,
        }
    }
}

/// Inverse of [`graph`]: `T = F₁ F₂⁻¹` when `σ_min(F₂) > tol`.
pub fn chart(l: &Lagrangian, tol: f64) -> Chart {
    match right_divide(&l.top(), &l.bottom(), tol) {
        Ok(t) => Chart::Point(ComplexSymMatrix::symmetrized(t)),
        Err(_) => Chart::Escape {
            sigma_min: sigma_min(&l.bottom()),
        },
    }
}

/// `g · L = {(av + bw, cv + dw) | (v, w) ∈ L}`.
pub fn act(g: &SymplecticElement, l: &Lagrangian) -> Result<Lagrangian> {
    if g.n() != l.n() {
        return Err(CrownError::Input(format!(
            "dimension mismatch: group n = {}, Lagrangian n = {}",
            g.n(),
            l.n()
        )));
    }
    Lagrangian::from_frame(g.matrix() * l.frame())
}

/// `s₀(L) = {(-w, v) | (v, w) ∈ L}`.
pub fn s0(l: &Lagrangian) -> Lagrangian {
    let f = Lagrangian::stack(&(-l.bottom()), &l.top());
    Lagrangian { n: l.n, frame: f }
}

/// `-L = {(-v, w) | (v, w) ∈ L}`.
pub fn neg(l: &Lagrangian) -> Lagrangian {
    let f = Lagrangian::stack(&(-l.top()), &l.bottom());
    Lagrangian { n: l.n, frame: f }
}

/// Smallest singular value of `[F₁ | F₂]` and whether it exceeds `tol`.
pub fn transversal(l1: &Lagrangian, l2: &Lagrangian, tol: f64) -> (bool, f64) {
    assert_eq!(l1.n, l2.n, "dimension mismatch");
    let mut m = CMat::zeros(2 * l1.n, 2 * l1.n);
    m.view_mut((0, 0), (2 * l1.n, l1.n)).copy_from(&l1.frame);
    m.view_mut((0, l1.n), (2 * l1.n, l1.n)).copy_from(&l2.frame);
    let s = sigma_min(&m);
    (s > tol, s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Side {
    X,
    Xbar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ClosureLabel {
    Interior,
    Boundary,
    Outside,
}

/// Bounded-chart coordinate of `L`.
///
/// Side `X`: the Cayley map `z ↦ (z − iI)(z + iI)⁻¹`, i.e. the block element
/// `(I −iI; I iI)` applied to the frame. Side `X̄`: `z ↦ (z + iI)(z − iI)⁻¹`.
/// `None` when the denominator block is singular (never on `cl(X)` resp. `cl(X̄)`).
pub fn cayley_chart(l: &Lagrangian, side: Side) -> Option<ComplexSymMatrix> {
    let (top, bottom) = (l.top(), l.bottom());
    let ib = &bottom * I;
    let (num, den) = match side {
        Side::X => (&top - &ib, &top + &ib),
        Side::Xbar => (&top + &ib, &top - &ib),
    };
    right_divide(&num, &den, 1e-14)
        .ok()
        .map(ComplexSymMatrix::symmetrized)
}

/// Inverse Cayley map: the Lagrangian whose bounded coordinate on `side` is `z`.
pub fn from_cayley(z: &ComplexSymMatrix, side: Side) -> Result<Lagrangian> {
    // side X: F₁ − iF₂ = Z, F₁ + iF₂ = I, so F ∝ (Z + I; −i(I − Z))
    let n = z.n();
    let id = CMat::identity(n, n);
    let zm = z.as_matrix();
    let top = zm + &id;
    let bottom = match side {
        Side::X => (&id - zm) * (-I),
        Side::Xbar => (&id - zm) * I,
    };
    Lagrangian::from_frame(Lagrangian::stack(&top, &bottom))
}

/// Closure classification of `L` relative to `cl(X)` or `cl(X̄)` in the bounded chart.
pub fn classify_closure(l: &Lagrangian, side: Side, tol: f64) -> ClosureLabel {
    let Some(z) = cayley_chart(l, side) else {
        return ClosureLabel::Outside;
    };
    let norm = spectral_norm_c(z.as_matrix());
    if norm < 1.0 - tol {
        ClosureLabel::Interior
    } else if (norm - 1.0).abs() <= tol {
        ClosureLabel::Boundary
    } else {
        ClosureLabel::Outside
    }
}
