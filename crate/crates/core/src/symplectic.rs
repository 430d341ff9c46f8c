//! `Sp(n, R)` and `Sp(n, C)` as explicit `2n × 2n` matrices, the embedded
//! subgroups `K = U(n)` and `H = GL(n, R)`, the involution `τ`, and the
//! fractional-linear action on the affine chart `Sym(n, C)`.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{CrownError, Result};
use crate::matcore::{
    c, complexify, random_orthogonal, random_real_sym, random_unitary, right_divide,
    spectral_norm_c, sqrt_pd, CMat, ComplexSymMatrix, RMat, RealSymMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Real,
    Complex,
}

/// A certified symplectic matrix `g = (a b; c d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticElement {
    n: usize,
    kind: Kind,
    m: CMat,
    residual: f64,
}

/// `J = (0 I; -I 0)`.
pub fn j_matrix(n: usize) -> CMat {
    let mut j = CMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = c(1.0, 0.0);
        j[(n + k, k)] = c(-1.0, 0.0);
    }
    j
}

/// `‖gᵀ J g − J‖_F / (1 + ‖g‖_F²)`.
pub fn symplectic_residual(m: &CMat) -> f64 {
    let n = m.nrows() / 2;
    let j = j_matrix(n);
    let raw = (m.transpose() * &j * m - &j).norm();
    raw / (1.0 + m.norm_squared())
}

impl SymplecticElement {
    /// Certifies `m` as complex symplectic; real when every imaginary part is zero.
    pub fn validate(m: CMat, tol: f64) -> Result<Self> {
        let (r, cols) = m.shape();
        if r != cols || r == 0 || r % 2 != 0 {
            return Err(CrownError::Input(format!(
                "expected a 2n x 2n matrix, got {r}x{cols}"
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CrownError::Input("non-finite entry".into()));
        }
        let residual = symplectic_residual(&m);
        if residual > tol {
            return Err(CrownError::Validation { residual, tol });
        }
        let kind = if m.iter().all(|z| z.im == 0.0) {
            Kind::Real
        } else {
            Kind::Complex
        };
        Ok(SymplecticElement {
            n: r / 2,
            kind,
            m,
            residual,
        })
    }

    pub fn validate_real(m: &RMat, tol: f64) -> Result<Self> {
        Self::validate(complexify(m), tol)
    }

    /// Trusted constructor for elements built from exact block formulas.
    fn from_blocks_exact(m: CMat) -> Self {
        let residual = symplectic_residual(&m);
        let kind = if m.iter().all(|z| z.im == 0.0) {
            Kind::Real
        } else {
            Kind::Complex
        };
        SymplecticElement {
            n: m.nrows() / 2,
            kind,
            m,
            residual,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_blocks_exact(CMat::identity(2 * n, 2 * n))
    }

    pub fn from_blocks(a: &CMat, b: &CMat, cc: &CMat, d: &CMat, tol: f64) -> Result<Self> {
        let n = a.nrows();
        let mut m = CMat::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(a);
        m.view_mut((0, n), (n, n)).copy_from(b);
        m.view_mut((n, 0), (n, n)).copy_from(cc);
        m.view_mut((n, n), (n, n)).copy_from(d);
        Self::validate(m, tol)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    /// Normalized residual recorded at certification.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn a(&self) -> CMat {
        self.m.view((0, 0), (self.n, self.n)).into_owned()
    }

    pub fn b(&self) -> CMat {
        self.m.view((0, self.n), (self.n, self.n)).into_owned()
    }

    pub fn c(&self) -> CMat {
        self.m.view((self.n, 0), (self.n, self.n)).into_owned()
    }

    pub fn d(&self) -> CMat {
        self.m.view((self.n, self.n), (self.n, self.n)).into_owned()
    }

    /// Real part of a real element.
    pub fn real_matrix(&self) -> Option<RMat> {
        (self.kind == Kind::Real).then(|| self.m.map(|z| z.re))
    }

    /// Product `self · other`, re-certified.
    pub fn compose(&self, other: &SymplecticElement, tol: f64) -> Result<Self> {
        if self.n != other.n {
            return Err(CrownError::Input("dimension mismatch".into()));
        }
        Self::validate(&self.m * &other.m, tol)
    }

    /// Uncertified product `self · other`; the residual is recorded, not checked.
    pub fn product(&self, other: &SymplecticElement) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self::from_blocks_exact(&self.m * &other.m)
    }

    /// `g⁻¹ = -J gᵀ J = (dᵀ -bᵀ; -cᵀ aᵀ)`.
    pub fn inverse(&self) -> Self {
        let n = self.n;
        let mut m = CMat::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.d().transpose());
        m.view_mut((0, n), (n, n))
            .copy_from(&(-self.b().transpose()));
        m.view_mut((n, 0), (n, n))
            .copy_from(&(-self.c().transpose()));
        m.view_mut((n, n), (n, n)).copy_from(&self.a().transpose());
        Self::from_blocks_exact(m)
    }

    pub fn neg(&self) -> Self {
        Self::from_blocks_exact(-&self.m)
    }

    pub fn dist(&self, other: &SymplecticElement) -> f64 {
        (&self.m - &other.m).norm()
    }
}

/// `u + iv ↦ (u v; -v u)`.
pub fn embed_unitary(u: &RMat, v: &RMat, tol: f64) -> Result<SymplecticElement> {
    let n = u.nrows();
    if u.shape() != (n, n) || v.shape() != (n, n) || n == 0 {
        return Err(CrownError::Input(
            "u and v must be square of equal size".into(),
        ));
    }
    let w = u.zip_map(v, c);
    let defect = (w.adjoint() * &w - CMat::identity(n, n)).norm();
    if defect > tol * (n as f64).sqrt().max(1.0) {
        return Err(CrownError::Domain(format!(
            "u + iv is not unitary (defect {defect:e})"
        )));
    }
    let mut m = RMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(u);
    m.view_mut((0, n), (n, n)).copy_from(v);
    m.view_mut((n, 0), (n, n)).copy_from(&(-v));
    m.view_mut((n, n), (n, n)).copy_from(u);
    Ok(SymplecticElement::from_blocks_exact(complexify(&m)))
}

/// [`embed_unitary`] from the complex unitary `w = u + iv`.
pub fn embed_unitary_c(w: &CMat, tol: f64) -> Result<SymplecticElement> {
    embed_unitary(&w.map(|z| z.re), &w.map(|z| z.im), tol)
}

/// `a ↦ (a 0; 0 a⁻ᵀ)`.
pub fn embed_structure(a: &RMat, tol: f64) -> Result<SymplecticElement> {
    let n = a.nrows();
    if a.ncols() != n || n == 0 {
        return Err(CrownError::Input("a must be square".into()));
    }
    let det = a.determinant();
    if !(det.abs() > tol) {
        return Err(CrownError::Domain(format!(
            "structure element is singular (det {det:e})"
        )));
    }
    let inv_t = a
        .clone()
        .try_inverse()
        .ok_or_else(|| CrownError::Domain("singular a".into()))?
        .transpose();
    let mut m = RMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((n, n), (n, n)).copy_from(&inv_t);
    Ok(SymplecticElement::from_blocks_exact(complexify(&m)))
}

/// `(I b; 0 I)`, acting as `z ↦ z + b`.
pub fn translation(b: &RealSymMatrix) -> SymplecticElement {
    let n = b.n();
    let mut m = RMat::identity(2 * n, 2 * n);
    m.view_mut((0, n), (n, n)).copy_from(b.as_matrix());
    SymplecticElement::from_blocks_exact(complexify(&m))
}

/// `(I 0; c I)`.
pub fn lower_translation(cc: &RealSymMatrix) -> SymplecticElement {
    let n = cc.n();
    let mut m = RMat::identity(2 * n, 2 * n);
    m.view_mut((n, 0), (n, n)).copy_from(cc.as_matrix());
    SymplecticElement::from_blocks_exact(complexify(&m))
}

/// `g · z = (az + b)(cz + d)⁻¹`.
///
/// Fails with [`CrownError::ChartEscape`] when `σ_min(cz + d) ≤ tol · (1 + ‖cz + d‖₂)`.
pub fn moebius(g: &SymplecticElement, z: &ComplexSymMatrix, tol: f64) -> Result<ComplexSymMatrix> {
    if g.n() != z.n() {
        return Err(CrownError::Input("dimension mismatch".into()));
    }
    let zm = z.as_matrix();
    let num = g.a() * zm + g.b();
    let den = g.c() * zm + g.d();
    let scale = 1.0 + spectral_norm_c(&den);
    let x = right_divide(&num, &den, tol * scale)?;
    Ok(ComplexSymMatrix::symmetrized(x))
}

/// `τ(g) = I_{n,n} g I_{n,n} = (a -b; -c d)`.
pub fn tau(g: &SymplecticElement) -> SymplecticElement {
    let n = g.n();
    let mut m = g.m.clone();
    for i in 0..2 * n {
        for j in 0..2 * n {
            if (i < n) != (j < n) {
                m[(i, j)] = -m[(i, j)];
            }
        }
    }
    SymplecticElement::from_blocks_exact(m)
}

/// Returns the upper block `a` when `g` lies in the embedded `H` within `tol`
/// (relative to `1 + ‖g‖_F`).
pub fn structure_part(g: &SymplecticElement, tol: f64) -> Option<RMat> {
    let gm = g.real_matrix()?;
    let n = g.n();
    let scale = tol * (1.0 + gm.norm());
    let b = gm.view((0, n), (n, n)).norm();
    let cc = gm.view((n, 0), (n, n)).norm();
    if b > scale || cc > scale {
        return None;
    }
    let a = gm.view((0, 0), (n, n)).into_owned();
    let d = gm.view((n, n), (n, n)).into_owned();
    // d = a⁻ᵀ  ⇔  aᵀ d = I
    if (a.transpose() * &d - RMat::identity(n, n)).norm() > scale {
        return None;
    }
    Some(a)
}

/// `g` with `g · iI = z`: `translation(Re z) ∘ embed_structure(√Im z)`.
pub fn transitive_to_basepoint(z: &ComplexSymMatrix, tol: f64) -> Result<SymplecticElement> {
    let root = sqrt_pd(&z.im(), tol)
        .map_err(|_| CrownError::Domain("Im z is not positive definite".into()))?;
    let h = embed_structure(root.as_matrix(), 0.0)?;
    Ok(SymplecticElement::from_blocks_exact(
        translation(&z.re()).matrix() * h.matrix(),
    ))
}

/// `g` with `g · (-iI) = w`, for `Im w` negative definite.
pub fn transitive_to_conj_basepoint(w: &ComplexSymMatrix, tol: f64) -> Result<SymplecticElement> {
    let root = sqrt_pd(&w.im().scaled(-1.0), tol)
        .map_err(|_| CrownError::Domain("-Im w is not positive definite".into()))?;
    let h = embed_structure(root.as_matrix(), 0.0)?;
    Ok(SymplecticElement::from_blocks_exact(
        translation(&w.re()).matrix() * h.matrix(),
    ))
}

/// Random real symplectic element of moderate norm:
/// `translation(b) · embed_structure(a) · k · lower_translation(c)`.
pub fn random_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SymplecticElement {
    let b = random_real_sym(n, rng).scaled(0.5);
    let cc = random_real_sym(n, rng).scaled(0.3);
    let q = random_orthogonal(n, rng);
    let scales = DVector::from_fn(n, |_, _| {
        let x: f64 = rng.sample(StandardNormal);
        (0.3 * x).exp()
    });
    let a = q * RMat::from_diagonal(&scales);
    let k = embed_unitary_c(&random_unitary(n, rng), 1e-10).expect("sampled unitary");
    let h = embed_structure(&a, 0.0).expect("invertible");
    let m = translation(&b).matrix() * h.matrix() * k.matrix() * lower_translation(&cc).matrix();
    SymplecticElement::from_blocks_exact(m)
}

/// Random element of the embedded `K`.
pub fn random_k<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SymplecticElement {
    embed_unitary_c(&random_unitary(n, rng), 1e-10).expect("sampled unitary")
}

/// The `P⁺` element `1 + (u -iu; -iu -u)`, or `P⁻` = `1 + (u iu; iu -u)` when `plus` is false.
pub fn siegel_unipotent(u: &ComplexSymMatrix, plus: bool, tol: f64) -> Result<SymplecticElement> {
    let n = u.n();
    let um = u.as_matrix();
    let s = if plus { c(0.0, -1.0) } else { c(0.0, 1.0) };
    let id = CMat::identity(n, n);
    SymplecticElement::from_blocks(&(&id + um), &(um * s), &(um * s), &(&id - um), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{rng_for, I};
    use std::f64::consts::PI;

    fn scalar(z: num_complex::Complex64) -> ComplexSymMatrix {
        ComplexSymMatrix::scalar(1, z)
    }

    #[test]
    fn validate_examples() {
        let id = SymplecticElement::validate(CMat::identity(4, 4), 1e-12).unwrap();
        assert_eq!(id.residual(), 0.0);
        assert_eq!(id.kind(), Kind::Real);
        let j = SymplecticElement::validate(j_matrix(2), 1e-12).unwrap();
        assert_eq!(j.residual(), 0.0);

        // gᵀJg for diag(2,1,2,1) is diag-scaled J with factor 4 on the first plane:
        // residual matrix has entries ±3 at (0,2),(2,0), so ‖·‖_F = 3√2, ‖g‖_F² = 10
        let g = RMat::from_diagonal(&DVector::from_vec(vec![2.0, 1.0, 2.0, 1.0]));
        match SymplecticElement::validate_real(&g, 1e-9) {
            Err(CrownError::Validation { residual, .. }) => {
                assert!((residual - 3.0 * 2f64.sqrt() / 11.0).abs() < 1e-14);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            SymplecticElement::validate(CMat::identity(3, 3), 1e-9),
            Err(CrownError::Input(_))
        ));
    }

    #[test]
    fn embed_unitary_examples() {
        let id = embed_unitary(&RMat::identity(2, 2), &RMat::zeros(2, 2), 1e-12).unwrap();
        assert_eq!(id, SymplecticElement::identity(2));

        let t = PI / 3.0;
        let k = embed_unitary(
            &RMat::from_element(1, 1, t.cos()),
            &RMat::from_element(1, 1, t.sin()),
            1e-12,
        )
        .unwrap();
        let expected = RMat::from_row_slice(2, 2, &[t.cos(), t.sin(), -t.sin(), t.cos()]);
        assert!((k.real_matrix().unwrap() - expected).norm() < 1e-15);
        let z = moebius(&k, &scalar(I), 1e-12).unwrap();
        assert!((z.as_matrix()[(0, 0)] - I).norm() < 1e-14);

        // diag(i, 1) unpacks to u = diag(0,1), v = diag(1,0)
        let w = CMat::from_diagonal(&DVector::from_vec(vec![I, c(1.0, 0.0)]));
        let k = embed_unitary_c(&w, 1e-12).unwrap();
        assert_eq!(
            k.a().map(|z| z.re),
            RMat::from_diagonal(&DVector::from_vec(vec![0.0, 1.0]))
        );
        assert_eq!(
            k.b().map(|z| z.re),
            RMat::from_diagonal(&DVector::from_vec(vec![1.0, 0.0]))
        );

        let bad = embed_unitary(&RMat::from_element(1, 1, 2.0), &RMat::zeros(1, 1), 1e-9);
        assert!(matches!(bad, Err(CrownError::Domain(_))));
    }

    #[test]
    fn embed_structure_examples() {
        assert_eq!(
            embed_structure(&RMat::identity(2, 2), 1e-12).unwrap(),
            SymplecticElement::identity(2)
        );
        let g = embed_structure(&RMat::from_element(1, 1, 2.0), 1e-12).unwrap();
        assert_eq!(g.d()[(0, 0)], c(0.5, 0.0));
        let z = moebius(&g, &scalar(I), 1e-12).unwrap();
        assert!((z.as_matrix()[(0, 0)] - 4.0 * I).norm() < 1e-14);

        let g = embed_structure(
            &RMat::from_diagonal(&DVector::from_vec(vec![1.0, 3.0])),
            1e-12,
        )
        .unwrap();
        let z = moebius(&g, &ComplexSymMatrix::scalar(2, I), 1e-12).unwrap();
        let expected = CMat::from_diagonal(&DVector::from_vec(vec![I, 9.0 * I]));
        assert!((z.as_matrix() - expected).norm() < 1e-14);

        assert!(matches!(
            embed_structure(&RMat::zeros(2, 2), 1e-12),
            Err(CrownError::Domain(_))
        ));
    }

    #[test]
    fn translation_examples() {
        assert_eq!(
            translation(&RealSymMatrix::zeros(2)),
            SymplecticElement::identity(2)
        );
        let z = moebius(
            &translation(&RealSymMatrix::from_diag(&[1.0])),
            &scalar(I),
            1e-12,
        )
        .unwrap();
        assert!((z.as_matrix()[(0, 0)] - c(1.0, 1.0)).norm() < 1e-15);
        let b = RealSymMatrix::new(RMat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        let z = moebius(&translation(&b), &ComplexSymMatrix::scalar(2, I), 1e-12).unwrap();
        let expected = CMat::identity(2, 2) * I + complexify(b.as_matrix());
        assert!((z.as_matrix() - expected).norm() < 1e-15);
    }

    #[test]
    fn moebius_examples() {
        let mut rng = rng_for(11, 0);
        let z = crate::matcore::random_sym_c(3, &mut rng);
        assert!(
            moebius(&SymplecticElement::identity(3), &z, 1e-12)
                .unwrap()
                .dist(&z)
                < 1e-13
        );

        let j = SymplecticElement::validate(j_matrix(1), 1e-12).unwrap();
        let w = moebius(&j, &scalar(I), 1e-12).unwrap();
        assert!((w.as_matrix()[(0, 0)] - I).norm() < 1e-15);

        let g = translation(&RealSymMatrix::from_diag(&[1.0]))
            .compose(
                &embed_structure(&RMat::from_element(1, 1, 2.0), 1e-12).unwrap(),
                1e-12,
            )
            .unwrap();
        let w = moebius(&g, &scalar(I), 1e-12).unwrap();
        assert!((w.as_matrix()[(0, 0)] - c(1.0, 4.0)).norm() < 1e-14);
    }

    #[test]
    fn moebius_chart_escape() {
        // J sends 0 to -0⁻¹ = ∞
        let j = SymplecticElement::validate(j_matrix(2), 1e-12).unwrap();
        let zero = ComplexSymMatrix::scalar(2, c(0.0, 0.0));
        assert!(matches!(
            moebius(&j, &zero, 1e-12),
            Err(CrownError::ChartEscape { .. })
        ));
    }

    #[test]
    fn tau_examples() {
        let a = RMat::from_row_slice(2, 2, &[1.0, 2.0, 0.5, 3.0]);
        let h = embed_structure(&a, 1e-12).unwrap();
        assert_eq!(tau(&h), h);
        let b = RealSymMatrix::new(RMat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 0.0])).unwrap();
        let t = tau(&translation(&b));
        assert_eq!(t, translation(&b.scaled(-1.0)));
        assert_ne!(t, translation(&b));
        assert_eq!(
            tau(&SymplecticElement::identity(3)),
            SymplecticElement::identity(3)
        );
    }

    #[test]
    fn tau_fixed_points_are_structure_group() {
        let mut rng = rng_for(12, 0);
        for _ in 0..20 {
            let g = random_symplectic(2, &mut rng);
            let fixed = tau(&g).dist(&g) <= 1e-9 * (1.0 + g.matrix().norm());
            assert_eq!(fixed, structure_part(&g, 1e-9).is_some());
        }
        let h = embed_structure(&crate::matcore::random_gl(3, &mut rng), 1e-12).unwrap();
        assert!(structure_part(&h, 1e-9).is_some());
        assert!(tau(&h).dist(&h) < 1e-15);
    }

    #[test]
    fn transport_examples() {
        let g = transitive_to_basepoint(&ComplexSymMatrix::scalar(2, I), 1e-9).unwrap();
        let z = moebius(&g, &ComplexSymMatrix::scalar(2, I), 1e-12).unwrap();
        assert!((z.as_matrix() - CMat::identity(2, 2) * I).norm() < 1e-14);

        let g = transitive_to_basepoint(&scalar(c(1.0, 4.0)), 1e-9).unwrap();
        assert!((g.a()[(0, 0)] - c(2.0, 0.0)).norm() < 1e-15);
        let z = moebius(&g, &scalar(I), 1e-12).unwrap();
        assert!((z.as_matrix()[(0, 0)] - c(1.0, 4.0)).norm() < 1e-14);

        let s = RealSymMatrix::new(RMat::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0])).unwrap();
        let target = s.times_complex(I);
        let g = transitive_to_basepoint(&target, 1e-9).unwrap();
        let root = sqrt_pd(&s, 1e-9).unwrap();
        assert!(g.dist(&embed_structure(root.as_matrix(), 1e-12).unwrap()) < 1e-14);
        let z = moebius(&g, &ComplexSymMatrix::scalar(2, I), 1e-12).unwrap();
        assert!(z.dist(&target) < 1e-10);

        assert!(matches!(
            transitive_to_basepoint(&ComplexSymMatrix::scalar(2, -I), 1e-9),
            Err(CrownError::Domain(_))
        ));
    }

    #[test]
    fn negation_acts_trivially() {
        let mut rng = rng_for(13, 0);
        for _ in 0..20 {
            let g = random_symplectic(3, &mut rng);
            let z = crate::crown::random_crown_point(3, &mut rng).z;
            let a = moebius(&g, &z, 1e-12).unwrap();
            let b = moebius(&g.neg(), &z, 1e-12).unwrap();
            assert!(a.dist(&b) < 1e-10 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn inverse_is_exact() {
        let mut rng = rng_for(14, 0);
        let g = random_symplectic(3, &mut rng);
        let p = g.matrix() * g.inverse().matrix();
        assert!((p - CMat::identity(6, 6)).norm() < 1e-12 * g.matrix().norm_squared());
    }
}
