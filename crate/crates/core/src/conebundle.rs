//! Points `[g, (y₁, y₂)]` of the associated bundle `G ×_H cl(C)` with
//! `C = W ⊕ W`, the interior map `P` into the crown and its boundary
//! extension `p` into pairs of Lagrangians.

use nalgebra::DVector;

use crate::error::{CrownError, Result};
use crate::lagrangian::{act, graph, neg, s0, Lagrangian};
use crate::matcore::{classify_cone, ComplexSymMatrix, ConeLabel, RMat, RealSymMatrix, I};
use crate::symplectic::{moebius, structure_part, Kind, SymplecticElement};

/// Default relative rank cut in [`normal_form_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// `(y₁, y₂) ∈ cl(W) × cl(W)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeElement {
    y1: RealSymMatrix,
    y2: RealSymMatrix,
    labels: (ConeLabel, ConeLabel),
}

impl ConeElement {
    pub fn new(y1: RealSymMatrix, y2: RealSymMatrix, tol: f64) -> Result<Self> {
        if y1.n() != y2.n() {
            return Err(CrownError::Input("y1 and y2 differ in size".into()));
        }
        let labels = (classify_cone(&y1, tol), classify_cone(&y2, tol));
        if labels.0 == ConeLabel::Outside || labels.1 == ConeLabel::Outside {
            return Err(CrownError::Domain(format!(
                "cone coordinates outside cl(W): {labels:?}"
            )));
        }
        Ok(ConeElement { y1, y2, labels })
    }

    pub fn n(&self) -> usize {
        self.y1.n()
    }

    pub fn y1(&self) -> &RealSymMatrix {
        &self.y1
    }

    pub fn y2(&self) -> &RealSymMatrix {
        &self.y2
    }

    pub fn labels(&self) -> (ConeLabel, ConeLabel) {
        self.labels
    }

    pub fn is_interior(&self) -> bool {
        self.labels == (ConeLabel::InteriorW, ConeLabel::InteriorW)
    }

    pub fn dist(&self, other: &ConeElement) -> f64 {
        self.y1.dist(&other.y1).hypot(self.y2.dist(&other.y2))
    }

    pub fn norm(&self) -> f64 {
        self.y1.as_matrix().norm().hypot(self.y2.as_matrix().norm())
    }
}

/// The class `[g, y]`; no normal form is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeBundlePoint {
    pub g: SymplecticElement,
    pub y: ConeElement,
}

impl ConeBundlePoint {
    pub fn new(g: SymplecticElement, y: ConeElement) -> Result<Self> {
        if g.kind() != Kind::Real {
            return Err(CrownError::Input(
                "bundle points need a real symplectic element".into(),
            ));
        }
        if g.n() != y.n() {
            return Err(CrownError::Input("group and cone dimensions differ".into()));
        }
        Ok(ConeBundlePoint { g, y })
    }

    pub fn at_identity(y: ConeElement) -> Self {
        ConeBundlePoint {
            g: SymplecticElement::identity(y.n()),
            y,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ConeStratum {
    WxBdry,
    BdryxBdry,
    BdryxW,
}

/// `h · (y₁, y₂) = (h y₁ hᵀ, h⁻ᵀ y₂ h⁻¹)`.
pub fn h_action(h: &RMat, y: &ConeElement, tol: f64) -> Result<ConeElement> {
    if h.nrows() != y.n() || h.ncols() != y.n() {
        return Err(CrownError::Input("h has the wrong size".into()));
    }
    let det = h.determinant();
    if !(det.abs() > tol) {
        return Err(CrownError::Domain(format!("h is singular (det {det:e})")));
    }
    let inv = h
        .clone()
        .try_inverse()
        .ok_or_else(|| CrownError::Domain("h is singular".into()))?;
    let y1 = y.y1.congruence(h);
    let y2 = y.y2.congruence(&inv.transpose());
    // congruence preserves signature, so the labels carry over
    Ok(ConeElement {
        y1,
        y2,
        labels: y.labels,
    })
}

/// `[g₁, y₁] = [g₂, y₂]` in `G ×_H cl(C)`: `g₁⁻¹ g₂ = (a 0; 0 a⁻ᵀ)` and `a · y₂ = y₁`.
pub fn equivalent(p1: &ConeBundlePoint, p2: &ConeBundlePoint, tol: f64) -> bool {
    if p1.g.n() != p2.g.n() {
        return false;
    }
    let h = p1.g.inverse().product(&p2.g);
    let Some(a) = structure_part(&h, tol) else {
        return false;
    };
    let Ok(moved) = h_action(&a, &p2.y, 0.0) else {
        return false;
    };
    moved.dist(&p1.y) <= tol * (1.0 + p1.y.norm())
}

/// `P([g, (y₁, y₂)]) = g · (i y₁, (i y₂)⁻¹) = (g · i y₁, g · (−i y₂⁻¹))`.
pub fn p_interior(pt: &ConeBundlePoint, tol: f64) -> Result<(ComplexSymMatrix, ComplexSymMatrix)> {
    if !pt.y.is_interior() {
        return Err(CrownError::Domain(
            "P needs both cone coordinates in W; use p_boundary".into(),
        ));
    }
    let z = pt.y.y1.times_complex(I);
    let w = pt.y.y2.inverse()?.times_complex(-I);
    Ok((moebius(&pt.g, &z, tol)?, moebius(&pt.g, &w, tol)?))
}

/// `p([g, (y₁, y₂)]) = g · (L_{iy₁}, −s₀(L_{iy₂}))`, the second factor being `{(w, i y₂ w)}`.
pub fn p_boundary(pt: &ConeBundlePoint) -> Result<(Lagrangian, Lagrangian)> {
    if pt.y.is_interior() {
        return Err(CrownError::Domain(
            "point lies over the open cone; use p_interior".into(),
        ));
    }
    Ok(extended_map(pt))
}

/// The continuous extension of `P` to `G ×_H cl(C)` at the Lagrangian level.
pub fn extended_map(pt: &ConeBundlePoint) -> (Lagrangian, Lagrangian) {
    let l1 = graph(&pt.y.y1.times_complex(I));
    let l2 = neg(&s0(&graph(&pt.y.y2.times_complex(I))));
    let g = &pt.g;
    (
        act(g, &l1).expect("sizes checked"),
        act(g, &l2).expect("sizes checked"),
    )
}

/// Which piece of `∂C = W × ∂W ⨿ ∂W × ∂W ⨿ ∂W × W` contains `y`.
pub fn stratify_cone(y: &ConeElement) -> Result<ConeStratum> {
    use ConeLabel::*;
    match y.labels {
        (InteriorW, BoundaryW) => Ok(ConeStratum::WxBdry),
        (BoundaryW, BoundaryW) => Ok(ConeStratum::BdryxBdry),
        (BoundaryW, InteriorW) => Ok(ConeStratum::BdryxW),
        (InteriorW, InteriorW) => Err(CrownError::Domain("point is interior to the cone".into())),
        other => Err(CrownError::Domain(format!(
            "point outside cl(C): {other:?}"
        ))),
    }
}

/// `a` with `a y₁ aᵀ ≈ diag(I_p, 0)` and the numerical rank `p`
/// (eigenvalues at or below `rank_tol · λ_max` count as zero).
pub fn normal_form_rank(y1: &RealSymMatrix, rank_tol: f64) -> Result<(RMat, usize)> {
    if classify_cone(y1, crate::matcore::DEFAULT_TOL) == ConeLabel::Outside {
        return Err(CrownError::Domain(
            "matrix is not positive semi-definite".into(),
        ));
    }
    let (values, v) = y1.eigen();
    let top = values.first().copied().unwrap_or(0.0).max(0.0);
    let rank = values
        .iter()
        .filter(|&&l| top > 0.0 && l > rank_tol * top)
        .count();
    let scale = DVector::from_fn(values.len(), |i, _| {
        if i < rank {
            1.0 / values[i].sqrt()
        } else {
            1.0
        }
    });
    Ok((RMat::from_diagonal(&scale) * v.transpose(), rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::{chart, classify_closure, transversal, ClosureLabel, Side};
    use crate::matcore::{complexify, rng_for, CMat};
    use crate::symplectic::{embed_structure, embed_unitary, translation};
    use std::f64::consts::FRAC_PI_4;

    fn cone(y1: &[f64], y2: &[f64]) -> ConeElement {
        ConeElement::new(
            RealSymMatrix::from_diag(y1),
            RealSymMatrix::from_diag(y2),
            1e-9,
        )
        .unwrap()
    }

    fn rot(n: usize, theta: f64) -> SymplecticElement {
        let mut u = RMat::identity(n, n);
        let mut v = RMat::zeros(n, n);
        u[(0, 0)] = theta.cos();
        v[(0, 0)] = theta.sin();
        embed_unitary(&u, &v, 1e-12).unwrap()
    }

    #[test]
    fn cone_element_rejects_outside() {
        let r = ConeElement::new(
            RealSymMatrix::from_diag(&[1.0, -1.0]),
            RealSymMatrix::identity(2),
            1e-9,
        );
        assert!(matches!(r, Err(CrownError::Domain(_))));
    }

    #[test]
    fn h_action_examples() {
        let y = cone(&[1.0, 2.0], &[3.0, 0.0]);
        assert!(h_action(&RMat::identity(2, 2), &y, 1e-12).unwrap().dist(&y) < 1e-15);

        let out = h_action(&RMat::from_element(1, 1, 2.0), &cone(&[1.0], &[1.0]), 1e-12).unwrap();
        assert!(out.dist(&cone(&[4.0], &[0.25])) < 1e-15);

        let h = RMat::from_diagonal(&DVector::from_vec(vec![1.0, 2.0]));
        let out = h_action(&h, &cone(&[1.0, 1.0], &[1.0, 1.0]), 1e-12).unwrap();
        assert!(out.dist(&cone(&[1.0, 4.0], &[1.0, 0.25])) < 1e-15);

        assert!(matches!(
            h_action(&RMat::zeros(2, 2), &y, 1e-12),
            Err(CrownError::Domain(_))
        ));
    }

    #[test]
    fn equivalence_examples() {
        let y = cone(&[1.0, 2.0], &[0.5, 1.0]);
        let mut rng = rng_for(31, 0);
        let g = crate::symplectic::random_symplectic(2, &mut rng);
        let p = ConeBundlePoint::new(g, y.clone()).unwrap();
        assert!(equivalent(&p, &p, 1e-9));

        let a = crate::matcore::random_gl(2, &mut rng);
        let lhs = ConeBundlePoint::new(embed_structure(&a, 1e-12).unwrap(), y.clone()).unwrap();
        let rhs = ConeBundlePoint::at_identity(h_action(&a, &y, 1e-12).unwrap());
        assert!(equivalent(&lhs, &rhs, 1e-9));
        assert!(equivalent(&rhs, &lhs, 1e-9));

        let unit = cone(&[1.0, 1.0], &[1.0, 1.0]);
        let k = ConeBundlePoint::new(rot(2, FRAC_PI_4), unit.clone()).unwrap();
        assert!(!equivalent(
            &k,
            &ConeBundlePoint::at_identity(unit.clone()),
            1e-9
        ));
        // rotation by π is -1 on the first plane, which is in H
        let k = ConeBundlePoint::new(rot(2, std::f64::consts::PI), unit.clone()).unwrap();
        assert!(equivalent(&k, &ConeBundlePoint::at_identity(unit), 1e-9));
    }

    #[test]
    fn p_interior_examples() {
        let (z, w) = p_interior(
            &ConeBundlePoint::at_identity(cone(&[1.0, 1.0], &[1.0, 1.0])),
            1e-12,
        )
        .unwrap();
        assert!(z.dist(&ComplexSymMatrix::scalar(2, I)) < 1e-15);
        assert!(w.dist(&ComplexSymMatrix::scalar(2, -I)) < 1e-15);

        let g = embed_structure(&RMat::from_element(1, 1, 2.0), 1e-12).unwrap();
        let (z, w) = p_interior(
            &ConeBundlePoint::new(g, cone(&[1.0], &[1.0])).unwrap(),
            1e-12,
        )
        .unwrap();
        assert!((z.as_matrix()[(0, 0)] - 4.0 * I).norm() < 1e-14);
        assert!((w.as_matrix()[(0, 0)] + 4.0 * I).norm() < 1e-14);
        let other = ConeBundlePoint::at_identity(cone(&[4.0], &[0.25]));
        let (z2, w2) = p_interior(&other, 1e-12).unwrap();
        assert!(z.dist(&z2) < 1e-14 && w.dist(&w2) < 1e-14);

        let b = RealSymMatrix::new(RMat::from_row_slice(2, 2, &[0.5, 1.0, 1.0, -2.0])).unwrap();
        let (z, w) = p_interior(
            &ConeBundlePoint::new(translation(&b), cone(&[1.0, 1.0], &[1.0, 1.0])).unwrap(),
            1e-12,
        )
        .unwrap();
        let bc = complexify(b.as_matrix());
        assert!((z.as_matrix() - (CMat::identity(2, 2) * I + &bc)).norm() < 1e-14);
        assert!((w.as_matrix() - (CMat::identity(2, 2) * (-I) + &bc)).norm() < 1e-14);

        let bdry = ConeBundlePoint::at_identity(cone(&[1.0, 0.0], &[1.0, 1.0]));
        assert!(matches!(
            p_interior(&bdry, 1e-12),
            Err(CrownError::Domain(_))
        ));
    }

    #[test]
    fn p_boundary_examples() {
        // n = 1, y = (1, 0): second factor {(w, 0)} is the infinity Lagrangian
        let (l1, l2) = p_boundary(&ConeBundlePoint::at_identity(cone(&[1.0], &[0.0]))).unwrap();
        assert!(l1.approx_eq(&graph(&ComplexSymMatrix::scalar(1, I)), 1e-15));
        assert!(l2.approx_eq(&Lagrangian::infinity(1), 1e-15));
        assert!(chart(&l2, 1e-12).point().is_none());

        let (l1, l2) = p_boundary(&ConeBundlePoint::at_identity(cone(
            &[1.0, 0.0],
            &[1.0, 1.0],
        )))
        .unwrap();
        assert!(transversal(&l1, &l2, 1e-8).0);
        assert_eq!(classify_closure(&l1, Side::X, 1e-7), ClosureLabel::Boundary);
        assert_eq!(
            classify_closure(&l2, Side::Xbar, 1e-7),
            ClosureLabel::Interior
        );

        let mut rng = rng_for(32, 0);
        let a = crate::matcore::random_gl(2, &mut rng);
        let y = cone(&[2.0, 0.0], &[0.0, 3.0]);
        let lhs = p_boundary(
            &ConeBundlePoint::new(embed_structure(&a, 1e-12).unwrap(), y.clone()).unwrap(),
        )
        .unwrap();
        let rhs = p_boundary(&ConeBundlePoint::at_identity(
            h_action(&a, &y, 1e-12).unwrap(),
        ))
        .unwrap();
        assert!(lhs.0.approx_eq(&rhs.0, 1e-10) && lhs.1.approx_eq(&rhs.1, 1e-10));

        let inner = ConeBundlePoint::at_identity(cone(&[1.0], &[1.0]));
        assert!(matches!(p_boundary(&inner), Err(CrownError::Domain(_))));
    }

    #[test]
    fn stratify_examples() {
        assert_eq!(
            stratify_cone(&cone(&[1.0, 1.0], &[1.0, 0.0])).unwrap(),
            ConeStratum::WxBdry
        );
        assert_eq!(
            stratify_cone(&cone(&[1.0, 0.0], &[1.0, 0.0])).unwrap(),
            ConeStratum::BdryxBdry
        );
        assert_eq!(
            stratify_cone(&cone(&[1.0, 0.0], &[1.0, 1.0])).unwrap(),
            ConeStratum::BdryxW
        );
        assert!(matches!(
            stratify_cone(&cone(&[1.0], &[1.0])),
            Err(CrownError::Domain(_))
        ));
    }

    #[test]
    fn normal_form_examples() {
        let (a, p) = normal_form_rank(&RealSymMatrix::identity(3), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(p, 3);
        assert!((a - RMat::identity(3, 3)).norm() < 1e-15);

        let (a, p) =
            normal_form_rank(&RealSymMatrix::from_diag(&[4.0, 0.0]), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(p, 1);
        assert!((a - RMat::from_diagonal(&DVector::from_vec(vec![0.5, 1.0]))).norm() < 1e-15);

        // eigen-oracle: [[1,1],[1,1]] = 2 q qᵀ with q = (1,1)/√2
        let y = RealSymMatrix::new(RMat::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0])).unwrap();
        let (a, p) = normal_form_rank(&y, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(p, 1);
        let target = RMat::from_diagonal(&DVector::from_vec(vec![1.0, 0.0]));
        assert!((y.congruence(&a).as_matrix() - target).norm() < 1e-10);
        assert!((a[(0, 0)] - 0.5).abs() < 1e-12 && (a[(0, 1)] - 0.5).abs() < 1e-12);

        assert!(matches!(
            normal_form_rank(&RealSymMatrix::from_diag(&[1.0, -1.0]), DEFAULT_RANK_TOL),
            Err(CrownError::Domain(_))
        ));
    }
}
