//! The crown domain `Ξ = X × X̄` and its boundary: membership, the
//! three-piece boundary stratification, and constructive preimages under
//! `P` (interior) and `p` (open boundary strata).

mod campaign;

pub use campaign::{
    injectivity_scan, properness_probe, Collision, CollisionReport, EscapeFamily, ProbeReport,
    Violation,
};

use nalgebra::DVector;
use rand::Rng;

use crate::conebundle::{p_boundary, p_interior, ConeBundlePoint, ConeElement, ConeStratum};
use crate::error::{CrownError, Result};
use crate::lagrangian::{
    act, cayley_chart, chart, classify_closure, graph, transversal, ClosureLabel, Lagrangian, Side,
};
use crate::matcore::{
    classify_cone, random_interior, random_psd_rank, random_real_sym, right_divide, takagi, CMat,
    ComplexSymMatrix, ConeLabel, RMat, RealSymMatrix, I,
};
use crate::symplectic::{
    embed_unitary, embed_unitary_c, random_k, random_symplectic, transitive_to_basepoint,
    transitive_to_conj_basepoint, SymplecticElement,
};

/// A point `(z, w)` with `Im z ≻ 0` and `Im w ≺ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrownPoint {
    pub z: ComplexSymMatrix,
    pub w: ComplexSymMatrix,
}

impl CrownPoint {
    pub fn new(z: ComplexSymMatrix, w: ComplexSymMatrix, tol: f64) -> Result<Self> {
        if z.n() != w.n() {
            return Err(CrownError::Input("z and w differ in size".into()));
        }
        if !in_crown(&z, &w, tol) {
            return Err(CrownError::Domain("point is not in X × X̄".into()));
        }
        Ok(CrownPoint { z, w })
    }

    pub fn n(&self) -> usize {
        self.z.n()
    }

    pub fn norm(&self) -> f64 {
        self.z.norm().hypot(self.w.norm())
    }

    pub fn dist(&self, z: &ComplexSymMatrix, w: &ComplexSymMatrix) -> f64 {
        self.z.dist(z).hypot(self.w.dist(w))
    }
}

pub fn in_crown(z: &ComplexSymMatrix, w: &ComplexSymMatrix, tol: f64) -> bool {
    z.n() == w.n()
        && classify_cone(&z.im(), tol) == ConeLabel::InteriorW
        && classify_cone(&w.im().scaled(-1.0), tol) == ConeLabel::InteriorW
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum BoundaryStratum {
    XxBdry,
    BdryxBdry,
    BdryxX,
}

impl BoundaryStratum {
    /// The cone stratum whose image under `p` is this boundary piece.
    pub fn cone_stratum(self) -> ConeStratum {
        match self {
            BoundaryStratum::XxBdry => ConeStratum::WxBdry,
            BoundaryStratum::BdryxBdry => ConeStratum::BdryxBdry,
            BoundaryStratum::BdryxX => ConeStratum::BdryxW,
        }
    }
}

/// A transversal pair in `∂Ξ` with its stratum.
#[derive(Debug, Clone)]
pub struct BoundaryPair {
    pub l1: Lagrangian,
    pub l2: Lagrangian,
    pub stratum: BoundaryStratum,
    pub sigma_min: f64,
}

/// Classifies `(L1, L2)` into a piece of `∂Ξ`; `None` means not a boundary
/// point (inside `Ξ`, outside its closure, or not transversal).
pub fn stratify_boundary(
    l1: &Lagrangian,
    l2: &Lagrangian,
    tol: f64,
    boundary_tol: f64,
) -> Option<BoundaryPair> {
    if l1.n() != l2.n() {
        return None;
    }
    let (ok, sigma_min) = transversal(l1, l2, tol);
    if !ok {
        return None;
    }
    use ClosureLabel::*;
    let stratum = match (
        classify_closure(l1, Side::X, boundary_tol),
        classify_closure(l2, Side::Xbar, boundary_tol),
    ) {
        (Interior, Boundary) => BoundaryStratum::XxBdry,
        (Boundary, Boundary) => BoundaryStratum::BdryxBdry,
        (Boundary, Interior) => BoundaryStratum::BdryxX,
        _ => return None,
    };
    Some(BoundaryPair {
        l1: l1.clone(),
        l2: l2.clone(),
        stratum,
        sigma_min,
    })
}

/// Constructive preimage under `P`.
///
/// Transports `w` to `−iI`, then diagonalizes the first factor in the
/// Cayley disc by a unitary Takagi step: with `Z = U Σ Uᵀ` the element `k`
/// of `K` built from `W = i U*` sends `Z` to `−Σ`, i.e. `z` to `i D` with
/// `D = diag((1 − σ)/(1 + σ))`, while fixing `−iI`. Real `Z` uses a real
/// eigendecomposition with signed values instead, so `k` stays in `H`.
/// Returns `[g₁ k⁻¹, (D, I)]`.
pub fn resolve_interior(pt: &CrownPoint, tol: f64) -> Result<ConeBundlePoint> {
    let n = pt.n();
    let g1 = transitive_to_conj_basepoint(&pt.w, crate::matcore::DEFAULT_TOL)?;
    let z = crate::symplectic::moebius(&g1.inverse(), &pt.z, 1e-14)?;
    let id = CMat::identity(n, n);
    let zc = ComplexSymMatrix::symmetrized(right_divide(
        &(z.as_matrix() - &id * I),
        &(z.as_matrix() + &id * I),
        1e-14,
    )?);
    // real Cayley data is diagonalized inside H ∩ K, keeping signed values
    let (w, values) = if zc.im().as_matrix().norm() <= 1e-14 * (1.0 + zc.norm()) {
        let (lambda, q) = RealSymMatrix::symmetrized(-zc.re().as_matrix()).eigen();
        (crate::matcore::complexify(&q.transpose()), lambda)
    } else {
        let tk = takagi(&zc, 1e-10)?;
        (tk.u.adjoint() * I, tk.sigma)
    };
    if let Some((index, &value)) = values
        .iter()
        .enumerate()
        .find(|(_, &s)| s.abs() >= 1.0 - tol)
    {
        return Err(CrownError::Conditioning {
            index,
            value: value.abs(),
        });
    }
    let k = embed_unitary_c(&w, 1e-9)?;
    let d: Vec<f64> = values.iter().map(|s| (1.0 - s) / (1.0 + s)).collect();
    let y = ConeElement::new(
        RealSymMatrix::from_diag(&d),
        RealSymMatrix::identity(n),
        0.0,
    )?;
    let out = ConeBundlePoint::new(g1.product(&k.inverse()), y)?;

    let (z2, w2) = p_interior(&out, 1e-14)?;
    let residual = pt.dist(&z2, &w2);
    if residual > tol.max(1e-9) * (1.0 + pt.norm()) {
        return Err(CrownError::Numeric {
            what: "resolve_interior round trip".into(),
            residual,
        });
    }
    Ok(out)
}

/// Constructive preimage under `p` on the open strata `X × ∂X̄` and `∂X × X̄`.
///
/// The interior factor is transported to its base point; the boundary factor
/// is then diagonalized in its Cayley disc by `K`, which fixes that base
/// point. Takagi values within `boundary_tol` of 1 become the vanishing
/// entries of the boundary cone coordinate.
pub fn resolve_boundary(bp: &BoundaryPair, tol: f64, boundary_tol: f64) -> Result<ConeBundlePoint> {
    let n = bp.l1.n();
    let (g1, moved, side) = match bp.stratum {
        BoundaryStratum::XxBdry => {
            let z = chart(&bp.l1, 1e-12)
                .point()
                .ok_or_else(|| CrownError::Domain("first factor not in X".into()))?;
            let g1 = transitive_to_basepoint(&z, crate::matcore::DEFAULT_TOL)?;
            let moved = act(&g1.inverse(), &bp.l2)?;
            (g1, moved, Side::Xbar)
        }
        BoundaryStratum::BdryxX => {
            let w = chart(&bp.l2, 1e-12)
                .point()
                .ok_or_else(|| CrownError::Domain("second factor not in X̄".into()))?;
            let g1 = transitive_to_conj_basepoint(&w, crate::matcore::DEFAULT_TOL)?;
            let moved = act(&g1.inverse(), &bp.l1)?;
            (g1, moved, Side::X)
        }
        BoundaryStratum::BdryxBdry => {
            return Err(CrownError::Unsupported(
                "no constructive preimage over the corner stratum ∂X × ∂X̄".into(),
            ))
        }
    };
    let zc = cayley_chart(&moved, side)
        .ok_or_else(|| CrownError::Domain("boundary factor leaves the closure".into()))?;
    let tk = takagi(&zc, 1e-10)?;
    let mut lambda = Vec::with_capacity(n);
    for (index, &s) in tk.sigma.iter().enumerate() {
        if s > 1.0 + boundary_tol {
            return Err(CrownError::Domain(format!(
                "Takagi value {s} at index {index} exceeds 1"
            )));
        }
        lambda.push(if (1.0 - s).abs() <= boundary_tol {
            0.0
        } else {
            (1.0 - s) / (1.0 + s)
        });
    }
    if !lambda.contains(&0.0) {
        return Err(CrownError::Domain("boundary factor is interior".into()));
    }
    // X̄ disc: k acts by Z ↦ W̄ Z W̄ᵀ, so W = Uᵀ gives Σ; X disc: Z ↦ W Z Wᵀ, W = i U* gives −Σ
    let w = match side {
        Side::Xbar => tk.u.transpose(),
        Side::X => tk.u.adjoint() * I,
    };
    let k = embed_unitary_c(&w, 1e-9)?;
    let degenerate = RealSymMatrix::from_diag(&lambda);
    let y = match side {
        Side::Xbar => ConeElement::new(
            RealSymMatrix::identity(n),
            degenerate,
            crate::matcore::DEFAULT_TOL,
        )?,
        Side::X => ConeElement::new(
            degenerate,
            RealSymMatrix::identity(n),
            crate::matcore::DEFAULT_TOL,
        )?,
    };
    let out = ConeBundlePoint::new(g1.product(&k.inverse()), y)?;

    let (r1, r2) = p_boundary(&out)?;
    let residual = r1.distance(&bp.l1).max(r2.distance(&bp.l2));
    if residual > tol {
        return Err(CrownError::Numeric {
            what: "resolve_boundary round trip".into(),
            residual,
        });
    }
    Ok(out)
}

/// `k = (u v; −v u)` for `u + iv = diag(e^{iπ/4}, 1, …, 1)`, a rotation in
/// the `(e₁, e_{n+1})` plane; it lies in `K` but not in `H`.
pub fn witness_rotation(n: usize) -> SymplecticElement {
    let theta = std::f64::consts::FRAC_PI_4;
    let mut u = RMat::identity(n, n);
    let mut v = RMat::zeros(n, n);
    u[(0, 0)] = theta.cos();
    v[(0, 0)] = theta.sin();
    embed_unitary(&u, &v, 1e-12).expect("rotation is unitary")
}

/// `([k, (I, I)], [1, (I, I)])`: distinct classes with the same `P`-image.
pub fn witness_noninjectivity(n: usize) -> Result<(ConeBundlePoint, ConeBundlePoint)> {
    if n == 0 {
        return Err(CrownError::Input("n must be at least 1".into()));
    }
    let y = ConeElement::new(RealSymMatrix::identity(n), RealSymMatrix::identity(n), 0.0)?;
    Ok((
        ConeBundlePoint::new(witness_rotation(n), y.clone())?,
        ConeBundlePoint::at_identity(y),
    ))
}

/// Random point of `Ξ`.
pub fn random_crown_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CrownPoint {
    let z = ComplexSymMatrix::from_parts(&random_real_sym(n, rng), &random_interior(n, rng));
    let w = ComplexSymMatrix::from_parts(
        &random_real_sym(n, rng),
        &random_interior(n, rng).scaled(-1.0),
    );
    CrownPoint { z, w }
}

/// Random cone element in the given stratum of `∂C`; boundary ranks are uniform in `0..n`.
pub fn random_cone_element<R: Rng + ?Sized>(
    n: usize,
    stratum: ConeStratum,
    rng: &mut R,
) -> ConeElement {
    let boundary = |rng: &mut R| {
        let rank = rng.random_range(0..n);
        random_psd_rank(n, rank, rng)
    };
    let (y1, y2) = match stratum {
        ConeStratum::WxBdry => (random_interior(n, rng), boundary(rng)),
        ConeStratum::BdryxBdry => {
            let y1 = boundary(rng);
            (y1, boundary(rng))
        }
        ConeStratum::BdryxW => {
            let y1 = boundary(rng);
            (y1, random_interior(n, rng))
        }
    };
    ConeElement::new(y1, y2, crate::matcore::DEFAULT_TOL).expect("sampled inside cl(C)")
}

pub fn random_boundary_point<R: Rng + ?Sized>(
    n: usize,
    stratum: ConeStratum,
    rng: &mut R,
) -> ConeBundlePoint {
    let g = random_symplectic(n, rng);
    ConeBundlePoint::new(g, random_cone_element(n, stratum, rng)).expect("real element")
}

/// Random pair in an open stratum of `∂Ξ`, drawn without `p`: a point of
/// `X` (or `X̄`) paired with `k · L_{∓iy}` for `k ∈ K` and `y ∈ ∂W`.
pub fn random_open_boundary_pair<R: Rng + ?Sized>(
    n: usize,
    stratum: BoundaryStratum,
    rng: &mut R,
) -> Result<BoundaryPair> {
    let pt = random_crown_point(n, rng);
    let k = random_k(n, rng);
    let rank = rng.random_range(0..n);
    let y = random_psd_rank(n, rank, rng);
    let (l1, l2) = match stratum {
        BoundaryStratum::XxBdry => (graph(&pt.z), act(&k, &graph(&y.times_complex(-I)))?),
        BoundaryStratum::BdryxX => (act(&k, &graph(&y.times_complex(I)))?, graph(&pt.w)),
        BoundaryStratum::BdryxBdry => return Err(CrownError::Unsupported("corner stratum".into())),
    };
    match stratify_boundary(
        &l1,
        &l2,
        crate::matcore::DEFAULT_TOL,
        crate::lagrangian::DEFAULT_BOUNDARY_TOL,
    ) {
        Some(bp) if bp.stratum == stratum => Ok(bp),
        _ => Err(CrownError::Numeric {
            what: "sampled pair left its stratum".into(),
            residual: f64::NAN,
        }),
    }
}

/// `diag(1, 0, …, 0)`.
pub(crate) fn first_unit(n: usize) -> RealSymMatrix {
    let d = DVector::from_fn(n, |i, _| if i == 0 { 1.0 } else { 0.0 });
    RealSymMatrix::from_diag(d.as_slice())
}
