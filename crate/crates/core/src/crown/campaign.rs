//! Seeded sampling campaigns over the boundary map `p`: collision scans
//! (injectivity) and escape sequences (a necessary condition for
//! properness). Sample `i` draws from the substream `(seed, i)`, so
//! campaigns can be split across workers and merged by concatenation.

use crate::conebundle::{equivalent, p_boundary, ConeBundlePoint, ConeElement, ConeStratum};
use crate::lagrangian::{act, transversal};
use crate::matcore::{random_psd_rank, random_real_sym, rng_for, RMat, RealSymMatrix};
use crate::symplectic::{
    embed_structure, lower_translation, random_symplectic, translation, SymplecticElement,
};

use super::{
    first_unit, random_boundary_point, resolve_boundary, stratify_boundary, witness_rotation,
};

/// Two inequivalent bundle points with frame-equal images.
#[derive(Debug, Clone)]
pub struct Collision {
    pub sample: usize,
    pub first: ConeBundlePoint,
    pub second: ConeBundlePoint,
    pub image_distance: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Violation {
    pub sample: usize,
    pub kind: String,
    pub detail: String,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct CollisionReport {
    pub n: usize,
    pub stratum: ConeStratum,
    pub samples: usize,
    pub collisions: Vec<Collision>,
    pub violations: Vec<Violation>,
    pub tol: f64,
    pub seed: u64,
}

impl CollisionReport {
    /// Concatenates reports of disjoint sample ranges.
    pub fn merge(mut self, other: CollisionReport) -> CollisionReport {
        self.samples += other.samples;
        self.collisions.extend(other.collisions);
        self.violations.extend(other.violations);
        self
    }
}

/// Injectivity scan of `p` over one stratum of `∂C`.
///
/// On the open strata each sampled point is mapped by `p`, its image is
/// resolved back with [`resolve_boundary`], and the two preimages are
/// compared with the `H`-orbit test: an inequivalent preimage of the same
/// image is a collision. On the corner stratum, where no constructive
/// preimage exists, independent pairs are compared instead. With
/// `inject_witness` and `n ≥ 2`, sample 0 is the pair `[k, y]`, `[1, y]`
/// with `k` the witness rotation and `y` built from `I` and `diag(1, 0, …, 0)`.
pub fn injectivity_scan(
    n: usize,
    stratum: ConeStratum,
    samples: usize,
    seed: u64,
    tol: f64,
    boundary_tol: f64,
    inject_witness: bool,
) -> CollisionReport {
    let mut report = CollisionReport {
        n,
        stratum,
        samples,
        collisions: Vec::new(),
        violations: Vec::new(),
        tol,
        seed,
    };
    for sample in 0..samples {
        let mut rng = rng_for(seed, sample as u64);
        let (first, second) = if inject_witness && n >= 2 && sample == 0 {
            let y = witness_cone(n, stratum);
            (
                ConeBundlePoint::new(witness_rotation(n), y.clone()).expect("real"),
                ConeBundlePoint::at_identity(y),
            )
        } else {
            let first = random_boundary_point(n, stratum, &mut rng);
            let second = match stratum {
                ConeStratum::BdryxBdry => random_boundary_point(n, stratum, &mut rng),
                _ => {
                    let (l1, l2) = p_boundary(&first).expect("boundary point");
                    let Some(bp) = stratify_boundary(&l1, &l2, 1e-9, boundary_tol) else {
                        report.violations.push(Violation {
                            sample,
                            kind: "image-not-in-boundary".into(),
                            detail: "p-image failed boundary classification".into(),
                            value: transversal(&l1, &l2, 0.0).1,
                        });
                        continue;
                    };
                    match resolve_boundary(&bp, tol, boundary_tol) {
                        Ok(pt) => pt,
                        Err(e) => {
                            report.violations.push(Violation {
                                sample,
                                kind: "resolve-failed".into(),
                                detail: e.to_string(),
                                value: f64::NAN,
                            });
                            continue;
                        }
                    }
                }
            };
            (first, second)
        };
        let (a1, a2) = p_boundary(&first).expect("boundary point");
        let (b1, b2) = p_boundary(&second).expect("boundary point");
        let image_distance = a1.distance(&b1).max(a2.distance(&b2));
        if image_distance <= tol && !equivalent(&first, &second, tol) {
            report.collisions.push(Collision {
                sample,
                first,
                second,
                image_distance,
            });
        }
    }
    report
}

/// Cone element fixed by the witness rotation, in the requested stratum.
fn witness_cone(n: usize, stratum: ConeStratum) -> ConeElement {
    let (y1, y2) = match stratum {
        ConeStratum::WxBdry => (RealSymMatrix::identity(n), first_unit(n)),
        ConeStratum::BdryxBdry => (first_unit(n), first_unit(n)),
        ConeStratum::BdryxW => (first_unit(n), RealSymMatrix::identity(n)),
    };
    ConeElement::new(y1, y2, crate::matcore::DEFAULT_TOL).expect("inside cl(C)")
}

/// One-parameter families `t ↦ [g_t, y_t]` leaving every compact subset of `G ×_H ∂C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum EscapeFamily {
    /// `[g, (t y₁, y₂)]`
    ScaleFirst,
    /// `[g, (y₁, t y₂)]`
    ScaleSecond,
    /// `[g · (a_t 0; 0 a_t⁻ᵀ), y]` with `a_t = diag(t, 1/t, 1, …)`
    Squeeze,
    /// `[g · (I tb; 0 I), y]`
    Translate,
    /// `[g · (I 0; tc I), y]`
    LowerTranslate,
}

fn unit_direction<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> RealSymMatrix {
    let s = random_real_sym(n, rng);
    let norm = s.as_matrix().norm().max(f64::MIN_POSITIVE);
    s.scaled(1.0 / norm)
}

const FAMILIES: [EscapeFamily; 5] = [
    EscapeFamily::ScaleFirst,
    EscapeFamily::ScaleSecond,
    EscapeFamily::Squeeze,
    EscapeFamily::Translate,
    EscapeFamily::LowerTranslate,
];

/// Steps per escape sequence, geometric in `t ∈ [1, radius]`.
const PROBE_STEPS: usize = 8;

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub n: usize,
    pub radius: f64,
    pub samples: usize,
    pub violations: Vec<Violation>,
    /// `σ_min(t = radius) / σ_min(t = 1)` per sequence.
    pub decay: Vec<f64>,
    pub seed: u64,
    /// Largest decay ratio accepted as escaping.
    pub tol: f64,
}

/// Escape-sequence smoke test for properness of `p`.
///
/// Along each sequence the preimage leaves every compact set, so the image
/// must leave every compact set of `∂Ξ ⊂ X_C`, i.e. approach the
/// non-transversal locus. Compact subsets of `X_C` are bounded away from that
/// locus, so the transversality margin `σ_min` of the image pair is the escape
/// gauge. A sequence whose margin does not shrink by at least `1/√radius`
/// is reported as a bounded-image violation. This is a necessary condition
/// only; it does not certify properness.
pub fn properness_probe(n: usize, radius: f64, samples: usize, seed: u64) -> ProbeReport {
    let tol = 1.0 / radius.sqrt();
    let mut report = ProbeReport {
        n,
        radius,
        samples,
        violations: Vec::new(),
        decay: Vec::new(),
        seed,
        tol,
    };
    for sample in 0..samples {
        let mut rng = rng_for(seed, sample as u64);
        let family = FAMILIES[sample % FAMILIES.len()];
        let g = random_symplectic(n, &mut rng);
        // boundary cone element whose scaled coordinate is nonzero
        let rank = |rng: &mut rand_chacha::ChaCha8Rng| {
            if n == 1 {
                0
            } else {
                rand::Rng::random_range(rng, 1..n)
            }
        };
        let (y1, y2) = match sample / FAMILIES.len() % 2 {
            0 => {
                let r = rank(&mut rng);
                (
                    random_psd_rank(n, n, &mut rng),
                    random_psd_rank(n, r, &mut rng),
                )
            }
            _ => {
                let r = rank(&mut rng);
                (
                    random_psd_rank(n, r, &mut rng),
                    random_psd_rank(n, n, &mut rng),
                )
            }
        };
        // keep the scaled coordinate nonzero for n = 1, where ∂W = {0}
        let family = match (
            family,
            y1.as_matrix().norm() > 0.0,
            y2.as_matrix().norm() > 0.0,
        ) {
            (EscapeFamily::ScaleFirst, false, _) => EscapeFamily::ScaleSecond,
            (EscapeFamily::ScaleSecond, _, false) => EscapeFamily::ScaleFirst,
            (f, _, _) => f,
        };
        let b = unit_direction(n, &mut rng);
        let cdir = unit_direction(n, &mut rng);
        // for n = 1 one cone coordinate vanishes; squeeze towards the other
        let up = n > 1 || y1.as_matrix().norm() > 0.0;

        let point_at = |t: f64| -> ConeBundlePoint {
            let (gt, a, bb): (SymplecticElement, RealSymMatrix, RealSymMatrix) = match family {
                EscapeFamily::ScaleFirst => (g.clone(), y1.scaled(t), y2.clone()),
                EscapeFamily::ScaleSecond => (g.clone(), y1.clone(), y2.scaled(t)),
                EscapeFamily::Squeeze => {
                    let mut a = RMat::identity(n, n);
                    a[(0, 0)] = if up { t } else { 1.0 / t };
                    if n > 1 {
                        a[(1, 1)] = 1.0 / t;
                    }
                    (
                        g.product(&embed_structure(&a, 0.0).expect("invertible")),
                        y1.clone(),
                        y2.clone(),
                    )
                }
                EscapeFamily::Translate => (
                    g.product(&translation(&b.scaled(t))),
                    y1.clone(),
                    y2.clone(),
                ),
                EscapeFamily::LowerTranslate => (
                    g.product(&lower_translation(&cdir.scaled(t))),
                    y1.clone(),
                    y2.clone(),
                ),
            };
            let y = ConeElement::new(a, bb, crate::matcore::DEFAULT_TOL).expect("inside cl(C)");
            ConeBundlePoint::new(gt, y).expect("real")
        };

        let g_inv = g.inverse();
        let margins: Vec<f64> = (0..PROBE_STEPS)
            .map(|j| {
                let t = radius.powf(j as f64 / (PROBE_STEPS - 1) as f64);
                let (l1, l2) = p_boundary(&point_at(t)).expect("boundary point");
                let pull = |l: &crate::lagrangian::Lagrangian| act(&g_inv, l).expect("real action");
                transversal(&pull(&l1), &pull(&l2), 0.0).1
            })
            .collect();
        let ratio = margins[PROBE_STEPS - 1] / margins[0];
        report.decay.push(ratio);
        if !(ratio <= tol) {
            report.violations.push(Violation {
                sample,
                kind: format!("{family:?}"),
                detail: format!(
                    "transversality margin {:e} -> {:e} along an escaping sequence",
                    margins[0],
                    margins[PROBE_STEPS - 1]
                ),
                value: ratio,
            });
        }
    }
    report
}
