//! Registry of the library's numerical invariants, run by `crown selftest`.
//!
//! Every entry draws its own seeded substreams, so entries are independent
//! and the registry order does not affect results.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conebundle::{
    equivalent, h_action, p_boundary, p_interior, ConeBundlePoint, ConeElement, ConeStratum,
};
use crate::crown::{
    injectivity_scan, random_boundary_point, random_cone_element, random_crown_point,
    random_open_boundary_pair, resolve_boundary, resolve_interior, stratify_boundary,
    witness_noninjectivity, BoundaryStratum, CrownPoint,
};
use crate::lagrangian::{
    act, cayley_chart, classify_closure, graph, neg, s0, transversal, ClosureLabel, Lagrangian,
    Side,
};
use crate::matcore::{
    classify_cone, random_gl, random_interior, random_psd_rank, random_sym_c, rng_for, sqrt_pd,
    takagi, CMat, ComplexSymMatrix, I,
};
use crate::symplectic::{
    embed_structure, embed_unitary_c, moebius, random_k, random_symplectic, siegel_unipotent, tau,
    SymplecticElement,
};

/// Number of registered invariants; `selftest` asserts it.
pub const REGISTRY_SIZE: usize = 25;

#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub n: usize,
    pub seed: u64,
    pub tol: f64,
    pub boundary_tol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub name: &'static str,
    pub module: &'static str,
    pub trials: usize,
    pub skipped: usize,
    pub failures: usize,
    pub worst: f64,
    pub bound: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

pub struct Invariant {
    pub name: &'static str,
    pub module: &'static str,
    check: fn(&Context, &mut Tally),
}

enum Trial {
    Residual(f64),
    Holds(bool),
    Skip,
    Error(String),
}

/// Accumulates trial results against one bound.
pub struct Tally {
    bound: f64,
    trials: usize,
    skipped: usize,
    failures: usize,
    worst: f64,
    first_failure: Option<String>,
}

impl Tally {
    fn record(&mut self, label: String, t: Trial) {
        self.trials += 1;
        let failed = match t {
            Trial::Residual(r) => {
                if !(r <= self.worst) {
                    self.worst = r;
                }
                !(r <= self.bound)
            }
            Trial::Holds(ok) => !ok,
            Trial::Skip => {
                self.skipped += 1;
                false
            }
            Trial::Error(e) => {
                self.failures += 1;
                self.first_failure.get_or_insert(format!("{label}: {e}"));
                return;
            }
        };
        if failed {
            self.failures += 1;
            self.first_failure.get_or_insert(label);
        }
    }
}

fn err<E: std::fmt::Display>(e: E) -> Trial {
    Trial::Error(e.to_string())
}

/// Runs `count` trials with dimensions cycling through `1..=min(n, cap)`.
fn sweep(
    ctx: &Context,
    tally: &mut Tally,
    key: u64,
    count: usize,
    cap: usize,
    mut f: impl FnMut(usize, &mut ChaCha8Rng) -> Trial,
) {
    let top = ctx.n.min(cap).max(1);
    for i in 0..count {
        let n = 1 + i % top;
        let mut rng = rng_for(ctx.seed ^ key.wrapping_mul(0x9E37_79B9_7F4A_7C15), i as u64);
        let t = f(n, &mut rng);
        tally.record(format!("trial {i} (n = {n})"), t);
    }
}

fn k_element(n: usize, rng: &mut ChaCha8Rng) -> SymplecticElement {
    random_k(n, rng)
}

fn sym_dist(a: &ComplexSymMatrix, b: &ComplexSymMatrix) -> f64 {
    a.dist(b) / (1.0 + a.norm().max(b.norm()))
}

fn image_dist(a: (Lagrangian, Lagrangian), b: (Lagrangian, Lagrangian)) -> f64 {
    a.0.distance(&b.0).max(a.1.distance(&b.1))
}

const BOUNDARY_STRATA: [ConeStratum; 3] = [
    ConeStratum::WxBdry,
    ConeStratum::BdryxBdry,
    ConeStratum::BdryxW,
];

fn expected_stratum(s: ConeStratum) -> BoundaryStratum {
    match s {
        ConeStratum::WxBdry => BoundaryStratum::XxBdry,
        ConeStratum::BdryxBdry => BoundaryStratum::BdryxBdry,
        ConeStratum::BdryxW => BoundaryStratum::BdryxX,
    }
}

// matcore

fn cone_congruence(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 1, 100, 4, |n, rng| {
        let rank = rng.random_range(0..=n);
        let s = random_psd_rank(n, rank, rng);
        let s = if rng.random_bool(0.25) {
            s.scaled(-1.0)
        } else {
            s
        };
        let a = random_gl(n, rng);
        Trial::Holds(classify_cone(&s.congruence(&a), ctx.tol) == classify_cone(&s, ctx.tol))
    });
}

fn takagi_round_trip(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 2, 100, 5, |n, rng| {
        let z = random_sym_c(n, rng);
        match takagi(&z, 1e-10) {
            Ok(tk) => Trial::Residual((tk.reconstruct() - z.as_matrix()).norm() / (1.0 + z.norm())),
            Err(e) => err(e),
        }
    });
}

fn sqrt_pd_square(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 3, 100, 4, |n, rng| {
        let s = random_interior(n, rng);
        match sqrt_pd(&s, ctx.tol) {
            Ok(r) => {
                let sq = r.as_matrix() * r.as_matrix();
                let interior = classify_cone(&r, ctx.tol) == crate::matcore::ConeLabel::InteriorW;
                if !interior {
                    return Trial::Error("square root left the open cone".into());
                }
                Trial::Residual((sq - s.as_matrix()).norm() / (1.0 + s.as_matrix().norm()))
            }
            Err(e) => err(e),
        }
    });
}

// symplectic

fn product_residual(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 4, 100, 3, |n, rng| {
        let g1 = random_symplectic(n, rng);
        let g2 = random_symplectic(n, rng);
        let p = g1.product(&g2);
        // 5x the larger factor residual, floored at one unit roundoff
        let allowed = 5.0 * g1.residual().max(g2.residual()).max(f64::EPSILON);
        match SymplecticElement::validate(p.matrix().clone(), ctx.tol) {
            Ok(v) => Trial::Residual(v.residual() / allowed),
            Err(e) => err(e),
        }
    });
}

fn moebius_cocycle(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 5, 100, 3, |n, rng| {
        let g1 = random_symplectic(n, rng);
        let g2 = random_symplectic(n, rng);
        let z = random_crown_point(n, rng).z;
        let lhs = moebius(&g1.product(&g2), &z, ctx.tol);
        let rhs = moebius(&g2, &z, ctx.tol).and_then(|w| moebius(&g1, &w, ctx.tol));
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => Trial::Residual(sym_dist(&a, &b)),
            _ => Trial::Skip,
        }
    });
}

fn k_stabilizes_base_points(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 6, 50, 4, |n, rng| {
        let k = k_element(n, rng);
        let x0 = ComplexSymMatrix::scalar(n, I);
        let x0bar = ComplexSymMatrix::scalar(n, -I);
        match (moebius(&k, &x0, ctx.tol), moebius(&k, &x0bar, ctx.tol)) {
            (Ok(a), Ok(b)) => Trial::Residual(a.dist(&x0).max(b.dist(&x0bar))),
            (Err(e), _) | (_, Err(e)) => err(e),
        }
    });
}

fn tau_homomorphism(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 7, 100, 3, |n, rng| {
        let g1 = random_symplectic(n, rng);
        let g2 = random_symplectic(n, rng);
        let hom = tau(&g1.product(&g2)).dist(&tau(&g1).product(&tau(&g2)));
        let inv = tau(&tau(&g1)).dist(&g1);
        Trial::Residual(hom.max(inv) / (1.0 + g1.matrix().norm() * g2.matrix().norm()))
    });
}

fn negation_acts_trivially(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 8, 100, 3, |n, rng| {
        let g = random_symplectic(n, rng);
        let z = random_crown_point(n, rng).z;
        match (moebius(&g, &z, ctx.tol), moebius(&g.neg(), &z, ctx.tol)) {
            (Ok(a), Ok(b)) => Trial::Residual(sym_dist(&a, &b)),
            _ => Trial::Skip,
        }
    });
}

fn stabilizer_formula(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 9, 50, 3, |n, rng| {
        let u = random_sym_c(n, rng);
        let run = || -> crate::Result<f64> {
            let plus = siegel_unipotent(&u, true, 1e-8)?;
            let minus = siegel_unipotent(&u, false, 1e-8)?;
            let a = act(&plus, &Lagrangian::base(n))?.distance(&Lagrangian::base(n));
            let b = act(&minus, &Lagrangian::base_conj(n))?.distance(&Lagrangian::base_conj(n));
            Ok(a.max(b))
        };
        match run() {
            Ok(r) => Trial::Residual(r),
            Err(e) => err(e),
        }
    });
}

// lagrangian

fn action_equivariance(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 10, 100, 3, |n, rng| {
        let g = random_symplectic(n, rng);
        let z = random_crown_point(n, rng).z;
        match (act(&g, &graph(&z)), moebius(&g, &z, ctx.tol)) {
            (Ok(l), Ok(w)) => Trial::Residual(l.distance(&graph(&w))),
            (Err(e), _) => err(e),
            (_, Err(_)) => Trial::Skip,
        }
    });
}

fn isotropy_preserved(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 11, 100, 4, |n, rng| {
        let g = random_symplectic(n, rng);
        let l = graph(&random_sym_c(n, rng));
        match act(&g, &l) {
            Ok(gl) => Trial::Residual(
                gl.isotropy_residual()
                    .max(s0(&l).isotropy_residual())
                    .max(neg(&l).isotropy_residual()),
            ),
            Err(e) => err(e),
        }
    });
}

fn transversal_symmetric(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 12, 100, 4, |n, rng| {
        let a = graph(&random_sym_c(n, rng));
        let b = if rng.random_bool(0.2) {
            s0(&a)
        } else {
            graph(&random_sym_c(n, rng))
        };
        let (ab, sab) = transversal(&a, &b, ctx.tol);
        let (ba, sba) = transversal(&b, &a, ctx.tol);
        if ab != ba {
            return Trial::Error("verdicts differ".into());
        }
        Trial::Residual((sab - sba).abs())
    });
}

fn psd_pairs_are_transversal(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 13, 500, 4, |n, rng| {
        let (r1, r2) = (rng.random_range(0..=n), rng.random_range(0..=n));
        let y1 = random_psd_rank(n, r1, rng);
        let y2 = random_psd_rank(n, r2, rng);
        let l1 = graph(&y1.times_complex(I));
        let l2 = neg(&s0(&graph(&y2.times_complex(I))));
        Trial::Holds(transversal(&l1, &l2, 1e-8).0)
    });
}

fn random_closure_lagrangian(n: usize, side: Side, rng: &mut ChaCha8Rng) -> Lagrangian {
    let sign = if side == Side::X { I } else { -I };
    let y = if rng.random_bool(0.5) {
        random_interior(n, rng)
    } else {
        let r = rng.random_range(0..n);
        random_psd_rank(n, r, rng)
    };
    let k = k_element(n, rng);
    act(&k, &graph(&y.times_complex(sign))).expect("real action")
}

fn closure_k_invariance(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 14, 100, 3, |n, rng| {
        let side = if rng.random_bool(0.5) {
            Side::X
        } else {
            Side::Xbar
        };
        let l = random_closure_lagrangian(n, side, rng);
        let k = k_element(n, rng);
        match act(&k, &l) {
            Ok(kl) => Trial::Holds(
                classify_closure(&kl, side, ctx.boundary_tol)
                    == classify_closure(&l, side, ctx.boundary_tol),
            ),
            Err(e) => err(e),
        }
    });
}

fn cayley_chart_on_closure(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 15, 100, 4, |n, rng| {
        let side = if rng.random_bool(0.5) {
            Side::X
        } else {
            Side::Xbar
        };
        let l = random_closure_lagrangian(n, side, rng);
        match classify_closure(&l, side, ctx.boundary_tol) {
            ClosureLabel::Outside => Trial::Error("closure sample classified Outside".into()),
            _ => Trial::Holds(cayley_chart(&l, side).is_some()),
        }
    });
}

// conebundle

fn p_constant_on_h_orbits(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 16, 100, 3, |n, rng| {
        let a = random_gl(n, rng);
        let y = ConeElement::new(random_interior(n, rng), random_interior(n, rng), ctx.tol)
            .expect("open cone");
        let run = || -> crate::Result<f64> {
            let lhs = p_interior(
                &ConeBundlePoint::new(embed_structure(&a, ctx.tol)?, y.clone())?,
                ctx.tol,
            )?;
            let rhs = p_interior(
                &ConeBundlePoint::at_identity(h_action(&a, &y, ctx.tol)?),
                ctx.tol,
            )?;
            Ok(sym_dist(&lhs.0, &rhs.0).max(sym_dist(&lhs.1, &rhs.1)))
        };
        match run() {
            Ok(r) => Trial::Residual(r),
            Err(e) => err(e),
        }
    });
}

fn p_images_transversal(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 17, 300, 3, |n, rng| {
        let stratum = BOUNDARY_STRATA[rng.random_range(0..3)];
        let pt = random_boundary_point(n, stratum, rng);
        match p_boundary(&pt) {
            Ok((l1, l2)) => Trial::Holds(transversal(&l1, &l2, 1e-8).0),
            Err(e) => err(e),
        }
    });
}

fn stratum_correspondence(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 18, 300, 3, |n, rng| {
        let stratum = BOUNDARY_STRATA[rng.random_range(0..3)];
        let pt = random_boundary_point(n, stratum, rng);
        match p_boundary(&pt) {
            Ok((l1, l2)) => Trial::Holds(
                stratify_boundary(&l1, &l2, ctx.tol, ctx.boundary_tol).map(|b| b.stratum)
                    == Some(expected_stratum(stratum)),
            ),
            Err(e) => err(e),
        }
    });
}

fn noninjectivity_witness(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 19, 2, 2, |n, _| {
        let run = || -> crate::Result<Trial> {
            let (a, b) = witness_noninjectivity(n)?;
            let (pa, pb) = (p_interior(&a, ctx.tol)?, p_interior(&b, ctx.tol)?);
            if equivalent(&a, &b, ctx.tol) {
                return Ok(Trial::Error("witness classes are equivalent".into()));
            }
            Ok(Trial::Residual(pa.0.dist(&pb.0).max(pa.1.dist(&pb.1))))
        };
        run().unwrap_or_else(err)
    });
}

// crown

fn resolve_round_trip(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 20, 200, 3, |n, rng| {
        let pt = random_crown_point(n, rng);
        match resolve_interior(&pt, 1e-7).and_then(|r| p_interior(&r, ctx.tol)) {
            Ok((z, w)) => Trial::Residual(pt.dist(&z, &w) / (1.0 + pt.norm())),
            Err(e) => err(e),
        }
    });
}

fn resolve_equivariance(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 21, 50, 3, |n, rng| {
        let g = random_symplectic(n, rng);
        let pt = random_crown_point(n, rng);
        let run = || -> crate::Result<Trial> {
            let moved = CrownPoint::new(
                moebius(&g, &pt.z, ctx.tol)?,
                moebius(&g, &pt.w, ctx.tol)?,
                ctx.tol,
            )?;
            let direct = resolve_interior(&moved, 1e-7)?;
            let base = resolve_interior(&pt, 1e-7)?;
            let transported = ConeBundlePoint::new(g.product(&base.g), base.y.clone())?;
            if equivalent(&direct, &transported, 1e-7) {
                return Ok(Trial::Residual(0.0));
            }
            let (a, b) = (
                p_interior(&direct, ctx.tol)?,
                p_interior(&transported, ctx.tol)?,
            );
            let scale = 1.0 + moved.norm();
            Ok(Trial::Residual(a.0.dist(&b.0).max(a.1.dist(&b.1)) / scale))
        };
        run().unwrap_or_else(err)
    });
}

fn image_containment(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 22, 300, 3, |n, rng| {
        let stratum = BOUNDARY_STRATA[rng.random_range(0..3)];
        let y = random_cone_element(n, stratum, rng);
        let pt = ConeBundlePoint::new(random_symplectic(n, rng), y).expect("real element");
        match p_boundary(&pt) {
            Ok((l1, l2)) => {
                Trial::Holds(stratify_boundary(&l1, &l2, ctx.tol, ctx.boundary_tol).is_some())
            }
            Err(e) => err(e),
        }
    });
}

fn open_strata_surjectivity(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 23, 200, 3, |n, rng| {
        let stratum = if rng.random_bool(0.5) {
            BoundaryStratum::XxBdry
        } else {
            BoundaryStratum::BdryxX
        };
        let mut run = || -> crate::Result<f64> {
            let bp = random_open_boundary_pair(n, stratum, rng)?;
            let pt = resolve_boundary(&bp, 1e-6, ctx.boundary_tol)?;
            let img = p_boundary(&pt)?;
            Ok(image_dist(img, (bp.l1, bp.l2)))
        };
        match run() {
            Ok(r) => Trial::Residual(r),
            Err(e) => err(e),
        }
    });
}

fn n1_collision_free(ctx: &Context, t: &mut Tally) {
    for (i, stratum) in BOUNDARY_STRATA.into_iter().enumerate() {
        let r = injectivity_scan(
            1,
            stratum,
            500,
            ctx.seed.wrapping_add(i as u64),
            1e-6,
            ctx.boundary_tol,
            false,
        );
        let ok = r.collisions.is_empty() && r.violations.is_empty();
        t.record(
            format!(
                "{stratum:?}: {} collisions, {} violations",
                r.collisions.len(),
                r.violations.len()
            ),
            Trial::Holds(ok),
        );
    }
}

fn json_determinism(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 24, 20, 3, |n, rng| {
        let pt = random_boundary_point(n, ConeStratum::WxBdry, rng);
        let a = crate::json::to_canonical_string(&crate::json::encode_cone_point(&pt));
        let back = crate::json::decode_cone_point(
            &serde_json::from_str(&a).expect("own output parses"),
            ctx.tol,
        );
        match back {
            Ok(b) => Trial::Holds(
                crate::json::to_canonical_string(&crate::json::encode_cone_point(&b)) == a,
            ),
            Err(e) => err(e),
        }
    });
}

fn unitary_embedding_valid(ctx: &Context, t: &mut Tally) {
    sweep(ctx, t, 25, 50, 4, |n, rng| {
        let w: CMat = crate::matcore::random_unitary(n, rng);
        match embed_unitary_c(&w, 1e-10) {
            Ok(k) => Trial::Residual(k.residual()),
            Err(e) => err(e),
        }
    });
}

/// Name, owning module, bound on the per-trial residual (unused by boolean checks), check.
/// The product entry reports the residual divided by its allowance, so its bound is 1.
type Entry = (&'static str, &'static str, f64, fn(&Context, &mut Tally));

const ENTRIES: [Entry; REGISTRY_SIZE] = [
    (
        "cone_label_congruence_invariant",
        "matcore",
        0.0,
        cone_congruence,
    ),
    ("takagi_round_trip", "matcore", 1e-10, takagi_round_trip),
    ("sqrt_pd_squares_back", "matcore", 1e-10, sqrt_pd_square),
    (
        "product_residual_within_5x_factors",
        "symplectic",
        1.0,
        product_residual,
    ),
    ("moebius_cocycle", "symplectic", 1e-8, moebius_cocycle),
    (
        "k_stabilizes_base_points",
        "symplectic",
        1e-9,
        k_stabilizes_base_points,
    ),
    (
        "tau_involutive_homomorphism",
        "symplectic",
        1e-10,
        tau_homomorphism,
    ),
    (
        "negation_acts_trivially",
        "symplectic",
        1e-10,
        negation_acts_trivially,
    ),
    (
        "unipotent_stabilizers_fix_base_lagrangians",
        "symplectic",
        1e-8,
        stabilizer_formula,
    ),
    (
        "unitary_embedding_is_symplectic",
        "symplectic",
        1e-12,
        unitary_embedding_valid,
    ),
    (
        "action_matches_moebius",
        "lagrangian",
        1e-8,
        action_equivariance,
    ),
    ("isotropy_preserved", "lagrangian", 1e-9, isotropy_preserved),
    (
        "transversal_symmetric",
        "lagrangian",
        1e-12,
        transversal_symmetric,
    ),
    (
        "psd_pairs_are_transversal",
        "lagrangian",
        0.0,
        psd_pairs_are_transversal,
    ),
    (
        "closure_label_k_invariant",
        "lagrangian",
        0.0,
        closure_k_invariance,
    ),
    (
        "cayley_chart_defined_on_closure",
        "lagrangian",
        0.0,
        cayley_chart_on_closure,
    ),
    (
        "pmap_constant_on_h_orbits",
        "conebundle",
        1e-8,
        p_constant_on_h_orbits,
    ),
    (
        "boundary_images_transversal",
        "conebundle",
        0.0,
        p_images_transversal,
    ),
    (
        "stratum_correspondence",
        "conebundle",
        0.0,
        stratum_correspondence,
    ),
    (
        "noninjectivity_witness",
        "conebundle",
        1e-10,
        noninjectivity_witness,
    ),
    (
        "resolve_interior_round_trip",
        "crown",
        1e-7,
        resolve_round_trip,
    ),
    (
        "resolve_interior_equivariant",
        "crown",
        1e-7,
        resolve_equivariance,
    ),
    (
        "boundary_image_containment",
        "crown",
        0.0,
        image_containment,
    ),
    (
        "open_strata_surjective",
        "crown",
        1e-6,
        open_strata_surjectivity,
    ),
    ("n1_scan_collision_free", "crown", 0.0, n1_collision_free),
];

/// The registry; `json_determinism` is owned by the CLI contract.
pub fn registry() -> Vec<Invariant> {
    ENTRIES
        .iter()
        .map(|&(name, module, _, check)| Invariant {
            name,
            module,
            check,
        })
        .collect()
}

fn bound_of(name: &str) -> f64 {
    ENTRIES.iter().find(|e| e.0 == name).map_or(0.0, |e| e.2)
}

pub fn run_one(inv: &Invariant, ctx: &Context) -> Outcome {
    let bound = bound_of(inv.name);
    let mut tally = Tally {
        bound,
        trials: 0,
        skipped: 0,
        failures: 0,
        worst: 0.0,
        first_failure: None,
    };
    (inv.check)(ctx, &mut tally);
    Outcome {
        name: inv.name,
        module: inv.module,
        trials: tally.trials,
        skipped: tally.skipped,
        failures: tally.failures,
        worst: tally.worst,
        bound,
        pass: tally.failures == 0,
        first_failure: tally.first_failure,
    }
}

pub fn run_all(ctx: &Context) -> Vec<Outcome> {
    let mut out: Vec<Outcome> = registry().iter().map(|inv| run_one(inv, ctx)).collect();
    let mut tally = Tally {
        bound: 0.0,
        trials: 0,
        skipped: 0,
        failures: 0,
        worst: 0.0,
        first_failure: None,
    };
    json_determinism(ctx, &mut tally);
    out.push(Outcome {
        name: "canonical_json_round_trip",
        module: "cli",
        trials: tally.trials,
        skipped: tally.skipped,
        failures: tally.failures,
        worst: 0.0,
        bound: 0.0,
        pass: tally.failures == 0,
        first_failure: tally.first_failure,
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique() {
        let reg = registry();
        assert_eq!(reg.len(), REGISTRY_SIZE);
        let mut names: Vec<&str> = reg.iter().map(|i| i.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), REGISTRY_SIZE);
    }

    #[test]
    fn all_invariants_hold_at_n2() {
        let ctx = Context {
            n: 2,
            seed: 1,
            tol: 1e-9,
            boundary_tol: 1e-7,
        };
        for o in run_all(&ctx) {
            assert!(o.pass, "{o:?}");
        }
    }
}
