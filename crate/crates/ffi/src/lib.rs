//! C ABI over `crown-core`.
//!
//! Matrices cross the boundary as row-major `double` arrays; complex
//! matrices as a pair of arrays (`re`, `im`), where a null `im` on input
//! means a real matrix. Objects are opaque handles owned by the caller and
//! released with the matching `_free`. Every function returns a
//! [`CrownStatus`]; on failure [`crown_last_error`] describes the cause.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use crown_core::conebundle::{p_boundary, p_interior, ConeBundlePoint, ConeElement};
use crown_core::crown::{resolve_interior, CrownPoint};
use crown_core::lagrangian::{self, ClosureLabel, Lagrangian, Side};
use crown_core::matcore::{self, CMat, ComplexSymMatrix, ConeLabel, RMat, RealSymMatrix};
use crown_core::symplectic::{self, SymplecticElement};
use crown_core::CrownError;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrownStatus {
    Ok = 0,
    InvalidInput = 1,
    Domain = 2,
    Validation = 3,
    ChartEscape = 4,
    Numeric = 5,
    Conditioning = 6,
    Unsupported = 7,
    NullPointer = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrownSide {
    X = 0,
    Xbar = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrownClosureLabel {
    Interior = 0,
    Boundary = 1,
    Outside = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrownConeLabel {
    InteriorW = 0,
    BoundaryW = 1,
    Outside = 2,
}

/// Element of `Sp(n, R)` or `Sp(n, C)`.
pub struct CrownSymplectic(SymplecticElement);

/// Point of the Lagrangian Grassmannian.
pub struct CrownLagrangian(Lagrangian);

/// Class `[g, (y1, y2)]` in the cone bundle.
pub struct CrownConePoint(ConeBundlePoint);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &CrownError) -> CrownStatus {
    match e {
        CrownError::Input(_) => CrownStatus::InvalidInput,
        CrownError::Domain(_) => CrownStatus::Domain,
        CrownError::Validation { .. } => CrownStatus::Validation,
        CrownError::ChartEscape { .. } => CrownStatus::ChartEscape,
        CrownError::Numeric { .. } => CrownStatus::Numeric,
        CrownError::Conditioning { .. } => CrownStatus::Conditioning,
        CrownError::Unsupported(_) => CrownStatus::Unsupported,
    }
}

type FfiResult = Result<(), CrownStatus>;

impl From<CrownError> for CrownStatus {
    fn from(e: CrownError) -> Self {
        set_error(&e.to_string());
        status_of(&e)
    }
}

fn null(what: &str) -> CrownStatus {
    set_error(&format!("null pointer: {what}"));
    CrownStatus::NullPointer
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> FfiResult) -> CrownStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CrownStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("panic: {msg}"));
            CrownStatus::Panic
        }
    }
}

unsafe fn read_real(
    p: *const f64,
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<RMat, CrownStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    let s = std::slice::from_raw_parts(p, rows * cols);
    Ok(RMat::from_row_slice(rows, cols, s))
}

unsafe fn read_complex(
    re: *const f64,
    im: *const f64,
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<CMat, CrownStatus> {
    let r = read_real(re, rows, cols, what)?;
    let i = if im.is_null() {
        RMat::zeros(rows, cols)
    } else {
        read_real(im, rows, cols, what)?
    };
    Ok(CMat::from_fn(rows, cols, |a, b| {
        Complex64::new(r[(a, b)], i[(a, b)])
    }))
}

unsafe fn write_real(m: &RMat, out: *mut f64, what: &str) -> FfiResult {
    if out.is_null() {
        return Err(null(what));
    }
    let s = std::slice::from_raw_parts_mut(out, m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            s[i * m.ncols() + j] = m[(i, j)];
        }
    }
    Ok(())
}

unsafe fn write_complex(m: &CMat, re: *mut f64, im: *mut f64, what: &str) -> FfiResult {
    write_real(&m.map(|z| z.re), re, what)?;
    write_real(&m.map(|z| z.im), im, what)
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, CrownStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn emit<T>(out: *mut *mut T, value: T, what: &str) -> FfiResult {
    if out.is_null() {
        return Err(null(what));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn check_n(n: usize) -> FfiResult {
    if n == 0 {
        set_error("n must be positive");
        return Err(CrownStatus::InvalidInput);
    }
    Ok(())
}

/// Message for the last failing call on this thread; empty after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn crown_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn crown_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => c"",
        };
    VERSION.as_ptr()
}

// symplectic

/// Validates a `2n × 2n` matrix; `im` may be null.
///
/// # Safety
/// `re` (and `im` if non-null) must point to `4n²` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crown_symplectic_validate(
    n: usize,
    re: *const f64,
    im: *const f64,
    tol: f64,
    out: *mut *mut CrownSymplectic,
) -> CrownStatus {
    guard(|| {
        check_n(n)?;
        let m = read_complex(re, im, 2 * n, 2 * n, "matrix")?;
        emit(
            out,
            CrownSymplectic(SymplecticElement::validate(m, tol)?),
            "out",
        )
    })
}

/// # Safety
/// `g` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn crown_symplectic_free(g: *mut CrownSymplectic) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn crown_symplectic_residual(
    g: *const CrownSymplectic,
    out: *mut f64,
) -> CrownStatus {
    guard(|| {
        let g = handle(g, "g")?;
        *out.as_mut().ok_or_else(|| null("out"))? = g.0.residual();
        Ok(())
    })
}

/// `g · z = (az + b)(cz + d)⁻¹` for an `n × n` complex symmetric `z`.
///
/// # Safety
/// Input arrays hold `n²` doubles (`z_im` may be null); outputs are writable for `n²` doubles.
#[no_mangle]
pub unsafe extern "C" fn crown_moebius(
    g: *const CrownSymplectic,
    z_re: *const f64,
    z_im: *const f64,
    tol: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> CrownStatus {
    guard(|| {
        let g = handle(g, "g")?;
        let n = g.0.n();
        let z = ComplexSymMatrix::new(read_complex(z_re, z_im, n, n, "z")?)?;
        let w = symplectic::moebius(&g.0, &z, tol)?;
        write_complex(w.as_matrix(), out_re, out_im, "out")
    })
}

// lagrangian

/// Lagrangian spanned by the columns of a `2n × n` frame; `im` may be null.
///
/// # Safety
/// `re` (and `im` if non-null) hold `2n²` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn crown_lagrangian_from_frame(
    n: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut CrownLagrangian,
) -> CrownStatus {
    guard(|| {
        check_n(n)?;
        let f = read_complex(re, im, 2 * n, n, "frame")?;
        emit(out, CrownLagrangian(Lagrangian::from_frame(f)?), "out")
    })
}

/// `{(Tv, v)}` for complex symmetric `T`.
///
/// # Safety
/// `re` (and `im` if non-null) hold `n²` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn crown_lagrangian_graph(
    n: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut CrownLagrangian,
) -> CrownStatus {
    guard(|| {
        check_n(n)?;
        let t = ComplexSymMatrix::new(read_complex(re, im, n, n, "T")?)?;
        emit(out, CrownLagrangian(lagrangian::graph(&t)), "out")
    })
}

/// # Safety
/// `l` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn crown_lagrangian_free(l: *mut CrownLagrangian) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// `n` for a Lagrangian in `C^{2n}`; 0 for a null handle.
///
/// # Safety
/// `l` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn crown_lagrangian_dim(l: *const CrownLagrangian) -> usize {
    l.as_ref().map_or(0, |l| l.0.n())
}

/// Copies the orthonormal `2n × n` frame.
///
/// # Safety
/// `l` live; outputs writable for `2n²` doubles each.
#[no_mangle]
pub unsafe extern "C" fn crown_lagrangian_frame(
    l: *const CrownLagrangian,
    out_re: *mut f64,
    out_im: *mut f64,
) -> CrownStatus {
    guard(|| write_complex(handle(l, "l")?.0.frame(), out_re, out_im, "out"))
}

/// Subspace distance: sine of the largest principal angle.
///
/// # Safety
/// Handles live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn crown_lagrangian_distance(
    a: *const CrownLagrangian,
    b: *const CrownLagrangian,
    out: *mut f64,
) -> CrownStatus {
    guard(|| {
        let (a, b) = (handle(a, "a")?, handle(b, "b")?);
        if a.0.n() != b.0.n() {
            set_error("dimension mismatch");
            return Err(CrownStatus::InvalidInput);
        }
        *out.as_mut().ok_or_else(|| null("out"))? = a.0.distance(&b.0);
        Ok(())
    })
}

/// # Safety
/// Handles live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn crown_act(
    g: *const CrownSymplectic,
    l: *const CrownLagrangian,
    out: *mut *mut CrownLagrangian,
) -> CrownStatus {
    guard(|| {
        let (g, l) = (handle(g, "g")?, handle(l, "l")?);
        if g.0.n() != l.0.n() {
            set_error("dimension mismatch");
            return Err(CrownStatus::InvalidInput);
        }
        emit(out, CrownLagrangian(lagrangian::act(&g.0, &l.0)?), "out")
    })
}

/// # Safety
/// Handles live; outputs writable (either may be null to skip).
#[no_mangle]
pub unsafe extern "C" fn crown_transversal(
    a: *const CrownLagrangian,
    b: *const CrownLagrangian,
    tol: f64,
    out_transversal: *mut bool,
    out_sigma_min: *mut f64,
) -> CrownStatus {
    guard(|| {
        let (a, b) = (handle(a, "a")?, handle(b, "b")?);
        if a.0.n() != b.0.n() {
            set_error("dimension mismatch");
            return Err(CrownStatus::InvalidInput);
        }
        let (ok, s) = lagrangian::transversal(&a.0, &b.0, tol);
        if let Some(o) = out_transversal.as_mut() {
            *o = ok;
        }
        if let Some(o) = out_sigma_min.as_mut() {
            *o = s;
        }
        Ok(())
    })
}

/// # Safety
/// `l` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn crown_classify_closure(
    l: *const CrownLagrangian,
    side: CrownSide,
    boundary_tol: f64,
    out: *mut CrownClosureLabel,
) -> CrownStatus {
    guard(|| {
        let l = handle(l, "l")?;
        let side = match side {
            CrownSide::X => Side::X,
            CrownSide::Xbar => Side::Xbar,
        };
        *out.as_mut().ok_or_else(|| null("out"))? =
            match lagrangian::classify_closure(&l.0, side, boundary_tol) {
                ClosureLabel::Interior => CrownClosureLabel::Interior,
                ClosureLabel::Boundary => CrownClosureLabel::Boundary,
                ClosureLabel::Outside => CrownClosureLabel::Outside,
            };
        Ok(())
    })
}

// matcore

/// Position of a real symmetric `n × n` matrix relative to the PSD cone.
///
/// # Safety
/// `s` holds `n²` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn crown_classify_cone(
    n: usize,
    s: *const f64,
    tol: f64,
    out: *mut CrownConeLabel,
) -> CrownStatus {
    guard(|| {
        check_n(n)?;
        let s = RealSymMatrix::new(read_real(s, n, n, "s")?)?;
        *out.as_mut().ok_or_else(|| null("out"))? = match matcore::classify_cone(&s, tol) {
            ConeLabel::InteriorW => CrownConeLabel::InteriorW,
            ConeLabel::BoundaryW => CrownConeLabel::BoundaryW,
            ConeLabel::Outside => CrownConeLabel::Outside,
        };
        Ok(())
    })
}

/// `Z = U diag(sigma) Uᵀ` with `U` unitary and `sigma` descending.
///
/// # Safety
/// Inputs hold `n²` doubles (`im` may be null); `u_re`, `u_im` writable for `n²`, `sigma` for `n`.
#[no_mangle]
pub unsafe extern "C" fn crown_takagi(
    n: usize,
    re: *const f64,
    im: *const f64,
    tol: f64,
    u_re: *mut f64,
    u_im: *mut f64,
    sigma: *mut f64,
) -> CrownStatus {
    guard(|| {
        check_n(n)?;
        let z = ComplexSymMatrix::new(read_complex(re, im, n, n, "z")?)?;
        let t = matcore::takagi(&z, tol)?;
        write_complex(&t.u, u_re, u_im, "u")?;
        write_real(&RMat::from_row_slice(1, n, &t.sigma), sigma, "sigma")
    })
}

// cone bundle

/// `[g, (y1, y2)]`; `g` may be null for the identity.
///
/// # Safety
/// `g` null or live; `y1`, `y2` hold `n²` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn crown_cone_point_new(
    g: *const CrownSymplectic,
    n: usize,
    y1: *const f64,
    y2: *const f64,
    tol: f64,
    out: *mut *mut CrownConePoint,
) -> CrownStatus {
    guard(|| {
        check_n(n)?;
        let y = ConeElement::new(
            RealSymMatrix::new(read_real(y1, n, n, "y1")?)?,
            RealSymMatrix::new(read_real(y2, n, n, "y2")?)?,
            tol,
        )?;
        let pt = match g.as_ref() {
            Some(g) => ConeBundlePoint::new(g.0.clone(), y)?,
            None => ConeBundlePoint::at_identity(y),
        };
        emit(out, CrownConePoint(pt), "out")
    })
}

/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn crown_cone_point_free(p: *mut CrownConePoint) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `n` of the point; 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn crown_cone_point_dim(p: *const CrownConePoint) -> usize {
    p.as_ref().map_or(0, |p| p.0.y.n())
}

/// Copies the representative: `g` (`2n × 2n`, real), `y1`, `y2` (`n × n`).
/// Any output may be null to skip it.
///
/// # Safety
/// `p` live; non-null outputs writable for the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn crown_cone_point_get(
    p: *const CrownConePoint,
    g: *mut f64,
    y1: *mut f64,
    y2: *mut f64,
) -> CrownStatus {
    guard(|| {
        let p = handle(p, "p")?;
        if !g.is_null() {
            let m = p.0.g.real_matrix().ok_or_else(|| {
                set_error("representative is not real");
                CrownStatus::Domain
            })?;
            write_real(&m, g, "g")?;
        }
        if !y1.is_null() {
            write_real(p.0.y.y1().as_matrix(), y1, "y1")?;
        }
        if !y2.is_null() {
            write_real(p.0.y.y2().as_matrix(), y2, "y2")?;
        }
        Ok(())
    })
}

/// Interior map `[g, y] ↦ (g·iy1, g·(iy2)⁻¹)`.
///
/// # Safety
/// `p` live; outputs writable for `n²` doubles each.
#[no_mangle]
pub unsafe extern "C" fn crown_interior_map(
    p: *const CrownConePoint,
    tol: f64,
    z_re: *mut f64,
    z_im: *mut f64,
    w_re: *mut f64,
    w_im: *mut f64,
) -> CrownStatus {
    guard(|| {
        let (z, w) = p_interior(&handle(p, "p")?.0, tol)?;
        write_complex(z.as_matrix(), z_re, z_im, "z")?;
        write_complex(w.as_matrix(), w_re, w_im, "w")
    })
}

/// Boundary map to a pair of Lagrangians; the point must lie over `∂C`.
///
/// # Safety
/// `p` live; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn crown_boundary_map(
    p: *const CrownConePoint,
    out_l1: *mut *mut CrownLagrangian,
    out_l2: *mut *mut CrownLagrangian,
) -> CrownStatus {
    guard(|| {
        if out_l1.is_null() || out_l2.is_null() {
            return Err(null("out"));
        }
        let (l1, l2) = p_boundary(&handle(p, "p")?.0)?;
        emit(out_l1, CrownLagrangian(l1), "out_l1")?;
        emit(out_l2, CrownLagrangian(l2), "out_l2")
    })
}

/// Preimage of `(z, w)` in the open crown under the interior map.
///
/// # Safety
/// Inputs hold `n²` doubles (imaginary parts may not be null here); `out` writable.
#[no_mangle]
pub unsafe extern "C" fn crown_resolve_interior(
    n: usize,
    z_re: *const f64,
    z_im: *const f64,
    w_re: *const f64,
    w_im: *const f64,
    tol: f64,
    out: *mut *mut CrownConePoint,
) -> CrownStatus {
    guard(|| {
        check_n(n)?;
        if z_im.is_null() || w_im.is_null() {
            return Err(null("imaginary part"));
        }
        let z = ComplexSymMatrix::new(read_complex(z_re, z_im, n, n, "z")?)?;
        let w = ComplexSymMatrix::new(read_complex(w_re, w_im, n, n, "w")?)?;
        let pt = CrownPoint::new(z, w, tol)?;
        emit(out, CrownConePoint(resolve_interior(&pt, tol)?), "out")
    })
}
