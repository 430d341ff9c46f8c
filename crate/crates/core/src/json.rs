//! JSON encodings shared by the CLI, the FFI tests and the certificates.
//!
//! Matrices are `{"n": rows, "re": [[..]], "im": [[..]]}`, row-major, with
//! `"im"` omitted for real matrices. [`to_canonical_string`] prints every
//! float with 17 significant digits so output is byte-reproducible.

use serde_json::{json, Map, Value};

use crate::conebundle::{ConeBundlePoint, ConeElement};
use crate::crown::{CollisionReport, ProbeReport};
use crate::error::{CrownError, Result};
use crate::lagrangian::Lagrangian;
use crate::matcore::{CMat, ComplexSymMatrix, RMat, RealSymMatrix};
use crate::symplectic::{Kind, SymplecticElement};

fn input(msg: impl Into<String>) -> CrownError {
    CrownError::Input(msg.into())
}

fn rows_of<T: Copy>(m: &nalgebra::DMatrix<T>, f: impl Fn(T) -> f64) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!(f(m[(i, j)]))).collect()))
            .collect(),
    )
}

pub fn encode_real(m: &RMat) -> Value {
    json!({ "n": m.nrows(), "re": rows_of(m, |x| x) })
}

pub fn encode_complex(m: &CMat) -> Value {
    json!({ "n": m.nrows(), "re": rows_of(m, |z| z.re), "im": rows_of(m, |z| z.im) })
}

fn parse_rows(v: &Value, what: &str) -> Result<Vec<Vec<f64>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| input(format!("\"{what}\" must be an array of rows")))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| input(format!("\"{what}\" rows must be arrays")))?
                .iter()
                .map(|x| {
                    x.as_f64()
                        .ok_or_else(|| input(format!("\"{what}\" entries must be numbers")))
                })
                .collect()
        })
        .collect()
}

fn to_rmat(rows: &[Vec<f64>], what: &str) -> Result<RMat> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(input(format!("\"{what}\" rows have unequal lengths")));
    }
    Ok(RMat::from_fn(r, c, |i, j| rows[i][j]))
}

/// Decodes a matrix, real or complex.
pub fn decode_matrix(v: &Value) -> Result<CMat> {
    let obj = v
        .as_object()
        .ok_or_else(|| input("matrix must be an object"))?;
    let re = to_rmat(
        &parse_rows(
            obj.get("re").ok_or_else(|| input("matrix lacks \"re\""))?,
            "re",
        )?,
        "re",
    )?;
    let im = match obj.get("im") {
        Some(im) => to_rmat(&parse_rows(im, "im")?, "im")?,
        None => RMat::zeros(re.nrows(), re.ncols()),
    };
    if im.shape() != re.shape() {
        return Err(input("\"re\" and \"im\" shapes differ"));
    }
    if let Some(n) = obj.get("n") {
        let n = n
            .as_u64()
            .ok_or_else(|| input("\"n\" must be a nonnegative integer"))?;
        if n as usize != re.nrows() {
            return Err(input(format!("\"n\" = {n} but {} rows given", re.nrows())));
        }
    }
    Ok(CMat::from_fn(re.nrows(), re.ncols(), |i, j| {
        crate::matcore::c(re[(i, j)], im[(i, j)])
    }))
}

/// Decodes a matrix that must be real.
pub fn decode_real(v: &Value) -> Result<RMat> {
    let m = decode_matrix(v)?;
    if m.iter().any(|z| z.im != 0.0) {
        return Err(input("expected a real matrix"));
    }
    Ok(m.map(|z| z.re))
}

pub fn encode_real_sym(s: &RealSymMatrix) -> Value {
    encode_real(s.as_matrix())
}

pub fn decode_real_sym(v: &Value) -> Result<RealSymMatrix> {
    RealSymMatrix::new(decode_real(v)?)
}

pub fn encode_sym(s: &ComplexSymMatrix) -> Value {
    encode_complex(s.as_matrix())
}

pub fn decode_sym(v: &Value) -> Result<ComplexSymMatrix> {
    ComplexSymMatrix::new(decode_matrix(v)?)
}

pub fn encode_symplectic(g: &SymplecticElement) -> Value {
    let mut v = match g.real_matrix() {
        Some(m) => encode_real(&m),
        None => encode_complex(g.matrix()),
    };
    let kind = match g.kind() {
        Kind::Real => "real",
        Kind::Complex => "complex",
    };
    v["kind"] = json!(kind);
    v
}

pub fn decode_symplectic(v: &Value, tol: f64) -> Result<SymplecticElement> {
    let m = decode_matrix(v)?;
    let g = SymplecticElement::validate(m, tol)?;
    match v.get("kind").and_then(Value::as_str) {
        None => Ok(g),
        Some("real") if g.kind() == Kind::Real => Ok(g),
        Some("complex") => Ok(g),
        Some(k) => Err(input(format!("kind \"{k}\" does not match the entries"))),
    }
}

pub fn encode_lagrangian(l: &Lagrangian) -> Value {
    json!({ "frame": encode_complex(l.frame()) })
}

pub fn decode_lagrangian(v: &Value) -> Result<Lagrangian> {
    Lagrangian::from_frame(decode_matrix(
        v.get("frame")
            .ok_or_else(|| input("Lagrangian lacks \"frame\""))?,
    )?)
}

pub fn encode_cone_point(pt: &ConeBundlePoint) -> Value {
    json!({
        "g": encode_symplectic(&pt.g),
        "y1": encode_real_sym(pt.y.y1()),
        "y2": encode_real_sym(pt.y.y2()),
    })
}

pub fn decode_cone_element(v: &Value, tol: f64) -> Result<ConeElement> {
    let field = |k: &str| v.get(k).ok_or_else(|| input(format!("missing \"{k}\"")));
    ConeElement::new(
        decode_real_sym(field("y1")?)?,
        decode_real_sym(field("y2")?)?,
        tol,
    )
}

/// `"g"` defaults to the identity.
pub fn decode_cone_point(v: &Value, tol: f64) -> Result<ConeBundlePoint> {
    let y = decode_cone_element(v, tol)?;
    match v.get("g") {
        Some(g) => ConeBundlePoint::new(decode_symplectic(g, tol)?, y),
        None => Ok(ConeBundlePoint::at_identity(y)),
    }
}

pub fn encode_collision_report(r: &CollisionReport) -> Value {
    let collisions: Vec<Value> = r
        .collisions
        .iter()
        .map(|c| {
            json!({
                "sample": c.sample,
                "first": encode_cone_point(&c.first),
                "second": encode_cone_point(&c.second),
                "image_distance": c.image_distance,
            })
        })
        .collect();
    json!({
        "n": r.n,
        "stratum": r.stratum,
        "samples": r.samples,
        "collisions": collisions,
        "violations": r.violations,
        "tol": r.tol,
        "seed": r.seed,
    })
}

pub fn encode_probe_report(r: &ProbeReport) -> Value {
    json!({
        "n": r.n,
        "radius": r.radius,
        "samples": r.samples,
        "collisions": [],
        "violations": r.violations,
        "tol": r.tol,
        "seed": r.seed,
        "note": "necessary-condition smoke test; zero violations does not certify properness",
    })
}

/// Serializes with sorted keys and floats as `{:.16e}`. Non-finite floats become `null`.
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, &mut out);
    out
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().unwrap_or(f64::NAN);
                if x.is_finite() {
                    out.push_str(&format!("{x:.16e}"));
                } else {
                    out.push_str("null");
                }
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(x, out);
            }
            out.push(']');
        }
        Value::Object(m) => write_object(m, out),
    }
}

fn write_object(m: &Map<String, Value>, out: &mut String) {
    let mut keys: Vec<&String> = m.keys().collect();
    keys.sort();
    out.push('{');
    for (i, k) in keys.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&Value::String(k.clone()).to_string());
        out.push(':');
        write_value(&m[k], out);
    }
    out.push('}');
}
