//! `crown` command line: every invocation reads at most one JSON document
//! and prints exactly one certificate.
//!
//! Exit codes: 0 when the certificate passes, 1 when it does not (contract
//! violation or failed residual), 2 for malformed JSON or bad arguments.

use std::collections::BTreeMap;
use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::conebundle::{p_boundary, p_interior, stratify_cone, ConeStratum};
use crate::crown::{
    injectivity_scan, properness_probe, resolve_boundary, resolve_interior, stratify_boundary,
    CrownPoint,
};
use crate::error::CrownError;
use crate::invariants::{run_all, Context, REGISTRY_SIZE};
use crate::json::*;
use crate::lagrangian::{act, classify_closure, transversal, Side};
use crate::symplectic::{moebius, SymplecticElement};

#[derive(Debug, Parser)]
#[command(
    name = "crown",
    version,
    about = "Crown domain and boundary resolution toolkit"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone)]
struct Common {
    /// Numerical tolerance for residual checks
    #[arg(long, global = true, env = "CROWN_TOL", default_value_t = 1e-9)]
    tol: f64,
    /// Band around the unit sphere of the Cayley chart counted as boundary
    #[arg(long = "boundary-tol", global = true, default_value_t = 1e-7)]
    boundary_tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sample count for campaigns
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Matrix size for campaigns and selftest
    #[arg(long, global = true)]
    n: Option<usize>,
    /// JSON input file; standard input when absent
    #[arg(long, short, global = true)]
    input: Option<std::path::PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a symplectic element, Lagrangian frame or cone point
    Validate,
    /// Apply {"g"} to {"z"} (Möbius) or to {"lagrangian": {"frame"}}
    Act,
    /// Boundary map p on {"g"?, "y1", "y2"}
    #[command(name = "pmap")]
    PmapBoundary,
    /// Interior map P on {"g"?, "y1", "y2"}
    #[command(name = "Pmap")]
    PmapInterior,
    /// Preimage under P of {"z", "w"}
    Resolve,
    /// Preimage under p of {"l1", "l2"} on an open boundary stratum
    ResolveBoundary,
    /// Classify cone, closure or boundary strata
    Classify(ClassifyArgs),
    /// Seeded collision scan of p
    ScanInjectivity(ScanArgs),
    /// Seeded escape-sequence probe of p (necessary condition only)
    ProbeProperness(ProbeArgs),
    /// Run the invariant registry
    Selftest,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ClassifyArgs {
    /// {"y1", "y2"} -> cone labels and stratum
    #[arg(long)]
    cone: bool,
    /// {"frame", "side"} -> Interior | Boundary | Outside
    #[arg(long)]
    closure: bool,
    /// {"l1", "l2"} -> boundary stratum
    #[arg(long)]
    boundary: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StratumArg {
    WxBdry,
    BdryxBdry,
    BdryxW,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, value_enum, default_value = "wx-bdry")]
    stratum: StratumArg,
    /// Put the witness pair at sample 0 (n >= 2)
    #[arg(long)]
    inject_witness: bool,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[arg(long, default_value_t = 10.0)]
    radius: f64,
}

/// Certificate under construction.
struct Cert {
    command: &'static str,
    outputs: Value,
    residuals: BTreeMap<String, f64>,
    bounds: BTreeMap<String, f64>,
    failure: Option<String>,
}

impl Cert {
    fn new(command: &'static str) -> Self {
        Cert {
            command,
            outputs: json!({}),
            residuals: BTreeMap::new(),
            bounds: BTreeMap::new(),
            failure: None,
        }
    }

    fn residual(&mut self, name: &str, value: f64, bound: f64) {
        self.residuals.insert(name.into(), value);
        self.bounds.insert(name.into(), bound);
    }

    fn fail(&mut self, e: impl std::fmt::Display) {
        self.failure = Some(e.to_string());
    }
}

fn err_kind(e: &CrownError) -> &'static str {
    match e {
        CrownError::Input(_) => "invalid-input",
        CrownError::Domain(_) => "domain",
        CrownError::Validation { .. } => "validation",
        CrownError::ChartEscape { .. } => "chart-escape",
        CrownError::Numeric { .. } => "numeric",
        CrownError::Conditioning { .. } => "conditioning",
        CrownError::Unsupported(_) => "unsupported",
    }
}

fn field<'a>(v: &'a Value, k: &str) -> crate::Result<&'a Value> {
    v.get(k)
        .ok_or_else(|| CrownError::Input(format!("missing \"{k}\"")))
}

fn stratum_arg(s: StratumArg) -> ConeStratum {
    match s {
        StratumArg::WxBdry => ConeStratum::WxBdry,
        StratumArg::BdryxBdry => ConeStratum::BdryxBdry,
        StratumArg::BdryxW => ConeStratum::BdryxW,
    }
}

fn needs_input(c: &Command) -> bool {
    !matches!(
        c,
        Command::ScanInjectivity(_) | Command::ProbeProperness(_) | Command::Selftest
    )
}

/// Runs one invocation; returns the exit code and the text for standard output.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };

    let mut raw = Vec::new();
    let input = if needs_input(&cli.command) {
        let read = match &cli.common.input {
            Some(p) => std::fs::read(p).map(|b| raw = b),
            None => stdin.read_to_end(&mut raw).map(|_| ()),
        };
        if let Err(e) = read {
            return (2, malformed(&format!("cannot read input: {e}")));
        }
        match serde_json::from_slice::<Value>(&raw) {
            Ok(v) => Some(v),
            Err(e) => return (2, malformed(&format!("malformed JSON: {e}"))),
        }
    } else {
        None
    };

    let mut hasher = Sha256::new();
    for a in argv.iter().skip(1) {
        hasher.update(a.to_string_lossy().as_bytes());
        hasher.update([0u8]);
    }
    hasher.update(&raw);
    let digest = hex::encode(hasher.finalize());

    let c = &cli.common;
    let cert = dispatch(&cli.command, c, input.as_ref());
    let pass = cert.failure.is_none()
        && cert
            .residuals
            .iter()
            .all(|(k, r)| cert.bounds.get(k).is_some_and(|b| *r <= *b));
    let mut tolerances: BTreeMap<String, Value> = cert
        .bounds
        .iter()
        .map(|(k, b)| (k.clone(), json!(b)))
        .collect();
    tolerances.insert("tol".into(), json!(c.tol));
    tolerances.insert("boundary_tol".into(), json!(c.boundary_tol));
    let mut doc = json!({
        "command": cert.command,
        "inputs_digest": digest,
        "outputs": cert.outputs,
        "residuals": cert.residuals,
        "tolerances": tolerances,
        "seed": c.seed,
        "pass": pass,
    });
    if let Some(f) = cert.failure {
        doc["error"] = json!(f);
    }
    (if pass { 0 } else { 1 }, to_canonical_string(&doc) + "\n")
}

fn malformed(msg: &str) -> String {
    to_canonical_string(&json!({ "error": msg, "kind": "malformed-input", "pass": false })) + "\n"
}

fn dispatch(cmd: &Command, c: &Common, input: Option<&Value>) -> Cert {
    let name = match cmd {
        Command::Validate => "validate",
        Command::Act => "act",
        Command::PmapBoundary => "pmap",
        Command::PmapInterior => "Pmap",
        Command::Resolve => "resolve",
        Command::ResolveBoundary => "resolve-boundary",
        Command::Classify(_) => "classify",
        Command::ScanInjectivity(_) => "scan-injectivity",
        Command::ProbeProperness(_) => "probe-properness",
        Command::Selftest => "selftest",
    };
    let mut cert = Cert::new(name);
    let v = input.cloned().unwrap_or(Value::Null);
    let result = match cmd {
        Command::Validate => validate(&v, c, &mut cert),
        Command::Act => act_cmd(&v, c, &mut cert),
        Command::PmapBoundary => pmap(&v, c, &mut cert),
        Command::PmapInterior => pmap_interior(&v, c, &mut cert),
        Command::Resolve => resolve(&v, c, &mut cert),
        Command::ResolveBoundary => resolve_bdry(&v, c, &mut cert),
        Command::Classify(a) => classify(&v, a, c, &mut cert),
        Command::ScanInjectivity(a) => scan(a, c, &mut cert),
        Command::ProbeProperness(a) => probe(a, c, &mut cert),
        Command::Selftest => selftest(c, &mut cert),
    };
    if let Err(e) = result {
        cert.outputs = json!({ "error_kind": err_kind(&e) });
        cert.fail(e);
    }
    cert
}

fn validate(v: &Value, c: &Common, cert: &mut Cert) -> crate::Result<()> {
    if v.get("frame").is_some() {
        let l = decode_lagrangian(v)?;
        cert.outputs = json!({ "type": "lagrangian", "n": l.n() });
        cert.residual("isotropy", l.isotropy_residual(), c.tol);
    } else if v.get("y1").is_some() {
        let pt = decode_cone_point(v, c.tol)?;
        let (a, b) = pt.y.labels();
        cert.outputs = json!({ "type": "cone_point", "n": pt.y.n(), "labels": [a, b] });
        cert.residual("symplectic", pt.g.residual(), c.tol);
    } else {
        let m = decode_matrix(v)?;
        let g = SymplecticElement::validate(m, f64::INFINITY)?;
        cert.outputs = json!({ "type": "symplectic", "n": g.n(), "kind": g.kind() });
        cert.residual("symplectic", g.residual(), c.tol);
    }
    Ok(())
}

fn act_cmd(v: &Value, c: &Common, cert: &mut Cert) -> crate::Result<()> {
    let g = decode_symplectic(field(v, "g")?, c.tol)?;
    cert.residual("symplectic", g.residual(), c.tol);
    if let Some(z) = v.get("z") {
        let w = moebius(&g, &decode_sym(z)?, c.tol)?;
        cert.outputs = json!({ "z": encode_sym(&w) });
    } else {
        let l = decode_lagrangian(field(v, "lagrangian")?)?;
        let gl = act(&g, &l)?;
        cert.residual("isotropy", gl.isotropy_residual(), c.tol);
        cert.outputs = json!({ "lagrangian": encode_lagrangian(&gl) });
    }
    Ok(())
}

fn pmap(v: &Value, c: &Common, cert: &mut Cert) -> crate::Result<()> {
    let pt = decode_cone_point(v, c.tol)?;
    let (l1, l2) = p_boundary(&pt)?;
    let sigma = transversal(&l1, &l2, 0.0).1;
    let stratum = stratify_boundary(&l1, &l2, c.tol, c.boundary_tol).map(|b| b.stratum);
    cert.residual(
        "isotropy",
        l1.isotropy_residual().max(l2.isotropy_residual()),
        c.tol,
    );
    cert.outputs = json!({
        "l1": encode_lagrangian(&l1),
        "l2": encode_lagrangian(&l2),
        "sigma_min": sigma,
        "stratum": stratum,
    });
    Ok(())
}

fn pmap_interior(v: &Value, c: &Common, cert: &mut Cert) -> crate::Result<()> {
    let pt = decode_cone_point(v, c.tol)?;
    let (z, w) = p_interior(&pt, c.tol)?;
    cert.residual("symplectic", pt.g.residual(), c.tol);
    cert.outputs = json!({ "z": encode_sym(&z), "w": encode_sym(&w) });
    Ok(())
}

fn resolve(v: &Value, c: &Common, cert: &mut Cert) -> crate::Result<()> {
    let pt = CrownPoint::new(
        decode_sym(field(v, "z")?)?,
        decode_sym(field(v, "w")?)?,
        c.tol,
    )?;
    let out = resolve_interior(&pt, c.tol)?;
    let (z, w) = p_interior(&out, c.tol)?;
    cert.residual("round_trip", pt.dist(&z, &w) / (1.0 + pt.norm()), c.tol);
    cert.outputs = json!({ "point": encode_cone_point(&out) });
    Ok(())
}

fn resolve_bdry(v: &Value, c: &Common, cert: &mut Cert) -> crate::Result<()> {
    let l1 = decode_lagrangian(field(v, "l1")?)?;
    let l2 = decode_lagrangian(field(v, "l2")?)?;
    let bp = stratify_boundary(&l1, &l2, c.tol, c.boundary_tol)
        .ok_or_else(|| CrownError::Domain("pair is not a boundary point of the crown".into()))?;
    let out = resolve_boundary(&bp, c.tol, c.boundary_tol)?;
    let (m1, m2) = p_boundary(&out)?;
    cert.residual("round_trip", m1.distance(&l1).max(m2.distance(&l2)), c.tol);
    cert.outputs = json!({ "point": encode_cone_point(&out), "stratum": bp.stratum });
    Ok(())
}

fn classify(v: &Value, a: &ClassifyArgs, c: &Common, cert: &mut Cert) -> crate::Result<()> {
    if a.cone {
        let y = decode_cone_element(v, c.tol)?;
        let stratum = match stratify_cone(&y) {
            Ok(s) => json!(s),
            Err(_) => json!("Interior"),
        };
        cert.outputs = json!({ "labels": [y.labels().0, y.labels().1], "stratum": stratum });
    } else if a.closure {
        let l = decode_lagrangian(v)?;
        let side = match v.get("side").and_then(Value::as_str).unwrap_or("X") {
            "X" => Side::X,
            "Xbar" => Side::Xbar,
            s => {
                return Err(CrownError::Input(format!(
                    "side must be \"X\" or \"Xbar\", got \"{s}\""
                )))
            }
        };
        cert.outputs = json!({ "label": classify_closure(&l, side, c.boundary_tol), "side": side });
    } else {
        let l1 = decode_lagrangian(field(v, "l1")?)?;
        let l2 = decode_lagrangian(field(v, "l2")?)?;
        let bp = stratify_boundary(&l1, &l2, c.tol, c.boundary_tol);
        cert.outputs = json!({
            "stratum": bp.as_ref().map_or(json!("NotBoundary"), |b| json!(b.stratum)),
            "sigma_min": transversal(&l1, &l2, 0.0).1,
        });
    }
    Ok(())
}

fn scan(a: &ScanArgs, c: &Common, cert: &mut Cert) -> crate::Result<()> {
    let n = c.n.unwrap_or(1);
    if n == 0 {
        return Err(CrownError::Input("--n must be at least 1".into()));
    }
    let r = injectivity_scan(
        n,
        stratum_arg(a.stratum),
        c.samples.unwrap_or(500),
        c.seed,
        1e-6,
        c.boundary_tol,
        a.inject_witness,
    );
    cert.residual("violations", r.violations.len() as f64, 0.0);
    // collisions are normative only for n = 1
    if n == 1 {
        cert.residual("collisions", r.collisions.len() as f64, 0.0);
    }
    cert.outputs = encode_collision_report(&r);
    Ok(())
}

fn probe(a: &ProbeArgs, c: &Common, cert: &mut Cert) -> crate::Result<()> {
    let n = c.n.unwrap_or(1);
    if n == 0 || !(a.radius > 1.0) {
        return Err(CrownError::Input("need --n >= 1 and --radius > 1".into()));
    }
    let r = properness_probe(n, a.radius, c.samples.unwrap_or(100), c.seed);
    cert.residual("violations", r.violations.len() as f64, 0.0);
    cert.outputs = encode_probe_report(&r);
    Ok(())
}

fn selftest(c: &Common, cert: &mut Cert) -> crate::Result<()> {
    let n = c.n.unwrap_or(2);
    if n == 0 {
        return Err(CrownError::Input("--n must be at least 1".into()));
    }
    let ctx = Context {
        n,
        seed: c.seed,
        tol: c.tol,
        boundary_tol: c.boundary_tol,
    };
    let outcomes = run_all(&ctx);
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    let registered = outcomes.iter().filter(|o| o.module != "cli").count();
    cert.residual("failed_invariants", failed as f64, 0.0);
    cert.residual(
        "registry_size_mismatch",
        registered.abs_diff(REGISTRY_SIZE) as f64,
        0.0,
    );
    cert.outputs = json!({ "n": n, "registry_size": REGISTRY_SIZE, "checked": outcomes.len(), "invariants": outcomes });
    Ok(())
}
