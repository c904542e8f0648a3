//! Text renderings: CSV fields, OBJ meshes, report tables and JSON lines.

use std::fmt::Write;

use serde::Serialize;
use tsurf_core::catalog::VerifyReport;
use tsurf_core::polynomial::{PowerSolution, ScanRow};
use tsurf_core::{CatalogEntry, CurvatureSample, FormBundle, Rational};

pub const FIELD_HEADER: &str = "u,v,z,E,F,G,e,f,g,K,H,K_II,H_II,nondegenerate";

/// Seventeen significant digits, or `nan`.
pub fn real(x: f64) -> String {
    if x.is_finite() {
        // no negative zero in the output
        format!("{:.16e}", x + 0.0)
    } else {
        "nan".to_string()
    }
}

fn optional(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".to_string(), real)
}

pub fn field_row(out: &mut String, z: f64, b: &FormBundle, s: &CurvatureSample) {
    let cells = [
        real(b.u),
        real(b.v),
        real(z),
        real(b.first.e),
        real(b.first.f),
        real(b.first.g),
        real(b.second.e),
        real(b.second.f),
        real(b.second.g),
        real(s.gaussian),
        real(s.mean),
        optional(s.kii),
        optional(s.hii),
    ];
    out.push_str(&cells.join(","));
    out.push(',');
    out.push_str(if b.nondegenerate { "true" } else { "false" });
    out.push('\n');
}

/// Wavefront OBJ for a `nu × nv` heightfield whose vertices are listed with
/// `v` varying fastest. Each grid cell becomes two triangles with
/// counter-clockwise winding seen from `+z`.
pub fn obj(vertices: &[(f64, f64, f64)], nu: usize, nv: usize) -> String {
    let mut out = String::new();
    for (u, v, z) in vertices {
        let _ = writeln!(out, "v {} {} {}", real(*u), real(*v), real(*z));
    }
    let index = |i: usize, j: usize| i * nv + j + 1;
    for i in 0..nu.saturating_sub(1) {
        for j in 0..nv.saturating_sub(1) {
            let (a, b, c, d) = (index(i, j), index(i + 1, j), index(i + 1, j + 1), index(i, j + 1));
            let _ = writeln!(out, "f {a} {b} {c}");
            let _ = writeln!(out, "f {a} {c} {d}");
        }
    }
    out
}

pub fn rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Serialize)]
struct VerifyLine<'a> {
    name: &'a str,
    params: &'a std::collections::BTreeMap<String, f64>,
    relation: String,
    max_residual: f64,
    worst_u: f64,
    worst_v: f64,
    pass: bool,
}

pub fn verify_json(r: &VerifyReport) -> String {
    let line = VerifyLine {
        name: r.name,
        params: &r.params,
        relation: r.relation.to_string(),
        max_residual: r.max_abs_residual,
        worst_u: r.worst_point.0,
        worst_v: r.worst_point.1,
        pass: r.pass,
    };
    serde_json::to_string(&line).expect("report serializes")
}

pub fn params_text(params: &std::collections::BTreeMap<String, f64>) -> String {
    let parts: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    parts.join(",")
}

pub const VERIFY_HEADER: &str = "entry                      params                   relation                   max_residual  worst_u    worst_v    points  status";

pub fn verify_row(r: &VerifyReport) -> String {
    format!(
        "{:<26} {:<24} {:<26} {:>12.3e}  {:>9.4}  {:>9.4}  {:>6}  {}",
        r.name,
        params_text(&r.params),
        r.relation.to_string(),
        r.max_abs_residual,
        r.worst_point.0,
        r.worst_point.1,
        r.n_points,
        if r.pass { "pass" } else { "FAIL" }
    )
}

#[derive(Serialize)]
struct CatalogLine<'a> {
    name: &'a str,
    params: std::collections::BTreeMap<String, f64>,
    relation: String,
    f: String,
    g: String,
    domain: [f64; 4],
    constraints: &'a str,
    provenance: &'a str,
}

pub fn catalog_json(e: &CatalogEntry) -> String {
    let params = e.defaults();
    let d = e.domain(&params).expect("default parameters are valid");
    let (f, g) = e.profiles();
    let line = CatalogLine {
        name: e.name,
        relation: e.relation.to_string(),
        f,
        g,
        domain: [d.u_min, d.u_max, d.v_min, d.v_max],
        constraints: e.constraints,
        provenance: e.provenance,
        params,
    };
    serde_json::to_string(&line).expect("entry serializes")
}

pub const CATALOG_HEADER: &str =
    "entry                      relation                   params                   profiles";

pub fn catalog_row(e: &CatalogEntry) -> String {
    let (f, g) = e.profiles();
    format!(
        "{:<26} {:<26} {:<24} f = {f}; g = {g}",
        e.name,
        e.relation.to_string(),
        params_text(&e.defaults())
    )
}

#[derive(Serialize)]
struct ScanLine {
    m: u32,
    n: u32,
    draw: u32,
    status: &'static str,
    witness_u: u32,
    witness_v: u32,
    coeff: String,
}

pub fn scan_json(r: &ScanRow) -> String {
    let line = ScanLine {
        m: r.m,
        n: r.n,
        draw: r.draw,
        status: r.status.as_str(),
        witness_u: r.witness.0,
        witness_v: r.witness.1,
        coeff: rational(&r.coeff),
    };
    serde_json::to_string(&line).expect("row serializes")
}

pub const SCAN_HEADER: &str = "   m    n  draw  status    witness_u  witness_v  coeff";

pub fn scan_row(r: &ScanRow) -> String {
    format!(
        "{:>4} {:>4} {:>5}  {:<8}  {:>9}  {:>9}  {}",
        r.m,
        r.n,
        r.draw,
        r.status.as_str(),
        r.witness.0,
        r.witness.1,
        rational(&r.coeff)
    )
}

#[derive(Serialize)]
struct PowerLine {
    p: String,
    q: String,
    a: String,
    b: String,
}

pub fn power_json(s: &PowerSolution) -> String {
    let line = PowerLine {
        p: rational(&s.p),
        q: rational(&s.q),
        a: rational(&s.a),
        b: rational(&s.b),
    };
    serde_json::to_string(&line).expect("solution serializes")
}

pub fn power_row(s: &PowerSolution) -> String {
    format!(
        "p = {:<6} q = {:<6} a = {:<6} b = {}",
        rational(&s.p),
        rational(&s.q),
        rational(&s.a),
        rational(&s.b)
    )
}
