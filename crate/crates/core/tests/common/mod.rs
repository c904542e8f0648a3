//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tsurf_core::{make_surface, Domain, SurfaceDef};

/// `(e, g, K)` from `f″`, `g″` and the slopes only.
fn metric(s: &SurfaceDef, u: f64, v: f64) -> (f64, f64, f64) {
    let a = s.f().eval(1, u, s.params()).unwrap();
    let a1 = s.f().eval(2, u, s.params()).unwrap();
    let b = s.g().eval(1, v, s.params()).unwrap();
    let b1 = s.g().eval(2, v, s.params()).unwrap();
    let w = (1.0 + a * a + b * b).sqrt();
    let (e, g) = (a1 / w, b1 / w);
    (e, g, e * g / (w * w))
}

/// `H_II` as `−H − (1 / 2√|det II|) Σ ∂_i(√|det II| h^ij ∂_j ln√|K|)` with
/// every derivative taken by nested central differences of the metric.
pub fn hii_by_divergence(s: &SurfaceDef, u: f64, v: f64, h: f64) -> f64 {
    let log_root_k = |u: f64, v: f64| 0.5 * metric(s, u, v).2.abs().ln();
    let flux = |u: f64, v: f64| {
        let (e, g, _) = metric(s, u, v);
        let root = (e * g).abs().sqrt();
        let du = (log_root_k(u + h, v) - log_root_k(u - h, v)) / (2.0 * h);
        let dv = (log_root_k(u, v + h) - log_root_k(u, v - h)) / (2.0 * h);
        (root * du / e, root * dv / g)
    };
    let div = (flux(u + h, v).0 - flux(u - h, v).0) / (2.0 * h) + (flux(u, v + h).1 - flux(u, v - h).1) / (2.0 * h);
    let (e, g, _) = metric(s, u, v);
    let a = s.f().eval(1, u, s.params()).unwrap();
    let b = s.g().eval(1, v, s.params()).unwrap();
    let d = 1.0 + a * a + b * b;
    // H = (E g + G e) / 2 det I with E = 1 + α², G = 1 + β², F f = 0
    let mean = ((1.0 + a * a) * g + (1.0 + b * b) * e) / (2.0 * d);
    -mean - div / (2.0 * (e * g).abs().sqrt())
}

/// Central difference `(φ(x + h) − φ(x − h)) / 2h` with `h = 1e-5·max(1, |x|)`.
pub fn central_difference(phi: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = 1e-5 * x.abs().max(1.0);
    (phi(x + h) - phi(x - h)) / (2.0 * h)
}

/// Smooth profile built from random terms, paired with its variable.
fn random_profile(rng: &mut ChaCha8Rng, var: &str) -> String {
    let mut c = || (rng.gen_range(0.3..1.5) * 100.0f64).round() / 100.0;
    let (a, b, k, m, n) = (c(), c(), c(), c(), c());
    match rng.gen_range(0..4) {
        0 => format!("{a}*{var}^3 + {b}*{var}^2 + {k}*sin({m}*{var})"),
        1 => format!("{a}*exp({k}*{var}) + {b}*{var}^2 - {n}*{var}"),
        2 => format!("{a}*cosh({k}*{var}) + {b}*sin({m}*{var})"),
        _ => format!("{a}*log(2 + cos({k}*{var})) + {b}*{var}^4 + {n}*{var}^2"),
    }
}

/// A pseudo-random smooth surface on `(−1, 1)²`.
pub fn random_surface(seed: u64) -> SurfaceDef {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_profile(&mut rng, "u");
    let g = random_profile(&mut rng, "v");
    make_surface(&f, &g, &BTreeMap::new(), Domain::square(-1.0, 1.0).unwrap()).unwrap()
}

/// Points of `s` where `|α′β′|` is comfortably away from zero.
pub fn nondegenerate_points(s: &SurfaceDef, n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = s.domain();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let u = d.u_min + (d.u_max - d.u_min) * rng.gen_range(0.025..0.975);
        let v = d.v_min + (d.v_max - d.v_min) * rng.gen_range(0.025..0.975);
        let b = tsurf_core::forms_at(s, u, v).unwrap();
        if b.curvature_product().abs() > 1e-3 {
            out.push((u, v));
        }
    }
    out
}
