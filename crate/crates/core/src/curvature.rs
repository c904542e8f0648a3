//! Curvatures of the first and second fundamental forms.
//!
//! For `α = f′`, `β = g′` and `Δ = 1 + α² + β²`:
//!
//! * `K = α′β′ / Δ²` and `H = ((1 + β²)α′ + (1 + α²)β′) / (2Δ^{3/2})`;
//! * `K_II`, the Gaussian curvature of the metric `II`, is computed twice:
//!   from the expanded twelve-term numerator ([`kii_specialized`]) and from
//!   the Brioschi determinant formula applied to symbolic partials of
//!   `e = α′/√Δ`, `g = β′/√Δ` ([`kii_brioschi`]);
//! * `H_II = −H − ¼ Δ_II log K`, the mean curvature of `II`, from the closed
//!   form of the divergence sum ([`hii`]).

use thiserror::Error;

use crate::expr::{differentiate, Expr};
use crate::geometry::{forms_at, FormBundle, GeometryError, SurfaceDef};

/// Step for the mixed central difference used by the ladder identities.
pub const MIXED_STEP: f64 = 1e-4;

/// Below this magnitude the right-hand side of the second ladder identity is
/// treated as zero and the ratio is undefined.
pub const RATIO_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CurvatureError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("second fundamental form is degenerate at ({u}, {v})")]
    Degenerate { u: f64, v: f64 },
    #[error("{quantity} vanishes at ({u}, {v})")]
    Singular { u: f64, v: f64, quantity: &'static str },
    #[error("ladder ratio undefined at ({u}, {v}): right-hand side is zero")]
    RatioUndefined { u: f64, v: f64 },
}

/// All four curvatures at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample {
    pub u: f64,
    pub v: f64,
    pub gaussian: f64,
    pub mean: f64,
    /// `None` where the second fundamental form is degenerate.
    pub kii: Option<f64>,
    pub hii: Option<f64>,
    pub degenerate_ii: bool,
    /// `II` is indefinite (`α′β′ < 0`, equivalently `K < 0`).
    pub indefinite_ii: bool,
}

fn nondegenerate(s: &SurfaceDef, u: f64, v: f64) -> Result<FormBundle, CurvatureError> {
    let b = forms_at(s, u, v)?;
    if b.nondegenerate {
        Ok(b)
    } else {
        Err(CurvatureError::Degenerate { u, v })
    }
}

pub fn gauss_mean_from(b: &FormBundle) -> (f64, f64) {
    let (a, a1) = (b.alpha.value, b.alpha.d1);
    let (c, c1) = (b.beta.value, b.beta.d1);
    let d = b.delta;
    let k = a1 * c1 / (d * d);
    let h = ((1.0 + c * c) * a1 + (1.0 + a * a) * c1) / (2.0 * d * d.sqrt());
    (k, h)
}

/// Gaussian and mean curvature; defined even where `II` is degenerate.
pub fn gauss_mean(s: &SurfaceDef, u: f64, v: f64) -> Result<(f64, f64), CurvatureError> {
    Ok(gauss_mean_from(&forms_at(s, u, v)?))
}

/// The twelve-term numerator of `K_II = num / (4α′β′Δ^{3/2})`.
pub fn kii_numerator(b: &FormBundle) -> f64 {
    let (a, a1, a2) = (b.alpha.value, b.alpha.d1, b.alpha.d2);
    let (c, c1, c2) = (b.beta.value, b.beta.d1, b.beta.d2);
    let (aa, cc) = (a * a, c * c);
    -2.0 * aa * a1 * a1 * c1 - 2.0 * a1 * cc * c1 * c1
        + 2.0 * aa * a1 * c1 * c1
        + 2.0 * a1 * a1 * cc * c1
        + 2.0 * a1 * c1 * c1
        + 2.0 * a1 * a1 * c1
        + a1 * c * c2
        + a * a2 * c1
        + aa * a1 * c * c2
        + a * a2 * cc * c1
        + a1 * cc * c * c2
        + aa * a * a2 * c1
}

pub fn kii_from(b: &FormBundle) -> f64 {
    let d = b.delta;
    kii_numerator(b) / (4.0 * b.curvature_product() * d * d.sqrt())
}

/// `K_II` from the expanded numerator.
pub fn kii_specialized(s: &SurfaceDef, u: f64, v: f64) -> Result<f64, CurvatureError> {
    Ok(kii_from(&nondegenerate(s, u, v)?))
}

/// Coefficients of a metric `e du² + 2f du dv + g dv²` with the partial
/// derivatives the Brioschi formula needs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MetricPartials {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub e_u: f64,
    pub e_v: f64,
    pub e_vv: f64,
    pub f_u: f64,
    pub f_v: f64,
    pub f_uv: f64,
    pub g_u: f64,
    pub g_v: f64,
    pub g_uu: f64,
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Gaussian curvature of a metric by the Brioschi formula.
pub fn brioschi(m: &MetricPartials) -> f64 {
    let m1 = [
        [-0.5 * m.e_vv + m.f_uv - 0.5 * m.g_uu, 0.5 * m.e_u, m.f_u - 0.5 * m.e_v],
        [m.f_v - 0.5 * m.g_u, m.e, m.f],
        [0.5 * m.g_v, m.f, m.g],
    ];
    let m2 = [
        [0.0, 0.5 * m.e_v, 0.5 * m.g_u],
        [0.5 * m.e_v, m.e, m.f],
        [0.5 * m.g_u, m.f, m.g],
    ];
    let w = m.e * m.g - m.f * m.f;
    (det3(m1) - det3(m2)) / (w * w)
}

/// Symbolic `e(u, v)`, `g(u, v)` of the second fundamental form and the
/// partials used by the Brioschi formula (`f ≡ 0`).
#[derive(Debug)]
pub struct BrioschiTrees {
    e: Expr,
    g: Expr,
    e_u: Expr,
    e_v: Expr,
    e_vv: Expr,
    g_u: Expr,
    g_v: Expr,
    g_uu: Expr,
}

impl BrioschiTrees {
    fn build(s: &SurfaceDef) -> BrioschiTrees {
        let alpha = s.f().derivative(1).clone();
        let alpha1 = s.f().derivative(2).clone();
        let beta = s.g().derivative(1).clone();
        let beta1 = s.g().derivative(2).clone();
        let delta = Expr::constant(1.0) + alpha.powi(2) + beta.powi(2);
        let root = delta.sqrt();
        let e = alpha1 / root.clone();
        let g = beta1 / root;
        let e_u = differentiate(&e, "u");
        let e_v = differentiate(&e, "v");
        let e_vv = differentiate(&e_v, "v");
        let g_u = differentiate(&g, "u");
        let g_v = differentiate(&g, "v");
        let g_uu = differentiate(&g_u, "u");
        BrioschiTrees {
            e,
            g,
            e_u,
            e_v,
            e_vv,
            g_u,
            g_v,
            g_uu,
        }
    }

    fn eval(&self, s: &SurfaceDef, u: f64, v: f64) -> Result<MetricPartials, GeometryError> {
        let env = s.env(u, v);
        let at = |e: &Expr| e.eval(&env).map_err(s.wrap(u, v));
        Ok(MetricPartials {
            e: at(&self.e)?,
            g: at(&self.g)?,
            e_u: at(&self.e_u)?,
            e_v: at(&self.e_v)?,
            e_vv: at(&self.e_vv)?,
            g_u: at(&self.g_u)?,
            g_v: at(&self.g_v)?,
            g_uu: at(&self.g_uu)?,
            ..MetricPartials::default()
        })
    }
}

/// Partials of the second fundamental form at a point, from exact symbolic
/// derivatives through `Δ`.
pub fn second_form_partials(s: &SurfaceDef, u: f64, v: f64) -> Result<MetricPartials, CurvatureError> {
    let trees = s.brioschi.get_or_init(|| BrioschiTrees::build(s));
    Ok(trees.eval(s, u, v)?)
}

/// `K_II` from the Brioschi formula with `(e, f, g)` in place of `(E, F, G)`.
pub fn kii_brioschi(s: &SurfaceDef, u: f64, v: f64) -> Result<f64, CurvatureError> {
    nondegenerate(s, u, v)?;
    Ok(brioschi(&second_form_partials(s, u, v)?))
}

/// Closed-form divergence sum `Σ = Σ_ij ∂_i(√|det II| h^ij ∂_j ln√|K|)`.
///
/// Where `II` is indefinite the square roots are taken of absolute values,
/// which introduces the sign factors `sgn α′` and `sgn β′`.
pub fn divergence_sum(b: &FormBundle) -> f64 {
    let d = b.delta;
    let bracket = |a: f64, a1: f64, a2: f64, a3: f64| {
        (2.0 * a1 * a3 - 3.0 * a2 * a2) / (a1 * a1) * d * d - (4.0 * a * a2 + 8.0 * a1 * a1) * d
            + 16.0 * a * a * a1 * a1
    };
    let (a, c) = (b.alpha, b.beta);
    let left = a.d1.signum() * (c.d1 / a.d1).abs().sqrt() * bracket(a.value, a.d1, a.d2, a.d3);
    let right = c.d1.signum() * (a.d1 / c.d1).abs().sqrt() * bracket(c.value, c.d1, c.d2, c.d3);
    (left + right) / (4.0 * d * d)
}

pub fn hii_from(b: &FormBundle) -> f64 {
    let (_, h) = gauss_mean_from(b);
    let root_det = (b.curvature_product() / b.delta).abs().sqrt();
    -h - divergence_sum(b) / (2.0 * root_det)
}

/// Second mean curvature `H_II`. For indefinite `II` the value uses
/// `ln√|K|`; see [`CurvatureSample::indefinite_ii`].
pub fn hii(s: &SurfaceDef, u: f64, v: f64) -> Result<f64, CurvatureError> {
    Ok(hii_from(&nondegenerate(s, u, v)?))
}

pub fn hii_residual_from(b: &FormBundle) -> f64 {
    let (a, a1, a2, a3) = (b.alpha.value, b.alpha.d1, b.alpha.d2, b.alpha.d3);
    let (c, c1, c2, c3) = (b.beta.value, b.beta.d1, b.beta.d2, b.beta.d3);
    let d = b.delta;
    (2.0 * a1 * a3 - 3.0 * a2 * a2) / (2.0 * a1 * a1 * a1) + (2.0 * c1 * c3 - 3.0 * c2 * c2) / (2.0 * c1 * c1 * c1)
        - (2.0 / d) * ((a1 * a1 + a * a2) / a1 + (c1 * c1 + c * c2) / c1)
        + (6.0 / (d * d)) * (a * a * a1 + c * c * c1)
}

/// Left side of the condition equivalent to `H_II = 0`. It equals
/// `−4 H_II / √Δ`.
pub fn hii_residual(s: &SurfaceDef, u: f64, v: f64) -> Result<f64, CurvatureError> {
    Ok(hii_residual_from(&nondegenerate(s, u, v)?))
}

/// `K_II − λH`.
pub fn weingarten_residual(s: &SurfaceDef, lambda: f64, u: f64, v: f64) -> Result<f64, CurvatureError> {
    let b = nondegenerate(s, u, v)?;
    let (_, h) = gauss_mean_from(&b);
    Ok(kii_from(&b) - lambda * h)
}

pub fn sample(s: &SurfaceDef, u: f64, v: f64) -> Result<CurvatureSample, CurvatureError> {
    let b = forms_at(s, u, v)?;
    let (gaussian, mean) = gauss_mean_from(&b);
    let (kii, hii) = if b.nondegenerate {
        (Some(kii_from(&b)), Some(hii_from(&b)))
    } else {
        (None, None)
    };
    Ok(CurvatureSample {
        u,
        v,
        gaussian,
        mean,
        kii,
        hii,
        degenerate_ii: !b.nondegenerate,
        indefinite_ii: b.nondegenerate && b.curvature_product() < 0.0,
    })
}

/// Auxiliary one-variable functions whose successive mixed derivatives
/// eliminate `Δ` from the minimality condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderRecord {
    /// `(α′² + αα″)/α′`
    pub phi: f64,
    pub psi: f64,
    /// `α²α′`
    pub p_small: f64,
    pub q_small: f64,
    /// `φ′/(2αα′)`
    pub f_cap: f64,
    pub g_cap: f64,
    /// `φ + 3p′/(2αα′)`
    pub p_cap: f64,
    pub q_cap: f64,
    /// `F′/(2αα′)`
    pub a_cap: f64,
    pub b_cap: f64,
    /// `F − P′/(2αα′)`
    pub a_small: f64,
    pub b_small: f64,
}

#[derive(Debug)]
struct LadderSide {
    phi: Expr,
    p: Expr,
    f: Expr,
    p_cap: Expr,
    a_cap: Expr,
    a_small: Expr,
}

impl LadderSide {
    fn build(alpha: &Expr, alpha1: &Expr, alpha2: &Expr, var: &str) -> LadderSide {
        let phi = (alpha1.clone().powi(2) + alpha.clone() * alpha2.clone()) / alpha1.clone();
        let p = alpha.clone().powi(2) * alpha1.clone();
        let two_aa = || Expr::constant(2.0) * alpha.clone() * alpha1.clone();
        let f = differentiate(&phi, var) / two_aa();
        let p_cap = phi.clone() + Expr::constant(3.0) * differentiate(&p, var) / two_aa();
        let a_cap = differentiate(&f, var) / two_aa();
        let a_small = f.clone() - differentiate(&p_cap, var) / two_aa();
        LadderSide {
            phi,
            p,
            f,
            p_cap,
            a_cap,
            a_small,
        }
    }
}

#[derive(Debug)]
pub struct LadderTrees {
    u: LadderSide,
    v: LadderSide,
}

impl LadderTrees {
    fn build(s: &SurfaceDef) -> LadderTrees {
        let (f, g) = (s.f(), s.g());
        LadderTrees {
            u: LadderSide::build(f.derivative(1), f.derivative(2), f.derivative(3), "u"),
            v: LadderSide::build(g.derivative(1), g.derivative(2), g.derivative(3), "v"),
        }
    }
}

fn ladder_bundle(s: &SurfaceDef, u: f64, v: f64) -> Result<FormBundle, CurvatureError> {
    let b = forms_at(s, u, v)?;
    let checks = [
        (b.alpha.value, "f′"),
        (b.beta.value, "g′"),
        (b.alpha.d1, "f″"),
        (b.beta.d1, "g″"),
    ];
    for (x, quantity) in checks {
        if x == 0.0 {
            return Err(CurvatureError::Singular { u, v, quantity });
        }
    }
    Ok(b)
}

/// Evaluates the ladder quantities. Their derivatives are taken
/// symbolically, which reaches the fifth derivatives of `f` and `g`.
pub fn ladder_record(s: &SurfaceDef, u: f64, v: f64) -> Result<LadderRecord, CurvatureError> {
    ladder_bundle(s, u, v)?;
    let trees = s.ladder.get_or_init(|| LadderTrees::build(s));
    let env = s.env(u, v);
    let at = |e: &Expr| e.eval(&env).map_err(|e| CurvatureError::from(s.wrap(u, v)(e)));
    Ok(LadderRecord {
        phi: at(&trees.u.phi)?,
        psi: at(&trees.v.phi)?,
        p_small: at(&trees.u.p)?,
        q_small: at(&trees.v.p)?,
        f_cap: at(&trees.u.f)?,
        g_cap: at(&trees.v.f)?,
        p_cap: at(&trees.u.p_cap)?,
        q_cap: at(&trees.v.p_cap)?,
        a_cap: at(&trees.u.a_cap)?,
        b_cap: at(&trees.v.a_cap)?,
        a_small: at(&trees.u.a_small)?,
        b_small: at(&trees.v.a_small)?,
    })
}

fn mixed_partial<F>(u: f64, v: f64, h: f64, mut w: F) -> Result<f64, CurvatureError>
where
    F: FnMut(f64, f64) -> Result<f64, CurvatureError>,
{
    let pp = w(u + h, v + h)?;
    let pm = w(u + h, v - h)?;
    let mp = w(u - h, v + h)?;
    let mm = w(u - h, v - h)?;
    Ok((pp - pm - mp + mm) / (4.0 * h * h))
}

/// `−(2/Δ)(φ + ψ) + (6/Δ²)(p + q)`, the `Δ`-dependent part of the
/// minimality residual, from jets only.
pub fn coupled_part(b: &FormBundle) -> f64 {
    let (a, a1, a2) = (b.alpha.value, b.alpha.d1, b.alpha.d2);
    let (c, c1, c2) = (b.beta.value, b.beta.d1, b.beta.d2);
    let d = b.delta;
    let phi = (a1 * a1 + a * a2) / a1;
    let psi = (c1 * c1 + c * c2) / c1;
    -(2.0 / d) * (phi + psi) + (6.0 / (d * d)) * (a * a * a1 + c * c * c1)
}

/// First ladder identity.
///
/// `lhs` is the numeric mixed partial `∂²/∂v∂u` of [`coupled_part`] scaled by
/// `Δ⁴/(8αα′ββ′)`; `rhs` is `(F + G)Δ² − 2(P + Q)Δ + 18(p + q)` from
/// [`ladder_record`]. They agree at every point, whether or not `H_II`
/// vanishes.
pub fn ladder_identity_first(s: &SurfaceDef, u: f64, v: f64) -> Result<(f64, f64), CurvatureError> {
    let b = ladder_bundle(s, u, v)?;
    let r = ladder_record(s, u, v)?;
    let mixed = mixed_partial(u, v, MIXED_STEP, |x, y| Ok(coupled_part(&forms_at(s, x, y)?)))?;
    let d = b.delta;
    let scale = d.powi(4) / (8.0 * b.alpha.value * b.alpha.d1 * b.beta.value * b.beta.d1);
    Ok((mixed * scale, first_rung(&r, d)))
}

fn first_rung(r: &LadderRecord, d: f64) -> f64 {
    (r.f_cap + r.g_cap) * d * d - 2.0 * (r.p_cap + r.q_cap) * d + 18.0 * (r.p_small + r.q_small)
}

/// Second ladder identity.
///
/// `lhs` is the numeric mixed partial of the first rung divided by
/// `4αα′ββ′`; `rhs` is `(A + B)Δ + a + b`. The ratio `lhs / rhs` is the
/// constant 2 at every point.
pub fn ladder_identity_second(s: &SurfaceDef, u: f64, v: f64) -> Result<(f64, f64, f64), CurvatureError> {
    let b = ladder_bundle(s, u, v)?;
    let r = ladder_record(s, u, v)?;
    let mixed = mixed_partial(u, v, MIXED_STEP, |x, y| {
        let rec = ladder_record(s, x, y)?;
        Ok(first_rung(&rec, forms_at(s, x, y)?.delta))
    })?;
    let lhs = mixed / (4.0 * b.alpha.value * b.alpha.d1 * b.beta.value * b.beta.d1);
    let rhs = (r.a_cap + r.b_cap) * b.delta + r.a_small + r.b_small;
    if rhs.abs() < RATIO_FLOOR {
        return Err(CurvatureError::RatioUndefined { u, v });
    }
    Ok((lhs, rhs, lhs / rhs))
}
