//! Classified translation surfaces and the curvature relations they satisfy.
//!
//! Each [`CatalogEntry`] carries its defining profiles as expression text in
//! its named parameters, a domain generator that keeps a margin from every
//! singular set of those profiles, and the relation to verify on that domain.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::curvature::{gauss_mean_from, hii_from, kii_from, CurvatureError};
use crate::expr::{differentiate, parse, Expr, ExprError};
use crate::geometry::{forms_at, make_surface, Domain, GeometryError, SurfaceDef};

/// Distance kept from poles and zero sets of the defining functions.
pub const MARGIN: f64 = 0.1;

/// Default pass threshold for relation residuals.
pub const RESIDUAL_TOL: f64 = 1e-8;

pub type Params = BTreeMap<String, f64>;

type Interval = (f64, f64);
type Point = (f64, f64);

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("entry `{entry}` has no parameter `{name}`")]
    UnknownParameter { entry: &'static str, name: String },
    #[error("parameters rejected for `{entry}`: {reason}")]
    Constraint { entry: &'static str, reason: String },
    #[error("grid size must be at least 2, got {0}")]
    GridTooSmall(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error("ODE `{family}`: {source}")]
    Ode { family: &'static str, source: ExprError },
    #[error("ODE `{family}`: sample {x} outside ({lo}, {hi})")]
    OdeSample {
        family: &'static str,
        x: f64,
        lo: f64,
        hi: f64,
    },
}

/// Curvature relation an entry must satisfy on its domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relation {
    /// `K_II = λH`; with `vanishing` both sides are zero, so the relation
    /// holds for every `λ` at once.
    KiiEqualsLambdaH {
        lambda: f64,
        vanishing: bool,
    },
    KiiZero,
    DegenerateII,
}

impl Relation {
    pub fn is_degenerate(self) -> bool {
        matches!(self, Relation::DegenerateII)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::KiiEqualsLambdaH { lambda, vanishing } => {
                if *lambda == 1.0 {
                    f.write_str("K_II = H")?;
                } else {
                    write!(f, "K_II = {lambda}H")?;
                }
                if *vanishing {
                    f.write_str(", both zero")?;
                }
                Ok(())
            }
            Relation::KiiZero => f.write_str("K_II = 0"),
            Relation::DegenerateII => f.write_str("degenerate"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
}

/// Shape of a one-variable profile, which fixes where it is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Window {
    /// `log(sinh(k x))`: `k x` kept in `(0.2, 2.9)`.
    Sinh,
    /// `log(cosh(k x))`: `k x` kept in `(−2, 2)`.
    Cosh,
    /// `log(cos(k x))`: `k x` kept in `(−1.4, 1.4)`.
    Cos,
}

impl Window {
    fn interval(self, k: f64) -> (f64, f64) {
        let k = k.abs();
        match self {
            Window::Sinh => ((0.2 / k).max(MARGIN), 2.9 / k),
            Window::Cosh => (-2.0 / k, 2.0 / k),
            Window::Cos => {
                let half = (1.4 / k).min(FRAC_PI_2 / k - MARGIN);
                (-half, half)
            }
        }
    }

    fn name(self) -> &'static str {
        match self {
            Window::Sinh => "sinh",
            Window::Cosh => "cosh",
            Window::Cos => "cos",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Scherk16,
    Scherk25,
    /// `f = s_f (ν/2p²) log X(pu)`, `g = s_g (ν/2q²) log Y(qv)`.
    LambdaTwo {
        x: Window,
        y: Window,
        sign_f: f64,
        sign_g: f64,
    },
    Paraboloid,
    Blair,
    Cylinder6,
    Cylinder7,
}

/// A named classified surface.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub provenance: &'static str,
    pub params: &'static [ParamSpec],
    pub constraints: &'static str,
    pub relation: Relation,
    /// Pass threshold for the maximum relation residual.
    pub threshold: f64,
    shape: Shape,
}

const LAMBDA_TWO_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "nu",
        default: 2.0,
    },
    ParamSpec {
        name: "p",
        default: 1.0,
    },
    ParamSpec {
        name: "q",
        default: 1.0,
    },
];
const LAMBDA_TWO: Relation = Relation::KiiEqualsLambdaH {
    lambda: 2.0,
    vanishing: false,
};

fn lambda_two(
    name: &'static str,
    provenance: &'static str,
    x: Window,
    y: Window,
    sign_f: f64,
    sign_g: f64,
) -> CatalogEntry {
    CatalogEntry {
        name,
        provenance,
        params: LAMBDA_TWO_PARAMS,
        constraints: "nu != 0, p > 0, q > 0",
        relation: LAMBDA_TWO,
        threshold: RESIDUAL_TOL,
        shape: Shape::LambdaTwo { x, y, sign_f, sign_g },
    }
}

/// The fifteen classified surfaces, in a fixed order.
pub fn catalog_entries() -> Vec<CatalogEntry> {
    use Window::{Cos, Cosh, Sinh};
    vec![
        CatalogEntry {
            name: "scherk_16",
            provenance: "Scherk surface, the K_II = H family",
            params: &[ParamSpec {
                name: "c",
                default: 1.0,
            }],
            constraints: "c != 0",
            relation: Relation::KiiEqualsLambdaH {
                lambda: 1.0,
                vanishing: true,
            },
            threshold: RESIDUAL_TOL,
            shape: Shape::Scherk16,
        },
        CatalogEntry {
            name: "scherk_25",
            provenance: "shifted Scherk surface, the K_II = lambda H family for lambda != 1, 2",
            params: &[
                ParamSpec {
                    name: "p",
                    default: 1.0,
                },
                ParamSpec {
                    name: "q",
                    default: 0.25,
                },
                ParamSpec {
                    name: "r",
                    default: -0.4,
                },
            ],
            constraints: "p != 0",
            relation: Relation::KiiEqualsLambdaH {
                lambda: 3.0,
                vanishing: true,
            },
            threshold: RESIDUAL_TOL,
            shape: Shape::Scherk25,
        },
        lambda_two("surface_28", "K_II = 2H, log(sinh(pu) cos(qv))", Sinh, Cos, -1.0, -1.0),
        lambda_two("surface_29", "K_II = 2H, log(cosh(pu) cos(qv))", Cosh, Cos, -1.0, -1.0),
        lambda_two("surface_30", "K_II = 2H, log(cos(pu) / cos(qv))", Cos, Cos, 1.0, -1.0),
        lambda_two(
            "surface_31",
            "K_II = 2H, log(sinh(pu) / sinh(qv))",
            Sinh,
            Sinh,
            -1.0,
            1.0,
        ),
        lambda_two(
            "surface_32",
            "K_II = 2H, log(cosh(pu) / cosh(qv))",
            Cosh,
            Cosh,
            -1.0,
            1.0,
        ),
        lambda_two(
            "surface_33",
            "K_II = 2H, log(cosh(pu) / sinh(qv))",
            Cosh,
            Sinh,
            -1.0,
            1.0,
        ),
        lambda_two(
            "surface_34",
            "K_II = 2H, log(sinh(pu) / cosh(qv))",
            Sinh,
            Cosh,
            -1.0,
            1.0,
        ),
        lambda_two("surface_35", "K_II = 2H, log(cos(pu) sinh(qv))", Cos, Sinh, 1.0, 1.0),
        lambda_two("surface_36", "K_II = 2H, log(cos(pu) cosh(qv))", Cos, Cosh, 1.0, 1.0),
        CatalogEntry {
            name: "hyperbolic_paraboloid_37",
            provenance: "hyperbolic paraboloid, the only polynomial K_II = 2H surface",
            params: &[
                ParamSpec {
                    name: "a",
                    default: 0.5,
                },
                ParamSpec {
                    name: "u0",
                    default: 0.0,
                },
                ParamSpec {
                    name: "v0",
                    default: 0.0,
                },
            ],
            constraints: "a != 0",
            relation: LAMBDA_TWO,
            threshold: RESIDUAL_TOL,
            shape: Shape::Paraboloid,
        },
        CatalogEntry {
            name: "blair_9",
            provenance: "power-function surface with K_II = 0",
            params: &[ParamSpec {
                name: "c",
                default: 1.0,
            }],
            constraints: "c != 0",
            relation: Relation::KiiZero,
            threshold: 1e-7,
            shape: Shape::Blair,
        },
        CatalogEntry {
            name: "cylinder_6",
            provenance: "cylinder z = au + g(v), degenerate II",
            params: &[ParamSpec {
                name: "a",
                default: 1.0,
            }],
            constraints: "any a",
            relation: Relation::DegenerateII,
            threshold: RESIDUAL_TOL,
            shape: Shape::Cylinder6,
        },
        CatalogEntry {
            name: "cylinder_7",
            provenance: "cylinder z = f(u) + av, degenerate II",
            params: &[ParamSpec {
                name: "a",
                default: 1.0,
            }],
            constraints: "any a",
            relation: Relation::DegenerateII,
            threshold: RESIDUAL_TOL,
            shape: Shape::Cylinder7,
        },
    ]
}

pub fn find_entry(name: &str) -> Result<CatalogEntry, CatalogError> {
    catalog_entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CatalogError::UnknownEntry(name.to_string()))
}

fn sorted(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// `x` with `k x + shift` in `(−π/2 + margin, π/2 − margin)`.
fn cos_interval(k: f64, shift: f64) -> (f64, f64) {
    let w = FRAC_PI_2 - MARGIN;
    sorted((-w - shift) / k, (w - shift) / k)
}

impl CatalogEntry {
    pub fn defaults(&self) -> Params {
        self.params.iter().map(|p| (p.name.to_string(), p.default)).collect()
    }

    /// Defaults overridden by `overrides`, checked against the constraints.
    pub fn resolve<'a, I>(&self, overrides: I) -> Result<Params, CatalogError>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut params = self.defaults();
        for (name, value) in overrides {
            match params.get_mut(name) {
                Some(slot) => *slot = value,
                None => {
                    return Err(CatalogError::UnknownParameter {
                        entry: self.name,
                        name: name.to_string(),
                    })
                }
            }
        }
        self.check(&params)?;
        Ok(params)
    }

    fn get(&self, params: &Params, name: &str) -> Result<f64, CatalogError> {
        params.get(name).copied().ok_or_else(|| CatalogError::UnknownParameter {
            entry: self.name,
            name: name.to_string(),
        })
    }

    fn reject(&self, reason: impl Into<String>) -> CatalogError {
        CatalogError::Constraint {
            entry: self.name,
            reason: reason.into(),
        }
    }

    pub fn check(&self, params: &Params) -> Result<(), CatalogError> {
        for spec in self.params {
            let value = self.get(params, spec.name)?;
            if !value.is_finite() {
                return Err(self.reject(format!("{} must be finite", spec.name)));
            }
        }
        let nonzero = |name: &str| -> Result<(), CatalogError> {
            if self.get(params, name)? == 0.0 {
                Err(self.reject(format!("{name} must be nonzero")))
            } else {
                Ok(())
            }
        };
        match self.shape {
            Shape::Scherk16 | Shape::Blair => nonzero("c"),
            Shape::Scherk25 => nonzero("p"),
            Shape::Paraboloid => nonzero("a"),
            Shape::Cylinder6 | Shape::Cylinder7 => Ok(()),
            Shape::LambdaTwo { .. } => {
                nonzero("nu")?;
                for name in ["p", "q"] {
                    if self.get(params, name)? <= 0.0 {
                        return Err(self.reject(format!("{name} must be positive")));
                    }
                }
                // the cos window must keep its margin from the zeros
                let (lo, hi) = self.domain_bounds(params)?;
                if !(lo.0 < lo.1 && hi.0 < hi.1) {
                    return Err(self.reject("p or q too large for a margined domain"));
                }
                Ok(())
            }
        }
    }

    /// Profiles `(f, g)` as expression text in the entry's parameters.
    pub fn profiles(&self) -> (String, String) {
        match self.shape {
            Shape::Scherk16 => ("(2/c)*log(cos(c*u/2))".into(), "-(2/c)*log(cos(c*v/2))".into()),
            Shape::Scherk25 => ("-(1/p)*log(cos(p*u + q))".into(), "(1/p)*log(cos(p*v + r))".into()),
            Shape::LambdaTwo { x, y, sign_f, sign_g } => {
                let side = |sign: f64, w: Window, k: &str, var: &str| {
                    let lead = if sign < 0.0 { "-" } else { "" };
                    format!("{lead}(nu/(2*{k}^2))*log({}({k}*{var}))", w.name())
                };
                (side(sign_f, x, "p", "u"), side(sign_g, y, "q", "v"))
            }
            Shape::Paraboloid => ("a*(u - u0)^2".into(), "-a*(v - v0)^2".into()),
            Shape::Blair => ("c*u^(4/3)".into(), "-c*v^(4/3)".into()),
            Shape::Cylinder6 => ("a*u".into(), "v^3".into()),
            Shape::Cylinder7 => ("u^3".into(), "a*v".into()),
        }
    }

    fn domain_bounds(&self, params: &Params) -> Result<(Interval, Interval), CatalogError> {
        Ok(match self.shape {
            Shape::Scherk16 => {
                let half = 2.9 / self.get(params, "c")?.abs();
                ((-half, half), (-half, half))
            }
            Shape::Scherk25 => {
                let p = self.get(params, "p")?;
                (
                    cos_interval(p, self.get(params, "q")?),
                    cos_interval(p, self.get(params, "r")?),
                )
            }
            Shape::LambdaTwo { x, y, .. } => (x.interval(self.get(params, "p")?), y.interval(self.get(params, "q")?)),
            Shape::Paraboloid | Shape::Cylinder6 | Shape::Cylinder7 => ((-2.0, 2.0), (-2.0, 2.0)),
            Shape::Blair => ((0.2, 3.0), (0.2, 3.0)),
        })
    }

    pub fn domain(&self, params: &Params) -> Result<Domain, CatalogError> {
        let ((u0, u1), (v0, v1)) = self.domain_bounds(params)?;
        Ok(Domain::new(u0, u1, v0, v1)?)
    }

    pub fn build(&self, params: &Params) -> Result<SurfaceDef, CatalogError> {
        self.check(params)?;
        let (f, g) = self.profiles();
        Ok(make_surface(&f, &g, params, self.domain(params)?)?)
    }

    /// Residual of the relation at one point.
    ///
    /// For degenerate entries this is `|α′β′|`, which must stay at or below
    /// the degeneracy tolerance.
    pub fn residual(&self, s: &SurfaceDef, u: f64, v: f64) -> Result<f64, CatalogError> {
        let b = forms_at(s, u, v)?;
        if self.relation.is_degenerate() {
            return Ok(b.curvature_product().abs());
        }
        if !b.nondegenerate {
            return Err(CurvatureError::Degenerate { u, v }.into());
        }
        let kii = kii_from(&b);
        let (_, h) = gauss_mean_from(&b);
        Ok(match self.relation {
            Relation::KiiEqualsLambdaH { lambda, vanishing } => {
                let r = (kii - lambda * h).abs();
                if vanishing {
                    r.max(kii.abs()).max(h.abs())
                } else {
                    r
                }
            }
            Relation::KiiZero => kii.abs(),
            Relation::DegenerateII => unreachable!(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub name: &'static str,
    pub params: Params,
    pub relation: Relation,
    pub max_abs_residual: f64,
    pub worst_point: (f64, f64),
    pub n_points: usize,
    pub threshold: f64,
    pub pass: bool,
}

fn grid_values<T, F>(s: &SurfaceDef, grid_n: usize, eval: F) -> Result<Vec<(Point, T)>, CatalogError>
where
    T: Send,
    F: Fn(f64, f64) -> Result<T, CatalogError> + Sync,
{
    if grid_n < 2 {
        return Err(CatalogError::GridTooSmall(grid_n));
    }
    s.domain()
        .grid(grid_n, grid_n)
        .into_par_iter()
        .map(|(u, v)| eval(u, v).map(|t| ((u, v), t)))
        .collect()
}

/// Checks the entry's relation on a `grid_n × grid_n` grid over its domain.
pub fn verify_entry(entry: &CatalogEntry, params: &Params, grid_n: usize) -> Result<VerifyReport, CatalogError> {
    let s = entry.build(params)?;
    let values = grid_values(&s, grid_n, |u, v| entry.residual(&s, u, v))?;
    let (worst_point, max_abs_residual) =
        values
            .iter()
            .fold(((f64::NAN, f64::NAN), f64::NEG_INFINITY), |acc, &(p, r)| {
                if r > acc.1 {
                    (p, r)
                } else {
                    acc
                }
            });
    let threshold = if entry.relation.is_degenerate() {
        crate::geometry::DEGENERACY_TOL
    } else {
        entry.threshold
    };
    let pass = if entry.relation.is_degenerate() {
        max_abs_residual <= threshold
    } else {
        max_abs_residual < threshold
    };
    Ok(VerifyReport {
        name: entry.name,
        params: params.clone(),
        relation: entry.relation,
        max_abs_residual,
        worst_point,
        n_points: values.len(),
        threshold,
        pass,
    })
}

/// Smallest `|H_II|` over the grid and where it occurs.
#[derive(Debug, Clone, PartialEq)]
pub struct HiiScan {
    pub min_abs: f64,
    pub argmin: (f64, f64),
    /// Top-left grid index of a 3 × 3 block on which `|H_II| < block_tol`
    /// everywhere, if any.
    pub vanishing_block: Option<(usize, usize)>,
}

/// Scans `|H_II|` on the test grid of a nondegenerate entry.
pub fn hii_scan(entry: &CatalogEntry, params: &Params, grid_n: usize, block_tol: f64) -> Result<HiiScan, CatalogError> {
    if entry.relation.is_degenerate() {
        return Err(entry.reject("H_II is undefined on a degenerate entry"));
    }
    let s = entry.build(params)?;
    let values = grid_values(&s, grid_n, |u, v| {
        let b = forms_at(&s, u, v)?;
        if !b.nondegenerate {
            return Err(CurvatureError::Degenerate { u, v }.into());
        }
        Ok(hii_from(&b).abs())
    })?;
    let (argmin, min_abs) = values
        .iter()
        .fold(((f64::NAN, f64::NAN), f64::INFINITY), |acc, &(p, h)| {
            if h < acc.1 {
                (p, h)
            } else {
                acc
            }
        });
    let small = |i: usize, j: usize| values[i * grid_n + j].1 < block_tol;
    let vanishing_block = (0..grid_n - 2)
        .flat_map(|i| (0..grid_n - 2).map(move |j| (i, j)))
        .find(|&(i, j)| (0..3).all(|di| (0..3).all(|dj| small(i + di, j + dj))));
    Ok(HiiScan {
        min_abs,
        argmin,
        vanishing_block,
    })
}

/// Right-hand side of a first-order ODE `y′ = F(x, y)`.
type OdeRhs = fn(&BTreeMap<&'static str, f64>, f64, f64) -> f64;

/// A first-order ODE together with a closed-form solution.
#[derive(Debug, Clone)]
pub struct OdeFamily {
    pub name: &'static str,
    pub equation: &'static str,
    pub constants: BTreeMap<&'static str, f64>,
    pub variable: &'static str,
    pub solution: Expr,
    /// Open interval on which the solution is smooth.
    pub interval: (f64, f64),
    rhs: OdeRhs,
}

impl OdeFamily {
    pub fn rhs(&self, x: f64, y: f64) -> f64 {
        (self.rhs)(&self.constants, x, y)
    }
}

fn constants(pairs: &[(&'static str, f64)]) -> BTreeMap<&'static str, f64> {
    pairs.iter().copied().collect()
}

// 2y′ = s c y² + 2d ln|y| + 2m, with s = −1 for α and +1 for β
fn log_quadratic(k: &BTreeMap<&'static str, f64>, sign: f64, y: f64) -> f64 {
    let log_term = if k["d"] == 0.0 { 0.0 } else { k["d"] * y.abs().ln() };
    sign * k["c"] * y * y / 2.0 + log_term + k["m"]
}

fn scherk_alpha_rhs(k: &BTreeMap<&'static str, f64>, _x: f64, y: f64) -> f64 {
    log_quadratic(k, -1.0, y)
}

fn scherk_beta_rhs(k: &BTreeMap<&'static str, f64>, _x: f64, y: f64) -> f64 {
    log_quadratic(k, 1.0, y)
}

// y′ = τ y^{2λ−2} ∓ μ/(4 − 2λ) y² + ν/(2 − 2λ)
fn weingarten_alpha_rhs(k: &BTreeMap<&'static str, f64>, _x: f64, y: f64) -> f64 {
    let l = k["lambda"];
    k["tau"] * y.powf(2.0 * l - 2.0) - k["mu"] / (4.0 - 2.0 * l) * y * y + k["nu"] / (2.0 - 2.0 * l)
}

fn weingarten_beta_rhs(k: &BTreeMap<&'static str, f64>, _x: f64, y: f64) -> f64 {
    let l = k["lambda"];
    k["tau"] * y.powf(2.0 * l - 2.0) + k["mu"] / (4.0 - 2.0 * l) * y * y + k["nu"] / (2.0 - 2.0 * l)
}

// y′ = τ y² ∓ ν/2
fn riccati_alpha_rhs(k: &BTreeMap<&'static str, f64>, _x: f64, y: f64) -> f64 {
    k["tau"] * y * y - k["nu"] / 2.0
}

fn riccati_beta_rhs(k: &BTreeMap<&'static str, f64>, _x: f64, y: f64) -> f64 {
    k["tau"] * y * y + k["nu"] / 2.0
}

fn family(
    name: &'static str,
    equation: &'static str,
    pairs: &[(&'static str, f64)],
    variable: &'static str,
    solution: &str,
    interval: (f64, f64),
    rhs: OdeRhs,
) -> OdeFamily {
    let solution = parse(solution, variable).expect("built-in ODE solution parses");
    OdeFamily {
        name,
        equation,
        constants: constants(pairs),
        variable,
        solution,
        interval,
        rhs,
    }
}

/// The ODE families behind the Scherk and `K_II = 2H` classifications with
/// their closed-form solutions (integration constants as noted).
pub fn ode_families() -> Vec<OdeFamily> {
    let w = FRAC_PI_2 - MARGIN;
    vec![
        family(
            "log_quadratic_alpha",
            "2y' = -c y^2 + 2d ln|y| + 2m",
            &[("c", 1.0), ("d", 0.0), ("m", -0.5)],
            "u",
            "-tan(u/2)",
            (-2.9, 2.9),
            scherk_alpha_rhs,
        ),
        family(
            "log_quadratic_beta",
            "2y' = c y^2 + 2d ln|y| + 2m",
            &[("c", 1.0), ("d", 0.0), ("m", 0.5)],
            "v",
            "tan(v/2)",
            (-2.9, 2.9),
            scherk_beta_rhs,
        ),
        // λ = 3, ν₁ = −4: τ = 0 and μ = ν₁(λ − 2)/(1 − λ) = 2 reduce the
        // equation to y′ = (y² + 1)
        family(
            "weingarten_alpha",
            "y' = tau y^(2 lambda - 2) - mu/(4 - 2 lambda) y^2 + nu/(2 - 2 lambda)",
            &[("lambda", 3.0), ("tau", 0.0), ("mu", 2.0), ("nu", -4.0)],
            "u",
            "tan(u + 0.3)",
            (-w - 0.3, w - 0.3),
            weingarten_alpha_rhs,
        ),
        family(
            "weingarten_beta",
            "y' = tau y^(2 lambda - 2) + mu/(4 - 2 lambda) y^2 + nu/(2 - 2 lambda)",
            &[("lambda", 3.0), ("tau", 0.0), ("mu", 2.0), ("nu", 4.0)],
            "v",
            "-tan(v - 0.2)",
            (-w + 0.2, w + 0.2),
            weingarten_beta_rhs,
        ),
        family(
            "riccati_coth",
            "y' = tau y^2 - nu/2",
            &[("tau", 1.0), ("nu", 2.0)],
            "u",
            "-cosh(u)/sinh(u)",
            (0.2, 5.0),
            riccati_alpha_rhs,
        ),
        family(
            "riccati_tanh",
            "y' = tau y^2 - nu/2",
            &[("tau", 1.0), ("nu", 2.0)],
            "u",
            "-tanh(u)",
            (-5.0, 5.0),
            riccati_alpha_rhs,
        ),
        family(
            "riccati_tan",
            "y' = tau y^2 + nu/2",
            &[("tau", 1.0), ("nu", 2.0)],
            "v",
            "tan(v)",
            (-w, w),
            riccati_beta_rhs,
        ),
    ]
}

/// Maximum of `|y′(x) − F(x, y(x))|` over the samples, with `y′` from the
/// symbolic derivative of the stored solution.
pub fn ode_residual(family: &OdeFamily, samples: &[f64]) -> Result<f64, CatalogError> {
    let derivative = differentiate(&family.solution, family.variable);
    let (lo, hi) = family.interval;
    let mut worst: f64 = 0.0;
    for &x in samples {
        if !(x > lo && x < hi) {
            return Err(CatalogError::OdeSample {
                family: family.name,
                x,
                lo,
                hi,
            });
        }
        let at = [(family.variable, x)];
        let ode = |source| CatalogError::Ode {
            family: family.name,
            source,
        };
        let y = family.solution.eval(&at[..]).map_err(ode)?;
        let dy = derivative.eval(&at[..]).map_err(ode)?;
        worst = worst.max((dy - family.rhs(x, y)).abs());
    }
    Ok(worst)
}

/// `n` evenly spaced interior samples of the family's interval.
pub fn ode_samples(family: &OdeFamily, n: usize) -> Vec<f64> {
    let (lo, hi) = family.interval;
    let step = (hi - lo) / n as f64;
    (0..n).map(|i| lo + (i as f64 + 0.5) * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_entries_with_unique_names() {
        let entries = catalog_entries();
        assert_eq!(entries.len(), 15);
        let mut names: Vec<_> = entries.iter().map(|e| e.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), 15);
        assert_eq!(entries.iter().filter(|e| e.relation.is_degenerate()).count(), 2);
    }

    #[test]
    fn every_entry_passes_at_defaults() {
        for entry in catalog_entries() {
            let report = verify_entry(&entry, &entry.defaults(), 12).unwrap();
            assert!(report.pass, "{} residual {}", entry.name, report.max_abs_residual);
            assert_eq!(report.n_points, 144);
        }
    }

    #[test]
    fn relations_of_named_entries() {
        assert_eq!(
            find_entry("scherk_16").unwrap().relation,
            Relation::KiiEqualsLambdaH {
                lambda: 1.0,
                vanishing: true
            }
        );
        assert_eq!(find_entry("hyperbolic_paraboloid_37").unwrap().relation, LAMBDA_TWO);
        assert!(matches!(find_entry("nosuch"), Err(CatalogError::UnknownEntry(_))));
    }

    #[test]
    fn flat_cylinder_is_degenerate() {
        let entry = find_entry("cylinder_6").unwrap();
        let params = entry.resolve([("a", 0.0)]).unwrap();
        let report = verify_entry(&entry, &params, 10).unwrap();
        assert!(report.pass);
        assert_eq!(report.max_abs_residual, 0.0);
    }

    #[test]
    fn parameter_errors() {
        let entry = find_entry("scherk_16").unwrap();
        assert!(matches!(
            entry.resolve([("c", 0.0)]),
            Err(CatalogError::Constraint { .. })
        ));
        assert!(matches!(
            entry.resolve([("k", 1.0)]),
            Err(CatalogError::UnknownParameter { .. })
        ));
        assert!(matches!(
            verify_entry(&entry, &entry.defaults(), 1),
            Err(CatalogError::GridTooSmall(1))
        ));
        let cos = find_entry("surface_30").unwrap();
        assert!(cos.resolve([("p", 20.0)]).is_err());
        assert!(cos.resolve([("p", -1.0)]).is_err());
    }

    #[test]
    fn domains_keep_their_margin() {
        let scherk = find_entry("scherk_25").unwrap();
        let d = scherk.domain(&scherk.defaults()).unwrap();
        assert!((d.u_max + 0.25 - (FRAC_PI_2 - MARGIN)).abs() < 1e-12);
        let sinh = find_entry("surface_31").unwrap();
        let d = sinh.domain(&sinh.resolve([("p", 4.0)]).unwrap()).unwrap();
        assert!(d.u_min >= MARGIN);
    }

    #[test]
    fn ode_families_hold() {
        for fam in ode_families() {
            let r = ode_residual(&fam, &ode_samples(&fam, 100)).unwrap();
            assert!(r < 1e-12, "{}: {r}", fam.name);
        }
    }

    #[test]
    fn ode_sample_outside_interval() {
        let fam = ode_families().into_iter().find(|f| f.name == "riccati_coth").unwrap();
        assert!(ode_residual(&fam, &[0.0]).is_err());
    }

    #[test]
    fn log_term_enters_when_d_is_nonzero() {
        let mut fam = ode_families().remove(0);
        fam.constants.insert("d", 0.5);
        assert!(ode_residual(&fam, &[1.0]).unwrap() > 0.1);
    }
}
