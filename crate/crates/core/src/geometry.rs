//! Translation surfaces and their first and second fundamental forms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::curvature::{BrioschiTrees, LadderTrees};
use crate::expr::{parse, Bindings, DerivativeTower, Expr, ExprError, Jet3};

/// Below this value of `|α′β′|` the second fundamental form is treated as
/// degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    F,
    G,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::F => "f",
            Side::G => "g",
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error("cannot parse {side}: {source}")]
    Parse { side: Side, source: ExprError },
    #[error("parameter `{0}` is referenced but not bound")]
    UnboundParameter(String),
    #[error("domain ({u_min}, {u_max}) x ({v_min}, {v_max}) is empty or not finite")]
    EmptyDomain {
        u_min: f64,
        u_max: f64,
        v_min: f64,
        v_max: f64,
    },
    #[error("point ({u}, {v}) lies outside the open domain")]
    OutOfDomain { u: f64, v: f64 },
    #[error("evaluation failed at ({u}, {v}): {source}")]
    Eval { u: f64, v: f64, source: ExprError },
}

/// Open parameter rectangle `(u_min, u_max) x (v_min, v_max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Domain {
    pub fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64) -> Result<Domain, GeometryError> {
        let ok = [u_min, u_max, v_min, v_max].iter().all(|x| x.is_finite()) && u_min < u_max && v_min < v_max;
        if !ok {
            return Err(GeometryError::EmptyDomain {
                u_min,
                u_max,
                v_min,
                v_max,
            });
        }
        Ok(Domain {
            u_min,
            u_max,
            v_min,
            v_max,
        })
    }

    pub fn square(lo: f64, hi: f64) -> Result<Domain, GeometryError> {
        Domain::new(lo, hi, lo, hi)
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        u > self.u_min && u < self.u_max && v > self.v_min && v < self.v_max
    }

    /// Cell-centred `nu x nv` sample points, all strictly inside the domain.
    /// Rows run over `u`; `v` varies fastest.
    pub fn grid(&self, nu: usize, nv: usize) -> Vec<(f64, f64)> {
        let du = (self.u_max - self.u_min) / nu as f64;
        let dv = (self.v_max - self.v_min) / nv as f64;
        let mut out = Vec::with_capacity(nu * nv);
        for i in 0..nu {
            let u = self.u_min + (i as f64 + 0.5) * du;
            for j in 0..nv {
                out.push((u, self.v_min + (j as f64 + 0.5) * dv));
            }
        }
        out
    }
}

/// Variable and parameter bindings for a point `(u, v)`.
pub(crate) struct PointEnv<'a> {
    pub u: f64,
    pub v: f64,
    pub params: &'a BTreeMap<String, f64>,
}

impl Bindings for PointEnv<'_> {
    fn lookup(&self, name: &str) -> Option<f64> {
        match name {
            "u" => Some(self.u),
            "v" => Some(self.v),
            _ => self.params.get(name).copied(),
        }
    }
}

/// A translation surface `r(u, v) = (u, v, f(u) + g(v))`.
#[derive(Debug)]
pub struct SurfaceDef {
    f: DerivativeTower,
    g: DerivativeTower,
    params: BTreeMap<String, f64>,
    domain: Domain,
    pub(crate) brioschi: OnceLock<BrioschiTrees>,
    pub(crate) ladder: OnceLock<LadderTrees>,
}

impl SurfaceDef {
    pub fn new(f: Expr, g: Expr, params: BTreeMap<String, f64>, domain: Domain) -> Result<SurfaceDef, GeometryError> {
        for name in f.parameters().into_iter().chain(g.parameters()) {
            if !params.contains_key(&name) {
                return Err(GeometryError::UnboundParameter(name));
            }
        }
        let s = SurfaceDef {
            f: DerivativeTower::new(f, "u"),
            g: DerivativeTower::new(g, "v"),
            params,
            domain,
            brioschi: OnceLock::new(),
            ladder: OnceLock::new(),
        };
        // f' .. f'''' (and likewise for g) are needed at every point
        s.f.derivative(4);
        s.g.derivative(4);
        Ok(s)
    }

    pub fn f(&self) -> &DerivativeTower {
        &self.f
    }

    pub fn g(&self) -> &DerivativeTower {
        &self.g
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    fn check(&self, u: f64, v: f64) -> Result<(), GeometryError> {
        if self.domain.contains(u, v) {
            Ok(())
        } else {
            Err(GeometryError::OutOfDomain { u, v })
        }
    }

    pub(crate) fn wrap(&self, u: f64, v: f64) -> impl Fn(ExprError) -> GeometryError {
        move |source| GeometryError::Eval { u, v, source }
    }

    pub(crate) fn env(&self, u: f64, v: f64) -> PointEnv<'_> {
        PointEnv {
            u,
            v,
            params: &self.params,
        }
    }

    /// Height `z = f(u) + g(v)`.
    pub fn height(&self, u: f64, v: f64) -> Result<f64, GeometryError> {
        self.check(u, v)?;
        let f = self.f.eval(0, u, &self.params).map_err(self.wrap(u, v))?;
        let g = self.g.eval(0, v, &self.params).map_err(self.wrap(u, v))?;
        Ok(f + g)
    }

    /// Jets `(α, α′, α″, α‴)` at `u` and `(β, β′, β″, β‴)` at `v`, where
    /// `α = f′` and `β = g′`.
    pub fn slopes(&self, u: f64, v: f64) -> Result<(Jet3, Jet3), GeometryError> {
        self.check(u, v)?;
        let alpha = self.f.jet(1, u, &self.params).map_err(self.wrap(u, v))?;
        let beta = self.g.jet(1, v, &self.params).map_err(self.wrap(u, v))?;
        Ok((alpha, beta))
    }
}

/// Parses `f(u)` and `g(v)` and builds the surface, caching `f′ .. f⁗` and
/// `g′ .. g⁗`.
pub fn make_surface(
    f_text: &str,
    g_text: &str,
    params: &BTreeMap<String, f64>,
    domain: Domain,
) -> Result<SurfaceDef, GeometryError> {
    let f = parse(f_text, "u").map_err(|source| GeometryError::Parse { side: Side::F, source })?;
    let g = parse(g_text, "v").map_err(|source| GeometryError::Parse { side: Side::G, source })?;
    SurfaceDef::new(f, g, params.clone(), domain)
}

/// Coefficients `E, F, G` of the first fundamental form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

/// Coefficients `e, f, g` of the second fundamental form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

/// Fundamental-form data at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormBundle {
    pub u: f64,
    pub v: f64,
    /// `(f′, f″, f‴, f⁗)` at `u`.
    pub alpha: Jet3,
    /// `(g′, g″, g‴, g⁗)` at `v`.
    pub beta: Jet3,
    pub first: FirstForm,
    pub second: SecondForm,
    /// `Δ = 1 + α² + β² = EG − F²`.
    pub delta: f64,
    pub nondegenerate: bool,
}

impl FormBundle {
    pub fn from_jets(u: f64, v: f64, alpha: Jet3, beta: Jet3) -> FormBundle {
        let (a, b) = (alpha.value, beta.value);
        let delta = 1.0 + a * a + b * b;
        let root = delta.sqrt();
        FormBundle {
            u,
            v,
            alpha,
            beta,
            first: FirstForm {
                e: 1.0 + a * a,
                f: a * b,
                g: 1.0 + b * b,
            },
            second: SecondForm {
                e: alpha.d1 / root,
                f: 0.0,
                g: beta.d1 / root,
            },
            delta,
            nondegenerate: (alpha.d1 * beta.d1).abs() > DEGENERACY_TOL,
        }
    }

    /// `α′β′`; its sign is the sign of the Gaussian curvature.
    pub fn curvature_product(&self) -> f64 {
        self.alpha.d1 * self.beta.d1
    }
}

pub fn forms_at(s: &SurfaceDef, u: f64, v: f64) -> Result<FormBundle, GeometryError> {
    let (alpha, beta) = s.slopes(u, v)?;
    Ok(FormBundle::from_jets(u, v, alpha, beta))
}
