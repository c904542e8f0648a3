//! Geometry of the second fundamental form of translation surfaces
//! `r(u, v) = (u, v, f(u) + g(v))`.

pub mod catalog;
pub mod curvature;
pub mod expr;
pub mod geometry;
pub mod polynomial;

pub use catalog::{
    catalog_entries, find_entry, verify_entry, CatalogEntry, CatalogError, OdeFamily, Relation, VerifyReport,
};
pub use curvature::{CurvatureError, CurvatureSample, LadderRecord};
pub use expr::{differentiate, eval_jet, parse, Bindings, DerivativeTower, Expr, ExprError, Func, Jet3};
pub use geometry::{forms_at, make_surface, Domain, FormBundle, GeometryError, SurfaceDef};
pub use polynomial::{Poly1, Poly2, PolyError, PowerTermMap, Rational};
