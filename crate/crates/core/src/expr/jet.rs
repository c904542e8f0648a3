use std::sync::OnceLock;

use super::eval::With;
use super::{differentiate, Bindings, Expr, ExprError};

/// Value and first three derivatives of a one-variable function at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet3 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

/// Highest derivative order a tower will produce.
pub const MAX_ORDER: usize = 8;

/// Lazily built symbolic derivatives `e, e', e'', ...` of one expression.
///
/// Each order is differentiated from the previous one the first time it is
/// requested and cached afterwards; initialisation is thread-safe.
#[derive(Debug)]
pub struct DerivativeTower {
    variable: String,
    levels: Vec<OnceLock<Expr>>,
}

impl DerivativeTower {
    pub fn new(expr: Expr, variable: &str) -> DerivativeTower {
        let levels: Vec<OnceLock<Expr>> = (0..=MAX_ORDER).map(|_| OnceLock::new()).collect();
        let _ = levels[0].set(expr);
        DerivativeTower {
            variable: variable.to_string(),
            levels,
        }
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn expr(&self) -> &Expr {
        self.derivative(0)
    }

    /// The `order`-th derivative tree.
    ///
    /// # Panics
    /// If `order` exceeds [`MAX_ORDER`].
    pub fn derivative(&self, order: usize) -> &Expr {
        assert!(order <= MAX_ORDER, "derivative order {order} exceeds {MAX_ORDER}");
        self.levels[order].get_or_init(|| differentiate(self.derivative(order - 1), &self.variable))
    }

    /// Evaluates the `order`-th derivative at `x`.
    pub fn eval<B: Bindings + ?Sized>(&self, order: usize, x: f64, params: &B) -> Result<f64, ExprError> {
        let env = With {
            name: &self.variable,
            value: x,
            rest: params,
        };
        self.derivative(order).eval(&env)
    }

    /// Jet of derivatives `start ..= start + 3` at `x`.
    pub fn jet<B: Bindings + ?Sized>(&self, start: usize, x: f64, params: &B) -> Result<Jet3, ExprError> {
        Ok(Jet3 {
            value: self.eval(start, x, params)?,
            d1: self.eval(start + 1, x, params)?,
            d2: self.eval(start + 2, x, params)?,
            d3: self.eval(start + 3, x, params)?,
        })
    }
}

/// One-shot jet evaluation; build a [`DerivativeTower`] to reuse the
/// derivative trees across many points.
pub fn eval_jet<B: Bindings + ?Sized>(e: &Expr, variable: &str, x: f64, params: &B) -> Result<Jet3, ExprError> {
    DerivativeTower::new(e.clone(), variable).jet(0, x, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use std::collections::BTreeMap;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn tan_half_angle_at_origin() {
        // tan(x/2) = x/2 + x^3/24 + ..., so the jet at 0 is (0, 1/2, 0, 1/4)
        let e = parse("tan(u/2)", "u").unwrap();
        let j = eval_jet(&e, "u", 0.0, &BTreeMap::new()).unwrap();
        assert_eq!(j.value, 0.0);
        assert!(close(j.d1, 0.5, 1e-15));
        assert!(j.d2.abs() < 1e-15);
        assert!(close(j.d3, 0.25, 1e-15));
    }

    #[test]
    fn half_square() {
        let e = parse("u^2/2", "u").unwrap();
        let j = eval_jet(&e, "u", 1.0, &BTreeMap::new()).unwrap();
        assert_eq!(
            j,
            Jet3 {
                value: 0.5,
                d1: 1.0,
                d2: 1.0,
                d3: 0.0
            }
        );
    }

    #[test]
    fn blair_power() {
        let e = parse("c*u^(4/3)", "u").unwrap();
        let params = BTreeMap::from([("c".to_string(), 1.0)]);
        let j = eval_jet(&e, "u", 1.0, &params).unwrap();
        assert!(close(j.value, 1.0, 1e-15));
        assert!(close(j.d1, 4.0 / 3.0, 1e-15));
        assert!(close(j.d2, 4.0 / 9.0, 1e-15));
        assert!(close(j.d3, -8.0 / 27.0, 1e-15));
    }

    #[test]
    fn tower_offsets() {
        let tower = DerivativeTower::new(parse("u^5", "u").unwrap(), "u");
        let j = tower.jet(2, 1.0, &BTreeMap::new()).unwrap();
        assert_eq!((j.value, j.d1, j.d2, j.d3), (20.0, 60.0, 120.0, 120.0));
        assert_eq!(tower.eval(6, 3.0, &BTreeMap::new()).unwrap(), 0.0);
    }

    #[test]
    fn domain_error_from_any_order() {
        // sqrt(u) is fine at 0 but its derivative is not
        let e = parse("sqrt(u)", "u").unwrap();
        assert!(eval_jet(&e, "u", 0.0, &BTreeMap::new()).is_err());
    }
}
