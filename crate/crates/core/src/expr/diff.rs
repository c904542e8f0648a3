//! Symbolic differentiation and the constant-folding constructors it uses.

use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::{Expr, Func};

fn is_const(e: &Expr, value: f64) -> bool {
    matches!(e, Expr::Constant(c) if *c == value)
}

// Arithmetic on owned trees folds constants and drops neutral elements
// (x + 0, 1 * x, 0 * x, x / 1, x ^ 1, x ^ 0).

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match (&self, &rhs) {
            (Expr::Constant(a), Expr::Constant(b)) => Expr::Constant(a + b),
            _ if is_const(&self, 0.0) => rhs,
            _ if is_const(&rhs, 0.0) => self,
            _ => Expr::Add(Arc::new(self), Arc::new(rhs)),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        match (&self, &rhs) {
            (Expr::Constant(a), Expr::Constant(b)) => Expr::Constant(a - b),
            _ if is_const(&rhs, 0.0) => self,
            _ if is_const(&self, 0.0) => -rhs,
            _ => Expr::Sub(Arc::new(self), Arc::new(rhs)),
        }
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match (&self, &rhs) {
            (Expr::Constant(a), Expr::Constant(b)) => Expr::Constant(a * b),
            _ if is_const(&self, 0.0) || is_const(&rhs, 0.0) => Expr::Constant(0.0),
            _ if is_const(&self, 1.0) => rhs,
            _ if is_const(&rhs, 1.0) => self,
            _ if is_const(&self, -1.0) => -rhs,
            _ if is_const(&rhs, -1.0) => -self,
            _ => Expr::Mul(Arc::new(self), Arc::new(rhs)),
        }
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        match (&self, &rhs) {
            (Expr::Constant(a), Expr::Constant(b)) if *b != 0.0 => Expr::Constant(a / b),
            _ if is_const(&rhs, 1.0) => self,
            _ if is_const(&self, 0.0) && !is_const(&rhs, 0.0) => Expr::Constant(0.0),
            _ => Expr::Div(Arc::new(self), Arc::new(rhs)),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Constant(c) => Expr::Constant(-c),
            Expr::Neg(inner) => Arc::unwrap_or_clone(inner),
            other => Expr::Neg(Arc::new(other)),
        }
    }
}

impl Expr {
    pub fn pow(self, exponent: Expr) -> Expr {
        match (&self, &exponent) {
            (Expr::Constant(b), Expr::Constant(e)) if b.powf(*e).is_finite() && (*b > 0.0 || e.fract() == 0.0) => {
                Expr::Constant(b.powf(*e))
            }
            _ if is_const(&exponent, 0.0) => Expr::Constant(1.0),
            _ if is_const(&exponent, 1.0) => self,
            _ => Expr::Pow(Arc::new(self), Arc::new(exponent)),
        }
    }

    pub fn powi(self, n: i32) -> Expr {
        self.pow(Expr::Constant(f64::from(n)))
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        if let Expr::Constant(x) = arg {
            let folded = super::eval::apply(func, x);
            if let Some(y) = folded.filter(|y| y.is_finite()) {
                return Expr::Constant(y);
            }
        }
        Expr::Call(func, Arc::new(arg))
    }

    pub fn sqrt(self) -> Expr {
        Expr::call(Func::Sqrt, self)
    }
}

fn own(e: &Arc<Expr>) -> Expr {
    Expr::clone(e)
}

/// Exact derivative of `e` with respect to the variable `variable`.
///
/// Parameters and other variables are treated as constants. A power whose
/// exponent depends on the variable is rewritten through `exp(e * log(b))`,
/// so a non-positive base only surfaces when the result is evaluated.
pub fn differentiate(e: &Expr, variable: &str) -> Expr {
    if !e.depends_on(variable) {
        return Expr::Constant(0.0);
    }
    match e {
        Expr::Constant(_) | Expr::Parameter(_) => Expr::Constant(0.0),
        Expr::Variable(_) => Expr::Constant(1.0),
        Expr::Add(a, b) => differentiate(a, variable) + differentiate(b, variable),
        Expr::Sub(a, b) => differentiate(a, variable) - differentiate(b, variable),
        Expr::Mul(a, b) => differentiate(a, variable) * own(b) + own(a) * differentiate(b, variable),
        Expr::Div(a, b) => {
            if !b.depends_on(variable) {
                return differentiate(a, variable) / own(b);
            }
            let num = differentiate(a, variable) * own(b) - own(a) * differentiate(b, variable);
            num / own(b).powi(2)
        }
        Expr::Neg(a) => -differentiate(a, variable),
        Expr::Pow(base, exponent) => {
            if !exponent.depends_on(variable) {
                // d(b^n) = n b^(n-1) b'
                let n = own(exponent);
                let lowered = match n.as_constant() {
                    Some(c) => Expr::Constant(c - 1.0),
                    None => n.clone() - Expr::Constant(1.0),
                };
                n * own(base).pow(lowered) * differentiate(base, variable)
            } else if !base.depends_on(variable) {
                // d(c^e) = c^e log(c) e'
                Expr::clone(e) * Expr::call(Func::Log, own(base)) * differentiate(exponent, variable)
            } else {
                let rewritten = Expr::call(Func::Exp, own(exponent) * Expr::call(Func::Log, own(base)));
                differentiate(&rewritten, variable)
            }
        }
        Expr::Call(func, arg) => {
            let x = own(arg);
            let outer = match func {
                Func::Sin => Expr::call(Func::Cos, x),
                Func::Cos => -Expr::call(Func::Sin, x),
                Func::Tan => Expr::Constant(1.0) / Expr::call(Func::Cos, x).powi(2),
                Func::Sinh => Expr::call(Func::Cosh, x),
                Func::Cosh => Expr::call(Func::Sinh, x),
                Func::Tanh => Expr::Constant(1.0) / Expr::call(Func::Cosh, x).powi(2),
                Func::Exp => Expr::call(Func::Exp, x),
                Func::Log => Expr::Constant(1.0) / x,
                Func::Sqrt => Expr::Constant(0.5) / Expr::call(Func::Sqrt, x),
                Func::Abs => x.clone() / Expr::call(Func::Abs, x),
            };
            outer * differentiate(arg, variable)
        }
    }
}
