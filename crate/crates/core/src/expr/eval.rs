use std::collections::{BTreeMap, HashMap};

use super::{Expr, ExprError, Func};

/// Source of values for variables and parameters during evaluation.
pub trait Bindings {
    fn lookup(&self, name: &str) -> Option<f64>;
}

impl Bindings for BTreeMap<String, f64> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name).copied()
    }
}

impl Bindings for HashMap<String, f64> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name).copied()
    }
}

impl Bindings for [(&str, f64)] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.iter().find(|(n, _)| *n == name).map(|(_, x)| *x)
    }
}

/// Binds a single variable on top of another set of bindings.
pub(crate) struct With<'a, B: ?Sized> {
    pub name: &'a str,
    pub value: f64,
    pub rest: &'a B,
}

impl<B: Bindings + ?Sized> Bindings for With<'_, B> {
    fn lookup(&self, name: &str) -> Option<f64> {
        if name == self.name {
            Some(self.value)
        } else {
            self.rest.lookup(name)
        }
    }
}

pub(super) fn apply(func: Func, x: f64) -> Option<f64> {
    let y = match func {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Tan => x.tan(),
        Func::Sinh => x.sinh(),
        Func::Cosh => x.cosh(),
        Func::Tanh => x.tanh(),
        Func::Exp => x.exp(),
        Func::Log if x <= 0.0 => return None,
        Func::Log => x.ln(),
        Func::Sqrt if x < 0.0 => return None,
        Func::Sqrt => x.sqrt(),
        Func::Abs => x.abs(),
    };
    Some(y)
}

fn domain(node: &Expr, reason: &'static str) -> ExprError {
    let mut text = node.to_string();
    if text.len() > 160 {
        let cut = (0..=157).rev().find(|&i| text.is_char_boundary(i)).unwrap_or(0);
        text.truncate(cut);
        text.push_str("...");
    }
    ExprError::Domain { node: text, reason }
}

impl Expr {
    /// Evaluates the tree in double precision.
    ///
    /// Fails with [`ExprError::Domain`] naming the offending node for
    /// logarithms and square roots outside their domain, division by zero,
    /// a negative base under a non-integer exponent, and any non-finite
    /// intermediate result.
    pub fn eval<B: Bindings + ?Sized>(&self, bindings: &B) -> Result<f64, ExprError> {
        let value = match self {
            Expr::Constant(c) => *c,
            Expr::Variable(name) | Expr::Parameter(name) => {
                bindings.lookup(name).ok_or_else(|| ExprError::Unbound(name.clone()))?
            }
            Expr::Add(a, b) => a.eval(bindings)? + b.eval(bindings)?,
            Expr::Sub(a, b) => a.eval(bindings)? - b.eval(bindings)?,
            Expr::Mul(a, b) => a.eval(bindings)? * b.eval(bindings)?,
            Expr::Div(a, b) => {
                let num = a.eval(bindings)?;
                let den = b.eval(bindings)?;
                if den == 0.0 {
                    return Err(domain(self, "division by zero"));
                }
                num / den
            }
            Expr::Neg(a) => -a.eval(bindings)?,
            Expr::Pow(a, b) => {
                let base = a.eval(bindings)?;
                let exponent = b.eval(bindings)?;
                if base < 0.0 && exponent.fract() != 0.0 {
                    return Err(domain(self, "negative base with non-integer exponent"));
                }
                if base == 0.0 && exponent < 0.0 {
                    return Err(domain(self, "zero raised to a negative power"));
                }
                if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
                    base.powi(exponent as i32)
                } else {
                    base.powf(exponent)
                }
            }
            Expr::Call(func, a) => {
                let x = a.eval(bindings)?;
                match apply(*func, x) {
                    Some(y) => y,
                    None if *func == Func::Log => return Err(domain(self, "logarithm of a non-positive value")),
                    None => return Err(domain(self, "square root of a negative value")),
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(domain(self, "non-finite result"))
        }
    }
}
