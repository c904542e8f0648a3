//! Expression trees for the profile functions `f(u)` and `g(v)`.
//!
//! Expressions are parsed from a small infix language, differentiated
//! symbolically and evaluated in double precision. Trees are immutable and
//! share subtrees through [`Arc`], so cloning is cheap and values can be sent
//! across threads.

mod diff;
mod eval;
mod jet;
mod parse;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use diff::differentiate;
pub use eval::Bindings;
pub use jet::{eval_jet, DerivativeTower, Jet3};
pub use parse::{parse, parse_with_variables};

/// Names that are always treated as coordinate variables by the parser.
pub const COORDINATES: [&str; 2] = ["u", "v"];

/// The closed set of elementary functions understood by the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }
}

/// A node of an expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(f64),
    Variable(String),
    Parameter(String),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Neg(Arc<Expr>),
    Pow(Arc<Expr>, Arc<Expr>),
    Call(Func, Arc<Expr>),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("variable `{name}` at offset {offset} is not the declared variable `{declared}`")]
    ForeignVariable {
        name: String,
        declared: String,
        offset: usize,
    },
    #[error("empty expression")]
    Empty,
    #[error("no binding for `{0}`")]
    Unbound(String),
    #[error("domain error in `{node}`: {reason}")]
    Domain { node: String, reason: &'static str },
}

impl Expr {
    pub fn constant(value: f64) -> Expr {
        Expr::Constant(value)
    }

    pub fn var(name: &str) -> Expr {
        Expr::Variable(name.to_string())
    }

    pub fn param(name: &str) -> Expr {
        Expr::Parameter(name.to_string())
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Expr::Constant(c) => Some(*c),
            _ => None,
        }
    }

    /// True if `name` occurs as a [`Expr::Variable`] anywhere in the tree.
    pub fn depends_on(&self, name: &str) -> bool {
        match self {
            Expr::Constant(_) | Expr::Parameter(_) => false,
            Expr::Variable(v) => v == name,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.depends_on(name) || b.depends_on(name)
            }
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on(name),
        }
    }

    /// Parameter names referenced by the tree, sorted and deduplicated.
    pub fn parameters(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_parameters(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_parameters(&self, out: &mut Vec<String>) {
        match self {
            Expr::Parameter(p) => out.push(p.clone()),
            Expr::Constant(_) | Expr::Variable(_) => {}
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.collect_parameters(out);
                b.collect_parameters(out);
            }
            Expr::Neg(a) | Expr::Call(_, a) => a.collect_parameters(out),
        }
    }

    /// Number of nodes in the tree (shared subtrees counted once per use).
    pub fn node_count(&self) -> usize {
        match self {
            Expr::Constant(_) | Expr::Variable(_) | Expr::Parameter(_) => 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                1 + a.node_count() + b.node_count()
            }
            Expr::Neg(a) | Expr::Call(_, a) => 1 + a.node_count(),
        }
    }
}

/// Fully parenthesised output; the result parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Constant(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => {
                write!(f, "(-{})", -c)
            }
            Expr::Constant(c) => write!(f, "{c}"),
            Expr::Variable(n) | Expr::Parameter(n) => f.write_str(n),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
