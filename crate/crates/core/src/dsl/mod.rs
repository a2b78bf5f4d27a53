//! A small arithmetic language for user-defined d-vector components.
//!
//! Expressions range over numeric literals, the momentum variables (`k` for
//! chains, `kx`/`ky` for planar cells), named parameters, unary minus, the
//! binary operators `+ - * / ^` and the functions `sin cos tan sqrt atan abs`.
//! `^` binds tightest and associates to the right; unary minus binds tighter
//! than `*` and `/`.

mod eval;
mod parser;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use eval::{eval_expr, validate_model_def, CustomModel, MomentumValues};
pub use parser::parse_expr;

/// Byte range `[start, end)` into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sqrt,
    Atan,
    Abs,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sqrt" => Func::Sqrt,
            "atan" => Func::Atan,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
            Func::Atan => "atan",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Num(f64, Span),
    Var(String, Span),
    Neg(Box<Expression>, Span),
    Binary {
        op: BinOp,
        lhs: Box<Expression>,
        rhs: Box<Expression>,
        span: Span,
    },
    Call {
        func: Func,
        arg: Box<Expression>,
        span: Span,
    },
}

impl Expression {
    pub fn span(&self) -> Span {
        match self {
            Expression::Num(_, s) | Expression::Var(_, s) | Expression::Neg(_, s) => *s,
            Expression::Binary { span, .. } | Expression::Call { span, .. } => *span,
        }
    }

    /// Structural equality, ignoring source spans.
    pub fn same_shape(&self, other: &Expression) -> bool {
        use Expression::*;
        match (self, other) {
            (Num(a, _), Num(b, _)) => a.to_bits() == b.to_bits(),
            (Var(a, _), Var(b, _)) => a == b,
            (Neg(a, _), Neg(b, _)) => a.same_shape(b),
            (
                Binary {
                    op: oa,
                    lhs: la,
                    rhs: ra,
                    ..
                },
                Binary {
                    op: ob,
                    lhs: lb,
                    rhs: rb,
                    ..
                },
            ) => oa == ob && la.same_shape(lb) && ra.same_shape(rb),
            (Call { func: fa, arg: a, .. }, Call { func: fb, arg: b, .. }) => fa == fb && a.same_shape(b),
            _ => false,
        }
    }

    /// Variable names with the span of their first occurrence, in source order.
    pub fn free_variables(&self) -> Vec<(String, Span)> {
        let mut out: Vec<(String, Span)> = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<(String, Span)>) {
        match self {
            Expression::Num(..) => {}
            Expression::Var(name, span) => {
                if !out.iter().any(|(n, _)| n == name) {
                    out.push((name.clone(), *span));
                }
            }
            Expression::Neg(e, _) => e.collect_vars(out),
            Expression::Binary { lhs, rhs, .. } => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
            Expression::Call { arg, .. } => arg.collect_vars(out),
        }
    }
}

/// Fully parenthesized form; re-parses to a structurally identical tree.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Num(x, _) => write!(f, "{x:?}"),
            Expression::Var(name, _) => f.write_str(name),
            Expression::Neg(e, _) => write!(f, "(-{e})"),
            Expression::Binary { op, lhs, rhs, .. } => {
                write!(f, "({lhs} {} {rhs})", op.symbol())
            }
            Expression::Call { func, arg, .. } => write!(f, "{}({arg})", func.name()),
        }
    }
}

/// Reserved momentum variable names.
pub const MOMENTUM_VARS: [&str; 3] = ["k", "kx", "ky"];

/// Named parameter values bound during evaluation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamEnv {
    values: BTreeMap<String, f64>,
}

impl ParamEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, value: f64) -> Result<(), DslError> {
        let name = name.into();
        if name.is_empty()
            || MOMENTUM_VARS.contains(&name.as_str())
            || Func::from_name(&name).is_some()
            || !is_identifier(&name)
        {
            return Err(DslError::InvalidParameter(name));
        }
        if self.values.contains_key(&name) {
            return Err(DslError::DuplicateParameter(name));
        }
        self.values.insert(name, value);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl<S: Into<String>> FromIterator<(S, f64)> for ParamEnv {
    /// Panics on invalid or duplicate names; use [`ParamEnv::insert`] for fallible construction.
    fn from_iter<I: IntoIterator<Item = (S, f64)>>(iter: I) -> Self {
        let mut env = ParamEnv::new();
        for (k, v) in iter {
            env.insert(k, v).expect("valid parameter name");
        }
        env
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyInput,
    UnknownToken,
    UnbalancedParen,
    UnexpectedToken,
    TrailingInput,
    UnknownFunction,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::EmptyInput => "empty input",
            ParseErrorKind::UnknownToken => "unknown token",
            ParseErrorKind::UnbalancedParen => "unbalanced parenthesis",
            ParseErrorKind::UnexpectedToken => "unexpected token",
            ParseErrorKind::TrailingInput => "trailing input",
            ParseErrorKind::UnknownFunction => "unknown function",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error("parse error at byte {offset}: {kind}{}", detail_suffix(.detail))]
    Parse {
        kind: ParseErrorKind,
        offset: usize,
        detail: String,
    },

    #[error("unbound variable `{name}` at {span}")]
    UnboundVariable { name: String, span: Span },

    #[error("evaluation error in `{op}` at {span}")]
    Eval { op: String, span: Span },

    #[error("invalid parameter name `{0}`")]
    InvalidParameter(String),

    #[error("duplicate parameter `{0}`")]
    DuplicateParameter(String),
}

fn detail_suffix(d: &str) -> String {
    if d.is_empty() {
        String::new()
    } else {
        format!(" ({d})")
    }
}
