use super::{BinOp, DslError, Expression, Func, ParamEnv, Span};
use crate::error::{Error, Result};
use crate::geometry::{DVector, Momentum};
use crate::models::{AngleConvention, ModelClass, ModelSpec};

/// Momentum variables in scope for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentumValues {
    None,
    Chain { k: f64 },
    Plane { kx: f64, ky: f64 },
}

impl MomentumValues {
    fn lookup(&self, name: &str) -> Option<f64> {
        match (self, name) {
            (MomentumValues::Chain { k }, "k") => Some(*k),
            (MomentumValues::Plane { kx, .. }, "kx") => Some(*kx),
            (MomentumValues::Plane { ky, .. }, "ky") => Some(*ky),
            _ => None,
        }
    }
}

impl From<&Momentum> for MomentumValues {
    fn from(m: &Momentum) -> Self {
        match m {
            Momentum::D1(k) => MomentumValues::Chain { k: k.value() },
            Momentum::D2(p) => MomentumValues::Plane { kx: p.kx, ky: p.ky },
        }
    }
}

fn eval_error(op: &str, span: Span) -> DslError {
    DslError::Eval {
        op: op.to_string(),
        span,
    }
}

/// Evaluates `e` in IEEE-754 double precision.
///
/// Division by zero, roots of negative numbers and any other non-finite
/// intermediate are reported as `DslError::Eval` instead of propagating
/// infinities or NaN.
pub fn eval_expr(e: &Expression, k: &MomentumValues, env: &ParamEnv) -> Result<f64, DslError> {
    match e {
        Expression::Num(x, _) => Ok(*x),
        Expression::Var(name, span) => {
            k.lookup(name)
                .or_else(|| env.get(name))
                .ok_or_else(|| DslError::UnboundVariable {
                    name: name.clone(),
                    span: *span,
                })
        }
        Expression::Neg(inner, _) => Ok(-eval_expr(inner, k, env)?),
        Expression::Binary { op, lhs, rhs, span } => {
            let a = eval_expr(lhs, k, env)?;
            let b = eval_expr(rhs, k, env)?;
            let value = match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(eval_error("/", *span));
                    }
                    a / b
                }
                BinOp::Pow => {
                    if a < 0.0 && b.fract() != 0.0 {
                        return Err(eval_error("^", *span));
                    }
                    if a == 0.0 && b < 0.0 {
                        return Err(eval_error("^", *span));
                    }
                    a.powf(b)
                }
            };
            if !value.is_finite() {
                return Err(eval_error(&op.symbol().to_string(), *span));
            }
            Ok(value)
        }
        Expression::Call { func, arg, span } => {
            let x = eval_expr(arg, k, env)?;
            let value = match func {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => x.tan(),
                Func::Sqrt => {
                    if x < 0.0 {
                        return Err(eval_error("sqrt", *span));
                    }
                    x.sqrt()
                }
                Func::Atan => x.atan(),
                Func::Abs => x.abs(),
            };
            if !value.is_finite() {
                return Err(eval_error(func.name(), *span));
            }
            Ok(value)
        }
    }
}

/// A validated user-defined d-vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomModel {
    components: [Expression; 3],
    env: ParamEnv,
    dimension: usize,
    class: ModelClass,
    convention: AngleConvention,
}

impl CustomModel {
    pub fn components(&self) -> &[Expression; 3] {
        &self.components
    }

    pub fn env(&self) -> &ParamEnv {
        &self.env
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn class(&self) -> ModelClass {
        self.class
    }

    pub fn angle_convention(&self) -> AngleConvention {
        self.convention
    }

    /// Superconductor-class models default to the Bogoliubov angle convention.
    pub fn with_class(mut self, class: ModelClass) -> Self {
        self.class = class;
        if class == ModelClass::Superconductor {
            self.convention = AngleConvention::Bogoliubov;
        } else if self.convention == AngleConvention::Bogoliubov {
            self.convention = AngleConvention::Spherical;
        }
        self
    }

    pub fn with_angle_convention(mut self, convention: AngleConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn eval(&self, k: &Momentum) -> Result<DVector> {
        if k.dimension() != self.dimension {
            return Err(Error::DimensionMismatch(format!(
                "{}D momentum passed to a {}D custom model",
                k.dimension(),
                self.dimension
            )));
        }
        let vals = MomentumValues::from(k);
        let [dx, dy, dz] = &self.components;
        Ok(DVector::new(
            eval_expr(dx, &vals, &self.env)?,
            eval_expr(dy, &vals, &self.env)?,
            eval_expr(dz, &vals, &self.env)?,
        ))
    }
}

/// Checks that every free variable is a momentum variable of the right arity
/// or a bound parameter, and packages the triple as a model.
pub fn validate_model_def(
    dx: Expression,
    dy: Expression,
    dz: Expression,
    dimension: usize,
    env: ParamEnv,
) -> Result<ModelSpec> {
    let (allowed, foreign): (&[&str], &[&str]) = match dimension {
        1 => (&["k"], &["kx", "ky"]),
        2 => (&["kx", "ky"], &["k"]),
        d => {
            return Err(Error::DimensionMismatch(format!(
                "custom models must be 1D or 2D, got {d}"
            )))
        }
    };
    for (axis, e) in ["dx", "dy", "dz"].iter().zip([&dx, &dy, &dz]) {
        for (name, span) in e.free_variables() {
            if allowed.contains(&name.as_str()) || env.contains(&name) {
                continue;
            }
            if foreign.contains(&name.as_str()) {
                return Err(Error::DimensionMismatch(format!(
                    "{axis} uses `{name}` (at {span}) in a {dimension}D model"
                )));
            }
            return Err(DslError::UnboundVariable { name, span }.into());
        }
    }
    Ok(ModelSpec::Custom(CustomModel {
        components: [dx, dy, dz],
        env,
        dimension,
        class: ModelClass::Insulator,
        convention: AngleConvention::Spherical,
    }))
}
