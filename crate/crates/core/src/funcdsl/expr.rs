//! Expression trees over ℝⁿ with exact symbolic differentiation.

use std::fmt;

use thiserror::Error;

use crate::extreal::{add_f64, ExtReal};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("division by zero at {0:?}")]
    DivByZero(Vec<f64>),
    #[error("undefined value (0·∞ or ∞/∞) at {0:?}")]
    Undefined(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(ExtReal),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    PowInt(Box<Expr>, u32),
    Exp(Box<Expr>),
    Abs(Box<Expr>),
    Neg(Box<Expr>),
}

use Expr::*;

fn num(v: f64) -> Expr {
    Const(ExtReal::Finite(v))
}

fn as_num(e: &Expr) -> Option<f64> {
    match e {
        Const(ExtReal::Finite(v)) => Some(*v),
        _ => None,
    }
}

// Constructors that fold constants and neutral elements, keeping derivatives readable.
fn add(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => num(x + y),
        (Some(x), _) if x == 0.0 => b,
        (_, Some(y)) if y == 0.0 => a,
        _ => Add(Box::new(a), Box::new(b)),
    }
}

fn sub_e(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => num(x - y),
        (Some(x), _) if x == 0.0 => neg(b),
        (_, Some(y)) if y == 0.0 => a,
        _ => Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => num(x * y),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => num(0.0),
        (Some(x), _) if x == 1.0 => b,
        (_, Some(y)) if y == 1.0 => a,
        (None, Some(_)) => mul(b, a),
        (Some(x), None) => match b {
            Mul(l, r) if as_num(&l).is_some() => mul(num(x * as_num(&l).unwrap()), *r),
            _ => Mul(Box::new(a), Box::new(b)),
        },
        _ => Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), _) if x == 0.0 => num(0.0),
        (_, Some(y)) if y == 1.0 => a,
        (_, Some(y)) if y != 0.0 => mul(num(1.0 / y), a),
        _ => Div(Box::new(a), Box::new(b)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Const(v) => Const(-v),
        Neg(inner) => *inner,
        other => Neg(Box::new(other)),
    }
}

fn powi(a: Expr, k: u32) -> Expr {
    match k {
        0 => num(1.0),
        1 => a,
        _ => PowInt(Box::new(a), k),
    }
}

impl Expr {
    pub fn constant(v: f64) -> Expr {
        Const(ExtReal::from(v))
    }

    pub fn var(i: usize) -> Expr {
        Var(i)
    }

    /// Largest variable index + 1 (0 for constants).
    pub fn arity(&self) -> usize {
        match self {
            Const(_) => 0,
            Var(i) => i + 1,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => a.arity().max(b.arity()),
            PowInt(a, _) | Exp(a) | Abs(a) | Neg(a) => a.arity(),
        }
    }

    /// Evaluates with `∞ − ∞ = ∞` and `0·∞ = 0`.
    pub fn eval(&self, x: &[f64]) -> Result<f64, EvalError> {
        let v = match self {
            Const(c) => c.to_f64(),
            Var(i) => x[*i],
            Add(a, b) => add_f64(a.eval(x)?, b.eval(x)?),
            Sub(a, b) => add_f64(a.eval(x)?, -b.eval(x)?),
            Mul(a, b) => {
                let (p, q) = (a.eval(x)?, b.eval(x)?);
                if p == 0.0 || q == 0.0 {
                    0.0
                } else {
                    p * q
                }
            }
            Div(a, b) => {
                let q = b.eval(x)?;
                if q == 0.0 {
                    return Err(EvalError::DivByZero(x.to_vec()));
                }
                a.eval(x)? / q
            }
            PowInt(a, k) => a.eval(x)?.powi(*k as i32),
            Exp(a) => a.eval(x)?.exp(),
            Abs(a) => a.eval(x)?.abs(),
            Neg(a) => -a.eval(x)?,
        };
        if v.is_nan() {
            Err(EvalError::Undefined(x.to_vec()))
        } else {
            Ok(v)
        }
    }

    /// Value and one-sided directional derivative `lim_{t↓0} (e(x + t·d) − e(x))/t`.
    ///
    /// Exact for the grammar: every node is directionally differentiable, and at a zero of
    /// an absolute value the one-sided rate is the absolute value of the inner rate.
    pub fn dir_deriv(&self, x: &[f64], d: &[f64]) -> Result<(f64, f64), EvalError> {
        let undefined = || EvalError::Undefined(x.to_vec());
        let (v, dv) = match self {
            Const(c) => (c.to_f64(), 0.0),
            Var(i) => (x[*i], d[*i]),
            Add(a, b) => {
                let ((p, dp), (q, dq)) = (a.dir_deriv(x, d)?, b.dir_deriv(x, d)?);
                (add_f64(p, q), dp + dq)
            }
            Sub(a, b) => {
                let ((p, dp), (q, dq)) = (a.dir_deriv(x, d)?, b.dir_deriv(x, d)?);
                (add_f64(p, -q), dp - dq)
            }
            Mul(a, b) => {
                let ((p, dp), (q, dq)) = (a.dir_deriv(x, d)?, b.dir_deriv(x, d)?);
                (p * q, dp * q + p * dq)
            }
            Div(a, b) => {
                let ((p, dp), (q, dq)) = (a.dir_deriv(x, d)?, b.dir_deriv(x, d)?);
                if q == 0.0 {
                    return Err(EvalError::DivByZero(x.to_vec()));
                }
                (p / q, (dp * q - p * dq) / (q * q))
            }
            PowInt(a, k) => {
                let (p, dp) = a.dir_deriv(x, d)?;
                let dk = if *k == 0 { 0.0 } else { *k as f64 * p.powi(*k as i32 - 1) * dp };
                (p.powi(*k as i32), dk)
            }
            Exp(a) => {
                let (p, dp) = a.dir_deriv(x, d)?;
                (p.exp(), p.exp() * dp)
            }
            Abs(a) => {
                let (p, dp) = a.dir_deriv(x, d)?;
                let slope = if p > 0.0 {
                    dp
                } else if p < 0.0 {
                    -dp
                } else {
                    dp.abs()
                };
                (p.abs(), slope)
            }
            Neg(a) => {
                let (p, dp) = a.dir_deriv(x, d)?;
                (-p, -dp)
            }
        };
        if v.is_nan() || dv.is_nan() {
            Err(undefined())
        } else {
            Ok((v, dv))
        }
    }

    /// Symbolic partial derivative with respect to variable `i`.
    ///
    /// `|g|` differentiates to `g·g′/|g|`, valid away from zeros of `g`.
    pub fn derivative(&self, i: usize) -> Expr {
        match self {
            Const(_) => num(0.0),
            Var(j) => num(if *j == i { 1.0 } else { 0.0 }),
            Add(a, b) => add(a.derivative(i), b.derivative(i)),
            Sub(a, b) => sub_e(a.derivative(i), b.derivative(i)),
            Mul(a, b) => add(
                mul(a.derivative(i), (**b).clone()),
                mul((**a).clone(), b.derivative(i)),
            ),
            Div(a, b) => {
                let db = b.derivative(i);
                if as_num(&db) == Some(0.0) {
                    return div(a.derivative(i), (**b).clone());
                }
                let numer = sub_e(
                    mul(a.derivative(i), (**b).clone()),
                    mul((**a).clone(), db),
                );
                div(numer, powi((**b).clone(), 2))
            }
            PowInt(a, k) => match k {
                0 => num(0.0),
                _ => mul(mul(num(*k as f64), powi((**a).clone(), k - 1)), a.derivative(i)),
            },
            Exp(a) => mul(Exp(a.clone()), a.derivative(i)),
            Abs(a) => div(mul((**a).clone(), a.derivative(i)), Abs(a.clone())),
            Neg(a) => neg(a.derivative(i)),
        }
    }

    /// Replaces every variable `Var(i)` by `sub(i)`.
    pub fn substitute(&self, sub: &dyn Fn(usize) -> Expr) -> Expr {
        let s = |e: &Expr| Box::new(e.substitute(sub));
        match self {
            Const(_) => self.clone(),
            Var(i) => sub(*i),
            Add(a, b) => Add(s(a), s(b)),
            Sub(a, b) => Sub(s(a), s(b)),
            Mul(a, b) => Mul(s(a), s(b)),
            Div(a, b) => Div(s(a), s(b)),
            PowInt(a, k) => PowInt(s(a), *k),
            Exp(a) => Exp(s(a)),
            Abs(a) => Abs(s(a)),
            Neg(a) => Neg(s(a)),
        }
    }

    /// `(coefficients, constant)` when the expression is affine in `dim` variables.
    pub fn as_affine(&self, dim: usize) -> Option<(Vec<f64>, f64)> {
        let scaled = |(c, k): (Vec<f64>, f64), s: f64| (c.iter().map(|v| v * s).collect(), k * s);
        let combine = |(c1, k1): (Vec<f64>, f64), (c2, k2): (Vec<f64>, f64), s: f64| {
            (c1.iter().zip(&c2).map(|(a, b)| a + s * b).collect(), k1 + s * k2)
        };
        match self {
            Const(ExtReal::Finite(v)) => Some((vec![0.0; dim], *v)),
            Const(_) => None,
            Var(i) if *i < dim => {
                let mut c = vec![0.0; dim];
                c[*i] = 1.0;
                Some((c, 0.0))
            }
            Var(_) => None,
            Add(a, b) => Some(combine(a.as_affine(dim)?, b.as_affine(dim)?, 1.0)),
            Sub(a, b) => Some(combine(a.as_affine(dim)?, b.as_affine(dim)?, -1.0)),
            Neg(a) => Some(scaled(a.as_affine(dim)?, -1.0)),
            Mul(a, b) => {
                let (pa, pb) = (a.as_affine(dim)?, b.as_affine(dim)?);
                if pa.0.iter().all(|v| *v == 0.0) {
                    Some(scaled(pb, pa.1))
                } else if pb.0.iter().all(|v| *v == 0.0) {
                    Some(scaled(pa, pb.1))
                } else {
                    None
                }
            }
            Div(a, b) => {
                let pb = b.as_affine(dim)?;
                if pb.0.iter().any(|v| *v != 0.0) || pb.1 == 0.0 {
                    return None;
                }
                Some(scaled(a.as_affine(dim)?, 1.0 / pb.1))
            }
            PowInt(a, 1) => a.as_affine(dim),
            PowInt(_, 0) => Some((vec![0.0; dim], 1.0)),
            _ => None,
        }
    }

    /// Visits every subexpression in prefix order.
    pub fn visit(&self, f: &mut dyn FnMut(&Expr)) {
        f(self);
        match self {
            Const(_) | Var(_) => {}
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            PowInt(a, _) | Exp(a) | Abs(a) | Neg(a) => a.visit(f),
        }
    }

    pub fn contains_abs(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= matches!(e, Abs(_)));
        found
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Mul(Box::new(self), Box::new(rhs))
    }
}

const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

fn prec(e: &Expr) -> u8 {
    match e {
        Add(..) | Sub(..) => 1,
        Mul(..) | Div(..) => 2,
        Neg(_) => 3,
        PowInt(..) => 4,
        Const(ExtReal::Finite(v)) if *v < 0.0 => 3,
        Const(ExtReal::NegInf) => 3,
        _ => 5,
    }
}

struct Wrapped<'a>(&'a Expr, u8);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if prec(self.0) < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const(c) => write!(f, "{c}"),
            Var(i) => match VAR_NAMES.get(*i) {
                Some(n) => write!(f, "{n}"),
                None => write!(f, "x{}", i + 1),
            },
            Add(a, b) => write!(f, "{} + {}", Wrapped(a, 1), Wrapped(b, 2)),
            Sub(a, b) => write!(f, "{} - {}", Wrapped(a, 1), Wrapped(b, 2)),
            Mul(a, b) => write!(f, "{}*{}", Wrapped(a, 2), Wrapped(b, 3)),
            Div(a, b) => write!(f, "{}/{}", Wrapped(a, 2), Wrapped(b, 3)),
            PowInt(a, k) => write!(f, "{}^{k}", Wrapped(a, 5)),
            Exp(a) => write!(f, "exp({a})"),
            Abs(a) => write!(f, "abs({a})"),
            Neg(a) => write!(f, "-{}", Wrapped(a, 4)),
        }
    }
}

/// Sign changes and exact zeros of a univariate expression on `[lo, hi]`, located by a
/// uniform scan with `samples` cells and bisection to machine precision.
pub fn roots_1d(e: &Expr, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let at = |x: f64| e.eval(&[x]).ok();
    let mut roots = Vec::new();
    let step = (hi - lo) / samples as f64;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=samples {
        let x = if k == samples { hi } else { lo + step * k as f64 };
        let Some(v) = at(x) else {
            prev = None;
            continue;
        };
        if v == 0.0 {
            roots.push(x);
        } else if let Some((px, pv)) = prev {
            if pv != 0.0 && pv.signum() != v.signum() {
                let (mut a, mut b) = (px, x);
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if m <= a || m >= b {
                        break;
                    }
                    match at(m) {
                        Some(mv) if mv == 0.0 => {
                            a = m;
                            b = m;
                            break;
                        }
                        Some(mv) if mv.signum() == pv.signum() => a = m,
                        Some(_) => b = m,
                        None => break,
                    }
                }
                let r = if at(a).is_some_and(|v| v.abs() <= at(b).map_or(f64::INFINITY, f64::abs)) { a } else { b };
                roots.push(r);
            }
        }
        prev = Some((x, v));
    }
    roots.dedup();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcdsl::parse::parse_expr;
    use proptest::prelude::*;

    fn p(s: &str) -> Expr {
        parse_expr(s, 1).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let cube = p("x^3/3");
        assert_eq!(cube.derivative(0).to_string(), "x^2");
        assert_eq!(p("exp(x) - 1").derivative(0).to_string(), "exp(x)");
        // oracle: central finite differences of 1/(x+1) - 1 against -1/(x+1)^2
        let f = p("1/(x+1) - 1");
        let df = f.derivative(0);
        for x in [-0.5, -0.25, 0.0, 0.5, 2.0] {
            let h = 1e-6;
            let fd = (f.eval(&[x + h]).unwrap() - f.eval(&[x - h]).unwrap()) / (2.0 * h);
            let closed = -1.0 / ((x + 1.0) * (x + 1.0));
            assert!((df.eval(&[x]).unwrap() - closed).abs() < 1e-12);
            assert!((fd - closed).abs() < 1e-6);
        }
    }

    #[test]
    fn directional_derivative_of_abs() {
        let f = p("-abs(x)");
        assert_eq!(f.dir_deriv(&[0.0], &[1.0]).unwrap(), (-0.0, -1.0));
        assert_eq!(f.dir_deriv(&[0.0], &[-1.0]).unwrap(), (-0.0, -1.0));
        assert_eq!(f.dir_deriv(&[-2.0], &[1.0]).unwrap(), (-2.0, 1.0));
        let g = p("abs(abs(x) - 1)");
        assert_eq!(g.dir_deriv(&[1.0], &[-1.0]).unwrap().1, 1.0);
    }

    #[test]
    fn evaluation_conventions() {
        assert_eq!(p("inf - inf").eval(&[0.0]).unwrap(), f64::INFINITY);
        assert_eq!(p("0 * inf").eval(&[0.0]).unwrap(), 0.0);
        assert!(matches!(p("1/x").eval(&[0.0]), Err(EvalError::DivByZero(_))));
        assert_eq!(p("-abs(x)").eval(&[-2.0]).unwrap(), -2.0);
    }

    #[test]
    fn affine_detection() {
        let e = parse_expr("2*x - y/4 + 3", 2).unwrap();
        assert_eq!(e.as_affine(2), Some((vec![2.0, -0.25], 3.0)));
        assert_eq!(parse_expr("x*y", 2).unwrap().as_affine(2), None);
    }

    #[test]
    fn roots_are_located() {
        let r = roots_1d(&p("x^2 - 2"), 0.0, 3.0, 64);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(roots_1d(&p("x"), -1.0, 1.0, 64), vec![0.0]);
    }

    fn smooth_family() -> impl Strategy<Value = &'static str> {
        prop_oneof![
            Just("x^3/3"),
            Just("1/(x+1) - 1"),
            Just("exp(x) - 1"),
            Just("x*exp(-x^2)"),
            Just("(x - 1)^4 - 2*x"),
            Just("exp(x)/(x^2 + 1)"),
        ]
    }

    proptest! {
        #[test]
        fn symbolic_matches_finite_differences(src in smooth_family(), x in -0.45f64..3.0) {
            let f = p(src);
            let df = f.derivative(0);
            let h = 1e-5;
            let fd = (f.eval(&[x + h]).unwrap() - f.eval(&[x - h]).unwrap()) / (2.0 * h);
            let sym = df.eval(&[x]).unwrap();
            prop_assert!((fd - sym).abs() <= 1e-4 * (1.0 + sym.abs()));
            let (_, forward) = f.dir_deriv(&[x], &[1.0]).unwrap();
            prop_assert!((forward - sym).abs() <= 1e-12 * (1.0 + sym.abs()));
        }
    }
}
