use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::jets::Jet3;
use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }
}

/// Expression over the chart coordinates `x1, x2, x3`.
///
/// Variables are stored by zero-based index. `Pow` only takes integer
/// exponents; general powers must be spelled with `exp` and `log`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

/// Arithmetic shared by plain `f64` evaluation and jet evaluation.
trait Evaluable: Sized + Copy {
    fn constant(c: f64) -> Self;
    fn variable(k: usize, p: &Point) -> Self;
    fn value(&self) -> f64;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn div(self, o: Self) -> Self;
    fn neg(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn call(self, f: Func) -> Self;
    fn finite(&self) -> bool;
    /// Jets need derivatives of sqrt, so sqrt(0) is a domain error for them.
    const STRICT_SQRT: bool;
}

impl Evaluable for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn variable(k: usize, p: &Point) -> Self {
        p[k]
    }
    fn value(&self) -> f64 {
        *self
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn div(self, o: Self) -> Self {
        self / o
    }
    fn neg(self) -> Self {
        -self
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn call(self, f: Func) -> Self {
        match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Tan => self.tan(),
            Func::Exp => self.exp(),
            Func::Log => self.ln(),
            Func::Sqrt => self.sqrt(),
            Func::Sinh => self.sinh(),
            Func::Cosh => self.cosh(),
            Func::Tanh => self.tanh(),
        }
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
    const STRICT_SQRT: bool = false;
}

impl Evaluable for Jet3 {
    fn constant(c: f64) -> Self {
        Jet3::constant(c)
    }
    fn variable(k: usize, p: &Point) -> Self {
        Jet3::variable(k, p[k])
    }
    fn value(&self) -> f64 {
        Jet3::value(self)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn div(self, o: Self) -> Self {
        self / o
    }
    fn neg(self) -> Self {
        -self
    }
    fn powi(self, n: i32) -> Self {
        Jet3::powi(&self, n)
    }
    fn call(self, f: Func) -> Self {
        match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Tan => self.tan(),
            Func::Exp => self.exp(),
            Func::Log => self.ln(),
            Func::Sqrt => self.sqrt(),
            Func::Sinh => self.sinh(),
            Func::Cosh => self.cosh(),
            Func::Tanh => self.tanh(),
        }
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
    const STRICT_SQRT: bool = true;
}

impl Expr {
    pub fn constant(c: f64) -> Self {
        Expr::Const(c)
    }

    /// Coordinate `x{k+1}`.
    pub fn var(k: usize) -> Self {
        assert!(k < 3, "only x1, x2, x3 exist");
        Expr::Var(k)
    }

    pub fn call(f: Func, arg: Expr) -> Self {
        Expr::Call(f, Box::new(arg))
    }

    pub fn pow(self, n: i32) -> Self {
        Expr::Pow(Box::new(self), n)
    }

    pub fn sin(self) -> Self {
        Self::call(Func::Sin, self)
    }

    pub fn cos(self) -> Self {
        Self::call(Func::Cos, self)
    }

    pub fn exp(self) -> Self {
        Self::call(Func::Exp, self)
    }

    pub fn is_zero_constant(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == 0.0)
    }

    pub fn eval(&self, p: &Point) -> Result<f64> {
        self.eval_generic(p)
    }

    /// Exact order-3 Taylor jet of the expression at `p`.
    pub fn eval_jet(&self, p: &Point) -> Result<Jet3> {
        self.eval_generic(p)
    }

    fn eval_generic<T: Evaluable>(&self, p: &Point) -> Result<T> {
        let out = match self {
            Expr::Const(c) => T::constant(*c),
            Expr::Var(k) => T::variable(*k, p),
            Expr::Neg(a) => a.eval_generic::<T>(p)?.neg(),
            Expr::Add(a, b) => a.eval_generic::<T>(p)?.add(b.eval_generic(p)?),
            Expr::Sub(a, b) => a.eval_generic::<T>(p)?.sub(b.eval_generic(p)?),
            Expr::Mul(a, b) => a.eval_generic::<T>(p)?.mul(b.eval_generic(p)?),
            Expr::Div(a, b) => {
                let num = a.eval_generic::<T>(p)?;
                let den = b.eval_generic::<T>(p)?;
                if den.value() == 0.0 {
                    return Err(Error::domain("division by zero", p));
                }
                num.div(den)
            }
            Expr::Pow(a, n) => {
                let base = a.eval_generic::<T>(p)?;
                if *n < 0 && base.value() == 0.0 {
                    return Err(Error::domain("zero raised to a negative power", p));
                }
                base.powi(*n)
            }
            Expr::Call(f, a) => {
                let arg = a.eval_generic::<T>(p)?;
                let x = arg.value();
                match f {
                    Func::Log if x <= 0.0 => {
                        return Err(Error::domain(format!("log of non-positive value {x}"), p))
                    }
                    Func::Sqrt if x < 0.0 || (T::STRICT_SQRT && x == 0.0) => {
                        return Err(Error::domain(
                            format!("sqrt of value {x} outside its smooth domain"),
                            p,
                        ))
                    }
                    Func::Tan if x.cos() == 0.0 => return Err(Error::domain("tan at a pole", p)),
                    _ => {}
                }
                arg.call(*f)
            }
        };
        if !out.finite() {
            return Err(Error::domain(
                format!("non-finite value while evaluating `{self}`"),
                p,
            ));
        }
        Ok(out)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(c) if *c < 0.0 => 3,
            Expr::Const(_) | Expr::Var(_) | Expr::Call(..) => 5,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the minimal parentheses needed to re-parse into the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                if *c < 0.0 {
                    write!(f, "(-{})", -c)
                } else {
                    write!(f, "{c}")
                }
            }
            Expr::Var(k) => write!(f, "x{}", k + 1),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_operand(f, a, 3)
            }
            Expr::Add(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" + ")?;
                write_operand(f, b, 2)
            }
            Expr::Sub(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" - ")?;
                write_operand(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_operand(f, a, 2)?;
                f.write_str("*")?;
                write_operand(f, b, 3)
            }
            Expr::Div(a, b) => {
                write_operand(f, a, 2)?;
                f.write_str("/")?;
                write_operand(f, b, 3)
            }
            Expr::Pow(a, n) => {
                write_operand(f, a, 5)?;
                if *n < 0 {
                    write!(f, "^({n})")
                } else {
                    write!(f, "^{n}")
                }
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
        impl $tr<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::$variant(Box::new(self), Box::new(Expr::Const(rhs)))
            }
        }
        impl $tr<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(Expr::Const(self)), Box::new(rhs))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}
