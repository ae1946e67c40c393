//! Expression trees over spacetime `(t, x, y, z)` with exact partial derivatives.
//!
//! The vocabulary is deliberately small: constants, the four coordinates,
//! sums, products, integer powers, `sin`, `cos` and `exp`. It is closed under
//! differentiation, so every user-supplied scalar function has analytic
//! derivatives of all orders.

mod parse;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

pub use parse::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T,
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::T, Var::X, Var::Y, Var::Z];

    /// Spacetime index μ (t = 0).
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Point in spacetime, natural units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpacetimePoint {
    pub const ORIGIN: SpacetimePoint = SpacetimePoint::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        SpacetimePoint { t, x, y, z }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        SpacetimePoint::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    pub fn get(&self, v: Var) -> f64 {
        match v {
            Var::T => self.t,
            Var::X => self.x,
            Var::Y => self.y,
            Var::Z => self.z,
        }
    }

    /// Copy of the point moved by `delta` along `v`.
    pub fn shifted(&self, v: Var, delta: f64) -> Self {
        let mut a = self.to_array();
        a[v.index()] += delta;
        SpacetimePoint::from_array(a)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }
}

#[derive(Debug, PartialEq)]
enum Node {
    Const(f64),
    Var(Var),
    Add(ScalarExpr, ScalarExpr),
    Mul(ScalarExpr, ScalarExpr),
    Pow(ScalarExpr, i32),
    Sin(ScalarExpr),
    Cos(ScalarExpr),
    Exp(ScalarExpr),
}

/// Immutable, cheaply clonable expression tree.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarExpr(Arc<Node>);

impl ScalarExpr {
    fn node(n: Node) -> Self {
        ScalarExpr(Arc::new(n))
    }

    pub fn constant(c: f64) -> Self {
        Self::node(Node::Const(c))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn var(v: Var) -> Self {
        Self::node(Node::Var(v))
    }

    pub fn t() -> Self {
        Self::var(Var::T)
    }
    pub fn x() -> Self {
        Self::var(Var::X)
    }
    pub fn y() -> Self {
        Self::var(Var::Y)
    }
    pub fn z() -> Self {
        Self::var(Var::Z)
    }

    pub fn as_const(&self) -> Option<f64> {
        match *self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    pub fn add(a: &ScalarExpr, b: &ScalarExpr) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Self::constant(x + y),
            (Some(0.0), _) => b.clone(),
            (_, Some(0.0)) => a.clone(),
            // keep constants on the left
            (None, Some(_)) => Self::node(Node::Add(b.clone(), a.clone())),
            _ => Self::node(Node::Add(a.clone(), b.clone())),
        }
    }

    pub fn mul(a: &ScalarExpr, b: &ScalarExpr) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Self::constant(x * y),
            (Some(0.0), _) | (_, Some(0.0)) => Self::zero(),
            (Some(1.0), _) => b.clone(),
            (_, Some(1.0)) => a.clone(),
            (None, Some(y)) => Self::mul(&Self::constant(y), a),
            (Some(x), None) => {
                // fold nested constant factors: c1 * (c2 * e)
                if let Node::Mul(l, r) = &*b.0 {
                    if let Some(c2) = l.as_const() {
                        return Self::mul(&Self::constant(x * c2), r);
                    }
                }
                Self::node(Node::Mul(a.clone(), b.clone()))
            }
            (None, None) => Self::node(Node::Mul(a.clone(), b.clone())),
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::mul(&Self::constant(k), self)
    }

    pub fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Self::one();
        }
        if n == 1 {
            return self.clone();
        }
        if let Some(c) = self.as_const() {
            return Self::constant(c.powi(n));
        }
        if let Node::Pow(base, k) = &*self.0 {
            if let Some(prod) = k.checked_mul(n) {
                return base.powi(prod);
            }
        }
        Self::node(Node::Pow(self.clone(), n))
    }

    pub fn sin(&self) -> Self {
        match self.as_const() {
            Some(c) => Self::constant(c.sin()),
            None => Self::node(Node::Sin(self.clone())),
        }
    }

    pub fn cos(&self) -> Self {
        match self.as_const() {
            Some(c) => Self::constant(c.cos()),
            None => Self::node(Node::Cos(self.clone())),
        }
    }

    pub fn exp(&self) -> Self {
        match self.as_const() {
            Some(c) => Self::constant(c.exp()),
            None => Self::node(Node::Exp(self.clone())),
        }
    }

    /// Numeric value at `p`. Any non-finite intermediate is an error.
    pub fn eval(&self, p: &SpacetimePoint) -> Result<f64> {
        let v = match &*self.0 {
            Node::Const(c) => *c,
            Node::Var(v) => p.get(*v),
            Node::Add(a, b) => a.eval(p)? + b.eval(p)?,
            Node::Mul(a, b) => a.eval(p)? * b.eval(p)?,
            Node::Pow(a, n) => a.eval(p)?.powi(*n),
            Node::Sin(a) => a.eval(p)?.sin(),
            Node::Cos(a) => a.eval(p)?.cos(),
            Node::Exp(a) => a.eval(p)?.exp(),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { expr: self.to_string() })
        }
    }

    /// Exact partial derivative with respect to `v`.
    pub fn diff(&self, v: Var) -> ScalarExpr {
        match &*self.0 {
            Node::Const(_) => Self::zero(),
            Node::Var(w) => Self::constant(if *w == v { 1.0 } else { 0.0 }),
            Node::Add(a, b) => Self::add(&a.diff(v), &b.diff(v)),
            Node::Mul(a, b) => Self::add(&Self::mul(&a.diff(v), b), &Self::mul(a, &b.diff(v))),
            Node::Pow(a, n) => Self::mul(&Self::mul(&Self::constant(*n as f64), &a.powi(n - 1)), &a.diff(v)),
            Node::Sin(a) => Self::mul(&a.cos(), &a.diff(v)),
            Node::Cos(a) => Self::mul(&a.sin().scaled(-1.0), &a.diff(v)),
            Node::Exp(a) => Self::mul(self, &a.diff(v)),
        }
    }

    /// `∂ⁿ/∂v₁…∂vₙ`, applied left to right.
    pub fn diff_seq(&self, vars: &[Var]) -> ScalarExpr {
        vars.iter().fold(self.clone(), |e, &v| e.diff(v))
    }

    /// Whether the expression depends on `v` at all.
    pub fn depends_on(&self, v: Var) -> bool {
        match &*self.0 {
            Node::Const(_) => false,
            Node::Var(w) => *w == v,
            Node::Add(a, b) | Node::Mul(a, b) => a.depends_on(v) || b.depends_on(v),
            Node::Pow(a, _) | Node::Sin(a) | Node::Cos(a) | Node::Exp(a) => a.depends_on(v),
        }
    }

    /// Number of nodes, counting shared subtrees once per reference.
    pub fn size(&self) -> usize {
        match &*self.0 {
            Node::Const(_) | Node::Var(_) => 1,
            Node::Add(a, b) | Node::Mul(a, b) => 1 + a.size() + b.size(),
            Node::Pow(a, _) | Node::Sin(a) | Node::Cos(a) | Node::Exp(a) => 1 + a.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match &*self.0 {
            Node::Add(..) => 1,
            Node::Mul(..) => 2,
            Node::Const(c) if *c < 0.0 => 2,
            Node::Pow(..) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &ScalarExpr, min: u8| -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match &*self.0 {
            Node::Const(c) => write!(f, "{c:?}"),
            Node::Var(v) => write!(f, "{v}"),
            Node::Add(a, b) => {
                wrap(f, a, 1)?;
                f.write_str(" + ")?;
                wrap(f, b, 2)
            }
            Node::Mul(a, b) => {
                wrap(f, a, 2)?;
                f.write_str("*")?;
                wrap(f, b, 3)
            }
            Node::Pow(a, n) => {
                wrap(f, a, 4)?;
                if *n < 0 {
                    write!(f, "^({n})")
                } else {
                    write!(f, "^{n}")
                }
            }
            Node::Sin(a) => write!(f, "sin({a})"),
            Node::Cos(a) => write!(f, "cos({a})"),
            Node::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

impl std::str::FromStr for ScalarExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl From<f64> for ScalarExpr {
    fn from(c: f64) -> Self {
        ScalarExpr::constant(c)
    }
}

impl From<Var> for ScalarExpr {
    fn from(v: Var) -> Self {
        ScalarExpr::var(v)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                $body(&self, &rhs)
            }
        }
        impl $trait<&ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                $body(&self, rhs)
            }
        }
        impl $trait<ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                $body(self, &rhs)
            }
        }
        impl $trait<&ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                $body(self, rhs)
            }
        }
        impl $trait<f64> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: f64) -> ScalarExpr {
                $body(&self, &ScalarExpr::constant(rhs))
            }
        }
        impl $trait<f64> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: f64) -> ScalarExpr {
                $body(self, &ScalarExpr::constant(rhs))
            }
        }
        impl $trait<ScalarExpr> for f64 {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                $body(&ScalarExpr::constant(self), &rhs)
            }
        }
        impl $trait<&ScalarExpr> for f64 {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                $body(&ScalarExpr::constant(self), rhs)
            }
        }
    };
}

binop!(Add, add, |a: &ScalarExpr, b: &ScalarExpr| ScalarExpr::add(a, b));
binop!(Mul, mul, |a: &ScalarExpr, b: &ScalarExpr| ScalarExpr::mul(a, b));
binop!(Sub, sub, |a: &ScalarExpr, b: &ScalarExpr| ScalarExpr::add(
    a,
    &b.scaled(-1.0)
));

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        self.scaled(-1.0)
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        self.scaled(-1.0)
    }
}
