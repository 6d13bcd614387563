//! Complex scalars and the surface expressions that denote them.
//!
//! Scalars are double-precision complex numbers. The rewrite rules compare
//! them bitwise on the `(re, im)` pair, so `PartialEq`/`Hash` go through
//! `f64::to_bits`; numeric tolerances belong to the test oracles, not here.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A complex number with semiring structure used for proof weights.
#[derive(Debug, Clone, Copy)]
pub struct Scalar {
    pub re: f64,
    pub im: f64,
}

impl Scalar {
    pub const ZERO: Scalar = Scalar { re: 0.0, im: 0.0 };
    pub const ONE: Scalar = Scalar { re: 1.0, im: 0.0 };
    pub const I: Scalar = Scalar { re: 0.0, im: 1.0 };

    pub fn new(re: f64, im: f64) -> Scalar {
        Scalar { re, im }
    }

    pub fn real(re: f64) -> Scalar {
        Scalar { re, im: 0.0 }
    }

    /// Squared modulus `re^2 + im^2`.
    pub fn norm_squared(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn is_zero(self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    pub fn is_one(self) -> bool {
        self == Scalar::ONE
    }

    /// Principal square root; nonnegative reals map to their nonnegative root.
    pub fn sqrt(self) -> Scalar {
        if self.im == 0.0 && self.re >= 0.0 {
            return Scalar::real(self.re.sqrt());
        }
        let r = (self.re * self.re + self.im * self.im).sqrt();
        let re = ((r + self.re) / 2.0).sqrt();
        let im = ((r - self.re) / 2.0).sqrt();
        Scalar::new(re, if self.im < 0.0 { -im } else { im })
    }

    pub fn approx_eq(self, other: Scalar, tol: f64) -> bool {
        (self.re - other.re).abs() <= tol && (self.im - other.im).abs() <= tol
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.re.to_bits() == other.re.to_bits() && self.im.to_bits() == other.im.to_bits()
    }
}

impl Eq for Scalar {}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.re.to_bits().hash(state);
        self.im.to_bits().hash(state);
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        let d = rhs.re * rhs.re + rhs.im * rhs.im;
        Scalar::new(
            (self.re * rhs.re + self.im * rhs.im) / d,
            (self.im * rhs.re - self.re * rhs.im) / d,
        )
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

impl fmt::Display for Scalar {
    /// Shortest round-trip decimal form: `0`, `-2`, `3i`, `1+2i`, `0.5-0.5i`.
    ///
    /// The printed form reparses to the bit-identical scalar (signed zeros
    /// included), because the term parser rebuilds `a+bi` shapes
    /// componentwise instead of evaluating a subtraction.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re_zero = self.re.to_bits() == 0.0f64.to_bits();
        let im_zero = self.im.to_bits() == 0.0f64.to_bits();
        if im_zero {
            return write!(f, "{}", self.re);
        }
        let im_part = |f: &mut fmt::Formatter<'_>, im: f64, lead_sign: bool| {
            if im == 1.0 {
                write!(f, "{}i", if lead_sign { "+" } else { "" })
            } else if im == -1.0 {
                write!(f, "-i")
            } else if im.is_sign_negative() {
                write!(f, "-{}i", -im)
            } else {
                write!(f, "{}{}i", if lead_sign { "+" } else { "" }, im)
            }
        };
        if re_zero {
            im_part(f, self.im, false)
        } else {
            write!(f, "{}", self.re)?;
            im_part(f, self.im, true)
        }
    }
}

/// Surface syntax for scalar constants, e.g. `1/sqrt(2)` or `(1+2i)*3`.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarExpr {
    /// A literal built componentwise by the parser (`2`, `-0`, `3-4i`).
    Lit(Scalar),
    ImaginaryUnit,
    Neg(Box<ScalarExpr>),
    Add(Box<ScalarExpr>, Box<ScalarExpr>),
    Sub(Box<ScalarExpr>, Box<ScalarExpr>),
    Mul(Box<ScalarExpr>, Box<ScalarExpr>),
    Div(Box<ScalarExpr>, Box<ScalarExpr>),
    Sqrt(Box<ScalarExpr>),
}

/// Raised when a denominator evaluates to exactly `0+0i`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("division by zero in scalar expression")]
pub struct DivisionByZero;

/// Evaluate a scalar expression to its complex value.
pub fn eval_scalar(e: &ScalarExpr) -> Result<Scalar, DivisionByZero> {
    match e {
        ScalarExpr::Lit(s) => Ok(*s),
        ScalarExpr::ImaginaryUnit => Ok(Scalar::I),
        ScalarExpr::Neg(a) => Ok(-eval_scalar(a)?),
        ScalarExpr::Add(a, b) => Ok(eval_scalar(a)? + eval_scalar(b)?),
        ScalarExpr::Sub(a, b) => Ok(eval_scalar(a)? - eval_scalar(b)?),
        ScalarExpr::Mul(a, b) => Ok(eval_scalar(a)? * eval_scalar(b)?),
        ScalarExpr::Div(a, b) => {
            let n = eval_scalar(a)?;
            let d = eval_scalar(b)?;
            if d.is_zero() {
                return Err(DivisionByZero);
            }
            Ok(n / d)
        }
        ScalarExpr::Sqrt(a) => Ok(eval_scalar(a)?.sqrt()),
    }
}
