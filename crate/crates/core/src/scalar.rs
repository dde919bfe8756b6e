//! Complex scalars in two arithmetic modes.
//!
//! [`GaussRat`] is an exact Gaussian rational `a + b i` with `a, b` in Q.
//! `Complex64` is the floating mode; every zero or equality decision it takes
//! goes through a [`Tolerance`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{GzError, Result};
use crate::linalg::{self, Dense};
use crate::poly::{self, MonicPoly, Spectrum};

/// Arithmetic mode tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = GzError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(GzError::Schema(format!("unknown mode {other:?}"))),
        }
    }
}

/// Thresholds for floating-point decisions. All three are relative to the
/// scale of the input (its largest absolute entry, floored at one) and are
/// ignored in exact mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative singular-value cutoff for rank decisions.
    pub eps_rank: f64,
    /// Root-clustering radius.
    pub eps_root: f64,
    /// Residual comparison threshold.
    pub eps_eq: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_rank: 1e-9,
            eps_root: 1e-8,
            eps_eq: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(eps_rank: f64, eps_root: f64, eps_eq: f64) -> Result<Self> {
        for (name, v) in [("eps_rank", eps_rank), ("eps_root", eps_root), ("eps_eq", eps_eq)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(GzError::InvalidTolerance(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Tolerance {
            eps_rank,
            eps_root,
            eps_eq,
        })
    }

    /// Absolute equality threshold at the given scale.
    pub fn eq_at(&self, scale: f64) -> f64 {
        self.eps_eq * scale.max(1.0)
    }

    /// Clustering radius for a root of multiplicity `mult`. A root of
    /// multiplicity m moves by roughly delta^(1/m) under a relative coefficient
    /// perturbation delta, so `eps_root` is read as the coefficient accuracy.
    pub fn root_radius(&self, mult: usize, scale: f64) -> f64 {
        self.eps_root.powf(1.0 / mult.max(1) as f64) * scale.max(1.0)
    }
}

/// A complex scalar usable by every algorithm in the crate.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_parts(re: i64, im: i64) -> Self {
        Self::from_i64(re) + Self::i() * Self::from_i64(im)
    }
    fn i() -> Self;

    /// Exact binary conversion in exact mode.
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(&self) -> Complex64;

    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Structural zero test: exact equality. Float code paths use
    /// [`Scalar::is_negligible`] instead.
    fn is_exact_zero(&self) -> bool;

    /// Zero test at an absolute threshold; exact mode ignores the threshold.
    fn is_negligible(&self, abs_tol: f64) -> bool {
        if Self::MODE == Mode::Exact {
            self.is_exact_zero()
        } else {
            self.magnitude() <= abs_tol
        }
    }

    fn approx_eq(&self, other: &Self, abs_tol: f64) -> bool {
        (self.clone() - other.clone()).is_negligible(abs_tol)
    }

    /// Lexicographic order on C: real part first, then imaginary part.
    fn lex_cmp(&self, other: &Self, abs_tol: f64) -> Ordering;

    fn rank(a: &Dense<Self>, tol: &Tolerance) -> usize;
    fn nullspace(a: &Dense<Self>, tol: &Tolerance) -> Vec<Vec<Self>>;

    /// Roots with multiplicities of a monic polynomial.
    fn split(p: &MonicPoly<Self>, tol: &Tolerance) -> Result<Spectrum<Self>>;

    fn to_wire(&self) -> Value;
    fn from_wire(v: &Value) -> Result<Self>;
}

/// `a > b` in the lexicographic order on C.
pub fn lex_greater<S: Scalar>(a: &S, b: &S, tol: &Tolerance) -> bool {
    let scale = a.magnitude().max(b.magnitude());
    a.lex_cmp(b, tol.eq_at(scale)) == Ordering::Greater
}

/// Exact Gaussian rational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Least common denominator of both parts.
    pub fn denom_lcm(&self) -> BigInt {
        num_integer::lcm(self.re.denom().clone(), self.im.denom().clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: GaussRat) -> GaussRat {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::real(self.re * rhs.re);
        }
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: GaussRat) -> GaussRat {
        assert!(!rhs.is_exact_zero(), "division by zero Gaussian rational");
        if rhs.im.is_zero() {
            return GaussRat {
                re: self.re / &rhs.re,
                im: self.im / &rhs.re,
            };
        }
        let d = rhs.norm_sqr();
        GaussRat {
            re: (&self.re * &rhs.re + &self.im * &rhs.im) / &d,
            im: (&self.im * &rhs.re - &self.re * &rhs.im) / &d,
        }
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -self.re,
            im: -self.im,
        }
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // to_f64 only fails on overflow
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

fn rat_from_f64(v: f64) -> BigRational {
    BigRational::from_float(v).unwrap_or_else(BigRational::zero)
}

fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|_| GzError::Schema(format!("bad rational {s:?}")))
}

fn parse_rational_value(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else if let Some(f) = n.as_f64() {
                Ok(rat_from_f64(f))
            } else {
                Err(GzError::Schema(format!("bad number {n}")))
            }
        }
        other => Err(GzError::Schema(format!("expected rational, got {other}"))),
    }
}

fn pair(v: &Value) -> Result<(&Value, &Value)> {
    match v {
        Value::Array(a) if a.len() == 2 => Ok((&a[0], &a[1])),
        Value::Array(a) if a.len() == 1 => Ok((&a[0], &Value::Null)),
        _ => Err(GzError::Schema(format!("expected [re, im] pair, got {v}"))),
    }
}

impl Scalar for GaussRat {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        GaussRat::real(BigRational::zero())
    }

    fn one() -> Self {
        GaussRat::real(BigRational::one())
    }

    fn from_i64(v: i64) -> Self {
        GaussRat::real(BigRational::from_integer(BigInt::from(v)))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }

    fn from_c64(z: Complex64) -> Self {
        GaussRat::new(rat_from_f64(z.re), rat_from_f64(z.im))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn lex_cmp(&self, other: &Self, _abs_tol: f64) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    fn rank(a: &Dense<Self>, _tol: &Tolerance) -> usize {
        linalg::rref_nullspace(a).0
    }

    fn nullspace(a: &Dense<Self>, _tol: &Tolerance) -> Vec<Vec<Self>> {
        linalg::rref_nullspace(a).1
    }

    fn split(p: &MonicPoly<Self>, tol: &Tolerance) -> Result<Spectrum<Self>> {
        poly::split_gaussian_rational(p, tol)
    }

    fn to_wire(&self) -> Value {
        Value::Array(vec![
            Value::String(self.re.to_string()),
            Value::String(self.im.to_string()),
        ])
    }

    fn from_wire(v: &Value) -> Result<Self> {
        match v {
            Value::String(_) | Value::Number(_) => Ok(GaussRat::real(parse_rational_value(v)?)),
            _ => {
                let (re, im) = pair(v)?;
                let im = if im.is_null() {
                    BigRational::zero()
                } else {
                    parse_rational_value(im)?
                };
                Ok(GaussRat::new(parse_rational_value(re)?, im))
            }
        }
    }
}

fn float_value(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| GzError::Schema(format!("bad number {n}"))),
        Value::String(s) => {
            let r = parse_rational(s)?;
            Ok(rat_to_f64(&r))
        }
        other => Err(GzError::Schema(format!("expected number, got {other}"))),
    }
}

impl Scalar for Complex64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }

    fn from_c64(z: Complex64) -> Self {
        z
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn is_exact_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn lex_cmp(&self, other: &Self, abs_tol: f64) -> Ordering {
        let dre = self.re - other.re;
        if dre.abs() > abs_tol {
            return dre.partial_cmp(&0.0).unwrap_or(Ordering::Equal);
        }
        let dim = self.im - other.im;
        if dim.abs() > abs_tol {
            return dim.partial_cmp(&0.0).unwrap_or(Ordering::Equal);
        }
        Ordering::Equal
    }

    fn rank(a: &Dense<Self>, tol: &Tolerance) -> usize {
        linalg::svd_nullspace(a, tol).0
    }

    fn nullspace(a: &Dense<Self>, tol: &Tolerance) -> Vec<Vec<Self>> {
        linalg::svd_nullspace(a, tol).1
    }

    fn split(p: &MonicPoly<Self>, tol: &Tolerance) -> Result<Spectrum<Self>> {
        poly::split_float(p, tol)
    }

    fn to_wire(&self) -> Value {
        serde_json::json!([self.re, self.im])
    }

    fn from_wire(v: &Value) -> Result<Self> {
        match v {
            Value::String(_) | Value::Number(_) => Ok(Complex64::new(float_value(v)?, 0.0)),
            _ => {
                let (re, im) = pair(v)?;
                let im = if im.is_null() { 0.0 } else { float_value(im)? };
                Ok(Complex64::new(float_value(re)?, im))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussRat {
        GaussRat::from_ratio(n, d)
    }

    #[test]
    fn gaussian_division_roundtrips() {
        let a = GaussRat::from_parts(3, -2);
        let b = GaussRat::from_parts(1, 4);
        assert_eq!((a.clone() / b.clone()) * b, a);
    }

    #[test]
    fn lex_order_examples() {
        let tol = Tolerance::default();
        assert!(lex_greater(&GaussRat::from_i64(2), &GaussRat::from_i64(1), &tol));
        assert!(lex_greater(&GaussRat::from_parts(1, 2), &GaussRat::from_parts(1, 1), &tol));
        let z = GaussRat::from_parts(5, -7);
        assert!(!lex_greater(&z, &z, &tol));
        assert!(lex_greater(&Complex64::new(1.0, 2.0), &Complex64::new(1.0, 1.0), &tol));
        assert!(!lex_greater(&Complex64::new(1.0, 1.0), &Complex64::new(1.0, 1.0), &tol));
    }

    #[test]
    fn float_lex_uses_tolerance_on_real_part() {
        let tol = Tolerance::default();
        let a = Complex64::new(1.0 + 1e-13, 0.0);
        let b = Complex64::new(1.0, 0.5);
        assert!(lex_greater(&b, &a, &tol));
    }

    #[test]
    fn wire_formats() {
        let z = GaussRat::new(q(-1, 2).re, q(3, 1).re);
        let v = z.to_wire();
        assert_eq!(v, serde_json::json!(["-1/2", "3"]));
        assert_eq!(GaussRat::from_wire(&v).unwrap(), z);
        assert_eq!(GaussRat::from_wire(&serde_json::json!(4)).unwrap(), GaussRat::from_i64(4));
        let c = Complex64::new(0.25, -1.0);
        assert_eq!(Complex64::from_wire(&c.to_wire()).unwrap(), c);
        assert!(GaussRat::from_wire(&serde_json::json!({"re": 1})).is_err());
    }

    #[test]
    fn tolerance_rejects_nonpositive() {
        assert!(Tolerance::new(1e-9, 0.0, 1e-9).is_err());
        assert!(Tolerance::new(1e-9, 1e-8, f64::NAN).is_err());
        assert!(Tolerance::new(1e-9, 1e-8, 1e-9).is_ok());
    }
}
