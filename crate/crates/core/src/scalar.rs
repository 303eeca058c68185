//! Dual-mode scalars.
//!
//! A [`Scalar`] is either an arbitrary-precision rational (authoritative) or an
//! `f64` (fast sweeps). Arithmetic between two exact values stays exact; any
//! operation touching a float produces a float.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Tolerance used for float-mode sign decisions unless a caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Arithmetic mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` in lowest terms. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn float(x: f64) -> Self {
        Scalar::Float(x)
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// The exact value, or [`Error::NotExact`] for a float.
    pub fn exact(&self) -> Result<&BigRational> {
        self.as_exact().ok_or(Error::NotExact)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => ratio_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    /// Converts a float to the exact rational it represents (dyadic).
    pub fn to_exact(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(_) => Ok(self.clone()),
            Scalar::Float(x) => BigRational::from_float(*x)
                .map(Scalar::Exact)
                .ok_or_else(|| Error::InvalidParameter(x.to_string())),
        }
    }

    /// Same value in the requested mode.
    pub fn in_mode(&self, mode: Mode) -> Result<Scalar> {
        match mode {
            Mode::Exact => self.to_exact(),
            Mode::Float => Ok(Scalar::Float(self.to_f64())),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    /// Sign of the value. Exact values have an exact sign; floats within
    /// `tol` of zero count as zero.
    pub fn sign(&self, tol: f64) -> Ordering {
        match self {
            Scalar::Exact(r) => r.cmp(&BigRational::zero()),
            Scalar::Float(x) => {
                if *x > tol {
                    Ordering::Greater
                } else if *x < -tol {
                    Ordering::Less
                } else {
                    Ordering::Equal
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign(0.0) == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign(0.0) == Ordering::Less
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(libm::fabs(*x)),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(num_traits::pow(r.clone(), e as usize)),
            Scalar::Float(x) => Scalar::Float(libm::pow(*x, e as f64)),
        }
    }

    pub fn recip(&self) -> Result<Scalar> {
        Scalar::one().checked_div(self)
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Parses a literal in the requested mode. In exact mode, decimals are
    /// replaced by the nearest rational with denominator at most `max_den`.
    pub fn parse_in_mode(s: &str, mode: Mode, max_den: u64) -> Result<Scalar> {
        match mode {
            Mode::Float => Ok(Scalar::Float(s.parse::<Scalar>()?.to_f64())),
            Mode::Exact => {
                let s = s.trim();
                if is_float_literal(s) {
                    let r = parse_decimal_exact(s)?;
                    Ok(Scalar::Exact(limit_denominator(&r, &BigInt::from(max_den))))
                } else {
                    s.parse()
                }
            }
        }
    }
}

fn is_float_literal(s: &str) -> bool {
    s.contains(['.', 'e', 'E']) || s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("nan")
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge numerator or denominator: scale both down together.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Parses a plain decimal literal (`-12.5e-3`) into the exact rational it denotes.
pub fn parse_decimal_exact(s: &str) -> Result<BigRational> {
    let err = || Error::Parse(s.to_string());
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let mut digits = String::with_capacity(int_part.len() + frac_part.len());
    digits.push_str(int_part);
    digits.push_str(frac_part);
    let mut num: BigInt = digits.parse().map_err(|_| err())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

/// Closest rational to `r` whose denominator does not exceed `max_den`.
pub fn limit_denominator(r: &BigRational, max_den: &BigInt) -> BigRational {
    if r.denom() <= max_den {
        return r.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = core::mem::replace(&mut p1, p2);
        q0 = core::mem::replace(&mut q1, q2);
        let rem = &n - &a * &d;
        n = core::mem::replace(&mut d, rem);
    }
    let k = (max_den - &q0).div_floor(&q1);
    let semi = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = BigRational::new(p1, q1);
    if (&conv - r).abs() <= (&semi - r).abs() {
        conv
    } else {
        semi
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// `p/q` and integers parse exactly; decimal literals parse as floats.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = || Error::Parse(s.to_string());
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            return Ok(Scalar::Exact(BigRational::new(p, q)));
        }
        if is_float_literal(s) {
            return s.parse::<f64>().map(Scalar::Float).map_err(|_| err());
        }
        let n: BigInt = s.parse().map_err(|_| err())?;
        Ok(Scalar::Exact(BigRational::from_integer(n)))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", r),
            Scalar::Float(x) => write!(f, "{}", x),
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    _ => Scalar::Float(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (a, b) => Scalar::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                &self $op rhs
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl core::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl core::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}
