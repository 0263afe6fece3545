//! Exact Gaussian-rational scalars: complex numbers `a + b·i` with
//! arbitrary-precision rational `a`, `b`. Every coefficient in the engine is
//! one of these; there is no floating point anywhere.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors produced when parsing a coefficient string.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarParseError {
    #[error("empty coefficient")]
    Empty,
    #[error("bad coefficient grammar: {0:?}")]
    BadGrammar(String),
    #[error("zero denominator in coefficient: {0:?}")]
    ZeroDenominator(String),
}

/// An exact Gaussian rational `re + im·i`.
///
/// Equality is exact; both parts are kept as reduced fractions by the
/// underlying rational type.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    /// Exact rational `num/den`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// Exact imaginary rational `(num/den)·i`. Panics if `den == 0`.
    pub fn from_imag_ratio(num: i64, den: i64) -> Self {
        Scalar::new(
            BigRational::zero(),
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True iff the value is a strictly positive real.
    pub fn is_positive_real(&self) -> bool {
        self.im.is_zero() && self.re.is_positive()
    }

    /// True iff the value is a strictly negative real.
    pub fn is_negative_real(&self) -> bool {
        self.im.is_zero() && self.re.is_negative()
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²` as an exact rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero Scalar");
        Scalar::new(&self.re / &n, -(&self.im / &n))
    }

    /// Integer power of `i`, exponent taken mod 4.
    pub fn i_pow(e: u64) -> Self {
        match e % 4 {
            0 => Scalar::one(),
            1 => Scalar::i(),
            2 => -Scalar::one(),
            _ => -Scalar::i(),
        }
    }

    /// Parse the coefficient grammar `RAT | RAT±RAT"i" | RAT"i"` with
    /// `RAT = ["-"] digits ["/" digits]`.
    pub fn parse(s: &str) -> Result<Self, ScalarParseError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ScalarParseError::Empty);
        }
        if let Some(body) = s.strip_suffix('i') {
            // Either pure imaginary "RATi" or full "RAT±RATi".
            if let Some(split) = split_point(body) {
                let (re_part, rest) = body.split_at(split);
                let sign_negative = rest.starts_with('-');
                let im_part = &rest[1..];
                let re = parse_rat(re_part, s)?;
                let mut im = parse_rat(im_part, s)?;
                if sign_negative {
                    im = -im;
                }
                Ok(Scalar::new(re, im))
            } else {
                Ok(Scalar::new(BigRational::zero(), parse_rat(body, s)?))
            }
        } else {
            if split_point(s).is_some() {
                return Err(ScalarParseError::BadGrammar(s.to_string()));
            }
            Ok(Scalar::new(parse_rat(s, s)?, BigRational::zero()))
        }
    }
}

/// Position of the `+`/`-` separating real and imaginary parts, if any.
/// A leading `-` belongs to the real part's RAT and is not a separator.
fn split_point(s: &str) -> Option<usize> {
    s.char_indices()
        .skip(1)
        .find(|&(_, c)| c == '+' || c == '-')
        .map(|(idx, _)| idx)
}

fn parse_rat(tok: &str, whole: &str) -> Result<BigRational, ScalarParseError> {
    let bad = || ScalarParseError::BadGrammar(whole.to_string());
    let (neg, body) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    let (num_s, den_s) = match body.split_once('/') {
        Some((a, b)) => (a, b),
        None => (body, "1"),
    };
    if num_s.is_empty() || den_s.is_empty() {
        return Err(bad());
    }
    if !num_s.bytes().all(|b| b.is_ascii_digit()) || !den_s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let num: BigInt = num_s.parse().map_err(|_| bad())?;
    let den: BigInt = den_s.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(ScalarParseError::ZeroDenominator(whole.to_string()));
    }
    let mut r = BigRational::new(num, den);
    if neg {
        r = -r;
    }
    Ok(r)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)] // division is multiplication by the inverse
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

macro_rules! forward_value_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(self, &rhs)
            }
        }
    )*};
}

forward_value_ops!(Add::add, Sub::sub, Mul::mul, Div::div);
