//! Exact rational arithmetic and the text encodings used in configs and CSV output.
//!
//! Accepted input forms: `[-]digits`, `[-]digits/digits`, `[-]digits.digits` and
//! `2^-digits` (a power of one half).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Exact rational number kept in canonical reduced form with a positive denominator.
#[derive(Clone, Default)]
pub struct Rational(BigRational);

// Canonical form makes field-wise equality and hashing exact. The `Ratio` impls
// walk continued fractions, which is slow for the huge dyadics the engine produces.
impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        self.0.denom() == other.0.denom() && self.0.numer() == other.0.numer()
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.numer().hash(state);
        self.0.denom().hash(state);
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        if a.denom() == b.denom() {
            return a.numer().cmp(b.numer());
        }
        let signs = a.numer().sign().cmp(&b.numer().sign());
        if signs != Ordering::Equal {
            return signs;
        }
        (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Rendering modes for [`Rational::format`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatMode {
    /// `p/q`, or `p` for integers.
    Exact,
    /// `2^-k` when the value is a power of one half, otherwise exact.
    Pow2,
    /// Fixed-point with the given number of fractional digits. Rounded values
    /// carry a leading `~`.
    Decimal(usize),
}

impl Rational {
    pub fn new(numer: BigInt, denom: BigInt) -> Option<Self> {
        if denom.is_zero() {
            None
        } else {
            Some(Rational(BigRational::new(numer, denom)))
        }
    }

    pub fn from_integer<T: Into<BigInt>>(n: T) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// `n / d`; panics on `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `2^-k`.
    pub fn half_pow(k: u64) -> Self {
        Rational(BigRational::new(BigInt::one(), BigInt::one() << k))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// Returns `k` when `self == 2^-k` for some `k >= 0`.
    pub fn half_pow_exponent(&self) -> Option<u64> {
        if !self.numer().is_one() {
            return None;
        }
        let d = self.denom();
        let tz = d.trailing_zeros()?;
        if d.bits() == tz + 1 {
            Some(tz)
        } else {
            None
        }
    }

    /// Largest `n >= 0` with `2^n * self <= 1`, for `self` in `(0, 1]`.
    ///
    /// Equivalently `floor(-log2(self))`, computed without leaving the integers.
    pub fn halving_level(&self) -> Option<u64> {
        if !self.is_positive() || *self > Rational::one() {
            return None;
        }
        let p = self.numer();
        let q = self.denom();
        // 2^(bits(q) - bits(p)) is within a factor of two of q/p.
        let mut n = q.bits().saturating_sub(p.bits());
        while n > 0 && (p << n) > *q {
            n -= 1;
        }
        while (p << (n + 1)) <= *q {
            n += 1;
        }
        Some(n)
    }

    /// Lossy conversion for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Fall back to exponent arithmetic when either part overflows an f64.
            let nb = self.numer().bits() as i64;
            let db = self.denom().bits() as i64;
            let shift = nb - db;
            let scaled = if shift > 0 {
                BigRational::new(self.numer().clone(), self.denom() << (shift as u64))
            } else {
                BigRational::new(self.numer() << ((-shift) as u64), self.denom().clone())
            };
            scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift.clamp(-2000, 2000) as i32)
        })
    }

    pub fn format(&self, mode: FormatMode) -> String {
        match mode {
            FormatMode::Exact => self.to_string(),
            FormatMode::Pow2 => match self.half_pow_exponent() {
                Some(k) if k >= 1 => format!("2^-{k}"),
                _ => self.to_string(),
            },
            FormatMode::Decimal(digits) => self.format_decimal(digits),
        }
    }

    fn format_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let exact = scaled.is_integer();
        // round half away from zero
        let rounded = scaled.round().to_integer();
        let negative = rounded.sign() == Sign::Minus || (rounded.is_zero() && self.is_negative());
        let (int_part, frac_part) = rounded.abs().div_rem(&scale);
        let mut out = String::new();
        if !exact {
            out.push('~');
        }
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            out.push('.');
            out.push_str(&format!("{:0>width$}", frac_part.to_string(), width = digits));
        }
        out
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_digits(s: &str, whole: &str) -> Result<BigInt, ParseRationalError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRationalError::Malformed(whole.to_string()));
    }
    s.parse::<BigInt>()
        .map_err(|_| ParseRationalError::Malformed(whole.to_string()))
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = text.trim();
        if t.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        if let Some(exp) = t.strip_prefix("2^-") {
            let k = parse_digits(exp, t)?
                .to_u64()
                .ok_or_else(|| ParseRationalError::Malformed(t.to_string()))?;
            return Ok(Rational::half_pow(k));
        }
        let (negative, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let value = if let Some((n, d)) = body.split_once('/') {
            let n = parse_digits(n, t)?;
            let d = parse_digits(d, t)?;
            if d.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(t.to_string()));
            }
            BigRational::new(n, d)
        } else if let Some((i, frac)) = body.split_once('.') {
            let i = parse_digits(i, t)?;
            let f = parse_digits(frac, t)?;
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            BigRational::new(i * &scale + f, scale)
        } else {
            BigRational::from_integer(parse_digits(body, t)?)
        };
        Ok(Rational(if negative { -value } else { value }))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

/// `gcd(|a|, |b|)`. Powers of two are split off first: engine values are mostly
/// dyadic with small odd parts, where binary gcd on the full numbers is quadratic.
fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (a, b) = (a.magnitude(), b.magnitude());
    let (Some(ta), Some(tb)) = (a.trailing_zeros(), b.trailing_zeros()) else {
        return BigInt::from(a + b);
    };
    let mut x = a >> ta;
    let mut y = b >> tb;
    while !y.is_zero() {
        if x < y {
            std::mem::swap(&mut x, &mut y);
        }
        x %= &y;
        std::mem::swap(&mut x, &mut y);
    }
    BigInt::from(x << ta.min(tb))
}

fn raw(n: BigInt, d: BigInt) -> Rational {
    Rational(BigRational::new_raw(n, d))
}

fn add(x: &BigRational, y: &BigRational) -> Rational {
    let (a, b, c, d) = (x.numer(), x.denom(), y.numer(), y.denom());
    if b == d {
        let n = a + c;
        let g = gcd(&n, b);
        return if g.is_one() { raw(n, b.clone()) } else { raw(n / &g, b / &g) };
    }
    let g = gcd(b, d);
    if g.is_one() {
        return raw(a * d + c * b, b * d);
    }
    let (b1, d1) = (b / &g, d / &g);
    let n = a * &d1 + c * &b1;
    let g2 = gcd(&n, &g);
    raw(n / &g2, b1 * (d / g2))
}

fn mul(x: &BigRational, y: &BigRational) -> Rational {
    let (a, b, c, d) = (x.numer(), x.denom(), y.numer(), y.denom());
    let g1 = gcd(a, d);
    let g2 = gcd(c, b);
    raw((a / &g1) * (c / &g2), (b / &g2) * (d / &g1))
}

impl Add<&Rational> for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        add(&self.0, &rhs.0)
    }
}

impl Sub<&Rational> for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        add(&self.0, &-&rhs.0)
    }
}

impl Mul<&Rational> for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        mul(&self.0, &rhs.0)
    }
}

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        mul(&self.0, &rhs.0.recip())
    }
}

macro_rules! forward_binop {
    ($imp:ident, $method:ident) => {
        impl $imp<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl $imp<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl $imp<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}
