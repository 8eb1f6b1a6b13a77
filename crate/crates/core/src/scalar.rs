//! Numeric back ends for kernels and densities.
//!
//! Every kernel and density computation is generic over [`Scalar`], which is
//! implemented for exact rationals ([`Rational`]) and for `f64`.
//! [`ExtFloat`] is a float with an unbounded exponent, used when fractional
//! powers of tiny exact quantities would underflow `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Field of kernel values: exact rationals or doubles.
pub trait Scalar: Clone + fmt::Debug + PartialOrd + Send + Sync + Signed + 'static {
    /// True when arithmetic is exact.
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact value when the back end is exact.
    fn to_rational(&self) -> Option<Rational>;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Equality within `tol` for floats, exact equality for rationals.
    fn close_to(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.to_f64() - other.to_f64()).abs() <= tol
        }
    }

    fn pow_u32(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ExtFloat::from_rational(self).to_f64()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        ExtFloat::from_rational(r).to_f64()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Option<Rational> {
        None
    }
}

/// Exact rational from an `f64` (every finite double is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `2^exp` as an exact rational; `exp` may be negative.
pub fn pow2(exp: i64) -> Rational {
    let p = BigInt::one() << exp.unsigned_abs();
    if exp >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses `"p"`, `"p/q"`, decimals with optional exponent (`"1.5e-3"`), and
/// powers of two (`"2^-40"`), all exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot parse {s:?} as a rational"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some(exp) = s.strip_prefix("2^") {
        let e: i64 = exp.trim_matches(|c| c == '(' || c == ')').parse().map_err(|_| bad())?;
        return Ok(pow2(e));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_rational(p)?;
        let q = parse_rational(q)?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(p / q);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{int_part}{frac_part}");
    let n = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let mut r = if scale >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, scale.unsigned_abs() as usize))
    };
    if negative {
        r = -r;
    }
    Ok(r)
}

/// Converts a parsed JSON number or string into a rational.
pub fn rational_from_json(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

/// Floor of log2 of a positive big integer, plus the top bits as a float
/// mantissa.
fn biguint_ext(n: &BigUint) -> ExtFloat {
    let bits = n.bits();
    if bits <= 63 {
        return ExtFloat::from_f64(n.to_u64().unwrap_or(0) as f64);
    }
    let shift = bits - 63;
    let top = (n >> shift).to_u64().unwrap_or(0);
    ExtFloat::new(top as f64, shift as i64)
}

/// Splits `x` into a mantissa in `[0.5, 1)` and a power of two.
fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    if exp_bits == 0 {
        // subnormal
        let (m, e) = frexp(x * f64::powi(2.0, 64));
        return (m, e - 64);
    }
    let e = exp_bits - 1022;
    let m_bits = (bits & !(0x7ffu64 << 52)) | (1022u64 << 52);
    (f64::from_bits(m_bits), e)
}

fn ldexp(m: f64, e: i64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    let e = e.clamp(-2200, 2200) as i32;
    // split to avoid intermediate overflow/underflow in powi
    let half = e / 2;
    m * f64::powi(2.0, half) * f64::powi(2.0, e - half)
}

/// Signed float with an `i64` binary exponent: `mant * 2^exp`, with
/// `|mant|` in `[0.5, 1)` or zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtFloat {
    mant: f64,
    exp: i64,
}

impl ExtFloat {
    pub const ZERO: ExtFloat = ExtFloat { mant: 0.0, exp: 0 };

    pub fn new(mant: f64, exp: i64) -> Self {
        let (m, e) = frexp(mant);
        if m == 0.0 {
            Self::ZERO
        } else {
            ExtFloat { mant: m, exp: e + exp }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(x, 0)
    }

    pub fn from_rational(r: &Rational) -> Self {
        if r.is_zero() {
            return Self::ZERO;
        }
        let num = biguint_ext(r.numer().magnitude());
        let den = biguint_ext(r.denom().magnitude());
        let q = num.div(den);
        if r.numer().sign() == Sign::Minus {
            q.neg()
        } else {
            q
        }
    }

    pub fn one() -> Self {
        Self::from_f64(1.0)
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0.0
    }

    pub fn is_negative(&self) -> bool {
        self.mant < 0.0
    }

    pub fn neg(self) -> Self {
        ExtFloat { mant: -self.mant, exp: self.exp }
    }

    pub fn abs(self) -> Self {
        ExtFloat { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.mant * other.mant, self.exp + other.exp)
    }

    pub fn div(self, other: Self) -> Self {
        assert!(!other.is_zero(), "ExtFloat division by zero");
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.mant / other.mant, self.exp - other.exp)
    }

    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let shift = hi.exp - lo.exp;
        if shift > 1100 {
            return hi;
        }
        Self::new(hi.mant + ldexp(lo.mant, -shift), hi.exp)
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    pub fn scale(self, c: f64) -> Self {
        self.mul(Self::from_f64(c))
    }

    /// `self^q` for `self >= 0`.
    pub fn powf(self, q: f64) -> Self {
        assert!(!self.is_negative(), "fractional power of a negative ExtFloat");
        if self.is_zero() {
            return if q == 0.0 { Self::one() } else { Self::ZERO };
        }
        let log2 = self.mant.log2() + self.exp as f64;
        let r = log2 * q;
        let e = r.floor();
        Self::new(f64::powf(2.0, r - e), e as i64)
    }

    pub fn log2(self) -> f64 {
        assert!(self.mant > 0.0, "log2 of a non-positive ExtFloat");
        self.mant.log2() + self.exp as f64
    }

    pub fn to_f64(self) -> f64 {
        ldexp(self.mant, self.exp)
    }

    /// `self <= other` up to relative tolerance `rel` of the larger magnitude.
    pub fn le_rel(self, other: Self, rel: f64) -> bool {
        if self.cmp_total(&other) != Ordering::Greater {
            return true;
        }
        let scale = if self.abs().cmp_total(&other.abs()) == Ordering::Greater {
            self.abs()
        } else {
            other.abs()
        };
        self.sub(other).cmp_total(&scale.scale(rel)) != Ordering::Greater
    }

    pub fn cmp_total(&self, other: &Self) -> Ordering {
        let sign = |x: &Self| {
            if x.mant > 0.0 {
                1
            } else if x.mant < 0.0 {
                -1
            } else {
                0
            }
        };
        let (sa, sb) = (sign(self), sign(other));
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let mag = self
            .exp
            .cmp(&other.exp)
            .then(self.mant.abs().partial_cmp(&other.mant.abs()).unwrap_or(Ordering::Equal));
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl PartialOrd for ExtFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_total(other))
    }
}

impl fmt::Display for ExtFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if (-1000..=1000).contains(&self.exp) {
            write!(f, "{:e}", self.to_f64())
        } else {
            // decimal mantissa and exponent
            let log10 = (self.mant.abs().log2() + self.exp as f64) * std::f64::consts::LOG10_2;
            let e10 = log10.floor();
            let m10 = 10f64.powf(log10 - e10);
            let sign = if self.mant < 0.0 { "-" } else { "" };
            write!(f, "{sign}{m10:.12}e{}", e10 as i64)
        }
    }
}

impl Serialize for ExtFloat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtFloat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let r = parse_rational(&s).map_err(serde::de::Error::custom)?;
        Ok(ExtFloat::from_rational(&r))
    }
}

/// Integer binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Least common multiple of rational denominators; used to keep sampled
/// rationals on a fixed grid.
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}
