use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// `re + i·im` with exact rational parts.
pub type GaussianRational = Complex<Rational>;

/// `n/d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn gauss(re: Rational, im: Rational) -> GaussianRational {
    Complex::new(re, im)
}

pub fn is_integer(x: &Rational) -> bool {
    x.is_integer()
}

/// Fractional part `{x} = x - floor(x)`, in `[0, 1)`.
pub fn fract(x: &Rational) -> Rational {
    x - x.floor()
}

/// Parse `"p/q"`, `"p"` or `"-p/q"`. Whitespace around the tokens is allowed;
/// a zero denominator is rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Display form rounded half away from zero to `digits` places. Never used
/// in a computation.
pub fn to_decimal(x: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let scaled = x.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + Rational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
    let sign = if x.is_negative() && !rounded.is_zero() { "-" } else { "" };
    let whole = &rounded / &scale;
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    let frac = (&rounded % &scale).to_string();
    format!("{sign}{whole}.{frac:0>width$}", width = digits as usize)
}

/// Ceiling of a rational as an `i64`.
pub(crate) fn ceil_i64(x: &Rational) -> i64 {
    to_i64(&x.ceil().to_integer())
}

pub(crate) fn floor_i64(x: &Rational) -> i64 {
    to_i64(&x.floor().to_integer())
}

fn to_i64(n: &BigInt) -> i64 {
    i64::try_from(n).expect("search window exceeds i64")
}

pub(crate) fn sign_of(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub(crate) fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for j in 2..=n {
        acc *= BigInt::from(j);
    }
    Rational::from_integer(acc)
}

/// Largest integer whose square is `<= n` (for `n >= 0`).
pub(crate) fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

/// Exact square root of a nonnegative rational, if it has one.
pub(crate) fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (sn, sd) = (isqrt(n), isqrt(d));
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rational::new(sn, sd))
}
