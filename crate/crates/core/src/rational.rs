//! Exact rational scalars and the few helpers the polynomial layer needs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact scalar field of the polynomial layer.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn pow(q: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}

/// Generalized binomial coefficient `p (p-1) ... (p-k+1) / k!` for rational `p`.
pub fn binomial(p: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * (p - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

pub fn factorial(k: u32) -> Rational {
    (1..=k).fold(Rational::one(), |acc, i| acc * int(i as i64))
}

/// Exact square root when `q` is the square of a rational.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(Rational::zero());
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Exact `q^{num/den}` when the `den`-th root of `q` is rational.
pub fn exact_power(q: &Rational, num: u32, den: u32) -> Option<Rational> {
    if den == 0 || q.is_negative() {
        return None;
    }
    let n = q.numer().nth_root(den);
    let d = q.denom().nth_root(den);
    if &num_traits::pow(n.clone(), den as usize) == q.numer() && &num_traits::pow(d.clone(), den as usize) == q.denom() {
        Some(pow(&Rational::new(n, d), num))
    } else {
        None
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal (`"1.25"`, `"-3e-2"`) exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fractional) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && fractional.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(fractional.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{whole}{fractional}").parse().map_err(|_| bad())?;
    let scale = exponent - fractional.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(all);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

/// Exact conversion of a finite `f64` to a rational.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::InvalidArgument(format!("non-finite value {x}")))
}
