//! Exact rational helpers: parsing `"num/den"` and decimal strings,
//! bounded-denominator snapping of floats, and formatting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Largest denominator accepted when snapping a float to a rational.
pub const MAX_SNAP_DENOMINATOR: u64 = 1 << 16;
/// Snapping tolerance. Far below `1 / (2 · 2^32)`: with denominators up to
/// `2^16` almost every real lies within `1e-9` of some such rational.
pub const TAU_RAT: f64 = 1e-12;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3/8"`, `"-2"`, `"0.375"` or `"1e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidInput(format!("cannot parse {text:?} as a rational number"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let n: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(n);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -r } else { r })
}

/// The exact binary value of a finite float.
pub fn from_f64_exact(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Numerical(format!("{x} is not finite")))
}

/// Closest rational with denominator at most `max_den` (continued-fraction
/// convergents and the final semiconvergent).
pub fn best_rational(x: &Rational, max_den: u64) -> Rational {
    let max_den = BigInt::from(max_den.max(1));
    if x.denom() <= &max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = num_integer::Integer::div_floor(&n, &d);
        let q2 = &q0 + &a * &q1;
        if q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
        if d.is_zero() {
            break;
        }
    }
    let k = num_integer::Integer::div_floor(&(&max_den - &q0), &q1);
    let b1 = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let b2 = Rational::new(p1, q1);
    if (&b2 - x).abs() <= (&b1 - x).abs() {
        b2
    } else {
        b1
    }
}

/// Snaps `x` to the nearest rational with denominator ≤ `2^16` if it lies
/// within `TAU_RAT`; `None` otherwise.
pub fn snap(x: f64) -> Option<Rational> {
    let exact = from_f64_exact(x).ok()?;
    let r = best_rational(&exact, MAX_SNAP_DENOMINATOR);
    if (to_f64(&r) - x).abs() <= TAU_RAT {
        Some(r)
    } else {
        None
    }
}

/// `"num/den"`, or just `"num"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Twelve significant digits, shortest round-trip rendering.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Twelve significant digits; exponent form outside `[1e-4, 1e12)`.
pub fn format_float(x: f64) -> String {
    let r = round_sig(x);
    if r != 0.0 && r.is_finite() && !(1e-4..1e12).contains(&r.abs()) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

pub mod serde_rational {
    //! Serde adapter storing rationals as `"num/den"` strings.
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = RationalText::deserialize(d)?;
        text.into_rational().map_err(serde::de::Error::custom)
    }
}

/// Accepts a JSON string (`"3/8"`) or a JSON number (`0.375`, read from
/// its decimal rendering).
#[derive(Debug, Clone, serde::Deserialize, serde::Serialize)]
#[serde(untagged)]
pub enum RationalText {
    Text(String),
    Number(serde_json::Number),
}

impl RationalText {
    pub fn into_rational(self) -> Result<Rational> {
        match self {
            RationalText::Text(s) => parse_rational(&s),
            RationalText::Number(n) => parse_rational(&n.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/8").unwrap(), ratio(3, 8));
        assert_eq!(parse_rational("0.375").unwrap(), ratio(3, 8));
        assert_eq!(parse_rational("-0.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse_rational("1e-2").unwrap(), ratio(1, 100));
        assert_eq!(parse_rational("2").unwrap(), int(2));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn snapping_recovers_small_denominators() {
        assert_eq!(snap(3.0 / 32.0).unwrap(), ratio(3, 32));
        assert_eq!(snap(0.375 + 1e-14).unwrap(), ratio(3, 8));
        assert_eq!(snap(0.1).unwrap(), ratio(1, 10));
        assert_eq!(snap(1.0 / 3.0).unwrap(), ratio(1, 3));
        assert!(snap(std::f64::consts::PI / 10.0).is_none());
        assert!(snap(0.375 + 1e-10).is_none());
        assert!(snap(f64::NAN).is_none());
    }

    #[test]
    fn best_rational_matches_known_approximations() {
        let pi = from_f64_exact(std::f64::consts::PI).unwrap();
        assert_eq!(best_rational(&pi, 10), ratio(22, 7));
        assert_eq!(best_rational(&pi, 1000), ratio(355, 113));
    }

    #[test]
    fn formatting() {
        assert_eq!(format_rational(&ratio(6, 16)), "3/8");
        assert_eq!(format_rational(&int(1)), "1");
        assert_eq!(format_float(0.9000000000000001), "0.9");
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(4.6039672293512e-16), "4.60396722935e-16");
        assert_eq!(format_float(-2.5e-5), "-2.5e-5");
    }
}
