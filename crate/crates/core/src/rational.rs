//! Exact complex rationals: arbitrary-precision rational real and imaginary
//! parts. All symbolic coefficients in this crate live here, so expansion
//! coefficients are exact and comparisons are decidable.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rat = num_rational::BigRational;

/// Build a rational from a numerator/denominator pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// `re + im·i` with exact rational components.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct GaussianRational {
    pub re: Rat,
    pub im: Rat,
}

impl GaussianRational {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        GaussianRational::new(Rat::from_integer(BigInt::from(1)), Rat::zero())
    }

    pub fn i() -> Self {
        GaussianRational::new(Rat::zero(), Rat::from_integer(BigInt::from(1)))
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::new(Rat::from_integer(BigInt::from(n)), Rat::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussianRational::new(rat(num, den), Rat::zero())
    }

    pub fn from_rat(r: Rat) -> Self {
        GaussianRational::new(r, Rat::zero())
    }

    /// `i^k` reduced mod 4.
    pub fn i_pow(k: u32) -> Self {
        match k % 4 {
            0 => Self::one(),
            1 => Self::i(),
            2 => -&Self::one(),
            _ => -&Self::i(),
        }
    }

    /// `(-i)^k` reduced mod 4.
    pub fn minus_i_pow(k: u32) -> Self {
        match k % 4 {
            0 => Self::one(),
            1 => -&Self::i(),
            2 => -&Self::one(),
            _ => Self::i(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

/// Render a rational as `num/den` with the denominator always present.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `num/den` or a bare integer.
pub fn rat_from_string(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if !self.re.is_zero() {
            parts.push(format!("{}", self.re));
        }
        if !self.im.is_zero() {
            let mag = self.im.abs();
            let sign = if self.im.is_negative() { "-" } else { "" };
            let body = if mag == Rat::from_integer(BigInt::from(1)) {
                format!("{sign}i")
            } else {
                format!("{sign}{mag}i")
            };
            if parts.is_empty() || self.im.is_negative() {
                parts.push(body);
            } else {
                parts.push(format!("+{body}"));
            }
        }
        write!(f, "{}", parts.concat())
    }
}

#[derive(Serialize, Deserialize)]
struct GaussianRationalRepr {
    re: String,
    im: String,
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GaussianRationalRepr {
            re: rat_to_string(&self.re),
            im: rat_to_string(&self.im),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = GaussianRationalRepr::deserialize(deserializer)?;
        let re = rat_from_string(&repr.re)
            .ok_or_else(|| D::Error::custom(format!("bad rational: {}", repr.re)))?;
        let im = rat_from_string(&repr.im)
            .ok_or_else(|| D::Error::custom(format!("bad rational: {}", repr.im)))?;
        Ok(GaussianRational::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_unit_squares_to_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_int(-1));
        assert_eq!(GaussianRational::minus_i_pow(3), GaussianRational::i());
        assert_eq!(GaussianRational::i_pow(6), GaussianRational::from_int(-1));
    }

    #[test]
    fn field_ops() {
        let a = GaussianRational::new(rat(1, 2), rat(-3, 4));
        let b = GaussianRational::new(rat(2, 3), rat(1, 6));
        let prod = &a * &b;
        // (1/2 - 3/4 i)(2/3 + 1/6 i) = 1/3 + 1/8 + (1/12 - 1/2) i
        assert_eq!(prod, GaussianRational::new(rat(11, 24), rat(-5, 12)));
        assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn string_round_trip() {
        let a = GaussianRational::new(rat(-7, 3), rat(0, 1));
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"re":"-7/3","im":"0/1"}"#);
        let back: GaussianRational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }
}
