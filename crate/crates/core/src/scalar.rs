//! Exact coefficient rings.
//!
//! Everything linear in this crate is generic over [`Scalar`]. Two rings are
//! provided: arbitrary-precision rationals and [`HSeries`], polynomials in a
//! formal parameter ℏ truncated at a fixed order `K`. The truncation order is
//! part of the type, so two series of different orders can never meet inside
//! one computation; mismatches can only show up when decoding JSON, where they
//! are reported as [`Error::RingMismatch`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A commutative ring with exact equality and a unit test.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Multiplicative inverse, if `self` is a unit.
    fn try_inverse(&self) -> Option<Self>;

    fn from_rational(q: &Rational) -> Self;

    fn from_integer(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    /// Reduction modulo ℏ. The identity on rationals.
    fn constant_term(&self) -> Rational;

    /// Human-readable ring name, e.g. `rational` or `hseries(2)`.
    fn ring_label() -> String;

    fn to_json(&self) -> Value;

    fn from_json(value: &Value) -> Result<Self>;
}

/// Formats a rational as `"p/q"`, always with an explicit denominator.
pub fn rational_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"`, `"p"` or a JSON integer.
pub fn parse_rational(value: &Value) -> Result<Rational> {
    match value {
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(BigInt::from(i)))
            .ok_or_else(|| Error::Parse(format!("non-integer number {n}; use a \"p/q\" string"))),
        Value::String(s) => parse_rational_str(s),
        other => Err(Error::Parse(format!("expected rational, found {other}"))),
    }
}

pub fn parse_rational_str(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl Scalar for Rational {
    fn try_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn constant_term(&self) -> Rational {
        self.clone()
    }

    fn ring_label() -> String {
        "rational".to_string()
    }

    fn to_json(&self) -> Value {
        Value::String(rational_to_string(self))
    }

    fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::Array(_) => Err(Error::RingMismatch(
                "found an ℏ-series where a rational was expected".into(),
            )),
            v => parse_rational(v),
        }
    }
}

/// `c₀ + c₁ℏ + … + c_Kℏ^K`, with every product truncated at degree `K`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HSeries<const K: usize> {
    coeffs: Vec<Rational>,
}

impl<const K: usize> HSeries<K> {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        coeffs.truncate(K + 1);
        coeffs.resize(K + 1, Rational::zero());
        Self { coeffs }
    }

    pub fn constant(q: Rational) -> Self {
        Self::new(vec![q])
    }

    /// The formal parameter ℏ itself (zero when `K = 0`).
    pub fn hbar() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> &Rational {
        &self.coeffs[degree]
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }
}

impl<const K: usize> fmt::Debug for HSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})ħ")?,
                _ => write!(f, "({c})ħ^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<const K: usize> Add for HSeries<K> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().zip(rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<const K: usize> Sub for HSeries<K> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().zip(rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<const K: usize> Neg for HSeries<K> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().map(|a| -a).collect(),
        }
    }
}

impl<const K: usize> Mul for HSeries<K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = vec![Rational::zero(); K + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(K + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }
}

impl<const K: usize> Zero for HSeries<K> {
    fn zero() -> Self {
        Self::new(Vec::new())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl<const K: usize> One for HSeries<K> {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

impl<const K: usize> Scalar for HSeries<K> {
    fn try_inverse(&self) -> Option<Self> {
        let c0_inv = self.coeffs[0].try_inverse()?;
        let mut inv: Vec<Rational> = Vec::with_capacity(K + 1);
        inv.push(c0_inv.clone());
        for k in 1..=K {
            let mut acc = Rational::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &inv[k - i];
            }
            inv.push(-(acc * &c0_inv));
        }
        Some(Self { coeffs: inv })
    }

    fn from_rational(q: &Rational) -> Self {
        Self::constant(q.clone())
    }

    fn constant_term(&self) -> Rational {
        self.coeffs[0].clone()
    }

    fn ring_label() -> String {
        format!("hseries({K})")
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|c| Value::String(rational_to_string(c)))
                .collect(),
        )
    }

    fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::Array(items) => {
                if items.len() != K + 1 {
                    return Err(Error::RingMismatch(format!(
                        "series with {} coefficients in ring hseries({K})",
                        items.len()
                    )));
                }
                let coeffs = items.iter().map(parse_rational).collect::<Result<Vec<_>>>()?;
                Ok(Self { coeffs })
            }
            v => Ok(Self::constant(parse_rational(v)?)),
        }
    }
}

/// Shorthand for building rationals in tests and fixtures.
pub fn q(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer-valued rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
