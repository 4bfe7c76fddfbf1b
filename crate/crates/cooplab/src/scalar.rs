//! Arithmetic backends for game computations.
//!
//! Decomposition and classification run over exact rationals so that
//! sign and ratio tests never suffer from rounding; long dynamics runs
//! use `f64`. Everything generic in this crate is written against the
//! [`Scalar`] trait and instantiated with either backend.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::Zero as _;

/// Exact rational backend, arbitrary precision.
pub type Rational = num::BigRational;

/// A number usable as a payoff or probability in either backend.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact (no rounding under +, -, *, /).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    /// `num / den`; panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Exact conversion from a finite float (used when reading JSON numbers).
    fn from_f64_exact(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    /// Parses `"p/q"`, `"p"`, a decimal like `"-2.75"`, or (float backend
    /// only) anything `f64::from_str` accepts.
    fn parse(text: &str) -> Option<Self>;
    fn abs(&self) -> Self;
    fn is_finite(&self) -> bool;

    /// Tolerance for best-response ties: exact backend resolves ties
    /// exactly, float backend within 1e-9.
    fn tie_tol() -> Self;
    /// Tolerance for simplex membership of mixed strategies.
    fn simplex_tol() -> Self;
    /// Relative tolerance for the classifier's proportionality test.
    fn ratio_tol() -> Self;

    fn is_zero_value(&self) -> bool {
        *self == Self::zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }
    fn from_f64_exact(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn parse(text: &str) -> Option<Self> {
        if let Some((num, den)) = text.split_once('/') {
            let num: f64 = num.trim().parse().ok()?;
            let den: f64 = den.trim().parse().ok()?;
            (den != 0.0).then(|| num / den)
        } else {
            text.trim().parse().ok()
        }
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn tie_tol() -> Self {
        1e-9
    }
    fn simplex_tol() -> Self {
        1e-12
    }
    fn ratio_tol() -> Self {
        1e-9
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        num::Zero::zero()
    }
    fn one() -> Self {
        num::One::one()
    }
    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_f64_exact(v: f64) -> Option<Self> {
        Rational::from_float(v)
    }
    fn to_f64(&self) -> f64 {
        let numer = self.numer();
        let denom = self.denom();
        // Exact for desk-scale values; falls back to a quotient of
        // approximations for huge terms.
        match (numer.to_string().parse::<f64>(), denom.to_string().parse::<f64>()) {
            (Ok(n), Ok(d)) => n / d,
            _ => f64::NAN,
        }
    }
    fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        if let Some((num, den)) = text.split_once('/') {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Rational::new(num, den))
        } else if let Some((int_part, frac_part)) = text.split_once('.') {
            let negative = int_part.trim_start().starts_with('-');
            let int_part: BigInt = if int_part == "-" || int_part.is_empty() {
                BigInt::from(0)
            } else {
                int_part.parse().ok()?
            };
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
            let frac: BigInt = frac_part.parse().ok()?;
            let unsigned = Rational::new(num::Signed::abs(&int_part) * &scale + frac, scale);
            Some(if negative { -unsigned } else { unsigned })
        } else {
            let v: BigInt = text.parse().ok()?;
            Some(Rational::from_integer(v))
        }
    }
    fn abs(&self) -> Self {
        num::Signed::abs(self)
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn tie_tol() -> Self {
        num::Zero::zero()
    }
    fn simplex_tol() -> Self {
        num::Zero::zero()
    }
    fn ratio_tol() -> Self {
        num::Zero::zero()
    }
}

/// `|a - b| <= tol`.
pub fn approx_eq<S: Scalar>(a: &S, b: &S, tol: &S) -> bool {
    (a.clone() - b.clone()).abs() <= *tol
}

/// Index set of the maximal entries of `values`, every index within
/// `tol` of the maximum, ascending.
pub fn argmax_set<S: Scalar>(values: &[S], tol: &S) -> Vec<usize> {
    assert!(!values.is_empty());
    let mut best = &values[0];
    for v in &values[1..] {
        if v > best {
            best = v;
        }
    }
    let floor = best.clone() - tol.clone();
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v >= floor)
        .map(|(i, _)| i)
        .collect()
}

/// Maximum of a non-empty slice.
pub fn max_value<S: Scalar>(values: &[S]) -> S {
    let mut best = values[0].clone();
    for v in &values[1..] {
        if *v > best {
            best = v.clone();
        }
    }
    best
}

/// Minimum of a non-empty slice.
pub fn min_value<S: Scalar>(values: &[S]) -> S {
    let mut best = values[0].clone();
    for v in &values[1..] {
        if *v < best {
            best = v.clone();
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_forms() {
        let r = Rational::parse("5/6").unwrap();
        assert_eq!(r, Rational::from_ratio(5, 6));
        assert_eq!(Rational::parse("-14").unwrap(), Rational::from_int(-14));
        assert_eq!(Rational::parse("2.5").unwrap(), Rational::from_ratio(5, 2));
        assert_eq!(
            Rational::parse("-0.125").unwrap(),
            Rational::from_ratio(-1, 8)
        );
        assert!(Rational::parse("1/0").is_none());
        assert!(Rational::parse("abc").is_none());
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let third = Rational::from_ratio(1, 3);
        let sum = third.clone() + third.clone() + third;
        assert_eq!(sum, Rational::one());
    }

    #[test]
    fn float_parse_accepts_fractions() {
        assert_eq!(f64::parse("3/4").unwrap(), 0.75);
        assert_eq!(f64::parse("1e-3").unwrap(), 1e-3);
    }

    #[test]
    fn argmax_ties() {
        let v = vec![1.0, 3.0, 3.0 - 1e-12, 2.0];
        assert_eq!(argmax_set(&v, &f64::tie_tol()), vec![1, 2]);
        let exact = vec![
            Rational::from_int(1),
            Rational::from_int(3),
            Rational::from_int(3),
        ];
        assert_eq!(argmax_set(&exact, &Rational::tie_tol()), vec![1, 2]);
    }

    #[test]
    fn rational_display_matches_json_convention() {
        assert_eq!(Rational::from_ratio(5, 6).to_string(), "5/6");
        assert_eq!(Rational::from_int(-14).to_string(), "-14");
    }
}
