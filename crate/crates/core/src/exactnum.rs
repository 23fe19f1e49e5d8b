//! Exact rational numbers, univariate polynomials over them, and piecewise
//! polynomial functions with exact definite integration.
//!
//! Everything here is exact: the rational type is an arbitrary-precision
//! fraction and no operation ever goes through floating point.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision reduced fraction with positive denominator.
pub type Rational = BigRational;

/// Shorthand for the fraction `num/den`.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for the integer `n` as a fraction.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("interval [{lo}, {hi}] is outside the domain [{start}, {end}]")]
    Domain {
        lo: String,
        hi: String,
        start: String,
        end: String,
    },
    #[error("reversed interval: {lo} > {hi}")]
    Reversed { lo: String, hi: String },
    #[error("malformed piecewise polynomial: {0}")]
    Malformed(String),
}

/// Parses `p`, `-p`, or `p/q` with integer `p`, `q` (`q != 0`).
pub fn parse_rational(text: &str) -> Result<Rational, ExactError> {
    let bad = || ExactError::BadRational(text.to_string());
    let s = text.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Formats a rational as `p/q`, always including the denominator.
pub fn format_pq(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Serde adapter storing a [`Rational`] as a `"p/q"` string.
pub mod pq {
    use super::{format_pq, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_pq(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }

    /// Same encoding for an optional rational; `None` is `null`.
    pub mod option {
        use super::super::{format_pq, parse_rational, Rational};
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            value.as_ref().map(format_pq).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
                .transpose()
        }
    }

    /// Same encoding for a sequence of rationals.
    pub mod vec {
        use super::super::{format_pq, parse_rational, Rational};
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let strings: Vec<String> = values.iter().map(format_pq).collect();
            strings.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let strings = Vec::<String>::deserialize(d)?;
            strings
                .iter()
                .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

/// Dense univariate polynomial in `t`; `coeffs[i]` is the coefficient of `t^i`.
///
/// The coefficient list never ends in a zero, so the zero polynomial is the
/// empty list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `a + b·t`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::from_coeffs(vec![a, b])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::constant(Rational::one()), |acc, _| &acc * self)
    }

    /// `p(k·t)`
    pub fn rescale_arg(&self, k: &Rational) -> Self {
        let mut factor = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &factor);
            factor *= k;
        }
        Self::from_coeffs(out)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(Rational::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push(c / int(i as i64 + 1));
        }
        Self::from_coeffs(out)
    }

    /// Exact `∫_lo^hi p(t) dt`.
    pub fn integrate(&self, lo: &Rational, hi: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(hi) - anti.eval(lo)
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        UniPoly::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &(-rhs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{mag}*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// A function on `[t_0, t_k]` given by one polynomial per closed interval
/// `[t_i, t_{i+1}]`. At a shared breakpoint the value is taken from the left
/// piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePoly {
    breakpoints: Vec<Rational>,
    pieces: Vec<UniPoly>,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<UniPoly>) -> Result<Self, ExactError> {
        if breakpoints.len() < 2 {
            return Err(ExactError::Malformed(
                "need at least two breakpoints".into(),
            ));
        }
        if pieces.len() + 1 != breakpoints.len() {
            return Err(ExactError::Malformed(format!(
                "{} breakpoints but {} pieces",
                breakpoints.len(),
                pieces.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ExactError::Malformed(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            breakpoints,
            pieces,
        })
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[UniPoly] {
        &self.pieces
    }

    pub fn start(&self) -> &Rational {
        &self.breakpoints[0]
    }

    pub fn end(&self) -> &Rational {
        self.breakpoints.last().expect("at least two breakpoints")
    }

    fn domain_error(&self, lo: &Rational, hi: &Rational) -> ExactError {
        ExactError::Domain {
            lo: lo.to_string(),
            hi: hi.to_string(),
            start: self.start().to_string(),
            end: self.end().to_string(),
        }
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational, ExactError> {
        if t < self.start() || t > self.end() {
            return Err(self.domain_error(t, t));
        }
        // first piece whose right endpoint is >= t: left piece wins at ties
        let idx = self.breakpoints[1..]
            .iter()
            .position(|b| t <= b)
            .expect("t within domain");
        Ok(self.pieces[idx].eval(t))
    }

    /// Exact `∫_lo^hi f(t) dt`, summed piece by piece.
    pub fn integrate(&self, lo: &Rational, hi: &Rational) -> Result<Rational, ExactError> {
        if lo > hi {
            return Err(ExactError::Reversed {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        if lo < self.start() || hi > self.end() {
            return Err(self.domain_error(lo, hi));
        }
        let mut total = Rational::zero();
        for (w, piece) in self.breakpoints.windows(2).zip(&self.pieces) {
            let a = if &w[0] > lo { &w[0] } else { lo };
            let b = if &w[1] < hi { &w[1] } else { hi };
            if a < b {
                total += piece.integrate(a, b);
            }
        }
        Ok(total)
    }

    /// Integral over the whole domain.
    pub fn integrate_all(&self) -> Rational {
        self.breakpoints
            .windows(2)
            .zip(&self.pieces)
            .map(|(w, p)| p.integrate(&w[0], &w[1]))
            .sum()
    }

    /// True when adjacent pieces agree at every interior breakpoint.
    pub fn is_continuous(&self) -> bool {
        self.pieces
            .windows(2)
            .zip(&self.breakpoints[1..])
            .all(|(p, b)| p[0].eval(b) == p[1].eval(b))
    }
}
