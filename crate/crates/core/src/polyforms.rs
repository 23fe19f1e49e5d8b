//! Sparse homogeneous polynomials in `x, y, z, w`.
//!
//! The point `p = [0,0,0,1]` is the center of every local computation here:
//! a quartic through `p` with multiplicity two is written as
//! `f2·w² + f3·w + f4` with `f_i` forms in `x, y, z`, and the shape of `f2`
//! (and, in the rank-two case, the `z³` coefficient of `f3`) decides the
//! singularity type at `p`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{int, Rational};
use crate::valuations::MonomialValuation;

/// Exponents of `(x, y, z, w)`.
pub type Exponents = [u32; 4];

const VARS: [char; 4] = ['x', 'y', 'z', 'w'];
const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable '{name}' at position {pos} (expected one of x, y, z, w)")]
    UnknownVariable { pos: usize, name: char },
    #[error("polynomial is not homogeneous: found terms of degrees {0:?}")]
    NonHomogeneous(Vec<u32>),
    #[error("empty polynomial: all terms cancel")]
    Empty,
    #[error("expected a form of degree {expected}, got degree {found}")]
    WrongDegree { expected: u32, found: u32 },
    #[error(
        "surface smooth or has multiplicity < 2 at p: term {term} has w-degree {w_degree} >= 3"
    )]
    MultiplicityBelowTwo { term: String, w_degree: u32 },
    #[error(
        "non-normalized rank-2 form: f2 = {0} is not proportional to x*y; \
         change coordinates so that the two lines of f2 are x = 0 and y = 0"
    )]
    NonNormalizedRank2(String),
    #[error("divisor must be a nonconstant polynomial")]
    ConstantDivisor,
    #[error("cannot take multiplicity in the zero polynomial")]
    ZeroTarget,
}

/// A single coefficient-exponent pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coefficient: Rational,
    pub exponents: Exponents,
}

/// Homogeneous polynomial of a fixed degree. Zero coefficients are never
/// stored; the zero polynomial is allowed and keeps its nominal degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    terms: BTreeMap<Exponents, Rational>,
    degree: u32,
}

fn total(e: &Exponents) -> u32 {
    e.iter().sum()
}

impl HomogPoly {
    pub fn zero(degree: u32) -> Self {
        Self {
            terms: BTreeMap::new(),
            degree,
        }
    }

    pub fn monomial(coefficient: Rational, exponents: Exponents) -> Self {
        let mut p = Self::zero(total(&exponents));
        if !coefficient.is_zero() {
            p.terms.insert(exponents, coefficient);
        }
        p
    }

    /// Builds a polynomial from terms, combining duplicates. Fails on an empty
    /// result or mixed degrees.
    pub fn from_terms<I>(terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut map: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Self::from_map(map)
    }

    fn from_map(map: BTreeMap<Exponents, Rational>) -> Result<Self, PolyError> {
        let mut degrees: Vec<u32> = map.keys().map(total).collect();
        degrees.sort_unstable();
        degrees.dedup();
        match degrees.as_slice() {
            [] => Err(PolyError::Empty),
            [d] => Ok(Self {
                terms: map,
                degree: *d,
            }),
            _ => Err(PolyError::NonHomogeneous(degrees)),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending lexicographic order of `(x, y, z, w)` exponents.
    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().rev().map(|(e, c)| Monomial {
            coefficient: c.clone(),
            exponents: *e,
        })
    }

    pub fn coefficient(&self, exponents: &Exponents) -> Rational {
        self.terms
            .get(exponents)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Order of vanishing at `p = [0,0,0,1]`: the smallest `x,y,z`-degree of
    /// a term. `None` for the zero polynomial.
    pub fn order_at_p(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0] + e[1] + e[2]).min()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero(self.degree);
        if !k.is_zero() {
            out.terms = self.terms.iter().map(|(e, c)| (*e, c * k)).collect();
        }
        out
    }

    /// Substitutes `var -> k·var` for each variable.
    pub fn rescale_vars(&self, factors: &[Rational; 4]) -> Self {
        let mut out = Self::zero(self.degree);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            for (k, exp) in factors.iter().zip(e) {
                for _ in 0..*exp {
                    coeff *= k;
                }
            }
            if !coeff.is_zero() {
                out.terms.insert(*e, coeff);
            }
        }
        out
    }

    /// Sum of two forms of the same degree (a zero operand adopts the other's degree).
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(
            self.degree, other.degree,
            "adding forms of different degree"
        );
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(*e).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut map: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
                *map.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        map.retain(|_, c| !c.is_zero());
        Self {
            terms: map,
            degree: self.degree + other.degree,
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::monomial(Rational::one(), [0; 4]), |acc, _| {
            acc.mul(self)
        })
    }

    fn leading(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (lead_e, lead_c) = divisor.leading()?;
        if self.is_zero() {
            return Some(Self::zero(self.degree.saturating_sub(divisor.degree)));
        }
        if self.degree < divisor.degree {
            return None;
        }
        let mut rest = self.clone();
        let mut quotient = Self::zero(self.degree - divisor.degree);
        while let Some((e, c)) = rest.leading() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                // the leading term can never be cancelled by later steps
                return None;
            }
            let qe = [
                e[0] - lead_e[0],
                e[1] - lead_e[1],
                e[2] - lead_e[2],
                e[3] - lead_e[3],
            ];
            let step = Self::monomial(c / lead_c, qe);
            rest = rest.sub(&step.mul(divisor));
            quotient = quotient.add(&step);
        }
        Some(quotient)
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, m) in self.terms().enumerate() {
            let negative = m.coefficient.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = m.coefficient.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || total(&m.exponents) == 0 {
                factors.push(mag.to_string());
            }
            for (v, e) in VARS.iter().zip(m.exponents) {
                match e {
                    0 => {}
                    1 => factors.push(v.to_string()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

/// Working representation during parsing: possibly inhomogeneous.
type Sparse = BTreeMap<Exponents, Rational>;

fn sparse_add(a: &mut Sparse, b: &Sparse, sign: &Rational) {
    for (e, c) in b {
        *a.entry(*e).or_insert_with(Rational::zero) += c * sign;
    }
    a.retain(|_, c| !c.is_zero());
}

fn sparse_mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
            *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn sparse_pow(a: &Sparse, exp: u32) -> Sparse {
    let mut out = Sparse::from([([0; 4], Rational::one())]);
    for _ in 0..exp {
        out = sparse_mul(&out, a);
    }
    out
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: char) -> Result<(), PolyError> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => self.error(format!("expected '{want}', found '{c}'")),
            None => self.error(format!("expected '{want}', found end of input")),
        }
    }

    fn unsigned(&mut self) -> Result<num_bigint::BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        let digits: usize = self.text[start..]
            .chars()
            .take_while(char::is_ascii_digit)
            .count();
        if digits == 0 {
            return self.error("expected an integer");
        }
        self.pos += digits;
        Ok(self.text[start..self.pos].parse().expect("ascii digits"))
    }

    fn exponent(&mut self) -> Result<u32, PolyError> {
        let at = self.pos;
        let n = self.unsigned()?;
        match u32::try_from(&n) {
            Ok(e) if e <= MAX_EXPONENT => Ok(e),
            _ => Err(PolyError::Syntax {
                pos: at,
                msg: format!("exponent {n} exceeds {MAX_EXPONENT}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Sparse, PolyError> {
        let mut acc = Sparse::new();
        let mut sign = Rational::one();
        match self.peek() {
            Some('-') => {
                self.bump();
                sign = -sign;
            }
            Some('+') => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            sparse_add(&mut acc, &t, &sign);
            match self.peek() {
                Some('+') => sign = Rational::one(),
                Some('-') => sign = -Rational::one(),
                _ => return Ok(acc),
            }
            self.bump();
        }
    }

    fn starts_factor(c: char) -> bool {
        c.is_ascii_alphanumeric() || c == '('
    }

    fn term(&mut self) -> Result<Sparse, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                }
                Some(c) if Self::starts_factor(c) => {}
                _ => return Ok(acc),
            }
            let f = self.factor()?;
            acc = sparse_mul(&acc, &f);
        }
    }

    fn factor(&mut self) -> Result<Sparse, PolyError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.unsigned()?;
                let value = if self.peek() == Some('/') {
                    self.bump();
                    let at = self.pos;
                    let den = self.unsigned()?;
                    if den.is_zero() {
                        return Err(PolyError::Syntax {
                            pos: at,
                            msg: "zero denominator".into(),
                        });
                    }
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                };
                let mut out = Sparse::new();
                if !value.is_zero() {
                    out.insert([0; 4], value);
                }
                Ok(out)
            }
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect(')')?;
                let exp = self.optional_power()?;
                Ok(sparse_pow(&inner, exp))
            }
            Some(c) if c.is_alphabetic() => {
                let at = self.pos;
                self.bump();
                let idx = VARS
                    .iter()
                    .position(|v| *v == c)
                    .ok_or(PolyError::UnknownVariable { pos: at, name: c })?;
                let exp = self.optional_power()?;
                let mut e = [0; 4];
                e[idx] = exp;
                Ok(Sparse::from([(e, Rational::one())]))
            }
            Some(c) => self.error(format!("unexpected '{c}'")),
            None => self.error("unexpected end of input"),
        }
    }

    fn optional_power(&mut self) -> Result<u32, PolyError> {
        if self.peek() == Some('^') {
            self.bump();
            self.exponent()
        } else {
            Ok(1)
        }
    }
}

/// Parses a polynomial expression in `x, y, z, w`.
///
/// ```
/// use kfano::polyforms::parse_poly;
/// let s = parse_poly("(x+y)^2*w^2").unwrap();
/// assert_eq!(s.to_string(), "x^2*w^2 + 2*x*y*w^2 + y^2*w^2");
/// ```
pub fn parse_poly(text: &str) -> Result<HomogPoly, PolyError> {
    let mut parser = Parser { text, pos: 0 };
    let sparse = parser.expr()?;
    if let Some(c) = parser.peek() {
        return parser.error(format!("unexpected '{c}'"));
    }
    HomogPoly::from_map(sparse)
}

/// Splits a quartic as `f2·w² + f3·w + f4` with `f_i` forms in `x, y, z`.
pub fn collect_by_w(s: &HomogPoly) -> Result<(HomogPoly, HomogPoly, HomogPoly), PolyError> {
    if s.degree != 4 {
        return Err(PolyError::WrongDegree {
            expected: 4,
            found: s.degree,
        });
    }
    let mut parts = [HomogPoly::zero(2), HomogPoly::zero(3), HomogPoly::zero(4)];
    for (e, c) in &s.terms {
        let w_degree = e[3];
        if w_degree >= 3 {
            return Err(PolyError::MultiplicityBelowTwo {
                term: HomogPoly::monomial(c.clone(), *e).to_string(),
                w_degree,
            });
        }
        let idx = (2 - w_degree) as usize;
        parts[idx].terms.insert([e[0], e[1], e[2], 0], c.clone());
    }
    let [f2, f3, f4] = parts;
    Ok((f2, f3, f4))
}

/// Rank of the symmetric matrix of a quadratic form, by exact Gaussian
/// elimination. All four variables take part, so a form in `x, y, z` has
/// rank at most three.
pub fn quadratic_rank(f2: &HomogPoly) -> Result<usize, PolyError> {
    if f2.degree != 2 && !f2.is_zero() {
        return Err(PolyError::WrongDegree {
            expected: 2,
            found: f2.degree,
        });
    }
    let half = crate::exactnum::rat(1, 2);
    let mut m = vec![vec![Rational::zero(); 4]; 4];
    for (e, c) in &f2.terms {
        let vars: Vec<usize> = (0..4)
            .flat_map(|i| std::iter::repeat_n(i, e[i] as usize))
            .collect();
        let (i, j) = (vars[0], vars[1]);
        if i == j {
            m[i][i] = c.clone();
        } else {
            m[i][j] = c * &half;
            m[j][i] = c * &half;
        }
    }
    Ok(matrix_rank(m))
}

fn matrix_rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let k = &m[r][col] / &m[rank][col];
                let pivot_row = m[rank].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &k * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SingularityTag {
    A1,
    A2,
    Degenerate,
}

impl fmt::Display for SingularityTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::A1 => "A1",
            Self::A2 => "A2",
            Self::Degenerate => "DEGENERATE",
        })
    }
}

/// Singularity type of the quartic at `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityClass {
    pub tag: SingularityTag,
    pub detail: String,
    /// Rank of `f2`.
    pub rank: usize,
    /// For rank two: `g` with `f2 = g·x·y`.
    pub xy_coefficient: Option<Rational>,
    /// For rank two: the `z³` coefficient of `f3`.
    pub z_cubed_coefficient: Option<Rational>,
}

const Z_CUBED: Exponents = [0, 0, 3, 0];
const XY: Exponents = [1, 1, 0, 0];

/// A1 / A2 / degenerate trichotomy at `p`.
pub fn classify_singularity(s: &HomogPoly) -> Result<SingularityClass, PolyError> {
    let (f2, f3, _) = collect_by_w(s)?;
    let rank = quadratic_rank(&f2)?;
    let class = |tag, detail: String, g, gamma| SingularityClass {
        tag,
        detail,
        rank,
        xy_coefficient: g,
        z_cubed_coefficient: gamma,
    };
    match rank {
        3 => Ok(class(
            SingularityTag::A1,
            format!("f2 = {f2} has full rank 3: the tangent cone at p is a smooth conic"),
            None,
            None,
        )),
        2 => {
            let g = f2.coefficient(&XY);
            if f2.len() != 1 || g.is_zero() {
                return Err(PolyError::NonNormalizedRank2(f2.to_string()));
            }
            let gamma = f3.coefficient(&Z_CUBED);
            if gamma.is_zero() {
                Ok(class(
                    SingularityTag::Degenerate,
                    format!(
                        "f2 = {f2} has rank 2 but f3 = {f3} has no z^3 term, \
                         so the strict transform is singular over p"
                    ),
                    Some(g),
                    Some(gamma),
                ))
            } else {
                Ok(class(
                    SingularityTag::A2,
                    format!("f2 = {f2} has rank 2 and f3 has z^3 coefficient {gamma}"),
                    Some(g),
                    Some(gamma),
                ))
            }
        }
        _ => Ok(class(
            SingularityTag::Degenerate,
            format!("f2 = {f2} has rank {rank} <= 1: the tangent cone is a double plane or worse"),
            None,
            None,
        )),
    }
}

fn weight_of(e: &Exponents, weights: &[i64; 4]) -> i64 {
    e.iter().zip(weights).map(|(a, w)| i64::from(*a) * w).sum()
}

/// Limit under the one-parameter subgroup `t ↦ diag(t^{w_x}, t^{w_y}, t^{w_z}, t^{w_w})`:
/// the part of `s` of maximal weight `Σ wᵢ·eᵢ`.
pub fn limit_1ps(s: &HomogPoly, weights: &[i64; 4]) -> HomogPoly {
    let Some(top) = s.terms.keys().map(|e| weight_of(e, weights)).max() else {
        return s.clone();
    };
    HomogPoly {
        terms: s
            .terms
            .iter()
            .filter(|(e, _)| weight_of(e, weights) == top)
            .map(|(e, c)| (*e, c.clone()))
            .collect(),
        degree: s.degree,
    }
}

/// Largest `k` with `divisorᵏ | s`.
pub fn multiplicity(divisor: &HomogPoly, s: &HomogPoly) -> Result<u32, PolyError> {
    if divisor.degree == 0 || divisor.is_zero() {
        return Err(PolyError::ConstantDivisor);
    }
    if s.is_zero() {
        return Err(PolyError::ZeroTarget);
    }
    let mut k = 0;
    let mut rest = s.clone();
    while let Some(q) = rest.div_exact(divisor) {
        k += 1;
        rest = q;
    }
    Ok(k)
}

/// Value of a monomial valuation centered at `p` on `s`, after setting `w = 1`.
pub fn monomial_value(v: &MonomialValuation, s: &HomogPoly) -> Rational {
    let w = v.weights();
    s.terms
        .keys()
        .map(|e| &w[0] * int(e[0].into()) + &w[1] * int(e[1].into()) + &w[2] * int(e[2].into()))
        .min()
        .unwrap_or_else(Rational::zero)
}
