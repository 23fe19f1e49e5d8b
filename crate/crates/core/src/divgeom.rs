//! Divisor classes on `Y = Bl_p P³`.
//!
//! The Néron–Severi group has basis `(H, E)` with `H` the pullback of a plane
//! and `E` the exceptional divisor. A class is stored as `h·H + e·E`, so the
//! anticanonical class is `(4, -2)`. The intersection form is
//! `H³ = E³ = 1` with mixed triple products zero.
//!
//! * nef cone: spanned by `H` and `H - E`  (`e ≤ 0`, `h + e ≥ 0`)
//! * pseudoeffective cone: spanned by `H - E` and `E`  (`h ≥ 0`, `h + e ≥ 0`)
//!
//! Outside the nef cone but inside the pseudoeffective cone the Zariski
//! decomposition has negative part `e·E` and positive part `h·H`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{int, PiecewisePoly, Rational, UniPoly};
use crate::polyforms::{multiplicity, HomogPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("class {0} is not pseudoeffective")]
    NotPseudoeffective(String),
    #[error("the zero class has no volume ray")]
    ZeroClass,
    #[error("coefficient c = {0} must lie in (0, 1)")]
    CoefficientOutOfRange(String),
    #[error("boundary must be an anticanonical quartic with multiplicity 2 at p, got degree {degree} and multiplicity {mult}")]
    NotAnticanonical { degree: u32, mult: u32 },
    #[error("log discrepancy A = {a} <= 0 for {divisor}: it is a boundary component with too large a coefficient")]
    NonPositiveLogDiscrepancy { divisor: String, a: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `h·H + e·E`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub h: Rational,
    pub e: Rational,
}

impl DivisorClass {
    pub fn new(h: Rational, e: Rational) -> Self {
        Self { h, e }
    }

    pub fn from_ints(h: i64, e: i64) -> Self {
        Self::new(int(h), int(e))
    }

    pub fn anticanonical() -> Self {
        Self::from_ints(4, -2)
    }

    pub fn exceptional() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_zero() && self.e.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(&self.h * k, &self.e * k)
    }

    /// `self - t·other`
    pub fn minus(&self, t: &Rational, other: &Self) -> Self {
        Self::new(&self.h - t * &other.h, &self.e - t * &other.e)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})H + ({})E", self.h, self.e)
    }
}

pub fn cube(d: &DivisorClass) -> Rational {
    &d.h * &d.h * &d.h + &d.e * &d.e * &d.e
}

pub fn is_nef(d: &DivisorClass) -> bool {
    !d.e.is_positive() && !(&d.h + &d.e).is_negative()
}

pub fn is_pseff(d: &DivisorClass) -> bool {
    !d.h.is_negative() && !(&d.h + &d.e).is_negative()
}

/// Positive part of the Zariski decomposition; `None` off the pseudoeffective cone.
pub fn zariski_positive_part(d: &DivisorClass) -> Option<DivisorClass> {
    if !is_pseff(d) {
        None
    } else if is_nef(d) {
        Some(d.clone())
    } else {
        Some(DivisorClass::new(d.h.clone(), Rational::zero()))
    }
}

pub fn volume(d: &DivisorClass) -> Rational {
    zariski_positive_part(d).map_or_else(Rational::zero, |p| cube(&p))
}

/// `t ↦ vol(-K_Y - t·F)` on `[0, τ]`, `τ` the pseudoeffective threshold.
///
/// Breakpoints are where the ray `(4 - t·F.h, -2 - t·F.e)` meets the lines
/// `e = 0`, `h + e = 0` and `h = 0`.
pub fn vol_ray(f: &DivisorClass) -> Result<PiecewisePoly, DivisorError> {
    if f.is_zero() {
        return Err(DivisorError::ZeroClass);
    }
    if !is_pseff(f) {
        return Err(DivisorError::NotPseudoeffective(f.to_string()));
    }
    let k = DivisorClass::anticanonical();
    // each wall is a linear form a + b·t in t along the ray
    let h_line = (k.h.clone(), -&f.h);
    let e_line = (k.e.clone(), -&f.e);
    let sum_line = (&k.h + &k.e, -(&f.h + &f.e));
    let root = |(a, b): &(Rational, Rational)| -> Option<Rational> {
        (!b.is_zero()).then(|| -a / b).filter(|r| r.is_positive())
    };
    // -K is in the interior, so the ray leaves through h = 0 or h + e = 0
    let tau = [root(&h_line), root(&sum_line)]
        .into_iter()
        .flatten()
        .min()
        .expect("nonzero pseudoeffective F has a finite threshold");
    let mut breaks = vec![Rational::zero(), tau.clone()];
    breaks.extend(root(&e_line).filter(|r| r < &tau));
    breaks.sort();
    breaks.dedup();

    let h_poly = UniPoly::linear(h_line.0, h_line.1);
    let e_poly = UniPoly::linear(e_line.0, e_line.1);
    let nef_piece = &h_poly.pow(3) + &e_poly.pow(3);
    let big_piece = h_poly.pow(3);
    let pieces = breaks
        .windows(2)
        .map(|w| {
            let mid = (&w[0] + &w[1]) / int(2);
            if is_nef(&k.minus(&mid, f)) {
                nef_piece.clone()
            } else {
                big_piece.clone()
            }
        })
        .collect();
    let ray = PiecewisePoly::new(breaks, pieces).expect("sorted breakpoints");
    debug_assert!(ray.is_continuous());
    Ok(ray)
}

/// `S_Y(F) = (1/(-K_Y)³)·∫₀^∞ vol(-K_Y - tF) dt`.
pub fn s_invariant_y(f: &DivisorClass) -> Result<Rational, DivisorError> {
    let ray = vol_ray(f)?;
    Ok(ray.integrate_all() / cube(&DivisorClass::anticanonical()))
}

/// A log pair `(Y, c·S̄)` with `S̄` the strict transform of a quartic with a
/// double point at `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogPairY {
    c: Rational,
    boundary: HomogPoly,
}

impl LogPairY {
    pub fn new(c: Rational, boundary: HomogPoly) -> Result<Self, DivisorError> {
        if !c.is_positive() || c >= Rational::one() {
            return Err(DivisorError::CoefficientOutOfRange(c.to_string()));
        }
        let mult = boundary.order_at_p().unwrap_or(0);
        if boundary.degree() != 4 || mult != 2 {
            return Err(DivisorError::NotAnticanonical {
                degree: boundary.degree(),
                mult,
            });
        }
        Ok(Self { c, boundary })
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn boundary(&self) -> &HomogPoly {
        &self.boundary
    }
}

/// A prime divisor on `Y`: either `E` or the strict transform of a surface in P³.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorOnY {
    pub name: String,
    pub cls: DivisorClass,
    pub equation: Option<HomogPoly>,
    pub is_exceptional: bool,
}

impl DivisorOnY {
    pub fn exceptional() -> Self {
        Self {
            name: "E".into(),
            cls: DivisorClass::exceptional(),
            equation: None,
            is_exceptional: true,
        }
    }

    /// Strict transform of `(equation = 0)`; its class is `(deg, -mult_p)`.
    pub fn strict_transform(name: impl Into<String>, equation: HomogPoly) -> Self {
        let mult = equation.order_at_p().unwrap_or(0);
        Self {
            name: name.into(),
            cls: DivisorClass::new(int(equation.degree().into()), -int(mult.into())),
            equation: Some(equation),
            is_exceptional: false,
        }
    }
}

/// `S_{(Y, cD)}(F) = (1 - c)·S_Y(F)`.
pub fn s_invariant(pair: &LogPairY, f: &DivisorClass) -> Result<Rational, DivisorError> {
    Ok((Rational::one() - pair.c()) * s_invariant_y(f)?)
}

/// Log discrepancy of `F` with respect to the pair.
pub fn a_invariant(pair: &LogPairY, f: &DivisorOnY) -> Result<Rational, DivisorError> {
    let mult = match &f.equation {
        // the boundary is a strict transform, so it never contains E
        None => 0,
        Some(eq) => multiplicity(eq, pair.boundary())?,
    };
    Ok(Rational::one() - pair.c() * int(mult.into()))
}

/// `β = A - S`. Fails if the divisor is a boundary component with `A ≤ 0`.
pub fn beta_divisor(pair: &LogPairY, f: &DivisorOnY) -> Result<Rational, DivisorError> {
    let a = a_invariant(pair, f)?;
    if !a.is_positive() {
        return Err(DivisorError::NonPositiveLogDiscrepancy {
            divisor: f.name.clone(),
            a: a.to_string(),
        });
    }
    Ok(a - s_invariant(pair, &f.cls)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::polyforms::parse_poly;

    fn cls(h: i64, e: i64) -> DivisorClass {
        DivisorClass::from_ints(h, e)
    }

    fn s0_prime() -> LogPairY {
        LogPairY::new(rat(2, 9), parse_poly("x*y*w^2 + z^3*w").unwrap()).unwrap()
    }

    #[test]
    fn cube_examples() {
        assert_eq!(cube(&cls(4, -2)), int(56));
        assert_eq!(cube(&cls(1, 0)), int(1));
        assert_eq!(cube(&cls(1, -1)), int(0));
    }

    #[test]
    fn cone_membership() {
        assert!(is_nef(&cls(4, -2)));
        assert!(!is_nef(&cls(0, 1)));
        assert!(!is_nef(&cls(4, -5)));
        assert!(is_pseff(&cls(0, 1)));
        assert!(!is_pseff(&cls(-1, 0)));
        assert!(is_pseff(&cls(2, -2)));
    }

    #[test]
    fn zariski_examples() {
        assert_eq!(zariski_positive_part(&cls(1, 1)), Some(cls(1, 0)));
        assert_eq!(zariski_positive_part(&cls(4, -2)), Some(cls(4, -2)));
        assert_eq!(zariski_positive_part(&cls(0, 1)), Some(cls(0, 0)));
        assert_eq!(zariski_positive_part(&cls(1, -2)), None);
    }

    #[test]
    fn volume_examples() {
        assert_eq!(volume(&cls(4, -2)), int(56));
        assert_eq!(volume(&cls(1, -1)), int(0));
        let t = rat(6, 5);
        let d = DivisorClass::new(int(4) - int(3) * &t, -(int(2) - int(2) * &t));
        assert_eq!(volume(&d), rat(8, 125));
    }

    #[test]
    fn vol_ray_shapes() {
        let e = vol_ray(&cls(0, 1)).unwrap();
        assert_eq!(e.breakpoints(), &[int(0), int(2)]);
        let expected = &UniPoly::constant(int(64)) - &UniPoly::linear(int(2), int(1)).pow(3);
        assert_eq!(e.pieces(), &[expected]);

        let hx = vol_ray(&cls(1, -1)).unwrap();
        assert_eq!(hx.breakpoints(), &[int(0), int(2), int(4)]);
        let four_minus_t = UniPoly::linear(int(4), int(-1)).pow(3);
        let two_minus_t = UniPoly::linear(int(2), int(-1)).pow(3);
        assert_eq!(hx.pieces()[0], &four_minus_t - &two_minus_t);
        assert_eq!(hx.pieces()[1], four_minus_t);

        let ts = vol_ray(&cls(3, -2)).unwrap();
        assert_eq!(ts.breakpoints(), &[int(0), int(1), rat(4, 3)]);
        let a = UniPoly::linear(int(4), int(-3)).pow(3);
        let b = UniPoly::linear(int(2), int(-2)).pow(3);
        assert_eq!(ts.pieces(), &[&a - &b, a]);
    }

    #[test]
    fn vol_ray_errors() {
        assert_eq!(vol_ray(&cls(0, 0)), Err(DivisorError::ZeroClass));
        assert!(matches!(
            vol_ray(&cls(1, -3)),
            Err(DivisorError::NotPseudoeffective(_))
        ));
    }

    #[test]
    fn s_invariants() {
        assert_eq!(s_invariant_y(&cls(0, 1)).unwrap(), rat(17, 14));
        assert_eq!(s_invariant_y(&cls(1, 0)).unwrap(), rat(11, 14));
        assert_eq!(s_invariant_y(&cls(1, -1)).unwrap(), rat(15, 14));
        assert_eq!(s_invariant_y(&cls(3, -2)).unwrap(), rat(29, 84));
        assert_eq!(s_invariant(&s0_prime(), &cls(0, 1)).unwrap(), rat(17, 18));
        for c in [rat(1, 7), rat(2, 9), rat(9, 10)] {
            let pair = LogPairY::new(c.clone(), s0_prime().boundary().clone()).unwrap();
            assert_eq!(
                s_invariant(&pair, &cls(4, -2)).unwrap(),
                (int(1) - c) / int(4)
            );
        }
    }

    #[test]
    fn betas_at_two_ninths() {
        let pair = s0_prime();
        let p = |s: &str| parse_poly(s).unwrap();
        let beta = |d: DivisorOnY| beta_divisor(&pair, &d).unwrap();
        assert_eq!(beta(DivisorOnY::exceptional()), rat(1, 18));
        assert_eq!(beta(DivisorOnY::strict_transform("H_w", p("w"))), rat(1, 6));
        assert_eq!(beta(DivisorOnY::strict_transform("H_x", p("x"))), rat(1, 6));
        assert_eq!(beta(DivisorOnY::strict_transform("H_y", p("y"))), rat(1, 6));
        assert_eq!(beta(DivisorOnY::strict_transform("H_z", p("z"))), rat(1, 6));
        assert_eq!(
            beta(DivisorOnY::strict_transform("T_1", p("x*y*w + z^3"))),
            rat(55, 108)
        );
        assert_eq!(
            beta(DivisorOnY::strict_transform("T_2", p("x*y*w + 2*z^3"))),
            rat(79, 108)
        );
    }

    #[test]
    fn strict_transform_classes() {
        let p = |s: &str| parse_poly(s).unwrap();
        assert_eq!(DivisorOnY::strict_transform("H_w", p("w")).cls, cls(1, 0));
        assert_eq!(DivisorOnY::strict_transform("H_x", p("x")).cls, cls(1, -1));
        assert_eq!(
            DivisorOnY::strict_transform("T", p("x*y*w + 5*z^3")).cls,
            cls(3, -2)
        );
    }

    #[test]
    fn pair_validation() {
        let s = parse_poly("x*y*w^2 + z^3*w").unwrap();
        assert!(LogPairY::new(int(0), s.clone()).is_err());
        assert!(LogPairY::new(int(1), s).is_err());
        assert!(matches!(
            LogPairY::new(rat(1, 2), parse_poly("x^4 + y^3*w").unwrap()),
            Err(DivisorError::NotAnticanonical { degree: 4, mult: 3 })
        ));
    }

    #[test]
    fn boundary_component_rejected() {
        // ord_{H_w}(w^2 * q) = 2 makes A = 1 - 2c <= 0 at c = 1/2
        let boundary = parse_poly("x*y*w^2").unwrap();
        let pair = LogPairY::new(rat(1, 2), boundary).unwrap();
        let hw = DivisorOnY::strict_transform("H_w", parse_poly("w").unwrap());
        assert!(matches!(
            beta_divisor(&pair, &hw),
            Err(DivisorError::NonPositiveLogDiscrepancy { .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rat() -> impl Strategy<Value = Rational> {
            (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
        }

        fn pseff_class() -> impl Strategy<Value = DivisorClass> {
            // s·(H - E) + u·E with s, u >= 0
            ((0i64..30, 1i64..10), (0i64..30, 1i64..10))
                .prop_filter("nonzero", |((s, _), (u, _))| s + u > 0)
                .prop_map(|((s, sd), (u, ud))| {
                    let (s, u) = (rat(s, sd), rat(u, ud));
                    DivisorClass::new(s.clone(), u - s)
                })
        }

        proptest! {
            #[test]
            fn cube_is_cubic(h in small_rat(), e in small_rat(), k in small_rat()) {
                let d = DivisorClass::new(h, e);
                prop_assert_eq!(cube(&d.scale(&k)), &k * &k * &k * cube(&d));
            }

            #[test]
            fn volume_is_cube_on_nef(s in 0i64..20, u in 0i64..20) {
                let d = DivisorClass::new(int(s + u), int(-u));
                prop_assert!(is_nef(&d));
                prop_assert_eq!(volume(&d), cube(&d));
            }

            #[test]
            fn volume_vanishes_off_big_cone(h in small_rat(), e in small_rat()) {
                let d = DivisorClass::new(h.clone(), e.clone());
                let big = h.is_positive() && (&h + &e).is_positive();
                prop_assert_eq!(volume(&d).is_positive(), big);
            }

            #[test]
            fn ray_matches_volume_pointwise(f in pseff_class()) {
                let ray = vol_ray(&f).unwrap();
                let k = DivisorClass::anticanonical();
                let end = ray.end().clone();
                for i in 0..=100 {
                    let t = &end * rat(i, 100);
                    prop_assert_eq!(ray.eval(&t).unwrap(), volume(&k.minus(&t, &f)));
                }
                prop_assert!(ray.is_continuous());
            }

            #[test]
            fn s_scales_inversely(f in pseff_class(), n in 1i64..10, d in 1i64..10) {
                let k = rat(n, d);
                prop_assert_eq!(s_invariant_y(&f.scale(&k)).unwrap(), s_invariant_y(&f).unwrap() / k);
            }
        }
    }
}
