//! Stability threshold of a `P¹`-bundle `Y = P_V(L⁻¹ ⊕ O_V)` over a log Fano
//! base `(V, Δ)` of dimension `n`, with boundary `Δ_Y + a·V₀ + b·V_∞` and
//! `L ∼ -r⁻¹(K_V + Δ)`:
//!
//! ```text
//! δ = min { r·δ(V,Δ) / M,  (1 - a) / (M - A),  (1 - b) / (B - M) }
//! M = (n+1)/(n+2) · (B^{n+2} - A^{n+2}) / (B^{n+1} - A^{n+1})
//! A = r - (1 - a),  B = r + (1 - b)
//! ```
//!
//! `Bl_p P³` is the case `V = P²`, `L = O(1)`, `Δ = c·C₀` for a conic `C₀`.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypothesisError {
    #[error("hypothesis violated: {0}")]
    Violated(String),
}

fn violated<T>(msg: impl Into<String>) -> Result<T, HypothesisError> {
    Err(HypothesisError::Violated(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleDeltaInput {
    pub n: u32,
    pub r: Rational,
    pub a: Rational,
    pub b: Rational,
    pub delta_base: Rational,
}

impl BundleDeltaInput {
    pub fn validate(&self) -> Result<(), HypothesisError> {
        let one = Rational::one();
        if self.n == 0 {
            return violated("n >= 1");
        }
        if !self.r.is_positive() {
            return violated("r > 0");
        }
        if !self.delta_base.is_positive() {
            return violated("delta(V, Delta) > 0");
        }
        if self.a >= one {
            return violated("a < 1");
        }
        if self.r > one {
            if self.a.is_negative() {
                return violated("0 <= a (required when r > 1)");
            }
        } else if self.a <= &one - &self.r {
            return violated("1 - r < a (required when 0 < r <= 1)");
        }
        if self.b.is_negative() || self.b >= one {
            return violated("0 <= b < 1");
        }
        let (a_cap, b_cap) = self.endpoints();
        if a_cap.is_negative() {
            return violated("A = r - (1 - a) >= 0");
        }
        if b_cap <= a_cap {
            return violated("B > A");
        }
        Ok(())
    }

    /// `(A, B)`
    pub fn endpoints(&self) -> (Rational, Rational) {
        let one = Rational::one();
        (&self.r - (&one - &self.a), &self.r + (&one - &self.b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaBreakdown {
    pub term_base: Rational,
    pub term_zero: Rational,
    pub term_infty: Rational,
    pub delta: Rational,
    pub mean_m: Rational,
}

impl DeltaBreakdown {
    pub fn terms(&self) -> [&Rational; 3] {
        [&self.term_base, &self.term_zero, &self.term_infty]
    }
}

fn power(x: &Rational, k: u32) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * x)
}

pub fn delta_bundle(input: &BundleDeltaInput) -> Result<DeltaBreakdown, HypothesisError> {
    input.validate()?;
    let n = input.n;
    let (a_cap, b_cap) = input.endpoints();
    let denom = power(&b_cap, n + 1) - power(&a_cap, n + 1);
    if denom.is_zero() {
        return violated("B^(n+1) != A^(n+1)");
    }
    let ratio = Rational::from_integer((n + 1).into()) / Rational::from_integer((n + 2).into());
    let mean_m = ratio * (power(&b_cap, n + 2) - power(&a_cap, n + 2)) / denom;
    let one = Rational::one();
    let term_base = &input.r * &input.delta_base / &mean_m;
    let term_zero = (&one - &input.a) / (&mean_m - &a_cap);
    let term_infty = (&one - &input.b) / (&b_cap - &mean_m);
    let delta = [&term_base, &term_zero, &term_infty]
        .into_iter()
        .min()
        .expect("three terms")
        .clone();
    Ok(DeltaBreakdown {
        term_base,
        term_zero,
        term_infty,
        delta,
        mean_m,
    })
}

/// `δ(P², c·C₀)` for a smooth conic: `Some(1)` for `c < 3/4`, where the pair
/// is known to be K-polystable, and `None` (unknown) otherwise.
pub fn delta_conic_pair(c: &Rational) -> Result<Option<Rational>, HypothesisError> {
    if !c.is_positive() || c >= &Rational::one() {
        return violated("0 < c < 1");
    }
    Ok((c < &rat(3, 4)).then(Rational::one))
}

/// Bundle inputs for `(Bl_p P³, c·S̄₀)` with `S̄₀` the double section degeneration.
pub fn family_a_input(c: &Rational) -> Result<BundleDeltaInput, HypothesisError> {
    let delta_base = delta_conic_pair(c)?.ok_or_else(|| {
        HypothesisError::Violated("c < 3/4 (delta of the conic pair unknown)".into())
    })?;
    Ok(BundleDeltaInput {
        n: 2,
        r: int(3) - int(2) * c,
        a: Rational::zero(),
        b: int(2) * c,
        delta_base,
    })
}

/// The closed forms `28(3-2c)/(45(2-2c))`, `28/(17(2-2c))`, `28(1-2c)/(11(2-2c))`.
pub fn family_a_closed_form(c: &Rational) -> [Rational; 3] {
    let a_cap = int(2) - int(2) * c;
    [
        int(28) * (int(3) - int(2) * c) / (int(45) * &a_cap),
        int(28) / (int(17) * &a_cap),
        int(28) * (int(1) - int(2) * c) / (int(11) * &a_cap),
    ]
}

pub fn family_a_terms(c: &Rational) -> Result<DeltaBreakdown, HypothesisError> {
    let breakdown = delta_bundle(&family_a_input(c)?)?;
    let closed = family_a_closed_form(c);
    assert!(
        breakdown.terms().into_iter().eq(closed.iter()),
        "bundle formula disagrees with its closed form at c = {c}"
    );
    Ok(breakdown)
}

/// Solves `term_zero = term_infty` for `c ∈ (0, 1/2)`.
///
/// `term_infty / term_zero` is affine in `c`, so two exact samples determine
/// it and a third confirms it.
pub fn find_balanced_c() -> Rational {
    let ratio = |c: &Rational| {
        let b = family_a_terms(c).expect("c in range");
        b.term_infty / b.term_zero
    };
    let (c0, c1, c2) = (rat(1, 10), rat(2, 5), rat(1, 4));
    let (r0, r1) = (ratio(&c0), ratio(&c1));
    let slope = (&r1 - &r0) / (&c1 - &c0);
    assert_eq!(
        ratio(&c2),
        &r0 + &slope * (&c2 - &c0),
        "ratio is not affine"
    );
    let c = &c0 + (Rational::one() - r0) / slope;
    let at = family_a_terms(&c).expect("balanced c in range");
    assert!(
        at.terms().iter().all(|t| **t == Rational::one()),
        "terms at the balanced c are not all 1"
    );
    c
}

/// The ratio `M / A` for the family (a) inputs, against the value `15/7`
/// that one might write down by mistake for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanRatioCheck {
    pub computed: Rational,
    pub printed: Rational,
    pub consistent: bool,
}

pub fn family_a_mean_ratio(c: &Rational) -> Result<MeanRatioCheck, HypothesisError> {
    let input = family_a_input(c)?;
    let (a_cap, _) = input.endpoints();
    let computed = delta_bundle(&input)?.mean_m / a_cap;
    let printed = rat(15, 7);
    Ok(MeanRatioCheck {
        consistent: computed == printed,
        computed,
        printed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_at_three_seventeenths() {
        let c = rat(3, 17);
        let input = BundleDeltaInput {
            n: 2,
            r: int(3) - int(2) * &c,
            a: int(0),
            b: rat(6, 17),
            delta_base: int(1),
        };
        let b = delta_bundle(&input).unwrap();
        assert!(b.terms().iter().all(|t| **t == int(1)));
        assert_eq!(b.delta, int(1));
        assert_eq!(find_balanced_c(), c);
    }

    #[test]
    fn c_zero_terms() {
        let input = BundleDeltaInput {
            n: 2,
            r: int(3),
            a: int(0),
            b: int(0),
            delta_base: int(1),
        };
        let b = delta_bundle(&input).unwrap();
        assert_eq!(
            [b.term_base, b.term_zero, b.term_infty],
            [rat(14, 15), rat(14, 17), rat(14, 11)]
        );
        assert_eq!(b.delta, rat(14, 17));
    }

    #[test]
    fn quarter() {
        let b = family_a_terms(&rat(1, 4)).unwrap();
        assert_eq!(
            [b.term_base, b.term_zero, b.term_infty],
            [rat(28, 27), rat(56, 51), rat(28, 33)]
        );
    }

    #[test]
    fn tiny_c_regression() {
        // hand evaluation: A = 99/50, terms 28(149/50)/(45·99/50), 28/(17·99/50), 28(49/50)/(11·99/50)
        let b = family_a_terms(&rat(1, 100)).unwrap();
        assert_eq!(b.term_base, rat(4172, 4455));
        assert_eq!(b.term_zero, rat(1400, 1683));
        assert_eq!(b.term_infty, rat(1372, 1089));
        assert_eq!(b.delta, rat(1400, 1683));
    }

    #[test]
    fn one_dimensional_base() {
        // r = 1, a = b = 0 is outside the hypotheses: 1 - r < a fails
        let edge = BundleDeltaInput {
            n: 1,
            r: int(1),
            a: int(0),
            b: int(0),
            delta_base: int(1),
        };
        assert_eq!(
            delta_bundle(&edge),
            violated("1 - r < a (required when 0 < r <= 1)")
        );
        // a = 1/2: A = 1/2, B = 2, M = (2/3)(63/8)/(15/4) = 7/5
        let inside = BundleDeltaInput {
            a: rat(1, 2),
            ..edge
        };
        let b = delta_bundle(&inside).unwrap();
        assert_eq!(b.mean_m, rat(7, 5));
        assert_eq!(
            [b.term_base, b.term_zero, b.term_infty.clone()],
            [rat(5, 7), rat(5, 9), rat(5, 3)]
        );
        assert_eq!(b.delta, rat(5, 9));
    }

    #[test]
    fn perturbed_terms_are_not_balanced() {
        let b = family_a_terms(&(rat(3, 17) + rat(1, 1000))).unwrap();
        assert!(!(b.term_base == b.term_zero && b.term_zero == b.term_infty));
    }

    #[test]
    fn conic_pair() {
        assert_eq!(delta_conic_pair(&rat(3, 17)).unwrap(), Some(int(1)));
        assert_eq!(delta_conic_pair(&rat(7, 10)).unwrap(), Some(int(1)));
        assert_eq!(delta_conic_pair(&rat(4, 5)).unwrap(), None);
        assert!(delta_conic_pair(&int(0)).is_err());
        assert!(delta_conic_pair(&int(1)).is_err());
    }

    #[test]
    fn family_a_range() {
        assert!(family_a_terms(&rat(1, 2)).is_err());
        assert!(family_a_terms(&rat(3, 5)).is_err());
        assert!(family_a_terms(&rat(4, 5)).is_err());
    }

    #[test]
    fn mean_ratio_mismatch() {
        let check = family_a_mean_ratio(&rat(3, 17)).unwrap();
        assert_eq!(check.computed, rat(45, 28));
        assert!(!check.consistent);
    }

    #[test]
    fn hypothesis_messages() {
        let base = BundleDeltaInput {
            n: 2,
            r: int(2),
            a: int(0),
            b: int(0),
            delta_base: int(1),
        };
        let bad = |f: fn(&mut BundleDeltaInput)| {
            let mut i = base.clone();
            f(&mut i);
            delta_bundle(&i).unwrap_err().to_string()
        };
        assert!(bad(|i| i.a = int(1)).contains("a < 1"));
        assert!(bad(|i| i.a = int(-1)).contains("0 <= a"));
        assert!(bad(|i| i.b = int(1)).contains("0 <= b < 1"));
        assert!(bad(|i| i.r = int(0)).contains("r > 0"));
        assert!(bad(|i| i.n = 0).contains("n >= 1"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn input() -> impl Strategy<Value = BundleDeltaInput> {
            (1u32..5, 1i64..40, 0i64..20, 0i64..20, 1i64..10).prop_filter_map(
                "hypotheses",
                |(n, r, a, b, d)| {
                    let i = BundleDeltaInput {
                        n,
                        r: rat(r, 8),
                        a: rat(a, 20),
                        b: rat(b, 20),
                        delta_base: rat(d, 5),
                    };
                    i.validate().ok().map(|_| i)
                },
            )
        }

        proptest! {
            #[test]
            fn mean_between_endpoints(i in input()) {
                let b = delta_bundle(&i).unwrap();
                let (a_cap, b_cap) = i.endpoints();
                prop_assert!(a_cap < b.mean_m && b.mean_m < b_cap);
            }

            #[test]
            fn closed_form_matches(k in 1i64..500) {
                let c = rat(k, 1000);
                let b = delta_bundle(&family_a_input(&c).unwrap()).unwrap();
                let (a_cap, b_cap) = family_a_input(&c).unwrap().endpoints();
                prop_assert_eq!(&b_cap, &(int(2) * &a_cap));
                prop_assert_eq!(&b.mean_m, &(rat(45, 28) * &a_cap));
                prop_assert!(b.terms().into_iter().eq(family_a_closed_form(&c).iter()));
                prop_assert!(b.delta <= int(1));
                if c != rat(3, 17) {
                    prop_assert!(b.delta < int(1));
                }
            }
        }
    }
}
