//! Monomial valuations centered at `p` and the slab polytopes that compute
//! their volume functions.
//!
//! In the affine chart `w = 1` a monomial `x^{u0} y^{u1} z^{u2}` of a quartic
//! is a lattice point `u`. Sections of `4H - 2E` on `Y` are the points of the
//! slab `{u ≥ 0 : 2 ≤ Σu ≤ 4}`, and the condition `v ≥ t` for a monomial
//! valuation with weights `ℓ` cuts it by `ℓ·u ≥ t`. The volume of
//! `-K_Y - t·v` is `3!` times the euclidean volume of that slice.
//!
//! All polytope work uses brute-force vertex enumeration over the six
//! bounding planes and a fan triangulation of each facet, in exact
//! arithmetic.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::divgeom::{cube, DivisorClass, LogPairY};
use crate::exactnum::{int, PiecewisePoly, Rational, UniPoly};
use crate::polyforms::monomial_value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("valuation weights must be nonnegative, got {0}")]
    NegativeWeight(String),
    #[error("valuation weights must not all be zero")]
    ZeroWeights,
    #[error("slab needs 0 <= m <= d, got m = {m}, d = {d}")]
    BadSlab { d: String, m: String },
    #[error("slice profile on [{lo}, {hi}] is not cubic")]
    NotCubic { lo: String, hi: String },
}

/// Monomial valuation on the chart `w = 1` with `v(x), v(y), v(z)` given.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialValuation {
    weights: [Rational; 3],
}

impl MonomialValuation {
    pub fn new(weights: [Rational; 3]) -> Result<Self, ValuationError> {
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(ValuationError::NegativeWeight(w.to_string()));
        }
        if weights.iter().all(Zero::is_zero) {
            return Err(ValuationError::ZeroWeights);
        }
        Ok(Self { weights })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self, ValuationError> {
        Self::new([int(a), int(b), int(c)])
    }

    pub fn weights(&self) -> &[Rational; 3] {
        &self.weights
    }

    /// `A_{P³}(v) = v(x) + v(y) + v(z)`.
    pub fn log_discrepancy(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn swapped_xy(&self) -> Self {
        let [a, b, c] = self.weights.clone();
        Self { weights: [b, a, c] }
    }
}

/// `{u ∈ R³≥0 : m ≤ u0 + u1 + u2 ≤ d}` together with a linear functional `ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlabPolytope {
    pub d: Rational,
    pub m: Rational,
    pub ell: [Rational; 3],
}

/// A point of R³ with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex3(pub [Rational; 3]);

impl SlabPolytope {
    pub fn new(d: Rational, m: Rational, ell: [Rational; 3]) -> Result<Self, ValuationError> {
        if m.is_negative() || m > d {
            return Err(ValuationError::BadSlab {
                d: d.to_string(),
                m: m.to_string(),
            });
        }
        if let Some(w) = ell.iter().find(|w| w.is_negative()) {
            return Err(ValuationError::NegativeWeight(w.to_string()));
        }
        Ok(Self { d, m, ell })
    }

    /// The simplex `{u ≥ 0 : Σu ≤ 1}`.
    pub fn unit_simplex(ell: [Rational; 3]) -> Self {
        Self::new(Rational::one(), Rational::zero(), ell).expect("valid unit slab")
    }

    /// `(d³ - m³)/6`
    pub fn euclidean_volume(&self) -> Rational {
        (&self.d * &self.d * &self.d - &self.m * &self.m * &self.m) / int(6)
    }

    fn ell_at(&self, u: &Vertex3) -> Rational {
        dot(&self.ell, &u.0)
    }

    fn halfspaces(&self, slice: Option<&Rational>) -> Vec<HalfSpace> {
        let one = Rational::one();
        let zero = Rational::zero();
        let mut hs = vec![
            HalfSpace::new([one.clone(), zero.clone(), zero.clone()], zero.clone()),
            HalfSpace::new([zero.clone(), one.clone(), zero.clone()], zero.clone()),
            HalfSpace::new([zero.clone(), zero.clone(), one.clone()], zero.clone()),
            HalfSpace::new([-&one, -&one, -&one], -&self.d),
            HalfSpace::new([one.clone(), one.clone(), one.clone()], self.m.clone()),
        ];
        if let Some(t) = slice {
            hs.push(HalfSpace::new(self.ell.clone(), t.clone()));
        }
        hs
    }

    pub fn vertices(&self) -> Vec<Vertex3> {
        enumerate_vertices(&self.halfspaces(None))
    }
}

fn dot(a: &[Rational; 3], b: &[Rational; 3]) -> Rational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn sub(a: &[Rational; 3], b: &[Rational; 3]) -> [Rational; 3] {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn cross(a: &[Rational; 3], b: &[Rational; 3]) -> [Rational; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn det3(a: &[Rational; 3], b: &[Rational; 3], c: &[Rational; 3]) -> Rational {
    dot(a, &cross(b, c))
}

/// `normal · u ≥ offset`
#[derive(Debug, Clone)]
struct HalfSpace {
    normal: [Rational; 3],
    offset: Rational,
}

impl HalfSpace {
    fn new(normal: [Rational; 3], offset: Rational) -> Self {
        Self { normal, offset }
    }

    fn slack(&self, u: &[Rational; 3]) -> Rational {
        dot(&self.normal, u) - &self.offset
    }

    fn is_degenerate(&self) -> bool {
        self.normal.iter().all(Zero::is_zero)
    }
}

/// Intersection of three planes by Cramer's rule.
fn solve3(planes: [&HalfSpace; 3]) -> Option<[Rational; 3]> {
    let [a, b, c] = planes.map(|p| &p.normal);
    let det = det3(a, b, c);
    if det.is_zero() {
        return None;
    }
    let rhs = planes.map(|p| p.offset.clone());
    let col = |i: usize| {
        let m = |row: &[Rational; 3], r: &Rational| {
            let mut out = row.clone();
            out[i] = r.clone();
            out
        };
        det3(&m(a, &rhs[0]), &m(b, &rhs[1]), &m(c, &rhs[2])) / &det
    };
    Some([col(0), col(1), col(2)])
}

fn enumerate_vertices(hs: &[HalfSpace]) -> Vec<Vertex3> {
    let mut out: Vec<Vertex3> = Vec::new();
    let n = hs.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Some(u) = solve3([&hs[i], &hs[j], &hs[k]]) else {
                    continue;
                };
                if hs.iter().all(|h| !h.slack(&u).is_negative()) {
                    out.push(Vertex3(u));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

type Tetrahedron = [[Rational; 3]; 4];

fn tetra_volume(t: &Tetrahedron) -> Rational {
    det3(&sub(&t[1], &t[0]), &sub(&t[2], &t[0]), &sub(&t[3], &t[0])).abs() / int(6)
}

/// Cyclic order of the vertices of a convex polygon with the given normal.
fn order_polygon(points: &[[Rational; 3]], normal: &[Rational; 3]) -> Vec<usize> {
    let mut order = vec![0];
    loop {
        let cur = *order.last().expect("nonempty");
        let next = (0..points.len())
            .find(|&q| {
                q != cur
                    && (0..points.len()).all(|r| {
                        r == cur
                            || r == q
                            || !dot(
                                normal,
                                &cross(
                                    &sub(&points[q], &points[cur]),
                                    &sub(&points[r], &points[cur]),
                                ),
                            )
                            .is_negative()
                    })
            })
            .expect("convex polygon has a successor");
        if next == order[0] {
            return order;
        }
        order.push(next);
    }
}

/// Triangulation of `∩ hs` into tetrahedra coned from the vertex centroid.
/// Empty or flat polytopes give no tetrahedra.
fn triangulate(hs: &[HalfSpace]) -> Vec<Tetrahedron> {
    let active: Vec<HalfSpace> = hs.iter().filter(|h| !h.is_degenerate()).cloned().collect();
    if hs
        .iter()
        .any(|h| h.is_degenerate() && h.offset.is_positive())
    {
        return Vec::new();
    }
    let verts: Vec<[Rational; 3]> = enumerate_vertices(&active)
        .into_iter()
        .map(|v| v.0)
        .collect();
    if verts.len() < 4 {
        return Vec::new();
    }
    let n = int(verts.len() as i64);
    let center = [0, 1, 2].map(|i| verts.iter().map(|v| &v[i]).sum::<Rational>() / &n);

    let mut faces: Vec<(Vec<usize>, &HalfSpace)> = Vec::new();
    for h in &active {
        let mut on: Vec<usize> = (0..verts.len())
            .filter(|&i| h.slack(&verts[i]).is_zero())
            .collect();
        if on.len() < 3 {
            continue;
        }
        on.sort_unstable();
        if faces.iter().any(|(f, _)| *f == on) {
            continue;
        }
        faces.push((on, h));
    }

    let mut tets = Vec::new();
    for (idx, h) in faces {
        let pts: Vec<[Rational; 3]> = idx.iter().map(|&i| verts[i].clone()).collect();
        let order = order_polygon(&pts, &h.normal);
        for w in 1..order.len().saturating_sub(1) {
            let t = [
                center.clone(),
                pts[order[0]].clone(),
                pts[order[w]].clone(),
                pts[order[w + 1]].clone(),
            ];
            if !tetra_volume(&t).is_zero() {
                tets.push(t);
            }
        }
    }
    tets
}

/// Euclidean volume of `P ∩ {ℓ ≥ t}`, for `t ≥ 0`.
pub fn slice_volume(p: &SlabPolytope, t: &Rational) -> Rational {
    triangulate(&p.halfspaces(Some(t)))
        .iter()
        .map(tetra_volume)
        .sum()
}

/// `∫_P ℓ(u) du`, by the simplex rule `∫_Δ ℓ = vol(Δ)·mean ℓ(vertices)`.
pub fn integral_linear_over_slab(p: &SlabPolytope) -> Rational {
    triangulate(&p.halfspaces(None))
        .iter()
        .map(|t| {
            let mean: Rational = t.iter().map(|v| dot(&p.ell, v)).sum::<Rational>() / int(4);
            tetra_volume(t) * mean
        })
        .sum()
}

fn lagrange(xs: &[Rational], ys: &[Rational]) -> UniPoly {
    let mut out = UniPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = UniPoly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                let factor =
                    UniPoly::linear(-xj, Rational::one()).scale(&(Rational::one() / (xi - xj)));
                basis = &basis * &factor;
            }
        }
        out = &out + &basis;
    }
    out
}

/// `t ↦ slice_volume(P, t)` as an exact piecewise cubic on `[0, max ℓ]`.
///
/// Breakpoints are the values of `ℓ` at the vertices of the slab; each piece
/// is interpolated through four samples and checked at a fifth.
pub fn slice_volume_profile(p: &SlabPolytope) -> Result<PiecewisePoly, ValuationError> {
    let mut breaks: Vec<Rational> = p.vertices().iter().map(|v| p.ell_at(v)).collect();
    breaks.push(Rational::zero());
    breaks.sort();
    breaks.dedup();
    if breaks.len() < 2 {
        // ℓ vanishes on P (or P is a point)
        breaks.push(Rational::one());
        let full = UniPoly::constant(slice_volume(p, &Rational::zero()));
        let pieces = if p.ell.iter().all(Zero::is_zero) {
            UniPoly::zero()
        } else {
            full
        };
        return Ok(PiecewisePoly::new(breaks, vec![pieces]).expect("two breakpoints"));
    }
    let mut pieces = Vec::with_capacity(breaks.len() - 1);
    for w in breaks.windows(2) {
        let step = (&w[1] - &w[0]) / int(4);
        let xs: Vec<Rational> = (0..5).map(|k| &w[0] + &step * int(k)).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| slice_volume(p, x)).collect();
        let cubic = lagrange(&xs[..4], &ys[..4]);
        if cubic.eval(&xs[4]) != ys[4] {
            return Err(ValuationError::NotCubic {
                lo: w[0].to_string(),
                hi: w[1].to_string(),
            });
        }
        pieces.push(cubic);
    }
    Ok(PiecewisePoly::new(breaks, pieces).expect("sorted breakpoints"))
}

/// Returns `(vol(P_t), d³·vol(Q_{t/d}) - m³·vol(Q_{t/m}))` with `Q` the unit
/// simplex; the two agree.
pub fn scaling_check(
    d: &Rational,
    m: &Rational,
    t: &Rational,
    ell: &[Rational; 3],
) -> Result<(Rational, Rational), ValuationError> {
    let slab = SlabPolytope::new(d.clone(), m.clone(), ell.clone())?;
    let q = SlabPolytope::unit_simplex(ell.clone());
    let direct = slice_volume(&slab, t);
    let cubed = |k: &Rational| k * k * k;
    let scaled = cubed(d) * slice_volume(&q, &(t / d)) - cubed(m) * slice_volume(&q, &(t / m));
    Ok((direct, scaled))
}

/// The slab of `-K_Y = 4H - 2E` cut by `v`.
pub fn anticanonical_slab(v: &MonomialValuation) -> SlabPolytope {
    SlabPolytope::new(int(4), int(2), v.weights().clone()).expect("valid slab")
}

/// `∫₀^∞ vol(-K_Y - t·v) dt = 3!·∫_P ℓ_v`.
pub fn integrated_volume(v: &MonomialValuation) -> Rational {
    int(6) * integral_linear_over_slab(&anticanonical_slab(v))
}

pub fn s_invariant_valuation(pair: &LogPairY, v: &MonomialValuation) -> Rational {
    let vol = cube(&DivisorClass::anticanonical());
    (Rational::one() - pair.c()) * integrated_volume(v) / vol
}

pub fn a_invariant_valuation(pair: &LogPairY, v: &MonomialValuation) -> Rational {
    v.log_discrepancy() - pair.c() * monomial_value(v, pair.boundary())
}

pub fn beta_valuation(pair: &LogPairY, v: &MonomialValuation) -> Rational {
    a_invariant_valuation(pair, v) - s_invariant_valuation(pair, v)
}

/// β of one basis valuation of the torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FutakiValue {
    pub valuation: MonomialValuation,
    pub a: Rational,
    pub s: Rational,
    pub beta: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FutakiReport {
    pub values: Vec<FutakiValue>,
    pub pass: bool,
}

/// The Futaki character vanishes iff β vanishes on the valuations induced by
/// a basis of the cocharacter lattice. Both basis elements, weights `(3,0,1)`
/// and `(0,3,1)`, are evaluated directly.
pub fn futaki_vanishing_check(pair: &LogPairY) -> FutakiReport {
    let basis = [
        MonomialValuation::from_ints(3, 0, 1).expect("valid weights"),
        MonomialValuation::from_ints(0, 3, 1).expect("valid weights"),
    ];
    let values: Vec<FutakiValue> = basis
        .into_iter()
        .map(|v| {
            let a = a_invariant_valuation(pair, &v);
            let s = s_invariant_valuation(pair, &v);
            FutakiValue {
                beta: &a - &s,
                a,
                s,
                valuation: v,
            }
        })
        .collect();
    let pass = values.iter().all(|fv| fv.beta.is_zero());
    FutakiReport { values, pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::polyforms::parse_poly;

    fn ell(a: i64, b: i64, c: i64) -> [Rational; 3] {
        [int(a), int(b), int(c)]
    }

    fn q() -> SlabPolytope {
        SlabPolytope::unit_simplex(ell(3, 0, 1))
    }

    fn p42() -> SlabPolytope {
        SlabPolytope::new(int(4), int(2), ell(3, 0, 1)).unwrap()
    }

    fn pair(c: Rational) -> LogPairY {
        LogPairY::new(c, parse_poly("x*y*w^2 + z^3*w").unwrap()).unwrap()
    }

    /// The printed closed form of vol(Q_t).
    fn vol_q_closed(t: &Rational) -> Rational {
        if t <= &int(1) {
            rat(1, 6) - rat(1, 6) * t * t + rat(2, 27) * t * t * t
        } else if t <= &int(3) {
            let s = int(3) - t;
            &s * &s * &s / int(108)
        } else {
            int(0)
        }
    }

    #[test]
    fn slice_examples() {
        assert_eq!(slice_volume(&q(), &rat(1, 2)), rat(29, 216));
        assert_eq!(slice_volume(&q(), &int(2)), rat(1, 108));
        assert_eq!(slice_volume(&q(), &int(0)), rat(1, 6));
        assert_eq!(slice_volume(&q(), &int(3)), int(0));
        assert_eq!(slice_volume(&q(), &int(5)), int(0));
        assert_eq!(slice_volume(&p42(), &int(0)), rat(56, 6));
        for k in 0..=40 {
            let t = rat(k, 10);
            assert_eq!(slice_volume(&q(), &t), vol_q_closed(&t), "t = {t}");
        }
    }

    #[test]
    fn integral_examples() {
        assert_eq!(integral_linear_over_slab(&q()), rat(1, 6));
        assert_eq!(integral_linear_over_slab(&p42()), int(40));
        let zero = SlabPolytope::new(int(3), int(1), ell(0, 0, 0)).unwrap();
        assert_eq!(integral_linear_over_slab(&zero), int(0));
        assert_eq!(
            integrated_volume(&MonomialValuation::from_ints(3, 0, 1).unwrap()),
            int(240)
        );
    }

    #[test]
    fn profile_matches_integral() {
        let prof = slice_volume_profile(&q()).unwrap();
        assert_eq!(prof.breakpoints(), &[int(0), int(1), int(3)]);
        assert_eq!(prof.integrate_all(), rat(1, 6));
        assert_eq!(
            prof.pieces()[0],
            UniPoly::from_coeffs(vec![rat(1, 6), int(0), rat(-1, 6), rat(2, 27)])
        );
        let prof = slice_volume_profile(&p42()).unwrap();
        assert_eq!(prof.integrate_all(), int(40));
    }

    #[test]
    fn scaling_examples() {
        let w = ell(3, 0, 1);
        let (a, b) = scaling_check(&int(4), &int(2), &int(5), &w).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            scaling_check(&int(4), &int(2), &int(0), &w).unwrap(),
            (rat(56, 6), rat(56, 6))
        );
        assert_eq!(
            scaling_check(&int(4), &int(2), &int(12), &w).unwrap(),
            (int(0), int(0))
        );
    }

    #[test]
    fn valuation_invariants() {
        let v = MonomialValuation::from_ints(3, 0, 1).unwrap();
        let v_swap = MonomialValuation::from_ints(0, 3, 1).unwrap();
        let at = pair(rat(2, 9));
        assert_eq!(s_invariant_valuation(&at, &v), rat(10, 3));
        assert_eq!(s_invariant_valuation(&at, &v_swap), rat(10, 3));
        assert_eq!(a_invariant_valuation(&at, &v), rat(10, 3));
        assert_eq!(a_invariant_valuation(&at, &v_swap), rat(10, 3));
        assert_eq!(beta_valuation(&at, &v), int(0));
        assert_eq!(beta_valuation(&at, &v_swap), int(0));
        assert_eq!(integrated_volume(&v) / int(56), rat(30, 7));
    }

    #[test]
    fn point_blowup_valuation() {
        // log discrepancy of the ordinary blow-up of a point
        let v = MonomialValuation::from_ints(1, 1, 1).unwrap();
        assert_eq!(v.log_discrepancy(), int(3));
        let at = pair(rat(2, 9));
        assert_eq!(a_invariant_valuation(&at, &v), rat(23, 9));
        // slab integral of u0+u1+u2 over 2 <= Σu <= 4 is (4^4 - 2^4)/8 = 30
        assert_eq!(integral_linear_over_slab(&anticanonical_slab(&v)), int(30));
        assert_eq!(s_invariant_valuation(&at, &v), rat(5, 2));
        assert_eq!(beta_valuation(&at, &v), rat(1, 18));
    }

    #[test]
    fn futaki() {
        let ok = futaki_vanishing_check(&pair(rat(2, 9)));
        assert!(ok.pass);
        assert!(ok.values.iter().all(|v| v.beta.is_zero()));
        // β(v) = -2/7 + 9c/7 for both basis valuations
        let bad = futaki_vanishing_check(&pair(rat(1, 2)));
        assert!(!bad.pass);
        assert_eq!(bad.values[0].beta, rat(5, 14));
        assert_eq!(bad.values[1].beta, rat(5, 14));
        let nudged = futaki_vanishing_check(&pair(rat(2, 9) + rat(1, 100)));
        assert_eq!(nudged.values[0].beta, rat(9, 700));
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(
            MonomialValuation::from_ints(0, 0, 0),
            Err(ValuationError::ZeroWeights)
        );
        assert!(MonomialValuation::from_ints(1, -1, 0).is_err());
        assert!(SlabPolytope::new(int(1), int(2), ell(1, 1, 1)).is_err());
        assert!(SlabPolytope::new(int(1), int(-1), ell(1, 1, 1)).is_err());
    }

    #[test]
    fn degenerate_slices() {
        // slicing plane through a vertex / along a face of the slab
        let s = SlabPolytope::new(int(2), int(1), ell(1, 1, 1)).unwrap();
        assert_eq!(slice_volume(&s, &int(1)), rat(7, 6));
        assert_eq!(slice_volume(&s, &int(2)), int(0));
        assert_eq!(slice_volume(&s, &rat(3, 2)), (int(8) - rat(27, 8)) / int(6));
        let flat = SlabPolytope::new(int(2), int(2), ell(1, 0, 0)).unwrap();
        assert_eq!(slice_volume(&flat, &int(0)), int(0));
        assert_eq!(integral_linear_over_slab(&flat), int(0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn slab() -> impl Strategy<Value = SlabPolytope> {
            (
                1i64..6,
                1i64..4,
                0i64..4,
                proptest::array::uniform3(0i64..5),
            )
                .prop_filter("nonzero functional", |(_, _, _, w)| {
                    w.iter().any(|x| *x > 0)
                })
                .prop_map(|(dn, dd, mfrac, w)| {
                    let d = rat(dn, dd);
                    let m = &d * rat(mfrac, 4);
                    SlabPolytope::new(d, m, w.map(int)).unwrap()
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(20))]

            #[test]
            fn layer_cake(p in slab()) {
                let prof = slice_volume_profile(&p).unwrap();
                prop_assert!(prof.is_continuous());
                prop_assert_eq!(prof.integrate_all(), integral_linear_over_slab(&p));
                prop_assert_eq!(slice_volume(&p, &int(0)), p.euclidean_volume());
            }

            #[test]
            fn slice_is_nonincreasing(p in slab()) {
                let top = p.vertices().iter().map(|v| dot(&p.ell, &v.0)).max().unwrap();
                let mut prev = slice_volume(&p, &int(0));
                for k in 1..=12 {
                    let t = &top * rat(k, 10);
                    let cur = slice_volume(&p, &t);
                    prop_assert!(cur <= prev);
                    prev = cur;
                }
                prop_assert_eq!(prev, int(0));
            }

            #[test]
            fn pieces_have_vanishing_fourth_difference(p in slab()) {
                let prof = slice_volume_profile(&p).unwrap();
                for w in prof.breakpoints().windows(2) {
                    let step = (&w[1] - &w[0]) / int(4);
                    let y: Vec<Rational> = (0..5).map(|k| slice_volume(&p, &(&w[0] + &step * int(k)))).collect();
                    let fourth = &y[4] - int(4) * &y[3] + int(6) * &y[2] - int(4) * &y[1] + &y[0];
                    prop_assert_eq!(fourth, int(0));
                }
            }

            #[test]
            fn scaling_identity(p in slab(), k in 0i64..40) {
                prop_assume!(p.m.is_positive());
                let t = rat(k, 3);
                let (a, b) = scaling_check(&p.d, &p.m, &t, &p.ell).unwrap();
                prop_assert_eq!(a, b);
            }

            #[test]
            fn swap_symmetry(a in 0i64..5, b in 0i64..5, c in 0i64..5, num in 1i64..9) {
                prop_assume!(a + b + c > 0);
                let v = MonomialValuation::from_ints(a, b, c).unwrap();
                let at = pair(rat(num, 10));
                prop_assert_eq!(s_invariant_valuation(&at, &v), s_invariant_valuation(&at, &v.swapped_xy()));
                prop_assert_eq!(a_invariant_valuation(&at, &v), a_invariant_valuation(&at, &v.swapped_xy()));
            }
        }
    }
}
