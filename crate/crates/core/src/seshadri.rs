//! Multiple Seshadri constants at finite subgroups, under the assumption
//! that the surface has Picard number one.
//!
//! The computation reduces along the quotient isogeny: the multiple
//! constant at an orbit x + G equals (1/n) times the single-point constant
//! of the descended bundle M of type (1, d'), and the latter is classical:
//!
//! * if 2d' is a perfect square, epsilon(M) = sqrt(2d');
//! * otherwise epsilon(M) = 2d' * k0 / l0 for the minimal solution
//!   (l0, k0) of the Pell equation l^2 - 2d' k^2 = 1.
//!
//! Dividing by n and rewriting 2d'/n = 2dn/g gives the closed forms
//! implemented here, together with specializations to full torsion
//! subgroups, pairs of half-periods, and a semicontinuity lower bound for
//! very general r-tuples of points. Every epsilon is an exact rational
//! (or, in the square case, a rational square root sqrt(2d/g)).
//!
//! The Picard-number hypothesis is analytic and is not (cannot be) checked
//! from the lattice data; results carry it as a named assumption.

use crate::arith::{int, integer_sqrt_exact, Integer, Rational};
use crate::descent::{descent_data, DescentError};
use crate::lattice::{
    k_of_l_contains, quotient_invariants, superlattice, LatticeError, LatticeVector,
    PolarizedSurface, SubgroupPresentation,
};
use crate::pell::{fundamental_solution, PellError, PellSolution};
use num_traits::One;

/// Hypothesis under which the closed forms are exact.
pub const RHO_ONE_ASSUMPTION: &str = "rho=1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeshadriError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Descent(#[from] DescentError),
    #[error(transparent)]
    Pell(#[from] PellError),
    #[error("descended bundle of type {type_of_m:?} is not primitive; minimal descent should prevent this")]
    NonPrimitiveDescent { type_of_m: (Integer, Integer) },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid half-period input: {0}")]
    InvalidHalfPeriod(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Which branch of the single-point formula applied on the quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// 2d' is a perfect square; epsilon = sqrt(2d/g) is rational.
    Square,
    /// Epsilon comes from the fundamental Pell solution for 2d'.
    Pell,
}

/// Intermediate quantities of the derivation, kept for reporting and
/// cross-checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTrace {
    pub d: Integer,
    /// Order of the subgroup.
    pub g: Integer,
    pub exponent: Integer,
    pub invariant_factors: Vec<Integer>,
    /// Minimal n with nL descending to the quotient.
    pub n: Integer,
    /// Degree of the primitive descended bundle, d' = n^2 d / g.
    pub d_prime: Integer,
    pub type_of_m: (Integer, Integer),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeshadriResult {
    pub epsilon: Rational,
    pub case: CaseTag,
    /// Fundamental solution of l^2 - 2d' k^2 = 1; absent in the square case.
    pub pell: Option<PellSolution>,
    pub trace: DerivationTrace,
    /// 2d/g, the square of the elementary upper bound sqrt(2d/g).
    pub upper_bound_squared: Rational,
    /// True when the value is only guaranteed as a lower bound
    /// (semicontinuity arguments), false when it is the exact constant.
    pub is_lower_bound: bool,
}

/// The elementary upper bound epsilon <= sqrt(2d/g).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperBound {
    pub squared: Rational,
    /// The exact rational root when 2d/g is a square.
    pub exact: Option<Rational>,
}

pub fn upper_bound(d: &Integer, g: &Integer) -> UpperBound {
    let squared = Rational::new(int(2) * d, g.clone());
    let exact =
        crate::arith::is_perfect_square(&squared).expect("2d/g has nonzero denominator");
    UpperBound { squared, exact }
}

/// Shared final step: evaluate the constant from descent data.
fn from_descent(
    d: Integer,
    g: Integer,
    exponent: Integer,
    invariant_factors: Vec<Integer>,
    n: Integer,
    d_prime: Integer,
    type_of_m: (Integer, Integer),
) -> Result<SeshadriResult, SeshadriError> {
    let two_d_prime = int(2) * &d_prime;
    let upper_bound_squared = Rational::new(int(2) * &d, g.clone());
    let (epsilon, case, pell) = match integer_sqrt_exact(&two_d_prime) {
        Some(root) => (Rational::new(root, n.clone()), CaseTag::Square, None),
        None => {
            let sol = fundamental_solution(&two_d_prime)?;
            // (2dn/g) * (k0/l0), kept exact
            let eps = Rational::new(int(2) * &d * &n * &sol.k0, &g * &sol.l0);
            (eps, CaseTag::Pell, Some(sol))
        }
    };
    Ok(SeshadriResult {
        epsilon,
        case,
        pell,
        trace: DerivationTrace {
            d,
            g,
            exponent,
            invariant_factors,
            n,
            d_prime,
            type_of_m,
        },
        upper_bound_squared,
        is_lower_bound: false,
    })
}

/// Single-point constant of a primitive bundle of type (1, d): sqrt(2d)
/// when 2d is a perfect square, else 2d k0/l0 from the Pell equation
/// l^2 - 2d k^2 = 1.
pub fn bauer_simple(d: &Integer) -> Result<SeshadriResult, SeshadriError> {
    let s = PolarizedSurface::new(d.clone())?;
    from_descent(
        s.d().clone(),
        Integer::one(),
        Integer::one(),
        vec![],
        Integer::one(),
        s.d().clone(),
        (Integer::one(), s.d().clone()),
    )
}

/// The multiple constant at (a coset of) the subgroup presented by `p`,
/// via the full superlattice/descent pipeline.
pub fn multi_at_subgroup(p: &SubgroupPresentation) -> Result<SeshadriResult, SeshadriError> {
    let basis = superlattice(p);
    let invariants = quotient_invariants(&basis);
    let data = descent_data(p.surface(), &basis, &invariants)?;
    if !data.primitive {
        return Err(SeshadriError::NonPrimitiveDescent {
            type_of_m: data.type_of_m,
        });
    }
    from_descent(
        p.surface().d().clone(),
        invariants.order,
        invariants.exponent,
        invariants.invariant_factors,
        data.n,
        data.d_prime,
        data.type_of_m,
    )
}

/// The constant at the full m-torsion subgroup: g = m^4, n = m^2, and the
/// descended bundle has the original type (1, d), so epsilon is
/// sqrt(2d)/m^2 in the square case and (2d/m^2) k0/l0 otherwise.
pub fn torsion_constant(d: &Integer, m: &Integer) -> Result<SeshadriResult, SeshadriError> {
    PolarizedSurface::new(d.clone())?;
    if m < &Integer::one() {
        return Err(SeshadriError::InvalidParameter(format!(
            "torsion level must be at least 1, got {m}"
        )));
    }
    let m2 = m * m;
    let invariant_factors = if m.is_one() {
        vec![]
    } else {
        vec![m.clone(), m.clone(), m.clone(), m.clone()]
    };
    from_descent(
        d.clone(),
        &m2 * &m2,
        m.clone(),
        invariant_factors,
        m2,
        d.clone(),
        (Integer::one(), d.clone()),
    )
}

/// The constant at a pair of distinct half-periods x1, x2, for d not a
/// perfect square. With v = x2 - x1 the value depends only on whether v
/// lies in the kernel K(L) of the polarization:
///
/// * v in K(L) (forces d even): epsilon = d k0/l0 with l^2 - d k^2 = 1;
/// * v not in K(L): epsilon = 2d k0/l0 with l^2 - 4d k^2 = 1.
pub fn half_period_pair(
    s: &PolarizedSurface,
    x1: &LatticeVector,
    x2: &LatticeVector,
) -> Result<SeshadriResult, SeshadriError> {
    let two_rat = Rational::from(int(2));
    for (label, x) in [("first", x1), ("second", x2)] {
        let doubled_integral = x.coords().iter().all(|c| (c * &two_rat).is_integer());
        if !doubled_integral {
            return Err(SeshadriError::InvalidHalfPeriod(format!(
                "{label} point {x} is not a half-period"
            )));
        }
    }
    let v = x2.sub(x1).canonicalized();
    if v.is_zero() {
        return Err(SeshadriError::InvalidHalfPeriod(
            "the two half-periods coincide".into(),
        ));
    }
    if integer_sqrt_exact(s.d()).is_some() {
        return Err(SeshadriError::HypothesisViolated(format!(
            "d = {} is a perfect square",
            s.d()
        )));
    }
    let d = s.d().clone();
    let two = int(2);
    if k_of_l_contains(s, &v) {
        // v in K(L) makes E integral on the superlattice, so n = 1 and
        // d' = d/2; membership forces d even.
        debug_assert!((&d % &two) == int(0));
        let d_half = &d / &two;
        from_descent(
            d.clone(),
            two.clone(),
            two,
            vec![int(2)],
            Integer::one(),
            d_half.clone(),
            (Integer::one(), d_half),
        )
    } else {
        let two_d = &two * &d;
        from_descent(
            d,
            two.clone(),
            two.clone(),
            vec![int(2)],
            two,
            two_d.clone(),
            (Integer::one(), two_d),
        )
    }
}

/// Lower bound for the constant at r very general points, by semicontinuity
/// from the orbit of the cyclic subgroup generated by lambda1/r: there
/// g = r, n = r, d' = rd, so the bound is sqrt(2d/r) in the square case
/// and 2d k0/l0 with l^2 - 2rd k^2 = 1 otherwise.
pub fn general_points_lower_bound(
    d: &Integer,
    r: &Integer,
) -> Result<SeshadriResult, SeshadriError> {
    PolarizedSurface::new(d.clone())?;
    if r < &Integer::one() {
        return Err(SeshadriError::InvalidParameter(format!(
            "number of points must be at least 1, got {r}"
        )));
    }
    let invariant_factors = if r.is_one() { vec![] } else { vec![r.clone()] };
    let rd = r * d;
    let mut result = from_descent(
        d.clone(),
        r.clone(),
        r.clone(),
        invariant_factors,
        r.clone(),
        rd.clone(),
        (Integer::one(), rd),
    )?;
    result.is_lower_bound = true;
    Ok(result)
}

/// Previously published lower bound for four very general points,
/// 4d k0/l0 with l^2 - 32d k^2 = 1, kept for comparison against
/// [`general_points_lower_bound`] with r = 4. Requires 2d not a perfect
/// square.
pub fn tg_half_period_bound(d: &Integer) -> Result<(Rational, PellSolution), SeshadriError> {
    PolarizedSurface::new(d.clone())?;
    let two_d = int(2) * d;
    if integer_sqrt_exact(&two_d).is_some() {
        return Err(SeshadriError::HypothesisViolated(format!(
            "2d = {two_d} is a perfect square"
        )));
    }
    let sol = fundamental_solution(&(int(16) * &two_d))?;
    let bound = Rational::new(int(4) * d * &sol.k0, sol.l0.clone());
    Ok((bound, sol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn vec4(c: [(i64, i64); 4]) -> LatticeVector {
        LatticeVector::new(c.map(|(n, d)| rat(n, d)))
    }

    fn surface(d: i64) -> PolarizedSurface {
        PolarizedSurface::new(int(d)).unwrap()
    }

    fn presentation(d: i64, gens: Vec<LatticeVector>) -> SubgroupPresentation {
        SubgroupPresentation::new(surface(d), gens)
    }

    #[test]
    fn single_point_principal_polarization() {
        let r = bauer_simple(&int(1)).unwrap();
        assert_eq!(r.epsilon, rat(4, 3));
        assert_eq!(r.case, CaseTag::Pell);
        let pell = r.pell.unwrap();
        assert_eq!((pell.d, pell.l0, pell.k0), (int(2), int(3), int(2)));
        assert!(!r.is_lower_bound);
    }

    #[test]
    fn single_point_square_case() {
        let r = bauer_simple(&int(2)).unwrap();
        assert_eq!(r.epsilon, rat(2, 1));
        assert_eq!(r.case, CaseTag::Square);
        assert!(r.pell.is_none());
        assert_eq!(r.upper_bound_squared, rat(4, 1));
    }

    #[test]
    fn single_point_type_one_four() {
        let r = bauer_simple(&int(4)).unwrap();
        assert_eq!(r.epsilon, rat(8, 3));
        let pell = r.pell.unwrap();
        assert_eq!((pell.d, pell.l0, pell.k0), (int(8), int(3), int(1)));
    }

    #[test]
    fn trivial_subgroup_matches_single_point() {
        for d in [1i64, 2, 3, 6] {
            let p = presentation(d, vec![]);
            let multi = multi_at_subgroup(&p).unwrap();
            let single = bauer_simple(&int(d)).unwrap();
            assert_eq!(multi, single);
        }
    }

    #[test]
    fn kernel_subgroup_of_order_d() {
        // class of lambda2/d generates an order-d subgroup of K(L);
        // the quotient is principally polarized, so epsilon = (1/1)*4/3... no:
        // n = 1, d' = 1, 2d' = 2, pell (3,2), epsilon = (2d/g)(nk0/l0)
        let p = presentation(2, vec![vec4([(0, 1), (1, 2), (0, 1), (0, 1)])]);
        let r = multi_at_subgroup(&p).unwrap();
        assert_eq!(r.trace.n, int(1));
        assert_eq!(r.trace.d_prime, int(1));
        assert_eq!(r.epsilon, rat(4, 3));
    }

    #[test]
    fn quarter_lattice_directions() {
        // <lambda1/2, mu1/2> on a principally polarized surface
        let p = presentation(
            1,
            vec![
                vec4([(1, 2), (0, 1), (0, 1), (0, 1)]),
                vec4([(0, 1), (0, 1), (1, 2), (0, 1)]),
            ],
        );
        let r = multi_at_subgroup(&p).unwrap();
        assert_eq!(r.trace.g, int(4));
        assert_eq!(r.trace.n, int(4));
        assert_eq!(r.trace.d_prime, int(4));
        assert_eq!(r.epsilon, rat(2, 3));
        let pell = r.pell.unwrap();
        assert_eq!((pell.d, pell.l0, pell.k0), (int(8), int(3), int(1)));
    }

    #[test]
    fn torsion_values() {
        let r = torsion_constant(&int(3), &int(2)).unwrap();
        assert_eq!(r.epsilon, rat(3, 5));
        assert_eq!(r.case, CaseTag::Pell);
        let pell = r.pell.clone().unwrap();
        assert_eq!((pell.d, pell.l0, pell.k0), (int(6), int(5), int(2)));
        assert_eq!(r.trace.g, int(16));
        assert_eq!(r.trace.n, int(4));
        assert_eq!(r.trace.invariant_factors, vec![int(2); 4]);

        let r = torsion_constant(&int(2), &int(2)).unwrap();
        assert_eq!(r.epsilon, rat(1, 2));
        assert_eq!(r.case, CaseTag::Square);

        let r = torsion_constant(&int(1), &int(3)).unwrap();
        assert_eq!(r.epsilon, rat(4, 27));

        // m = 1 degenerates to the single point
        assert_eq!(
            torsion_constant(&int(5), &int(1)).unwrap(),
            bauer_simple(&int(5)).unwrap()
        );
        assert!(torsion_constant(&int(1), &int(0)).is_err());
    }

    #[test]
    fn torsion_agrees_with_pipeline() {
        for (d, m) in [(1i64, 2i64), (2, 2), (3, 2), (1, 3), (5, 2)] {
            let gens = (0..4)
                .map(|i| {
                    let mut c = [(0i64, 1i64); 4];
                    c[i] = (1, m);
                    vec4(c)
                })
                .collect();
            let p = presentation(d, gens);
            let machine = multi_at_subgroup(&p).unwrap();
            let formula = torsion_constant(&int(d), &int(m)).unwrap();
            assert_eq!(machine, formula, "d={d} m={m}");
        }
    }

    #[test]
    fn half_periods_outside_kernel() {
        let s = surface(3);
        let r = half_period_pair(
            &s,
            &LatticeVector::zero(),
            &vec4([(1, 2), (0, 1), (0, 1), (0, 1)]),
        )
        .unwrap();
        assert_eq!(r.epsilon, rat(12, 7));
        let pell = r.pell.unwrap();
        assert_eq!((pell.d, pell.l0, pell.k0), (int(12), int(7), int(2)));
    }

    #[test]
    fn half_periods_inside_kernel() {
        let s = surface(2);
        let r = half_period_pair(
            &s,
            &LatticeVector::zero(),
            &vec4([(0, 1), (1, 2), (0, 1), (0, 1)]),
        )
        .unwrap();
        assert_eq!(r.epsilon, rat(4, 3));
        assert_eq!(r.trace.n, int(1));
        assert_eq!(r.trace.d_prime, int(1));
        let pell = r.pell.unwrap();
        assert_eq!((pell.d, pell.l0, pell.k0), (int(2), int(3), int(2)));
    }

    #[test]
    fn half_periods_only_difference_matters() {
        let s = surface(3);
        let a = half_period_pair(
            &s,
            &vec4([(1, 2), (0, 1), (0, 1), (0, 1)]),
            &vec4([(0, 1), (0, 1), (1, 2), (0, 1)]),
        )
        .unwrap();
        let b = half_period_pair(
            &s,
            &LatticeVector::zero(),
            &vec4([(1, 2), (0, 1), (1, 2), (0, 1)]),
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn half_periods_agree_with_pipeline() {
        for (d, v) in [
            (3i64, vec4([(1, 2), (0, 1), (0, 1), (0, 1)])),
            (2, vec4([(0, 1), (1, 2), (0, 1), (0, 1)])),
            (5, vec4([(0, 1), (0, 1), (0, 1), (1, 2)])),
            (6, vec4([(0, 1), (1, 2), (0, 1), (1, 2)])),
        ] {
            let s = surface(d);
            let formula = half_period_pair(&s, &LatticeVector::zero(), &v).unwrap();
            let machine =
                multi_at_subgroup(&SubgroupPresentation::new(s, vec![v.clone()])).unwrap();
            assert_eq!(machine, formula, "d={d} v={v}");
        }
    }

    #[test]
    fn half_period_validation() {
        let s = surface(3);
        let half = vec4([(1, 2), (0, 1), (0, 1), (0, 1)]);
        // not a half-period
        assert!(matches!(
            half_period_pair(&s, &LatticeVector::zero(), &vec4([(1, 3), (0, 1), (0, 1), (0, 1)])),
            Err(SeshadriError::InvalidHalfPeriod(_))
        ));
        // equal points (mod the lattice)
        assert!(matches!(
            half_period_pair(&s, &half, &vec4([(3, 2), (0, 1), (1, 1), (0, 1)])),
            Err(SeshadriError::InvalidHalfPeriod(_))
        ));
        // square degree
        assert!(matches!(
            half_period_pair(&surface(4), &LatticeVector::zero(), &half),
            Err(SeshadriError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn general_points_values() {
        // r = 2 on a principal polarization: 2rd = 4 is square, bound = 1
        let r = general_points_lower_bound(&int(1), &int(2)).unwrap();
        assert_eq!(r.epsilon, rat(1, 1));
        assert_eq!(r.case, CaseTag::Square);
        assert!(r.is_lower_bound);

        let r = general_points_lower_bound(&int(1), &int(4)).unwrap();
        assert_eq!(r.epsilon, rat(2, 3));
        let pell = r.pell.clone().unwrap();
        assert_eq!((pell.d, pell.l0, pell.k0), (int(8), int(3), int(1)));

        let r = general_points_lower_bound(&int(3), &int(4)).unwrap();
        assert_eq!(r.epsilon, rat(6, 5));

        // r = 1 recovers the single-point value (but flagged as a bound)
        let r = general_points_lower_bound(&int(1), &int(1)).unwrap();
        assert_eq!(r.epsilon, rat(4, 3));

        assert!(general_points_lower_bound(&int(1), &int(0)).is_err());
    }

    #[test]
    fn general_points_agree_with_pipeline() {
        for (d, r) in [(1i64, 2i64), (1, 4), (3, 4), (2, 3), (5, 7)] {
            let formula = general_points_lower_bound(&int(d), &int(r)).unwrap();
            let p = presentation(d, vec![vec4([(1, r), (0, 1), (0, 1), (0, 1)])]);
            let machine = multi_at_subgroup(&p).unwrap();
            assert_eq!(machine.epsilon, formula.epsilon, "d={d} r={r}");
            assert_eq!(machine.trace, formula.trace, "d={d} r={r}");
            assert!(!machine.is_lower_bound);
            assert!(formula.is_lower_bound);
        }
    }

    #[test]
    fn comparison_bound_for_four_points() {
        let (bound, sol) = tg_half_period_bound(&int(1)).unwrap();
        assert_eq!(bound, rat(12, 17));
        assert_eq!((sol.d, sol.l0, sol.k0), (int(32), int(17), int(3)));

        let (bound, sol) = tg_half_period_bound(&int(3)).unwrap();
        assert_eq!(bound, rat(60, 49));
        assert_eq!((sol.d, sol.l0, sol.k0), (int(96), int(49), int(5)));

        assert!(matches!(
            tg_half_period_bound(&int(2)),
            Err(SeshadriError::HypothesisViolated(_))
        ));
        assert!(matches!(
            tg_half_period_bound(&int(8)),
            Err(SeshadriError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn upper_bound_shapes() {
        let ub = upper_bound(&int(2), &int(1));
        assert_eq!(ub.squared, rat(4, 1));
        assert_eq!(ub.exact, Some(rat(2, 1)));
        let ub = upper_bound(&int(1), &int(1));
        assert_eq!(ub.squared, rat(2, 1));
        assert_eq!(ub.exact, None);
        let ub = upper_bound(&int(2), &int(16));
        assert_eq!(ub.exact, Some(rat(1, 2)));
    }

    fn arb_vector() -> impl Strategy<Value = LatticeVector> {
        proptest::array::uniform4((0i64..5, 1i64..5))
            .prop_map(|c| LatticeVector::new(c.map(|(n, d)| rat(n, d))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn prop_scaling_and_bounds(
            gens in proptest::collection::vec(arb_vector(), 0..3),
            d in 1i64..7,
        ) {
            let p = presentation(d, gens);
            let r = multi_at_subgroup(&p).unwrap();
            // positivity
            prop_assert!(r.epsilon > rat(0, 1));
            // epsilon^2 <= 2d/g, equality exactly in the square case
            let eps2 = &r.epsilon * &r.epsilon;
            match r.case {
                CaseTag::Square => prop_assert_eq!(eps2, r.upper_bound_squared.clone()),
                CaseTag::Pell => prop_assert!(eps2 < r.upper_bound_squared),
            }
            // n * epsilon is the single-point constant of the descended bundle
            let descended = bauer_simple(&r.trace.d_prime).unwrap();
            prop_assert_eq!(
                r.epsilon * Rational::from(r.trace.n.clone()),
                descended.epsilon
            );
            prop_assert_eq!(r.case, descended.case);
        }
    }
}
