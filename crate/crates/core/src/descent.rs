//! Descent of the polarization along the isogeny to the quotient surface.
//!
//! For the superlattice Lambda' of a finite subgroup G, the multiple nL
//! descends to a line bundle M on the quotient exactly when the rescaled
//! form nE is integral on Lambda'. The minimal such n is the least common
//! multiple of the denominators of the Gram matrix of E in a basis of
//! Lambda', and it always divides exp(G)^2. The type of M is read off the
//! Smith normal form of the integer Gram matrix of nE, whose elementary
//! divisors pair up as (d1, d1, d2, d2); minimality of n forces d1 = 1, so
//! M is primitive of type (1, d') with d' = n^2 d / |G| (the Pfaffian
//! identity, checked here exactly).

use crate::arith::{lcm_of_denominators, Integer, Rational};
use crate::lattice::{form_value, PolarizedSurface, SubgroupInvariants, SuperlatticeBasis};
use crate::linalg::{smith_diagonal, RMat4};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DescentError {
    #[error("{n}L does not descend: rescaled form is not integral on the superlattice")]
    NonIntegralMultiple { n: Integer },
    #[error("elementary divisors of the descended form do not pair up: {divisors:?}")]
    UnpairedElementaryDivisors { divisors: Vec<Integer> },
    #[error("Pfaffian identity failed: d1*d2*|G| = {lhs}, n^2*d = {rhs}")]
    PfaffianMismatch { lhs: Integer, rhs: Integer },
}

/// The descended bundle on the quotient surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentData {
    /// Minimal n >= 1 with nL a pullback from the quotient.
    pub n: Integer,
    /// Type (d1, d2) of the descended bundle, d1 | d2.
    pub type_of_m: (Integer, Integer),
    /// d' = n^2 d / |G|; equals d2 since minimality makes d1 = 1.
    pub d_prime: Integer,
    /// Whether the descended bundle is primitive (d1 = 1).
    pub primitive: bool,
}

/// Gram matrix B E B^t of the form in the given superlattice basis.
pub fn gram_matrix(s: &PolarizedSurface, b: &SuperlatticeBasis) -> RMat4 {
    let rows = b.row_vectors();
    let mut g: RMat4 = Default::default();
    for i in 0..4 {
        for j in 0..4 {
            g[i][j] = form_value(s, &rows[i], &rows[j]);
        }
    }
    g
}

/// Minimal n such that nE is integral on the superlattice: the lcm of the
/// denominators of the Gram matrix entries.
pub fn minimal_descent_multiple(s: &PolarizedSurface, b: &SuperlatticeBasis) -> Integer {
    let gram = gram_matrix(s, b);
    let entries: Vec<Rational> = gram.iter().flat_map(|row| row.iter().cloned()).collect();
    lcm_of_denominators(&entries)
}

/// Independent computation of the minimal descent multiple by scanning
/// n = 1, 2, ..., exp(G)^2 for integrality of n * Gram. The bound is a
/// theorem, so the scan cannot fall through.
pub fn minimal_n_bruteforce(
    s: &PolarizedSurface,
    b: &SuperlatticeBasis,
    exponent: &Integer,
) -> Integer {
    let gram = gram_matrix(s, b);
    let bound = exponent * exponent;
    let mut n = Integer::one();
    while n <= bound {
        let n_rat = Rational::from(n.clone());
        if gram
            .iter()
            .flatten()
            .all(|e| (e * &n_rat).is_integer())
        {
            return n;
        }
        n += 1;
    }
    unreachable!("descent multiple must divide exp(G)^2");
}

/// Type of the bundle to which nL descends, from the elementary divisors
/// of the integer Gram matrix of nE on the superlattice. Errors if nE is
/// not integral there, or if the divisors fail to pair as (d1, d1, d2, d2).
pub fn descended_type(
    s: &PolarizedSurface,
    b: &SuperlatticeBasis,
    n: &Integer,
) -> Result<(Integer, Integer), DescentError> {
    let gram = gram_matrix(s, b);
    let n_rat = Rational::from(n.clone());
    let mut int_gram: Vec<Vec<Integer>> = Vec::with_capacity(4);
    for row in &gram {
        let mut out = Vec::with_capacity(4);
        for e in row {
            let scaled = e * &n_rat;
            if !scaled.is_integer() {
                return Err(DescentError::NonIntegralMultiple { n: n.clone() });
            }
            out.push(scaled.to_integer());
        }
        int_gram.push(out);
    }
    let divisors = smith_diagonal(int_gram);
    if divisors.len() != 4 || divisors[0] != divisors[1] || divisors[2] != divisors[3] {
        return Err(DescentError::UnpairedElementaryDivisors { divisors });
    }
    if divisors[0].is_zero() {
        return Err(DescentError::UnpairedElementaryDivisors { divisors });
    }
    Ok((divisors[0].clone(), divisors[2].clone()))
}

/// n divides exp(G)^2.
pub fn exp_squared_bound_check(n: &Integer, exponent: &Integer) -> bool {
    ((exponent * exponent) % n).is_zero()
}

/// Full descent computation for a subgroup with the given superlattice and
/// invariants: minimal n, type of M, and the Pfaffian cross-check
/// d1 * d2 * |G| = n^2 * d.
pub fn descent_data(
    s: &PolarizedSurface,
    b: &SuperlatticeBasis,
    invariants: &SubgroupInvariants,
) -> Result<DescentData, DescentError> {
    let n = minimal_descent_multiple(s, b);
    let (d1, d2) = descended_type(s, b, &n)?;
    let lhs = &d1 * &d2 * &invariants.order;
    let rhs = &n * &n * s.d();
    if lhs != rhs {
        return Err(DescentError::PfaffianMismatch { lhs, rhs });
    }
    debug_assert!(exp_squared_bound_check(&n, &invariants.exponent));
    let primitive = d1.is_one();
    Ok(DescentData {
        n,
        d_prime: d2.clone(),
        type_of_m: (d1, d2),
        primitive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::lattice::{
        quotient_invariants, superlattice, LatticeVector, SubgroupPresentation,
    };
    use proptest::prelude::*;

    fn vec4(c: [(i64, i64); 4]) -> LatticeVector {
        LatticeVector::new(c.map(|(n, d)| rat(n, d)))
    }

    fn surface(d: i64) -> PolarizedSurface {
        PolarizedSurface::new(int(d)).unwrap()
    }

    fn data_for(d: i64, gens: Vec<LatticeVector>) -> DescentData {
        let p = SubgroupPresentation::new(surface(d), gens);
        let b = superlattice(&p);
        let inv = quotient_invariants(&b);
        descent_data(p.surface(), &b, &inv).unwrap()
    }

    #[test]
    fn trivial_subgroup_keeps_the_type() {
        for d in [1i64, 5] {
            let data = data_for(d, vec![]);
            assert_eq!(data.n, int(1));
            assert_eq!(data.type_of_m, (int(1), int(d)));
            assert_eq!(data.d_prime, int(d));
            assert!(data.primitive);
        }
    }

    #[test]
    fn kernel_quotient_descends_to_principal() {
        // cyclic of order d generated by the class of lambda2/d
        for d in [2i64, 5] {
            let data = data_for(d, vec![vec4([(0, 1), (1, d), (0, 1), (0, 1)])]);
            assert_eq!(data.n, int(1));
            assert_eq!(data.type_of_m, (int(1), int(1)));
            assert_eq!(data.d_prime, int(1));
        }
    }

    #[test]
    fn lambda1_mu1_over_k_needs_k_squared() {
        for (k, d) in [(2i64, 1i64), (2, 3), (3, 1)] {
            let data = data_for(
                d,
                vec![
                    vec4([(1, k), (0, 1), (0, 1), (0, 1)]),
                    vec4([(0, 1), (0, 1), (1, k), (0, 1)]),
                ],
            );
            assert_eq!(data.n, int(k * k));
            assert_eq!(data.d_prime, int(k * k * d));
            assert!(data.primitive);
        }
    }

    #[test]
    fn full_torsion_preserves_d() {
        // all 2-torsion on a (1,3) surface: n = 4, M again of type (1,3)
        let gens = (0..4)
            .map(|i| {
                let mut c = [(0i64, 1i64); 4];
                c[i] = (1, 2);
                vec4(c)
            })
            .collect();
        let data = data_for(3, gens);
        assert_eq!(data.n, int(4));
        assert_eq!(data.type_of_m, (int(1), int(3)));
        assert_eq!(data.d_prime, int(3));
    }

    #[test]
    fn half_period_outside_kernel() {
        let data = data_for(3, vec![vec4([(1, 2), (0, 1), (0, 1), (0, 1)])]);
        assert_eq!(data.n, int(2));
        assert_eq!(data.d_prime, int(6));
    }

    #[test]
    fn half_period_inside_kernel() {
        let data = data_for(2, vec![vec4([(0, 1), (1, 2), (0, 1), (0, 1)])]);
        assert_eq!(data.n, int(1));
        assert_eq!(data.d_prime, int(1));
    }

    #[test]
    fn gram_matrix_of_standard_basis() {
        let s = surface(3);
        let g = gram_matrix(&s, &SuperlatticeBasis::identity());
        let e = [
            [0i64, 0, 1, 0],
            [0, 0, 0, 3],
            [-1, 0, 0, 0],
            [0, -3, 0, 0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g[i][j], rat(e[i][j], 1));
            }
        }
    }

    #[test]
    fn doubling_n_loses_primitivity() {
        let s = surface(1);
        let b = SuperlatticeBasis::identity();
        let (d1, d2) = descended_type(&s, &b, &int(2)).unwrap();
        assert_eq!((d1, d2), (int(2), int(2)));
    }

    #[test]
    fn insufficient_multiple_is_rejected() {
        // half-period outside K(L) needs n = 2; n = 1 must fail
        let p = SubgroupPresentation::new(
            surface(3),
            vec![vec4([(1, 2), (0, 1), (0, 1), (0, 1)])],
        );
        let b = superlattice(&p);
        assert_eq!(
            descended_type(p.surface(), &b, &int(1)),
            Err(DescentError::NonIntegralMultiple { n: int(1) })
        );
    }

    #[test]
    fn exponent_squared_bound() {
        assert!(exp_squared_bound_check(&int(4), &int(2)));
        assert!(exp_squared_bound_check(&int(2), &int(2)));
        assert!(!exp_squared_bound_check(&int(3), &int(2)));
    }

    fn arb_vector() -> impl Strategy<Value = LatticeVector> {
        proptest::array::uniform4((0i64..6, 1i64..6))
            .prop_map(|c| LatticeVector::new(c.map(|(n, d)| rat(n, d))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn prop_descent_is_primitive_and_consistent(
            gens in proptest::collection::vec(arb_vector(), 0..3),
            d in 1i64..8,
        ) {
            let p = SubgroupPresentation::new(surface(d), gens);
            let b = superlattice(&p);
            let inv = quotient_invariants(&b);
            let data = descent_data(p.surface(), &b, &inv).unwrap();
            // minimality forces a primitive descended bundle
            prop_assert!(data.primitive);
            // the two computations of n agree
            prop_assert_eq!(
                minimal_n_bruteforce(p.surface(), &b, &inv.exponent),
                data.n.clone()
            );
            // n divides exp(G)^2
            prop_assert!(exp_squared_bound_check(&data.n, &inv.exponent));
            // Pfaffian: d' * |G| = n^2 * d
            prop_assert_eq!(
                &data.d_prime * &inv.order,
                &data.n * &data.n * p.surface().d()
            );
        }
    }
}
