//! The period lattice of a polarized abelian surface and its rational
//! superlattices.
//!
//! A type-(1,d) polarization fixes a symplectic basis (lambda1, lambda2,
//! mu1, mu2) of the rank-4 period lattice on which the alternating form E
//! takes the matrix [[0, D], [-D, 0]] with D = diag(1, d). Points of the
//! surface are rational 4-vectors modulo the lattice; a finite subgroup G
//! pulls back to the superlattice generated by the standard lattice and
//! lifts of the generators. The quotient superlattice/lattice is G itself,
//! and its invariant factors come out of the Smith normal form of the
//! change-of-basis matrix.
//!
//! The complex structure of the ambient vector space is never represented:
//! every quantity needed downstream factors through the lattice and the
//! form. The Picard-number-one hypothesis of the closed-form constants is
//! an analytic input that cannot be checked here; it is carried as a
//! documented assumption, never verified.

use crate::arith::{lcm_of_denominators, Integer, Rational};
use crate::linalg::{det4, hermite_normal_form, invert4, smith_diagonal, RMat4};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("polarization degree must be at least 1, got {0}")]
    InvalidDegree(Integer),
    #[error("subgroup too large for enumeration (cap {cap})")]
    SubgroupTooLarge { cap: usize },
}

/// A polarized abelian surface of type (1, d), identified with its degree
/// d >= 1; the alternating form on the period lattice is determined by d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarizedSurface {
    d: Integer,
}

impl PolarizedSurface {
    pub fn new(d: Integer) -> Result<Self, LatticeError> {
        if d < Integer::one() {
            return Err(LatticeError::InvalidDegree(d));
        }
        Ok(Self { d })
    }

    pub fn d(&self) -> &Integer {
        &self.d
    }
}

/// A vector in lambda/mu coordinates; encodes both lattice points and lifts
/// of surface points (which are only defined modulo the lattice).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticeVector {
    coords: [Rational; 4],
}

impl LatticeVector {
    pub fn new(coords: [Rational; 4]) -> Self {
        Self { coords }
    }

    pub fn zero() -> Self {
        Self {
            coords: Default::default(),
        }
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The representative with every coordinate in [0, 1).
    pub fn canonicalized(&self) -> Self {
        Self {
            coords: self.coords.clone().map(|c| &c - c.floor()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coords: [Rational; 4] = Default::default();
        for i in 0..4 {
            coords[i] = &self.coords[i] + &other.coords[i];
        }
        Self { coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut coords: [Rational; 4] = Default::default();
        for i in 0..4 {
            coords[i] = &self.coords[i] - &other.coords[i];
        }
        Self { coords }
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.coords[0], self.coords[1], self.coords[2], self.coords[3]
        )
    }
}

/// Generators of a finite subgroup of the surface, as canonicalized
/// rational 4-vectors modulo the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupPresentation {
    surface: PolarizedSurface,
    generators: Vec<LatticeVector>,
}

impl SubgroupPresentation {
    pub fn new(surface: PolarizedSurface, generators: Vec<LatticeVector>) -> Self {
        let generators = generators.iter().map(LatticeVector::canonicalized).collect();
        Self {
            surface,
            generators,
        }
    }

    pub fn surface(&self) -> &PolarizedSurface {
        &self.surface
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }
}

/// Canonical basis of the superlattice obtained by adjoining subgroup
/// generators to the standard lattice. Rows are basis vectors in lambda/mu
/// coordinates, in upper-triangular Hermite form after clearing
/// denominators, so equal lattices have equal bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperlatticeBasis {
    rows: RMat4,
}

impl SuperlatticeBasis {
    /// Basis of the lattice generated by the standard lattice together with
    /// the given vectors: scale by the common denominator N, stack the
    /// scaled identity with the scaled vectors, row-reduce to Hermite form
    /// over the integers, divide by N.
    pub fn from_vectors(vectors: &[LatticeVector]) -> Self {
        let all_coords: Vec<Rational> = vectors
            .iter()
            .flat_map(|v| v.coords().iter().cloned())
            .collect();
        let n = lcm_of_denominators(&all_coords);
        let n_rat = Rational::from(n.clone());

        let mut rows: Vec<[Integer; 4]> = Vec::with_capacity(4 + vectors.len());
        for i in 0..4 {
            let mut row: [Integer; 4] = Default::default();
            row[i] = n.clone();
            rows.push(row);
        }
        for v in vectors {
            let mut row: [Integer; 4] = Default::default();
            for (c, x) in v.coords().iter().enumerate() {
                let scaled = x * &n_rat;
                debug_assert!(scaled.is_integer());
                row[c] = scaled.to_integer();
            }
            rows.push(row);
        }
        let h = hermite_normal_form(rows);

        let mut out: RMat4 = Default::default();
        for r in 0..4 {
            for c in 0..4 {
                out[r][c] = Rational::new(h[r][c].clone(), n.clone());
            }
        }
        Self { rows: out }
    }

    pub fn identity() -> Self {
        Self::from_vectors(&[])
    }

    pub fn rows(&self) -> &RMat4 {
        &self.rows
    }

    pub fn row_vectors(&self) -> [LatticeVector; 4] {
        [0, 1, 2, 3].map(|r| LatticeVector::new(self.rows[r].clone()))
    }

    /// Signed determinant of the basis matrix; its magnitude is 1/|G|.
    pub fn determinant(&self) -> Rational {
        det4(&self.rows)
    }
}

/// Structure of the quotient superlattice/lattice as a finite abelian
/// group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupInvariants {
    pub order: Integer,
    pub exponent: Integer,
    /// Nontrivial invariant factors, each dividing the next.
    pub invariant_factors: Vec<Integer>,
}

/// E(v, w) for the form [[0, diag(1,d)], [-diag(1,d), 0]]:
/// (v1*w3 - v3*w1) + d*(v2*w4 - v4*w2).
pub fn form_value(s: &PolarizedSurface, v: &LatticeVector, w: &LatticeVector) -> Rational {
    let a = v.coords();
    let b = w.coords();
    let d = Rational::from(s.d().clone());
    (&a[0] * &b[2] - &a[2] * &b[0]) + d * (&a[1] * &b[3] - &a[3] * &b[1])
}

/// Canonical basis of the preimage superlattice of the subgroup.
pub fn superlattice(p: &SubgroupPresentation) -> SuperlatticeBasis {
    SuperlatticeBasis::from_vectors(p.generators())
}

/// Invariant factors of the quotient superlattice/lattice, from the Smith
/// normal form of the integer matrix expressing the standard basis in the
/// superlattice basis.
pub fn quotient_invariants(b: &SuperlatticeBasis) -> SubgroupInvariants {
    let inv = invert4(b.rows()).expect("superlattice basis is nonsingular");
    let mut c: Vec<Vec<Integer>> = Vec::with_capacity(4);
    for row in &inv {
        c.push(
            row.iter()
                .map(|x| {
                    debug_assert!(x.is_integer(), "standard lattice not contained in basis span");
                    x.to_integer()
                })
                .collect(),
        );
    }
    let diag = smith_diagonal(c);
    let order = diag.iter().product::<Integer>().abs();
    let invariant_factors: Vec<Integer> = diag
        .into_iter()
        .filter(|x| !x.is_one())
        .collect();
    let exponent = invariant_factors
        .last()
        .cloned()
        .unwrap_or_else(Integer::one);
    SubgroupInvariants {
        order,
        exponent,
        invariant_factors,
    }
}

/// Membership in K(L), the kernel of the polarization morphism: true iff
/// E(v, b) is an integer for all four basis vectors. For v = (a, b, c, e)
/// that is a, c integral and d*b, d*e integral.
pub fn k_of_l_contains(s: &PolarizedSurface, v: &LatticeVector) -> bool {
    let c = v.coords();
    let d = Rational::from(s.d().clone());
    c[0].is_integer()
        && c[2].is_integer()
        && (&c[1] * &d).is_integer()
        && (&c[3] * &d).is_integer()
}

/// All elements of the subgroup as canonicalized coset representatives, by
/// closure under addition modulo the lattice. Errors when the subgroup
/// exceeds `cap` elements.
pub fn enumerate_subgroup(
    p: &SubgroupPresentation,
    cap: usize,
) -> Result<Vec<LatticeVector>, LatticeError> {
    let mut seen = BTreeSet::new();
    let mut queue = vec![LatticeVector::zero()];
    seen.insert(LatticeVector::zero());
    while let Some(e) = queue.pop() {
        for g in p.generators() {
            let next = e.add(g).canonicalized();
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(LatticeError::SubgroupTooLarge { cap });
                }
                queue.push(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}
