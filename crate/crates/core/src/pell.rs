//! Pell equation l^2 - D*k^2 = 1 for non-square D >= 2.
//!
//! The fundamental (primitive) solution is obtained from the periodic
//! continued fraction of sqrt(D): with period length ell, the convergent
//! p_{ell-1}/q_{ell-1} solves the equation when ell is even; when ell is odd
//! one goes around the period twice and takes p_{2ell-1}/q_{2ell-1}. All
//! arithmetic is exact; fundamental solutions grow super-polynomially in D
//! (D = 61 already needs ten digits) and big integers absorb that without a
//! size cap.
//!
//! `pell_bruteforce` is a deliberately independent oracle: it scans
//! k = 1, 2, ... testing 1 + D*k^2 for squareness and shares no code path
//! with the continued-fraction solver.

use crate::arith::{integer_sqrt_exact, Integer};
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PellError {
    /// D is a perfect square; the caller must take the rational case branch.
    #[error("square discriminant {0}")]
    SquareDiscriminant(Integer),
    #[error("discriminant {0} is below 2")]
    DiscriminantTooSmall(Integer),
}

/// Periodic continued fraction of sqrt(D), `[a0; period]` with the period's
/// last term equal to 2*a0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub a0: Integer,
    pub period: Vec<Integer>,
}

impl ContinuedFraction {
    /// Partial quotients a_0, a_1, a_2, ... (the period repeating forever).
    pub fn partial_quotients(&self) -> impl Iterator<Item = Integer> + '_ {
        std::iter::once(self.a0.clone()).chain(self.period.iter().cycle().cloned())
    }

    /// Convergents (p_i, q_i) of the expansion, starting at (p_0, q_0) = (a0, 1).
    pub fn convergents(&self) -> impl Iterator<Item = (Integer, Integer)> + '_ {
        let mut p_prev = Integer::one();
        let mut q_prev = Integer::zero();
        let mut p = None::<Integer>;
        let mut q = None::<Integer>;
        self.partial_quotients().map(move |a| {
            match (p.take(), q.take()) {
                (None, None) => {
                    p = Some(a);
                    q = Some(Integer::one());
                }
                (Some(pi), Some(qi)) => {
                    let p_next = &a * &pi + &p_prev;
                    let q_next = &a * &qi + &q_prev;
                    p_prev = pi;
                    q_prev = qi;
                    p = Some(p_next);
                    q = Some(q_next);
                }
                _ => unreachable!(),
            }
            (p.clone().unwrap(), q.clone().unwrap())
        })
    }
}

/// Fundamental solution of l^2 - D*k^2 = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    /// The discriminant D (non-square, >= 2).
    pub d: Integer,
    pub l0: Integer,
    pub k0: Integer,
}

fn check_discriminant(d: &Integer) -> Result<(), PellError> {
    if *d < Integer::from(2) {
        return Err(PellError::DiscriminantTooSmall(d.clone()));
    }
    if integer_sqrt_exact(d).is_some() {
        return Err(PellError::SquareDiscriminant(d.clone()));
    }
    Ok(())
}

/// Periodic continued-fraction expansion of sqrt(D) for non-square D >= 2.
///
/// Recurrence on (m, den, a) starting from m = 0, den = 1, a = floor(sqrt(D)):
/// m' = den*a - m, den' = (D - m'^2)/den, a' = floor((a0 + m')/den'),
/// stopping when a' = 2*a0 (which closes the period).
pub fn cf_expand(d: &Integer) -> Result<ContinuedFraction, PellError> {
    check_discriminant(d)?;
    let a0 = d.sqrt();
    let two_a0 = &a0 * Integer::from(2);

    let mut m = Integer::zero();
    let mut den = Integer::one();
    let mut a = a0.clone();
    let mut period = Vec::new();
    loop {
        let m_next = &den * &a - &m;
        let den_next = (d - &m_next * &m_next) / &den;
        let a_next = (&a0 + &m_next) / &den_next;
        period.push(a_next.clone());
        if a_next == two_a0 {
            return Ok(ContinuedFraction { a0, period });
        }
        m = m_next;
        den = den_next;
        a = a_next;
    }
}

/// Fundamental solution of l^2 - D*k^2 = 1 via the continued fraction of
/// sqrt(D), doubling the period when its length is odd.
pub fn fundamental_solution(d: &Integer) -> Result<PellSolution, PellError> {
    let cf = cf_expand(d)?;
    let ell = cf.period.len();
    let target = if ell % 2 == 0 { ell - 1 } else { 2 * ell - 1 };
    let (l0, k0) = cf.convergents().nth(target).expect("infinite iterator");
    debug_assert!(&l0 * &l0 - d * &k0 * &k0 == Integer::one());
    Ok(PellSolution { d: d.clone(), l0, k0 })
}

/// Exhaustive-scan oracle: smallest k in [1, k_max] with 1 + D*k^2 a perfect
/// square, or None. Shares nothing with the continued-fraction route.
pub fn pell_bruteforce(d: &Integer, k_max: u64) -> Option<PellSolution> {
    // fast path when 1 + D*k^2 stays within u128; the integer square root
    // of the candidate grows monotonically with k, so track it incrementally
    if let Some(d_small) = to_u128(d) {
        let km = k_max as u128;
        if d_small > 0 && km > 0 && d_small <= (u128::MAX / 8 - 1) / km / km {
            let mut s = u128_isqrt(1 + d_small);
            for k in 1..=km {
                let candidate = 1 + d_small * k * k;
                while (s + 1) * (s + 1) <= candidate {
                    s += 1;
                }
                if s * s == candidate {
                    return Some(PellSolution {
                        d: d.clone(),
                        l0: Integer::from(s),
                        k0: Integer::from(k),
                    });
                }
            }
            return None;
        }
    }
    let mut k = Integer::one();
    let k_cap = Integer::from(k_max);
    while k <= k_cap {
        let candidate = Integer::one() + d * &k * &k;
        if !candidate.is_negative() {
            if let Some(l) = integer_sqrt_exact(&candidate) {
                return Some(PellSolution { d: d.clone(), l0: l, k0: k });
            }
        }
        k += 1;
    }
    None
}

fn to_u128(n: &Integer) -> Option<u128> {
    u128::try_from(n.clone()).ok()
}

fn u128_isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = 1u128 << (n.ilog2() / 2 + 1);
    loop {
        let next = (x + n / x) / 2;
        if next >= x {
            return x;
        }
        x = next;
    }
}
