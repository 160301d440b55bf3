//! Exact integer and rational arithmetic.
//!
//! Everything downstream (lattices, Pell solutions, the constants themselves)
//! is computed over these two scalar types. There is no floating point
//! anywhere in the computation path; the only approximate output is the
//! decimal rendering, which is display-only.
//!
//! Rationals are kept in lowest terms with a positive denominator at all
//! times, so denominator extraction (the basis of the minimal descent
//! multiple) is well defined. The wire format is `"p/q"`, or `"p"` when the
//! denominator is one, with an optional leading minus.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision signed integer.
pub type Integer = BigInt;

/// Arbitrary-precision rational, always reduced, denominator positive.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("negative value {0} has no square root")]
    NegativeSquareRoot(Rational),
    #[error("invalid rational {0:?}")]
    InvalidRational(String),
}

/// Shorthand for small integer constants.
pub fn int(v: i64) -> Integer {
    Integer::from(v)
}

/// Shorthand for small rational constants.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}

/// The unique lowest-terms representative of `num/den` with positive
/// denominator.
pub fn reduce(num: Integer, den: Integer) -> Result<Rational, ArithError> {
    if den.is_zero() {
        return Err(ArithError::ZeroDenominator);
    }
    Ok(Rational::new(num, den))
}

/// Exact square root of a non-negative integer, when it is a perfect square.
///
/// Uses integer Newton iteration followed by a squaring check; Pell
/// discriminants and fundamental solutions overflow doubles quickly, so no
/// floating point is involved.
pub fn integer_sqrt_exact(n: &Integer) -> Option<Integer> {
    if n.is_negative() {
        return None;
    }
    let root = n.sqrt();
    if &root * &root == *n {
        Some(root)
    } else {
        None
    }
}

/// Exact square root of a non-negative rational, when one exists in the
/// rationals. A reduced fraction p/q is a square iff p and q are both
/// perfect squares.
pub fn is_perfect_square(v: &Rational) -> Result<Option<Rational>, ArithError> {
    if v.is_negative() {
        return Err(ArithError::NegativeSquareRoot(v.clone()));
    }
    let num_root = match integer_sqrt_exact(v.numer()) {
        Some(r) => r,
        None => return Ok(None),
    };
    let den_root = match integer_sqrt_exact(v.denom()) {
        Some(r) => r,
        None => return Ok(None),
    };
    Ok(Some(Rational::new(num_root, den_root)))
}

/// Least positive integer `n` such that `n * v` is an integer for every `v`
/// in the list; 1 for the empty list.
pub fn lcm_of_denominators(values: &[Rational]) -> Integer {
    values
        .iter()
        .fold(Integer::one(), |acc, v| acc.lcm(v.denom()))
}

/// Parses `"p/q"` or `"p"`, optional leading sign, into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let t = s.trim();
    match t.parse::<Rational>() {
        Ok(r) => Ok(r),
        Err(_) => {
            if t.split('/').nth(1).is_some_and(|d| {
                d.parse::<Integer>().map(|d| d.is_zero()).unwrap_or(false)
            }) {
                Err(ArithError::ZeroDenominator)
            } else {
                Err(ArithError::InvalidRational(s.to_string()))
            }
        }
    }
}

/// Decimal rendering of a rational to `sig` significant digits, display
/// only. Rounds half away from zero; never feeds back into any computation.
pub fn decimal_string(r: &Rational, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    if r.is_negative() {
        return format!("-{}", decimal_string(&-r.clone(), sig));
    }
    let p = r.numer().clone();
    let q = r.denom().clone();
    // p/q >= 10^e, with the power moved to whichever side keeps it positive
    let ge_pow10 = |e: i64| {
        if e >= 0 {
            p >= &q * pow10(e)
        } else {
            &p * pow10(-e) >= q
        }
    };

    // e = number of digits before the decimal point: 10^(e-1) <= p/q < 10^e.
    let mut e: i64 = p.to_string().len() as i64 - q.to_string().len() as i64;
    while ge_pow10(e) {
        e += 1;
    }
    while !ge_pow10(e - 1) {
        e -= 1;
    }

    // digits = round(p/q * 10^(sig - e)), a sig-digit integer.
    let shift = sig as i64 - e;
    let (scaled_num, scaled_den) = if shift >= 0 {
        (&p * pow10(shift), q.clone())
    } else {
        (p.clone(), &q * pow10(-shift))
    };
    let mut digits = (&scaled_num * int(2) + &scaled_den) / (&scaled_den * int(2));
    if digits == pow10(sig as i64) {
        // rounding carried into an extra digit: 999.. -> 1000..
        digits = pow10(sig as i64 - 1);
        e += 1;
    }

    let ds = digits.to_string();
    debug_assert_eq!(ds.len(), sig);
    if e >= sig as i64 {
        format!("{}{}", ds, "0".repeat((e - sig as i64) as usize))
    } else if e >= 1 {
        format!("{}.{}", &ds[..e as usize], &ds[e as usize..])
    } else {
        format!("0.{}{}", "0".repeat((-e) as usize), ds)
    }
}

fn pow10(e: i64) -> Integer {
    debug_assert!(e >= 0);
    int(10).pow(e as u32)
}
