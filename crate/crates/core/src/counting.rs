//! Exact big-integer evaluation of the counting formulas.
//!
//! Everything here is integer arithmetic on `BigUint`; no floating point.
//! The closed forms involve divisions that are exact for in-domain
//! parameters, and `exact_div` aborts if a remainder ever shows up, so the
//! divisibility facts behind the formulas are enforced at runtime rather
//! than assumed.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::domain;
use crate::Error;

/// Divide exactly, aborting on a nonzero remainder.
pub fn exact_div(numerator: BigUint, divisor: u64) -> BigUint {
    let (q, r) = numerator.div_rem(&BigUint::from(divisor));
    assert!(
        r.is_zero(),
        "non-exact division: remainder {} dividing by {}",
        r,
        divisor
    );
    q
}

/// C(m, k). Returns 0 when k < 0 or k > m.
pub fn binomial(m: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > m {
        return BigUint::zero();
    }
    let k = (k as u64).min(m - k as u64);
    let mut acc = BigUint::one();
    for t in 1..=k {
        // each partial product is C(m - k + t, t), so the division is exact
        acc = exact_div(acc * (m - k + t), t);
    }
    acc
}

fn grid(s: u64, n: u64) -> Result<u64, Error> {
    s.checked_mul(n)
        .ok_or_else(|| Error::ParamDomain("s * n overflows".into()))
}

/// Number of pointed dissections of the (sn+2)-gon by i diagonals:
/// C(sn+i+1, i) * C(n-1, i).
pub fn p_count(s: u64, n: u64, i: u64) -> Result<BigUint, Error> {
    domain(s >= 1 && n >= 1, "require s >= 1 and n >= 1")?;
    domain(i <= n - 1, "require i <= n - 1 for dissection counts")?;
    let sn = grid(s, n)?;
    Ok(binomial(sn + i + 1, i as i64) * binomial(n - 1, i as i64))
}

/// Number of dissections of the (sn+2)-gon by i diagonals:
/// p_count / (i + 1), exactly.
pub fn q_count(s: u64, n: u64, i: u64) -> Result<BigUint, Error> {
    Ok(exact_div(p_count(s, n, i)?, i + 1))
}

/// Number of collections of n non-crossing s-spiders on sn boundary
/// vertices: C(sn, n) / ((s-1)n + 1), exactly.
pub fn fuss_count(s: u64, n: u64) -> Result<BigUint, Error> {
    domain(s >= 1 && n >= 1, "require s >= 1 and n >= 1")?;
    let sn = grid(s, n)?;
    Ok(exact_div(binomial(sn, n as i64), (s - 1) * n + 1))
}

/// Number of completable i-element partial spider collections with an
/// annular hole marking: C(sn, i) * C(n, i).
pub fn a_count(s: u64, n: u64, i: u64) -> Result<BigUint, Error> {
    domain(s >= 1 && n >= 1, "require s >= 1 and n >= 1")?;
    domain(i <= n, "require i <= n for partial-collection counts")?;
    let sn = grid(s, n)?;
    Ok(binomial(sn, i as i64) * binomial(n, i as i64))
}

/// Number of completable i-element partial spider collections in the disc:
/// a_count / (i(s-1) + 1), exactly.
pub fn d_count(s: u64, n: u64, i: u64) -> Result<BigUint, Error> {
    Ok(exact_div(a_count(s, n, i)?, i * (s - 1) + 1))
}
