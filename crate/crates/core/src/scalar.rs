//! Exact rational scalars and the square-root comparisons the geometric
//! predicates are built on.
//!
//! Every coordinate in this crate is a `Scalar` (an arbitrary-precision
//! rational). Disk radii are stored squared, so predicates that mix disks
//! with distances must compare expressions containing one or two square
//! roots. Those comparisons are done exactly here by repeated squaring;
//! no floating point is involved in any decision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

pub type Scalar = BigRational;

/// Shorthand for an integer scalar.
pub fn s_int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

/// Shorthand for the fraction `p/q`.
pub fn s_frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parse a scalar from a decimal integer or a `"p/q"` string.
pub fn parse_scalar(text: &str) -> Result<Scalar, ScalarParseError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ScalarParseError::Empty);
    }
    t.parse::<BigRational>()
        .map_err(|_| ScalarParseError::Malformed(t.to_string()))
}

/// Render a scalar as `"p"` or `"p/q"`, matching the wire format.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalarParseError {
    Empty,
    Malformed(String),
}

impl std::fmt::Display for ScalarParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarParseError::Empty => write!(f, "empty scalar"),
            ScalarParseError::Malformed(t) => write!(f, "malformed scalar {t:?}"),
        }
    }
}

impl std::error::Error for ScalarParseError {}

/// Floor of the integer square root of `x` (requires `x >= 0`).
fn bigint_isqrt(x: &BigInt) -> BigInt {
    debug_assert!(!x.is_negative());
    x.sqrt()
}

/// Rational bounds `(lo, hi)` with `lo <= sqrt(x) <= hi` and
/// `hi - lo <= 2^-precision_bits * max(1, sqrt(x))`.
///
/// Requires `x >= 0`. Both bounds are nonnegative and `lo^2 <= x <= hi^2`.
pub fn sqrt_bounds(x: &Scalar, precision_bits: u32) -> (Scalar, Scalar) {
    assert!(!x.is_negative(), "sqrt of negative scalar");
    if x.is_zero() {
        return (Scalar::zero(), Scalar::zero());
    }
    // sqrt(p/q) = sqrt(p*q)/q. Scale by 4^k so the integer sqrt carries
    // k extra bits.
    let k = precision_bits;
    let p = x.numer();
    let q = x.denom();
    let scaled = p * q << (2 * k);
    let root = bigint_isqrt(&scaled);
    let denom = q << k;
    let lo = BigRational::new(root.clone(), denom.clone());
    let hi = BigRational::new(root + 1, denom);
    (lo, hi)
}

/// Lower bound on `sqrt(x)`; see [`sqrt_bounds`].
pub fn sqrt_lower(x: &Scalar, precision_bits: u32) -> Scalar {
    sqrt_bounds(x, precision_bits).0
}

/// Upper bound on `sqrt(x)`; see [`sqrt_bounds`].
pub fn sqrt_upper(x: &Scalar, precision_bits: u32) -> Scalar {
    sqrt_bounds(x, precision_bits).1
}

/// If `x` is the square of a rational, returns that (nonnegative) root.
pub fn exact_sqrt(x: &Scalar) -> Option<Scalar> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some(Scalar::zero());
    }
    let pn = bigint_isqrt(x.numer());
    let pd = bigint_isqrt(x.denom());
    if &pn * &pn == *x.numer() && &pd * &pd == *x.denom() {
        Some(BigRational::new(pn, pd))
    } else {
        None
    }
}

/// Compare `sqrt(a)` with the rational `b`, exactly. Requires `a >= 0`.
pub fn cmp_sqrt_rat(a: &Scalar, b: &Scalar) -> Ordering {
    debug_assert!(!a.is_negative());
    if b.is_negative() {
        return Ordering::Greater;
    }
    (a).cmp(&(b * b))
}

/// Compare `sqrt(a) + sqrt(b)` with the rational `c`, exactly.
/// Requires `a, b >= 0`.
pub fn cmp_sqrt_sum_rat(a: &Scalar, b: &Scalar, c: &Scalar) -> Ordering {
    debug_assert!(!a.is_negative() && !b.is_negative());
    if c.is_negative() {
        return Ordering::Greater;
    }
    // sqrt(a)+sqrt(b) <=> c  iff  a+b + 2 sqrt(ab) <=> c^2
    // iff 2 sqrt(ab) <=> t where t = c^2 - a - b.
    let t = c * c - a - b;
    if t.is_negative() {
        return Ordering::Greater;
    }
    (a * b * s_int(4)).cmp(&(&t * &t))
}

/// Compare `sqrt(a)` with `sqrt(b) + c` where `c` is rational.
/// Requires `a, b >= 0`.
pub fn cmp_sqrt_vs_sqrt_plus_rat(a: &Scalar, b: &Scalar, c: &Scalar) -> Ordering {
    debug_assert!(!a.is_negative() && !b.is_negative());
    if c.is_negative() {
        // sqrt(a) <=> sqrt(b) + c  iff  sqrt(a) + |c| <=> sqrt(b).
        return cmp_sqrt_vs_sqrt_plus_rat(b, a, &-c.clone()).reverse();
    }
    // sqrt(a) <=> sqrt(b) + c  iff  a <=> b + c^2 + 2 c sqrt(b)
    // iff a - b - c^2 <=> 2 c sqrt(b).
    let t = a - b - c * c;
    if t.is_negative() {
        return Ordering::Less;
    }
    (&t * &t).cmp(&(b * c * c * s_int(4)))
}

/// Is `x` a perfect square of a rational?
pub fn is_perfect_square(x: &Scalar) -> bool {
    exact_sqrt(x).is_some()
}

/// Largest power of two that is at most `x` (requires `x > 0`). Rounding
/// chosen tolerances down to powers of two keeps the denominators of all
/// downstream arithmetic small.
pub fn floor_pow2(x: &Scalar) -> Scalar {
    assert!(x.is_positive());
    let one = Scalar::one();
    let two = s_int(2);
    let mut p = one.clone();
    if *x >= one {
        loop {
            let next = &p * &two;
            if next > *x {
                return p;
            }
            p = next;
        }
    }
    loop {
        p = &p / &two;
        if p <= *x {
            return p;
        }
    }
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// via the Stern-Brocot / continued-fraction walk.
pub fn rational_round(x: f64, max_den: u64) -> Scalar {
    assert!(x.is_finite());
    let neg = x < 0.0;
    let x = x.abs();
    let whole = x.floor();
    let frac = x - whole;
    // Continued-fraction convergents of the fractional part.
    let (mut p0, mut q0, mut p1, mut q1) = (1u64, 0u64, 0u64, 1u64);
    let mut r = frac;
    for _ in 0..64 {
        if r <= 0.0 {
            break;
        }
        let inv = 1.0 / r;
        let a = inv.floor();
        if a >= u64::MAX as f64 {
            break;
        }
        let a_u = a as u64;
        let p2 = match a_u.checked_mul(p1).and_then(|v| v.checked_add(p0)) {
            Some(v) => v,
            None => break,
        };
        let q2 = match a_u.checked_mul(q1).and_then(|v| v.checked_add(q0)) {
            Some(v) => v,
            None => break,
        };
        if q2 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        r = inv - a;
    }
    let approx = if q1 == 0 {
        Scalar::zero()
    } else {
        BigRational::new(BigInt::from(p1), BigInt::from(q1))
    };
    let mut out = BigRational::from_integer(BigInt::from(whole as i64)) + approx;
    if neg {
        out = -out;
    }
    out
}

/// Exact conversion of an f64 (the mantissa/exponent decomposition is
/// lossless, so the result equals the float bit-for-bit).
pub fn scalar_from_f64_exact(x: f64) -> Scalar {
    assert!(x.is_finite());
    BigRational::from_float(x).expect("finite float")
}

/// Nearest-ish f64 for diagnostics and rendering heuristics only.
pub fn scalar_to_f64(x: &Scalar) -> f64 {
    let p = x.numer();
    let q = x.denom();
    // Scale down in tandem to stay within f64 range.
    let pb = p.bits() as i64;
    let qb = q.bits() as i64;
    let shift = (pb.max(qb) - 500).max(0) as u64;
    let pf = (p >> shift).to_string().parse::<f64>().unwrap_or(f64::NAN);
    let qf = (q >> shift).to_string().parse::<f64>().unwrap_or(f64::NAN);
    pf / qf
}
