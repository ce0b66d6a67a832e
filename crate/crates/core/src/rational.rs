//! Exact scalars.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{Number, Value};

/// Arbitrary-precision reduced fraction with positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// A rational or `+infinity`, ordered with infinity on top.
///
/// Used for weights outside the cone of a polytope and for valuations of zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(Rational),
    Infinite,
}

impl Extended {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(r) => Some(r),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Extended::Finite(r) => rational_json(r),
            Extended::Infinite => Value::String("inf".into()),
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(r) => write!(f, "{r}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

impl From<Rational> for Extended {
    fn from(r: Rational) -> Self {
        Extended::Finite(r)
    }
}

pub fn bigint_json(n: &BigInt) -> Value {
    // arbitrary_precision keeps integers of any size exact.
    Value::Number(n.to_string().parse::<Number>().expect("integer literal"))
}

/// `[numerator, denominator]`, never a float.
pub fn rational_json(r: &Rational) -> Value {
    Value::Array(vec![bigint_json(r.numer()), bigint_json(r.denom())])
}

pub fn rational_from_json(v: &Value) -> Option<Rational> {
    let arr = v.as_array()?;
    if arr.len() != 2 {
        return None;
    }
    let parse = |x: &Value| -> Option<BigInt> {
        match x {
            Value::Number(n) => n.to_string().parse().ok(),
            Value::String(s) => s.parse().ok(),
            _ => None,
        }
    };
    let num = parse(&arr[0])?;
    let den = parse(&arr[1])?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// p-adic valuation of a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> u64 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Least common multiple of the denominators of a list of rationals.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of `n`, without multiplicity, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_orders_infinity_last() {
        let a = Extended::Finite(frac(1, 2));
        assert!(a < Extended::Infinite);
        assert!(Extended::Finite(int(3)) > a);
    }

    #[test]
    fn json_pairs_roundtrip() {
        let r = frac(-7, 12);
        assert_eq!(rational_from_json(&rational_json(&r)), Some(r));
        let huge = Rational::from_integer(BigInt::from(10).pow(40));
        assert_eq!(rational_from_json(&rational_json(&huge)), Some(huge));
    }

    #[test]
    fn valuations_and_primes() {
        assert_eq!(vp_int(&BigInt::from(-72), 2), 3);
        assert_eq!(vp_int(&BigInt::from(5), 3), 0);
        assert!(is_prime(7) && !is_prime(9) && !is_prime(1));
        assert_eq!(prime_factors(6560), vec![2, 5, 41]);
        assert_eq!(binomial(5, 2), BigInt::from(10));
    }
}
