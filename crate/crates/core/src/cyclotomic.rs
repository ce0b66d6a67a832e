//! The cyclotomic field `Q(ζ_p)` in the basis `1, ζ, …, ζ^{p-2}`, with exact p-adic valuations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, rational_from_json, rational_json, vp_int, Extended, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycNum {
    p: u64,
    coeffs: Vec<Rational>,
}

impl CycNum {
    pub fn zero(p: u64) -> Self {
        assert!(p >= 2, "p must be at least 2");
        CycNum { p, coeffs: vec![Rational::zero(); (p - 1) as usize] }
    }

    pub fn one(p: u64) -> Self {
        Self::from_rational(p, Rational::one())
    }

    pub fn from_rational(p: u64, r: Rational) -> Self {
        let mut x = Self::zero(p);
        x.coeffs[0] = r;
        x
    }

    pub fn from_coeffs(p: u64, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() as u64 != p - 1 {
            return Err(Error::InvalidInput(format!(
                "Q(zeta_{p}) needs {} coefficients, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CycNum { p, coeffs })
    }

    /// `ζ^i` for any integer `i`.
    pub fn zeta_pow(p: u64, i: i64) -> Self {
        let mut x = Self::zero(p);
        x.add_zeta(i.rem_euclid(p as i64) as usize, &Rational::one());
        x
    }

    /// `Σ_c N_c ζ^c` from counts `N_0, …, N_{p-1}`.
    pub fn from_counts(p: u64, counts: &[u64]) -> Result<Self> {
        if counts.len() as u64 != p {
            return Err(Error::InvalidInput(format!("expected {p} counts, got {}", counts.len())));
        }
        let last = BigInt::from(counts[(p - 1) as usize]);
        let coeffs = counts[..(p - 1) as usize]
            .iter()
            .map(|&n| Rational::from_integer(BigInt::from(n) - &last))
            .collect();
        Ok(CycNum { p, coeffs })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// All coefficients are integers, i.e. the element lies in `Z[ζ_p]`.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    /// Adds `c · ζ^i` for `0 <= i < p`, rewriting `ζ^{p-1}`.
    fn add_zeta(&mut self, i: usize, c: &Rational) {
        if i + 1 == self.p as usize {
            for x in self.coeffs.iter_mut() {
                *x -= c;
            }
        } else {
            self.coeffs[i] += c;
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycNum { p: self.p, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(CycNum {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let p = self.p as usize;
        let mut folded = vec![Rational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    folded[(i + j) % p] += a * b;
                }
            }
        }
        let top = folded.pop().unwrap();
        let coeffs = folded.into_iter().map(|c| c - &top).collect();
        Ok(CycNum { p: self.p, coeffs })
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.p, other.p))
        }
    }

    /// Image under `ζ ↦ ζ^a`, for `a` prime to `p`.
    pub fn conjugate(&self, a: u64) -> Self {
        assert!(a % self.p != 0, "not a Galois automorphism");
        let mut out = Self::zero(self.p);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.add_zeta(((i as u64 * a) % self.p) as usize, c);
        }
        out
    }

    /// Normalized valuation with `ord_p(p) = 1`; infinite at zero.
    ///
    /// `p` is totally ramified in `Q(ζ_p)`, so the valuation of an algebraic
    /// integer is `v_p(N(x)) / (p - 1)`, and the norm is `Res(Φ_p, x)`.
    pub fn ord_p(&self) -> Extended {
        if self.is_zero() {
            return Extended::Infinite;
        }
        let den = common_denominator(&self.coeffs);
        let ints: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let phi = vec![BigInt::one(); self.p as usize];
        let norm = resultant(&phi, &ints);
        debug_assert!(!norm.is_zero());
        let v = Rational::new(BigInt::from(vp_int(&norm, self.p)), BigInt::from(self.p - 1));
        Extended::Finite(v - Rational::from_integer(BigInt::from(vp_int(&den, self.p))))
    }

    /// `{"p": p, "coeffs": [[num, den], ...]}`
    pub fn to_json(&self) -> Value {
        json!({"p": self.p, "coeffs": self.coeffs.iter().map(rational_json).collect::<Vec<_>>()})
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let p = v.get("p")?.as_u64()?;
        let coeffs = v.get("coeffs")?.as_array()?.iter().map(rational_from_json).collect::<Option<Vec<_>>>()?;
        Self::from_coeffs(p, coeffs).ok()
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add for &CycNum {
    type Output = CycNum;

    fn add(self, rhs: &CycNum) -> CycNum {
        self.checked_add(rhs).expect("cyclotomic fields differ")
    }
}

impl Sub for &CycNum {
    type Output = CycNum;

    fn sub(self, rhs: &CycNum) -> CycNum {
        self.checked_add(&-rhs).expect("cyclotomic fields differ")
    }
}

impl Mul for &CycNum {
    type Output = CycNum;

    fn mul(self, rhs: &CycNum) -> CycNum {
        self.checked_mul(rhs).expect("cyclotomic fields differ")
    }
}

impl Neg for &CycNum {
    type Output = CycNum;

    fn neg(self) -> CycNum {
        CycNum { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

fn trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// `lc(b)^{deg a - deg b + 1} · a mod b`.
fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut steps = 0usize;
    let total = a.len() - b.len() + 1;
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[dr - db + j] -= &lr * bj;
        }
        r = trim(r);
        steps += 1;
    }
    let extra = num_traits::pow(lb.clone(), total - steps);
    r.into_iter().map(|x| x * &extra).collect()
}

/// Resultant of two integer polynomials (little-endian coefficients) by the
/// subresultant pseudo-remainder sequence.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let a = trim(a.to_vec());
    let b = trim(b.to_vec());
    if a.is_empty() || b.is_empty() {
        return BigInt::zero();
    }
    let (da, db) = (a.len() - 1, b.len() - 1);
    if db == 0 {
        return num_traits::pow(b[0].clone(), da);
    }
    if da == 0 {
        return num_traits::pow(a[0].clone(), db);
    }

    let ca = content(&a);
    let cb = content(&b);
    let t = num_traits::pow(ca.clone(), db) * num_traits::pow(cb.clone(), da);
    let mut a: Vec<BigInt> = a.into_iter().map(|x| x / &ca).collect();
    let mut b: Vec<BigInt> = b.into_iter().map(|x| x / &cb).collect();
    let mut s = BigInt::one();
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (deg_a, deg_b) = (a.len() - 1, b.len() - 1);
        let delta = deg_a - deg_b;
        if deg_a % 2 == 1 && deg_b % 2 == 1 {
            s = -s;
        }
        let r = pseudo_remainder(&a, &b);
        a = b;
        let div = &g * num_traits::pow(h.clone(), delta);
        b = r.into_iter().map(|x| x / &div).collect();
        if b.is_empty() {
            return BigInt::zero();
        }
        g = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
        if b.len() == 1 {
            break;
        }
    }
    let deg_a = a.len() - 1;
    let lb = b[0].clone();
    let h_final = if deg_a == 0 {
        h
    } else {
        num_traits::pow(lb, deg_a) / num_traits::pow(h, deg_a - 1)
    };
    s * t * h_final
}

/// `|Res|` sign conventions aside, a Sylvester-matrix determinant for cross-checks.
pub fn sylvester_resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let a = trim(a.to_vec());
    let b = trim(b.to_vec());
    if a.is_empty() || b.is_empty() {
        return BigInt::zero();
    }
    let (m, n) = (a.len() - 1, b.len() - 1);
    if m + n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(size);
    for i in 0..n {
        let mut r = vec![BigInt::zero(); size];
        for (j, c) in a.iter().rev().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![BigInt::zero(); size];
        for (j, c) in b.iter().rev().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    let data = rows.into_iter().flatten().collect();
    crate::lattice::IntMatrix::new(size, size, data).unwrap().determinant().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn from_counts_examples() {
        assert_eq!(CycNum::from_counts(3, &[0, 1, 1]).unwrap(), CycNum::from_rational(3, int(-1)));
        assert_eq!(CycNum::from_counts(5, &[1, 0, 0, 0, 0]).unwrap(), CycNum::one(5));
        assert!(CycNum::from_counts(5, &[1, 1, 1, 1, 1]).unwrap().is_zero());
    }

    #[test]
    fn ring_identities() {
        for p in [3u64, 5, 7] {
            let z = CycNum::zeta_pow(p, 1);
            assert_eq!(&z * &CycNum::zeta_pow(p, p as i64 - 1), CycNum::one(p));
            let one_minus_z = &CycNum::one(p) - &z;
            let partial = (0..(p - 1) as i64).fold(CycNum::zero(p), |acc, i| &acc + &CycNum::zeta_pow(p, i));
            let expected = &CycNum::one(p) - &CycNum::zeta_pow(p, p as i64 - 1);
            assert_eq!(&one_minus_z * &partial, expected);
            assert!((&z + &-&z).is_zero());
        }
        assert_eq!(
            CycNum::one(3).checked_add(&CycNum::one(5)),
            Err(Error::FieldMismatch(3, 5))
        );
    }

    #[test]
    fn resultant_matches_sylvester() {
        let cases = [
            (bi(&[1, 1, 1]), bi(&[1, -1])),
            (bi(&[1, 1, 1, 1, 1]), bi(&[2, 0, 3, -1])),
            (bi(&[-3, 0, 2, 5]), bi(&[4, 1, 0, 0, 7])),
            (bi(&[1, 2, 1]), bi(&[1, 1])),
            (bi(&[6, 0, 0, 2]), bi(&[3, 9])),
        ];
        for (a, b) in cases {
            assert_eq!(resultant(&a, &b), sylvester_resultant(&a, &b), "{a:?} {b:?}");
            assert_eq!(resultant(&b, &a), sylvester_resultant(&b, &a), "{b:?} {a:?}");
        }
    }

    #[test]
    fn valuations() {
        for p in [3u64, 5, 7, 11] {
            let pi = &CycNum::one(p) - &CycNum::zeta_pow(p, 1);
            assert_eq!(pi.ord_p(), Extended::Finite(frac(1, p as i64 - 1)));
            assert_eq!(CycNum::from_rational(p, int(p as i64)).ord_p(), Extended::Finite(int(1)));
            assert_eq!(CycNum::from_rational(p, frac(1, p as i64)).ord_p(), Extended::Finite(int(-1)));
        }
        assert_eq!(CycNum::zero(5).ord_p(), Extended::Infinite);
        // quadratic Gauss sum over F_5
        let mut counts = [0u64; 5];
        for x in 0..5u64 {
            counts[(x * x % 5) as usize] += 1;
        }
        let g = CycNum::from_counts(5, &counts).unwrap();
        assert_eq!(&g * &g, CycNum::from_rational(5, int(5)));
        assert_eq!(g.ord_p(), Extended::Finite(frac(1, 2)));
    }

    #[test]
    fn json_roundtrip() {
        let x = CycNum::from_coeffs(3, vec![frac(1, 2), int(-4)]).unwrap();
        assert_eq!(CycNum::from_json(&x.to_json()), Some(x));
    }
}
