//! Toric exponential sums, the L-polynomial they determine, and its q-adic Newton polygon.

use std::fmt;

use num_traits::Zero;
use serde_json::Value;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::field::{trace_counts, FieldCtx, FieldTower, LaurentPoly};
use crate::geometry::ConvexGraph;
use crate::rational::{Extended, Rational};

/// `S*_k(f) = Σ_{x ∈ (F_{q^k}^*)^m} ζ_p^{Tr f(x)}`, with `f` defined over `base = F_q`.
pub fn toric_sum(f: &LaurentPoly, base: &FieldCtx, k: usize, budget: u128) -> Result<CycNum> {
    let tower = FieldTower::new(base.clone(), k)?;
    let counts = trace_counts(&tower, f, budget)?;
    CycNum::from_counts(base.characteristic(), &counts)
}

/// Number of torus evaluations needed for `S*_1, …, S*_n`.
pub fn evaluation_cost(q: u64, m: usize, n: usize) -> u128 {
    let mut total: u128 = 0;
    let mut qk: u128 = 1;
    for _ in 0..n {
        qk = qk.saturating_mul(u128::from(q));
        let mut pts: u128 = 1;
        for _ in 0..m {
            pts = pts.saturating_mul(qk - 1);
        }
        total = total.saturating_add(pts);
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSums {
    pub p: u64,
    pub a: usize,
    /// `sums[k - 1] = S*_k`.
    pub sums: Vec<CycNum>,
}

impl PowerSums {
    /// `S*_1, …, S*_n`, refusing up front when the whole run exceeds `budget`.
    pub fn compute(f: &LaurentPoly, base: &FieldCtx, n: usize, budget: u128) -> Result<Self> {
        let required = evaluation_cost(base.order(), f.nvars(), n);
        if required > budget {
            return Err(Error::BudgetExceeded { required, budget });
        }
        let sums = (1..=n).map(|k| toric_sum(f, base, k, budget)).collect::<Result<Vec<_>>>()?;
        Ok(PowerSums { p: base.characteristic(), a: base.degree(), sums })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPoly {
    /// `(-1)^{m-1}`.
    pub sign_exponent: i8,
    pub coeffs: Vec<CycNum>,
}

impl LPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(CycNum::to_json).collect())
    }
}

/// Coefficients `A_0..=A_len` of `exp(ε Σ_k S_k T^k / k)` with `ε = (-1)^{m-1}`.
pub fn l_series(sums: &PowerSums, m: usize, len: usize) -> Result<Vec<CycNum>> {
    if sums.sums.len() < len {
        return Err(Error::InvalidInput(format!(
            "{} power sums given, {len} needed",
            sums.sums.len()
        )));
    }
    let p = sums.p;
    let eps = if m % 2 == 1 { Rational::from_integer(1.into()) } else { Rational::from_integer((-1).into()) };
    let mut a = vec![CycNum::one(p)];
    for j in 1..=len {
        let mut acc = CycNum::zero(p);
        for k in 1..=j {
            acc = &acc + &(&sums.sums[k - 1] * &a[j - k]);
        }
        a.push(acc.scale(&(&eps / Rational::from_integer(j.into()))));
    }
    Ok(a)
}

/// The L-polynomial of degree `n`; every coefficient must land in `Z[ζ_p]`.
pub fn l_polynomial(sums: &PowerSums, m: usize, n: usize) -> Result<LPoly> {
    let coeffs = l_series(sums, m, n)?;
    if let Some(index) = coeffs.iter().position(|c| !c.is_integral()) {
        return Err(Error::NonIntegral { index });
    }
    Ok(LPoly { sign_exponent: if m % 2 == 1 { 1 } else { -1 }, coeffs })
}

/// Lower convex hull of `(i, ord_p(A_i) / a)` over the nonzero coefficients.
pub fn newton_polygon(l: &LPoly, a: usize) -> ConvexGraph {
    let pts = l
        .coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match c.ord_p() {
            Extended::Finite(v) => Some((i as u64, v / Rational::from_integer(a.into()))),
            Extended::Infinite => None,
        })
        .collect();
    ConvexGraph::lower_hull(pts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Equal,
    LiesAbove,
    Violation,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Equal => "Equal",
            Verdict::LiesAbove => "LiesAbove",
            Verdict::Violation => "Violation",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "Equal" => Some(Verdict::Equal),
            "LiesAbove" => Some(Verdict::LiesAbove),
            "Violation" => Some(Verdict::Violation),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Compares two polygons on every integer abscissa.
pub fn compare(np: &ConvexGraph, hp: &ConvexGraph) -> Result<Verdict> {
    if np.last_x() != hp.last_x() || np.last_y() != hp.last_y() {
        return Err(Error::EndpointMismatch(
            format!("({}, {})", np.last_x(), np.last_y()),
            format!("({}, {})", hp.last_x(), hp.last_y()),
        ));
    }
    let mut strict = false;
    for x in 0..=np.last_x() {
        let diff = np.eval(x).expect("inside domain") - hp.eval(x).expect("inside domain");
        if diff < Rational::zero() {
            return Ok(Verdict::Violation);
        }
        strict |= !diff.is_zero();
    }
    Ok(if strict { Verdict::LiesAbove } else { Verdict::Equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, DEFAULT_BUDGET};
    use crate::rational::{frac, int};

    fn monomial(base: &FieldCtx, e: i64) -> LaurentPoly {
        let mut f = LaurentPoly::new(1);
        f.add_term(base, vec![e], base.one());
        f
    }

    #[test]
    fn linear_sums_are_minus_one() {
        let f3 = make_field(3, 1).unwrap();
        for k in 1..=3 {
            assert_eq!(toric_sum(&monomial(&f3, 1), &f3, k, DEFAULT_BUDGET).unwrap(), CycNum::from_rational(3, int(-1)));
        }
        let f5 = make_field(5, 1).unwrap();
        let s = toric_sum(&monomial(&f5, 2), &f5, 1, DEFAULT_BUDGET).unwrap();
        let expected = &CycNum::zeta_pow(5, 1).scale(&int(2)) + &CycNum::zeta_pow(5, 4).scale(&int(2));
        assert_eq!(s, expected);
    }

    #[test]
    fn series_examples() {
        let ones = PowerSums { p: 3, a: 1, sums: vec![CycNum::from_rational(3, int(-1)); 3] };
        let l = l_polynomial(&ones, 1, 1).unwrap();
        assert_eq!(l.coeffs, vec![CycNum::one(3), CycNum::from_rational(3, int(-1))]);
        let tail = l_series(&ones, 1, 3).unwrap();
        assert!(tail[2].is_zero() && tail[3].is_zero());
        let zeros = PowerSums { p: 3, a: 1, sums: vec![CycNum::zero(3); 2] };
        let l0 = l_polynomial(&zeros, 1, 2).unwrap();
        assert!(l0.coeffs[1].is_zero() && l0.coeffs[2].is_zero());
        let bad = PowerSums { p: 3, a: 1, sums: vec![CycNum::one(3), CycNum::zero(3)] };
        assert_eq!(l_polynomial(&bad, 1, 2), Err(Error::NonIntegral { index: 2 }));
    }

    #[test]
    fn gauss_case() {
        let f5 = make_field(5, 1).unwrap();
        let sums = PowerSums::compute(&monomial(&f5, 2), &f5, 2, DEFAULT_BUDGET).unwrap();
        let l = l_polynomial(&sums, 1, 2).unwrap();
        let np = newton_polygon(&l, 1);
        assert_eq!(np.points(), &[(0, int(0)), (1, int(0)), (2, frac(1, 2))]);
    }

    #[test]
    fn comparisons() {
        let hp = ConvexGraph::lower_hull(vec![(0, int(0)), (1, int(0)), (4, int(3))]);
        assert_eq!(compare(&hp, &hp).unwrap(), Verdict::Equal);
        let raised = ConvexGraph::lower_hull(vec![(0, int(0)), (1, frac(1, 2)), (4, int(3))]);
        assert_eq!(compare(&raised, &hp).unwrap(), Verdict::LiesAbove);
        let dipped = ConvexGraph::lower_hull(vec![(0, int(0)), (3, int(0)), (4, int(3))]);
        assert_eq!(compare(&dipped, &hp).unwrap(), Verdict::Violation);
        let short = ConvexGraph::lower_hull(vec![(0, int(0)), (3, int(2))]);
        assert!(matches!(compare(&short, &hp), Err(Error::EndpointMismatch(..))));
    }

    #[test]
    fn budget_refusal() {
        let f5 = make_field(5, 1).unwrap();
        let err = PowerSums::compute(&monomial(&f5, 2), &f5, 8, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }
}
