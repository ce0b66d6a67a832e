//! Weight counts, Hodge numbers and the Hodge polygon of a polytope containing the origin.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{ConvexGraph, Polytope};
use crate::error::{Error, Result};
use crate::rational::{binomial, rational_json, Extended, Rational};

pub const MAX_HODGE_DIM: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeData {
    pub denominator: u64,
    /// `w[k]` = number of lattice points of weight `k / D`, for `k = 0..=m·D`.
    pub w: Vec<u64>,
    /// Hodge numbers `H(k)`, same indexing.
    pub h: Vec<BigInt>,
    /// One point per `t = 0..=m·D` (plus the origin), before hull reduction.
    pub breakpoints: Vec<(u64, Rational)>,
    pub polygon: ConvexGraph,
}

impl HodgeData {
    pub fn total(&self) -> BigInt {
        self.h.iter().sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "D": self.denominator,
            "W": self.w,
            "H": self.h.iter().map(crate::rational::bigint_json).collect::<Vec<_>>(),
            "breakpoints": self.breakpoints.iter().map(|(x, y)| json!([x, rational_json(y)])).collect::<Vec<_>>(),
            "polygon": self.polygon.to_json(),
        })
    }
}

pub fn hodge_data(poly: &Polytope) -> Result<HodgeData> {
    if !poly.is_full_dimensional() {
        return Err(Error::Degenerate { dim: poly.dim(), ambient: poly.ambient_dim() });
    }
    let m = poly.ambient_dim();
    if m > MAX_HODGE_DIM {
        return Err(Error::Unsupported(format!("Hodge data in dimension {m} > {MAX_HODGE_DIM}")));
    }
    let d = poly.denominator()?;
    let top = m as u64 * d;
    let bounds = poly.bounding_box(m as i64);

    let (lo0, hi0) = bounds[0];
    let w = (lo0..=hi0)
        .into_par_iter()
        .map(|x0| {
            let mut counts = vec![0u64; top as usize + 1];
            let mut u = vec![0i64; m];
            u[0] = x0;
            count_slice(poly, &bounds, 1, &mut u, d, &mut counts);
            counts
        })
        .reduce(
            || vec![0u64; top as usize + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let h: Vec<BigInt> = (0..=top)
        .map(|k| {
            (0..=m as u64)
                .filter(|i| i * d <= k)
                .map(|i| {
                    let term = binomial(m as u64, i) * BigInt::from(w[(k - i * d) as usize]);
                    if i % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum()
        })
        .collect();

    let mut breakpoints = vec![(0u64, Rational::zero())];
    let mut x = BigInt::zero();
    let mut y = BigInt::zero();
    for (k, hk) in h.iter().enumerate() {
        if hk.is_negative() {
            return Err(Error::InvalidInput(format!("negative Hodge number H({k}) = {hk}")));
        }
        x += hk;
        y += hk * BigInt::from(k);
        let xi = x.to_u64().ok_or_else(|| Error::Unsupported("Hodge polygon too long".into()))?;
        breakpoints.push((xi, Rational::new(y.clone(), BigInt::from(d))));
    }
    breakpoints.dedup();
    let polygon = ConvexGraph::lower_hull(breakpoints.clone());
    Ok(HodgeData { denominator: d, w, h, breakpoints, polygon })
}

fn count_slice(
    poly: &Polytope,
    bounds: &[(i64, i64)],
    axis: usize,
    u: &mut Vec<i64>,
    d: u64,
    counts: &mut [u64],
) {
    if axis == u.len() {
        if let Extended::Finite(wt) = poly.weight(u).expect("origin checked by denominator") {
            let scaled = wt * Rational::from_integer(d.into());
            debug_assert!(scaled.is_integer());
            if let Some(k) = scaled.to_integer().to_usize() {
                if k < counts.len() {
                    counts[k] += 1;
                }
            }
        }
        return;
    }
    for x in bounds[axis].0..=bounds[axis].1 {
        u[axis] = x;
        count_slice(poly, bounds, axis + 1, u, d, counts);
    }
}
