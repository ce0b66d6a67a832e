//! Explicit triangulation of the facet `δ_d` of an (A,B)-polytope.
//!
//! Points of `δ_d` are handled in projected coordinates `(v_1, …, v_n)`; the
//! first coordinate is recovered by [`lift`]. Every lattice point of `δ_d`
//! lies on one of the levels `S_t = {v ≥ 0, Σv = dt/s}`, `t = 0..=s`. The
//! triangulation cuts `δ_d` into slabs between consecutive levels, each slab
//! into `n` wedge pieces `P(Γ_t^i, Λ_{t−1}^{n−i−1})`, and each piece into joins
//! of unit cells of its two faces.

pub mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::family::{build_delta, ABParams};
use crate::geometry::{simplex_volume, LatticePoint, Polytope};
use crate::rational::{frac, int, rational_json, Rational};

pub use verify::{verify_triangulation, CheckResult, VerifyReport};

/// Largest `n` accepted by [`build_triangulation`].
pub const MAX_TRIANGULATION_N: usize = 5;

/// `N_t = dt/s`, the coordinate sum on level `t`.
pub fn level(params: &ABParams, t: u64) -> i64 {
    (params.d * t / params.s()) as i64
}

/// First coordinate of the lift of a projected point: `((A+B)/d)·Σv − B`.
pub fn lift(params: &ABParams, v: &[i64]) -> LatticePoint {
    let sum: i64 = v.iter().sum();
    let num = (params.a + params.b) as i64 * sum;
    let d = params.d as i64;
    debug_assert_eq!(num % d, 0, "{v:?} is not on a level");
    let mut out = Vec::with_capacity(v.len() + 1);
    out.push(num / d - params.b as i64);
    out.extend_from_slice(v);
    out
}

/// Lattice points of `δ_d` whose first coordinate is `(A+B)t/s − B`, lifted.
pub fn strata(params: &ABParams, t: u64) -> Result<Vec<LatticePoint>> {
    if t > params.s() {
        return Err(Error::InvalidInput(format!("stratum {t} outside 0..={}", params.s())));
    }
    Ok(level_points(params.n, level(params, t)).iter().map(|v| lift(params, v)).collect())
}

/// Nonnegative integer vectors of length `n` with the given sum, lexicographically.
pub fn level_points(n: usize, sum: i64) -> Vec<LatticePoint> {
    fn rec(n: usize, sum: i64, prefix: &mut Vec<i64>, out: &mut Vec<LatticePoint>) {
        if prefix.len() + 1 == n {
            prefix.push(sum);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in 0..=sum {
            prefix.push(x);
            rec(n, sum - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, sum, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All lattice points of `δ_d` in projected coordinates, level by level.
pub fn lattice_points(params: &ABParams) -> Vec<LatticePoint> {
    (0..=params.s()).flat_map(|t| level_points(params.n, level(params, t))).collect()
}

/// An affine functional `coeffs · x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Functional {
    pub fn eval(&self, x: &[i64]) -> Rational {
        self.coeffs.iter().zip(x).map(|(c, &v)| c * BigInt::from(v)).sum()
    }

    /// `eval(x) − rhs`.
    pub fn offset(&self, x: &[i64]) -> Rational {
        self.eval(x) - &self.rhs
    }

    pub fn to_json(&self) -> Value {
        json!({
            "coeffs": self.coeffs.iter().map(rational_json).collect::<Vec<_>>(),
            "rhs": rational_json(&self.rhs),
        })
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if c.is_one() { format!("x_{}", i + 1) } else { format!("{c}·x_{}", i + 1) })
            .collect();
        let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        write!(f, "{lhs} = {}", self.rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HyperplaneKind {
    /// Through the origin and `V_t`, in lifted coordinates `x_0..x_n`.
    Slab { t: u64 },
    Wedge { t: u64, i: usize },
    /// Spanned by `Λ_{t−1}^{n−i−1}` and the points of `Γ_t^i` with `v_k = j`.
    GridH { t: u64, i: usize, k: usize, j: i64 },
    /// Spanned by `Γ_t^i` and the points of `Λ_{t−1}^{n−i−1}` with `v_l = m`.
    GridP { t: u64, i: usize, l: usize, m: i64 },
}

impl HyperplaneKind {
    pub fn label(&self) -> String {
        match self {
            HyperplaneKind::Slab { t } => format!("H_{t}"),
            HyperplaneKind::Wedge { t, i } => format!("H_{t}^{i}"),
            HyperplaneKind::GridH { t, i, k, j } => format!("H_{t}^{i}({k},{j})"),
            HyperplaneKind::GridP { t, i, l, m } => format!("P_{t}^{i}({l},{m})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuttingHyperplane {
    pub kind: HyperplaneKind,
    pub functional: Functional,
}

impl CuttingHyperplane {
    pub fn to_json(&self) -> Value {
        let mut v = self.functional.to_json();
        v["label"] = json!(self.kind.label());
        v
    }
}

/// The `s − 1` interior slab hyperplanes `N_t x_0 − c_t Σ x_i = 0`, primitive.
pub fn slab_hyperplanes(params: &ABParams) -> Vec<CuttingHyperplane> {
    let n = params.n;
    (1..params.s())
        .map(|t| {
            let nt = level(params, t);
            let ct = ((params.a + params.b) * t / params.s()) as i64 - params.b as i64;
            let g = nt.gcd(&ct);
            let mut coeffs = vec![int(nt / g)];
            coeffs.extend(std::iter::repeat_n(int(-ct / g), n));
            CuttingHyperplane { kind: HyperplaneKind::Slab { t }, functional: Functional { coeffs, rhs: int(0) } }
        })
        .collect()
}

fn scaled_unit(n: usize, k: usize, scale: i64) -> LatticePoint {
    let mut v = vec![0; n];
    v[k] = scale;
    v
}

/// Vertices of `Γ_t^i`: `N_t e_{i+1}, …, N_t e_n` (coordinates numbered from 1).
pub fn gamma(params: &ABParams, t: u64, i: usize) -> Vec<LatticePoint> {
    let nt = level(params, t);
    (i..params.n).map(|k| scaled_unit(params.n, k, nt)).collect()
}

/// Vertices of `Λ_t^j`: `N_t e_1, …, N_t e_{n−j}`; the single point `0` on level 0.
pub fn lambda(params: &ABParams, t: u64, j: usize) -> Vec<LatticePoint> {
    let nt = level(params, t);
    if nt == 0 {
        return vec![vec![0; params.n]];
    }
    (0..params.n - j).map(|k| scaled_unit(params.n, k, nt)).collect()
}

/// The two faces joined in piece `(t, i)`: `Γ_t^i` and `Λ_{t−1}^{n−i−1}`.
pub fn gamma_lambda(params: &ABParams, t: u64, i: usize) -> Result<(Vec<LatticePoint>, Vec<LatticePoint>)> {
    if t == 0 || t > params.s() || i >= params.n {
        return Err(Error::InvalidInput(format!("no piece ({t},{i}) for {params}")));
    }
    Ok((gamma(params, t, i), lambda(params, t - 1, params.n - i - 1)))
}

/// `(s/(d(t−1)))·Σ_{j≤i} x_j + (s/(dt))·Σ_{j>i} x_j = 1`.
pub fn wedge_hyperplane(params: &ABParams, t: u64, i: usize) -> Result<CuttingHyperplane> {
    if t < 2 || t > params.s() || i == 0 || i >= params.n {
        return Err(Error::InvalidInput(format!("no wedge hyperplane ({t},{i}) for {params}")));
    }
    let lo = frac(1, level(params, t - 1));
    let hi = frac(1, level(params, t));
    let coeffs = (1..=params.n).map(|j| if j <= i { lo.clone() } else { hi.clone() }).collect();
    Ok(CuttingHyperplane { kind: HyperplaneKind::Wedge { t, i }, functional: Functional { coeffs, rhs: int(1) } })
}

/// The grid hyperplanes `H_t^i(k,j)` and `P_t^i(l,m)` of piece `(t, i)`, from their closed forms.
///
/// Pieces of the first slab are cones from a single point and are cut by the
/// hyperplanes through it, `v_k = j·Σv / N_1`.
pub fn grid_hyperplanes(params: &ABParams, t: u64, i: usize) -> Vec<CuttingHyperplane> {
    let n = params.n;
    let (s, d, t_i) = (params.s() as i64, params.d as i64, t as i64);
    let nt = level(params, t);
    let mut out = Vec::new();
    if t == 1 {
        for k in 1..=n {
            for j in 1..nt {
                let coeffs = (1..=n).map(|c| if c == k { frac(nt - j, 1) } else { frac(-j, 1) }).collect();
                out.push(CuttingHyperplane {
                    kind: HyperplaneKind::GridH { t, i, k, j },
                    functional: Functional { coeffs, rhs: int(0) },
                });
            }
        }
        return out;
    }
    let base = frac(s, (t_i - 1) * d);
    for k in (i + 1)..=n {
        if i + 1 == n {
            continue;
        }
        for j in 1..nt {
            let coeffs: Vec<Rational> = if k == i + 1 {
                let tail = frac(s * ((t_i - 1) * d - s * j), d * (t_i - 1) * (t_i * d - s * j));
                (1..=n).map(|c| if c <= i + 1 { base.clone() } else { tail.clone() }).collect()
            } else {
                let ak = frac(s * j - d, (t_i - 1) * d * j);
                (1..=n).map(|c| if c == k { ak.clone() } else { base.clone() }).collect()
            };
            out.push(CuttingHyperplane {
                kind: HyperplaneKind::GridH { t, i, k, j },
                functional: Functional { coeffs, rhs: int(1) },
            });
        }
    }
    let ntm = level(params, t - 1);
    let inv_t = frac(s, t_i * d);
    if i >= 1 {
        for l in 1..=(i + 1) {
            for m in 1..ntm {
                let coeffs: Vec<Rational> = if l == i + 1 {
                    let head = frac(s * (t_i * d - s * m), t_i * d * ((t_i - 1) * d - s * m));
                    (1..=n).map(|c| if c <= i { head.clone() } else { inv_t.clone() }).collect()
                } else {
                    let bl = &inv_t + frac(1, t_i * m);
                    (1..=n).map(|c| if c == l { bl.clone() } else { inv_t.clone() }).collect()
                };
                out.push(CuttingHyperplane {
                    kind: HyperplaneKind::GridP { t, i, l, m },
                    functional: Functional { coeffs, rhs: int(1) },
                });
            }
        }
    }
    out
}

/// Points known to span a cutting hyperplane, used to cross-check its closed form.
pub fn generating_points(params: &ABParams, kind: HyperplaneKind) -> Vec<LatticePoint> {
    let n = params.n;
    let along = |coords: std::ops::RangeInclusive<usize>, fixed: usize, value: i64, total: i64| {
        coords
            .filter(|&c| c != fixed)
            .map(|c| {
                let mut v = vec![0; n];
                v[fixed - 1] = value;
                v[c - 1] = total - value;
                v
            })
            .collect::<Vec<_>>()
    };
    match kind {
        HyperplaneKind::Slab { t } => {
            let mut pts = strata(params, t).unwrap_or_default();
            pts.push(vec![0; n + 1]);
            pts
        }
        HyperplaneKind::Wedge { t, i } => {
            let mut pts = gamma(params, t, i);
            pts.extend(lambda(params, t - 1, n - i));
            pts
        }
        HyperplaneKind::GridH { t, i, k, j } => {
            let nt = level(params, t);
            let mut pts = along((i + 1)..=n, k, j, nt);
            if t == 1 {
                pts.push(vec![0; n]);
            } else {
                pts.extend(lambda(params, t - 1, n - i - 1));
            }
            pts
        }
        HyperplaneKind::GridP { t, i, l, m } => {
            let mut pts = gamma(params, t, i);
            pts.extend(along(1..=(i + 1), l, m, level(params, t - 1)));
            pts
        }
    }
}

/// Cells of the coordinate-hyperplane arrangement on `{v ≥ 0, Σ_{k∈coords} v_k = sum}`.
///
/// Each cell is `{c ≤ v ≤ c + 1}` for an integer floor vector `c`; its vertices
/// are `c + e_S` with `|S| = sum − Σc`. Cells are simplices when that size is
/// 1 or `|coords| − 1`, which covers every cell when `|coords| ≤ 3`.
pub fn unit_cells(n: usize, coords: &[usize], sum: i64) -> Vec<Vec<LatticePoint>> {
    if sum == 0 {
        return vec![vec![vec![0; n]]];
    }
    if coords.len() == 1 {
        return vec![vec![scaled_unit(n, coords[0], sum)]];
    }
    let r = coords.len() - 1;
    let mut out = Vec::new();
    for c in coords.iter().map(|_| 0..sum).multi_cartesian_product() {
        let h = sum - c.iter().sum::<i64>();
        if h < 1 || h > r as i64 {
            continue;
        }
        let cell: Vec<LatticePoint> = (0..coords.len())
            .combinations(h as usize)
            .map(|subset| {
                let mut v = vec![0; n];
                for (slot, &k) in coords.iter().enumerate() {
                    v[k] = c[slot] + i64::from(subset.contains(&slot));
                }
                v
            })
            .collect();
        out.push(cell);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Only the construction itself; fails when a unit cell is not a simplex.
    #[default]
    Strict,
    /// Pulling refinement of non-simplex unit cells.
    Extended,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub t: u64,
    pub i: usize,
    /// Index of the unit cell of `Γ_t^i`.
    pub alpha: usize,
    /// Index of the unit cell of `Λ_{t−1}^{n−i−1}`.
    pub beta: usize,
    /// Position inside a pulling refinement, when one was needed.
    pub refined: Option<(usize, usize)>,
    /// Projected vertices.
    pub vertices: Vec<LatticePoint>,
}

impl Cell {
    pub fn lifted(&self, params: &ABParams) -> Vec<LatticePoint> {
        self.vertices.iter().map(|v| lift(params, v)).collect()
    }

    /// Normalized volume of the cone over the lifted cell from the origin.
    pub fn cone_volume(&self, params: &ABParams) -> BigInt {
        let mut pts = self.lifted(params);
        pts.push(vec![0; params.n + 1]);
        simplex_volume(&pts)
    }
}

/// Heights whose upper hull is meant to induce the triangulation.
///
/// For a point `v` on level `t`:
/// `ω(v) = W²·Σ_u −|t − u| + W·Σ −|ℓ(v) − 1| + Σ_k Σ_{j=1}^{N_t−1} −|v_k − j| + Σ ε^r`,
/// the second sum running over all wedge functionals `ℓ` and the last over
/// pulled points of rank `r`.
#[derive(Clone, Debug)]
pub struct Lifting {
    pub params: ABParams,
    pub weight: Rational,
    pub wedges: Vec<CuttingHyperplane>,
    pub epsilon: Rational,
    pub pull_ranks: BTreeMap<LatticePoint, u32>,
}

impl Lifting {
    pub fn new(params: ABParams, weight: Rational, pulled: &BTreeSet<LatticePoint>, epsilon: Rational) -> Self {
        let wedges = (2..=params.s())
            .flat_map(|t| (1..params.n).map(move |i| (t, i)))
            .map(|(t, i)| wedge_hyperplane(&params, t, i).expect("indices in range"))
            .collect();
        let pull_ranks = pulled.iter().enumerate().map(|(r, v)| (v.clone(), r as u32 + 1)).collect();
        Lifting { params, weight, wedges, epsilon, pull_ranks }
    }

    pub fn height(&self, v: &[i64]) -> Rational {
        let n1 = level(&self.params, 1);
        let sum: i64 = v.iter().sum();
        let t = sum / n1;
        let slab: i64 = (1..self.params.s() as i64).map(|u| -(t - u).abs()).sum();
        let wedge: Rational = self.wedges.iter().map(|h| -h.functional.offset(v).abs()).sum();
        let grid: i64 = v.iter().map(|&x| (1..sum).map(|j| -(x - j).abs()).sum::<i64>()).sum();
        let mut h = &self.weight * &self.weight * int(slab) + &self.weight * wedge + int(grid);
        if let Some(&r) = self.pull_ranks.get(v) {
            h += num_traits::pow(self.epsilon.clone(), r as usize);
        }
        h
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rule": "W^2*sum_slab(-|t-u|) + W*sum_wedge(-|l(x)-1|) + sum_k sum_j(-|x_k-j|) + sum_pulled eps^rank",
            "W": rational_json(&self.weight),
            "wedges": self.wedges.iter().map(CuttingHyperplane::to_json).collect::<Vec<_>>(),
            "epsilon": rational_json(&self.epsilon),
            "pulled": self.pull_ranks.len(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Subdivision {
    pub params: ABParams,
    pub mode: Mode,
    pub cells: Vec<Cell>,
    pub lifting: Lifting,
    /// Whether some unit cell needed a pulling refinement.
    pub refined: bool,
}

impl Subdivision {
    pub fn to_json(&self) -> Value {
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|c| {
                let mut v = json!({
                    "t": c.t,
                    "i": c.i,
                    "alpha": c.alpha,
                    "beta": c.beta,
                    "vertices": c.lifted(&self.params),
                    "volume": rational_json(&Rational::from_integer(c.cone_volume(&self.params))),
                });
                if let Some((k, of)) = c.refined {
                    v["refined"] = json!([k, of]);
                }
                v
            })
            .collect();
        json!({
            "family": self.params.label(),
            "mode": if self.mode == Mode::Extended { "extended" } else { "strict" },
            "refined": self.refined,
            "cells": cells,
            "lifting": self.lifting.to_json(),
        })
    }

    /// OFF dump of the lifted cells, one face per cell.
    pub fn to_off(&self) -> String {
        let mut index: BTreeMap<LatticePoint, usize> = BTreeMap::new();
        let mut order = Vec::new();
        for c in &self.cells {
            for v in c.lifted(&self.params) {
                if !index.contains_key(&v) {
                    index.insert(v.clone(), order.len());
                    order.push(v);
                }
            }
        }
        let dim = self.params.n + 1;
        let mut out = String::new();
        if dim <= 3 {
            out.push_str("OFF\n");
        } else {
            out.push_str(&format!("nOFF\n{dim}\n"));
        }
        out.push_str(&format!("{} {} 0\n", order.len(), self.cells.len()));
        for v in &order {
            let mut coords: Vec<String> = v.iter().map(i64::to_string).collect();
            while dim <= 3 && coords.len() < 3 {
                coords.push("0".into());
            }
            out.push_str(&coords.join(" "));
            out.push('\n');
        }
        for c in &self.cells {
            let ids: Vec<String> = c.lifted(&self.params).iter().map(|v| index[v].to_string()).collect();
            out.push_str(&format!("{} {}\n", ids.len(), ids.join(" ")));
        }
        out
    }
}

/// Refines `cell` by a pulling triangulation when it is not a simplex.
fn simplices_of(cell: &[LatticePoint], mode: Mode, params: &ABParams) -> Result<Vec<Vec<LatticePoint>>> {
    let dim = crate::geometry::linalg::affine_dim(cell);
    if cell.len() == dim + 1 {
        return Ok(vec![cell.to_vec()]);
    }
    if mode == Mode::Strict {
        return Err(Error::Unsupported(format!(
            "{params}: unit cell with {} vertices in dimension {dim} is not a simplex; use extended mode",
            cell.len()
        )));
    }
    let hull = Polytope::convex_hull(cell)?;
    Ok(hull
        .pulling_triangulation()
        .into_iter()
        .map(|s| s.iter().map(|&k| hull.vertices()[k].clone()).collect())
        .collect())
}

/// Builds the cells and a lifting that certifies their regularity.
pub fn build_triangulation(params: ABParams, mode: Mode) -> Result<Subdivision> {
    let n = params.n;
    if n > MAX_TRIANGULATION_N {
        return Err(Error::Unsupported(format!("triangulation for n = {n} > {MAX_TRIANGULATION_N}")));
    }
    let mut cells = Vec::new();
    let mut pulled = BTreeSet::new();
    let mut refined = false;
    for t in 1..=params.s() {
        let pieces = if t == 1 { 1 } else { n };
        for i in 0..pieces {
            let gamma_coords: Vec<usize> = (i..n).collect();
            let lambda_coords: Vec<usize> = (0..=i).collect();
            let alphas = unit_cells(n, &gamma_coords, level(&params, t));
            let betas = unit_cells(n, &lambda_coords, level(&params, t - 1));
            let alpha_simplices: Vec<Vec<Vec<LatticePoint>>> =
                alphas.iter().map(|a| simplices_of(a, mode, &params)).collect::<Result<_>>()?;
            let beta_simplices: Vec<Vec<Vec<LatticePoint>>> =
                betas.iter().map(|b| simplices_of(b, mode, &params)).collect::<Result<_>>()?;
            for (cells_of, orig) in [(&alpha_simplices, &alphas), (&beta_simplices, &betas)] {
                for (parts, cell) in cells_of.iter().zip(orig.iter()) {
                    if parts.len() > 1 {
                        refined = true;
                        pulled.extend(cell.iter().cloned());
                    }
                }
            }
            for (ai, a_parts) in alpha_simplices.iter().enumerate() {
                for (bi, b_parts) in beta_simplices.iter().enumerate() {
                    let total = a_parts.len() * b_parts.len();
                    for (k, (a, b)) in a_parts.iter().cartesian_product(b_parts.iter()).enumerate() {
                        let mut vertices = a.clone();
                        vertices.extend(b.iter().cloned());
                        cells.push(Cell {
                            t,
                            i,
                            alpha: ai,
                            beta: bi,
                            refined: (total > 1).then_some((k, total)),
                            vertices,
                        });
                    }
                }
            }
        }
    }

    let points = lattice_points(&params);
    let frames = verify::frames(&cells)?;
    let mut chosen = None;
    for step in 0..24u32 {
        let weight = int(4) * num_traits::pow(int(2), step as usize);
        let epsilon = frac(1, 8) / num_traits::pow(int(2), step as usize);
        let lifting = Lifting::new(params, weight, &pulled, epsilon);
        let heights: Vec<Rational> = points.iter().map(|v| lifting.height(v)).collect();
        if verify::regularity_violation(&cells, &frames, &points, &heights).is_none() {
            chosen = Some(lifting);
            break;
        }
        chosen = Some(lifting);
    }
    let lifting = chosen.expect("at least one attempt");
    Ok(Subdivision { params, mode, cells, lifting, refined })
}

/// `lcm(A, B, dB/gcd(A+B, dB))` with the moduli of the faces `δ'_d` (`A`) and the cells of `δ_d` (`dB/s`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrdinarityModulus {
    pub modulus: u64,
    pub delta_prime: u64,
    pub delta_d: u64,
}

pub fn ordinarity_modulus(params: &ABParams) -> OrdinarityModulus {
    OrdinarityModulus {
        modulus: params.expected_denominator(),
        delta_prime: params.a,
        delta_d: params.cell_volume(),
    }
}

/// Every cone over a cell has normalized volume `dB/s`.
pub fn cell_volume_check(sub: &Subdivision) -> bool {
    let want = BigInt::from(sub.params.cell_volume());
    sub.cells.iter().all(|c| c.cone_volume(&sub.params) == want)
}

/// Normalized volume of `Δ_d`, the hull of `δ_d` and the origin.
pub fn cone_volume(params: ABParams) -> Result<Rational> {
    Ok(build_delta(params)?.cone_d.normalized_volume())
}

/// Affine functional through `n` projected points, when they span a hyperplane.
pub fn hyperplane_through(points: &[LatticePoint]) -> Option<(Vec<Rational>, Rational)> {
    let n = points.first()?.len();
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            let mut r: Vec<Rational> = p.iter().map(|&x| int(x)).collect();
            r.push(int(-1));
            r
        })
        .collect();
    let kernel = crate::geometry::linalg::nullspace(&rows, n + 1);
    if kernel.len() != 1 {
        return None;
    }
    let v = &kernel[0];
    let normal: Vec<Rational> = v[..n].to_vec();
    if normal.iter().all(Zero::is_zero) {
        return None;
    }
    Some((normal, v[n].clone()))
}

/// Whether `f` and `coeffs · x = rhs` describe the same hyperplane.
pub fn same_hyperplane(f: &Functional, coeffs: &[Rational], rhs: &Rational) -> bool {
    let Some(p) = coeffs.iter().position(|c| !c.is_zero()) else {
        return false;
    };
    let ratio = &f.coeffs[p] / &coeffs[p];
    !ratio.is_zero() && f.coeffs.iter().zip(coeffs).all(|(a, b)| *a == &ratio * b) && f.rhs == &ratio * rhs
}
