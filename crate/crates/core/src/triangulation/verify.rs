//! Exact verification of a [`Subdivision`]: simplices without extra lattice
//! points, volumes, face-to-face intersections and a regularity certificate.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{
    generating_points, grid_hyperplanes, hyperplane_through, lattice_points, level, lift, same_hyperplane,
    slab_hyperplanes, strata, wedge_hyperplane, Cell, HyperplaneKind, Subdivision,
};
use crate::error::Result;
use crate::family::{build_delta, ABParams};
use crate::feasibility::{rational_feasible, Constraint, Relation};
use crate::geometry::linalg::{affine_dim, inverse, Matrix};
use crate::geometry::{LatticePoint, Polytope};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub counterexample: Option<Value>,
}

impl CheckResult {
    fn pass(name: &'static str, detail: String) -> Self {
        CheckResult { name, passed: true, detail, counterexample: None }
    }

    fn fail(name: &'static str, detail: String, counterexample: Value) -> Self {
        CheckResult { name, passed: false, detail, counterexample: Some(counterexample) }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({"passed": self.passed, "detail": self.detail});
        if let Some(c) = &self.counterexample {
            v["counterexample"] = c.clone();
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for c in &self.checks {
            map.insert(c.name.to_string(), c.to_json());
        }
        Value::Object(map)
    }
}

/// Barycentric frame of a cell: `inv · [p; 1]` gives the coordinates of `p`.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    inv: Matrix,
}

impl Frame {
    fn barycentric(&self, p: &[i64]) -> Vec<Rational> {
        self.inv
            .iter()
            .map(|row| {
                let last = row.last().expect("nonempty row").clone();
                row.iter().zip(p).map(|(c, &x)| c * BigInt::from(x)).sum::<Rational>() + last
            })
            .collect()
    }
}

pub(crate) fn frames(cells: &[Cell]) -> Result<Vec<Option<Frame>>> {
    Ok(cells
        .iter()
        .map(|c| {
            let k = c.vertices.len();
            let n = c.vertices[0].len();
            if k != n + 1 {
                return None;
            }
            let m: Matrix = (0..=n)
                .map(|r| {
                    c.vertices
                        .iter()
                        .map(|v| if r < n { int(v[r]) } else { int(1) })
                        .collect()
                })
                .collect();
            inverse(&m).map(|inv| Frame { inv })
        })
        .collect())
}

/// First `(cell, point)` where the affine interpolation of `heights` over the
/// cell fails to lie strictly above a lattice point outside the cell.
pub(crate) fn regularity_violation(
    cells: &[Cell],
    frames: &[Option<Frame>],
    points: &[LatticePoint],
    heights: &[Rational],
) -> Option<(usize, usize, Rational, Rational)> {
    let index: HashMap<&LatticePoint, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    cells.par_iter().enumerate().find_map_any(|(ci, cell)| {
        let Some(frame) = &frames[ci] else {
            return Some((ci, usize::MAX, Rational::zero(), Rational::zero()));
        };
        let vh: Vec<Rational> = cell.vertices.iter().map(|v| heights[index[v]].clone()).collect();
        // Row vector g with a_C(p) = g · [p; 1].
        let n = cell.vertices[0].len();
        let g: Vec<Rational> =
            (0..=n).map(|c| vh.iter().zip(&frame.inv).map(|(h, row)| h * &row[c]).sum()).collect();
        points.iter().enumerate().find_map(|(pi, p)| {
            if cell.vertices.contains(p) {
                return None;
            }
            let a: Rational = g[..n].iter().zip(p).map(|(c, &x)| c * BigInt::from(x)).sum::<Rational>() + &g[n];
            (a <= heights[pi]).then(|| (ci, pi, a, heights[pi].clone()))
        })
    })
}

fn bbox(pts: &[LatticePoint]) -> Vec<(i64, i64)> {
    (0..pts[0].len())
        .map(|c| {
            let lo = pts.iter().map(|p| p[c]).min().unwrap();
            let hi = pts.iter().map(|p| p[c]).max().unwrap();
            (lo, hi)
        })
        .collect()
}

fn in_box(b: &[(i64, i64)], p: &[i64]) -> bool {
    b.iter().zip(p).all(|(&(lo, hi), &x)| lo <= x && x <= hi)
}

fn boxes_meet(a: &[(i64, i64)], b: &[(i64, i64)]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.0 <= y.1 && y.0 <= x.1)
}

/// A point of `conv(a) ∩ conv(b)` that uses a vertex of `a` not in `b` with positive weight.
fn improper_meet(a: &[LatticePoint], b: &[LatticePoint]) -> Option<Vec<Rational>> {
    let (ka, kb) = (a.len(), b.len());
    let n = a[0].len();
    let dim = ka + kb;
    let mut cons = Vec::new();
    for j in 0..dim {
        let mut c = vec![int(0); dim];
        c[j] = int(1);
        cons.push(Constraint::new(c, Relation::Ge, int(0)));
    }
    let mut sa = vec![int(0); dim];
    sa[..ka].iter_mut().for_each(|x| *x = int(1));
    cons.push(Constraint::new(sa, Relation::Eq, int(1)));
    let mut sb = vec![int(0); dim];
    sb[ka..].iter_mut().for_each(|x| *x = int(1));
    cons.push(Constraint::new(sb, Relation::Eq, int(1)));
    for r in 0..n {
        let mut c: Vec<Rational> = a.iter().map(|v| int(v[r])).collect();
        c.extend(b.iter().map(|v| int(-v[r])));
        cons.push(Constraint::new(c, Relation::Eq, int(0)));
    }
    let mut own = vec![int(0); dim];
    for (j, v) in a.iter().enumerate() {
        if !b.contains(v) {
            own[j] = int(1);
        }
    }
    cons.push(Constraint::new(own, Relation::Gt, int(0)));
    let w = rational_feasible(dim, &cons).witness()?.to_vec();
    Some((0..n).map(|r| a.iter().zip(&w).map(|(v, l)| l * BigInt::from(v[r])).sum()).collect())
}

fn rationals_json(xs: &[Rational]) -> Value {
    json!(xs.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

/// Runs every check and collects counterexamples.
pub fn verify_triangulation(sub: &Subdivision) -> Result<VerifyReport> {
    let params = sub.params;
    let cells = &sub.cells;
    let n = params.n;
    let ab = build_delta(params)?;
    let delta_d = Polytope::convex_hull(&ab.delta_d)?;

    // Lattice points of δ_d from its hull, independently of the level description.
    let hull_box = bbox(delta_d.vertices());
    let mut points: Vec<LatticePoint> = hull_box
        .iter()
        .map(|&(lo, hi)| lo..=hi)
        .fold(vec![vec![]], |acc: Vec<Vec<i64>>, r| {
            acc.into_iter()
                .flat_map(|p| {
                    r.clone().map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect()
        })
        .into_iter()
        .filter(|p| delta_d.contains(p))
        .map(|p| p[1..].to_vec())
        .collect();
    points.sort();
    let mut by_level = lattice_points(&params);
    by_level.sort();

    let frames = frames(cells)?;
    let mut checks = Vec::new();

    // 1. Simplices whose only lattice points are their vertices.
    checks.push({
        let name = "simplices";
        let bad = cells.par_iter().enumerate().find_map_any(|(ci, c)| {
            if c.vertices.len() != n + 1 || affine_dim(&c.vertices) != n || frames[ci].is_none() {
                return Some(json!({"cell": ci, "reason": "not a full-dimensional simplex", "vertices": c.lifted(&params)}));
            }
            if let Some(v) = c.vertices.iter().find(|v| points.binary_search(v).is_err()) {
                return Some(json!({"cell": ci, "reason": "vertex outside the facet", "point": lift(&params, v)}));
            }
            let b = bbox(&c.vertices);
            let frame = frames[ci].as_ref().unwrap();
            points.iter().filter(|p| in_box(&b, p) && !c.vertices.contains(p)).find_map(|p| {
                frame
                    .barycentric(p)
                    .iter()
                    .all(|x| !x.is_negative())
                    .then(|| json!({"cell": ci, "reason": "extra lattice point", "point": lift(&params, p)}))
            })
        });
        match bad {
            None if points == by_level => CheckResult::pass(
                name,
                format!("{} cells are unimodular in their span; {} lattice points", cells.len(), points.len()),
            ),
            None => CheckResult::fail(
                name,
                "lattice points of the facet differ from the level description".into(),
                json!({"hull": points.len(), "levels": by_level.len()}),
            ),
            Some(c) => CheckResult::fail(name, "a cell is not an empty simplex".into(), c),
        }
    });

    // 2. Volumes.
    let target = ab.cone_d.normalized_volume();
    let vols: Vec<BigInt> = cells.iter().map(|c| c.cone_volume(&params)).collect();
    let total: BigInt = vols.iter().sum();
    let per_cell = BigInt::from(params.cell_volume());
    checks.push({
        let name = "volume";
        let count_ok = Rational::from_integer(BigInt::from(cells.len()) * &per_cell) == target;
        if Rational::from_integer(total.clone()) == target && count_ok {
            CheckResult::pass(name, format!("sum of cone volumes = {total} = {} cells × {per_cell}", cells.len()))
        } else {
            CheckResult::fail(
                name,
                format!("sum {total}, {} cells × {per_cell}, expected {target}", cells.len()),
                json!({"sum": total.to_string(), "expected": target.to_string()}),
            )
        }
    });
    checks.push({
        let name = "cell_volume";
        match vols.iter().position(|v| *v != per_cell) {
            None => CheckResult::pass(name, format!("every cone has normalized volume {per_cell}")),
            Some(ci) => CheckResult::fail(
                name,
                format!("cell {ci} has cone volume {}", vols[ci]),
                json!({"cell": ci, "vertices": cells[ci].lifted(&params), "volume": vols[ci].to_string()}),
            ),
        }
    });

    // 3. Face-to-face intersections.
    checks.push({
        let name = "face_to_face";
        let boxes: Vec<Vec<(i64, i64)>> = cells.iter().map(|c| bbox(&c.vertices)).collect();
        let pairs: Vec<(usize, usize)> = (0..cells.len())
            .flat_map(|a| ((a + 1)..cells.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| boxes_meet(&boxes[a], &boxes[b]))
            .collect();
        let bad = pairs.par_iter().find_map_any(|&(a, b)| {
            let (ca, cb) = (&cells[a].vertices, &cells[b].vertices);
            improper_meet(ca, cb).or_else(|| improper_meet(cb, ca)).map(|w| {
                json!({
                    "cells": [a, b],
                    "vertices": [cells[a].lifted(&params), cells[b].lifted(&params)],
                    "point": rationals_json(&w),
                })
            })
        });
        match bad {
            None => CheckResult::pass(name, format!("{} overlapping-box pairs meet in common faces", pairs.len())),
            Some(c) => CheckResult::fail(name, "two cells overlap outside a common face".into(), c),
        }
    });

    // 4. Regularity.
    checks.push({
        let name = "regularity";
        let heights: Vec<Rational> = by_level.iter().map(|v| sub.lifting.height(v)).collect();
        let mut facet_count: HashMap<Vec<LatticePoint>, usize> = HashMap::new();
        for c in cells {
            for skip in 0..c.vertices.len() {
                let mut f: Vec<LatticePoint> =
                    c.vertices.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, v)| v.clone()).collect();
                f.sort();
                *facet_count.entry(f).or_default() += 1;
            }
        }
        let on_boundary = |f: &[LatticePoint]| {
            let lifted: Vec<LatticePoint> = f.iter().map(|v| lift(&params, v)).collect();
            delta_d.facets().iter().any(|h| lifted.iter().all(|u| h.eval(u) == h.rhs))
        };
        let interior = facet_count.values().filter(|&&k| k == 2).count();
        let bad_facet = facet_count.iter().find(|(f, &k)| k > 2 || (k == 1 && !on_boundary(f)));
        if let Some((f, &k)) = bad_facet {
            let lifted: Vec<LatticePoint> = f.iter().map(|v| lift(&params, v)).collect();
            CheckResult::fail(name, format!("facet shared by {k} cells"), json!({"facet": lifted, "cells": k}))
        } else if let Some((ci, pi, a, h)) = regularity_violation(cells, &frames, &by_level, &heights) {
            let point = by_level.get(pi).map(|p| lift(&params, p));
            CheckResult::fail(
                name,
                format!("affine extension of cell {ci} is not strictly above the lifting"),
                json!({"cell": ci, "vertices": cells[ci].lifted(&params), "point": point,
                       "affine": a.to_string(), "height": h.to_string()}),
            )
        } else {
            CheckResult::pass(
                name,
                format!(
                    "lifting with W = {} is strictly concave across {interior} interior facets",
                    sub.lifting.weight
                ),
            )
        }
    });

    checks.push(check_hyperplanes(&params));
    checks.push(check_slabs(&params, &points));
    checks.push(check_grid_sides(sub));
    checks.push(check_wedge_sections(&params)?);
    Ok(VerifyReport { checks })
}

/// Each closed form vanishes on its generating points, which span a hyperplane.
fn check_hyperplanes(params: &ABParams) -> CheckResult {
    let name = "hyperplanes";
    let mut count = 0;
    for t in 1..=params.s() {
        let pieces = if t == 1 { 1 } else { params.n };
        let mut all: Vec<_> = (1..pieces).filter_map(|i| wedge_hyperplane(params, t, i).ok()).collect();
        for i in 0..pieces {
            all.extend(grid_hyperplanes(params, t, i));
        }
        for h in all {
            count += 1;
            let pts = generating_points(params, h.kind);
            let ok = match hyperplane_through(&pts) {
                Some((coeffs, rhs)) => same_hyperplane(&h.functional, &coeffs, &rhs),
                None => false,
            };
            if !ok {
                return CheckResult::fail(
                    name,
                    format!("{} is not the hyperplane through its generating points", h.kind.label()),
                    json!({"hyperplane": h.to_json(), "points": pts}),
                );
            }
        }
    }
    CheckResult::pass(name, format!("{count} wedge and grid hyperplanes match their generating points"))
}

/// Slab hyperplanes meet the facet exactly in the strata.
fn check_slabs(params: &ABParams, points: &[LatticePoint]) -> CheckResult {
    let name = "slab_hyperplanes";
    for h in slab_hyperplanes(params) {
        let HyperplaneKind::Slab { t } = h.kind else { unreachable!() };
        let mut on: Vec<LatticePoint> =
            points.iter().map(|p| lift(params, p)).filter(|u| h.functional.offset(u).is_zero()).collect();
        let mut want = strata(params, t).unwrap_or_default();
        on.sort();
        want.sort();
        if on != want {
            return CheckResult::fail(
                name,
                format!("{} meets the facet outside V_{t}", h.kind.label()),
                json!({"hyperplane": h.to_json(), "points": on}),
            );
        }
    }
    CheckResult::pass(name, format!("{} slab hyperplanes cut out the strata", params.s() - 1))
}

/// Cells of a piece lie on one side of each grid hyperplane of the piece, and distinct
/// unit-cell pairs are separated by one of them.
fn check_grid_sides(sub: &Subdivision) -> CheckResult {
    let name = "grid_sides";
    let params = &sub.params;
    let mut pieces: HashMap<(u64, usize), Vec<usize>> = HashMap::new();
    for (ci, c) in sub.cells.iter().enumerate() {
        pieces.entry((c.t, c.i)).or_default().push(ci);
    }
    let mut hyperplane_total = 0;
    for (&(t, i), members) in &pieces {
        let grid = grid_hyperplanes(params, t, i);
        hyperplane_total += grid.len();
        // sides[c][h] = sign of the cell against hyperplane h.
        let mut sides: Vec<Vec<i8>> = Vec::new();
        for &ci in members {
            let mut row = Vec::new();
            for h in &grid {
                let offs: Vec<Rational> = sub.cells[ci].vertices.iter().map(|v| h.functional.offset(v)).collect();
                let lo = offs.iter().any(|x| x.is_negative());
                let hi = offs.iter().any(|x| x.is_positive());
                if lo && hi {
                    return CheckResult::fail(
                        name,
                        format!("cell {ci} crosses {}", h.kind.label()),
                        json!({"cell": ci, "vertices": sub.cells[ci].lifted(params), "hyperplane": h.to_json()}),
                    );
                }
                row.push(if lo { -1 } else if hi { 1 } else { 0 });
            }
            sides.push(row);
        }
        for a in 0..members.len() {
            for b in (a + 1)..members.len() {
                let (ca, cb) = (&sub.cells[members[a]], &sub.cells[members[b]]);
                if (ca.alpha, ca.beta) == (cb.alpha, cb.beta) {
                    continue;
                }
                let separated = (0..grid.len()).any(|h| sides[a][h] * sides[b][h] < 0);
                if !separated {
                    return CheckResult::fail(
                        name,
                        format!("cells {} and {} of piece ({t},{i}) share a grid chamber", members[a], members[b]),
                        json!({"cells": [members[a], members[b]]}),
                    );
                }
            }
        }
    }
    CheckResult::pass(name, format!("{} pieces, {hyperplane_total} grid hyperplanes", pieces.len()))
}

/// The wedge hyperplane meets the slab exactly in `P(Γ_t^i, Λ_{t−1}^{n−i})`.
fn check_wedge_sections(params: &ABParams) -> Result<CheckResult> {
    let name = "wedge_sections";
    let n = params.n;
    let mut count = 0;
    for t in 2..=params.s() {
        let (lo, hi) = (level(params, t - 1), level(params, t));
        for i in 1..n {
            let h = wedge_hyperplane(params, t, i)?;
            let mut pts = super::gamma(params, t, i);
            pts.extend(super::lambda(params, t - 1, n - i));
            let q = Polytope::convex_hull(&pts)?;
            let mut slab = Vec::new();
            for k in 0..n {
                let mut c = vec![int(0); n];
                c[k] = int(1);
                slab.push(Constraint::new(c, Relation::Ge, int(0)));
            }
            slab.push(Constraint::new(vec![int(1); n], Relation::Ge, int(lo)));
            slab.push(Constraint::new(vec![int(1); n], Relation::Le, int(hi)));
            slab.push(Constraint::new(h.functional.coeffs.clone(), Relation::Eq, h.functional.rhs.clone()));
            let inside = pts.iter().all(|p| h.functional.offset(p).is_zero())
                && pts.iter().all(|p| p.iter().all(|&x| x >= 0) && (lo..=hi).contains(&p.iter().sum()));
            let spans = q.dim() + 1 == n;
            let mut escape = None;
            for f in q.facets() {
                let mut sys = slab.clone();
                sys.push(Constraint::new(f.normal.clone(), Relation::Gt, f.rhs.clone()));
                if let Some(w) = rational_feasible(n, &sys).witness() {
                    escape = Some(w.to_vec());
                    break;
                }
            }
            if !inside || !spans || escape.is_some() {
                return Ok(CheckResult::fail(
                    name,
                    format!("{} does not meet the slab exactly in P(Γ, Λ)", h.kind.label()),
                    json!({"hyperplane": h.to_json(), "point": escape.map(|w| rationals_json(&w))}),
                ));
            }
            count += 1;
        }
    }
    Ok(CheckResult::pass(name, format!("{count} wedge sections checked in both directions")))
}
