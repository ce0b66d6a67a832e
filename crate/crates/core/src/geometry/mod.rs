//! Lattice polytopes in small dimension: hulls, facets, faces, weights and volumes.

pub mod graph;
pub mod hodge;
pub mod linalg;

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{lattice_index, IntMatrix};
use crate::rational::{common_denominator, Extended, Rational};
use linalg::{dot_int, nullspace, rank, to_rational_rows};

pub use graph::ConvexGraph;
pub use hodge::{hodge_data, HodgeData};

pub type LatticePoint = Vec<i64>;

pub const MAX_DIM: usize = 6;

/// Supporting inequality `normal · x <= rhs`.
///
/// `rhs` is `1` when the origin lies strictly inside the half-space, `-1`
/// when it lies strictly outside, and `0` when the hyperplane passes through
/// the origin, in which case `normal` is a primitive integer vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Facet {
    pub normal: Vec<Rational>,
    pub rhs: Rational,
    /// Indices into the owning polytope's vertex list.
    pub vertices: Vec<usize>,
}

impl Facet {
    pub fn contains_origin(&self) -> bool {
        self.rhs.is_zero()
    }

    pub fn eval(&self, u: &[i64]) -> Rational {
        dot_int(&self.normal, u)
    }

    /// Denominator of the facet form: lcm of the denominators of its coefficients.
    pub fn denominator(&self) -> BigInt {
        common_denominator(&self.normal)
    }
}

/// A face, given by the vertices it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub dim: usize,
    /// Facets of the polytope containing this face.
    pub facets: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    ambient: usize,
    vertices: Vec<LatticePoint>,
    facets: Vec<Facet>,
    /// Equations `normal · x = rhs` of the affine span; empty when full-dimensional.
    span: Vec<(Vec<Rational>, Rational)>,
    dim: usize,
}

impl Polytope {
    /// Convex hull of a nonempty point set in dimension at most [`MAX_DIM`].
    pub fn convex_hull(points: &[LatticePoint]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidInput("empty point set".into()));
        };
        let m = first.len();
        if m == 0 || m > MAX_DIM {
            return Err(Error::InvalidInput(format!("dimension {m} outside 1..={MAX_DIM}")));
        }
        if let Some(bad) = points.iter().find(|p| p.len() != m) {
            return Err(Error::InvalidInput(format!(
                "point {bad:?} does not have {m} coordinates"
            )));
        }
        let pts: Vec<LatticePoint> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let dim = linalg::affine_dim(&pts);

        if dim == m {
            let (vertices, facets) = full_hull(&pts);
            return Ok(Polytope { ambient: m, vertices, facets, span: Vec::new(), dim });
        }

        let base = &pts[0];
        let diffs: Vec<Vec<i64>> = pts.iter().map(|p| sub(p, base)).collect();
        let diffs_q = to_rational_rows(&diffs);
        let span: Vec<(Vec<Rational>, Rational)> = nullspace(&diffs_q, m)
            .into_iter()
            .map(|n| {
                let rhs = dot_int(&n, base);
                (n, rhs)
            })
            .collect();

        if dim == 0 {
            return Ok(Polytope { ambient: m, vertices: pts, facets: Vec::new(), span, dim });
        }

        // Project onto `dim` coordinates on which the span maps injectively.
        let coords = (0..m)
            .combinations(dim)
            .find(|cs| {
                let proj: Vec<Vec<i64>> = diffs.iter().map(|d| cs.iter().map(|&c| d[c]).collect()).collect();
                rank(&to_rational_rows(&proj)) == dim
            })
            .expect("a coordinate projection of full rank exists");
        let projected: Vec<LatticePoint> =
            pts.iter().map(|p| coords.iter().map(|&c| p[c]).collect()).collect();
        let (pverts, pfacets) = full_hull(&projected);
        let vertices: Vec<LatticePoint> = pverts
            .iter()
            .map(|pv| pts[projected.iter().position(|q| q == pv).unwrap()].clone())
            .collect();
        let facets = pfacets
            .into_iter()
            .map(|f| {
                let mut normal = vec![Rational::zero(); m];
                for (k, &c) in coords.iter().enumerate() {
                    normal[c] = f.normal[k].clone();
                }
                Facet { normal, rhs: f.rhs, vertices: f.vertices }
            })
            .collect();
        Ok(Polytope { ambient: m, vertices, facets, span, dim })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Equations of the affine span (empty for full-dimensional polytopes).
    pub fn span_equations(&self) -> &[(Vec<Rational>, Rational)] {
        &self.span
    }

    pub fn contains(&self, u: &[i64]) -> bool {
        self.span.iter().all(|(n, r)| dot_int(n, u) == *r)
            && self.facets.iter().all(|f| f.eval(u) <= f.rhs)
    }

    pub fn contains_origin(&self) -> bool {
        self.contains(&vec![0; self.ambient])
    }

    /// Smallest `c >= 0` with `u ∈ c·Δ`, or infinite outside the cone over Δ.
    pub fn weight(&self, u: &[i64]) -> Result<Extended> {
        self.require_origin()?;
        if self.span.iter().any(|(n, _)| !dot_int(n, u).is_zero()) {
            return Ok(Extended::Infinite);
        }
        let mut w = Rational::zero();
        for f in &self.facets {
            let v = f.eval(u);
            if f.contains_origin() {
                if v.is_positive() {
                    return Ok(Extended::Infinite);
                }
            } else if v > w {
                w = v;
            }
        }
        Ok(Extended::Finite(w))
    }

    /// lcm of the facet-form denominators over facets avoiding the origin.
    pub fn denominator(&self) -> Result<u64> {
        self.require_origin()?;
        let d = self
            .facets
            .iter()
            .filter(|f| !f.contains_origin())
            .fold(BigInt::one(), |acc, f| acc.lcm(&f.denominator()));
        u64::try_from(&d).map_err(|_| Error::Unsupported(format!("denominator {d} too large")))
    }

    fn require_origin(&self) -> Result<()> {
        if self.contains_origin() {
            Ok(())
        } else {
            Err(Error::InvalidInput("the origin is not in the polytope".into()))
        }
    }

    /// All nonempty faces, including the polytope itself, ordered by dimension.
    pub fn faces(&self) -> Vec<Face> {
        let mut sets: BTreeSet<Vec<usize>> = self.facets.iter().map(|f| f.vertices.clone()).collect();
        let mut frontier: Vec<Vec<usize>> = sets.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for f in &self.facets {
                    let meet: Vec<usize> = a.iter().copied().filter(|v| f.vertices.contains(v)).collect();
                    if !meet.is_empty() && sets.insert(meet.clone()) {
                        next.push(meet);
                    }
                }
            }
            frontier = next;
        }
        sets.insert((0..self.vertices.len()).collect());
        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|vs| {
                let pts: Vec<LatticePoint> = vs.iter().map(|&i| self.vertices[i].clone()).collect();
                let facets = self
                    .facets
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| vs.iter().all(|v| f.vertices.contains(v)))
                    .map(|(i, _)| i)
                    .collect();
                Face { dim: linalg::affine_dim(&pts), vertices: vs, facets }
            })
            .collect();
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));
        faces
    }

    /// Whether a face contains the origin (for polytopes that contain it).
    pub fn face_contains_origin(&self, face: &Face) -> bool {
        self.contains_origin() && face.facets.iter().all(|&i| self.facets[i].contains_origin())
    }

    pub fn face_points(&self, face: &Face) -> Vec<LatticePoint> {
        face.vertices.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    /// Simplices of a pulling triangulation, as vertex index lists.
    ///
    /// Each face is coned from its lexicographically smallest vertex over the
    /// triangulations of its facets that avoid that vertex.
    pub fn pulling_triangulation(&self) -> Vec<Vec<usize>> {
        let faces = self.faces();
        let top = faces.len() - 1;
        self.pull(&faces, top)
    }

    fn pull(&self, faces: &[Face], idx: usize) -> Vec<Vec<usize>> {
        let face = &faces[idx];
        if face.dim == 0 {
            return vec![face.vertices.clone()];
        }
        let apex = *face
            .vertices
            .iter()
            .min_by(|&&a, &&b| self.vertices[a].cmp(&self.vertices[b]))
            .unwrap();
        let mut out = Vec::new();
        for (j, g) in faces.iter().enumerate() {
            if g.dim + 1 == face.dim
                && !g.vertices.contains(&apex)
                && g.vertices.iter().all(|v| face.vertices.contains(v))
            {
                for mut s in self.pull(faces, j) {
                    s.push(apex);
                    out.push(s);
                }
            }
        }
        out
    }

    /// Lattice-normalized volume `dim! · Vol`, relative to the lattice of the affine span.
    pub fn normalized_volume(&self) -> Rational {
        self.pulling_triangulation()
            .iter()
            .map(|s| {
                let pts: Vec<LatticePoint> = s.iter().map(|&i| self.vertices[i].clone()).collect();
                Rational::from_integer(simplex_volume(&pts))
            })
            .sum()
    }

    /// Lattice points in the box spanned by `scale · vertices`.
    pub fn bounding_box(&self, scale: i64) -> Vec<(i64, i64)> {
        (0..self.ambient)
            .map(|c| {
                let lo = self.vertices.iter().map(|v| v[c]).min().unwrap();
                let hi = self.vertices.iter().map(|v| v[c]).max().unwrap();
                (scale * lo.min(0), scale * hi.max(0))
            })
            .collect()
    }

    /// Text format: the first line is `m`, each further line is a vertex.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let m: usize = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty polytope file".into()))?
            .parse()
            .map_err(|e| Error::InvalidInput(format!("bad dimension line: {e}")))?;
        let mut pts = Vec::new();
        for line in lines {
            let p: LatticePoint = line
                .split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|e| Error::InvalidInput(format!("bad coordinate {t:?}: {e}"))))
                .collect::<Result<_>>()?;
            if p.len() != m {
                return Err(Error::InvalidInput(format!("vertex {p:?} does not have {m} coordinates")));
            }
            pts.push(p);
        }
        Self::convex_hull(&pts)
    }
}

/// Normalized volume of a lattice simplex relative to the lattice of its span.
pub fn simplex_volume(points: &[LatticePoint]) -> BigInt {
    if points.len() <= 1 {
        return BigInt::one();
    }
    let base = &points[0];
    let edges: Vec<Vec<i64>> = points[1..].iter().map(|p| sub(p, base)).collect();
    let m = IntMatrix::from_columns(&edges);
    if m.is_square() {
        m.determinant().expect("square").abs()
    } else {
        lattice_index(&m)
    }
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Facet enumeration over all `m`-subsets of a full-dimensional point set.
fn full_hull(pts: &[LatticePoint]) -> (Vec<LatticePoint>, Vec<Facet>) {
    let m = pts[0].len();
    let mut seen: HashSet<(Vec<Rational>, Rational)> = HashSet::new();
    let mut forms: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for subset in (0..pts.len()).combinations(m) {
        let base = &pts[subset[0]];
        let diffs: Vec<Vec<i64>> = subset[1..].iter().map(|&i| sub(&pts[i], base)).collect();
        let ns = if diffs.is_empty() {
            vec![vec![Rational::one()]]
        } else {
            nullspace(&to_rational_rows(&diffs), m)
        };
        if ns.len() != 1 {
            continue;
        }
        let normal = primitive(&ns[0]);
        let c = dot_int(&normal, base);
        let (mut below, mut above) = (false, false);
        for p in pts {
            let v = dot_int(&normal, p);
            if v < c {
                below = true;
            } else if v > c {
                above = true;
            }
        }
        if below && above {
            continue;
        }
        let (normal, c) = if above {
            (normal.iter().map(|x| -x).collect::<Vec<_>>(), -c)
        } else {
            (normal, c)
        };
        let form = if c.is_zero() {
            (normal, c)
        } else {
            let s = c.abs();
            (normal.iter().map(|x| x / &s).collect(), c / s)
        };
        if seen.insert(form.clone()) {
            forms.push(form);
        }
    }

    let on: Vec<Vec<usize>> = forms
        .iter()
        .map(|(n, r)| (0..pts.len()).filter(|&i| dot_int(n, &pts[i]) == *r).collect())
        .collect();
    // A point is a vertex iff the normals of the facets through it have rank m.
    let vertex_ids: Vec<usize> = (0..pts.len())
        .filter(|&i| {
            let normals: Vec<Vec<Rational>> = forms
                .iter()
                .zip(&on)
                .filter(|(_, o)| o.contains(&i))
                .map(|((n, _), _)| n.clone())
                .collect();
            rank(&normals) == m
        })
        .collect();
    let vertices: Vec<LatticePoint> = vertex_ids.iter().map(|&i| pts[i].clone()).collect();
    let mut facets: Vec<Facet> = forms
        .into_iter()
        .zip(on)
        .map(|((normal, rhs), o)| Facet {
            normal,
            rhs,
            vertices: o
                .iter()
                .filter_map(|i| vertex_ids.iter().position(|v| v == i))
                .collect(),
        })
        .collect();
    facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    (vertices, facets)
}

/// Scales a nonzero rational vector to a primitive integer vector (sign kept).
fn primitive(v: &[Rational]) -> Vec<Rational> {
    let den = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn tri() -> Polytope {
        Polytope::convex_hull(&[vec![0, 0], vec![-1, 0], vec![1, 0], vec![1, 2]]).unwrap()
    }

    #[test]
    fn triangle_hull_and_facets() {
        let p = tri();
        let mut vs = p.vertices().to_vec();
        vs.sort();
        assert_eq!(vs, vec![vec![-1, 0], vec![1, 0], vec![1, 2]]);
        let mut forms: Vec<(Vec<Rational>, Rational)> =
            p.facets().iter().map(|f| (f.normal.clone(), f.rhs.clone())).collect();
        forms.sort();
        assert_eq!(
            forms,
            vec![
                (vec![int(-1), int(1)], int(1)),
                (vec![int(0), int(-1)], int(0)),
                (vec![int(1), int(0)], int(1)),
            ]
        );
    }

    #[test]
    fn weights_on_triangle() {
        let p = tri();
        assert_eq!(p.weight(&[0, 0]).unwrap(), Extended::Finite(int(0)));
        assert_eq!(p.weight(&[-1, 1]).unwrap(), Extended::Finite(int(2)));
        assert_eq!(p.weight(&[0, -1]).unwrap(), Extended::Infinite);
        assert_eq!(p.denominator().unwrap(), 1);
        assert_eq!(p.normalized_volume(), int(4));
    }

    #[test]
    fn segment_and_unit_simplices() {
        let seg = Polytope::convex_hull(&[vec![0], vec![2]]).unwrap();
        assert_eq!(seg.weight(&[1]).unwrap(), Extended::Finite(frac(1, 2)));
        assert_eq!(seg.denominator().unwrap(), 2);
        assert_eq!(seg.normalized_volume(), int(2));
        let s3 = Polytope::convex_hull(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(s3.normalized_volume(), int(1));
        assert_eq!(s3.faces().len(), 15);
    }

    #[test]
    fn degenerate_segment_in_plane() {
        let seg = Polytope::convex_hull(&[vec![-1, 0], vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(seg.dim(), 1);
        assert_eq!(seg.vertices().len(), 2);
        assert_eq!(seg.normalized_volume(), int(2));
        assert!(seg.contains(&[0, 1]));
        assert!(!seg.contains(&[0, 0]));
    }

    #[test]
    fn interior_points_are_dropped() {
        let sq = Polytope::convex_hull(&[
            vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2], vec![1, 1], vec![1, 0],
        ])
        .unwrap();
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.facets().len(), 4);
        assert_eq!(sq.normalized_volume(), int(8));
    }

    #[test]
    fn parse_text_format() {
        let p = Polytope::parse("1\n0\n2\n").unwrap();
        assert_eq!(p.normalized_volume(), int(2));
        assert!(Polytope::parse("2\n0 0\n1\n").is_err());
    }
}
