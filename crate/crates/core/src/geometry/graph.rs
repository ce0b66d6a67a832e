use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{rational_from_json, rational_json, Rational};

/// Lower convex polygon through `(0, 0)` with integer abscissae.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexGraph {
    points: Vec<(u64, Rational)>,
}

impl ConvexGraph {
    /// Lower convex hull of a finite point set.
    ///
    /// For repeated abscissae only the lowest ordinate is kept.
    pub fn lower_hull(mut pts: Vec<(u64, Rational)>) -> Self {
        pts.sort();
        pts.dedup_by(|b, a| a.0 == b.0);
        let mut hull: Vec<(u64, Rational)> = Vec::with_capacity(pts.len());
        for p in pts {
            while hull.len() >= 2 {
                let (x1, y1) = &hull[hull.len() - 2];
                let (x2, y2) = &hull[hull.len() - 1];
                // Drop the middle point unless the turn is strictly convex.
                let lhs = (y2 - y1) * Rational::from_integer((p.0 - x2).into());
                let rhs = (&p.1 - y2) * Rational::from_integer((x2 - x1).into());
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        ConvexGraph { points: hull }
    }

    /// Takes vertices as given after checking the graph invariants.
    pub fn from_vertices(points: Vec<(u64, Rational)>) -> Result<Self> {
        let g = ConvexGraph { points };
        g.validate()?;
        Ok(g)
    }

    pub fn points(&self) -> &[(u64, Rational)] {
        &self.points
    }

    pub fn last_x(&self) -> u64 {
        self.points.last().map_or(0, |p| p.0)
    }

    pub fn last_y(&self) -> Rational {
        self.points.last().map_or_else(Rational::zero, |p| p.1.clone())
    }

    /// Value of the piecewise-linear graph at `x`, if inside its domain.
    pub fn eval(&self, x: u64) -> Option<Rational> {
        let i = self.points.iter().position(|p| p.0 >= x)?;
        let (x2, y2) = &self.points[i];
        if *x2 == x {
            return Some(y2.clone());
        }
        let (x1, y1) = &self.points[i.checked_sub(1)?];
        let t = Rational::new((x - x1).into(), (x2 - x1).into());
        Some(y1 + (y2 - y1) * t)
    }

    /// Slopes of consecutive segments.
    pub fn slopes(&self) -> Vec<Rational> {
        self.points
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / Rational::from_integer((w[1].0 - w[0].0).into()))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        match self.points.first() {
            Some((0, y)) if y.is_zero() => {}
            _ => return Err(Error::InvalidInput("polygon must start at (0,0)".into())),
        }
        if self.points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidInput("abscissae must increase strictly".into()));
        }
        if self.slopes().windows(2).any(|s| s[0] > s[1]) {
            return Err(Error::InvalidInput("slopes must be nondecreasing".into()));
        }
        Ok(())
    }

    /// `[[x, [num, den]], ...]`
    pub fn to_json(&self) -> Value {
        Value::Array(self.points.iter().map(|(x, y)| json!([x, rational_json(y)])).collect())
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let pts = v
            .as_array()?
            .iter()
            .map(|p| {
                let pair = p.as_array()?;
                Some((pair.first()?.as_u64()?, rational_from_json(pair.get(1)?)?))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(ConvexGraph { points: pts })
    }

    /// CSV rows `x,num,den` with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,num,den\n");
        for (x, y) in &self.points {
            s.push_str(&format!("{x},{},{}\n", y.numer(), y.denom()));
        }
        s
    }
}

impl fmt::Display for ConvexGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(|(x, y)| format!("({x},{y})")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
