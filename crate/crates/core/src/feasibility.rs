//! Exact rational linear feasibility by Fourier–Motzkin elimination.
//!
//! Systems here are tiny (at most a handful of variables after equality
//! substitution), so plain elimination with duplicate pruning is enough.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Lt,
    Eq,
    Ge,
    Gt,
}

/// `coeffs · x  (rel)  rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub rel: Relation,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rel: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, rhs, rel }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.rel {
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Gt => lhs > self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            Feasibility::Feasible(w) => Some(w),
            Feasibility::Infeasible => None,
        }
    }
}

/// `coeffs · x <= rhs`, or `<` when `strict`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Ineq {
    coeffs: Vec<Rational>,
    rhs: Rational,
    strict: bool,
}

impl Ineq {
    /// Scale so the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).cloned() {
            let s = Rational::one() / lead.abs();
            for c in self.coeffs.iter_mut() {
                *c *= &s;
            }
            self.rhs *= &s;
        }
        self
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn constant_ok(&self) -> bool {
        if self.strict {
            Rational::zero() < self.rhs
        } else {
            Rational::zero() <= self.rhs
        }
    }
}

/// One solved equality: `x[var] = (rhs - Σ_{k≠var} coeffs[k] x[k]) / coeffs[var]`.
struct Substitution {
    var: usize,
    coeffs: Vec<Rational>,
    rhs: Rational,
}

/// Decides feasibility of a system over `Q^dim`, returning a witness point when feasible.
pub fn rational_feasible(dim: usize, constraints: &[Constraint]) -> Feasibility {
    let mut equalities = Vec::new();
    let mut ineqs = Vec::new();
    for c in constraints {
        assert_eq!(c.coeffs.len(), dim, "constraint length does not match dimension");
        match c.rel {
            Relation::Eq => equalities.push((c.coeffs.clone(), c.rhs.clone())),
            Relation::Le | Relation::Lt => ineqs.push(Ineq {
                coeffs: c.coeffs.clone(),
                rhs: c.rhs.clone(),
                strict: c.rel == Relation::Lt,
            }),
            Relation::Ge | Relation::Gt => ineqs.push(Ineq {
                coeffs: c.coeffs.iter().map(|x| -x).collect(),
                rhs: -c.rhs.clone(),
                strict: c.rel == Relation::Gt,
            }),
        }
    }

    // Gaussian substitution of equalities.
    let mut subs: Vec<Substitution> = Vec::new();
    while let Some((coeffs, rhs)) = equalities.pop() {
        let Some(var) = coeffs.iter().position(|c| !c.is_zero()) else {
            if !rhs.is_zero() {
                return Feasibility::Infeasible;
            }
            continue;
        };
        let sub = Substitution { var, coeffs, rhs };
        for (c, r) in equalities.iter_mut() {
            substitute(c, r, &sub);
        }
        for q in ineqs.iter_mut() {
            substitute(&mut q.coeffs, &mut q.rhs, &sub);
        }
        subs.push(sub);
    }

    let eliminated: HashSet<usize> = subs.iter().map(|s| s.var).collect();
    let order: Vec<usize> = (0..dim).filter(|v| !eliminated.contains(v)).collect();

    let mut stages: Vec<Vec<Ineq>> = Vec::with_capacity(order.len());
    let mut current = match prune(ineqs) {
        Some(s) => s,
        None => return Feasibility::Infeasible,
    };
    for &var in &order {
        stages.push(current.clone());
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for q in current {
            if q.coeffs[var].is_positive() {
                pos.push(q);
            } else if q.coeffs[var].is_negative() {
                neg.push(q);
            } else {
                rest.push(q);
            }
        }
        for p in &pos {
            for n in &neg {
                let sp = Rational::one() / &p.coeffs[var];
                let sn = Rational::one() / n.coeffs[var].abs();
                let coeffs: Vec<Rational> = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(a, b)| a * &sp + b * &sn)
                    .collect();
                rest.push(Ineq {
                    coeffs,
                    rhs: &p.rhs * &sp + &n.rhs * &sn,
                    strict: p.strict || n.strict,
                });
            }
        }
        current = match prune(rest) {
            Some(s) => s,
            None => return Feasibility::Infeasible,
        };
    }

    let mut x = vec![Rational::zero(); dim];
    for (stage, &var) in stages.iter().zip(&order).rev() {
        x[var] = pick_value(stage, var, &x);
    }
    for sub in subs.iter().rev() {
        let rest: Rational = sub
            .coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != sub.var)
            .map(|(k, c)| c * &x[k])
            .sum();
        x[sub.var] = (&sub.rhs - rest) / &sub.coeffs[sub.var];
    }
    debug_assert!(constraints.iter().all(|c| c.holds(&x)), "witness fails the system");
    Feasibility::Feasible(x)
}

fn substitute(coeffs: &mut [Rational], rhs: &mut Rational, sub: &Substitution) {
    let a = coeffs[sub.var].clone();
    if a.is_zero() {
        return;
    }
    let f = a / &sub.coeffs[sub.var];
    for (k, c) in coeffs.iter_mut().enumerate() {
        if k == sub.var {
            *c = Rational::zero();
        } else {
            *c -= &f * &sub.coeffs[k];
        }
    }
    *rhs -= &f * &sub.rhs;
}

/// Drops constant rows (failing on a violated one) and duplicates.
fn prune(ineqs: Vec<Ineq>) -> Option<Vec<Ineq>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for q in ineqs {
        if q.is_constant() {
            if !q.constant_ok() {
                return None;
            }
            continue;
        }
        let q = q.normalized();
        if seen.insert(q.clone()) {
            out.push(q);
        }
    }
    Some(out)
}

/// Chooses a value for `var` given all later variables already fixed in `x`.
fn pick_value(stage: &[Ineq], var: usize, x: &[Rational]) -> Rational {
    let mut lo: Option<(Rational, bool)> = None;
    let mut hi: Option<(Rational, bool)> = None;
    for q in stage {
        let a = &q.coeffs[var];
        if a.is_zero() {
            continue;
        }
        let rest: Rational = q
            .coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != var)
            .map(|(k, c)| c * &x[k])
            .sum();
        let bound = (&q.rhs - rest) / a;
        if a.is_positive() {
            let tighter = match &hi {
                None => true,
                Some((h, s)) => bound < *h || (bound == *h && q.strict && !s),
            };
            if tighter {
                hi = Some((bound, q.strict));
            }
        } else {
            let tighter = match &lo {
                None => true,
                Some((l, s)) => bound > *l || (bound == *l && q.strict && !s),
            };
            if tighter {
                lo = Some((bound, q.strict));
            }
        }
    }
    match (lo, hi) {
        (None, None) => Rational::zero(),
        (Some((l, s)), None) => {
            if s {
                l + Rational::one()
            } else {
                l
            }
        }
        (None, Some((h, s))) => {
            if s {
                h - Rational::one()
            } else {
                h
            }
        }
        (Some((l, _)), Some((h, _))) => {
            if l == h {
                l
            } else {
                (l + h) / Rational::from_integer(2.into())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn c(coeffs: &[i64], rel: Relation, rhs: Rational) -> Constraint {
        Constraint::new(coeffs.iter().map(|&x| int(x)).collect(), rel, rhs)
    }

    #[test]
    fn unit_interval_is_feasible() {
        let sys = [c(&[1], Relation::Ge, int(0)), c(&[1], Relation::Le, int(1))];
        let w = rational_feasible(1, &sys);
        let x = w.witness().unwrap();
        assert!(x[0] >= int(0) && x[0] <= int(1));
    }

    #[test]
    fn crossed_bounds_are_infeasible() {
        let sys = [c(&[1], Relation::Ge, int(1)), c(&[1], Relation::Le, int(0))];
        assert_eq!(rational_feasible(1, &sys), Feasibility::Infeasible);
    }

    #[test]
    fn strictness_is_respected() {
        let touching = [c(&[1], Relation::Ge, int(1)), c(&[1], Relation::Le, int(1))];
        assert!(rational_feasible(1, &touching).is_feasible());
        let open = [c(&[1], Relation::Gt, int(1)), c(&[1], Relation::Le, int(1))];
        assert!(!rational_feasible(1, &open).is_feasible());
    }

    #[test]
    fn equalities_and_triangle() {
        // x + y = 1, x >= 0, y >= 0, x - y > 1/2
        let sys = [
            c(&[1, 1], Relation::Eq, int(1)),
            c(&[1, 0], Relation::Ge, int(0)),
            c(&[0, 1], Relation::Ge, int(0)),
            c(&[1, -1], Relation::Gt, frac(1, 2)),
        ];
        let w = rational_feasible(2, &sys);
        let x = w.witness().unwrap();
        assert!(sys.iter().all(|k| k.holds(x)));
        let sys2 = [
            c(&[1, 1], Relation::Eq, int(1)),
            c(&[1, 0], Relation::Ge, int(0)),
            c(&[0, 1], Relation::Ge, int(0)),
            c(&[1, -1], Relation::Gt, int(1)),
        ];
        assert!(!rational_feasible(2, &sys2).is_feasible());
    }

    #[test]
    fn scaled_membership_in_small_triangle() {
        // (-1,1)/c in conv{(-1,0),(1,0),(1,2)} with c = 3/2: lambdas over the three vertices.
        let c32 = frac(3, 2);
        let target = [frac(-1, 1) / &c32, int(1) / &c32];
        let verts = [[-1i64, 0], [1, 0], [1, 2]];
        let mut sys = Vec::new();
        for coord in 0..2 {
            sys.push(Constraint::new(
                verts.iter().map(|v| int(v[coord])).collect(),
                Relation::Eq,
                target[coord].clone(),
            ));
        }
        sys.push(c(&[1, 1, 1], Relation::Eq, int(1)));
        for i in 0..3 {
            let mut e = vec![0; 3];
            e[i] = 1;
            sys.push(c(&e, Relation::Ge, int(0)));
        }
        assert!(!rational_feasible(3, &sys).is_feasible());
    }
}
