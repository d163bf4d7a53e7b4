//! Exact feasibility of small linear systems by Fourier–Motzkin elimination.
//!
//! Constraints are `a · x ≥ b`, `a · x > b` or `a · x = b` over the
//! rationals. Equalities are eliminated by substitution first; the remaining
//! inequalities are eliminated one variable at a time, keeping track of
//! strictness. A feasible point is recovered by back-substitution.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Ge,
    Gt,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rel: Rel,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, rel: Rel, rhs: Q) -> Self {
        Self { coeffs, rel, rhs }
    }

    pub fn holds(&self, x: &[Q]) -> bool {
        let lhs: Q = self.coeffs.iter().zip(x).map(|(a, b)| *a * *b).sum();
        match self.rel {
            Rel::Ge => lhs >= self.rhs,
            Rel::Gt => lhs > self.rhs,
            Rel::Eq => lhs == self.rhs,
        }
    }
}

type R = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Ineq {
    a: Vec<R>,
    b: R,
    strict: bool,
}

fn big(x: &Q) -> R {
    R::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

fn small(x: &R) -> Q {
    let n = x.numer().to_i64().expect("witness numerator fits in i64");
    let d = x.denom().to_i64().expect("witness denominator fits in i64");
    Q::new(n, d)
}

/// Scales an inequality so its leading nonzero coefficient has absolute
/// value one; keeps duplicate detection effective.
fn normalize(mut q: Ineq) -> Ineq {
    if let Some(p) = q.a.iter().find(|c| !c.is_zero()).cloned() {
        let s = p.abs();
        for c in q.a.iter_mut() {
            *c = &*c / &s;
        }
        q.b = &q.b / &s;
    }
    q
}

enum Step {
    /// `x_k = (rhs - Σ_{j≠k} a_j x_j) / a_k`
    Subst { k: usize, a: Vec<R>, rhs: R },
    /// Bounds on `x_k` expressed through the other variables.
    Bounds { k: usize, ineqs: Vec<Ineq> },
}

/// Returns a point satisfying every constraint, or `None` if the system is
/// infeasible.
pub fn feasible_point(nvars: usize, constraints: &[Constraint]) -> Option<Vec<Q>> {
    let mut eqs: Vec<(Vec<R>, R)> = Vec::new();
    let mut ineqs: Vec<Ineq> = Vec::new();
    for c in constraints {
        assert_eq!(c.coeffs.len(), nvars, "constraint arity");
        let a: Vec<R> = c.coeffs.iter().map(big).collect();
        let b = big(&c.rhs);
        match c.rel {
            Rel::Eq => eqs.push((a, b)),
            Rel::Ge => ineqs.push(Ineq { a, b, strict: false }),
            Rel::Gt => ineqs.push(Ineq { a, b, strict: true }),
        }
    }

    let mut steps: Vec<Step> = Vec::new();
    let mut eliminated = vec![false; nvars];

    // equalities
    while let Some((a, b)) = eqs.pop() {
        let Some(k) = (0..nvars).find(|&j| !a[j].is_zero()) else {
            if b.is_zero() {
                continue;
            }
            return None;
        };
        let ak = a[k].clone();
        let sub = |row: &mut Vec<R>, rhs: &mut R| {
            let f = &row[k] / &ak;
            if f.is_zero() {
                return;
            }
            for j in 0..nvars {
                let d = &f * &a[j];
                row[j] = &row[j] - d;
            }
            *rhs = &*rhs - &f * &b;
        };
        for (row, rhs) in eqs.iter_mut() {
            sub(row, rhs);
        }
        for q in ineqs.iter_mut() {
            sub(&mut q.a, &mut q.b);
        }
        eliminated[k] = true;
        steps.push(Step::Subst { k, a, rhs: b });
    }

    // inequalities
    for k in 0..nvars {
        if eliminated[k] {
            continue;
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for q in ineqs.drain(..) {
            if q.a[k].is_positive() {
                pos.push(q);
            } else if q.a[k].is_negative() {
                neg.push(q);
            } else {
                rest.push(q);
            }
        }
        for p in &pos {
            for n in &neg {
                // p.a[k] > 0, n.a[k] < 0: combine with positive weights
                let wp = -n.a[k].clone();
                let wn = p.a[k].clone();
                let a: Vec<R> = (0..nvars)
                    .map(|j| &wp * &p.a[j] + &wn * &n.a[j])
                    .collect();
                let b = &wp * &p.b + &wn * &n.b;
                rest.push(normalize(Ineq {
                    a,
                    b,
                    strict: p.strict || n.strict,
                }));
            }
        }
        rest.sort_by(|x, y| {
            x.a.cmp(&y.a)
                .then_with(|| x.b.cmp(&y.b))
                .then_with(|| x.strict.cmp(&y.strict))
        });
        rest.dedup();
        ineqs = rest;
        let mut bounds = pos;
        bounds.extend(neg);
        steps.push(Step::Bounds { k, ineqs: bounds });
    }

    // all variables gone: remaining constraints read 0 ≥ b or 0 > b
    for q in &ineqs {
        let ok = if q.strict {
            q.b.is_negative()
        } else {
            !q.b.is_positive()
        };
        if !ok {
            return None;
        }
    }

    let mut x: Vec<R> = vec![R::zero(); nvars];
    for step in steps.iter().rev() {
        match step {
            Step::Subst { k, a, rhs } => {
                let mut acc = rhs.clone();
                for j in 0..nvars {
                    if j != *k {
                        acc -= &a[j] * &x[j];
                    }
                }
                x[*k] = acc / &a[*k];
            }
            Step::Bounds { k, ineqs } => {
                let mut lower: Option<(R, bool)> = None;
                let mut upper: Option<(R, bool)> = None;
                for q in ineqs {
                    let mut rest = q.b.clone();
                    for j in 0..nvars {
                        if j != *k {
                            rest -= &q.a[j] * &x[j];
                        }
                    }
                    let v = rest / &q.a[*k];
                    if q.a[*k].is_positive() {
                        let better = match &lower {
                            None => true,
                            Some((l, s)) => v > *l || (v == *l && q.strict && !s),
                        };
                        if better {
                            lower = Some((v, q.strict));
                        }
                    } else {
                        let better = match &upper {
                            None => true,
                            Some((u, s)) => v < *u || (v == *u && q.strict && !s),
                        };
                        if better {
                            upper = Some((v, q.strict));
                        }
                    }
                }
                x[*k] = match (lower, upper) {
                    (None, None) => R::zero(),
                    (Some((l, s)), None) => {
                        if s {
                            l + R::one()
                        } else {
                            l
                        }
                    }
                    (None, Some((u, s))) => {
                        if s {
                            u - R::one()
                        } else {
                            u
                        }
                    }
                    (Some((l, _)), Some((u, _))) => {
                        if l == u {
                            l
                        } else {
                            (l + u) / R::from_integer(BigInt::from(2))
                        }
                    }
                };
            }
        }
    }
    let out: Vec<Q> = x.iter().map(small).collect();
    debug_assert!(constraints.iter().all(|c| c.holds(&out)));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn c(a: &[i64], rel: Rel, b: i64) -> Constraint {
        Constraint::new(a.iter().map(|&x| q(x)).collect(), rel, q(b))
    }

    #[test]
    fn open_interval_is_feasible() {
        let cs = [c(&[1], Rel::Gt, 0), c(&[-1], Rel::Gt, -1)];
        let x = feasible_point(1, &cs).unwrap();
        assert!(cs.iter().all(|k| k.holds(&x)));
    }

    #[test]
    fn strictness_detects_empty_interior() {
        let cs = [c(&[1], Rel::Gt, 0), c(&[-1], Rel::Ge, 0)];
        assert!(feasible_point(1, &cs).is_none());
        let closed = [c(&[1], Rel::Ge, 0), c(&[-1], Rel::Ge, 0)];
        assert_eq!(feasible_point(1, &closed), Some(vec![q(0)]));
    }

    #[test]
    fn equalities_and_triangle() {
        // x + y = 2, x > 0, y > 0, x - y >= 1
        let cs = [
            c(&[1, 1], Rel::Eq, 2),
            c(&[1, 0], Rel::Gt, 0),
            c(&[0, 1], Rel::Gt, 0),
            c(&[1, -1], Rel::Ge, 1),
        ];
        let x = feasible_point(2, &cs).unwrap();
        assert!(cs.iter().all(|k| k.holds(&x)), "{x:?}");
        let bad = [c(&[1, 1], Rel::Eq, 2), c(&[1, 0], Rel::Gt, 2), c(&[0, 1], Rel::Ge, 0)];
        assert!(feasible_point(2, &bad).is_none());
    }
}
