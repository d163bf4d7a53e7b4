//! Dominance, cone membership and the Langlands decomposition of `ǎ_0`.
//!
//! Functionals on `ǎ_0` are given in the fundamental-weight coordinates of
//! the reduced restricted root system, so coordinate `i` is `⟨ν, α_i∨⟩`.
//! A standard parabolic is named by the simple restricted roots of its Levi:
//! the empty set is `P_0` and the full set is `G`.

use num_traits::{Signed, Zero};

use crate::fm::{feasible_point, Constraint, Rel};
use crate::linalg;
use crate::realform::{RealForm, RestrictedRootSystem};
use crate::rootsys::{ParabolicSubset, RationalFunctional};
use crate::{Error, Result, Q};

/// `⟨ν, α∨⟩ ≥ 0` on every restricted root of the nilradical of the real
/// parabolic with Levi `s`. `nu` lists coordinates on `ǎ_P` against the
/// fundamental weights `ω_j`, `j ∉ s`, in increasing `j`.
pub fn is_dominant(f: &RealForm, s: &ParabolicSubset, nu: &[Q]) -> Result<bool> {
    let rs = f.restricted_root_system()?;
    let outside: Vec<usize> = (0..rs.rank()).filter(|&j| !s.contains(j)).collect();
    if nu.len() != outside.len() {
        return Err(Error::Dimension {
            expected: outside.len(),
            got: nu.len(),
        });
    }
    let mut full = vec![Q::zero(); rs.rank()];
    for (&j, &v) in outside.iter().zip(nu) {
        full[j] = v;
    }
    let nu = RationalFunctional::new(full);
    let sys = &rs.reduced;
    let (_, nil) = sys.parabolic_split(s);
    Ok(nil.iter().all(|&i| !sys.pair_index(&nu, i).is_negative()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// `x = Σ c_i g_i` with every `c_i ≥ 0`.
    Inside { coefficients: Vec<Q> },
    /// `y · g_i ≥ 0` for every generator and `y · x < 0`.
    Outside { certificate: Vec<Q> },
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside { .. })
    }
}

/// Exact membership of `x` in the closed convex cone spanned by `generators`
/// (plain coordinate dot product).
pub fn cone_membership(x: &[Q], generators: &[Vec<Q>]) -> Result<Membership> {
    let d = x.len();
    if let Some(g) = generators.iter().find(|g| g.len() != d) {
        return Err(Error::Dimension {
            expected: d,
            got: g.len(),
        });
    }
    let k = generators.len();
    let mut cs = Vec::with_capacity(d + k);
    for row in 0..d {
        let coeffs = generators.iter().map(|g| g[row]).collect();
        cs.push(Constraint::new(coeffs, Rel::Eq, x[row]));
    }
    for i in 0..k {
        let mut e = vec![Q::zero(); k];
        e[i] = Q::from(1);
        cs.push(Constraint::new(e, Rel::Ge, Q::zero()));
    }
    if let Some(c) = feasible_point(k, &cs) {
        return Ok(Membership::Inside { coefficients: c });
    }
    // Farkas: a hyperplane with the cone on one side and x strictly on the other
    let mut dual: Vec<Constraint> = generators
        .iter()
        .map(|g| Constraint::new(g.clone(), Rel::Ge, Q::zero()))
        .collect();
    dual.push(Constraint::new(x.iter().map(|v| -*v).collect(), Rel::Gt, Q::zero()));
    let y = feasible_point(d, &dual)
        .ok_or_else(|| Error::Invariant("cone membership: neither primal nor dual feasible".into()))?;
    Ok(Membership::Outside { certificate: y })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeDecomposition {
    pub parabolic: ParabolicSubset,
    /// `ν_+`, which vanishes on the coroots of the Levi.
    pub nu_plus: RationalFunctional,
    /// `ν_+ − ν`, in the closed cone spanned by the Levi's simple roots.
    pub cone_part: RationalFunctional,
    /// Coefficients of `cone_part` on the simple roots of the Levi, in
    /// increasing index order.
    pub coefficients: Vec<Q>,
}

/// Splits `ν` as `ν_P + ν^P` with `ν_P` killing the coroots in `s` and `ν^P`
/// in the span of the simple roots in `s`. Returns `ν_P` and the
/// coefficients of `ν^P` on those simple roots.
fn split(rs: &RestrictedRootSystem, s: &[usize], nu: &RationalFunctional) -> Result<(RationalFunctional, Vec<Q>)> {
    let sys = &rs.reduced;
    if s.is_empty() {
        return Ok((nu.clone(), Vec::new()));
    }
    // ⟨Σ x_i α_i, α_k∨⟩ = ν_k for k ∈ s
    let simple: Vec<RationalFunctional> = s.iter().map(|&i| sys.root_weight(sys.simple_index(i))).collect();
    let mat: Vec<Vec<Q>> = s
        .iter()
        .map(|&k| simple.iter().map(|w| w.coords[k]).collect())
        .collect();
    let inv = linalg::inverse(&mat).ok_or_else(|| Error::Invariant("singular Levi Cartan matrix".into()))?;
    let rhs: Vec<Q> = s.iter().map(|&k| nu.coords[k]).collect();
    let x = linalg::mat_vec(&inv, &rhs);
    let mut levi_part = RationalFunctional::zero(sys.rank());
    for (xi, w) in x.iter().zip(&simple) {
        levi_part = levi_part.add(&w.scaled(*xi));
    }
    Ok((nu.sub(&levi_part), x))
}

/// Tests one standard parabolic; returns the decomposition if `ν` lies in
/// its cell `ǎ_P^+ − closure(+ǎ_0^P)`.
///
/// The Levi's simple roots are independent, so `ν_+ − ν` has exactly one
/// expansion in them and cone membership is the sign of its coefficients.
/// [`cone_membership`] gives the same answer with a certificate.
pub fn cell_test(
    rs: &RestrictedRootSystem,
    s: &ParabolicSubset,
    nu: &RationalFunctional,
) -> Result<Option<ConeDecomposition>> {
    let levi: Vec<usize> = (0..rs.rank()).filter(|&i| s.contains(i)).collect();
    let (nu_plus, x) = split(rs, &levi, nu)?;
    let strictly = (0..rs.rank())
        .filter(|i| !s.contains(*i))
        .all(|j| nu_plus.coords[j].is_positive());
    if !strictly {
        return Ok(None);
    }
    let coefficients: Vec<Q> = x.iter().map(|v| -*v).collect();
    if coefficients.iter().any(|c| c.is_negative()) {
        return Ok(None);
    }
    Ok(Some(ConeDecomposition {
        parabolic: s.clone(),
        cone_part: nu_plus.sub(nu),
        nu_plus,
        coefficients,
    }))
}

/// The unique cell of the Langlands decomposition containing `ν`, found by
/// testing all `2^rank` standard parabolics.
pub fn langlands_decompose(rs: &RestrictedRootSystem, nu: &RationalFunctional) -> Result<ConeDecomposition> {
    if nu.rank() != rs.rank() {
        return Err(Error::Dimension {
            expected: rs.rank(),
            got: nu.rank(),
        });
    }
    let mut hits = Vec::new();
    for s in ParabolicSubset::all(rs.rank()) {
        if let Some(d) = cell_test(rs, &s, nu)? {
            hits.push(d);
        }
    }
    match hits.len() {
        1 => Ok(hits.pop().expect("one hit")),
        n => Err(Error::Invariant(format!(
            "ν = {nu} lies in {n} Langlands cells, expected exactly one"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;
    use crate::realform::load_bundled;

    fn rs(id: &str) -> RestrictedRootSystem {
        load_bundled().unwrap().get(id).unwrap().restricted_root_system().unwrap()
    }

    #[test]
    fn membership_examples() {
        let gens = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
        assert_eq!(
            cone_membership(&[q(0), q(0)], &gens).unwrap(),
            Membership::Inside { coefficients: vec![q(0), q(0)] }
        );
        assert_eq!(
            cone_membership(&[q(1), q(0)], &gens).unwrap(),
            Membership::Inside { coefficients: vec![q(1), q(0)] }
        );
        // α1 − α2 against {α1, α2} in weight coordinates of A2
        let a = rs("sl(3,R)");
        let w1 = a.reduced.root_weight(a.reduced.simple_index(0)).coords;
        let w2 = a.reduced.root_weight(a.reduced.simple_index(1)).coords;
        let x = linalg::sub(&w1, &w2);
        match cone_membership(&x, &[w1.clone(), w2.clone()]).unwrap() {
            Membership::Outside { certificate } => {
                assert!(!linalg::dot(&certificate, &w1).is_negative());
                assert!(!linalg::dot(&certificate, &w2).is_negative());
                assert!(linalg::dot(&certificate, &x).is_negative());
            }
            m => panic!("{m:?}"),
        }
    }

    #[test]
    fn decomposition_examples() {
        let a = rs("sl(3,R)");
        let d = langlands_decompose(&a, &RationalFunctional::from_ints(&[2, 1])).unwrap();
        assert_eq!(d.parabolic, ParabolicSubset::borel());
        assert!(d.cone_part.is_zero());
        let d = langlands_decompose(&a, &RationalFunctional::from_ints(&[-1, -1])).unwrap();
        assert_eq!(d.parabolic, ParabolicSubset::full(2));
        assert!(d.nu_plus.is_zero());
        // ω1 − ω2: ν_+ = ω1/2 on the parabolic with Levi {α2}
        let d = langlands_decompose(&a, &RationalFunctional::from_ints(&[1, -1])).unwrap();
        assert_eq!(d.parabolic, ParabolicSubset::new([1]));
        assert_eq!(d.nu_plus.coords, vec![Q::new(1, 2), q(0)]);
        assert_eq!(d.coefficients, vec![Q::new(1, 2)]);
    }

    #[test]
    fn dominance_examples() {
        let f = load_bundled().unwrap().get("sl(3,R)").unwrap().clone();
        let s = ParabolicSubset::new([1]);
        assert!(is_dominant(&f, &s, &[q(0)]).unwrap());
        assert!(is_dominant(&f, &s, &[q(3)]).unwrap());
        assert!(!is_dominant(&f, &s, &[q(-1)]).unwrap());
        assert!(is_dominant(&f, &ParabolicSubset::borel(), &[q(1), q(1)]).unwrap());
    }

    #[test]
    fn cell_test_agrees_with_general_cone_membership() {
        let a = rs("F I");
        let sys = &a.reduced;
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 13) as i64 - 6
        };
        for _ in 0..200 {
            let nu = RationalFunctional::new((0..4).map(|_| Q::new(next(), 1 + next().abs())).collect());
            for s in ParabolicSubset::all(4) {
                let levi: Vec<usize> = s.levi.iter().copied().collect();
                let (nu_plus, _) = split(&a, &levi, &nu).unwrap();
                let strictly = (0..4).filter(|i| !s.contains(*i)).all(|j| nu_plus.coords[j].is_positive());
                let gens: Vec<Vec<Q>> = levi.iter().map(|&i| sys.root_weight(sys.simple_index(i)).coords).collect();
                let inside = cone_membership(&nu_plus.sub(&nu).coords, &gens).unwrap().is_inside();
                assert_eq!(cell_test(&a, &s, &nu).unwrap().is_some(), strictly && inside, "{nu} {s}");
            }
        }
    }
}
