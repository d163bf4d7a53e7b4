//! Vanishing-degree invariants: `r'_g`, `r_g`, `r_{g,μ}` and Kostant degrees.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cartans::{fundamental_cartan, RootClass, ThetaCartan};
use crate::linalg;
use crate::realform::RealForm;
use crate::rootsys::{fmt_ivec, fmt_vec, ParabolicSubset, RationalFunctional, RootSystem};
use crate::{Error, Result, Q};

/// Default bound on `dim t` for the exhaustive `r_g` search.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 6;

/// Largest Weyl orbit enumerated by [`r_min_over_parameter`].
pub const ORBIT_LIMIT: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    Finite(u64),
    Infinite,
}

impl Value {
    pub fn finite(self) -> Option<u64> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Infinite => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infinite => f.write_str("infinity"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    ComplexFastPath,
    CompactRule,
    IdealMinRule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantValue {
    pub value: Value,
    pub witness: Option<String>,
    pub method: Method,
}

impl InvariantValue {
    fn finite(v: u64, witness: String, method: Method) -> Self {
        Self {
            value: Value::Finite(v),
            witness: Some(witness),
            method,
        }
    }

    fn infinite(method: Method, witness: Option<String>) -> Self {
        Self {
            value: Value::Infinite,
            witness,
            method,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RgOptions {
    pub deep: bool,
    pub limit: usize,
}

impl Default for RgOptions {
    fn default() -> Self {
        Self {
            deep: false,
            limit: DEFAULT_EXHAUSTIVE_LIMIT,
        }
    }
}

impl RgOptions {
    pub fn deep() -> Self {
        Self {
            deep: true,
            ..Self::default()
        }
    }
}

/// Smallest nilradical of a proper real parabolic, read off the restricted
/// roots: only maximal parabolics need to be tried.
pub fn r_prime(f: &RealForm) -> Result<InvariantValue> {
    if f.is_compact() {
        return Err(Error::UndefinedForCompact {
            quantity: "r'",
            form: f.id.clone(),
        });
    }
    let rs = f.restricted_root_system()?;
    let (v, i) = (0..rs.rank())
        .map(|i| {
            let dim: u64 = rs
                .positive()
                .filter(|r| r.coords[i] > 0)
                .map(|r| r.mult as u64)
                .sum();
            (dim, i)
        })
        .min()
        .expect("restricted rank >= 1");
    let levi = ParabolicSubset::new((0..rs.rank()).filter(|&j| j != i));
    Ok(InvariantValue::finite(
        v,
        format!("maximal parabolic dropping simple restricted root {}, Levi {levi}", i + 1),
        Method::Exhaustive,
    ))
}

/// A root of a θ-stable subsystem seen from its fundamental Cartan: its
/// restriction to `t` (as a vector of `h*`) and its class.
#[derive(Debug, Clone)]
pub struct GradedRoot {
    pub restriction: Vec<Q>,
    pub class: RootClass,
}

/// Graded roots of the whole form on its fundamental Cartan.
pub fn graded_roots(sys: &RootSystem, c: &ThetaCartan, subset: &[usize]) -> Vec<GradedRoot> {
    subset
        .iter()
        .map(|&i| {
            let a = linalg::to_q(sys.root(i));
            let ta = c.apply_q(&a);
            GradedRoot {
                restriction: linalg::scale(&linalg::add(&a, &ta), Q::new(1, 2)),
                class: c.class(i),
            }
        })
        .collect()
}

/// Result of the chamber search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaStableMin {
    pub value: u64,
    pub witness: String,
    pub chambers: usize,
    pub dim_t: usize,
}

/// One ray of the `t`-root arrangement, `β` and `2β` merged.
#[derive(Debug, Clone)]
struct Ray {
    rep: Vec<Q>,
    s_dim: u64,
    k_wall: bool,
    neg: usize,
}

fn ray_key(v: &[Q]) -> Vec<Q> {
    let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero");
    let s = lead.abs();
    v.iter().map(|x| *x / s).collect()
}

fn lex_positive(v: &[Q]) -> bool {
    v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive())
}

fn build_rays(roots: &[GradedRoot]) -> Result<Vec<Ray>> {
    let mut index: BTreeMap<Vec<Q>, usize> = BTreeMap::new();
    let mut rays: Vec<Ray> = Vec::new();
    let mut complex: Vec<u64> = Vec::new();
    for r in roots {
        if linalg::is_zero(&r.restriction) {
            if r.class != RootClass::Real {
                return Err(Error::Invariant("root vanishing on t is not real".into()));
            }
            continue;
        }
        let key = ray_key(&r.restriction);
        let id = *index.entry(key).or_insert_with(|| {
            rays.push(Ray {
                rep: r.restriction.clone(),
                s_dim: 0,
                k_wall: false,
                neg: usize::MAX,
            });
            complex.push(0);
            rays.len() - 1
        });
        let ray = &mut rays[id];
        // keep the shortest vector on the ray
        let lead = |v: &[Q]| v.iter().find(|x| !x.is_zero()).unwrap().abs();
        if lead(&r.restriction) < lead(&ray.rep) {
            ray.rep = r.restriction.clone();
        }
        match r.class {
            RootClass::NoncompactImaginary => ray.s_dim += 1,
            RootClass::CompactImaginary => ray.k_wall = true,
            RootClass::Complex => {
                ray.k_wall = true;
                complex[id] += 1;
            }
            RootClass::Real => {
                return Err(Error::Invariant("real root on a fundamental Cartan".into()))
            }
        }
    }
    for (ray, c) in rays.iter_mut().zip(&complex) {
        if c % 2 != 0 {
            return Err(Error::Invariant("complex roots on a ray do not pair up under θ".into()));
        }
        ray.s_dim += c / 2;
    }
    let keys: Vec<Vec<Q>> = rays.iter().map(|r| ray_key(&r.rep)).collect();
    for i in 0..rays.len() {
        let neg: Vec<Q> = keys[i].iter().map(|x| -*x).collect();
        rays[i].neg = *index
            .get(&neg)
            .ok_or_else(|| Error::Invariant("t-roots not closed under negation".into()))?;
    }
    Ok(rays)
}

/// Simple rays of a positive system: positive rays that are not the sum of
/// two positive rays (multiples included).
fn simple_rays(rays: &[Ray], positive: &[usize]) -> Vec<usize> {
    let keys: HashMap<Vec<Q>, usize> = positive.iter().map(|&i| (ray_key(&rays[i].rep), i)).collect();
    let mut simple = Vec::new();
    'outer: for &i in positive {
        for &j in positive {
            if i == j {
                continue;
            }
            let diff = linalg::sub(&rays[i].rep, &rays[j].rep);
            if linalg::is_zero(&diff) {
                continue;
            }
            if let Some(&k) = keys.get(&ray_key(&diff)) {
                // rep_i = rep_j + (positive multiple of rep_k)
                let _ = k;
                if lex_positive(&diff) {
                    continue 'outer;
                }
            }
        }
        simple.push(i);
    }
    simple
}

/// Minimum of `dim(n_q ∩ s_C)` over proper θ-stable parabolics `q` defined
/// by points of `t`.
///
/// Every such `q` is K-conjugate to one given by a point in the closed
/// dominant chamber of `K`. The chambers of the `t`-root arrangement inside it
/// are reached by crossing non-compact walls only, and the `n_q ∩ s_C`
/// dimension only drops under specialization, so the minimum is attained at
/// a ray (fundamental coweight) of one of these chambers.
pub fn theta_stable_minimum(roots: &[GradedRoot]) -> Result<ThetaStableMin> {
    let rays = build_rays(roots)?;
    if rays.is_empty() {
        return Err(Error::Invariant("no roots restrict nontrivially to t".into()));
    }
    let reps: Vec<Vec<Q>> = rays.iter().map(|r| r.rep.clone()).collect();
    let dim_t = linalg::rank(&reps);
    let start: Vec<bool> = rays.iter().map(|r| lex_positive(&r.rep)).collect();

    let mut seen: HashMap<Vec<bool>, ()> = HashMap::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start, ());
    let mut best: Option<(u64, String)> = None;
    let mut chambers = 0;
    while let Some(chamber) = queue.pop_front() {
        chambers += 1;
        let positive: Vec<usize> = (0..rays.len()).filter(|&i| chamber[i]).collect();
        let simple = simple_rays(&rays, &positive);
        if simple.len() != dim_t {
            return Err(Error::Invariant(format!(
                "chamber has {} simple t-roots, expected {dim_t}",
                simple.len()
            )));
        }
        let basis: Vec<Vec<Q>> = simple.iter().map(|&i| rays[i].rep.clone()).collect();
        let coords: Vec<Vec<Q>> = positive
            .iter()
            .map(|&i| {
                linalg::coordinates(&basis, &rays[i].rep)
                    .ok_or_else(|| Error::Invariant("t-root outside the span of simple roots".into()))
            })
            .collect::<Result<_>>()?;
        for (pos, &s) in simple.iter().enumerate() {
            let v: u64 = positive
                .iter()
                .zip(&coords)
                .filter(|(_, c)| c[pos].is_positive())
                .map(|(&i, _)| rays[i].s_dim)
                .sum();
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((
                    v,
                    format!(
                        "chamber {} of the K-dominant cone, coweight dual to t-root {}",
                        chambers,
                        fmt_vec(&rays[s].rep)
                    ),
                ));
            }
            if !rays[s].k_wall {
                let mut next = chamber.clone();
                next[s] = false;
                next[rays[s].neg] = true;
                if !seen.contains_key(&next) {
                    seen.insert(next.clone(), ());
                    queue.push_back(next);
                }
            }
        }
    }
    let (value, witness) = best.expect("at least one chamber");
    Ok(ThetaStableMin {
        value,
        witness,
        chambers,
        dim_t,
    })
}

/// `r_g`: +∞ for compact forms, the smallest complex nilradical for complex
/// forms, otherwise the chamber search on the fundamental Cartan.
pub fn r_g(f: &RealForm, opts: RgOptions) -> Result<InvariantValue> {
    if f.is_compact() {
        return Ok(InvariantValue::infinite(
            Method::CompactRule,
            Some("compact form".into()),
        ));
    }
    if f.realification {
        let sys = RootSystem::new(f.complex_type);
        let (v, i) = sys.min_nilradical();
        return Ok(InvariantValue::finite(
            v as u64,
            format!(
                "complex maximal parabolic of {} dropping simple root {}",
                f.complex_type,
                i + 1
            ),
            Method::ComplexFastPath,
        ));
    }
    r_g_exhaustive(f, opts)
}

/// The chamber search without any fast path (also used to cross-check the
/// complex fast path).
pub fn r_g_exhaustive(f: &RealForm, opts: RgOptions) -> Result<InvariantValue> {
    let c = fundamental_cartan(f);
    if !opts.deep && c.dim_t() > opts.limit {
        return Err(Error::ExceedsLimit {
            form: f.id.clone(),
            rank: c.dim_t(),
            limit: opts.limit,
        });
    }
    let all: Vec<usize> = (0..f.system.len()).collect();
    let m = theta_stable_minimum(&graded_roots(&f.system, &c, &all))?;
    Ok(InvariantValue::finite(
        m.value,
        format!("{} ({} chambers searched)", m.witness, m.chambers),
        Method::Exhaustive,
    ))
}

/// θ-stable simple ideals of the subsystem `subset` (closed under negation
/// and θ): connected components, with components swapped by θ merged.
pub fn theta_stable_ideals(sys: &RootSystem, c: &ThetaCartan, subset: &[usize]) -> Vec<Vec<usize>> {
    let n = subset.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let pos: HashMap<usize, usize> = subset.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let gram = sys.gram();
    let vecs: Vec<Vec<Q>> = subset.iter().map(|&i| linalg::to_q(sys.root(i))).collect();
    for a in 0..n {
        for b in (a + 1)..n {
            if !linalg::form(gram, &vecs[a], &vecs[b]).is_zero() {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        if let Some(&b) = pos.get(&c.theta_root(subset[a])) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for a in 0..n {
        let r = find(&mut parent, a);
        groups.entry(r).or_default().push(subset[a]);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

/// `r_m` for the semisimple algebra with roots `subset` on a Cartan that is
/// fundamental for it: minimum over noncompact simple ideals, +∞ if none.
pub fn r_g_subsystem(sys: &RootSystem, c: &ThetaCartan, subset: &[usize]) -> Result<InvariantValue> {
    let mut best: Option<(u64, String)> = None;
    for ideal in theta_stable_ideals(sys, c, subset) {
        if ideal.iter().all(|&i| c.class(i) == RootClass::CompactImaginary) {
            continue;
        }
        let m = theta_stable_minimum(&graded_roots(sys, c, &ideal))?;
        if best.as_ref().is_none_or(|(b, _)| m.value < *b) {
            best = Some((
                m.value,
                format!("ideal with {} roots: {}", ideal.len(), m.witness),
            ));
        }
    }
    Ok(match best {
        Some((v, w)) => InvariantValue::finite(v, w, Method::IdealMinRule),
        None => InvariantValue::infinite(Method::CompactRule, Some("no noncompact ideal".into())),
    })
}

/// `dim(n(μ) ∩ s_C)` for a subsystem, given `⟨μ, α∨⟩` on each of its roots.
///
/// `pairings[k]` belongs to `subset[k]`; all must be nonzero.
pub fn n_mu_s_dim(
    sys: &RootSystem,
    c: &ThetaCartan,
    subset: &[usize],
    pairings: &[Q],
) -> Result<u64> {
    let gram = sys.gram();
    let mut rho = vec![Q::zero(); sys.rank()];
    for (&i, p) in subset.iter().zip(pairings) {
        if p.is_positive() {
            for (r, &x) in rho.iter_mut().zip(sys.root(i)) {
                *r += Q::new(x, 2);
            }
        }
    }
    let mut noncompact = 0u64;
    let mut complex = 0u64;
    for (&i, p) in subset.iter().zip(pairings) {
        let a = linalg::to_q(sys.root(i));
        let rho_pair = Q::from(2) * linalg::form(gram, &rho, &a) / linalg::form(gram, &a, &a);
        if (*p - rho_pair).is_positive() {
            match c.class(i) {
                RootClass::NoncompactImaginary => noncompact += 1,
                RootClass::Complex => complex += 1,
                RootClass::CompactImaginary => {}
                RootClass::Real => {
                    return Err(Error::Invariant("real root in n(μ)".into()));
                }
            }
        }
    }
    if !complex.is_multiple_of(2) {
        return Err(Error::Invariant("n(μ) is not θ-stable".into()));
    }
    Ok(noncompact + complex / 2)
}

fn check_regular_integral(sys: &RootSystem, mu: &RationalFunctional) -> Result<()> {
    if mu.rank() != sys.rank() {
        return Err(Error::Dimension {
            expected: sys.rank(),
            got: mu.rank(),
        });
    }
    if let Some((i, v)) = sys.first_irregular(mu) {
        return Err(Error::NotRegularIntegral {
            coroot: fmt_ivec(sys.coroot(i)),
            value: v.to_string(),
        });
    }
    Ok(())
}

/// True if θ fixes `μ` on the fundamental Cartan, i.e. `μ` lives on `t`.
pub fn is_pure(f: &RealForm, mu: &RationalFunctional) -> bool {
    let sigma = &f.vogan.automorphism;
    (0..mu.rank()).all(|i| mu.coords[sigma[i]] == mu.coords[i])
}

/// `r_{g,μ}` for a pure regular integral `μ` (fundamental-weight
/// coordinates on the fundamental Cartan).
pub fn r_g_mu(f: &RealForm, mu: &RationalFunctional) -> Result<InvariantValue> {
    let sys = &f.system;
    check_regular_integral(sys, mu)?;
    if !is_pure(f, mu) {
        return Err(Error::Precondition(format!(
            "μ = {mu} is not fixed by θ (not supported on t)"
        )));
    }
    let c = fundamental_cartan(f);
    let all: Vec<usize> = (0..sys.len()).collect();
    let pairings: Vec<Q> = all.iter().map(|&i| sys.pair_index(mu, i)).collect();
    let v = n_mu_s_dim(sys, &c, &all, &pairings)?;
    Ok(InvariantValue::finite(
        v,
        format!("n(μ) for μ = {mu}"),
        Method::Exhaustive,
    ))
}

/// Minimum of `r_{g,w·λ0}` over the pure points of the Weyl orbit of `λ0`.
pub fn r_min_over_parameter(f: &RealForm, lambda0: &RationalFunctional) -> Result<InvariantValue> {
    let sys = &f.system;
    check_regular_integral(sys, lambda0)?;
    let orbit = sys.weyl_orbit(lambda0, ORBIT_LIMIT)?;
    let mut best: Option<(u64, String)> = None;
    let mut pure = 0usize;
    for w in orbit.iter().filter(|w| is_pure(f, w)) {
        pure += 1;
        let v = r_g_mu(f, w)?.value.finite().expect("finite");
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, format!("w·λ0 = {w}")));
        }
    }
    Ok(match best {
        Some((v, w)) => InvariantValue::finite(
            v,
            format!("{w} ({pure} of {} orbit points pure)", orbit.len()),
            Method::Exhaustive,
        ),
        None => InvariantValue::infinite(
            Method::Exhaustive,
            Some(format!("none of {} orbit points is pure", orbit.len())),
        ),
    })
}

/// `#{α ∈ Δ(n) : ⟨λ, α∨⟩ > 0}` for the standard parabolic `s`.
pub fn kostant_degree(sys: &RootSystem, s: &ParabolicSubset, lambda: &RationalFunctional) -> Result<usize> {
    check_regular_integral(sys, lambda)?;
    let (_, nil) = sys.parabolic_split(s);
    Ok(nil
        .iter()
        .filter(|&&i| sys.pair_index(lambda, i).is_positive())
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realform::load_bundled;
    use crate::rootsys::CartanType;

    fn form(id: &str) -> RealForm {
        load_bundled().unwrap().get(id).unwrap().clone()
    }

    fn fin(v: InvariantValue) -> u64 {
        v.value.finite().unwrap()
    }

    #[test]
    fn r_prime_examples() {
        assert_eq!(fin(r_prime(&form("sl(4,R)")).unwrap()), 3);
        assert_eq!(fin(r_prime(&form("complex:G2")).unwrap()), 10);
        assert_eq!(fin(r_prime(&form("su(2,1)")).unwrap()), 3);
        assert!(matches!(
            r_prime(&form("compact:F4")),
            Err(Error::UndefinedForCompact { .. })
        ));
    }

    #[test]
    fn r_g_examples() {
        assert_eq!(fin(r_g(&form("su(3,2)"), RgOptions::default()).unwrap()), 2);
        let e8 = r_g(&form("complex:E8"), RgOptions::default()).unwrap();
        assert_eq!(e8.method, Method::ComplexFastPath);
        assert_eq!(fin(e8), 57);
        let f4 = r_g(&form("compact:F4"), RgOptions::default()).unwrap();
        assert_eq!(f4.value, Value::Infinite);
        assert!(matches!(
            r_g(&form("E VIII"), RgOptions::default()),
            Err(Error::ExceedsLimit { .. })
        ));
    }

    #[test]
    fn r_g_mu_examples() {
        let sl2 = form("sl(2,R)");
        let two_rho = RationalFunctional::from_ints(&[2]);
        assert_eq!(fin(r_g_mu(&sl2, &two_rho).unwrap()), 1);
        let rho = RationalFunctional::from_ints(&[1]);
        assert_eq!(fin(r_g_mu(&sl2, &rho).unwrap()), 0);
        let su21 = form("su(2,1)");
        assert_eq!(fin(r_g_mu(&su21, &RationalFunctional::from_ints(&[2, 2])).unwrap()), 2);
        let bad = RationalFunctional::from_ints(&[1, -1]);
        assert!(matches!(r_g_mu(&su21, &bad), Err(Error::NotRegularIntegral { .. })));
    }

    #[test]
    fn orbit_minimum_examples() {
        let rho = RationalFunctional::from_ints(&[1, 1]);
        assert_eq!(fin(r_min_over_parameter(&form("su(2,1)"), &rho).unwrap()), 0);
        let sl3 = r_min_over_parameter(&form("sl(3,R)"), &rho).unwrap();
        assert!(sl3.witness.unwrap().contains("2 of 6"));
        let su2 = r_min_over_parameter(&form("su(2)"), &RationalFunctional::from_ints(&[1])).unwrap();
        assert_eq!(fin(su2), 0);
    }

    #[test]
    fn kostant_examples() {
        let a2 = RootSystem::new(CartanType::new(crate::rootsys::Series::A, 2).unwrap());
        let s = ParabolicSubset::new([0]);
        assert_eq!(kostant_degree(&a2, &s, &RationalFunctional::from_ints(&[2, -1])).unwrap(), 1);
        assert_eq!(kostant_degree(&a2, &s, &RationalFunctional::from_ints(&[1, 1])).unwrap(), 2);
        assert_eq!(kostant_degree(&a2, &s, &RationalFunctional::from_ints(&[-1, -1])).unwrap(), 0);
        assert!(kostant_degree(&a2, &s, &RationalFunctional::from_ints(&[1, -1])).is_err());
    }
}
