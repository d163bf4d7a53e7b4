//! θ-stable Cartan subalgebras as root classifications.
//!
//! A Cartan is stored as the action of θ on the root lattice (an integer
//! matrix in simple-root coordinates) together with the class of every root.
//! Cayley transforms replace θ by `s_β ∘ θ` for a noncompact imaginary root
//! `β`, so every Cartan reached from the fundamental one keeps the same root
//! labels.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::linalg;
use crate::realform::{RealForm, RestrictedRootSystem};
use crate::rootsys::{ParabolicSubset, RootSystem};
use crate::{Error, Result, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RootClass {
    Complex,
    Real,
    CompactImaginary,
    NoncompactImaginary,
}

impl RootClass {
    pub fn is_imaginary(self) -> bool {
        matches!(self, RootClass::CompactImaginary | RootClass::NoncompactImaginary)
    }
}

impl fmt::Display for RootClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RootClass::Complex => "complex",
            RootClass::Real => "real",
            RootClass::CompactImaginary => "compact imaginary",
            RootClass::NoncompactImaginary => "noncompact imaginary",
        };
        f.write_str(s)
    }
}

/// `⟨v, α_i∨⟩` for an integer vector in simple-root coordinates.
pub(crate) fn pair_int(sys: &RootSystem, v: &[i64], i: usize) -> i64 {
    let cartan = sys.cartan();
    sys.coroot(i)
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| c * cartan[k].iter().zip(v).map(|(a, b)| a * b).sum::<i64>())
        .sum()
}

fn reflect_int(sys: &RootSystem, v: &[i64], i: usize) -> Vec<i64> {
    let p = pair_int(sys, v, i);
    v.iter().zip(sys.root(i)).map(|(x, a)| x - p * a).collect()
}

#[derive(Debug, Clone)]
pub struct ThetaCartan {
    /// `cols[j] = θ(α_j)` in simple-root coordinates.
    cols: Vec<Vec<i64>>,
    theta_root: Vec<usize>,
    class: Vec<RootClass>,
    dim_t: usize,
    dim_a: usize,
    /// Cayley roots applied from the fundamental Cartan, in order.
    pub steps: Vec<usize>,
}

impl ThetaCartan {
    fn from_parts(
        sys: &RootSystem,
        cols: Vec<Vec<i64>>,
        class: Vec<RootClass>,
        steps: Vec<usize>,
    ) -> Self {
        let n = sys.rank();
        let theta_root = (0..sys.len())
            .map(|i| {
                let img = apply_cols(&cols, sys.root(i));
                sys.index_of(&img).expect("θ permutes the roots")
            })
            .collect();
        let m = matrix_q(&cols);
        let minus: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| m[i][j] + if i == j { Q::from(1) } else { Q::zero() }).collect())
            .collect();
        let dim_a = linalg::nullspace(&minus, n).len();
        Self {
            cols,
            theta_root,
            class,
            dim_t: n - dim_a,
            dim_a,
            steps,
        }
    }

    pub fn class(&self, i: usize) -> RootClass {
        self.class[i]
    }

    pub fn classes(&self) -> &[RootClass] {
        &self.class
    }

    pub fn theta_root(&self, i: usize) -> usize {
        self.theta_root[i]
    }

    pub fn dim_t(&self) -> usize {
        self.dim_t
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    /// θ applied to an integer vector of the root lattice.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        apply_cols(&self.cols, v)
    }

    /// θ applied to a rational vector in simple-root coordinates.
    pub fn apply_q(&self, v: &[Q]) -> Vec<Q> {
        let n = v.len();
        let mut out = vec![Q::zero(); n];
        for (j, col) in self.cols.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for i in 0..n {
                out[i] += v[j] * Q::from(col[i]);
            }
        }
        out
    }

    /// Rational matrix of θ on simple-root coordinates.
    pub fn matrix(&self) -> Vec<Vec<Q>> {
        matrix_q(&self.cols)
    }

    /// Basis of the `±1` eigenspace of θ on `h*`.
    pub fn eigenspace(&self, sign: i64) -> Vec<Vec<Q>> {
        let m = self.matrix();
        let n = m.len();
        let shifted: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| m[i][j] - if i == j { Q::from(sign) } else { Q::zero() })
                    .collect()
            })
            .collect();
        linalg::nullspace(&shifted, n)
    }

    pub fn count(&self, c: RootClass) -> usize {
        self.class.iter().filter(|&&x| x == c).count()
    }

    /// Deduplication key: `dim a` and root counts per (length, class).
    pub fn signature(&self, sys: &RootSystem) -> CartanSignature {
        let mut counts: BTreeMap<(Q, RootClass), usize> = BTreeMap::new();
        for (i, c) in self.class.iter().enumerate() {
            *counts.entry((sys.half_norm(i), *c)).or_default() += 1;
        }
        CartanSignature {
            dim_a: self.dim_a,
            counts: counts.into_iter().collect(),
        }
    }

    pub fn is_fundamental(&self) -> bool {
        self.count(RootClass::Real) == 0
    }

    pub fn is_maximally_split(&self) -> bool {
        self.count(RootClass::NoncompactImaginary) == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanSignature {
    pub dim_a: usize,
    pub counts: Vec<((Q, RootClass), usize)>,
}

fn apply_cols(cols: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    let n = v.len();
    let mut out = vec![0; n];
    for (j, col) in cols.iter().enumerate() {
        if v[j] != 0 {
            for i in 0..n {
                out[i] += v[j] * col[i];
            }
        }
    }
    out
}

fn matrix_q(cols: &[Vec<i64>]) -> Vec<Vec<Q>> {
    let n = cols.len();
    (0..n)
        .map(|i| (0..n).map(|j| Q::from(cols[j][i])).collect())
        .collect()
}

/// The Cartan on which θ acts by the Vogan diagram involution.
pub fn fundamental_cartan(f: &RealForm) -> ThetaCartan {
    let sys = &f.system;
    let n = sys.rank();
    let cols = (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[f.vogan.automorphism[j]] = 1;
            e
        })
        .collect();
    let class = (0..sys.len())
        .map(|i| {
            if !f.is_imaginary(i) {
                RootClass::Complex
            } else if f.theta_sign(i) > 0 {
                RootClass::CompactImaginary
            } else {
                RootClass::NoncompactImaginary
            }
        })
        .collect();
    ThetaCartan::from_parts(sys, cols, class, Vec::new())
}

/// Cayley transform along the noncompact imaginary root `beta`.
///
/// Imaginary roots of the result are the old imaginary roots orthogonal to
/// `beta`; such a root changes type exactly when `α ± β` is a root.
pub fn cayley_transform(sys: &RootSystem, c: &ThetaCartan, beta: usize) -> Result<ThetaCartan> {
    if c.class[beta] != RootClass::NoncompactImaginary {
        return Err(Error::Precondition(format!(
            "Cayley transform needs a noncompact imaginary root; {} is {}",
            crate::rootsys::fmt_ivec(sys.root(beta)),
            c.class[beta]
        )));
    }
    let cols: Vec<Vec<i64>> = c.cols.iter().map(|v| reflect_int(sys, v, beta)).collect();
    let b = sys.root(beta);
    let mut class = Vec::with_capacity(sys.len());
    for i in 0..sys.len() {
        let a = sys.root(i);
        let img = reflect_int(sys, &c.apply(a), beta);
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        let cl = if img == a {
            if !c.class[i].is_imaginary() {
                return Err(Error::Invariant(format!(
                    "root {} became imaginary without being imaginary before",
                    crate::rootsys::fmt_ivec(a)
                )));
            }
            let plus: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            let minus: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            let flips = sys.index_of(&plus).is_some() || sys.index_of(&minus).is_some();
            match (c.class[i], flips) {
                (RootClass::CompactImaginary, true) => RootClass::NoncompactImaginary,
                (RootClass::NoncompactImaginary, true) => RootClass::CompactImaginary,
                (k, _) => k,
            }
        } else if img == neg {
            RootClass::Real
        } else {
            RootClass::Complex
        };
        class.push(cl);
    }
    let mut steps = c.steps.clone();
    steps.push(beta);
    let out = ThetaCartan::from_parts(sys, cols, class, steps);
    if out.dim_a != c.dim_a + 1 {
        return Err(Error::Invariant("Cayley transform did not raise dim a by one".into()));
    }
    Ok(out)
}

/// One representative per Cartan class reachable by Cayley transforms,
/// ordered by `dim a` and then signature.
pub fn enumerate_cartans(f: &RealForm) -> Result<Vec<ThetaCartan>> {
    let sys = &f.system;
    let start = fundamental_cartan(f);
    let mut seen: HashMap<CartanSignature, usize> = HashMap::new();
    let mut out = vec![start.clone()];
    seen.insert(start.signature(sys), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        let cur = out[k].clone();
        for beta in sys.positive_indices() {
            if cur.class[beta] != RootClass::NoncompactImaginary {
                continue;
            }
            let next = cayley_transform(sys, &cur, beta)?;
            let sig = next.signature(sys);
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(sig) {
                e.insert(out.len());
                queue.push_back(out.len());
                out.push(next);
            }
        }
    }
    let mut keyed: Vec<(CartanSignature, ThetaCartan)> =
        out.into_iter().map(|c| (c.signature(sys), c)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, c)| c).collect())
}

/// The most split class of the Cayley closure.
pub fn maximally_split(f: &RealForm) -> Result<ThetaCartan> {
    let all = enumerate_cartans(f)?;
    let c = all.into_iter().max_by_key(|c| c.dim_a).expect("closure is nonempty");
    if !c.is_maximally_split() {
        return Err(Error::Invariant(format!(
            "{}: most split Cartan still has noncompact imaginary roots",
            f.id
        )));
    }
    Ok(c)
}

/// `h = c ⊕ a ⊕ c' ⊕ a'` for a standard parabolic, with bases in
/// simple-root coordinates of `h*`.
#[derive(Debug, Clone)]
pub struct AdaptedCartan {
    pub base: ThetaCartan,
    pub parabolic: ParabolicSubset,
    /// Roots of the Levi factor (both signs).
    pub levi: Vec<usize>,
    /// Roots of the nilradical.
    pub nilradical: Vec<usize>,
    pub c: Vec<Vec<Q>>,
    pub a: Vec<Vec<Q>>,
    pub c_prime: Vec<Vec<Q>>,
    pub a_prime: Vec<Vec<Q>>,
    /// Level of each nilradical root: its `a`-weight in the basis of the
    /// simple `a`-weights, indexed like the roots outside the Levi subset.
    pub levels: BTreeMap<usize, Vec<i64>>,
}

impl AdaptedCartan {
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (self.c.len(), self.a.len(), self.c_prime.len(), self.a_prime.len())
    }
}

/// Work budget for the adapted Cartan search (candidate subspaces tried).
pub const ADAPTED_SEARCH_BUDGET: usize = 200_000;

/// Finds a Cayley-closure Cartan adapted to the standard parabolic `s`
/// (indices of simple restricted roots in the descriptor numbering).
///
/// For each Cartan class, candidate `a'` subspaces are spanned by
/// `a`-projections of roots and must contain no real root (so `c' ⊕ a'` is
/// fundamental in `m`); `a` is their orthogonal complement in the split part.
/// The `a`-weights of `g` must then match the `a_S`-weights predicted by the
/// Satake data, multiplicities included.
pub fn adapted_cartan(f: &RealForm, s: &ParabolicSubset) -> Result<AdaptedCartan> {
    let rs = f.restricted_root_system()?;
    check_levi(f, &rs, s)?;
    let target = Target::new(&rs, s);
    let sys = &f.system;
    let mut budget = ADAPTED_SEARCH_BUDGET;
    if f.realification {
        // one Cartan class; a' is spanned by the split parts of the Levi's simple roots
        let cartan = fundamental_cartan(f);
        let w: Vec<Vec<Q>> = s
            .levi
            .iter()
            .map(|&i| {
                let a = linalg::to_q(sys.root(sys.simple_index(i)));
                linalg::scale(&linalg::sub(&a, &cartan.apply_q(&a)), Q::new(1, 2))
            })
            .collect();
        if let Some(found) = try_flat(sys, &cartan, &target, s, canonical(&w), &mut budget)? {
            return Ok(found);
        }
    }
    search_all_classes(f, s, &target, budget)
}

fn check_levi(f: &RealForm, rs: &RestrictedRootSystem, s: &ParabolicSubset) -> Result<()> {
    let r = rs.rank();
    if s.levi.iter().any(|&i| i >= r) {
        return Err(Error::Precondition(format!(
            "parabolic {s} is not a subset of the {r} simple restricted roots of {}",
            f.id
        )));
    }
    Ok(())
}

/// The generic adapted Cartan search over every Cartan class, without the
/// shortcut for complex forms.
pub fn adapted_cartan_search(f: &RealForm, s: &ParabolicSubset) -> Result<AdaptedCartan> {
    let rs = f.restricted_root_system()?;
    check_levi(f, &rs, s)?;
    let target = Target::new(&rs, s);
    search_all_classes(f, s, &target, ADAPTED_SEARCH_BUDGET)
}

fn search_all_classes(f: &RealForm, s: &ParabolicSubset, target: &Target, mut budget: usize) -> Result<AdaptedCartan> {
    let k = target.outside.len();
    let sys = &f.system;
    let reps = enumerate_cartans(f)?;
    for cartan in &reps {
        if cartan.dim_a < k {
            continue;
        }
        if let Some(found) = search_cartan(sys, cartan, target, s, &mut budget)? {
            return Ok(found);
        }
        if budget == 0 {
            break;
        }
    }
    if budget > 0 {
        // Signatures can merge classes that are not conjugate (D_n with n
        // even), so walk the closure again keeping every distinct θ.
        if let Some(found) = search_exact_closure(f, s, target, &reps, &mut budget)? {
            return Ok(found);
        }
    }
    Err(Error::Unsupported {
        form: f.id.clone(),
        levi: s.to_string(),
        reason: if budget == 0 {
            "search budget exhausted".into()
        } else {
            "no Cartan in the Cayley closure matches the parabolic".into()
        },
    })
}

/// Cap on distinct Cartans visited by [`search_exact_closure`].
pub const EXACT_CLOSURE_LIMIT: usize = 20_000;

fn search_exact_closure(
    f: &RealForm,
    s: &ParabolicSubset,
    target: &Target,
    reps: &[ThetaCartan],
    budget: &mut usize,
) -> Result<Option<AdaptedCartan>> {
    let sys = &f.system;
    let k = target.outside.len();
    let start = fundamental_cartan(f);
    let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::new();
    let tried: HashSet<&Vec<Vec<i64>>> = reps.iter().map(|c| &c.cols).collect();
    seen.insert(start.cols.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        if cur.dim_a >= k && !tried.contains(&cur.cols) {
            if let Some(found) = search_cartan(sys, &cur, target, s, budget)? {
                return Ok(Some(found));
            }
            if *budget == 0 {
                return Ok(None);
            }
        }
        for beta in sys.positive_indices() {
            if cur.class[beta] != RootClass::NoncompactImaginary {
                continue;
            }
            let next = cayley_transform(sys, &cur, beta)?;
            if seen.len() >= EXACT_CLOSURE_LIMIT {
                return Ok(None);
            }
            if seen.insert(next.cols.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// `a_S`-weights of `n_S` predicted from the restricted root system.
struct Target {
    /// Simple restricted indices outside the Levi subset, in search order.
    outside: Vec<usize>,
    /// Level vector (over `outside`, in that order) → multiplicity.
    levels: HashMap<Vec<i64>, u32>,
    /// Multiplicities of the simple levels.
    simple_mult: Vec<u32>,
}

impl Target {
    fn new(rs: &RestrictedRootSystem, s: &ParabolicSubset) -> Self {
        let r = rs.rank();
        // order outside indices so each one is adjacent to an earlier one when possible
        let free: Vec<usize> = (0..r).filter(|&j| !s.contains(j)).collect();
        let cartan = rs.reduced.cartan();
        let mut outside: Vec<usize> = Vec::new();
        let mut rest = free.clone();
        while !rest.is_empty() {
            let pick = rest
                .iter()
                .position(|&j| outside.iter().any(|&o| cartan[o][j] != 0))
                .unwrap_or(0);
            outside.push(rest.remove(pick));
        }
        let mut levels: HashMap<Vec<i64>, u32> = HashMap::new();
        for root in rs.positive() {
            let lv: Vec<i64> = outside.iter().map(|&j| root.coords[j]).collect();
            if lv.iter().any(|&x| x != 0) {
                *levels.entry(lv).or_default() += root.mult;
            }
        }
        let simple_mult = (0..outside.len())
            .map(|i| {
                let mut e = vec![0; outside.len()];
                e[i] = 1;
                levels.get(&e).copied().unwrap_or(0)
            })
            .collect();
        Self {
            outside,
            levels,
            simple_mult,
        }
    }
}

fn canonical(basis: &[Vec<Q>]) -> Vec<Vec<Q>> {
    linalg::span_basis(basis)
}

fn search_cartan(
    sys: &RootSystem,
    cartan: &ThetaCartan,
    target: &Target,
    s: &ParabolicSubset,
    budget: &mut usize,
) -> Result<Option<AdaptedCartan>> {
    let k = target.outside.len();
    let d = cartan.dim_a - k;
    let proj: Vec<Vec<Q>> = (0..sys.len())
        .map(|i| {
            let a = linalg::to_q(sys.root(i));
            let ta = cartan.apply_q(&a);
            linalg::scale(&linalg::sub(&a, &ta), Q::new(1, 2))
        })
        .collect();
    let reals: Vec<Vec<Q>> = (0..sys.len())
        .filter(|&i| cartan.class[i] == RootClass::Real && sys.is_positive(i))
        .map(|i| linalg::to_q(sys.root(i)))
        .collect();
    // candidate generators: distinct lines spanned by projections of complex roots
    let mut lines: Vec<Vec<Q>> = Vec::new();
    let mut seen_lines: HashSet<Vec<Q>> = HashSet::new();
    for i in sys.positive_indices() {
        if cartan.class[i] != RootClass::Complex {
            continue;
        }
        let c = canonical(std::slice::from_ref(&proj[i]));
        if c.is_empty() {
            continue;
        }
        if seen_lines.insert(c[0].clone()) {
            lines.push(proj[i].clone());
        }
    }
    let contains_real = |basis: &[Vec<Q>]| {
        reals
            .iter()
            .any(|r| linalg::coordinates(basis, r).is_some())
    };

    // flats of dimension d built one generator at a time
    let mut level: Vec<Vec<Vec<Q>>> = vec![Vec::new()];
    for _ in 0..d {
        let mut next: Vec<Vec<Vec<Q>>> = Vec::new();
        let mut seen: HashSet<Vec<Vec<Q>>> = HashSet::new();
        for w in &level {
            for l in &lines {
                if *budget == 0 {
                    return Ok(None);
                }
                *budget -= 1;
                if !w.is_empty() && linalg::coordinates(w, l).is_some() {
                    continue;
                }
                let mut gens = w.clone();
                gens.push(l.clone());
                let c = canonical(&gens);
                if c.len() != gens.len() || contains_real(&c) || !seen.insert(c.clone()) {
                    continue;
                }
                next.push(c);
            }
        }
        level = next;
    }

    for w in level {
        if *budget == 0 {
            return Ok(None);
        }
        *budget -= 1;
        if let Some(found) = try_flat(sys, cartan, target, s, w, budget)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Completes a candidate `a'` to an adapted Cartan if the resulting
/// `a`-weights reproduce the Satake levels and the Levi has no real root.
fn try_flat(
    sys: &RootSystem,
    cartan: &ThetaCartan,
    target: &Target,
    s: &ParabolicSubset,
    w: Vec<Vec<Q>>,
    budget: &mut usize,
) -> Result<Option<AdaptedCartan>> {
    let gram = sys.gram();
    let k = target.outside.len();
    let split_basis = cartan.eigenspace(-1);
    {
        // a = orthogonal complement of w inside the split part
        let f_basis: Vec<Vec<Q>> = {
            let coeffs: Vec<Vec<Q>> = w
                .iter()
                .map(|wv| {
                    split_basis
                        .iter()
                        .map(|b| linalg::form(gram, wv, b))
                        .collect()
                })
                .collect();
            let ns = linalg::nullspace(&coeffs, split_basis.len());
            ns.iter()
                .map(|c| {
                    let mut v = vec![Q::zero(); sys.rank()];
                    for (ci, b) in c.iter().zip(&split_basis) {
                        for (o, x) in v.iter_mut().zip(b) {
                            *o += *ci * *x;
                        }
                    }
                    v
                })
                .collect()
        };
        if f_basis.len() != k {
            return Ok(None);
        }
        let weights: Vec<Vec<Q>> = (0..sys.len())
            .map(|i| {
                let a = linalg::to_q(sys.root(i));
                f_basis.iter().map(|fv| linalg::form(gram, &a, fv)).collect()
            })
            .collect();
        let Some(levels) = match_weights(&weights, target, budget) else {
            return Ok(None);
        };
        let levi: Vec<usize> = (0..sys.len()).filter(|&i| linalg::is_zero(&weights[i])).collect();
        if levi.iter().any(|&i| cartan.class[i] == RootClass::Real) {
            return Ok(None);
        }
        let nilradical: Vec<usize> = levels.keys().copied().collect();

        let plus = cartan.eigenspace(1);
        let levi_span: Vec<Vec<Q>> = levi.iter().map(|&i| linalg::to_q(sys.root(i))).collect();
        let c_prime = canonical(
            &levi_span
                .iter()
                .map(|a| {
                    let ta = cartan.apply_q(a);
                    linalg::scale(&linalg::add(a, &ta), Q::new(1, 2))
                })
                .collect::<Vec<_>>(),
        );
        let c = orthogonal_complement(gram, &plus, &c_prime);
        let mut adapted = AdaptedCartan {
            base: cartan.clone(),
            parabolic: s.clone(),
            levi,
            nilradical,
            c,
            a: f_basis,
            c_prime,
            a_prime: w,
            levels: BTreeMap::new(),
        };
        // re-index levels by the descriptor numbering of the outside roots
        let mut order: Vec<(usize, usize)> = target
            .outside
            .iter()
            .enumerate()
            .map(|(pos, &j)| (j, pos))
            .collect();
        order.sort();
        adapted.levels = levels
            .into_iter()
            .map(|(i, lv)| (i, order.iter().map(|&(_, pos)| lv[pos]).collect()))
            .collect();
        let (dc, da, dcp, dap) = adapted.dims();
        if dc + da + dcp + dap != sys.rank() {
            return Err(Error::Invariant("adapted Cartan pieces do not span h".into()));
        }
        Ok(Some(adapted))
    }
}

/// Basis of `{v ∈ span(space) : (v, u) = 0 for u ∈ sub}`.
fn orthogonal_complement(gram: &[Vec<Q>], space: &[Vec<Q>], sub: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if sub.is_empty() {
        return space.to_vec();
    }
    let coeffs: Vec<Vec<Q>> = sub
        .iter()
        .map(|u| space.iter().map(|b| linalg::form(gram, u, b)).collect())
        .collect();
    linalg::nullspace(&coeffs, space.len())
        .iter()
        .map(|c| {
            let mut v = vec![Q::zero(); gram.len()];
            for (ci, b) in c.iter().zip(space) {
                for (o, x) in v.iter_mut().zip(b) {
                    *o += *ci * *x;
                }
            }
            v
        })
        .collect()
}

/// Matches computed `a`-weights (one per root) against the target levels.
/// Returns the level vector of every positive root outside the Levi.
fn match_weights(
    weights: &[Vec<Q>],
    target: &Target,
    budget: &mut usize,
) -> Option<BTreeMap<usize, Vec<i64>>> {
    let k = target.outside.len();
    if k == 0 {
        return weights.iter().all(|w| linalg::is_zero(w)).then(BTreeMap::new);
    }
    let mut mult: HashMap<Vec<Q>, u32> = HashMap::new();
    for w in weights {
        if !linalg::is_zero(w) {
            *mult.entry(w.clone()).or_default() += 1;
        }
    }
    let total_target: u32 = target.levels.values().sum();
    if mult.values().sum::<u32>() != 2 * total_target {
        return None;
    }
    let mut distinct: Vec<Vec<Q>> = mult.keys().cloned().collect();
    distinct.sort();
    // levels supported on the first r search coordinates, grouped by r
    let mut by_prefix: Vec<Vec<(&Vec<i64>, u32)>> = vec![Vec::new(); k + 1];
    for (lv, &m) in &target.levels {
        let last = lv.iter().rposition(|&x| x != 0).expect("nonzero level");
        by_prefix[last + 1].push((lv, m));
    }
    let mut chosen: Vec<Vec<Q>> = Vec::new();
    if !extend(&distinct, &mult, target, &by_prefix, &mut chosen, budget) {
        return None;
    }
    let inv = linalg::inverse(&transpose(&chosen))?;
    let mut out = BTreeMap::new();
    for (i, w) in weights.iter().enumerate() {
        if linalg::is_zero(w) {
            continue;
        }
        let lv = linalg::mat_vec(&inv, w);
        if lv.iter().any(|x| !x.is_integer()) {
            return None;
        }
        let lv: Vec<i64> = lv.iter().map(|x| x.to_integer()).collect();
        let pos = lv.iter().all(|&x| x >= 0);
        let neg = lv.iter().all(|&x| x <= 0);
        if !(pos || neg) {
            return None;
        }
        if pos {
            if target.levels.get(&lv) != Some(&mult[w]) {
                return None;
            }
            out.insert(i, lv);
        }
    }
    Some(out)
}

fn transpose(cols: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = cols.first().map_or(0, |c| c.len());
    (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

fn extend(
    distinct: &[Vec<Q>],
    mult: &HashMap<Vec<Q>, u32>,
    target: &Target,
    by_prefix: &[Vec<(&Vec<i64>, u32)>],
    chosen: &mut Vec<Vec<Q>>,
    budget: &mut usize,
) -> bool {
    let r = chosen.len();
    if r == target.outside.len() {
        return true;
    }
    for cand in distinct {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        if mult[cand] != target.simple_mult[r] {
            continue;
        }
        chosen.push(cand.clone());
        if linalg::rank(chosen) == chosen.len() {
            let ok = by_prefix[r + 1].iter().all(|(lv, m)| {
                let mut w = vec![Q::zero(); cand.len()];
                for (c, b) in lv.iter().zip(chosen.iter()) {
                    if *c != 0 {
                        for (o, x) in w.iter_mut().zip(b) {
                            *o += Q::from(*c) * *x;
                        }
                    }
                }
                mult.get(&w) == Some(m)
            });
            if ok
                && span_consistent(distinct, mult, target, chosen)
                && extend(distinct, mult, target, by_prefix, chosen, budget)
            {
                return true;
            }
        }
        chosen.pop();
    }
    false
}

/// Every weight already in the span of the chosen simple weights must sit at
/// a one-signed integral target level with the right multiplicity.
fn span_consistent(
    distinct: &[Vec<Q>],
    mult: &HashMap<Vec<Q>, u32>,
    target: &Target,
    chosen: &[Vec<Q>],
) -> bool {
    let k = target.outside.len();
    distinct.iter().all(|w| {
        let Some(c) = linalg::coordinates(chosen, w) else {
            return true;
        };
        if c.iter().any(|x| !x.is_integer()) {
            return false;
        }
        let mut lv: Vec<i64> = c.iter().map(|x| x.to_integer()).collect();
        if lv.iter().all(|&x| x <= 0) {
            lv.iter_mut().for_each(|x| *x = -*x);
        } else if lv.iter().any(|&x| x < 0) {
            return false;
        }
        lv.resize(k, 0);
        target.levels.get(&lv) == Some(&mult[w])
    })
}

/// Checks the maximally split Cartan against the Satake record: split rank
/// and the full multiset of restricted roots with multiplicities.
pub fn check_satake_consistency(f: &RealForm) -> Result<()> {
    let bad = |m: String| Error::Validation {
        form: f.id.clone(),
        message: m,
    };
    let split = maximally_split(f)?;
    if split.dim_a != f.satake.dim_a0 {
        return Err(bad(format!(
            "maximally split Cartan has dim a = {}, Satake record says {}",
            split.dim_a, f.satake.dim_a0
        )));
    }
    if f.is_compact() {
        return Ok(());
    }
    let s = ParabolicSubset::borel();
    let rs = f.restricted_root_system()?;
    let target = Target::new(&rs, &s);
    let mut budget = ADAPTED_SEARCH_BUDGET;
    match search_cartan(&f.system, &split, &target, &s, &mut budget)? {
        Some(_) => Ok(()),
        None => Err(bad(
            "restricted roots of the maximally split Cartan do not match the Satake multiplicities"
                .into(),
        )),
    }
}

/// Sanity value used by tests: counts per class.
pub fn class_counts(c: &ThetaCartan) -> BTreeMap<RootClass, usize> {
    let mut m = BTreeMap::new();
    for &k in &c.class {
        *m.entry(k).or_default() += 1;
    }
    m
}

/// True if `x` pairs nonnegatively with every root in `roots` (as `h*`
/// vectors under the gram form).
pub fn nonnegative_on(gram: &[Vec<Q>], x: &[Q], roots: &[Vec<Q>]) -> bool {
    roots.iter().all(|r| !linalg::form(gram, x, r).is_negative())
}
