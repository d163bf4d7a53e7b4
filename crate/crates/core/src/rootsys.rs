//! Complex root systems in simple-root coordinates.
//!
//! Roots are integer vectors in the basis of simple roots; functionals are
//! rational vectors in the basis of fundamental weights, so that coordinate
//! `i` of a functional is its pairing with the simple coroot `α_i∨`.
//! Simple roots are numbered as in Bourbaki.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::{Error, Result, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

/// A simple Cartan type `X_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    series: Series,
    rank: usize,
}

impl CartanType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let constraint = match series {
            Series::A if rank < 1 => Some("A requires rank >= 1"),
            Series::B if rank < 2 => Some("B requires rank >= 2"),
            Series::C if rank < 3 => Some("C requires rank >= 3"),
            Series::D if rank < 4 => Some("D requires rank >= 4"),
            Series::E if !(6..=8).contains(&rank) => Some("E requires rank 6, 7 or 8"),
            Series::F if rank != 4 => Some("F requires rank 4"),
            Series::G if rank != 2 => Some("G requires rank 2"),
            _ => None,
        };
        match constraint {
            Some(constraint) => Err(Error::InvalidCartanType {
                series: series.letter(),
                rank,
                constraint,
            }),
            None => Ok(Self { series, rank }),
        }
    }

    /// Like [`CartanType::new`] but also accepts `C2`, which is `B2` with the
    /// simple roots swapped. Restricted root systems of type `C_2` occur in the
    /// catalog and are kept under their conventional name.
    pub fn new_lenient(series: Series, rank: usize) -> Result<Self> {
        if series == Series::C && rank == 2 {
            return Ok(Self { series, rank });
        }
        Self::new(series, rank)
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.series, Series::A | Series::D | Series::E)
    }

    /// Inner products `(α_i, α_j)` of the simple roots, long roots of
    /// squared length 2.
    pub fn gram(&self) -> Vec<Vec<Q>> {
        let n = self.rank;
        let mut g = vec![vec![Q::zero(); n]; n];
        let half = Q::new(1, 2);
        let bond = |g: &mut Vec<Vec<Q>>, i: usize, j: usize, v: Q| {
            g[i][j] = v;
            g[j][i] = v;
        };
        match self.series {
            Series::A => {
                for i in 0..n {
                    g[i][i] = Q::from(2);
                }
                for i in 1..n {
                    bond(&mut g, i - 1, i, -Q::one());
                }
            }
            Series::B => {
                for i in 0..n {
                    g[i][i] = Q::from(2);
                }
                g[n - 1][n - 1] = Q::one();
                for i in 1..n {
                    bond(&mut g, i - 1, i, -Q::one());
                }
            }
            Series::C => {
                for i in 0..n {
                    g[i][i] = Q::one();
                }
                g[n - 1][n - 1] = Q::from(2);
                for i in 1..n - 1 {
                    bond(&mut g, i - 1, i, -half);
                }
                bond(&mut g, n - 2, n - 1, -Q::one());
            }
            Series::D => {
                for i in 0..n {
                    g[i][i] = Q::from(2);
                }
                for i in 1..n - 1 {
                    bond(&mut g, i - 1, i, -Q::one());
                }
                bond(&mut g, n - 3, n - 1, -Q::one());
            }
            Series::E => {
                for i in 0..n {
                    g[i][i] = Q::from(2);
                }
                bond(&mut g, 0, 2, -Q::one());
                bond(&mut g, 1, 3, -Q::one());
                for i in 3..n {
                    bond(&mut g, i - 1, i, -Q::one());
                }
            }
            Series::F => {
                g[0][0] = Q::from(2);
                g[1][1] = Q::from(2);
                g[2][2] = Q::one();
                g[3][3] = Q::one();
                bond(&mut g, 0, 1, -Q::one());
                bond(&mut g, 1, 2, -Q::one());
                bond(&mut g, 2, 3, -half);
            }
            Series::G => {
                g[0][0] = Q::new(2, 3);
                g[1][1] = Q::from(2);
                bond(&mut g, 0, 1, -Q::one());
            }
        }
        g
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let series = match chars.next() {
            Some('A') => Series::A,
            Some('B') => Series::B,
            Some('C') => Series::C,
            Some('D') => Series::D,
            Some('E') => Series::E,
            Some('F') => Series::F,
            Some('G') => Series::G,
            _ => return Err(Error::UnknownCartanType(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnknownCartanType(s.to_string()))?;
        CartanType::new_lenient(series, rank)
    }
}

/// A linear functional on a Cartan subalgebra in fundamental-weight
/// coordinates: `coords[i] = ⟨λ, α_i∨⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunctional {
    pub coords: Vec<Q>,
}

impl RationalFunctional {
    pub fn new(coords: Vec<Q>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(linalg::to_q(coords))
    }

    pub fn zero(rank: usize) -> Self {
        Self::new(vec![Q::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn scaled(&self, s: Q) -> Self {
        Self::new(linalg::scale(&self.coords, s))
    }

    pub fn neg(&self) -> Self {
        self.scaled(-Q::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(linalg::add(&self.coords, &other.coords))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(linalg::sub(&self.coords, &other.coords))
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero(&self.coords)
    }
}

impl fmt::Display for RationalFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_vec(&self.coords))
    }
}

pub fn fmt_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn fmt_ivec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Parses `"1,-2,1/2"` into rationals.
pub fn parse_coords(s: &str) -> Result<Vec<Q>> {
    s.split(',')
        .map(|p| p.trim())
        .map(|p| {
            p.parse::<Q>().map_err(|_| Error::Parse {
                path: "<input>".into(),
                message: format!("`{p}` is not a rational number"),
            })
        })
        .collect()
}

/// The Levi subset `S` of simple indices defining a standard parabolic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParabolicSubset {
    pub levi: BTreeSet<usize>,
}

impl ParabolicSubset {
    pub fn new(levi: impl IntoIterator<Item = usize>) -> Self {
        Self {
            levi: levi.into_iter().collect(),
        }
    }

    pub fn borel() -> Self {
        Self::default()
    }

    pub fn full(rank: usize) -> Self {
        Self::new(0..rank)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.levi.contains(&i)
    }

    pub fn is_proper(&self, rank: usize) -> bool {
        self.levi.len() < rank
    }

    /// Every subset of `0..rank`, ordered by bitmask.
    pub fn all(rank: usize) -> Vec<Self> {
        (0u32..(1 << rank))
            .map(|mask| Self::new((0..rank).filter(|i| mask & (1 << i) != 0)))
            .collect()
    }
}

impl fmt::Display for ParabolicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levi.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A (possibly reducible) complex root system.
#[derive(Debug, Clone)]
pub struct RootSystem {
    components: Vec<CartanType>,
    rank: usize,
    gram: Vec<Vec<Q>>,
    cartan: Vec<Vec<i64>>,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    half_norms: Vec<Q>,
    index: HashMap<Vec<i64>, usize>,
}

impl RootSystem {
    pub fn new(t: CartanType) -> Self {
        Self::from_components(&[t])
    }

    /// Orthogonal sum of simple systems; simple roots are numbered component
    /// by component.
    pub fn from_components(components: &[CartanType]) -> Self {
        let rank: usize = components.iter().map(|c| c.rank()).sum();
        let mut gram = vec![vec![Q::zero(); rank]; rank];
        let mut off = 0;
        for c in components {
            let g = c.gram();
            for i in 0..c.rank() {
                for j in 0..c.rank() {
                    gram[off + i][off + j] = g[i][j];
                }
            }
            off += c.rank();
        }
        Self::from_gram(components.to_vec(), gram)
    }

    fn from_gram(components: Vec<CartanType>, gram: Vec<Vec<Q>>) -> Self {
        let rank = gram.len();
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        let v = Q::from(2) * gram[i][j] / gram[i][i];
                        assert!(v.is_integer(), "non-crystallographic gram matrix");
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();

        // closure of the simple roots under simple reflections
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = VecDeque::new();
        for i in 0..rank {
            let mut e = vec![0; rank];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 0..rank {
                let p: i64 = (0..rank).map(|j| cartan[i][j] * beta[j]).sum();
                let mut r = beta.clone();
                r[i] -= p;
                if seen.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
        roots.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| a.cmp(b))
        });

        let half = |v: &[i64]| {
            let vq = linalg::to_q(v);
            linalg::form(&gram, &vq, &vq) / Q::from(2)
        };
        let half_norms: Vec<Q> = roots.iter().map(|r| half(r)).collect();
        let coroots: Vec<Vec<i64>> = roots
            .iter()
            .zip(&half_norms)
            .map(|(r, d)| {
                r.iter()
                    .enumerate()
                    .map(|(j, &c)| {
                        let v = Q::from(c) * gram[j][j] / Q::from(2) / *d;
                        assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        let index = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        Self {
            components,
            rank,
            gram,
            cartan,
            roots,
            coroots,
            half_norms,
            index,
        }
    }

    pub fn components(&self) -> &[CartanType] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `cartan()[i][j] = ⟨α_j, α_i∨⟩`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn gram(&self) -> &[Vec<Q>] {
        &self.gram
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    /// Coroot of root `i` in simple-coroot coordinates.
    pub fn coroot(&self, i: usize) -> &[i64] {
        &self.coroots[i]
    }

    /// `(α, α) / 2`; equals 1 on long roots.
    pub fn half_norm(&self, i: usize) -> Q {
        self.half_norms[i]
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn index_of(&self, root: &[i64]) -> Option<usize> {
        self.index.get(root).copied()
    }

    pub fn negative(&self, i: usize) -> usize {
        let neg: Vec<i64> = self.roots[i].iter().map(|x| -x).collect();
        self.index[&neg]
    }

    pub fn is_positive(&self, i: usize) -> bool {
        self.roots[i].iter().any(|&c| c > 0)
    }

    pub fn height(&self, i: usize) -> i64 {
        self.roots[i].iter().sum()
    }

    pub fn positive_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.is_positive(i))
    }

    pub fn simple_index(&self, i: usize) -> usize {
        let mut e = vec![0; self.rank];
        e[i] = 1;
        self.index[&e]
    }

    /// Fundamental-weight coordinates of a vector of the root lattice.
    pub fn weight_of(&self, v: &[Q]) -> RationalFunctional {
        RationalFunctional::new(
            (0..self.rank)
                .map(|i| {
                    (0..self.rank)
                        .map(|j| Q::from(self.cartan[i][j]) * v[j])
                        .sum()
                })
                .collect(),
        )
    }

    pub fn root_weight(&self, i: usize) -> RationalFunctional {
        self.weight_of(&linalg::to_q(&self.roots[i]))
    }

    /// Simple-root coordinates of a functional given in fundamental-weight
    /// coordinates.
    pub fn root_coords(&self, lambda: &RationalFunctional) -> Vec<Q> {
        let c: Vec<Vec<Q>> = self
            .cartan
            .iter()
            .map(|row| linalg::to_q(row))
            .collect();
        let inv = linalg::inverse(&c).expect("Cartan matrix is invertible");
        linalg::mat_vec(&inv, &lambda.coords)
    }

    /// `⟨λ, α∨⟩` for the root with index `i`.
    pub fn pair_index(&self, lambda: &RationalFunctional, i: usize) -> Q {
        self.coroots[i]
            .iter()
            .zip(&lambda.coords)
            .map(|(&c, l)| Q::from(c) * *l)
            .sum()
    }

    /// `⟨λ, α∨⟩`; errors if `alpha` is not a root.
    pub fn pairing(&self, lambda: &RationalFunctional, alpha: &[i64]) -> Result<Q> {
        if lambda.rank() != self.rank {
            return Err(Error::Dimension {
                expected: self.rank,
                got: lambda.rank(),
            });
        }
        let i = self
            .index_of(alpha)
            .ok_or_else(|| Error::NotARoot(fmt_ivec(alpha)))?;
        Ok(self.pair_index(lambda, i))
    }

    /// `⟨v, α∨⟩` for `v` in simple-root coordinates.
    pub fn pair_vec(&self, v: &[Q], i: usize) -> Q {
        let mut acc = Q::zero();
        for (k, &c) in self.coroots[i].iter().enumerate() {
            if c != 0 {
                let w: Q = (0..self.rank)
                    .map(|j| Q::from(self.cartan[k][j]) * v[j])
                    .sum();
                acc += Q::from(c) * w;
            }
        }
        acc
    }

    /// Reflection `s_α(v) = v - ⟨v, α∨⟩ α` on simple-root coordinates.
    pub fn reflect_vec(&self, v: &[Q], i: usize) -> Vec<Q> {
        let p = self.pair_vec(v, i);
        v.iter()
            .zip(&self.roots[i])
            .map(|(x, &a)| *x - p * Q::from(a))
            .collect()
    }

    /// Simple reflection on a functional in fundamental-weight coordinates.
    pub fn simple_reflect(&self, lambda: &RationalFunctional, i: usize) -> RationalFunctional {
        let li = lambda.coords[i];
        RationalFunctional::new(
            (0..self.rank)
                .map(|j| lambda.coords[j] - li * Q::from(self.cartan[j][i]))
                .collect(),
        )
    }

    /// Weyl orbit of `lambda`, built lazily from simple reflections.
    /// Fails once the orbit exceeds `limit` points.
    pub fn weyl_orbit(
        &self,
        lambda: &RationalFunctional,
        limit: usize,
    ) -> Result<Vec<RationalFunctional>> {
        let mut seen: HashSet<RationalFunctional> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(lambda.clone());
        queue.push_back(lambda.clone());
        while let Some(mu) = queue.pop_front() {
            for i in 0..self.rank {
                if mu.coords[i].is_zero() {
                    continue;
                }
                let nu = self.simple_reflect(&mu, i);
                if !seen.contains(&nu) {
                    if seen.len() >= limit {
                        return Err(Error::Precondition(format!(
                            "Weyl orbit exceeds {limit} points"
                        )));
                    }
                    seen.insert(nu.clone());
                    queue.push_back(nu);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// `ρ` in fundamental-weight coordinates, computed as the half-sum of the
    /// positive roots.
    pub fn rho(&self) -> RationalFunctional {
        let mut sum = vec![Q::zero(); self.rank];
        for i in self.positive_indices() {
            for (s, &c) in sum.iter_mut().zip(&self.roots[i]) {
                *s += Q::from(c);
            }
        }
        self.weight_of(&linalg::scale(&sum, Q::new(1, 2)))
    }

    /// `ρ∨` in simple-coroot coordinates: half-sum of the positive coroots.
    pub fn rho_check(&self) -> Vec<Q> {
        let mut sum = vec![Q::zero(); self.rank];
        for i in self.positive_indices() {
            for (s, &c) in sum.iter_mut().zip(&self.coroots[i]) {
                *s += Q::from(c);
            }
        }
        linalg::scale(&sum, Q::new(1, 2))
    }

    /// `⟨α, ρ∨⟩` for root `i`.
    pub fn pair_rho_check(&self, rho_check: &[Q], i: usize) -> Q {
        let w = self.root_weight(i);
        w.coords.iter().zip(rho_check).map(|(a, b)| *a * *b).sum()
    }

    pub fn rho_and_rho_check(&self) -> (RationalFunctional, Vec<Q>) {
        (self.rho(), self.rho_check())
    }

    /// Splits the roots for the standard parabolic with Levi subset `s`:
    /// `Δ(l)` (both signs) and `Δ(n)` (positive roots outside the Levi).
    pub fn parabolic_split(&self, s: &ParabolicSubset) -> (Vec<usize>, Vec<usize>) {
        let mut levi = Vec::new();
        let mut nil = Vec::new();
        for (i, r) in self.roots.iter().enumerate() {
            let outside = r
                .iter()
                .enumerate()
                .any(|(j, &c)| c != 0 && !s.contains(j));
            if !outside {
                levi.push(i);
            } else if self.is_positive(i) {
                nil.push(i);
            }
        }
        (levi, nil)
    }

    /// Smallest nilradical over proper parabolics, attained on a maximal one.
    /// Returns `(dim n, dropped simple index)`.
    pub fn min_nilradical(&self) -> (usize, usize) {
        (0..self.rank)
            .map(|i| {
                let s = ParabolicSubset::new((0..self.rank).filter(|&j| j != i));
                (self.parabolic_split(&s).1.len(), i)
            })
            .min()
            .expect("rank >= 1")
    }

    /// First positive root on which `lambda` vanishes, if any.
    pub fn first_singular(&self, lambda: &RationalFunctional) -> Option<usize> {
        self.positive_indices()
            .find(|&i| self.pair_index(lambda, i).is_zero())
    }

    /// Index of the first root whose coroot pairs non-integrally or to zero.
    pub fn first_irregular(&self, lambda: &RationalFunctional) -> Option<(usize, Q)> {
        self.positive_indices().find_map(|i| {
            let p = self.pair_index(lambda, i);
            (p.is_zero() || !p.is_integer()).then_some((i, p))
        })
    }

    pub fn is_dominant_regular(&self, lambda: &RationalFunctional) -> bool {
        lambda.coords.iter().all(|c| c.is_positive())
    }
}
