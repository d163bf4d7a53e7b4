//! Small dense exact linear algebra over [`Q`].
//!
//! Dimensions never exceed twice the largest rank in the catalog (16), so
//! plain Gaussian elimination is all that is needed.

use num_traits::{One, Zero};

use crate::Q;

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

/// Bilinear form `aᵀ G b`.
pub fn form(gram: &[Vec<Q>], a: &[Q], b: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += *ai * gram[i][j] * *bj;
            }
        }
    }
    acc
}

pub fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from_integer(x)).collect()
}

pub fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

pub fn scale(a: &[Q], s: Q) -> Vec<Q> {
    a.iter().map(|x| *x * s).collect()
}

pub fn is_zero(a: &[Q]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn mat_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / m[r][c];
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..cols {
                    let d = f * m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(vectors: &[Vec<Q>]) -> usize {
    let mut m = vectors.to_vec();
    rref(&mut m).len()
}

/// A basis (in reduced echelon form) of the span of `vectors`.
pub fn span_basis(vectors: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut m = vectors.to_vec();
    let k = rref(&mut m).len();
    m.truncate(k);
    m
}

/// Solves `Σ c_i basis_i = v`. The basis must be linearly independent;
/// returns `None` when `v` is outside the span.
pub fn coordinates(basis: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    let k = basis.len();
    let n = v.len();
    // augmented system with basis vectors as columns
    let mut m: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = basis.iter().map(|b| b[i]).collect();
            row.push(v[i]);
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&k) {
        return None;
    }
    if pivots.len() < k {
        return None;
    }
    let mut out = vec![Q::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        out[c] = m[row][k];
    }
    Some(out)
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Q::zero(); ncols];
            x[f] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = -m[row][f];
            }
            x
        })
        .collect()
}

/// Orthogonal projection of `v` onto `span(basis)` with respect to `gram`.
/// The basis must be linearly independent and the form nondegenerate on it.
pub fn project(gram: &[Vec<Q>], basis: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    Projector::new(gram, basis).apply(v)
}

/// [`project`] with the Gram inverse computed once.
pub struct Projector<'a> {
    gram: &'a [Vec<Q>],
    basis: &'a [Vec<Q>],
    inv: Vec<Vec<Q>>,
}

impl<'a> Projector<'a> {
    pub fn new(gram: &'a [Vec<Q>], basis: &'a [Vec<Q>]) -> Self {
        let g: Vec<Vec<Q>> = basis
            .iter()
            .map(|a| basis.iter().map(|b| form(gram, a, b)).collect())
            .collect();
        let inv = if basis.is_empty() {
            Vec::new()
        } else {
            inverse(&g).expect("Gram matrix of an independent set is invertible")
        };
        Self { gram, basis, inv }
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); v.len()];
        if self.basis.is_empty() {
            return out;
        }
        let rhs: Vec<Q> = self.basis.iter().map(|a| form(self.gram, a, v)).collect();
        let c = mat_vec(&self.inv, &rhs);
        for (ci, b) in c.iter().zip(self.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += *ci * *x;
            }
        }
        out
    }
}
