//! Sparse exact linear algebra over the rationals.
//!
//! Every dimension count in the engine reduces to the rank of a sparse
//! matrix with rational entries. Ranks are computed by fraction-free
//! (Bareiss-style) elimination over big integers, after splitting the
//! matrix into connected components of its nonzero pattern; the graded
//! matrices showing up downstream decompose into many small blocks under
//! this splitting, which is what keeps the computations tractable.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar. Kept in lowest terms with a
/// positive denominator by `num_rational`.
pub type Rational = num_rational::BigRational;

pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Sparse matrix of rationals; only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Sets an entry; storing zero removes the entry.
    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "entry out of bounds");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::new(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix whose columns are the given coordinate vectors.
    pub fn from_columns(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        let mut m = ExactMatrix::new(ambient_dim, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: v.len(),
                });
            }
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x.clone());
                }
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> Self {
        let mut m = ExactMatrix::new(self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            m.set(c, r, v.clone());
        }
        m
    }

    /// Matrix product; used by tests to verify that differentials compose
    /// to zero and that kernel vectors really lie in the kernel.
    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut acc: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        // group other's entries by row for the sparse product
        let mut by_row: HashMap<usize, Vec<(usize, &Rational)>> = HashMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        for (&(r, k), v) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, w) in row {
                    let e = acc.entry((r, c)).or_insert_with(Rational::zero);
                    *e += v * w;
                }
            }
        }
        let mut m = ExactMatrix::new(self.rows, other.cols);
        for ((r, c), v) in acc {
            if !v.is_zero() {
                m.entries.insert((r, c), v);
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = vec![Rational::zero(); self.rows];
        for (&(r, c), e) in &self.entries {
            if !v[c].is_zero() {
                out[r] += e * &v[c];
            }
        }
        Ok(out)
    }

    fn integer_columns(&self) -> Vec<Vec<(u32, BigInt)>> {
        let mut cols: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); self.cols];
        for (&(r, c), v) in &self.entries {
            cols[c].push((r as u32, v.clone()));
        }
        cols.into_iter().map(|c| clear_denominators(&c)).collect()
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        rank_of_integer_columns(self.integer_columns())
    }

    /// Basis of the right kernel; `cols - rank` vectors, each verified
    /// against the matrix by the caller's tests.
    pub fn kernel_basis(&self) -> SubspaceBasis {
        // Dense rational row reduction; only used at moderate sizes.
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        {
            let mut dense: HashMap<usize, Vec<Rational>> = HashMap::new();
            for (&(r, c), v) in &self.entries {
                dense
                    .entry(r)
                    .or_insert_with(|| vec![Rational::zero(); self.cols])[c] = v.clone();
            }
            let mut keys: Vec<usize> = dense.keys().cloned().collect();
            keys.sort_unstable();
            for k in keys {
                rows.push(dense.remove(&k).unwrap());
            }
        }
        // reduced row echelon form
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut lead = 0usize;
        for c in 0..self.cols {
            let Some(pr) = (lead..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
                continue;
            };
            rows.swap(lead, pr);
            let inv = rows[lead][c].recip();
            for x in rows[lead].iter_mut() {
                *x *= &inv;
            }
            for r in 0..rows.len() {
                if r != lead && !rows[r][c].is_zero() {
                    let f = rows[r][c].clone();
                    for j in 0..self.cols {
                        let t = &rows[lead][j] * &f;
                        rows[r][j] -= t;
                    }
                }
            }
            pivot_cols.push(c);
            lead += 1;
            if lead == rows.len() {
                break;
            }
        }
        let mut vectors = Vec::new();
        let pivot_set: HashMap<usize, usize> = pivot_cols
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        for free in 0..self.cols {
            if pivot_set.contains_key(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (&pc, &pr) in &pivot_set {
                let coeff = -rows[pr][free].clone();
                if !coeff.is_zero() {
                    v[pc] = coeff;
                }
            }
            vectors.push(v);
        }
        SubspaceBasis {
            ambient_dim: self.cols,
            vectors,
        }
    }
}

/// A list of linearly independent coordinate vectors in a fixed ambient
/// coordinate space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    pub ambient_dim: usize,
    pub vectors: Vec<Vec<Rational>>,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Rank of the span of `vectors` inside a space of dimension `ambient_dim`.
pub fn span_dim(vectors: &[Vec<Rational>], ambient_dim: usize) -> Result<usize> {
    for v in vectors {
        if v.len() != ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                got: v.len(),
            });
        }
    }
    Ok(ExactMatrix::from_columns(ambient_dim, vectors)?.rank())
}

/// `ambient_dim - span_dim(subspace_vectors)`.
pub fn quotient_dim(ambient_dim: usize, subspace_vectors: &[Vec<Rational>]) -> Result<usize> {
    Ok(ambient_dim - span_dim(subspace_vectors, ambient_dim)?)
}

/// Multiplies a sparse rational column by the lcm of its denominators.
pub fn clear_denominators(col: &[(u32, Rational)]) -> Vec<(u32, BigInt)> {
    let mut lcm = BigInt::one();
    for (_, v) in col {
        lcm = num_integer::lcm(lcm, v.denom().clone());
    }
    let mut out: Vec<(u32, BigInt)> = col
        .iter()
        .map(|(r, v)| (*r, v.numer() * (&lcm / v.denom())))
        .collect();
    out.sort_unstable_by_key(|e| e.0);
    out
}

fn exact_div(a: BigInt, b: &BigInt) -> BigInt {
    debug_assert!((&a % b).is_zero(), "non-exact division in Bareiss step");
    a / b
}

/// `p*a - e*c`, entrywise over sorted sparse columns, divided by `prev`.
fn bareiss_combine(
    a: &[(u32, BigInt)],
    c: &[(u32, BigInt)],
    p: &BigInt,
    e: &BigInt,
    prev: &BigInt,
) -> Vec<(u32, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + c.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < c.len() {
        if j == c.len() || (i < a.len() && a[i].0 < c[j].0) {
            out.push((a[i].0, exact_div(p * &a[i].1, prev)));
            i += 1;
        } else if i == a.len() || c[j].0 < a[i].0 {
            out.push((c[j].0, exact_div(-(e * &c[j].1), prev)));
            j += 1;
        } else {
            let v = exact_div(p * &a[i].1 - e * &c[j].1, prev);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact rank of the matrix with the given sparse integer columns, via
/// connected-component splitting and fraction-free elimination.
pub fn rank_of_integer_columns(cols: Vec<Vec<(u32, BigInt)>>) -> usize {
    let cols: Vec<Vec<(u32, BigInt)>> = cols.into_iter().filter(|c| !c.is_empty()).collect();
    if cols.is_empty() {
        return 0;
    }
    // union-find over row indices; columns connect all their rows
    let mut parent: HashMap<u32, u32> = HashMap::new();
    fn find(parent: &mut HashMap<u32, u32>, x: u32) -> u32 {
        let p = *parent.entry(x).or_insert(x);
        if p == x {
            return x;
        }
        let root = find(parent, p);
        parent.insert(x, root);
        root
    }
    for col in &cols {
        let r0 = find(&mut parent, col[0].0);
        for (r, _) in &col[1..] {
            let r1 = find(&mut parent, *r);
            parent.insert(r1, r0);
        }
    }
    let mut components: HashMap<u32, Vec<Vec<(u32, BigInt)>>> = HashMap::new();
    for col in cols {
        let root = find(&mut parent, col[0].0);
        components.entry(root).or_default().push(col);
    }
    components.into_values().map(bareiss_rank).sum()
}

/// Fraction-free elimination on one connected component.
fn bareiss_rank(cols: Vec<Vec<(u32, BigInt)>>) -> usize {
    let mut active: Vec<Vec<(u32, BigInt)>> = cols;
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    loop {
        active.retain(|c| !c.is_empty());
        if active.is_empty() {
            return rank;
        }
        // pivot column: fewest nonzeros
        let ci = active
            .iter()
            .enumerate()
            .min_by_key(|(_, c)| c.len())
            .map(|(i, _)| i)
            .unwrap();
        let pivot_col = active.swap_remove(ci);
        // pivot row: least-filled row in the remaining columns, smallest
        // entry as tiebreaker, to limit fill-in and entry growth
        let mut row_count: HashMap<u32, usize> = HashMap::new();
        for c in &active {
            for (r, _) in c {
                *row_count.entry(*r).or_insert(0) += 1;
            }
        }
        let (pr, pv) = pivot_col
            .iter()
            .min_by_key(|(r, v)| (row_count.get(r).copied().unwrap_or(0), v.abs()))
            .map(|(r, v)| (*r, v.clone()))
            .unwrap();
        for col in active.iter_mut() {
            let e = col.iter().find(|(r, _)| *r == pr).map(|(_, v)| v.clone());
            *col = match e {
                Some(e) => bareiss_combine(col, &pivot_col, &pv, &e, &prev),
                None => col
                    .iter()
                    .map(|(r, v)| (*r, exact_div(&pv * v, &prev)))
                    .collect(),
            };
            col.retain(|(r, _)| *r != pr);
        }
        prev = pv;
        rank += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, data: &[(usize, usize, i64)]) -> ExactMatrix {
        let mut out = ExactMatrix::new(rows, cols);
        for &(r, c, v) in data {
            out.set(r, c, rat_int(v));
        }
        out
    }

    #[test]
    fn rank_identity() {
        assert_eq!(ExactMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn rank_proportional_rows() {
        assert_eq!(
            m(2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)]).rank(),
            1
        );
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(ExactMatrix::new(4, 7).rank(), 0);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert_eq!(ExactMatrix::identity(2).kernel_basis().dim(), 0);
    }

    #[test]
    fn kernel_of_difference_functional() {
        let k = m(1, 2, &[(0, 0, 1), (0, 1, -1)]).kernel_basis();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.vectors[0][0], k.vectors[0][1]);
    }

    #[test]
    fn kernel_of_zero_matrix_is_full() {
        assert_eq!(ExactMatrix::new(2, 3).kernel_basis().dim(), 3);
    }

    #[test]
    fn span_examples() {
        let one = Rational::one;
        let zero = Rational::zero;
        let vs = vec![
            vec![one(), zero()],
            vec![zero(), one()],
            vec![one(), one()],
        ];
        assert_eq!(span_dim(&vs, 2).unwrap(), 2);
        assert_eq!(span_dim(&[], 2).unwrap(), 0);
        assert_eq!(span_dim(&[vec![rat_int(2), rat_int(4)]], 2).unwrap(), 1);
    }

    #[test]
    fn span_dimension_mismatch_is_error() {
        assert!(span_dim(&[vec![Rational::one()]], 2).is_err());
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient_dim(5, &[]).unwrap(), 5);
        let full: Vec<Vec<Rational>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        assert_eq!(quotient_dim(3, &full).unwrap(), 0);
        let two = vec![
            vec![rat_int(1), rat_int(0), rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(1), rat_int(1), rat_int(0)],
        ];
        assert_eq!(quotient_dim(4, &two).unwrap(), 2);
    }

    #[test]
    fn kernel_vectors_multiply_to_zero() {
        let a = m(
            3,
            5,
            &[
                (0, 0, 2),
                (0, 2, -1),
                (1, 1, 3),
                (1, 3, 5),
                (2, 0, 1),
                (2, 4, 7),
            ],
        );
        let k = a.kernel_basis();
        assert_eq!(k.dim(), 5 - a.rank());
        for v in &k.vectors {
            assert!(a.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }
}
