//! Exact linear algebra over the coefficient field: an incremental row
//! echelon span for rank/growth computations, a nullspace solver for
//! centralizer systems, and a fraction-free Bareiss rank over the rationals
//! used as an independent cross-check on rational data.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalars::{Scalar, Tower};

/// Sparse vector keyed by an ordered index type.
pub type SparseVec<K> = BTreeMap<K, Scalar>;

/// Incrementally maintained row echelon basis. Rows are normalized so the
/// pivot (largest key) has coefficient one.
pub struct IncrementalSpan<K: Ord + Clone> {
    tower: Tower,
    rows: BTreeMap<K, SparseVec<K>>,
    total_terms: usize,
}

impl<K: Ord + Clone> IncrementalSpan<K> {
    pub fn new(tower: Tower) -> Self {
        IncrementalSpan { tower, rows: BTreeMap::new(), total_terms: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn total_terms(&self) -> usize {
        self.total_terms
    }

    /// Residual of `v` after eliminating all pivots; empty iff `v` is in the span.
    pub fn reduce(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        loop {
            let Some((key, coeff)) = v.last_key_value().map(|(k, c)| (k.clone(), c.clone()))
            else {
                return v;
            };
            let Some(row) = self.rows.get(&key) else {
                return v;
            };
            // v -= coeff * row  (row is normalized with pivot coefficient 1)
            for (k, c) in row {
                let delta = self.tower.mul(&coeff, c);
                match v.remove(k) {
                    Some(old) => {
                        let new = self.tower.sub(&old, &delta);
                        if !self.tower.is_zero(&new) {
                            v.insert(k.clone(), new);
                        }
                    }
                    None => {
                        v.insert(k.clone(), self.tower.neg(&delta));
                    }
                }
            }
        }
    }

    /// Insert a vector; returns true when it enlarged the span.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let mut v = self.reduce(v);
        let Some((pivot, lead)) = v.last_key_value().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = self.tower.inv(&lead).expect("nonzero leading coefficient");
        for c in v.values_mut() {
            *c = self.tower.mul(c, &inv);
        }
        self.total_terms += v.len();
        self.rows.insert(pivot, v);
        true
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// The normalized echelon rows.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values()
    }
}

/// Exact nullspace of the sparse row system `rows * x = 0` in `ncols`
/// unknowns. Returns a basis of column vectors.
#[allow(clippy::needless_range_loop)]
pub fn nullspace(tower: &Tower, rows: &[SparseVec<usize>], ncols: usize) -> Vec<Vec<Scalar>> {
    // Row-echelon reduce the row space first so the dense phase sees at most
    // `ncols` rows.
    let mut span = IncrementalSpan::new(tower.clone());
    for r in rows {
        span.insert(r.clone());
    }
    let mut dense: Vec<Vec<Scalar>> = span
        .rows()
        .map(|r| {
            let mut row = vec![tower.zero(); ncols];
            for (k, c) in r {
                row[*k] = c.clone();
            }
            row
        })
        .collect();

    // Gauss-Jordan to reduced row echelon form.
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(p) = (rank..dense.len()).find(|&r| !tower.is_zero(&dense[r][col])) else {
            continue;
        };
        dense.swap(rank, p);
        let inv = tower.inv(&dense[rank][col]).expect("pivot nonzero");
        for c in col..ncols {
            dense[rank][c] = tower.mul(&dense[rank][c], &inv);
        }
        for r in 0..dense.len() {
            if r != rank && !tower.is_zero(&dense[r][col]) {
                let factor = dense[r][col].clone();
                for c in col..ncols {
                    let sub = tower.mul(&factor, &dense[rank][c]);
                    dense[r][c] = tower.sub(&dense[r][c], &sub);
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }

    let mut basis = Vec::new();
    let pivot_set: std::collections::BTreeSet<usize> = pivot_cols.iter().copied().collect();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![tower.zero(); ncols];
        v[free] = tower.one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            // x_pc = -sum over free columns
            v[pc] = tower.neg(&dense[r][free]);
        }
        basis.push(v);
    }
    basis
}

/// Rank of a rational matrix by fraction-free Bareiss elimination on the
/// denominator-cleared integer matrix.
pub fn bareiss_rank(rows: &[Vec<BigRational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, q| {
                let d = q.denom();
                if d.is_one() { acc } else { num_integer::lcm(acc, d.clone()) }
            });
            row.iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect()
        })
        .collect();
    let nrows = m.len();
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    let mut col = 0usize;
    while rank < nrows && col < ncols {
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let t = &m[i][j] * &m[rank][col] - &m[i][col] * &m[rank][j];
                m[i][j] = t / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        col += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{random_scalar, sqrt2_tower, XorShift};

    fn sv(entries: &[(usize, i64)], tower: &Tower) -> SparseVec<usize> {
        entries
            .iter()
            .map(|&(k, v)| (k, tower.from_int(v)))
            .collect()
    }

    #[test]
    fn span_rank_counts_independent_rows() {
        let t = Tower::rationals();
        let mut span = IncrementalSpan::new(t.clone());
        assert!(span.insert(sv(&[(0, 1), (1, 2)], &t)));
        assert!(span.insert(sv(&[(1, 1)], &t)));
        assert!(!span.insert(sv(&[(0, 2), (1, 5)], &t)));
        assert_eq!(span.rank(), 2);
        assert!(span.contains(&sv(&[(0, 7), (1, -3)], &t)));
        assert!(!span.contains(&sv(&[(2, 1)], &t)));
    }

    #[test]
    fn nullspace_solves_small_system() {
        let t = Tower::rationals();
        // x0 + x1 - x2 = 0 ; x1 + x2 = 0  ->  kernel spanned by (2, -1, 1)
        let rows = vec![sv(&[(0, 1), (1, 1), (2, -1)], &t), sv(&[(1, 1), (2, 1)], &t)];
        let basis = nullspace(&t, &rows, 3);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        for row in &rows {
            let mut acc = t.zero();
            for (k, c) in row {
                acc = t.add(&acc, &t.mul(c, &v[*k]));
            }
            assert!(t.is_zero(&acc));
        }
    }

    #[test]
    fn nullspace_over_algebraic_extension() {
        let t = sqrt2_tower();
        let r2 = t.constant("r2").unwrap();
        // x0 * r2 - x1 = 0  ->  kernel vector (1, r2)
        let rows = vec![BTreeMap::from([(0usize, r2.clone()), (1usize, t.from_int(-1))])];
        let basis = nullspace(&t, &rows, 2);
        assert_eq!(basis.len(), 1);
        let ratio = t.div(&basis[0][1], &basis[0][0]).unwrap();
        assert_eq!(ratio, r2);
    }

    #[test]
    fn span_rank_matches_bareiss_on_rationals() {
        let t = Tower::rationals();
        let mut rng = XorShift::new(77);
        for _ in 0..50 {
            let nrows = 1 + rng.below(6) as usize;
            let ncols = 1 + rng.below(6) as usize;
            let mut dense = Vec::new();
            let mut span = IncrementalSpan::new(t.clone());
            for _ in 0..nrows {
                let mut sparse = BTreeMap::new();
                for c in 0..ncols {
                    if rng.below(2) == 0 {
                        continue;
                    }
                    let s = random_scalar(&t, &mut rng);
                    if !t.is_zero(&s) {
                        sparse.insert(c, s);
                    }
                }
                let row: Vec<BigRational> = (0..ncols)
                    .map(|c| {
                        sparse
                            .get(&c)
                            .map(|s| t.to_rational(s).unwrap())
                            .unwrap_or_else(BigRational::zero)
                    })
                    .collect();
                dense.push(row);
                span.insert(sparse);
            }
            assert_eq!(span.rank(), bareiss_rank(&dense));
        }
    }
}
