//! The exponent module: a free abelian group of finite rank with an embedding
//! into the coefficient field, unimodular automorphisms, and the content
//! normal form used by the isomorphism decision.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::scalars::{Scalar, Tower};

/// Element of the exponent module, kept as integer coordinates in a fixed basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVec(pub Vec<i64>);

impl ExponentVec {
    pub fn zero(rank: usize) -> Self {
        ExponentVec(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        ExponentVec(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &ExponentVec) -> ExponentVec {
        ExponentVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ExponentVec) -> ExponentVec {
        ExponentVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> ExponentVec {
        ExponentVec(self.0.iter().map(|a| -a).collect())
    }

    /// Coordinate 1-norm; the contribution of this vector to monomial degree.
    pub fn norm1(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).sum()
    }

    /// gcd of absolute coordinate values (0 for the zero vector).
    pub fn content(&self) -> u64 {
        self.0.iter().fold(0u64, |g, &c| g.gcd(&c.unsigned_abs()))
    }
}

/// Square integer matrix with determinant +-1, acting on exponent coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleAutomorphism {
    /// Row-major r x r entries.
    pub rows: Vec<Vec<i64>>,
}

impl ModuleAutomorphism {
    pub fn identity(rank: usize) -> Self {
        let rows = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        ModuleAutomorphism { rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn apply(&self, v: &ExponentVec) -> ExponentVec {
        ExponentVec(
            self.rows
                .iter()
                .map(|row| row.iter().zip(&v.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn compose(&self, other: &ModuleAutomorphism) -> ModuleAutomorphism {
        let r = self.rank();
        let rows = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| (0..r).map(|k| self.rows[i][k] * other.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        ModuleAutomorphism { rows }
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> i64 {
        let n = self.rows.len();
        if n == 0 {
            return 1;
        }
        let mut m: Vec<Vec<i128>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[k][k] == 0 {
                match (k + 1..n).find(|&r| m[r][k] != 0) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
                m[i][k] = 0;
            }
            prev = m[k][k];
        }
        (sign * m[n - 1][n - 1]) as i64
    }

    pub fn is_unimodular(&self) -> bool {
        let d = self.determinant();
        d == 1 || d == -1
    }
}

/// The exponent module with its field embedding. Linear independence of the
/// embeddings over the rationals is recorded as a user assertion, not verified.
#[derive(Debug, Clone)]
pub struct ExponentModule {
    rank: usize,
    basis_embeddings: Vec<Scalar>,
    /// Coordinates of the distinguished element embedding to 1.
    one: ExponentVec,
}

impl ExponentModule {
    pub fn new(
        tower: &Tower,
        basis_embeddings: Vec<Scalar>,
        one: ExponentVec,
    ) -> Result<ExponentModule> {
        let rank = basis_embeddings.len();
        if rank == 0 {
            return Err(Error::Validation {
                path: "exponent_module.rank".into(),
                message: "rank must be >= 1".into(),
            });
        }
        if one.rank() != rank {
            return Err(Error::Validation {
                path: "exponent_module.one".into(),
                message: "distinguished combination has wrong rank".into(),
            });
        }
        let m = ExponentModule { rank, basis_embeddings, one: one.clone() };
        let e = m.embed(tower, &one);
        if !tower.is_one(&e) {
            return Err(Error::Validation {
                path: "exponent_module.one".into(),
                message: "distinguished combination does not embed to 1".into(),
            });
        }
        Ok(m)
    }

    /// Rank-1 module generated by 1.
    pub fn integers(tower: &Tower) -> ExponentModule {
        ExponentModule {
            rank: 1,
            basis_embeddings: vec![tower.one()],
            one: ExponentVec(vec![1]),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn one_vec(&self) -> &ExponentVec {
        &self.one
    }

    pub fn basis_embeddings(&self) -> &[Scalar] {
        &self.basis_embeddings
    }

    /// Field value of an exponent vector: the integer combination of the
    /// basis embeddings.
    pub fn embed(&self, tower: &Tower, v: &ExponentVec) -> Scalar {
        let mut acc = tower.zero();
        for (c, e) in v.0.iter().zip(&self.basis_embeddings) {
            if *c != 0 {
                acc = tower.add(&acc, &tower.mul(&tower.from_int(*c), e));
            }
        }
        acc
    }
}

/// Reduce a nonzero vector to `(g, 0, ..., 0)` with `g` the content, returning
/// the unimodular witness and its inverse. Column-style extended-gcd steps.
pub fn content_reduce(v: &ExponentVec) -> Result<(u64, ModuleAutomorphism, ModuleAutomorphism)> {
    if v.is_zero() {
        return Err(Error::ZeroExponentVector);
    }
    let r = v.rank();
    let mut cur = v.0.clone();
    let mut sigma = ModuleAutomorphism::identity(r);
    let mut sigma_inv = ModuleAutomorphism::identity(r);

    // elementary ops maintained on both the matrix and its inverse
    let add_row = |sigma: &mut ModuleAutomorphism,
                       sigma_inv: &mut ModuleAutomorphism,
                       cur: &mut Vec<i64>,
                       dst: usize,
                       src: usize,
                       k: i64| {
        cur[dst] += k * cur[src];
        for c in 0..r {
            let add = k * sigma.rows[src][c];
            sigma.rows[dst][c] += add;
        }
        // inverse picks up the opposite column operation
        for row in sigma_inv.rows.iter_mut() {
            let sub = k * row[dst];
            row[src] -= sub;
        }
    };

    // fold every coordinate into slot 0 by Euclid
    for i in 1..r {
        while cur[i] != 0 {
            if cur[0] == 0 {
                // swap slots 0 and i
                cur.swap(0, i);
                sigma.rows.swap(0, i);
                for row in sigma_inv.rows.iter_mut() {
                    row.swap(0, i);
                }
                continue;
            }
            let q = cur[i] / cur[0];
            add_row(&mut sigma, &mut sigma_inv, &mut cur, i, 0, -q);
            if cur[i] != 0 {
                cur.swap(0, i);
                sigma.rows.swap(0, i);
                for row in sigma_inv.rows.iter_mut() {
                    row.swap(0, i);
                }
            }
        }
    }
    if cur[0] < 0 {
        cur[0] = -cur[0];
        for c in 0..r {
            sigma.rows[0][c] = -sigma.rows[0][c];
        }
        for row in sigma_inv.rows.iter_mut() {
            row[0] = -row[0];
        }
    }
    debug_assert!(cur[1..].iter().all(|&c| c == 0));
    Ok((cur[0] as u64, sigma, sigma_inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::sqrt2_tower;

    fn apply_ok(sigma: &ModuleAutomorphism, v: &ExponentVec, expected: &[i64]) {
        assert_eq!(sigma.apply(v).0, expected);
    }

    #[test]
    fn embedding_is_linear() {
        let t = sqrt2_tower();
        let theta = t.constant("r2").unwrap();
        let m = ExponentModule::new(
            &t,
            vec![t.one(), theta.clone()],
            ExponentVec(vec![1, 0]),
        )
        .unwrap();
        assert!(t.is_one(&m.embed(&t, &ExponentVec(vec![1, 0]))));
        let e11 = m.embed(&t, &ExponentVec(vec![1, 1]));
        assert_eq!(e11, t.add(&t.one(), &theta));
        let e23 = m.embed(&t, &ExponentVec(vec![2, 3]));
        let expected = t.add(&t.from_int(2), &t.mul(&t.from_int(3), &theta));
        assert_eq!(e23, expected);
        assert!(t.is_zero(&m.embed(&t, &ExponentVec::zero(2))));
    }

    #[test]
    fn content_reduce_examples() {
        let v = ExponentVec(vec![4, 6]);
        let (g, sigma, sigma_inv) = content_reduce(&v).unwrap();
        assert_eq!(g, 2);
        apply_ok(&sigma, &v, &[2, 0]);
        assert!(sigma.is_unimodular());
        // inverse really inverts
        let id = sigma.compose(&sigma_inv);
        assert_eq!(id, ModuleAutomorphism::identity(2));

        let (g, sigma, _) = content_reduce(&ExponentVec(vec![1, 0])).unwrap();
        assert_eq!(g, 1);
        assert_eq!(sigma, ModuleAutomorphism::identity(2));

        assert_eq!(content_reduce(&ExponentVec(vec![0, 0])), Err(Error::ZeroExponentVector));
    }

    #[test]
    fn content_reduce_randomized_verifies() {
        let mut rng = crate::scalars::XorShift::new(991);
        for _ in 0..200 {
            let rank = 1 + rng.below(3) as usize;
            let v = ExponentVec((0..rank).map(|_| rng.int_in(-9, 9)).collect());
            if v.is_zero() {
                continue;
            }
            let (g, sigma, sigma_inv) = content_reduce(&v).unwrap();
            assert_eq!(g, v.content());
            let image = sigma.apply(&v);
            assert_eq!(image.0[0], g as i64);
            assert!(image.0[1..].iter().all(|&c| c == 0));
            assert!(sigma.is_unimodular());
            assert_eq!(sigma.compose(&sigma_inv), ModuleAutomorphism::identity(rank));
        }
    }

    /// Orbit membership at rank 2 cross-checked by breadth-first search over
    /// short words in elementary matrices: two nonzero vectors lie in the same
    /// GL(2,Z)-orbit up to sign exactly when their contents match.
    #[test]
    fn orbit_decision_matches_bfs_oracle() {
        let elementary: Vec<ModuleAutomorphism> = vec![
            ModuleAutomorphism { rows: vec![vec![1, 1], vec![0, 1]] },
            ModuleAutomorphism { rows: vec![vec![1, -1], vec![0, 1]] },
            ModuleAutomorphism { rows: vec![vec![1, 0], vec![1, 1]] },
            ModuleAutomorphism { rows: vec![vec![1, 0], vec![-1, 1]] },
            ModuleAutomorphism { rows: vec![vec![0, 1], vec![1, 0]] },
            ModuleAutomorphism { rows: vec![vec![-1, 0], vec![0, 1]] },
        ];
        let reachable = |start: &ExponentVec| {
            let mut seen = std::collections::BTreeSet::new();
            let mut frontier = vec![start.clone()];
            seen.insert(start.clone());
            for _ in 0..6 {
                let mut next = Vec::new();
                for v in &frontier {
                    for e in &elementary {
                        let w = e.apply(v);
                        if seen.insert(w.clone()) {
                            next.push(w);
                        }
                    }
                }
                frontier = next;
            }
            seen
        };
        let pairs = [
            (ExponentVec(vec![2, 0]), ExponentVec(vec![0, 2]), true),
            (ExponentVec(vec![4, 6]), ExponentVec(vec![2, 0]), true),
            (ExponentVec(vec![1, 1]), ExponentVec(vec![2, 0]), false),
            (ExponentVec(vec![3, 0]), ExponentVec(vec![0, -3]), true),
        ];
        for (a, b, expect) in pairs {
            let same_content = a.content() == b.content();
            assert_eq!(same_content, expect);
            let orbit = reachable(&a);
            let found = orbit.contains(&b) || orbit.contains(&b.neg());
            assert_eq!(found, expect, "BFS oracle disagrees for {a:?} vs {b:?}");
        }
    }
}
