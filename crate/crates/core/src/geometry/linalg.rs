//! Row reduction over prime fields.

use super::field::{FieldElement, PrimeField};
use crate::error::{Error, Result};

/// Reduced row echelon form of a matrix: rows are nonzero, each pivot is 1,
/// and every pivot column is zero outside its pivot row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowEchelon {
    pub rank: usize,
    pub basis: Vec<Vec<FieldElement>>,
    pub pivots: Vec<usize>,
}

/// Rank and canonical reduced basis of the row space of `matrix` over GF(q).
pub fn rank_gf(matrix: &[Vec<u32>], q: u32) -> Result<RowEchelon> {
    let field = PrimeField::new(q)?;
    let width = matrix.first().map_or(0, Vec::len);
    let mut basis = EchelonBasis::new(field, width);
    for row in matrix {
        if row.len() != width {
            return Err(Error::LengthMismatch { expected: width, found: row.len() });
        }
        let row = row.iter().map(|&x| field.check(x)).collect::<Result<Vec<_>>>()?;
        basis.insert(&row);
    }
    Ok(basis.into_echelon())
}

/// Incrementally maintained reduced row echelon basis.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    field: PrimeField,
    width: usize,
    // (pivot column, row), sorted by pivot
    rows: Vec<(usize, Vec<FieldElement>)>,
}

impl EchelonBasis {
    pub fn new(field: PrimeField, width: usize) -> Self {
        Self { field, width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn reduce(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let f = self.field;
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Add `v` to the spanning set. Returns true if the rank grew.
    pub fn insert(&mut self, v: &[FieldElement]) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let f = self.field;
        let reduced = self.reduce(v);
        let Some(pivot) = reduced.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(reduced[pivot]).expect("nonzero pivot");
        let new_row = f.scale(&reduced, inv);
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot];
            if c != 0 {
                for (x, &r) in row.iter_mut().zip(&new_row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, new_row));
        true
    }

    pub fn into_echelon(self) -> RowEchelon {
        let rank = self.rows.len();
        let (pivots, basis) = self.rows.into_iter().unzip();
        RowEchelon { rank, basis, pivots }
    }
}

/// Span accumulator for GF(2) vectors packed into machine words.
#[derive(Debug, Clone, Copy, Default)]
pub struct Gf2Basis {
    // by_lead[b] holds a basis vector whose highest set bit is b, or 0
    by_lead: [u32; 32],
    rank: usize,
}

impl Gf2Basis {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn insert(&mut self, mut v: u32) -> bool {
        while v != 0 {
            let lead = 31 - v.leading_zeros() as usize;
            let b = self.by_lead[lead];
            if b == 0 {
                self.by_lead[lead] = v;
                self.rank += 1;
                return true;
            }
            v ^= b;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Rank by counting the distinct vectors in the row space.
    fn brute_rank(matrix: &[Vec<u32>], q: u32) -> usize {
        let width = matrix[0].len();
        let mut space = HashSet::new();
        let total = (q as usize).pow(matrix.len() as u32);
        for mut idx in 0..total {
            let mut v = vec![0u32; width];
            for row in matrix {
                let c = idx as u32 % q;
                idx /= q as usize;
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + c * r) % q;
                }
            }
            space.insert(v);
        }
        let mut size = space.len();
        let mut rank = 0;
        while size > 1 {
            size /= q as usize;
            rank += 1;
        }
        rank
    }

    fn quadric_columns_matrix() -> Vec<Vec<u32>> {
        // the nine solutions of x0*x1 + x2*x3 = 0 over GF(2), one per column
        let pts: Vec<[u32; 4]> = (1u32..16)
            .map(|m| [m >> 3 & 1, m >> 2 & 1, m >> 1 & 1, m & 1])
            .filter(|x| (x[0] * x[1] + x[2] * x[3]) % 2 == 0)
            .collect();
        assert_eq!(pts.len(), 9);
        (0..4).map(|r| pts.iter().map(|p| p[r]).collect()).collect()
    }

    #[test]
    fn identity_and_zero() {
        let id: Vec<Vec<u32>> = (0..4).map(|i| (0..4).map(|j| u32::from(i == j)).collect()).collect();
        assert_eq!(rank_gf(&id, 2).unwrap().rank, 4);
        let zero = vec![vec![0u32; 5]; 3];
        let e = rank_gf(&zero, 2).unwrap();
        assert_eq!(e.rank, 0);
        assert!(e.basis.is_empty());
    }

    #[test]
    fn quadric_point_matrix_has_full_rank() {
        let m = quadric_columns_matrix();
        assert_eq!(brute_rank(&m, 2), 4);
        assert_eq!(rank_gf(&m, 2).unwrap().rank, 4);
    }

    #[test]
    fn rejects_non_prime_and_bad_entries() {
        assert_eq!(rank_gf(&[vec![1, 0]], 4), Err(Error::NotPrime(4)));
        assert!(matches!(rank_gf(&[vec![3, 0]], 3), Err(Error::ElementOutOfRange { value: 3, q: 3 })));
    }

    #[test]
    fn echelon_is_canonical() {
        // same row space, different generators
        let a = rank_gf(&[vec![1, 2, 0], vec![0, 1, 1]], 3).unwrap();
        let b = rank_gf(&[vec![1, 0, 1], vec![2, 1, 0]], 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.basis, vec![vec![1, 0, 1], vec![0, 1, 1]]);
    }

    #[test]
    fn matches_brute_force_on_small_matrices() {
        for q in [2u32, 3, 5] {
            let mut seed = 17u64 * q as u64;
            for _ in 0..60 {
                let rows = 1 + (seed % 4) as usize;
                let m: Vec<Vec<u32>> = (0..rows)
                    .map(|_| {
                        (0..4)
                            .map(|_| {
                                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                                ((seed >> 33) % q as u64) as u32
                            })
                            .collect()
                    })
                    .collect();
                assert_eq!(rank_gf(&m, q).unwrap().rank, brute_rank(&m, q), "{m:?} q={q}");
            }
        }
    }

    #[test]
    fn gf2_basis_counts_rank() {
        let mut b = Gf2Basis::new();
        assert!(b.insert(0b0011));
        assert!(b.insert(0b0101));
        assert!(!b.insert(0b0110));
        assert!(!b.insert(0));
        assert!(b.insert(0b1000));
        assert_eq!(b.rank(), 3);
    }
}
