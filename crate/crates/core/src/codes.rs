//! Linear codes over GF(q), minimal codewords, and the correspondence
//! between non-degenerate codes and point sets of PG(k-1, q).
//!
//! A code is the row space of a `k × n` generator matrix. Its columns, read
//! as projective points, form a point set; the code is minimal exactly when
//! that point set is a strong blocking set.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{EchelonBasis, FieldElement, Geometry, Mask, PointSet, PrimeField};

/// Default cap on `q^k` for codeword enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1 << 24;

/// Cap on witness pairs kept in a [`MinimalityReport`].
pub const WITNESS_LIMIT: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: PrimeField,
    k: usize,
    n: usize,
    /// `k` rows of length `n`; the columns are the points G_1..G_n.
    generator: Vec<Vec<FieldElement>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Codeword {
    pub vector: Vec<FieldElement>,
    /// Bit `i` set iff coordinate `i` is nonzero.
    #[serde(serialize_with = "support_as_indices")]
    pub support: Mask,
    pub weight: usize,
}

fn support_as_indices<S: serde::Serializer>(support: &Mask, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(crate::geometry::bits(*support))
}

impl Codeword {
    pub fn new(vector: Vec<FieldElement>) -> Self {
        let support = vector.iter().enumerate().filter(|(_, &x)| x != 0).fold(0, |m, (i, _)| m | 1 << i);
        Self { weight: (support as Mask).count_ones() as usize, support, vector }
    }

    pub fn is_zero(&self) -> bool {
        self.support == 0
    }

    pub fn support_indices(&self) -> Vec<usize> {
        crate::geometry::bits(self.support).collect()
    }
}

impl LinearCode {
    /// Code generated by the rows of `generator`, which must have full row rank.
    pub fn new(generator: &[Vec<u32>], q: u32) -> Result<Self> {
        let field = PrimeField::new(q)?;
        let k = generator.len();
        if k == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let n = generator[0].len();
        if n > Mask::BITS as usize {
            return Err(Error::CodeTooLong(n));
        }
        let rows = generator
            .iter()
            .map(|row| {
                if row.len() != n {
                    return Err(Error::LengthMismatch { expected: n, found: row.len() });
                }
                row.iter().map(|&x| field.check(x)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut basis = EchelonBasis::new(field, n);
        for row in &rows {
            basis.insert(row);
        }
        if basis.rank() != k {
            return Err(Error::RankDeficient { rank: basis.rank(), k });
        }
        Ok(Self { field, k, n, generator: rows })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn generator(&self) -> &[Vec<FieldElement>] {
        &self.generator
    }

    pub fn column(&self, i: usize) -> Vec<FieldElement> {
        self.generator.iter().map(|row| row[i]).collect()
    }

    pub fn is_degenerate(&self) -> bool {
        (0..self.n).any(|i| self.column(i).iter().all(|&x| x == 0))
    }

    /// `message · G`.
    pub fn encode(&self, message: &[FieldElement]) -> Codeword {
        let f = self.field;
        let mut v = vec![0; self.n];
        for (&m, row) in message.iter().zip(&self.generator) {
            if m != 0 {
                for (x, &g) in v.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(m, g));
                }
            }
        }
        Codeword::new(v)
    }

    pub fn contains(&self, vector: &[FieldElement]) -> bool {
        if vector.len() != self.n {
            return false;
        }
        let mut basis = EchelonBasis::new(self.field, self.n);
        for row in &self.generator {
            basis.insert(row);
        }
        basis.contains(vector)
    }

    pub fn codeword_count(&self) -> u128 {
        (self.q() as u128).pow(self.k as u32)
    }

    /// All `q^k` codewords, messages in lexicographic order (zero first).
    pub fn codewords(&self, budget: u128) -> Result<impl Iterator<Item = Codeword> + '_> {
        let count = self.codeword_count();
        if count > budget {
            return Err(Error::BudgetExceeded { what: "codeword enumeration", required: count, budget });
        }
        let q = self.q() as u64;
        let k = self.k;
        Ok((0..count as u64).map(move |mut idx| {
            let mut message = vec![0; k];
            for m in message.iter_mut().rev() {
                *m = (idx % q) as FieldElement;
                idx /= q;
            }
            self.encode(&message)
        }))
    }

    /// Number of codewords of each weight `0..=n`.
    pub fn weight_distribution(&self) -> Result<Vec<usize>> {
        let mut counts = vec![0; self.n + 1];
        for c in self.codewords(DEFAULT_ENUMERATION_BUDGET)? {
            counts[c.weight] += 1;
        }
        Ok(counts)
    }

    fn proportional(&self, a: &Codeword, b: &Codeword) -> bool {
        if a.support != b.support {
            return false;
        }
        let Some(i) = a.vector.iter().position(|&x| x != 0) else {
            return true;
        };
        let f = self.field;
        let lambda = f.mul(b.vector[i], f.inv(a.vector[i]).expect("nonzero"));
        a.vector.iter().zip(&b.vector).all(|(&x, &y)| f.mul(x, lambda) == y)
    }
}

/// All codewords of `code`, under the default budget.
pub fn enumerate_codewords(code: &LinearCode) -> Result<Vec<Codeword>> {
    Ok(code.codewords(DEFAULT_ENUMERATION_BUDGET)?.collect())
}

/// Whether `c` is minimal: every codeword whose support lies inside
/// `supp(c)` is a scalar multiple of `c` (the zero codeword included).
pub fn is_minimal_codeword(code: &LinearCode, c: &[FieldElement]) -> Result<bool> {
    if c.len() != code.n || !code.contains(c) {
        return Err(Error::NotACodeword);
    }
    let c = Codeword::new(c.to_vec());
    if c.is_zero() {
        return Err(Error::ZeroVector);
    }
    for other in code.codewords(DEFAULT_ENUMERATION_BUDGET)? {
        if other.support & !c.support == 0 && !other.is_zero() && !code.proportional(&c, &other) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub minimal: bool,
    /// Pairs `(c, c')` with `supp(c') ⊆ supp(c)` and `c'` not a multiple of `c`.
    pub witnesses: Vec<(Codeword, Codeword)>,
    pub non_minimal_count: usize,
    pub n: usize,
    pub k: usize,
    pub q: u32,
}

/// Checks every nonzero codeword for minimality, collecting witness pairs.
pub fn is_minimal_code(code: &LinearCode) -> Result<MinimalityReport> {
    is_minimal_code_with_budget(code, DEFAULT_ENUMERATION_BUDGET)
}

pub fn is_minimal_code_with_budget(code: &LinearCode, budget: u128) -> Result<MinimalityReport> {
    let words: Vec<Codeword> = code.codewords(budget)?.filter(|c| !c.is_zero()).collect();

    // codewords grouped by support, in enumeration order within each group
    let mut by_support: HashMap<Mask, Vec<usize>> = HashMap::new();
    for (i, c) in words.iter().enumerate() {
        by_support.entry(c.support).or_default().push(i);
    }
    let mut supports: Vec<Mask> = by_support.keys().copied().collect();
    supports.sort_by_key(|s| (s.count_ones(), *s));

    let mut witnesses = Vec::new();
    let mut non_minimal_count = 0;
    for (i, c) in words.iter().enumerate() {
        let mut found = false;
        for &s in &supports {
            if s.count_ones() > c.support.count_ones() {
                break;
            }
            if s & !c.support != 0 {
                continue;
            }
            for &j in &by_support[&s] {
                if j != i && !code.proportional(c, &words[j]) {
                    found = true;
                    if witnesses.len() < WITNESS_LIMIT {
                        witnesses.push((c.clone(), words[j].clone()));
                    } else {
                        break;
                    }
                }
            }
        }
        if found {
            non_minimal_count += 1;
        }
    }
    Ok(MinimalityReport {
        minimal: non_minimal_count == 0,
        witnesses,
        non_minimal_count,
        n: code.n,
        k: code.k,
        q: code.q(),
    })
}

/// Point set of a code's columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnPoints {
    pub set: PointSet,
    /// `(column, earlier column)` pairs whose points coincide and were merged.
    pub collapsed: Vec<(usize, usize)>,
}

impl ColumnPoints {
    pub fn has_duplicates(&self) -> bool {
        !self.collapsed.is_empty()
    }
}

/// Columns of a non-degenerate code as points of PG(k-1, q).
pub fn pointset_from_code(code: &LinearCode, geometry: &Arc<Geometry>) -> Result<ColumnPoints> {
    geometry.check_is(code.k, code.q())?;
    let mut first_column: HashMap<usize, usize> = HashMap::new();
    let mut collapsed = Vec::new();
    let mut mask = 0;
    for i in 0..code.n {
        let column = code.column(i);
        if column.iter().all(|&x| x == 0) {
            return Err(Error::DegenerateCode(i));
        }
        let p = geometry.index_of(&column)?;
        match first_column.get(&p) {
            Some(&earlier) => collapsed.push((i, earlier)),
            None => {
                first_column.insert(p, i);
            }
        }
        mask |= 1 << p;
    }
    Ok(ColumnPoints { set: PointSet::new(geometry, mask)?, collapsed })
}

/// The code whose generator columns are the points of `set`, in canonical order.
pub fn code_from_pointset(set: &PointSet) -> Result<LinearCode> {
    let geometry = set.geometry();
    let k = geometry.k();
    let rank = set.rank();
    if rank != k {
        return Err(Error::NonSpanning { rank, k });
    }
    let columns = set.coords();
    let generator: Vec<Vec<u32>> = (0..k).map(|r| columns.iter().map(|c| c[r] as u32).collect()).collect();
    LinearCode::new(&generator, geometry.q())
}
