//! Fixed-size subsets of point indices as bitmasks.

use crate::geometry::Mask;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// The next mask with the same popcount (Gosper's hack). `None` past `limit` bits.
#[inline]
pub fn next_combination(mask: Mask, limit: usize) -> Option<Mask> {
    if mask == 0 {
        return None;
    }
    let c = mask & mask.wrapping_neg();
    let r = mask.checked_add(c)?;
    let next = (((r ^ mask) >> 2) / c) | r;
    if limit < Mask::BITS as usize && next >> limit != 0 {
        None
    } else {
        Some(next)
    }
}

/// The `rank`-th `size`-subset of `0..n` in increasing mask order.
pub fn unrank_combination(n: usize, size: usize, mut rank: u128) -> Mask {
    // colex order coincides with increasing numeric order of masks
    let mut mask = 0;
    let mut k = size;
    let mut top = n;
    while k > 0 {
        let mut pos = k - 1;
        while pos + 1 < top && binomial(pos + 1, k) <= rank {
            pos += 1;
        }
        rank -= binomial(pos, k);
        mask |= 1 << pos;
        top = pos;
        k -= 1;
    }
    mask
}

/// Iterator over all `size`-subsets of `0..n` in increasing mask order.
pub struct Combinations {
    next: Option<Mask>,
    n: usize,
}

impl Combinations {
    pub fn new(n: usize, size: usize) -> Self {
        let first = if size > n {
            None
        } else if size == 0 {
            Some(0)
        } else if size == Mask::BITS as usize {
            Some(Mask::MAX)
        } else {
            Some((1 << size) - 1)
        };
        Self { next: first, n }
    }

    /// Start at the `rank`-th subset.
    pub fn from_rank(n: usize, size: usize, rank: u128) -> Self {
        if rank >= binomial(n, size) {
            return Self { next: None, n };
        }
        Self { next: Some(unrank_combination(n, size, rank)), n }
    }
}

impl Iterator for Combinations {
    type Item = Mask;

    fn next(&mut self) -> Option<Mask> {
        let cur = self.next?;
        self.next = if cur == 0 { None } else { next_combination(cur, self.n) };
        Some(cur)
    }
}
