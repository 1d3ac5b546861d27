//! Arithmetic in GF(q) for a small prime q.

use crate::error::{Error, Result};

/// An element of GF(q), stored as its least non-negative residue.
pub type FieldElement = u8;

/// Largest prime order the field type can represent.
pub const MAX_FIELD_ORDER: u32 = 251;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field GF(q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u8,
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        if !is_prime(q) || q > MAX_FIELD_ORDER {
            return Err(Error::NotPrime(q));
        }
        Ok(Self { q: q as u8 })
    }

    #[inline]
    pub fn order(self) -> u32 {
        self.q as u32
    }

    pub fn check(self, value: u32) -> Result<FieldElement> {
        if value >= self.order() {
            return Err(Error::ElementOutOfRange { value, q: self.order() });
        }
        Ok(value as FieldElement)
    }

    /// Reduce an arbitrary integer into the field.
    pub fn reduce(self, value: i64) -> FieldElement {
        value.rem_euclid(self.q as i64) as FieldElement
    }

    #[inline]
    pub fn add(self, a: FieldElement, b: FieldElement) -> FieldElement {
        ((a as u16 + b as u16) % self.q as u16) as FieldElement
    }

    #[inline]
    pub fn sub(self, a: FieldElement, b: FieldElement) -> FieldElement {
        ((a as u16 + self.q as u16 - b as u16) % self.q as u16) as FieldElement
    }

    #[inline]
    pub fn neg(self, a: FieldElement) -> FieldElement {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(self, a: FieldElement, b: FieldElement) -> FieldElement {
        ((a as u16 * b as u16) % self.q as u16) as FieldElement
    }

    /// Multiplicative inverse via Fermat: a^(q-2).
    pub fn inv(self, a: FieldElement) -> Option<FieldElement> {
        if a == 0 {
            return None;
        }
        let mut result: FieldElement = 1;
        let mut base = a;
        let mut e = self.q as u32 - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Some(result)
    }

    /// All nonzero scalars, in increasing order.
    pub fn units(self) -> impl Iterator<Item = FieldElement> {
        1..self.q
    }

    pub fn dot(self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    pub fn scale(self, v: &[FieldElement], lambda: FieldElement) -> Vec<FieldElement> {
        v.iter().map(|&x| self.mul(x, lambda)).collect()
    }

    /// Scale `v` so that its first nonzero entry is 1. Returns `None` for the zero vector.
    pub fn normalize(self, v: &[FieldElement]) -> Option<Vec<FieldElement>> {
        let lead = *v.iter().find(|&&x| x != 0)?;
        let inv = self.inv(lead).expect("nonzero lead");
        Some(self.scale(v, inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let found: Vec<u32> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(found, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn every_unit_has_an_inverse() {
        for q in [2, 3, 5, 7, 11] {
            let f = PrimeField::new(q).unwrap();
            for a in f.units() {
                let b = f.inv(a).unwrap();
                assert_eq!(f.mul(a, b), 1, "q={q} a={a}");
            }
            assert_eq!(f.inv(0), None);
        }
    }

    #[test]
    fn normalize_leading_one() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.normalize(&[0, 3, 1]), Some(vec![0, 1, 2]));
        assert_eq!(f.normalize(&[0, 0, 0]), None);
        assert_eq!(f.sub(1, 3), 3);
        assert_eq!(f.reduce(-7), 3);
    }
}
