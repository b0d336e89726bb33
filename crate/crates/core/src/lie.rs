//! Free Lie algebras realised inside free associative algebras.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::linalg::add_entry;
use crate::scalar::Scalar;

pub type Word = Vec<u8>;

/// A noncommutative polynomial: words mapped to nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    pub terms: BTreeMap<Word, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn letter(a: u8) -> Self {
        Self::monomial(vec![a], Scalar::one())
    }

    pub fn monomial(w: Word, c: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut p = Poly::zero();
        p.add_scaled(self, c);
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                p.add_term(w, x * y);
            }
        }
        p
    }

    pub fn bracket(&self, other: &Poly) -> Poly {
        let mut p = self.mul(other);
        p.add_scaled(&other.mul(self), &-Scalar::one());
        p
    }

    /// Applies the algebra morphism sending each letter to `images[letter]`.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in &self.terms {
            let mut acc = Poly::monomial(Vec::new(), c.clone());
            for &a in w {
                acc = acc.mul(&images[a as usize]);
                if acc.is_zero() {
                    break;
                }
            }
            out.add_scaled(&acc, &Scalar::one());
        }
        out
    }

    /// Coordinates in an indexing of words; unseen words are interned.
    pub fn to_sparse(&self, index: &mut crate::linalg::Indexer<Word>) -> crate::linalg::SparseVec {
        let mut v = crate::linalg::SparseVec::new();
        for (w, c) in &self.terms {
            add_entry(&mut v, index.intern(w), c.clone());
        }
        v
    }
}

/// Lyndon words of length `len` over an alphabet of `k` letters, in
/// lexicographic order (Duval's algorithm).
pub fn lyndon_words(k: u8, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if k == 0 || len == 0 {
        return out;
    }
    let mut w: Vec<i32> = vec![-1];
    while !w.is_empty() {
        let last = w.len() - 1;
        w[last] += 1;
        if w.len() == len {
            out.push(w.iter().map(|&x| x as u8).collect());
        }
        let m = w.len();
        while w.len() < len {
            let x = w[w.len() - m];
            w.push(x);
        }
        while !w.is_empty() && *w.last().unwrap() == k as i32 - 1 {
            w.pop();
        }
    }
    out
}

fn is_lyndon(w: &[u8]) -> bool {
    (1..w.len()).all(|i| w[i..] > *w)
}

/// The standard bracketing of a Lyndon word as a polynomial.
pub fn standard_bracketing(w: &[u8]) -> Poly {
    if w.len() == 1 {
        return Poly::letter(w[0]);
    }
    // longest proper Lyndon suffix
    let split = (1..w.len()).find(|&i| is_lyndon(&w[i..])).unwrap();
    standard_bracketing(&w[..split]).bracket(&standard_bracketing(&w[split..]))
}

/// Dimension of the degree-`len` part of the free Lie algebra on `k` letters.
pub fn witt_dimension(k: u64, len: u64) -> u64 {
    fn mobius(n: u64) -> i64 {
        let mut n = n;
        let mut result = 1i64;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if n > 1 {
            result = -result;
        }
        result
    }
    let mut total: i64 = 0;
    for d in 1..=len {
        if len % d == 0 {
            total += mobius(d) * (k as i64).pow((len / d) as u32);
        }
    }
    (total / len as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_counts_match_witt() {
        for k in 1..=3u8 {
            for len in 1..=6 {
                assert_eq!(
                    lyndon_words(k, len).len() as u64,
                    witt_dimension(k as u64, len as u64),
                    "k={k} len={len}"
                );
            }
        }
        assert_eq!(lyndon_words(2, 3), vec![vec![0, 0, 1], vec![0, 1, 1]]);
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let x = Poly::letter(0);
        let y = Poly::letter(1);
        let mut s = x.bracket(&y);
        s.add_scaled(&y.bracket(&x), &Scalar::one());
        assert!(s.is_zero());
        assert_eq!(standard_bracketing(&[0, 1]), x.bracket(&y));
    }
}
