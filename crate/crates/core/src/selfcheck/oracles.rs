//! Brute-force references used by the self-check and the tests.

use crate::arnold::{all_pairs, Pair};
use crate::linalg::{Indexer, Reducer, SparseVec};
use crate::scalar::{self, Scalar};
use itertools::Itertools;
use num_traits::{One, Zero};
use rand::Rng;

/// Unsigned Stirling numbers of the first kind by the usual recurrence.
pub fn stirling(n: usize, k: usize) -> u64 {
    let mut t = vec![vec![0u64; n + 1]; n + 1];
    t[0][0] = 1;
    for a in 1..=n {
        for b in 1..=a {
            t[a][b] = t[a - 1][b - 1] + (a as u64 - 1) * t[a - 1][b];
        }
    }
    t[n][k]
}

/// Sorts a word in the free exterior algebra; `None` on a repeated letter.
pub fn sort_word(word: &[Pair]) -> Option<(Vec<Pair>, i64)> {
    let mut v = word.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// The exterior algebra on all pairs of `[n]` modulo the three-term relations, in one degree.
pub struct FreeQuotient {
    pub n: usize,
    pub k: usize,
    pub index: Indexer<Vec<Pair>>,
    pub ideal: Reducer,
}

impl FreeQuotient {
    pub fn new(n: usize, k: usize) -> Self {
        let pairs = all_pairs(n);
        let index = Indexer::from_keys(pairs.iter().copied().combinations(k));
        let mut ideal = Reducer::new();
        if k >= 2 {
            for t in (1..=n).combinations(3) {
                let (a, b, c) = (t[0], t[1], t[2]);
                let rel = [[(a, b), (b, c)], [(b, c), (a, c)], [(a, c), (a, b)]];
                for rest in pairs.iter().copied().combinations(k - 2) {
                    let mut v = SparseVec::new();
                    for r in &rel {
                        let mut word = r.to_vec();
                        word.extend_from_slice(&rest);
                        if let Some((m, s)) = sort_word(&word) {
                            add(&mut v, index.get(&m).unwrap(), scalar::int(s));
                        }
                    }
                    ideal.insert(&v);
                }
            }
        }
        FreeQuotient { n, k, index, ideal }
    }

    pub fn dim(&self) -> usize {
        self.index.len() - self.ideal.rank()
    }

    pub fn vector(&self, terms: &[(Scalar, Vec<Pair>)]) -> SparseVec {
        let mut v = SparseVec::new();
        for (c, word) in terms {
            if let Some((m, s)) = sort_word(word) {
                add(&mut v, self.index.get(&m).unwrap(), c * scalar::int(s));
            }
        }
        v
    }

    /// Whether two free elements agree modulo the relations.
    pub fn same_coset(&self, a: &[(Scalar, Vec<Pair>)], b: &[(Scalar, Vec<Pair>)]) -> bool {
        let mut d = self.vector(a);
        for (i, x) in self.vector(b) {
            add(&mut d, i, -x);
        }
        self.ideal.contains(&d)
    }
}

fn add(v: &mut SparseVec, i: usize, x: Scalar) {
    let e = v.entry(i).or_insert_with(Scalar::zero);
    *e += x;
    if e.is_zero() {
        v.remove(&i);
    }
}

/// A random homogeneous free element: a few ordered words with small coefficients.
pub fn random_free<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<(Scalar, Vec<Pair>)> {
    let pairs = all_pairs(n);
    (0..rng.gen_range(1..=4))
        .map(|_| {
            let word: Vec<Pair> = (0..k).map(|_| pairs[rng.gen_range(0..pairs.len())]).collect();
            let c = rng.gen_range(-3i64..=3);
            (if c == 0 { Scalar::one() } else { scalar::int(c) }, word)
        })
        .collect()
}

/// `|P(n)|` read off the compositional inverse of `sum_{n>=1} (n-1)! x^n`.
pub fn prime_counts_from_series(max_n: usize) -> Vec<i64> {
    let f: Vec<i64> = (0..=max_n)
        .map(|n| if n == 0 { 0 } else { (1..n as i64).product() })
        .collect();
    let mul = |a: &[i64], b: &[i64]| -> Vec<i64> {
        let mut c = vec![0i64; max_n + 1];
        for i in 0..=max_n {
            for j in 0..=max_n - i {
                c[i + j] += a[i] * b[j];
            }
        }
        c
    };
    // g with g(f(x)) = x, solved term by term
    let mut g = vec![0i64; max_n + 1];
    g[1] = 1;
    for m in 2..=max_n {
        let mut pow = f.clone();
        let mut coeff = 0i64;
        for j in 1..m {
            coeff += g[j] * pow[m];
            pow = mul(&pow, &f);
        }
        // f^m has leading coefficient 1 at x^m
        g[m] = -coeff;
    }
    (0..=max_n).map(|n| if n < 2 { 0 } else { -g[n] }).collect()
}
