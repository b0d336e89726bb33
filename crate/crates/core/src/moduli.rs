//! Cohomology of genus-zero moduli spaces modelled inside `coGer(n)`.
//!
//! The canonical model of `H(M_{0,n+1})` is `ker iota_v`. Residues along the
//! boundary divisors are `(id (x) iota_v)` composed with the block
//! cocompositions, and the forms regular on the partial compactification are
//! the joint kernel of all residues.

use std::collections::BTreeMap;

use num_traits::One;
use thiserror::Error;

use crate::arnold::{enumerate_g, ArnoldElement, ArnoldTensor, Monomial};
use crate::linalg::{kernel_of_map, Indexer, Reducer, SparseVec};
use crate::scalar::{self, Scalar};
use crate::words::{alpha_of, enumerate_p};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuliError {
    #[error("{{{0},{1}}} is not a chord of the {2}-gon")]
    InvalidChord(usize, usize, usize),
    #[error("form is not in the kernel of iota_v")]
    NotInKernel,
    #[error("composition {0:?} diverges: the last entry must be at least 2")]
    Divergent(Vec<usize>),
    #[error("empty composition")]
    Empty,
    #[error("no letter pairing gives a form with vanishing residues")]
    NoRegularOrientation,
}

pub type Chord = (usize, usize);

pub fn is_chord(i: usize, j: usize, m: usize) -> bool {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i >= 1 && j <= m && j > i + 1 && !(i == 1 && j == m)
}

/// Chords of the `m`-gon, i.e. pairs that are not cyclically consecutive.
pub fn chords(m: usize) -> Vec<Chord> {
    let mut v = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            if is_chord(i, j, m) {
                v.push((i, j));
            }
        }
    }
    v
}

/// The degree-one form attached to a chord of the `(n+1)`-gon.
pub fn alpha_embed(chord: Chord, n: usize) -> Result<ArnoldElement, ModuliError> {
    let (i, j) = chord;
    if !is_chord(i, j, n + 1) {
        return Err(ModuliError::InvalidChord(i, j, n + 1));
    }
    let wrap = |a: usize| if a == n + 2 { 1 } else { a };
    let mut e = ArnoldElement::zero(n);
    let terms = [(i, wrap(j + 1), 1), (i + 1, j, 1), (i + 1, wrap(j + 1), -1), (i, j, -1)];
    for (a, b, s) in terms {
        if a == n + 1 || b == n + 1 || a == b {
            continue;
        }
        e.add_scaled(&ArnoldElement::gen(n, a, b), &scalar::int(s));
    }
    Ok(e)
}

/// Two chords cross when their endpoints interleave around the polygon.
pub fn crosses(a: Chord, b: Chord) -> bool {
    let (p, q) = a;
    let (r, s) = b;
    let inside = |x: usize| x > p && x < q;
    p != r && p != s && q != r && q != s && (inside(r) != inside(s))
}

/// One completely crossing pair with the product of its sums.
#[derive(Clone, Debug)]
pub struct CrossingCase {
    pub a: Vec<Chord>,
    pub b: Vec<Chord>,
    pub vanishes: bool,
}

/// Checks `(sum_A alpha)(sum_B alpha) = 0` for every pair `(A, B)` where `B`
/// is the set of chords crossing all of `A` and `A` is the set of chords
/// crossing all of `B`.
pub fn crossing_relation_check(n: usize) -> Vec<CrossingCase> {
    let ch = chords(n + 1);
    let alphas: Vec<ArnoldElement> = ch.iter().map(|&c| alpha_embed(c, n).unwrap()).collect();
    let closure = |set: &[usize]| -> Vec<usize> {
        (0..ch.len())
            .filter(|&x| set.iter().all(|&y| crosses(ch[x], ch[y])))
            .collect()
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << ch.len()) {
        let a: Vec<usize> = (0..ch.len()).filter(|&x| mask & (1 << x) != 0).collect();
        let b = closure(&a);
        if b.is_empty() || closure(&b) != a || !seen.insert((a.clone(), b.clone())) {
            continue;
        }
        let sum = |s: &[usize]| {
            let mut e = ArnoldElement::zero(n);
            for &x in s {
                e.add_scaled(&alphas[x], &Scalar::one());
            }
            e
        };
        let prod = sum(&a).multiply(&sum(&b)).unwrap();
        out.push(CrossingCase {
            a: a.iter().map(|&x| ch[x]).collect(),
            b: b.iter().map(|&x| ch[x]).collect(),
            vanishes: prod.is_zero(),
        });
    }
    out
}

/// Consecutive blocks `(i, k)` with `2 <= k <= n-1`.
pub fn blocks(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for k in 2..n {
        for i in 1..=n - k + 1 {
            v.push((i, k));
        }
    }
    v
}

pub fn residue(e: &ArnoldElement, i: usize, k: usize) -> Result<ArnoldTensor, ModuliError> {
    if !e.iota_v().is_zero() {
        return Err(ModuliError::NotInKernel);
    }
    Ok(residue_unchecked(e, i, k))
}

fn residue_unchecked(e: &ArnoldElement, i: usize, k: usize) -> ArnoldTensor {
    e.cocompose(i, k).expect("block in range").id_iota()
}

/// Basis of forms of degree `d` in arity `n` with vanishing `iota_v` and residues.
#[derive(Clone, Debug)]
pub struct AdeltaBasis {
    pub n: usize,
    pub d: usize,
    pub basis: Vec<ArnoldElement>,
    /// Set when the top degree basis could not be matched with prime bracketings.
    pub warning: Option<String>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Target {
    Iota(Monomial),
    Residue(usize, Monomial, Monomial),
}

/// Joint kernel of `iota_v` and all residues on `coGer(n)^d`.
pub fn regular_kernel(n: usize, d: usize) -> Vec<ArnoldElement> {
    let source = enumerate_g(n, d);
    let bl = blocks(n);
    let mut ix: Indexer<Target> = Indexer::new();
    let mut images: Vec<SparseVec> = Vec::new();
    for m in &source {
        let e = ArnoldElement::from_basis_terms(n, BTreeMap::from([(m.clone(), Scalar::one())]));
        let mut v = SparseVec::new();
        for (mm, c) in e.iota_v().terms() {
            v.insert(ix.intern(&Target::Iota(mm.clone())), c.clone());
        }
        for (bi, &(i, k)) in bl.iter().enumerate() {
            for ((a, b), c) in residue_unchecked(&e, i, k).terms() {
                v.insert(ix.intern(&Target::Residue(bi, a.clone(), b.clone())), c.clone());
            }
        }
        images.push(v);
    }
    kernel_of_map(&images)
        .into_iter()
        .map(|kv| {
            let mut t = BTreeMap::new();
            for (idx, c) in kv {
                t.insert(source[idx].clone(), c);
            }
            ArnoldElement::from_basis_terms(n, t)
        })
        .collect()
}

/// Coordinates of an element in the `coGer(n)^d` monomial basis.
pub fn coordinates(e: &ArnoldElement, index: &Indexer<Monomial>) -> SparseVec {
    let mut v = SparseVec::new();
    for (m, c) in e.terms() {
        let i = index.get(m).expect("monomial in basis");
        v.insert(i, c.clone());
    }
    v
}

pub fn same_span(n: usize, d: usize, a: &[ArnoldElement], b: &[ArnoldElement]) -> bool {
    let index = Indexer::from_keys(enumerate_g(n, d));
    let mut ra = Reducer::new();
    for e in a {
        ra.insert(&coordinates(e, &index));
    }
    let mut rb = Reducer::new();
    for e in b {
        rb.insert(&coordinates(e, &index));
    }
    ra.rank() == rb.rank()
        && a.iter().all(|e| rb.contains(&coordinates(e, &index)))
        && b.iter().all(|e| ra.contains(&coordinates(e, &index)))
}

pub fn adelta_basis(n: usize, d: usize) -> AdeltaBasis {
    if d == 0 {
        return AdeltaBasis {
            n,
            d,
            basis: vec![ArnoldElement::one(n)],
            warning: None,
        };
    }
    let kernel = regular_kernel(n, d);
    if n >= 2 && d == n - 2 {
        let primes: Vec<ArnoldElement> = enumerate_p(n)
            .iter()
            .map(|p| alpha_of(p).expect("normalized"))
            .collect();
        if same_span(n, d, &primes, &kernel) {
            return AdeltaBasis {
                n,
                d,
                basis: primes,
                warning: None,
            };
        }
        return AdeltaBasis {
            n,
            d,
            basis: kernel,
            warning: Some(format!(
                "prime bracketing forms do not span the regular kernel in arity {n}"
            )),
        };
    }
    AdeltaBasis {
        n,
        d,
        basis: kernel,
        warning: None,
    }
}

/// True when `e` has vanishing `iota_v` and vanishing residues on every block.
pub fn is_regular(e: &ArnoldElement) -> bool {
    e.iota_v().is_zero()
        && blocks(e.arity())
            .iter()
            .all(|&(i, k)| residue_unchecked(e, i, k).is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MzvComposition {
    pub ks: Vec<usize>,
}

impl MzvComposition {
    pub fn new(ks: Vec<usize>) -> Result<Self, ModuliError> {
        match ks.last() {
            None => Err(ModuliError::Empty),
            Some(&k) if k < 2 || ks.contains(&0) => Err(ModuliError::Divergent(ks)),
            Some(_) => Ok(MzvComposition { ks }),
        }
    }

    pub fn weight(&self) -> usize {
        self.ks.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.ks.len()
    }

    /// The word `0^{k_r - 1} 1 ... 0^{k_1 - 1} 1`.
    pub fn word(&self) -> Vec<u8> {
        let mut w = Vec::new();
        for &k in self.ks.iter().rev() {
            w.extend(std::iter::repeat_n(0u8, k - 1));
            w.push(1);
        }
        w
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.ks.iter().map(|k| k.to_string()).collect();
        format!("I({})", parts.join(","))
    }
}

/// Which letter-to-variable pairing produced a regular form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    AsWritten,
    Reversed,
}

#[derive(Clone, Debug)]
pub struct MzvForm {
    pub composition: MzvComposition,
    pub orientation: Orientation,
    pub form: ArnoldElement,
}

/// One-form for the variable `t_k` and letter `eps`.
fn rho(eps: u8, k: usize, n: usize) -> ArnoldElement {
    let mut e = ArnoldElement::zero(n);
    if eps == 0 {
        for m in k + 1..n {
            e.add_scaled(&alpha_embed((m, n + 1), n).unwrap(), &Scalar::one());
        }
    } else {
        for m in 1..=k {
            e.add_scaled(&alpha_embed((m, n), n).unwrap(), &Scalar::one());
        }
    }
    e
}

fn wedge_word(word: &[u8], n: usize, r: usize) -> ArnoldElement {
    let mut e = ArnoldElement::one(n);
    for (idx, &eps) in word.iter().enumerate() {
        e = e.multiply(&rho(eps, idx + 1, n)).unwrap();
    }
    e.scale(&scalar::sign(r as i64))
}

pub fn mzv_form(c: &MzvComposition) -> Result<MzvForm, ModuliError> {
    let word = c.word();
    let n = word.len() + 2;
    let forward = wedge_word(&word, n, c.depth());
    if !forward.is_zero() && is_regular(&forward) {
        return Ok(MzvForm {
            composition: c.clone(),
            orientation: Orientation::AsWritten,
            form: forward,
        });
    }
    let rev: Vec<u8> = word.iter().rev().copied().collect();
    let backward = wedge_word(&rev, n, c.depth());
    if !backward.is_zero() && is_regular(&backward) {
        return Ok(MzvForm {
            composition: c.clone(),
            orientation: Orientation::Reversed,
            form: backward,
        });
    }
    Err(ModuliError::NoRegularOrientation)
}

/// A truncated series value with a certified error bound.
#[derive(Clone, Debug)]
pub struct ZetaValue {
    pub value: f64,
    pub error_bound: f64,
    pub terms: usize,
}

/// `int_N^inf (1 + ln x)^m x^{-k} dx` by the integration-by-parts recursion.
fn log_tail_integral(m: usize, k: usize, big_n: f64) -> f64 {
    let s = (k - 1) as f64;
    let l = 1.0 + big_n.ln();
    let mut acc = big_n.powf(-s) / s;
    for j in 1..=m {
        acc = l.powi(j as i32) * big_n.powf(-s) / s + (j as f64 / s) * acc;
    }
    acc
}

/// Numerical multiple zeta value `sum_{0<n_1<...<n_r} prod n_i^{-k_i}`.
pub fn zeta_numeric(c: &MzvComposition, eps: f64) -> ZetaValue {
    let r = c.depth();
    let kr = *c.ks.last().unwrap();
    let mut big_n: usize = 1 << 10;
    loop {
        // partial[j] = sum over n_1 < ... < n_j <= current n
        let mut partial = vec![0.0f64; r + 1];
        let mut comp = vec![0.0f64; r + 1];
        partial[0] = 1.0;
        let mut inner_at_next = 0.0;
        for m in 1..=big_n {
            let mf = m as f64;
            for j in (1..=r).rev() {
                // compensated summation keeps rounding independent of N
                let y = partial[j - 1] * mf.powi(-(c.ks[j - 1] as i32)) - comp[j];
                let t = partial[j] + y;
                comp[j] = (t - partial[j]) - y;
                partial[j] = t;
            }
        }
        if r >= 2 {
            inner_at_next = partial[r - 1];
        }
        let nf = big_n as f64;
        let (lower, upper) = if r == 1 {
            let s = (kr - 1) as f64;
            (1.0 / (s * (nf + 1.0).powf(s)), 1.0 / (s * nf.powf(s)))
        } else {
            let fact: f64 = (1..r).map(|x| x as f64).product();
            let s = (kr - 1) as f64;
            (
                inner_at_next / (s * (nf + 1.0).powf(s)),
                log_tail_integral(r - 1, kr, nf) / fact,
            )
        };
        let rounding = (r as f64) * 8.0 * f64::EPSILON * (partial[r] + 1.0) * (1.0 + nf * f64::EPSILON);
        let half = (upper - lower) / 2.0 + rounding;
        if half <= eps || big_n >= 1 << 27 {
            return ZetaValue {
                value: partial[r] + (upper + lower) / 2.0,
                error_bound: half,
                terms: big_n,
            };
        }
        big_n *= 2;
    }
}
