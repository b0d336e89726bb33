//! Infinitesimal braid Lie algebras `t_n`, graded by length.
//!
//! `t_n^(d)` is computed as the degree `d+1` part of the free Lie algebra on
//! the letters `t_ij` modulo the ideal generated by the locality and
//! three-term relations. Both live in the free associative algebra, so
//! reduction is plain linear algebra on word coordinates.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arnold::Pair;
use crate::lie::{lyndon_words, standard_bracketing, Poly, Word};
use crate::linalg::{add_entry, axpy, kernel_of_map, unit, Insert, Reducer, SparseVec};
use crate::scalar::{self, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("cap exceeded: {name} = {value} but the cap is {cap}")]
    CapExceeded {
        name: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("invalid index map: {0}")]
    InvalidMap(String),
    #[error("polynomial is not a Lie element of t_{n} in length {d}")]
    NotInBasis { n: usize, d: usize },
    #[error("linear system is inconsistent: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Copy, Debug)]
pub struct BraidCaps {
    pub max_n: usize,
    pub max_len: usize,
}

impl Default for BraidCaps {
    fn default() -> Self {
        BraidCaps { max_n: 5, max_len: 4 }
    }
}

/// The generators `t_ij` of `t_n` in lexicographic order.
pub fn letters(n: usize) -> Vec<Pair> {
    crate::arnold::all_pairs(n)
}

pub fn letter_index(n: usize, i: usize, j: usize) -> u8 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    // pairs before row i, then the offset inside row i
    let before: usize = (1..i).map(|r| n - r).sum();
    (before + (j - i - 1)) as u8
}

pub fn relations(n: usize) -> Vec<Poly> {
    let t = |i: usize, j: usize| Poly::letter(letter_index(n, i, j));
    let ls = letters(n);
    let mut rels = Vec::new();
    for (a, &(i, j)) in ls.iter().enumerate() {
        for &(k, l) in &ls[a + 1..] {
            if i != k && i != l && j != k && j != l {
                rels.push(t(i, j).bracket(&t(k, l)));
            }
        }
    }
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                let mut s = t(a, b);
                s.add_scaled(&t(b, c), &Scalar::one());
                rels.push(s.bracket(&t(a, c)));
                let mut s = t(a, b);
                s.add_scaled(&t(a, c), &Scalar::one());
                rels.push(s.bracket(&t(b, c)));
                let mut s = t(a, c);
                s.add_scaled(&t(b, c), &Scalar::one());
                rels.push(s.bracket(&t(a, b)));
            }
        }
    }
    rels
}

/// A computed quotient basis of `t_n^(d)`.
pub struct BraidBasis {
    pub n: usize,
    pub d: usize,
    /// Lyndon words whose standard bracketings represent the basis.
    pub reps: Vec<Word>,
    pub rep_polys: Vec<Poly>,
    ideal: Vec<Poly>,
    reducer: Reducer,
    alphabet: usize,
}

impl BraidBasis {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    fn column(&self, w: &[u8]) -> usize {
        w.iter().fold(0usize, |acc, &a| acc * self.alphabet + a as usize)
    }

    fn vectorize(&self, p: &Poly) -> SparseVec {
        let mut v = SparseVec::new();
        for (w, c) in &p.terms {
            add_entry(&mut v, self.column(w), c.clone());
        }
        v
    }

    /// Coordinates of a Lie polynomial of word length `d+1`.
    pub fn coordinates(&self, p: &Poly) -> Option<SparseVec> {
        if p.terms.keys().any(|w| w.len() != self.d + 1) {
            return None;
        }
        self.reducer.express(&self.vectorize(p))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraidElement {
    pub n: usize,
    pub d: usize,
    pub coords: SparseVec,
}

impl BraidElement {
    pub fn zero(n: usize, d: usize) -> Self {
        BraidElement {
            n,
            d,
            coords: SparseVec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add_scaled(&mut self, other: &BraidElement, c: &Scalar) {
        assert_eq!((self.n, self.d), (other.n, other.d));
        axpy(&mut self.coords, c, &other.coords);
    }
}

/// An index map used by the operad structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IndexMap {
    /// `pi_f : t_n -> t_k` for `f : [k] -> [n]`, stored as `f[a-1]`.
    Pi { n: usize, f: Vec<usize> },
    /// Relabelling along an injection `[n] -> [m]`.
    Kappa { m: usize, g: Vec<usize> },
}

impl IndexMap {
    pub fn source(&self) -> usize {
        match self {
            IndexMap::Pi { n, .. } => *n,
            IndexMap::Kappa { g, .. } => g.len(),
        }
    }

    pub fn target(&self) -> usize {
        match self {
            IndexMap::Pi { f, .. } => f.len(),
            IndexMap::Kappa { m, .. } => *m,
        }
    }

    fn validate(&self) -> Result<(), BraidError> {
        match self {
            IndexMap::Pi { n, f } => {
                if f.iter().any(|&x| x == 0 || x > *n) {
                    return Err(BraidError::InvalidMap(format!("{f:?} not into [{n}]")));
                }
            }
            IndexMap::Kappa { m, g } => {
                let mut s = g.clone();
                s.sort_unstable();
                s.dedup();
                if s.len() != g.len() || g.iter().any(|&x| x == 0 || x > *m) {
                    return Err(BraidError::InvalidMap(format!("{g:?} not an injection into [{m}]")));
                }
            }
        }
        Ok(())
    }

    /// Images of the source letters as polynomials in the target letters.
    fn letter_images(&self) -> Vec<Poly> {
        let n = self.source();
        let k = self.target();
        letters(n)
            .iter()
            .map(|&(i, j)| match self {
                IndexMap::Pi { f, .. } => {
                    let mut p = Poly::zero();
                    for a in 1..=k {
                        for b in a + 1..=k {
                            let (x, y) = (f[a - 1], f[b - 1]);
                            if (x == i && y == j) || (x == j && y == i) {
                                p.add_scaled(&Poly::letter(letter_index(k, a, b)), &Scalar::one());
                            }
                        }
                    }
                    p
                }
                IndexMap::Kappa { g, .. } => Poly::letter(letter_index(k, g[i - 1], g[j - 1])),
            })
            .collect()
    }
}

/// The maps `f` and `g` realising `t_n (+) t_m -> t_{n+m-1}` at slot `i`.
pub fn circ_maps(n: usize, m: usize, i: usize) -> (IndexMap, IndexMap) {
    let total = n + m - 1;
    let f: Vec<usize> = (1..=total)
        .map(|s| {
            if s < i {
                s
            } else if s < i + m {
                i
            } else {
                s - m + 1
            }
        })
        .collect();
    let g: Vec<usize> = (1..=m).map(|l| i + l - 1).collect();
    (IndexMap::Pi { n, f }, IndexMap::Kappa { m: total, g })
}

/// Shared cache of braid bases and derived operations.
pub struct BraidContext {
    pub caps: BraidCaps,
    bases: Mutex<HashMap<(usize, usize), Arc<BraidBasis>>>,
    brackets: Mutex<HashMap<(usize, usize, usize, usize, usize), BraidElement>>,
}

impl BraidContext {
    pub fn new(caps: BraidCaps) -> Self {
        BraidContext {
            caps,
            bases: Mutex::new(HashMap::new()),
            brackets: Mutex::new(HashMap::new()),
        }
    }

    fn check(&self, n: usize, d: usize) -> Result<(), BraidError> {
        if n > self.caps.max_n {
            return Err(BraidError::CapExceeded {
                name: "max-arity",
                value: n,
                cap: self.caps.max_n,
            });
        }
        if d > self.caps.max_len {
            return Err(BraidError::CapExceeded {
                name: "max-length",
                value: d,
                cap: self.caps.max_len,
            });
        }
        Ok(())
    }

    pub fn basis(&self, n: usize, d: usize) -> Result<Arc<BraidBasis>, BraidError> {
        self.check(n, d)?;
        if let Some(b) = self.bases.lock().unwrap().get(&(n, d)) {
            return Ok(b.clone());
        }
        let ideal_seed: Vec<Poly> = if d == 0 {
            Vec::new()
        } else if d == 1 {
            relations(n)
        } else {
            let prev = self.basis(n, d - 1)?;
            let gens: Vec<Poly> = (0..letters(n).len() as u8).map(Poly::letter).collect();
            let mut v = Vec::new();
            for g in &gens {
                for p in &prev.ideal {
                    v.push(g.bracket(p));
                }
            }
            v
        };
        let alphabet = letters(n).len();
        let mut b = BraidBasis {
            n,
            d,
            reps: Vec::new(),
            rep_polys: Vec::new(),
            ideal: Vec::new(),
            reducer: Reducer::new(),
            alphabet,
        };
        for p in ideal_seed {
            let v = b.vectorize(&p);
            if let Insert::Pivot(_) = b.reducer.insert_tagged(&v, SparseVec::new()) {
                b.ideal.push(p);
            }
        }
        for w in lyndon_words(alphabet as u8, d + 1) {
            let p = standard_bracketing(&w);
            let v = b.vectorize(&p);
            if let Insert::Pivot(_) = b.reducer.insert_tagged(&v, unit(b.reps.len())) {
                b.reps.push(w);
                b.rep_polys.push(p);
            }
        }
        let b = Arc::new(b);
        self.bases.lock().unwrap().insert((n, d), b.clone());
        Ok(b)
    }

    pub fn dim(&self, n: usize, d: usize) -> Result<usize, BraidError> {
        Ok(self.basis(n, d)?.dim())
    }

    pub fn gen(&self, n: usize, i: usize, j: usize) -> Result<BraidElement, BraidError> {
        self.from_poly(n, 0, &Poly::letter(letter_index(n, i, j)))
    }

    pub fn from_poly(&self, n: usize, d: usize, p: &Poly) -> Result<BraidElement, BraidError> {
        let b = self.basis(n, d)?;
        let coords = b.coordinates(p).ok_or(BraidError::NotInBasis { n, d })?;
        Ok(BraidElement { n, d, coords })
    }

    pub fn to_poly(&self, x: &BraidElement) -> Result<Poly, BraidError> {
        let b = self.basis(x.n, x.d)?;
        let mut p = Poly::zero();
        for (i, c) in &x.coords {
            p.add_scaled(&b.rep_polys[*i], c);
        }
        Ok(p)
    }

    pub fn basis_bracket(
        &self,
        n: usize,
        d1: usize,
        i1: usize,
        d2: usize,
        i2: usize,
    ) -> Result<BraidElement, BraidError> {
        let key = (n, d1, i1, d2, i2);
        if let Some(e) = self.brackets.lock().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let a = self.basis(n, d1)?.rep_polys[i1].clone();
        let b = self.basis(n, d2)?.rep_polys[i2].clone();
        let e = self.from_poly(n, d1 + d2 + 1, &a.bracket(&b))?;
        self.brackets.lock().unwrap().insert(key, e.clone());
        Ok(e)
    }

    pub fn bracket(&self, x: &BraidElement, y: &BraidElement) -> Result<BraidElement, BraidError> {
        if x.n != y.n {
            return Err(BraidError::InvalidMap(format!("bracket of t_{} with t_{}", x.n, y.n)));
        }
        let mut out = BraidElement::zero(x.n, x.d + y.d + 1);
        self.check(x.n, out.d)?;
        for (i, a) in &x.coords {
            for (j, b) in &y.coords {
                let e = self.basis_bracket(x.n, x.d, *i, y.d, *j)?;
                out.add_scaled(&e, &(a * b));
            }
        }
        Ok(out)
    }

    /// Applies an operadic index map to a homogeneous element.
    pub fn apply_map(&self, map: &IndexMap, x: &BraidElement) -> Result<BraidElement, BraidError> {
        map.validate()?;
        if x.n != map.source() {
            return Err(BraidError::InvalidMap(format!(
                "map from t_{} applied to an element of t_{}",
                map.source(),
                x.n
            )));
        }
        let images = map.letter_images();
        let p = self.to_poly(x)?.substitute(&images);
        self.from_poly(map.target(), x.d, &p)
    }

    pub fn pi_f(&self, f: &[usize], n: usize, x: &BraidElement) -> Result<BraidElement, BraidError> {
        self.apply_map(&IndexMap::Pi { n, f: f.to_vec() }, x)
    }

    pub fn kappa(&self, g: &[usize], m: usize, x: &BraidElement) -> Result<BraidElement, BraidError> {
        self.apply_map(&IndexMap::Kappa { m, g: g.to_vec() }, x)
    }
}

/// Substitution points of the five-term pentagon sum, with signs.
fn pentagon_terms(n: usize) -> Vec<(i64, Poly, Poly)> {
    let t = |i: usize, j: usize| Poly::letter(letter_index(n, i, j));
    let sum = |a: Poly, b: Poly| {
        let mut s = a;
        s.add_scaled(&b, &Scalar::one());
        s
    };
    vec![
        (1, t(1, 2), t(2, 3)),
        (-1, sum(t(1, 3), t(2, 3)), t(3, 4)),
        (1, sum(t(1, 2), t(1, 3)), sum(t(2, 4), t(3, 4))),
        (-1, t(1, 2), sum(t(2, 3), t(2, 4))),
        (1, t(2, 3), t(3, 4)),
    ]
}

/// Lyndon basis of the weight-`w` part of the free Lie algebra on `x, y`.
pub fn lie_xy_basis(w: usize) -> Vec<Poly> {
    lyndon_words(2, w)
        .iter()
        .map(|word| standard_bracketing(word))
        .collect()
}

/// The five-term alternating substitution of `psi(x, y)` into `t_4`.
pub fn pentagon_apply(ctx: &BraidContext, psi: &Poly, w: usize) -> Result<BraidElement, BraidError> {
    if w == 0 {
        return Err(BraidError::InvalidMap("weight must be positive".into()));
    }
    let mut total = Poly::zero();
    for (s, a, b) in pentagon_terms(4) {
        total.add_scaled(&psi.substitute(&[a, b]), &scalar::int(s));
    }
    ctx.from_poly(4, w - 1, &total)
}

/// Kernel of `pentagon_apply` on weight-`w` Lie polynomials in `x, y`.
pub fn pentagon_solutions(ctx: &BraidContext, w: usize) -> Result<Vec<Poly>, BraidError> {
    let basis = lie_xy_basis(w);
    let mut images = Vec::new();
    for p in &basis {
        images.push(pentagon_apply(ctx, p, w)?.coords);
    }
    Ok(kernel_of_map(&images)
        .into_iter()
        .map(|k| {
            let mut p = Poly::zero();
            for (i, c) in k {
                p.add_scaled(&basis[i], &c);
            }
            p
        })
        .collect())
}

/// Substitutes `x = t_12`, `y = t_23`, the identification under which the
/// pentagon sum is the coface differential of `t_3`.
pub fn embed_xy(ctx: &BraidContext, psi: &Poly, w: usize) -> Result<BraidElement, BraidError> {
    let images = [Poly::letter(letter_index(3, 1, 2)), Poly::letter(letter_index(3, 2, 3))];
    ctx.from_poly(3, w - 1, &psi.substitute(&images))
}

/// Generator of a chain: `(length, basis index)`.
pub type CeGen = (usize, usize);

/// An element of the exterior algebra on `t_n`, one factor per CE degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CeChain {
    pub n: usize,
    pub terms: BTreeMap<Vec<CeGen>, Scalar>,
}

pub(crate) fn sort_odd(seq: &[CeGen]) -> Option<(Vec<CeGen>, Scalar)> {
    let mut v = seq.to_vec();
    let mut swaps = 0i64;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, scalar::sign(swaps)))
}

impl CeChain {
    pub fn zero(n: usize) -> Self {
        CeChain {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(n: usize) -> Self {
        let mut c = Self::zero(n);
        c.terms.insert(Vec::new(), Scalar::one());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Vec<CeGen>, c: Scalar) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    /// Adds `c` times the ordered product of generators.
    pub fn add_ordered(&mut self, seq: &[CeGen], c: Scalar) {
        if let Some((m, s)) = sort_odd(seq) {
            self.add_term(m, c * s);
        }
    }

    pub fn add_scaled(&mut self, other: &CeChain, c: &Scalar) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn from_element(x: &BraidElement) -> Self {
        let mut c = Self::zero(x.n);
        for (i, v) in &x.coords {
            c.add_term(vec![(x.d, *i)], v.clone());
        }
        c
    }

    pub fn wedge(&self, other: &CeChain) -> CeChain {
        let mut out = CeChain::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut seq = a.clone();
                seq.extend_from_slice(b);
                out.add_ordered(&seq, x * y);
            }
        }
        out
    }

    pub fn wedge_all(n: usize, xs: &[BraidElement]) -> CeChain {
        xs.iter()
            .fold(CeChain::unit(n), |acc, x| acc.wedge(&CeChain::from_element(x)))
    }

    /// Restriction to CE degree `p`.
    pub fn degree_part(&self, p: usize) -> CeChain {
        let mut c = CeChain::zero(self.n);
        for (m, x) in &self.terms {
            if m.len() == p {
                c.add_term(m.clone(), x.clone());
            }
        }
        c
    }
}

/// Overall sign of the CE boundary: `d(x ^ y) = CE_SIGN * [x, y]`.
pub const CE_SIGN: i64 = -1;

/// CE boundary `d(x_1..x_p) = CE_SIGN * sum_{i<j} (-1)^{i+j+1} [x_i,x_j] x_1..^..^..x_p`.
pub fn ce_boundary(ctx: &BraidContext, c: &CeChain) -> Result<CeChain, BraidError> {
    let mut out = CeChain::zero(c.n);
    for (m, x) in &c.terms {
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                let (di, ii) = m[i];
                let (dj, ij) = m[j];
                let br = ctx.basis_bracket(c.n, di, ii, dj, ij)?;
                let rest: Vec<CeGen> = m
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i && *k != j)
                    .map(|(_, g)| *g)
                    .collect();
                // moving x_i, x_j to the front costs (-1)^{i + j - 1}
                let s = scalar::sign((i + j + 1) as i64) * scalar::int(CE_SIGN);
                for (b, v) in &br.coords {
                    let mut seq = vec![(br.d, *b)];
                    seq.extend_from_slice(&rest);
                    out.add_ordered(&seq, x * v * &s);
                }
            }
        }
    }
    Ok(out)
}

/// Applies `C(h)` for an index map `h`, factor by factor.
pub fn map_chain(ctx: &BraidContext, map: &IndexMap, c: &CeChain) -> Result<CeChain, BraidError> {
    let mut cache: HashMap<CeGen, BraidElement> = HashMap::new();
    let mut out = CeChain::zero(map.target());
    for (m, x) in &c.terms {
        let mut acc = CeChain::unit(map.target());
        for g in m {
            let img = match cache.get(g) {
                Some(e) => e.clone(),
                None => {
                    let mut unitv = BraidElement::zero(c.n, g.0);
                    unitv.coords.insert(g.1, Scalar::one());
                    let e = ctx.apply_map(map, &unitv)?;
                    cache.insert(*g, e.clone());
                    e
                }
            };
            acc = acc.wedge(&CeChain::from_element(&img));
            if acc.is_zero() {
                break;
            }
        }
        out.add_scaled(&acc, x);
    }
    Ok(out)
}

/// Coface maps `t_r -> t_{r+1}` with their signs.
pub fn cofaces(r: usize) -> Vec<(i64, IndexMap)> {
    let mut v = Vec::new();
    v.push((
        1,
        IndexMap::Kappa {
            m: r + 1,
            g: (2..=r + 1).collect(),
        },
    ));
    for i in 1..=r {
        let f: Vec<usize> = (1..=r + 1).map(|s| if s <= i { s } else { s - 1 }).collect();
        v.push((if i % 2 == 0 { 1 } else { -1 }, IndexMap::Pi { n: r, f }));
    }
    v.push((
        if (r + 1) % 2 == 0 { 1 } else { -1 },
        IndexMap::Kappa {
            m: r + 1,
            g: (1..=r).collect(),
        },
    ));
    v
}

/// The coface differential `C(t_r) -> C(t_{r+1})`.
pub fn eps_boundary(ctx: &BraidContext, c: &CeChain) -> Result<CeChain, BraidError> {
    let mut out = CeChain::zero(c.n + 1);
    for (s, map) in cofaces(c.n) {
        out.add_scaled(&map_chain(ctx, &map, c)?, &scalar::int(s));
    }
    Ok(out)
}

/// A chain of the total complex: one component per arity.
pub type TotChain = BTreeMap<usize, CeChain>;

/// The coface part of the total differential, twisted by `(-1)^p`.
pub fn eps_twisted(ctx: &BraidContext, c: &CeChain) -> Result<CeChain, BraidError> {
    let mut out = CeChain::zero(c.n + 1);
    let max_p = c.terms.keys().map(|m| m.len()).max().unwrap_or(0);
    for p in 0..=max_p {
        let part = c.degree_part(p);
        if !part.is_zero() {
            out.add_scaled(&eps_boundary(ctx, &part)?, &scalar::sign(p as i64));
        }
    }
    Ok(out)
}

fn tot_add(t: &mut TotChain, c: &CeChain, s: &Scalar) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(c.n).or_insert_with(|| CeChain::zero(c.n));
    e.add_scaled(c, s);
    if e.is_zero() {
        t.remove(&c.n);
    }
}

/// Total differential `d_CE + (-1)^p d_eps`.
pub fn total_differential(ctx: &BraidContext, x: &TotChain) -> Result<TotChain, BraidError> {
    let mut out = TotChain::new();
    for c in x.values() {
        tot_add(&mut out, &ce_boundary(ctx, c)?, &Scalar::one());
        tot_add(&mut out, &eps_twisted(ctx, c)?, &Scalar::one());
    }
    Ok(out)
}

/// Selects which parts of the total differential to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Parts {
    pub ce: bool,
    pub eps: bool,
}

pub fn ce_total_differential(ctx: &BraidContext, c: &CeChain, parts: Parts) -> Result<TotChain, BraidError> {
    let mut out = TotChain::new();
    if parts.ce {
        tot_add(&mut out, &ce_boundary(ctx, c)?, &Scalar::one());
    }
    if parts.eps {
        tot_add(&mut out, &eps_twisted(ctx, c)?, &Scalar::one());
    }
    Ok(out)
}

/// Monomials of `C^p(t_n)` with total length `len`.
pub fn chain_basis(ctx: &BraidContext, n: usize, p: usize, len: usize) -> Result<Vec<Vec<CeGen>>, BraidError> {
    let mut gens: Vec<CeGen> = Vec::new();
    for d in 0..=len {
        for i in 0..ctx.dim(n, d)? {
            gens.push((d, i));
        }
    }
    let mut out = Vec::new();
    fn rec(gens: &[CeGen], start: usize, p: usize, len: usize, cur: &mut Vec<CeGen>, out: &mut Vec<Vec<CeGen>>) {
        if p == 0 {
            if len == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in start..gens.len() {
            let (d, _) = gens[k];
            if d > len {
                continue;
            }
            cur.push(gens[k]);
            rec(gens, k + 1, p - 1, len - d, cur, out);
            cur.pop();
        }
    }
    rec(&gens, 0, p, len, &mut Vec::new(), &mut out);
    out.sort();
    Ok(out)
}

fn chain_vector(c: &CeChain, index: &mut crate::linalg::Indexer<Vec<CeGen>>) -> SparseVec {
    let mut v = SparseVec::new();
    for (m, x) in &c.terms {
        add_entry(&mut v, index.intern(m), x.clone());
    }
    v
}

/// Whether `H_p` of the CE complex of `t_n` vanishes in total length `len`.
#[derive(Clone, Debug)]
pub struct ExactnessVerdict {
    pub n: usize,
    pub len: usize,
    pub p: usize,
    pub cycles: usize,
    pub boundaries: usize,
    pub vanishes: bool,
}

pub fn exactness_probe(ctx: &BraidContext, n: usize, len: usize, p: usize) -> Result<ExactnessVerdict, BraidError> {
    let src = chain_basis(ctx, n, p, len)?;
    let mut index = crate::linalg::Indexer::new();
    let mut images = Vec::new();
    for m in &src {
        let mut c = CeChain::zero(n);
        c.add_term(m.clone(), Scalar::one());
        images.push(chain_vector(&ce_boundary(ctx, &c)?, &mut index));
    }
    let cycles = kernel_of_map(&images).len();
    let boundaries = if len == 0 {
        0
    } else {
        let higher = chain_basis(ctx, n, p + 1, len - 1)?;
        let mut r = Reducer::new();
        let mut own = crate::linalg::Indexer::from_keys(src.iter().cloned());
        for m in &higher {
            let mut c = CeChain::zero(n);
            c.add_term(m.clone(), Scalar::one());
            r.insert(&chain_vector(&ce_boundary(ctx, &c)?, &mut own));
        }
        r.rank()
    };
    Ok(ExactnessVerdict {
        n,
        len,
        p,
        cycles,
        boundaries,
        vanishes: cycles == boundaries,
    })
}

/// Finds `phi` in `C^{p+1}(t_n)` of length `len - 1` with `d_CE phi = target`.
pub fn ce_primitive(ctx: &BraidContext, target: &CeChain, p: usize, len: usize) -> Result<Option<CeChain>, BraidError> {
    let n = target.n;
    if target.is_zero() {
        return Ok(Some(CeChain::zero(n)));
    }
    if len == 0 {
        return Ok(None);
    }
    let src = chain_basis(ctx, n, p + 1, len - 1)?;
    let mut index = crate::linalg::Indexer::new();
    let mut images = Vec::new();
    for m in &src {
        let mut c = CeChain::zero(n);
        c.add_term(m.clone(), Scalar::one());
        images.push(chain_vector(&ce_boundary(ctx, &c)?, &mut index));
    }
    let tv = chain_vector(target, &mut index);
    Ok(crate::linalg::solve_combination(&images, &tv).map(|coef| {
        let mut c = CeChain::zero(n);
        for (i, x) in coef {
            c.add_term(src[i].clone(), x);
        }
        c
    }))
}

/// Weight `length + p` of a CE monomial.
pub fn chain_weight(m: &[CeGen]) -> usize {
    chain_length(m) + m.len()
}

/// Finds `phi` with `D phi = target` in the total complex.
///
/// The target must be homogeneous in weight `length + p` and in `r - p`;
/// the search ranges over arities `2..=max_r`.
pub fn tot_primitive(ctx: &BraidContext, target: &TotChain, max_r: usize) -> Result<Option<TotChain>, BraidError> {
    let Some((r0, c0)) = target.iter().find(|(_, c)| !c.is_zero()) else {
        return Ok(Some(TotChain::new()));
    };
    let m0 = c0.terms.keys().next().unwrap();
    let weight = chain_weight(m0);
    let degree = *r0 as i64 - m0.len() as i64;
    let mut src: Vec<(usize, Vec<CeGen>)> = Vec::new();
    for r in 2..=max_r {
        let p = r as i64 - (degree - 1);
        if p < 0 || p as usize > weight {
            continue;
        }
        let p = p as usize;
        for m in chain_basis(ctx, r, p, weight - p)? {
            src.push((r, m));
        }
    }
    let mut index: crate::linalg::Indexer<(usize, Vec<CeGen>)> = crate::linalg::Indexer::new();
    let mut vectorize = |t: &TotChain| {
        let mut v = SparseVec::new();
        for (r, c) in t {
            for (m, x) in &c.terms {
                add_entry(&mut v, index.intern(&(*r, m.clone())), x.clone());
            }
        }
        v
    };
    let mut images = Vec::new();
    for (r, m) in &src {
        let mut c = CeChain::zero(*r);
        c.add_term(m.clone(), Scalar::one());
        let mut t = TotChain::new();
        t.insert(*r, c);
        images.push(vectorize(&total_differential(ctx, &t)?));
    }
    let tv = vectorize(target);
    Ok(crate::linalg::solve_combination(&images, &tv).map(|coef| {
        let mut out = TotChain::new();
        for (i, x) in coef {
            let (r, m) = &src[i];
            out.entry(*r)
                .or_insert_with(|| CeChain::zero(*r))
                .add_term(m.clone(), x);
        }
        out
    }))
}

/// Length of a CE monomial.
pub fn chain_length(m: &[CeGen]) -> usize {
    m.iter().map(|g| g.0).sum()
}

/// Result of transporting a pentagon cocycle to a length-zero cocycle.
#[derive(Clone, Debug)]
pub struct Transport {
    /// `phi_3, phi_4, ...`, with `phi_r` in `C^{r-1}(t_r)`.
    pub phis: Vec<CeChain>,
    /// The terminal defect `-d_eps' phi_last`, of length zero.
    pub defect: CeChain,
}

/// Solves `psi = d_CE phi_3` and `-d_eps' phi_r = d_CE phi_{r+1}` until length zero.
pub fn transport(ctx: &BraidContext, psi: &BraidElement) -> Result<Transport, BraidError> {
    if psi.n != 3 {
        return Err(BraidError::InvalidMap("transport starts in t_3".into()));
    }
    let k = psi.d;
    let mut target = CeChain::from_element(psi);
    let mut phis = Vec::new();
    let mut p = 1usize;
    let mut len = k;
    loop {
        let phi = ce_primitive(ctx, &target, p, len)?.ok_or_else(|| {
            BraidError::Inconsistent(format!(
                "no CE primitive in C^{}(t_{}) length {}",
                p + 1,
                target.n,
                len.saturating_sub(1)
            ))
        })?;
        let next = eps_twisted(ctx, &phi)?;
        let mut neg = CeChain::zero(next.n);
        neg.add_scaled(&next, &-Scalar::one());
        phis.push(phi);
        p += 1;
        len -= 1;
        if len == 0 {
            return Ok(Transport { phis, defect: neg });
        }
        target = neg;
    }
}

/// Enumerates generators of `C(t_n)` up to the given length.
pub fn chain_generators(ctx: &BraidContext, n: usize, max_len: usize) -> Result<Vec<CeGen>, BraidError> {
    let mut gens = Vec::new();
    for d in 0..=max_len {
        for i in 0..ctx.dim(n, d)? {
            gens.push((d, i));
        }
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> BraidContext {
        BraidContext::new(BraidCaps::default())
    }

    #[test]
    fn small_dimensions() {
        let c = ctx();
        assert_eq!(c.dim(4, 0).unwrap(), 6);
        assert_eq!(c.dim(3, 1).unwrap(), 1);
        assert_eq!(c.dim(4, 1).unwrap(), 4);
    }

    #[test]
    fn kappa_relabels() {
        let c = ctx();
        let t12 = c.gen(2, 1, 2).unwrap();
        assert_eq!(c.kappa(&[2, 4], 4, &t12).unwrap(), c.gen(4, 2, 4).unwrap());
    }

    #[test]
    fn pentagon_small_weights() {
        let c = ctx();
        let x = Poly::letter(0);
        let y = Poly::letter(1);
        assert_eq!(pentagon_apply(&c, &x, 1).unwrap(), c.gen(4, 1, 2).unwrap());
        assert!(pentagon_apply(&c, &x.bracket(&y), 2).unwrap().is_zero());
        assert!(pentagon_solutions(&c, 1).unwrap().is_empty());
        assert_eq!(pentagon_solutions(&c, 2).unwrap().len(), 1);
    }

    #[test]
    fn eps_vanishes_on_t2() {
        let c = ctx();
        let t12 = CeChain::from_element(&c.gen(2, 1, 2).unwrap());
        assert!(eps_boundary(&c, &t12).unwrap().is_zero());
    }

    #[test]
    fn cap_reported() {
        let c = BraidContext::new(BraidCaps { max_n: 4, max_len: 1 });
        assert!(matches!(
            c.basis(4, 2),
            Err(BraidError::CapExceeded { name: "max-length", .. })
        ));
    }
}
