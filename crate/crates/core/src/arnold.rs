//! The Arnol'd algebra `coGer(n)`.
//!
//! Generators `w_ij` (`1 <= i < j <= n`) are odd. A monomial is stored as a
//! sorted list of pairs, read as the wedge product in that order.
//!
//! The normal-form basis consists of edge sets forming a forest in which each
//! component tree is a bracket monomial: the tree on vertex set `B` contains
//! the edge `(min B, max B)`, and deleting it leaves two subtrees that are
//! again of this form. Rewriting uses the three-term relation
//! `w_ab w_bc = (w_ab - w_bc) w_ac`, which shortens the tree path between
//! `min B` and `max B` until that edge appears.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::scalar::{self, Scalar};

pub type Pair = (usize, usize);
pub type Monomial = Vec<Pair>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArnoldError {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("block (i={i}, k={k}) out of range for arity {n}")]
    BlockOutOfRange { n: usize, i: usize, k: usize },
    #[error("map is not a strictly increasing injection into [{0}]")]
    BadInjection(usize),
    #[error("pair ({0},{1}) is not valid in arity {2}")]
    BadPair(usize, usize, usize),
}

pub fn pair(a: usize, b: usize) -> Pair {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// All generator pairs of arity `n` in lexicographic order.
pub fn all_pairs(n: usize) -> Vec<Pair> {
    let mut v = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            v.push((i, j));
        }
    }
    v
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArnoldElement {
    arity: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl std::fmt::Debug for ArnoldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

fn add_to(terms: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
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

/// Sorts a pair sequence, returning the sign, or `None` on a repeat.
fn sort_with_sign(seq: &[Pair]) -> Option<(Monomial, Scalar)> {
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

struct Forest {
    adj: BTreeMap<usize, Vec<(usize, usize)>>,
}

impl Forest {
    fn new(slots: &[Pair]) -> Self {
        let mut adj: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (s, &(a, b)) in slots.iter().enumerate() {
            adj.entry(a).or_default().push((b, s));
            adj.entry(b).or_default().push((a, s));
        }
        Forest { adj }
    }

    fn has_cycle(slots: &[Pair]) -> bool {
        let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
        fn find(p: &mut BTreeMap<usize, usize>, x: usize) -> usize {
            let mut r = x;
            while let Some(&q) = p.get(&r) {
                if q == r {
                    break;
                }
                r = q;
            }
            p.insert(x, r);
            r
        }
        for &(a, b) in slots {
            parent.entry(a).or_insert(a);
            parent.entry(b).or_insert(b);
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra == rb {
                return true;
            }
            parent.insert(ra, rb);
        }
        false
    }

    /// Vertices reachable from `start` using slots in `allowed`.
    fn component(&self, start: usize, allowed: &[bool]) -> Vec<usize> {
        let mut seen = vec![start];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if let Some(nb) = self.adj.get(&v) {
                for &(w, s) in nb {
                    if allowed[s] && !seen.contains(&w) {
                        seen.push(w);
                        stack.push(w);
                    }
                }
            }
        }
        seen.sort_unstable();
        seen
    }

    /// Slot sequence along the tree path from `from` to `to`.
    fn path(&self, from: usize, to: usize, allowed: &[bool]) -> Vec<(usize, usize)> {
        let mut prev: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut stack = vec![from];
        let mut seen = vec![from];
        while let Some(v) = stack.pop() {
            if v == to {
                break;
            }
            if let Some(nb) = self.adj.get(&v) {
                for &(w, s) in nb {
                    if allowed[s] && !seen.contains(&w) {
                        seen.push(w);
                        prev.insert(w, (v, s));
                        stack.push(w);
                    }
                }
            }
        }
        // (vertex, slot reaching it), from `from` towards `to`
        let mut out = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, s) = prev[&cur];
            out.push((cur, s));
            cur = p;
        }
        out.reverse();
        out
    }
}

/// Locates a rewrite in a tree with vertex set `verts` using `allowed` slots.
/// Returns the two slots `(ab, bc)` and the vertices `a, b, c` if defective.
fn find_defect(
    forest: &Forest,
    slots: &[Pair],
    verts: &[usize],
    allowed: &[bool],
) -> Option<(usize, usize, usize, usize, usize)> {
    if verts.len() < 2 {
        return None;
    }
    let lo = verts[0];
    let hi = *verts.last().unwrap();
    let inside: Vec<bool> = (0..slots.len())
        .map(|s| allowed[s] && verts.contains(&slots[s].0))
        .collect();
    let path = forest.path(lo, hi, &inside);
    if path.len() >= 2 {
        let (b, s1) = path[0];
        let (c, s2) = path[1];
        return Some((s1, s2, lo, b, c));
    }
    let root = path[0].1;
    let mut rest = inside.clone();
    rest[root] = false;
    let x = forest.component(lo, &rest);
    let y = forest.component(hi, &rest);
    find_defect(forest, slots, &x, &rest).or_else(|| find_defect(forest, slots, &y, &rest))
}

/// True when the sorted edge set is a normal-form basis monomial.
pub fn is_basis_monomial(m: &[Pair]) -> bool {
    if m.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    let f = Forest::new(m);
    if Forest::has_cycle(m) {
        return false;
    }
    let allowed = vec![true; m.len()];
    let mut done: Vec<usize> = Vec::new();
    for &v in f.adj.keys() {
        if done.contains(&v) {
            continue;
        }
        let comp = f.component(v, &allowed);
        if find_defect(&f, m, &comp, &allowed).is_some() {
            return false;
        }
        done.extend(comp);
    }
    true
}

/// Reduces an ordered product of generators times `c` into normal form.
fn reduce_into(terms: &mut BTreeMap<Monomial, Scalar>, slots: Vec<Pair>, c: Scalar) {
    let mut stack = vec![(slots, c)];
    while let Some((slots, c)) = stack.pop() {
        if c.is_zero() {
            continue;
        }
        let mut sorted = slots.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let f = Forest::new(&slots);
        if Forest::has_cycle(&slots) {
            continue;
        }
        let allowed = vec![true; slots.len()];
        let mut defect = None;
        let mut done: Vec<usize> = Vec::new();
        for &v in f.adj.keys() {
            if done.contains(&v) {
                continue;
            }
            let comp = f.component(v, &allowed);
            defect = find_defect(&f, &slots, &comp, &allowed);
            if defect.is_some() {
                break;
            }
            done.extend(comp);
        }
        match defect {
            None => {
                let (m, s) = sort_with_sign(&slots).expect("distinct pairs");
                add_to(terms, m, c * s);
            }
            Some((s1, s2, a, b, cc)) => {
                // w_ab w_bc = w_ab w_ac - w_bc w_ac, applied in place
                let mut t1 = slots.clone();
                t1[s2] = pair(a, cc);
                let mut t2 = slots;
                t2[s1] = pair(b, cc);
                t2[s2] = pair(a, cc);
                stack.push((t1, c.clone()));
                stack.push((t2, -c));
            }
        }
    }
}

/// Basis monomials of `coGer(n)^k` in lexicographic order.
pub fn enumerate_g(n: usize, k: usize) -> Vec<Monomial> {
    use itertools::Itertools;
    let pairs = all_pairs(n);
    if k > pairs.len() {
        return Vec::new();
    }
    pairs
        .into_iter()
        .combinations(k)
        .filter(|m| is_basis_monomial(m))
        .collect()
}

/// Unsigned Stirling number of the first kind `|s(n, m)|`.
pub fn stirling_first(n: usize, m: usize) -> u64 {
    let mut row = vec![1u64];
    for i in 0..n {
        let mut next = vec![0u64; row.len() + 1];
        for (j, &x) in row.iter().enumerate() {
            next[j + 1] += x;
            next[j] += x * i as u64;
        }
        row = next;
    }
    row.get(m).copied().unwrap_or(0)
}

impl ArnoldElement {
    pub fn zero(arity: usize) -> Self {
        ArnoldElement {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        let mut e = Self::zero(arity);
        e.terms.insert(Vec::new(), Scalar::one());
        e
    }

    pub fn gen(arity: usize, i: usize, j: usize) -> Self {
        Self::product_of(arity, &[pair(i, j)], Scalar::one())
    }

    /// Normal form of `c` times the ordered product of the given generators.
    pub fn product_of(arity: usize, seq: &[Pair], c: Scalar) -> Self {
        let mut e = Self::zero(arity);
        reduce_into(&mut e.terms, seq.to_vec(), c);
        e
    }

    /// Normal form of a free-presentation element given as ordered products.
    pub fn normal_form(arity: usize, free: &[(Scalar, Vec<Pair>)]) -> Result<Self, ArnoldError> {
        let mut e = Self::zero(arity);
        for (c, seq) in free {
            for &(a, b) in seq {
                if a == b || a == 0 || b == 0 || a > arity || b > arity {
                    return Err(ArnoldError::BadPair(a, b, arity));
                }
            }
            let seq: Vec<Pair> = seq.iter().map(|&(a, b)| pair(a, b)).collect();
            reduce_into(&mut e.terms, seq, c.clone());
        }
        Ok(e)
    }

    /// Builds an element from basis coordinates without reduction.
    pub fn from_basis_terms(arity: usize, terms: BTreeMap<Monomial, Scalar>) -> Self {
        debug_assert!(terms.keys().all(|m| is_basis_monomial(m)));
        let mut e = Self::zero(arity);
        for (m, c) in terms {
            add_to(&mut e.terms, m, c);
        }
        e
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[Pair]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Form degree if homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.len());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn add(&self, other: &Self) -> Result<Self, ArnoldError> {
        if self.arity != other.arity {
            return Err(ArnoldError::ArityMismatch(self.arity, other.arity));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_to(&mut out.terms, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ArnoldError> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        for (m, x) in &other.terms {
            add_to(&mut self.terms, m.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.arity);
        for (m, x) in &self.terms {
            add_to(&mut out.terms, m.clone(), x * c);
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, ArnoldError> {
        if self.arity != other.arity {
            return Err(ArnoldError::ArityMismatch(self.arity, other.arity));
        }
        let mut out = Self::zero(self.arity);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut seq = a.clone();
                seq.extend_from_slice(b);
                reduce_into(&mut out.terms, seq, x * y);
            }
        }
        Ok(out)
    }

    /// The odd derivation with value 1 on every generator.
    pub fn iota_v(&self) -> Self {
        let mut out = Self::zero(self.arity);
        for (m, c) in &self.terms {
            for pos in 0..m.len() {
                let mut rest = m.clone();
                rest.remove(pos);
                // removing a sorted entry keeps order, so no reduction needed
                add_to(&mut out.terms, rest, c * scalar::sign(pos as i64));
            }
        }
        out
    }

    /// Derivative with respect to one generator, acting from the left.
    pub fn partial(&self, p: Pair) -> Self {
        let mut out = Self::zero(self.arity);
        for (m, c) in &self.terms {
            if let Some(pos) = m.iter().position(|&q| q == p) {
                let mut rest = m.clone();
                rest.remove(pos);
                let mut t = BTreeMap::new();
                reduce_into(&mut t, rest, c * scalar::sign(pos as i64));
                for (k, v) in t {
                    add_to(&mut out.terms, k, v);
                }
            }
        }
        out
    }

    /// Pullback along the strictly increasing map `iota[a-1] = image of a`.
    pub fn pullback(&self, iota: &[usize], m: usize) -> Result<Self, ArnoldError> {
        if iota.len() != self.arity || iota.windows(2).any(|w| w[0] >= w[1]) || iota.iter().any(|&x| x == 0 || x > m) {
            return Err(ArnoldError::BadInjection(m));
        }
        let mut out = Self::zero(m);
        for (mono, c) in &self.terms {
            let seq: Vec<Pair> = mono.iter().map(|&(a, b)| (iota[a - 1], iota[b - 1])).collect();
            reduce_into(&mut out.terms, seq, c.clone());
        }
        Ok(out)
    }

    /// Nonsymmetric cocomposition collapsing the block `i..i+k-1`.
    pub fn cocompose(&self, i: usize, k: usize) -> Result<ArnoldTensor, ArnoldError> {
        let n = self.arity;
        if k < 2 || k >= n || i < 1 || i + k - 1 > n {
            return Err(ArnoldError::BlockOutOfRange { n, i, k });
        }
        let mut out = ArnoldTensor::zero(n - k + 1, k);
        for (mono, c) in &self.terms {
            let mut outer = Vec::new();
            let mut inner = Vec::new();
            let mut sign = 0i64;
            for &(a, b) in mono {
                if in_block(a, i, k) && in_block(b, i, k) {
                    inner.push((a - i + 1, b - i + 1));
                } else {
                    sign += inner.len() as i64;
                    outer.push(pair(collapse(a, i, k), collapse(b, i, k)));
                }
            }
            let o = ArnoldElement::product_of(n - k + 1, &outer, Scalar::one());
            if o.is_zero() {
                continue;
            }
            let p = ArnoldElement::product_of(k, &inner, Scalar::one());
            let c = c * scalar::sign(sign);
            for (om, oc) in &o.terms {
                for (pm, pc) in &p.terms {
                    out.add_term(om.clone(), pm.clone(), &c * oc * pc);
                }
            }
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mono = if m.is_empty() {
                "1".to_string()
            } else {
                m.iter().map(|(a, b)| format!("w{a}{b}")).collect::<Vec<_>>().join("*")
            };
            let cs = scalar::format(c);
            if idx == 0 {
                s.push_str(&format!("{cs}*{mono}"));
            } else if let Some(stripped) = cs.strip_prefix('-') {
                s.push_str(&format!(" - {stripped}*{mono}"));
            } else {
                s.push_str(&format!(" + {cs}*{mono}"));
            }
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                json!({
                    "c": scalar::format(c),
                    "m": m.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>()
                })
            })
            .collect();
        json!({
            "cooperad": "coGer",
            "arity": self.arity,
            "degree": self.degree().unwrap_or(0),
            "terms": terms,
        })
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let arity = v.get("arity")?.as_u64()? as usize;
        let mut free = Vec::new();
        for t in v.get("terms")?.as_array()? {
            let c = scalar::parse(t.get("c")?.as_str()?)?;
            let mut seq = Vec::new();
            for p in t.get("m")?.as_array()? {
                let p = p.as_array()?;
                seq.push((p.first()?.as_u64()? as usize, p.get(1)?.as_u64()? as usize));
            }
            free.push((c, seq));
        }
        Self::normal_form(arity, &free).ok()
    }
}

fn in_block(a: usize, i: usize, k: usize) -> bool {
    a >= i && a < i + k
}

fn collapse(a: usize, i: usize, k: usize) -> usize {
    if a < i {
        a
    } else if a < i + k {
        i
    } else {
        a - k + 1
    }
}

/// Element of `coGer(n1) (x) coGer(n2)` in basis coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArnoldTensor {
    pub outer_arity: usize,
    pub inner_arity: usize,
    terms: BTreeMap<(Monomial, Monomial), Scalar>,
}

impl ArnoldTensor {
    pub fn zero(outer_arity: usize, inner_arity: usize) -> Self {
        ArnoldTensor {
            outer_arity,
            inner_arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, a: Monomial, b: Monomial, c: Scalar) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry((a, b)) {
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

    pub fn terms(&self) -> &BTreeMap<(Monomial, Monomial), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pure(a: &ArnoldElement, b: &ArnoldElement) -> Self {
        let mut t = Self::zero(a.arity, b.arity);
        for (am, ac) in &a.terms {
            for (bm, bc) in &b.terms {
                t.add_term(am.clone(), bm.clone(), ac * bc);
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    /// Product with Koszul sign `(-1)^{|b||a'|}`.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.outer_arity, self.inner_arity);
        for ((a, b), x) in &self.terms {
            for ((a2, b2), y) in &other.terms {
                let s = scalar::sign((b.len() * a2.len()) as i64);
                let mut sa = a.clone();
                sa.extend_from_slice(a2);
                let mut sb = b.clone();
                sb.extend_from_slice(b2);
                let l = ArnoldElement::product_of(self.outer_arity, &sa, Scalar::one());
                if l.is_zero() {
                    continue;
                }
                let r = ArnoldElement::product_of(self.inner_arity, &sb, Scalar::one());
                for (lm, lc) in &l.terms {
                    for (rm, rc) in &r.terms {
                        out.add_term(lm.clone(), rm.clone(), x * y * &s * lc * rc);
                    }
                }
            }
        }
        out
    }

    /// Applies `f` to the outer factor and `g` to the inner factor, with the
    /// Koszul sign `(-1)^{|g| |outer|}`.
    pub fn map_factors(
        &self,
        f: impl Fn(&ArnoldElement) -> ArnoldElement,
        g: impl Fn(&ArnoldElement) -> ArnoldElement,
        g_odd: bool,
    ) -> Self {
        let mut out: Option<Self> = None;
        for ((a, b), c) in &self.terms {
            let fa = f(&ArnoldElement::from_basis_terms(
                self.outer_arity,
                BTreeMap::from([(a.clone(), Scalar::one())]),
            ));
            let gb = g(&ArnoldElement::from_basis_terms(
                self.inner_arity,
                BTreeMap::from([(b.clone(), Scalar::one())]),
            ));
            let s = if g_odd {
                scalar::sign(a.len() as i64)
            } else {
                Scalar::one()
            };
            let mut t = Self::pure(&fa, &gb);
            t.outer_arity = fa.arity;
            t.inner_arity = gb.arity;
            let cc = c * s;
            let view = out.get_or_insert_with(|| Self::zero(fa.arity, gb.arity));
            for ((x, y), v) in t.terms {
                view.add_term(x, y, v * &cc);
            }
        }
        out.unwrap_or_else(|| self.clone_empty())
    }

    fn clone_empty(&self) -> Self {
        Self::zero(self.outer_arity, self.inner_arity)
    }

    /// `(id (x) iota_v)` applied to this tensor.
    pub fn id_iota(&self) -> Self {
        self.map_factors(|a| a.clone(), |b| b.iota_v(), true)
    }

    /// `(iota_v (x) id)` applied to this tensor.
    pub fn iota_id(&self) -> Self {
        self.map_factors(|a| a.iota_v(), |b| b.clone(), false)
    }
}
