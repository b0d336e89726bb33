//! Cochains on the infinitesimal braid Lie algebras.
//!
//! `A(n)` is the exterior algebra on the graded dual of `t_n`. A monomial is
//! a sorted list of dual generators `(length, index)`; the pairing with CE
//! chain monomials is the identity on sorted monomials. Cocompositions and
//! pullbacks are the algebra maps dual to the operad maps on `t`, and the
//! internal differential is the transpose of the CE boundary.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::One;

use super::{add_coef, Form, GenId, WeightCaps, WeightsError};
use crate::arnold::ArnoldElement;
use crate::braids::{
    ce_boundary, chain_basis, circ_maps, letters, sort_odd, BraidCaps, BraidContext, BraidElement, CeChain, CeGen,
    IndexMap,
};
use crate::linalg::SparseVec;
use crate::scalar::Scalar;

use super::handle::Cooperad;

type Mono = Vec<CeGen>;

pub struct BraidCeHandle {
    caps: WeightCaps,
    ctx: BraidContext,
    bases: Mutex<HashMap<(usize, usize, usize), Arc<Vec<Mono>>>>,
    duals: Mutex<HashMap<(IndexMap, usize), Arc<Vec<SparseVec>>>>,
    diffs: Mutex<HashMap<(usize, usize, usize), Arc<Vec<Form>>>>,
}

impl BraidCeHandle {
    pub fn new(caps: WeightCaps) -> Self {
        BraidCeHandle {
            caps,
            ctx: BraidContext::new(BraidCaps {
                max_n: caps.max_arity,
                max_len: caps.max_length,
            }),
            bases: Mutex::new(HashMap::new()),
            duals: Mutex::new(HashMap::new()),
            diffs: Mutex::new(HashMap::new()),
        }
    }

    pub fn context(&self) -> &BraidContext {
        &self.ctx
    }

    fn monomials(&self, n: usize, p: usize, len: usize) -> Result<Arc<Vec<Mono>>, WeightsError> {
        self.caps.check_arity(n)?;
        if let Some(b) = self.bases.lock().unwrap().get(&(n, p, len)) {
            return Ok(b.clone());
        }
        let b = Arc::new(chain_basis(&self.ctx, n, p, len)?);
        self.bases.lock().unwrap().insert((n, p, len), b.clone());
        Ok(b)
    }

    fn monomial(&self, g: &GenId) -> Result<Mono, WeightsError> {
        let len =
            g.w.checked_sub(g.p)
                .ok_or_else(|| WeightsError::NotClosed(format!("{g}")))?;
        self.monomials(g.n, g.p, len)?
            .get(g.idx)
            .cloned()
            .ok_or_else(|| WeightsError::NotClosed(format!("no basis element {g}")))
    }

    /// Coordinates of a sorted monomial in arity `n`.
    fn locate(&self, n: usize, m: &Mono) -> Result<GenId, WeightsError> {
        let len: usize = m.iter().map(|g| g.0).sum();
        let basis = self.monomials(n, m.len(), len)?;
        let idx = basis
            .binary_search(m)
            .map_err(|_| WeightsError::NotClosed(format!("monomial {m:?} in arity {n}")))?;
        Ok(GenId::new(n, m.len(), m.len() + len, idx))
    }

    /// For each basis element of `t_target` in length `len`, the dual
    /// generator `lambda o map` of `t_source`.
    fn dual_images(&self, map: &IndexMap, len: usize) -> Result<Arc<Vec<SparseVec>>, WeightsError> {
        let key = (map.clone(), len);
        if let Some(v) = self.duals.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let src = map.source();
        let mut out = vec![SparseVec::new(); self.ctx.dim(map.target(), len)?];
        for j in 0..self.ctx.dim(src, len)? {
            let mut b = BraidElement::zero(src, len);
            b.coords.insert(j, Scalar::one());
            for (idx, c) in self.ctx.apply_map(map, &b)?.coords {
                out[idx].insert(j, c);
            }
        }
        let out = Arc::new(out);
        self.duals.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Transpose of the CE boundary: `d(e*_nu) = sum_mu <d mu, nu> e*_mu`.
    fn diff_table(&self, n: usize, p: usize, len: usize) -> Result<Arc<Vec<Form>>, WeightsError> {
        if let Some(v) = self.diffs.lock().unwrap().get(&(n, p, len)) {
            return Ok(v.clone());
        }
        let src = self.monomials(n, p, len)?;
        let mut out = vec![Form::new(); src.len()];
        if len > 0 {
            for (mi, mu) in self.monomials(n, p + 1, len - 1)?.iter().enumerate() {
                let mut c = CeChain::zero(n);
                c.add_term(mu.clone(), Scalar::one());
                for (nu, x) in ce_boundary(&self.ctx, &c)?.terms {
                    let j = src.binary_search(&nu).expect("boundary stays in the basis");
                    add_coef(&mut out[j], GenId::new(n, p + 1, p + len, mi), x);
                }
            }
        }
        let out = Arc::new(out);
        self.diffs.lock().unwrap().insert((n, p, len), out.clone());
        Ok(out)
    }
}

impl Cooperad for BraidCeHandle {
    fn name(&self) -> &'static str {
        "braidce"
    }

    fn caps(&self) -> WeightCaps {
        self.caps
    }

    fn weights(&self, _n: usize, p: usize) -> Vec<usize> {
        (p..=p + self.caps.max_length).collect()
    }

    fn dim(&self, n: usize, p: usize, w: usize) -> Result<usize, WeightsError> {
        match w.checked_sub(p) {
            None => Ok(0),
            Some(len) => Ok(self.monomials(n, p, len)?.len()),
        }
    }

    fn label(&self, g: &GenId) -> String {
        match self.monomial(g) {
            Ok(m) if m.is_empty() => "I(1)".to_string(),
            Ok(m) => {
                let parts: Vec<String> = m
                    .iter()
                    .map(|&(d, i)| {
                        if d == 0 {
                            let (a, b) = letters(g.n)[i];
                            format!("t{a}{b}*")
                        } else {
                            format!("e{d}.{i}*")
                        }
                    })
                    .collect();
                format!("I({})", parts.join("^"))
            }
            Err(_) => format!("I{g}"),
        }
    }

    fn cocompose(&self, g: &GenId, i: usize, k: usize) -> Result<Vec<(GenId, GenId, Scalar)>, WeightsError> {
        let n = g.n;
        let outer = n - k + 1;
        let (f, kappa) = circ_maps(outer, k, i);
        let m = self.monomial(g)?;
        // (outer monomial, inner monomial) -> coefficient, both sorted
        let mut acc: BTreeMap<(Mono, Mono), Scalar> = BTreeMap::from([((Vec::new(), Vec::new()), Scalar::one())]);
        for &(len, idx) in &m {
            let o_img = self.dual_images(&f, len)?[idx].clone();
            let i_img = self.dual_images(&kappa, len)?[idx].clone();
            let mut next: BTreeMap<(Mono, Mono), Scalar> = BTreeMap::new();
            let mut push = |key: (Mono, Mono), c: Scalar| {
                let e = next.entry(key.clone()).or_insert_with(|| num_traits::Zero::zero());
                *e += c;
                if num_traits::Zero::is_zero(e) {
                    next.remove(&key);
                }
            };
            for ((a, b), c) in &acc {
                for (j, x) in &o_img {
                    let mut seq = a.clone();
                    seq.push((len, *j));
                    if let Some((sa, s)) = sort_odd(&seq) {
                        // the new outer factor moves past the inner factor
                        let kz = crate::scalar::sign(b.len() as i64);
                        push((sa, b.clone()), c * x * s * kz);
                    }
                }
                for (j, x) in &i_img {
                    let mut seq = b.clone();
                    seq.push((len, *j));
                    if let Some((sb, s)) = sort_odd(&seq) {
                        push((a.clone(), sb), c * x * s);
                    }
                }
            }
            acc = next;
        }
        let mut out = Vec::new();
        for ((a, b), c) in acc {
            out.push((self.locate(outer, &a)?, self.locate(k, &b)?, c));
        }
        Ok(out)
    }

    fn pullback(&self, g: &GenId, iota: &[usize], m: usize) -> Result<Form, WeightsError> {
        if iota.len() != g.n || iota.windows(2).any(|w| w[0] >= w[1]) || iota.iter().any(|&x| x == 0 || x > m) {
            return Err(WeightsError::Arnold(crate::arnold::ArnoldError::BadInjection(m)));
        }
        let map = IndexMap::Pi { n: m, f: iota.to_vec() };
        let mono = self.monomial(g)?;
        let mut acc: BTreeMap<Mono, Scalar> = BTreeMap::from([(Vec::new(), Scalar::one())]);
        for &(len, idx) in &mono {
            let img = self.dual_images(&map, len)?[idx].clone();
            let mut next: BTreeMap<Mono, Scalar> = BTreeMap::new();
            for (a, c) in &acc {
                for (j, x) in &img {
                    let mut seq = a.clone();
                    seq.push((len, *j));
                    if let Some((sa, s)) = sort_odd(&seq) {
                        let e = next.entry(sa.clone()).or_insert_with(|| num_traits::Zero::zero());
                        *e += c * x * s;
                        if num_traits::Zero::is_zero(e) {
                            next.remove(&sa);
                        }
                    }
                }
            }
            acc = next;
        }
        let mut out = Form::new();
        for (a, c) in acc {
            add_coef(&mut out, self.locate(m, &a)?, c);
        }
        Ok(out)
    }

    fn product(&self, a: &GenId, b: &GenId) -> Result<Form, WeightsError> {
        let mut seq = self.monomial(a)?;
        seq.extend(self.monomial(b)?);
        let mut out = Form::new();
        if let Some((m, s)) = sort_odd(&seq) {
            add_coef(&mut out, self.locate(a.n, &m)?, s);
        }
        Ok(out)
    }

    fn differential(&self, g: &GenId) -> Result<Form, WeightsError> {
        let len = g.w - g.p;
        Ok(self.diff_table(g.n, g.p, len)?[g.idx].clone())
    }

    fn to_arnold(&self, g: &GenId) -> Option<ArnoldElement> {
        let m = self.monomial(g).ok()?;
        if m.iter().any(|x| x.0 != 0) {
            return None;
        }
        let pairs: Vec<(usize, usize)> = m.iter().map(|&(_, i)| letters(g.n)[i]).collect();
        Some(ArnoldElement::product_of(g.n, &pairs, Scalar::one()))
    }

    fn from_arnold(&self, e: &ArnoldElement, p: usize) -> Result<Form, WeightsError> {
        // expand each normal-form monomial as a wedge of length-zero duals
        let n = e.arity();
        let mut out = Form::new();
        for (mono, c) in e.terms() {
            if mono.len() != p {
                return Err(WeightsError::NotClosed(format!("degree {} is not {p}", mono.len())));
            }
            let seq: Vec<CeGen> = mono
                .iter()
                .map(|&(a, b)| (0, crate::braids::letter_index(n, a, b) as usize))
                .collect();
            if let Some((m, s)) = sort_odd(&seq) {
                add_coef(&mut out, self.locate(n, &m)?, c * s);
            }
        }
        Ok(out)
    }
}
