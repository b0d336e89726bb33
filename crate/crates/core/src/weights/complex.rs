//! Generators of the algebra of formal weights and its differential.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::Zero;

use super::handle::Cooperad;
use super::{GenId, WeightElement, WeightGenerator, WeightsError};
use crate::moduli::blocks;
use crate::scalar::{self, Scalar};

/// Basis symbols of `A(n)^p`, `p <= n - 2`, within the weight cap.
pub fn truncated_generators(h: &dyn Cooperad, n: usize) -> Result<Vec<WeightGenerator>, WeightsError> {
    let mut out = Vec::new();
    for p in 0..=n.saturating_sub(2) {
        if n < 2 {
            break;
        }
        for w in h.weights(n, p) {
            if w > h.caps().max_weight {
                continue;
            }
            for idx in 0..h.dim(n, p, w)? {
                out.push(WeightGenerator::basis(h, GenId::new(n, p, w, idx)));
            }
        }
    }
    Ok(out)
}

/// Kept generators of a given degree and weight, over all arities.
pub fn generators_of(h: &dyn Cooperad, degree: i64, w: usize) -> Result<Vec<GenId>, WeightsError> {
    let mut out = Vec::new();
    let top = w as i64 + 2 - degree;
    for n in 2..=top.max(1) as usize {
        let p = n as i64 - 2 + degree;
        if p < 0 || p as usize > w {
            continue;
        }
        let p = p as usize;
        for idx in 0..h.dim(n, p, w)? {
            out.push(GenId::new(n, p, w, idx));
        }
    }
    Ok(out.into_iter().filter(|g| !g.is_arity_two_unit()).collect())
}

/// Sign of the block `(i, k)` term in arity `n`; fixed by `d^2 = 0`.
fn block_sign(n: usize, i: usize, k: usize, inner_p: usize, outer_p: usize) -> Scalar {
    scalar::sign(((i - 1) + k * (n + 1 - i - k) + inner_p * (k + n) + outer_p) as i64)
}

/// Sign of the internal term.
fn internal_sign(_g: &GenId) -> Scalar {
    scalar::sign(0)
}

/// The differential on symbols, memoized per basis element.
pub struct WeightDifferential<'a> {
    pub handle: &'a dyn Cooperad,
    cache: Mutex<HashMap<GenId, WeightElement>>,
}

impl<'a> WeightDifferential<'a> {
    pub fn new(handle: &'a dyn Cooperad) -> Self {
        WeightDifferential {
            handle,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// `dI(g) = I(d g) + sum_{blocks} sign * I(outer) I(inner)`.
    pub fn on_basis(&self, g: &GenId) -> Result<WeightElement, WeightsError> {
        if let Some(e) = self.cache.lock().unwrap().get(g) {
            return Ok(e.clone());
        }
        let h = self.handle;
        let mut e = WeightElement::zero();
        if !g.is_arity_two_unit() {
            for (x, c) in h.differential(g)? {
                if x.kept() {
                    e.add_generator(x, c * internal_sign(g));
                }
            }
            for (i, k) in blocks(g.n) {
                for (o, inner, c) in h.cocompose(g, i, k)? {
                    if !(o.kept() && inner.kept()) {
                        continue;
                    }
                    let aug = |x: &GenId| {
                        if x.is_arity_two_unit() {
                            h.augmentation(x)
                        } else {
                            Scalar::from_integer(1.into())
                        }
                    };
                    let coef = c * block_sign(g.n, i, k, inner.p, o.p) * aug(&o) * aug(&inner);
                    e.add_product(&[o, inner], coef);
                }
            }
        }
        self.cache.lock().unwrap().insert(*g, e.clone());
        Ok(e)
    }

    pub fn on_generator(&self, g: &WeightGenerator) -> Result<WeightElement, WeightsError> {
        let mut e = WeightElement::zero();
        for (x, c) in &g.expansion {
            e.add_scaled(&self.on_basis(x)?, c);
        }
        Ok(e)
    }

    /// Extension as a derivation with the Koszul sign.
    pub fn apply(&self, x: &WeightElement) -> Result<WeightElement, WeightsError> {
        let mut out = WeightElement::zero();
        for (m, c) in &x.terms {
            let mut prefix_degree = 0i64;
            for (j, g) in m.iter().enumerate() {
                let dg = self.on_basis(g)?;
                if !dg.is_zero() {
                    let s = c * scalar::sign(prefix_degree);
                    for (dm, dc) in &dg.terms {
                        let mut seq: Vec<GenId> = m[..j].to_vec();
                        seq.extend_from_slice(dm);
                        seq.extend_from_slice(&m[j + 1..]);
                        out.add_product(&seq, &s * dc);
                    }
                }
                prefix_degree += g.degree();
            }
        }
        Ok(out)
    }
}

/// Linear part of the differential without truncating the surviving factor.
pub fn linear_differential(h: &dyn Cooperad, g: &GenId) -> Result<super::Form, WeightsError> {
    let mut out = super::Form::new();
    if g.is_arity_two_unit() {
        return Ok(out);
    }
    for (x, c) in h.differential(g)? {
        super::add_coef(&mut out, x, c * internal_sign(g));
    }
    for (i, k) in blocks(g.n) {
        for (o, inner, c) in h.cocompose(g, i, k)? {
            let coef = c * block_sign(g.n, i, k, inner.p, o.p);
            if o.is_arity_two_unit() && !inner.is_arity_two_unit() {
                super::add_coef(&mut out, inner, coef * h.augmentation(&o));
            } else if inner.is_arity_two_unit() && !o.is_arity_two_unit() {
                super::add_coef(&mut out, o, coef * h.augmentation(&inner));
            }
        }
    }
    Ok(out)
}

/// `weight_differential` on a single generator.
pub fn weight_differential(h: &dyn Cooperad, g: &WeightGenerator) -> Result<WeightElement, WeightsError> {
    WeightDifferential::new(h).on_generator(g)
}

/// Multisets of degree-zero symbols of positive weight with total weight `w`.
pub fn degree_zero_monomials(h: &dyn Cooperad, w: usize) -> Result<Vec<Vec<GenId>>, WeightsError> {
    let mut by_weight: Vec<Vec<GenId>> = Vec::new();
    for wt in 0..=w {
        by_weight.push(if wt == 0 { Vec::new() } else { generators_of(h, 0, wt)? });
    }
    let all: Vec<GenId> = by_weight.concat();
    let mut out = Vec::new();
    fn rec(all: &[GenId], start: usize, rem: usize, cur: &mut Vec<GenId>, out: &mut Vec<Vec<GenId>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for k in start..all.len() {
            if all[k].w <= rem {
                cur.push(all[k]);
                rec(all, k, rem - all[k].w, cur, out);
                cur.pop();
            }
        }
    }
    rec(&all, 0, w, &mut Vec::new(), &mut out);
    for m in &mut out {
        m.sort();
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Products of one degree `-1` symbol with degree-zero symbols, total weight `w`.
pub fn degree_minus_one_monomials(h: &dyn Cooperad, w: usize) -> Result<Vec<Vec<GenId>>, WeightsError> {
    let mut out = Vec::new();
    for w1 in 0..=w {
        let heads = generators_of(h, -1, w1)?;
        if heads.is_empty() {
            continue;
        }
        let tails = if w1 == w {
            vec![Vec::new()]
        } else {
            degree_zero_monomials(h, w - w1)?
        };
        for g in &heads {
            for t in &tails {
                let mut m = vec![*g];
                m.extend_from_slice(t);
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// Checks `(eps (x) eps) Delta_{1,2} = (eps (x) eps) Delta_{2,2}` on all of `A(3)`.
pub fn maurer_cartan_check(h: &dyn Cooperad) -> Result<bool, WeightsError> {
    for p in 0..=2 {
        for g in h.basis(3, p)? {
            let side = |i: usize| -> Result<Scalar, WeightsError> {
                let mut s = Scalar::zero();
                for (o, inner, c) in h.cocompose(&g, i, 2)? {
                    s += c * h.augmentation(&o) * h.augmentation(&inner);
                }
                Ok(s)
            };
            if side(1)? != side(2)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
