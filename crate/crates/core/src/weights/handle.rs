use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::One;

use super::{add_coef, add_form, Form, GenId, WeightCaps, WeightsError};
use crate::arnold::{enumerate_g, ArnoldElement, Monomial};
use crate::linalg::{unit, Indexer, Reducer, SparseVec};
use crate::moduli::adelta_basis;
use crate::scalar::Scalar;
use crate::words::{enumerate_p, print_bracketing};

/// A nonsymmetric cooperad of graded commutative algebras with pullbacks.
///
/// Every `A(n)^p` is split by weight; cocompositions, pullbacks and
/// products preserve weight and are reported in basis coordinates.
pub trait Cooperad: Send + Sync {
    fn name(&self) -> &'static str;
    fn caps(&self) -> WeightCaps;
    /// Weights occurring in `A(n)^p`.
    fn weights(&self, n: usize, p: usize) -> Vec<usize>;
    fn dim(&self, n: usize, p: usize, w: usize) -> Result<usize, WeightsError>;
    fn label(&self, g: &GenId) -> String;
    /// The block cocomposition collapsing `i..i+k-1`, as `(outer, inner, coefficient)`.
    fn cocompose(&self, g: &GenId, i: usize, k: usize) -> Result<Vec<(GenId, GenId, Scalar)>, WeightsError>;
    /// Pullback along the increasing injection `iota : [g.n] -> [m]`.
    fn pullback(&self, g: &GenId, iota: &[usize], m: usize) -> Result<Form, WeightsError>;
    fn product(&self, a: &GenId, b: &GenId) -> Result<Form, WeightsError>;
    /// Internal differential, which raises `p` by one.
    fn differential(&self, g: &GenId) -> Result<Form, WeightsError>;
    /// A model of the element inside `coGer(n)`, where the handle has one.
    fn to_arnold(&self, g: &GenId) -> Option<ArnoldElement>;
    /// Coordinates of a `coGer(n)` form, where the handle has a model.
    fn from_arnold(&self, e: &ArnoldElement, p: usize) -> Result<Form, WeightsError>;

    /// Augmentation of `A(2)`.
    fn augmentation(&self, g: &GenId) -> Scalar {
        if g.is_arity_two_unit() {
            Scalar::one()
        } else {
            num_traits::Zero::zero()
        }
    }

    /// All basis elements of `A(n)^p` in every weight.
    fn basis(&self, n: usize, p: usize) -> Result<Vec<GenId>, WeightsError> {
        let mut out = Vec::new();
        for w in self.weights(n, p) {
            for idx in 0..self.dim(n, p, w)? {
                out.push(GenId::new(n, p, w, idx));
            }
        }
        Ok(out)
    }
}

/// Extends a basis-level bilinear operation to forms.
pub fn product_forms(h: &dyn Cooperad, a: &Form, b: &Form) -> Result<Form, WeightsError> {
    let mut out = Form::new();
    for (x, cx) in a {
        for (y, cy) in b {
            add_form(&mut out, &h.product(x, y)?, &(cx * cy));
        }
    }
    Ok(out)
}

pub fn pullback_form(h: &dyn Cooperad, a: &Form, iota: &[usize], m: usize) -> Result<Form, WeightsError> {
    let mut out = Form::new();
    for (x, c) in a {
        add_form(&mut out, &h.pullback(x, iota, m)?, c);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ArnoldKind {
    Coger,
    Adelta,
}

struct Cell {
    basis: Vec<ArnoldElement>,
    index: Indexer<Monomial>,
    reducer: Reducer,
}

impl Cell {
    fn new(n: usize, basis: Vec<ArnoldElement>, p: usize) -> Cell {
        let index = Indexer::from_keys(enumerate_g(n, p));
        let mut reducer = Reducer::new();
        for (i, b) in basis.iter().enumerate() {
            let v = coords(b, &index);
            reducer.insert_tagged(&v, unit(i));
        }
        Cell { basis, index, reducer }
    }

    fn express(&self, e: &ArnoldElement) -> Option<SparseVec> {
        self.reducer.express(&coords(e, &self.index))
    }
}

fn coords(e: &ArnoldElement, index: &Indexer<Monomial>) -> SparseVec {
    e.terms()
        .iter()
        .map(|(m, c)| (index.get(m).expect("normal-form monomial"), c.clone()))
        .collect()
}

type CocompKey = (GenId, usize, usize);

/// Handles whose algebras live inside the Arnol'd algebras.
pub struct ArnoldHandle {
    kind: ArnoldKind,
    caps: WeightCaps,
    cells: Mutex<HashMap<(usize, usize), Arc<Cell>>>,
    cocomp: Mutex<HashMap<CocompKey, Arc<Vec<(GenId, GenId, Scalar)>>>>,
}

/// The Arnol'd cooperad `coGer`.
pub fn handle_coger(caps: WeightCaps) -> ArnoldHandle {
    ArnoldHandle::new(ArnoldKind::Coger, caps)
}

/// Cohomology of the partially compactified moduli spaces, inside `coGer`.
pub fn handle_adelta(caps: WeightCaps) -> ArnoldHandle {
    ArnoldHandle::new(ArnoldKind::Adelta, caps)
}

impl ArnoldHandle {
    fn new(kind: ArnoldKind, caps: WeightCaps) -> Self {
        ArnoldHandle {
            kind,
            caps,
            cells: Mutex::new(HashMap::new()),
            cocomp: Mutex::new(HashMap::new()),
        }
    }

    fn cell(&self, n: usize, p: usize) -> Result<Arc<Cell>, WeightsError> {
        self.caps.check_arity(n)?;
        if let Some(c) = self.cells.lock().unwrap().get(&(n, p)) {
            return Ok(c.clone());
        }
        let basis = if n == 0 || p >= n.max(1) {
            Vec::new()
        } else {
            match self.kind {
                ArnoldKind::Coger => enumerate_g(n, p)
                    .into_iter()
                    .map(|m| ArnoldElement::from_basis_terms(n, BTreeMap::from([(m, Scalar::one())])))
                    .collect(),
                ArnoldKind::Adelta => adelta_basis(n, p).basis,
            }
        };
        let cell = Arc::new(Cell::new(n, basis, p));
        self.cells.lock().unwrap().insert((n, p), cell.clone());
        Ok(cell)
    }

    fn element(&self, g: &GenId) -> Result<ArnoldElement, WeightsError> {
        let cell = self.cell(g.n, g.p)?;
        cell.basis
            .get(g.idx)
            .cloned()
            .ok_or_else(|| WeightsError::NotClosed(format!("no basis element {g}")))
    }

    fn express(&self, e: &ArnoldElement, p: usize) -> Result<Form, WeightsError> {
        let n = e.arity();
        let cell = self.cell(n, p)?;
        let v = cell
            .express(e)
            .ok_or_else(|| WeightsError::NotClosed(format!("{} in {}({n})^{p}", e.to_text(), self.name())))?;
        Ok(v.into_iter().map(|(i, c)| (GenId::new(n, p, p, i), c)).collect())
    }
}

impl Cooperad for ArnoldHandle {
    fn name(&self) -> &'static str {
        match self.kind {
            ArnoldKind::Coger => "coger",
            ArnoldKind::Adelta => "adelta",
        }
    }

    fn caps(&self) -> WeightCaps {
        self.caps
    }

    fn weights(&self, _n: usize, p: usize) -> Vec<usize> {
        vec![p]
    }

    fn dim(&self, n: usize, p: usize, w: usize) -> Result<usize, WeightsError> {
        if w != p {
            return Ok(0);
        }
        Ok(self.cell(n, p)?.basis.len())
    }

    fn label(&self, g: &GenId) -> String {
        let top = g.n >= 2 && g.p == g.n - 2;
        match self.kind {
            ArnoldKind::Adelta
                if top
                    && self
                        .cell(g.n, g.p)
                        .is_ok_and(|c| c.basis.len() == enumerate_p(g.n).len()) =>
            {
                format!("I(a{})", print_bracketing(&enumerate_p(g.n)[g.idx]))
            }
            ArnoldKind::Coger => match self.element(g) {
                Ok(e) if e.terms().len() == 1 => {
                    let m = e.terms().keys().next().unwrap();
                    let body: String = m.iter().map(|(a, b)| format!("w{a}{b}")).collect();
                    format!("I({})", if body.is_empty() { "1".to_string() } else { body })
                }
                _ => format!("I{g}"),
            },
            _ => format!("I{g}"),
        }
    }

    fn cocompose(&self, g: &GenId, i: usize, k: usize) -> Result<Vec<(GenId, GenId, Scalar)>, WeightsError> {
        let key = (*g, i, k);
        if let Some(v) = self.cocomp.lock().unwrap().get(&key) {
            return Ok(v.as_ref().clone());
        }
        let e = self.element(g)?;
        let t = e.cocompose(i, k)?;
        let (no, ni) = (t.outer_arity, t.inner_arity);
        // group by the degrees of the two factors, then express in two stages
        let mut groups: BTreeMap<(usize, usize), BTreeMap<Monomial, ArnoldElement>> = BTreeMap::new();
        for ((a, b), c) in t.terms() {
            let col = groups
                .entry((a.len(), b.len()))
                .or_default()
                .entry(b.clone())
                .or_insert_with(|| ArnoldElement::zero(no));
            col.add_scaled(
                &ArnoldElement::from_basis_terms(no, BTreeMap::from([(a.clone(), Scalar::one())])),
                c,
            );
        }
        let mut out = Vec::new();
        for ((po, pi), cols) in groups {
            let mut rows: BTreeMap<GenId, ArnoldElement> = BTreeMap::new();
            for (b, col) in cols {
                let binner = ArnoldElement::from_basis_terms(ni, BTreeMap::from([(b, Scalar::one())]));
                for (r, x) in self.express(&col, po)? {
                    rows.entry(r)
                        .or_insert_with(|| ArnoldElement::zero(ni))
                        .add_scaled(&binner, &x);
                }
            }
            for (r, row) in rows {
                for (s, y) in self.express(&row, pi)? {
                    out.push((r, s, y));
                }
            }
        }
        self.cocomp.lock().unwrap().insert(key, Arc::new(out.clone()));
        Ok(out)
    }

    fn pullback(&self, g: &GenId, iota: &[usize], m: usize) -> Result<Form, WeightsError> {
        let e = self.element(g)?.pullback(iota, m)?;
        self.express(&e, g.p)
    }

    fn product(&self, a: &GenId, b: &GenId) -> Result<Form, WeightsError> {
        let e = self.element(a)?.multiply(&self.element(b)?)?;
        self.express(&e, a.p + b.p)
    }

    fn differential(&self, _g: &GenId) -> Result<Form, WeightsError> {
        Ok(Form::new())
    }

    fn to_arnold(&self, g: &GenId) -> Option<ArnoldElement> {
        self.element(g).ok()
    }

    fn from_arnold(&self, e: &ArnoldElement, p: usize) -> Result<Form, WeightsError> {
        self.express(e, p)
    }
}

/// Expands a form into its `coGer` model.
pub fn form_to_arnold(h: &dyn Cooperad, f: &Form, n: usize) -> Option<ArnoldElement> {
    let mut e = ArnoldElement::zero(n);
    for (g, c) in f {
        e.add_scaled(&h.to_arnold(g)?, c);
    }
    Some(e)
}

/// Sum of coefficients of a form, grouped by basis element (utility for tests).
pub fn form_from_pairs(pairs: &[(GenId, Scalar)]) -> Form {
    let mut f = Form::new();
    for (g, c) in pairs {
        add_coef(&mut f, *g, c.clone());
    }
    f
}
