//! Degree-zero cohomology of the weights algebra, presented on generators.
//!
//! Every degree-zero monomial is rewritten to a combination of single
//! generators by folding default shuffles from the left. Relations are the
//! rewritten differentials of degree `-1` monomials together with the
//! differences between the default rewriting and every one-step rewriting by
//! an admitted shuffle spec.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use num_traits::One;
use serde_json::{json, Value};

use super::complex::{
    degree_minus_one_monomials, degree_zero_monomials, generators_of, linear_differential, WeightDifferential,
};
use super::handle::Cooperad;
use super::shuffle::{all_specs, default_spec, ShuffleCache, ShuffleMode};
use super::{add_form, Form, GenId, WeightElement, WeightsError};
use crate::linalg::{kernel_of_map, unit, Indexer, Reducer, SparseVec};
use crate::scalar::{self, Scalar};

/// Which quotient a presentation describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresentationKind {
    H0,
    Indecomposables,
    IndecomposablesLinear,
    Defect,
}

impl PresentationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PresentationKind::H0 => "h0",
            PresentationKind::Indecomposables => "q_h0",
            PresentationKind::IndecomposablesLinear => "q_h0_linear",
            PresentationKind::Defect => "defect_h0",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [
            Self::H0,
            Self::Indecomposables,
            Self::IndecomposablesLinear,
            Self::Defect,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
    }
}

/// Generators of weight `w` and degree zero modulo a relation space.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub handle: String,
    pub weight: usize,
    pub kind: PresentationKind,
    pub generators: Vec<GenId>,
    pub labels: Vec<String>,
    /// Echelon basis of the relation space in generator coordinates.
    pub relations: Vec<SparseVec>,
    pub dim: usize,
    /// Generators whose classes form a basis of the quotient.
    pub representatives: Vec<usize>,
    reducer: Reducer,
}

impl Presentation {
    fn build(h: &dyn Cooperad, w: usize, kind: PresentationKind, generators: Vec<GenId>, rows: Vec<Form>) -> Self {
        let index = Indexer::from_keys(generators.iter().copied());
        let mut reducer = Reducer::new();
        for r in &rows {
            reducer.insert(&vectorize(&index, r));
        }
        let mut probe = reducer.clone();
        let representatives: Vec<usize> = (0..generators.len()).filter(|&i| probe.insert(&unit(i))).collect();
        let relations: Vec<SparseVec> = reducer.rref().into_values().collect();
        Presentation {
            handle: h.name().to_string(),
            weight: w,
            kind,
            labels: generators.iter().map(|g| h.label(g)).collect(),
            dim: generators.len() - reducer.rank(),
            generators,
            relations,
            representatives,
            reducer,
        }
    }

    pub fn index(&self) -> Indexer<GenId> {
        Indexer::from_keys(self.generators.iter().copied())
    }

    /// Coordinates of a form on the generators; `None` if it uses other symbols.
    pub fn coordinates(&self, f: &Form) -> Option<SparseVec> {
        let index = self.index();
        let mut v = SparseVec::new();
        for (g, c) in f {
            v.insert(index.get(g)?, c.clone());
        }
        Some(v)
    }

    /// Whether the form vanishes in the quotient.
    pub fn is_relation(&self, f: &Form) -> Option<bool> {
        Some(self.reducer.contains(&self.coordinates(f)?))
    }

    /// Rank of the classes of `forms` in the quotient.
    pub fn class_rank(&self, forms: &[Form]) -> Option<usize> {
        let mut r = self.reducer.clone();
        let mut k = 0;
        for f in forms {
            if r.insert(&self.coordinates(f)?) {
                k += 1;
            }
        }
        Some(k)
    }

    /// Dimension of the span of the relations together with `f`, minus that of the relations.
    pub fn residual_dim(&self, f: &Form) -> Option<usize> {
        self.class_rank(std::slice::from_ref(f))
    }

    pub fn to_json(&self) -> Value {
        let n = self.generators.len();
        let rows: Vec<Value> = self
            .relations
            .iter()
            .map(|r| {
                Value::Array(
                    (0..n)
                        .map(|j| Value::String(scalar::format(r.get(&j).unwrap_or(&Scalar::from_integer(0.into())))))
                        .collect(),
                )
            })
            .collect();
        json!({
            "handle": self.handle,
            "weight": self.weight,
            "kind": self.kind.as_str(),
            "generators": self.labels,
            "generator_ids": self.generators.iter().map(|g| json!([g.n, g.p, g.w, g.idx])).collect::<Vec<_>>(),
            "relations": rows,
            "dim": self.dim,
            "representatives": self.representatives.iter().map(|&i| self.labels[i].clone()).collect::<Vec<_>>(),
        })
    }

    /// Reads an exported presentation and recomputes its dimension.
    pub fn from_json(v: &Value) -> Result<Self, WeightsError> {
        let bad = |m: &str| WeightsError::Format(m.to_string());
        let handle = v["handle"].as_str().ok_or_else(|| bad("handle"))?.to_string();
        let weight = v["weight"].as_u64().ok_or_else(|| bad("weight"))? as usize;
        let kind = v["kind"]
            .as_str()
            .and_then(PresentationKind::parse)
            .ok_or_else(|| bad("kind"))?;
        let labels: Vec<String> = v["generators"]
            .as_array()
            .ok_or_else(|| bad("generators"))?
            .iter()
            .map(|x| x.as_str().map(String::from).ok_or_else(|| bad("generator label")))
            .collect::<Result<_, _>>()?;
        let generators: Vec<GenId> = v["generator_ids"]
            .as_array()
            .ok_or_else(|| bad("generator_ids"))?
            .iter()
            .map(|x| {
                let a: Vec<usize> = x
                    .as_array()
                    .ok_or_else(|| bad("generator id"))?
                    .iter()
                    .map(|y| y.as_u64().map(|y| y as usize).ok_or_else(|| bad("generator id entry")))
                    .collect::<Result<_, _>>()?;
                match a[..] {
                    [n, p, w, idx] => Ok(GenId::new(n, p, w, idx)),
                    _ => Err(bad("generator id arity")),
                }
            })
            .collect::<Result<_, _>>()?;
        if labels.len() != generators.len() {
            return Err(bad("label count"));
        }
        let mut reducer = Reducer::new();
        for row in v["relations"].as_array().ok_or_else(|| bad("relations"))? {
            let entries = row.as_array().ok_or_else(|| bad("relation row"))?;
            if entries.len() != generators.len() {
                return Err(bad("relation row length"));
            }
            let mut r = SparseVec::new();
            for (j, x) in entries.iter().enumerate() {
                let c = x
                    .as_str()
                    .and_then(scalar::parse)
                    .ok_or_else(|| bad("rational entry"))?;
                if !num_traits::Zero::is_zero(&c) {
                    r.insert(j, c);
                }
            }
            reducer.insert(&r);
        }
        let mut probe = reducer.clone();
        let representatives = (0..generators.len()).filter(|&i| probe.insert(&unit(i))).collect();
        Ok(Presentation {
            handle,
            weight,
            kind,
            dim: generators.len() - reducer.rank(),
            relations: reducer.rref().into_values().collect(),
            generators,
            labels,
            representatives,
            reducer,
        })
    }
}

fn vectorize(index: &Indexer<GenId>, f: &Form) -> SparseVec {
    f.iter()
        .map(|(g, c)| (index.get(g).expect("generator of this weight"), c.clone()))
        .collect()
}

/// Rewrites degree-zero monomials to single generators.
struct Rewriter<'a> {
    shuffles: ShuffleCache<'a>,
    cache: HashMap<Vec<GenId>, Form>,
}

impl<'a> Rewriter<'a> {
    fn new(h: &'a dyn Cooperad, mode: ShuffleMode) -> Self {
        Rewriter {
            shuffles: ShuffleCache::new(h, mode),
            cache: HashMap::new(),
        }
    }

    fn monomial(&mut self, m: &[GenId]) -> Result<Form, WeightsError> {
        if let Some(f) = self.cache.get(m) {
            return Ok(f.clone());
        }
        let mut acc = Form::from([(m[0], Scalar::one())]);
        for g in &m[1..] {
            let n = acc.keys().next().map(|x| x.n);
            let Some(n) = n else { break };
            acc = self
                .shuffles
                .product(&acc, &Form::from([(*g, Scalar::one())]), &default_spec(n, g.n))?;
        }
        self.cache.insert(m.to_vec(), acc.clone());
        Ok(acc)
    }

    fn element(&mut self, e: &WeightElement) -> Result<Form, WeightsError> {
        let mut out = Form::new();
        for (m, c) in &e.terms {
            if m.is_empty() {
                return Err(WeightsError::NotClosed("constant term in positive weight".into()));
            }
            let f = self.monomial(m)?;
            add_form(&mut out, &f, c);
        }
        Ok(out)
    }

    /// Rewrites `rest * f` for a form `f` of one arity.
    fn with_rest(&mut self, rest: &[GenId], f: &Form) -> Result<Form, WeightsError> {
        let mut out = Form::new();
        for (x, c) in f {
            let mut m = rest.to_vec();
            m.push(*x);
            m.sort();
            let r = self.monomial(&m)?;
            add_form(&mut out, &r, c);
        }
        Ok(out)
    }
}

fn sub(a: &Form, b: &Form) -> Form {
    let mut out = a.clone();
    add_form(&mut out, b, &-Scalar::one());
    out
}

/// Relation rows shared by `h0` and the first route to `q_h0`.
fn product_relations(
    h: &dyn Cooperad,
    w: usize,
    mode: ShuffleMode,
    rw: &mut Rewriter,
    include_products: bool,
) -> Result<Vec<Form>, WeightsError> {
    let d = WeightDifferential::new(h);
    let mut rows = Vec::new();
    for m in degree_minus_one_monomials(h, w)? {
        let mut e = WeightElement::zero();
        e.add_product(&m, Scalar::one());
        rows.push(rw.element(&d.apply(&e)?)?);
    }
    for m in degree_zero_monomials(h, w)? {
        if m.len() < 2 {
            continue;
        }
        let base = rw.monomial(&m)?;
        if include_products {
            rows.push(base.clone());
        }
        let mut seen = std::collections::BTreeSet::new();
        for j in 0..m.len() {
            for l in j + 1..m.len() {
                if !seen.insert((m[j], m[l])) {
                    continue;
                }
                let rest: Vec<GenId> = m
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| *t != j && *t != l)
                    .map(|(_, g)| *g)
                    .collect();
                for (a, b) in [(m[j], m[l]), (m[l], m[j])] {
                    for spec in all_specs(a.n, b.n, mode) {
                        let sh = rw.shuffles.basis_product(a, b, &spec)?;
                        let r = rw.with_rest(&rest, &sh)?;
                        rows.push(sub(&base, &r));
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// `H^0` of the weights algebra in weight `w`.
pub fn h0(h: &dyn Cooperad, w: usize, mode: ShuffleMode) -> Result<Presentation, WeightsError> {
    h.caps().check_weight(w)?;
    let gens = generators_of(h, 0, w)?;
    let mut rw = Rewriter::new(h, mode);
    let rows = product_relations(h, w, mode, &mut rw, false)?;
    Ok(Presentation::build(h, w, PresentationKind::H0, gens, rows))
}

/// Indecomposables of `H^0`: additionally all products of positive-weight classes vanish.
pub fn q_h0(h: &dyn Cooperad, w: usize, mode: ShuffleMode) -> Result<Presentation, WeightsError> {
    h.caps().check_weight(w)?;
    let gens = generators_of(h, 0, w)?;
    let mut rw = Rewriter::new(h, mode);
    let rows = product_relations(h, w, mode, &mut rw, true)?;
    Ok(Presentation::build(h, w, PresentationKind::Indecomposables, gens, rows))
}

/// Linear differentials of degree `-1` generators of weight `w`.
fn linear_boundaries(h: &dyn Cooperad, w: usize) -> Result<Vec<Form>, WeightsError> {
    let d = WeightDifferential::new(h);
    generators_of(h, -1, w)?
        .iter()
        .map(|g| Ok(d.on_basis(g)?.linear_part()))
        .collect()
}

/// `H^0` of the indecomposables complex: linear boundaries plus all shuffle images.
pub fn q_h0_linear(h: &dyn Cooperad, w: usize, mode: ShuffleMode) -> Result<Presentation, WeightsError> {
    h.caps().check_weight(w)?;
    let gens = generators_of(h, 0, w)?;
    let mut rows = linear_boundaries(h, w)?;
    let shuffles = ShuffleCache::new(h, mode);
    let by_weight: BTreeMap<usize, Vec<GenId>> = (1..w)
        .map(|wt| Ok((wt, generators_of(h, 0, wt)?)))
        .collect::<Result<_, WeightsError>>()?;
    for (&w1, left) in &by_weight {
        for a in left {
            for b in &by_weight[&(w - w1)] {
                for spec in all_specs(a.n, b.n, mode) {
                    rows.push(shuffles.basis_product(*a, *b, &spec)?);
                }
            }
        }
    }
    Ok(Presentation::build(
        h,
        w,
        PresentationKind::IndecomposablesLinear,
        gens,
        rows,
    ))
}

/// Linear complex on generators of weight `w` in degree zero.
#[derive(Clone, Debug)]
pub struct Defect {
    /// All degree-zero generators modulo linear boundaries (the truncated complex).
    pub truncated: Presentation,
    /// Cocycles of the untruncated linear complex, as generator forms.
    pub cocycles: Vec<Form>,
    /// Cocycles completing the boundaries to a basis of the cocycle space.
    pub basis: Vec<Form>,
    /// `H^0` of the untruncated linear complex.
    pub dim: usize,
}

/// `H^0` of the linear complex, with and without the degree truncation.
///
/// The untruncated cocycle condition asks the linear differential to vanish
/// on the degree `+1` part as well.
pub fn defect_h0(h: &dyn Cooperad, w: usize) -> Result<Defect, WeightsError> {
    h.caps().check_weight(w)?;
    let gens = generators_of(h, 0, w)?;
    let rows = linear_boundaries(h, w)?;
    let truncated = Presentation::build(h, w, PresentationKind::Defect, gens.clone(), rows.clone());
    let mut target = Indexer::new();
    let images: Vec<SparseVec> = gens
        .iter()
        .map(|g| {
            Ok(linear_differential(h, g)?
                .into_iter()
                .map(|(x, c)| (target.intern(&x), c))
                .collect())
        })
        .collect::<Result<_, WeightsError>>()?;
    let to_form = |v: &SparseVec| -> Form { v.iter().map(|(&i, c)| (gens[i], c.clone())).collect() };
    let cocycles: Vec<Form> = kernel_of_map(&images).iter().map(to_form).collect();
    let index = truncated.index();
    let mut span = Reducer::new();
    for r in &rows {
        span.insert(&vectorize(&index, r));
    }
    let basis: Vec<Form> = cocycles
        .iter()
        .filter(|z| span.insert(&vectorize(&index, z)))
        .cloned()
        .collect();
    Ok(Defect {
        truncated,
        dim: basis.len(),
        cocycles,
        basis,
    })
}

/// Whether the truncated defect classes span the indecomposables.
pub fn defect_surjects(defect: &Defect, q: &Presentation) -> bool {
    let forms: Vec<Form> = defect
        .truncated
        .representatives
        .iter()
        .map(|&i| Form::from([(defect.truncated.generators[i], Scalar::one())]))
        .collect();
    q.class_rank(&forms) == Some(q.dim)
}

/// Writes a presentation, with optional named vectors, as JSON.
pub fn export_presentation(p: &Presentation, symbols: &[(String, Form)], path: &Path) -> Result<Value, WeightsError> {
    let mut v = p.to_json();
    let syms: Vec<Value> = symbols
        .iter()
        .filter_map(|(label, f)| {
            let c = p.coordinates(f)?;
            let dense: Vec<Value> = (0..p.generators.len())
                .map(|j| Value::String(scalar::format(c.get(&j).unwrap_or(&Scalar::from_integer(0.into())))))
                .collect();
            Some(json!({"label": label, "vector": dense}))
        })
        .collect();
    v["symbols"] = Value::Array(syms);
    let text = serde_json::to_string_pretty(&v).map_err(|e| WeightsError::Format(e.to_string()))?;
    fs::write(path, text).map_err(|e| WeightsError::Format(format!("{}: {e}", path.display())))?;
    Ok(v)
}

/// Loads a presentation written by [`export_presentation`].
pub fn load_presentation(path: &Path) -> Result<Presentation, WeightsError> {
    let text = fs::read_to_string(path).map_err(|e| WeightsError::Format(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| WeightsError::Format(e.to_string()))?;
    Presentation::from_json(&v)
}
