//! Certificates: decompositions of top forms, grt images, induced maps and probes.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::complex::{generators_of, linear_differential, WeightDifferential};
use super::handle::{form_to_arnold, Cooperad};
use super::presentation::{defect_h0, h0, q_h0, Presentation};
use super::shuffle::{all_specs, shuffle_set, ShuffleMode, ShuffleSpec};
use super::{add_form, Form, GenId, WeightElement, WeightGenerator, WeightsError};
use crate::arnold::{enumerate_g, ArnoldElement, Pair};
use crate::braids::{embed_xy, letter_index, letters, pentagon_solutions, sort_odd, transport, BraidContext, CeChain};
use crate::linalg::{solve_combination, Indexer, SparseVec};
use crate::moduli::{mzv_form, MzvComposition};
use crate::scalar::{self, Scalar};
use crate::words::{alpha_of, enumerate_l, print_bracketing, Bracketing};

/// Why a top form vanishes among the indecomposables, or that it is prime.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// `alpha = sign * alpha_P` for a prime bracketing `P`; no decomposition is claimed.
    Prime { bracketing: Option<String>, sign: i64 },
    /// `alpha = sign * (left sh_spec right)`.
    Product {
        left: ArnoldElement,
        right: ArnoldElement,
        spec: ShuffleSpec,
        sign: i64,
    },
    /// `I(alpha) = d I(primitive)` in the weights algebra.
    Boundary { primitive: ArnoldElement },
    /// `alpha = sum c_j * alpha_j`, each part certified separately.
    Combination { parts: Vec<(Scalar, Certificate)> },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Prime { .. } => "prime",
            Certificate::Product { .. } => "product",
            Certificate::Boundary { .. } => "boundary",
            Certificate::Combination { .. } => "combination",
        }
    }

    /// Whether the certified form is zero among the indecomposables.
    pub fn decomposes(&self) -> bool {
        match self {
            Certificate::Prime { .. } => false,
            Certificate::Product { .. } | Certificate::Boundary { .. } => true,
            Certificate::Combination { parts } => parts.iter().all(|(_, c)| c.decomposes()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Certificate::Prime { bracketing, sign } => json!({"kind": "prime", "bracketing": bracketing, "sign": sign}),
            Certificate::Product {
                left,
                right,
                spec,
                sign,
            } => json!({
                "kind": "product",
                "left": left.to_json(),
                "right": right.to_json(),
                "spec": {"N": spec.big_n, "S": spec.s, "S_prime": spec.s_prime},
                "sign": sign,
            }),
            Certificate::Boundary { primitive } => json!({"kind": "boundary", "primitive": primitive.to_json()}),
            Certificate::Combination { parts } => json!({
                "kind": "combination",
                "parts": parts.iter().map(|(c, p)| json!({"coefficient": scalar::format(c), "certificate": p.to_json()})).collect::<Vec<_>>(),
            }),
        }
    }
}

/// `sum_sigma sign * pi*(a) ^ pi*(b)` computed directly in the Arnol'd algebra.
pub fn arnold_shuffle(a: &ArnoldElement, b: &ArnoldElement, spec: &ShuffleSpec) -> Result<ArnoldElement, WeightsError> {
    if a.arity() != spec.s.len() || b.arity() != spec.s_prime.len() {
        return Err(WeightsError::SpecMismatch(format!(
            "arities {}, {} vs {spec:?}",
            a.arity(),
            b.arity()
        )));
    }
    let mut out = ArnoldElement::zero(spec.big_n);
    for (sig, s) in shuffle_set(spec, ShuffleMode::General)? {
        let ia: Vec<usize> = spec.s.iter().map(|&x| sig[x - 1]).collect();
        let ib: Vec<usize> = spec.s_prime.iter().map(|&x| sig[x - 1]).collect();
        let term = a.pullback(&ia, spec.big_n)?.multiply(&b.pullback(&ib, spec.big_n)?)?;
        out.add_scaled(&term, &scalar::int(s));
    }
    Ok(out)
}

/// `+1`, `-1` if `x = +-y`, else `None`.
fn sign_between(x: &ArnoldElement, y: &ArnoldElement) -> Option<i64> {
    if x.is_zero() || y.is_zero() {
        return None;
    }
    if x == y {
        Some(1)
    } else if x.scale(&-Scalar::one()) == *y {
        Some(-1)
    } else {
        None
    }
}

/// Relabels the pairs of `e` by `f` into arity `m`.
fn relabel(e: &ArnoldElement, m: usize, f: impl Fn(usize) -> usize) -> Result<ArnoldElement, WeightsError> {
    let free: Vec<(Scalar, Vec<Pair>)> = e
        .terms()
        .iter()
        .map(|(mono, c)| (c.clone(), mono.iter().map(|&(a, b)| (f(a), f(b))).collect()))
        .collect();
    Ok(ArnoldElement::normal_form(m, &free)?)
}

/// Proper sub-brackets of `l` whose leaves form an interval.
fn interval_brackets(l: &Bracketing) -> Vec<Bracketing> {
    l.brackets()
        .into_iter()
        .skip(1)
        .filter(|b| {
            let mut v = b.leaves();
            v.sort_unstable();
            v.windows(2).all(|w| w[1] == w[0] + 1)
        })
        .cloned()
        .collect()
}

/// `L = L1 o_i L2` at the interval sub-bracket `b`, as `(L1, L2, i, k)`.
fn split_at(l: &Bracketing, b: &Bracketing) -> Option<(Bracketing, Bracketing, usize, usize)> {
    let b = b.clone();
    let leaves = b.leaves();
    let (i, k) = (*leaves.iter().min()?, leaves.len());
    fn map(t: &Bracketing, f: &dyn Fn(usize) -> usize) -> Bracketing {
        match t {
            Bracketing::Leaf(x) => Bracketing::leaf(f(*x)),
            Bracketing::Node(a, c) => Bracketing::node(map(a, f), map(c, f)),
        }
    }
    fn collapse(t: &Bracketing, target: &Bracketing, i: usize, k: usize) -> Bracketing {
        if t == target {
            return Bracketing::leaf(i);
        }
        match t {
            Bracketing::Leaf(x) if *x > i => Bracketing::leaf(x - (k - 1)),
            Bracketing::Leaf(x) => Bracketing::leaf(*x),
            Bracketing::Node(a, c) => Bracketing::node(collapse(a, target, i, k), collapse(c, target, i, k)),
        }
    }
    let l2 = map(&b, &|x| x + 1 - i);
    let l1 = collapse(l, &b, i, k);
    Some((l1, l2, i, k))
}

/// Decomposition certificate for a given bracketing's form `alpha_L`.
pub fn decompose_bracketing(coger: &dyn Cooperad, l: &Bracketing) -> Result<Certificate, WeightsError> {
    decompose_certificate(coger, &alpha_of(l)?, l.leaves().len())
}

/// Certifies that a top form decomposes, or reports it prime.
pub fn decompose_certificate(
    coger: &dyn Cooperad,
    alpha: &ArnoldElement,
    n: usize,
) -> Result<Certificate, WeightsError> {
    if n < 3 || alpha.arity() != n || alpha.degree().is_some_and(|d| d != n - 2) {
        return Err(WeightsError::NotTopDegree {
            n,
            expected: n.saturating_sub(2),
        });
    }
    if alpha.is_zero() {
        return Ok(Certificate::Combination { parts: Vec::new() });
    }
    if n == 3 {
        return boundary_certificate(coger, alpha);
    }
    if let Some(c) = omega_one_n_certificate(alpha, n)? {
        return Ok(c);
    }
    for l in enumerate_l(n) {
        let al = alpha_of(&l)?;
        if let Some(sign) = sign_between(&al, alpha) {
            if l.is_prime() {
                return Ok(Certificate::Prime {
                    bracketing: Some(print_bracketing(&l)),
                    sign,
                });
            }
            if let Some(c) = interval_certificate(&l, alpha)? {
                return Ok(c);
            }
        }
    }
    Ok(span_certificate(alpha, n)?.unwrap_or(Certificate::Prime {
        bracketing: None,
        sign: 1,
    }))
}

/// Solves `I(alpha) = d I(beta)` for `beta` of degree `-1` in arity `n + 1`.
fn boundary_certificate(coger: &dyn Cooperad, alpha: &ArnoldElement) -> Result<Certificate, WeightsError> {
    let n = alpha.arity();
    let p = n - 2;
    let target = coger.from_arnold(alpha, p)?;
    let candidates: Vec<GenId> = generators_of(coger, -1, p)?
        .into_iter()
        .filter(|g| g.n == n + 1)
        .collect();
    let mut ix = Indexer::new();
    let vec =
        |ix: &mut Indexer<GenId>, f: &Form| -> SparseVec { f.iter().map(|(g, c)| (ix.intern(g), c.clone())).collect() };
    let images: Vec<SparseVec> = candidates
        .iter()
        .map(|g| Ok(vec(&mut ix, &linear_differential(coger, g)?)))
        .collect::<Result<_, WeightsError>>()?;
    let t = vec(&mut ix, &target);
    let x = solve_combination(&images, &t)
        .ok_or_else(|| WeightsError::NoCertificate(format!("{} is not a boundary", alpha.to_text())))?;
    let mut primitive = ArnoldElement::zero(n + 1);
    let mut beta = Form::new();
    for (j, c) in &x {
        primitive.add_scaled(&coger.to_arnold(&candidates[*j]).expect("coGer model"), c);
        beta.insert(candidates[*j], c.clone());
    }
    // verify with the full differential, quadratic terms included
    let d = WeightDifferential::new(coger);
    let mut lhs = WeightElement::zero();
    for (g, c) in &beta {
        lhs.add_scaled(&d.on_basis(g)?, c);
    }
    let mut rhs = WeightElement::zero();
    for (g, c) in &target {
        rhs.add_generator(*g, c.clone());
    }
    if lhs != rhs {
        return Err(WeightsError::NoCertificate("boundary check failed".into()));
    }
    Ok(Certificate::Boundary { primitive })
}

/// `alpha = omega_1n ^ beta` with `beta` on `1..n-1` or on `2..n`.
fn omega_one_n_certificate(alpha: &ArnoldElement, n: usize) -> Result<Option<Certificate>, WeightsError> {
    let top = (1, n);
    if !alpha.terms().keys().all(|m| m.contains(&top)) {
        return Ok(None);
    }
    let mut beta = ArnoldElement::zero(n);
    for (m, c) in alpha.terms() {
        let pos = m.iter().position(|&x| x == top).unwrap();
        let rest: Vec<Pair> = m.iter().copied().filter(|&x| x != top).collect();
        beta.add_scaled(
            &ArnoldElement::product_of(n, &rest, Scalar::one()),
            &(c * scalar::sign(pos as i64)),
        );
    }
    let used = |lo: usize, hi: usize| beta.terms().keys().flatten().all(|&(a, b)| a >= lo && b <= hi);
    let omega13 = ArnoldElement::gen(3, 1, 3);
    let attempt = |b: ArnoldElement, spec: ShuffleSpec| -> Result<Option<Certificate>, WeightsError> {
        let sh = arnold_shuffle(&b, &omega13, &spec)?;
        Ok(sign_between(&sh, alpha).map(|sign| Certificate::Product {
            left: b,
            right: omega13.clone(),
            spec,
            sign,
        }))
    };
    if used(1, n - 1) {
        let b = relabel(&beta, n - 1, |x| x)?;
        let spec = ShuffleSpec::new(n, (1..n).collect(), vec![1, n - 1, n]);
        if let Some(c) = attempt(b, spec)? {
            return Ok(Some(c));
        }
    }
    if used(2, n) {
        let b = relabel(&beta, n - 1, |x| x - 1)?;
        let spec = ShuffleSpec::new(n, (2..=n).collect(), vec![1, 2, n]);
        if let Some(c) = attempt(b, spec)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// `alpha_L = left sh alpha_L2` for an interval sub-bracket `L2` of `L`.
///
/// The left factor is found among the top forms of arity `n - k + 2`; the
/// candidate `pi* alpha_L1 ^ w_{i,i+1}` is tried first.
fn interval_certificate(l: &Bracketing, alpha: &ArnoldElement) -> Result<Option<Certificate>, WeightsError> {
    let n = alpha.arity();
    for b in interval_brackets(l) {
        let Some((l1, l2, i, k)) = split_at(l, &b) else {
            continue;
        };
        let m = n - k + 2;
        if k < 3 || m < 3 {
            // a factor in arity two is the unit, so the product is trivial
            continue;
        }
        let a2 = alpha_of(&l2)?;
        let mut s: Vec<usize> = (1..=i).collect();
        s.extend(i + k - 1..=n);
        let spec = ShuffleSpec::new(n, s, (i..i + k).collect());
        let a1 = alpha_of(&l1)?;
        for skip in [i + 1, i] {
            let iota: Vec<usize> = (1..m).map(|x| if x < skip { x } else { x + 1 }).collect();
            let left = a1.pullback(&iota, m)?.multiply(&ArnoldElement::gen(m, i, i + 1))?;
            if let Some(sign) = sign_between(&arnold_shuffle(&left, &a2, &spec)?, alpha) {
                return Ok(Some(Certificate::Product {
                    left,
                    right: a2,
                    spec,
                    sign,
                }));
            }
        }
        let tops: Vec<ArnoldElement> = enumerate_g(m, m - 2)
            .into_iter()
            .map(|mono| ArnoldElement::product_of(m, &mono, Scalar::one()))
            .collect();
        let index = Indexer::from_keys(enumerate_g(n, n - 2));
        let coords = |e: &ArnoldElement| -> SparseVec {
            e.terms()
                .iter()
                .map(|(mono, c)| (index.get(mono).expect("basis monomial"), c.clone()))
                .collect()
        };
        let images = tops
            .iter()
            .map(|x| Ok(coords(&arnold_shuffle(x, &a2, &spec)?)))
            .collect::<Result<Vec<_>, WeightsError>>()?;
        if let Some(x) = solve_combination(&images, &coords(alpha)) {
            let mut left = ArnoldElement::zero(m);
            for (j, c) in x {
                left.add_scaled(&tops[j], &c);
            }
            return Ok(Some(Certificate::Product {
                left,
                right: a2,
                spec,
                sign: 1,
            }));
        }
    }
    Ok(None)
}

/// Tries to write `alpha` as a combination of covering shuffles of top forms.
fn span_certificate(alpha: &ArnoldElement, n: usize) -> Result<Option<Certificate>, WeightsError> {
    let mut pieces: Vec<(ArnoldElement, ArnoldElement, ShuffleSpec, ArnoldElement)> = Vec::new();
    for n1 in 3..n {
        let n2 = n + 2 - n1;
        if n2 < 3 {
            continue;
        }
        let tops = |k: usize| -> Vec<ArnoldElement> {
            enumerate_g(k, k - 2)
                .into_iter()
                .map(|m| ArnoldElement::product_of(k, &m, Scalar::one()))
                .collect()
        };
        for a in tops(n1) {
            for b in tops(n2) {
                for spec in all_specs(n1, n2, ShuffleMode::Covering) {
                    let sh = arnold_shuffle(&a, &b, &spec)?;
                    if !sh.is_zero() {
                        pieces.push((a.clone(), b.clone(), spec, sh));
                    }
                }
            }
        }
    }
    let index = Indexer::from_keys(enumerate_g(n, n - 2));
    let coords = |e: &ArnoldElement| -> SparseVec {
        e.terms()
            .iter()
            .map(|(m, c)| (index.get(m).expect("basis monomial"), c.clone()))
            .collect()
    };
    let images: Vec<SparseVec> = pieces.iter().map(|p| coords(&p.3)).collect();
    let Some(x) = solve_combination(&images, &coords(alpha)) else {
        return Ok(None);
    };
    let parts = x
        .into_iter()
        .map(|(j, c)| {
            let (a, b, spec, _) = pieces[j].clone();
            (
                c,
                Certificate::Product {
                    left: a,
                    right: b,
                    spec,
                    sign: 1,
                },
            )
        })
        .collect();
    Ok(Some(Certificate::Combination { parts }))
}

/// Checks a certificate against its form.
pub fn verify_certificate(coger: &dyn Cooperad, alpha: &ArnoldElement, c: &Certificate) -> Result<bool, WeightsError> {
    Ok(match c {
        Certificate::Prime { .. } => true,
        Certificate::Product {
            left,
            right,
            spec,
            sign,
        } => arnold_shuffle(left, right, spec)?.scale(&scalar::int(*sign)) == *alpha,
        Certificate::Boundary { primitive } => {
            let beta = coger.from_arnold(primitive, primitive.degree().unwrap_or(0))?;
            let d = WeightDifferential::new(coger);
            let mut lhs = WeightElement::zero();
            for (g, x) in &beta {
                lhs.add_scaled(&d.on_basis(g)?, x);
            }
            let mut rhs = WeightElement::zero();
            for (g, x) in coger.from_arnold(alpha, alpha.arity() - 2)? {
                rhs.add_generator(g, x);
            }
            lhs == rhs
        }
        Certificate::Combination { parts } => {
            let mut total = ArnoldElement::zero(alpha.arity());
            for (x, p) in parts {
                let piece = match p {
                    Certificate::Product {
                        left,
                        right,
                        spec,
                        sign,
                    } => arnold_shuffle(left, right, spec)?.scale(&scalar::int(*sign)),
                    _ => return Ok(false),
                };
                total.add_scaled(&piece, x);
            }
            total == *alpha
        }
    })
}

/// The symbol `I(k_1, ..., k_r)` over a handle with a `coGer` model.
pub fn mzv_symbol(h: &dyn Cooperad, ks: &[usize]) -> Result<WeightGenerator, WeightsError> {
    let c = MzvComposition::new(ks.to_vec())?;
    h.caps().check_weight(c.weight())?;
    let f = mzv_form(&c)?;
    let n = f.form.arity();
    let expansion = h.from_arnold(&f.form, n - 2)?;
    Ok(WeightGenerator {
        n,
        p: n - 2,
        w: c.weight(),
        expansion,
        label: c.label(),
    })
}

/// Length-zero CE chain as a product of `omega`'s.
pub fn chain_to_arnold(c: &CeChain) -> Result<ArnoldElement, WeightsError> {
    let ls = letters(c.n);
    let mut free = Vec::new();
    for (m, x) in &c.terms {
        if m.iter().any(|g| g.0 != 0) {
            return Err(WeightsError::Transport("defect has positive length".into()));
        }
        free.push((x.clone(), m.iter().map(|g| ls[g.1]).collect::<Vec<Pair>>()));
    }
    Ok(ArnoldElement::normal_form(c.n, &free)?)
}

/// Pairing of a `coGer` form with a length-zero CE chain, through the
/// identification of `omega_ij` with the dual of `t_ij`.
pub fn pair_with_chain(coger: &dyn Cooperad, f: &Form, chain: &CeChain) -> Result<Scalar, WeightsError> {
    let e = form_to_arnold(coger, f, chain.n).ok_or_else(|| WeightsError::NotClosed("form without a model".into()))?;
    let mut s = Scalar::zero();
    for (m, x) in e.terms() {
        let seq: Vec<_> = m
            .iter()
            .map(|&(a, b)| (0usize, letter_index(chain.n, a, b) as usize))
            .collect();
        if let Some((sorted, sign)) = sort_odd(&seq) {
            if let Some(y) = chain.terms.get(&sorted) {
                s += x * y * sign;
            }
        }
    }
    Ok(s)
}

/// Pentagon classes transported to `coGer` and their dual cocycles.
#[derive(Clone, Debug)]
pub struct GrtVerdict {
    pub weight: usize,
    pub classes: usize,
    /// Transported terminal defects, as `coGer` forms.
    pub images: Vec<ArnoldElement>,
    /// Whether the defects annihilate every linear boundary.
    pub cycles: bool,
    /// Rank of the pairing between the defects and the cocycle cohomology.
    pub pairing_rank: usize,
    pub defect_dim: usize,
    /// Cocycles dual to the defects, one per class when the pairing is perfect.
    pub dual_cocycles: Vec<Form>,
    /// Rank of the dual cocycles among the indecomposables.
    pub q_rank: usize,
    pub q_dim: usize,
}

impl GrtVerdict {
    /// Images nonzero and independent among the indecomposables.
    pub fn injective(&self) -> bool {
        self.q_rank == self.classes
    }

    /// Classes detected by the cocycle cohomology.
    pub fn detected(&self) -> bool {
        self.cycles && self.pairing_rank == self.classes
    }

    pub fn to_json(&self) -> Value {
        json!({
            "weight": self.weight,
            "classes": self.classes,
            "images": self.images.iter().map(|e| e.to_text()).collect::<Vec<_>>(),
            "cycles": self.cycles,
            "pairing_rank": self.pairing_rank,
            "defect_dim": self.defect_dim,
            "q_rank": self.q_rank,
            "q_dim": self.q_dim,
            "detected": self.detected(),
            "injective": self.injective(),
        })
    }
}

pub fn grt_image_check(
    coger: &dyn Cooperad,
    ctx: &BraidContext,
    w: usize,
    mode: ShuffleMode,
) -> Result<GrtVerdict, WeightsError> {
    coger.caps().check_weight(w)?;
    let sols = if w == 0 {
        Vec::new()
    } else {
        pentagon_solutions(ctx, w)?
    };
    let mut chains = Vec::new();
    let mut images = Vec::new();
    for psi in &sols {
        let t = transport(ctx, &embed_xy(ctx, psi, w)?).map_err(|e| WeightsError::Transport(e.to_string()))?;
        images.push(chain_to_arnold(&t.defect)?);
        chains.push(t.defect);
    }
    let defect = defect_h0(coger, w)?;
    let mut cycles = true;
    for g in generators_of(coger, -1, w)? {
        let b = linear_differential(coger, &g)?;
        for c in &chains {
            cycles &= pair_with_chain(coger, &b, c)?.is_zero();
        }
    }
    // pairing matrix: rows are cocycle classes, columns are defects
    let rows: Vec<SparseVec> = defect
        .basis
        .iter()
        .map(|z| {
            let mut v = SparseVec::new();
            for (j, c) in chains.iter().enumerate() {
                let x = pair_with_chain(coger, z, c)?;
                if !x.is_zero() {
                    v.insert(j, x);
                }
            }
            Ok(v)
        })
        .collect::<Result<_, WeightsError>>()?;
    let mut span = crate::linalg::Reducer::new();
    for r in &rows {
        span.insert(r);
    }
    // dual cocycles: combinations of the class basis pairing to the unit vectors
    let mut dual_cocycles = Vec::new();
    for j in 0..chains.len() {
        let cols: Vec<SparseVec> = (0..rows.len())
            .map(|i| rows[i].iter().map(|(&k, c)| (k, c.clone())).collect())
            .collect();
        if let Some(x) = solve_combination(&cols, &crate::linalg::unit(j)) {
            let mut f = Form::new();
            for (i, c) in x {
                add_form(&mut f, &defect.basis[i], &c);
            }
            dual_cocycles.push(f);
        }
    }
    let q = q_h0(coger, w, mode)?;
    Ok(GrtVerdict {
        weight: w,
        classes: sols.len(),
        images,
        cycles,
        pairing_rank: span.rank(),
        defect_dim: defect.dim,
        q_rank: q.class_rank(&dual_cocycles).unwrap_or(0),
        q_dim: q.dim,
        dual_cocycles,
    })
}

/// Per-weight summary of an induced map.
#[derive(Clone, Debug)]
pub struct WeightMapReport {
    pub weight: usize,
    pub src_dim: usize,
    pub dst_dim: usize,
    /// Rank of the induced map on indecomposables.
    pub rank: usize,
    /// Relations of the source land in relations of the target.
    pub intertwines: bool,
    /// Images of the source generators, in target coordinates.
    pub matrix: Vec<Form>,
}

impl WeightMapReport {
    pub fn surjective(&self) -> bool {
        self.rank == self.dst_dim
    }
}

/// Map of weight presentations induced by a morphism of handles.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub source: String,
    pub target: String,
    pub weights: Vec<WeightMapReport>,
}

/// Checks that `genmap` commutes with cocompositions, pullbacks and augmentation up to arity `max_n`.
pub fn check_compatibility(
    src: &dyn Cooperad,
    dst: &dyn Cooperad,
    genmap: &dyn Fn(&GenId) -> Result<Form, WeightsError>,
    max_n: usize,
) -> Result<(), WeightsError> {
    let map_form = |f: &Form| -> Result<Form, WeightsError> {
        let mut out = Form::new();
        for (g, c) in f {
            add_form(&mut out, &genmap(g)?, c);
        }
        Ok(out)
    };
    type Tensor = std::collections::BTreeMap<(GenId, GenId), Scalar>;
    let add_t = |t: &mut Tensor, k: (GenId, GenId), c: Scalar| {
        let e = t.entry(k).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            t.remove(&k);
        }
    };
    for n in 2..=max_n.min(src.caps().max_arity) {
        for p in 0..n.saturating_sub(1) {
            for g in src.basis(n, p)? {
                let image = genmap(&g)?;
                if n == 2 && src.augmentation(&g) != image.iter().map(|(x, c)| c * dst.augmentation(x)).sum::<Scalar>()
                {
                    return Err(WeightsError::Incompatible(format!("augmentation on {g}")));
                }
                for (i, k) in crate::moduli::blocks(n) {
                    let mut lhs = Tensor::new();
                    for (o, inner, c) in src.cocompose(&g, i, k)? {
                        for (a, x) in genmap(&o)? {
                            for (b, y) in genmap(&inner)? {
                                add_t(&mut lhs, (a, b), &c * &x * y);
                            }
                        }
                    }
                    let mut rhs = Tensor::new();
                    for (x, cx) in &image {
                        for (o, inner, c) in dst.cocompose(x, i, k)? {
                            add_t(&mut rhs, (o, inner), c * cx);
                        }
                    }
                    if lhs != rhs {
                        return Err(WeightsError::Incompatible(format!("cocomposition ({i},{k}) on {g}")));
                    }
                }
                if n < max_n {
                    let iota: Vec<usize> = (1..=n).map(|x| if x == 1 { 1 } else { x + 1 }).collect();
                    let a = map_form(&src.pullback(&g, &iota, n + 1)?)?;
                    let mut b = Form::new();
                    for (x, c) in &image {
                        add_form(&mut b, &dst.pullback(x, &iota, n + 1)?, c);
                    }
                    if a != b {
                        return Err(WeightsError::Incompatible(format!("pullback on {g}")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Induced map on indecomposables at each weight in `weights`.
pub fn induced_map(
    src: &dyn Cooperad,
    dst: &dyn Cooperad,
    genmap: &dyn Fn(&GenId) -> Result<Form, WeightsError>,
    weights: &[usize],
    mode: ShuffleMode,
) -> Result<InducedMap, WeightsError> {
    let max_w = weights.iter().copied().max().unwrap_or(0);
    check_compatibility(src, dst, genmap, (max_w + 2).min(src.caps().max_arity))?;
    let mut reports = Vec::new();
    for &w in weights {
        let qs = q_h0(src, w, mode)?;
        let qd = q_h0(dst, w, mode)?;
        let matrix = qs
            .generators
            .iter()
            .map(|g| genmap(g))
            .collect::<Result<Vec<Form>, WeightsError>>()?;
        let image_of = |v: &SparseVec| -> Form {
            let mut f = Form::new();
            for (i, c) in v {
                add_form(&mut f, &matrix[*i], c);
            }
            f
        };
        let intertwines = qs
            .relations
            .iter()
            .all(|r| qd.is_relation(&image_of(r)).unwrap_or(false));
        let reps: Vec<Form> = qs.representatives.iter().map(|&i| matrix[i].clone()).collect();
        reports.push(WeightMapReport {
            weight: w,
            src_dim: qs.dim,
            dst_dim: qd.dim,
            rank: qd.class_rank(&reps).unwrap_or(0),
            intertwines,
            matrix,
        });
    }
    Ok(InducedMap {
        source: src.name().to_string(),
        target: dst.name().to_string(),
        weights: reports,
    })
}

/// The inclusion of a handle's forms into `coGer`, on generators.
pub fn arnold_inclusion<'a>(
    src: &'a dyn Cooperad,
    coger: &'a dyn Cooperad,
) -> impl Fn(&GenId) -> Result<Form, WeightsError> + 'a {
    move |g: &GenId| {
        let e = src
            .to_arnold(g)
            .ok_or_else(|| WeightsError::Incompatible(format!("{g} has no coGer model")))?;
        coger.from_arnold(&e, g.p)
    }
}

/// Whether `I(a) - I(b)` vanishes in a presentation, with the residual dimension.
#[derive(Clone, Debug)]
pub struct RelationProbe {
    pub label: String,
    pub in_h0: bool,
    pub h0_residual: usize,
    pub in_q: bool,
    pub q_residual: usize,
}

impl RelationProbe {
    pub fn to_json(&self) -> Value {
        json!({
            "probe": self.label,
            "in_h0": self.in_h0,
            "h0_residual_dim": self.h0_residual,
            "in_q_h0": self.in_q,
            "q_h0_residual_dim": self.q_residual,
        })
    }
}

/// Probes the weight-three identity between the depth-two and depth-one symbols.
pub fn euler_probe(adelta: &dyn Cooperad, mode: ShuffleMode) -> Result<RelationProbe, WeightsError> {
    let a = mzv_symbol(adelta, &[1, 2])?;
    let b = mzv_symbol(adelta, &[3])?;
    let mut f = a.expansion.clone();
    add_form(&mut f, &b.expansion, &-Scalar::one());
    let probe = |p: &Presentation| -> Result<(bool, usize), WeightsError> {
        let r = p
            .residual_dim(&f)
            .ok_or_else(|| WeightsError::NotClosed("symbol outside the generators".into()))?;
        Ok((r == 0, r))
    };
    let (in_h0, h0_residual) = probe(&h0(adelta, 3, mode)?)?;
    let (in_q, q_residual) = probe(&q_h0(adelta, 3, mode)?)?;
    Ok(RelationProbe {
        label: format!("{} - {}", a.label, b.label),
        in_h0,
        h0_residual,
        in_q,
        q_residual,
    })
}

/// Dimensions under covering and general shuffle specs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeComparison {
    pub weight: usize,
    pub h0_covering: usize,
    pub h0_general: usize,
    pub q_covering: usize,
    pub q_general: usize,
}

pub fn mode_comparison(h: &dyn Cooperad, w: usize) -> Result<ModeComparison, WeightsError> {
    Ok(ModeComparison {
        weight: w,
        h0_covering: h0(h, w, ShuffleMode::Covering)?.dim,
        h0_general: h0(h, w, ShuffleMode::General)?.dim,
        q_covering: q_h0(h, w, ShuffleMode::Covering)?.dim,
        q_general: q_h0(h, w, ShuffleMode::General)?.dim,
    })
}
