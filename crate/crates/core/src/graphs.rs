//! Kontsevich graphs: white (labelled) and black (unlabelled) vertices,
//! odd edges. White vertices are `1..=white`, black ones follow.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arnold::{ArnoldElement, ArnoldTensor, Pair};
use crate::gc::{Derivation, GcAlgebra, GcElement};
use crate::scalar::{self, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {vertices} vertices")]
    VertexOutOfRange { vertex: usize, vertices: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("composition slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("malformed graph JSON: {0}")]
    Json(String),
    #[error("polynomial input error: {0}")]
    Input(String),
}

/// A graph with an ordered edge list. The order only matters up to sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    pub white: usize,
    pub black: usize,
    pub edges: Vec<Pair>,
}

impl Graph {
    pub fn new(white: usize, black: usize, edges: Vec<Pair>) -> Result<Self, GraphError> {
        let total = white + black;
        let mut out = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            for v in [a, b] {
                if v == 0 || v > total {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: v,
                        vertices: total,
                    });
                }
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            out.push((a.min(b), a.max(b)));
        }
        Ok(Graph {
            white,
            black,
            edges: out,
        })
    }

    pub fn vertices(&self) -> usize {
        self.white + self.black
    }

    pub fn is_black(&self, v: usize) -> bool {
        v > self.white
    }

    pub fn degree(&self) -> i64 {
        2 * self.black as i64 - self.edges.len() as i64
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// The edgeless graph on `n` white vertices.
    pub fn product(n: usize) -> Self {
        Graph {
            white: n,
            black: 0,
            edges: vec![],
        }
    }

    pub fn edge(white: usize, i: usize, j: usize) -> Self {
        Graph {
            white,
            black: 0,
            edges: vec![(i.min(j), i.max(j))],
        }
    }

    /// One black vertex joined to three white ones.
    pub fn tripod() -> Self {
        Graph {
            white: 3,
            black: 1,
            edges: vec![(1, 4), (2, 4), (3, 4)],
        }
    }

    /// Four white vertices with edges `13` and `24`.
    pub fn crossed_pair() -> Self {
        Graph {
            white: 4,
            black: 0,
            edges: vec![(1, 3), (2, 4)],
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "white": self.white,
            "black": self.black,
            "edges": self.edges.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, GraphError> {
        let field = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| GraphError::Json(format!("missing integer field {k:?}")))
        };
        let white = field("white")?;
        let black = v.get("black").and_then(Value::as_u64).unwrap_or(0) as usize;
        let edges = v
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| GraphError::Json("missing array field \"edges\"".into()))?
            .iter()
            .map(|e| match e.as_array().map(|a| a.as_slice()) {
                Some([a, b]) => match (a.as_u64(), b.as_u64()) {
                    (Some(a), Some(b)) => Ok((a as usize, b as usize)),
                    _ => Err(GraphError::Json(format!("bad edge {e}"))),
                },
                _ => Err(GraphError::Json(format!("bad edge {e}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Graph::new(white, black, edges)
    }

    /// Sorted edges and the sign of the sorting permutation; `None` on a double edge.
    fn sorted(&self) -> Option<(Vec<Pair>, i64)> {
        let mut e = self.edges.clone();
        let mut swaps = 0i64;
        for i in 1..e.len() {
            let mut j = i;
            while j > 0 && e[j - 1] > e[j] {
                e.swap(j - 1, j);
                swaps += 1;
                j -= 1;
            }
        }
        if e.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((e, if swaps % 2 == 0 { 1 } else { -1 }))
    }

    /// Canonical representative under black relabelling, with sign.
    /// `None` if the graph vanishes (double edge or odd automorphism).
    pub fn canonical(&self) -> Option<(Graph, i64)> {
        self.sorted()?;
        let w = self.white;
        let mut best: Option<(Vec<Pair>, i64)> = None;
        for perm in (0..self.black).permutations(self.black) {
            let relabel = |v: usize| if v > w { w + 1 + perm[v - w - 1] } else { v };
            let g = Graph {
                white: w,
                black: self.black,
                edges: self
                    .edges
                    .iter()
                    .map(|&(a, b)| {
                        let (x, y) = (relabel(a), relabel(b));
                        (x.min(y), x.max(y))
                    })
                    .collect(),
            };
            let (e, s) = g.sorted()?;
            match &best {
                Some((be, bs)) if *be == e => {
                    // an automorphism acting by an odd edge permutation
                    if *bs != s {
                        return None;
                    }
                }
                Some((be, _)) if *be < e => {}
                _ => best = Some((e, s)),
            }
        }
        let (e, s) = best?;
        Some((
            Graph {
                white: w,
                black: self.black,
                edges: e,
            },
            s,
        ))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G[{}w,{}b:", self.white, self.black)?;
        for (k, (a, b)) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}-{b}")?;
        }
        write!(f, "]")
    }
}

/// A finite linear combination of canonical graphs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphElement {
    pub terms: BTreeMap<Graph, Scalar>,
}

impl GraphElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut e = Self::zero();
        e.add_graph(g, Scalar::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_graph(&mut self, g: &Graph, c: Scalar) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        let Some((g, s)) = g.canonical() else { return };
        let c = c * scalar::int(s);
        match self.terms.entry(g) {
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

    pub fn add_scaled(&mut self, other: &GraphElement, c: &Scalar) {
        for (g, x) in &other.terms {
            self.add_graph(g, x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> GraphElement {
        let mut e = Self::zero();
        e.add_scaled(self, c);
        e
    }

    /// Superposition product: glue along white vertices, edges of `self` first.
    pub fn superpose(&self, other: &GraphElement) -> Result<GraphElement, GraphError> {
        let mut out = GraphElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_graph(&superpose(a, b)?, x * y);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(g, c)| json!({"graph": g.to_json(), "coefficient": scalar::format(c)}))
                .collect(),
        )
    }
}

pub fn superpose(a: &Graph, b: &Graph) -> Result<Graph, GraphError> {
    if a.white != b.white {
        return Err(GraphError::SlotOutOfRange {
            slot: b.white,
            arity: a.white,
        });
    }
    let w = a.white;
    let shift = |v: usize| if v > w { v + a.black } else { v };
    let mut edges = a.edges.clone();
    edges.extend(b.edges.iter().map(|&(x, y)| (shift(x), shift(y))));
    Ok(Graph {
        white: w,
        black: a.black + b.black,
        edges,
    })
}

/// All ways of sending the edges at `v` to a vertex chosen from `targets`.
fn reattachments(edges: &[Pair], v: usize, targets: &[usize]) -> Vec<Vec<Option<usize>>> {
    let incident: Vec<usize> = (0..edges.len())
        .filter(|&k| edges[k].0 == v || edges[k].1 == v)
        .collect();
    if incident.is_empty() {
        return vec![vec![None; edges.len()]];
    }
    incident
        .iter()
        .map(|_| targets.iter().copied())
        .multi_cartesian_product()
        .map(|choice| {
            let mut out = vec![None; edges.len()];
            for (k, t) in incident.iter().zip(choice) {
                out[*k] = Some(t);
            }
            out
        })
        .collect()
}

/// Inserts `inner` at vertex `v` of `outer`.
///
/// `outer_map` relabels the other vertices of `outer`, `inner_map` the
/// vertices of `inner`. Edges are ordered outer first.
fn insert_at(
    outer: &Graph,
    v: usize,
    inner: &Graph,
    white: usize,
    black: usize,
    outer_map: &dyn Fn(usize) -> usize,
    inner_map: &dyn Fn(usize) -> usize,
) -> Vec<Graph> {
    let targets: Vec<usize> = (1..=inner.vertices()).map(inner_map).collect();
    let inner_edges: Vec<Pair> = inner.edges.iter().map(|&(a, b)| (inner_map(a), inner_map(b))).collect();
    reattachments(&outer.edges, v, &targets)
        .into_iter()
        .map(|choice| {
            let mut edges: Vec<Pair> = outer
                .edges
                .iter()
                .zip(&choice)
                .map(|(&(a, b), t)| {
                    let a2 = if a == v { t.unwrap() } else { outer_map(a) };
                    let b2 = if b == v { t.unwrap() } else { outer_map(b) };
                    (a2.min(b2), a2.max(b2))
                })
                .collect();
            edges.extend(inner_edges.iter().copied());
            Graph { white, black, edges }
        })
        .collect()
}

/// Operadic composition at white vertex `i`.
pub fn g_compose(outer: &Graph, i: usize, inner: &Graph) -> Result<GraphElement, GraphError> {
    if i == 0 || i > outer.white {
        return Err(GraphError::SlotOutOfRange {
            slot: i,
            arity: outer.white,
        });
    }
    let (n, m) = (outer.white, inner.white);
    let white = n + m - 1;
    let black = outer.black + inner.black;
    let outer_map = |v: usize| {
        if v < i {
            v
        } else if v <= n {
            v + m - 1
        } else {
            v - n + white
        }
    };
    let inner_map = |v: usize| if v <= m { v + i - 1 } else { v - m + white + outer.black };
    let mut out = GraphElement::zero();
    for g in insert_at(outer, i, inner, white, black, &outer_map, &inner_map) {
        out.add_graph(&g, Scalar::one());
    }
    Ok(out)
}

pub fn compose_elements(a: &GraphElement, i: usize, b: &GraphElement) -> Result<GraphElement, GraphError> {
    let mut out = GraphElement::zero();
    for (g, x) in &a.terms {
        for (h, y) in &b.terms {
            out.add_scaled(&g_compose(g, i, h)?, &(x * y));
        }
    }
    Ok(out)
}

/// Splits black vertex `c` into `c` and a new black vertex joined by an edge.
fn split_black(g: &Graph, c: usize) -> Vec<Graph> {
    let nv = g.vertices() + 1;
    let mut out = Vec::new();
    for choice in reattachments(&g.edges, c, &[c, nv]) {
        let mut edges = vec![(c, nv)];
        for (&(a, b), t) in g.edges.iter().zip(&choice) {
            let a2 = if a == c { t.unwrap() } else { a };
            let b2 = if b == c { t.unwrap() } else { b };
            edges.push((a2.min(b2), a2.max(b2)));
        }
        out.push(Graph {
            white: g.white,
            black: g.black + 1,
            edges,
        });
    }
    out
}

/// The edge-insertion differential of the twisted operad.
pub fn tw_differential(x: &GraphElement) -> GraphElement {
    let mut out = GraphElement::zero();
    for (g, c) in &x.terms {
        let nv = g.vertices() + 1;
        // new black vertex hanging off any vertex
        for v in 1..nv {
            let mut edges = vec![(v, nv)];
            edges.extend(g.edges.iter().copied());
            out.add_graph(
                &Graph {
                    white: g.white,
                    black: g.black + 1,
                    edges,
                },
                c.clone(),
            );
        }
        // white vertex i grows a black neighbour and shares its edges
        for i in 1..=g.white {
            for choice in reattachments(&g.edges, i, &[i, nv]) {
                let mut edges = vec![(i, nv)];
                for (&(a, b), t) in g.edges.iter().zip(&choice) {
                    let a2 = if a == i { t.unwrap() } else { a };
                    let b2 = if b == i { t.unwrap() } else { b };
                    edges.push((a2.min(b2), a2.max(b2)));
                }
                out.add_graph(
                    &Graph {
                        white: g.white,
                        black: g.black + 1,
                        edges,
                    },
                    -c.clone(),
                );
            }
        }
        // black vertex splitting, symmetrised over which half is new
        let half = scalar::frac(-1, 2) * c;
        for b in g.white + 1..nv {
            for h in split_black(g, b) {
                out.add_graph(&h, half.clone());
            }
        }
    }
    out
}

/// Hochschild part of the deformation differential: the bracket with the
/// edgeless two-vertex graph.
pub fn d_h(x: &GraphElement) -> GraphElement {
    let mu = Graph::product(2);
    let mut out = GraphElement::zero();
    for (g, c) in &x.terms {
        let n = g.white;
        let e = GraphElement::from_graph(g);
        // mu o_2 g and mu o_1 g
        let left = compose_elements(&GraphElement::from_graph(&mu), 2, &e).unwrap();
        let right = compose_elements(&GraphElement::from_graph(&mu), 1, &e).unwrap();
        out.add_scaled(&left, c);
        out.add_scaled(&right, &(c * scalar::sign(n as i64 + 1)));
        for i in 1..=n {
            let inner = g_compose(g, i, &mu).unwrap();
            out.add_scaled(&inner, &(c * scalar::sign(i as i64)));
        }
    }
    out
}

/// Degree of a graph in the deformation complex.
pub fn def_degree(g: &Graph) -> i64 {
    g.degree() + g.white as i64 - 1
}

/// Total differential of the deformation complex, `d - (-1)^|g| d_H`.
pub fn def_total_differential(x: &GraphElement) -> GraphElement {
    let mut out = tw_differential(x);
    for (g, c) in &x.terms {
        let e = GraphElement::from_graph(g);
        out.add_scaled(&d_h(&e), &(c * scalar::int(def_twist(g))));
    }
    out
}

/// `d` and `d_H` commute, so `d_H` is twisted by the parity of the graph
/// degree. The overall sign is a convention; this one makes the tripod
/// cohomologous to the crossed pair with coefficient `+1`.
fn def_twist(g: &Graph) -> i64 {
    if g.degree().rem_euclid(2) == 0 {
        -1
    } else {
        1
    }
}

/// Structural data of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Black-black edges and, per black vertex, the number of legs.
    pub internal_edges: Vec<Pair>,
    pub legs: Vec<usize>,
    pub internally_connected: bool,
    pub graphs_member: bool,
}

fn components(vertices: &[usize], edges: &[Pair]) -> Vec<Vec<usize>> {
    let mut parent: BTreeMap<usize, usize> = vertices.iter().map(|&v| (v, v)).collect();
    fn find(p: &mut BTreeMap<usize, usize>, v: usize) -> usize {
        let u = p[&v];
        if u == v {
            v
        } else {
            let r = find(p, u);
            p.insert(v, r);
            r
        }
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent.insert(ra, rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in vertices {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}

pub fn classify(g: &Graph) -> Classification {
    let blacks: Vec<usize> = (g.white + 1..=g.vertices()).collect();
    let internal_edges: Vec<Pair> = g
        .edges
        .iter()
        .copied()
        .filter(|&(a, b)| g.is_black(a) && g.is_black(b))
        .collect();
    let legs: Vec<usize> = blacks
        .iter()
        .map(|&c| {
            g.edges
                .iter()
                .filter(|&&(a, b)| (a == c && !g.is_black(b)) || (b == c && !g.is_black(a)))
                .count()
        })
        .collect();
    let white_white = g
        .edges
        .iter()
        .filter(|&&(a, b)| !g.is_black(a) && !g.is_black(b))
        .count();
    let single_edge = g.black == 0 && g.edges.len() == 1;
    let internal_connected = !blacks.is_empty() && components(&blacks, &internal_edges).len() == 1;
    let internally_connected = single_edge || (white_white == 0 && internal_connected);
    let all: Vec<usize> = (1..=g.vertices()).collect();
    let no_black_component = components(&all, &g.edges)
        .iter()
        .all(|comp| comp.iter().any(|&v| !g.is_black(v)));
    let trivalent = blacks.iter().all(|&c| g.valence(c) >= 3);
    Classification {
        internal_edges,
        legs,
        internally_connected,
        graphs_member: no_black_component && trivalent,
    }
}

/// The projection to the Arnold algebra: black graphs vanish, edges become forms.
pub fn graphs_to_coger(x: &GraphElement, arity: usize) -> ArnoldElement {
    let mut out = ArnoldElement::zero(arity);
    for (g, c) in &x.terms {
        if g.black == 0 && g.white == arity {
            let term = ArnoldElement::product_of(arity, &g.edges, c.clone());
            out.add_scaled(&term, &Scalar::one());
        }
    }
    out
}

/// Cocomposition of a white graph along the block `i..i+k-1`.
pub fn white_cocompose(g: &Graph, i: usize, k: usize) -> Option<Vec<(Graph, Graph, i64)>> {
    if g.black != 0 || k < 2 || i == 0 || i + k - 1 > g.white {
        return None;
    }
    let in_block = |v: usize| v >= i && v < i + k;
    let collapse = |v: usize| {
        if v < i {
            v
        } else if in_block(v) {
            i
        } else {
            v - k + 1
        }
    };
    let mut outer = Vec::new();
    let mut inner = Vec::new();
    let mut sign = 0usize;
    for &(a, b) in &g.edges {
        if in_block(a) && in_block(b) {
            inner.push((a - i + 1, b - i + 1));
        } else {
            sign += inner.len();
            outer.push((collapse(a), collapse(b)));
        }
    }
    let s = if sign % 2 == 0 { 1 } else { -1 };
    Some(vec![(
        Graph {
            white: g.white - k + 1,
            black: 0,
            edges: outer,
        },
        Graph {
            white: k,
            black: 0,
            edges: inner,
        },
        s,
    )])
}

/// Image of a white cocomposition in the tensor square of the Arnold algebra.
pub fn cocompose_to_coger(g: &Graph, i: usize, k: usize) -> Option<ArnoldTensor> {
    let parts = white_cocompose(g, i, k)?;
    let mut t = ArnoldTensor::zero(g.white - k + 1, k);
    for (o, p, s) in parts {
        let oe = ArnoldElement::product_of(o.white, &o.edges, scalar::int(s));
        let pe = ArnoldElement::product_of(p.white, &p.edges, Scalar::one());
        t = t.add(&ArnoldTensor::pure(&oe, &pe));
    }
    Some(t)
}

/// Polydifferential operators on tensor powers of `Q[x^1..x^d] (x) Lambda[eta_1..eta_d]`.
pub struct PolyOperator {
    pub d: usize,
    pub target: Arc<GcAlgebra>,
}

impl PolyOperator {
    /// Generators `x^1..x^d` (degree 0) then `eta_1..eta_d` (degree 1).
    pub fn new(d: usize) -> Self {
        let mut degs = vec![0; d];
        degs.extend(vec![1; d]);
        PolyOperator {
            d,
            target: GcAlgebra::new(degs),
        }
    }

    pub fn x(&self, a: usize) -> GcElement {
        GcElement::generator(&self.target, a - 1)
    }

    pub fn eta(&self, a: usize) -> GcElement {
        GcElement::generator(&self.target, self.d + a - 1)
    }

    fn slot_algebra(&self, n: usize) -> Arc<GcAlgebra> {
        let mut degs = Vec::new();
        for _ in 0..n {
            degs.extend(vec![0; self.d]);
            degs.extend(vec![1; self.d]);
        }
        GcAlgebra::new(degs)
    }

    fn partial(&self, alg: &Arc<GcAlgebra>, gen: usize) -> Derivation {
        let deg = -alg.degree(gen);
        let values = (0..alg.len())
            .map(|g| {
                if g == gen {
                    GcElement::one(alg)
                } else {
                    GcElement::zero(alg)
                }
            })
            .collect();
        Derivation::extend(alg, values, deg).expect("coordinate derivation")
    }

    /// Applies a white graph combination to `inputs` and multiplies out.
    pub fn apply(&self, a: &GraphElement, inputs: &[GcElement]) -> Result<GcElement, GraphError> {
        let n = inputs.len();
        let alg = self.slot_algebra(n);
        let w = 2 * self.d;
        let mut tensor = GcElement::one(&alg);
        for (s, inp) in inputs.iter().enumerate() {
            let mut emb = GcElement::zero(&alg);
            for (m, c) in inp.terms() {
                let seq: Vec<usize> = m.iter().map(|&g| s * w + g).collect();
                emb.add_scaled(&GcElement::monomial(&alg, &seq, c.clone()), &Scalar::one());
            }
            tensor = tensor.multiply(&emb).map_err(|e| GraphError::Input(e.to_string()))?;
        }
        let mut out = GcElement::zero(&self.target);
        for (g, c) in &a.terms {
            if g.black != 0 || g.white != n {
                return Err(GraphError::Input(format!("operator needs a white graph of arity {n}")));
            }
            let mut cur = tensor.clone();
            for &(i, j) in g.edges.iter().rev() {
                let mut next = GcElement::zero(&alg);
                for a in 0..self.d {
                    for (p, q) in [(i, j), (j, i)] {
                        let dx = self.partial(&alg, (q - 1) * w + a);
                        let de = self.partial(&alg, (p - 1) * w + self.d + a);
                        let t = de.apply(&dx.apply(&cur).unwrap()).unwrap();
                        next.add_scaled(&t, &Scalar::one());
                    }
                }
                cur = next;
            }
            for (m, x) in cur.terms() {
                let seq: Vec<usize> = m.iter().map(|&g| g % w).collect();
                out.add_scaled(&GcElement::monomial(&self.target, &seq, x.clone()), c);
            }
        }
        Ok(out)
    }
}

/// Applies the operadic composite `F o_i G` to homogeneous inputs directly.
pub fn compose_operators(
    op: &PolyOperator,
    f: &GraphElement,
    i: usize,
    g: &GraphElement,
    g_arity: usize,
    inputs: &[GcElement],
) -> Result<GcElement, GraphError> {
    let inner = op.apply(g, &inputs[i - 1..i - 1 + g_arity])?;
    let g_degree: i64 = g.terms.keys().next().map(|h| -(h.edges.len() as i64)).unwrap_or(0);
    let before: i64 = inputs[..i - 1].iter().map(|x| x.degree().unwrap_or(0) as i64).sum();
    let mut args: Vec<GcElement> = inputs[..i - 1].to_vec();
    args.push(inner);
    args.extend_from_slice(&inputs[i - 1 + g_arity..]);
    Ok(op.apply(f, &args)?.scale(&scalar::sign(g_degree * before)))
}

/// All graphs with the given counts, without double edges.
pub fn census(white: usize, black: usize, max_edges: usize) -> Vec<Graph> {
    let total = white + black;
    let pairs = crate::arnold::all_pairs(total);
    let mut seen = std::collections::BTreeSet::new();
    for e in 0..=max_edges.min(pairs.len()) {
        for edges in pairs.iter().copied().combinations(e) {
            let g = Graph { white, black, edges };
            if let Some((c, _)) = g.canonical() {
                seen.insert(c);
            }
        }
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_automorphism_kills_graph() {
        // two black vertices swapped reverses nothing here, but the
        // black "theta" with three parallel paths would; check a simple one
        let g = Graph::new(2, 2, vec![(1, 3), (2, 3), (1, 4), (2, 4)]).unwrap();
        // swapping 3 and 4 exchanges edge pairs: an even permutation
        assert!(g.canonical().is_some());
        let h = Graph::new(0, 2, vec![(1, 2)]).unwrap();
        assert!(h.canonical().is_some());
    }

    #[test]
    fn double_edge_vanishes() {
        let g = Graph {
            white: 2,
            black: 0,
            edges: vec![(1, 2), (1, 2)],
        };
        assert!(g.canonical().is_none());
    }

    #[test]
    fn json_round_trip() {
        let t = Graph::tripod();
        assert_eq!(Graph::from_json(&t.to_json()).unwrap(), t);
    }
}
