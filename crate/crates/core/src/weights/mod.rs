//! Formal weights of a nonsymmetric cooperad of commutative algebras.
//!
//! A generator `I(g)` for a basis element `g` of `A(n)^p` has weight `p`
//! (for the braid handle, `p` plus the Lie length) and degree `p - n + 2`.
//! Only generators with `p <= n - 2` are kept, and `I` of the unit of `A(2)`
//! is identified with `1`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arnold::ArnoldError;
use crate::braids::BraidError;
use crate::moduli::ModuliError;
use crate::scalar::{self, Scalar};
use crate::words::WordsError;

mod braid_ce;
mod certify;
mod complex;
mod handle;
mod presentation;
mod shuffle;

pub use braid_ce::BraidCeHandle;
pub use certify::*;
pub use complex::*;
pub use handle::*;
pub use presentation::*;
pub use shuffle::*;

#[derive(Debug, Error)]
pub enum WeightsError {
    #[error("cap exceeded: {name} = {value} but the cap is {cap}")]
    CapExceeded {
        name: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("element leaves the handle's span: {0}")]
    NotClosed(String),
    #[error("inadmissible shuffle spec: {0}")]
    InadmissibleSpec(String),
    #[error("shuffle spec does not match the factors: {0}")]
    SpecMismatch(String),
    #[error("expected a form of top degree {expected} in arity {n}")]
    NotTopDegree { n: usize, expected: usize },
    #[error("generator map is not compatible: {0}")]
    Incompatible(String),
    #[error("transport failed: {0}")]
    Transport(String),
    #[error("no certificate applies: {0}")]
    NoCertificate(String),
    #[error("malformed presentation: {0}")]
    Format(String),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Arnold(#[from] ArnoldError),
    #[error(transparent)]
    Moduli(#[from] ModuliError),
    #[error(transparent)]
    Words(#[from] WordsError),
}

/// Size limits shared by all handles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightCaps {
    pub max_arity: usize,
    pub max_weight: usize,
    pub max_length: usize,
}

impl Default for WeightCaps {
    fn default() -> Self {
        WeightCaps {
            max_arity: 6,
            max_weight: 4,
            max_length: 4,
        }
    }
}

impl WeightCaps {
    pub fn check_weight(&self, w: usize) -> Result<(), WeightsError> {
        if w > self.max_weight {
            return Err(WeightsError::CapExceeded {
                name: "max-weight",
                value: w,
                cap: self.max_weight,
            });
        }
        Ok(())
    }

    pub fn check_arity(&self, n: usize) -> Result<(), WeightsError> {
        if n > self.max_arity {
            return Err(WeightsError::CapExceeded {
                name: "max-arity",
                value: n,
                cap: self.max_arity,
            });
        }
        Ok(())
    }
}

/// A basis element of `A(n)^p` in weight `w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId {
    pub n: usize,
    pub p: usize,
    pub w: usize,
    pub idx: usize,
}

impl GenId {
    pub fn new(n: usize, p: usize, w: usize, idx: usize) -> Self {
        GenId { n, p, w, idx }
    }

    pub fn unit(n: usize) -> Self {
        GenId::new(n, 0, 0, 0)
    }

    pub fn degree(&self) -> i64 {
        self.p as i64 - self.n as i64 + 2
    }

    pub fn is_odd(&self) -> bool {
        self.degree().rem_euclid(2) == 1
    }

    /// Whether `I` of this element survives the truncation.
    pub fn kept(&self) -> bool {
        self.p + 2 <= self.n
    }

    /// The unit of `A(2)`, whose symbol is identified with `1`.
    pub fn is_arity_two_unit(&self) -> bool {
        self.n == 2 && self.p == 0
    }
}

/// Linear combination of basis elements.
pub type Form = BTreeMap<GenId, Scalar>;

pub fn add_form(acc: &mut Form, other: &Form, c: &Scalar) {
    for (g, x) in other {
        add_coef(acc, *g, x * c);
    }
}

pub fn add_coef(acc: &mut Form, g: GenId, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(g).or_insert_with(Scalar::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&g);
    }
}

/// `I(g)` for a combination `g` of basis elements of one `A(n)^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightGenerator {
    pub n: usize,
    pub p: usize,
    pub w: usize,
    pub expansion: Form,
    pub label: String,
}

impl WeightGenerator {
    pub fn basis(h: &dyn Cooperad, g: GenId) -> Self {
        WeightGenerator {
            n: g.n,
            p: g.p,
            w: g.w,
            expansion: Form::from([(g, Scalar::one())]),
            label: h.label(&g),
        }
    }

    pub fn weight(&self) -> usize {
        self.w
    }

    pub fn degree(&self) -> i64 {
        self.p as i64 - self.n as i64 + 2
    }

    pub fn to_element(&self) -> WeightElement {
        let mut e = WeightElement::zero();
        for (g, c) in &self.expansion {
            e.add_generator(*g, c.clone());
        }
        e
    }
}

/// A polynomial in the symbols `I(g)`, graded commutative by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightElement {
    pub terms: BTreeMap<Vec<GenId>, Scalar>,
}

/// Sorts a product of symbols, tracking the Koszul sign; `None` if it vanishes.
pub fn normalize_monomial(seq: &[GenId]) -> Option<(Vec<GenId>, Scalar)> {
    let mut v: Vec<GenId> = seq.iter().copied().filter(|g| !g.is_arity_two_unit()).collect();
    let mut odd_swaps = 0i64;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            if v[j - 1].is_odd() && v[j].is_odd() {
                odd_swaps += 1;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1] && w[0].is_odd()) {
        return None;
    }
    Some((v, scalar::sign(odd_swaps)))
}

impl WeightElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut e = Self::zero();
        e.terms.insert(Vec::new(), Scalar::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_generator(&mut self, g: GenId, c: Scalar) {
        self.add_product(&[g], c);
    }

    /// Adds `c` times the ordered product `seq`.
    pub fn add_product(&mut self, seq: &[GenId], c: Scalar) {
        if c.is_zero() {
            return;
        }
        if let Some((m, s)) = normalize_monomial(seq) {
            let e = self.terms.entry(m.clone()).or_insert_with(Scalar::zero);
            *e += c * s;
            if e.is_zero() {
                self.terms.remove(&m);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &WeightElement, c: &Scalar) {
        for (m, x) in &other.terms {
            self.add_product(m, x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut e = Self::zero();
        e.add_scaled(self, c);
        e
    }

    pub fn multiply(&self, other: &WeightElement) -> Self {
        let mut e = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut seq = a.clone();
                seq.extend_from_slice(b);
                e.add_product(&seq, x * y);
            }
        }
        e
    }

    /// Part spanned by monomials with exactly one factor.
    pub fn linear_part(&self) -> Form {
        let mut f = Form::new();
        for (m, c) in &self.terms {
            if m.len() == 1 {
                add_coef(&mut f, m[0], c.clone());
            }
        }
        f
    }

    /// The set of `(degree, weight)` pairs occurring.
    pub fn bidegrees(&self) -> Vec<(i64, usize)> {
        let mut v: Vec<(i64, usize)> = self
            .terms
            .keys()
            .map(|m| (m.iter().map(GenId::degree).sum(), m.iter().map(|g| g.w).sum()))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn display(&self, h: &dyn Cooperad) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let body = if m.is_empty() {
                    "1".to_string()
                } else {
                    m.iter().map(|g| h.label(g)).collect::<Vec<_>>().join("*")
                };
                format!("{} {}", scalar::format(c), body)
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};{};{};{}]", self.n, self.p, self.w, self.idx)
    }
}
