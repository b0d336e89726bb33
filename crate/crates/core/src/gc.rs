//! Free graded-commutative algebras with Koszul signs.
//!
//! A [`GcAlgebra`] fixes a finite universe of generators with integer
//! degrees. Monomials are sorted generator sequences; odd generators occur at
//! most once, even generators may repeat.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::{self, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GcError {
    #[error("elements belong to different generator universes")]
    MismatchedUniverse,
    #[error("generator {generator} has degree {expected} but its image has degree {found}")]
    DegreeMismatch {
        generator: usize,
        expected: i32,
        found: i32,
    },
    #[error("derivation needs {expected} generator values, got {found}")]
    WrongValueCount { expected: usize, found: usize },
}

/// Generator universe: generator `g` has degree `degrees[g]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcAlgebra {
    degrees: Vec<i32>,
}

pub type GcMonomial = Vec<usize>;

impl GcAlgebra {
    pub fn new(degrees: Vec<i32>) -> Arc<Self> {
        Arc::new(GcAlgebra { degrees })
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degree(&self, g: usize) -> i32 {
        self.degrees[g]
    }

    pub fn is_odd(&self, g: usize) -> bool {
        self.degrees[g].rem_euclid(2) == 1
    }

    pub fn monomial_degree(&self, m: &[usize]) -> i32 {
        m.iter().map(|&g| self.degrees[g]).sum()
    }

    /// Sorts a generator sequence, returning the Koszul sign of the
    /// reordering, or `None` if an odd generator repeats.
    pub fn normalize_monomial(&self, seq: &[usize]) -> Option<(GcMonomial, Scalar)> {
        let mut v = seq.to_vec();
        let mut odd_swaps = 0usize;
        // insertion sort, counting transpositions of two odd generators
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                if self.is_odd(v[j - 1]) && self.is_odd(v[j]) {
                    odd_swaps += 1;
                }
                v.swap(j - 1, j);
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1] && self.is_odd(w[0])) {
            return None;
        }
        Some((v, scalar::sign(odd_swaps as i64)))
    }
}

/// A linear combination of normal-form monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct GcElement {
    algebra: Arc<GcAlgebra>,
    terms: BTreeMap<GcMonomial, Scalar>,
}

impl fmt::Debug for GcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{}*{:?}", scalar::format(c), m))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl GcElement {
    pub fn zero(algebra: &Arc<GcAlgebra>) -> Self {
        GcElement {
            algebra: algebra.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(algebra: &Arc<GcAlgebra>) -> Self {
        Self::monomial(algebra, &[], Scalar::one())
    }

    pub fn generator(algebra: &Arc<GcAlgebra>, g: usize) -> Self {
        Self::monomial(algebra, &[g], Scalar::one())
    }

    /// The product of the given generator sequence times `c`, in normal form.
    pub fn monomial(algebra: &Arc<GcAlgebra>, seq: &[usize], c: Scalar) -> Self {
        let mut e = Self::zero(algebra);
        if let Some((m, s)) = algebra.normalize_monomial(seq) {
            e.add_term(m, c * s);
        }
        e
    }

    pub fn algebra(&self) -> &Arc<GcAlgebra> {
        &self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<GcMonomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[usize]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    fn add_term(&mut self, m: GcMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_universe(&self, other: &GcElement) -> Result<(), GcError> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra {
            Ok(())
        } else {
            Err(GcError::MismatchedUniverse)
        }
    }

    pub fn add(&self, other: &GcElement) -> Result<GcElement, GcError> {
        self.same_universe(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn add_scaled(&mut self, other: &GcElement, c: &Scalar) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> GcElement {
        let mut out = Self::zero(&self.algebra);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn multiply(&self, other: &GcElement) -> Result<GcElement, GcError> {
        self.same_universe(other)?;
        let mut out = Self::zero(&self.algebra);
        let mut seq = Vec::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                seq.clear();
                seq.extend_from_slice(a);
                seq.extend_from_slice(b);
                if let Some((m, s)) = self.algebra.normalize_monomial(&seq) {
                    out.add_term(m, x * y * s);
                }
            }
        }
        Ok(out)
    }

    /// Degree of a homogeneous element; `None` for zero or mixed degrees.
    pub fn degree(&self) -> Option<i32> {
        let mut degs = self.terms.keys().map(|m| self.algebra.monomial_degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous_part(&self, degree: i32) -> GcElement {
        let mut out = Self::zero(&self.algebra);
        for (m, c) in &self.terms {
            if self.algebra.monomial_degree(m) == degree {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }
}

/// A graded derivation of degree `degree`, determined by its generator values.
#[derive(Clone, Debug)]
pub struct Derivation {
    algebra: Arc<GcAlgebra>,
    values: Vec<GcElement>,
    degree: i32,
}

impl Derivation {
    /// Extends generator values to a derivation obeying
    /// `D(ab) = D(a) b + (-1)^{d|a|} a D(b)`.
    pub fn extend(algebra: &Arc<GcAlgebra>, values: Vec<GcElement>, degree: i32) -> Result<Self, GcError> {
        if values.len() != algebra.len() {
            return Err(GcError::WrongValueCount {
                expected: algebra.len(),
                found: values.len(),
            });
        }
        for (g, v) in values.iter().enumerate() {
            if !Arc::ptr_eq(v.algebra(), algebra) && **v.algebra() != **algebra {
                return Err(GcError::MismatchedUniverse);
            }
            for m in v.terms.keys() {
                let found = algebra.monomial_degree(m);
                let expected = algebra.degree(g) + degree;
                if found != expected {
                    return Err(GcError::DegreeMismatch {
                        generator: g,
                        expected,
                        found,
                    });
                }
            }
        }
        Ok(Derivation {
            algebra: algebra.clone(),
            values,
            degree,
        })
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn apply(&self, e: &GcElement) -> Result<GcElement, GcError> {
        if !Arc::ptr_eq(e.algebra(), &self.algebra) && **e.algebra() != *self.algebra {
            return Err(GcError::MismatchedUniverse);
        }
        let mut out = GcElement::zero(&self.algebra);
        for (m, c) in &e.terms {
            let mut prefix_degree = 0i32;
            for (pos, &g) in m.iter().enumerate() {
                let value = &self.values[g];
                if !value.is_zero() {
                    let s = scalar::sign((self.degree as i64) * (prefix_degree as i64));
                    for (vm, vc) in &value.terms {
                        let mut seq = Vec::with_capacity(m.len() + vm.len());
                        seq.extend_from_slice(&m[..pos]);
                        seq.extend_from_slice(vm);
                        seq.extend_from_slice(&m[pos + 1..]);
                        if let Some((nm, ns)) = self.algebra.normalize_monomial(&seq) {
                            out.add_term(nm, c * vc * &s * ns);
                        }
                    }
                }
                prefix_degree += self.algebra.degree(g);
            }
        }
        Ok(out)
    }
}
