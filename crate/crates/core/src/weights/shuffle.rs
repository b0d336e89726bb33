//! Shuffle products `alpha sh alpha'` realising the product map relations.

use std::collections::HashMap;
use std::sync::Mutex;

use itertools::Itertools;

use super::handle::{product_forms, pullback_form, Cooperad};
use super::{add_form, Form, GenId, WeightsError};
use crate::scalar::{self, Scalar};

/// Images `S`, `S'` of the two order-preserving injections into `[N]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShuffleSpec {
    pub big_n: usize,
    pub s: Vec<usize>,
    pub s_prime: Vec<usize>,
}

/// Which specs are admitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ShuffleMode {
    /// `|S n S'| = 2` and `S u S' = [N]`.
    #[default]
    Covering,
    /// Any pair of subsets of the right sizes.
    General,
}

impl ShuffleSpec {
    pub fn new(big_n: usize, s: Vec<usize>, s_prime: Vec<usize>) -> Self {
        ShuffleSpec { big_n, s, s_prime }
    }

    pub fn is_covering(&self) -> bool {
        let common = self.s.iter().filter(|x| self.s_prime.contains(x)).count();
        let union: std::collections::BTreeSet<usize> = self.s.iter().chain(&self.s_prime).copied().collect();
        common == 2 && union.len() == self.big_n
    }

    fn validate(&self, mode: ShuffleMode) -> Result<(), WeightsError> {
        let ok = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|&x| x >= 1 && x <= self.big_n);
        if !ok(&self.s) || !ok(&self.s_prime) {
            return Err(WeightsError::InadmissibleSpec(format!(
                "{self:?} is not a pair of subsets of [N]"
            )));
        }
        if mode == ShuffleMode::Covering && !self.is_covering() {
            return Err(WeightsError::InadmissibleSpec(format!(
                "{self:?} is not covering; enable general specs to use it"
            )));
        }
        Ok(())
    }
}

/// `S = {1..n-1, N}`, `S' = {1, n..N}`: the two pieces share the end points.
pub fn default_spec(n: usize, n2: usize) -> ShuffleSpec {
    let big_n = n + n2 - 2;
    let mut s: Vec<usize> = (1..n).collect();
    s.push(big_n);
    let mut s2 = vec![1];
    s2.extend(n..=big_n);
    ShuffleSpec::new(big_n, s, s2)
}

/// All admitted specs for factors of arities `n`, `n2`, with `N = n + n2 - 2`.
pub fn all_specs(n: usize, n2: usize, mode: ShuffleMode) -> Vec<ShuffleSpec> {
    let big_n = n + n2 - 2;
    let mut out = Vec::new();
    for s in (1..=big_n).combinations(n) {
        for s2 in (1..=big_n).combinations(n2) {
            let spec = ShuffleSpec::new(big_n, s.clone(), s2);
            if mode == ShuffleMode::General || spec.is_covering() {
                out.push(spec);
            }
        }
    }
    out
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len())
        .map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count())
        .sum()
}

/// Permutations `sigma` (as `sigma[x-1]`) monotone on `S` and on `S'`, with signs.
pub fn shuffle_set(spec: &ShuffleSpec, mode: ShuffleMode) -> Result<Vec<(Vec<usize>, i64)>, WeightsError> {
    spec.validate(mode)?;
    let mono = |sig: &[usize], set: &[usize]| set.windows(2).all(|w| sig[w[0] - 1] < sig[w[1] - 1]);
    Ok((1..=spec.big_n)
        .permutations(spec.big_n)
        .filter(|sig| mono(sig, &spec.s) && mono(sig, &spec.s_prime))
        .map(|sig| {
            let s = if inversions(&sig) % 2 == 0 { 1 } else { -1 };
            (sig, s)
        })
        .collect())
}

/// `sum_sigma sign * pi*_{sigma iota}(a) ^ pi*_{sigma iota'}(b)`.
pub fn shuffle_product(
    h: &dyn Cooperad,
    a: &Form,
    b: &Form,
    spec: &ShuffleSpec,
    mode: ShuffleMode,
) -> Result<Form, WeightsError> {
    let arity = |f: &Form| f.keys().next().map(|g| g.n);
    if arity(a).is_some_and(|n| n != spec.s.len()) || arity(b).is_some_and(|n| n != spec.s_prime.len()) {
        return Err(WeightsError::SpecMismatch(format!(
            "factor arities {:?}, {:?} vs spec {spec:?}",
            arity(a),
            arity(b)
        )));
    }
    let mut out = Form::new();
    for (sig, s) in shuffle_set(spec, mode)? {
        let ia: Vec<usize> = spec.s.iter().map(|&x| sig[x - 1]).collect();
        let ib: Vec<usize> = spec.s_prime.iter().map(|&x| sig[x - 1]).collect();
        let pa = pullback_form(h, a, &ia, spec.big_n)?;
        let pb = pullback_form(h, b, &ib, spec.big_n)?;
        add_form(&mut out, &product_forms(h, &pa, &pb)?, &scalar::int(s));
    }
    Ok(out)
}

/// Memoized shuffle products of basis elements.
pub struct ShuffleCache<'a> {
    pub handle: &'a dyn Cooperad,
    pub mode: ShuffleMode,
    cache: Mutex<HashMap<(GenId, GenId, ShuffleSpec), Form>>,
}

impl<'a> ShuffleCache<'a> {
    pub fn new(handle: &'a dyn Cooperad, mode: ShuffleMode) -> Self {
        ShuffleCache {
            handle,
            mode,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn basis_product(&self, a: GenId, b: GenId, spec: &ShuffleSpec) -> Result<Form, WeightsError> {
        let key = (a, b, spec.clone());
        if let Some(f) = self.cache.lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let one = |g: GenId| Form::from([(g, Scalar::from_integer(1.into()))]);
        let f = shuffle_product(self.handle, &one(a), &one(b), spec, self.mode)?;
        self.cache.lock().unwrap().insert(key, f.clone());
        Ok(f)
    }

    pub fn product(&self, a: &Form, b: &Form, spec: &ShuffleSpec) -> Result<Form, WeightsError> {
        let mut out = Form::new();
        for (x, cx) in a {
            for (y, cy) in b {
                add_form(&mut out, &self.basis_product(*x, *y, spec)?, &(cx * cy));
            }
        }
        Ok(out)
    }
}
