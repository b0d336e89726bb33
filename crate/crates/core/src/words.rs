//! Normalized binary bracketings, prime bracketings, and their forms.

use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::arnold::{ArnoldElement, Pair};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bracketing {
    Leaf(usize),
    Node(Box<Bracketing>, Box<Bracketing>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("leaf label {0} occurs more than once")]
    RepeatedLabel(usize),
    #[error("bracket {0} is not normalized: its smallest index must be on the left and its largest on the right")]
    NotNormalized(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordsError {
    #[error("bracketing {0} is not normalized")]
    NotNormalized(String),
    #[error("bracketing {0} does not have leaves 1..n")]
    BadLabels(String),
}

impl Bracketing {
    pub fn leaf(i: usize) -> Self {
        Bracketing::Leaf(i)
    }

    pub fn node(a: Bracketing, b: Bracketing) -> Self {
        Bracketing::Node(Box::new(a), Box::new(b))
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut v = Vec::new();
        self.collect_leaves(&mut v);
        v
    }

    fn collect_leaves(&self, v: &mut Vec<usize>) {
        match self {
            Bracketing::Leaf(i) => v.push(*i),
            Bracketing::Node(a, b) => {
                a.collect_leaves(v);
                b.collect_leaves(v);
            }
        }
    }

    fn min_max(&self) -> (usize, usize) {
        let l = self.leaves();
        (*l.iter().min().unwrap(), *l.iter().max().unwrap())
    }

    /// The first bracket, in preorder, violating normalization.
    fn first_violation(&self) -> Option<&Bracketing> {
        match self {
            Bracketing::Leaf(_) => None,
            Bracketing::Node(a, b) => {
                let (lo, hi) = self.min_max();
                if !a.leaves().contains(&lo) || !b.leaves().contains(&hi) {
                    return Some(self);
                }
                a.first_violation().or_else(|| b.first_violation())
            }
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.first_violation().is_none()
    }

    /// Arity `n` when the leaves are exactly `1..n`.
    pub fn arity(&self) -> Option<usize> {
        let mut l = self.leaves();
        l.sort_unstable();
        l.iter().enumerate().all(|(k, &x)| x == k + 1).then_some(l.len())
    }

    /// Brackets in preorder: outside-in, left to right.
    pub fn brackets(&self) -> Vec<&Bracketing> {
        let mut out = Vec::new();
        fn walk<'a>(t: &'a Bracketing, out: &mut Vec<&'a Bracketing>) {
            if let Bracketing::Node(a, b) = t {
                out.push(t);
                walk(a, out);
                walk(b, out);
            }
        }
        walk(self, &mut out);
        out
    }

    /// A proper sub-bracket whose leaves form an integer interval, if any.
    pub fn interval_witness(&self) -> Option<&Bracketing> {
        self.brackets().into_iter().skip(1).find(|b| {
            let mut l = b.leaves();
            l.sort_unstable();
            l.windows(2).all(|w| w[1] == w[0] + 1)
        })
    }

    pub fn is_prime(&self) -> bool {
        self.interval_witness().is_none()
    }
}

impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracketing::Leaf(i) => write!(f, "{i}"),
            Bracketing::Node(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

impl fmt::Debug for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn bracketings_on(set: &[usize]) -> Vec<Bracketing> {
    if set.len() == 1 {
        return vec![Bracketing::leaf(set[0])];
    }
    let lo = set[0];
    let hi = *set.last().unwrap();
    let middle = &set[1..set.len() - 1];
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << middle.len()) {
        let mut x = vec![lo];
        let mut y = Vec::new();
        for (b, &v) in middle.iter().enumerate() {
            if mask & (1 << b) != 0 {
                x.push(v);
            } else {
                y.push(v);
            }
        }
        y.push(hi);
        x.sort_unstable();
        y.sort_unstable();
        for l in bracketings_on(&x) {
            for r in bracketings_on(&y) {
                out.push(Bracketing::node(l.clone(), r));
            }
        }
    }
    out
}

/// All normalized bracketings of `1..n`, sorted by their text form.
pub fn enumerate_l(n: usize) -> Vec<Bracketing> {
    if n < 2 {
        return Vec::new();
    }
    let set: Vec<usize> = (1..=n).collect();
    let mut v = bracketings_on(&set);
    v.sort_by_key(|b| b.to_string());
    v
}

pub fn enumerate_p(n: usize) -> Vec<Bracketing> {
    enumerate_l(n).into_iter().filter(|b| b.is_prime()).collect()
}

pub fn to_monomial(l: &Bracketing) -> Result<Vec<Pair>, WordsError> {
    if !l.is_normalized() {
        return Err(WordsError::NotNormalized(l.to_string()));
    }
    Ok(l.brackets().into_iter().map(|b| b.min_max()).collect())
}

/// The form `w(M_L)`, the ordered product over the bracket monomial.
pub fn omega_of(l: &Bracketing) -> Result<ArnoldElement, WordsError> {
    let n = l.arity().ok_or_else(|| WordsError::BadLabels(l.to_string()))?;
    let m = to_monomial(l)?;
    Ok(ArnoldElement::product_of(n, &m, Scalar::one()))
}

/// `p(x) = x - w_1n * iota_v(x)`, the projection onto `ker iota_v`.
pub fn project_ker_iota(x: &ArnoldElement) -> ArnoldElement {
    let n = x.arity();
    let w = ArnoldElement::gen(n, 1, n);
    let correction = w.multiply(&x.iota_v()).expect("same arity");
    x.sub(&correction).expect("same arity")
}

/// Strips the outermost `w_1n` factor of `w(M_L)` and projects into `ker iota_v`.
pub fn alpha_of(l: &Bracketing) -> Result<ArnoldElement, WordsError> {
    let n = l.arity().ok_or_else(|| WordsError::BadLabels(l.to_string()))?;
    let m = to_monomial(l)?;
    let rest = ArnoldElement::product_of(n, &m[1..], Scalar::one());
    Ok(project_ker_iota(&rest))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Bracketing, ParseError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b']')?;
                Ok(Bracketing::node(a, b))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let v: usize = text.parse().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: "integer out of range".into(),
                })?;
                if v == 0 {
                    return Err(ParseError::Syntax {
                        pos: start,
                        msg: "labels start at 1".into(),
                    });
                }
                Ok(Bracketing::leaf(v))
            }
            Some(_) => Err(self.err("expected '[' or an integer")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses `expr := INT | '[' expr ',' expr ']'` and checks labels and normalization.
pub fn parse_bracketing(text: &str) -> Result<Bracketing, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let t = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    let mut leaves = t.leaves();
    leaves.sort_unstable();
    if let Some(w) = leaves.windows(2).find(|w| w[0] == w[1]) {
        return Err(ParseError::RepeatedLabel(w[0]));
    }
    if let Some(bad) = t.first_violation() {
        return Err(ParseError::NotNormalized(bad.to_string()));
    }
    Ok(t)
}

pub fn print_bracketing(b: &Bracketing) -> String {
    b.to_string()
}
