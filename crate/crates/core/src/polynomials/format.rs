//! Text and JSON renderings of polynomials and ideals.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ideal::Ideal;
use super::monomial::Monomial;
use super::poly::Poly;
use crate::arith::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Names `x11 … xnn, y` of the coordinates of `GL_n` embedded in
/// `n² + 1` dimensions. Indices are separated by `_` once `n > 9`.
pub fn gl_variable_names(n: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(n * n + 1);
    for i in 1..=n {
        for j in 1..=n {
            if n > 9 {
                names.push(format!("x{i}_{j}"));
            } else {
                names.push(format!("x{i}{j}"));
            }
        }
    }
    names.push("y".to_string());
    names
}

/// Generic names `x1 … xm`.
pub fn default_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("x{i}")).collect()
}

/// Human-readable sum such as `x11*x22 - x12*x21 - 1`.
pub fn poly_to_text<S: AsRef<str>>(p: &Poly, names: &[S]) -> String {
    assert_eq!(names.len(), p.arity(), "one name per variable");
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let abs = c.abs();
        let mono = monomial_text(m, names);
        match (abs.is_one(), mono.is_empty()) {
            (true, true) => out.push('1'),
            (true, false) => out.push_str(&mono),
            (false, true) => out.push_str(&format_rational(&abs)),
            (false, false) => {
                out.push_str(&format_rational(&abs));
                out.push('*');
                out.push_str(&mono);
            }
        }
    }
    out
}

fn monomial_text<S: AsRef<str>>(m: &Monomial, names: &[S]) -> String {
    let mut parts = Vec::new();
    for (e, name) in m.exps().iter().zip(names) {
        match e {
            0 => {}
            1 => parts.push(name.as_ref().to_string()),
            _ => parts.push(format!("{}^{e}", name.as_ref())),
        }
    }
    parts.join("*")
}

/// Parses the text produced by [`poly_to_text`] (and hand-written
/// variants with `+`, `-`, `*`, `^` and rational coefficients).
pub fn parse_poly<S: AsRef<str>>(s: &str, names: &[S]) -> Result<Poly> {
    let arity = names.len();
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = src.as_bytes();
    let mut pieces = Vec::new();
    for i in 1..=bytes.len() {
        if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^') {
            pieces.push(&src[start..i]);
            start = i;
        }
    }
    for piece in pieces {
        let (sign, body) = match piece.as_bytes()[0] {
            b'+' => (Rational::one(), &piece[1..]),
            b'-' => (-Rational::one(), &piece[1..]),
            _ => (Rational::one(), piece),
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {s:?}")));
        }
        let mut coeff = sign;
        let mut exps = vec![0u32; arity];
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in {s:?}")));
            }
            if factor.as_bytes()[0].is_ascii_digit() {
                coeff *= parse_rational(factor)?;
                continue;
            }
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                ),
                None => (factor, 1),
            };
            let idx = names
                .iter()
                .position(|v| v.as_ref() == name)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
            exps[idx] += e;
        }
        terms.push((Monomial(exps), coeff));
    }
    Ok(Poly::from_terms(arity, terms))
}

/// One term of a polynomial in JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub exps: Vec<u32>,
}

pub fn poly_to_json(p: &Poly) -> Vec<TermJson> {
    p.terms()
        .iter()
        .map(|(m, c)| TermJson {
            coeff: format_rational(c),
            exps: m.exps().to_vec(),
        })
        .collect()
}

pub fn poly_from_json(arity: usize, terms: &[TermJson]) -> Result<Poly> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        if t.exps.len() != arity {
            return Err(Error::Parse(format!(
                "term has {} exponents, expected {arity}",
                t.exps.len()
            )));
        }
        let c = parse_rational(&t.coeff)?;
        if c.is_zero() {
            continue;
        }
        out.push((Monomial(t.exps.clone()), c));
    }
    Ok(Poly::from_terms(arity, out))
}

/// JSON form of an ideal: variable names plus generator term lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    pub arity: usize,
    pub variables: Vec<String>,
    pub generators: Vec<Vec<TermJson>>,
}

impl IdealJson {
    pub fn from_ideal<S: AsRef<str>>(i: &Ideal, names: &[S]) -> Self {
        IdealJson {
            arity: i.arity(),
            variables: names.iter().map(|s| s.as_ref().to_string()).collect(),
            generators: i.generators().iter().map(poly_to_json).collect(),
        }
    }

    pub fn to_ideal(&self) -> Result<Ideal> {
        if self.variables.len() != self.arity {
            return Err(Error::Parse("variable list does not match arity".into()));
        }
        let gens = self
            .generators
            .iter()
            .map(|g| poly_from_json(self.arity, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(self.arity, gens))
    }
}
