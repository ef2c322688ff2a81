use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::monomial::{Monomial, MonomialOrder};
use crate::arith::Rational;

/// Multivariate polynomial over the rationals. Terms are kept sorted in
/// descending grevlex order with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    arity: usize,
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero(arity: usize) -> Self {
        Poly {
            arity,
            terms: Vec::new(),
        }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        Self::from_terms(arity, vec![(Monomial::one(arity), c)])
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable index out of range");
        Poly {
            arity,
            terms: vec![(Monomial::var(arity, i), Rational::one())],
        }
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.arity(), arity, "monomial arity mismatch");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| MonomialOrder::Grevlex.cmp(&b.0, &a.0));
        Poly { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Indices of variables that occur with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.arity)
            .filter(|&i| self.terms.iter().any(|(m, _)| m.0[i] > 0))
            .collect()
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.0[i] > 0)
    }

    /// Leading term under `ord`.
    pub fn leading(&self, ord: MonomialOrder) -> Option<&(Monomial, Rational)> {
        self.terms.iter().max_by(|a, b| ord.cmp(&a.0, &b.0))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.arity);
        }
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Scales so that the grevlex-leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(t, v)| (t.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.arity);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.arity, "evaluation point arity mismatch");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes variable `i` by `images[i]`; all images share an arity.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.arity, "one image per variable");
        let target = images.first().map_or(0, |p| p.arity);
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(p.arity), p.clone()]).collect();
        let mut acc = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Re-embeds into a ring of `arity` variables, placing variable `i`
    /// at position `offset + i`.
    pub fn embed(&self, arity: usize, offset: usize) -> Poly {
        assert!(offset + self.arity <= arity);
        Poly::from_terms(
            arity,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0; arity];
                e[offset..offset + self.arity].copy_from_slice(&m.0);
                (Monomial(e), c.clone())
            }),
        )
    }

    /// Drops the first `k` variables. Panics if any of them occurs.
    pub fn drop_leading_vars(&self, k: usize) -> Poly {
        Poly::from_terms(
            self.arity - k,
            self.terms.iter().map(|(m, c)| {
                assert!(m.0[..k].iter().all(|&e| e == 0), "polynomial uses a dropped variable");
                (Monomial(m.0[k..].to_vec()), c.clone())
            }),
        )
    }

    /// Formal partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        Poly::from_terms(
            self.arity,
            self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
                let mut e = m.0.clone();
                let k = e[i];
                e[i] -= 1;
                (Monomial(e), c * Rational::from_integer(k.into()))
            }),
        )
    }
}

fn merge(a: &Poly, b: &Poly, negate_b: bool) -> Poly {
    assert_eq!(a.arity, b.arity, "polynomial arity mismatch");
    let ord = MonomialOrder::Grevlex;
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() || j < b.terms.len() {
        let pick = if i == a.terms.len() {
            std::cmp::Ordering::Less
        } else if j == b.terms.len() {
            std::cmp::Ordering::Greater
        } else {
            ord.cmp(&a.terms[i].0, &b.terms[j].0)
        };
        match pick {
            std::cmp::Ordering::Greater => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                let (m, c) = &b.terms[j];
                out.push((m.clone(), if negate_b { -c } else { c.clone() }));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b {
                    &a.terms[i].1 - &b.terms[j].1
                } else {
                    &a.terms[i].1 + &b.terms[j].1
                };
                if !c.is_zero() {
                    out.push((a.terms[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    Poly {
        arity: a.arity,
        terms: out,
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        merge(self, rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        merge(self, rhs, true)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.arity, rhs.arity, "polynomial arity mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.arity);
        }
        Poly::from_terms(
            self.arity,
            self.terms
                .iter()
                .flat_map(|(ma, ca)| rhs.terms.iter().map(move |(mb, cb)| (ma.mul(mb), ca * cb))),
        )
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn xy() -> (Poly, Poly) {
        (Poly::var(2, 0), Poly::var(2, 1))
    }

    #[test]
    fn arithmetic_and_canonical_order() {
        let (x, y) = xy();
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p, &(&x * &x) - &(&y * &y));
        assert!((&p - &p).is_zero());
        // grevlex descending: x^2 first, then the constant
        let q = &(&x * &x) + &Poly::constant(2, int(3));
        assert_eq!(q.terms()[0].0, Monomial(vec![2, 0]));
    }

    #[test]
    fn compose_and_eval() {
        let (x, y) = xy();
        let f = &(&x * &y) - &Poly::one(2);
        // x -> 2x, y -> y + 1
        let g = f.compose(&[x.scale(&int(2)), &y + &Poly::one(2)]);
        assert_eq!(g.eval(&[int(1), int(2)]), int(5));
        assert_eq!(f.eval(&[int(2), int(3)]), int(5));
    }

    #[test]
    fn embed_and_drop() {
        let (x, _) = xy();
        let e = x.embed(4, 2);
        assert_eq!(e, Poly::var(4, 2));
        assert_eq!(e.drop_leading_vars(2), Poly::var(2, 0));
    }
}
