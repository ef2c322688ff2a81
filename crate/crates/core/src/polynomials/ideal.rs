use num_traits::Zero;

use super::groebner::{groebner_basis, normal_form, GbConfig};
use super::monomial::MonomialOrder;
use super::poly::Poly;
use crate::arith::{QMatrix, Rational};
use crate::error::{Error, Result};

/// Ideal of `Q[x_1, …, x_arity]` given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    arity: usize,
    generators: Vec<Poly>,
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(arity: usize, generators: Vec<Poly>) -> Self {
        assert!(
            generators.iter().all(|g| g.arity() == arity),
            "generator arity mismatch"
        );
        Ideal {
            arity,
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
        }
    }

    pub fn zero(arity: usize) -> Self {
        Ideal::new(arity, Vec::new())
    }

    pub fn unit(arity: usize) -> Self {
        Ideal::new(arity, vec![Poly::one(arity)])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Sum of two ideals of the same ring.
    pub fn join(&self, other: &Ideal) -> Ideal {
        assert_eq!(self.arity, other.arity);
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        Ideal::new(self.arity, g)
    }

    pub fn groebner(&self, ord: MonomialOrder) -> Result<Vec<Poly>> {
        self.groebner_with(ord, &GbConfig::default())
    }

    pub fn groebner_with(&self, ord: MonomialOrder, cfg: &GbConfig) -> Result<Vec<Poly>> {
        groebner_basis(&self.generators, ord, cfg)
    }

    /// The ideal regenerated by its reduced grevlex basis.
    pub fn reduced(&self) -> Result<Ideal> {
        Ok(Ideal::new(self.arity, self.groebner(MonomialOrder::Grevlex)?))
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        self.contains_with(f, &GbConfig::default())
    }

    pub fn contains_with(&self, f: &Poly, cfg: &GbConfig) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        let gb = self.groebner_with(MonomialOrder::Grevlex, cfg)?;
        Ok(normal_form(f, &gb, MonomialOrder::Grevlex).is_zero())
    }

    /// Equality of ideals via reduced grevlex bases.
    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        if self.arity != other.arity {
            return Ok(false);
        }
        Ok(self.groebner(MonomialOrder::Grevlex)? == other.groebner(MonomialOrder::Grevlex)?)
    }

    /// Generators of the elimination ideal `I ∩ Q[x_{k+1}, …]`, expressed
    /// in the ring of the remaining `arity - k` variables.
    pub fn eliminate(&self, k: usize) -> Result<Ideal> {
        self.eliminate_with(k, &GbConfig::default())
    }

    pub fn eliminate_with(&self, k: usize, cfg: &GbConfig) -> Result<Ideal> {
        if k >= self.arity {
            return Err(Error::InvalidArgument(format!(
                "cannot eliminate {k} of {} variables",
                self.arity
            )));
        }
        let gb = self.groebner_with(MonomialOrder::Elimination(k), cfg)?;
        let kept = gb
            .into_iter()
            .filter(|g| (0..k).all(|i| !g.uses_var(i)))
            .map(|g| g.drop_leading_vars(k))
            .collect();
        Ok(Ideal::new(self.arity - k, kept))
    }

    /// Ideal of the image `A · V(I)`: each generator `f` becomes
    /// `f(A^{-1} x)`.
    pub fn substitute_linear(&self, a: &QMatrix) -> Result<Ideal> {
        if a.rows() != self.arity || a.cols() != self.arity {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} map on a ring of {} variables",
                a.rows(),
                a.cols(),
                self.arity
            )));
        }
        let inv = a.inverse()?;
        let images = linear_images(&inv);
        Ok(Ideal::new(
            self.arity,
            self.generators.iter().map(|g| g.compose(&images)).collect(),
        ))
    }

    /// True when every generator vanishes at `point`.
    pub fn vanishes_at(&self, point: &[Rational]) -> bool {
        self.generators.iter().all(|g| g.eval(point).is_zero())
    }
}

/// The linear forms `x_i ↦ Σ_j a_ij x_j`.
pub fn linear_images(a: &QMatrix) -> Vec<Poly> {
    let m = a.cols();
    (0..a.rows())
        .map(|i| {
            (0..m).fold(Poly::zero(m), |acc, j| {
                let c = a.get(i, j);
                if c.is_zero() {
                    acc
                } else {
                    &acc + &Poly::var(m, j).scale(c)
                }
            })
        })
        .collect()
}
