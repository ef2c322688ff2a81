//! Degree-bounded vanishing ideals of finitely generated matrix groups.
//!
//! A group `G ⊆ GL_n(Q)` is viewed inside `Q^{n²+1}` through the embedding
//! `M ↦ (entries of M, 1/det M)`. The polynomials of degree `≤ d` vanishing
//! on `G` are the kernel of the span of the monomial lifts `μ_d(g)`, and that
//! span is the smallest subspace containing `μ_d(1)` and stable under the
//! linear maps induced by left multiplication with the generators.

mod engine;
mod group;
mod special;

pub use engine::{
    invariants_up_to_degree, invariants_up_to_degree_with, Certificate, ClosureConfig,
    ClosureReport, ClosureResult, Witness,
};
pub use group::{
    auto_closure, auto_closure_with, check_soundness, finite_group_elements, is_group_variety,
    is_group_variety_with, random_words, schreier_generators, AutoConfig,
};
pub use special::{
    closure_cyclic_semisimple, closure_unipotent_product, implicitize, implicitize_gl,
    implicitize_matrix, poly_det, rational_diagonalization, PolyMap,
};

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, parse_rational, QMatrix, Rational};
use crate::error::{Error, Result};
use crate::polynomials::{linear_images, monomials_up_to, Monomial, Poly};

/// A finite set `S ⊆ GL_n(Q)` together with `S ∪ S⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    n: usize,
    gens: Vec<QMatrix>,
    with_inverses: Vec<QMatrix>,
}

impl GeneratorSet {
    /// Checks shapes and invertibility. `with_inverses` lists the
    /// generators first, then the inverses not already present.
    pub fn new(n: usize, gens: Vec<QMatrix>) -> Result<Self> {
        let mut with_inverses: Vec<QMatrix> = Vec::new();
        let mut inverses = Vec::new();
        for g in &gens {
            if g.rows() != n || g.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "generator is {}x{}, expected {n}x{n}",
                    g.rows(),
                    g.cols()
                )));
            }
            inverses.push(g.inverse()?);
            if !with_inverses.contains(g) {
                with_inverses.push(g.clone());
            }
        }
        for g in inverses {
            if !with_inverses.contains(&g) {
                with_inverses.push(g);
            }
        }
        Ok(GeneratorSet {
            n,
            gens,
            with_inverses,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of coordinates `n² + 1` of the embedding.
    pub fn arity(&self) -> usize {
        self.n * self.n + 1
    }

    pub fn gens(&self) -> &[QMatrix] {
        &self.gens
    }

    pub fn with_inverses(&self) -> &[QMatrix] {
        &self.with_inverses
    }

    /// Product `s_{w_0} · s_{w_1} ⋯` over `with_inverses`.
    pub fn word_matrix(&self, word: &[usize]) -> QMatrix {
        word.iter()
            .fold(QMatrix::identity(self.n), |acc, &i| &acc * &self.with_inverses[i])
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let js: GeneratorSetJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        js.to_set()
    }

    pub fn to_json(&self) -> GeneratorSetJson {
        GeneratorSetJson {
            n: self.n,
            generators: self.gens.iter().map(matrix_to_strings).collect(),
        }
    }
}

/// `{"n": 2, "generators": [[["1","1"],["0","1"]], …]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSetJson {
    pub n: usize,
    pub generators: Vec<Vec<Vec<String>>>,
}

impl GeneratorSetJson {
    pub fn to_set(&self) -> Result<GeneratorSet> {
        let gens = self
            .generators
            .iter()
            .map(|g| matrix_from_strings(g))
            .collect::<Result<Vec<_>>>()?;
        GeneratorSet::new(self.n, gens)
    }
}

pub fn matrix_to_strings(m: &QMatrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect()
}

/// Parses a row-major matrix of rational strings; rows must be equal length.
pub fn matrix_from_strings(rows: &[Vec<String>]) -> Result<QMatrix> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let cols = parsed.first().map_or(0, Vec::len);
    if parsed.is_empty() || parsed.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("matrix rows must be non-empty and equal length".into()));
    }
    Ok(QMatrix::from_rows(parsed))
}

/// A point `(M, y)` with `det(M)·y = 1`, coordinates row-major then `y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GLPoint {
    n: usize,
    coords: Vec<Rational>,
}

impl GLPoint {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn y(&self) -> &Rational {
        &self.coords[self.n * self.n]
    }

    pub fn matrix(&self) -> QMatrix {
        QMatrix::from_vec(self.n, self.n, self.coords[..self.n * self.n].to_vec())
            .expect("point shape")
    }

    /// The point of `g · M`.
    pub fn left_mul(&self, g: &QMatrix, g_y: &Rational) -> GLPoint {
        let prod = g * &self.matrix();
        let mut coords = prod.into_entries();
        coords.push(g_y * self.y());
        GLPoint { n: self.n, coords }
    }
}

/// `g ↦ (entries of g, 1/det g)`.
pub fn gl_embed(g: &QMatrix) -> Result<GLPoint> {
    if !g.is_square() {
        return Err(Error::DimensionMismatch("gl_embed needs a square matrix".into()));
    }
    let det = g.det()?;
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let mut coords = g.entries().to_vec();
    coords.push(det.recip());
    Ok(GLPoint { n: g.rows(), coords })
}

/// The monomials of degree `≤ d` in `m` variables with a product recipe
/// for fast evaluation.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    m: usize,
    d: u32,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    // monomial k (k ≥ 1) = monomial parent[k].0 times variable parent[k].1
    parent: Vec<(usize, usize)>,
}

impl MonomialBasis {
    pub fn new(m: usize, d: u32) -> Self {
        let monos = monomials_up_to(m, d);
        let index: HashMap<Monomial, usize> =
            monos.iter().cloned().enumerate().map(|(i, mo)| (mo, i)).collect();
        let parent = monos
            .iter()
            .map(|mo| match mo.0.iter().position(|&e| e > 0) {
                None => (0, 0),
                Some(v) => {
                    let mut e = mo.0.clone();
                    e[v] -= 1;
                    (index[&Monomial(e)], v)
                }
            })
            .collect();
        MonomialBasis {
            m,
            d,
            monos,
            index,
            parent,
        }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monos
    }

    pub fn index_of(&self, mo: &Monomial) -> Option<usize> {
        self.index.get(mo).copied()
    }

    /// Every monomial evaluated at `coords`.
    pub fn lift(&self, coords: &[Rational]) -> Vec<Rational> {
        assert_eq!(coords.len(), self.m, "point arity");
        let mut out: Vec<Rational> = Vec::with_capacity(self.monos.len());
        out.push(Rational::one());
        for k in 1..self.monos.len() {
            let (p, v) = self.parent[k];
            let val = if out[p].is_zero() || coords[v].is_zero() {
                Rational::zero()
            } else {
                &out[p] * &coords[v]
            };
            out.push(val);
        }
        out
    }

    /// The polynomial with coefficient vector `c` over this basis.
    pub fn to_poly(&self, c: &[Rational]) -> Poly {
        Poly::from_terms(
            self.m,
            self.monos
                .iter()
                .zip(c)
                .filter(|(_, v)| !v.is_zero())
                .map(|(mo, v)| (mo.clone(), v.clone())),
        )
    }

    /// Coefficient vector of `p`, which must have degree `≤ d`.
    pub fn coefficients(&self, p: &Poly) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.monos.len()];
        for (mo, c) in p.terms() {
            let i = self.index_of(mo).expect("polynomial degree exceeds basis degree");
            out[i] = c.clone();
        }
        out
    }
}

/// `μ_d(p)`: all monomials of degree `≤ d` at `coords`, ascending degree
/// and descending grevlex within a degree.
pub fn monomial_lift(coords: &[Rational], d: u32) -> Vec<Rational> {
    MonomialBasis::new(coords.len(), d).lift(coords)
}

/// The matrix `L` with `μ_d(g·h) = L · μ_d(h)` for every invertible `h`.
pub fn lift_operator(g: &QMatrix, d: u32) -> Result<QMatrix> {
    let p = gl_embed(g)?;
    let n = g.rows();
    let m = n * n + 1;
    // coordinates of g·h are linear in those of h: entry (i,j) is
    // Σ_k g_ik h_kj, and y(gh) = y(g)·y(h)
    let mut lin = QMatrix::zeros(m, m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                lin.set(i * n + j, k * n + j, g.get(i, k).clone());
            }
        }
    }
    lin.set(m - 1, m - 1, p.y().clone());
    let images = linear_images(&lin);
    let basis = MonomialBasis::new(m, d);
    let size = basis.len();
    let mut out = QMatrix::zeros(size, size);
    for (row, mo) in basis.monomials().iter().enumerate() {
        let mut f = Poly::one(m);
        for (v, &e) in mo.0.iter().enumerate() {
            if e > 0 {
                f = &f * &images[v].pow(e);
            }
        }
        for (t, c) in f.terms() {
            let col = basis.index_of(t).expect("lift preserves degree");
            out.set(row, col, c.clone());
        }
    }
    Ok(out)
}
