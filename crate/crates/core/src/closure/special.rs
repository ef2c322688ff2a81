//! Closures with a closed form: cyclic groups of diagonalizable matrices and
//! images of polynomial maps.

use num_traits::One;

use crate::arith::{QMatrix, Rational};
use crate::error::{Error, Result};
use crate::polynomials::{GbConfig, Ideal, Poly};
use crate::relations::{lattice_to_binomial_ideal, rational_relation_lattice, EigenSpec};
use crate::structure::{is_semisimple, is_unipotent, one_parameter, PolyMatrix};

/// `g = P · diag(λ) · P⁻¹` over `Q`, eigenvalues ascending with
/// multiplicity.
pub fn rational_diagonalization(g: &QMatrix) -> Result<(QMatrix, Vec<Rational>)> {
    let spec = EigenSpec::of_matrix(g)?;
    if !is_semisimple(g) {
        return Err(Error::NotSemisimple);
    }
    let n = g.rows();
    let mut values: Vec<Rational> = spec.values().to_vec();
    values.dedup();
    let mut cols: Vec<Vec<Rational>> = Vec::new();
    let mut eig = Vec::new();
    for lam in values {
        let shifted = g - &QMatrix::identity(n).scale(&lam);
        for v in shifted.kernel_basis() {
            cols.push(v.into_entries());
            eig.push(lam.clone());
        }
    }
    debug_assert_eq!(cols.len(), n, "semisimple matrices have full eigenbases");
    let p = QMatrix::from_rows(cols).transpose();
    Ok((p, eig))
}

fn var(m: usize, i: usize) -> Poly {
    Poly::var(m, i)
}

/// `Zcl⟨g⟩` for `g` diagonalizable over `Q`: the torus cut out by the
/// multiplicative relations of the eigenvalues, conjugated back.
pub fn closure_cyclic_semisimple(g: &QMatrix) -> Result<Ideal> {
    let (p, eig) = rational_diagonalization(g)?;
    let n = g.rows();
    let m = n * n + 1;
    let lattice = rational_relation_lattice(&EigenSpec::new(eig)?)?;
    let diag_vars: Vec<Poly> = (0..n).map(|i| var(m, i * n + i)).collect();
    let mut gens: Vec<Poly> = lattice_to_binomial_ideal(&lattice)
        .generators()
        .iter()
        .map(|b| b.compose(&diag_vars))
        .collect();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                gens.push(var(m, i * n + j));
            }
        }
    }
    let det = diag_vars.iter().fold(Poly::one(m), |acc, x| &acc * x);
    gens.push(&(&det * &var(m, m - 1)) - &Poly::one(m));
    let torus = Ideal::new(m, gens);

    // D ↦ P D P⁻¹ on the entry coordinates, y fixed
    let pinv = p.inverse()?;
    let mut conj = QMatrix::zeros(m, m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    conj.set(i * n + j, k * n + l, p.get(i, k) * pinv.get(l, j));
                }
            }
        }
    }
    conj.set(m - 1, m - 1, Rational::one());
    torus.substitute_linear(&conj)?.reduced()
}

/// A polynomial map `Q^params → Q^{outputs.len()}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    pub params: usize,
    pub outputs: Vec<Poly>,
}

impl PolyMap {
    pub fn new(params: usize, outputs: Vec<Poly>) -> Result<Self> {
        if outputs.iter().any(|f| f.arity() != params) {
            return Err(Error::DimensionMismatch("output arity must equal the parameter count".into()));
        }
        Ok(PolyMap { params, outputs })
    }

    pub fn eval(&self, t: &[Rational]) -> Vec<Rational> {
        self.outputs.iter().map(|f| f.eval(t)).collect()
    }
}

/// Ideal of the Zariski closure of the image, by eliminating the
/// parameters from `⟨x_i − f_i(t)⟩`.
pub fn implicitize(map: &PolyMap) -> Result<Ideal> {
    let k = map.params;
    let arity = k + map.outputs.len();
    let gens = map
        .outputs
        .iter()
        .enumerate()
        .map(|(i, f)| &var(arity, k + i) - &f.embed(arity, 0))
        .collect();
    eliminate_params(Ideal::new(arity, gens), k, &GbConfig::default())
}

fn eliminate_params(graph: Ideal, k: usize, cfg: &GbConfig) -> Result<Ideal> {
    if k == 0 {
        return graph.reduced();
    }
    graph.eliminate_with(k, cfg)?.reduced()
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn poly_det(entries: &[Poly], n: usize) -> Poly {
    assert_eq!(entries.len(), n * n);
    let arity = entries.first().map_or(0, Poly::arity);
    if n == 0 {
        return Poly::one(arity);
    }
    if n == 1 {
        return entries[0].clone();
    }
    let mut acc = Poly::zero(arity);
    for j in 0..n {
        if entries[j].is_zero() {
            continue;
        }
        let minor: Vec<Poly> = (1..n)
            .flat_map(|r| (0..n).filter(move |&c| c != j).map(move |c| (r, c)))
            .map(|(r, c)| entries[r * n + c].clone())
            .collect();
        let term = &entries[j] * &poly_det(&minor, n - 1);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn poly_mat_mul(a: &[Poly], b: &[Poly], n: usize) -> Vec<Poly> {
    let arity = a[0].arity();
    (0..n * n)
        .map(|ij| {
            let (i, j) = (ij / n, ij % n);
            (0..n).fold(Poly::zero(arity), |acc, k| &acc + &(&a[i * n + k] * &b[k * n + j]))
        })
        .collect()
}

/// Closure in `GL_n` of the image of `t ↦ M(t)` for a polynomial matrix
/// given row-major in `params` variables: the parameters are eliminated
/// from `⟨x − M(t), y·det M(t) − 1⟩`.
pub fn implicitize_gl(n: usize, params: usize, entries: &[Poly]) -> Result<Ideal> {
    if entries.len() != n * n || entries.iter().any(|f| f.arity() != params) {
        return Err(Error::DimensionMismatch("expected n² entries in the parameter ring".into()));
    }
    let m = n * n + 1;
    let arity = params + m;
    let det = poly_det(entries, n).embed(arity, 0);
    let y_rel = &(&det * &var(arity, arity - 1)) - &Poly::one(arity);
    let mut gens: Vec<Poly> = entries
        .iter()
        .enumerate()
        .map(|(i, f)| &var(arity, params + i) - &f.embed(arity, 0))
        .collect();
    gens.push(y_rel);
    eliminate_params(Ideal::new(arity, gens), params, &GbConfig::default())
}

/// Closure of the image of a one-parameter polynomial matrix `z ↦ M(z)`.
pub fn implicitize_matrix(pm: &PolyMatrix) -> Result<Ideal> {
    let n = pm.dim();
    implicitize_gl(n, 1, &pm.entry_polys(1, 0))
}

/// `Zcl{Φ_{h_1}(z_1) ⋯ Φ_{h_ℓ}(z_ℓ)}` for unipotent `h_i` in `GL_n`.
pub fn closure_unipotent_product(n: usize, hs: &[QMatrix]) -> Result<Ideal> {
    let l = hs.len();
    for h in hs {
        if h.rows() != n || h.cols() != n {
            return Err(Error::DimensionMismatch(format!("expected {n}x{n} matrices")));
        }
        if !is_unipotent(h) {
            return Err(Error::NotUnipotent);
        }
    }
    let mut prod: Vec<Poly> = QMatrix::identity(n)
        .entries()
        .iter()
        .map(|c| Poly::constant(l, c.clone()))
        .collect();
    for (i, h) in hs.iter().enumerate() {
        let phi = one_parameter(h)?.entry_polys(l, i);
        prod = poly_mat_mul(&prod, &phi, n);
    }
    implicitize_gl(n, l, &prod)
}
