//! Structure of single rational matrices: characteristic and minimal
//! polynomials, the Jordan–Chevalley decomposition, and logarithms and
//! one-parameter subgroups of unipotent matrices.

mod unipoly;

pub use unipoly::UniPoly;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{QMatrix, Rational};
use crate::error::{Error, Result};
use crate::polynomials::Poly;

fn require_square(g: &QMatrix) {
    assert!(g.is_square(), "expected a square matrix, got {}x{}", g.rows(), g.cols());
}

/// `det(x·1 − g)` via Faddeev–LeVerrier.
pub fn char_poly(g: &QMatrix) -> UniPoly {
    require_square(g);
    let n = g.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = QMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = g·M_{k-1} + c_{n-k+1}·1
        m = &(g * &m) + &QMatrix::identity(n).scale(&coeffs[n - k + 1]);
        let gm = g * &m;
        let trace: Rational = (0..n).map(|i| gm.get(i, i).clone()).sum();
        coeffs[n - k] = -trace / Rational::from_integer(BigInt::from(k));
    }
    UniPoly::new(coeffs)
}

/// Monic generator of `{p : p(g) = 0}`, found as the first linear
/// dependency among `1, g, g², …`.
pub fn min_poly(g: &QMatrix) -> UniPoly {
    require_square(g);
    let n = g.rows();
    let mut powers: Vec<Vec<Rational>> = vec![QMatrix::identity(n).into_entries()];
    let mut cur = QMatrix::identity(n);
    loop {
        cur = &cur * g;
        let k = powers.len();
        // columns are the vectorised powers 1, g, …, g^k
        let mut cols = powers.clone();
        cols.push(cur.entries().to_vec());
        let mut a = QMatrix::zeros(n * n, k + 1);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                a.set(i, j, v.clone());
            }
        }
        let kernel = a.kernel_basis();
        if let Some(v) = kernel.first() {
            // the kernel is one-dimensional with a 1 in the g^k slot
            return UniPoly::new(v.entries().to_vec()).monic();
        }
        powers.push(cur.entries().to_vec());
    }
}

/// Diagonalisable over an algebraic closure: squarefree minimal polynomial.
pub fn is_semisimple(g: &QMatrix) -> bool {
    min_poly(g).is_squarefree()
}

pub fn is_nilpotent(g: &QMatrix) -> bool {
    require_square(g);
    g.pow(g.rows() as u32).is_zero()
}

pub fn is_unipotent(g: &QMatrix) -> bool {
    require_square(g);
    is_nilpotent(&(g - &QMatrix::identity(g.rows())))
}

/// `g = g_s · g_u` with `g_s` semisimple, `g_u` unipotent and both
/// commuting with each other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JcDecomposition {
    pub semisimple: QMatrix,
    pub unipotent: QMatrix,
}

impl JcDecomposition {
    /// The nilpotent part `g − g_s` of the additive decomposition.
    pub fn nilpotent(&self) -> QMatrix {
        let g = &self.semisimple * &self.unipotent;
        &g - &self.semisimple
    }
}

/// Multiplicative Jordan–Chevalley decomposition over the rationals.
///
/// The semisimple part is found by Newton iteration on the squarefree part
/// `p` of the minimal polynomial, `s ← s − p(s)·p'(s)^{-1}`, which stays
/// inside `Q[g]` and converges in `O(log n)` steps.
pub fn jordan_chevalley(g: &QMatrix) -> Result<JcDecomposition> {
    require_square(g);
    let n = g.rows();
    if g.det()?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let p = min_poly(g).squarefree_part();
    let dp = p.derivative();
    let mut s = g.clone();
    loop {
        let ps = p.eval_matrix(&s);
        if ps.is_zero() {
            break;
        }
        let step = &ps * &dp.eval_matrix(&s).inverse()?;
        s = &s - &step;
    }
    let nil = g - &s;
    let unipotent = &QMatrix::identity(n) + &(&s.inverse()? * &nil);
    Ok(JcDecomposition {
        semisimple: s,
        unipotent,
    })
}

/// Truncated logarithm `Σ_{k<n} (−1)^{k−1} (u − 1)^k / k`.
pub fn nilpotent_log(u: &QMatrix) -> Result<QMatrix> {
    require_square(u);
    if !is_unipotent(u) {
        return Err(Error::NotUnipotent);
    }
    let n = u.rows();
    let x = u - &QMatrix::identity(n);
    let mut acc = QMatrix::zeros(n, n);
    let mut power = QMatrix::identity(n);
    for k in 1..n.max(1) {
        power = &power * &x;
        let c = Rational::new(if k % 2 == 1 { 1.into() } else { (-1).into() }, k.into());
        acc = &acc + &power.scale(&c);
    }
    Ok(acc)
}

/// Truncated exponential `Σ_{k<n} N^k / k!` of a nilpotent matrix.
pub fn nilpotent_exp(nil: &QMatrix) -> Result<QMatrix> {
    require_square(nil);
    if !is_nilpotent(nil) {
        return Err(Error::InvalidArgument("exponential of a non-nilpotent matrix".into()));
    }
    let n = nil.rows();
    let mut acc = QMatrix::identity(n);
    let mut term = QMatrix::identity(n);
    for k in 1..n.max(1) {
        term = (&term * nil).scale(&Rational::new(BigInt::one(), k.into()));
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Matrix whose entries are polynomials in one variable `z`, stored as
/// `Σ_k coeffs[k] · z^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    coeffs: Vec<QMatrix>,
}

impl PolyMatrix {
    pub fn constant(m: QMatrix) -> Self {
        PolyMatrix {
            n: m.rows(),
            coeffs: vec![m],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coefficient_matrices(&self) -> &[QMatrix] {
        &self.coeffs
    }

    /// Degree in `z` (0 for constants).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    pub fn entry(&self, i: usize, j: usize) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c.get(i, j).clone()).collect())
    }

    pub fn eval(&self, z: &Rational) -> QMatrix {
        let mut acc = QMatrix::zeros(self.n, self.n);
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(z) + c;
        }
        acc
    }

    /// Entries as polynomials in `z = x_var` of a ring with `arity`
    /// variables, row-major.
    pub fn entry_polys(&self, arity: usize, var: usize) -> Vec<Poly> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.entry(i, j).to_poly(arity, var))
            .collect()
    }
}

/// The one-parameter subgroup `z ↦ exp(z · log h)` through a unipotent `h`;
/// its entries are polynomials in `z` of degree below `n`.
pub fn one_parameter(h: &QMatrix) -> Result<PolyMatrix> {
    let log = nilpotent_log(h)?;
    let n = h.rows();
    let mut coeffs = vec![QMatrix::identity(n)];
    let mut term = QMatrix::identity(n);
    for k in 1..n.max(1) {
        term = (&term * &log).scale(&Rational::new(BigInt::one(), k.into()));
        if term.is_zero() {
            break;
        }
        coeffs.push(term.clone());
    }
    Ok(PolyMatrix { n, coeffs })
}
