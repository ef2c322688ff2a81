//! Multiplicative relations among rational eigenvalues and the binomial
//! ideals they cut out.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::interval::{ln_bounds, Interval};
use crate::arith::{format_rational, integer_kernel, IntMatrix, QMatrix, Rational};
use crate::bounds::TowerNumber;
use crate::error::{Error, Result};
use crate::polynomials::{Ideal, Monomial, Poly};
use crate::structure::char_poly;

/// Nonzero rational eigenvalues `λ_1, …, λ_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenSpec {
    values: Vec<Rational>,
}

impl EigenSpec {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.iter().any(Zero::is_zero) {
            return Err(Error::InvalidArgument("eigenvalues must be nonzero".into()));
        }
        Ok(EigenSpec { values })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Eigenvalues of `g` repeated by algebraic multiplicity, ascending.
    /// Fails when part of the spectrum is irrational.
    pub fn of_matrix(g: &QMatrix) -> Result<Self> {
        let (roots, rest) = char_poly(g).rational_roots();
        if rest.degree().unwrap_or(0) > 0 {
            return Err(Error::UnsupportedEigenvalues(format!(
                "characteristic polynomial has an irrational factor {rest:?}"
            )));
        }
        let values: Vec<Rational> = roots
            .into_iter()
            .flat_map(|(r, m)| std::iter::repeat_n(r, m))
            .collect();
        EigenSpec::new(values)
    }
}

/// `{k ∈ Z^n : λ_1^{k_1} ⋯ λ_n^{k_n} = 1}`, with basis rows in Hermite
/// normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationLattice {
    n: usize,
    basis: IntMatrix,
}

impl RelationLattice {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Basis rows as `i64` vectors (panics on overflow).
    pub fn basis_i64(&self) -> Vec<Vec<i64>> {
        self.basis
            .row_vectors()
            .iter()
            .map(|r| r.iter().map(|v| v.to_i64().expect("relation exponent overflow")).collect())
            .collect()
    }
}

/// Bound on trial division used when factoring numerators and denominators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorConfig {
    pub trial_bound: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_bound: 1_000_000,
        }
    }
}

/// Prime factorization by trial division. A cofactor left over after
/// trial division is accepted as prime only if it is below `bound²`.
fn factor(n: &BigInt, cfg: &FactorConfig) -> Result<Vec<(BigInt, i64)>> {
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2u32);
    let bound = BigInt::from(cfg.trial_bound);
    while &p * &p <= m && p <= bound {
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2u32) { 1 } else { 2 };
    }
    if m > BigInt::one() {
        if &p * &p <= m {
            return Err(Error::ResourceLimit(format!(
                "cannot certify the factorization of {n} with trial division up to {}",
                cfg.trial_bound
            )));
        }
        out.push((m, 1));
    }
    Ok(out)
}

pub fn rational_relation_lattice(e: &EigenSpec) -> Result<RelationLattice> {
    rational_relation_lattice_with(e, &FactorConfig::default())
}

/// Lattice of multiplicative relations: the integer kernel of the
/// prime-exponent matrix, cut down to the index-≤2 sublattice where the
/// sign product is `+1`.
pub fn rational_relation_lattice_with(e: &EigenSpec, cfg: &FactorConfig) -> Result<RelationLattice> {
    let n = e.values.len();
    let mut primes: Vec<BigInt> = Vec::new();
    let mut columns: Vec<Vec<(BigInt, i64)>> = Vec::with_capacity(n);
    for v in &e.values {
        let mut col = factor(v.numer(), cfg)?;
        for (p, k) in factor(v.denom(), cfg)? {
            col.push((p, -k));
        }
        for (p, _) in &col {
            if !primes.contains(p) {
                primes.push(p.clone());
            }
        }
        columns.push(col);
    }
    primes.sort();
    let rows: Vec<Vec<BigInt>> = primes
        .iter()
        .map(|p| {
            columns
                .iter()
                .map(|col| {
                    BigInt::from(col.iter().filter(|(q, _)| q == p).map(|(_, k)| *k).sum::<i64>())
                })
                .collect()
        })
        .collect();
    let exps = IntMatrix::from_rows(n, rows);
    let kernel = integer_kernel(&exps);

    // sign condition: Σ k_i [λ_i < 0] even
    let negative: Vec<bool> = e.values.iter().map(Signed::is_negative).collect();
    let parity = |row: &[BigInt]| -> bool {
        row.iter()
            .zip(&negative)
            .filter(|(_, &neg)| neg)
            .fold(BigInt::zero(), |acc, (k, _)| acc + k)
            .is_odd()
    };
    let mut rows = kernel.row_vectors();
    if let Some(first_odd) = rows.iter().position(|r| parity(r)) {
        let pivot = rows[first_odd].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i == first_odd {
                *r = r.iter().map(|v| v * 2).collect();
            } else if parity(r) {
                *r = r.iter().zip(&pivot).map(|(a, b)| a - b).collect();
            }
        }
    }
    let basis = crate::arith::hermite_normal_form(&IntMatrix::from_rows(n, rows)).0;
    let basis = IntMatrix::from_rows(
        n,
        basis
            .row_vectors()
            .into_iter()
            .filter(|r| r.iter().any(|v| !v.is_zero()))
            .collect(),
    );
    Ok(RelationLattice { n, basis })
}

/// `x^{k⁺} − x^{k⁻}` for every basis row `k`; the empty lattice gives the
/// zero ideal.
pub fn lattice_to_binomial_ideal(l: &RelationLattice) -> Ideal {
    let n = l.n;
    let gens = l
        .basis
        .row_vectors()
        .iter()
        .map(|k| binomial(n, k, 0))
        .collect();
    Ideal::new(n, gens)
}

/// Binomial for relation `k` placed on variables `offset..offset+len(k)`
/// of a ring with `arity` variables.
pub(crate) fn binomial(arity: usize, k: &[BigInt], offset: usize) -> Poly {
    let mut pos = vec![0u32; arity];
    let mut neg = vec![0u32; arity];
    for (i, v) in k.iter().enumerate() {
        let e = v.abs().to_u32().expect("relation exponent overflow");
        if v.is_positive() {
            pos[offset + i] = e;
        } else {
            neg[offset + i] = e;
        }
    }
    Poly::from_terms(
        arity,
        [
            (Monomial(pos), Rational::one()),
            (Monomial(neg), -Rational::one()),
        ],
    )
}

/// Largest binomial degree `max(|k⁺|, |k⁻|)` over the basis.
pub fn binomial_degree(l: &RelationLattice) -> u32 {
    l.basis
        .row_vectors()
        .iter()
        .map(|k| {
            let pos: BigInt = k.iter().filter(|v| v.is_positive()).sum();
            let neg: BigInt = k.iter().filter(|v| v.is_negative()).map(|v| -v).sum();
            pos.max(neg).to_u32().unwrap_or(u32::MAX)
        })
        .max()
        .unwrap_or(0)
}

/// Ceiling of the bound on generator entries of the relation lattice of `n`
/// algebraic numbers of height `≤ h` in a field of degree `≤ D`:
/// `(c n log h)^{n−1} D^{n−1} (log(D+2))^{3n−3} / (log log(D+2))^{3n−4}`,
/// with natural logarithms enclosed at `precision` fractional bits.
/// The case `n = 1` is taken as 1.
pub fn masser_box_bound(n: u32, h: &BigInt, d: &BigInt, c: &Rational, precision: u32) -> Result<TowerNumber> {
    if n == 0 || *h < BigInt::from(2) || *d < BigInt::one() || !c.is_positive() {
        return Err(Error::InvalidArgument(
            "masser bound needs n >= 1, h >= 2, D >= 1, c > 0".into(),
        ));
    }
    if n == 1 {
        return Ok(TowerNumber::one());
    }
    let p = precision;
    let ln_h = ln_bounds(&Rational::from_integer(h.clone()), p);
    let d2 = Rational::from_integer(d + 2);
    let ln_d2 = ln_bounds(&d2, p);
    let lnln_d2 = ln_d2.ln(p);
    let cn = Interval::point(c * Rational::from_integer(BigInt::from(n)));
    let dd = Interval::point(Rational::from_integer(d.clone()));
    let value = cn
        .mul(&ln_h)
        .powi(n - 1)
        .mul(&dd.powi(n - 1))
        .mul(&ln_d2.powi(3 * n - 3))
        .div(&lnln_d2.powi(3 * n - 4));
    Ok(TowerNumber::from(value.ceil_hi()))
}

/// Exponent vectors and the values they were computed from, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub eigenvalues: Vec<String>,
    pub basis: Vec<Vec<String>>,
    pub binomials: Vec<String>,
}

impl RelationReport {
    pub fn new(e: &EigenSpec, l: &RelationLattice) -> Self {
        let names: Vec<String> = (1..=l.n).map(|i| format!("x{i}")).collect();
        RelationReport {
            eigenvalues: e.values.iter().map(format_rational).collect(),
            basis: l
                .basis
                .row_vectors()
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
            binomials: lattice_to_binomial_ideal(l)
                .generators()
                .iter()
                .map(|g| crate::polynomials::poly_to_text(g, &names))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::polynomials::parse_poly;

    fn lattice(vals: Vec<Rational>) -> Vec<Vec<i64>> {
        rational_relation_lattice(&EigenSpec::new(vals).unwrap())
            .unwrap()
            .basis_i64()
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(lattice(vec![int(32), rat(1, 2)]), vec![vec![1, 5]]);
        assert!(lattice(vec![int(2), int(3)]).is_empty());
        assert_eq!(lattice(vec![int(4), int(8)]), vec![vec![3, -2]]);
        assert_eq!(lattice(vec![int(-1)]), vec![vec![2]]);
        assert_eq!(lattice(vec![int(2), int(-1)]), vec![vec![0, 2]]);
        assert_eq!(lattice(vec![int(1), int(1)]), vec![vec![1, 0], vec![0, 1]]);
        // (-2)^k (2)^l = 1 needs k = -l and k even
        assert_eq!(lattice(vec![int(-2), int(2)]), vec![vec![2, -2]]);
    }

    #[test]
    fn zero_eigenvalue_rejected() {
        assert!(EigenSpec::new(vec![int(0)]).is_err());
    }

    #[test]
    fn binomial_examples() {
        let names = ["x1", "x2"];
        let l = rational_relation_lattice(&EigenSpec::new(vec![int(32), rat(1, 2)]).unwrap()).unwrap();
        let i = lattice_to_binomial_ideal(&l);
        assert_eq!(i.generators(), &[parse_poly("x1*x2^5 - 1", &names).unwrap()]);
        assert_eq!(binomial_degree(&l), 6);
        let l = rational_relation_lattice(&EigenSpec::new(vec![int(2), int(3)]).unwrap()).unwrap();
        assert!(lattice_to_binomial_ideal(&l).is_zero());
        let l = rational_relation_lattice(&EigenSpec::new(vec![int(4), int(8)]).unwrap()).unwrap();
        assert_eq!(
            lattice_to_binomial_ideal(&l).generators(),
            &[parse_poly("x1^3 - x2^2", &names).unwrap()]
        );
    }

    #[test]
    fn eigenvalues_of_matrices() {
        let g = QMatrix::from_i64(&[&[5, -6], &[3, -4]]);
        assert_eq!(EigenSpec::of_matrix(&g).unwrap().values(), &[int(-1), int(2)]);
        let rot = QMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        assert!(matches!(
            EigenSpec::of_matrix(&rot),
            Err(Error::UnsupportedEigenvalues(_))
        ));
    }

    #[test]
    fn masser_examples() {
        let one = int(1);
        assert_eq!(masser_box_bound(1, &BigInt::from(5), &BigInt::from(3), &one, 64).unwrap(), TowerNumber::one());
        // 2·ln2·2·(ln 4)^3/(ln ln 4)^2 = 69.235…, evaluated independently with mpmath
        assert_eq!(
            masser_box_bound(2, &BigInt::from(2), &BigInt::from(2), &one, 64).unwrap(),
            TowerNumber::from(BigInt::from(70))
        );
        let lo = masser_box_bound(2, &BigInt::from(4), &BigInt::from(2), &one, 64).unwrap();
        let hi = masser_box_bound(2, &BigInt::from(16), &BigInt::from(2), &one, 64).unwrap();
        assert!(lo <= hi);
    }

    /// Brute-force saturation and soundness over small exponent boxes.
    #[test]
    fn lattice_matches_brute_force() {
        let samples: Vec<Vec<Rational>> = vec![
            vec![int(2), rat(1, 4), int(8)],
            vec![int(-1), int(-1), int(3)],
            vec![rat(3, 2), rat(2, 3), rat(9, 4)],
            vec![int(-8), rat(1, 2), int(1)],
            vec![int(6), rat(-1, 6)],
            vec![rat(4, 7), int(7), int(-4)],
        ];
        for vals in samples {
            let spec = EigenSpec::new(vals.clone()).unwrap();
            let l = rational_relation_lattice(&spec).unwrap();
            let ideal = lattice_to_binomial_ideal(&l);
            // soundness on powers
            for t in -3i32..=3 {
                let point: Vec<Rational> = vals
                    .iter()
                    .map(|v| {
                        if t >= 0 {
                            num_traits::pow(v.clone(), t as usize)
                        } else {
                            num_traits::pow(v.recip(), (-t) as usize)
                        }
                    })
                    .collect();
                assert!(ideal.vanishes_at(&point), "{vals:?} at t={t}");
            }
            // saturation: every small relation lies in the lattice
            let n = vals.len();
            let box_vectors = all_vectors(n, 6);
            for k in box_vectors {
                let prod = k.iter().zip(&vals).fold(Rational::one(), |acc, (e, v)| {
                    acc * if *e >= 0 {
                        num_traits::pow(v.clone(), *e as usize)
                    } else {
                        num_traits::pow(v.recip(), (-*e) as usize)
                    }
                });
                if prod.is_one() {
                    assert!(in_span(&l, &k), "{k:?} missing for {vals:?}");
                }
            }
        }
    }

    fn all_vectors(n: usize, r: i64) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (-r..=r).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn in_span(l: &RelationLattice, k: &[i64]) -> bool {
        let mut rows = l.basis().row_vectors();
        rows.push(k.iter().map(|&v| BigInt::from(v)).collect());
        let with = crate::arith::hermite_normal_form(&IntMatrix::from_rows(l.dim(), rows)).0;
        let without = crate::arith::hermite_normal_form(l.basis()).0;
        let strip = |m: &IntMatrix| {
            m.row_vectors()
                .into_iter()
                .filter(|r| r.iter().any(|v| !v.is_zero()))
                .collect::<Vec<_>>()
        };
        strip(&with) == strip(&without)
    }
}
