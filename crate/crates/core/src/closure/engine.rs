use std::collections::VecDeque;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{gl_embed, GLPoint, GeneratorSet, MonomialBasis};
use crate::arith::kernel_vectors;
use crate::arith::{QMatrix, Rational};
use crate::error::{Error, Result};
use crate::par;
use crate::polynomials::{gl_variable_names, GbConfig, Ideal, IdealJson, MonomialOrder, Poly};

/// How much trust a closure result deserves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// The caller asserted that the degree dominates the closure degree, so
    /// the ideal cuts out the closure exactly.
    DegreeComplete,
    /// The ideal is the exact degree-`d` truncation; whether it cuts out
    /// the closure is not certified.
    HeuristicStable,
}

impl Certificate {
    pub fn label(self) -> &'static str {
        match self {
            Certificate::DegreeComplete => "degree-complete",
            Certificate::HeuristicStable => "heuristic-stable",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureConfig {
    /// Refuse to work with more monomials than this.
    pub max_monomials: usize,
    /// Budget for the Gröbner computations on the result.
    pub gb: GbConfig,
    /// The caller vouches that the degree bounds the closure degree.
    pub degree_complete: bool,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig {
            max_monomials: 1000,
            gb: GbConfig::default(),
            degree_complete: false,
        }
    }
}

/// A group element whose lift entered the span, with the word over
/// `with_inverses` that produced it (applied right to left).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub word: Vec<usize>,
    pub point: GLPoint,
}

#[derive(Clone, Debug)]
pub struct ClosureResult {
    n: usize,
    basis: MonomialBasis,
    /// Kernel basis: every polynomial of degree `≤ d` vanishing on the group
    /// is a unique combination of these.
    pub ideal: Ideal,
    pub degree_used: u32,
    pub certified: Certificate,
    pub witnesses: Vec<Witness>,
    span: Vec<Vec<Rational>>,
}

impl ClosureResult {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn span_dimension(&self) -> usize {
        self.span.len()
    }

    pub fn monomial_count(&self) -> usize {
        self.basis.len()
    }

    /// Lifted witness points, one row per witness.
    pub fn span_vectors(&self) -> &[Vec<Rational>] {
        &self.span
    }

    pub fn monomial_basis(&self) -> &MonomialBasis {
        &self.basis
    }

    /// Reduced grevlex basis of the ideal.
    pub fn reduced_basis(&self, cfg: &GbConfig) -> Result<Vec<Poly>> {
        self.ideal.groebner_with(MonomialOrder::Grevlex, cfg)
    }

    /// Basis of the kernel polynomials involving only the variables in
    /// `vars` (the constant monomial is always allowed).
    pub fn kernel_in_vars(&self, vars: &[usize]) -> Vec<Poly> {
        let cols: Vec<usize> = (0..self.basis.len())
            .filter(|&k| {
                self.basis.monomials()[k]
                    .0
                    .iter()
                    .enumerate()
                    .all(|(v, &e)| e == 0 || vars.contains(&v))
            })
            .collect();
        let sub: Vec<Vec<Rational>> = self
            .span
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        kernel_polys(&self.basis, &sub, &cols)
    }

    /// Smallest total degree of a nonzero kernel polynomial in `vars`.
    pub fn min_degree_in_vars(&self, vars: &[usize]) -> Option<u32> {
        self.kernel_in_vars(vars)
            .iter()
            .filter_map(Poly::total_degree)
            .min()
    }

    pub fn report(&self, gb: &GbConfig) -> Result<ClosureReport> {
        let names = gl_variable_names(self.n);
        let reduced = Ideal::new(self.ideal.arity(), self.reduced_basis(gb)?);
        let lens: Vec<usize> = self.witnesses.iter().map(|w| w.word.len()).collect();
        Ok(ClosureReport {
            n: self.n,
            degree_used: self.degree_used,
            certificate: self.certified,
            monomial_count: self.monomial_count(),
            span_dimension: self.span_dimension(),
            kernel_dimension: self.ideal.generators().len(),
            witness_count: lens.len(),
            max_word_length: lens.iter().copied().max().unwrap_or(0),
            ideal: IdealJson::from_ideal(&reduced, &names),
        })
    }
}

/// Serializable summary of a closure run; `ideal` holds the reduced basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub n: usize,
    pub degree_used: u32,
    pub certificate: Certificate,
    pub monomial_count: usize,
    pub span_dimension: usize,
    pub kernel_dimension: usize,
    pub witness_count: usize,
    pub max_word_length: usize,
    pub ideal: IdealJson,
}

impl ClosureReport {
    pub fn to_text(&self) -> Result<String> {
        let ideal = self.ideal.to_ideal()?;
        let mut out = String::new();
        let _ = writeln!(out, "n = {}", self.n);
        let _ = writeln!(out, "degree used = {}", self.degree_used);
        let _ = writeln!(out, "certificate = {}", self.certificate.label());
        let _ = writeln!(out, "monomials = {}", self.monomial_count);
        let _ = writeln!(out, "span dimension = {}", self.span_dimension);
        let _ = writeln!(out, "kernel dimension = {}", self.kernel_dimension);
        let _ = writeln!(
            out,
            "witnesses = {} (longest word {})",
            self.witness_count, self.max_word_length
        );
        let _ = writeln!(out, "reduced basis:");
        for g in ideal.generators() {
            let _ = writeln!(
                out,
                "  {}",
                crate::polynomials::poly_to_text(g, &self.ideal.variables)
            );
        }
        Ok(out)
    }
}

pub fn invariants_up_to_degree(s: &GeneratorSet, d: u32) -> Result<ClosureResult> {
    invariants_up_to_degree_with(s, d, &ClosureConfig::default())
}

/// All polynomials of degree `≤ d` vanishing on `⟨S⟩`, by a breadth-first
/// worklist over lifted group elements.
pub fn invariants_up_to_degree_with(
    s: &GeneratorSet,
    d: u32,
    cfg: &ClosureConfig,
) -> Result<ClosureResult> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let m = s.arity();
    let size = crate::polynomials::monomial_count(m, d);
    if size > cfg.max_monomials {
        return Err(Error::ResourceLimit(format!(
            "{size} monomials of degree <= {d} in {m} variables exceeds the cap of {}",
            cfg.max_monomials
        )));
    }
    let basis = MonomialBasis::new(m, d);
    let gens = s.with_inverses();
    let gen_y: Vec<Rational> = gens
        .iter()
        .map(|g| gl_embed(g).map(|p| p.y().clone()))
        .collect::<Result<_>>()?;

    let mut echelon = Echelon::new();
    let mut witnesses = Vec::new();
    let mut span = Vec::new();

    let id = gl_embed(&QMatrix::identity(s.n()))?;
    let v = basis.lift(id.coords());
    echelon.insert(&v);
    span.push(v);
    witnesses.push(Witness {
        word: Vec::new(),
        point: id,
    });

    // One breadth-first level at a time: candidate lifts for the whole
    // frontier are computed and reduced against the span so far in
    // parallel, then inserted in the fixed (witness, generator) order so
    // results do not depend on scheduling.
    let mut frontier: VecDeque<usize> = VecDeque::from([0]);
    while !frontier.is_empty() {
        let jobs: Vec<(usize, usize)> = frontier
            .drain(..)
            .flat_map(|w| (0..gens.len()).map(move |g| (w, g)))
            .collect();
        let known = echelon.len();
        let candidates = par::map(&jobs, |&(w, g)| {
            let p = witnesses[w].point.left_mul(&gens[g], &gen_y[g]);
            let v = basis.lift(p.coords());
            let mut r = v.clone();
            echelon.reduce_from(&mut r, 0);
            (p, v, r)
        });
        for ((w, g), (p, v, r)) in jobs.into_iter().zip(candidates) {
            if echelon.insert_reduced(r, known) {
                let mut word = vec![g];
                word.extend_from_slice(&witnesses[w].word);
                frontier.push_back(witnesses.len());
                witnesses.push(Witness { word, point: p });
                span.push(v);
            }
        }
    }

    let all: Vec<usize> = (0..basis.len()).collect();
    let kernel = kernel_polys(&basis, &span, &all);
    Ok(ClosureResult {
        n: s.n(),
        ideal: Ideal::new(m, kernel),
        degree_used: d,
        certified: if cfg.degree_complete {
            Certificate::DegreeComplete
        } else {
            Certificate::HeuristicStable
        },
        witnesses,
        span,
        basis,
    })
}

/// Kernel of the row space `rows` (whose columns are the basis monomials
/// `cols`), as polynomials. Columns are ordered by ascending grevlex first,
/// so each kernel polynomial leads with its own free monomial and no other
/// kernel polynomial contains it.
fn kernel_polys(basis: &MonomialBasis, rows: &[Vec<Rational>], cols: &[usize]) -> Vec<Poly> {
    let monos = basis.monomials();
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by(|&a, &b| MonomialOrder::Grevlex.cmp(&monos[cols[a]], &monos[cols[b]]));
    let permuted: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| order.iter().map(|&k| r[k].clone()).collect())
        .collect();
    let mat = if permuted.is_empty() {
        QMatrix::zeros(1, order.len())
    } else {
        QMatrix::from_rows(permuted)
    };
    kernel_vectors(&mat)
        .into_iter()
        .map(|v| {
            let mut c = vec![Rational::zero(); basis.len()];
            for (pos, val) in v.into_iter().enumerate() {
                c[cols[order[pos]]] = val;
            }
            basis.to_poly(&c)
        })
        .collect()
}

/// Incremental row echelon form used as an independence oracle.
struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }

    /// Eliminates the pivots of rows `from..` from `v`.
    fn reduce_from(&self, v: &mut [Rational], from: usize) {
        for (p, row) in &self.rows[from..] {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &c * r;
                }
            }
        }
    }

    /// Adds `v` if it is independent of the stored rows; reports whether it
    /// was added. `v` must already be reduced against rows `..from`; every
    /// later row is zero on those pivots, so finishing from `from` is enough.
    fn insert_reduced(&mut self, mut v: Vec<Rational>, from: usize) -> bool {
        self.reduce_from(&mut v, from);
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let inv = Rational::one() / &v[p];
                for x in v.iter_mut() {
                    if !x.is_zero() {
                        *x *= &inv;
                    }
                }
                self.rows.push((p, v));
                true
            }
        }
    }

    fn insert(&mut self, v: &[Rational]) -> bool {
        self.insert_reduced(v.to_vec(), 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::polynomials::parse_poly;

    fn sl2() -> GeneratorSet {
        GeneratorSet::new(
            2,
            vec![
                QMatrix::from_i64(&[&[1, 1], &[0, 1]]),
                QMatrix::from_i64(&[&[1, 0], &[1, 1]]),
            ],
        )
        .unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_poly(s, &gl_variable_names(2)).unwrap()
    }

    #[test]
    fn trivial_group_gives_point_ideal() {
        let s = GeneratorSet::new(2, vec![QMatrix::identity(2)]).unwrap();
        let r = invariants_up_to_degree(&s, 1).unwrap();
        assert_eq!(r.span_dimension(), 1);
        for f in ["x12", "x21", "x11 - 1", "x22 - 1", "y - 1"] {
            assert!(r.ideal.contains(&p(f)).unwrap(), "{f}");
        }
        assert_eq!(r.ideal.generators().len(), 5);
    }

    #[test]
    fn sl2_degree_two() {
        let r = invariants_up_to_degree(&sl2(), 2).unwrap();
        let gb = r.reduced_basis(&GbConfig::default()).unwrap();
        let expected = Ideal::new(5, vec![p("y - 1"), p("x11*x22 - x12*x21 - 1")]);
        assert_eq!(gb, expected.groebner(MonomialOrder::Grevlex).unwrap());
        // every degree ≤ 2 multiple of the two generators and nothing else:
        // y-1 times 6 monomials of degree ≤ 1, plus det - 1
        assert_eq!(r.ideal.generators().len(), 7);
        assert_eq!(r.span_dimension(), 21 - 7);
        // no relation among the matrix entries at degree 1
        let r1 = invariants_up_to_degree(&sl2(), 1).unwrap();
        assert!(r1.kernel_in_vars(&[0, 1, 2, 3]).is_empty());
    }

    #[test]
    fn torus_example() {
        let s = GeneratorSet::new(2, vec![QMatrix::diag(&[int(2), rat(1, 2)])]).unwrap();
        let r = invariants_up_to_degree(&s, 2).unwrap();
        for f in ["x12", "x21", "x11*x22 - 1", "y - x11*x22*y", "y - 1"] {
            assert!(r.ideal.contains(&p(f)).unwrap(), "{f}");
        }
        assert_eq!(r.min_degree_in_vars(&[0, 3]), Some(2));
    }

    #[test]
    fn witnesses_are_words() {
        let s = sl2();
        let r = invariants_up_to_degree(&s, 2).unwrap();
        for w in &r.witnesses {
            assert_eq!(gl_embed(&s.word_matrix(&w.word)).unwrap(), w.point);
            assert!(r.ideal.vanishes_at(w.point.coords()));
        }
    }

    #[test]
    fn degree_zero_and_caps() {
        assert!(invariants_up_to_degree(&sl2(), 0).is_err());
        let cfg = ClosureConfig {
            max_monomials: 10,
            ..ClosureConfig::default()
        };
        assert!(matches!(
            invariants_up_to_degree_with(&sl2(), 2, &cfg),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn report_round_trip() {
        let r = invariants_up_to_degree(&sl2(), 2).unwrap();
        let rep = r.report(&GbConfig::default()).unwrap();
        assert_eq!(rep.certificate, Certificate::HeuristicStable);
        let js = serde_json::to_string(&rep).unwrap();
        assert!(js.contains("heuristic-stable"));
        let back: ClosureReport = serde_json::from_str(&js).unwrap();
        assert_eq!(back, rep);
        let text = rep.to_text().unwrap();
        assert!(text.contains("y - 1"), "{text}");
    }
}
