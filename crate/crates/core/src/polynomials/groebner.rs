//! Buchberger's algorithm with Gebauer–Möller pair pruning.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::monomial::{Monomial, MonomialOrder};
use super::poly::Poly;
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Budget for a single Gröbner basis computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GbConfig {
    /// Maximum number of S-pairs reduced.
    pub max_pairs: usize,
    /// Maximum total degree of any intermediate basis element.
    pub max_degree: u32,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            max_pairs: 50_000,
            max_degree: 60,
        }
    }
}

/// Polynomial with terms sorted descending under a fixed order.
#[derive(Clone, Debug)]
struct OPoly {
    terms: Vec<(Monomial, Rational)>,
}

impl OPoly {
    fn from_poly(p: &Poly, ord: MonomialOrder) -> Self {
        let mut terms = p.terms().to_vec();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        OPoly { terms }
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &Rational {
        &self.terms[0].1
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    fn make_monic(&mut self) {
        if let Some((_, c)) = self.terms.first() {
            if !c.is_one() {
                let inv = c.recip();
                for (_, v) in &mut self.terms {
                    *v *= &inv;
                }
            }
        }
    }

    /// `self - c · m · g`, merging sorted term lists.
    fn sub_scaled(&self, c: &Rational, m: &Monomial, g: &OPoly, ord: MonomialOrder) -> OPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut gi = g.terms.iter().map(|(t, v)| (t.mul(m), v * c)).peekable();
        while i < self.terms.len() || gi.peek().is_some() {
            let pick = match (self.terms.get(i), gi.peek()) {
                (Some(a), Some(b)) => ord.cmp(&a.0, &b.0),
                (Some(_), None) => Ordering::Greater,
                (None, _) => Ordering::Less,
            };
            match pick {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (t, v) = gi.next().unwrap();
                    out.push((t, -v));
                }
                Ordering::Equal => {
                    let (t, v) = gi.next().unwrap();
                    let s = &self.terms[i].1 - v;
                    if !s.is_zero() {
                        out.push((t, s));
                    }
                    i += 1;
                }
            }
        }
        OPoly { terms: out }
    }

    fn to_poly(&self, arity: usize) -> Poly {
        Poly::from_terms(arity, self.terms.iter().cloned())
    }
}

/// Full reduction of `f` modulo `basis`; the result has no term divisible
/// by a leading monomial of `basis`.
fn reduce(f: &OPoly, basis: &[&OPoly], ord: MonomialOrder) -> OPoly {
    let mut p = f.clone();
    let mut rem: Vec<(Monomial, Rational)> = Vec::new();
    while !p.is_zero() {
        let (lm, lc) = (p.lm().clone(), p.lc().clone());
        match basis.iter().find(|g| g.lm().divides(&lm)) {
            Some(g) => {
                let q = g.lm().quotient_of(&lm);
                let c = &lc / g.lc();
                p = p.sub_scaled(&c, &q, g, ord);
            }
            None => {
                rem.push(p.terms.remove(0));
            }
        }
    }
    OPoly { terms: rem }
}

fn s_poly(f: &OPoly, g: &OPoly, ord: MonomialOrder) -> OPoly {
    let l = f.lm().lcm(g.lm());
    let mf = f.lm().quotient_of(&l);
    let mg = g.lm().quotient_of(&l);
    let scaled_f = OPoly {
        terms: f
            .terms
            .iter()
            .map(|(t, v)| (t.mul(&mf), v / f.lc()))
            .collect(),
    };
    scaled_f.sub_scaled(&g.lc().recip(), &mg, g, ord)
}

/// Remainder of `f` on division by `g` under `ord`.
pub fn normal_form(f: &Poly, g: &[Poly], ord: MonomialOrder) -> Poly {
    let basis: Vec<OPoly> = g
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| OPoly::from_poly(p, ord))
        .collect();
    let refs: Vec<&OPoly> = basis.iter().collect();
    reduce(&OPoly::from_poly(f, ord), &refs, ord).to_poly(f.arity())
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced Gröbner basis of the ideal generated by `gens`, monic, sorted by
/// descending leading monomial. The zero ideal yields an empty basis.
pub fn groebner_basis(gens: &[Poly], ord: MonomialOrder, cfg: &GbConfig) -> Result<Vec<Poly>> {
    let arity = match gens.first() {
        Some(p) => p.arity(),
        None => return Ok(Vec::new()),
    };
    let mut polys: Vec<OPoly> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    // Inter-reduce the input first so the starting set is small.
    let mut input: Vec<OPoly> = gens
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| OPoly::from_poly(p, ord))
        .collect();
    input.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    for f in input {
        let refs: Vec<&OPoly> = polys
            .iter()
            .zip(&active)
            .filter(|(_, &a)| a)
            .map(|(p, _)| p)
            .collect();
        let mut h = reduce(&f, &refs, ord);
        if h.is_zero() {
            continue;
        }
        h.make_monic();
        if h.lm().is_one() {
            return Ok(vec![Poly::one(arity)]);
        }
        insert(&mut polys, &mut active, &mut pairs, h);
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        // normal selection strategy: smallest lcm first, then by index
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                ord.cmp(&pairs[a].lcm, &pairs[b].lcm)
                    .then((pairs[a].i, pairs[a].j).cmp(&(pairs[b].i, pairs[b].j)))
            })
            .unwrap();
        let pair = pairs.swap_remove(best);
        processed += 1;
        if processed > cfg.max_pairs {
            return Err(Error::ResourceLimit(format!(
                "Gröbner basis exceeded {} S-pairs",
                cfg.max_pairs
            )));
        }
        let s = s_poly(&polys[pair.i], &polys[pair.j], ord);
        let refs: Vec<&OPoly> = polys
            .iter()
            .zip(&active)
            .filter(|(_, &a)| a)
            .map(|(p, _)| p)
            .collect();
        let mut h = reduce(&s, &refs, ord);
        if h.is_zero() {
            continue;
        }
        if h.degree() > cfg.max_degree {
            return Err(Error::ResourceLimit(format!(
                "Gröbner basis element of degree {} exceeds {}",
                h.degree(),
                cfg.max_degree
            )));
        }
        h.make_monic();
        if h.lm().is_one() {
            return Ok(vec![Poly::one(arity)]);
        }
        insert(&mut polys, &mut active, &mut pairs, h);
    }

    // Minimal basis, then full inter-reduction.
    let mut minimal: Vec<OPoly> = polys
        .into_iter()
        .zip(active)
        .filter(|(_, a)| *a)
        .map(|(p, _)| p)
        .collect();
    minimal.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    let mut keep: Vec<OPoly> = Vec::new();
    for p in minimal {
        if !keep.iter().any(|q| q.lm().divides(p.lm())) {
            keep.push(p);
        }
    }
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<&OPoly> = keep
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p)
            .collect();
        let head = OPoly {
            terms: vec![keep[i].terms[0].clone()],
        };
        let tail = OPoly {
            terms: keep[i].terms[1..].to_vec(),
        };
        let mut r = reduce(&tail, &others, ord);
        r.terms.insert(0, head.terms[0].clone());
        r.make_monic();
        reduced.push(r);
    }
    reduced.sort_by(|a, b| ord.cmp(b.lm(), a.lm()));
    Ok(reduced.iter().map(|p| p.to_poly(arity)).collect())
}

/// Gebauer–Möller update: adds `h` and prunes redundant pairs.
fn insert(polys: &mut Vec<OPoly>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>, h: OPoly) {
    let hi = polys.len();
    let hlm = h.lm().clone();

    let candidates: Vec<(usize, Monomial)> = (0..polys.len())
        .filter(|&g| active[g])
        .map(|g| (g, hlm.lcm(polys[g].lm())))
        .collect();

    // Chain criterion among the new pairs.
    let mut kept: Vec<(usize, Monomial)> = Vec::new();
    for (idx, (g, l)) in candidates.iter().enumerate() {
        let coprime = hlm.coprime(polys[*g].lm());
        let dominated_later = candidates[idx + 1..].iter().any(|(_, l2)| l2.divides(l));
        let dominated_kept = kept.iter().any(|(_, l2)| l2.divides(l));
        if coprime || (!dominated_later && !dominated_kept) {
            kept.push((*g, l.clone()));
        }
    }
    // Product criterion.
    let new_pairs: Vec<Pair> = kept
        .into_iter()
        .filter(|(g, _)| !hlm.coprime(polys[*g].lm()))
        .map(|(g, lcm)| Pair { i: g, j: hi, lcm })
        .collect();

    // Prune old pairs whose lcm is divisible by lm(h) strictly.
    pairs.retain(|p| {
        if !hlm.divides(&p.lcm) {
            return true;
        }
        let li = polys[p.i].lm().lcm(&hlm);
        let lj = polys[p.j].lm().lcm(&hlm);
        li == p.lcm || lj == p.lcm
    });
    pairs.extend(new_pairs);

    for g in 0..polys.len() {
        if active[g] && hlm.divides(polys[g].lm()) {
            active[g] = false;
        }
    }
    polys.push(h);
    active.push(true);
}

/// True when every S-polynomial of `basis` reduces to zero modulo `basis`.
pub fn satisfies_buchberger_criterion(basis: &[Poly], ord: MonomialOrder) -> bool {
    let ops: Vec<OPoly> = basis.iter().map(|p| OPoly::from_poly(p, ord)).collect();
    let refs: Vec<&OPoly> = ops.iter().collect();
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if !reduce(&s_poly(&ops[i], &ops[j], ord), &refs, ord).is_zero() {
                return false;
            }
        }
    }
    true
}
