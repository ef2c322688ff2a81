//! Group-level checks on closure ideals: subgroup tests, soundness sampling,
//! iterative deepening and Schreier-style generator filtering.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::engine::{invariants_up_to_degree_with, Certificate, ClosureConfig, ClosureResult};
use super::special::poly_det;
use super::{gl_embed, GeneratorSet};
use crate::arith::QMatrix;
use crate::error::{Error, Result};
use crate::par;
use crate::polynomials::{GbConfig, Ideal, MonomialOrder, Poly};
use crate::polynomials::normal_form;

/// Random words over `with_inverses`, lengths uniform in `0..=max_len`.
pub fn random_words(s: &GeneratorSet, count: usize, max_len: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = s.with_inverses().len();
    (0..count)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            (0..len).map(|_| rng.gen_range(0..k)).collect()
        })
        .collect()
}

/// Evaluates every generator of `ideal` at `count` random words of length
/// `≤ max_len`; fails with `Unsound` naming the first offending word.
pub fn check_soundness(
    ideal: &Ideal,
    s: &GeneratorSet,
    count: usize,
    max_len: usize,
    seed: u64,
) -> Result<()> {
    let words = random_words(s, count, max_len, seed);
    let bad = par::map(&words, |w| {
        let p = gl_embed(&s.word_matrix(w)).expect("words over invertible matrices");
        !ideal.vanishes_at(p.coords())
    });
    match words.iter().zip(bad).find(|(_, b)| *b) {
        Some((w, _)) => Err(Error::Unsound(format!("ideal fails at word {w:?}"))),
        None => Ok(()),
    }
}

fn var(m: usize, i: usize) -> Poly {
    Poly::var(m, i)
}

/// Generic matrix coordinates with the `GL` relation `det·y − 1`, placed at
/// variables `offset..offset+n²+1` of a ring with `arity` variables.
fn gl_relation(n: usize, arity: usize, offset: usize) -> Poly {
    let entries: Vec<Poly> = (0..n * n).map(|i| var(arity, offset + i)).collect();
    let det = poly_det(&entries, n);
    &(&det * &var(arity, offset + n * n)) - &Poly::one(arity)
}

pub fn is_group_variety(i: &Ideal, n: usize) -> Result<bool> {
    is_group_variety_with(i, n, &GbConfig::default())
}

/// Decides (conservatively) whether `V(I) ∩ GL_n` is a subgroup: contains
/// the identity, and every generator composed with the product map and the
/// inverse map lies in the corresponding ideal. A `true` answer is always
/// correct; `false` may also mean the ideal is not radical.
pub fn is_group_variety_with(i: &Ideal, n: usize, cfg: &GbConfig) -> Result<bool> {
    let m = n * n + 1;
    if i.arity() != m {
        return Err(Error::DimensionMismatch(format!(
            "ideal has {} variables, GL_{n} needs {m}",
            i.arity()
        )));
    }
    let id = gl_embed(&QMatrix::identity(n))?;
    if !i.vanishes_at(id.coords()) {
        return Ok(false);
    }
    if i.is_zero() {
        return Ok(true);
    }

    // products: ring [X (m), Y (m)]
    let a2 = 2 * m;
    let mut gens: Vec<Poly> = Vec::new();
    for f in i.generators() {
        gens.push(f.embed(a2, 0));
        gens.push(f.embed(a2, m));
    }
    gens.push(gl_relation(n, a2, 0));
    gens.push(gl_relation(n, a2, m));
    let gb = Ideal::new(a2, gens).groebner_with(MonomialOrder::Grevlex, cfg)?;
    let mut prod: Vec<Poly> = (0..n * n)
        .map(|ij| {
            let (r, c) = (ij / n, ij % n);
            (0..n).fold(Poly::zero(a2), |acc, k| {
                &acc + &(&var(a2, r * n + k) * &var(a2, m + k * n + c))
            })
        })
        .collect();
    prod.push(&var(a2, m - 1) * &var(a2, 2 * m - 1));
    for f in i.generators() {
        if !normal_form(&f.compose(&prod), &gb, MonomialOrder::Grevlex).is_zero() {
            return Ok(false);
        }
    }

    // inverses: X⁻¹ = y · adj(X), y(X⁻¹) = det X
    let mut gens: Vec<Poly> = i.generators().to_vec();
    gens.push(gl_relation(n, m, 0));
    let gb = Ideal::new(m, gens).groebner_with(MonomialOrder::Grevlex, cfg)?;
    let entries: Vec<Poly> = (0..n * n).map(|k| var(m, k)).collect();
    let y = var(m, m - 1);
    let mut inv = vec![Poly::zero(m); m];
    for r in 0..n {
        for c in 0..n {
            // adj(X)_{rc} = (−1)^{r+c} · minor_{cr}
            let minor: Vec<Poly> = (0..n)
                .filter(|&a| a != c)
                .flat_map(|a| (0..n).filter(move |&b| b != r).map(move |b| (a, b)))
                .map(|(a, b)| entries[a * n + b].clone())
                .collect();
            let cof = poly_det(&minor, n - 1);
            let cof = if (r + c) % 2 == 0 { cof } else { -&cof };
            inv[r * n + c] = &y * &cof;
        }
    }
    inv[m - 1] = poly_det(&entries, n);
    for f in i.generators() {
        if !normal_form(&f.compose(&inv), &gb, MonomialOrder::Grevlex).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AutoConfig {
    pub closure: ClosureConfig,
    /// Random words used for the final soundness check.
    pub soundness_words: usize,
    pub soundness_max_len: usize,
    pub seed: u64,
}

impl Default for AutoConfig {
    fn default() -> Self {
        AutoConfig {
            closure: ClosureConfig::default(),
            soundness_words: 100,
            soundness_max_len: 12,
            seed: 0x5eed,
        }
    }
}

pub fn auto_closure(s: &GeneratorSet, max_d: u32) -> Result<ClosureResult> {
    auto_closure_with(s, max_d, &AutoConfig::default())
}

/// Raises the degree until two consecutive truncations generate the same
/// ideal and that ideal defines a subgroup. The answer is labelled
/// heuristic: stabilization does not prove completeness.
pub fn auto_closure_with(s: &GeneratorSet, max_d: u32, cfg: &AutoConfig) -> Result<ClosureResult> {
    if max_d == 0 {
        return Err(Error::InvalidArgument("max degree must be at least 1".into()));
    }
    let ccfg = ClosureConfig {
        degree_complete: false,
        ..cfg.closure
    };
    let gb = &cfg.closure.gb;
    let mut cur = invariants_up_to_degree_with(s, 1, &ccfg)?;
    for d in 1..=max_d {
        let next = invariants_up_to_degree_with(s, d + 1, &ccfg)?;
        let cur_gb = cur.ideal.groebner_with(MonomialOrder::Grevlex, gb)?;
        let next_gb = next.ideal.groebner_with(MonomialOrder::Grevlex, gb)?;
        if cur_gb == next_gb && is_group_variety_with(&cur.ideal, s.n(), gb)? {
            check_soundness(&cur.ideal, s, cfg.soundness_words, cfg.soundness_max_len, cfg.seed)?;
            cur.certified = Certificate::HeuristicStable;
            return Ok(cur);
        }
        cur = next;
    }
    Err(Error::NoStabilization { max_degree: max_d })
}

/// All elements of the finite group generated by `gens`, identity first,
/// in breadth-first order. Fails once more than `max_order` are found.
pub fn finite_group_elements(gens: &[QMatrix], n: usize, max_order: usize) -> Result<Vec<QMatrix>> {
    let id = QMatrix::identity(n);
    let mut seen: HashSet<QMatrix> = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut k = 0;
    while k < out.len() {
        let cur = out[k].clone();
        k += 1;
        for g in gens {
            let next = g * &cur;
            if seen.insert(next.clone()) {
                if out.len() >= max_order {
                    return Err(Error::ResourceLimit(format!(
                        "group has more than {max_order} elements"
                    )));
                }
                out.push(next);
            }
        }
    }
    Ok(out)
}

/// The products of at most `length_cap` elements of `S ∪ S⁻¹` (default
/// `2·index_bound + 1`) that satisfy `member`, deduplicated, in
/// breadth-first order. The identity is the empty product.
pub fn schreier_generators<F>(
    s: &GeneratorSet,
    member: F,
    index_bound: usize,
    length_cap: Option<usize>,
    max_products: usize,
) -> Result<Vec<QMatrix>>
where
    F: Fn(&QMatrix) -> bool + Sync + Send,
{
    let cap = length_cap.unwrap_or(2 * index_bound + 1);
    let id = QMatrix::identity(s.n());
    let mut seen: HashSet<QMatrix> = HashSet::from([id.clone()]);
    let mut all = vec![id];
    let mut layer = all.clone();
    for _ in 0..cap {
        let mut next = Vec::new();
        for w in &layer {
            for g in s.with_inverses() {
                let p = w * g;
                if seen.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        if all.len() + next.len() > max_products {
            return Err(Error::ResourceLimit(format!(
                "more than {max_products} distinct products"
            )));
        }
        if next.is_empty() {
            break;
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    let keep = par::map(&all, &member);
    Ok(all.into_iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| g).collect())
}
