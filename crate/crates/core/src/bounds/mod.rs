//! Closed-form degree, height and chain-length bounds for Zariski closures
//! of finitely generated rational matrix groups.
//!
//! Every function composes exact integer arithmetic until a value exceeds
//! [`TowerConfig::exact_bits`], after which it keeps a symbolic
//! [`TowerNumber`]. Logarithms are enclosed by rational intervals and the
//! upper endpoint is rounded up, so each reported value is a certified
//! upper bound on the underlying real formula.

mod tower;

pub use tower::{Magnitude, TowerConfig, TowerNumber, DEFAULT_EXACT_BITS};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::arith::interval::{ln_bounds, log2_bounds, Interval};
use crate::arith::{format_rational, Rational};
use crate::error::{Error, Result};

/// Base of the logarithms inside the eigenvalue-relation bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    Two,
    E,
}

impl LogBase {
    fn enclose(self, x: &Rational, precision: u32) -> Interval {
        match self {
            LogBase::Two => log2_bounds(x, precision),
            LogBase::E => ln_bounds(x, precision),
        }
    }
}

/// Parameters shared by the bound calculators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundConfig {
    pub tower: TowerConfig,
    /// Fractional bits of the rational log enclosures.
    pub precision: u32,
    /// The unspecified absolute constant in the eigenvalue-relation bound.
    pub constant: Rational,
    pub log_base: LogBase,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            tower: TowerConfig::default(),
            precision: 64,
            constant: Rational::one(),
            log_base: LogBase::Two,
        }
    }
}

fn t(v: u64) -> TowerNumber {
    TowerNumber::from(v)
}

fn factorial_u64(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Index bound of the identity component: `(2(n²+1)²)!`.
pub fn j_bound(n: u64, cfg: &BoundConfig) -> TowerNumber {
    let c = &cfg.tower;
    let m = t(n * n + 1);
    m.pow_u64(2, c).mul_u64(2, c).factorial(c)
}

/// Degree bound for the group generated by unipotents: `(n³+1)^{2^{3n²}}`.
pub fn d_unipotent(n: u64, cfg: &BoundConfig) -> TowerNumber {
    let c = &cfg.tower;
    let exp = t(2).pow_u64(3 * n * n, c);
    t(n * n * n + 1).pow(&exp, c)
}

/// `J'(n) = (2[(n²+D)^{4D²}+1]²)!` with `D = d_unipotent(n)`.
pub fn jprime(n: u64, cfg: &BoundConfig) -> TowerNumber {
    let c = &cfg.tower;
    let d = d_unipotent(n, cfg);
    let base = d.add_u64(n * n, c);
    let exp = d.pow_u64(2, c).mul_u64(4, c);
    base.pow(&exp, c)
        .add_u64(1, c)
        .pow_u64(2, c)
        .mul_u64(2, c)
        .factorial(c)
}

/// Degree bound for elimination ideals: `(d+1)^{2^{n_vars}}`.
pub fn dube_bound(d: u64, n_vars: u64, cfg: &BoundConfig) -> TowerNumber {
    let c = &cfg.tower;
    t(d + 1).pow(&t(2).pow_u64(n_vars, c), c)
}

fn dube_bound_t(d: &TowerNumber, n_vars: &TowerNumber, cfg: &BoundConfig) -> TowerNumber {
    let c = &cfg.tower;
    d.add_u64(1, c).pow(&t(2).pow(n_vars, c), c)
}

/// Dimension bound and map degree of the quotient by a `d`-bounded normal
/// subgroup: `((n²+d)^{2d²}, d·(n²+d)^{2d²+1})`.
pub fn feng_quotient(n: u64, d: u64, cfg: &BoundConfig) -> (TowerNumber, TowerNumber) {
    feng_quotient_t(n, &t(d), cfg)
}

fn feng_quotient_t(n: u64, d: &TowerNumber, cfg: &BoundConfig) -> (TowerNumber, TowerNumber) {
    let c = &cfg.tower;
    let base = d.add_u64(n * n, c);
    let e = d.pow_u64(2, c).mul_u64(2, c);
    let p = base.pow(&e, c);
    let deg = d.mul(&base.pow(&e.add_u64(1, c), c), c);
    (p, deg)
}

/// `log_base(h) <= q · multiplier`, with `q` rational and `multiplier` an
/// integer (omitted when one).
fn log_upper(h: &TowerNumber, cfg: &BoundConfig) -> Result<(Rational, Option<TowerNumber>)> {
    if let Some(v) = h.exact() {
        let q = cfg
            .log_base
            .enclose(&Rational::from_integer(v.clone()), cfg.precision)
            .hi;
        return Ok((q, None));
    }
    if let Some((b, e)) = h.as_pow() {
        let (q, m) = log_upper(b, cfg)?;
        let mult = match m {
            Some(m) => m.mul(e, &cfg.tower),
            None => e.clone(),
        };
        return Ok((q, Some(mult)));
    }
    Err(Error::InvalidArgument(format!(
        "no logarithm enclosure for {h}"
    )))
}

/// `f(n, h) = ⌈(c·n⁷·n!·log h)^n⌉`, the bound on relation-lattice
/// generators for eigenvalues of an `n×n` matrix with entry height `h`.
pub fn masser_f(n: u64, h: &TowerNumber, cfg: &BoundConfig) -> Result<TowerNumber> {
    if n == 0 || *h < t(2) || !cfg.constant.is_positive() {
        return Err(Error::InvalidArgument("f(n, h) needs n >= 1, h >= 2, c > 0".into()));
    }
    let c = &cfg.tower;
    let lead = &cfg.constant
        * Rational::from_integer(num_traits::pow(BigInt::from(n), 7) * factorial_u64(n));
    let (q, mult) = log_upper(h, cfg)?;
    match mult {
        None => {
            let v = num_traits::pow(&lead * &q, n as usize);
            Ok(TowerNumber::from(v.ceil().to_integer()))
        }
        Some(m) => {
            // ⌈a·m⌉ ≤ ⌈a⌉·m for integer m ≥ 1
            let a = TowerNumber::from((&lead * &q).ceil().to_integer());
            Ok(a.mul(&m, c).pow_u64(n, c))
        }
    }
}

/// Height of the generators of the identity component:
/// `(h^{n³+n²}·n!·n)^{2J'(n)+1}`.
pub fn schreier_height(n: u64, h: u64, cfg: &BoundConfig) -> TowerNumber {
    let c = &cfg.tower;
    let base = num_traits::pow(BigInt::from(h), (n * n * n + n * n) as usize)
        * factorial_u64(n)
        * BigInt::from(n);
    let exp = jprime(n, cfg).mul_u64(2, c).add_u64(1, c);
    TowerNumber::from(base).pow(&exp, c)
}

/// Largest finite subgroup of `GL_p` over a field of degree `k`: `(2pk)!`.
pub fn finite_subgroup_order_bound(p: u64, field_degree: u64, cfg: &BoundConfig) -> TowerNumber {
    t(2 * p * field_degree).factorial(&cfg.tower)
}

/// Named bound values plus the parameters they were computed from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub params: BTreeMap<String, String>,
    pub bounds: BTreeMap<String, TowerNumber>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn get(&self, name: &str) -> Option<&TowerNumber> {
        self.bounds.get(name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.params {
            out.push_str(&format!("{k} = {v}\n"));
        }
        for (k, v) in &self.bounds {
            let form = if v.is_exact() { "exact" } else { "tower" };
            out.push_str(&format!("{k} [{form}] = {v}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

/// Composed degree bound for `Zcl⟨S⟩` with `S ⊆ GL_n(Q)`, `|S| = s`, entry
/// heights `≤ h`:
///
/// * `j = J(n)`, the index bound of the identity component,
/// * `ell = (2s)^{2J'(n)+1}` generators of the identity component,
/// * `h_prime` their height,
/// * `d = max(n·f(n, h'), D(n))`,
/// * `final = (d+1)^{2^{(ell+2)(n²+1)J'(n)}}`.
pub fn theorem1_bound(n: u64, h: u64, s: u64, cfg: &BoundConfig) -> Result<BoundReport> {
    if n == 0 || h < 2 || s == 0 {
        return Err(Error::InvalidArgument("needs n >= 1, h >= 2, |S| >= 1".into()));
    }
    let c = &cfg.tower;
    let jp = jprime(n, cfg);
    let exp = jp.mul_u64(2, c).add_u64(1, c);
    let ell = t(2 * s).pow(&exp, c);
    let h_prime = schreier_height(n, h, cfg);
    let f = masser_f(n, &h_prime, cfg)?;
    let unipotent = d_unipotent(n, cfg);
    let d = f.mul_u64(n, c).max(unipotent.clone());
    let top = ell.add_u64(2, c).mul_u64(n * n + 1, c).mul(&jp, c);
    let final_bound = dube_bound_t(&d, &top, cfg);

    let mut bounds = BTreeMap::new();
    bounds.insert("j".to_string(), j_bound(n, cfg));
    bounds.insert("jprime".to_string(), jp);
    bounds.insert("ell".to_string(), ell);
    bounds.insert("h_prime".to_string(), h_prime);
    bounds.insert("masser_f".to_string(), f);
    bounds.insert("unipotent_degree".to_string(), unipotent);
    bounds.insert("d".to_string(), d);
    bounds.insert("final".to_string(), final_bound);
    Ok(BoundReport {
        params: params(&[
            ("n", n.to_string()),
            ("height", h.to_string()),
            ("gens", s.to_string()),
            ("constant", format_rational(&cfg.constant)),
            ("log_base", format!("{:?}", cfg.log_base).to_lowercase()),
        ]),
        bounds,
        notes: vec![
            "headline form (log h)^(2^(|S|^(exp^4(poly(n))))) has an unspecified polynomial; only the composed form is evaluated".into(),
        ],
    })
}

/// Bounds on strictly increasing chains of closures of finitely generated
/// subgroups of `GL_n` over a number field of degree `field_degree`.
pub fn chain_bounds(n: u64, field_degree: u64, cfg: &BoundConfig) -> Result<BoundReport> {
    if n == 0 || field_degree == 0 {
        return Err(Error::InvalidArgument("needs n >= 1 and field degree >= 1".into()));
    }
    let c = &cfg.tower;
    let k = field_degree;
    let semisimple = t(n * n + 1)
        .pow_u64(2, c)
        .mul_u64(2 * k, c)
        .factorial(c)
        .mul_u64(n * n, c);
    let d = d_unipotent(n, cfg);
    let (p, _) = feng_quotient_t(n, &d, cfg);
    let p2 = p.pow_u64(2, c);
    let general = p2
        .add_u64(1, c)
        .pow_u64(2, c)
        .mul_u64(2 * k, c)
        .factorial(c)
        .mul(&p2, c)
        .mul_u64(n * n, c);
    let mut bounds = BTreeMap::new();
    bounds.insert("semisimple_chain".to_string(), semisimple);
    bounds.insert("quotient_dimension".to_string(), p);
    bounds.insert("general_chain".to_string(), general);
    Ok(BoundReport {
        params: params(&[("n", n.to_string()), ("field_degree", k.to_string())]),
        bounds,
        notes: Vec::new(),
    })
}

fn params(kv: &[(&str, String)]) -> BTreeMap<String, String> {
    kv.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn cfg() -> BoundConfig {
        BoundConfig::default()
    }

    fn exact(v: &TowerNumber) -> BigInt {
        v.exact().cloned().expect("exact value")
    }

    #[test]
    fn j_examples() {
        assert_eq!(exact(&j_bound(1, &cfg())), BigInt::from(40320));
        assert_eq!(exact(&j_bound(2, &cfg())), factorial_u64(50));
        assert!(j_bound(2, &cfg()) < j_bound(3, &cfg()));
    }

    #[test]
    fn unipotent_examples() {
        assert_eq!(exact(&d_unipotent(1, &cfg())), BigInt::from(256));
        assert_eq!(exact(&d_unipotent(2, &cfg())), num_traits::pow(BigInt::from(9), 4096));
        assert!(!d_unipotent(5, &cfg()).is_exact());
    }

    #[test]
    fn jprime_examples() {
        let j1 = jprime(1, &cfg());
        assert!(j1.is_factorial());
        assert!(j1 > j_bound(1, &cfg()));
        assert!(jprime(2, &cfg()) > j_bound(2, &cfg()));
        assert!(jprime(3, &cfg()) > j_bound(3, &cfg()));
    }

    #[test]
    fn dube_examples() {
        assert_eq!(exact(&dube_bound(2, 3, &cfg())), BigInt::from(6561));
        assert_eq!(exact(&dube_bound(1, 0, &cfg())), BigInt::from(2));
        assert!(dube_bound(2, 3, &cfg()) <= dube_bound(3, 3, &cfg()));
        assert!(dube_bound(2, 3, &cfg()) <= dube_bound(2, 4, &cfg()));
    }

    #[test]
    fn feng_examples() {
        let (p, deg) = feng_quotient(1, 1, &cfg());
        assert_eq!((exact(&p), exact(&deg)), (BigInt::from(4), BigInt::from(8)));
        let (p, deg) = feng_quotient(2, 1, &cfg());
        assert_eq!((exact(&p), exact(&deg)), (BigInt::from(25), BigInt::from(125)));
        for n in 1..4 {
            for d in 1..4 {
                let (p, deg) = feng_quotient(n, d, &cfg());
                assert!(p <= deg);
            }
        }
    }

    #[test]
    fn masser_f_examples() {
        assert_eq!(exact(&masser_f(1, &t(2), &cfg()).unwrap()), BigInt::from(1));
        assert_eq!(exact(&masser_f(2, &t(4), &cfg()).unwrap()), BigInt::from(262144));
        // log2(h)^n growth: doubling the exponent of h multiplies by 2^n
        let a = exact(&masser_f(2, &t(1 << 8), &cfg()).unwrap());
        let b = exact(&masser_f(2, &t(1 << 16), &cfg()).unwrap());
        assert_eq!(b, a * 4);
        assert!(masser_f(2, &t(1), &cfg()).is_err());
        let natural = BoundConfig {
            log_base: LogBase::E,
            ..cfg()
        };
        // 256·ln 4 ≈ 354.89 → ⌈354.89²⌉
        assert_eq!(exact(&masser_f(2, &t(4), &natural).unwrap()), BigInt::from(125_948));
        let c2 = BoundConfig {
            constant: int(2),
            ..cfg()
        };
        assert_eq!(exact(&masser_f(1, &t(2), &c2).unwrap()), BigInt::from(2));
    }

    #[test]
    fn schreier_height_examples() {
        assert_eq!(exact(&schreier_height(1, 1, &cfg())), BigInt::from(1));
        let h = schreier_height(1, 2, &cfg());
        let (base, exp) = h.as_pow().expect("tower form");
        assert_eq!(exact(base), BigInt::from(4));
        let c = &cfg().tower;
        assert_eq!(*exp, jprime(1, &cfg()).mul_u64(2, c).add_u64(1, c));
    }

    #[test]
    fn closure_degree_report_structure() {
        let r = theorem1_bound(1, 2, 1, &cfg()).unwrap();
        assert_eq!(exact(r.get("j").unwrap()), BigInt::from(40320));
        for name in ["jprime", "ell", "h_prime", "d", "final"] {
            assert!(r.get(name).is_some(), "missing {name}");
        }
        let d = r.get("d").unwrap();
        assert!(r.get("final").unwrap() >= &d.add_u64(1, &cfg().tower));
        let r2 = theorem1_bound(1, 4, 1, &cfg()).unwrap();
        assert!(r2.get("final").unwrap() > r.get("final").unwrap());
    }

    #[test]
    fn chain_examples() {
        let r = chain_bounds(1, 1, &cfg()).unwrap();
        assert_eq!(exact(r.get("semisimple_chain").unwrap()), BigInt::from(40320));
        let r = chain_bounds(2, 1, &cfg()).unwrap();
        assert_eq!(exact(r.get("semisimple_chain").unwrap()), factorial_u64(50) * 4);
        assert!(!r.get("general_chain").unwrap().is_exact());
        // field degree 1 reproduces the rational formula
        assert_eq!(
            r.get("semisimple_chain").unwrap(),
            &j_bound(2, &cfg()).mul_u64(4, &cfg().tower)
        );
    }

    #[test]
    fn finite_subgroup_examples() {
        assert_eq!(exact(&finite_subgroup_order_bound(2, 1, &cfg())), BigInt::from(24));
        assert_eq!(exact(&finite_subgroup_order_bound(1, 1, &cfg())), BigInt::from(2));
        assert_eq!(exact(&finite_subgroup_order_bound(1, 2, &cfg())), BigInt::from(24));
    }

    #[test]
    fn report_round_trip() {
        let r = theorem1_bound(1, 3, 2, &cfg()).unwrap();
        let js = serde_json::to_string(&r).unwrap();
        let back: BoundReport = serde_json::from_str(&js).unwrap();
        assert_eq!(back, r);
        let r = chain_bounds(2, 1, &cfg()).unwrap();
        let back: BoundReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn monotone_in_all_arguments() {
        let c = cfg();
        for n in 1..=3u64 {
            assert!(j_bound(n, &c) <= j_bound(n + 1, &c));
            assert!(d_unipotent(n, &c) <= d_unipotent(n + 1, &c));
            assert!(jprime(n, &c) <= jprime(n + 1, &c));
            for h in [2u64, 3, 8, 64] {
                assert!(masser_f(n, &t(h), &c).unwrap() <= masser_f(n, &t(h * 2), &c).unwrap());
                assert!(masser_f(n, &t(h), &c).unwrap() <= masser_f(n + 1, &t(h), &c).unwrap());
                assert!(schreier_height(n, h, &c) <= schreier_height(n, h + 1, &c));
            }
        }
    }
}
