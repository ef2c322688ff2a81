//! Exact-or-symbolic positive integers for astronomically large bounds.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values whose bit length stays at or below this are kept exact.
pub const DEFAULT_EXACT_BITS: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Exact(BigInt),
    Pow(TowerNumber, TowerNumber),
    Factorial(TowerNumber),
    Product(Vec<TowerNumber>),
    Sum(Vec<TowerNumber>),
}

/// A positive integer kept exact when small and as an expression tree of
/// powers, factorials, products and sums otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TowerNumber(Arc<Node>);

impl From<BigInt> for TowerNumber {
    fn from(v: BigInt) -> Self {
        TowerNumber(Arc::new(Node::Exact(v)))
    }
}

impl From<u64> for TowerNumber {
    fn from(v: u64) -> Self {
        BigInt::from(v).into()
    }
}

/// Evaluation settings for building tower numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerConfig {
    pub exact_bits: u64,
}

impl Default for TowerConfig {
    fn default() -> Self {
        TowerConfig {
            exact_bits: DEFAULT_EXACT_BITS,
        }
    }
}

impl TowerNumber {
    pub fn one() -> Self {
        BigInt::one().into()
    }

    pub fn exact(&self) -> Option<&BigInt> {
        match &*self.0 {
            Node::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact().is_some()
    }

    pub fn is_factorial(&self) -> bool {
        matches!(&*self.0, Node::Factorial(_))
    }

    pub fn is_pow(&self) -> bool {
        matches!(&*self.0, Node::Pow(..))
    }

    /// `(base, exponent)` of a power node.
    pub fn as_pow(&self) -> Option<(&TowerNumber, &TowerNumber)> {
        match &*self.0 {
            Node::Pow(b, e) => Some((b, e)),
            _ => None,
        }
    }

    pub fn factorial_arg(&self) -> Option<&TowerNumber> {
        match &*self.0 {
            Node::Factorial(a) => Some(a),
            _ => None,
        }
    }

    pub fn pow(&self, exp: &TowerNumber, cfg: &TowerConfig) -> TowerNumber {
        if let Some(e) = exp.exact() {
            if e.is_zero() {
                return TowerNumber::one();
            }
            if e.is_one() {
                return self.clone();
            }
        }
        if let Some(b) = self.exact() {
            if b.is_one() || b.is_zero() {
                return self.clone();
            }
            if let Some(e) = exp.exact().and_then(ToPrimitive::to_u64) {
                let bits = (b.bits() as f64 - 1.0 + top_log2_fraction(b)) * e as f64;
                if bits <= cfg.exact_bits as f64 {
                    return num_traits::pow(b.clone(), e as usize).into();
                }
            }
        }
        TowerNumber(Arc::new(Node::Pow(self.clone(), exp.clone())))
    }

    pub fn pow_u64(&self, e: u64, cfg: &TowerConfig) -> TowerNumber {
        self.pow(&e.into(), cfg)
    }

    pub fn factorial(&self, cfg: &TowerConfig) -> TowerNumber {
        if let Some(n) = self.exact().and_then(ToPrimitive::to_u64) {
            let est = log2_factorial_f64(n as f64);
            if est <= cfg.exact_bits as f64 {
                return product_range(1, n).into();
            }
        }
        TowerNumber(Arc::new(Node::Factorial(self.clone())))
    }

    pub fn mul(&self, o: &TowerNumber, cfg: &TowerConfig) -> TowerNumber {
        if let (Some(a), Some(b)) = (self.exact(), o.exact()) {
            if a.bits() + b.bits() <= cfg.exact_bits {
                return (a * b).into();
            }
        }
        if self.exact().is_some_and(One::is_one) {
            return o.clone();
        }
        if o.exact().is_some_and(One::is_one) {
            return self.clone();
        }
        let mut parts = Vec::new();
        for t in [self, o] {
            match &*t.0 {
                Node::Product(ps) => parts.extend(ps.iter().cloned()),
                _ => parts.push(t.clone()),
            }
        }
        TowerNumber(Arc::new(Node::Product(parts)))
    }

    pub fn add(&self, o: &TowerNumber, cfg: &TowerConfig) -> TowerNumber {
        if let (Some(a), Some(b)) = (self.exact(), o.exact()) {
            if a.bits().max(b.bits()) < cfg.exact_bits {
                return (a + b).into();
            }
        }
        let mut parts = Vec::new();
        for t in [self, o] {
            match &*t.0 {
                Node::Sum(ps) => parts.extend(ps.iter().cloned()),
                _ => parts.push(t.clone()),
            }
        }
        TowerNumber(Arc::new(Node::Sum(parts)))
    }

    pub fn add_u64(&self, v: u64, cfg: &TowerConfig) -> TowerNumber {
        self.add(&v.into(), cfg)
    }

    pub fn mul_u64(&self, v: u64, cfg: &TowerConfig) -> TowerNumber {
        TowerNumber::from(v).mul(self, cfg)
    }

    /// Iterated-log magnitude used for comparisons of symbolic values.
    pub fn magnitude(&self) -> Magnitude {
        match &*self.0 {
            Node::Exact(v) => Magnitude::of_bigint(v),
            Node::Pow(b, e) => b.magnitude().log2().mul(&e.magnitude()).exp2(),
            Node::Factorial(a) => a.magnitude().log2_factorial().exp2(),
            Node::Product(ps) => ps
                .iter()
                .map(|p| p.magnitude().log2())
                .reduce(|a, b| a.add(&b))
                .map_or(Magnitude::ONE, |l| l.exp2()),
            Node::Sum(ps) => ps
                .iter()
                .map(TowerNumber::magnitude)
                .reduce(|a, b| a.add(&b))
                .unwrap_or(Magnitude::ZERO),
        }
    }

    /// Number of `2^·` applications needed before the value drops below
    /// 2^64, and the residual: `value ≈ exp2^level(residual)`.
    pub fn iterated_log(&self) -> (u32, f64) {
        let m = self.magnitude();
        (m.level, m.value)
    }

    fn structural_cmp(&self, o: &TowerNumber) -> Option<Ordering> {
        if Arc::ptr_eq(&self.0, &o.0) {
            return Some(Ordering::Equal);
        }
        match (&*self.0, &*o.0) {
            (Node::Exact(a), Node::Exact(b)) => Some(a.cmp(b)),
            (Node::Factorial(a), Node::Factorial(b)) => Some(a.cmp(b)),
            (Node::Pow(b1, e1), Node::Pow(b2, e2)) => {
                let base_ge_two = |b: &TowerNumber| b.magnitude() >= Magnitude::TWO;
                if !base_ge_two(b1) || !base_ge_two(b2) {
                    return None;
                }
                combine(&[b1.cmp(b2), e1.cmp(e2)])
            }
            (Node::Product(xs), Node::Product(ys)) | (Node::Sum(xs), Node::Sum(ys))
                if xs.len() == ys.len() =>
            {
                let parts: Vec<Ordering> = xs.iter().zip(ys).map(|(a, b)| a.cmp(b)).collect();
                combine(&parts)
            }
            _ => None,
        }
    }

    fn to_json(&self) -> TowerJson {
        match &*self.0 {
            Node::Exact(v) => TowerJson::Int(v.to_string()),
            Node::Pow(b, e) => TowerJson::Pow(Box::new(b.to_json()), Box::new(e.to_json())),
            Node::Factorial(a) => TowerJson::Factorial(Box::new(a.to_json())),
            Node::Product(ps) => TowerJson::Product(ps.iter().map(TowerNumber::to_json).collect()),
            Node::Sum(ps) => TowerJson::Sum(ps.iter().map(TowerNumber::to_json).collect()),
        }
    }

    fn from_json(j: &TowerJson) -> Result<TowerNumber> {
        let node = match j {
            TowerJson::Int(s) => Node::Exact(
                s.parse()
                    .map_err(|_| Error::Parse(format!("invalid integer {s:?}")))?,
            ),
            TowerJson::Pow(b, e) => Node::Pow(Self::from_json(b)?, Self::from_json(e)?),
            TowerJson::Factorial(a) => Node::Factorial(Self::from_json(a)?),
            TowerJson::Product(ps) => {
                Node::Product(ps.iter().map(Self::from_json).collect::<Result<_>>()?)
            }
            TowerJson::Sum(ps) => Node::Sum(ps.iter().map(Self::from_json).collect::<Result<_>>()?),
        };
        Ok(TowerNumber(Arc::new(node)))
    }
}

/// All-equal → Equal; all ≥ → Greater; all ≤ → Less; mixed → undecided.
fn combine(parts: &[Ordering]) -> Option<Ordering> {
    let any_gt = parts.contains(&Ordering::Greater);
    let any_lt = parts.contains(&Ordering::Less);
    match (any_gt, any_lt) {
        (false, false) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Greater),
        (false, true) => Some(Ordering::Less),
        (true, true) => None,
    }
}

impl PartialOrd for TowerNumber {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for TowerNumber {
    /// Exact when both sides are exact or share structure; otherwise
    /// compares iterated-log magnitudes at `f64` precision.
    fn cmp(&self, o: &Self) -> Ordering {
        if let Some(ord) = self.structural_cmp(o) {
            return ord;
        }
        self.magnitude()
            .partial_cmp(&o.magnitude())
            .unwrap_or(Ordering::Equal)
    }
}

fn product_range(lo: u64, hi: u64) -> BigInt {
    if lo > hi {
        return BigInt::one();
    }
    if hi - lo < 16 {
        return (lo..=hi).fold(BigInt::one(), |acc, k| acc * k);
    }
    let mid = lo + (hi - lo) / 2;
    product_range(lo, mid) * product_range(mid + 1, hi)
}

fn top_log2_fraction(b: &BigInt) -> f64 {
    // log2(b) - (bits - 1), in [0, 1)
    let bits = b.bits();
    let shift = bits.saturating_sub(53);
    let top = (b >> shift).to_f64().unwrap_or(1.0);
    top.log2() + shift as f64 - (bits as f64 - 1.0)
}

/// Stirling estimate of `log2(n!)`, exact enough for threshold decisions.
fn log2_factorial_f64(n: f64) -> f64 {
    if n < 2.0 {
        return 0.0;
    }
    let ln = (n + 0.5) * n.ln() - n + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * n);
    ln / std::f64::consts::LN_2
}

/// `value = exp2^level(value)` with `value < 2^64` whenever `level > 0`
/// and `value >= 64`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Magnitude {
    pub level: u32,
    pub value: f64,
}

const LEVEL_CAP: f64 = 18_446_744_073_709_551_616.0; // 2^64

impl Magnitude {
    pub const ZERO: Magnitude = Magnitude { level: 0, value: 0.0 };
    pub const ONE: Magnitude = Magnitude { level: 0, value: 1.0 };
    pub const TWO: Magnitude = Magnitude { level: 0, value: 2.0 };

    fn normalize(mut self) -> Self {
        while self.value >= LEVEL_CAP || self.value.is_infinite() {
            if self.value.is_infinite() {
                // only reachable through f64 overflow of a level-0 product
                self.value = 1024.0;
            } else {
                self.value = self.value.log2();
            }
            self.level += 1;
        }
        while self.level > 0 && self.value < 64.0 {
            self.value = self.value.exp2();
            self.level -= 1;
        }
        self
    }

    fn of_bigint(v: &BigInt) -> Self {
        if v.bits() <= 63 {
            return Magnitude {
                level: 0,
                value: v.to_f64().unwrap_or(0.0),
            };
        }
        let l = v.bits() as f64 - 1.0 + top_log2_fraction(v);
        Magnitude { level: 1, value: l }.normalize()
    }

    pub fn log2(&self) -> Magnitude {
        if self.level == 0 {
            Magnitude {
                level: 0,
                value: if self.value > 0.0 { self.value.log2() } else { 0.0 },
            }
        } else {
            Magnitude {
                level: self.level - 1,
                value: self.value,
            }
            .normalize()
        }
    }

    pub fn exp2(&self) -> Magnitude {
        Magnitude {
            level: self.level + 1,
            value: self.value,
        }
        .normalize()
    }

    pub fn add(&self, o: &Magnitude) -> Magnitude {
        let (big, small) = if self >= o { (self, o) } else { (o, self) };
        match big.level {
            0 => Magnitude {
                level: 0,
                value: big.value + small.value,
            }
            .normalize(),
            1 => {
                let lb = big.value;
                let ls = small.log2();
                if ls.level > 0 {
                    return *big;
                }
                let sum = lb + (1.0 + (ls.value - lb).exp2()).log2();
                Magnitude { level: 1, value: sum }.normalize()
            }
            _ => *big,
        }
    }

    pub fn mul(&self, o: &Magnitude) -> Magnitude {
        if self.level == 0 && o.level == 0 {
            return Magnitude {
                level: 0,
                value: self.value * o.value,
            }
            .normalize();
        }
        if *self == Magnitude::ZERO || *o == Magnitude::ZERO {
            return Magnitude::ZERO;
        }
        self.log2().add(&o.log2()).exp2()
    }

    /// Magnitude of `log2(n!)` for the magnitude of `n`.
    fn log2_factorial(&self) -> Magnitude {
        if self.level == 0 {
            return Magnitude {
                level: 0,
                value: log2_factorial_f64(self.value),
            }
            .normalize();
        }
        // n (log2 n - log2 e): the correction vanishes at this scale
        let l = self.log2();
        let corrected = if l.level == 0 {
            Magnitude {
                level: 0,
                value: l.value - std::f64::consts::LOG2_E,
            }
        } else {
            l
        };
        self.mul(&corrected)
    }
}

impl PartialOrd for Magnitude {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(
            self.level
                .cmp(&o.level)
                .then(self.value.partial_cmp(&o.value)?),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum TowerJson {
    Int(String),
    Pow(Box<TowerJson>, Box<TowerJson>),
    Factorial(Box<TowerJson>),
    Product(Vec<TowerJson>),
    Sum(Vec<TowerJson>),
}

/// `{"form": "exact", "value": "…"}` or `{"form": "tower", "expr": …,
/// "text": "…"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
enum TowerRepr {
    Exact { value: String },
    Tower { expr: TowerJson, text: String },
}

impl Serialize for TowerNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self.exact() {
            Some(v) => TowerRepr::Exact {
                value: v.to_string(),
            },
            None => TowerRepr::Tower {
                expr: self.to_json(),
                text: self.to_string(),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TowerNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match TowerRepr::deserialize(d)? {
            TowerRepr::Exact { value } => value
                .parse::<BigInt>()
                .map(TowerNumber::from)
                .map_err(D::Error::custom),
            TowerRepr::Tower { expr, .. } => TowerNumber::from_json(&expr).map_err(D::Error::custom),
        }
    }
}

impl fmt::Display for TowerNumber {
    /// Knuth-arrow style text: `a↑b` for powers, `(a)!` for factorials.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atom(t: &TowerNumber, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match &*t.0 {
                Node::Exact(_) | Node::Factorial(_) => write!(f, "{t}"),
                _ => write!(f, "({t})"),
            }
        }
        match &*self.0 {
            Node::Exact(v) => write!(f, "{v}"),
            Node::Pow(b, e) => {
                atom(b, f)?;
                write!(f, "↑")?;
                atom(e, f)
            }
            Node::Factorial(a) => {
                write!(f, "(")?;
                write!(f, "{a}")?;
                write!(f, ")!")
            }
            Node::Product(ps) | Node::Sum(ps) => {
                let sep = if matches!(&*self.0, Node::Product(_)) { "·" } else { " + " };
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{sep}")?;
                    }
                    atom(p, f)?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> TowerConfig {
        TowerConfig::default()
    }

    #[test]
    fn collapses_when_small() {
        let t = TowerNumber::from(2u64).pow_u64(10, &cfg());
        assert_eq!(t.exact(), Some(&BigInt::from(1024)));
        let f = TowerNumber::from(8u64).factorial(&cfg());
        assert_eq!(f.exact(), Some(&BigInt::from(40320)));
        let big = TowerNumber::from(2u64).pow(&TowerNumber::from(2u64).pow_u64(40, &cfg()), &cfg());
        assert!(big.is_pow());
    }

    #[test]
    fn one_to_any_power_is_one() {
        let huge = TowerNumber::from(2u64).pow(&TowerNumber::from(2u64).pow_u64(200, &cfg()), &cfg());
        assert_eq!(TowerNumber::one().pow(&huge, &cfg()), TowerNumber::one());
    }

    #[test]
    fn symbolic_ordering() {
        let c = cfg();
        let e = TowerNumber::from(2u64).pow_u64(100, &c);
        let a = TowerNumber::from(3u64).pow(&e, &c);
        let b = TowerNumber::from(5u64).pow(&e, &c);
        assert!(a < b);
        let fa = a.factorial(&c);
        assert!(fa > a);
        assert!(TowerNumber::from(10u64).pow(&fa, &c) > TowerNumber::from(10u64).pow(&a, &c));
        // magnitudes agree with exact values where both exist
        let x = TowerNumber::from(7u64).pow_u64(5000, &c);
        let y = TowerNumber::from(2u64).pow_u64(14000, &c);
        assert_eq!(x.cmp(&y), x.exact().unwrap().cmp(y.exact().unwrap()));
    }

    #[test]
    fn json_round_trip() {
        let c = cfg();
        let e = TowerNumber::from(2u64).pow_u64(100, &c);
        let t = TowerNumber::from(3u64).pow(&e, &c).factorial(&c).add_u64(1, &c);
        let js = serde_json::to_string(&t).unwrap();
        assert!(js.contains("\"form\":\"tower\""));
        let back: TowerNumber = serde_json::from_str(&js).unwrap();
        assert_eq!(back, t);
        let small: TowerNumber = serde_json::from_str(r#"{"form":"exact","value":"40320"}"#).unwrap();
        assert_eq!(small.exact(), Some(&BigInt::from(40320)));
    }

    #[test]
    fn text_rendering() {
        let c = cfg();
        let t = TowerNumber::from(9u64).pow(&TowerNumber::from(2u64).pow_u64(40, &c), &c);
        assert_eq!(t.to_string(), "9↑1099511627776");
    }

    /// Force symbolic forms with a tiny threshold and check that the
    /// ordering still matches exact arithmetic.
    fn symbolic_pair(a: u64, b: u64, e: u64) -> (TowerNumber, BigInt) {
        let tiny = TowerConfig { exact_bits: 4 };
        let t = TowerNumber::from(a).pow_u64(e, &tiny).mul(&TowerNumber::from(b), &tiny);
        (t, num_traits::pow(BigInt::from(a), e as usize) * b)
    }

    proptest! {
        #[test]
        fn comparison_matches_exact(a in 2u64..40, b in 1u64..40, e in 2u64..30,
                                    a2 in 2u64..40, b2 in 1u64..40, e2 in 2u64..30) {
            let (x, xv) = symbolic_pair(a, b, e);
            let (y, yv) = symbolic_pair(a2, b2, e2);
            let exact = xv.cmp(&yv);
            let sym = x.cmp(&y);
            // f64 magnitudes can only blur values within ~1e-12 relative
            let close = {
                let (p, q) = (xv.to_f64().unwrap(), yv.to_f64().unwrap());
                ((p - q) / p.max(q)).abs() < 1e-9
            };
            prop_assert!(sym == exact || close, "{} vs {}: {:?} vs {:?}", xv, yv, sym, exact);
            let ex = TowerNumber::from(xv.clone());
            let ey = TowerNumber::from(yv.clone());
            prop_assert_eq!(ex.cmp(&ey), exact);
        }
    }
}
