//! Rational enclosures of logarithms.
//!
//! Every transcendental value is carried as a closed interval with rational
//! endpoints on a `2^-precision` grid, so formulas built from them can be
//! rounded up to certified integer upper bounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn point(q: Rational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        Interval {
            lo: c.iter().min().unwrap().clone(),
            hi: c.iter().max().unwrap().clone(),
        }
    }

    /// Division by an interval that does not contain zero.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(
            o.lo.is_positive() || o.hi.is_negative(),
            "division by an interval containing zero"
        );
        let inv = Interval {
            lo: o.hi.recip(),
            hi: o.lo.recip(),
        };
        self.mul(&inv)
    }

    pub fn powi(&self, e: u32) -> Interval {
        let mut acc = Interval::point(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(&self, precision: u32) -> Interval {
        Interval {
            lo: ln_bounds(&self.lo, precision).lo,
            hi: ln_bounds(&self.hi, precision).hi,
        }
    }

    /// Smallest integer that is at least every point of the interval.
    pub fn ceil_hi(&self) -> BigInt {
        self.hi.ceil().to_integer()
    }
}

fn round_down(q: &Rational, precision: u32) -> Rational {
    let scale = BigInt::one() << precision;
    let scaled = q * Rational::from_integer(scale.clone());
    Rational::new(scaled.floor().to_integer(), scale)
}

fn round_up(q: &Rational, precision: u32) -> Rational {
    let scale = BigInt::one() << precision;
    let scaled = q * Rational::from_integer(scale.clone());
    Rational::new(scaled.ceil().to_integer(), scale)
}

/// Enclosure of `2·atanh(t)` for `0 ≤ t ≤ 1/3`.
fn two_atanh(t: &Rational, precision: u32) -> Interval {
    if t.is_zero() {
        return Interval::point(Rational::zero());
    }
    let t2 = t * t;
    let mut power = t.clone();
    let mut sum = Rational::zero();
    let mut j: u64 = 0;
    // Tail after the term t^(2j+1)/(2j+1) is bounded by t^(2j+3)/((2j+3)(1-t^2)).
    let target = Rational::new(BigInt::one(), BigInt::one() << (precision + 4));
    loop {
        sum += &power / Rational::from_integer(BigInt::from(2 * j + 1));
        power *= &t2;
        let tail = &power
            / (Rational::from_integer(BigInt::from(2 * j + 3)) * (Rational::one() - &t2));
        j += 1;
        if tail < target {
            let two = Rational::from_integer(BigInt::from(2));
            return Interval {
                lo: round_down(&(&sum * &two), precision),
                hi: round_up(&((sum + tail) * two), precision),
            };
        }
    }
}

/// Enclosure of `ln 2`.
pub fn ln2_bounds(precision: u32) -> Interval {
    two_atanh(&Rational::new(BigInt::one(), BigInt::from(3)), precision)
}

/// Enclosure of `ln x` for rational `x > 0`.
pub fn ln_bounds(x: &Rational, precision: u32) -> Interval {
    assert!(x.is_positive(), "logarithm of a non-positive number");
    if x.is_one() {
        return Interval::point(Rational::zero());
    }
    // x = 2^k · m with m in [1, 2)
    let k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut m = x / pow2(k);
    let mut k = k;
    while m >= Rational::from_integer(BigInt::from(2)) {
        m /= Rational::from_integer(BigInt::from(2));
        k += 1;
    }
    while m < Rational::one() {
        m *= Rational::from_integer(BigInt::from(2));
        k -= 1;
    }
    let t = (&m - Rational::one()) / (&m + Rational::one());
    let ln_m = two_atanh(&t, precision + 2);
    let ln2 = ln2_bounds(precision + 8 + bit_len(k.unsigned_abs()));
    let kk = Interval::point(Rational::from_integer(BigInt::from(k)));
    let raw = kk.mul(&ln2).add(&ln_m);
    Interval {
        lo: round_down(&raw.lo, precision),
        hi: round_up(&raw.hi, precision),
    }
}

/// Enclosure of `log2 x`; exact when `x` is a power of two.
pub fn log2_bounds(x: &Rational, precision: u32) -> Interval {
    assert!(x.is_positive(), "logarithm of a non-positive number");
    if let Some(k) = exact_log2(x) {
        return Interval::point(Rational::from_integer(BigInt::from(k)));
    }
    let ln_x = ln_bounds(x, precision + 4);
    let ln2 = ln2_bounds(precision + 4);
    let q = ln_x.div(&ln2);
    Interval {
        lo: round_down(&q.lo, precision),
        hi: round_up(&q.hi, precision),
    }
}

/// `Some(k)` when `x = 2^k` exactly.
pub fn exact_log2(x: &Rational) -> Option<i64> {
    let is_pow2 = |v: &BigInt| v.is_positive() && (v & (v - BigInt::one())).is_zero();
    if x.denom().is_one() && is_pow2(x.numer()) {
        Some(x.numer().bits() as i64 - 1)
    } else if x.numer().is_one() && is_pow2(x.denom()) {
        Some(1 - x.denom().bits() as i64)
    } else {
        None
    }
}

fn pow2(k: i64) -> Rational {
    if k >= 0 {
        Rational::from_integer(BigInt::one() << k as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-k) as usize)
    }
}

fn bit_len(v: u64) -> u32 {
    64 - v.leading_zeros()
}

/// Integer part helper used by callers that need `ceil(q)` as a `BigInt`.
pub fn ceil_int(q: &Rational) -> BigInt {
    let (d, r) = q.numer().div_mod_floor(q.denom());
    if r.is_zero() {
        d
    } else {
        d + 1
    }
}
