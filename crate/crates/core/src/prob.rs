//! Exact probabilities.
//!
//! Every probability produced by S-box tables and trails is a product of
//! `count / 16` factors, so it is a dyadic rational `num / 2^shift`. `Prob`
//! stores it normalized (odd numerator, or zero) and compares exactly.
//! Arbitrary rationals (`BigRational`) are used where inputs are not
//! guaranteed dyadic.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prob {
    num: u128,
    shift: u32,
}

impl Prob {
    pub const ZERO: Prob = Prob { num: 0, shift: 0 };
    pub const ONE: Prob = Prob { num: 1, shift: 0 };

    /// `num / 2^shift`, normalized.
    pub fn new(num: u128, shift: u32) -> Prob {
        if num == 0 {
            return Prob::ZERO;
        }
        let tz = num.trailing_zeros().min(shift);
        Prob {
            num: num >> tz,
            shift: shift - tz,
        }
    }

    /// `count / 16`, the probability of a 4-bit S-box transition.
    pub fn from_nibble_count(count: u32) -> Prob {
        Prob::new(count as u128, 4)
    }

    pub fn numerator(&self) -> u128 {
        self.num
    }

    /// Exponent of the denominator.
    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Exact product.
    ///
    /// # Panics
    /// If the odd part of the numerator exceeds 128 bits, which needs more than
    /// forty factors of 7/16 in one trail.
    pub fn mul(self, other: Prob) -> Prob {
        if self.num == 0 || other.num == 0 {
            return Prob::ZERO;
        }
        let num = self
            .num
            .checked_mul(other.num)
            .expect("trail probability numerator exceeds 128 bits");
        Prob::new(num, self.shift + other.shift)
    }

    pub fn pow(self, exp: u32) -> Prob {
        let mut acc = Prob::ONE;
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// log2 of the value; `-inf` for zero. For display only.
    pub fn log2(&self) -> f64 {
        if self.num == 0 {
            return f64::NEG_INFINITY;
        }
        (self.num as f64).log2() - self.shift as f64
    }

    /// Nearest `f64`; exact while the numerator fits in 53 bits.
    pub fn to_f64(&self) -> f64 {
        self.num as f64 * (-(self.shift as f64)).exp2()
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::one() << self.shift as usize)
    }

    /// Converts a dyadic rational; `None` otherwise or if it does not fit.
    pub fn from_ratio(r: &BigRational) -> Option<Prob> {
        let den = r.denom();
        if r.numer() < &BigInt::zero() || den.bits() == 0 {
            return None;
        }
        let shift = den.trailing_zeros()?;
        if den != &(BigInt::one() << shift as usize) {
            return None;
        }
        let num: u128 = r.numer().try_into().ok()?;
        Some(Prob::new(num, shift as u32))
    }
}

impl Ord for Prob {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.num, other.num) {
            (0, 0) => return Ordering::Equal,
            (0, _) => return Ordering::Less,
            (_, 0) => return Ordering::Greater,
            _ => {}
        }
        // a / 2^x  vs  b / 2^y  <=>  a * 2^(y-x)  vs  b
        if self.shift <= other.shift {
            cmp_scaled(self.num, other.shift - self.shift, other.num)
        } else {
            cmp_scaled(other.num, self.shift - other.shift, self.num).reverse()
        }
    }
}

impl PartialOrd for Prob {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compares `a * 2^s` with `b` without overflow.
fn cmp_scaled(a: u128, s: u32, b: u128) -> Ordering {
    if s >= 128 {
        // a >= 1, so a * 2^s >= 2^128 > b
        return Ordering::Greater;
    }
    let q = b >> s;
    let rem = b & ((1u128 << s) - 1);
    match a.cmp(&q) {
        Ordering::Equal if rem > 0 => Ordering::Less,
        o => o,
    }
}

impl fmt::Display for Prob {
    /// `2^-k`, `n/2^k`, or a plain integer.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.shift) {
            (n, 0) => write!(f, "{n}"),
            (1, k) => write!(f, "2^-{k}"),
            (n, k) => write!(f, "{n}/2^{k}"),
        }
    }
}

/// Renders a rational as [`Prob`] does when dyadic, else as `n/d`.
pub fn format_ratio(r: &BigRational) -> String {
    match Prob::from_ratio(r) {
        Some(p) => p.to_string(),
        None => format!("{}/{}", r.numer(), r.denom()),
    }
}

/// `base^exp` for a nonnegative integer exponent.
pub fn ratio_pow(base: &BigRational, exp: u64) -> BigRational {
    if exp == 0 {
        return BigRational::one();
    }
    Pow::pow(base.clone(), exp)
}
