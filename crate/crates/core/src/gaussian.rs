//! Exact arithmetic in the ring of Gaussian integers ℤ[i].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A Gaussian integer `re + im·i` with unbounded coordinates.
///
/// The total order is by `(norm, re, im)`, which is also the order used for
/// prime factors in a canonical factorization.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianInt {
    re: BigInt,
    im: BigInt,
}

/// A power `i^n` of the imaginary unit, `n` taken mod 4.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct UnitPower(u8);

impl UnitPower {
    pub const ONE: UnitPower = UnitPower(0);

    pub fn new(n: i64) -> Self {
        UnitPower(n.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn inverse(self) -> Self {
        UnitPower((4 - self.0) % 4)
    }

    pub fn value(self) -> GaussianInt {
        match self.0 {
            0 => GaussianInt::new(1, 0),
            1 => GaussianInt::new(0, 1),
            2 => GaussianInt::new(-1, 0),
            _ => GaussianInt::new(0, -1),
        }
    }

    /// All four units in exponent order.
    pub fn all() -> impl Iterator<Item = UnitPower> {
        (0..4).map(UnitPower)
    }
}

impl Add for UnitPower {
    type Output = UnitPower;

    fn add(self, rhs: UnitPower) -> UnitPower {
        UnitPower((self.0 + rhs.0) % 4)
    }
}

impl Sub for UnitPower {
    type Output = UnitPower;

    fn sub(self, rhs: UnitPower) -> UnitPower {
        UnitPower((self.0 + 4 - rhs.0) % 4)
    }
}

impl fmt::Display for UnitPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i^{}", self.0)
    }
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        GaussianInt::new(0, 0)
    }

    pub fn one() -> Self {
        GaussianInt::new(1, 0)
    }

    pub fn i() -> Self {
        GaussianInt::new(0, 1)
    }

    /// The ramified prime `1 + i`.
    pub fn one_plus_i() -> Self {
        GaussianInt::new(1, 1)
    }

    pub fn re(&self) -> &BigInt {
        &self.re
    }

    pub fn im(&self) -> &BigInt {
        &self.im
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussianInt::new(self.re.clone(), -&self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// If `self` is a unit, the exponent `n` with `self = i^n`.
    pub fn as_unit(&self) -> Option<UnitPower> {
        UnitPower::all().find(|u| &u.value() == self)
    }

    /// Multiplies by `i^n`. Exact coordinate shuffle, no multiplication.
    pub fn rotate(&self, n: UnitPower) -> Self {
        match n.exponent() {
            0 => self.clone(),
            1 => GaussianInt::new(-&self.im, self.re.clone()),
            2 => -self,
            _ => GaussianInt::new(self.im.clone(), -&self.re),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = GaussianInt::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Euclidean division: `self = q·w + r` with `N(r) ≤ N(w)/2`.
    ///
    /// Each coordinate of `self / w` is rounded to the nearest integer, ties
    /// going toward −∞.
    pub fn divrem(&self, w: &GaussianInt) -> Result<(GaussianInt, GaussianInt)> {
        if w.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = w.norm();
        let num = self * &w.conj();
        let q = GaussianInt::new(round_half_down(&num.re, &n), round_half_down(&num.im, &n));
        let r = self - &(&q * w);
        Ok((q, r))
    }

    /// `self / w` when the division is exact.
    pub fn div_exact(&self, w: &GaussianInt) -> Option<GaussianInt> {
        if w.is_zero() {
            return None;
        }
        let n = w.norm();
        let num = self * &w.conj();
        let (qr, rr) = num.re.div_rem(&n);
        if !rr.is_zero() {
            return None;
        }
        let (qi, ri) = num.im.div_rem(&n);
        if !ri.is_zero() {
            return None;
        }
        Some(GaussianInt::new(qr, qi))
    }

    pub fn is_divisible_by(&self, w: &GaussianInt) -> bool {
        if w.is_zero() {
            return self.is_zero();
        }
        self.div_exact(w).is_some()
    }

    /// Divisible by `1 + i`, i.e. `re + im` is even.
    pub fn is_even(&self) -> bool {
        (&self.re + &self.im).is_even()
    }

    pub fn is_odd(&self) -> bool {
        !self.is_even()
    }

    /// Exact halving; `None` unless both coordinates are even.
    pub fn half(&self) -> Option<GaussianInt> {
        if self.re.is_even() && self.im.is_even() {
            Some(GaussianInt::new(&self.re >> 1u32, &self.im >> 1u32))
        } else {
            None
        }
    }

    /// Exponent of `1 + i` in `self`, with the remaining odd cofactor.
    ///
    /// Panics on zero.
    pub fn split_one_plus_i(&self) -> (u32, GaussianInt) {
        assert!(!self.is_zero(), "valuation of zero");
        let mut v = 0;
        let mut z = self.clone();
        // (a + bi) / (1 + i) = ((a + b) + (b - a)i) / 2
        while z.is_even() {
            z = GaussianInt::new((&z.re + &z.im) >> 1u32, (&z.im - &z.re) >> 1u32);
            v += 1;
        }
        (v, z)
    }

    pub fn valuation_one_plus_i(&self) -> u32 {
        self.split_one_plus_i().0
    }

    fn sort_key(&self) -> (BigInt, &BigInt, &BigInt) {
        (self.norm(), &self.re, &self.im)
    }
}

fn round_half_down(num: &BigInt, den: &BigInt) -> BigInt {
    // nearest integer to num/den (den > 0), ties toward −∞: ceil((2num − den) / 2den)
    let two_den: BigInt = den << 1u32;
    let shifted: BigInt = (num << 1u32) - den;
    shifted.div_ceil(&two_den)
}

impl PartialOrd for GaussianInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GaussianInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl From<i64> for GaussianInt {
    fn from(re: i64) -> Self {
        GaussianInt::new(re, 0)
    }
}

impl From<(i64, i64)> for GaussianInt {
    fn from((re, im): (i64, i64)) -> Self {
        GaussianInt::new(re, im)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl<'a, 'b> $trait<&'b GaussianInt> for &'a GaussianInt {
            type Output = GaussianInt;

            fn $method(self, $b: &'b GaussianInt) -> GaussianInt {
                let $a = self;
                $body
            }
        }

        impl $trait<GaussianInt> for GaussianInt {
            type Output = GaussianInt;

            fn $method(self, rhs: GaussianInt) -> GaussianInt {
                (&self).$method(&rhs)
            }
        }

        impl<'b> $trait<&'b GaussianInt> for GaussianInt {
            type Output = GaussianInt;

            fn $method(self, rhs: &'b GaussianInt) -> GaussianInt {
                (&self).$method(rhs)
            }
        }

        impl<'a> $trait<GaussianInt> for &'a GaussianInt {
            type Output = GaussianInt;

            fn $method(self, rhs: GaussianInt) -> GaussianInt {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussianInt::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| GaussianInt::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| GaussianInt::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re
));

impl Neg for GaussianInt {
    type Output = GaussianInt;

    fn neg(self) -> GaussianInt {
        GaussianInt::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;

    fn neg(self) -> GaussianInt {
        GaussianInt::new(-&self.re, -&self.im)
    }
}

impl std::iter::Product for GaussianInt {
    fn product<I: Iterator<Item = GaussianInt>>(iter: I) -> Self {
        iter.fold(GaussianInt::one(), |acc, z| acc * z)
    }
}

/// Canonical text form: always `a+bi` or `a-bi`, e.g. `-2-1i`, `5+0i`.
impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", self.re, sign, self.im.abs())
    }
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi` with an optional leading sign. The
/// imaginary coefficient may be omitted (`i`, `-i`, `5+i`), and U+2212 is
/// accepted as a minus sign.
impl FromStr for GaussianInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(s.to_string());
        let t = s.trim().replace('\u{2212}', "-");
        if t.is_empty() {
            return Err(err());
        }
        let Some(body) = t.strip_suffix('i') else {
            return parse_int(&t).map(|re| GaussianInt::new(re, 0)).ok_or_else(err);
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let re = parse_int(re_part).ok_or_else(err)?;
        let im = match im_part {
            "" | "+" => BigInt::one(),
            "-" => -BigInt::one(),
            other => {
                if split.is_some() && other[1..].starts_with(['+', '-']) {
                    return Err(err());
                }
                parse_int(other).ok_or_else(err)?
            }
        };
        Ok(GaussianInt::new(re, im))
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}
