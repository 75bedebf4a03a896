//! Gaussian primality and unique factorization in the special form
//! `z = i^u · (1+i)^a · p₁^e₁ ⋯ p_m^e_m` with every `p_j` a prime of `O^I`.
//!
//! The norm `N(z)` is factored over ℤ by trial division. Each rational prime
//! `q ≡ 1 (mod 4)` is split as `gcd(q, s + i)` where `s² ≡ −1 (mod q)`; primes
//! `q ≡ 3 (mod 4)` stay inert and `2` is replaced by the ramified `1 + i`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianInt, UnitPower};
use crate::parity::normalize_odd_to_oi;

/// Canonical factorization `i^unit_exp · (1+i)^ramified_exp · Π p^e`.
///
/// `odd_factors` holds distinct primes of `O^I` in `(norm, re, im)` order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CanonicalFactorization {
    pub unit_exp: UnitPower,
    pub ramified_exp: u32,
    pub odd_factors: Vec<(GaussianInt, u32)>,
}

impl CanonicalFactorization {
    /// The factorization of `i^n`.
    pub fn unit(n: UnitPower) -> Self {
        CanonicalFactorization {
            unit_exp: n,
            ramified_exp: 0,
            odd_factors: Vec::new(),
        }
    }

    pub fn reconstruct(&self) -> GaussianInt {
        let odd: GaussianInt = self.odd_factors.iter().map(|(p, e)| p.pow(*e)).product();
        (GaussianInt::one_plus_i().pow(self.ramified_exp) * odd).rotate(self.unit_exp)
    }

    /// True when no prime divides the element, i.e. it is a unit.
    pub fn is_unit(&self) -> bool {
        self.ramified_exp == 0 && self.odd_factors.is_empty()
    }

    /// Number of distinct primes, counting `1 + i` when present.
    pub fn distinct_primes(&self) -> usize {
        self.odd_factors.len() + usize::from(self.ramified_exp > 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.ramified_exp <= 1 && self.odd_factors.iter().all(|(_, e)| *e == 1)
    }

    /// Prime-power blocks `(p, e)` including `(1 + i, a)` when `a > 0`.
    pub fn prime_powers(&self) -> Vec<(GaussianInt, u32)> {
        let mut out = Vec::with_capacity(self.distinct_primes());
        if self.ramified_exp > 0 {
            out.push((GaussianInt::one_plus_i(), self.ramified_exp));
        }
        out.extend(self.odd_factors.iter().cloned());
        out
    }

    /// Factorization of the product: unit exponents add mod 4, prime
    /// exponents add.
    pub fn merge(&self, other: &CanonicalFactorization) -> CanonicalFactorization {
        let mut odd = self.odd_factors.clone();
        for (p, e) in &other.odd_factors {
            match odd.iter_mut().find(|(q, _)| q == p) {
                Some((_, f)) => *f += e,
                None => odd.push((p.clone(), *e)),
            }
        }
        odd.sort();
        CanonicalFactorization {
            unit_exp: self.unit_exp + other.unit_exp,
            ramified_exp: self.ramified_exp + other.ramified_exp,
            odd_factors: odd,
        }
    }

    fn exponent_of(&self, p: &GaussianInt) -> u32 {
        self.odd_factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }

    pub fn to_json(&self) -> FactorizationJson {
        FactorizationJson {
            unit_exp: self.unit_exp.exponent(),
            one_plus_i_exp: self.ramified_exp,
            factors: self
                .odd_factors
                .iter()
                .map(|(p, e)| (p.to_string(), *e))
                .collect(),
        }
    }
}

impl std::fmt::Display for CanonicalFactorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} * (1+1i)^{}", self.unit_exp, self.ramified_exp)?;
        for (p, e) in &self.odd_factors {
            write!(f, " * ({p})^{e}")?;
        }
        Ok(())
    }
}

/// Wire form: `{"unit_exp":n,"one_plus_i_exp":k,"factors":[["a+bi",e],...]}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FactorizationJson {
    pub unit_exp: u8,
    pub one_plus_i_exp: u32,
    pub factors: Vec<(String, u32)>,
}

impl TryFrom<FactorizationJson> for CanonicalFactorization {
    type Error = Error;

    fn try_from(json: FactorizationJson) -> Result<Self> {
        if json.unit_exp > 3 {
            return Err(Error::Malformed(format!("unit_exp {} out of range", json.unit_exp)));
        }
        let odd_factors = json
            .factors
            .into_iter()
            .map(|(p, e)| Ok((p.parse()?, e)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CanonicalFactorization {
            unit_exp: UnitPower::new(json.unit_exp.into()),
            ramified_exp: json.one_plus_i_exp,
            odd_factors,
        })
    }
}

/// Witness that `value` lies in the G-set (canonical unit exponent zero).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GMembership {
    pub value: GaussianInt,
    pub witness: CanonicalFactorization,
}

pub fn is_gaussian_prime(z: &GaussianInt) -> Result<bool> {
    if z.is_zero() {
        return Err(Error::Zero("is_gaussian_prime"));
    }
    if z.is_unit() {
        return Err(Error::Unit("is_gaussian_prime"));
    }
    if is_prime(&to_natural(&z.norm())) {
        return Ok(true);
    }
    // associates of a rational prime q ≡ 3 (mod 4) are the only other primes
    let axis = if z.re().is_zero() {
        z.im()
    } else if z.im().is_zero() {
        z.re()
    } else {
        return Ok(false);
    };
    let q = axis.magnitude();
    Ok(is_prime(q) && (q % 4u32) == BigUint::from(3u32))
}

/// Greatest common divisor by the Euclidean algorithm on [`GaussianInt::divrem`].
///
/// The result is an associate-class representative as produced by the
/// remainder sequence; `gcd(z, 0) = z`.
pub fn gcd_euclidean(z: &GaussianInt, w: &GaussianInt) -> GaussianInt {
    let (mut a, mut b) = (z.clone(), w.clone());
    while !b.is_zero() {
        let (_, r) = a.divrem(&b).expect("nonzero divisor");
        a = std::mem::replace(&mut b, r);
    }
    a
}

pub fn factor(z: &GaussianInt) -> Result<CanonicalFactorization> {
    if z.is_zero() {
        return Err(Error::Zero("factor"));
    }
    let (ramified_exp, mut rest) = z.split_one_plus_i();
    let mut odd_factors = Vec::new();
    for (q, e) in factor_natural(&to_natural(&rest.norm())) {
        if &q % 4u32 == BigUint::from(3u32) {
            // inert: q^(e/2) divides rest, normalized associate is −q
            let p = GaussianInt::new(-BigInt::from(q), 0);
            let f = e / 2;
            rest = rest.div_exact(&p.pow(f)).expect("inert prime divides");
            odd_factors.push((p, f));
            continue;
        }
        let pi = split_prime(&q);
        let (_, pi) = normalize_odd_to_oi(&pi)?;
        for p in [pi.clone(), pi.conj()] {
            let mut f = 0;
            while let Some(next) = rest.div_exact(&p) {
                rest = next;
                f += 1;
            }
            if f > 0 {
                odd_factors.push((p, f));
            }
        }
    }
    let unit_exp = rest
        .as_unit()
        .ok_or_else(|| Error::Malformed(format!("cofactor {rest} of {z} is not a unit")))?;
    odd_factors.sort();
    Ok(CanonicalFactorization {
        unit_exp,
        ramified_exp,
        odd_factors,
    })
}

/// Canonical unit exponent of `z` without factoring.
///
/// `O^I` is a monoid, so the product of the odd prime powers lies in `O^I`
/// and the unit is exactly the rotation that normalizes the odd part.
pub fn g_unit_exp(z: &GaussianInt) -> Result<UnitPower> {
    if z.is_zero() {
        return Err(Error::Zero("g_unit_exp"));
    }
    let (_, odd) = z.split_one_plus_i();
    Ok(normalize_odd_to_oi(&odd)?.0)
}

/// The unique associate of `z` lying in the G-set.
pub fn to_g(z: &GaussianInt) -> Result<GaussianInt> {
    Ok(z.rotate(g_unit_exp(z)?.inverse()))
}

pub fn is_in_g(z: &GaussianInt) -> Result<Option<GMembership>> {
    let witness = factor(z)?;
    Ok((witness.unit_exp == UnitPower::ONE).then(|| GMembership {
        value: z.clone(),
        witness,
    }))
}

/// Exact square root inside the G-set: halves every exponent of the
/// canonical factorization. `None` unless `z ∈ G` and every exponent is even.
pub fn sqrt_in_g(z: &GaussianInt) -> Result<Option<GaussianInt>> {
    let f = factor(z)?;
    if f.unit_exp != UnitPower::ONE
        || f.ramified_exp % 2 == 1
        || f.odd_factors.iter().any(|(_, e)| e % 2 == 1)
    {
        return Ok(None);
    }
    let half = CanonicalFactorization {
        unit_exp: UnitPower::ONE,
        ramified_exp: f.ramified_exp / 2,
        odd_factors: f.odd_factors.iter().map(|(p, e)| (p.clone(), e / 2)).collect(),
    };
    Ok(Some(half.reconstruct()))
}

/// Square root of an arbitrary Gaussian integer, if it is a perfect square.
/// Returns the root lying in `i^(u/2) · G` for unit exponent `u ∈ {0, 2}`.
pub fn exact_sqrt(z: &GaussianInt) -> Result<Option<GaussianInt>> {
    let f = factor(z)?;
    if f.unit_exp.exponent() % 2 == 1
        || f.ramified_exp % 2 == 1
        || f.odd_factors.iter().any(|(_, e)| e % 2 == 1)
    {
        return Ok(None);
    }
    let half = CanonicalFactorization {
        unit_exp: UnitPower::new((f.unit_exp.exponent() / 2).into()),
        ramified_exp: f.ramified_exp / 2,
        odd_factors: f.odd_factors.iter().map(|(p, e)| (p.clone(), e / 2)).collect(),
    };
    Ok(Some(half.reconstruct()))
}

/// Component-wise minimum of exponents, unit exponent included.
pub fn gcd_canonical(z: &GaussianInt, w: &GaussianInt) -> Result<CanonicalFactorization> {
    if z.is_zero() || w.is_zero() {
        return Err(Error::Zero("gcd_canonical"));
    }
    let (fz, fw) = (factor(z)?, factor(w)?);
    let odd_factors = fz
        .odd_factors
        .iter()
        .filter_map(|(p, e)| {
            let m = (*e).min(fw.exponent_of(p));
            (m > 0).then(|| (p.clone(), m))
        })
        .collect();
    Ok(CanonicalFactorization {
        unit_exp: fz.unit_exp.min(fw.unit_exp),
        ramified_exp: fz.ramified_exp.min(fw.ramified_exp),
        odd_factors,
    })
}

fn to_natural(n: &BigInt) -> BigUint {
    assert!(n.sign() != Sign::Minus, "norm is non-negative");
    n.magnitude().clone()
}

/// A Gaussian prime of norm `q` for a rational prime `q ≡ 1 (mod 4)`.
fn split_prime(q: &BigUint) -> GaussianInt {
    let s = sqrt_minus_one(q);
    let pi = gcd_euclidean(
        &GaussianInt::new(BigInt::from(q.clone()), 0),
        &GaussianInt::new(BigInt::from(s), 1),
    );
    debug_assert_eq!(to_natural(&pi.norm()), *q);
    pi
}

/// `s` with `s² ≡ −1 (mod q)` for a prime `q ≡ 1 (mod 4)`: for the first
/// quadratic non-residue `c`, `c^((q−1)/4)` is such a root.
fn sqrt_minus_one(q: &BigUint) -> BigUint {
    let minus_one = q - 1u32;
    let quarter = &minus_one >> 2u32;
    let mut c = BigUint::from(2u32);
    loop {
        let s = c.modpow(&quarter, q);
        if (&s * &s) % q == minus_one {
            return s;
        }
        c += 1u32;
    }
}

/// Prime factorization of a natural number by trial division, with a
/// shortcut for perfect squares.
pub fn factor_natural(n: &BigUint) -> Vec<(BigUint, u32)> {
    if let Some(small) = n.to_u64() {
        return factor_u64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
    }
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while !n.is_one() {
        if is_prime(&n) {
            out.push((n, 1));
            break;
        }
        let r = n.sqrt();
        if &r * &r == n {
            out.extend(factor_natural(&r).into_iter().map(|(p, e)| (p, 2 * e)));
            break;
        }
        let dd = BigUint::from(d);
        if (&dd * &dd) > n {
            out.push((n, 1));
            break;
        }
        let mut e = 0;
        while (&n % d).is_zero() {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((dd, e));
            if let Some(small) = n.to_u64() {
                out.extend(factor_u64(small).into_iter().map(|(p, e)| (BigUint::from(p), e)));
                break;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    out
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while n > 1 {
        if d.saturating_mul(d) > n || is_prime_u64(n) {
            out.push((n, 1));
            break;
        }
        // squares of large primes are common inputs (norms of squares)
        let r = n.sqrt();
        if r > 1 && r * r == n {
            out.extend(factor_u64(r).into_iter().map(|(p, e)| (p, 2 * e)));
            break;
        }
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    out
}

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller–Rabin with the first twelve prime bases: deterministic below
/// 3.3·10²⁴, far past the desk-scale inputs this crate targets.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for a in WITNESSES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    if n < 37 * 37 {
        return true;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in WITNESSES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
