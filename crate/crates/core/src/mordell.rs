//! Solutions of `XY = kV²` with `gcd(X, Y)` a unit, for `k, V` in the G-set.
//!
//! Every solution has the shape `X = i^t·k₁·P²`, `Y = i^(−t)·k₂·Q²` with
//! `k = k₁k₂`, `V = PQ` and `k₁, k₂, P, Q ∈ G`. Coprimality of `X` and `Y`
//! forces every prime power of `k` (resp. `V`) to go wholly into `k₁` or
//! `k₂` (resp. `P` or `Q`), so the solutions are enumerated as subsets of
//! prime-power blocks crossed with the four unit rotations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorization::{factor, g_unit_exp, gcd_euclidean, CanonicalFactorization};
use crate::gaussian::{GaussianInt, UnitPower};

/// A validated pair `(k, V)`: both in G, `kV ≠ 0`, `gcd(k, V)` a unit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MordellInstance {
    k: GaussianInt,
    v: GaussianInt,
    k_factors: CanonicalFactorization,
    v_factors: CanonicalFactorization,
}

impl MordellInstance {
    pub fn new(k: GaussianInt, v: GaussianInt) -> Result<Self> {
        if k.is_zero() || v.is_zero() {
            return Err(Error::InvalidInstance("kV must be nonzero".into()));
        }
        let k_factors = factor(&k)?;
        let v_factors = factor(&v)?;
        if k_factors.unit_exp != UnitPower::ONE {
            return Err(Error::InvalidInstance(format!("k = {k} is not in G")));
        }
        if v_factors.unit_exp != UnitPower::ONE {
            return Err(Error::InvalidInstance(format!("V = {v} is not in G")));
        }
        if !gcd_euclidean(&k, &v).is_unit() {
            return Err(Error::InvalidInstance(format!("gcd({k}, {v}) is not a unit")));
        }
        Ok(MordellInstance {
            k,
            v,
            k_factors,
            v_factors,
        })
    }

    pub fn k(&self) -> &GaussianInt {
        &self.k
    }

    pub fn v(&self) -> &GaussianInt {
        &self.v
    }

    /// The right-hand side `kV²`.
    pub fn rhs(&self) -> GaussianInt {
        &self.k * &self.v.square()
    }

    /// `4 · 2^ω(k) · 2^ω(V)`, the size of the solution set.
    pub fn expected_count(&self) -> usize {
        4 << (self.k_factors.distinct_primes() + self.v_factors.distinct_primes())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MordellSolution {
    pub t: UnitPower,
    pub k1: GaussianInt,
    pub k2: GaussianInt,
    pub p: GaussianInt,
    pub q: GaussianInt,
}

impl MordellSolution {
    /// `X = i^t·k₁·P²`.
    pub fn x(&self) -> GaussianInt {
        (&self.k1 * &self.p.square()).rotate(self.t)
    }

    /// `Y = i^(−t)·k₂·Q²`.
    pub fn y(&self) -> GaussianInt {
        (&self.k2 * &self.q.square()).rotate(self.t.inverse())
    }

    pub fn to_json(&self) -> MordellSolutionJson {
        MordellSolutionJson {
            t: self.t.exponent(),
            k1: self.k1.to_string(),
            k2: self.k2.to_string(),
            p: self.p.to_string(),
            q: self.q.to_string(),
            x: self.x().to_string(),
            y: self.y().to_string(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MordellSolutionJson {
    pub t: u8,
    pub k1: String,
    pub k2: String,
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
    #[serde(rename = "X")]
    pub x: String,
    #[serde(rename = "Y")]
    pub y: String,
}

/// All `(X, Y)` solving the instance, ordered by `(t, k₁, P)` with `k₁` and
/// `P` compared by their canonical text form.
pub fn mordell_solutions(inst: &MordellInstance) -> Vec<MordellSolution> {
    let k_blocks = inst.k_factors.prime_powers();
    let v_blocks = inst.v_factors.prime_powers();
    let k_splits = splittings(&k_blocks);
    let v_splits = splittings(&v_blocks);

    let mut out = Vec::with_capacity(inst.expected_count());
    for t in UnitPower::all() {
        for (k1, k2) in &k_splits {
            for (p, q) in &v_splits {
                out.push(MordellSolution {
                    t,
                    k1: k1.clone(),
                    k2: k2.clone(),
                    p: p.clone(),
                    q: q.clone(),
                });
            }
        }
    }
    out.sort_by_cached_key(|s| (s.t, s.k1.to_string(), s.p.to_string()));
    out
}

/// Every way to distribute whole prime-power blocks between two factors.
fn splittings(blocks: &[(GaussianInt, u32)]) -> Vec<(GaussianInt, GaussianInt)> {
    let powers: Vec<GaussianInt> = blocks.iter().map(|(p, e)| p.pow(*e)).collect();
    (0u64..1 << powers.len())
        .map(|mask| {
            let mut left = GaussianInt::one();
            let mut right = GaussianInt::one();
            for (j, pw) in powers.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    left = left * pw;
                } else {
                    right = right * pw;
                }
            }
            (left, right)
        })
        .collect()
}

/// The rotation `n` with `i^n·X₀ ∈ G` and `i^(−n)·Y₀ ∈ G`.
pub fn mordell_normalize(x0: &GaussianInt, y0: &GaussianInt) -> Result<UnitPower> {
    let no_rotation = || Error::NoRotation(x0.to_string(), y0.to_string());
    if x0.is_zero() || y0.is_zero() || !gcd_euclidean(x0, y0).is_unit() {
        return Err(no_rotation());
    }
    let ux = g_unit_exp(x0)?;
    let uy = g_unit_exp(y0)?;
    if ux + uy != UnitPower::ONE {
        return Err(no_rotation());
    }
    Ok(ux.inverse())
}

/// `XY = kV²` and `gcd(X, Y)` is a unit.
pub fn verify_mordell(x: &GaussianInt, y: &GaussianInt, inst: &MordellInstance) -> bool {
    x * y == inst.rhs() && gcd_euclidean(x, y).is_unit()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    fn inst(k: (i64, i64), v: (i64, i64)) -> MordellInstance {
        MordellInstance::new(k.into(), v.into()).unwrap()
    }

    #[test]
    fn ramified_v() {
        let i = inst((1, 0), (1, 1));
        let sols = mordell_solutions(&i);
        assert_eq!(sols.len(), 8);
        let s = sols
            .iter()
            .find(|s| s.t == UnitPower::ONE && s.p == g(1, 0) && s.q == g(1, 1))
            .unwrap();
        assert_eq!((s.x(), s.y()), (g(1, 0), g(0, 2)));
        assert!(sols.iter().all(|s| verify_mordell(&s.x(), &s.y(), &i)));
    }

    #[test]
    fn odd_prime_k() {
        let i = inst((1, -2), (1, 0));
        let sols = mordell_solutions(&i);
        assert_eq!(sols.len(), 8);
        let s = sols
            .iter()
            .find(|s| s.t == UnitPower::ONE && s.k1 == g(1, -2))
            .unwrap();
        assert_eq!((s.x(), s.y()), (g(1, -2), g(1, 0)));
    }

    #[test]
    fn trivial_instance_gives_units() {
        let sols = mordell_solutions(&inst((1, 0), (1, 0)));
        let pairs: Vec<_> = sols.iter().map(|s| (s.x(), s.y())).collect();
        let expect: Vec<_> = UnitPower::all()
            .map(|t| (t.value(), t.inverse().value()))
            .collect();
        assert_eq!(pairs, expect);
    }

    #[test]
    fn output_order() {
        let sols = mordell_solutions(&inst((1, -2), (1, 1)));
        let keys: Vec<_> = sols
            .iter()
            .map(|s| (s.t, s.k1.to_string(), s.p.to_string()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn invalid_instances() {
        assert!(MordellInstance::new(g(0, 0), g(1, 0)).is_err());
        assert!(MordellInstance::new(g(2, 0), g(1, 0)).is_err());
        assert!(MordellInstance::new(g(1, 0), g(0, 1)).is_err());
        assert!(MordellInstance::new(g(1, 1), g(0, 2)).is_err());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(mordell_normalize(&g(0, 1), &g(2, 0)).unwrap(), UnitPower::new(3));
        assert_eq!(mordell_normalize(&g(1, 0), &g(0, 2)).unwrap(), UnitPower::new(0));
        assert_eq!(mordell_normalize(&g(0, 2), &g(1, 0)).unwrap(), UnitPower::new(0));
        // product of unit exponents is not 1: no rotation exists
        assert!(mordell_normalize(&g(0, 1), &g(1, 0)).is_err());
        // common factor
        assert!(mordell_normalize(&g(1, 1), &g(1, 1)).is_err());
    }

    #[test]
    fn normalize_matches_brute_force() {
        let i = inst((1, -2), (-3, 2));
        for s in mordell_solutions(&i) {
            let n = mordell_normalize(&s.x(), &s.y()).unwrap();
            let brute: Vec<_> = UnitPower::all()
                .filter(|m| {
                    factor(&s.x().rotate(*m)).unwrap().unit_exp == UnitPower::ONE
                        && factor(&s.y().rotate(m.inverse())).unwrap().unit_exp == UnitPower::ONE
                })
                .collect();
            assert_eq!(brute, vec![n]);
        }
    }

    #[test]
    fn verify_examples() {
        let i = inst((1, 0), (1, 1));
        assert!(verify_mordell(&g(1, 0), &g(0, 2), &i));
        assert!(!verify_mordell(&g(1, 1), &g(1, 1), &i));
        assert!(verify_mordell(&g(0, 2), &g(1, 0), &i));
    }
}
