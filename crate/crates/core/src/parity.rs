//! Parity classes of nonzero Gaussian integers and the two associate
//! normalizations: into the fundamental domain `D` and into the monoid `O^I`.
//!
//! A nonzero `z = a + bi` is *even* when `1 + i` divides it (`a + b` even) and
//! *odd* otherwise. Each half splits again on the parity of `a`:
//!
//! | class | `a + b` | `a`  | `(R(z²), I(z²)) mod 4` |
//! |-------|---------|------|------------------------|
//! | `E0`  | even    | even | `(0, 0)`               |
//! | `EI`  | even    | odd  | `(0, 2)`               |
//! | `O0`  | odd     | even | `(3, 0)`               |
//! | `OI`  | odd     | odd  | `(1, 0)`               |

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianInt, UnitPower};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum ParityClass {
    E0,
    EI,
    O0,
    OI,
}

impl ParityClass {
    pub fn is_even(self) -> bool {
        matches!(self, ParityClass::E0 | ParityClass::EI)
    }

    pub fn is_odd(self) -> bool {
        !self.is_even()
    }

    pub fn name(self) -> &'static str {
        match self {
            ParityClass::E0 => "E0",
            ParityClass::EI => "EI",
            ParityClass::O0 => "O0",
            ParityClass::OI => "OI",
        }
    }

    /// `(R(z²) mod 4, I(z²) mod 4)` shared by every member of the class.
    pub fn square_residues(self) -> (u8, u8) {
        match self {
            ParityClass::E0 => (0, 0),
            ParityClass::EI => (0, 2),
            ParityClass::O0 => (3, 0),
            ParityClass::OI => (1, 0),
        }
    }
}

impl fmt::Display for ParityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParityClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E0" => Ok(ParityClass::E0),
            "EI" => Ok(ParityClass::EI),
            "O0" => Ok(ParityClass::O0),
            "OI" => Ok(ParityClass::OI),
            _ => Err(Error::Malformed(format!("unknown parity class {s:?}"))),
        }
    }
}

fn mod4(n: &BigInt) -> u8 {
    n.mod_floor(&BigInt::from(4)).to_u8().expect("residue below 4")
}

fn nonzero(z: &GaussianInt, op: &'static str) -> Result<()> {
    if z.is_zero() {
        Err(Error::Zero(op))
    } else {
        Ok(())
    }
}

pub fn classify(z: &GaussianInt) -> Result<ParityClass> {
    nonzero(z, "classify")?;
    let re_even = z.re().is_even();
    Ok(match (z.is_even(), re_even) {
        (true, true) => ParityClass::E0,
        (true, false) => ParityClass::EI,
        (false, true) => ParityClass::O0,
        (false, false) => ParityClass::OI,
    })
}

/// Membership in `O^I`: odd with real part ≡ 1 (mod 4).
pub fn is_oi(z: &GaussianInt) -> Result<bool> {
    nonzero(z, "is_oi")?;
    Ok(z.is_odd() && mod4(z.re()) == 1)
}

/// Membership in `E0'`: `z ∈ E0` and `gcd(R(z), I(z)) = 2` over ℤ.
pub fn is_e0_prime(z: &GaussianInt) -> Result<bool> {
    Ok(classify(z)? == ParityClass::E0 && z.re().gcd(z.im()) == BigInt::from(2))
}

/// Membership in `E0''`: `z = (1+i)²·β` with `β` odd.
pub fn is_e0_dblprime(z: &GaussianInt) -> Result<bool> {
    nonzero(z, "is_e0_dblprime")?;
    Ok(z.valuation_one_plus_i() == 2)
}

/// `z ∈ D`: `re > 0` and `−re < im ≤ re`, the sector `−π/4 < Arg z ≤ π/4`.
pub fn in_fundamental_domain(z: &GaussianInt) -> bool {
    z.re().is_positive() && -z.re() < *z.im() && z.im() <= z.re()
}

/// The unique `(n, z′)` with `z = i^n·z′` and `z′ ∈ D`.
pub fn normalize_to_d(z: &GaussianInt) -> Result<(UnitPower, GaussianInt)> {
    nonzero(z, "normalize_to_d")?;
    UnitPower::all()
        .map(|n| (n, z.rotate(n.inverse())))
        .find(|(_, w)| in_fundamental_domain(w))
        .ok_or_else(|| unreachable_associate(z))
}

/// The unique `(n, β)` with `z = i^n·β` and `β ∈ O^I`; `z` must be odd.
pub fn normalize_odd_to_oi(z: &GaussianInt) -> Result<(UnitPower, GaussianInt)> {
    nonzero(z, "normalize_odd_to_oi")?;
    if z.is_even() {
        return Err(Error::NotOdd("normalize_odd_to_oi", z.to_string()));
    }
    UnitPower::all()
        .map(|n| (n, z.rotate(n.inverse())))
        .find(|(_, w)| w.re().is_odd() && mod4(w.re()) == 1)
        .ok_or_else(|| unreachable_associate(z))
}

fn unreachable_associate(z: &GaussianInt) -> Error {
    Error::Malformed(format!("no normalized associate of {z}"))
}

/// `(R(z²) mod 4, I(z²) mod 4)`, computed from the square itself.
pub fn square_residues(z: &GaussianInt) -> Result<(u8, u8)> {
    nonzero(z, "square_residues")?;
    let sq = z.square();
    Ok((mod4(sq.re()), mod4(sq.im())))
}
