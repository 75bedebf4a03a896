//! The four ternary quadratic families over ℤ[i]:
//!
//! | tag      | original form              | canonical form          |
//! |----------|----------------------------|-------------------------|
//! | `A`      | `X² + Y² + Z² = 0`         | `X² + Y² = Z²`          |
//! | `B1`     | `X² + iY² + Z² = 0`, `v(Y) = 1` | `X² + Z² = ±iY²`   |
//! | `B2`     | `X² + iY² + Z² = 0`, `v(Y) ≥ 2` | `X² + iY² = Z²`    |
//! | `C+`/`C-`| `X² + (1±i)Y² + Z² = 0`    | `X² + (1±i)Y² = Z²`     |
//! | `D`      | `X² + iY² + (1+i)Z² = 0`   | `X² + iY² = (1+i)Z²`    |
//!
//! `v` is the exponent of `1 + i`. The canonical form differs from the
//! original by rotating one coordinate by `i` (`Z` everywhere except `B1`,
//! where `Y` is rotated for the `+` sign and nothing for the `−` sign), so a
//! triple with `XYZ ≠ 0` solves at most one of the two forms and every
//! operation here accepts either shape.
//!
//! A canonical triple has its odd coordinates in `O^I` and its even
//! coordinate in G. Two adjustments make that definition total:
//!
//! * family `A` is symmetric, so the even coordinate is moved into `Y`;
//! * family `C` keeps `Z ∈ O^I` but takes `X ∈ ±O^I` with
//!   `(1+i)³ | Z − X`, which is the residue class the generator reaches.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{exact_sqrt, g_unit_exp, gcd_euclidean, sqrt_in_g, to_g};
use crate::gaussian::{GaussianInt, UnitPower};
use crate::mordell::mordell_normalize;
use crate::parity::normalize_odd_to_oi;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Family {
    A,
    B1,
    B2,
    #[serde(rename = "C+")]
    CPlus,
    #[serde(rename = "C-")]
    CMinus,
    D,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::A,
        Family::B1,
        Family::B2,
        Family::CPlus,
        Family::CMinus,
        Family::D,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B1 => "B1",
            Family::B2 => "B2",
            Family::CPlus => "C+",
            Family::CMinus => "C-",
            Family::D => "D",
        }
    }

    pub fn original_equation(self) -> &'static str {
        match self {
            Family::A => "X^2+Y^2+Z^2=0",
            Family::B1 | Family::B2 => "X^2+iY^2+Z^2=0",
            Family::CPlus => "X^2+(1+i)Y^2+Z^2=0",
            Family::CMinus => "X^2+(1-i)Y^2+Z^2=0",
            Family::D => "X^2+iY^2+(1+i)Z^2=0",
        }
    }

    pub fn canonical_equation(self) -> &'static str {
        match self {
            Family::A => "X^2+Y^2=Z^2",
            Family::B1 => "X^2+Z^2=±iY^2",
            Family::B2 => "X^2+iY^2=Z^2",
            Family::CPlus => "X^2+(1+i)Y^2=Z^2",
            Family::CMinus => "X^2+(1-i)Y^2=Z^2",
            Family::D => "X^2+iY^2=(1+i)Z^2",
        }
    }

    /// Coefficients `(b, c)` of the original form `X² + bY² + cZ² = 0`.
    pub fn coefficients(self) -> (GaussianInt, GaussianInt) {
        let one = GaussianInt::one();
        match self {
            Family::A => (one.clone(), one),
            Family::B1 | Family::B2 => (GaussianInt::i(), one),
            Family::CPlus => (GaussianInt::new(1, 1), one),
            Family::CMinus => (GaussianInt::new(1, -1), one),
            Family::D => (GaussianInt::i(), GaussianInt::new(1, 1)),
        }
    }

    /// Whether the family carries an explicit `±` in its parameters.
    pub fn has_sign(self) -> bool {
        self == Family::B1
    }

    /// Whether every primitive solution is claimed to come from the
    /// generator (all families except `D`).
    pub fn is_complete(self) -> bool {
        self != Family::D
    }

    /// The restriction on `Y` that separates `B1` from `B2`.
    pub fn admits_y(self, y: &GaussianInt) -> bool {
        match self {
            Family::B1 => y.valuation_one_plus_i() == 1,
            Family::B2 => y.valuation_one_plus_i() >= 2,
            _ => true,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(Family::A),
            "B1" => Ok(Family::B1),
            "B2" => Ok(Family::B2),
            "C+" | "Cplus" => Ok(Family::CPlus),
            "C-" | "Cminus" => Ok(Family::CMinus),
            "D" => Ok(Family::D),
            _ => Err(Error::Malformed(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    fn apply(self, z: GaussianInt) -> GaussianInt {
        match self {
            Sign::Plus => z,
            Sign::Minus => -z,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" | "\u{2212}" => Ok(Sign::Minus),
            _ => Err(Error::Malformed(format!("unknown sign {s:?}"))),
        }
    }
}

/// A candidate solution. `primitive` is computed from the coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Triple {
    pub x: GaussianInt,
    pub y: GaussianInt,
    pub z: GaussianInt,
    pub primitive: bool,
}

impl Triple {
    pub fn new(x: GaussianInt, y: GaussianInt, z: GaussianInt) -> Self {
        let primitive = gcd_euclidean(&gcd_euclidean(&x, &y), &z).is_unit();
        Triple { x, y, z, primitive }
    }

    pub fn from_array([x, y, z]: [GaussianInt; 3]) -> Self {
        Triple::new(x, y, z)
    }

    pub fn coords(&self) -> [&GaussianInt; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn to_array(&self) -> [GaussianInt; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn has_zero(&self) -> bool {
        self.coords().iter().any(|c| c.is_zero())
    }

    /// Exponents of `1 + i` in `X, Y, Z`; zero coordinates report 0.
    pub fn valuations(&self) -> [u32; 3] {
        self.coords()
            .map(|c| if c.is_zero() { 0 } else { c.valuation_one_plus_i() })
    }

    pub fn map(&self, f: impl Fn(&GaussianInt) -> GaussianInt) -> Triple {
        Triple::new(f(&self.x), f(&self.y), f(&self.z))
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}, {}", self.x, self.y, self.z)
    }
}

impl FromStr for Triple {
    type Err = Error;

    /// Three Gaussian integers separated by commas, optionally parenthesized.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = body.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(s.to_string()));
        }
        Ok(Triple::new(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FamilyParams {
    pub t: UnitPower,
    pub p: GaussianInt,
    pub q: GaussianInt,
    pub sign: Option<Sign>,
}

impl FamilyParams {
    pub fn new(t: UnitPower, p: GaussianInt, q: GaussianInt) -> Self {
        FamilyParams { t, p, q, sign: None }
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = Some(sign);
        self
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={}, P={}, Q={}", self.t.exponent(), self.p, self.q)?;
        if let Some(s) = self.sign {
            write!(f, ", sign={s}")?;
        }
        Ok(())
    }
}

/// How the coordinates of an input triple map onto a canonical triple:
/// `input[perm[j]] = i^units[j] · canonical[j]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct CanonicalCertificate {
    pub perm: [usize; 3],
    pub units: [UnitPower; 3],
}

impl CanonicalCertificate {
    pub fn identity() -> Self {
        CanonicalCertificate {
            perm: [0, 1, 2],
            units: [UnitPower::ONE; 3],
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Rebuilds the input triple from the canonical one.
    pub fn apply(&self, canonical: &Triple) -> Triple {
        let c = canonical.to_array();
        let mut out = [GaussianInt::zero(), GaussianInt::zero(), GaussianInt::zero()];
        for j in 0..3 {
            out[self.perm[j]] = c[j].rotate(self.units[j]);
        }
        Triple::from_array(out)
    }
}

// ---------------------------------------------------------------------------
// evaluating the forms

fn sign_of_t(t: UnitPower) -> i64 {
    if t.exponent().is_multiple_of(2) { 1 } else { -1 }
}

/// `X² + bY² + cZ²`.
pub fn original_form(family: Family, t: &Triple) -> GaussianInt {
    let (b, c) = family.coefficients();
    t.x.square() + b * t.y.square() + c * t.z.square()
}

/// The canonical form moved to one side; `sign` only matters for `B1`.
pub fn canonical_form(family: Family, sign: Sign, t: &Triple) -> GaussianInt {
    match family {
        Family::B1 => t.x.square() + t.z.square() - sign.apply(GaussianInt::i()) * t.y.square(),
        _ => {
            let (b, c) = family.coefficients();
            t.x.square() + b * t.y.square() - c * t.z.square()
        }
    }
}

/// `XYZ ≠ 0`, the original form vanishes and `Y` fits the family tag.
pub fn check_solution(family: Family, t: &Triple) -> bool {
    !t.has_zero() && family.admits_y(&t.y) && original_form(family, t).is_zero()
}

/// Same as [`check_solution`] for the canonical form (either sign for `B1`).
pub fn check_canonical(family: Family, t: &Triple) -> bool {
    if t.has_zero() || !family.admits_y(&t.y) {
        return false;
    }
    match family {
        Family::B1 => b1_sign(t).is_some(),
        _ => canonical_form(family, Sign::Plus, t).is_zero(),
    }
}

/// The `ε` with `X² + Z² = εiY²`, if any.
pub fn b1_sign(t: &Triple) -> Option<Sign> {
    [Sign::Plus, Sign::Minus]
        .into_iter()
        .find(|s| canonical_form(Family::B1, *s, t).is_zero())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Shape {
    Original,
    Canonical,
}

/// Which of the two forms the triple solves. For `B1` the `−` canonical form
/// coincides with the original one and is reported as `Original`.
pub fn recognize(family: Family, t: &Triple) -> Result<Shape> {
    if check_solution(family, t) {
        Ok(Shape::Original)
    } else if check_canonical(family, t) {
        Ok(Shape::Canonical)
    } else {
        Err(Error::NotASolution(format!(
            "({t}) solves neither {} nor {}",
            family.original_equation(),
            family.canonical_equation()
        )))
    }
}

/// Rewrites a solution of either form as a solution of the original form.
pub fn to_original(family: Family, t: &Triple) -> Result<Triple> {
    Ok(match recognize(family, t)? {
        Shape::Original => t.clone(),
        Shape::Canonical => match family {
            // X² + Z² = iY²  ⇔  X² + i(−iY)² + Z² = 0
            Family::B1 => Triple::new(t.x.clone(), t.y.rotate(UnitPower::new(3)), t.z.clone()),
            _ => Triple::new(t.x.clone(), t.y.clone(), t.z.rotate(UnitPower::new(1))),
        },
    })
}

/// Rewrites a solution of the original form as a solution of the canonical one.
fn original_to_canonical_shape(family: Family, t: &Triple) -> Triple {
    match family {
        Family::B1 => t.clone(),
        _ => Triple::new(t.x.clone(), t.y.clone(), t.z.rotate(UnitPower::new(1))),
    }
}

fn require_primitive(t: &Triple) -> Result<()> {
    if t.primitive {
        Ok(())
    } else {
        Err(Error::NotASolution(format!("({t}) is not primitive")))
    }
}

/// The `(1+i)`-divisibility pattern forced on primitive solutions:
/// `A`: one coordinate even, divisible by `(1+i)²`, the other two odd;
/// `B1`, `B2`, `C`: `X, Z` odd and `Y` even (`C`: by `(1+i)²`);
/// `D`: all three odd.
pub fn divisibility_profile(family: Family, t: &Triple) -> Result<bool> {
    let o = to_original(family, t)?;
    require_primitive(&o)?;
    let v = o.valuations();
    Ok(match family {
        Family::A => {
            let even: Vec<u32> = v.into_iter().filter(|&e| e > 0).collect();
            even.len() == 1 && even[0] >= 2
        }
        Family::B1 => v[0] == 0 && v[2] == 0 && v[1] == 1,
        Family::B2 | Family::CPlus | Family::CMinus => v[0] == 0 && v[2] == 0 && v[1] >= 2,
        Family::D => v == [0, 0, 0],
    })
}

/// Parity residues of the unit exponents when the odd coordinates are
/// written `i^m·α′`, `i^n·β′`, `i^l·γ′` with primes in `O^I`, for a primitive
/// solution in original form. `A`, `B2`, `C`: `m + l` odd; `B1`: `m + l`
/// even; `D`: `m + l` and `n + l` odd. For `A` the two odd coordinates are
/// taken in order.
pub fn parity_lemma_holds(family: Family, t: &Triple) -> Result<bool> {
    let o = to_original(family, t)?;
    require_primitive(&o)?;
    let odd: Vec<&GaussianInt> = o.coords().into_iter().filter(|c| c.is_odd()).collect();
    let exp = |z: &GaussianInt| -> Result<u8> { Ok(normalize_odd_to_oi(z)?.0.exponent()) };
    Ok(match family {
        Family::A => {
            if odd.len() != 2 {
                return Ok(false);
            }
            (exp(odd[0])? + exp(odd[1])?) % 2 == 1
        }
        Family::B1 => (exp(&o.x)? + exp(&o.z)?) % 2 == 0,
        Family::B2 | Family::CPlus | Family::CMinus => (exp(&o.x)? + exp(&o.z)?) % 2 == 1,
        Family::D => {
            let (m, n, l) = (exp(&o.x)?, exp(&o.y)?, exp(&o.z)?);
            (m + l) % 2 == 1 && (n + l) % 2 == 1
        }
    })
}

// ---------------------------------------------------------------------------
// reduction to canonical form

/// Rotates every coordinate of a primitive solution into `O^I` (odd
/// coordinates) or G (the even one) and arranges the result so it solves
/// the canonical form. The certificate rebuilds the input exactly.
pub fn reduce_to_canonical(family: Family, t: &Triple) -> Result<(Triple, CanonicalCertificate)> {
    let original = to_original(family, t)?;
    require_primitive(&original)?;
    if !divisibility_profile(family, &original)? {
        return Err(Error::Profile(format!(
            "({t}) has (1+i)-valuations {:?}",
            original.valuations()
        )));
    }

    // family A: move the even coordinate into the middle
    let order: [usize; 3] = match (family, original.valuations()) {
        (Family::A, [v, _, _]) if v > 0 => [1, 0, 2],
        (Family::A, [_, _, v]) if v > 0 => [0, 2, 1],
        _ => [0, 1, 2],
    };
    let o = original.to_array();
    let permuted = Triple::from_array(order.map(|k| o[k].clone()));
    let shaped = original_to_canonical_shape(family, &permuted);

    let normalized: Vec<GaussianInt> = shaped
        .coords()
        .into_iter()
        .map(|c| {
            if c.is_odd() {
                normalize_odd_to_oi(c).map(|(_, b)| b)
            } else {
                to_g(c)
            }
        })
        .collect::<Result<_>>()?;

    let arrangements: &[[usize; 3]] = match family {
        Family::A | Family::B2 | Family::CPlus | Family::CMinus => &[[0, 1, 2], [2, 1, 0]],
        Family::B1 | Family::D => &[[0, 1, 2]],
    };
    let x_signs: &[Sign] = match family {
        Family::CPlus | Family::CMinus => &[Sign::Plus, Sign::Minus],
        _ => &[Sign::Plus],
    };
    let (canonical, arr) = arrangements
        .iter()
        .flat_map(|arr| x_signs.iter().map(move |s| (arr, *s)))
        .map(|(arr, s)| {
            let cand = Triple::new(
                s.apply(normalized[arr[0]].clone()),
                normalized[arr[1]].clone(),
                normalized[arr[2]].clone(),
            );
            (cand, *arr)
        })
        .find(|(cand, _)| check_canonical(family, cand) && c_residue_ok(family, cand))
        .ok_or_else(|| Error::Malformed(format!("({t}) has no canonical arrangement")))?;

    let input = t.to_array();
    let canon = canonical.to_array();
    let mut cert = CanonicalCertificate::identity();
    for j in 0..3 {
        let k = order[arr[j]];
        let u = UnitPower::all()
            .find(|u| canon[j].rotate(*u) == input[k])
            .ok_or_else(|| Error::Malformed(format!("({t}) lost a coordinate during reduction")))?;
        cert.perm[j] = k;
        cert.units[j] = u;
    }
    Ok((canonical, cert))
}

fn c_residue_ok(family: Family, t: &Triple) -> bool {
    match family {
        Family::CPlus | Family::CMinus => {
            let cube = GaussianInt::new(-2, 2);
            (&t.z - &t.x).is_divisible_by(&cube)
        }
        _ => true,
    }
}

// ---------------------------------------------------------------------------
// parametric generation and recovery

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

/// Checks the side conditions of each family's parametrization.
pub fn validate_params(family: Family, params: &FamilyParams) -> Result<()> {
    let (p, q) = (&params.p, &params.q);
    if p.is_zero() || q.is_zero() {
        return Err(invalid("P and Q must be nonzero"));
    }
    if !gcd_euclidean(p, q).is_unit() {
        return Err(invalid(format!("gcd({p}, {q}) is not a unit")));
    }
    match (family.has_sign(), params.sign) {
        (true, None) => return Err(invalid(format!("family {family} needs a sign"))),
        (false, Some(_)) => return Err(invalid(format!("family {family} takes no sign"))),
        _ => {}
    }
    let pq_even = (p * q).is_even();
    match family {
        Family::A | Family::B2 if !pq_even => Err(invalid("PQ must be divisible by 1+i")),
        Family::B1 if p.is_even() || q.is_even() => Err(invalid("P and Q must be odd")),
        Family::CPlus | Family::CMinus if p.is_even() => {
            Err(invalid("gcd(P, (1+i)Q) must be a unit"))
        }
        Family::D if q.is_odd() => Err(invalid("Q must be divisible by 1+i")),
        Family::D if params.t != UnitPower::ONE => Err(invalid("family D has no rotation parameter")),
        _ => Ok(()),
    }
}

/// The parametric solution of the canonical form.
pub fn generate(family: Family, params: &FamilyParams) -> Result<Triple> {
    validate_params(family, params)?;
    let (t, p, q) = (params.t, &params.p, &params.q);
    let s = GaussianInt::from(sign_of_t(t));
    let p2 = p.square();
    let q2 = q.square();
    let rot = t + UnitPower::new(1);
    let two_i = GaussianInt::new(0, 2);
    let one_plus_i = GaussianInt::one_plus_i();

    let triple = match family {
        Family::A | Family::B2 | Family::CPlus | Family::CMinus => {
            let coef = match family {
                Family::A => GaussianInt::one(),
                Family::B2 => GaussianInt::i(),
                Family::CPlus => GaussianInt::new(1, 1),
                _ => GaussianInt::new(1, -1),
            };
            let shift = s * coef * q2;
            Triple::new(
                (&p2 - &shift).rotate(rot),
                two_i * p * q,
                (&p2 + &shift).rotate(rot),
            )
        }
        Family::B1 => {
            let eps = params.sign.expect("validated");
            let shift = eps.apply(s * GaussianInt::i() * q2);
            let halve = |w: GaussianInt| {
                w.div_exact(&one_plus_i)
                    .ok_or_else(|| invalid("P² ± iQ² is not divisible by 1+i"))
            };
            Triple::new(
                halve(&p2 + &shift)?.rotate(rot),
                &one_plus_i * p * q,
                halve(&p2 - &shift)?.rotate(t),
            )
        }
        Family::D => {
            let c = GaussianInt::new(-1, 1); // (1+i)·i
            let pq = p * q;
            Triple::new(
                &p2 - &c * &q2,
                &p2 - GaussianInt::new(2, 2) * &pq + &c * &q2,
                &p2 - &two_i * &pq + &c * &q2,
            )
        }
    };
    Ok(triple)
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

/// Inverts [`generate`] on a canonical-form triple, returning `P, Q ∈ G`.
///
/// The two quotients `i^t·P²` and `i^(−t)·Q²` are formed from the
/// coordinates, `t` is read off by [`mordell_normalize`] and `P, Q` are
/// square roots inside G.
pub fn param_recover(family: Family, t: &Triple) -> Result<FamilyParams> {
    if family == Family::D {
        return Err(Error::Unsupported(
            "family D has no complete parametrization to invert".into(),
        ));
    }
    if !check_canonical(family, t) {
        return Err(Error::NotASolution(format!(
            "({t}) does not solve {}",
            family.canonical_equation()
        )));
    }
    let (x, z) = (&t.x, &t.z);
    let two_i = GaussianInt::new(0, 2);
    let exact = |num: GaussianInt, den: &GaussianInt| {
        num.div_exact(den)
            .ok_or_else(|| malformed(format!("({t}): {num} is not divisible by {den}")))
    };
    let mut sign = None;
    let (p_side, q_side) = match family {
        Family::A => (exact(z + x, &two_i)?, exact(z - x, &two_i)?),
        Family::B2 => (exact(z + x, &two_i)?, exact(x - z, &GaussianInt::from(2))?),
        Family::CPlus | Family::CMinus => {
            let c = family.coefficients().0;
            (exact(z + x, &two_i)?, exact(z - x, &(&two_i * &c))?)
        }
        Family::B1 => {
            let eps = b1_sign(t).expect("checked canonical");
            sign = Some(eps);
            let ix = x.rotate(UnitPower::new(1));
            (
                exact(z - &ix, &GaussianInt::new(1, -1))?,
                eps.apply(-exact(z + &ix, &GaussianInt::one_plus_i())?),
            )
        }
        Family::D => unreachable!(),
    };
    let n = mordell_normalize(&p_side, &q_side)
        .map_err(|_| malformed(format!("({t}): no rotation t fits {p_side}, {q_side}")))?;
    let root = |w: GaussianInt| {
        sqrt_in_g(&w)?.ok_or_else(|| malformed(format!("({t}): {w} is not a square in G")))
    };
    let params = FamilyParams {
        t: n.inverse(),
        p: root(p_side.rotate(n))?,
        q: root(q_side.rotate(n.inverse()))?,
        sign,
    };
    match generate(family, &params) {
        Ok(back) if &back == t => Ok(params),
        _ => Err(malformed(format!(
            "({t}) is not in the image of the {family} generator"
        ))),
    }
}

/// Parameters of the `D` generator reproducing `t` up to the sign of each
/// coordinate, if any. Used to report which `D` solutions the family covers.
pub fn match_d_generator(t: &Triple) -> Option<FamilyParams> {
    if !check_canonical(Family::D, t) {
        return None;
    }
    let signs = [Sign::Plus, Sign::Minus];
    for sx in signs {
        for sy in signs {
            for sz in signs {
                let v = Triple::new(sx.apply(t.x.clone()), sy.apply(t.y.clone()), sz.apply(t.z.clone()));
                if let Some(params) = match_d_exact(&v) {
                    return Some(params);
                }
            }
        }
    }
    None
}

fn match_d_exact(t: &Triple) -> Option<FamilyParams> {
    let sys = system_from_d(t).ok()?;
    // x + iv = P² on the generator image
    let p2 = &sys.x + sys.v.rotate(UnitPower::new(1));
    if p2.is_zero() {
        return None;
    }
    let p = sqrt_in_g(&p2).ok()??;
    let q = sys.v.div_exact(&p)?;
    let params = FamilyParams::new(UnitPower::ONE, p, q);
    (generate(Family::D, &params).ok()? == *t).then_some(params)
}

// ---------------------------------------------------------------------------
// the quadratic system behind family D

/// `(x, y, u, v)` with `x − y = u + v` and `xy = iuv`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SystemSolution {
    pub x: GaussianInt,
    pub y: GaussianInt,
    pub u: GaussianInt,
    pub v: GaussianInt,
}

impl SystemSolution {
    /// `x − y = u + v`, `xy = iuv`, `gcd(x, y)` and `gcd(u, v)` units and
    /// `uv ≡ 0 (mod 1+i)`.
    pub fn is_valid(&self) -> bool {
        let (x, y, u, v) = (&self.x, &self.y, &self.u, &self.v);
        x - y == u + v
            && x * y == (u * v).rotate(UnitPower::new(1))
            && gcd_euclidean(x, y).is_unit()
            && gcd_euclidean(u, v).is_unit()
            && (u * v).is_even()
    }

    /// `(u + v)² + 4iuv`, the square of the discriminant.
    pub fn discriminant_squared(&self) -> GaussianInt {
        disc_squared(&self.u, &self.v)
    }
}

fn disc_squared(u: &GaussianInt, v: &GaussianInt) -> GaussianInt {
    (u + v).square() + GaussianInt::new(0, 4) * u * v
}

/// `x = (X+Z)/2`, `y = (X−Z)/2`, `u = (Z+Y)/2`, `v = (Z−Y)/2` for a
/// canonical `D` triple.
pub fn system_from_d(t: &Triple) -> Result<SystemSolution> {
    if !check_canonical(Family::D, t) {
        return Err(Error::NotASolution(format!(
            "({t}) does not solve {}",
            Family::D.canonical_equation()
        )));
    }
    let halve = |w: GaussianInt| w.half().ok_or_else(|| malformed(format!("({t}): {w} is not divisible by 2")));
    Ok(SystemSolution {
        x: halve(&t.x + &t.z)?,
        y: halve(&t.x - &t.z)?,
        u: halve(&t.z + &t.y)?,
        v: halve(&t.z - &t.y)?,
    })
}

/// `(X, Y, Z) = (x + y, u − v, x − y)`.
pub fn d_from_system(sys: &SystemSolution) -> Result<Triple> {
    if !sys.is_valid() {
        return Err(invalid(format!(
            "({}, {}, {}, {}) violates the system invariants",
            sys.x, sys.y, sys.u, sys.v
        )));
    }
    Ok(Triple::new(&sys.x + &sys.y, &sys.u - &sys.v, &sys.x - &sys.y))
}

/// Solutions `(x, y)` of `x − y = u + v`, `xy = iuv`, i.e. `x` and `−y` are
/// the roots of `z² − (u+v)z − iuv`. Empty when the discriminant is not a
/// perfect square. The discriminant root taken first is the one in `O^I`.
pub fn quadratic_root_solutions(
    u: &GaussianInt,
    v: &GaussianInt,
) -> Result<Vec<(GaussianInt, GaussianInt)>> {
    let sum = u + v;
    if u.is_zero() || v.is_zero() {
        return Err(invalid("u and v must be nonzero"));
    }
    if !gcd_euclidean(u, v).is_unit() {
        return Err(invalid(format!("gcd({u}, {v}) is not a unit")));
    }
    if !(u * v).is_even() {
        return Err(invalid("uv must be divisible by 1+i"));
    }
    if sum.is_even() {
        return Err(invalid("u + v must be odd"));
    }
    let d2 = disc_squared(u, v);
    if d2.is_zero() {
        return Ok(Vec::new());
    }
    let Some(root) = exact_sqrt(&d2)? else {
        return Ok(Vec::new());
    };
    let root = normalize_odd_to_oi(&root)?.1;
    let mut out = Vec::with_capacity(2);
    for d in [root.clone(), -root] {
        if let (Some(x), Some(y)) = ((&sum + &d).half(), (&d - &sum).half()) {
            out.push((x, y));
        }
    }
    Ok(out)
}

fn require_d_params(p: &GaussianInt, q: &GaussianInt) -> Result<()> {
    validate_params(Family::D, &FamilyParams::new(UnitPower::ONE, p.clone(), q.clone()))?;
    if g_unit_exp(p)? != UnitPower::ONE || g_unit_exp(q)? != UnitPower::ONE {
        return Err(invalid("P and Q must lie in G"));
    }
    Ok(())
}

/// `disc = P² + (1−i)Q²`, `u = P² − (1−i)Q² − (1+2i)PQ`, `v = PQ`.
pub fn discriminant_params(
    p: &GaussianInt,
    q: &GaussianInt,
) -> Result<(GaussianInt, GaussianInt, GaussianInt)> {
    require_d_params(p, q)?;
    let one_minus_i = GaussianInt::new(1, -1);
    let p2 = p.square();
    let lq2 = one_minus_i * q.square();
    let pq = p * q;
    let disc = &p2 + &lq2;
    let u = &p2 - &lq2 - GaussianInt::new(1, 2) * &pq;
    Ok((disc, u, pq))
}

/// The system solution `x = P² − iPQ`, `y = (1−i)Q² + iPQ` with `u, v` from
/// [`discriminant_params`].
pub fn system_params(p: &GaussianInt, q: &GaussianInt) -> Result<SystemSolution> {
    let (_, u, v) = discriminant_params(p, q)?;
    let ipq = (p * q).rotate(UnitPower::new(1));
    Ok(SystemSolution {
        x: p.square() - &ipq,
        y: GaussianInt::new(1, -1) * q.square() + ipq,
        u,
        v,
    })
}

// ---------------------------------------------------------------------------
// random parameters

fn random_g<R: Rng + ?Sized>(rng: &mut R, max_norm: u64) -> GaussianInt {
    let r = (max_norm as f64).sqrt() as i64;
    loop {
        let a = rng.gen_range(-r..=r);
        let b = rng.gen_range(-r..=r);
        let n = (a * a + b * b) as u64;
        if n >= 1 && n <= max_norm {
            return to_g(&GaussianInt::new(a, b)).expect("nonzero");
        }
    }
}

/// Uniformly drawn valid parameters with `P, Q ∈ G` and norms at most
/// `max_norm` (at least 2 so that an even parameter exists).
pub fn sample_params<R: Rng + ?Sized>(family: Family, rng: &mut R, max_norm: u64) -> FamilyParams {
    let max_norm = max_norm.max(2);
    loop {
        let t = if family == Family::D {
            UnitPower::ONE
        } else {
            UnitPower::new(rng.gen_range(0..4))
        };
        let mut params = FamilyParams::new(t, random_g(rng, max_norm), random_g(rng, max_norm));
        if family.has_sign() {
            params.sign = Some(if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus });
        }
        if validate_params(family, &params).is_ok() {
            return params;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    fn tri(x: (i64, i64), y: (i64, i64), z: (i64, i64)) -> Triple {
        Triple::new(x.into(), y.into(), z.into())
    }

    fn params(t: i64, p: (i64, i64), q: (i64, i64)) -> FamilyParams {
        FamilyParams::new(UnitPower::new(t), p.into(), q.into())
    }

    #[test]
    fn check_solution_examples() {
        assert!(check_canonical(Family::A, &tri((-2, -1), (-2, 2), (-2, 1))));
        assert!(check_canonical(Family::D, &tri((3, 2), (-1, -6), (1, -4))));
        assert!(!check_canonical(Family::A, &tri((1, 0), (1, 0), (1, 0))));
        assert!(!check_solution(Family::A, &tri((1, 0), (1, 0), (1, 0))));
        // (1+2i)² + (−2+2i)² + (i(1−2i))² = 0
        assert!(check_solution(Family::A, &tri((1, 2), (-2, 2), (2, 1))));
        assert!(!check_solution(Family::A, &tri((0, 0), (1, 0), (0, 1))));
    }

    #[test]
    fn forms_are_disjoint_on_examples() {
        let t = tri((-2, -1), (-2, 2), (-2, 1));
        assert_eq!(recognize(Family::A, &t).unwrap(), Shape::Canonical);
        let o = to_original(Family::A, &t).unwrap();
        assert!(check_solution(Family::A, &o));
        assert_eq!(recognize(Family::A, &o).unwrap(), Shape::Original);
    }

    #[test]
    fn profile_examples() {
        assert!(divisibility_profile(Family::A, &tri((-2, -1), (-2, 2), (-2, 1))).unwrap());
        assert!(divisibility_profile(Family::D, &tri((3, 2), (-1, -6), (1, -4))).unwrap());
        assert!(divisibility_profile(Family::CPlus, &tri((2, 3), (-2, 2), (-2, -1))).unwrap());
        assert!(matches!(
            divisibility_profile(Family::A, &tri((1, 0), (1, 0), (1, 0))),
            Err(Error::NotASolution(_))
        ));
    }

    #[test]
    fn reduce_examples() {
        let (c, cert) = reduce_to_canonical(Family::A, &tri((-2, -1), (-2, 2), (-2, 1))).unwrap();
        assert_eq!(c, tri((1, 2), (-2, 2), (1, -2)));
        assert_eq!(cert.apply(&c), tri((-2, -1), (-2, 2), (-2, 1)));

        let fixed = tri((1, 2), (-2, 2), (1, -2));
        let (c, cert) = reduce_to_canonical(Family::A, &fixed).unwrap();
        assert_eq!(c, fixed);
        assert!(cert.is_identity());
    }

    #[test]
    fn reduce_d_rotated_instance() {
        let base = tri((3, 2), (-1, -6), (1, -4));
        let rotated = base.map(|c| c.rotate(UnitPower::new(1)));
        let (c, cert) = reduce_to_canonical(Family::D, &rotated).unwrap();
        // every coordinate lands in O^I
        assert_eq!(c, tri((-3, -2), (1, 6), (1, -4)));
        assert_eq!(cert.apply(&c), rotated);
        for (a, b) in c.coords().into_iter().zip(base.coords()) {
            assert!(a == b || a == &-b);
        }
    }

    #[test]
    fn reduce_moves_even_coordinate_into_y() {
        // (1+i)³ in the first slot of an original-form solution
        let t = tri((-2, 2), (1, 2), (2, 1));
        assert!(check_solution(Family::A, &t));
        let (c, cert) = reduce_to_canonical(Family::A, &t).unwrap();
        assert_eq!(c.y, g(-2, 2));
        assert_eq!(cert.apply(&c), t);
    }

    #[test]
    fn generate_examples() {
        assert_eq!(
            generate(Family::A, &params(0, (1, 1), (1, 0))).unwrap(),
            tri((-2, -1), (-2, 2), (-2, 1))
        );
        let b1 = generate(Family::B1, &params(0, (1, -2), (1, 0)).with_sign(Sign::Plus)).unwrap();
        assert_eq!(b1, tri((0, -3), (3, -1), (-4, -1)));
        assert_eq!(b1_sign(&b1), Some(Sign::Plus));
        let c = generate(Family::CPlus, &params(0, (1, 0), (1, 1))).unwrap();
        assert_eq!(c, tri((2, 3), (-2, 2), (-2, -1)));
        assert!(check_canonical(Family::CPlus, &c));
        let d = generate(Family::D, &params(0, (1, 0), (1, 1))).unwrap();
        assert_eq!(d, tri((3, 2), (-1, -6), (1, -4)));
    }

    #[test]
    fn generate_rejects_bad_params() {
        // PQ odd
        assert!(generate(Family::A, &params(0, (1, 0), (1, 0))).is_err());
        // common factor
        assert!(generate(Family::A, &params(0, (1, 2), (2, 4))).is_err());
        // B1 without a sign, or with an even parameter
        assert!(generate(Family::B1, &params(0, (1, 0), (1, 0))).is_err());
        assert!(generate(Family::B1, &params(0, (1, 1), (1, 0)).with_sign(Sign::Plus)).is_err());
        // C with even P
        assert!(generate(Family::CMinus, &params(0, (1, 1), (1, 0))).is_err());
        // D with odd Q or a rotation
        assert!(generate(Family::D, &params(0, (1, 1), (1, 0))).is_err());
        assert!(generate(Family::D, &params(1, (1, 0), (1, 1))).is_err());
        // sign on a family without one
        assert!(generate(Family::A, &params(0, (1, 1), (1, 0)).with_sign(Sign::Plus)).is_err());
    }

    #[test]
    fn recover_examples() {
        let p = param_recover(Family::A, &tri((1, 2), (-2, 2), (1, -2))).unwrap();
        assert_eq!(p, params(3, (1, 0), (1, 1)));
        let p = param_recover(Family::B1, &tri((0, -3), (3, -1), (-4, -1))).unwrap();
        assert_eq!(p, params(0, (1, -2), (1, 0)).with_sign(Sign::Plus));
        assert!(matches!(
            param_recover(Family::D, &tri((3, 2), (-1, -6), (1, -4))),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn system_examples() {
        let t = tri((3, 2), (-1, -6), (1, -4));
        let sys = system_from_d(&t).unwrap();
        assert_eq!((&sys.x, &sys.y, &sys.u, &sys.v), (&g(2, -1), &g(1, 3), &g(0, -5), &g(1, 1)));
        assert!(sys.is_valid());
        assert_eq!(&sys.x * &sys.y, g(5, 5));
        assert_eq!(d_from_system(&sys).unwrap(), t);
        assert_eq!(system_params(&g(1, 0), &g(1, 1)).unwrap(), sys);
    }

    #[test]
    fn quadratic_examples() {
        let roots = quadratic_root_solutions(&g(0, -5), &g(1, 1)).unwrap();
        assert!(roots.contains(&(g(2, -1), g(1, 3))));
        assert_eq!(roots.len(), 2);
        // the other discriminant sign gives (−y, −x)
        assert!(roots.contains(&(g(-1, -3), g(-2, 1))));
        assert!(quadratic_root_solutions(&g(1, 0), &g(0, 2)).unwrap().is_empty());
        assert!(quadratic_root_solutions(&g(1, 1), &g(1, -1)).is_err());
    }

    #[test]
    fn discriminant_example() {
        let (disc, u, v) = discriminant_params(&g(1, 0), &g(1, 1)).unwrap();
        assert_eq!((disc.clone(), u.clone(), v.clone()), (g(3, 2), g(0, -5), g(1, 1)));
        assert_eq!(disc.square(), disc_squared(&u, &v));
        assert!(discriminant_params(&g(1, 0), &g(1, 0)).is_err());
        // P outside G
        assert!(discriminant_params(&g(-1, 0), &g(1, 1)).is_err());
    }

    #[test]
    fn d_matching() {
        let t = tri((3, 2), (-1, -6), (1, -4));
        assert_eq!(match_d_generator(&t), Some(params(0, (1, 0), (1, 1))));
        let (c, _) = reduce_to_canonical(Family::D, &t).unwrap();
        assert!(match_d_generator(&c).is_some());
    }

    #[test]
    fn round_trip_small_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for family in Family::ALL {
            for _ in 0..40 {
                let p = sample_params(family, &mut rng, 200);
                let t = generate(family, &p).unwrap();
                assert!(check_canonical(family, &t), "{family} {p}");
                if family.is_complete() {
                    assert_eq!(param_recover(family, &t).unwrap(), p, "{family}");
                }
            }
        }
    }

    #[test]
    fn parity_lemma_example() {
        assert!(parity_lemma_holds(Family::A, &tri((-2, -1), (-2, 2), (-2, 1))).unwrap());
        assert!(parity_lemma_holds(Family::D, &tri((3, 2), (-1, -6), (1, -4))).unwrap());
    }

    #[test]
    fn text_forms() {
        for f in Family::ALL {
            assert_eq!(f.tag().parse::<Family>().unwrap(), f);
            assert_eq!(serde_json::to_string(&f).unwrap(), format!("\"{}\"", f.tag()));
        }
        let t: Triple = "(-2-1i, -2+2i, -2+1i)".parse().unwrap();
        assert_eq!(t.to_string(), "-2-1i, -2+2i, -2+1i");
        assert!("1, 2".parse::<Triple>().is_err());
    }
}
