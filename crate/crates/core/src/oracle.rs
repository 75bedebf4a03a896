//! Brute-force ground truth: every primitive solution of a family's original
//! form with all coordinates in the box `max(|re|, |im|) ≤ bound`.
//!
//! For each `(X, Y)` in the box the remaining coordinate is forced up to sign,
//! `Z² = −(X² + bY²)/c`, so the search extracts an exact integer square root
//! instead of looping over `Z`. Nothing here calls the parametrizations; the
//! enumeration only evaluates the defining equation and a gcd.

use num_integer::Roots;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families::{
    check_solution, divisibility_profile, generate, match_d_generator, param_recover,
    parity_lemma_holds, reduce_to_canonical, Family, Triple,
};
use crate::gaussian::GaussianInt;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "GAUSS_DIOPH_THREADS";

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchBox {
    bound: i64,
}

impl SearchBox {
    pub fn new(bound: i64) -> Result<Self> {
        if bound < 1 {
            return Err(Error::Malformed(format!("search bound must be at least 1, got {bound}")));
        }
        if bound > 1 << 20 {
            return Err(Error::Malformed(format!("search bound {bound} is too large")));
        }
        Ok(SearchBox { bound })
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    fn contains(&self, (re, im): (i64, i64)) -> bool {
        re.abs() <= self.bound && im.abs() <= self.bound
    }

    fn points(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let b = self.bound;
        (-b..=b).flat_map(move |re| (-b..=b).map(move |im| (re, im)))
    }
}

type Pair = (i64, i64);

fn mul((a, b): Pair, (c, d): Pair) -> Pair {
    (a * c - b * d, a * d + b * c)
}

/// Both square roots of `w`, or none.
fn sqrt_pair((a, b): Pair) -> Option<[Pair; 2]> {
    let n = a * a + b * b;
    let m = n.sqrt();
    if m * m != n {
        return None;
    }
    // w = (x + yi)² gives x² = (m + a)/2 and y² = (m − a)/2
    if (m + a) % 2 != 0 {
        return None;
    }
    let (x2, y2) = ((m + a) / 2, (m - a) / 2);
    let (x, y) = (x2.sqrt(), y2.sqrt());
    if x * x != x2 || y * y != y2 {
        return None;
    }
    let y = if b < 0 { -y } else { y };
    if 2 * x * y != b {
        return None;
    }
    Some([(x, y), (-x, -y)])
}

/// Exact quotient by `c`, for `c ∈ {1, 1+i}`.
fn div_coefficient((a, b): Pair, c: Pair) -> Option<Pair> {
    match c {
        (1, 0) => Some((a, b)),
        // (a + bi)/(1 + i) = ((a + b) + (b − a)i)/2
        (1, 1) => ((a + b) % 2 == 0).then(|| ((a + b) / 2, (b - a) / 2)),
        _ => unreachable!("unsupported Z coefficient"),
    }
}

fn small(z: &GaussianInt) -> Pair {
    let conv = |v: &num_bigint::BigInt| i64::try_from(v).expect("coefficient fits in i64");
    (conv(z.re()), conv(z.im()))
}

fn thread_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            builder = builder.num_threads(n);
        }
    }
    builder.build().expect("thread pool")
}

/// All primitive solutions of the family's original form in the box,
/// restricted by the family's condition on `Y`, sorted and deduplicated.
pub fn enumerate_primitive(family: Family, search: SearchBox) -> Vec<Triple> {
    let (b, c) = family.coefficients();
    let (b, c) = (small(&b), small(&c));
    let xs: Vec<Pair> = search.points().collect();

    let mut out: Vec<Triple> = thread_pool().install(|| {
        xs.par_iter()
            .flat_map_iter(|&x| {
                search.points().flat_map(move |y| {
                    let x2 = mul(x, x);
                    let by2 = mul(b, mul(y, y));
                    let rhs = (-(x2.0 + by2.0), -(x2.1 + by2.1));
                    div_coefficient(rhs, c)
                        .and_then(sqrt_pair)
                        .into_iter()
                        .flatten()
                        .map(move |z| (x, y, z))
                })
            })
            .filter(|&(x, y, z)| {
                search.contains(z) && x != (0, 0) && y != (0, 0) && z != (0, 0)
            })
            .map(|(x, y, z)| Triple::new(x.into(), y.into(), z.into()))
            .filter(|t| t.primitive && family.admits_y(&t.y))
            .collect()
    });
    out.sort();
    out.dedup();
    out
}

/// A solution the parametrization did not account for.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Unmatched {
    pub triple: Triple,
    pub reason: String,
    /// False only for `D` solutions outside the generator image, which the
    /// family makes no claim about.
    pub hard: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CrossCheckReport {
    pub family: Family,
    pub bound: i64,
    pub total: usize,
    pub matched: usize,
    pub unmatched: Vec<Unmatched>,
}

impl CrossCheckReport {
    pub fn hard_failures(&self) -> usize {
        self.unmatched.iter().filter(|u| u.hard).count()
    }

    pub fn passed(&self) -> bool {
        self.hard_failures() == 0
    }
}

/// Runs every enumerated solution through the divisibility profile, the
/// parity residues and the canonical reduction; complete families must also
/// invert through [`param_recover`] and regenerate the canonical triple.
pub fn cross_check(family: Family, search: SearchBox) -> CrossCheckReport {
    let solutions = enumerate_primitive(family, search);
    let outcomes: Vec<Option<Unmatched>> = thread_pool()
        .install(|| solutions.par_iter().map(|t| check_one(family, t)).collect());
    let unmatched: Vec<Unmatched> = outcomes.into_iter().flatten().collect();
    CrossCheckReport {
        family,
        bound: search.bound(),
        total: solutions.len(),
        matched: solutions.len() - unmatched.len(),
        unmatched,
    }
}

fn check_one(family: Family, t: &Triple) -> Option<Unmatched> {
    let hard = |reason: String| {
        Some(Unmatched {
            triple: t.clone(),
            reason,
            hard: true,
        })
    };
    if !check_solution(family, t) {
        return hard("fails the original form".into());
    }
    match divisibility_profile(family, t) {
        Ok(true) => {}
        Ok(false) => return hard("divisibility profile violated".into()),
        Err(e) => return hard(e.to_string()),
    }
    match parity_lemma_holds(family, t) {
        Ok(true) => {}
        Ok(false) => return hard("parity residues violated".into()),
        Err(e) => return hard(e.to_string()),
    }
    let canonical = match reduce_to_canonical(family, t) {
        Ok((c, cert)) if cert.apply(&c) == *t => c,
        Ok(_) => return hard("certificate does not rebuild the input".into()),
        Err(e) => return hard(e.to_string()),
    };
    if !family.is_complete() {
        return match match_d_generator(&canonical) {
            Some(_) => None,
            None => Some(Unmatched {
                triple: t.clone(),
                reason: format!("canonical ({canonical}) is outside the generator image"),
                hard: false,
            }),
        };
    }
    match param_recover(family, &canonical) {
        Ok(params) => match generate(family, &params) {
            Ok(back) if back == canonical => None,
            _ => hard(format!("params {params} do not regenerate ({canonical})")),
        },
        Err(e) => hard(e.to_string()),
    }
}
