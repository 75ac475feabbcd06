//! Two families with bad reduction only at 2 whose portraits grow with `d`.
//!
//! - `ex51`: `f_d(x) = 1/x + Π_{i=-d}^{d} (x − 2^i) / x^{2d+1}`, degree
//!   `2d + 1`. Each `2^i` with `i ≠ 0` is swapped with `2^{-i}`, `1` is fixed
//!   and `0 ↦ ∞ ↦ 1`.
//! - `ex52`: `f_d(x) = Π_{i=0}^{d-1} (x − 2^i) / x^d`, degree `d`. The cycle
//!   `0 ↦ ∞ ↦ 1 ↦ 0` picks up the tail points `2, 4, …, 2^{d-1}`, all
//!   mapping to `0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::dynatomic::default_n_max;
use crate::dynmap::RationalMap;
use crate::error::{Error, Result};
use crate::portrait::{build_portrait, Portrait};
use crate::qarith::{ProjPoint, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Ex51,
    Ex52,
}

impl Family {
    pub fn min_d(self) -> usize {
        match self {
            Family::Ex51 => 1,
            Family::Ex52 => 2,
        }
    }

    /// Degree of the map with parameter `d`.
    pub fn map_degree(self, d: usize) -> usize {
        match self {
            Family::Ex51 => 2 * d + 1,
            Family::Ex52 => d,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Ex51 => "ex51",
            Family::Ex52 => "ex52",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ex51" => Ok(Family::Ex51),
            "ex52" => Ok(Family::Ex52),
            other => Err(Error::InvalidParameter(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilySpec {
    pub family: Family,
    pub d: usize,
}

impl FamilySpec {
    pub fn new(family: Family, d: usize) -> Result<Self> {
        if d < family.min_d() {
            return Err(Error::InvalidParameter(format!(
                "{family} needs d >= {}, got {d}",
                family.min_d()
            )));
        }
        Ok(FamilySpec { family, d })
    }

    pub fn map_degree(&self) -> usize {
        self.family.map_degree(self.d)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} d={}", self.family, self.d)
    }
}

/// `2^i` for any integer `i`.
pub fn two_pow(i: i64) -> Rat {
    let p = BigInt::one() << i.unsigned_abs();
    if i >= 0 {
        Rat::from_integer(p)
    } else {
        Rat::new(BigInt::one(), p)
    }
}

/// Product of `(x − r)` over the roots, ascending coefficients.
fn from_roots(roots: impl IntoIterator<Item = Rat>) -> Vec<Rat> {
    let mut poly = vec![Rat::one()];
    for r in roots {
        let mut next = vec![Rat::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * &r;
        }
        poly = next;
    }
    poly
}

fn monomial(k: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); k + 1];
    v[k] = Rat::one();
    v
}

/// The family member; its bad primes are checked to lie in `{2}`.
pub fn generate(spec: FamilySpec) -> Result<RationalMap> {
    let FamilySpec { family, d } = FamilySpec::new(spec.family, spec.d)?;
    let (num, den) = match family {
        Family::Ex52 => (from_roots((0..d as i64).map(two_pow)), monomial(d)),
        Family::Ex51 => {
            let k = 2 * d;
            let mut num = from_roots((-(d as i64)..=d as i64).map(two_pow));
            num[k] += Rat::one();
            (num, monomial(k + 1))
        }
    };
    let map = RationalMap::build(&num, &den)?;
    let two = BigInt::from(2);
    if map.bad_primes().primes().any(|p| p != &two) || !map.bad_primes_complete() {
        return Err(Error::Invariant(format!(
            "{spec} has bad primes {} outside {{2}}",
            map.bad_primes()
        )));
    }
    Ok(map)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimReport {
    pub spec: FamilySpec,
    pub claims: Vec<Claim>,
    pub per: usize,
    pub tail: usize,
}

impl ClaimReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }
}

fn point(q: &Rat) -> ProjPoint {
    ProjPoint::from_rat(q)
}

/// Check each statement about named points against the map and portrait.
pub fn verify_claims(spec: FamilySpec, portrait: &Portrait) -> ClaimReport {
    let map = &portrait.map;
    let mut claims = Vec::new();
    let mut claim = |name: String, pass: bool| claims.push(Claim { name, pass });
    let two = BigInt::from(2);
    let inf = ProjPoint::infinity();
    let (zero, one) = (ProjPoint::from_int(0), ProjPoint::from_int(1));

    match spec.family {
        Family::Ex52 => {
            let bad: Vec<&BigInt> = map.bad_primes().primes().collect();
            claim("bad primes are exactly {2}".into(), bad == [&two] && map.bad_primes_complete());
            let walk = [map.apply(&zero), map.apply(&inf), map.apply(&one)];
            claim("0 -> inf -> 1 -> 0".into(), walk == [inf.clone(), one.clone(), zero.clone()]);
            claim(
                "portrait has the cycle (inf, 1, 0)".into(),
                portrait.cycles.contains(&vec![inf.clone(), one.clone(), zero.clone()]),
            );
            for i in 1..spec.d as i64 {
                let p = point(&two_pow(i));
                let ok = portrait
                    .tail(&p)
                    .is_some_and(|t| t.depth == 1 && t.image == zero);
                claim(format!("2^{i} is a tail point mapping to 0"), ok);
            }
        }
        Family::Ex51 => {
            let supported = map.bad_primes().primes().all(|p| p == &two) && map.bad_primes_complete();
            claim("bad primes lie in {2}".into(), supported);
            claim("f(1) = 1".into(), map.apply(&one) == one);
            claim(
                "portrait has the fixed point 1".into(),
                portrait.cycles.contains(&vec![one.clone()]),
            );
            for i in (-(spec.d as i64)..=spec.d as i64).filter(|&i| i != 0) {
                let p = point(&two_pow(i));
                let q = point(&two_pow(-i));
                claim(format!("f(2^{i}) = 2^{}", -i), map.apply(&p) == q);
                let in_cycle = portrait.cycle_of(&p).is_some_and(|c| c.len() == 2 && c.contains(&q));
                claim(format!("2^{i} has period 2 in the portrait"), in_cycle);
            }
            claim(
                "0 -> inf -> 1".into(),
                map.apply(&zero) == inf && map.apply(&inf) == one,
            );
            let tails_ok = portrait.tail(&zero).is_some_and(|t| t.depth == 2)
                && portrait.tail(&inf).is_some_and(|t| t.depth == 1);
            claim("0 and inf are tail points of depth 2 and 1".into(), tails_ok);
        }
    }
    let counts = portrait.counts();
    ClaimReport {
        spec,
        claims,
        per: counts.per,
        tail: counts.tail,
    }
}

/// Portraits for several parameters, computed in parallel and returned in
/// the order given. `n_max = None` uses the default for each map degree.
pub fn sweep(family: Family, ds: &[usize], n_max: Option<usize>) -> Result<Vec<(FamilySpec, Portrait)>> {
    ds.par_iter()
        .map(|&d| {
            let spec = FamilySpec::new(family, d)?;
            let map = generate(spec)?;
            let n = n_max.unwrap_or_else(|| default_n_max(map.degree()));
            Ok((spec, build_portrait(&map, n)?))
        })
        .collect()
}

/// Whether `|Tail|` never decreases along the sweep.
pub fn tail_nondecreasing(reports: &[ClaimReport]) -> bool {
    reports.windows(2).all(|w| w[0].tail <= w[1].tail)
}
