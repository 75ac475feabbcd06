//! Exact arithmetic over Q: valuations, S-units, factorization and points of
//! the projective line.

mod factor;
mod point;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub(crate) use factor::small_primes;
pub use factor::{factor, is_prime, is_prime_int, Effort, Factorization, TRIAL_BOUND};
pub use point::{log_distance, ProjPoint};

/// An element of Q, always stored in lowest terms with positive denominator.
pub type Rat = BigRational;

/// A p-adic valuation. `v_p(0)` is the dedicated [`Valuation::Infinite`]
/// variant rather than a sentinel number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Shift by a finite amount; `∞ + k = ∞`.
    pub fn offset(self, k: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + k),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer. `p` must be at least 2.
pub(crate) fn int_valuation(n: &BigInt, p: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    if p == &BigInt::from(2) {
        return n.trailing_zeros().unwrap_or(0);
    }
    let mut m = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        m = q;
        e += 1;
    }
}

fn int_valuation_or_inf(n: &BigInt, p: &BigInt) -> Valuation {
    if n.is_zero() {
        Valuation::Infinite
    } else {
        Valuation::Finite(int_valuation(n, p) as i64)
    }
}

/// `v_p(q)` for a rational `q`.
pub fn valuation(q: &Rat, p: &BigInt) -> Result<Valuation> {
    if !is_prime_int(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    if q.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let v = int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64;
    Ok(Valuation::Finite(v))
}

/// A finite set of places of Q: the archimedean place together with a
/// sorted set of rational primes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PrimeSet {
    primes: BTreeSet<BigInt>,
}

impl PrimeSet {
    /// The set containing only the archimedean place.
    pub fn archimedean() -> Self {
        Self::default()
    }

    pub fn new<I: IntoIterator<Item = BigInt>>(primes: I) -> Result<Self> {
        let primes: BTreeSet<BigInt> = primes.into_iter().collect();
        if let Some(bad) = primes.iter().find(|p| !is_prime_int(p)) {
            return Err(Error::NotPrime(bad.clone()));
        }
        Ok(PrimeSet { primes })
    }

    pub(crate) fn from_certified(primes: BTreeSet<BigInt>) -> Self {
        PrimeSet { primes }
    }

    /// Always true: the archimedean place belongs to every `PrimeSet`.
    pub fn includes_archimedean(&self) -> bool {
        true
    }

    /// `|S|`, counting the archimedean place.
    pub fn size(&self) -> usize {
        self.primes.len() + 1
    }

    pub fn contains(&self, p: &BigInt) -> bool {
        self.primes.contains(p)
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.primes.iter()
    }

    pub fn finite_len(&self) -> usize {
        self.primes.len()
    }

    /// `|n|` with every prime of the set divided out.
    pub fn strip(&self, n: &BigInt) -> BigInt {
        let mut m = n.abs();
        if m.is_zero() {
            return m;
        }
        for p in &self.primes {
            loop {
                let (q, r) = m.div_rem(p);
                if !r.is_zero() {
                    break;
                }
                m = q;
            }
        }
        m
    }

    /// True iff `n` is nonzero and every prime factor of `n` lies in the set.
    pub fn supports(&self, n: &BigInt) -> bool {
        !n.is_zero() && self.strip(n).is_one()
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{inf")?;
        for p in &self.primes {
            write!(f, ", {p}")?;
        }
        f.write_str("}")
    }
}

/// True iff `v_p(q) = 0` for every prime `p` outside `s`.
pub fn is_s_unit(q: &Rat, s: &PrimeSet) -> Result<bool> {
    if q.is_zero() {
        return Err(Error::Zero("is_s_unit"));
    }
    Ok(s.supports(q.numer()) && s.supports(q.denom()))
}

/// Parse `a` or `a/b` into a rational.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Rat::new(n, d))
        }
        None => text.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}
