use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{int_valuation, int_valuation_or_inf, is_prime_int, Rat, Valuation};
use crate::error::{Error, Result};

/// A point `[x:y]` of `P^1(Q)` with coprime integer coordinates, `y > 0`,
/// or `[1:0]` for the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    x: BigInt,
    y: BigInt,
}

impl ProjPoint {
    pub fn new(x: BigInt, y: BigInt) -> Result<Self> {
        if x.is_zero() && y.is_zero() {
            return Err(Error::ZeroPoint);
        }
        let g = x.gcd(&y);
        let (mut x, mut y) = (x / &g, y / &g);
        if y.is_negative() || (y.is_zero() && x.is_negative()) {
            x = -x;
            y = -y;
        }
        Ok(ProjPoint { x, y })
    }

    pub fn infinity() -> Self {
        ProjPoint {
            x: BigInt::one(),
            y: BigInt::zero(),
        }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        ProjPoint {
            x: n.into(),
            y: BigInt::one(),
        }
    }

    pub fn from_rat(q: &Rat) -> Self {
        ProjPoint {
            x: q.numer().clone(),
            y: q.denom().clone(),
        }
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    pub fn to_rat(&self) -> Option<Rat> {
        (!self.is_infinity()).then(|| Rat::new(self.x.clone(), self.y.clone()))
    }

    /// Naive height `max(|x|, |y|)`.
    pub fn height(&self) -> BigInt {
        self.x.abs().max(self.y.clone())
    }

    /// `v_p` of the cross term `x₁y₂ − x₂y₁`; normalized points make this the
    /// logarithmic distance directly.
    pub fn log_distance(&self, other: &ProjPoint, p: &BigInt) -> Result<Valuation> {
        log_distance((&self.x, &self.y), (&other.x, &other.y), p)
    }

    /// `x₁y₂ − x₂y₁`.
    pub fn cross(&self, other: &ProjPoint) -> BigInt {
        &self.x * &other.y - &other.x * &self.y
    }
}

/// Points order by `(y, x)`: infinity first, then by denominator.
impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.y.cmp(&other.y).then_with(|| self.x.cmp(&other.x))
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            f.write_str("inf")
        } else if self.y.is_one() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{}/{}", self.x, self.y)
        }
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(ProjPoint::infinity());
        }
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let (x, y) = inner
                .split_once(':')
                .ok_or_else(|| Error::InvalidParameter(format!("bad point {s:?}")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::InvalidParameter(format!("bad point {s:?}")))
            };
            return ProjPoint::new(parse(x)?, parse(y)?);
        }
        super::parse_rat(s)
            .map(|q| ProjPoint::from_rat(&q))
            .ok_or_else(|| Error::InvalidParameter(format!("bad point {s:?}")))
    }
}

/// p-adic logarithmic distance between `[x₁:y₁]` and `[x₂:y₂]` given by
/// arbitrary (not necessarily coprime) representatives:
/// `v_p(x₁y₂ − x₂y₁) − min(v_p(x₁), v_p(y₁)) − min(v_p(x₂), v_p(y₂))`.
pub fn log_distance(
    p1: (&BigInt, &BigInt),
    p2: (&BigInt, &BigInt),
    p: &BigInt,
) -> Result<Valuation> {
    if !is_prime_int(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    let min_val = |(x, y): (&BigInt, &BigInt)| -> Result<i64> {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => Err(Error::ZeroPoint),
            (true, false) => Ok(int_valuation(y, p) as i64),
            (false, true) => Ok(int_valuation(x, p) as i64),
            (false, false) => Ok(int_valuation(x, p).min(int_valuation(y, p)) as i64),
        }
    };
    let m1 = min_val(p1)?;
    let m2 = min_val(p2)?;
    let cross = p1.0 * p2.1 - p2.0 * p1.1;
    Ok(int_valuation_or_inf(&cross, p).offset(-m1 - m2))
}
