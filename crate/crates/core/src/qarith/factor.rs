//! Primality testing and integer factorization.
//!
//! Factorization is trial division by every prime below [`TRIAL_BOUND`],
//! followed by Brent's variant of Pollard rho on whatever remains. Pieces that
//! resist the configured [`Effort`] are returned as an explicit composite
//! cofactor; nothing is ever dropped.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial division covers every prime strictly below this bound.
pub const TRIAL_BOUND: u32 = 1_000_000;

// Miller-Rabin with these bases is deterministic for n < 3.3 * 10^24.
const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const MR_DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;
// Additional fixed bases used above the deterministic limit.
const MR_EXTRA_BASES: [u32; 24] = [
    43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139,
    149, 151, 157,
];

pub(crate) fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut composite = vec![false; n];
        let mut primes = Vec::with_capacity(80_000);
        for i in 2..n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        let p = p as u64;
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES[..12] {
        let mut x = pow_mod_u64(a as u64, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: &BigUint, d: &BigUint, s: u64, base: u32) -> bool {
    let n_minus_1 = n - 1u32;
    let mut x = BigUint::from(base).modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Primality test: deterministic below 3.3·10^24, strong probable prime to
/// 37 fixed bases above.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &small_primes()[..200] {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let deterministic = n.to_u128().is_some_and(|v| v < MR_DETERMINISTIC_LIMIT);
    let extra: &[u32] = if deterministic { &[] } else { &MR_EXTRA_BASES };
    MR_BASES
        .iter()
        .chain(extra)
        .all(|&a| strong_probable_prime(n, &d, s, a))
}

/// Primality of a signed integer; negative numbers and 0, 1 are not prime.
pub fn is_prime_int(n: &BigInt) -> bool {
    n.sign() == num_bigint::Sign::Plus && is_prime(n.magnitude())
}

/// Work budget for the Pollard rho stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Effort {
    /// Iterations per rho attempt.
    pub rho_iterations: u64,
    /// Number of distinct polynomial constants tried per composite.
    pub rho_attempts: u32,
}

impl Default for Effort {
    fn default() -> Self {
        Effort {
            rho_iterations: 1 << 18,
            rho_attempts: 6,
        }
    }
}

impl Effort {
    /// Trial division only.
    pub fn trial_only() -> Self {
        Effort {
            rho_iterations: 0,
            rho_attempts: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Certified primes with exponents, ascending.
    pub factors: Vec<(BigInt, u32)>,
    /// Product of the composite pieces that resisted the effort budget.
    pub cofactor: Option<BigInt>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Product of all prime powers and the cofactor.
    pub fn value(&self) -> BigInt {
        let mut acc = self.cofactor.clone().unwrap_or_else(BigInt::one);
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        acc
    }
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

// Brent's cycle-finding variant of Pollard rho on x -> x^2 + c.
fn pollard_brent(n: &BigUint, c: u64, max_iters: u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let step = |v: &BigUint| (v * v + c) % n;
    let mut y = BigUint::from(2u32);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r: u64 = 1;
    let mut spent: u64 = 0;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = step(&y);
                q = q * abs_diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        spent += r;
        r *= 2;
        if g.is_one() && spent > max_iters {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = step(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

/// Factor `n` (sign ignored). See the module docs for the strategy.
pub fn factor(n: &BigInt, effort: Effort) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Zero("factor"));
    }
    let mut rest = n.magnitude().clone();
    let mut found: BTreeMap<BigUint, u32> = BTreeMap::new();

    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        if let Some(r) = rest.to_u64() {
            if (p as u64) * (p as u64) > r {
                break;
            }
        }
        if (&rest % p).is_zero() {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            found.insert(BigUint::from(p), e);
        }
    }

    let mut cofactor = BigUint::one();
    if !rest.is_one() {
        let bound_sq = BigUint::from(TRIAL_BOUND as u64 * TRIAL_BOUND as u64);
        let mut stack = vec![rest];
        while let Some(c) = stack.pop() {
            if c < bound_sq || is_prime(&c) {
                *found.entry(c).or_insert(0) += 1;
                continue;
            }
            let split = (1..=effort.rho_attempts as u64)
                .find_map(|constant| pollard_brent(&c, constant, effort.rho_iterations));
            match split {
                Some(f) => {
                    let other = &c / &f;
                    stack.push(f);
                    stack.push(other);
                }
                None => cofactor *= c,
            }
        }
    }

    Ok(Factorization {
        factors: found
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect(),
        cofactor: (!cofactor.is_one()).then(|| BigInt::from(cofactor)),
    })
}
