//! Shared fixtures for unit tests.

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::dynmap::RationalMap;
use crate::forms::BinaryForm;
use crate::qarith::ProjPoint;

pub fn pt(x: i64, y: i64) -> ProjPoint {
    ProjPoint::new(x.into(), y.into()).unwrap()
}

pub fn map(f: &[i64], g: &[i64]) -> RationalMap {
    RationalMap::from_forms(BinaryForm::from_i64(f), BinaryForm::from_i64(g)).unwrap()
}

pub fn square() -> RationalMap {
    map(&[1, 0, 0], &[0, 0, 1])
}

/// `(x - 1)(x - 2)/x^2`.
pub fn ex52_d2() -> RationalMap {
    map(&[1, -3, 2], &[1, 0, 0])
}

/// `(a z^2 + b z + c)/(e z + g)`: infinity is fixed and `-g/e` is a tail
/// point over it, so the portrait has both kinds of point.
pub fn random_map_with_tail(seed: u64) -> RationalMap {
    let mut rng = StdRng::seed_from_u64(seed);
    loop {
        let mut c = || rng.gen_range(-6i64..=6);
        let (a, b, cc, e, g) = (c(), c(), c(), c(), c());
        if a == 0 || e == 0 {
            continue;
        }
        if let Ok(m) = RationalMap::from_forms(
            BinaryForm::from_i64(&[a, b, cc]),
            BinaryForm::from_i64(&[0, e, g]),
        ) {
            return m;
        }
    }
}

/// A random map of degree 2 or 3 with small coefficients.
pub fn random_map(seed: u64) -> RationalMap {
    let mut rng = StdRng::seed_from_u64(seed);
    if rng.gen_bool(0.4) {
        return random_map_with_tail(rng.gen());
    }
    let d = rng.gen_range(2..=3);
    loop {
        let f: Vec<BigInt> = (0..=d).map(|_| rng.gen_range(-5i64..=5).into()).collect();
        let g: Vec<BigInt> = (0..=d).map(|_| rng.gen_range(-5i64..=5).into()).collect();
        if let Ok(m) = RationalMap::from_forms(BinaryForm::new(f), BinaryForm::new(g)) {
            return m;
        }
    }
}
