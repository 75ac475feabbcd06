//! Test corpus shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use preperiodic::dynmap::RationalMap;
use preperiodic::forms::BinaryForm;
use preperiodic::ProjPoint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn pt(x: i64, y: i64) -> ProjPoint {
    ProjPoint::new(x.into(), y.into()).unwrap()
}

pub fn map(f: &[i64], g: &[i64]) -> RationalMap {
    RationalMap::from_forms(BinaryForm::from_i64(f), BinaryForm::from_i64(g)).unwrap()
}

/// `z^d`.
pub fn power_map(d: usize) -> RationalMap {
    let mut f = vec![0; d + 1];
    let mut g = vec![0; d + 1];
    f[0] = 1;
    g[d] = 1;
    map(&f, &g)
}

/// `(a z^2 + b z + c)/(e z + g)` with `a, e ≠ 0`: infinity is fixed and
/// `-g/e` maps onto it, so the portrait has a tail point.
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

/// A random map of the given degree with coefficients in `[-5, 5]`.
pub fn random_map(seed: u64, d: usize) -> RationalMap {
    let mut rng = StdRng::seed_from_u64(seed);
    loop {
        let f: Vec<BigInt> = (0..=d).map(|_| rng.gen_range(-5i64..=5).into()).collect();
        let g: Vec<BigInt> = (0..=d).map(|_| rng.gen_range(-5i64..=5).into()).collect();
        if let Ok(m) = RationalMap::from_forms(BinaryForm::new(f), BinaryForm::new(g)) {
            return m;
        }
    }
}

/// A random point of height at most `h`.
pub fn random_point(rng: &mut StdRng, h: i64) -> ProjPoint {
    loop {
        let (a, b) = (rng.gen_range(-h..=h), rng.gen_range(0..=h));
        if let Ok(p) = ProjPoint::new(a.into(), b.into()) {
            return p;
        }
    }
}

/// Hand-picked maps with known structure.
pub fn named_maps() -> Vec<(&'static str, RationalMap)> {
    vec![
        ("z^2", power_map(2)),
        ("z^2 - 1", map(&[1, 0, -1], &[0, 0, 1])),
        // Fixed point 0 with multiplier -1: formal periods 1 and 2.
        ("z^2 - z", map(&[1, -1, 0], &[0, 0, 1])),
        ("z^2 - 3/4", map(&[4, 0, -3], &[0, 0, 4])),
        ("(z - 1)(z - 2)/z^2", map(&[1, -3, 2], &[1, 0, 0])),
        ("1/z^2", map(&[0, 0, 1], &[1, 0, 0])),
        ("z^3", power_map(3)),
        ("(z^2 + 1)/(2z)", map(&[1, 0, 1], &[0, 2, 0])),
    ]
}
