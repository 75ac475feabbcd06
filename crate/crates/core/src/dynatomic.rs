//! Period polynomials `Φ_n = Y·F_n − X·G_n`, dynatomic polynomials
//! `Φ*_n = Π_{k|n} Φ_k^{μ(n/k)}`, multipliers, and the search for rational
//! periodic points.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::dynmap::RationalMap;
use crate::error::{Error, Result};
use crate::forms::{iterate_pairs, rational_roots, BinaryForm};
use crate::qarith::{ProjPoint, Rat};

/// Period bound used when the caller gives none: periods up to 6 for
/// `d ≤ 3`, 4 for `d ≤ 8`, 3 beyond (`deg Φ_n = d^n + 1`).
pub fn default_n_max(d: usize) -> usize {
    match d {
        0..=3 => 6,
        4..=8 => 4,
        _ => 3,
    }
}

/// `μ(n)`; `n ≥ 1`.
pub fn mobius(n: usize) -> i32 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let (mut n, mut sign, mut p) = (n, 1, 2);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|k| n.is_multiple_of(*k)).collect()
}

/// `Σ_{k|n} μ(n/k)(d^k + 1)`.
pub fn dynatomic_degree(d: usize, n: usize) -> BigInt {
    divisors(n)
        .into_iter()
        .map(|k| {
            let term = num_traits::pow(BigInt::from(d), k) + 1u32;
            term * mobius(n / k)
        })
        .sum()
}

/// False exactly for the pairs `(n, d)` = (2,2), (2,3), (3,2), (4,2), the
/// only ones with no points of primitive period `n` over an algebraically
/// closed field for some map of degree `d`.
pub fn baker_degree_check(d: usize, n: usize) -> bool {
    !matches!((n, d), (2, 2) | (2, 3) | (3, 2) | (4, 2))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynatomicRecord {
    pub n: usize,
    pub phi_n: BinaryForm,
    pub phi_star_n: BinaryForm,
    /// Whether `deg Φ*_n` matches the divisor-sum formula.
    pub degree_check: bool,
}

fn period_form(f_n: &BinaryForm, g_n: &BinaryForm) -> BinaryForm {
    (&(&BinaryForm::y() * f_n) - &(&BinaryForm::x() * g_n)).primitive()
}

/// `Φ_n` with content 1; its roots are the points with `φ^n(P) = P`.
pub fn period_polynomial(map: &RationalMap, n: usize) -> Result<BinaryForm> {
    if n == 0 {
        return Err(Error::InvalidParameter("period must be at least 1".into()));
    }
    let (f_n, g_n) = iterate_pairs(map.f(), map.g(), n)?.pop().expect("n >= 1");
    Ok(period_form(&f_n, &g_n))
}

fn product<'a>(forms: impl Iterator<Item = &'a BinaryForm>) -> BinaryForm {
    forms.fold(BinaryForm::one(), |acc, f| &acc * f)
}

/// `Φ*_n` from the period polynomials `phis[k-1] = Φ_k`, `k | n`.
fn star_from(phis: &[BinaryForm], n: usize) -> Result<BinaryForm> {
    let ks = divisors(n);
    let num = product(ks.iter().filter(|&&k| mobius(n / k) == 1).map(|&k| &phis[k - 1]));
    let den = product(ks.iter().filter(|&&k| mobius(n / k) == -1).map(|&k| &phis[k - 1]));
    num.exact_div(&den)
        .map_err(|_| Error::Invariant(format!("Φ_{n} is not divisible by its Möbius denominator")))
}

/// `Φ*_n`, which vanishes exactly at the points of formal period `n`.
pub fn dynatomic_polynomial(map: &RationalMap, n: usize) -> Result<BinaryForm> {
    Ok(dynatomic_records(map, n)?.pop().expect("n >= 1").phi_star_n)
}

/// `Φ_k` and `Φ*_k` for `k = 1..=n_max`.
pub fn dynatomic_records(map: &RationalMap, n_max: usize) -> Result<Vec<DynatomicRecord>> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("period must be at least 1".into()));
    }
    let phis: Vec<BinaryForm> = iterate_pairs(map.f(), map.g(), n_max)?
        .par_iter()
        .map(|(f, g)| period_form(f, g))
        .collect();
    let d = map.degree();
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let phi_star_n = star_from(&phis, n)?;
            let degree_check = BigInt::from(phi_star_n.degree()) == dynatomic_degree(d, n);
            Ok(DynatomicRecord {
                n,
                phi_n: phis[n - 1].clone(),
                phi_star_n,
                degree_check,
            })
        })
        .collect()
}

/// `n ↦ a*_P(n) = ord_P(Φ*_n)` over the given records, zero entries omitted.
pub fn formal_period_orders(records: &[DynatomicRecord], p: &ProjPoint) -> BTreeMap<usize, u32> {
    records
        .iter()
        .filter(|r| r.phi_star_n.evaluate_at(p).is_zero())
        .map(|r| (r.n, r.phi_star_n.multiplicity_at(p)))
        .collect()
}

/// `n ↦ a_P(n) = ord_P(Φ_n)`, zero entries omitted.
pub fn period_orders(records: &[DynatomicRecord], p: &ProjPoint) -> BTreeMap<usize, u32> {
    records
        .iter()
        .filter(|r| r.phi_n.evaluate_at(p).is_zero())
        .map(|r| (r.n, r.phi_n.multiplicity_at(p)))
        .collect()
}

/// Derivative of `φ` at `p` from the chart of `p` to the chart of `φ(p)`:
/// `z = X/Y` at finite points, `w = Y/X` at infinity.
fn local_derivative(map: &RationalMap, p: &ProjPoint) -> Rat {
    let (f, g) = (map.f(), map.g());
    let (x, y) = (p.x(), p.y());
    let (fv, gv) = (f.evaluate(x, y), g.evaluate(x, y));
    // Source chart variable: X when p is finite, Y at infinity.
    let (df, dg, scale) = if p.is_infinity() {
        (f.derivative_y(), g.derivative_y(), BigInt::one())
    } else {
        (f.derivative_x(), g.derivative_x(), y.clone())
    };
    let (dfv, dgv) = (df.evaluate(x, y), dg.evaluate(x, y));
    // Target chart: F/G when the image is finite, G/F otherwise.
    let (num, den) = if gv.is_zero() {
        (&dgv * &fv - &gv * &dfv, &fv * &fv)
    } else {
        (&dfv * &gv - &fv * &dgv, &gv * &gv)
    };
    Rat::new(num * scale, den)
}

/// `λ(P) = (φ^m)'(P)` by the chain rule around the cycle. Finite for every
/// point because each factor is taken in charts centred away from infinity.
pub fn multiplier(map: &RationalMap, p: &ProjPoint, m: usize) -> Result<Rat> {
    if m == 0 || map.iterate(p, m) != *p {
        return Err(Error::NotPeriodic {
            point: p.to_string(),
            period: m,
        });
    }
    let mut q = p.clone();
    let mut lambda = Rat::one();
    for _ in 0..m {
        lambda *= local_derivative(map, &q);
        q = map.apply(&q);
    }
    Ok(lambda)
}

/// Least `m ≤ bound` with `φ^m(P) = P`.
pub fn primitive_period(map: &RationalMap, p: &ProjPoint, bound: usize) -> Option<usize> {
    let mut q = p.clone();
    for m in 1..=bound {
        q = map.apply(&q);
        if &q == p {
            return Some(m);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPoint {
    pub point: ProjPoint,
    pub primitive_period: usize,
    pub multiplier: Rat,
    /// The `n ≤ n_max` with `a*_P(n) > 0`.
    pub formal_periods: BTreeSet<usize>,
}

/// Rational periodic points of primitive period at most `n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicSearch {
    /// Sorted by point.
    pub points: Vec<PeriodicPoint>,
    pub n_max: usize,
    /// Every `Φ*_n` root set was certified complete.
    pub roots_complete: bool,
}

impl PeriodicSearch {
    pub fn get(&self, p: &ProjPoint) -> Option<&PeriodicPoint> {
        self.points
            .binary_search_by(|q| q.point.cmp(p))
            .ok()
            .map(|i| &self.points[i])
    }
}

/// Union of the rational roots of `Φ*_n`, `n ≤ n_max`, each confirmed by
/// iteration and tagged with its true primitive period.
pub fn rational_periodic_points(map: &RationalMap, n_max: usize) -> Result<PeriodicSearch> {
    let records = dynatomic_records(map, n_max)?;
    periodic_points_from_records(map, &records)
}

pub fn periodic_points_from_records(
    map: &RationalMap,
    records: &[DynatomicRecord],
) -> Result<PeriodicSearch> {
    let n_max = records.len();
    let root_sets = records
        .par_iter()
        .map(|r| rational_roots(&r.phi_star_n))
        .collect::<Result<Vec<_>>>()?;
    let roots_complete = root_sets.iter().all(|r| r.complete);
    let mut found: BTreeMap<ProjPoint, usize> = BTreeMap::new();
    for (record, roots) in records.iter().zip(&root_sets) {
        for p in roots.points() {
            let m = primitive_period(map, p, record.n).ok_or_else(|| {
                Error::Invariant(format!("root {p} of Φ*_{} is not {}-periodic", record.n, record.n))
            })?;
            if record.n % m != 0 {
                return Err(Error::Invariant(format!(
                    "root {p} of Φ*_{} has primitive period {m}",
                    record.n
                )));
            }
            found.insert(p.clone(), m);
        }
    }
    let points = found
        .into_iter()
        .map(|(point, m)| {
            let formal_periods = records
                .iter()
                .filter(|r| r.phi_star_n.evaluate_at(&point).is_zero())
                .map(|r| r.n)
                .collect();
            Ok(PeriodicPoint {
                multiplier: multiplier(map, &point, m)?,
                primitive_period: m,
                formal_periods,
                point,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PeriodicSearch {
        points,
        n_max,
        roots_complete,
    })
}
