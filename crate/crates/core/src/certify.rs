//! Checks that turn the good-reduction arguments into runtime certificates,
//! and evaluators for the known bounds on `|Per|`, `|Tail|`, `|PrePer|` and
//! on orbit lengths.
//!
//! Every bound is stated for a set `S` of places containing the
//! archimedean one and all primes of bad reduction, so `s = |S|` is one more
//! than the number of bad primes.

use std::fmt;

use dashu_float::DBig;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::dynmap::RationalMap;
use crate::error::Result;
use crate::forms::{iterate_pairs, resultant, BinaryForm};
use crate::portrait::{Counts, Portrait};
use crate::qarith::ProjPoint;

// ---------------------------------------------------------------------------
// S-unit certificates

/// For a tail point `R` and a periodic point `P`, the cross term
/// `x_R y_P − x_P y_R` must be an S-unit unless `P = φ^{mn}(R)` with `m ≥ 1`
/// and `n` the length of the cycle `R` falls into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SUnitCertificate {
    pub tail_point: ProjPoint,
    pub periodic_point: ProjPoint,
    pub cross_term: BigInt,
    pub excluded: bool,
    /// Whether the cross term is supported on the bad primes. Recorded for
    /// excluded pairs too, where nothing is claimed.
    pub s_unit_ok: bool,
}

impl SUnitCertificate {
    pub fn is_failure(&self) -> bool {
        !self.excluded && !self.s_unit_ok
    }
}

/// The single periodic point of `{φ^{mn}(R) : m ≥ 1}`: iterate `mn` steps
/// with the least `m` such that `mn ≥ depth`.
pub fn excluded_partner(map: &RationalMap, r: &ProjPoint, depth: usize, cycle_len: usize) -> ProjPoint {
    let m = depth.div_ceil(cycle_len).max(1);
    map.iterate(r, m * cycle_len)
}

/// One certificate for every (tail point, periodic point) pair.
pub fn make_certificates(portrait: &Portrait) -> Vec<SUnitCertificate> {
    let map = &portrait.map;
    let periodic: Vec<&ProjPoint> = portrait.periodic_points().collect();
    portrait
        .tails
        .par_iter()
        .flat_map_iter(|t| {
            let n = portrait.cycle_of(&t.point).map_or(1, |c| c.len());
            let partner = excluded_partner(map, &t.point, t.depth, n);
            periodic
                .iter()
                .map(|p| {
                    let cross_term = t.point.cross(p);
                    SUnitCertificate {
                        tail_point: t.point.clone(),
                        periodic_point: (*p).clone(),
                        s_unit_ok: map.supported_on_bad_primes(&cross_term),
                        excluded: *p == &partner,
                        cross_term,
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Normalization under iteration

/// Points whose raw image `(F(P), G(P))` has a common factor outside the
/// bad primes. Empty for every normalized map.
pub fn image_normalization_failures<'a>(
    map: &RationalMap,
    sample: impl IntoIterator<Item = &'a ProjPoint>,
) -> Vec<ProjPoint> {
    sample
        .into_iter()
        .filter(|p| {
            let (a, b) = map.apply_raw(p);
            !map.supported_on_bad_primes(&num_integer::Integer::gcd(&a, &b))
        })
        .cloned()
        .collect()
}

pub fn check_image_normalization<'a>(
    map: &RationalMap,
    sample: impl IntoIterator<Item = &'a ProjPoint>,
) -> bool {
    image_normalization_failures(map, sample).is_empty()
}

/// Support of the content and resultant of the `n`-th iterate pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterateReduction {
    pub n: usize,
    pub content: BigInt,
    pub resultant: BigInt,
    pub content_supported: bool,
    pub resultant_supported: bool,
}

impl IterateReduction {
    pub fn ok(&self) -> bool {
        self.content_supported && self.resultant_supported
    }
}

/// For `k = 1..=n`: the iterate `(F_k, G_k)` keeps good reduction outside
/// the bad primes, so its content and resultant are supported on them.
pub fn check_iterate_reduction(map: &RationalMap, n: usize) -> Result<Vec<IterateReduction>> {
    iterate_pairs(map.f(), map.g(), n)?
        .par_iter()
        .enumerate()
        .map(|(i, (f, g))| {
            let content = crate::dynmap::joint_content(f, g);
            let res = resultant(&primitive_with(f, &content), &primitive_with(g, &content));
            Ok(IterateReduction {
                n: i + 1,
                content_supported: map.supported_on_bad_primes(&content),
                resultant_supported: map.supported_on_bad_primes(&res),
                content,
                resultant: res,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Bound formulas

/// Above this many bits a bound is reported by its base-2 logarithm only.
pub const EXACT_BITS_LIMIT: f64 = (1u64 << 22) as f64;

/// Significant digits kept for logarithmic-scale values.
pub const LN_DIGITS: usize = 30;

const THUE_MAHLER_CONSTANT: u64 = 5_000_000;

fn pow2(k: u64) -> BigUint {
    BigUint::one() << k
}

fn pow(base: BigUint, e: u64) -> BigUint {
    num_traits::pow(base, e as usize)
}

/// Base-2 logarithm of a positive integer.
pub fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_u64().expect("fits").to_f64().expect("finite").log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("64 bits");
    (top as f64).log2() + shift as f64
}

/// `2^{8(r+1)}`: solutions of a unit equation in a group of rank `r`.
pub fn unit_equation_solution_bound(r: u64) -> BigUint {
    pow2(8 * (r + 1))
}

/// `2^{8(2r+2)}`.
pub fn unit_equation_corollary_bound(r: u64) -> BigUint {
    pow2(8 * (2 * r + 2))
}

/// `(5·10^6 r)^s`: cosets covering the solutions of a Thue–Mahler equation.
pub fn thue_mahler_coset_bound(r: u64, s: u64) -> BigUint {
    pow(BigUint::from(THUE_MAHLER_CONSTANT) * r, s)
}

/// A bound's value: exact, or as a logarithm when it is too large.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Exact(BigUint),
    Log2(f64),
    /// Natural logarithm, as a decimal string with [`LN_DIGITS`] digits.
    Ln(String),
    Real(f64),
}

impl BoundValue {
    pub fn log2(&self) -> f64 {
        match self {
            BoundValue::Exact(v) => log2_big(v),
            BoundValue::Log2(x) => *x,
            BoundValue::Ln(s) => s.parse::<f64>().expect("decimal") / std::f64::consts::LN_2,
            BoundValue::Real(x) => x.log2(),
        }
    }

    /// `observed ≤ self`.
    pub fn admits(&self, observed: usize) -> bool {
        match self {
            BoundValue::Exact(v) => &BigUint::from(observed) <= v,
            BoundValue::Real(x) => observed as f64 <= *x,
            _ => observed == 0 || (observed as f64).log2() <= self.log2(),
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(v) => write!(f, "{v}"),
            BoundValue::Log2(x) => write!(f, "2^{x:.3}"),
            BoundValue::Ln(s) => write!(f, "e^{s}"),
            BoundValue::Real(x) => write!(f, "{x:.3}"),
        }
    }
}

fn exact_or_log2(log2: f64, exact: impl FnOnce() -> BigUint) -> BoundValue {
    if log2 <= EXACT_BITS_LIMIT {
        BoundValue::Exact(exact())
    } else {
        BoundValue::Log2(log2)
    }
}

/// `2^{16s} + 3`, for `|Per|` when there are at least three tail points.
pub fn per_bound_three_tails(s: u64) -> BoundValue {
    exact_or_log2((16 * s) as f64, || pow2(16 * s) + 3u32)
}

/// `4·2^{16s}`, for `|Tail|` when there are at least four periodic points.
pub fn tail_bound_four_periodic(s: u64) -> BoundValue {
    exact_or_log2((16 * s + 2) as f64, || pow2(16 * s + 2))
}

/// `16 s d^3`, or `None` past `u64`.
fn degree_exponent(s: u64, d: u64) -> Option<u64> {
    16u64.checked_mul(s)?.checked_mul(d)?.checked_mul(d)?.checked_mul(d)
}

fn degree_exponent_f64(s: u64, d: u64) -> f64 {
    16.0 * s as f64 * (d as f64).powi(3)
}

/// `2^{16 s d^3} + 3`.
pub fn per_bound_degree(s: u64, d: u64) -> BoundValue {
    match degree_exponent(s, d) {
        Some(k) => exact_or_log2(k as f64, || pow2(k) + 3u32),
        None => BoundValue::Log2(degree_exponent_f64(s, d)),
    }
}

/// `4·2^{16 s d^3}`.
pub fn tail_bound_degree(s: u64, d: u64) -> BoundValue {
    match degree_exponent(s, d) {
        Some(k) => exact_or_log2((k + 2) as f64, || pow2(k + 2)),
        None => BoundValue::Log2(degree_exponent_f64(s, d) + 2.0),
    }
}

/// `5·2^{16 s d^3} + 3`.
pub fn preper_bound_degree(s: u64, d: u64) -> BoundValue {
    match degree_exponent(s, d) {
        Some(k) => exact_or_log2(k as f64 + 5f64.log2(), || pow2(k) * 5u32 + 3u32),
        None => BoundValue::Log2(degree_exponent_f64(s, d) + 5f64.log2()),
    }
}

/// The two arms of a `max{(5·10^6·c)^e, 4·2^k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Branches {
    pub power_log2: f64,
    pub binary_log2: f64,
    /// Both arms, when small enough to hold exactly.
    pub exact: Option<(BigUint, BigUint)>,
}

impl Branches {
    fn new(c: BigUint, e: u64, k: u64) -> Self {
        let power_log2 = e as f64 * ((THUE_MAHLER_CONSTANT as f64).log2() + log2_big(&c));
        let binary_log2 = (k + 2) as f64;
        let exact = (power_log2.max(binary_log2) <= EXACT_BITS_LIMIT)
            .then(|| (pow(BigUint::from(THUE_MAHLER_CONSTANT) * c, e), pow2(k + 2)));
        Branches {
            power_log2,
            binary_log2,
            exact,
        }
    }

    /// Whether the `4·2^k` arm is the larger one, decided exactly when possible.
    pub fn binary_dominates(&self) -> bool {
        match &self.exact {
            Some((p, b)) => b >= p,
            None => self.binary_log2 >= self.power_log2,
        }
    }

    /// The log2 comparison agrees with the exact one.
    pub fn log2_agrees(&self) -> bool {
        self.binary_dominates() == (self.binary_log2 >= self.power_log2)
    }

    fn max_exact(&self) -> Option<BigUint> {
        self.exact.as_ref().map(|(p, b)| p.max(b).clone())
    }

    fn max_log2(&self) -> f64 {
        self.power_log2.max(self.binary_log2)
    }
}

/// Arms of `max{(5·10^6(d^3+1))^{s+4}, 4·2^{64(s+3)}}`.
pub fn tail_thue_mahler_branches(s: u64, d: u64) -> Branches {
    let d = BigUint::from(d);
    Branches::new(&d * &d * &d + 1u32, s + 4, 64 * (s + 3))
}

/// Arms of `max{(5·10^6(d−1))^{s+3}, 4·2^{128(s+2)}}`.
pub fn per_thue_mahler_branches(s: u64, d: u64) -> Branches {
    Branches::new(BigUint::from(d - 1), s + 3, 128 * (s + 2))
}

/// `d·max{(5·10^6(d^3+1))^{s+4}, 4·2^{64(s+3)}}`.
pub fn tail_bound_thue_mahler(s: u64, d: u64) -> BoundValue {
    let b = tail_thue_mahler_branches(s, d);
    match b.max_exact() {
        Some(m) => BoundValue::Exact(m * d),
        None => BoundValue::Log2(b.max_log2() + (d as f64).log2()),
    }
}

/// `max{(5·10^6(d−1))^{s+3}, 4·2^{128(s+2)}} + 1`, for `|Per|` when there is
/// at least one tail point.
pub fn per_bound_thue_mahler(s: u64, d: u64) -> BoundValue {
    let b = per_thue_mahler_branches(s, d);
    match b.max_exact() {
        Some(m) => BoundValue::Exact(m + 1u32),
        None => BoundValue::Log2(b.max_log2()),
    }
}

fn dbig(n: u64) -> DBig {
    DBig::from(n).with_precision(LN_DIGITS + 15).value()
}

/// Natural log of `[e^{10^{12}}(s+1)^8 (ln(5(s+1)))^8]^s`, an orbit-length
/// bound far too large to hold: `s·(10^{12} + 8 ln(s+1) + 8 ln ln(5(s+1)))`.
pub fn orbit_bound_exponential_ln(s: u64) -> BoundValue {
    let inner = dbig(1_000_000_000_000) + dbig(8) * dbig(s + 1).ln() + dbig(8) * dbig(5 * (s + 1)).ln().ln();
    let v = (inner * dbig(s)).with_precision(LN_DIGITS).value();
    BoundValue::Ln(v.to_string())
}

/// `max{(2^{16s−8}+3)·12 s ln(5s), [12(s+2) ln(5s+5)]^4}`, an orbit-length
/// bound over Q, natural logarithm.
pub fn orbit_bound_max(s: u64) -> BoundValue {
    let sf = s as f64;
    let second_log2 = 4.0 * (12.0 * (sf + 2.0) * (5.0 * sf + 5.0).ln()).log2();
    let k = 16.0 * sf - 8.0;
    let first_log2 = k + (1.0 + 3.0 * (-k).exp2()).log2() + (12.0 * sf * (5.0 * sf).ln()).log2();
    let log2 = first_log2.max(second_log2);
    if log2 < 1000.0 {
        BoundValue::Real(log2.exp2())
    } else {
        BoundValue::Log2(log2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Per,
    Tail,
    PrePer,
    /// Longest finite orbit: tail depth plus cycle length.
    OrbitLength,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Per => "|Per|",
            Quantity::Tail => "|Tail|",
            Quantity::PrePer => "|PrePer|",
            Quantity::OrbitLength => "orbit length",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    None,
    AtLeastThreeTails,
    AtLeastFourPeriodic,
    AtLeastOneTail,
}

impl Hypothesis {
    pub fn holds(self, counts: &Counts) -> bool {
        match self {
            Hypothesis::None => true,
            Hypothesis::AtLeastThreeTails => counts.tail >= 3,
            Hypothesis::AtLeastFourPeriodic => counts.per >= 4,
            Hypothesis::AtLeastOneTail => counts.tail >= 1,
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::None => "none",
            Hypothesis::AtLeastThreeTails => "|Tail| >= 3",
            Hypothesis::AtLeastFourPeriodic => "|Per| >= 4",
            Hypothesis::AtLeastOneTail => "|Tail| >= 1",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bound {
    pub name: &'static str,
    pub formula: &'static str,
    pub quantity: Quantity,
    pub hypothesis: Hypothesis,
    pub value: BoundValue,
}

/// Every bound at `(s, d)`, in a fixed order.
pub fn bound_values(s: u64, d: u64) -> Vec<Bound> {
    use Hypothesis as H;
    use Quantity as Q;
    let b = |name, formula, quantity, hypothesis, value| Bound {
        name,
        formula,
        quantity,
        hypothesis,
        value,
    };
    vec![
        b("per_three_tails", "2^(16s)+3", Q::Per, H::AtLeastThreeTails, per_bound_three_tails(s)),
        b("tail_four_periodic", "4*2^(16s)", Q::Tail, H::AtLeastFourPeriodic, tail_bound_four_periodic(s)),
        b("per_degree", "2^(16sd^3)+3", Q::Per, H::None, per_bound_degree(s, d)),
        b("tail_degree", "4*2^(16sd^3)", Q::Tail, H::None, tail_bound_degree(s, d)),
        b("preper_degree", "5*2^(16sd^3)+3", Q::PrePer, H::None, preper_bound_degree(s, d)),
        b(
            "tail_thue_mahler",
            "d*max{(5e6(d^3+1))^(s+4), 4*2^(64(s+3))}",
            Q::Tail,
            H::None,
            tail_bound_thue_mahler(s, d),
        ),
        b(
            "per_thue_mahler",
            "max{(5e6(d-1))^(s+3), 4*2^(128(s+2))}+1",
            Q::Per,
            H::AtLeastOneTail,
            per_bound_thue_mahler(s, d),
        ),
        b(
            "orbit_exponential",
            "[e^(10^12)(s+1)^8 ln(5(s+1))^8]^s",
            Q::OrbitLength,
            H::None,
            orbit_bound_exponential_ln(s),
        ),
        b(
            "orbit_max",
            "max{(2^(16s-8)+3)12s ln(5s), [12(s+2)ln(5s+5)]^4}",
            Q::OrbitLength,
            H::None,
            orbit_bound_max(s),
        ),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observed {
    pub counts: Counts,
    pub longest_orbit: usize,
}

impl Observed {
    pub fn of(portrait: &Portrait) -> Self {
        Observed {
            counts: portrait.counts(),
            longest_orbit: portrait.longest_orbit(),
        }
    }

    pub fn get(&self, q: Quantity) -> usize {
        match q {
            Quantity::Per => self.counts.per,
            Quantity::Tail => self.counts.tail,
            Quantity::PrePer => self.counts.preper,
            Quantity::OrbitLength => self.longest_orbit,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// `|S|`, archimedean place included.
    pub s: u64,
    pub d: u64,
    /// False when `s` is only a lower bound because the resultant kept an
    /// unfactored composite part.
    pub s_exact: bool,
    pub observed: Option<Observed>,
    pub bounds: Vec<Bound>,
}

/// Bounds at `(s, d)` without a portrait.
pub fn evaluate_bounds(s: u64, d: u64, observed: Option<Observed>) -> BoundReport {
    BoundReport {
        s,
        d,
        s_exact: true,
        observed,
        bounds: bound_values(s, d),
    }
}

/// `|S|` for a map: the archimedean place and its bad primes. An unfactored
/// composite cofactor has at least two prime factors; counting exactly two
/// gives a lower bound, which only tightens the bounds.
pub fn s_of(map: &RationalMap) -> (u64, bool) {
    let s = map.bad_primes().size() as u64;
    match map.res_cofactor() {
        Some(_) => (s + 2, false),
        None => (s, true),
    }
}

pub fn bound_report(portrait: &Portrait) -> BoundReport {
    let (s, s_exact) = s_of(&portrait.map);
    BoundReport {
        s_exact,
        ..evaluate_bounds(s, portrait.map.degree() as u64, Some(Observed::of(portrait)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub quantity: Quantity,
    pub observed: usize,
    pub value: BoundValue,
    pub hypothesis: Hypothesis,
    pub applies: bool,
    pub pass: bool,
}

/// Observed value against each bound whose hypothesis holds; the rest pass
/// vacuously.
pub fn check_bounds(report: &BoundReport) -> Vec<BoundCheck> {
    let Some(obs) = &report.observed else {
        return Vec::new();
    };
    report
        .bounds
        .iter()
        .map(|b| {
            let observed = obs.get(b.quantity);
            let applies = b.hypothesis.holds(&obs.counts);
            BoundCheck {
                name: b.name,
                quantity: b.quantity,
                observed,
                value: b.value.clone(),
                hypothesis: b.hypothesis,
                applies,
                pass: !applies || b.value.admits(observed),
            }
        })
        .collect()
}

/// Pairs of grid neighbours where some bound decreases as `s` or `d` grows.
pub fn monotonicity_violations(s_max: u64, d_max: u64) -> Vec<String> {
    let grid: Vec<Vec<Vec<Bound>>> = (1..=s_max)
        .map(|s| (2..=d_max).map(|d| bound_values(s, d)).collect())
        .collect();
    let le = |a: &BoundValue, b: &BoundValue| match (a, b) {
        (BoundValue::Exact(x), BoundValue::Exact(y)) => x <= y,
        (BoundValue::Ln(x), BoundValue::Ln(y)) => {
            x.parse::<DBig>().expect("decimal") <= y.parse::<DBig>().expect("decimal")
        }
        _ => a.log2() <= b.log2(),
    };
    let mut out = Vec::new();
    for (si, row) in grid.iter().enumerate() {
        for (di, bounds) in row.iter().enumerate() {
            let neighbours = [
                grid.get(si + 1).map(|r| (&r[di], "s")),
                row.get(di + 1).map(|b| (b, "d")),
            ];
            for (next, axis) in neighbours.into_iter().flatten() {
                for (a, b) in bounds.iter().zip(next) {
                    if !le(&a.value, &b.value) {
                        out.push(format!(
                            "{} decreases in {axis} at s={}, d={}",
                            a.name,
                            si + 1,
                            di + 2
                        ));
                    }
                }
            }
        }
    }
    out
}

/// `f` divided by a content already known to divide it.
fn primitive_with(f: &BinaryForm, content: &BigInt) -> BinaryForm {
    if content.is_zero() || content.is_one() {
        f.clone()
    } else {
        f.div_scalar_exact(content)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::portrait::build_portrait;
    use crate::testing::{ex52_d2, pt, random_map_with_tail, square};
    use proptest::prelude::*;

    fn exact(v: BoundValue) -> BigUint {
        match v {
            BoundValue::Exact(v) => v,
            other => panic!("expected an exact value, got {other:?}"),
        }
    }

    #[test]
    fn certificate_examples() {
        let portrait = build_portrait(&ex52_d2(), 6).unwrap();
        let certs = make_certificates(&portrait);
        assert_eq!(certs.len(), 2 * 3);
        let find = |r: &ProjPoint, p: &ProjPoint| {
            certs
                .iter()
                .find(|c| &c.tail_point == r && &c.periodic_point == p)
                .unwrap()
                .clone()
        };
        // 2 -> 0 -> inf -> 1: three steps land on 1, which is excluded.
        let c = find(&pt(2, 1), &pt(1, 1));
        assert_eq!(c.cross_term, BigInt::from(1));
        assert!(c.s_unit_ok && c.excluded);
        let c = find(&pt(2, 3), &pt(0, 1));
        assert_eq!(c.cross_term, BigInt::from(2));
        assert!(c.s_unit_ok && !c.excluded);
        let c = find(&pt(2, 3), &ProjPoint::infinity());
        assert!(c.excluded);
        assert!(certs.iter().all(|c| !c.is_failure()));
    }

    #[test]
    fn excluded_partner_waits_for_the_tail() {
        // Depth 4 into a 3-cycle: m = 2, six steps.
        let map = ex52_d2();
        assert_eq!(excluded_partner(&map, &pt(0, 1), 4, 3), map.iterate(&pt(0, 1), 6));
        assert_eq!(excluded_partner(&map, &pt(2, 1), 1, 3), pt(1, 1));
    }

    #[test]
    fn image_normalization_examples() {
        assert!(check_image_normalization(&square(), [&pt(3, 2)]));
        assert_eq!(ex52_d2().apply_raw(&pt(2, 1)), (BigInt::zero(), BigInt::from(4)));
        assert!(check_image_normalization(&ex52_d2(), [&pt(2, 1)]));
        // (x^2 + 3)/x has bad prime 3 only; [3:1] has raw image (12, 3).
        let m = crate::testing::map(&[1, 0, 3], &[0, 1, 0]);
        assert!(check_image_normalization(&m, [&pt(3, 1)]));
    }

    #[test]
    fn iterate_reduction_stays_on_bad_primes() {
        for r in check_iterate_reduction(&ex52_d2(), 4).unwrap() {
            assert!(r.ok(), "iterate {} fails: {r:?}", r.n);
        }
        let rs = check_iterate_reduction(&square(), 3).unwrap();
        assert!(rs.iter().all(|r| r.content == BigInt::one()));
    }

    #[test]
    fn bound_spot_values() {
        assert_eq!(exact(per_bound_three_tails(2)), BigUint::from(4_294_967_299u64));
        assert_eq!(exact(tail_bound_four_periodic(1)), BigUint::from(4u64 << 16));
        assert_eq!(exact(tail_bound_thue_mahler(2, 2)), BigUint::one() << 323u32);
        assert_eq!(exact(preper_bound_degree(2, 2)), (BigUint::one() << 256u32) * 5u32 + 3u32);
        assert_eq!(exact(per_bound_degree(1, 2)), (BigUint::one() << 128u32) + 3u32);
        assert_eq!(unit_equation_solution_bound(1), BigUint::from(65_536u32));
        assert_eq!(unit_equation_corollary_bound(1), BigUint::from(1u64 << 32));
        assert_eq!(thue_mahler_coset_bound(3, 2), BigUint::from(225_000_000_000_000u64));
    }

    #[test]
    fn thue_mahler_branch_selection() {
        let b = tail_thue_mahler_branches(2, 2);
        assert!(b.binary_dominates() && b.log2_agrees());
        assert!((b.power_log2 - 152.5).abs() < 0.1);
        assert_eq!(b.binary_log2, 322.0);
        // Large degree makes the power arm win.
        let b = tail_thue_mahler_branches(1, 1 << 21);
        assert!(!b.binary_dominates() && b.log2_agrees());
    }

    #[test]
    fn huge_bounds_fall_back_to_logarithms() {
        assert!(matches!(per_bound_degree(100, 50), BoundValue::Log2(_)));
        assert_eq!(per_bound_degree(100, 50).log2(), 16.0 * 100.0 * 125_000.0);
        assert!(matches!(preper_bound_degree(u64::MAX / 2, 1 << 30), BoundValue::Log2(_)));
    }

    #[test]
    fn orbit_bounds() {
        // Independent 50-digit evaluation of 2(10^12 + 8 ln 3 + 8 ln ln 15).
        assert_eq!(
            orbit_bound_exponential_ln(2),
            BoundValue::Ln("2000000000033.51745890591207296".into())
        );
        let first = 259.0 * 12.0 * 5f64.ln();
        let second = (36.0 * 10f64.ln()).powi(4);
        match orbit_bound_max(1) {
            BoundValue::Real(v) => assert!((v / first.max(second) - 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bounds_are_monotone_on_the_grid() {
        assert_eq!(monotonicity_violations(5, 8), Vec::<String>::new());
    }

    #[test]
    fn check_bounds_examples() {
        let portrait = build_portrait(&ex52_d2(), 6).unwrap();
        let report = bound_report(&portrait);
        assert_eq!((report.s, report.d), (2, 2));
        let checks = check_bounds(&report);
        assert_eq!(checks.len(), bound_values(2, 2).len());
        assert!(checks.iter().all(|c| c.pass));
        let per = checks.iter().find(|c| c.name == "per_three_tails").unwrap();
        assert!(!per.applies);
        let zero = Observed {
            counts: Counts {
                per: 0,
                tail: 0,
                preper: 0,
                cycle_lengths: vec![],
                max_tail_depth: 0,
            },
            longest_orbit: 0,
        };
        assert!(check_bounds(&evaluate_bounds(1, 2, Some(zero))).iter().all(|c| c.pass));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn random_maps_satisfy_the_certificates(seed in any::<u64>()) {
            let map = random_map_with_tail(seed);
            let portrait = build_portrait(&map, 4).unwrap();
            prop_assert!(!portrait.tails.is_empty());
            for c in make_certificates(&portrait) {
                prop_assert!(!c.is_failure(), "{c:?}");
            }
        }
    }
}
