//! Rational roots of binary forms.
//!
//! Roots `[1:0]` and `[0:1]` come from stripping powers of `Y` and `X`. The
//! remaining core has nonzero outer coefficients, so every rational root
//! `[a:b]` has `a | a_d` and `b | a_0`. Two routes find those roots:
//!
//! - p-adic: reduce modulo a small prime `p ∤ a_0`, find all roots in `F_p`,
//!   Newton-lift each one and rationally reconstruct. A residue class is
//!   settled when the rational roots found in it use up its multiplicity
//!   modulo `p`, or when it is simple and its lift reconstructs to nothing
//!   within the divisor bounds. When every class is settled, the answer is
//!   complete. No factoring is needed, so huge coefficients are fine.
//! - divisors: factor `a_0` and `a_d` and test every candidate `a/b`.
//!
//! [`rational_roots`] runs the p-adic route and falls back to divisors when
//! some residue class stays open.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::BinaryForm;
use crate::error::{Error, Result};
use crate::qarith::{factor, small_primes, Effort, Factorization, ProjPoint};

/// Primes tried by the p-adic route before giving up on certification.
const PADIC_PRIME_ATTEMPTS: usize = 24;
/// Largest candidate count the divisor route will enumerate.
const DIVISOR_CANDIDATE_LIMIT: usize = 200_000;

/// Rational roots of a form, each with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootSet {
    /// Distinct roots sorted by point, with multiplicities.
    pub roots: Vec<(ProjPoint, u32)>,
    /// False when some rational root could not be ruled out.
    pub complete: bool,
}

impl RootSet {
    pub fn points(&self) -> impl Iterator<Item = &ProjPoint> {
        self.roots.iter().map(|(p, _)| p)
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.roots.iter().any(|(q, _)| q == p)
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

struct Stripped {
    at_infinity: u32,
    at_zero: u32,
    /// Primitive, with nonzero first and last coefficients.
    core: BinaryForm,
}

fn strip(f: &BinaryForm) -> Result<Stripped> {
    let c = f.coeffs();
    let first = c.iter().position(|v| !v.is_zero()).ok_or(Error::ZeroForm)?;
    let last = c.iter().rposition(|v| !v.is_zero()).expect("nonzero form");
    Ok(Stripped {
        at_infinity: first as u32,
        at_zero: (c.len() - 1 - last) as u32,
        core: BinaryForm::new(c[first..=last].to_vec()).primitive(),
    })
}

fn assemble(s: &Stripped, core_roots: BTreeSet<ProjPoint>, complete: bool) -> RootSet {
    let mut roots: Vec<(ProjPoint, u32)> = core_roots
        .into_iter()
        .map(|p| {
            let m = s.core.multiplicity_at(&p);
            (p, m)
        })
        .collect();
    if s.at_infinity > 0 {
        roots.push((ProjPoint::infinity(), s.at_infinity));
    }
    if s.at_zero > 0 {
        roots.push((ProjPoint::from_int(0), s.at_zero));
    }
    roots.sort();
    RootSet { roots, complete }
}

fn linear_root(core: &BinaryForm) -> ProjPoint {
    // c0 X + c1 Y = 0  =>  [X:Y] = [-c1 : c0]
    ProjPoint::new(-core.coeff(1).clone(), core.coeff(0).clone())
        .expect("linear core has nonzero coefficients")
}

/// All points `[a:b] ∈ P^1(Q)` with `f(a, b) = 0`.
pub fn rational_roots(f: &BinaryForm) -> Result<RootSet> {
    let s = strip(f)?;
    let mut found = BTreeSet::new();
    let complete = match s.core.degree() {
        0 => true,
        1 => {
            found.insert(linear_root(&s.core));
            true
        }
        _ => {
            let (roots, certified) = padic_roots(&s.core);
            found.extend(roots);
            certified || {
                let (roots, certified) =
                    divisor_roots(&s.core, Effort::default(), DIVISOR_CANDIDATE_LIMIT);
                found.extend(roots);
                certified
            }
        }
    };
    Ok(assemble(&s, found, complete))
}

/// Rational roots by the rational root theorem alone: factor the outer
/// coefficients and test every candidate. Incomplete if a coefficient keeps
/// an unfactored cofactor or the candidate count exceeds an internal limit.
pub fn rational_roots_by_divisors(f: &BinaryForm, effort: Effort) -> Result<RootSet> {
    let s = strip(f)?;
    let mut found = BTreeSet::new();
    let complete = match s.core.degree() {
        0 => true,
        _ => {
            let (roots, certified) = divisor_roots(&s.core, effort, DIVISOR_CANDIDATE_LIMIT);
            found.extend(roots);
            certified
        }
    };
    Ok(assemble(&s, found, complete))
}

fn divisors(f: &Factorization) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in &f.factors {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut pk = d.clone();
            next.push(pk.clone());
            for _ in 0..*e {
                pk *= p;
                next.push(pk.clone());
            }
        }
        out = next;
    }
    if let Some(c) = &f.cofactor {
        let with_cofactor: Vec<BigInt> = out.iter().map(|d| d * c).collect();
        out.extend(with_cofactor);
    }
    out
}

fn divisor_roots(core: &BinaryForm, effort: Effort, limit: usize) -> (Vec<ProjPoint>, bool) {
    let lead = core.coeff(0);
    let trail = core.coeff(core.degree());
    let (Ok(fl), Ok(ft)) = (factor(lead, effort), factor(trail, effort)) else {
        return (Vec::new(), false);
    };
    let complete = fl.is_complete() && ft.is_complete();
    let (bs, as_) = (divisors(&fl), divisors(&ft));
    if bs.len().saturating_mul(as_.len()).saturating_mul(2) > limit {
        return (Vec::new(), false);
    }
    let mut roots = Vec::new();
    for b in &bs {
        for a in &as_ {
            if !a.gcd(b).is_one() {
                continue;
            }
            for a in [a.clone(), -a] {
                if core.evaluate(&a, b).is_zero() {
                    roots.push(ProjPoint::new(a, b.clone()).expect("b > 0"));
                }
            }
        }
    }
    (roots, complete)
}

// ---------------------------------------------------------------------------
// p-adic route

fn reduce_mod(core: &BinaryForm, p: u64) -> Vec<u64> {
    let m = BigInt::from(p);
    core.coeffs()
        .iter()
        .map(|c| c.mod_floor(&m).to_u64().expect("residue below p"))
        .collect()
}

fn eval_small(c: &[u64], x: u64, p: u64) -> u64 {
    c.iter().fold(0, |acc, &v| (acc * x + v) % p)
}

/// Multiplicity of the root `r` of `c` over `F_p` (descending coefficients).
fn multiplicity_small(c: &[u64], r: u64, p: u64) -> u32 {
    let mut poly = c.to_vec();
    let mut m = 0;
    while poly.len() > 1 {
        let mut quotient = Vec::with_capacity(poly.len() - 1);
        let mut acc = 0;
        for &v in &poly {
            acc = (acc * r + v) % p;
            quotient.push(acc);
        }
        if quotient.pop() != Some(0) {
            break;
        }
        poly = quotient;
        m += 1;
    }
    m
}

fn eval_mod(h: &BinaryForm, x: &BigInt, m: &BigInt) -> BigInt {
    h.coeffs()
        .iter()
        .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Smallest-numerator fraction `a/b ≡ r (mod m)` with `|a| < k`, reduced to
/// lowest terms with `b > 0`. If any `a/b ≡ r` has `|a| < k` and
/// `0 < b ≤ m/k`, it equals the returned fraction.
fn reconstruct(r: &BigInt, m: &BigInt, k: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 >= k {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() {
        return None;
    }
    let g = r1.gcd(&t1);
    let (mut a, mut b) = (r1 / &g, t1 / g);
    if b.is_negative() {
        a = -a;
        b = -b;
    }
    Some((a, b))
}

struct Bounds<'a> {
    core: &'a BinaryForm,
    lead: BigInt,
    trail: BigInt,
    /// `2 (|a_d| + 1)(|a_0| + 1)`: lifting past this settles a simple class.
    target: BigInt,
}

impl Bounds<'_> {
    fn new(core: &BinaryForm) -> Bounds<'_> {
        let lead = core.coeff(0).abs();
        let trail = core.coeff(core.degree()).abs();
        let target = (&lead + 1u32) * (&trail + 1u32) * 2u32;
        Bounds {
            core,
            lead,
            trail,
            target,
        }
    }

    fn accept(&self, a: &BigInt, b: &BigInt) -> Option<ProjPoint> {
        if a.is_zero() || b > &self.lead || a.abs() > self.trail {
            return None;
        }
        if !(&self.lead % b).is_zero() || !(&self.trail % a).is_zero() {
            return None;
        }
        self.core
            .evaluate(a, b)
            .is_zero()
            .then(|| ProjPoint::new(a.clone(), b.clone()).expect("b > 0"))
    }
}

/// Lift a simple root `r0` of `h` modulo `p` and look for a rational root of
/// the core in its p-adic neighbourhood. `None` after reaching the target
/// precision certifies that no such root exists when `h` is the core itself.
fn lift(h: &BinaryForm, r0: u64, p: u64, bounds: &Bounds) -> Option<ProjPoint> {
    let dh = h.derivative_x();
    let mut r = BigInt::from(r0);
    let mut m = BigInt::from(p);
    loop {
        let m2 = &m * &m;
        let hr = eval_mod(h, &r, &m2);
        if !hr.is_zero() {
            let inv = mod_inverse(&eval_mod(&dh, &r, &m2), &m2)
                .expect("simple root: derivative is a unit");
            r = (&r - hr * inv).mod_floor(&m2);
        }
        m = m2;
        if m >= bounds.target {
            let k = &bounds.trail + 1u32;
            return reconstruct(&r, &m, &k).and_then(|(a, b)| bounds.accept(&a, &b));
        }
        let k = m.sqrt();
        if let Some(found) = reconstruct(&r, &m, &k).and_then(|(a, b)| bounds.accept(&a, &b)) {
            return Some(found);
        }
    }
}

fn residue_of(point: &ProjPoint, p: u64) -> u64 {
    let pm = BigInt::from(p);
    let inv = mod_inverse(point.y(), &pm).expect("denominator divides the unit leading coefficient");
    (point.x() * inv).mod_floor(&pm).to_u64().expect("below p")
}

fn padic_roots(core: &BinaryForm) -> (Vec<ProjPoint>, bool) {
    let deg = core.degree();
    let bounds = Bounds::new(core);
    let mut found: Vec<(ProjPoint, u32)> = Vec::new();
    // j-th derivatives over Z, built on demand.
    let mut derivatives: Vec<BinaryForm> = vec![core.clone()];

    let primes = small_primes()
        .iter()
        .map(|&p| p as u64)
        .filter(|&p| p > deg.max(2) as u64)
        .filter(|&p| !(core.coeff(0) % p).is_zero())
        .take(PADIC_PRIME_ATTEMPTS);

    for p in primes {
        let reduced = reduce_mod(core, p);
        let mut settled = true;
        for r in (0..p).filter(|&r| eval_small(&reduced, r, p) == 0) {
            let mu = multiplicity_small(&reduced, r, p);
            let known = |found: &[(ProjPoint, u32)]| -> u32 {
                found
                    .iter()
                    .filter(|(q, _)| residue_of(q, p) == r)
                    .map(|(_, m)| *m)
                    .sum()
            };
            if known(&found) == mu {
                continue;
            }
            // With p > deg, r is a simple root of the (mu-1)-th derivative.
            let j = (mu - 1) as usize;
            while derivatives.len() <= j {
                let next = derivatives.last().expect("nonempty").derivative_x();
                derivatives.push(next);
            }
            let lifted = lift(&derivatives[j], r, p, &bounds);
            match lifted {
                Some(point) => {
                    if !found.iter().any(|(q, _)| q == &point) {
                        let m = core.multiplicity_at(&point);
                        found.push((point, m));
                    }
                    if known(&found) != mu {
                        settled = false;
                    }
                }
                // Only a simple class is certified empty by a failed lift.
                None if mu == 1 => {}
                None => settled = false,
            }
        }
        if settled {
            return (found.into_iter().map(|(p, _)| p).collect(), true);
        }
    }
    (found.into_iter().map(|(p, _)| p).collect(), false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn form(c: &[i64]) -> BinaryForm {
        BinaryForm::from_i64(c)
    }

    fn pt(x: i64, y: i64) -> ProjPoint {
        ProjPoint::new(x.into(), y.into()).unwrap()
    }

    fn points(r: &RootSet) -> Vec<ProjPoint> {
        r.points().cloned().collect()
    }

    // Every coprime [a:b] with |a|, |b| <= bound.
    fn brute_force(f: &BinaryForm, bound: i64) -> BTreeSet<ProjPoint> {
        let mut out = BTreeSet::new();
        for b in 0..=bound {
            for a in -bound..=bound {
                if (a, b) == (0, 0) || num_integer::gcd(a, b) != 1 {
                    continue;
                }
                if f.evaluate(&a.into(), &b.into()).is_zero() {
                    out.insert(pt(a, b));
                }
            }
        }
        out
    }

    #[test]
    fn root_examples() {
        let r = rational_roots(&form(&[1, -3, 2])).unwrap();
        assert!(r.complete);
        assert_eq!(points(&r), vec![pt(1, 1), pt(2, 1)]);

        let r = rational_roots(&form(&[1, 1, 1])).unwrap();
        assert!(r.complete && r.is_empty());

        // XY(X - Y) = X^2 Y - X Y^2
        let r = rational_roots(&form(&[0, 1, -1, 0])).unwrap();
        assert!(r.complete);
        assert_eq!(points(&r), vec![ProjPoint::infinity(), pt(0, 1), pt(1, 1)]);

        assert_eq!(rational_roots(&BinaryForm::zero(2)), Err(Error::ZeroForm));
    }

    #[test]
    fn multiplicities_are_reported() {
        // X^2 Y^3 (2X - 3Y)^2 (X + Y)
        let f = &(&(&BinaryForm::x().pow(2) * &BinaryForm::y().pow(3)) * &form(&[2, -3]).pow(2))
            * &form(&[1, 1]);
        let r = rational_roots(&f).unwrap();
        assert!(r.complete);
        assert_eq!(
            r.roots,
            vec![(ProjPoint::infinity(), 3), (pt(-1, 1), 1), (pt(0, 1), 2), (pt(3, 2), 2)]
        );
    }

    #[test]
    fn huge_coefficients_need_no_factoring() {
        // (X - (2^200+1)/3^150 Y)(X^2 + Y^2) scaled to integers: the outer
        // coefficients are far beyond what trial division and rho can split.
        let a = (BigInt::one() << 200usize) + 1u32;
        let b = num_traits::pow(BigInt::from(3), 150) * BigInt::from(1_000_000_007u64);
        let line = BinaryForm::new(vec![b.clone(), -a.clone()]);
        let f = &line * &form(&[1, 0, 1]);
        let r = rational_roots(&f).unwrap();
        assert!(r.complete);
        assert_eq!(points(&r), vec![ProjPoint::new(a, b).unwrap()]);
    }

    #[test]
    fn irrational_multiple_factors_stay_sound() {
        // (X^2 - 2Y^2)^2 (X - 5Y): the double irrational pair leaves classes
        // open at primes where 2 is a square, but the others settle it.
        let f = &form(&[1, 0, -2]).pow(2) * &form(&[1, -5]);
        let r = rational_roots(&f).unwrap();
        assert_eq!(points(&r), vec![pt(5, 1)]);
        assert!(r.complete);
    }

    #[test]
    fn divisor_route_examples() {
        let r = rational_roots_by_divisors(&form(&[6, -5, 1]), Effort::default()).unwrap();
        assert!(r.complete);
        assert_eq!(points(&r), vec![pt(1, 2), pt(1, 3)]);
    }

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let m = BigInt::from(1_000_003i64 * 1_000_033);
        for (a, b) in [(3i64, 7i64), (-5, 11), (1, 1), (-123, 457)] {
            let r = BigInt::from(a) * mod_inverse(&BigInt::from(b), &m).unwrap();
            let k = m.sqrt();
            assert_eq!(reconstruct(&r, &m, &k), Some((BigInt::from(a), BigInt::from(b))));
        }
    }

    fn arb_form() -> impl Strategy<Value = BinaryForm> {
        // Products of a few small linear and quadratic factors, so that
        // rational roots (and repeated ones) actually occur.
        proptest::collection::vec(
            prop_oneof![
                proptest::collection::vec(-6i64..7, 2),
                proptest::collection::vec(-4i64..5, 3),
            ],
            1..5,
        )
        .prop_map(|factors| {
            factors
                .iter()
                .map(|c| BinaryForm::from_i64(c))
                .fold(BinaryForm::one(), |acc, f| &acc * &f)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn agrees_with_brute_force_scan(f in arb_form()) {
            prop_assume!(!f.is_zero() && f.degree() <= 6);
            let bound = f.coeffs().iter().map(|c| c.abs()).max().unwrap().to_i64().unwrap();
            let expected = brute_force(&f, bound);
            let got = rational_roots(&f).unwrap();
            prop_assert!(got.complete);
            prop_assert_eq!(got.points().cloned().collect::<BTreeSet<_>>(), expected.clone());
            let by_div = rational_roots_by_divisors(&f, Effort::default()).unwrap();
            prop_assert_eq!(by_div.roots, got.roots);
        }

        #[test]
        fn multiplicities_match_exact_division(f in arb_form()) {
            prop_assume!(!f.is_zero());
            let got = rational_roots(&f).unwrap();
            let total: u32 = got.roots.iter().map(|(_, m)| m).sum();
            prop_assert!(total as usize <= f.degree());
            for (p, m) in &got.roots {
                prop_assert_eq!(f.multiplicity_at(p), *m);
            }
        }
    }
}
