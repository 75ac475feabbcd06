//! Rational maps `φ = [F:G]` on `P^1(Q)` in normalized form.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::forms::{rational_roots, resultant, BinaryForm, RootSet};
use crate::qarith::{factor, Effort, PrimeSet, ProjPoint, Rat};

/// Heights above this make [`RationalMap::orbit`] give up on a point.
pub fn default_escape_height() -> BigInt {
    num_traits::pow(BigInt::from(10), 40)
}

/// A rational map of degree `d ≥ 2` with `F`, `G` of degree `d`, joint
/// content 1, and nonzero resultant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMap {
    f: BinaryForm,
    g: BinaryForm,
    res: BigInt,
    bad_primes: PrimeSet,
    res_cofactor: Option<BigInt>,
}

/// Outcome of following a forward orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitRecord {
    /// `points[tail_len..]` is the cycle; `points.len() = tail_len + cycle_len`.
    Preperiodic {
        tail_len: usize,
        cycle_len: usize,
        points: Vec<ProjPoint>,
    },
    /// No repeat within the step budget, or the height passed the cutoff.
    Escaped { steps: usize, height: BigInt },
}

impl OrbitRecord {
    pub fn is_preperiodic(&self) -> bool {
        matches!(self, OrbitRecord::Preperiodic { .. })
    }

    /// `(tail_len, cycle_len)` when preperiodic.
    pub fn shape(&self) -> Option<(usize, usize)> {
        match self {
            OrbitRecord::Preperiodic {
                tail_len,
                cycle_len,
                ..
            } => Some((*tail_len, *cycle_len)),
            OrbitRecord::Escaped { .. } => None,
        }
    }
}

fn homogenize(coeffs: &[Rat], degree: usize) -> Vec<Rat> {
    // coefficient of X^{D-i} Y^i is the coefficient of x^{D-i}
    (0..=degree)
        .map(|i| coeffs.get(degree - i).cloned().unwrap_or_else(Rat::zero))
        .collect()
}

fn trimmed_degree(coeffs: &[Rat]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

impl RationalMap {
    /// The map `x ↦ num(x)/den(x)`, coefficients in ascending powers of `x`.
    pub fn build(num: &[Rat], den: &[Rat]) -> Result<Self> {
        let dn = trimmed_degree(num);
        let dd = trimmed_degree(den).ok_or(Error::Zero("denominator"))?;
        let degree = dn.unwrap_or(0).max(dd);
        if degree < 2 {
            return Err(Error::DegreeTooSmall(degree));
        }
        let (fq, gq) = (homogenize(num, degree), homogenize(den, degree));
        let lcm = fq
            .iter()
            .chain(&gq)
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let to_int = |v: &[Rat]| -> BinaryForm {
            BinaryForm::new(v.iter().map(|c| (c * &lcm).to_integer()).collect())
        };
        Self::from_forms(to_int(&fq), to_int(&gq))
    }

    /// Normalize an integer pair: divide by the joint content and check the
    /// resultant.
    pub fn from_forms(f: BinaryForm, g: BinaryForm) -> Result<Self> {
        if f.degree() != g.degree() {
            return Err(Error::DegreeMismatch(f.degree(), g.degree()));
        }
        if f.degree() < 2 {
            return Err(Error::DegreeTooSmall(f.degree()));
        }
        let content = f.content().gcd(&g.content());
        if content.is_zero() {
            return Err(Error::DegenerateMap);
        }
        let (f, g) = (f.div_scalar_exact(&content), g.div_scalar_exact(&content));
        let res = resultant(&f, &g);
        if res.is_zero() {
            return Err(Error::DegenerateMap);
        }
        let fac = factor(&res, Effort::default())?;
        let bad_primes = PrimeSet::from_certified(fac.primes().cloned().collect());
        Ok(RationalMap {
            f,
            g,
            res,
            bad_primes,
            res_cofactor: fac.cofactor,
        })
    }

    pub fn f(&self) -> &BinaryForm {
        &self.f
    }

    pub fn g(&self) -> &BinaryForm {
        &self.g
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    pub fn resultant(&self) -> &BigInt {
        &self.res
    }

    /// Primes dividing the resultant that factoring certified.
    pub fn bad_primes(&self) -> &PrimeSet {
        &self.bad_primes
    }

    /// Composite part of the resultant that factoring could not split.
    pub fn res_cofactor(&self) -> Option<&BigInt> {
        self.res_cofactor.as_ref()
    }

    pub fn bad_primes_complete(&self) -> bool {
        self.res_cofactor.is_none()
    }

    /// Numerator and denominator of `φ(x)` in ascending powers of `x`.
    pub fn affine_coeffs(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let rev = |f: &BinaryForm| f.coeffs().iter().rev().cloned().collect();
        (rev(&self.f), rev(&self.g))
    }

    /// Exact for any prime `p`, whether or not the resultant is fully factored.
    pub fn has_good_reduction(&self, p: &BigInt) -> bool {
        !(&self.res % p).is_zero()
    }

    /// True iff `n ≠ 0` and every prime factor of `n` is a bad prime (or
    /// divides the unfactored cofactor).
    pub fn supported_on_bad_primes(&self, n: &BigInt) -> bool {
        let mut m = self.bad_primes.strip(n);
        if let Some(c) = &self.res_cofactor {
            loop {
                let g = m.gcd(c);
                if g.is_one() {
                    break;
                }
                m /= g;
            }
        }
        m.is_one()
    }

    /// `(F(x, y), G(x, y))` before any reduction.
    pub fn apply_raw(&self, p: &ProjPoint) -> (BigInt, BigInt) {
        (self.f.evaluate_at(p), self.g.evaluate_at(p))
    }

    /// `φ(P)`. Panics if the raw image has a common factor outside the bad
    /// primes, which would contradict normalization.
    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let (a, b) = self.apply_raw(p);
        let g = a.gcd(&b);
        assert!(
            self.supported_on_bad_primes(&g),
            "image of {p} under a normalized map has content {g} off the bad primes"
        );
        ProjPoint::new(a, b).expect("F and G have no common root")
    }

    pub fn iterate(&self, p: &ProjPoint, n: usize) -> ProjPoint {
        (0..n).fold(p.clone(), |q, _| self.apply(&q))
    }

    /// Forward orbit with the default escape height.
    pub fn orbit(&self, p: &ProjPoint, max_steps: usize) -> OrbitRecord {
        self.orbit_with_cutoff(p, max_steps, &default_escape_height())
    }

    pub fn orbit_with_cutoff(
        &self,
        p: &ProjPoint,
        max_steps: usize,
        cutoff: &BigInt,
    ) -> OrbitRecord {
        let mut seen: HashMap<ProjPoint, usize> = HashMap::new();
        let mut points = Vec::new();
        let mut q = p.clone();
        for step in 0..=max_steps {
            if let Some(&first) = seen.get(&q) {
                return OrbitRecord::Preperiodic {
                    tail_len: first,
                    cycle_len: step - first,
                    points,
                };
            }
            let height = q.height();
            if &height > cutoff || step == max_steps {
                return OrbitRecord::Escaped {
                    steps: step,
                    height,
                };
            }
            seen.insert(q.clone(), step);
            points.push(q.clone());
            q = self.apply(&q);
        }
        unreachable!("the loop returns by its last iteration")
    }

    /// All rational `P` with `φ(P) = Q`: the rational roots of
    /// `b·F − a·G` for `Q = [a:b]`.
    pub fn preimages(&self, q: &ProjPoint) -> Result<RootSet> {
        let form = &self.f.scale(q.y()) - &self.g.scale(q.x());
        rational_roots(&form)
    }

    /// `φ(x)` as a rational function value, `None` for a pole or for `∞`.
    pub fn eval_rat(&self, x: &Rat) -> Option<Rat> {
        self.apply(&ProjPoint::from_rat(x)).to_rat()
    }
}

impl std::fmt::Display for RationalMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{} : {}]", self.f, self.g)
    }
}

/// Joint content of a pair of forms; zero only when both vanish.
pub fn joint_content(f: &BinaryForm, g: &BinaryForm) -> BigInt {
    f.content().gcd(&g.content()).abs()
}
