//! Binary forms `a_0 X^d + a_1 X^{d-1} Y + ... + a_d Y^d` over Z.

mod resultant;
mod roots;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qarith::ProjPoint;

pub use resultant::{bareiss_determinant, resultant, sylvester_matrix};
pub use roots::{rational_roots, rational_roots_by_divisors, RootSet};

/// A homogeneous polynomial in `X, Y` with integer coefficients.
///
/// `coeffs[i]` is the coefficient of `X^{d-i} Y^i`, so the degree is always
/// `coeffs.len() - 1` even when the outer coefficients vanish. The type does
/// not force content 1: iterates of a map are deliberately kept unreduced so
/// their content can be audited. Use [`BinaryForm::primitive`] to normalize.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<BigInt>,
}

impl BinaryForm {
    /// Panics if `coeffs` is empty.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm {
            coeffs: vec![BigInt::zero(); degree + 1],
        }
    }

    pub fn constant(c: BigInt) -> Self {
        BinaryForm { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    /// `c · X^{degree-i} Y^i`.
    pub fn monomial(degree: usize, i: usize, c: BigInt) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[i] = c;
        f
    }

    pub fn x() -> Self {
        Self::from_i64(&[1, 0])
    }

    pub fn y() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// The primitive linear form `yX − xY` vanishing exactly at `[x:y]`.
    pub fn vanishing_at(p: &ProjPoint) -> Self {
        Self::new(vec![p.y().clone(), -p.x().clone()])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn nonzero_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Nonnegative gcd of all coefficients; 0 for the zero form.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
        }
        g
    }

    /// The form divided by its content (the zero form is returned unchanged).
    pub fn primitive(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        self.div_scalar_exact(&g)
    }

    pub(crate) fn div_scalar_exact(&self, g: &BigInt) -> Self {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|c| c / g).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    fn nonzero_indexed(&self) -> Vec<(usize, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut acc = BinaryForm::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `f(x, y)` for integer coordinates.
    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let mut acc = self.coeffs[0].clone();
        let mut ypow = BigInt::one();
        for c in &self.coeffs[1..] {
            ypow *= y;
            acc *= x;
            if !c.is_zero() {
                acc += c * &ypow;
            }
        }
        acc
    }

    pub fn evaluate_at(&self, p: &ProjPoint) -> BigInt {
        self.evaluate(p.x(), p.y())
    }

    /// `∂f/∂X`.
    pub fn derivative_x(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return BinaryForm::zero(0);
        }
        BinaryForm {
            coeffs: (0..d).map(|i| &self.coeffs[i] * (d - i)).collect(),
        }
    }

    /// `∂f/∂Y`.
    pub fn derivative_y(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return BinaryForm::zero(0);
        }
        BinaryForm {
            coeffs: (1..=d).map(|i| &self.coeffs[i] * i).collect(),
        }
    }

    /// `f(A, B)` for forms `A`, `B` of a common degree.
    pub fn compose(&self, a: &BinaryForm, b: &BinaryForm) -> Result<Self> {
        Ok(compose_many(&[self], a, b)?.pop().expect("one form in, one out"))
    }

    /// The quotient `q` with `self = g · q`, or [`Error::InexactDivision`].
    pub fn exact_div(&self, g: &BinaryForm) -> Result<Self> {
        let lead = g
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(Error::Zero("exact_div"))?;
        if g.degree() > self.degree() {
            return Err(Error::InexactDivision);
        }
        let qdeg = self.degree() - g.degree();
        let divisor = &g.coeffs[lead];
        let terms = g.nonzero_indexed();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); qdeg + 1];
        for j in 0..=qdeg {
            let (q, r) = rem[j + lead].div_rem(divisor);
            if !r.is_zero() {
                return Err(Error::InexactDivision);
            }
            if q.is_zero() {
                continue;
            }
            for &(t, gt) in &terms {
                rem[j + t] -= &q * gt;
            }
            quot[j] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision);
        }
        Ok(BinaryForm { coeffs: quot })
    }

    /// Order of vanishing at `p`, by repeated exact division by its linear form.
    pub fn multiplicity_at(&self, p: &ProjPoint) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let line = BinaryForm::vanishing_at(p);
        let mut f = self.clone();
        let mut m = 0;
        while f.degree() > 0 && f.evaluate_at(p).is_zero() {
            f = f
                .exact_div(&line)
                .expect("a primitive linear factor of a root divides over Z");
            m += 1;
        }
        m
    }
}

/// Evaluate several outer forms of one degree at the same inner pair,
/// sharing the powers of `B`.
pub(crate) fn compose_many(
    outers: &[&BinaryForm],
    a: &BinaryForm,
    b: &BinaryForm,
) -> Result<Vec<BinaryForm>> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    let d = outers.first().map_or(0, |f| f.degree());
    if let Some(f) = outers.iter().find(|f| f.degree() != d) {
        return Err(Error::DegreeMismatch(d, f.degree()));
    }
    let e = a.degree();
    let sparse = outers
        .iter()
        .all(|f| f.nonzero_terms() * (usize::BITS - d.leading_zeros()) as usize <= d / 4);
    if sparse {
        // Few terms: build each monomial by repeated squaring.
        return Ok(outers
            .iter()
            .map(|f| {
                let mut acc = BinaryForm::zero(d * e);
                for (i, c) in f.nonzero_indexed() {
                    acc = &acc + &(&a.pow(d - i) * &b.pow(i)).scale(c);
                }
                acc
            })
            .collect());
    }
    // Homogeneous Horner: r_i = r_{i-1}·A + c_i·B^i.
    let mut acc: Vec<BinaryForm> = outers
        .iter()
        .map(|f| BinaryForm::constant(f.coeffs[0].clone()))
        .collect();
    let mut bpow = BinaryForm::one();
    for i in 1..=d {
        bpow = &bpow * b;
        for (r, f) in acc.iter_mut().zip(outers) {
            let mut next = &*r * a;
            let c = &f.coeffs[i];
            if !c.is_zero() {
                for (dst, src) in next.coeffs.iter_mut().zip(&bpow.coeffs) {
                    if !src.is_zero() {
                        *dst += c * src;
                    }
                }
            }
            *r = next;
        }
    }
    Ok(acc)
}

/// The pairs `(F_k, G_k)` for `k = 1..=n`, where `F_1 = F`, `G_1 = G` and
/// `(F_k, G_k) = (F_{k-1}(F, G), G_{k-1}(F, G))`. No content is removed.
pub fn iterate_pairs(
    f: &BinaryForm,
    g: &BinaryForm,
    n: usize,
) -> Result<Vec<(BinaryForm, BinaryForm)>> {
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch(f.degree(), g.degree()));
    }
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return Ok(out);
    }
    out.push((f.clone(), g.clone()));
    for _ in 1..n {
        let (fk, gk) = out.last().expect("nonempty");
        let mut next = compose_many(&[fk, gk], f, g)?;
        let gn = next.pop().expect("two outputs");
        let fn_ = next.pop().expect("two outputs");
        out.push((fn_, gn));
    }
    Ok(out)
}

/// The `n`-th iterate pair `(F_n, G_n)`; `n = 0` gives `(X, Y)`.
pub fn compose_pair(f: &BinaryForm, g: &BinaryForm, n: usize) -> Result<(BinaryForm, BinaryForm)> {
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch(f.degree(), g.degree()));
    }
    if n == 0 {
        return Ok((BinaryForm::x(), BinaryForm::y()));
    }
    Ok(iterate_pairs(f, g, n)?.pop().expect("n >= 1"))
}

impl Add for &BinaryForm {
    type Output = BinaryForm;

    /// Panics on a degree mismatch.
    fn add(self, rhs: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), rhs.degree(), "adding forms of different degree");
        BinaryForm {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &BinaryForm {
    type Output = BinaryForm;

    /// Panics on a degree mismatch.
    fn sub(self, rhs: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), rhs.degree(), "subtracting forms of different degree");
        BinaryForm {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &BinaryForm {
    type Output = BinaryForm;

    fn neg(self) -> BinaryForm {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &BinaryForm {
    type Output = BinaryForm;

    fn mul(self, rhs: &BinaryForm) -> BinaryForm {
        let mut out = vec![BigInt::zero(); self.degree() + rhs.degree() + 1];
        let right = rhs.nonzero_indexed();
        for (i, a) in self.nonzero_indexed() {
            for &(j, b) in &right {
                out[i + j] += a * b;
            }
        }
        BinaryForm { coeffs: out }
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (px, py) = (d - i, i);
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let mag = c.abs();
            let mut parts = Vec::new();
            if !mag.is_one() || (px == 0 && py == 0) {
                parts.push(mag.to_string());
            }
            for (var, e) in [("X", px), ("Y", py)] {
                match e {
                    0 => {}
                    1 => parts.push(var.to_string()),
                    _ => parts.push(format!("{var}^{e}")),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
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

    #[test]
    fn evaluate_examples() {
        let f = form(&[1, -3, 2]);
        assert_eq!(f.evaluate_at(&pt(0, 1)), BigInt::from(2));
        assert_eq!(f.evaluate_at(&pt(1, 1)), BigInt::from(0));
        assert_eq!(form(&[1, 0, 0]).evaluate_at(&ProjPoint::infinity()), BigInt::from(1));
    }

    #[test]
    fn compose_pair_examples() {
        let (f4, g4) = compose_pair(&form(&[1, 0, 0]), &form(&[0, 0, 1]), 2).unwrap();
        assert_eq!(f4, form(&[1, 0, 0, 0, 0]));
        assert_eq!(g4, form(&[0, 0, 0, 0, 1]));

        let f = form(&[1, -3, 2]);
        let g = form(&[1, 0, 0]);
        assert_eq!(compose_pair(&f, &g, 1).unwrap(), (f.clone(), g.clone()));

        // (z^2 + 1)^2 + 1 = z^4 + 2z^2 + 2.
        let (f2, g2) = compose_pair(&form(&[1, 0, 1]), &form(&[0, 0, 1]), 2).unwrap();
        assert_eq!(f2, form(&[1, 0, 2, 0, 2]));
        assert_eq!(g2, form(&[0, 0, 0, 0, 1]));

        assert_eq!(
            compose_pair(&form(&[1, 0]), &form(&[1, 0, 0]), 2),
            Err(Error::DegreeMismatch(1, 2))
        );
    }

    #[test]
    fn sparse_and_horner_composition_agree() {
        // X^64 + Y^64 takes the repeated-squaring route, the dense outer form
        // goes through Horner. Compare both against direct expansion.
        let a = form(&[2, -1, 3]);
        let b = form(&[0, 1, -1]);
        let mut sparse = BinaryForm::zero(64);
        sparse.coeffs[0] = BigInt::one();
        sparse.coeffs[64] = BigInt::one();
        let direct = &a.pow(64) + &b.pow(64);
        assert_eq!(sparse.compose(&a, &b).unwrap(), direct);
        let dense = form(&[1, 1, 1, 1, 1, 1, 1, 1, 1]);
        let mut direct = BinaryForm::zero(16);
        for i in 0..=8 {
            direct = &direct + &(&a.pow(8 - i) * &b.pow(i));
        }
        assert_eq!(dense.compose(&a, &b).unwrap(), direct);
    }

    #[test]
    fn exact_div_examples() {
        let cube = form(&[1, 0, 0, -1]);
        assert_eq!(cube.exact_div(&form(&[1, -1])).unwrap(), form(&[1, 1, 1]));
        assert_eq!(form(&[1, 0, 0]).exact_div(&form(&[0, 1])), Err(Error::InexactDivision));
        let f = form(&[3, 0, -7, 2]);
        assert_eq!(f.exact_div(&f).unwrap(), form(&[1]));
        assert_eq!(f.exact_div(&BinaryForm::zero(1)), Err(Error::Zero("exact_div")));
    }

    #[test]
    fn content_and_display() {
        let f = form(&[6, -9, 0, 3]);
        assert_eq!(f.content(), BigInt::from(3));
        assert_eq!(f.primitive(), form(&[2, -3, 0, 1]));
        assert_eq!(form(&[1, -3, 2]).to_string(), "X^2 - 3*X*Y + 2*Y^2");
        assert_eq!(form(&[0, 0, 5]).to_string(), "5*Y^2");
        assert_eq!(BinaryForm::zero(3).to_string(), "0");
    }

    #[test]
    fn multiplicity_counts_repeated_linear_factors() {
        // (X - Y)^3 (X + 2Y)
        let line = form(&[1, -1]);
        let f = &line.pow(3) * &form(&[1, 2]);
        assert_eq!(f.multiplicity_at(&pt(1, 1)), 3);
        assert_eq!(f.multiplicity_at(&pt(-2, 1)), 1);
        assert_eq!(f.multiplicity_at(&pt(0, 1)), 0);
    }

    #[test]
    fn partial_derivatives_satisfy_euler() {
        // X ∂f/∂X + Y ∂f/∂Y = d·f
        let f = form(&[4, -1, 0, 7, 2]);
        let lhs = &(&BinaryForm::x() * &f.derivative_x()) + &(&BinaryForm::y() * &f.derivative_y());
        assert_eq!(lhs, f.scale(&BigInt::from(4)));
    }

    fn arb_form(max_deg: usize) -> impl Strategy<Value = BinaryForm> {
        (0..=max_deg)
            .prop_flat_map(|d| proptest::collection::vec(-20i64..20, d + 1))
            .prop_map(|c| BinaryForm::from_i64(&c))
    }

    proptest! {
        #[test]
        fn exact_div_inverts_multiplication(f in arb_form(5), g in arb_form(4)) {
            prop_assume!(!g.is_zero());
            prop_assert_eq!((&f * &g).exact_div(&g).unwrap(), f);
        }

        #[test]
        fn evaluation_is_multiplicative(f in arb_form(4), g in arb_form(4), x in -9i64..9, y in -9i64..9) {
            let (x, y) = (BigInt::from(x), BigInt::from(y));
            prop_assert_eq!((&f * &g).evaluate(&x, &y), f.evaluate(&x, &y) * g.evaluate(&x, &y));
        }
    }
}
