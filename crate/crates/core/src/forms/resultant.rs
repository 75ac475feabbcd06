use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::BinaryForm;

/// The Sylvester matrix of `f` (degree m) and `g` (degree n): n shifted rows
/// of `f`'s coefficients followed by m shifted rows of `g`'s.
pub fn sylvester_matrix(f: &BinaryForm, g: &BinaryForm) -> Vec<Vec<BigInt>> {
    let (m, n) = (f.degree(), g.degree());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (form, shifts) in [(f, n), (g, m)] {
        for s in 0..shifts {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in form.coeffs().iter().enumerate() {
                row[s + j] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
/// Every intermediate division is exact.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = &row[j] * pivot - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot.clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// `Res(F, G)` as the Sylvester determinant. Zero iff the forms share a
/// projective root over the algebraic closure.
pub fn resultant(f: &BinaryForm, g: &BinaryForm) -> BigInt {
    bareiss_determinant(sylvester_matrix(f, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::Rat;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn form(c: &[i64]) -> BinaryForm {
        BinaryForm::from_i64(c)
    }

    // Leibniz expansion over all permutations, independent of elimination.
    fn leibniz(m: &[Vec<BigInt>]) -> BigInt {
        fn rec(m: &[Vec<BigInt>], row: usize, used: &mut Vec<bool>, sign: i64) -> BigInt {
            if row == m.len() {
                return BigInt::from(sign);
            }
            let mut acc = BigInt::zero();
            for col in 0..m.len() {
                if used[col] || m[row][col].is_zero() {
                    continue;
                }
                // One inversion per unused column left of the chosen one.
                let skipped = (0..col).filter(|&c| !used[c]).count();
                let s = if skipped % 2 == 0 { sign } else { -sign };
                used[col] = true;
                acc += &m[row][col] * rec(m, row + 1, used, s);
                used[col] = false;
            }
            acc
        }
        rec(m, 0, &mut vec![false; m.len()], 1)
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&form(&[1, 0, 0]), &form(&[0, 0, 1])), BigInt::from(1));
        assert_eq!(resultant(&form(&[1, -3, 2]), &form(&[1, 0, 0])), BigInt::from(4));
        let f = form(&[2, 1, -5, 3]);
        assert_eq!(resultant(&f, &f), BigInt::zero());
    }

    #[test]
    fn sylvester_oracle_matches_bareiss_on_examples() {
        for (f, g) in [
            (form(&[1, 0, 0]), form(&[0, 0, 1])),
            (form(&[1, -3, 2]), form(&[1, 0, 0])),
            (form(&[1, 0, 1]), form(&[0, 0, 1])),
            (form(&[0, 3, 1]), form(&[2, 0, 0])),
        ] {
            let m = sylvester_matrix(&f, &g);
            assert_eq!(leibniz(&m), resultant(&f, &g));
        }
        assert_eq!(leibniz(&sylvester_matrix(&form(&[1, -3, 2]), &form(&[1, 0, 0]))), BigInt::from(4));
    }

    // gcd of the dehomogenized polynomials over Q, degrees only.
    fn has_common_root(f: &BinaryForm, g: &BinaryForm) -> bool {
        if f.coeff(0).is_zero() && g.coeff(0).is_zero() {
            return true; // both vanish at [1:0]
        }
        // ascending coefficients of f(x, 1)
        let poly = |h: &BinaryForm| -> Vec<Rat> {
            let mut v: Vec<Rat> = h.coeffs().iter().rev().map(|c| Rat::from_integer(c.clone())).collect();
            while v.last().is_some_and(|c| c.is_zero()) {
                v.pop();
            }
            v
        };
        let (mut a, mut b) = (poly(f), poly(g));
        if a.is_empty() || b.is_empty() {
            return true;
        }
        while !b.is_empty() {
            // a mod b
            while a.len() >= b.len() && !a.is_empty() {
                let q = a.last().unwrap() / b.last().unwrap();
                let shift = a.len() - b.len();
                for (i, c) in b.iter().enumerate() {
                    a[i + shift] = &a[i + shift] - &q * c;
                }
                while a.last().is_some_and(|c| c.is_zero()) {
                    a.pop();
                }
            }
            std::mem::swap(&mut a, &mut b);
        }
        a.len() > 1
    }

    proptest! {
        #[test]
        fn bareiss_matches_leibniz(entries in proptest::collection::vec(-30i64..30, 25)) {
            let m: Vec<Vec<BigInt>> = entries.chunks(5).map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
            prop_assert_eq!(bareiss_determinant(m.clone()), leibniz(&m));
        }

        #[test]
        fn resultant_vanishes_iff_common_factor(
            a in proptest::collection::vec(-3i64..4, 3..5),
            b in proptest::collection::vec(-3i64..4, 3..5),
            shared in proptest::collection::vec(-2i64..3, 2),
            share in any::<bool>(),
        ) {
            let (mut f, mut g) = (BinaryForm::from_i64(&a), BinaryForm::from_i64(&b));
            prop_assume!(!f.is_zero() && !g.is_zero());
            let common = BinaryForm::from_i64(&shared);
            if share && !common.is_zero() {
                f = &f * &common;
                g = &g * &common;
            }
            let res = resultant(&f, &g);
            prop_assert_eq!(res.is_zero(), has_common_root(&f, &g), "res = {}", res.abs());
        }
    }
}
