//! Point counts over extension fields and Jacobian orders through the
//! characteristic polynomial of Frobenius.
//!
//! For genus 1 and 2 the polynomial is pinned down by the point counts
//! `N_1` (and `N_2`) via Newton's identities plus the functional equation.
//! Orders over any extension then come out of the companion matrix:
//! `#J(F_{q^t}) = det(A^t - I)`, evaluated in exact integer arithmetic.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::curve::Curve;
use crate::ff::FiniteField;
use crate::{Error, Result};

/// Number of points on the completed smooth model over `F_{q^t}` where
/// `q` is the curve's base characteristic: affine solutions of
/// `z^2 = f(x)` plus 2, 1 or 0 rational points at infinity.
pub fn curve_point_count(curve: &Arc<Curve>, t: u32) -> Result<u64> {
    let k = if t == 1 {
        FiniteField::prime(curve.characteristic())?
    } else {
        FiniteField::extension(curve.characteristic(), t as usize)?
    };
    let f = curve.f_over_prime().lift_to(&k)?;
    let mut count = 0u64;
    let mut x = k.zero();
    let total = k.order_u64().ok_or_else(|| {
        Error::BudgetExceeded("field too large for exhaustive point count".into())
    })?;
    for _ in 0..total {
        let fx = f.eval(&x);
        if fx.is_zero() {
            count += 1;
        } else if fx.is_square() {
            count += 2;
        }
        x = k.next_elem(&x);
    }
    if f.leading().is_square() {
        count += 2;
    }
    Ok(count)
}

/// Coefficients `[c_0, ..., c_{2g}]` (constant first, monic) of the
/// characteristic polynomial of Frobenius acting on the Jacobian.
/// Supported for genus 1 and 2.
pub fn frobenius_charpoly(curve: &Arc<Curve>) -> Result<Vec<i64>> {
    let q = curve.characteristic() as i64;
    match curve.genus() {
        1 => {
            let n1 = curve_point_count(curve, 1)? as i64;
            let e1 = q + 1 - n1;
            // T^2 - e1 T + q
            Ok(vec![q, -e1, 1])
        }
        2 => {
            let n1 = curve_point_count(curve, 1)? as i64;
            let n2 = curve_point_count(curve, 2)? as i64;
            let p1 = q + 1 - n1;
            let p2 = q * q + 1 - n2;
            debug_assert_eq!((p1 * p1 - p2) % 2, 0);
            let e1 = p1;
            let e2 = (p1 * p1 - p2) / 2;
            // T^4 - e1 T^3 + e2 T^2 - q e1 T + q^2
            Ok(vec![q * q, -q * e1, e2, -e1, 1])
        }
        g => Err(Error::Unsupported(format!(
            "Frobenius polynomial restricted to genus <= 2, got {g}"
        ))),
    }
}

/// Power sums `p_t = sum alpha_i^t` of the Frobenius eigenvalues,
/// extended by the Newton recurrence. Returns `p_1..p_t`.
fn power_sums(charpoly: &[i64], t: u32) -> Vec<BigInt> {
    let deg = charpoly.len() - 1;
    // e_k with signs: charpoly = sum_i c_i T^i, monic; e_k = (-1)^k c_{deg-k}
    let e: Vec<BigInt> = (0..=deg)
        .map(|j| {
            let c = BigInt::from(charpoly[deg - j]);
            if j % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    let mut p: Vec<BigInt> = Vec::with_capacity(t as usize);
    for m in 1..=(t as usize) {
        // p_m = e1 p_{m-1} - e2 p_{m-2} + ... +- m e_m
        let mut s = BigInt::zero();
        for i in 1..m.min(deg + 1) {
            let term = &e[i] * &p[m - 1 - i];
            if i % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        if m <= deg {
            let term = BigInt::from(m as i64) * &e[m];
            if m % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        p.push(s);
    }
    p
}

/// Predicted `#C(F_{q^t})` from the characteristic polynomial:
/// `q^t + 1 - p_t`.
pub fn predicted_point_count(curve: &Arc<Curve>, t: u32) -> Result<BigInt> {
    let cp = frobenius_charpoly(curve)?;
    let p = power_sums(&cp, t);
    let qt = BigInt::from(curve.characteristic()).pow(t);
    Ok(qt + 1 - &p[(t - 1) as usize])
}

/// `#J(F_{q^t}) = prod (alpha_i^t - 1) = det(A^t - I)` for the companion
/// matrix `A` of the Frobenius polynomial.
pub fn jacobian_order(curve: &Arc<Curve>, t: u32) -> Result<BigUint> {
    let cp = frobenius_charpoly(curve)?;
    let n = cp.len() - 1;
    // companion matrix: subdiagonal 1s, last column -c_0..-c_{n-1}
    let mut a = vec![vec![BigInt::zero(); n]; n];
    for i in 1..n {
        a[i][i - 1] = BigInt::one();
    }
    for i in 0..n {
        a[i][n - 1] = -BigInt::from(cp[i]);
    }
    let mut m = mat_identity(n);
    let mut base = a;
    let mut e = t;
    while e > 0 {
        if e & 1 == 1 {
            m = mat_mul(&m, &base);
        }
        base = mat_mul(&base, &base);
        e >>= 1;
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= BigInt::one();
    }
    let d = det(&m);
    if d.is_zero() {
        return Err(Error::ContextMismatch(
            "Frobenius eigenvalue of finite order: singular curve data".into(),
        ));
    }
    Ok(d.abs().to_biguint().expect("nonnegative"))
}

fn mat_identity(n: usize) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut c = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let t = &a[i][k] * &b[k][j];
                c[i][j] += t;
            }
        }
    }
    c
}

/// Exact determinant by cofactor expansion (matrices here are at most
/// 4 x 4).
fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut s = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter_map(|(k, v)| (k != j).then(|| v.clone()))
                    .collect()
            })
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn predicted_counts_match_brute_force() {
        // genus 1: fit on N_1, check N_2 and N_3 against enumeration
        let c1 = Curve::new(5, &[1, 0, 0, 0, 1]).unwrap();
        for t in 2..=3 {
            let pred = predicted_point_count(&c1, t).unwrap();
            let brute = curve_point_count(&c1, t).unwrap();
            assert_eq!(pred, BigInt::from(brute), "genus 1, t = {t}");
        }
        // genus 2: fit on N_1, N_2, check N_3
        let c2 = Curve::new(5, &[2, 1, 0, 0, 0, 0, 1]).unwrap();
        let pred = predicted_point_count(&c2, 3).unwrap();
        let brute = curve_point_count(&c2, 3).unwrap();
        assert_eq!(pred, BigInt::from(brute), "genus 2, t = 3");
        // and with inert infinity (lc a non-square mod 7)
        let c3 = Curve::new(7, &[1, 1, 0, 0, 3]).unwrap();
        let pred = predicted_point_count(&c3, 2).unwrap();
        let brute = curve_point_count(&c3, 2).unwrap();
        assert_eq!(pred, BigInt::from(brute), "inert infinity, t = 2");
    }

    #[test]
    fn genus_one_group_order_is_point_count() {
        let c1 = Curve::new(5, &[1, 0, 0, 0, 1]).unwrap();
        let n1 = curve_point_count(&c1, 1).unwrap();
        let j1 = jacobian_order(&c1, 1).unwrap();
        assert_eq!(j1.to_u64().unwrap(), n1);
        let n2 = curve_point_count(&c1, 2).unwrap();
        let j2 = jacobian_order(&c1, 2).unwrap();
        assert_eq!(j2.to_u64().unwrap(), n2);
    }

    #[test]
    fn order_towers_divide() {
        let c2 = Curve::new(7, &[3, 1, 0, 0, 0, 0, 1]).unwrap();
        let j1 = jacobian_order(&c2, 1).unwrap();
        let j2 = jacobian_order(&c2, 2).unwrap();
        let j4 = jacobian_order(&c2, 4).unwrap();
        assert!((&j2 % &j1).is_zero());
        assert!((&j4 % &j2).is_zero());
        // Weil bound: (sqrt(q)-1)^{2g} <= #J <= (sqrt(q)+1)^{2g}
        let lo = 7f64.sqrt() - 1.0;
        let hi = 7f64.sqrt() + 1.0;
        let j1f = j1.to_u64().unwrap() as f64;
        assert!(j1f >= lo.powi(4) - 1e-6 && j1f <= hi.powi(4) + 1e-6);
    }
}
