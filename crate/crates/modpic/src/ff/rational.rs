//! Exact rational polynomial arithmetic for the characteristic-zero path
//! of the norm-constant certificate.
//!
//! Only what that path needs: arithmetic, evaluation, squarefreeness via
//! gcd with the derivative, and resultants. Coefficients are
//! `num_rational::BigRational`, so everything here is exact.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// A univariate polynomial over the rationals, little-endian, trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct QPoly {
    c: Vec<BigRational>,
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, co) in self.c.iter().enumerate().rev() {
            if co.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{co}")?,
                1 => write!(f, "({co})*x")?,
                _ => write!(f, "({co})*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl QPoly {
    pub fn zero() -> QPoly {
        QPoly { c: Vec::new() }
    }

    pub fn from_coeffs(c: Vec<BigRational>) -> QPoly {
        let mut p = QPoly { c };
        p.trim();
        p
    }

    /// From integer coefficients (little-endian).
    pub fn from_i64_coeffs(c: &[i64]) -> QPoly {
        QPoly::from_coeffs(
            c.iter()
                .map(|&v| BigRational::from(BigInt::from(v)))
                .collect(),
        )
    }

    pub fn constant(v: BigRational) -> QPoly {
        QPoly::from_coeffs(vec![v])
    }

    pub fn x() -> QPoly {
        QPoly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    fn trim(&mut self) {
        while let Some(last) = self.c.last() {
            if last.is_zero() {
                self.c.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn deg_i(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn leading(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for co in self.c.iter().rev() {
            acc = acc * x + co;
        }
        acc
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.c.len().max(other.c.len());
        QPoly::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.c.len().max(other.c.len());
        QPoly::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.c.len() + other.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            for (j, y) in other.c.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        QPoly::from_coeffs(c)
    }

    pub fn scale(&self, s: &BigRational) -> QPoly {
        QPoly::from_coeffs(self.c.iter().map(|v| v * s).collect())
    }

    pub fn derivative(&self) -> QPoly {
        if self.c.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, v)| v * BigRational::from(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn divrem(&self, d: &QPoly) -> Result<(QPoly, QPoly)> {
        if d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let dd = d.c.len();
        if self.c.len() < dd {
            return Ok((QPoly::zero(), self.clone()));
        }
        let lead_inv = BigRational::one() / d.leading();
        let mut rem = self.c.clone();
        let mut quot = vec![BigRational::zero(); self.c.len() - dd + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dd - 1].clone();
            if top.is_zero() {
                continue;
            }
            let q = top * &lead_inv;
            for (j, dc) in d.c.iter().enumerate() {
                let t = &q * dc;
                rem[k + j] -= t;
            }
            quot[k] = q;
        }
        Ok((QPoly::from_coeffs(quot), QPoly::from_coeffs(rem)))
    }

    pub fn rem(&self, d: &QPoly) -> Result<QPoly> {
        Ok(self.divrem(d)?.1)
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero");
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let inv = BigRational::one() / a.leading();
        a.scale(&inv)
    }

    pub fn is_squarefree(&self) -> bool {
        if self.c.len() <= 1 {
            return true;
        }
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Resultant, same convention as the finite-field version: for monic
    /// `self`, the product of `other` over the roots of `self`.
    pub fn resultant(&self, other: &QPoly) -> BigRational {
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = BigRational::one();
        loop {
            if b.is_zero() {
                return BigRational::zero();
            }
            if b.degree() == Some(0) {
                let da = a.deg_i().max(0) as u32;
                let mut l = BigRational::one();
                for _ in 0..da {
                    l *= b.coeff(0).clone();
                }
                return acc * l;
            }
            if a.deg_i() < b.deg_i() {
                if (a.deg_i().max(0) * b.deg_i()) % 2 == 1 {
                    acc = -acc;
                }
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            let r = a.rem(&b).expect("nonzero");
            let da = a.deg_i();
            let db = b.deg_i();
            let dr = r.deg_i().max(0);
            let mut l = BigRational::one();
            for _ in 0..(da - dr) {
                l *= b.leading();
            }
            acc *= l;
            if (da * db) % 2 == 1 {
                acc = -acc;
            }
            a = b;
            b = r;
        }
    }

    /// Content-normalized pretty check helper: is the polynomial a nonzero
    /// rational square times another (i.e. proportional)?
    pub fn proportional_to(&self, other: &QPoly) -> Option<BigRational> {
        if self.is_zero() || other.is_zero() || self.degree() != other.degree() {
            return None;
        }
        let ratio = self.leading() / other.leading();
        let scaled = other.scale(&ratio);
        if &scaled == self {
            Some(ratio)
        } else {
            None
        }
    }
}

/// Is a rational number a perfect square in `Q`?
pub fn is_rational_square(v: &BigRational) -> bool {
    if v.is_zero() {
        return true;
    }
    if v.is_negative() {
        return false;
    }
    let num = v.numer();
    let den = v.denom();
    num.sqrt().pow(2u32) == *num && den.sqrt().pow(2u32) == *den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn arithmetic_and_eval() {
        let p = QPoly::from_i64_coeffs(&[1, 0, 2]); // 2x^2 + 1
        let r = QPoly::from_i64_coeffs(&[-1, 1]); // x - 1
        let prod = p.mul(&r);
        assert_eq!(prod.eval(&q(2, 1)), q(9, 1)); // (2*4+1)*(2-1) = 9
        let (quo, rem) = prod.divrem(&r).unwrap();
        assert_eq!(quo, p);
        assert!(rem.is_zero());
    }

    #[test]
    fn squarefree_detection() {
        let r = QPoly::from_i64_coeffs(&[-1, 1]);
        let sq = r.mul(&r);
        assert!(!sq.is_squarefree());
        assert!(QPoly::from_i64_coeffs(&[-2, 0, 1]).is_squarefree());
    }

    /// Oracle: res(x^2 - 2, x - 3) = (3 - sqrt2)(3 + sqrt2) = 7.
    #[test]
    fn resultant_oracle() {
        let a = QPoly::from_i64_coeffs(&[-2, 0, 1]);
        let b = QPoly::from_i64_coeffs(&[-3, 1]);
        assert_eq!(a.resultant(&b), q(7, 1));
    }

    #[test]
    fn rational_squares() {
        assert!(is_rational_square(&q(4, 9)));
        assert!(is_rational_square(&q(0, 1)));
        assert!(!is_rational_square(&q(-4, 9)));
        assert!(!is_rational_square(&q(2, 1)));
    }
}
