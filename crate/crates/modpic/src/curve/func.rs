//! Elements of the function field: `(a(x) + b(x) z) / c(x)` over the
//! working field, with full field arithmetic.
//!
//! Inversion goes through the conjugate: `1/(a + bz) = (a - bz)/(a^2 -
//! b^2 f)`. Representations are kept gcd-reduced with monic denominator,
//! but no attempt is made to cancel non-polynomial common zeros; the local
//! expansion engine computes orders exactly regardless of representation.

use std::fmt;
use std::sync::Arc;

use crate::ff::poly::Poly;
use crate::ff::Elem;
use crate::{Error, Result};

use super::CurveCtx;

/// A function `(a + b z)/c` on the curve over its working field.
#[derive(Clone)]
pub struct CurveFn {
    ctx: Arc<CurveCtx>,
    a: Poly,
    b: Poly,
    c: Poly,
}

impl fmt::Debug for CurveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + ({})*z)/({})", self.a, self.b, self.c)
    }
}

impl PartialEq for CurveFn {
    fn eq(&self, other: &Self) -> bool {
        // cross-multiplied comparison, representation-independent
        &self.a * &other.c == &other.a * &self.c && &self.b * &other.c == &other.b * &self.c
    }
}

impl Eq for CurveFn {}

impl CurveFn {
    pub fn new(ctx: &Arc<CurveCtx>, a: Poly, b: Poly, c: Poly) -> Result<CurveFn> {
        if c.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut f = CurveFn {
            ctx: ctx.clone(),
            a,
            b,
            c,
        };
        f.normalize();
        Ok(f)
    }

    pub fn from_poly(ctx: &Arc<CurveCtx>, a: Poly) -> CurveFn {
        let one = Poly::one(ctx.field());
        let zero = Poly::zero(ctx.field());
        CurveFn::new(ctx, a, zero, one).expect("denominator 1")
    }

    pub fn constant(ctx: &Arc<CurveCtx>, e: Elem) -> CurveFn {
        CurveFn::from_poly(ctx, Poly::constant(e))
    }

    pub fn one(ctx: &Arc<CurveCtx>) -> CurveFn {
        CurveFn::constant(ctx, ctx.field().one())
    }

    pub fn x(ctx: &Arc<CurveCtx>) -> CurveFn {
        CurveFn::from_poly(ctx, Poly::x(ctx.field()))
    }

    pub fn z(ctx: &Arc<CurveCtx>) -> CurveFn {
        let zero = Poly::zero(ctx.field());
        let one = Poly::one(ctx.field());
        CurveFn::new(ctx, zero, one.clone(), one).expect("denominator 1")
    }

    pub fn ctx(&self) -> &Arc<CurveCtx> {
        &self.ctx
    }

    pub fn parts(&self) -> (&Poly, &Poly, &Poly) {
        (&self.a, &self.b, &self.c)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_constant_one(&self) -> bool {
        self.b.is_zero() && self.a == self.c
    }

    /// Is the function a nonzero constant of the working field? Returns it.
    pub fn as_constant(&self) -> Option<Elem> {
        if self.b.is_zero() && !self.a.is_zero() && self.a.degree() == self.c.degree() {
            let (q, r) = self.a.divrem(&self.c).expect("nonzero denominator");
            if r.is_zero() && q.is_constant() {
                return Some(q.coeff(0));
            }
        }
        None
    }

    fn normalize(&mut self) {
        let g = self.a.gcd(&self.b).gcd(&self.c);
        if !g.is_one() && !g.is_zero() {
            self.a = self.a.div_exact(&g).expect("gcd divides");
            self.b = self.b.div_exact(&g).expect("gcd divides");
            self.c = self.c.div_exact(&g).expect("gcd divides");
        }
        let lc = self.c.leading();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero denominator");
            self.a = self.a.scale(&inv);
            self.b = self.b.scale(&inv);
            self.c = self.c.monic().expect("nonzero");
        }
    }

    /// The same function over an extension context (coefficientwise
    /// embedding of the numerator and denominator polynomials).
    pub fn lift_to(&self, target: &Arc<CurveCtx>) -> Result<CurveFn> {
        let tf = target.field();
        CurveFn::new(
            target,
            self.a.lift_to(tf)?,
            self.b.lift_to(tf)?,
            self.c.lift_to(tf)?,
        )
    }

    /// The hyperelliptic conjugate `z -> -z`.
    pub fn conj(&self) -> CurveFn {
        CurveFn {
            ctx: self.ctx.clone(),
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
        }
    }

    /// Coefficientwise Frobenius (semilinear Galois action on functions).
    pub fn frobenius(&self) -> CurveFn {
        let mut f = CurveFn {
            ctx: self.ctx.clone(),
            a: self.a.map_coeffs(|e| e.frobenius()),
            b: self.b.map_coeffs(|e| e.frobenius()),
            c: self.c.map_coeffs(|e| e.frobenius()),
        };
        f.normalize();
        f
    }

    /// Numerator norm `a^2 - b^2 f` (the polynomial `N` with
    /// `(a + bz)(a - bz) = N`).
    pub fn numerator_norm(&self) -> Poly {
        &(&self.a * &self.a) - &(&(&self.b * &self.b) * self.ctx.f_poly())
    }

    pub fn add(&self, other: &CurveFn) -> CurveFn {
        let a = &(&self.a * &other.c) + &(&other.a * &self.c);
        let b = &(&self.b * &other.c) + &(&other.b * &self.c);
        let c = &self.c * &other.c;
        CurveFn::new(&self.ctx, a, b, c).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &CurveFn) -> CurveFn {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CurveFn {
        CurveFn {
            ctx: self.ctx.clone(),
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
        }
    }

    pub fn mul(&self, other: &CurveFn) -> CurveFn {
        let f = self.ctx.f_poly();
        let a = &(&self.a * &other.a) + &(&(&self.b * &other.b) * f);
        let b = &(&self.a * &other.b) + &(&self.b * &other.a);
        let c = &self.c * &other.c;
        CurveFn::new(&self.ctx, a, b, c).expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<CurveFn> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        // 1 / ((a+bz)/c) = c (a - bz) / (a^2 - b^2 f)
        let n = self.numerator_norm();
        debug_assert!(!n.is_zero(), "norm of nonzero function is nonzero");
        let a = &self.c * &self.a;
        let b = -&(&self.c * &self.b);
        CurveFn::new(&self.ctx, a, b, n)
    }

    pub fn div(&self, other: &CurveFn) -> Result<CurveFn> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, s: &Elem) -> CurveFn {
        let mut f = CurveFn {
            ctx: self.ctx.clone(),
            a: self.a.scale(s),
            b: self.b.scale(s),
            c: self.c.clone(),
        };
        f.normalize();
        f
    }

    pub fn pow_i64(&self, e: i64) -> Result<CurveFn> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = CurveFn::one(&self.ctx);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Value at an affine point `(x0, z0)` of the working field where the
    /// denominator does not vanish.
    pub fn eval_point(&self, x0: &Elem, z0: &Elem) -> Result<Elem> {
        let cv = self.c.eval(x0);
        if cv.is_zero() {
            return Err(Error::SupportCollision(
                "denominator vanishes at evaluation point".into(),
            ));
        }
        let num = &self.a.eval(x0) + &(&self.b.eval(x0) * z0);
        Ok(&num * &cv.inv()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::ff::FiniteField;

    fn ctx() -> Arc<CurveCtx> {
        // z^2 = x^4 + 1 over F_5 (squarefree: gcd with derivative is 1)
        let curve = Curve::new(5, &[1, 0, 0, 0, 1]).unwrap();
        let k = FiniteField::prime(5).unwrap();
        CurveCtx::new(&curve, &k).unwrap()
    }

    #[test]
    fn field_axioms_on_functions() {
        let c = ctx();
        let x = CurveFn::x(&c);
        let z = CurveFn::z(&c);
        let s = x.add(&z); // x + z
        let t = x.mul(&z).add(&CurveFn::one(&c)); // xz + 1
        let prod = s.mul(&t);
        assert_eq!(prod.div(&t).unwrap(), s);
        let inv = s.inv().unwrap();
        assert!(s.mul(&inv).is_constant_one());
        // z^2 = f as functions
        let z2 = z.mul(&z);
        let f = CurveFn::from_poly(&c, c.f_poly().clone());
        assert_eq!(z2, f);
    }

    #[test]
    fn conjugation_is_ring_automorphism() {
        let c = ctx();
        let x = CurveFn::x(&c);
        let z = CurveFn::z(&c);
        let s = x.add(&z);
        let t = z.mul(&x).sub(&CurveFn::one(&c));
        assert_eq!(s.mul(&t).conj(), s.conj().mul(&t.conj()));
        assert_eq!(s.add(&t).conj(), s.conj().add(&t.conj()));
        // norm = s * conj(s) is a pure polynomial function
        let n = s.mul(&s.conj());
        let (_, b, _) = n.parts();
        assert!(b.is_zero());
    }

    #[test]
    fn evaluation_at_points() {
        let c = ctx();
        // point (0, 1): 1^2 = 0^4 + 1
        let x0 = c.field().from_u64(0);
        let z0 = c.field().from_u64(1);
        let g = CurveFn::x(&c).add(&CurveFn::z(&c)); // x + z -> 1
        assert_eq!(g.eval_point(&x0, &z0).unwrap(), c.field().from_u64(1));
        let h = g.inv().unwrap();
        assert_eq!(h.eval_point(&x0, &z0).unwrap(), c.field().from_u64(1));
    }
}
