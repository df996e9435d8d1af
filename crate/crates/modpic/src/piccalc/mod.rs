//! Divisor class groups: canonical representatives, the group law, order
//! computations, 2-torsion combinatorics, and halving over extensions.
//!
//! A degree-0 class is stored in the canonical form `A - d * B` where `B`
//! is a fixed degree-1 base place, `A` is effective, and `d <= g` is
//! minimal. Minimality forces `dim L(E + d B) = 1`, so `A` is unique and
//! equality of classes is literal equality of representations. All
//! constructions go through the exact Riemann-Roch solver, which also
//! hands out principality witnesses.

pub mod count;
pub mod quot;
pub mod rr;
pub mod twotors;

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::curve::func::CurveFn;
use crate::curve::point::{Divisor, InfKind, Place};
use crate::curve::CurveCtx;
use crate::ff::poly::Poly;
use crate::ff::{DeterministicStream, Elem};
use crate::{Error, Result};

/// A degree-0 divisor class in canonical form `[eff - depth * base]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PicElem {
    eff: Divisor,
    depth: i64,
}

impl std::fmt::Debug for PicElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:?} - {} * B]", self.eff, self.depth)
    }
}

impl PicElem {
    pub fn is_zero(&self) -> bool {
        self.depth == 0 && self.eff.is_zero()
    }

    pub fn effective_part(&self) -> &Divisor {
        &self.eff
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }
}

/// The divisor class group of the curve over a working field, pinned to a
/// degree-1 base place.
#[derive(Clone)]
pub struct Jacobian {
    ctx: Arc<CurveCtx>,
    base: Place,
}

/// Canonical degree-1 base place: the plus branch at infinity when it is
/// split (unless asked to avoid infinity), otherwise the plus branch over
/// the first prime-subfield coordinate whose fiber splits and is not in
/// the avoid list.
pub fn default_base_place(
    ctx: &Arc<CurveCtx>,
    avoid_infinity: bool,
    avoid_x: &[u64],
) -> Result<Place> {
    if ctx.is_inf_split() && !avoid_infinity {
        return Ok(Place::Infinite(InfKind::Plus));
    }
    let p = ctx.field().characteristic();
    for e in 0..p {
        if avoid_x.contains(&e) {
            continue;
        }
        let x0 = ctx.field().from_u64(e);
        let fe = ctx.f_poly().eval(&x0);
        if fe.is_zero() || !fe.is_square() {
            continue;
        }
        let places = ctx.places_above_x(&x0)?;
        return Ok(places.into_iter().min().expect("split fiber"));
    }
    Err(Error::Exhausted(
        "no degree-1 base place outside the excluded fibers".into(),
    ))
}

impl Jacobian {
    pub fn new(ctx: &Arc<CurveCtx>, base: Place) -> Result<Jacobian> {
        if base.degree() != 1 {
            return Err(Error::InvalidInput(
                "base place must have degree 1".into(),
            ));
        }
        Ok(Jacobian {
            ctx: ctx.clone(),
            base,
        })
    }

    pub fn with_default_base(ctx: &Arc<CurveCtx>) -> Result<Jacobian> {
        let base = default_base_place(ctx, false, &[])?;
        Jacobian::new(ctx, base)
    }

    pub fn ctx(&self) -> &Arc<CurveCtx> {
        &self.ctx
    }

    pub fn base(&self) -> &Place {
        &self.base
    }

    /// The divisor `eff - depth * B` representing a class.
    pub fn rep_divisor(&self, a: &PicElem) -> Divisor {
        let mut d = a.eff.clone();
        d.add_place(self.base.clone(), -a.depth);
        d
    }

    /// Canonical form of the class of a degree-0 divisor.
    pub fn class(&self, e: &Divisor) -> Result<PicElem> {
        Ok(self.reduce(e)?.0)
    }

    fn reduce(&self, e: &Divisor) -> Result<(PicElem, CurveFn)> {
        if e.degree() != 0 {
            return Err(Error::DegreeMismatch(format!(
                "class of a degree-{} divisor",
                e.degree()
            )));
        }
        let g = self.ctx.genus() as i64;
        for depth in 0..=g {
            let mut shifted = e.clone();
            shifted.add_place(self.base.clone(), depth);
            let space = rr::rr_space(&self.ctx, &shifted)?;
            if space.is_empty() {
                continue;
            }
            if space.len() != 1 {
                return Err(Error::ContextMismatch(format!(
                    "minimal depth {depth} carries dimension {}",
                    space.len()
                )));
            }
            let h = &space[0];
            let eff = &self.ctx.divisor_of(h)? + &shifted;
            debug_assert!(eff.is_effective());
            debug_assert_eq!(eff.degree(), depth);
            return Ok((PicElem { eff, depth }, h.clone()));
        }
        Err(Error::ContextMismatch(
            "no representative within the genus bound".into(),
        ))
    }

    pub fn zero(&self) -> PicElem {
        PicElem {
            eff: Divisor::zero(),
            depth: 0,
        }
    }

    /// Canonical form together with a witness `w` satisfying
    /// `input - represented = div(w)` exactly; the invariant every
    /// downstream construction leans on.
    pub fn class_with_witness(&self, e: &Divisor) -> Result<(PicElem, CurveFn)> {
        let (cls, h) = self.reduce(e)?;
        // `h` solves  eff = div(h) + e + depth * B,  i.e.
        // div(h) = rep - e, so the witness for e - rep is 1/h.
        let w = h.inv()?;
        debug_assert_eq!(
            self.ctx.divisor_of(&w).unwrap(),
            &e.clone() - &self.rep_divisor(&cls)
        );
        Ok((cls, w))
    }

    pub fn add(&self, a: &PicElem, b: &PicElem) -> Result<PicElem> {
        let d = &self.rep_divisor(a) + &self.rep_divisor(b);
        self.class(&d)
    }

    /// Sum with a witness: `rep(a) + rep(b) - rep(a + b) = div(w)`.
    pub fn add_with_witness(&self, a: &PicElem, b: &PicElem) -> Result<(PicElem, CurveFn)> {
        let d = &self.rep_divisor(a) + &self.rep_divisor(b);
        self.class_with_witness(&d)
    }

    /// Scalar multiple with a witness: `k * rep(a) - rep(k * a) = div(w)`.
    /// The witness composes multiplicatively through the double-and-add
    /// chain, so it stays exact at every step.
    pub fn smul_with_witness(&self, k: u64, a: &PicElem) -> Result<(PicElem, CurveFn)> {
        let mut acc = self.zero();
        let mut w = CurveFn::one(&self.ctx);
        if k == 0 || a.is_zero() {
            return Ok((acc, w));
        }
        for i in (0..64 - k.leading_zeros()).rev() {
            let (doubled, wd) = self.add_with_witness(&acc, &acc)?;
            w = w.mul(&w).mul(&wd);
            acc = doubled;
            if k & (1 << i) != 0 {
                let (next, wa) = self.add_with_witness(&acc, a)?;
                w = w.mul(&wa);
                acc = next;
            }
        }
        Ok((acc, w))
    }

    pub fn neg(&self, a: &PicElem) -> Result<PicElem> {
        self.class(&self.rep_divisor(a).neg())
    }

    pub fn sub(&self, a: &PicElem, b: &PicElem) -> Result<PicElem> {
        let d = &self.rep_divisor(a) - &self.rep_divisor(b);
        self.class(&d)
    }

    pub fn smul(&self, k: i64, a: &PicElem) -> Result<PicElem> {
        let pos = self.smul_big(&BigUint::from(k.unsigned_abs()), a)?;
        if k < 0 {
            self.neg(&pos)
        } else {
            Ok(pos)
        }
    }

    pub fn smul_big(&self, k: &BigUint, a: &PicElem) -> Result<PicElem> {
        let mut acc = self.zero();
        if k.is_zero() || a.is_zero() {
            return Ok(acc);
        }
        let bits = k.bits();
        for i in (0..bits).rev() {
            acc = self.add(&acc, &acc)?;
            if k.bit(i) {
                acc = self.add(&acc, a)?;
            }
        }
        Ok(acc)
    }

    /// Witness `h` with `div(h) = E` when `[E] = 0`.
    pub fn principal_witness(&self, e: &Divisor) -> Result<Option<CurveFn>> {
        rr::principal_witness(&self.ctx, e)
    }

    pub fn is_principal(&self, e: &Divisor) -> Result<bool> {
        Ok(self.principal_witness(e)?.is_some())
    }

    /// Image of a class under the working field's Frobenius (meaningful
    /// when the base place is fixed by it, e.g. chosen over the prime
    /// subfield).
    pub fn frobenius(&self, a: &PicElem) -> Result<PicElem> {
        debug_assert_eq!(self.base.frobenius(), self.base);
        self.class(&self.rep_divisor(a).frobenius())
    }

    /// Group order over the working field, from the zeta data.
    pub fn order(&self) -> Result<BigUint> {
        count::jacobian_order(self.ctx.curve(), self.ctx.field().degree() as u32)
    }

    /// A pseudo-random class from a deterministic stream.
    pub fn random_class(&self, stream: &mut DeterministicStream) -> Result<PicElem> {
        let g = self.ctx.genus() as i64;
        let p = self.ctx.field().characteristic();
        let span = self.ctx.field().order_u64().unwrap_or(p);
        let mut acc = Divisor::zero();
        let mut deg = 0i64;
        while deg < g {
            let code = stream.next_u64() % span;
            let x0 = self.ctx.field().elem_from_index(code);
            let places = self.ctx.places_above_x(&x0)?;
            let pl = places[(stream.next_u64() as usize) % places.len()].clone();
            deg += pl.degree() as i64;
            acc.add_place(pl, 1);
        }
        acc.add_place(self.base.clone(), -deg);
        self.class(&acc)
    }

    /// Every place of residue degree at most `dmax`, in canonical order.
    pub fn places_up_to(&self, dmax: usize) -> Result<Vec<Place>> {
        let mut out: Vec<Place> = self
            .ctx
            .infinite_places()
            .into_iter()
            .filter(|pl| pl.degree() <= dmax)
            .collect();
        for d in 1..=dmax {
            for u in monic_irreducibles(&self.ctx, d)? {
                for pl in self.ctx.places_above(&u)? {
                    if pl.degree() <= dmax {
                        out.push(pl);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// The full group as a set of canonical forms, by enumerating all
    /// effective divisors of degree at most `g`. Intended for small
    /// working fields; `budget` caps the number of reductions.
    pub fn enumerate(&self, budget: usize) -> Result<Vec<PicElem>> {
        let g = self.ctx.genus();
        let places = self.places_up_to(g)?;
        let mut seen: BTreeSet<PicElem> = BTreeSet::new();
        let mut stack: Vec<(Divisor, i64, usize)> = vec![(Divisor::zero(), 0, 0)];
        let mut work = 0usize;
        while let Some((d, deg, idx)) = stack.pop() {
            work += 1;
            if work > budget {
                return Err(Error::BudgetExceeded(format!(
                    "class enumeration beyond {budget} nodes"
                )));
            }
            let mut e = d.clone();
            e.add_place(self.base.clone(), -deg);
            seen.insert(self.class(&e)?);
            for (i, pl) in places.iter().enumerate().skip(idx) {
                let nd = deg + pl.degree() as i64;
                if nd > g as i64 {
                    continue;
                }
                let mut next = d.clone();
                next.add_place(pl.clone(), 1);
                stack.push((next, nd, i));
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// All classes killed by `n`, by filtering the enumeration.
    pub fn torsion(&self, n: u64, budget: usize) -> Result<Vec<PicElem>> {
        let mut out = Vec::new();
        for cl in self.enumerate(budget)? {
            if self.smul(n as i64, &cl)?.is_zero() {
                out.push(cl);
            }
        }
        Ok(out)
    }
}

/// Monic irreducible polynomials of exact degree `d` over the working
/// field, in canonical (coefficient-counter) order.
pub fn monic_irreducibles(ctx: &Arc<CurveCtx>, d: usize) -> Result<Vec<Poly>> {
    let k = ctx.field();
    let span = k.order_u64().ok_or_else(|| {
        Error::BudgetExceeded("field too large for fiber enumeration".into())
    })?;
    let total = span.checked_pow(d as u32).ok_or_else(|| {
        Error::BudgetExceeded("fiber enumeration overflow".into())
    })?;
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut coeffs: Vec<Elem> = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push(k.elem_from_index(c % span));
            c /= span;
        }
        coeffs.push(k.one());
        let u = Poly::from_elems(k, coeffs);
        if u.is_irreducible() {
            out.push(u);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::ff::FiniteField;
    use num_traits::ToPrimitive;

    fn jac(p: u64, coeffs: &[i64]) -> Jacobian {
        let curve = Curve::new(p, coeffs).unwrap();
        let k = FiniteField::prime(p).unwrap();
        let ctx = CurveCtx::new(&curve, &k).unwrap();
        Jacobian::with_default_base(&ctx).unwrap()
    }

    #[test]
    fn witnesses_are_exact_for_class_add_and_scalar_mul() {
        for (p, coeffs) in [(5u64, &[1i64, 0, 0, 0, 1][..]), (7, &[3, 1, 0, 0, 0, 0, 1][..])] {
            let j = jac(p, coeffs);
            let ctx = j.ctx().clone();
            let mut stream = DeterministicStream::new(0x17e5 + p);
            for _ in 0..4 {
                let a = j.random_class(&mut stream).unwrap();
                let b = j.random_class(&mut stream).unwrap();
                let d = &j.rep_divisor(&a) + &j.rep_divisor(&b);
                let (s, w) = j.class_with_witness(&d).unwrap();
                assert_eq!(
                    ctx.divisor_of(&w).unwrap(),
                    &d - &j.rep_divisor(&s),
                    "input minus represented must be exactly the witness divisor"
                );
                let (s2, w2) = j.add_with_witness(&a, &b).unwrap();
                assert_eq!(s, s2);
                assert_eq!(
                    ctx.divisor_of(&w2).unwrap(),
                    &d - &j.rep_divisor(&s2)
                );
                for k in [2u64, 3, 5] {
                    let (m, wk) = j.smul_with_witness(k, &a).unwrap();
                    assert_eq!(m, j.smul(k as i64, &a).unwrap());
                    assert_eq!(
                        ctx.divisor_of(&wk).unwrap(),
                        &j.rep_divisor(&a).scale(k as i64) - &j.rep_divisor(&m),
                        "scalar witness tracks the whole double-and-add chain"
                    );
                }
            }
        }
    }

    #[test]
    fn group_laws_hold_on_random_classes() {
        for (p, coeffs) in [(5u64, &[1i64, 0, 0, 0, 1][..]), (7, &[3, 1, 0, 0, 0, 0, 1][..])] {
            let j = jac(p, coeffs);
            let mut stream = DeterministicStream::new(0xabcd + p);
            let a = j.random_class(&mut stream).unwrap();
            let b = j.random_class(&mut stream).unwrap();
            let c = j.random_class(&mut stream).unwrap();
            assert_eq!(j.add(&a, &b).unwrap(), j.add(&b, &a).unwrap());
            let ab_c = j.add(&j.add(&a, &b).unwrap(), &c).unwrap();
            let a_bc = j.add(&a, &j.add(&b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
            let na = j.neg(&a).unwrap();
            assert!(j.add(&a, &na).unwrap().is_zero());
            assert_eq!(j.add(&a, &j.zero()).unwrap(), a);
            // 3a = a + a + a
            let s3 = j.smul(3, &a).unwrap();
            let m3 = j.add(&j.add(&a, &a).unwrap(), &a).unwrap();
            assert_eq!(s3, m3);
        }
    }

    #[test]
    fn enumeration_matches_zeta_order() {
        let j = jac(5, &[1, 0, 0, 0, 1]);
        let all = j.enumerate(100_000).unwrap();
        assert_eq!(all.len() as u64, j.order().unwrap().to_u64().unwrap());
        let j2 = jac(5, &[2, 1, 0, 0, 0, 0, 1]);
        let all2 = j2.enumerate(100_000).unwrap();
        assert_eq!(all2.len() as u64, j2.order().unwrap().to_u64().unwrap());
    }

    #[test]
    fn order_annihilates_random_classes() {
        let j = jac(7, &[3, 1, 0, 0, 0, 0, 1]);
        let n = j.order().unwrap();
        let mut stream = DeterministicStream::new(0x77);
        for _ in 0..3 {
            let a = j.random_class(&mut stream).unwrap();
            assert!(j.smul_big(&n, &a).unwrap().is_zero());
        }
    }

    #[test]
    fn principality_detects_function_divisors() {
        let j = jac(5, &[1, 0, 0, 0, 1]);
        let ctx = j.ctx();
        let h = CurveFn::z(ctx).add(&CurveFn::x(ctx)).mul(&CurveFn::x(ctx).inv().unwrap());
        let e = ctx.divisor_of(&h).unwrap();
        let w = j.principal_witness(&e).unwrap().expect("principal");
        assert_eq!(ctx.divisor_of(&w).unwrap(), e);
        // but a nontrivial class is not principal
        let mut stream = DeterministicStream::new(9);
        let mut a = j.random_class(&mut stream).unwrap();
        while a.is_zero() {
            a = j.random_class(&mut stream).unwrap();
        }
        assert!(!j.is_principal(&j.rep_divisor(&a)).unwrap());
    }

    #[test]
    fn frobenius_fixes_rational_classes_and_respects_addition() {
        let curve = Curve::new(5, &[1, 0, 0, 0, 1]).unwrap();
        let k2 = FiniteField::extension(5, 2).unwrap();
        let ctx = CurveCtx::new(&curve, &k2).unwrap();
        let j = Jacobian::with_default_base(&ctx).unwrap();
        let mut stream = DeterministicStream::new(0xfe);
        let a = j.random_class(&mut stream).unwrap();
        let b = j.random_class(&mut stream).unwrap();
        let fr_sum = j.frobenius(&j.add(&a, &b).unwrap()).unwrap();
        let sum_fr = j
            .add(&j.frobenius(&a).unwrap(), &j.frobenius(&b).unwrap())
            .unwrap();
        assert_eq!(fr_sum, sum_fr);
        // a class defined over the prime field is fixed
        let jp = jac(5, &[1, 0, 0, 0, 1]);
        let mut stream2 = DeterministicStream::new(0xfe);
        let ap = jp.random_class(&mut stream2).unwrap();
        let lifted = lift_class(&jp, &j, &ap).unwrap();
        assert_eq!(j.frobenius(&lifted).unwrap(), lifted);
    }

    fn lift_class(from: &Jacobian, to: &Jacobian, a: &PicElem) -> Result<PicElem> {
        let d = from.rep_divisor(a);
        let lifted = crate::curve::lift_divisor(&d, from.ctx(), to.ctx())?;
        to.class(&lifted)
    }
}

