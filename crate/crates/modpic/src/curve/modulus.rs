//! The modulus: a reduced effective divisor made of complete unramified
//! `x`-fibers (affine fibers over chosen prime-field coordinates, or the
//! full fiber at infinity), and exact evaluation of functions at it.
//!
//! Values of a function at the modulus live in the unit group of the
//! product of the residue fields of its places. They are stored
//! componentwise per place ([`ModValue`]), which serves both working
//! fields: over the base field the components are étale-algebra values
//! (possibly in quadratic residue fields), over a splitting field they are
//! plain field values, one per geometric point.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::ff::Elem;
use crate::{Error, Result};

use super::func::CurveFn;
use super::local::{value_at, LeadValue};
use super::point::{Divisor, Place};
use super::CurveCtx;

/// A modulus: either the fiber at infinity or a sum of distinct affine
/// unramified fibers over prime-field `x`-coordinates. Always reduced
/// (multiplicity one per place) and of even degree `2 * (number of
/// fibers)`.
#[derive(Clone)]
pub struct Modulus {
    ctx: Arc<CurveCtx>,
    at_infinity: bool,
    x_coords: Vec<u64>,
    divisor: Divisor,
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.at_infinity {
            write!(f, "modulus at infinity")
        } else {
            write!(f, "modulus over x = {:?}", self.x_coords)
        }
    }
}

impl Modulus {
    /// The modulus supported at infinity (degree 2).
    pub fn at_infinity(ctx: &Arc<CurveCtx>) -> Modulus {
        Modulus {
            ctx: ctx.clone(),
            at_infinity: true,
            x_coords: Vec::new(),
            divisor: ctx.inf_fiber(),
        }
    }

    /// A modulus of affine fibers over distinct prime-field coordinates,
    /// each required to be unramified (`f(e) != 0`).
    pub fn affine(ctx: &Arc<CurveCtx>, coords: &[u64]) -> Result<Modulus> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("empty modulus".into()));
        }
        let p = ctx.field().characteristic();
        let mut sorted: Vec<u64> = coords.iter().map(|&c| c % p).collect();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != coords.len() {
            return Err(Error::InvalidInput(
                "modulus coordinates must be distinct mod p".into(),
            ));
        }
        let mut divisor = Divisor::zero();
        for &e in &sorted {
            let x0 = ctx.field().from_u64(e);
            let fe = ctx.f_poly().eval(&x0);
            if fe.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "modulus fiber x = {e} is ramified"
                )));
            }
            for pl in ctx.places_above_x(&x0)? {
                divisor.add_place(pl, 1);
            }
        }
        Ok(Modulus {
            ctx: ctx.clone(),
            at_infinity: false,
            x_coords: sorted,
            divisor,
        })
    }

    pub fn ctx(&self) -> &Arc<CurveCtx> {
        &self.ctx
    }

    pub fn is_at_infinity(&self) -> bool {
        self.at_infinity
    }

    pub fn x_coords(&self) -> &[u64] {
        &self.x_coords
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    /// Total degree `m` of the modulus.
    pub fn degree(&self) -> usize {
        self.divisor.degree() as usize
    }

    /// The places of the modulus in canonical order.
    pub fn places(&self) -> Vec<Place> {
        self.divisor.support().cloned().collect()
    }

    /// The same modulus over another working field (e.g. a splitting
    /// extension). The defining data (infinity flag / `x`-coordinates) is
    /// carried over; the places are re-derived there.
    pub fn base_change(&self, ctx: &Arc<CurveCtx>) -> Result<Modulus> {
        if self.at_infinity {
            Ok(Modulus::at_infinity(ctx))
        } else {
            Modulus::affine(ctx, &self.x_coords)
        }
    }

    /// Does the divisor keep fiber-level distance from the modulus? (No
    /// shared `x`-fiber and no infinite support when the modulus sits at
    /// infinity.)
    pub fn is_disjoint(&self, d: &Divisor) -> bool {
        !self.divisor.shares_fiber(d)
    }

    /// Evaluate a function at the modulus: the vector of residue values at
    /// its places. Errors if the function has a zero or pole on the
    /// modulus.
    pub fn evaluate(&self, h: &CurveFn) -> Result<ModValue> {
        let mut comps = BTreeMap::new();
        for pl in self.divisor.support() {
            let v = value_at(&self.ctx, h, pl)?;
            comps.insert(pl.clone(), v);
        }
        Ok(ModValue { comps })
    }

    /// The value vector of the constant 1.
    pub fn one_value(&self) -> ModValue {
        self.evaluate(&CurveFn::one(&self.ctx))
            .expect("constant 1 is a unit at the modulus")
    }
}

/// A unit of the product of residue fields at the modulus places,
/// componentwise.
#[derive(Clone, PartialEq, Eq)]
pub struct ModValue {
    comps: BTreeMap<Place, LeadValue>,
}

impl fmt::Debug for ModValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (pl, v)) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{pl:?} -> {v:?}")?;
        }
        write!(f, "]")
    }
}

impl ModValue {
    pub fn components(&self) -> &BTreeMap<Place, LeadValue> {
        &self.comps
    }

    pub fn from_components(comps: BTreeMap<Place, LeadValue>) -> ModValue {
        ModValue { comps }
    }

    fn check_same_places(&self, other: &ModValue) {
        debug_assert!(
            self.comps.len() == other.comps.len()
                && self.comps.keys().zip(other.comps.keys()).all(|(a, b)| a == b),
            "modulus values over different place sets"
        );
    }

    pub fn mul(&self, other: &ModValue) -> ModValue {
        self.check_same_places(other);
        ModValue {
            comps: self
                .comps
                .iter()
                .map(|(pl, v)| (pl.clone(), v.mul(&other.comps[pl])))
                .collect(),
        }
    }

    pub fn inv(&self) -> Result<ModValue> {
        let mut comps = BTreeMap::new();
        for (pl, v) in &self.comps {
            comps.insert(pl.clone(), v.inv()?);
        }
        Ok(ModValue { comps })
    }

    pub fn pow_i64(&self, e: i64) -> Result<ModValue> {
        let mut comps = BTreeMap::new();
        for (pl, v) in &self.comps {
            comps.insert(pl.clone(), v.pow_i64(e)?);
        }
        Ok(ModValue { comps })
    }

    /// Scale every component by a working-field scalar (a "diagonal"
    /// multiplication).
    pub fn scale_diagonal(&self, s: &Elem) -> ModValue {
        ModValue {
            comps: self
                .comps
                .iter()
                .map(|(pl, v)| (pl.clone(), v.scale(s)))
                .collect(),
        }
    }

    /// Is the value the diagonal embedding of the scalar `s`?
    pub fn equals_diagonal(&self, s: &Elem) -> bool {
        self.comps.values().all(|v| lead_equals_scalar(v, s))
    }

    /// If the value is a diagonal scalar, return it.
    pub fn as_diagonal(&self) -> Option<Elem> {
        let first = self.comps.values().next()?;
        let cand = lead_scalar_candidate(first)?;
        if self.equals_diagonal(&cand) {
            Some(cand)
        } else {
            None
        }
    }

    /// Norm to the working field: product of component norms.
    pub fn norm(&self) -> Elem {
        let mut it = self.comps.values();
        let first = it.next().expect("nonempty modulus");
        let mut acc = first.norm_to_base();
        for v in it {
            acc = &acc * &v.norm_to_base();
        }
        acc
    }

    /// Are all components `n`-th roots of unity in their residue fields?
    pub fn is_mu_n_valued(&self, n: u64) -> bool {
        self.comps
            .values()
            .all(|v| v.pow_i64(n as i64).map(|w| w.is_one()).unwrap_or(false))
    }
}

fn lead_equals_scalar(v: &LeadValue, s: &Elem) -> bool {
    match v {
        LeadValue::Base(e) => e == s,
        LeadValue::Ring(r) => *r == r.ring().from_base(s),
        LeadValue::Quad { re, im, .. } => im.is_zero() && *re == re.ring().from_base(s),
        LeadValue::InfQuad { re, im, .. } => im.is_zero() && re == s,
    }
}

fn lead_scalar_candidate(v: &LeadValue) -> Option<Elem> {
    match v {
        LeadValue::Base(e) => Some(e.clone()),
        LeadValue::Ring(r) => {
            if r.rep().is_constant() {
                Some(r.rep().coeff(0))
            } else {
                None
            }
        }
        LeadValue::Quad { re, im, .. } => {
            if im.is_zero() && re.rep().is_constant() {
                Some(re.rep().coeff(0))
            } else {
                None
            }
        }
        LeadValue::InfQuad { re, im, .. } => {
            if im.is_zero() {
                Some(re.clone())
            } else {
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::ff::FiniteField;

    fn ctx5() -> Arc<CurveCtx> {
        let curve = Curve::new(5, &[1, 0, 0, 0, 1]).unwrap();
        let k = FiniteField::prime(5).unwrap();
        CurveCtx::new(&curve, &k).unwrap()
    }

    #[test]
    fn modulus_shapes() {
        let c = ctx5();
        let mi = Modulus::at_infinity(&c);
        assert_eq!(mi.degree(), 2);
        // x = 0 splits, x = 1 inert: both are valid unramified fibers
        let ma = Modulus::affine(&c, &[0, 1]).unwrap();
        assert_eq!(ma.degree(), 4);
        assert_eq!(ma.places().len(), 3); // two split places + one inert place
        // ramified fiber rejected: f = x^4+x^2+3x has root 0
        let curve2 = Curve::new(5, &[0, 3, 1, 0, 1]).unwrap();
        let k = FiniteField::prime(5).unwrap();
        let c2 = CurveCtx::new(&curve2, &k).unwrap();
        assert!(Modulus::affine(&c2, &[0]).is_err());
        assert!(Modulus::affine(&c, &[2, 2]).is_err());
    }

    #[test]
    fn evaluation_is_multiplicative() {
        let c = ctx5();
        let m = Modulus::affine(&c, &[0, 1]).unwrap();
        let h1 = CurveFn::x(&c).add(&CurveFn::constant(&c, c.field().from_u64(2)));
        let h2 = CurveFn::z(&c).add(&CurveFn::x(&c));
        let v1 = m.evaluate(&h1).unwrap();
        let v2 = m.evaluate(&h2).unwrap();
        let v12 = m.evaluate(&h1.mul(&h2)).unwrap();
        assert_eq!(v1.mul(&v2), v12);
        let inv = v1.inv().unwrap();
        assert!(v1.mul(&inv).equals_diagonal(&c.field().one()));
    }

    #[test]
    fn evaluation_rejects_support_collision() {
        let c = ctx5();
        let m = Modulus::affine(&c, &[0]).unwrap();
        let h = CurveFn::x(&c); // vanishes on the fiber over 0
        assert!(m.evaluate(&h).is_err());
    }

    #[test]
    fn norm_and_diagonal_values() {
        let c = ctx5();
        let m = Modulus::at_infinity(&c);
        let v = m.one_value();
        assert!(v.equals_diagonal(&c.field().one()));
        assert_eq!(v.as_diagonal(), Some(c.field().one()));
        assert_eq!(v.norm(), c.field().one());
        let w = v.scale_diagonal(&c.field().from_u64(3));
        // norm over two degree-1 places: 3^2 = 9 = 4
        assert_eq!(w.norm(), c.field().from_u64(4));
        // evaluating x at the infinite modulus must fail (pole)
        assert!(m.evaluate(&CurveFn::x(&c)).is_err());
    }

    #[test]
    fn base_change_keeps_degree_and_splits_fibers() {
        let c = ctx5();
        let m = Modulus::affine(&c, &[1]).unwrap(); // inert over F_5
        assert_eq!(m.places().len(), 1);
        let k2 = FiniteField::extension(5, 2).unwrap();
        let curve = c.curve().clone();
        let c2 = CurveCtx::new(&curve, &k2).unwrap();
        let m2 = m.base_change(&c2).unwrap();
        assert_eq!(m2.degree(), 2);
        assert_eq!(m2.places().len(), 2); // f(1) = 2 becomes a square in F_25
    }
}
