//! Exact local analysis at places: orders of vanishing and leading
//! coefficients with respect to the canonical uniformizers.
//!
//! Canonical uniformizers: `u(x)` at finite unramified places, `z` at
//! ramification places, `1/x` at infinity. All computations are exact:
//! finite places are handled through valuations of the numerator norm
//! `a^2 - b^2 f` (never through generic series), and the two places at
//! infinity through truncated Laurent expansions in `1/x` whose required
//! precision is bounded a priori by the degrees involved, with the bound
//! asserted.
//!
//! Leading coefficients live in the residue field of the place. The
//! [`LeadValue`] enum covers the four shapes of residue field that occur:
//! the working field itself, an extension `K[T]/u`, the quadratic
//! extension of such a ring by `z`, and the quadratic extension
//! `K(sqrt(lc))` at inert infinity.

use std::sync::Arc;

use crate::ff::poly::{Poly, RElem, ResidueRing};
use crate::ff::Elem;
use crate::{Error, Result};

use super::func::CurveFn;
use super::point::{FiniteKind, InfKind, Place};
use super::CurveCtx;

/// A value in the residue field of a place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeadValue {
    /// Residue field is the working field.
    Base(Elem),
    /// Residue field `K[T]/u` of a finite place (split branch value, or a
    /// ramification place of degree > 1).
    Ring(RElem),
    /// Residue field of an inert finite place: `re + im * zbar` where
    /// `zbar^2 = disc` (`disc` = `f mod u`, a non-square in `K[T]/u`).
    Quad { re: RElem, im: RElem, disc: RElem },
    /// Residue field at inert infinity: `re + im * w` with `w^2 = lc(f)`.
    InfQuad { re: Elem, im: Elem, lc: Elem },
}

impl LeadValue {
    pub fn is_zero(&self) -> bool {
        match self {
            LeadValue::Base(e) => e.is_zero(),
            LeadValue::Ring(r) => r.is_zero(),
            LeadValue::Quad { re, im, .. } => re.is_zero() && im.is_zero(),
            LeadValue::InfQuad { re, im, .. } => re.is_zero() && im.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            LeadValue::Base(e) => e.is_one(),
            LeadValue::Ring(r) => r.is_one(),
            LeadValue::Quad { re, im, .. } => re.is_one() && im.is_zero(),
            LeadValue::InfQuad { re, im, .. } => re.is_one() && im.is_zero(),
        }
    }

    pub fn mul(&self, other: &LeadValue) -> LeadValue {
        match (self, other) {
            (LeadValue::Base(a), LeadValue::Base(b)) => LeadValue::Base(a * b),
            (LeadValue::Ring(a), LeadValue::Ring(b)) => LeadValue::Ring(a.mul(b)),
            (
                LeadValue::Quad { re: r1, im: i1, disc },
                LeadValue::Quad { re: r2, im: i2, .. },
            ) => LeadValue::Quad {
                re: r1.mul(r2).add(&i1.mul(i2).mul(disc)),
                im: r1.mul(i2).add(&i1.mul(r2)),
                disc: disc.clone(),
            },
            (
                LeadValue::InfQuad { re: r1, im: i1, lc },
                LeadValue::InfQuad { re: r2, im: i2, .. },
            ) => LeadValue::InfQuad {
                re: &(r1 * r2) + &(&(i1 * i2) * lc),
                im: &(r1 * i2) + &(i1 * r2),
                lc: lc.clone(),
            },
            _ => panic!("residue values of different places combined"),
        }
    }

    pub fn inv(&self) -> Result<LeadValue> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(match self {
            LeadValue::Base(e) => LeadValue::Base(e.inv()?),
            LeadValue::Ring(r) => LeadValue::Ring(r.inv()?),
            LeadValue::Quad { re, im, disc } => {
                // (re - im z)/(re^2 - im^2 disc)
                let n = re.mul(re).sub(&im.mul(im).mul(disc));
                let ninv = n.inv()?;
                LeadValue::Quad {
                    re: re.mul(&ninv),
                    im: im.neg().mul(&ninv),
                    disc: disc.clone(),
                }
            }
            LeadValue::InfQuad { re, im, lc } => {
                let n = &(re * re) - &(&(im * im) * lc);
                let ninv = n.inv()?;
                LeadValue::InfQuad {
                    re: re * &ninv,
                    im: &(-im) * &ninv,
                    lc: lc.clone(),
                }
            }
        })
    }

    pub fn pow_i64(&self, e: i64) -> Result<LeadValue> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = match self {
            LeadValue::Base(v) => LeadValue::Base(v.field().one()),
            LeadValue::Ring(r) => LeadValue::Ring(r.ring().one()),
            LeadValue::Quad { re, disc, .. } => LeadValue::Quad {
                re: re.ring().one(),
                im: re.ring().zero(),
                disc: disc.clone(),
            },
            LeadValue::InfQuad { re, lc, .. } => LeadValue::InfQuad {
                re: re.field().one(),
                im: re.field().zero(),
                lc: lc.clone(),
            },
        };
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

    /// Multiply by a scalar of the working field.
    pub fn scale(&self, s: &Elem) -> LeadValue {
        match self {
            LeadValue::Base(e) => LeadValue::Base(e * s),
            LeadValue::Ring(r) => {
                let sc = r.ring().from_base(s);
                LeadValue::Ring(r.mul(&sc))
            }
            LeadValue::Quad { re, im, disc } => {
                let sc = re.ring().from_base(s);
                LeadValue::Quad {
                    re: re.mul(&sc),
                    im: im.mul(&sc),
                    disc: disc.clone(),
                }
            }
            LeadValue::InfQuad { re, im, lc } => LeadValue::InfQuad {
                re: re * s,
                im: im * s,
                lc: lc.clone(),
            },
        }
    }

    /// Norm down to the working field.
    pub fn norm_to_base(&self) -> Elem {
        match self {
            LeadValue::Base(e) => e.clone(),
            LeadValue::Ring(r) => r.norm(),
            LeadValue::Quad { re, im, disc } => {
                // norm through the quadratic layer, then down from K[T]/u
                re.mul(re).sub(&im.mul(im).mul(disc)).norm()
            }
            LeadValue::InfQuad { re, im, lc } => &(re * re) - &(&(im * im) * lc),
        }
    }

    /// If the residue field is the working field, the value itself.
    pub fn as_base(&self) -> Option<Elem> {
        match self {
            LeadValue::Base(e) => Some(e.clone()),
            LeadValue::Ring(r) => r.ring().as_base_value(r),
            _ => None,
        }
    }
}

/// Order and leading coefficient of a function at a place.
#[derive(Clone, Debug)]
pub struct LocalData {
    pub ord: i64,
    pub lead: LeadValue,
}

/// Compute order and leading coefficient of `h` at `place`.
pub fn local_data(ctx: &Arc<CurveCtx>, h: &CurveFn, place: &Place) -> Result<LocalData> {
    if h.is_zero() {
        return Err(Error::ZeroFunction);
    }
    match place {
        Place::Finite { u, kind } => match kind {
            FiniteKind::Regular { v } => finite_regular(ctx, h, u, v),
            FiniteKind::InertQuad => finite_inert(ctx, h, u),
            FiniteKind::Ramified => finite_ramified(ctx, h, u),
        },
        Place::Infinite(InfKind::Plus) => inf_split(ctx, h, true),
        Place::Infinite(InfKind::Minus) => inf_split(ctx, h, false),
        Place::Infinite(InfKind::Inert) => inf_inert(ctx, h),
    }
}

/// Order of `h` at `place` (without the leading coefficient).
pub fn ord_at(ctx: &Arc<CurveCtx>, h: &CurveFn, place: &Place) -> Result<i64> {
    Ok(local_data(ctx, h, place)?.ord)
}

/// Value of `h` at `place` when `h` is regular and nonzero there.
pub fn value_at(ctx: &Arc<CurveCtx>, h: &CurveFn, place: &Place) -> Result<LeadValue> {
    let d = local_data(ctx, h, place)?;
    if d.ord != 0 {
        return Err(Error::SupportCollision(format!(
            "function has order {} at evaluation place",
            d.ord
        )));
    }
    Ok(d.lead)
}

/// Strip `u`-powers: `(val, reduced)` with `p = u^val * reduced`; the zero
/// polynomial reports valuation `i64::MAX`.
fn val_and_cofactor(p: &Poly, u: &Poly) -> (i64, Poly) {
    if p.is_zero() {
        return (i64::MAX, p.clone());
    }
    let mut v = 0i64;
    let mut cur = p.clone();
    loop {
        let (q, r) = cur.divrem(u).expect("nonzero modulus");
        if !r.is_zero() {
            return (v, cur);
        }
        v += 1;
        cur = q;
    }
}

fn finite_regular(ctx: &Arc<CurveCtx>, h: &CurveFn, u: &Poly, v: &Poly) -> Result<LocalData> {
    let (a, b, c) = h.parts();
    let ring = ResidueRing::new(u)?;
    let (vc, ct) = val_and_cofactor(c, u);
    let lead_c = ring.reduce(&ct);
    let (va, at) = val_and_cofactor(a, u);
    let (vb, bt) = val_and_cofactor(b, u);
    let mu = va.min(vb);
    debug_assert!(mu < i64::MAX, "nonzero numerator");
    // strip u^mu from both parts
    let atil = if a.is_zero() {
        Poly::zero(ctx.field())
    } else {
        let extra = va - mu;
        &at * &u.pow(extra as u64)
    };
    let btil = if b.is_zero() {
        Poly::zero(ctx.field())
    } else {
        let extra = vb - mu;
        &bt * &u.pow(extra as u64)
    };
    let vbar = ring.reduce(v);
    let t = ring.reduce(&atil).add(&ring.reduce(&btil).mul(&vbar));
    let (ord_num, lead_num) = if !t.is_zero() {
        (mu, t)
    } else {
        // cancellation on this branch: go through the numerator norm
        let n = h.numerator_norm(); // = (a+bz)(a-bz) * c^... no: a^2-b^2 f
        let (sigma, ntil) = val_and_cofactor(&n, u);
        debug_assert!(sigma > 2 * mu, "cancellation implies extra norm valuation");
        let anti = ring.reduce(&atil).sub(&ring.reduce(&btil).mul(&vbar));
        debug_assert!(!anti.is_zero(), "conjugate branch cannot also cancel");
        (sigma - mu, ring.reduce(&ntil).mul(&anti.inv()?))
    };
    let ord = ord_num - vc;
    let lead = lead_num.mul(&lead_c.inv()?);
    Ok(LocalData {
        ord,
        lead: reduce_ring_value(&ring, lead),
    })
}

fn finite_inert(ctx: &Arc<CurveCtx>, h: &CurveFn, u: &Poly) -> Result<LocalData> {
    let (a, b, c) = h.parts();
    let ring = ResidueRing::new(u)?;
    let disc = ring.reduce(&ctx.f_poly().rem(u)?);
    let (vc, ct) = val_and_cofactor(c, u);
    let (va, at) = val_and_cofactor(a, u);
    let (vb, bt) = val_and_cofactor(b, u);
    let mu = va.min(vb);
    let re = if a.is_zero() || va > mu {
        ring.zero()
    } else {
        ring.reduce(&at)
    };
    let im = if b.is_zero() || vb > mu {
        ring.zero()
    } else {
        ring.reduce(&bt)
    };
    // the residue extension is genuinely quadratic, so re + im*zbar != 0
    let lead_c_inv = ring.reduce(&ct).inv()?;
    Ok(LocalData {
        ord: mu - vc,
        lead: LeadValue::Quad {
            re: re.mul(&lead_c_inv),
            im: im.mul(&lead_c_inv),
            disc,
        },
    })
}

fn finite_ramified(ctx: &Arc<CurveCtx>, h: &CurveFn, u: &Poly) -> Result<LocalData> {
    let (a, b, c) = h.parts();
    let ring = ResidueRing::new(u)?;
    let f1 = ctx.f_poly().div_exact(u)?; // f = u * f1, f1 a unit at the place
    let f1bar = ring.reduce(&f1);
    let (vc, ct) = val_and_cofactor(c, u);
    let (va, at) = val_and_cofactor(a, u);
    let (vb, bt) = val_and_cofactor(b, u);
    let ord_a = va.checked_mul(2).unwrap_or(i64::MAX); // 2*va, inf-safe
    let ord_b = if vb == i64::MAX { i64::MAX } else { 2 * vb + 1 };
    let (ord_num, lead_num) = if ord_a < ord_b {
        (
            ord_a,
            ring.reduce(&at).mul(&f1bar.pow_i64(-va)?),
        )
    } else {
        debug_assert_ne!(ord_a, ord_b, "parities differ");
        (
            ord_b,
            ring.reduce(&bt).mul(&f1bar.pow_i64(-vb)?),
        )
    };
    // denominator: ord(c) = 2 vc, lead = ct * f1^{-vc} at the place
    let lead_c = ring.reduce(&ct).mul(&f1bar.pow_i64(-vc)?);
    Ok(LocalData {
        ord: ord_num - 2 * vc,
        lead: reduce_ring_value(&ring, lead_num.mul(&lead_c.inv()?)),
    })
}

/// Collapse a degree-1 residue ring value to the working field.
fn reduce_ring_value(ring: &Arc<ResidueRing>, v: RElem) -> LeadValue {
    match ring.as_base_value(&v) {
        Some(e) => LeadValue::Base(e),
        None => LeadValue::Ring(v),
    }
}

// ---------------------------------------------------------------------------
// Expansions at infinity
// ---------------------------------------------------------------------------

/// Truncated Laurent series `s^shift * (c[0] + c[1] s + ...)` in the local
/// parameter `s = 1/x`.
#[derive(Clone, Debug)]
struct Laurent {
    shift: i64,
    c: Vec<Elem>,
}

impl Laurent {
    fn first_nonzero(&self) -> Option<(i64, Elem)> {
        self.c
            .iter()
            .position(|e| !e.is_zero())
            .map(|i| (self.shift + i as i64, self.c[i].clone()))
    }

    fn coeff_at(&self, idx: i64) -> Option<Elem> {
        let off = idx - self.shift;
        if off < 0 {
            return None;
        }
        self.c.get(off as usize).cloned()
    }

    fn add(&self, other: &Laurent) -> Laurent {
        let shift = self.shift.min(other.shift);
        let end = (self.shift + self.c.len() as i64).min(other.shift + other.c.len() as i64);
        let len = (end - shift).max(0) as usize;
        let f = self.c.first().or(other.c.first()).expect("nonempty");
        let zero = f.field().zero();
        let mut c = Vec::with_capacity(len);
        for i in 0..len {
            let idx = shift + i as i64;
            let x = self.coeff_at(idx).unwrap_or_else(|| zero.clone());
            let y = other.coeff_at(idx).unwrap_or_else(|| zero.clone());
            c.push(&x + &y);
        }
        Laurent { shift, c }
    }

    fn mul(&self, other: &Laurent) -> Laurent {
        let len = self.c.len().min(other.c.len());
        let zero = self.c.first().expect("nonempty").field().zero();
        let mut c = vec![zero; len];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() || i >= len {
                continue;
            }
            for (j, y) in other.c.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                c[i + j] = &c[i + j] + &(x * y);
            }
        }
        Laurent {
            shift: self.shift + other.shift,
            c,
        }
    }

    fn scale(&self, s: &Elem) -> Laurent {
        Laurent {
            shift: self.shift,
            c: self.c.iter().map(|e| e * s).collect(),
        }
    }
}

/// The expansion of a polynomial `a(x)` in `s = 1/x` to `prec` terms:
/// `a = s^(-deg a) (lc + ... )`.
fn poly_to_laurent(a: &Poly, prec: usize) -> Laurent {
    let da = a.degree().expect("nonzero polynomial");
    let zero = a.field().zero();
    let mut c = Vec::with_capacity(prec);
    for i in 0..prec {
        if i <= da {
            c.push(a.coeff(da - i));
        } else {
            c.push(zero.clone());
        }
    }
    Laurent {
        shift: -(da as i64),
        c,
    }
}

/// Power-series square root with unit constant term: given `q` with
/// `q[0] = 1`, the series `t` with `t^2 = q`, `t[0] = 1`, coefficient by
/// coefficient.
fn series_sqrt_one(q: &[Elem]) -> Vec<Elem> {
    let f = q[0].field().clone();
    debug_assert!(q[0].is_one());
    let half = f.from_u64(2).inv().expect("odd characteristic");
    let mut t: Vec<Elem> = Vec::with_capacity(q.len());
    t.push(f.one());
    for j in 1..q.len() {
        // q_j = sum_{i=0..j} t_i t_{j-i} => t_j = (q_j - sum_{0<i<j} t_i t_{j-i}) / 2
        let mut s = q[j].clone();
        for i in 1..j {
            s = &s - &(&t[i] * &t[j - i]);
        }
        t.push(&s * &half);
    }
    t
}

/// The series `T(s)` with `z = sqrt(lc) * x^(g+1) * T(s)` on the plus
/// branch, to `prec` terms: `T = sqrt(f(1/s) s^(2g+2) / lc)`, `T(0) = 1`.
pub(crate) fn branch_series(ctx: &Arc<CurveCtx>, prec: usize) -> Vec<Elem> {
    let f = ctx.f_poly();
    let dg = f.degree().expect("nonzero");
    let lcinv = f.leading().inv().expect("nonzero lc");
    let mut q = Vec::with_capacity(prec);
    for i in 0..prec {
        if i <= dg {
            q.push(&f.coeff(dg - i) * &lcinv);
        } else {
            q.push(ctx.field().zero());
        }
    }
    series_sqrt_one(&q)
}

fn inf_split(ctx: &Arc<CurveCtx>, h: &CurveFn, plus: bool) -> Result<LocalData> {
    let (a, b, c) = h.parts();
    let g1 = ctx.genus() as i64 + 1;
    let slc = ctx
        .sqrt_lc()
        .ok_or_else(|| Error::ContextMismatch("split infinity needs square lc".into()))?;
    let sgn_lc = if plus { slc } else { -&slc };
    let da = a.deg_i().max(0);
    let db = b.deg_i().max(0);
    let dn = h.numerator_norm().deg_i().max(0);
    let m = da.max(db + g1);
    // first nonzero numerator coefficient sits within
    // ord_num <= -dn + m, series starts at -m: scan window <= 2m - dn + 1
    let prec = ((2 * m - dn).max(0) + 4) as usize;
    let num = if b.is_zero() {
        poly_to_laurent(a, prec)
    } else {
        let t = branch_series(ctx, prec);
        let zser = Laurent {
            shift: -g1,
            c: t,
        }
        .scale(&sgn_lc);
        let bz = poly_to_laurent(b, prec).mul(&zser);
        if a.is_zero() {
            bz
        } else {
            poly_to_laurent(a, prec).add(&bz)
        }
    };
    let (ord_num, lead_num) = num
        .first_nonzero()
        .expect("precision bound guarantees a nonzero coefficient");
    let dc = c.deg_i();
    let ord = ord_num + dc; // ord(c) = -dc, lead lc(c)
    let lead = &lead_num * &c.leading().inv()?;
    Ok(LocalData {
        ord,
        lead: LeadValue::Base(lead),
    })
}

fn inf_inert(ctx: &Arc<CurveCtx>, h: &CurveFn) -> Result<LocalData> {
    let (a, b, c) = h.parts();
    let lc = ctx.f_poly().leading();
    debug_assert!(
        ctx.sqrt_lc().is_none(),
        "inert infinity only when lc is a non-square"
    );
    let g1 = ctx.genus() as i64 + 1;
    let k = ctx.field();
    // components never cancel: ord = min over the two component orders
    let ord_a = if a.is_zero() { i64::MAX } else { -a.deg_i() };
    let ord_b = if b.is_zero() {
        i64::MAX
    } else {
        -(b.deg_i() + g1)
    };
    let ord_num = ord_a.min(ord_b);
    let re = if ord_a == ord_num {
        a.leading()
    } else {
        k.zero()
    };
    let im = if ord_b == ord_num {
        b.leading()
    } else {
        k.zero()
    };
    let dc = c.deg_i();
    let lcc_inv = c.leading().inv()?;
    Ok(LocalData {
        ord: ord_num + dc,
        lead: LeadValue::InfQuad {
            re: &re * &lcc_inv,
            im: &im * &lcc_inv,
            lc,
        },
    })
}

/// The tame symbol of two nonzero functions at a place, pushed down to the
/// working field by the residue norm:
/// `Norm( (-1)^(v1 v2) * lead(h1)^(v2) / lead(h2)^(v1) )`.
pub fn tame_symbol_norm(
    ctx: &Arc<CurveCtx>,
    h1: &CurveFn,
    h2: &CurveFn,
    place: &Place,
) -> Result<Elem> {
    let d1 = local_data(ctx, h1, place)?;
    let d2 = local_data(ctx, h2, place)?;
    let t = d1
        .lead
        .pow_i64(d2.ord)?
        .mul(&d2.lead.pow_i64(-d1.ord)?);
    let mut n = t.norm_to_base();
    // sign (-1)^(v1 v2), then norm multiplies the sign deg(place) times;
    // fold it in before the norm instead: scale by the sign and renorm is
    // wasteful, so apply sign^deg directly on the normed value.
    if (d1.ord * d2.ord) % 2 != 0 && place.degree() % 2 != 0 {
        n = -&n;
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::ff::FiniteField;

    /// z^2 = x^4 + 1 over F_5, genus 1, lc = 1 (split infinity).
    fn ctx5() -> Arc<CurveCtx> {
        let curve = Curve::new(5, &[1, 0, 0, 0, 1]).unwrap();
        let k = FiniteField::prime(5).unwrap();
        CurveCtx::new(&curve, &k).unwrap()
    }

    #[test]
    fn order_of_x_at_infinity() {
        let c = ctx5();
        let x = CurveFn::x(&c);
        for pl in c.infinite_places() {
            let d = local_data(&c, &x, &pl).unwrap();
            assert_eq!(d.ord, -1);
        }
    }

    #[test]
    fn order_of_z_at_infinity_and_branch_signs() {
        let c = ctx5();
        let z = CurveFn::z(&c);
        let dp = local_data(&c, &z, &Place::Infinite(InfKind::Plus)).unwrap();
        let dm = local_data(&c, &z, &Place::Infinite(InfKind::Minus)).unwrap();
        assert_eq!(dp.ord, -2); // g+1 = 2
        assert_eq!(dm.ord, -2);
        // leads are the two square roots of lc = 1, i.e. 1 and -1 = 4
        let lp = dp.lead.as_base().unwrap();
        let lm = dm.lead.as_base().unwrap();
        assert_eq!(&lp * &lp, c.field().one());
        assert_eq!(lm, -&lp);
    }

    #[test]
    fn orders_at_a_split_fiber() {
        let c = ctx5();
        // x = 0: f(0) = 1 = 1^2: two regular places with v = 1, 4
        let places = c.places_above_x(&c.field().from_u64(0)).unwrap();
        assert_eq!(places.len(), 2);
        // function x vanishes to order 1 at each
        let x = CurveFn::x(&c);
        for pl in &places {
            assert_eq!(local_data(&c, &x, pl).unwrap().ord, 1);
        }
        // function z - 1 vanishes at the branch with v = 1 only
        let zm1 = CurveFn::z(&c).sub(&CurveFn::one(&c));
        let mut ords: Vec<i64> = places
            .iter()
            .map(|pl| local_data(&c, &zm1, pl).unwrap().ord)
            .collect();
        ords.sort();
        assert_eq!(ords[0], 0);
        assert!(ords[1] >= 1);
    }

    #[test]
    fn ramified_place_orders() {
        // z^2 = x (x^3 + x + 1)... need even degree: use f = x(x^3+x+3) = x^4+x^2+3x? degree 4 with root 0:
        // f = x^4 + x^2 + 3x = x(x^3 + x + 3) over F_5; check squarefree in the constructor.
        let curve = Curve::new(5, &[0, 3, 1, 0, 1]).unwrap();
        let k = FiniteField::prime(5).unwrap();
        let c = CurveCtx::new(&curve, &k).unwrap();
        let u = Poly::x(&k); // x - 0 divides f
        let pl = Place::finite(u, FiniteKind::Ramified);
        let x = CurveFn::x(&c);
        let z = CurveFn::z(&c);
        assert_eq!(local_data(&c, &x, &pl).unwrap().ord, 2);
        assert_eq!(local_data(&c, &z, &pl).unwrap().ord, 1);
        // lead of x w.r.t. uniformizer z: x = z^2 / f1, f1(0) = 3
        let lead = local_data(&c, &x, &pl).unwrap().lead.as_base().unwrap();
        assert_eq!(lead, k.from_u64(3).inv().unwrap());
    }

    #[test]
    fn divisor_degree_is_zero_for_functions() {
        let c = ctx5();
        let z = CurveFn::z(&c);
        let x = CurveFn::x(&c);
        let h = z
            .add(&x.mul(&x))
            .mul(&x.sub(&CurveFn::constant(&c, c.field().from_u64(2))).inv().unwrap());
        let d = c.divisor_of(&h).unwrap();
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn inert_infinity_orders() {
        // lc = 2, a non-square mod 5: inert infinity
        let curve = Curve::new(5, &[2, 1, 0, 0, 2]).unwrap();
        let k = FiniteField::prime(5).unwrap();
        let c = CurveCtx::new(&curve, &k).unwrap();
        assert!(c.sqrt_lc().is_none());
        let pl = Place::Infinite(InfKind::Inert);
        let x = CurveFn::x(&c);
        let z = CurveFn::z(&c);
        assert_eq!(local_data(&c, &x, &pl).unwrap().ord, -1);
        assert_eq!(local_data(&c, &z, &pl).unwrap().ord, -2);
        // x + z: orders -1 vs -2: min is -2, im component leads
        let s = x.add(&z);
        let d = local_data(&c, &s, &pl).unwrap();
        assert_eq!(d.ord, -2);
        match d.lead {
            LeadValue::InfQuad { ref re, ref im, .. } => {
                assert!(re.is_zero());
                assert!(im.is_one());
            }
            _ => panic!("wrong residue shape"),
        }
        // degree of div(x + z): zero
        let dd = c.divisor_of(&s).unwrap();
        assert_eq!(dd.degree(), 0);
    }
}
