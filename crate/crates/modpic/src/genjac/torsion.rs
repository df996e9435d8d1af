//! Torsion packs of the modulus class group and its component quotient.
//!
//! Rationally, the `n`-torsion of the coordinate-augmented group is
//! enumerated fiberwise: over every `n`-divisible divisor class, the
//! admissible coordinates are the solutions of an `n`-th-power congruence
//! at the modulus. The same machinery runs over controlled extensions of
//! the base field, where every modulus place splits and the full torsion
//! packs reach their geometric sizes; the extension degree escalates
//! through multiples of a computed starting degree until every pack is
//! complete, and every completed pack is checked against its predicted
//! order.

use crate::curve::func::CurveFn;
use crate::curve::local::LeadValue;
use crate::curve::modulus::{ModValue, Modulus};
use crate::curve::point::{Divisor, Place};
use crate::curve::lift_divisor;
use crate::ff::poly::Poly;
use crate::ff::Elem;
use crate::piccalc::quot::{AuxModulus, ModQuotient, QuotElem};
use crate::piccalc::twotors::{divide_by_prime_in, extended_jacobian, prime_torsion_in};
use crate::piccalc::{Jacobian, PicElem};
use crate::{Error, Result};

use super::{residue_values, value_key, GenJacCtx, GenJacElem};

// ----- exact-value interpolation at the modulus -----

/// A function with the prescribed exact value at the modulus: the result
/// `u` satisfies `modulus.evaluate(u) == v` componentwise (not merely up
/// to a scalar). Shape `c(x) + d(x) z` at affine moduli and
/// `c + d z/x^(g+1)` at the fiber over infinity, with the coefficients
/// solved fiber by fiber and interpolated.
pub fn interpolate_modulus_value(gj: &GenJacCtx, v: &ModValue) -> Result<CurveFn> {
    let ctx = gj.jacobian().ctx().clone();
    let modl = gj.modulus();
    let u = if modl.is_at_infinity() {
        let g1 = (ctx.genus() + 1) as i64;
        let zx = CurveFn::z(&ctx).div(&CurveFn::x(&ctx).pow_i64(g1)?)?;
        let zv = modl.evaluate(&zx)?;
        let (c, d) = solve_fiber_pair(&collect_fiber(&zv, None)?, &collect_fiber(v, None)?)?;
        CurveFn::constant(&ctx, c).add(&zx.scale(&d))
    } else {
        let zf = CurveFn::z(&ctx);
        let zv = modl.evaluate(&zf)?;
        let mut pts_c: Vec<(Elem, Elem)> = Vec::new();
        let mut pts_d: Vec<(Elem, Elem)> = Vec::new();
        for &a in modl.x_coords() {
            let x0 = ctx.field().from_u64(a);
            let (c, d) = solve_fiber_pair(
                &collect_fiber(&zv, Some(&x0))?,
                &collect_fiber(v, Some(&x0))?,
            )?;
            pts_c.push((x0.clone(), c));
            pts_d.push((x0, d));
        }
        CurveFn::new(
            &ctx,
            Poly::interpolate(&pts_c)?,
            Poly::interpolate(&pts_d)?,
            Poly::one(ctx.field()),
        )?
    };
    let check = modl.evaluate(&u)?;
    if check != *v {
        return Err(Error::ContextMismatch(
            "interpolated function misses the prescribed modulus value".into(),
        ));
    }
    Ok(u)
}

/// The components of a value on one fiber (over `x0`, or over infinity
/// when `x0` is `None`), in place order.
fn collect_fiber(v: &ModValue, x0: Option<&Elem>) -> Result<Vec<LeadValue>> {
    let mut out = Vec::new();
    for (pl, lead) in v.components() {
        let on_fiber = match (pl, x0) {
            (Place::Finite { u, .. }, Some(a)) => u.eval(a).is_zero(),
            (Place::Finite { .. }, None) => false,
            (Place::Infinite(_), Some(_)) => false,
            (Place::Infinite(_), None) => true,
        };
        if on_fiber {
            out.push(lead.clone());
        }
    }
    if out.is_empty() {
        return Err(Error::ContextMismatch("fiber not in the modulus".into()));
    }
    Ok(out)
}

/// Solve `c + d * z = v` on one complete fiber for scalars `c, d` of the
/// working field, where `z` denotes the coordinate values and `v` the
/// target values.
fn solve_fiber_pair(zvals: &[LeadValue], vvals: &[LeadValue]) -> Result<(Elem, Elem)> {
    match (zvals, vvals) {
        // split fiber: two places with working-field values
        ([z1, z2], [v1, v2]) => {
            let (z1, z2) = (force_base(z1)?, force_base(z2)?);
            let (v1, v2) = (force_base(v1)?, force_base(v2)?);
            let dz = &z1 - &z2;
            if dz.is_zero() {
                return Err(Error::ContextMismatch(
                    "coincident coordinate values on a fiber".into(),
                ));
            }
            let d = &(&v1 - &v2) * &dz.inv()?;
            let c = &v1 - &(&d * &z1);
            Ok((c, d))
        }
        // inert fiber: one place, quadratic residue field
        ([z], [v]) => match (z, v) {
            (
                LeadValue::Quad { re: rz, im: iz, .. },
                LeadValue::Quad { re: rv, im: iv, .. },
            ) => {
                let d = iv.mul(&iz.inv()?);
                let c = rv.sub(&d.mul(rz));
                let ring = c.ring().clone();
                let cb = ring.as_base_value(&c).ok_or_else(|| {
                    Error::ContextMismatch("fiber constant not in the working field".into())
                })?;
                let db = ring.as_base_value(&d).ok_or_else(|| {
                    Error::ContextMismatch("fiber slope not in the working field".into())
                })?;
                Ok((cb, db))
            }
            (
                LeadValue::InfQuad { re: rz, im: iz, .. },
                LeadValue::InfQuad { re: rv, im: iv, .. },
            ) => {
                let d = iv * &iz.inv()?;
                let c = rv - &(&d * rz);
                Ok((c, d))
            }
            _ => Err(Error::ContextMismatch(
                "mismatched residue shapes on a fiber".into(),
            )),
        },
        _ => Err(Error::ContextMismatch(
            "unexpected fiber place count".into(),
        )),
    }
}

fn force_base(l: &LeadValue) -> Result<Elem> {
    l.as_base().ok_or_else(|| {
        Error::ContextMismatch("expected a working-field residue value".into())
    })
}

// ----- coordinate congruence solving -----

/// All canonical coordinates `t` (modulo diagonal scalars) with
/// `t^n = target` modulo diagonal scalars. Over contexts where every
/// modulus place is rational this gauges the first component to 1 and
/// extracts `n`-th roots componentwise; otherwise a small-field diagonal
/// scan is used.
pub fn solve_coordinate(gj: &GenJacCtx, target: &ModValue) -> Result<Vec<ModValue>> {
    let n = gj.level();
    let comps = target.components();
    let places: Vec<Place> = comps.keys().cloned().collect();
    let all_rational = places.iter().all(|p| p.degree() == 1);
    let mut out: Vec<ModValue> = Vec::new();
    if all_rational && places.len() >= 2 {
        // gauge: scale solutions so the first component is exactly 1;
        // then the diagonal scalar is determined and each remaining
        // component must be an n-th root of target_i / target_0.
        if !is_prime_u64(n) {
            return Err(Error::ContextMismatch(
                "coordinate solving requires a prime level".into(),
            ));
        }
        let e0 = force_base(comps.get(&places[0]).expect("present"))?;
        let k = e0.field().clone();
        let mu = gj.mu_n().to_vec();
        let mut tuples: Vec<Vec<(Place, LeadValue)>> =
            vec![vec![(places[0].clone(), LeadValue::Base(k.one()))]];
        for pl in places.iter().skip(1) {
            let ei = force_base(comps.get(pl).expect("present"))?;
            let ratio = &ei * &e0.inv()?;
            let root = match ratio.rth_root(n) {
                Some(r) => r,
                None => return Ok(Vec::new()),
            };
            let mut next = Vec::with_capacity(tuples.len() * mu.len());
            for t in &tuples {
                for zeta in &mu {
                    let mut row = t.clone();
                    row.push((pl.clone(), LeadValue::Base(&root * zeta)));
                    next.push(row);
                }
            }
            tuples = next;
        }
        for row in tuples {
            let v = ModValue::from_components(row.into_iter().collect());
            debug_assert!(v
                .pow_i64(n as i64)?
                .mul(&target.inv()?)
                .as_diagonal()
                .is_some());
            out.push(gj.canon_coord(&v));
        }
    } else {
        // diagonal scan: solutions of t^n = lambda * target over all
        // scalars lambda of the (small) working field
        let k = gj.jacobian().ctx().field();
        let span = k
            .order_u64()
            .ok_or_else(|| Error::BudgetExceeded("field too large for coordinate scan".into()))?;
        let sample = gj.modulus().one_value();
        for li in 1..span {
            let lambda = k.elem_from_index(li);
            let mut tuples: Vec<Vec<(Place, LeadValue)>> = vec![Vec::new()];
            for pl in &places {
                let goal = comps.get(pl).expect("present").scale(&lambda);
                let roots = component_roots_of(&sample, pl, &goal, n)?;
                if roots.is_empty() {
                    tuples.clear();
                    break;
                }
                let mut next = Vec::with_capacity(tuples.len() * roots.len());
                for t in &tuples {
                    for r in &roots {
                        let mut row = t.clone();
                        row.push((pl.clone(), r.clone()));
                        next.push(row);
                    }
                }
                tuples = next;
            }
            for row in tuples {
                let v = gj.canon_coord(&ModValue::from_components(row.into_iter().collect()));
                out.push(v);
            }
        }
    }
    out.sort_by_key(value_key);
    out.dedup_by_key(|v| value_key(v));
    Ok(out)
}

/// All residue values at `pl` whose `n`-th power equals `target` exactly,
/// found by scanning the (small) residue field.
fn component_roots_of(
    sample: &ModValue,
    pl: &Place,
    target: &LeadValue,
    n: u64,
) -> Result<Vec<LeadValue>> {
    let mut out = Vec::new();
    for v in residue_values(sample, pl)? {
        if v.is_zero() {
            continue;
        }
        if v.pow_i64(n as i64)? == *target {
            out.push(v);
        }
    }
    Ok(out)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ----- torsion fibers -----

/// All elements `(cls, t)` with `n * (cls, t) = target`, for a fixed
/// divisor class `cls` already known to satisfy `n * cls = target.cls`.
pub fn fiber_over(
    gj: &GenJacCtx,
    cls: &PicElem,
    target: &GenJacElem,
) -> Result<Vec<GenJacElem>> {
    let n = gj.level() as i64;
    let base = gj.smul(
        n,
        &GenJacElem {
            cls: cls.clone(),
            t: gj.modulus().one_value(),
        },
    )?;
    debug_assert!(base.cls == target.cls, "class is not a division candidate");
    // n * (cls, t) has coordinate t^n * w with w the accumulated witness
    // value; the requirement is t^n * w = target.t modulo diagonals.
    let want = target.t.mul(&base.t.inv()?);
    Ok(solve_coordinate(gj, &want)?
        .into_iter()
        .map(|t| GenJacElem {
            cls: cls.clone(),
            t,
        })
        .collect())
}

/// Union of torsion fibers over every candidate class whose `n`-multiple
/// is the target class.
pub fn division_fibers(
    gj: &GenJacCtx,
    target: &GenJacElem,
    candidates: &[PicElem],
) -> Result<Vec<GenJacElem>> {
    let n = gj.level() as i64;
    let mut out = Vec::new();
    for c in candidates {
        if gj.jacobian().smul(n, c)? == target.cls {
            out.extend(fiber_over(gj, c, target)?);
        }
    }
    sort_elems(&mut out);
    Ok(out)
}

/// The rational `n`-torsion of the coordinate-augmented group, enumerated
/// fiberwise over the rational `n`-torsion of the divisor-class group.
pub fn jm_torsion(gj: &GenJacCtx, budget: usize) -> Result<Vec<GenJacElem>> {
    let classes = gj.jacobian().torsion(gj.level(), budget)?;
    let mut out = Vec::new();
    for cls in &classes {
        out.extend(fiber_over(gj, cls, &gj.zero())?);
    }
    sort_elems(&mut out);
    Ok(out)
}

fn sort_elems(v: &mut [GenJacElem]) {
    v.sort_by(|a, b| {
        a.cls
            .cmp(&b.cls)
            .then_with(|| value_key(&a.t).cmp(&value_key(&b.t)))
    });
}

// ----- the component quotient of the coordinate-augmented group -----

/// The quotient of the coordinate-augmented group's degree extension by
/// the auxiliary class: elements are pairs (coordinate-augmented class,
/// component index mod the modulus degree), folded by the degree-0 part
/// of the auxiliary class. With `reduced` set, classes are additionally
/// coarsened through the coordinate quotient map.
pub struct GenQuot {
    gj: GenJacCtx,
    t: GenJacElem,
    m: i64,
    reduced: bool,
}

/// An element of [`GenQuot`]: the canonical class plus its component.
pub type GenQuotElem = (GenJacElem, i64);

impl GenQuot {
    /// `aux_divisor` must be effective of degree equal to the modulus
    /// degree, disjoint from the modulus and the base place.
    pub fn new(gj: &GenJacCtx, aux_divisor: &Divisor, reduced: bool) -> Result<GenQuot> {
        let m = gj.modulus().degree() as i64;
        if aux_divisor.degree() != m {
            return Err(Error::DegreeMismatch(format!(
                "auxiliary divisor has degree {}, modulus {m}",
                aux_divisor.degree()
            )));
        }
        let mut d0 = aux_divisor.clone();
        d0.add_place(gj.jacobian().base().clone(), -m);
        let mut t = gj.from_divisor(&d0)?;
        if reduced {
            t = gj.psi(&t);
        }
        Ok(GenQuot {
            gj: gj.clone(),
            t,
            m,
            reduced,
        })
    }

    pub fn ctx(&self) -> &GenJacCtx {
        &self.gj
    }

    /// Degree-0 part of the auxiliary class in the coordinate-augmented
    /// group (coarsened when this quotient is reduced).
    pub fn t_elem(&self) -> &GenJacElem {
        &self.t
    }

    pub fn components(&self) -> i64 {
        self.m
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    fn norm_elem(&self, x: GenJacElem) -> GenJacElem {
        if self.reduced {
            self.gj.psi(&x)
        } else {
            x
        }
    }

    /// Canonical pair for a class placed in component `degree`.
    pub fn from_parts(&self, x: &GenJacElem, degree: i64) -> Result<GenQuotElem> {
        let shift = degree.div_euclid(self.m);
        let comp = degree.rem_euclid(self.m);
        let x = if shift == 0 {
            x.clone()
        } else {
            self.gj.add(x, &self.gj.smul(-shift, &self.t)?)?
        };
        Ok((self.norm_elem(x), comp))
    }

    pub fn zero(&self) -> GenQuotElem {
        (self.norm_elem(self.gj.zero()), 0)
    }

    pub fn add(&self, a: &GenQuotElem, b: &GenQuotElem) -> Result<GenQuotElem> {
        let x = self.gj.add(&a.0, &b.0)?;
        self.from_parts(&x, a.1 + b.1)
    }

    pub fn neg(&self, a: &GenQuotElem) -> Result<GenQuotElem> {
        let x = self.gj.neg(&a.0)?;
        self.from_parts(&x, -a.1)
    }

    pub fn smul(&self, k: i64, a: &GenQuotElem) -> Result<GenQuotElem> {
        let x = self.gj.smul(k, &a.0)?;
        self.from_parts(&x, k * a.1)
    }

    /// The auxiliary divisor is rational over the prime field, so the
    /// Galois action fixes the folding class and acts componentwise.
    pub fn frobenius(&self, a: &GenQuotElem) -> Result<GenQuotElem> {
        Ok((self.norm_elem(self.gj.frobenius(&a.0)?), a.1))
    }

    pub fn equal(&self, a: &GenQuotElem, b: &GenQuotElem) -> bool {
        if a.1 != b.1 {
            return false;
        }
        if self.reduced {
            self.gj.equal_reduced(&a.0, &b.0)
        } else {
            self.gj.equal(&a.0, &b.0)
        }
    }

    /// Rational `n`-torsion of the quotient, by full enumeration of the
    /// rational divisor classes. Components of torsion elements run over
    /// the multiples of `m / n`.
    pub fn torsion(&self, budget: usize) -> Result<Vec<GenQuotElem>> {
        let n = self.gj.level() as i64;
        if self.m % n != 0 {
            return Err(Error::ContextMismatch(format!(
                "modulus degree {} not divisible by level {n}",
                self.m
            )));
        }
        let ell = self.m / n;
        let classes = self.gj.jacobian().enumerate(budget)?;
        let mut out = Vec::new();
        for j in 0..n {
            let target = self.gj.smul(j, &self.t)?;
            for sol in division_fibers(&self.gj, &target, &classes)? {
                out.push((self.norm_elem(sol), j * ell));
            }
        }
        dedup_quot(&mut out);
        Ok(out)
    }
}

/// The forward isogeny on quotient elements: multiply the class through
/// the coordinate-power map and the component by `n`. Source is the
/// reduced quotient, destination the unreduced one over the same context.
pub fn quot_phi(src: &GenQuot, dst: &GenQuot, a: &GenQuotElem) -> Result<GenQuotElem> {
    let n = src.gj.level() as i64;
    let x = src.gj.phi(&a.0)?;
    dst.from_parts(&x, n * a.1)
}

fn dedup_quot(v: &mut Vec<GenQuotElem>) {
    v.sort_by(|a, b| {
        a.1.cmp(&b.1)
            .then_with(|| a.0.cls.cmp(&b.0.cls))
            .then_with(|| value_key(&a.0.t).cmp(&value_key(&b.0.t)))
    });
    v.dedup_by(|a, b| a.1 == b.1 && a.0.cls == b.0.cls && value_key(&a.0.t) == value_key(&b.0.t));
}

// ----- geometric scene over a controlled extension -----

/// Full torsion packs over an extension where every modulus place splits,
/// the field contains the `n`-th roots of unity, and every pack reaches
/// its geometric size: `n^(2g)` divisor-class torsion points, `n^(m-1)`
/// coordinate-torus points, `n^(2g+m-1)` degree-0 augmented points, and
/// `n^(2g+m)` across all components, projecting onto `n^(2g+1)` quotient
/// classes without coordinates.
pub struct GeomScene {
    /// Extension degree over the prime field.
    pub s: u32,
    /// Coordinate-augmented class group over the extension.
    pub gj: GenJacCtx,
    /// Component quotient (plain).
    pub quot: GenQuot,
    /// Component quotient with coarsened coordinates.
    pub quot_red: GenQuot,
    /// Component quotient without coordinates (divisor classes only).
    pub quot_j: ModQuotient,
    /// Divisor-class `n`-torsion over the extension.
    pub j_n: Vec<PicElem>,
    /// Coordinate-torus `n`-torsion (canonical coordinates).
    pub t_n: Vec<ModValue>,
    /// Degree-0 torsion of the coordinate-augmented group.
    pub jm_n: Vec<GenJacElem>,
    /// Full torsion of the component quotient.
    pub cal_jm_n: Vec<GenQuotElem>,
    /// Full torsion of the coordinate-free component quotient.
    pub cal_j_n: Vec<QuotElem>,
}

impl GeomScene {
    /// Build the scene starting from prime-field data, escalating the
    /// extension degree through multiples of the computed base degree
    /// until every pack is complete.
    pub fn build(
        jac: &Jacobian,
        modl: &Modulus,
        aux: &AuxModulus,
        n: u64,
        seed: u64,
        budget: usize,
    ) -> Result<GeomScene> {
        if jac.ctx().field().degree() != 1 {
            return Err(Error::ContextMismatch(
                "scene construction starts at the prime field".into(),
            ));
        }
        if !is_prime_u64(n) {
            return Err(Error::ContextMismatch(
                "scene construction requires a prime level".into(),
            ));
        }
        let m = modl.degree() as u64;
        if m % n != 0 {
            return Err(Error::ContextMismatch(format!(
                "modulus degree {m} not divisible by level {n}"
            )));
        }
        let q = jac.ctx().field().characteristic();
        if q % n == 0 {
            return Err(Error::ContextMismatch(
                "level equal to the characteristic".into(),
            ));
        }
        let mut s0 = mult_order_mod(q, n);
        if modl.places().iter().any(|p| p.degree() == 2) {
            s0 = lcm_u32(s0, 2);
        }
        if n == 2 {
            // the divisor-class 2-torsion is rational over the splitting
            // field of f
            for (u, _) in jac.ctx().f_poly().factor() {
                s0 = lcm_u32(s0, u.degree().unwrap_or(1) as u32);
            }
        }
        for i in 1..=8u32 {
            let s = s0 * i;
            if let Some(scene) = Self::try_build(jac, modl, aux, n, s, seed, budget)? {
                return Ok(scene);
            }
        }
        Err(Error::Exhausted(format!(
            "torsion packs incomplete within extensions of degree <= {}",
            s0 * 8
        )))
    }

    /// One attempt at a fixed extension degree. `Ok(None)` means a pack
    /// is incomplete at this degree (escalate); errors are genuine.
    fn try_build(
        jac: &Jacobian,
        modl: &Modulus,
        aux: &AuxModulus,
        n: u64,
        s: u32,
        seed: u64,
        budget: usize,
    ) -> Result<Option<GeomScene>> {
        let g = jac.ctx().genus() as u32;
        let m = modl.degree() as u32;
        let ell = (m as i64) / (n as i64);
        let jac_s = extended_jacobian(jac, s)?;
        let ctx_s = jac_s.ctx().clone();
        if !ctx_s.field().contains_mu(n) {
            return Ok(None);
        }
        let modl_s = modl.base_change(&ctx_s)?;
        if modl_s.places().iter().any(|p| p.degree() != 1) {
            return Ok(None);
        }
        let gj = GenJacCtx::with_jacobian(&jac_s, &modl_s, n)?;

        // coordinate torus: complete by construction over a split field
        let t_n = gj.torus_torsion()?;
        let expect_t = n.pow(m - 1);
        if t_n.len() as u64 != expect_t {
            return Err(Error::ContextMismatch(format!(
                "split-field coordinate torsion has {} points, expected {expect_t}",
                t_n.len()
            )));
        }

        // divisor-class torsion: may still be short at this degree
        let j_n = prime_torsion_in(&jac_s, n, seed, budget)?;
        let expect_j = n.pow(2 * g);
        if (j_n.len() as u64) < expect_j {
            return Ok(None);
        }
        if j_n.len() as u64 > expect_j {
            return Err(Error::ContextMismatch(format!(
                "divisor-class torsion has {} points, expected at most {expect_j}",
                j_n.len()
            )));
        }

        // auxiliary data over the extension
        let aux_div_s = lift_divisor(&aux.divisor, jac.ctx(), &ctx_s)?;
        let equiv_s = aux.equiv.lift_to(&ctx_s)?;
        let aux_s = AuxModulus {
            divisor: aux_div_s.clone(),
            equiv: equiv_s,
        };
        let quot_j = ModQuotient::new(&jac_s, &modl_s, &aux_s)?;
        let quot = GenQuot::new(&gj, &aux_div_s, false)?;
        let quot_red = GenQuot::new(&gj, &aux_div_s, true)?;

        // component fibers: particular solutions by prime division, full
        // fibers by coordinate solving over the class torsion translates
        let mut cal_jm_n: Vec<GenQuotElem> = Vec::new();
        for j in 0..n as i64 {
            let target = gj.smul(j, quot.t_elem())?;
            let c0 = match divide_by_prime_in(&jac_s, n, &target.cls, seed, budget)? {
                Some(c) => c,
                None => return Ok(None),
            };
            for tau in &j_n {
                let cand = jac_s.add(&c0, tau)?;
                let fiber = fiber_over(&gj, &cand, &target)?;
                if fiber.is_empty() {
                    return Ok(None);
                }
                if fiber.len() as u64 != expect_t {
                    return Err(Error::ContextMismatch(format!(
                        "torsion fiber has {} points, expected {expect_t}",
                        fiber.len()
                    )));
                }
                for x in fiber {
                    cal_jm_n.push((x, j * ell));
                }
            }
        }
        dedup_quot(&mut cal_jm_n);
        let expect_cal = n.pow(2 * g + m);
        if cal_jm_n.len() as u64 != expect_cal {
            return Err(Error::ContextMismatch(format!(
                "component torsion has {} points, expected {expect_cal}",
                cal_jm_n.len()
            )));
        }

        // degree-0 slice
        let mut jm_n: Vec<GenJacElem> = cal_jm_n
            .iter()
            .filter(|(_, c)| *c == 0)
            .map(|(x, _)| x.clone())
            .collect();
        sort_elems(&mut jm_n);
        let expect_jm = n.pow(2 * g + m - 1);
        if jm_n.len() as u64 != expect_jm {
            return Err(Error::ContextMismatch(format!(
                "degree-0 torsion has {} points, expected {expect_jm}",
                jm_n.len()
            )));
        }

        // coordinate-free projection: may be short until the coordinate
        // fields are all reached
        let mut cal_j_n: Vec<QuotElem> = cal_jm_n
            .iter()
            .map(|(x, c)| QuotElem {
                cls: x.cls.clone(),
                comp: *c,
            })
            .collect();
        cal_j_n.sort();
        cal_j_n.dedup();
        let expect_cal_j = n.pow(2 * g + 1);
        if (cal_j_n.len() as u64) < expect_cal_j {
            return Ok(None);
        }
        if cal_j_n.len() as u64 > expect_cal_j {
            return Err(Error::ContextMismatch(format!(
                "projected torsion has {} classes, expected {expect_cal_j}",
                cal_j_n.len()
            )));
        }

        Ok(Some(GeomScene {
            s,
            gj,
            quot,
            quot_red,
            quot_j,
            j_n,
            t_n,
            jm_n,
            cal_jm_n,
            cal_j_n,
        }))
    }
}

/// A single torsion element of the component quotient in component
/// `j * (m/n)`, over the working field of `gj` (used where the full
/// scene is not needed, e.g. odd levels): a particular solution of
/// `n * x = j * t`.
pub fn particular_component_solution(
    gj: &GenJacCtx,
    t_elem: &GenJacElem,
    j: i64,
    seed: u64,
    budget: usize,
) -> Result<Option<GenJacElem>> {
    let n = gj.level();
    if !is_prime_u64(n) {
        return Err(Error::ContextMismatch(
            "component solving requires a prime level".into(),
        ));
    }
    let target = gj.smul(j, t_elem)?;
    let c0 = match divide_by_prime_in(gj.jacobian(), n, &target.cls, seed, budget)? {
        Some(c) => c,
        None => return Ok(None),
    };
    let fiber = fiber_over(gj, &c0, &target)?;
    Ok(fiber.into_iter().next())
}

fn mult_order_mod(q: u64, n: u64) -> u32 {
    let mut acc = q % n;
    let mut ord = 1u32;
    while acc != 1 {
        acc = (acc * q) % n;
        ord += 1;
    }
    ord
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    a / gcd_u32(a, b) * b
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{Curve, CurveCtx};
    use crate::ff::FiniteField;
    use crate::piccalc::quot::pick_auxiliary_modulus;

    fn setup(p: u64, f: &[i64], inf: bool, coords: &[u64], n: u64) -> (Jacobian, Modulus, GenJacCtx) {
        let curve = Curve::new(p, f).unwrap();
        let field = FiniteField::prime(p).unwrap();
        let ctx = CurveCtx::new(&curve, &field).unwrap();
        let modl = if inf {
            Modulus::at_infinity(&ctx)
        } else {
            Modulus::affine(&ctx, coords).unwrap()
        };
        let gj = GenJacCtx::new(&modl, n).unwrap();
        (gj.jacobian().clone(), modl, gj)
    }

    #[test]
    fn interpolation_hits_prescribed_values() {
        for (inf, coords) in [(true, &[][..]), (false, &[1u64, 3][..]), (false, &[0][..])] {
            let (_, modl, gj) = setup(5, &[2, 1, 0, 0, 1], inf, coords, 2);
            // walk a few nonzero values of the residue algebra
            let one = modl.one_value();
            let places: Vec<Place> = one.components().keys().cloned().collect();
            let mut count = 0;
            'outer: for code in 0..200u64 {
                let mut comps = std::collections::BTreeMap::new();
                let mut c = code;
                for pl in &places {
                    let vals = residue_values(&one, pl).unwrap();
                    let nonzero: Vec<_> =
                        vals.into_iter().filter(|v| !v.is_zero()).collect();
                    comps.insert(pl.clone(), nonzero[(c as usize) % nonzero.len()].clone());
                    c /= nonzero.len() as u64;
                }
                if c > 0 {
                    break 'outer;
                }
                let v = ModValue::from_components(comps);
                let u = interpolate_modulus_value(&gj, &v).unwrap();
                assert_eq!(modl.evaluate(&u).unwrap(), v);
                count += 1;
            }
            assert!(count > 3, "exercised {count} values");
        }
    }

    #[test]
    fn inert_fiber_interpolation() {
        // lc = 3 is not a square mod 7: the fiber at infinity is inert
        let (_, modl, gj) = setup(7, &[2, 1, 0, 0, 3], true, &[], 2);
        let one = modl.one_value();
        let places: Vec<Place> = one.components().keys().cloned().collect();
        assert_eq!(places.len(), 1);
        assert_eq!(places[0].degree(), 2);
        let mut count = 0;
        for v in residue_values(&one, &places[0]).unwrap() {
            if v.is_zero() {
                continue;
            }
            let mv = ModValue::from_components(
                [(places[0].clone(), v)].into_iter().collect(),
            );
            let u = interpolate_modulus_value(&gj, &mv).unwrap();
            assert_eq!(modl.evaluate(&u).unwrap(), mv);
            count += 1;
        }
        assert_eq!(count, 48);
    }

    #[test]
    fn rational_torsion_matches_product_enumeration() {
        // brute-force oracle: all (class, torus point) pairs killed by n
        for (p, f, inf, coords) in [
            (5u64, &[1i64, 0, 0, 0, 1][..], true, &[][..]),
            (5, &[2, 1, 0, 0, 1], true, &[]),
            (7, &[2, 1, 0, 0, 3], true, &[]),
        ] {
            let (jac, _, gj) = setup(p, f, inf, coords, 2);
            let fast = jm_torsion(&gj, 4000).unwrap();
            let mut brutal = Vec::new();
            for cls in jac.enumerate(4000).unwrap() {
                for t in gj.torus_points(4000).unwrap() {
                    let e = GenJacElem {
                        cls: cls.clone(),
                        t: gj.canon_coord(&t),
                    };
                    if gj.smul(2, &e).unwrap().is_zero() {
                        brutal.push(e);
                    }
                }
            }
            sort_elems(&mut brutal);
            assert_eq!(fast.len(), brutal.len());
            for (a, b) in fast.iter().zip(brutal.iter()) {
                assert!(gj.equal(a, b));
            }
        }
    }

    #[test]
    fn quotient_group_law_and_torsion() {
        let (jac, modl, gj) = setup(5, &[2, 1, 0, 0, 1], true, &[], 2);
        let aux = pick_auxiliary_modulus(&modl, &[jac.base().clone()], 0).unwrap();
        let gq = GenQuot::new(&gj, &aux.divisor, false).unwrap();
        // group axioms on a few elements derived from the torsion
        let tor = gq.torsion(4000).unwrap();
        // #J = 7 (odd), torus 2-torsion = Z/2, aux class in 2J: the
        // degree-0 torsion is Z/2 and the full torsion doubles it
        assert_eq!(tor.len(), 4);
        for a in &tor {
            assert!(gq.equal(&gq.smul(2, a).unwrap(), &gq.zero()));
            for b in &tor {
                let ab = gq.add(a, b).unwrap();
                let ba = gq.add(b, a).unwrap();
                assert!(gq.equal(&ab, &ba));
                // torsion is closed
                assert!(tor.iter().any(|c| gq.equal(c, &ab)));
            }
            let na = gq.neg(a).unwrap();
            assert!(gq.equal(&gq.add(a, &na).unwrap(), &gq.zero()));
        }
        // component structure: half the elements sit in component m/n
        let half: Vec<_> = tor.iter().filter(|(_, c)| *c == 1).collect();
        assert_eq!(half.len(), 2);
    }

    #[test]
    fn geometric_scene_split_quartic() {
        // f = x^4 + 1 over F_5 splits over F_25; m = 2 at infinity
        let (jac, modl, _) = setup(5, &[1, 0, 0, 0, 1], true, &[], 2);
        let aux = pick_auxiliary_modulus(&modl, &[jac.base().clone()], 0).unwrap();
        let scene = GeomScene::build(&jac, &modl, &aux, 2, 11, 6000).unwrap();
        assert_eq!(scene.s, 2);
        assert_eq!(scene.j_n.len(), 4);
        assert_eq!(scene.t_n.len(), 2);
        assert_eq!(scene.jm_n.len(), 8);
        assert_eq!(scene.cal_jm_n.len(), 16);
        assert_eq!(scene.cal_j_n.len(), 8);
        // every pack member is killed by n in its group
        for x in &scene.jm_n {
            assert!(scene.gj.smul(2, x).unwrap().is_zero());
        }
        for a in &scene.cal_jm_n {
            let d = scene.quot.smul(2, a).unwrap();
            assert!(scene.quot.equal(&d, &scene.quot.zero()));
        }
        // packs are stable under Frobenius
        for x in &scene.jm_n {
            let fx = scene.gj.frobenius(x).unwrap();
            assert!(scene.jm_n.iter().any(|y| scene.gj.equal(y, &fx)));
        }
        for a in &scene.cal_jm_n {
            let fa = scene.quot.frobenius(a).unwrap();
            assert!(scene.cal_jm_n.iter().any(|b| scene.quot.equal(b, &fa)));
        }
    }

    #[test]
    fn geometric_scene_inert_infinity() {
        // lc = 3 nonsquare mod 7: inert fiber at infinity, m = 2
        let (jac, modl, _) = setup(7, &[2, 1, 0, 0, 3], true, &[], 2);
        let aux = pick_auxiliary_modulus(&modl, &[jac.base().clone()], 0).unwrap();
        let scene = GeomScene::build(&jac, &modl, &aux, 2, 11, 8000).unwrap();
        assert_eq!(scene.j_n.len(), 4);
        assert_eq!(scene.t_n.len(), 2);
        assert_eq!(scene.jm_n.len(), 8);
        assert_eq!(scene.cal_jm_n.len(), 16);
        assert_eq!(scene.cal_j_n.len(), 8);
    }
}
