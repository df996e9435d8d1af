//! The class group of divisors supported away from the modulus.
//!
//! An element is a degree-0 divisor class together with a torus
//! coordinate: the value at the modulus of the function connecting the
//! input divisor to a fixed modulus-disjoint canonical representative.
//! Coordinates live in the unit group of the modulus residue algebra
//! modulo diagonal scalars; every group operation folds the value of its
//! reduction witness at the modulus into the coordinate, so the pair
//! stays an exact description of the class.
//!
//! Two isogenies connect this group with its quotient by the norm-one
//! roots of unity in the coordinate torus: one is a plain coarsening of
//! the coordinate, the other multiplies the divisor by `n` and raises the
//! coordinate to the `n`-th power (times the reduction witness value).
//! Their composite is multiplication by `n`, which the tests check
//! literally.

use std::collections::BTreeMap;
use std::sync::Arc;

pub mod torsion;

use num_bigint::BigUint;

use crate::curve::func::CurveFn;
use crate::curve::local::LeadValue;
use crate::curve::modulus::{ModValue, Modulus};
use crate::curve::point::{Divisor, Place};
use crate::ff::poly::Poly;
use crate::ff::Elem;
use crate::piccalc::{default_base_place, rr, Jacobian, PicElem};
use crate::{Error, Result};

/// Context: a divisor-class group whose base place avoids the modulus,
/// the modulus itself, and the torsion level `n`, plus cached data for
/// coordinate canonicalization.
#[derive(Clone)]
pub struct GenJacCtx {
    jac: Jacobian,
    modl: Modulus,
    n: u64,
    /// Transversal of the norm-one root-of-unity twists modulo diagonal
    /// scalars: the rational points of the kernel of the induced norm map
    /// on the coordinate `n`-torsion. Canonical forms, identity first.
    res1_transversal: Vec<ModValue>,
    /// n-th roots of unity in the working field.
    mu_n: Vec<Elem>,
}

/// An element: canonical divisor class plus canonical torus coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenJacElem {
    pub cls: PicElem,
    pub t: ModValue,
}

impl GenJacElem {
    pub fn is_zero(&self) -> bool {
        self.cls.is_zero() && self.t.as_diagonal().is_some()
    }
}

impl GenJacCtx {
    /// Build over the modulus's own curve context, choosing a base place
    /// away from the modulus.
    pub fn new(modl: &Modulus, n: u64) -> Result<GenJacCtx> {
        let ctx = modl.ctx();
        let base = default_base_place(ctx, modl.is_at_infinity(), modl.x_coords())?;
        let jac = Jacobian::new(ctx, base)?;
        Self::with_jacobian(&jac, modl, n)
    }

    pub fn with_jacobian(jac: &Jacobian, modl: &Modulus, n: u64) -> Result<GenJacCtx> {
        if n < 2 {
            return Err(Error::ContextMismatch("torsion level must be >= 2".into()));
        }
        if modl.divisor().mult(jac.base()) != 0 {
            return Err(Error::ContextMismatch(
                "base place must avoid the modulus".into(),
            ));
        }
        let mut g = GenJacCtx {
            jac: jac.clone(),
            modl: modl.clone(),
            n,
            res1_transversal: Vec::new(),
            mu_n: Vec::new(),
        };
        g.mu_n = g.roots_of_unity_in_field()?;
        g.res1_transversal = g.compute_res1_transversal()?;
        Ok(g)
    }

    pub fn jacobian(&self) -> &Jacobian {
        &self.jac
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modl
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn mu_n(&self) -> &[Elem] {
        &self.mu_n
    }

    /// Rational points of the kernel of the induced norm map on the
    /// coordinate torsion (the twists that the coarser quotient kills),
    /// as canonical coordinates.
    pub fn res1_transversal(&self) -> &[ModValue] {
        &self.res1_transversal
    }

    fn roots_of_unity_in_field(&self) -> Result<Vec<Elem>> {
        let k = self.jac.ctx().field();
        // The n-th roots of unity in k form mu_g for g = gcd(n, #k - 1).
        let g = num_integer::Integer::gcd(&k.unit_order(), &BigUint::from(self.n));
        let g = num_traits::ToPrimitive::to_u64(&g).expect("gcd bounded by n");
        let mut out = k.mu(g)?;
        out.sort();
        Ok(out)
    }

    // ----- canonical modulus-disjoint representatives -----

    /// The canonical modulus-disjoint divisor representing a class. Found
    /// by a deterministic scan; the result depends only on the class.
    pub fn disjoint_rep(&self, cls: &PicElem) -> Result<Divisor> {
        let rep = self.jac.rep_divisor(cls);
        if self.modl.is_disjoint(&rep) {
            return Ok(rep);
        }
        let ctx = self.jac.ctx();
        let k = ctx.field();
        let span = k
            .order_u64()
            .ok_or_else(|| Error::BudgetExceeded("field too large".into()))?;
        let g = ctx.genus() as i64;
        for extra in 1..=(2 * g + 4) {
            let mut bound = cls.effective_part().clone();
            bound.add_place(self.jac.base().clone(), extra);
            let basis = rr::rr_space(ctx, &bound)?;
            let dim = basis.len();
            let total = span.checked_pow(dim as u32).ok_or_else(|| {
                Error::BudgetExceeded("representative scan overflow".into())
            })?;
            'cand: for code in 1..total {
                let mut c = code;
                let mut coeffs: Vec<Elem> = Vec::with_capacity(dim);
                for _ in 0..dim {
                    coeffs.push(k.elem_from_index(c % span));
                    c /= span;
                }
                match coeffs.iter().find(|e| !e.is_zero()) {
                    Some(first) if first.is_one() => {}
                    _ => continue,
                }
                let mut h: Option<CurveFn> = None;
                for (cf, b) in coeffs.iter().zip(basis.iter()) {
                    if !cf.is_zero() {
                        let term = b.scale(cf);
                        h = Some(match h {
                            Some(acc) => acc.add(&term),
                            None => term,
                        });
                    }
                }
                let h = h.expect("nonzero coefficients");
                let eprime = &ctx.divisor_of(&h)? + &bound;
                debug_assert!(eprime.is_effective());
                if !self.modl.is_disjoint(&eprime) {
                    continue 'cand;
                }
                let mut r = eprime;
                r.add_place(self.jac.base().clone(), -(cls.depth() + extra));
                return Ok(r);
            }
        }
        Err(Error::ContextMismatch(
            "no modulus-disjoint representative found".into(),
        ))
    }

    /// Witness connecting two equivalent modulus-disjoint divisors:
    /// `div(w) = from - to`, evaluated away from the modulus.
    fn connecting_witness(&self, from: &Divisor, to: &Divisor) -> Result<CurveFn> {
        let diff = from - to;
        rr::principal_witness(self.jac.ctx(), &diff)?.ok_or_else(|| {
            Error::ContextMismatch("divisors are not equivalent".into())
        })
    }

    // ----- coordinate canonicalization -----

    /// Canonical form of a coordinate modulo diagonal scalars.
    pub fn canon_coord(&self, v: &ModValue) -> ModValue {
        // Normalize by a rational component when one exists: dividing by
        // it makes that component 1, which is a complete normal form.
        for (_, lead) in v.components() {
            if let LeadValue::Base(e) = lead {
                return v.scale_diagonal(&e.inv().expect("unit component"));
            }
        }
        // All components live in quadratic residue fields (possible only
        // over the base field, where scalars are few): minimize keys.
        let k = self.jac.ctx().field();
        let span = k.order_u64().expect("small base field");
        let mut best = v.clone();
        let mut best_key = value_key(&best);
        for i in 2..span {
            let cand = v.scale_diagonal(&k.elem_from_index(i));
            let key = value_key(&cand);
            if key < best_key {
                best_key = key;
                best = cand;
            }
        }
        best
    }

    /// Canonical form modulo diagonal scalars *and* the norm-one
    /// root-of-unity twists (the coarser quotient's equality).
    pub fn canon_coord_reduced(&self, v: &ModValue) -> ModValue {
        let mut best: Option<(Vec<u64>, ModValue)> = None;
        for w in &self.res1_transversal {
            let cand = self.canon_coord(&v.mul(w));
            let key = value_key(&cand);
            match &best {
                Some((bk, _)) if *bk <= key => {}
                _ => best = Some((key, cand)),
            }
        }
        best.expect("transversal nonempty").1
    }

    // ----- element constructors -----

    pub fn zero(&self) -> GenJacElem {
        GenJacElem {
            cls: self.jac.zero(),
            t: self.modl.one_value(),
        }
    }

    /// Class of a degree-0 divisor with support away from the modulus.
    pub fn from_divisor(&self, d: &Divisor) -> Result<GenJacElem> {
        if !self.modl.is_disjoint(d) {
            return Err(Error::ContextMismatch(
                "divisor support meets the modulus".into(),
            ));
        }
        let cls = self.jac.class(d)?;
        let r = self.disjoint_rep(&cls)?;
        let w = self.connecting_witness(d, &r)?;
        let t = self.canon_coord(&self.modl.evaluate(&w)?);
        Ok(GenJacElem { cls, t })
    }

    /// Purely toric element: zero divisor class, given coordinate.
    pub fn from_coordinate(&self, t: &ModValue) -> GenJacElem {
        GenJacElem {
            cls: self.jac.zero(),
            t: self.canon_coord(t),
        }
    }

    // ----- group law -----

    pub fn add(&self, a: &GenJacElem, b: &GenJacElem) -> Result<GenJacElem> {
        let cls = self.jac.add(&a.cls, &b.cls)?;
        let ra = self.disjoint_rep(&a.cls)?;
        let rb = self.disjoint_rep(&b.cls)?;
        let rc = self.disjoint_rep(&cls)?;
        let w = self.connecting_witness(&ra.add(&rb), &rc)?;
        let t = self.canon_coord(&a.t.mul(&b.t).mul(&self.modl.evaluate(&w)?));
        Ok(GenJacElem { cls, t })
    }

    pub fn neg(&self, a: &GenJacElem) -> Result<GenJacElem> {
        let cls = self.jac.neg(&a.cls)?;
        let ra = self.disjoint_rep(&a.cls)?;
        let rc = self.disjoint_rep(&cls)?;
        let w = self.connecting_witness(&ra.add(&rc), &Divisor::zero())?;
        let t = self
            .canon_coord(&a.t.mul(&self.modl.evaluate(&w)?).inv()?);
        Ok(GenJacElem { cls, t })
    }

    pub fn smul(&self, k: i64, a: &GenJacElem) -> Result<GenJacElem> {
        if k < 0 {
            return self.smul(-k, &self.neg(a)?);
        }
        let mut acc = self.zero();
        for i in (0..64 - (k as u64).leading_zeros()).rev() {
            acc = self.add(&acc, &acc)?;
            if (k as u64) & (1 << i) != 0 {
                acc = self.add(&acc, a)?;
            }
        }
        Ok(acc)
    }

    pub fn frobenius(&self, a: &GenJacElem) -> Result<GenJacElem> {
        Ok(GenJacElem {
            cls: self.jac.frobenius(&a.cls)?,
            t: self.canon_coord(&frobenius_value(&a.t)),
        })
    }

    pub fn equal(&self, a: &GenJacElem, b: &GenJacElem) -> bool {
        a.cls == b.cls && value_key(&a.t) == value_key(&b.t)
    }

    /// Equality in the coarser quotient (coordinates modulo norm-one
    /// root-of-unity twists).
    pub fn equal_reduced(&self, a: &GenJacElem, b: &GenJacElem) -> bool {
        a.cls == b.cls
            && value_key(&self.canon_coord_reduced(&a.t))
                == value_key(&self.canon_coord_reduced(&b.t))
    }

    // ----- the two isogenies -----

    /// Coordinate coarsening: same divisor class, coordinate re-canonized
    /// modulo the norm-one root-of-unity twists.
    pub fn psi(&self, a: &GenJacElem) -> GenJacElem {
        GenJacElem {
            cls: a.cls.clone(),
            t: self.canon_coord_reduced(&a.t),
        }
    }

    /// The isogeny back: divisor part multiplied by `n` (re-reduced, with
    /// witness), coordinate raised to the `n`-th power times the witness
    /// value. Composing after the coarsening gives multiplication by `n`.
    pub fn phi(&self, a: &GenJacElem) -> Result<GenJacElem> {
        let n = self.n as i64;
        let cls = self.jac.smul(n, &a.cls)?;
        let ra = self.disjoint_rep(&a.cls)?;
        let rc = self.disjoint_rep(&cls)?;
        let w = self.connecting_witness(&ra.scale(n), &rc)?;
        let t = self
            .canon_coord(&a.t.pow_i64(n)?.mul(&self.modl.evaluate(&w)?));
        Ok(GenJacElem { cls, t })
    }

    // ----- torus enumeration -----

    /// Every rational point of the coordinate torus (unit tuples modulo
    /// diagonal scalars), as canonical coordinates. Budget-guarded.
    pub fn torus_points(&self, budget: usize) -> Result<Vec<ModValue>> {
        let one = self.modl.one_value();
        let places: Vec<Place> = one.components().keys().cloned().collect();
        let mut tuples: Vec<BTreeMap<Place, LeadValue>> = vec![BTreeMap::new()];
        for pl in &places {
            let units: Vec<LeadValue> = residue_values(&one, pl)?
                .into_iter()
                .filter(|v| !v.is_zero())
                .collect();
            let mut next = Vec::with_capacity(tuples.len() * units.len());
            for t in &tuples {
                for u in &units {
                    if next.len() + tuples.len() > budget {
                        return Err(Error::BudgetExceeded(
                            "torus enumeration too large".into(),
                        ));
                    }
                    let mut m = t.clone();
                    m.insert(pl.clone(), u.clone());
                    next.push(m);
                }
            }
            tuples = next;
        }
        let mut out: Vec<ModValue> = tuples
            .into_iter()
            .map(|m| self.canon_coord(&ModValue::from_components(m)))
            .collect();
        out.sort_by_key(value_key);
        out.dedup_by_key(|v| value_key(v));
        Ok(out)
    }

    /// The predicted torus order: product of the residue-field unit
    /// counts over the fibers, divided by the scalar count.
    pub fn torus_order_formula(&self) -> Result<u64> {
        let k = self.jac.ctx().field();
        let q = k
            .order_u64()
            .ok_or_else(|| Error::BudgetExceeded("field too large".into()))?;
        let mut prod: u64 = 1;
        for pl in self.modl.places() {
            let d = pl.degree() as u32;
            prod = prod
                .checked_mul(q.pow(d) - 1)
                .ok_or_else(|| Error::BudgetExceeded("torus order overflow".into()))?;
        }
        Ok(prod / (q - 1))
    }

    /// Rational `n`-torsion of the coordinate torus: coordinates whose
    /// `n`-th power is diagonal. Enumerated via scalar targets and
    /// componentwise roots, then canonicalized within this context's
    /// diagonal quotient.
    pub fn torus_torsion(&self) -> Result<Vec<ModValue>> {
        let values = self.torus_torsion_with_targets()?;
        let mut out: Vec<ModValue> = values.into_iter().map(|(v, _)| v).collect();
        out.sort_by_key(value_key);
        out.dedup_by_key(|v| value_key(v));
        Ok(out)
    }

    /// Torsion coordinates together with the diagonal value of their
    /// `n`-th power (canonical pairs, deduplicated on the coordinate).
    fn torus_torsion_with_targets(&self) -> Result<Vec<(ModValue, Elem)>> {
        let k = self.jac.ctx().field();
        let one = self.modl.one_value();
        let places: Vec<Place> = one.components().keys().cloned().collect();
        // Fast path: with every modulus place rational and mu_n in the
        // field, the torsion classes are exactly the root-of-unity tuples
        // gauged to 1 at the first place — no field scan required.
        if places.iter().all(|p| p.degree() == 1) && k.contains_mu(self.n) {
            let mu = k.mu(self.n)?;
            let mut tuples: Vec<BTreeMap<Place, LeadValue>> = vec![BTreeMap::new()];
            for (i, pl) in places.iter().enumerate() {
                let choices: &[Elem] = if i == 0 { &mu[..1] } else { &mu };
                let mut next = Vec::with_capacity(tuples.len() * choices.len());
                for t in &tuples {
                    for c in choices {
                        let mut m = t.clone();
                        m.insert(pl.clone(), LeadValue::Base(c.clone()));
                        next.push(m);
                    }
                }
                tuples = next;
            }
            let mut out: Vec<(Vec<u64>, (ModValue, Elem))> = Vec::new();
            for m in tuples {
                let v = self.canon_coord(&ModValue::from_components(m));
                let d = v
                    .pow_i64(self.n as i64)?
                    .as_diagonal()
                    .expect("root-of-unity tuple has diagonal n-th power");
                out.push((value_key(&v), (v, d)));
            }
            out.sort_by(|a, b| a.0.cmp(&b.0));
            out.dedup_by(|a, b| a.0 == b.0);
            return Ok(out.into_iter().map(|(_, p)| p).collect());
        }
        let span = k
            .order_u64()
            .ok_or_else(|| Error::BudgetExceeded("field too large".into()))?;
        let mut seen: Vec<(Vec<u64>, (ModValue, Elem))> = Vec::new();
        for li in 1..span {
            let lambda = k.elem_from_index(li);
            // Componentwise n-th roots of the diagonal target.
            let mut tuples: Vec<BTreeMap<Place, LeadValue>> = vec![BTreeMap::new()];
            for pl in &places {
                let roots = component_nth_roots(&one, pl, &lambda, self.n)?;
                if roots.is_empty() {
                    tuples.clear();
                    break;
                }
                let mut next = Vec::with_capacity(tuples.len() * roots.len());
                for t in &tuples {
                    for r in &roots {
                        let mut m = t.clone();
                        m.insert(pl.clone(), r.clone());
                        next.push(m);
                    }
                }
                tuples = next;
            }
            for m in tuples {
                let v = self.canon_coord(&ModValue::from_components(m));
                let key = value_key(&v);
                if seen.iter().all(|(k2, _)| *k2 != key) {
                    // Re-read the diagonal value after canonicalization.
                    let d = v
                        .pow_i64(self.n as i64)?
                        .as_diagonal()
                        .expect("n-th power is diagonal");
                    seen.push((key, (v, d)));
                }
            }
        }
        seen.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(seen.into_iter().map(|(_, p)| p).collect())
    }

    /// The induced norm value of a torsion coordinate: the coordinate's
    /// norm divided by the `(m/n)`-th power of the diagonal value of its
    /// `n`-th power. Scalar-choice free, and an `n`-th root of unity.
    pub fn torsion_norm_value(&self, v: &ModValue) -> Result<Elem> {
        let m = self.modl.degree() as i64;
        let n = self.n as i64;
        if m % n != 0 {
            return Err(Error::ContextMismatch(format!(
                "modulus degree {m} not divisible by level {n}"
            )));
        }
        let d = v.pow_i64(n)?.as_diagonal().ok_or_else(|| {
            Error::ContextMismatch("coordinate is not n-torsion".into())
        })?;
        let ell = (m / n) as u64;
        let out = &v.norm() * &d.pow(ell).inv()?;
        debug_assert!(out.pow(self.n).is_one());
        Ok(out)
    }

    fn compute_res1_transversal(&self) -> Result<Vec<ModValue>> {
        let m = self.modl.degree() as i64;
        let n = self.n as i64;
        let mut out = vec![self.canon_coord(&self.modl.one_value())];
        if m % n != 0 {
            return Ok(out);
        }
        let ell = m / n;
        for (v, d) in self.torus_torsion_with_targets()? {
            // Kernel of the induced norm map: norm equals the ell-th
            // power of the diagonal value of the n-th power.
            if v.norm() == d.pow(ell as u64) {
                let key = value_key(&v);
                if out.iter().all(|w| value_key(w) != key) {
                    out.push(v);
                }
            }
        }
        out.sort_by_key(value_key);
        out.dedup_by_key(|v| value_key(v));
        Ok(out)
    }
}

// ----- free helpers on coordinates -----

/// Total ordering key for coordinates (used for canonical minimization
/// and deduplication).
pub fn value_key(v: &ModValue) -> Vec<u64> {
    let mut out = Vec::new();
    for (pl, lead) in v.components() {
        out.push(pl.degree() as u64);
        match lead {
            LeadValue::Base(e) => {
                out.push(0);
                out.extend_from_slice(e.coeffs());
            }
            LeadValue::Ring(r) => {
                out.push(1);
                encode_poly(&mut out, r.rep());
            }
            LeadValue::Quad { re, im, .. } => {
                out.push(2);
                encode_poly(&mut out, re.rep());
                encode_poly(&mut out, im.rep());
            }
            LeadValue::InfQuad { re, im, .. } => {
                out.push(3);
                out.extend_from_slice(re.coeffs());
                out.extend_from_slice(im.coeffs());
            }
        }
        out.push(u64::MAX); // component separator
    }
    out
}

fn encode_poly(out: &mut Vec<u64>, p: &Poly) {
    for c in p.coeffs() {
        out.extend_from_slice(c.coeffs());
        out.push(u64::MAX - 1);
    }
}

/// Coefficientwise Frobenius (prime-power map) on a coordinate,
/// permuting places accordingly.
pub fn frobenius_value(v: &ModValue) -> ModValue {
    let mut m = BTreeMap::new();
    for (pl, lead) in v.components() {
        m.insert(pl.frobenius(), lead_frobenius(lead));
    }
    ModValue::from_components(m)
}

fn relem_coeff_frobenius(x: &crate::ff::poly::RElem) -> crate::ff::poly::RElem {
    let coeffs: Vec<Elem> = x.rep().coeffs().iter().map(|c| c.frobenius()).collect();
    let p = Poly::from_elems(x.ring().base(), coeffs);
    x.ring().reduce(&p)
}

fn lead_frobenius(lead: &LeadValue) -> LeadValue {
    match lead {
        LeadValue::Base(e) => LeadValue::Base(e.frobenius()),
        LeadValue::Ring(r) => LeadValue::Ring(relem_coeff_frobenius(r)),
        // Conjugation in a quadratic residue field: the generator maps to
        // its negative (its minimal polynomial is X^2 - disc), while base
        // coefficients take the prime-power map.
        LeadValue::Quad { re, im, disc } => LeadValue::Quad {
            re: relem_coeff_frobenius(re),
            im: relem_coeff_frobenius(im).neg(),
            disc: disc.clone(),
        },
        LeadValue::InfQuad { re, im, lc } => LeadValue::InfQuad {
            re: re.frobenius(),
            im: -&im.frobenius(),
            lc: lc.clone(),
        },
    }
}

/// All residue-field values at a modulus place, shaped like the sample
/// value (which carries the embedding data).
pub fn residue_values(sample: &ModValue, pl: &Place) -> Result<Vec<LeadValue>> {
    let lead = sample
        .components()
        .get(pl)
        .ok_or_else(|| Error::ContextMismatch("place not in the modulus".into()))?;
    match lead {
        LeadValue::Base(e) => {
            let k = e.field();
            let span = k
                .order_u64()
                .ok_or_else(|| Error::BudgetExceeded("field too large".into()))?;
            Ok((0..span)
                .map(|i| LeadValue::Base(k.elem_from_index(i)))
                .collect())
        }
        LeadValue::Ring(r) => {
            let ring = r.ring();
            Ok(ring_elements(ring)?.into_iter().map(LeadValue::Ring).collect())
        }
        LeadValue::Quad { re, disc, .. } => {
            let ring = re.ring();
            let elems = ring_elements(ring)?;
            let mut out = Vec::with_capacity(elems.len() * elems.len());
            for a in &elems {
                for b in &elems {
                    out.push(LeadValue::Quad {
                        re: a.clone(),
                        im: b.clone(),
                        disc: disc.clone(),
                    });
                }
            }
            Ok(out)
        }
        LeadValue::InfQuad { re, lc, .. } => {
            let k = re.field();
            let span = k
                .order_u64()
                .ok_or_else(|| Error::BudgetExceeded("field too large".into()))?;
            let mut out = Vec::with_capacity((span * span) as usize);
            for i in 0..span {
                for j in 0..span {
                    out.push(LeadValue::InfQuad {
                        re: k.elem_from_index(i),
                        im: k.elem_from_index(j),
                        lc: lc.clone(),
                    });
                }
            }
            Ok(out)
        }
    }
}

fn ring_elements(ring: &Arc<crate::ff::poly::ResidueRing>) -> Result<Vec<crate::ff::poly::RElem>> {
    let k = ring.base();
    let span = k
        .order_u64()
        .ok_or_else(|| Error::BudgetExceeded("field too large".into()))?;
    let d = ring.degree();
    let total = span.checked_pow(d as u32).ok_or_else(|| {
        Error::BudgetExceeded("residue ring too large".into())
    })?;
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut c = code;
        let mut coeffs = Vec::with_capacity(d);
        for _ in 0..d {
            coeffs.push(k.elem_from_index(c % span));
            c /= span;
        }
        out.push(ring.reduce(&Poly::from_elems(k, coeffs)));
    }
    Ok(out)
}

/// All n-th roots of the diagonal scalar `lambda` in the residue field at
/// `pl`, found by scanning that (small) residue field.
pub fn component_nth_roots(
    sample: &ModValue,
    pl: &Place,
    lambda: &Elem,
    n: u64,
) -> Result<Vec<LeadValue>> {
    let all = residue_values(sample, pl)?;
    let target = sample
        .components()
        .get(pl)
        .expect("place present")
        .pow_i64(0)?
        .scale(lambda);
    let mut out = Vec::new();
    for v in all {
        if v.is_zero() {
            continue;
        }
        if v.pow_i64(n as i64)? == target {
            out.push(v);
        }
    }
    Ok(out)
}
