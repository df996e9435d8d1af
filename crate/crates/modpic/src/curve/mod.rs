//! Hyperelliptic curves `z^2 = f(x)` with `deg f = 2g + 2` over a small
//! odd prime field, together with a working-field context that realizes
//! closed points, function-field arithmetic and exact local data over any
//! finite extension of the base field.
//!
//! The curve model always has even degree, so the smooth completion has
//! exactly two points above `x = infinity`; whether they are rational over
//! the working field is decided by the square class of the leading
//! coefficient of `f`.

pub mod func;
pub mod local;
pub mod modulus;
pub mod point;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::ff::poly::Poly;
use crate::ff::{Elem, FiniteField};
use crate::{Error, Result};

use func::CurveFn;
use local::{local_data, tame_symbol_norm};
use point::{Divisor, FiniteKind, InfKind, Place};

/// Curve data over the prime field: `z^2 = f(x)`, `f` squarefree of even
/// degree `2g + 2 >= 4`.
pub struct Curve {
    p: u64,
    f: Poly,
    genus: usize,
}

impl fmt::Debug for Curve {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "z^2 = {} over F_{}", self.f, self.p)
    }
}

impl Curve {
    /// Build from little-endian integer coefficients of `f` (constant term
    /// first). Requirements: `p` an odd prime below `2^31`, `f` squarefree
    /// mod `p` of even degree `2g + 2` with `g >= 1`.
    pub fn new(p: u64, coeffs: &[i64]) -> Result<Arc<Curve>> {
        let k = FiniteField::prime(p)?;
        let f = Poly::from_i64_coeffs(&k, coeffs);
        let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
        if deg < 4 || deg % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "curve polynomial must have even degree >= 4 after reduction mod {p}, got {deg}"
            )));
        }
        if !f.is_squarefree() {
            let bad = f
                .squarefree_decomposition()
                .into_iter()
                .find(|&(_, m)| m > 1)
                .map(|(q, _)| q.to_string())
                .unwrap_or_default();
            return Err(Error::NotSquarefree { factor: bad });
        }
        let genus = deg / 2 - 1;
        Ok(Arc::new(Curve { p, f, genus }))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// `f` over the prime field.
    pub fn f_over_prime(&self) -> &Poly {
        &self.f
    }

    pub fn prime_field(&self) -> &Arc<FiniteField> {
        self.f.field()
    }
}

/// A curve viewed over a chosen working field `K / F_p`: the arena for
/// places, divisors and function arithmetic. Everything constructed from
/// one context is `K`-rational by construction.
pub struct CurveCtx {
    curve: Arc<Curve>,
    k: Arc<FiniteField>,
    fk: Poly,
    sqrt_lc: Option<Elem>,
    genus: usize,
}

impl fmt::Debug for CurveCtx {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{:?} over {:?}", self.curve, self.k)
    }
}

impl PartialEq for CurveCtx {
    fn eq(&self, other: &Self) -> bool {
        self.curve.p == other.curve.p && self.curve.f == other.curve.f && self.k == other.k
    }
}

impl CurveCtx {
    pub fn new(curve: &Arc<Curve>, k: &Arc<FiniteField>) -> Result<Arc<CurveCtx>> {
        if k.characteristic() != curve.p {
            return Err(Error::ContextMismatch(
                "working field has the wrong characteristic".into(),
            ));
        }
        let fk = curve.f.lift_to(k)?;
        let sqrt_lc = fk.leading().sqrt();
        Ok(Arc::new(CurveCtx {
            curve: curve.clone(),
            k: k.clone(),
            fk,
            sqrt_lc,
            genus: curve.genus,
        }))
    }

    pub fn curve(&self) -> &Arc<Curve> {
        &self.curve
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.k
    }

    pub fn f_poly(&self) -> &Poly {
        &self.fk
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Canonical square root of `lc(f)` in the working field, if it exists.
    pub fn sqrt_lc(&self) -> Option<Elem> {
        self.sqrt_lc.clone()
    }

    pub fn is_inf_split(&self) -> bool {
        self.sqrt_lc.is_some()
    }

    /// The places above `x = infinity`, in canonical order.
    pub fn infinite_places(&self) -> Vec<Place> {
        if self.is_inf_split() {
            vec![
                Place::Infinite(InfKind::Plus),
                Place::Infinite(InfKind::Minus),
            ]
        } else {
            vec![Place::Infinite(InfKind::Inert)]
        }
    }

    /// The full fiber over `x = infinity` as a divisor of degree 2.
    pub fn inf_fiber(&self) -> Divisor {
        let mut d = Divisor::zero();
        for pl in self.infinite_places() {
            d.add_place(pl, 1);
        }
        d
    }

    /// All places above a monic irreducible `u(x)` over the working field,
    /// in canonical order.
    pub fn places_above(self: &Arc<Self>, u: &Poly) -> Result<Vec<Place>> {
        if !u.is_monic() || u.is_constant() {
            return Err(Error::InvalidInput(
                "fiber polynomial must be monic nonconstant".into(),
            ));
        }
        let fmod = self.fk.rem(u)?;
        if fmod.is_zero() {
            return Ok(vec![Place::finite(u.clone(), FiniteKind::Ramified)]);
        }
        let ring = crate::ff::poly::ResidueRing::new(u)?;
        let fbar = ring.reduce(&fmod);
        match fbar.sqrt() {
            Some(v) => {
                let vp = v.rep().clone();
                let p1 = Place::finite(u.clone(), FiniteKind::Regular { v: vp.clone() });
                let p2 = Place::finite(u.clone(), FiniteKind::Regular { v: -&vp });
                let mut out = vec![p1, p2];
                out.sort();
                Ok(out)
            }
            None => Ok(vec![Place::finite(u.clone(), FiniteKind::InertQuad)]),
        }
    }

    /// Places above `x = x0`.
    pub fn places_above_x(self: &Arc<Self>, x0: &Elem) -> Result<Vec<Place>> {
        self.places_above(&Poly::linear_from_root(x0))
    }

    /// The full fiber divisor over `u` (degree `2 deg u`): ramified places
    /// carry multiplicity 2, split pairs and inert places multiplicity 1.
    pub fn fiber_divisor(self: &Arc<Self>, u: &Poly) -> Result<Divisor> {
        let mut d = Divisor::zero();
        for pl in self.places_above(u)? {
            let mult = if pl.is_branch() { 2 } else { 1 };
            d.add_place(pl, mult);
        }
        Ok(d)
    }

    /// The principal divisor of a nonzero function. Exact: support
    /// candidates are the irreducible factors of the numerator norm and of
    /// the denominator, plus the infinite places; orders come from the
    /// local engine. The result always has total degree 0.
    pub fn divisor_of(self: &Arc<Self>, h: &CurveFn) -> Result<Divisor> {
        if h.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let (_, _, c) = h.parts();
        let mut us: BTreeSet<Poly> = BTreeSet::new();
        let n = h.numerator_norm();
        if !n.is_constant() {
            for (u, _) in n.factor() {
                us.insert(u);
            }
        }
        if !c.is_constant() {
            for (u, _) in c.factor() {
                us.insert(u);
            }
        }
        let mut d = Divisor::zero();
        for u in &us {
            for pl in self.places_above(u)? {
                let ord = local_data(self, h, &pl)?.ord;
                d.add_place(pl, ord);
            }
        }
        for pl in self.infinite_places() {
            let ord = local_data(self, h, &pl)?.ord;
            d.add_place(pl, ord);
        }
        debug_assert_eq!(d.degree(), 0, "principal divisors have degree 0");
        Ok(d)
    }

    /// Product over all places of the residue norms of tame symbols of two
    /// nonzero functions; equals 1 identically.
    pub fn reciprocity_product(self: &Arc<Self>, h1: &CurveFn, h2: &CurveFn) -> Result<Elem> {
        let d1 = self.divisor_of(h1)?;
        let d2 = self.divisor_of(h2)?;
        let mut acc = self.k.one();
        let mut seen: BTreeSet<Place> = BTreeSet::new();
        for (pl, _) in d1.iter().chain(d2.iter()) {
            if !seen.insert(pl.clone()) {
                continue;
            }
            let t = tame_symbol_norm(self, h1, h2, pl)?;
            acc = &acc * &t;
        }
        Ok(acc)
    }

    /// Order of `h` at `place`.
    pub fn ord_at(self: &Arc<Self>, h: &CurveFn, place: &Place) -> Result<i64> {
        local::ord_at(self, h, place)
    }

    /// Residue value of `h` at `place` (requires order 0 there).
    pub fn value_at(self: &Arc<Self>, h: &CurveFn, place: &Place) -> Result<local::LeadValue> {
        local::value_at(self, h, place)
    }
}

/// Base change of a prime-field-rational divisor to a working extension:
/// each place is replaced by the sum of the places above it (all with
/// multiplicity one times the original weight, the extension being
/// unramified).
pub fn lift_divisor(
    d: &Divisor,
    from: &Arc<CurveCtx>,
    to: &Arc<CurveCtx>,
) -> Result<Divisor> {
    if from.field().degree() != 1 {
        return Err(Error::ContextMismatch(
            "divisor lifting starts from the prime-field context".into(),
        ));
    }
    if to.field().characteristic() != from.field().characteristic() {
        return Err(Error::ContextMismatch("characteristic mismatch".into()));
    }
    // does the embedded canonical sqrt of lc agree with the target's?
    let plus_stays_plus = match (from.sqrt_lc(), to.sqrt_lc()) {
        (Some(s_from), Some(s_to)) => {
            let v = s_from
                .as_prime_u64()
                .expect("prime-field square root");
            to.field().from_u64(v) == s_to
        }
        _ => true,
    };
    let mut out = Divisor::zero();
    for (pl, m) in d.iter() {
        match pl {
            Place::Infinite(kind) => {
                if to.is_inf_split() {
                    match kind {
                        InfKind::Plus | InfKind::Minus => {
                            let keep = matches!(kind, InfKind::Plus) == plus_stays_plus;
                            let lifted = if keep { InfKind::Plus } else { InfKind::Minus };
                            out.add_place(Place::Infinite(lifted), m);
                        }
                        InfKind::Inert => {
                            out.add_place(Place::Infinite(InfKind::Plus), m);
                            out.add_place(Place::Infinite(InfKind::Minus), m);
                        }
                    }
                } else {
                    out.add_place(Place::Infinite(InfKind::Inert), m);
                }
            }
            Place::Finite { u, kind } => {
                let up = u.lift_to(to.field())?;
                match kind {
                    FiniteKind::Regular { v } => {
                        let vp = v.lift_to(to.field())?;
                        for (ui, _) in up.factor() {
                            let vi = vp.rem(&ui)?;
                            out.add_place(
                                Place::finite(ui, FiniteKind::Regular { v: vi }),
                                m,
                            );
                        }
                    }
                    FiniteKind::Ramified | FiniteKind::InertQuad => {
                        for (ui, _) in up.factor() {
                            for q in to.places_above(&ui)? {
                                out.add_place(q, m);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn rejects_bad_models() {
        assert!(Curve::new(5, &[1, 1, 1]).is_err()); // degree 2
        assert!(Curve::new(5, &[0, 0, 1, 0, 1]).is_err()); // x^2(x^2+1) not squarefree
        assert!(Curve::new(4, &[1, 0, 0, 0, 1]).is_err()); // bad characteristic
        assert!(Curve::new(5, &[1, 0, 0, 0, 0, 1]).is_err()); // odd degree 5
    }

    #[test]
    fn genus_from_degree() {
        assert_eq!(Curve::new(5, &[1, 0, 0, 0, 1]).unwrap().genus(), 1);
        assert_eq!(Curve::new(7, &[3, 1, 0, 0, 0, 0, 1]).unwrap().genus(), 2);
    }

    #[test]
    fn fiber_classification_matches_square_table() {
        // f = x^4 + 1 over F_5. f(0)=1 sq, f(1)=2 non-sq, f(2)=17=2 non-sq,
        // f(3)=82=2 non-sq, f(4)=257=2 non-sq. squares mod 5: {1,4}.
        let curve = Curve::new(5, &[1, 0, 0, 0, 1]).unwrap();
        let k = FiniteField::prime(5).unwrap();
        let c = CurveCtx::new(&curve, &k).unwrap();
        let kinds: Vec<usize> = (0..5u64)
            .map(|e| c.places_above_x(&k.from_u64(e)).unwrap().len())
            .collect();
        assert_eq!(kinds, vec![2, 1, 1, 1, 1]);
        for e in 1..5u64 {
            let pls = c.places_above_x(&k.from_u64(e)).unwrap();
            assert!(matches!(
                pls[0],
                Place::Finite {
                    kind: FiniteKind::InertQuad,
                    ..
                }
            ));
        }
    }

    #[test]
    fn divisor_of_vertical_fiber() {
        let curve = Curve::new(5, &[1, 0, 0, 0, 1]).unwrap();
        let k = FiniteField::prime(5).unwrap();
        let c = CurveCtx::new(&curve, &k).unwrap();
        // div(x) = fiber over 0 minus the two infinite places
        let d = c.divisor_of(&CurveFn::x(&c)).unwrap();
        let fiber = c.fiber_divisor(&Poly::x(&k)).unwrap();
        let expected = fiber.sub(&c.inf_fiber());
        assert_eq!(d, expected);
    }

    #[test]
    fn weil_reciprocity_on_random_functions() {
        let curve = Curve::new(5, &[1, 0, 0, 0, 1]).unwrap();
        let k = FiniteField::prime(5).unwrap();
        let c = CurveCtx::new(&curve, &k).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        let mut tested = 0;
        while tested < 8 {
            let a1 = Poly::random_below(&k, 4, &mut rng);
            let b1 = Poly::random_below(&k, 2, &mut rng);
            let c1 = Poly::random_monic(&k, rng.gen_range(1..3), &mut rng);
            let a2 = Poly::random_below(&k, 3, &mut rng);
            let b2 = Poly::random_below(&k, 2, &mut rng);
            let h1 = match CurveFn::new(&c, a1, b1, c1) {
                Ok(h) if !h.is_zero() => h,
                _ => continue,
            };
            let h2 = match CurveFn::new(&c, a2, b2, Poly::one(&k)) {
                Ok(h) if !h.is_zero() => h,
                _ => continue,
            };
            let prod = c.reciprocity_product(&h1, &h2).unwrap();
            assert!(prod.is_one(), "reciprocity product was {prod}");
            tested += 1;
        }
    }

    #[test]
    fn reciprocity_over_extension_working_field() {
        let curve = Curve::new(7, &[3, 1, 0, 0, 0, 0, 1]).unwrap(); // genus 2
        let k = FiniteField::extension(7, 2).unwrap();
        let c = CurveCtx::new(&curve, &k).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..3 {
            let h1 = CurveFn::new(
                &c,
                Poly::random_below(&k, 4, &mut rng),
                Poly::random_below(&k, 1, &mut rng),
                Poly::one(&k),
            )
            .unwrap();
            let h2 = CurveFn::new(
                &c,
                Poly::random_below(&k, 3, &mut rng),
                Poly::random_below(&k, 2, &mut rng),
                Poly::random_monic(&k, 1, &mut rng),
            )
            .unwrap();
            if h1.is_zero() || h2.is_zero() {
                continue;
            }
            let prod = c.reciprocity_product(&h1, &h2).unwrap();
            assert!(prod.is_one(), "reciprocity product was {prod}");
        }
    }

    #[test]
    fn galois_action_permutes_divisor_of_rational_function() {
        // h defined over F_7, working field F_49: div(h) must be fixed by
        // the coefficientwise Frobenius.
        let curve = Curve::new(7, &[3, 1, 0, 0, 0, 0, 1]).unwrap();
        let k = FiniteField::extension(7, 2).unwrap();
        let c = CurveCtx::new(&curve, &k).unwrap();
        let h = CurveFn::new(
            &c,
            Poly::from_u64_coeffs(&k, &[1, 2, 1]),
            Poly::from_u64_coeffs(&k, &[3]),
            Poly::from_u64_coeffs(&k, &[5, 1]),
        )
        .unwrap();
        let d = c.divisor_of(&h).unwrap();
        assert_eq!(d.frobenius(), d);
    }
}
