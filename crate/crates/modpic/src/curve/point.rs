//! Closed points (places) of the curve's function field over a working
//! field, and divisors as finitely supported integer combinations.
//!
//! A finite place sits over a monic irreducible polynomial `u(x)` of the
//! working field `K`. Its fiber structure relative to `z^2 = f(x)` is one
//! of three kinds: the fiber splits (two places, each recording the branch
//! `z = v(x) mod u`), ramifies (`u | f`, a single place with uniformizer
//! `z`), or stays inert (`z^2 - f` irreducible over `K[T]/u`, a single
//! place with quadratic residue extension). The two points above `x =
//! infinity` are tagged by the branch of `z / x^(g+1)`, or form one
//! quadratic place when the leading coefficient of `f` is a non-square.

use std::collections::BTreeMap;
use std::fmt;

use crate::ff::poly::Poly;

/// Fiber structure of a finite place over its `x`-polynomial.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FiniteKind {
    /// Split fiber: `z = v(x) mod u` on this branch (`v^2 = f mod u`,
    /// `deg v < deg u`, `v != 0`). The conjugate place carries `-v`.
    Regular { v: Poly },
    /// `u | f`: ramification point(s), `z` is a uniformizer; conjugation
    /// fixes the place.
    Ramified,
    /// `z^2 - f mod u` irreducible: one place of degree `2 deg u`;
    /// conjugation fixes the place.
    InertQuad,
}

/// Branch data at `x = infinity`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum InfKind {
    /// `z / x^(g+1)` tends to the canonical square root of `lc(f)`.
    Plus,
    /// `z / x^(g+1)` tends to minus the canonical square root.
    Minus,
    /// `lc(f)` is a non-square in the working field: a single place of
    /// degree 2 with residue field `K(sqrt(lc))`.
    Inert,
}

/// A closed point of the curve over the working field.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite { u: Poly, kind: FiniteKind },
    Infinite(InfKind),
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite { u, kind } => match kind {
                FiniteKind::Regular { v } => write!(f, "({u}, z={v})"),
                FiniteKind::Ramified => write!(f, "({u}, ram)"),
                FiniteKind::InertQuad => write!(f, "({u}, inert)"),
            },
            Place::Infinite(InfKind::Plus) => write!(f, "inf+"),
            Place::Infinite(InfKind::Minus) => write!(f, "inf-"),
            Place::Infinite(InfKind::Inert) => write!(f, "inf(2)"),
        }
    }
}

impl Place {
    pub fn finite(u: Poly, kind: FiniteKind) -> Place {
        debug_assert!(u.is_monic());
        Place::Finite { u, kind }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinite(_))
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    /// Degree of the residue field over the working field.
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite { u, kind } => {
                let d = u.degree().expect("nonconstant");
                match kind {
                    FiniteKind::Regular { .. } | FiniteKind::Ramified => d,
                    FiniteKind::InertQuad => 2 * d,
                }
            }
            Place::Infinite(InfKind::Plus) | Place::Infinite(InfKind::Minus) => 1,
            Place::Infinite(InfKind::Inert) => 2,
        }
    }

    /// The monic `x`-polynomial under a finite place.
    pub fn x_poly(&self) -> Option<&Poly> {
        match self {
            Place::Finite { u, .. } => Some(u),
            Place::Infinite(_) => None,
        }
    }

    /// Image under the hyperelliptic involution `z -> -z`.
    pub fn conj(&self) -> Place {
        match self {
            Place::Finite { u, kind } => {
                let kind = match kind {
                    FiniteKind::Regular { v } => FiniteKind::Regular { v: -v },
                    other => other.clone(),
                };
                Place::Finite { u: u.clone(), kind }
            }
            Place::Infinite(InfKind::Plus) => Place::Infinite(InfKind::Minus),
            Place::Infinite(InfKind::Minus) => Place::Infinite(InfKind::Plus),
            Place::Infinite(InfKind::Inert) => Place::Infinite(InfKind::Inert),
        }
    }

    /// Coefficientwise Frobenius of the working field; permutes the places
    /// over any subfield-rational configuration.
    pub fn frobenius(&self) -> Place {
        match self {
            Place::Finite { u, kind } => {
                let uf = u.map_coeffs(|e| e.frobenius());
                let kind = match kind {
                    FiniteKind::Regular { v } => FiniteKind::Regular {
                        v: v.map_coeffs(|e| e.frobenius()),
                    },
                    other => other.clone(),
                };
                Place::Finite { u: uf, kind }
            }
            inf => inf.clone(),
        }
    }

    /// Is the place fixed by the hyperelliptic involution?
    pub fn is_branch(&self) -> bool {
        matches!(
            self,
            Place::Finite {
                kind: FiniteKind::Ramified,
                ..
            }
        )
    }
}

/// A divisor: finite formal sum of places with integer multiplicities.
/// The map never stores zero multiplicities.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Divisor {
    m: BTreeMap<Place, i64>,
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (pl, &n) in &self.m {
            if !first {
                write!(f, " ")?;
            }
            if n >= 0 && !first {
                write!(f, "+ ")?;
            } else if n < 0 {
                write!(f, "- ")?;
            }
            let a = n.abs();
            if a != 1 {
                write!(f, "{a}*")?;
            }
            write!(f, "{pl:?}")?;
            first = false;
        }
        Ok(())
    }
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn of_place(p: Place, n: i64) -> Divisor {
        let mut d = Divisor::zero();
        d.add_place(p, n);
        d
    }

    pub fn add_place(&mut self, p: Place, n: i64) {
        if n == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.m.entry(p) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += n;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(n);
            }
        }
    }

    pub fn mult(&self, p: &Place) -> i64 {
        self.m.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.m.iter().map(|(p, &n)| (p, n))
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.m.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.m.values().all(|&n| n >= 0)
    }

    /// Total degree: sum of multiplicities weighted by place degrees.
    pub fn degree(&self) -> i64 {
        self.m
            .iter()
            .map(|(p, &n)| n * p.degree() as i64)
            .sum()
    }

    pub fn neg(&self) -> Divisor {
        Divisor {
            m: self.m.iter().map(|(p, &n)| (p.clone(), -n)).collect(),
        }
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, n) in other.iter() {
            out.add_place(p.clone(), n);
        }
        out
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Divisor {
        if k == 0 {
            return Divisor::zero();
        }
        Divisor {
            m: self.m.iter().map(|(p, &n)| (p.clone(), k * n)).collect(),
        }
    }

    /// Positive part (places with positive multiplicity).
    pub fn pos_part(&self) -> Divisor {
        Divisor {
            m: self
                .m
                .iter()
                .filter(|(_, &n)| n > 0)
                .map(|(p, &n)| (p.clone(), n))
                .collect(),
        }
    }

    /// Negative part, returned with positive multiplicities
    /// (`self = pos_part - neg_part`).
    pub fn neg_part(&self) -> Divisor {
        Divisor {
            m: self
                .m
                .iter()
                .filter(|(_, &n)| n < 0)
                .map(|(p, &n)| (p.clone(), -n))
                .collect(),
        }
    }

    pub fn affine_part(&self) -> Divisor {
        Divisor {
            m: self
                .m
                .iter()
                .filter(|(p, _)| p.is_finite())
                .map(|(p, &n)| (p.clone(), n))
                .collect(),
        }
    }

    pub fn infinite_part(&self) -> Divisor {
        Divisor {
            m: self
                .m
                .iter()
                .filter(|(p, _)| p.is_infinite())
                .map(|(p, &n)| (p.clone(), n))
                .collect(),
        }
    }

    pub fn conj(&self) -> Divisor {
        Divisor {
            m: self.m.iter().map(|(p, &n)| (p.conj(), n)).collect(),
        }
    }

    pub fn frobenius(&self) -> Divisor {
        Divisor {
            m: self.m.iter().map(|(p, &n)| (p.frobenius(), n)).collect(),
        }
    }

    /// Do the supports of the two divisors share a place?
    pub fn shares_support(&self, other: &Divisor) -> bool {
        self.m.keys().any(|p| other.m.contains_key(p))
    }

    /// Do the supports share an `x`-fiber (same `u`, any kind) or an
    /// infinite place? This is the right disjointness notion when one side
    /// is a full fiber divisor.
    pub fn shares_fiber(&self, other: &Divisor) -> bool {
        for p in self.m.keys() {
            for q in other.m.keys() {
                match (p, q) {
                    (Place::Finite { u: u1, .. }, Place::Finite { u: u2, .. }) => {
                        if u1 == u2 {
                            return true;
                        }
                    }
                    (Place::Infinite(_), Place::Infinite(_)) => return true,
                    _ => {}
                }
            }
        }
        false
    }

    /// Largest `n` with `n * p <= self` place-wise... i.e. the minimum of
    /// `self` over the listed places (used for fiber clearing).
    pub fn min_mult_over<'a>(&self, places: impl Iterator<Item = &'a Place>) -> i64 {
        places.map(|p| self.mult(p)).min().unwrap_or(0)
    }
}

impl std::ops::Add<&Divisor> for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        Divisor::add(self, rhs)
    }
}

impl std::ops::Sub<&Divisor> for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        Divisor::sub(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FiniteField;

    #[test]
    fn divisor_bookkeeping() {
        let k = FiniteField::prime(5).unwrap();
        let u1 = Poly::from_u64_coeffs(&k, &[1, 1]);
        let u2 = Poly::from_u64_coeffs(&k, &[2, 1]);
        let p1 = Place::finite(u1, FiniteKind::Ramified);
        let p2 = Place::finite(u2.clone(), FiniteKind::InertQuad);
        let mut d = Divisor::zero();
        d.add_place(p1.clone(), 2);
        d.add_place(p2.clone(), -1);
        d.add_place(Place::Infinite(InfKind::Plus), 3);
        assert_eq!(d.degree(), 2 - 2 + 3);
        assert_eq!(d.mult(&p1), 2);
        d.add_place(p1.clone(), -2);
        assert_eq!(d.mult(&p1), 0);
        assert_eq!(d.support().count(), 2);
        let e = d.add(&d.neg());
        assert!(e.is_zero());
    }

    #[test]
    fn conjugation_involutes() {
        let k = FiniteField::prime(7).unwrap();
        let u = Poly::from_u64_coeffs(&k, &[3, 1]);
        let v = Poly::from_u64_coeffs(&k, &[2]);
        let p = Place::finite(u, FiniteKind::Regular { v });
        assert_ne!(p.conj(), p);
        assert_eq!(p.conj().conj(), p);
        let inf = Place::Infinite(InfKind::Plus);
        assert_eq!(inf.conj(), Place::Infinite(InfKind::Minus));
        assert_eq!(inf.conj().conj(), inf);
        assert_eq!(
            Place::Infinite(InfKind::Inert).conj(),
            Place::Infinite(InfKind::Inert)
        );
    }

    #[test]
    fn place_degrees() {
        let k = FiniteField::prime(5).unwrap();
        let u = Poly::from_u64_coeffs(&k, &[2, 0, 1]); // quadratic
        assert_eq!(
            Place::finite(u.clone(), FiniteKind::Ramified).degree(),
            2
        );
        assert_eq!(
            Place::finite(u, FiniteKind::InertQuad).degree(),
            4
        );
        assert_eq!(Place::Infinite(InfKind::Inert).degree(), 2);
        assert_eq!(Place::Infinite(InfKind::Plus).degree(), 1);
    }
}
