//! Exact Riemann-Roch spaces: a deterministic basis of
//! `L(D) = { h : div(h) >= -D } + {0}` for a divisor `D` on `z^2 = f(x)`.
//!
//! Functions are written `h = (a + b z) / c` with a fixed polynomial
//! denominator `c` built from the positive affine part of `D`. The space
//! then becomes the kernel of explicit local vanishing conditions on the
//! coefficients of `a` and `b`: congruences modulo powers of `u` at finite
//! places (through a Hensel-lifted branch of `z` on split fibers) and
//! coefficient cutoffs of the Laurent expansion at infinity. The kernel is
//! extracted by reduced row echelon form, making the basis canonical for a
//! given `D`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::curve::func::CurveFn;
use crate::curve::local::branch_series;
use crate::curve::point::{Divisor, FiniteKind, InfKind, Place};
use crate::curve::CurveCtx;
use crate::ff::poly::Poly;
use crate::ff::{Elem, FiniteField};
use crate::{Error, Result};

/// Lift `v` with `v^2 = f (mod u)` to `V` with `V^2 = f (mod u^prec)` by
/// Newton iteration (`v` must be a unit mod `u`).
fn hensel_sqrt(f: &Poly, v0: &Poly, u: &Poly, prec: u64) -> Result<Poly> {
    let half = v0.field().from_u64(2).inv()?;
    let mut v = v0.clone();
    let mut cur = 1u64;
    while cur < prec {
        let next = (2 * cur).min(prec);
        let modulus = u.pow(next);
        let vinv = v.inv_mod(&modulus)?;
        let fr = f.rem(&modulus)?;
        v = (&(&v + &(&fr * &vinv).rem(&modulus)?) * &Poly::constant(half.clone())).rem(&modulus)?;
        cur = next;
    }
    Ok(v)
}

/// A homogeneous linear system over the working field, built row by row.
struct LinSys {
    field: Arc<FiniteField>,
    ncols: usize,
    rows: Vec<Vec<Elem>>,
}

impl LinSys {
    fn new(field: &Arc<FiniteField>, ncols: usize) -> LinSys {
        LinSys {
            field: field.clone(),
            ncols,
            rows: Vec::new(),
        }
    }

    fn zero_row(&self) -> Vec<Elem> {
        vec![self.field.zero(); self.ncols]
    }

    fn push(&mut self, row: Vec<Elem>) {
        debug_assert_eq!(row.len(), self.ncols);
        if row.iter().any(|e| !e.is_zero()) {
            self.rows.push(row);
        }
    }

    /// Canonical kernel basis via reduced row echelon form: one vector per
    /// free column, unit entry at that column.
    fn kernel(mut self) -> Vec<Vec<Elem>> {
        let ncols = self.ncols;
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0usize;
        for col in 0..ncols {
            let Some(pr) = (rank..self.rows.len()).find(|&r| !self.rows[r][col].is_zero()) else {
                continue;
            };
            self.rows.swap(rank, pr);
            let inv = self.rows[rank][col].inv().expect("pivot is nonzero");
            for e in self.rows[rank].iter_mut() {
                *e = &*e * &inv;
            }
            for r in 0..self.rows.len() {
                if r != rank && !self.rows[r][col].is_zero() {
                    let factor = self.rows[r][col].clone();
                    for c in col..ncols {
                        let sub = &factor * &self.rows[rank][c];
                        self.rows[r][c] = &self.rows[r][c] - &sub;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == self.rows.len() {
                break;
            }
        }
        let mut basis = Vec::new();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; ncols];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        for free in 0..ncols {
            if is_pivot[free] {
                continue;
            }
            let mut vec = vec![self.field.zero(); ncols];
            vec[free] = self.field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                vec[pc] = -&self.rows[r][free];
            }
            basis.push(vec);
        }
        basis
    }
}

/// Column bookkeeping for the coefficient vector `(a_0..a_da, b_0..b_db)`.
struct Cols {
    da: i64,
    db: i64,
}

impl Cols {
    fn ncols(&self) -> usize {
        let na = if self.da >= 0 { self.da + 1 } else { 0 };
        let nb = if self.db >= 0 { self.db + 1 } else { 0 };
        (na + nb) as usize
    }

    fn a(&self, i: i64) -> Option<usize> {
        (i >= 0 && i <= self.da).then_some(i as usize)
    }

    fn b(&self, j: i64) -> Option<usize> {
        (self.db >= 0 && j >= 0 && j <= self.db)
            .then(|| (self.da.max(-1) + 1 + j) as usize)
    }
}

/// A deterministic working-field basis of `L(D)`.
pub fn rr_space(ctx: &Arc<CurveCtx>, d: &Divisor) -> Result<Vec<CurveFn>> {
    if d.degree() < 0 {
        return Ok(Vec::new());
    }
    let k = ctx.field().clone();
    let f = ctx.f_poly().clone();
    let g1 = ctx.genus() as i64 + 1;

    // Denominator exponent per affine fiber polynomial: enough to absorb
    // every allowed pole above it (`v_P(u)` is 2 on ramified places).
    let mut exps: BTreeMap<Poly, i64> = BTreeMap::new();
    for (pl, m) in d.iter() {
        if m <= 0 {
            continue;
        }
        if let Some(u) = pl.x_poly() {
            let vp = if matches!(
                pl,
                Place::Finite {
                    kind: FiniteKind::Ramified,
                    ..
                }
            ) {
                2
            } else {
                1
            };
            let need = (m + vp - 1) / vp;
            let e = exps.entry(u.clone()).or_insert(0);
            *e = (*e).max(need);
        }
    }
    let mut c = Poly::one(&k);
    for (u, &e) in &exps {
        c = &c * &u.pow(e as u64);
    }
    let dc = c.deg_i().max(0);

    // Pole allowances at infinity and the resulting degree caps.
    let split = ctx.is_inf_split();
    let (t_plus, t_minus, t_inert);
    if split {
        t_plus = dc + d.mult(&Place::Infinite(InfKind::Plus));
        t_minus = dc + d.mult(&Place::Infinite(InfKind::Minus));
        t_inert = 0;
    } else {
        t_plus = 0;
        t_minus = 0;
        t_inert = dc + d.mult(&Place::Infinite(InfKind::Inert));
    }
    let t_max = if split { t_plus.max(t_minus) } else { t_inert };
    let cols = Cols {
        da: t_max,
        db: t_max - g1,
    };
    if cols.ncols() == 0 {
        return Ok(Vec::new());
    }
    let mut sys = LinSys::new(&k, cols.ncols());

    // Finite constraints: required order r at each place above each fiber
    // polynomial in the affine support of D or of c.
    let mut fiber_polys: Vec<Poly> = d
        .support()
        .filter_map(|pl| pl.x_poly().cloned())
        .collect();
    fiber_polys.sort();
    fiber_polys.dedup();
    for u in &fiber_polys {
        let e_u = exps.get(u).copied().unwrap_or(0);
        for pl in ctx.places_above(u)? {
            let m = d.mult(&pl);
            let (kind, deg_u) = match &pl {
                Place::Finite { kind, u } => (kind.clone(), u.deg_i()),
                Place::Infinite(_) => unreachable!("affine place"),
            };
            let vp = if matches!(kind, FiniteKind::Ramified) { 2 } else { 1 };
            let r = e_u * vp - m;
            if r <= 0 {
                continue;
            }
            match kind {
                FiniteKind::Regular { v } => {
                    let big = u.pow(r as u64);
                    let vv = hensel_sqrt(&f, &v, u, r as u64)?;
                    let nrows = (r * deg_u) as usize;
                    // coefficient tables of x^i and x^j * V modulo u^r
                    let x = Poly::x(&k);
                    let mut xa = Poly::one(&k);
                    let mut rows = vec![sys.zero_row(); nrows];
                    for i in 0..=cols.da {
                        if let Some(col) = cols.a(i) {
                            for (pos, row) in rows.iter_mut().enumerate() {
                                row[col] = xa.coeff(pos);
                            }
                        }
                        xa = (&xa * &x).rem(&big)?;
                    }
                    let mut xv = vv.rem(&big)?;
                    for j in 0..=cols.db {
                        if let Some(col) = cols.b(j) {
                            for (pos, row) in rows.iter_mut().enumerate() {
                                row[col] = xv.coeff(pos);
                            }
                        }
                        xv = (&xv * &x).rem(&big)?;
                    }
                    for row in rows {
                        sys.push(row);
                    }
                }
                FiniteKind::InertQuad => {
                    push_divisibility(&mut sys, &cols, u, r, true)?;
                    push_divisibility(&mut sys, &cols, u, r, false)?;
                }
                FiniteKind::Ramified => {
                    let sa = (r + 1) / 2;
                    let sb = r / 2;
                    if sa > 0 {
                        push_divisibility(&mut sys, &cols, u, sa, true)?;
                    }
                    if sb > 0 {
                        push_divisibility(&mut sys, &cols, u, sb, false)?;
                    }
                }
            }
        }
    }

    // Constraints at infinity: kill Laurent coefficients of x^e above the
    // allowance on each branch. z = sqrt(lc) x^(g+1) T(1/x) on the plus
    // branch; on an inert fiber the two components are independent.
    let branch_ts: Vec<(i64, Option<bool>)> = if split {
        vec![(t_plus, Some(true)), (t_minus, Some(false))]
    } else {
        vec![(t_inert, None)]
    };
    let e_min = branch_ts.iter().map(|&(t, _)| t).min().unwrap() + 1;
    let series_len = (cols.db + g1 - e_min + 1).max(1) as usize;
    let tser = if cols.db >= 0 {
        branch_series(ctx, series_len)
    } else {
        Vec::new()
    };
    let slc = ctx.sqrt_lc();
    for (t_br, branch) in branch_ts {
        for e in (t_br + 1)..=t_max {
            match branch {
                Some(plus) => {
                    let mut row = sys.zero_row();
                    if let Some(col) = cols.a(e) {
                        row[col] = k.one();
                    }
                    let s = slc.clone().expect("split infinity has sqrt(lc)");
                    let sgn = if plus { s } else { -&s };
                    for j in 0..=cols.db {
                        let l = j + g1 - e;
                        if l < 0 {
                            continue;
                        }
                        if let Some(col) = cols.b(j) {
                            row[col] = &sgn * &tser[l as usize];
                        }
                    }
                    sys.push(row);
                }
                None => {
                    let mut row_a = sys.zero_row();
                    if let Some(col) = cols.a(e) {
                        row_a[col] = k.one();
                    }
                    sys.push(row_a);
                    let mut row_b = sys.zero_row();
                    for j in 0..=cols.db {
                        let l = j + g1 - e;
                        if l < 0 {
                            continue;
                        }
                        if let Some(col) = cols.b(j) {
                            row_b[col] = tser[l as usize].clone();
                        }
                    }
                    sys.push(row_b);
                }
            }
        }
    }

    let kernel = sys.kernel();
    let mut basis = Vec::with_capacity(kernel.len());
    for vec in kernel {
        let mut ac = Vec::new();
        for i in 0..=cols.da {
            ac.push(vec[cols.a(i).unwrap()].clone());
        }
        let a = Poly::from_elems(&k, ac);
        let b = if cols.db >= 0 {
            let mut bc = Vec::new();
            for j in 0..=cols.db {
                bc.push(vec[cols.b(j).unwrap()].clone());
            }
            Poly::from_elems(&k, bc)
        } else {
            Poly::zero(&k)
        };
        basis.push(CurveFn::new(ctx, a, b, c.clone())?);
    }
    Ok(basis)
}

/// Rows demanding `u^r | a` (or `| b`).
fn push_divisibility(sys: &mut LinSys, cols: &Cols, u: &Poly, r: i64, on_a: bool) -> Result<()> {
    let k = u.field().clone();
    let big = u.pow(r as u64);
    let nrows = big.deg_i() as usize;
    let hi = if on_a { cols.da } else { cols.db };
    if hi < 0 {
        return Ok(());
    }
    let x = Poly::x(&k);
    let mut xp = Poly::one(&k);
    let mut rows = vec![sys.zero_row(); nrows];
    for i in 0..=hi {
        let col = if on_a { cols.a(i) } else { cols.b(i) };
        if let Some(col) = col {
            for (pos, row) in rows.iter_mut().enumerate() {
                row[col] = xp.coeff(pos);
            }
        }
        xp = (&xp * &x).rem(&big)?;
    }
    for row in rows {
        sys.push(row);
    }
    Ok(())
}

/// Dimension of `L(D)`.
pub fn rr_dim(ctx: &Arc<CurveCtx>, d: &Divisor) -> Result<usize> {
    Ok(rr_space(ctx, d)?.len())
}

/// For a degree-0 divisor `E`, a function with `div(h) = E` if one exists.
/// The witness is canonical for a given `E` up to the deterministic kernel
/// normalization.
pub fn principal_witness(ctx: &Arc<CurveCtx>, e: &Divisor) -> Result<Option<CurveFn>> {
    if e.degree() != 0 {
        return Err(Error::DegreeMismatch(format!(
            "principality asks degree 0, got {}",
            e.degree()
        )));
    }
    let space = rr_space(ctx, &e.neg())?;
    match space.len() {
        0 => Ok(None),
        1 => {
            let h = space.into_iter().next().unwrap();
            debug_assert_eq!(&ctx.divisor_of(&h)?, e, "witness divisor mismatch");
            Ok(Some(h))
        }
        n => Err(Error::ContextMismatch(format!(
            "degree-0 space of dimension {n}"
        ))),
    }
}
