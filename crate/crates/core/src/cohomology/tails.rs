//! `H^1(C, O(D))` as principal parts modulo global functions.
//!
//! A class is a finite collection of tails: at a place `P`, the terms of a
//! local element with valuation below `-D(P)`. Canonical forms live in a
//! window of valuations `[-(D(inf) + n), -D(inf))` at infinity, where
//! `n = max(0, 3 - deg D)` makes `D + n inf` nonspecial.

use std::collections::BTreeMap;

use crate::cohomology::rr::rr_space;
use crate::error::{Error, Result};
use crate::fields::linalg::{reduce, rref};
use crate::fields::Fe;
use crate::hyperelliptic::{Curve, Differential, Divisor, FunctionElement, Local, LocalElt, Place};

/// Coordinates of the terms with valuations `lo..hi` at one place, where
/// `hi = -D(P)` is implied by the bundle divisor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tail {
    pub lo: i64,
    pub coeffs: Vec<Fe>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailClass {
    bundle: Divisor,
    tails: BTreeMap<Place, Tail>,
}

impl TailClass {
    pub fn zero(bundle: &Divisor) -> TailClass {
        TailClass {
            bundle: bundle.clone(),
            tails: BTreeMap::new(),
        }
    }

    pub fn bundle(&self) -> &Divisor {
        &self.bundle
    }

    pub fn tails(&self) -> &BTreeMap<Place, Tail> {
        &self.tails
    }

    /// Zero as a repartition (not merely as a class).
    pub fn is_zero(&self) -> bool {
        self.tails.is_empty()
    }

    fn hi(&self, pl: &Place) -> i64 {
        -self.bundle.get(pl)
    }

    /// Inserts raw coordinates at `place`, normalizing leading zeros.
    pub fn with_tail(mut self, curve: &Curve, place: &Place, lo: i64, coeffs: Vec<Fe>) -> TailClass {
        let w = Local::new(curve, place).width();
        let hi = self.hi(place);
        assert_eq!(coeffs.len() as i64, (hi - lo).max(0) * w as i64);
        let mut lo = lo;
        let mut start = 0;
        while start < coeffs.len() && coeffs[start..start + w].iter().all(|c| c.is_zero()) {
            start += w;
            lo += 1;
        }
        if start == coeffs.len() {
            self.tails.remove(place);
        } else {
            self.tails.insert(
                place.clone(),
                Tail {
                    lo,
                    coeffs: coeffs[start..].to_vec(),
                },
            );
        }
        self
    }

    /// The tail of a local element (known at least below `-D(P)`).
    pub fn with_local(self, loc: &Local, elt: &LocalElt) -> Result<TailClass> {
        let pl = loc.place().clone();
        let hi = self.hi(&pl);
        let lo = match loc.valuation(elt) {
            Some(v) if v < hi => v,
            _ if loc.precision(elt) >= hi => return Ok(self.without(&pl)),
            _ => return Err(Error::Internal("tail known to insufficient precision".into())),
        };
        let c = loc.coords(elt, lo, hi)?;
        Ok(self.with_tail(loc.curve(), &pl, lo, c))
    }

    fn without(mut self, pl: &Place) -> TailClass {
        self.tails.remove(pl);
        self
    }

    /// The tail at `place` as an exact local element.
    pub fn local_tail(&self, loc: &Local) -> LocalElt {
        match self.tails.get(loc.place()) {
            None => loc.zero(),
            Some(t) => loc.from_coords(t.lo, self.hi(loc.place()), &t.coeffs),
        }
    }

    /// Principal parts of a global function relative to the bundle.
    pub fn coboundary(curve: &Curve, bundle: &Divisor, phi: &FunctionElement) -> Result<TailClass> {
        let mut out = TailClass::zero(bundle);
        if phi.is_zero() {
            return Ok(out);
        }
        let mut places: Vec<Place> = phi.divisor()?.support().cloned().collect();
        places.extend(bundle.support().cloned());
        places.sort();
        places.dedup();
        for pl in places {
            let hi = -bundle.get(&pl);
            if phi.valuation(&pl)? >= hi {
                continue;
            }
            let loc = Local::new(curve, &pl);
            let e = loc.expand(phi, hi)?;
            out = out.with_local(&loc, &e)?;
        }
        Ok(out)
    }

    fn check(&self, o: &TailClass) -> Result<()> {
        if self.bundle != o.bundle {
            return Err(Error::BundleMismatch);
        }
        Ok(())
    }

    pub fn add(&self, curve: &Curve, o: &TailClass) -> Result<TailClass> {
        self.check(o)?;
        let mut out = self.clone();
        for pl in o.tails.keys() {
            let loc = Local::new(curve, pl);
            let s = loc.add(&self.local_tail(&loc), &o.local_tail(&loc));
            out = out.with_local(&loc, &s)?;
        }
        Ok(out)
    }

    pub fn scale(&self, curve: &Curve, c: Fe) -> TailClass {
        let fd = curve.field();
        let mut out = TailClass::zero(&self.bundle);
        for (pl, t) in &self.tails {
            let coeffs = t.coeffs.iter().map(|&x| fd.mul(x, c)).collect();
            out = out.with_tail(curve, pl, t.lo, coeffs);
        }
        out
    }
}

/// Reduction data for `H^1(D)`.
#[derive(Clone, Debug)]
pub struct H1Space {
    curve: Curve,
    divisor: Divisor,
    win_lo: i64,
    win_hi: i64,
    win_rows: Vec<Vec<Fe>>,
    win_pivots: Vec<usize>,
    free: Vec<usize>,
}

impl H1Space {
    pub fn new(curve: &Curve, d: &Divisor) -> Result<H1Space> {
        let n = (3 - d.degree()).max(0);
        let dinf = d.get(&Place::Infinity);
        let (win_lo, win_hi) = (-(dinf + n), -dinf);
        let big = d.add(&Divisor::infinity(n));
        let space = rr_space(curve, &big)?;
        let loc = Local::new(curve, &Place::Infinity);
        let mut rows = Vec::new();
        for phi in space.basis() {
            let e = loc.expand(phi, win_hi)?;
            rows.push(loc.coords(&e, win_lo, win_hi)?);
        }
        let ncols = (win_hi - win_lo) as usize;
        let pivots = rref(curve.field(), &mut rows, ncols);
        let free = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        Ok(H1Space {
            curve: curve.clone(),
            divisor: d.clone(),
            win_lo,
            win_hi,
            win_rows: rows,
            win_pivots: pivots,
            free,
        })
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// The `i`-th canonical basis class: a single monomial tail at infinity.
    pub fn basis_class(&self, i: usize) -> TailClass {
        let fd = self.curve.field();
        let mut c = vec![Fe::ZERO; (self.win_hi - self.win_lo) as usize];
        c[self.free[i]] = fd.one();
        TailClass::zero(&self.divisor).with_tail(&self.curve, &Place::Infinity, self.win_lo, c)
    }

    pub fn basis(&self) -> Vec<TailClass> {
        (0..self.dim()).map(|i| self.basis_class(i)).collect()
    }

    /// Window coordinates of a class all of whose tails sit in the window.
    fn window_vector(&self, xi: &TailClass) -> Option<Vec<Fe>> {
        if xi.tails.keys().any(|p| !p.is_infinity()) {
            return None;
        }
        let ncols = (self.win_hi - self.win_lo) as usize;
        let mut v = vec![Fe::ZERO; ncols];
        if let Some(t) = xi.tails.get(&Place::Infinity) {
            if t.lo < self.win_lo {
                return None;
            }
            let off = (t.lo - self.win_lo) as usize;
            v[off..off + t.coeffs.len()].copy_from_slice(&t.coeffs);
        }
        Some(v)
    }

    /// Moves every tail into the window at infinity.
    fn to_window(&self, xi: &TailClass) -> Result<Vec<Fe>> {
        if let Some(v) = self.window_vector(xi) {
            return Ok(v);
        }
        let curve = &self.curve;
        let d = &self.divisor;
        // D'' allows every pole of the tails
        let mut big = d.clone();
        for (pl, t) in &xi.tails {
            if !pl.is_infinity() {
                big.add_at(pl.clone(), -t.lo - d.get(pl));
            }
        }
        let inf_lo = xi
            .tails
            .get(&Place::Infinity)
            .map_or(self.win_lo, |t| t.lo.min(self.win_lo));
        big.add_at(Place::Infinity, -inf_lo - d.get(&Place::Infinity));
        let space = rr_space(curve, &big)?;
        // column layout: finite places, then infinity by ascending valuation
        let mut layout: Vec<(Place, i64, i64)> = Vec::new();
        for pl in xi.tails.keys().filter(|p| !p.is_infinity()) {
            layout.push((pl.clone(), -big.get(pl), -d.get(pl)));
        }
        layout.push((Place::Infinity, inf_lo, self.win_hi));
        let locals: Vec<Local> = layout.iter().map(|(p, _, _)| Local::new(curve, p)).collect();
        let mut rows = Vec::new();
        for phi in space.basis() {
            let mut row = Vec::new();
            for ((_, lo, hi), loc) in layout.iter().zip(&locals) {
                let e = loc.expand(phi, *hi)?;
                row.extend(loc.coords(&e, *lo, *hi)?);
            }
            rows.push(row);
        }
        let mut target = Vec::new();
        for ((_, lo, hi), loc) in layout.iter().zip(&locals) {
            let e = xi.local_tail(loc);
            target.extend(loc.coords(&e, *lo, *hi)?);
        }
        let ncols = target.len();
        let pivots = rref(curve.field(), &mut rows, ncols);
        let red = reduce(curve.field(), &rows, &pivots, &target);
        let wlen = (self.win_hi - self.win_lo) as usize;
        if red[..ncols - wlen].iter().any(|c| !c.is_zero()) {
            return Err(Error::Internal("tail not absorbed by global functions".into()));
        }
        Ok(red[ncols - wlen..].to_vec())
    }

    /// Canonical coordinates of the class of `xi` in [`H1Space::basis`].
    pub fn coordinates(&self, xi: &TailClass) -> Result<Vec<Fe>> {
        if xi.bundle != self.divisor {
            return Err(Error::BundleMismatch);
        }
        let v = self.to_window(xi)?;
        let red = reduce(self.curve.field(), &self.win_rows, &self.win_pivots, &v);
        Ok(self.free.iter().map(|&c| red[c]).collect())
    }

    /// The canonical representative of the class of `xi`.
    pub fn canonical(&self, xi: &TailClass) -> Result<TailClass> {
        let c = self.coordinates(xi)?;
        let mut v = vec![Fe::ZERO; (self.win_hi - self.win_lo) as usize];
        for (&col, &x) in self.free.iter().zip(&c) {
            v[col] = x;
        }
        Ok(TailClass::zero(&self.divisor).with_tail(&self.curve, &Place::Infinity, self.win_lo, v))
    }
}

/// Canonical representative of a class; zero exactly for coboundaries.
pub fn tail_reduce(curve: &Curve, xi: &TailClass) -> Result<TailClass> {
    H1Space::new(curve, xi.bundle())?.canonical(xi)
}

/// `sum_P res_P(tail_P * phi dx)` where the tail is exact.
pub(crate) fn residue_against(loc: &Local, tail: &LocalElt, phi: &FunctionElement) -> Result<Fe> {
    let lo = loc.valuation(tail).unwrap_or(0);
    let mut m = loc.residue_precision() - lo + 4;
    for _ in 0..6 {
        let e = loc.expand(phi, m)?;
        match loc.residue(&loc.mul(tail, &e)) {
            Ok(r) => return Ok(r),
            Err(_) => m += 8,
        }
    }
    Err(Error::Internal("residue precision did not stabilize".into()))
}

/// Serre duality pairing `H^1(D) x H^0(K - D) -> F_q`; `omega` must satisfy
/// `div(omega) >= D`.
pub fn serre_pairing(curve: &Curve, xi: &TailClass, omega: &Differential) -> Result<Fe> {
    if omega.is_zero() {
        return Ok(Fe::ZERO);
    }
    if !omega.divisor()?.dominates(xi.bundle()) {
        return Err(Error::BundleMismatch);
    }
    let fd = curve.field();
    let mut total = Fe::ZERO;
    for pl in xi.tails().keys() {
        let loc = Local::new(curve, pl);
        let t = xi.local_tail(&loc);
        total = fd.add(total, residue_against(&loc, &t, omega.coeff())?);
    }
    Ok(total)
}
