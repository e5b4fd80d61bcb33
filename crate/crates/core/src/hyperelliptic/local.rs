//! Local expansions at a place, computed with `u`-adic series over `F_q`.
//!
//! Over a finite place with polynomial `u`, series are `sum r_j u^j` with
//! digits `r_j` of degree `< deg u`; at infinity the base parameter is
//! `w = 1/x`. A split place embeds `y` as a Hensel lift `V` of `v`, so local
//! elements are single series. Elsewhere an element is a pair `(a, b)`
//! standing for `a + b y`.
//!
//! Coordinates are indexed by valuation. Each valuation carries exactly
//! `deg P` coordinates over `F_q`: a digit at split, ramified places and
//! infinity (`a` digits on even valuations, `b` digits on odd ones), and a
//! digit of `a` followed by a digit of `b` at inert places.

use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::fields::{Fe, Poly, RationalFunction};
use crate::hyperelliptic::curve::{Curve, Place, PlaceKind};
use crate::hyperelliptic::function::FunctionElement;

/// Precision marker for exactly known series.
pub const EXACT: i64 = i64::MAX / 4;

fn is_exact(p: i64) -> bool {
    p >= EXACT / 8
}

fn norm_prec(p: i64) -> i64 {
    if is_exact(p) {
        EXACT
    } else {
        p
    }
}

fn ceil_div(a: i64, e: i64) -> i64 {
    if is_exact(a) {
        return EXACT;
    }
    -((-a).div_euclid(e))
}

/// `u^start * body + O(u^prec)`.
#[derive(Clone, Debug)]
pub struct Adic {
    pub start: i64,
    pub body: Poly,
    pub prec: i64,
}

impl Adic {
    pub fn is_exact(&self) -> bool {
        is_exact(self.prec)
    }

    fn is_exact_zero(&self) -> bool {
        self.body.is_zero() && self.is_exact()
    }
}

#[derive(Clone, Debug)]
pub enum LocalElt {
    Single(Adic),
    Pair(Adic, Adic),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Mode {
    Split,
    Inert,
    Ramified,
    Infinity,
}

pub struct Local {
    curve: Curve,
    place: Place,
    u: Poly,
    d: usize,
    mode: Mode,
    pows: Mutex<Vec<Poly>>,
    lift: Mutex<(i64, Poly)>,
}

impl Local {
    pub fn new(curve: &Curve, place: &Place) -> Local {
        let fd = curve.field();
        let (u, mode, v) = match place {
            Place::Infinity => (Poly::x(fd), Mode::Infinity, Poly::zero(fd)),
            Place::Finite { u, kind } => match kind {
                PlaceKind::Split { v } => (u.clone(), Mode::Split, v.clone()),
                PlaceKind::Inert => (u.clone(), Mode::Inert, Poly::zero(fd)),
                PlaceKind::Ramified => (u.clone(), Mode::Ramified, Poly::zero(fd)),
            },
        };
        let d = u.degree().unwrap();
        Local {
            curve: curve.clone(),
            place: place.clone(),
            pows: Mutex::new(vec![Poly::one(fd), u.clone()]),
            lift: Mutex::new((1, v)),
            u,
            d,
            mode,
        }
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    /// Number of `F_q` coordinates per valuation step, equal to `deg P`.
    pub fn width(&self) -> usize {
        if self.mode == Mode::Inert {
            2 * self.d
        } else {
            self.d
        }
    }

    fn e(&self) -> i64 {
        match self.mode {
            Mode::Split | Mode::Inert => 1,
            _ => 2,
        }
    }

    /// Valuation of `y`.
    fn yv(&self) -> i64 {
        match self.mode {
            Mode::Ramified => 1,
            Mode::Infinity => -5,
            _ => 0,
        }
    }

    fn upow(&self, n: i64) -> Poly {
        assert!(n >= 0);
        let n = n as usize;
        let mut pows = self.pows.lock().unwrap();
        while pows.len() <= n {
            let next = pows.last().unwrap() * &self.u;
            pows.push(next);
        }
        pows[n].clone()
    }

    fn mk(&self, start: i64, body: Poly, prec: i64) -> Adic {
        let prec = norm_prec(prec);
        if is_exact(prec) {
            return Adic { start, body, prec };
        }
        let rel = prec - start;
        if rel <= 0 {
            return Adic {
                start: prec,
                body: Poly::zero(body.field()),
                prec,
            };
        }
        let body = if body.deg() < rel * self.d as i64 {
            body
        } else {
            body.rem(&self.upow(rel))
        };
        Adic { start, body, prec }
    }

    fn exact_zero(&self) -> Adic {
        Adic {
            start: 0,
            body: Poly::zero(self.curve.field()),
            prec: EXACT,
        }
    }

    /// A polynomial in `x` as an exact series.
    pub fn adic_poly(&self, p: &Poly) -> Adic {
        if p.is_zero() {
            return self.exact_zero();
        }
        match self.mode {
            Mode::Infinity => {
                let n = p.deg();
                Adic {
                    start: -n,
                    body: p.reverse(n as usize),
                    prec: EXACT,
                }
            }
            _ => Adic {
                start: 0,
                body: p.clone(),
                prec: EXACT,
            },
        }
    }

    /// A rational function of `x` to absolute precision `prec`.
    pub fn adic_rational(&self, r: &RationalFunction, prec: i64) -> Adic {
        if r.is_polynomial() {
            return self.adic_poly(r.num());
        }
        let (num, den) = (r.num(), r.den());
        match self.mode {
            Mode::Infinity => {
                let start = den.deg() - num.deg();
                let rel = prec - start;
                if rel <= 0 {
                    return self.mk(start, Poly::zero(num.field()), prec);
                }
                let m = self.upow(rel);
                let rn = num.reverse(num.deg() as usize);
                let rd = den.reverse(den.deg() as usize);
                let inv = rd.inv_mod(&m).unwrap();
                self.mk(start, rn.mul_mod(&inv, &m), prec)
            }
            _ => {
                let k = den.ord(&self.u) as i64;
                let dd = den.div_exact(&self.upow(k)).unwrap();
                let rel = prec + k;
                if rel <= 0 {
                    return self.mk(-k, Poly::zero(num.field()), prec);
                }
                let m = self.upow(rel);
                let inv = dd.inv_mod(&m).unwrap();
                self.mk(-k, num.mul_mod(&inv, &m), prec)
            }
        }
    }

    pub fn adic_add(&self, a: &Adic, b: &Adic) -> Adic {
        if a.is_exact_zero() {
            return b.clone();
        }
        if b.is_exact_zero() {
            return a.clone();
        }
        let s = a.start.min(b.start);
        let body = &(&a.body * &self.upow(a.start - s)) + &(&b.body * &self.upow(b.start - s));
        self.mk(s, body, a.prec.min(b.prec))
    }

    pub fn adic_scale(&self, a: &Adic, c: Fe) -> Adic {
        Adic {
            start: a.start,
            body: a.body.scale(c),
            prec: a.prec,
        }
    }

    pub fn adic_neg(&self, a: &Adic) -> Adic {
        Adic {
            start: a.start,
            body: -&a.body,
            prec: a.prec,
        }
    }

    pub fn adic_mul(&self, a: &Adic, b: &Adic) -> Adic {
        if a.is_exact_zero() || b.is_exact_zero() {
            return self.exact_zero();
        }
        let prec = (a.start.saturating_add(b.prec)).min(b.start.saturating_add(a.prec));
        self.mk(a.start + b.start, &a.body * &b.body, prec)
    }

    /// Digits with absolute indices in `lo..hi`.
    pub fn adic_digits(&self, a: &Adic, lo: i64, hi: i64) -> Result<Vec<Poly>> {
        if hi > a.prec {
            return Err(Error::Internal(format!(
                "series known to index {} but digit {} requested",
                a.prec,
                hi - 1
            )));
        }
        let fd = self.curve.field();
        let mut out = Vec::new();
        if hi <= lo {
            return Ok(out);
        }
        let first = lo.max(a.start);
        for _ in lo..first.min(hi) {
            out.push(Poly::zero(fd));
        }
        if first >= hi {
            return Ok(out);
        }
        let mut cur = a.body.divrem(&self.upow(first - a.start)).0;
        for _ in first..hi {
            if cur.is_zero() {
                out.push(Poly::zero(fd));
                continue;
            }
            let (q, r) = cur.divrem(&self.u);
            out.push(r);
            cur = q;
        }
        Ok(out)
    }

    /// Index of the first nonzero digit, if one is known.
    pub fn adic_ord(&self, a: &Adic) -> Option<i64> {
        if a.body.is_zero() {
            return None;
        }
        let k = a.start + a.body.ord(&self.u) as i64;
        (k < a.prec).then_some(k)
    }

    /// Exact series keeping the digits with index `< hi`.
    pub fn adic_truncate(&self, a: &Adic, hi: i64) -> Result<Adic> {
        if hi > a.prec {
            return Err(Error::Internal("truncation beyond known precision".into()));
        }
        if hi <= a.start || a.body.is_zero() {
            return Ok(self.exact_zero());
        }
        Ok(Adic {
            start: a.start,
            body: a.body.rem(&self.upow(hi - a.start)),
            prec: EXACT,
        })
    }

    fn adic_from_digits(&self, lo: i64, digits: &[Poly]) -> Adic {
        let fd = self.curve.field();
        let mut body = Poly::zero(fd);
        for dg in digits.iter().rev() {
            body = &(&body * &self.u) + dg;
        }
        Adic {
            start: lo,
            body,
            prec: EXACT,
        }
    }

    /// Hensel lift of `v` modulo `u^n`.
    fn lift(&self, n: i64) -> Poly {
        let mut guard = self.lift.lock().unwrap();
        while guard.0 < n {
            let k = 2 * guard.0;
            let m = self.upow(k);
            let v = &guard.1;
            let err = &(v * v) - self.curve.f();
            let inv = v.scale(self.curve.field().from_int(2)).inv_mod(&m).unwrap();
            let nv = (v - &err.mul_mod(&inv, &m)).rem(&m);
            *guard = (k, nv);
        }
        guard.1.rem(&self.upow(n))
    }

    /// `a + b V mod u^n` at a split place.
    pub fn split_image(&self, a: &Poly, b: &Poly, n: i64) -> Adic {
        assert_eq!(self.mode, Mode::Split);
        let m = self.upow(n);
        let body = (a + &b.mul_mod(&self.lift(n), &m)).rem(&m);
        self.mk(0, body, n)
    }

    fn f_adic(&self) -> Adic {
        self.adic_poly(self.curve.f())
    }

    /// Expansion of `phi` correct in all valuations below `m`.
    pub fn expand(&self, phi: &FunctionElement, m: i64) -> Result<LocalElt> {
        if phi.curve() != &self.curve {
            return Err(Error::CurveMismatch);
        }
        Ok(match self.mode {
            Mode::Split => {
                let a = self.adic_rational(phi.a(), m);
                let b = self.adic_rational(phi.b(), m);
                if b.is_exact_zero() {
                    return Ok(LocalElt::Single(a));
                }
                let n = (m - b.start).max(1);
                let v = self.mk(0, self.lift(n), n);
                LocalElt::Single(self.adic_add(&a, &self.adic_mul(&b, &v)))
            }
            _ => {
                let (e, yv) = (self.e(), self.yv());
                LocalElt::Pair(
                    self.adic_rational(phi.a(), ceil_div(m, e)),
                    self.adic_rational(phi.b(), ceil_div(m - yv, e)),
                )
            }
        })
    }

    /// Expansion of the polynomial element `a + b y`, exact except at split
    /// places where it is known below valuation `m`.
    pub fn expand_polys(&self, a: &Poly, b: &Poly, m: i64) -> LocalElt {
        match self.mode {
            Mode::Split => LocalElt::Single(self.split_image(a, b, m.max(1))),
            _ => LocalElt::Pair(self.adic_poly(a), self.adic_poly(b)),
        }
    }

    pub fn zero(&self) -> LocalElt {
        match self.mode {
            Mode::Split => LocalElt::Single(self.exact_zero()),
            _ => LocalElt::Pair(self.exact_zero(), self.exact_zero()),
        }
    }

    pub fn add(&self, x: &LocalElt, y: &LocalElt) -> LocalElt {
        match (x, y) {
            (LocalElt::Single(a), LocalElt::Single(b)) => LocalElt::Single(self.adic_add(a, b)),
            (LocalElt::Pair(a1, b1), LocalElt::Pair(a2, b2)) => {
                LocalElt::Pair(self.adic_add(a1, a2), self.adic_add(b1, b2))
            }
            _ => panic!("local elements of different shapes"),
        }
    }

    pub fn neg(&self, x: &LocalElt) -> LocalElt {
        match x {
            LocalElt::Single(a) => LocalElt::Single(self.adic_neg(a)),
            LocalElt::Pair(a, b) => LocalElt::Pair(self.adic_neg(a), self.adic_neg(b)),
        }
    }

    pub fn sub(&self, x: &LocalElt, y: &LocalElt) -> LocalElt {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, x: &LocalElt, c: Fe) -> LocalElt {
        match x {
            LocalElt::Single(a) => LocalElt::Single(self.adic_scale(a, c)),
            LocalElt::Pair(a, b) => LocalElt::Pair(self.adic_scale(a, c), self.adic_scale(b, c)),
        }
    }

    pub fn mul(&self, x: &LocalElt, y: &LocalElt) -> LocalElt {
        match (x, y) {
            (LocalElt::Single(a), LocalElt::Single(b)) => LocalElt::Single(self.adic_mul(a, b)),
            (LocalElt::Pair(a1, b1), LocalElt::Pair(a2, b2)) => {
                let bb = self.adic_mul(&self.adic_mul(b1, b2), &self.f_adic());
                LocalElt::Pair(
                    self.adic_add(&self.adic_mul(a1, a2), &bb),
                    self.adic_add(&self.adic_mul(a1, b2), &self.adic_mul(a2, b1)),
                )
            }
            _ => panic!("local elements of different shapes"),
        }
    }

    pub fn pow(&self, x: &LocalElt, mut n: u64) -> LocalElt {
        let mut acc: Option<LocalElt> = None;
        let mut base = x.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => self.mul(&a, &base),
                });
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc.unwrap_or_else(|| {
            let one = FunctionElement::one(&self.curve);
            self.expand(&one, EXACT).unwrap()
        })
    }

    /// Valuation below which the element is known.
    pub fn precision(&self, x: &LocalElt) -> i64 {
        match x {
            LocalElt::Single(a) => a.prec,
            LocalElt::Pair(a, b) => {
                let (e, yv) = (self.e(), self.yv());
                norm_prec((e.saturating_mul(a.prec)).min(e.saturating_mul(b.prec).saturating_add(yv)))
            }
        }
    }

    /// Lowest valuation of a nonzero term, when it lies below the precision.
    pub fn valuation(&self, x: &LocalElt) -> Option<i64> {
        let v = match x {
            LocalElt::Single(a) => self.adic_ord(a)?,
            LocalElt::Pair(a, b) => {
                let (e, yv) = (self.e(), self.yv());
                let va = self.adic_ord(a).map(|k| e * k);
                let vb = self.adic_ord(b).map(|k| e * k + yv);
                match (va, vb) {
                    (None, None) => return None,
                    (Some(x), None) | (None, Some(x)) => x,
                    (Some(x), Some(y)) => x.min(y),
                }
            }
        };
        (v < self.precision(x)).then_some(v)
    }

    /// The `F_q` coordinates of the terms with valuation in `lo..hi`.
    pub fn coords(&self, x: &LocalElt, lo: i64, hi: i64) -> Result<Vec<Fe>> {
        let d = self.d;
        let mut out = Vec::with_capacity(((hi - lo).max(0) as usize) * self.width());
        if hi <= lo {
            return Ok(out);
        }
        let push = |out: &mut Vec<Fe>, p: &Poly| out.extend((0..d).map(|i| p.coeff(i)));
        match (self.mode, x) {
            (Mode::Split, LocalElt::Single(a)) => {
                for dg in self.adic_digits(a, lo, hi)? {
                    push(&mut out, &dg);
                }
            }
            (Mode::Inert, LocalElt::Pair(a, b)) => {
                let da = self.adic_digits(a, lo, hi)?;
                let db = self.adic_digits(b, lo, hi)?;
                for (x, y) in da.iter().zip(&db) {
                    push(&mut out, x);
                    push(&mut out, y);
                }
            }
            (_, LocalElt::Pair(a, b)) => {
                let yv = self.yv();
                let (alo, ahi) = (ceil_div(lo, 2), ceil_div(hi, 2));
                let (blo, bhi) = (ceil_div(lo - yv, 2), ceil_div(hi - yv, 2));
                let da = self.adic_digits(a, alo, ahi)?;
                let db = self.adic_digits(b, blo, bhi)?;
                for v in lo..hi {
                    if v.rem_euclid(2) == 0 {
                        push(&mut out, &da[(v / 2 - alo) as usize]);
                    } else {
                        push(&mut out, &db[((v - yv) / 2 - blo) as usize]);
                    }
                }
            }
            _ => panic!("local element does not match the place"),
        }
        Ok(out)
    }

    /// The exact element whose coordinates in `lo..hi` are `c`.
    pub fn from_coords(&self, lo: i64, hi: i64, c: &[Fe]) -> LocalElt {
        let fd = self.curve.field();
        let d = self.d;
        assert_eq!(c.len(), ((hi - lo).max(0) as usize) * self.width());
        let digit = |k: usize| Poly::from_coeffs(fd, c[k * d..(k + 1) * d].to_vec());
        match self.mode {
            Mode::Split => {
                let ds: Vec<Poly> = (0..(hi - lo) as usize).map(digit).collect();
                LocalElt::Single(self.adic_from_digits(lo, &ds))
            }
            Mode::Inert => {
                let n = (hi - lo).max(0) as usize;
                let da: Vec<Poly> = (0..n).map(|i| digit(2 * i)).collect();
                let db: Vec<Poly> = (0..n).map(|i| digit(2 * i + 1)).collect();
                LocalElt::Pair(self.adic_from_digits(lo, &da), self.adic_from_digits(lo, &db))
            }
            _ => {
                let yv = self.yv();
                let (alo, ahi) = (ceil_div(lo, 2), ceil_div(hi, 2));
                let (blo, bhi) = (ceil_div(lo - yv, 2), ceil_div(hi - yv, 2));
                let mut da = vec![Poly::zero(fd); (ahi - alo).max(0) as usize];
                let mut db = vec![Poly::zero(fd); (bhi - blo).max(0) as usize];
                for (k, v) in (lo..hi).enumerate() {
                    if v.rem_euclid(2) == 0 {
                        da[(v / 2 - alo) as usize] = digit(k);
                    } else {
                        db[((v - yv) / 2 - blo) as usize] = digit(k);
                    }
                }
                LocalElt::Pair(self.adic_from_digits(alo, &da), self.adic_from_digits(blo, &db))
            }
        }
    }

    /// Exact element made of the terms with valuation `< hi`.
    pub fn truncate(&self, x: &LocalElt, hi: i64) -> Result<LocalElt> {
        Ok(match x {
            LocalElt::Single(a) => LocalElt::Single(self.adic_truncate(a, hi)?),
            LocalElt::Pair(a, b) => {
                let (e, yv) = (self.e(), self.yv());
                LocalElt::Pair(
                    self.adic_truncate(a, ceil_div(hi, e))?,
                    self.adic_truncate(b, ceil_div(hi - yv, e))?,
                )
            }
        })
    }

    /// An expansion precision sufficient for [`Local::residue`].
    pub fn residue_precision(&self) -> i64 {
        match self.mode {
            Mode::Infinity => 4,
            _ => 1,
        }
    }

    /// Residue of `x dx`, traced to `F_q`.
    pub fn residue(&self, x: &LocalElt) -> Result<Fe> {
        let fd = self.curve.field();
        let two = fd.from_int(2);
        match (self.mode, x) {
            (Mode::Split, LocalElt::Single(a)) => {
                let dg = self.adic_digits(a, -1, 0)?;
                Ok(dg[0].coeff(self.d - 1))
            }
            (Mode::Infinity, LocalElt::Pair(a, _)) => {
                let dg = self.adic_digits(a, 1, 2)?;
                Ok(fd.neg(fd.mul(two, dg[0].coeff(0))))
            }
            (_, LocalElt::Pair(a, _)) => {
                let dg = self.adic_digits(a, -1, 0)?;
                Ok(fd.mul(two, dg[0].coeff(self.d - 1)))
            }
            _ => panic!("local element does not match the place"),
        }
    }
}
