use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{Fe, Field, Poly};
use crate::hyperelliptic::Divisor;

/// Default bound on the number of field elements enumerated by point counts.
pub const DEFAULT_COUNT_GUARD: u64 = 10_000_000;

struct CurveData {
    f: Poly,
    df: Poly,
}

/// The genus-2 curve `y^2 = f(x)`, `f` monic squarefree of degree 5, with its
/// single place at infinity.
#[derive(Clone)]
pub struct Curve(Arc<CurveData>);

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.f == other.0.f
    }
}

impl Eq for Curve {}

impl fmt::Debug for Curve {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fd = self.field();
        write!(fm, "y^2 = {} over F_{}", self.0.f, fd.order())
    }
}

/// How the place over an irreducible `u(x)` sits in the double cover.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum PlaceKind {
    /// `u | f`: one place, `e = 2`, `y` is a uniformizer.
    Ramified,
    /// `f` is a nonsquare mod `u`: one place of degree `2 deg u`.
    Inert,
    /// `y = v mod u` with `v^2 = f mod u`: two places of degree `deg u`.
    Split { v: Poly },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Place {
    Finite { u: Poly, kind: PlaceKind },
    Infinity,
}

impl Place {
    /// Degree of the residue field over `F_q`.
    pub fn degree(&self) -> i64 {
        match self {
            Place::Infinity => 1,
            Place::Finite { u, kind } => match kind {
                PlaceKind::Inert => 2 * u.deg(),
                _ => u.deg(),
            },
        }
    }

    /// Ramification index over the `x`-line.
    pub fn ramification(&self) -> i64 {
        match self {
            Place::Infinity
            | Place::Finite {
                kind: PlaceKind::Ramified,
                ..
            } => 2,
            _ => 1,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    pub fn is_ramified(&self) -> bool {
        self.ramification() == 2
    }

    /// The `x`-polynomial under a finite place.
    pub fn u(&self) -> Option<&Poly> {
        match self {
            Place::Finite { u, .. } => Some(u),
            Place::Infinity => None,
        }
    }

    /// For a degree-1 place, its `(x, y)` coordinates (`None` at infinity).
    pub fn rational_point(&self) -> Option<(Fe, Fe)> {
        let Place::Finite { u, kind } = self else {
            return None;
        };
        if u.deg() != 1 {
            return None;
        }
        let x = u.field().neg(u.coeff(0));
        match kind {
            PlaceKind::Ramified => Some((x, Fe::ZERO)),
            PlaceKind::Split { v } => Some((x, v.coeff(0))),
            PlaceKind::Inert => None,
        }
    }

    /// The conjugate place under `y -> -y`.
    pub fn conjugate(&self) -> Place {
        match self {
            Place::Finite {
                u,
                kind: PlaceKind::Split { v },
            } => Place::Finite {
                u: u.clone(),
                kind: PlaceKind::Split { v: (-v).rem(u) },
            },
            other => other.clone(),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(fm, "inf"),
            Place::Finite { u, kind } => match kind {
                PlaceKind::Ramified => write!(fm, "({u}, ram)"),
                PlaceKind::Inert => write!(fm, "({u}, inert)"),
                PlaceKind::Split { v } => write!(fm, "({u}, {v})"),
            },
        }
    }
}

impl Curve {
    /// Validates a monic squarefree quintic.
    pub fn new(f: Poly) -> Result<Curve> {
        let deg = f.degree().unwrap_or(0);
        if deg != 5 {
            return Err(Error::UnsupportedDegree(deg));
        }
        if !f.is_monic() {
            return Err(Error::Malformed("f must be monic".into()));
        }
        if !f.is_squarefree() {
            return Err(Error::SingularModel);
        }
        let df = f.derivative();
        Ok(Curve(Arc::new(CurveData { f, df })))
    }

    pub fn from_ints(field: &Field, f: &[i64]) -> Result<Curve> {
        Self::new(Poly::from_ints(field, f))
    }

    /// A random curve over `field` (monic squarefree quintic).
    pub fn random<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> Curve {
        loop {
            if let Ok(c) = Self::new(Poly::random_monic(field, 5, rng)) {
                return c;
            }
        }
    }

    pub fn field(&self) -> &Field {
        self.0.f.field()
    }

    pub fn f(&self) -> &Poly {
        &self.0.f
    }

    pub fn df(&self) -> &Poly {
        &self.0.df
    }

    pub fn genus(&self) -> u32 {
        2
    }

    /// Places above the monic irreducible `u`, in canonical order.
    pub fn places_over(&self, u: &Poly) -> Vec<Place> {
        debug_assert!(u.is_monic() && u.deg() >= 1);
        let fr = self.f().rem(u);
        if fr.is_zero() {
            return vec![Place::Finite {
                u: u.clone(),
                kind: PlaceKind::Ramified,
            }];
        }
        match fr.sqrt_mod(u) {
            None => vec![Place::Finite {
                u: u.clone(),
                kind: PlaceKind::Inert,
            }],
            Some(v) => {
                let w = (-&v).rem(u);
                let mut out = vec![
                    Place::Finite {
                        u: u.clone(),
                        kind: PlaceKind::Split { v },
                    },
                    Place::Finite {
                        u: u.clone(),
                        kind: PlaceKind::Split { v: w },
                    },
                ];
                out.sort();
                out
            }
        }
    }

    /// Whether `place` is a genuine place of this curve.
    pub fn contains(&self, place: &Place) -> bool {
        match place {
            Place::Infinity => true,
            Place::Finite { u, .. } => {
                u.field() == self.field()
                    && u.is_monic()
                    && u.deg() >= 1
                    && u.is_irreducible()
                    && self.places_over(u).contains(place)
            }
        }
    }

    /// The degree-1 places: affine points in order of `x`, then infinity.
    pub fn rational_places(&self) -> Vec<Place> {
        let fd = self.field();
        let mut out = Vec::new();
        for a in fd.elements() {
            let u = Poly::linear(fd, a);
            for pl in self.places_over(&u) {
                if pl.degree() == 1 {
                    out.push(pl);
                }
            }
        }
        out.push(Place::Infinity);
        out
    }

    /// A random place of degree at most `max_deg` (infinity included).
    pub fn random_place<R: Rng + ?Sized>(&self, max_deg: usize, rng: &mut R) -> Place {
        let fd = self.field();
        loop {
            if rng.random_range(0..(4 * fd.order() as usize).max(8)) == 0 {
                return Place::Infinity;
            }
            let d = rng.random_range(1..=max_deg);
            let u = Poly::random_monic(fd, d, rng);
            if !u.is_irreducible() {
                continue;
            }
            let mut pls = self.places_over(&u);
            pls.retain(|p| p.degree() as usize <= max_deg);
            if pls.is_empty() {
                continue;
            }
            return pls.swap_remove(rng.random_range(0..pls.len()));
        }
    }

    /// A random effective divisor of degree `deg` built from places of
    /// degree at most 2.
    pub fn random_effective_divisor<R: Rng + ?Sized>(&self, deg: i64, rng: &mut R) -> Divisor {
        let mut d = Divisor::zero();
        while d.degree() < deg {
            let pl = self.random_place(2, rng);
            if d.degree() + pl.degree() <= deg {
                d.add_at(pl, 1);
            }
        }
        d
    }

    /// `#C(F_{q^m})`, infinity included.
    pub fn point_count(&self, m: u32) -> Result<u64> {
        self.point_count_guarded(m, DEFAULT_COUNT_GUARD)
    }

    pub fn point_count_guarded(&self, m: u32, guard: u64) -> Result<u64> {
        if m == 0 {
            return Err(Error::Malformed("extension degree must be positive".into()));
        }
        let q = self.field().order() as u128;
        let size = q.checked_pow(m).unwrap_or(u128::MAX);
        if size > guard as u128 {
            return Err(Error::GuardExceeded {
                size: size.min(u64::MAX as u128) as u64,
                limit: guard,
            });
        }
        let chi_sum = match m {
            1 => self.char_sum_base(),
            2 => self.char_sum_quadratic(),
            _ => self.char_sum_general(m),
        };
        Ok((size as i64 + chi_sum + 1) as u64)
    }

    fn char_sum_base(&self) -> i64 {
        let fd = self.field();
        fd.elements()
            .map(|a| fd.legendre(self.f().eval(a)) as i64)
            .sum()
    }

    /// Sum of the quadratic character of `f` over `F_q(sqrt n)`, using
    /// `chi_{q^2}(z) = chi_q(N z)`.
    fn char_sum_quadratic(&self) -> i64 {
        let fd = self.field();
        let n = fd.elements().find(|&a| fd.legendre(a) == -1).unwrap();
        let coeffs = self.f().coeffs();
        let mut total = 0i64;
        for a in fd.elements() {
            for b in fd.elements() {
                // Horner on pairs c0 + c1 sqrt(n)
                let (mut c0, mut c1) = (Fe::ZERO, Fe::ZERO);
                for &c in coeffs.iter().rev() {
                    let t0 = fd.add(fd.mul(c0, a), fd.mul(n, fd.mul(c1, b)));
                    let t1 = fd.add(fd.mul(c0, b), fd.mul(c1, a));
                    c0 = fd.add(t0, c);
                    c1 = t1;
                }
                let norm = fd.sub(fd.mul(c0, c0), fd.mul(n, fd.mul(c1, c1)));
                total += fd.legendre(norm) as i64;
            }
        }
        total
    }

    fn char_sum_general(&self, m: u32) -> i64 {
        use rand::SeedableRng;
        let fd = self.field();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x00c0_u64 ^ m as u64);
        let h = loop {
            let h = Poly::random_monic(fd, m as usize, &mut rng);
            if h.is_irreducible() {
                break h;
            }
        };
        let q = fd.order();
        let total_elems = q.pow(m);
        let mut total = 0i64;
        for idx in 0..total_elems {
            let mut r = idx;
            let c: Vec<Fe> = (0..m)
                .map(|_| {
                    let e = fd.from_index((r % q) as u32).unwrap();
                    r /= q;
                    e
                })
                .collect();
            let xel = Poly::from_coeffs(fd, c);
            let mut val = Poly::zero(fd);
            for &c in self.f().coeffs().iter().rev() {
                val = &val.mul_mod(&xel, &h) + &Poly::constant(fd, c);
            }
            total += fd.legendre(val.norm_mod(&h)) as i64;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_count(c: &Curve) -> u64 {
        let fd = c.field();
        let mut n = 1;
        for x in fd.elements() {
            for y in fd.elements() {
                if fd.mul(y, y) == c.f().eval(x) {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn creation_errors() {
        let f3 = Field::new(3, 1).unwrap();
        let f5 = Field::new(5, 1).unwrap();
        assert!(Curve::from_ints(&f5, &[1, 1, 0, 0, 0, 1]).is_ok());
        assert!(Curve::from_ints(&f3, &[1, 0, 0, 0, 0, 1]).is_ok());
        assert_eq!(
            Curve::from_ints(&f3, &[0, 0, 0, 0, 0, 1]).unwrap_err(),
            Error::SingularModel
        );
        assert_eq!(
            Curve::from_ints(&f3, &[1, 0, 0, 0, 1]).unwrap_err(),
            Error::UnsupportedDegree(4)
        );
    }

    #[test]
    fn point_counts_match_enumeration() {
        let f3 = Field::new(3, 1).unwrap();
        let c = Curve::from_ints(&f3, &[1, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(c.point_count(1).unwrap(), 4);
        let c2 = Curve::from_ints(&f3, &[0, 1, 0, 0, 0, 1]).unwrap();
        assert_eq!(c2.point_count(1).unwrap(), naive_count(&c2));
        // F_9 count through the quadratic fast path vs the generic path vs
        // naive enumeration over an explicit F_9
        let f9 = Field::new(3, 2).unwrap();
        for fc in [[1i64, 0, 0, 0, 0, 1], [0, 1, 0, 0, 0, 1], [2, 1, 0, 1, 0, 1]] {
            let c = Curve::from_ints(&f3, &fc).unwrap();
            let big = Curve::from_ints(&f9, &fc).unwrap();
            let n2 = c.point_count(2).unwrap();
            assert_eq!(n2, naive_count(&big));
            assert_eq!(c.char_sum_general(2) + 10, n2 as i64);
            let n3 = c.point_count(3).unwrap();
            let f27 = Field::new(3, 3).unwrap();
            assert_eq!(n3, naive_count(&Curve::from_ints(&f27, &fc).unwrap()));
        }
        assert!(matches!(
            c.point_count_guarded(3, 20),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn places_over_x() {
        let f3 = Field::new(3, 1).unwrap();
        let c = Curve::from_ints(&f3, &[1, 0, 0, 0, 0, 1]).unwrap();
        let pls = c.places_over(&Poly::x(&f3));
        assert_eq!(pls.len(), 2);
        assert!(pls.iter().all(|p| p.degree() == 1));
        assert_eq!(c.rational_places().len(), 4);
    }
}
