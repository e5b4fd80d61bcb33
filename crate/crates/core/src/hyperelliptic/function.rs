use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{Fe, Poly, RationalFunction};
use crate::hyperelliptic::curve::{Curve, Place, PlaceKind};
use crate::hyperelliptic::divisor::Divisor;
use crate::hyperelliptic::local::Local;

/// `a(x) + b(x) y` in the function field of a curve.
#[derive(Clone, PartialEq, Eq)]
pub struct FunctionElement {
    curve: Curve,
    a: RationalFunction,
    b: RationalFunction,
}

impl fmt::Debug for FunctionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}] + [{:?}] y", self.a, self.b)
    }
}

impl FunctionElement {
    pub fn new(curve: &Curve, a: RationalFunction, b: RationalFunction) -> FunctionElement {
        assert!(a.field() == curve.field() && b.field() == curve.field());
        FunctionElement {
            curve: curve.clone(),
            a,
            b,
        }
    }

    pub fn from_polys(curve: &Curve, a: Poly, b: Poly) -> FunctionElement {
        Self::new(curve, RationalFunction::from_poly(a), RationalFunction::from_poly(b))
    }

    pub fn from_rational(curve: &Curve, a: RationalFunction) -> FunctionElement {
        let z = RationalFunction::zero(curve.field());
        Self::new(curve, a, z)
    }

    pub fn from_poly(curve: &Curve, a: Poly) -> FunctionElement {
        Self::from_rational(curve, RationalFunction::from_poly(a))
    }

    pub fn constant(curve: &Curve, c: Fe) -> FunctionElement {
        Self::from_poly(curve, Poly::constant(curve.field(), c))
    }

    pub fn zero(curve: &Curve) -> FunctionElement {
        Self::from_poly(curve, Poly::zero(curve.field()))
    }

    pub fn one(curve: &Curve) -> FunctionElement {
        Self::from_poly(curve, Poly::one(curve.field()))
    }

    pub fn x(curve: &Curve) -> FunctionElement {
        Self::from_poly(curve, Poly::x(curve.field()))
    }

    pub fn y(curve: &Curve) -> FunctionElement {
        let fd = curve.field();
        Self::from_polys(curve, Poly::zero(fd), Poly::one(fd))
    }

    /// A random element `(A + B y) / H` with small degrees.
    pub fn random<R: Rng + ?Sized>(curve: &Curve, deg: usize, rng: &mut R) -> FunctionElement {
        let fd = curve.field();
        let h = Poly::random_monic(fd, rng.random_range(0..=deg), rng);
        let a = Poly::random(fd, deg + 1, rng);
        let b = Poly::random(fd, deg + 1, rng);
        Self::new(
            curve,
            RationalFunction::new(a, h.clone()).unwrap(),
            RationalFunction::new(b, h).unwrap(),
        )
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn a(&self) -> &RationalFunction {
        &self.a
    }

    pub fn b(&self) -> &RationalFunction {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `(A, B, H)` with `self = (A + B y) / H` and `H` monic, minimal.
    pub fn integral_form(&self) -> (Poly, Poly, Poly) {
        let (da, db) = (self.a.den(), self.b.den());
        let g = da.gcd(db);
        let h = &da.div_exact(&g).unwrap() * db;
        let a = self.a.num() * &h.div_exact(da).unwrap();
        let b = self.b.num() * &h.div_exact(db).unwrap();
        (a, b, h)
    }

    /// Both parts are polynomials, i.e. the element is regular away from infinity.
    pub fn is_integral(&self) -> bool {
        self.a.is_polynomial() && self.b.is_polynomial()
    }

    fn check(&self, o: &FunctionElement) {
        assert!(self.curve == o.curve, "function elements on different curves");
    }

    pub fn scale(&self, c: Fe) -> FunctionElement {
        let k = RationalFunction::from_poly(Poly::constant(self.curve.field(), c));
        Self::new(&self.curve, self.a.mul(&k), self.b.mul(&k))
    }

    pub fn mul_rational(&self, r: &RationalFunction) -> FunctionElement {
        Self::new(&self.curve, self.a.mul(r), self.b.mul(r))
    }

    /// Image under the hyperelliptic involution `y -> -y`.
    pub fn conj(&self) -> FunctionElement {
        Self::new(&self.curve, self.a.clone(), self.b.neg())
    }

    /// `a^2 - b^2 f`, the norm down to `F_q(x)`.
    pub fn norm(&self) -> RationalFunction {
        let f = RationalFunction::from_poly(self.curve.f().clone());
        self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(&f))
    }

    pub fn inv(&self) -> Result<FunctionElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm().inv()?;
        Ok(self.conj().mul_rational(&n))
    }

    pub fn div(&self, o: &FunctionElement) -> Result<FunctionElement> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> FunctionElement {
        let mut acc = Self::one(&self.curve);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `d/dx`, using `dy/dx = f' y / (2 f)`.
    pub fn derivative(&self) -> FunctionElement {
        let fd = self.curve.field();
        let two_f = RationalFunction::from_poly(self.curve.f().scale(fd.from_int(2)));
        let ratio = RationalFunction::from_poly(self.curve.df().clone())
            .div(&two_f)
            .unwrap();
        let b = self.b.derivative().add(&self.b.mul(&ratio));
        Self::new(&self.curve, self.a.derivative(), b)
    }

    /// Order of vanishing at `place`.
    pub fn valuation(&self, place: &Place) -> Result<i64> {
        valuation(place, self)
    }

    pub fn divisor(&self) -> Result<Divisor> {
        divisor_of_function(self)
    }
}

impl<'a> Add<&'a FunctionElement> for &'a FunctionElement {
    type Output = FunctionElement;
    fn add(self, o: &'a FunctionElement) -> FunctionElement {
        self.check(o);
        FunctionElement::new(&self.curve, self.a.add(&o.a), self.b.add(&o.b))
    }
}

impl<'a> Sub<&'a FunctionElement> for &'a FunctionElement {
    type Output = FunctionElement;
    fn sub(self, o: &'a FunctionElement) -> FunctionElement {
        self.check(o);
        FunctionElement::new(&self.curve, self.a.sub(&o.a), self.b.sub(&o.b))
    }
}

impl Neg for &FunctionElement {
    type Output = FunctionElement;
    fn neg(self) -> FunctionElement {
        FunctionElement::new(&self.curve, self.a.neg(), self.b.neg())
    }
}

impl<'a> Mul<&'a FunctionElement> for &'a FunctionElement {
    type Output = FunctionElement;
    fn mul(self, o: &'a FunctionElement) -> FunctionElement {
        self.check(o);
        let f = RationalFunction::from_poly(self.curve.f().clone());
        let a = self.a.mul(&o.a).add(&self.b.mul(&o.b).mul(&f));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
        FunctionElement::new(&self.curve, a, b)
    }
}

fn ord_or_max(r: &RationalFunction, u: &Poly) -> i64 {
    r.ord(u).unwrap_or(i64::MAX / 4)
}

pub fn valuation(place: &Place, phi: &FunctionElement) -> Result<i64> {
    if phi.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let big = i64::MAX / 4;
    match place {
        Place::Infinity => {
            let va = phi.a.degree().map_or(big, |d| -2 * d);
            let vb = phi.b.degree().map_or(big, |d| -2 * d - 5);
            Ok(va.min(vb))
        }
        Place::Finite { u, kind } => match kind {
            PlaceKind::Ramified => Ok((2 * ord_or_max(&phi.a, u)).min(2 * ord_or_max(&phi.b, u) + 1)),
            PlaceKind::Inert => Ok(ord_or_max(&phi.a, u).min(ord_or_max(&phi.b, u))),
            PlaceKind::Split { .. } => {
                let (a, b, h) = phi.integral_form();
                let oa = if a.is_zero() { big } else { a.ord(u) as i64 };
                let ob = if b.is_zero() { big } else { b.ord(u) as i64 };
                let m = oa.min(ob);
                let um = u.pow(m as u64);
                let (a1, b1) = (a.div_exact(&um).unwrap(), b.div_exact(&um).unwrap());
                // v_P(a1 + b1 y) <= ord_u of the norm, which is finite
                let norm = &(&a1 * &a1) - &(&(&b1 * &b1) * phi.curve.f());
                let n = norm.ord(u) as i64;
                let loc = Local::new(&phi.curve, place);
                let lifted = loc.split_image(&a1, &b1, n + 1);
                let k = loc.adic_ord(&lifted).unwrap_or(n + 1);
                Ok(m + k - h.ord(u) as i64)
            }
        },
    }
}

/// `div(phi)`: zeros and poles are found among the places over the factors
/// of the norm and of the denominator, plus infinity.
pub fn divisor_of_function(phi: &FunctionElement) -> Result<Divisor> {
    if phi.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let (a, b, h) = phi.integral_form();
    let norm = &(&a * &a) - &(&(&b * &b) * phi.curve.f());
    let mut us: Vec<Poly> = norm.factor()?.into_iter().map(|(u, _)| u).collect();
    us.extend(h.factor()?.into_iter().map(|(u, _)| u));
    us.sort();
    us.dedup();
    let mut d = Divisor::zero();
    for u in us {
        for pl in phi.curve.places_over(&u) {
            let v = valuation(&pl, phi)?;
            d.add_at(pl, v);
        }
    }
    let v = valuation(&Place::Infinity, phi)?;
    d.add_at(Place::Infinity, v);
    Ok(d)
}

/// `coeff * dx`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Differential {
    coeff: FunctionElement,
}

impl Differential {
    pub fn new(coeff: FunctionElement) -> Differential {
        Differential { coeff }
    }

    pub fn dx(curve: &Curve) -> Differential {
        Self::new(FunctionElement::one(curve))
    }

    /// `dx / y`, whose divisor is the canonical divisor `2 inf`.
    pub fn omega0(curve: &Curve) -> Differential {
        Self::new(FunctionElement::y(curve).inv().unwrap())
    }

    /// `phi * dx / y`.
    pub fn over_y(phi: &FunctionElement) -> Differential {
        Self::new(phi * &FunctionElement::y(phi.curve()).inv().unwrap())
    }

    pub fn coeff(&self) -> &FunctionElement {
        &self.coeff
    }

    pub fn curve(&self) -> &Curve {
        self.coeff.curve()
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn mul_function(&self, phi: &FunctionElement) -> Differential {
        Self::new(&self.coeff * phi)
    }

    pub fn valuation(&self, place: &Place) -> Result<i64> {
        Ok(self.coeff.valuation(place)? + dx_valuation(place))
    }

    pub fn divisor(&self) -> Result<Divisor> {
        Ok(self.coeff.divisor()?.add(&dx_divisor(self.curve())))
    }

    /// Residue at `place`, traced down to `F_q`.
    pub fn residue(&self, place: &Place) -> Result<Fe> {
        residue(place, self)
    }
}

/// `v_P(dx)`: 1 at finite ramified places, -3 at infinity.
pub fn dx_valuation(place: &Place) -> i64 {
    match place {
        Place::Infinity => -3,
        Place::Finite {
            kind: PlaceKind::Ramified,
            ..
        } => 1,
        _ => 0,
    }
}

pub fn dx_divisor(curve: &Curve) -> Divisor {
    let mut d = Divisor::infinity(-3);
    for (u, _) in curve.f().factor().unwrap() {
        for pl in curve.places_over(&u) {
            d.add_at(pl, 1);
        }
    }
    d
}

pub fn canonical_divisor(_curve: &Curve) -> Divisor {
    Divisor::infinity(2)
}

pub fn residue(place: &Place, omega: &Differential) -> Result<Fe> {
    if omega.is_zero() {
        return Ok(Fe::ZERO);
    }
    let loc = Local::new(omega.curve(), place);
    let e = loc.expand(omega.coeff(), loc.residue_precision())?;
    loc.residue(&e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn curve(p: u64, k: u32, f: &[i64]) -> Curve {
        Curve::from_ints(&Field::new(p, k).unwrap(), f).unwrap()
    }

    fn random_nonzero(c: &Curve, rng: &mut ChaCha8Rng) -> FunctionElement {
        loop {
            let phi = FunctionElement::random(c, 4, rng);
            if !phi.is_zero() {
                return phi;
            }
        }
    }

    #[test]
    fn pole_orders_at_infinity() {
        let c = curve(3, 1, &[1, 0, 0, 0, 0, 1]);
        let inf = Place::Infinity;
        assert_eq!(FunctionElement::x(&c).valuation(&inf).unwrap(), -2);
        assert_eq!(FunctionElement::y(&c).valuation(&inf).unwrap(), -5);
        assert_eq!(FunctionElement::one(&c).valuation(&inf).unwrap(), 0);
        assert_eq!(
            FunctionElement::zero(&c).valuation(&inf).unwrap_err(),
            Error::ZeroFunction
        );
    }

    #[test]
    fn divisor_of_x() {
        let c = curve(3, 1, &[1, 0, 0, 0, 0, 1]);
        let d = FunctionElement::x(&c).divisor().unwrap();
        assert_eq!(d.degree(), 0);
        assert_eq!(d.get(&Place::Infinity), -2);
        let zeros = c.places_over(&Poly::x(c.field()));
        assert_eq!(zeros.len(), 2);
        for z in &zeros {
            assert_eq!(d.get(z), 1);
        }
        assert_eq!(d.len(), 3);
        assert!(FunctionElement::one(&c).divisor().unwrap().is_zero());
        // y vanishes once at each ramified place
        let dy = FunctionElement::y(&c).divisor().unwrap();
        assert_eq!(dy.get(&Place::Infinity), -5);
        assert_eq!(dy.degree(), 0);
    }

    #[test]
    fn valuation_axioms_and_expansions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, k) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let fd = Field::new(p, k).unwrap();
            let c = Curve::random(&fd, &mut rng);
            for _ in 0..15 {
                let phi = random_nonzero(&c, &mut rng);
                let psi = random_nonzero(&c, &mut rng);
                let dphi = phi.divisor().unwrap();
                let dpsi = psi.divisor().unwrap();
                assert_eq!(dphi.degree(), 0);
                assert_eq!((&phi * &psi).divisor().unwrap(), dphi.add(&dpsi));
                let mut places: Vec<Place> = dphi.support().cloned().collect();
                places.push(c.random_place(3, &mut rng));
                for pl in &places {
                    let v = phi.valuation(pl).unwrap();
                    let loc = Local::new(&c, pl);
                    let e = loc.expand(&phi, v + 3).unwrap();
                    assert_eq!(loc.valuation(&e), Some(v), "{pl}");
                    let s = &phi + &psi;
                    if !s.is_zero() {
                        let vs = s.valuation(pl).unwrap();
                        assert!(vs >= v.min(psi.valuation(pl).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn residues_sum_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, k) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let fd = Field::new(p, k).unwrap();
            let c = Curve::random(&fd, &mut rng);
            for _ in 0..10 {
                let w = Differential::new(random_nonzero(&c, &mut rng));
                let div = w.divisor().unwrap();
                assert_eq!(div.degree(), 2);
                let total = fd.sum(
                    div.iter()
                        .filter(|(_, n)| *n < 0)
                        .map(|(pl, _)| w.residue(pl).unwrap()),
                );
                assert!(total.is_zero());
                for (pl, n) in div.iter() {
                    if n >= 0 {
                        assert!(w.residue(pl).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn residues_of_dx_over_x() {
        // x = 0 splits on y^2 = x^5 + 1: residue 1 at each place over it
        let c = curve(3, 1, &[1, 0, 0, 0, 0, 1]);
        let fd = c.field();
        let w = Differential::new(FunctionElement::x(&c).inv().unwrap());
        let zeros = c.places_over(&Poly::x(fd));
        for z in &zeros {
            assert_eq!(w.residue(z).unwrap(), fd.one());
        }
        assert_eq!(w.residue(&Place::Infinity).unwrap(), fd.from_int(-2));
    }

    #[test]
    fn canonical_divisor_is_two_infinity() {
        let c = curve(3, 1, &[1, 0, 0, 0, 0, 1]);
        let k = canonical_divisor(&c);
        assert_eq!(k, Divisor::infinity(2));
        assert_eq!(Differential::omega0(&c).divisor().unwrap(), k);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = Differential::new(random_nonzero(&c, &mut rng));
        let diff = w.divisor().unwrap().sub(&k);
        let g = w.coeff() * &FunctionElement::y(&c);
        assert_eq!(g.divisor().unwrap(), diff);
    }

    #[test]
    fn derivative_rules() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = curve(5, 1, &[1, 1, 0, 0, 0, 1]);
        for _ in 0..10 {
            let a = random_nonzero(&c, &mut rng);
            let b = random_nonzero(&c, &mut rng);
            let lhs = (&a * &b).derivative();
            let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
            assert_eq!(lhs, rhs);
        }
        // (y^2)' = f'
        let y = FunctionElement::y(&c);
        assert_eq!((&y * &y).derivative(), FunctionElement::from_poly(&c, c.df().clone()));
    }
}
