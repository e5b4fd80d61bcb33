//! Degree-0 divisor classes in Mumford form, with Cantor's algorithm.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::field::prime_factors;
use crate::fields::Poly;
use crate::hyperelliptic::{Curve, Divisor, Place, PlaceKind};

/// `(u, v)` standing for the class of `gcd(u(x), y - v(x)) - deg(u) inf`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MumfordClass {
    u: Poly,
    v: Poly,
}

impl fmt::Debug for MumfordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

impl MumfordClass {
    pub fn identity(curve: &Curve) -> MumfordClass {
        let fd = curve.field();
        MumfordClass {
            u: Poly::one(fd),
            v: Poly::zero(fd),
        }
    }

    /// Validated constructor; reduces when `deg u > 2`.
    pub fn new(curve: &Curve, u: Poly, v: Poly) -> Result<MumfordClass> {
        if u.is_zero() || !u.is_monic() {
            return Err(Error::Malformed("Mumford u must be monic".into()));
        }
        let v = v.rem(&u);
        if !(&(&v * &v) - curve.f()).rem(&u).is_zero() {
            return Err(Error::Malformed("Mumford pair violates v^2 = f mod u".into()));
        }
        Ok(reduce(curve, u, v))
    }

    pub fn u(&self) -> &Poly {
        &self.u
    }

    pub fn v(&self) -> &Poly {
        &self.v
    }

    pub fn is_identity(&self) -> bool {
        self.u.is_one()
    }

    pub fn neg(&self) -> MumfordClass {
        MumfordClass {
            u: self.u.clone(),
            v: (-&self.v).rem(&self.u),
        }
    }

    /// The reduced effective divisor `E` with this class equal to `E - deg(E) inf`.
    pub fn effective_divisor(&self, curve: &Curve) -> Result<Divisor> {
        let mut d = Divisor::zero();
        if self.is_identity() {
            return Ok(d);
        }
        for (w, m) in self.u.factor()? {
            let kind = if curve.f().rem(&w).is_zero() {
                PlaceKind::Ramified
            } else {
                PlaceKind::Split { v: self.v.rem(&w) }
            };
            d.add_at(Place::Finite { u: w, kind }, m as i64);
        }
        Ok(d)
    }

    /// `E - deg(E) inf` as a degree-0 divisor.
    pub fn divisor(&self, curve: &Curve) -> Result<Divisor> {
        let e = self.effective_divisor(curve)?;
        let deg = e.degree();
        Ok(e.add(&Divisor::infinity(-deg)))
    }
}

fn reduce(curve: &Curve, mut u: Poly, mut v: Poly) -> MumfordClass {
    let f = curve.f();
    while u.deg() > 2 {
        let nu = (f - &(&v * &v)).div_exact(&u).expect("u divides f - v^2");
        let nu = nu.monic();
        v = (-&v).rem(&nu);
        u = nu;
    }
    v = v.rem(&u);
    MumfordClass { u, v }
}

/// Cantor composition followed by reduction.
pub fn jac_add(curve: &Curve, d1: &MumfordClass, d2: &MumfordClass) -> Result<MumfordClass> {
    if d1.u.field() != curve.field() || d2.u.field() != curve.field() {
        return Err(Error::CurveMismatch);
    }
    if d1.is_identity() {
        return Ok(d2.clone());
    }
    if d2.is_identity() {
        return Ok(d1.clone());
    }
    let (d0, e1, e2) = d1.u.xgcd(&d2.u);
    let vs = &d1.v + &d2.v;
    let (d, c1, s3) = d0.xgcd(&vs);
    let (s1, s2) = (&c1 * &e1, &c1 * &e2);
    let u = (&d1.u * &d2.u).div_exact(&(&d * &d)).unwrap();
    let num = &(&(&(&s1 * &d1.u) * &d2.v) + &(&(&s2 * &d2.u) * &d1.v))
        + &(&s3 * &(&(&d1.v * &d2.v) + curve.f()));
    let v = num.div_exact(&d).unwrap().rem(&u);
    Ok(reduce(curve, u, v))
}

pub fn jac_neg(d: &MumfordClass) -> MumfordClass {
    d.neg()
}

/// `n * D` by double-and-add.
pub fn jac_scalar_mul(curve: &Curve, n: i64, d: &MumfordClass) -> MumfordClass {
    let base = if n < 0 { d.neg() } else { d.clone() };
    let mut k = n.unsigned_abs();
    let mut acc = MumfordClass::identity(curve);
    let mut b = base;
    while k > 0 {
        if k & 1 == 1 {
            acc = jac_add(curve, &acc, &b).unwrap();
        }
        k >>= 1;
        if k > 0 {
            b = jac_add(curve, &b, &b).unwrap();
        }
    }
    acc
}

/// Class of `P - deg(P) inf`.
pub fn place_class(curve: &Curve, place: &Place) -> MumfordClass {
    match place {
        Place::Infinity => MumfordClass::identity(curve),
        Place::Finite { u, kind } => match kind {
            PlaceKind::Inert => MumfordClass::identity(curve),
            PlaceKind::Ramified => reduce(curve, u.clone(), Poly::zero(curve.field())),
            PlaceKind::Split { v } => reduce(curve, u.clone(), v.clone()),
        },
    }
}

/// Class of `D - deg(D) inf`; for degree-0 `D` this is the class of `D`.
pub fn divisor_class(curve: &Curve, d: &Divisor) -> MumfordClass {
    let mut acc = MumfordClass::identity(curve);
    for (pl, n) in d.iter() {
        let c = jac_scalar_mul(curve, n, &place_class(curve, pl));
        acc = jac_add(curve, &acc, &c).unwrap();
    }
    acc
}

/// A random class: a random reduced divisor of degree 2 with distinct
/// rational or quadratic support.
pub fn random_class<R: Rng + ?Sized>(curve: &Curve, rng: &mut R) -> MumfordClass {
    let fd = curve.field();
    loop {
        let u = Poly::random_monic(fd, 2, rng);
        if !u.is_squarefree() {
            continue;
        }
        let mut acc = MumfordClass::identity(curve);
        let mut ok = true;
        for (w, _) in u.factor().unwrap() {
            let pls = curve.places_over(&w);
            if pls.len() == 1 && matches!(pls[0], Place::Finite { kind: PlaceKind::Inert, .. }) {
                ok = false;
                break;
            }
            let pl = &pls[rng.random_range(0..pls.len())];
            acc = jac_add(curve, &acc, &place_class(curve, pl)).unwrap();
        }
        if ok {
            return acc;
        }
    }
}

/// Zeta data from point counts over `F_q` and `F_{q^2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusData {
    /// `q + 1 - N1`, the trace of Frobenius.
    pub a1: i64,
    /// `q^2 + 1 - N2`, the sum of squared Frobenius eigenvalues.
    pub a2: i64,
    /// `T^4 - s1 T^3 + s2 T^2 - q s1 T + q^2`, leading coefficient first.
    pub charpoly: [i64; 5],
    pub jacobian_order: u64,
}

pub fn jac_order(curve: &Curve) -> Result<FrobeniusData> {
    jac_order_guarded(curve, crate::hyperelliptic::curve::DEFAULT_COUNT_GUARD)
}

pub fn jac_order_guarded(curve: &Curve, guard: u64) -> Result<FrobeniusData> {
    let q = curve.field().order() as i64;
    let n1 = curve.point_count_guarded(1, guard)? as i64;
    let n2 = curve.point_count_guarded(2, guard)? as i64;
    let a1 = q + 1 - n1;
    let a2 = q * q + 1 - n2;
    if (a1 * a1) > 16 * q || (a1 * a1 - a2) % 2 != 0 {
        return Err(Error::Internal(format!("Weil bound violated: a1 = {a1}")));
    }
    let s2 = (a1 * a1 - a2) / 2;
    let charpoly = [1, -a1, s2, -q * a1, q * q];
    let order: i64 = charpoly.iter().sum();
    if order <= 0 {
        return Err(Error::Internal("nonpositive Jacobian order".into()));
    }
    Ok(FrobeniusData {
        a1,
        a2,
        charpoly,
        jacobian_order: order as u64,
    })
}

/// Exact order of `d`, given a multiple `n` of it.
pub fn class_order_with(curve: &Curve, d: &MumfordClass, n: u64) -> u64 {
    let mut ord = n;
    for l in prime_factors(n) {
        while ord.is_multiple_of(l) && jac_scalar_mul(curve, (ord / l) as i64, d).is_identity() {
            ord /= l;
        }
    }
    ord
}

pub fn class_order(curve: &Curve, d: &MumfordClass) -> Result<u64> {
    let n = jac_order(curve)?.jacobian_order;
    Ok(class_order_with(curve, d, n))
}

/// All nonzero classes of order `p` in the subgroup generated by the
/// `p`-torsion parts of `samples` random classes, sorted.
pub fn find_p_torsion<R: Rng + ?Sized>(
    curve: &Curve,
    samples: usize,
    rng: &mut R,
) -> Result<Vec<MumfordClass>> {
    if !crate::cohomology::cartier_manin(curve).1 {
        return Err(Error::NotOrdinary);
    }
    let p = curve.field().characteristic();
    let n = jac_order(curve)?.jacobian_order;
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    if m == n {
        return Ok(Vec::new());
    }
    let mut group: BTreeSet<MumfordClass> = BTreeSet::new();
    group.insert(MumfordClass::identity(curve));
    for _ in 0..samples {
        let mut t = jac_scalar_mul(curve, m as i64, &random_class(curve, rng));
        if t.is_identity() {
            continue;
        }
        loop {
            let next = jac_scalar_mul(curve, p as i64, &t);
            if next.is_identity() {
                break;
            }
            t = next;
        }
        if group.contains(&t) {
            continue;
        }
        // close the group under adding multiples of t
        let old: Vec<MumfordClass> = group.iter().cloned().collect();
        let mut mult = MumfordClass::identity(curve);
        for _ in 1..p {
            mult = jac_add(curve, &mult, &t)?;
            for g in &old {
                group.insert(jac_add(curve, g, &mult)?);
            }
        }
    }
    group.remove(&MumfordClass::identity(curve));
    Ok(group.into_iter().collect())
}

/// Every reduced Mumford pair over `F_q`, by brute force (tiny fields only).
pub fn enumerate_classes(curve: &Curve) -> Vec<MumfordClass> {
    let fd = curve.field();
    let elems: Vec<_> = fd.elements().collect();
    let mut out = vec![MumfordClass::identity(curve)];
    let polys_of_deg = |deg: usize| -> Vec<Poly> {
        let mut res = vec![Vec::new()];
        for _ in 0..deg {
            res = res
                .into_iter()
                .flat_map(|c: Vec<_>| {
                    elems.iter().map(move |&e| {
                        let mut c2 = c.clone();
                        c2.push(e);
                        c2
                    })
                })
                .collect();
        }
        res.into_iter().map(|c| Poly::from_coeffs(fd, c)).collect()
    };
    for deg in 1..=2usize {
        let vs = polys_of_deg(deg);
        for low in polys_of_deg(deg) {
            let u = &low + &Poly::monomial(fd, fd.one(), deg);
            for v in &vs {
                if (&(v * v) - curve.f()).rem(&u).is_zero() {
                    out.push(MumfordClass {
                        u: u.clone(),
                        v: v.clone(),
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Field;
    use crate::hyperelliptic::FunctionElement;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn group_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fd = Field::new(7, 1).unwrap();
        let c = Curve::random(&fd, &mut rng);
        let id = MumfordClass::identity(&c);
        for _ in 0..50 {
            let a = random_class(&c, &mut rng);
            let b = random_class(&c, &mut rng);
            let d = random_class(&c, &mut rng);
            assert_eq!(jac_add(&c, &a, &id).unwrap(), a);
            assert!(jac_add(&c, &a, &a.neg()).unwrap().is_identity());
            let ab = jac_add(&c, &a, &b).unwrap();
            assert_eq!(ab, jac_add(&c, &b, &a).unwrap());
            assert_eq!(
                jac_add(&c, &ab, &d).unwrap(),
                jac_add(&c, &a, &jac_add(&c, &b, &d).unwrap()).unwrap()
            );
            assert_eq!(jac_scalar_mul(&c, 2, &a), jac_add(&c, &a, &a).unwrap());
            assert_eq!(jac_scalar_mul(&c, -3, &a), jac_scalar_mul(&c, 3, &a).neg());
        }
    }

    #[test]
    fn order_matches_enumeration() {
        let f3 = Field::new(3, 1).unwrap();
        for fc in [[1i64, 0, 0, 0, 0, 1], [0, 1, 0, 0, 0, 1]] {
            let c = Curve::from_ints(&f3, &fc).unwrap();
            let data = jac_order(&c).unwrap();
            assert_eq!(data.jacobian_order as usize, enumerate_classes(&c).len());
            for cl in enumerate_classes(&c) {
                assert!(jac_scalar_mul(&c, data.jacobian_order as i64, &cl).is_identity());
                let o = class_order(&c, &cl).unwrap();
                assert_eq!(data.jacobian_order % o, 0);
            }
        }
    }

    #[test]
    fn principal_divisors_have_trivial_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let fd = Field::new(5, 1).unwrap();
        let c = Curve::random(&fd, &mut rng);
        for _ in 0..10 {
            let phi = FunctionElement::random(&c, 3, &mut rng);
            if phi.is_zero() {
                continue;
            }
            assert!(divisor_class(&c, &phi.divisor().unwrap()).is_identity());
        }
        for _ in 0..10 {
            let a = random_class(&c, &mut rng);
            assert_eq!(divisor_class(&c, &a.divisor(&c).unwrap()), a);
        }
    }

    #[test]
    fn p_torsion_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f3 = Field::new(3, 1).unwrap();
        let nonord = Curve::from_ints(&f3, &[1, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(find_p_torsion(&nonord, 5, &mut rng).unwrap_err(), Error::NotOrdinary);
        let fd = Field::new(3, 3).unwrap();
        let mut found = false;
        for _ in 0..40 {
            let c = Curve::random(&fd, &mut rng);
            if !crate::cohomology::cartier_manin(&c).1 {
                continue;
            }
            let ts = find_p_torsion(&c, 20, &mut rng).unwrap();
            let n = jac_order(&c).unwrap().jacobian_order;
            if !n.is_multiple_of(3) {
                assert!(ts.is_empty());
                continue;
            }
            assert!(!ts.is_empty());
            // the group generated has order p or p^2
            assert!(ts.len() == 2 || ts.len() == 8);
            for t in &ts {
                assert_eq!(class_order(&c, t).unwrap(), 3);
            }
            found = true;
        }
        assert!(found);
    }
}
