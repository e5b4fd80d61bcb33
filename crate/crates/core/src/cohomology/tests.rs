use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;
use crate::fields::linalg::rank;
use crate::fields::{Fe, Field};
use crate::hyperelliptic::{canonical_divisor, Curve, Differential, Divisor, FunctionElement};
use crate::jacobian::find_p_torsion;

fn curve(p: u64, f: &[i64]) -> Curve {
    Curve::from_ints(&Field::new(p, 1).unwrap(), f).unwrap()
}

fn random_divisor(c: &Curve, rng: &mut ChaCha8Rng, terms: usize, amp: i64) -> Divisor {
    let mut d = Divisor::zero();
    for _ in 0..terms {
        let pl = c.random_place(2, rng);
        d.add_at(pl, rng.random_range(-amp..=amp));
    }
    d
}

#[test]
fn rr_examples() {
    let c = curve(3, &[1, 0, 0, 0, 0, 1]);
    let one = rr_space(&c, &Divisor::zero()).unwrap();
    assert_eq!(one.dim(), 1);
    assert_eq!(one.basis()[0], FunctionElement::one(&c));
    assert_eq!(rr_space(&c, &canonical_divisor(&c)).unwrap().dim(), 2);
    let three = rr_space(&c, &Divisor::infinity(3)).unwrap();
    assert_eq!(three.dim(), 2);
    assert!(three.contains(&FunctionElement::x(&c)));
    assert!(!three.contains(&FunctionElement::y(&c)));
    assert_eq!(h1_dim(&c, &Divisor::zero()).unwrap(), 2);
    assert_eq!(h1_dim(&c, &Divisor::infinity(3)).unwrap(), 0);
}

#[test]
fn riemann_roch_and_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for p in [3, 5, 7] {
        let fd = Field::new(p, 1).unwrap();
        let c = Curve::random(&fd, &mut rng);
        let k = canonical_divisor(&c);
        for _ in 0..25 {
            let d = random_divisor(&c, &mut rng, 4, 4);
            let l = rr_space(&c, &d).unwrap();
            let lk = rr_space(&c, &k.sub(&d)).unwrap();
            assert_eq!(l.dim() as i64 - lk.dim() as i64, d.degree() - 1, "{d}");
            for phi in l.basis() {
                assert!(phi.divisor().unwrap().add(&d).is_effective());
            }
            if l.dim() > 0 {
                let coeffs: Vec<Fe> = (0..l.dim()).map(|_| fd.random(&mut rng)).collect();
                let e = l.element(&coeffs);
                assert_eq!(l.coordinates(&e).unwrap(), coeffs);
            }
        }
    }
}

#[test]
fn tail_reduction_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let fd = Field::new(5, 1).unwrap();
    let c = Curve::random(&fd, &mut rng);
    for _ in 0..12 {
        let d = random_divisor(&c, &mut rng, 3, 3);
        let h = H1Space::new(&c, &d).unwrap();
        assert_eq!(h.dim(), h1_dim(&c, &d).unwrap());
        // coboundaries reduce to zero
        let big = d.add(&random_divisor(&c, &mut rng, 2, 3).positive_part());
        for phi in rr_space(&c, &big).unwrap().basis() {
            let xi = TailClass::coboundary(&c, &d, phi).unwrap();
            assert!(tail_reduce(&c, &xi).unwrap().is_zero());
        }
        // a random repartition: canonicalization is idempotent and linear
        let pl = c.random_place(2, &mut rng);
        let loc = crate::hyperelliptic::Local::new(&c, &pl);
        let hi = -d.get(&pl);
        let w = loc.width();
        let coeffs: Vec<Fe> = (0..3 * w).map(|_| fd.random(&mut rng)).collect();
        let xi = TailClass::zero(&d).with_tail(&c, &pl, hi - 3, coeffs);
        let r = tail_reduce(&c, &xi).unwrap();
        assert_eq!(tail_reduce(&c, &r).unwrap(), r);
        let s = fd.random(&mut rng);
        assert_eq!(
            h.coordinates(&xi.scale(&c, s)).unwrap(),
            h.coordinates(&xi).unwrap().iter().map(|&x| fd.mul(x, s)).collect::<Vec<_>>()
        );
    }
}

#[test]
fn serre_duality_nondegenerate() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for p in [3, 5, 7] {
        let fd = Field::new(p, 1).unwrap();
        let c = Curve::random(&fd, &mut rng);
        let k = canonical_divisor(&c);
        for _ in 0..6 {
            let d = random_divisor(&c, &mut rng, 3, 3);
            let h = H1Space::new(&c, &d).unwrap();
            let dual = rr_space(&c, &k.sub(&d)).unwrap();
            assert_eq!(h.dim(), dual.dim());
            let omegas: Vec<Differential> = dual
                .basis()
                .iter()
                .map(Differential::over_y)
                .collect();
            let m: Vec<Vec<Fe>> = h
                .basis()
                .iter()
                .map(|xi| omegas.iter().map(|w| serre_pairing(&c, xi, w).unwrap()).collect())
                .collect();
            assert_eq!(rank(&fd, &m, dual.dim()), h.dim());
            // representative independence
            let big = d.add(&Divisor::point(c.random_place(1, &mut rng)));
            if let Some(phi) = rr_space(&c, &big).unwrap().basis().first() {
                let cob = TailClass::coboundary(&c, &d, phi).unwrap();
                for w in &omegas {
                    assert!(serre_pairing(&c, &cob, w).unwrap().is_zero());
                }
            }
        }
    }
}

#[test]
fn cartier_manin_examples() {
    let fd = Field::new(3, 1).unwrap();
    let c1 = curve(3, &[1, 0, 0, 0, 0, 1]);
    let (m1, ord1) = cartier_manin(&c1);
    let e = |n| fd.from_int(n);
    assert_eq!(m1, [[e(0), e(0)], [e(1), e(0)]]);
    assert!(!ord1);
    assert!(!frobenius_h1(&c1, &Divisor::zero(), None).unwrap().is_injective());
    let c2 = curve(3, &[0, 1, 0, 0, 0, 1]);
    let (m2, ord2) = cartier_manin(&c2);
    assert_eq!(m2, [[e(0), e(1)], [e(1), e(0)]]);
    assert!(ord2);
    assert!(frobenius_h1(&c2, &Divisor::zero(), None).unwrap().is_injective());
    assert_eq!(p_rank(&c2), 2);
}

#[test]
fn ordinariness_cross_check_and_semilinearity() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for p in [3, 5, 7] {
        let fd = Field::new(p, 1).unwrap();
        for _ in 0..5 {
            let c = Curve::random(&fd, &mut rng);
            let f = frobenius_h1(&c, &Divisor::zero(), None).unwrap();
            assert_eq!(f.is_injective(), cartier_manin(&c).1);
            let f2 = frobenius_power_h1(&c, 2).unwrap();
            assert_eq!(f.compose(&f), f2);
            let v: Vec<Fe> = (0..2).map(|_| fd.random(&mut rng)).collect();
            let s = fd.random(&mut rng);
            let sv: Vec<Fe> = v.iter().map(|&x| fd.mul(s, x)).collect();
            let lhs = f.apply(&sv);
            let rhs: Vec<Fe> = f.apply(&v).iter().map(|&x| fd.mul(fd.pow(s, p), x)).collect();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn cartier_classes_of_p_torsion() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let fd = Field::new(3, 3).unwrap();
    let mut tested = 0;
    while tested < 2 {
        let c = Curve::random(&fd, &mut rng);
        if !cartier_manin(&c).1 {
            continue;
        }
        let ts = find_p_torsion(&c, 20, &mut rng).unwrap();
        if ts.len() < 8 {
            continue;
        }
        let mut gammas = Vec::new();
        for t in &ts {
            let l = PTorsionBundle::new(&c, t).unwrap();
            let g = cartier_class(&c, &l).unwrap();
            gammas.push(holomorphic_coords(&g).unwrap().to_vec());
            assert_eq!(h1_dim(&c, &l.rep().neg()).unwrap(), 1);
            let k = canonical_divisor(&c);
            assert_eq!(rr_space(&c, &k.add(l.rep())).unwrap().dim(), 1);
            let fr = frobenius_h1(&c, &l.rep().neg(), Some(&l)).unwrap();
            assert_eq!((fr.rows(), fr.cols()), (2, 1));
            assert_eq!(
                frobenius_h1(&c, &l.rep().neg(), None).unwrap_err(),
                Error::MissingTrivialization
            );
        }
        assert_eq!(rank(&fd, &gammas, 2), 2);
        // tampered trivialization
        let l = PTorsionBundle::new(&c, &ts[0]).unwrap();
        let bad = l.g() * &FunctionElement::x(&c);
        assert_eq!(
            PTorsionBundle::from_parts(&c, &ts[0], bad).unwrap_err(),
            Error::BadTrivialization
        );
        tested += 1;
    }
    // trivial class rejected
    let c = Curve::random(&fd, &mut rng);
    let id = crate::jacobian::MumfordClass::identity(&c);
    assert_eq!(PTorsionBundle::new(&c, &id).unwrap_err(), Error::NotOrderP);
}
