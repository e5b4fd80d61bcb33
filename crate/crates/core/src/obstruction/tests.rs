use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cohomology::{h0_dim, h1_dim, rr_space};
use crate::error::Error;
use crate::fields::linalg::rank;
use crate::fields::Fe;
use crate::hyperelliptic::{Differential, Divisor, FunctionElement, Place};
use crate::jacobian::{divisor_class, jac_scalar_mul};

fn cert3() -> &'static Certificate {
    static C: OnceLock<Certificate> = OnceLock::new();
    C.get_or_init(|| certificate_build(3, 1, &Budget::default()).unwrap())
}

fn inst3() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| certificate_instance(cert3()).unwrap())
}

#[test]
fn embedding_degrees_and_excluded_pencils() {
    let inst = inst3();
    let e = &inst.embedding;
    assert_eq!(e.ruling_degrees().unwrap(), (3, 2));
    assert_eq!(e.tangent_summand_degrees().unwrap(), (4, 6));
    assert_eq!(e.form.bidegree(), (2, 3));
    let c = &inst.curve;
    let pts = c.rational_places();
    let p = pts.iter().find(|p| !p.is_infinity() && !p.is_ramified()).unwrap();
    let k_plus_p = Divisor::infinity(2).add(&Divisor::point(p.clone()));
    assert_eq!(embed_bidegree_2_3(c, &k_plus_p).unwrap_err(), Error::ExcludedPencil);
    // P + iota(P) is canonical
    let q = pts.iter().find(|q| *q != p && !q.is_infinity()).unwrap();
    let conj = Divisor::point(p.clone()).add(&Divisor::point(p.conjugate())).add(&Divisor::point(q.clone()));
    assert_eq!(embed_bidegree_2_3(c, &conj).unwrap_err(), Error::ExcludedPencil);
    assert!(matches!(
        embed_bidegree_2_3(c, &Divisor::infinity(2)),
        Err(Error::Malformed(_))
    ));
}

#[test]
fn map_separates_rational_points() {
    let inst = inst3();
    let c = &inst.curve;
    let fd = c.field();
    let (a, b, den) = inst.embedding.h.integral_form();
    let mut seen = std::collections::BTreeSet::new();
    let mut n = 0;
    for pl in c.rational_places() {
        let Some((x, y)) = pl.rational_point() else { continue };
        let d = den.eval(x);
        if d.is_zero() {
            continue;
        }
        let h = fd.div(fd.add(a.eval(x), fd.mul(b.eval(x), y)), d).unwrap();
        assert!(seen.insert((x, h)), "two points share an image");
        n += 1;
    }
    assert!(n >= 10);
}

#[test]
fn normal_divisors_are_equivalent() {
    let inst = inst3();
    let e = &inst.embedding;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..3 {
        let g = BiForm::random(e.curve.field(), &mut rng);
        let nb = normal_bundle_divisor(e, &g).unwrap();
        assert_eq!(nb.divisor.degree(), 12);
        assert!(nb.divisor.is_effective());
        assert!(divisor_class(&e.curve, &nb.divisor.sub(&inst.normal.divisor)).is_identity());
        // 2 deg O(1,0)|_C + 3 deg O(0,1)|_C
        let (a, b) = e.ruling_degrees().unwrap();
        assert_eq!(2 * a + 3 * b, 12);
    }
    let zero = BiForm::new(std::array::from_fn(|_| crate::fields::Poly::zero(e.curve.field()))).unwrap();
    assert!(matches!(normal_bundle_divisor(e, &zero), Err(Error::DegenerateChart(_))));
}

#[test]
fn beta_is_choice_independent_and_nonzero() {
    let inst = inst3();
    let fd = inst.curve.field();
    let base = inst.beta.values().to_vec();
    assert_eq!(base.len(), 15);
    assert!(!inst.beta.is_zero());
    let choices = [
        Splitting::horizontal(fd),
        Splitting { mu: fd.one(), lambda: fd.one() },
        Splitting { mu: fd.one(), lambda: fd.from_int(2) },
        Splitting { mu: fd.from_int(2), lambda: fd.one() },
        Splitting { mu: fd.from_index(5).unwrap(), lambda: fd.from_index(11).unwrap() },
    ];
    for s in choices {
        let other = beta_functional_with(&inst.embedding, &inst.normal, s).unwrap();
        assert_eq!(other.values(), &base[..], "splitting {s:?}");
    }
}

#[test]
fn dimension_ledger_and_product_rank() {
    let inst = inst3();
    let c = &inst.curve;
    let n = &inst.normal.divisor;
    let r = inst.bundle.rep();
    let k = Divisor::infinity(2);
    assert_eq!(h0_dim(c, &n.sub(r)).unwrap(), 11);
    assert_eq!(h0_dim(c, &k).unwrap(), 2);
    assert_eq!(h0_dim(c, &k.add(r)).unwrap(), 1);
    assert_eq!(h0_dim(c, &k.scale(2).add(n)).unwrap(), 15);
    assert_eq!(h1_dim(c, &r.neg()).unwrap(), 1);
    assert_eq!(h1_dim(c, &Divisor::zero()).unwrap(), 2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let fd = c.field();
    for _ in 0..5 {
        let b = c.random_effective_divisor(4, &mut rng);
        let big = rr_space(c, &k.scale(2).add(n).sub(&b)).unwrap();
        let small = rr_space(c, &k.add(n).sub(&b)).unwrap();
        assert_eq!((big.dim(), small.dim()), (11, 9));
        let mut rows = Vec::new();
        for s in small.basis() {
            for w in [FunctionElement::one(c), FunctionElement::x(c)] {
                rows.push(big.coordinates(&(s * &w)).unwrap());
            }
        }
        assert_eq!(rank(fd, &rows, 11), 11);
        assert!(inst.beta.restricted(&b).unwrap().iter().any(|v| !v.is_zero()));
    }
}

#[test]
fn base_locus_of_products() {
    let inst = inst3();
    let c = &inst.curve;
    let fd = c.field();
    let r = inst.bundle.rep();
    let n = &inst.normal.divisor;
    let k = Divisor::infinity(2);
    let b_l = inst.alpha.divisor().unwrap().add(&k).add(r);
    assert!(b_l.is_effective() && b_l.degree() == 2);
    let target = rr_space(c, &k.add(n).sub(&b_l)).unwrap();
    assert_eq!(target.dim(), 11);
    let rows: Vec<Vec<Fe>> = inst
        .delta_space
        .basis()
        .iter()
        .map(|d| target.coordinates(&(d * &inst.alpha)).unwrap())
        .collect();
    assert_eq!(rank(fd, &rows, 11), 11);
}

#[test]
fn obstruction_is_multilinear() {
    let inst = inst3();
    let fd = inst.curve.field();
    let base = obstruction_scalar(&inst.beta, &inst.delta, &inst.gamma, &inst.alpha).unwrap();
    assert!(!base.is_zero());
    let c = fd.from_index(7).unwrap();
    let scaled = obstruction_scalar(&inst.beta, &inst.delta.scale(c), &inst.gamma, &inst.alpha).unwrap();
    assert_eq!(scaled, fd.mul(c, base));
    let zero_gamma = Differential::new(FunctionElement::zero(&inst.curve));
    assert!(obstruction_scalar(&inst.beta, &inst.delta, &zero_gamma, &inst.alpha).unwrap().is_zero());
    assert_eq!(
        obstruction_scalar(&inst.beta, &inst.delta, &inst.gamma, &FunctionElement::zero(&inst.curve)).unwrap_err(),
        Error::ZeroFunction
    );
    let d = delta_divisor(&inst.normal, &inst.bundle, &inst.delta).unwrap();
    assert_eq!(d, inst.blowup);
    assert!(is_reduced_rational(&d));
    let cls = divisor_class(&inst.curve, &inst.normal.divisor.sub(&d));
    assert_eq!(cls, *inst.bundle.class());
    assert!(jac_scalar_mul(&inst.curve, 3, &cls).is_identity());
}

#[test]
fn round_trip_and_determinism() {
    let c = cert3();
    let report = certificate_verify(c).unwrap();
    assert!(report.passed(), "{report:?}");
    let json = c.to_json();
    assert_eq!(&Certificate::from_json(&json).unwrap(), c);
    let again = certificate_build(3, 1, &Budget::default()).unwrap();
    assert_eq!(again.to_json(), json);
    let other = certificate_build(3, 2, &Budget::default()).unwrap();
    assert_ne!(other.to_json(), json);
    assert!(certificate_verify(&other).unwrap().passed());
}

fn first_failure(c: &Certificate) -> Option<usize> {
    certificate_verify(c).unwrap().first_failure()
}

#[test]
fn mutations_fail_at_the_intended_check() {
    let good = cert3();
    let mut m = good.clone();
    m.gamma = [0, 0];
    assert_eq!(first_failure(&m), Some(3));

    let mut m = good.clone();
    m.delta_coords = vanishing_delta(good).unwrap();
    let rep = certificate_verify(&m).unwrap();
    assert!(!rep.check(4).passed);
    assert_eq!(rep.first_failure(), Some(4));

    // g times x is no longer a p-th power trivialization
    let inst = inst3();
    let mut m = good.clone();
    let gx = inst.bundle.g() * &FunctionElement::x(&inst.curve);
    let (a, b, h) = gx.integral_form();
    let idx = |p: &crate::fields::Poly| p.coeffs().iter().map(|c| c.index()).collect::<Vec<_>>();
    m.trivialization = FunctionRepr { a: idx(&a), b: idx(&b), h: idx(&h) };
    assert_eq!(first_failure(&m), Some(3));

    // move one blow-up point
    let mut m = good.clone();
    let spare = inst
        .curve
        .rational_places()
        .into_iter()
        .find(|pl| inst.blowup.get(pl) == 0)
        .unwrap();
    m.blowup_points[0] = spare.rational_point().map(|(x, y)| [x.index(), y.index()]);
    assert_eq!(first_failure(&m), Some(2));

    // a repeated point breaks reducedness
    let mut m = good.clone();
    m.blowup_points[1] = m.blowup_points[0];
    assert!(!certificate_verify(&m).unwrap().check(7).passed);

    let mut m = good.clone();
    m.cartier_manin[0][0] = (m.cartier_manin[0][0] + 1) % 27;
    assert_eq!(first_failure(&m), Some(6));

    let mut m = good.clone();
    m.frob_neg_l.entries[0][0] = (m.frob_neg_l.entries[0][0] + 1) % 27;
    assert_eq!(first_failure(&m), Some(5));

    let mut m = good.clone();
    m.obstruction = (m.obstruction + 1) % 27;
    assert_eq!(first_failure(&m), Some(4));

    let mut m = good.clone();
    m.f = vec![0, 0, 0, 0, 0, 1];
    assert_eq!(first_failure(&m), Some(1));
}

#[test]
fn malformed_certificates() {
    assert!(matches!(certificate_verify_json("{"), Err(Error::Malformed(_))));
    let mut m = cert3().clone();
    m.schema = "other".into();
    assert!(matches!(certificate_verify(&m), Err(Error::Malformed(_))));
    let mut m = cert3().clone();
    m.f[0] = 1000;
    assert!(matches!(certificate_verify(&m), Err(Error::Malformed(_))));
    let mut m = cert3().clone();
    m.modulus = vec![1, 0, 0, 1];
    assert!(certificate_verify(&m).is_err());
}

#[test]
fn budget_exhaustion_reports_statistics() {
    let tiny = Budget { curves: 1, curves_per_field: 1, ..Budget::default() };
    // seed 7 draws a first curve without rational 3-torsion
    match certificate_build(3, 7, &tiny) {
        Err(Error::BudgetExhausted(stats)) => assert_eq!(stats.curves, 1),
        Ok(c) => assert!(certificate_verify(&c).unwrap().passed()),
        Err(e) => panic!("{e}"),
    }
    let _ = Place::Infinity;
}

#[test]
fn beta_is_invariant_under_moving_the_pencil() {
    let inst = inst3();
    let c = &inst.curve;
    let fd = c.field();
    let e = &inst.embedding;
    let g = &inst.normal.form.coeffs;
    for ci in [0u32, 1, 5] {
        let cc = fd.from_index(ci).unwrap();
        let shifted = &e.h - &FunctionElement::constant(c, cc);
        let h2 = shifted.inv().unwrap();
        let e2 = embed_with_function(c, &h2).unwrap();
        assert_ne!(e2.a_div, e.a_div);
        // G'(x, t') = t'^2 G(x, c + 1/t')
        let k = |p: &crate::fields::Poly, a: Fe| p.scale(a);
        let two_c = fd.add(cc, cc);
        let g2 = BiForm::new([
            g[2].clone(),
            &g[1] + &k(&g[2], two_c),
            &(&g[0] + &k(&g[1], cc)) + &k(&g[2], fd.mul(cc, cc)),
        ])
        .unwrap();
        let nb2 = normal_bundle_divisor(&e2, &g2).unwrap();
        assert_eq!(nb2.divisor, inst.normal.divisor);
        let b2 = beta_functional(&e2, &nb2).unwrap();
        assert!(!b2.is_zero());
        let rows = vec![inst.beta.values().to_vec(), b2.values().to_vec()];
        assert_eq!(rank(fd, &rows, 15), 1);
    }
}
