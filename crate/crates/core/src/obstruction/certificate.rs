//! Certificate search, serialization and independent verification.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cohomology::{
    cartier_class, cartier_manin, frobenius_h1, holomorphic_coords, rr_space, PTorsionBundle, RRSpace,
    SemilinearMap,
};
use crate::error::{Error, Result};
use crate::fields::{Fe, Field, Poly};
use crate::hyperelliptic::{Curve, Differential, Divisor, FunctionElement, Place};
use crate::jacobian::{divisor_class, find_p_torsion, jac_scalar_mul, MumfordClass};
use crate::obstruction::beta::{beta_functional, choose_delta, is_reduced_rational, obstruction_scalar};
use crate::obstruction::embedding::{
    embed_bidegree_2_3, function_from_integral, normal_bundle_divisor, BiForm, EmbeddingData, NormalBundle,
};
use crate::obstruction::beta::BetaFunctional;

pub const SCHEMA_VERSION: &str = "nefcert-certificate/1";

/// Smallest field size tried first: enough rational points for twelve
/// distinct blow-up centres to be plausible.
pub const MIN_START_ORDER: u64 = 25;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Total random curves over all fields.
    pub curves: usize,
    /// Curves per extension degree before moving to `k + 1`.
    pub curves_per_field: usize,
    /// Random classes sampled when closing up the rational `p`-torsion.
    pub torsion_samples: usize,
    /// Pencils `A` tried per curve.
    pub pencils: usize,
    /// Rounds of `delta` sampling, each over every order-`p` class.
    pub delta_rounds: usize,
    /// Point draws per `delta` sample.
    pub delta_attempts: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            curves: 400,
            curves_per_field: 40,
            torsion_samples: 12,
            pencils: 2,
            delta_rounds: 4,
            delta_attempts: 40,
        }
    }
}

/// Per-stage counters of a search.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub field_degrees: Vec<u32>,
    pub curves: usize,
    pub non_ordinary: usize,
    pub few_points: usize,
    pub no_torsion: usize,
    pub excluded_pencils: usize,
    pub torsion_classes: usize,
    pub frobenius_rejected: usize,
    pub delta_failures: usize,
    pub zero_obstructions: usize,
}

impl std::fmt::Display for SearchStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "degrees {:?}, {} curves ({} non-ordinary, {} with few points, {} without rational p-torsion), \
             {} excluded pencils, {} torsion classes ({} rejected by Frobenius), \
             {} delta failures, {} zero obstructions",
            self.field_degrees,
            self.curves,
            self.non_ordinary,
            self.few_points,
            self.no_torsion,
            self.excluded_pencils,
            self.torsion_classes,
            self.frobenius_rejected,
            self.delta_failures,
            self.zero_obstructions
        )
    }
}

/// `(a + b y) / h` with polynomial coefficients as element indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionRepr {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub h: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRepr {
    pub rows: usize,
    pub cols: usize,
    pub twist: u64,
    pub entries: Vec<Vec<u32>>,
}

/// A rational point `[x, y]`; `None` is the point at infinity.
pub type PointRepr = Option<[u32; 2]>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub version: String,
    pub p: u64,
    pub k: u32,
    pub q: u64,
    /// Defining polynomial of `F_q` over `F_p`; empty when `k = 1`.
    pub modulus: Vec<u32>,
    /// Coefficients of the quintic `f`, low to high.
    pub f: Vec<u32>,
    /// The degree-3 pencil divisor `A`.
    pub pencil: Vec<PointRepr>,
    /// Auxiliary `(2,3)` form cutting out the normal divisor.
    pub aux_form: [Vec<u32>; 3],
    /// Mumford pair of the order-`p` class `L`.
    pub bundle_u: Vec<u32>,
    pub bundle_v: Vec<u32>,
    /// `g` with `div(g) = p R`.
    pub trivialization: FunctionRepr,
    pub delta_coords: Vec<u32>,
    /// The twelve blow-up points `D`.
    pub blowup_points: Vec<PointRepr>,
    /// `gamma = (c0 + c1 x) dx / y`.
    pub gamma: [u32; 2],
    pub alpha: FunctionRepr,
    pub obstruction: u32,
    pub frob_neg_l: MatrixRepr,
    pub cartier_manin: [[u32; 2]; 2],
    pub seed: u64,
    pub search: SearchStats,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        let c: Certificate = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        if c.schema != SCHEMA_VERSION {
            return Err(Error::Malformed(format!("unsupported schema {:?}", c.schema)));
        }
        Ok(c)
    }
}

fn poly_repr(p: &Poly) -> Vec<u32> {
    p.coeffs().iter().map(|c| c.index()).collect()
}

fn poly_from(field: &Field, c: &[u32]) -> Result<Poly> {
    let v = c.iter().map(|&i| field.from_index(i)).collect::<Result<Vec<Fe>>>()?;
    Ok(Poly::from_coeffs(field, v))
}

fn function_repr(phi: &FunctionElement) -> FunctionRepr {
    let (a, b, h) = phi.integral_form();
    FunctionRepr {
        a: poly_repr(&a),
        b: poly_repr(&b),
        h: poly_repr(&h),
    }
}

fn function_from(curve: &Curve, r: &FunctionRepr) -> Result<FunctionElement> {
    let fd = curve.field();
    let h = poly_from(fd, &r.h)?;
    if h.is_zero() {
        return Err(Error::Malformed("zero denominator".into()));
    }
    function_from_integral(curve, poly_from(fd, &r.a)?, poly_from(fd, &r.b)?, h)
}

fn point_repr(pl: &Place) -> PointRepr {
    pl.rational_point().map(|(x, y)| [x.index(), y.index()])
}

fn point_from(curve: &Curve, r: &PointRepr) -> Result<Place> {
    let Some([x, y]) = *r else {
        return Ok(Place::Infinity);
    };
    let fd = curve.field();
    let (x, y) = (fd.from_index(x)?, fd.from_index(y)?);
    curve
        .places_over(&Poly::linear(fd, x))
        .into_iter()
        .find(|pl| pl.degree() == 1 && pl.rational_point() == Some((x, y)))
        .ok_or_else(|| Error::Malformed("point not on the curve".into()))
}

fn matrix_repr(m: &SemilinearMap) -> MatrixRepr {
    MatrixRepr {
        rows: m.rows(),
        cols: m.cols(),
        twist: m.twist,
        entries: m.matrix.iter().map(|r| r.iter().map(|c| c.index()).collect()).collect(),
    }
}

fn cm_repr(m: &[[Fe; 2]; 2]) -> [[u32; 2]; 2] {
    [[m[0][0].index(), m[0][1].index()], [m[1][0].index(), m[1][1].index()]]
}

/// Smallest `k` with `p^k >= MIN_START_ORDER`.
pub fn start_degree(p: u64) -> u32 {
    let mut k = 1;
    while p.pow(k) < MIN_START_ORDER {
        k += 1;
    }
    k
}

/// Everything attached to one curve in the search.
struct CurveStage {
    curve: Curve,
    torsion: Vec<MumfordClass>,
}

/// One fully specified attempt, ready to be serialized.
struct Found {
    curve: Curve,
    pencil: Divisor,
    form: BiForm,
    bundle: PTorsionBundle,
    delta_coords: Vec<Fe>,
    d: Divisor,
    gamma: Differential,
    alpha: FunctionElement,
    obstruction: Fe,
    frob: SemilinearMap,
}

/// Seeded search for a certificate over `F_{p^k}`, escalating `k`.
pub fn certificate_build(p: u64, seed: u64, budget: &Budget) -> Result<Certificate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SearchStats::default();
    let mut k = start_degree(p);
    while stats.curves < budget.curves {
        let field = match Field::new(p, k) {
            Ok(f) => f,
            Err(Error::FieldTooLarge(_)) => break,
            Err(e) => return Err(e),
        };
        stats.field_degrees.push(k);
        for _ in 0..budget.curves_per_field {
            if stats.curves >= budget.curves {
                break;
            }
            stats.curves += 1;
            let Some(stage) = curve_stage(&field, budget, &mut stats, &mut rng)? else {
                continue;
            };
            if let Some(found) = search_curve(&stage, budget, &mut stats, &mut rng)? {
                return Ok(assemble(found, seed, stats));
            }
        }
        k += 1;
    }
    Err(Error::BudgetExhausted(Box::new(stats)))
}

fn curve_stage(
    field: &Field,
    budget: &Budget,
    stats: &mut SearchStats,
    rng: &mut ChaCha8Rng,
) -> Result<Option<CurveStage>> {
    let curve = Curve::random(field, rng);
    if !cartier_manin(&curve).1 {
        stats.non_ordinary += 1;
        return Ok(None);
    }
    if curve.rational_places().len() < 14 {
        stats.few_points += 1;
        return Ok(None);
    }
    let torsion = find_p_torsion(&curve, budget.torsion_samples, rng)?;
    if torsion.is_empty() {
        stats.no_torsion += 1;
        return Ok(None);
    }
    Ok(Some(CurveStage { curve, torsion }))
}

/// Per-class data that does not depend on the pencil.
struct BundleStage {
    bundle: PTorsionBundle,
    gamma: Differential,
    alpha: FunctionElement,
    frob: SemilinearMap,
}

fn bundle_stage(curve: &Curve, cls: &MumfordClass, stats: &mut SearchStats) -> Result<Option<BundleStage>> {
    stats.torsion_classes += 1;
    let bundle = PTorsionBundle::new(curve, cls)?;
    let frob = frobenius_h1(curve, &bundle.rep().neg(), Some(&bundle))?;
    if frob.cols() != 1 || frob.rows() != 2 {
        return Err(Error::Internal(format!(
            "Frobenius on H^1(-L) has shape {}x{}, expected 2x1",
            frob.rows(),
            frob.cols()
        )));
    }
    if !frob.is_injective() {
        stats.frobenius_rejected += 1;
        return Ok(None);
    }
    let gamma = cartier_class(curve, &bundle)?;
    let kl = rr_space(curve, &Divisor::infinity(2).add(bundle.rep()))?;
    if kl.dim() != 1 {
        return Err(Error::Internal(format!("h^0(K + L) = {}, expected 1", kl.dim())));
    }
    let alpha = kl.basis()[0].clone();
    Ok(Some(BundleStage {
        bundle,
        gamma,
        alpha,
        frob,
    }))
}

fn search_curve(
    stage: &CurveStage,
    budget: &Budget,
    stats: &mut SearchStats,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Found>> {
    let curve = &stage.curve;
    let mut bundles = Vec::new();
    for cls in &stage.torsion {
        if let Some(b) = bundle_stage(curve, cls, stats)? {
            bundles.push(b);
        }
    }
    if bundles.is_empty() {
        return Ok(None);
    }
    let pts = curve.rational_places();
    for _ in 0..budget.pencils {
        let mut pencil = Divisor::zero();
        for i in sample(rng, pts.len(), 3).iter() {
            pencil.add_at(pts[i].clone(), 1);
        }
        let e = match embed_bidegree_2_3(curve, &pencil) {
            Ok(e) => e,
            Err(Error::ExcludedPencil) => {
                stats.excluded_pencils += 1;
                continue;
            }
            Err(err) => return Err(err),
        };
        let nb = loop {
            let g = BiForm::random(curve.field(), rng);
            match normal_bundle_divisor(&e, &g) {
                Ok(nb) => break nb,
                Err(Error::DegenerateChart(_)) => continue,
                Err(err) => return Err(err),
            }
        };
        let beta = beta_functional(&e, &nb)?;
        if beta.values().len() != 15 {
            return Err(Error::Internal(format!("h^0(2K + N) = {}, expected 15", beta.values().len())));
        }
        for _ in 0..budget.delta_rounds {
            for b in &bundles {
                let choice = match choose_delta(&e, &nb, &b.bundle, budget.delta_attempts, rng) {
                    Ok(c) => c,
                    Err(Error::ExtendField(_)) => {
                        stats.delta_failures += 1;
                        continue;
                    }
                    Err(err) => return Err(err),
                };
                let obs = obstruction_scalar(&beta, &choice.delta, &b.gamma, &b.alpha)?;
                if obs.is_zero() {
                    stats.zero_obstructions += 1;
                    continue;
                }
                return Ok(Some(Found {
                    curve: curve.clone(),
                    pencil: e.a_div.clone(),
                    form: nb.form.clone(),
                    bundle: b.bundle.clone(),
                    delta_coords: choice.coords,
                    d: choice.divisor,
                    gamma: b.gamma.clone(),
                    alpha: b.alpha.clone(),
                    obstruction: obs,
                    frob: b.frob.clone(),
                }));
            }
        }
    }
    Ok(None)
}

fn assemble(found: Found, seed: u64, stats: SearchStats) -> Certificate {
    let curve = &found.curve;
    let fd = curve.field();
    let points = |d: &Divisor| -> Vec<PointRepr> {
        d.iter()
            .flat_map(|(pl, n)| std::iter::repeat_n(point_repr(pl), n as usize))
            .collect()
    };
    let gamma = holomorphic_coords(&found.gamma).expect("dlog form is regular");
    Certificate {
        schema: SCHEMA_VERSION.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        p: fd.characteristic(),
        k: fd.degree(),
        q: fd.order(),
        modulus: fd.modulus().to_vec(),
        f: poly_repr(curve.f()),
        pencil: points(&found.pencil),
        aux_form: std::array::from_fn(|i| poly_repr(&found.form.coeffs[i])),
        bundle_u: poly_repr(found.bundle.class().u()),
        bundle_v: poly_repr(found.bundle.class().v()),
        trivialization: function_repr(found.bundle.g()),
        delta_coords: found.delta_coords.iter().map(|c| c.index()).collect(),
        blowup_points: points(&found.d),
        gamma: [gamma[0].index(), gamma[1].index()],
        alpha: function_repr(&found.alpha),
        obstruction: found.obstruction.index(),
        frob_neg_l: matrix_repr(&found.frob),
        cartier_manin: cm_repr(&cartier_manin(curve).0),
        seed,
        search: stats,
    }
}

/// Outcome of one verification predicate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub index: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, index: usize) -> &CheckResult {
        &self.checks[index - 1]
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.checks.iter().find(|c| !c.passed).map(|c| c.index)
    }
}

pub const CHECK_NAMES: [&str; 7] = [
    "f defines a smooth genus-2 curve",
    "N - D has order exactly p in the Picard group",
    "div(g) = p R and gamma = dg/g is regular and nonzero",
    "obstruction scalar is nonzero (pL nontrivial on the thickening 2C)",
    "Frobenius is injective on H^1(C, -L)",
    "Cartier-Manin matrix is nonsingular (Frobenius injective on H^1(C, O))",
    "D consists of 12 distinct rational points",
];

struct Checks(Vec<CheckResult>);

impl Checks {
    fn set(&mut self, i: usize, passed: bool, detail: impl Into<String>) {
        self.0[i - 1].passed = passed;
        self.0[i - 1].detail = detail.into();
    }

    fn from_result(&mut self, i: usize, r: Result<String>) {
        match r {
            Ok(d) => self.set(i, true, d),
            Err(e) => self.set(i, false, e.to_string()),
        }
    }
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}

/// Decoded certificate data shared by the checks.
struct Decoded {
    pencil: Divisor,
    form: BiForm,
    cls: MumfordClass,
    g: FunctionElement,
    d: Divisor,
    d_len: usize,
    gamma: Differential,
    alpha: FunctionElement,
}

fn decode(cert: &Certificate, curve: &Curve) -> Result<Decoded> {
    let fd = curve.field();
    let points = |v: &[PointRepr]| -> Result<Divisor> {
        let mut d = Divisor::zero();
        for r in v {
            d.add_at(point_from(curve, r)?, 1);
        }
        Ok(d)
    };
    let form = BiForm::new(std::array::from_fn(|i| poly_from(fd, &cert.aux_form[i])).map_or_err()?)?;
    let u = poly_from(fd, &cert.bundle_u)?;
    let v = poly_from(fd, &cert.bundle_v)?;
    let cls = MumfordClass::new(curve, u, v).map_err(|e| Error::Malformed(format!("bundle class: {e}")))?;
    let gamma = [fd.from_index(cert.gamma[0])?, fd.from_index(cert.gamma[1])?];
    let gamma_f = FunctionElement::from_poly(curve, Poly::from_coeffs(fd, gamma.to_vec()));
    Ok(Decoded {
        pencil: points(&cert.pencil)?,
        form,
        cls,
        g: function_from(curve, &cert.trivialization)?,
        d: points(&cert.blowup_points)?,
        d_len: cert.blowup_points.len(),
        gamma: Differential::over_y(&gamma_f),
        alpha: function_from(curve, &cert.alpha)?,
    })
}

trait ArrayResult<T> {
    fn map_or_err(self) -> Result<[T; 3]>;
}

impl<T> ArrayResult<T> for [Result<T>; 3] {
    fn map_or_err(self) -> Result<[T; 3]> {
        let [a, b, c] = self;
        Ok([a?, b?, c?])
    }
}

/// Recomputes every hypothesis from the certificate alone. Errors mean the
/// certificate could not be decoded; failed hypotheses are reported.
pub fn certificate_verify(cert: &Certificate) -> Result<VerificationReport> {
    if cert.schema != SCHEMA_VERSION {
        return Err(Error::Malformed(format!("unsupported schema {:?}", cert.schema)));
    }
    if cert.k == 1 && !cert.modulus.is_empty() {
        return Err(Error::Malformed("prime field with a modulus".into()));
    }
    let field = cert_field(cert)?;
    if field.order() != cert.q || field.degree() != cert.k {
        return Err(Error::Malformed("field size mismatch".into()));
    }
    let mut checks = Checks(
        CHECK_NAMES
            .iter()
            .enumerate()
            .map(|(i, n)| CheckResult {
                index: i + 1,
                name: n.to_string(),
                passed: false,
                detail: "not evaluated".into(),
            })
            .collect(),
    );
    let f = poly_from(&field, &cert.f)?;
    let curve = match Curve::new(f) {
        Ok(c) => c,
        Err(e) => {
            checks.set(1, false, e.to_string());
            return Ok(VerificationReport { checks: checks.0 });
        }
    };
    checks.set(1, true, format!("y^2 = {} over F_{}", curve.f(), field.order()));
    let dec = decode(cert, &curve)?;
    let p = field.characteristic() as i64;

    let embedding = embed_bidegree_2_3(&curve, &dec.pencil).and_then(|e| {
        let nb = normal_bundle_divisor(&e, &dec.form)?;
        Ok((e, nb))
    });

    checks.from_result(
        2,
        (|| {
            let (_, nb) = embedding.clone()?;
            let c = divisor_class(&curve, &nb.divisor.sub(&dec.d));
            if dec.d.degree() != 12 {
                return Err(fail(format!("deg D = {}", dec.d.degree())));
            }
            if c.is_identity() {
                return Err(fail("N - D is principal"));
            }
            if !jac_scalar_mul(&curve, p, &c).is_identity() {
                return Err(fail("p (N - D) is not principal"));
            }
            Ok(format!("class of N - D: u = {}", c.u()))
        })(),
    );

    let rep = dec.cls.divisor(&curve)?;
    let order_p = !dec.cls.is_identity() && jac_scalar_mul(&curve, p, &dec.cls).is_identity();
    checks.from_result(
        3,
        (|| {
            if !order_p {
                return Err(fail("L is not of exact order p"));
            }
            if dec.g.is_zero() || dec.g.divisor()? != rep.scale(p) {
                return Err(fail("div(g) differs from p R"));
            }
            let dlog = Differential::new(dec.g.derivative().div(&dec.g)?);
            if dlog != dec.gamma {
                return Err(fail("gamma differs from dg/g"));
            }
            if dec.gamma.is_zero() {
                return Err(fail("gamma vanishes"));
            }
            if !dec.gamma.divisor()?.is_effective() {
                return Err(fail("gamma is not regular"));
            }
            Ok("dg/g matches gamma".into())
        })(),
    );

    checks.from_result(
        4,
        (|| {
            let (e, nb) = embedding.clone()?;
            let beta = beta_functional(&e, &nb)?;
            let nl = rr_space(&curve, &nb.divisor.sub(&rep))?;
            if nl.dim() != 11 || cert.delta_coords.len() != 11 {
                return Err(fail(format!("h^0(N - L) = {}, {} delta coordinates", nl.dim(), cert.delta_coords.len())));
            }
            let coords = cert
                .delta_coords
                .iter()
                .map(|&i| field.from_index(i))
                .collect::<Result<Vec<Fe>>>()?;
            let delta = nl.element(&coords);
            if delta.is_zero() {
                return Err(fail("delta vanishes"));
            }
            let kl = rr_space(&curve, &Divisor::infinity(2).add(&rep))?;
            if dec.alpha.is_zero() || !kl.contains(&dec.alpha) || kl.dim() != 1 {
                return Err(fail("alpha does not span H^0(K + L)"));
            }
            let zeros = delta.divisor()?.add(&nb.divisor).sub(&rep);
            if zeros != dec.d {
                return Err(fail("D is not the zero divisor of delta"));
            }
            let obs = obstruction_scalar(&beta, &delta, &dec.gamma, &dec.alpha)?;
            if obs.index() != cert.obstruction {
                return Err(fail(format!(
                    "recomputed obstruction {} differs from recorded {}",
                    field.display(obs),
                    cert.obstruction
                )));
            }
            if obs.is_zero() {
                return Err(fail("obstruction vanishes"));
            }
            Ok(format!("beta(delta gamma alpha) = {}", field.display(obs)))
        })(),
    );

    checks.from_result(
        5,
        (|| {
            let bundle = PTorsionBundle::from_parts(&curve, &dec.cls, dec.g.clone())?;
            let m = frobenius_h1(&curve, &rep.neg(), Some(&bundle))?;
            if matrix_repr(&m) != cert.frob_neg_l {
                return Err(fail("recorded Frobenius matrix differs"));
            }
            if !m.is_injective() {
                return Err(fail("Frobenius kills H^1(-L)"));
            }
            Ok(format!("{}x{} matrix of rank {}", m.rows(), m.cols(), m.rank()))
        })(),
    );

    checks.from_result(
        6,
        (|| {
            let (m, ordinary) = cartier_manin(&curve);
            if cm_repr(&m) != cert.cartier_manin {
                return Err(fail("recorded Cartier-Manin matrix differs"));
            }
            if !ordinary {
                return Err(fail("Cartier-Manin matrix is singular"));
            }
            Ok("nonsingular".into())
        })(),
    );

    checks.from_result(
        7,
        (|| {
            if dec.d_len != 12 || !is_reduced_rational(&dec.d) {
                return Err(fail(format!("D = {}", dec.d)));
            }
            Ok(format!("D = {}", dec.d))
        })(),
    );
    Ok(VerificationReport { checks: checks.0 })
}

/// Parses and verifies a certificate file's contents.
pub fn certificate_verify_json(s: &str) -> Result<VerificationReport> {
    certificate_verify(&Certificate::from_json(s)?)
}

/// The pipeline objects a certificate describes, recomputed from it.
#[derive(Clone, Debug)]
pub struct Instance {
    pub curve: Curve,
    pub embedding: EmbeddingData,
    pub normal: NormalBundle,
    pub beta: BetaFunctional,
    pub bundle: PTorsionBundle,
    /// Basis of `H^0(N - L)` in which `delta_coords` are expressed.
    pub delta_space: RRSpace,
    pub delta: FunctionElement,
    pub blowup: Divisor,
    pub gamma: Differential,
    pub alpha: FunctionElement,
}

fn cert_field(cert: &Certificate) -> Result<Field> {
    if cert.k == 1 {
        Field::new(cert.p, 1)
    } else {
        Field::with_modulus(cert.p, &cert.modulus)
    }
}

pub fn certificate_instance(cert: &Certificate) -> Result<Instance> {
    let field = cert_field(cert)?;
    let curve = Curve::new(poly_from(&field, &cert.f)?)?;
    let dec = decode(cert, &curve)?;
    let embedding = embed_bidegree_2_3(&curve, &dec.pencil)?;
    let normal = normal_bundle_divisor(&embedding, &dec.form)?;
    let beta = beta_functional(&embedding, &normal)?;
    let bundle = PTorsionBundle::from_parts(&curve, &dec.cls, dec.g.clone())?;
    let delta_space = rr_space(&curve, &normal.divisor.sub(bundle.rep()))?;
    let coords = cert
        .delta_coords
        .iter()
        .map(|&i| field.from_index(i))
        .collect::<Result<Vec<Fe>>>()?;
    if coords.len() != delta_space.dim() {
        return Err(Error::Malformed("wrong number of delta coordinates".into()));
    }
    let delta = delta_space.element(&coords);
    Ok(Instance {
        curve,
        embedding,
        normal,
        beta,
        bundle,
        delta_space,
        delta,
        blowup: dec.d,
        gamma: dec.gamma,
        alpha: dec.alpha,
    })
}

/// Coordinates of a nonzero `delta` with `beta(delta gamma alpha) = 0`.
pub fn vanishing_delta(cert: &Certificate) -> Result<Vec<u32>> {
    let inst = certificate_instance(cert)?;
    let field = inst.curve.field().clone();
    let row: Vec<Fe> = inst
        .delta_space
        .basis()
        .iter()
        .map(|d| obstruction_scalar(&inst.beta, d, &inst.gamma, &inst.alpha))
        .collect::<Result<_>>()?;
    let ker = crate::fields::linalg::kernel(&field, &[row], inst.delta_space.dim());
    let v = ker.first().ok_or_else(|| fail("functional has trivial kernel"))?;
    Ok(v.iter().map(|c| c.index()).collect())
}
