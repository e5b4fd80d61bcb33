//! The map `(h, x): C -> P^1 x P^1` given by the canonical pencil `|K|` and a
//! degree-3 pencil `|A|`, together with its defining form.

use rand::Rng;

use crate::cohomology::rr_space;
use crate::error::{Error, Result};
use crate::fields::{Field, Poly, RationalFunction};
use crate::hyperelliptic::{Curve, Divisor, FunctionElement, Place};
use crate::jacobian::divisor_class;

/// `c0(x) + c1(x) t + c2(x) t^2` with `deg c_i <= 3`: a form of bidegree
/// `(2, 3)` on `P^1 x P^1` in the affine chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiForm {
    pub coeffs: [Poly; 3],
}

impl BiForm {
    pub fn new(coeffs: [Poly; 3]) -> Result<BiForm> {
        if coeffs.iter().any(|c| c.deg() > 3) {
            return Err(Error::Malformed("form coefficient of x-degree above 3".into()));
        }
        Ok(BiForm { coeffs })
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> BiForm {
        BiForm {
            coeffs: std::array::from_fn(|_| Poly::random(field, 4, rng)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `(t-degree, x-degree)`.
    pub fn bidegree(&self) -> (i64, i64) {
        let t = (0..3).rev().find(|&i| !self.coeffs[i].is_zero()).map_or(-1, |i| i as i64);
        let x = self.coeffs.iter().map(|c| c.deg()).max().unwrap_or(-1);
        (t, x)
    }

    /// Restriction to the curve along `t = h`.
    pub fn restrict(&self, curve: &Curve, h: &FunctionElement) -> FunctionElement {
        let c: Vec<FunctionElement> = self
            .coeffs
            .iter()
            .map(|p| FunctionElement::from_poly(curve, p.clone()))
            .collect();
        &(&c[0] + &(&c[1] * h)) + &(&c[2] * &(h * h))
    }

    /// Partial derivatives `(d/dx, d/dt)` restricted along `t = h`.
    pub fn partials(&self, curve: &Curve, h: &FunctionElement) -> (FunctionElement, FunctionElement) {
        let dx = BiForm {
            coeffs: std::array::from_fn(|i| self.coeffs[i].derivative()),
        };
        let two = curve.field().from_int(2);
        let dt = BiForm {
            coeffs: [
                self.coeffs[1].clone(),
                self.coeffs[2].scale(two),
                Poly::zero(curve.field()),
            ],
        };
        (dx.restrict(curve, h), dt.restrict(curve, h))
    }
}

#[derive(Clone, Debug)]
pub struct EmbeddingData {
    pub curve: Curve,
    /// The degree-3 pencil divisor, equal to the polar divisor of `h`.
    pub a_div: Divisor,
    /// Nonconstant element of `L(A)`: the first coordinate of the map.
    pub h: FunctionElement,
    /// `{1, x}` spanning `H^0(K)` and `{1, h}` spanning `H^0(A)`.
    pub canonical_basis: [FunctionElement; 2],
    pub pencil_basis: [FunctionElement; 2],
    /// Defining form of the image, content-free with monic `t^2` coefficient.
    pub form: BiForm,
    /// `F_x` and `F_t` along the curve.
    pub fx: FunctionElement,
    pub ft: FunctionElement,
}

impl EmbeddingData {
    /// Degrees of `O(1,0)|_C` and `O(0,1)|_C`.
    pub fn ruling_degrees(&self) -> Result<(i64, i64)> {
        let dh = self.h.divisor()?.negative_part().degree();
        let dx = FunctionElement::x(&self.curve).divisor()?.negative_part().degree();
        Ok((dh, dx))
    }

    /// Degrees of the two summands `O(2,0)|_C`, `O(0,2)|_C` of `TX|_C`,
    /// ascending.
    pub fn tangent_summand_degrees(&self) -> Result<(i64, i64)> {
        let (a, b) = self.ruling_degrees()?;
        Ok(((2 * a).min(2 * b), (2 * a).max(2 * b)))
    }

    /// Finite ramification places of `x` together with infinity.
    pub fn weierstrass_places(&self) -> Vec<Place> {
        let mut out = Vec::new();
        for (u, _) in self.curve.f().factor().expect("f is nonzero") {
            out.extend(self.curve.places_over(&u));
        }
        out.push(Place::Infinity);
        out
    }
}

/// Builds the bidegree-`(2,3)` model from an effective degree-3 divisor.
///
/// The map `(h, x)` is birational onto its image (since `h` is not a function
/// of `x`) with `deg x = 2` and `deg h = 3`, so the image is a `(2,3)` curve
/// of arithmetic genus 2 birational to a genus-2 curve; hence it is smooth
/// and the map is an embedding.
pub fn embed_bidegree_2_3(curve: &Curve, a_div: &Divisor) -> Result<EmbeddingData> {
    if a_div.degree() != 3 || !a_div.is_effective() {
        return Err(Error::Malformed("pencil divisor must be effective of degree 3".into()));
    }
    // A = K + P exactly when [A - 3 inf] has a representative of degree <= 1
    if divisor_class(curve, a_div).u().deg() <= 1 {
        return Err(Error::ExcludedPencil);
    }
    let space = rr_space(curve, a_div)?;
    if space.dim() != 2 {
        return Err(Error::PencilDimension(space.dim()));
    }
    let h = space
        .basis()
        .iter()
        .find(|b| !(b.b().is_zero() && b.a().num().deg() <= 0 && b.a().den().deg() == 0))
        .cloned()
        .ok_or_else(|| Error::Internal("no nonconstant section of the pencil".into()))?;
    if h.divisor()?.negative_part() != *a_div {
        return Err(Error::Internal("pencil has a base point".into()));
    }
    embed_with_function(curve, &h)
}

/// The map `(h, x)` for a function `h` of degree 3; the pencil divisor is
/// the polar divisor of `h`.
pub fn embed_with_function(curve: &Curve, h: &FunctionElement) -> Result<EmbeddingData> {
    let a_div = h.divisor()?.negative_part();
    if a_div.degree() != 3 {
        return Err(Error::DegenerateChart(format!("h has degree {}, expected 3", a_div.degree())));
    }
    let fd = curve.field();
    let (a, b, den) = h.integral_form();
    if b.is_zero() {
        return Err(Error::DegenerateChart("pencil is pulled back from the x-line".into()));
    }
    // (den t - a)^2 = b^2 f
    let two = fd.from_int(2);
    let c2 = &den * &den;
    let c1 = (&a * &den).scale(fd.neg(two));
    let c0 = &(&a * &a) - &(&(&b * &b) * curve.f());
    let content = c2.gcd(&c1).gcd(&c0);
    let lc = c2.div_exact(&content).expect("content divides").lc();
    let inv = fd.inv(lc)?;
    let norm = |c: &Poly| c.div_exact(&content).expect("content divides").scale(inv);
    let form = BiForm {
        coeffs: [norm(&c0), norm(&c1), norm(&c2)],
    };
    if form.bidegree() != (2, 3) {
        return Err(Error::DegenerateChart(format!(
            "image form has bidegree {:?}, expected (2, 3)",
            form.bidegree()
        )));
    }
    if !form.restrict(curve, h).is_zero() {
        return Err(Error::Internal("image form does not vanish on the curve".into()));
    }
    let (fx, ft) = form.partials(curve, h);
    let x = FunctionElement::x(curve);
    Ok(EmbeddingData {
        curve: curve.clone(),
        a_div,
        h: h.clone(),
        canonical_basis: [FunctionElement::one(curve), x],
        pencil_basis: [FunctionElement::one(curve), h.clone()],
        form,
        fx,
        ft,
    })
}

/// A normal-bundle divisor and the auxiliary form that produced it.
#[derive(Clone, Debug)]
pub struct NormalBundle {
    pub form: BiForm,
    /// Restriction of `form` to the curve.
    pub section: FunctionElement,
    pub divisor: Divisor,
}

/// `6 inf + 2A + div(G(x, h))`: the zero divisor on `C` of the auxiliary
/// `(2,3)` form `G`, representing `O(C)|_C`.
pub fn normal_bundle_divisor(e: &EmbeddingData, g: &BiForm) -> Result<NormalBundle> {
    let section = g.restrict(&e.curve, &e.h);
    if section.is_zero() {
        return Err(Error::DegenerateChart("auxiliary form vanishes on the curve".into()));
    }
    let d = Divisor::infinity(6)
        .add(&e.a_div.scale(2))
        .add(&section.divisor()?);
    if !d.is_effective() || d.degree() != 12 {
        return Err(Error::Internal(format!("normal divisor {d} is not effective of degree 12")));
    }
    Ok(NormalBundle {
        form: g.clone(),
        section,
        divisor: d,
    })
}

/// `(a + b y) / h` with coprime-free numerators, for serialization.
pub(crate) fn function_from_integral(curve: &Curve, a: Poly, b: Poly, den: Poly) -> Result<FunctionElement> {
    Ok(FunctionElement::new(
        curve,
        RationalFunction::new(a, den.clone())?,
        RationalFunction::new(b, den)?,
    ))
}
