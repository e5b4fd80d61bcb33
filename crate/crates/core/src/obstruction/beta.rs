//! The extension class of `0 -> TC -> TX|_C -> N -> 0` as a functional on
//! `H^0(2K + N)`, the choice of `delta` and the obstruction scalar.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::Rng;

use crate::cohomology::{rr_space, PTorsionBundle, RRSpace};
use crate::error::{Error, Result};
use crate::fields::{Fe, Field};
use crate::hyperelliptic::{Curve, Differential, Divisor, FunctionElement, Place};
use crate::obstruction::embedding::{EmbeddingData, NormalBundle};

/// Global rational splitting `w / w(F)` with `w = mu d/dx + lambda d/dt`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub mu: Fe,
    pub lambda: Fe,
}

impl Splitting {
    /// Splitting along the fibers of `x`.
    pub fn vertical(field: &Field) -> Splitting {
        Splitting {
            mu: field.zero(),
            lambda: field.one(),
        }
    }

    pub fn horizontal(field: &Field) -> Splitting {
        Splitting {
            mu: field.one(),
            lambda: field.zero(),
        }
    }
}

/// Coefficients of `beta` against the basis of `L(4 inf + N)`, which is
/// identified with `H^0(2K + N)` via `phi -> phi (dx/y)^2 (x) G`.
#[derive(Clone, Debug)]
pub struct BetaFunctional {
    space: RRSpace,
    values: Vec<Fe>,
}

impl BetaFunctional {
    pub fn space(&self) -> &RRSpace {
        &self.space
    }

    pub fn values(&self) -> &[Fe] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn evaluate(&self, phi: &FunctionElement) -> Result<Fe> {
        let c = self.space.coordinates(phi).ok_or(Error::BundleMismatch)?;
        let fd = self.space.curve().field();
        Ok(fd.sum(c.iter().zip(&self.values).map(|(&a, &b)| fd.mul(a, b))))
    }

    /// Values on the basis of `L(4 inf + N - B)`.
    pub fn restricted(&self, b: &Divisor) -> Result<Vec<Fe>> {
        let sub = rr_space(self.space.curve(), &self.space.divisor().sub(b))?;
        sub.basis().iter().map(|phi| self.evaluate(phi)).collect()
    }
}

/// `x`-component of `w / w(F)` along the curve, or `None` when `w(F)`
/// vanishes identically.
fn x_component(e: &EmbeddingData, s: Splitting) -> Result<Option<FunctionElement>> {
    let wf = &e.fx.scale(s.mu) + &e.ft.scale(s.lambda);
    if wf.is_zero() {
        return Ok(None);
    }
    let num = FunctionElement::constant(&e.curve, s.mu);
    Ok(Some(num.div(&wf)?))
}

/// `beta` built from the global splitting `s` and, at each place where `s`
/// might fail to be regular, the vertical splitting (off the Weierstrass
/// places) or the horizontal one (on them). The pairing with
/// `phi (dx/y)^2 (x) G` is the sum of residues of
/// `phi G (chi_P - chi_s) dx / f` over those places.
pub fn beta_functional_with(e: &EmbeddingData, nb: &NormalBundle, s: Splitting) -> Result<BetaFunctional> {
    let curve = &e.curve;
    let chi_gen = x_component(e, s)?
        .ok_or_else(|| Error::DegenerateChart("global splitting is not transverse".into()))?;
    let chi_hor = x_component(e, Splitting::horizontal(curve.field()))?
        .ok_or_else(|| Error::DegenerateChart("horizontal splitting is not transverse".into()))?;
    let weier: BTreeSet<Place> = e.weierstrass_places().into_iter().collect();
    let mut bad: BTreeSet<Place> = weier.clone();
    bad.insert(Place::Infinity);
    bad.extend(e.a_div.support().cloned());
    let wf = &e.fx.scale(s.mu) + &e.ft.scale(s.lambda);
    bad.extend(wf.divisor()?.support().cloned());
    let finv = FunctionElement::from_poly(curve, curve.f().clone()).inv()?;
    let base = &nb.section * &finv;
    let mut kernels: Vec<(Place, FunctionElement)> = Vec::new();
    for pl in bad {
        let chi_p = if weier.contains(&pl) {
            chi_hor.clone()
        } else {
            FunctionElement::zero(curve)
        };
        let diff = &chi_p - &chi_gen;
        if !diff.is_zero() {
            kernels.push((pl, &base * &diff));
        }
    }
    let space = rr_space(curve, &Divisor::infinity(4).add(&nb.divisor))?;
    let fd = curve.field();
    let mut values = Vec::with_capacity(space.dim());
    for phi in space.basis() {
        let mut acc = fd.zero();
        for (pl, k) in &kernels {
            let r = Differential::new(phi * k).residue(pl)?;
            acc = fd.add(acc, r);
        }
        values.push(acc);
    }
    Ok(BetaFunctional { space, values })
}

pub fn beta_functional(e: &EmbeddingData, nb: &NormalBundle) -> Result<BetaFunctional> {
    beta_functional_with(e, nb, Splitting::vertical(e.curve.field()))
}

/// The divisor `D = div(delta) + N - R` of `delta` viewed as a section of
/// `N - L`.
pub fn delta_divisor(nb: &NormalBundle, l: &PTorsionBundle, delta: &FunctionElement) -> Result<Divisor> {
    Ok(delta.divisor()?.add(&nb.divisor).sub(l.rep()))
}

/// Whether `d` is 12 distinct places of degree 1.
pub fn is_reduced_rational(d: &Divisor) -> bool {
    d.degree() == 12 && d.iter().all(|(pl, n)| n == 1 && pl.degree() == 1)
}

/// A chosen section of `N - L` and its zero divisor.
#[derive(Clone, Debug)]
pub struct DeltaChoice {
    pub delta: FunctionElement,
    pub coords: Vec<Fe>,
    pub divisor: Divisor,
}

/// Seeded search for `delta` in `H^0(N - L)` vanishing on 12 distinct
/// rational points: ten are drawn at random, and the remaining two are the
/// residual zeros of the then unique section through them.
pub fn choose_delta<R: Rng + ?Sized>(
    e: &EmbeddingData,
    nb: &NormalBundle,
    l: &PTorsionBundle,
    attempts: usize,
    rng: &mut R,
) -> Result<DeltaChoice> {
    let curve = &e.curve;
    let nl = nb.divisor.sub(l.rep());
    let space = rr_space(curve, &nl)?;
    if space.dim() != 11 {
        return Err(Error::Internal(format!("h^0(N - L) = {}, expected 11", space.dim())));
    }
    let pts = curve.rational_places();
    if pts.len() < 12 {
        return Err(Error::ExtendField(format!("only {} rational points", pts.len())));
    }
    for _ in 0..attempts {
        let idx = sample(rng, pts.len(), 10);
        let mut through = Divisor::zero();
        for i in idx.iter() {
            through.add_at(pts[i].clone(), 1);
        }
        let sub = rr_space(curve, &nl.sub(&through))?;
        if sub.dim() != 1 {
            continue;
        }
        let delta = sub.basis()[0].clone();
        let divisor = delta_divisor(nb, l, &delta)?;
        if !is_reduced_rational(&divisor) {
            continue;
        }
        let coords = space
            .coordinates(&delta)
            .ok_or_else(|| Error::Internal("delta outside H^0(N - L)".into()))?;
        return Ok(DeltaChoice { delta, coords, divisor });
    }
    Err(Error::ExtendField("no section of N - L vanishes on 12 distinct rational points".into()))
}

/// `beta(delta gamma alpha)`, with `gamma` a regular differential and
/// `alpha` spanning `L(K + R)`.
pub fn obstruction_scalar(
    beta: &BetaFunctional,
    delta: &FunctionElement,
    gamma: &Differential,
    alpha: &FunctionElement,
) -> Result<Fe> {
    if alpha.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let curve: &Curve = alpha.curve();
    let gamma_f = gamma.coeff() * &FunctionElement::y(curve);
    beta.evaluate(&(&(delta * &gamma_f) * alpha))
}
